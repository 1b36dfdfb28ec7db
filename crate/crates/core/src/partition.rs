//! Pairs of set partitions over a finite abelian group `B`, and the linear
//! systems describing `g^n = h^n = z^s`, `g h^-1 = y` inside a centralizer
//! `S_r x| B^r`.

use num_bigint::BigUint;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::abelian::{solve_ab_system, torsion_subgroup, AbElem, AbLinearSystem, FinAbGroup, VarDomain};
use crate::error::{Error, Result};
use crate::group::wreath::{central_extension_b, perm_cycles};

/// A set partition of `{0, ..., r-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetPartition {
    r: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(r: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; r];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::pre("blocks must be nonempty"));
            }
            for &i in b {
                if i >= r || std::mem::replace(&mut seen[i], true) {
                    return Err(Error::pre(format!("point {i} is out of range or repeated")));
                }
            }
        }
        if seen.contains(&false) {
            return Err(Error::pre("blocks must cover the ground set"));
        }
        Ok(SetPartition { r, blocks })
    }

    pub fn singletons(r: usize) -> Self {
        SetPartition { r, blocks: (0..r).map(|i| vec![i]).collect() }
    }

    /// The cycles of a permutation of `{0, ..., r-1}`.
    pub fn from_permutation(perm: &[usize]) -> Self {
        SetPartition { r: perm.len(), blocks: perm_cycles(perm) }
    }

    pub fn ground_size(&self) -> usize {
        self.r
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Whether `s` (a sorted list) is a union of blocks.
    pub fn is_compatible(&self, s: &[usize]) -> bool {
        self.blocks.iter().all(|b| {
            let inside = b.iter().filter(|i| s.binary_search(i).is_ok()).count();
            inside == 0 || inside == b.len()
        })
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Minimal nonempty subsets that are unions of blocks of both partitions:
/// the connected components of the graph joining `P_i` to `Q_j` whenever
/// they meet. Each subset is sorted; they are ordered by smallest element.
pub fn compatible_subsets(p: &SetPartition, q: &SetPartition) -> Result<Vec<Vec<usize>>> {
    if p.r != q.r {
        return Err(Error::pre("partitions of different ground sets"));
    }
    let mut parent: Vec<usize> = (0..p.r).collect();
    for b in p.blocks.iter().chain(&q.blocks) {
        for w in b.windows(2) {
            let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[x.max(y)] = x.min(y);
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; p.r];
    for i in 0..p.r {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = comps.len();
            comps.push(Vec::new());
        }
        comps[slot[root]].push(i);
    }
    Ok(comps)
}

/// `sum_{k in P_i} b_k = p_i`, `sum_{k in Q_j} b_k = q_j` over `B`.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionSystem {
    pub group: FinAbGroup,
    pub p: SetPartition,
    pub q: SetPartition,
    pub p_targets: Vec<AbElem>,
    pub q_targets: Vec<AbElem>,
}

impl PartitionSystem {
    pub fn validate(&self) -> Result<()> {
        if self.p.r != self.q.r {
            return Err(Error::pre("partitions of different ground sets"));
        }
        if self.p_targets.len() != self.p.blocks.len() || self.q_targets.len() != self.q.blocks.len() {
            return Err(Error::pre("one target per block"));
        }
        if !self.p_targets.iter().chain(&self.q_targets).all(|t| self.group.contains(t)) {
            return Err(Error::pre("targets must be reduced elements of B"));
        }
        Ok(())
    }

    pub fn to_linear_system(&self) -> AbLinearSystem {
        let mut sys = AbLinearSystem::new(self.group.clone(), self.p.r);
        for (blocks, targets) in [(&self.p.blocks, &self.p_targets), (&self.q.blocks, &self.q_targets)] {
            for (b, t) in blocks.iter().zip(targets) {
                let terms: Vec<(usize, i64)> = b.iter().map(|&i| (i, 1)).collect();
                sys.add_equation(&terms, t);
            }
        }
        sys
    }
}

/// Solvable iff on every minimal compatible subset `S` the `P`-targets and
/// the `Q`-targets inside `S` have the same sum.
pub fn lemma_solvable(sys: &PartitionSystem) -> Result<bool> {
    sys.validate()?;
    let b = &sys.group;
    let comps = compatible_subsets(&sys.p, &sys.q)?;
    let mut comp_of = vec![0; sys.p.r];
    for (c, s) in comps.iter().enumerate() {
        for &i in s {
            comp_of[i] = c;
        }
    }
    let mut balance = vec![b.zero(); comps.len()];
    for (blk, t) in sys.p.blocks.iter().zip(&sys.p_targets) {
        let c = comp_of[blk[0]];
        balance[c] = b.add(&balance[c], t);
    }
    for (blk, t) in sys.q.blocks.iter().zip(&sys.q_targets) {
        let c = comp_of[blk[0]];
        balance[c] = b.sub(&balance[c], t);
    }
    Ok(balance.iter().all(|x| b.is_zero(x)))
}

/// The data `(tau, theta, k, n, s, c)` in `S_r x| B^r` for which one solves
/// `a_j - b_j = k_j` and, on each cycle `K` of `tau` (resp. `theta`),
/// `(n/d(K)) sum_{i in K} a_i = s c` (resp. with `b`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WreathPowerSystem {
    pub group: FinAbGroup,
    pub tau: Vec<usize>,
    pub theta: Vec<usize>,
    pub k: Vec<AbElem>,
    pub n: u64,
    pub s: i64,
    pub c: AbElem,
}

/// Result of [`build_wreath_system`].
#[derive(Clone, Debug)]
pub enum WreathSystem {
    Built {
        system: AbLinearSystem,
        cbar: AbElem,
    },
    /// No `cbar` with `l cbar = c`, so the equations have no solution.
    NoRoot,
}

impl WreathPowerSystem {
    pub fn r(&self) -> usize {
        self.tau.len()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.r();
        let is_perm = |p: &[usize]| {
            let mut seen = vec![false; p.len()];
            p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
        };
        if self.theta.len() != r || self.k.len() != r || !is_perm(&self.tau) || !is_perm(&self.theta) {
            return Err(Error::pre("tau, theta and k must all have length r"));
        }
        if self.n == 0 {
            return Err(Error::pre("n must be positive"));
        }
        if !self.k.iter().all(|x| self.group.contains(x)) || !self.group.contains(&self.c) {
            return Err(Error::pre("k and c must be reduced elements of B"));
        }
        for cyc in self.tau_cycles().iter().chain(&self.theta_cycles()) {
            if !self.n.is_multiple_of(cyc.len() as u64) {
                return Err(Error::pre(format!("cycle length {} does not divide n = {}", cyc.len(), self.n)));
            }
        }
        Ok(())
    }

    pub fn tau_cycles(&self) -> Vec<Vec<usize>> {
        perm_cycles(&self.tau)
    }

    pub fn theta_cycles(&self) -> Vec<Vec<usize>> {
        perm_cycles(&self.theta)
    }

    /// `l = lcm(n / d(K))` over the cycles of both permutations.
    pub fn ell(&self) -> u64 {
        self.tau_cycles().iter().chain(&self.theta_cycles()).map(|c| self.n / c.len() as u64).fold(1, |a, b| a.lcm(&b))
    }

    /// Every `cbar` in `B` with `l cbar = c`, in increasing order.
    pub fn cbar_choices(&self) -> Result<Vec<AbElem>> {
        let b = &self.group;
        let ell = self.ell();
        let mut sys = AbLinearSystem::new(b.clone(), 1);
        sys.add_equation(&[(0, ell as i64)], &self.c);
        let sol = solve_ab_system(&sys)?;
        let Some(w) = sol.witness else {
            return Ok(Vec::new());
        };
        let mut out: Vec<AbElem> = torsion_subgroup(b, ell)?.elements(b).iter().map(|t| b.add(&w[0], t)).collect();
        out.sort();
        Ok(out)
    }

    pub fn with_s(&self, s: i64) -> Self {
        WreathPowerSystem { s, ..self.clone() }
    }
}

/// The system in `b_j` (over `B`) and `v(K)` (over `B[n/d(K)]`) obtained by
/// substituting `a_j = b_j + k_j`:
///
/// ```text
/// sum_{i in K} b_i - v(K) = sum_{i in K} k_i + s (l d(K) / n) cbar   (K a cycle of tau)
/// sum_{j in K} b_j - v(K) = s (l d(K) / n) cbar                      (K a cycle of theta)
/// ```
///
/// Uses the smallest `cbar`; see [`build_wreath_system_with`].
pub fn build_wreath_system(w: &WreathPowerSystem) -> Result<WreathSystem> {
    w.validate()?;
    Ok(match w.cbar_choices()?.into_iter().next() {
        Some(cbar) => WreathSystem::Built { system: build_wreath_system_with(w, &cbar)?, cbar },
        None => WreathSystem::NoRoot,
    })
}

pub fn build_wreath_system_with(w: &WreathPowerSystem, cbar: &[i64]) -> Result<AbLinearSystem> {
    w.validate()?;
    let b = &w.group;
    let ell = w.ell();
    if !b.is_zero(&b.sub(&b.scale(cbar, ell as i64), &w.c)) {
        return Err(Error::pre("cbar does not satisfy l cbar = c"));
    }
    let r = w.r();
    let mut sys = AbLinearSystem::new(b.clone(), r);
    for (cycles, with_k) in [(w.tau_cycles(), true), (w.theta_cycles(), false)] {
        for cyc in cycles {
            let d = cyc.len() as u64;
            let v = sys.add_var(VarDomain::Torsion(w.n / d));
            let mut terms: Vec<(usize, i64)> = cyc.iter().map(|&i| (i, 1)).collect();
            terms.push((v, -1));
            let mut rhs = b.scale(cbar, w.s * (ell * d / w.n) as i64);
            if with_k {
                for &i in &cyc {
                    rhs = b.add(&rhs, &w.k[i]);
                }
            }
            sys.add_equation(&terms, &rhs);
        }
    }
    Ok(sys)
}

/// Residues in `1..m` coprime to `m` (just `[1]` when `m = 1`).
pub fn unit_residues(m: u64) -> Vec<i64> {
    if m <= 1 {
        return vec![1];
    }
    (1..m).filter(|s| s.gcd(&m) == 1).map(|s| s as i64).collect()
}

/// Units modulo `lcm(|B|, n)`.
pub fn default_s_range(w: &WreathPowerSystem) -> Vec<i64> {
    unit_residues(w.group.order().lcm(&w.n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SOutcome {
    pub s: i64,
    pub solvable: bool,
    pub count: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CbarOutcome {
    pub cbar: AbElem,
    pub per_s: Vec<SOutcome>,
    pub constant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SIndependenceReport {
    pub template: WreathPowerSystem,
    pub ell: u64,
    /// Empty when no `cbar` exists; the verdict is then trivially constant.
    pub cbar: Vec<CbarOutcome>,
}

impl SIndependenceReport {
    pub fn holds(&self) -> bool {
        self.cbar.iter().all(|c| c.constant)
    }
}

/// For every choice of `cbar`, solves the system at each `s` and checks
/// that solvability and the solution count do not change.
pub fn s_independence_check(w: &WreathPowerSystem, s_range: &[i64]) -> Result<SIndependenceReport> {
    w.validate()?;
    let mut cbar_out = Vec::new();
    for cbar in w.cbar_choices()? {
        let mut per_s = Vec::with_capacity(s_range.len());
        for &s in s_range {
            let sol = solve_ab_system(&build_wreath_system_with(&w.with_s(s), &cbar)?)?;
            let count = if sol.solvable { sol.count } else { BigUint::default() };
            per_s.push(SOutcome { s, solvable: sol.solvable, count: count.to_string() });
        }
        let constant = per_s.windows(2).all(|p| p[0].solvable == p[1].solvable && p[0].count == p[1].count);
        cbar_out.push(CbarOutcome { cbar, per_s, constant });
    }
    Ok(SIndependenceReport { template: w.clone(), ell: w.ell(), cbar: cbar_out })
}

/// Multiplicative order of a permutation.
fn perm_order(p: &[usize]) -> u64 {
    perm_cycles(p).iter().fold(1, |a, c| a.lcm(&(c.len() as u64)))
}

/// A random template: `B` is the central extension attached to a random
/// cycle length `m` and abelian `A` with `m |A| <= max_b`, `c` is its
/// distinguished element, `tau` and `theta` are random in `S_r` with
/// `r <= max_r`, and `n <= max_n` is a multiple of both of their orders.
pub fn random_template<R: Rng>(rng: &mut R, max_r: usize, max_b: u64, max_n: u64) -> Result<WreathPowerSystem> {
    let a_choices: [&[u64]; 6] = [&[], &[2], &[3], &[4], &[2, 2], &[2, 4]];
    let (m, a) = loop {
        let a = FinAbGroup::from_invariants(a_choices.choose(rng).unwrap())?;
        let m = rng.gen_range(1..=max_b.max(1));
        if m * a.order() <= max_b {
            break (m as usize, a);
        }
    };
    let u: AbElem = a.invariants().iter().map(|&q| rng.gen_range(0..q as i64)).collect();
    let ext = central_extension_b(m, &a, &u)?;
    let b = ext.group;
    loop {
        let r = rng.gen_range(1..=max_r.max(1));
        let mut tau: Vec<usize> = (0..r).collect();
        let mut theta = tau.clone();
        tau.shuffle(rng);
        theta.shuffle(rng);
        let base = perm_order(&tau).lcm(&perm_order(&theta));
        if base > max_n {
            continue;
        }
        let n = base * rng.gen_range(1..=max_n / base);
        let k = (0..r).map(|_| b.invariants().iter().map(|&q| rng.gen_range(0..q as i64)).collect()).collect();
        let s = *unit_residues(b.order().lcm(&n)).choose(rng).unwrap();
        return Ok(WreathPowerSystem { group: b, tau, theta, k, n, s, c: ext.c });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn part(r: usize, blocks: &[&[usize]]) -> SetPartition {
        SetPartition::new(r, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(SetPartition::new(2, vec![vec![0], vec![0, 1]]).is_err());
        assert!(SetPartition::new(3, vec![vec![0, 1]]).is_err());
        assert!(SetPartition::new(2, vec![vec![0, 1], vec![]]).is_err());
        assert_eq!(SetPartition::from_permutation(&[1, 0, 2]).blocks(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn components() {
        let s = SetPartition::singletons(3);
        assert_eq!(compatible_subsets(&s, &s).unwrap(), vec![vec![0], vec![1], vec![2]]);
        let p = part(2, &[&[0], &[1]]);
        let q = part(2, &[&[0, 1]]);
        assert_eq!(compatible_subsets(&p, &q).unwrap(), vec![vec![0, 1]]);
        let p = part(4, &[&[0, 1], &[2, 3]]);
        let q = part(4, &[&[1, 2], &[0], &[3]]);
        assert_eq!(compatible_subsets(&p, &q).unwrap(), vec![vec![0, 1, 2, 3]]);
    }

    /// All subsets compatible with both partitions, by enumeration.
    fn brute_compatible(p: &SetPartition, q: &SetPartition) -> Vec<Vec<usize>> {
        (1u32..1 << p.r)
            .map(|mask| (0..p.r).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| p.is_compatible(s) && q.is_compatible(s))
            .collect()
    }

    fn random_partition(rng: &mut ChaCha8Rng, r: usize) -> SetPartition {
        let labels: Vec<usize> = (0..r).map(|_| rng.gen_range(0..r)).collect();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; r];
        for (i, &l) in labels.iter().enumerate() {
            if slot[l] == usize::MAX {
                slot[l] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[slot[l]].push(i);
        }
        SetPartition::new(r, blocks).unwrap()
    }

    #[test]
    fn components_are_the_minimal_compatible_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let r = rng.gen_range(1..=6);
            let (p, q) = (random_partition(&mut rng, r), random_partition(&mut rng, r));
            let comps = compatible_subsets(&p, &q).unwrap();
            let all = brute_compatible(&p, &q);
            for c in &comps {
                assert!(p.is_compatible(c) && q.is_compatible(c));
                // minimal: no proper nonempty compatible subset
                assert!(!all.iter().any(|s| s.len() < c.len() && s.iter().all(|x| c.contains(x))));
            }
            assert_eq!(comps.iter().map(Vec::len).sum::<usize>(), r);
            // every compatible set is a union of components
            for s in &all {
                assert!(comps.iter().all(|c| c.iter().all(|x| s.contains(x)) || c.iter().all(|x| !s.contains(x))));
            }
        }
    }

    fn random_group(rng: &mut ChaCha8Rng) -> FinAbGroup {
        let choices: [&[u64]; 7] = [&[2], &[3], &[4], &[2, 2], &[6], &[8], &[2, 4]];
        FinAbGroup::from_invariants(choices.choose(rng).unwrap()).unwrap()
    }

    fn random_elem(rng: &mut ChaCha8Rng, b: &FinAbGroup) -> AbElem {
        b.invariants().iter().map(|&q| rng.gen_range(0..q as i64)).collect()
    }

    /// Exhaustive solvability over `B^r`.
    fn brute_solvable(sys: &PartitionSystem) -> bool {
        let b = &sys.group;
        let elems = b.elements();
        let r = sys.p.r;
        let total = elems.len().pow(r as u32);
        (0..total).any(|mut idx| {
            let x: Vec<&AbElem> = (0..r)
                .map(|_| {
                    let e = &elems[idx % elems.len()];
                    idx /= elems.len();
                    e
                })
                .collect();
            let ok = |blocks: &[Vec<usize>], targets: &[AbElem]| {
                blocks.iter().zip(targets).all(|(blk, t)| {
                    let sum = blk.iter().fold(b.zero(), |acc, &i| b.add(&acc, x[i]));
                    sum == *t
                })
            };
            ok(&sys.p.blocks, &sys.p_targets) && ok(&sys.q.blocks, &sys.q_targets)
        })
    }

    fn random_system(rng: &mut ChaCha8Rng, max_r: usize) -> PartitionSystem {
        let b = random_group(rng);
        let r = rng.gen_range(1..=max_r);
        let (p, q) = (random_partition(rng, r), random_partition(rng, r));
        let mut p_targets: Vec<AbElem> = p.blocks.iter().map(|_| random_elem(rng, &b)).collect();
        let q_targets: Vec<AbElem> = q.blocks.iter().map(|_| random_elem(rng, &b)).collect();
        // bias towards solvable instances by balancing one component half the time
        if rng.gen_bool(0.5) {
            let comps = compatible_subsets(&p, &q).unwrap();
            let c = &comps[0];
            let q_sum = q
                .blocks
                .iter()
                .zip(&q_targets)
                .filter(|(blk, _)| c.contains(&blk[0]))
                .fold(b.zero(), |acc, (_, t)| b.add(&acc, t));
            let mut others = b.zero();
            let mut first = None;
            for (i, blk) in p.blocks.iter().enumerate() {
                if c.contains(&blk[0]) {
                    if first.is_none() {
                        first = Some(i);
                    } else {
                        others = b.add(&others, &p_targets[i]);
                    }
                }
            }
            p_targets[first.unwrap()] = b.sub(&q_sum, &others);
        }
        PartitionSystem { group: b, p, q, p_targets, q_targets }
    }

    #[test]
    fn lemma_small_cases() {
        let b = FinAbGroup::cyclic(2);
        let p = part(2, &[&[0], &[1]]);
        let q = part(2, &[&[0, 1]]);
        for p1 in 0..2 {
            for p2 in 0..2 {
                for q1 in 0..2 {
                    let sys = PartitionSystem {
                        group: b.clone(),
                        p: p.clone(),
                        q: q.clone(),
                        p_targets: vec![vec![p1], vec![p2]],
                        q_targets: vec![vec![q1]],
                    };
                    assert_eq!(lemma_solvable(&sys).unwrap(), (p1 + p2) % 2 == q1);
                }
            }
        }
    }

    #[test]
    fn lemma_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut solvable = 0;
        for _ in 0..1000 {
            let sys = random_system(&mut rng, 4);
            let expected = brute_solvable(&sys);
            assert_eq!(lemma_solvable(&sys).unwrap(), expected, "{sys:?}");
            let sol = solve_ab_system(&sys.to_linear_system()).unwrap();
            assert_eq!(sol.solvable, expected);
            if expected {
                solvable += 1;
                let kernel = solve_ab_system(&sys.to_linear_system().homogeneous()).unwrap();
                assert_eq!(sol.count, kernel.count);
            }
        }
        assert!(solvable > 200 && solvable < 1000);
    }

    #[test]
    fn indecomposable_pairs_give_one_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen = 0;
        while seen < 200 {
            let sys = random_system(&mut rng, 4);
            if compatible_subsets(&sys.p, &sys.q).unwrap().len() != 1 {
                continue;
            }
            seen += 1;
            let b = &sys.group;
            let sp = sys.p_targets.iter().fold(b.zero(), |a, t| b.add(&a, t));
            let sq = sys.q_targets.iter().fold(b.zero(), |a, t| b.add(&a, t));
            assert_eq!(lemma_solvable(&sys).unwrap(), sp == sq);
        }
    }

    #[test]
    fn characteristic_functions_of_indecomposable_pairs() {
        // sum a_i 1_{P_i} = sum b_j 1_{Q_j} forces all a_i, b_j equal
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut checked = 0;
        while checked < 40 {
            let r = rng.gen_range(1..=4);
            let (p, q) = (random_partition(&mut rng, r), random_partition(&mut rng, r));
            if compatible_subsets(&p, &q).unwrap().len() != 1 {
                continue;
            }
            checked += 1;
            let m = 3i64;
            let (lp, lq) = (p.blocks.len() as u32, q.blocks.len() as u32);
            for code in 0..m.pow(lp + lq) {
                let coeffs: Vec<i64> = (0..lp + lq).map(|i| code / m.pow(i) % m).collect();
                let (a, bq) = coeffs.split_at(lp as usize);
                let mut f = vec![0i64; r];
                for (blk, &x) in p.blocks.iter().zip(a) {
                    blk.iter().for_each(|&i| f[i] += x);
                }
                for (blk, &x) in q.blocks.iter().zip(bq) {
                    blk.iter().for_each(|&i| f[i] -= x);
                }
                if f.iter().all(|v| v % m == 0) {
                    assert!(coeffs.iter().all(|&x| x == coeffs[0]));
                }
            }
        }
    }

    fn template(
        b: FinAbGroup,
        tau: Vec<usize>,
        theta: Vec<usize>,
        k: Vec<AbElem>,
        n: u64,
        c: AbElem,
    ) -> WreathPowerSystem {
        WreathPowerSystem { group: b, tau, theta, k, n, s: 1, c }
    }

    #[test]
    fn identity_permutations_with_n_one() {
        let b = FinAbGroup::cyclic(4);
        for k0 in 0..4 {
            for k1 in 0..4 {
                let w = template(b.clone(), vec![0, 1], vec![0, 1], vec![vec![k0], vec![k1]], 1, vec![1]);
                assert_eq!(w.ell(), 1);
                let WreathSystem::Built { system, cbar } = build_wreath_system(&w).unwrap() else {
                    panic!("cbar exists when l = 1");
                };
                assert_eq!(cbar, vec![1]);
                assert!(system.domains[2..].iter().all(|d| *d == VarDomain::Torsion(1)));
                let sol = solve_ab_system(&system).unwrap();
                assert_eq!(sol.solvable, k0 == 0 && k1 == 0);
            }
        }
    }

    #[test]
    fn cbar_enumeration() {
        let w = template(FinAbGroup::cyclic(4), vec![0], vec![0], vec![vec![0]], 2, vec![2]);
        assert_eq!(w.ell(), 2);
        assert_eq!(w.cbar_choices().unwrap(), vec![vec![1], vec![3]]);
        let w = template(FinAbGroup::cyclic(4), vec![0], vec![0], vec![vec![0]], 2, vec![1]);
        assert!(w.cbar_choices().unwrap().is_empty());
        assert!(matches!(build_wreath_system(&w).unwrap(), WreathSystem::NoRoot));
    }

    #[test]
    fn cycle_lengths_must_divide_n() {
        let w = template(FinAbGroup::cyclic(2), vec![1, 2, 0], vec![0, 1, 2], vec![vec![0]; 3], 2, vec![0]);
        assert!(matches!(build_wreath_system(&w), Err(Error::Precondition(_))));
    }

    /// Solvability of `a_j - b_j = k_j` with `(n/d) sum_K a = s c` on cycles of
    /// tau and `(n/d) sum_K b = s c` on cycles of theta, over `B^r`.
    fn brute_original(w: &WreathPowerSystem) -> bool {
        let b = &w.group;
        let elems = b.elements();
        let r = w.r();
        let sc = b.scale(&w.c, w.s);
        let total = elems.len().pow(r as u32);
        (0..total).any(|mut idx| {
            let bs: Vec<AbElem> = (0..r)
                .map(|_| {
                    let e = elems[idx % elems.len()].clone();
                    idx /= elems.len();
                    e
                })
                .collect();
            let a: Vec<AbElem> = (0..r).map(|j| b.add(&bs[j], &w.k[j])).collect();
            let check = |x: &[AbElem], cycles: Vec<Vec<usize>>| {
                cycles.iter().all(|cyc| {
                    let sum = cyc.iter().fold(b.zero(), |acc, &i| b.add(&acc, &x[i]));
                    b.scale(&sum, (w.n / cyc.len() as u64) as i64) == sc
                })
            };
            check(&a, w.tau_cycles()) && check(&bs, w.theta_cycles())
        })
    }

    #[test]
    fn reduced_system_matches_original_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut solvable = 0;
        let mut cases = 0;
        while cases < 400 {
            let mut w = random_template(&mut rng, 3, 8, 12).unwrap();
            if w.group.order().pow(w.r() as u32) > 5000 {
                continue;
            }
            // random c as well, to exercise the no-root branch
            if rng.gen_bool(0.3) {
                w.c = random_elem(&mut rng, &w.group);
            }
            cases += 1;
            let expected = brute_original(&w);
            let reduced = match build_wreath_system(&w).unwrap() {
                WreathSystem::NoRoot => false,
                WreathSystem::Built { system, .. } => solve_ab_system(&system).unwrap().solvable,
            };
            assert_eq!(reduced, expected, "{w:?}");
            solvable += expected as usize;
            for cbar in w.cbar_choices().unwrap() {
                let sys = build_wreath_system_with(&w, &cbar).unwrap();
                assert_eq!(solve_ab_system(&sys).unwrap().solvable, expected);
            }
        }
        assert!(solvable > 20, "only {solvable} solvable cases");
    }

    #[test]
    fn s_independence_on_random_templates() {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let mut with_root = 0;
        for _ in 0..300 {
            let w = random_template(&mut rng, 5, 12, 12).unwrap();
            let report = s_independence_check(&w, &default_s_range(&w)).unwrap();
            assert!(report.holds(), "{}", serde_json::to_string(&report).unwrap());
            with_root += !report.cbar.is_empty() as usize;
        }
        assert!(with_root > 100);
        let w = random_template(&mut rng, 3, 6, 6).unwrap();
        assert!(s_independence_check(&w, &[1, 1]).unwrap().holds());
    }

    #[test]
    fn random_templates_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let w = random_template(&mut rng, 5, 12, 12).unwrap();
            w.validate().unwrap();
            assert!(w.group.order() <= 12 && w.n <= 12 && w.r() <= 5);
        }
    }
}
