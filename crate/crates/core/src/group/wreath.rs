//! Wreath products `S_N x| A^N` with `A` finite abelian.
//!
//! Multiplication convention: `(sigma, a)(tau, b) = (sigma tau, (a o tau) + b)`
//! where `(a o tau)_i = a_{tau(i)}`. With this choice, writing
//! `g = tau (a)`, `h = theta (b)` and `g h^-1 = sigma (k_{theta^-1(1)}, ...)`
//! gives `a_j - b_j = k_j`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::ToPrimitive;

use super::{parse::wreath_group, FiniteGroup, Law};
use crate::abelian::{smith_normal_form, AbElem, FinAbGroup, IntMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement {
    /// Image array of the permutation on `0..N`.
    pub sigma: Vec<usize>,
    /// One element of `A` per position.
    pub tail: Vec<AbElem>,
}

impl WreathElement {
    pub fn identity(n: usize, a: &FinAbGroup) -> Self {
        WreathElement { sigma: (0..n).collect(), tail: vec![a.zero(); n] }
    }

    pub fn degree(&self) -> usize {
        self.sigma.len()
    }

    pub fn mul(&self, other: &Self, a: &FinAbGroup) -> Self {
        let sigma = other.sigma.iter().map(|&t| self.sigma[t]).collect();
        let tail = other.sigma.iter().zip(&other.tail).map(|(&t, b)| a.add(&self.tail[t], b)).collect();
        WreathElement { sigma, tail }
    }

    pub fn inv(&self, a: &FinAbGroup) -> Self {
        let n = self.degree();
        let mut sigma = vec![0; n];
        for (i, &s) in self.sigma.iter().enumerate() {
            sigma[s] = i;
        }
        let tail = sigma.iter().map(|&si| a.neg(&self.tail[si])).collect();
        WreathElement { sigma, tail }
    }

    /// Cycles of `sigma`, each listed from its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        perm_cycles(&self.sigma)
    }

    /// Sum of the tail over a cycle.
    pub fn monodromy(&self, cycle: &[usize], a: &FinAbGroup) -> AbElem {
        cycle.iter().fold(a.zero(), |acc, &i| a.add(&acc, &self.tail[i]))
    }

    fn encode(&self) -> Vec<u16> {
        let mut v: Vec<u16> = self.sigma.iter().map(|&s| s as u16).collect();
        for t in &self.tail {
            v.extend(t.iter().map(|&x| x as u16));
        }
        v
    }
}

pub fn perm_cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = perm[i];
        }
        out.push(cycle);
    }
    out
}

/// `S_N x| A^N` with `A` in invariant-factor coordinates.
pub fn wreath_product(n: usize, a: &FinAbGroup) -> Result<FiniteGroup> {
    wreath_product_with_cap(n, a, super::DEFAULT_ORDER_CAP)
}

pub fn wreath_product_with_cap(n: usize, a: &FinAbGroup, cap: u64) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::pre("wreath degree must be positive"));
    }
    let moduli: Vec<u16> = a.invariants().iter().map(|&m| m as u16).collect();
    wreath_group(n, &moduli, cap)
}

fn wreath_parts(g: &FiniteGroup) -> Result<(usize, FinAbGroup)> {
    match g.law() {
        Law::Wreath { degree, moduli } => {
            // tails stay in the coordinates of the group string, which need
            // not form a divisibility chain
            let a = FinAbGroup::raw(moduli.iter().map(|&m| m as u64).collect());
            Ok((*degree, a))
        }
        _ => Err(Error::pre("not a wreath product group")),
    }
}

impl FiniteGroup {
    /// The base group `A` of a wreath product, in the coordinates of the group string.
    pub fn wreath_base(&self) -> Result<(usize, FinAbGroup)> {
        wreath_parts(self)
    }

    pub fn wreath_element(&self, i: usize) -> Result<WreathElement> {
        let (n, a) = wreath_parts(self)?;
        let t = a.rank();
        let v = self.element(i);
        Ok(WreathElement {
            sigma: v[..n].iter().map(|&x| x as usize).collect(),
            tail: (0..n).map(|j| v[n + j * t..n + (j + 1) * t].iter().map(|&x| x as i64).collect()).collect(),
        })
    }

    pub fn wreath_index(&self, w: &WreathElement) -> Result<usize> {
        wreath_parts(self)?;
        self.index_of(&w.encode()).ok_or_else(|| Error::pre("element not in this wreath product"))
    }
}

/// Cycles of one type: common length and monodromy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBlock {
    pub length: usize,
    pub monodromy: AbElem,
    pub cycles: Vec<Vec<usize>>,
}

impl CycleBlock {
    pub fn multiplicity(&self) -> usize {
        self.cycles.len()
    }

    /// `z` on this block's positions, the identity elsewhere.
    pub fn restrict(&self, z: &WreathElement, a: &FinAbGroup) -> WreathElement {
        let mut out = WreathElement::identity(z.degree(), a);
        for &i in self.cycles.iter().flatten() {
            out.sigma[i] = z.sigma[i];
            out.tail[i] = z.tail[i].clone();
        }
        out
    }
}

/// Groups the cycles of `z` by (length, monodromy), sorted by that key.
pub fn cycle_type_blocks(g: &FiniteGroup, z: usize) -> Result<Vec<CycleBlock>> {
    let (_, a) = wreath_parts(g)?;
    let w = g.wreath_element(z)?;
    let mut blocks: BTreeMap<(usize, AbElem), Vec<Vec<usize>>> = BTreeMap::new();
    for cycle in w.cycles() {
        let key = (cycle.len(), w.monodromy(&cycle, &a));
        blocks.entry(key).or_default().push(cycle);
    }
    Ok(blocks.into_iter().map(|((length, monodromy), cycles)| CycleBlock { length, monodromy, cycles }).collect())
}

/// The abelian subgroup `B` of `S_m x| A^m` generated by
/// `c = (1 2 ... m)(u, 0, ..., 0)` and the diagonal copy of `A`.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    pub group: FinAbGroup,
    /// The distinguished element `c`.
    pub c: AbElem,
    /// Images of the basis elements of `A` (embedded diagonally).
    pub diagonal: Vec<AbElem>,
    /// Concrete elements of `B` inside `S_m x| A^m` with their coordinates.
    pub concrete: Vec<(WreathElement, AbElem)>,
}

pub fn central_extension_b(m: usize, a: &FinAbGroup, u: &[i64]) -> Result<CentralExtension> {
    if m == 0 {
        return Err(Error::pre("cycle length must be positive"));
    }
    if !a.contains(u) {
        return Err(Error::pre("monodromy must be an element of A"));
    }
    let mut c = WreathElement::identity(m, a);
    c.sigma = (0..m).map(|i| (i + 1) % m).collect();
    c.tail[0] = u.to_vec();
    let mut gens = vec![c];
    for i in 0..a.rank() {
        let mut e = a.zero();
        e[i] = 1;
        gens.push(WreathElement { sigma: (0..m).collect(), tail: vec![e; m] });
    }
    let k = gens.len();

    // closure with exponent vectors; each collision records a relation
    let id = WreathElement::identity(m, a);
    let mut exps: HashMap<WreathElement, Vec<i64>> = HashMap::from([(id.clone(), vec![0; k])]);
    let mut order = vec![id];
    let mut relations: Vec<Vec<i64>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let xe = exps[&order[x]].clone();
        for (i, g) in gens.iter().enumerate() {
            let y = order[x].mul(g, a);
            let mut ye = xe.clone();
            ye[i] += 1;
            match exps.get(&y) {
                Some(known) => {
                    let rel: Vec<i64> = ye.iter().zip(known).map(|(p, q)| p - q).collect();
                    if rel.iter().any(|&r| r != 0) {
                        relations.push(rel);
                    }
                }
                None => {
                    exps.insert(y.clone(), ye);
                    order.push(y);
                    queue.push_back(order.len() - 1);
                }
            }
        }
    }

    let snf = smith_normal_form(&IntMatrix::from_rows_with_cols(&relations, k));
    let diag: Vec<u64> = (0..k).map(|j| if j < snf.d.nrows() { snf.d[(j, j)].to_u64().unwrap() } else { 0 }).collect();
    if diag.contains(&0) {
        return Err(Error::pre("relation lattice is not of full rank"));
    }
    let kept: Vec<usize> = (0..k).filter(|&j| diag[j] > 1).collect();
    let group = FinAbGroup::from_invariants(&kept.iter().map(|&j| diag[j]).collect::<Vec<_>>())?;
    // exponent row x maps to x V, reduced on the kept coordinates
    let coords = |x: &[i64]| -> AbElem {
        let raw: Vec<i64> =
            kept.iter().map(|&j| (0..k).map(|i| x[i] * snf.v[(i, j)].to_i64().unwrap()).sum::<i64>()).collect();
        group.reduce(&raw)
    };
    let unit = |i: usize| {
        let mut e = vec![0; k];
        e[i] = 1;
        coords(&e)
    };
    let concrete = order
        .into_iter()
        .map(|w| {
            let x = coords(&exps[&w]);
            (w, x)
        })
        .collect();
    Ok(CentralExtension { c: unit(0), diagonal: (1..k).map(unit).collect(), group, concrete })
}

/// For `N = m r`, the element `z = (c, ..., c)` of `S_N x| A^N` (all cycles of
/// length `m` and monodromy `u`) together with generators of the expected
/// centralizer `S_r x| B^r`: block swaps, and `c` and the diagonal of `A`
/// placed in a single block.
pub fn block_centralizer_generators(
    m: usize,
    r: usize,
    a: &FinAbGroup,
    u: &[i64],
) -> (WreathElement, Vec<WreathElement>) {
    let n = m * r;
    let mut z = WreathElement::identity(n, a);
    for b in 0..r {
        for i in 0..m {
            z.sigma[b * m + i] = b * m + (i + 1) % m;
        }
        z.tail[b * m] = u.to_vec();
    }
    let mut gens = Vec::new();
    for b in 0..r {
        let mut cb = WreathElement::identity(n, a);
        for i in 0..m {
            cb.sigma[b * m + i] = z.sigma[b * m + i];
        }
        cb.tail[b * m] = u.to_vec();
        gens.push(cb);
        for j in 0..a.rank() {
            let mut e = a.zero();
            e[j] = 1;
            let mut d = WreathElement::identity(n, a);
            for i in 0..m {
                d.tail[b * m + i] = e.clone();
            }
            gens.push(d);
        }
    }
    for b in 0..r.saturating_sub(1) {
        let mut s = WreathElement::identity(n, a);
        for i in 0..m {
            s.sigma[b * m + i] = (b + 1) * m + i;
            s.sigma[(b + 1) * m + i] = b * m + i;
        }
        gens.push(s);
    }
    (z, gens)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::group::{centralizer, make_group};

    #[test]
    fn small_wreath_orders() {
        let z2 = FinAbGroup::cyclic(2);
        assert_eq!(wreath_product(1, &z2).unwrap().order(), 2);
        assert_eq!(wreath_product(2, &FinAbGroup::trivial()).unwrap().order(), 2);
        let d8 = wreath_product(2, &z2).unwrap();
        assert_eq!(d8.order(), 8);
        assert_eq!(d8.class_count(), 5);
        assert!(wreath_product(0, &z2).is_err());
    }

    #[test]
    fn element_round_trip_and_law_agree() {
        let g = make_group("wreath:3,cyclic:2x3").unwrap();
        let (_, a) = g.wreath_base().unwrap();
        for x in (0..g.order()).step_by(7) {
            let wx = g.wreath_element(x).unwrap();
            assert_eq!(g.wreath_index(&wx).unwrap(), x);
            for y in (0..g.order()).step_by(11) {
                let wy = g.wreath_element(y).unwrap();
                assert_eq!(g.wreath_index(&wx.mul(&wy, &a)).unwrap(), g.mul(x, y));
            }
            assert_eq!(g.wreath_index(&wx.inv(&a)).unwrap(), g.inv(x));
        }
    }

    /// g = tau (a), h = theta (b), y = g h^-1 = sigma (k_{theta^-1(1)}, ...):
    /// reading k off y must give a_j - b_j = k_j.
    #[test]
    fn difference_relation_for_g_h_inverse() {
        let g = make_group("wreath:3,cyclic:4").unwrap();
        let (_, a) = g.wreath_base().unwrap();
        for x in 0..g.order() {
            for y in (0..g.order()).step_by(5) {
                let gw = g.wreath_element(x).unwrap();
                let hw = g.wreath_element(y).unwrap();
                let yw = g.wreath_element(g.mul(x, g.inv(y))).unwrap();
                let tau = &gw.sigma;
                let theta = &hw.sigma;
                let mut theta_inv = [0; 3];
                for (i, &t) in theta.iter().enumerate() {
                    theta_inv[t] = i;
                }
                let sigma: Vec<usize> = theta_inv.iter().map(|&i| tau[i]).collect();
                assert_eq!(yw.sigma, sigma);
                for j in 0..3 {
                    // position i = theta(j) of y carries k_j
                    let k_j = &yw.tail[theta[j]];
                    assert_eq!(a.sub(&gw.tail[j], &hw.tail[j]), *k_j);
                }
            }
        }
    }

    #[test]
    fn cycle_blocks_examples() {
        let g = make_group("wreath:3,cyclic:2").unwrap();
        let blocks = cycle_type_blocks(&g, 0).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!((blocks[0].length, blocks[0].monodromy.clone()), (1, vec![0]));
        assert_eq!(blocks[0].multiplicity(), 3);

        let (_, a) = g.wreath_base().unwrap();
        let z = WreathElement { sigma: vec![1, 2, 0], tail: vec![vec![1], vec![0], vec![0]] };
        let zi = g.wreath_index(&z).unwrap();
        let blocks = cycle_type_blocks(&g, zi).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!((blocks[0].length, blocks[0].monodromy.clone()), (3, vec![1]));

        // product of block restrictions recovers z
        let w = g.wreath_element(17).unwrap();
        let blocks = cycle_type_blocks(&g, 17).unwrap();
        let prod = blocks.iter().fold(WreathElement::identity(3, &a), |acc, b| acc.mul(&b.restrict(&w, &a), &a));
        assert_eq!(prod, w);
        assert!(cycle_type_blocks(&make_group("sym:3").unwrap(), 0).is_err());
    }

    #[test]
    fn monodromy_is_conjugation_invariant() {
        let g = make_group("wreath:4,cyclic:3").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let key = |x: usize| -> Vec<(usize, AbElem, usize)> {
            cycle_type_blocks(&g, x).unwrap().into_iter().map(|b| (b.length, b.monodromy, b.cycles.len())).collect()
        };
        for _ in 0..200 {
            let z = rng.gen_range(0..g.order());
            let h = rng.gen_range(0..g.order());
            assert_eq!(key(z), key(g.conj(z, h)));
        }
    }

    #[test]
    fn central_extension_examples() {
        let z2 = FinAbGroup::cyclic(2);
        let b = central_extension_b(1, &z2, &[1]).unwrap();
        assert_eq!(b.group, z2);
        assert_eq!(b.c, vec![1]);

        let b = central_extension_b(2, &z2, &[0]).unwrap();
        assert_eq!(b.group.invariants(), &[2, 2]);

        let b = central_extension_b(2, &z2, &[1]).unwrap();
        assert_eq!(b.group.invariants(), &[4]);
        assert_eq!(b.group.element_order(&b.c), 4);
        // c^2 is the diagonal copy of u
        assert_eq!(b.group.scale(&b.c, 2), b.diagonal[0]);
    }

    #[test]
    fn central_extension_orders_and_coordinates() {
        let a = FinAbGroup::from_invariants(&[2, 4]).unwrap();
        for m in 1..=4 {
            for u in a.elements() {
                let b = central_extension_b(m, &a, &u).unwrap();
                assert_eq!(b.group.order(), m as u64 * a.order());
                assert_eq!(b.concrete.len() as u64, b.group.order());
                // coordinates are a homomorphism and a bijection
                let mut seen = std::collections::HashSet::new();
                for (w, x) in &b.concrete {
                    assert!(seen.insert(x.clone()));
                    let (w2, x2) = &b.concrete[seen.len() % b.concrete.len()];
                    let prod = w.mul(w2, &a);
                    let px = &b.concrete.iter().find(|(v, _)| *v == prod).unwrap().1;
                    assert_eq!(*px, b.group.add(x, x2));
                }
            }
        }
    }

    #[test]
    fn centralizer_of_uniform_cycle_type() {
        for (m, r, moduli, u) in [
            (2usize, 2usize, vec![2u64], vec![1i64]),
            (2, 2, vec![2], vec![0]),
            (1, 3, vec![2], vec![1]),
            (3, 1, vec![3], vec![2]),
            (2, 2, vec![3], vec![1]),
        ] {
            let a = FinAbGroup::from_invariants(&moduli).unwrap();
            let g = Arc::new(wreath_product(m * r, &a).unwrap());
            let (z, gens) = block_centralizer_generators(m, r, &a, &u);
            let zi = g.wreath_index(&z).unwrap();
            let cent = centralizer(&g, zi);
            let expected = (1..=r).product::<usize>() * (m * a.order() as usize).pow(r as u32);
            assert_eq!(cent.order(), expected, "m={m} r={r} A={a}");
            let idx: Vec<u32> = gens.iter().map(|w| g.wreath_index(w).unwrap() as u32).collect();
            assert!(idx.iter().all(|&x| g.commutes(x as usize, zi)));
            // the exhibited generators generate all of Z_z
            let mut inside = vec![false; g.order()];
            inside[0] = true;
            let mut queue = VecDeque::from([0usize]);
            let mut count = 1;
            while let Some(x) = queue.pop_front() {
                for &s in &idx {
                    let y = g.mul(x, s as usize);
                    if !inside[y] {
                        inside[y] = true;
                        count += 1;
                        queue.push_back(y);
                    }
                }
            }
            assert_eq!(count, expected);
        }
    }
}
