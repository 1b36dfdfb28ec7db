//! Finite abelian groups in invariant-factor form and inhomogeneous linear
//! systems over them.

mod snf;

pub use snf::{smith_normal_form, IntMatrix, Snf};

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of a [`FinAbGroup`]: one residue per invariant factor.
pub type AbElem = Vec<i64>;

/// `Z/m_1 x ... x Z/m_t` with `1 < m_1 | m_2 | ... | m_t`.
///
/// The trivial group has no factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    invariants: Vec<u64>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup { invariants: vec![] }
    }

    pub fn cyclic(m: u64) -> Self {
        Self::normalized(&[m])
    }

    /// Takes factors already in invariant form. Factors equal to 1 are dropped.
    pub fn from_invariants(factors: &[u64]) -> Result<Self> {
        let invariants: Vec<u64> = factors.iter().copied().filter(|&m| m != 1).collect();
        if invariants.contains(&0) {
            return Err(Error::pre("invariant factors must be positive"));
        }
        if invariants.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::pre(format!("{factors:?} is not a divisibility chain")));
        }
        Ok(FinAbGroup { invariants })
    }

    /// The invariant-factor form of `Z/m_1 x ... x Z/m_k` for arbitrary
    /// positive moduli.
    pub fn normalized(moduli: &[u64]) -> Self {
        let n = moduli.len();
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut row = vec![0; n];
                row[i] = moduli[i] as i64;
                row
            })
            .collect();
        let snf = smith_normal_form(&IntMatrix::from_rows_with_cols(&rows, n));
        let invariants = snf
            .diagonal()
            .iter()
            .map(|d| d.to_u64().expect("invariant factor fits in u64"))
            .filter(|&d| d != 1)
            .collect();
        FinAbGroup { invariants }
    }

    /// Coordinate-wise `Z/m_1 x ... x Z/m_k` without normalizing; used for
    /// groups given in the coordinates of a group string.
    pub(crate) fn raw(moduli: Vec<u64>) -> Self {
        FinAbGroup { invariants: moduli }
    }

    /// Parses `cyclic:<m>[x<m>...]` and normalizes.
    pub fn parse(spec: &str) -> Result<Self> {
        let moduli = crate::group::parse_cyclic_moduli(spec)?;
        Ok(Self::normalized(&moduli.iter().map(|&m| m as u64).collect::<Vec<_>>()))
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.iter().fold(1, |acc, m| acc.lcm(m))
    }

    pub fn zero(&self) -> AbElem {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, x: &[i64]) -> AbElem {
        x.iter().zip(&self.invariants).map(|(&v, &m)| v.rem_euclid(m as i64)).collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> AbElem {
        a.iter().zip(b).zip(&self.invariants).map(|((&x, &y), &m)| (x + y).rem_euclid(m as i64)).collect()
    }

    pub fn neg(&self, a: &[i64]) -> AbElem {
        self.scale(a, -1)
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> AbElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &[i64], k: i64) -> AbElem {
        a.iter()
            .zip(&self.invariants)
            .map(|(&x, &m)| {
                let m = m as i128;
                ((x as i128 * k as i128).rem_euclid(m)) as i64
            })
            .collect()
    }

    pub fn is_zero(&self, a: &[i64]) -> bool {
        self.reduce(a).iter().all(|&x| x == 0)
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        a.len() == self.rank() && a.iter().zip(&self.invariants).all(|(&x, &m)| x >= 0 && (x as u64) < m)
    }

    /// All elements in lexicographic order of residues.
    pub fn elements(&self) -> Vec<AbElem> {
        let mut out = vec![self.zero()];
        for (i, &m) in self.invariants.iter().enumerate() {
            let prev = std::mem::take(&mut out);
            for x in prev {
                for r in 0..m as i64 {
                    let mut y = x.clone();
                    y[i] = r;
                    out.push(y);
                }
            }
        }
        out
    }

    /// Order of an element.
    pub fn element_order(&self, a: &[i64]) -> u64 {
        a.iter().zip(&self.invariants).map(|(&x, &m)| m / (x.unsigned_abs()).gcd(&m)).fold(1, |acc, o| acc.lcm(&o))
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "cyclic:1");
        }
        let parts: Vec<String> = self.invariants.iter().map(u64::to_string).collect();
        write!(f, "cyclic:{}", parts.join("x"))
    }
}

/// `B[k] = {v : k v = 0}` together with its inclusion into `B`.
#[derive(Clone, Debug)]
pub struct TorsionSubgroup {
    pub group: FinAbGroup,
    /// Image in `B` of each generator of `group`, in order.
    pub inclusion: Vec<AbElem>,
}

impl TorsionSubgroup {
    pub fn embed(&self, ambient: &FinAbGroup, x: &[i64]) -> AbElem {
        let mut out = ambient.zero();
        for (coef, image) in x.iter().zip(&self.inclusion) {
            out = ambient.add(&out, &ambient.scale(image, *coef));
        }
        out
    }

    pub fn elements(&self, ambient: &FinAbGroup) -> Vec<AbElem> {
        self.group.elements().iter().map(|x| self.embed(ambient, x)).collect()
    }
}

pub fn torsion_subgroup(b: &FinAbGroup, k: u64) -> Result<TorsionSubgroup> {
    if k == 0 {
        return Err(Error::pre("torsion index must be positive"));
    }
    let mut factors = Vec::new();
    let mut inclusion = Vec::new();
    for (i, &m) in b.invariants.iter().enumerate() {
        let g = k.gcd(&m);
        if g == 1 {
            continue;
        }
        factors.push(g);
        let mut image = b.zero();
        image[i] = (m / g) as i64;
        inclusion.push(image);
    }
    // gcd(k, m_i) | gcd(k, m_{i+1}) whenever m_i | m_{i+1}
    Ok(TorsionSubgroup { group: FinAbGroup::from_invariants(&factors)?, inclusion })
}

/// Where a variable of an [`AbLinearSystem`] ranges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarDomain {
    /// The whole ambient group `B`.
    Full,
    /// The torsion subgroup `B[k]`.
    Torsion(u64),
}

/// `sum_j coeffs[i][j] * x_j = rhs[i]` in `B`, with each `x_j` in its domain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbLinearSystem {
    pub group: FinAbGroup,
    pub coeffs: Vec<Vec<i64>>,
    pub domains: Vec<VarDomain>,
    pub rhs: Vec<AbElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbSolution {
    pub solvable: bool,
    pub count: BigUint,
    pub witness: Option<Vec<AbElem>>,
}

impl AbLinearSystem {
    pub fn new(group: FinAbGroup, num_vars: usize) -> Self {
        AbLinearSystem { group, coeffs: Vec::new(), domains: vec![VarDomain::Full; num_vars], rhs: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn num_equations(&self) -> usize {
        self.coeffs.len()
    }

    /// Appends a variable and returns its index.
    pub fn add_var(&mut self, domain: VarDomain) -> usize {
        self.domains.push(domain);
        for row in &mut self.coeffs {
            row.push(0);
        }
        self.domains.len() - 1
    }

    /// Appends an equation given as sparse `(var, coefficient)` terms.
    pub fn add_equation(&mut self, terms: &[(usize, i64)], rhs: &[i64]) {
        let mut row = vec![0; self.num_vars()];
        for &(var, c) in terms {
            row[var] += c;
        }
        self.coeffs.push(row);
        self.rhs.push(self.group.reduce(rhs));
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.num_vars();
        if self.coeffs.iter().any(|r| r.len() != v) {
            return Err(Error::pre("coefficient rows must have one entry per variable"));
        }
        if self.rhs.len() != self.coeffs.len() {
            return Err(Error::pre("one right-hand side per equation"));
        }
        if self.rhs.iter().any(|b| b.len() != self.group.rank()) {
            return Err(Error::pre("right-hand side outside the target group"));
        }
        if self.domains.contains(&VarDomain::Torsion(0)) {
            return Err(Error::pre("torsion index must be positive"));
        }
        Ok(())
    }

    /// Whether `x` satisfies every equation and domain constraint.
    pub fn is_solution(&self, x: &[AbElem]) -> bool {
        let b = &self.group;
        let in_domains = x.iter().zip(&self.domains).all(|(xi, d)| match d {
            VarDomain::Full => true,
            VarDomain::Torsion(k) => b.is_zero(&b.scale(xi, *k as i64)),
        });
        in_domains
            && self.coeffs.iter().zip(&self.rhs).all(|(row, rhs)| {
                let mut acc = b.zero();
                for (xi, &c) in x.iter().zip(row) {
                    acc = b.add(&acc, &b.scale(xi, c));
                }
                acc == *rhs
            })
    }

    /// The system with every right-hand side set to zero.
    pub fn homogeneous(&self) -> Self {
        let mut out = self.clone();
        for r in &mut out.rhs {
            *r = self.group.zero();
        }
        out
    }
}

/// Exact solvability, solution count and a witness.
///
/// Each invariant factor `Z/m` of `B` is handled separately. A variable
/// restricted to `(Z/m)[k]` is written `(m/g) y` with `g = gcd(k, m)` and
/// `y` in `Z/g`. The scaled integer matrix `M` is brought to Smith form
/// `U M V = D`; with `c = U b` the system is solvable iff
/// `gcd(d_i, m) | c_i` on the diagonal and `m | c_i` below it, and the
/// number of solutions is `prod g_j / |M Z^v mod m|`.
pub fn solve_ab_system(sys: &AbLinearSystem) -> Result<AbSolution> {
    sys.validate()?;
    let nv = sys.num_vars();
    let ne = sys.num_equations();
    let mut count = BigUint::one();
    let mut solvable = true;
    let mut witness = vec![sys.group.zero(); nv];

    for (t, &m) in sys.group.invariants().iter().enumerate() {
        let m_big = BigInt::from(m);
        let step: Vec<u64> = sys
            .domains
            .iter()
            .map(|d| match d {
                VarDomain::Full => 1,
                VarDomain::Torsion(k) => m / k.gcd(&m),
            })
            .collect();
        let scaled: Vec<Vec<i64>> =
            sys.coeffs.iter().map(|row| row.iter().zip(&step).map(|(&a, &s)| a * s as i64).collect()).collect();
        let snf = smith_normal_form(&IntMatrix::from_rows_with_cols(&scaled, nv));
        let b: Vec<BigInt> = sys.rhs.iter().map(|r| BigInt::from(r[t])).collect();
        let c = snf.u.apply(&b);

        let rank_bound = ne.min(nv);
        let mut w = vec![BigInt::zero(); nv];
        let mut image = BigUint::one();
        for i in 0..ne {
            let ci = c[i].mod_floor(&m_big);
            if i < rank_bound {
                let di = snf.d[(i, i)].mod_floor(&m_big);
                let g = di.gcd(&m_big);
                if !ci.is_multiple_of(&g) {
                    solvable = false;
                    continue;
                }
                image *= (&m_big / &g).to_biguint().unwrap();
                if !di.is_zero() {
                    let modulus = &m_big / &g;
                    let inv = mod_inverse(&(&di / &g), &modulus);
                    w[i] = ((&ci / &g) * inv).mod_floor(&modulus);
                }
            } else if !ci.is_zero() {
                solvable = false;
            }
        }
        if !solvable {
            break;
        }
        let domain_size: BigUint = step.iter().map(|&s| BigUint::from(m / s)).product();
        count *= domain_size / image;

        let y = snf.v.apply(&w);
        for j in 0..nv {
            let xj = (&y[j] * BigInt::from(step[j])).mod_floor(&m_big);
            witness[j][t] = xj.to_i64().unwrap();
        }
    }

    if !solvable {
        return Ok(AbSolution { solvable: false, count: BigUint::zero(), witness: None });
    }
    debug_assert!(sys.is_solution(&witness));
    Ok(AbSolution { solvable: true, count, witness: Some(witness) })
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}


#[cfg(test)]
mod props {
    use super::tests::brute_force_count;
    use super::*;
    use proptest::prelude::*;

    fn group_strategy() -> impl Strategy<Value = FinAbGroup> {
        prop_oneof![
            Just(vec![2]),
            Just(vec![3]),
            Just(vec![4]),
            Just(vec![2, 2]),
            Just(vec![6]),
            Just(vec![2, 4]),
            Just(vec![9]),
        ]
        .prop_map(|f| FinAbGroup::from_invariants(&f).unwrap())
    }

    fn system_strategy() -> impl Strategy<Value = AbLinearSystem> {
        (group_strategy(), 1usize..=3, 0usize..=3).prop_flat_map(|(b, nv, ne)| {
            let rank = b.rank();
            let inv = b.invariants().to_vec();
            (
                Just(b),
                proptest::collection::vec(proptest::collection::vec(-4i64..5, nv), ne),
                proptest::collection::vec(
                    prop_oneof![Just(VarDomain::Full), (1u64..7).prop_map(VarDomain::Torsion)],
                    nv,
                ),
                proptest::collection::vec(proptest::collection::vec(0i64..36, rank), ne),
            )
                .prop_map(move |(b, coeffs, domains, rhs)| {
                    let rhs =
                        rhs.into_iter().map(|r| r.iter().zip(&inv).map(|(&x, &m)| x % m as i64).collect()).collect();
                    AbLinearSystem { group: b, coeffs, domains, rhs }
                })
        })
    }

    proptest! {
        #[test]
        fn count_matches_brute_force(sys in system_strategy()) {
            let s = solve_ab_system(&sys).unwrap();
            prop_assert_eq!(s.count.clone(), BigUint::from(brute_force_count(&sys)));
            prop_assert_eq!(s.solvable, s.witness.is_some());
            if let Some(w) = &s.witness {
                prop_assert!(sys.is_solution(w));
            }
        }

        #[test]
        fn solvable_count_equals_kernel_size(sys in system_strategy()) {
            let s = solve_ab_system(&sys).unwrap();
            if s.solvable {
                let h = solve_ab_system(&sys.homogeneous()).unwrap();
                prop_assert_eq!(s.count, h.count);
            }
        }
    }
}
