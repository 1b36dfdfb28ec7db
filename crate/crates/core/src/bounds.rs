//! The group of substitutions `x -> x + a_2 x^2 + ... + a_{p+1} x^{p+1}`
//! over `F_p` modulo `x^{p+2}`, its Lie algebra of vector fields
//! `L_i = x^{i+1} d/dx`, and the count of irreducible representations of
//! the quantum double attached to it.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{centralizer, parse_is_prime, Family, FiniteGroup, Law, DEFAULT_ORDER_CAP};

/// Above this order `k(D(G))` is not computed by [`centralizer_report`].
pub const K_DOUBLE_LIMIT: usize = 100_000;

pub fn trunc_group(p: u16) -> Result<FiniteGroup> {
    trunc_group_with_cap(p, DEFAULT_ORDER_CAP)
}

/// Elements are listed in lexicographic order of `(a_2, ..., a_{p+1})`;
/// the generators are `x + x^k` for `k = 2, ..., p+1`.
pub fn trunc_group_with_cap(p: u16, cap: u64) -> Result<FiniteGroup> {
    if !parse_is_prime(p as u64) {
        return Err(Error::pre(format!("{p} is not prime")));
    }
    let order = (p as u128).checked_pow(p as u32).unwrap_or(u128::MAX);
    if order > cap as u128 {
        return Err(Error::ResourceCap { order, cap });
    }
    let width = p as usize;
    let mut elements = Vec::with_capacity(order as usize);
    let mut cur = vec![0u16; width];
    for _ in 0..order {
        elements.push(cur.clone());
        for k in (0..width).rev() {
            cur[k] += 1;
            if cur[k] < p {
                break;
            }
            cur[k] = 0;
        }
    }
    // e_k sits at index p^(p-1-k)
    let generators = (0..width).map(|k| (p as u32).pow((width - 1 - k) as u32)).collect();
    Ok(FiniteGroup::from_elements(Family::TruncSeries(p), Law::TruncSeries { p }, elements, generators))
}

/// Polynomials over `F_p` truncated at degree `p+1` (low degree first).
#[derive(Clone, Debug, PartialEq, Eq)]
struct TruncPoly {
    p: u32,
    c: Vec<u32>,
}

impl TruncPoly {
    fn zero(p: u32) -> Self {
        TruncPoly { p, c: vec![0; p as usize + 2] }
    }

    fn from_substitution(p: u32, a: &[u16]) -> Self {
        let mut f = Self::zero(p);
        f.c[1] = 1;
        for (k, &x) in a.iter().enumerate() {
            f.c[k + 2] = x as u32;
        }
        f
    }

    fn mul(&self, other: &Self) -> Self {
        let len = self.c.len();
        let mut out = Self::zero(self.p);
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.c.iter().enumerate().take(len - i) {
                out.c[i + j] = (out.c[i + j] + x * y) % self.p;
            }
        }
        out
    }

    fn add_scaled(&mut self, other: &Self, k: u32) {
        for (x, y) in self.c.iter_mut().zip(&other.c) {
            *x = (*x + k * y) % self.p;
        }
    }

    fn derivative(&self) -> Self {
        let mut out = Self::zero(self.p);
        for k in 1..self.c.len() {
            out.c[k - 1] = (k as u32 % self.p) * self.c[k] % self.p;
        }
        out
    }

    /// `self(inner)`; `inner` must have no constant term.
    fn compose(&self, inner: &Self) -> Self {
        let mut out = Self::zero(self.p);
        out.c[0] = self.c[0];
        let mut power = inner.clone();
        for k in 1..self.c.len() {
            out.add_scaled(&power, self.c[k]);
            power = power.mul(inner);
        }
        out
    }
}

fn inverse_mod(x: u32, p: u32) -> u32 {
    (1..p).find(|&y| x * y % p == 1).expect("unit mod p")
}

/// `sum_i c_i L_i` with `L_i = x^{i+1} d/dx`, `i = 1..=p`, over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VectorField {
    pub p: u32,
    /// `coeffs[i-1]` is the coefficient of `L_i`.
    pub coeffs: Vec<u32>,
}

impl VectorField {
    pub fn zero(p: u32) -> Self {
        VectorField { p, coeffs: vec![0; p as usize] }
    }

    /// `L_i`, or zero when `i > p`.
    pub fn basis(p: u32, i: usize) -> Self {
        let mut v = Self::zero(p);
        if (1..=p as usize).contains(&i) {
            v.coeffs[i - 1] = 1;
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorField {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + b) % self.p).collect(),
        }
    }

    pub fn scale(&self, k: u32) -> Self {
        VectorField { p: self.p, coeffs: self.coeffs.iter().map(|a| a * (k % self.p) % self.p).collect() }
    }

    /// Lowest `i` with a nonzero `L_i` coefficient.
    pub fn lowest_index(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0).map(|i| i + 1)
    }

    /// Coefficient polynomial `a(x)` of `a(x) d/dx`.
    fn poly(&self) -> TruncPoly {
        let mut f = TruncPoly::zero(self.p);
        for (i, &c) in self.coeffs.iter().enumerate() {
            f.c[i + 2] = c;
        }
        f
    }

    fn from_poly(f: &TruncPoly) -> Self {
        debug_assert!(f.c[0] == 0 && f.c[1] == 0);
        VectorField { p: f.p, coeffs: f.c[2..].to_vec() }
    }
}

/// `[L_i, L_j] = (j - i) L_{i+j}`, with `L_k = 0` for `k > p`.
pub fn lie_bracket(v: &VectorField, w: &VectorField) -> VectorField {
    let p = v.p;
    let mut out = VectorField::zero(p);
    for (i, &a) in v.coeffs.iter().enumerate() {
        for (j, &b) in w.coeffs.iter().enumerate() {
            let (i, j) = (i + 1, j + 1);
            if a == 0 || b == 0 || i + j > p as usize {
                continue;
            }
            let diff = (j as i64 - i as i64).rem_euclid(p as i64) as u32;
            let k = i + j - 1;
            out.coeffs[k] = (out.coeffs[k] + a * b % p * diff) % p;
        }
    }
    out
}

/// Time-one flow of `v`: `x -> sum_k v^k(x) / k!`, truncated.
///
/// The iterates `v^k(x)` are taken over the integers with coefficients lifted
/// to `0..p`; a nonzero iterate with `k >= p` is an error.
pub fn exp_vf(v: &VectorField) -> Result<Vec<u16>> {
    let p = v.p as i128;
    let len = v.p as usize + 2;
    let a: Vec<i128> = v.poly().c.iter().map(|&c| c as i128).collect();
    let mut term = vec![0i128; len];
    term[1] = 1;
    let mut sum: Vec<i128> = term.clone();
    let mut fact_inv = 1i128;
    for k in 1u32.. {
        let deriv: Vec<i128> = (1..len).map(|j| j as i128 * term[j]).collect();
        let mut next = vec![0i128; len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in deriv.iter().enumerate().take(len - i) {
                next[i + j] += x * y;
            }
        }
        term = next;
        if term.iter().all(|&c| c == 0) {
            break;
        }
        if k >= v.p {
            return Err(Error::UnsupportedExponent(k));
        }
        fact_inv = fact_inv * inverse_mod(k, v.p) as i128 % p;
        for (s, t) in sum.iter_mut().zip(&term) {
            *s = (*s + t.rem_euclid(p) * fact_inv) % p;
        }
    }
    Ok(sum[2..].iter().map(|&c| c as u16).collect())
}

/// Pushforward of `v` along the substitution `phi`:
/// `(phi_* v)(y) = phi'(psi(y)) a(psi(y))` with `psi = phi^-1`.
pub fn vf_pushforward(phi: &[u16], v: &VectorField) -> VectorField {
    let p = v.p;
    let law = Law::TruncSeries { p: p as u16 };
    let mut psi = vec![0u16; p as usize];
    law.invert(phi, &mut psi);
    let phi = TruncPoly::from_substitution(p, phi);
    let psi = TruncPoly::from_substitution(p, &psi);
    let out = phi.derivative().compose(&psi).mul(&v.poly().compose(&psi));
    VectorField::from_poly(&out)
}

/// All of `F_p^p` as vector fields, in lexicographic order.
fn all_vector_fields(p: u32) -> Vec<VectorField> {
    let n = (p as usize).pow(p);
    let mut out = Vec::with_capacity(n);
    let mut cur = vec![0u32; p as usize];
    for _ in 0..n {
        out.push(VectorField { p, coeffs: cur.clone() });
        for k in (0..p as usize).rev() {
            cur[k] += 1;
            if cur[k] < p {
                break;
            }
            cur[k] = 0;
        }
    }
    out
}

/// Orbits of the pushforward action on the Lie algebra, each sorted, in
/// order of their smallest member.
pub fn adjoint_orbits(group: &FiniteGroup) -> Result<Vec<Vec<VectorField>>> {
    let p = match group.law() {
        Law::TruncSeries { p } => *p as u32,
        _ => return Err(Error::pre("not a truncated substitution group")),
    };
    let fields = all_vector_fields(p);
    let index: HashMap<&VectorField, usize> = fields.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let gens: Vec<&[u16]> = group.generators().iter().map(|&g| group.element(g as usize)).collect();
    let mut seen = vec![false; fields.len()];
    let mut orbits = Vec::new();
    for start in 0..fields.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let j = index[&vf_pushforward(g, &fields[i])];
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                    queue.push_back(j);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit.into_iter().map(|i| fields[i].clone()).collect());
    }
    Ok(orbits)
}

/// Whether `v` has the shape `a L_i + b L_{2i}` with `a != 0` (or is zero).
pub fn is_orbit_normal_form(v: &VectorField) -> bool {
    match v.lowest_index() {
        None => true,
        Some(i) => v.coeffs.iter().enumerate().all(|(k, &c)| c == 0 || k + 1 == i || k + 1 == 2 * i),
    }
}

/// Number of irreducible representations of `D(G)`: the sum over classes
/// `[y]` of the class number of `Z_y`.
pub fn k_double(group: &Arc<FiniteGroup>) -> u64 {
    group.classes().classes.iter().map(|c| centralizer(group, c.representative).group.class_count() as u64).sum()
}

/// Number of orbits of commuting pairs `(g, h)` under simultaneous
/// conjugation, found by breadth-first search over the pairs.
pub fn k_double_by_pairs(group: &FiniteGroup) -> u64 {
    let n = group.order();
    let partners: Vec<Vec<u32>> =
        (0..n).map(|g| (0..n).filter(|&h| group.commutes(g, h)).map(|h| h as u32).collect()).collect();
    let mut offset = vec![0usize; n + 1];
    for g in 0..n {
        offset[g + 1] = offset[g] + partners[g].len();
    }
    let pair_id = |g: usize, h: usize| offset[g] + partners[g].binary_search(&(h as u32)).unwrap();
    let gens: Vec<(usize, usize)> = group.generators().iter().map(|&s| (s as usize, group.inv(s as usize))).collect();
    let mut seen = vec![false; offset[n]];
    let mut orbits = 0;
    let mut queue = VecDeque::new();
    for g in 0..n {
        for &h in &partners[g] {
            let id = pair_id(g, h as usize);
            if seen[id] {
                continue;
            }
            orbits += 1;
            seen[id] = true;
            queue.push_back((g, h as usize));
            while let Some((a, b)) = queue.pop_front() {
                for &(s, si) in &gens {
                    let a2 = group.mul(group.mul(si, a), s);
                    let b2 = group.mul(group.mul(si, b), s);
                    let id2 = pair_id(a2, b2);
                    if !seen[id2] {
                        seen[id2] = true;
                        queue.push_back((a2, b2));
                    }
                }
            }
        }
    }
    orbits
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub p: u32,
    pub group_order: u64,
    /// `k(G)`.
    pub class_count: u64,
    pub p_cubed: u64,
    /// `g = exp(L_{(p+1)/2})` as `(a_2, ..., a_{p+1})`.
    pub g: Vec<u16>,
    pub centralizer_order: u64,
    /// `p^{(p+1)/2}`.
    pub expected_centralizer_order: u64,
    pub centralizer_abelian: bool,
    pub centralizer_exponent: u64,
    /// `k(D(G))`, when the group is small enough to compute it.
    pub k_double: Option<u64>,
    /// `((p+1)/2) ln p`.
    pub witness_log: f64,
    /// `ln k(Z_g)`, the certified lower bound on `ln k(D(G))`.
    pub certified_log: f64,
    pub violations: Vec<String>,
}

/// Builds the substitution group for an odd prime `p`, computes its class
/// number, the centralizer of `g = exp(L_{(p+1)/2})` and, below
/// [`K_DOUBLE_LIMIT`], the number of irreducible `D(G)`-modules.
pub fn centralizer_report(p: u32, cap: u64) -> Result<BoundsReport> {
    if p.is_multiple_of(2) || !parse_is_prime(p as u64) {
        return Err(Error::pre(format!("p = {p} must be an odd prime")));
    }
    let group = Arc::new(trunc_group_with_cap(p as u16, cap)?);
    let half = (p as usize).div_ceil(2);
    let g_vec = exp_vf(&VectorField::basis(p, half))?;
    let g = group.index_of(&g_vec).expect("exp lands in the group");
    let z = centralizer(&group, g);
    let zg = &z.group;
    let abelian = zg.is_abelian();
    let exponent = if abelian {
        zg.generators().iter().map(|&s| zg.element_order(s as usize)).max().unwrap_or(1)
    } else {
        zg.exponent()
    };
    let class_count = group.class_count() as u64;
    let p_cubed = (p as u64).pow(3);
    let expected = (p as u64).pow(half as u32);
    let k_dbl = (group.order() <= K_DOUBLE_LIMIT).then(|| k_double(&group));

    let mut violations = Vec::new();
    let mut expected_g = vec![0u16; p as usize];
    expected_g[(p as usize + 3) / 2 - 2] = 1;
    if g_vec != expected_g {
        violations.push(format!("exp(L_{half}) is not x + x^{}", (p + 3) / 2));
    }
    if class_count > p_cubed {
        violations.push(format!("k(G) = {class_count} exceeds p^3 = {p_cubed}"));
    }
    if z.order() as u64 != expected {
        violations.push(format!("|Z_g| = {} differs from p^{half} = {expected}", z.order()));
    }
    if !abelian {
        violations.push("Z_g is not abelian".into());
    }
    if exponent != p as u64 {
        violations.push(format!("Z_g has exponent {exponent}, not {p}"));
    }
    if let Some(k) = k_dbl {
        if k < z.order() as u64 {
            violations.push(format!("k(D(G)) = {k} is below |Z_g|"));
        }
    }
    let centralizer_classes = if abelian { z.order() } else { zg.class_count() };
    Ok(BoundsReport {
        p,
        group_order: group.order() as u64,
        class_count,
        p_cubed,
        g: g_vec,
        centralizer_order: z.order() as u64,
        expected_centralizer_order: expected,
        centralizer_abelian: abelian,
        centralizer_exponent: exponent,
        k_double: k_dbl,
        witness_log: half as f64 * (p as f64).ln(),
        certified_log: (centralizer_classes as f64).ln(),
        violations,
    })
}
