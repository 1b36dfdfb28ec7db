//! Exact elements of `Z[zeta_e]`.
//!
//! Values are stored as coefficient vectors of length `e` on `1, zeta, ...,
//! zeta^(e-1)`, i.e. modulo `x^e - 1`. That representation is not unique;
//! [`Cyclotomic::canonical`] reduces modulo the cyclotomic polynomial
//! `Phi_e` and is what equality, hashing and ordering use.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

#[derive(Clone)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<i64>,
}

fn cyclotomic_poly(e: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&e) {
        return p.clone();
    }
    // Phi_e = (x^e - 1) / prod_{d | e, d < e} Phi_d
    let mut num = vec![0i64; e as usize + 1];
    num[0] = -1;
    num[e as usize] = 1;
    for d in 1..e {
        if e.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_poly(d));
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(e, p.clone());
    p
}

/// Quotient of polynomials (low degree first) when the divisor is monic
/// and divides exactly.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        q[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count() as u32
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1);
        Cyclotomic { order, coeffs: vec![0; order as usize] }
    }

    pub fn from_int(order: u32, k: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = k;
        z
    }

    pub fn one(order: u32) -> Self {
        Self::from_int(order, 1)
    }

    /// `zeta_order^k`.
    pub fn root(order: u32, k: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[k.rem_euclid(order as i64) as usize] = 1;
        z
    }

    /// From coefficients on `1, zeta, zeta^2, ...`; wraps around modulo `x^order - 1`.
    pub fn from_coeffs(order: u32, coeffs: &[i64]) -> Self {
        let mut z = Self::zero(order);
        for (k, &c) in coeffs.iter().enumerate() {
            z.coeffs[k % order as usize] += c;
        }
        z
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Raw coefficients modulo `x^order - 1`.
    pub fn raw_coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficients on the power basis `1, ..., zeta^(phi(e)-1)`, which is an
    /// integral basis of `Z[zeta_e]`.
    pub fn canonical(&self) -> Vec<i64> {
        let phi = cyclotomic_poly(self.order);
        let deg = phi.len() - 1;
        let mut r = self.coeffs.clone();
        for k in (deg..r.len()).rev() {
            let c = r[k];
            if c != 0 {
                for (i, &p) in phi.iter().enumerate() {
                    r[k - deg + i] -= c * p;
                }
            }
        }
        r.truncate(deg);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().iter().all(|&c| c == 0)
    }

    /// `Some(k)` when the value is the rational integer `k`.
    pub fn as_integer(&self) -> Option<i64> {
        let c = self.canonical();
        c[1..].iter().all(|&x| x == 0).then_some(c[0])
    }

    pub fn is_rational_integer(&self) -> bool {
        self.as_integer().is_some()
    }

    /// Re-expresses the value in `Z[zeta_m]` for a multiple `m` of the order.
    pub fn lift(&self, m: u32) -> Self {
        assert_eq!(m % self.order, 0, "{m} is not a multiple of {}", self.order);
        let step = (m / self.order) as usize;
        let mut z = Self::zero(m);
        for (k, &c) in self.coeffs.iter().enumerate() {
            z.coeffs[k * step] = c;
        }
        z
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            (self.clone(), other.clone())
        } else {
            let m = self.order.lcm(&other.order);
            (self.lift(m), other.lift(m))
        }
    }

    /// The Galois automorphism `zeta -> zeta^s`, `gcd(s, order) = 1`.
    pub fn galois(&self, s: i64) -> Self {
        let e = self.order as i64;
        debug_assert_eq!(s.rem_euclid(e).gcd(&e), 1);
        let mut z = Self::zero(self.order);
        for (k, &c) in self.coeffs.iter().enumerate() {
            z.coeffs[(k as i64 * s).rem_euclid(e) as usize] += c;
        }
        z
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Whether the value lies in `Q(zeta_d)`: fixed by every automorphism
    /// `zeta_e -> zeta_e^s` with `s = 1 mod gcd(d, e)`.
    pub fn in_subfield(&self, d: u32) -> bool {
        let e = self.order;
        let g = d.gcd(&e);
        (1..=e).filter(|&s| s.gcd(&e) == 1 && s % g == 1 % g).all(|s| self.galois(s as i64) == *self)
    }

    pub fn scale(&self, k: i64) -> Self {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|&c| c * k).collect() }
    }

    /// Exact division by an integer; `None` unless the quotient lies in
    /// `Z[zeta_e]`.
    pub fn div_exact(&self, k: i64) -> Option<Self> {
        let canon = self.canonical();
        if canon.iter().any(|&c| c % k != 0) {
            return None;
        }
        let q: Vec<i64> = canon.iter().map(|&c| c / k).collect();
        Some(Self::from_coeffs(self.order, &q))
    }

    pub fn add_assign_scaled(&mut self, other: &Self, k: i64) {
        if self.order == other.order {
            for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
                *a += b * k;
            }
        } else {
            *self = &*self + &other.scale(k);
        }
    }
}

/// Serialized as `{"order": e, "coeffs": canonical coefficients}`.
impl serde::Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Cyclotomic", 2)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("coeffs", &self.canonical())?;
        st.end()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.canonical() == b.canonical()
    }
}

impl Eq for Cyclotomic {}

impl std::hash::Hash for Cyclotomic {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        // values from different ambient orders may be equal; hash only what
        // survives lifting: rational integers hash by value
        match self.as_integer() {
            Some(k) => k.hash(state),
            None => 0x5a5au16.hash(state),
        }
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An arbitrary but fixed total order (on canonical coefficients), used for
/// deterministic sorting only.
impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.common(other);
        a.canonical().cmp(&b.canonical())
    }
}

impl std::ops::Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
}

impl std::ops::Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &rhs.scale(-1)
    }
}

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale(-1)
    }
}

impl std::ops::Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(rhs);
        let e = a.order as usize;
        let mut out = Cyclotomic::zero(a.order);
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    out.coeffs[(i + j) % e] += x * y;
                }
            }
        }
        out
    }
}

impl std::iter::Sum<Cyclotomic> for Option<Cyclotomic> {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        iter.reduce(|a, b| &a + &b)
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(k, &x)| match k {
                0 => x.to_string(),
                1 => format!("{x}*z{}", self.order),
                _ => format!("{x}*z{}^{k}", self.order),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
        }
    }
}
