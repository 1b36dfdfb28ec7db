//! Character tables by Dixon's method.
//!
//! The class algebra is split over `F_l` for a prime `l = 1 mod e` with
//! `l > 2 sqrt|G|`. Each common eigenvector of the class matrices gives the
//! central character `omega`, from which the degree and the values mod `l`
//! follow; eigenvalue multiplicities of `rho(g)` are then recovered exactly
//! by a discrete Fourier transform over the powers of `g`.

use serde::Serialize;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{parse_is_prime, FiniteGroup};

/// Largest class count accepted by [`character_table`].
pub const MAX_CLASSES: usize = 256;
const MAX_PRIMES: usize = 8;

/// `a[i][j][k]`: the number of pairs `(x, y)` in `C_i x C_j` with `xy` equal
/// to the representative of `C_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassMultCoeffs {
    r: usize,
    data: Vec<u32>,
}

impl ClassMultCoeffs {
    pub fn class_count(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.data[(i * self.r + j) * self.r + k]
    }
}

pub fn class_mult_coeffs(g: &FiniteGroup) -> ClassMultCoeffs {
    let cd = g.classes();
    let r = cd.classes.len();
    let mut data = vec![0u32; r * r * r];
    for (k, c) in cd.classes.iter().enumerate() {
        let z = c.representative;
        for x in 0..g.order() {
            let y = g.mul(g.inv(x), z);
            data[(cd.class_of(x) * r + cd.class_of(y)) * r + k] += 1;
        }
    }
    ClassMultCoeffs { r, data }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    pub order: u64,
    /// Every value lives in `Z[zeta_e]` with `e` the group exponent.
    pub exponent: u32,
    pub class_reps: Vec<usize>,
    pub class_sizes: Vec<u64>,
    /// Class of the inverse of each class representative.
    pub inverse_class: Vec<usize>,
    pub degrees: Vec<u64>,
    /// `values[w][k]` is `chi_w` on class `k`.
    pub values: Vec<Vec<Cyclotomic>>,
    /// The prime used for the modular split.
    pub prime: u64,
}

impl CharacterTable {
    pub fn irrep_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn trivial_index(&self) -> usize {
        self.values
            .iter()
            .position(|row| row.iter().all(|v| v.as_integer() == Some(1)))
            .expect("trivial character present")
    }

    pub fn value(&self, w: usize, class: usize) -> &Cyclotomic {
        &self.values[w][class]
    }

    /// `chi_w(g^n)`.
    pub fn at_power(&self, g: &FiniteGroup, w: usize, x: usize, n: u64) -> Cyclotomic {
        let class = g.classes().class_of(g.pow(x, n));
        self.values[w][class].clone()
    }

    /// `(1/|G|) sum_k |C_k| a_k conj(b_k)` times `|G|`, exactly.
    fn pairing_times_order(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(self.exponent);
        for k in 0..self.class_count() {
            acc.add_assign_scaled(&(&a[k] * &b[k].conj()), self.class_sizes[k] as i64);
        }
        acc
    }

    /// Both orthogonality relations and `sum deg^2 = |G|`, checked exactly.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let r = self.class_count();
        if self.irrep_count() != r {
            return Err(format!("{} irreps for {r} classes", self.irrep_count()));
        }
        let sum_sq: u64 = self.degrees.iter().map(|d| d * d).sum();
        if sum_sq != self.order {
            return Err(format!("sum of squared degrees is {sum_sq}, not {}", self.order));
        }
        for (w, row) in self.values.iter().enumerate() {
            if row[0].as_integer() != Some(self.degrees[w] as i64) || !self.order.is_multiple_of(self.degrees[w]) {
                return Err(format!("irrep {w}: bad degree"));
            }
            for (w2, row2) in self.values.iter().enumerate().skip(w) {
                let expected = if w == w2 { self.order as i64 } else { 0 };
                if self.pairing_times_order(row, row2).as_integer() != Some(expected) {
                    return Err(format!("rows {w} and {w2} are not orthonormal"));
                }
            }
        }
        for k in 0..r {
            for l in k..r {
                let mut acc = Cyclotomic::zero(self.exponent);
                for row in &self.values {
                    acc = &acc + &(&row[k] * &row[l].conj());
                }
                let expected = if k == l { (self.order / self.class_sizes[k]) as i64 } else { 0 };
                if acc.as_integer() != Some(expected) {
                    return Err(format!("columns {k} and {l} are not orthogonal"));
                }
            }
        }
        Ok(())
    }

    /// `{e, degrees, values}` with values as canonical coefficient vectors.
    pub fn to_json(&self) -> serde_json::Value {
        let values: Vec<Vec<Vec<i64>>> =
            self.values.iter().map(|row| row.iter().map(Cyclotomic::canonical).collect()).collect();
        serde_json::json!({
            "e": self.exponent,
            "degrees": self.degrees,
            "values": values,
        })
    }
}

pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable> {
    let r = g.class_count();
    if r > MAX_CLASSES {
        return Err(Error::ClassCap { classes: r, cap: MAX_CLASSES });
    }
    let coeffs = class_mult_coeffs(g);
    let e = g.exponent();
    let n = g.order() as u64;
    let mut prime = next_prime(e, (2.0 * (n as f64).sqrt()).floor() as u64);
    let mut last_err = String::new();
    for _ in 0..MAX_PRIMES {
        match dixon(g, &coeffs, prime) {
            Ok(t) => return Ok(t),
            Err(msg) => last_err = msg,
        }
        prime = next_prime(e, prime);
    }
    Err(Error::CharacterTable(format!("no prime among {MAX_PRIMES} candidates split the class algebra: {last_err}")))
}

/// Smallest prime `l = 1 mod e` with `l > above`.
fn next_prime(e: u64, above: u64) -> u64 {
    let mut l = above + 1;
    l += (1 + e - l % e) % e;
    while !parse_is_prime(l) {
        l += e;
    }
    l
}

fn pow_mod(mut b: u64, mut x: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while x > 0 {
        if x & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        x >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn primitive_root(p: u64) -> u64 {
    let mut m = p - 1;
    let mut factors = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).expect("primes have primitive roots")
}

/// Basis of `{x : a x = 0}` for an `rows x cols` matrix over `F_p`.
fn nullspace(mut a: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..a.len()).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(row, piv);
        let s = inv_mod(a[row][col], p);
        for x in a[row].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..a.len() {
            if i != row && a[i][col] != 0 {
                let f = a[i][col];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + (p - f) * a[row][j]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[i][f]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial (low degree first, monic) via reduction to
/// upper Hessenberg form.
fn charpoly(mut a: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
    let n = a.len();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| a[i][j] != 0) else {
            continue;
        };
        a.swap(piv, j + 1);
        for row in a.iter_mut() {
            row.swap(piv, j + 1);
        }
        let s = inv_mod(a[j + 1][j], p);
        for i in j + 2..n {
            if a[i][j] == 0 {
                continue;
            }
            let f = a[i][j] * s % p;
            for c in 0..n {
                a[i][c] = (a[i][c] + (p - f) * a[j + 1][c]) % p;
            }
            for row in a.iter_mut() {
                row[j + 1] = (row[j + 1] + f * row[i]) % p;
            }
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{k=i+1..m} h_{k,k-1}) p_{i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![0u64; m + 2];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = (next[k] + (p - a[m][m]) * c) % p;
        }
        let mut prod = 1u64;
        for i in (0..m).rev() {
            prod = prod * a[i + 1][i] % p;
            let f = a[i][m] * prod % p;
            if f == 0 {
                continue;
            }
            for (k, &c) in polys[i].iter().enumerate() {
                next[k] = (next[k] + (p - f) * c) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

fn roots(poly: &[u64], p: u64) -> Vec<u64> {
    (0..p).filter(|&x| poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0).collect()
}

/// A subspace of `F_p^r` with a basis in reduced echelon form.
struct Subspace {
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn new(mut vectors: Vec<Vec<u64>>, p: u64) -> Self {
        let cols = vectors.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            let Some(piv) = (row..vectors.len()).find(|&i| vectors[i][col] != 0) else {
                continue;
            };
            vectors.swap(row, piv);
            let s = inv_mod(vectors[row][col], p);
            for x in vectors[row].iter_mut() {
                *x = *x * s % p;
            }
            for i in 0..vectors.len() {
                if i != row && vectors[i][col] != 0 {
                    let f = vectors[i][col];
                    for j in 0..cols {
                        vectors[i][j] = (vectors[i][j] + (p - f) * vectors[row][j]) % p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        vectors.truncate(row);
        Subspace { basis: vectors, pivots }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn dixon(g: &FiniteGroup, coeffs: &ClassMultCoeffs, p: u64) -> std::result::Result<CharacterTable, String> {
    let r = coeffs.class_count();
    let cd = g.classes();
    let apply = |i: usize, v: &[u64]| -> Vec<u64> {
        (0..r).map(|j| (0..r).fold(0, |acc, k| (acc + coeffs.get(i, j, k) as u64 * v[k]) % p)).collect()
    };
    let identity: Vec<Vec<u64>> = (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect();
    let mut spaces = vec![Subspace::new(identity, p)];
    for i in 1..r {
        if spaces.iter().all(|s| s.dim() == 1) {
            break;
        }
        let mut next = Vec::new();
        for space in spaces {
            let d = space.dim();
            if d == 1 {
                next.push(space);
                continue;
            }
            let images: Vec<Vec<u64>> = space.basis.iter().map(|b| apply(i, b)).collect();
            // t[c'][c]: coordinate of A_i b_c on b_c'
            let t: Vec<Vec<u64>> = (0..d).map(|c2| (0..d).map(|c| images[c][space.pivots[c2]]).collect()).collect();
            let mut found = 0;
            for lambda in roots(&charpoly(t.clone(), p), p) {
                let shifted: Vec<Vec<u64>> = t
                    .iter()
                    .enumerate()
                    .map(|(a, row)| {
                        row.iter().enumerate().map(|(b, &x)| if a == b { (x + p - lambda) % p } else { x }).collect()
                    })
                    .collect();
                let kernel = nullspace(shifted, d, p);
                found += kernel.len();
                let vectors = kernel
                    .iter()
                    .map(|x| (0..r).map(|j| (0..d).fold(0, |acc, c| (acc + x[c] * space.basis[c][j]) % p)).collect())
                    .collect();
                next.push(Subspace::new(vectors, p));
            }
            if found != d {
                return Err(format!("class matrix {i} is not diagonalizable mod {p}"));
            }
        }
        spaces = next;
    }
    if spaces.len() != r || spaces.iter().any(|s| s.dim() != 1) {
        return Err(format!("eigenspaces did not split into lines mod {p}"));
    }

    let n = g.order() as u64;
    let e = g.exponent();
    let sizes: Vec<u64> = cd.classes.iter().map(|c| c.size as u64).collect();
    let reps: Vec<usize> = cd.classes.iter().map(|c| c.representative).collect();
    let inverse_class: Vec<usize> = reps.iter().map(|&x| cd.class_of(g.inv(x))).collect();
    // power_classes[k][l] = class of rep_k^l
    let power_classes: Vec<Vec<usize>> = reps
        .iter()
        .map(|&x| {
            let mut out = Vec::with_capacity(e as usize);
            let mut y = 0;
            for _ in 0..e {
                out.push(cd.class_of(y));
                y = g.mul(y, x);
            }
            out
        })
        .collect();
    let zeta = pow_mod(primitive_root(p), (p - 1) / e, p);
    let e_inv = inv_mod(e % p, p);

    let mut rows = Vec::with_capacity(r);
    for space in &spaces {
        let v = &space.basis[0];
        let s = inv_mod(v[0], p);
        let omega: Vec<u64> = v.iter().map(|&x| x * s % p).collect();
        let norm =
            (0..r).fold(0, |acc, k| (acc + omega[k] * omega[inverse_class[k]] % p * inv_mod(sizes[k] % p, p)) % p);
        if norm == 0 {
            return Err(format!("degenerate central character mod {p}"));
        }
        let d_sq = n % p * inv_mod(norm, p) % p;
        let bound = (n as f64).sqrt() as u64 + 1;
        let degree = (1..=bound)
            .find(|&d| d * d % p == d_sq && n.is_multiple_of(d))
            .ok_or_else(|| format!("no degree with square {d_sq} mod {p}"))?;
        let modular: Vec<u64> = (0..r).map(|k| omega[k] * (degree % p) % p * inv_mod(sizes[k] % p, p) % p).collect();
        let mut values = Vec::with_capacity(r);
        for k in 0..r {
            // multiplicity of zeta^j as an eigenvalue of rho(rep_k)
            let mut mult = vec![0i64; e as usize];
            for (j, m) in mult.iter_mut().enumerate() {
                let step = pow_mod(zeta, (e - j as u64 % e) % e, p);
                let mut acc = 0u64;
                let mut w = 1u64;
                for l in 0..e as usize {
                    acc = (acc + modular[power_classes[k][l]] * w) % p;
                    w = w * step % p;
                }
                let m_j = acc * e_inv % p;
                if m_j > degree {
                    return Err(format!("eigenvalue multiplicity out of range mod {p}"));
                }
                *m = m_j as i64;
            }
            if mult.iter().sum::<i64>() != degree as i64 {
                return Err(format!("multiplicities do not sum to the degree mod {p}"));
            }
            values.push(Cyclotomic::from_coeffs(e as u32, &mult));
        }
        rows.push((degree, values));
    }
    rows.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            let ca: Vec<Vec<i64>> = a.1.iter().map(Cyclotomic::canonical).collect();
            let cb: Vec<Vec<i64>> = b.1.iter().map(Cyclotomic::canonical).collect();
            ca.cmp(&cb)
        })
    });
    let table = CharacterTable {
        order: n,
        exponent: e as u32,
        class_reps: reps,
        class_sizes: sizes,
        inverse_class,
        degrees: rows.iter().map(|r| r.0).collect(),
        values: rows.into_iter().map(|r| r.1).collect(),
        prime: p,
    };
    table.verify()?;
    Ok(table)
}
