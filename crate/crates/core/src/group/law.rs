//! Multiplication laws on fixed-width element vectors.

/// How to multiply two encoded elements.
///
/// Permutations are image arrays on `0..degree` and compose right to left:
/// `(a * b)(i) = a(b(i))`.
///
/// Wreath elements `(sigma, a)` store the image array of `sigma` followed by
/// `degree` tail entries of `rank` coordinates each, and multiply as
/// `(sigma, a) * (tau, b) = (sigma tau, (a o tau) + b)` with
/// `(a o tau)_i = a_{tau(i)}`.
///
/// Truncated series store `(a_2, ..., a_{p+1})` for the substitution
/// `x -> x + a_2 x^2 + ... + a_{p+1} x^{p+1}`, and `f * g = f o g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Law {
    Abelian { moduli: Vec<u16> },
    Perm { degree: usize },
    Wreath { degree: usize, moduli: Vec<u16> },
    TruncSeries { p: u16 },
}

impl Law {
    pub fn width(&self) -> usize {
        match self {
            Law::Abelian { moduli } => moduli.len(),
            Law::Perm { degree } => *degree,
            Law::Wreath { degree, moduli } => degree * (1 + moduli.len()),
            Law::TruncSeries { p } => *p as usize,
        }
    }

    pub fn identity(&self) -> Vec<u16> {
        match self {
            Law::Perm { degree } | Law::Wreath { degree, .. } => {
                let mut v = vec![0u16; self.width()];
                for (i, x) in v.iter_mut().take(*degree).enumerate() {
                    *x = i as u16;
                }
                v
            }
            _ => vec![0u16; self.width()],
        }
    }

    pub fn compose(&self, a: &[u16], b: &[u16], out: &mut [u16]) {
        match self {
            Law::Abelian { moduli } => {
                for i in 0..moduli.len() {
                    out[i] = ((a[i] as u32 + b[i] as u32) % moduli[i] as u32) as u16;
                }
            }
            Law::Perm { degree } => {
                for i in 0..*degree {
                    out[i] = a[b[i] as usize];
                }
            }
            Law::Wreath { degree, moduli } => {
                let n = *degree;
                let t = moduli.len();
                for i in 0..n {
                    let ti = b[i] as usize;
                    out[i] = a[ti];
                    for c in 0..t {
                        let x = a[n + ti * t + c] as u32 + b[n + i * t + c] as u32;
                        out[n + i * t + c] = (x % moduli[c] as u32) as u16;
                    }
                }
            }
            Law::TruncSeries { p } => trunc_compose(*p, a, b, out),
        }
    }

    pub fn invert(&self, a: &[u16], out: &mut [u16]) {
        match self {
            Law::Abelian { moduli } => {
                for i in 0..moduli.len() {
                    out[i] = (moduli[i] - a[i]) % moduli[i];
                }
            }
            Law::Perm { degree } => {
                for i in 0..*degree {
                    out[a[i] as usize] = i as u16;
                }
            }
            Law::Wreath { degree, moduli } => {
                // (sigma, a)^-1 = (sigma^-1, -(a o sigma^-1))
                let n = *degree;
                let t = moduli.len();
                for i in 0..n {
                    out[a[i] as usize] = i as u16;
                }
                for i in 0..n {
                    let si = out[i] as usize;
                    for c in 0..t {
                        let m = moduli[c];
                        out[n + i * t + c] = (m - a[n + si * t + c]) % m;
                    }
                }
            }
            Law::TruncSeries { p } => trunc_invert(*p, a, out),
        }
    }
}

/// Full polynomial (degree 0..=p+1) of a truncated substitution.
fn trunc_poly(p: u16, a: &[u16]) -> Vec<u32> {
    let mut f = vec![0u32; p as usize + 2];
    f[1] = 1;
    for (k, &c) in a.iter().enumerate() {
        f[k + 2] = c as u32;
    }
    f
}

/// Product of polynomials modulo `x^(p+2)` and `p`.
fn trunc_mul(p: u16, a: &[u32], b: &[u32]) -> Vec<u32> {
    let len = p as usize + 2;
    let m = p as u32;
    let mut out = vec![0u32; len];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] = (out[i + j] + x * y) % m;
        }
    }
    out
}

fn trunc_compose(p: u16, a: &[u16], b: &[u16], out: &mut [u16]) {
    let m = p as u32;
    let g = trunc_poly(p, b);
    // f(g) = g + sum_j a_j g^j
    let mut acc = g.clone();
    let mut power = g.clone();
    for (k, &c) in a.iter().enumerate() {
        power = trunc_mul(p, &power, &g);
        if c != 0 {
            for (x, y) in acc.iter_mut().zip(&power) {
                *x = (*x + c as u32 * y) % m;
            }
        }
        debug_assert!(power[..k + 2].iter().all(|&x| x == 0));
    }
    for k in 0..p as usize {
        out[k] = acc[k + 2] as u16;
    }
}

fn trunc_invert(p: u16, a: &[u16], out: &mut [u16]) {
    // fixed point of h = x - sum_j a_j h^j; each pass fixes one more degree
    let m = p as u32;
    let mut h = trunc_poly(p, &vec![0u16; p as usize]);
    for _ in 0..p {
        let mut next = trunc_poly(p, &vec![0u16; p as usize]);
        let mut power = h.clone();
        for &c in a {
            power = trunc_mul(p, &power, &h);
            if c != 0 {
                for (x, y) in next.iter_mut().zip(&power) {
                    *x = (*x + (m - c as u32) * y) % m;
                }
            }
        }
        h = next;
    }
    for k in 0..p as usize {
        out[k] = h[k + 2] as u16;
    }
}

/// 1-based cycle notation, e.g. `(1,2,3)(4,5)`; the identity is `()`.
pub fn cycle_notation(perm: &[u16]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] as usize == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = perm[i] as usize;
        }
        out.push_str(&format!("({})", cycle.join(",")));
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

#[cfg(test)]
pub fn is_even(perm: &[u16]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        let mut i = start;
        let mut len = 0;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 0
}
