//! Group-spec strings:
//!
//! ```text
//! cyclic:<m>[x<m>...]
//! sym:<N>
//! wreath:<N>,<abelian-spec>
//! permgen:<N>;<perm>;<perm>;...     (cycle notation, 1-based)
//! truncseries:<p>
//! ```

use super::{Family, FiniteGroup, Law};
use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: u64 = 2_000_000;

pub fn make_group(spec: &str) -> Result<FiniteGroup> {
    make_group_with_cap(spec, DEFAULT_ORDER_CAP)
}

pub fn make_group_with_cap(spec: &str, cap: u64) -> Result<FiniteGroup> {
    let spec = spec.trim();
    let (kind, rest) = spec.split_once(':').ok_or_else(|| Error::parse(spec, "expected `<family>:<parameters>`"))?;
    match kind {
        "cyclic" => abelian(spec, cap),
        "sym" => {
            let n = parse_num(spec, rest)?;
            if n == 0 {
                return Err(Error::parse(spec, "degree must be positive"));
            }
            check_order(factorial(n), cap)?;
            let law = Law::Perm { degree: n };
            FiniteGroup::from_generators(Family::Symmetric(n), law, sym_generators(n), cap)
        }
        "wreath" => {
            let (n, a) =
                rest.split_once(',').ok_or_else(|| Error::parse(spec, "expected `wreath:<N>,<abelian-spec>`"))?;
            let n = parse_num(spec, n)?;
            if n == 0 {
                return Err(Error::parse(spec, "degree must be positive"));
            }
            let moduli = parse_cyclic_moduli(a)?;
            wreath_group(n, &moduli, cap)
        }
        "permgen" => {
            let mut parts = rest.split(';');
            let n = parse_num(spec, parts.next().unwrap_or(""))?;
            if n == 0 || n > u16::MAX as usize {
                return Err(Error::parse(spec, "degree out of range"));
            }
            let gens = parts.map(|p| parse_cycles(spec, p, n)).collect::<Result<Vec<_>>>()?;
            let family = Family::PermGen { degree: n, generators: gens.clone() };
            FiniteGroup::from_generators(family, Law::Perm { degree: n }, gens, cap)
        }
        "truncseries" => {
            let p = parse_num(spec, rest)?;
            if !is_prime(p as u64) || p > 251 {
                return Err(Error::parse(spec, "p must be a prime"));
            }
            crate::bounds::trunc_group_with_cap(p as u16, cap)
        }
        _ => Err(Error::parse(spec, format!("unknown family `{kind}`"))),
    }
}

/// Moduli of a `cyclic:<m>[x<m>...]` spec.
pub fn parse_cyclic_moduli(spec: &str) -> Result<Vec<u16>> {
    let spec = spec.trim();
    let rest = spec.strip_prefix("cyclic:").ok_or_else(|| Error::parse(spec, "expected `cyclic:<m>[x<m>...]`"))?;
    rest.split('x')
        .map(|m| {
            let m = parse_num(spec, m)?;
            if m == 0 || m > u16::MAX as usize {
                return Err(Error::parse(spec, "moduli must lie in 1..=65535"));
            }
            Ok(m as u16)
        })
        .collect()
}

fn abelian(spec: &str, cap: u64) -> Result<FiniteGroup> {
    let moduli = parse_cyclic_moduli(spec)?;
    let order = moduli.iter().map(|&m| m as u128).product();
    check_order(order, cap)?;
    let k = moduli.len();
    let gens = (0..k)
        .filter(|&i| moduli[i] > 1)
        .map(|i| {
            let mut g = vec![0u16; k];
            g[i] = 1;
            g
        })
        .collect();
    let law = Law::Abelian { moduli: moduli.clone() };
    FiniteGroup::from_generators(Family::Abelian(moduli), law, gens, cap)
}

pub(crate) fn wreath_group(n: usize, moduli: &[u16], cap: u64) -> Result<FiniteGroup> {
    let a_order: u128 = moduli.iter().map(|&m| m as u128).product();
    check_order(factorial(n).saturating_mul(a_order.saturating_pow(n as u32)), cap)?;
    let law = Law::Wreath { degree: n, moduli: moduli.to_vec() };
    let t = moduli.len();
    let id = law.identity();
    let mut gens: Vec<Vec<u16>> = sym_generators(n)
        .into_iter()
        .map(|s| {
            let mut g = id.clone();
            g[..n].copy_from_slice(&s);
            g
        })
        .collect();
    for c in 0..t {
        if moduli[c] > 1 {
            let mut g = id.clone();
            g[n + c] = 1;
            gens.push(g);
        }
    }
    let family = Family::Wreath { degree: n, moduli: moduli.to_vec() };
    FiniteGroup::from_generators(family, law, gens, cap)
}

/// The transposition `(1,2)` and the cycle `(1,...,n)`.
fn sym_generators(n: usize) -> Vec<Vec<u16>> {
    if n < 2 {
        return vec![];
    }
    let mut swap: Vec<u16> = (0..n as u16).collect();
    swap.swap(0, 1);
    let cycle: Vec<u16> = (0..n).map(|i| ((i + 1) % n) as u16).collect();
    vec![swap, cycle]
}

fn parse_cycles(spec: &str, text: &str, n: usize) -> Result<Vec<u16>> {
    let mut perm: Vec<u16> = (0..n as u16).collect();
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = text.as_str();
    while !rest.is_empty() {
        let body_end = rest
            .find(')')
            .filter(|_| rest.starts_with('('))
            .ok_or_else(|| Error::parse(spec, format!("bad cycle notation `{text}`")))?;
        let body = &rest[1..body_end];
        rest = &rest[body_end + 1..];
        if body.is_empty() {
            continue;
        }
        let points = body
            .split(',')
            .map(|x| {
                let x = parse_num(spec, x)?;
                if x == 0 || x > n {
                    return Err(Error::parse(spec, format!("point {x} outside 1..={n}")));
                }
                Ok(x - 1)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut seen = vec![false; n];
        let mut cycle: Vec<u16> = (0..n as u16).collect();
        for (k, &p) in points.iter().enumerate() {
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::parse(spec, format!("repeated point in `{body}`")));
            }
            cycle[p] = points[(k + 1) % points.len()] as u16;
        }
        // a written product of cycles composes right to left
        perm = cycle.iter().map(|&x| perm[x as usize]).collect();
    }
    Ok(perm)
}

fn parse_num(spec: &str, s: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| Error::parse(spec, format!("`{s}` is not a non-negative integer")))
}

fn check_order(order: u128, cap: u64) -> Result<()> {
    if order > cap as u128 {
        return Err(Error::ResourceCap { order, cap });
    }
    Ok(())
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |a, b| a.saturating_mul(b))
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}
