//! Irreducible modules of the Drinfeld double `D(G)` and their higher
//! Frobenius-Schur indicators.
//!
//! An irreducible module `V` is labelled by a conjugacy class `C` with base
//! point `y` and an irreducible character `chi_W` of the centralizer `Z_y`;
//! `dim V = |C| deg W`. Indicators are evaluated through
//!
//! ```text
//! nu_n(V) = |C|/|G| * sum_{g : g^n = (y^-1 g)^n} chi_W(g^n)
//! ```
//!
//! and cross-checked against the counting function
//! `f_y(z) = #{g : g^n = (y^-1 g)^n = z}` on `Z_y`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use crate::chartab::{character_table, CharacterTable};
use crate::cyclotomic::Cyclotomic;
use crate::error::Result;
use crate::group::{centralizer, Centralizer, FiniteGroup};

#[cfg(feature = "parallel")]
const PARALLEL_THRESHOLD: usize = 100_000;

/// One conjugacy class of `G` with its base point, centralizer and the
/// character table of the centralizer.
#[derive(Debug)]
pub struct Sector {
    pub class: usize,
    pub base_point: usize,
    pub class_size: usize,
    pub centralizer: Centralizer,
    pub table: CharacterTable,
    /// Ambient index -> class of `Z_y`, or `u32::MAX` outside `Z_y`.
    local_class: Vec<u32>,
}

impl Sector {
    /// The sector of `class` based at an arbitrary member `y`.
    pub fn new(group: &Arc<FiniteGroup>, class: usize, y: usize) -> Result<Self> {
        debug_assert_eq!(group.classes().class_of(y), class);
        let z = centralizer(group, y);
        let table = character_table(&z.group)?;
        let mut local_class = vec![u32::MAX; group.order()];
        let zc = z.group.classes();
        for (local, &amb) in z.embedding.iter().enumerate() {
            local_class[amb as usize] = zc.class_of[local];
        }
        Ok(Sector { class, base_point: y, class_size: group.order() / z.order(), centralizer: z, table, local_class })
    }

    pub fn irrep_count(&self) -> usize {
        self.table.irrep_count()
    }

    /// Class of `Z_y` containing the ambient element `z`.
    pub fn z_class(&self, z: usize) -> Option<usize> {
        let k = self.local_class[z];
        (k != u32::MAX).then_some(k as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleIrrep {
    pub class: usize,
    pub base_point: usize,
    /// Index into the character table of the centralizer.
    pub irrep: usize,
    pub dim: u64,
}

/// `f_y` on `Z_y`, both pointwise and per class of `Z_y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountFunction {
    pub y: usize,
    pub n: u64,
    /// Indexed by the local index in `Z_y`.
    pub pointwise: Vec<u64>,
    /// Value at each class representative of `Z_y`.
    pub by_class: Vec<u64>,
}

impl CountFunction {
    pub fn total(&self) -> u64 {
        self.pointwise.iter().sum()
    }

    pub fn is_class_function(&self, z: &FiniteGroup) -> bool {
        let cd = z.classes();
        self.pointwise.iter().enumerate().all(|(x, &v)| v == self.by_class[cd.class_of(x)])
    }
}

pub struct QuantumDouble {
    group: Arc<FiniteGroup>,
    sectors: Vec<Sector>,
}

impl QuantumDouble {
    /// Base points are the smallest element of each class.
    pub fn new(group: Arc<FiniteGroup>) -> Result<Self> {
        let reps: Vec<(usize, usize)> =
            group.classes().classes.iter().enumerate().map(|(k, c)| (k, c.representative)).collect();
        #[cfg(feature = "parallel")]
        let sectors = {
            use rayon::prelude::*;
            reps.par_iter().map(|&(k, y)| Sector::new(&group, k, y)).collect::<Result<Vec<_>>>()?
        };
        #[cfg(not(feature = "parallel"))]
        let sectors = reps.iter().map(|&(k, y)| Sector::new(&group, k, y)).collect::<Result<Vec<_>>>()?;
        Ok(QuantumDouble { group, sectors })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn irreps(&self) -> Vec<DoubleIrrep> {
        self.sectors
            .iter()
            .flat_map(|s| {
                s.table.degrees.iter().enumerate().map(move |(w, &d)| DoubleIrrep {
                    class: s.class,
                    base_point: s.base_point,
                    irrep: w,
                    dim: s.class_size as u64 * d,
                })
            })
            .collect()
    }

    /// `nu_n(V)` for one module.
    pub fn indicator(&self, v: &DoubleIrrep, n: u64) -> Cyclotomic {
        let sector = &self.sectors[v.class];
        sector_indicators(&self.group, sector, n).swap_remove(v.irrep)
    }

    pub fn sector_indicators(&self, class: usize, n: u64) -> Vec<Cyclotomic> {
        sector_indicators(&self.group, &self.sectors[class], n)
    }

    pub fn count_f(&self, class: usize, n: u64) -> CountFunction {
        count_f(&self.group, &self.sectors[class], n)
    }

    pub fn indicators_via_f(&self, class: usize, n: u64) -> Vec<Cyclotomic> {
        let sector = &self.sectors[class];
        indicators_via_f(sector, &count_f(&self.group, sector, n))
    }

    pub fn identity_check(&self, class: usize, n: u64) -> bool {
        identity_check(&self.group, &self.sectors[class], n)
    }

    pub fn galois_check(&self, class: usize, n: u64) -> bool {
        galois_check(&self.group, &self.sectors[class], n)
    }

    /// Indicators for `n = 1..=n_max`, with integrality flags.
    pub fn integrality_report(&self, n_max: u64) -> IndicatorTable {
        let e = self.group.exponent();
        let mut by_residue: BTreeMap<u64, Vec<Vec<Cyclotomic>>> = BTreeMap::new();
        for n in 1..=n_max {
            by_residue
                .entry(n % e)
                .or_insert_with(|| self.sectors.iter().map(|s| sector_indicators(&self.group, s, n)).collect());
        }
        let irreps = self.irreps();
        let mut values = vec![Vec::with_capacity(n_max as usize); irreps.len()];
        for n in 1..=n_max {
            let per_sector = &by_residue[&(n % e)];
            for (i, v) in irreps.iter().enumerate() {
                values[i].push(per_sector[v.class][v.irrep].clone());
            }
        }
        let mut violations = Vec::new();
        for (i, row) in values.iter().enumerate() {
            for (j, val) in row.iter().enumerate() {
                if !val.is_rational_integer() {
                    violations.push(Violation { irrep: i, n: j as u64 + 1 });
                }
            }
        }
        IndicatorTable {
            group_spec: self.group.spec(),
            n_max,
            irreps: irreps
                .iter()
                .map(|v| IrrepLabel {
                    class: v.class,
                    irrep: v.irrep,
                    dim: v.dim,
                    cyclotomic_order: self.sectors[v.class].table.exponent,
                })
                .collect(),
            values,
            violations,
        }
    }
}

/// `g -> g^n` as a lookup table.
fn power_table(group: &FiniteGroup, n: u64) -> Vec<u32> {
    let e = group.exponent();
    group.power_map(if n == 0 { 0 } else { (n - 1) % e + 1 })
}

/// Runs `visit(g, g^n)` over all `g` with `g^n = (y^-1 g)^n` and folds the
/// per-class counts of `g^n` in `Z_y`.
fn class_counts(group: &FiniteGroup, sector: &Sector, pw: &[u32]) -> Vec<u64> {
    let y_inv = group.inv(sector.base_point);
    let r = sector.table.class_count();
    let step = |mut acc: Vec<u64>, g: usize| {
        let h = group.mul(y_inv, g);
        if pw[g] == pw[h] {
            let k = sector.z_class(pw[g] as usize).expect("g^n centralizes y");
            acc[k] += 1;
        }
        acc
    };
    #[cfg(feature = "parallel")]
    if group.order() > PARALLEL_THRESHOLD {
        use rayon::prelude::*;
        return (0..group.order()).into_par_iter().fold(|| vec![0u64; r], step).reduce(
            || vec![0u64; r],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    }
    (0..group.order()).fold(vec![0u64; r], step)
}

/// `nu_n(V(W))` for every irrep `W` of `Z_y`, by the direct sum over `G`.
///
/// `n = 0` is read literally: every `g` qualifies and the value is `dim V`.
pub fn sector_indicators(group: &FiniteGroup, sector: &Sector, n: u64) -> Vec<Cyclotomic> {
    let t = &sector.table;
    if n == 0 {
        return t
            .degrees
            .iter()
            .map(|&d| Cyclotomic::from_int(t.exponent, (d * sector.class_size as u64) as i64))
            .collect();
    }
    let pw = power_table(group, n);
    let counts = class_counts(group, sector, &pw);
    let order = group.order() as i64;
    t.values
        .iter()
        .map(|row| {
            let mut acc = Cyclotomic::zero(t.exponent);
            for (k, &c) in counts.iter().enumerate() {
                if c != 0 {
                    acc.add_assign_scaled(&row[k], c as i64);
                }
            }
            acc.scale(sector.class_size as i64).div_exact(order).expect("|C| times the sum is divisible by |G|")
        })
        .collect()
}

/// `f_y(z)` for every `z` in `Z_y`, looping over `h` with `g = y h`.
pub fn count_f(group: &FiniteGroup, sector: &Sector, n: u64) -> CountFunction {
    let z = &sector.centralizer;
    let y = sector.base_point;
    let mut pointwise = vec![0u64; z.order()];
    for h in 0..group.order() {
        let g = group.mul(y, h);
        let gn = group.pow(g, n);
        if gn == group.pow(h, n) {
            let local = z.local_index(gn).expect("g^n centralizes y");
            pointwise[local] += 1;
        }
    }
    let by_class = z.group.classes().classes.iter().map(|c| pointwise[c.representative]).collect();
    CountFunction { y, n, pointwise, by_class }
}

/// `nu_n(V(W)) = (1/|Z_y|) sum_z f_y(z) chi_W(z)`.
pub fn indicators_via_f(sector: &Sector, f: &CountFunction) -> Vec<Cyclotomic> {
    let t = &sector.table;
    let z_order = sector.centralizer.order() as i64;
    t.values
        .iter()
        .map(|row| {
            let mut acc = Cyclotomic::zero(t.exponent);
            for (k, &v) in f.by_class.iter().enumerate() {
                acc.add_assign_scaled(&row[k], v as i64 * t.class_sizes[k] as i64);
            }
            acc.div_exact(z_order).expect("inner product is integral")
        })
        .collect()
}

/// `sum_W nu_n(V(W)) conj(chi_W(z)) = f_y(z)` on every class of `Z_y`.
pub fn identity_check(group: &FiniteGroup, sector: &Sector, n: u64) -> bool {
    let nu = sector_indicators(group, sector, n);
    let f = count_f(group, sector, n);
    let t = &sector.table;
    (0..t.class_count()).all(|k| {
        let mut lhs = Cyclotomic::zero(t.exponent);
        for (w, row) in t.values.iter().enumerate() {
            lhs = &lhs + &(&nu[w] * &row[k].conj());
        }
        lhs.as_integer() == Some(f.by_class[k] as i64)
    })
}

/// `f_y(z) = f_y(z^s)` for all `z` in `Z_y` and every unit `s` modulo the
/// exponent of `Z_y`.
pub fn galois_check(group: &FiniteGroup, sector: &Sector, n: u64) -> bool {
    galois_failures(group, sector, n).is_empty()
}

/// The `(z, s)` pairs, as ambient `z`, where `f_y(z) != f_y(z^s)`.
pub fn galois_failures(group: &FiniteGroup, sector: &Sector, n: u64) -> Vec<(usize, u64)> {
    let f = count_f(group, sector, n);
    let z = &sector.centralizer;
    let e = z.group.exponent();
    let mut out = Vec::new();
    for s in (1..=e).filter(|s| s.gcd(&e) == 1) {
        for local in 0..z.order() {
            let zs = z.group.pow(local, s);
            if f.pointwise[local] != f.pointwise[zs] {
                out.push((z.ambient_index(local), s));
            }
        }
    }
    out
}

/// `(1/|G|) sum_g chi(g^n)` from a character table of `G` itself.
pub fn classical_indicator(group: &FiniteGroup, table: &CharacterTable, w: usize, n: u64) -> Cyclotomic {
    let pw = power_table(group, n);
    let cd = group.classes();
    let mut acc = Cyclotomic::zero(table.exponent);
    for &x in &pw {
        acc = &acc + &table.values[w][cd.class_of(x as usize)];
    }
    acc.div_exact(group.order() as i64).expect("indicator is integral")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrrepLabel {
    pub class: usize,
    pub irrep: usize,
    pub dim: u64,
    pub cyclotomic_order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub irrep: usize,
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorTable {
    pub group_spec: String,
    pub n_max: u64,
    pub irreps: Vec<IrrepLabel>,
    /// `values[i][n-1]` is `nu_n` of irrep `i`.
    pub values: Vec<Vec<Cyclotomic>>,
    pub violations: Vec<Violation>,
}

impl IndicatorTable {
    pub fn all_integral(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn verdict(&self) -> &'static str {
        if self.all_integral() {
            "all-integral"
        } else {
            "non-integral values found"
        }
    }

    /// Report JSON; each indicator is `[canonical coefficients, is_integer]`.
    pub fn to_json(&self) -> serde_json::Value {
        let indicators: Vec<Vec<serde_json::Value>> = self
            .values
            .iter()
            .map(|row| row.iter().map(|v| serde_json::json!([v.canonical(), v.is_rational_integer()])).collect())
            .collect();
        serde_json::json!({
            "group_spec": self.group_spec,
            "n_range": [1, self.n_max],
            "irreps": self.irreps,
            "indicators": indicators,
            "verdict": {
                "all_integral": self.all_integral(),
                "summary": self.verdict(),
                "violations": self.violations,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    fn double(spec: &str) -> QuantumDouble {
        QuantumDouble::new(Arc::new(make_group(spec).unwrap())).unwrap()
    }

    /// `nu_n` straight from the definition, with `h` ranging over all of `G`.
    fn brute_indicator(qd: &QuantumDouble, v: &DoubleIrrep, n: u64) -> Cyclotomic {
        let g = qd.group();
        let s = &qd.sectors()[v.class];
        let y = s.base_point;
        let mut acc = Cyclotomic::zero(s.table.exponent);
        for a in 0..g.order() {
            for b in 0..g.order() {
                if g.mul(a, g.inv(b)) != y {
                    continue;
                }
                let (an, bn) = (g.pow(a, n), g.pow(b, n));
                if an == bn {
                    let k = s.z_class(an).unwrap();
                    acc = &acc + &s.table.values[v.irrep][k];
                }
            }
        }
        acc.scale(s.class_size as i64).div_exact(g.order() as i64).unwrap()
    }

    #[test]
    fn irrep_counts_and_dimensions() {
        let qd = double("cyclic:1");
        assert_eq!(qd.irreps().len(), 1);
        assert_eq!(qd.irreps()[0].dim, 1);
        let qd = double("cyclic:2");
        assert_eq!(qd.irreps().len(), 4);
        assert!(qd.irreps().iter().all(|v| v.dim == 1));
        for (spec, count) in [("sym:3", 8), ("sym:4", 21), ("wreath:2,cyclic:2", 22)] {
            let qd = double(spec);
            let irreps = qd.irreps();
            assert_eq!(irreps.len(), count, "{spec}");
            let n = qd.group().order() as u64;
            assert_eq!(irreps.iter().map(|v| v.dim * v.dim).sum::<u64>(), n * n);
        }
    }

    #[test]
    fn unit_object_and_first_indicator() {
        for spec in ["sym:3", "wreath:2,cyclic:2"] {
            let qd = double(spec);
            let unit_w = qd.sectors()[0].table.trivial_index();
            for v in qd.irreps() {
                let is_unit = v.class == 0 && v.irrep == unit_w;
                assert_eq!(qd.indicator(&v, 1).as_integer(), Some(is_unit as i64), "{spec} {v:?}");
                if is_unit {
                    for n in 0..10 {
                        assert_eq!(qd.indicator(&v, n).as_integer(), Some(1));
                    }
                }
            }
        }
    }

    #[test]
    fn matches_definition_on_small_groups() {
        for spec in ["sym:3", "cyclic:4", "permgen:8;(1,2,3,4)(5,6,7,8);(1,5,3,7)(2,8,4,6)"] {
            let qd = double(spec);
            for v in qd.irreps() {
                for n in 1..=6 {
                    assert_eq!(qd.indicator(&v, n), brute_indicator(&qd, &v, n), "{spec} {v:?} n={n}");
                }
            }
        }
    }

    #[test]
    fn trivial_class_gives_classical_indicators() {
        for spec in ["sym:3", "sym:4", "permgen:8;(1,2,3,4)(5,6,7,8);(1,5,3,7)(2,8,4,6)"] {
            let qd = double(spec);
            let g = qd.group();
            let table = character_table(g).unwrap();
            for n in 1..=8 {
                let nu = qd.sector_indicators(0, n);
                let via_f = qd.indicators_via_f(0, n);
                for w in 0..table.irrep_count() {
                    let classical = classical_indicator(g, &table, w, n);
                    assert_eq!(nu[w], classical, "{spec} n={n}");
                    assert_eq!(via_f[w], classical);
                }
            }
        }
        // S_3, 2-dim irrep, n = 2
        let g = make_group("sym:3").unwrap();
        let t = character_table(&g).unwrap();
        let w = t.degrees.iter().position(|&d| d == 2).unwrap();
        assert_eq!(classical_indicator(&g, &t, w, 2).as_integer(), Some(1));
        // quaternion 2-dim irrep is quaternionic
        let g = make_group("permgen:8;(1,2,3,4)(5,6,7,8);(1,5,3,7)(2,8,4,6)").unwrap();
        let t = character_table(&g).unwrap();
        let w = t.degrees.iter().position(|&d| d == 2).unwrap();
        assert_eq!(classical_indicator(&g, &t, w, 2).as_integer(), Some(-1));
    }

    #[test]
    fn count_function_basics() {
        let qd = double("sym:3");
        let f = qd.count_f(0, 2);
        assert_eq!(f.by_class[0], 4);
        let f1 = qd.count_f(0, 1);
        assert!(f1.pointwise.iter().all(|&v| v == 1));
        for class in 0..qd.sectors().len() {
            for n in 0..8 {
                let f = qd.count_f(class, n);
                let s = &qd.sectors()[class];
                assert!(f.is_class_function(&s.centralizer.group));
                let g = qd.group();
                let y_inv = g.inv(s.base_point);
                let direct = (0..g.order()).filter(|&x| g.pow(x, n) == g.pow(g.mul(y_inv, x), n)).count() as u64;
                assert_eq!(f.total(), direct);
            }
        }
    }

    #[test]
    fn identity_and_both_paths_agree() {
        for (spec, n_max) in [
            ("cyclic:1", 3),
            ("sym:3", 6),
            ("permgen:8;(1,2,3,4)(5,6,7,8);(1,5,3,7)(2,8,4,6)", 8),
            ("sym:4", 12),
            ("wreath:2,cyclic:3", 6),
        ] {
            let qd = double(spec);
            for class in 0..qd.sectors().len() {
                for n in 1..=n_max {
                    assert!(qd.identity_check(class, n), "{spec} class={class} n={n}");
                    assert_eq!(qd.sector_indicators(class, n), qd.indicators_via_f(class, n));
                }
            }
        }
    }

    #[test]
    fn zero_count_function_gives_zero() {
        let qd = double("sym:3");
        let s = &qd.sectors()[1];
        let mut f = qd.count_f(1, 3);
        f.pointwise.iter_mut().for_each(|v| *v = 0);
        f.by_class.iter_mut().for_each(|v| *v = 0);
        assert!(indicators_via_f(s, &f).iter().all(Cyclotomic::is_zero));
    }

    #[test]
    fn base_point_independence() {
        for spec in ["sym:4", "wreath:2,cyclic:3"] {
            let g = Arc::new(make_group(spec).unwrap());
            let qd = QuantumDouble::new(g.clone()).unwrap();
            for (k, c) in g.classes().classes.iter().enumerate() {
                let alt = *c.members.last().unwrap() as usize;
                let other = Sector::new(&g, k, alt).unwrap();
                let profile = |s: &Sector| {
                    let mut rows: Vec<(u64, Vec<Vec<i64>>)> = (0..s.irrep_count())
                        .map(|w| {
                            let vals = (1..=8).map(|n| sector_indicators(&g, s, n)[w].canonical()).collect();
                            (s.table.degrees[w], vals)
                        })
                        .collect();
                    rows.sort();
                    rows
                };
                assert_eq!(profile(&qd.sectors()[k]), profile(&other), "{spec} class {k}");
            }
        }
    }

    #[test]
    fn periodic_in_exponent_and_in_cyclotomic_subfield() {
        let qd = double("permgen:4;(1,2,3,4);(1,2)");
        let e = qd.group().exponent();
        for class in 0..qd.sectors().len() {
            for n in 1..=e {
                let a = qd.sector_indicators(class, n);
                assert_eq!(a, qd.sector_indicators(class, n + e));
                for v in &a {
                    assert!(v.in_subfield(n as u32), "n={n} {v}");
                }
            }
        }
    }

    #[test]
    fn galois_symmetry() {
        for spec in ["cyclic:4", "cyclic:6", "wreath:2,cyclic:2", "sym:4"] {
            let qd = double(spec);
            for class in 0..qd.sectors().len() {
                for n in 1..=8 {
                    assert!(qd.galois_check(class, n), "{spec} class={class} n={n}");
                }
            }
        }
    }

    #[test]
    fn integrality_reports() {
        let r = double("sym:3").integrality_report(6);
        assert!(r.all_integral());
        assert_eq!(r.values.len(), 8);
        assert_eq!(r.values[0].len(), 6);
        let r = double("wreath:2,cyclic:2").integrality_report(8);
        assert!(r.all_integral());
        let j = r.to_json();
        assert_eq!(j["group_spec"], "wreath:2,cyclic:2");
        assert_eq!(j["verdict"]["all_integral"], true);
        assert_eq!(j["indicators"][0][0][1], true);
    }
}
