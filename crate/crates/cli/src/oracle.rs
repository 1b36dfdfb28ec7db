//! Exhaustive counterparts of the structured solvers, for fuzzing.

use qdouble::abelian::{torsion_subgroup, AbElem, AbLinearSystem, VarDomain};

/// Number of solutions of `sys`, by enumerating the product of the
/// variable domains.
pub fn brute_force_count(sys: &AbLinearSystem) -> u64 {
    let b = &sys.group;
    let domains: Vec<Vec<AbElem>> = sys
        .domains
        .iter()
        .map(|d| match d {
            VarDomain::Full => b.elements(),
            VarDomain::Torsion(k) => torsion_subgroup(b, *k).expect("positive index").elements(b),
        })
        .collect();
    let mut idx = vec![0usize; domains.len()];
    let mut count = 0;
    loop {
        let x: Vec<AbElem> = idx.iter().zip(&domains).map(|(&i, d)| d[i].clone()).collect();
        count += sys.is_solution(&x) as u64;
        let mut k = 0;
        loop {
            if k == idx.len() {
                return count;
            }
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
