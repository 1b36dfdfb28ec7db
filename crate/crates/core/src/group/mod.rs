//! Concrete finite groups with canonically indexed elements.
//!
//! Every group is fully enumerated. Elements are fixed-width `u16` vectors
//! whose meaning depends on the [`Law`]; index 0 is always the identity.

mod classes;
mod law;
mod parse;
pub mod wreath;

pub use classes::{centralizer, Centralizer, ClassData, ConjugacyClass};
pub use law::Law;
pub(crate) use parse::is_prime as parse_is_prime;
pub use parse::{make_group, make_group_with_cap, parse_cyclic_moduli, DEFAULT_ORDER_CAP};

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Groups up to this order get a full multiplication table.
const TABLE_LIMIT: usize = 2048;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Abelian(Vec<u16>),
    Symmetric(usize),
    Wreath {
        degree: usize,
        moduli: Vec<u16>,
    },
    PermGen {
        degree: usize,
        generators: Vec<Vec<u16>>,
    },
    TruncSeries(u16),
    /// A subgroup of the group with the given spec.
    Subgroup(String),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn moduli(m: &[u16]) -> String {
            m.iter().map(u16::to_string).collect::<Vec<_>>().join("x")
        }
        match self {
            Family::Abelian(m) => write!(f, "cyclic:{}", moduli(m)),
            Family::Symmetric(n) => write!(f, "sym:{n}"),
            Family::Wreath { degree, moduli: m } => write!(f, "wreath:{degree},cyclic:{}", moduli(m)),
            Family::PermGen { degree, generators } => {
                write!(f, "permgen:{degree}")?;
                for g in generators {
                    write!(f, ";{}", law::cycle_notation(g))?;
                }
                Ok(())
            }
            Family::TruncSeries(p) => write!(f, "truncseries:{p}"),
            Family::Subgroup(parent) => write!(f, "subgroup of {parent}"),
        }
    }
}

pub struct FiniteGroup {
    family: Family,
    law: Law,
    width: usize,
    elems: Vec<u16>,
    lookup: HashMap<Box<[u16]>, u32>,
    inverses: Vec<u32>,
    generators: Vec<u32>,
    table: Option<Vec<u32>>,
    classes: OnceLock<ClassData>,
    exponent: OnceLock<u64>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("family", &self.family.to_string())
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    /// Enumerates the group generated by `gens` by breadth-first right
    /// multiplication. Generators are sorted first so the indexing is
    /// reproducible.
    pub(crate) fn from_generators(family: Family, law: Law, mut gens: Vec<Vec<u16>>, cap: u64) -> Result<Self> {
        gens.sort();
        gens.dedup();
        let id = law.identity();
        gens.retain(|g| *g != id);
        let width = id.len();
        let mut elems = id.clone();
        let mut lookup: HashMap<Box<[u16]>, u32> = HashMap::new();
        lookup.insert(id.into_boxed_slice(), 0);
        let mut queue = VecDeque::from([0usize]);
        let mut buf = vec![0u16; width];
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                law.compose(&elems[x * width..(x + 1) * width], g, &mut buf);
                if !lookup.contains_key(buf.as_slice()) {
                    let idx = lookup.len();
                    if idx as u64 >= cap {
                        return Err(Error::ResourceCap { order: idx as u128 + 1, cap });
                    }
                    lookup.insert(buf.clone().into_boxed_slice(), idx as u32);
                    elems.extend_from_slice(&buf);
                    queue.push_back(idx);
                }
            }
        }
        let generators = gens.iter().map(|g| lookup[g.as_slice()]).collect();
        Ok(Self::finish(family, law, elems, lookup, generators))
    }

    /// Builds a group from a complete element list (identity first).
    pub(crate) fn from_elements(family: Family, law: Law, elements: Vec<Vec<u16>>, generators: Vec<u32>) -> Self {
        let width = law.width();
        let mut elems = Vec::with_capacity(elements.len() * width);
        let mut lookup = HashMap::with_capacity(elements.len());
        for (i, e) in elements.into_iter().enumerate() {
            elems.extend_from_slice(&e);
            lookup.insert(e.into_boxed_slice(), i as u32);
        }
        debug_assert_eq!(&elems[..width], law.identity().as_slice());
        Self::finish(family, law, elems, lookup, generators)
    }

    fn finish(
        family: Family,
        law: Law,
        elems: Vec<u16>,
        lookup: HashMap<Box<[u16]>, u32>,
        generators: Vec<u32>,
    ) -> Self {
        let width = law.width();
        let n = lookup.len();
        let mut buf = vec![0u16; width];
        let inverses = (0..n)
            .map(|i| {
                law.invert(&elems[i * width..(i + 1) * width], &mut buf);
                lookup[buf.as_slice()]
            })
            .collect();
        let mut group = FiniteGroup {
            family,
            law,
            width,
            elems,
            lookup,
            inverses,
            generators,
            table: None,
            classes: OnceLock::new(),
            exponent: OnceLock::new(),
        };
        if n <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    table.push(group.mul_slow(a, b) as u32);
                }
            }
            group.table = Some(table);
        }
        group
    }

    /// The subgroup on the given ambient indices, which must be closed under
    /// multiplication. Local indices follow the ascending ambient order.
    pub fn subgroup(&self, members: &[u32]) -> FiniteGroup {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        assert_eq!(members.first(), Some(&0), "subgroup must contain the identity");
        let elements: Vec<Vec<u16>> = members.iter().map(|&i| self.element(i as usize).to_vec()).collect();
        let mut sub = FiniteGroup::from_elements(
            Family::Subgroup(self.family.to_string()),
            self.law.clone(),
            elements,
            Vec::new(),
        );
        sub.generators = sub.greedy_generators();
        sub
    }

    /// Scans elements in index order, keeping each one not already generated.
    fn greedy_generators(&self) -> Vec<u32> {
        let n = self.order();
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut closure = vec![0usize];
        let mut gens: Vec<u32> = Vec::new();
        for x in 1..n {
            if inside[x] {
                continue;
            }
            gens.push(x as u32);
            let mut queue: VecDeque<usize> = closure.iter().copied().collect();
            while let Some(a) = queue.pop_front() {
                for &g in &gens {
                    let b = self.mul(a, g as usize);
                    if !inside[b] {
                        inside[b] = true;
                        closure.push(b);
                        queue.push_back(b);
                    }
                }
            }
        }
        gens
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// The group-spec string this group was built from.
    pub fn spec(&self) -> String {
        self.family.to_string()
    }

    pub fn law(&self) -> &Law {
        &self.law
    }

    pub fn order(&self) -> usize {
        self.inverses.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn element(&self, i: usize) -> &[u16] {
        &self.elems[i * self.width..(i + 1) * self.width]
    }

    pub fn index_of(&self, x: &[u16]) -> Option<usize> {
        self.lookup.get(x).map(|&i| i as usize)
    }

    fn mul_slow(&self, a: usize, b: usize) -> usize {
        let mut buf = vec![0u16; self.width];
        self.law.compose(self.element(a), self.element(b), &mut buf);
        self.lookup[buf.as_slice()] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `by * x * by^-1`
    pub fn conj(&self, x: usize, by: usize) -> usize {
        self.mul(self.mul(by, x), self.inv(by))
    }

    /// Compares `ab` and `ba` without an index lookup.
    pub fn commutes(&self, a: usize, b: usize) -> bool {
        if let Some(t) = &self.table {
            let n = self.order();
            return t[a * n + b] == t[b * n + a];
        }
        let mut ab = vec![0u16; self.width];
        let mut ba = vec![0u16; self.width];
        self.law.compose(self.element(a), self.element(b), &mut ab);
        self.law.compose(self.element(b), self.element(a), &mut ba);
        ab == ba
    }

    pub fn pow(&self, a: usize, mut n: u64) -> usize {
        let mut result = 0;
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(result, base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(base, base);
            }
        }
        result
    }

    /// `x -> x^n` for every element.
    pub fn power_map(&self, n: u64) -> Vec<u32> {
        let f = |x: usize| self.pow(x, n) as u32;
        #[cfg(feature = "parallel")]
        if self.order() > 100_000 {
            use rayon::prelude::*;
            return (0..self.order()).into_par_iter().map(f).collect();
        }
        (0..self.order()).map(f).collect()
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> u64 {
        *self.exponent.get_or_init(|| {
            self.classes().classes.iter().map(|c| self.element_order(c.representative)).fold(1, |acc, o| acc.lcm(&o))
        })
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.commutes(a as usize, b as usize)))
    }

    /// Conjugacy classes, computed on first use.
    pub fn classes(&self) -> &ClassData {
        self.classes.get_or_init(|| classes::conjugacy_classes(self))
    }

    pub fn class_count(&self) -> usize {
        self.classes().classes.len()
    }

    /// Class index of `g^n` for each class representative `g`.
    pub fn power_class_map(&self, n: u64) -> Vec<usize> {
        let cd = self.classes();
        cd.classes.iter().map(|c| cd.class_of[self.pow(c.representative, n)] as usize).collect()
    }

    /// Exhaustive check of the group axioms on the indexed element set.
    pub fn verify_axioms(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| self.mul(0, x) == x && self.mul(x, 0) == x && self.mul(x, self.inv(x)) == 0)
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    let ab = self.mul(a, b);
                    (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
                })
            })
    }
}
