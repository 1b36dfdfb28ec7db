use std::collections::VecDeque;
use std::sync::Arc;

use super::FiniteGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    /// Smallest member index.
    pub representative: usize,
    /// Ascending member indices.
    pub members: Vec<u32>,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct ClassData {
    /// Ordered by representative; the identity class comes first.
    pub classes: Vec<ConjugacyClass>,
    /// Class index of every element.
    pub class_of: Vec<u32>,
}

impl ClassData {
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }
}

/// Orbits of conjugation by the generators, found by breadth-first search
/// from each unassigned element in index order.
pub(super) fn conjugacy_classes(g: &FiniteGroup) -> ClassData {
    const UNSET: u32 = u32::MAX;
    let n = g.order();
    let mut class_of = vec![UNSET; n];
    let mut classes = Vec::new();
    let gens: Vec<(usize, usize)> = g.generators().iter().map(|&s| (s as usize, g.inv(s as usize))).collect();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if class_of[start] != UNSET {
            continue;
        }
        let k = classes.len() as u32;
        class_of[start] = k;
        let mut members = vec![start as u32];
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for &(s, s_inv) in &gens {
                let y = g.mul(g.mul(s_inv, x), s);
                if class_of[y] == UNSET {
                    class_of[y] = k;
                    members.push(y as u32);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        classes.push(ConjugacyClass { representative: start, size: members.len(), members });
    }
    ClassData { classes, class_of }
}

/// `Z_y = {x : xy = yx}` as a group of its own.
#[derive(Debug)]
pub struct Centralizer {
    pub ambient: Arc<FiniteGroup>,
    pub y: usize,
    pub group: FiniteGroup,
    /// Local index -> ambient index, ascending.
    pub embedding: Vec<u32>,
}

impl Centralizer {
    pub fn order(&self) -> usize {
        self.embedding.len()
    }

    pub fn local_index(&self, ambient: usize) -> Option<usize> {
        self.embedding.binary_search(&(ambient as u32)).ok()
    }

    pub fn ambient_index(&self, local: usize) -> usize {
        self.embedding[local] as usize
    }
}

pub fn centralizer(g: &Arc<FiniteGroup>, y: usize) -> Centralizer {
    let test = |x: usize| g.commutes(x, y);
    #[cfg(feature = "parallel")]
    let members: Vec<u32> = if g.order() > 100_000 {
        use rayon::prelude::*;
        (0..g.order()).into_par_iter().filter(|&x| test(x)).map(|x| x as u32).collect()
    } else {
        (0..g.order()).filter(|&x| test(x)).map(|x| x as u32).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let members: Vec<u32> = (0..g.order()).filter(|&x| test(x)).map(|x| x as u32).collect();
    let group = g.subgroup(&members);
    Centralizer { ambient: g.clone(), y, group, embedding: members }
}
