//! Generic finite-group handle and brute-force helpers.
//!
//! Everything here works on any group exposing element enumeration and
//! multiplication; this is the surface through which arbitrary finite
//! instances (Dedekind groups, materialized extensions) enter the
//! exhaustive checkers.

use std::collections::HashSet;
use std::hash::Hash;

use crate::error::{Error, Result};

/// A finite group by enumeration.
pub trait FiniteGroup {
    type Elem: Clone + Eq + Hash + Ord + std::fmt::Debug;

    fn elements(&self) -> Vec<Self::Elem>;
    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn group_order(&self) -> u64 {
        self.elements().len() as u64
    }
}

pub fn element_order<G: FiniteGroup>(g: &G, x: &G::Elem) -> u64 {
    let e = g.identity();
    let mut acc = x.clone();
    let mut n = 1u64;
    while acc != e {
        acc = g.op(&acc, x);
        n += 1;
    }
    n
}

/// `⟨x⟩` as a vector of powers `x^0, x^1, ...`.
pub fn cyclic_subgroup<G: FiniteGroup>(g: &G, x: &G::Elem) -> Vec<G::Elem> {
    let e = g.identity();
    let mut out = vec![e.clone()];
    let mut acc = x.clone();
    while acc != e {
        out.push(acc.clone());
        acc = g.op(&acc, x);
    }
    out
}

pub fn conjugate<G: FiniteGroup>(g: &G, x: &G::Elem, by: &G::Elem) -> G::Elem {
    g.op(&g.op(&g.inv(by), x), by)
}

/// Whether `⟨x⟩ ⊴ G`, by conjugating `x` over all of `G`.
pub fn is_cyclic_normal_brute<G: FiniteGroup>(g: &G, x: &G::Elem) -> bool {
    let sub: HashSet<G::Elem> = cyclic_subgroup(g, x).into_iter().collect();
    g.elements().iter().all(|y| sub.contains(&conjugate(g, x, y)))
}

/// `C_G(x)` by exhaustive commutation tests.
pub fn centralizer_brute<G: FiniteGroup>(g: &G, x: &G::Elem) -> Vec<G::Elem> {
    g.elements()
        .into_iter()
        .filter(|y| g.op(x, y) == g.op(y, x))
        .collect()
}

pub fn is_abelian<G: FiniteGroup>(g: &G) -> bool {
    let els = g.elements();
    for (i, a) in els.iter().enumerate() {
        for b in &els[i + 1..] {
            if g.op(a, b) != g.op(b, a) {
                return false;
            }
        }
    }
    true
}

/// Counterexample to the Dedekind property: `⟨x⟩^g ≠ ⟨x⟩`.
#[derive(Debug, Clone)]
pub struct DedekindWitness<E> {
    pub x: E,
    pub g: E,
}

/// Whether every cyclic subgroup (hence every subgroup) is normal.
pub fn is_dedekind<G: FiniteGroup>(g: &G, cap: u64) -> Result<std::result::Result<(), DedekindWitness<G::Elem>>> {
    let els = g.elements();
    if els.len() as u64 > cap {
        return Err(Error::OrderCapExceeded { order: els.len() as u128, cap });
    }
    for x in &els {
        let sub: HashSet<G::Elem> = cyclic_subgroup(g, x).into_iter().collect();
        for y in &els {
            if !sub.contains(&conjugate(g, x, y)) {
                return Ok(Err(DedekindWitness { x: x.clone(), g: y.clone() }));
            }
        }
    }
    Ok(Ok(()))
}

/// Closure of a generating set under the group operation.
pub fn subgroup_closure<G: FiniteGroup>(g: &G, gens: &[G::Elem]) -> Vec<G::Elem> {
    let mut set: HashSet<G::Elem> = HashSet::new();
    set.insert(g.identity());
    let mut frontier: Vec<G::Elem> = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for gen in gens {
            for y in [g.op(&x, gen), g.op(&x, &g.inv(gen))] {
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
    }
    let mut out: Vec<G::Elem> = set.into_iter().collect();
    out.sort();
    out
}

/// A small generating set, built greedily: every element not yet in the
/// closure of the chosen set is appended.
pub fn generating_set<G: FiniteGroup>(g: &G) -> Vec<G::Elem> {
    let els = g.elements();
    let mut gens: Vec<G::Elem> = Vec::new();
    let mut have: HashSet<G::Elem> = [g.identity()].into();
    for x in els {
        if !have.contains(&x) {
            gens.push(x);
            have = subgroup_closure(g, &gens).into_iter().collect();
        }
    }
    gens
}

/// The derived subgroup, as the closure of all commutators.
pub fn derived_subgroup<G: FiniteGroup>(g: &G, gens: &[G::Elem]) -> Vec<G::Elem> {
    let els = g.elements();
    let mut comms: Vec<G::Elem> = Vec::new();
    for a in gens {
        for b in &els {
            // [a, b] = a^-1 b^-1 a b; ranging b over all of G closes the
            // generator commutators under conjugation.
            let c = g.op(&g.op(&g.inv(a), &g.inv(b)), &g.op(a, b));
            comms.push(c);
        }
    }
    subgroup_closure(g, &comms)
}

/// A subgroup handle over a parent's elements, for abelianness checks.
struct SubgroupView<'a, G: FiniteGroup> {
    parent: &'a G,
    elems: Vec<G::Elem>,
}

impl<'a, G: FiniteGroup> FiniteGroup for SubgroupView<'a, G> {
    type Elem = G::Elem;
    fn elements(&self) -> Vec<G::Elem> {
        self.elems.clone()
    }
    fn identity(&self) -> G::Elem {
        self.parent.identity()
    }
    fn op(&self, a: &G::Elem, b: &G::Elem) -> G::Elem {
        self.parent.op(a, b)
    }
    fn inv(&self, a: &G::Elem) -> G::Elem {
        self.parent.inv(a)
    }
}

/// Whether the derived subgroup (generated from `gens`, which must generate
/// `G`) is abelian.
pub fn is_metabelian<G: FiniteGroup>(g: &G, gens: &[G::Elem]) -> bool {
    let derived = derived_subgroup(g, gens);
    is_abelian(&SubgroupView { parent: g, elems: derived })
}

pub fn center<G: FiniteGroup>(g: &G) -> Vec<G::Elem> {
    let els = g.elements();
    els.iter()
        .filter(|x| els.iter().all(|y| g.op(x, y) == g.op(y, x)))
        .cloned()
        .collect()
}

/// One canonical generator per distinct cyclic subgroup: the least generator
/// in the element order. Deduplicates `⟨x⟩ = ⟨x^j⟩`.
pub fn cyclic_subgroup_reps<G: FiniteGroup>(g: &G) -> Vec<G::Elem> {
    let mut reps = Vec::new();
    for x in g.elements() {
        let powers = cyclic_subgroup(g, &x);
        let n = powers.len() as u64;
        let canonical = powers
            .iter()
            .enumerate()
            .filter(|&(j, _)| crate::abelian::gcd(j as u64, n) == 1 || (n == 1 && j == 0))
            .map(|(_, y)| y)
            .min()
            .expect("nonempty");
        if *canonical == x {
            reps.push(x);
        }
    }
    reps
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    /// All subgroups of a small finite group, by closing every subset seed
    /// incrementally (BFS over the subgroup lattice).
    pub fn all_subgroups<G: FiniteGroup>(g: &G) -> Vec<Vec<G::Elem>> {
        let mut known: HashSet<Vec<G::Elem>> = HashSet::new();
        known.insert(vec![g.identity()]);
        let mut frontier: Vec<Vec<G::Elem>> = vec![vec![g.identity()]];
        while let Some(h) = frontier.pop() {
            for x in g.elements() {
                if h.contains(&x) {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(x);
                let bigger = subgroup_closure(g, &gens);
                if known.insert(bigger.clone()) {
                    frontier.push(bigger);
                }
            }
        }
        known.into_iter().collect()
    }

    pub fn is_normal_subgroup<G: FiniteGroup>(g: &G, h: &[G::Elem]) -> bool {
        let set: HashSet<G::Elem> = h.iter().cloned().collect();
        g.elements()
            .iter()
            .all(|y| h.iter().all(|x| set.contains(&conjugate(g, x, y))))
    }

    /// Exhaustive group-axiom check.
    pub fn check_group_axioms<G: FiniteGroup>(g: &G) {
        let els = g.elements();
        let e = g.identity();
        for a in &els {
            assert_eq!(g.op(a, &e), *a);
            assert_eq!(g.op(&e, a), *a);
            assert_eq!(g.op(a, &g.inv(a)), e);
            assert_eq!(g.op(&g.inv(a), a), e);
        }
        for a in &els {
            for b in &els {
                assert!(els.contains(&g.op(a, b)));
                for c in &els {
                    assert_eq!(g.op(&g.op(a, b), c), g.op(a, &g.op(b, c)));
                }
            }
        }
    }

    /// Randomized group-axiom check for larger instances.
    pub fn check_group_axioms_sampled<G: FiniteGroup>(g: &G, samples: usize, seed: u64) {
        let els = g.elements();
        let e = g.identity();
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state as usize
        };
        for _ in 0..samples {
            let a = &els[next() % els.len()];
            let b = &els[next() % els.len()];
            let c = &els[next() % els.len()];
            assert_eq!(g.op(&g.op(a, b), c), g.op(a, &g.op(b, c)));
            assert_eq!(g.op(a, &g.inv(a)), e);
            assert_eq!(g.op(&e, a), *a);
        }
    }
}
