//! The symmetry group acting on qubit orders by `tau ↦ a ∘ tau ∘ b⁻¹`, where
//! `a` permutes qubits within fixing classes and `b` is a coupling-graph
//! automorphism; stabilizer subgroups and the quotient of one layer.

mod quotient;
mod stats;

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::bigmath::factorial;
use crate::circuit::FixingPattern;
use crate::coupling::{Coupling, Family};
use crate::perm::{compose, Permutation};
use crate::{Error, Result};

pub use quotient::{quotient_graph, Caps, OrbitNode, OrbitalArc, QuotientGraph};
pub use stats::ReductionStats;

/// Orbit representative of an order together with the location part of the
/// group element that maps the order onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    /// Lexicographically smallest element of the orbit.
    pub rep: Permutation,
    /// Automorphism `b` with `rep = a ∘ tau ∘ b⁻¹` for some class-preserving `a`.
    pub b: Permutation,
}

/// Subgroup of automorphisms fixing every preimage `tau⁻¹(S)` of a fixing
/// class setwise, and its orbits on the coupling edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BTau {
    order: BigUint,
    edge_class: Vec<usize>,
    class_sizes: Vec<usize>,
    class_reps: Vec<usize>,
}

impl BTau {
    fn from_edge_keys<K: Eq + std::hash::Hash + Copy>(order: BigUint, keys: &[K]) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let mut edge_class = Vec::with_capacity(keys.len());
        let mut class_sizes = Vec::new();
        let mut class_reps = Vec::new();
        for (e, k) in keys.iter().enumerate() {
            let id = *ids.entry(*k).or_insert_with(|| {
                class_sizes.push(0);
                class_reps.push(e);
                class_sizes.len() - 1
            });
            class_sizes[id] += 1;
            edge_class.push(id);
        }
        BTau {
            order,
            edge_class,
            class_sizes,
            class_reps,
        }
    }

    fn trivial(num_edges: usize) -> Self {
        BTau {
            order: BigUint::from(1u32),
            edge_class: (0..num_edges).collect(),
            class_sizes: vec![1; num_edges],
            class_reps: (0..num_edges).collect(),
        }
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Edge class of each coupling edge (edges indexed as in the graph).
    pub fn edge_class(&self, edge: usize) -> usize {
        self.edge_class[edge]
    }

    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn class_size(&self, class: usize) -> usize {
        self.class_sizes[class]
    }

    /// Smallest edge index in each class; classes are ordered by it.
    pub fn representative_edges(&self) -> &[usize] {
        &self.class_reps
    }

    /// Edge classes as lists of edge indices.
    pub fn edge_orbits(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_sizes.len()];
        for (e, &c) in self.edge_class.iter().enumerate() {
            out[c].push(e);
        }
        out
    }
}

/// Group action context for one circuit on one coupling graph.
#[derive(Clone, Debug)]
pub struct Symmetry {
    coupling: Coupling,
    fixing: FixingPattern,
    loc_block: Option<Vec<usize>>,
    sym_order: BigUint,
}

impl Symmetry {
    pub fn new(coupling: Coupling, fixing: FixingPattern) -> Result<Self> {
        if coupling.n() != fixing.n() {
            return Err(Error::DegreeMismatch {
                left: fixing.n(),
                right: coupling.n(),
            });
        }
        let loc_block = coupling.aut.blocks().map(|blocks| {
            let mut of = vec![0; coupling.n()];
            for (i, block) in blocks.iter().enumerate() {
                for &x in block {
                    of[x] = i;
                }
            }
            of
        });
        let sym_order = fixing.group_order();
        Ok(Symmetry {
            coupling,
            fixing,
            loc_block,
            sym_order,
        })
    }

    pub fn n(&self) -> usize {
        self.coupling.n()
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn fixing(&self) -> &FixingPattern {
        &self.fixing
    }

    /// `|S_n(F)| = 2^p · f!`.
    pub fn sym_order(&self) -> &BigUint {
        &self.sym_order
    }

    pub fn aut_order(&self) -> &BigUint {
        self.coupling.aut.order()
    }

    /// `|S_n(F)| · |Aut|`.
    pub fn group_order(&self) -> BigUint {
        &self.sym_order * self.aut_order()
    }

    /// `|Orb(tau)| = |S_n(F)| · |Aut| / |B_tau|`.
    pub fn orbit_size(&self, b: &BTau) -> BigUint {
        self.group_order() / b.order()
    }

    /// Smallest `a ∘ sigma` over class-preserving `a`, with `a` applied.
    fn canonical_left(&self, sigma: &Permutation) -> Permutation {
        let classes = self.fixing.classes();
        let mut next = vec![0usize; classes.len()];
        let out = sigma
            .as_slice()
            .iter()
            .map(|&q| {
                let c = self.fixing.class_of(q);
                let v = classes[c][next[c]];
                next[c] += 1;
                v
            })
            .collect();
        Permutation::from_vec_unchecked(out)
    }

    /// Orbit representative and witness.
    pub fn canonical(&self, tau: &Permutation) -> Canonical {
        match &self.loc_block {
            Some(loc_block) => self.canonical_blocks(tau, loc_block),
            None => self.canonical_enumerated(tau),
        }
    }

    fn canonical_enumerated(&self, tau: &Permutation) -> Canonical {
        let elements = self.coupling.aut.elements().expect("non-block groups are enumerated");
        let mut best: Option<(Permutation, &Permutation)> = None;
        for e in elements {
            let cand = self.canonical_left(&compose(tau, e).expect("same degree"));
            if best.as_ref().is_none_or(|(b, _)| cand < *b) {
                best = Some((cand, e));
            }
        }
        let (rep, e) = best.expect("group is non-empty");
        Canonical { rep, b: e.inverse() }
    }

    /// Within a product of symmetric groups on location blocks, an orbit is
    /// determined by how many qubits of each class sit in each block; the
    /// smallest member fills positions greedily.
    fn canonical_blocks(&self, tau: &Permutation, loc_block: &[usize]) -> Canonical {
        let n = tau.len();
        let classes = self.fixing.classes();
        let nc = classes.len();
        let nb = loc_block.iter().max().map_or(0, |&b| b + 1);
        let mut counts = vec![0usize; nb * nc];
        for x in 0..n {
            counts[loc_block[x] * nc + self.fixing.class_of(tau.apply(x))] += 1;
        }
        let mut active: Vec<Vec<usize>> = (0..nb)
            .map(|b| (0..nc).filter(|&c| counts[b * nc + c] > 0).collect())
            .collect();
        let mut next = vec![0usize; nc];
        let mut rep = vec![0usize; n];
        for x in 0..n {
            let b = loc_block[x];
            let (slot, &c) = active[b]
                .iter()
                .enumerate()
                .min_by_key(|&(_, &c)| classes[c][next[c]])
                .expect("counts cover every position");
            rep[x] = classes[c][next[c]];
            next[c] += 1;
            counts[b * nc + c] -= 1;
            if counts[b * nc + c] == 0 {
                active[b].swap_remove(slot);
            }
        }
        let rep = Permutation::from_vec_unchecked(rep);

        let key = |p: &Permutation, x: usize| (loc_block[x], self.fixing.class_of(p.apply(x)), x);
        let mut from: Vec<usize> = (0..n).collect();
        from.sort_unstable_by_key(|&x| key(tau, x));
        let mut to: Vec<usize> = (0..n).collect();
        to.sort_unstable_by_key(|&x| key(&rep, x));
        let mut b = vec![0usize; n];
        for (&x, &y) in from.iter().zip(&to) {
            b[x] = y;
        }
        Canonical {
            rep,
            b: Permutation::from_vec_unchecked(b),
        }
    }

    /// The stabilizer subgroup `B_tau` and its edge classes.
    pub fn b_tau(&self, tau: &Permutation) -> BTau {
        let g = &self.coupling.graph;
        if let Some(loc_block) = &self.loc_block {
            let n = tau.len();
            let nc = self.fixing.classes().len();
            let cell = |x: usize| loc_block[x] * nc + self.fixing.class_of(tau.apply(x));
            let mut cell_size: HashMap<usize, usize> = HashMap::new();
            for x in 0..n {
                *cell_size.entry(cell(x)).or_default() += 1;
            }
            let order = cell_size.values().map(|&k| factorial(k)).product();
            let keys: Vec<(usize, usize)> = g
                .edges()
                .iter()
                .map(|&(u, v)| {
                    let (cu, cv) = (cell(u), cell(v));
                    (cu.min(cv), cu.max(cv))
                })
                .collect();
            return BTau::from_edge_keys(order, &keys);
        }
        if self.coupling.family() == Family::Cycle && self.fixing.c() >= 3 {
            return BTau::trivial(g.edges().len());
        }
        let elements = self.coupling.aut.elements().expect("non-block groups are enumerated");
        let class_at: Vec<usize> = (0..tau.len()).map(|x| self.fixing.class_of(tau.apply(x))).collect();
        let members: Vec<&Permutation> = elements
            .iter()
            .filter(|b| (0..tau.len()).all(|x| class_at[b.apply(x)] == class_at[x]))
            .collect();
        let edges = g.edges();
        let mut parent: Vec<usize> = (0..edges.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for b in &members {
            for (i, &(u, v)) in edges.iter().enumerate() {
                let j = g.edge_id(b.apply(u), b.apply(v)).expect("automorphism");
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let keys: Vec<usize> = (0..edges.len()).map(|i| find(&mut parent, i)).collect();
        BTau::from_edge_keys(BigUint::from(members.len()), &keys)
    }

    /// `n! / (|S_n(F)| · |Aut|)`, a lower bound on the number of orbits.
    pub fn orbit_count_lower_bound(&self) -> BigUint {
        factorial(self.n()) / self.group_order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use itertools::Itertools;

    fn sym(coupling: Coupling, n: usize, pairs: &[(usize, usize)]) -> Symmetry {
        let c = Circuit::from_pairs(n, pairs).unwrap();
        Symmetry::new(coupling, c.fixing_pattern()).unwrap()
    }

    fn all_perms(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(|v| Permutation::from_vec(v).unwrap())
    }

    /// All class-preserving qubit relabellings.
    fn fixing_elements(fp: &FixingPattern) -> Vec<Permutation> {
        all_perms(fp.n())
            .filter(|a| (0..fp.n()).all(|q| fp.class_of(a.apply(q)) == fp.class_of(q)))
            .collect()
    }

    fn brute_orbit_min(s: &Symmetry, tau: &Permutation) -> Permutation {
        let auts: Vec<Permutation> = all_perms(s.n())
            .filter(|b| s.coupling().graph.preserves_edges(b))
            .collect();
        let mut best = tau.clone();
        for a in fixing_elements(s.fixing()) {
            for b in &auts {
                let p = compose(&compose(&a, tau).unwrap(), &b.inverse()).unwrap();
                best = best.min(p);
            }
        }
        best
    }

    fn check_witness(s: &Symmetry, tau: &Permutation, c: &Canonical) {
        assert!(s.coupling().graph.preserves_edges(&c.b));
        // a = rep ∘ b ∘ tau⁻¹ must preserve classes
        let a = compose(&compose(&c.rep, &c.b).unwrap(), &tau.inverse()).unwrap();
        for q in 0..s.n() {
            assert_eq!(s.fixing().class_of(a.apply(q)), s.fixing().class_of(q));
        }
    }

    #[test]
    fn canonical_is_orbit_minimum() {
        let cases = [
            sym(Coupling::star(5).unwrap(), 5, &[(1, 2)]),
            sym(Coupling::star(5).unwrap(), 5, &[(1, 2), (3, 4)]),
            sym(Coupling::cycle(5).unwrap(), 5, &[(1, 2)]),
            sym(Coupling::cycle(5).unwrap(), 5, &[(1, 2), (2, 3), (4, 5)]),
            sym(Coupling::biclique(2, 3).unwrap(), 5, &[(2, 4)]),
            sym(
                Coupling::general(5, &[(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap(),
                5,
                &[(1, 3)],
            ),
        ];
        for s in &cases {
            for tau in all_perms(5).step_by(7) {
                let c = s.canonical(&tau);
                assert_eq!(c.rep, brute_orbit_min(s, &tau));
                check_witness(s, &tau, &c);
            }
        }
    }

    /// B_tau by filtering brute-force automorphisms.
    fn brute_b_tau(s: &Symmetry, tau: &Permutation) -> (usize, Vec<usize>) {
        let g = &s.coupling().graph;
        let fp = s.fixing();
        let members: Vec<Permutation> = all_perms(s.n())
            .filter(|b| g.preserves_edges(b))
            .filter(|b| (0..s.n()).all(|x| fp.class_of(tau.apply(b.apply(x))) == fp.class_of(tau.apply(x))))
            .collect();
        let sizes = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                members
                    .iter()
                    .map(|b| g.edge_id(b.apply(u), b.apply(v)).unwrap())
                    .unique()
                    .count()
            })
            .collect();
        (members.len(), sizes)
    }

    #[test]
    fn b_tau_matches_brute_force() {
        let cases = [
            sym(Coupling::star(5).unwrap(), 5, &[]),
            sym(Coupling::star(5).unwrap(), 5, &[(1, 2)]),
            sym(Coupling::biclique(2, 3).unwrap(), 5, &[(1, 2), (3, 4)]),
            sym(Coupling::cycle(5).unwrap(), 5, &[(1, 2), (3, 4)]),
            sym(Coupling::cycle(6).unwrap(), 6, &[(1, 2), (2, 3)]),
        ];
        for s in &cases {
            for tau in all_perms(s.n()).step_by(5) {
                let b = s.b_tau(&tau);
                let (order, sizes) = brute_b_tau(s, &tau);
                assert_eq!(b.order(), &BigUint::from(order));
                for (e, size) in sizes.into_iter().enumerate() {
                    assert_eq!(b.class_size(b.edge_class(e)), size);
                }
            }
        }
    }

    #[test]
    fn star_single_gate_identity_example() {
        let s = sym(Coupling::star(4).unwrap(), 4, &[(1, 2)]);
        let b = s.b_tau(&Permutation::identity(4));
        assert_eq!(b.order(), &BigUint::from(2u32));
    }

    #[test]
    fn cycle_with_large_component_has_trivial_b_tau() {
        let s = sym(Coupling::cycle(6).unwrap(), 6, &[(1, 2), (2, 3)]);
        for tau in all_perms(6) {
            assert_eq!(s.b_tau(&tau).order(), &BigUint::from(1u32));
        }
    }
}
