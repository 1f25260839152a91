use std::collections::{HashMap, HashSet};
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{BTau, Symmetry};
use crate::circuit::{Circuit, TwoQubitGate};
use crate::coupling::{AutCaps, Coupling};
use crate::perm::{Permutation, Transposition};
use crate::{Error, Result};

/// Size limits for quotient construction.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_nodes: usize,
    pub aut: AutCaps,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_nodes: 5_000_000,
            aut: AutCaps::default(),
        }
    }
}

/// One orbit of qubit orders within a layer.
#[derive(Clone, Debug)]
pub struct OrbitNode {
    pub rep: Permutation,
    pub b_tau: BTau,
    pub orbit_size: BigUint,
    /// `|S_n(F)| / |B_tau|`, which equals `orbit_size / |Aut|`.
    pub scaled_size: BigUint,
    /// Outgoing orbitals, indexed by edge class of `b_tau`.
    pub arcs: Range<usize>,
}

/// One orbit of intra-layer arcs (an orbital).
#[derive(Clone, Debug)]
pub struct OrbitalArc {
    pub src: usize,
    pub dst: usize,
    /// Edge class at the source representative.
    pub class: usize,
    /// Representative swap at the source representative.
    pub swap: Transposition,
    /// Arcs of the orbital leaving one order of the source orbit.
    pub d_out: usize,
    /// Arcs of the orbital entering one order of the destination orbit.
    pub d_in: usize,
    /// Number of concrete arcs in the orbital.
    pub size: BigUint,
}

/// Quotient of the layered graph: the per-layer orbit graph shared by all
/// layers, plus which orbits comply with each gate.
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    sym: Symmetry,
    gates: Vec<TwoQubitGate>,
    nodes: Vec<OrbitNode>,
    arcs: Vec<OrbitalArc>,
    index: HashMap<Permutation, usize>,
    compliant: Vec<Vec<usize>>,
}

struct Expanded {
    rep: Permutation,
    b_tau: BTau,
    /// (class, swap, destination rep, edge index at the destination rep)
    out: Vec<(usize, Transposition, Permutation, usize)>,
}

fn expand(sym: &Symmetry, rep: Permutation) -> Expanded {
    let g = &sym.coupling().graph;
    let b_tau = sym.b_tau(&rep);
    let out = b_tau
        .representative_edges()
        .iter()
        .enumerate()
        .map(|(class, &e)| {
            let (u, v) = g.edges()[e];
            let swap = Transposition::new(u, v).expect("simple graph");
            let canon = sym.canonical(&rep.then_swap(swap));
            let back = g
                .edge_id(canon.b.apply(u), canon.b.apply(v))
                .expect("automorphisms map edges to edges");
            (class, swap, canon.rep, back)
        })
        .collect();
    Expanded { rep, b_tau, out }
}

pub fn quotient_graph(circuit: &Circuit, coupling: &Coupling) -> Result<QuotientGraph> {
    QuotientGraph::build(circuit, coupling, Caps::default())
}

impl QuotientGraph {
    pub fn build(circuit: &Circuit, coupling: &Coupling, caps: Caps) -> Result<Self> {
        if circuit.n() != coupling.n() {
            return Err(Error::DegreeMismatch {
                left: circuit.n(),
                right: coupling.n(),
            });
        }
        let sym = Symmetry::new(coupling.clone(), circuit.fixing_pattern())?;
        let lower = sym.orbit_count_lower_bound();
        if lower > BigUint::from(caps.max_nodes) {
            return Err(Error::Cap(format!(
                "at least {lower} orbits per layer exceed the cap of {}; use a more symmetric coupling family or fewer qubits",
                caps.max_nodes
            )));
        }

        let start = sym.canonical(&Permutation::identity(sym.n())).rep;
        let mut seen: HashSet<Permutation> = HashSet::from([start.clone()]);
        let mut frontier = vec![start];
        let mut expanded: Vec<Expanded> = Vec::new();
        while !frontier.is_empty() {
            let level: Vec<Expanded> = frontier.into_par_iter().map(|rep| expand(&sym, rep)).collect();
            let mut next = Vec::new();
            for item in &level {
                for (_, _, dst, _) in &item.out {
                    if seen.insert(dst.clone()) {
                        next.push(dst.clone());
                    }
                }
            }
            if seen.len() > caps.max_nodes {
                return Err(Error::Cap(format!(
                    "more than {} orbits per layer; use a more symmetric coupling family or fewer qubits",
                    caps.max_nodes
                )));
            }
            expanded.extend(level);
            frontier = next;
        }
        expanded.sort_by(|a, b| a.rep.cmp(&b.rep));
        let index: HashMap<Permutation, usize> = expanded.iter().enumerate().map(|(i, e)| (e.rep.clone(), i)).collect();

        let mut nodes = Vec::with_capacity(expanded.len());
        let mut pending = Vec::new();
        for (i, e) in expanded.into_iter().enumerate() {
            let orbit_size = sym.orbit_size(&e.b_tau);
            let scaled_size = sym.sym_order() / e.b_tau.order();
            let first = pending.len();
            for (class, swap, dst, back) in e.out {
                pending.push((i, class, swap, index[&dst], back));
            }
            nodes.push(OrbitNode {
                rep: e.rep,
                b_tau: e.b_tau,
                orbit_size,
                scaled_size,
                arcs: first..pending.len(),
            });
        }
        let arcs: Vec<OrbitalArc> = pending
            .into_iter()
            .map(|(src, class, swap, dst, back)| {
                let d_out = nodes[src].b_tau.class_size(class);
                let dst_b = &nodes[dst].b_tau;
                let d_in = dst_b.class_size(dst_b.edge_class(back));
                let size = &nodes[src].orbit_size * BigUint::from(d_out);
                debug_assert_eq!(size, &nodes[dst].orbit_size * BigUint::from(d_in));
                OrbitalArc {
                    src,
                    dst,
                    class,
                    swap,
                    d_out,
                    d_in,
                    size,
                }
            })
            .collect();

        let g = &sym.coupling().graph;
        let inverses: Vec<Permutation> = nodes.iter().map(|nd| nd.rep.inverse()).collect();
        let compliant = circuit
            .gates()
            .iter()
            .map(|gate| {
                (0..nodes.len())
                    .filter(|&u| g.has_edge(inverses[u].apply(gate.a()), inverses[u].apply(gate.b())))
                    .collect()
            })
            .collect();
        log::debug!(
            "quotient: {} orbits, {} orbitals per layer, {} gates",
            nodes.len(),
            arcs.len(),
            circuit.m()
        );
        Ok(QuotientGraph {
            sym,
            gates: circuit.gates().to_vec(),
            nodes,
            arcs,
            index,
            compliant,
        })
    }

    pub fn symmetry(&self) -> &Symmetry {
        &self.sym
    }

    pub fn coupling(&self) -> &Coupling {
        self.sym.coupling()
    }

    pub fn n(&self) -> usize {
        self.sym.n()
    }

    /// Number of gates (layers).
    pub fn m(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[TwoQubitGate] {
        &self.gates
    }

    pub fn nodes(&self) -> &[OrbitNode] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[OrbitalArc] {
        &self.arcs
    }

    /// Node id of a canonical representative.
    pub fn node_of(&self, rep: &Permutation) -> Option<usize> {
        self.index.get(rep).copied()
    }

    /// Orbits complying with gate `k` (0-based), sorted.
    pub fn compliant(&self, k: usize) -> &[usize] {
        &self.compliant[k]
    }

    pub fn is_compliant(&self, k: usize, node: usize) -> bool {
        self.compliant[k].binary_search(&node).is_ok()
    }

    pub fn nodes_per_layer(&self) -> usize {
        self.nodes.len()
    }

    pub fn arcs_per_layer(&self) -> usize {
        self.arcs.len()
    }

    pub fn cross_arcs(&self) -> Vec<usize> {
        self.compliant.iter().map(Vec::len).collect()
    }

    /// Variables of the reduced program: `m·|A/G| + |V/G| + Σ_k |F^k/G|`.
    pub fn num_variables(&self) -> usize {
        self.m() * self.arcs.len() + self.nodes.len() + self.cross_arcs().iter().sum::<usize>()
    }

    /// Constraints of the reduced program: `m·|V/G| + 2`.
    pub fn num_constraints(&self) -> usize {
        self.m() * self.nodes.len() + 2
    }

    /// True when every orbital enters and leaves orders equally often.
    pub fn has_unit_multipliers(&self) -> bool {
        self.arcs.iter().all(|a| a.d_in == a.d_out)
    }

    /// `|Aut|` as a float.
    pub fn aut_order_f64(&self) -> f64 {
        self.sym.aut_order().to_f64().unwrap_or(f64::INFINITY)
    }
}
