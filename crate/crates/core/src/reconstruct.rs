//! Lifting a reduced solution to an explicit SWAP schedule, and checking one.

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::coupling::CouplingGraph;
use crate::lp::ReducedSolution;
use crate::perm::{conjugate_transposition, Permutation, Transposition};
use crate::symmetry::QuotientGraph;
use crate::{Error, Result};

/// A SWAP inserted after the first `after_gate` gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScheduledSwap {
    pub after_gate: usize,
    pub swap: Transposition,
}

/// Qubit orders in force at each gate, and the SWAPs between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NncpSolution {
    pub opt: usize,
    /// `orders[k]` maps locations to qubits when gate `k` (0-based) runs.
    pub orders: Vec<Permutation>,
    /// In execution order.
    pub swaps: Vec<ScheduledSwap>,
}

#[derive(Serialize, Deserialize)]
struct SwapWire {
    after_gate: usize,
    swap: [usize; 2],
}

#[derive(Serialize, Deserialize)]
struct SolutionWire {
    schema: u32,
    opt: usize,
    orders: Vec<Vec<usize>>,
    swaps: Vec<SwapWire>,
}

impl NncpSolution {
    /// Builds the schedule from consecutive orders, which must differ by
    /// the given swaps.
    pub fn from_walk(orders: Vec<Permutation>, swaps: Vec<ScheduledSwap>) -> Self {
        NncpSolution {
            opt: swaps.len(),
            orders,
            swaps,
        }
    }

    /// JSON with 1-based qubit ids and locations.
    pub fn to_json(&self) -> String {
        let wire = SolutionWire {
            schema: 1,
            opt: self.opt,
            orders: self
                .orders
                .iter()
                .map(|p| p.as_slice().iter().map(|&x| x + 1).collect())
                .collect(),
            swaps: self
                .swaps
                .iter()
                .map(|s| SwapWire {
                    after_gate: s.after_gate,
                    swap: [s.swap.lo() + 1, s.swap.hi() + 1],
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: SolutionWire = serde_json::from_str(text)?;
        if wire.schema != 1 {
            return Err(Error::InvalidCircuit(format!(
                "unsupported solution schema {}",
                wire.schema
            )));
        }
        let orders = wire
            .orders
            .iter()
            .map(|o| Permutation::from_one_based(o))
            .collect::<Result<Vec<_>>>()?;
        let swaps = wire
            .swaps
            .iter()
            .map(|s| {
                if s.swap[0] == 0 || s.swap[1] == 0 {
                    return Err(Error::InvalidPermutation("swap locations are 1-based".into()));
                }
                let swap = Transposition::new(s.swap[0] - 1, s.swap[1] - 1)?;
                Ok(ScheduledSwap {
                    after_gate: s.after_gate,
                    swap,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NncpSolution {
            opt: wire.opt,
            orders,
            swaps,
        })
    }
}

/// Walks one concrete path through the support of `sol`.
///
/// At each order the walker canonicalizes, takes the supported cross arc if
/// there is one, and otherwise the smallest concrete SWAP whose orbital is
/// supported.
pub fn reconstruct(q: &QuotientGraph, sol: &ReducedSolution) -> Result<NncpSolution> {
    let m = q.m();
    if m == 0 {
        return Ok(NncpSolution::from_walk(Vec::new(), Vec::new()));
    }
    let sym = q.symmetry();
    let g = &q.coupling().graph;
    let support = &sol.support;
    let start = support
        .entry
        .iter()
        .position(|&s| s)
        .ok_or_else(|| dead_end("no supported first-layer orbit", Vec::new()))?;

    let mut tau = q.nodes()[start].rep.clone();
    let mut path = vec![tau.clone()];
    let mut orders = Vec::with_capacity(m);
    let mut swaps = Vec::new();
    for k in 0..m {
        loop {
            let canon = sym.canonical(&tau);
            let u = q
                .node_of(&canon.rep)
                .ok_or_else(|| dead_end("order outside the quotient graph", path.clone()))?;
            if support.exits[k][u] && q.is_compliant(k, u) {
                orders.push(tau.clone());
                break;
            }
            if swaps.len() >= sol.opt {
                return Err(dead_end(
                    &format!("walk in layer {} needs more than {} swaps", k + 1, sol.opt),
                    path,
                ));
            }
            let node = &q.nodes()[u];
            let step = g.transpositions().into_iter().find(|&t| {
                let s = conjugate_transposition(t, &canon.b);
                let e = g.edge_id(s.lo(), s.hi()).expect("automorphisms map edges to edges");
                support.orbitals[k][node.arcs.start + node.b_tau.edge_class(e)]
            });
            let t = step.ok_or_else(|| dead_end(&format!("no supported arc in layer {}", k + 1), path.clone()))?;
            tau = tau.then_swap(t);
            path.push(tau.clone());
            // The first order is free, so SWAPs before the first gate fold into it.
            if k > 0 {
                swaps.push(ScheduledSwap { after_gate: k, swap: t });
            }
        }
    }
    if swaps.len() != sol.opt {
        return Err(Error::Solver(format!(
            "reconstructed {} swaps against an optimum of {}",
            swaps.len(),
            sol.opt
        )));
    }
    Ok(NncpSolution::from_walk(orders, swaps))
}

fn dead_end(message: &str, partial: Vec<Permutation>) -> Error {
    Error::DeadEnd {
        message: message.to_string(),
        partial,
    }
}

/// Outcome of [`verify`]; `violation` names the first failed condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    pub violation: Option<String>,
}

impl VerifyReport {
    fn fail(message: String) -> Self {
        VerifyReport {
            ok: false,
            violation: Some(message),
        }
    }
}

/// Checks SWAPs against the coupling graph, compliance of every order, that
/// the listed SWAPs connect consecutive orders, and the SWAP count.
pub fn verify(sol: &NncpSolution, circuit: &Circuit, graph: &CouplingGraph) -> VerifyReport {
    let n = graph.n();
    let m = circuit.m();
    if circuit.n() != n {
        return VerifyReport::fail(format!("circuit has {} qubits, coupling graph {}", circuit.n(), n));
    }
    if sol.orders.len() != m {
        return VerifyReport::fail(format!("{} orders for {} gates", sol.orders.len(), m));
    }
    if let Some(k) = sol.orders.iter().position(|p| p.len() != n) {
        return VerifyReport::fail(format!("order {} has degree {}", k + 1, sol.orders[k].len()));
    }
    for (i, s) in sol.swaps.iter().enumerate() {
        if s.swap.hi() >= n || !graph.has_edge(s.swap.lo(), s.swap.hi()) {
            return VerifyReport::fail(format!("swap not in T: {} (swap {})", s.swap, i + 1));
        }
        if s.after_gate == 0 || s.after_gate >= m {
            return VerifyReport::fail(format!("swap {} placed after gate {}", i + 1, s.after_gate));
        }
        if i > 0 && sol.swaps[i - 1].after_gate > s.after_gate {
            return VerifyReport::fail(format!("swap {} out of execution order", i + 1));
        }
    }
    for (k, (order, gate)) in sol.orders.iter().zip(circuit.gates()).enumerate() {
        let inv = order.inverse();
        if !graph.has_edge(inv.apply(gate.a()), inv.apply(gate.b())) {
            return VerifyReport::fail(format!("gate {} non-compliant", k + 1));
        }
    }
    let mut next = 0;
    for k in 1..m {
        let mut tau = sol.orders[k - 1].clone();
        while next < sol.swaps.len() && sol.swaps[next].after_gate == k {
            tau = tau.then_swap(sol.swaps[next].swap);
            next += 1;
        }
        if tau != sol.orders[k] {
            return VerifyReport::fail(format!("orders {} and {} not connected by the listed swaps", k, k + 1));
        }
    }
    if sol.swaps.len() != sol.opt {
        return VerifyReport::fail(format!("{} swaps listed but opt is {}", sol.swaps.len(), sol.opt));
    }
    VerifyReport {
        ok: true,
        violation: None,
    }
}
