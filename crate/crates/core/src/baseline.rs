//! Brute-force reference: shortest path on the full layered graph of qubit
//! orders, and explicit group averaging of a path flow.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use itertools::Itertools;

use crate::circuit::Circuit;
use crate::coupling::{Coupling, CouplingGraph};
use crate::perm::{compose, conjugate_transposition, Permutation};
use crate::reconstruct::{NncpSolution, ScheduledSwap};
use crate::symmetry::Symmetry;
use crate::{Error, Result};

/// Largest degree accepted by [`solve_spp`].
pub const MAX_SPP_N: usize = 8;
/// Largest degree accepted by [`reynolds_check`].
pub const MAX_REYNOLDS_N: usize = 5;
/// Largest `|S_n(F)|·|Aut|` accepted by [`reynolds_check`].
pub const MAX_GROUP_ELEMENTS: usize = 20_000;

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn complies(tau: &Permutation, inv: &mut [usize], g: &CouplingGraph, a: usize, b: usize) -> bool {
    for (x, &q) in tau.as_slice().iter().enumerate() {
        inv[q] = x;
    }
    g.has_edge(inv[a], inv[b])
}

const FROM_SOURCE: u32 = u32::MAX;
const FROM_PREV_LAYER: u32 = u32::MAX - 1;

/// Dijkstra over `(layer, rank of order)` with neighbours generated on the
/// fly. SWAPs cost one, layer changes and the initial placement are free.
pub fn solve_spp(c: &Circuit, g: &CouplingGraph) -> Result<NncpSolution> {
    let n = c.n();
    if n != g.n() {
        return Err(Error::DegreeMismatch { left: n, right: g.n() });
    }
    if n > MAX_SPP_N {
        return Err(Error::Cap(format!(
            "explicit layered graph needs n <= {MAX_SPP_N}, got {n}; use the reduced method"
        )));
    }
    let m = c.m();
    if m == 0 {
        return Ok(NncpSolution::from_walk(Vec::new(), Vec::new()));
    }
    let nf = factorial(n);
    let edges = g.transpositions();
    let id = |k: usize, r: usize| k * nf + r;
    let mut dist = vec![u32::MAX; m * nf];
    let mut pred = vec![FROM_SOURCE; m * nf];
    let mut heap = BinaryHeap::new();
    dist[..nf].fill(0);
    heap.extend((0..nf).map(|r| Reverse((0u32, 0usize, r))));
    let mut inv = vec![0; n];
    let mut goal = None;
    while let Some(Reverse((d, k, r))) = heap.pop() {
        if d > dist[id(k, r)] {
            continue;
        }
        let tau = Permutation::unrank(n, r);
        let gate = c.gates()[k];
        if complies(&tau, &mut inv, g, gate.a(), gate.b()) {
            if k + 1 == m {
                goal = Some(r);
                break;
            }
            let v = id(k + 1, r);
            if d < dist[v] {
                dist[v] = d;
                pred[v] = FROM_PREV_LAYER;
                heap.push(Reverse((d, k + 1, r)));
            }
        }
        for (e, &t) in edges.iter().enumerate() {
            let s = tau.then_swap(t).rank();
            let v = id(k, s);
            if d + 1 < dist[v] {
                dist[v] = d + 1;
                pred[v] = e as u32;
                heap.push(Reverse((d + 1, k, s)));
            }
        }
    }
    let last = goal.ok_or_else(|| Error::Solver("no compliant path through the layered graph".into()))?;

    let mut orders = vec![Permutation::identity(n); m];
    let mut swaps = Vec::new();
    let (mut k, mut r) = (m - 1, last);
    orders[k] = Permutation::unrank(n, r);
    loop {
        match pred[id(k, r)] {
            FROM_SOURCE => break,
            FROM_PREV_LAYER => {
                k -= 1;
                orders[k] = Permutation::unrank(n, r);
            }
            e => {
                let t = edges[e as usize];
                swaps.push(ScheduledSwap { after_gate: k, swap: t });
                r = Permutation::unrank(n, r).then_swap(t).rank();
            }
        }
    }
    swaps.reverse();
    Ok(NncpSolution::from_walk(orders, swaps))
}

/// A flow on the explicit layered graph: entry arcs from the source, SWAP
/// arcs within each layer, and cross arcs out of each layer (to the sink
/// after the last gate).
#[derive(Clone, Debug, PartialEq)]
pub struct SppFlow {
    n: usize,
    m: usize,
    num_edges: usize,
    /// `[rank]`
    pub entry: Vec<f64>,
    /// `[(k·n! + rank)·|E| + edge]` for the arc `(tau, tau∘t_edge)`.
    pub intra: Vec<f64>,
    /// `[k·n! + rank]`
    pub cross: Vec<f64>,
}

impl SppFlow {
    fn zeros(n: usize, m: usize, num_edges: usize) -> Self {
        let nf = factorial(n);
        SppFlow {
            n,
            m,
            num_edges,
            entry: vec![0.0; nf],
            intra: vec![0.0; m * nf * num_edges],
            cross: vec![0.0; m * nf],
        }
    }

    /// Indicator of the path a schedule takes through the layered graph.
    pub fn indicator(sol: &NncpSolution, g: &CouplingGraph) -> Result<Self> {
        let n = g.n();
        let m = sol.orders.len();
        let mut flow = SppFlow::zeros(n, m, g.edges().len());
        if m == 0 {
            return Ok(flow);
        }
        let nf = factorial(n);
        flow.entry[sol.orders[0].rank()] = 1.0;
        let mut next = 0;
        for k in 0..m {
            if k > 0 {
                let mut tau = sol.orders[k - 1].clone();
                while next < sol.swaps.len() && sol.swaps[next].after_gate == k {
                    let t = sol.swaps[next].swap;
                    let e = g
                        .edge_id(t.lo(), t.hi())
                        .ok_or_else(|| Error::Precondition(format!("swap {t} is not a coupling edge")))?;
                    flow.intra[(k * nf + tau.rank()) * flow.num_edges + e] += 1.0;
                    tau = tau.then_swap(t);
                    next += 1;
                }
                if tau != sol.orders[k] {
                    return Err(Error::Precondition(format!("swaps do not lead to order {}", k + 1)));
                }
            }
            flow.cross[k * nf + sol.orders[k].rank()] += 1.0;
        }
        Ok(flow)
    }

    pub fn objective(&self) -> f64 {
        self.intra.iter().sum()
    }

    fn nonzeros(&self) -> impl Iterator<Item = (Slot, f64)> + '_ {
        let entry = self.entry.iter().enumerate().map(|(i, &v)| (Slot::Entry(i), v));
        let intra = self.intra.iter().enumerate().map(|(i, &v)| (Slot::Intra(i), v));
        let cross = self.cross.iter().enumerate().map(|(i, &v)| (Slot::Cross(i), v));
        entry.chain(intra).chain(cross).filter(|&(_, v)| v != 0.0)
    }

    fn add(&mut self, slot: Slot, v: f64) {
        match slot {
            Slot::Entry(i) => self.entry[i] += v,
            Slot::Intra(i) => self.intra[i] += v,
            Slot::Cross(i) => self.cross[i] += v,
        }
    }

    /// Largest violation among the source row, sink row and conservation at
    /// every order of every layer.
    pub fn max_residual(&self, g: &CouplingGraph) -> f64 {
        let nf = factorial(self.n);
        let edges = g.transpositions();
        let mut worst = (self.entry.iter().sum::<f64>() - 1.0).abs();
        if self.m == 0 {
            return 0.0;
        }
        let last = (self.m - 1) * nf;
        worst = worst.max((self.cross[last..].iter().sum::<f64>() - 1.0).abs());
        for k in 0..self.m {
            for r in 0..nf {
                let tau = Permutation::unrank(self.n, r);
                let inflow_prev = if k == 0 {
                    self.entry[r]
                } else {
                    self.cross[(k - 1) * nf + r]
                };
                let mut net = inflow_prev - self.cross[k * nf + r];
                for (e, &t) in edges.iter().enumerate() {
                    let s = tau.then_swap(t).rank();
                    net += self.intra[(k * nf + s) * self.num_edges + e];
                    net -= self.intra[(k * nf + r) * self.num_edges + e];
                }
                worst = worst.max(net.abs());
            }
        }
        worst
    }

    pub fn max_bound_violation(&self) -> f64 {
        self.entry
            .iter()
            .chain(&self.intra)
            .chain(&self.cross)
            .map(|&v| (-v).max(v - 1.0).max(0.0))
            .fold(0.0, f64::max)
    }

    fn max_abs_diff(&self, other: &SppFlow) -> f64 {
        let a = self.entry.iter().chain(&self.intra).chain(&self.cross);
        let b = other.entry.iter().chain(&other.intra).chain(&other.cross);
        a.zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Entry(usize),
    Intra(usize),
    Cross(usize),
}

/// All permutations fixing each part setwise.
fn young_elements(n: usize, parts: &[Vec<usize>]) -> Vec<Permutation> {
    parts
        .iter()
        .map(|part| part.iter().copied().permutations(part.len()).collect::<Vec<_>>())
        .multi_cartesian_product()
        .map(|images| {
            let mut p = vec![0; n];
            for (part, image) in parts.iter().zip(&images) {
                for (&x, &y) in part.iter().zip(image) {
                    p[x] = y;
                }
            }
            Permutation::from_vec(p).expect("parts partition the points")
        })
        .collect()
}

/// Result of averaging a flow over the symmetry group.
#[derive(Clone, Debug)]
pub struct ReynoldsReport {
    pub group_order: usize,
    pub objective_before: f64,
    pub objective_after: f64,
    pub max_residual: f64,
    pub max_bound_violation: f64,
    /// `max |ψ(ψ(x)) − ψ(x)|`.
    pub idempotence_error: f64,
    /// Largest difference of averaged values within one orbit or orbital.
    pub orbit_spread: f64,
}

impl ReynoldsReport {
    pub fn ok(&self, tol: f64) -> bool {
        self.max_residual <= tol
            && self.max_bound_violation <= tol
            && (self.objective_before - self.objective_after).abs() <= tol
            && self.idempotence_error <= tol
            && self.orbit_spread <= 1e-12
    }
}

/// Averages `flow` over every `(a, b)` with `a` fixing the circuit's classes
/// and `b` a coupling automorphism, acting by `tau ↦ a∘tau∘b⁻¹`.
pub fn reynolds_check(c: &Circuit, coupling: &Coupling, flow: &SppFlow) -> Result<ReynoldsReport> {
    let n = c.n();
    if n > MAX_REYNOLDS_N {
        return Err(Error::Cap(format!(
            "group averaging needs n <= {MAX_REYNOLDS_N}, got {n}"
        )));
    }
    let fixing = c.fixing_pattern();
    let left = young_elements(n, fixing.classes());
    let right: Vec<Permutation> = match (coupling.aut.elements(), coupling.aut.blocks()) {
        (Some(el), _) => el.to_vec(),
        (None, Some(blocks)) => young_elements(n, blocks),
        (None, None) => return Err(Error::Cap("automorphism group is not enumerated".into())),
    };
    let order = left.len() * right.len();
    if order > MAX_GROUP_ELEMENTS {
        return Err(Error::Cap(format!(
            "group of order {order} exceeds {MAX_GROUP_ELEMENTS}"
        )));
    }
    let g = &coupling.graph;
    let group: Vec<(Permutation, Permutation)> = left
        .iter()
        .cartesian_product(&right)
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    let averaged = average(flow, &group, g);
    let twice = average(&averaged, &group, g);

    let sym = Symmetry::new(coupling.clone(), fixing)?;
    let spread = orbit_spread(&averaged, &sym, g);
    Ok(ReynoldsReport {
        group_order: order,
        objective_before: flow.objective(),
        objective_after: averaged.objective(),
        max_residual: averaged.max_residual(g),
        max_bound_violation: averaged.max_bound_violation(),
        idempotence_error: twice.max_abs_diff(&averaged),
        orbit_spread: spread,
    })
}

fn average(flow: &SppFlow, group: &[(Permutation, Permutation)], g: &CouplingGraph) -> SppFlow {
    let nf = factorial(flow.n);
    let ne = flow.num_edges;
    let edges = g.transpositions();
    let w = 1.0 / group.len() as f64;
    let mut out = SppFlow::zeros(flow.n, flow.m, ne);
    let entries: Vec<(Slot, f64)> = flow.nonzeros().collect();
    for (a, b) in group {
        let b_inv = b.inverse();
        let act = |r: usize| {
            let tau = Permutation::unrank(flow.n, r);
            compose(&compose(a, &tau).expect("same degree"), &b_inv)
                .expect("same degree")
                .rank()
        };
        for &(slot, v) in &entries {
            let image = match slot {
                Slot::Entry(r) => Slot::Entry(act(r)),
                Slot::Cross(i) => Slot::Cross((i / nf) * nf + act(i % nf)),
                Slot::Intra(i) => {
                    let (node, e) = (i / ne, i % ne);
                    let (k, r) = (node / nf, node % nf);
                    let t = conjugate_transposition(edges[e], b);
                    let e2 = g.edge_id(t.lo(), t.hi()).expect("automorphism");
                    Slot::Intra((k * nf + act(r)) * ne + e2)
                }
            };
            out.add(image, w * v);
        }
    }
    out
}

/// Groups every variable by the orbit (or orbital) it belongs to and returns
/// the largest spread of values within a group.
fn orbit_spread(flow: &SppFlow, sym: &Symmetry, g: &CouplingGraph) -> f64 {
    let nf = factorial(flow.n);
    let ne = flow.num_edges;
    let edges = g.transpositions();
    // key: (kind, layer, orbit rep, edge class)
    let mut range: HashMap<(u8, usize, Permutation, usize), (f64, f64)> = HashMap::new();
    let mut note = |key, v: f64| {
        let e = range.entry(key).or_insert((v, v));
        e.0 = e.0.min(v);
        e.1 = e.1.max(v);
    };
    for r in 0..nf {
        let tau = Permutation::unrank(flow.n, r);
        let canon = sym.canonical(&tau);
        let b_tau = sym.b_tau(&canon.rep);
        note((0, 0, canon.rep.clone(), 0), flow.entry[r]);
        for k in 0..flow.m {
            note((1, k, canon.rep.clone(), 0), flow.cross[k * nf + r]);
            for (e, &t) in edges.iter().enumerate() {
                let s = conjugate_transposition(t, &canon.b);
                let class = b_tau.edge_class(g.edge_id(s.lo(), s.hi()).expect("automorphism"));
                note((2, k, canon.rep.clone(), class), flow.intra[(k * nf + r) * ne + e]);
            }
        }
    }
    range.values().map(|(lo, hi)| hi - lo).fold(0.0, f64::max)
}
