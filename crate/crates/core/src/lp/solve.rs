use std::collections::VecDeque;

use super::rspp::build_rspp_scaled;
use super::simplex::{simplex_solve_with, SimplexOptions};
use super::{LpSolution, LpStatus, VarTag};
use crate::bigmath::to_f64_checked;
use crate::symmetry::QuotientGraph;
use crate::{Error, Result};

/// Values above this count as support.
pub const SUPPORT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducedMethod {
    /// Unit-cost shortest path on the quotient (all multipliers one).
    ShortestPath,
    Simplex,
}

/// Orbits and orbitals carrying flow in a reduced solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    /// First-layer orbits entered from the source.
    pub entry: Vec<bool>,
    /// `[layer][orbital]`.
    pub orbitals: Vec<Vec<bool>>,
    /// `[layer][orbit]`: flow leaving through gate `layer`.
    pub exits: Vec<Vec<bool>>,
}

impl Support {
    fn empty(q: &QuotientGraph) -> Self {
        Support {
            entry: vec![false; q.nodes_per_layer()],
            orbitals: vec![vec![false; q.arcs_per_layer()]; q.m()],
            exits: vec![vec![false; q.nodes_per_layer()]; q.m()],
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReducedSolution {
    pub opt: usize,
    /// Objective as computed (exact integer on the shortest-path route).
    pub objective: f64,
    pub method: ReducedMethod,
    pub support: Support,
    pub lp: Option<LpSolution>,
}

/// Solves the reduced problem, taking the shortest-path route when every
/// orbital has equal in and out degree.
pub fn solve_reduced(q: &QuotientGraph) -> Result<ReducedSolution> {
    solve_reduced_with(q, false, &SimplexOptions::default())
}

pub fn solve_reduced_with(q: &QuotientGraph, force_simplex: bool, opts: &SimplexOptions) -> Result<ReducedSolution> {
    if q.m() == 0 {
        return Ok(ReducedSolution {
            opt: 0,
            objective: 0.0,
            method: ReducedMethod::ShortestPath,
            support: Support::empty(q),
            lp: None,
        });
    }
    if q.has_unit_multipliers() && !force_simplex {
        let (opt, support) = shortest_path(q)?;
        log::info!("reduced problem solved by shortest path: {opt}");
        return Ok(ReducedSolution {
            opt,
            objective: opt as f64,
            method: ReducedMethod::ShortestPath,
            support,
            lp: None,
        });
    }

    let lp = build_rspp_scaled(q);
    let sol = simplex_solve_with(&lp, opts);
    if sol.status != LpStatus::Optimal {
        return Err(Error::Solver(format!(
            "simplex stopped with status {:?} after {} iterations",
            sol.status, sol.iterations
        )));
    }
    let rounded = sol.objective.round();
    if (sol.objective - rounded).abs() > SUPPORT_TOL || rounded < 0.0 {
        return Err(Error::Solver(format!("non-integral optimum {}", sol.objective)));
    }
    // Unscaled variables lie in [0, 1], so scaled ones are at most |Aut|.
    let bound = q.aut_order_f64();
    if let Some(v) = sol.values.iter().find(|&&v| v > bound + SUPPORT_TOL) {
        return Err(Error::Solver(format!(
            "variable value {v} exceeds its implied bound {bound}"
        )));
    }
    let mut support = Support::empty(q);
    for (j, &v) in sol.values.iter().enumerate() {
        if v <= SUPPORT_TOL {
            continue;
        }
        match lp.tags[j] {
            VarTag::Entry { node } => support.entry[node] = true,
            VarTag::Orbital { layer, arc } => support.orbitals[layer][arc] = true,
            VarTag::Exit { layer, node } => support.exits[layer][node] = true,
            VarTag::Network { .. } => unreachable!("not produced by the reduced program"),
        }
    }
    log::info!(
        "reduced problem solved by simplex: {} in {} iterations",
        sol.objective,
        sol.iterations
    );
    Ok(ReducedSolution {
        opt: rounded as usize,
        objective: sol.objective,
        method: ReducedMethod::Simplex,
        support,
        lp: Some(sol),
    })
}

/// Fewest orbital steps from any first-layer orbit to the sink.
///
/// Every order of an orbit has an outgoing arc in each of the orbit's
/// orbitals and compliance is constant on orbits, so this is the optimum of
/// the unreduced problem regardless of multipliers.
pub fn quotient_distance(q: &QuotientGraph) -> Option<usize> {
    if q.m() == 0 {
        return Some(0);
    }
    shortest_path(q).ok().map(|(d, _)| d)
}

/// 0-1 BFS over (layer, orbit) states: orbitals cost 1, exits cost 0.
fn shortest_path(q: &QuotientGraph) -> Result<(usize, Support)> {
    let n_nodes = q.nodes_per_layer();
    let m = q.m();
    let id = |k: usize, u: usize| k * n_nodes + u;
    let mut dist = vec![usize::MAX; m * n_nodes];
    // Predecessor: orbital id within the layer, or `EXIT` for a cross arc, or `ENTRY`.
    const ENTRY: usize = usize::MAX;
    const EXIT: usize = usize::MAX - 1;
    let mut pred = vec![ENTRY; m * n_nodes];
    let mut deque = VecDeque::new();
    for u in 0..n_nodes {
        dist[id(0, u)] = 0;
        deque.push_back((0usize, u));
    }
    let mut best: Option<(usize, usize)> = None;
    while let Some((k, u)) = deque.pop_front() {
        let d = dist[id(k, u)];
        if best.is_some_and(|(bd, _)| d >= bd) {
            continue;
        }
        if q.is_compliant(k, u) {
            if k + 1 == m {
                best = Some((d, u));
                continue;
            }
            let v = id(k + 1, u);
            if d < dist[v] {
                dist[v] = d;
                pred[v] = EXIT;
                deque.push_front((k + 1, u));
            }
        }
        for a in q.nodes()[u].arcs.clone() {
            let w = q.arcs()[a].dst;
            let v = id(k, w);
            if d + 1 < dist[v] {
                dist[v] = d + 1;
                pred[v] = a;
                deque.push_back((k, w));
            }
        }
    }
    let (opt, last) = best.ok_or_else(|| Error::Solver("sink unreachable in the quotient graph".into()))?;

    let mut support = Support::empty(q);
    support.exits[m - 1][last] = true;
    let (mut k, mut u) = (m - 1, last);
    loop {
        match pred[id(k, u)] {
            ENTRY => {
                support.entry[u] = true;
                break;
            }
            EXIT => {
                k -= 1;
                support.exits[k][u] = true;
            }
            a => {
                support.orbitals[k][a] = true;
                u = q.arcs()[a].src;
            }
        }
    }
    Ok((opt, support))
}

/// Left-hand side of the first degree row at a solution of the scaled program.
pub fn entry_degree(q: &QuotientGraph, sol: &LpSolution) -> f64 {
    let lp = build_rspp_scaled(q);
    lp.rows
        .first()
        .map_or(0.0, |r| r.coeffs.iter().map(|&(j, a)| a * sol.values[j]).sum())
}

/// Scaled orbit sizes as floats.
pub fn scaled_sizes(q: &QuotientGraph) -> Vec<f64> {
    q.nodes()
        .iter()
        .map(|nd| to_f64_checked(&nd.scaled_size, "scaled orbit size"))
        .collect()
}
