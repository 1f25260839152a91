//! Dynamic program for the star coupling graph when no qubit relabelling
//! fixes the circuit.
//!
//! On a star only the qubit at the center matters, and moving any qubit to
//! the center takes exactly one SWAP.

use crate::circuit::Circuit;
use crate::perm::{Permutation, Transposition};
use crate::reconstruct::{NncpSolution, ScheduledSwap};
use crate::{Error, Result};

const INF: usize = usize::MAX;

/// `cost[k][q]`: fewest SWAPs to run gates `0..=k` with qubit `q` at the
/// center for gate `k`; `back[k][q]` the center used for gate `k-1`.
#[derive(Clone, Debug)]
pub struct DpTable {
    pub cost: Vec<Vec<usize>>,
    pub back: Vec<Vec<usize>>,
}

impl DpTable {
    pub fn build(c: &Circuit) -> Self {
        let n = c.n();
        let mut cost: Vec<Vec<usize>> = Vec::with_capacity(c.m());
        let mut back: Vec<Vec<usize>> = Vec::with_capacity(c.m());
        for (k, gate) in c.gates().iter().enumerate() {
            let mut row = vec![INF; n];
            let mut from = vec![INF; n];
            for q in [gate.a(), gate.b()] {
                if k == 0 {
                    row[q] = 0;
                    continue;
                }
                let prev = &cost[k - 1];
                // ties go to keeping the same center
                let mut best = (prev[q], q);
                for (p, &v) in prev.iter().enumerate() {
                    if v != INF && v + 1 < best.0 {
                        best = (v + 1, p);
                    }
                }
                row[q] = best.0;
                from[q] = best.1;
            }
            cost.push(row);
            back.push(from);
        }
        DpTable { cost, back }
    }

    /// Optimum and the center qubit at each gate.
    pub fn best(&self) -> (usize, Vec<usize>) {
        let Some(last) = self.cost.last() else {
            return (0, Vec::new());
        };
        let (mut q, opt) = last
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, v)| v != INF)
            .min_by_key(|&(q, v)| (v, q))
            .expect("each gate admits two centers");
        let mut centers = vec![0; self.cost.len()];
        for k in (0..self.cost.len()).rev() {
            centers[k] = q;
            q = self.back[k][q];
        }
        (opt, centers)
    }
}

/// Optimal SWAP count on a star and one optimal sequence of centers.
pub fn solve_star_dp(c: &Circuit) -> Result<(usize, Vec<usize>)> {
    if !c.fixing_pattern().is_trivial() {
        return Err(Error::Precondition(
            "the star dynamic program needs a circuit no qubit relabelling fixes; use the reduced method".into(),
        ));
    }
    Ok(DpTable::build(c).best())
}

/// Schedule on the star with center location 0: start with the first center
/// there and the other qubits in increasing order on the leaves, then swap
/// each new center in from its leaf.
pub fn centers_to_solution(n: usize, centers: &[usize]) -> NncpSolution {
    let Some(&first) = centers.first() else {
        return NncpSolution::from_walk(Vec::new(), Vec::new());
    };
    let mut images = vec![first];
    images.extend((0..n).filter(|&q| q != first));
    let mut tau = Permutation::from_vec(images).expect("a rearrangement of 0..n");
    let mut orders = vec![tau.clone()];
    let mut swaps = Vec::new();
    for (k, &q) in centers.iter().enumerate().skip(1) {
        if tau.apply(0) != q {
            let leaf = tau.inverse().apply(q);
            let t = Transposition::new(0, leaf).expect("q is on a leaf");
            tau = tau.then_swap(t);
            swaps.push(ScheduledSwap { after_gate: k, swap: t });
        }
        orders.push(tau.clone());
    }
    NncpSolution::from_walk(orders, swaps)
}
