//! Linear programs over the quotient graph and how they are solved.

mod export;
mod gnfp;
mod rspp;
mod simplex;
mod solve;

pub use export::write_lp;
pub use gnfp::{build_gnfp, GnfpArc, GnfpArcKind, GnfpModel};
pub use rspp::{build_rspp, build_rspp_scaled, Scaling};
pub use simplex::{simplex_solve, simplex_solve_with, Pricing, SimplexOptions};
pub use solve::{
    entry_degree, quotient_distance, scaled_sizes, solve_reduced, solve_reduced_with, ReducedMethod, ReducedSolution,
    Support, SUPPORT_TOL,
};

/// What a column of a program stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarTag {
    /// Flow on orbital `arc` within layer `layer` (0-based gate index).
    Orbital { layer: usize, arc: usize },
    /// Flow from the source into orbit `node` of the first layer.
    Entry { node: usize },
    /// Flow leaving orbit `node` of layer `layer` through gate `layer`.
    Exit { layer: usize, node: usize },
    /// Arc of a generalized flow network.
    Network { arc: usize },
}

/// `Σ coeffs · x = rhs`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// `min cost·x` subject to equality rows and `lower <= x <= upper`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub cost: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<Option<f64>>,
    pub rows: Vec<Row>,
    pub tags: Vec<VarTag>,
}

impl LinearProgram {
    pub fn add_var(&mut self, cost: f64, lower: f64, upper: Option<f64>, tag: VarTag) -> usize {
        self.cost.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.tags.push(tag);
        self.cost.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.cost.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest absolute row residual.
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.coeffs.iter().map(|&(j, a)| a * x[j]).sum::<f64>() - r.rhs).abs())
            .fold(0.0, f64::max)
    }

    /// Largest bound violation.
    pub fn max_bound_violation(&self, x: &[f64]) -> f64 {
        x.iter()
            .enumerate()
            .map(|(j, &v)| {
                let below = self.lower[j] - v;
                let above = self.upper[j].map_or(0.0, |u| v - u);
                below.max(above).max(0.0)
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterLimit,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}
