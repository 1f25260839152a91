use num_bigint::BigUint;
use serde::Serialize;

use super::QuotientGraph;
use crate::bigmath::{factorial, reduction_percent};

/// Sizes of the reduced program against the unreduced one.
///
/// Group orders and unreduced sizes are decimal strings since they overflow
/// machine integers quickly.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionStats {
    pub schema: u32,
    pub n: usize,
    pub m: usize,
    pub family: String,
    pub aut_order: String,
    pub sym_order: String,
    pub nodes_per_layer: usize,
    pub arcs_per_layer: usize,
    pub cross_arcs: Vec<usize>,
    pub variables: usize,
    pub constraints: usize,
    pub unreduced_variables: String,
    pub unreduced_constraints: String,
    pub variable_reduction_pct: f64,
    pub constraint_reduction_pct: f64,
    #[serde(skip)]
    pub unreduced_variables_exact: BigUint,
    #[serde(skip)]
    pub unreduced_constraints_exact: BigUint,
}

impl ReductionStats {
    pub fn of(q: &QuotientGraph) -> Self {
        let n = q.n();
        let m = q.m();
        let g = &q.coupling().graph;
        let num_edges = g.edges().len();
        let n_fact = factorial(n);
        // orders complying with one gate: an edge, an orientation, and any arrangement of the rest
        let per_gate = BigUint::from(2 * num_edges) * factorial(n - 2);
        let unreduced_variables =
            BigUint::from(m) * &n_fact * BigUint::from(num_edges) + &n_fact + BigUint::from(m) * &per_gate;
        let unreduced_constraints = BigUint::from(m) * &n_fact + BigUint::from(2u32);
        let variables = q.num_variables();
        let constraints = q.num_constraints();
        ReductionStats {
            schema: 1,
            n,
            m,
            family: q.coupling().family().to_string(),
            aut_order: q.symmetry().aut_order().to_string(),
            sym_order: q.symmetry().sym_order().to_string(),
            nodes_per_layer: q.nodes_per_layer(),
            arcs_per_layer: q.arcs_per_layer(),
            cross_arcs: q.cross_arcs(),
            variables,
            constraints,
            unreduced_variables: unreduced_variables.to_string(),
            unreduced_constraints: unreduced_constraints.to_string(),
            variable_reduction_pct: reduction_percent(&BigUint::from(variables), &unreduced_variables),
            constraint_reduction_pct: reduction_percent(&BigUint::from(constraints), &unreduced_constraints),
            unreduced_variables_exact: unreduced_variables,
            unreduced_constraints_exact: unreduced_constraints,
        }
    }

    /// Exact test of `reduction >= pct` for an integer percentage.
    pub fn variable_reduction_at_least(&self, pct: u32) -> bool {
        at_least(self.variables, &self.unreduced_variables_exact, pct)
    }

    pub fn constraint_reduction_at_least(&self, pct: u32) -> bool {
        at_least(self.constraints, &self.unreduced_constraints_exact, pct)
    }

    pub const CSV_HEADER: &'static str = "n,m,coupling,#var,#const,reduction #var (%),reduction #const (%)";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.2},{:.2}",
            self.n,
            self.m,
            self.family,
            self.variables,
            self.constraints,
            self.variable_reduction_pct,
            self.constraint_reduction_pct
        )
    }
}

/// `1 − reduced/unreduced >= pct/100` ⇔ `100·reduced <= (100 − pct)·unreduced`.
fn at_least(reduced: usize, unreduced: &BigUint, pct: u32) -> bool {
    BigUint::from(reduced) * BigUint::from(100u32) <= unreduced * BigUint::from(100 - pct)
}
