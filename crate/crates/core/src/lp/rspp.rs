use num_bigint::BigUint;

use super::{LinearProgram, Row, VarTag};
use crate::bigmath::to_f64_checked;
use crate::symmetry::QuotientGraph;

/// How orbit counts enter the program.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scaling {
    /// Coefficients are orbit and orbital sizes; variables lie in `[0, 1]`.
    Unscaled,
    /// Everything divided by `|Aut|`; variables are `|Aut|` times the
    /// unscaled ones and carry no upper bound.
    ByAutOrder,
}

/// Row layout: 0 entry degree, 1 exit degree, then `2 + k·N + u` for the
/// conservation row of orbit `u` in layer `k`.
pub(crate) fn conservation_row(q: &QuotientGraph, layer: usize, node: usize) -> usize {
    2 + layer * q.nodes_per_layer() + node
}

pub fn build_rspp_scaled(q: &QuotientGraph) -> LinearProgram {
    build_rspp(q, Scaling::ByAutOrder)
}

pub fn build_rspp(q: &QuotientGraph, scaling: Scaling) -> LinearProgram {
    let mut lp = LinearProgram::default();
    let m = q.m();
    if m == 0 {
        return lp;
    }
    let nodes = q.nodes();
    let size_of = |u: usize| -> &BigUint {
        match scaling {
            Scaling::Unscaled => &nodes[u].orbit_size,
            Scaling::ByAutOrder => &nodes[u].scaled_size,
        }
    };
    let weight: Vec<f64> = (0..nodes.len())
        .map(|u| to_f64_checked(size_of(u), "orbit size coefficient"))
        .collect();
    let upper = match scaling {
        Scaling::Unscaled => Some(1.0),
        Scaling::ByAutOrder => None,
    };
    lp.rows = vec![Row::default(); 2 + m * nodes.len()];
    lp.rows[0].rhs = 1.0;
    lp.rows[1].rhs = 1.0;

    for (u, &w) in weight.iter().enumerate() {
        let j = lp.add_var(0.0, 0.0, upper, VarTag::Entry { node: u });
        lp.rows[0].coeffs.push((j, w));
        lp.rows[conservation_row(q, 0, u)].coeffs.push((j, -1.0));
    }
    for k in 0..m {
        for (a, arc) in q.arcs().iter().enumerate() {
            let cost = to_f64_checked(&(size_of(arc.src) * BigUint::from(arc.d_out)), "orbital coefficient");
            let j = lp.add_var(cost, 0.0, upper, VarTag::Orbital { layer: k, arc: a });
            if arc.src == arc.dst {
                let net = arc.d_out as f64 - arc.d_in as f64;
                if net != 0.0 {
                    lp.rows[conservation_row(q, k, arc.src)].coeffs.push((j, net));
                }
            } else {
                lp.rows[conservation_row(q, k, arc.src)]
                    .coeffs
                    .push((j, arc.d_out as f64));
                lp.rows[conservation_row(q, k, arc.dst)]
                    .coeffs
                    .push((j, -(arc.d_in as f64)));
            }
        }
        for &u in q.compliant(k) {
            let j = lp.add_var(0.0, 0.0, upper, VarTag::Exit { layer: k, node: u });
            lp.rows[conservation_row(q, k, u)].coeffs.push((j, 1.0));
            if k + 1 < m {
                lp.rows[conservation_row(q, k + 1, u)].coeffs.push((j, -1.0));
            } else {
                lp.rows[1].coeffs.push((j, weight[u]));
            }
        }
    }
    lp
}
