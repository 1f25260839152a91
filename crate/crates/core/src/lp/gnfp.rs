//! The reduced program written as a generalized network flow: every arc has
//! a capacity, a cost per unit and a gain multiplier applied on arrival.

use num_bigint::BigUint;

use super::{LinearProgram, Row, VarTag};
use crate::bigmath::to_f64_checked;
use crate::symmetry::QuotientGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GnfpArcKind {
    /// Source to orbit `node` of the first layer.
    Entry { node: usize },
    /// Orbital `arc` inside layer `layer`.
    Orbital { layer: usize, arc: usize },
    /// Orbit `node` of layer `layer` to the next layer (or the sink).
    Exit { layer: usize, node: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GnfpArc {
    pub from: usize,
    pub to: usize,
    pub kind: GnfpArcKind,
    pub capacity: f64,
    pub cost: f64,
    pub multiplier: f64,
}

/// Network on `source`, one node per (layer, orbit), and `sink`.
#[derive(Clone, Debug)]
pub struct GnfpModel {
    pub num_nodes: usize,
    pub source: usize,
    pub sink: usize,
    pub arcs: Vec<GnfpArc>,
}

/// Flow `f` per arc is per order at the tail: an entry arc carries the flow
/// of a whole first-layer orbit and delivers `1/|orbit|` of it to each order,
/// an orbital arc carries `d_out` copies of the orbital variable and delivers
/// `d_in` of them, and the last exit arc gathers `|orbit|` copies at the sink.
pub fn build_gnfp(q: &QuotientGraph) -> GnfpModel {
    let n_nodes = q.nodes_per_layer();
    let m = q.m();
    let node = |k: usize, u: usize| 1 + k * n_nodes + u;
    let sink = 1 + m * n_nodes;
    let size: Vec<f64> = q
        .nodes()
        .iter()
        .map(|nd| to_f64_checked(&nd.orbit_size, "orbit size"))
        .collect();
    let mut arcs = Vec::new();
    if m == 0 {
        return GnfpModel {
            num_nodes: 2,
            source: 0,
            sink: 1,
            arcs,
        };
    }
    for (u, &s) in size.iter().enumerate() {
        arcs.push(GnfpArc {
            from: 0,
            to: node(0, u),
            kind: GnfpArcKind::Entry { node: u },
            capacity: s,
            cost: 0.0,
            multiplier: 1.0 / s,
        });
    }
    for k in 0..m {
        for (a, arc) in q.arcs().iter().enumerate() {
            let w = &arc.size / BigUint::from(arc.d_out);
            arcs.push(GnfpArc {
                from: node(k, arc.src),
                to: node(k, arc.dst),
                kind: GnfpArcKind::Orbital { layer: k, arc: a },
                capacity: arc.d_out as f64,
                cost: to_f64_checked(&w, "orbital cost"),
                multiplier: arc.d_in as f64 / arc.d_out as f64,
            });
        }
        for &u in q.compliant(k) {
            let last = k + 1 == m;
            arcs.push(GnfpArc {
                from: node(k, u),
                to: if last { sink } else { node(k + 1, u) },
                kind: GnfpArcKind::Exit { layer: k, node: u },
                capacity: 1.0,
                cost: 0.0,
                multiplier: if last { size[u] } else { 1.0 },
            });
        }
    }
    GnfpModel {
        num_nodes: sink + 1,
        source: 0,
        sink,
        arcs,
    }
}

impl GnfpModel {
    /// `min Σ cost·f` with `0 <= f <= capacity`, one unit leaving the source,
    /// one unit of gained flow reaching the sink, and gain-conservation
    /// everywhere else.
    pub fn to_lp(&self) -> LinearProgram {
        let mut lp = LinearProgram::default();
        if self.arcs.is_empty() {
            return lp;
        }
        lp.rows = vec![Row::default(); self.num_nodes];
        lp.rows[self.source].rhs = 1.0;
        lp.rows[self.sink].rhs = 1.0;
        for (i, arc) in self.arcs.iter().enumerate() {
            let j = lp.add_var(arc.cost, 0.0, Some(arc.capacity), VarTag::Network { arc: i });
            lp.rows[arc.from].coeffs.push((j, 1.0));
            if arc.to == self.sink {
                lp.rows[self.sink].coeffs.push((j, arc.multiplier));
            } else if arc.to == arc.from {
                let row = &mut lp.rows[arc.to];
                let last = row.coeffs.last_mut().expect("just pushed");
                last.1 -= arc.multiplier;
                if last.1 == 0.0 {
                    row.coeffs.pop();
                }
            } else {
                lp.rows[arc.to].coeffs.push((j, -arc.multiplier));
            }
        }
        lp
    }
}
