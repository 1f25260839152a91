//! Circuit model, `.real` parsing, decomposition into two-qubit gates, and the
//! gate graph with its fixing pattern.

mod decompose;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;

use crate::bigmath::{factorial, pow2};
use crate::{Error, Result};

pub use decompose::{decompose, decomposition_pairs};
pub use parse::{parse_real, parse_real_with, TokenTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RawGateKind {
    Not,
    Cnot,
    Swap,
    Cv,
    CvDag,
    Toffoli3,
    Toffoli4,
    Toffoli5,
    Fredkin3,
    Fredkin4,
    Peres,
}

impl RawGateKind {
    pub const ALL: [RawGateKind; 11] = [
        RawGateKind::Not,
        RawGateKind::Cnot,
        RawGateKind::Swap,
        RawGateKind::Cv,
        RawGateKind::CvDag,
        RawGateKind::Toffoli3,
        RawGateKind::Toffoli4,
        RawGateKind::Toffoli5,
        RawGateKind::Fredkin3,
        RawGateKind::Fredkin4,
        RawGateKind::Peres,
    ];

    pub fn arity(self) -> usize {
        use RawGateKind::*;
        match self {
            Not => 1,
            Cnot | Swap | Cv | CvDag => 2,
            Toffoli3 | Fredkin3 | Peres => 3,
            Toffoli4 | Fredkin4 => 4,
            Toffoli5 => 5,
        }
    }

    /// Token written when serializing to `.real`.
    pub fn token(self) -> &'static str {
        use RawGateKind::*;
        match self {
            Not => "t1",
            Cnot => "t2",
            Swap => "f2",
            Cv => "v",
            CvDag => "v+",
            Toffoli3 => "t3",
            Toffoli4 => "t4",
            Toffoli5 => "t5",
            Fredkin3 => "f3",
            Fredkin4 => "f4",
            Peres => "p3",
        }
    }
}

/// A gate as read from a file. Operands are listed controls first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawGate {
    kind: RawGateKind,
    qubits: Vec<usize>,
}

impl RawGate {
    pub fn new(kind: RawGateKind, qubits: Vec<usize>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::InvalidCircuit(format!(
                "{} expects {} operands, got {}",
                kind.token(),
                kind.arity(),
                qubits.len()
            )));
        }
        let distinct: BTreeSet<_> = qubits.iter().collect();
        if distinct.len() != qubits.len() {
            return Err(Error::InvalidCircuit(format!("{} has repeated operands", kind.token())));
        }
        Ok(RawGate { kind, qubits })
    }

    pub fn kind(&self) -> RawGateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }
}

/// A parsed `.real` file before decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCircuit {
    pub qubit_names: Vec<String>,
    pub gates: Vec<RawGate>,
    /// Directives seen before `.begin`, keyed by lowercase name without the dot.
    pub metadata: BTreeMap<String, String>,
}

impl RawCircuit {
    pub fn n(&self) -> usize {
        self.qubit_names.len()
    }

    /// Serializes to `.real` text.
    pub fn to_real(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.metadata {
            if key != "numvars" && key != "variables" {
                out.push_str(&format!(".{key} {value}\n"));
            }
        }
        out.push_str(&format!(".numvars {}\n", self.n()));
        out.push_str(&format!(".variables {}\n", self.qubit_names.join(" ")));
        out.push_str(".begin\n");
        for g in &self.gates {
            let names: Vec<&str> = g.qubits.iter().map(|&q| self.qubit_names[q].as_str()).collect();
            out.push_str(&format!("{} {}\n", g.kind.token(), names.join(" ")));
        }
        out.push_str(".end\n");
        out
    }
}

/// A two-qubit gate; only the unordered pair of qubits matters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoQubitGate {
    a: usize,
    b: usize,
}

impl TwoQubitGate {
    pub fn new(x: usize, y: usize) -> Result<Self> {
        if x == y {
            return Err(Error::InvalidCircuit(format!(
                "two-qubit gate on a single qubit {}",
                x + 1
            )));
        }
        Ok(TwoQubitGate {
            a: x.min(y),
            b: x.max(y),
        })
    }

    pub fn a(self) -> usize {
        self.a
    }

    pub fn b(self) -> usize {
        self.b
    }

    pub fn touches(self, q: usize) -> bool {
        self.a == q || self.b == q
    }
}

impl fmt::Display for TwoQubitGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{q{},q{}}}", self.a + 1, self.b + 1)
    }
}

/// Qubits `0..n` and an ordered list of two-qubit gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    qubit_names: Vec<String>,
    gates: Vec<TwoQubitGate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<TwoQubitGate>) -> Result<Self> {
        let names = (1..=n).map(|i| format!("q{i}")).collect();
        Self::with_names(names, gates)
    }

    pub fn with_names(qubit_names: Vec<String>, gates: Vec<TwoQubitGate>) -> Result<Self> {
        let n = qubit_names.len();
        if let Some(g) = gates.iter().find(|g| g.b >= n) {
            return Err(Error::InvalidCircuit(format!("gate {g} outside {n} qubits")));
        }
        Ok(Circuit { n, qubit_names, gates })
    }

    /// Convenience constructor from 1-based pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let gates = pairs
            .iter()
            .map(|&(x, y)| {
                if x == 0 || y == 0 {
                    return Err(Error::InvalidCircuit("qubits are 1-based".into()));
                }
                TwoQubitGate::new(x - 1, y - 1)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, gates)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[TwoQubitGate] {
        &self.gates
    }

    pub fn qubit_names(&self) -> &[String] {
        &self.qubit_names
    }

    pub fn push(&mut self, gate: TwoQubitGate) -> Result<()> {
        if gate.b >= self.n {
            return Err(Error::InvalidCircuit(format!("gate {gate} outside {} qubits", self.n)));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn gate_graph(&self) -> GateGraph {
        gate_graph(self)
    }

    pub fn fixing_pattern(&self) -> FixingPattern {
        fixing_pattern(&gate_graph(self))
    }
}

/// Simple graph on qubits with an edge per distinct gate pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateGraph {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl GateGraph {
    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for q in 0..self.n {
            let r = find(&mut parent, q);
            groups.entry(r).or_default().push(q);
        }
        groups.into_values().collect()
    }
}

pub fn gate_graph(c: &Circuit) -> GateGraph {
    GateGraph {
        n: c.n,
        edges: c.gates.iter().map(|g| (g.a, g.b)).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassKind {
    /// A qubit in a gate-graph component with at least three vertices.
    Singleton,
    /// The two qubits of a component that is a single edge.
    Pair,
    /// All isolated qubits.
    Free,
}

/// Partition of the qubits whose setwise stabilizer is the group of qubit
/// relabellings that leave every gate invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixingPattern {
    classes: Vec<Vec<usize>>,
    kinds: Vec<ClassKind>,
    class_of: Vec<usize>,
    p: usize,
    f: usize,
    c: usize,
}

impl FixingPattern {
    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    /// Classes ordered by smallest member; each class sorted.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn kind(&self, class: usize) -> ClassKind {
        self.kinds[class]
    }

    pub fn class_of(&self, qubit: usize) -> usize {
        self.class_of[qubit]
    }

    pub fn class_map(&self) -> &[usize] {
        &self.class_of
    }

    /// Number of two-element classes.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of isolated qubits.
    pub fn f(&self) -> usize {
        self.f
    }

    /// Number of qubits in components of size at least three.
    pub fn c(&self) -> usize {
        self.c
    }

    /// `2^p · f!`.
    pub fn group_order(&self) -> BigUint {
        pow2(self.p) * factorial(self.f)
    }

    /// True when the stabilizer is the trivial group.
    pub fn is_trivial(&self) -> bool {
        self.p == 0 && self.f <= 1
    }

    /// Generators of the stabilizer, as permutations of qubits.
    pub fn generators(&self) -> Vec<crate::Permutation> {
        let n = self.n();
        let mut gens = Vec::new();
        for class in self.classes.iter().filter(|c| c.len() >= 2) {
            let mut v: Vec<usize> = (0..n).collect();
            v.swap(class[0], class[1]);
            gens.push(crate::Permutation::from_vec_unchecked(v));
            if class.len() >= 3 {
                let mut v: Vec<usize> = (0..n).collect();
                for (i, &q) in class.iter().enumerate() {
                    v[q] = class[(i + 1) % class.len()];
                }
                gens.push(crate::Permutation::from_vec_unchecked(v));
            }
        }
        gens
    }
}

pub fn fixing_pattern(g: &GateGraph) -> FixingPattern {
    let mut classes = Vec::new();
    let mut kinds = Vec::new();
    let mut free = Vec::new();
    let (mut p, mut c) = (0, 0);
    for comp in g.components() {
        match comp.len() {
            1 => free.push(comp[0]),
            2 => {
                p += 1;
                classes.push(comp);
                kinds.push(ClassKind::Pair);
            }
            k => {
                c += k;
                for q in comp {
                    classes.push(vec![q]);
                    kinds.push(ClassKind::Singleton);
                }
            }
        }
    }
    let f = free.len();
    if !free.is_empty() {
        classes.push(free);
        kinds.push(ClassKind::Free);
    }
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&i| classes[i][0]);
    let classes: Vec<Vec<usize>> = order.iter().map(|&i| classes[i].clone()).collect();
    let kinds: Vec<ClassKind> = order.iter().map(|&i| kinds[i]).collect();
    let mut class_of = vec![0; g.n];
    for (i, class) in classes.iter().enumerate() {
        for &q in class {
            class_of[q] = i;
        }
    }
    FixingPattern {
        classes,
        kinds,
        class_of,
        p,
        f,
        c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    #[test]
    fn path_component_is_all_singletons() {
        let c = Circuit::from_pairs(4, &[(1, 2), (2, 3)]).unwrap();
        let fp = c.fixing_pattern();
        assert_eq!((fp.p(), fp.f(), fp.c()), (0, 1, 3));
        assert_eq!(fp.group_order(), BigUint::from(1u32));
        assert_eq!(fp.classes(), &[vec![0], vec![1], vec![2], vec![3]]);
        assert!(fp.is_trivial());
    }

    #[test]
    fn single_gate_gives_pair_and_free_set() {
        let c = Circuit::from_pairs(4, &[(1, 2)]).unwrap();
        let fp = c.fixing_pattern();
        assert_eq!(fp.classes(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(fp.kind(0), ClassKind::Pair);
        assert_eq!(fp.kind(1), ClassKind::Free);
        assert_eq!(fp.group_order(), BigUint::from(4u32));
    }

    #[test]
    fn gate_graph_collapses_parallel_gates() {
        let c = Circuit::from_pairs(3, &[(1, 2), (2, 1), (1, 2)]).unwrap();
        assert_eq!(c.gate_graph().edges.len(), 1);
        assert_eq!(c.m(), 3);
    }

    /// Brute-force order of the setwise stabilizer of all gates.
    fn brute_stabilizer_order(c: &Circuit) -> usize {
        let n = c.n();
        let edges = c.gate_graph().edges;
        (0..n)
            .permutations(n)
            .filter(|a| {
                edges.iter().all(|&(x, y)| {
                    let (u, v) = (a[x].min(a[y]), a[x].max(a[y]));
                    u == x && v == y
                })
            })
            .count()
    }

    #[test]
    fn group_order_matches_brute_force() {
        let cases: &[(usize, &[(usize, usize)])] = &[
            (4, &[]),
            (4, &[(1, 2)]),
            (5, &[(1, 2), (3, 4)]),
            (5, &[(1, 2), (2, 3)]),
            (6, &[(1, 2), (3, 4), (5, 6)]),
            (6, &[(1, 2), (2, 3), (3, 1)]),
            (6, &[(2, 5)]),
            (6, &[(1, 2), (2, 3), (4, 5)]),
        ];
        for (n, pairs) in cases {
            let c = Circuit::from_pairs(*n, pairs).unwrap();
            let order = c.fixing_pattern().group_order();
            assert_eq!(order, BigUint::from(brute_stabilizer_order(&c)), "{pairs:?}");
        }
    }
}
