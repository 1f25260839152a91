use super::{Circuit, RawCircuit, RawGateKind, TwoQubitGate};
use crate::Result;

/// Operand-index pairs of the two-qubit gates replacing one raw gate, in
/// circuit order. Operands are indexed as they appear in the file (controls
/// first). Single-qubit gates yield nothing.
pub fn decomposition_pairs(kind: RawGateKind) -> &'static [(usize, usize)] {
    use RawGateKind::*;
    match kind {
        Not => &[],
        Cnot | Swap | Cv | CvDag => &[(0, 1)],
        Toffoli3 => &[(1, 2), (0, 1), (1, 2), (0, 1), (0, 2)],
        Peres => &[(1, 2), (0, 2), (0, 1), (1, 2)],
        Fredkin3 => &[(1, 2), (0, 2), (1, 2), (0, 1), (1, 2), (1, 2), (0, 1)],
        Toffoli4 => &[
            (0, 3),
            (0, 1),
            (1, 3),
            (0, 1),
            (1, 3),
            (1, 2),
            (2, 3),
            (0, 2),
            (2, 3),
            (1, 2),
            (2, 3),
            (0, 2),
            (2, 3),
        ],
        Fredkin4 => &[
            (2, 3),
            (0, 3),
            (0, 1),
            (1, 3),
            (0, 1),
            (1, 3),
            (1, 2),
            (2, 3),
            (0, 2),
            (2, 3),
            (1, 2),
            (2, 3),
            (0, 2),
            (2, 3),
            (2, 3),
        ],
        Toffoli5 => &[
            (0, 4),
            (0, 1),
            (1, 4),
            (0, 1),
            (1, 4),
            (1, 2),
            (2, 4),
            (0, 2),
            (2, 4),
            (1, 2),
            (2, 4),
            (0, 2),
            (2, 4),
            (2, 3),
            (3, 4),
            (0, 3),
            (3, 4),
            (1, 3),
            (3, 4),
            (0, 3),
            (3, 4),
            (2, 3),
            (3, 4),
            (0, 3),
            (3, 4),
            (1, 3),
            (3, 4),
            (0, 3),
            (3, 4),
        ],
    }
}

/// Replaces every raw gate by its two-qubit decomposition and drops
/// single-qubit gates. Consecutive duplicates are kept.
pub fn decompose(raw: &RawCircuit) -> Result<Circuit> {
    let mut gates = Vec::new();
    for g in &raw.gates {
        for &(i, j) in decomposition_pairs(g.kind()) {
            gates.push(TwoQubitGate::new(g.qubits()[i], g.qubits()[j])?);
        }
    }
    Circuit::with_names(raw.qubit_names.clone(), gates)
}
