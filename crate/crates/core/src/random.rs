//! Seeded random instances.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{RawCircuit, RawGate, RawGateKind};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceClass {
    /// Two-qubit gates on uniformly random distinct qubits.
    I,
    /// Gate kinds drawn uniformly from the multi-qubit library plus one
    /// two-qubit bucket, before decomposition.
    II,
}

impl FromStr for InstanceClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(InstanceClass::I),
            "II" | "2" => Ok(InstanceClass::II),
            other => Err(Error::Precondition(format!(
                "unknown instance class {other:?}; expected I or II"
            ))),
        }
    }
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceClass::I => write!(f, "I"),
            InstanceClass::II => write!(f, "II"),
        }
    }
}

const CLASS_II_KINDS: [Option<RawGateKind>; 7] = [
    Some(RawGateKind::Toffoli3),
    Some(RawGateKind::Toffoli4),
    Some(RawGateKind::Toffoli5),
    Some(RawGateKind::Fredkin3),
    Some(RawGateKind::Fredkin4),
    Some(RawGateKind::Peres),
    None,
];

const TWO_QUBIT_KINDS: [RawGateKind; 4] = [
    RawGateKind::Cnot,
    RawGateKind::Swap,
    RawGateKind::Cv,
    RawGateKind::CvDag,
];

/// `m` raw gates on `n` qubits; the same arguments give the same circuit.
pub fn random_circuit(class: InstanceClass, n: usize, m: usize, seed: u64) -> Result<RawCircuit> {
    let min_n = match class {
        InstanceClass::I => 2,
        InstanceClass::II => 5,
    };
    if n < min_n {
        return Err(Error::Precondition(format!(
            "class {class} instances need at least {min_n} qubits, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::with_capacity(m);
    for _ in 0..m {
        let kind = match class {
            InstanceClass::I => RawGateKind::Cnot,
            InstanceClass::II => match CLASS_II_KINDS[rng.gen_range(0..CLASS_II_KINDS.len())] {
                Some(kind) => kind,
                None => TWO_QUBIT_KINDS[rng.gen_range(0..TWO_QUBIT_KINDS.len())],
            },
        };
        // drawn without replacement, so operands never collide
        let qubits = sample(&mut rng, n, kind.arity()).into_vec();
        gates.push(RawGate::new(kind, qubits)?);
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("version".to_string(), "1.0".to_string());
    Ok(RawCircuit {
        qubit_names: (1..=n).map(|i| format!("q{i}")).collect(),
        gates,
        metadata,
    })
}
