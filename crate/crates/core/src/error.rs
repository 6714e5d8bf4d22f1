use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid DD sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("greedy coloring needs {needed} colors but only {max} are allowed")]
    ColoringOverflow { needed: usize, max: usize },

    #[error("population size {0} must be a positive multiple of the group size (8) and of 4")]
    InvalidPopulationSize(usize),

    #[error("two-qubit gate on ({0}, {1}) is not on the coupling graph")]
    InvalidEdge(usize, usize),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("{qubits} qubits exceeds the statevector limit of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },

    #[error("measurement of qubit {0} is not deterministic")]
    NondeterministicOutcome(usize),

    #[error("decay fit failed: {0}")]
    FitFailure(String),

    #[error("training circuit has no idle gap long enough for the DD sequences")]
    NoInsertableGaps,

    #[error("topology has {available} qubits but {required} are required")]
    TopologyTooSmall { required: usize, available: usize },

    #[error("topology is disconnected")]
    TopologyDisconnected,

    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),

    #[error("gate has no inverse in the gate set: {0}")]
    NonInvertibleGate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("backend error: {0}")]
    Backend(String),

    #[error("checkpoint is corrupt: {0}")]
    CheckpointCorrupt(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
