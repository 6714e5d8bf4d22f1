//! Execution backends: where DD-decorated circuits are run.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::circuit::ScheduledCircuit;
use crate::error::{Error, Result};
use crate::sim::{simulate_counts, CountsDistribution, NoiseModel, SimOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capabilities {
    pub max_qubits: usize,
    pub clifford_fast_path: bool,
}

/// Runs batches of circuits. Results come back one per circuit, in order,
/// and must not depend on how a workload is split into batches.
pub trait ExecutionBackend {
    fn name(&self) -> &str;

    fn capabilities(&self) -> Capabilities;

    fn submit(&self, circuits: &[ScheduledCircuit], shots: u64, seed: u64) -> Result<Vec<CountsDistribution>>;
}

/// The built-in trajectory simulator.
#[derive(Clone, Debug)]
pub struct LocalSimulatorBackend {
    noise: NoiseModel,
    options: SimOptions,
}

impl LocalSimulatorBackend {
    pub fn new(noise: NoiseModel, options: SimOptions) -> Result<Self> {
        noise.validate()?;
        Ok(LocalSimulatorBackend { noise, options })
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }
}

impl ExecutionBackend for LocalSimulatorBackend {
    fn name(&self) -> &str {
        "local-simulator"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { max_qubits: self.options.max_qubits, clifford_fast_path: true }
    }

    fn submit(&self, circuits: &[ScheduledCircuit], shots: u64, seed: u64) -> Result<Vec<CountsDistribution>> {
        // Each circuit's counts depend only on (circuit, shots, seed), so
        // repeated circuits in a batch are simulated once.
        let mut memo: HashMap<u64, Vec<(usize, CountsDistribution)>> = HashMap::new();
        let mut out = Vec::with_capacity(circuits.len());
        for (i, c) in circuits.iter().enumerate() {
            let h = c.content_hash();
            let hit = memo
                .get(&h)
                .and_then(|v| v.iter().find(|(j, _)| circuits[*j] == *c))
                .map(|(_, counts)| counts.clone());
            let counts = match hit {
                Some(counts) => counts,
                None => {
                    let counts = simulate_counts(c, &self.noise, shots, seed, &self.options)?;
                    memo.entry(h).or_default().push((i, counts.clone()));
                    counts
                }
            };
            out.push(counts);
        }
        Ok(out)
    }
}

/// Placeholder for a remote device client; every submission fails.
#[derive(Clone, Debug)]
pub struct HardwareBackendStub {
    pub name: String,
}

impl ExecutionBackend for HardwareBackendStub {
    fn name(&self) -> &str {
        &self.name
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { max_qubits: 0, clifford_fast_path: false }
    }

    fn submit(&self, _: &[ScheduledCircuit], _: u64, _: u64) -> Result<Vec<CountsDistribution>> {
        Err(Error::Unsupported(format!("no client is available for hardware backend {:?}", self.name)))
    }
}
