//! One module per subcommand.

pub mod compare;
pub mod explore;
pub mod mrb_scan;
pub mod replay;
pub mod train;
pub mod workload;

use ddforge_core::seed;
use ddforge_core::sim::NoiseModel;
use ddforge_core::strategy::{color_graph, ColorAssignment};

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::eval::{make_backend, GuardedBackend};
use crate::workload::{self as wl, Experiment};

pub const REPORT_STREAM: u64 = 10;

/// Seeds behind the reported means; shared by train, compare-baselines and
/// replay so that their numbers line up.
pub fn report_seeds(master: u64, repeats: usize) -> Vec<u64> {
    (0..repeats as u64).map(|r| seed::derive(master, &[REPORT_STREAM, r])).collect()
}

pub fn coloring(config: &ExperimentConfig, num_qubits: usize, edges: &[(usize, usize)]) -> CliResult<ColorAssignment> {
    Ok(color_graph(edges, num_qubits, config.dd.max_colors.unwrap_or(num_qubits.max(1)))?)
}

pub struct Setup {
    pub exp: Experiment,
    pub noise: NoiseModel,
    pub backend: GuardedBackend,
    pub coloring: ColorAssignment,
}

pub fn setup(config: &ExperimentConfig) -> CliResult<Setup> {
    let exp = wl::build(config)?;
    let noise = config.noise.build(exp.num_qubits, &exp.edges)?;
    let backend = make_backend(config, noise.clone())?;
    let coloring = coloring(config, exp.num_qubits, &exp.edges)?;
    Ok(Setup { exp, noise, backend, coloring })
}
