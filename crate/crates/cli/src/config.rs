//! Experiment configuration, read from one TOML file.
//!
//! Relative paths inside the file are resolved against the file's
//! directory. The seed is mandatory so that no run depends on the clock.

use std::path::{Path, PathBuf};

use ddforge_core::ga::operators::{MutationDirection, MutationSchedule, SpreadStatistic};
use ddforge_core::ga::GAConfig;
use ddforge_core::scheduler::GateTimingModel;
use ddforge_core::sim::{NoiseModel, ZZCoupling};
use ddforge_core::workloads::{MrbFlavor, Topology};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(default = "default_shots")]
    pub shots: u64,
    /// Noise realizations per circuit; shots are spread over them.
    #[serde(default = "default_trajectories")]
    pub trajectories: Option<usize>,
    /// Independent evaluations behind every reported mean.
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    /// `"local"` or `"hardware:<name>"`.
    #[serde(default = "default_backend")]
    pub backend: String,
    /// Baseline names; defaults to no-DD plus every canonical baseline.
    #[serde(default)]
    pub baselines: Option<Vec<String>>,
    /// A saved strategy, or a training report, to include as "GADD".
    #[serde(default)]
    pub gadd_strategy: Option<PathBuf>,
    #[serde(default)]
    pub workload: Option<WorkloadConfig>,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub timing: Option<GateTimingModel>,
    #[serde(default)]
    pub ga: GaSection,
    #[serde(default)]
    pub dd: DdSection,
    #[serde(default)]
    pub mrb_scan: MrbScanSection,
    #[serde(default)]
    pub explore: ExploreSection,
    #[serde(default)]
    pub replay: ReplaySection,
}

fn default_shots() -> u64 {
    2000
}

fn default_trajectories() -> Option<usize> {
    Some(128)
}

fn default_repeats() -> usize {
    5
}

fn default_backend() -> String {
    "local".into()
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WorkloadConfig {
    /// Bernstein-Vazirani with a `size`-bit secret and one ancilla.
    Bv {
        size: usize,
        #[serde(default)]
        topology: Option<String>,
    },
    Ghz {
        size: usize,
        #[serde(default)]
        topology: Option<String>,
    },
    Grover {
        oracle: String,
        #[serde(default)]
        iterations: Option<usize>,
        /// Train on a Clifford-rounded copy of the circuit.
        #[serde(default)]
        cliffordize: bool,
        /// Also score every strategy on all `2^n` oracles after training.
        #[serde(default)]
        transfer_oracles: bool,
    },
    Mrb {
        width: usize,
        depth: usize,
        #[serde(default = "default_density")]
        density: f64,
        #[serde(default = "default_flavor")]
        flavor: MrbFlavor,
        #[serde(default = "default_circuits")]
        circuits: usize,
        #[serde(default)]
        topology: Option<String>,
    },
}

fn default_density() -> f64 {
    0.25
}

fn default_flavor() -> MrbFlavor {
    MrbFlavor::Clifford
}

fn default_circuits() -> usize {
    5
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoisePreset {
    #[default]
    DeskDevice,
    Noiseless,
}

/// A preset, optional overrides, then a global scale factor.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub preset: NoisePreset,
    pub scale: f64,
    /// Static field standard deviations `[x, y, z]` in rad/ns.
    pub sigma: Option<[f64; 3]>,
    pub zz_j: Option<f64>,
    pub flip_angle_error: Option<f64>,
    pub dephasing_rate: Option<f64>,
    pub readout_error: Option<f64>,
    pub identity_as_2pi_pulse: bool,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            preset: NoisePreset::DeskDevice,
            scale: 1.0,
            sigma: None,
            zz_j: None,
            flip_angle_error: None,
            dephasing_rate: None,
            readout_error: None,
            identity_as_2pi_pulse: false,
        }
    }
}

impl NoiseConfig {
    pub fn build(&self, num_qubits: usize, edges: &[(usize, usize)]) -> CliResult<NoiseModel> {
        let mut m = match self.preset {
            NoisePreset::DeskDevice => NoiseModel::desk_device(num_qubits, edges),
            NoisePreset::Noiseless => NoiseModel::noiseless(num_qubits),
        };
        if let Some(s) = self.sigma {
            m.quasi_static_sigma = vec![s; num_qubits];
        }
        if let Some(j) = self.zz_j {
            m.zz_coupling = edges.iter().map(|&edge| ZZCoupling { edge, j }).collect();
        }
        if let Some(e) = self.flip_angle_error {
            m.flip_angle_error = e;
        }
        if let Some(r) = self.dephasing_rate {
            m.markovian_dephasing_rate = Some(vec![r; num_qubits]);
        }
        if let Some(r) = self.readout_error {
            m.readout_error = Some(vec![r; num_qubits]);
        }
        m.identity_as_2pi_pulse = self.identity_as_2pi_pulse;
        if !(self.scale >= 0.0 && self.scale.is_finite()) {
            return Err(CliError::Config("noise.scale must be a finite non-negative number".into()));
        }
        let m = m.scaled(self.scale);
        m.validate()?;
        Ok(m)
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaSection {
    pub population_size: usize,
    pub sequence_length: usize,
    pub iterations: usize,
    pub mutation_prob_init: f64,
    pub early_stop: Option<f64>,
    pub mutation: MutationSection,
}

impl Default for GaSection {
    fn default() -> Self {
        let d = GAConfig::default();
        GaSection {
            population_size: d.population_size,
            sequence_length: d.sequence_length,
            iterations: d.iterations,
            mutation_prob_init: d.mutation_prob_init,
            early_stop: None,
            mutation: MutationSection::default(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct MutationSection {
    pub step: f64,
    pub low: f64,
    pub high: f64,
    pub statistic: SpreadStatistic,
    pub far_threshold: f64,
    pub close_threshold: f64,
    pub direction: MutationDirection,
}

impl Default for MutationSection {
    fn default() -> Self {
        let m = MutationSchedule::default();
        MutationSection {
            step: m.step,
            low: m.low,
            high: m.high,
            statistic: m.statistic,
            far_threshold: m.far_threshold,
            close_threshold: m.close_threshold,
            direction: m.direction,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct DdSection {
    /// Upper bound on coloring size; unset means no bound.
    pub max_colors: Option<usize>,
    /// Back-to-back copies of the sequence per idle gap.
    pub repetitions: usize,
}

impl Default for DdSection {
    fn default() -> Self {
        DdSection { max_colors: None, repetitions: 1 }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct MrbScanSection {
    pub widths: Vec<usize>,
    pub depths: Vec<usize>,
    pub circuits_per_depth: usize,
    pub density: f64,
    pub flavor: MrbFlavor,
    /// Topology family; each width uses the first `N` qubits.
    pub topology: Option<String>,
}

impl Default for MrbScanSection {
    fn default() -> Self {
        MrbScanSection {
            widths: vec![2, 4, 6, 8],
            depths: vec![2, 4, 8, 16],
            circuits_per_depth: 5,
            density: 0.25,
            flavor: MrbFlavor::Clifford,
            topology: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExploreSection {
    pub initial_size: usize,
    pub sequence_length: usize,
    pub sample_size: usize,
    pub trials: usize,
    pub iterations: usize,
    pub mutation_probs: Vec<f64>,
}

impl Default for ExploreSection {
    fn default() -> Self {
        let d = ddforge_core::ga::explore::ExplorationConfig::default();
        ExploreSection {
            initial_size: d.initial_size,
            sequence_length: d.sequence_length,
            sample_size: d.sample_size,
            trials: d.trials,
            iterations: d.iterations,
            mutation_probs: d.mutation_probs,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReplaySection {
    pub checkpoint: Option<PathBuf>,
    /// Each noise parameter is scaled by an independent factor in
    /// `[1 - perturbation, 1 + perturbation]`.
    pub perturbation: f64,
    pub repeats: usize,
}

impl Default for ReplaySection {
    fn default() -> Self {
        ReplaySection { checkpoint: None, perturbation: 0.1, repeats: 10 }
    }
}

/// A parsed config together with where it came from.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub dir: PathBuf,
    /// Hex SHA-256 of the file contents.
    pub hash: String,
}

impl LoadedConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config = parse(&text)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(LoadedConfig { config, dir, hash: hex::encode(Sha256::digest(text.as_bytes())) })
    }

    /// Resolves `p` against the config directory and checks it exists.
    pub fn existing_path(&self, p: &Path) -> CliResult<PathBuf> {
        let full = if p.is_absolute() { p.to_path_buf() } else { self.dir.join(p) };
        if !full.exists() {
            return Err(CliError::Config(format!("referenced file {} does not exist", full.display())));
        }
        Ok(full)
    }
}

pub fn parse(text: &str) -> CliResult<ExperimentConfig> {
    let config: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

impl ExperimentConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.shots == 0 {
            return Err(CliError::Config("shots must be at least 1".into()));
        }
        if self.repeats == 0 {
            return Err(CliError::Config("repeats must be at least 1".into()));
        }
        if self.trajectories == Some(0) {
            return Err(CliError::Config("trajectories must be at least 1".into()));
        }
        if self.dd.repetitions == 0 {
            return Err(CliError::Config("dd.repetitions must be at least 1".into()));
        }
        if self.replay.repeats == 0 || !(0.0..1.0).contains(&self.replay.perturbation) {
            return Err(CliError::Config("replay needs repeats >= 1 and 0 <= perturbation < 1".into()));
        }
        self.ga_config().validate()?;
        self.timing().validate()?;
        Ok(())
    }

    pub fn timing(&self) -> GateTimingModel {
        self.timing.unwrap_or_default()
    }

    pub fn ga_config(&self) -> GAConfig {
        let g = &self.ga;
        let m = &g.mutation;
        GAConfig {
            population_size: g.population_size,
            sequence_length: g.sequence_length,
            iterations: g.iterations,
            shots: self.shots,
            mutation_prob_init: g.mutation_prob_init,
            mutation: MutationSchedule {
                step: m.step,
                low: m.low,
                high: m.high,
                statistic: m.statistic,
                far_threshold: m.far_threshold,
                close_threshold: m.close_threshold,
                direction: m.direction,
            },
            early_stop: g.early_stop,
            seed: self.seed,
        }
    }

    pub fn workload(&self) -> CliResult<&WorkloadConfig> {
        self.workload.as_ref().ok_or_else(|| CliError::Config("this command needs a [workload] section".into()))
    }
}

/// `linear`, `all_to_all`, `heavy_hex` or `grid:RxC`, with an optional
/// `:N` size for the first two. `needed` is the default size.
pub fn parse_topology(spec: Option<&str>, needed: usize) -> CliResult<Topology> {
    let spec = spec.unwrap_or("linear");
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let size = |arg: Option<&str>| -> CliResult<usize> {
        match arg {
            None => Ok(needed),
            Some(a) => a.parse().map_err(|_| CliError::Config(format!("bad topology size in {spec:?}"))),
        }
    };
    match name {
        "linear" => Ok(Topology::linear(size(arg)?)),
        "all_to_all" => Ok(Topology::all_to_all(size(arg)?)),
        "heavy_hex" => Ok(Topology::heavy_hex_fragment()),
        "grid" => {
            let dims = arg.and_then(|a| a.split_once('x'));
            let parsed = dims.and_then(|(r, c)| Some((r.parse().ok()?, c.parse().ok()?)));
            let (r, c) = parsed.ok_or_else(|| CliError::Config(format!("grid topology needs RxC, got {spec:?}")))?;
            Ok(Topology::grid(r, c))
        }
        _ => Err(CliError::Config(format!("unknown topology {spec:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse("seed = 3\n[workload]\nkind = \"bv\"\nsize = 4\n").unwrap();
        assert_eq!(c.shots, 2000);
        assert_eq!(c.ga.population_size, 16);
        assert_eq!(c.ga_config().seed, 3);
        assert!(matches!(c.workload, Some(WorkloadConfig::Bv { size: 4, .. })));
        assert_eq!(c.mrb_scan.depths, vec![2, 4, 8, 16]);
    }

    #[test]
    fn seed_is_required() {
        assert!(matches!(parse("shots = 10\n"), Err(CliError::Config(_))));
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        assert!(parse("seed = 1\nshotz = 3\n").is_err());
        assert!(parse("seed = 1\n[ga]\npopulation_size = 12\n").is_err());
        assert!(parse("seed = 1\nshots = 0\n").is_err());
    }

    #[test]
    fn noise_overrides_then_scale() {
        let c = parse("seed = 1\n[noise]\nscale = 2.0\nflip_angle_error = 0.01\nzz_j = 1e-3\n").unwrap();
        let m = c.noise.build(3, &[(0, 1), (1, 2)]).unwrap();
        assert!((m.flip_angle_error - 0.02).abs() < 1e-15);
        assert_eq!(m.zz_coupling.len(), 2);
        assert!((m.zz_coupling[0].j - 2e-3).abs() < 1e-15);
        assert!((m.quasi_static_sigma[0][2] - 4e-4).abs() < 1e-15);
    }

    #[test]
    fn topologies() {
        assert_eq!(parse_topology(None, 4).unwrap(), Topology::linear(4));
        assert_eq!(parse_topology(Some("all_to_all:3"), 9).unwrap().edges.len(), 3);
        assert_eq!(parse_topology(Some("grid:2x2"), 0).unwrap().num_qubits, 4);
        assert_eq!(parse_topology(Some("heavy_hex"), 0).unwrap().num_qubits, 27);
        assert!(parse_topology(Some("ring"), 3).is_err());
        assert!(parse_topology(Some("grid:2"), 3).is_err());
    }
}
