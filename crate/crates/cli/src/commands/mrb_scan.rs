use std::fmt::Write as _;
use std::path::Path;

use ddforge_core::backend::ExecutionBackend;
use ddforge_core::metrics::{fit_epl, polarization, DecayPoint};
use ddforge_core::scheduler::insert_dd_with;
use ddforge_core::seed;
use ddforge_core::workloads::{mrb_circuit, MrbSpec};
use serde::{Deserialize, Serialize};

use super::coloring;
use crate::config::{parse_topology, LoadedConfig};
use crate::error::{CliError, CliResult};
use crate::eval::{candidates, load_strategy, make_backend};
use crate::report::{Meta, OutDir};
use crate::workload::first_n;

const CIRCUIT_STREAM: u64 = 30;
const SUBMIT_STREAM: u64 = 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Ok,
    NoSignal,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EplCell {
    pub width: usize,
    pub strategy: String,
    pub status: CellStatus,
    pub epl: Option<f64>,
    pub p: Option<f64>,
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub width: usize,
    pub strategy: String,
    pub circuit: usize,
    pub point: DecayPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub strategy: String,
    /// Smallest width whose fit failed, if any.
    pub first_no_signal_width: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MrbScanReport {
    pub meta: Meta,
    pub widths: Vec<usize>,
    pub depths: Vec<usize>,
    pub circuits_per_depth: usize,
    pub cells: Vec<EplCell>,
    pub summary: Vec<StrategySummary>,
}

impl MrbScanReport {
    pub fn cell(&self, width: usize, strategy: &str) -> Option<&EplCell> {
        self.cells.iter().find(|c| c.width == width && c.strategy == strategy)
    }
}

pub fn run(config: &LoadedConfig, out: &Path) -> CliResult<MrbScanReport> {
    let cfg = &config.config;
    let scan = &cfg.mrb_scan;
    if scan.widths.is_empty() || scan.depths.is_empty() || scan.circuits_per_depth == 0 {
        return Err(CliError::Config("mrb_scan needs widths, depths and circuits_per_depth >= 1".into()));
    }
    if let Some(d) = scan.depths.iter().find(|d| *d % 2 == 1) {
        return Err(CliError::Config(format!("mrb_scan depth {d} is odd")));
    }
    let gadd = match &cfg.gadd_strategy {
        Some(p) => Some(load_strategy(&config.existing_path(p)?)?),
        None => None,
    };
    let out = OutDir::create(out)?;
    let timing = cfg.timing();
    let mut cells = Vec::new();
    let mut decay = Vec::new();

    for &width in &scan.widths {
        let topo = first_n(&parse_topology(scan.topology.as_deref(), width)?, width)?;
        let noise = cfg.noise.build(width, &topo.edges)?;
        let backend = make_backend(cfg, noise)?;
        let colors = coloring(cfg, width, &topo.edges)?;
        let cands = candidates(cfg, colors.num_colors, gadd.clone())?;

        let mut circuits = Vec::new();
        for &depth in &scan.depths {
            for i in 0..scan.circuits_per_depth {
                let spec = MrbSpec {
                    width,
                    depth,
                    two_qubit_density: scan.density,
                    flavor: scan.flavor,
                    edges: topo.edges.clone(),
                    seed: seed::derive(cfg.seed, &[CIRCUIT_STREAM, width as u64, depth as u64, i as u64]),
                };
                let (c, target) = mrb_circuit(&spec, &timing)?;
                circuits.push((depth, i, c, target));
            }
        }

        // One batch per width so that every strategy sees the same seed.
        let mut batch = Vec::new();
        let mut runnable = Vec::new();
        for cand in &cands {
            let why = cand.unsupported.clone().or_else(|| match &cand.strategy {
                Some(s) if s.num_colors() < colors.num_colors => {
                    Some(format!("strategy has {} colors, width {width} needs {}", s.num_colors(), colors.num_colors))
                }
                _ => None,
            });
            if let Some(why) = why {
                cells.push(EplCell {
                    width,
                    strategy: cand.name.clone(),
                    status: CellStatus::Unsupported,
                    epl: None,
                    p: None,
                    a: None,
                    note: Some(why),
                });
                continue;
            }
            for (_, _, c, _) in &circuits {
                batch.push(match &cand.strategy {
                    Some(s) => insert_dd_with(c, s, &colors, &timing, cfg.dd.repetitions)?.0,
                    None => c.clone(),
                });
            }
            runnable.push(cand);
        }
        let counts = backend.submit(&batch, cfg.shots, seed::derive(cfg.seed, &[SUBMIT_STREAM, width as u64]))?;

        for (cand, chunk) in runnable.iter().zip(counts.chunks(circuits.len().max(1))) {
            let points: Vec<DecayPoint> = circuits
                .iter()
                .zip(chunk)
                .map(|((depth, i, _, target), counts)| {
                    let point = polarization(counts, target, *depth);
                    decay.push(DecayRow { width, strategy: cand.name.clone(), circuit: *i, point });
                    point
                })
                .collect();
            let cell = match fit_epl(&points, width) {
                Ok(fit) => EplCell {
                    width,
                    strategy: cand.name.clone(),
                    status: CellStatus::Ok,
                    epl: Some(fit.epl),
                    p: Some(fit.p),
                    a: Some(fit.a),
                    note: None,
                },
                Err(e) => EplCell {
                    width,
                    strategy: cand.name.clone(),
                    status: CellStatus::NoSignal,
                    epl: None,
                    p: None,
                    a: None,
                    note: Some(e.to_string()),
                },
            };
            cells.push(cell);
        }
    }

    let mut names: Vec<String> = Vec::new();
    for c in &cells {
        if !names.contains(&c.strategy) {
            names.push(c.strategy.clone());
        }
    }
    let summary = names
        .into_iter()
        .map(|name| {
            let first = cells
                .iter()
                .filter(|c| c.strategy == name && c.status == CellStatus::NoSignal)
                .map(|c| c.width)
                .min();
            StrategySummary { strategy: name, first_no_signal_width: first }
        })
        .collect();

    let mut decay_csv = String::from("width,strategy,depth,circuit,polarization,uncertainty\n");
    for r in &decay {
        let _ = writeln!(
            decay_csv,
            "{},{},{},{},{},{}",
            r.width, r.strategy, r.point.depth, r.circuit, r.point.polarization, r.point.uncertainty
        );
    }
    out.write("decay.csv", &decay_csv)?;

    let mut table = String::from("width,strategy,status,epl,p,a\n");
    for c in &cells {
        let status = match c.status {
            CellStatus::Ok => "ok",
            CellStatus::NoSignal => "no signal",
            CellStatus::Unsupported => "unsupported",
        };
        let f = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(table, "{},{},{status},{},{},{}", c.width, c.strategy, f(c.epl), f(c.p), f(c.a));
    }
    out.write("report.csv", &table)?;

    let report = MrbScanReport {
        meta: Meta::new("mrb-scan", config),
        widths: scan.widths.clone(),
        depths: scan.depths.clone(),
        circuits_per_depth: scan.circuits_per_depth,
        cells,
        summary,
    };
    out.write_json("report.json", &report)?;
    Ok(report)
}
