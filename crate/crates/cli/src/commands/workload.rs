use std::path::Path;

use serde_json::json;

use crate::config::LoadedConfig;
use crate::error::CliResult;
use crate::report::OutDir;
use crate::workload::{all_circuits, build, circuit_json, target_json};

/// Writes `circuit_<i>.json` for every generated circuit. Returns how many.
pub fn run(config: &LoadedConfig, out: &Path) -> CliResult<usize> {
    let cfg = &config.config;
    let exp = build(cfg)?;
    let out = OutDir::create(out)?;
    let all = all_circuits(&exp);
    for (i, tc) in all.iter().enumerate() {
        let doc = json!({
            "metadata": {
                "workload": exp.label,
                "kind": serde_json::to_value(cfg.workload()?).expect("config serializes"),
                "seed": cfg.seed,
                "target": target_json(tc),
            },
            "circuit": circuit_json(&tc.circuit),
        });
        out.write_json(&format!("circuit_{i}.json"), &doc)?;
    }
    Ok(all.len())
}
