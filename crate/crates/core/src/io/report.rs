//! JSON run reports and CSV norm tables.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::certificate::{Caveat, NodeSamples};
use crate::solver::ScenarioConfig;
use crate::Result;

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub os: &'static str,
    pub arch: &'static str,
}

impl Provenance {
    pub fn current() -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
        }
    }
}

/// Everything one CLI invocation produced. Contains no timestamps, so equal
/// inputs give byte-identical files.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport<T: Serialize> {
    pub command: String,
    pub provenance: Provenance,
    pub scenario: ScenarioConfig,
    pub caveats: Vec<Caveat>,
    pub result: T,
}

impl<T: Serialize> RunReport<T> {
    pub fn new(command: &str, scenario: &ScenarioConfig, caveats: Vec<Caveat>, result: T) -> Self {
        Self {
            command: command.into(),
            provenance: Provenance::current(),
            scenario: scenario.clone(),
            caveats,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// `t, norm_m, norm_m1, residual_m` at each quadrature node.
pub fn write_norm_table(samples: &NodeSamples, out: impl std::io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "norm_m", "norm_m1", "residual_m"])?;
    for n in &samples.nodes {
        w.write_record([
            format!("{:e}", n.t),
            format!("{:e}", n.norm_m),
            format!("{:e}", n.norm_m1),
            format!("{:e}", n.residual),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_norm_table_file(samples: &NodeSamples, path: impl AsRef<Path>) -> Result<()> {
    write_norm_table(samples, fs::File::create(path)?)
}
