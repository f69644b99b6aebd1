//! TOML scenario files.
//!
//! ```toml
//! [box]
//! L = "2pi"          # number, or a multiple of pi as a string
//! K = 4
//!
//! [galerkin]
//! lambda_cut = 16.0  # optional, default: largest shell inside the lattice (K^2 (2pi/L)^2)
//!
//! [fluid]
//! nu = 1.0
//!
//! [cert]
//! m = 3
//! c_m = 1.0                     # required unless c_m_method = "lattice-sum bound"
//! c_m_method = "user-supplied"  # optional: user-supplied | lattice-sum bound | empirical max
//!
//! [time]
//! T = 1.0
//! dt = 0.01
//! stride = 1         # optional
//!
//! [init]
//! kind = "taylor-green"   # taylor-green | random-low-mode | snapshot
//! amplitude = 0.05        # taylor-green, random-low-mode
//! seed = 7                # random-low-mode
//! shell = 2               # random-low-mode: |k|^2 <= shell
//! path = "u0.nscf"        # snapshot, relative to the config file
//!
//! [forcing]               # optional, default zero
//! kind = "steady"         # zero | steady | periodic | tabulated
//! modes = [{ k = [1, 0, 0], amplitude = [[0.0, 0.0], [0.1, 0.0], [0.0, 0.0]] }]
//! omega = 1.0             # periodic: F cos(omega t + phase)
//! phase = 0.0
//! times = [0.0, 1.0]      # tabulated
//! snapshots = ["f0.nscf", "f1.nscf"]
//!
//! [quad]                  # optional
//! order = 4
//! interpolant = "integrating-factor"   # or "linear"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::snapshot::read_snapshot;
use crate::nonlinear::{estimate_cm, ConstantEstimate, ConstantMethod};
use crate::solver::{ForcingMode, ForcingSpec, InitialSpec, QuadratureSpec, ScenarioConfig};
use crate::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Length {
    Number(f64),
    Text(String),
}

impl Length {
    fn value(&self) -> Result<f64> {
        match self {
            Length::Number(x) => Ok(*x),
            Length::Text(s) => {
                let bad = || Error::Config(format!("box.L = '{s}' is neither a number nor a multiple of pi"));
                let coef = s.trim().strip_suffix("pi").ok_or_else(bad)?.trim().trim_end_matches('*').trim();
                let c = if coef.is_empty() { 1.0 } else { coef.parse::<f64>().map_err(|_| bad())? };
                Ok(c * std::f64::consts::PI)
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxSection {
    #[serde(rename = "L")]
    l: Length,
    #[serde(rename = "K")]
    k: u32,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GalerkinSection {
    lambda_cut: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FluidSection {
    nu: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertSection {
    m: u32,
    c_m: Option<f64>,
    c_m_method: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TimeSection {
    #[serde(rename = "T")]
    t: f64,
    dt: f64,
    stride: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitSection {
    kind: String,
    amplitude: Option<f64>,
    seed: Option<u64>,
    shell: Option<u32>,
    path: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeEntry {
    k: [i32; 3],
    amplitude: [[f64; 2]; 3],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ForcingSection {
    kind: String,
    modes: Option<Vec<ModeEntry>>,
    omega: Option<f64>,
    phase: Option<f64>,
    times: Option<Vec<f64>>,
    snapshots: Option<Vec<PathBuf>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadSection {
    order: Option<usize>,
    interpolant: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(rename = "box")]
    box_: BoxSection,
    #[serde(default)]
    galerkin: GalerkinSection,
    fluid: FluidSection,
    cert: CertSection,
    time: TimeSection,
    init: InitSection,
    forcing: Option<ForcingSection>,
    #[serde(default)]
    quad: QuadSection,
}

fn require<T>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing required key {key}")))
}

fn reject_extra(present: bool, key: &str, kind: &str) -> Result<()> {
    if present {
        return Err(Error::Config(format!("key {key} does not apply to kind '{kind}'")));
    }
    Ok(())
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn constant(cert: &CertSection, box_len: f64) -> Result<ConstantEstimate> {
    let method = match &cert.c_m_method {
        Some(s) => Some(s.parse::<ConstantMethod>()?),
        None => None,
    };
    match (method, cert.c_m) {
        (Some(ConstantMethod::LatticeSumBound), None) => estimate_cm(cert.m, box_len),
        (Some(ConstantMethod::LatticeSumBound), Some(_)) => Err(Error::Config(
            "cert.c_m must be omitted with c_m_method = \"lattice-sum bound\"; the value is computed".into(),
        )),
        (Some(method), Some(c)) => Ok(ConstantEstimate { m: cert.m, c_m: c, method }),
        (None, Some(c)) => Ok(ConstantEstimate {
            m: cert.m,
            c_m: c,
            method: ConstantMethod::UserSupplied,
        }),
        (_, None) => Err(Error::Config(
            "missing required key cert.c_m (there is no default constant; set it or use c_m_method = \"lattice-sum bound\")"
                .into(),
        )),
    }
}

fn forcing(sec: Option<ForcingSection>, base: &Path) -> Result<ForcingSpec> {
    let Some(sec) = sec else {
        return Ok(ForcingSpec::Zero);
    };
    let modes = |m: Option<Vec<ModeEntry>>| -> Result<Vec<ForcingMode>> {
        Ok(require(m, "forcing.modes")?
            .into_iter()
            .map(|e| ForcingMode {
                k: e.k,
                amplitude: e.amplitude,
            })
            .collect())
    };
    let kind = sec.kind.as_str();
    let spec = match kind {
        "zero" => {
            reject_extra(sec.modes.is_some(), "forcing.modes", kind)?;
            reject_extra(sec.omega.is_some() || sec.phase.is_some(), "forcing.omega/phase", kind)?;
            reject_extra(sec.times.is_some() || sec.snapshots.is_some(), "forcing.times/snapshots", kind)?;
            ForcingSpec::Zero
        }
        "steady" => {
            reject_extra(sec.omega.is_some() || sec.phase.is_some(), "forcing.omega/phase", kind)?;
            reject_extra(sec.times.is_some() || sec.snapshots.is_some(), "forcing.times/snapshots", kind)?;
            ForcingSpec::Steady { modes: modes(sec.modes)? }
        }
        "periodic" => {
            reject_extra(sec.times.is_some() || sec.snapshots.is_some(), "forcing.times/snapshots", kind)?;
            ForcingSpec::Periodic {
                modes: modes(sec.modes)?,
                omega: require(sec.omega, "forcing.omega")?,
                phase: sec.phase.unwrap_or(0.0),
            }
        }
        "tabulated" => {
            reject_extra(sec.modes.is_some(), "forcing.modes", kind)?;
            reject_extra(sec.omega.is_some() || sec.phase.is_some(), "forcing.omega/phase", kind)?;
            let times = require(sec.times, "forcing.times")?;
            let fields = require(sec.snapshots, "forcing.snapshots")?
                .iter()
                .map(|p| read_snapshot(resolve(base, p)).map(|(f, _)| f))
                .collect::<Result<Vec<_>>>()?;
            ForcingSpec::Tabulated { times, fields }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown forcing.kind '{other}' (expected zero, steady, periodic, tabulated)"
            )))
        }
    };
    Ok(spec)
}

fn initial(sec: InitSection, base: &Path) -> Result<InitialSpec> {
    let kind = sec.kind.as_str();
    match kind {
        "taylor-green" => {
            reject_extra(sec.seed.is_some() || sec.shell.is_some(), "init.seed/shell", kind)?;
            reject_extra(sec.path.is_some(), "init.path", kind)?;
            Ok(InitialSpec::TaylorGreen {
                amplitude: require(sec.amplitude, "init.amplitude")?,
            })
        }
        "random-low-mode" => {
            reject_extra(sec.path.is_some(), "init.path", kind)?;
            Ok(InitialSpec::RandomLowMode {
                seed: require(sec.seed, "init.seed")?,
                shell: require(sec.shell, "init.shell")?,
                amplitude: require(sec.amplitude, "init.amplitude")?,
            })
        }
        "snapshot" => {
            reject_extra(
                sec.amplitude.is_some() || sec.seed.is_some() || sec.shell.is_some(),
                "init.amplitude/seed/shell",
                kind,
            )?;
            Ok(InitialSpec::Snapshot {
                path: resolve(base, &require(sec.path, "init.path")?),
            })
        }
        other => Err(Error::Config(format!(
            "unknown init.kind '{other}' (expected taylor-green, random-low-mode, snapshot)"
        ))),
    }
}

/// Parses and validates a scenario; relative paths resolve against `base_dir`.
pub fn parse_config_str(text: &str, base_dir: &Path) -> Result<ScenarioConfig> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
    let box_len = file.box_.l.value()?;
    if !(box_len > 0.0) || !box_len.is_finite() {
        return Err(Error::Config(format!("box.L must be positive, got {box_len}")));
    }
    if file.cert.m < 3 {
        return Err(Error::Config(format!(
            "cert.m = {} is not allowed: the certificate requires m >= 3",
            file.cert.m
        )));
    }
    let c = constant(&file.cert, box_len)?;
    let init = initial(file.init, base_dir)?;
    let mut cfg = ScenarioConfig::new(box_len, file.box_.k, file.fluid.nu, file.cert.m, file.time.t, file.time.dt, init, c);
    if let Some(lc) = file.galerkin.lambda_cut {
        cfg.lambda_cut = lc;
    }
    if let Some(s) = file.time.stride {
        cfg.stride = s;
    }
    cfg.forcing = forcing(file.forcing, base_dir)?;
    let mut quad = QuadratureSpec::default();
    if let Some(o) = file.quad.order {
        quad.order = o;
    }
    if let Some(kind) = &file.quad.interpolant {
        quad.interpolant = kind.parse()?;
    }
    cfg.quad = quad;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config_str(&text, base)
}
