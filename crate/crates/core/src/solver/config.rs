use std::path::PathBuf;
use std::sync::Arc;

use serde::Serialize;

use super::forcing::ForcingSpec;
use crate::nonlinear::ConstantEstimate;
use crate::spectral::{GalerkinCutoff, Lattice, SpectralField};
use crate::{Error, Result};

/// How discrete snapshots are extended to a continuous-in-time trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InterpolantKind {
    /// `u(t) = (1 - theta) u_j + theta u_{j+1}`.
    #[serde(rename = "linear")]
    Linear,
    /// Linear interpolation of `exp(nu A (t - t_j)) u` pulled back by the heat
    /// semigroup: `u(t) = (1 - theta) e^{-nu A (t - t_j)} u_j + theta e^{nu A (t_{j+1} - t)} u_{j+1}`.
    /// Reproduces exact solutions of the Stokes flow, reduces to `Linear` at `nu = 0`.
    #[serde(rename = "integrating-factor")]
    IntegratingFactor,
}

impl std::str::FromStr for InterpolantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Self::Linear),
            "integrating-factor" => Ok(Self::IntegratingFactor),
            other => Err(Error::Config(format!(
                "unknown interpolant '{other}' (expected linear or integrating-factor)"
            ))),
        }
    }
}

/// Composite Gauss-Legendre rule applied on every snapshot interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub order: usize,
    pub interpolant: InterpolantKind,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            order: 4,
            interpolant: InterpolantKind::IntegratingFactor,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum InitialSpec {
    /// `U0 (sin x cos y cos z, -cos x sin y cos z, 0)` in units where the box is `2 pi`.
    #[serde(rename = "taylor-green")]
    TaylorGreen { amplitude: f64 },
    /// Uniform random amplitudes on shells `|k|^2 <= shell`, projected and
    /// scaled so that the L^2 norm equals `amplitude`.
    #[serde(rename = "random-low-mode")]
    RandomLowMode { seed: u64, shell: u32, amplitude: f64 },
    #[serde(rename = "snapshot")]
    Snapshot { path: PathBuf },
    /// A field supplied in memory.
    #[serde(rename = "provided")]
    Provided {
        #[serde(skip)]
        field: Arc<SpectralField>,
    },
}

/// Physical and numerical parameters of one run.
#[derive(Clone, Debug, Serialize)]
pub struct ScenarioConfig {
    pub box_len: f64,
    pub k_max: u32,
    pub lambda_cut: f64,
    pub nu: f64,
    pub m: u32,
    pub t_end: f64,
    pub dt: f64,
    /// Snapshots are recorded every `stride` steps.
    pub stride: usize,
    pub init: InitialSpec,
    pub forcing: ForcingSpec,
    pub constant: ConstantEstimate,
    pub quad: QuadratureSpec,
}

impl ScenarioConfig {
    /// Config with the inscribed Galerkin cutoff, zero forcing, stride 1 and
    /// the default quadrature.
    pub fn new(
        box_len: f64,
        k_max: u32,
        nu: f64,
        m: u32,
        t_end: f64,
        dt: f64,
        init: InitialSpec,
        constant: ConstantEstimate,
    ) -> Self {
        let scale = (2.0 * std::f64::consts::PI / box_len).powi(2);
        Self {
            box_len,
            k_max,
            lambda_cut: scale * (k_max as f64).powi(2),
            nu,
            m,
            t_end,
            dt,
            stride: 1,
            init,
            forcing: ForcingSpec::Zero,
            constant,
            quad: QuadratureSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.box_len > 0.0) || !self.box_len.is_finite() {
            return Err(Error::Config(format!("box.L must be positive, got {}", self.box_len)));
        }
        if self.k_max == 0 {
            return Err(Error::Config("box.K must be at least 1".into()));
        }
        if self.m < 3 {
            return Err(Error::Config(format!(
                "cert.m = {} is not allowed: the certificate requires m >= 3",
                self.m
            )));
        }
        if !(self.nu >= 0.0) || !self.nu.is_finite() {
            return Err(Error::Config(format!("fluid.nu must be >= 0, got {}", self.nu)));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::Config(format!("time.T must be positive, got {}", self.t_end)));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("time.dt must be positive, got {}", self.dt)));
        }
        let ratio = self.t_end / self.dt;
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::Config(format!(
                "time.dt = {} does not divide time.T = {}",
                self.dt, self.t_end
            )));
        }
        if self.stride == 0 || (n as usize) % self.stride != 0 {
            return Err(Error::Config(format!(
                "time.stride = {} must be positive and divide the step count {}",
                self.stride, n as usize
            )));
        }
        let scale = (2.0 * std::f64::consts::PI / self.box_len).powi(2);
        let inscribed = scale * (self.k_max as f64).powi(2);
        if !(self.lambda_cut > 0.0) || self.lambda_cut > inscribed * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "galerkin.lambda_cut = {} must lie in (0, {inscribed}] so that whole eigenvalue shells fit in the lattice",
                self.lambda_cut
            )));
        }
        if self.constant.m != self.m {
            return Err(Error::Config(format!(
                "constant is for m = {} but cert.m = {}",
                self.constant.m, self.m
            )));
        }
        if !(self.constant.c_m > 0.0) || !self.constant.c_m.is_finite() {
            return Err(Error::Config(format!("cert.c_m must be positive, got {}", self.constant.c_m)));
        }
        if self.quad.order == 0 || self.quad.order > 32 {
            return Err(Error::Config(format!("quad.order must be in 1..=32, got {}", self.quad.order)));
        }
        if let InitialSpec::TaylorGreen { amplitude } | InitialSpec::RandomLowMode { amplitude, .. } = &self.init {
            if !amplitude.is_finite() {
                return Err(Error::Config("init.amplitude must be finite".into()));
            }
        }
        self.forcing.validate()?;
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    pub fn lattice(&self) -> Result<Arc<Lattice>> {
        Lattice::new(self.box_len, self.k_max)
    }

    pub fn cutoff(&self) -> GalerkinCutoff {
        GalerkinCutoff {
            lambda_cut: self.lambda_cut,
        }
    }

    /// Same scenario on another lattice; `lambda_cut = None` picks the inscribed cutoff.
    pub fn with_resolution(&self, k_max: u32, lambda_cut: Option<f64>) -> Self {
        let scale = (2.0 * std::f64::consts::PI / self.box_len).powi(2);
        let mut out = self.clone();
        out.k_max = k_max;
        out.lambda_cut = lambda_cut.unwrap_or(scale * (k_max as f64).powi(2));
        out
    }
}
