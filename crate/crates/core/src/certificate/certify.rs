use serde::Serialize;

use super::quadrature::{refinement_error, QuadratureInfo};
use super::riccati::{riccati_feasible, RiccatiInput};
use super::sampling::{sample_nodes, NodeSamples, ResidualEvaluator};
use crate::nonlinear::{ConstantEstimate, ConstantMethod};
use crate::solver::{ForcingSpec, InterpolantKind, ScenarioConfig, Trajectory};
use crate::spectral::SpectralField;
use crate::{Error, Result};

/// Outcome of a one-sided test. A failed condition never means that no
/// strong solution exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail-condition")]
    FailCondition,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::FailCondition => "fail-condition",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Caveat {
    /// `nu = 0`: the inviscid statement additionally needs `u0` in `V^{m+3}`.
    #[serde(rename = "inviscid-mode")]
    InviscidMode,
    #[serde(rename = "user-supplied-constant")]
    UserSuppliedConstant,
    /// Sampled, not proven: the verdict is only as good as the sampled maximum.
    #[serde(rename = "non-rigorous-constant")]
    NonRigorousConstant,
    #[serde(rename = "subsampled-snapshots")]
    SubsampledSnapshots,
    /// Time integrals are floating-point quadratures, not enclosures.
    #[serde(rename = "floating-point-quadrature")]
    FloatingPointQuadrature,
}

pub(crate) fn caveats_for(nu: f64, c: &ConstantEstimate, stride: usize) -> Vec<Caveat> {
    let mut out = vec![Caveat::FloatingPointQuadrature];
    if nu == 0.0 {
        out.push(Caveat::InviscidMode);
    }
    match c.method {
        ConstantMethod::UserSupplied => out.push(Caveat::UserSuppliedConstant),
        ConstantMethod::EmpiricalMax => out.push(Caveat::NonRigorousConstant),
        ConstantMethod::LatticeSumBound => {}
    }
    if stride > 1 {
        out.push(Caveat::SubsampledSnapshots);
    }
    out.sort();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub m: u32,
    pub constant: ConstantEstimate,
    pub t_end: f64,
    pub nu: f64,
    pub k_max: u32,
    pub lambda_cut: f64,
    /// `||u(0) - v0||_m`
    pub initial_error: f64,
    /// `int_0^T R`
    pub residual_integral: f64,
    /// `int_0^T (||u||_m + ||u||_{m+1})`
    pub norm_integral: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` up to rounding; positive exactly when the verdict is a pass.
    pub margin: f64,
    pub alpha: f64,
    /// `alpha lhs T`, the Riccati feasibility product.
    pub riccati_product: f64,
    pub verdict: Verdict,
    pub interpolant: InterpolantKind,
    pub quadrature: QuadratureInfo,
    pub lhs_quadrature_error: f64,
    pub rhs_quadrature_error: f64,
    pub caveats: Vec<Caveat>,
    #[serde(skip)]
    pub samples: NodeSamples,
}

impl CertificateReport {
    pub fn riccati_input(&self) -> Option<RiccatiInput> {
        RiccatiInput::new(self.lhs, 0.0, self.alpha, self.t_end).ok()
    }
}

/// Verdict and margin of `eta < exp(-c I) / (c T)`, computed through the
/// Riccati product so that the verdict agrees with the lemma bit for bit.
pub(crate) struct Condition {
    pub rhs: f64,
    pub alpha: f64,
    pub product: f64,
    pub margin: f64,
    pub pass: bool,
}

pub(crate) fn evaluate_condition(eta: f64, c: f64, norm_integral: f64, t_end: f64) -> Condition {
    let rhs = (-c * norm_integral).exp() / (c * t_end);
    let alpha = c * (c * norm_integral).exp();
    let product = alpha * eta * t_end;
    if !alpha.is_finite() {
        return Condition {
            rhs,
            alpha,
            product,
            margin: rhs - eta,
            pass: false,
        };
    }
    let pass = product < 1.0;
    let mut margin = rhs * (1.0 - product);
    if pass && !(margin > 0.0) {
        // rhs * (1 - p) underflowed
        margin = f64::MIN_POSITIVE;
    }
    Condition {
        rhs,
        alpha,
        product,
        margin,
        pass,
    }
}

pub(crate) fn check_certificate_inputs(traj: &Trajectory, cfg: &ScenarioConfig) -> Result<()> {
    if cfg.m < 3 {
        return Err(Error::Config(format!("the certificate requires m >= 3, got {}", cfg.m)));
    }
    if cfg.constant.m != cfg.m {
        return Err(Error::Config(format!(
            "constant is for m = {} but the certificate uses m = {}",
            cfg.constant.m, cfg.m
        )));
    }
    if !(cfg.constant.c_m > 0.0) || !cfg.constant.c_m.is_finite() {
        return Err(Error::Config(format!(
            "certificate needs a positive c_m with provenance, got {}",
            cfg.constant.c_m
        )));
    }
    let t = traj.t_end();
    if (t - cfg.t_end).abs() > 1e-12 * cfg.t_end.abs().max(1.0) {
        return Err(Error::Config(format!(
            "trajectory ends at {t} but the configuration has T = {}",
            cfg.t_end
        )));
    }
    if traj.meta().nu != cfg.nu {
        return Err(Error::Config(format!(
            "trajectory viscosity {} differs from configured {}",
            traj.meta().nu,
            cfg.nu
        )));
    }
    Ok(())
}

/// The a-posteriori test on a computed trajectory against the data `(v0, f)`.
pub fn certify(traj: &Trajectory, v0: &SpectralField, forcing: &ForcingSpec, cfg: &ScenarioConfig) -> Result<CertificateReport> {
    check_certificate_inputs(traj, cfg)?;
    let mut ev = ResidualEvaluator::new(traj.lattice(), forcing, cfg.nu, cfg.m)?;
    let order = cfg.quad.order;
    let kind = cfg.quad.interpolant;
    let coarse = sample_nodes(traj, cfg.m, order, kind, Some(&mut ev))?;
    let fine = sample_nodes(traj, cfg.m, 2 * order, kind, Some(&mut ev))?;

    let mf = cfg.m as f64;
    let initial_error = traj.initial().difference(v0)?.sobolev_norm(mf);
    let c = cfg.constant.c_m;
    let t_end = traj.t_end();

    let residual_integral = coarse.residual_integral();
    let norm_integral = coarse.norm_integral();
    let lhs = initial_error + residual_integral;
    let cond = evaluate_condition(lhs, c, norm_integral, t_end);

    let lhs_fine = initial_error + fine.residual_integral();
    let rhs_fine = evaluate_condition(lhs_fine, c, fine.norm_integral(), t_end).rhs;

    let verdict = if cond.pass { Verdict::Pass } else { Verdict::FailCondition };
    if let Ok(input) = RiccatiInput::new(lhs, 0.0, cond.alpha, t_end) {
        assert_eq!(
            riccati_feasible(&input),
            verdict.is_pass(),
            "certificate verdict disagrees with the Riccati lemma"
        );
    }
    assert_eq!(verdict.is_pass(), cond.margin > 0.0, "verdict and margin sign disagree");

    Ok(CertificateReport {
        m: cfg.m,
        constant: cfg.constant,
        t_end,
        nu: cfg.nu,
        k_max: traj.lattice().k_max(),
        lambda_cut: traj.meta().lambda_cut,
        initial_error,
        residual_integral,
        norm_integral,
        lhs,
        rhs: cond.rhs,
        margin: cond.margin,
        alpha: cond.alpha,
        riccati_product: cond.product,
        verdict,
        interpolant: kind,
        quadrature: QuadratureInfo::composite(order, traj.intervals()),
        lhs_quadrature_error: refinement_error(lhs, lhs_fine),
        rhs_quadrature_error: refinement_error(cond.rhs, rhs_fine),
        caveats: caveats_for(cfg.nu, &cfg.constant, traj.meta().stride),
        samples: coarse,
    })
}
