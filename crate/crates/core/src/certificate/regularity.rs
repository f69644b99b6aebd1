use serde::Serialize;

use super::quadrature::CompositeRule;
use crate::nonlinear::ConstantEstimate;
use crate::solver::{ForcingSpec, ScenarioConfig, Trajectory};
use crate::spectral::Lattice;
use crate::{Error, Result};

/// Slack before a violated integral bound is flagged.
pub const REGULARITY_FLAG_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub k: u32,
    pub constant: ConstantEstimate,
    /// `nu int ||u||_{k+1}^2`
    pub lhs: f64,
    pub initial_term: f64,
    /// `(c_k^2 / nu) int ||u||_k^4`
    pub nonlinear_term: f64,
    /// `(1 / nu) int ||f||_{k-1}^2`
    pub forcing_term: f64,
    pub rhs: f64,
    /// `lhs / rhs`, with `0 / 0 = 0`.
    pub ratio: f64,
    pub flagged: bool,
}

/// Checks the time-integrated `V^{k+1}` bound along a trajectory.
pub fn regularity_diagnostic(
    traj: &Trajectory,
    forcing: &ForcingSpec,
    k: u32,
    cfg: &ScenarioConfig,
    c_k: &ConstantEstimate,
) -> Result<RegularityReport> {
    if !(cfg.nu > 0.0) {
        return Err(Error::InvalidArgument("the regularity diagnostic needs nu > 0".into()));
    }
    if k < 2 || k > cfg.m {
        return Err(Error::InvalidArgument(format!("k = {k} must lie in [2, {}]", cfg.m)));
    }
    if traj.intervals() == 0 {
        return Err(Error::InvalidArgument("trajectory has a single snapshot".into()));
    }
    let nu = cfg.nu;
    let kf = k as f64;
    let lat = traj.lattice();
    let wide = Lattice::new(lat.box_len(), 2 * lat.k_max())?;
    let f = forcing.bind(&wide, true)?;
    let rule = CompositeRule::new(cfg.quad.order)?;
    let (mut high, mut quartic, mut force) = (0.0, 0.0, 0.0);
    for (j, t, w) in rule.nodes(traj) {
        let u = traj.segment(j).sample(t, cfg.quad.interpolant).value;
        high += w * u.sobolev_norm_sqr(kf + 1.0);
        quartic += w * u.sobolev_norm_sqr(kf).powi(2);
        if !f.is_zero() {
            force += w * f.at(t).sobolev_norm_sqr(kf - 1.0);
        }
    }
    let lhs = nu * high;
    let initial_term = traj.initial().sobolev_norm_sqr(kf);
    let nonlinear_term = c_k.c_m * c_k.c_m / nu * quartic;
    let forcing_term = force / nu;
    let rhs = initial_term + nonlinear_term + forcing_term;
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(RegularityReport {
        k,
        constant: *c_k,
        lhs,
        initial_term,
        nonlinear_term,
        forcing_term,
        rhs,
        ratio,
        flagged: ratio > 1.0 + REGULARITY_FLAG_TOL,
    })
}
