use serde::Serialize;

use super::certify::{caveats_for, check_certificate_inputs, evaluate_condition, Caveat, Verdict};
use super::quadrature::CompositeRule;
use super::sampling::sample_nodes;
use crate::solver::{ForcingSpec, ScenarioConfig, Trajectory};
use crate::spectral::SpectralField;
use crate::Result;

/// Bound on `||u(t) - v(t)||_m` at the trajectory nodes.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCurve {
    pub times: Vec<f64>,
    /// `None` past the validity horizon.
    pub bound: Vec<Option<f64>>,
    /// First node time with `alpha eta t >= 1`, if any.
    pub horizon: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RobustnessReport {
    pub m: u32,
    /// `||u0 - v0||_m + int ||f - g||_m`
    pub eta: f64,
    pub initial_difference: f64,
    pub forcing_difference: f64,
    /// `exp(-c I) / (c T)`
    pub threshold: f64,
    pub alpha: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub caveats: Vec<Caveat>,
    pub curve: BoundCurve,
}

/// Treats `traj_u` as a strong solution with data `(u(0), cfg.forcing)` and
/// tests whether the problem with data `(v0, g)` stays regular nearby.
pub fn robustness_bound(
    traj_u: &Trajectory,
    v0: &SpectralField,
    g: &ForcingSpec,
    cfg: &ScenarioConfig,
) -> Result<(BoundCurve, Verdict)> {
    let r = robustness_report(traj_u, v0, g, cfg)?;
    Ok((r.curve, r.verdict))
}

pub fn robustness_report(
    traj_u: &Trajectory,
    v0: &SpectralField,
    g: &ForcingSpec,
    cfg: &ScenarioConfig,
) -> Result<RobustnessReport> {
    check_certificate_inputs(traj_u, cfg)?;
    let m = cfg.m as f64;
    let c = cfg.constant.c_m;
    let order = cfg.quad.order;
    let samples = sample_nodes(traj_u, cfg.m, order, cfg.quad.interpolant, None)?;
    let norm_integral = samples.norm_integral();

    // int ||f - g||_m on the union of both forcing supports
    let lat = traj_u.lattice();
    let wide = crate::spectral::Lattice::new(lat.box_len(), 2 * lat.k_max())?;
    let f = cfg.forcing.bind(&wide, true)?;
    let g = g.bind(&wide, true)?;
    let forcing_difference = if f.is_zero() && g.is_zero() {
        0.0
    } else {
        let rule = CompositeRule::new(order)?;
        rule.nodes(traj_u)
            .into_iter()
            .map(|(_, t, w)| {
                let mut d = f.at(t);
                d.axpy(-1.0, &g.at(t)).map(|_| w * d.sobolev_norm(m))
            })
            .sum::<Result<f64>>()?
    };
    let initial_difference = traj_u.initial().difference(v0)?.sobolev_norm(m);
    let eta = initial_difference + forcing_difference;
    let t_end = traj_u.t_end();
    let cond = evaluate_condition(eta, c, norm_integral, t_end);
    let verdict = if cond.pass { Verdict::Pass } else { Verdict::FailCondition };

    let cumulative = samples.cumulative_norm_integral(order);
    let mut horizon = None;
    let bound = traj_u
        .times()
        .iter()
        .zip(&cumulative)
        .map(|(&t, &acc)| {
            let q = cond.alpha * eta * t;
            if q < 1.0 && horizon.is_none() {
                Some((c * acc).exp() * eta / (1.0 - q))
            } else {
                horizon.get_or_insert(t);
                None
            }
        })
        .collect();

    Ok(RobustnessReport {
        m: cfg.m,
        eta,
        initial_difference,
        forcing_difference,
        threshold: cond.rhs,
        alpha: cond.alpha,
        margin: cond.margin,
        verdict,
        caveats: caveats_for(cfg.nu, &cfg.constant, traj_u.meta().stride),
        curve: BoundCurve {
            times: traj_u.times().to_vec(),
            bound,
            horizon,
        },
    })
}
