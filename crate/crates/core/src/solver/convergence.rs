use serde::Serialize;

use super::config::ScenarioConfig;
use super::integrate::integrate;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct ConvergencePoint {
    pub k_max: u32,
    pub lambda_cut: f64,
    /// `sup_t ||u_n(t) - u_ref(t)||_m` over the common snapshot times.
    pub sup_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceStudy {
    pub m: u32,
    pub reference_k: u32,
    pub points: Vec<ConvergencePoint>,
    /// Each error is at most 1.1 times the previous one.
    pub monotone: bool,
}

/// Runs `cfg` at each `K` (inscribed cutoff) and compares against a reference
/// run at twice the largest `K`.
pub fn convergence_study(cfg: &ScenarioConfig, ks: &[u32]) -> Result<ConvergenceStudy> {
    let Some(&k_top) = ks.iter().max() else {
        return Err(Error::InvalidArgument("convergence study needs at least one K".into()));
    };
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let reference_k = 2 * k_top;
    let reference = integrate(&cfg.with_resolution(reference_k, None))?;
    let m = cfg.m as f64;
    let mut points = Vec::with_capacity(ks.len());
    for k in ks {
        let run_cfg = cfg.with_resolution(k, None);
        let traj = integrate(&run_cfg)?;
        let mut sup = 0.0_f64;
        for (u, r) in traj.snapshots().iter().zip(reference.snapshots()) {
            sup = sup.max(u.difference(r)?.sobolev_norm(m));
        }
        points.push(ConvergencePoint {
            k_max: k,
            lambda_cut: run_cfg.lambda_cut,
            sup_error: sup,
        });
    }
    let monotone = points.windows(2).all(|w| w[1].sup_error <= 1.1 * w[0].sup_error);
    Ok(ConvergenceStudy {
        m: cfg.m,
        reference_k,
        points,
        monotone,
    })
}
