use serde::Serialize;

use super::config::ScenarioConfig;
use super::integrate::galerkin_rhs;
use super::trajectory::Trajectory;
use crate::nonlinear::NonlinearWorkspace;
use crate::Result;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EnergyBalance {
    pub initial_energy: f64,
    pub final_energy: f64,
    /// `int nu ||u||_1^2`
    pub dissipation: f64,
    /// `int (f, u)`
    pub work: f64,
    /// `E(T) - E(0) + dissipation - work`
    pub residual: f64,
}

/// Time-integrated energy budget `d/dt |u|^2/2 + nu ||u||_1^2 - (f, u)` along
/// a Galerkin trajectory.
///
/// Integrals use the trapezoid rule with Hermite end corrections on each
/// interval, with `du/dt` taken from the Galerkin right-hand side.
pub fn energy_balance(traj: &Trajectory, cfg: &ScenarioConfig) -> Result<EnergyBalance> {
    let lat = traj.lattice().clone();
    let forcing = cfg.forcing.bind(&lat, false)?;
    let mut ws = NonlinearWorkspace::state_band(lat.clone())?;
    let nu = cfg.nu;

    // (value, derivative) of the dissipation and work integrands at each node
    let mut diss = Vec::with_capacity(traj.times().len());
    let mut work = Vec::with_capacity(traj.times().len());
    for (t, u) in traj.times().iter().zip(traj.snapshots()) {
        let du = galerkin_rhs(u, *t, cfg, &mut ws)?;
        let f = forcing.at(*t);
        let df = forcing.derivative_at(*t);
        diss.push((nu * u.sobolev_norm_sqr(1.0), 2.0 * nu * u.inner_product(&du, 1.0)?));
        work.push((
            f.inner_product(u, 0.0)?,
            df.inner_product(u, 0.0)? + f.inner_product(&du, 0.0)?,
        ));
    }
    let hermite = |g: &[(f64, f64)]| -> f64 {
        traj.times()
            .windows(2)
            .zip(g.windows(2))
            .map(|(t, g)| {
                let h = t[1] - t[0];
                0.5 * h * (g[0].0 + g[1].0) + h * h / 12.0 * (g[0].1 - g[1].1)
            })
            .sum()
    };
    let dissipation = hermite(&diss);
    let work = hermite(&work);
    let initial_energy = 0.5 * traj.initial().sobolev_norm_sqr(0.0);
    let final_energy = 0.5 * traj.last().sobolev_norm_sqr(0.0);
    Ok(EnergyBalance {
        initial_energy,
        final_energy,
        dissipation,
        work,
        residual: final_energy - initial_energy + dissipation - work,
    })
}
