use std::sync::Arc;

use super::config::ScenarioConfig;
use super::forcing::BoundForcing;
use super::initial::make_initial;
use super::trajectory::{Trajectory, TrajectoryMeta};
use crate::nonlinear::NonlinearWorkspace;
use crate::spectral::{GalerkinCutoff, Lattice, Mode, SpectralField};
use crate::{Error, Result};

/// Abort threshold for `||u||_1`.
pub const BLOWUP_GUARD: f64 = 1e12;

pub const INTEGRATOR_TAG: &str = "integrating-factor rk4";

/// `P[f(t)] - nu A u - P B(u, u)`.
pub fn galerkin_rhs(u: &SpectralField, t: f64, cfg: &ScenarioConfig, ws: &mut NonlinearWorkspace) -> Result<SpectralField> {
    let cut = cfg.cutoff();
    if !u.supported_in(cut) {
        return Err(Error::InvalidArgument(format!(
            "galerkin_rhs needs u supported on lambda <= {}",
            cut.lambda_cut
        )));
    }
    let forcing = cfg.forcing.bind(u.lattice(), false)?;
    let mut sys = GalerkinSystem::new(u.lattice(), cut, forcing);
    let mut out = sys.nonlinear_part(u, t, ws)?;
    out.axpy(-cfg.nu, &u.stokes_power(1.0))?;
    Ok(out)
}

/// Everything one integration needs, with the viscous part kept separate.
struct GalerkinSystem {
    lattice: Arc<Lattice>,
    cut: GalerkinCutoff,
    forcing: BoundForcing,
}

impl GalerkinSystem {
    fn new(lattice: &Arc<Lattice>, cut: GalerkinCutoff, forcing: BoundForcing) -> Self {
        Self {
            lattice: lattice.clone(),
            cut,
            forcing,
        }
    }

    /// `P[f(t) - B(u, u)]`.
    fn nonlinear_part(&mut self, u: &SpectralField, t: f64, ws: &mut NonlinearWorkspace) -> Result<SpectralField> {
        let b = ws.bilinear(u, u)?;
        let b = if b.lattice().same_as(&self.lattice) {
            b
        } else {
            b.transfer(&self.lattice)?
        };
        let mut out = if self.forcing.is_zero() {
            b.scaled(-1.0)
        } else {
            let mut f = self.forcing.at(t);
            f.axpy(-1.0, &b)?;
            f
        };
        for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
            if !self.cut.keeps(self.lattice.lambda(i)) {
                *c = [Default::default(); 3];
            }
        }
        Ok(out)
    }
}

fn combine(terms: &[(&[f64], f64, &SpectralField)], lattice: &Arc<Lattice>) -> SpectralField {
    let n = lattice.len();
    let mut coeffs: Vec<Mode> = vec![[Default::default(); 3]; n];
    for (i, c) in coeffs.iter_mut().enumerate() {
        for (w, s, f) in terms {
            let a = w[i] * s;
            let d = &f.coeffs()[i];
            for j in 0..3 {
                c[j] += d[j] * a;
            }
        }
    }
    SpectralField::from_parts_unchecked(lattice.clone(), coeffs)
}

/// Integrates from the configured initial data (Galerkin-projected first).
pub fn integrate(cfg: &ScenarioConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let lat = cfg.lattice()?;
    let u0 = make_initial(&cfg.init, &lat)?;
    integrate_from(cfg, &u0)
}

/// Integrates from `u0`, which is transferred to the config lattice and
/// projected onto the Galerkin span.
pub fn integrate_from(cfg: &ScenarioConfig, u0: &SpectralField) -> Result<Trajectory> {
    cfg.validate()?;
    let lat = cfg.lattice()?;
    let cut = cfg.cutoff();
    let u0 = u0.transfer(&lat)?.project_low(cut);
    let forcing = cfg.forcing.bind(&lat, false)?;
    let mut sys = GalerkinSystem::new(&lat, cut, forcing);
    let mut ws = NonlinearWorkspace::state_band(lat.clone())?;

    let steps = cfg.steps();
    let dt = cfg.dt;
    let half: Vec<f64> = lat.lambdas().iter().map(|l| (-cfg.nu * l * dt * 0.5).exp()).collect();
    let full: Vec<f64> = lat.lambdas().iter().map(|l| (-cfg.nu * l * dt).exp()).collect();
    let ones = vec![1.0; lat.len()];

    let mut times = Vec::with_capacity(steps / cfg.stride + 1);
    let mut snaps = Vec::with_capacity(steps / cfg.stride + 1);
    times.push(0.0);
    snaps.push(u0.clone());

    let mut u = u0;
    for n in 0..steps {
        let t = cfg.t_end * (n as f64 / steps as f64);
        let k1 = sys.nonlinear_part(&u, t, &mut ws)?;
        let a = combine(&[(&half, 1.0, &u), (&half, 0.5 * dt, &k1)], &lat);
        let k2 = sys.nonlinear_part(&a, t + 0.5 * dt, &mut ws)?;
        let b = combine(&[(&half, 1.0, &u), (&ones, 0.5 * dt, &k2)], &lat);
        let k3 = sys.nonlinear_part(&b, t + 0.5 * dt, &mut ws)?;
        let c = combine(&[(&full, 1.0, &u), (&half, dt, &k3)], &lat);
        let k4 = sys.nonlinear_part(&c, t + dt, &mut ws)?;
        let mut next = combine(
            &[
                (&full, 1.0, &u),
                (&full, dt / 6.0, &k1),
                (&half, dt / 3.0, &k2),
                (&half, dt / 3.0, &k3),
                (&ones, dt / 6.0, &k4),
            ],
            &lat,
        );
        next.leray_in_place();

        let t_next = cfg.t_end * ((n + 1) as f64 / steps as f64);
        if next.has_non_finite() {
            return Err(Error::NonFinite { time: t_next });
        }
        let h1 = next.sobolev_norm(1.0);
        if h1 > BLOWUP_GUARD {
            return Err(Error::BlowUp { time: t_next, norm: h1 });
        }
        u = next;
        if (n + 1) % cfg.stride == 0 {
            times.push(t_next);
            snaps.push(u.clone());
        }
    }
    Trajectory::new(
        times,
        snaps,
        TrajectoryMeta {
            nu: cfg.nu,
            lambda_cut: cfg.lambda_cut,
            dt,
            stride: cfg.stride,
            integrator: INTEGRATOR_TAG.into(),
        },
    )
}
