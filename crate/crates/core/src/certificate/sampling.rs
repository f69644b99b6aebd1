use std::sync::Arc;

use serde::Serialize;

use super::quadrature::CompositeRule;
use crate::nonlinear::{ConstantEstimate, NonlinearWorkspace};
use crate::solver::{BoundForcing, ForcingSpec, InterpolantKind, QuadratureSpec, ScenarioConfig, Trajectory};
use crate::spectral::{GalerkinCutoff, Lattice, SpectralField};
use crate::{Error, Result};

/// Norms of the continuous trajectory at one quadrature node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NodeSample {
    pub t: f64,
    pub weight: f64,
    pub norm_m: f64,
    pub norm_m1: f64,
    /// `||du/dt + nu A u + B(u, u) - f||_m`, when requested.
    pub residual: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct NodeSamples {
    pub nodes: Vec<NodeSample>,
}

impl NodeSamples {
    pub fn norm_integral(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight * (n.norm_m + n.norm_m1)).sum()
    }

    pub fn residual_integral(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight * n.residual).sum()
    }

    /// Per-interval integrals of `||u||_m + ||u||_{m+1}`, accumulated from 0.
    pub fn cumulative_norm_integral(&self, order: usize) -> Vec<f64> {
        let mut acc = vec![0.0];
        for chunk in self.nodes.chunks(order) {
            let s: f64 = chunk.iter().map(|n| n.weight * (n.norm_m + n.norm_m1)).sum();
            acc.push(acc.last().unwrap() + s);
        }
        acc
    }
}

/// Evaluator for residuals on the full product band of a trajectory lattice.
pub(crate) struct ResidualEvaluator {
    ws: NonlinearWorkspace,
    forcing: BoundForcing,
    nu: f64,
    m: f64,
}

impl ResidualEvaluator {
    pub(crate) fn new(lattice: &Arc<Lattice>, forcing: &ForcingSpec, nu: f64, m: u32) -> Result<Self> {
        let ws = NonlinearWorkspace::full_band(lattice.clone())?;
        let forcing = forcing.bind(ws.out_lattice(), true)?;
        Ok(Self {
            ws,
            forcing,
            nu,
            m: m as f64,
        })
    }

    fn out_lattice(&self) -> &Arc<Lattice> {
        self.ws.out_lattice()
    }

    /// `||g + B(u, u) - f(t)||_m` with `g = du/dt + nu A u` on the state lattice.
    fn residual(&mut self, u: &SpectralField, g: &SpectralField, t: f64) -> Result<f64> {
        let mut r = self.ws.bilinear(u, u)?;
        r.axpy(1.0, &g.transfer(self.ws.out_lattice())?)?;
        if !self.forcing.is_zero() {
            r.axpy(-1.0, &self.forcing.at(t))?;
        }
        Ok(r.sobolev_norm(self.m))
    }

    /// `||Q[B(u, u) - f(t)]||_m`.
    fn tail(&mut self, u: &SpectralField, t: f64, cut: GalerkinCutoff) -> Result<f64> {
        let mut r = self.ws.bilinear(u, u)?;
        if !self.forcing.is_zero() {
            r.axpy(-1.0, &self.forcing.at(t))?;
        }
        Ok(r.project_high(cut).sobolev_norm(self.m))
    }
}

fn check_nonempty(traj: &Trajectory) -> Result<()> {
    if traj.intervals() == 0 {
        return Err(Error::InvalidArgument("trajectory has a single snapshot; nothing to integrate".into()));
    }
    Ok(())
}

/// Samples `||u||_m`, `||u||_{m+1}` and optionally the residual at every node.
pub(crate) fn sample_nodes(
    traj: &Trajectory,
    m: u32,
    order: usize,
    kind: InterpolantKind,
    mut residual: Option<&mut ResidualEvaluator>,
) -> Result<NodeSamples> {
    check_nonempty(traj)?;
    if let Some(ev) = &residual {
        if !ev.nu.eq(&traj.meta().nu) {
            return Err(Error::InvalidArgument(format!(
                "residual viscosity {} differs from trajectory viscosity {}",
                ev.nu,
                traj.meta().nu
            )));
        }
        if !ev.out_lattice().same_box(traj.lattice()) {
            return Err(Error::LatticeMismatch("forcing and trajectory boxes differ".into()));
        }
    }
    let rule = CompositeRule::new(order)?;
    let mf = m as f64;
    let mut nodes = Vec::with_capacity(order * traj.intervals());
    for (j, t, weight) in rule.nodes(traj) {
        let s = traj.segment(j).sample(t, kind);
        let r = match residual.as_deref_mut() {
            Some(ev) => ev.residual(&s.value, &s.dudt_plus_viscous, t)?,
            None => 0.0,
        };
        nodes.push(NodeSample {
            t,
            weight,
            norm_m: s.value.sobolev_norm(mf),
            norm_m1: s.value.sobolev_norm(mf + 1.0),
            residual: r,
        });
    }
    Ok(NodeSamples { nodes })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaEstimate {
    pub alpha: f64,
    /// `int_0^T (||u||_m + ||u||_{m+1})`
    pub norm_integral: f64,
    pub nodes: usize,
}

/// `c_m exp(c_m int_0^T (||u||_m + ||u||_{m+1}))` on the continuous trajectory.
pub fn exponent_alpha(traj: &Trajectory, m: u32, c: &ConstantEstimate, quad: &QuadratureSpec) -> Result<AlphaEstimate> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!("the exponent needs m >= 3, got {m}")));
    }
    let s = sample_nodes(traj, m, quad.order, quad.interpolant, None)?;
    let norm_integral = s.norm_integral();
    Ok(AlphaEstimate {
        alpha: c.c_m * (c.c_m * norm_integral).exp(),
        norm_integral,
        nodes: s.nodes.len(),
    })
}

/// `R(t) = ||du/dt + nu A u + B(u, u) - f||_m` at the quadrature nodes, with
/// `(t, weight, R)` per node.
pub fn residual_norms(
    traj: &Trajectory,
    forcing: &ForcingSpec,
    cfg: &ScenarioConfig,
    quad: &QuadratureSpec,
) -> Result<Vec<(f64, f64, f64)>> {
    let mut ev = ResidualEvaluator::new(traj.lattice(), forcing, traj.meta().nu, cfg.m)?;
    if traj.meta().nu != cfg.nu {
        return Err(Error::Config(format!(
            "trajectory viscosity {} differs from configured {}",
            traj.meta().nu,
            cfg.nu
        )));
    }
    let s = sample_nodes(traj, cfg.m, quad.order, quad.interpolant, Some(&mut ev))?;
    Ok(s.nodes.iter().map(|n| (n.t, n.weight, n.residual)).collect())
}

/// `||Q[B(u_n, u_n) - f]||_m` at the quadrature nodes, `(t, weight, value)` per node.
pub fn galerkin_residual_norms(
    traj: &Trajectory,
    forcing: &ForcingSpec,
    lambda_cut: f64,
    m: u32,
    quad: &QuadratureSpec,
) -> Result<Vec<(f64, f64, f64)>> {
    check_nonempty(traj)?;
    let cut = GalerkinCutoff::new(lambda_cut)?;
    if traj.snapshots().iter().any(|u| !u.supported_in(cut)) {
        return Err(Error::InvalidArgument(format!(
            "trajectory has modes above lambda_cut = {lambda_cut}"
        )));
    }
    let mut ev = ResidualEvaluator::new(traj.lattice(), forcing, traj.meta().nu, m)?;
    let rule = CompositeRule::new(quad.order)?;
    let mut out = Vec::new();
    for (j, t, w) in rule.nodes(traj) {
        let s = traj.segment(j).sample(t, quad.interpolant);
        out.push((t, w, ev.tail(&s.value, t, cut)?));
    }
    Ok(out)
}

pub fn weighted_sum(samples: &[(f64, f64, f64)]) -> f64 {
    samples.iter().map(|(_, w, v)| w * v).sum()
}

/// Norms and residual of the continuous trajectory at every quadrature node.
pub fn norm_series(traj: &Trajectory, forcing: &ForcingSpec, cfg: &ScenarioConfig) -> Result<NodeSamples> {
    let mut ev = ResidualEvaluator::new(traj.lattice(), forcing, traj.meta().nu, cfg.m)?;
    sample_nodes(traj, cfg.m, cfg.quad.order, cfg.quad.interpolant, Some(&mut ev))
}
