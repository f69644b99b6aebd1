use std::sync::Arc;

use serde::Serialize;

use super::config::InterpolantKind;
use crate::spectral::{Lattice, SpectralField};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryMeta {
    pub nu: f64,
    pub lambda_cut: f64,
    pub dt: f64,
    pub stride: usize,
    pub integrator: String,
}

/// Time-ordered snapshots on one lattice, `t_0 = 0 < t_1 < ... < t_N = T`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    snapshots: Vec<SpectralField>,
    meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, snapshots: Vec<SpectralField>, meta: TrajectoryMeta) -> Result<Self> {
        if times.is_empty() || times.len() != snapshots.len() {
            return Err(Error::InvalidArgument(format!(
                "trajectory needs matching non-empty times ({}) and snapshots ({})",
                times.len(),
                snapshots.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidArgument(format!("trajectory must start at t = 0, got {}", times[0])));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("trajectory times must increase strictly".into()));
        }
        let lat = snapshots[0].lattice().clone();
        if snapshots.iter().any(|s| !s.lattice().same_as(&lat)) {
            return Err(Error::LatticeMismatch("trajectory snapshots on different lattices".into()));
        }
        if !(meta.nu >= 0.0) {
            return Err(Error::InvalidArgument(format!("viscosity must be >= 0, got {}", meta.nu)));
        }
        Ok(Self { times, snapshots, meta })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn snapshots(&self) -> &[SpectralField] {
        &self.snapshots
    }

    pub fn meta(&self) -> &TrajectoryMeta {
        &self.meta
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        self.snapshots[0].lattice()
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn initial(&self) -> &SpectralField {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &SpectralField {
        self.snapshots.last().unwrap()
    }

    pub fn intervals(&self) -> usize {
        self.times.len() - 1
    }

    pub fn segment(&self, j: usize) -> Segment<'_> {
        Segment {
            t0: self.times[j],
            t1: self.times[j + 1],
            u0: &self.snapshots[j],
            u1: &self.snapshots[j + 1],
            nu: self.meta.nu,
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment<'_>> {
        (0..self.intervals()).map(move |j| self.segment(j))
    }

    /// Interval `j` with `t_j <= t < t_{j+1}` (the last interval at `t = T`).
    pub fn locate(&self, t: f64) -> Result<usize> {
        let end = self.t_end();
        if !(t >= 0.0 && t <= end) {
            return Err(Error::OutOfRange { t, end });
        }
        if self.intervals() == 0 {
            return Ok(0);
        }
        let j = self.times.partition_point(|x| *x <= t).saturating_sub(1);
        Ok(j.min(self.intervals() - 1))
    }

    /// Continuous trajectory value and time derivative at `t`.
    pub fn sample(&self, t: f64, kind: InterpolantKind) -> Result<SegmentSample> {
        let j = self.locate(t)?;
        if self.intervals() == 0 {
            let u = self.snapshots[0].clone();
            let z = SpectralField::zeros(u.lattice().clone());
            let visc = u.stokes_power(1.0).scaled(self.meta.nu);
            return Ok(SegmentSample {
                value: u,
                dudt: z,
                dudt_plus_viscous: visc,
            });
        }
        Ok(self.segment(j).sample(t, kind))
    }
}

/// One snapshot interval of a trajectory.
#[derive(Clone, Copy, Debug)]
pub struct Segment<'a> {
    pub t0: f64,
    pub t1: f64,
    pub u0: &'a SpectralField,
    pub u1: &'a SpectralField,
    pub nu: f64,
}

#[derive(Clone, Debug)]
pub struct SegmentSample {
    pub value: SpectralField,
    pub dudt: SpectralField,
    /// `du/dt + nu A u`, computed without cancellation for the integrating-factor kind.
    pub dudt_plus_viscous: SpectralField,
}

impl Segment<'_> {
    pub fn width(&self) -> f64 {
        self.t1 - self.t0
    }

    pub fn sample(&self, t: f64, kind: InterpolantKind) -> SegmentSample {
        let h = self.t1 - self.t0;
        let theta = (t - self.t0) / h;
        let lat = self.u0.lattice().clone();
        let n = lat.len();
        let (a, b) = (self.u0.coeffs(), self.u1.coeffs());
        let mut value = Vec::with_capacity(n);
        let mut dudt = Vec::with_capacity(n);
        let mut forced = Vec::with_capacity(n);
        for i in 0..n {
            let nl = self.nu * lat.lambda(i);
            let (w0, w1, g0, g1) = match kind {
                InterpolantKind::Linear => (1.0 - theta, theta, -1.0 / h, 1.0 / h),
                InterpolantKind::IntegratingFactor => {
                    let e0 = (-nl * (t - self.t0)).exp();
                    let e1 = (nl * (self.t1 - t)).exp();
                    (
                        (1.0 - theta) * e0,
                        theta * e1,
                        -e0 / h,
                        e1 / h,
                    )
                }
            };
            let mut v = [num_complex::Complex64::new(0.0, 0.0); 3];
            let mut d = v;
            let mut g = v;
            for j in 0..3 {
                v[j] = a[i][j] * w0 + b[i][j] * w1;
                match kind {
                    InterpolantKind::Linear => {
                        d[j] = a[i][j] * g0 + b[i][j] * g1;
                        g[j] = d[j] + v[j] * nl;
                    }
                    InterpolantKind::IntegratingFactor => {
                        g[j] = a[i][j] * g0 + b[i][j] * g1;
                        d[j] = g[j] - v[j] * nl;
                    }
                }
            }
            value.push(v);
            dudt.push(d);
            forced.push(g);
        }
        SegmentSample {
            value: SpectralField::from_parts_unchecked(lat.clone(), value),
            dudt: SpectralField::from_parts_unchecked(lat.clone(), dudt),
            dudt_plus_viscous: SpectralField::from_parts_unchecked(lat, forced),
        }
    }
}

/// Piecewise-linear interpolant and its slope, constant on each interval and
/// right-continuous at the nodes.
pub fn interpolant(traj: &Trajectory, t: f64) -> Result<(SpectralField, SpectralField)> {
    let s = traj.sample(t, InterpolantKind::Linear)?;
    Ok((s.value, s.dudt))
}
