use std::sync::Arc;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::spectral::{leray_project, Lattice, RawModes, SpectralField};
use crate::{Error, Result};

/// Complex amplitude of one forced wavevector; its conjugate at `-k` is implied.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForcingMode {
    pub k: [i32; 3],
    /// `[re, im]` for each of the three components.
    pub amplitude: [[f64; 2]; 3],
}

impl ForcingMode {
    fn mode(&self) -> [Complex64; 3] {
        self.amplitude.map(|[re, im]| Complex64::new(re, im))
    }
}

/// Time-dependent body force. Every evaluation is Leray-projected, so it is
/// always a valid divergence-free, zero-mean, real field.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum ForcingSpec {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "steady")]
    Steady { modes: Vec<ForcingMode> },
    /// `F cos(omega t + phase)`.
    #[serde(rename = "periodic")]
    Periodic {
        modes: Vec<ForcingMode>,
        omega: f64,
        phase: f64,
    },
    /// Piecewise-linear in time between tabulated fields, constant outside.
    #[serde(rename = "tabulated")]
    Tabulated {
        times: Vec<f64>,
        #[serde(serialize_with = "count_only")]
        fields: Vec<SpectralField>,
    },
}

fn count_only<S: Serializer>(fields: &[SpectralField], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(fields.len() as u64)
}

impl ForcingSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ForcingSpec::Zero => Ok(()),
            ForcingSpec::Steady { modes } | ForcingSpec::Periodic { modes, .. } => {
                for m in modes {
                    if m.k == [0, 0, 0] {
                        return Err(Error::Config("forcing on the zero mode is not allowed".into()));
                    }
                    if m.amplitude.iter().flatten().any(|x| !x.is_finite()) {
                        return Err(Error::Config(format!("non-finite forcing amplitude at {:?}", m.k)));
                    }
                }
                if let ForcingSpec::Periodic { omega, phase, .. } = self {
                    if !omega.is_finite() || !phase.is_finite() {
                        return Err(Error::Config("forcing.omega and forcing.phase must be finite".into()));
                    }
                }
                Ok(())
            }
            ForcingSpec::Tabulated { times, fields } => {
                if times.is_empty() || times.len() != fields.len() {
                    return Err(Error::Config("tabulated forcing needs one field per time".into()));
                }
                if times.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::Config("tabulated forcing times must increase strictly".into()));
                }
                let lat = fields[0].lattice();
                if fields.iter().any(|f| !f.lattice().same_as(lat)) {
                    return Err(Error::Config("tabulated forcing fields must share one lattice".into()));
                }
                Ok(())
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ForcingSpec::Zero => true,
            ForcingSpec::Steady { modes } | ForcingSpec::Periodic { modes, .. } => modes.is_empty(),
            ForcingSpec::Tabulated { fields, .. } => fields.iter().all(|f| f.is_zero()),
        }
    }

    /// Resolves the spatial structure on `lattice`.
    ///
    /// With `strict`, any forced mode outside the lattice is a
    /// [`Error::LatticeMismatch`]; otherwise such modes are dropped (correct
    /// whenever the result is Galerkin-projected anyway).
    pub fn bind(&self, lattice: &Arc<Lattice>, strict: bool) -> Result<BoundForcing> {
        let shape = |modes: &[ForcingMode]| -> Result<SpectralField> {
            let mut raw = RawModes::zeros(lattice.clone());
            for m in modes {
                let Some(idx) = lattice.index_of(m.k) else {
                    if strict {
                        return Err(Error::LatticeMismatch(format!(
                            "forcing mode {:?} outside lattice K = {}",
                            m.k,
                            lattice.k_max()
                        )));
                    }
                    continue;
                };
                let neg = lattice.neg_index(idx);
                let c = m.mode();
                for j in 0..3 {
                    raw.coeffs[idx][j] += c[j];
                    raw.coeffs[neg][j] += c[j].conj();
                }
            }
            leray_project(raw)
        };
        let kind = match self {
            ForcingSpec::Zero => BoundKind::Zero,
            ForcingSpec::Steady { modes } => BoundKind::Steady(shape(modes)?),
            ForcingSpec::Periodic { modes, omega, phase } => BoundKind::Periodic {
                shape: shape(modes)?,
                omega: *omega,
                phase: *phase,
            },
            ForcingSpec::Tabulated { times, fields } => {
                self.validate()?;
                let fields = fields
                    .iter()
                    .map(|f| if strict { f.embed(lattice) } else { f.transfer(lattice) })
                    .collect::<Result<Vec<_>>>()?;
                BoundKind::Tabulated {
                    times: times.clone(),
                    fields,
                }
            }
        };
        Ok(BoundForcing {
            lattice: lattice.clone(),
            kind,
        })
    }
}

#[derive(Clone, Debug)]
enum BoundKind {
    Zero,
    Steady(SpectralField),
    Periodic { shape: SpectralField, omega: f64, phase: f64 },
    Tabulated { times: Vec<f64>, fields: Vec<SpectralField> },
}

/// Forcing resolved on a specific lattice.
#[derive(Clone, Debug)]
pub struct BoundForcing {
    lattice: Arc<Lattice>,
    kind: BoundKind,
}

impl BoundForcing {
    pub fn zero(lattice: &Arc<Lattice>) -> Self {
        Self {
            lattice: lattice.clone(),
            kind: BoundKind::Zero,
        }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            BoundKind::Zero => true,
            BoundKind::Steady(f) => f.is_zero(),
            BoundKind::Periodic { shape, .. } => shape.is_zero(),
            BoundKind::Tabulated { fields, .. } => fields.iter().all(|f| f.is_zero()),
        }
    }

    pub fn at(&self, t: f64) -> SpectralField {
        match &self.kind {
            BoundKind::Zero => SpectralField::zeros(self.lattice.clone()),
            BoundKind::Steady(f) => f.clone(),
            BoundKind::Periodic { shape, omega, phase } => shape.scaled((omega * t + phase).cos()),
            BoundKind::Tabulated { times, fields } => {
                let (j, theta) = locate(times, t);
                if theta == 0.0 {
                    fields[j].clone()
                } else {
                    SpectralField::linear_combination(1.0 - theta, &fields[j], theta, &fields[j + 1])
                        .expect("tabulated fields share a lattice")
                }
            }
        }
    }

    /// `df/dt`; one-sided (right) slope at tabulation nodes.
    pub fn derivative_at(&self, t: f64) -> SpectralField {
        match &self.kind {
            BoundKind::Zero | BoundKind::Steady(_) => SpectralField::zeros(self.lattice.clone()),
            BoundKind::Periodic { shape, omega, phase } => shape.scaled(-omega * (omega * t + phase).sin()),
            BoundKind::Tabulated { times, fields } => {
                if times.len() < 2 || t < times[0] || t >= *times.last().unwrap() {
                    return SpectralField::zeros(self.lattice.clone());
                }
                let (j, _) = locate(times, t);
                let h = times[j + 1] - times[j];
                SpectralField::linear_combination(1.0 / h, &fields[j + 1], -1.0 / h, &fields[j])
                    .expect("tabulated fields share a lattice")
            }
        }
    }
}

/// Interval index and local coordinate; clamps outside the table.
fn locate(times: &[f64], t: f64) -> (usize, f64) {
    let n = times.len();
    if n == 1 || t <= times[0] {
        return (0, 0.0);
    }
    if t >= times[n - 1] {
        return (n - 1, 0.0);
    }
    let j = times.partition_point(|x| *x <= t) - 1;
    let theta = (t - times[j]) / (times[j + 1] - times[j]);
    (j, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn mode(k: [i32; 3], a: f64) -> ForcingMode {
        ForcingMode {
            k,
            amplitude: [[0.0, 0.0], [a, 0.0], [0.0, 0.0]],
        }
    }

    #[test]
    fn steady_and_periodic() {
        let lat = Lattice::new(2.0 * PI, 2).unwrap();
        let f = ForcingSpec::Steady {
            modes: vec![mode([1, 0, 0], 0.5)],
        }
        .bind(&lat, true)
        .unwrap();
        let v = f.at(3.0);
        assert!(v.divergence_residual() < 1e-15);
        assert!(v.is_exactly_real());
        assert!(f.derivative_at(1.0).is_zero());

        let p = ForcingSpec::Periodic {
            modes: vec![mode([1, 0, 0], 0.5)],
            omega: 2.0,
            phase: 0.0,
        }
        .bind(&lat, true)
        .unwrap();
        let a = p.at(0.0).sobolev_norm(0.0);
        let b = p.at(PI / 4.0).sobolev_norm(0.0);
        assert!(b < 1e-15 * a + 1e-15);
    }

    #[test]
    fn strict_binding_rejects_outside_modes() {
        let lat = Lattice::new(2.0 * PI, 1).unwrap();
        let spec = ForcingSpec::Steady {
            modes: vec![mode([2, 0, 0], 1.0)],
        };
        assert!(matches!(spec.bind(&lat, true), Err(Error::LatticeMismatch(_))));
        assert!(spec.bind(&lat, false).unwrap().at(0.0).is_zero());
    }

    #[test]
    fn tabulated_interpolation() {
        let lat = Lattice::new(2.0 * PI, 1).unwrap();
        let shape = ForcingSpec::Steady {
            modes: vec![mode([1, 0, 0], 1.0)],
        }
        .bind(&lat, true)
        .unwrap()
        .at(0.0);
        let spec = ForcingSpec::Tabulated {
            times: vec![0.0, 1.0],
            fields: vec![SpectralField::zeros(lat.clone()), shape.clone()],
        };
        let f = spec.bind(&lat, true).unwrap();
        let mid = f.at(0.5);
        assert!((mid.sobolev_norm(0.0) - 0.5 * shape.sobolev_norm(0.0)).abs() < 1e-14);
        assert_eq!(f.at(2.0).coeffs(), shape.coeffs());
        assert!((f.derivative_at(0.25).sobolev_norm(0.0) - shape.sobolev_norm(0.0)).abs() < 1e-14);
    }
}
