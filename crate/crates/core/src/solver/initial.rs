use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::InitialSpec;
use crate::io::snapshot::read_snapshot;
use crate::spectral::{leray_project, random_solenoidal, Lattice, RawModes, SpectralField};
use crate::{Error, Result};

/// Taylor-Green vortex `U0 (sin x cos y cos z, -cos x sin y cos z, 0)` with
/// `x` measured in units of `L / 2 pi`. Exactly divergence-free on the lattice.
pub fn taylor_green(lattice: &Arc<Lattice>, amplitude: f64) -> SpectralField {
    let mut raw = RawModes::zeros(lattice.clone());
    let a = amplitude / 8.0;
    for sx in [-1, 1] {
        for sy in [-1, 1] {
            for sz in [-1, 1] {
                let idx = lattice.index_of([sx, sy, sz]).expect("K >= 1");
                // sin x = (e^{ix} - e^{-ix}) / 2i contributes -i sx / 2
                raw.coeffs[idx] = [
                    Complex64::new(0.0, -a * sx as f64),
                    Complex64::new(0.0, a * sy as f64),
                    Complex64::new(0.0, 0.0),
                ];
            }
        }
    }
    leray_project(raw).expect("Taylor-Green coefficients are conjugate-symmetric")
}

/// The initial field on the smallest lattice that represents it exactly.
pub fn initial_natural(spec: &InitialSpec, box_len: f64) -> Result<SpectralField> {
    match spec {
        InitialSpec::TaylorGreen { amplitude } => Ok(taylor_green(&Lattice::new(box_len, 1)?, *amplitude)),
        InitialSpec::RandomLowMode { seed, shell, amplitude } => {
            if *shell == 0 {
                return Err(Error::Config("init.shell must be at least 1".into()));
            }
            let k = (*shell as f64).sqrt().ceil() as u32;
            let lat = Lattice::new(box_len, k)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let u = random_solenoidal(&lat, *shell, &mut rng);
            let n = u.sobolev_norm(0.0);
            Ok(if n > 0.0 { u.scaled(amplitude / n) } else { u })
        }
        InitialSpec::Snapshot { path } => {
            let (field, _) = read_snapshot(path)?;
            if field.lattice().box_len().to_bits() != box_len.to_bits() {
                return Err(Error::LatticeMismatch(format!(
                    "snapshot box length {} differs from configured {box_len}",
                    field.lattice().box_len()
                )));
            }
            Ok(field)
        }
        InitialSpec::Provided { field } => {
            if field.lattice().box_len().to_bits() != box_len.to_bits() {
                return Err(Error::LatticeMismatch("provided initial field has another box length".into()));
            }
            Ok((**field).clone())
        }
    }
}

/// Builds the initial field on `lattice`; fails if the data does not fit.
pub fn make_initial(spec: &InitialSpec, lattice: &Arc<Lattice>) -> Result<SpectralField> {
    initial_natural(spec, lattice.box_len())?.embed(lattice)
}
