//! Periodic divergence-free vector fields as truncated Fourier series.

mod field;
mod grid;
mod lattice;

pub use field::{
    galerkin_split, leray_project, sobolev_norm, stokes_power_apply, GalerkinCutoff, Mode, RawModes, SpectralField,
    DIVERGENCE_TOL,
};
pub(crate) use field::ZERO_MODE;
pub use grid::{fft_friendly_size, from_physical, to_physical, Grid3, PhysicalField};
pub(crate) use grid::wrap;
pub use lattice::{make_lattice, Lattice};

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

/// Random real divergence-free field with independent uniform amplitudes on
/// every mode with `|k|^2 <= max_shell`, before projection.
pub fn random_solenoidal<R: Rng + ?Sized>(lattice: &Arc<Lattice>, max_shell: u32, rng: &mut R) -> SpectralField {
    let mut raw = RawModes::zeros(lattice.clone());
    let half = lattice.len() / 2;
    for i in 0..half {
        if lattice.shell(i) > max_shell {
            continue;
        }
        let mut c = [Complex64::new(0.0, 0.0); 3];
        for z in c.iter_mut() {
            *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let neg = lattice.neg_index(i);
        raw.coeffs[i] = c;
        raw.coeffs[neg] = [c[0].conj(), c[1].conj(), c[2].conj()];
    }
    leray_project(raw).expect("constructed symmetric")
}
