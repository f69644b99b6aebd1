use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::{Mode, SpectralField};
use super::lattice::Lattice;
use crate::{Error, Result};

/// Smallest `n >= min` whose only prime factors are 2, 3 and 5.
pub fn fft_friendly_size(min: usize) -> usize {
    let mut n = min.max(1);
    loop {
        let mut r = n;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return n;
        }
        n += 1;
    }
}

#[inline]
pub(crate) fn wrap(k: i32, m: usize) -> usize {
    k.rem_euclid(m as i32) as usize
}

/// Unnormalized 3D complex FFT on an `M^3` row-major grid (`z` fastest).
pub struct Grid3 {
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    lines: Vec<Complex64>,
}

impl std::fmt::Debug for Grid3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid3").field("m", &self.m).finish()
    }
}

impl Grid3 {
    pub fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            m,
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            lines: vec![Complex64::new(0.0, 0.0); m * m],
        }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.m * self.m * self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// `X_k = sum_n x_n exp(-2 pi i k.n / M)`.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        let plan = self.forward.clone();
        self.transform(&*plan, data);
    }

    /// `x_n = sum_k X_k exp(+2 pi i k.n / M)`.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        let plan = self.inverse.clone();
        self.transform(&*plan, data);
    }

    fn transform(&mut self, plan: &dyn Fft<f64>, data: &mut [Complex64]) {
        let m = self.m;
        assert_eq!(data.len(), m * m * m);
        // z: contiguous rows
        plan.process_with_scratch(data, &mut self.scratch);
        // y: per x-plane, transpose (y, z) -> (z, y)
        for x in 0..m {
            let plane = &mut data[x * m * m..(x + 1) * m * m];
            for y in 0..m {
                for z in 0..m {
                    self.lines[z * m + y] = plane[y * m + z];
                }
            }
            plan.process_with_scratch(&mut self.lines, &mut self.scratch);
            for y in 0..m {
                for z in 0..m {
                    plane[y * m + z] = self.lines[z * m + y];
                }
            }
        }
        // x: per y, gather (x, z) -> (z, x)
        for y in 0..m {
            for x in 0..m {
                for z in 0..m {
                    self.lines[z * m + x] = data[(x * m + y) * m + z];
                }
            }
            plan.process_with_scratch(&mut self.lines, &mut self.scratch);
            for x in 0..m {
                for z in 0..m {
                    data[(x * m + y) * m + z] = self.lines[z * m + x];
                }
            }
        }
    }
}

/// Real velocity samples on a uniform `M^3` grid over `[0, L]^3`;
/// `components[j][(ix * M + iy) * M + iz]` is `u_j(ix L/M, iy L/M, iz L/M)`.
#[derive(Clone, Debug)]
pub struct PhysicalField {
    pub m: usize,
    pub box_len: f64,
    pub components: [Vec<f64>; 3],
}

impl PhysicalField {
    /// `sum |u(x)|^2 (L/M)^3`, the grid quadrature of `int |u|^2`.
    pub fn quadrature_energy(&self) -> f64 {
        let h = self.box_len / self.m as f64;
        let s: f64 = self.components.iter().flat_map(|c| c.iter()).map(|v| v * v).sum();
        s * h * h * h
    }
}

/// Samples `u(x) = sum_k coeff(k) exp(i kappa . x)` on an `M^3` grid.
pub fn to_physical(u: &SpectralField, m: usize) -> Result<PhysicalField> {
    let lat = u.lattice();
    let required = 2 * lat.k_max() as usize + 1;
    if m < required {
        return Err(Error::GridTooSmall { required, got: m });
    }
    let mut grid = Grid3::new(m);
    let mut buf = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut components: [Vec<f64>; 3] = Default::default();
    let scale = u.max_abs().max(f64::MIN_POSITIVE);
    for (j, comp) in components.iter_mut().enumerate() {
        buf.fill(Complex64::new(0.0, 0.0));
        for (k, c) in lat.wavevectors().iter().zip(u.coeffs()) {
            buf[(wrap(k[0], m) * m + wrap(k[1], m)) * m + wrap(k[2], m)] = c[j];
        }
        grid.inverse(&mut buf);
        debug_assert!(
            buf.iter().map(|z| z.im.abs()).fold(0.0, f64::max) <= 1e-12 * scale * lat.len() as f64,
            "imaginary residue in physical samples"
        );
        *comp = buf.iter().map(|z| z.re).collect();
    }
    Ok(PhysicalField {
        m,
        box_len: lat.box_len(),
        components,
    })
}

/// Fourier coefficients of grid samples on `lattice`, made conjugate-symmetric
/// and Leray-projected. Exact inverse of [`to_physical`] for band-limited
/// divergence-free fields.
pub fn from_physical(samples: &PhysicalField, lattice: &Arc<Lattice>) -> Result<SpectralField> {
    let m = samples.m;
    let required = 2 * lattice.k_max() as usize + 1;
    if m < required {
        return Err(Error::GridTooSmall { required, got: m });
    }
    if samples.box_len.to_bits() != lattice.box_len().to_bits() {
        return Err(Error::LatticeMismatch("sample box length differs from lattice".into()));
    }
    let mut grid = Grid3::new(m);
    let norm = 1.0 / (m * m * m) as f64;
    let mut coeffs: Vec<Mode> = vec![[Complex64::new(0.0, 0.0); 3]; lattice.len()];
    let mut buf = vec![Complex64::new(0.0, 0.0); grid.len()];
    for j in 0..3 {
        for (b, v) in buf.iter_mut().zip(&samples.components[j]) {
            *b = Complex64::new(*v, 0.0);
        }
        grid.forward(&mut buf);
        for (c, k) in coeffs.iter_mut().zip(lattice.wavevectors()) {
            c[j] = buf[(wrap(k[0], m) * m + wrap(k[1], m)) * m + wrap(k[2], m)] * norm;
        }
    }
    let mut field = SpectralField::from_parts_unchecked(lattice.clone(), coeffs);
    field.enforce_reality();
    field.leray_in_place();
    Ok(field)
}
