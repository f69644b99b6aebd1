use std::f64::consts::PI;
use std::sync::Arc;

use crate::{Error, Result};

/// Truncated set of Fourier wavevectors `0 < max_i |k_i| <= K` on the box
/// `[0, L]^3`, stored in lexicographic `(kx, ky, kz)` order.
///
/// The zero mode is excluded, so every field on the lattice has zero mean.
/// The ordering has the property that the index of `-k` is `len - 1 - index(k)`.
#[derive(Debug)]
pub struct Lattice {
    box_len: f64,
    k_max: u32,
    wavevectors: Vec<[i32; 3]>,
    kappa: Vec<[f64; 3]>,
    lambda: Vec<f64>,
    shell: Vec<u32>,
}

impl Lattice {
    pub fn new(box_len: f64, k_max: u32) -> Result<Arc<Self>> {
        if !(box_len > 0.0) || !box_len.is_finite() {
            return Err(Error::InvalidLattice(format!("box length must be positive, got {box_len}")));
        }
        if k_max == 0 {
            return Err(Error::InvalidLattice("mode cutoff K must be at least 1".into()));
        }
        if k_max > 512 {
            return Err(Error::InvalidLattice(format!("mode cutoff K = {k_max} is unreasonably large")));
        }
        let k = k_max as i32;
        let n = (2 * k_max as usize + 1).pow(3) - 1;
        let scale = 2.0 * PI / box_len;
        let scale_sq = scale * scale;
        let mut wavevectors = Vec::with_capacity(n);
        let mut kappa = Vec::with_capacity(n);
        let mut lambda = Vec::with_capacity(n);
        let mut shell = Vec::with_capacity(n);
        for kx in -k..=k {
            for ky in -k..=k {
                for kz in -k..=k {
                    if kx == 0 && ky == 0 && kz == 0 {
                        continue;
                    }
                    let sq = (kx * kx + ky * ky + kz * kz) as u32;
                    wavevectors.push([kx, ky, kz]);
                    kappa.push([scale * kx as f64, scale * ky as f64, scale * kz as f64]);
                    lambda.push(scale_sq * sq as f64);
                    shell.push(sq);
                }
            }
        }
        debug_assert_eq!(wavevectors.len(), n);
        Ok(Arc::new(Self {
            box_len,
            k_max,
            wavevectors,
            kappa,
            lambda,
            shell,
        }))
    }

    pub fn box_len(&self) -> f64 {
        self.box_len
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn len(&self) -> usize {
        self.wavevectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavevectors.is_empty()
    }

    pub fn wavevectors(&self) -> &[[i32; 3]] {
        &self.wavevectors
    }

    pub fn wavevector(&self, idx: usize) -> [i32; 3] {
        self.wavevectors[idx]
    }

    /// Physical wavevector `(2 pi / L) k`.
    pub fn kappa(&self, idx: usize) -> [f64; 3] {
        self.kappa[idx]
    }

    /// Stokes eigenvalue `|kappa(k)|^2`.
    pub fn lambda(&self, idx: usize) -> f64 {
        self.lambda[idx]
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambda
    }

    /// Integer shell `|k|^2`.
    pub fn shell(&self, idx: usize) -> u32 {
        self.shell[idx]
    }

    /// `(2 pi / L)^2`, the eigenvalue of the unit shell.
    pub fn eigenvalue_scale(&self) -> f64 {
        let s = 2.0 * PI / self.box_len;
        s * s
    }

    pub fn min_lambda(&self) -> f64 {
        self.eigenvalue_scale()
    }

    pub fn max_lambda(&self) -> f64 {
        self.eigenvalue_scale() * 3.0 * (self.k_max as f64).powi(2)
    }

    /// Largest eigenvalue threshold whose shells all fit inside the cube.
    pub fn inscribed_cutoff(&self) -> f64 {
        self.eigenvalue_scale() * (self.k_max as f64).powi(2)
    }

    /// Sorted distinct eigenvalues present on the lattice.
    pub fn eigenvalue_shells(&self) -> Vec<f64> {
        let mut shells: Vec<u32> = self.shell.clone();
        shells.sort_unstable();
        shells.dedup();
        let scale = self.eigenvalue_scale();
        shells.into_iter().map(|s| scale * s as f64).collect()
    }

    pub fn index_of(&self, k: [i32; 3]) -> Option<usize> {
        let kk = self.k_max as i32;
        if k.iter().any(|c| c.abs() > kk) || k == [0, 0, 0] {
            return None;
        }
        let n = (2 * kk + 1) as usize;
        let lin = (((k[0] + kk) as usize * n) + (k[1] + kk) as usize) * n + (k[2] + kk) as usize;
        let center = (n * n * n - 1) / 2;
        Some(if lin < center { lin } else { lin - 1 })
    }

    /// Index of `-k` given the index of `k`.
    #[inline]
    pub fn neg_index(&self, idx: usize) -> usize {
        self.len() - 1 - idx
    }

    /// Two lattices describe the same discretization.
    pub fn same_as(&self, other: &Lattice) -> bool {
        self.k_max == other.k_max && self.box_len.to_bits() == other.box_len.to_bits()
    }

    pub fn same_box(&self, other: &Lattice) -> bool {
        self.box_len.to_bits() == other.box_len.to_bits()
    }
}

pub fn make_lattice(box_len: f64, k_max: u32) -> Result<Arc<Lattice>> {
    Lattice::new(box_len, k_max)
}
