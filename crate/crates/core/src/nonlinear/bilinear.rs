use std::sync::Arc;

use num_complex::Complex64;

use crate::spectral::{fft_friendly_size, wrap, Grid3, Lattice, SpectralField};
use crate::{Error, Result};

const CZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Scratch space for the pseudospectral product on one lattice.
///
/// The quadratic product of two fields supported on `|k_i| <= K` has modes up
/// to `2K`; sampling on `M >= 2K + E + 1` points per axis keeps every output
/// mode with `|k_i| <= E` free of aliases.
pub struct NonlinearWorkspace {
    lattice: Arc<Lattice>,
    out_lattice: Arc<Lattice>,
    grid: Grid3,
    packed: Vec<Vec<Complex64>>,
    out: [Vec<Complex64>; 2],
}

impl std::fmt::Debug for NonlinearWorkspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NonlinearWorkspace")
            .field("k_max", &self.lattice.k_max())
            .field("extended_k", &self.out_lattice.k_max())
            .field("m", &self.grid.size())
            .finish()
    }
}

pub fn min_grid_size(k_max: u32, extended_k: u32) -> usize {
    (2 * k_max + extended_k + 1) as usize
}

impl NonlinearWorkspace {
    /// Workspace whose output keeps all modes up to `extended_k`.
    pub fn new(lattice: Arc<Lattice>, extended_k: u32) -> Result<Self> {
        let m = fft_friendly_size(min_grid_size(lattice.k_max(), extended_k));
        Self::with_grid(lattice, extended_k, m)
    }

    /// Output on the full product band `2K`.
    pub fn full_band(lattice: Arc<Lattice>) -> Result<Self> {
        let e = 2 * lattice.k_max();
        Self::new(lattice, e)
    }

    /// Output on the state band `K` only (enough for the Galerkin right-hand side).
    pub fn state_band(lattice: Arc<Lattice>) -> Result<Self> {
        let e = lattice.k_max();
        Self::new(lattice, e)
    }

    pub fn with_grid(lattice: Arc<Lattice>, extended_k: u32, m: usize) -> Result<Self> {
        let k = lattice.k_max();
        if extended_k == 0 || extended_k > 2 * k {
            return Err(Error::InvalidArgument(format!(
                "extended band {extended_k} must lie in [1, {}]",
                2 * k
            )));
        }
        let required = min_grid_size(k, extended_k);
        if m < required {
            return Err(Error::GridTooSmall { required, got: m });
        }
        let out_lattice = if extended_k == k {
            lattice.clone()
        } else {
            Lattice::new(lattice.box_len(), extended_k)?
        };
        let n = m * m * m;
        Ok(Self {
            lattice,
            out_lattice,
            grid: Grid3::new(m),
            packed: (0..6).map(|_| vec![CZERO; n]).collect(),
            out: [vec![CZERO; n], vec![CZERO; n]],
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn out_lattice(&self) -> &Arc<Lattice> {
        &self.out_lattice
    }

    pub fn extended_k(&self) -> u32 {
        self.out_lattice.k_max()
    }

    pub fn grid_size(&self) -> usize {
        self.grid.size()
    }

    /// `B(u, v) = Pi[(u . grad) v]`, exact on every retained mode.
    pub fn bilinear(&mut self, u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
        for (name, f) in [("u", u), ("v", v)] {
            if !f.lattice().same_as(&self.lattice) {
                return Err(Error::LatticeMismatch(format!(
                    "{name} is on K = {}, workspace on K = {}",
                    f.lattice().k_max(),
                    self.lattice.k_max()
                )));
            }
        }
        let m = self.grid.size();
        let lat = self.lattice.clone();
        for b in self.packed.iter_mut() {
            b.fill(CZERO);
        }
        // Real fields in order: u_0, u_1, u_2, then d_j v_i at 3 + 3i + j.
        // Field f is packed into buffer f / 2 (real part if even, imaginary if odd).
        let iu = Complex64::new(0.0, 1.0);
        for (idx, (k, (cu, cv))) in lat
            .wavevectors()
            .iter()
            .zip(u.coeffs().iter().zip(v.coeffs()))
            .enumerate()
        {
            let kap = lat.kappa(idx);
            let pos = (wrap(k[0], m) * m + wrap(k[1], m)) * m + wrap(k[2], m);
            let mut spec = [CZERO; 12];
            spec[..3].copy_from_slice(cu);
            for i in 0..3 {
                for j in 0..3 {
                    spec[3 + 3 * i + j] = iu * kap[j] * cv[i];
                }
            }
            for p in 0..6 {
                self.packed[p][pos] = spec[2 * p] + iu * spec[2 * p + 1];
            }
        }
        for p in 0..6 {
            let buf = &mut self.packed[p];
            self.grid.inverse(buf);
        }
        let n = m * m * m;
        let val = |packed: &[Vec<Complex64>], f: usize, x: usize| -> f64 {
            let z = packed[f / 2][x];
            if f % 2 == 0 {
                z.re
            } else {
                z.im
            }
        };
        for x in 0..n {
            let uu = [
                val(&self.packed, 0, x),
                val(&self.packed, 1, x),
                val(&self.packed, 2, x),
            ];
            let mut w = [0.0; 3];
            for (i, wi) in w.iter_mut().enumerate() {
                *wi = uu[0] * val(&self.packed, 3 + 3 * i, x)
                    + uu[1] * val(&self.packed, 4 + 3 * i, x)
                    + uu[2] * val(&self.packed, 5 + 3 * i, x);
            }
            self.out[0][x] = Complex64::new(w[0], w[1]);
            self.out[1][x] = Complex64::new(w[2], 0.0);
        }
        {
            let [a, b] = &mut self.out;
            self.grid.forward(a);
            self.grid.forward(b);
        }
        let norm = 1.0 / n as f64;
        let out_lat = self.out_lattice.clone();
        let mut coeffs = Vec::with_capacity(out_lat.len());
        for k in out_lat.wavevectors() {
            let pos = (wrap(k[0], m) * m + wrap(k[1], m)) * m + wrap(k[2], m);
            let neg = (wrap(-k[0], m) * m + wrap(-k[1], m)) * m + wrap(-k[2], m);
            let z = self.out[0][pos];
            let zn = self.out[0][neg].conj();
            let w0 = (z + zn) * 0.5;
            let w1 = (z - zn) * Complex64::new(0.0, -0.5);
            let w2 = self.out[1][pos];
            coeffs.push([w0 * norm, w1 * norm, w2 * norm]);
        }
        let mut field = SpectralField::from_parts_unchecked(out_lat, coeffs);
        field.enforce_reality();
        field.leray_in_place();
        debug_assert!(field.divergence_residual() <= 1e-12, "B output not solenoidal");
        debug_assert!(field.is_exactly_real(), "B output not conjugate-symmetric");
        Ok(field)
    }
}

pub fn bilinear_b(u: &SpectralField, v: &SpectralField, ws: &mut NonlinearWorkspace) -> Result<SpectralField> {
    ws.bilinear(u, v)
}
