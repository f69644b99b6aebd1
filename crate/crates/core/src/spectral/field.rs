use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::Lattice;
use crate::{Error, Result};

/// Complex amplitude of the three velocity components at one wavevector.
pub type Mode = [Complex64; 3];

pub(crate) const ZERO_MODE: Mode = [Complex64::new(0.0, 0.0); 3];

/// Relative tolerance for the incompressibility check on constructed fields.
pub const DIVERGENCE_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn mode_norm_sqr(c: &Mode) -> f64 {
    c[0].norm_sqr() + c[1].norm_sqr() + c[2].norm_sqr()
}

#[inline]
fn mode_conj(c: &Mode) -> Mode {
    [c[0].conj(), c[1].conj(), c[2].conj()]
}

/// `(I - kappa kappa^T / |kappa|^2) c`.
///
/// Operation order is symmetric under `kappa -> -kappa, c -> conj(c)`, so a
/// conjugate-symmetric input produces a bitwise conjugate-symmetric output.
#[inline]
pub(crate) fn project_mode(kappa: &[f64; 3], c: &Mode) -> Mode {
    let k2 = kappa[0] * kappa[0] + kappa[1] * kappa[1] + kappa[2] * kappa[2];
    let dot = c[0] * kappa[0] + c[1] * kappa[1] + c[2] * kappa[2];
    let s = dot / k2;
    [c[0] - s * kappa[0], c[1] - s * kappa[1], c[2] - s * kappa[2]]
}

#[inline]
pub(crate) fn lambda_pow(lambda: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p.fract() == 0.0 && p.abs() <= 64.0 {
        lambda.powi(p as i32)
    } else {
        lambda.powf(p)
    }
}

/// Per-mode complex vectors on a lattice with no invariants enforced yet.
#[derive(Clone, Debug)]
pub struct RawModes {
    pub lattice: Arc<Lattice>,
    pub coeffs: Vec<Mode>,
}

impl RawModes {
    pub fn zeros(lattice: Arc<Lattice>) -> Self {
        let coeffs = vec![ZERO_MODE; lattice.len()];
        Self { lattice, coeffs }
    }

    /// Sets the amplitude at `k` and its conjugate at `-k`.
    pub fn set_pair(&mut self, k: [i32; 3], c: Mode) -> Result<()> {
        let idx = self
            .lattice
            .index_of(k)
            .ok_or_else(|| Error::LatticeMismatch(format!("wavevector {k:?} not on lattice K = {}", self.lattice.k_max())))?;
        let neg = self.lattice.neg_index(idx);
        self.coeffs[idx] = c;
        self.coeffs[neg] = mode_conj(&c);
        Ok(())
    }
}

/// Divergence-free, zero-mean, real vector field represented by its Fourier
/// coefficients `u(x) = sum_k coeff(k) exp(i kappa(k) . x)`.
#[derive(Clone, Debug)]
pub struct SpectralField {
    lattice: Arc<Lattice>,
    coeffs: Vec<Mode>,
}

/// Eigenvalue threshold defining the Galerkin projections `P_n` / `Q_n`.
///
/// A mode is in the low span iff `lambda(k) <= lambda_cut`, so degenerate
/// eigenvalue shells are always kept or dropped as a whole.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GalerkinCutoff {
    pub lambda_cut: f64,
}

impl GalerkinCutoff {
    pub fn new(lambda_cut: f64) -> Result<Self> {
        if !(lambda_cut > 0.0) {
            return Err(Error::InvalidArgument(format!("lambda_cut must be positive, got {lambda_cut}")));
        }
        Ok(Self { lambda_cut })
    }

    /// The largest cutoff whose shells all fit in the lattice cube.
    pub fn inscribed(lattice: &Lattice) -> Self {
        Self {
            lambda_cut: lattice.inscribed_cutoff(),
        }
    }

    #[inline]
    pub fn keeps(&self, lambda: f64) -> bool {
        lambda <= self.lambda_cut
    }
}

impl SpectralField {
    pub fn zeros(lattice: Arc<Lattice>) -> Self {
        let coeffs = vec![ZERO_MODE; lattice.len()];
        Self { lattice, coeffs }
    }

    pub(crate) fn from_parts_unchecked(lattice: Arc<Lattice>, coeffs: Vec<Mode>) -> Self {
        debug_assert_eq!(lattice.len(), coeffs.len());
        Self { lattice, coeffs }
    }

    /// Wraps coefficients after checking reality and incompressibility to a
    /// relative tolerance `tol`.
    pub fn from_coefficients(lattice: Arc<Lattice>, coeffs: Vec<Mode>, tol: f64) -> Result<Self> {
        if coeffs.len() != lattice.len() {
            return Err(Error::LatticeMismatch(format!(
                "expected {} coefficients, got {}",
                lattice.len(),
                coeffs.len()
            )));
        }
        let field = Self { lattice, coeffs };
        field.validate(tol)?;
        Ok(field)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.coeffs.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvariantViolation("non-finite coefficient".into()));
        }
        let reality = self.reality_residual();
        if reality > tol {
            return Err(Error::InvariantViolation(format!("reality residual {reality:e} exceeds {tol:e}")));
        }
        let div = self.divergence_residual();
        if div > tol {
            return Err(Error::InvariantViolation(format!("divergence residual {div:e} exceeds {tol:e}")));
        }
        Ok(())
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Mode] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Mode] {
        &mut self.coeffs
    }

    pub fn coeff(&self, k: [i32; 3]) -> Option<Mode> {
        self.lattice.index_of(k).map(|i| self.coeffs[i])
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| mode_norm_sqr(c).sqrt()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO_MODE)
    }

    /// `max_k |kappa . coeff(k)| / max_k |kappa| |coeff(k)|` (0 for the zero field).
    pub fn divergence_residual(&self) -> f64 {
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let kap = self.lattice.kappa(i);
            let dot = c[0] * kap[0] + c[1] * kap[1] + c[2] * kap[2];
            num = num.max(dot.norm());
            den = den.max(self.lattice.lambda(i).sqrt() * mode_norm_sqr(c).sqrt());
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// `max_k |coeff(-k) - conj(coeff(k))| / max |coeff|`.
    pub fn reality_residual(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let n = &self.coeffs[self.lattice.neg_index(i)];
            let d = [n[0] - c[0].conj(), n[1] - c[1].conj(), n[2] - c[2].conj()];
            worst = worst.max(mode_norm_sqr(&d).sqrt());
        }
        worst / scale
    }

    /// Conjugate symmetry holds exactly (signed zeros compare equal).
    pub fn is_exactly_real(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| {
            let n = &self.coeffs[self.lattice.neg_index(i)];
            (0..3).all(|j| n[j] == c[j].conj())
        })
    }

    /// Replaces each pair `(c(k), c(-k))` by its conjugate-symmetric average.
    pub(crate) fn enforce_reality(&mut self) {
        let n = self.coeffs.len();
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let a = self.coeffs[i];
            let b = self.coeffs[j];
            let avg = [
                (a[0] + b[0].conj()) * 0.5,
                (a[1] + b[1].conj()) * 0.5,
                (a[2] + b[2].conj()) * 0.5,
            ];
            self.coeffs[i] = avg;
            self.coeffs[j] = mode_conj(&avg);
        }
    }

    pub(crate) fn leray_in_place(&mut self) {
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            *c = project_mode(&self.lattice.kappa(i), c);
        }
    }

    fn check_same(&self, other: &SpectralField) -> Result<()> {
        if Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice.same_as(&other.lattice) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch(format!(
                "fields on (L = {}, K = {}) and (L = {}, K = {})",
                self.lattice.box_len(),
                self.lattice.k_max(),
                other.lattice.box_len(),
                other.lattice.k_max()
            )))
        }
    }

    /// `self += a * x` on a shared lattice.
    pub fn axpy(&mut self, a: f64, x: &SpectralField) -> Result<()> {
        self.check_same(x)?;
        for (c, d) in self.coeffs.iter_mut().zip(&x.coeffs) {
            for j in 0..3 {
                c[j] += d[j] * a;
            }
        }
        Ok(())
    }

    pub fn scaled(&self, a: f64) -> SpectralField {
        let coeffs = self.coeffs.iter().map(|c| [c[0] * a, c[1] * a, c[2] * a]).collect();
        Self::from_parts_unchecked(self.lattice.clone(), coeffs)
    }

    pub fn linear_combination(a: f64, x: &SpectralField, b: f64, y: &SpectralField) -> Result<SpectralField> {
        x.check_same(y)?;
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(c, d)| [c[0] * a + d[0] * b, c[1] * a + d[1] * b, c[2] * a + d[2] * b])
            .collect();
        Ok(Self::from_parts_unchecked(x.lattice.clone(), coeffs))
    }

    /// Multiplies every mode by a real per-mode factor.
    pub fn map_modes(&self, mut factor: impl FnMut(usize) -> f64) -> SpectralField {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let f = factor(i);
                [c[0] * f, c[1] * f, c[2] * f]
            })
            .collect();
        Self::from_parts_unchecked(self.lattice.clone(), coeffs)
    }

    /// Copies the field onto another lattice over the same box, dropping modes
    /// outside the target cube and zero-filling new ones.
    pub fn transfer(&self, target: &Arc<Lattice>) -> Result<SpectralField> {
        if !self.lattice.same_box(target) {
            return Err(Error::LatticeMismatch(format!(
                "box length {} vs {}",
                self.lattice.box_len(),
                target.box_len()
            )));
        }
        if self.lattice.same_as(target) {
            return Ok(Self::from_parts_unchecked(target.clone(), self.coeffs.clone()));
        }
        let mut out = SpectralField::zeros(target.clone());
        for (i, k) in self.lattice.wavevectors().iter().enumerate() {
            if let Some(j) = target.index_of(*k) {
                out.coeffs[j] = self.coeffs[i];
            }
        }
        Ok(out)
    }

    /// Like [`transfer`](Self::transfer) but refuses to drop nonzero modes.
    pub fn embed(&self, target: &Arc<Lattice>) -> Result<SpectralField> {
        if target.k_max() < self.lattice.k_max() {
            let kt = target.k_max() as i32;
            let lost = self
                .lattice
                .wavevectors()
                .iter()
                .zip(&self.coeffs)
                .any(|(k, c)| k.iter().any(|x| x.abs() > kt) && *c != ZERO_MODE);
            if lost {
                return Err(Error::LatticeMismatch(format!(
                    "field has modes beyond K = {}",
                    target.k_max()
                )));
            }
        }
        self.transfer(target)
    }

    /// `self - other`, computed on whichever lattice is larger.
    pub fn difference(&self, other: &SpectralField) -> Result<SpectralField> {
        if self.lattice.k_max() >= other.lattice.k_max() {
            let o = other.transfer(&self.lattice)?;
            SpectralField::linear_combination(1.0, self, -1.0, &o)
        } else {
            let s = self.transfer(&other.lattice)?;
            SpectralField::linear_combination(1.0, &s, -1.0, other)
        }
    }

    /// `A^p u`: every mode multiplied by `lambda(k)^p`.
    pub fn stokes_power(&self, p: f64) -> SpectralField {
        if p == 0.0 {
            return self.clone();
        }
        let lat = self.lattice.clone();
        self.map_modes(|i| lambda_pow(lat.lambda(i), p))
    }

    /// `||u||_m = |A^{m/2} u|`, normalized so that `m = 0` is the L^2 norm of
    /// the physical field over the box.
    pub fn sobolev_norm(&self, m: f64) -> f64 {
        let l = self.lattice.box_len();
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += lambda_pow(self.lattice.lambda(i), m) * mode_norm_sqr(c);
        }
        (l * l * l * acc).sqrt()
    }

    /// Squared norm; avoids the square root when summing energies.
    pub fn sobolev_norm_sqr(&self, m: f64) -> f64 {
        let l = self.lattice.box_len();
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += lambda_pow(self.lattice.lambda(i), m) * mode_norm_sqr(c);
        }
        l * l * l * acc
    }

    /// `V^m` inner product `(A^{m/2} u, A^{m/2} v)`; the fields may live on
    /// different lattices over the same box.
    pub fn inner_product(&self, other: &SpectralField, m: f64) -> Result<f64> {
        if !self.lattice.same_box(&other.lattice) {
            return Err(Error::LatticeMismatch("inner product across boxes".into()));
        }
        let l = self.lattice.box_len();
        let (small, large) = if self.lattice.k_max() <= other.lattice.k_max() {
            (self, other)
        } else {
            (other, self)
        };
        let same = small.lattice.same_as(&large.lattice);
        let mut acc = 0.0;
        for (i, c) in small.coeffs.iter().enumerate() {
            let j = if same {
                i
            } else {
                large.lattice.index_of(small.lattice.wavevector(i)).expect("smaller cube is contained")
            };
            let d = &large.coeffs[j];
            let re = (c[0] * d[0].conj() + c[1] * d[1].conj() + c[2] * d[2].conj()).re;
            acc += lambda_pow(small.lattice.lambda(i), m) * re;
        }
        Ok(l * l * l * acc)
    }

    /// `(P u, Q u)` for the given eigenvalue cutoff.
    pub fn galerkin_split(&self, cut: GalerkinCutoff) -> (SpectralField, SpectralField) {
        let mut low = self.clone();
        let mut high = self.clone();
        for i in 0..self.coeffs.len() {
            if cut.keeps(self.lattice.lambda(i)) {
                high.coeffs[i] = ZERO_MODE;
            } else {
                low.coeffs[i] = ZERO_MODE;
            }
        }
        (low, high)
    }

    pub fn project_low(&self, cut: GalerkinCutoff) -> SpectralField {
        let lat = self.lattice.clone();
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if !cut.keeps(lat.lambda(i)) {
                *c = ZERO_MODE;
            }
        }
        out
    }

    pub fn project_high(&self, cut: GalerkinCutoff) -> SpectralField {
        let lat = self.lattice.clone();
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if cut.keeps(lat.lambda(i)) {
                *c = ZERO_MODE;
            }
        }
        out
    }

    /// Every mode above the cutoff is exactly zero.
    pub fn supported_in(&self, cut: GalerkinCutoff) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| cut.keeps(self.lattice.lambda(i)) || *c == ZERO_MODE)
    }

    pub fn has_non_finite(&self) -> bool {
        self.coeffs.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite())
    }
}

/// Applies `I - kappa kappa^T / |kappa|^2` mode by mode.
///
/// The input must already be conjugate-symmetric (relative tolerance 1e-12).
pub fn leray_project(raw: RawModes) -> Result<SpectralField> {
    let RawModes { lattice, coeffs } = raw;
    if coeffs.len() != lattice.len() {
        return Err(Error::LatticeMismatch(format!(
            "expected {} coefficients, got {}",
            lattice.len(),
            coeffs.len()
        )));
    }
    let scale = coeffs.iter().map(|c| mode_norm_sqr(c).sqrt()).fold(0.0, f64::max);
    for (i, c) in coeffs.iter().enumerate() {
        let n = &coeffs[lattice.neg_index(i)];
        let d = [n[0] - c[0].conj(), n[1] - c[1].conj(), n[2] - c[2].conj()];
        let dev = mode_norm_sqr(&d).sqrt();
        if dev > 1e-12 * scale || !dev.is_finite() {
            return Err(Error::Asymmetric {
                mode: lattice.wavevector(i),
                deviation: dev,
            });
        }
    }
    let mut field = SpectralField::from_parts_unchecked(lattice, coeffs);
    field.enforce_reality();
    field.leray_in_place();
    Ok(field)
}

pub fn stokes_power_apply(u: &SpectralField, p: f64) -> SpectralField {
    u.stokes_power(p)
}

pub fn sobolev_norm(u: &SpectralField, m: f64) -> f64 {
    u.sobolev_norm(m)
}

pub fn galerkin_split(u: &SpectralField, cut: GalerkinCutoff) -> (SpectralField, SpectralField) {
    u.galerkin_split(cut)
}

impl Add for &SpectralField {
    type Output = SpectralField;

    /// Panics if the lattices differ.
    fn add(self, rhs: &SpectralField) -> SpectralField {
        SpectralField::linear_combination(1.0, self, 1.0, rhs).expect("lattice mismatch in field addition")
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;

    /// Panics if the lattices differ.
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        SpectralField::linear_combination(1.0, self, -1.0, rhs).expect("lattice mismatch in field subtraction")
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;

    fn mul(self, a: f64) -> SpectralField {
        self.scaled(a)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;

    fn neg(self) -> SpectralField {
        self.scaled(-1.0)
    }
}
