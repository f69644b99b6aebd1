use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bilinear::NonlinearWorkspace;
use crate::spectral::{random_solenoidal, Lattice};
use crate::{Error, Result};

/// Where a nonlinear constant came from. Every certificate carries it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstantMethod {
    #[serde(rename = "user-supplied")]
    UserSupplied,
    #[serde(rename = "lattice-sum bound")]
    LatticeSumBound,
    #[serde(rename = "empirical max")]
    EmpiricalMax,
}

impl fmt::Display for ConstantMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantMethod::UserSupplied => "user-supplied",
            ConstantMethod::LatticeSumBound => "lattice-sum bound",
            ConstantMethod::EmpiricalMax => "empirical max",
        })
    }
}

impl std::str::FromStr for ConstantMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "user-supplied" => Ok(Self::UserSupplied),
            "lattice-sum bound" | "lattice-sum" => Ok(Self::LatticeSumBound),
            "empirical max" | "empirical" => Ok(Self::EmpiricalMax),
            other => Err(Error::Config(format!(
                "unknown constant method '{other}' (expected user-supplied, lattice-sum bound, empirical max)"
            ))),
        }
    }
}

/// One value of `c_m` shared by all three nonlinear inequalities of order `m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub m: u32,
    pub c_m: f64,
    pub method: ConstantMethod,
}

impl ConstantEstimate {
    /// Pass-through of a user value. Zero is accepted here so diagnostics can
    /// demonstrate a degenerate threshold; certificates reject it.
    pub fn user_supplied(m: u32, c_m: f64) -> Result<Self> {
        if !(c_m >= 0.0) || !c_m.is_finite() {
            return Err(Error::InvalidArgument(format!("c_m must be finite and non-negative, got {c_m}")));
        }
        Ok(Self {
            m,
            c_m,
            method: ConstantMethod::UserSupplied,
        })
    }

    pub fn is_degenerate(&self) -> bool {
        self.c_m <= 0.0
    }
}

/// Upper bound on `sum_{k in Z^3, k != 0} |k|^{-s}` for `s > 3`.
///
/// Exact sum over `|k|_inf <= R` plus the tail bound
/// `sum_{n > R} (24 n^2 + 2) n^{-s} <= int_R^inf (24 x^{2-s} + 2 x^{-s}) dx`,
/// using that the shell `|k|_inf = n` holds `24 n^2 + 2` points with `|k| >= n`.
pub fn lattice_zeta_upper(s: f64) -> f64 {
    assert!(s > 3.0, "lattice sum diverges for s <= 3");
    const R: i64 = 64;
    let mut sum = 0.0;
    // octant with multiplicity 2^(nonzero components)
    for a in 0..=R {
        for b in 0..=R {
            for c in 0..=R {
                let sq = a * a + b * b + c * c;
                if sq == 0 {
                    continue;
                }
                let mult = [a, b, c].iter().filter(|x| **x != 0).count();
                sum += (1u32 << mult) as f64 * (sq as f64).powf(-s / 2.0);
            }
        }
    }
    let r = R as f64;
    sum + 24.0 * r.powf(3.0 - s) / (s - 3.0) + 2.0 * r.powf(1.0 - s) / (s - 1.0)
}

/// Upper bound for `c_m` from lattice sums.
///
/// With `S(s) = sum_{k != 0} |kappa(k)|^{-s}`:
///
/// - `||B(u,v)||_m <= 2^m S(2m)^{1/2} L^{-3/2} ||u||_m ||v||_{m+1}`, from
///   `|kappa_{p+q}|^m <= 2^{m-1}(|kappa_p|^m + |kappa_q|^m)` and Young's
///   inequality `l^2 * l^1 -> l^2` with Cauchy-Schwarz on the `l^1` factor.
///   The same constant bounds `|(B(w,v), A^m w)|`.
/// - for `m >= 3`, `|(B(v,w), A^m w)| <= m 2^{m-1} S(2m-2)^{1/2} L^{-3/2}
///   ||v||_m ||w||_m^2`, using the cancellation `(B(v, A^{m/2} w), A^{m/2} w) = 0`
///   and the mean-value bound on `|kappa_k|^m - |kappa_q|^m`.
///
/// The returned value is the larger of the two.
pub fn estimate_cm(m: u32, box_len: f64) -> Result<ConstantEstimate> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("c_m estimate needs m >= 2, got {m}")));
    }
    if !(box_len > 0.0) {
        return Err(Error::InvalidArgument(format!("box length must be positive, got {box_len}")));
    }
    let mf = m as f64;
    let scale = box_len / (2.0 * PI);
    let sum_kappa = |s: f64| scale.powf(s) * lattice_zeta_upper(s);
    let vol = box_len.powf(-1.5);
    let buv = 2f64.powi(m as i32) * sum_kappa(2.0 * mf).sqrt() * vol;
    let mut c = buv;
    if m >= 3 {
        let mm = mf * 2f64.powi(m as i32 - 1) * sum_kappa(2.0 * mf - 2.0).sqrt() * vol;
        c = c.max(mm);
    }
    Ok(ConstantEstimate {
        m,
        c_m: c,
        method: ConstantMethod::LatticeSumBound,
    })
}

/// Largest ratio `||B(u,v)||_m / (||u||_m ||v||_{m+1})` over random pairs on
/// `lattice`. A lower bound for the true constant, never a certificate input
/// on its own.
pub fn estimate_cm_empirical(m: u32, lattice: &Arc<Lattice>, samples: usize, seed: u64) -> Result<ConstantEstimate> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("c_m estimate needs m >= 2, got {m}")));
    }
    let mut ws = NonlinearWorkspace::full_band(lattice.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shell = 3 * lattice.k_max() * lattice.k_max();
    let mf = m as f64;
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let u = random_solenoidal(lattice, shell, &mut rng);
        let v = random_solenoidal(lattice, shell, &mut rng);
        let b = ws.bilinear(&u, &v)?;
        let den = u.sobolev_norm(mf) * v.sobolev_norm(mf + 1.0);
        if den > 0.0 {
            best = best.max(b.sobolev_norm(mf) / den);
        }
    }
    Ok(ConstantEstimate {
        m,
        c_m: best,
        method: ConstantMethod::EmpiricalMax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_brackets_known_value() {
        // Epstein zeta of the cubic lattice at s = 6 is about 8.4019;
        // the bound must sit above it and close to it.
        let z6 = lattice_zeta_upper(6.0);
        assert!(z6 > 8.40 && z6 < 8.41, "{z6}");
        let z4 = lattice_zeta_upper(4.0);
        assert!(z4 > 16.53 && z4 < 17.0, "{z4}");
    }

    #[test]
    fn rejects_low_order() {
        assert!(estimate_cm(1, 1.0).is_err());
        assert!(estimate_cm(2, 1.0).is_ok());
    }

    #[test]
    fn user_override() {
        let c = ConstantEstimate::user_supplied(3, 1.0).unwrap();
        assert_eq!(c.method, ConstantMethod::UserSupplied);
        assert_eq!(c.method.to_string(), "user-supplied");
        assert!(ConstantEstimate::user_supplied(3, -1.0).is_err());
        assert!(ConstantEstimate::user_supplied(3, f64::NAN).is_err());
    }
}
