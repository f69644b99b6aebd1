use serde::Serialize;

use crate::{Error, Result};

/// Data of the scalar inequality `y' <= delta(t) + alpha y^2`, `y(0) = y0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RiccatiInput {
    pub y0: f64,
    /// `int_0^T delta`
    pub delta_integral: f64,
    pub alpha: f64,
    pub t_end: f64,
}

impl RiccatiInput {
    pub fn new(y0: f64, delta_integral: f64, alpha: f64, t_end: f64) -> Result<Self> {
        if !(y0 >= 0.0) || !(delta_integral >= 0.0) || !(alpha >= 0.0) || !(t_end > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "Riccati input needs y0, delta, alpha >= 0 and T > 0 (got {y0}, {delta_integral}, {alpha}, {t_end})"
            )));
        }
        Ok(Self {
            y0,
            delta_integral,
            alpha,
            t_end,
        })
    }

    /// `eta = y0 + int delta`.
    pub fn eta(&self) -> f64 {
        self.y0 + self.delta_integral
    }

    /// `alpha eta T`; feasibility is `product < 1`.
    pub fn product(&self) -> f64 {
        self.alpha * self.eta() * self.t_end
    }
}

/// `alpha (y0 + int delta) T < 1`, strictly.
pub fn riccati_feasible(input: &RiccatiInput) -> bool {
    input.product() < 1.0
}

/// `eta / (1 - alpha eta t)`, or `None` once `alpha eta t >= 1`.
pub fn riccati_bound(input: &RiccatiInput, t: f64) -> Option<f64> {
    let eta = input.eta();
    let q = input.alpha * eta * t;
    if q < 1.0 {
        Some(eta / (1.0 - q))
    } else {
        None
    }
}
