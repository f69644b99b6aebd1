use serde::Serialize;

use crate::solver::Trajectory;
use crate::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Composite rule: `order` Gauss-Legendre nodes on every snapshot interval.
#[derive(Clone, Debug)]
pub struct CompositeRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 || order > 64 {
            return Err(Error::InvalidArgument(format!("quadrature order must be in 1..=64, got {order}")));
        }
        let (nodes, weights) = gauss_legendre(order);
        Ok(Self { order, nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `(interval index, t, weight)` for every node of the trajectory grid.
    pub fn nodes(&self, traj: &Trajectory) -> Vec<(usize, f64, f64)> {
        let times = traj.times();
        let mut out = Vec::with_capacity(self.order * traj.intervals());
        for (j, w) in times.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, wt) in self.nodes.iter().zip(&self.weights) {
                out.push((j, mid + half * x, half * wt));
            }
        }
        out
    }
}

/// How a time integral was evaluated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureInfo {
    pub rule: String,
    pub order: usize,
    pub intervals: usize,
    pub nodes: usize,
    /// The order used for the refinement estimate.
    pub refinement_order: usize,
}

impl QuadratureInfo {
    pub fn composite(order: usize, intervals: usize) -> Self {
        Self {
            rule: "composite gauss-legendre".into(),
            order,
            intervals,
            nodes: order * intervals,
            refinement_order: 2 * order,
        }
    }
}

/// Error estimate from comparing a value with its refined counterpart.
pub fn refinement_error(coarse: f64, fine: f64) -> f64 {
    (2.0 * (coarse - fine).abs())
        .max(4.0 * f64::EPSILON * coarse.abs().max(fine.abs()))
        .max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((approx - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn known_two_point_rule() {
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3.0_f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
    }
}
