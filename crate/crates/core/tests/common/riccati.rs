//! Scalar oracle for `y' = delta(t) + alpha y^2` with piecewise-constant `delta`.

use rand::Rng;

#[derive(Clone, Debug)]
pub struct Instance {
    pub y0: f64,
    pub alpha: f64,
    pub t_end: f64,
    /// `(start, end, delta)` covering `[0, T]`.
    pub pieces: Vec<(f64, f64, f64)>,
}

impl Instance {
    pub fn delta_integral(&self) -> f64 {
        self.pieces.iter().map(|(a, b, d)| (b - a) * d).sum()
    }

    pub fn eta(&self) -> f64 {
        self.y0 + self.delta_integral()
    }

    /// Random instance with `alpha eta T` equal to `product`; with `zero_delta`
    /// the forcing vanishes.
    pub fn random<R: Rng>(rng: &mut R, product: f64, zero_delta: bool) -> Self {
        let t_end = rng.gen_range(0.1..5.0);
        let n = rng.gen_range(1..=5);
        let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.0..t_end)).collect();
        cuts.push(0.0);
        cuts.push(t_end);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let pieces = cuts
            .windows(2)
            .map(|w| (w[0], w[1], if zero_delta { 0.0 } else { rng.gen_range(0.0..2.0) }))
            .collect();
        let y0 = if zero_delta { rng.gen_range(0.01..1.0) } else { rng.gen_range(0.0..1.0) };
        let mut inst = Self {
            y0,
            alpha: 1.0,
            t_end,
            pieces,
        };
        inst.alpha = product / (inst.eta() * t_end);
        inst
    }

    fn rhs(&self, delta: f64, y: f64) -> f64 {
        delta + self.alpha * y * y
    }

    /// Classical RK4 with `steps` steps per piece; returns `(t, y)` at every step.
    pub fn rk4(&self, steps: usize) -> Vec<(f64, f64)> {
        let mut out = vec![(0.0, self.y0)];
        let mut y = self.y0;
        for &(a, b, d) in &self.pieces {
            let h = (b - a) / steps as f64;
            for i in 0..steps {
                let k1 = self.rhs(d, y);
                let k2 = self.rhs(d, y + 0.5 * h * k1);
                let k3 = self.rhs(d, y + 0.5 * h * k2);
                let k4 = self.rhs(d, y + h * k3);
                y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                let t = if i + 1 == steps { b } else { a + (i + 1) as f64 * h };
                out.push((t, y));
            }
        }
        out
    }

    /// Exact solution, piece by piece.
    pub fn exact(&self, t: f64) -> f64 {
        let mut y = self.y0;
        for &(a, b, d) in &self.pieces {
            let s = t.min(b) - a;
            if s <= 0.0 {
                break;
            }
            y = if d == 0.0 {
                y / (1.0 - self.alpha * y * s)
            } else {
                let r = (d / self.alpha).sqrt();
                r * ((self.alpha * d).sqrt() * s + (y / r).atan()).tan()
            };
        }
        y
    }
}
