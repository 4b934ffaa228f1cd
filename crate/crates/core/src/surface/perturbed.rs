//! A genuinely nonisothermic compact test surface.
//!
//! The torus of revolution is pushed along V = c·e₃ + α X_x + β X_t. Writing
//! w = α + iβ, the chart stays conformal to first order in ε exactly when
//! w_z̄ = c·h, with h the (real) Hopf invariant of the torus chart. We pick
//! c = s/(2h) for a zero-mean trigonometric polynomial s and solve
//! w_z̄ = s/2 mode by mode, so the only conformality defect is O(ε²).

use core::f64::consts::PI;


use super::gallery::{torus_jets, torus_period, torus_profile_angle};
use super::{check_period, Immersion, PointJet};
use crate::error::Result;
use crate::grid::{Axis, ChartGrid};
use crate::jet::{Jet, JetVec3};

/// Terms amp·cos(m x + n ω t + phase) of the bump s.
const MODES: [(f64, f64, f64, f64); 4] = [
    (1.0, 1.0, 1.0, 0.0),
    (0.6, 2.0, -1.0, 0.7),
    (0.5, 0.0, 2.0, 1.3),
    (0.4, 3.0, 1.0, -0.4),
];

/// Overall size of s relative to the mode table.
const BUMP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbedTorus {
    big_r: f64,
    a: f64,
    eps: f64,
    omega: f64,
}

impl PerturbedTorus {
    pub fn new(big_r: f64, a: f64, eps: f64) -> Self {
        Self {
            big_r,
            a,
            eps,
            omega: 2.0 * PI / torus_period(big_r, a),
        }
    }

    pub fn period_t(&self) -> f64 {
        torus_period(self.big_r, self.a)
    }

    pub fn jets(&self, x: Jet, t: Jet) -> JetVec3 {
        let base = torus_jets(self.big_r, self.a, x, t);
        let bx = base.partial_x();
        let bt = base.partial_y();
        let normal = bx.cross(&bt).normalized();
        let v = torus_profile_angle(self.big_r, self.a, t);
        let rho = v.cos() * self.a + self.big_r;
        let zero = Jet::constant(0.0);
        let (mut s, mut alpha, mut beta) = (zero, zero, zero);
        for &(amp, m, n, phase) in &MODES {
            let amp = amp * BUMP;
            let theta = x * m + t * (n * self.omega) + phase;
            let k2 = m * m + n * n * self.omega * self.omega;
            let sin = theta.sin();
            s = s + theta.cos() * amp;
            // amp·sin θ / (m + i n ω)
            alpha = alpha + sin * (amp * m / k2);
            beta = beta - sin * (amp * n * self.omega / k2);
        }
        // h = R / (2aρ) on the torus chart
        let c = s * rho * (self.a / self.big_r);
        let push = normal
            .scale(c)
            .add(&bx.scale(alpha))
            .add(&bt.scale(beta))
            .scale(Jet::constant(self.eps));
        base.add(&push)
    }
}

impl Immersion for PerturbedTorus {
    fn eval(&self, x: f64, y: f64) -> PointJet {
        PointJet::from_jets(&self.jets(Jet::var_x(x), Jet::var_y(y)))
    }

    fn check_grid(&self, grid: &ChartGrid) -> Result<()> {
        check_period(grid, Axis::X, Some(2.0 * PI))?;
        check_period(grid, Axis::Y, Some(self.period_t()))
    }
}
