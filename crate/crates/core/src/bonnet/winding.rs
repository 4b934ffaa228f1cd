use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{interpolate, Axis, ComplexField};

const START_SAMPLES: usize = 256;

/// Upper bound on contour samples before giving up on resolving the phase.
pub const MAX_CONTOUR_SAMPLES: usize = 65536;

/// Smallest min|F| / max|F| on the contour accepted as "away from zeros".
const MIN_RELATIVE_MODULUS: f64 = 1e-8;

/// Winding number of `f` around the circle |z − center| = radius.
///
/// The phase is accumulated from principal-value increments. The sample
/// count doubles from 256 until every increment stays below π/2.
pub fn zero_winding_fn(
    f: impl Fn(Complex64) -> Complex64,
    center: Complex64,
    radius: f64,
) -> Result<i64> {
    wind(|z| Ok(f(z)), center, radius)
}

/// Winding number of a sampled field around a circle inside its chart.
///
/// The field is read off the contour by tensor Lagrange interpolation.
pub fn zero_winding(f: &ComplexField, center: Complex64, radius: f64) -> Result<i64> {
    let grid = f.grid();
    for (axis, c) in [(Axis::X, center.re), (Axis::Y, center.im)] {
        if grid.periodic(axis) {
            continue;
        }
        let (a, b) = match axis {
            Axis::X => grid.x_range(),
            Axis::Y => grid.y_range(),
        };
        if c - radius < a || c + radius > b {
            return Err(Error::ContourInvalid(format!(
                "circle of radius {radius} about {center} leaves the chart along {axis:?}"
            )));
        }
    }
    wind(|z| interpolate(f, z.re, z.im), center, radius)
}

fn wind(
    f: impl Fn(Complex64) -> Result<Complex64>,
    center: Complex64,
    radius: f64,
) -> Result<i64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::ContourInvalid(format!("radius {radius}")));
    }
    let mut n = START_SAMPLES;
    loop {
        let values = (0..n)
            .map(|k| f(center + Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64)))
            .collect::<Result<Vec<_>>>()?;
        let (lo, hi) = values
            .iter()
            .map(|v| v.norm())
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), m| (lo.min(m), hi.max(m)));
        if !(lo > MIN_RELATIVE_MODULUS * hi) || !hi.is_finite() {
            return Err(Error::ContourInvalid(format!(
                "|F| drops to {lo:e} on the contour (max {hi:e})"
            )));
        }
        let mut total = 0.0;
        let mut worst = 0.0f64;
        for k in 0..n {
            let step = (values[(k + 1) % n] / values[k]).arg();
            worst = worst.max(step.abs());
            total += step;
        }
        if worst < FRAC_PI_2 {
            let turns = total / (2.0 * PI);
            let k = turns.round();
            if (turns - k).abs() > 1e-6 {
                return Err(Error::ContourInvalid(format!(
                    "accumulated phase {turns} turns is not an integer"
                )));
            }
            return Ok(k as i64);
        }
        if n >= MAX_CONTOUR_SAMPLES {
            return Err(Error::ContourInvalid(format!(
                "phase step {worst} still too large with {n} samples"
            )));
        }
        n *= 2;
    }
}
