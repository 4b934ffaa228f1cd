use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use super::{Axis, ChartGrid};
use crate::error::{Error, Result};

/// Differentiation rule along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum AxisScheme {
    Fd2,
    Fd4,
    Spectral,
}

impl AxisScheme {
    pub fn label(self) -> &'static str {
        match self {
            AxisScheme::Fd2 => "fd2",
            AxisScheme::Fd4 => "fd4",
            AxisScheme::Spectral => "spectral",
        }
    }

    /// Formal order of accuracy; `None` for spectral.
    pub fn order(self) -> Option<u32> {
        match self {
            AxisScheme::Fd2 => Some(2),
            AxisScheme::Fd4 => Some(4),
            AxisScheme::Spectral => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiffScheme {
    pub x: AxisScheme,
    pub y: AxisScheme,
}

impl DiffScheme {
    pub fn uniform(kind: AxisScheme) -> Self {
        Self { x: kind, y: kind }
    }

    /// Spectral on periodic axes, fourth-order differences elsewhere.
    pub fn spectral_auto(grid: &ChartGrid) -> Self {
        Self::periodic_or(grid, AxisScheme::Fd4)
    }

    /// Spectral on periodic axes, `fallback` elsewhere.
    pub fn periodic_or(grid: &ChartGrid, fallback: AxisScheme) -> Self {
        let pick = |p: bool| if p { AxisScheme::Spectral } else { fallback };
        Self {
            x: pick(grid.periodic_x()),
            y: pick(grid.periodic_y()),
        }
    }

    pub fn axis(&self, axis: Axis) -> AxisScheme {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
        }
    }

    pub fn check(&self, grid: &ChartGrid) -> Result<()> {
        for axis in [Axis::X, Axis::Y] {
            if self.axis(axis) == AxisScheme::Spectral && !grid.periodic(axis) {
                return Err(Error::SpectralOnNonPeriodic(axis));
            }
        }
        Ok(())
    }
}

impl fmt::Display for DiffScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.x.label(), self.y.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Derivative {
    First,
    Second,
}

/// Dense-or-sparse row representation of a 1-D differentiation matrix.
pub(crate) struct LineOperator {
    pub rows: Vec<Vec<(usize, f64)>>,
}

const FD2_D1_LEFT: [f64; 3] = [-3.0, 4.0, -1.0];
const FD2_D2_LEFT: [f64; 4] = [2.0, -5.0, 4.0, -1.0];
const FD4_D1_INTERIOR: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
const FD4_D1_LEFT: [[f64; 5]; 2] = [
    [-25.0, 48.0, -36.0, 16.0, -3.0],
    [-3.0, -10.0, 18.0, -6.0, 1.0],
];
const FD4_D2_INTERIOR: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];
/// Seven-point closures, one order above the interior; the six-point
/// fourth-order rows carry an error constant about seventy times the
/// interior one and dominate boundary residuals.
const FD4_D2_LEFT: [[f64; 7]; 2] = [
    [812.0, -3132.0, 5265.0, -5080.0, 2970.0, -972.0, 137.0],
    [137.0, -147.0, -255.0, 470.0, -285.0, 93.0, -13.0],
];

impl LineOperator {
    pub fn build(
        kind: AxisScheme,
        n: usize,
        h: f64,
        periodic: bool,
        which: Derivative,
    ) -> Result<Self> {
        match kind {
            AxisScheme::Spectral => {
                if !periodic {
                    return Err(Error::InvalidGrid(
                        "spectral differentiation needs a periodic axis".into(),
                    ));
                }
                Ok(Self::spectral(n, h, which))
            }
            AxisScheme::Fd2 => Ok(Self::fd2(n, h, periodic, which)),
            AxisScheme::Fd4 => Ok(Self::fd4(n, h, periodic, which)),
        }
    }

    fn centered(n: usize, p: usize, weights: &[f64], scale: f64) -> Vec<(usize, f64)> {
        let half = (weights.len() / 2) as isize;
        weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0.0)
            .map(|(k, &w)| {
                let q = (p as isize + k as isize - half).rem_euclid(n as isize) as usize;
                (q, w * scale)
            })
            .collect()
    }

    /// Closure row anchored at the left end, or its mirror image at the
    /// right end. Odd derivatives pass a negated `scale` for the mirror.
    fn one_sided(n: usize, weights: &[f64], from_left: bool, scale: f64) -> Vec<(usize, f64)> {
        weights
            .iter()
            .enumerate()
            .map(|(k, &w)| {
                let q = if from_left { k } else { n - 1 - k };
                (q, w * scale)
            })
            .collect()
    }

    fn fd2(n: usize, h: f64, periodic: bool, which: Derivative) -> Self {
        let rows = (0..n)
            .map(|p| match which {
                Derivative::First => {
                    let s = 1.0 / (2.0 * h);
                    if periodic || (p > 0 && p < n - 1) {
                        Self::centered(n, p, &[-1.0, 0.0, 1.0], s)
                    } else if p == 0 {
                        Self::one_sided(n, &FD2_D1_LEFT, true, s)
                    } else {
                        Self::one_sided(n, &FD2_D1_LEFT, false, -s)
                    }
                }
                Derivative::Second => {
                    let s = 1.0 / (h * h);
                    if periodic || (p > 0 && p < n - 1) {
                        Self::centered(n, p, &[1.0, -2.0, 1.0], s)
                    } else {
                        Self::one_sided(n, &FD2_D2_LEFT, p == 0, s)
                    }
                }
            })
            .collect();
        Self { rows }
    }

    fn fd4(n: usize, h: f64, periodic: bool, which: Derivative) -> Self {
        let rows = (0..n)
            .map(|p| {
                let interior = periodic || (p >= 2 && p + 2 < n);
                let edge = if p < 2 { p } else { n - 1 - p };
                match which {
                    Derivative::First => {
                        let s = 1.0 / (12.0 * h);
                        if interior {
                            Self::centered(n, p, &FD4_D1_INTERIOR, s)
                        } else if p < 2 {
                            Self::one_sided(n, &FD4_D1_LEFT[edge], true, s)
                        } else {
                            Self::one_sided(n, &FD4_D1_LEFT[edge], false, -s)
                        }
                    }
                    Derivative::Second => {
                        let s = 1.0 / (12.0 * h * h);
                        if interior {
                            Self::centered(n, p, &FD4_D2_INTERIOR, s)
                        } else {
                            Self::one_sided(n, &FD4_D2_LEFT[edge], p < 2, s / 15.0)
                        }
                    }
                }
            })
            .collect();
        Self { rows }
    }

    fn spectral(n: usize, h: f64, which: Derivative) -> Self {
        let period = h * n as f64;
        let scale = 2.0 * PI / period;
        let mut first = vec![0.0; n];
        for (m, c) in first.iter_mut().enumerate().skip(1) {
            let theta = PI * m as f64 / n as f64;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            *c = if n.is_multiple_of(2) {
                0.5 * sign / theta.tan()
            } else {
                0.5 * sign / theta.sin()
            } * scale;
        }
        let kernel = match which {
            Derivative::First => first,
            Derivative::Second => (0..n)
                .map(|k| {
                    (0..n)
                        .map(|m| first[m] * first[(k + n - m) % n])
                        .sum::<f64>()
                })
                .collect(),
        };
        let rows = (0..n)
            .map(|p| {
                (0..n)
                    .filter_map(|q| {
                        let w = kernel[(p + n - q) % n];
                        (w != 0.0).then_some((q, w))
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }
}
