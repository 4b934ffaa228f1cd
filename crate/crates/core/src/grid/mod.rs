//! Uniform sample grids over a complex chart and the fields that live on them.
//!
//! Node `(i, j)` sits at `z = x_i + i·y_j` and is stored at `j * nx + i`
//! (rows of constant `y`, `x` varying fastest). A periodic axis omits the
//! duplicate endpoint, so its spacing is `(x1 - x0) / nx`.

mod diff;
mod interp;
mod refine;
mod scheme;

use alloc::format;
use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_complex::Complex64;
use num_traits::Zero;

pub use diff::{d_x, d_y, d_z, d_z_dzbar, d_zbar, d_xx, d_yy, laplace_beltrami, LaplaceBeltrami};
pub use interp::interpolate;
pub use refine::{refine_study, ConvergenceSeries, ConvergenceStatus, CONVERGED_FLOOR};
pub use scheme::{AxisScheme, DiffScheme};

pub(crate) use diff::line_operator;
pub(crate) use scheme::Derivative;

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ChartGrid {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    nx: usize,
    ny: usize,
    periodic_x: bool,
    periodic_y: bool,
}

impl ChartGrid {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        nx: usize,
        ny: usize,
        periodic_x: bool,
        periodic_y: bool,
    ) -> Result<Self> {
        if !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "non-finite bounds [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        if x1 <= x0 || y1 <= y0 {
            return Err(Error::InvalidGrid(format!(
                "empty chart [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        if nx < MIN_NODES || ny < MIN_NODES {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_NODES} nodes per axis, got {nx} x {ny}"
            )));
        }
        Ok(Self {
            x0,
            x1,
            y0,
            y1,
            nx,
            ny,
            periodic_x,
            periodic_y,
        })
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x0, self.x1)
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.y0, self.y1)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn periodic(&self, axis: Axis) -> bool {
        match axis {
            Axis::X => self.periodic_x,
            Axis::Y => self.periodic_y,
        }
    }

    pub fn periodic_x(&self) -> bool {
        self.periodic_x
    }

    pub fn periodic_y(&self) -> bool {
        self.periodic_y
    }

    /// Both axes periodic: the chart covers a compact torus.
    pub fn is_torus(&self) -> bool {
        self.periodic_x && self.periodic_y
    }

    pub fn count(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.nx,
            Axis::Y => self.ny,
        }
    }

    pub fn hx(&self) -> f64 {
        spacing(self.x0, self.x1, self.nx, self.periodic_x)
    }

    pub fn hy(&self) -> f64 {
        spacing(self.y0, self.y1, self.ny, self.periodic_y)
    }

    pub fn spacing(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.hx(),
            Axis::Y => self.hy(),
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.hy()
    }

    pub fn z(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x(i), self.y(j))
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn node(&self, k: usize) -> (usize, usize) {
        (k % self.nx, k / self.nx)
    }

    /// Same chart with the spacing halved on both axes. Non-periodic axes
    /// keep their endpoints, so every coarse node is also a fine node.
    pub fn refined(&self) -> Self {
        let up = |n: usize, periodic: bool| if periodic { 2 * n } else { 2 * n - 1 };
        Self {
            nx: up(self.nx, self.periodic_x),
            ny: up(self.ny, self.periodic_y),
            ..*self
        }
    }

    /// Inverse of [`ChartGrid::refined`]: keep every other node.
    pub fn coarsened(&self) -> Result<Self> {
        let down = |n: usize, periodic: bool| -> Result<usize> {
            let ok = periodic == n.is_multiple_of(2);
            if !ok {
                return Err(Error::InvalidGrid(format!(
                    "{n} nodes cannot be coarsened by two on a {} axis",
                    if periodic { "periodic" } else { "non-periodic" }
                )));
            }
            Ok(if periodic { n / 2 } else { n.div_ceil(2) })
        };
        ChartGrid::new(
            self.x0,
            self.x1,
            self.y0,
            self.y1,
            down(self.nx, self.periodic_x)?,
            down(self.ny, self.periodic_y)?,
            self.periodic_x,
            self.periodic_y,
        )
    }

    pub fn with_resolution(&self, nx: usize, ny: usize) -> Result<Self> {
        ChartGrid::new(
            self.x0,
            self.x1,
            self.y0,
            self.y1,
            nx,
            ny,
            self.periodic_x,
            self.periodic_y,
        )
    }
}

fn spacing(a: f64, b: f64, n: usize, periodic: bool) -> f64 {
    if periodic {
        (b - a) / n as f64
    } else {
        (b - a) / (n - 1) as f64
    }
}

/// Element type of a grid field.
pub trait Sample:
    Copy + Send + Sync + Zero + Add<Output = Self> + Mul<f64, Output = Self> + 'static
{
    fn is_finite_sample(&self) -> bool;
    fn magnitude(&self) -> f64;
}

impl Sample for f64 {
    fn is_finite_sample(&self) -> bool {
        self.is_finite()
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Sample for Complex64 {
    fn is_finite_sample(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// One value per grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: ChartGrid,
    values: Vec<T>,
}

pub type ScalarField = Field<f64>;
pub type ComplexField = Field<Complex64>;

impl<T: Sample> Field<T> {
    pub fn from_values(grid: ChartGrid, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::FieldLength {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite_sample()) {
            let (i, j) = grid.node(k);
            return Err(Error::NonFinite {
                what: "field".into(),
                i,
                j,
            });
        }
        Ok(Self { grid, values })
    }

    /// Build without the finiteness check; used for internal results whose
    /// finiteness follows from their inputs.
    pub(crate) fn raw(grid: ChartGrid, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn from_fn(grid: ChartGrid, mut f: impl FnMut(f64, f64) -> T) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            let y = grid.y(j);
            for i in 0..grid.nx {
                values.push(f(grid.x(i), y));
            }
        }
        Self { grid, values }
    }

    pub fn constant(grid: ChartGrid, v: T) -> Self {
        Self {
            grid,
            values: alloc::vec![v; grid.len()],
        }
    }

    pub fn grid(&self) -> &ChartGrid {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[self.grid.index(i, j)]
    }

    pub fn map<U: Sample>(&self, f: impl Fn(T) -> U) -> Field<U> {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map<U: Sample, V: Sample>(
        &self,
        other: &Field<U>,
        f: impl Fn(T, U) -> V,
    ) -> Result<Field<V>> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Field {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Maximum magnitude, reduced in storage order.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.magnitude()))
    }

    /// Maximum magnitude over nodes where `keep` is true.
    pub fn max_abs_where(&self, keep: &[bool]) -> f64 {
        self.values
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .fold(0.0, |m, (v, _)| m.max(v.magnitude()))
    }

    pub fn check_finite(&self, what: &str) -> Result<()> {
        if let Some(k) = self.values.iter().position(|v| !v.is_finite_sample()) {
            let (i, j) = self.grid.node(k);
            return Err(Error::NonFinite {
                what: what.into(),
                i,
                j,
            });
        }
        Ok(())
    }
}

impl ScalarField {
    pub fn to_complex(&self) -> ComplexField {
        self.map(|v| Complex64::new(v, 0.0))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

impl ComplexField {
    pub fn re(&self) -> ScalarField {
        self.map(|v| v.re)
    }

    pub fn im(&self) -> ScalarField {
        self.map(|v| v.im)
    }

    pub fn abs(&self) -> ScalarField {
        self.map(|v| v.norm())
    }

    pub fn conj(&self) -> ComplexField {
        self.map(|v| v.conj())
    }
}
