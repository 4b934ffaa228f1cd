//! Immersions sampled on chart grids: the gallery, isothermal charts of
//! surfaces of revolution, and ingestion of tabulated positions.

mod gallery;
mod ingest;
mod perturbed;
mod revolution;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Axis, ChartGrid};
use crate::jet::{Jet, JetVec3};
use crate::vec3::Vec3;

pub use gallery::{gallery, lookup, sample_gallery, GalleryEntry, GallerySurface, ParamSpec};
pub use ingest::from_positions;
pub use perturbed::PerturbedTorus;
pub use revolution::{make_revolution_chart, ProfileCurve, RevolutionChart};

/// Below this |X_x × X_y| a node is treated as a branch point.
pub const DEGENERACY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DerivativeSource {
    Analytic,
    Numerical,
}

/// Position with its first and second partial derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointJet {
    pub x: Vec3,
    pub x_x: Vec3,
    pub x_y: Vec3,
    pub x_xx: Vec3,
    pub x_xy: Vec3,
    pub x_yy: Vec3,
}

impl PointJet {
    /// Read off a point jet from a vector of Taylor jets of order ≥ 2.
    pub fn from_jets(p: &JetVec3) -> Self {
        let get = |f: fn(&Jet) -> f64| Vec3::new(f(&p.0[0]), f(&p.0[1]), f(&p.0[2]));
        Self {
            x: get(Jet::value),
            x_x: get(Jet::d_x),
            x_y: get(Jet::d_y),
            x_xx: get(Jet::d_xx),
            x_xy: get(Jet::d_xy),
            x_yy: get(Jet::d_yy),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }

    pub fn as_array(&self) -> [Vec3; 6] {
        [self.x, self.x_x, self.x_y, self.x_xx, self.x_xy, self.x_yy]
    }

    pub fn from_array(a: [Vec3; 6]) -> Self {
        Self {
            x: a[0],
            x_x: a[1],
            x_y: a[2],
            x_xx: a[3],
            x_xy: a[4],
            x_yy: a[5],
        }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self::from_array(self.as_array().map(|v| v * lambda))
    }
}

/// A parametrized surface that can be evaluated anywhere in its chart.
pub trait Immersion: Send + Sync {
    fn eval(&self, x: f64, y: f64) -> PointJet;

    /// Reject grids the immersion cannot be sampled on, such as a periodic
    /// axis whose span differs from the surface's period.
    fn check_grid(&self, _grid: &ChartGrid) -> Result<()> {
        Ok(())
    }
}

impl<F> Immersion for F
where
    F: Fn(Jet, Jet) -> JetVec3 + Send + Sync,
{
    fn eval(&self, x: f64, y: f64) -> PointJet {
        PointJet::from_jets(&self(Jet::var_x(x), Jet::var_y(y)))
    }
}

/// Require a periodic axis to span exactly `period`.
pub(crate) fn check_period(grid: &ChartGrid, axis: Axis, period: Option<f64>) -> Result<()> {
    if !grid.periodic(axis) {
        return Ok(());
    }
    let (a, b) = match axis {
        Axis::X => grid.x_range(),
        Axis::Y => grid.y_range(),
    };
    match period {
        Some(p) if ((b - a) - p).abs() <= 1e-9 * p => Ok(()),
        Some(p) => Err(Error::InvalidGrid(format!(
            "periodic {axis:?} axis spans {} but the surface has period {p}",
            b - a
        ))),
        None => Err(Error::InvalidGrid(format!(
            "the surface is not periodic along {axis:?}"
        ))),
    }
}

/// Topological facts about a chart that a single chart cannot certify.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChartMeta {
    pub compact: bool,
    pub simply_connected: bool,
    /// Conformality tolerance appropriate for this chart.
    pub conformality_tol: f64,
    pub note: Option<String>,
}

impl ChartMeta {
    pub fn new(compact: bool, simply_connected: bool) -> Self {
        Self {
            compact,
            simply_connected,
            conformality_tol: 1e-6,
            note: None,
        }
    }
}

/// Positions and first/second derivatives of an immersion at grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ImmersionSample {
    grid: ChartGrid,
    points: Vec<PointJet>,
    source: DerivativeSource,
}

impl ImmersionSample {
    /// Validate finiteness and the immersion condition.
    pub fn new(grid: ChartGrid, points: Vec<PointJet>, source: DerivativeSource) -> Result<Self> {
        if points.len() != grid.len() {
            return Err(Error::FieldLength {
                expected: grid.len(),
                got: points.len(),
            });
        }
        for (k, p) in points.iter().enumerate() {
            let (i, j) = grid.node(k);
            if !p.is_finite() {
                return Err(Error::NonFinite {
                    what: "immersion sample".into(),
                    i,
                    j,
                });
            }
            let cross = p.x_x.cross(p.x_y).norm();
            if cross < DEGENERACY_FLOOR {
                return Err(Error::DegenerateImmersion { i, j, cross });
            }
        }
        Ok(Self {
            grid,
            points,
            source,
        })
    }

    /// Evaluate `imm` at every node.
    pub fn from_immersion(imm: &dyn Immersion, grid: ChartGrid) -> Result<Self> {
        imm.check_grid(&grid)?;
        let eval = |k: usize| {
            let (i, j) = grid.node(k);
            imm.eval(grid.x(i), grid.y(j))
        };
        #[cfg(feature = "parallel")]
        let points = (0..grid.len()).into_par_iter().map(eval).collect();
        #[cfg(not(feature = "parallel"))]
        let points = (0..grid.len()).map(eval).collect();
        Self::new(grid, points, DerivativeSource::Analytic)
    }

    pub fn grid(&self) -> &ChartGrid {
        &self.grid
    }

    pub fn points(&self) -> &[PointJet] {
        &self.points
    }

    pub fn point(&self, i: usize, j: usize) -> &PointJet {
        &self.points[self.grid.index(i, j)]
    }

    pub fn source(&self) -> DerivativeSource {
        self.source
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.points.iter().map(|p| p.x).collect()
    }

    /// The homothetic image λX.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            grid: self.grid,
            points: self.points.iter().map(|p| p.scaled(lambda)).collect(),
            source: self.source,
        }
    }

    /// Keep positions only and recompute every derivative by finite
    /// differences.
    pub fn positions_only(&self) -> Result<Self> {
        from_positions(self.grid, self.positions())
    }
}

/// e₃ = X_x × X_y / |X_x × X_y| per node.
pub fn unit_normal(s: &ImmersionSample) -> Result<Vec<Vec3>> {
    s.points
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let c = p.x_x.cross(p.x_y);
            let n = c.norm();
            if n < DEGENERACY_FLOOR {
                let (i, j) = s.grid.node(k);
                return Err(Error::DegenerateImmersion { i, j, cross: n });
            }
            Ok(c * (1.0 / n))
        })
        .collect()
}
