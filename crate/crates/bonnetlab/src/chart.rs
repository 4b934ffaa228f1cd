//! Chart specification files and the immersion samples they describe.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use bonnetlab_core::grid::ChartGrid;
use bonnetlab_core::invariants::{TOL_CONF_ANALYTIC, TOL_CONF_NUMERICAL};
use bonnetlab_core::surface::{from_positions, ChartMeta, DerivativeSource, GallerySurface, ImmersionSample};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{Table, TableRows};

/// Resolution used for gallery charts when none is given.
pub const DEFAULT_RESOLUTION: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpecFile {
    pub name: String,
    /// Required for tables. Gallery charts fall back to the entry's chart.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    pub source: ChartSource,
    /// Required for tables. Gallery charts fall back to the entry's flags.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    pub periodic_x: bool,
    pub periodic_y: bool,
}

impl GridSpec {
    pub fn to_grid(&self) -> Result<ChartGrid> {
        Ok(ChartGrid::new(
            self.x0,
            self.x1,
            self.y0,
            self.y1,
            self.nx,
            self.ny,
            self.periodic_x,
            self.periodic_y,
        )?)
    }

    pub fn from_grid(g: &ChartGrid) -> Self {
        let (x0, x1) = g.x_range();
        let (y0, y1) = g.y_range();
        Self {
            x0,
            x1,
            y0,
            y1,
            nx: g.nx(),
            ny: g.ny(),
            periodic_x: g.periodic_x(),
            periodic_y: g.periodic_y(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ChartSource {
    Gallery {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
    Table {
        /// Relative paths are taken from the chart file's directory.
        path: PathBuf,
        #[serde(default)]
        has_derivatives: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub compact: bool,
    pub simply_connected: bool,
    /// Defaults to 1e-6 with derivatives in the table and 1e-3 without.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conformality_tol: Option<f64>,
}

enum Base {
    Gallery(GallerySurface),
    Table { grid: ChartGrid, rows: TableRows },
}

/// A resolved chart: its spec, its topological metadata and whatever is
/// needed to sample it.
pub struct Chart {
    pub spec: ChartSpecFile,
    pub meta: ChartMeta,
    base: Base,
}

impl Chart {
    pub fn gallery(name: &str, params: &[(String, f64)]) -> Result<Self> {
        let spec = ChartSpecFile {
            name: name.to_string(),
            grid: None,
            source: ChartSource::Gallery {
                name: name.to_string(),
                params: params.iter().cloned().collect(),
            },
            metadata: None,
        };
        Self::from_spec(spec, Path::new("."))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let spec: ChartSpecFile = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::from_spec(spec, dir)
    }

    pub fn from_spec(mut spec: ChartSpecFile, dir: &Path) -> Result<Self> {
        let (meta, base) = match &mut spec.source {
            ChartSource::Gallery { name, params } => {
                let overrides: Vec<(&str, f64)> =
                    params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
                let surface = GallerySurface::new(name, &overrides)?;
                *params = surface.params.iter().cloned().collect();
                let mut meta = surface.meta.clone();
                if let Some(m) = spec.metadata {
                    meta.compact = m.compact;
                    meta.simply_connected = m.simply_connected;
                    if let Some(tol) = m.conformality_tol {
                        meta.conformality_tol = tol;
                    }
                }
                (meta, Base::Gallery(surface))
            }
            ChartSource::Table {
                path,
                has_derivatives,
            } => {
                let grid = spec
                    .grid
                    .ok_or_else(|| Error::Schema("table charts need a `grid`".into()))?
                    .to_grid()?;
                let m = spec
                    .metadata
                    .ok_or_else(|| Error::Schema("table charts need `metadata`".into()))?;
                let full = if path.is_absolute() { path.clone() } else { dir.join(&*path) };
                let table = Table::load(&full)?;
                if (table.nx, table.ny) != (grid.nx(), grid.ny()) {
                    return Err(Error::Schema(format!(
                        "{} holds a {} x {} table, chart grid is {} x {}",
                        full.display(),
                        table.nx,
                        table.ny,
                        grid.nx(),
                        grid.ny()
                    )));
                }
                if table.rows.has_derivatives() != *has_derivatives {
                    return Err(Error::Schema(format!(
                        "has_derivatives is {has_derivatives} but {} has {} columns",
                        full.display(),
                        table.rows.columns()
                    )));
                }
                let mut meta = ChartMeta::new(m.compact, m.simply_connected);
                meta.conformality_tol = m.conformality_tol.unwrap_or(if *has_derivatives {
                    TOL_CONF_ANALYTIC
                } else {
                    TOL_CONF_NUMERICAL
                });
                (
                    meta,
                    Base::Table {
                        grid,
                        rows: table.rows,
                    },
                )
            }
        };
        Ok(Self { spec, meta, base })
    }

    pub fn surface(&self) -> Option<&GallerySurface> {
        match &self.base {
            Base::Gallery(s) => Some(s),
            Base::Table { .. } => None,
        }
    }

    /// Tables have a fixed resolution; gallery charts can be sampled at any.
    pub fn resizable(&self) -> bool {
        matches!(self.base, Base::Gallery(_))
    }

    /// The chart's grid, at `resolution` when given.
    pub fn grid(&self, resolution: Option<(usize, usize)>) -> Result<ChartGrid> {
        match &self.base {
            Base::Gallery(s) => {
                let base = match self.spec.grid {
                    Some(g) => g.to_grid()?,
                    None => s.default_grid(DEFAULT_RESOLUTION, DEFAULT_RESOLUTION)?,
                };
                match resolution {
                    Some((nx, ny)) => Ok(base.with_resolution(nx, ny)?),
                    None => Ok(base),
                }
            }
            Base::Table { grid, .. } => match resolution {
                Some((nx, ny)) if (nx, ny) != (grid.nx(), grid.ny()) => Err(Error::Usage(format!(
                    "table chart is fixed at {} x {}, cannot resample to {nx} x {ny}",
                    grid.nx(),
                    grid.ny()
                ))),
                _ => Ok(*grid),
            },
        }
    }

    /// Sample the immersion on `grid`. A table chart can be sampled on its
    /// own grid or on any grid whose nodes are a regular subset of it.
    pub fn sample(&self, grid: &ChartGrid) -> Result<ImmersionSample> {
        match &self.base {
            Base::Gallery(s) => Ok(s.sample(*grid)?),
            Base::Table { grid: full, rows } => {
                let pick = subsample_indices(full, grid)?;
                match rows {
                    TableRows::Positions(p) => {
                        Ok(from_positions(*grid, pick.iter().map(|&k| p[k]).collect())?)
                    }
                    TableRows::Jets(j) => Ok(ImmersionSample::new(
                        *grid,
                        pick.iter().map(|&k| j[k]).collect(),
                        DerivativeSource::Analytic,
                    )?),
                }
            }
        }
    }

    /// Write `grid`'s samples as `<dir>/<name>.bin` next to a chart file
    /// `<dir>/<name>.json` that refers to it.
    pub fn export(
        &self,
        grid: &ChartGrid,
        dir: &Path,
        name: &str,
        positions_only: bool,
    ) -> Result<(PathBuf, PathBuf)> {
        let sample = self.sample(grid)?;
        let rows = if positions_only {
            TableRows::Positions(sample.positions())
        } else {
            TableRows::Jets(sample.points().to_vec())
        };
        let table_name = format!("{name}.bin");
        let table_path = dir.join(&table_name);
        Table {
            nx: grid.nx(),
            ny: grid.ny(),
            rows,
        }
        .save(&table_path)?;
        let spec = ChartSpecFile {
            name: name.to_string(),
            grid: Some(GridSpec::from_grid(grid)),
            source: ChartSource::Table {
                path: PathBuf::from(table_name),
                has_derivatives: !positions_only,
            },
            metadata: Some(Metadata {
                compact: self.meta.compact,
                simply_connected: self.meta.simply_connected,
                conformality_tol: Some(self.conformality_tol(positions_only)),
            }),
        };
        let json_path = dir.join(format!("{name}.json"));
        let mut text = serde_json::to_string_pretty(&spec).expect("chart spec serializes");
        text.push('\n');
        std::fs::write(&json_path, text).map_err(|e| Error::io(&json_path, e))?;
        Ok((json_path, table_path))
    }
}

impl Chart {
    /// Tolerance written into exported chart files: the chart's own, but
    /// never below what differencing positions can reach.
    fn conformality_tol(&self, positions_only: bool) -> f64 {
        if positions_only {
            self.meta.conformality_tol.max(TOL_CONF_NUMERICAL)
        } else {
            self.meta.conformality_tol
        }
    }
}

fn subsample_indices(full: &ChartGrid, g: &ChartGrid) -> Result<Vec<usize>> {
    let same_box = full.x_range() == g.x_range()
        && full.y_range() == g.y_range()
        && full.periodic_x() == g.periodic_x()
        && full.periodic_y() == g.periodic_y();
    let stride = |nf: usize, n: usize, periodic: bool| {
        let (a, b) = if periodic { (nf, n) } else { (nf - 1, n - 1) };
        (b > 0 && a % b == 0).then(|| a / b)
    };
    match (
        same_box,
        stride(full.nx(), g.nx(), g.periodic_x()),
        stride(full.ny(), g.ny(), g.periodic_y()),
    ) {
        (true, Some(sx), Some(sy)) => Ok((0..g.len())
            .map(|k| {
                let (i, j) = g.node(k);
                full.index(i * sx, j * sy)
            })
            .collect()),
        _ => Err(Error::Usage(format!(
            "{} x {} grid is not a subgrid of the {} x {} table",
            g.nx(),
            g.ny(),
            full.nx(),
            full.ny()
        ))),
    }
}
