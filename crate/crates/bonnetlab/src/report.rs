//! JSON reports. Field order is fixed by the struct definitions, so a
//! report is byte-identical across runs on identical input.

use bonnetlab_core::bonnet::{BonnetVerdict, CMC_FRACTION, TOL_PAIR};
use bonnetlab_core::grid::{ChartGrid, ConvergenceSeries, DiffScheme, ScalarField, CONVERGED_FLOOR};
use bonnetlab_core::hopf::{Classification, ClassifyConfig, UmbilicReport};
use bonnetlab_core::invariants::ConformalInvariants;
use bonnetlab_core::surface::DerivativeSource;
use serde::Serialize;

use crate::chart::ChartSpecFile;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resolution {
    pub nx: usize,
    pub ny: usize,
}

impl From<&ChartGrid> for Resolution {
    fn from(g: &ChartGrid) -> Self {
        Self { nx: g.nx(), ny: g.ny() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeEcho {
    /// As requested on the command line.
    pub requested: String,
    pub x: &'static str,
    pub y: &'static str,
}

impl SchemeEcho {
    pub fn new(requested: &str, s: &DiffScheme) -> Self {
        Self {
            requested: requested.to_string(),
            x: s.x.label(),
            y: s.y.label(),
        }
    }

    pub fn label(&self) -> String {
        if self.x == self.y {
            self.x.to_string()
        } else {
            format!("{}/{}", self.x, self.y)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Stats {
    pub fn of(f: &ScalarField) -> Self {
        Self {
            min: f.min(),
            max: f.max(),
            mean: f.mean(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantStats {
    pub u: Stats,
    #[serde(rename = "H")]
    pub mean_curvature: Stats,
    #[serde(rename = "abs_h")]
    pub hopf_modulus: Stats,
    #[serde(rename = "K")]
    pub gauss_curvature: Stats,
}

impl InvariantStats {
    pub fn of(ci: &ConformalInvariants) -> Self {
        Self {
            u: Stats::of(&ci.u),
            mean_curvature: Stats::of(&ci.mean),
            hopf_modulus: Stats::of(&ci.hopf.abs()),
            gauss_curvature: Stats::of(&ci.gauss),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conformality {
    pub residual: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    pub gauss_max: f64,
    pub codazzi_max: f64,
    pub codazzi_metric_max: f64,
    /// floor_factor × largest structure residual.
    pub floor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Umbilics {
    pub masked: usize,
    pub components: usize,
    pub largest_component: usize,
    pub discrete: bool,
    pub all_masked: bool,
    pub reference_scale: f64,
    pub tol: f64,
}

impl From<&UmbilicReport> for Umbilics {
    fn from(u: &UmbilicReport) -> Self {
        Self {
            masked: u.masked,
            components: u.components,
            largest_component: u.largest_component,
            discrete: u.discrete,
            all_masked: u.all_masked,
            reference_scale: u.reference_scale,
            tol: u.tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub tol_conf: f64,
    #[serde(flatten)]
    pub classify: ClassifyConfig,
    /// Agreement required of u and H before two charts are compared as a pair.
    pub tol_pair: f64,
    /// Largest nonconstancy fraction accepted for an associate family.
    pub associate_cmc_fraction: f64,
    /// Errors at or below this count as converged.
    pub converged_floor: f64,
}

impl Thresholds {
    pub fn new(tol_conf: f64, classify: ClassifyConfig) -> Self {
        Self {
            tol_conf,
            classify,
            tol_pair: TOL_PAIR,
            associate_cmc_fraction: CMC_FRACTION,
            converged_floor: CONVERGED_FLOOR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deformation {
    pub max_du: f64,
    pub max_dh: f64,
    pub f_max: f64,
    /// max |F − F(node 0)|.
    pub f_spread: f64,
    pub f_at_origin_node: ComplexValue,
    pub holomorphy_max: f64,
    pub modulus_max: f64,
    pub congruent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MateBlock {
    pub theta: f64,
    pub associate: InvariantStats,
    /// e^{2u}h̃ at node 0 and its spread over the chart.
    pub associate_hopf_coefficient: ComplexValue,
    pub associate_hopf_coefficient_spread: f64,
    pub deformation: Deformation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub chart: ChartSpecFile,
    pub derivative_source: DerivativeSource,
    pub resolution: Resolution,
    pub scheme: SchemeEcho,
    pub conformality: Conformality,
    pub invariants: InvariantStats,
    pub residuals: Residuals,
    pub umbilics: Umbilics,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<BonnetVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mate: Option<MateBlock>,
    pub thresholds: Thresholds,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesBlock {
    pub name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<ConvergenceSeries>,
    /// Why the series could not be measured on every level.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unavailable: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergeReport {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub chart: ChartSpecFile,
    pub derivative_source: DerivativeSource,
    pub scheme: SchemeEcho,
    /// Coarsest first.
    pub levels: Vec<Resolution>,
    pub series: Vec<SeriesBlock>,
    /// The reparametrization used for the Δg invariance series.
    pub invariance_map: &'static str,
    pub thresholds: Thresholds,
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}
