//! One chart through the core: analysis, verdict, associates and
//! refinement studies, each producing a report.

use bonnetlab_core::analysis::{analyze, Analysis, AnalysisConfig};
use bonnetlab_core::bonnet::{
    associate_family, candidate_mate_rotation, deformation_differential, mate_consistency_residuals,
    verdict_for, TOL_PAIR,
};
use bonnetlab_core::grid::{AxisScheme, ChartGrid, ConvergenceSeries, DiffScheme};
use bonnetlab_core::hopf::{chart_invariance_check, InvarianceConfig, Reparametrization};
use bonnetlab_core::surface::DerivativeSource;

use crate::chart::{Chart, ChartSpecFile, GridSpec};
use crate::error::{Error, Result};
use crate::report::{
    ComplexValue, Conformality, ConvergeReport, Deformation, InvariantStats, MateBlock, Report,
    Residuals, SchemeEcho, SeriesBlock, Thresholds, SCHEMA_VERSION, TOOL_VERSION,
};

/// Coarsest resolution of a gallery refinement study when none is given:
/// 16 on periodic axes, 17 elsewhere so that refined grids nest.
pub fn default_level(periodic: bool) -> usize {
    if periodic {
        16
    } else {
        17
    }
}

/// Map used for the Δg invariance series.
pub const INVARIANCE_EPS: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SchemeChoice {
    Fd2,
    Fd4,
    SpectralAuto,
}

impl SchemeChoice {
    pub fn label(self) -> &'static str {
        match self {
            SchemeChoice::Fd2 => "fd2",
            SchemeChoice::Fd4 => "fd4",
            SchemeChoice::SpectralAuto => "spectral-auto",
        }
    }

    pub fn scheme(self, grid: &ChartGrid) -> DiffScheme {
        match self {
            SchemeChoice::Fd2 => DiffScheme::uniform(AxisScheme::Fd2),
            SchemeChoice::Fd4 => DiffScheme::uniform(AxisScheme::Fd4),
            SchemeChoice::SpectralAuto => DiffScheme::spectral_auto(grid),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub resolution: Option<(usize, usize)>,
    pub scheme: SchemeChoice,
    /// Overrides the chart's own conformality tolerance.
    pub tol_conf: Option<f64>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            resolution: None,
            scheme: SchemeChoice::SpectralAuto,
            tol_conf: None,
        }
    }
}

impl Options {
    fn config(&self, chart: &Chart) -> AnalysisConfig {
        AnalysisConfig::with_tol_conf(self.tol_conf.unwrap_or(chart.meta.conformality_tol))
    }
}

/// An analysed chart.
pub struct Run {
    pub grid: ChartGrid,
    pub scheme: DiffScheme,
    pub config: AnalysisConfig,
    pub source: DerivativeSource,
    pub analysis: Analysis,
    echo: ChartSpecFile,
    requested: SchemeChoice,
}

pub fn run(chart: &Chart, opts: &Options) -> Result<Run> {
    let grid = chart.grid(opts.resolution)?;
    let scheme = opts.scheme.scheme(&grid);
    let config = opts.config(chart);
    let sample = chart.sample(&grid)?;
    let analysis = analyze(&sample, &scheme, &config)?;
    let mut echo = chart.spec.clone();
    echo.grid = Some(GridSpec::from_grid(&grid));
    Ok(Run {
        grid,
        scheme,
        config,
        source: sample.source(),
        analysis,
        echo,
        requested: opts.scheme,
    })
}

impl Run {
    pub fn report(&self, command: &'static str) -> Report {
        let a = &self.analysis;
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            command,
            chart: self.echo.clone(),
            derivative_source: self.source,
            resolution: (&self.grid).into(),
            scheme: SchemeEcho::new(self.requested.label(), &self.scheme),
            conformality: Conformality {
                residual: a.invariants.conformality_residual,
                tol: self.config.tol_conf,
            },
            invariants: InvariantStats::of(&a.invariants),
            residuals: Residuals {
                gauss_max: a.residuals.gauss_max,
                codazzi_max: a.residuals.codazzi_max,
                codazzi_metric_max: a.residuals.codazzi_metric_max,
                floor: a.floor,
            },
            umbilics: (&a.umbilics).into(),
            classification: a.classification.clone(),
            verdict: None,
            mate: None,
            thresholds: Thresholds::new(self.config.tol_conf, self.config.classify),
        }
    }

    pub fn verdict_report(&self, chart: &Chart) -> Report {
        let mut r = self.report("verdict");
        r.verdict = Some(verdict_for(&self.analysis, &chart.meta));
        r
    }

    /// Build the θ-associate and compare it with the chart.
    pub fn mate_report(&self, theta: f64) -> Result<Report> {
        let ci = &self.analysis.invariants;
        let assoc = associate_family(ci, theta, &self.scheme)?;
        let dd = deformation_differential(ci, &assoc, &self.scheme, TOL_PAIR)?;
        let q = assoc.hopf_coefficient();
        let q0 = q.values()[0];
        let spread = q.values().iter().map(|&v| (v - q0).norm()).fold(0.0, f64::max);
        let f0 = dd.f.values()[0];
        let mut r = self.report("mate");
        r.mate = Some(MateBlock {
            theta,
            associate: InvariantStats::of(&assoc),
            associate_hopf_coefficient: ComplexValue { re: q0.re, im: q0.im },
            associate_hopf_coefficient_spread: spread,
            deformation: Deformation {
                max_du: dd.max_du,
                max_dh: dd.max_dh,
                f_max: dd.f_max,
                f_spread: dd.f_spread,
                f_at_origin_node: ComplexValue { re: f0.re, im: f0.im },
                holomorphy_max: dd.holomorphy_max,
                modulus_max: dd.modulus_max,
                congruent: dd.congruent(TOL_PAIR),
            },
        });
        Ok(r)
    }
}

/// Refinement study over `levels` grids.
///
/// Gallery charts start from `opts.resolution` (or [`default_level`]) and
/// refine.
/// Table charts end at the table's own grid and are coarsened by
/// subsampling, so the finest level is the data as given.
pub fn converge(chart: &Chart, opts: &Options, levels: usize) -> Result<ConvergeReport> {
    if levels < 2 {
        return Err(Error::Usage(format!("need at least 2 levels, got {levels}")));
    }
    let grids = level_grids(chart, opts, levels)?;
    let config = opts.config(chart);
    let names = ["gauss", "codazzi", "deltag-invariance", "rotation-r3"];
    let mut table: Vec<std::result::Result<Vec<f64>, String>> = vec![Ok(Vec::new()); names.len()];
    let mut source = DerivativeSource::Analytic;
    let mut echo_scheme = None;
    for g in &grids {
        let scheme = opts.scheme.scheme(g);
        echo_scheme.get_or_insert(scheme);
        let sample = chart.sample(g)?;
        source = sample.source();
        let a = analyze(&sample, &scheme, &config)?;
        let errors = [
            Ok(a.residuals.gauss_max),
            Ok(a.residuals.codazzi_max),
            invariance_residual(chart, g, &scheme, &config),
            rotation_r3(&a),
        ];
        for (col, e) in table.iter_mut().zip(errors) {
            let failed = match (&mut *col, e) {
                (Err(_), _) => None,
                (Ok(v), Ok(x)) if x.is_finite() => {
                    v.push(x);
                    None
                }
                (Ok(_), Ok(x)) => Some(format!("non-finite value {x}")),
                (Ok(_), Err(m)) => Some(m),
            };
            if let Some(m) = failed {
                *col = Err(format!("{m} (at {} x {})", g.nx(), g.ny()));
            }
        }
    }
    let series = names
        .iter()
        .zip(table)
        .map(|(&name, col)| match col {
            Ok(errors) => SeriesBlock {
                name,
                series: Some(ConvergenceSeries::from_errors(name.to_string(), errors)),
                unavailable: None,
            },
            Err(m) => SeriesBlock {
                name,
                series: None,
                unavailable: Some(m),
            },
        })
        .collect();
    let mut echo = chart.spec.clone();
    echo.grid = grids.last().map(GridSpec::from_grid);
    Ok(ConvergeReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        command: "converge",
        chart: echo,
        derivative_source: source,
        scheme: SchemeEcho::new(opts.scheme.label(), &echo_scheme.expect("at least two levels")),
        levels: grids.iter().map(Into::into).collect(),
        series,
        invariance_map: "w = z + 0.1 z^2",
        thresholds: Thresholds::new(config.tol_conf, config.classify),
    })
}

fn level_grids(chart: &Chart, opts: &Options, levels: usize) -> Result<Vec<ChartGrid>> {
    if chart.resizable() {
        let res = match opts.resolution {
            Some(r) => r,
            None => {
                let base = chart.grid(None)?;
                (
                    default_level(base.periodic_x()),
                    default_level(base.periodic_y()),
                )
            }
        };
        let mut g = chart.grid(Some(res))?;
        let mut out = Vec::with_capacity(levels);
        for _ in 0..levels {
            out.push(g);
            g = g.refined();
        }
        Ok(out)
    } else {
        let mut g = chart.grid(opts.resolution)?;
        let mut out = vec![g];
        for _ in 1..levels {
            g = g.coarsened()?;
            out.push(g);
        }
        out.reverse();
        Ok(out)
    }
}

fn invariance_residual(
    chart: &Chart,
    grid: &ChartGrid,
    scheme: &DiffScheme,
    config: &AnalysisConfig,
) -> std::result::Result<f64, String> {
    let surface = chart
        .surface()
        .ok_or("needs an analytic immersion to resample in the w-chart")?;
    // the w-patch refines with the chart so that both truncation errors shrink
    let patch_nodes = grid.nx().max(grid.ny()) | 1;
    let cfg = InvarianceConfig {
        analysis: *config,
        patch_nodes,
        ..InvarianceConfig::default()
    };
    chart_invariance_check(
        surface,
        *grid,
        scheme,
        Reparametrization::quadratic(INVARIANCE_EPS),
        &cfg,
    )
    .map(|r| r.residual)
    .map_err(|e| e.to_string())
}

fn rotation_r3(a: &Analysis) -> std::result::Result<f64, String> {
    let lh = a.log_hopf.as_ref().ok_or("every node is umbilic")?;
    let cr = candidate_mate_rotation(lh, a.floor).map_err(|e| e.to_string())?;
    if cr.fully_degenerate() {
        return Err("candidate rotation is degenerate everywhere (isothermic locus)".into());
    }
    let local = DiffScheme::uniform(AxisScheme::Fd4);
    mate_consistency_residuals(lh, &cr, &local)
        .map(|r| r.r3_max)
        .map_err(|e| e.to_string())
}
