//! Closed-form surfaces with derivatives from Taylor jets.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use super::perturbed::PerturbedTorus;
use super::revolution::{ProfileCurve, RevolutionChart};
use super::{check_period, ChartMeta, Immersion, ImmersionSample, PointJet};
use crate::error::{Error, Result};
use crate::grid::{Axis, ChartGrid};
use crate::jet::{Jet, JetVec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub doc: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    pub constraint: &'static str,
    pub compact: bool,
    pub simply_connected: bool,
}

const fn p(name: &'static str, default: f64, doc: &'static str) -> ParamSpec {
    ParamSpec { name, default, doc }
}

const SCALE: ParamSpec = p("c", 1.0, "homothety factor (c > 0)");

static GALLERY: [GalleryEntry; 8] = [
    GalleryEntry {
        name: "plane",
        summary: "X = (x, y, 0)",
        params: &[],
        constraint: "",
        compact: false,
        simply_connected: true,
    },
    GalleryEntry {
        name: "cylinder",
        summary: "X = r(cos x, sin x, y), x periodic",
        params: &[p("radius", 1.0, "cylinder radius r (r > 0)")],
        constraint: "radius > 0",
        compact: false,
        simply_connected: true,
    },
    GalleryEntry {
        name: "sphere-mercator",
        summary: "X = r(sech y cos x, sech y sin x, tanh y), poles excluded",
        params: &[p("radius", 1.0, "sphere radius r (r > 0)")],
        constraint: "radius > 0",
        compact: false,
        simply_connected: true,
    },
    GalleryEntry {
        name: "catenoid",
        summary: "X = c(cosh y cos x, cosh y sin x, y), x periodic",
        params: &[SCALE],
        constraint: "c > 0",
        compact: false,
        simply_connected: true,
    },
    GalleryEntry {
        name: "helicoid",
        summary: "X = c(sinh y sin x, -sinh y cos x, x)",
        params: &[SCALE],
        constraint: "c > 0",
        compact: false,
        simply_connected: true,
    },
    GalleryEntry {
        name: "torus-of-revolution",
        summary: "circle of radius a about an axis at distance R, isothermal (x, t) chart",
        params: &[
            p("R", 2.0, "distance of the profile centre from the axis"),
            p("a", 1.0, "profile circle radius"),
        ],
        constraint: "0 < a < R",
        compact: true,
        simply_connected: false,
    },
    GalleryEntry {
        name: "ellipsoid-of-revolution",
        summary: "spheroid with semi-axes (a, a, b) in an isothermal chart, poles excluded",
        params: &[
            p("a", 1.0, "equatorial semi-axis"),
            p("b", 0.6, "polar semi-axis"),
            p("cutoff", 0.2, "profile angle removed around each pole"),
        ],
        constraint: "a > 0, b > 0, 0 < cutoff < pi/2",
        compact: false,
        simply_connected: true,
    },
    GalleryEntry {
        name: "perturbed-torus",
        summary: "torus-of-revolution with a first-order conformal normal bump",
        params: &[
            p("R", 2.0, "distance of the profile centre from the axis"),
            p("a", 1.0, "profile circle radius"),
            p("eps", 0.05, "bump amplitude"),
        ],
        constraint: "0 < a < R, |eps| <= 0.2",
        compact: true,
        simply_connected: false,
    },
];

pub fn gallery() -> &'static [GalleryEntry] {
    &GALLERY
}

pub fn lookup(name: &str) -> Result<&'static GalleryEntry> {
    GALLERY
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownGalleryEntry(name.into()))
}

/// A gallery entry instantiated with concrete parameters.
pub struct GallerySurface {
    pub entry: &'static GalleryEntry,
    /// Every parameter with its resolved value, in declaration order.
    pub params: Vec<(String, f64)>,
    pub meta: ChartMeta,
    x_range: (f64, f64),
    y_range: (f64, f64),
    periods: (Option<f64>, Option<f64>),
    imm: Box<dyn Immersion>,
}

impl core::fmt::Debug for GallerySurface {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("GallerySurface")
            .field("name", &self.entry.name)
            .field("params", &self.params)
            .finish()
    }
}

impl GallerySurface {
    pub fn new(name: &str, overrides: &[(&str, f64)]) -> Result<Self> {
        let entry = lookup(name)?;
        for (k, _) in overrides {
            if !entry.params.iter().any(|s| s.name == *k) {
                return Err(invalid(entry, k, "unknown parameter"));
            }
        }
        let params: Vec<(String, f64)> = entry
            .params
            .iter()
            .map(|s| {
                let v = overrides
                    .iter()
                    .rev()
                    .find(|(k, _)| *k == s.name)
                    .map_or(s.default, |(_, v)| *v);
                (s.name.to_string(), v)
            })
            .collect();
        for (k, v) in &params {
            if !v.is_finite() {
                return Err(invalid(entry, k, "must be finite"));
            }
        }
        let get = |k: &str| params.iter().find(|(n, _)| n == k).map(|(_, v)| *v).unwrap();
        let positive = |k: &str| {
            if get(k) > 0.0 {
                Ok(get(k))
            } else {
                Err(invalid(entry, k, "must be positive"))
            }
        };
        let two_pi = 2.0 * PI;
        let mut meta = ChartMeta::new(entry.compact, entry.simply_connected);
        let (x_range, y_range, periods, imm): (_, _, _, Box<dyn Immersion>) = match entry.name {
            "plane" => (
                (-1.0, 1.0),
                (-1.0, 1.0),
                (None, None),
                Box::new(|x: Jet, y: Jet| JetVec3::new(x, y, Jet::constant(0.0))),
            ),
            "cylinder" => {
                let r = positive("radius")?;
                (
                    (0.0, two_pi),
                    (-1.0, 1.0),
                    (Some(two_pi), None),
                    Box::new(move |x: Jet, y: Jet| {
                        JetVec3::new(x.cos() * r, x.sin() * r, y * r)
                    }),
                )
            }
            "sphere-mercator" => {
                let r = positive("radius")?;
                (
                    (0.0, two_pi),
                    (-1.5, 1.5),
                    (Some(two_pi), None),
                    Box::new(move |x: Jet, y: Jet| {
                        let s = y.sech() * r;
                        JetVec3::new(s * x.cos(), s * x.sin(), y.tanh() * r)
                    }),
                )
            }
            "catenoid" => {
                let c = positive("c")?;
                (
                    (0.0, two_pi),
                    (-1.0, 1.0),
                    (Some(two_pi), None),
                    Box::new(move |x: Jet, y: Jet| {
                        let ch = y.cosh() * c;
                        JetVec3::new(ch * x.cos(), ch * x.sin(), y * c)
                    }),
                )
            }
            "helicoid" => {
                let c = positive("c")?;
                (
                    (-PI, PI),
                    (-1.0, 1.0),
                    (None, None),
                    Box::new(move |x: Jet, y: Jet| {
                        let sh = y.sinh() * c;
                        JetVec3::new(sh * x.sin(), -(sh * x.cos()), x * c)
                    }),
                )
            }
            "torus-of-revolution" => {
                let (big_r, a) = torus_params(entry, &get)?;
                let t = torus_period(big_r, a);
                (
                    (0.0, two_pi),
                    (0.0, t),
                    (Some(two_pi), Some(t)),
                    Box::new(move |x: Jet, y: Jet| torus_jets(big_r, a, x, y)),
                )
            }
            "ellipsoid-of-revolution" => {
                let a = positive("a")?;
                let b = positive("b")?;
                let cut = get("cutoff");
                if !(cut > 0.0 && cut < PI / 2.0) {
                    return Err(invalid(entry, "cutoff", "must lie in (0, pi/2)"));
                }
                let profile = ProfileCurve::ellipse(a, b, cut);
                let chart = RevolutionChart::new(profile, 1024)?;
                let yr = chart.t_range();
                meta.note = Some(format!(
                    "umbilics lie at the poles, excluded by the cutoff {cut}"
                ));
                ((0.0, two_pi), yr, (Some(two_pi), None), Box::new(chart))
            }
            "perturbed-torus" => {
                let (big_r, a) = torus_params(entry, &get)?;
                let eps = get("eps");
                if eps.abs() > 0.2 {
                    return Err(invalid(entry, "eps", "must satisfy |eps| <= 0.2"));
                }
                let t = torus_period(big_r, a);
                meta.conformality_tol = 1e-3;
                meta.note = Some("conformal to first order in eps; residual is measured".into());
                (
                    (0.0, two_pi),
                    (0.0, t),
                    (Some(two_pi), Some(t)),
                    Box::new(PerturbedTorus::new(big_r, a, eps)),
                )
            }
            _ => unreachable!("gallery table and builder disagree"),
        };
        Ok(Self {
            entry,
            params,
            meta,
            x_range,
            y_range,
            periods,
            imm,
        })
    }

    /// The entry's natural chart at the requested resolution.
    pub fn default_grid(&self, nx: usize, ny: usize) -> Result<ChartGrid> {
        ChartGrid::new(
            self.x_range.0,
            self.x_range.1,
            self.y_range.0,
            self.y_range.1,
            nx,
            ny,
            self.periods.0.is_some(),
            self.periods.1.is_some(),
        )
    }

    pub fn sample(&self, grid: ChartGrid) -> Result<ImmersionSample> {
        ImmersionSample::from_immersion(self, grid)
    }
}

impl Immersion for GallerySurface {
    fn eval(&self, x: f64, y: f64) -> PointJet {
        self.imm.eval(x, y)
    }

    fn check_grid(&self, grid: &ChartGrid) -> Result<()> {
        check_period(grid, Axis::X, self.periods.0)?;
        check_period(grid, Axis::Y, self.periods.1)?;
        self.imm.check_grid(grid)
    }
}

/// Sample a named gallery surface on `grid`.
pub fn sample_gallery(
    name: &str,
    params: &[(&str, f64)],
    grid: ChartGrid,
) -> Result<(ImmersionSample, ChartMeta)> {
    let s = GallerySurface::new(name, params)?;
    Ok((s.sample(grid)?, s.meta.clone()))
}

fn invalid(entry: &GalleryEntry, name: &str, reason: &str) -> Error {
    Error::InvalidParameter {
        entry: entry.name.into(),
        name: name.into(),
        reason: reason.into(),
    }
}

fn torus_params(entry: &GalleryEntry, get: &dyn Fn(&str) -> f64) -> Result<(f64, f64)> {
    let (big_r, a) = (get("R"), get("a"));
    if a <= 0.0 {
        return Err(invalid(entry, "a", "must be positive"));
    }
    if a >= big_r {
        return Err(invalid(entry, "a", "must be smaller than R"));
    }
    Ok((big_r, a))
}

/// Period of the isothermal parameter t along the profile circle.
pub(crate) fn torus_period(big_r: f64, a: f64) -> f64 {
    2.0 * PI * a / (big_r * big_r - a * a).sqrt()
}

/// Torus in the isothermal chart (x, t) with e^u = R + a cos v(t).
///
/// dt/dv = a/ρ integrates to t = 2a/√(R²−a²)·atan(k tan(v/2)) with
/// k = √((R−a)/(R+a)), inverted here in closed form.
pub(crate) fn torus_profile_angle(big_r: f64, a: f64, t: Jet) -> Jet {
    let c = (big_r * big_r - a * a).sqrt();
    let k = ((big_r - a) / (big_r + a)).sqrt();
    let half = t * (0.5 * c / a);
    half.sin().atan2(half.cos() * k) * 2.0
}

pub(crate) fn torus_jets(big_r: f64, a: f64, x: Jet, t: Jet) -> JetVec3 {
    let v = torus_profile_angle(big_r, a, t);
    let rho = v.cos() * a + big_r;
    JetVec3::new(rho * x.cos(), rho * x.sin(), v.sin() * a)
}
