//! Conformal invariants (u, H, h, K) of a chart and the structure-equation
//! residuals.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{d_z, d_z_dzbar, d_zbar, Axis, ChartGrid, ComplexField, DiffScheme, ScalarField};
use crate::surface::{unit_normal, ImmersionSample};
use crate::vec3::Vec3;

/// Default conformality tolerance for charts with analytic derivatives.
pub const TOL_CONF_ANALYTIC: f64 = 1e-6;
/// Default conformality tolerance for charts with numerical derivatives.
pub const TOL_CONF_NUMERICAL: f64 = 1e-3;
/// Default relative threshold of [`nonconstancy_fraction`].
pub const TOL_NONCONSTANT: f64 = 1e-6;

/// First and second fundamental form coefficients per node.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalForms {
    pub e: ScalarField,
    pub f: ScalarField,
    pub g: ScalarField,
    pub e2: ScalarField,
    pub f2: ScalarField,
    pub g2: ScalarField,
    pub normal: Vec<Vec3>,
    /// max over nodes of max(|E − G|, |F|) / max(E, G).
    pub conformality_residual: f64,
}

pub fn fundamental_forms(s: &ImmersionSample) -> Result<FundamentalForms> {
    let grid = *s.grid();
    let normal = unit_normal(s)?;
    let pts = s.points();
    let field = |f: &dyn Fn(usize) -> f64| {
        ScalarField::from_values(grid, (0..grid.len()).map(f).collect())
    };
    let e = field(&|k| pts[k].x_x.dot(pts[k].x_x))?;
    let f = field(&|k| pts[k].x_x.dot(pts[k].x_y))?;
    let g = field(&|k| pts[k].x_y.dot(pts[k].x_y))?;
    let e2 = field(&|k| normal[k].dot(pts[k].x_xx))?;
    let f2 = field(&|k| normal[k].dot(pts[k].x_xy))?;
    let g2 = field(&|k| normal[k].dot(pts[k].x_yy))?;
    let conformality_residual = (0..grid.len())
        .map(|k| {
            let (ek, fk, gk) = (e.values()[k], f.values()[k], g.values()[k]);
            (ek - gk).abs().max(fk.abs()) / ek.max(gk)
        })
        .fold(0.0, f64::max);
    Ok(FundamentalForms {
        e,
        f,
        g,
        e2,
        f2,
        g2,
        normal,
        conformality_residual,
    })
}

/// Per-node conformal invariants of a conformal chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalInvariants {
    /// e^{2u} = E.
    pub u: ScalarField,
    /// Mean curvature relative to e₃.
    pub mean: ScalarField,
    /// Hopf invariant h.
    pub hopf: ComplexField,
    /// K = H² − |h|².
    pub gauss: ScalarField,
    pub conformality_residual: f64,
}

pub fn conformal_invariants(ff: &FundamentalForms, tol_conf: f64) -> Result<ConformalInvariants> {
    if !(ff.conformality_residual < tol_conf) {
        return Err(Error::ConformalityViolation {
            residual: ff.conformality_residual,
            tol: tol_conf,
        });
    }
    let u = ff.e.map(|e| 0.5 * e.ln());
    let n = u.grid().len();
    let mean: Vec<f64> = (0..n)
        .map(|k| (ff.e2.values()[k] + ff.g2.values()[k]) / (2.0 * ff.e.values()[k]))
        .collect();
    let hopf: Vec<Complex64> = (0..n)
        .map(|k| {
            let (e2, f2, g2) = (ff.e2.values()[k], ff.f2.values()[k], ff.g2.values()[k]);
            Complex64::new(e2 - g2, -2.0 * f2) / (2.0 * ff.e.values()[k])
        })
        .collect();
    let grid = *u.grid();
    let mut ci = ConformalInvariants::from_parts(
        u,
        ScalarField::from_values(grid, mean)?,
        ComplexField::from_values(grid, hopf)?,
    )?;
    ci.conformality_residual = ff.conformality_residual;
    Ok(ci)
}

impl ConformalInvariants {
    /// Assemble invariants from u, H and h; K is derived.
    pub fn from_parts(u: ScalarField, mean: ScalarField, hopf: ComplexField) -> Result<Self> {
        let gauss = mean.zip_map(&hopf, |h_mean, h| h_mean * h_mean - h.norm_sqr())?;
        if u.grid() != mean.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            u,
            mean,
            hopf,
            gauss,
            conformality_residual: 0.0,
        })
    }

    pub fn grid(&self) -> &ChartGrid {
        self.u.grid()
    }

    /// The Hopf coefficient e^{2u}h.
    pub fn hopf_coefficient(&self) -> ComplexField {
        self.u
            .zip_map(&self.hopf, |u, h| h * (2.0 * u).exp())
            .expect("fields of one invariant set share a grid")
    }

    /// Invariants relative to −e₃.
    pub fn flipped(&self) -> Self {
        let mut out = Self::from_parts(
            self.u.clone(),
            self.mean.map(|h| -h),
            self.hopf.map(|h| -h),
        )
        .expect("same grid");
        out.conformality_residual = self.conformality_residual;
        out
    }

    /// Recover (e2, f2, g2) from u, H and h.
    pub fn second_form(&self) -> [ScalarField; 3] {
        let lam = self.u.map(|u| (2.0 * u).exp());
        let re = self.hopf.re();
        let im = self.hopf.im();
        let plus = self.mean.zip_map(&re, |a, b| a + b).unwrap();
        let minus = self.mean.zip_map(&re, |a, b| a - b).unwrap();
        [
            lam.zip_map(&plus, |l, v| l * v).unwrap(),
            lam.zip_map(&im, |l, v| -l * v).unwrap(),
            lam.zip_map(&minus, |l, v| l * v).unwrap(),
        ]
    }
}

/// |−4e^{−2u} u_zz̄ − (H² − |h|²)| per node.
pub fn gauss_residual(ci: &ConformalInvariants, scheme: &DiffScheme) -> Result<ScalarField> {
    let uzz = d_z_dzbar(&ci.u, scheme)?;
    let lhs = uzz.zip_map(&ci.u, |m, u| -4.0 * (-2.0 * u).exp() * m)?;
    lhs.zip_map(&ci.gauss, |a, k| (a - k).abs())
}

/// |(e^{2u}h)_z̄ − e^{2u}H_z| per node.
pub fn codazzi_residual(ci: &ConformalInvariants, scheme: &DiffScheme) -> Result<ScalarField> {
    let q = ci.hopf_coefficient();
    let qzb = d_zbar(&q, scheme)?;
    let hz = d_z(&ci.mean.to_complex(), scheme)?;
    let rhs = hz.zip_map(&ci.u, |h, u| h * (2.0 * u).exp())?;
    qzb.zip_map(&rhs, |a, b| (a - b).norm())
}

/// Both structure-equation residual fields and their maxima.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureResiduals {
    pub gauss: ScalarField,
    pub codazzi: ScalarField,
    pub gauss_max: f64,
    pub codazzi_max: f64,
    /// max of e^{−3u}·codazzi, the residual's pointwise norm in the surface
    /// metric; it carries the units of Δg and the Gauss residual.
    pub codazzi_metric_max: f64,
}

impl StructureResiduals {
    pub fn compute(ci: &ConformalInvariants, scheme: &DiffScheme) -> Result<Self> {
        let gauss = gauss_residual(ci, scheme)?;
        let codazzi = codazzi_residual(ci, scheme)?;
        let codazzi_metric_max = codazzi
            .zip_map(&ci.u, |c, u| c * (-3.0 * u).exp())?
            .max_abs();
        Ok(Self {
            gauss_max: gauss.max_abs(),
            codazzi_max: codazzi.max_abs(),
            codazzi_metric_max,
            gauss,
            codazzi,
        })
    }

    /// Noise level of exactly-zero curvature-type quantities on this chart
    /// and scheme: `factor` times the larger of the Gauss residual and the
    /// metric-normalised Codazzi residual. Both scale like Δg under
    /// homotheties, so the floor does too.
    pub fn floor(&self, factor: f64) -> f64 {
        factor * self.gauss_max.max(self.codazzi_metric_max)
    }
}

/// Fraction of nodes where H is not locally constant.
///
/// A node counts when its 3 × 3 neighbourhood contains a node with
/// |∇H| = 2e^{−u}|H_z| above `tol` times the squared largest curvature scale
/// max(H² + |h|²) of the chart. Isolated critical points of H therefore do
/// not pull the fraction below one.
pub fn nonconstancy_fraction(
    ci: &ConformalInvariants,
    scheme: &DiffScheme,
    tol: f64,
) -> Result<f64> {
    let grid = *ci.grid();
    let hz = d_z(&ci.mean.to_complex(), scheme)?;
    let scale = ci
        .mean
        .zip_map(&ci.hopf, |m, h| m * m + h.norm_sqr())?
        .max_abs();
    let steep: Vec<bool> = hz
        .zip_map(&ci.u, |hz, u| 2.0 * (-u).exp() * hz.norm())?
        .values()
        .iter()
        .map(|&g| g > tol * scale)
        .collect();
    let count = dilate(&grid, &steep, 1).iter().filter(|&&b| b).count();
    Ok(count as f64 / grid.len() as f64)
}

/// Grow a node set by `radius` in the max-norm, wrapping on periodic axes.
pub(crate) fn dilate(grid: &ChartGrid, set: &[bool], radius: usize) -> Vec<bool> {
    let (nx, ny) = (grid.nx() as isize, grid.ny() as isize);
    let r = radius as isize;
    let wrap = |k: isize, n: isize, periodic: bool| {
        if periodic {
            Some(k.rem_euclid(n))
        } else if (0..n).contains(&k) {
            Some(k)
        } else {
            None
        }
    };
    let mut out = alloc::vec![false; set.len()];
    for j in 0..ny {
        for i in 0..nx {
            let hit = (-r..=r).any(|dj| {
                (-r..=r).any(|di| {
                    match (
                        wrap(i + di, nx, grid.periodic(Axis::X)),
                        wrap(j + dj, ny, grid.periodic(Axis::Y)),
                    ) {
                        (Some(a), Some(b)) => set[grid.index(a as usize, b as usize)],
                        _ => false,
                    }
                })
            });
            out[grid.index(i as usize, j as usize)] = hit;
        }
    }
    out
}
