//! Δg computed in a second chart w = φ(z) must agree with Δg in z.

use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::analysis::{analyze, AnalysisConfig};
use crate::error::{Error, Result};
use crate::grid::{interpolate, AxisScheme, ChartGrid, DiffScheme};
use crate::surface::{Immersion, ImmersionSample, PointJet};

/// Built-in holomorphic chart changes w = φ(z).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case", tag = "kind"))]
pub enum Reparametrization {
    /// w = a z + b.
    Affine { a: Complex64, b: Complex64 },
    /// w = z + ε z².
    Quadratic { eps: Complex64 },
}

impl Reparametrization {
    pub fn rotation(alpha: f64) -> Self {
        Self::Affine {
            a: Complex64::from_polar(1.0, alpha),
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn quadratic(eps: f64) -> Self {
        Self::Quadratic {
            eps: Complex64::new(eps, 0.0),
        }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        match *self {
            Self::Affine { a, b } => a * z + b,
            Self::Quadratic { eps } => z + eps * z * z,
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match *self {
            Self::Affine { a, .. } => a,
            Self::Quadratic { eps } => 1.0 + 2.0 * eps * z,
        }
    }

    pub fn second_derivative(&self, _z: Complex64) -> Complex64 {
        match *self {
            Self::Affine { .. } => Complex64::new(0.0, 0.0),
            Self::Quadratic { eps } => 2.0 * eps,
        }
    }

    /// Solve φ(z) = w by Newton's method from `guess`.
    pub fn invert(&self, w: Complex64, guess: Complex64) -> Result<Complex64> {
        let mut z = guess;
        for _ in 0..60 {
            let d = self.derivative(z);
            if d.norm() < 1e-12 {
                return Err(Error::DegenerateReparametrization(d.norm()));
            }
            let step = (self.apply(z) - w) / d;
            z -= step;
            if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                return Ok(z);
            }
        }
        let r = (self.apply(z) - w).norm();
        if r <= 1e-12 * (1.0 + w.norm()) {
            Ok(z)
        } else {
            Err(Error::DegenerateReparametrization(self.derivative(z).norm()))
        }
    }
}

impl fmt::Display for Reparametrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Affine { a, b } => write!(f, "w = ({a}) z + ({b})"),
            Self::Quadratic { eps } => write!(f, "w = z + ({eps}) z^2"),
        }
    }
}

/// The immersion seen through w: Y(w) = X(φ⁻¹(w)).
struct Pulled<'a> {
    imm: &'a dyn Immersion,
    map: Reparametrization,
    z_center: Complex64,
    w_center: Complex64,
}

impl Pulled<'_> {
    fn preimage(&self, w: Complex64) -> Result<Complex64> {
        let guess = self.z_center + (w - self.w_center) / self.map.derivative(self.z_center);
        self.map.invert(w, guess)
    }
}

impl Immersion for Pulled<'_> {
    fn eval(&self, p: f64, q: f64) -> PointJet {
        let z = match self.preimage(Complex64::new(p, q)) {
            Ok(z) => z,
            Err(_) => return nan_point(),
        };
        let x = self.imm.eval(z.re, z.im);
        // z = ψ(w) holomorphic: ψ′ = 1/φ′, ψ″ = −φ″ ψ′³
        let d1 = 1.0 / self.map.derivative(z);
        let d2 = -self.map.second_derivative(z) * d1 * d1 * d1;
        let (a, b) = (d1.re, d1.im);
        let (c, d) = (d2.re, d2.im);
        // x_p = a, y_p = b, x_q = −b, y_q = a; second partials from ψ″
        let (xp, yp, xq, yq) = (a, b, -b, a);
        let (xpp, ypp, xpq, ypq, xqq, yqq) = (c, d, -d, c, -c, -d);
        PointJet {
            x: x.x,
            x_x: x.x_x * xp + x.x_y * yp,
            x_y: x.x_x * xq + x.x_y * yq,
            x_xx: x.x_xx * (xp * xp) + x.x_xy * (2.0 * xp * yp) + x.x_yy * (yp * yp)
                + x.x_x * xpp
                + x.x_y * ypp,
            x_xy: x.x_xx * (xp * xq) + x.x_xy * (xp * yq + xq * yp) + x.x_yy * (yp * yq)
                + x.x_x * xpq
                + x.x_y * ypq,
            x_yy: x.x_xx * (xq * xq) + x.x_xy * (2.0 * xq * yq) + x.x_yy * (yq * yq)
                + x.x_x * xqq
                + x.x_y * yqq,
        }
    }
}

fn nan_point() -> PointJet {
    let n = crate::vec3::Vec3::new(f64::NAN, f64::NAN, f64::NAN);
    PointJet::from_array([n; 6])
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InvarianceConfig {
    pub analysis: AnalysisConfig,
    /// Nodes per side of the w-patch.
    pub patch_nodes: usize,
    /// Radius of the z-region covered, as a fraction of the shorter chart
    /// half-span.
    pub patch_fraction: f64,
}

impl Default for InvarianceConfig {
    fn default() -> Self {
        Self {
            analysis: AnalysisConfig::default(),
            patch_nodes: 65,
            patch_fraction: 0.6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct InvarianceReport {
    pub map: Reparametrization,
    /// max |Δg(z(w)) − Δĝ(w)| over compared nodes.
    pub residual: f64,
    /// Max structure residual in the z-chart.
    pub structure_z: f64,
    /// Max structure residual on the w-patch.
    pub structure_w: f64,
    /// floor_factor × max(structure_z, structure_w).
    pub floor: f64,
    pub compared: usize,
    pub patch: ChartGrid,
    pub patch_scheme: DiffScheme,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.residual < self.floor
    }
}

/// Recompute Δg on a w-patch with fourth-order differences and compare it
/// with the z-chart values interpolated to the same points.
///
/// Δg is a function on the surface, so the two must agree up to truncation.
/// The patch is centred on the image of the chart centre.
pub fn chart_invariance_check(
    imm: &dyn Immersion,
    grid: ChartGrid,
    scheme: &DiffScheme,
    map: Reparametrization,
    config: &InvarianceConfig,
) -> Result<InvarianceReport> {
    let sample = ImmersionSample::from_immersion(imm, grid)?;
    let az = analyze(&sample, scheme, &config.analysis)?;
    let lz = az.log_hopf.as_ref().ok_or(Error::TotallyUmbilic)?;

    let (x0, x1) = grid.x_range();
    let (y0, y1) = grid.y_range();
    let z_center = Complex64::new(0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let d = map.derivative(z_center);
    if d.norm() < 1e-12 {
        return Err(Error::DegenerateReparametrization(d.norm()));
    }
    let w_center = map.apply(z_center);
    let rho = config.patch_fraction * 0.5 * (x1 - x0).min(y1 - y0);
    let half = 0.9 * d.norm() * rho / core::f64::consts::SQRT_2;
    let n = config.patch_nodes;
    let patch = ChartGrid::new(
        w_center.re - half,
        w_center.re + half,
        w_center.im - half,
        w_center.im + half,
        n,
        n,
        false,
        false,
    )?;
    let pulled = Pulled {
        imm,
        map,
        z_center,
        w_center,
    };
    let mut pre = alloc::vec::Vec::with_capacity(patch.len());
    for k in 0..patch.len() {
        let (i, j) = patch.node(k);
        let z = pulled.preimage(patch.z(i, j))?;
        let dz = map.derivative(z).norm();
        if dz < 1e-12 {
            return Err(Error::DegenerateReparametrization(dz));
        }
        let inside = |c: f64, lo: f64, hi: f64, periodic: bool| periodic || (lo..=hi).contains(&c);
        if !inside(z.re, x0, x1, grid.periodic_x()) || !inside(z.im, y0, y1, grid.periodic_y()) {
            return Err(Error::InvalidGrid(alloc::format!(
                "w-patch node ({i}, {j}) maps outside the z-chart"
            )));
        }
        pre.push(z);
    }
    let sample_w = ImmersionSample::from_immersion(&pulled, patch)?;
    let patch_scheme = DiffScheme::uniform(AxisScheme::Fd4);
    let aw = analyze(&sample_w, &patch_scheme, &config.analysis)?;
    let lw = aw.log_hopf.as_ref().ok_or(Error::TotallyUmbilic)?;

    let mut residual: f64 = 0.0;
    let mut compared = 0;
    for (k, z) in pre.iter().enumerate() {
        if lw.low_confidence[k] {
            continue;
        }
        let (iz, jz) = nearest(&grid, *z);
        if lz.low_confidence[grid.index(iz, jz)] {
            continue;
        }
        let dg_z = interpolate(&lz.delta_g, z.re, z.im)?;
        residual = residual.max((dg_z - lw.delta_g.values()[k]).abs());
        compared += 1;
    }
    let structure_z = az.residuals.floor(1.0);
    let structure_w = aw.residuals.floor(1.0);
    Ok(InvarianceReport {
        map,
        residual,
        structure_z,
        structure_w,
        floor: config.analysis.classify.floor_factor * structure_z.max(structure_w),
        compared,
        patch,
        patch_scheme,
    })
}

fn nearest(grid: &ChartGrid, z: Complex64) -> (usize, usize) {
    let idx = |c: f64, lo: f64, h: f64, n: usize, periodic: bool| {
        let k = ((c - lo) / h).round() as isize;
        if periodic {
            k.rem_euclid(n as isize) as usize
        } else {
            k.clamp(0, n as isize - 1) as usize
        }
    };
    (
        idx(z.re, grid.x_range().0, grid.hx(), grid.nx(), grid.periodic_x()),
        idx(z.im, grid.y_range().0, grid.hy(), grid.ny(), grid.periodic_y()),
    )
}
