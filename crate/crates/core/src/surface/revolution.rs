//! Isothermal charts for surfaces of revolution.
//!
//! For a profile (ρ(v), ζ(v)) the substitution t(v) = ∫ |γ′|/ρ dv turns
//! (x, v) ↦ (ρ cos x, ρ sin x, ζ) into a conformal chart in (x, t) with
//! conformal factor e^u = ρ.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use super::{check_period, Immersion, ImmersionSample, PointJet};
use crate::error::{Error, Result};
use crate::grid::{Axis, ChartGrid};
use crate::jet::{Jet, JetVec3};

type ProfileFn = dyn Fn(Jet) -> [Jet; 2] + Send + Sync;

/// A revolution profile written in terms of jets in the variable `v`.
#[derive(Clone)]
pub struct ProfileCurve {
    f: Arc<ProfileFn>,
    pub v0: f64,
    pub v1: f64,
    /// Closed profiles are periodic with period v1 − v0.
    pub closed: bool,
}

impl core::fmt::Debug for ProfileCurve {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ProfileCurve")
            .field("v0", &self.v0)
            .field("v1", &self.v1)
            .field("closed", &self.closed)
            .finish()
    }
}

impl ProfileCurve {
    /// `f` maps a jet in v to the jets of (ρ, ζ).
    pub fn new(
        v0: f64,
        v1: f64,
        closed: bool,
        f: impl Fn(Jet) -> [Jet; 2] + Send + Sync + 'static,
    ) -> Self {
        Self {
            f: Arc::new(f),
            v0,
            v1,
            closed,
        }
    }

    /// Circle of radius `a` centred at distance `big_r` from the axis.
    pub fn torus(big_r: f64, a: f64) -> Self {
        Self::new(0.0, 2.0 * PI, true, move |v| [v.cos() * a + big_r, v.sin() * a])
    }

    /// Half ellipse with semi-axes `a` (radial) and `b` (axial), minus
    /// `cutoff` at each pole.
    pub fn ellipse(a: f64, b: f64, cutoff: f64) -> Self {
        Self::new(cutoff, PI - cutoff, false, move |v| [v.sin() * a, -(v.cos() * b)])
    }

    /// Unit circle about a diameter.
    pub fn unit_sphere(cutoff: f64) -> Self {
        Self::ellipse(1.0, 1.0, cutoff)
    }

    /// ρ = 1, ζ = v on [0, len].
    pub fn straight(len: f64) -> Self {
        Self::new(0.0, len, false, |v| [Jet::constant(1.0), v])
    }

    pub fn jets(&self, v: Jet) -> [Jet; 2] {
        (self.f)(v)
    }

    /// (ρ, ρ′, ρ″) and (ζ, ζ′, ζ″) at v.
    pub fn eval(&self, v: f64) -> ([f64; 3], [f64; 3]) {
        let [r, z] = self.jets(Jet::var_x(v));
        ([r.value(), r.d_x(), r.d_xx()], [z.value(), z.d_x(), z.d_xx()])
    }

    /// Integrand |γ′|/ρ of the isothermal parameter.
    fn weight(&self, v: f64) -> f64 {
        let ([r, dr, _], [_, dz, _]) = self.eval(v);
        (dr * dr + dz * dz).sqrt() / r
    }
}

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

fn gauss_legendre(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS.iter())
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Isothermal (x, t) chart of a surface of revolution.
#[derive(Debug, Clone)]
pub struct RevolutionChart {
    profile: ProfileCurve,
    vb: Vec<f64>,
    tb: Vec<f64>,
}

impl RevolutionChart {
    /// Tabulate t(v) on max(4·ny, 256) Gauss–Legendre panels.
    pub fn new(profile: ProfileCurve, ny: usize) -> Result<Self> {
        let (v0, v1) = (profile.v0, profile.v1);
        if !(v1 > v0) || !v0.is_finite() || !v1.is_finite() {
            return Err(Error::InvalidParameter {
                entry: "profile".into(),
                name: "v-range".into(),
                reason: format!("[{v0}, {v1}] is empty"),
            });
        }
        let panels = (4 * ny).max(256);
        let check = |v: f64| -> Result<()> {
            let ([r, dr, _], [_, dz, _]) = profile.eval(v);
            if !(r > 0.0) || !(dr * dr + dz * dz > 0.0) {
                return Err(Error::InvalidParameter {
                    entry: "profile".into(),
                    name: "rho".into(),
                    reason: format!("profile must have ρ > 0 and (ρ′, ζ′) ≠ 0; fails at v = {v}"),
                });
            }
            Ok(())
        };
        let w = |v: f64| profile.weight(v);
        let integrate = |m: usize| -> Result<(Vec<f64>, Vec<f64>)> {
            let h = (v1 - v0) / m as f64;
            let mut vb = Vec::with_capacity(m + 1);
            let mut tb = Vec::with_capacity(m + 1);
            vb.push(v0);
            tb.push(0.0);
            for k in 0..m {
                let a = v0 + k as f64 * h;
                let b = if k + 1 == m { v1 } else { a + h };
                check(a)?;
                let dt = gauss_legendre(&w, a, b);
                if !(dt > 0.0) || !dt.is_finite() {
                    return Err(Error::QuadratureFailure(format!(
                        "non-positive increment on [{a}, {b}]"
                    )));
                }
                vb.push(b);
                tb.push(tb[k] + dt);
            }
            check(v1)?;
            Ok((vb, tb))
        };
        let (vb, tb) = integrate(panels)?;
        let (_, fine) = integrate(2 * panels)?;
        let (coarse_t, fine_t) = (tb[panels], fine[2 * panels]);
        if (coarse_t - fine_t).abs() > 1e-11 * fine_t.max(1.0) {
            return Err(Error::QuadratureFailure(format!(
                "t-length {coarse_t} vs {fine_t} on doubled panels"
            )));
        }
        Ok(Self { profile, vb, tb })
    }

    pub fn profile(&self) -> &ProfileCurve {
        &self.profile
    }

    /// Total isothermal length (the period for closed profiles).
    pub fn length(&self) -> f64 {
        *self.tb.last().unwrap()
    }

    pub fn t_range(&self) -> (f64, f64) {
        (0.0, self.length())
    }

    fn panel_t(&self, k: usize, v: f64) -> f64 {
        let w = |s: f64| self.profile.weight(s);
        self.tb[k] + gauss_legendre(&w, self.vb[k], v)
    }

    /// t(v) measured from the start of the profile.
    pub fn t_of_v(&self, v: f64) -> f64 {
        let (v0, v1) = (self.profile.v0, self.profile.v1);
        let (shift, v) = self.wrap(v, v1 - v0, v0, self.length());
        let k = self.vb.partition_point(|&b| b <= v).clamp(1, self.vb.len() - 1) - 1;
        shift + self.panel_t(k, v)
    }

    /// For closed profiles, reduce `s` into its fundamental range and return
    /// the offset to add back in the other variable.
    fn wrap(&self, s: f64, period: f64, start: f64, other: f64) -> (f64, f64) {
        if !self.profile.closed {
            return (0.0, s);
        }
        let n = ((s - start) / period).floor();
        (n * other, s - n * period)
    }

    /// Invert t(v) by Newton's method from a piecewise-linear guess.
    pub fn v_of_t(&self, t: f64) -> f64 {
        let (v0, v1) = (self.profile.v0, self.profile.v1);
        let (shift, t) = self.wrap(t, self.length(), 0.0, v1 - v0);
        let k = self.tb.partition_point(|&b| b <= t).clamp(1, self.tb.len() - 1) - 1;
        let (ta, tb) = (self.tb[k], self.tb[k + 1]);
        let (va, vb) = (self.vb[k], self.vb[k + 1]);
        let mut v = va + (t - ta) / (tb - ta) * (vb - va);
        for _ in 0..30 {
            let step = (self.panel_t(k, v) - t) / self.profile.weight(v);
            v -= step;
            if step.abs() <= 1e-15 * (1.0 + v.abs()) {
                break;
            }
        }
        v + shift
    }
}

impl Immersion for RevolutionChart {
    fn eval(&self, x: f64, t: f64) -> PointJet {
        let v = self.v_of_t(t);
        let ([r, dr, ddr], [_, dz, ddz]) = self.profile.eval(v);
        let s = (dr * dr + dz * dz).sqrt();
        let ds = (dr * ddr + dz * ddz) / s;
        let v1 = r / s;
        let v2 = v1 * (dr * s - r * ds) / (s * s);
        let d = Jet::var_y(t) - t;
        let vj = (d * v1 + d * d * (0.5 * v2) + v).truncate(2);
        let [rho, zeta] = self.profile.jets(vj);
        let xj = Jet::var_x(x);
        PointJet::from_jets(&JetVec3::new(rho * xj.cos(), rho * xj.sin(), zeta))
    }

    fn check_grid(&self, grid: &ChartGrid) -> Result<()> {
        check_period(grid, Axis::X, Some(2.0 * PI))?;
        if self.profile.closed {
            return check_period(grid, Axis::Y, Some(self.length()));
        }
        check_period(grid, Axis::Y, None)?;
        let (a, b) = grid.y_range();
        let tol = 1e-9 * self.length();
        if a < -tol || b > self.length() + tol {
            return Err(Error::InvalidGrid(format!(
                "t-range [{a}, {b}] leaves the profile's [0, {}]",
                self.length()
            )));
        }
        Ok(())
    }
}

/// Build the isothermal chart of `profile` and sample it on its natural
/// nx × ny grid: x ∈ [0, 2π) periodic, t over the full profile, periodic
/// in t when the profile is closed.
pub fn make_revolution_chart(
    profile: ProfileCurve,
    nx: usize,
    ny: usize,
) -> Result<(ImmersionSample, RevolutionChart)> {
    let chart = RevolutionChart::new(profile, ny)?;
    let closed = chart.profile.closed;
    let grid = ChartGrid::new(0.0, 2.0 * PI, 0.0, chart.length(), nx, ny, true, closed)?;
    let sample = ImmersionSample::from_immersion(&chart, grid)?;
    Ok((sample, chart))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::GallerySurface;

    fn conformality(s: &ImmersionSample) -> f64 {
        s.points()
            .iter()
            .map(|p| {
                let (e, f, g) = (p.x_x.dot(p.x_x), p.x_x.dot(p.x_y), p.x_y.dot(p.x_y));
                (e - g).abs().max(f.abs()) / e.max(g)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn torus_parameter_matches_half_angle_closed_form() {
        let (big_r, a) = (2.0, 1.0);
        let chart = RevolutionChart::new(ProfileCurve::torus(big_r, a), 64).unwrap();
        let c = (big_r * big_r - a * a).sqrt();
        let k = ((big_r - a) / (big_r + a)).sqrt();
        let exact = |v: f64| 2.0 * a / c * (k * (v / 2.0).tan()).atan();
        for &v in &[0.1, 0.9, 2.0, 3.0] {
            assert!((chart.t_of_v(v) - exact(v)).abs() < 1e-13);
        }
        assert!((chart.length() - 2.0 * PI * a / c).abs() < 1e-13);
        for &t in &[0.0, 0.5, 2.2, 3.6, 7.0, -1.0] {
            assert!((chart.t_of_v(chart.v_of_t(t)) - t).abs() < 1e-13);
        }
    }

    #[test]
    fn torus_chart_is_conformal_with_factor_rho() {
        let (s, chart) = make_revolution_chart(ProfileCurve::torus(2.0, 1.0), 32, 32).unwrap();
        assert!(s.grid().is_torus());
        assert!(conformality(&s) < 1e-8);
        let g = *s.grid();
        for (k, p) in s.points().iter().enumerate() {
            let (_, j) = g.node(k);
            let v = chart.v_of_t(g.y(j));
            let rho = 2.0 + v.cos();
            assert!((p.x_x.dot(p.x_x) - rho * rho).abs() < 1e-12);
        }
    }

    #[test]
    fn torus_chart_agrees_with_closed_form_gallery_entry() {
        let (s, _) = make_revolution_chart(ProfileCurve::torus(2.0, 1.0), 16, 16).unwrap();
        let gal = GallerySurface::new("torus-of-revolution", &[]).unwrap();
        let ref_sample = gal.sample(*s.grid()).unwrap();
        for (p, q) in s.points().iter().zip(ref_sample.points()) {
            for (a, b) in p.as_array().iter().zip(q.as_array().iter()) {
                assert!((*a - *b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn sphere_profile_reproduces_mercator() {
        let cut = 0.3;
        let chart = RevolutionChart::new(ProfileCurve::unit_sphere(cut), 64).unwrap();
        let merc = GallerySurface::new("sphere-mercator", &[]).unwrap();
        let offset = (cut / 2.0).tan().ln();
        for &t in &[0.05, 0.7, 1.5, chart.length() - 0.01] {
            let p = chart.eval(0.4, t);
            let q = merc.eval(0.4, t + offset);
            // e^u = ρ = sech y
            assert!((p.x_x.norm() - (t + offset).cosh().recip()).abs() < 1e-8);
            for (a, b) in p.as_array().iter().zip(q.as_array().iter()) {
                assert!((*a - *b).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn straight_profile_is_the_unit_cylinder() {
        let (s, chart) = make_revolution_chart(ProfileCurve::straight(2.0), 16, 9).unwrap();
        assert!((chart.length() - 2.0).abs() < 1e-14);
        for p in s.points() {
            assert!((p.x_x.norm() - 1.0).abs() < 1e-14);
            assert!((p.x_y - crate::vec3::Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn profile_touching_the_axis_is_rejected() {
        let bad = ProfileCurve::unit_sphere(0.0);
        assert!(matches!(
            RevolutionChart::new(bad, 16),
            Err(Error::InvalidParameter { .. })
        ));
    }
}
