use super::*;
use crate::analysis::{analyze, Analysis, AnalysisConfig};
use crate::grid::laplace_beltrami;
use crate::invariants::ConformalInvariants;
use crate::surface::GallerySurface;

fn run(name: &str, params: &[(&str, f64)], nx: usize, ny: usize) -> Analysis {
    let s = GallerySurface::new(name, params).unwrap();
    let g = s.default_grid(nx, ny).unwrap();
    let cfg = AnalysisConfig::with_tol_conf(s.meta.conformality_tol);
    analyze(&s.sample(g).unwrap(), &DiffScheme::spectral_auto(&g), &cfg).unwrap()
}

#[test]
fn sphere_short_circuits_to_totally_umbilic() {
    let a = run("sphere-mercator", &[], 32, 32);
    assert!(a.umbilics.all_masked);
    assert!(a.log_hopf.is_none());
    assert_eq!(a.classification.kind, SurfaceKind::TotallyUmbilic);
    let err = log_hopf_derivatives(&a.invariants, &a.umbilics.mask, &a.scheme).unwrap_err();
    assert_eq!(err, Error::TotallyUmbilic);
}

#[test]
fn plane_is_totally_umbilic() {
    assert_eq!(run("plane", &[], 16, 16).classification.kind, SurfaceKind::TotallyUmbilic);
}

#[test]
fn catenoid_and_cylinder_have_constant_hopf_coefficient() {
    for name in ["catenoid", "cylinder"] {
        let a = run(name, &[], 32, 33);
        assert_eq!(a.umbilics.masked, 0, "{name}");
        let lh = a.log_hopf.as_ref().unwrap();
        assert!(lh.phi.max_abs() < 1e-12, "{name}");
        assert!(lh.psi.max_abs() < 1e-11, "{name}");
        assert!(lh.delta_g.max_abs() < 1e-10, "{name}");
        assert_eq!(a.classification.kind, SurfaceKind::Cmc, "{name}");
    }
}

#[test]
fn ellipsoid_chart_has_no_umbilics() {
    let a = run("ellipsoid-of-revolution", &[], 32, 48);
    assert_eq!(a.umbilics.masked, 0);
    assert!(a.umbilics.discrete);
    assert_eq!(a.classification.kind, SurfaceKind::Isothermic);
}

#[test]
fn torus_is_isothermic() {
    let a = run("torus-of-revolution", &[], 64, 64);
    let lh = a.log_hopf.as_ref().unwrap();
    // q = e^{2u}h is real here, so g is constant and g_z̄z = Im Ψ vanishes;
    // Im Φ = ½(G_y + g_x) does not
    assert!(a.invariants.hopf_coefficient().im().max_abs() < 1e-13);
    assert!(lh.psi.im().max_abs() < 1e-9);
    assert!(a.classification.max_abs_delta_g <= a.floor, "{:?}", a.classification);
    assert_eq!(a.classification.kind, SurfaceKind::Isothermic);
}

#[test]
fn perturbed_torus_is_not_isothermic() {
    let a = run("perturbed-torus", &[], 64, 64);
    let c = &a.classification;
    assert!(c.kind != SurfaceKind::Isothermic, "{c:?}");
    assert!(c.max_abs_delta_g > c.floor);
    let total = c.fraction_positive + c.fraction_negative + c.fraction_below_floor;
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn constant_phase_rotation_leaves_log_derivatives_unchanged() {
    let a = run("perturbed-torus", &[], 32, 32);
    let ci = &a.invariants;
    let rot = Complex64::from_polar(1.0, 2.3);
    let turned =
        ConformalInvariants::from_parts(ci.u.clone(), ci.mean.clone(), ci.hopf.map(|h| h * rot))
            .unwrap();
    let l0 = a.log_hopf.as_ref().unwrap();
    let l1 = log_hopf_derivatives(&turned, &a.umbilics.mask, &a.scheme).unwrap();
    let scale = l0.psi.max_abs();
    assert!(l0.phi.zip_map(&l1.phi, |p, q| p - q).unwrap().max_abs() < 1e-13 * scale.max(1.0));
    assert!(l0.psi.zip_map(&l1.psi, |p, q| p - q).unwrap().max_abs() < 1e-12 * scale);
    let dg = l0.delta_g.max_abs();
    assert!(l0.delta_g.zip_map(&l1.delta_g, |p, q| p - q).unwrap().max_abs() < 1e-12 * dg);
}

#[test]
fn homothety_scales_delta_g_by_inverse_square() {
    let s = GallerySurface::new("perturbed-torus", &[]).unwrap();
    let g = s.default_grid(32, 32).unwrap();
    let scheme = DiffScheme::spectral_auto(&g);
    let cfg = AnalysisConfig::with_tol_conf(1e-3);
    let base = s.sample(g).unwrap();
    let a = analyze(&base, &scheme, &cfg).unwrap();
    let lambda = 3.0;
    let b = analyze(&base.scaled(lambda), &scheme, &cfg).unwrap();
    let (la, lb) = (a.log_hopf.unwrap(), b.log_hopf.unwrap());
    let scale = la.psi.max_abs();
    assert!(la.psi.zip_map(&lb.psi, |p, q| p - q).unwrap().max_abs() < 1e-11 * scale);
    let dg = la.delta_g.max_abs();
    let err = la
        .delta_g
        .zip_map(&lb.delta_g, |p, q| p - lambda * lambda * q)
        .unwrap()
        .max_abs();
    assert!(err < 1e-11 * dg);
    assert_eq!(a.classification.kind, b.classification.kind);
}

#[test]
fn delta_g_matches_laplacian_of_unwrapped_phase() {
    // q stays near the positive real axis on the perturbed torus, so arg q is
    // already a smooth branch
    let a = run("perturbed-torus", &[], 64, 64);
    let q = a.invariants.hopf_coefficient();
    assert!(q.values().iter().all(|v| v.re > 0.0));
    let g = q.map(|v| v.im.atan2(v.re));
    let lb = laplace_beltrami(&g, &a.invariants.u, &a.scheme).unwrap();
    let lh = a.log_hopf.unwrap();
    let err = lb.value.zip_map(&lh.delta_g, |p, q| p - q).unwrap().max_abs();
    assert!(err < 1e-8 * lh.delta_g.max_abs(), "{err}");
}

#[test]
fn mask_components_and_discreteness() {
    let grid = ChartGrid::new(0.0, 1.0, 0.0, 1.0, 10, 10, true, false).unwrap();
    let mut set = vec![false; 100];
    // one node at the wrap seam joined across it, one 12-node strip
    set[grid.index(0, 2)] = true;
    set[grid.index(9, 2)] = true;
    for i in 0..6 {
        set[grid.index(i, 6)] = true;
        set[grid.index(i, 7)] = true;
    }
    let mut sizes = components(&grid, &set);
    sizes.sort_unstable();
    assert_eq!(sizes, vec![2, 12]);
}

#[test]
fn invariance_under_affine_map_on_catenoid() {
    let s = GallerySurface::new("catenoid", &[]).unwrap();
    let g = s.default_grid(64, 65).unwrap();
    let map = Reparametrization::Affine {
        a: Complex64::new(2.0, 0.0),
        b: Complex64::new(1.0, 0.0),
    };
    let rep = chart_invariance_check(&s, g, &DiffScheme::spectral_auto(&g), map, &InvarianceConfig::default())
        .unwrap();
    assert!(rep.residual < 1e-9, "{rep:?}");
    assert!(rep.compared > 1000);
}

#[test]
fn invariance_under_rotation_on_torus() {
    let s = GallerySurface::new("torus-of-revolution", &[]).unwrap();
    let g = s.default_grid(64, 64).unwrap();
    let map = Reparametrization::rotation(core::f64::consts::FRAC_PI_4);
    let rep = chart_invariance_check(&s, g, &DiffScheme::spectral_auto(&g), map, &InvarianceConfig::default())
        .unwrap();
    assert!(rep.passed(), "{rep:?}");
}

#[test]
fn invariance_under_quadratic_map_on_perturbed_torus() {
    let s = GallerySurface::new("perturbed-torus", &[]).unwrap();
    let g = s.default_grid(64, 64).unwrap();
    let cfg = InvarianceConfig {
        analysis: AnalysisConfig::with_tol_conf(1e-3),
        ..InvarianceConfig::default()
    };
    let rep = chart_invariance_check(
        &s,
        g,
        &DiffScheme::spectral_auto(&g),
        Reparametrization::quadratic(0.1),
        &cfg,
    )
    .unwrap();
    assert!(rep.passed(), "{rep:?}");
}

#[test]
fn reparametrization_inverse() {
    let m = Reparametrization::quadratic(0.1);
    let z = Complex64::new(0.7, -0.4);
    let back = m.invert(m.apply(z), Complex64::new(0.0, 0.0)).unwrap();
    assert!((back - z).norm() < 1e-14);
}

