use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::*;
use crate::analysis::{analyze, Analysis, AnalysisConfig};
use crate::error::Error;
use crate::grid::{d_z_dzbar, AxisScheme, ChartGrid, ConvergenceSeries};
use crate::hopf::{LogHopfDerivatives, SurfaceKind};
use crate::surface::GallerySurface;

fn run(name: &str, params: &[(&str, f64)], nx: usize, ny: usize) -> (Analysis, GallerySurface) {
    let s = GallerySurface::new(name, params).unwrap();
    let g = s.default_grid(nx, ny).unwrap();
    let cfg = AnalysisConfig::with_tol_conf(s.meta.conformality_tol);
    let a = analyze(&s.sample(g).unwrap(), &DiffScheme::spectral_auto(&g), &cfg).unwrap();
    (a, s)
}

#[test]
fn identical_sets_give_zero_differential() {
    let (a, _) = run("catenoid", &[], 32, 33);
    let d = deformation_differential(&a.invariants, &a.invariants, &a.scheme, TOL_PAIR).unwrap();
    assert_eq!(d.f_max, 0.0);
    assert!(d.congruent(0.0));
    assert_eq!(d.holomorphy_max, 0.0);
}

#[test]
fn catenoid_associate_gives_constant_holomorphic_differential() {
    let (a, _) = run("catenoid", &[], 64, 65);
    let theta = FRAC_PI_2;
    let mate = associate_family(&a.invariants, theta, &a.scheme).unwrap();
    let d = deformation_differential(&a.invariants, &mate, &a.scheme, TOL_PAIR).unwrap();
    assert_eq!(d.max_du, 0.0);
    assert_eq!(d.max_dh, 0.0);
    // e^{2u}h ≡ −1, so F = 1 − e^{iθ}
    let expect = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, theta);
    for &f in d.f.values() {
        assert!((f - expect).norm() < 1e-12, "{f}");
    }
    assert!(d.f_spread < 1e-12);
    assert!(d.holomorphy_max < 1e-8, "{}", d.holomorphy_max);
    assert!(d.modulus_max < 1e-10, "{}", d.modulus_max);
}

#[test]
fn catenoid_quarter_associate_matches_helicoid_chart() {
    // the helicoid is not periodic in x, so both use an open chart
    let g = ChartGrid::new(0.0, 2.0, -1.0, 1.0, 33, 33, false, false).unwrap();
    let scheme = DiffScheme::uniform(AxisScheme::Fd4);
    let ci = |name: &str| {
        let s = GallerySurface::new(name, &[]).unwrap();
        analyze(&s.sample(g).unwrap(), &scheme, &AnalysisConfig::default()).unwrap()
    };
    let (cat, hel) = (ci("catenoid"), ci("helicoid"));
    let mate = associate_family(&cat.invariants, FRAC_PI_2, &scheme).unwrap();
    let du = mate.u.zip_map(&hel.invariants.u, |a, b| a - b).unwrap().max_abs();
    assert!(du < 1e-12, "{du}");
    assert!(hel.invariants.mean.max_abs() < 1e-12);
    // h̃ = −i sech²y; the helicoid chart's own normal may differ by a sign
    let same = mate.hopf.zip_map(&hel.invariants.hopf, |a, b| a - b).unwrap().max_abs();
    let flipped = mate.hopf.zip_map(&hel.invariants.hopf, |a, b| a + b).unwrap().max_abs();
    assert!(same.min(flipped) < 1e-12, "{same} {flipped}");
    for j in 0..mate.grid().ny() {
        let y = mate.grid().y(j);
        let expect = Complex64::new(0.0, -1.0 / (y.cosh() * y.cosh()));
        assert!((mate.hopf.get(3, j) - expect).norm() < 1e-12);
    }
}

#[test]
fn scaled_mate_hopf_fails_modulus_check() {
    let (a, _) = run("catenoid", &[], 32, 33);
    let bad = crate::invariants::ConformalInvariants::from_parts(
        a.invariants.u.clone(),
        a.invariants.mean.clone(),
        a.invariants.hopf.map(|h| h * 1.1),
    )
    .unwrap();
    let d = deformation_differential(&a.invariants, &bad, &a.scheme, TOL_PAIR).unwrap();
    let q = a.invariants.hopf_coefficient();
    for (m, q) in d.modulus_residual.values().iter().zip(q.values()) {
        assert!((m - 0.1 * q.norm()).abs() < 1e-12);
    }
}

#[test]
fn metric_mismatch_is_not_a_candidate_pair() {
    let (a, _) = run("catenoid", &[], 32, 33);
    let other = crate::invariants::ConformalInvariants::from_parts(
        a.invariants.u.map(|u| u + 1e-3),
        a.invariants.mean.clone(),
        a.invariants.hopf.clone(),
    )
    .unwrap();
    match deformation_differential(&a.invariants, &other, &a.scheme, TOL_PAIR) {
        Err(Error::NotACandidatePair { max_du, max_dh }) => {
            assert!((max_du - 1e-3).abs() < 1e-12);
            assert_eq!(max_dh, 0.0);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn associate_family_is_periodic_and_holomorphic_around_the_circle() {
    let (a, _) = run("catenoid", &[], 32, 33);
    let id = associate_family(&a.invariants, 0.0, &a.scheme).unwrap();
    assert_eq!(id.hopf, a.invariants.hopf);
    let full = associate_family(&a.invariants, 2.0 * PI, &a.scheme).unwrap();
    let d = deformation_differential(&a.invariants, &full, &a.scheme, TOL_PAIR).unwrap();
    assert!(d.f_max < 1e-14);
    let floor = a.residuals.codazzi_max;
    for k in 0..8 {
        let theta = 2.0 * PI * k as f64 / 8.0;
        let mate = associate_family(&a.invariants, theta, &a.scheme).unwrap();
        let d = deformation_differential(&a.invariants, &mate, &a.scheme, TOL_PAIR).unwrap();
        assert!(d.holomorphy_max <= floor.max(1e-13), "θ = {theta}: {}", d.holomorphy_max);
    }
}

#[test]
fn associate_family_refuses_non_cmc_and_umbilic_charts() {
    let (torus, _) = run("torus-of-revolution", &[], 32, 32);
    assert!(matches!(
        associate_family(&torus.invariants, 1.0, &torus.scheme),
        Err(Error::NotCmc { .. })
    ));
    let (sphere, _) = run("sphere-mercator", &[], 32, 33);
    assert_eq!(
        associate_family(&sphere.invariants, 1.0, &sphere.scheme),
        Err(Error::TotallyUmbilic)
    );
}

#[test]
fn winding_of_powers() {
    for k in 1..=3 {
        let w = zero_winding_fn(|z| z.powi(k), Complex64::new(0.0, 0.0), 1.0).unwrap();
        assert_eq!(w, k as i64);
    }
    let w = zero_winding_fn(|z| z.powi(-2), Complex64::new(0.0, 0.0), 1.0).unwrap();
    assert_eq!(w, -2);
}

/// Local minima of |F| near zero on a dense grid over the unit disk.
fn brute_force_zeros(f: impl Fn(Complex64) -> Complex64, n: usize) -> usize {
    let h = 2.0 / (n - 1) as f64;
    let at = |i: usize, j: usize| Complex64::new(-1.0 + i as f64 * h, -1.0 + j as f64 * h);
    let mut count = 0;
    for j in 1..n - 1 {
        for i in 1..n - 1 {
            let z = at(i, j);
            if z.norm() >= 1.0 {
                continue;
            }
            let m = f(z).norm();
            let lower = (0..3).all(|dj| {
                (0..3).all(|di| (di == 1 && dj == 1) || f(at(i + di - 1, j + dj - 1)).norm() > m)
            });
            if lower && m < 10.0 * h {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn cubic_winding_matches_brute_force_count() {
    let f = |z: Complex64| z * z * z - 0.1 * z;
    let brute = brute_force_zeros(f, 801);
    assert_eq!(brute, 3);
    let w = zero_winding_fn(f, Complex64::new(0.0, 0.0), 1.0).unwrap();
    assert_eq!(w as usize, brute);
}

#[test]
fn winding_of_sampled_fields() {
    let g = ChartGrid::new(-1.0, 1.0, -1.0, 1.0, 96, 96, false, false).unwrap();
    let cubic = crate::grid::Field::from_fn(g, |x, y| {
        let z = Complex64::new(x, y);
        z * z * z - 0.1 * z
    });
    assert_eq!(zero_winding(&cubic, Complex64::new(0.0, 0.0), 0.9).unwrap(), 3);
    assert_eq!(zero_winding(&cubic, Complex64::new(0.3, 0.0), 0.1).unwrap(), 1);
    let bump = crate::grid::Field::from_fn(g, |x, _| Complex64::new(1.0 + 0.5 * x.sin(), 0.0));
    assert_eq!(zero_winding(&bump, Complex64::new(0.0, 0.0), 0.9).unwrap(), 0);
    assert!(matches!(
        zero_winding(&cubic, Complex64::new(0.5, 0.0), 0.9),
        Err(Error::ContourInvalid(_))
    ));
}

#[test]
fn contour_through_a_zero_is_rejected() {
    let r = zero_winding_fn(|z| z, Complex64::new(0.5, 0.0), 0.5);
    assert!(matches!(r, Err(Error::ContourInvalid(_))), "{r:?}");
}

#[test]
fn isothermic_torus_gives_fully_degenerate_rotation() {
    let (a, _) = run("torus-of-revolution", &[], 64, 64);
    let cr = candidate_mate_rotation(a.log_hopf.as_ref().unwrap(), a.floor).unwrap();
    assert!(cr.fully_degenerate());
    assert!(cr.a.values().iter().all(|&v| v == Complex64::new(1.0, 0.0)));
    assert!(cr.diagnostic.is_some());
    assert!(cr.valid.iter().all(|&v| !v));
}

#[test]
fn constant_rotation_has_zero_isothermic_residual() {
    let (a, _) = run("torus-of-revolution", &[], 32, 32);
    let lh = a.log_hopf.as_ref().unwrap();
    let mut cr = candidate_mate_rotation(lh, a.floor).unwrap();
    cr.r = cr.r.map(|_| 2.0);
    cr.valid = alloc::vec![true; cr.valid.len()];
    let res = mate_consistency_residuals(lh, &cr, &a.scheme).unwrap();
    assert!(res.r1a_max < 1e-12, "{}", res.r1a_max);
    assert_eq!(res.support_nodes, a.invariants.grid().len());
}

#[test]
fn equal_l_and_g_give_minus_i() {
    let g = synthetic_grid(9).unwrap();
    let c = 0.7;
    let lh = LogHopfDerivatives::from_parts(
        crate::grid::Field::constant(g, Complex64::new(0.0, 0.0)),
        crate::grid::Field::constant(g, Complex64::new(-c, c)),
        crate::grid::Field::constant(g, 0.0),
        alloc::vec![false; g.len()],
        DiffScheme::uniform(AxisScheme::Fd2),
    )
    .unwrap();
    let cr = candidate_mate_rotation(&lh, 1e-12).unwrap();
    for (&a, &r) in cr.a.values().iter().zip(cr.r.values()) {
        assert!((a - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((r - 1.5 * PI).abs() < 1e-15);
    }
}

#[test]
fn synthetic_data_reproduces_prescribed_rotation() {
    let g = synthetic_grid(33).unwrap();
    let s = synthetic_log_hopf(g, DiffScheme::uniform(AxisScheme::Fd4)).unwrap();
    let cr = candidate_mate_rotation(&s.log_hopf, 1e-12).unwrap();
    assert_eq!(cr.degenerate_count, 0);
    assert!(cr.unit_modulus_max < 1e-12);
    for (&r, &e) in cr.r.values().iter().zip(s.r_exact.values()) {
        assert!((r - e).abs() < 1e-12, "{r} {e}");
    }
    // Δr > 0, Δg < 0: the branch that uses r itself
    assert_eq!(cr.branch, Some(crate::hopf::Branch::DeltaGNonpositive));
}

#[test]
fn synthetic_residuals_converge_at_scheme_order() {
    for (kind, order) in [(AxisScheme::Fd2, 2.0), (AxisScheme::Fd4, 4.0)] {
        let scheme = DiffScheme::uniform(kind);
        let mut g = synthetic_grid(17).unwrap();
        let (mut r1, mut r3, mut law) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..3 {
            let s = synthetic_log_hopf(g, scheme).unwrap();
            let cr = candidate_mate_rotation(&s.log_hopf, 1e-12).unwrap();
            let res = mate_consistency_residuals(&s.log_hopf, &cr, &scheme).unwrap();
            assert_eq!(res.support_nodes, g.len());
            assert_eq!(res.excluded_wrap, 0);
            assert_eq!(res.subharmonic_fraction, 1.0);
            r1.push(res.r1_max);
            r3.push(res.r3_max);
            law.push(res.sign_law_max);
            g = g.refined();
        }
        for (name, e) in [("r1", r1), ("r3", r3), ("sign law", law)] {
            let s = ConvergenceSeries::from_errors(name.into(), e.clone());
            let p = s.order().unwrap();
            assert!(p > order - 0.3, "{kind:?} {name}: {e:?} -> {p}");
        }
    }
}

#[test]
fn sign_law_exact_field_matches() {
    let g = synthetic_grid(17).unwrap();
    let s = synthetic_log_hopf(g, DiffScheme::uniform(AxisScheme::Fd4)).unwrap();
    let sum = s
        .delta_r_exact
        .zip_map(&s.log_hopf.delta_g, |a, b| a + 2.0 * b)
        .unwrap();
    assert!(sum.max_abs() < 1e-12);
    let numeric = d_z_dzbar(&s.r_exact, &s.log_hopf.scheme).unwrap();
    assert!(numeric.zip_map(&s.delta_r_exact, |_, b| b).unwrap().min() > 0.0);
}

#[test]
fn wrap_jumps_are_excluded() {
    let g = synthetic_grid(33).unwrap();
    let s = synthetic_log_hopf(g, DiffScheme::uniform(AxisScheme::Fd2)).unwrap();
    let mut cr = candidate_mate_rotation(&s.log_hopf, 1e-12).unwrap();
    // push the right half across the branch cut
    cr.r = crate::grid::Field::from_fn(g, |x, _| if x > 0.0 { 6.2 } else { 0.1 });
    let res = mate_consistency_residuals(&s.log_hopf, &cr, &s.log_hopf.scheme).unwrap();
    assert_eq!(res.excluded_wrap, 2 * g.ny());
    assert!(res.support_nodes < g.len() - 2 * g.ny());
}

#[test]
fn tiny_support_is_refused() {
    let (a, _) = run("torus-of-revolution", &[], 32, 32);
    let lh = a.log_hopf.as_ref().unwrap();
    let cr = candidate_mate_rotation(lh, a.floor).unwrap();
    assert_eq!(
        mate_consistency_residuals(lh, &cr, &a.scheme),
        Err(Error::InsufficientSupport { nodes: 0 })
    );
}

#[test]
fn perturbed_torus_rotation_has_unit_modulus() {
    let (a, _) = run("perturbed-torus", &[], 64, 64);
    let lh = a.log_hopf.as_ref().unwrap();
    let cr = candidate_mate_rotation(lh, a.floor).unwrap();
    assert!(cr.degenerate_count < cr.unmasked);
    assert!(cr.unit_modulus_max < 1e-10, "{}", cr.unit_modulus_max);
}

#[test]
fn gallery_verdicts() {
    let (a, s) = run("torus-of-revolution", &[("R", 2.0), ("a", 1.0)], 64, 64);
    let v = verdict_for(&a, &s.meta);
    assert_eq!(v.verdict, Verdict::NoMateTheorem1, "{v:?}");
    assert_eq!(v.line, "no Bonnet mate (Theorem, clause 1: isothermic)");

    let (a, s) = run("cylinder", &[], 32, 33);
    let v = verdict_for(&a, &s.meta);
    assert_eq!(v.verdict, Verdict::CmcAssociateFamilyExists);
    assert_eq!(v.line, "CMC: associate family exists (not compact)");

    let (a, s) = run("catenoid", &[], 32, 33);
    assert_eq!(verdict_for(&a, &s.meta).verdict, Verdict::CmcAssociateFamilyExists);

    let (a, s) = run("sphere-mercator", &[], 32, 33);
    assert_eq!(verdict_for(&a, &s.meta).verdict, Verdict::TotallyUmbilic);

    let (a, s) = run("perturbed-torus", &[], 64, 64);
    let v = verdict_for(&a, &s.meta);
    assert!(
        matches!(v.verdict, Verdict::NoMateTheorem2 | Verdict::Inconclusive),
        "{v:?}"
    );
    assert!(v.surrogate.is_some());
}

#[test]
fn verdict_requires_every_hypothesis() {
    for kind in SurfaceKind::ALL {
        for bits in 0..16u8 {
            let inputs = VerdictInputs {
                kind,
                compact: bits & 1 != 0,
                h_nonconstant: bits & 2 != 0,
                umbilics_discrete: bits & 4 != 0,
                simply_connected: bits & 8 != 0,
            };
            let v = theorem_verdict(&inputs);
            let all = inputs.compact && inputs.h_nonconstant && inputs.umbilics_discrete;
            match v.verdict {
                Verdict::NoMateTheorem1 => assert!(all && kind == SurfaceKind::Isothermic),
                Verdict::NoMateTheorem2 => {
                    assert!(all && kind == SurfaceKind::TotallyNonisothermic)
                }
                Verdict::CmcAssociateFamilyExists => {
                    assert!(kind == SurfaceKind::Cmc && inputs.simply_connected)
                }
                Verdict::TotallyUmbilic => assert_eq!(kind, SurfaceKind::TotallyUmbilic),
                Verdict::Inconclusive => assert!(!v.reasons.is_empty()),
            }
            if v.verdict == Verdict::Inconclusive && kind == SurfaceKind::Isothermic {
                assert!(!all);
            }
        }
    }
}

