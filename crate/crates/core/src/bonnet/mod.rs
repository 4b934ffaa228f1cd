//! Bonnet pairs: the deformation quadratic differential, CMC associate
//! families, zero counting by winding number, the candidate mate rotation
//! and the no-mate verdict.

mod rotation;
mod synthetic;
mod verdict;
mod winding;

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{d_zbar, ComplexField, DiffScheme, ScalarField};
use crate::invariants::{nonconstancy_fraction, ConformalInvariants, TOL_NONCONSTANT};

pub use rotation::{
    candidate_mate_rotation, mate_consistency_residuals, CandidateRotation, MateResiduals,
    MIN_SUPPORT,
};
pub use synthetic::{synthetic_grid, synthetic_log_hopf, synthetic_rotation, SyntheticMate};
pub use verdict::{theorem_verdict, verdict_for, BonnetVerdict, Surrogate, Verdict, VerdictInputs};
pub use winding::{zero_winding, zero_winding_fn, MAX_CONTOUR_SAMPLES};

/// Default agreement tolerance on u and H for a candidate pair.
pub const TOL_PAIR: f64 = 1e-10;

/// Largest nonconstancy fraction accepted by [`associate_family`].
pub const CMC_FRACTION: f64 = 0.01;

/// F = e^{2u}(h̃ − h) for two invariant sets with the same metric and H.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationDifferential {
    pub f: ComplexField,
    /// |F_z̄|.
    pub holomorphy_residual: ScalarField,
    /// ||F + e^{2u}h| − e^{2u}|h||, zero when |h̃| = |h|.
    pub modulus_residual: ScalarField,
    pub max_du: f64,
    pub max_dh: f64,
    pub holomorphy_max: f64,
    pub modulus_max: f64,
    pub f_max: f64,
    /// max |F − F(node 0)|; zero for a constant F.
    pub f_spread: f64,
}

impl DeformationDifferential {
    /// F vanishes to within `tol`, so the two sets agree.
    pub fn congruent(&self, tol: f64) -> bool {
        self.f_max <= tol
    }
}

/// Compare `ci` with a candidate mate `mate` on the same grid.
///
/// Fails with [`Error::NotACandidatePair`] when u or H differ by more than
/// `tol` anywhere.
pub fn deformation_differential(
    ci: &ConformalInvariants,
    mate: &ConformalInvariants,
    scheme: &DiffScheme,
    tol: f64,
) -> Result<DeformationDifferential> {
    if ci.grid() != mate.grid() {
        return Err(Error::GridMismatch);
    }
    let max_du = ci.u.zip_map(&mate.u, |a, b| a - b)?.max_abs();
    let max_dh = ci.mean.zip_map(&mate.mean, |a, b| a - b)?.max_abs();
    if !(max_du <= tol && max_dh <= tol) {
        return Err(Error::NotACandidatePair { max_du, max_dh });
    }
    let q = ci.hopf_coefficient();
    let f = ci.u.zip_map(&mate.hopf.zip_map(&ci.hopf, |a, b| a - b)?, |u, d| {
        d * (2.0 * u).exp()
    })?;
    let holomorphy_residual = d_zbar(&f, scheme)?.abs();
    let modulus_residual = f.zip_map(&q, |f, q| ((f + q).norm() - q.norm()).abs())?;
    let f0 = f.values()[0];
    let f_spread = f.values().iter().map(|&v| (v - f0).norm()).fold(0.0, f64::max);
    Ok(DeformationDifferential {
        holomorphy_max: holomorphy_residual.max_abs(),
        modulus_max: modulus_residual.max_abs(),
        f_max: f.max_abs(),
        f_spread,
        f,
        holomorphy_residual,
        modulus_residual,
        max_du,
        max_dh,
    })
}

/// The θ-associate of a CMC chart: same u and H, h̃ = e^{iθ}h.
///
/// Refused with [`Error::NotCmc`] when H varies (Codazzi then ties the
/// phase of e^{2u}h to H_z), and with [`Error::TotallyUmbilic`] when h ≡ 0.
pub fn associate_family(
    ci: &ConformalInvariants,
    theta: f64,
    scheme: &DiffScheme,
) -> Result<ConformalInvariants> {
    let fraction = nonconstancy_fraction(ci, scheme, TOL_NONCONSTANT)?;
    if fraction > CMC_FRACTION {
        return Err(Error::NotCmc { fraction });
    }
    let scale = ci.mean.max_abs().max(f64::MIN_POSITIVE);
    if ci.hopf.max_abs() <= 1e-12 * scale || ci.hopf.max_abs() == 0.0 {
        return Err(Error::TotallyUmbilic);
    }
    let rot = Complex64::from_polar(1.0, theta);
    let hopf: Vec<Complex64> = ci.hopf.values().iter().map(|&h| h * rot).collect();
    let mut out = ConformalInvariants::from_parts(
        ci.u.clone(),
        ci.mean.clone(),
        ComplexField::from_values(*ci.grid(), hopf)?,
    )?;
    out.conformality_residual = ci.conformality_residual;
    Ok(out)
}

#[cfg(test)]
mod tests;
