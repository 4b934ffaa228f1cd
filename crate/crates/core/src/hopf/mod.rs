//! Phase analysis of the Hopf coefficient q = e^{2u}h = e^{G+ig}.
//!
//! All phase derivatives are taken through the ratio q_z̄/q, so no global
//! branch of g is ever built and the additive 2πk ambiguity never appears.

mod classify;
mod invariance;

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{d_z, d_z_dzbar, d_zbar, Axis, ChartGrid, ComplexField, DiffScheme, ScalarField};
use crate::invariants::{dilate, ConformalInvariants};

pub use classify::{classify, Branch, Classification, ClassifyConfig, SurfaceKind};
pub use invariance::{chart_invariance_check, InvarianceConfig, InvarianceReport, Reparametrization};

/// Default relative umbilic threshold.
pub const TOL_UMBILIC: f64 = 1e-5;
/// Largest connected masked set (in nodes) still counted as an isolated
/// umbilic.
pub const MAX_DISCRETE_COMPONENT: usize = 9;
/// Nodes within this many grid steps of the mask are low-confidence.
pub const LOW_CONFIDENCE_RADIUS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct UmbilicReport {
    pub mask: Vec<bool>,
    pub masked: usize,
    pub components: usize,
    pub largest_component: usize,
    /// Every connected masked set is at most [`MAX_DISCRETE_COMPONENT`]
    /// nodes.
    pub discrete: bool,
    pub all_masked: bool,
    /// Median of e^{2u}·√(H² + |h|²).
    pub reference_scale: f64,
    pub tol: f64,
}

/// Mark nodes where e^{2u}|h| ≤ tol_umb · median(e^{2u}√(H² + |h|²)).
///
/// The reference uses the full curvature scale rather than |h| alone so that
/// charts which are umbilic on more than half their nodes (the round sphere)
/// are still recognised.
pub fn umbilic_mask(ci: &ConformalInvariants, tol_umb: f64) -> UmbilicReport {
    let grid = *ci.grid();
    let n = grid.len();
    let lam: Vec<f64> = ci.u.values().iter().map(|u| (2.0 * u).exp()).collect();
    let hmod: Vec<f64> = (0..n).map(|k| lam[k] * ci.hopf.values()[k].norm()).collect();
    let mut scale: Vec<f64> = (0..n)
        .map(|k| {
            let (m, h) = (ci.mean.values()[k], ci.hopf.values()[k]);
            lam[k] * (m * m + h.norm_sqr()).sqrt()
        })
        .collect();
    scale.sort_by(|a, b| a.total_cmp(b));
    let reference_scale = if n % 2 == 1 {
        scale[n / 2]
    } else {
        0.5 * (scale[n / 2 - 1] + scale[n / 2])
    };
    let mask: Vec<bool> = hmod.iter().map(|&m| m <= tol_umb * reference_scale).collect();
    let sizes = components(&grid, &mask);
    let masked = mask.iter().filter(|&&b| b).count();
    UmbilicReport {
        masked,
        components: sizes.len(),
        largest_component: sizes.iter().copied().max().unwrap_or(0),
        discrete: sizes.iter().all(|&s| s <= MAX_DISCRETE_COMPONENT),
        all_masked: masked == n,
        reference_scale,
        tol: tol_umb,
        mask,
    }
}

/// Sizes of the 4-connected components of `set`, wrapping periodic axes.
fn components(grid: &ChartGrid, set: &[bool]) -> Vec<usize> {
    let mut seen = vec![false; set.len()];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..set.len() {
        if !set[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut size = 0;
        while let Some(k) = queue.pop_front() {
            size += 1;
            for nb in neighbours4(grid, k).into_iter().flatten() {
                if set[nb] && !seen[nb] {
                    seen[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

/// The four axis neighbours of node `k`, `None` past an open edge.
pub(crate) fn neighbours4(grid: &ChartGrid, k: usize) -> [Option<usize>; 4] {
    let (i, j) = grid.node(k);
    let step = |c: usize, d: isize, axis: Axis| -> Option<usize> {
        let n = grid.count(axis) as isize;
        let c = c as isize + d;
        if grid.periodic(axis) {
            Some(c.rem_euclid(n) as usize)
        } else if (0..n).contains(&c) {
            Some(c as usize)
        } else {
            None
        }
    };
    [
        step(i, -1, Axis::X).map(|a| grid.index(a, j)),
        step(i, 1, Axis::X).map(|a| grid.index(a, j)),
        step(j, -1, Axis::Y).map(|b| grid.index(i, b)),
        step(j, 1, Axis::Y).map(|b| grid.index(i, b)),
    ]
}

/// Φ = q_z̄/q, Ψ = ∂_zΦ and Δg = 4e^{−2u} Im Ψ for q = e^{2u}h.
#[derive(Debug, Clone, PartialEq)]
pub struct LogHopfDerivatives {
    /// G_z̄ + i g_z̄; zero on masked nodes.
    pub phi: ComplexField,
    /// G_z̄z + i g_z̄z; zero on masked nodes.
    pub psi: ComplexField,
    /// Laplace–Beltrami of the phase g; zero on masked nodes.
    pub delta_g: ScalarField,
    pub u: ScalarField,
    pub mask: Vec<bool>,
    /// Nodes within [`LOW_CONFIDENCE_RADIUS`] of the mask.
    pub low_confidence: Vec<bool>,
    pub scheme: DiffScheme,
}

pub fn log_hopf_derivatives(
    ci: &ConformalInvariants,
    mask: &[bool],
    scheme: &DiffScheme,
) -> Result<LogHopfDerivatives> {
    let grid = *ci.grid();
    if mask.len() != grid.len() {
        return Err(Error::FieldLength {
            expected: grid.len(),
            got: mask.len(),
        });
    }
    if mask.iter().all(|&m| m) {
        return Err(Error::TotallyUmbilic);
    }
    let q = ci.hopf_coefficient();
    let qz = d_z(&q, scheme)?;
    let qzb = d_zbar(&q, scheme)?;
    let qzzb = d_z_dzbar(&q, scheme)?;
    let zero = Complex64::new(0.0, 0.0);
    let (mut phi, mut psi) = (vec![zero; grid.len()], vec![zero; grid.len()]);
    for k in 0..grid.len() {
        if mask[k] {
            continue;
        }
        let qk = q.values()[k];
        let ratio = qzb.values()[k] / qk;
        phi[k] = ratio;
        psi[k] = qzzb.values()[k] / qk - qz.values()[k] / qk * ratio;
    }
    let phi = ComplexField::from_values(grid, phi)?;
    let psi = ComplexField::from_values(grid, psi)?;
    LogHopfDerivatives::assemble(phi, psi, ci.u.clone(), mask.to_vec(), *scheme)
}

impl LogHopfDerivatives {
    /// Wrap prescribed Φ, Ψ and u (synthetic data, or an external source).
    pub fn from_parts(
        phi: ComplexField,
        psi: ComplexField,
        u: ScalarField,
        mask: Vec<bool>,
        scheme: DiffScheme,
    ) -> Result<Self> {
        if phi.grid() != psi.grid() || phi.grid() != u.grid() {
            return Err(Error::GridMismatch);
        }
        Self::assemble(phi, psi, u, mask, scheme)
    }

    fn assemble(
        phi: ComplexField,
        psi: ComplexField,
        u: ScalarField,
        mask: Vec<bool>,
        scheme: DiffScheme,
    ) -> Result<Self> {
        let grid = *phi.grid();
        let mut delta_g = psi.zip_map(&u, |p, u| 4.0 * (-2.0 * u).exp() * p.im)?;
        let masked = mask.clone();
        let dg: Vec<f64> = delta_g
            .values()
            .iter()
            .zip(&masked)
            .map(|(&v, &m)| if m { 0.0 } else { v })
            .collect();
        delta_g = ScalarField::from_values(grid, dg)?;
        let low_confidence = dilate(&grid, &mask, LOW_CONFIDENCE_RADIUS);
        Ok(Self {
            phi,
            psi,
            delta_g,
            u,
            mask,
            low_confidence,
            scheme,
        })
    }

    pub fn grid(&self) -> &ChartGrid {
        self.phi.grid()
    }

    pub fn unmasked(&self) -> usize {
        self.mask.iter().filter(|&&m| !m).count()
    }

    /// max |Δg| over unmasked nodes.
    pub fn max_abs_delta_g(&self) -> f64 {
        let keep: Vec<bool> = self.mask.iter().map(|&m| !m).collect();
        self.delta_g.max_abs_where(&keep)
    }
}

#[cfg(test)]
mod tests;
#[cfg(test)]
extern crate std;
