use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{
    d_z_dzbar, d_zbar, line_operator, Axis, ComplexField, Derivative, DiffScheme, ScalarField,
};
use crate::hopf::{neighbours4, Branch, LogHopfDerivatives};

/// Fewest nodes on which [`mate_consistency_residuals`] will differentiate r.
pub const MIN_SUPPORT: usize = 16;

const DIAGNOSTIC_ISOTHERMIC: &str = "candidate degenerate: isothermic locus";

/// The rotation A = e^{ir} a mate would need, read off Φ and Ψ.
///
/// With L = |Φ|² − Re Ψ, g = Im Ψ and D = g² + L²,
/// A = 1 + (−2g/D)(g + iL).
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateRotation {
    pub a: ComplexField,
    /// arg A in (0, 2π) on valid nodes, 0 elsewhere.
    pub r: ScalarField,
    /// Δg at or below `floor`, or D below floor·(1 + |Ψ|²). A is set to 1.
    pub degenerate: Vec<bool>,
    /// |A − 1| ≤ floor on a non-degenerate node.
    pub near_identity: Vec<bool>,
    /// Unmasked, non-degenerate and not near the identity.
    pub valid: Vec<bool>,
    pub unmasked: usize,
    pub degenerate_count: usize,
    pub near_identity_count: usize,
    /// max ||A| − 1| over non-degenerate unmasked nodes.
    pub unit_modulus_max: f64,
    pub floor: f64,
    /// Majority sign of Δg over valid nodes.
    pub branch: Option<Branch>,
    pub diagnostic: Option<&'static str>,
}

impl CandidateRotation {
    pub fn fully_degenerate(&self) -> bool {
        self.degenerate_count == self.unmasked
    }

    pub fn degenerate_fraction(&self) -> f64 {
        if self.unmasked == 0 {
            1.0
        } else {
            self.degenerate_count as f64 / self.unmasked as f64
        }
    }

    /// r on the Δg ≤ 0 branch, 2π − r (that is −r mod 2π) on the other.
    pub fn oriented_r(&self) -> ScalarField {
        match self.branch {
            Some(Branch::DeltaGNonnegative) => {
                let v = self
                    .r
                    .values()
                    .iter()
                    .zip(&self.valid)
                    .map(|(&r, &ok)| if ok { 2.0 * PI - r } else { 0.0 })
                    .collect();
                ScalarField::from_values(*self.r.grid(), v).expect("same grid")
            }
            _ => self.r.clone(),
        }
    }
}

/// Build A and r node by node.
///
/// `floor` is the "identically zero" level for Δg on this chart; the same
/// number bounds D relative to 1 + |Ψ|² and |A − 1|.
pub fn candidate_mate_rotation(lh: &LogHopfDerivatives, floor: f64) -> Result<CandidateRotation> {
    let grid = *lh.grid();
    let n = grid.len();
    if lh.mask.iter().all(|&m| m) {
        return Err(Error::TotallyUmbilic);
    }
    let one = Complex64::new(1.0, 0.0);
    let mut a = vec![one; n];
    let mut r = vec![0.0; n];
    let mut degenerate = vec![false; n];
    let mut near_identity = vec![false; n];
    let mut valid = vec![false; n];
    let mut unit_modulus_max = 0.0f64;
    let (mut pos, mut neg) = (0usize, 0usize);
    for k in 0..n {
        if lh.mask[k] {
            continue;
        }
        let phi = lh.phi.values()[k];
        let psi = lh.psi.values()[k];
        let g = psi.im;
        let l = phi.norm_sqr() - psi.re;
        let d = g * g + l * l;
        if lh.delta_g.values()[k].abs() <= floor || d < floor * (1.0 + psi.norm_sqr()) {
            degenerate[k] = true;
            continue;
        }
        let ak = one + Complex64::new(g, l) * (-2.0 * g / d);
        unit_modulus_max = unit_modulus_max.max((ak.norm() - 1.0).abs());
        a[k] = ak;
        if (ak - one).norm() <= floor {
            near_identity[k] = true;
            continue;
        }
        let mut arg = ak.arg();
        if arg <= 0.0 {
            arg += 2.0 * PI;
        }
        r[k] = arg;
        valid[k] = true;
        if lh.delta_g.values()[k] > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    let unmasked = lh.unmasked();
    let degenerate_count = degenerate.iter().filter(|&&b| b).count();
    let branch = match (pos, neg) {
        (0, 0) => None,
        _ if neg >= pos => Some(Branch::DeltaGNonpositive),
        _ => Some(Branch::DeltaGNonnegative),
    };
    Ok(CandidateRotation {
        a: ComplexField::from_values(grid, a)?,
        r: ScalarField::from_values(grid, r)?,
        near_identity_count: near_identity.iter().filter(|&&b| b).count(),
        degenerate,
        near_identity,
        valid,
        unmasked,
        degenerate_count,
        unit_modulus_max,
        floor,
        branch,
        diagnostic: (degenerate_count == unmasked).then_some(DIAGNOSTIC_ISOTHERMIC),
    })
}

/// Residuals of the identities a genuine mate rotation must satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct MateResiduals {
    /// Nodes where r was differentiated.
    pub support: Vec<bool>,
    pub support_nodes: usize,
    /// Valid nodes dropped because a neighbour differs by more than π.
    pub excluded_wrap: usize,
    /// |r_z̄ − iΦ(1 − e^{−ir})|.
    pub r1: ScalarField,
    /// |r_zz̄|, the isothermic form of the identity.
    pub r1a: ScalarField,
    /// |r_zz̄ + 2 Im Ψ|.
    pub r3: ScalarField,
    /// Δr + 2Δg with Δ = 4e^{−2u}∂_z∂_z̄.
    pub sign_law: ScalarField,
    /// Δ of the branch-oriented r.
    pub delta_r: ScalarField,
    pub r1_max: f64,
    pub r1a_max: f64,
    pub r3_max: f64,
    pub sign_law_max: f64,
    /// Fraction of support nodes with Δ(oriented r) ≥ −floor.
    pub subharmonic_fraction: f64,
    /// max − min of the oriented r over the support.
    pub r_range: f64,
}

/// Differentiate r where it is smooth and evaluate the mate identities.
///
/// Nodes next to a jump in r larger than π are dropped, then the set is
/// eroded so every stencil used at a kept node reads only kept nodes.
pub fn mate_consistency_residuals(
    lh: &LogHopfDerivatives,
    cr: &CandidateRotation,
    scheme: &DiffScheme,
) -> Result<MateResiduals> {
    let grid = *lh.grid();
    if cr.r.grid() != &grid {
        return Err(Error::GridMismatch);
    }
    let n = grid.len();
    let r = cr.r.values();
    let mut smooth = vec![false; n];
    let mut excluded_wrap = 0;
    for k in 0..n {
        if !cr.valid[k] || lh.low_confidence[k] {
            continue;
        }
        let jump = neighbours4(&grid, k)
            .iter()
            .flatten()
            .any(|&nb| cr.valid[nb] && (r[nb] - r[k]).abs() > PI);
        if jump {
            excluded_wrap += 1;
        } else {
            smooth[k] = true;
        }
    }
    let support = erode(&grid, scheme, &smooth)?;
    let support_nodes = support.iter().filter(|&&b| b).count();
    if support_nodes < MIN_SUPPORT {
        return Err(Error::InsufficientSupport {
            nodes: support_nodes,
        });
    }

    let rc = cr.r.to_complex();
    let r_zb = d_zbar(&rc, scheme)?;
    let r_zzb = d_z_dzbar(&cr.r, scheme)?;
    let oriented = cr.oriented_r();
    let or_zzb = d_z_dzbar(&oriented, scheme)?;
    let i = Complex64::new(0.0, 1.0);

    let mut r1 = vec![0.0; n];
    let mut r1a = vec![0.0; n];
    let mut r3 = vec![0.0; n];
    let mut sign_law = vec![0.0; n];
    let mut delta_r = vec![0.0; n];
    let (mut sub, mut lo, mut hi) = (0usize, f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..n {
        if !support[k] {
            continue;
        }
        let phi = lh.phi.values()[k];
        let psi = lh.psi.values()[k];
        let lam = 4.0 * (-2.0 * lh.u.values()[k]).exp();
        let e = Complex64::from_polar(1.0, -r[k]);
        r1[k] = (r_zb.values()[k] - i * phi * (1.0 - e)).norm();
        r1a[k] = r_zzb.values()[k].abs();
        r3[k] = (r_zzb.values()[k] + 2.0 * psi.im).abs();
        sign_law[k] = lam * r_zzb.values()[k] + 2.0 * lh.delta_g.values()[k];
        delta_r[k] = lam * or_zzb.values()[k];
        if delta_r[k] >= -cr.floor {
            sub += 1;
        }
        let o = oriented.values()[k];
        lo = lo.min(o);
        hi = hi.max(o);
    }
    let r1 = ScalarField::from_values(grid, r1)?;
    let r1a = ScalarField::from_values(grid, r1a)?;
    let r3 = ScalarField::from_values(grid, r3)?;
    let sign_law = ScalarField::from_values(grid, sign_law)?;
    Ok(MateResiduals {
        r1_max: r1.max_abs(),
        r1a_max: r1a.max_abs(),
        r3_max: r3.max_abs(),
        sign_law_max: sign_law.max_abs(),
        subharmonic_fraction: sub as f64 / support_nodes as f64,
        r_range: hi - lo,
        delta_r: ScalarField::from_values(grid, delta_r)?,
        support,
        support_nodes,
        excluded_wrap,
        r1,
        r1a,
        r3,
        sign_law,
    })
}

/// Keep a node only if every first- and second-derivative stencil applied
/// at it reads kept nodes.
fn erode(
    grid: &crate::grid::ChartGrid,
    scheme: &DiffScheme,
    set: &[bool],
) -> Result<Vec<bool>> {
    let mut reach: [Vec<Vec<usize>>; 2] = [Vec::new(), Vec::new()];
    for (slot, axis) in [Axis::X, Axis::Y].into_iter().enumerate() {
        let first = line_operator(grid, scheme, axis, Derivative::First)?;
        let second = line_operator(grid, scheme, axis, Derivative::Second)?;
        reach[slot] = first
            .rows
            .iter()
            .zip(&second.rows)
            .map(|(a, b)| {
                let mut q: Vec<usize> = a.iter().chain(b).map(|&(q, _)| q).collect();
                q.sort_unstable();
                q.dedup();
                q
            })
            .collect();
    }
    let mut out = vec![false; set.len()];
    for (k, o) in out.iter_mut().enumerate() {
        if !set[k] {
            continue;
        }
        let (i, j) = grid.node(k);
        *o = reach[0][i].iter().all(|&a| set[grid.index(a, j)])
            && reach[1][j].iter().all(|&b| set[grid.index(i, b)]);
    }
    Ok(out)
}
