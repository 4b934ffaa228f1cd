//! Log-Hopf data built backwards from a prescribed rotation r.
//!
//! Given r with values in (0, 2π), set E = e^{−ir} and
//! Φ = −i r_z̄ / (1 − E), Ψ = ∂_zΦ. This Φ makes (e^{G+ig}(e^{ir} − 1))_z̄
//! vanish, and the rotation formula returns A = e^{ir} exactly, so every
//! mate identity holds analytically.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Result;
use crate::grid::{ChartGrid, ComplexField, DiffScheme, ScalarField};
use crate::hopf::LogHopfDerivatives;
use crate::jet::Jet;

/// The prescribed rotation. Δr ≥ 0.225 on [−1, 1]², and r stays in
/// [π − 1.1, π + 1.9].
pub fn synthetic_rotation(x: Jet, y: Jet) -> Jet {
    let pi = Jet::constant(core::f64::consts::PI);
    pi + x * 0.6
        + (y + x * 0.5).sin() * 0.3
        + (y * 2.0 - x).cos() * 0.2
        + (x * x + y * y) * 0.4
}

fn synthetic_u(x: f64, y: f64) -> f64 {
    0.2 * libm::cos(x - y)
}

/// [−1, 1]², non-periodic, n × n nodes.
pub fn synthetic_grid(n: usize) -> Result<ChartGrid> {
    ChartGrid::new(-1.0, 1.0, -1.0, 1.0, n, n, false, false)
}

/// Synthetic data together with the exact rotation it encodes.
#[derive(Debug, Clone)]
pub struct SyntheticMate {
    pub log_hopf: LogHopfDerivatives,
    pub r_exact: ScalarField,
    /// Exact Δr + 2Δg is zero; this is the exact Δr.
    pub delta_r_exact: ScalarField,
}

pub fn synthetic_log_hopf(grid: ChartGrid, scheme: DiffScheme) -> Result<SyntheticMate> {
    let i = Complex64::new(0.0, 1.0);
    let n = grid.len();
    let (mut phi, mut psi, mut u, mut r, mut lap) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for j in 0..grid.ny() {
        for k in 0..grid.nx() {
            let (x, y) = (grid.x(k), grid.y(j));
            let rj = synthetic_rotation(Jet::var_x(x), Jet::var_y(y));
            let rv = rj.value();
            let r_z = Complex64::new(0.5 * rj.d_x(), -0.5 * rj.d_y());
            let r_zb = r_z.conj();
            let r_zzb = 0.25 * (rj.d_xx() + rj.d_yy());
            let e = Complex64::from_polar(1.0, -rv);
            let one_minus = 1.0 - e;
            phi.push(-i * r_zb / one_minus);
            psi.push(-i * (r_zzb * one_minus - i * r_zb * r_z * e) / (one_minus * one_minus));
            let uk = synthetic_u(x, y);
            u.push(uk);
            r.push(rv);
            lap.push(4.0 * (-2.0 * uk).exp() * r_zzb);
        }
    }
    let log_hopf = LogHopfDerivatives::from_parts(
        ComplexField::from_values(grid, phi)?,
        ComplexField::from_values(grid, psi)?,
        ScalarField::from_values(grid, u)?,
        alloc::vec![false; n],
        scheme,
    )?;
    Ok(SyntheticMate {
        log_hopf,
        r_exact: ScalarField::from_values(grid, r)?,
        delta_r_exact: ScalarField::from_values(grid, lap)?,
    })
}
