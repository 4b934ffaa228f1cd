//! Partial and Wirtinger derivatives of grid fields.
//!
//! Every output node is a fixed linear combination of input nodes evaluated
//! in a fixed order, so results do not depend on how many threads run the
//! row loop.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::scheme::{Derivative, LineOperator};
use super::{Axis, ChartGrid, ComplexField, DiffScheme, Field, Sample, ScalarField};
use crate::error::Result;

pub(crate) fn line_operator(
    grid: &ChartGrid,
    scheme: &DiffScheme,
    axis: Axis,
    which: Derivative,
) -> Result<LineOperator> {
    scheme.check(grid)?;
    LineOperator::build(
        scheme.axis(axis),
        grid.count(axis),
        grid.spacing(axis),
        grid.periodic(axis),
        which,
    )
}

fn apply_x<T: Sample>(op: &LineOperator, nx: usize, src: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); src.len()];
    let body = |(j, row): (usize, &mut [T])| {
        let s = &src[j * nx..(j + 1) * nx];
        for (o, weights) in row.iter_mut().zip(op.rows.iter()) {
            let mut acc = T::zero();
            for &(q, w) in weights {
                acc = acc + s[q] * w;
            }
            *o = acc;
        }
    };
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(nx).enumerate().for_each(body);
    #[cfg(not(feature = "parallel"))]
    out.chunks_mut(nx).enumerate().for_each(body);
    out
}

fn apply_y<T: Sample>(op: &LineOperator, nx: usize, src: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); src.len()];
    let body = |(j, row): (usize, &mut [T])| {
        for &(q, w) in &op.rows[j] {
            let s = &src[q * nx..(q + 1) * nx];
            for (o, &v) in row.iter_mut().zip(s) {
                *o = *o + v * w;
            }
        }
    };
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(nx).enumerate().for_each(body);
    #[cfg(not(feature = "parallel"))]
    out.chunks_mut(nx).enumerate().for_each(body);
    out
}

fn partial<T: Sample>(
    f: &Field<T>,
    scheme: &DiffScheme,
    axis: Axis,
    which: Derivative,
) -> Result<Field<T>> {
    let grid = *f.grid();
    let op = line_operator(&grid, scheme, axis, which)?;
    let values = match axis {
        Axis::X => apply_x(&op, grid.nx(), f.values()),
        Axis::Y => apply_y(&op, grid.nx(), f.values()),
    };
    Ok(Field::raw(grid, values))
}

pub fn d_x<T: Sample>(f: &Field<T>, scheme: &DiffScheme) -> Result<Field<T>> {
    partial(f, scheme, Axis::X, Derivative::First)
}

pub fn d_y<T: Sample>(f: &Field<T>, scheme: &DiffScheme) -> Result<Field<T>> {
    partial(f, scheme, Axis::Y, Derivative::First)
}

pub fn d_xx<T: Sample>(f: &Field<T>, scheme: &DiffScheme) -> Result<Field<T>> {
    partial(f, scheme, Axis::X, Derivative::Second)
}

pub fn d_yy<T: Sample>(f: &Field<T>, scheme: &DiffScheme) -> Result<Field<T>> {
    partial(f, scheme, Axis::Y, Derivative::Second)
}

/// ∂_z f = ½(∂_x f − i ∂_y f).
pub fn d_z(f: &ComplexField, scheme: &DiffScheme) -> Result<ComplexField> {
    let fx = d_x(f, scheme)?;
    let fy = d_y(f, scheme)?;
    fx.zip_map(&fy, |a, b| (a - Complex64::i() * b) * 0.5)
}

/// ∂_z̄ f = ½(∂_x f + i ∂_y f).
pub fn d_zbar(f: &ComplexField, scheme: &DiffScheme) -> Result<ComplexField> {
    let fx = d_x(f, scheme)?;
    let fy = d_y(f, scheme)?;
    fx.zip_map(&fy, |a, b| (a + Complex64::i() * b) * 0.5)
}

/// ∂²f/∂z∂z̄ = ¼(f_xx + f_yy), using dedicated second-derivative stencils.
///
/// Composing two first-derivative operators instead would lose an order at
/// one-sided boundary rows.
pub fn d_z_dzbar<T: Sample>(f: &Field<T>, scheme: &DiffScheme) -> Result<Field<T>> {
    let fxx = d_xx(f, scheme)?;
    let fyy = d_yy(f, scheme)?;
    fxx.zip_map(&fyy, |a, b| (a + b) * 0.25)
}

/// Laplace–Beltrami operator of the metric e^{2u}|dz|² applied to `f`.
#[derive(Debug, Clone)]
pub struct LaplaceBeltrami {
    pub value: ScalarField,
    /// Imaginary part of the composed d_z(d_zbar(f)); zero for a consistent
    /// scheme up to rounding.
    pub imaginary_residual: ScalarField,
}

pub fn laplace_beltrami(
    f: &ScalarField,
    u: &ScalarField,
    scheme: &DiffScheme,
) -> Result<LaplaceBeltrami> {
    let mixed = d_z_dzbar(f, scheme)?;
    let value = mixed.zip_map(u, |m, u| 4.0 * (-2.0 * u).exp() * m)?;
    let composed = d_z(&d_zbar(&f.to_complex(), scheme)?, scheme)?;
    let imaginary_residual = composed.zip_map(u, |c, u| 4.0 * (-2.0 * u).exp() * c.im)?;
    Ok(LaplaceBeltrami {
        value,
        imaginary_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::AxisScheme;
    use core::f64::consts::PI;

    fn square(n: usize) -> ChartGrid {
        ChartGrid::new(-1.0, 1.0, -1.0, 1.0, n, n, false, false).unwrap()
    }

    fn torus_grid(n: usize) -> ChartGrid {
        ChartGrid::new(0.0, 2.0 * PI, 0.0, 2.0 * PI, n, n, true, true).unwrap()
    }

    fn cz(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn identity_and_conjugate_kernels() {
        let g = square(16);
        for kind in [AxisScheme::Fd2, AxisScheme::Fd4] {
            let s = DiffScheme::uniform(kind);
            let z = ComplexField::from_fn(g, cz);
            let zb = ComplexField::from_fn(g, |x, y| cz(x, -y));
            assert!(d_z(&z, &s).unwrap().map(|v| v - 1.0).max_abs() < 1e-13);
            assert!(d_z(&zb, &s).unwrap().max_abs() < 1e-13);
            assert!(d_zbar(&zb, &s).unwrap().map(|v| v - 1.0).max_abs() < 1e-13);
            assert!(d_zbar(&z, &s).unwrap().max_abs() < 1e-13);
        }
    }

    #[test]
    fn fd4_is_exact_on_squares_and_cubes() {
        let g = square(64);
        let s = DiffScheme::uniform(AxisScheme::Fd4);
        let f = ComplexField::from_fn(g, |x, y| cz(x, y).powu(2));
        let err = d_z(&f, &s)
            .unwrap()
            .values()
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let (i, j) = g.node(k);
                (d - g.z(i, j) * 2.0).norm()
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        let cube = ComplexField::from_fn(g, |x, y| cz(x, y).powu(3));
        assert!(d_zbar(&cube, &s).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn dzbar_of_sine() {
        let g = torus_grid(32);
        let f = ComplexField::from_fn(g, |x, _| cz(x.sin(), 0.0));
        let d = d_zbar(&f, &DiffScheme::spectral_auto(&g)).unwrap();
        for j in 0..g.ny() {
            for i in 0..g.nx() {
                let want = 0.5 * g.x(i).cos();
                assert!((d.get(i, j) - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn spectral_rejected_on_open_axis() {
        let g = square(16);
        let f = ComplexField::constant(g, Complex64::new(1.0, 0.0));
        assert!(d_z(&f, &DiffScheme::uniform(AxisScheme::Spectral)).is_err());
    }

    #[test]
    fn one_sided_stencils_hit_their_polynomial_degree() {
        // first derivative: fd2 exact through degree 2, fd4 through degree 4;
        // second derivative: fd2 exact through degree 3, fd4 through degree 5
        let g = ChartGrid::new(0.0, 1.3, 0.0, 1.0, 11, 8, false, false).unwrap();
        for (kind, d1deg, d2deg) in [(AxisScheme::Fd2, 2, 3), (AxisScheme::Fd4, 4, 5)] {
            let s = DiffScheme::uniform(kind);
            let f = ScalarField::from_fn(g, |x, _| x.powi(d1deg));
            let d = d_x(&f, &s).unwrap();
            for i in 0..g.nx() {
                let want = d1deg as f64 * g.x(i).powi(d1deg - 1);
                assert!((d.get(i, 3) - want).abs() < 1e-11, "{kind:?} d1 row {i}");
            }
            let f = ScalarField::from_fn(g, |x, _| x.powi(d2deg));
            let d = d_xx(&f, &s).unwrap();
            for i in 0..g.nx() {
                let want = (d2deg * (d2deg - 1)) as f64 * g.x(i).powi(d2deg - 2);
                assert!((d.get(i, 3) - want).abs() < 1e-9, "{kind:?} d2 row {i}");
            }
        }
    }

    #[test]
    fn flat_laplacians() {
        let g = square(24);
        let s = DiffScheme::uniform(AxisScheme::Fd4);
        let u = ScalarField::constant(g, 0.0);
        let f = ScalarField::from_fn(g, |x, y| x * x + y * y);
        let lb = laplace_beltrami(&f, &u, &s).unwrap();
        assert!(lb.value.map(|v| v - 4.0).max_abs() < 1e-10);
        assert!(lb.imaginary_residual.max_abs() < 1e-10);
        let f = ScalarField::from_fn(g, |x, y| x * x - y * y);
        assert!(laplace_beltrami(&f, &u, &s).unwrap().value.max_abs() < 1e-10);
    }

    #[test]
    fn coordinate_is_harmonic_in_conformal_metric() {
        // e^{2u} = cosh²y, f = x
        let g = ChartGrid::new(0.0, 2.0 * PI, -1.0, 1.0, 32, 33, true, false).unwrap();
        let s = DiffScheme::spectral_auto(&g);
        let u = ScalarField::from_fn(g, |_, y| y.cosh().ln());
        let f = ScalarField::from_fn(g, |x, _| x.sin());
        // x itself is not periodic, so use the open-x grid for it
        let go = ChartGrid::new(0.0, 2.0, -1.0, 1.0, 33, 33, false, false).unwrap();
        let uo = ScalarField::from_fn(go, |_, y| y.cosh().ln());
        let xo = ScalarField::from_fn(go, |x, _| x);
        let lb = laplace_beltrami(&xo, &uo, &DiffScheme::uniform(AxisScheme::Fd4)).unwrap();
        assert!(lb.value.max_abs() < 1e-11);
        // sin x: Δ = -4 e^{-2u}·¼ sin x
        let lb = laplace_beltrami(&f, &u, &s).unwrap();
        let lb_expected = ScalarField::from_fn(g, |x, y| -x.sin() / (y.cosh() * y.cosh()));
        let err = lb.value.zip_map(&lb_expected, |a, b| a - b).unwrap().max_abs();
        assert!(err < 1e-10, "{err}");
    }
}
