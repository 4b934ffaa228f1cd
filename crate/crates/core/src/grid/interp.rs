use alloc::format;

#[allow(unused_imports)]
use num_traits::Float;

use super::{Axis, ChartGrid, Field, Sample};
use crate::error::{Error, Result};

const WIDTH: usize = 6;

/// Stencil start and Lagrange weights along one axis for coordinate `c`.
fn axis_weights(grid: &ChartGrid, axis: Axis, c: f64) -> Result<(isize, [f64; WIDTH])> {
    let (lo, hi) = match axis {
        Axis::X => grid.x_range(),
        Axis::Y => grid.y_range(),
    };
    let n = grid.count(axis);
    let h = grid.spacing(axis);
    let mut s = (c - lo) / h;
    let base = if grid.periodic(axis) {
        s -= (s / n as f64).floor() * n as f64;
        s.floor() as isize - (WIDTH as isize / 2 - 1)
    } else {
        let tol = 1e-9;
        if s < -tol || s > (n - 1) as f64 + tol {
            return Err(Error::InvalidGrid(format!(
                "interpolation point {c} outside [{lo}, {hi}] on {axis:?}"
            )));
        }
        let b = s.floor() as isize - (WIDTH as isize / 2 - 1);
        b.clamp(0, (n - WIDTH) as isize)
    };
    let mut w = [0.0; WIDTH];
    for (a, wa) in w.iter_mut().enumerate() {
        let xa = (base + a as isize) as f64;
        let mut p = 1.0;
        for b in 0..WIDTH {
            if b != a {
                let xb = (base + b as isize) as f64;
                p *= (s - xb) / (xa - xb);
            }
        }
        *wa = p;
    }
    Ok((base, w))
}

/// Degree-5 tensor Lagrange interpolation of a grid field at `(x, y)`.
/// Periodic axes wrap; open axes shift the stencil inward at the edges.
pub fn interpolate<T: Sample>(f: &Field<T>, x: f64, y: f64) -> Result<T> {
    let g = f.grid();
    let (bx, wx) = axis_weights(g, Axis::X, x)?;
    let (by, wy) = axis_weights(g, Axis::Y, y)?;
    let (nx, ny) = (g.nx() as isize, g.ny() as isize);
    let mut acc = T::zero();
    for (b, &wyb) in wy.iter().enumerate() {
        let j = (by + b as isize).rem_euclid(ny) as usize;
        let mut row = T::zero();
        for (a, &wxa) in wx.iter().enumerate() {
            let i = (bx + a as isize).rem_euclid(nx) as usize;
            row = row + f.get(i, j) * wxa;
        }
        acc = acc + row * wyb;
    }
    Ok(acc)
}
