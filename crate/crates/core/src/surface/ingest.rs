use alloc::vec::Vec;

use super::{DerivativeSource, ImmersionSample, PointJet};
use crate::error::Result;
use crate::grid::{d_x, d_xx, d_y, d_yy, AxisScheme, ChartGrid, DiffScheme, Field};
use crate::vec3::Vec3;

/// Build a sample from positions alone. Derivatives come from fourth-order
/// differences (wrapping on periodic axes); X_xy is d_y applied to X_x.
pub fn from_positions(grid: ChartGrid, positions: Vec<Vec3>) -> Result<ImmersionSample> {
    let scheme = DiffScheme::uniform(AxisScheme::Fd4);
    let x = Field::from_values(grid, positions)?;
    let xx = d_x(&x, &scheme)?;
    let xy = d_y(&x, &scheme)?;
    let xxy = d_y(&xx, &scheme)?;
    let xxx = d_xx(&x, &scheme)?;
    let xyy = d_yy(&x, &scheme)?;
    let points = (0..grid.len())
        .map(|k| PointJet {
            x: x.values()[k],
            x_x: xx.values()[k],
            x_y: xy.values()[k],
            x_xx: xxx.values()[k],
            x_xy: xxy.values()[k],
            x_yy: xyy.values()[k],
        })
        .collect();
    ImmersionSample::new(grid, points, DerivativeSource::Numerical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::surface::GallerySurface;

    #[test]
    fn numerical_derivatives_track_analytic_ones() {
        let cat = GallerySurface::new("catenoid", &[]).unwrap();
        let g = cat.default_grid(64, 64).unwrap();
        let exact = cat.sample(g).unwrap();
        let num = exact.positions_only().unwrap();
        assert_eq!(num.source(), DerivativeSource::Numerical);
        let worst = exact
            .points()
            .iter()
            .zip(num.points())
            .flat_map(|(a, b)| {
                a.as_array()
                    .into_iter()
                    .zip(b.as_array())
                    .map(|(p, q)| (p - q).norm())
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-4, "{worst}");
    }

    #[test]
    fn collapsed_row_names_the_node() {
        let g = ChartGrid::new(0.0, 1.0, 0.0, 1.0, 8, 8, false, false).unwrap();
        let pos = (0..64)
            .map(|k| {
                let (i, j) = g.node(k);
                // X_y vanishes along row 3
                Vec3::new(g.x(i), (g.y(j) - g.y(3)).powi(3), 0.0)
            })
            .collect();
        match from_positions(g, pos) {
            Err(Error::DegenerateImmersion { j: 3, .. }) => {}
            other => panic!("expected degenerate immersion, got {other:?}"),
        }
    }
}
