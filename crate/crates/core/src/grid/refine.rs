use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::ChartGrid;
use crate::error::{Error, Result};

/// Errors at or below this level are treated as rounding noise.
pub const CONVERGED_FLOOR: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case", tag = "status", content = "order"))]
pub enum ConvergenceStatus {
    /// Every level already sits at rounding level.
    Converged,
    /// Observed order between the two finest levels.
    Order(f64),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConvergenceSeries {
    pub name: String,
    /// Error per level, coarsest first.
    pub errors: Vec<f64>,
    /// log₂ of successive error ratios.
    pub orders: Vec<f64>,
    pub status: ConvergenceStatus,
}

impl ConvergenceSeries {
    pub fn from_errors(name: String, errors: Vec<f64>) -> Self {
        let orders: Vec<f64> = errors
            .windows(2)
            .map(|w| (w[0] / w[1]).log2())
            .collect();
        let status = match errors.last() {
            Some(&last) if last <= CONVERGED_FLOOR => ConvergenceStatus::Converged,
            _ => ConvergenceStatus::Order(orders.last().copied().unwrap_or(f64::NAN)),
        };
        Self {
            name,
            errors,
            orders,
            status,
        }
    }

    /// Observed order, or `None` when the series is at rounding level.
    pub fn order(&self) -> Option<f64> {
        match self.status {
            ConvergenceStatus::Converged => None,
            ConvergenceStatus::Order(p) => Some(p),
        }
    }
}

/// Rerun `producer` on `levels` successively refined grids, starting from
/// `grid`, and report the observed convergence order of each named error.
pub fn refine_study<F>(grid: ChartGrid, levels: usize, mut producer: F) -> Result<Vec<ConvergenceSeries>>
where
    F: FnMut(&ChartGrid) -> Result<Vec<(String, f64)>>,
{
    if levels < 2 {
        return Err(Error::Diagnostic(format!("need at least 2 levels, got {levels}")));
    }
    let mut names: Vec<String> = Vec::new();
    let mut table: Vec<Vec<f64>> = Vec::new();
    let mut g = grid;
    for level in 0..levels {
        let out = producer(&g)?;
        if level == 0 {
            names = out.iter().map(|(n, _)| n.clone()).collect();
            table = alloc::vec![Vec::with_capacity(levels); names.len()];
        } else if out.len() != names.len() {
            return Err(Error::Diagnostic("producer changed its outputs between levels".into()));
        }
        for (k, (name, err)) in out.into_iter().enumerate() {
            if !err.is_finite() {
                return Err(Error::Diagnostic(format!(
                    "{name} is non-finite at level {level} ({} x {})",
                    g.nx(),
                    g.ny()
                )));
            }
            table[k].push(err);
        }
        g = g.refined();
    }
    Ok(names
        .into_iter()
        .zip(table)
        .map(|(n, e)| ConvergenceSeries::from_errors(n, e))
        .collect())
}
