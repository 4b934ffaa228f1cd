//! The full per-chart pipeline: forms, invariants, residuals, umbilics,
//! log-Hopf derivatives and classification.

use crate::error::{Error, Result};
use crate::grid::DiffScheme;
use crate::hopf::{
    classify, log_hopf_derivatives, umbilic_mask, Classification, ClassifyConfig,
    LogHopfDerivatives, UmbilicReport,
};
use crate::invariants::{
    conformal_invariants, fundamental_forms, nonconstancy_fraction, ConformalInvariants,
    FundamentalForms, StructureResiduals,
};
use crate::surface::ImmersionSample;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalysisConfig {
    pub tol_conf: f64,
    pub classify: ClassifyConfig,
}

impl AnalysisConfig {
    pub fn with_tol_conf(tol_conf: f64) -> Self {
        Self {
            tol_conf,
            classify: ClassifyConfig::default(),
        }
    }
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self::with_tol_conf(crate::invariants::TOL_CONF_ANALYTIC)
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub scheme: DiffScheme,
    pub forms: FundamentalForms,
    pub invariants: ConformalInvariants,
    pub residuals: StructureResiduals,
    /// floor_factor × max structure residual.
    pub floor: f64,
    pub nonconstancy: f64,
    pub umbilics: UmbilicReport,
    /// `None` when every node is umbilic.
    pub log_hopf: Option<LogHopfDerivatives>,
    pub classification: Classification,
}

pub fn analyze(
    sample: &ImmersionSample,
    scheme: &DiffScheme,
    config: &AnalysisConfig,
) -> Result<Analysis> {
    scheme.check(sample.grid())?;
    let forms = fundamental_forms(sample)?;
    let invariants = conformal_invariants(&forms, config.tol_conf)?;
    let residuals = StructureResiduals::compute(&invariants, scheme)?;
    let floor = residuals.floor(config.classify.floor_factor);
    let nonconstancy =
        nonconstancy_fraction(&invariants, scheme, config.classify.tol_nonconstant)?;
    let umbilics = umbilic_mask(&invariants, config.classify.tol_umbilic);
    let log_hopf = match log_hopf_derivatives(&invariants, &umbilics.mask, scheme) {
        Ok(lh) => Some(lh),
        Err(Error::TotallyUmbilic) => None,
        Err(e) => return Err(e),
    };
    let classification = classify(
        log_hopf.as_ref(),
        &umbilics,
        nonconstancy,
        floor,
        &config.classify,
    );
    Ok(Analysis {
        scheme: *scheme,
        forms,
        invariants,
        residuals,
        floor,
        nonconstancy,
        umbilics,
        log_hopf,
        classification,
    })
}
