use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{candidate_mate_rotation, mate_consistency_residuals};
use crate::analysis::Analysis;
use crate::grid::{AxisScheme, DiffScheme};
use crate::hopf::{Branch, SurfaceKind};
use crate::surface::ChartMeta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Verdict {
    #[cfg_attr(feature = "serde", serde(rename = "no-mate-theorem-1"))]
    NoMateTheorem1,
    #[cfg_attr(feature = "serde", serde(rename = "no-mate-theorem-2"))]
    NoMateTheorem2,
    CmcAssociateFamilyExists,
    TotallyUmbilic,
    Inconclusive,
}

impl Verdict {
    pub const ALL: [Verdict; 5] = [
        Verdict::NoMateTheorem1,
        Verdict::NoMateTheorem2,
        Verdict::CmcAssociateFamilyExists,
        Verdict::TotallyUmbilic,
        Verdict::Inconclusive,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Verdict::NoMateTheorem1 => "no-mate-theorem-1",
            Verdict::NoMateTheorem2 => "no-mate-theorem-2",
            Verdict::CmcAssociateFamilyExists => "cmc-associate-family-exists",
            Verdict::TotallyUmbilic => "totally-umbilic",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// The hypothesis booleans the verdict is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerdictInputs {
    pub kind: SurfaceKind,
    pub compact: bool,
    pub simply_connected: bool,
    pub h_nonconstant: bool,
    pub umbilics_discrete: bool,
}

/// Computable stand-ins for the subharmonicity argument: the sign of Δr
/// and whether r is constant.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Surrogate {
    pub branch: Option<Branch>,
    pub degenerate_fraction: f64,
    pub support_nodes: usize,
    pub subharmonic_fraction: f64,
    pub r_range: f64,
    pub r3_max: f64,
    pub sign_law_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BonnetVerdict {
    pub verdict: Verdict,
    pub clause: Option<u8>,
    pub inputs: VerdictInputs,
    /// Why the verdict is inconclusive; empty otherwise.
    pub reasons: Vec<String>,
    pub citations: Vec<&'static str>,
    /// One-line human summary.
    pub line: String,
    pub surrogate: Option<Surrogate>,
}

const CITE_THEOREM: &str = "Theorem: a compact surface with nonconstant H that is isothermic \
     (clause 1) or totally nonisothermic (clause 2) has no Bonnet mate";
const CITE_UMBILICS: &str = "umbilics of a surface with a Bonnet mate are isolated";
const CITE_CONSTANT_A: &str = "the mate rotation A cannot be constant";
const CITE_ASSOCIATES: &str = "simply connected CMC surfaces carry the associate family h -> e^{i theta} h";
const CITE_COMPACT_PROPER: &str = "a compact surface cannot be proper Bonnet (Lawson–Tribuzy)";

/// Apply the theorem to a set of hypothesis booleans.
///
/// A no-mate verdict is returned only when every hypothesis of its clause
/// holds; anything short of that is inconclusive with the missing
/// hypotheses listed.
pub fn theorem_verdict(inputs: &VerdictInputs) -> BonnetVerdict {
    let mut reasons = Vec::new();
    let mut citations = Vec::new();
    let (verdict, clause) = match inputs.kind {
        SurfaceKind::TotallyUmbilic => (Verdict::TotallyUmbilic, None),
        SurfaceKind::Cmc => {
            citations.push(CITE_ASSOCIATES);
            if inputs.simply_connected {
                (Verdict::CmcAssociateFamilyExists, None)
            } else {
                reasons.push(
                    "CMC chart is not simply connected; associates may fail to close up"
                        .to_string(),
                );
                (Verdict::Inconclusive, None)
            }
        }
        SurfaceKind::Isothermic | SurfaceKind::TotallyNonisothermic => {
            citations.push(CITE_THEOREM);
            citations.push(CITE_UMBILICS);
            if inputs.kind == SurfaceKind::TotallyNonisothermic {
                citations.push(CITE_CONSTANT_A);
            }
            if !inputs.compact {
                reasons.push("chart is not compact".to_string());
            }
            if !inputs.h_nonconstant {
                reasons.push("H is not nonconstant on a dense set".to_string());
            }
            if !inputs.umbilics_discrete {
                reasons.push("umbilics are not isolated".to_string());
            }
            if reasons.is_empty() {
                citations.push(CITE_COMPACT_PROPER);
                if inputs.kind == SurfaceKind::Isothermic {
                    (Verdict::NoMateTheorem1, Some(1))
                } else {
                    (Verdict::NoMateTheorem2, Some(2))
                }
            } else {
                (Verdict::Inconclusive, None)
            }
        }
        SurfaceKind::Mixed => {
            reasons.push(
                "mixed type: neither isothermic nor totally nonisothermic, outside both clauses"
                    .to_string(),
            );
            (Verdict::Inconclusive, None)
        }
    };
    let line = match verdict {
        Verdict::NoMateTheorem1 => "no Bonnet mate (Theorem, clause 1: isothermic)".to_string(),
        Verdict::NoMateTheorem2 => {
            "no Bonnet mate (Theorem, clause 2: totally nonisothermic)".to_string()
        }
        Verdict::CmcAssociateFamilyExists => format!(
            "CMC: associate family exists ({})",
            if inputs.compact { "compact" } else { "not compact" }
        ),
        Verdict::TotallyUmbilic => "totally umbilic: theorem not applicable".to_string(),
        Verdict::Inconclusive => format!("inconclusive: {}", reasons.join("; ")),
    };
    BonnetVerdict {
        verdict,
        clause,
        inputs: *inputs,
        reasons,
        citations,
        line,
        surrogate: None,
    }
}

/// Verdict for an analysed chart. On totally nonisothermic and mixed
/// charts the candidate rotation is also built and summarised, with its
/// residuals taken by FD4 on every axis.
pub fn verdict_for(analysis: &Analysis, meta: &ChartMeta) -> BonnetVerdict {
    let c = &analysis.classification;
    let inputs = VerdictInputs {
        kind: c.kind,
        compact: meta.compact,
        simply_connected: meta.simply_connected,
        h_nonconstant: analysis.nonconstancy >= c.config.dense_fraction,
        umbilics_discrete: analysis.umbilics.discrete,
    };
    let mut out = theorem_verdict(&inputs);
    if matches!(
        c.kind,
        SurfaceKind::TotallyNonisothermic | SurfaceKind::Mixed
    ) {
        out.surrogate = analysis.log_hopf.as_ref().and_then(|lh| {
            let cr = candidate_mate_rotation(lh, analysis.floor).ok()?;
            // r is only differentiable on scattered patches, so local stencils
            // are used even where the chart itself was spectral
            let local = DiffScheme::uniform(AxisScheme::Fd4);
            let res = mate_consistency_residuals(lh, &cr, &local).ok()?;
            Some(Surrogate {
                branch: cr.branch,
                degenerate_fraction: cr.degenerate_fraction(),
                support_nodes: res.support_nodes,
                subharmonic_fraction: res.subharmonic_fraction,
                r_range: res.r_range,
                r3_max: res.r3_max,
                sign_law_max: res.sign_law_max,
            })
        });
    }
    out
}
