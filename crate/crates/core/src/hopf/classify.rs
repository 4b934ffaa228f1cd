use super::{LogHopfDerivatives, UmbilicReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SurfaceKind {
    TotallyUmbilic,
    Cmc,
    Isothermic,
    TotallyNonisothermic,
    Mixed,
}

impl SurfaceKind {
    pub const ALL: [SurfaceKind; 5] = [
        SurfaceKind::TotallyUmbilic,
        SurfaceKind::Cmc,
        SurfaceKind::Isothermic,
        SurfaceKind::TotallyNonisothermic,
        SurfaceKind::Mixed,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SurfaceKind::TotallyUmbilic => "totally-umbilic",
            SurfaceKind::Cmc => "cmc",
            SurfaceKind::Isothermic => "isothermic",
            SurfaceKind::TotallyNonisothermic => "totally-nonisothermic",
            SurfaceKind::Mixed => "mixed",
        }
    }
}

/// Which orientation of the candidate rotation the sign of Δg selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Branch {
    /// Δg ≤ 0: r itself is subharmonic.
    DeltaGNonpositive,
    /// Δg ≥ 0: continue with −r.
    DeltaGNonnegative,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::DeltaGNonpositive => "delta-g-nonpositive (use r)",
            Branch::DeltaGNonnegative => "delta-g-nonnegative (use -r)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassifyConfig {
    /// Share of unmasked nodes that must carry one sign of Δg.
    pub sign_fraction: f64,
    /// Largest nonconstancy fraction still treated as constant H.
    pub cmc_fraction: f64,
    /// Smallest nonconstancy fraction counted as "dH ≠ 0 on a dense set".
    pub dense_fraction: f64,
    /// Multiple of the structure residual defining "identically zero".
    pub floor_factor: f64,
    pub tol_umbilic: f64,
    pub tol_nonconstant: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            sign_fraction: 0.99,
            cmc_fraction: 0.01,
            dense_fraction: 0.99,
            floor_factor: 10.0,
            tol_umbilic: super::TOL_UMBILIC,
            tol_nonconstant: crate::invariants::TOL_NONCONSTANT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Classification {
    pub kind: SurfaceKind,
    pub umbilic_count: usize,
    pub umbilic_components: usize,
    pub umbilics_discrete: bool,
    pub unmasked: usize,
    pub max_abs_delta_g: f64,
    /// Level below which Δg counts as zero.
    pub floor: f64,
    pub fraction_positive: f64,
    pub fraction_negative: f64,
    pub fraction_below_floor: f64,
    pub nonconstancy_fraction: f64,
    pub branch: Option<Branch>,
    pub config: ClassifyConfig,
}

/// Sort a chart into one of the five kinds.
///
/// Checks run in order: every node umbilic, then constant H, then Δg below
/// `floor` on every unmasked node, then a single sign of Δg above the floor
/// on at least `sign_fraction` of unmasked nodes. Anything else is mixed.
pub fn classify(
    lh: Option<&LogHopfDerivatives>,
    umbilics: &UmbilicReport,
    nonconstancy_fraction: f64,
    floor: f64,
    config: &ClassifyConfig,
) -> Classification {
    let mut c = Classification {
        kind: SurfaceKind::Mixed,
        umbilic_count: umbilics.masked,
        umbilic_components: umbilics.components,
        umbilics_discrete: umbilics.discrete,
        unmasked: 0,
        max_abs_delta_g: 0.0,
        floor,
        fraction_positive: 0.0,
        fraction_negative: 0.0,
        fraction_below_floor: 0.0,
        nonconstancy_fraction,
        branch: None,
        config: *config,
    };
    let lh = match lh {
        Some(lh) if !umbilics.all_masked => lh,
        _ => {
            c.kind = SurfaceKind::TotallyUmbilic;
            return c;
        }
    };
    let (mut pos, mut neg, mut low, mut max) = (0usize, 0usize, 0usize, 0.0f64);
    for (&dg, &m) in lh.delta_g.values().iter().zip(&lh.mask) {
        if m {
            continue;
        }
        max = max.max(dg.abs());
        if dg > floor {
            pos += 1;
        } else if dg < -floor {
            neg += 1;
        } else {
            low += 1;
        }
    }
    let total = pos + neg + low;
    let frac = |k: usize| k as f64 / total as f64;
    c.unmasked = total;
    c.max_abs_delta_g = max;
    c.fraction_positive = frac(pos);
    c.fraction_negative = frac(neg);
    c.fraction_below_floor = frac(low);
    if pos + neg > 0 {
        c.branch = Some(if neg >= pos {
            Branch::DeltaGNonpositive
        } else {
            Branch::DeltaGNonnegative
        });
    }
    c.kind = if nonconstancy_fraction <= config.cmc_fraction {
        SurfaceKind::Cmc
    } else if max <= floor {
        SurfaceKind::Isothermic
    } else if frac(pos.max(neg)) >= config.sign_fraction {
        SurfaceKind::TotallyNonisothermic
    } else {
        SurfaceKind::Mixed
    };
    c
}
