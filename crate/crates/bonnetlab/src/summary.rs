//! Plain-text renderings of reports and the gallery.

use std::fmt::Write;

use bonnetlab_core::grid::ConvergenceStatus;
use bonnetlab_core::hopf::SurfaceKind;
use bonnetlab_core::surface::{gallery, DerivativeSource, GalleryEntry};
use serde::Serialize;

use crate::report::{ConvergeReport, Report, Stats};

#[derive(Debug, Clone, Serialize)]
pub struct ParamListing {
    pub name: &'static str,
    pub default: f64,
    pub doc: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct GalleryListing {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: Vec<ParamListing>,
    pub constraint: &'static str,
    pub compact: bool,
    pub simply_connected: bool,
}

impl From<&GalleryEntry> for GalleryListing {
    fn from(e: &GalleryEntry) -> Self {
        Self {
            name: e.name,
            summary: e.summary,
            params: e
                .params
                .iter()
                .map(|p| ParamListing {
                    name: p.name,
                    default: p.default,
                    doc: p.doc,
                })
                .collect(),
            constraint: e.constraint,
            compact: e.compact,
            simply_connected: e.simply_connected,
        }
    }
}

pub fn gallery_listing() -> Vec<GalleryListing> {
    gallery().iter().map(Into::into).collect()
}

pub fn gallery_table() -> String {
    let mut s = String::new();
    for e in gallery() {
        let params: Vec<String> = e
            .params
            .iter()
            .map(|p| format!("{}={}", p.name, p.default))
            .collect();
        let _ = writeln!(
            s,
            "{:<24} {:<8} {:<22} {}",
            e.name,
            if e.compact { "compact" } else { "open" },
            params.join(" "),
            e.summary
        );
    }
    s
}

pub fn gallery_entry(e: &GalleryEntry) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: {}", e.name, e.summary);
    let _ = writeln!(s, "compact: {}, simply connected: {}", e.compact, e.simply_connected);
    if e.params.is_empty() {
        let _ = writeln!(s, "no parameters");
    }
    for p in e.params {
        let _ = writeln!(s, "  --{:<8} default {:<6} {}", p.name, p.default, p.doc);
    }
    if !e.constraint.is_empty() {
        let _ = writeln!(s, "constraint: {}", e.constraint);
    }
    s
}

fn source_label(s: DerivativeSource) -> &'static str {
    match s {
        DerivativeSource::Analytic => "analytic",
        DerivativeSource::Numerical => "numerical",
    }
}

fn stats(s: &Stats) -> String {
    format!("min {:>11.4e}  max {:>11.4e}  mean {:>11.4e}", s.min, s.max, s.mean)
}

pub fn analysis(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "chart {} ({} x {}, scheme {}, {} derivatives)",
        r.chart.name,
        r.resolution.nx,
        r.resolution.ny,
        r.scheme.label(),
        source_label(r.derivative_source)
    );
    let _ = writeln!(
        s,
        "conformality residual {:.3e} (tol {:.1e})",
        r.conformality.residual, r.conformality.tol
    );
    let i = &r.invariants;
    let _ = writeln!(s, "u    {}", stats(&i.u));
    let _ = writeln!(s, "H    {}", stats(&i.mean_curvature));
    let _ = writeln!(s, "|h|  {}", stats(&i.hopf_modulus));
    let _ = writeln!(s, "K    {}", stats(&i.gauss_curvature));
    let _ = writeln!(
        s,
        "gauss residual {:.3e}, codazzi residual {:.3e}, floor {:.3e}",
        r.residuals.gauss_max, r.residuals.codazzi_max, r.residuals.floor
    );
    let _ = writeln!(
        s,
        "umbilics: {} nodes in {} components (isolated: {})",
        r.umbilics.masked, r.umbilics.components, r.umbilics.discrete
    );
    let c = &r.classification;
    let _ = writeln!(
        s,
        "classification: {} (deltag > floor {:.4}, < -floor {:.4}, below floor {:.4}, H nonconstant on {:.4})",
        c.kind.label(),
        c.fraction_positive,
        c.fraction_negative,
        c.fraction_below_floor,
        c.nonconstancy_fraction
    );
    s
}

pub fn verdict(r: &Report) -> String {
    let mut s = String::new();
    let Some(v) = &r.verdict else { return s };
    let _ = writeln!(s, "{}", v.line);
    let c = &r.classification;
    let _ = writeln!(
        s,
        "classification {} on {} x {} ({}): compact {}, simply connected {}, H nonconstant {}, umbilics isolated {}",
        c.kind.label(),
        r.resolution.nx,
        r.resolution.ny,
        r.scheme.label(),
        v.inputs.compact,
        v.inputs.simply_connected,
        v.inputs.h_nonconstant,
        v.inputs.umbilics_discrete
    );
    if !matches!(c.kind, SurfaceKind::Cmc | SurfaceKind::TotallyUmbilic) {
        let _ = writeln!(
            s,
            "sign of deltag: positive {:.4}, negative {:.4}, below floor {:.4} (floor {:.3e}, max |deltag| {:.3e})",
            c.fraction_positive,
            c.fraction_negative,
            c.fraction_below_floor,
            c.floor,
            c.max_abs_delta_g
        );
    }
    if let Some(sg) = &v.surrogate {
        let _ = writeln!(
            s,
            "candidate rotation: degenerate on {:.4}, support {} nodes, laplacian of r >= 0 on {:.4}, range of r {:.3e}, R3 {:.3e}, sign law {:.3e}",
            sg.degenerate_fraction,
            sg.support_nodes,
            sg.subharmonic_fraction,
            sg.r_range,
            sg.r3_max,
            sg.sign_law_max
        );
    }
    for c in &v.citations {
        let _ = writeln!(s, "  cites: {c}");
    }
    s
}

pub fn mate(r: &Report) -> String {
    let mut s = String::new();
    let Some(m) = &r.mate else { return s };
    let d = &m.deformation;
    let _ = writeln!(s, "associate at theta = {:?}", m.theta);
    if d.congruent {
        let _ = writeln!(s, "congruent: F = e^{{2u}}(h~ - h) vanishes (max |F| {:.3e})", d.f_max);
    } else {
        let _ = writeln!(
            s,
            "F = e^{{2u}}(h~ - h) = {:.12} {:+.12}i at node 0, max |F| {:.6e}, spread {:.3e}",
            d.f_at_origin_node.re, d.f_at_origin_node.im, d.f_max, d.f_spread
        );
    }
    let _ = writeln!(
        s,
        "holomorphy residual {:.3e}, modulus residual {:.3e}, max |u - u~| {:.1e}, max |H - H~| {:.1e}",
        d.holomorphy_max, d.modulus_max, d.max_du, d.max_dh
    );
    let q = &m.associate_hopf_coefficient;
    let _ = writeln!(
        s,
        "associate e^{{2u}}h~ = {:.12} {:+.12}i at node 0 (spread {:.3e})",
        q.re, q.im, m.associate_hopf_coefficient_spread
    );
    let a = &m.associate;
    let _ = writeln!(s, "associate u    {}", stats(&a.u));
    let _ = writeln!(s, "associate H    {}", stats(&a.mean_curvature));
    let _ = writeln!(s, "associate |h|  {}", stats(&a.hopf_modulus));
    s
}

pub fn converge(r: &ConvergeReport) -> String {
    let mut s = String::new();
    let levels: Vec<String> = r.levels.iter().map(|l| format!("{}x{}", l.nx, l.ny)).collect();
    let _ = writeln!(
        s,
        "chart {} ({} derivatives), scheme {}, levels {}",
        r.chart.name,
        source_label(r.derivative_source),
        r.scheme.label(),
        levels.join(" ")
    );
    for b in &r.series {
        match (&b.series, &b.unavailable) {
            (Some(series), _) => {
                let errs: Vec<String> = series.errors.iter().map(|e| format!("{e:.3e}")).collect();
                let orders: Vec<String> = series.orders.iter().map(|p| format!("{p:.2}")).collect();
                let status = match series.status {
                    ConvergenceStatus::Converged => "converged".to_string(),
                    ConvergenceStatus::Order(p) => format!("order {p:.2}"),
                };
                let _ = writeln!(
                    s,
                    "{:<18} {:<10} errors {}  orders {}",
                    b.name,
                    status,
                    errs.join(" "),
                    orders.join(" ")
                );
            }
            (None, reason) => {
                let _ = writeln!(
                    s,
                    "{:<18} unavailable: {}",
                    b.name,
                    reason.as_deref().unwrap_or("")
                );
            }
        }
    }
    s
}
