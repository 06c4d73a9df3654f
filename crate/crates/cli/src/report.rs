//! Table and JSON rendering of pipeline reports and crossed-product
//! diagnostics.

use std::fmt::Write;

use bredon_core::exactla::AbelianGroupInv;
use bredon_core::ktheory::CrossCheck;
use bredon_core::pipeline::Report;
use serde_json::{json, Value};

use crate::diagnostics::CrossedDiagnostics;

fn groups(h: &[AbelianGroupInv]) -> Vec<String> {
    h.iter().map(ToString::to_string).collect()
}

fn counts(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn verdict(c: &CrossCheck) -> String {
    match c {
        CrossCheck::Agree => "agree".into(),
        CrossCheck::Differ { degree } => format!("differ in degree {degree}"),
        CrossCheck::Skipped => "skipped".into(),
    }
}

fn status(r: &Report) -> &'static str {
    if r.k.exact {
        "exact"
    } else {
        "rational-only"
    }
}

pub fn table(r: &Report) -> String {
    let mut rows: Vec<(String, String)> = vec![
        ("scenario".into(), r.name.clone()),
        ("dimension".into(), r.dim.to_string()),
        ("group order".into(), r.group_order.to_string()),
        ("cells of X".into(), counts(&r.x_cells)),
        ("cells of blow-up".into(), counts(&r.x_tilde_cells)),
    ];
    if let Some(v) = &r.invariant_ranks {
        rows.push(("invariant ranks".into(), counts(v)));
    }
    if let Some(h) = &r.blowup_side {
        rows.push(("H*(blow-up; Rep)".into(), groups(h).join(" | ")));
    }
    if let Some(h) = &r.x_side {
        rows.push(("H*(X; lying-over)".into(), groups(h).join(" | ")));
    }
    rows.push(("cross-check".into(), verdict(&r.cross_check)));
    for e in r.e2.iter().filter(|e| !e.group.is_zero()) {
        rows.push((format!("E2[{},{}]", e.p, e.q), e.group.to_string()));
    }
    rows.push(("K0".into(), r.k.k0.to_string()));
    rows.push(("K1".into(), r.k.k1.to_string()));
    rows.push(("K status".into(), status(r).into()));
    if !r.k.exact {
        rows.push(("note".into(), "integral K only up to higher differentials and extensions".into()));
    }
    rows.push(("rational K".into(), format!("({}, {})", r.rational.0, r.rational.1)));
    let passed = r.checks.iter().filter(|c| c.outcome.is_ok()).count();
    rows.push(("checks".into(), format!("{passed}/{} passed", r.checks.len())));
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let pad = width - k.chars().count();
        writeln!(out, "{k}{}  {v}", " ".repeat(pad)).unwrap();
    }
    out
}

pub fn json(r: &Report) -> Value {
    json!({
        "scenario": r.name,
        "dim": r.dim,
        "group_order": r.group_order,
        "cells": { "x": r.x_cells, "blowup": r.x_tilde_cells },
        "invariant_ranks": r.invariant_ranks,
        "bredon": {
            "blowup": r.blowup_side.as_deref().map(groups),
            "x_side": r.x_side.as_deref().map(groups),
        },
        "cross_check": verdict(&r.cross_check),
        "e2": r.e2.iter().map(|e| json!({ "p": e.p, "q": e.q, "group": e.group.to_string() })).collect::<Vec<_>>(),
        "k0": r.k.k0.to_string(),
        "k1": r.k.k1.to_string(),
        "status": status(r),
        "rational_k": [r.rational.0, r.rational.1],
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.outcome.is_ok(),
            "detail": c.outcome.clone().err(),
        })).collect::<Vec<_>>(),
    })
}

pub fn crossed_table(d: &CrossedDiagnostics) -> String {
    let mut out = String::new();
    writeln!(out, "example          {}", d.name).unwrap();
    writeln!(out, "group order      {}", d.group_order).unwrap();
    writeln!(out, "orbit points     {}", d.points).unwrap();
    writeln!(out, "dimension        {}", d.dimension).unwrap();
    writeln!(out, "centre dimension {}", d.center_dimension).unwrap();
    let dual: Vec<String> = d.dual.iter().map(|p| format!("x{}:π{} (dim {})", p.basepoint, p.irrep, p.dim)).collect();
    writeln!(out, "dual points      {}", dual.join(", ")).unwrap();
    writeln!(out, "block sum        {}", d.block_sum).unwrap();
    writeln!(out, "corner dims      {}", counts(&d.corner_dimensions)).unwrap();
    if let Some(i) = &d.ideal {
        writeln!(out, "ideal dimension  {}", i.0).unwrap();
        writeln!(out, "ideal K0 rank    {}", i.1).unwrap();
    }
    out
}

pub fn crossed_json(d: &CrossedDiagnostics) -> Value {
    json!({
        "example": d.name,
        "group_order": d.group_order,
        "points": d.points,
        "dimension": d.dimension,
        "center_dimension": d.center_dimension,
        "dual": d.dual.iter().map(|p| json!({
            "basepoint": p.basepoint, "irrep": p.irrep, "degree": p.degree, "dim": p.dim,
        })).collect::<Vec<_>>(),
        "block_sum": d.block_sum,
        "corner_dimensions": d.corner_dimensions,
        "ideal": d.ideal.map(|(dim, rank)| json!({ "dimension": dim, "k0_rank": rank })),
    })
}
