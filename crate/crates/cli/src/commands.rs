use crate::output::Report;
use crate::{OperatorKind, ProbeKind, Range};
use anyhow::{bail, Context};
use serde::Serialize;
use serde_json::{json, Value};
use sharpbound::domination::{calibrate_eta, random_band_limited, random_corpus, sparse_dominate, DominationParams};
use sharpbound::dyadic::DyadicCube;
use sharpbound::exponents::{critical_exponent, make_config, EXPONENT_TOL};
use sharpbound::harness::{
    eps_between, lower_range_scan_entries, sharpness_lower, sharpness_upper, weighted_bound_scan, FormEvaluator,
    SlopeFit,
};
use sharpbound::operators::{calderon_residual, off_diagonal_probe, LogQuadrature, MultiplierOperator};
use sharpbound::sparse::canonical_collection;
use sharpbound::weights::{ap_characteristic, rh_characteristic, IntervalFamily, Weight};
use std::path::{Path, PathBuf};

fn to_value<T: Serialize>(v: &T) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(v)?)
}

pub fn exponents(p0: f64, q0: f64, p: f64) -> anyhow::Result<Report> {
    let cfg = make_config(p0, q0, p)?;
    let closed = cfg.alpha_closed_form();
    let err = (cfg.alpha - closed).abs() / closed.max(1.0);
    let mut row = to_value(&cfg)?;
    row["alpha_closed_form"] = json!(closed);
    row["alpha_identity_error"] = json!(err);
    row["lower_range"] = json!(cfg.in_lower_range());
    Ok(Report {
        json: row.clone(),
        rows: vec![row],
        passed: err <= EXPONENT_TOL,
    })
}

fn read_sampled(path: &Path) -> anyhow::Result<Weight> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let headers = reader.headers()?.clone();
    let col = headers
        .iter()
        .position(|h| h == "value")
        .unwrap_or(headers.len().saturating_sub(1));
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record?;
        let field = record.get(col).context("short CSV record")?;
        values.push(field.trim().parse::<f64>().with_context(|| format!("bad value {field:?}"))?);
    }
    Ok(Weight::sampled(values)?)
}

fn parse_weight(spec: &str) -> anyhow::Result<Weight> {
    if spec == "const" {
        return Ok(Weight::constant());
    }
    match spec.split_once(':') {
        Some(("power", a)) => Ok(Weight::power(a.parse().with_context(|| format!("bad exponent {a:?}"))?)),
        Some(("sampled", path)) => read_sampled(Path::new(path)),
        _ => bail!("weight must be power:a, const or sampled:FILE (got {spec:?})"),
    }
}

pub fn characteristic(spec: &str, p: f64, rh: Option<f64>, depth: i32) -> anyhow::Result<Report> {
    let weight = parse_weight(spec)?;
    let family = IntervalFamily::Union(vec![
        IntervalFamily::Dyadic { depth },
        IntervalFamily::Geometric { n_max: 60 },
    ]);
    let mut rows = Vec::new();
    let ap = ap_characteristic(&weight, p, &family)?;
    rows.push(json!({"class": "A_p", "exponent": p, "value": ap.value, "witness_lo": ap.witness.lo, "witness_hi": ap.witness.hi}));
    let mut passed = !ap.value.is_nan() && ap.value >= 1.0 - EXPONENT_TOL;
    let rh_report = match rh {
        Some(q) => {
            let r = rh_characteristic(&weight, q, &family)?;
            passed &= !r.value.is_nan() && r.value >= 1.0 - EXPONENT_TOL;
            rows.push(json!({"class": "RH_q", "exponent": q, "value": r.value, "witness_lo": r.witness.lo, "witness_hi": r.witness.hi}));
            Some(r)
        }
        None => None,
    };
    let weight_json = match &weight {
        Weight::Sampled { values } => json!({"kind": "sampled", "cells": values.len()}),
        w => to_value(w)?,
    };
    Ok(Report {
        json: json!({"weight": weight_json, "family": family.to_string(), "ap": ap, "rh": rh_report}),
        rows,
        passed,
    })
}

pub struct CalderonArgs {
    pub modes: usize,
    pub order: u32,
    pub tmin: f64,
    pub tmax: f64,
    pub quad: usize,
    pub grid: u32,
    pub seed: u64,
    pub tol: f64,
    pub export: Option<PathBuf>,
}

pub fn calderon(a: CalderonArgs) -> anyhow::Result<Report> {
    if a.modes == 0 || a.modes >= 1 << (a.grid.max(1) - 1) {
        bail!("modes must lie in 1..{}", 1u64 << (a.grid.max(1) - 1));
    }
    let f = random_band_limited(a.seed, a.modes, a.grid);
    if let Some(path) = &a.export {
        std::fs::write(path, f.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    let quad = LogQuadrature::new(a.tmin, a.tmax, a.quad)?;
    let residual = calderon_residual(&f, a.order, &quad)?;
    let row = json!({
        "cells": f.len(), "modes": a.modes, "order": a.order, "t_min": a.tmin, "t_max": a.tmax,
        "points_per_decade": a.quad, "nodes": quad.nodes().len(), "residual": residual, "tolerance": a.tol,
    });
    Ok(Report {
        json: row.clone(),
        rows: vec![row],
        passed: residual <= a.tol,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn odprobe(
    kind: ProbeKind,
    t: f64,
    order: u32,
    centre: f64,
    gap_max: u32,
    p_in: f64,
    q_out: f64,
    grid: u32,
) -> anyhow::Result<Report> {
    let op = match kind {
        ProbeKind::Heat => MultiplierOperator::heat(t),
        ProbeKind::Q => MultiplierOperator::q_t(t, order),
    };
    let gaps: Vec<f64> = (1..=gap_max).map(f64::from).collect();
    let fit = off_diagonal_probe(&op, t, centre, &gaps, p_in, q_out, 1 << grid)?;
    // heat: Gaussian rate inside [0.1, 0.3]; Q: normalized norm times d²/t stays bounded
    let (check, passed) = match kind {
        ProbeKind::Heat => ("decay rate c in [0.1, 0.3]", (0.1..=0.3).contains(&fit.c)),
        ProbeKind::Q => {
            let sup = fit
                .samples
                .iter()
                .fold(0.0, |m: f64, s| m.max(s.normalized * s.gap_sq_over_t));
            ("normalized * d^2/t <= 1.5", sup <= 1.5)
        }
    };
    let rows = fit.samples.iter().map(to_value).collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Report {
        json: json!({"operator": op.name(), "t": t, "fit": fit, "check": check, "passed": passed}),
        rows,
        passed,
    })
}

pub struct DominateArgs {
    pub operator: OperatorKind,
    pub grid: u32,
    pub eta: String,
    pub p0: f64,
    pub q0: f64,
    pub order: u32,
    pub pairs: usize,
    pub seed: u64,
    pub spread: f64,
    pub export: Option<PathBuf>,
}

pub fn dominate(a: DominateArgs) -> anyhow::Result<Report> {
    let op = match a.operator {
        OperatorKind::Hilbert => MultiplierOperator::hilbert(),
        OperatorKind::Identity => MultiplierOperator::identity(),
        OperatorKind::Zero => MultiplierOperator::zero(),
    };
    if a.pairs == 0 {
        bail!("need at least one pair");
    }
    // the recursion does not use p; the critical exponent is always admissible
    let cfg = make_config(a.p0, a.q0, critical_exponent(a.p0, a.q0)?)?;
    let root = DyadicCube::new(0, 0, 0);
    let corpus = random_corpus(&MultiplierOperator::hilbert(), a.seed, a.pairs, a.grid);
    if let Some(dir) = &a.export {
        std::fs::create_dir_all(dir)?;
        for (i, (f, g)) in corpus.iter().enumerate() {
            std::fs::write(dir.join(format!("f_{i}.csv")), f.to_csv())?;
            std::fs::write(dir.join(format!("g_{i}.csv")), g.to_csv())?;
        }
    }
    let (eta, calibration) = if a.eta == "auto" {
        let c = calibrate_eta(&op, &corpus, root, cfg, a.order)?;
        (c.eta, Some(c))
    } else {
        (a.eta.parse::<f64>().with_context(|| format!("bad eta {:?}", a.eta))?, None)
    };
    let params = DominationParams {
        cfg,
        order: a.order,
        eta,
        max_depth: None,
    };
    let mut runs = Vec::new();
    let mut rows = Vec::new();
    for (i, (f, g)) in corpus.iter().enumerate() {
        let r = sparse_dominate(&op, f, g, root, params)?;
        rows.push(json!({
            "pair": i, "lhs": r.lhs, "rhs_form": r.rhs_form, "constant": r.constant, "sparse": r.sparse,
            "packing_ratio": r.packing_ratio, "cubes": r.collection.len(), "levels": r.log.len(),
            "k_tilde": r.k_tilde, "resolution_exhausted": r.resolution_exhausted,
        }));
        runs.push(r);
    }
    let positive: Vec<f64> = runs.iter().map(|r| r.constant).filter(|c| *c > 0.0).collect();
    let cmax = positive.iter().cloned().fold(0.0, f64::max);
    let cmin = positive.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = if positive.is_empty() { 1.0 } else { cmax / cmin };
    let all_sparse = runs.iter().all(|r| r.sparse);
    let passed = all_sparse && cmax.is_finite() && spread <= a.spread;
    Ok(Report {
        json: json!({
            "operator": op.name(), "grid_cells": 1u64 << a.grid, "p0": a.p0, "q0": a.q0, "order": a.order,
            "eta": eta, "calibration": calibration, "corpus_constant": cmax, "constant_spread": spread,
            "all_sparse": all_sparse, "passed": passed, "runs": runs,
        }),
        rows,
        passed,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn sharpness(
    range: Range,
    p0: f64,
    q0: f64,
    p: f64,
    eps_min: f64,
    eps_max: f64,
    slope_tol: f64,
    max_spread: f64,
) -> anyhow::Result<Report> {
    let cfg = make_config(p0, q0, p)?;
    let eps = eps_between(eps_min, eps_max)?;
    let family = IntervalFamily::standard();
    let report = match range {
        Range::Lower => sharpness_lower(&cfg, &eps, &family)?,
        Range::Upper => sharpness_upper(&cfg, &eps, &family)?,
    };
    let fit_ok = |f: &SlopeFit| (f.slope - report.expected_slope).abs() <= slope_tol && f.r_squared >= 0.99;
    let passed = fit_ok(&report.lhs_fit) && fit_ok(&report.rhs_fit) && report.ratio_spread <= max_spread;
    let rows = report.rows.iter().map(to_value).collect::<anyhow::Result<Vec<_>>>()?;
    let mut json = to_value(&report)?;
    json["passed"] = json!(passed);
    Ok(Report { json, rows, passed })
}

#[allow(clippy::too_many_arguments)]
pub fn scan_bound(
    p0: f64,
    q0: f64,
    p: f64,
    eps_min: f64,
    eps_max: f64,
    collection: &str,
    delta: f64,
    max_spread: f64,
) -> anyhow::Result<Report> {
    let cfg = make_config(p0, q0, p)?;
    if !cfg.in_lower_range() {
        bail!("the scan family needs p <= {} (got p = {p})", cfg.critical);
    }
    let form = match collection.split_once(':') {
        None if collection == "canonical" => FormEvaluator::Canonical,
        Some(("finite", n)) => FormEvaluator::Collection(canonical_collection(n.parse()?)),
        _ => bail!("collection must be canonical or finite:N (got {collection:?})"),
    };
    let eps = eps_between(eps_min, eps_max)?;
    if eps.len() < 3 {
        bail!("need at least three ε values");
    }
    let scan = weighted_bound_scan(&form, &lower_range_scan_entries(&cfg, &eps), &cfg, &IntervalFamily::standard())?;
    let weaker: Vec<f64> = scan.iter().map(|r| r.normalized_by(cfg.alpha - delta)).collect();
    let sharp: Vec<f64> = scan.iter().map(|r| r.normalized).collect();
    let lo = sharp.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = sharp.iter().cloned().fold(0.0, f64::max);
    let spread = hi / lo;
    let monotone = weaker.windows(2).all(|w| w[1] > w[0]);
    let growth = weaker[weaker.len() - 1] / weaker[0];
    let fit = SlopeFit::new(&eps, &weaker, eps[2])?;
    let passed = spread <= max_spread && monotone && growth > spread;
    let rows: Vec<Value> = scan
        .iter()
        .zip(&weaker)
        .map(|(r, w)| {
            json!({"eps": r.label, "weight_exponent": r.weight_exponent, "bound": r.bound,
                   "characteristic": r.characteristic, "normalized": r.normalized, "normalized_weaker": w})
        })
        .collect();
    Ok(Report {
        json: json!({
            "config": cfg, "alpha": cfg.alpha, "competing_power": cfg.alpha - delta,
            "normalized_spread": spread, "weaker_monotone": monotone, "weaker_growth": growth,
            "weaker_slope": fit.slope, "weaker_r_squared": fit.r_squared, "passed": passed, "rows": scan,
        }),
        rows,
        passed,
    })
}
