//! Sweeps over the power-weight families: sharpness of the exponent in both
//! ranges, and the weighted bound of the sparse form against the combined
//! characteristic.
//!
//! Every norm and form here comes from an exact antiderivative or a closed
//! geometric sum; no grid enters.

use crate::error::{Error, Result};
use crate::exponents::ExponentConfig;
use crate::sparse::{canonical_power_form, sparse_form, SparseCollection, TestFunction};
use crate::weights::{combined_characteristic, IntervalFamily, Weight};
use rayon::prelude::*;
use serde::Serialize;

/// Least-squares line through `(log ε, log value)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub eps: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// ε range used by the fit.
    pub window: (f64, f64),
}

impl SlopeFit {
    /// Fits over the points with `ε <= eps_max`.
    pub fn new(eps: &[f64], values: &[f64], eps_max: f64) -> Result<Self> {
        let pts: Vec<(f64, f64)> = eps
            .iter()
            .zip(values)
            .filter(|(e, v)| **e <= eps_max && v.is_finite() && **v > 0.0)
            .map(|(e, v)| (e.ln(), v.ln()))
            .collect();
        if pts.len() < 2 {
            return Err(Error::Degenerate("fewer than two points in the fit window".into()));
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let sse: f64 = pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
        let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
        let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min).exp();
        let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max).exp();
        Ok(Self {
            eps: eps.to_vec(),
            values: values.to_vec(),
            slope,
            intercept,
            r_squared,
            window: (lo, hi),
        })
    }
}

/// `{2^-k : k = 4..=14}`.
pub fn default_eps() -> Vec<f64> {
    eps_powers_of_two(4, 14)
}

/// `{2^-k : k = k_min..=k_max}`, largest first.
pub fn eps_powers_of_two(k_min: i32, k_max: i32) -> Vec<f64> {
    (k_min..=k_max).map(|k| 2f64.powi(-k)).collect()
}

/// Powers of two inside `[eps_min, eps_max]`, largest first.
pub fn eps_between(eps_min: f64, eps_max: f64) -> Result<Vec<f64>> {
    if !(eps_min > 0.0 && eps_max >= eps_min) {
        return Err(Error::Degenerate(format!("bad ε range [{eps_min}, {eps_max}]")));
    }
    let k_min = (-eps_max.log2()).ceil() as i32;
    let k_max = (-eps_min.log2()).floor() as i32;
    Ok(eps_powers_of_two(k_min, k_max))
}

/// Fit window: every ε except the two largest.
fn window_max(eps: &[f64]) -> f64 {
    let mut sorted = eps.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sorted.get(2).copied().unwrap_or(sorted[0])
}

/// `(∫_0^1 x^e dx)^{1/s}` for `e > -1`.
fn power_norm(e: f64, s: f64) -> f64 {
    (1.0 / (e + 1.0)).powf(1.0 / s)
}

/// One row of a sharpness sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpnessRow {
    pub eps: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub characteristic: f64,
    pub norm_f: f64,
    pub norm_g: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessReport {
    pub range: &'static str,
    pub config: ExponentConfig,
    pub rows: Vec<SharpnessRow>,
    pub lhs_fit: SlopeFit,
    pub rhs_fit: SlopeFit,
    pub characteristic_fit: SlopeFit,
    /// `max / min` of `lhs / rhs` over the sweep.
    pub ratio_spread: f64,
    pub expected_slope: f64,
    /// Slope of `lhs / (‖f‖ ‖g‖)` over the slope of the characteristic: the
    /// power of the characteristic the extremal family forces.
    pub alpha_estimate: f64,
}

impl SharpnessReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,lhs,rhs,characteristic,norm_f,norm_g,ratio\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.eps, r.lhs, r.rhs, r.characteristic, r.norm_f, r.norm_g, r.ratio
            ));
        }
        out
    }
}

fn finish(range: &'static str, cfg: &ExponentConfig, rows: Vec<SharpnessRow>, expected_slope: f64) -> Result<SharpnessReport> {
    let eps: Vec<f64> = rows.iter().map(|r| r.eps).collect();
    let wmax = window_max(&eps);
    let col = |f: fn(&SharpnessRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let lhs_fit = SlopeFit::new(&eps, &col(|r| r.lhs), wmax)?;
    let rhs_fit = SlopeFit::new(&eps, &col(|r| r.rhs), wmax)?;
    let characteristic_fit = SlopeFit::new(&eps, &col(|r| r.characteristic), wmax)?;
    let normalized_fit = SlopeFit::new(&eps, &col(|r| r.lhs / (r.norm_f * r.norm_g)), wmax)?;
    let alpha_estimate = normalized_fit.slope / characteristic_fit.slope;
    let ratios = col(|r| r.ratio);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(SharpnessReport {
        range,
        config: *cfg,
        rows,
        lhs_fit,
        rhs_fit,
        characteristic_fit,
        ratio_spread: hi / lo,
        expected_slope,
        alpha_estimate,
    })
}

fn check_eps(eps: &[f64]) -> Result<()> {
    if eps.len() < 3 || eps.iter().any(|&e| !(e > 0.0 && e <= 0.5)) {
        return Err(Error::Degenerate("ε list needs at least three values in (0, 1/2]".into()));
    }
    Ok(())
}

/// First range `p0 < p <= 1 + p0/q0'`: `f = x^{-1/p0+ε}`, `g = x^{-1/p0'+ε}`,
/// weight `x^{p/p0-1-ε}`. Both sides should scale like `ε^{-1-1/p0}`.
pub fn sharpness_lower(cfg: &ExponentConfig, eps: &[f64], family: &IntervalFamily) -> Result<SharpnessReport> {
    if !cfg.in_lower_range() {
        return Err(Error::WrongRange { p: cfg.p, range: "lower" });
    }
    check_eps(eps)?;
    let rows = eps
        .par_iter()
        .map(|&e| {
            let a = -1.0 / cfg.p0 + e;
            let b = -1.0 / cfg.p0_conj + e;
            let lhs = canonical_power_form((1.0, a), (1.0, b), cfg.p0, cfg.q0_conj)?.infinite();
            let w = cfg.p / cfg.p0 - 1.0 - e;
            let characteristic = combined_characteristic(&Weight::power(w), cfg, family)?;
            let norm_f = power_norm(a * cfg.p + w, cfg.p);
            let norm_g = power_norm(b * cfg.p_conj + w * (1.0 - cfg.p_conj), cfg.p_conj);
            let rhs = characteristic.powf(cfg.alpha) * norm_f * norm_g;
            Ok(SharpnessRow {
                eps: e,
                lhs,
                rhs,
                characteristic,
                norm_f,
                norm_g,
                ratio: lhs / rhs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    finish("lower", cfg, rows, -1.0 - 1.0 / cfg.p0)
}

/// Second range `1 + p0/q0' <= p < q0`: the `p0`-averaged input is
/// `x^{-1/q0+ε}`, the `q0'`-averaged one `x^{-1/q0'+ε}`, and the weight is
/// `x^{-1/(q0/p)' + (p-1)ε}` with its dual `x^{p'/q0'-1-ε}` on the second
/// input. Both sides should scale like `ε^{-1-1/q0'}`.
pub fn sharpness_upper(cfg: &ExponentConfig, eps: &[f64], family: &IntervalFamily) -> Result<SharpnessReport> {
    if cfg.p < cfg.critical {
        return Err(Error::WrongRange { p: cfg.p, range: "upper" });
    }
    check_eps(eps)?;
    let inv_q0 = if cfg.q0.is_infinite() { 0.0 } else { 1.0 / cfg.q0 };
    let rows = eps
        .par_iter()
        .map(|&e| {
            let a = -inv_q0 + e;
            let b = -1.0 / cfg.q0_conj + e;
            let lhs = canonical_power_form((1.0, a), (1.0, b), cfg.p0, cfg.q0_conj)?.infinite();
            let w = -1.0 / cfg.rh_exponent + (cfg.p - 1.0) * e;
            let characteristic = combined_characteristic(&Weight::power(w), cfg, family)?;
            let norm_f = power_norm(a * cfg.p + w, cfg.p);
            let norm_g = power_norm(b * cfg.p_conj + w * (1.0 - cfg.p_conj), cfg.p_conj);
            let rhs = characteristic.powf(cfg.alpha) * norm_f * norm_g;
            Ok(SharpnessRow {
                eps: e,
                lhs,
                rhs,
                characteristic,
                norm_f,
                norm_g,
                ratio: lhs / rhs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    finish("upper", cfg, rows, -1.0 - 1.0 / cfg.q0_conj)
}

/// How the sparse form is evaluated in a scan.
#[derive(Debug, Clone, PartialEq)]
pub enum FormEvaluator {
    /// The infinite canonical collection, by its closed geometric sum.
    Canonical,
    /// A finite collection with `λ = 1`.
    Collection(SparseCollection),
}

/// A power pair `(c_f x^a, c_g x^b)` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerPair {
    pub f: (f64, f64),
    pub g: (f64, f64),
}

/// One weight of a scan with its test bank.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanEntry {
    pub label: f64,
    pub weight_exponent: f64,
    pub bank: Vec<PowerPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub label: f64,
    pub weight_exponent: f64,
    /// `max_bank form / (‖f‖_{L^p_ω} ‖g‖_{L^{p'}_σ})`
    pub bound: f64,
    pub characteristic: f64,
    /// `bound / characteristic^α`
    pub normalized: f64,
    /// Bank pairs skipped for divergent norms or forms.
    pub skipped: Vec<String>,
}

impl ScanRow {
    /// `bound / characteristic^power`.
    pub fn normalized_by(&self, power: f64) -> f64 {
        self.bound / self.characteristic.powf(power)
    }
}

fn pair_ratio(form: &FormEvaluator, pair: &PowerPair, w: f64, cfg: &ExponentConfig) -> Result<f64> {
    let ef = pair.f.1 * cfg.p + w;
    let eg = pair.g.1 * cfg.p_conj + w * (1.0 - cfg.p_conj);
    if ef <= -1.0 || eg <= -1.0 {
        return Err(Error::Degenerate(format!("divergent norm for pair {pair:?}")));
    }
    let norms = pair.f.0.abs() * power_norm(ef, cfg.p) * pair.g.0.abs() * power_norm(eg, cfg.p_conj);
    let value = match form {
        FormEvaluator::Canonical => canonical_power_form(pair.f, pair.g, cfg.p0, cfg.q0_conj)?.infinite(),
        FormEvaluator::Collection(s) => {
            let f = TestFunction::Power {
                coef: pair.f.0,
                exponent: pair.f.1,
            };
            let g = TestFunction::Power {
                coef: pair.g.0,
                exponent: pair.g.1,
            };
            sparse_form(s, &f, &g, cfg, 1.0)?.value
        }
    };
    if !value.is_finite() {
        return Err(Error::Degenerate(format!("divergent form for pair {pair:?}")));
    }
    Ok(value / norms)
}

/// Per weight `x^a`, the largest normalized form over its bank against the
/// combined characteristic.
pub fn weighted_bound_scan(
    form: &FormEvaluator,
    entries: &[ScanEntry],
    cfg: &ExponentConfig,
    family: &IntervalFamily,
) -> Result<Vec<ScanRow>> {
    entries
        .par_iter()
        .map(|entry| {
            let w = entry.weight_exponent;
            let characteristic = combined_characteristic(&Weight::power(w), cfg, family)?;
            let mut bound: f64 = 0.0;
            let mut skipped = Vec::new();
            for pair in &entry.bank {
                match pair_ratio(form, pair, w, cfg) {
                    Ok(r) => bound = bound.max(r),
                    Err(e) => skipped.push(e.to_string()),
                }
            }
            Ok(ScanRow {
                label: entry.label,
                weight_exponent: w,
                bound,
                characteristic,
                normalized: bound / characteristic.powf(cfg.alpha),
                skipped,
            })
        })
        .collect()
}

/// The lower-range family `x^{p/p0-1-ε}` with the extremal pair at `ε`, the
/// pair at `2ε`, and the indicator pair.
pub fn lower_range_scan_entries(cfg: &ExponentConfig, eps: &[f64]) -> Vec<ScanEntry> {
    eps.iter()
        .map(|&e| {
            let extremal = |t: f64| PowerPair {
                f: (1.0, -1.0 / cfg.p0 + t),
                g: (1.0, -1.0 / cfg.p0_conj + t),
            };
            ScanEntry {
                label: e,
                weight_exponent: cfg.p / cfg.p0 - 1.0 - e,
                bank: vec![
                    extremal(e),
                    extremal(2.0 * e),
                    PowerPair {
                        f: (1.0, 0.0),
                        g: (1.0, 0.0),
                    },
                ],
            }
        })
        .collect()
}
