//! Sparse collections, the packing verifier and the bilinear sparse form.

use crate::dyadic::{DyadicCube, Interval, WORKING_WINDOW};
use crate::error::{Error, Result};
use crate::exponents::ExponentConfig;
use crate::grid::{self, GridFunction};
use crate::weights::power_average;
use rayon::prelude::*;
use serde::Serialize;

/// Finite set of cubes, possibly from both systems.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SparseCollection {
    cubes: Vec<DyadicCube>,
}

impl SparseCollection {
    /// Duplicates are dropped; first occurrence order is kept.
    pub fn new(cubes: impl IntoIterator<Item = DyadicCube>) -> Self {
        let mut out = Self::default();
        for c in cubes {
            out.push(c);
        }
        out
    }

    pub fn push(&mut self, cube: DyadicCube) {
        if !self.cubes.contains(&cube) {
            self.cubes.push(cube);
        }
    }

    pub fn extend(&mut self, other: &SparseCollection) {
        for &c in &other.cubes {
            self.push(c);
        }
    }

    pub fn cubes(&self) -> &[DyadicCube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    /// Maximal members strictly inside `parent`.
    pub fn children_of(&self, parent: &DyadicCube) -> Vec<DyadicCube> {
        let mut inside: Vec<DyadicCube> = self.cubes.iter().copied().filter(|c| parent.strictly_contains(c)).collect();
        // Containers are at least as long, so longest-first sees them before their contents.
        inside.sort_by_key(|c| c.level);
        let mut maximal: Vec<DyadicCube> = Vec::new();
        for c in inside {
            if !maximal.iter().any(|m| m.contains_cube(&c)) {
                maximal.push(c);
            }
        }
        maximal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SparsenessReport {
    pub sparse: bool,
    /// Largest `Σ_{children} μ(Q) / μ(P)` over the collection.
    pub worst_ratio: f64,
    pub worst_cube: Option<DyadicCube>,
}

/// Checks `Σ_{Q ∈ ch(P)} μ(Q) <= μ(P)/2` for every member `P`.
pub fn is_sparse(collection: &SparseCollection) -> SparsenessReport {
    let ratios: Vec<(f64, DyadicCube)> = collection
        .cubes
        .par_iter()
        .map(|p| {
            let covered = collection.children_of(p).iter().fold(0.0, |acc, c| acc + c.measure());
            (covered / p.measure(), *p)
        })
        .collect();
    let mut report = SparsenessReport {
        sparse: true,
        worst_ratio: 0.0,
        worst_cube: None,
    };
    for (ratio, cube) in ratios {
        if ratio > report.worst_ratio {
            report.worst_ratio = ratio;
            report.worst_cube = Some(cube);
        }
    }
    report.sparse = report.worst_ratio <= 0.5;
    report
}

/// `{[0, 2^-n) : 0 <= n <= n_max}` in the standard system.
pub fn canonical_collection(n_max: u32) -> SparseCollection {
    SparseCollection::new((0..=n_max as i32).map(|n| DyadicCube::new(0, n, 0)))
}

/// Input of the sparse form.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// `coef · x^exponent` on `[0, 1]`, zero elsewhere.
    Power { coef: f64, exponent: f64 },
    /// Grid values on the torus, extended periodically.
    Sampled(GridFunction),
}

impl TestFunction {
    pub fn power(exponent: f64) -> Self {
        TestFunction::Power { coef: 1.0, exponent }
    }

    pub fn scaled(&self, c: f64) -> Self {
        match self {
            TestFunction::Power { coef, exponent } => TestFunction::Power {
                coef: coef * c,
                exponent: *exponent,
            },
            TestFunction::Sampled(g) => TestFunction::Sampled(g.map(|v| v * c)),
        }
    }

    /// `(⨏_I |f|^s)^{1/s}`; `+inf` when the integrand is not integrable.
    pub fn lp_average(&self, interval: Interval, s: f64) -> f64 {
        match self {
            TestFunction::Power { coef, exponent } => {
                let Some(part) = interval.intersect(&Interval::new(0.0, 1.0)) else {
                    return 0.0;
                };
                let avg = power_average(exponent * s, part.lo, part.hi) * part.length() / interval.length();
                coef.abs() * avg.powf(1.0 / s)
            }
            TestFunction::Sampled(g) => {
                let powered: Vec<f64> = g.values().iter().map(|v| v.abs().powf(s)).collect();
                grid::interval_average(&powered, interval.lo, interval.hi, true).powf(1.0 / s)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SparseFormValue {
    pub value: f64,
    /// First cube whose term diverged.
    pub offending: Option<DyadicCube>,
}

/// `Σ_P μ(P) (⨏_{λP} |f|^{p0})^{1/p0} (⨏_{λP} |g|^{q0'})^{1/q0'}`.
///
/// `λP` is clipped to the working window. Terms are evaluated in parallel
/// and summed in collection order.
pub fn sparse_form(
    collection: &SparseCollection,
    f: &TestFunction,
    g: &TestFunction,
    cfg: &ExponentConfig,
    lambda: f64,
) -> Result<SparseFormValue> {
    if !(lambda >= 1.0) {
        return Err(Error::Domain(lambda));
    }
    let terms: Vec<f64> = collection
        .cubes
        .par_iter()
        .map(|p| {
            let region = if lambda == 1.0 {
                p.interval()
            } else {
                p.dilate(lambda).intersect(&WORKING_WINDOW).unwrap_or(p.interval())
            };
            let a = f.lp_average(region, cfg.p0);
            let b = g.lp_average(region, cfg.q0_conj);
            let t = p.measure() * a * b;
            if t.is_nan() { f64::INFINITY } else { t }
        })
        .collect();
    let offending = terms.iter().position(|t| t.is_infinite()).map(|i| collection.cubes[i]);
    Ok(SparseFormValue {
        value: terms.iter().fold(0.0, |acc, t| acc + t),
        offending,
    })
}

/// The canonical form of a power pair `f = c_f x^a`, `g = c_g x^b` is the
/// geometric series `Σ_n prefactor · 2^{-n·decay}` with `decay = 1 + a + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerPairForm {
    pub prefactor: f64,
    pub decay: f64,
}

impl PowerPairForm {
    pub fn ratio(&self) -> f64 {
        2f64.powf(-self.decay)
    }

    // 1 - 2^{-k·decay}, accurate when decay is small
    fn one_minus_pow(&self, k: f64) -> f64 {
        -(-k * self.decay * std::f64::consts::LN_2).exp_m1()
    }

    /// Terms `0..=n_max`.
    pub fn partial(&self, n_max: u32) -> f64 {
        if self.decay == 0.0 {
            return self.prefactor * (n_max as f64 + 1.0);
        }
        self.prefactor * self.one_minus_pow(n_max as f64 + 1.0) / self.one_minus_pow(1.0)
    }

    pub fn infinite(&self) -> f64 {
        if self.decay <= 0.0 {
            f64::INFINITY
        } else {
            self.prefactor / self.one_minus_pow(1.0)
        }
    }

    /// `prefactor · ratio^n_max / (1 - ratio)`, which bounds every term past `n_max`.
    pub fn tail_bound(&self, n_max: u32) -> f64 {
        if self.decay <= 0.0 {
            f64::INFINITY
        } else {
            self.prefactor * self.ratio().powi(n_max as i32) / self.one_minus_pow(1.0)
        }
    }
}

/// Closed form of the canonical sparse form with `λ = 1` for power inputs.
pub fn canonical_power_form(f: (f64, f64), g: (f64, f64), p0: f64, q0_conj: f64) -> Result<PowerPairForm> {
    let ((cf, a), (cg, b)) = (f, g);
    let ef = a * p0 + 1.0;
    let eg = b * q0_conj + 1.0;
    if ef <= 0.0 || eg <= 0.0 {
        return Err(Error::Degenerate(format!(
            "power pair ({a}, {b}) is not locally integrable at exponents ({p0}, {q0_conj})"
        )));
    }
    Ok(PowerPairForm {
        prefactor: cf.abs() * cg.abs() / (ef.powf(1.0 / p0) * eg.powf(1.0 / q0_conj)),
        decay: 1.0 + a + b,
    })
}
