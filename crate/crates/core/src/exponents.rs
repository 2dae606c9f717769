//! Exponent algebra for the sharp weighted bounds.
//!
//! Infinite exponents are represented by `f64::INFINITY` and every formula
//! below takes the corresponding limit explicitly, so `q0 = inf` never
//! produces a NaN.

use crate::error::{Error, Result};
use serde::Serialize;

/// Tolerance used for exponent identities.
pub const EXPONENT_TOL: f64 = 1e-12;

/// Hölder conjugate `e'` with `1/e + 1/e' = 1`.
pub fn conjugate(e: f64) -> Result<f64> {
    if e.is_nan() || e < 1.0 {
        return Err(Error::Domain(e));
    }
    Ok(conj(e))
}

// Conjugate for exponents already known to be >= 1.
pub(crate) fn conj(e: f64) -> f64 {
    if e == 1.0 {
        f64::INFINITY
    } else if e.is_infinite() {
        1.0
    } else {
        e / (e - 1.0)
    }
}

fn check_pair(p0: f64, q0: f64) -> Result<()> {
    if p0.is_nan() || q0.is_nan() {
        return Err(Error::Config("exponents must not be NaN".into()));
    }
    if p0 < 1.0 {
        return Err(Error::Config(format!("1 <= p0 violated (p0 = {p0})")));
    }
    if p0 >= 2.0 {
        return Err(Error::Config(format!("p0 < 2 violated (p0 = {p0})")));
    }
    if q0 <= 2.0 {
        return Err(Error::Config(format!("2 < q0 violated (q0 = {q0})")));
    }
    Ok(())
}

/// The exponent `1 + p0/q0'` where the two branches of the sharp power meet.
pub fn critical_exponent(p0: f64, q0: f64) -> Result<f64> {
    check_pair(p0, q0)?;
    Ok(1.0 + p0 / conj(q0))
}

/// A validated triple `(p0, q0, p)` with every derived exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentConfig {
    pub p0: f64,
    pub q0: f64,
    pub p: f64,
    pub p0_conj: f64,
    pub q0_conj: f64,
    pub p_conj: f64,
    /// `1 + p0/q0'`.
    pub critical: f64,
    /// `(q0/p)'`, the reverse Hölder exponent of the weight class.
    pub rh_exponent: f64,
    /// `p/p0`, the Muckenhoupt exponent of the weight class.
    pub ap_exponent: f64,
    pub r: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub beta_bar: f64,
    pub gamma: f64,
}

impl ExponentConfig {
    pub fn new(p0: f64, q0: f64, p: f64) -> Result<Self> {
        check_pair(p0, q0)?;
        if p.is_nan() || p <= p0 {
            return Err(Error::Config(format!("p0 < p violated (p0 = {p0}, p = {p})")));
        }
        if p >= q0 {
            return Err(Error::Config(format!("p < q0 violated (p = {p}, q0 = {q0})")));
        }

        let p0_conj = conj(p0);
        let q0_conj = conj(q0);
        let p_conj = conj(p);
        let critical = 1.0 + p0 / q0_conj;
        let rh_exponent = conj(q0 / p);
        let ap_exponent = p / p0;
        let r = rh_exponent * (p / p0 - 1.0) + 1.0;
        let delta = q0_conj.min(p0 * (r - 1.0));
        let alpha = rh_exponent / delta;
        let beta = 1.0 / p0 - (r - 1.0) / q0_conj;
        let beta_bar = 1.0 / q0_conj - 1.0 / delta;
        let gamma = 1.0 / (1.0 - beta);

        Ok(Self {
            p0,
            q0,
            p,
            p0_conj,
            q0_conj,
            p_conj,
            critical,
            rh_exponent,
            ap_exponent,
            r,
            delta,
            alpha,
            beta,
            beta_bar,
            gamma,
        })
    }

    /// `max{1/(p - p0), (q0 - 1)/(q0 - p)}`, computed without going through `delta`.
    pub fn alpha_closed_form(&self) -> f64 {
        let lower = 1.0 / (self.p - self.p0);
        let upper = if self.q0.is_infinite() {
            1.0
        } else {
            (self.q0 - 1.0) / (self.q0 - self.p)
        };
        lower.max(upper)
    }

    /// True when `p <= critical`, where `alpha = 1/(p - p0)`.
    pub fn in_lower_range(&self) -> bool {
        self.p <= self.critical
    }

    /// `-beta/(r - 1)`, the value of `beta_bar` that makes `u^{-beta} = v^{-beta_bar}`.
    /// Agrees with `beta_bar` exactly when `beta >= 0`.
    pub fn beta_bar_from_beta(&self) -> f64 {
        -self.beta / (self.r - 1.0)
    }

    /// `r'`, used by the identity `u = v^(1 - r')`.
    pub fn r_conj(&self) -> f64 {
        conj(self.r)
    }

    /// Exponent `(p0'/p')'` turning `sigma` into `u`.
    pub fn u_exponent(&self) -> f64 {
        conj(self.p0_conj / self.p_conj)
    }
}

/// Alias matching the operation name used by the CLI.
pub fn make_config(p0: f64, q0: f64, p: f64) -> Result<ExponentConfig> {
    ExponentConfig::new(p0, q0, p)
}
