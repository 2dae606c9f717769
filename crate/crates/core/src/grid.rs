//! Sampled functions on the unit torus and exact integrals of their
//! piecewise-constant extension.

use crate::dyadic::Interval;
use crate::error::{Error, Result};
use serde::Serialize;

/// `n = 2^m` samples at the points `j/n`, read as the piecewise-constant
/// function equal to `values[j]` on `[j/n, (j+1)/n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || !values.len().is_power_of_two() {
            return Err(Error::Degenerate(format!(
                "grid size {} is not a power of two",
                values.len()
            )));
        }
        Ok(Self { values })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    /// Samples `f(j/n)`.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((0..n).map(|j| f(j as f64 / n as f64)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `log2` of the number of samples.
    pub fn depth(&self) -> i32 {
        self.values.len().trailing_zeros() as i32
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.values.len() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn point(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn without_mean(&self) -> Self {
        let m = self.mean();
        self.map(|v| v - m)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_size(other)?;
        Ok(Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn check_size(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(())
    }

    /// Riemann-sum `L^s` norm; `s = inf` gives the grid maximum.
    pub fn lp_norm(&self, s: f64) -> f64 {
        if s.is_infinite() {
            return self.values.iter().fold(0.0, |m, v| m.max(v.abs()));
        }
        let h = self.spacing();
        (self.values.iter().map(|v| v.abs().powf(s)).sum::<f64>() * h).powf(1.0 / s)
    }

    /// `∫ f g` over the torus.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_size(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>() * self.spacing())
    }

    /// Multiply by the indicator of `interval` read periodically.
    ///
    /// A cell is kept when its left endpoint, shifted by whole periods,
    /// falls inside the interval.
    pub fn restrict_periodic(&self, interval: Interval) -> Self {
        if interval.length() >= 1.0 {
            return self.clone();
        }
        let n = self.len();
        let mut values = vec![0.0; n];
        for (j, v) in values.iter_mut().enumerate() {
            let x = j as f64 / n as f64;
            let shifted = x - (x - interval.lo).div_euclid(1.0);
            if shifted < interval.hi {
                *v = self.values[j];
            }
        }
        Self { values }
    }

    /// CSV with header `x,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value\n");
        for (j, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{}\n", self.point(j), v));
        }
        out
    }
}

/// `∫_lo^hi` of the piecewise-constant function with the given cell values
/// on `[0, 1)`, extended periodically or by zero.
///
/// Sums the touched cells directly, so relative accuracy does not depend on
/// the interval being short.
pub fn interval_integral(values: &[f64], lo: f64, hi: f64, periodic: bool) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let n = values.len();
    let nf = n as f64;
    let a = lo * nf;
    let b = hi * nf;
    let first = a.floor() as i64;
    let last = b.ceil() as i64;
    let mut total = 0.0;
    for j in first..last {
        let idx = if periodic {
            j.rem_euclid(n as i64) as usize
        } else if j < 0 || j >= n as i64 {
            continue;
        } else {
            j as usize
        };
        let overlap = (b.min((j + 1) as f64) - a.max(j as f64)).max(0.0);
        total += overlap * values[idx];
    }
    total / nf
}

/// Average over `[lo, hi)`; see [`interval_integral`].
pub fn interval_average(values: &[f64], lo: f64, hi: f64, periodic: bool) -> f64 {
    interval_integral(values, lo, hi, periodic) / (hi - lo)
}

/// Largest cell value among cells that meet `[lo, hi)` with positive length.
pub fn interval_max(values: &[f64], lo: f64, hi: f64, periodic: bool) -> f64 {
    interval_extreme(values, lo, hi, periodic, f64::NEG_INFINITY, f64::max)
}

/// Smallest cell value among cells that meet `[lo, hi)` with positive length.
pub fn interval_min(values: &[f64], lo: f64, hi: f64, periodic: bool) -> f64 {
    interval_extreme(values, lo, hi, periodic, f64::INFINITY, f64::min)
}

fn interval_extreme(
    values: &[f64],
    lo: f64,
    hi: f64,
    periodic: bool,
    init: f64,
    pick: fn(f64, f64) -> f64,
) -> f64 {
    let n = values.len();
    let nf = n as f64;
    let a = lo * nf;
    let b = hi * nf;
    let first = a.floor() as i64;
    let last = b.ceil() as i64;
    let mut acc = init;
    for j in first..last {
        let overlap = b.min((j + 1) as f64) - a.max(j as f64);
        if overlap <= 0.0 {
            continue;
        }
        let v = if periodic {
            values[j.rem_euclid(n as i64) as usize]
        } else if j < 0 || j >= n as i64 {
            0.0
        } else {
            values[j as usize]
        };
        acc = pick(acc, v);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_power_of_two() {
        assert!(GridFunction::new(vec![1.0; 12]).is_err());
        assert!(GridFunction::new(vec![]).is_err());
        assert_eq!(GridFunction::new(vec![1.0; 16]).unwrap().depth(), 4);
    }

    #[test]
    fn integrals_of_cells() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert!((interval_integral(&v, 0.0, 1.0, false) - 2.5).abs() < 1e-15);
        assert!((interval_integral(&v, 0.125, 0.375, false) - 0.375).abs() < 1e-15);
        // one full period plus the first cell
        assert!((interval_integral(&v, -1.0, 0.25, true) - 2.75).abs() < 1e-15);
        assert!((interval_integral(&v, -1.0, 0.25, false) - 0.25).abs() < 1e-15);
        assert_eq!(interval_max(&v, 0.3, 0.6, false), 3.0);
        assert_eq!(interval_min(&v, 0.3, 0.6, false), 2.0);
        assert_eq!(interval_max(&v, 0.9, 1.1, true), 4.0);
        assert_eq!(interval_min(&v, 0.9, 1.1, true), 1.0);
    }

    #[test]
    fn periodic_restriction() {
        let f = GridFunction::new(vec![1.0; 8]).unwrap();
        let r = f.restrict_periodic(Interval::new(-0.25, 0.25));
        assert_eq!(r.values(), &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
        let all = f.restrict_periodic(Interval::new(-4.0, 5.0));
        assert_eq!(all, f);
    }

    #[test]
    fn norms() {
        let f = GridFunction::new(vec![1.0, -1.0, 1.0, -1.0]).unwrap();
        assert!((f.lp_norm(2.0) - 1.0).abs() < 1e-15);
        assert_eq!(f.lp_norm(f64::INFINITY), 1.0);
        assert_eq!(f.mean(), 0.0);
        assert!((f.inner(&f).unwrap() - 1.0).abs() < 1e-15);
    }
}
