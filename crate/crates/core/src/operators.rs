//! Spectral model on the unit torus: Fourier multipliers for the heat
//! semigroup, the `Q_t`/`P_t` calculus and the Hilbert transform, together
//! with the dyadic maximal operators and `T#`.
//!
//! The generator has symbol `(2πk)^2`, so the constant mode is a null mode.
//! `Q_t` and `P_t` both send it to zero; reproducing-formula checks are made
//! on mean-zero functions.

use crate::dyadic::{DyadicCube, Interval, WORKING_WINDOW};
use crate::error::{Error, Result};
use crate::grid::{self, GridFunction};
use crate::weights::Weight;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;
use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Eigenvalue of the generator at frequency `k`.
pub fn eigenvalue(k: i64) -> f64 {
    let w = 2.0 * PI * k as f64;
    w * w
}

fn ln_gamma_int(n: u32) -> f64 {
    (1..n).map(|j| (j as f64).ln()).sum()
}

/// `x^N e^{-x} / Γ(N)`, the scalar profile of `Q^(N)`.
pub fn q_profile(order: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (order as f64 * x.ln() - x - ln_gamma_int(order)).exp()
}

/// `Γ(N, x) / Γ(N) = e^{-x} Σ_{j<N} x^j / j!`, the scalar profile of `P^(N)`.
pub fn p_profile(order: u32, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..order {
        term *= x / j as f64;
        sum += term;
    }
    sum * (-x).exp()
}

/// `1 - Γ(N, x)/Γ(N)`, summed directly for small `x` to avoid cancellation.
pub fn p_complement(order: u32, x: f64) -> f64 {
    if x > order as f64 + 1.0 {
        return 1.0 - p_profile(order, x);
    }
    // e^{-x} Σ_{j >= N} x^j / j!
    let mut term = (order as f64 * x.ln() - x - ln_gamma_int(order + 1)).exp();
    if x == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut j = order;
    while term > sum * 1e-17 {
        sum += term;
        j += 1;
        term *= x / j as f64;
    }
    sum
}

type SymbolFn = dyn Fn(i64) -> Complex64 + Send + Sync;

/// Operator acting on Fourier coefficients by a bounded symbol.
#[derive(Clone)]
pub struct MultiplierOperator {
    name: String,
    symbol: Arc<SymbolFn>,
}

impl fmt::Debug for MultiplierOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierOperator").field("name", &self.name).finish()
    }
}

impl MultiplierOperator {
    pub fn from_fn(name: impl Into<String>, symbol: impl Fn(i64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            symbol: Arc::new(symbol),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbol(&self, k: i64) -> Complex64 {
        (self.symbol)(k)
    }

    pub fn identity() -> Self {
        Self::from_fn("identity", |_| Complex64::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Self::from_fn("zero", |_| Complex64::new(0.0, 0.0))
    }

    /// The generator `L = -d²/dx²`.
    pub fn generator() -> Self {
        Self::from_fn("generator", |k| Complex64::new(eigenvalue(k), 0.0))
    }

    /// `e^{-tL}`.
    pub fn heat(t: f64) -> Self {
        Self::from_fn(format!("heat(t={t})"), move |k| Complex64::new((-t * eigenvalue(k)).exp(), 0.0))
    }

    /// `Q_t^(N) = (tL)^N e^{-tL} / Γ(N)`.
    pub fn q_t(t: f64, order: u32) -> Self {
        assert!(order >= 1);
        Self::from_fn(format!("Q(t={t}, N={order})"), move |k| {
            Complex64::new(q_profile(order, t * eigenvalue(k)), 0.0)
        })
    }

    /// `P_t^(N) = Γ(N, tL) / Γ(N)`, with the constant mode sent to zero.
    pub fn p_t(t: f64, order: u32) -> Self {
        assert!(order >= 1);
        Self::from_fn(format!("P(t={t}, N={order})"), move |k| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(p_profile(order, t * eigenvalue(k)), 0.0)
            }
        })
    }

    /// `∫_0^t Q_s^(N) ds/s = Id - P_t^(N)` on mean-zero functions, in closed form.
    pub fn q_integral_below(t: f64, order: u32) -> Self {
        Self::from_fn(format!("∫_0^{t} Q ds/s (N={order})"), move |k| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(p_complement(order, t * eigenvalue(k)), 0.0)
            }
        })
    }

    /// Hilbert transform, symbol `-i sgn(k)`.
    pub fn hilbert() -> Self {
        Self::from_fn("hilbert", |k| Complex64::new(0.0, -(k.signum() as f64)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MultiplierOperator) -> Self {
        let (a, b) = (self.symbol.clone(), other.symbol.clone());
        Self::from_fn(format!("{}∘{}", self.name, other.name), move |k| a(k) * b(k))
    }

    /// Multiplier value at FFT bin `j` of an `n`-point grid. The Nyquist bin
    /// takes the mean of `±n/2` so Hermitian symbols keep real data real.
    fn bin_value(&self, j: usize, n: usize) -> Complex64 {
        let half = n / 2;
        if n >= 2 && j == half {
            let k = half as i64;
            return (self.symbol(k) + self.symbol(-k)) * 0.5;
        }
        let k = if j < half || n == 1 { j as i64 } else { j as i64 - n as i64 };
        self.symbol(k)
    }

    pub fn apply(&self, f: &GridFunction) -> GridFunction {
        Spectrum::of(f).apply(self)
    }
}

/// Forward transform of a grid function, reusable across several multipliers.
pub struct Spectrum {
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn of(f: &GridFunction) -> Self {
        let mut coeffs: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        PLANNER.with(|p| p.borrow_mut().plan_fft_forward(coeffs.len()).process(&mut coeffs));
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn apply(&self, op: &MultiplierOperator) -> GridFunction {
        let n = self.coeffs.len();
        let mut buf: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * op.bin_value(j, n))
            .collect();
        PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n).process(&mut buf));
        let scale = 1.0 / n as f64;
        GridFunction::new(buf.iter().map(|c| c.re * scale).collect()).expect("spectrum length is a power of two")
    }
}

/// Log-uniform trapezoid rule for `∫ F(t) dt/t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogQuadrature {
    pub t_min: f64,
    pub t_max: f64,
    pub points_per_decade: usize,
}

impl LogQuadrature {
    pub fn new(t_min: f64, t_max: f64, points_per_decade: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && points_per_decade > 0) {
            return Err(Error::Degenerate(format!(
                "bad quadrature range [{t_min}, {t_max}] at {points_per_decade} points per decade"
            )));
        }
        Ok(Self {
            t_min,
            t_max,
            points_per_decade,
        })
    }

    /// Nodes `t_i` with trapezoid weights in `log t`.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let (a, b) = (self.t_min.ln(), self.t_max.ln());
        let decades = (self.t_max / self.t_min).log10();
        let intervals = ((decades * self.points_per_decade as f64).ceil() as usize).max(1);
        let step = (b - a) / intervals as f64;
        (0..=intervals)
            .map(|i| {
                let w = if i == 0 || i == intervals { 0.5 * step } else { step };
                ((a + i as f64 * step).exp(), w)
            })
            .collect()
    }

    /// Aggregated symbol of `Σ_i w_i Q_{t_i}^(N)`.
    pub fn q_sum(&self, order: u32) -> MultiplierOperator {
        let nodes = self.nodes();
        MultiplierOperator::from_fn(format!("Σ Q (N={order})"), move |k| {
            let lambda = eigenvalue(k);
            let s: f64 = nodes.iter().map(|&(t, w)| w * q_profile(order, t * lambda)).sum();
            Complex64::new(s, 0.0)
        })
    }
}

fn relative_l2(a: &GridFunction, b: &GridFunction) -> Result<f64> {
    let denom = b.lp_norm(2.0);
    if denom == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(a.zip_with(b, |x, y| x - y)?.lp_norm(2.0) / denom)
}

/// `‖f̊ - Σ_quad Q_t^(N) f Δlog t‖₂ / ‖f̊‖₂` with `f̊ = f - mean(f)`.
pub fn calderon_residual(f: &GridFunction, order: u32, quad: &LogQuadrature) -> Result<f64> {
    let centred = f.without_mean();
    let reproduced = quad.q_sum(order).apply(f);
    relative_l2(&reproduced, &centred)
}

/// Relative error between `P_t^(N) f` and `f - ∫_0^t Q_s^(N) f ds/s`, the
/// integral taken by the log-uniform rule from `t_min` to `t`.
pub fn along_identity_check(f: &GridFunction, order: u32, t: f64, t_min: f64, points_per_decade: usize) -> Result<f64> {
    let centred = f.without_mean();
    let quad = LogQuadrature::new(t_min, t, points_per_decade)?;
    let spectrum = Spectrum::of(f);
    let p = spectrum.apply(&MultiplierOperator::p_t(t, order));
    let integral = spectrum.apply(&quad.q_sum(order));
    let rhs = centred.zip_with(&integral, |a, b| a - b)?;
    let denom = centred.lp_norm(2.0);
    if denom == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(p.zip_with(&rhs, |a, b| a - b)?.lp_norm(2.0) / denom)
}

/// Cells whose midpoints fall in `interval`, read periodically.
pub fn cells_in(interval: Interval, n: usize) -> Vec<usize> {
    (0..n)
        .filter(|&j| {
            let x = (j as f64 + 0.5) / n as f64;
            let shifted = x - (x - interval.lo).div_euclid(1.0);
            shifted < interval.hi
        })
        .collect()
}

/// Measured `‖op‖_{L^{p_in}(B1) → L^{q_out}(B2)}` over a bank of bumps in `B1`:
/// single-cell indicators and the indicator of `B1`.
pub fn off_diagonal_norm(
    op: &MultiplierOperator,
    b1: Interval,
    b2: Interval,
    p_in: f64,
    q_out: f64,
    n: usize,
) -> Result<f64> {
    let src = cells_in(b1, n);
    let dst = cells_in(b2, n);
    if src.is_empty() || dst.is_empty() {
        return Err(Error::Degenerate("probe balls contain no grid cells".into()));
    }
    let h = 1.0 / n as f64;
    let out_norm = |vals: &[f64], shift: usize| -> f64 {
        if q_out.is_infinite() {
            dst.iter().fold(0.0, |m, &j| m.max(vals[(j + n - shift) % n].abs()))
        } else {
            (dst.iter().map(|&j| vals[(j + n - shift) % n].abs().powf(q_out)).sum::<f64>() * h).powf(1.0 / q_out)
        }
    };
    let in_norm = |cells: usize| (cells as f64 * h).powf(1.0 / p_in);

    // Multipliers commute with translations: one column gives every cell bump.
    let mut delta = vec![0.0; n];
    delta[0] = 1.0;
    let column = op.apply(&GridFunction::new(delta)?);
    let mut best: f64 = src
        .iter()
        .map(|&j| out_norm(column.values(), j) / in_norm(1))
        .fold(0.0, f64::max);

    let mut block = vec![0.0; n];
    for &j in &src {
        block[j] = 1.0;
    }
    let image = op.apply(&GridFunction::new(block)?);
    best = best.max(out_norm(image.values(), 0) / in_norm(src.len()));
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OffDiagonalSample {
    pub gap_sq_over_t: f64,
    pub norm: f64,
    /// `norm / (|B1|^{-1/p_in} |B2|^{1/q_out})`
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffDiagonalFit {
    /// Fitted `c` in `normalized ≈ A e^{-c d²/t}`.
    pub c: f64,
    pub log_prefactor: f64,
    /// RMS residual of the log-linear fit.
    pub residual: f64,
    pub samples: Vec<OffDiagonalSample>,
}

/// Probes `op` between `B1 = [centre - √t, centre + √t)` and a ball of the same
/// radius at gap `d` with `d²/t` taken from `gaps_sq_over_t`, then fits the
/// Gaussian decay rate.
pub fn off_diagonal_probe(
    op: &MultiplierOperator,
    t: f64,
    centre: f64,
    gaps_sq_over_t: &[f64],
    p_in: f64,
    q_out: f64,
    n: usize,
) -> Result<OffDiagonalFit> {
    let r = t.sqrt();
    if !(r > 1.0 / n as f64) || gaps_sq_over_t.is_empty() {
        return Err(Error::Degenerate(format!("radius {r} is below the grid spacing")));
    }
    let b1 = Interval::new(centre - r, centre + r);
    let scale = (2.0 * r).powf(-1.0 / p_in) * (2.0 * r).powf(if q_out.is_infinite() { 0.0 } else { 1.0 / q_out });
    let mut samples = Vec::with_capacity(gaps_sq_over_t.len());
    for &g in gaps_sq_over_t {
        let gap = (g * t).sqrt();
        // torus distance must be realised on this side
        if 4.0 * r + 2.0 * gap >= 1.0 {
            return Err(Error::Degenerate(format!("gap {gap} wraps around the torus")));
        }
        let b2 = Interval::new(b1.hi + gap, b1.hi + gap + 2.0 * r);
        let norm = off_diagonal_norm(op, b1, b2, p_in, q_out, n)?;
        samples.push(OffDiagonalSample {
            gap_sq_over_t: g,
            norm,
            normalized: norm / scale,
        });
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.gap_sq_over_t, s.normalized.ln())).collect();
    let (slope, intercept, residual) = linear_fit(&pts);
    Ok(OffDiagonalFit {
        c: -slope,
        log_prefactor: intercept,
        residual,
        samples,
    })
}

/// Least squares `y = a x + b`; returns `(a, b, rms residual)`.
pub(crate) fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return (0.0, pts.first().map_or(0.0, |p| p.1), 0.0);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let b = my - a * mx;
    let rms = (pts.iter().map(|p| (p.1 - a * p.0 - b).powi(2)).sum::<f64>() / n).sqrt();
    (a, b, rms)
}

/// For every cell, the largest `value(Q)` over cubes `Q` of `system` with
/// levels `first..=last` containing the cell midpoint, optionally restricted
/// to cubes inside `root`. Cells outside `root` get `outside`.
fn sup_over_cubes(
    n: usize,
    system: u8,
    first: i32,
    last: i32,
    root: Option<DyadicCube>,
    outside: f64,
    mut value: impl FnMut(DyadicCube) -> f64,
) -> Vec<f64> {
    let h = 1.0 / n as f64;
    let mut out = vec![f64::NEG_INFINITY; n];
    let (lo, hi) = match root {
        Some(r) => (r.left(), r.right()),
        None => (0.0, 1.0),
    };
    for level in first..=last {
        let mut cube = DyadicCube::containing(system, level, lo.max(0.0) + 0.5 * h);
        loop {
            if cube.left() >= hi.min(1.0) {
                break;
            }
            if root.is_none_or(|r| r.contains_cube(&cube)) {
                let cells = cells_in_cube(&cube, n);
                if !cells.is_empty() {
                    let v = value(cube);
                    for j in cells {
                        out[j] = out[j].max(v);
                    }
                }
            }
            cube = DyadicCube::new(system, level, cube.index + 1);
        }
    }
    if let Some(r) = root {
        for (j, v) in out.iter_mut().enumerate() {
            if !r.contains_point((j as f64 + 0.5) * h) {
                *v = outside;
            }
        }
    }
    out
}

/// Cells of `[0, 1)` whose midpoints lie in the cube, without wrapping.
fn cells_in_cube(cube: &DyadicCube, n: usize) -> std::ops::Range<usize> {
    let nf = n as f64;
    let first = (cube.left() * nf - 0.5).ceil().max(0.0) as usize;
    let end = ((cube.right() * nf - 0.5).ceil().max(0.0) as usize).min(n);
    first.min(end)..end
}

/// `ℳ_s f(x) = sup (⨏_Q |f|^s)^{1/s}` over cubes of both systems containing
/// the cell midpoint, down to the cell itself.
pub fn hardy_littlewood(f: &GridFunction, s: f64) -> GridFunction {
    let n = f.len();
    let m = f.depth();
    let powered: Vec<f64> = f.values().iter().map(|v| v.abs().powf(s)).collect();
    let mut best = powered.clone();
    for system in 0..=1u8 {
        let sup = sup_over_cubes(n, system, 0, m, None, 0.0, |q| {
            grid::interval_average(&powered, q.left(), q.right(), true)
        });
        for (b, v) in best.iter_mut().zip(sup) {
            *b = b.max(v);
        }
    }
    GridFunction::new(best.into_iter().map(|v| v.powf(1.0 / s)).collect()).expect("same size")
}

/// `sup (1/h(Q)) ∫_Q |f| h` over cubes of one system containing the cell
/// midpoint. The weight is read on the torus grid of `f`.
pub fn weighted_dyadic_maximal(f: &GridFunction, weight: &Weight, system: u8) -> Result<GridFunction> {
    let n = f.len();
    let h = match weight.sampled_on(n) {
        Weight::Sampled { values } if values.len() == n => values,
        Weight::Sampled { values } => {
            return Err(Error::SizeMismatch {
                expected: n,
                got: values.len(),
            })
        }
        Weight::Power { .. } => unreachable!("sampled_on returns a sampled weight"),
    };
    let fh: Vec<f64> = f.values().iter().zip(&h).map(|(a, b)| a.abs() * b).collect();
    let cell: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
    let sup = sup_over_cubes(n, system, 0, f.depth(), None, 0.0, |q| {
        grid::interval_integral(&fh, q.left(), q.right(), true) / grid::interval_integral(&h, q.left(), q.right(), true)
    });
    GridFunction::new(cell.iter().zip(sup).map(|(a, b)| a.max(b)).collect())
}

/// One row of a weak-type level-set measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakTypeRow {
    pub lambda: f64,
    /// `h({M_h f > λ})`
    pub level_set_mass: f64,
    /// `‖f‖_{L¹(h)} / λ`
    pub bound: f64,
}

/// Level sets of the weighted dyadic maximal function against the weak (1,1) bound.
pub fn weighted_weak_type_profile(f: &GridFunction, weight: &Weight, system: u8, lambdas: &[f64]) -> Result<Vec<WeakTypeRow>> {
    let n = f.len();
    let h = match weight.sampled_on(n) {
        Weight::Sampled { values } => values,
        Weight::Power { .. } => unreachable!(),
    };
    let mf = weighted_dyadic_maximal(f, weight, system)?;
    let dx = 1.0 / n as f64;
    let l1: f64 = f.values().iter().zip(&h).map(|(a, b)| a.abs() * b * dx).sum();
    Ok(lambdas
        .iter()
        .map(|&lambda| WeakTypeRow {
            lambda,
            level_set_mass: mf
                .values()
                .iter()
                .zip(&h)
                .filter(|(m, _)| **m > lambda)
                .map(|(_, w)| w * dx)
                .sum(),
            bound: l1 / lambda,
        })
        .collect())
}

/// `sup_{Q ∋ x} inf_{y ∈ Q} g(y)` over cubes of one system, optionally inside `root`.
///
/// The finest term is the cell itself: cubes below the grid scale that
/// contain the midpoint sit inside its cell.
pub fn sup_of_infima(g: &GridFunction, system: u8, root: Option<DyadicCube>) -> GridFunction {
    let n = g.len();
    let vals = g.values();
    let first = root.map_or(0, |r| r.level);
    let sup = sup_over_cubes(n, system, first, g.depth(), root, 0.0, |q| {
        grid::interval_min(vals, q.left(), q.right(), true)
    });
    let h = 1.0 / n as f64;
    let out = vals
        .iter()
        .zip(sup)
        .enumerate()
        .map(|(j, (v, s))| match root {
            Some(r) if !r.contains_point((j as f64 + 0.5) * h) => 0.0,
            _ => v.max(s),
        })
        .collect();
    GridFunction::new(out).expect("same size")
}

/// `ℳ*f(x) = sup_{Q ∋ x} inf_{y ∈ Q} ℳf(y)` over one system.
pub fn m_star(f: &GridFunction, system: u8) -> GridFunction {
    sup_of_infima(&hardy_littlewood(f, 1.0), system, None)
}

/// `ℳ*_{Q0,s} f`: sup over cubes inside `root` of the infimum of `ℳ_s f`,
/// zero outside `root`.
pub fn m_star_restricted(f: &GridFunction, s: f64, root: DyadicCube) -> GridFunction {
    sup_of_infima(&hardy_littlewood(f, s), root.system, Some(root))
}

fn check_root(root: &DyadicCube) -> Result<()> {
    if root.level < 0 || !WORKING_WINDOW.contains(&root.interval()) {
        return Err(Error::Window(root.interval()));
    }
    Ok(())
}

/// Restricted `T#`: at each cell of `root`, the largest
/// `(⨏_Q |T P^(N)_{ℓ(Q)²} f|^{q0})^{1/q0}` over cubes `Q ⊆ root` of the root's
/// system containing the cell midpoint, with levels down to the grid depth.
/// `q0 = inf` takes the grid maximum over `Q`. Zero outside `root`.
pub fn t_sharp(op: &MultiplierOperator, f: &GridFunction, order: u32, q0: f64, root: DyadicCube) -> Result<GridFunction> {
    check_root(&root)?;
    let n = f.len();
    let m = f.depth();
    let spectrum = Spectrum::of(f);
    let mut best = vec![0.0f64; n];
    for level in root.level..=m {
        let ell = 2f64.powi(-level);
        let smoothed = spectrum.apply(&op.compose(&MultiplierOperator::p_t(ell * ell, order)));
        let powered: Vec<f64> = if q0.is_infinite() {
            smoothed.values().iter().map(|v| v.abs()).collect()
        } else {
            smoothed.values().iter().map(|v| v.abs().powf(q0)).collect()
        };
        let level_sup = sup_over_cubes(n, root.system, level, level, Some(root), 0.0, |q| {
            if q0.is_infinite() {
                grid::interval_max(&powered, q.left(), q.right(), true)
            } else {
                grid::interval_average(&powered, q.left(), q.right(), true).powf(1.0 / q0)
            }
        });
        for (b, v) in best.iter_mut().zip(level_sup) {
            *b = b.max(v);
        }
    }
    GridFunction::new(best)
}

/// `‖T#f‖₂ / (‖ℳ_{p1}(Tf)‖₂ + ‖ℳ_{p1} f‖₂)` with `T#` taken over `[0, 1)`.
pub fn cotlar_ratio(op: &MultiplierOperator, f: &GridFunction, order: u32, q0: f64, p1: f64) -> Result<f64> {
    let sharp = t_sharp(op, f, order, q0, DyadicCube::new(0, 0, 0))?;
    let tf = op.apply(f);
    let denom = hardy_littlewood(&tf, p1).lp_norm(2.0) + hardy_littlewood(f, p1).lp_norm(2.0);
    if denom == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(sharp.lp_norm(2.0) / denom)
}
