//! Stopping-time construction of a sparse collection dominating the
//! pairing `∫ Tf · g` on a root cube of the standard system.
//!
//! Each node `Q` with data `(f, g)` computes `A = (⨏_{5Q} |f|^{p0})^{1/p0}`,
//! marks the cells of `Q` where `max(ℳ*_{Q,p0} f, T#_Q f) > ηA`, takes the
//! maximal dyadic covering `{B_j}` of the marked set and recurses on
//! `(B_j, f χ_{5B_j}, g χ_{5B_j})`.

use crate::dyadic::{maximal_covering, DyadicCube};
use crate::error::{Error, Result};
use crate::exponents::ExponentConfig;
use crate::grid::{self, GridFunction};
use crate::operators::{m_star_restricted, t_sharp, MultiplierOperator};
use crate::sparse::{is_sparse, sparse_form, SparseCollection, TestFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Relative size of the unresolved remainder below which the recursion is
/// considered complete.
pub const REMAINDER_TOL: f64 = 1e-8;

/// Aggregate over all nodes at one recursion depth.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LevelRecord {
    pub depth: usize,
    pub nodes: usize,
    pub selected: Vec<DyadicCube>,
    /// `Σ μ(B_j) / Σ μ(Q)` over the nodes at this depth.
    pub covered_fraction: f64,
    /// Largest single-node `Σ μ(B_j) / μ(Q)`.
    pub max_node_ratio: f64,
    /// `Σ μ(B_j)`, the measure handed to the next depth.
    pub remainder_measure: f64,
    /// `Σ_j |∫_{B_j} T_{B_j} f^j · g^j|`.
    pub remainder_integral: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationResult {
    pub collection: SparseCollection,
    pub eta: f64,
    /// `|∫_{Q0} Tf · g|`
    pub lhs: f64,
    /// Sparse form with `λ = 5`.
    pub rhs_form: f64,
    pub constant: f64,
    pub sparse: bool,
    pub packing_ratio: f64,
    pub log: Vec<LevelRecord>,
    /// `η · max covered fraction`, the measured per-level decay constant.
    pub k_tilde: f64,
    /// Set when the grid ran out before the remainder fell below [`REMAINDER_TOL`].
    pub resolution_exhausted: bool,
}

/// Parameters of one domination run.
#[derive(Debug, Clone, Copy)]
pub struct DominationParams {
    pub cfg: ExponentConfig,
    /// Order of the `P^(N)` smoothing inside `T#`.
    pub order: u32,
    pub eta: f64,
    /// Deepest recursion allowed; defaults to the grid depth.
    pub max_depth: Option<usize>,
}

#[derive(Default)]
struct NodeOutput {
    cubes: Vec<DyadicCube>,
    // indexed by depth below the node
    levels: Vec<LevelRecord>,
}

impl NodeOutput {
    fn merge_child(&mut self, child: NodeOutput) {
        self.cubes.extend(child.cubes);
        for (d, rec) in child.levels.into_iter().enumerate() {
            let d = d + 1;
            if self.levels.len() <= d {
                self.levels.resize(d + 1, LevelRecord::default());
            }
            let slot = &mut self.levels[d];
            slot.nodes += rec.nodes;
            slot.selected.extend(rec.selected);
            slot.covered_fraction += rec.covered_fraction; // holds node measure until finalised
            slot.max_node_ratio = slot.max_node_ratio.max(rec.max_node_ratio);
            slot.remainder_measure += rec.remainder_measure;
            slot.remainder_integral += rec.remainder_integral;
        }
    }
}

fn cells_of(cube: &DyadicCube, depth: i32) -> std::ops::Range<usize> {
    let span = 1usize << (depth - cube.level);
    let first = cube.index as usize * span;
    first..first + span
}

struct Ctx<'a> {
    op: &'a MultiplierOperator,
    params: DominationParams,
    grid_depth: i32,
}

impl Ctx<'_> {
    fn node(&self, cube: DyadicCube, f: &GridFunction, g: &GridFunction, depth: usize) -> Result<NodeOutput> {
        let p0 = self.params.cfg.p0;
        let region = cube.dilate5();
        let powered: Vec<f64> = f.values().iter().map(|v| v.abs().powf(p0)).collect();
        let a = grid::interval_average(&powered, region.lo, region.hi, true).powf(1.0 / p0);
        let mut out = NodeOutput::default();
        if a == 0.0 {
            return Ok(out);
        }
        out.cubes.push(cube);
        // levels[0] accumulates node measure in `covered_fraction` until finalised
        out.levels.push(LevelRecord {
            depth: 0,
            nodes: 1,
            covered_fraction: cube.measure(),
            ..LevelRecord::default()
        });
        let max_depth = self.params.max_depth.unwrap_or(self.grid_depth as usize);
        if cube.level >= self.grid_depth || depth >= max_depth {
            return Ok(out);
        }

        let mstar = m_star_restricted(f, p0, cube);
        let sharp = t_sharp(self.op, f, self.params.order, self.params.cfg.q0, cube)?;
        let threshold = self.params.eta * a;
        let cells = cells_of(&cube, self.grid_depth);
        let marked: Vec<bool> = cells
            .clone()
            .map(|j| mstar.values()[j].max(sharp.values()[j]) > threshold)
            .collect();
        let covering = match maximal_covering(cube, self.grid_depth, &marked) {
            Ok(c) => c,
            Err(Error::CoveringUndefined) => {
                return Err(Error::NonSparseThreshold {
                    eta: self.params.eta,
                    ratio: 1.0,
                    cube,
                })
            }
            Err(e) => return Err(e),
        };
        let covered = covering.iter().fold(0.0, |acc, b| acc + b.measure());
        let ratio = covered / cube.measure();
        if ratio > 0.5 {
            return Err(Error::NonSparseThreshold {
                eta: self.params.eta,
                ratio,
                cube,
            });
        }
        let rec = &mut out.levels[0];
        rec.selected = covering.clone();
        rec.max_node_ratio = ratio;
        rec.remainder_measure = covered;

        let children: Vec<(DyadicCube, GridFunction, GridFunction)> = covering
            .iter()
            .map(|b| {
                let r = b.dilate5();
                (*b, f.restrict_periodic(r), g.restrict_periodic(r))
            })
            .collect();
        let remainder = children
            .par_iter()
            .map(|(b, fj, gj)| self.local_pairing(b, fj, gj))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, |acc, v| acc + v);
        out.levels[0].remainder_integral = remainder;

        let results: Vec<Result<NodeOutput>> = children
            .par_iter()
            .map(|(b, fj, gj)| self.node(*b, fj, gj, depth + 1))
            .collect();
        for r in results {
            out.merge_child(r?);
        }
        Ok(out)
    }

    /// `|∫_B T_B f · g|` with `T_B = T (Id - P^(N)_{ℓ(B)²})`.
    fn local_pairing(&self, b: &DyadicCube, f: &GridFunction, g: &GridFunction) -> Result<f64> {
        let ell = b.length();
        let local = self
            .op
            .compose(&MultiplierOperator::q_integral_below(ell * ell, self.params.order))
            .apply(f);
        let h = f.spacing();
        let s = cells_of(b, self.grid_depth).fold(0.0, |acc, j| acc + local.values()[j] * g.values()[j]);
        Ok((s * h).abs())
    }
}

/// Runs the stopping-time construction on `root`, a cube of the standard
/// system inside `[0, 1)`.
pub fn sparse_dominate(
    op: &MultiplierOperator,
    f: &GridFunction,
    g: &GridFunction,
    root: DyadicCube,
    params: DominationParams,
) -> Result<DominationResult> {
    f.check_size(g)?;
    if root.system != 0 || root.level < 0 || root.index < 0 || root.index >= 1i64 << root.level {
        return Err(Error::Window(root.interval()));
    }
    if !(params.eta > 1.0) {
        return Err(Error::Domain(params.eta));
    }
    let grid_depth = f.depth();
    if root.level > grid_depth {
        return Err(Error::Degenerate("root cube is finer than the grid".into()));
    }
    let region = root.dilate5();
    let f = f.restrict_periodic(region);
    let g = g.restrict_periodic(region);

    let tf = op.apply(&f);
    let h = f.spacing();
    let lhs = (cells_of(&root, grid_depth).map(|j| tf.values()[j] * g.values()[j]).sum::<f64>() * h).abs();

    let ctx = Ctx { op, params, grid_depth };
    let out = ctx.node(root, &f, &g, 0)?;
    let collection = SparseCollection::new(out.cubes);
    let packing = is_sparse(&collection);
    let rhs_form = sparse_form(
        &collection,
        &TestFunction::Sampled(f.clone()),
        &TestFunction::Sampled(g.clone()),
        &params.cfg,
        5.0,
    )?
    .value;

    let mut log = out.levels;
    let mut max_fraction: f64 = 0.0;
    for (d, rec) in log.iter_mut().enumerate() {
        rec.depth = d;
        let node_measure = rec.covered_fraction;
        rec.covered_fraction = if node_measure > 0.0 { rec.remainder_measure / node_measure } else { 0.0 };
        max_fraction = max_fraction.max(rec.covered_fraction);
    }
    let resolution_exhausted = log
        .last()
        .is_some_and(|rec| rec.remainder_integral > REMAINDER_TOL * lhs.max(f64::MIN_POSITIVE));
    let constant = if rhs_form > 0.0 { lhs / rhs_form } else { 0.0 };
    Ok(DominationResult {
        collection,
        eta: params.eta,
        lhs,
        rhs_form,
        constant,
        sparse: packing.sparse,
        packing_ratio: packing.worst_ratio,
        log,
        k_tilde: params.eta * max_fraction,
        resolution_exhausted,
    })
}

/// Outcome of a threshold sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub eta: f64,
    /// `(η, largest per-node covered ratio over the corpus)` for every η tried;
    /// `1` stands for a run that could not be covered at all.
    pub sweep: Vec<(f64, f64)>,
}

/// Largest per-node covered ratio of one run, or the ratio carried by the
/// error that stopped it.
pub fn worst_node_ratio(
    op: &MultiplierOperator,
    f: &GridFunction,
    g: &GridFunction,
    root: DyadicCube,
    params: DominationParams,
) -> Result<f64> {
    match sparse_dominate(op, f, g, root, params) {
        Ok(r) => Ok(r.log.iter().map(|l| l.max_node_ratio).fold(0.0, f64::max)),
        Err(Error::NonSparseThreshold { ratio, .. }) => Ok(ratio),
        Err(e) => Err(e),
    }
}

/// Smallest power-of-two `η <= 2^20` for which every corpus run keeps each
/// node's covered ratio at most `1/4`.
pub fn calibrate_eta(
    op: &MultiplierOperator,
    corpus: &[(GridFunction, GridFunction)],
    root: DyadicCube,
    cfg: ExponentConfig,
    order: u32,
) -> Result<Calibration> {
    if corpus.is_empty() {
        return Err(Error::Degenerate("empty corpus".into()));
    }
    let mut sweep = Vec::new();
    let mut best = f64::INFINITY;
    for k in 1..=20 {
        let eta = 2f64.powi(k);
        let params = DominationParams {
            cfg,
            order,
            eta,
            max_depth: None,
        };
        let worst = corpus
            .par_iter()
            .map(|(f, g)| worst_node_ratio(op, f, g, root, params))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        sweep.push((eta, worst));
        best = best.min(worst);
        if worst <= 0.25 {
            return Ok(Calibration { eta, sweep });
        }
    }
    Err(Error::CalibrationFailed { best_ratio: best })
}

/// Mean-zero trigonometric polynomial with modes `1..=modes` and
/// coefficients uniform in `[-1, 1]`.
pub fn random_band_limited(seed: u64, modes: usize, depth: u32) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(f64, f64)> = (0..modes).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    GridFunction::from_fn(1 << depth, |x| {
        coeffs.iter().enumerate().fold(0.0, |acc, (k, (a, b))| {
            let w = std::f64::consts::TAU * (k + 1) as f64 * x;
            acc + a * w.cos() + b * w.sin()
        })
    })
    .expect("power of two")
}

/// Reproducible test pairs on a grid of `2^depth` cells: `f` is a few narrow
/// spikes over low-level noise with its mean removed, and `g` is `Tf` plus
/// independent noise of half its size.
pub fn random_corpus(op: &MultiplierOperator, seed: u64, count: usize, depth: u32) -> Vec<(GridFunction, GridFunction)> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let f = random_spikes(&mut rng, depth);
            let tf = op.apply(&f);
            let scale = tf.lp_norm(2.0).max(f.lp_norm(2.0));
            let noise = noise(&mut rng, depth);
            let nscale = noise.lp_norm(2.0).max(f64::MIN_POSITIVE);
            let g = tf.zip_with(&noise, |a, b| a + 0.5 * scale * b / nscale).expect("same size");
            (f, g)
        })
        .collect()
}

fn noise(rng: &mut ChaCha8Rng, depth: u32) -> GridFunction {
    let n = 1usize << depth;
    GridFunction::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).expect("power of two")
}

fn random_spikes(rng: &mut ChaCha8Rng, depth: u32) -> GridFunction {
    let n = 1usize << depth;
    let mut v: Vec<f64> = (0..n).map(|_| 0.05 * rng.gen_range(-1.0..1.0)).collect();
    for _ in 0..rng.gen_range(2..=5) {
        let centre = rng.gen_range(0..n);
        let width = rng.gen_range(1..=8usize.min(n));
        let height = rng.gen_range(-4.0..4.0);
        for k in 0..width {
            v[(centre + k) % n] += height;
        }
    }
    GridFunction::new(v).expect("power of two").without_mean()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::make_config;

    fn params(eta: f64) -> DominationParams {
        DominationParams {
            cfg: make_config(1.0, 8.0, 2.0).unwrap(),
            order: 3,
            eta,
            max_depth: None,
        }
    }

    #[test]
    fn zero_input_gives_empty_collection() {
        let z = GridFunction::zeros(256).unwrap();
        let g = GridFunction::from_fn(256, |x| x).unwrap();
        let r = sparse_dominate(&MultiplierOperator::hilbert(), &z, &g, DyadicCube::new(0, 0, 0), params(64.0)).unwrap();
        assert!(r.collection.is_empty());
        assert_eq!(r.lhs, 0.0);
    }

    #[test]
    fn identity_operator_certificate() {
        let id = MultiplierOperator::identity();
        for (f, _) in random_corpus(&id, 11, 3, 9) {
            let r = sparse_dominate(&id, &f, &f, DyadicCube::new(0, 0, 0), params(64.0)).unwrap();
            assert!(r.sparse);
            assert!(r.constant.is_finite() && r.constant > 0.0);
            assert!(r.lhs <= r.constant * r.rhs_form * (1.0 + 1e-12));
        }
    }

    #[test]
    fn deterministic() {
        let h = MultiplierOperator::hilbert();
        let corpus = random_corpus(&h, 3, 1, 9);
        let (f, g) = &corpus[0];
        let a = sparse_dominate(&h, f, g, DyadicCube::new(0, 0, 0), params(64.0)).unwrap();
        let b = sparse_dominate(&h, f, g, DyadicCube::new(0, 0, 0), params(64.0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn small_threshold_is_rejected() {
        let h = MultiplierOperator::hilbert();
        let corpus = random_corpus(&h, 5, 1, 9);
        let (f, g) = &corpus[0];
        match sparse_dominate(&h, f, g, DyadicCube::new(0, 0, 0), params(1.01)) {
            Err(Error::NonSparseThreshold { ratio, .. }) => assert!(ratio > 0.5),
            other => panic!("expected a threshold error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_roots() {
        let f = GridFunction::zeros(64).unwrap();
        let h = MultiplierOperator::hilbert();
        assert!(sparse_dominate(&h, &f, &f, DyadicCube::new(1, 0, 0), params(64.0)).is_err());
        assert!(sparse_dominate(&h, &f, &f, DyadicCube::new(0, 2, 7), params(64.0)).is_err());
    }
}
