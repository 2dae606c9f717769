//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! prints its own pass/fail line; exits non-zero if any fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpbound::domination::{calibrate_eta, random_corpus, sparse_dominate, DominationParams};
use sharpbound::dyadic::DyadicCube;
use sharpbound::exponents::{make_config, ExponentConfig};
use sharpbound::grid::GridFunction;
use sharpbound::harness::{
    default_eps, eps_powers_of_two, lower_range_scan_entries, sharpness_lower, sharpness_upper, weighted_bound_scan,
    FormEvaluator, SharpnessReport, SlopeFit,
};
use sharpbound::operators::{
    calderon_residual, hardy_littlewood, m_star, weighted_weak_type_profile, LogQuadrature, MultiplierOperator,
};
use sharpbound::weights::{ap_characteristic, derived_weights, dual_weight, rh_characteristic, IntervalFamily, Weight};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn random_config(rng: &mut ChaCha8Rng) -> ExponentConfig {
    let p0 = if rng.gen_bool(0.3) { 1.0 } else { rng.gen_range(1.0..2.0) };
    let q0 = if rng.gen_bool(0.1) {
        f64::INFINITY
    } else {
        rng.gen_range(2.05..25.0)
    };
    let top = if q0.is_infinite() { p0 + 20.0 } else { q0 };
    let p = p0 + (top - p0) * rng.gen_range(0.01..0.99);
    make_config(p0, q0, p).expect("valid by construction")
}

fn exponent_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_alpha: f64 = 0.0;
    let mut worst_bar: f64 = 0.0;
    let mut sign_failures = 0;
    let mut at_critical: f64 = 0.0;
    let mut product_form = 0;
    for _ in 0..10_000 {
        let c = random_config(&mut rng);
        worst_alpha = worst_alpha.max(rel_err(c.alpha, c.alpha_closed_form()));
        if (c.p - c.critical).abs() > 1e-9 && (c.beta > 0.0) != (c.p < c.critical) {
            sign_failures += 1;
        }
        let crit = make_config(c.p0, c.q0, c.critical).expect("critical exponent lies inside (p0, q0)");
        at_critical = at_critical.max(crit.beta.abs());
        let bar_err = if c.beta >= 0.0 {
            rel_err(c.beta_bar, -c.beta / (c.r - 1.0))
        } else {
            c.beta_bar.abs()
        };
        worst_bar = worst_bar.max(bar_err);
        if rel_err(c.beta_bar, -(c.r - 1.0) * c.beta) <= 1e-12 {
            product_form += 1;
        }
    }
    let ok = worst_alpha <= 1e-12 && sign_failures == 0 && at_critical <= 1e-12 && worst_bar <= 1e-12;
    outcome(
        ok,
        format!(
            "alpha err {worst_alpha:.1e}, beta sign failures {sign_failures}, |beta| at critical {at_critical:.1e}, \
             beta_bar = -beta/(r-1) (beta >= 0) and 0 (beta < 0) err {worst_bar:.1e}; \
             the -(r-1)beta form holds in {product_form}/10000"
        ),
    )
}

fn random_sampled_weight(rng: &mut ChaCha8Rng, n: usize, spread: f64) -> Weight {
    Weight::sampled((0..n).map(|_| rng.gen_range(-spread..spread).exp()).collect()).expect("positive")
}

fn duality() -> Outcome {
    let family = IntervalFamily::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for p in [1.5, 2.0, 3.0] {
        let pc = p / (p - 1.0);
        for k in 0..200 {
            let w = if k % 2 == 0 {
                let n = rng.gen_range(16..=512);
                random_sampled_weight(&mut rng, n, 3.0)
            } else {
                Weight::power(rng.gen_range(-0.95..0.95 * (p - 1.0)))
            };
            let lhs = ap_characteristic(&dual_weight(&w, p).unwrap(), pc, &family).unwrap().value;
            let rhs = ap_characteristic(&w, p, &family).unwrap().value.powf(pc - 1.0);
            worst = worst.max((lhs - rhs).abs() / rhs);
            count += 1;
        }
    }
    outcome(worst <= 1e-10, format!("{count} weights, worst relative error {worst:.1e}"))
}

fn weight_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_u: f64 = 0.0;
    let mut worst_one: f64 = 0.0;
    for _ in 0..50 {
        let c = random_config(&mut rng);
        let w = random_sampled_weight(&mut rng, 1000, 2.0);
        let d = derived_weights(&w, &c).unwrap();
        let vals = |w: &Weight| match w {
            Weight::Sampled { values } => values.clone(),
            Weight::Power { .. } => unreachable!(),
        };
        let (u, v, varpi, rho) = (vals(&d.u), vals(&d.v), vals(&d.varpi), vals(&d.rho));
        let r_conj = c.r_conj();
        for j in 0..1000 {
            worst_u = worst_u.max((u[j] - v[j].powf(1.0 - r_conj)).abs() / u[j]);
            let one = u[j].powf(-c.beta) * varpi[j].powf(1.0 / c.p_conj) * rho[j].powf(1.0 / c.p);
            worst_one = worst_one.max((one - 1.0).abs());
        }
    }
    outcome(
        worst_u <= 1e-10 && worst_one <= 1e-10,
        format!("50 configs x 1000 cells: u vs v^(1-r') {worst_u:.1e}, product - 1 {worst_one:.1e}"),
    )
}

fn characteristic_slopes() -> Outcome {
    let family = IntervalFamily::standard();
    let eps = eps_powers_of_two(6, 14);
    type Case<'a> = (&'a str, f64, Box<dyn Fn(f64) -> f64 + 'a>);
    let cases: [Case; 3] = [
        (
            "A_2 x^(-1+e)",
            -1.0,
            Box::new(|e| ap_characteristic(&Weight::power(-1.0 + e), 2.0, &family).unwrap().value),
        ),
        (
            "A_2 x^(1-e)",
            -1.0,
            Box::new(|e| ap_characteristic(&Weight::power(1.0 - e), 2.0, &family).unwrap().value),
        ),
        (
            "RH_2 x^(-1/2+e)",
            -0.5,
            Box::new(|e| rh_characteristic(&Weight::power(-0.5 + e), 2.0, &family).unwrap().value),
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, expected, f) in cases {
        let values: Vec<f64> = eps.iter().map(|&e| f(e)).collect();
        let fit = SlopeFit::new(&eps, &values, 1.0).unwrap();
        ok &= (fit.slope - expected).abs() <= 0.05 && fit.r_squared >= 0.99;
        parts.push(format!("{name} slope {:.4} R2 {:.5}", fit.slope, fit.r_squared));
    }
    outcome(ok, parts.join("; "))
}

fn check_sharpness(report: &SharpnessReport, expected: f64) -> Outcome {
    let fits = [&report.lhs_fit, &report.rhs_fit];
    let ok = fits
        .iter()
        .all(|f| (f.slope - expected).abs() <= 0.05 && f.r_squared >= 0.99)
        && report.ratio_spread <= 4.0;
    outcome(
        ok,
        format!(
            "lhs slope {:.4} (R2 {:.5}), rhs slope {:.4} (R2 {:.5}), expected {expected}, ratio spread {:.3}",
            report.lhs_fit.slope, report.lhs_fit.r_squared, report.rhs_fit.slope, report.rhs_fit.r_squared, report.ratio_spread
        ),
    )
}

fn sharpness_lower_range() -> Outcome {
    let cfg = make_config(1.0, 4.0, 1.5).unwrap();
    let report = sharpness_lower(&cfg, &default_eps(), &IntervalFamily::standard()).unwrap();
    check_sharpness(&report, -2.0)
}

fn sharpness_upper_range() -> Outcome {
    let cfg = make_config(1.0, 4.0, 3.0).unwrap();
    let report = sharpness_upper(&cfg, &default_eps(), &IntervalFamily::standard()).unwrap();
    check_sharpness(&report, -1.75)
}

fn calderon() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let coeffs: Vec<(f64, f64)> = (1..=32).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let f = GridFunction::from_fn(1 << 10, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let w = 2.0 * PI * (k + 1) as f64 * x;
                a * w.cos() + b * w.sin()
            })
            .sum()
    })
    .unwrap();
    let quad = LogQuadrature::new(1e-8, 1e2, 50).unwrap();
    let residual = calderon_residual(&f, 3, &quad).unwrap();
    outcome(residual <= 1e-6, format!("relative residual {residual:.2e}"))
}

fn random_grid_function(rng: &mut ChaCha8Rng, n: usize) -> GridFunction {
    let spikes: Vec<(f64, f64)> = (0..rng.gen_range(1..6)).map(|_| (rng.gen_range(0.0..1.0), rng.gen_range(1.0..50.0))).collect();
    GridFunction::from_fn(n, |x| spikes.iter().map(|(c, h)| h * (-((x - c) * 40.0).powi(2)).exp()).sum())
    .unwrap()
    .zip_with(&GridFunction::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap(), |a, b| a + b)
    .unwrap()
}

fn maximal_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatched = 0;
    for k in 0..100 {
        let n = 1 << (6 + k % 5);
        let f = random_grid_function(&mut rng, n);
        let m = hardy_littlewood(&f, 1.0);
        for system in 0..=1u8 {
            if m_star(&f, system).values() != m.values() {
                mismatched += 1;
            }
        }
    }
    let mut violations = 0;
    let mut tested = 0;
    let mut tightest: f64 = 0.0;
    for k in 0..50 {
        let n = 1 << (6 + k % 4);
        let f = random_grid_function(&mut rng, n);
        let h = random_sampled_weight(&mut rng, n, 2.0);
        let peak = f.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let lambdas: Vec<f64> = (0..24).map(|i| peak * 2f64.powf(-(i as f64) / 3.0)).collect();
        for system in 0..=1u8 {
            for row in weighted_weak_type_profile(&f, &h, system, &lambdas).unwrap() {
                tested += 1;
                tightest = tightest.max(row.level_set_mass / row.bound);
                if row.level_set_mass > row.bound * (1.0 + 1e-12) {
                    violations += 1;
                }
            }
        }
    }
    outcome(
        mismatched == 0 && violations == 0,
        format!(
            "M* != M on {mismatched}/200 (function, system) pairs; weak (1,1) violations {violations}/{tested}, \
             largest mass/bound {tightest:.3}"
        ),
    )
}

fn sparse_domination() -> Outcome {
    let op = MultiplierOperator::hilbert();
    let cfg = make_config(1.0, 8.0, 2.0).unwrap();
    let root = DyadicCube::new(0, 0, 0);
    let corpus = random_corpus(&op, 2024, 20, 12);
    let calibration = match calibrate_eta(&op, &corpus, root, cfg, 3) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("calibration failed: {e}")),
    };
    let eta = calibration.eta;
    let params = DominationParams {
        cfg,
        order: 3,
        eta,
        max_depth: None,
    };
    let mut constants = Vec::new();
    let mut all_sparse = true;
    let mut geometric = true;
    let mut exhausted = 0;
    let mut deepest = 0;
    for (f, g) in &corpus {
        let r = match sparse_dominate(&op, f, g, root, params) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("run failed at calibrated eta {eta}: {e}")),
        };
        all_sparse &= r.sparse && r.packing_ratio <= 0.5;
        let rate = r.k_tilde / r.eta;
        geometric &= rate <= 0.25;
        for pair in r.log.windows(2) {
            geometric &= pair[1].remainder_measure <= rate * pair[0].remainder_measure * (1.0 + 1e-12);
        }
        geometric &= r.log[0].remainder_measure <= rate * root.measure() * (1.0 + 1e-12);
        exhausted += r.resolution_exhausted as usize;
        deepest = deepest.max(r.log.len());
        constants.push(r.constant);
    }
    let cmax = constants.iter().cloned().fold(0.0, f64::max);
    let cmin = constants.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = cmax / cmin;
    let ok = all_sparse && geometric && cmax.is_finite() && cmin > 0.0 && spread <= 10.0;
    outcome(
        ok,
        format!(
            "calibrated eta {eta}, all sparse {all_sparse}, geometric remainder {geometric}, levels <= {deepest}, \
             resolution exhausted in {exhausted}/20, C = {cmax:.3}, per-pair range [{cmin:.3}, {cmax:.3}] spread {spread:.2}"
        ),
    )
}

fn optimality_scan() -> Outcome {
    let cfg = make_config(1.0, 4.0, 1.5).unwrap();
    let eps = default_eps();
    let rows = weighted_bound_scan(
        &FormEvaluator::Canonical,
        &lower_range_scan_entries(&cfg, &eps),
        &cfg,
        &IntervalFamily::standard(),
    )
    .unwrap();
    let sharp: Vec<f64> = rows.iter().map(|r| r.normalized).collect();
    let weaker: Vec<f64> = rows.iter().map(|r| r.normalized_by(cfg.alpha - 0.1)).collect();
    let lo = sharp.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = sharp.iter().cloned().fold(0.0, f64::max);
    let spread = hi / lo;
    let monotone = weaker.windows(2).all(|w| w[1] > w[0]);
    let growth = weaker[weaker.len() - 1] / weaker[0];
    let fit = SlopeFit::new(&eps, &weaker, eps[2]).unwrap();
    let ok = spread <= 4.0 && monotone && fit.slope <= -0.04 && fit.r_squared >= 0.99 && growth > spread;
    outcome(
        ok,
        format!(
            "B/[w]^alpha in [{lo:.3}, {hi:.3}] (spread {spread:.3}); B/[w]^(alpha-0.1) increasing {monotone}, \
             growth {growth:.3}, slope {:.4} (R2 {:.5})",
            fit.slope, fit.r_squared
        ),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 10] = [
        ("exponent algebra", exponent_algebra, Duration::from_secs(1)),
        ("duality identity", duality, Duration::from_secs(10)),
        ("weight algebra", weight_algebra, Duration::from_secs(5)),
        ("power-weight characteristics", characteristic_slopes, Duration::from_secs(30)),
        ("sharpness, lower range", sharpness_lower_range, Duration::from_secs(10)),
        ("sharpness, upper range", sharpness_upper_range, Duration::from_secs(10)),
        ("reproducing formula", calderon, Duration::from_secs(5)),
        ("maximal operators", maximal_identities, Duration::from_secs(30)),
        ("sparse domination", sparse_domination, Duration::from_secs(600)),
        ("optimality scan", optimality_scan, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let ok = out.ok && elapsed <= *budget;
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {:>2} {:<30} {}  [{:.2?} of {:?}]  {}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            elapsed,
            budget,
            out.detail
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failures, failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
