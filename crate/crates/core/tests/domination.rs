use sharpbound::domination::{calibrate_eta, random_corpus, sparse_dominate, DominationParams};
use sharpbound::dyadic::DyadicCube;
use sharpbound::exponents::make_config;
use sharpbound::operators::MultiplierOperator;
use sharpbound::sparse::is_sparse;

fn params(eta: f64) -> DominationParams {
    DominationParams {
        cfg: make_config(1.0, 8.0, 2.0).unwrap(),
        order: 3,
        eta,
        max_depth: None,
    }
}

const ROOT: DyadicCube = DyadicCube { system: 0, level: 0, index: 0 };

fn mean_root_fraction(op: &MultiplierOperator, corpus: &[(sharpbound::grid::GridFunction, sharpbound::grid::GridFunction)], eta: f64) -> f64 {
    let total: f64 = corpus
        .iter()
        .map(|(f, g)| sparse_dominate(op, f, g, ROOT, params(eta)).unwrap().log[0].covered_fraction)
        .sum();
    total / corpus.len() as f64
}

#[test]
fn doubling_threshold_shrinks_covered_fraction() {
    let op = MultiplierOperator::hilbert();
    let corpus = random_corpus(&op, 2024, 20, 12);
    let eta = calibrate_eta(&op, &corpus, ROOT, params(2.0).cfg, 3).unwrap().eta;
    let fractions: Vec<f64> = (0..6).map(|k| mean_root_fraction(&op, &corpus, eta * 2f64.powi(k))).collect();
    assert!(fractions.windows(2).all(|w| w[1] <= w[0]), "{fractions:?}");
    let factor = fractions[0] / fractions[1];
    assert!((1.5..=4.0).contains(&factor), "first doubling factor {factor}, fractions {fractions:?}");
}

#[test]
fn zero_operator_calibrates_small() {
    let op = MultiplierOperator::zero();
    let corpus = random_corpus(&MultiplierOperator::hilbert(), 5, 8, 10);
    let cal = calibrate_eta(&op, &corpus, ROOT, params(2.0).cfg, 3).unwrap();
    // only the maximal function marks cells, so the threshold is set by its weak (1,1) constant
    assert!(cal.eta <= 64.0, "eta {}", cal.eta);
    assert!(cal.sweep.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12));
}

#[test]
fn identity_operator_gives_sparse_certificate() {
    let op = MultiplierOperator::identity();
    for (f, g) in random_corpus(&op, 11, 5, 10) {
        let r = sparse_dominate(&op, &f, &g, ROOT, params(64.0)).unwrap();
        assert!(r.sparse && is_sparse(&r.collection).sparse);
        assert!(r.constant.is_finite() && r.constant > 0.0);
        assert!(r.lhs <= r.constant * r.rhs_form * (1.0 + 1e-12));
    }
}

#[test]
fn subcube_roots_are_supported() {
    let op = MultiplierOperator::hilbert();
    let (f, g) = random_corpus(&op, 3, 1, 10).remove(0);
    let root = DyadicCube::new(0, 2, 1);
    let r = sparse_dominate(&op, &f, &g, root, params(64.0)).unwrap();
    assert!(r.collection.cubes().iter().all(|q| root.contains_cube(q)));
    assert!(r.sparse);
}

#[test]
fn depth_cap_limits_the_recursion() {
    let op = MultiplierOperator::hilbert();
    let (f, g) = random_corpus(&op, 9, 1, 10).remove(0);
    let mut p = params(32.0);
    p.max_depth = Some(0);
    let r = sparse_dominate(&op, &f, &g, ROOT, p).unwrap();
    assert_eq!(r.collection.len(), 1);
    assert_eq!(r.log.len(), 1);
}
