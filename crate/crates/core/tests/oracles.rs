//! Library results checked against independent recomputation.

mod common;

use common::{f1_oracle, fisher_oracle};
use proptest::prelude::*;
use vaxcred::eval::{f1_and_accuracy, fisher_exact, odds_ratio_ci, stratified_kfold};
use vaxcred::ingest::detect_language;
use vaxcred::models::{train_linear_svm_traced, train_random_forest, ForestParams};
use vaxcred::rng::SplitMix64;
use vaxcred::textprep::SparseVector;
use vaxcred::with_threads;

fn random_problem(seed: u64, n: usize, dim: usize, noise: f64) -> (Vec<SparseVector>, Vec<u8>) {
    let mut rng = SplitMix64::new(seed);
    let truth: Vec<f64> = (0..dim).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for _ in 0..n {
        let mut pairs = Vec::new();
        for j in 0..dim {
            if rng.bernoulli(0.3) {
                pairs.push((j, rng.next_f64()));
            }
        }
        let v = SparseVector::from_pairs(dim, pairs);
        let flip = rng.bernoulli(noise);
        ys.push(u8::from((v.dot_dense(&truth) > 0.0) != flip));
        xs.push(v);
    }
    if ys.iter().all(|&y| y == ys[0]) {
        ys[0] ^= 1;
    }
    (xs, ys)
}

#[test]
fn svm_dual_stays_feasible_and_objectives_bracket() {
    for seed in 0..5 {
        let (x, y) = random_problem(seed, 120, 15, 0.1);
        let c = 10.0;
        let (model, trace) = train_linear_svm_traced(&x, &y, c, seed).unwrap();
        assert!(trace.alpha.iter().all(|&a| (0.0..=c).contains(&a)));
        for (p, d) in trace.primal.iter().zip(&trace.dual) {
            assert!(
                d <= &(p + 1e-9),
                "weak duality violated: dual {d} > primal {p}"
            );
        }
        // w equals the alpha-weighted sum of the training rows.
        let mut w = [0.0; 15];
        let mut b = 0.0;
        for ((xi, &yi), &a) in x.iter().zip(&y).zip(&trace.alpha) {
            let s = if yi == 1 { 1.0 } else { -1.0 };
            for (j, v) in xi.iter() {
                w[j] += a * s * v;
            }
            b += a * s;
        }
        for (u, v) in w.iter().zip(&model.weights) {
            assert!((u - v).abs() < 1e-9);
        }
        assert!((b - model.bias).abs() < 1e-9);
    }
}

#[test]
fn svm_dual_objective_never_decreases() {
    // Each coordinate step maximizes the dual exactly along that coordinate,
    // so the dual is monotone. The primal at intermediate iterates is not.
    for &c in &[0.1, 1.0, 100.0] {
        for seed in 0..10 {
            let (x, y) = random_problem(100 + seed, 60, 10, 0.05);
            let (_, trace) = train_linear_svm_traced(&x, &y, c, seed).unwrap();
            for w in trace.dual.windows(2) {
                assert!(
                    w[1] >= w[0] - 1e-9 * w[0].abs().max(1.0),
                    "dual fell from {} to {}",
                    w[0],
                    w[1]
                );
            }
        }
    }
}

#[test]
fn svm_converges_to_tolerance_and_closes_the_gap() {
    let (x, y) = random_problem(7, 150, 10, 0.05);
    let (model, trace) = train_linear_svm_traced(&x, &y, 1.0, 3).unwrap();
    assert!(model.converged);
    assert!(*trace.violation.last().unwrap() < 1e-4);
    let (p, d) = (*trace.primal.last().unwrap(), *trace.dual.last().unwrap());
    assert!(p - d <= 1e-3 * p, "duality gap {} at primal {p}", p - d);
    assert!(p <= trace.primal[0]);
}

#[test]
fn forest_is_identical_across_thread_counts() {
    let (x, y) = random_problem(11, 300, 30, 0.1);
    let params = ForestParams {
        n_estimators: 16,
        ..ForestParams::default()
    };
    let base = with_threads(1, || train_random_forest(&x, &y, &params, 5).unwrap());
    for threads in [2, 3, 8] {
        let other = with_threads(threads, || train_random_forest(&x, &y, &params, 5).unwrap());
        assert_eq!(base, other, "threads = {threads}");
    }
}

#[test]
fn forest_fits_training_data_with_fully_grown_trees() {
    let (x, y) = random_problem(12, 200, 20, 0.0);
    let m = train_random_forest(&x, &y, &ForestParams::default(), 1).unwrap();
    let correct = x
        .iter()
        .zip(&y)
        .filter(|(v, t)| m.predict(v).unwrap() == **t)
        .count();
    assert!(correct as f64 / y.len() as f64 > 0.95);
}

#[test]
fn fisher_matches_enumeration_on_larger_tables() {
    let mut rng = SplitMix64::new(21);
    for _ in 0..300 {
        let cells: Vec<u64> = (0..4).map(|_| rng.below(30) as u64).collect();
        let got = fisher_exact(cells[0], cells[1], cells[2], cells[3]).p_value;
        let want = fisher_oracle(cells[0], cells[1], cells[2], cells[3]);
        assert!(
            (got - want).abs() <= 1e-10 * want.max(1e-300) + 1e-15,
            "{cells:?}: {got} vs {want}"
        );
    }
}

#[test]
fn odds_ratio_interval_contains_estimate() {
    let mut rng = SplitMix64::new(22);
    for _ in 0..500 {
        let c: Vec<u64> = (0..4).map(|_| rng.below(20) as u64).collect();
        let r = odds_ratio_ci(c[0], c[1], c[2], c[3]);
        assert!(
            r.ci_low <= r.odds_ratio && r.odds_ratio <= r.ci_high,
            "{c:?}: {r:?}"
        );
        assert_eq!(r.corrected, c.contains(&0));
    }
}

proptest! {
    #[test]
    fn f1_and_accuracy_match_counting(pairs in prop::collection::vec((0u8..2, 0u8..2), 1..200)) {
        let (t, p): (Vec<u8>, Vec<u8>) = pairs.into_iter().unzip();
        let (f1, acc) = f1_and_accuracy(&t, &p).unwrap();
        let (f1_o, acc_o) = f1_oracle(&t, &p);
        prop_assert!((f1 - f1_o).abs() < 1e-12);
        prop_assert!((acc - acc_o).abs() < 1e-12);
    }

    #[test]
    fn stratified_folds_partition_and_balance(
        labels in prop::collection::vec(0u8..2, 20..200),
        k in 2usize..6,
        seed in any::<u64>(),
    ) {
        let pos = labels.iter().filter(|&&y| y == 1).count();
        prop_assume!(pos >= k && labels.len() - pos >= k);
        let folds = stratified_kfold(&labels, k, seed).unwrap();
        let mut all: Vec<usize> = folds.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
        for class in [0u8, 1] {
            let counts: Vec<usize> = folds.iter().map(|f| f.iter().filter(|&&i| labels[i] == class).count()).collect();
            prop_assert!(counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1);
        }
    }
}

const HELD_OUT: &[(&str, &str)] = &[
    ("en", "The clinic opened its doors early on Saturday so that families could bring their children in for the seasonal flu shot before school started again."),
    ("en", "Several readers wrote to the newspaper asking whether the new study had been reviewed by independent scientists before it was published online."),
    ("en", "Nurses said the waiting room was busier than usual, and most parents had questions about side effects rather than about the schedule itself."),
    ("fr", "Les parents se sont rassemblés devant la mairie pour demander plus d'informations sur la campagne de vaccination prévue pour la rentrée scolaire."),
    ("fr", "Selon le ministère, le nombre de cas de rougeole a fortement augmenté cette année dans plusieurs régions du sud du pays."),
    ("fr", "Le médecin a expliqué que les effets secondaires restent rares et qu'ils disparaissent généralement au bout de quelques jours."),
    ("de", "Die Eltern wollten wissen, ob die Impfung für ihre Kinder sicher ist und wann der nächste Termin in der Praxis frei wird."),
    ("de", "Nach Angaben des Gesundheitsamtes ist die Zahl der Masernfälle in diesem Jahr in mehreren Bundesländern deutlich gestiegen."),
    ("de", "Der Arzt erklärte, dass Nebenwirkungen selten sind und meistens nach wenigen Tagen wieder vollständig verschwinden."),
    ("es", "Los padres se reunieron frente al ayuntamiento para pedir más información sobre la campaña de vacunación prevista para el nuevo curso escolar."),
    ("es", "Según el ministerio, el número de casos de sarampión ha aumentado mucho este año en varias regiones del sur del país."),
    ("es", "El médico explicó que los efectos secundarios son poco frecuentes y que suelen desaparecer al cabo de unos pocos días."),
];

#[test]
fn language_detection_on_held_out_sentences() {
    for (lang, text) in HELD_OUT {
        let d = detect_language(text);
        assert_eq!(d.language, *lang, "{text}");
        assert!(d.confidence > 0.5, "{text}: confidence {}", d.confidence);
    }
}
