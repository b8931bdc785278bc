mod common;

use std::path::PathBuf;

use nswcat::classifiers::{
    deserialize_model, load_model, save_model, serialize_model, train, ClassifierKind, Hyperparameters, Model,
    TrainingSet,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Three Gaussian blobs in 8 dimensions, centres 6 standard deviations apart.
fn blobs(seed: u64, per_class: usize) -> (Vec<Vec<f64>>, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 1.0).unwrap();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for c in 0..3 {
        for _ in 0..per_class {
            let row = (0..8)
                .map(|j| if j % 3 == c { 6.0 } else { 0.0 } + noise.sample(&mut rng))
                .collect();
            rows.push(row);
            labels.push(format!("blob{c}"));
        }
    }
    (rows, labels)
}

fn set_of(rows: Vec<Vec<f64>>, labels: &[String]) -> TrainingSet {
    let mut classes = labels.to_vec();
    classes.sort();
    classes.dedup();
    TrainingSet::new(classes, rows, labels).unwrap()
}

fn accuracy(model: &Model, rows: &[Vec<f64>], labels: &[String]) -> f64 {
    let ok = rows
        .iter()
        .zip(labels)
        .filter(|(r, l)| model.predict(r).unwrap() == l.as_str())
        .count();
    ok as f64 / rows.len() as f64
}

#[test]
fn forest_separates_held_out_blobs() {
    let (train_rows, train_labels) = blobs(1, 100);
    let (test_rows, test_labels) = blobs(2, 100);
    let hyper = Hyperparameters {
        rng_seed: 3,
        ..Hyperparameters::default()
    };
    let model = train(ClassifierKind::Forest, &set_of(train_rows, &train_labels), &hyper).unwrap();
    assert!(accuracy(&model, &test_rows, &test_labels) >= 0.95);
}

#[test]
fn forest_beats_single_tree_on_average() {
    let (mut forest, mut tree) = (0.0, 0.0);
    for seed in 0..20 {
        let m = common::synthetic_blobs(seed);
        let (train_idx, test_idx): (Vec<usize>, Vec<usize>) = (0..m.len()).partition(|i| i % 3 != 0);
        let pick = |idx: &[usize]| -> (Vec<Vec<f64>>, Vec<String>) {
            (idx.iter().map(|&i| m.rows[i].clone()).collect(), idx.iter().map(|&i| m.labels[i].clone()).collect())
        };
        let (tr, tl) = pick(&train_idx);
        let (te, tel) = pick(&test_idx);
        let set = set_of(tr, &tl);
        let hyper = Hyperparameters {
            rng_seed: seed,
            forest_trees: 30,
            ..Hyperparameters::default()
        };
        forest += accuracy(&train(ClassifierKind::Forest, &set, &hyper).unwrap(), &te, &tel);
        tree += accuracy(&train(ClassifierKind::Tree, &set, &hyper).unwrap(), &te, &tel);
    }
    assert!(forest / 20.0 >= tree / 20.0, "forest {} tree {}", forest / 20.0, tree / 20.0);
}

#[test]
fn round_trip_preserves_predictions() {
    let (rows, labels) = blobs(4, 30);
    let set = set_of(rows, &labels);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let queries: Vec<Vec<f64>> = (0..100)
        .map(|_| (0..8).map(|_| rng.random_range(-3.0..9.0)).collect())
        .collect();
    let hyper = Hyperparameters {
        forest_trees: 20,
        knn_scale: true,
        ..Hyperparameters::default()
    };
    let dir = tempfile::tempdir().unwrap();
    for kind in ClassifierKind::ALL {
        let m = train(kind, &set, &hyper).unwrap();
        let path = dir.path().join(format!("{kind}.nswm"));
        save_model(&m, &path).unwrap();
        let back = load_model(&path).unwrap();
        for q in &queries {
            assert_eq!(m.predict(q).unwrap(), back.predict(q).unwrap());
        }
    }
}

#[test]
fn knn_ignores_zero_column() {
    let (rows, labels) = blobs(6, 20);
    let padded: Vec<Vec<f64>> = rows.iter().map(|r| [r.as_slice(), &[0.0]].concat()).collect();
    let h = Hyperparameters::default();
    let a = train(ClassifierKind::Knn, &set_of(rows, &labels), &h).unwrap();
    let b = train(ClassifierKind::Knn, &set_of(padded, &labels), &h).unwrap();
    let (queries, _) = blobs(7, 10);
    for q in &queries {
        let qp = [q.as_slice(), &[0.0]].concat();
        assert_eq!(a.predict(q).unwrap(), b.predict(&qp).unwrap());
    }
}

fn golden_dir() -> PathBuf {
    common::fixtures().join("models")
}

fn golden_queries() -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..40).map(|_| (0..8).map(|_| rng.random_range(-3.0..9.0)).collect()).collect()
}

/// Models saved by an earlier build must keep loading and predicting the
/// same labels. Set NSWCAT_REGENERATE_FIXTURES=1 to rewrite them after an
/// intentional format change.
#[test]
fn golden_models_still_load() {
    let dir = golden_dir();
    let queries = golden_queries();
    if std::env::var_os("NSWCAT_REGENERATE_FIXTURES").is_some() {
        std::fs::create_dir_all(&dir).unwrap();
        let (rows, labels) = blobs(8, 12);
        let set = set_of(rows, &labels);
        let hyper = Hyperparameters {
            forest_trees: 7,
            rng_seed: 17,
            knn_k: 3,
            knn_scale: true,
            ..Hyperparameters::default()
        };
        for kind in ClassifierKind::ALL {
            let m = train(kind, &set, &hyper).unwrap();
            save_model(&m, dir.join(format!("{kind}.nswm"))).unwrap();
            let expected: String = queries.iter().map(|q| format!("{}\n", m.predict(q).unwrap())).collect();
            std::fs::write(dir.join(format!("{kind}.expected")), expected).unwrap();
        }
    }
    for kind in ClassifierKind::ALL {
        let bytes = std::fs::read(dir.join(format!("{kind}.nswm"))).unwrap();
        let m = deserialize_model(&bytes).unwrap();
        assert_eq!(m.kind(), kind);
        assert_eq!(serialize_model(&m), bytes);
        let expected = std::fs::read_to_string(dir.join(format!("{kind}.expected"))).unwrap();
        let got: Vec<&str> = queries.iter().map(|q| m.predict(q).unwrap()).collect();
        assert_eq!(got, expected.lines().collect::<Vec<_>>(), "{kind}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unbounded_tree_fits_consistent_data(
        raw in proptest::collection::vec((proptest::collection::vec(0u8..4, 3), 0usize..3), 1..40)
    ) {
        let mut seen = std::collections::HashMap::new();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (features, class) in raw {
            let key = features.clone();
            let class = *seen.entry(key).or_insert(class);
            rows.push(features.iter().map(|&v| v as f64).collect::<Vec<f64>>());
            labels.push(format!("k{class}"));
        }
        let set = set_of(rows.clone(), &labels);
        let hyper = Hyperparameters { tree_min_leaf: 1, ..Hyperparameters::default() };
        let m = train(ClassifierKind::Tree, &set, &hyper).unwrap();
        for (r, l) in rows.iter().zip(&labels) {
            prop_assert_eq!(m.predict(r).unwrap(), l.as_str());
        }
    }
}
