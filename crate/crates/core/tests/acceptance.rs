//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use common::{close, oracle_stat_vector, random_counts, synthetic_blobs};
use nswcat::builtin;
use nswcat::classifiers::{ClassifierKind, Hyperparameters};
use nswcat::corpus::{load_corpus, CorpusStats};
use nswcat::features::{
    derived_features, featurize_corpus, statistical_vector, FrequencyVector, Representation, DERIVED_WIDTH,
    FREQ_WIDTH, STAT_WIDTH, UNION_WIDTH,
};
use nswcat::harness::{accuracy, cross_validate, kfold_split, percent};
use nswcat::taxonomy::{Superclass, LEAF_COUNT};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Percentage points allowed between recomputed and published corpus shares.
const TABLE_TOLERANCE: f64 = 0.01;
/// Floor for the forest on the synthetic corpus.
const FOREST_FLOOR: f64 = 0.90;
const ORACLE_TRIALS: usize = 1000;
const SPLIT_SEEDS: u64 = 100;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus_shares() -> Outcome {
    let records = [
        ("official", 328_322, 81_667, 24.87),
        ("literature", 789_555, 18_150, 2.30),
        ("informative", 86_819, 12_641, 14.56),
        ("popular", 224_518, 18_033, 8.03),
        ("educational", 198_661, 11_598, 5.84),
        ("scientific", 644_571, 73_979, 11.48),
    ];
    let stats = CorpusStats::from_counts(records.iter().map(|&(l, t, n, _)| (l, t, n)));
    for ((label, _, _, want), (got_label, row)) in records.iter().zip(&stats.per_class) {
        check(label == got_label, || format!("category order {got_label}"))?;
        check((row.nsw_percent - want).abs() <= TABLE_TOLERANCE, || {
            format!("{label}: {:.4} vs {want}", row.nsw_percent)
        })?;
    }
    let o = stats.overall;
    check(o.tokens == 2_272_446 && o.nsws == 216_068, || {
        format!("overall counts {}/{}", o.nsws, o.tokens)
    })?;
    check((o.nsw_percent - 9.51).abs() <= TABLE_TOLERANCE, || {
        format!("overall {:.4}", o.nsw_percent)
    })?;
    Ok(format!("6 categories + overall {:.2}%", o.nsw_percent))
}

fn accuracy_arithmetic() -> Outcome {
    let pairs = [(263, "67.44"), (305, "78.21"), (296, "75.90"), (306, "78.46"), (309, "79.23")];
    for (correct, want) in pairs {
        let got = percent(accuracy(correct, 390).map_err(|e| e.to_string())?);
        check(got == want, || format!("{correct}/390 -> {got}, expected {want}"))?;
    }
    Ok("5 counts out of 390".into())
}

fn vector_widths() -> Outcome {
    let lexer = builtin::lexer();
    let t = &lexer.taxonomy;
    let blocks = [
        t.count_by_superclass(Superclass::String),
        t.count_by_superclass(Superclass::Number),
        t.count_by_superclass(Superclass::Combined),
        DERIVED_WIDTH,
    ];
    check(blocks == [15, 21, 20, 29], || format!("freq blocks {blocks:?}"))?;
    let corpus = load_corpus(common::fixtures().join("corpus30")).map_err(|e| e.to_string())?;
    check(corpus.documents.len() == 30, || format!("{} documents", corpus.documents.len()))?;
    let m: BTreeMap<_, _> = Representation::ALL
        .iter()
        .map(|&r| featurize_corpus(&corpus, lexer, r).map(|m| (r.as_str(), m)))
        .collect::<nswcat::Result<_>>()
        .map_err(|e| e.to_string())?;
    for (name, want, pinned) in [("freq", FREQ_WIDTH, 85), ("stat", STAT_WIDTH, 25), ("union", UNION_WIDTH, 110)] {
        check(want == pinned, || format!("{name} width constant is {want}"))?;
        for row in &m[name].rows {
            check(row.len() == want, || format!("{name} row of width {}", row.len()))?;
        }
    }
    for (i, row) in m["freq"].rows.iter().enumerate() {
        let sum = |s: Superclass| s.slots().map(|j| row[j]).sum::<f64>();
        let d = &row[LEAF_COUNT..];
        let (n, s, c) = (sum(Superclass::Number), sum(Superclass::String), sum(Superclass::Combined));
        check(d[0] == n && d[1] == s && d[2] == c && d[3] == n + s + c, || {
            format!("doc {i}: superclass totals {:?} vs {n} {s} {c}", &d[..4])
        })?;
        let union = &m["union"].rows[i];
        check(union[..FREQ_WIDTH] == row[..] && union[FREQ_WIDTH..] == m["stat"].rows[i][..], || {
            format!("doc {i}: union is not freq followed by stat")
        })?;
    }
    Ok("85 = 15+21+20+29, 25, 110 on 30 documents".into())
}

fn golden_lexer() -> Outcome {
    let (total, mismatches) = common::golden_mismatches();
    let t = builtin::taxonomy();
    let mut seen = [false; LEAF_COUNT];
    for (_, _, anns) in common::golden_documents() {
        for a in anns {
            let id = t.by_name(&a.type_name).ok_or_else(|| format!("unknown type {}", a.type_name))?;
            seen[id.index()] = true;
        }
    }
    let covered = seen.iter().filter(|s| **s).count();
    check(covered == LEAF_COUNT, || format!("{covered}/{LEAF_COUNT} leaves annotated"))?;
    check(mismatches.is_empty(), || {
        format!(
            "{} of {total} annotations differ; first: {}",
            mismatches.len(),
            mismatches[0]
        )
    })?;
    Ok(format!("{total}/{total} annotations, {covered} leaves"))
}

fn stat_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..ORACLE_TRIALS {
        let counts = random_counts(&mut rng);
        let c: [u64; LEAF_COUNT] = std::array::from_fn(|i| counts[i] as u64);
        let mut values: Vec<f64> = counts.iter().map(|&v| v as f64).collect();
        values.extend(derived_features(&c, 1000, builtin::taxonomy()));
        let freq = FrequencyVector {
            doc_id: format!("t{trial}"),
            values,
        };
        let got = statistical_vector(&freq).values;
        let want = oracle_stat_vector(&counts);
        for (i, (g, w)) in got.iter().zip(&want).enumerate() {
            check(close(*g, *w), || format!("trial {trial} slot {i}: {g} vs {w}"))?;
        }
    }
    Ok(format!("{ORACLE_TRIALS} vectors, 25 values each"))
}

fn forest_on_synthetic() -> Outcome {
    let m = synthetic_blobs(1);
    let labels = m.labels.clone();
    let folds = kfold_split(&labels, 5, 0, true).map_err(|e| e.to_string())?;
    let hyper = Hyperparameters::default();
    let run = |kind| cross_validate(&m, kind, &hyper, &folds).map(|r| r.accuracy).map_err(|e| e.to_string());
    let forest = run(ClassifierKind::Forest)?;
    let nb = run(ClassifierKind::NaiveBayes)?;
    let detail = format!("forest {} nb {}", percent(forest), percent(nb));
    check(forest >= FOREST_FLOOR && forest >= nb, || detail.clone())?;
    Ok(detail)
}

fn dir_contents(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    std::fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| {
            let p = e.map_err(|e| e.to_string())?.path();
            let bytes = std::fs::read(&p).map_err(|e| e.to_string())?;
            Ok((p.file_name().unwrap().to_string_lossy().into_owned(), bytes))
        })
        .collect()
}

fn evaluate_is_deterministic() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = common::fixtures().join("corpus30");
    let mut outputs = Vec::new();
    for (i, threads) in ["4", "4", "1"].iter().enumerate() {
        let out = tmp.path().join(format!("run{i}"));
        let status = Command::new(env!("CARGO_BIN_EXE_nswcat"))
            .args(["evaluate", "--corpus"])
            .arg(&corpus)
            .args(["--seed", "11", "--trees", "30", "--threads", threads, "--out-dir"])
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        check(status.status.success(), || {
            String::from_utf8_lossy(&status.stderr).into_owned()
        })?;
        outputs.push(dir_contents(&out)?);
    }
    check(outputs[0].len() == 14, || format!("{} files written", outputs[0].len()))?;
    check(outputs[0] == outputs[1], || "two parallel runs differ".into())?;
    check(outputs[0] == outputs[2], || "parallel and serial runs differ".into())?;
    Ok(format!("{} files identical across 3 runs", outputs[0].len()))
}

fn stratified_split() -> Outcome {
    let labels: Vec<String> = (0..390).map(|i| format!("c{}", i / 65)).collect();
    for seed in 0..SPLIT_SEEDS {
        let f = kfold_split(&labels, 5, seed, true).map_err(|e| e.to_string())?;
        for fold in 0..5 {
            let test = f.test_indices(fold);
            for c in 0..6 {
                let n = test.iter().filter(|&&i| i / 65 == c).count();
                check(n == 13, || format!("seed {seed} fold {fold} class {c}: {n}"))?;
            }
        }
    }
    Ok(format!("13 per class per fold for {SPLIT_SEEDS} seeds"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("corpus NSW shares", corpus_shares),
        ("accuracy percentages", accuracy_arithmetic),
        ("feature vector widths", vector_widths),
        ("lexer on golden set", golden_lexer),
        ("statistics vs oracle", stat_oracle),
        ("forest on synthetic corpus", forest_on_synthetic),
        ("deterministic evaluate", evaluate_is_deterministic),
        ("stratified folds", stratified_split),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {}  {name}: {detail} ({ms} ms)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}  {name}: {detail} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
