#![allow(dead_code)]

use std::path::PathBuf;

use nswcat::features::{derived_features, FeatureMatrix, Representation};
use nswcat::taxonomy::{Taxonomy, LEAF_COUNT};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, LogNormal, Poisson};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= f64::max(1e-12, 1e-9 * a.abs().max(b.abs()))
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// 1-based closest-rank interpolation: position 1 + (n - 1)p.
fn oracle_quantile(xs: &[i64], p: f64) -> f64 {
    let mut s = xs.to_vec();
    s.sort();
    let pos = 1.0 + (s.len() as f64 - 1.0) * p;
    let k = pos.floor() as usize;
    let d = pos - k as f64;
    let xk = s[k - 1] as f64;
    if k < s.len() {
        xk + d * (s[k] as f64 - xk)
    } else {
        xk
    }
}

struct Sums {
    n: i128,
    s1: i128,
    s2: i128,
    s3: i128,
    s4: i128,
}

fn sums(xs: &[i64]) -> Sums {
    let mut s = Sums {
        n: xs.len() as i128,
        s1: 0,
        s2: 0,
        s3: 0,
        s4: 0,
    };
    for &x in xs {
        let x = x as i128;
        s.s1 += x;
        s.s2 += x * x;
        s.s3 += x * x * x;
        s.s4 += x * x * x * x;
    }
    s
}

/// Population variance from exact power sums: (n*S2 - S1^2) / n^2.
fn oracle_variance(xs: &[i64]) -> f64 {
    let s = sums(xs);
    (s.n * s.s2 - s.s1 * s.s1) as f64 / (s.n * s.n) as f64
}

fn oracle_slice(xs: &[i64], out: &mut Vec<f64>) {
    let mean = xs.iter().sum::<i64>() as f64 / xs.len() as f64;
    let q1 = oracle_quantile(xs, 0.25);
    let q3 = oracle_quantile(xs, 0.75);
    out.push(mean);
    out.push(q3);
    out.push(q1);
    out.push(q3 - q1);
    out.push(ratio(q3 - q1, q3 + q1));
    out.push(ratio(oracle_variance(xs).sqrt(), mean));
}

/// Independent statistics over integer leaf counts. Central moments are
/// expanded into exact integer power sums, so the only rounding is the
/// final conversion.
pub fn oracle_stat_vector(counts: &[i64]) -> Vec<f64> {
    assert_eq!(counts.len(), LEAF_COUNT);
    let s = sums(counts);
    let n = s.n;
    let n2 = n * s.s2 - s.s1 * s.s1;
    let n3 = n * n * s.s3 - 3 * n * s.s1 * s.s2 + 2 * s.s1 * s.s1 * s.s1;
    let n4 = n * n * n * s.s4 - 4 * n * n * s.s1 * s.s3 + 6 * n * s.s1 * s.s1 * s.s2 - 3 * s.s1 * s.s1 * s.s1 * s.s1;
    let mean = s.s1 as f64 / n as f64;
    let var = n2 as f64 / (n * n) as f64;
    let max = *counts.iter().max().unwrap();
    let min = *counts.iter().min().unwrap();
    let (kurt, skew) = if n2 == 0 {
        (0.0, 0.0)
    } else {
        let n2f = n2 as f64;
        (n4 as f64 / (n2f * n2f), n3 as f64 / n2f.powf(1.5))
    };
    let mut out = vec![mean, (max - min) as f64, var.sqrt(), var, ratio(var.sqrt(), mean), kurt, skew];
    oracle_slice(&counts[0..15], &mut out);
    oracle_slice(&counts[15..36], &mut out);
    oracle_slice(&counts[0..36], &mut out);
    out
}

/// Random leaf-count vector; the shape varies between sparse, dense and
/// heavy-tailed so every branch of the statistics gets exercised.
pub fn random_counts(rng: &mut ChaCha8Rng) -> Vec<i64> {
    match rng.random_range(0..6) {
        0 => vec![0; LEAF_COUNT],
        1 => vec![rng.random_range(0..20); LEAF_COUNT],
        2 => (0..LEAF_COUNT)
            .map(|_| if rng.random_bool(0.85) { 0 } else { rng.random_range(1..5) })
            .collect(),
        3 => (0..LEAF_COUNT).map(|_| rng.random_range(0..1000)).collect(),
        4 => (0..LEAF_COUNT)
            .map(|_| if rng.random_bool(0.05) { rng.random_range(100..5000) } else { rng.random_range(0..3) })
            .collect(),
        _ => (0..LEAF_COUNT).map(|_| rng.random_range(0..40)).collect(),
    }
}

pub fn synthetic_blobs(seed: u64) -> FeatureMatrix {
    synthetic_blobs_with(seed, 15.0)
}

/// Six classes of 65 documents. Document length is log-normal and every
/// leaf count is Poisson with a rate proportional to it, times a gamma
/// factor for overdispersion. Each document raises the rate on one of two
/// marker blocks belonging to its class, to `marker_rate` per thousand
/// words against a background of one.
pub fn synthetic_blobs_with(seed: u64, marker_rate: f64) -> FeatureMatrix {
    let taxonomy = Taxonomy::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let length = LogNormal::new(800f64.ln(), 0.8).unwrap();
    let noise = Gamma::new(2.0, 0.5).unwrap();
    let mut doc_ids = Vec::new();
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for class in 0..6usize {
        for d in 0..65 {
            let mode = rng.random_range(0..2usize);
            let block = (class * 2 + mode) * 4;
            let token_count = length.sample(&mut rng).max(50.0);
            let mut counts = [0u64; LEAF_COUNT];
            for (i, c) in counts.iter_mut().enumerate() {
                let per_thousand = if (block..block + 4).contains(&i) { marker_rate } else { 1.0 };
                let rate = per_thousand * token_count / 1000.0 * noise.sample(&mut rng);
                *c = if rate > 0.0 { Poisson::new(rate).unwrap().sample(&mut rng) as u64 } else { 0 };
            }
            let mut row: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
            row.extend(derived_features(&counts, token_count as usize, &taxonomy));
            doc_ids.push(format!("class{class}/{d:02}.txt"));
            labels.push(format!("class{class}"));
            rows.push(row);
        }
    }
    FeatureMatrix::new(Representation::Freq, doc_ids, labels, rows).unwrap()
}

/// One hand-annotated NSW: byte span and type name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Annotation {
    pub start: usize,
    pub end: usize,
    pub type_name: String,
}

/// Annotation lines are `surface<TAB>type` in document order; spans come
/// from finding each surface after the end of the previous one.
pub fn parse_annotations(text: &str, ann: &str) -> Vec<Annotation> {
    let mut cursor = 0;
    let mut out = Vec::new();
    for line in ann.lines().filter(|l| !l.is_empty()) {
        let (surface, type_name) = line.split_once('\t').expect("surface<TAB>type");
        let offset = text[cursor..]
            .find(surface)
            .unwrap_or_else(|| panic!("`{surface}` not found after byte {cursor}"));
        let start = cursor + offset;
        let end = start + surface.len();
        out.push(Annotation {
            start,
            end,
            type_name: type_name.to_string(),
        });
        cursor = end;
    }
    out
}

/// (id, text, annotations) for every golden document, sorted by id.
pub fn golden_documents() -> Vec<(String, String, Vec<Annotation>)> {
    let dir = fixtures().join("golden");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let ann = std::fs::read_to_string(p.with_extension("ann")).unwrap();
            let anns = parse_annotations(&text, &ann);
            (p.file_stem().unwrap().to_string_lossy().into_owned(), text, anns)
        })
        .collect()
}

/// Differences between the lexer's output and the annotations, as
/// readable lines; empty when they agree exactly.
pub fn golden_mismatches() -> (usize, Vec<String>) {
    let lx = nswcat::builtin::lexer();
    let mut total = 0;
    let mut out = Vec::new();
    for (id, text, expected) in golden_documents() {
        total += expected.len();
        let got: Vec<Annotation> = lx
            .extract(&id, &text)
            .into_iter()
            .map(|o| Annotation {
                start: o.start,
                end: o.end,
                type_name: lx.taxonomy.name(o.nsw_type).to_string(),
            })
            .collect();
        for e in expected.iter().filter(|e| !got.contains(e)) {
            out.push(format!("{id}: missing {} `{}`", e.type_name, &text[e.start..e.end]));
        }
        for g in got.iter().filter(|g| !expected.contains(g)) {
            out.push(format!("{id}: spurious {} `{}`", g.type_name, &text[g.start..g.end]));
        }
    }
    (total, out)
}
