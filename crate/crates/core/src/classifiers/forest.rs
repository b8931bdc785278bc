use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::tree::{FeatureSampler, TreeParams};
use super::{argmax_first, Hyperparameters, Tree, TrainingSet};

/// Features drawn per split: floor(sqrt(width)), at least one.
pub fn features_per_split(width: usize) -> usize {
    ((width as f64).sqrt().floor() as usize).max(1)
}

/// Tree `t` is grown from its own generator seeded with `rng_seed + t`,
/// so the forest does not depend on scheduling.
pub(crate) fn fit(set: &TrainingSet, hyper: &Hyperparameters) -> Vec<Tree> {
    let params = TreeParams::from(hyper);
    let per_split = features_per_split(set.width);
    (0..hyper.forest_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(hyper.rng_seed.wrapping_add(t as u64));
            let n = set.len();
            let bag: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            Tree::fit(
                set,
                &bag,
                &params,
                Some(FeatureSampler {
                    rng: &mut rng,
                    per_split,
                }),
            )
        })
        .collect()
}

pub(crate) fn predict(trees: &[Tree], classes: usize, x: &[f64]) -> usize {
    let mut votes = vec![0usize; classes];
    for t in trees {
        votes[t.predict(x)] += 1;
    }
    argmax_first(&votes)
}
