use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;

use super::{argmax_first, Hyperparameters, TrainingSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Node {
    Leaf {
        class: usize,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Binary threshold tree stored in preorder; node 0 is the root and every
/// child index is greater than its parent's.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct TreeParams {
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
}

impl From<&Hyperparameters> for TreeParams {
    fn from(h: &Hyperparameters) -> Self {
        TreeParams {
            min_leaf: h.tree_min_leaf,
            max_depth: h.tree_max_depth,
        }
    }
}

/// Random feature subset drawn afresh at every split.
pub(crate) struct FeatureSampler<'a> {
    pub rng: &'a mut ChaCha8Rng,
    pub per_split: usize,
}

fn entropy(counts: &[usize], n: usize) -> f64 {
    let n = n as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

struct Builder<'s, 'r> {
    set: &'s TrainingSet,
    params: TreeParams,
    sampler: Option<FeatureSampler<'r>>,
    nodes: Vec<Node>,
}

#[derive(Clone, Copy)]
struct Candidate {
    gain: f64,
    feature: usize,
    threshold: f64,
}

impl Builder<'_, '_> {
    fn build(&mut self, indices: Vec<usize>, depth: usize) -> usize {
        let counts = self.set.class_counts(&indices);
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf {
            class: argmax_first(&counts),
        });
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let too_small = indices.len() < 2 * self.params.min_leaf;
        let too_deep = self.params.max_depth.is_some_and(|d| depth >= d);
        if pure || too_small || too_deep {
            return at;
        }
        let Some(best) = self.best_split(&indices, &counts) else {
            return at;
        };
        let (left, right): (Vec<usize>, Vec<usize>) = indices
            .iter()
            .partition(|&&i| self.set.rows[i][best.feature] <= best.threshold);
        let l = self.build(left, depth + 1);
        let r = self.build(right, depth + 1);
        self.nodes[at] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left: l,
            right: r,
        };
        at
    }

    fn best_split(&mut self, indices: &[usize], counts: &[usize]) -> Option<Candidate> {
        let width = self.set.width;
        let Some(sampler) = self.sampler.as_mut() else {
            return self.search((0..width).collect::<Vec<_>>().as_slice(), indices, counts);
        };
        let m = sampler.per_split.min(width);
        let mut chosen = sample(sampler.rng, width, m).into_vec();
        chosen.sort_unstable();
        if let Some(c) = self.search(&chosen, indices, counts) {
            return Some(c);
        }
        // None of the drawn features separates this node; try the rest.
        let rest: Vec<usize> = (0..width).filter(|j| chosen.binary_search(j).is_err()).collect();
        self.search(&rest, indices, counts)
    }

    /// Highest-gain split over `features`, ties to the lower feature and
    /// then the lower threshold. Zero-gain splits are allowed so that a
    /// node is only left impure when no threshold separates any rows.
    fn search(&self, features: &[usize], indices: &[usize], counts: &[usize]) -> Option<Candidate> {
        let n = indices.len();
        let parent = entropy(counts, n);
        let min_leaf = self.params.min_leaf;
        let mut best: Option<Candidate> = None;
        let mut sorted = indices.to_vec();
        for &j in features {
            let rows = &self.set.rows;
            sorted.sort_by(|&a, &b| rows[a][j].total_cmp(&rows[b][j]));
            let mut left = vec![0usize; counts.len()];
            for pos in 0..n - 1 {
                left[self.set.targets[sorted[pos]]] += 1;
                let a = rows[sorted[pos]][j];
                let b = rows[sorted[pos + 1]][j];
                let ln = pos + 1;
                let rn = n - ln;
                if a == b || ln < min_leaf || rn < min_leaf {
                    continue;
                }
                let right: Vec<usize> = counts.iter().zip(&left).map(|(c, l)| c - l).collect();
                let gain =
                    parent - (ln as f64 * entropy(&left, ln) + rn as f64 * entropy(&right, rn)) / n as f64;
                if best.is_none_or(|b| gain > b.gain) {
                    let mid = a + (b - a) / 2.0;
                    best = Some(Candidate {
                        gain,
                        feature: j,
                        threshold: if mid < b { mid } else { a },
                    });
                }
            }
        }
        best
    }
}

impl Tree {
    pub(crate) fn fit(
        set: &TrainingSet,
        indices: &[usize],
        params: &TreeParams,
        sampler: Option<FeatureSampler<'_>>,
    ) -> Tree {
        let mut b = Builder {
            set,
            params: *params,
            sampler,
            nodes: Vec::new(),
        };
        b.build(indices.to_vec(), 0);
        Tree { nodes: b.nodes }
    }

    /// Wraps decoded nodes; the caller has checked indices.
    pub(crate) fn from_nodes(nodes: Vec<Node>) -> Tree {
        Tree { nodes }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { class } => return class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    /// Edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }
}
