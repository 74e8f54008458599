//! Binary CART classifier with Gini splitting.
//!
//! Axis-aligned splits on the two standardized features, Gini diversity
//! criterion, at most 100 internal splits, leaves down to a single point,
//! no surrogates. Leaves store class fractions, which double as the
//! posterior.

use crate::lattice::Feature;

/// Split budget (internal node count cap).
pub const MAX_SPLITS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        /// Gini impurity of the samples reaching this node.
        impurity: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Fraction of class-0 samples in the leaf.
        p0: f64,
        p1: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeModel {
    pub nodes: Vec<Node>,
    pub split_count: usize,
}

impl TreeModel {
    /// Class fractions of the leaf that `x` falls into.
    pub fn leaf_fractions(&self, x: Feature) -> (f64, f64) {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { p0, p1 } => return (*p0, *p1),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    at = if x[*feature] < *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}

fn gini(n0: usize, n1: usize) -> f64 {
    let n = (n0 + n1) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let f0 = n0 as f64 / n;
    let f1 = n1 as f64 / n;
    1.0 - f0 * f0 - f1 * f1
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

/// Best Gini-gain split over both features; thresholds are midpoints of
/// consecutive distinct values. Ties resolve to the lowest feature, then
/// the lowest threshold, so training is order-independent.
#[allow(clippy::needless_range_loop)] // `feature` indexes the column axis
fn best_split(points: &[Feature], labels: &[u8], indices: &[usize]) -> Option<BestSplit> {
    let n0 = indices.iter().filter(|&&i| labels[i] == 0).count();
    let n1 = indices.len() - n0;
    let parent = gini(n0, n1);
    if parent == 0.0 {
        return None;
    }
    let total = indices.len() as f64;

    let mut best: Option<BestSplit> = None;
    for feature in 0..2 {
        let mut order: Vec<usize> = indices.to_vec();
        order.sort_by(|&a, &b| {
            points[a][feature]
                .partial_cmp(&points[b][feature])
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut left0 = 0usize;
        let mut left1 = 0usize;
        for w in 0..order.len() - 1 {
            let i = order[w];
            if labels[i] == 0 {
                left0 += 1;
            } else {
                left1 += 1;
            }
            let a = points[order[w]][feature];
            let b = points[order[w + 1]][feature];
            if a == b {
                continue;
            }
            let left_n = left0 + left1;
            let right0 = n0 - left0;
            let right1 = n1 - left1;
            let right_n = indices.len() - left_n;
            let weighted = (left_n as f64 * gini(left0, left1)
                + right_n as f64 * gini(right0, right1))
                / total;
            let gain = parent - weighted;
            let threshold = 0.5 * (a + b);
            let better = match &best {
                None => gain > 1e-12,
                Some(cur) => {
                    gain > cur.gain + 1e-12
                        || ((gain - cur.gain).abs() <= 1e-12
                            && (feature, threshold) < (cur.feature, cur.threshold))
                }
            };
            if better {
                best = Some(BestSplit {
                    feature,
                    threshold,
                    gain,
                });
            }
        }
    }
    best
}

/// Grows the tree depth-first until leaves are pure, no split gains, or
/// the split budget is spent.
pub fn train_tree(points: &[Feature], labels: &[u8]) -> TreeModel {
    let mut nodes = Vec::new();
    let mut split_count = 0usize;
    let all: Vec<usize> = (0..points.len()).collect();
    grow(points, labels, all, &mut nodes, &mut split_count);
    TreeModel { nodes, split_count }
}

fn grow(
    points: &[Feature],
    labels: &[u8],
    indices: Vec<usize>,
    nodes: &mut Vec<Node>,
    split_count: &mut usize,
) -> usize {
    let n0 = indices.iter().filter(|&&i| labels[i] == 0).count();
    let n1 = indices.len() - n0;

    let make_leaf = |nodes: &mut Vec<Node>| {
        let n = indices.len() as f64;
        let p0 = n0 as f64 / n;
        nodes.push(Node::Leaf { p0, p1: 1.0 - p0 });
        nodes.len() - 1
    };

    if *split_count >= MAX_SPLITS {
        return make_leaf(nodes);
    }
    let Some(split) = best_split(points, labels, &indices) else {
        return make_leaf(nodes);
    };

    *split_count += 1;
    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
        .iter()
        .partition(|&&i| points[i][split.feature] < split.threshold);

    let at = nodes.len();
    nodes.push(Node::Split {
        feature: split.feature,
        threshold: split.threshold,
        impurity: gini(n0, n1),
        left: 0,
        right: 0,
    });
    let left = grow(points, labels, left_idx, nodes, split_count);
    let right = grow(points, labels, right_idx, nodes, split_count);
    if let Node::Split {
        left: l, right: r, ..
    } = &mut nodes[at]
    {
        *l = left;
        *r = right;
    }
    at
}
