//! Greedy CART over binary features and binary labels.
//!
//! Splits minimise weighted Gini impurity, with ties broken toward the
//! lowest feature index; impurity comparisons are exact (integer cross
//! multiplication), so training is fully deterministic. Nodes grow until
//! label-pure, out of features, or smaller than two rows. Zero-gain splits
//! are taken: parity-style labels need them.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("cannot train on an empty training set")]
    EmptyTrainingSet,
    #[error("feature width mismatch: model expects {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
}

/// Optional growth limit. `None` grows to purity, the default used by the
/// independence test.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrainOptions {
    pub max_depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Leaf { bit: u8 },
    Split { feature: u32, zero: u32, one: u32 },
}

/// A trained tree for one label bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTree {
    n_features: usize,
    nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { zero, one, .. } => {
                    1 + walk(nodes, zero as usize).max(walk(nodes, one as usize))
                }
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn predict(&self, features: &[&[u8]], row: usize) -> u8 {
        let mut at = 0usize;
        loop {
            match self.nodes[at] {
                Node::Leaf { bit } => return bit,
                Node::Split { feature, zero, one } => {
                    at = if features[feature as usize][row] == 0 {
                        zero as usize
                    } else {
                        one as usize
                    };
                }
            }
        }
    }
}

/// Train one tree: `features` are columns over the same rows as `labels`.
pub fn train_tree(
    features: &[&[u8]],
    labels: &[u8],
    opts: &TrainOptions,
) -> Result<DecisionTree, TreeError> {
    if labels.is_empty() {
        return Err(TreeError::EmptyTrainingSet);
    }
    let mut tree = DecisionTree { n_features: features.len(), nodes: Vec::new() };
    let mut rows: Vec<u32> = (0..labels.len() as u32).collect();
    let mut used = vec![false; features.len()];
    grow(&mut tree, features, labels, &mut rows, &mut used, 0, opts);
    Ok(tree)
}

fn majority(labels: &[u8], rows: &[u32]) -> u8 {
    let ones: usize = rows.iter().map(|&r| labels[r as usize] as usize).sum();
    u8::from(ones * 2 > rows.len())
}

fn grow(
    tree: &mut DecisionTree,
    features: &[&[u8]],
    labels: &[u8],
    rows: &mut [u32],
    used: &mut [bool],
    depth: usize,
    opts: &TrainOptions,
) -> u32 {
    let n = rows.len();
    let ones: usize = rows.iter().map(|&r| labels[r as usize] as usize).sum();
    let at_depth_limit = opts.max_depth.is_some_and(|d| depth >= d);
    if n < 2 || ones == 0 || ones == n || at_depth_limit {
        tree.nodes.push(Node::Leaf { bit: u8::from(ones * 2 > n) });
        return (tree.nodes.len() - 1) as u32;
    }

    // Pick the partitioning feature with the best split quality
    //   sum_side (k^2 + (n_side - k)^2) / n_side
    // (equivalent to minimal weighted Gini), compared exactly.
    let mut best: Option<(u32, u128, u128)> = None; // (feature, numerator, denominator)
    for f in 0..features.len() {
        if used[f] {
            continue;
        }
        let col = features[f];
        let mut n1 = 0usize;
        let mut k1 = 0usize;
        for &r in rows.iter() {
            let v = col[r as usize] as usize;
            n1 += v;
            k1 += v & labels[r as usize] as usize;
        }
        let n0 = n - n1;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let k0 = ones - k1;
        let quality = |k: usize, m: usize| (k * k + (m - k) * (m - k)) as u128;
        let num = quality(k0, n0) * n1 as u128 + quality(k1, n1) * n0 as u128;
        let den = (n0 * n1) as u128;
        let better = match &best {
            None => true,
            Some((_, bn, bd)) => num * bd > bn * den,
        };
        if better {
            best = Some((f as u32, num, den));
        }
    }

    let Some((feature, _, _)) = best else {
        tree.nodes.push(Node::Leaf { bit: majority(labels, rows) });
        return (tree.nodes.len() - 1) as u32;
    };

    // Stable partition keeps training deterministic.
    let col = features[feature as usize];
    let split = {
        let mut zero_rows: Vec<u32> = Vec::with_capacity(n);
        let mut one_rows: Vec<u32> = Vec::with_capacity(n);
        for &r in rows.iter() {
            if col[r as usize] == 0 {
                zero_rows.push(r);
            } else {
                one_rows.push(r);
            }
        }
        let boundary = zero_rows.len();
        rows[..boundary].copy_from_slice(&zero_rows);
        rows[boundary..].copy_from_slice(&one_rows);
        boundary
    };

    let node = tree.nodes.len() as u32;
    tree.nodes.push(Node::Leaf { bit: 0 }); // placeholder
    used[feature as usize] = true;
    let (zero_rows, one_rows) = rows.split_at_mut(split);
    let zero = grow(tree, features, labels, zero_rows, used, depth + 1, opts);
    let one = grow(tree, features, labels, one_rows, used, depth + 1, opts);
    used[feature as usize] = false;
    tree.nodes[node as usize] = Node::Split { feature, zero, one };
    node
}

/// One model of the test: an independent tree per label bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    pub trees: Vec<DecisionTree>,
}

/// Train one tree per label column over the same feature columns.
pub fn train_forest(
    features: &[&[u8]],
    labels: &[&[u8]],
    opts: &TrainOptions,
) -> Result<Forest, TreeError> {
    let trees = labels
        .iter()
        .map(|col| train_tree(features, col, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Forest { trees })
}

/// Count mispredicted bits over all rows and label columns.
pub fn score_errors(
    forest: &Forest,
    features: &[&[u8]],
    labels: &[&[u8]],
) -> Result<u64, TreeError> {
    let mut errors = 0u64;
    for (tree, label_col) in forest.trees.iter().zip(labels) {
        if tree.n_features != features.len() {
            return Err(TreeError::WidthMismatch {
                expected: tree.n_features,
                got: features.len(),
            });
        }
        for (row, &truth) in label_col.iter().enumerate() {
            if tree.predict(features, row) != truth {
                errors += 1;
            }
        }
    }
    Ok(errors)
}
