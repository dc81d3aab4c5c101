//! Iterated transport metrics over a shrinking sequence of partitions.
//!
//! A `PartitionTree` fixes a finite space of leaves with masses, a
//! (semi)metric on them, and nested partitions: every level's classes are
//! unions of the previous level's. `quotient_step` replaces each class by
//! its conditional measure and measures classes against each other with the
//! transport distance under the previous level's metric — so applying it k
//! times evaluates a k-fold nested transport problem. `tower_statistic`
//! summarizes how concentrated the quotient measure is at a level: the
//! mass-weighted mean pairwise distance, zero exactly when the level has
//! metrically collapsed to a point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measures::{CostSpace, FiniteDistribution};
use crate::transport::solve_mk;

/// Leaves with masses, a base (semi)metric, and nested partition levels.
/// `levels[k][leaf]` is the class of `leaf` at level k+1; level 0 is the
/// leaves themselves. Classes must be numbered contiguously from 0, and
/// classes at level k+1 must be unions of level-k classes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct PartitionTree {
    masses: FiniteDistribution,
    base_cost: CostSpace,
    levels: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    leaves: usize,
    masses: Vec<f64>,
    base_cost: Vec<Vec<f64>>,
    levels: Vec<Vec<usize>>,
}

impl TryFrom<TreeJson> for PartitionTree {
    type Error = Error;

    fn try_from(json: TreeJson) -> Result<Self> {
        if json.masses.len() != json.leaves {
            return Err(Error::DimensionMismatch { expected: json.leaves, actual: json.masses.len() });
        }
        let masses = FiniteDistribution::new(json.masses)?;
        let base_cost = CostSpace::from_rows(json.base_cost)?;
        PartitionTree::new(masses, base_cost, json.levels)
    }
}

impl From<PartitionTree> for TreeJson {
    fn from(tree: PartitionTree) -> Self {
        TreeJson {
            leaves: tree.masses.len(),
            masses: tree.masses.weights().to_vec(),
            base_cost: tree.base_cost.costs().to_rows(),
            levels: tree.levels,
        }
    }
}

/// Check that `assignment` uses every id in 0..count for some count, and
/// return that count.
fn contiguous_class_count(assignment: &[usize]) -> Result<usize> {
    let count = match assignment.iter().max() {
        Some(&m) => m + 1,
        None => return Err(Error::EmptySupport),
    };
    let mut seen = vec![false; count];
    for &c in assignment {
        seen[c] = true;
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::domain(format!("class ids are not contiguous: {missing} is unused")));
    }
    Ok(count)
}

impl PartitionTree {
    pub fn new(
        masses: FiniteDistribution,
        base_cost: CostSpace,
        levels: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = masses.len();
        if base_cost.size() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: base_cost.size() });
        }
        if !base_cost.is_metric() {
            return Err(Error::NotMetric { reason: "tower base must satisfy the semimetric axioms".into() });
        }
        for (k, level) in levels.iter().enumerate() {
            if level.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: level.len() });
            }
            contiguous_class_count(level)?;
            if k > 0 {
                // Nested: equal classes below must stay equal above.
                let prev = &levels[k - 1];
                let prev_count = prev.iter().max().map_or(0, |&m| m + 1);
                let mut image = vec![usize::MAX; prev_count];
                for leaf in 0..n {
                    let below = prev[leaf];
                    if image[below] == usize::MAX {
                        image[below] = level[leaf];
                    } else if image[below] != level[leaf] {
                        return Err(Error::domain(format!(
                            "level {} splits class {below} of level {k}",
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(PartitionTree { masses, base_cost, levels })
    }

    pub fn leaves(&self) -> usize {
        self.masses.len()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn masses(&self) -> &FiniteDistribution {
        &self.masses
    }

    pub fn base_cost(&self) -> &CostSpace {
        &self.base_cost
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }
}

/// One level of the tower: quotient points with masses and the iterated
/// transport (semi)metric between them.
#[derive(Debug, Clone, Serialize)]
pub struct LevelMetricSpace {
    pub level: usize,
    pub masses: FiniteDistribution,
    pub metric: CostSpace,
}

impl LevelMetricSpace {
    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }
}

/// Result of one quotient: the new level plus the conditional measures that
/// produced it (`conditionals` row a = the previous-level measure of class
/// a), which is exactly what `barycenter_project` needs to go back down.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientStep {
    pub space: LevelMetricSpace,
    pub conditionals: Matrix,
}

/// Collapse the space along `assignment` (point -> class id): class masses
/// add up, class distances are transport distances between the conditional
/// measures under the current metric.
pub fn quotient_step(space: &LevelMetricSpace, assignment: &[usize]) -> Result<QuotientStep> {
    let n = space.len();
    if assignment.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: assignment.len() });
    }
    if !space.metric.is_metric() {
        return Err(Error::NotMetric { reason: "level metric lost its semimetric certificate".into() });
    }
    let classes = contiguous_class_count(assignment)?;

    let mut class_mass = vec![0.0f64; classes];
    for (point, &class) in assignment.iter().enumerate() {
        class_mass[class] += space.masses.weight(point);
    }
    if let Some(empty) = class_mass.iter().position(|&m| m <= 0.0) {
        return Err(Error::domain(format!(
            "class {empty} carries no mass; conditional measures need positive-mass classes"
        )));
    }

    let mut conditionals = Matrix::zeros(classes, n);
    for (point, &class) in assignment.iter().enumerate() {
        conditionals.set(class, point, space.masses.weight(point) / class_mass[class]);
    }
    let conditional_measures: Vec<FiniteDistribution> = (0..classes)
        .map(|a| FiniteDistribution::new(conditionals.row(a).to_vec()))
        .collect::<Result<_>>()?;

    let mut metric = Matrix::zeros(classes, classes);
    for a in 0..classes {
        for b in a + 1..classes {
            let d = solve_mk(&space.metric, &conditional_measures[a], &conditional_measures[b])?.value;
            metric.set(a, b, d);
            metric.set(b, a, d);
        }
    }
    let space = LevelMetricSpace {
        level: space.level + 1,
        masses: FiniteDistribution::new(class_mass)?,
        metric: CostSpace::new(metric)?,
    };
    Ok(QuotientStep { space, conditionals })
}

/// Mix the conditional measures of a quotient by `weights`: the barycenter
/// of the measure-on-classes, expressed on the previous level. Weighing each
/// class by its own mass reproduces the previous level's measure exactly.
pub fn barycenter_project(
    weights: &FiniteDistribution,
    conditionals: &Matrix,
) -> Result<FiniteDistribution> {
    if weights.len() != conditionals.rows() {
        return Err(Error::DimensionMismatch { expected: conditionals.rows(), actual: weights.len() });
    }
    let n = conditionals.cols();
    let mut out = vec![0.0f64; n];
    for a in 0..weights.len() {
        let w = weights.weight(a);
        if w == 0.0 {
            continue;
        }
        for (j, slot) in out.iter_mut().enumerate() {
            *slot += w * conditionals.get(a, j);
        }
    }
    FiniteDistribution::new(out)
}

/// The tree's base as a level-0 space, with zero-mass leaves dropped (the
/// quotient machinery needs every class to carry mass; a leaf that carries
/// none contributes nothing at any level).
fn base_space(tree: &PartitionTree) -> Result<(LevelMetricSpace, Vec<usize>)> {
    let n = tree.leaves();
    let active: Vec<usize> = (0..n).filter(|&i| tree.masses().weight(i) > 0.0).collect();
    if active.is_empty() {
        return Err(Error::EmptySupport);
    }
    if active.len() < n {
        log::warn!("dropping {} zero-mass leaves before quotienting", n - active.len());
    }
    let masses = FiniteDistribution::new(active.iter().map(|&i| tree.masses().weight(i)).collect())?;
    let metric = Matrix::from_fn(active.len(), active.len(), |i, j| {
        tree.base_cost().cost(active[i], active[j])
    });
    let space = LevelMetricSpace { level: 0, masses, metric: CostSpace::new(metric)? };
    Ok((space, active))
}

/// Walk the tree's partitions up to `upto`, returning every quotient step.
pub fn quotient_steps(tree: &PartitionTree, upto: usize) -> Result<Vec<QuotientStep>> {
    if upto > tree.depth() {
        return Err(Error::domain(format!(
            "level {upto} exceeds the tree depth {}",
            tree.depth()
        )));
    }
    let (mut space, active) = base_space(tree)?;
    // Representative leaf per current point, to read class ids off the tree.
    let mut rep: Vec<usize> = active;
    let mut steps = Vec::with_capacity(upto);
    for level in 0..upto {
        let raw: Vec<usize> = rep.iter().map(|&leaf| tree.levels()[level][leaf]).collect();
        // Compress the surviving ids, keeping their original order.
        let mut sorted: Vec<usize> = raw.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let assignment: Vec<usize> = raw
            .iter()
            .map(|id| sorted.binary_search(id).expect("id came from the same list"))
            .collect();
        let step = quotient_step(&space, &assignment)?;
        let mut new_rep = vec![usize::MAX; step.space.len()];
        for (point, &class) in assignment.iter().enumerate() {
            if new_rep[class] == usize::MAX {
                new_rep[class] = rep[point];
            }
        }
        rep = new_rep;
        space = step.space.clone();
        steps.push(step);
    }
    Ok(steps)
}

/// The tower's space at a given level (level 0 = the pruned base).
pub fn level_space(tree: &PartitionTree, level: usize) -> Result<LevelMetricSpace> {
    if level == 0 {
        return Ok(base_space(tree)?.0);
    }
    Ok(quotient_steps(tree, level)?.pop().expect("at least one step").space)
}

fn mean_pairwise(space: &LevelMetricSpace) -> f64 {
    let n = space.len();
    let mut acc = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            acc += 2.0 * space.masses.weight(a) * space.masses.weight(b) * space.metric.cost(a, b);
        }
    }
    acc
}

/// Mass-weighted mean pairwise distance at a level: how far the quotient
/// measure is from a point mass, in its own metric.
pub fn tower_statistic(tree: &PartitionTree, level: usize) -> Result<f64> {
    Ok(mean_pairwise(&level_space(tree, level)?))
}

/// `(level, tower_statistic)` for every level of the tree, walking the
/// quotients once.
pub fn tower_profile(tree: &PartitionTree) -> Result<Vec<(usize, f64)>> {
    let (space, _) = base_space(tree)?;
    let mut out = vec![(0, mean_pairwise(&space))];
    for step in quotient_steps(tree, tree.depth())? {
        out.push((step.space.level, mean_pairwise(&step.space)));
    }
    Ok(out)
}

/// The standard benchmark tree: `depth` fair coin flips as leaves, uniform
/// masses, word distance = fraction of differing flips, each level merging
/// away the leading flip (classes are suffixes). Under this base metric the
/// level-k distance between suffix classes works out to the word distance of
/// the suffixes, so the statistic shrinks linearly to zero.
pub fn dyadic_iid_tree(depth: usize) -> Result<PartitionTree> {
    if depth == 0 || depth > 12 {
        return Err(Error::domain(format!("depth must be in 1..=12, got {depth}")));
    }
    let leaves = 1usize << depth;
    let masses = FiniteDistribution::new(vec![1.0 / leaves as f64; leaves])?;
    let base = crate::dbar::hamming_cost(depth, 2)?;
    let levels: Vec<Vec<usize>> = (0..depth)
        .map(|k| {
            let keep = depth - k - 1; // suffix bits that still distinguish
            (0..leaves).map(|leaf| leaf & ((1usize << keep) - 1)).collect()
        })
        .collect();
    PartitionTree::new(masses, base, levels)
}
