//! Tree-guided placement: linearize the tree by an Euler tour, lay the order
//! out row-major, and measure the resulting adjacency cost.

use crate::error::{Error, Result};
use crate::hst::HstTree;
use crate::lcs::MetricSpace;
use crate::model::{Grid, Placement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacementOrder {
    /// `pi[k]` is the probe in the `k`-th slot.
    pub pi: Vec<usize>,
    /// Seed of the tree the order came from, if any.
    pub seed: Option<u64>,
    /// [`HstTree::digest`] of that tree.
    pub tree_digest: Option<u64>,
}

impl PlacementOrder {
    /// Fails unless `pi` is a permutation of `0..pi.len()`.
    pub fn new(pi: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; pi.len()];
        for &p in &pi {
            if p >= pi.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter(format!("order is not a permutation: {pi:?}")));
            }
        }
        Ok(PlacementOrder {
            pi,
            seed: None,
            tree_digest: None,
        })
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }
}

/// Leaves in first-visit order of a depth-first tour, children by ascending label.
pub fn euler_order(tree: &HstTree) -> PlacementOrder {
    PlacementOrder {
        pi: tree.leaves_under(tree.root),
        seed: None,
        tree_digest: Some(tree.digest()),
    }
}

fn check_size(order: &PlacementOrder, grid: Grid) -> Result<()> {
    if order.len() != grid.size() {
        return Err(Error::SizeMismatch {
            expected: grid.size(),
            got: order.len(),
        });
    }
    Ok(())
}

/// Slot `k` goes to row `k / cols`, column `k % cols`.
pub fn order_to_placement(order: &PlacementOrder, grid: Grid) -> Result<Placement> {
    check_size(order, grid)?;
    let mut cell_of = vec![(0, 0); order.len()];
    for (k, &p) in order.pi.iter().enumerate() {
        cell_of[p] = grid.cell(k);
    }
    Ok(Placement::new(cell_of))
}

/// Boustrophedon variant: odd rows run right to left. Experimental.
pub fn order_to_placement_serpentine(order: &PlacementOrder, grid: Grid) -> Result<Placement> {
    let mut placement = order_to_placement(order, grid)?;
    for cell in &mut placement.cell_of {
        if cell.0 % 2 == 1 {
            cell.1 = grid.cols - 1 - cell.1;
        }
    }
    Ok(placement)
}

/// Sum of metric distances over unordered grid-adjacent pairs of the row-major layout.
pub fn placement_cost(order: &PlacementOrder, grid: Grid, metric: &MetricSpace) -> Result<u64> {
    check_size(order, grid)?;
    if metric.n() != order.len() {
        return Err(Error::SizeMismatch {
            expected: order.len(),
            got: metric.n(),
        });
    }
    Ok(grid
        .adjacent_pairs()
        .into_iter()
        .map(|(a, b)| metric.dist(order.pi[grid.index(a)], order.pi[grid.index(b)]))
        .sum())
}

/// Grid-adjacent pairs whose tree path uses `edge`, i.e. pairs split by removing it.
///
/// `edge` is named by its lower endpoint.
pub fn edge_crossings(tree: &HstTree, order: &PlacementOrder, grid: Grid, edge: usize) -> Result<u64> {
    check_size(order, grid)?;
    if edge >= tree.nodes.len() || edge == tree.root {
        return Err(Error::UnknownEdge(edge));
    }
    let mut below = vec![false; order.len()];
    for id in tree.leaves_under(edge) {
        below[id] = true;
    }
    Ok(grid
        .adjacent_pairs()
        .into_iter()
        .filter(|&(a, b)| below[order.pi[grid.index(a)]] != below[order.pi[grid.index(b)]])
        .count() as u64)
}

/// Leaves on each side of `edge`: `(below, rest)`.
pub fn edge_sides(tree: &HstTree, edge: usize) -> Result<(usize, usize)> {
    if edge >= tree.nodes.len() || edge == tree.root {
        return Err(Error::UnknownEdge(edge));
    }
    let below = tree.leaves_under(edge).len();
    Ok((below, tree.leaf_count() - below))
}
