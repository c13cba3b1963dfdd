//! Ground-truth BMP solver for tiny grids: every placement up to symmetry and
//! repeated probes, each embedded exactly.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::lcs::build_metric;
use crate::model::{grid_symmetries, Grid, Instance, Placement, Solution, Token};
use crate::pbmp::pbmp_exact_bounded;

/// Largest grid the oracle enumerates.
pub const MAX_CELLS: usize = 9;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("pivot");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// `at[index]` under a symmetry of the grid.
fn transform(grid: Grid, at: &[usize], sym: crate::model::Symmetry) -> Vec<usize> {
    let mut out = vec![0; at.len()];
    for cell in grid.cells() {
        out[grid.index(sym.apply(grid, cell))] = at[grid.index(cell)];
    }
    out
}

/// One placement per orbit of the grid's symmetry group: the arrangement
/// (`cell -> probe` in row-major order) that is lexicographically smallest in its orbit.
pub fn symmetry_classes(grid: Grid) -> Result<Vec<Placement>> {
    if grid.size() > MAX_CELLS {
        return Err(Error::Infeasible(format!("{} cells exceed the limit of {MAX_CELLS}", grid.size())));
    }
    let syms = grid_symmetries(grid);
    Ok(permutations(grid.size())
        .into_iter()
        .filter(|at| syms.iter().all(|&s| transform(grid, at, s) >= *at))
        .map(|at| {
            let mut cell_of = vec![(0, 0); at.len()];
            for (idx, &p) in at.iter().enumerate() {
                cell_of[p] = grid.cell(idx);
            }
            Placement::new(cell_of)
        })
        .collect())
}

/// Optimal solution over all placements; `budget` bounds each embedding search.
///
/// Placements whose sequence layout matches an earlier one up to symmetry are
/// skipped, the rest are visited by increasing LCS lower bound.
pub fn bmp_exact(instance: &Instance, budget: usize) -> Result<Solution> {
    let grid = instance.grid;
    if grid.size() > MAX_CELLS {
        return Err(Error::Infeasible(format!(
            "{} cells exceed the oracle limit of {MAX_CELLS}",
            grid.size()
        )));
    }
    let metric = build_metric(instance);
    let syms = grid_symmetries(grid);
    let mut seen: HashSet<Vec<&[Token]>> = HashSet::new();
    let mut candidates: Vec<(u64, Vec<usize>)> = Vec::new();
    for at in permutations(grid.size()) {
        let canonical = syms
            .iter()
            .map(|&s| transform(grid, &at, s).iter().map(|&p| instance.seq(p)).collect::<Vec<_>>())
            .min()
            .expect("identity symmetry");
        if !seen.insert(canonical) {
            continue;
        }
        let lb = grid
            .adjacent_pairs()
            .into_iter()
            .map(|(a, b)| metric.dist(at[grid.index(a)], at[grid.index(b)]))
            .sum();
        candidates.push((lb, at));
    }
    candidates.sort();
    let mut best: Option<Solution> = None;
    for (lb, at) in candidates {
        if best.as_ref().is_some_and(|b| lb >= b.cost) {
            break;
        }
        let mut cell_of = vec![(0, 0); at.len()];
        for (idx, &p) in at.iter().enumerate() {
            cell_of[p] = grid.cell(idx);
        }
        let ceiling = best.as_ref().map(|b| b.cost - 1);
        if let Some(sol) = pbmp_exact_bounded(instance, &Placement::new(cell_of), budget, ceiling)? {
            best = Some(sol);
        }
    }
    Ok(best.expect("at least one placement"))
}
