//! Hamiltonian path to one-row BMP.
//!
//! Vertex `v` becomes the sorted list of its incident edge tokens `e_i_j`; two
//! dummies `$^{n+1}` and `#^{n+1}` close the row. With the dummies at the ends,
//! a vertex order costs `2(n+1) + 4m - 2·(consecutive pairs joined by an edge)`,
//! so the order reaches `2(n+1) + 4m - 2(n-1)` exactly when it is a
//! Hamiltonian path.

use crate::error::{Error, Result};
use crate::lcs::build_metric;
use crate::model::{DepositionSchedule, Grid, Instance, Placement, Probe, Solution, Token};
use crate::pbmp::pbmp_exact_bounded;
use crate::reductions::GraphInput;

fn edge_token(i: usize, j: usize) -> Token {
    Token::new(format!("e_{i}_{j}")).expect("valid token")
}

fn left_dummy() -> Token {
    Token::new("$").expect("valid token")
}

fn right_dummy() -> Token {
    Token::new("#").expect("valid token")
}

/// Probes `0..n` are vertices `1..=n`; probe `n` is the `$` dummy, `n+1` the `#` dummy.
pub fn build_hampath_instance(g: &GraphInput) -> Result<Instance> {
    let n = g.n;
    let grid = Grid::new(1, n + 2)?;
    let mut probes: Vec<Probe> = (1..=n)
        .map(|v| {
            let seq = g
                .edges
                .iter()
                .filter(|&&(i, j)| i == v || j == v)
                .map(|&(i, j)| edge_token(i, j))
                .collect();
            Probe::new(v - 1, seq)
        })
        .collect();
    probes.push(Probe::new(n, vec![left_dummy(); n + 1]));
    probes.push(Probe::new(n + 1, vec![right_dummy(); n + 1]));
    let mut alphabet = vec![left_dummy()];
    alphabet.extend(g.edges.iter().map(|&(i, j)| edge_token(i, j)));
    alphabet.push(right_dummy());
    Instance::new(grid, alphabet, probes)
}

/// Cost a Hamiltonian path order attains.
pub fn hampath_bound(g: &GraphInput) -> u64 {
    (2 * (g.n + 1) + 4 * g.m()) as u64 - 2 * g.n.saturating_sub(1) as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HampathCertificate {
    pub cost: u64,
    pub bound: u64,
    pub achieves_bound: bool,
    pub solution: Solution,
}

/// Evaluates the one-row solution induced by a vertex order (1-based), where
/// every edge token is shared by the adjacent vertices that both contain it.
pub fn check_hampath_certificate(g: &GraphInput, order: &[usize]) -> Result<HampathCertificate> {
    let n = g.n;
    let mut seen = vec![false; n + 1];
    if order.len() != n || order.iter().any(|&v| v == 0 || v > n || std::mem::replace(&mut seen[v], true)) {
        return Err(Error::InvalidParameter(format!("{order:?} is not a permutation of 1..={n}")));
    }
    let instance = build_hampath_instance(g)?;
    let mut cell_of = vec![(0, 0); n + 2];
    for (slot, &v) in order.iter().enumerate() {
        cell_of[v - 1] = (0, slot + 1);
    }
    cell_of[n] = (0, 0);
    cell_of[n + 1] = (0, n + 1);

    // D = $^{n+1}, edge tokens in global order, #^{n+1}
    let mut deposition = vec![left_dummy(); n + 1];
    deposition.extend(g.edges.iter().map(|&(i, j)| edge_token(i, j)));
    deposition.extend(vec![right_dummy(); n + 1]);
    let m = g.m();
    let embed = (0..n + 2)
        .map(|id| {
            (0..deposition.len())
                .map(|t| {
                    if t <= n {
                        id == n
                    } else if t <= n + m {
                        let (i, j) = g.edges[t - n - 1];
                        id + 1 == i || id + 1 == j
                    } else {
                        id == n + 1
                    }
                })
                .collect()
        })
        .collect();
    let solution = Solution::new(Placement::new(cell_of), DepositionSchedule::new(deposition, embed), instance.grid)?;
    let shared = order.windows(2).filter(|w| g.has_edge(w[0], w[1])).count();
    debug_assert_eq!(solution.cost, (2 * (n + 1) + 4 * m - 2 * shared) as u64);
    let bound = hampath_bound(g);
    Ok(HampathCertificate {
        cost: solution.cost,
        bound,
        achieves_bound: solution.cost == bound,
        solution,
    })
}

/// Pinned end probes for one-row instances: an all-`$` probe and an all-`#` probe.
fn dummy_ends(instance: &Instance) -> Option<(usize, usize)> {
    let all = |id: usize, t: &Token| {
        let s = instance.seq(id);
        !s.is_empty() && s.iter().all(|x| x == t)
    };
    let left = (0..instance.n()).find(|&i| all(i, &left_dummy()))?;
    let right = (0..instance.n()).find(|&i| all(i, &right_dummy()))?;
    Some((left, right))
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = items.to_vec();
    current.sort_unstable();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..current.len()).rev().find(|&j| current[j] > current[i - 1]).expect("pivot");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// Global optimum of a one-row instance over all orders.
///
/// With `pin_dummies`, an all-`$` probe and an all-`#` probe (when both exist)
/// are fixed to the left and right ends. Orders are visited by increasing
/// LCS lower bound and skipped once the bound reaches the best cost found;
/// `budget` applies to each embedding search.
pub fn solve_1d_exact(instance: &Instance, budget: usize, pin_dummies: bool) -> Result<Solution> {
    let grid = instance.grid;
    if grid.rows != 1 {
        return Err(Error::InvalidParameter("one-row grid required".into()));
    }
    let n = instance.n();
    if n > 10 {
        return Err(Error::Infeasible(format!("{n} probes exceed the enumeration limit of 10")));
    }
    let ends = if pin_dummies { dummy_ends(instance) } else { None };
    let free: Vec<usize> = (0..n).filter(|&i| ends.is_none_or(|(l, r)| i != l && i != r)).collect();
    let metric = build_metric(instance);
    let mut orders: Vec<(u64, Vec<usize>)> = permutations(&free)
        .into_iter()
        .filter_map(|middle| {
            let order: Vec<usize> = match ends {
                Some((l, r)) => std::iter::once(l).chain(middle).chain(std::iter::once(r)).collect(),
                None => {
                    // reversal gives the same cost
                    if middle.len() > 1 && middle.first() > middle.last() {
                        return None;
                    }
                    middle
                }
            };
            let lb = order.windows(2).map(|w| metric.dist(w[0], w[1])).sum();
            Some((lb, order))
        })
        .collect();
    orders.sort();
    let mut best: Option<Solution> = None;
    for (lb, order) in orders {
        if best.as_ref().is_some_and(|b| lb >= b.cost) {
            break;
        }
        let mut cell_of = vec![(0, 0); n];
        for (c, &id) in order.iter().enumerate() {
            cell_of[id] = (0, c);
        }
        let ceiling = best.as_ref().map(|b| b.cost - 1);
        if let Some(sol) = pbmp_exact_bounded(instance, &Placement::new(cell_of), budget, ceiling)? {
            best = Some(sol);
        }
    }
    Ok(best.expect("at least one order"))
}
