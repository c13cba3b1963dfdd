//! Embedding probes for a fixed placement.
//!
//! [`guide_tree_align`] builds a schedule by progressive alignment along a
//! tree, [`reembed_single_probe`] re-optimizes one probe against its fixed
//! neighbours, and [`pbmp_exact`] finds a certified optimum on small inputs.

use crate::error::{Error, Result};
use crate::hst::HstTree;
use crate::model::{border_length_pairwise, DepositionSchedule, Grid, Instance, Placement, Solution, Token};
use crate::search::{intern, solve_layout, LayoutProblem};

pub const DEFAULT_MAX_ROUNDS: usize = 10;

/// Gapped rows of equal width; each column holds a single token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    pub width: usize,
    /// `rows[id][col]` is `None` for a gap.
    pub rows: Vec<Vec<Option<Token>>>,
}

impl Alignment {
    /// Column tokens and per-row deposit patterns. Columns without any token are dropped.
    pub fn to_schedule(&self) -> DepositionSchedule {
        let mut deposition = Vec::new();
        let mut embed = vec![Vec::new(); self.rows.len()];
        for c in 0..self.width {
            let Some(token) = self.rows.iter().find_map(|r| r[c].clone()) else {
                continue;
            };
            deposition.push(token);
            for (row, bits) in self.rows.iter().zip(&mut embed) {
                bits.push(row[c].is_some());
            }
        }
        DepositionSchedule::new(deposition, embed)
    }

    pub fn from_schedule(schedule: &DepositionSchedule) -> Self {
        Alignment {
            width: schedule.len(),
            rows: schedule
                .embed
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(&schedule.deposition)
                        .map(|(&on, t)| on.then(|| t.clone()))
                        .collect()
                })
                .collect(),
        }
    }
}

/// Probe ids on grid-adjacent cells, per probe.
fn neighbours(placement: &Placement, grid: Grid) -> Result<Vec<Vec<usize>>> {
    let at = placement.probe_at(grid)?;
    Ok(placement
        .cell_of
        .iter()
        .map(|&cell| grid.neighbors(cell).map(|nb| at[grid.index(nb)]).collect())
        .collect())
}

/// `(token, depositing probes)` per column of a partial alignment.
type Profile = Vec<(Token, Vec<usize>)>;

/// Indel-only merge. A match of equal-token columns scores `w·big + 1`, where
/// `w` counts adjacent pairs between the two depositing groups, so shared
/// borders dominate and the number of merged columns breaks ties.
fn merge(a: Profile, b: Profile, nbrs: &[Vec<usize>]) -> Profile {
    let (n, m) = (a.len(), b.len());
    let big = (n.min(m) + 1) as u64;
    let mut mark = vec![false; nbrs.len()];
    let mut score = vec![vec![None::<u64>; m]; n];
    for (i, (ta, da)) in a.iter().enumerate() {
        if !b.iter().any(|(tb, _)| tb == ta) {
            continue;
        }
        for &x in da {
            for &y in &nbrs[x] {
                mark[y] = true;
            }
        }
        for (j, (tb, db)) in b.iter().enumerate() {
            if ta == tb {
                let w = db.iter().filter(|&&y| mark[y]).count() as u64;
                score[i][j] = Some(w * big + 1);
            }
        }
        for &x in da {
            for &y in &nbrs[x] {
                mark[y] = false;
            }
        }
    }
    let mut best = vec![vec![0u64; m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            if i == n && j == m {
                continue;
            }
            let mut v = 0;
            if i < n {
                v = v.max(best[i + 1][j]);
            }
            if j < m {
                v = v.max(best[i][j + 1]);
            }
            if i < n && j < m {
                if let Some(s) = score[i][j] {
                    v = v.max(s + best[i + 1][j + 1]);
                }
            }
            best[i][j] = v;
        }
    }
    let mut out = Vec::with_capacity(n + m);
    let mut a = a.into_iter().peekable();
    let mut b = b.into_iter().peekable();
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        let matched = i < n && j < m && score[i][j].is_some_and(|s| s + best[i + 1][j + 1] == best[i][j]);
        if matched {
            let (t, mut da) = a.next().expect("column");
            da.extend(b.next().expect("column").1);
            out.push((t, da));
            i += 1;
            j += 1;
            continue;
        }
        let take_a = i < n && best[i + 1][j] == best[i][j];
        let take_b = j < m && best[i][j + 1] == best[i][j];
        // on a tie the smaller token goes first
        let from_a = match (take_a, take_b) {
            (true, true) => a.peek().map(|c| &c.0) <= b.peek().map(|c| &c.0),
            (a_ok, _) => a_ok,
        };
        if from_a {
            out.push(a.next().expect("column"));
            i += 1;
        } else {
            out.push(b.next().expect("column"));
            j += 1;
        }
    }
    out
}

/// Progressive alignment merged bottom-up along `tree`, children folded in label order.
pub fn guide_tree_align(instance: &Instance, placement: &Placement, tree: &HstTree) -> Result<DepositionSchedule> {
    let n = instance.n();
    if tree.leaf_count() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: tree.leaf_count(),
        });
    }
    if placement.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: placement.len(),
        });
    }
    let nbrs = neighbours(placement, instance.grid)?;

    // post-order without recursion
    let mut order = Vec::with_capacity(tree.nodes.len());
    let mut stack = vec![tree.root];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(&tree.nodes[v].children);
    }
    let mut profiles: Vec<Option<Profile>> = vec![None; tree.nodes.len()];
    for &v in order.iter().rev() {
        let node = &tree.nodes[v];
        let mut acc: Profile = match node.leaf {
            Some(id) => instance.seq(id).iter().map(|t| (t.clone(), vec![id])).collect(),
            None => Vec::new(),
        };
        for &c in &node.children {
            let child = profiles[c].take().expect("child profile built first");
            acc = merge(acc, child, &nbrs);
        }
        profiles[v] = Some(acc);
    }
    let columns = profiles[tree.root].take().expect("root profile");
    let mut embed = vec![vec![false; columns.len()]; n];
    for (t, (_, deps)) in columns.iter().enumerate() {
        for &id in deps {
            embed[id][t] = true;
        }
    }
    Ok(DepositionSchedule::new(columns.into_iter().map(|(t, _)| t).collect(), embed))
}

/// Re-optimizes probe `id`'s pattern with its neighbours fixed, by a DP over
/// (step, consumed prefix). The pattern changes only on strict improvement.
pub fn reembed_single_probe(
    schedule: &DepositionSchedule,
    placement: &Placement,
    grid: Grid,
    id: usize,
) -> Result<DepositionSchedule> {
    let pattern = schedule.embed.get(id).ok_or(Error::UnknownProbe(id))?;
    let seq = schedule.reconstruct(id);
    let nbrs = neighbours(placement, grid)?;
    let steps = schedule.len();
    let degree = nbrs[id].len() as u64;
    let on: Vec<u64> = (0..steps)
        .map(|t| nbrs[id].iter().filter(|&&j| schedule.embed[j][t]).count() as u64)
        .collect();
    let current: u64 = (0..steps)
        .map(|t| if pattern[t] { degree - on[t] } else { on[t] })
        .sum();

    // best[t][k]: cheapest way to spell seq[k..] within steps t..
    let l = seq.len();
    const INF: u64 = u64::MAX / 2;
    let mut best = vec![vec![INF; l + 1]; steps + 1];
    best[steps][l] = 0;
    for t in (0..steps).rev() {
        for k in 0..=l {
            let idle = best[t + 1][k].saturating_add(on[t]);
            let dep = if k < l && seq[k] == schedule.deposition[t] {
                best[t + 1][k + 1].saturating_add(degree - on[t])
            } else {
                INF
            };
            best[t][k] = idle.min(dep);
        }
    }
    if best[0][0] >= INF {
        return Err(Error::InvalidParameter(format!("probe {id} is not a subsequence of the deposition sequence")));
    }
    if best[0][0] >= current {
        return Ok(schedule.clone());
    }
    let mut fresh = Vec::with_capacity(steps);
    let mut k = 0;
    for t in 0..steps {
        let dep_ok = k < l
            && seq[k] == schedule.deposition[t]
            && best[t + 1][k + 1].saturating_add(degree - on[t]) == best[t][k];
        // deposit as early as possible among equal-cost choices
        fresh.push(dep_ok);
        if dep_ok {
            k += 1;
        }
    }
    let mut out = schedule.clone();
    out.embed[id] = fresh;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub schedule: DepositionSchedule,
    pub rounds: usize,
    /// Number of single-probe replacements that lowered the cost.
    pub improvements: usize,
}

/// Round-robin [`reembed_single_probe`] in ascending id until a sweep changes
/// nothing or `max_rounds` sweeps ran; unused steps are dropped at the end.
pub fn refine_until_stable(
    schedule: &DepositionSchedule,
    placement: &Placement,
    grid: Grid,
    max_rounds: usize,
) -> Result<Refinement> {
    let mut current = schedule.clone();
    let mut improvements = 0;
    let mut rounds = 0;
    while rounds < max_rounds {
        rounds += 1;
        let mut changed = false;
        for id in 0..current.probe_count() {
            let next = reembed_single_probe(&current, placement, grid, id)?;
            if next.embed[id] != current.embed[id] {
                improvements += 1;
                changed = true;
                current = next;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Refinement {
        schedule: current.drop_unused_steps(),
        rounds,
        improvements,
    })
}

/// The weighted layout of a placed instance: unit weight per adjacent probe pair.
pub fn layout_problem(instance: &Instance, placement: &Placement) -> Result<(Vec<Token>, LayoutProblem)> {
    let edges = placement
        .adjacent_probe_pairs(instance.grid)?
        .into_iter()
        .map(|(a, b)| (a, b, 1))
        .collect();
    let (tokens, seqs) = intern(instance.probes.iter().map(|p| p.seq.as_slice()));
    Ok((tokens, LayoutProblem { seqs, edges }))
}

/// Optimal embedding for a fixed placement, with the lexicographically smallest
/// deposition sequence among optima. `Ok(None)` when the optimum exceeds `ceiling`.
pub fn pbmp_exact_bounded(
    instance: &Instance,
    placement: &Placement,
    budget: usize,
    ceiling: Option<u64>,
) -> Result<Option<Solution>> {
    let (tokens, problem) = layout_problem(instance, placement)?;
    let Some(out) = solve_layout(&problem, budget, ceiling)? else {
        return Ok(None);
    };
    let schedule = out.schedule(&tokens, instance.n());
    let solution = Solution::new(placement.clone(), schedule, instance.grid)?;
    debug_assert_eq!(solution.cost, out.cost);
    Ok(Some(solution))
}

/// Optimal embedding for a fixed placement; [`Error::Infeasible`] past `budget` expansions.
pub fn pbmp_exact(instance: &Instance, placement: &Placement, budget: usize) -> Result<Solution> {
    Ok(pbmp_exact_bounded(instance, placement, budget, None)?.expect("no ceiling means a solution"))
}

/// Cost of a schedule under a placement.
pub fn schedule_cost(schedule: &DepositionSchedule, placement: &Placement, grid: Grid) -> Result<u64> {
    border_length_pairwise(placement, schedule, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hst::frt_embed;
    use crate::lcs::build_metric;
    use crate::model::tests::{bits, figure_one};
    use crate::model::{tokens_of, validate_solution};

    fn line_tree(n: usize) -> HstTree {
        let mut parents = vec![None];
        parents.extend((0..n).map(|_| Some(0)));
        HstTree::from_parents(&parents, &vec![1; n + 1], &(1..=n).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identical_probes_cost_nothing() {
        let inst = Instance::from_strs(Grid::new(2, 2).unwrap(), &["ACG"; 4]).unwrap();
        let placement = Placement::row_major(inst.grid);
        let s = guide_tree_align(&inst, &placement, &line_tree(4)).unwrap();
        assert_eq!(s.deposition, tokens_of("ACG"));
        assert_eq!(schedule_cost(&s, &placement, inst.grid).unwrap(), 0);
    }

    #[test]
    fn swapped_pair_alignment() {
        let inst = Instance::from_strs(Grid::new(1, 2).unwrap(), &["AC", "CA"]).unwrap();
        let placement = Placement::row_major(inst.grid);
        let s = guide_tree_align(&inst, &placement, &line_tree(2)).unwrap();
        assert!(s.deposition == tokens_of("ACA") || s.deposition == tokens_of("CAC"));
        assert_eq!(schedule_cost(&s, &placement, inst.grid).unwrap(), 2);
    }

    #[test]
    fn figure_one_alignment_bounds() {
        let (inst, sol) = figure_one();
        let metric = build_metric(&inst);
        for seed in 0..10 {
            let tree = frt_embed(&metric, seed).unwrap();
            let s = guide_tree_align(&inst, &sol.placement, &tree).unwrap();
            let full = Solution::new(sol.placement.clone(), s, inst.grid).unwrap();
            validate_solution(&inst, &full).unwrap();
            assert!((10..=12).contains(&full.cost), "seed {seed}: {}", full.cost);
        }
    }

    #[test]
    fn alignment_round_trip() {
        let (_, sol) = figure_one();
        let a = Alignment::from_schedule(&sol.schedule);
        assert_eq!(a.to_schedule(), sol.schedule);
    }

    #[test]
    fn reembed_is_idempotent_on_optimum() {
        let (_, sol) = figure_one();
        let grid = Grid::new(2, 2).unwrap();
        for id in 0..4 {
            let s = reembed_single_probe(&sol.schedule, &sol.placement, grid, id).unwrap();
            assert!(schedule_cost(&s, &sol.placement, grid).unwrap() <= 10);
        }
        let r = refine_until_stable(&sol.schedule, &sol.placement, grid, 10).unwrap();
        assert_eq!(r.improvements, 0);
        assert_eq!(r.schedule, sol.schedule);
    }

    #[test]
    fn line_pair_reaches_distance() {
        let inst = Instance::from_strs(Grid::new(1, 2).unwrap(), &["AC", "CA"]).unwrap();
        let placement = Placement::row_major(inst.grid);
        // deliberately wasteful start: no shared steps at all
        let start = DepositionSchedule::new(tokens_of("ACCA"), vec![bits("1100"), bits("0011")]);
        assert_eq!(schedule_cost(&start, &placement, inst.grid).unwrap(), 4);
        let r = refine_until_stable(&start, &placement, inst.grid, 10).unwrap();
        assert_eq!(schedule_cost(&r.schedule, &placement, inst.grid).unwrap(), 2);
    }

    #[test]
    fn exact_small_cases() {
        let inst = Instance::from_strs(Grid::new(1, 1).unwrap(), &["CGT"]).unwrap();
        let sol = pbmp_exact(&inst, &Placement::row_major(inst.grid), 100).unwrap();
        assert_eq!((sol.cost, sol.schedule.deposition.clone()), (0, tokens_of("CGT")));

        let inst = Instance::from_strs(Grid::new(1, 2).unwrap(), &["AC", "CA"]).unwrap();
        assert_eq!(pbmp_exact(&inst, &Placement::row_major(inst.grid), 100).unwrap().cost, 2);

        let (inst, fig) = figure_one();
        let sol = pbmp_exact(&inst, &fig.placement, 100_000).unwrap();
        assert_eq!(sol.cost, 10);
        validate_solution(&inst, &sol).unwrap();
    }

    #[test]
    fn exact_reports_budget() {
        let (inst, fig) = figure_one();
        assert!(matches!(pbmp_exact(&inst, &fig.placement, 2), Err(Error::Infeasible(_))));
    }
}
