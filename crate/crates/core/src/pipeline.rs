//! End-to-end solver: metric, tree, Euler placement, guide-tree embedding and
//! refinement, repeated over independent seeded trials.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hst::{frt_embed, HstTree};
use crate::lcs::{build_metric, MetricSpace};
use crate::model::{Instance, Placement, Solution};
use crate::pbmp::{guide_tree_align, refine_until_stable, DEFAULT_MAX_ROUNDS};
use crate::placement::{edge_crossings, edge_sides, euler_order, order_to_placement, placement_cost, PlacementOrder};
use crate::rng::derive_seed;

pub const DEFAULT_TRIALS: usize = 16;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub seed: u64,
    pub trials: usize,
    /// Reuse the placement tree as the alignment guide instead of sampling a second one.
    pub shared_tree: bool,
    pub max_rounds: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            shared_tree: false,
            max_rounds: DEFAULT_MAX_ROUNDS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub cost: u64,
    /// Metric cost of the trial's placement, a lower bound on `cost`.
    pub placement_cost: u64,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub solution: Solution,
    pub best_trial: usize,
    pub trials: Vec<TrialRecord>,
    /// Placement tree and order of the best trial.
    pub tree: HstTree,
    pub order: PlacementOrder,
}

struct Trial {
    record: TrialRecord,
    solution: Solution,
    tree: HstTree,
    order: PlacementOrder,
}

fn run_trial(instance: &Instance, metric: &MetricSpace, config: &PipelineConfig, index: usize) -> Result<Trial> {
    let seed = derive_seed(config.seed, index as u64);
    let tree = frt_embed(metric, derive_seed(seed, 0))?;
    let mut order = euler_order(&tree);
    order.seed = Some(seed);
    let placement = order_to_placement(&order, instance.grid)?;
    let guide = if config.shared_tree {
        tree.clone()
    } else {
        frt_embed(metric, derive_seed(seed, 1))?
    };
    let aligned = guide_tree_align(instance, &placement, &guide)?;
    let refined = refine_until_stable(&aligned, &placement, instance.grid, config.max_rounds)?;
    let solution = Solution::new(placement, refined.schedule, instance.grid)?;
    Ok(Trial {
        record: TrialRecord {
            index,
            seed,
            cost: solution.cost,
            placement_cost: placement_cost(&order, instance.grid, metric)?,
        },
        solution,
        tree,
        order,
    })
}

/// Runs every trial concurrently and keeps the best by (cost, deposition sequence, trial index).
pub fn solve_bmp_detailed(instance: &Instance, config: &PipelineConfig) -> Result<PipelineRun> {
    if config.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    instance.check()?;
    let metric = build_metric(instance);
    let trials: Vec<Trial> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(instance, &metric, config, t))
        .collect::<Result<_>>()?;
    let records = trials.iter().map(|t| t.record.clone()).collect();
    let best = trials
        .into_iter()
        .min_by(|a, b| {
            (a.solution.cost, &a.solution.schedule.deposition, a.record.index).cmp(&(
                b.solution.cost,
                &b.solution.schedule.deposition,
                b.record.index,
            ))
        })
        .expect("at least one trial");
    Ok(PipelineRun {
        best_trial: best.record.index,
        solution: best.solution,
        trials: records,
        tree: best.tree,
        order: best.order,
    })
}

pub fn solve_bmp(instance: &Instance, seed: u64, trials: usize) -> Result<Solution> {
    let config = PipelineConfig {
        seed,
        trials,
        ..PipelineConfig::default()
    };
    Ok(solve_bmp_detailed(instance, &config)?.solution)
}

/// Certified lower bound on any solution's cost.
///
/// With a placement this is the summed LCS distance over adjacent pairs. Without
/// one, each probe is charged its cheapest distances for a cell degree chosen by
/// a relaxation that only keeps the grid's degree range and degree total.
pub fn lower_bound(instance: &Instance, placement: Option<&Placement>) -> Result<u64> {
    let metric = build_metric(instance);
    if let Some(p) = placement {
        return Ok(p
            .adjacent_probe_pairs(instance.grid)?
            .into_iter()
            .map(|(a, b)| metric.dist(a, b))
            .sum());
    }
    let grid = instance.grid;
    let n = instance.n();
    if n <= 1 {
        return Ok(0);
    }
    let degrees: Vec<usize> = grid.cells().map(|c| grid.degree(c)).collect();
    let lo = *degrees.iter().min().expect("non-empty grid");
    let hi = *degrees.iter().max().expect("non-empty grid");
    let total: usize = degrees.iter().sum();
    let sorted: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row: Vec<u64> = (0..n).filter(|&j| j != i).map(|j| metric.dist(i, j)).collect();
            row.sort_unstable();
            row
        })
        .collect();
    let mut sum: u64 = sorted.iter().map(|r| r[..lo].iter().sum::<u64>()).sum();
    // marginal costs are non-decreasing per probe, so greedy picks are optimal
    let mut extra: Vec<u64> = sorted.iter().flat_map(|r| r[lo..hi].iter().copied()).collect();
    extra.sort_unstable();
    sum += extra.iter().take(total - lo * n).sum::<u64>();
    Ok(sum.div_ceil(2))
}

/// Flat `key=value` report.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub entries: Vec<(String, String)>,
}

impl Report {
    fn put(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_text(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

fn ratio(cost: u64, bound: u64) -> String {
    match (cost, bound) {
        (0, 0) => "1.0000".into(),
        (_, 0) => "inf".into(),
        _ => format!("{:.4}", cost as f64 / bound as f64),
    }
}

/// Cost, bounds and ratios for `solution`; trial and crossing statistics when
/// a pipeline run is given, and the ratio to a known optimum when `optimum` is.
pub fn ratio_report(instance: &Instance, solution: &Solution, run: Option<&PipelineRun>, optimum: Option<u64>) -> Result<Report> {
    let mut r = Report::default();
    let lb_placed = lower_bound(instance, Some(&solution.placement))?;
    let lb_free = lower_bound(instance, None)?;
    r.put("n", instance.n());
    r.put("grid", format!("{}x{}", instance.grid.rows, instance.grid.cols));
    r.put("cost", solution.cost);
    r.put("steps", solution.schedule.len());
    r.put("lower_bound_placement", lb_placed);
    r.put("lower_bound_free", lb_free);
    r.put("ratio_lower_bound", ratio(solution.cost, lb_placed));
    r.put("ratio_lower_bound_free", ratio(solution.cost, lb_free));
    if let Some(opt) = optimum {
        r.put("optimum", opt);
        r.put("ratio_optimum", ratio(solution.cost, opt));
    }
    if let Some(run) = run {
        let costs: Vec<u64> = run.trials.iter().map(|t| t.cost).collect();
        r.put("trials", costs.len());
        r.put("best_trial", run.best_trial);
        r.put("trial_seed", run.trials[run.best_trial].seed);
        r.put("trial_cost_min", costs.iter().min().expect("trials"));
        r.put("trial_cost_max", costs.iter().max().expect("trials"));
        r.put(
            "trial_cost_mean",
            format!("{:.4}", costs.iter().sum::<u64>() as f64 / costs.len() as f64),
        );
        r.put("placement_cost", run.trials[run.best_trial].placement_cost);
        let grid = instance.grid;
        let mut crossings = Vec::new();
        let mut over_lower = 0;
        for e in run.tree.edges() {
            let c = edge_crossings(&run.tree, &run.order, grid, e)?;
            let (a, b) = edge_sides(&run.tree, e)?;
            if c < (a.min(b) as f64).sqrt().floor() as u64 {
                over_lower += 1;
            }
            crossings.push((c, a.min(b)));
        }
        r.put("tree_edges", crossings.len());
        if !crossings.is_empty() {
            r.put("crossings_max", crossings.iter().map(|c| c.0).max().expect("edges"));
            r.put(
                "crossings_mean",
                format!(
                    "{:.4}",
                    crossings.iter().map(|c| c.0).sum::<u64>() as f64 / crossings.len() as f64
                ),
            );
            let worst = crossings
                .iter()
                .map(|&(c, side)| c as f64 / (2.0 + 4.0 * side as f64))
                .fold(0.0, f64::max);
            r.put("crossings_max_relative", format!("{worst:.4}"));
        }
        r.put("crossings_below_cut_bound", over_lower);
    }
    Ok(r)
}
