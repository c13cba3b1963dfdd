//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bmp_core::generate::{random_graph, random_instance, random_scs_input};
use bmp_core::hst::{frt_embed, tree_distance};
use bmp_core::lcs::build_metric;
use bmp_core::model::{
    border_length_masks, border_length_pairwise, grid_symmetries, mask_border_length, masks_of, tokens_of,
    validate_solution, DepositionSchedule, Grid, Placement, Probe, Solution,
};
use bmp_core::oracle::bmp_exact;
use bmp_core::pbmp::pbmp_exact;
use bmp_core::pipeline::{lower_bound, solve_bmp, DEFAULT_TRIALS};
use bmp_core::placement::{edge_crossings, edge_sides, euler_order};
use bmp_core::reductions::{
    build_hampath_instance, check_hampath_certificate, dollar_mask_cost, extract_scs, formula_value, hampath_bound,
    lift_1d_to_2d, scs_exact_dp, solve_1d_exact, solve_ipq_exact, GraphInput, ScsInput,
};
use bmp_core::rng::rng_from;
use bmp_core::Instance;
use rand::Rng;

const BUDGET: usize = 5_000_000;

type Outcome = Result<String, String>;

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn bits(s: &str) -> Vec<bool> {
    s.chars().map(|c| c == '1').collect()
}

fn err(e: bmp_core::Error) -> String {
    e.to_string()
}

fn figure_one() -> Outcome {
    let grid = Grid::new(2, 2).map_err(err)?;
    let instance = Instance::from_strs(grid, &["AC", "TA", "CT", "CA"]).map_err(err)?;
    let schedule = DepositionSchedule::new(
        tokens_of("CTAC"),
        vec![bits("0011"), bits("0110"), bits("1100"), bits("1010")],
    );
    let placement = Placement::row_major(grid);
    let pairwise = border_length_pairwise(&placement, &schedule, grid).map_err(err)?;
    let masks = border_length_masks(&placement, &schedule, grid).map_err(err)?;
    let per_mask: Vec<u64> = masks_of(&placement, &schedule)
        .map_err(err)?
        .iter()
        .map(|m| mask_border_length(m, grid))
        .collect();
    let solution = Solution::new(placement, schedule, grid).map_err(err)?;
    check(validate_solution(&instance, &solution).is_ok(), "solution does not validate")?;
    check(pairwise == 10 && masks == 10, format!("pairwise={pairwise} masks={masks}, expected 10"))?;
    check(per_mask == [2, 4, 2, 2], format!("per-mask {per_mask:?}, expected [2, 4, 2, 2]"))?;
    Ok(format!("pairwise={pairwise} masks={masks} per_mask={per_mask:?}"))
}

fn table_strings() -> Result<ScsInput, String> {
    ScsInput::from_strs(&["010", "100", "00"]).map_err(err)
}

fn table_two() -> Outcome {
    let scs = table_strings()?;
    let sol = solve_ipq_exact(&scs, 3, 3, BUDGET).map_err(err)?;
    let witness: String = sol.witness.iter().map(|t| t.as_str()).collect();
    check(sol.cost == 100, format!("cost {} expected 100", sol.cost))?;
    check(
        sol.cost_with_dollar == 100 + dollar_mask_cost(3) && sol.cost_with_dollar == 128,
        format!("cost with $ {} expected 128", sol.cost_with_dollar),
    )?;
    check(witness.contains("010011"), format!("witness {witness} lacks 010011"))?;
    Ok(format!("cost={} with_dollar={} witness={witness}", sol.cost, sol.cost_with_dollar))
}

fn table_three() -> Outcome {
    let scs = table_strings()?;
    let sol = solve_ipq_exact(&scs, 1, 1, BUDGET).map_err(err)?;
    let formula = formula_value(&scs, 1, 1);
    let extracted = extract_scs(&scs, BUDGET).map_err(err)?;
    let dp = scs_exact_dp(&scs.strings, BUDGET).map_err(err)?;
    let witness: String = extracted.witness.iter().map(|t| t.as_str()).collect();
    let detail = format!(
        "cost={} formula={formula} scs_length={} witness={witness} dp_length={}",
        sol.cost, extracted.length, dp.length
    );
    check(formula == 44, format!("formula {formula} expected 44; {detail}"))?;
    check(sol.cost > formula, format!("cost not above formula; {detail}"))?;
    check(
        extracted.length == 4 && witness == "0100" && dp.length == 4,
        format!("extraction mismatch; {detail}"),
    )?;
    check(sol.cost == 54, format!("cost {} expected 54; {detail}", sol.cost))?;
    Ok(detail)
}

fn scs_equivalence() -> Outcome {
    for seed in 0..100u64 {
        let k = 1 + (seed % 3) as usize;
        let scs = random_scs_input(k, 5, seed).map_err(err)?;
        let got = extract_scs(&scs, BUDGET).map_err(err)?.length;
        let want = scs_exact_dp(&scs.strings, BUDGET).map_err(err)?.length;
        check(got == want, format!("seed {seed}: extract {got} dp {want}"))?;
    }
    Ok("100/100 agree".into())
}

fn has_hamiltonian_path(g: &GraphInput) -> bool {
    fn extend(g: &GraphInput, last: Option<usize>, left: usize, used: &mut [bool]) -> bool {
        if left == 0 {
            return true;
        }
        for v in 1..=g.n {
            if !used[v] && last.is_none_or(|u| g.has_edge(u, v)) {
                used[v] = true;
                if extend(g, Some(v), left - 1, used) {
                    return true;
                }
                used[v] = false;
            }
        }
        false
    }
    extend(g, None, g.n, &mut vec![false; g.n + 1])
}

fn hampath() -> Outcome {
    let g = GraphInput::new(5, vec![(1, 2), (1, 5), (2, 3), (2, 4), (3, 4), (4, 5)]).map_err(err)?;
    let exact = solve_1d_exact(&build_hampath_instance(&g).map_err(err)?, BUDGET, true).map_err(err)?.cost;
    let bound = hampath_bound(&g);
    let a = check_hampath_certificate(&g, &[1, 2, 3, 4, 5]).map_err(err)?.cost;
    let b = check_hampath_certificate(&g, &[1, 2, 3, 5, 4]).map_err(err)?.cost;
    check(exact == 28 && bound == 28, format!("exact {exact} bound {bound}, expected 28"))?;
    check(a == 28 && b == 30, format!("certificates {a}, {b}; expected 28, 30"))?;
    let mut with_path = 0;
    for seed in 0..50u64 {
        let n = 1 + (seed % 6) as usize;
        let g = random_graph(n, 0.5, seed).map_err(err)?;
        let cost = solve_1d_exact(&build_hampath_instance(&g).map_err(err)?, BUDGET, true).map_err(err)?.cost;
        let path = has_hamiltonian_path(&g);
        with_path += usize::from(path);
        check(
            (cost == hampath_bound(&g)) == path,
            format!("seed {seed}: cost {cost} bound {} path {path}", hampath_bound(&g)),
        )?;
    }
    Ok(format!("figure3 exact={exact} certificates={a},{b} random_with_path={with_path}/50"))
}

fn lift() -> Outcome {
    let mut optimal_placements = 0;
    for seed in 0..5u64 {
        let given = random_instance(Grid::new(1, 2).map_err(err)?, &tokens_of("ACG"), 1, 2, seed).map_err(err)?;
        let lifted = lift_1d_to_2d(&given).map_err(err)?;
        let instance = &lifted.instance;
        let grid = instance.grid;
        let opt = bmp_exact(instance, BUDGET).map_err(err)?.cost;
        let syms = grid_symmetries(grid);
        let mut order: Vec<usize> = (0..4).collect();
        let mut top_row_optimal = false;
        loop {
            let placement = Placement::new(order.iter().map(|&c| grid.cell(c)).collect());
            let cost = pbmp_exact(instance, &placement, BUDGET).map_err(err)?.cost;
            check(cost >= opt, format!("seed {seed}: placement {order:?} beats the oracle"))?;
            let on_top = |p: &Placement| p.cell_of[0].0 == 0 && p.cell_of[1].0 == 0;
            if cost == opt {
                optimal_placements += 1;
                top_row_optimal |= on_top(&placement);
                let reaches_top = syms
                    .iter()
                    .any(|s| on_top(&Placement::new(placement.cell_of.iter().map(|&c| s.apply(grid, c)).collect())));
                check(reaches_top, format!("seed {seed}: optimal placement {order:?} separates the given probes"))?;
            }
            let Some(i) = (1..4).rev().find(|&i| order[i - 1] < order[i]) else { break };
            let j = (i..4).rev().find(|&j| order[j] > order[i - 1]).expect("pivot");
            order.swap(i - 1, j);
            order[i..].reverse();
        }
        check(top_row_optimal, format!("seed {seed}: no optimal placement on the top row"))?;
    }
    Ok(format!("5 lifted instances, {optimal_placements} optimal placements, all top row up to symmetry"))
}

fn equivalence() -> Outcome {
    let mut rng = rng_from(7);
    let alphabet = tokens_of("ACG");
    for case in 0..1000 {
        let grid = Grid::new(rng.gen_range(1..=3), rng.gen_range(1..=3)).map_err(err)?;
        let n = grid.size();
        let steps = rng.gen_range(0..=12);
        let deposition: Vec<_> = (0..steps).map(|_| alphabet[rng.gen_range(0..3)].clone()).collect();
        let embed: Vec<Vec<bool>> = (0..n)
            .map(|_| {
                let want = rng.gen_range(0..=4.min(steps));
                let mut row = vec![false; steps];
                let mut placed = 0;
                while placed < want {
                    let t = rng.gen_range(0..steps);
                    if !row[t] {
                        row[t] = true;
                        placed += 1;
                    }
                }
                row
            })
            .collect();
        let schedule = DepositionSchedule::new(deposition, embed);
        let probes = (0..n).map(|id| Probe::new(id, schedule.reconstruct(id))).collect();
        let instance = Instance::new(grid, alphabet.clone(), probes).map_err(err)?;
        let mut cells: Vec<_> = grid.cells().collect();
        for i in (1..n).rev() {
            cells.swap(i, rng.gen_range(0..=i));
        }
        let placement = Placement::new(cells);
        let a = border_length_pairwise(&placement, &schedule, grid).map_err(err)?;
        let b = border_length_masks(&placement, &schedule, grid).map_err(err)?;
        check(a == b, format!("case {case}: pairwise {a} masks {b}"))?;
        let solution = Solution::new(placement, schedule, grid).map_err(err)?;
        check(validate_solution(&instance, &solution).is_ok(), format!("case {case}: invalid"))?;
    }
    Ok("1000/1000 equal".into())
}

fn embedding_properties() -> Outcome {
    for seed in 0..100u64 {
        let n = 2 + (seed % 10) as usize;
        let inst = random_instance(Grid::new(1, n).map_err(err)?, &tokens_of("ACGT"), 0, 6, seed).map_err(err)?;
        let m = build_metric(&inst);
        for i in 0..n {
            check(m.dist(i, i) == 0, format!("seed {seed}: d({i},{i}) != 0"))?;
            for j in 0..n {
                check(m.dist(i, j) == m.dist(j, i), format!("seed {seed}: asymmetric at ({i},{j})"))?;
            }
        }
        check(m.triangle_violation().is_none(), format!("seed {seed}: triangle inequality"))?;
    }
    let inst = random_instance(Grid::new(1, 12).map_err(err)?, &tokens_of("ACGT"), 2, 8, 12).map_err(err)?;
    let m = build_metric(&inst);
    for seed in 0..200u64 {
        let tree = frt_embed(&m, seed).map_err(err)?;
        for i in 0..12 {
            for j in 0..12 {
                let t = tree_distance(&tree, i, j).map_err(err)?;
                check(t >= m.dist(i, j), format!("tree seed {seed}: ({i},{j}) {t} < {}", m.dist(i, j)))?;
            }
        }
    }
    let mut edges_checked = 0;
    for side in [3usize, 4, 5, 6] {
        let n = side * side;
        let grid = Grid::new(side, side).map_err(err)?;
        for seed in 0..25u64 {
            let inst = random_instance(Grid::new(1, n).map_err(err)?, &tokens_of("ACGT"), 1, 6, seed + 100 * side as u64)
                .map_err(err)?;
            let tree = frt_embed(&build_metric(&inst), seed).map_err(err)?;
            let order = euler_order(&tree);
            for e in tree.edges() {
                let (a, b) = edge_sides(&tree, e).map_err(err)?;
                let small = a.min(b) as u64;
                let c = edge_crossings(&tree, &order, grid, e).map_err(err)?;
                let floor_root = (small as f64).sqrt().floor() as u64;
                check(
                    c >= floor_root && c <= 2 + 4 * small && c as f64 <= 2.0 + 2.0 * (n as f64).sqrt(),
                    format!("n={n} seed={seed} edge={e}: crossings {c}, smaller side {small}"),
                )?;
                edges_checked += 1;
            }
        }
    }
    Ok(format!("metrics 100, dominance 200 seeds, {edges_checked} tree edges within crossing bounds"))
}

fn sandwich() -> Outcome {
    let mut worst: f64 = 1.0;
    let mut ratios = Vec::new();
    for seed in 0..30u64 {
        let inst = random_instance(Grid::new(2, 2).map_err(err)?, &tokens_of("01"), 1, 3, seed).map_err(err)?;
        let lb = lower_bound(&inst, None).map_err(err)?;
        let opt = bmp_exact(&inst, BUDGET).map_err(err)?.cost;
        let got = solve_bmp(&inst, seed, DEFAULT_TRIALS).map_err(err)?.cost;
        check(lb <= opt && opt <= got, format!("seed {seed}: lb {lb} opt {opt} pipeline {got}"))?;
        let ratio = match (got, opt) {
            (0, 0) => 1.0,
            (_, 0) => f64::INFINITY,
            _ => got as f64 / opt as f64,
        };
        check(ratio <= 3.0, format!("seed {seed}: ratio {ratio:.3} above 3.0"))?;
        worst = worst.max(ratio);
        ratios.push(format!("{ratio:.2}"));
    }
    Ok(format!("worst ratio {worst:.3}; ratios {}", ratios.join(",")))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_bmp");
    let instance = dir.path().join("instance.txt");
    let generated = Command::new(bin)
        .args(["gen", "random", "--n", "16", "--len", "6", "--seed", "3"])
        .output()
        .map_err(|e| e.to_string())?;
    check(generated.status.success(), "gen random failed")?;
    std::fs::write(&instance, &generated.stdout).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("solution{run}.txt"));
        let status = Command::new(bin)
            .arg("solve")
            .arg(&instance)
            .args(["--seed", "7", "--trials", "16", "--out"])
            .arg(&out)
            .args(["--report", dir.path().join("report.txt").to_str().expect("utf-8 path")])
            .status()
            .map_err(|e| e.to_string())?;
        check(status.success(), format!("solve run {run} failed"))?;
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    check(!outputs[0].is_empty() && outputs[0] == outputs[1], "solution files differ")?;
    Ok(format!("{} identical bytes", outputs[0].len()))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 10] = [
        ("figure 1 border length", figure_one, Duration::from_secs(1)),
        ("table 2 gadget optimum", table_two, Duration::from_secs(5)),
        ("table 3 gadget optimum and extraction", table_three, Duration::from_secs(5)),
        ("supersequence extraction", scs_equivalence, Duration::from_secs(60)),
        ("hamiltonian path gadget", hampath, Duration::from_secs(60)),
        ("one-row to grid lift", lift, Duration::from_secs(30)),
        ("cost accounting equivalence", equivalence, Duration::from_secs(30)),
        ("metric and tree embedding", embedding_properties, Duration::from_secs(120)),
        ("optimality sandwich", sandwich, Duration::from_secs(300)),
        ("determinism", determinism, Duration::from_secs(10)),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *limit => Err(format!("took {elapsed:.2?}, limit {limit:?}; {detail}")),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        failures += usize::from(outcome.is_err());
        println!("criterion {:>2} {status} [{:.2}s / {}s] {name}: {detail}", i + 1, elapsed.as_secs_f64(), limit.as_secs());
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
