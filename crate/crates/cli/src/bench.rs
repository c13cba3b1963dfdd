//! Fixed benchmark matrix printed as a whitespace-separated table.

use std::fmt::Write;
use std::time::Instant;

use bmp_core::generate::{random_graph, random_instance, random_scs_input};
use bmp_core::model::{border_length_masks, border_length_pairwise, tokens_of, DepositionSchedule, Grid, Instance, Placement};
use bmp_core::oracle::bmp_exact;
use bmp_core::pipeline::{lower_bound, solve_bmp};
use bmp_core::reductions::{
    build_hampath_instance, check_hampath_certificate, extract_scs, hampath_bound, scs_exact_dp, solve_1d_exact,
    solve_ipq_exact, GraphInput, ScsInput,
};
use bmp_core::rng::derive_seed;
use bmp_core::Result;

const BUDGET: usize = 2_000_000;

struct Table {
    out: String,
}

impl Table {
    fn row(&mut self, name: &str, value: impl ToString, reference: impl ToString, started: Instant) {
        let _ = writeln!(
            self.out,
            "{:<28} {:>12} {:>12} {:>10.3}",
            name,
            value.to_string(),
            reference.to_string(),
            started.elapsed().as_secs_f64()
        );
    }
}

fn figure_one() -> Result<u64> {
    let grid = Grid::new(2, 2)?;
    let bits = |s: &str| s.chars().map(|c| c == '1').collect::<Vec<_>>();
    let schedule = DepositionSchedule::new(
        tokens_of("CTAC"),
        vec![bits("0011"), bits("0110"), bits("1100"), bits("1010")],
    );
    let placement = Placement::row_major(grid);
    let a = border_length_pairwise(&placement, &schedule, grid)?;
    let b = border_length_masks(&placement, &schedule, grid)?;
    Ok(if a == b { a } else { u64::MAX })
}

pub fn run(seed: u64, trials: usize) -> Result<String> {
    let mut t = Table { out: String::new() };
    let _ = writeln!(t.out, "{:<28} {:>12} {:>12} {:>10}", "case", "value", "reference", "seconds");

    let start = Instant::now();
    t.row("figure1_border_length", figure_one()?, 10, start);

    let table = ScsInput::from_strs(&["010", "100", "00"])?;
    let start = Instant::now();
    t.row("ipq_p3_q3", solve_ipq_exact(&table, 3, 3, BUDGET)?.cost, 100, start);
    let start = Instant::now();
    t.row("ipq_p1_q1", solve_ipq_exact(&table, 1, 1, BUDGET)?.cost, ">44", start);
    let start = Instant::now();
    t.row("scs_extract_table", extract_scs(&table, BUDGET)?.length, 4, start);

    let start = Instant::now();
    let mut agree = 0;
    for i in 0..100 {
        let s = derive_seed(seed, i);
        let k = 1 + (s % 3) as usize;
        let input = random_scs_input(k, 5, s)?;
        if extract_scs(&input, BUDGET)?.length == scs_exact_dp(&input.strings, BUDGET)?.length {
            agree += 1;
        }
    }
    t.row("scs_random_agreement", format!("{agree}/100"), "100/100", start);

    let fig3 = GraphInput::new(5, vec![(1, 2), (1, 5), (2, 3), (2, 4), (3, 4), (4, 5)])?;
    let start = Instant::now();
    t.row(
        "hampath_figure3_exact",
        solve_1d_exact(&build_hampath_instance(&fig3)?, BUDGET, true)?.cost,
        28,
        start,
    );
    let start = Instant::now();
    t.row("hampath_order_12345", check_hampath_certificate(&fig3, &[1, 2, 3, 4, 5])?.cost, 28, start);
    t.row("hampath_order_12354", check_hampath_certificate(&fig3, &[1, 2, 3, 5, 4])?.cost, 30, start);

    let start = Instant::now();
    let mut hits = 0;
    for i in 0..20 {
        let s = derive_seed(seed ^ 0x4a, i);
        let g = random_graph(2 + (s % 4) as usize, 0.5, s)?;
        let sol = solve_1d_exact(&build_hampath_instance(&g)?, BUDGET, true)?;
        if sol.cost == hampath_bound(&g) {
            hits += 1;
        }
    }
    t.row("hampath_random_bound_hits", format!("{hits}/20"), "-", start);

    for side in [3usize, 4] {
        let start = Instant::now();
        let grid = Grid::new(side, side)?;
        let inst = random_instance(grid, &tokens_of("ACGT"), 4, 4, derive_seed(seed, 1000 + side as u64))?;
        let sol = solve_bmp(&inst, seed, trials)?;
        let lb = lower_bound(&inst, Some(&sol.placement))?;
        t.row(&format!("pipeline_{side}x{side}_cost"), sol.cost, format!("lb {lb}"), start);
    }

    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let inst: Instance = random_instance(Grid::new(2, 2)?, &tokens_of("01"), 1, 3, derive_seed(seed, 2000 + i))?;
        let opt = bmp_exact(&inst, BUDGET)?.cost;
        let got = solve_bmp(&inst, seed, trials)?.cost;
        let ratio = if opt == 0 { if got == 0 { 1.0 } else { f64::INFINITY } } else { got as f64 / opt as f64 };
        worst = worst.max(ratio);
    }
    t.row("tiny_worst_ratio", format!("{worst:.3}"), "<=3", start);
    Ok(t.out)
}
