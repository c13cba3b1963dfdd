use bmp_core::format::{emit_instance, emit_solution, parse_instance, parse_solution};
use bmp_core::lcs::{build_metric, seq_distance};
use bmp_core::model::{
    border_length_masks, border_length_pairwise, border_sym, grid_symmetries, tokens_of, validate_solution,
    DepositionSchedule, Grid, Instance, Placement, Probe, Solution,
};
use proptest::prelude::*;

/// A random valid solution: random deposition sequence and patterns, probes read back from them.
fn solution_strategy() -> impl Strategy<Value = (Instance, Solution)> {
    (1usize..=3, 1usize..=3, 0usize..=4, any::<u64>()).prop_flat_map(|(rows, cols, d_len, seed)| {
        let n = rows * cols;
        (
            proptest::collection::vec(0usize..3, d_len),
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), d_len), n),
            Just(seed),
            Just((rows, cols)),
        )
            .prop_map(move |(d, embed, seed, (rows, cols))| {
                let grid = Grid::new(rows, cols).unwrap();
                let alphabet = tokens_of("ABC");
                let deposition = d.iter().map(|&i| alphabet[i].clone()).collect();
                let schedule = DepositionSchedule::new(deposition, embed);
                let probes = (0..n).map(|id| Probe::new(id, schedule.reconstruct(id))).collect();
                let instance = Instance::new(grid, alphabet, probes).unwrap();
                // Fisher-Yates driven by the seed
                let mut cells: Vec<usize> = (0..n).collect();
                let mut s = seed;
                for i in (1..n).rev() {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    cells.swap(i, (s >> 33) as usize % (i + 1));
                }
                let placement = Placement::new(cells.iter().map(|&c| grid.cell(c)).collect());
                let solution = Solution::new(placement, schedule, grid).unwrap();
                (instance, solution)
            })
    })
}

fn long_solution_strategy() -> impl Strategy<Value = (Instance, Solution)> {
    (1usize..=3, 1usize..=3, 0usize..=12).prop_flat_map(|(rows, cols, d_len)| {
        let n = rows * cols;
        (
            proptest::collection::vec(0usize..3, d_len),
            proptest::collection::vec(proptest::collection::vec(proptest::bool::weighted(0.3), d_len), n),
            Just((rows, cols)),
        )
            .prop_map(move |(d, embed, (rows, cols))| {
                let grid = Grid::new(rows, cols).unwrap();
                let alphabet = tokens_of("ABC");
                let deposition = d.iter().map(|&i| alphabet[i].clone()).collect();
                let schedule = DepositionSchedule::new(deposition, embed);
                let probes = (0..n).map(|id| Probe::new(id, schedule.reconstruct(id))).collect();
                let instance = Instance::new(grid, alphabet, probes).unwrap();
                let solution = Solution::new(Placement::row_major(grid), schedule, grid).unwrap();
                (instance, solution)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pairwise_equals_mask_accounting((instance, solution) in solution_strategy()) {
        let grid = instance.grid;
        let a = border_length_pairwise(&solution.placement, &solution.schedule, grid).unwrap();
        let b = border_length_masks(&solution.placement, &solution.schedule, grid).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(validate_solution(&instance, &solution), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cost_invariant_under_grid_symmetries((instance, solution) in solution_strategy()) {
        let grid = instance.grid;
        for sym in grid_symmetries(grid) {
            let moved = Placement::new(solution.placement.cell_of.iter().map(|&c| sym.apply(grid, c)).collect());
            let target = sym.target(grid);
            prop_assert_eq!(
                border_length_pairwise(&moved, &solution.schedule, target).unwrap(),
                solution.cost
            );
        }
        // transposing a rectangle is also a symmetry of the cost, onto the transposed grid
        let flipped = Placement::new(solution.placement.cell_of.iter().map(|&(r, c)| (c, r)).collect());
        let transposed = Grid::new(grid.cols, grid.rows).unwrap();
        prop_assert_eq!(border_length_pairwise(&flipped, &solution.schedule, transposed).unwrap(), solution.cost);
    }

    #[test]
    fn pattern_distance_dominates_lcs_distance((instance, solution) in long_solution_strategy()) {
        let metric = build_metric(&instance);
        for i in 0..instance.n() {
            for j in 0..instance.n() {
                prop_assert!(border_sym(&solution.schedule, i, j).unwrap() >= metric.dist(i, j));
                prop_assert_eq!(metric.dist(i, j), seq_distance(instance.seq(i), instance.seq(j)));
            }
        }
        let lb: u64 = solution
            .placement
            .adjacent_probe_pairs(instance.grid)
            .unwrap()
            .into_iter()
            .map(|(a, b)| metric.dist(a, b))
            .sum();
        prop_assert!(solution.cost >= lb);
    }

    #[test]
    fn text_formats_round_trip((instance, solution) in solution_strategy()) {
        prop_assert_eq!(parse_instance(&emit_instance(&instance)).unwrap(), instance.clone());
        let back = parse_solution(&emit_solution(&solution)).unwrap().into_solution(instance.grid).unwrap();
        prop_assert_eq!(back, solution);
    }
}

#[test]
fn reconstruction_failure_is_reported() {
    let grid = Grid::new(1, 2).unwrap();
    let instance = Instance::from_strs(grid, &["AC", "CA"]).unwrap();
    let schedule = DepositionSchedule::new(tokens_of("ACA"), vec![vec![true, true, false], vec![true, false, true]]);
    let solution = Solution::new(Placement::row_major(grid), schedule, grid).unwrap();
    let err = validate_solution(&instance, &solution).unwrap_err().to_string();
    assert!(err.starts_with("probe reconstruction mismatch"), "{err}");
}
