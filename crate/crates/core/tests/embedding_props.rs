use bmp_core::generate::random_instance;
use bmp_core::hst::{frt_embed, tree_distance};
use bmp_core::lcs::build_metric;
use bmp_core::model::{tokens_of, Grid};
use bmp_core::placement::{edge_crossings, edge_sides, euler_order, PlacementOrder};
use bmp_core::rng::rng_from;
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn metric_for(n: usize, max_len: usize, seed: u64) -> bmp_core::lcs::MetricSpace {
    let inst = random_instance(Grid::new(1, n).unwrap(), &tokens_of("ACG"), 0, max_len, seed).unwrap();
    build_metric(&inst)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn metric_axioms(n in 1usize..=10, seed in any::<u64>()) {
        let m = metric_for(n, 6, seed);
        for i in 0..n {
            prop_assert_eq!(m.dist(i, i), 0);
            for j in 0..n {
                prop_assert_eq!(m.dist(i, j), m.dist(j, i));
            }
        }
        prop_assert_eq!(m.triangle_violation(), None);
    }

    #[test]
    fn embedding_is_deterministic_and_dominating(n in 1usize..=14, seed in any::<u64>(), tree_seed in any::<u64>()) {
        let m = metric_for(n, 5, seed);
        let tree = frt_embed(&m, tree_seed).unwrap();
        prop_assert_eq!(&tree, &frt_embed(&m, tree_seed).unwrap());
        prop_assert_eq!(tree.leaf_count(), n);
        for i in 0..n {
            for j in 0..n {
                prop_assert!(tree_distance(&tree, i, j).unwrap() >= m.dist(i, j));
            }
        }
    }

    #[test]
    fn euler_consecutive_pairs_use_edges_at_most_twice(n in 2usize..=20, seed in any::<u64>()) {
        let m = metric_for(n, 5, seed);
        let tree = frt_embed(&m, seed ^ 0x55).unwrap();
        let order = euler_order(&tree);
        let mut usage = vec![0u32; tree.nodes.len()];
        for w in order.pi.windows(2) {
            for e in tree.path_edges(tree.leaf_node(w[0]).unwrap(), tree.leaf_node(w[1]).unwrap()) {
                usage[e] += 1;
            }
        }
        prop_assert!(usage.iter().all(|&u| u <= 2));
    }
}

#[test]
fn dominance_over_two_hundred_seeds() {
    let m = metric_for(12, 6, 2024);
    let mut stretch_sum = 0.0;
    let mut pairs = 0usize;
    for seed in 0..200 {
        let tree = frt_embed(&m, seed).unwrap();
        for i in 0..12 {
            for j in i + 1..12 {
                let t = tree_distance(&tree, i, j).unwrap();
                assert!(t >= m.dist(i, j), "seed {seed} pair ({i},{j})");
                if m.dist(i, j) > 0 {
                    stretch_sum += t as f64 / m.dist(i, j) as f64;
                    pairs += 1;
                }
            }
        }
    }
    let average = stretch_sum / pairs as f64;
    println!("average stretch over 200 seeds: {average:.3}");
    assert!(average.is_finite() && average >= 1.0);
}

#[test]
fn crossing_bounds_on_square_grids() {
    for side in [3usize, 4, 5, 6] {
        let n = side * side;
        let grid = Grid::new(side, side).unwrap();
        for seed in 0..10u64 {
            let m = metric_for(n, 6, seed * 31 + side as u64);
            let tree = frt_embed(&m, seed).unwrap();
            let euler = euler_order(&tree);
            let mut rng = rng_from(seed);
            let mut shuffled: Vec<usize> = (0..n).collect();
            shuffled.shuffle(&mut rng);
            let random = PlacementOrder::new(shuffled).unwrap();
            for e in tree.edges() {
                let (a, b) = edge_sides(&tree, e).unwrap();
                let small = a.min(b);
                let floor_root = (small as f64).sqrt().floor() as u64;
                let c = edge_crossings(&tree, &euler, grid, e).unwrap();
                assert!(c >= floor_root, "n={n} seed={seed} edge={e}: {c} < {floor_root}");
                assert!(c <= 2 + 4 * small as u64, "n={n} seed={seed} edge={e}: {c}");
                assert!(c <= 2 + 2 * side as u64, "n={n} seed={seed} edge={e}: {c}");
                let r = edge_crossings(&tree, &random, grid, e).unwrap();
                assert!(r >= floor_root, "random order n={n} seed={seed} edge={e}: {r}");
            }
        }
    }
}
