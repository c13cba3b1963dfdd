//! Seeded random inputs for benchmarks and tests.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Grid, Instance, Probe, Token};
use crate::reductions::{GraphInput, ScsInput};
use crate::rng::rng_from;

/// Uniform probes with lengths in `min_len..=max_len` over `alphabet`.
pub fn random_instance(grid: Grid, alphabet: &[Token], min_len: usize, max_len: usize, seed: u64) -> Result<Instance> {
    if alphabet.is_empty() || min_len > max_len {
        return Err(Error::InvalidParameter(format!(
            "need a non-empty alphabet and min length {min_len} <= max length {max_len}"
        )));
    }
    let distinct: BTreeSet<&Token> = alphabet.iter().collect();
    if distinct.len() != alphabet.len() {
        return Err(Error::InvalidParameter("alphabet has repeated tokens".into()));
    }
    let mut rng = rng_from(seed);
    let probes = (0..grid.size())
        .map(|id| {
            let len = rng.gen_range(min_len..=max_len);
            Probe::new(id, (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone()).collect())
        })
        .collect();
    Instance::new(grid, alphabet.to_vec(), probes)
}

/// `k` binary strings with lengths in `1..=max_len`.
pub fn random_scs_input(k: usize, max_len: usize, seed: u64) -> Result<ScsInput> {
    if k == 0 || max_len == 0 {
        return Err(Error::InvalidParameter("k and max length must be positive".into()));
    }
    let mut rng = rng_from(seed);
    let strings = (0..k)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len)
                .map(|_| Token::new(if rng.gen_bool(0.5) { "1" } else { "0" }).expect("valid token"))
                .collect()
        })
        .collect();
    ScsInput::new(strings)
}

/// Erdős–Rényi graph on `1..=n` with edge probability `density`.
pub fn random_graph(n: usize, density: f64, seed: u64) -> Result<GraphInput> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!("density {density} outside [0, 1]")));
    }
    let mut rng = rng_from(seed);
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    GraphInput::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tokens_of;

    #[test]
    fn instances_are_reproducible() {
        let grid = Grid::new(3, 3).unwrap();
        let a = random_instance(grid, &tokens_of("ACGT"), 1, 4, 9).unwrap();
        assert_eq!(a, random_instance(grid, &tokens_of("ACGT"), 1, 4, 9).unwrap());
        assert_eq!(a.n(), 9);
        assert!(a.probes.iter().all(|p| (1..=4).contains(&p.len())));
        assert_eq!(a.alphabet, tokens_of("ACGT"));
    }

    #[test]
    fn bad_parameters() {
        let grid = Grid::new(1, 1).unwrap();
        assert!(random_instance(grid, &[], 1, 2, 0).is_err());
        assert!(random_instance(grid, &tokens_of("AA"), 1, 2, 0).is_err());
        assert!(random_instance(grid, &tokens_of("A"), 3, 2, 0).is_err());
        assert!(random_graph(3, 1.5, 0).is_err());
    }

    #[test]
    fn complete_graph_at_density_one() {
        assert_eq!(random_graph(4, 1.0, 0).unwrap().m(), 6);
        assert!(random_scs_input(3, 5, 2).unwrap().strings.iter().all(|s| !s.is_empty()));
    }
}
