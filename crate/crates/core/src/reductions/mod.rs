//! Gadget constructors and exact solvers for the hardness reductions:
//! shortest common supersequence to fixed-placement BMP ([`ipq`]),
//! Hamiltonian path to one-row BMP ([`hampath`]), and one-row to square
//! grids ([`lift`]).

pub mod hampath;
pub mod ipq;
pub mod lift;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{tokens_of, Token};

pub use hampath::{build_hampath_instance, check_hampath_certificate, hampath_bound, solve_1d_exact, HampathCertificate};
pub use ipq::{
    build_ipq, dollar_mask_cost, extract_scs, formula_value, is_common_supersequence, scs_exact_dp, solve_ipq_bounded,
    solve_ipq_exact, IpqSolution, ScsWitness,
};
pub use lift::{lift_1d_to_2d, LiftedInstance};

/// `k` binary strings over the tokens `0` and `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScsInput {
    pub strings: Vec<Vec<Token>>,
}

impl ScsInput {
    pub fn new(strings: Vec<Vec<Token>>) -> Result<Self> {
        if strings.is_empty() {
            return Err(Error::InvalidParameter("at least one string is required".into()));
        }
        if let Some(t) = strings.iter().flatten().find(|t| !matches!(t.as_str(), "0" | "1")) {
            return Err(Error::InvalidParameter(format!("token {t} is not binary")));
        }
        Ok(ScsInput { strings })
    }

    pub fn from_strs(strings: &[&str]) -> Result<Self> {
        ScsInput::new(strings.iter().map(|s| tokens_of(s)).collect())
    }

    pub fn k(&self) -> usize {
        self.strings.len()
    }

    /// Length of the longest string.
    pub fn max_len(&self) -> usize {
        self.strings.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Total length of all strings.
    pub fn total_len(&self) -> usize {
        self.strings.iter().map(Vec::len).sum()
    }
}

/// Simple undirected graph on vertices `1..=n`; edges stored as sorted `(i, j)` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInput {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphInput {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {a}")));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidParameter(format!("edge ({a}, {b}) outside vertices 1..={n}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidParameter(format!("repeated edge ({a}, {b})")));
            }
        }
        Ok(GraphInput {
            n,
            edges: seen.into_iter().collect(),
        })
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Whether `order` (1-based vertices) is a Hamiltonian path.
    pub fn is_hamiltonian_path(&self, order: &[usize]) -> bool {
        let mut seen = vec![false; self.n + 1];
        order.len() == self.n
            && order
                .iter()
                .all(|&v| v >= 1 && v <= self.n && !std::mem::replace(&mut seen[v], true))
            && order.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }
}

/// Picks `base`, or `base` with primes appended, until it is not in `taken`.
pub(crate) fn fresh_token(base: &str, taken: &BTreeSet<Token>) -> Token {
    let mut name = base.to_string();
    loop {
        let t = Token::new(name.clone()).expect("valid base token");
        if !taken.contains(&t) {
            return t;
        }
        name.push('\'');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scs_input_rules() {
        let s = ScsInput::from_strs(&["010", "100", "00"]).unwrap();
        assert_eq!((s.k(), s.max_len(), s.total_len()), (3, 3, 8));
        assert!(ScsInput::from_strs(&["012"]).is_err());
        assert!(ScsInput::from_strs(&[]).is_err());
    }

    #[test]
    fn graph_rules() {
        let g = GraphInput::new(3, vec![(2, 1), (3, 2)]).unwrap();
        assert_eq!(g.edges, vec![(1, 2), (2, 3)]);
        assert!(g.is_hamiltonian_path(&[1, 2, 3]));
        assert!(!g.is_hamiltonian_path(&[2, 1, 3]));
        assert!(!g.is_hamiltonian_path(&[1, 2]));
        assert!(GraphInput::new(2, vec![(1, 1)]).is_err());
        assert!(GraphInput::new(2, vec![(1, 2), (2, 1)]).is_err());
        assert!(GraphInput::new(2, vec![(1, 3)]).is_err());
    }

    #[test]
    fn fresh_tokens_avoid_collisions() {
        let taken: BTreeSet<Token> = ["$", "$'"].iter().map(|s| Token::new(*s).unwrap()).collect();
        assert_eq!(fresh_token("$", &taken).as_str(), "$''");
        assert_eq!(fresh_token("x1", &taken).as_str(), "x1");
    }
}
