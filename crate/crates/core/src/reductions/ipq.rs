//! The `I(p, q)` gadget: a `(2k+1)`-wide array whose optimum reveals whether
//! the strings have a common supersequence with exactly `p` zeros and `q` ones.
//!
//! Layout (rows top to bottom): a `$` row, the all-0 row (`0^p` everywhere),
//! the string row (`$ s_1 $ s_2 ... s_k $`), the all-1 row (`1^q`), then `$`
//! rows until the array has at least five rows.
//!
//! The exact solver deposits every `$` in one mask and reduces the rest to a
//! small weighted layout: even-column cells of the uniform rows may copy a
//! neighbouring odd column (Hamming distance obeys the triangle inequality),
//! and every border against a `$` cell is a fixed per-token charge. What
//! remains is a graph of `3k` nodes: the all-0 row's odd cells in a chain, the
//! strings, and the all-1 row's odd cells in a chain.

use crate::error::{Error, Result};
use crate::lcs::lcs_length;
use crate::model::{DepositionSchedule, Grid, Instance, Placement, Probe, Solution, Token};
use crate::reductions::ScsInput;
use crate::search::{solve_layout, LayoutProblem};

pub const DEFAULT_BUDGET: usize = 5_000_000;

fn dollar() -> Token {
    Token::new("$").expect("valid token")
}

fn zero() -> Token {
    Token::new("0").expect("valid token")
}

fn one() -> Token {
    Token::new("1").expect("valid token")
}

fn check_range(scs: &ScsInput, p: usize, q: usize) -> Result<()> {
    let l = scs.max_len();
    if p > l || q > l {
        return Err(Error::InvalidParameter(format!("p={p}, q={q} outside 0..={l}")));
    }
    Ok(())
}

fn dims(k: usize) -> Grid {
    Grid::new((2 * k + 1).max(5), 2 * k + 1).expect("positive dimensions")
}

/// The gadget instance with probe ids in row-major order and the identity placement.
pub fn build_ipq(scs: &ScsInput, p: usize, q: usize) -> Result<(Instance, Placement)> {
    check_range(scs, p, q)?;
    let k = scs.k();
    let grid = dims(k);
    let mut probes = Vec::with_capacity(grid.size());
    for (r, c) in grid.cells() {
        let seq = match r {
            1 => vec![zero(); p],
            3 => vec![one(); q],
            2 if c % 2 == 1 => scs.strings[c / 2].clone(),
            _ => vec![dollar()],
        };
        probes.push(Probe::new(probes.len(), seq));
    }
    let instance = Instance::new(grid, vec![dollar(), zero(), one()], probes)?;
    Ok((instance, Placement::row_major(grid)))
}

/// Cost of the single `$` mask.
pub fn dollar_mask_cost(k: usize) -> u64 {
    4 * (2 * k as u64 + 1)
}

/// `2(p+q)(2k+1) + 2L`: the optimum exactly when a fitting common supersequence exists.
pub fn formula_value(scs: &ScsInput, p: usize, q: usize) -> u64 {
    (2 * (p + q) * (2 * scs.k() + 1) + 2 * scs.total_len()) as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpqSolution {
    pub p: usize,
    pub q: usize,
    /// Border length without the `$` mask.
    pub cost: u64,
    /// Border length including the `$` mask.
    pub cost_with_dollar: u64,
    /// Deposition sequence without the leading `$`.
    pub witness: Vec<Token>,
    /// Full solution on the gadget instance.
    pub solution: Solution,
}

/// Border charge against `$` cells and dummy rows, which no choice can avoid.
fn fixed_charge(scs: &ScsInput, p: usize, q: usize) -> u64 {
    let k = scs.k();
    ((p + q) * (3 * k + 2) + 2 * scs.total_len()) as u64
}

/// Exact optimum of `I(p, q)`; `Ok(None)` when it exceeds `ceiling` (cost without `$`).
pub fn solve_ipq_bounded(
    scs: &ScsInput,
    p: usize,
    q: usize,
    budget: usize,
    ceiling: Option<u64>,
) -> Result<Option<IpqSolution>> {
    check_range(scs, p, q)?;
    let k = scs.k();
    let fixed = fixed_charge(scs, p, q);
    let graph_ceiling = match ceiling {
        Some(c) if c < fixed => return Ok(None),
        Some(c) => Some(c - fixed),
        None => None,
    };

    // nodes: 0..k all-0 row, k..2k strings, 2k..3k all-1 row; token ids 0 and 1
    let mut seqs = vec![vec![0u32; p]; k];
    seqs.extend(
        scs.strings
            .iter()
            .map(|s| s.iter().map(|t| u32::from(t.as_str() == "1")).collect()),
    );
    seqs.extend(vec![vec![1u32; q]; k]);
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((i, k + i, 1));
        edges.push((k + i, 2 * k + i, 1));
        if i + 1 < k {
            edges.push((i, i + 1, 1));
            edges.push((2 * k + i, 2 * k + i + 1, 1));
        }
    }
    let problem = LayoutProblem { seqs, edges };
    let Some(out) = solve_layout(&problem, budget, graph_ceiling)? else {
        return Ok(None);
    };
    let reduced = out.schedule(&[zero(), one()], 3 * k);

    let (instance, placement) = build_ipq(scs, p, q)?;
    let grid = instance.grid;
    let steps = reduced.len();
    let mut deposition = vec![dollar()];
    deposition.extend(reduced.deposition.iter().cloned());
    let terminal = |c: usize| (c.saturating_sub(1) / 2).min(k - 1);
    let embed = grid
        .cells()
        .map(|(r, c)| {
            let node = match r {
                1 => Some(terminal(c)),
                2 if c % 2 == 1 => Some(k + c / 2),
                3 => Some(2 * k + terminal(c)),
                _ => None,
            };
            let mut bits = vec![node.is_none()];
            match node {
                Some(v) => bits.extend(&reduced.embed[v]),
                None => bits.extend(std::iter::repeat_n(false, steps)),
            }
            bits
        })
        .collect();
    let solution = Solution::new(placement, DepositionSchedule::new(deposition, embed), grid)?;
    let dollar_cost = dollar_mask_cost(k);
    debug_assert_eq!(solution.cost, dollar_cost + fixed + out.cost);
    Ok(Some(IpqSolution {
        p,
        q,
        cost: solution.cost - dollar_cost,
        cost_with_dollar: solution.cost,
        witness: reduced.deposition,
        solution,
    }))
}

pub fn solve_ipq_exact(scs: &ScsInput, p: usize, q: usize, budget: usize) -> Result<IpqSolution> {
    Ok(solve_ipq_bounded(scs, p, q, budget, None)?.expect("no ceiling means a solution"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScsWitness {
    pub length: usize,
    pub witness: Vec<Token>,
}

/// Shortest common supersequence length recovered from gadget optima.
///
/// Pairs `(p, q)` are tried by increasing `p + q`; the first level where some
/// pair attains the formula value gives the length, and the lexicographically
/// smallest witness on that level is returned. Zero counts are allowed so that
/// strings over a single symbol are handled.
pub fn extract_scs(scs: &ScsInput, budget: usize) -> Result<ScsWitness> {
    let l = scs.max_len();
    for total in 0..=2 * l {
        let mut found: Option<Vec<Token>> = None;
        for p in total.saturating_sub(l)..=total.min(l) {
            let q = total - p;
            let formula = formula_value(scs, p, q);
            if let Some(sol) = solve_ipq_bounded(scs, p, q, budget, Some(formula))? {
                if sol.cost == formula && found.as_ref().is_none_or(|w| sol.witness < *w) {
                    found = Some(sol.witness);
                }
            }
        }
        if let Some(witness) = found {
            return Ok(ScsWitness {
                length: total,
                witness,
            });
        }
    }
    Err(Error::Infeasible("no pair (p, q) reached the formula value".into()))
}

/// Shortest common supersequence by DP over the product of string positions,
/// with the lexicographically smallest witness. Refuses more than `budget` states.
pub fn scs_exact_dp(strings: &[Vec<Token>], budget: usize) -> Result<ScsWitness> {
    let dims: Vec<usize> = strings.iter().map(|s| s.len() + 1).collect();
    let states = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&s| s <= budget)
        .ok_or_else(|| Error::Infeasible(format!("more than {budget} position states")))?;
    let mut stride = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let pos = |idx: usize, i: usize| idx / stride[i] % dims[i];
    let mut alphabet: Vec<&Token> = strings.iter().flatten().collect();
    alphabet.sort();
    alphabet.dedup();

    let advance = |idx: usize, t: &Token| -> usize {
        let mut next = idx;
        for (i, s) in strings.iter().enumerate() {
            if s.get(pos(idx, i)) == Some(t) {
                next += stride[i];
            }
        }
        next
    };
    // advancing only increases the index, so a descending sweep sees successors first
    let mut best = vec![0usize; states];
    for idx in (0..states).rev() {
        best[idx] = alphabet
            .iter()
            .map(|t| advance(idx, t))
            .filter(|&next| next != idx)
            .map(|next| best[next] + 1)
            .min()
            .unwrap_or(0);
    }
    let mut witness = Vec::with_capacity(best[0]);
    let mut idx = 0;
    while best[idx] > 0 {
        let t = alphabet
            .iter()
            .find(|t| {
                let next = advance(idx, t);
                next != idx && best[next] + 1 == best[idx]
            })
            .expect("a successor realizes the optimum");
        witness.push((*t).clone());
        idx = advance(idx, t);
    }
    Ok(ScsWitness {
        length: best[0],
        witness,
    })
}

/// Whether `sup` contains every string as a subsequence.
pub fn is_common_supersequence(sup: &[Token], strings: &[Vec<Token>]) -> bool {
    strings.iter().all(|s| lcs_length(s, sup) == s.len())
}
