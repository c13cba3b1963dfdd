//! Exact best-first search for a deposition sequence over weighted layouts.
//!
//! Nodes carry token sequences and edges carry weights. A step deposits one
//! token on a non-empty subset of the nodes whose next token it is, and costs
//! the total weight of edges with exactly one endpoint in that subset. With
//! unit weights on grid adjacencies this is exactly the sum of mask borders.
//!
//! The heuristic sums `w · d(suffix_u, suffix_v)` over edges, where `d` is the
//! LCS distance of the unconsumed suffixes. It is admissible and consistent, so
//! every settled state carries its optimal cost. Among optimal schedules the
//! lexicographically smallest deposition sequence is returned.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::model::{Token, DepositionSchedule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayoutProblem {
    /// Interned sequences; token id order must match the order of the tokens themselves.
    pub seqs: Vec<Vec<u32>>,
    /// `(u, v, weight)` with `u != v`.
    pub edges: Vec<(usize, usize, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub cost: u64,
    /// `(token id, bitmask of depositing nodes)` per step.
    pub steps: Vec<(u32, u64)>,
    pub expansions: usize,
}

impl SearchOutcome {
    /// Expands the steps into a schedule over `tokens` (indexed by token id).
    pub fn schedule(&self, tokens: &[Token], nodes: usize) -> DepositionSchedule {
        let deposition = self.steps.iter().map(|&(t, _)| tokens[t as usize].clone()).collect();
        let embed = (0..nodes)
            .map(|i| self.steps.iter().map(|&(_, m)| m >> i & 1 == 1).collect())
            .collect();
        DepositionSchedule::new(deposition, embed)
    }
}

/// Sorted distinct tokens and the sequences rewritten as indices into them.
pub fn intern<'a>(seqs: impl IntoIterator<Item = &'a [Token]>) -> (Vec<Token>, Vec<Vec<u32>>) {
    let seqs: Vec<&[Token]> = seqs.into_iter().collect();
    let mut table: Vec<Token> = seqs.iter().flat_map(|s| s.iter().cloned()).collect();
    table.sort();
    table.dedup();
    let ids = seqs
        .iter()
        .map(|s| {
            s.iter()
                .map(|t| table.binary_search(t).expect("interned token") as u32)
                .collect()
        })
        .collect();
    (table, ids)
}

/// Suffix LCS table for one edge: `at(i, j) = |LCS(u[i..], v[j..])|`.
struct SuffixLcs {
    width: usize,
    table: Vec<u16>,
}

impl SuffixLcs {
    fn new(u: &[u32], v: &[u32]) -> Self {
        let width = v.len() + 1;
        let mut table = vec![0u16; (u.len() + 1) * width];
        for i in (0..u.len()).rev() {
            for j in (0..v.len()).rev() {
                table[i * width + j] = if u[i] == v[j] {
                    table[(i + 1) * width + j + 1] + 1
                } else {
                    table[(i + 1) * width + j].max(table[i * width + j + 1])
                };
            }
        }
        SuffixLcs { width, table }
    }

    fn at(&self, i: usize, j: usize) -> u64 {
        self.table[i * self.width + j] as u64
    }
}

struct Entry {
    state: Box<[u8]>,
    g: u64,
    closed: bool,
}

struct Engine<'a> {
    problem: &'a LayoutProblem,
    /// Per node: `(neighbour, weight)`.
    adj: Vec<Vec<(usize, u64)>>,
    lcs: Vec<SuffixLcs>,
}

impl Engine<'_> {
    fn heuristic(&self, state: &[u8]) -> u64 {
        self.problem
            .edges
            .iter()
            .zip(&self.lcs)
            .map(|(&(u, v, w), table)| {
                let (i, j) = (state[u] as usize, state[v] as usize);
                let rest = (self.problem.seqs[u].len() - i + self.problem.seqs[v].len() - j) as u64;
                w * (rest - 2 * table.at(i, j))
            })
            .sum()
    }

    fn is_goal(&self, state: &[u8]) -> bool {
        state
            .iter()
            .zip(&self.problem.seqs)
            .all(|(&p, s)| p as usize == s.len())
    }

    /// Successors in deterministic order: by token, then by submask value.
    fn successors(&self, state: &[u8], mut visit: impl FnMut(u32, u64, u64, Box<[u8]>)) {
        let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, s) in self.problem.seqs.iter().enumerate() {
            if let Some(&t) = s.get(state[i] as usize) {
                groups.entry(t).or_default().push(i);
            }
        }
        for (token, members) in groups {
            let k = members.len();
            for bits in 1u64..1 << k {
                let mut mask = 0u64;
                for (b, &i) in members.iter().enumerate() {
                    if bits >> b & 1 == 1 {
                        mask |= 1 << i;
                    }
                }
                let mut cost = 0;
                let mut next = state.to_vec().into_boxed_slice();
                for (b, &i) in members.iter().enumerate() {
                    if bits >> b & 1 == 1 {
                        next[i] += 1;
                        cost += self.adj[i]
                            .iter()
                            .filter(|&&(j, _)| mask >> j & 1 == 0)
                            .map(|&(_, w)| w)
                            .sum::<u64>();
                    }
                }
                visit(token, mask, cost, next);
            }
        }
    }
}

/// Minimum-cost schedule for `problem`.
///
/// `budget` bounds the number of expanded states; running out is
/// [`Error::Infeasible`]. With a `ceiling`, paths above it are pruned and
/// `Ok(None)` means the optimum exceeds the ceiling.
pub fn solve_layout(problem: &LayoutProblem, budget: usize, ceiling: Option<u64>) -> Result<Option<SearchOutcome>> {
    let n = problem.seqs.len();
    if n > 64 {
        return Err(Error::InvalidParameter(format!("{n} nodes exceed the search limit of 64")));
    }
    if let Some(s) = problem.seqs.iter().find(|s| s.len() > u8::MAX as usize) {
        return Err(Error::InvalidParameter(format!("sequence of length {} exceeds 255", s.len())));
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in &problem.edges {
        if u >= n || v >= n || u == v {
            return Err(Error::InvalidParameter(format!("bad edge ({u}, {v})")));
        }
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    let engine = Engine {
        problem,
        adj,
        lcs: problem
            .edges
            .iter()
            .map(|&(u, v, _)| SuffixLcs::new(&problem.seqs[u], &problem.seqs[v]))
            .collect(),
    };

    let mut entries: Vec<Entry> = Vec::new();
    let mut index: HashMap<Box<[u8]>, usize> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let root: Box<[u8]> = vec![0u8; n].into_boxed_slice();
    let h0 = engine.heuristic(&root);
    if ceiling.is_some_and(|c| h0 > c) {
        return Ok(None);
    }
    index.insert(root.clone(), 0);
    entries.push(Entry { state: root, g: 0, closed: false });
    heap.push(Reverse((h0, 0u64, 0usize)));

    let mut best: Option<(u64, usize)> = None;
    let mut expansions = 0usize;
    while let Some(Reverse((f, g, idx))) = heap.pop() {
        if best.is_some_and(|(c, _)| f > c) {
            break;
        }
        if entries[idx].closed || g > entries[idx].g {
            continue;
        }
        entries[idx].closed = true;
        let state = entries[idx].state.clone();
        if best.is_none() && engine.is_goal(&state) {
            best = Some((g, idx));
            continue;
        }
        expansions += 1;
        if expansions > budget {
            return Err(Error::Infeasible(format!("search budget of {budget} states exhausted")));
        }
        engine.successors(&state, |_, _, cost, next| {
            let g2 = g + cost;
            let slot = match index.get(&next) {
                Some(&j) => {
                    if entries[j].closed || entries[j].g <= g2 {
                        return;
                    }
                    entries[j].g = g2;
                    j
                }
                None => {
                    let j = entries.len();
                    index.insert(next.clone(), j);
                    entries.push(Entry { state: next, g: g2, closed: false });
                    j
                }
            };
            let f2 = g2 + engine.heuristic(&entries[slot].state);
            if ceiling.is_some_and(|c| f2 > c) {
                return;
            }
            heap.push(Reverse((f2, g2, slot)));
        });
    }
    let Some((cost, goal)) = best else {
        return Ok(None);
    };

    // good = settled and reaches the goal along edges that keep costs optimal
    let mut settled: Vec<usize> = (0..entries.len()).filter(|&i| entries[i].closed).collect();
    settled.sort_by_key(|&i| Reverse(entries[i].state.iter().map(|&p| p as usize).sum::<usize>()));
    let mut good = vec![false; entries.len()];
    good[goal] = true;
    let tight = |entries: &[Entry], from: usize, cost: u64, next: &[u8]| -> Option<usize> {
        let j = *index.get(next)?;
        (entries[j].closed && entries[j].g == entries[from].g + cost).then_some(j)
    };
    for &i in &settled {
        if good[i] {
            continue;
        }
        let mut hit = false;
        engine.successors(&entries[i].state, |_, _, c, next| {
            if !hit {
                hit = tight(&entries, i, c, &next).is_some_and(|j| good[j]);
            }
        });
        good[i] = hit;
    }

    // layers[k][x] = (state, position of its parent in layers[k-1], token, mask)
    let mut layers: Vec<Vec<(usize, usize, u32, u64)>> = vec![vec![(0, 0, 0, 0)]];
    loop {
        let frontier = layers.last().expect("root layer");
        if frontier.iter().any(|&(i, ..)| i == goal) {
            break;
        }
        let mut min_token = u32::MAX;
        let mut next: Vec<(usize, usize, u32, u64)> = Vec::new();
        for (pos, &(i, ..)) in frontier.iter().enumerate() {
            engine.successors(&entries[i].state, |t, mask, c, succ| {
                if t > min_token {
                    return;
                }
                let Some(j) = tight(&entries, i, c, &succ).filter(|&j| good[j]) else {
                    return;
                };
                if t < min_token {
                    min_token = t;
                    next.clear();
                }
                if !next.iter().any(|&(k, ..)| k == j) {
                    next.push((j, pos, t, mask));
                }
            });
        }
        debug_assert!(!next.is_empty());
        layers.push(next);
    }
    let mut steps = Vec::new();
    let mut pos = layers
        .last()
        .and_then(|l| l.iter().position(|&(i, ..)| i == goal))
        .expect("goal in last layer");
    for layer in layers[1..].iter().rev() {
        let (_, up, t, mask) = layer[pos];
        steps.push((t, mask));
        pos = up;
    }
    steps.reverse();
    Ok(Some(SearchOutcome { cost, steps, expansions }))
}
