//! Domain types and the two border-length accountings.
//!
//! A [`Solution`] pairs a [`Placement`] (probe -> cell) with a
//! [`DepositionSchedule`] (the deposition sequence `D` plus one bit pattern per
//! probe). Border length can be summed per adjacent probe pair
//! ([`border_length_pairwise`]) or per mask ([`border_length_masks`]); both
//! accountings agree on every valid solution.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::{Error, Result};

/// Reserved gap atom; never part of an alphabet.
pub const GAP: &str = "-";

/// An opaque alphabet atom such as `A`, `0`, `$` or `e_1_2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

impl Token {
    pub fn new(symbol: impl Into<String>) -> Result<Self> {
        let symbol = symbol.into();
        if symbol.is_empty() || symbol == GAP || symbol.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken(symbol));
        }
        Ok(Token(symbol))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for Token {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Token::new(s)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Splits a string into single-character tokens (`"ACGT"` -> `A C G T`).
pub fn tokens_of(s: &str) -> Vec<Token> {
    s.chars()
        .map(|c| Token::new(c.to_string()).expect("single non-space character"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Probe {
    pub id: usize,
    pub seq: Vec<Token>,
}

impl Probe {
    pub fn new(id: usize, seq: Vec<Token>) -> Self {
        Probe { id, seq }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }
}

/// `(row, col)`, zero based.
pub type Cell = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    pub rows: usize,
    pub cols: usize,
}

impl Grid {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter(format!(
                "grid dimensions must be positive, got {rows}x{cols}"
            )));
        }
        Ok(Grid { rows, cols })
    }

    pub fn size(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn contains(&self, (r, c): Cell) -> bool {
        r < self.rows && c < self.cols
    }

    pub fn index(&self, (r, c): Cell) -> usize {
        r * self.cols + c
    }

    pub fn cell(&self, index: usize) -> Cell {
        (index / self.cols, index % self.cols)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.rows).flat_map(move |r| (0..self.cols).map(move |c| (r, c)))
    }

    /// 4-neighbourhood inside the grid; the outer boundary has no neighbours.
    pub fn neighbors(&self, (r, c): Cell) -> impl Iterator<Item = Cell> + '_ {
        let up = (r > 0).then(|| (r - 1, c));
        let down = (r + 1 < self.rows).then(|| (r + 1, c));
        let left = (c > 0).then(|| (r, c - 1));
        let right = (c + 1 < self.cols).then(|| (r, c + 1));
        [up, down, left, right].into_iter().flatten()
    }

    pub fn degree(&self, cell: Cell) -> usize {
        self.neighbors(cell).count()
    }

    /// Every unordered adjacent cell pair once, horizontal pairs first per row.
    pub fn adjacent_pairs(&self) -> Vec<(Cell, Cell)> {
        let mut out = Vec::with_capacity(2 * self.size());
        for (r, c) in self.cells() {
            if c + 1 < self.cols {
                out.push(((r, c), (r, c + 1)));
            }
            if r + 1 < self.rows {
                out.push(((r, c), (r + 1, c)));
            }
        }
        out
    }
}

/// One element of the dihedral group acting on a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symmetry {
    pub transpose: bool,
    pub flip_rows: bool,
    pub flip_cols: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry {
        transpose: false,
        flip_rows: false,
        flip_cols: false,
    };

    pub fn apply(&self, grid: Grid, (r, c): Cell) -> Cell {
        let r = if self.flip_rows { grid.rows - 1 - r } else { r };
        let c = if self.flip_cols { grid.cols - 1 - c } else { c };
        if self.transpose {
            (c, r)
        } else {
            (r, c)
        }
    }

    pub fn target(&self, grid: Grid) -> Grid {
        if self.transpose {
            Grid {
                rows: grid.cols,
                cols: grid.rows,
            }
        } else {
            grid
        }
    }
}

/// Symmetries mapping the grid onto itself, deduplicated by their action on
/// cells (8 for squares, 4 for general rectangles, 2 for a single row).
pub fn grid_symmetries(grid: Grid) -> Vec<Symmetry> {
    let mut seen: Vec<Vec<Cell>> = Vec::new();
    let mut out = Vec::new();
    for transpose in [false, true] {
        if transpose && !grid.is_square() {
            continue;
        }
        for flip_rows in [false, true] {
            for flip_cols in [false, true] {
                let sym = Symmetry {
                    transpose,
                    flip_rows,
                    flip_cols,
                };
                let image: Vec<Cell> = grid.cells().map(|cell| sym.apply(grid, cell)).collect();
                if !seen.contains(&image) {
                    seen.push(image);
                    out.push(sym);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub alphabet: Vec<Token>,
    pub probes: Vec<Probe>,
    pub grid: Grid,
}

impl Instance {
    /// Probe ids must be dense `0..n` and listed in id order.
    pub fn new(grid: Grid, alphabet: Vec<Token>, probes: Vec<Probe>) -> Result<Self> {
        let instance = Instance {
            alphabet,
            probes,
            grid,
        };
        instance.check()?;
        Ok(instance)
    }

    /// Builds an instance whose alphabet is the sorted set of used tokens.
    pub fn from_sequences(grid: Grid, seqs: Vec<Vec<Token>>) -> Result<Self> {
        let alphabet: BTreeSet<Token> = seqs.iter().flatten().cloned().collect();
        let probes = seqs
            .into_iter()
            .enumerate()
            .map(|(id, seq)| Probe::new(id, seq))
            .collect();
        Instance::new(grid, alphabet.into_iter().collect(), probes)
    }

    /// Convenience constructor with one character per token.
    pub fn from_strs(grid: Grid, seqs: &[&str]) -> Result<Self> {
        Instance::from_sequences(grid, seqs.iter().map(|s| tokens_of(s)).collect())
    }

    pub fn n(&self) -> usize {
        self.probes.len()
    }

    pub fn seq(&self, id: usize) -> &[Token] {
        &self.probes[id].seq
    }

    pub fn total_length(&self) -> usize {
        self.probes.iter().map(Probe::len).sum()
    }

    pub fn check(&self) -> Result<()> {
        let alphabet: BTreeSet<&Token> = self.alphabet.iter().collect();
        if alphabet.len() != self.alphabet.len() {
            return Err(Error::InvalidInstance("duplicate alphabet token".into()));
        }
        if self.probes.len() != self.grid.size() {
            return Err(Error::InvalidInstance(format!(
                "{} probes for a {}x{} grid",
                self.probes.len(),
                self.grid.rows,
                self.grid.cols
            )));
        }
        for (i, probe) in self.probes.iter().enumerate() {
            if probe.id != i {
                return Err(Error::InvalidInstance(format!(
                    "probe ids must be dense and ordered: expected {i}, found {}",
                    probe.id
                )));
            }
            if let Some(tok) = probe.seq.iter().find(|t| !alphabet.contains(t)) {
                return Err(Error::InvalidInstance(format!(
                    "probe {i} uses token {tok} outside the alphabet"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Placement {
    pub cell_of: Vec<Cell>,
}

impl Placement {
    pub fn new(cell_of: Vec<Cell>) -> Self {
        Placement { cell_of }
    }

    /// Probe `i` at cell `i` in row-major order.
    pub fn row_major(grid: Grid) -> Self {
        Placement::new((0..grid.size()).map(|i| grid.cell(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.cell_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cell_of.is_empty()
    }

    /// Inverse map indexed by `grid.index(cell)`; fails unless bijective.
    pub fn probe_at(&self, grid: Grid) -> std::result::Result<Vec<usize>, Violation> {
        if self.cell_of.len() != grid.size() {
            return Err(Violation::ProbeCount {
                expected: grid.size(),
                got: self.cell_of.len(),
            });
        }
        let mut at = vec![usize::MAX; grid.size()];
        for (id, &cell) in self.cell_of.iter().enumerate() {
            if !grid.contains(cell) {
                return Err(Violation::CellOutOfGrid { probe: id, cell });
            }
            let slot = &mut at[grid.index(cell)];
            if *slot != usize::MAX {
                return Err(Violation::NotBijective {
                    cell,
                    first: *slot,
                    second: id,
                });
            }
            *slot = id;
        }
        Ok(at)
    }

    /// Unordered probe pairs on adjacent cells.
    pub fn adjacent_probe_pairs(&self, grid: Grid) -> std::result::Result<Vec<(usize, usize)>, Violation> {
        let at = self.probe_at(grid)?;
        Ok(grid
            .adjacent_pairs()
            .into_iter()
            .map(|(a, b)| (at[grid.index(a)], at[grid.index(b)]))
            .collect())
    }
}

/// The deposition sequence plus one `deposit here` pattern per probe.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DepositionSchedule {
    pub deposition: Vec<Token>,
    pub embed: Vec<Vec<bool>>,
}

impl DepositionSchedule {
    pub fn new(deposition: Vec<Token>, embed: Vec<Vec<bool>>) -> Self {
        DepositionSchedule { deposition, embed }
    }

    pub fn len(&self) -> usize {
        self.deposition.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deposition.is_empty()
    }

    pub fn probe_count(&self) -> usize {
        self.embed.len()
    }

    /// Tokens read from `D` at the probe's `1` positions.
    pub fn reconstruct(&self, id: usize) -> Vec<Token> {
        self.embed[id]
            .iter()
            .zip(&self.deposition)
            .filter(|(&on, _)| on)
            .map(|(_, t)| t.clone())
            .collect()
    }

    fn check_shape(&self, probes: usize) -> std::result::Result<(), Violation> {
        if self.embed.len() != probes {
            return Err(Violation::ProbeCount {
                expected: probes,
                got: self.embed.len(),
            });
        }
        for (id, pattern) in self.embed.iter().enumerate() {
            if pattern.len() != self.deposition.len() {
                return Err(Violation::PatternLength {
                    probe: id,
                    expected: self.deposition.len(),
                    got: pattern.len(),
                });
            }
        }
        Ok(())
    }

    /// Removes steps that no probe uses.
    pub fn drop_unused_steps(&self) -> DepositionSchedule {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&t| self.embed.iter().any(|p| p[t]))
            .collect();
        DepositionSchedule {
            deposition: keep.iter().map(|&t| self.deposition[t].clone()).collect(),
            embed: self
                .embed
                .iter()
                .map(|p| keep.iter().map(|&t| p[t]).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    pub step: usize,
    pub token: Token,
    pub cells: BTreeSet<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub placement: Placement,
    pub schedule: DepositionSchedule,
    pub cost: u64,
}

impl Solution {
    /// Computes the cost with the pairwise accounting.
    pub fn new(placement: Placement, schedule: DepositionSchedule, grid: Grid) -> Result<Self> {
        let cost = border_length_pairwise(&placement, &schedule, grid)?;
        Ok(Solution {
            placement,
            schedule,
            cost,
        })
    }
}

/// First invariant violation found by [`validate_solution`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("probe count mismatch: expected {expected}, got {got}")]
    ProbeCount { expected: usize, got: usize },

    #[error("probe {probe} placed outside the grid at ({}, {})", cell.0, cell.1)]
    CellOutOfGrid { probe: usize, cell: Cell },

    #[error("not bijective: probes {first} and {second} share cell ({}, {})", cell.0, cell.1)]
    NotBijective { cell: Cell, first: usize, second: usize },

    #[error("pattern length mismatch for probe {probe}: expected {expected}, got {got}")]
    PatternLength { probe: usize, expected: usize, got: usize },

    #[error("probe reconstruction mismatch: probe {probe} at ({}, {}) reads {got:?}, expected {expected:?}", cell.0, cell.1)]
    Reconstruction {
        probe: usize,
        cell: Cell,
        expected: String,
        got: String,
    },

    #[error("deposition token {token} at step {step} is not in the alphabet")]
    TokenOutsideAlphabet { step: usize, token: Token },

    #[error("grid mismatch: instance is {}x{}, solution does not fit", grid.rows, grid.cols)]
    GridMismatch { grid: Grid },

    #[error("cost mismatch (pairwise={pairwise} masks={masks} claimed={claimed})")]
    CostMismatch { pairwise: u64, masks: u64, claimed: u64 },
}

fn pattern(schedule: &DepositionSchedule, id: usize) -> Result<&[bool]> {
    schedule
        .embed
        .get(id)
        .map(Vec::as_slice)
        .ok_or(Error::UnknownProbe(id))
}

/// Positions where `i` deposits and `j` does not.
pub fn border_asym(schedule: &DepositionSchedule, i: usize, j: usize) -> Result<u64> {
    let (a, b) = (pattern(schedule, i)?, pattern(schedule, j)?);
    if a.len() != b.len() {
        return Err(Violation::PatternLength {
            probe: j,
            expected: a.len(),
            got: b.len(),
        }
        .into());
    }
    Ok(a.iter().zip(b).filter(|(&x, &y)| x && !y).count() as u64)
}

/// Hamming distance between the two patterns.
pub fn border_sym(schedule: &DepositionSchedule, i: usize, j: usize) -> Result<u64> {
    Ok(border_asym(schedule, i, j)? + border_asym(schedule, j, i)?)
}

/// Sum of `border_asym` over ordered grid-adjacent probe pairs.
pub fn border_length_pairwise(
    placement: &Placement,
    schedule: &DepositionSchedule,
    grid: Grid,
) -> Result<u64> {
    let at = placement.probe_at(grid)?;
    schedule.check_shape(placement.len())?;
    let mut total = 0;
    for cell in grid.cells() {
        let i = at[grid.index(cell)];
        for nb in grid.neighbors(cell) {
            total += border_asym(schedule, i, at[grid.index(nb)])?;
        }
    }
    Ok(total)
}

/// One mask per deposition step.
pub fn masks_of(placement: &Placement, schedule: &DepositionSchedule) -> Result<Vec<Mask>> {
    schedule.check_shape(placement.len())?;
    Ok(schedule
        .deposition
        .iter()
        .enumerate()
        .map(|(step, token)| Mask {
            step,
            token: token.clone(),
            cells: schedule
                .embed
                .iter()
                .enumerate()
                .filter(|(_, p)| p[step])
                .map(|(id, _)| placement.cell_of[id])
                .collect(),
        })
        .collect())
}

/// Unordered adjacent cell pairs with exactly one endpoint deposited.
pub fn mask_border_length(mask: &Mask, grid: Grid) -> u64 {
    grid.adjacent_pairs()
        .into_iter()
        .filter(|(a, b)| mask.cells.contains(a) != mask.cells.contains(b))
        .count() as u64
}

pub fn border_length_masks(
    placement: &Placement,
    schedule: &DepositionSchedule,
    grid: Grid,
) -> Result<u64> {
    placement.probe_at(grid)?;
    Ok(masks_of(placement, schedule)?
        .iter()
        .map(|m| mask_border_length(m, grid))
        .sum())
}

fn render_seq(seq: &[Token]) -> String {
    seq.iter().map(Token::as_str).collect::<Vec<_>>().join(" ")
}

/// Checks every solution invariant and reports the first violation.
pub fn validate_solution(instance: &Instance, solution: &Solution) -> std::result::Result<(), Violation> {
    let grid = instance.grid;
    let placement = &solution.placement;
    let schedule = &solution.schedule;
    if placement.len() != instance.n() {
        return Err(Violation::ProbeCount {
            expected: instance.n(),
            got: placement.len(),
        });
    }
    placement.probe_at(grid)?;
    schedule.check_shape(instance.n())?;
    let alphabet: BTreeSet<&Token> = instance.alphabet.iter().collect();
    for (step, token) in schedule.deposition.iter().enumerate() {
        if !alphabet.contains(token) {
            return Err(Violation::TokenOutsideAlphabet {
                step,
                token: token.clone(),
            });
        }
    }
    for probe in &instance.probes {
        let got = schedule.reconstruct(probe.id);
        if got != probe.seq {
            return Err(Violation::Reconstruction {
                probe: probe.id,
                cell: placement.cell_of[probe.id],
                expected: render_seq(&probe.seq),
                got: render_seq(&got),
            });
        }
    }
    let pairwise = border_length_pairwise(placement, schedule, grid).map_err(|_| Violation::GridMismatch { grid })?;
    let masks = border_length_masks(placement, schedule, grid).map_err(|_| Violation::GridMismatch { grid })?;
    if pairwise != masks || pairwise != solution.cost {
        return Err(Violation::CostMismatch {
            pairwise,
            masks,
            claimed: solution.cost,
        });
    }
    Ok(())
}
