//! Line-oriented text formats for instances, solutions and graphs.
//!
//! Instance:
//! ```text
//! grid <rows> <cols>
//! alphabet <tok> <tok> ...
//! probe <id> <tok> <tok> ...
//! ```
//! Solution:
//! ```text
//! deposition <tok> <tok> ...
//! place <id> <row> <col> <bitstring>
//! cost <n>
//! ```
//! Rows and columns are zero based. Graph edge lists carry an `n m` header and
//! then one `i j` line per edge with 1-based vertices.

use std::fmt::Write as _;

use thiserror::Error;

use crate::error::Result;
use crate::model::{DepositionSchedule, Grid, Instance, Placement, Probe, Solution, Token};
use crate::reductions::GraphInput;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

struct Field<'a> {
    text: &'a str,
    col: usize,
}

struct Line<'a> {
    number: usize,
    fields: Vec<Field<'a>>,
    end_col: usize,
}

impl<'a> Line<'a> {
    fn err(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.number,
            col,
            msg: msg.into(),
        }
    }

    fn field(&self, idx: usize, what: &str) -> std::result::Result<&Field<'a>, ParseError> {
        self.fields
            .get(idx)
            .ok_or_else(|| self.err(self.end_col, format!("missing {what}")))
    }

    fn number<T: std::str::FromStr>(&self, idx: usize, what: &str) -> std::result::Result<T, ParseError> {
        let f = self.field(idx, what)?;
        f.text
            .parse()
            .map_err(|_| self.err(f.col, format!("expected {what}, found {:?}", f.text)))
    }

    fn token(&self, idx: usize) -> std::result::Result<Token, ParseError> {
        let f = &self.fields[idx];
        Token::new(f.text).map_err(|e| self.err(f.col, e.to_string()))
    }

    fn expect_len(&self, len: usize) -> std::result::Result<(), ParseError> {
        match self.fields.get(len) {
            Some(extra) => Err(self.err(extra.col, format!("unexpected field {:?}", extra.text))),
            None => Ok(()),
        }
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let mut fields = Vec::new();
        let mut start = None;
        for (col, (byte, ch)) in raw.char_indices().enumerate() {
            if ch.is_whitespace() {
                if let Some((s, c)) = start.take() {
                    fields.push(Field { text: &raw[s..byte], col: c });
                }
            } else if start.is_none() {
                start = Some((byte, col + 1));
            }
        }
        if let Some((s, c)) = start {
            fields.push(Field { text: &raw[s..], col: c });
        }
        if !fields.is_empty() {
            out.push(Line {
                number: i + 1,
                fields,
                end_col: raw.chars().count() + 1,
            });
        }
    }
    out
}

fn keyword(line: &Line<'_>, expected: &str) -> std::result::Result<(), ParseError> {
    if line.fields[0].text == expected {
        Ok(())
    } else {
        Err(line.err(1, format!("expected `{expected}`, found {:?}", line.fields[0].text)))
    }
}

fn eof(what: &str, text: &str) -> ParseError {
    ParseError {
        line: text.lines().count() + 1,
        col: 1,
        msg: format!("unexpected end of input, expected {what}"),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let lines = lines(text);
    let mut it = lines.iter();
    let head = it.next().ok_or_else(|| eof("`grid`", text))?;
    keyword(head, "grid")?;
    let rows: usize = head.number(1, "row count")?;
    let cols: usize = head.number(2, "column count")?;
    head.expect_len(3)?;
    let grid = Grid::new(rows, cols).map_err(|e| head.err(1, e.to_string()))?;

    let alpha = it.next().ok_or_else(|| eof("`alphabet`", text))?;
    keyword(alpha, "alphabet")?;
    let alphabet = (1..alpha.fields.len())
        .map(|i| alpha.token(i))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let mut probes: Vec<Option<Probe>> = vec![None; grid.size()];
    let mut last = alpha;
    for line in it {
        keyword(line, "probe")?;
        let id: usize = line.number(1, "probe id")?;
        if id >= grid.size() {
            return Err(line
                .err(line.fields[1].col, format!("probe id {id} out of range for {} cells", grid.size()))
                .into());
        }
        if probes[id].is_some() {
            return Err(line.err(line.fields[1].col, format!("duplicate probe id {id}")).into());
        }
        let seq = (2..line.fields.len())
            .map(|i| line.token(i))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        probes[id] = Some(Probe::new(id, seq));
        last = line;
    }
    let probes = probes
        .into_iter()
        .enumerate()
        .map(|(id, p)| p.ok_or_else(|| last.err(last.end_col, format!("missing probe {id}"))))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Instance::new(grid, alphabet, probes).map_err(|e| last.err(1, e.to_string()).into())
}

fn push_tokens(out: &mut String, head: &str, toks: impl IntoIterator<Item = impl std::fmt::Display>) {
    out.push_str(head);
    for t in toks {
        let _ = write!(out, " {t}");
    }
    out.push('\n');
}

pub fn emit_instance(instance: &Instance) -> String {
    let mut out = format!("grid {} {}\n", instance.grid.rows, instance.grid.cols);
    push_tokens(&mut out, "alphabet", &instance.alphabet);
    for p in &instance.probes {
        push_tokens(&mut out, &format!("probe {}", p.id), &p.seq);
    }
    out
}

/// A parsed solution file; the cost line is optional on input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionFile {
    pub placement: Placement,
    pub schedule: DepositionSchedule,
    pub cost: Option<u64>,
}

impl SolutionFile {
    /// Uses the claimed cost when present, otherwise computes it.
    pub fn into_solution(self, grid: Grid) -> Result<Solution> {
        match self.cost {
            Some(cost) => Ok(Solution {
                placement: self.placement,
                schedule: self.schedule,
                cost,
            }),
            None => Solution::new(self.placement, self.schedule, grid),
        }
    }
}

pub fn parse_solution(text: &str) -> Result<SolutionFile> {
    let lines = lines(text);
    let mut it = lines.iter().peekable();
    let head = it.next().ok_or_else(|| eof("`deposition`", text))?;
    keyword(head, "deposition")?;
    let deposition = (1..head.fields.len())
        .map(|i| head.token(i))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let mut places: Vec<Option<((usize, usize), Vec<bool>)>> = Vec::new();
    let mut cost = None;
    let mut last = head;
    for line in it {
        last = line;
        match line.fields[0].text {
            "place" if cost.is_none() => {
                let id: usize = line.number(1, "probe id")?;
                let row: usize = line.number(2, "row")?;
                let col: usize = line.number(3, "column")?;
                let bits = match line.fields.get(4) {
                    Some(f) => f
                        .text
                        .chars()
                        .enumerate()
                        .map(|(k, ch)| match ch {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(line.err(f.col + k, format!("bit must be 0 or 1, found {ch:?}"))),
                        })
                        .collect::<std::result::Result<Vec<_>, _>>()?,
                    None => Vec::new(),
                };
                line.expect_len(5)?;
                if bits.len() != deposition.len() {
                    let col = line.fields.get(4).map_or(line.end_col, |f| f.col);
                    return Err(line
                        .err(col, format!("bitstring has length {}, deposition has {}", bits.len(), deposition.len()))
                        .into());
                }
                if places.len() <= id {
                    places.resize(id + 1, None);
                }
                if places[id].is_some() {
                    return Err(line.err(line.fields[1].col, format!("duplicate probe id {id}")).into());
                }
                places[id] = Some(((row, col), bits));
            }
            "cost" if cost.is_none() => {
                cost = Some(line.number::<u64>(1, "cost")?);
                line.expect_len(2)?;
            }
            other => {
                return Err(line.err(1, format!("unexpected line starting with {other:?}")).into());
            }
        }
    }
    let mut cell_of = Vec::with_capacity(places.len());
    let mut embed = Vec::with_capacity(places.len());
    for (id, p) in places.into_iter().enumerate() {
        let (cell, bits) = p.ok_or_else(|| last.err(1, format!("missing placement for probe {id}")))?;
        cell_of.push(cell);
        embed.push(bits);
    }
    Ok(SolutionFile {
        placement: Placement::new(cell_of),
        schedule: DepositionSchedule::new(deposition, embed),
        cost,
    })
}

pub fn emit_solution(solution: &Solution) -> String {
    let mut out = String::new();
    push_tokens(&mut out, "deposition", &solution.schedule.deposition);
    for (id, (&(r, c), bits)) in solution
        .placement
        .cell_of
        .iter()
        .zip(&solution.schedule.embed)
        .enumerate()
    {
        let _ = write!(out, "place {id} {r} {c}");
        if !bits.is_empty() {
            out.push(' ');
            out.extend(bits.iter().map(|&b| if b { '1' } else { '0' }));
        }
        out.push('\n');
    }
    let _ = writeln!(out, "cost {}", solution.cost);
    out
}

/// Self-loops and repeated edges are rejected.
pub fn parse_graph(text: &str) -> Result<GraphInput> {
    let lines = lines(text);
    let mut it = lines.iter();
    let head = it.next().ok_or_else(|| eof("`n m` header", text))?;
    let n: usize = head.number(0, "vertex count")?;
    let m: usize = head.number(1, "edge count")?;
    head.expect_len(2)?;
    let mut edges = Vec::with_capacity(m);
    let mut last = head;
    for line in it {
        last = line;
        let i: usize = line.number(0, "vertex")?;
        let j: usize = line.number(1, "vertex")?;
        line.expect_len(2)?;
        for (v, f) in [(i, &line.fields[0]), (j, &line.fields[1])] {
            if v == 0 || v > n {
                return Err(line.err(f.col, format!("vertex {v} out of range 1..={n}")).into());
            }
        }
        if i == j {
            return Err(line.err(1, format!("self-loop on vertex {i}")).into());
        }
        let e = (i.min(j), i.max(j));
        if edges.contains(&e) {
            return Err(line.err(1, format!("repeated edge {} {}", e.0, e.1)).into());
        }
        edges.push(e);
    }
    if edges.len() != m {
        return Err(last.err(1, format!("header announces {m} edges, found {}", edges.len())).into());
    }
    GraphInput::new(n, edges)
}

pub fn emit_graph(graph: &GraphInput) -> String {
    let mut out = format!("{} {}\n", graph.n, graph.edges.len());
    for (i, j) in &graph.edges {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}
