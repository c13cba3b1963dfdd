//! One-row to square-grid lift: the given probes are padded with fresh tokens
//! to a common length `k = 4n²ℓ + 1`, and `n² - n` single-token dummies fill
//! the rest of an `n × n` array. Padding shares only with the outer boundary,
//! so optimal placements keep the given probes on one boundary row.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{Grid, Instance, Probe, Token};
use crate::reductions::fresh_token;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedInstance {
    pub instance: Instance,
    pub k: usize,
    /// Padding token of each given probe.
    pub padding: Vec<Token>,
    pub dummy: Token,
}

/// Given probes keep ids `0..n`; dummies take `n..n²`.
pub fn lift_1d_to_2d(instance: &Instance) -> Result<LiftedInstance> {
    if instance.grid.rows != 1 {
        return Err(Error::InvalidParameter("one-row instance required".into()));
    }
    let n = instance.n();
    let l = instance.probes.iter().map(Probe::len).max().unwrap_or(0);
    let k = 4 * n * n * l + 1;
    let mut taken: BTreeSet<Token> = instance.alphabet.iter().cloned().collect();
    let mut padding = Vec::with_capacity(n);
    for i in 0..n {
        let t = fresh_token(&format!("x{}", i + 1), &taken);
        taken.insert(t.clone());
        padding.push(t);
    }
    let dummy = fresh_token("$", &taken);

    let mut probes: Vec<Probe> = instance
        .probes
        .iter()
        .map(|p| {
            let mut seq = vec![padding[p.id].clone(); k - p.len()];
            seq.extend(p.seq.iter().cloned());
            Probe::new(p.id, seq)
        })
        .collect();
    for id in n..n * n {
        probes.push(Probe::new(id, vec![dummy.clone()]));
    }
    let mut alphabet = instance.alphabet.clone();
    alphabet.extend(padding.iter().cloned());
    if n > 1 {
        alphabet.push(dummy.clone());
    }
    Ok(LiftedInstance {
        instance: Instance::new(Grid::new(n, n)?, alphabet, probes)?,
        k,
        padding,
        dummy,
    })
}
