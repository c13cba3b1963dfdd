//! Randomized embedding of the probe metric into a dominating hierarchically
//! separated tree (Fakcharoenphol–Rao–Talwar decomposition).
//!
//! A cluster at level `i` lies within radius `β·2^(i-1)` of its center, so its
//! diameter is below `2^(i+1)`. Children hang from their level-`i` parent by
//! edges of length `2^i`; two points first separated below a level-`i` cluster
//! are therefore at tree distance `≥ 2^(i+1)`, which dominates their metric
//! distance. Points at metric distance zero are collapsed before the
//! decomposition and re-expanded as zero-length sibling leaves.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lcs::MetricSpace;
use crate::rng::rng_from;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HstNode {
    pub parent: Option<usize>,
    /// Sorted by `label`.
    pub children: Vec<usize>,
    /// Length of the edge to the parent (0 at the root).
    pub edge_len: u64,
    /// Decomposition level; leaves of collapsed zero-distance groups sit at -1.
    pub level: i32,
    /// Probe id for leaves.
    pub leaf: Option<usize>,
    /// Smallest probe id in the subtree.
    pub label: usize,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HstTree {
    pub nodes: Vec<HstNode>,
    pub root: usize,
    leaf_of: Vec<usize>,
}

impl HstTree {
    pub fn leaf_count(&self) -> usize {
        self.leaf_of.len()
    }

    /// Node holding probe `id`.
    pub fn leaf_node(&self, id: usize) -> Option<usize> {
        self.leaf_of.get(id).copied()
    }

    /// Edges are named by their lower endpoint; every non-root node is one.
    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(move |&v| v != self.root)
    }

    /// Probe ids below `node`, in Euler order.
    pub fn leaves_under(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(v) = stack.pop() {
            if let Some(id) = self.nodes[v].leaf {
                out.push(id);
            }
            stack.extend(self.nodes[v].children.iter().rev());
        }
        out
    }

    /// Builds a tree from parent links; used for hand-made trees in tests and tools.
    ///
    /// `leaves[i]` is the node of probe `i`; leaf nodes must have no children.
    pub fn from_parents(parents: &[Option<usize>], edge_len: &[u64], leaves: &[usize]) -> Result<Self> {
        let roots: Vec<usize> = (0..parents.len()).filter(|&v| parents[v].is_none()).collect();
        if roots.len() != 1 || edge_len.len() != parents.len() {
            return Err(Error::InvalidParameter("tree needs exactly one root".into()));
        }
        let mut nodes: Vec<HstNode> = (0..parents.len())
            .map(|v| HstNode {
                parent: parents[v],
                children: Vec::new(),
                edge_len: if parents[v].is_some() { edge_len[v] } else { 0 },
                level: 0,
                leaf: None,
                label: usize::MAX,
                depth: 0,
            })
            .collect();
        for v in 0..parents.len() {
            if let Some(p) = parents[v] {
                if p >= nodes.len() {
                    return Err(Error::InvalidParameter(format!("bad parent {p}")));
                }
                nodes[p].children.push(v);
            }
        }
        for (id, &v) in leaves.iter().enumerate() {
            if !nodes[v].children.is_empty() || nodes[v].leaf.is_some() {
                return Err(Error::InvalidParameter(format!("node {v} cannot hold probe {id}")));
            }
            nodes[v].leaf = Some(id);
        }
        let mut tree = HstTree {
            nodes,
            root: roots[0],
            leaf_of: leaves.to_vec(),
        };
        tree.finish()?;
        Ok(tree)
    }

    /// Fills labels and depths and sorts children; rejects cycles and unreachable nodes.
    fn finish(&mut self) -> Result<()> {
        let mut order = vec![self.root];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            let depth = self.nodes[v].depth + 1;
            for c in self.nodes[v].children.clone() {
                self.nodes[c].depth = depth;
                order.push(c);
            }
            i += 1;
            if order.len() > self.nodes.len() {
                return Err(Error::InvalidParameter("parent links contain a cycle".into()));
            }
        }
        if order.len() != self.nodes.len() {
            return Err(Error::InvalidParameter("tree is not connected".into()));
        }
        for &v in order.iter().rev() {
            let own = self.nodes[v].leaf.unwrap_or(usize::MAX);
            let label = self.nodes[v]
                .children
                .iter()
                .map(|&c| self.nodes[c].label)
                .fold(own, usize::min);
            self.nodes[v].label = label;
        }
        for v in 0..self.nodes.len() {
            let mut children = std::mem::take(&mut self.nodes[v].children);
            children.sort_by_key(|&c| self.nodes[c].label);
            self.nodes[v].children = children;
        }
        Ok(())
    }

    /// Path from a node up to (excluding) the root, as edge names.
    fn path_to_root(&self, mut v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some(p) = self.nodes[v].parent {
            out.push(v);
            v = p;
        }
        out
    }

    /// Edges on the unique path between two nodes.
    pub fn path_edges(&self, mut a: usize, mut b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while self.nodes[a].depth > self.nodes[b].depth {
            out.push(a);
            a = self.nodes[a].parent.expect("deeper node has a parent");
        }
        while self.nodes[b].depth > self.nodes[a].depth {
            out.push(b);
            b = self.nodes[b].parent.expect("deeper node has a parent");
        }
        while a != b {
            out.push(a);
            out.push(b);
            a = self.nodes[a].parent.expect("distinct nodes below root");
            b = self.nodes[b].parent.expect("distinct nodes below root");
        }
        out
    }

    /// Structural fingerprint used as provenance for placements.
    pub fn digest(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    pub fn depth_of_leaf(&self, id: usize) -> usize {
        self.path_to_root(self.leaf_of[id]).len()
    }
}

/// Length of the unique tree path between the leaves of probes `i` and `j`.
pub fn tree_distance(tree: &HstTree, i: usize, j: usize) -> Result<u64> {
    let a = tree.leaf_node(i).ok_or(Error::UnknownProbe(i))?;
    let b = tree.leaf_node(j).ok_or(Error::UnknownProbe(j))?;
    Ok(tree.path_edges(a, b).iter().map(|&e| tree.nodes[e].edge_len).sum())
}

struct Builder<'a> {
    metric: &'a MetricSpace,
    beta: f64,
    /// Cluster centers in random order.
    centers: Vec<usize>,
    /// Members of each representative's zero-distance group.
    groups: Vec<Vec<usize>>,
    nodes: Vec<HstNode>,
    leaf_of: Vec<usize>,
}

impl Builder<'_> {
    fn push(&mut self, parent: Option<usize>, edge_len: u64, level: i32) -> usize {
        let depth = parent.map_or(0, |p| self.nodes[p].depth + 1);
        self.nodes.push(HstNode {
            parent,
            children: Vec::new(),
            edge_len: if parent.is_some() { edge_len } else { 0 },
            level,
            leaf: None,
            label: usize::MAX,
            depth,
        });
        let v = self.nodes.len() - 1;
        if let Some(p) = parent {
            self.nodes[p].children.push(v);
        }
        v
    }

    /// Partitions `members` (a level-`level` cluster) into level-`level-1` clusters.
    fn split(&self, members: &[usize], level: i32) -> Vec<Vec<usize>> {
        let radius = self.beta * 2f64.powi(level - 2);
        let mut parts: Vec<(usize, Vec<usize>)> = Vec::new();
        for &v in members {
            let rank = self
                .centers
                .iter()
                .position(|&u| self.metric.dist(u, v) as f64 <= radius)
                .expect("every point is its own center");
            match parts.iter_mut().find(|(r, _)| *r == rank) {
                Some((_, part)) => part.push(v),
                None => parts.push((rank, vec![v])),
            }
        }
        parts.sort_by_key(|(rank, _)| *rank);
        parts.into_iter().map(|(_, p)| p).collect()
    }

    /// Builds the subtree of a level-`level` cluster hanging below `parent`.
    fn build(&mut self, parent: Option<usize>, mut edge_len: u64, members: Vec<usize>, mut level: i32) {
        let mut members = members;
        // single-child chains are compressed into one edge
        while members.len() > 1 || level > 0 {
            if members.len() == 1 {
                // the lone point descends to level 0 through edges 2^level, ..., 2^1
                edge_len += (2u64 << level) - 2;
                level = 0;
                break;
            }
            let parts = self.split(&members, level);
            if parts.len() > 1 {
                let v = self.push(parent, edge_len, level);
                let child_len = 1u64 << level;
                for part in parts {
                    self.build(Some(v), child_len, part, level - 1);
                }
                return;
            }
            edge_len += 1u64 << level;
            members = parts.into_iter().next().expect("non-empty partition");
            level -= 1;
        }
        let rep = members[0];
        let group = self.groups[rep].clone();
        let v = self.push(parent, edge_len, level);
        if group.len() == 1 {
            self.nodes[v].leaf = Some(rep);
            self.leaf_of[rep] = v;
        } else {
            for id in group {
                let leaf = self.push(Some(v), 0, -1);
                self.nodes[leaf].leaf = Some(id);
                self.leaf_of[id] = leaf;
            }
        }
    }
}

/// Samples one dominating tree; deterministic for a fixed `(metric, seed)`.
pub fn frt_embed(metric: &MetricSpace, seed: u64) -> Result<HstTree> {
    let n = metric.n();
    if n == 0 {
        return Err(Error::EmptyMetric);
    }
    let mut groups = vec![Vec::new(); n];
    let mut reps = Vec::new();
    let mut rep_of = vec![usize::MAX; n];
    for v in 0..n {
        match reps.iter().find(|&&r| metric.dist(r, v) == 0) {
            Some(&r) => {
                rep_of[v] = r;
                groups[r].push(v);
            }
            None => {
                reps.push(v);
                rep_of[v] = v;
                groups[v].push(v);
            }
        }
    }
    let mut rng = rng_from(seed);
    let beta: f64 = rng.gen_range(1.0..2.0);
    let mut centers = reps.clone();
    centers.shuffle(&mut rng);

    let diameter = reps
        .iter()
        .flat_map(|&a| reps.iter().map(move |&b| (a, b)))
        .map(|(a, b)| metric.dist(a, b))
        .max()
        .unwrap_or(0);
    let mut top = 0i32;
    while diameter > 0 && (top == 0 || 1u64 << (top - 1) < diameter) {
        top += 1;
    }

    let mut builder = Builder {
        metric,
        beta,
        centers,
        groups,
        nodes: Vec::new(),
        leaf_of: vec![usize::MAX; n],
    };
    builder.build(None, 0, reps, top);
    let mut tree = HstTree {
        root: 0,
        nodes: builder.nodes,
        leaf_of: builder.leaf_of,
    };
    tree.finish()?;
    Ok(tree)
}
