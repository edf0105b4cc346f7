//! Breadth-first enumeration of a mutation tree under a bound.
//!
//! Nodes stream out in deterministic order: by depth, then lexicographically
//! by word. Children of a node carry every label except the incoming one.
//! Pruning children whose maximal coordinate exceeds the bound is complete
//! for the default family: a point above the bound can only return below it
//! through its own parent, because away from the root the incoming direction
//! marks the unique maximal coordinate and every other mutation strictly
//! increases the maximum.

use crate::equation::{Equation, SolutionTuple};
use crate::error::{Error, Result};
use crate::word::MutationWord;
use rayon::prelude::*;
use rug::Integer;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;
use std::collections::VecDeque;
use std::io::Write;

/// A node of the mutation tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub point: SolutionTuple,
    pub word: MutationWord,
    pub depth: usize,
    pub incoming: Option<usize>,
}

impl Serialize for TreeNode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("depth", &self.depth)?;
        map.serialize_entry("word", self.word.labels())?;
        map.serialize_entry("incoming", &self.incoming)?;
        map.serialize_entry("point", &self.point)?;
        map.end()
    }
}

/// Enumeration bound: at least one of `max_depth` / `max_coordinate` must be
/// set. `max_bitlen` caps the bit length of produced coordinates and turns
/// runaway growth into an error rather than an allocation failure.
#[derive(Clone, Debug)]
pub struct EnumerationBound {
    pub max_depth: Option<usize>,
    pub max_coordinate: Option<Integer>,
    pub max_bitlen: u32,
}

impl EnumerationBound {
    pub fn depth(max_depth: usize) -> Self {
        EnumerationBound {
            max_depth: Some(max_depth),
            max_coordinate: None,
            max_bitlen: 1 << 20,
        }
    }

    pub fn coordinate(max_coordinate: impl Into<Integer>) -> Self {
        EnumerationBound {
            max_depth: None,
            max_coordinate: Some(max_coordinate.into()),
            max_bitlen: 1 << 20,
        }
    }

    pub fn with_bitlen(mut self, max_bitlen: u32) -> Self {
        self.max_bitlen = max_bitlen;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_depth.is_none() && self.max_coordinate.is_none() {
            return Err(Error::InvalidArgument {
                reason: "enumeration bound needs max_depth or max_coordinate".into(),
            });
        }
        Ok(())
    }

    fn admits(&self, point: &SolutionTuple) -> bool {
        match &self.max_coordinate {
            Some(cap) => point.max_coord() <= cap,
            None => true,
        }
    }
}

/// Streaming breadth-first expansion. Yields `Result<TreeNode>`; after the
/// first error the stream ends. Frontier levels can be expanded in parallel
/// without changing the emission order.
pub struct TreeExpansion<'a> {
    eq: &'a Equation,
    bound: EnumerationBound,
    parallel: bool,
    buffer: VecDeque<TreeNode>,
    frontier: Vec<TreeNode>,
    depth: usize,
    failed: bool,
    duplicate_count: usize,
    seen: BTreeSet<SolutionTuple>,
    track_duplicates: bool,
}

impl<'a> TreeExpansion<'a> {
    /// Expands outgoing branches of one node, skipping the incoming label and
    /// pruning children above the coordinate bound. A `DeadEnd` (extended
    /// family only) makes the branch a leaf.
    fn children(
        eq: &Equation,
        bound: &EnumerationBound,
        node: &TreeNode,
    ) -> Result<Vec<TreeNode>> {
        let mut out = Vec::with_capacity(eq.n());
        for dir in 1..=eq.n() {
            if node.incoming == Some(dir) {
                continue;
            }
            let point = match eq.mutate_unchecked(&node.point, dir) {
                Ok(p) => p,
                Err(Error::DeadEnd { .. }) if !eq.is_default_family() => continue,
                Err(e) => return Err(e),
            };
            let bits = point.coords()[dir - 1].significant_bits();
            if bits > bound.max_bitlen {
                return Err(Error::ResourceLimit {
                    what: "coordinate bits",
                    got: bits as u64,
                    cap: bound.max_bitlen as u64,
                });
            }
            if !bound.admits(&point) {
                continue;
            }
            let mut labels = node.word.labels().to_vec();
            labels.push(dir);
            out.push(TreeNode {
                point,
                word: MutationWord::new(labels).expect("child label differs from incoming"),
                depth: node.depth + 1,
                incoming: Some(dir),
            });
        }
        Ok(out)
    }

    fn refill(&mut self) -> Result<()> {
        if self.frontier.is_empty() {
            return Ok(());
        }
        if let Some(cap) = self.bound.max_depth {
            if self.depth >= cap {
                self.frontier.clear();
                return Ok(());
            }
        }
        let eq = self.eq;
        let bound = &self.bound;
        let next: Result<Vec<Vec<TreeNode>>> = if self.parallel {
            self.frontier
                .par_iter()
                .map(|node| Self::children(eq, bound, node))
                .collect()
        } else {
            self.frontier
                .iter()
                .map(|node| Self::children(eq, bound, node))
                .collect()
        };
        let mut level: Vec<TreeNode> = next?.into_iter().flatten().collect();
        self.depth += 1;
        if self.track_duplicates {
            for node in &level {
                if !self.seen.insert(node.point.clone()) {
                    self.duplicate_count += 1;
                }
            }
        }
        self.buffer.extend(level.iter().cloned());
        self.frontier = std::mem::take(&mut level);
        Ok(())
    }

    /// Number of repeated points seen so far (only when tracking is on).
    pub fn duplicate_count(&self) -> usize {
        self.duplicate_count
    }

    /// Collects the remaining stream into a vector.
    pub fn collect_nodes(self) -> Result<Vec<TreeNode>> {
        let mut out = Vec::new();
        for node in self {
            out.push(node?);
        }
        Ok(out)
    }
}

impl Iterator for TreeExpansion<'_> {
    type Item = Result<TreeNode>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        if self.buffer.is_empty() {
            if let Err(e) = self.refill() {
                self.failed = true;
                return Some(Err(e));
            }
        }
        self.buffer.pop_front().map(Ok)
    }
}

/// Starts a breadth-first expansion from `root` (validated as a solution).
pub fn expand_tree<'a>(
    eq: &'a Equation,
    root: &SolutionTuple,
    bound: EnumerationBound,
) -> Result<TreeExpansion<'a>> {
    expand_tree_with(eq, root, bound, false)
}

/// Same as [`expand_tree`], with optional parallel frontier expansion.
/// Emission order is canonical regardless of the flag.
pub fn expand_tree_with<'a>(
    eq: &'a Equation,
    root: &SolutionTuple,
    bound: EnumerationBound,
    parallel: bool,
) -> Result<TreeExpansion<'a>> {
    bound.validate()?;
    let residual = eq.residual(root)?;
    if residual.cmp0() != std::cmp::Ordering::Equal {
        return Err(Error::NotASolution { residual });
    }
    let root_node = TreeNode {
        point: root.clone(),
        word: MutationWord::empty(),
        depth: 0,
        incoming: None,
    };
    let mut buffer = VecDeque::new();
    let mut frontier = Vec::new();
    let mut seen = BTreeSet::new();
    if bound.admits(root) {
        buffer.push_back(root_node.clone());
        frontier.push(root_node);
        seen.insert(root.clone());
    }
    Ok(TreeExpansion {
        eq,
        bound,
        parallel,
        buffer,
        frontier,
        depth: 0,
        failed: false,
        duplicate_count: 0,
        seen,
        track_duplicates: true,
    })
}

/// Every solution of the default family whose maximal coordinate is at most
/// `bound`, as distinct ordered tuples. Implemented by pruned BFS from the
/// all-ones root; completeness follows from the descent lemma.
pub fn solutions_upto(
    eq: &Equation,
    bound: &Integer,
    max_bitlen: u32,
) -> Result<BTreeSet<SolutionTuple>> {
    if !eq.is_default_family() {
        return Err(Error::InvalidArgument {
            reason: "solutions_upto requires the default family (a = n, b = 0)".into(),
        });
    }
    if *bound < 1u32 {
        return Err(Error::InvalidArgument {
            reason: "bound must be at least 1".into(),
        });
    }
    let root = SolutionTuple::ones(eq.n());
    let enumeration = expand_tree(
        eq,
        &root,
        EnumerationBound::coordinate(bound.clone()).with_bitlen(max_bitlen),
    )?;
    let mut out = BTreeSet::new();
    for node in enumeration {
        out.insert(node?.point);
    }
    Ok(out)
}

/// Exhaustive reference enumeration: scans every tuple with coordinates in
/// `1..=bound` and keeps the solutions. Exponential in `n`; intended for
/// small bounds and for differential testing against [`solutions_upto`].
pub fn brute_force_solutions(eq: &Equation, bound: u64) -> Result<BTreeSet<SolutionTuple>> {
    if bound == 0 {
        return Err(Error::InvalidArgument {
            reason: "bound must be at least 1".into(),
        });
    }
    let n = eq.n();
    let total = (bound as f64).powi(n as i32);
    if total > 2e9 {
        return Err(Error::ResourceLimit {
            what: "brute-force tuples",
            got: total as u64,
            cap: 2_000_000_000,
        });
    }
    let mut out = BTreeSet::new();
    let mut odometer = vec![1u64; n];
    loop {
        let candidate = SolutionTuple::from_u64s(&odometer)?;
        if eq.residual(&candidate)?.cmp0() == std::cmp::Ordering::Equal {
            out.insert(candidate);
        }
        // advance
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if odometer[pos] < bound {
                odometer[pos] += 1;
                for slot in odometer.iter_mut().skip(pos + 1) {
                    *slot = 1;
                }
                break;
            }
        }
    }
}

/// DOT export of a node stream. Node identity comes from the word path, so
/// the writer needs no lookahead and the output is deterministic.
pub fn write_dot<W: Write>(mut out: W, nodes: &[TreeNode]) -> std::io::Result<()> {
    writeln!(out, "digraph mutation_tree {{")?;
    writeln!(out, "  node [shape=box];")?;
    for node in nodes {
        let id = dot_id(&node.word);
        writeln!(out, "  {id} [label=\"{}\"];", node.point)?;
        if let Some(dir) = node.incoming {
            let parent = node.word.prefix(node.word.len() - 1);
            writeln!(out, "  {} -> {id} [label=\"{dir}\"];", dot_id(&parent))?;
        }
    }
    writeln!(out, "}}")
}

fn dot_id(word: &MutationWord) -> String {
    if word.is_empty() {
        "n".to_string()
    } else {
        let parts: Vec<String> = word.labels().iter().map(|w| w.to_string()).collect();
        format!("n_{}", parts.join("_"))
    }
}

/// JSON-lines export: one node object per line.
pub fn write_jsonl<W: Write>(mut out: W, nodes: &[TreeNode]) -> std::io::Result<()> {
    for node in nodes {
        let line = serde_json::to_string(node).map_err(std::io::Error::other)?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// CSV export: `depth,word,x1..xn` with coordinates as decimal strings and
/// the word dash-joined.
pub fn write_csv<W: Write>(mut out: W, n: usize, nodes: &[TreeNode]) -> std::io::Result<()> {
    let header: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
    writeln!(out, "depth,word,{}", header.join(","))?;
    for node in nodes {
        let word: Vec<String> = node.word.labels().iter().map(|w| w.to_string()).collect();
        writeln!(
            out,
            "{},{},{}",
            node.depth,
            word.join("-"),
            node.point.decimal_strings().join(",")
        )?;
    }
    Ok(())
}
