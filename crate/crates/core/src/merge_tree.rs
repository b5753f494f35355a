//! Chiral merge trees: full binary trees whose children are designated left
//! or right, their path words, and the sublevel-connected order on nodes.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Chirality {
    L,
    R,
}

impl Chirality {
    pub fn as_char(self) -> char {
        match self {
            Chirality::L => 'L',
            Chirality::R => 'R',
        }
    }
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// User-facing node label. Carries no meaning beyond identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Unvalidated recursive form of a merge tree; this is also the JSON shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMergeNode {
    pub id: NodeId,
    pub chirality: Chirality,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<RawMergeNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TreeViolation {
    #[error("non-full node {id}: {children} children")]
    NonFullNode { id: NodeId, children: usize },
    #[error("chirality mismatch at node {id}: expected {expected}")]
    ChiralityMismatch { id: NodeId, expected: Chirality },
    #[error("even node count {0}")]
    EvenNodeCount(usize),
    #[error("duplicate node id {0}")]
    DuplicateId(NodeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MergeTreeError {
    #[error("invalid merge tree: {}", join_violations(.0))]
    Invalid(Vec<TreeViolation>),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("cannot parse merge tree notation at byte {0}")]
    Notation(usize),
}

fn join_violations(v: &[TreeViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Checks every structural invariant and reports all violations found.
pub fn validate_merge_tree(root: &RawMergeNode) -> Result<(), Vec<TreeViolation>> {
    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    let mut count = 0usize;
    if root.chirality != Chirality::L {
        violations.push(TreeViolation::ChiralityMismatch {
            id: root.id,
            expected: Chirality::L,
        });
    }
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        count += 1;
        if !seen.insert(node.id) {
            violations.push(TreeViolation::DuplicateId(node.id));
        }
        match node.children.as_slice() {
            [] => {}
            [left, right] => {
                for (child, expected) in [(left, Chirality::L), (right, Chirality::R)] {
                    if child.chirality != expected {
                        violations.push(TreeViolation::ChiralityMismatch {
                            id: child.id,
                            expected,
                        });
                    }
                }
            }
            other => violations.push(TreeViolation::NonFullNode {
                id: node.id,
                children: other.len(),
            }),
        }
        stack.extend(node.children.iter().rev());
    }
    if count.is_multiple_of(2) {
        violations.push(TreeViolation::EvenNodeCount(count));
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Chirality string along the root-to-node path, the node's own letter included.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathWord(Vec<Chirality>);

impl PathWord {
    pub fn letters(&self) -> &[Chirality] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Compares two path words under the sublevel-connected order.
///
/// Below the deepest shared letter, a shared `L` sends the `L` branch first
/// and a shared `R` sends the `R` branch first; an ancestor comes after all
/// of its descendants.
pub fn compare_path_words(a: &PathWord, b: &PathWord) -> Ordering {
    let common = a.0.iter().zip(&b.0).take_while(|(x, y)| x == y).count();
    match (a.0.get(common), b.0.get(common)) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(&next_a), Some(_)) => {
            // Both words start with the root's L, so `common >= 1`.
            let shared = a.0[common - 1];
            if next_a == shared {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Node {
    id: NodeId,
    chirality: Chirality,
    children: Option<[usize; 2]>,
    parent: Option<usize>,
}

/// A validated full binary tree with chiralities. Nodes live in an arena and
/// are addressed by index (`usize`) internally; [`NodeId`]s are labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiralMergeTree {
    nodes: Vec<Node>,
    root: usize,
}

impl ChiralMergeTree {
    pub fn from_raw(raw: &RawMergeNode) -> Result<ChiralMergeTree, MergeTreeError> {
        validate_merge_tree(raw).map_err(MergeTreeError::Invalid)?;
        let mut nodes = Vec::new();
        let mut stack: Vec<(&RawMergeNode, Option<usize>, usize)> = vec![(raw, None, 0)];
        while let Some((node, parent, slot)) = stack.pop() {
            let idx = nodes.len();
            nodes.push(Node {
                id: node.id,
                chirality: node.chirality,
                children: None,
                parent,
            });
            if let Some(p) = parent {
                let children = nodes[p].children.get_or_insert([usize::MAX; 2]);
                children[slot] = idx;
            }
            if let [left, right] = node.children.as_slice() {
                stack.push((right, Some(idx), 1));
                stack.push((left, Some(idx), 0));
            }
        }
        Ok(ChiralMergeTree { nodes, root: 0 })
    }

    pub fn to_raw(&self) -> RawMergeNode {
        self.raw_at(self.root)
    }

    fn raw_at(&self, idx: usize) -> RawMergeNode {
        let node = &self.nodes[idx];
        RawMergeNode {
            id: node.id,
            chirality: node.chirality,
            children: match node.children {
                Some([l, r]) => vec![self.raw_at(l), self.raw_at(r)],
                None => Vec::new(),
            },
        }
    }

    pub fn leaf(id: NodeId) -> ChiralMergeTree {
        ChiralMergeTree {
            nodes: vec![Node {
                id,
                chirality: Chirality::L,
                children: None,
                parent: None,
            }],
            root: 0,
        }
    }

    /// A new root `id` with `left` and `right` as its subtrees.
    pub fn join(
        id: NodeId,
        left: ChiralMergeTree,
        right: ChiralMergeTree,
    ) -> Result<ChiralMergeTree, MergeTreeError> {
        let mut l = left.to_raw();
        let mut r = right.to_raw();
        l.chirality = Chirality::L;
        r.chirality = Chirality::R;
        ChiralMergeTree::from_raw(&RawMergeNode {
            id,
            chirality: Chirality::L,
            children: vec![l, r],
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn id(&self, idx: usize) -> NodeId {
        self.nodes[idx].id
    }

    pub fn chirality(&self, idx: usize) -> Chirality {
        self.nodes[idx].chirality
    }

    /// `(left, right)` for inner nodes.
    pub fn children(&self, idx: usize) -> Option<(usize, usize)> {
        self.nodes[idx].children.map(|[l, r]| (l, r))
    }

    pub fn parent(&self, idx: usize) -> Option<usize> {
        self.nodes[idx].parent
    }

    pub fn is_leaf(&self, idx: usize) -> bool {
        self.nodes[idx].children.is_none()
    }

    pub fn find(&self, id: NodeId) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn node_indices(&self) -> std::ops::Range<usize> {
        0..self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.children.is_none()).count()
    }

    pub fn inner_count(&self) -> usize {
        self.nodes.len() - self.leaf_count()
    }

    pub fn depth(&self, idx: usize) -> usize {
        let mut depth = 0;
        let mut cur = idx;
        while let Some(p) = self.nodes[cur].parent {
            depth += 1;
            cur = p;
        }
        depth
    }

    pub fn path_word(&self, idx: usize) -> PathWord {
        let mut letters = vec![self.nodes[idx].chirality];
        let mut cur = idx;
        while let Some(p) = self.nodes[cur].parent {
            letters.push(self.nodes[p].chirality);
            cur = p;
        }
        letters.reverse();
        PathWord(letters)
    }

    pub fn path_word_of(&self, id: NodeId) -> Result<PathWord, MergeTreeError> {
        let idx = self.find(id).ok_or(MergeTreeError::UnknownNode(id))?;
        Ok(self.path_word(idx))
    }

    pub fn sublevel_compare(&self, a: usize, b: usize) -> Ordering {
        compare_path_words(&self.path_word(a), &self.path_word(b))
    }

    /// Labels every node by its rank in the sublevel-connected order.
    pub fn sublevel_order(&self) -> NodeOrder {
        let words: Vec<PathWord> = self.node_indices().map(|i| self.path_word(i)).collect();
        let mut sequence: Vec<usize> = self.node_indices().collect();
        sequence.sort_by(|&a, &b| compare_path_words(&words[a], &words[b]));
        NodeOrder::from_sequence(sequence).expect("sorting yields a permutation")
    }

    /// Id-free encoding of shape and chirality, e.g. `L(L,R(L,R))`.
    pub fn canonical_encoding(&self) -> String {
        let mut out = String::with_capacity(4 * self.nodes.len());
        self.encode_at(self.root, &mut out);
        out
    }

    fn encode_at(&self, idx: usize, out: &mut String) {
        out.push(self.nodes[idx].chirality.as_char());
        if let Some([l, r]) = self.nodes[idx].children {
            out.push('(');
            self.encode_at(l, out);
            out.push(',');
            self.encode_at(r, out);
            out.push(')');
        }
    }

    /// Inverse of [`ChiralMergeTree::canonical_encoding`]; ids are assigned
    /// in pre-order starting from 0.
    pub fn from_encoding(s: &str) -> Result<ChiralMergeTree, MergeTreeError> {
        fn go(
            b: &[u8],
            pos: &mut usize,
            next_id: &mut u64,
        ) -> Result<RawMergeNode, MergeTreeError> {
            let chirality = match b.get(*pos) {
                Some(b'L') => Chirality::L,
                Some(b'R') => Chirality::R,
                _ => return Err(MergeTreeError::Notation(*pos)),
            };
            *pos += 1;
            let id = NodeId(*next_id);
            *next_id += 1;
            let mut children = Vec::new();
            if b.get(*pos) == Some(&b'(') {
                *pos += 1;
                children.push(go(b, pos, next_id)?);
                if b.get(*pos) != Some(&b',') {
                    return Err(MergeTreeError::Notation(*pos));
                }
                *pos += 1;
                children.push(go(b, pos, next_id)?);
                if b.get(*pos) != Some(&b')') {
                    return Err(MergeTreeError::Notation(*pos));
                }
                *pos += 1;
            }
            Ok(RawMergeNode {
                id,
                chirality,
                children,
            })
        }
        let bytes = s.as_bytes();
        let mut pos = 0;
        let raw = go(bytes, &mut pos, &mut 0)?;
        if pos != bytes.len() {
            return Err(MergeTreeError::Notation(pos));
        }
        ChiralMergeTree::from_raw(&raw)
    }

    /// Encoding of the underlying unordered rooted tree (children sorted).
    pub fn achiral_shape(&self) -> String {
        self.shape_at(self.root)
    }

    fn shape_at(&self, idx: usize) -> String {
        match self.nodes[idx].children {
            None => "*".to_string(),
            Some([l, r]) => {
                let mut parts = [self.shape_at(l), self.shape_at(r)];
                parts.sort();
                format!("({},{})", parts[0], parts[1])
            }
        }
    }

    /// Equality of shape and chirality, ignoring node ids.
    pub fn same_shape(&self, other: &ChiralMergeTree) -> bool {
        self.canonical_encoding() == other.canonical_encoding()
    }
}

/// Compact notation `id(left,right)` with chirality implied by position,
/// e.g. `2(0,1)`. Whitespace is ignored.
impl FromStr for ChiralMergeTree {
    type Err = MergeTreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes: Vec<(usize, u8)> = s
            .bytes()
            .enumerate()
            .filter(|(_, b)| !b.is_ascii_whitespace())
            .collect();
        let mut pos = 0;
        let raw = parse_compact(&bytes, &mut pos, Chirality::L)?;
        if pos != bytes.len() {
            return Err(MergeTreeError::Notation(bytes[pos].0));
        }
        ChiralMergeTree::from_raw(&raw)
    }
}

fn parse_compact(
    bytes: &[(usize, u8)],
    pos: &mut usize,
    chirality: Chirality,
) -> Result<RawMergeNode, MergeTreeError> {
    let at = |p: usize| bytes.get(p).map(|b| b.0).unwrap_or(usize::MAX);
    let start = *pos;
    let mut id: u64 = 0;
    while let Some(&(_, b)) = bytes.get(*pos).filter(|(_, b)| b.is_ascii_digit()) {
        id = id
            .checked_mul(10)
            .and_then(|x| x.checked_add(u64::from(b - b'0')))
            .ok_or(MergeTreeError::Notation(at(*pos)))?;
        *pos += 1;
    }
    if *pos == start {
        return Err(MergeTreeError::Notation(at(*pos)));
    }
    let mut children = Vec::new();
    if bytes.get(*pos).map(|b| b.1) == Some(b'(') {
        *pos += 1;
        children.push(parse_compact(bytes, pos, Chirality::L)?);
        if bytes.get(*pos).map(|b| b.1) != Some(b',') {
            return Err(MergeTreeError::Notation(at(*pos)));
        }
        *pos += 1;
        children.push(parse_compact(bytes, pos, Chirality::R)?);
        if bytes.get(*pos).map(|b| b.1) != Some(b')') {
            return Err(MergeTreeError::Notation(at(*pos)));
        }
        *pos += 1;
    }
    Ok(RawMergeNode {
        id: NodeId(id),
        chirality,
        children,
    })
}

impl fmt::Display for ChiralMergeTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &ChiralMergeTree, idx: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{}", t.nodes[idx].id)?;
            if let Some([l, r]) = t.nodes[idx].children {
                write!(f, "(")?;
                go(t, l, f)?;
                write!(f, ",")?;
                go(t, r, f)?;
                write!(f, ")")?;
            }
            Ok(())
        }
        go(self, self.root, f)
    }
}

/// A bijective labeling of tree nodes by positions `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeOrder {
    sequence: Vec<usize>,
    position: Vec<usize>,
}

impl NodeOrder {
    /// `sequence[p]` is the node index at position `p`. Returns `None`
    /// unless `sequence` is a permutation of `0..len`.
    pub fn from_sequence(sequence: Vec<usize>) -> Option<NodeOrder> {
        let mut position = vec![usize::MAX; sequence.len()];
        for (p, &idx) in sequence.iter().enumerate() {
            if idx >= sequence.len() || position[idx] != usize::MAX {
                return None;
            }
            position[idx] = p;
        }
        Some(NodeOrder { sequence, position })
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// Node index at position `p`.
    pub fn node_at(&self, p: usize) -> usize {
        self.sequence[p]
    }

    /// Position (label) of node index `idx`.
    pub fn label(&self, idx: usize) -> usize {
        self.position[idx]
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }
}
