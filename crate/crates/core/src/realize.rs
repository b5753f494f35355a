//! Realizing a chiral merge tree, optionally together with a homological
//! sequence, as a discrete Morse function on a path.
//!
//! The construction walks the nodes in a prescribed total order. A leaf at
//! step `j` becomes an isolated vertex `v_j` with value `j`. An inner node at
//! step `j` becomes an edge `e_j` with value `j` joining the path segments
//! realizing its two children. Segments are kept as left-to-right vertex
//! lists; the child that comes first in the sublevel order is placed on the
//! left, so the final segment lists the leaves in sublevel order.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{SimpleGraph, VertexId};
use crate::merge_tree::{ChiralMergeTree, Chirality, NodeId, NodeOrder};
use crate::morse::{is_consistent, Cell, DiscreteMorseFunction, HomologicalSequence, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("merge tree has {nodes} nodes but the sequence has {len} entries")]
    Inconsistent { nodes: usize, len: usize },
    #[error("{0} is not a valid homological sequence for a tree")]
    InvalidSequence(HomologicalSequence),
    #[error("no unchosen {kind} left at step {step}")]
    Exhausted { step: usize, kind: NodeKind },
    #[error("dominance fails at index {index}: sequence has {actual}, merge tree requires at least {required}")]
    Dominance {
        index: usize,
        actual: u32,
        required: u32,
    },
    #[error("infeasible merge at step {step}: a child of node {node} has not been realized")]
    InfeasibleMerge { step: usize, node: NodeId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Inner,
}

impl std::fmt::Display for NodeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NodeKind::Leaf => "leaf",
            NodeKind::Inner => "inner",
        })
    }
}

/// Sequence of component counts obtained by walking the sublevel order:
/// up at each leaf, down at each inner node.
pub fn j_sequence(tree: &ChiralMergeTree) -> HomologicalSequence {
    sequence_of_order(tree, &tree.sublevel_order())
}

fn sequence_of_order(tree: &ChiralMergeTree, order: &NodeOrder) -> HomologicalSequence {
    let mut entries = Vec::with_capacity(order.len());
    let mut count = 0u32;
    for &idx in order.sequence() {
        if tree.is_leaf(idx) {
            count += 1;
        } else {
            count -= 1;
        }
        entries.push(count);
    }
    HomologicalSequence(entries)
}

/// Interleaving of the sublevel-ordered leaves and inner nodes driven by
/// the up and down steps of a sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologicalOrder {
    pub order: NodeOrder,
    pub sequence: HomologicalSequence,
}

pub fn homological_order(
    tree: &ChiralMergeTree,
    b: &HomologicalSequence,
) -> Result<HomologicalOrder, RealizeError> {
    if !is_consistent(tree, b) {
        return Err(RealizeError::Inconsistent {
            nodes: tree.len(),
            len: b.len(),
        });
    }
    if !b.is_valid() {
        return Err(RealizeError::InvalidSequence(b.clone()));
    }
    let sublevel = tree.sublevel_order();
    let (leaves, inner): (Vec<usize>, Vec<usize>) =
        sublevel.sequence().iter().partition(|&&i| tree.is_leaf(i));
    let mut leaves = leaves.into_iter();
    let mut inner = inner.into_iter();
    let entries = b.entries();
    let mut sequence = Vec::with_capacity(tree.len());
    for step in 0..entries.len() {
        let (next, kind) = if step == 0 || entries[step] > entries[step - 1] {
            (leaves.next(), NodeKind::Leaf)
        } else {
            (inner.next(), NodeKind::Inner)
        };
        sequence.push(next.ok_or(RealizeError::Exhausted { step, kind })?);
    }
    Ok(HomologicalOrder {
        order: NodeOrder::from_sequence(sequence).expect("each node chosen once"),
        sequence: b.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationResult {
    pub dmf: DiscreteMorseFunction,
    pub node_to_cell: BTreeMap<NodeId, Cell>,
    /// Vertices of the produced path, left to right.
    pub path_order: Vec<VertexId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RealizeOptions {
    /// Refuse sequences that do not dominate the sublevel sequence.
    pub check_dominance: bool,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions {
            check_dominance: true,
        }
    }
}

/// Realizes `tree` along its own sublevel order.
pub fn realize_path(tree: &ChiralMergeTree) -> RealizationResult {
    realize_along(tree, &tree.sublevel_order()).expect("sublevel order is always feasible")
}

/// Realizes `tree` so that the induced sequence is `b`.
pub fn realize_with_homology(
    tree: &ChiralMergeTree,
    b: &HomologicalSequence,
) -> Result<RealizationResult, RealizeError> {
    realize_with_options(tree, b, RealizeOptions::default())
}

pub fn realize_with_options(
    tree: &ChiralMergeTree,
    b: &HomologicalSequence,
    options: RealizeOptions,
) -> Result<RealizationResult, RealizeError> {
    if !is_consistent(tree, b) {
        return Err(RealizeError::Inconsistent {
            nodes: tree.len(),
            len: b.len(),
        });
    }
    if !b.is_valid() {
        return Err(RealizeError::InvalidSequence(b.clone()));
    }
    if options.check_dominance {
        let j = j_sequence(tree);
        if let Some(index) = b.first_shortfall(&j).expect("equal lengths") {
            return Err(RealizeError::Dominance {
                index,
                actual: b.entries()[index],
                required: j.entries()[index],
            });
        }
    }
    let order = homological_order(tree, b)?;
    realize_along(tree, &order.order)
}

fn realize_along(
    tree: &ChiralMergeTree,
    order: &NodeOrder,
) -> Result<RealizationResult, RealizeError> {
    let mut segments: Vec<Option<Vec<VertexId>>> = vec![None; tree.len()];
    let mut values: BTreeMap<Cell, Value> = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut orientations = Vec::new();
    let mut node_to_cell = BTreeMap::new();

    for (step, &idx) in order.sequence().iter().enumerate() {
        let value = Value::from_integer(step as i64);
        match tree.children(idx) {
            None => {
                let v = VertexId(step as u32);
                vertices.push(v);
                values.insert(Cell::Vertex(v), value);
                node_to_cell.insert(tree.id(idx), Cell::Vertex(v));
                segments[idx] = Some(vec![v]);
            }
            Some((left, right)) => {
                let infeasible = RealizeError::InfeasibleMerge {
                    step,
                    node: tree.id(idx),
                };
                if segments[left].is_none() || segments[right].is_none() {
                    return Err(infeasible);
                }
                let left_seg = segments[left].take().expect("checked");
                let right_seg = segments[right].take().expect("checked");
                // Endpoints: the facing ends of the two segments once placed.
                let (mut joined, tail, left_end, right_end) = match tree.chirality(idx) {
                    Chirality::L => {
                        let (a, b) = (*left_seg.last().unwrap(), right_seg[0]);
                        (left_seg, right_seg, a, b)
                    }
                    Chirality::R => {
                        let (b, a) = (*right_seg.last().unwrap(), left_seg[0]);
                        (right_seg, left_seg, a, b)
                    }
                };
                joined.extend(tail);
                let edge = crate::graph::Edge::new(left_end, right_end).expect("distinct segments");
                edges.push(edge);
                values.insert(Cell::Edge(edge), value);
                orientations.push((left_end, right_end));
                node_to_cell.insert(tree.id(idx), Cell::Edge(edge));
                segments[idx] = Some(joined);
            }
        }
    }

    let path_order = segments[tree.root()].take().expect("root realized last");
    let graph = SimpleGraph::new(vertices, edges.iter().map(|e| (e.lo(), e.hi())))
        .expect("construction yields a simple graph");
    let mut dmf = DiscreteMorseFunction::new(graph, values).expect("every cell valued");
    for (a, b) in orientations {
        dmf.orient(a, b).expect("edge exists");
    }
    Ok(RealizationResult {
        dmf,
        node_to_cell,
        path_order,
    })
}
