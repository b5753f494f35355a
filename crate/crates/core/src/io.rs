//! JSON artifacts and DOT export.
//!
//! Formats:
//! - graph: `{"vertices": [0,1,...], "edges": [[u,v],...]}` with `u < v`
//! - merge tree: `{"id": 3, "chirality": "L", "children": [<left>, <right>]}`
//! - function: `{"graph": <graph>, "values": {"v:3": 7, "e:1-2": 7}, "orientations": [[u,v]]}`
//! - realization: function fields plus `node_to_cell` and `path_order`
//! - sequence: `[1,2,1]`
//! - atlas: one `{"tree", "sequence", "count", "dominates_j"}` record per line
//!
//! Serialization is canonical: vertices before edges, both ascending, so
//! equal artifacts produce identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{GraphError, SimpleGraph, VertexId};
use crate::merge_tree::{ChiralMergeTree, MergeTreeError, NodeId, RawMergeNode};
use crate::morse::{Cell, DiscreteMorseFunction, HomologicalSequence, MorseError, Value};
use crate::oracle::{Atlas, ConjectureReport};
use crate::realize::RealizationResult;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Tree(#[from] MergeTreeError),
    #[error("bad value {0}")]
    Value(String),
    #[error("bad cell key: {0}")]
    CellKey(String),
    #[error("unrecognized artifact shape")]
    UnknownShape,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<u32>,
    edges: Vec<[u32; 2]>,
}

impl From<&SimpleGraph> for GraphJson {
    fn from(g: &SimpleGraph) -> Self {
        GraphJson {
            vertices: g.vertices().iter().map(|v| v.0).collect(),
            edges: g.edges().iter().map(|e| [e.lo().0, e.hi().0]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for SimpleGraph {
    type Error = GraphError;

    fn try_from(g: GraphJson) -> Result<Self, Self::Error> {
        SimpleGraph::new(
            g.vertices.into_iter().map(VertexId),
            g.edges.into_iter().map(|[u, v]| (VertexId(u), VertexId(v))),
        )
    }
}

pub fn graph_to_json(g: &SimpleGraph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph serializes")
}

pub fn graph_from_json(s: &str) -> Result<SimpleGraph, IoError> {
    let raw: GraphJson = serde_json::from_str(s)?;
    Ok(raw.try_into()?)
}

pub fn tree_to_json(t: &ChiralMergeTree) -> String {
    serde_json::to_string(&t.to_raw()).expect("tree serializes")
}

/// Parses without validating, so that violations can be reported.
pub fn raw_tree_from_json(s: &str) -> Result<RawMergeNode, IoError> {
    Ok(serde_json::from_str(s)?)
}

pub fn tree_from_json(s: &str) -> Result<ChiralMergeTree, IoError> {
    Ok(ChiralMergeTree::from_raw(&raw_tree_from_json(s)?)?)
}

pub fn sequence_to_json(b: &HomologicalSequence) -> String {
    serde_json::to_string(b).expect("sequence serializes")
}

pub fn sequence_from_json(s: &str) -> Result<HomologicalSequence, IoError> {
    Ok(serde_json::from_str(s)?)
}

fn value_to_json(x: &Value) -> serde_json::Value {
    if x.is_integer() {
        serde_json::Value::from(*x.numer())
    } else {
        serde_json::Value::from(x.to_string())
    }
}

fn value_from_json(v: &serde_json::Value) -> Result<Value, IoError> {
    let bad = || IoError::Value(v.to_string());
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Value::from_integer(i))
            } else {
                let f = n.as_f64().ok_or_else(bad)?;
                Ratio::approximate_float(f).ok_or_else(bad)
            }
        }
        serde_json::Value::String(s) => s.trim().parse::<Value>().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

struct ValuesMap<'a>(&'a BTreeMap<Cell, Value>);

impl Serialize for ValuesMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (cell, value) in self.0 {
            map.serialize_entry(&cell.to_string(), &value_to_json(value))?;
        }
        map.end()
    }
}

struct NodeCells<'a>(&'a BTreeMap<NodeId, Cell>);

impl Serialize for NodeCells<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (node, cell) in self.0 {
            map.serialize_entry(&node.to_string(), &cell.to_string())?;
        }
        map.end()
    }
}

fn orientation_list(f: &DiscreteMorseFunction) -> Vec<[u32; 2]> {
    f.orientations().values().map(|(a, b)| [a.0, b.0]).collect()
}

struct DmfJson<'a>(&'a DiscreteMorseFunction);

impl Serialize for DmfJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Dmf", 3)?;
        st.serialize_field("graph", &GraphJson::from(self.0.graph()))?;
        st.serialize_field("values", &ValuesMap(self.0.values()))?;
        st.serialize_field("orientations", &orientation_list(self.0))?;
        st.end()
    }
}

struct RealizationJson<'a>(&'a RealizationResult);

impl Serialize for RealizationJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = self.0;
        let mut st = s.serialize_struct("Realization", 5)?;
        st.serialize_field("graph", &GraphJson::from(r.dmf.graph()))?;
        st.serialize_field("values", &ValuesMap(r.dmf.values()))?;
        st.serialize_field("orientations", &orientation_list(&r.dmf))?;
        st.serialize_field("node_to_cell", &NodeCells(&r.node_to_cell))?;
        let order: Vec<u32> = r.path_order.iter().map(|v| v.0).collect();
        st.serialize_field("path_order", &order)?;
        st.end()
    }
}

#[derive(Deserialize)]
struct DmfInput {
    graph: GraphJson,
    values: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    orientations: Vec<[u32; 2]>,
    #[serde(default)]
    node_to_cell: Option<BTreeMap<String, String>>,
    #[serde(default)]
    path_order: Option<Vec<u32>>,
}

impl DmfInput {
    fn into_dmf(self) -> Result<DiscreteMorseFunction, IoError> {
        let graph: SimpleGraph = self.graph.try_into()?;
        let mut values = BTreeMap::new();
        for (key, v) in &self.values {
            let cell: Cell = key.parse().map_err(|_| IoError::CellKey(key.clone()))?;
            values.insert(cell, value_from_json(v)?);
        }
        let mut dmf = DiscreteMorseFunction::new(graph, values)?;
        for [a, b] in self.orientations {
            dmf.orient(VertexId(a), VertexId(b))?;
        }
        Ok(dmf)
    }
}

pub fn dmf_to_json(f: &DiscreteMorseFunction) -> String {
    serde_json::to_string(&DmfJson(f)).expect("function serializes")
}

pub fn dmf_to_json_pretty(f: &DiscreteMorseFunction) -> String {
    serde_json::to_string_pretty(&DmfJson(f)).expect("function serializes")
}

/// Parses a function; extra realization fields are accepted and ignored.
pub fn dmf_from_json(s: &str) -> Result<DiscreteMorseFunction, IoError> {
    let raw: DmfInput = serde_json::from_str(s)?;
    raw.into_dmf()
}

pub fn realization_to_json(r: &RealizationResult) -> String {
    serde_json::to_string(&RealizationJson(r)).expect("realization serializes")
}

pub fn realization_to_json_pretty(r: &RealizationResult) -> String {
    serde_json::to_string_pretty(&RealizationJson(r)).expect("realization serializes")
}

pub fn realization_from_json(s: &str) -> Result<RealizationResult, IoError> {
    let mut raw: DmfInput = serde_json::from_str(s)?;
    let mapping = raw.node_to_cell.take().unwrap_or_default();
    let order = raw.path_order.take().unwrap_or_default();
    let dmf = raw.into_dmf()?;
    let mut node_to_cell = BTreeMap::new();
    for (node, cell) in mapping {
        let id: u64 = node.parse().map_err(|_| IoError::CellKey(node.clone()))?;
        let cell: Cell = cell.parse().map_err(|_| IoError::CellKey(cell.clone()))?;
        node_to_cell.insert(NodeId(id), cell);
    }
    Ok(RealizationResult {
        dmf,
        node_to_cell,
        path_order: order.into_iter().map(VertexId).collect(),
    })
}

/// A parsed input file of either kind accepted by `validate`.
#[derive(Debug)]
pub enum Artifact {
    MergeTree(RawMergeNode),
    Dmf(DiscreteMorseFunction),
}

/// Detects the artifact kind from the JSON shape: an object with `graph` is
/// a function, an object with `chirality` is a merge tree.
pub fn parse_artifact(s: &str) -> Result<Artifact, IoError> {
    let v: serde_json::Value = serde_json::from_str(s)?;
    let obj = v.as_object().ok_or(IoError::UnknownShape)?;
    if obj.contains_key("graph") {
        let raw: DmfInput = serde_json::from_value(v)?;
        Ok(Artifact::Dmf(raw.into_dmf()?))
    } else if obj.contains_key("chirality") {
        Ok(Artifact::MergeTree(serde_json::from_value(v)?))
    } else {
        Err(IoError::UnknownShape)
    }
}

#[derive(Serialize)]
struct AtlasRecord<'a> {
    tree: &'a str,
    sequence: &'a [u32],
    count: u64,
    dominates_j: bool,
}

/// Newline-delimited JSON, one record per (tree, sequence) key.
pub fn atlas_to_ndjson(atlas: &Atlas) -> String {
    let mut out = String::new();
    for (key, entry) in &atlas.entries {
        let record = AtlasRecord {
            tree: &key.tree,
            sequence: key.sequence.entries(),
            count: entry.count,
            dominates_j: entry.dominates_j,
        };
        out.push_str(&serde_json::to_string(&record).expect("record serializes"));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct ReportSequenceJson<'a> {
    sequence: &'a [u32],
    count: u64,
    dominates_j: bool,
    all_critical: bool,
}

#[derive(Serialize)]
struct ReportTreeJson<'a> {
    tree: &'a str,
    j_sequence: &'a [u32],
    verdict: &'a str,
    violations: usize,
    sequences: Vec<ReportSequenceJson<'a>>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    graph: GraphJson,
    total_dmfs: u64,
    keys: usize,
    violation_count: usize,
    all_critical_violation_count: usize,
    trees: Vec<ReportTreeJson<'a>>,
}

pub fn report_to_json(report: &ConjectureReport) -> String {
    let json = ReportJson {
        graph: GraphJson::from(&report.graph),
        total_dmfs: report.total_dmfs,
        keys: report.trees.iter().map(|t| t.sequences.len()).sum(),
        violation_count: report.violation_count,
        all_critical_violation_count: report.all_critical_violation_count,
        trees: report
            .trees
            .iter()
            .map(|t| ReportTreeJson {
                tree: &t.tree,
                j_sequence: t.j_sequence.entries(),
                verdict: t.verdict(),
                violations: t.violations,
                sequences: t
                    .sequences
                    .iter()
                    .map(|s| ReportSequenceJson {
                        sequence: s.sequence.entries(),
                        count: s.count,
                        dominates_j: s.dominates_j,
                        all_critical: s.all_critical,
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&json).expect("report serializes")
}

/// Graphviz rendering of a function: vertex values as external labels,
/// edge values as edge labels. `vertex_order` fixes the left-to-right
/// layout (the path order of a realization); otherwise ids ascend.
pub fn dmf_to_dot(f: &DiscreteMorseFunction, vertex_order: Option<&[VertexId]>) -> String {
    let order: Vec<VertexId> = match vertex_order {
        Some(o) => o.to_vec(),
        None => f.graph().vertices().to_vec(),
    };
    let mut out = String::new();
    out.push_str("graph dmf {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle, width=0.15, fixedsize=true, label=\"\"];\n");
    for v in &order {
        let x = f.value(Cell::Vertex(*v)).expect("vertex valued");
        writeln!(out, "  v{v} [xlabel=\"{x}\"];").unwrap();
    }
    let position: BTreeMap<VertexId, usize> =
        order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut edges = f.graph().edges().to_vec();
    edges.sort_by_key(|e| {
        let (a, b) = (position[&e.lo()], position[&e.hi()]);
        (a.min(b), a.max(b))
    });
    for e in edges {
        let (a, b) = if position[&e.lo()] <= position[&e.hi()] {
            (e.lo(), e.hi())
        } else {
            (e.hi(), e.lo())
        };
        let x = f.value(Cell::Edge(e)).expect("edge valued");
        writeln!(out, "  v{a} -- v{b} [label=\"{x}\"];").unwrap();
    }
    out.push_str("}\n");
    out
}
