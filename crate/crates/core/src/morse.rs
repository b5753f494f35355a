//! Discrete Morse functions on graphs: validation, level subcomplexes,
//! induced homological sequences and induced chiral merge trees.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ComponentIndex, Edge, GraphError, SimpleGraph, VertexId};
use crate::merge_tree::{ChiralMergeTree, Chirality, NodeId, RawMergeNode};

/// Function values are exact rationals; everything this crate produces uses
/// integers.
pub type Value = Ratio<i64>;

/// A vertex or an edge. Vertices order before edges, which is also the
/// order in which a matched pair enters a sublevel sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Vertex(VertexId),
    Edge(Edge),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Vertex(v) => write!(f, "v:{v}"),
            Cell::Edge(e) => write!(f, "e:{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad cell key {0:?}; expected v:<id> or e:<min>-<max>")]
pub struct CellKeyError(pub String);

impl FromStr for Cell {
    type Err = CellKeyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CellKeyError(s.to_string());
        if let Some(rest) = s.strip_prefix("v:") {
            return rest
                .parse()
                .map(|v| Cell::Vertex(VertexId(v)))
                .map_err(|_| bad());
        }
        let rest = s.strip_prefix("e:").ok_or_else(bad)?;
        let (a, b) = rest.split_once('-').ok_or_else(bad)?;
        let a: u32 = a.parse().map_err(|_| bad())?;
        let b: u32 = b.parse().map_err(|_| bad())?;
        if a >= b {
            return Err(bad());
        }
        Ok(Cell::Edge(
            Edge::new(VertexId(a), VertexId(b)).ok_or_else(bad)?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DmfViolation {
    #[error("decreasing incidence: f({vertex}) > f({edge})")]
    DecreasingIncidence { vertex: Cell, edge: Cell },
    #[error("value {value} taken by {} cells", .cells.len())]
    ValueMultiplicity { value: Value, cells: Vec<Cell> },
    #[error("equal values on non-incident cells {first} and {second}")]
    NonIncidentTie { first: Cell, second: Cell },
    #[error("orientation given for non-critical edge {0}")]
    OrientedMatchedEdge(Edge),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error("invalid discrete Morse function: {}", join(.0))]
    Invalid(Vec<DmfViolation>),
    #[error("no value for cell {0}")]
    MissingValue(Cell),
    #[error("cell {0} is not in the graph")]
    UnknownCell(Cell),
    #[error("orientation ({0}, {1}) does not match an edge of the graph")]
    BadOrientation(VertexId, VertexId),
    #[error("graph is not a forest; only b0 is tracked")]
    NotAForest,
    #[error("graph is not a tree")]
    NotATree,
    #[error("{0} is not a critical value")]
    NotCritical(Value),
    #[error("critical edge {0} has no orientation")]
    MissingOrientation(Edge),
    #[error("critical edge {0} lies inside a single component")]
    Integrity(Edge),
    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn join(v: &[DmfViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// How the induced merge tree assigns left/right at a merge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiralityMode {
    /// The component of the first endpoint of the edge's orientation is left.
    Oriented,
    /// The component born earlier is left.
    Elder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriticalCell {
    pub cell: Cell,
    pub value: Value,
}

/// A cell-value assignment on a graph, with optional orientations of
/// critical edges as `(left-side endpoint, right-side endpoint)`.
///
/// Construction only checks that every cell has a value; use
/// [`DiscreteMorseFunction::validate`] for the Morse conditions. Analysis
/// methods validate first and refuse invalid functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMorseFunction {
    graph: SimpleGraph,
    values: BTreeMap<Cell, Value>,
    orientations: BTreeMap<Edge, (VertexId, VertexId)>,
}

impl DiscreteMorseFunction {
    pub fn new(
        graph: SimpleGraph,
        values: BTreeMap<Cell, Value>,
    ) -> Result<DiscreteMorseFunction, MorseError> {
        for &cell in values.keys() {
            let present = match cell {
                Cell::Vertex(v) => graph.contains_vertex(v),
                Cell::Edge(e) => graph.contains_edge(e),
            };
            if !present {
                return Err(MorseError::UnknownCell(cell));
            }
        }
        let all_cells = graph
            .vertices()
            .iter()
            .map(|&v| Cell::Vertex(v))
            .chain(graph.edges().iter().map(|&e| Cell::Edge(e)));
        for cell in all_cells {
            if !values.contains_key(&cell) {
                return Err(MorseError::MissingValue(cell));
            }
        }
        Ok(DiscreteMorseFunction {
            graph,
            values,
            orientations: BTreeMap::new(),
        })
    }

    /// Convenience constructor from integer values.
    pub fn from_integers(
        graph: SimpleGraph,
        values: impl IntoIterator<Item = (Cell, i64)>,
    ) -> Result<DiscreteMorseFunction, MorseError> {
        DiscreteMorseFunction::new(
            graph,
            values
                .into_iter()
                .map(|(c, x)| (c, Value::from_integer(x)))
                .collect(),
        )
    }

    /// Records that `first` is the left-side endpoint of the edge `first - second`.
    pub fn orient(&mut self, first: VertexId, second: VertexId) -> Result<(), MorseError> {
        let edge = Edge::new(first, second)
            .filter(|e| self.graph.contains_edge(*e))
            .ok_or(MorseError::BadOrientation(first, second))?;
        self.orientations.insert(edge, (first, second));
        Ok(())
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn value(&self, cell: Cell) -> Option<Value> {
        self.values.get(&cell).copied()
    }

    pub fn values(&self) -> &BTreeMap<Cell, Value> {
        &self.values
    }

    pub fn orientation(&self, edge: Edge) -> Option<(VertexId, VertexId)> {
        self.orientations.get(&edge).copied()
    }

    pub fn orientations(&self) -> &BTreeMap<Edge, (VertexId, VertexId)> {
        &self.orientations
    }

    pub fn validate(&self) -> Result<(), Vec<DmfViolation>> {
        let mut violations = Vec::new();
        for &edge in self.graph.edges() {
            let fe = self.values[&Cell::Edge(edge)];
            for v in edge.endpoints() {
                if self.values[&Cell::Vertex(v)] > fe {
                    violations.push(DmfViolation::DecreasingIncidence {
                        vertex: Cell::Vertex(v),
                        edge: Cell::Edge(edge),
                    });
                }
            }
        }
        for group in self.value_groups() {
            match group.cells.as_slice() {
                [_] => {}
                [a, b] => {
                    let incident = match (a, b) {
                        (Cell::Vertex(v), Cell::Edge(e)) | (Cell::Edge(e), Cell::Vertex(v)) => {
                            e.contains(*v)
                        }
                        _ => false,
                    };
                    if !incident {
                        violations.push(DmfViolation::NonIncidentTie {
                            first: *a,
                            second: *b,
                        });
                    }
                }
                cells => violations.push(DmfViolation::ValueMultiplicity {
                    value: group.value,
                    cells: cells.to_vec(),
                }),
            }
        }
        for &edge in self.orientations.keys() {
            let fe = self.values[&Cell::Edge(edge)];
            if self
                .values
                .iter()
                .any(|(&c, &x)| x == fe && c != Cell::Edge(edge))
            {
                violations.push(DmfViolation::OrientedMatchedEdge(edge));
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    fn ensure_valid(&self) -> Result<(), MorseError> {
        self.validate().map_err(MorseError::Invalid)
    }

    /// Cells grouped by value, ascending; within a group vertices precede edges.
    fn value_groups(&self) -> Vec<ValueGroup> {
        let mut cells: Vec<(Value, Cell)> = self.values.iter().map(|(&c, &x)| (x, c)).collect();
        cells.sort_unstable();
        let mut groups: Vec<ValueGroup> = Vec::new();
        for (value, cell) in cells {
            match groups.last_mut() {
                Some(g) if g.value == value => g.cells.push(cell),
                _ => groups.push(ValueGroup {
                    value,
                    cells: vec![cell],
                }),
            }
        }
        groups
    }

    /// Cells on which the function is injective, by ascending value.
    pub fn critical_cells(&self) -> Result<Vec<CriticalCell>, MorseError> {
        self.ensure_valid()?;
        Ok(self
            .value_groups()
            .into_iter()
            .filter(|g| g.cells.len() == 1)
            .map(|g| CriticalCell {
                cell: g.cells[0],
                value: g.value,
            })
            .collect())
    }

    pub fn critical_values(&self) -> Result<Vec<Value>, MorseError> {
        Ok(self
            .critical_cells()?
            .into_iter()
            .map(|c| c.value)
            .collect())
    }

    /// All cells with value at most `a`. Closed under faces when the function
    /// is weakly increasing.
    pub fn level_subcomplex(&self, a: Value) -> Result<SimpleGraph, MorseError> {
        self.level_where(|x| x <= a)
    }

    /// The level subcomplex just below the critical value `c`.
    pub fn level_subcomplex_before(&self, c: Value) -> Result<SimpleGraph, MorseError> {
        if !self.critical_values()?.contains(&c) {
            return Err(MorseError::NotCritical(c));
        }
        self.level_where(|x| x < c)
    }

    fn level_where(&self, keep: impl Fn(Value) -> bool) -> Result<SimpleGraph, MorseError> {
        let vertices = self
            .graph
            .vertices()
            .iter()
            .copied()
            .filter(|&v| keep(self.values[&Cell::Vertex(v)]));
        let edges = self
            .graph
            .edges()
            .iter()
            .copied()
            .filter(|&e| keep(self.values[&Cell::Edge(e)]));
        Ok(self.graph.subgraph(vertices, edges)?)
    }

    /// Level subcomplexes at every critical value.
    pub fn filtration(&self) -> Result<CellFiltration, MorseError> {
        let levels = self
            .critical_cells()?
            .into_iter()
            .map(|c| {
                Ok(FiltrationLevel {
                    critical: c,
                    subcomplex: self.level_subcomplex(c.value)?,
                })
            })
            .collect::<Result<Vec<_>, MorseError>>()?;
        Ok(CellFiltration { levels })
    }

    /// Number of components of the level subcomplex at each critical value,
    /// computed in a single incremental sweep.
    pub fn homological_sequence(&self) -> Result<HomologicalSequence, MorseError> {
        self.ensure_valid()?;
        if !self.graph.is_forest() {
            return Err(MorseError::NotAForest);
        }
        let mut index = ComponentIndex::new(self.graph.vertex_count());
        let mut entries = Vec::new();
        for group in self.value_groups() {
            for &cell in &group.cells {
                match cell {
                    Cell::Vertex(v) => {
                        index.activate(self.pos(v));
                    }
                    Cell::Edge(e) => {
                        index.union(self.pos(e.lo()), self.pos(e.hi()));
                    }
                }
            }
            if group.cells.len() == 1 {
                entries.push(index.count() as u32);
            }
        }
        Ok(HomologicalSequence(entries))
    }

    fn pos(&self, v: VertexId) -> usize {
        self.graph.index_of(v).expect("vertex of own graph")
    }

    /// Merge tree of the sublevel sweep. Node ids are positions in
    /// [`DiscreteMorseFunction::critical_cells`]: leaves for critical
    /// vertices, inner nodes for critical edges.
    pub fn induced_merge_tree(&self, mode: ChiralityMode) -> Result<ChiralMergeTree, MorseError> {
        self.ensure_valid()?;
        if !self.graph.is_tree() {
            return Err(MorseError::NotATree);
        }
        struct Pending {
            children: Option<[usize; 2]>,
            chirality: Chirality,
        }
        let mut nodes: Vec<Pending> = Vec::new();
        let mut index = ComponentIndex::new(self.graph.vertex_count());
        // (merge-tree node, birth value) of each component, keyed by its root.
        let mut top: Vec<Option<(usize, Value)>> = vec![None; self.graph.vertex_count()];

        for group in self.value_groups() {
            match group.cells.as_slice() {
                [Cell::Vertex(v)] => {
                    let p = self.pos(*v);
                    index.activate(p);
                    top[p] = Some((nodes.len(), group.value));
                    nodes.push(Pending {
                        children: None,
                        chirality: Chirality::L,
                    });
                }
                [Cell::Vertex(v), Cell::Edge(e)] => {
                    let p = self.pos(*v);
                    let other = self.pos(e.other(*v).expect("validated incidence"));
                    let root = index.find(other);
                    let data = top[root];
                    index.activate(p);
                    let merged = index
                        .union(p, other)
                        .expect("fresh vertex joins a component");
                    top[merged] = data;
                }
                [Cell::Edge(e)] => {
                    let (a, b) = match mode {
                        ChiralityMode::Oriented => self
                            .orientation(*e)
                            .ok_or(MorseError::MissingOrientation(*e))?,
                        ChiralityMode::Elder => (e.lo(), e.hi()),
                    };
                    let ra = index.find(self.pos(a));
                    let rb = index.find(self.pos(b));
                    if ra == rb {
                        return Err(MorseError::Integrity(*e));
                    }
                    let (mut left, mut right) = (
                        top[ra].expect("live component"),
                        top[rb].expect("live component"),
                    );
                    if mode == ChiralityMode::Elder && right.1 < left.1 {
                        std::mem::swap(&mut left, &mut right);
                    }
                    nodes[left.0].chirality = Chirality::L;
                    nodes[right.0].chirality = Chirality::R;
                    let merged = index.union(ra, rb).expect("distinct components");
                    top[merged] = Some((nodes.len(), left.1.min(right.1)));
                    nodes.push(Pending {
                        children: Some([left.0, right.0]),
                        chirality: Chirality::L,
                    });
                }
                _ => unreachable!("validated function has at most matched pairs"),
            }
        }

        let root = nodes.len() - 1;
        fn build(nodes: &[Pending], idx: usize) -> RawMergeNode {
            RawMergeNode {
                id: NodeId(idx as u64),
                chirality: nodes[idx].chirality,
                children: nodes[idx]
                    .children
                    .map(|[l, r]| vec![build(nodes, l), build(nodes, r)])
                    .unwrap_or_default(),
            }
        }
        let mut raw = build(&nodes, root);
        raw.chirality = Chirality::L;
        Ok(ChiralMergeTree::from_raw(&raw).expect("sweep produces a full binary tree"))
    }

    /// Same function with values replaced by the rank of their value class.
    pub fn canonicalized(&self) -> DiscreteMorseFunction {
        let mut values = BTreeMap::new();
        for (rank, group) in self.value_groups().into_iter().enumerate() {
            for cell in group.cells {
                values.insert(cell, Value::from_integer(rank as i64));
            }
        }
        DiscreteMorseFunction {
            graph: self.graph.clone(),
            values,
            orientations: self.orientations.clone(),
        }
    }
}

struct ValueGroup {
    value: Value,
    cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationLevel {
    pub critical: CriticalCell,
    pub subcomplex: SimpleGraph,
}

/// Level subcomplexes at successive critical values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellFiltration {
    pub levels: Vec<FiltrationLevel>,
}

impl CellFiltration {
    pub fn is_nested(&self) -> bool {
        self.levels.windows(2).all(|w| {
            let (a, b) = (&w[0].subcomplex, &w[1].subcomplex);
            a.vertices().iter().all(|&v| b.contains_vertex(v))
                && a.edges().iter().all(|&e| b.contains_edge(e))
        })
    }

    /// Component counts recomputed level by level.
    pub fn betti_zero(&self) -> Vec<u32> {
        self.levels
            .iter()
            .map(|l| l.subcomplex.component_count() as u32)
            .collect()
    }
}

/// Component counts at successive critical values.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologicalSequence(pub Vec<u32>);

impl HomologicalSequence {
    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Valid for a tree: starts and ends at 1, stays positive and moves by
    /// exactly one at each step.
    pub fn is_valid(&self) -> bool {
        let s = &self.0;
        !s.is_empty()
            && s[0] == 1
            && s[s.len() - 1] == 1
            && s.iter().all(|&x| x >= 1)
            && s.windows(2).all(|w| w[0].abs_diff(w[1]) == 1)
    }

    /// Pointwise `lower <= self`.
    pub fn dominates(&self, lower: &HomologicalSequence) -> Result<bool, MorseError> {
        Ok(self.first_shortfall(lower)?.is_none())
    }

    /// First index where `self` falls below `lower`.
    pub fn first_shortfall(
        &self,
        lower: &HomologicalSequence,
    ) -> Result<Option<usize>, MorseError> {
        if self.len() != lower.len() {
            return Err(MorseError::LengthMismatch(self.len(), lower.len()));
        }
        Ok(self.0.iter().zip(&lower.0).position(|(b, j)| b < j))
    }

    /// Indices `j > 0` with `B(j) > B(j-1)`.
    pub fn up_steps(&self) -> Vec<usize> {
        (1..self.0.len())
            .filter(|&j| self.0[j] > self.0[j - 1])
            .collect()
    }
}

impl From<Vec<u32>> for HomologicalSequence {
    fn from(v: Vec<u32>) -> Self {
        HomologicalSequence(v)
    }
}

impl fmt::Display for HomologicalSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn is_valid_sequence(b: &HomologicalSequence) -> bool {
    b.is_valid()
}

/// A merge tree and a sequence are consistent when the node count equals
/// the sequence length.
pub fn is_consistent(tree: &ChiralMergeTree, b: &HomologicalSequence) -> bool {
    tree.len() == b.len()
}

/// Pointwise `j <= b`.
pub fn dominates(b: &HomologicalSequence, j: &HomologicalSequence) -> Result<bool, MorseError> {
    b.dominates(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn ve(i: u32) -> Cell {
        Cell::Vertex(v(i))
    }

    fn ed(a: u32, b: u32) -> Cell {
        Cell::Edge(Edge::new(v(a), v(b)).unwrap())
    }

    fn int(x: i64) -> Value {
        Value::from_integer(x)
    }

    /// Seven-vertex tree with a vertex of degree four.
    pub(crate) fn seven_vertex_dmf() -> DiscreteMorseFunction {
        let g = SimpleGraph::from_indices(7, &[(0, 1), (1, 4), (1, 2), (1, 3), (4, 5), (5, 6)])
            .unwrap();
        DiscreteMorseFunction::from_integers(
            g,
            [
                (ve(0), 0),
                (ve(1), 2),
                (ve(2), 3),
                (ve(3), 9),
                (ve(4), 4),
                (ve(5), 6),
                (ve(6), 7),
                (ed(0, 1), 8),
                (ed(1, 4), 5),
                (ed(1, 2), 3),
                (ed(1, 3), 9),
                (ed(4, 5), 6),
                (ed(5, 6), 7),
            ],
        )
        .unwrap()
    }

    fn single_vertex() -> DiscreteMorseFunction {
        DiscreteMorseFunction::from_integers(SimpleGraph::path(1), [(ve(0), 0)]).unwrap()
    }

    #[test]
    fn cell_keys_round_trip() {
        assert_eq!("v:3".parse::<Cell>().unwrap(), ve(3));
        assert_eq!("e:1-2".parse::<Cell>().unwrap(), ed(1, 2));
        assert_eq!(ed(2, 1).to_string(), "e:1-2");
        assert!("e:2-1".parse::<Cell>().is_err());
        assert!("x:1".parse::<Cell>().is_err());
        assert!("e:1-1".parse::<Cell>().is_err());
    }

    #[test]
    fn seven_vertex_critical_cells() {
        let f = seven_vertex_dmf();
        assert!(f.validate().is_ok());
        let crit = f.critical_cells().unwrap();
        let values: Vec<Value> = crit.iter().map(|c| c.value).collect();
        assert_eq!(values, [0, 2, 4, 5, 8].map(int));
        assert_eq!(
            crit.iter().map(|c| c.cell).collect::<Vec<_>>(),
            vec![ve(0), ve(1), ve(4), ed(1, 4), ed(0, 1)]
        );
    }

    #[test]
    fn seven_vertex_sequence() {
        let f = seven_vertex_dmf();
        assert_eq!(f.homological_sequence().unwrap().0, vec![1, 2, 3, 2, 1]);
        let filtration = f.filtration().unwrap();
        assert!(filtration.is_nested());
        assert_eq!(filtration.betti_zero(), vec![1, 2, 3, 2, 1]);
        assert_eq!(filtration.levels[0].subcomplex.vertex_count(), 1);
    }

    #[test]
    fn level_subcomplexes() {
        let f = seven_vertex_dmf();
        let g4 = f.level_subcomplex(int(4)).unwrap();
        assert_eq!(g4.vertices(), &[v(0), v(1), v(2), v(4)]);
        assert_eq!(g4.edge_count(), 1);
        assert_eq!(g4.component_count(), 3);
        assert!(f.level_subcomplex(int(-1)).unwrap().is_empty());
        assert_eq!(&f.level_subcomplex(int(9)).unwrap(), f.graph());
        let before5 = f.level_subcomplex_before(int(5)).unwrap();
        assert_eq!(before5, f.level_subcomplex(int(4)).unwrap());
        assert!(f.level_subcomplex_before(int(0)).unwrap().is_empty());
        assert_eq!(
            f.level_subcomplex_before(int(3)),
            Err(MorseError::NotCritical(int(3)))
        );
    }

    #[test]
    fn single_vertex_cases() {
        let f = single_vertex();
        assert!(f.validate().is_ok());
        assert_eq!(f.critical_values().unwrap(), vec![int(0)]);
        assert_eq!(f.homological_sequence().unwrap().0, vec![1]);
        let t = f.induced_merge_tree(ChiralityMode::Oriented).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn matched_pair_leaves_one_critical_cell() {
        let f = DiscreteMorseFunction::from_integers(
            SimpleGraph::path(2),
            [(ve(0), 0), (ve(1), 1), (ed(0, 1), 1)],
        )
        .unwrap();
        let crit = f.critical_cells().unwrap();
        assert_eq!(crit.len(), 1);
        assert_eq!(crit[0].cell, ve(0));
        assert_eq!(f.homological_sequence().unwrap().0, vec![1]);
        assert_eq!(f.induced_merge_tree(ChiralityMode::Elder).unwrap().len(), 1);
    }

    #[test]
    fn tie_between_endpoints_is_rejected() {
        let f = DiscreteMorseFunction::from_integers(
            SimpleGraph::path(2),
            [(ve(0), 1), (ve(1), 1), (ed(0, 1), 2)],
        )
        .unwrap();
        let err = f.validate().unwrap_err();
        assert_eq!(
            err,
            vec![DmfViolation::NonIncidentTie {
                first: ve(0),
                second: ve(1)
            }]
        );
        assert!(err[0]
            .to_string()
            .contains("equal values on non-incident cells"));
        assert!(matches!(
            f.homological_sequence(),
            Err(MorseError::Invalid(_))
        ));
    }

    #[test]
    fn decreasing_and_triple_values_are_rejected() {
        let f = DiscreteMorseFunction::from_integers(
            SimpleGraph::path(2),
            [(ve(0), 3), (ve(1), 0), (ed(0, 1), 1)],
        )
        .unwrap();
        assert!(matches!(
            f.validate().unwrap_err()[0],
            DmfViolation::DecreasingIncidence { .. }
        ));
        let f = DiscreteMorseFunction::from_integers(
            SimpleGraph::path(2),
            [(ve(0), 1), (ve(1), 1), (ed(0, 1), 1)],
        )
        .unwrap();
        assert!(f
            .validate()
            .unwrap_err()
            .iter()
            .any(|x| matches!(x, DmfViolation::ValueMultiplicity { .. })));
    }

    #[test]
    fn construction_requires_every_cell() {
        let err = DiscreteMorseFunction::from_integers(SimpleGraph::path(2), [(ve(0), 0)]);
        assert!(matches!(err, Err(MorseError::MissingValue(_))));
        let err =
            DiscreteMorseFunction::from_integers(SimpleGraph::path(1), [(ve(0), 0), (ve(5), 1)]);
        assert_eq!(err, Err(MorseError::UnknownCell(ve(5))));
    }

    #[test]
    fn three_cell_merge_oriented_and_elder() {
        let mut f = DiscreteMorseFunction::from_integers(
            SimpleGraph::path(2),
            [(ve(0), 0), (ve(1), 1), (ed(0, 1), 2)],
        )
        .unwrap();
        assert_eq!(
            f.induced_merge_tree(ChiralityMode::Oriented),
            Err(MorseError::MissingOrientation(
                Edge::new(v(0), v(1)).unwrap()
            ))
        );
        f.orient(v(0), v(1)).unwrap();
        let t = f.induced_merge_tree(ChiralityMode::Oriented).unwrap();
        assert_eq!(t.to_string(), "2(0,1)");
        f.orient(v(1), v(0)).unwrap();
        let t = f.induced_merge_tree(ChiralityMode::Oriented).unwrap();
        assert_eq!(t.to_string(), "2(1,0)");
        // Elder ignores orientation: the vertex born at 0 is on the left.
        let t = f.induced_merge_tree(ChiralityMode::Elder).unwrap();
        assert_eq!(t.to_string(), "2(0,1)");
        assert!(f.orient(v(0), v(0)).is_err());
    }

    #[test]
    fn orientation_on_matched_edge_is_a_violation() {
        let mut f = DiscreteMorseFunction::from_integers(
            SimpleGraph::path(2),
            [(ve(0), 0), (ve(1), 1), (ed(0, 1), 1)],
        )
        .unwrap();
        f.orient(v(0), v(1)).unwrap();
        assert!(matches!(
            f.validate().unwrap_err()[0],
            DmfViolation::OrientedMatchedEdge(_)
        ));
    }

    #[test]
    fn non_forest_sequence_is_unsupported() {
        let g = SimpleGraph::from_indices(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let f = DiscreteMorseFunction::from_integers(
            g,
            [
                (ve(0), 0),
                (ve(1), 1),
                (ve(2), 2),
                (ed(0, 1), 3),
                (ed(1, 2), 4),
                (ed(0, 2), 5),
            ],
        )
        .unwrap();
        assert_eq!(f.homological_sequence(), Err(MorseError::NotAForest));
        assert_eq!(
            f.induced_merge_tree(ChiralityMode::Elder),
            Err(MorseError::NotATree)
        );
    }

    #[test]
    fn elder_tree_of_seven_vertex_dmf() {
        let f = seven_vertex_dmf();
        let t = f.induced_merge_tree(ChiralityMode::Elder).unwrap();
        // Leaves are critical vertices (ids 0,1,2), inner nodes the edges (3,4).
        assert_eq!(t.to_string(), "4(0,3(1,2))");
    }

    #[test]
    fn sequence_predicates() {
        let b = HomologicalSequence(vec![1, 2, 1, 2, 1, 2, 1]);
        let j = HomologicalSequence(vec![1, 2, 1, 2, 3, 2, 1]);
        assert!(b.is_valid() && j.is_valid());
        assert!(b.dominates(&b).unwrap());
        assert!(!b.dominates(&j).unwrap());
        assert_eq!(b.first_shortfall(&j).unwrap(), Some(4));
        assert_eq!(
            b.dominates(&HomologicalSequence(vec![1])),
            Err(MorseError::LengthMismatch(7, 1))
        );
        assert!(!HomologicalSequence(vec![]).is_valid());
        assert!(!HomologicalSequence(vec![1, 2]).is_valid());
        assert!(!HomologicalSequence(vec![1, 3, 1]).is_valid());
        assert!(!HomologicalSequence(vec![1, 0, 1]).is_valid());
        assert_eq!(b.up_steps(), vec![1, 3, 5]);
        let t: ChiralMergeTree = "2(0,1)".parse().unwrap();
        assert!(is_consistent(&t, &HomologicalSequence(vec![1, 2, 1])));
        assert!(!is_consistent(&t, &b));
    }

    #[test]
    fn canonicalized_uses_value_ranks() {
        let f = seven_vertex_dmf().canonicalized();
        assert_eq!(f.value(ve(0)), Some(int(0)));
        assert_eq!(f.value(ed(0, 1)), Some(int(7)));
        assert_eq!(f.homological_sequence().unwrap().0, vec![1, 2, 3, 2, 1]);
    }
}
