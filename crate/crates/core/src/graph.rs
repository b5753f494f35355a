//! Simple loopless graphs (1-dimensional simplicial complexes) and
//! incremental component tracking.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Vertex label. Input graphs conventionally use `0..|V|`, but any set of
/// distinct ids is accepted so that subcomplexes keep the labels of the
/// complex they were cut from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An undirected edge stored with its endpoints sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    /// Returns `None` for a loop.
    pub fn new(u: VertexId, v: VertexId) -> Option<Edge> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Some(Edge { lo: u, hi: v }),
            std::cmp::Ordering::Greater => Some(Edge { lo: v, hi: u }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(&self) -> VertexId {
        self.lo
    }

    pub fn hi(&self) -> VertexId {
        self.hi
    }

    pub fn endpoints(&self) -> [VertexId; 2] {
        [self.lo, self.hi]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(&self, v: VertexId) -> Option<VertexId> {
        if v == self.lo {
            Some(self.hi)
        } else if v == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(VertexId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("edge {edge} uses unknown vertex {vertex}")]
    DanglingEdge { edge: Edge, vertex: VertexId },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
}

/// A finite loopless graph without multi-edges.
///
/// Vertices and edges are kept sorted, so two graphs with the same cells
/// compare equal and serialize identically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
}

impl SimpleGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<SimpleGraph, GraphError> {
        let mut vertices: Vec<VertexId> = vertices.into_iter().collect();
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
        let mut sorted = Vec::new();
        for (u, v) in edges {
            let edge = Edge::new(u, v).ok_or(GraphError::Loop(u))?;
            for x in edge.endpoints() {
                if vertices.binary_search(&x).is_err() {
                    return Err(GraphError::DanglingEdge { edge, vertex: x });
                }
            }
            sorted.push(edge);
        }
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0]));
        }
        Ok(SimpleGraph {
            vertices,
            edges: sorted,
        })
    }

    /// Builds a graph on `0..n` from plain index pairs.
    pub fn from_indices(n: u32, edges: &[(u32, u32)]) -> Result<SimpleGraph, GraphError> {
        SimpleGraph::new(
            (0..n).map(VertexId),
            edges.iter().map(|&(u, v)| (VertexId(u), VertexId(v))),
        )
    }

    /// The path `0 - 1 - ... - (n-1)`.
    pub fn path(n: u32) -> SimpleGraph {
        let edges: Vec<(u32, u32)> = (1..n).map(|i| (i - 1, i)).collect();
        SimpleGraph::from_indices(n, &edges).expect("path is a simple graph")
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertices plus edges.
    pub fn cell_count(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Position of `v` in the sorted vertex list; used to index dense side tables.
    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    /// Adjacency lists indexed by [`SimpleGraph::index_of`].
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            let a = self.index_of(e.lo).expect("endpoint present");
            let b = self.index_of(e.hi).expect("endpoint present");
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Partition of the vertices into connected components. Blocks are
    /// sorted internally and ordered by their smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut index = ComponentIndex::with_all(self.vertices.len());
        for e in &self.edges {
            let a = self.index_of(e.lo).expect("endpoint present");
            let b = self.index_of(e.hi).expect("endpoint present");
            index.union(a, b);
        }
        let mut blocks: Vec<Vec<VertexId>> = Vec::new();
        let mut block_of_root = vec![usize::MAX; self.vertices.len()];
        for (i, &v) in self.vertices.iter().enumerate() {
            let root = index.find(i);
            if block_of_root[root] == usize::MAX {
                block_of_root[root] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[block_of_root[root]].push(v);
        }
        blocks
    }

    /// Zeroth Betti number.
    pub fn component_count(&self) -> usize {
        let mut index = ComponentIndex::with_all(self.vertices.len());
        for e in &self.edges {
            let a = self.index_of(e.lo).expect("endpoint present");
            let b = self.index_of(e.hi).expect("endpoint present");
            index.union(a, b);
        }
        index.count()
    }

    /// The component containing `v`, found by breadth-first search.
    pub fn component_of(&self, v: VertexId) -> Result<Vec<VertexId>, GraphError> {
        let start = self.index_of(v).ok_or(GraphError::UnknownVertex(v))?;
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut block = Vec::new();
        while let Some(i) = queue.pop_front() {
            block.push(self.vertices[i]);
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        block.sort_unstable();
        Ok(block)
    }

    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.component_count() == self.vertices.len()
    }

    pub fn is_tree(&self) -> bool {
        self.is_forest() && self.component_count() == 1
    }

    /// A tree with maximum degree 2.
    pub fn is_path(&self) -> bool {
        self.is_tree() && self.vertices.iter().all(|&v| self.degree(v) <= 2)
    }

    /// The subgraph spanned by the given cells. Edges whose endpoints are
    /// missing from `vertices` are rejected.
    pub fn subgraph(
        &self,
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<SimpleGraph, GraphError> {
        let vertices: Vec<VertexId> = vertices.into_iter().collect();
        for &v in &vertices {
            if !self.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        SimpleGraph::new(vertices, edges.into_iter().map(|e| (e.lo, e.hi)))
    }
}

/// Disjoint-set forest over dense indices `0..n`, with union by size and
/// path compression.
///
/// Elements start inactive unless built with [`ComponentIndex::with_all`];
/// only active elements contribute to [`ComponentIndex::count`].
#[derive(Clone, Debug)]
pub struct ComponentIndex {
    parent: Vec<usize>,
    size: Vec<usize>,
    active: Vec<bool>,
    count: usize,
}

impl ComponentIndex {
    pub fn new(n: usize) -> ComponentIndex {
        ComponentIndex {
            parent: (0..n).collect(),
            size: vec![1; n],
            active: vec![false; n],
            count: 0,
        }
    }

    pub fn with_all(n: usize) -> ComponentIndex {
        ComponentIndex {
            parent: (0..n).collect(),
            size: vec![1; n],
            active: vec![true; n],
            count: n,
        }
    }

    /// Adds `x` as a singleton class. Returns `false` if already active.
    pub fn activate(&mut self, x: usize) -> bool {
        if self.active[x] {
            return false;
        }
        self.active[x] = true;
        self.count += 1;
        true
    }

    pub fn is_active(&self, x: usize) -> bool {
        self.active[x]
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the classes of `a` and `b`. Returns the surviving root, or
    /// `None` when they were already in one class.
    pub fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        debug_assert!(
            self.active[a] && self.active[b],
            "union of inactive element"
        );
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return None;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.count -= 1;
        Some(ra)
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Number of classes among active elements.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}
