//! Exhaustive enumeration of discrete Morse functions on small trees, the
//! atlas of realized (merge tree, sequence) pairs, and random generators
//! for property tests.
//!
//! A discrete Morse function is determined up to order-type by the order in
//! which its value classes appear. On a graph each class is a critical
//! vertex, a critical edge whose endpoints are already present, or a
//! matched vertex-edge pair whose edge reaches an already present vertex.
//! Enumerating sequences of such build steps therefore visits every
//! order-type exactly once; the canonical representative gives the cells of
//! step `t` the value `t`.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{ComponentIndex, Edge, SimpleGraph, VertexId};
use crate::merge_tree::{ChiralMergeTree, Chirality, NodeId, RawMergeNode};
use crate::morse::{
    Cell, ChiralityMode, DiscreteMorseFunction, HomologicalSequence, MorseError, Value,
};
use crate::realize::j_sequence;

pub const DEFAULT_MAX_CELLS: usize = 11;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("enumeration requires a tree")]
    NotATree,
    #[error("{cells} cells exceed the bound of {bound}; roughly {estimate:.3e} functions")]
    BoundExceeded {
        cells: usize,
        bound: usize,
        estimate: f64,
    },
    #[error("merge trees have an odd number of nodes, got {0}")]
    EvenNodeCount(usize),
    #[error("no dominating sequence found after {attempts} attempts (seed {seed})")]
    LiftingFailed { seed: u64, attempts: usize },
    #[error(transparent)]
    Morse(#[from] MorseError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BuildStep {
    CriticalVertex(VertexId),
    /// `orientation` is filled in only when enumerating with elder chirality.
    CriticalEdge {
        edge: Edge,
        orientation: Option<(VertexId, VertexId)>,
    },
    /// `vertex` is a new endpoint of `edge`; the other endpoint is already built.
    MatchedPair {
        vertex: VertexId,
        edge: Edge,
    },
}

impl BuildStep {
    pub fn cell_count(&self) -> usize {
        match self {
            BuildStep::MatchedPair { .. } => 2,
            _ => 1,
        }
    }
}

/// A build-step sequence over a fixed tree together with the function it
/// induces, in which every cell of step `t` has value `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalDmf {
    pub steps: Vec<BuildStep>,
    pub dmf: DiscreteMorseFunction,
}

impl CanonicalDmf {
    pub fn from_steps(
        tree: &SimpleGraph,
        steps: Vec<BuildStep>,
    ) -> Result<CanonicalDmf, MorseError> {
        let mut values = BTreeMap::new();
        for (t, step) in steps.iter().enumerate() {
            let value = Value::from_integer(t as i64);
            match *step {
                BuildStep::CriticalVertex(v) => {
                    values.insert(Cell::Vertex(v), value);
                }
                BuildStep::CriticalEdge { edge, .. } => {
                    values.insert(Cell::Edge(edge), value);
                }
                BuildStep::MatchedPair { vertex, edge } => {
                    values.insert(Cell::Vertex(vertex), value);
                    values.insert(Cell::Edge(edge), value);
                }
            }
        }
        let mut dmf = DiscreteMorseFunction::new(tree.clone(), values)?;
        for step in &steps {
            if let BuildStep::CriticalEdge {
                orientation: Some((a, b)),
                ..
            } = *step
            {
                dmf.orient(a, b)?;
            }
        }
        Ok(CanonicalDmf { steps, dmf })
    }

    /// True when every cell of the tree is critical.
    pub fn all_critical(&self) -> bool {
        self.steps
            .iter()
            .all(|s| !matches!(s, BuildStep::MatchedPair { .. }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub max_cells: usize,
    /// Orient each critical edge elder-component first, so that the
    /// oriented induced merge tree agrees with the elder one.
    pub elder_chirality: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            max_cells: DEFAULT_MAX_CELLS,
            elder_chirality: false,
        }
    }
}

struct Frame {
    candidates: Vec<BuildStep>,
    next: usize,
}

/// Depth-first stream of every canonical discrete Morse function on a tree.
pub struct DmfEnumerator<'a> {
    tree: &'a SimpleGraph,
    elder: bool,
    vertex_built: Vec<bool>,
    edge_built: Vec<bool>,
    built_cells: usize,
    steps: Vec<BuildStep>,
    frames: Vec<Frame>,
    pending_complete: bool,
}

/// Streams all canonical functions on `tree`, refusing trees above the
/// configured cell bound.
pub fn enumerate_dmfs(
    tree: &SimpleGraph,
    options: EnumerationOptions,
) -> Result<DmfEnumerator<'_>, OracleError> {
    check_enumerable(tree, options)?;
    Ok(DmfEnumerator::with_prefix(
        tree,
        options.elder_chirality,
        &[],
    ))
}

fn check_enumerable(tree: &SimpleGraph, options: EnumerationOptions) -> Result<(), OracleError> {
    if !tree.is_tree() {
        return Err(OracleError::NotATree);
    }
    if tree.cell_count() > options.max_cells {
        return Err(OracleError::BoundExceeded {
            cells: tree.cell_count(),
            bound: options.max_cells,
            estimate: estimate_dmf_count(tree, 2000, 0),
        });
    }
    Ok(())
}

impl<'a> DmfEnumerator<'a> {
    /// Enumerates the completions of `prefix`, which must be a valid
    /// partial build sequence.
    fn with_prefix(tree: &'a SimpleGraph, elder: bool, prefix: &[BuildStep]) -> DmfEnumerator<'a> {
        let mut e = DmfEnumerator {
            tree,
            elder,
            vertex_built: vec![false; tree.vertex_count()],
            edge_built: vec![false; tree.edge_count()],
            built_cells: 0,
            steps: Vec::new(),
            frames: Vec::new(),
            pending_complete: false,
        };
        for &step in prefix {
            e.apply(step);
        }
        if e.built_cells == tree.cell_count() {
            e.pending_complete = true;
        } else {
            let candidates = e.candidates();
            e.frames.push(Frame {
                candidates,
                next: 0,
            });
        }
        e
    }

    fn vpos(&self, v: VertexId) -> usize {
        self.tree.index_of(v).expect("vertex of tree")
    }

    fn candidates(&self) -> Vec<BuildStep> {
        let mut out = Vec::new();
        for (i, &v) in self.tree.vertices().iter().enumerate() {
            if !self.vertex_built[i] {
                out.push(BuildStep::CriticalVertex(v));
            }
        }
        for (i, &edge) in self.tree.edges().iter().enumerate() {
            if self.edge_built[i] {
                continue;
            }
            let lo = self.vertex_built[self.vpos(edge.lo())];
            let hi = self.vertex_built[self.vpos(edge.hi())];
            match (lo, hi) {
                (true, true) => out.push(BuildStep::CriticalEdge {
                    edge,
                    orientation: None,
                }),
                (true, false) => out.push(BuildStep::MatchedPair {
                    vertex: edge.hi(),
                    edge,
                }),
                (false, true) => out.push(BuildStep::MatchedPair {
                    vertex: edge.lo(),
                    edge,
                }),
                (false, false) => {}
            }
        }
        out
    }

    fn apply(&mut self, step: BuildStep) {
        match step {
            BuildStep::CriticalVertex(v) => {
                let p = self.vpos(v);
                self.vertex_built[p] = true;
            }
            BuildStep::CriticalEdge { edge, .. } => {
                let p = self.tree.edge_index(edge).expect("edge of tree");
                self.edge_built[p] = true;
            }
            BuildStep::MatchedPair { vertex, edge } => {
                let p = self.vpos(vertex);
                self.vertex_built[p] = true;
                let q = self.tree.edge_index(edge).expect("edge of tree");
                self.edge_built[q] = true;
            }
        }
        self.built_cells += step.cell_count();
        self.steps.push(step);
    }

    fn undo(&mut self) {
        let step = self.steps.pop().expect("undo with steps");
        match step {
            BuildStep::CriticalVertex(v) => {
                let p = self.vpos(v);
                self.vertex_built[p] = false;
            }
            BuildStep::CriticalEdge { edge, .. } => {
                let p = self.tree.edge_index(edge).expect("edge of tree");
                self.edge_built[p] = false;
            }
            BuildStep::MatchedPair { vertex, edge } => {
                let p = self.vpos(vertex);
                self.vertex_built[p] = false;
                let q = self.tree.edge_index(edge).expect("edge of tree");
                self.edge_built[q] = false;
            }
        }
        self.built_cells -= step.cell_count();
    }

    fn emit(&self) -> CanonicalDmf {
        let mut steps = self.steps.clone();
        if self.elder {
            orient_elder_first(self.tree, &mut steps);
        }
        CanonicalDmf::from_steps(self.tree, steps).expect("build steps cover every cell")
    }
}

/// Sets each critical edge's orientation to (elder endpoint, younger endpoint).
fn orient_elder_first(tree: &SimpleGraph, steps: &mut [BuildStep]) {
    let mut index = ComponentIndex::new(tree.vertex_count());
    let mut birth = vec![usize::MAX; tree.vertex_count()];
    let pos = |v: VertexId| tree.index_of(v).expect("vertex of tree");
    for (t, step) in steps.iter_mut().enumerate() {
        match step {
            BuildStep::CriticalVertex(v) => {
                let p = pos(*v);
                index.activate(p);
                birth[p] = t;
            }
            BuildStep::MatchedPair { vertex, edge } => {
                let p = pos(*vertex);
                let q = pos(edge.other(*vertex).expect("incident"));
                let b = birth[index.find(q)];
                index.activate(p);
                let root = index.union(p, q).expect("fresh vertex");
                birth[root] = b;
            }
            BuildStep::CriticalEdge { edge, orientation } => {
                let (p, q) = (pos(edge.lo()), pos(edge.hi()));
                let (rp, rq) = (index.find(p), index.find(q));
                let (bp, bq) = (birth[rp], birth[rq]);
                *orientation = Some(if bp < bq {
                    (edge.lo(), edge.hi())
                } else {
                    (edge.hi(), edge.lo())
                });
                let root = index.union(rp, rq).expect("tree edge joins components");
                birth[root] = bp.min(bq);
            }
        }
    }
}

impl Iterator for DmfEnumerator<'_> {
    type Item = CanonicalDmf;

    fn next(&mut self) -> Option<CanonicalDmf> {
        if self.pending_complete {
            self.pending_complete = false;
            return Some(self.emit());
        }
        loop {
            let frame = self.frames.last_mut()?;
            if frame.next < frame.candidates.len() {
                let step = frame.candidates[frame.next];
                frame.next += 1;
                self.apply(step);
                if self.built_cells == self.tree.cell_count() {
                    let out = self.emit();
                    self.undo();
                    return Some(out);
                }
                let candidates = self.candidates();
                self.frames.push(Frame {
                    candidates,
                    next: 0,
                });
            } else {
                self.frames.pop();
                if !self.frames.is_empty() {
                    self.undo();
                }
            }
        }
    }
}

/// Knuth's random-probe estimate of the number of canonical functions.
pub fn estimate_dmf_count(tree: &SimpleGraph, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..samples.max(1) {
        let mut walker = DmfEnumerator::with_prefix(tree, false, &[]);
        let mut product = 1.0;
        while walker.built_cells < tree.cell_count() {
            let candidates = walker.candidates();
            if candidates.is_empty() {
                product = 0.0;
                break;
            }
            product *= candidates.len() as f64;
            let step = *candidates.choose(&mut rng).expect("nonempty");
            walker.apply(step);
        }
        total += product;
    }
    total / samples.max(1) as f64
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtlasKey {
    /// [`ChiralMergeTree::canonical_encoding`] of the elder-mode merge tree.
    pub tree: String,
    pub sequence: HomologicalSequence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasEntry {
    pub count: u64,
    pub shape: String,
    /// Whether the key's functions make every cell critical.
    pub all_critical: bool,
    pub dominates_j: bool,
}

/// All (merge tree, sequence) pairs realized on a fixed tree, with the
/// number of canonical functions realizing each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atlas {
    pub graph: SimpleGraph,
    pub entries: BTreeMap<AtlasKey, AtlasEntry>,
    pub total: u64,
}

impl Atlas {
    fn empty(graph: &SimpleGraph) -> Atlas {
        Atlas {
            graph: graph.clone(),
            entries: BTreeMap::new(),
            total: 0,
        }
    }

    fn record(&mut self, dmf: &CanonicalDmf) -> Result<(), OracleError> {
        let tree = dmf.dmf.induced_merge_tree(ChiralityMode::Elder)?;
        let sequence = dmf.dmf.homological_sequence()?;
        let key = AtlasKey {
            tree: tree.canonical_encoding(),
            sequence,
        };
        self.total += 1;
        match self.entries.get_mut(&key) {
            Some(entry) => entry.count += 1,
            None => {
                let dominates_j = key
                    .sequence
                    .dominates(&j_sequence(&tree))
                    .expect("node count equals critical count");
                self.entries.insert(
                    key,
                    AtlasEntry {
                        count: 1,
                        shape: tree.achiral_shape(),
                        all_critical: dmf.all_critical(),
                        dominates_j,
                    },
                );
            }
        }
        Ok(())
    }

    fn merge(mut self, other: Atlas) -> Atlas {
        self.total += other.total;
        for (key, entry) in other.entries {
            self.entries
                .entry(key)
                .and_modify(|e| e.count += entry.count)
                .or_insert(entry);
        }
        self
    }

    /// Multiset of (tree, sequence, count) triples, for comparing atlases
    /// of relabeled graphs.
    pub fn signature(&self) -> Vec<(String, Vec<u32>, u64)> {
        self.entries
            .iter()
            .map(|(k, e)| (k.tree.clone(), k.sequence.0.clone(), e.count))
            .collect()
    }
}

/// Groups every canonical function on `tree` by its elder-mode merge tree
/// and homological sequence. `jobs > 1` splits the search by first step
/// across a thread pool; the result does not depend on `jobs`.
pub fn realizable_atlas(
    tree: &SimpleGraph,
    options: EnumerationOptions,
    jobs: usize,
) -> Result<Atlas, OracleError> {
    check_enumerable(tree, options)?;
    let prefixes: Vec<BuildStep> = DmfEnumerator::with_prefix(tree, false, &[]).candidates();
    let branch = |step: &BuildStep| -> Result<Atlas, OracleError> {
        let mut atlas = Atlas::empty(tree);
        for dmf in DmfEnumerator::with_prefix(tree, options.elder_chirality, &[*step]) {
            atlas.record(&dmf)?;
        }
        Ok(atlas)
    };
    if jobs <= 1 {
        return prefixes
            .iter()
            .map(branch)
            .try_fold(Atlas::empty(tree), |acc, a| Ok(acc.merge(a?)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| {
        prefixes
            .par_iter()
            .map(branch)
            .collect::<Result<Vec<Atlas>, OracleError>>()
            .map(|parts| {
                parts
                    .into_iter()
                    .fold(Atlas::empty(tree), |acc, a| acc.merge(a))
            })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceRecord {
    pub sequence: HomologicalSequence,
    pub count: u64,
    pub dominates_j: bool,
    pub all_critical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeReport {
    pub tree: String,
    pub j_sequence: HomologicalSequence,
    pub sequences: Vec<SequenceRecord>,
    pub violations: usize,
}

impl TreeReport {
    pub fn verdict(&self) -> &'static str {
        if self.violations == 0 {
            "dominated"
        } else {
            "counterexample"
        }
    }
}

/// For each merge tree of an atlas, the realized sequences and whether each
/// dominates the tree's sublevel sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureReport {
    pub graph: SimpleGraph,
    pub total_dmfs: u64,
    pub trees: Vec<TreeReport>,
    /// Keys whose sequence does not dominate the sublevel sequence.
    pub violation_count: usize,
    /// The same, restricted to functions with every cell critical.
    pub all_critical_violation_count: usize,
}

impl ConjectureReport {
    pub fn counterexamples(&self) -> impl Iterator<Item = (&TreeReport, &SequenceRecord)> {
        self.trees.iter().flat_map(|t| {
            t.sequences
                .iter()
                .filter(|s| !s.dominates_j)
                .map(move |s| (t, s))
        })
    }

    /// Recomputes every derived field and compares.
    pub fn is_consistent(&self) -> bool {
        let mut total = 0;
        let mut violations = 0;
        let mut all_critical_violations = 0;
        let cells = self.graph.cell_count();
        for t in &self.trees {
            let Ok(tree) = ChiralMergeTree::from_encoding(&t.tree) else {
                return false;
            };
            if j_sequence(&tree) != t.j_sequence {
                return false;
            }
            let mut local = 0;
            for s in &t.sequences {
                total += s.count;
                if s.sequence.len() != tree.len() || (tree.len() == cells) != s.all_critical {
                    return false;
                }
                if s.sequence.dominates(&t.j_sequence) != Ok(s.dominates_j) {
                    return false;
                }
                if !s.dominates_j {
                    local += 1;
                    if s.all_critical {
                        all_critical_violations += 1;
                    }
                }
            }
            if local != t.violations {
                return false;
            }
            violations += local;
        }
        total == self.total_dmfs
            && violations == self.violation_count
            && all_critical_violations == self.all_critical_violation_count
    }
}

pub fn conjecture_report(atlas: &Atlas) -> ConjectureReport {
    let mut trees: Vec<TreeReport> = Vec::new();
    for (key, entry) in &atlas.entries {
        if trees.last().map(|t| &t.tree) != Some(&key.tree) {
            let tree = ChiralMergeTree::from_encoding(&key.tree).expect("atlas encodings parse");
            trees.push(TreeReport {
                tree: key.tree.clone(),
                j_sequence: j_sequence(&tree),
                sequences: Vec::new(),
                violations: 0,
            });
        }
        let report = trees.last_mut().expect("pushed above");
        report.sequences.push(SequenceRecord {
            sequence: key.sequence.clone(),
            count: entry.count,
            dominates_j: entry.dominates_j,
            all_critical: entry.all_critical,
        });
        if !entry.dominates_j {
            report.violations += 1;
        }
    }
    let violation_count = trees.iter().map(|t| t.violations).sum();
    let all_critical_violation_count = trees
        .iter()
        .flat_map(|t| &t.sequences)
        .filter(|s| s.all_critical && !s.dominates_j)
        .count();
    ConjectureReport {
        graph: atlas.graph.clone(),
        total_dmfs: atlas.total,
        trees,
        violation_count,
        all_critical_violation_count,
    }
}

/// A random full binary tree on `n` nodes grown by splitting uniformly
/// chosen leaves. Ids are assigned in pre-order.
pub fn random_merge_tree(n: usize, seed: u64) -> Result<ChiralMergeTree, OracleError> {
    if n.is_multiple_of(2) {
        return Err(OracleError::EvenNodeCount(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut children: Vec<Option<[usize; 2]>> = vec![None];
    let mut leaves = vec![0usize];
    while children.len() < n {
        let pick = rng.gen_range(0..leaves.len());
        let leaf = leaves.swap_remove(pick);
        let (l, r) = (children.len(), children.len() + 1);
        children.push(None);
        children.push(None);
        children[leaf] = Some([l, r]);
        leaves.push(l);
        leaves.push(r);
    }
    fn build(
        children: &[Option<[usize; 2]>],
        idx: usize,
        chirality: Chirality,
        next: &mut u64,
    ) -> RawMergeNode {
        let id = NodeId(*next);
        *next += 1;
        RawMergeNode {
            id,
            chirality,
            children: match children[idx] {
                Some([l, r]) => vec![
                    build(children, l, Chirality::L, next),
                    build(children, r, Chirality::R, next),
                ],
                None => Vec::new(),
            },
        }
    }
    let raw = build(&children, 0, Chirality::L, &mut 0);
    Ok(ChiralMergeTree::from_raw(&raw).expect("generator builds full binary trees"))
}

const LIFT_ATTEMPTS: usize = 16;

/// A valid sequence pointwise above the tree's sublevel sequence, obtained
/// by turning random down-up valleys into up-down peaks.
pub fn random_dominating_sequence(
    tree: &ChiralMergeTree,
    seed: u64,
) -> Result<HomologicalSequence, OracleError> {
    let j = j_sequence(tree);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..LIFT_ATTEMPTS {
        let mut b = j.0.clone();
        let lifts = rng.gen_range(0..=b.len());
        for _ in 0..lifts {
            let valleys: Vec<usize> = (1..b.len().saturating_sub(1))
                .filter(|&i| b[i] < b[i - 1] && b[i + 1] > b[i])
                .collect();
            let Some(&i) = valleys.choose(&mut rng) else {
                break;
            };
            b[i] += 2;
        }
        let b = HomologicalSequence(b);
        if b.is_valid() && b.dominates(&j) == Ok(true) {
            return Ok(b);
        }
    }
    Err(OracleError::LiftingFailed {
        seed,
        attempts: LIFT_ATTEMPTS,
    })
}
