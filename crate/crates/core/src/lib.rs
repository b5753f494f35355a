//! Discrete Morse functions on trees, their induced merge trees and
//! homological sequences, and the reverse direction: realizing a chiral
//! merge tree together with a dominating homological sequence as a discrete
//! Morse function on a path.
//!
//! ```
//! use morse_merge::merge_tree::ChiralMergeTree;
//! use morse_merge::morse::{ChiralityMode, HomologicalSequence};
//! use morse_merge::realize::realize_with_homology;
//!
//! let tree: ChiralMergeTree = "10(4(2(0,1),3),9(8,7(6,5)))".parse().unwrap();
//! let b = HomologicalSequence(vec![1, 2, 3, 2, 3, 4, 3, 2, 3, 2, 1]);
//! let r = realize_with_homology(&tree, &b).unwrap();
//! assert_eq!(r.dmf.homological_sequence().unwrap(), b);
//! assert!(r.dmf.induced_merge_tree(ChiralityMode::Oriented).unwrap().same_shape(&tree));
//! ```

pub mod graph;
pub mod io;
pub mod merge_tree;
pub mod morse;
pub mod oracle;
pub mod realize;

pub use graph::{ComponentIndex, Edge, SimpleGraph, VertexId};
pub use merge_tree::{ChiralMergeTree, Chirality, NodeId, NodeOrder, PathWord};
pub use morse::{Cell, ChiralityMode, DiscreteMorseFunction, HomologicalSequence, Value};
pub use realize::{realize_path, realize_with_homology, RealizationResult};
