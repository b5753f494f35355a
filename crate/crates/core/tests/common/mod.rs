//! Reference implementations shared by the integration and acceptance
//! targets. Nothing here calls the library's own validity checks.
#![allow(dead_code)]

use std::collections::BTreeSet;

use morse_merge::{DiscreteMorseFunction, SimpleGraph, VertexId};

/// Counts order types of valid discrete Morse functions on the graph with
/// vertices `0..n` and the given edges: every map from cells onto an initial
/// segment `0..k` that is weakly increasing on incidences, at most 2-to-1,
/// and ties only on incident vertex/edge pairs.
pub fn brute_force_order_types(n: usize, edges: &[(usize, usize)]) -> u64 {
    let m = n + edges.len();
    let mut values = vec![0usize; m];
    let mut count = 0;
    loop {
        if is_order_type(&values) && is_morse(n, edges, &values) {
            count += 1;
        }
        // Odometer over all m^m assignments.
        let mut i = 0;
        loop {
            if i == m {
                return count;
            }
            values[i] += 1;
            if values[i] < m {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}

fn is_order_type(values: &[usize]) -> bool {
    let used: BTreeSet<usize> = values.iter().copied().collect();
    used.iter().enumerate().all(|(i, &v)| i == v)
}

fn is_morse(n: usize, edges: &[(usize, usize)], values: &[usize]) -> bool {
    for (k, &(u, v)) in edges.iter().enumerate() {
        let fe = values[n + k];
        if values[u] > fe || values[v] > fe {
            return false;
        }
    }
    for a in 0..values.len() {
        let tied: Vec<usize> = (0..values.len())
            .filter(|&b| b != a && values[b] == values[a])
            .collect();
        match tied.as_slice() {
            [] => {}
            [b] => {
                let (vertex, edge) = match (a < n, *b < n) {
                    (true, false) => (a, b - n),
                    (false, true) => (*b, a - n),
                    _ => return false,
                };
                let (x, y) = edges[edge];
                if vertex != x && vertex != y {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// Number of components of each sublevel complex at the critical values,
/// recomputed from scratch per level.
pub fn recomputed_sequence(f: &DiscreteMorseFunction) -> Vec<u32> {
    let critical = f.critical_values().expect("valid function");
    critical
        .iter()
        .map(|c| {
            let vertices: Vec<VertexId> = f
                .graph()
                .vertices()
                .iter()
                .copied()
                .filter(|&v| f.value(morse_merge::Cell::Vertex(v)).unwrap() <= *c)
                .collect();
            let edges: Vec<(VertexId, VertexId)> = f
                .graph()
                .edges()
                .iter()
                .filter(|&&e| f.value(morse_merge::Cell::Edge(e)).unwrap() <= *c)
                .map(|e| (e.lo(), e.hi()))
                .collect();
            SimpleGraph::new(vertices, edges)
                .expect("sublevel set of a function is a subcomplex")
                .components()
                .len() as u32
        })
        .collect()
}

/// Name, vertex count and edges of a small tree.
pub type TreeSpec = (String, usize, Vec<(usize, usize)>);

/// Every tree with at most `max_cells` cells, up to isomorphism, as
/// (vertex count, edges).
pub fn small_trees(max_cells: usize) -> Vec<TreeSpec> {
    let all = vec![
        ("vertex".to_string(), 1, vec![]),
        ("edge".to_string(), 2, vec![(0, 1)]),
        ("path-3".to_string(), 3, vec![(0, 1), (1, 2)]),
        ("path-4".to_string(), 4, vec![(0, 1), (1, 2), (2, 3)]),
        ("star-3".to_string(), 4, vec![(0, 1), (0, 2), (0, 3)]),
    ];
    all.into_iter()
        .filter(|(_, n, e)| n + e.len() <= max_cells)
        .collect()
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
    let e: Vec<(u32, u32)> = edges.iter().map(|&(u, v)| (u as u32, v as u32)).collect();
    SimpleGraph::from_indices(n as u32, &e).unwrap()
}

/// All chiral merge trees with exactly `n` nodes, as canonical encodings.
pub fn all_shapes(n: usize) -> Vec<String> {
    fn go(n: usize, letter: char) -> Vec<String> {
        if n == 1 {
            return vec![letter.to_string()];
        }
        let mut out = Vec::new();
        for left in (1..n - 1).step_by(2) {
            for l in go(left, 'L') {
                for r in go(n - 1 - left, 'R') {
                    out.push(format!("{letter}({l},{r})"));
                }
            }
        }
        out
    }
    go(n, 'L')
}

/// All valid sequences of length `n` (start and end at 1, unit steps,
/// never below 1) that dominate `lower` pointwise.
pub fn dominating_sequences(lower: &[u32]) -> Vec<Vec<u32>> {
    fn go(lower: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = lower.len();
        let j = cur.len();
        if j == n {
            if *cur.last().unwrap() == 1 {
                out.push(cur.clone());
            }
            return;
        }
        let prev = cur[j - 1];
        for next in [prev + 1, prev.saturating_sub(1)] {
            // Must be able to walk back down to 1 by the end.
            if next >= 1 && next >= lower[j] && (next as usize) <= n - j {
                cur.push(next);
                go(lower, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if lower.first().is_some_and(|&x| x <= 1) {
        go(lower, &mut vec![1], &mut out);
    }
    out
}
