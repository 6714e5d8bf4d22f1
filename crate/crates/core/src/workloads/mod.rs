//! Circuit generators and circuit transformations used for training and
//! benchmarking.

pub mod bv;
pub mod cliffordize;
pub mod ghz;
pub mod grover;
pub mod mirror;
pub mod mrb;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bv::bv_circuit;
pub use cliffordize::cliffordize;
pub use ghz::ghz_circuit;
pub use grover::{default_grover_iterations, grover_circuit, grover_success_closed_form};
pub use mirror::mirror_circuit;
pub use mrb::{edge_grab_sample, mrb_circuit, mrb_training_set, MrbFlavor, MrbSpec};

/// Qubit connectivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub num_qubits: usize,
    pub edges: Vec<(usize, usize)>,
}

// A 27-qubit heavy-hex fragment.
const HEAVY_HEX_27: [(usize, usize); 28] = [
    (0, 1), (1, 2), (1, 4), (2, 3), (3, 5), (4, 7), (5, 8), (6, 7), (7, 10), (8, 9), (8, 11), (10, 12),
    (11, 14), (12, 13), (12, 15), (13, 14), (14, 16), (15, 18), (16, 19), (17, 18), (18, 21), (19, 20),
    (19, 22), (21, 23), (22, 25), (23, 24), (24, 25), (25, 26),
];

impl Topology {
    pub fn new(num_qubits: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(a, b) in &edges {
            if a == b || a >= num_qubits || b >= num_qubits {
                return Err(Error::InvalidEdge(a, b));
            }
        }
        Ok(Topology { num_qubits, edges })
    }

    pub fn linear(n: usize) -> Self {
        Topology { num_qubits: n, edges: (1..n).map(|i| (i - 1, i)).collect() }
    }

    pub fn all_to_all(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Topology { num_qubits: n, edges }
    }

    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let q = r * cols + c;
                if c + 1 < cols {
                    edges.push((q, q + 1));
                }
                if r + 1 < rows {
                    edges.push((q, q + cols));
                }
            }
        }
        Topology { num_qubits: rows * cols, edges }
    }

    pub fn heavy_hex_fragment() -> Self {
        Topology { num_qubits: 27, edges: HEAVY_HEX_27.to_vec() }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }

    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| if a == q { Some(b) } else if b == q { Some(a) } else { None })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Breadth-first order from `root`, with the parent of each visited
    /// node (`None` for the root).
    pub fn bfs(&self, root: usize) -> Vec<(usize, Option<usize>)> {
        let mut seen = vec![false; self.num_qubits];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([(root, None)]);
        seen[root] = true;
        while let Some((q, parent)) = queue.pop_front() {
            order.push((q, parent));
            for n in self.neighbors(q) {
                if !seen[n] {
                    seen[n] = true;
                    queue.push_back((n, Some(q)));
                }
            }
        }
        order
    }

    /// The subgraph induced by `nodes`, relabelled `nodes[i] -> i`.
    pub fn induced(&self, nodes: &[usize]) -> Topology {
        let pos = |q: usize| nodes.iter().position(|&n| n == q);
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((pos(a)?, pos(b)?)))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        Topology { num_qubits: nodes.len(), edges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        assert_eq!(Topology::linear(4).edges, vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(Topology::all_to_all(4).edges.len(), 6);
        assert_eq!(Topology::grid(2, 3).edges.len(), 7);
        let hh = Topology::heavy_hex_fragment();
        assert_eq!(hh.bfs(0).len(), 27);
        assert!((0..27).all(|q| hh.neighbors(q).len() <= 3));
        assert!(Topology::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn induced_relabels() {
        let t = Topology::linear(5).induced(&[2, 3, 4]);
        assert_eq!(t, Topology { num_qubits: 3, edges: vec![(0, 1), (1, 2)] });
    }
}
