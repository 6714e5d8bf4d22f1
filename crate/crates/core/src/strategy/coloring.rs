use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Qubit → color index (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorAssignment {
    pub colors: Vec<usize>,
    pub num_colors: usize,
}

impl ColorAssignment {
    pub fn color(&self, qubit: usize) -> usize {
        self.colors[qubit]
    }

    /// Whether no edge joins two qubits of the same color.
    pub fn is_proper(&self, edges: &[(usize, usize)]) -> bool {
        edges.iter().all(|&(a, b)| self.colors[a] != self.colors[b])
    }
}

/// Greedy coloring in qubit-index order, lowest free color first.
pub fn color_graph(edges: &[(usize, usize)], num_qubits: usize, max_colors: usize) -> Result<ColorAssignment> {
    let mut adj = vec![Vec::new(); num_qubits];
    for &(a, b) in edges {
        if a >= num_qubits || b >= num_qubits || a == b {
            return Err(Error::InvalidEdge(a, b));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut colors: Vec<Option<usize>> = vec![None; num_qubits];
    let mut used = 0;
    for q in 0..num_qubits {
        let taken: Vec<usize> = adj[q].iter().filter_map(|&r| colors[r]).collect();
        let c = (0..).find(|c| !taken.contains(c)).expect("unbounded");
        if c + 1 > max_colors {
            return Err(Error::ColoringOverflow { needed: c + 1, max: max_colors });
        }
        used = used.max(c + 1);
        colors[q] = Some(c);
    }
    Ok(ColorAssignment { colors: colors.into_iter().map(|c| c.expect("colored")).collect(), num_colors: used.max(1) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let c = color_graph(&[(0, 1), (1, 2)], 3, 3).unwrap();
        assert_eq!(c.colors, vec![0, 1, 0]);
        let c = color_graph(&[], 5, 3).unwrap();
        assert_eq!(c.colors, vec![0; 5]);
        assert_eq!(c.num_colors, 1);
        let c = color_graph(&[(0, 1), (1, 2), (2, 0)], 3, 3).unwrap();
        assert_eq!(c.colors, vec![0, 1, 2]);
    }

    #[test]
    fn overflow() {
        let k4: Vec<_> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
        assert!(matches!(color_graph(&k4, 4, 3), Err(Error::ColoringOverflow { needed: 4, max: 3 })));
    }

    proptest! {
        #[test]
        fn greedy_is_proper(n in 2usize..20, raw in proptest::collection::vec((0usize..20, 0usize..20), 0..40)) {
            let edges: Vec<_> = raw.into_iter().map(|(a, b)| (a % n, b % n)).filter(|(a, b)| a != b).collect();
            let c = color_graph(&edges, n, n).unwrap();
            prop_assert!(c.is_proper(&edges));
        }
    }
}
