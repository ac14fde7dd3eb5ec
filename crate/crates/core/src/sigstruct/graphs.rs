//! Small structures over the single binary symbol `E`.
//!
//! "Symmetric" graphs store both arcs of every edge, so `cycle(3)` has six
//! arcs.

use super::{Signature, Structure};

/// Directed graph with the given arcs.
pub fn digraph(n: usize, arcs: &[(usize, usize)]) -> Structure {
    let sig = Signature::binary();
    let mut s = Structure::new(&sig, n).expect("small structure");
    for &(u, v) in arcs {
        s.insert(0, &[u, v]).expect("arc in range");
    }
    s
}

/// Undirected graph: both arcs of each edge.
pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Structure {
    let arcs: Vec<_> = edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
    digraph(n, &arcs)
}

/// Relation-free structure on `n` elements.
pub fn discrete(n: usize) -> Structure {
    digraph(n, &[])
}

pub fn cycle(n: usize) -> Structure {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    undirected(n, &edges)
}

pub fn complete(n: usize) -> Structure {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    undirected(n, &edges)
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Structure {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    undirected(n, &edges)
}

/// The one-element structure with a loop.
pub fn loop_point() -> Structure {
    digraph(1, &[(0, 0)])
}

/// Every labeled simple graph on `n` vertices, as edge masks over the pairs
/// `(i, j)` with `i < j` in lexicographic order.
pub fn all_simple_graphs(n: usize) -> impl Iterator<Item = Structure> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        undirected(n, &edges)
    })
}
