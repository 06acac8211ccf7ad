#![allow(dead_code)]

use netsync::numerics::Matrix;
use netsync::Graph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Erdős–Rényi graph on `n` nodes with edge probability `p`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

/// Rejection-samples a connected graph with `min_n..=max_n` nodes.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, min_n: usize, max_n: usize) -> Graph {
    loop {
        let n = rng.gen_range(min_n..=max_n);
        let p = rng.gen_range(0.2..0.95);
        let g = random_graph(rng, n, p);
        if g.is_connected() {
            return g;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Matrix {
    let data = (0..n * n).map(|_| rng.gen_range(-scale..scale)).collect();
    Matrix::new(n, n, data).unwrap()
}

/// Pairs of nodes not joined in `g`.
pub fn non_edges(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.node_count();
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| !g.has_edge(i, j))
        .collect()
}
