//! Simple undirected graphs, their Laplacians and complements, and the structural
//! metrics used to compare networks (degree sequence, average distance, clustering,
//! betweenness).
//!
//! Node labels are 1-based everywhere in the public API, matching the graph file
//! format.

use std::collections::{BTreeSet, VecDeque};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Immutable simple undirected graph on nodes `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

/// On-disk shape of a graph: `{ "n": int, "edges": [[i, j], …] }`, 1-indexed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphFile> for Graph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(file.n, &pairs)
    }
}

impl From<Graph> for GraphFile {
    fn from(g: Graph) -> Self {
        GraphFile {
            n: g.n,
            edges: g.edges.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }
}

/// Per-node and mean local clustering coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Clustering {
    pub per_node: Vec<f64>,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructuralMetrics {
    pub degree_sequence: Vec<usize>,
    #[serde(serialize_with = "serialize_ratio")]
    pub average_distance: Ratio<u64>,
    pub clustering: Clustering,
    pub betweenness: Vec<f64>,
}

fn serialize_ratio<S: serde::Serializer>(
    r: &Ratio<u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

impl Graph {
    /// Builds a graph, normalizing each pair to `i < j` and dropping duplicates.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "graph needs at least one node".into(),
            ));
        }
        let mut set = BTreeSet::new();
        for &(i, j) in edges {
            set.insert(normalize(n, i, j)?);
        }
        Ok(Self::from_set(n, set))
    }

    fn from_set(n: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in &edges {
            adjacency[i - 1].push(j - 1);
            adjacency[j - 1].push(i - 1);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Graph {
            n,
            edges,
            adjacency,
        }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Graph::new(n, &[])
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .collect();
        Graph::new(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(
                "a cycle needs at least 3 nodes".into(),
            ));
        }
        let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        edges.push((1, n));
        Graph::new(n, &edges)
    }

    /// Complete bipartite `K_{n,n}` on parts `{1..n}` and `{n+1..2n}`.
    pub fn bipartite(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "bipartite generator needs n >= 1".into(),
            ));
        }
        let edges: Vec<_> = (1..=n)
            .flat_map(|i| (n + 1..=2 * n).map(move |j| (i, j)))
            .collect();
        Graph::new(2 * n, &edges)
    }

    /// Two copies of `K_n` on `{1..n}` and `{n+1..2n}` joined by the matching `i ↔ n+i`.
    pub fn matched_cliques(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(
                "matched-cliques generator needs n >= 2".into(),
            ));
        }
        let mut edges = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                edges.push((i, j));
                edges.push((n + i, n + j));
            }
            edges.push((i, n + i));
        }
        Graph::new(2 * n, &edges)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as normalized 1-based pairs `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        normalize(self.n, i, j)
            .map(|e| self.edges.contains(&e))
            .unwrap_or(false)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v - 1].len()
    }

    /// 0-based neighbor lists.
    pub(crate) fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Positive semidefinite Laplacian `D − A`.
    pub fn laplacian(&self) -> Matrix {
        let mut l = Matrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            let (a, b) = (i - 1, j - 1);
            l[(a, b)] = -1.0;
            l[(b, a)] = -1.0;
            l[(a, a)] += 1.0;
            l[(b, b)] += 1.0;
        }
        l
    }

    pub fn complement(&self) -> Graph {
        let mut set = BTreeSet::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                if !self.edges.contains(&(i, j)) {
                    set.insert((i, j));
                }
            }
        }
        Graph::from_set(self.n, set)
    }

    pub fn add_edge(&self, i: usize, j: usize) -> Result<Graph> {
        let e = normalize(self.n, i, j)?;
        if self.edges.contains(&e) {
            return Err(Error::DuplicateEdge(e.0, e.1));
        }
        let mut set = self.edges.clone();
        set.insert(e);
        Ok(Graph::from_set(self.n, set))
    }

    /// Connected components as sorted lists of 1-based nodes, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut parts = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut part = vec![start + 1];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        part.push(w + 1);
                        queue.push_back(w);
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    // BFS hop distances from `source` (0-based); `usize::MAX` marks unreachable nodes.
    fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Mean hop distance over unordered node pairs, as an exact fraction.
    pub fn average_distance(&self) -> Result<Ratio<u64>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if self.n < 2 {
            return Ok(Ratio::from_integer(0));
        }
        let mut total = 0u64;
        for s in 0..self.n {
            let dist = self.bfs_distances(s);
            total += dist[s + 1..].iter().map(|&d| d as u64).sum::<u64>();
        }
        let pairs = (self.n * (self.n - 1) / 2) as u64;
        Ok(Ratio::new(total, pairs))
    }

    /// Local clustering coefficients; nodes of degree below 2 get 0.
    pub fn clustering(&self) -> Clustering {
        let per_node: Vec<f64> = (0..self.n)
            .map(|v| {
                let nbrs = &self.adjacency[v];
                let d = nbrs.len();
                if d < 2 {
                    return 0.0;
                }
                let mut links = 0usize;
                for (a, &x) in nbrs.iter().enumerate() {
                    for &y in &nbrs[a + 1..] {
                        if self.adjacency[x].binary_search(&y).is_ok() {
                            links += 1;
                        }
                    }
                }
                links as f64 / (d * (d - 1) / 2) as f64
            })
            .collect();
        let mean = per_node.iter().sum::<f64>() / self.n as f64;
        Clustering { per_node, mean }
    }

    /// Unnormalized shortest-path betweenness over ordered source/target pairs
    /// (endpoints excluded), by Brandes accumulation.
    pub fn betweenness(&self) -> Result<Vec<f64>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let n = self.n;
        let mut centrality = vec![0.0; n];
        let mut stack = Vec::with_capacity(n);
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![usize::MAX; n];
        let mut delta = vec![0.0f64; n];
        for s in 0..n {
            stack.clear();
            preds.iter_mut().for_each(Vec::clear);
            sigma.iter_mut().for_each(|x| *x = 0.0);
            dist.iter_mut().for_each(|x| *x = usize::MAX);
            sigma[s] = 1.0;
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                stack.push(v);
                for &w in &self.adjacency[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                    if dist[w] == dist[v] + 1 {
                        sigma[w] += sigma[v];
                        preds[w].push(v);
                    }
                }
            }
            delta.iter_mut().for_each(|x| *x = 0.0);
            while let Some(w) = stack.pop() {
                for &v in &preds[w] {
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
                if w != s {
                    centrality[w] += delta[w];
                }
            }
        }
        Ok(centrality)
    }

    pub fn structural_metrics(&self) -> Result<StructuralMetrics> {
        Ok(StructuralMetrics {
            degree_sequence: self.degree_sequence(),
            average_distance: self.average_distance()?,
            clustering: self.clustering(),
            betweenness: self.betweenness()?,
        })
    }
}

fn normalize(n: usize, i: usize, j: usize) -> Result<(usize, usize)> {
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::InvalidEdge(i, j, n));
    }
    Ok((i.min(j), i.max(j)))
}
