//! Deterministic test corpora: every tree up to a given order, seeded random
//! connected graphs, and seeded random rooted trees. Used by the test suites
//! to drive solver/oracle comparisons; all generation is reproducible from
//! the seed.

use crate::graph::{vl, Graph, VertexLabel};
use std::collections::BTreeMap;

/// splitmix64; good enough for corpus generation and fully deterministic
/// across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        SplitMix(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next_u64() % den < num
    }
}

fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(vl("g", i));
    }
    for (a, b) in edges {
        g.add_edge(&vl("g", *a), &vl("g", *b)).unwrap();
    }
    g
}

/// Labeled tree from a Prüfer sequence over `0..n-1` (n >= 2).
fn tree_from_prufer(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaf_heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    for &s in &seq[..n - 2] {
        let std::cmp::Reverse(leaf) = leaf_heap.pop().unwrap();
        edges.push((leaf.min(s), leaf.max(s)));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaf_heap.push(std::cmp::Reverse(s));
        }
    }
    let std::cmp::Reverse(a) = leaf_heap.pop().unwrap();
    let std::cmp::Reverse(b) = leaf_heap.pop().unwrap();
    edges.push((a.min(b), a.max(b)));
    edges
}

/// Canonical form of an unlabeled tree: AHU encoding rooted at the centroid
/// (or the smaller encoding of the two centroids).
fn tree_canonical(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    fn encode(v: usize, parent: usize, adj: &[Vec<usize>]) -> String {
        let mut parts: Vec<String> = adj[v]
            .iter()
            .filter(|&&c| c != parent)
            .map(|&c| encode(c, v, adj))
            .collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    // centroid(s) by repeated leaf stripping
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut removed = vec![false; n];
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            remaining -= 1;
            for &u in &adj[v] {
                if !removed[u] {
                    deg[u] -= 1;
                    if deg[u] == 1 {
                        next.push(u);
                    }
                }
            }
        }
        layer = next;
    }
    let centers: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    centers
        .iter()
        .map(|&c| encode(c, usize::MAX, &adj))
        .min()
        .unwrap()
}

/// Every unlabeled tree with `min_n..=max_n` vertices, one labeled
/// representative each, enumerated by Prüfer sequences and deduplicated by
/// canonical form.
pub fn all_trees(min_n: usize, max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in min_n..=max_n {
        if n == 1 {
            out.push(graph_from_edges(1, &[]));
            continue;
        }
        if n == 2 {
            out.push(graph_from_edges(2, &[(0, 1)]));
            continue;
        }
        let mut seen = BTreeMap::new();
        let mut seq = vec![0usize; n - 2];
        loop {
            let edges = tree_from_prufer(n, &seq);
            let canon = tree_canonical(n, &edges);
            seen.entry(canon).or_insert(edges);
            // odometer over sequences
            let mut pos = 0;
            loop {
                if pos == n - 2 {
                    break;
                }
                seq[pos] += 1;
                if seq[pos] < n {
                    break;
                }
                seq[pos] = 0;
                pos += 1;
            }
            if pos == n - 2 {
                break;
            }
        }
        out.extend(seen.into_values().map(|e| graph_from_edges(n, &e)));
    }
    out
}

/// `count` random connected graphs with `min_n..=max_n` vertices.
pub fn random_connected_graphs(
    count: usize,
    min_n: usize,
    max_n: usize,
    rng: &mut SplitMix,
) -> Vec<Graph> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = min_n + rng.below(max_n - min_n + 1);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.chance(2, 5) {
                    edges.push((a, b));
                }
            }
        }
        let g = graph_from_edges(n, &edges);
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// Random labeled tree on `n` vertices with a root, via a random Prüfer
/// sequence.
pub fn random_rooted_tree(n: usize, rng: &mut SplitMix) -> (Graph, VertexLabel) {
    let g = match n {
        1 => graph_from_edges(1, &[]),
        2 => graph_from_edges(2, &[(0, 1)]),
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.below(n)).collect();
            graph_from_edges(n, &tree_from_prufer(n, &seq))
        }
    };
    let root = vl("g", rng.below(n));
    (g, root)
}

/// The corpus used by the oracle-agreement and broadcast-center suites: all
/// trees on 2..=7 vertices plus seeded random connected graphs, at least
/// `total` graphs overall.
pub fn solver_catalog(total: usize, seed: u64) -> Vec<Graph> {
    let mut graphs = all_trees(2, 7);
    let mut rng = SplitMix::new(seed);
    let missing = total.saturating_sub(graphs.len());
    graphs.extend(random_connected_graphs(missing, 2, 7, &mut rng));
    graphs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts_match_known_sequence() {
        // unlabeled trees on 1..7 vertices: 1, 1, 1, 2, 3, 6, 11
        let expected = [1usize, 1, 1, 2, 3, 6, 11];
        for (n, want) in expected.iter().enumerate().map(|(i, w)| (i + 1, w)) {
            assert_eq!(all_trees(n, n).len(), *want, "n = {n}");
        }
        assert_eq!(all_trees(2, 7).len(), 24);
    }

    #[test]
    fn trees_are_trees() {
        for t in all_trees(2, 7) {
            assert!(t.is_connected());
            assert_eq!(t.edge_count(), t.vertex_count() - 1);
            t.validate().unwrap();
        }
    }

    #[test]
    fn random_graphs_are_connected_and_deterministic() {
        let mut rng1 = SplitMix::new(42);
        let mut rng2 = SplitMix::new(42);
        let a = random_connected_graphs(25, 2, 7, &mut rng1);
        let b = random_connected_graphs(25, 2, 7, &mut rng2);
        assert_eq!(a, b);
        for g in &a {
            assert!(g.is_connected());
            assert!(g.vertex_count() >= 2 && g.vertex_count() <= 7);
        }
    }

    #[test]
    fn catalog_reaches_requested_size() {
        let c = solver_catalog(60, 7);
        assert!(c.len() >= 60);
    }
}
