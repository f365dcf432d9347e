//! Constructors for the graph families used throughout the crate: binomial
//! trees, pruned binomial trees, Knödel graphs, the root-merging compound
//! operator, stars, and paths.

use crate::error::{Error, Result};
use crate::graph::{floor_log2, vl, Graph, VertexLabel};
use std::collections::BTreeMap;

/// Construction bound: binomial trees are exponential in the degree.
pub const MAX_BINOMIAL_DEGREE: usize = 20;
/// Construction bound for Knödel graph order.
pub const MAX_KNODEL_ORDER: usize = 1 << 20;

/// Binomial tree of degree `k` on 2^k vertices.
///
/// Vertices carry binary-string labels of length `k`: the subtree containing
/// the root is prefixed `1`, its replica `0`, recursively; the root is the
/// all-ones string. A leaf is a vertex whose label ends in `0`, and `leaves`
/// lists them so that leaf `i` has label `bin(i)` (on k-1 bits) followed by
/// `0`. Leaf 0 is the deepest leaf, at distance `k` from the root.
#[derive(Debug, Clone)]
pub struct BinomialTree {
    pub graph: Graph,
    pub k: usize,
    pub root: VertexLabel,
    pub leaves: Vec<VertexLabel>,
}

/// Binary label of vertex-index style strings inside a binomial tree of
/// degree `k`: all labels of `BT_k`, root first in recursion order.
fn binomial_locals(k: usize) -> Vec<String> {
    if k == 0 {
        return vec![String::new()];
    }
    let sub = binomial_locals(k - 1);
    let mut out = Vec::with_capacity(1 << k);
    for s in &sub {
        out.push(format!("1{s}"));
    }
    for s in &sub {
        out.push(format!("0{s}"));
    }
    out
}

/// Edges of `BT_k` as local-label pairs.
pub(crate) fn binomial_edges_local(k: usize) -> Vec<(String, String)> {
    if k == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity((1 << k) - 1);
    for (a, b) in binomial_edges_local(k - 1) {
        out.push((format!("1{a}"), format!("1{b}")));
        out.push((format!("0{a}"), format!("0{b}")));
    }
    out.push(("1".repeat(k), format!("0{}", "1".repeat(k - 1))));
    out
}

pub(crate) fn binomial_root_local(k: usize) -> String {
    "1".repeat(k)
}

/// Leaf `i` of `BT_k`: bin(i) on k-1 bits, suffixed `0`. Empty for k = 0.
pub(crate) fn binomial_leaf_locals(k: usize) -> Vec<String> {
    if k == 0 {
        return Vec::new();
    }
    (0..1usize << (k - 1))
        .map(|i| {
            let mut s = String::with_capacity(k);
            for bit in (0..k - 1).rev() {
                s.push(if i >> bit & 1 == 1 { '1' } else { '0' });
            }
            s.push('0');
            s
        })
        .collect()
}

pub fn binomial_tree(k: usize) -> Result<BinomialTree> {
    binomial_tree_ns(k, "bt")
}

pub fn binomial_tree_ns(k: usize, ns: &str) -> Result<BinomialTree> {
    if k > MAX_BINOMIAL_DEGREE {
        return Err(Error::SizeLimit {
            what: "binomial tree degree",
            got: k,
            max: MAX_BINOMIAL_DEGREE,
        });
    }
    let mut graph = Graph::new();
    for local in binomial_locals(k) {
        graph.add_vertex(vl(ns, local));
    }
    for (a, b) in binomial_edges_local(k) {
        graph.add_edge(&vl(ns, a), &vl(ns, b))?;
    }
    Ok(BinomialTree {
        graph,
        k,
        root: vl(ns, binomial_root_local(k)),
        leaves: binomial_leaf_locals(k)
            .into_iter()
            .map(|l| vl(ns, l))
            .collect(),
    })
}

/// Pruned binomial tree: `BT_k` seen as a root with branches
/// `BT_{k-1}, ..., BT_0`, with the `i` smallest-order branches removed.
/// Has 2^k - 2^i + 1 vertices; `i = k` leaves a single vertex.
#[derive(Debug, Clone)]
pub struct PrunedBinomialTree {
    pub graph: Graph,
    pub k: usize,
    pub i: usize,
    pub root: VertexLabel,
    /// Roots of the remaining branches, largest branch first.
    pub branch_roots: Vec<VertexLabel>,
}

/// Locals and edges of `BT_k^{-i}` following the recursion: for i < k it is
/// `BT_{k-1}` (prefixed `1`) joined to `BT_{k-1}^{-i}` (prefixed `0`) by a
/// root edge, rooted on the pruned side; for i = k it is one vertex.
fn pruned_parts(k: usize, i: usize) -> (Vec<String>, Vec<(String, String)>, String) {
    if i == k {
        return (vec![String::new()], Vec::new(), String::new());
    }
    let full = binomial_locals(k - 1);
    let full_edges = binomial_edges_local(k - 1);
    let (sub, sub_edges, sub_root) = pruned_parts(k - 1, i);
    let mut locals: Vec<String> = full.iter().map(|s| format!("1{s}")).collect();
    locals.extend(sub.iter().map(|s| format!("0{s}")));
    let mut edges: Vec<(String, String)> = full_edges
        .into_iter()
        .map(|(a, b)| (format!("1{a}"), format!("1{b}")))
        .collect();
    edges.extend(
        sub_edges
            .into_iter()
            .map(|(a, b)| (format!("0{a}"), format!("0{b}"))),
    );
    let root = format!("0{sub_root}");
    edges.push((format!("1{}", binomial_root_local(k - 1)), root.clone()));
    (locals, edges, root)
}

pub fn pruned_binomial(k: usize, i: usize) -> Result<PrunedBinomialTree> {
    pruned_binomial_ns(k, i, "pbt")
}

pub fn pruned_binomial_ns(k: usize, i: usize, ns: &str) -> Result<PrunedBinomialTree> {
    if i > k {
        return Err(Error::InvalidArgument(format!(
            "pruned binomial tree requires i <= k, got i = {i}, k = {k}"
        )));
    }
    if k > MAX_BINOMIAL_DEGREE {
        return Err(Error::SizeLimit {
            what: "binomial tree degree",
            got: k,
            max: MAX_BINOMIAL_DEGREE,
        });
    }
    let (locals, edges, root_local) = pruned_parts(k, i);
    let mut graph = Graph::new();
    for l in &locals {
        graph.add_vertex(vl(ns, l));
    }
    for (a, b) in &edges {
        graph.add_edge(&vl(ns, a), &vl(ns, b))?;
    }
    // Branch roots, largest first: root is 0^{k-i}; the branch of order
    // k-1-j is rooted at 0^j followed by 1^{k-j}.
    let branch_roots = (0..k - i)
        .map(|j| vl(ns, format!("{}{}", "0".repeat(j), "1".repeat(k - j))))
        .collect();
    Ok(PrunedBinomialTree {
        graph,
        k,
        i,
        root: vl(ns, root_local),
        branch_roots,
    })
}

/// Knödel graph on an even number `n` of vertices: vertices `v_0..v_{n-1}`,
/// with an edge `(v_x, v_y)` of dimension `d` whenever
/// `x + y ≡ 2^d - 1 (mod n)` for some `1 <= d <= floor(log n)`. The edges of
/// one dimension form a perfect matching.
#[derive(Debug, Clone)]
pub struct KnodelGraph {
    pub graph: Graph,
    pub n: usize,
    /// Edge (smaller label first) to its dimension.
    pub dimension: BTreeMap<(VertexLabel, VertexLabel), usize>,
}

impl KnodelGraph {
    pub fn label(&self, index: usize) -> VertexLabel {
        vl("kg", index % self.n)
    }

    /// Index of the dimension-`d` neighbor of vertex index `x`.
    pub fn dim_neighbor(&self, x: usize, d: usize) -> usize {
        dim_neighbor(self.n, x, d)
    }
}

pub(crate) fn dim_neighbor(n: usize, x: usize, d: usize) -> usize {
    let target = ((1usize << d) - 1) % n;
    (target + n - x % n) % n
}

pub fn knodel(n: usize) -> Result<KnodelGraph> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "Knödel graphs require even n >= 2, got {n}"
        )));
    }
    if n > MAX_KNODEL_ORDER {
        return Err(Error::SizeLimit {
            what: "Knödel graph order",
            got: n,
            max: MAX_KNODEL_ORDER,
        });
    }
    let mut graph = Graph::new();
    for x in 0..n {
        graph.add_vertex(vl("kg", x));
    }
    let mut dimension = BTreeMap::new();
    for d in 1..=floor_log2(n) {
        for x in 0..n {
            let y = dim_neighbor(n, x, d);
            if x < y {
                let a = vl("kg", x);
                let b = vl("kg", y);
                graph.add_edge(&a, &b)?;
                let key = if a < b { (a, b) } else { (b, a) };
                dimension.insert(key, d);
            }
        }
    }
    Ok(KnodelGraph {
        graph,
        n,
        dimension,
    })
}

/// Namespace given to the replica of `tree_ns` attached at `at`.
pub(crate) fn replica_namespace(tree_ns: &str, at: &VertexLabel) -> String {
    format!("{}@{}.{}", tree_ns, at.namespace(), at.local())
}

/// Compound operator: attaches one replica of the rooted tree `tree` at every
/// vertex in `attach`, merging the replica root into the attach vertex (which
/// keeps its label). Adds `attach.len() * (|tree| - 1)` vertices.
pub fn compound(
    g: &Graph,
    attach: &[VertexLabel],
    tree: &Graph,
    tree_root: &VertexLabel,
) -> Result<Graph> {
    if !tree.has_vertex(tree_root) {
        return Err(Error::MissingVertex(tree_root.clone()));
    }
    let mut out = g.clone();
    for a in attach {
        if !out.has_vertex(a) {
            return Err(Error::MissingVertex(a.clone()));
        }
        let replica =
            tree.renamed(|v| VertexLabel::new(replica_namespace(v.namespace(), a), v.local()));
        let replica_root =
            VertexLabel::new(replica_namespace(tree_root.namespace(), a), tree_root.local());
        out = Graph::disjoint_union(&out, &replica)?;
        out.merge_in_place(a, &replica_root)?;
    }
    Ok(out)
}

/// Star on `m` vertices: center `c` plus `m - 1` pendants.
pub fn star(m: usize) -> Result<(Graph, VertexLabel)> {
    star_ns(m, "star")
}

pub fn star_ns(m: usize, ns: &str) -> Result<(Graph, VertexLabel)> {
    if m == 0 {
        return Err(Error::InvalidArgument("star size must be >= 1".into()));
    }
    let mut g = Graph::new();
    let center = vl(ns, "c");
    g.add_vertex(center.clone());
    for i in 0..m - 1 {
        let p = vl(ns, i);
        g.add_vertex(p.clone());
        g.add_edge(&center, &p)?;
    }
    Ok((g, center))
}

/// Path on `m` vertices labeled `0..m-1`; returns both endpoints.
pub fn path(m: usize) -> Result<(Graph, VertexLabel, VertexLabel)> {
    path_ns(m, "path")
}

pub fn path_ns(m: usize, ns: &str) -> Result<(Graph, VertexLabel, VertexLabel)> {
    if m == 0 {
        return Err(Error::InvalidArgument("path size must be >= 1".into()));
    }
    let mut g = Graph::new();
    for i in 0..m {
        g.add_vertex(vl(ns, i));
    }
    for i in 1..m {
        g.add_edge(&vl(ns, i - 1), &vl(ns, i))?;
    }
    Ok((g, vl(ns, 0), vl(ns, m - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_base_case() {
        let bt = binomial_tree(0).unwrap();
        assert_eq!(bt.graph.vertex_count(), 1);
        assert_eq!(bt.graph.edge_count(), 0);
        assert_eq!(bt.root.local(), "");
        assert!(bt.leaves.is_empty());
    }

    #[test]
    fn binomial_counts_and_structure() {
        for k in 0..=10 {
            let bt = binomial_tree(k).unwrap();
            assert_eq!(bt.graph.vertex_count(), 1 << k);
            assert_eq!(bt.graph.edge_count(), (1 << k) - 1);
            assert!(bt.graph.is_connected());
            bt.graph.validate().unwrap();
        }
    }

    #[test]
    fn binomial_k3_leaves_in_order() {
        let bt = binomial_tree(3).unwrap();
        let locals: Vec<&str> = bt.leaves.iter().map(|l| l.local()).collect();
        assert_eq!(locals, vec!["000", "010", "100", "110"]);
        assert_eq!(bt.graph.degree(&bt.root).unwrap(), 3);
        // deepest leaf sits at distance k from the root
        assert_eq!(
            bt.graph.distance(&bt.root, &bt.leaves[0]).unwrap(),
            Some(3)
        );
        assert_eq!(bt.graph.eccentricity(&bt.root).unwrap(), 3);
    }

    #[test]
    fn binomial_root_distance_to_first_leaf() {
        for k in 1..=8 {
            let bt = binomial_tree(k).unwrap();
            assert_eq!(
                bt.graph.distance(&bt.root, &bt.leaves[0]).unwrap(),
                Some(k)
            );
            assert_eq!(bt.leaves.len(), 1 << (k - 1));
        }
    }

    #[test]
    fn binomial_degree_bound() {
        assert!(matches!(
            binomial_tree(MAX_BINOMIAL_DEGREE + 1),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn pruned_single_vertex_when_fully_pruned() {
        for k in 0..=5 {
            let t = pruned_binomial(k, k).unwrap();
            assert_eq!(t.graph.vertex_count(), 1);
            assert!(t.branch_roots.is_empty());
        }
    }

    #[test]
    fn pruned_counts() {
        for k in 0..=8 {
            for i in 0..=k {
                let t = pruned_binomial(k, i).unwrap();
                assert_eq!(t.graph.vertex_count(), (1 << k) - (1 << i) + 1);
                assert_eq!(t.graph.edge_count(), t.graph.vertex_count() - 1);
                assert!(t.graph.is_connected());
                assert_eq!(t.branch_roots.len(), k - i);
                // root is adjacent to each branch root
                for b in &t.branch_roots {
                    assert!(t.graph.has_edge(&t.root, b));
                }
            }
        }
    }

    #[test]
    fn pruned_bt4_minus_1_has_15_vertices() {
        let t = pruned_binomial(4, 1).unwrap();
        assert_eq!(t.graph.vertex_count(), 15);
    }

    #[test]
    fn pruned_nothing_removed_matches_binomial() {
        for k in 0..=6 {
            let t = pruned_binomial(k, 0).unwrap();
            let bt = binomial_tree(k).unwrap();
            assert_eq!(t.graph.vertex_count(), bt.graph.vertex_count());
            assert_eq!(t.graph.edge_count(), bt.graph.edge_count());
            let deg_profile = |g: &Graph| {
                let mut d: Vec<usize> = g.vertices().map(|v| g.degree(v).unwrap()).collect();
                d.sort();
                d
            };
            assert_eq!(deg_profile(&t.graph), deg_profile(&bt.graph));
            assert_eq!(t.graph.degree(&t.root).unwrap(), k);
        }
    }

    #[test]
    fn knodel_minimal() {
        let kg = knodel(2).unwrap();
        assert_eq!(kg.graph.vertex_count(), 2);
        assert_eq!(kg.graph.edge_count(), 1);
        assert_eq!(kg.dimension[&(vl("kg", 0), vl("kg", 1))], 1);
    }

    #[test]
    fn knodel_6_explicit_edges() {
        let kg = knodel(6).unwrap();
        assert_eq!(kg.graph.edge_count(), 6);
        let dim = |a: usize, b: usize| {
            let (a, b) = (vl("kg", a), vl("kg", b));
            let key = if a < b { (a, b) } else { (b, a) };
            kg.dimension.get(&key).copied()
        };
        assert_eq!(dim(0, 1), Some(1));
        assert_eq!(dim(2, 5), Some(1));
        assert_eq!(dim(3, 4), Some(1));
        assert_eq!(dim(0, 3), Some(2));
        assert_eq!(dim(1, 2), Some(2));
        assert_eq!(dim(4, 5), Some(2));
        // the graph is a 6-cycle
        assert!(kg.graph.vertices().all(|v| kg.graph.degree(v).unwrap() == 2));
        assert!(kg.graph.is_connected());
        assert_eq!(
            kg.graph.distance(&vl("kg", 0), &vl("kg", 5)).unwrap(),
            Some(3)
        );
    }

    #[test]
    fn knodel_8_regularity() {
        let kg = knodel(8).unwrap();
        assert_eq!(kg.graph.edge_count(), 12);
        assert!(kg.graph.vertices().all(|v| kg.graph.degree(v).unwrap() == 3));
    }

    #[test]
    fn knodel_regular_with_perfect_matchings() {
        for n in (2..=32).step_by(2) {
            let kg = knodel(n).unwrap();
            let log = floor_log2(n);
            assert_eq!(kg.graph.vertex_count(), n);
            assert!(kg
                .graph
                .vertices()
                .all(|v| kg.graph.degree(v).unwrap() == log));
            // per-dimension perfect matching
            for d in 1..=log {
                let mut seen = std::collections::BTreeSet::new();
                for x in 0..n {
                    let y = kg.dim_neighbor(x, d);
                    assert_ne!(x, y);
                    assert_eq!(kg.dim_neighbor(y, d), x);
                    seen.insert(x.min(y));
                }
                assert_eq!(seen.len(), n / 2);
            }
            kg.graph.validate().unwrap();
        }
    }

    #[test]
    fn knodel_rejects_odd_and_zero() {
        assert!(knodel(0).is_err());
        assert!(knodel(5).is_err());
    }

    #[test]
    fn compound_with_single_vertex_tree_is_identity() {
        let bt = binomial_tree(2).unwrap();
        let unit = binomial_tree_ns(0, "u").unwrap();
        let out = compound(&bt.graph, &bt.leaves.clone(), &unit.graph, &unit.root).unwrap();
        assert_eq!(out.vertex_count(), bt.graph.vertex_count());
        assert_eq!(out.edge_count(), bt.graph.edge_count());
    }

    #[test]
    fn compound_adds_replica_counts() {
        let base = binomial_tree_ns(3, "base").unwrap();
        let t = binomial_tree_ns(3, "rep").unwrap();
        let attach = base.leaves.clone();
        let out = compound(&base.graph, &attach, &t.graph, &t.root).unwrap();
        assert_eq!(
            out.vertex_count(),
            base.graph.vertex_count() + attach.len() * 7
        );
        out.validate().unwrap();
        // pruned replicas: 15 - 1 = 14 new vertices each
        let p = pruned_binomial_ns(4, 1, "prep").unwrap();
        let out2 = compound(&base.graph, &attach, &p.graph, &p.root).unwrap();
        assert_eq!(
            out2.vertex_count(),
            base.graph.vertex_count() + attach.len() * 14
        );
    }

    #[test]
    fn compound_commutes_on_disjoint_attach_sets() {
        let base = binomial_tree_ns(3, "base").unwrap();
        let t1 = binomial_tree_ns(2, "r1").unwrap();
        let t2 = pruned_binomial_ns(3, 1, "r2").unwrap();
        let (a, b) = base.leaves.split_at(2);
        let one = compound(
            &compound(&base.graph, a, &t1.graph, &t1.root).unwrap(),
            b,
            &t2.graph,
            &t2.root,
        )
        .unwrap();
        let two = compound(
            &compound(&base.graph, b, &t2.graph, &t2.root).unwrap(),
            a,
            &t1.graph,
            &t1.root,
        )
        .unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn compound_missing_attach_vertex() {
        let base = binomial_tree_ns(2, "base").unwrap();
        let t = binomial_tree_ns(1, "rep").unwrap();
        let err = compound(&base.graph, &[vl("nope", 0)], &t.graph, &t.root).unwrap_err();
        assert!(matches!(err, Error::MissingVertex(_)));
    }

    #[test]
    fn star_and_path() {
        let (k1, _) = star(1).unwrap();
        assert_eq!(k1.vertex_count(), 1);
        let (s4, c) = star(4).unwrap();
        assert_eq!(s4.degree(&c).unwrap(), 3);
        let (p7, a, b) = path(7).unwrap();
        assert_eq!(p7.distance(&a, &b).unwrap(), Some(6));
        assert!(star(0).is_err());
        assert!(path(0).is_err());
    }

    #[test]
    fn union_of_family_graphs() {
        // BT_2 (4 vertices, 3 edges) + KG_6 (6 vertices, 6 edges)
        let bt = binomial_tree(2).unwrap();
        let kg = knodel(6).unwrap();
        let u = Graph::disjoint_union(&bt.graph, &kg.graph).unwrap();
        assert_eq!(u.vertex_count(), 10);
        assert_eq!(u.edge_count(), 9);
    }
}
