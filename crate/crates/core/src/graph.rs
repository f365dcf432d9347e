//! Labeled simple undirected graphs and the primitive operations the rest of
//! the crate builds on.
//!
//! Vertex identity is label-based: a label carries a `namespace` naming the
//! component it came from (a tree, a gadget, a user graph) and a `local` part.
//! This lets gadget builders locate pieces like "leaf 0 of tree t3" after
//! several graphs have been glued together by unions and merges.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// A vertex label: `namespace:local`. Namespaces must not contain `:` so the
/// string form round-trips.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexLabel {
    namespace: String,
    local: String,
}

impl VertexLabel {
    /// Panics if the namespace contains `:`; namespaces are chosen by
    /// builders, not parsed from input.
    pub fn new(namespace: impl Into<String>, local: impl Into<String>) -> Self {
        let namespace = namespace.into();
        assert!(
            !namespace.contains(':'),
            "namespace must not contain ':', got `{namespace}`"
        );
        VertexLabel {
            namespace,
            local: local.into(),
        }
    }

    /// Parses the `namespace:local` string form.
    pub fn parse(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((ns, local)) => Ok(VertexLabel {
                namespace: ns.to_string(),
                local: local.to_string(),
            }),
            None => Err(Error::Parse(format!(
                "vertex label `{s}` is missing a `:` separator"
            ))),
        }
    }

    pub fn namespace(&self) -> &str {
        &self.namespace
    }

    pub fn local(&self) -> &str {
        &self.local
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.namespace, self.local)
    }
}

impl Serialize for VertexLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for VertexLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        VertexLabel::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Shorthand used all over the crate and its tests.
pub fn vl(namespace: &str, local: impl ToString) -> VertexLabel {
    VertexLabel::new(namespace, local.to_string())
}

/// A labeled simple undirected graph.
///
/// Invariants maintained by construction and checked by [`Graph::validate`]:
/// adjacency is symmetric, there are no self-loops or duplicate edges, and
/// every adjacency endpoint is a vertex of the graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adjacency: BTreeMap<VertexLabel, BTreeSet<VertexLabel>>,
    /// Labels absorbed into a surviving vertex by `merge_vertices`.
    provenance: BTreeMap<VertexLabel, Vec<VertexLabel>>,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    /// Returns false if the vertex was already present.
    pub fn add_vertex(&mut self, v: VertexLabel) -> bool {
        match self.adjacency.entry(v) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(BTreeSet::new());
                true
            }
            std::collections::btree_map::Entry::Occupied(_) => false,
        }
    }

    /// Adds an undirected edge. Returns false if the edge already existed.
    /// Both endpoints must be present; self-loops are rejected.
    pub fn add_edge(&mut self, a: &VertexLabel, b: &VertexLabel) -> Result<bool> {
        if a == b {
            return Err(Error::SelfLoop(a.clone()));
        }
        if !self.adjacency.contains_key(a) {
            return Err(Error::MissingVertex(a.clone()));
        }
        if !self.adjacency.contains_key(b) {
            return Err(Error::MissingVertex(b.clone()));
        }
        let fresh = self.adjacency.get_mut(a).unwrap().insert(b.clone());
        self.adjacency.get_mut(b).unwrap().insert(a.clone());
        Ok(fresh)
    }

    /// Removes an edge if present; returns whether it existed.
    pub fn remove_edge(&mut self, a: &VertexLabel, b: &VertexLabel) -> Result<bool> {
        if !self.adjacency.contains_key(a) {
            return Err(Error::MissingVertex(a.clone()));
        }
        if !self.adjacency.contains_key(b) {
            return Err(Error::MissingVertex(b.clone()));
        }
        let removed = self.adjacency.get_mut(a).unwrap().remove(b);
        self.adjacency.get_mut(b).unwrap().remove(a);
        Ok(removed)
    }

    pub fn has_vertex(&self, v: &VertexLabel) -> bool {
        self.adjacency.contains_key(v)
    }

    pub fn has_edge(&self, a: &VertexLabel, b: &VertexLabel) -> bool {
        self.adjacency.get(a).is_some_and(|n| n.contains(b))
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(|n| n.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexLabel> {
        self.adjacency.keys()
    }

    /// Each edge once, with endpoints in label order.
    pub fn edges(&self) -> impl Iterator<Item = (&VertexLabel, &VertexLabel)> {
        self.adjacency
            .iter()
            .flat_map(|(a, nbrs)| nbrs.iter().filter(move |b| a < *b).map(move |b| (a, b)))
    }

    pub fn neighbors(&self, v: &VertexLabel) -> Result<&BTreeSet<VertexLabel>> {
        self.adjacency
            .get(v)
            .ok_or_else(|| Error::MissingVertex(v.clone()))
    }

    pub fn degree(&self, v: &VertexLabel) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }

    /// Labels that were merged into `v`, in merge order.
    pub fn provenance(&self, v: &VertexLabel) -> &[VertexLabel] {
        self.provenance.get(v).map_or(&[], |p| p.as_slice())
    }

    /// Namespaces present in the graph.
    pub fn namespaces(&self) -> BTreeSet<&str> {
        self.adjacency.keys().map(|v| v.namespace()).collect()
    }

    /// Union of two vertex-disjoint graphs. The namespaces of the two sides
    /// must be disjoint; the caller renames if they are not.
    pub fn disjoint_union(g1: &Graph, g2: &Graph) -> Result<Graph> {
        let ns1 = g1.namespaces();
        if let Some(v) = g2.vertices().find(|v| ns1.contains(v.namespace())) {
            return Err(Error::NamespaceCollision(v.clone()));
        }
        let mut out = g1.clone();
        out.adjacency
            .extend(g2.adjacency.iter().map(|(k, v)| (k.clone(), v.clone())));
        out.provenance
            .extend(g2.provenance.iter().map(|(k, v)| (k.clone(), v.clone())));
        Ok(out)
    }

    /// Identifies `b` with `a`. The surviving vertex keeps `a`'s label, its
    /// neighborhood becomes N(a) ∪ N(b) minus the pair itself, and `b` is
    /// recorded in `a`'s provenance. Self-loops and parallel edges collapse.
    pub fn merge_vertices(&self, a: &VertexLabel, b: &VertexLabel) -> Result<Graph> {
        let mut out = self.clone();
        out.merge_in_place(a, b)?;
        Ok(out)
    }

    pub(crate) fn merge_in_place(&mut self, a: &VertexLabel, b: &VertexLabel) -> Result<()> {
        if a == b {
            return Err(Error::MergeSelf(a.clone()));
        }
        if !self.adjacency.contains_key(a) {
            return Err(Error::MissingVertex(a.clone()));
        }
        let b_nbrs = self
            .adjacency
            .remove(b)
            .ok_or_else(|| Error::MissingVertex(b.clone()))?;
        for n in &b_nbrs {
            let set = self.adjacency.get_mut(n).expect("symmetric adjacency");
            set.remove(b);
            if n != a {
                set.insert(a.clone());
            }
        }
        let a_set = self.adjacency.get_mut(a).unwrap();
        a_set.remove(b);
        a_set.extend(b_nbrs.into_iter().filter(|n| n != a));
        let mut absorbed = self.provenance.remove(b).unwrap_or_default();
        absorbed.insert(0, b.clone());
        self.provenance.entry(a.clone()).or_default().extend(absorbed);
        Ok(())
    }

    /// Breadth-first distances from `from` to every reachable vertex.
    pub fn bfs_distances(&self, from: &VertexLabel) -> Result<BTreeMap<VertexLabel, usize>> {
        if !self.has_vertex(from) {
            return Err(Error::MissingVertex(from.clone()));
        }
        let mut dist = BTreeMap::new();
        dist.insert(from.clone(), 0usize);
        let mut queue = VecDeque::new();
        queue.push_back(from.clone());
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for n in &self.adjacency[&v] {
                if !dist.contains_key(n) {
                    dist.insert(n.clone(), d + 1);
                    queue.push_back(n.clone());
                }
            }
        }
        Ok(dist)
    }

    /// Shortest-path length in edges; `None` when `u` and `v` are in
    /// different components.
    pub fn distance(&self, u: &VertexLabel, v: &VertexLabel) -> Result<Option<usize>> {
        if !self.has_vertex(v) {
            return Err(Error::MissingVertex(v.clone()));
        }
        Ok(self.bfs_distances(u)?.get(v).copied())
    }

    /// Maximum distance from `v`; the graph must be connected.
    pub fn eccentricity(&self, v: &VertexLabel) -> Result<usize> {
        let dist = self.bfs_distances(v)?;
        if dist.len() != self.vertex_count() {
            return Err(Error::Disconnected);
        }
        Ok(dist.values().copied().max().unwrap_or(0))
    }

    pub fn is_connected(&self) -> bool {
        match self.adjacency.keys().next() {
            None => true,
            Some(start) => self
                .bfs_distances(start)
                .map(|d| d.len() == self.vertex_count())
                .unwrap_or(false),
        }
    }

    /// Checks the structural invariants: symmetry, no self-loops, endpoints
    /// present. Graphs built through this API always pass; this exists for
    /// tests and for graphs loaded from files.
    pub fn validate(&self) -> Result<()> {
        for (v, nbrs) in &self.adjacency {
            for n in nbrs {
                if n == v {
                    return Err(Error::SelfLoop(v.clone()));
                }
                match self.adjacency.get(n) {
                    None => return Err(Error::MissingVertex(n.clone())),
                    Some(back) if !back.contains(v) => {
                        return Err(Error::InvalidArgument(format!(
                            "asymmetric adjacency between `{v}` and `{n}`"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Copy of the graph with every vertex moved into a new namespace. The
    /// mapping must stay injective, which holds whenever all vertices share
    /// one `local` scheme per namespace.
    pub fn renamed(&self, rename: impl Fn(&VertexLabel) -> VertexLabel) -> Graph {
        let mut out = Graph::new();
        for v in self.vertices() {
            out.add_vertex(rename(v));
        }
        for (a, b) in self.edges() {
            out.add_edge(&rename(a), &rename(b)).expect("renamed edge");
        }
        out
    }
}

/// Smallest `k` with `2^k >= n`: the information-theoretic broadcast floor
/// for an `n`-vertex graph.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n > 0);
    n.next_power_of_two().trailing_zeros() as usize
}

pub(crate) fn floor_log2(n: usize) -> usize {
    assert!(n > 0);
    (usize::BITS - 1 - n.leading_zeros()) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(ns: &str, m: usize) -> Graph {
        let mut g = Graph::new();
        for i in 0..m {
            g.add_vertex(vl(ns, i));
        }
        for i in 1..m {
            g.add_edge(&vl(ns, i - 1), &vl(ns, i)).unwrap();
        }
        g
    }

    #[test]
    fn union_of_singletons() {
        let mut a = Graph::new();
        a.add_vertex(vl("a", 0));
        let mut b = Graph::new();
        b.add_vertex(vl("b", 0));
        let u = Graph::disjoint_union(&a, &b).unwrap();
        assert_eq!(u.vertex_count(), 2);
        assert_eq!(u.edge_count(), 0);
    }

    #[test]
    fn union_adds_counts() {
        let u = Graph::disjoint_union(&path_graph("p2", 2), &path_graph("p3", 3)).unwrap();
        assert_eq!(u.vertex_count(), 5);
        assert_eq!(u.edge_count(), 3);
        u.validate().unwrap();
    }

    #[test]
    fn union_rejects_namespace_collision() {
        let err = Graph::disjoint_union(&path_graph("p", 2), &path_graph("p", 3)).unwrap_err();
        assert!(matches!(err, Error::NamespaceCollision(_)));
    }

    #[test]
    fn union_preserves_distances_within_parts() {
        let g1 = path_graph("a", 4);
        let g2 = path_graph("b", 5);
        let u = Graph::disjoint_union(&g1, &g2).unwrap();
        assert_eq!(u.distance(&vl("a", 0), &vl("a", 3)).unwrap(), Some(3));
        assert_eq!(u.distance(&vl("b", 0), &vl("b", 4)).unwrap(), Some(4));
        assert_eq!(u.distance(&vl("a", 0), &vl("b", 0)).unwrap(), None);
    }

    #[test]
    fn merge_path_endpoints() {
        // a-b-c, merge(a, c) -> two vertices, one edge
        let g = path_graph("p", 3);
        let m = g.merge_vertices(&vl("p", 0), &vl("p", 2)).unwrap();
        assert_eq!(m.vertex_count(), 2);
        assert_eq!(m.edge_count(), 1);
        assert!(m.has_edge(&vl("p", 0), &vl("p", 1)));
        assert_eq!(m.provenance(&vl("p", 0)), &[vl("p", 2)]);
        m.validate().unwrap();
    }

    #[test]
    fn merge_adjacent_collapses_loops_and_parallels() {
        let mut g = path_graph("t", 3);
        g.add_edge(&vl("t", 0), &vl("t", 2)).unwrap(); // triangle
        let m = g.merge_vertices(&vl("t", 0), &vl("t", 1)).unwrap();
        assert_eq!(m.vertex_count(), 2);
        assert_eq!(m.edge_count(), 1);
        m.validate().unwrap();
    }

    #[test]
    fn merge_errors() {
        let g = path_graph("p", 3);
        assert!(matches!(
            g.merge_vertices(&vl("p", 0), &vl("p", 0)),
            Err(Error::MergeSelf(_))
        ));
        assert!(matches!(
            g.merge_vertices(&vl("p", 0), &vl("q", 9)),
            Err(Error::MissingVertex(_))
        ));
    }

    #[test]
    fn merge_never_increases_distances() {
        // d(merged, x) <= min(d(a, x), d(b, x)) for all x, distances taken
        // before the merge.
        let mut g = path_graph("c", 8);
        g.add_edge(&vl("c", 7), &vl("c", 0)).unwrap(); // cycle
        let a = vl("c", 1);
        let b = vl("c", 5);
        let before_a = g.bfs_distances(&a).unwrap();
        let before_b = g.bfs_distances(&b).unwrap();
        let m = g.merge_vertices(&a, &b).unwrap();
        for (x, d) in m.bfs_distances(&a).unwrap() {
            let bound = before_a[&x].min(before_b[&x]);
            assert!(d <= bound, "distance to {x} grew: {d} > {bound}");
        }
    }

    #[test]
    fn distance_basics() {
        let g = path_graph("p", 4);
        assert_eq!(g.distance(&vl("p", 2), &vl("p", 2)).unwrap(), Some(0));
        assert_eq!(g.distance(&vl("p", 0), &vl("p", 3)).unwrap(), Some(3));
        assert!(g.distance(&vl("p", 0), &vl("x", 0)).is_err());
    }

    #[test]
    fn eccentricity_basics() {
        let g = path_graph("p", 6);
        assert_eq!(g.eccentricity(&vl("p", 0)).unwrap(), 5);
        let mut star = Graph::new();
        star.add_vertex(vl("s", "c"));
        for i in 0..4 {
            star.add_vertex(vl("s", format!("p{i}")));
            star.add_edge(&vl("s", "c"), &vl("s", format!("p{i}"))).unwrap();
        }
        assert_eq!(star.eccentricity(&vl("s", "c")).unwrap(), 1);
        let two = Graph::disjoint_union(&path_graph("a", 2), &path_graph("b", 2)).unwrap();
        assert!(matches!(
            two.eccentricity(&vl("a", 0)),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn label_parse_round_trip() {
        let v = vl("t1", "010");
        let back = VertexLabel::parse(&v.to_string()).unwrap();
        assert_eq!(v, back);
        assert!(VertexLabel::parse("no-separator").is_err());
        // empty local is legal (the degree-0 binomial tree root)
        let e = VertexLabel::parse("bt:").unwrap();
        assert_eq!(e.local(), "");
    }

    #[test]
    fn log_helpers() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(floor_log2(8), 3);
        assert_eq!(floor_log2(9), 3);
    }
}
