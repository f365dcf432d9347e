//! The construction turning a single-origin time-bounded broadcast instance
//! (G_s, v_s) into a broadcast-graph instance G_u, plus the constructive
//! schemes showing that yes-instances broadcast in exactly t + 4 rounds from
//! any originator.
//!
//! Layout of G_u for t = ceil(log n_s): a 6-vertex Knödel graph whose
//! positions are v_s (position 0) and the roots r_1..r_5 of five binomial
//! trees of degree t + 1; a sixth tree of degree t hangs off v_s; every
//! vertex of G_s, T_1, T_5, T_6 is joined to both r_1 and r_5, and every
//! vertex of T_2, T_3, T_4 to both r_2 and r_4.

use super::ReductionArtifact;
use crate::error::{Error, Result};
use crate::families::{binomial_root_local, binomial_tree_ns, knodel};
use crate::graph::{ceil_log2, vl, Graph, VertexLabel};
use crate::schemes::{
    binomial_calls_local, knodel_rounds_by_position, validate_scheme, BroadcastScheme,
};

/// Namespaces reserved for the gadget; the source graph must avoid them.
pub(crate) const RESERVED: [&str; 7] = ["kg", "t1", "t2", "t3", "t4", "t5", "t6"];

fn tree_ns(i: usize) -> String {
    format!("t{i}")
}

/// Builds G_u from an STBT instance (`g_s`, `v_s`).
///
/// Params recorded: `n_s`, `t`, `expected_time` (t + 4), `expected_vertices`
/// (11 * 2^t + n_s, which the built graph matches exactly),
/// `expected_edges` (the deduplicated count the built graph matches
/// exactly), and `edges_formula_sum` (the per-step accounting total
/// 33 * 2^t + 2 n_s + |E_s| + 1, which counts tree edges, self-pairs,
/// repeated pairs, and already-present edges without deduplication and so
/// exceeds the built count by 4t + 12).
pub fn bg_from_stbt(g_s: &Graph, v_s: &VertexLabel) -> Result<ReductionArtifact> {
    let n_s = g_s.vertex_count();
    if n_s < 2 {
        return Err(Error::InvalidInstance(
            "the source graph needs at least 2 vertices".into(),
        ));
    }
    if !g_s.has_vertex(v_s) {
        return Err(Error::MissingVertex(v_s.clone()));
    }
    if !g_s.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(v) = g_s
        .vertices()
        .find(|v| RESERVED.contains(&v.namespace()))
    {
        return Err(Error::NamespaceCollision(v.clone()));
    }
    let e_s = g_s.edge_count();
    let t = ceil_log2(n_s);

    let kg = knodel(6)?;
    let mut g = kg.graph.clone();
    let mut tree_vertices: Vec<Vec<VertexLabel>> = vec![Vec::new()];
    let mut roots: Vec<VertexLabel> = vec![v_s.clone()]; // position 0 after merging
    for i in 1..=6 {
        let degree = if i == 6 { t } else { t + 1 };
        let tree = binomial_tree_ns(degree, &tree_ns(i))?;
        g = Graph::disjoint_union(&g, &tree.graph)?;
        tree_vertices.push(tree.graph.vertices().cloned().collect());
        if i <= 5 {
            // the Knödel vertex absorbs the tree root and keeps its label
            g.merge_in_place(&vl("kg", i), &tree.root)?;
            roots.push(vl("kg", i));
        } else {
            roots.push(tree.root.clone());
        }
    }
    // replace merged roots by their surviving labels in the membership lists
    for i in 1..=5 {
        let old_root = vl(&tree_ns(i), binomial_root_local(t + 1));
        for v in tree_vertices[i].iter_mut() {
            if *v == old_root {
                *v = roots[i].clone();
            }
        }
    }
    g = Graph::disjoint_union(&g, g_s)?;
    g.merge_in_place(v_s, &vl("kg", 0))?;

    // step 5: join G_s, T_1, T_5, T_6 to both r_1 and r_5
    let lhs: Vec<VertexLabel> = g_s
        .vertices()
        .cloned()
        .chain(tree_vertices[1].iter().cloned())
        .chain(tree_vertices[5].iter().cloned())
        .chain(tree_vertices[6].iter().cloned())
        .collect();
    for u in &lhs {
        for r in [&roots[1], &roots[5]] {
            if u != r && !g.has_edge(u, r) {
                g.add_edge(u, r)?;
            }
        }
    }
    g.add_edge(v_s, &roots[6])?;
    // step 6: join T_2, T_3, T_4 to both r_2 and r_4
    let rhs: Vec<VertexLabel> = tree_vertices[2]
        .iter()
        .chain(tree_vertices[3].iter())
        .chain(tree_vertices[4].iter())
        .cloned()
        .collect();
    for u in &rhs {
        for r in [&roots[2], &roots[4]] {
            if u != r && !g.has_edge(u, r) {
                g.add_edge(u, r)?;
            }
        }
    }

    let pow = 1i64 << t;
    let expected_vertices = 11 * pow + n_s as i64;
    debug_assert_eq!(g.vertex_count() as i64, expected_vertices);
    let formula_sum = 33 * pow + 2 * n_s as i64 + e_s as i64 + 1;
    let expected_edges = formula_sum - (4 * t as i64 + 12);
    debug_assert_eq!(g.edge_count() as i64, expected_edges);

    let mut art = ReductionArtifact::new(g);
    art.set_mark("originator", v_s.clone());
    for (i, r) in roots.iter().enumerate().skip(1) {
        art.set_mark(format!("root:{i}"), r.clone());
    }
    for (i, r) in roots.iter().enumerate() {
        art.set_mark(format!("kg:{i}"), r.clone());
    }
    art.set_param("n_s", n_s as i64);
    art.set_param("e_s", e_s as i64);
    art.set_param("t", t as i64);
    art.set_param("expected_time", t as i64 + 4);
    art.set_param("expected_vertices", expected_vertices);
    art.set_param("expected_edges", expected_edges);
    art.set_param("edges_formula_sum", formula_sum);
    Ok(art)
}

/// The induced copy of the source graph inside the artifact: every vertex
/// outside the reserved gadget namespaces, with the edges among them.
pub(crate) fn source_subgraph(art: &ReductionArtifact) -> Graph {
    let mut g = Graph::new();
    for v in art.graph.vertices() {
        if !RESERVED.contains(&v.namespace()) {
            g.add_vertex(v.clone());
        }
    }
    let labels: Vec<VertexLabel> = g.vertices().cloned().collect();
    for a in &labels {
        for b in art.graph.neighbors(a).expect("vertex") {
            if a < b && g.has_vertex(b) {
                g.add_edge(a, b).expect("induced edge");
            }
        }
    }
    g
}

/// Originator placement relative to the gadget.
enum OriginCase {
    /// On a Knödel position (v_s or one of r_1..r_5).
    Knodel(usize),
    /// In G_s, T_1, T_5 or T_6: adjacent to both r_1 and r_5.
    Left,
    /// In T_2, T_3 or T_4: adjacent to both r_2 and r_4.
    Right,
}

/// Certifying scheme for a yes-instance: broadcasts from `originator` in
/// exactly t + 4 rounds, given a scheme `inner` that broadcasts G_s from
/// v_s within t rounds.
///
/// Rounds 1-3 inform the whole Knödel subgraph (dimensionally when the
/// originator sits on it; otherwise the originator drives its two gadget
/// neighbors and they finish the rest). From round 4 the five big trees run
/// their binomial schemes, v_s hands off to the sixth tree, and from round 5
/// G_s replays `inner` while T_6 completes — everything landing on t + 4.
pub fn bg_yes_scheme(
    art: &ReductionArtifact,
    originator: &VertexLabel,
    inner: &BroadcastScheme,
) -> Result<BroadcastScheme> {
    let t = art.param("t")? as usize;
    if !art.graph.has_vertex(originator) {
        return Err(Error::MissingVertex(originator.clone()));
    }
    let positions: Vec<VertexLabel> = (0..6)
        .map(|i| art.mark(&format!("kg:{i}")).cloned())
        .collect::<Result<_>>()?;
    let v_s = positions[0].clone();
    let r_6 = art.mark("root:6")?.clone();

    // the inner scheme must broadcast the source graph from v_s within t
    let g_s = source_subgraph(art);
    if inner.origins.iter().collect::<Vec<_>>() != vec![&v_s] {
        return Err(Error::InvalidWitness(format!(
            "inner scheme must originate at `{v_s}`"
        )));
    }
    let inner_time = validate_scheme(&g_s, inner)
        .map_err(|e| Error::InvalidWitness(format!("inner scheme invalid: {e}")))?;
    if inner_time > t {
        return Err(Error::InvalidWitness(format!(
            "inner scheme takes {inner_time} rounds, more than t = {t}"
        )));
    }

    let case = if let Some(p) = positions.iter().position(|p| p == originator) {
        OriginCase::Knodel(p)
    } else {
        match originator.namespace() {
            "t2" | "t3" | "t4" => OriginCase::Right,
            _ => OriginCase::Left, // t1, t5, t6 and all of G_s
        }
    };

    let mut s = BroadcastScheme::new([originator.clone()]);
    match case {
        OriginCase::Knodel(p) => {
            for (idx, round) in knodel_rounds_by_position(6, p).into_iter().enumerate() {
                for (a, b) in round {
                    s.push_call(idx + 1, positions[a].clone(), positions[b].clone());
                }
            }
        }
        OriginCase::Left => {
            // reach r_1 and r_5 directly, then sweep the ring
            s.push_call(1, originator.clone(), positions[1].clone());
            s.push_call(2, originator.clone(), positions[5].clone());
            s.push_call(2, positions[1].clone(), positions[0].clone());
            s.push_call(3, positions[1].clone(), positions[2].clone());
            s.push_call(3, positions[0].clone(), positions[3].clone());
            s.push_call(3, positions[5].clone(), positions[4].clone());
        }
        OriginCase::Right => {
            s.push_call(1, originator.clone(), positions[2].clone());
            s.push_call(2, originator.clone(), positions[4].clone());
            s.push_call(2, positions[2].clone(), positions[1].clone());
            s.push_call(3, positions[1].clone(), positions[0].clone());
            s.push_call(3, positions[2].clone(), positions[5].clone());
            s.push_call(3, positions[4].clone(), positions[3].clone());
        }
    }

    // round 4 on: the five big trees broadcast from their roots; calls to an
    // already-informed originator are dropped (it is inside at most one tree)
    for i in 1..=5 {
        push_tree_calls(
            &mut s,
            3,
            &tree_ns(i),
            t + 1,
            &positions[i],
            Some(originator),
        );
    }
    // v_s hands off to the sixth tree unless that root originated
    if *originator != r_6 {
        s.push_call(4, v_s.clone(), r_6.clone());
    }
    push_tree_calls(&mut s, 4, &tree_ns(6), t, &r_6, Some(originator));
    // G_s replays the inner scheme in rounds 5..=t+4
    for (idx, calls) in inner.rounds.iter().enumerate() {
        for c in calls {
            if c.to == *originator {
                continue;
            }
            s.push_call(4 + idx + 1, c.from.clone(), c.to.clone());
        }
    }
    Ok(s)
}

/// Emits the binomial scheme of the degree-`k` tree in namespace `ns`,
/// shifted to start after round `base`, with the root's local label replaced
/// by `root` (tree roots may have been merged away) and calls to `skip`
/// dropped.
fn push_tree_calls(
    s: &mut BroadcastScheme,
    base: usize,
    ns: &str,
    k: usize,
    root: &VertexLabel,
    skip: Option<&VertexLabel>,
) {
    let root_local = binomial_root_local(k);
    let map = |local: &String| {
        if *local == root_local {
            root.clone()
        } else {
            vl(ns, local.clone())
        }
    };
    for (idx, calls) in binomial_calls_local(k).into_iter().enumerate() {
        for (a, b) in calls {
            let from = map(&a);
            let to = map(&b);
            if skip == Some(&to) {
                continue;
            }
            s.push_call(base + idx + 1, from, to);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{random_connected_graphs, SplitMix};
    use crate::families::path_ns;
    use crate::schemes::knodel_scheme;

    fn p4_instance() -> (Graph, VertexLabel) {
        let (g, a, _) = path_ns(4, "src").unwrap();
        (g, a)
    }

    #[test]
    fn count_closed_forms_on_grid() {
        let mut rng = SplitMix::new(0xBC);
        for n_s in 2..=10usize {
            let sources = random_connected_graphs(3, n_s, n_s, &mut rng);
            for g_s in sources {
                let v_s = g_s.vertices().next().unwrap().clone();
                let art = bg_from_stbt(&g_s, &v_s).unwrap();
                let t = art.param("t").unwrap();
                let pow = 1i64 << t;
                assert_eq!(
                    art.graph.vertex_count() as i64,
                    11 * pow + n_s as i64,
                    "n_s={n_s}"
                );
                assert_eq!(
                    art.param("expected_vertices").unwrap(),
                    art.graph.vertex_count() as i64
                );
                assert_eq!(
                    art.param("expected_edges").unwrap(),
                    art.graph.edge_count() as i64
                );
                // the per-step accounting total exceeds the deduplicated
                // edge count by exactly 4t + 12
                assert_eq!(
                    art.param("edges_formula_sum").unwrap(),
                    art.graph.edge_count() as i64 + 4 * t + 12
                );
                art.graph.validate().unwrap();
            }
        }
    }

    #[test]
    fn example_counts() {
        // n_s = 2: 24 vertices and ceil(log 24) = 5 = t + 4
        let (k2, _, _) = path_ns(2, "src").unwrap();
        let v = vl("src", 0);
        let art = bg_from_stbt(&k2, &v).unwrap();
        assert_eq!(art.graph.vertex_count(), 24);
        assert_eq!(ceil_log2(24), 5);
        assert_eq!(art.param("expected_time").unwrap(), 5);
        // n_s = 5 (t = 3): 93 vertices
        let (p5, a, _) = path_ns(5, "src").unwrap();
        let art = bg_from_stbt(&p5, &a).unwrap();
        assert_eq!(art.graph.vertex_count(), 93);
        // n_s = 4 path: the per-step accounting total is 144
        let (p4, a, _) = path_ns(4, "src").unwrap();
        let art = bg_from_stbt(&p4, &a).unwrap();
        assert_eq!(art.param("edges_formula_sum").unwrap(), 144);
        assert_eq!(art.graph.edge_count() as i64, 144 - (4 * 2 + 12));
    }

    #[test]
    fn ring_cross_edges_form_a_cut() {
        // the only edges between T_2 ∪ T_3 ∪ T_4 and the rest are the four
        // Knödel ring edges (r_1,r_2), (r_2,r_5), (r_4,r_5), (v_s,r_3);
        // removing them disconnects the gadget
        let (g_s, v_s) = p4_instance();
        let art = bg_from_stbt(&g_s, &v_s).unwrap();
        let pos: Vec<VertexLabel> = (0..6)
            .map(|i| art.mark(&format!("kg:{i}")).unwrap().clone())
            .collect();
        let mut cut = art.graph.clone();
        for (a, b) in [(1, 2), (2, 5), (4, 5), (0, 3)] {
            assert!(cut.remove_edge(&pos[a], &pos[b]).unwrap());
        }
        assert!(!cut.is_connected());
        // and the separated side is exactly T_2 ∪ T_3 ∪ T_4 (the roots
        // r_2, r_3, r_4 kept their ring labels when the trees were merged in)
        let reach = cut.bfs_distances(&pos[0]).unwrap();
        for v in cut.vertices() {
            let right = matches!(v.namespace(), "t2" | "t3" | "t4")
                || [&pos[2], &pos[3], &pos[4]].contains(&v);
            assert_eq!(!reach.contains_key(v), right, "vertex {v}");
        }
    }

    #[test]
    fn yes_schemes_cover_all_three_cases() {
        // source: Knödel graph on 4 vertices, a yes-instance (b = 2 = t)
        let kg4 = crate::families::knodel(4).unwrap();
        let g_s = kg4.graph.renamed(|v| vl("src", v.local()));
        let v_s = vl("src", 0);
        let inner_raw = knodel_scheme(4, &vl("kg", 0)).unwrap();
        let mut inner = BroadcastScheme::new([v_s.clone()]);
        for (idx, calls) in inner_raw.rounds.iter().enumerate() {
            for c in calls {
                inner.push_call(idx + 1, vl("src", c.from.local()), vl("src", c.to.local()));
            }
        }
        let art = bg_from_stbt(&g_s, &v_s).unwrap();
        let t4 = art.param("expected_time").unwrap() as usize;
        // one originator per proof case, plus corner placements
        let originators = vec![
            v_s.clone(),                  // Knödel position 0
            art.mark("kg:3").unwrap().clone(), // Knödel position 3
            vl("t1", "011"),              // inside T_1
            vl("t5", "000"),              // deepest leaf of T_5
            vl("t6", "01"),               // inside T_6
            vl("t6", "00"),               // deepest descendant of the sixth root
            art.mark("root:6").unwrap().clone(), // the sixth root itself
            vl("src", 2),                 // inside G_s
            vl("t3", "000"),              // inside T_3 (right side)
            vl("t2", "110"),              // inside T_2
            vl("t4", "011"),              // inside T_4
        ];
        for o in originators {
            let s = bg_yes_scheme(&art, &o, &inner).unwrap();
            assert_eq!(
                validate_scheme(&art.graph, &s).unwrap(),
                t4,
                "originator {o}"
            );
        }
    }

    #[test]
    fn rejects_slow_or_misrooted_inner_schemes() {
        let (g_s, v_s) = p4_instance();
        let art = bg_from_stbt(&g_s, &v_s).unwrap();
        // a P4 endpoint broadcast takes 3 > t = 2 rounds
        let mut slow = BroadcastScheme::new([v_s.clone()]);
        slow.push_call(1, vl("src", 0), vl("src", 1));
        slow.push_call(2, vl("src", 1), vl("src", 2));
        slow.push_call(3, vl("src", 2), vl("src", 3));
        assert!(matches!(
            bg_yes_scheme(&art, &v_s, &slow),
            Err(Error::InvalidWitness(_))
        ));
        // wrong origin
        let wrong = BroadcastScheme::new([vl("src", 1)]);
        assert!(bg_yes_scheme(&art, &v_s, &wrong).is_err());
    }

    #[test]
    fn rejects_bad_sources() {
        let mut disconnected = Graph::new();
        disconnected.add_vertex(vl("src", 0));
        disconnected.add_vertex(vl("src", 1));
        assert!(bg_from_stbt(&disconnected, &vl("src", 0)).is_err());
        let (reserved, a, _) = path_ns(3, "t1").unwrap();
        assert!(matches!(
            bg_from_stbt(&reserved, &a),
            Err(Error::NamespaceCollision(_))
        ));
        let mut tiny = Graph::new();
        tiny.add_vertex(vl("src", 0));
        assert!(bg_from_stbt(&tiny, &vl("src", 0)).is_err());
    }
}
