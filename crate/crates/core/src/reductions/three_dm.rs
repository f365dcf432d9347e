//! 3-dimensional matching instances, their graph representation, and the
//! construction mapping a 3DM instance to a single-origin time-bounded
//! broadcast instance with target time ceil(log w) + 5.

use super::ReductionArtifact;
use crate::error::{Error, Result};
use crate::families::{
    binomial_root_local, binomial_tree_ns, compound, path_ns, pruned_binomial_ns,
    replica_namespace,
};
use crate::graph::{ceil_log2, vl, Graph, VertexLabel};
use crate::schemes::{binomial_calls_local, pruned_calls_local, BroadcastScheme};
use std::collections::BTreeSet;

/// A 3DM instance: disjoint element sets X, Y, Z of size k and a list of
/// triples W given as index triples into (X, Y, Z).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeDMInstance {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub triples: Vec<[usize; 3]>,
}

impl ThreeDMInstance {
    pub fn new(
        x: Vec<String>,
        y: Vec<String>,
        z: Vec<String>,
        triples: Vec<[usize; 3]>,
    ) -> Result<Self> {
        let k = x.len();
        if k == 0 {
            return Err(Error::InvalidInstance("element sets must be nonempty".into()));
        }
        if y.len() != k || z.len() != k {
            return Err(Error::InvalidInstance(format!(
                "element sets must have equal size, got {k}, {}, {}",
                y.len(),
                z.len()
            )));
        }
        if triples.is_empty() {
            return Err(Error::InvalidInstance("triple list must be nonempty".into()));
        }
        for set in [&x, &y, &z] {
            let distinct: BTreeSet<&String> = set.iter().collect();
            if distinct.len() != set.len() {
                return Err(Error::InvalidInstance("duplicate element name".into()));
            }
            if set.iter().any(|n| n.contains(':') || n.is_empty()) {
                return Err(Error::InvalidInstance(
                    "element names must be nonempty and must not contain ':'".into(),
                ));
            }
        }
        let mut seen = BTreeSet::new();
        for t in &triples {
            if t.iter().any(|i| *i >= k) {
                return Err(Error::InvalidInstance(format!(
                    "triple {t:?} references an element out of range"
                )));
            }
            if !seen.insert(*t) {
                return Err(Error::InvalidInstance(format!("duplicate triple {t:?}")));
            }
        }
        Ok(ThreeDMInstance { x, y, z, triples })
    }

    pub fn k(&self) -> usize {
        self.x.len()
    }

    pub fn w(&self) -> usize {
        self.triples.len()
    }

    /// The instance pictured in the appendix example: k = 3 with the three
    /// diagonal triples plus (x3, y2, z1).
    pub fn fig_a1_style() -> Self {
        ThreeDMInstance::new(
            vec!["x1".into(), "x2".into(), "x3".into()],
            vec!["y1".into(), "y2".into(), "y3".into()],
            vec!["z1".into(), "z2".into(), "z3".into()],
            vec![[0, 0, 0], [1, 1, 1], [2, 2, 2], [2, 1, 0]],
        )
        .expect("valid instance")
    }

    /// Checks that the given triple indices form a 3-dimensional matching of
    /// size k.
    pub fn is_matching(&self, chosen: &BTreeSet<usize>) -> bool {
        if chosen.len() != self.k() {
            return false;
        }
        let mut used = [vec![false; self.k()], vec![false; self.k()], vec![false; self.k()]];
        for &idx in chosen {
            let Some(t) = self.triples.get(idx) else {
                return false;
            };
            for c in 0..3 {
                if used[c][t[c]] {
                    return false;
                }
                used[c][t[c]] = true;
            }
        }
        true
    }
}

/// Graph representation of a 3DM instance: one vertex per element and per
/// triple, each triple adjacent to its three elements. 3k + w vertices and
/// 3w edges.
pub fn graph_of_3dm(inst: &ThreeDMInstance) -> Graph {
    let mut g = Graph::new();
    for name in &inst.x {
        g.add_vertex(vl("x", name));
    }
    for name in &inst.y {
        g.add_vertex(vl("y", name));
    }
    for name in &inst.z {
        g.add_vertex(vl("z", name));
    }
    for (i, [x, y, z]) in inst.triples.iter().enumerate() {
        let w = vl("w", i);
        g.add_vertex(w.clone());
        g.add_edge(&w, &vl("x", &inst.x[*x])).expect("fresh edge");
        g.add_edge(&w, &vl("y", &inst.y[*y])).expect("fresh edge");
        g.add_edge(&w, &vl("z", &inst.z[*z])).expect("fresh edge");
    }
    g
}

const TOP_NS: &str = "top";
const BT3_NS: &str = "bt3";
const PBT_NS: &str = "pb41";

/// Builds the time-bounded broadcast instance for a 3DM input:
///
/// * a top binomial tree of degree ceil(log w) + 1 whose root is the
///   originator,
/// * its leaves split in order into L1 (k leaves), L2 (w - k), L3 (rest),
/// * a degree-3 binomial tree compounded onto each L1 leaf and a once-pruned
///   degree-4 tree onto each L2 leaf,
/// * the 3DM graph, with L1 ∪ L2 completely joined to the triple vertices,
/// * two pendants on every X element and one on every Y element.
///
/// Total vertex count is 15w + 2^(ceil(log w)+1) - k; the expected broadcast
/// time from the originator is ceil(log w) + 5, and a warning is recorded
/// when that differs from ceil(log |V|) (small parameter points).
///
/// Inputs with w < k cannot have a matching and are mapped to a canonical
/// trivial no-instance (a path of four vertices broadcast from an endpoint).
pub fn stbt_from_3dm(inst: &ThreeDMInstance) -> Result<ReductionArtifact> {
    let k = inst.k();
    let w = inst.w();
    if w < k {
        let (p4, a, _) = path_ns(4, "noinst")?;
        let mut art = ReductionArtifact::new(p4);
        art.set_mark("originator", a);
        art.set_param("k", k as i64);
        art.set_param("w", w as i64);
        art.set_param("expected_time", 2); // ceil(log 4); a P4 endpoint needs 3
        art.set_param("expected_vertices", 4);
        art.warnings
            .push("w < k admits no matching; built the canonical no-instance".into());
        return Ok(art);
    }
    let logw = ceil_log2(w);
    let top = binomial_tree_ns(logw + 1, TOP_NS)?;
    let leaves = top.leaves.clone();
    debug_assert_eq!(leaves.len(), 1 << logw);
    let (l1, rest) = leaves.split_at(k);
    let (l2, l3) = rest.split_at(w - k);

    let bt3 = binomial_tree_ns(3, BT3_NS)?;
    let pb = pruned_binomial_ns(4, 1, PBT_NS)?;
    let mut g = compound(&top.graph, l1, &bt3.graph, &bt3.root)?;
    g = compound(&g, l2, &pb.graph, &pb.root)?;

    let g0 = graph_of_3dm(inst);
    g = Graph::disjoint_union(&g, &g0)?;
    for leaf in l1.iter().chain(l2) {
        for i in 0..w {
            g.add_edge(leaf, &vl("w", i))?;
        }
    }
    for name in &inst.x {
        for (ns, pend) in [("xp", "p"), ("xpp", "pp")] {
            let p = vl(ns, format!("{name}.{pend}"));
            g.add_vertex(p.clone());
            g.add_edge(&vl("x", name), &p)?;
        }
    }
    for name in &inst.y {
        let p = vl("yp", format!("{name}.p"));
        g.add_vertex(p.clone());
        g.add_edge(&vl("y", name), &p)?;
    }

    let expected_vertices = 15 * w + (1usize << (logw + 1)) - k;
    debug_assert_eq!(g.vertex_count(), expected_vertices);
    let expected_time = logw + 5;

    let mut art = ReductionArtifact::new(g);
    art.set_mark("originator", top.root.clone());
    for (i, v) in l1.iter().enumerate() {
        art.set_mark(format!("l1:{i}"), v.clone());
    }
    for (i, v) in l2.iter().enumerate() {
        art.set_mark(format!("l2:{i}"), v.clone());
    }
    for (i, v) in l3.iter().enumerate() {
        art.set_mark(format!("l3:{i}"), v.clone());
    }
    for i in 0..w {
        art.set_mark(format!("w:{i}"), vl("w", i));
    }
    art.set_param("k", k as i64);
    art.set_param("w", w as i64);
    art.set_param("log_w", logw as i64);
    art.set_param("expected_time", expected_time as i64);
    art.set_param("expected_vertices", expected_vertices as i64);
    if ceil_log2(expected_vertices) != expected_time {
        art.warnings.push(format!(
            "target time {expected_time} differs from ceil(log |V|) = {}; the instance is \
             outside the range where the target matches the floor",
            ceil_log2(expected_vertices)
        ));
    }
    Ok(art)
}

/// The certifying scheme for a yes-instance: given a valid matching, builds
/// the broadcast from the originator that completes in exactly
/// ceil(log w) + 5 rounds.
///
/// Phases: the top tree runs its binomial scheme through round log w + 1;
/// at +2 each L1 leaf calls its matched triple while each L2 leaf starts its
/// pruned tree; the matched triples then relay x, y, z (whose pendants
/// absorb the spare rounds); at +5 the L2 leaves, free once their pruned
/// trees are self-sustaining, call the unmatched triples.
pub fn stbt_yes_scheme(
    art: &ReductionArtifact,
    inst: &ThreeDMInstance,
    matching: &BTreeSet<usize>,
) -> Result<BroadcastScheme> {
    let k = art.param("k")? as usize;
    let w = art.param("w")? as usize;
    if w < k {
        return Err(Error::InvalidWitness(
            "no-instances (w < k) have no certifying scheme".into(),
        ));
    }
    if !inst.is_matching(matching) {
        return Err(Error::InvalidWitness(format!(
            "{matching:?} is not a 3-dimensional matching of size {k}"
        )));
    }
    let logw = art.param("log_w")? as usize;
    let origin = art.mark("originator")?.clone();
    let mut s = BroadcastScheme::new([origin]);

    // rounds 1..=logw+1: binomial broadcast in the top tree
    for (idx, calls) in binomial_calls_local(logw + 1).into_iter().enumerate() {
        for (a, b) in calls {
            s.push_call(idx + 1, vl(TOP_NS, a), vl(TOP_NS, b));
        }
    }
    let base = logw + 1;

    // L1 leaves call their matched triples at +2, then broadcast in their
    // degree-3 trees during +3..+5
    let matched: Vec<usize> = matching.iter().copied().collect();
    for (i, &widx) in matched.iter().enumerate() {
        let leaf = art.mark(&format!("l1:{i}"))?.clone();
        s.push_call(base + 1, leaf.clone(), vl("w", widx));
        push_replica_tree_calls(
            &mut s,
            base + 1,
            &leaf,
            BT3_NS,
            &binomial_calls_local(3),
            binomial_root_local(3),
        );
        // the matched triple relays its elements, which relay their pendants
        let [xi, yi, zi] = inst.triples[widx];
        let (x, y, z) = (
            vl("x", &inst.x[xi]),
            vl("y", &inst.y[yi]),
            vl("z", &inst.z[zi]),
        );
        s.push_call(base + 2, vl("w", widx), x.clone());
        s.push_call(base + 3, vl("w", widx), y.clone());
        s.push_call(base + 4, vl("w", widx), z);
        s.push_call(base + 3, x.clone(), vl("xp", format!("{}.p", inst.x[xi])));
        s.push_call(base + 4, x, vl("xpp", format!("{}.pp", inst.x[xi])));
        s.push_call(base + 4, y, vl("yp", format!("{}.p", inst.y[yi])));
    }

    // L2 leaves broadcast in their pruned trees during +2..+4 and are
    // released at +5 to call the unmatched triples
    let unmatched: Vec<usize> = (0..w).filter(|i| !matching.contains(i)).collect();
    for (j, &widx) in unmatched.iter().enumerate() {
        let leaf = art.mark(&format!("l2:{j}"))?.clone();
        push_replica_tree_calls(
            &mut s,
            base,
            &leaf,
            PBT_NS,
            &pruned_calls_local(4, 1),
            "000".to_string(),
        );
        s.push_call(base + 4, leaf, vl("w", widx));
    }
    Ok(s)
}

/// Replays tree-local calls inside the compound replica attached at `at`,
/// offset so that round 1 of the tree scheme lands at `base + 1`. The
/// replica root was merged into `at`, so calls naming the root use `at`.
fn push_replica_tree_calls(
    s: &mut BroadcastScheme,
    base: usize,
    at: &VertexLabel,
    tree_ns: &str,
    rounds: &[Vec<(String, String)>],
    root_local: String,
) {
    let ns = replica_namespace(tree_ns, at);
    let map = |local: &String| {
        if *local == root_local {
            at.clone()
        } else {
            VertexLabel::new(ns.clone(), local.clone())
        }
    };
    for (idx, calls) in rounds.iter().enumerate() {
        for (a, b) in calls {
            s.push_call(base + idx + 1, map(a), map(b));
        }
    }
}
