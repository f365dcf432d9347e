//! Independent brute-force ground truth: exhaustive broadcast-time search
//! over informed-set states, exhaustive 3-dimensional matching, and
//! exhaustive SAT enumeration. Everything else in the crate is validated
//! against this module, so it stays deliberately simple and never prunes
//! heuristically.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexLabel};
use crate::reductions::{CnfFormula, ThreeDMInstance};
use std::collections::{BTreeSet, HashSet, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignmentMode {
    /// Only call assignments where every informed vertex with an available
    /// uninformed neighbor makes a call. Permitted because the superset
    /// dominance test (all vs maximal) passes.
    Maximal,
    /// Every call assignment, including ones that leave senders idle.
    All,
}

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub max_vertices: usize,
    pub max_sat_vars: usize,
    pub max_3dm_w: usize,
    pub assignments: AssignmentMode,
}

/// Absolute refusal threshold for the broadcast state search.
pub const ORACLE_HARD_VERTEX_CAP: usize = 14;

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_vertices: 10,
            max_sat_vars: 20,
            max_3dm_w: 12,
            assignments: AssignmentMode::Maximal,
        }
    }
}

struct IndexedGraph {
    labels: Vec<VertexLabel>,
    adj: Vec<u32>,
}

fn index_graph(g: &Graph) -> IndexedGraph {
    let labels: Vec<VertexLabel> = g.vertices().cloned().collect();
    let index = |v: &VertexLabel| labels.binary_search(v).expect("vertex present");
    let mut adj = vec![0u32; labels.len()];
    for (a, b) in g.edges() {
        let (i, j) = (index(a), index(b));
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    IndexedGraph { labels, adj }
}

/// Enumerates the informed sets reachable in one round from `informed`.
/// Senders are processed in label order; each either calls one unclaimed
/// uninformed neighbor or stays idle (idling is only allowed in `All` mode
/// when a receiver is available).
fn next_states(ig: &IndexedGraph, informed: u32, mode: AssignmentMode, out: &mut HashSet<u32>) {
    let n = ig.labels.len();
    fn rec(
        ig: &IndexedGraph,
        informed: u32,
        n: usize,
        sender: usize,
        claimed: u32,
        mode: AssignmentMode,
        out: &mut HashSet<u32>,
    ) {
        let mut s = sender;
        // skip senders with nothing to do
        while s < n {
            if informed >> s & 1 == 1 && ig.adj[s] & !informed & !claimed != 0 {
                break;
            }
            s += 1;
        }
        if s == n {
            out.insert(informed | claimed);
            return;
        }
        let mut options = ig.adj[s] & !informed & !claimed;
        while options != 0 {
            let t = options.trailing_zeros();
            options &= options - 1;
            rec(ig, informed, n, s + 1, claimed | 1 << t, mode, out);
        }
        if mode == AssignmentMode::All {
            rec(ig, informed, n, s + 1, claimed, mode, out);
        }
    }
    rec(ig, informed, n, 0, 0, mode, out);
}

fn check_size(g: &Graph, cfg: &OracleConfig) -> Result<()> {
    let n = g.vertex_count();
    let cap = cfg.max_vertices.min(ORACLE_HARD_VERTEX_CAP);
    if n > cap {
        return Err(Error::SizeLimit {
            what: "oracle vertex count",
            got: n,
            max: cap,
        });
    }
    Ok(())
}

/// Exact minimum number of rounds to inform every vertex from the origin
/// set, by breadth-first search over informed-set states.
pub fn oracle_broadcast_time(
    g: &Graph,
    origins: &BTreeSet<VertexLabel>,
    cfg: &OracleConfig,
) -> Result<usize> {
    let full = (1u32 << g.vertex_count()) - 1;
    oracle_search(g, origins, full, cfg)
}

/// Multicast variant: minimum rounds until every vertex of `targets` is
/// informed (other vertices may stay uninformed).
pub fn oracle_multicast_time(
    g: &Graph,
    origins: &BTreeSet<VertexLabel>,
    targets: &BTreeSet<VertexLabel>,
    cfg: &OracleConfig,
) -> Result<usize> {
    let ig = index_graph(g);
    let mut mask = 0u32;
    for t in targets {
        let i = ig
            .labels
            .binary_search(t)
            .map_err(|_| Error::MissingVertex(t.clone()))?;
        mask |= 1 << i;
    }
    oracle_search(g, origins, mask, cfg)
}

fn oracle_search(
    g: &Graph,
    origins: &BTreeSet<VertexLabel>,
    target_mask: u32,
    cfg: &OracleConfig,
) -> Result<usize> {
    check_size(g, cfg)?;
    if origins.is_empty() {
        return Err(Error::EmptyOrigins);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let ig = index_graph(g);
    let mut start = 0u32;
    for o in origins {
        let i = ig
            .labels
            .binary_search(o)
            .map_err(|_| Error::MissingVertex(o.clone()))?;
        start |= 1 << i;
    }
    if start & target_mask == target_mask {
        return Ok(0);
    }
    let mut visited: HashSet<u32> = HashSet::new();
    visited.insert(start);
    let mut layer = vec![start];
    let mut round = 0;
    loop {
        round += 1;
        let mut next = HashSet::new();
        for state in &layer {
            next_states(&ig, *state, cfg.assignments, &mut next);
        }
        let mut frontier = Vec::new();
        for state in next {
            if state & target_mask == target_mask {
                return Ok(round);
            }
            if visited.insert(state) {
                frontier.push(state);
            }
        }
        if frontier.is_empty() {
            // connected graphs always make progress in maximal mode; in All
            // mode the idle-everywhere assignment repeats states
            return Err(Error::InvalidArgument(
                "broadcast search exhausted without reaching the target".into(),
            ));
        }
        layer = frontier;
    }
}

/// Finds one 3-dimensional matching of size `k` (as sorted indices into the
/// triple list), or `None`. Plain exhaustive search over index subsets.
pub fn solve_3dm(inst: &ThreeDMInstance, cfg: &OracleConfig) -> Result<Option<Vec<usize>>> {
    if inst.w() > cfg.max_3dm_w {
        return Err(Error::SizeLimit {
            what: "3DM triple count",
            got: inst.w(),
            max: cfg.max_3dm_w,
        });
    }
    let k = inst.k();
    let mut chosen = Vec::new();
    fn rec(
        inst: &ThreeDMInstance,
        k: usize,
        from: usize,
        used_x: &mut Vec<bool>,
        used_y: &mut Vec<bool>,
        used_z: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == k {
            return true;
        }
        for idx in from..inst.w() {
            let [x, y, z] = inst.triples[idx];
            if used_x[x] || used_y[y] || used_z[z] {
                continue;
            }
            used_x[x] = true;
            used_y[y] = true;
            used_z[z] = true;
            chosen.push(idx);
            if rec(inst, k, idx + 1, used_x, used_y, used_z, chosen) {
                return true;
            }
            chosen.pop();
            used_x[x] = false;
            used_y[y] = false;
            used_z[z] = false;
        }
        false
    }
    let found = rec(
        inst,
        k,
        0,
        &mut vec![false; k],
        &mut vec![false; k],
        &mut vec![false; k],
        &mut chosen,
    );
    Ok(found.then_some(chosen))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatClass {
    Unsat,
    Unique(Vec<bool>),
    Multiple,
}

/// Classifies a CNF formula by full enumeration of assignments.
pub fn sat_classify(phi: &CnfFormula, cfg: &OracleConfig) -> Result<SatClass> {
    if phi.num_vars > cfg.max_sat_vars {
        return Err(Error::SizeLimit {
            what: "SAT variable count",
            got: phi.num_vars,
            max: cfg.max_sat_vars,
        });
    }
    let mut witness: Option<Vec<bool>> = None;
    for bits in 0u64..1u64 << phi.num_vars {
        let assignment: Vec<bool> = (0..phi.num_vars).map(|v| bits >> v & 1 == 1).collect();
        if phi.satisfied_by(&assignment) {
            if witness.is_some() {
                return Ok(SatClass::Multiple);
            }
            witness = Some(assignment);
        }
    }
    Ok(match witness {
        Some(a) => SatClass::Unique(a),
        None => SatClass::Unsat,
    })
}

/// Whether `phi` is satisfiable with the given literal forced true.
pub fn satisfiable_with(
    phi: &CnfFormula,
    var: usize,
    positive: bool,
    cfg: &OracleConfig,
) -> Result<bool> {
    if phi.num_vars > cfg.max_sat_vars {
        return Err(Error::SizeLimit {
            what: "SAT variable count",
            got: phi.num_vars,
            max: cfg.max_sat_vars,
        });
    }
    for bits in 0u64..1u64 << phi.num_vars {
        if (bits >> var & 1 == 1) != positive {
            continue;
        }
        let assignment: Vec<bool> = (0..phi.num_vars).map(|v| bits >> v & 1 == 1).collect();
        if phi.satisfied_by(&assignment) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Breadth-first check used by tests: rounds needed when every vertex simply
/// relays along shortest paths, i.e. the eccentricity of the origin set.
pub fn distance_lower_bound(g: &Graph, origins: &BTreeSet<VertexLabel>) -> Result<usize> {
    if origins.is_empty() {
        return Err(Error::EmptyOrigins);
    }
    let mut dist = std::collections::BTreeMap::new();
    let mut queue = VecDeque::new();
    for o in origins {
        if !g.has_vertex(o) {
            return Err(Error::MissingVertex(o.clone()));
        }
        dist.insert(o.clone(), 0usize);
        queue.push_back(o.clone());
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for n in g.neighbors(&v)? {
            if !dist.contains_key(n) {
                dist.insert(n.clone(), d + 1);
                queue.push_back(n.clone());
            }
        }
    }
    if dist.len() != g.vertex_count() {
        return Err(Error::Disconnected);
    }
    Ok(dist.values().copied().max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{binomial_tree, knodel};
    use crate::graph::{ceil_log2, vl};
    use crate::reductions::Lit;

    fn origins(v: VertexLabel) -> BTreeSet<VertexLabel> {
        [v].into_iter().collect()
    }

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::new();
        for i in 0..n {
            g.add_vertex(vl("c", i));
        }
        for i in 0..n {
            g.add_edge(&vl("c", i), &vl("c", (i + 1) % n)).unwrap();
        }
        g
    }

    #[test]
    fn single_vertex_is_zero() {
        let mut g = Graph::new();
        g.add_vertex(vl("g", 0));
        let t = oracle_broadcast_time(&g, &origins(vl("g", 0)), &OracleConfig::default()).unwrap();
        assert_eq!(t, 0);
    }

    #[test]
    fn six_cycle_takes_three() {
        let g = cycle(6);
        for i in 0..6 {
            let t =
                oracle_broadcast_time(&g, &origins(vl("c", i)), &OracleConfig::default()).unwrap();
            assert_eq!(t, 3);
        }
    }

    #[test]
    fn binomial_tree_root_is_degree() {
        let bt = binomial_tree(3).unwrap();
        let t = oracle_broadcast_time(&bt.graph, &origins(bt.root.clone()), &OracleConfig::default())
            .unwrap();
        assert_eq!(t, 3);
    }

    #[test]
    fn superset_dominance_maximal_equals_all() {
        // restriction to maximal assignments never changes the answer
        let mut rng = crate::catalog::SplitMix::new(0x9E3779B97F4A7C15);
        let graphs = crate::catalog::random_connected_graphs(40, 4, 8, &mut rng);
        let maximal = OracleConfig::default();
        let all = OracleConfig {
            assignments: AssignmentMode::All,
            ..OracleConfig::default()
        };
        for g in &graphs {
            let v = g.vertices().next().unwrap().clone();
            let o = origins(v);
            assert_eq!(
                oracle_broadcast_time(g, &o, &maximal).unwrap(),
                oracle_broadcast_time(g, &o, &all).unwrap()
            );
        }
    }

    #[test]
    fn multi_origin_never_slower() {
        let g = cycle(7);
        let single = origins(vl("c", 0));
        for extra in 1..7 {
            let mut multi = single.clone();
            multi.insert(vl("c", extra));
            let t1 = oracle_broadcast_time(&g, &single, &OracleConfig::default()).unwrap();
            let t2 = oracle_broadcast_time(&g, &multi, &OracleConfig::default()).unwrap();
            assert!(t2 <= t1);
        }
    }

    #[test]
    fn lower_bounds_hold() {
        let g = knodel(8).unwrap().graph;
        for v in g.vertices() {
            let o = origins(v.clone());
            let t = oracle_broadcast_time(&g, &o, &OracleConfig::default()).unwrap();
            let n = g.vertex_count();
            assert!(t >= ceil_log2(n));
            assert!(t >= g.eccentricity(v).unwrap());
        }
    }

    #[test]
    fn refuses_oversized_graphs() {
        let g = cycle(11);
        assert!(matches!(
            oracle_broadcast_time(&g, &origins(vl("c", 0)), &OracleConfig::default()),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn multicast_to_prefix_leaves() {
        // reaching the deepest leaf forces the full k rounds even for small
        // target sets
        for k in 1..=3 {
            let bt = binomial_tree(k).unwrap();
            for x in 1..=bt.leaves.len() {
                let targets: BTreeSet<VertexLabel> = bt.leaves[..x].iter().cloned().collect();
                let t = oracle_multicast_time(
                    &bt.graph,
                    &origins(bt.root.clone()),
                    &targets,
                    &OracleConfig::default(),
                )
                .unwrap();
                assert_eq!(t, k, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn fig_a1_instance_has_matching() {
        let inst = ThreeDMInstance::fig_a1_style();
        let m = solve_3dm(&inst, &OracleConfig::default()).unwrap();
        assert_eq!(m, Some(vec![0, 1, 2]));
    }

    #[test]
    fn shared_coordinate_blocks_matching() {
        let inst = ThreeDMInstance::new(
            vec!["x1".into(), "x2".into()],
            vec!["y1".into(), "y2".into()],
            vec!["z1".into(), "z2".into()],
            vec![[0, 0, 0], [0, 1, 1]],
        )
        .unwrap();
        assert_eq!(solve_3dm(&inst, &OracleConfig::default()).unwrap(), None);
    }

    #[test]
    fn k1_takes_first_triple() {
        let inst = ThreeDMInstance::new(
            vec!["x".into()],
            vec!["y".into()],
            vec!["z".into()],
            vec![[0, 0, 0]],
        )
        .unwrap();
        assert_eq!(
            solve_3dm(&inst, &OracleConfig::default()).unwrap(),
            Some(vec![0])
        );
    }

    #[test]
    fn sat_classification() {
        let cfg = OracleConfig::default();
        // (x0) and (x1): unique assignment (1, 1)
        let phi = CnfFormula::new(2, vec![vec![Lit::pos(0)], vec![Lit::pos(1)]]).unwrap();
        assert_eq!(
            sat_classify(&phi, &cfg).unwrap(),
            SatClass::Unique(vec![true, true])
        );
        // (x0) and (!x0): unsatisfiable
        let phi = CnfFormula::new(1, vec![vec![Lit::pos(0)], vec![Lit::neg(0)]]).unwrap();
        assert_eq!(sat_classify(&phi, &cfg).unwrap(), SatClass::Unsat);
        // (x0 or x1): three satisfying assignments
        let phi = CnfFormula::new(2, vec![vec![Lit::pos(0), Lit::pos(1)]]).unwrap();
        assert_eq!(sat_classify(&phi, &cfg).unwrap(), SatClass::Multiple);
    }
}
