//! CNF formulas, the construction mapping a formula to a broadcast-center
//! size instance, best-effort center schemes for its hub vertices, and the
//! distance/star lower bounds covering every other originator.
//!
//! Shape of the construction for a formula with n variables and c clauses,
//! with d1 = ceil(log c) + 1, d2 = ceil(log n) + 1 and target time
//! t = 2n + ceil(log n) + 3:
//!
//! * per literal, a "literal tree" of degree d1 rooted at the literal vertex
//!   whose leaves attach to the clauses containing that literal,
//! * per literal, an "assignment tree" of degree d2 whose leaf k attaches to
//!   both literals of variable k, except the leaf of the literal's own
//!   variable, which attaches only to that literal,
//! * one tree of degree d1 + d2 + 1 rooted at `r`, its first c leaves
//!   attached one-to-one to the clauses,
//! * a star joining `s` to `r` and to all assignment-tree roots,
//! * a pendant star of size 2n - d1 on every clause, and a path of
//!   2n + ceil(log n) + 2 vertices hanging off `s`.

use super::ReductionArtifact;
use crate::error::{Error, Result};
use crate::families::{binomial_leaf_locals, binomial_root_local, binomial_tree_ns};
use crate::graph::{ceil_log2, vl, Graph, VertexLabel};
use crate::oracle::{satisfiable_with, OracleConfig};
use crate::schemes::{binomial_calls_local, BroadcastScheme};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Lit {
        Lit {
            var,
            positive: false,
        }
    }

    /// Stable key used in namespaces and marks: `p3` / `n3`.
    pub fn key(&self) -> String {
        format!("{}{}", if self.positive { 'p' } else { 'n' }, self.var)
    }
}

/// All 2n literals in canonical order: p0, n0, p1, n1, ...
fn literal_order(n: usize) -> Vec<Lit> {
    (0..n).flat_map(|v| [Lit::pos(v), Lit::neg(v)]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Lit>>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::InvalidInstance("formula needs variables".into()));
        }
        let mut normalized = Vec::with_capacity(clauses.len());
        for (i, clause) in clauses.into_iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::InvalidInstance(format!("clause {} is empty", i + 1)));
            }
            if let Some(l) = clause.iter().find(|l| l.var >= num_vars) {
                return Err(Error::InvalidInstance(format!(
                    "clause {} references variable {} out of range",
                    i + 1,
                    l.var
                )));
            }
            let mut c = clause;
            c.sort();
            c.dedup();
            normalized.push(c);
        }
        Ok(CnfFormula {
            num_vars,
            clauses: normalized,
        })
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|l| assignment.get(l.var).copied() == Some(l.positive))
        })
    }

    /// Clause indices (0-based, in order) containing the literal.
    fn clauses_with(&self, lit: Lit) -> Vec<usize> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&lit))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Parses DIMACS CNF: comment lines start with `c`, the header is
/// `p cnf <vars> <clauses>`, and clauses are whitespace-separated nonzero
/// literals terminated by 0 (possibly spanning lines).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut num_vars: Option<usize> = None;
    let mut declared_clauses = 0usize;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(Error::Parse(format!("bad problem line `{line}`")));
            }
            num_vars = Some(
                parts[1]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable count `{}`", parts[1])))?,
            );
            declared_clauses = parts[2]
                .parse()
                .map_err(|_| Error::Parse(format!("bad clause count `{}`", parts[2])))?;
            continue;
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad literal `{tok}`")))?;
            if v == 0 {
                if !current.is_empty() {
                    clauses.push(std::mem::take(&mut current));
                }
            } else {
                let var = (v.unsigned_abs() as usize) - 1;
                current.push(if v > 0 { Lit::pos(var) } else { Lit::neg(var) });
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let num_vars = num_vars.ok_or_else(|| Error::Parse("missing `p cnf` header".into()))?;
    if declared_clauses != 0 && clauses.len() != declared_clauses {
        return Err(Error::Parse(format!(
            "header declares {declared_clauses} clauses, found {}",
            clauses.len()
        )));
    }
    CnfFormula::new(num_vars, clauses)
}

fn lit_tree_ns(l: Lit) -> String {
    format!("tl_{}", l.key())
}

fn asg_tree_ns(l: Lit) -> String {
    format!("ta_{}", l.key())
}

/// Builds the center-size instance for a CNF formula. Parameters recorded:
/// `n`, `c`, `d1`, `d2`, `t` (the target broadcast time), expected
/// vertex/edge counts (matching the built graph), and — when the SAT side is
/// small enough to enumerate — `expected_center_size`. A warning is recorded
/// when the hub schedule cannot land on `t` (tiny formulas leave too few
/// assignment-tree slots to inform every literal in time).
pub fn bcsize_from_usat(phi: &CnfFormula) -> Result<ReductionArtifact> {
    let n = phi.num_vars;
    let c = phi.num_clauses();
    if n < 2 {
        return Err(Error::InvalidInstance(
            "the construction needs at least 2 variables".into(),
        ));
    }
    if c < 1 {
        return Err(Error::InvalidInstance("the formula needs clauses".into()));
    }
    let d1 = ceil_log2(c) + 1;
    let d2 = ceil_log2(n) + 1;
    if 2 * n < ceil_log2(c) + 2 {
        return Err(Error::InvalidInstance(format!(
            "degenerate size: clause stars need 2n - ceil(log c) - 2 = {} >= 0 pendants",
            2 * n as i64 - ceil_log2(c) as i64 - 2
        )));
    }
    let d = d1 + d2 + 1;
    let t = 2 * n + ceil_log2(n) + 3;
    let pendants_per_clause = 2 * n - d1 - 1;

    let mut g = Graph::new();
    let s = vl("hub", "s");
    g.add_vertex(s.clone());

    let tr = binomial_tree_ns(d, "tr")?;
    g = Graph::disjoint_union(&g, &tr.graph)?;
    let r = tr.root.clone();
    g.add_edge(&s, &r)?;

    let mut art = ReductionArtifact::new(Graph::new()); // placeholder, rebuilt below
    let mut marks: Vec<(String, VertexLabel)> = vec![
        ("star_center".into(), s.clone()),
        ("root".into(), r.clone()),
    ];

    // clause vertices and their pendant stars
    for i in 1..=c {
        let delta = vl("cl", i);
        g.add_vertex(delta.clone());
        marks.push((format!("clause:{i}"), delta.clone()));
        for j in 0..pendants_per_clause {
            let p = vl("clp", format!("{i}.{j}"));
            g.add_vertex(p.clone());
            g.add_edge(&delta, &p)?;
        }
    }
    // first c leaves of the big tree, one per clause
    for (i, leaf) in tr.leaves.iter().take(c).enumerate() {
        g.add_edge(leaf, &vl("cl", i + 1))?;
    }

    // literal trees with leaf-to-clause wiring
    let lit_leaf_locals = binomial_leaf_locals(d1);
    for lit in literal_order(n) {
        let tree = binomial_tree_ns(d1, &lit_tree_ns(lit))?;
        g = Graph::disjoint_union(&g, &tree.graph)?;
        marks.push((format!("lit:{}", lit.key()), tree.root.clone()));
        let in_clauses = phi.clauses_with(lit);
        if in_clauses.len() > tree.leaves.len() {
            return Err(Error::InvalidInstance(format!(
                "literal {} appears in {} clauses but its tree has {} leaves",
                lit.key(),
                in_clauses.len(),
                tree.leaves.len()
            )));
        }
        for (leaf_idx, clause_idx) in in_clauses.iter().enumerate() {
            g.add_edge(&tree.leaves[leaf_idx], &vl("cl", clause_idx + 1))?;
        }
        debug_assert_eq!(tree.leaves.len(), lit_leaf_locals.len());
    }

    // assignment trees: leaf k serves variable k; the leaf of the literal's
    // own variable attaches only to that literal
    for lit in literal_order(n) {
        let tree = binomial_tree_ns(d2, &asg_tree_ns(lit))?;
        g = Graph::disjoint_union(&g, &tree.graph)?;
        marks.push((format!("hroot:{}", lit.key()), tree.root.clone()));
        g.add_edge(&s, &tree.root)?;
        for k in 0..n {
            let leaf = &tree.leaves[k];
            if k == lit.var {
                g.add_edge(leaf, &vl(&lit_tree_ns(lit), binomial_root_local(d1)))?;
            } else {
                for other in [Lit::pos(k), Lit::neg(k)] {
                    g.add_edge(leaf, &vl(&lit_tree_ns(other), binomial_root_local(d1)))?;
                }
            }
        }
    }

    // the path off s
    let path_len = 2 * n + ceil_log2(n) + 2;
    for j in 0..path_len {
        g.add_vertex(vl("p", j));
    }
    for j in 1..path_len {
        g.add_edge(&vl("p", j - 1), &vl("p", j))?;
    }
    g.add_edge(&s, &vl("p", 0))?;
    marks.push(("path:first".into(), vl("p", 0)));
    marks.push(("path_end".into(), vl("p", path_len - 1)));

    let expected_vertices = (1usize << d)
        + 2 * n * (1usize << d1)
        + 2 * n * (1usize << d2)
        + 1
        + c * (2 * n - d1)
        + path_len;
    debug_assert_eq!(g.vertex_count(), expected_vertices);

    art.graph = g;
    for (role, v) in marks {
        art.set_mark(role, v);
    }
    art.set_param("n", n as i64);
    art.set_param("c", c as i64);
    art.set_param("d1", d1 as i64);
    art.set_param("d2", d2 as i64);
    art.set_param("t", t as i64);
    art.set_param("expected_vertices", expected_vertices as i64);
    art.set_param("expected_edges", art.graph.edge_count() as i64);
    if let Ok(size) = expected_bc_size(phi, &OracleConfig::default()) {
        art.set_param("expected_center_size", size as i64);
    }
    // probe whether the hub schedule reaches every literal by its deadline
    let probe = schedule_literals(&art, 3, None, &mut BroadcastScheme::new([s.clone()]))?;
    if let Some((lit, round)) = probe
        .iter()
        .find(|(_, round)| **round > t - d1)
        .map(|(l, r)| (*l, *r))
    {
        art.warnings.push(format!(
            "literal {} is not reachable before round {round} in the static hub schedule, \
             past its deadline {}; hub scheme building will fall back to the exact solver \
             and may exceed the target time {t}",
            lit.key(),
            t - d1,
        ));
    }
    Ok(art)
}

/// 2 plus the number of satisfiable literal fixings phi ∧ (lit = true): the
/// hub pair is always in the center, and each assignment-tree root joins
/// exactly when its literal can be part of a satisfying assignment. Equals
/// n + 2 for uniquely satisfiable formulas and 2 for unsatisfiable ones.
pub fn expected_bc_size(phi: &CnfFormula, cfg: &OracleConfig) -> Result<usize> {
    let mut count = 0;
    for v in 0..phi.num_vars {
        for positive in [true, false] {
            if satisfiable_with(phi, v, positive, cfg)? {
                count += 1;
            }
        }
    }
    Ok(2 + count)
}

// ---------------------------------------------------------------------------
// hub schemes

/// Slot-based schedule of the literal-informing calls made by assignment-tree
/// leaves. Returns when each literal is informed and appends the calls to
/// `s`. The hub calls one assignment-tree root per round starting at
/// `first_h_round`. `origin_lit` marks the assignment tree run early by a
/// literal-root originator: its leaves fire their chosen assignment at round
/// d2 + 2 and join the slot pool afterwards.
fn schedule_literals(
    art: &ReductionArtifact,
    first_h_round: usize,
    origin_lit: Option<(Lit, &[bool])>,
    s: &mut BroadcastScheme,
) -> Result<BTreeMap<Lit, usize>> {
    let n = art.param("n")? as usize;
    let d1 = art.param("d1")? as usize;
    let d2 = art.param("d2")? as usize;
    let horizon = 2 * art.param("t")? as usize + 2 * n + 8;
    let leaf_locals = binomial_leaf_locals(d2);

    let mut informed_at: BTreeMap<Lit, usize> = BTreeMap::new();
    // the originating tree informs the chosen assignment directly
    if let Some((olit, assignment)) = origin_lit {
        let ns = asg_tree_ns(olit);
        for k in 0..n {
            let target = if k == olit.var {
                olit
            } else if assignment[k] {
                Lit::pos(k)
            } else {
                Lit::neg(k)
            };
            s.push_call(
                d2 + 2,
                vl(&ns, leaf_locals[k].clone()),
                lit_root(art, target)?,
            );
            informed_at.insert(target, d2 + 2);
        }
    }

    // slot pool: (ready round, tree literal, leaf index)
    struct Slot {
        lit: Lit,
        leaf: usize,
        next_free: usize,
    }
    let mut slots: Vec<Slot> = Vec::new();
    let mut h_start: BTreeMap<Lit, usize> = BTreeMap::new();
    let mut next_round = first_h_round;
    for lit in literal_order(n) {
        if origin_lit.is_some_and(|(o, _)| o == lit) {
            // already run by the originator; its leaves rejoin at d2 + 3
            h_start.insert(lit, 1);
            for k in 0..n {
                slots.push(Slot {
                    lit,
                    leaf: k,
                    next_free: d2 + 3,
                });
            }
            continue;
        }
        // the hub calls this tree root at `next_round`
        h_start.insert(lit, next_round);
        for k in 0..n {
            slots.push(Slot {
                lit,
                leaf: k,
                next_free: next_round + d2 + 1,
            });
        }
        next_round += 1;
    }
    // exception slots (serving exactly one literal) act before free slots
    slots.sort_by_key(|sl| (sl.lit.var != sl.leaf, sl.lit.key(), sl.leaf));

    let mut uncovered: Vec<Lit> = literal_order(n)
        .into_iter()
        .filter(|l| !informed_at.contains_key(l))
        .collect();
    let mut round = d2 + 3;
    while !uncovered.is_empty() && round <= horizon {
        for slot in slots.iter_mut() {
            if slot.next_free > round {
                continue;
            }
            let pick = uncovered.iter().position(|l| {
                l.var == slot.leaf && (slot.leaf != slot.lit.var || *l == slot.lit)
            });
            if let Some(i) = pick {
                let target = uncovered.remove(i);
                s.push_call(
                    round,
                    vl(&asg_tree_ns(slot.lit), leaf_locals[slot.leaf].clone()),
                    lit_root(art, target)?,
                );
                informed_at.insert(target, round);
                slot.next_free = round + 1;
            }
        }
        round += 1;
    }
    if !uncovered.is_empty() {
        return Err(Error::InvalidInstance(
            "assignment-tree slots cannot reach every literal".into(),
        ));
    }
    // emit the hub->tree-root calls and each tree's own binomial broadcast
    for (lit, start) in &h_start {
        let ns = asg_tree_ns(*lit);
        if origin_lit.is_some_and(|(o, _)| o == *lit) {
            push_tree(s, 1, &ns, d2, None);
        } else {
            s.push_call(*start, vl("hub", "s"), vl(&ns, binomial_root_local(d2)));
            push_tree(s, *start, &ns, d2, None);
        }
    }
    // each literal tree broadcasts once its root is informed
    for (lit, at) in &informed_at {
        push_tree(s, *at, &lit_tree_ns(*lit), d1, None);
    }
    Ok(informed_at)
}

fn lit_root(art: &ReductionArtifact, lit: Lit) -> Result<VertexLabel> {
    art.mark(&format!("lit:{}", lit.key())).cloned()
}

/// Appends the binomial scheme of the degree-`k` tree in namespace `ns`
/// starting after round `base`; `skip` drops one incoming call.
fn push_tree(s: &mut BroadcastScheme, base: usize, ns: &str, k: usize, skip: Option<&VertexLabel>) {
    for (idx, calls) in binomial_calls_local(k).into_iter().enumerate() {
        for (a, b) in calls {
            let to = vl(ns, b);
            if skip == Some(&to) {
                continue;
            }
            s.push_call(base + idx + 1, vl(ns, a), to);
        }
    }
}

/// Scheme for one hub originator: `s`, `r`, or an assignment-tree root
/// `hroot:<key>` (which needs a satisfying assignment making its literal
/// true). The schedule lands on the target time t whenever the instance is
/// large enough for the hub to reach every literal by its deadline; the
/// artifact carries a warning when it is not.
pub fn bcsize_origin_scheme(
    art: &ReductionArtifact,
    origin: &VertexLabel,
    assignment: Option<&[bool]>,
) -> Result<BroadcastScheme> {
    let n = art.param("n")? as usize;
    let c = art.param("c")? as usize;
    let d1 = art.param("d1")? as usize;
    let d2 = art.param("d2")? as usize;
    let d = d1 + d2 + 1;
    let s_label = art.mark("star_center")?.clone();
    let r_label = art.mark("root")?.clone();

    let origin_lit = literal_order(n)
        .into_iter()
        .find(|l| art.mark(&format!("hroot:{}", l.key())).ok() == Some(origin));

    let mut scheme = BroadcastScheme::new([origin.clone()]);
    let clauses_informed_at;
    if *origin == s_label || *origin == r_label {
        // the hub pair exchanges first, the big tree carries the clauses
        if *origin == s_label {
            scheme.push_call(1, s_label.clone(), r_label.clone());
        } else {
            scheme.push_call(1, r_label.clone(), s_label.clone());
        }
        push_tree(&mut scheme, 1, "tr", d, None);
        // first c leaves of the big tree call their clauses
        let tr_leaves = binomial_leaf_locals(d);
        for (i, leaf) in tr_leaves.iter().take(c).enumerate() {
            scheme.push_call(d + 2, vl("tr", leaf.clone()), vl("cl", i + 1));
        }
        clauses_informed_at = d + 2;
        schedule_literals(art, 3, None, &mut scheme)?;
    } else if let Some(lit) = origin_lit {
        let assignment = assignment.ok_or_else(|| {
            Error::InvalidWitness("assignment-tree origins need a satisfying assignment".into())
        })?;
        if assignment.len() != n {
            return Err(Error::InvalidWitness(format!(
                "assignment has {} values for {n} variables",
                assignment.len()
            )));
        }
        if !clause_edges_satisfied(art, n, c, assignment)? {
            return Err(Error::InvalidWitness(
                "assignment does not satisfy the formula".into(),
            ));
        }
        if assignment[lit.var] != lit.positive {
            return Err(Error::InvalidWitness(format!(
                "literal {} is false under the assignment",
                lit.key()
            )));
        }
        scheme.push_call(1, origin.clone(), s_label.clone());
        // s relays: path at 2, r at 3, the other assignment roots after
        scheme.push_call(3, s_label.clone(), r_label.clone());
        push_tree(&mut scheme, 3, "tr", d, None);
        let informed = schedule_literals(art, 4, Some((lit, assignment)), &mut scheme)?;
        // clauses come from the chosen literals' trees: each clause hears
        // from the first true literal among its members
        clauses_informed_at = d1 + d2 + 3;
        let lit_leaves = binomial_leaf_locals(d1);
        for clause_idx in 1..=c {
            let chosen = first_true_literal_of_clause(art, n, clause_idx, assignment)?;
            let leaf_pos = clause_leaf_position(art, chosen, clause_idx)?;
            scheme.push_call(
                clauses_informed_at,
                vl(&lit_tree_ns(chosen), lit_leaves[leaf_pos].clone()),
                vl("cl", clause_idx),
            );
        }
        debug_assert!(informed
            .iter()
            .all(|(l, at)| assignment[l.var] != l.positive || *at <= d2 + 2));
    } else {
        return Err(Error::InvalidArgument(format!(
            "`{origin}` is not a hub originator (s, r, or an assignment-tree root)"
        )));
    }

    // common tail: path, clause pendant stars
    let path_len = 2 * n + ceil_log2(n) + 2;
    scheme.push_call(2, s_label.clone(), vl("p", 0));
    for j in 1..path_len {
        scheme.push_call(2 + j, vl("p", j - 1), vl("p", j));
    }
    let pendants = 2 * n - d1 - 1;
    for i in 1..=c {
        for j in 0..pendants {
            scheme.push_call(
                clauses_informed_at + 1 + j,
                vl("cl", i),
                vl("clp", format!("{i}.{j}")),
            );
        }
    }

    // On tiny instances the static schedule can overshoot the target while a
    // faster schedule still exists (it must route clauses through literal
    // trees and delay the big tree). Ask the exact solver for a target-time
    // witness before settling for the slow schedule.
    let t = art.param("t")? as usize;
    if scheme.completion_round() > t {
        let solver_cfg = crate::solver::SolverConfig {
            node_budget: Some(20_000_000),
            ..crate::solver::SolverConfig::default()
        };
        if let Ok(result) = crate::solver::broadcast_time_from(&art.graph, origin, &solver_cfg) {
            if result.status == crate::solver::SolveStatus::Exact && result.time <= t {
                return Ok(result.witness.expect("exact results carry witnesses"));
            }
        }
    }
    Ok(scheme)
}

/// Checks a purported assignment directly against the built graph: every
/// clause vertex must be adjacent to a leaf of some true literal's tree.
fn clause_edges_satisfied(
    art: &ReductionArtifact,
    n: usize,
    c: usize,
    assignment: &[bool],
) -> Result<bool> {
    for clause_idx in 1..=c {
        let mut hit = false;
        for k in 0..n {
            let lit = if assignment[k] { Lit::pos(k) } else { Lit::neg(k) };
            if clause_leaf_position(art, lit, clause_idx).is_ok() {
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Position (leaf index) of the tree leaf of `lit` wired to clause
/// `clause_idx`, if that literal is in the clause.
fn clause_leaf_position(art: &ReductionArtifact, lit: Lit, clause_idx: usize) -> Result<usize> {
    let d1 = art.param("d1")? as usize;
    let ns = lit_tree_ns(lit);
    let delta = vl("cl", clause_idx);
    for (i, local) in binomial_leaf_locals(d1).iter().enumerate() {
        if art.graph.has_edge(&vl(&ns, local.clone()), &delta) {
            return Ok(i);
        }
    }
    Err(Error::InvalidArgument(format!(
        "literal {} is not in clause {clause_idx}",
        lit.key()
    )))
}

fn first_true_literal_of_clause(
    art: &ReductionArtifact,
    n: usize,
    clause_idx: usize,
    assignment: &[bool],
) -> Result<Lit> {
    for k in 0..n {
        let lit = if assignment[k] { Lit::pos(k) } else { Lit::neg(k) };
        if clause_leaf_position(art, lit, clause_idx).is_ok() {
            return Ok(lit);
        }
    }
    Err(Error::InvalidWitness(format!(
        "no true literal covers clause {clause_idx}"
    )))
}

/// Schemes for every hub originator: always `s` and `r`; with a satisfying
/// assignment, also the assignment-tree root of each true literal.
pub fn bcsize_center_schemes(
    art: &ReductionArtifact,
    assignment: Option<&[bool]>,
) -> Result<BTreeMap<VertexLabel, BroadcastScheme>> {
    let n = art.param("n")? as usize;
    let mut out = BTreeMap::new();
    let s_label = art.mark("star_center")?.clone();
    let r_label = art.mark("root")?.clone();
    out.insert(s_label.clone(), bcsize_origin_scheme(art, &s_label, None)?);
    out.insert(r_label.clone(), bcsize_origin_scheme(art, &r_label, None)?);
    if let Some(assignment) = assignment {
        for (k, &value) in assignment.iter().enumerate().take(n) {
            let lit = if value { Lit::pos(k) } else { Lit::neg(k) };
            let root = art.mark(&format!("hroot:{}", lit.key()))?.clone();
            out.insert(
                root.clone(),
                bcsize_origin_scheme(art, &root, Some(assignment))?,
            );
        }
    }
    Ok(out)
}

/// Distance/star lower bounds for originators outside the hub: vertices off
/// the path must still push information down the whole path, and path
/// vertices must reach the farthest clause star. Returns 0 for the hub
/// vertices (s, r, assignment-tree roots), which the bounds do not cover.
pub fn case4_lower_bound(art: &ReductionArtifact, v: &VertexLabel) -> Result<usize> {
    let n = art.param("n")? as usize;
    let d1 = art.param("d1")? as usize;
    let s_label = art.mark("star_center")?;
    let r_label = art.mark("root")?;
    if v == s_label || v == r_label {
        return Ok(0);
    }
    if literal_order(n)
        .iter()
        .any(|l| art.mark(&format!("hroot:{}", l.key())).ok() == Some(v))
    {
        return Ok(0);
    }
    if !art.graph.has_vertex(v) {
        return Err(Error::MissingVertex(v.clone()));
    }
    let dist = art.graph.bfs_distances(v)?;
    let pendants = 2 * n - d1 - 1;
    if v.namespace() == "p" {
        // on the path: reach the first clause and fill its pendant star
        let delta1 = art.mark("clause:1")?;
        Ok(dist[delta1] + pendants)
    } else {
        // off the path: walk to its start and push it to the end
        let p0 = art.mark("path:first")?;
        let path_len = 2 * n + ceil_log2(n) + 2;
        Ok(dist[p0] + path_len - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::validate_scheme;

    fn phi_two_unit_clauses() -> CnfFormula {
        CnfFormula::new(2, vec![vec![Lit::pos(0)], vec![Lit::pos(1)]]).unwrap()
    }

    /// x0 ∧ x1 ∧ x2: uniquely satisfiable with three variables; large enough
    /// for the hub schemes to land on the target time.
    fn phi_three_unit_clauses() -> CnfFormula {
        CnfFormula::new(
            3,
            vec![vec![Lit::pos(0)], vec![Lit::pos(1)], vec![Lit::pos(2)]],
        )
        .unwrap()
    }

    #[test]
    fn n2_example_counts() {
        let art = bcsize_from_usat(&phi_two_unit_clauses()).unwrap();
        assert_eq!(art.param("d1").unwrap(), 2);
        assert_eq!(art.param("d2").unwrap(), 2);
        assert_eq!(art.param("t").unwrap(), 8);
        assert_eq!(art.graph.vertex_count(), 76);
        // path of 7, clause stars of size 2
        assert_eq!(
            art.graph
                .vertices()
                .filter(|v| v.namespace() == "p")
                .count(),
            7
        );
        assert_eq!(
            art.graph
                .vertices()
                .filter(|v| v.namespace() == "clp")
                .count(),
            2
        );
        art.graph.validate().unwrap();
        assert_eq!(art.param("expected_center_size").unwrap(), 4); // n + 2
    }

    #[test]
    fn degenerate_boundary_builds_at_zero_pendant_margin() {
        // n=2, c=1: 2n - ceil(log c) - 2 = 2 >= 0, so it builds
        let phi = CnfFormula::new(2, vec![vec![Lit::pos(0), Lit::neg(1)]]).unwrap();
        let art = bcsize_from_usat(&phi).unwrap();
        assert_eq!(art.param("d1").unwrap(), 1);
        // truly degenerate sizes are rejected with a diagnostic
        let wide = CnfFormula::new(
            2,
            (0..40)
                .map(|i| vec![if i % 2 == 0 { Lit::pos(0) } else { Lit::neg(0) }, Lit::pos(1)])
                .collect(),
        )
        .unwrap();
        assert!(matches!(
            bcsize_from_usat(&wide),
            Err(Error::InvalidInstance(_))
        ));
    }

    #[test]
    fn tiny_instances_warn_about_the_hub_deadline() {
        // with n = 2 only one assignment tree is early enough to inform two
        // of the four literals by their deadline
        let art = bcsize_from_usat(&phi_two_unit_clauses()).unwrap();
        assert!(
            !art.warnings.is_empty(),
            "n = 2 instances cannot meet the target time"
        );
        // n = 3 leaves enough slots
        let art3 = bcsize_from_usat(&phi_three_unit_clauses()).unwrap();
        assert!(art3.warnings.is_empty());
    }

    #[test]
    fn hub_schemes_hit_target_time_at_n3() {
        let phi = phi_three_unit_clauses();
        let art = bcsize_from_usat(&phi).unwrap();
        let t = art.param("t").unwrap() as usize;
        assert_eq!(t, 2 * 3 + ceil_log2(3) + 3);
        let assignment = [true, true, true];
        let schemes = bcsize_center_schemes(&art, Some(&assignment)).unwrap();
        assert_eq!(schemes.len(), 2 + 3); // s, r, and one root per variable
        for (origin, scheme) in &schemes {
            assert_eq!(
                validate_scheme(&art.graph, scheme).unwrap(),
                t,
                "origin {origin}"
            );
        }
    }

    #[test]
    fn tiny_instance_schemes_fall_back_to_the_solver() {
        // at n = 2 the target time is only achievable for some hub vertices
        // (solver-verified): s and the tree root of the satisfied literal of
        // variable 1 reach it; r and the roots of variable 0 provably cannot
        let phi = phi_two_unit_clauses();
        let art = bcsize_from_usat(&phi).unwrap();
        let t = art.param("t").unwrap() as usize;
        let assignment = [true, true];
        let schemes = bcsize_center_schemes(&art, Some(&assignment)).unwrap();
        let time_of = |role: &str| {
            let origin = art.mark(role).unwrap();
            validate_scheme(&art.graph, &schemes[origin]).unwrap()
        };
        assert_eq!(time_of("star_center"), t);
        assert_eq!(time_of("hroot:p1"), t);
        assert_eq!(time_of("root"), t + 1);
        assert_eq!(time_of("hroot:p0"), t + 1);
    }

    #[test]
    fn false_literal_origin_is_rejected() {
        let phi = phi_three_unit_clauses();
        let art = bcsize_from_usat(&phi).unwrap();
        let assignment = [true, true, true];
        let n0 = art.mark("hroot:n0").unwrap().clone();
        assert!(matches!(
            bcsize_origin_scheme(&art, &n0, Some(&assignment)),
            Err(Error::InvalidWitness(_))
        ));
        // and a non-satisfying assignment is rejected outright
        let bad = [false, true, true];
        let p0 = art.mark("hroot:p0").unwrap().clone();
        assert!(bcsize_origin_scheme(&art, &p0, Some(&bad)).is_err());
    }

    #[test]
    fn case4_bounds_cover_everything_outside_the_hub() {
        let art = bcsize_from_usat(&phi_two_unit_clauses()).unwrap();
        let t = art.param("t").unwrap() as usize;
        for v in art.graph.vertices() {
            let bound = case4_lower_bound(&art, v).unwrap();
            let is_hub = v == art.mark("star_center").unwrap()
                || v == art.mark("root").unwrap()
                || v.namespace().starts_with("ta_")
                    && v.local() == binomial_root_local(art.param("d2").unwrap() as usize);
            if is_hub {
                assert_eq!(bound, 0, "{v}");
            } else {
                assert!(bound >= t + 1, "{v}: bound {bound}");
            }
        }
        // the on-path example: p3 is at least two rounds past the target
        assert!(case4_lower_bound(&art, &vl("p", 3)).unwrap() >= t + 2);
    }

    #[test]
    fn expected_center_size_examples() {
        let cfg = OracleConfig::default();
        assert_eq!(
            expected_bc_size(&phi_two_unit_clauses(), &cfg).unwrap(),
            4
        );
        let unsat = CnfFormula::new(2, vec![vec![Lit::pos(0)], vec![Lit::neg(0)]]).unwrap();
        assert_eq!(expected_bc_size(&unsat, &cfg).unwrap(), 2);
        let multi = CnfFormula::new(2, vec![vec![Lit::pos(0), Lit::pos(1)]]).unwrap();
        assert_eq!(expected_bc_size(&multi, &cfg).unwrap(), 6);
    }

    #[test]
    fn dimacs_round_trip() {
        let text = "c example\np cnf 3 2\n1 -2 0\n2 3 0\n";
        let phi = parse_dimacs(text).unwrap();
        assert_eq!(phi.num_vars, 3);
        assert_eq!(phi.num_clauses(), 2);
        assert_eq!(phi.clauses[0], vec![Lit::pos(0), Lit::neg(1)]);
        assert!(parse_dimacs("1 2 0\n").is_err()); // missing header
        assert!(parse_dimacs("p cnf 2 1\n0\n").is_err()); // empty clause is absent -> count mismatch
    }
}
