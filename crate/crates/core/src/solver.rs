//! Exact broadcast-time computation with certified witnesses: depth-first
//! branch and bound over per-round call assignments, iterative deepening
//! from provable lower bounds, and the derived graph-level queries
//! (broadcast time of a graph, broadcast-graph decision, broadcast center,
//! center-size decision).

use crate::error::{Error, Result};
use crate::graph::{ceil_log2, Graph, VertexLabel};
use crate::schemes::BroadcastScheme;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::hash::{BuildHasherDefault, Hasher};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

/// Solver vertex capacity; the search state is a fixed-width bitset.
pub const MAX_SOLVER_VERTICES: usize = 256;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Maximum number of search nodes before giving up with an honest
    /// lower bound.
    pub node_budget: Option<u64>,
    /// Wall-clock limit for one solve call.
    pub time_budget: Option<Duration>,
    /// Worker threads used to split refutation searches.
    pub workers: usize,
    /// Entry cap for the dominance memo.
    pub memo_capacity: usize,
    /// Pruning toggles; all sound, all on by default.
    pub prune_doubling: bool,
    pub prune_distance: bool,
    pub prune_dominance: bool,
    pub prune_regions: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            node_budget: None,
            time_budget: None,
            workers: 1,
            memo_capacity: 2_000_000,
            prune_doubling: true,
            prune_distance: true,
            prune_dominance: true,
            prune_regions: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Exact,
    LowerBounded,
}

/// Result of an exact solve. `witness` is present exactly when the status is
/// `Exact`, and then validates at exactly `time` rounds, with
/// `proven_lower == time`. A `LowerBounded` result reports `proven_lower`
/// (and `time` echoes it); the true value is at least that.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub time: usize,
    pub proven_lower: usize,
    pub witness: Option<BroadcastScheme>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BroadcastCenter {
    pub members: BTreeSet<VertexLabel>,
    pub min_time: usize,
}

// ---------------------------------------------------------------------------
// bitset state

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
struct Bits([u64; 4]);

impl Bits {
    const EMPTY: Bits = Bits([0; 4]);

    fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn or(&self, other: &Bits) -> Bits {
        Bits([
            self.0[0] | other.0[0],
            self.0[1] | other.0[1],
            self.0[2] | other.0[2],
            self.0[3] | other.0[3],
        ])
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits([
            self.0[0] & !other.0[0],
            self.0[1] & !other.0[1],
            self.0[2] & !other.0[2],
            self.0[3] & !other.0[3],
        ])
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    fn intersects(&self, other: &Bits) -> bool {
        self.0.iter().zip(other.0.iter()).any(|(a, b)| a & b != 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, w)| {
            let mut w = *w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

#[derive(Default)]
struct BitsHasher(u64);

impl Hasher for BitsHasher {
    fn write(&mut self, bytes: &[u8]) {
        for chunk in bytes.chunks(8) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            self.write_u64(u64::from_le_bytes(buf));
        }
    }

    fn write_u64(&mut self, w: u64) {
        self.0 = (self.0 ^ w).wrapping_mul(0x9E3779B97F4A7C15).rotate_left(23);
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

type Memo = HashMap<Bits, u8, BuildHasherDefault<BitsHasher>>;

/// A small separator together with the components it cuts off. While a
/// component holds no informed vertex, everything in it must be informed
/// through the separator, and a vertex with τ sending rounds left roots a
/// broadcast forest of at most 2^τ - 1 vertices beyond itself. Checking
/// that budget against the component sizes prunes schedules that starve a
/// bottleneck.
struct RegionGroup {
    separator: Vec<u16>,
    components: Vec<(Bits, u32)>,
    total_need: u32,
}

struct Compiled {
    n: usize,
    labels: Vec<VertexLabel>,
    adj: Vec<Bits>,
    full: Bits,
    regions: Vec<RegionGroup>,
}

impl Compiled {
    fn build(g: &Graph) -> Result<Compiled> {
        let n = g.vertex_count();
        if n > MAX_SOLVER_VERTICES {
            return Err(Error::SizeLimit {
                what: "solver vertex count",
                got: n,
                max: MAX_SOLVER_VERTICES,
            });
        }
        let labels: Vec<VertexLabel> = g.vertices().cloned().collect();
        let mut adj = vec![Bits::EMPTY; n];
        for (a, b) in g.edges() {
            let i = labels.binary_search(a).expect("vertex");
            let j = labels.binary_search(b).expect("vertex");
            adj[i].set(j);
            adj[j].set(i);
        }
        let mut full = Bits::EMPTY;
        for i in 0..n {
            full.set(i);
        }
        let mut compiled = Compiled {
            n,
            labels,
            adj,
            full,
            regions: Vec::new(),
        };
        compiled.regions = find_region_groups(&compiled);
        Ok(compiled)
    }

    fn index_of(&self, v: &VertexLabel) -> Result<usize> {
        self.labels
            .binary_search(v)
            .map_err(|_| Error::MissingVertex(v.clone()))
    }

    fn neighborhood_of_set(&self, set: &Bits) -> Bits {
        let mut out = Bits::EMPTY;
        for i in set.ones() {
            out = out.or(&self.adj[i]);
        }
        out
    }
}

/// Components of `G - removed`, as bitsets.
fn components_without(g: &Compiled, removed: &Bits) -> Vec<Bits> {
    let mut seen = *removed;
    let mut out = Vec::new();
    for start in 0..g.n {
        if seen.get(start) {
            continue;
        }
        let mut comp = Bits::EMPTY;
        comp.set(start);
        let mut frontier = comp;
        loop {
            let next = g.neighborhood_of_set(&frontier).and_not(&comp).and_not(removed);
            if next.is_empty() {
                break;
            }
            comp = comp.or(&next);
            frontier = next;
        }
        seen = seen.or(&comp);
        out.push(comp);
    }
    out
}

/// Enumerates small separators (size 1 on big graphs, up to 3 otherwise)
/// whose removal splits the graph, keeping the groups with the largest
/// cut-off mass. Run once per solve.
fn find_region_groups(g: &Compiled) -> Vec<RegionGroup> {
    let max_sep = if g.n <= 56 { 3 } else { 1 };
    let mut groups: Vec<RegionGroup> = Vec::new();
    let mut signatures: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
    let mut subsets: Vec<Vec<u16>> = (0..g.n as u16).map(|v| vec![v]).collect();
    for size in 2..=max_sep {
        let mut next = Vec::new();
        for s in &subsets {
            if s.len() == size - 1 {
                for v in s.last().unwrap() + 1..g.n as u16 {
                    let mut bigger = s.clone();
                    bigger.push(v);
                    next.push(bigger);
                }
            }
        }
        subsets.extend(next);
    }
    for separator in subsets {
        let mut removed = Bits::EMPTY;
        for &v in &separator {
            removed.set(v as usize);
        }
        let comps = components_without(g, &removed);
        if comps.len() < 2 {
            continue;
        }
        // drop the largest component: it is the "rest of the graph" and
        // rarely starves; the cut-off side is what the bound watches
        let mut components: Vec<(Bits, u32)> =
            comps.into_iter().map(|c| (c, c.count() as u32)).collect();
        components.sort_by_key(|(_, size)| std::cmp::Reverse(*size));
        components.remove(0);
        let total_need: u32 = components.iter().map(|(_, s)| s).sum();
        if total_need < 2 {
            continue;
        }
        let mut sig: Vec<u64> = components
            .iter()
            .flat_map(|(c, _)| c.0.iter().copied())
            .collect();
        sig.extend(separator.iter().map(|v| *v as u64));
        if !signatures.insert(sig) {
            continue;
        }
        groups.push(RegionGroup {
            separator,
            components,
            total_need,
        });
    }
    groups.sort_by_key(|g| std::cmp::Reverse(g.total_need));
    groups.truncate(256);
    groups
}

struct BudgetState {
    deadline: Option<Instant>,
    node_cap: Option<u64>,
    nodes: AtomicU64,
    exhausted: AtomicBool,
}

impl BudgetState {
    fn new(cfg: &SolverConfig) -> BudgetState {
        BudgetState {
            deadline: cfg.time_budget.map(|d| Instant::now() + d),
            node_cap: cfg.node_budget,
            nodes: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
        }
    }

    /// Returns false once the budget is exhausted.
    fn charge(&self) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        let used = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.node_cap.is_some_and(|cap| used > cap)
            || (used & 0xFF == 0 && self.deadline.is_some_and(|d| Instant::now() > d))
        {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

enum Outcome {
    Feasible(Vec<Vec<(u16, u16)>>),
    Infeasible,
    Budget,
}

struct Search<'a> {
    g: &'a Compiled,
    cfg: &'a SolverConfig,
    budget: &'a BudgetState,
    memo: Memo,
    // scratch for the final-round matching
    match_right: Vec<Option<u16>>,
    stamp: Vec<u32>,
    stamp_gen: u32,
}

impl<'a> Search<'a> {
    fn new(g: &'a Compiled, cfg: &'a SolverConfig, budget: &'a BudgetState) -> Search<'a> {
        Search {
            g,
            cfg,
            budget,
            memo: Memo::default(),
            match_right: vec![None; g.n],
            stamp: vec![0; g.n],
            stamp_gen: 0,
        }
    }

    /// Can every vertex be informed within `rem` more rounds, starting from
    /// `informed`? Returns the remaining rounds' calls on success.
    fn dfs(&mut self, informed: Bits, rem: usize) -> Outcome {
        if informed == self.g.full {
            return Outcome::Feasible(Vec::new());
        }
        if rem == 0 {
            return Outcome::Infeasible;
        }
        if !self.budget.charge() {
            return Outcome::Budget;
        }
        let informed_count = informed.count();
        let uninformed_count = self.g.n - informed_count;
        // (a) doubling bound: the informed set at most doubles per round
        if self.cfg.prune_doubling {
            let reach = if rem >= 32 {
                usize::MAX
            } else {
                informed_count.saturating_mul((1usize << rem) - 1)
            };
            if uninformed_count > reach {
                return Outcome::Infeasible;
            }
        }
        // (b) frontier distance: every uninformed vertex must be within
        // `rem` hops of the informed set
        if self.cfg.prune_distance && !self.reachable_within(informed, rem) {
            return Outcome::Infeasible;
        }
        // (d) bottleneck regions: an untouched component behind a small
        // separator must fit in the broadcast forest its separator can grow
        if self.cfg.prune_regions && self.region_starved(informed, rem) {
            return Outcome::Infeasible;
        }
        // (c) dominance memo: this informed set was already refuted with at
        // least as many rounds remaining
        if self.cfg.prune_dominance {
            if let Some(&refuted) = self.memo.get(&informed) {
                if rem <= refuted as usize {
                    return Outcome::Infeasible;
                }
            }
        }
        let outcome = if rem == 1 {
            self.final_round_matching(informed)
        } else {
            self.branch_assignments(informed, rem)
        };
        if matches!(outcome, Outcome::Infeasible)
            && self.cfg.prune_dominance
            && self.memo.len() < self.cfg.memo_capacity
        {
            let entry = self.memo.entry(informed).or_insert(0);
            *entry = (*entry).max(rem as u8);
        }
        outcome
    }

    /// True when some separator group cannot feed its untouched components:
    /// the components' total size exceeds what the separator vertices can
    /// still grow (2^τ - 1 each, with τ shrunk while a separator vertex is
    /// itself uninformed or not even adjacent to the informed set).
    fn region_starved(&self, informed: Bits, rem: usize) -> bool {
        for group in &self.g.regions {
            let mut need: u64 = 0;
            for (c, size) in &group.components {
                if !c.intersects(&informed) {
                    need += u64::from(*size);
                }
            }
            if need == 0 {
                continue;
            }
            let mut supply: u64 = 0;
            for &s in &group.separator {
                let s = s as usize;
                let ahead = if informed.get(s) {
                    0
                } else if self.g.adj[s].intersects(&informed) {
                    1
                } else {
                    2
                };
                let tau = rem.saturating_sub(ahead).min(62);
                supply += (1u64 << tau) - 1;
                if supply >= need {
                    break;
                }
            }
            if need > supply {
                return true;
            }
        }
        false
    }

    fn reachable_within(&self, informed: Bits, rem: usize) -> bool {
        let mut covered = informed;
        let mut frontier = informed;
        for _ in 0..rem {
            let next = self.g.neighborhood_of_set(&frontier).and_not(&covered);
            if next.is_empty() {
                break;
            }
            covered = covered.or(&next);
            if covered == self.g.full {
                return true;
            }
            frontier = next;
        }
        covered == self.g.full
    }

    /// Exactly one round left: feasible iff a system of distinct informed
    /// senders covers all uninformed vertices (bipartite matching).
    fn final_round_matching(&mut self, informed: Bits) -> Outcome {
        let uninformed: Vec<usize> = self.g.full.and_not(&informed).ones().collect();
        if uninformed.len() > informed.count() {
            return Outcome::Infeasible;
        }
        for slot in self.match_right.iter_mut() {
            *slot = None;
        }
        for &u in &uninformed {
            self.stamp_gen += 1;
            if !self.augment(u, informed) {
                return Outcome::Infeasible;
            }
        }
        let mut calls: Vec<(u16, u16)> = Vec::with_capacity(uninformed.len());
        for (s, m) in self.match_right.iter().enumerate() {
            if let Some(u) = m {
                calls.push((s as u16, *u));
            }
        }
        calls.sort_unstable();
        Outcome::Feasible(vec![calls])
    }

    fn augment(&mut self, u: usize, informed: Bits) -> bool {
        let candidates: Vec<usize> = self.g.adj[u]
            .ones()
            .filter(|s| informed.get(*s))
            .collect();
        for s in candidates {
            if self.stamp[s] == self.stamp_gen {
                continue;
            }
            self.stamp[s] = self.stamp_gen;
            match self.match_right[s] {
                None => {
                    self.match_right[s] = Some(u as u16);
                    return true;
                }
                Some(prev) => {
                    if self.augment(prev as usize, informed) {
                        self.match_right[s] = Some(u as u16);
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Enumerates maximal call assignments for the current round: senders in
    /// label order, each choosing an unclaimed uninformed neighbor (receivers
    /// tried in label order) or forced idle when none is available.
    fn branch_assignments(&mut self, informed: Bits, rem: usize) -> Outcome {
        let senders: Vec<usize> = informed
            .ones()
            .filter(|s| !self.g.adj[*s].and_not(&informed).is_empty())
            .collect();
        let mut calls: Vec<(u16, u16)> = Vec::new();
        self.assign(informed, rem, &senders, 0, Bits::EMPTY, &mut calls)
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        &mut self,
        informed: Bits,
        rem: usize,
        senders: &[usize],
        from: usize,
        claimed: Bits,
        calls: &mut Vec<(u16, u16)>,
    ) -> Outcome {
        let mut idx = from;
        while idx < senders.len() {
            let s = senders[idx];
            let options = self.g.adj[s].and_not(&informed).and_not(&claimed);
            if options.is_empty() {
                idx += 1; // forced idle: all neighbors informed or claimed
                continue;
            }
            let mut saw_budget = false;
            for t in options.ones() {
                let mut next_claimed = claimed;
                next_claimed.set(t);
                calls.push((s as u16, t as u16));
                match self.assign(informed, rem, senders, idx + 1, next_claimed, calls) {
                    Outcome::Feasible(rest) => return Outcome::Feasible(rest),
                    Outcome::Budget => saw_budget = true,
                    Outcome::Infeasible => {}
                }
                calls.pop();
            }
            return if saw_budget {
                Outcome::Budget
            } else {
                Outcome::Infeasible
            };
        }
        // assignment complete; recurse into the next round
        let child = informed.or(&claimed);
        debug_assert!(child != informed, "connected graph must make progress");
        match self.dfs(child, rem - 1) {
            Outcome::Feasible(mut rest) => {
                rest.insert(0, calls.clone());
                Outcome::Feasible(rest)
            }
            other => other,
        }
    }
}

// ---------------------------------------------------------------------------
// decision + iterative deepening

fn greedy_rounds(g: &Compiled, origins: Bits) -> Vec<Vec<(u16, u16)>> {
    let mut informed = origins;
    let mut rounds = Vec::new();
    while informed != g.full {
        let mut claimed = Bits::EMPTY;
        let mut calls = Vec::new();
        for s in informed.ones() {
            let options = g.adj[s].and_not(&informed).and_not(&claimed);
            let first = options.ones().next();
            if let Some(t) = first {
                claimed.set(t);
                calls.push((s as u16, t as u16));
            }
        }
        assert!(!calls.is_empty(), "graph must be connected");
        informed = informed.or(&claimed);
        rounds.push(calls);
    }
    rounds
}

fn decide(
    g: &Compiled,
    cfg: &SolverConfig,
    budget: &BudgetState,
    memo: &mut Option<Search<'_>>,
    origins: Bits,
    t: usize,
) -> Outcome {
    if cfg.workers > 1 {
        match decide_parallel(g, cfg, budget, origins, t) {
            Outcome::Feasible(_) => {
                // deterministic witness: rerun the canonical sequential search
                let mut search = Search::new(g, cfg, budget);
                search.dfs(origins, t)
            }
            other => other,
        }
    } else {
        match memo {
            Some(search) => search.dfs(origins, t),
            None => Search::new(g, cfg, budget).dfs(origins, t),
        }
    }
}

/// Splits the refutation across workers: expands whole rounds breadth-first
/// until there are enough distinct states, then searches them in parallel.
fn decide_parallel(
    g: &Compiled,
    cfg: &SolverConfig,
    budget: &BudgetState,
    origins: Bits,
    t: usize,
) -> Outcome {
    let mut states: Vec<Bits> = vec![origins];
    let mut round = 0;
    while states.len() < cfg.workers * 8 && round < t {
        let mut next: std::collections::HashSet<Bits, BuildHasherDefault<BitsHasher>> =
            Default::default();
        for state in &states {
            if *state == g.full {
                return Outcome::Feasible(Vec::new());
            }
            let senders: Vec<usize> = state
                .ones()
                .filter(|s| !g.adj[*s].and_not(state).is_empty())
                .collect();
            collect_children(g, *state, &senders, 0, Bits::EMPTY, &mut next);
        }
        round += 1;
        states = next.into_iter().collect();
        states.sort_unstable_by_key(|b| b.0);
        if states.contains(&g.full) {
            return Outcome::Feasible(Vec::new());
        }
        if states.is_empty() {
            return Outcome::Infeasible;
        }
    }
    if round >= t {
        return if states.contains(&g.full) {
            Outcome::Feasible(Vec::new())
        } else {
            Outcome::Infeasible
        };
    }
    let rem = t - round;
    let next_item = AtomicUsize::new(0);
    let found = AtomicBool::new(false);
    let budget_hit = AtomicBool::new(false);
    std::thread::scope(|scope| {
        for _ in 0..cfg.workers {
            scope.spawn(|| {
                let mut search = Search::new(g, cfg, budget);
                loop {
                    if found.load(Ordering::Relaxed) {
                        return;
                    }
                    let idx = next_item.fetch_add(1, Ordering::Relaxed);
                    if idx >= states.len() {
                        return;
                    }
                    match search.dfs(states[idx], rem) {
                        Outcome::Feasible(_) => {
                            found.store(true, Ordering::Relaxed);
                        }
                        Outcome::Budget => {
                            budget_hit.store(true, Ordering::Relaxed);
                        }
                        Outcome::Infeasible => {}
                    }
                }
            });
        }
    });
    if found.load(Ordering::Relaxed) {
        Outcome::Feasible(Vec::new())
    } else if budget_hit.load(Ordering::Relaxed) {
        Outcome::Budget
    } else {
        Outcome::Infeasible
    }
}

fn collect_children(
    g: &Compiled,
    informed: Bits,
    senders: &[usize],
    from: usize,
    claimed: Bits,
    out: &mut std::collections::HashSet<Bits, BuildHasherDefault<BitsHasher>>,
) {
    let mut idx = from;
    while idx < senders.len() {
        let s = senders[idx];
        let options = g.adj[s].and_not(&informed).and_not(&claimed);
        if options.is_empty() {
            idx += 1;
            continue;
        }
        for t in options.ones() {
            let mut next_claimed = claimed;
            next_claimed.set(t);
            collect_children(g, informed, senders, idx + 1, next_claimed, out);
        }
        return;
    }
    out.insert(informed.or(&claimed));
}

fn rounds_to_scheme(g: &Compiled, origin: &VertexLabel, rounds: &[Vec<(u16, u16)>]) -> BroadcastScheme {
    let mut s = BroadcastScheme::new([origin.clone()]);
    for (idx, calls) in rounds.iter().enumerate() {
        for (a, b) in calls {
            s.push_call(
                idx + 1,
                g.labels[*a as usize].clone(),
                g.labels[*b as usize].clone(),
            );
        }
    }
    s
}

// ---------------------------------------------------------------------------
// public operations

/// max(ceil(log2 n), eccentricity(v)): both are lower bounds on b(G, v).
pub fn lower_bound(g: &Graph, v: &VertexLabel) -> Result<usize> {
    let ecc = g.eccentricity(v)?;
    Ok(ceil_log2(g.vertex_count()).max(ecc))
}

/// Exact b(G, v) with a validating witness scheme, or an honest
/// `LowerBounded` result when the budget runs out.
pub fn broadcast_time_from(g: &Graph, v: &VertexLabel, cfg: &SolverConfig) -> Result<SolveResult> {
    let compiled = Compiled::build(g)?;
    let origin_idx = compiled.index_of(v)?;
    let lb = lower_bound(g, v)?; // also rejects disconnected graphs
    let mut origins = Bits::EMPTY;
    origins.set(origin_idx);
    let greedy = greedy_rounds(&compiled, origins);
    let ub = greedy.len();
    if ub == lb {
        return Ok(SolveResult {
            status: SolveStatus::Exact,
            time: ub,
            proven_lower: ub,
            witness: Some(rounds_to_scheme(&compiled, v, &greedy)),
        });
    }
    let budget = BudgetState::new(cfg);
    let mut shared = Some(Search::new(&compiled, cfg, &budget));
    for t in lb..ub {
        match decide(&compiled, cfg, &budget, &mut shared, origins, t) {
            Outcome::Feasible(rounds) => {
                return Ok(SolveResult {
                    status: SolveStatus::Exact,
                    time: t,
                    proven_lower: t,
                    witness: Some(rounds_to_scheme(&compiled, v, &rounds)),
                });
            }
            Outcome::Infeasible => {}
            Outcome::Budget => {
                return Ok(SolveResult {
                    status: SolveStatus::LowerBounded,
                    time: t,
                    proven_lower: t,
                    witness: None,
                });
            }
        }
    }
    Ok(SolveResult {
        status: SolveStatus::Exact,
        time: ub,
        proven_lower: ub,
        witness: Some(rounds_to_scheme(&compiled, v, &greedy)),
    })
}

/// Decision form: is b(G, v) <= t? Returns `None` when the budget ran out
/// before an answer was proven.
pub fn broadcast_decision(
    g: &Graph,
    v: &VertexLabel,
    t: usize,
    cfg: &SolverConfig,
) -> Result<Option<bool>> {
    let compiled = Compiled::build(g)?;
    let origin_idx = compiled.index_of(v)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut origins = Bits::EMPTY;
    origins.set(origin_idx);
    if lower_bound(g, v)? > t {
        return Ok(Some(false));
    }
    let greedy = greedy_rounds(&compiled, origins);
    if greedy.len() <= t {
        return Ok(Some(true));
    }
    let budget = BudgetState::new(cfg);
    let mut shared = Some(Search::new(&compiled, cfg, &budget));
    Ok(match decide(&compiled, cfg, &budget, &mut shared, origins, t) {
        Outcome::Feasible(_) => Some(true),
        Outcome::Infeasible => Some(false),
        Outcome::Budget => None,
    })
}

/// b(G) = max over all originators.
pub fn broadcast_time(g: &Graph, cfg: &SolverConfig) -> Result<usize> {
    let mut best = 0;
    for v in g.vertices() {
        let r = broadcast_time_from(g, v, cfg)?;
        if r.status != SolveStatus::Exact {
            return Err(Error::BudgetExhausted {
                proven_lower: r.proven_lower,
            });
        }
        best = best.max(r.time);
    }
    Ok(best)
}

/// Is b(G) equal to the information-theoretic floor ceil(log2 n)?
pub fn is_broadcast_graph(g: &Graph, cfg: &SolverConfig) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let target = ceil_log2(g.vertex_count());
    for v in g.vertices() {
        match broadcast_decision(g, v, target, cfg)? {
            Some(true) => {}
            Some(false) => return Ok(false),
            None => {
                return Err(Error::BudgetExhausted {
                    proven_lower: target,
                })
            }
        }
    }
    Ok(true)
}

/// The broadcast center: candidate times are scanned upward from
/// ceil(log2 n); the first time with a nonempty achiever set wins and the
/// achievers are exactly the center.
pub fn broadcast_center(g: &Graph, cfg: &SolverConfig) -> Result<BroadcastCenter> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let mut times: Vec<(VertexLabel, usize)> = Vec::with_capacity(n);
    for v in g.vertices() {
        let r = broadcast_time_from(g, v, cfg)?;
        if r.status != SolveStatus::Exact {
            return Err(Error::BudgetExhausted {
                proven_lower: r.proven_lower,
            });
        }
        times.push((v.clone(), r.time));
    }
    let min_time = times.iter().map(|(_, t)| *t).min().expect("nonempty");
    Ok(BroadcastCenter {
        members: times
            .into_iter()
            .filter(|(_, t)| *t == min_time)
            .map(|(v, _)| v)
            .collect(),
        min_time,
    })
}

/// Is |BC(G)| = x?
pub fn bc_size_decision(g: &Graph, x: usize, cfg: &SolverConfig) -> Result<bool> {
    Ok(broadcast_center(g, cfg)?.members.len() == x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{binomial_tree, knodel, path, star};
    use crate::graph::vl;
    use crate::oracle::{oracle_broadcast_time, OracleConfig};
    use crate::schemes::validate_scheme;

    fn solve(g: &Graph, v: &VertexLabel) -> SolveResult {
        broadcast_time_from(g, v, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn lower_bound_examples() {
        let bt = binomial_tree(3).unwrap();
        assert_eq!(lower_bound(&bt.graph, &bt.root).unwrap(), 3);
        let (p4, a, _) = path(4).unwrap();
        assert_eq!(lower_bound(&p4, &a).unwrap(), 3);
        // K4: ceil(log 4) = 2 dominates
        let mut k4 = Graph::new();
        for i in 0..4 {
            k4.add_vertex(vl("k", i));
        }
        for i in 0..4 {
            for j in i + 1..4 {
                k4.add_edge(&vl("k", i), &vl("k", j)).unwrap();
            }
        }
        assert_eq!(lower_bound(&k4, &vl("k", 0)).unwrap(), 2);
    }

    #[test]
    fn solve_examples() {
        let (p4, a, _) = path(4).unwrap();
        assert_eq!(solve(&p4, &a).time, 3);
        let bt = binomial_tree(3).unwrap();
        assert_eq!(solve(&bt.graph, &bt.root).time, 3);
        let kg = knodel(6).unwrap();
        assert_eq!(solve(&kg.graph, &vl("kg", 0)).time, 3);
    }

    #[test]
    fn witnesses_validate_at_reported_time() {
        let graphs: Vec<(Graph, VertexLabel)> = vec![
            {
                let (p, a, _) = path(5).unwrap();
                (p, a)
            },
            {
                let (s, c) = star(6).unwrap();
                (s, c)
            },
            {
                let kg = knodel(8).unwrap();
                (kg.graph, vl("kg", 3))
            },
        ];
        for (g, v) in &graphs {
            let r = solve(g, v);
            assert_eq!(r.status, SolveStatus::Exact);
            let w = r.witness.expect("exact results carry witnesses");
            assert_eq!(validate_scheme(g, &w).unwrap(), r.time);
            assert_eq!(r.proven_lower, r.time);
        }
    }

    #[test]
    fn agrees_with_oracle_on_catalog_sample() {
        let graphs = crate::catalog::solver_catalog(80, 11);
        let oc = OracleConfig::default();
        let sc = SolverConfig::default();
        for g in graphs.iter().take(80) {
            for v in g.vertices() {
                let origins = [v.clone()].into_iter().collect();
                let want = oracle_broadcast_time(g, &origins, &oc).unwrap();
                let got = broadcast_time_from(g, v, &sc).unwrap();
                assert_eq!(got.time, want, "origin {v}");
                assert_eq!(
                    validate_scheme(g, &got.witness.unwrap()).unwrap(),
                    want
                );
            }
        }
    }

    #[test]
    fn pruning_toggles_never_change_answers() {
        let graphs = crate::catalog::solver_catalog(30, 23);
        let mut configs = Vec::new();
        for mask in 0..16u8 {
            configs.push(SolverConfig {
                prune_doubling: mask & 1 == 0,
                prune_distance: mask & 2 == 0,
                prune_dominance: mask & 4 == 0,
                prune_regions: mask & 8 == 0,
                ..SolverConfig::default()
            });
        }
        for g in graphs.iter().take(30) {
            let v = g.vertices().next().unwrap();
            let reference = solve(g, v).time;
            for cfg in &configs {
                assert_eq!(broadcast_time_from(g, v, cfg).unwrap().time, reference);
            }
        }
    }

    #[test]
    fn worker_counts_agree() {
        let graphs = crate::catalog::solver_catalog(20, 31);
        for g in graphs.iter().take(20) {
            for v in g.vertices().take(2) {
                let seq = solve(g, v);
                let par = broadcast_time_from(
                    g,
                    v,
                    &SolverConfig {
                        workers: 3,
                        ..SolverConfig::default()
                    },
                )
                .unwrap();
                assert_eq!(seq.time, par.time);
                assert_eq!(seq.witness, par.witness);
            }
        }
    }

    #[test]
    fn graph_level_queries() {
        let (p4, _, _) = path(4).unwrap();
        assert_eq!(broadcast_time(&p4, &SolverConfig::default()).unwrap(), 3);
        assert!(!is_broadcast_graph(&p4, &SolverConfig::default()).unwrap());
        let kg = knodel(6).unwrap();
        assert_eq!(
            broadcast_time(&kg.graph, &SolverConfig::default()).unwrap(),
            3
        );
        assert!(is_broadcast_graph(&kg.graph, &SolverConfig::default()).unwrap());
        let mut k1 = Graph::new();
        k1.add_vertex(vl("g", 0));
        assert_eq!(broadcast_time(&k1, &SolverConfig::default()).unwrap(), 0);
        assert!(is_broadcast_graph(&k1, &SolverConfig::default()).unwrap());
    }

    #[test]
    fn center_examples() {
        let (p4, _, _) = path(4).unwrap();
        let c = broadcast_center(&p4, &SolverConfig::default()).unwrap();
        assert_eq!(c.min_time, 2);
        assert_eq!(
            c.members,
            [vl("path", 1), vl("path", 2)].into_iter().collect()
        );
        assert!(bc_size_decision(&p4, 2, &SolverConfig::default()).unwrap());
        assert!(!bc_size_decision(&p4, 3, &SolverConfig::default()).unwrap());

        let (p3, _, _) = path(3).unwrap();
        let c3 = broadcast_center(&p3, &SolverConfig::default()).unwrap();
        assert_eq!(c3.min_time, 2);
        assert_eq!(c3.members.len(), 3);

        let mut k1 = Graph::new();
        k1.add_vertex(vl("g", 0));
        let ck = broadcast_center(&k1, &SolverConfig::default()).unwrap();
        assert_eq!(ck.min_time, 0);
        assert_eq!(ck.members.len(), 1);
        assert!(bc_size_decision(&k1, 1, &SolverConfig::default()).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_honest() {
        let kg = knodel(12).unwrap();
        let cfg = SolverConfig {
            node_budget: Some(1),
            ..SolverConfig::default()
        };
        let r = broadcast_time_from(&kg.graph, &vl("kg", 0), &cfg).unwrap();
        if r.status == SolveStatus::LowerBounded {
            assert!(r.witness.is_none());
            let truth = solve(&kg.graph, &vl("kg", 0)).time;
            assert!(r.proven_lower <= truth);
        }
    }

    #[test]
    fn disconnected_inputs_rejected() {
        let mut g = Graph::new();
        g.add_vertex(vl("a", 0));
        g.add_vertex(vl("b", 0));
        assert!(matches!(
            broadcast_time_from(&g, &vl("a", 0), &SolverConfig::default()),
            Err(Error::Disconnected)
        ));
        assert!(matches!(
            lower_bound(&g, &vl("a", 0)),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn sandwich_property() {
        let graphs = crate::catalog::solver_catalog(25, 47);
        for g in graphs.iter().take(25) {
            for v in g.vertices().take(3) {
                let lb = lower_bound(g, v).unwrap();
                let r = solve(g, v);
                assert!(lb <= r.time);
                let w = r.witness.unwrap();
                assert!(validate_scheme(g, &w).unwrap() >= r.time);
            }
        }
    }
}
