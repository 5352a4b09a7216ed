//! Generalized resolution over bihypergraphs.
//!
//! From clauses `c_1, .., c_n` and a pivot `d = {v_1, .., v_n}` with
//! `v_i ∈ c_i`, derive `e = ⋃ (c_i \ {v_i})`. `<V, E, F>` fails Property S
//! exactly when `∅` is derivable from `E` with pivots drawn from `F`, or
//! symmetrically from `F` with pivots from `E`, or by any alternating
//! tower of closures of depth at least one.
//!
//! The closure engine keeps only ⊆-minimal sets. A resolvent built from a
//! premise `c ⊇ c'` is either a superset of the resolvent built from `c'`
//! or contains `c'` itself, so the reduced closure contains `∅` iff the
//! full closure does. The same argument applies to the pivot family.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::graph::{Bihypergraph, Side};
use crate::set::{Bits, VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of kept (subsumption-minimal) sets in one closure.
    pub max_sets: usize,
    /// Maximum number of saturation rounds in one closure.
    pub max_rounds: usize,
    /// Maximum number of resolvents generated in one closure.
    pub max_generated: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_sets: 1_000_000,
            max_rounds: 10_000,
            max_generated: 50_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClosureStats {
    pub generated: u64,
    pub kept: usize,
    pub subsumed: u64,
    pub rounds: usize,
}

impl ClosureStats {
    fn absorb(&mut self, other: &ClosureStats) {
        self.generated += other.generated;
        self.kept += other.kept;
        self.subsumed += other.subsumed;
        self.rounds += other.rounds;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult {
    /// Antichain of ⊆-minimal sets; exactly `[∅]` when `contains_empty`.
    pub sets: Vec<VertexSet>,
    pub contains_empty: bool,
    pub stats: ClosureStats,
}

/// A reference to a clause: an input set by family and index, or an earlier step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClauseRef {
    Input(Side, usize),
    Step(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionStep {
    pub id: String,
    pub conclusion: VertexSet,
    pub premises: Vec<ClauseRef>,
    pub pivot: ClauseRef,
    /// `(pivot element, premise index)` pairs. `None` when read from a proof
    /// file, in which case the checker searches for a consistent pairing.
    pub pairing: Option<Vec<(VertexId, usize)>>,
}

/// The closure discipline a refutation claims to live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `[E]_F`
    EOverF,
    /// `[F]_E`
    FOverE,
    /// `[E,F,n]` or `[F,E,n]` for some `n` up to the given depth.
    Alternating(u32),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::EOverF => f.write_str("E-over-F"),
            Mode::FOverE => f.write_str("F-over-E"),
            Mode::Alternating(n) => write!(f, "alternating {n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub mode: Mode,
    pub steps: Vec<ResolutionStep>,
}

impl Refutation {
    /// Name of a referenced clause: its label for input sets, its id for steps.
    pub fn ref_name<'a>(&'a self, b: &'a Bihypergraph, r: ClauseRef) -> &'a str {
        match r {
            ClauseRef::Input(side, i) => b.family(side).label(i),
            ClauseRef::Step(k) => &self.steps[k].id,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    EOverF,
    FOverE,
    Alternating { depth: u32, first: Side },
}

impl Strategy {
    fn mode(self) -> Mode {
        match self {
            Strategy::EOverF => Mode::EOverF,
            Strategy::FOverE => Mode::FOverE,
            Strategy::Alternating { depth, .. } => Mode::Alternating(depth),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResolutionOutcome {
    /// The closure saturated without deriving `∅`.
    HasS { stats: ClosureStats },
    Refuted {
        refutation: Refutation,
        stats: ClosureStats,
    },
}

impl ResolutionOutcome {
    pub fn stats(&self) -> &ClosureStats {
        match self {
            ResolutionOutcome::HasS { stats } | ResolutionOutcome::Refuted { stats, .. } => stats,
        }
    }
}

/// One application of the resolution rule.
pub fn resolve(
    premises: &[VertexSet],
    pivot: &VertexSet,
    pairing: &[(VertexId, usize)],
) -> Result<VertexSet> {
    let invalid = |msg: String| Err(Error::InvalidResolution(msg));
    if pairing.len() != pivot.len() || premises.len() != pivot.len() {
        return invalid(format!(
            "{} premises and {} pairs for a pivot of size {}",
            premises.len(),
            pairing.len(),
            pivot.len()
        ));
    }
    let mut seen_v = HashSet::new();
    let mut seen_p = HashSet::new();
    let mut out = VertexSet::empty();
    for &(v, p) in pairing {
        if !pivot.contains(v) {
            return invalid(format!("paired vertex {v} is not in the pivot"));
        }
        if !seen_v.insert(v) {
            return invalid(format!("pivot element {v} paired twice"));
        }
        let Some(premise) = premises.get(p) else {
            return invalid(format!("premise index {p} out of range"));
        };
        if !seen_p.insert(p) {
            return invalid(format!("premise {p} paired twice"));
        }
        if !premise.contains(v) {
            return invalid(format!("vertex {v} is absent from premise {p}"));
        }
        out = out.union(&premise.without(v));
    }
    // Counting above plus distinctness means every pivot element is paired.
    Ok(out)
}

/// Every resolvent obtainable from `working` on `pivot`, deduplicated and
/// reduced to its ⊆-minimal members, in canonical order.
pub fn all_resolvents(working: &[VertexSet], pivot: &VertexSet) -> Vec<VertexSet> {
    if pivot.is_empty() {
        return vec![VertexSet::empty()];
    }
    let universe = universe_of(working.iter().chain(std::iter::once(pivot)));
    let bits: Vec<Bits> = working
        .iter()
        .map(|s| Bits::from_set(s, universe))
        .collect();
    let elems: Vec<VertexId> = pivot.iter().collect();
    let candidates: Vec<Vec<usize>> = elems
        .iter()
        .map(|&v| {
            (0..working.len())
                .filter(|&i| working[i].contains(v))
                .collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut found: HashSet<Bits> = HashSet::new();
    let mut choice = vec![0usize; elems.len()];
    loop {
        let mut acc = Bits::zeros(universe);
        for (pos, &c) in choice.iter().enumerate() {
            let mut part = bits[candidates[pos][c]].clone();
            part.remove(elems[pos]);
            acc.union_with(&part);
        }
        found.insert(acc);
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return minimal_sets(found.into_iter().map(|b| b.to_set()).collect());
            }
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn minimal_sets(mut sets: Vec<VertexSet>) -> Vec<VertexSet> {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut kept: Vec<VertexSet> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

fn universe_of<'a>(sets: impl Iterator<Item = &'a VertexSet>) -> usize {
    sets.filter_map(VertexSet::max_id)
        .max()
        .map_or(0, |m| m as usize + 1)
}

/// `[A]_D`: the resolution closure of `a_family` on pivots from `d_family`.
pub fn closure(
    a_family: &[VertexSet],
    d_family: &[VertexSet],
    limits: Limits,
) -> Result<ClosureResult> {
    let universe = universe_of(a_family.iter().chain(d_family.iter()));
    let mut engine = Engine::new(universe, limits);
    let a: Vec<NodeId> = a_family
        .iter()
        .enumerate()
        .map(|(i, s)| engine.input(s, Side::E, i))
        .collect();
    let d: Vec<NodeId> = d_family
        .iter()
        .enumerate()
        .map(|(i, s)| engine.input(s, Side::F, i))
        .collect();
    let level = engine.closure(&a, &d)?;
    Ok(engine.result(&level))
}

/// `[E,F,n]` when `first` is `E`, `[F,E,n]` when it is `F`.
pub fn alternating_closure(
    b: &Bihypergraph,
    n: u32,
    first: Side,
    limits: Limits,
) -> Result<ClosureResult> {
    let mut engine = Engine::for_graph(b, limits);
    let level = engine.alternating(n, first)?;
    Ok(engine.result(&level))
}

/// Decides Property S by saturating the closure selected by `strategy`.
pub fn decide_by_resolution(
    b: &Bihypergraph,
    strategy: Strategy,
    limits: Limits,
) -> Result<ResolutionOutcome> {
    let (depth, first) = match strategy {
        Strategy::EOverF => (1, Side::E),
        Strategy::FOverE => (1, Side::F),
        Strategy::Alternating { depth: 0, .. } => {
            return Err(Error::InvalidResolution(
                "alternating depth must be at least 1 for a complete decision".into(),
            ))
        }
        Strategy::Alternating { depth, first } => (depth, first),
    };
    let mut engine = Engine::for_graph(b, limits);
    let level = engine.alternating(depth, first)?;
    let stats = engine.stats;
    match level.empty {
        None => Ok(ResolutionOutcome::HasS { stats }),
        Some(node) => Ok(ResolutionOutcome::Refuted {
            refutation: engine.extract(b, node, strategy.mode()),
            stats,
        }),
    }
}

type NodeId = usize;

#[derive(Clone, Debug)]
enum Origin {
    Input(Side, usize),
    Derived {
        premises: Vec<NodeId>,
        pivot: NodeId,
        pairing: Vec<(VertexId, usize)>,
    },
}

#[derive(Clone, Debug)]
struct Node {
    bits: Bits,
    len: usize,
    origin: Origin,
}

struct Level {
    kept: Vec<NodeId>,
    empty: Option<NodeId>,
}

struct Candidate {
    bits: Bits,
    premises: Vec<NodeId>,
    pivot: NodeId,
}

/// Arena of every set ever derived, with parent links. Sets dropped from an
/// antichain by subsumption stay in the arena so refutations can cite them.
struct Engine {
    universe: usize,
    nodes: Vec<Node>,
    limits: Limits,
    stats: ClosureStats,
    inputs: [Vec<NodeId>; 2],
}

impl Engine {
    fn new(universe: usize, limits: Limits) -> Self {
        Engine {
            universe,
            nodes: Vec::new(),
            limits,
            stats: ClosureStats::default(),
            inputs: [vec![], vec![]],
        }
    }

    fn for_graph(b: &Bihypergraph, limits: Limits) -> Self {
        let mut engine = Engine::new(b.vertex_count(), limits);
        for side in [Side::E, Side::F] {
            let ids: Vec<NodeId> = b
                .family(side)
                .sets()
                .iter()
                .enumerate()
                .map(|(i, s)| engine.input(s, side, i))
                .collect();
            engine.inputs[side_index(side)] = ids;
        }
        engine
    }

    fn input(&mut self, set: &VertexSet, side: Side, index: usize) -> NodeId {
        self.nodes.push(Node {
            bits: Bits::from_set(set, self.universe),
            len: set.len(),
            origin: Origin::Input(side, index),
        });
        self.nodes.len() - 1
    }

    fn derive(&mut self, c: Candidate) -> NodeId {
        let pairing = self.pairing_of(&c);
        let len = c.bits.count();
        self.nodes.push(Node {
            bits: c.bits,
            len,
            origin: Origin::Derived {
                premises: c.premises,
                pivot: c.pivot,
                pairing,
            },
        });
        self.nodes.len() - 1
    }

    fn pairing_of(&self, c: &Candidate) -> Vec<(VertexId, usize)> {
        let elems = self.nodes[c.pivot].bits.to_set();
        elems.iter().zip(0..c.premises.len()).collect()
    }

    /// ⊆-minimal members of `ids`, first occurrence winning among equals,
    /// returned in arena order.
    fn reduce(&self, ids: &[NodeId]) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = ids.to_vec();
        order.sort_by_key(|&id| (self.nodes[id].len, id));
        let mut kept: Vec<NodeId> = Vec::new();
        for id in order {
            let bits = &self.nodes[id].bits;
            if !kept.iter().any(|&k| self.nodes[k].bits.is_subset(bits)) {
                kept.push(id);
            }
        }
        kept.sort_unstable();
        kept
    }

    fn alternating(&mut self, n: u32, first: Side) -> Result<Level> {
        let side_at = |m: u32| {
            if (n - m).is_multiple_of(2) {
                first
            } else {
                first.other()
            }
        };
        let base0 = self.inputs[side_index(side_at(0))].clone();
        let mut level = Level {
            empty: None,
            kept: self.reduce(&base0),
        };
        level.empty = level
            .kept
            .iter()
            .copied()
            .find(|&id| self.nodes[id].len == 0);
        for m in 1..=n {
            let base = self.inputs[side_index(side_at(m))].clone();
            let pivots = level.kept.clone();
            level = self.closure(&base, &pivots)?;
        }
        Ok(level)
    }

    fn closure(&mut self, base: &[NodeId], pivot_family: &[NodeId]) -> Result<Level> {
        let mut stats = ClosureStats::default();
        let outcome = self.saturate(base, pivot_family, &mut stats);
        self.stats.absorb(&stats);
        outcome
    }

    fn saturate(
        &mut self,
        base: &[NodeId],
        pivot_family: &[NodeId],
        stats: &mut ClosureStats,
    ) -> Result<Level> {
        let mut kept = self.reduce(base);
        stats.kept = kept.len();
        if let Some(&e) = kept.iter().find(|&&id| self.nodes[id].len == 0) {
            return Ok(Level {
                kept: vec![e],
                empty: Some(e),
            });
        }
        let pivots = self.reduce(pivot_family);
        if let Some(&p) = pivots.iter().find(|&&id| self.nodes[id].len == 0) {
            stats.generated += 1;
            let e = self.derive(Candidate {
                bits: Bits::zeros(self.universe),
                premises: vec![],
                pivot: p,
            });
            stats.kept = 1;
            return Ok(Level {
                kept: vec![e],
                empty: Some(e),
            });
        }

        let mut delta: Vec<NodeId> = kept.clone();
        while !delta.is_empty() {
            stats.rounds += 1;
            if stats.rounds > self.limits.max_rounds {
                return Err(Error::ResourceLimit(format!(
                    "closure did not saturate within {} rounds",
                    self.limits.max_rounds
                )));
            }
            let delta_set: HashSet<NodeId> = delta.iter().copied().collect();
            let old: Vec<NodeId> = kept
                .iter()
                .copied()
                .filter(|id| !delta_set.contains(id))
                .collect();

            let mut fresh: Vec<Candidate> = Vec::new();
            let mut fresh_seen: HashSet<Bits> = HashSet::new();
            for &p in &pivots {
                self.expand_pivot(p, &kept, &old, &delta, stats, &mut fresh, &mut fresh_seen)?;
            }

            let mut next_delta = Vec::new();
            for cand in fresh {
                if kept
                    .iter()
                    .any(|&k| self.nodes[k].bits.is_subset(&cand.bits))
                {
                    stats.subsumed += 1;
                    continue;
                }
                let before = kept.len();
                kept.retain(|&k| !cand.bits.is_subset(&self.nodes[k].bits));
                stats.subsumed += (before - kept.len()) as u64;
                let id = self.derive(cand);
                if self.nodes[id].len == 0 {
                    stats.kept = 1;
                    return Ok(Level {
                        kept: vec![id],
                        empty: Some(id),
                    });
                }
                kept.push(id);
                next_delta.push(id);
                if kept.len() > self.limits.max_sets {
                    return Err(Error::ResourceLimit(format!(
                        "closure exceeded {} kept sets",
                        self.limits.max_sets
                    )));
                }
            }
            let live: HashSet<NodeId> = kept.iter().copied().collect();
            next_delta.retain(|id| live.contains(id));
            delta = next_delta;
            stats.kept = kept.len();
        }
        Ok(Level { kept, empty: None })
    }

    /// Enumerates pairings for pivot `p` that use at least one set from
    /// `delta` (semi-naive evaluation): positions before the first delta
    /// position draw from `old`, that position from `delta`, later ones from
    /// everything kept.
    #[allow(clippy::too_many_arguments)]
    fn expand_pivot(
        &self,
        p: NodeId,
        kept: &[NodeId],
        old: &[NodeId],
        delta: &[NodeId],
        stats: &mut ClosureStats,
        fresh: &mut Vec<Candidate>,
        fresh_seen: &mut HashSet<Bits>,
    ) -> Result<()> {
        let elems: Vec<VertexId> = self.nodes[p].bits.to_set().iter().collect();
        let containing = |pool: &[NodeId], v: VertexId| -> Vec<NodeId> {
            pool.iter()
                .copied()
                .filter(|&id| self.nodes[id].bits.contains(v))
                .collect()
        };
        let all_lists: Vec<Vec<NodeId>> = elems.iter().map(|&v| containing(kept, v)).collect();
        if all_lists.iter().any(Vec::is_empty) {
            return Ok(());
        }
        let old_lists: Vec<Vec<NodeId>> = elems.iter().map(|&v| containing(old, v)).collect();
        let delta_lists: Vec<Vec<NodeId>> = elems.iter().map(|&v| containing(delta, v)).collect();

        for j in 0..elems.len() {
            if delta_lists[j].is_empty() || old_lists[..j].iter().any(Vec::is_empty) {
                continue;
            }
            let lists: Vec<&[NodeId]> = (0..elems.len())
                .map(|pos| match pos.cmp(&j) {
                    std::cmp::Ordering::Less => old_lists[pos].as_slice(),
                    std::cmp::Ordering::Equal => delta_lists[pos].as_slice(),
                    std::cmp::Ordering::Greater => all_lists[pos].as_slice(),
                })
                .collect();
            let mut chosen = Vec::with_capacity(elems.len());
            self.pair_dfs(
                p,
                &elems,
                &lists,
                kept,
                Bits::zeros(self.universe),
                &mut chosen,
                stats,
                fresh,
                fresh_seen,
            )?;
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn pair_dfs(
        &self,
        p: NodeId,
        elems: &[VertexId],
        lists: &[&[NodeId]],
        kept: &[NodeId],
        acc: Bits,
        chosen: &mut Vec<NodeId>,
        stats: &mut ClosureStats,
        fresh: &mut Vec<Candidate>,
        fresh_seen: &mut HashSet<Bits>,
    ) -> Result<()> {
        let pos = chosen.len();
        if pos == elems.len() {
            stats.generated += 1;
            if stats.generated > self.limits.max_generated {
                return Err(Error::ResourceLimit(format!(
                    "closure generated more than {} resolvents",
                    self.limits.max_generated
                )));
            }
            if fresh_seen.insert(acc.clone()) {
                fresh.push(Candidate {
                    bits: acc,
                    premises: chosen.clone(),
                    pivot: p,
                });
            }
            return Ok(());
        }
        for &c in lists[pos] {
            let mut next = self.nodes[c].bits.clone();
            next.remove(elems[pos]);
            next.union_with(&acc);
            // The union only grows; once it contains a kept set the leaf is subsumed.
            if kept.iter().any(|&k| self.nodes[k].bits.is_subset(&next)) {
                stats.subsumed += 1;
                continue;
            }
            chosen.push(c);
            self.pair_dfs(
                p, elems, lists, kept, next, chosen, stats, fresh, fresh_seen,
            )?;
            chosen.pop();
        }
        Ok(())
    }

    fn result(&self, level: &Level) -> ClosureResult {
        let sets = match level.empty {
            Some(_) => vec![VertexSet::empty()],
            None => level
                .kept
                .iter()
                .map(|&id| self.nodes[id].bits.to_set())
                .collect(),
        };
        ClosureResult {
            contains_empty: level.empty.is_some(),
            sets,
            stats: self.stats,
        }
    }

    fn extract(&self, b: &Bihypergraph, empty: NodeId, mode: Mode) -> Refutation {
        if let Origin::Input(side, i) = self.nodes[empty].origin {
            // ∅ is itself an input set: resolve on it from the other side.
            let mode = match mode {
                Mode::Alternating(n) => Mode::Alternating(n),
                _ if side == Side::E => Mode::FOverE,
                _ => Mode::EOverF,
            };
            let id = fresh_ids(b, 1).pop().unwrap();
            return Refutation {
                mode,
                steps: vec![ResolutionStep {
                    id,
                    conclusion: VertexSet::empty(),
                    premises: vec![],
                    pivot: ClauseRef::Input(side, i),
                    pairing: Some(vec![]),
                }],
            };
        }

        let mut needed: BTreeSet<NodeId> = BTreeSet::new();
        let mut stack = vec![empty];
        while let Some(id) = stack.pop() {
            if let Origin::Derived {
                premises, pivot, ..
            } = &self.nodes[id].origin
            {
                if needed.insert(id) {
                    stack.extend(premises.iter().copied());
                    stack.push(*pivot);
                }
            }
        }
        let order: Vec<NodeId> = needed.into_iter().collect();
        let ids = fresh_ids(b, order.len());
        let step_of = |node: NodeId| order.binary_search(&node).ok();
        let as_ref = |node: NodeId| match self.nodes[node].origin {
            Origin::Input(side, i) => ClauseRef::Input(side, i),
            Origin::Derived { .. } => ClauseRef::Step(step_of(node).unwrap()),
        };
        let steps = order
            .iter()
            .zip(ids)
            .map(|(&node, id)| {
                let Origin::Derived {
                    premises,
                    pivot,
                    pairing,
                } = &self.nodes[node].origin
                else {
                    unreachable!()
                };
                ResolutionStep {
                    id,
                    conclusion: self.nodes[node].bits.to_set(),
                    premises: premises.iter().map(|&p| as_ref(p)).collect(),
                    pivot: as_ref(*pivot),
                    pairing: Some(pairing.clone()),
                }
            })
            .collect();
        Refutation { mode, steps }
    }
}

fn side_index(side: Side) -> usize {
    match side {
        Side::E => 0,
        Side::F => 1,
    }
}

/// Step ids `R1, R2, ..`, lengthening the prefix until none clashes with an input label.
fn fresh_ids(b: &Bihypergraph, count: usize) -> Vec<String> {
    let labels: HashSet<&str> = b
        .e()
        .labels()
        .iter()
        .chain(b.f().labels().iter())
        .map(String::as_str)
        .collect();
    let mut prefix = String::from("R");
    loop {
        let ids: Vec<String> = (1..=count).map(|k| format!("{prefix}{k}")).collect();
        if ids.iter().all(|id| !labels.contains(id.as_str())) {
            return ids;
        }
        prefix.push('R');
    }
}

/// Why a refutation was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("the proof has no steps")]
    NoSteps,
    #[error("the last step does not conclude the empty set")]
    FinalNotEmpty,
    #[error("duplicate step id")]
    DuplicateId,
    #[error("reference to {0} does not resolve to an input set or an earlier step")]
    BadReference(String),
    #[error("{premises} premises for a pivot of size {pivot}")]
    PremiseCount { premises: usize, pivot: usize },
    #[error("invalid pairing: {0}")]
    BadPairing(String),
    #[error("no pairing of pivot elements to premises yields the stated conclusion")]
    NoValidPairing,
    #[error("stated conclusion {stated:?} differs from the resolvent {actual:?}")]
    ConclusionMismatch {
        stated: VertexSet,
        actual: VertexSet,
    },
    #[error("step does not belong to the closure required by mode {0}")]
    ModeViolation(Mode),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub step_index: Option<usize>,
    pub step_id: Option<String>,
    pub violation: Violation,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.step_id {
            Some(id) => write!(f, "step {id}: {}", self.violation),
            None => write!(f, "proof: {}", self.violation),
        }
    }
}

impl std::error::Error for CheckFailure {}

const UNREACHABLE: u32 = u32::MAX;

/// Validates every step of `r` against `b` and the declared mode.
pub fn check_refutation(b: &Bihypergraph, r: &Refutation) -> std::result::Result<(), CheckFailure> {
    let fail = |k: Option<usize>, violation: Violation| CheckFailure {
        step_index: k,
        step_id: k.map(|k| r.steps[k].id.clone()),
        violation,
    };
    if r.steps.is_empty() {
        return Err(fail(None, Violation::NoSteps));
    }
    let mut ids = HashSet::new();
    // Least n with the step in [E,F,n] (index 0) and in [F,E,n] (index 1).
    let mut levels: Vec<[u32; 2]> = Vec::with_capacity(r.steps.len());

    for (k, step) in r.steps.iter().enumerate() {
        if !ids.insert(step.id.as_str()) {
            return Err(fail(Some(k), Violation::DuplicateId));
        }
        let lookup = |c: ClauseRef| -> std::result::Result<(&VertexSet, [u32; 2]), CheckFailure> {
            match c {
                ClauseRef::Input(side, i) if i < b.family(side).len() => {
                    let lvl = match side {
                        Side::E => [0, UNREACHABLE],
                        Side::F => [UNREACHABLE, 0],
                    };
                    Ok((b.family(side).get(i), lvl))
                }
                ClauseRef::Step(j) if j < k => Ok((&r.steps[j].conclusion, levels[j])),
                other => Err(fail(Some(k), Violation::BadReference(format!("{other:?}")))),
            }
        };
        let (pivot, pivot_lvl) = lookup(step.pivot)?;
        let mut premise_sets = Vec::with_capacity(step.premises.len());
        let mut lvl = [1u32, 1u32];
        for &p in &step.premises {
            let (set, l) = lookup(p)?;
            premise_sets.push(set.clone());
            lvl[0] = lvl[0].max(l[0]);
            lvl[1] = lvl[1].max(l[1]);
        }
        lvl[0] = lvl[0].max(pivot_lvl[1].saturating_add(1));
        lvl[1] = lvl[1].max(pivot_lvl[0].saturating_add(1));
        levels.push(lvl);

        if premise_sets.len() != pivot.len() {
            return Err(fail(
                Some(k),
                Violation::PremiseCount {
                    premises: premise_sets.len(),
                    pivot: pivot.len(),
                },
            ));
        }
        match &step.pairing {
            Some(pairing) => {
                let actual = resolve(&premise_sets, pivot, pairing).map_err(|e| {
                    let Error::InvalidResolution(msg) = e else {
                        unreachable!()
                    };
                    fail(Some(k), Violation::BadPairing(msg))
                })?;
                if actual != step.conclusion {
                    return Err(fail(
                        Some(k),
                        Violation::ConclusionMismatch {
                            stated: step.conclusion.clone(),
                            actual,
                        },
                    ));
                }
            }
            None => {
                if find_pairing(&premise_sets, pivot, &step.conclusion).is_none() {
                    return Err(fail(Some(k), Violation::NoValidPairing));
                }
            }
        }
        let admitted = match r.mode {
            Mode::EOverF => lvl[0] <= 1,
            Mode::FOverE => lvl[1] <= 1,
            Mode::Alternating(n) => lvl[0] <= n || lvl[1] <= n,
        };
        if !admitted {
            return Err(fail(Some(k), Violation::ModeViolation(r.mode)));
        }
    }
    if !r.steps.last().unwrap().conclusion.is_empty() {
        return Err(fail(Some(r.steps.len() - 1), Violation::FinalNotEmpty));
    }
    Ok(())
}

/// Searches for a bijection between premises and pivot elements whose
/// resolvent is exactly `conclusion`.
pub fn find_pairing(
    premises: &[VertexSet],
    pivot: &VertexSet,
    conclusion: &VertexSet,
) -> Option<Vec<(VertexId, usize)>> {
    if premises.len() != pivot.len() {
        return None;
    }
    // A premise c paired with v contributes c \ {v}, which must lie inside the conclusion.
    let options: Vec<Vec<VertexId>> = premises
        .iter()
        .map(|c| {
            let outside = c.difference(conclusion);
            match outside.len() {
                0 => c.iter().filter(|&v| pivot.contains(v)).collect(),
                1 if pivot.contains(outside.members()[0]) => vec![outside.members()[0]],
                _ => vec![],
            }
        })
        .collect();
    let mut used = HashSet::new();
    let mut pairing = Vec::with_capacity(premises.len());
    fn go(
        i: usize,
        premises: &[VertexSet],
        options: &[Vec<VertexId>],
        conclusion: &VertexSet,
        used: &mut HashSet<VertexId>,
        pairing: &mut Vec<(VertexId, usize)>,
    ) -> bool {
        if i == premises.len() {
            let union = pairing.iter().fold(VertexSet::empty(), |acc, &(v, p)| {
                acc.union(&premises[p].without(v))
            });
            return &union == conclusion;
        }
        for &v in &options[i] {
            if used.insert(v) {
                pairing.push((v, i));
                if go(i + 1, premises, options, conclusion, used, pairing) {
                    return true;
                }
                pairing.pop();
                used.remove(&v);
            }
        }
        false
    }
    go(0, premises, &options, conclusion, &mut used, &mut pairing).then_some(pairing)
}
