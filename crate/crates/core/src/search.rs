//! Complete Property S decision with certificates.
//!
//! Every vertex carries one boolean, "in X". An `E`-set is the clause
//! "some member is in X", an `F`-set the clause "some member is out of X".

use std::collections::VecDeque;
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::graph::{Bihypergraph, SPartition, Side};
use crate::oracle;
use crate::resolution::{
    decide_by_resolution, ClosureStats, Limits, Refutation, ResolutionOutcome, Strategy,
};
use crate::set::{VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    HasS,
    FailsS,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::HasS => "HasS",
            Verdict::FailsS => "FailsS",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureWitness {
    Refutation(Refutation),
    /// Established by exhausting the search space; no proof object.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    HasS(SPartition),
    FailsS(FailureWitness),
}

impl Certificate {
    pub fn verdict(&self) -> Verdict {
        match self {
            Certificate::HasS(_) => Verdict::HasS,
            Certificate::FailsS(_) => Verdict::FailsS,
        }
    }

    pub fn witness(&self) -> Option<&SPartition> {
        match self {
            Certificate::HasS(x) => Some(x),
            Certificate::FailsS(_) => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            Certificate::FailsS(FailureWitness::Refutation(r)) => Some(r),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Search,
    Resolution,
    TwoSat,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Search => "search",
            Method::Resolution => "resolution",
            Method::TwoSat => "2sat",
            Method::Oracle => "oracle",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideConfig {
    pub method: Method,
    pub strategy: Strategy,
    pub limits: Limits,
    pub max_decisions: Option<u64>,
    /// Re-run resolution after a failure found by another method to obtain a proof.
    pub refute_failures: bool,
    pub oracle_cap: usize,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            method: Method::Search,
            strategy: Strategy::EOverF,
            limits: Limits::default(),
            max_decisions: None,
            refute_failures: false,
            oracle_cap: oracle::DEFAULT_CAP,
        }
    }
}

impl DecideConfig {
    pub fn with_method(method: Method) -> Self {
        DecideConfig {
            method,
            ..DecideConfig::default()
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub certificate: Certificate,
    pub closure: Option<ClosureStats>,
    pub search: Option<SearchStats>,
}

pub fn decide(b: &Bihypergraph, config: &DecideConfig) -> Result<Certificate> {
    decide_with_stats(b, config).map(|d| d.certificate)
}

pub fn decide_with_stats(b: &Bihypergraph, config: &DecideConfig) -> Result<Decision> {
    let mut decision = match config.method {
        Method::Resolution => {
            let outcome = decide_by_resolution(b, config.strategy, config.limits)?;
            let stats = *outcome.stats();
            let certificate = match outcome {
                ResolutionOutcome::HasS { .. } => {
                    // The closure settles the verdict; the witness still comes from search.
                    let (cert, _) = search(b, config.max_decisions)?;
                    match cert {
                        Certificate::HasS(_) => cert,
                        Certificate::FailsS(_) => unreachable!("resolution and search disagree"),
                    }
                }
                ResolutionOutcome::Refuted { refutation, .. } => {
                    Certificate::FailsS(FailureWitness::Refutation(refutation))
                }
            };
            return Ok(Decision {
                certificate,
                closure: Some(stats),
                search: None,
            });
        }
        Method::Search => {
            let (certificate, stats) = search(b, config.max_decisions)?;
            Decision {
                certificate,
                closure: None,
                search: Some(stats),
            }
        }
        Method::TwoSat => Decision {
            certificate: decide_2sat(b)?,
            closure: None,
            search: None,
        },
        Method::Oracle => Decision {
            certificate: oracle::brute_force_decide_with_cap(b, config.oracle_cap)?,
            closure: None,
            search: None,
        },
    };
    if config.refute_failures
        && decision.certificate == Certificate::FailsS(FailureWitness::Exhausted)
    {
        match decide_by_resolution(b, config.strategy, config.limits)? {
            ResolutionOutcome::Refuted { refutation, stats } => {
                decision.certificate = Certificate::FailsS(FailureWitness::Refutation(refutation));
                decision.closure = Some(stats);
            }
            ResolutionOutcome::HasS { .. } => {
                unreachable!("{} and resolution disagree", config.method)
            }
        }
    }
    Ok(decision)
}

struct Clause {
    members: Vec<VertexId>,
    /// true: needs a member in X (an E-set); false: needs a member out of X (an F-set).
    want: bool,
}

/// Counter-based unit propagation over the per-vertex "in X" variables.
struct Solver {
    clauses: Vec<Clause>,
    occurs: Vec<Vec<usize>>,
    assign: Vec<Option<bool>>,
    satisfied: Vec<u32>,
    free: Vec<u32>,
    trail: Vec<VertexId>,
    queue: VecDeque<(VertexId, bool)>,
    stats: SearchStats,
}

impl Solver {
    fn new(b: &Bihypergraph) -> Self {
        let n = b.vertex_count();
        let mut clauses = Vec::new();
        for (side, want) in [(Side::E, true), (Side::F, false)] {
            for set in b.family(side).sets() {
                clauses.push(Clause {
                    members: set.members().to_vec(),
                    want,
                });
            }
        }
        let mut occurs = vec![Vec::new(); n];
        for (ci, c) in clauses.iter().enumerate() {
            for &v in &c.members {
                occurs[v as usize].push(ci);
            }
        }
        let free = clauses.iter().map(|c| c.members.len() as u32).collect();
        Solver {
            satisfied: vec![0; clauses.len()],
            free,
            clauses,
            occurs,
            assign: vec![None; n],
            trail: Vec::new(),
            queue: VecDeque::new(),
            stats: SearchStats::default(),
        }
    }

    /// Queues the last free member of every unit clause; false if some clause is already falsified.
    fn initial_units(&mut self) -> bool {
        for ci in 0..self.clauses.len() {
            if self.satisfied[ci] == 0 {
                match self.free[ci] {
                    0 => return false,
                    1 => {
                        let c = &self.clauses[ci];
                        let u = *c
                            .members
                            .iter()
                            .find(|&&m| self.assign[m as usize].is_none())
                            .unwrap();
                        self.queue.push_back((u, c.want));
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn assign(&mut self, v: VertexId, value: bool) -> bool {
        self.assign[v as usize] = Some(value);
        self.trail.push(v);
        let mut ok = true;
        for &ci in &self.occurs[v as usize] {
            self.free[ci] -= 1;
            let c = &self.clauses[ci];
            if value == c.want {
                self.satisfied[ci] += 1;
            } else if self.satisfied[ci] == 0 {
                match self.free[ci] {
                    0 => ok = false,
                    1 => {
                        let u = *c
                            .members
                            .iter()
                            .find(|&&m| self.assign[m as usize].is_none())
                            .unwrap();
                        self.queue.push_back((u, c.want));
                    }
                    _ => {}
                }
            }
        }
        ok
    }

    fn propagate(&mut self) -> bool {
        while let Some((v, value)) = self.queue.pop_front() {
            match self.assign[v as usize] {
                Some(current) if current == value => continue,
                Some(_) => {
                    self.queue.clear();
                    return false;
                }
                None => {
                    self.stats.propagations += 1;
                    if !self.assign(v, value) {
                        self.queue.clear();
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().unwrap();
            let value = self.assign[v as usize].take().unwrap();
            for &ci in &self.occurs[v as usize] {
                self.free[ci] += 1;
                if value == self.clauses[ci].want {
                    self.satisfied[ci] -= 1;
                }
            }
        }
    }

    /// Lowest unassigned vertex occurring in a not-yet-satisfied clause.
    fn pick(&self) -> Option<VertexId> {
        (0..self.assign.len()).find_map(|v| {
            (self.assign[v].is_none() && self.occurs[v].iter().any(|&ci| self.satisfied[ci] == 0))
                .then_some(v as VertexId)
        })
    }

    fn solve(&mut self, max_decisions: Option<u64>) -> Result<bool> {
        if !self.initial_units() || !self.propagate() {
            self.stats.conflicts += 1;
            return Ok(false);
        }
        // (vertex, trail length before the decision, whether "out" was already tried)
        let mut decisions: Vec<(VertexId, usize, bool)> = Vec::new();
        loop {
            let Some(v) = self.pick() else {
                return Ok(true);
            };
            self.stats.decisions += 1;
            if max_decisions.is_some_and(|m| self.stats.decisions > m) {
                return Err(Error::ResourceLimit(format!(
                    "search exceeded {} decisions",
                    max_decisions.unwrap()
                )));
            }
            decisions.push((v, self.trail.len(), false));
            let mut ok = self.assign(v, true) && self.propagate();
            while !ok {
                self.stats.conflicts += 1;
                self.queue.clear();
                loop {
                    let Some((v, mark, flipped)) = decisions.pop() else {
                        return Ok(false);
                    };
                    self.undo_to(mark);
                    if !flipped {
                        decisions.push((v, mark, true));
                        ok = self.assign(v, false) && self.propagate();
                        break;
                    }
                }
            }
        }
    }

    fn witness(&self) -> VertexSet {
        VertexSet::new(
            (0..self.assign.len() as VertexId).filter(|&v| self.assign[v as usize] == Some(true)),
        )
    }
}

fn search(b: &Bihypergraph, max_decisions: Option<u64>) -> Result<(Certificate, SearchStats)> {
    let mut solver = Solver::new(b);
    let certificate = if solver.solve(max_decisions)? {
        Certificate::HasS(SPartition::new(solver.witness()))
    } else {
        Certificate::FailsS(FailureWitness::Exhausted)
    };
    Ok((certificate, solver.stats))
}

/// Extends a partial "in X" assignment by unit propagation alone.
/// Returns `None` when propagation reaches a conflict.
pub fn propagate(b: &Bihypergraph, partial: &[Option<bool>]) -> Option<Vec<Option<bool>>> {
    assert_eq!(partial.len(), b.vertex_count());
    let mut solver = Solver::new(b);
    for (v, value) in partial.iter().enumerate() {
        if let Some(value) = *value {
            solver.queue.push_back((v as VertexId, value));
        }
    }
    if !solver.propagate() || !solver.initial_units() || !solver.propagate() {
        return None;
    }
    Some(solver.assign)
}

/// Polynomial decision when every set has at most two members, via the
/// implication graph of the two-literal clauses and its strongly connected
/// components.
pub fn decide_2sat(b: &Bihypergraph) -> Result<Certificate> {
    for side in [Side::E, Side::F] {
        for (label, set) in b.family(side).iter() {
            if set.len() > 2 {
                return Err(Error::SetTooLarge {
                    label: label.to_string(),
                    size: set.len(),
                });
            }
        }
    }
    if b.e()
        .sets()
        .iter()
        .chain(b.f().sets())
        .any(VertexSet::is_empty)
    {
        return Ok(Certificate::FailsS(FailureWitness::Exhausted));
    }
    let n = b.vertex_count();
    // node 2v: "v in X", node 2v+1: "v out of X"
    let lit = |v: VertexId, in_x: bool| NodeIndex::new(2 * v as usize + usize::from(!in_x));
    let neg = |l: NodeIndex| NodeIndex::new(l.index() ^ 1);
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(2 * n, 2 * (b.e().len() + b.f().len()));
    for _ in 0..2 * n {
        g.add_node(());
    }
    let mut constrained = vec![false; n];
    for (side, in_x) in [(Side::E, true), (Side::F, false)] {
        for set in b.family(side).sets() {
            let m = set.members();
            for &v in m {
                constrained[v as usize] = true;
            }
            let a = lit(m[0], in_x);
            let c = lit(*m.last().unwrap(), in_x);
            // a ∨ c, with a = c for singletons
            g.add_edge(neg(a), c, ());
            if a != c {
                g.add_edge(neg(c), a, ());
            }
        }
    }
    // Components come out in reverse topological order.
    let mut comp = vec![0usize; 2 * n];
    for (i, scc) in tarjan_scc(&g).iter().enumerate() {
        for node in scc {
            comp[node.index()] = i;
        }
    }
    let mut x = Vec::new();
    for v in 0..n as VertexId {
        let (pos, negl) = (lit(v, true).index(), lit(v, false).index());
        if comp[pos] == comp[negl] {
            return Ok(Certificate::FailsS(FailureWitness::Exhausted));
        }
        if constrained[v as usize] && comp[pos] < comp[negl] {
            x.push(v);
        }
    }
    Ok(Certificate::HasS(SPartition::new(VertexSet::new(x))))
}
