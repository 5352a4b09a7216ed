//! Bihypergraphs `<V, E, F>`: interning, construction, validation, and the
//! S-partition test.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::set::{VertexId, VertexSet};

/// Which of the two families a set belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    E,
    F,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::E => Side::F,
            Side::F => Side::E,
        }
    }

    fn default_prefix(self) -> &'static str {
        match self {
            Side::E => "E",
            Side::F => "F",
        }
    }

    fn family_name(self) -> &'static str {
        match self {
            Side::E => "E",
            Side::F => "F",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.family_name())
    }
}

/// A labelled sequence of vertex sets. Duplicate sets are allowed; labels are unique.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Family {
    sets: Vec<VertexSet>,
    labels: Vec<String>,
}

impl Family {
    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn get(&self, index: usize) -> &VertexSet {
        &self.sets[index]
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &VertexSet)> {
        self.labels.iter().map(String::as_str).zip(self.sets.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    DuplicateSet {
        side: Side,
        label: String,
        first: String,
    },
    EmptySet {
        side: Side,
        label: String,
    },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::DuplicateSet { side, label, first } => {
                write!(f, "{side}-set `{label}` duplicates `{first}`")
            }
            Warning::EmptySet { side, label } => write!(f, "{side}-set `{label}` is empty"),
        }
    }
}

/// The triple `<V, E, F>`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bihypergraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    e: Family,
    f: Family,
}

impl Bihypergraph {
    /// Builds an instance from name lists. Names in the sets that were not
    /// declared are interned in first-occurrence order.
    pub fn build<S, I, J>(names: &[S], e_sets: I, f_sets: I) -> Result<Bihypergraph>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = J>,
        J: IntoIterator,
        J::Item: AsRef<str>,
    {
        let mut b = BihypergraphBuilder::new();
        for n in names {
            b.declare(n.as_ref())?;
        }
        for s in e_sets {
            b.add_set(Side::E, None, s)?;
        }
        for s in f_sets {
            b.add_set(Side::F, None, s)?;
        }
        b.build()
    }

    /// Builds from raw ids over the universe `0..vertex_count`, naming vertex `i` as `v{i}`.
    pub fn from_ids(
        vertex_count: usize,
        e: Vec<VertexSet>,
        f: Vec<VertexSet>,
    ) -> Result<Bihypergraph> {
        let mut b = BihypergraphBuilder::new();
        for i in 0..vertex_count {
            b.declare(&format!("v{i}"))?;
        }
        for s in e {
            b.add_set_ids(Side::E, None, s)?;
        }
        for s in f {
            b.add_set_ids(Side::F, None, s)?;
        }
        b.build()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: VertexId) -> &str {
        &self.names[id as usize]
    }

    pub fn id(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn family(&self, side: Side) -> &Family {
        match side {
            Side::E => &self.e,
            Side::F => &self.f,
        }
    }

    pub fn e(&self) -> &Family {
        &self.e
    }

    pub fn f(&self) -> &Family {
        &self.f
    }

    pub fn universe(&self) -> VertexSet {
        VertexSet::new(0..self.vertex_count() as VertexId)
    }

    pub fn max_set_size(&self) -> usize {
        self.e
            .sets
            .iter()
            .chain(self.f.sets.iter())
            .map(VertexSet::len)
            .max()
            .unwrap_or(0)
    }

    /// Resolves a list of names against the vertex table.
    pub fn set_of<I>(&self, names: I) -> Result<VertexSet>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        names
            .into_iter()
            .map(|n| {
                self.id(n.as_ref())
                    .ok_or_else(|| Error::UnknownVertex(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(VertexSet::new)
    }

    pub fn check_range(&self, x: &VertexSet) -> Result<()> {
        match x.max_id() {
            Some(id) if id as usize >= self.vertex_count() => Err(Error::VertexOutOfRange {
                id,
                size: self.vertex_count(),
            }),
            _ => Ok(()),
        }
    }

    pub fn display_set(&self, set: &VertexSet) -> String {
        let names: Vec<&str> = set.iter().map(|v| self.name(v)).collect();
        format!("{{{}}}", names.join(", "))
    }

    pub fn validate(&self) -> Vec<Warning> {
        let mut out = Vec::new();
        for side in [Side::E, Side::F] {
            let fam = self.family(side);
            let mut seen: HashMap<&VertexSet, &str> = HashMap::new();
            for (label, set) in fam.iter() {
                if set.is_empty() {
                    out.push(Warning::EmptySet {
                        side,
                        label: label.to_string(),
                    });
                }
                if let Some(first) = seen.get(set) {
                    out.push(Warning::DuplicateSet {
                        side,
                        label: label.to_string(),
                        first: first.to_string(),
                    });
                } else {
                    seen.insert(set, label);
                }
            }
        }
        out
    }

    /// The same instance with the roles of `E` and `F` exchanged.
    pub fn swapped(&self) -> Bihypergraph {
        Bihypergraph {
            names: self.names.clone(),
            index: self.index.clone(),
            e: self.f.clone(),
            f: self.e.clone(),
        }
    }

    pub fn with_isolated_vertex(&self, name: &str) -> Result<Bihypergraph> {
        if name.is_empty() {
            return Err(Error::EmptyName);
        }
        if self.index.contains_key(name) {
            return Err(Error::DuplicateVertex(name.to_string()));
        }
        let mut out = self.clone();
        out.index
            .insert(name.to_string(), out.names.len() as VertexId);
        out.names.push(name.to_string());
        Ok(out)
    }

    /// Returns a copy with one more set appended to `side`, labelled by default.
    pub fn with_set(&self, side: Side, set: VertexSet) -> Result<Bihypergraph> {
        let mut b = BihypergraphBuilder::from_graph(self);
        b.add_set_ids(side, None, set)?;
        b.build()
    }
}

/// Incremental constructor for [`Bihypergraph`].
#[derive(Debug, Default)]
pub struct BihypergraphBuilder {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    declared: HashSet<VertexId>,
    e: Vec<(Option<String>, VertexSet)>,
    f: Vec<(Option<String>, VertexSet)>,
}

impl BihypergraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn from_graph(b: &Bihypergraph) -> Self {
        let relabel = |fam: &Family| -> Vec<(Option<String>, VertexSet)> {
            fam.iter()
                .map(|(l, s)| (Some(l.to_string()), s.clone()))
                .collect()
        };
        BihypergraphBuilder {
            names: b.names.clone(),
            index: b.index.clone(),
            declared: (0..b.names.len() as VertexId).collect(),
            e: relabel(&b.e),
            f: relabel(&b.f),
        }
    }

    /// Declares a vertex explicitly. Declaring the same name twice is an error;
    /// declaring a name already interned by an earlier set is not.
    pub fn declare(&mut self, name: &str) -> Result<VertexId> {
        let id = self.intern(name)?;
        if !self.declared.insert(id) {
            return Err(Error::DuplicateVertex(name.to_string()));
        }
        Ok(id)
    }

    pub fn intern(&mut self, name: &str) -> Result<VertexId> {
        if name.is_empty() {
            return Err(Error::EmptyName);
        }
        if let Some(&id) = self.index.get(name) {
            return Ok(id);
        }
        let id = self.names.len() as VertexId;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn add_set<I>(&mut self, side: Side, label: Option<String>, names: I) -> Result<()>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let ids = names
            .into_iter()
            .map(|n| self.intern(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.push(side, label, VertexSet::new(ids));
        Ok(())
    }

    pub fn add_set_ids(&mut self, side: Side, label: Option<String>, set: VertexSet) -> Result<()> {
        if let Some(id) = set.max_id() {
            if id as usize >= self.names.len() {
                return Err(Error::VertexOutOfRange {
                    id,
                    size: self.names.len(),
                });
            }
        }
        self.push(side, label, set);
        Ok(())
    }

    fn push(&mut self, side: Side, label: Option<String>, set: VertexSet) {
        match side {
            Side::E => self.e.push((label, set)),
            Side::F => self.f.push((label, set)),
        }
    }

    pub fn build(self) -> Result<Bihypergraph> {
        let e = finish_family(Side::E, self.e)?;
        let f = finish_family(Side::F, self.f)?;
        Ok(Bihypergraph {
            names: self.names,
            index: self.index,
            e,
            f,
        })
    }
}

fn finish_family(side: Side, raw: Vec<(Option<String>, VertexSet)>) -> Result<Family> {
    let mut seen = HashSet::new();
    let mut fam = Family::default();
    for (i, (label, set)) in raw.into_iter().enumerate() {
        let label = label.unwrap_or_else(|| format!("{}{}", side.default_prefix(), i + 1));
        if !seen.insert(label.clone()) {
            return Err(Error::DuplicateLabel {
                family: side.family_name(),
                label,
            });
        }
        fam.labels.push(label);
        fam.sets.push(set);
    }
    Ok(fam)
}

/// True iff `x` meets every set of `family`. Vacuously true for an empty family.
pub fn is_transversal(x: &VertexSet, family: &[VertexSet]) -> bool {
    family.iter().all(|a| x.intersects(a))
}

/// True iff `{x, V \ x}` is an S-partition of `b`.
pub fn check_s_partition(b: &Bihypergraph, x: &VertexSet) -> Result<bool> {
    b.check_range(x)?;
    let e_ok = is_transversal(x, b.e.sets());
    let complement = x.complement(b.vertex_count());
    let f_ok = is_transversal(&complement, b.f.sets());
    let f_ok_dual = !b.f.sets().iter().any(|a| a.is_subset(x));
    assert_eq!(
        f_ok, f_ok_dual,
        "transversal and no-contained-F-set formulations disagree"
    );
    Ok(e_ok && f_ok)
}

/// Sets occurring in both families, deduplicated and in canonical order.
pub fn family_intersection(e: &[VertexSet], f: &[VertexSet]) -> Vec<VertexSet> {
    let fs: HashSet<&VertexSet> = f.iter().collect();
    e.iter()
        .filter(|s| fs.contains(s))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// The cell `X` of an S-partition; `V \ X` is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SPartition {
    pub x_side: VertexSet,
}

impl SPartition {
    pub fn new(x_side: VertexSet) -> Self {
        SPartition { x_side }
    }

    pub fn is_valid(&self, b: &Bihypergraph) -> bool {
        check_s_partition(b, &self.x_side).unwrap_or(false)
    }
}
