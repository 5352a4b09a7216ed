//! Reductions into Property S (CNF, graph coloring, list coloring, SDR) and
//! the CNF representation out of it, with witness translation both ways.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Bihypergraph, BihypergraphBuilder, Side};
use crate::set::{VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: u32) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn is_true_under(self, assignment: &[bool]) -> bool {
        assignment[self.var as usize] == self.positive
    }
}

/// Clauses over named variables. A clause may hold both polarities of a variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    names: Vec<String>,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn new(names: Vec<String>, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        let n = names.len();
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() {
                return Err(Error::EmptyName);
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let clauses = clauses
            .into_iter()
            .map(|mut c| {
                if let Some(l) = c.iter().find(|l| l.var as usize >= n) {
                    return Err(Error::VertexOutOfRange { id: l.var, size: n });
                }
                c.sort();
                c.dedup();
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CnfFormula { names, clauses })
    }

    pub fn variable_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.is_true_under(assignment)))
    }
}

/// `from_cnf` output: literal vertices `x` and `-x` for each occurring variable.
#[derive(Clone, Debug)]
pub struct CnfEncoding {
    pub graph: Bihypergraph,
    /// Per variable, the ids of its positive and negative literal vertices.
    literals: Vec<Option<(VertexId, VertexId)>>,
}

impl CnfEncoding {
    /// A variable is true iff its positive literal lies in `x`.
    pub fn assignment_from_partition(&self, x: &VertexSet) -> Vec<bool> {
        self.literals
            .iter()
            .map(|l| l.is_some_and(|(pos, _)| x.contains(pos)))
            .collect()
    }

    /// `X` is the set of literals true under `assignment`.
    pub fn partition_from_assignment(&self, assignment: &[bool]) -> VertexSet {
        self.literals
            .iter()
            .zip(assignment)
            .filter_map(|(l, &value)| l.map(|(pos, neg)| if value { pos } else { neg }))
            .collect()
    }
}

pub fn from_cnf(c: &CnfFormula) -> CnfEncoding {
    let occurring: Vec<bool> = {
        let mut occ = vec![false; c.variable_count()];
        for l in c.clauses.iter().flatten() {
            occ[l.var as usize] = true;
        }
        occ
    };
    let mut b = BihypergraphBuilder::new();
    let mut literals = vec![None; c.variable_count()];
    for (var, name) in c.names.iter().enumerate() {
        if occurring[var] {
            let pos = b.intern(name).expect("variable names are non-empty");
            let neg = b.intern(&format!("-{name}")).expect("non-empty");
            literals[var] = Some((pos, neg));
        }
    }
    let vertex = |l: &Literal| {
        let (pos, neg) = literals[l.var as usize].unwrap();
        if l.positive {
            pos
        } else {
            neg
        }
    };
    for clause in &c.clauses {
        b.add_set_ids(Side::E, None, clause.iter().map(vertex).collect())
            .unwrap();
    }
    for &(pos, neg) in literals.iter().flatten() {
        b.add_set_ids(Side::F, None, VertexSet::new([pos, neg]))
            .unwrap();
    }
    CnfEncoding {
        graph: b.build().expect("default labels are unique"),
        literals,
    }
}

/// One variable per vertex, a positive clause per `E`-set and a negative
/// clause per `F`-set. Variable `i` is vertex `i`, so models and
/// S-partitions correspond by "true iff in X".
pub fn to_cnf(b: &Bihypergraph) -> CnfFormula {
    let mut clauses = Vec::with_capacity(b.e().len() + b.f().len());
    for set in b.e().sets() {
        clauses.push(set.iter().map(Literal::pos).collect());
    }
    for set in b.f().sets() {
        clauses.push(set.iter().map(Literal::neg).collect());
    }
    CnfFormula::new(b.names().to_vec(), clauses).expect("vertex names are unique and non-empty")
}

pub fn model_from_partition(b: &Bihypergraph, x: &VertexSet) -> Vec<bool> {
    (0..b.vertex_count() as VertexId)
        .map(|v| x.contains(v))
        .collect()
}

pub fn partition_from_model(model: &[bool]) -> VertexSet {
    (0..model.len() as VertexId)
        .filter(|&v| model[v as usize])
        .collect()
}

/// A simple undirected graph with named vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(a, c) in &edges {
            if a == c {
                return Err(Error::InvalidInstance(format!(
                    "self-loop on `{}`",
                    vertices[a]
                )));
            }
            if a.max(c) >= vertices.len() {
                return Err(Error::InvalidInstance(format!(
                    "edge ({a}, {c}) out of range"
                )));
            }
        }
        Ok(Graph { vertices, edges })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Palette {
    /// Colors `1..=n` for every vertex.
    Uniform(usize),
    /// Per-vertex color lists, indexed like the graph's vertices.
    Lists(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringInstance {
    pub graph: Graph,
    pub palette: Palette,
}

/// Encoded coloring problem. Vertex `(a, c)` is named `a@c`.
#[derive(Clone, Debug)]
pub struct ColoringEncoding {
    pub graph: Bihypergraph,
    /// Per graph vertex, its `(color, pair vertex)` cells in palette order.
    cells: Vec<Vec<(String, VertexId)>>,
}

impl ColoringEncoding {
    /// Color of each vertex: the least-id cell of that vertex inside `x`.
    pub fn extract(&self, x: &VertexSet) -> Option<Vec<String>> {
        self.cells
            .iter()
            .map(|cells| {
                cells
                    .iter()
                    .filter(|(_, v)| x.contains(*v))
                    .min_by_key(|(_, v)| *v)
                    .map(|(c, _)| c.clone())
            })
            .collect()
    }
}

pub fn from_graph_coloring(g: &Graph, n: usize) -> Result<ColoringEncoding> {
    if n == 0 {
        return Err(Error::InvalidInstance(
            "palette size must be at least 1".into(),
        ));
    }
    let colors: Vec<String> = (1..=n).map(|j| j.to_string()).collect();
    encode_lists(g, &vec![colors; g.vertices.len()])
}

pub fn from_list_coloring(g: &Graph, lists: &[Vec<String>]) -> Result<ColoringEncoding> {
    if lists.len() != g.vertices.len() {
        return Err(Error::InvalidInstance(format!(
            "{} color lists for {} vertices",
            lists.len(),
            g.vertices.len()
        )));
    }
    encode_lists(g, lists)
}

pub fn encode_coloring(instance: &ColoringInstance) -> Result<ColoringEncoding> {
    match &instance.palette {
        Palette::Uniform(n) => from_graph_coloring(&instance.graph, *n),
        Palette::Lists(lists) => from_list_coloring(&instance.graph, lists),
    }
}

fn encode_lists(g: &Graph, lists: &[Vec<String>]) -> Result<ColoringEncoding> {
    let mut b = BihypergraphBuilder::new();
    let mut cells = Vec::with_capacity(g.vertices.len());
    for (a, list) in g.vertices.iter().zip(lists) {
        let mut mine: Vec<(String, VertexId)> = Vec::new();
        for color in list {
            if mine.iter().any(|(c, _)| c == color) {
                continue;
            }
            mine.push((color.clone(), b.declare(&format!("{a}@{color}"))?));
        }
        b.add_set_ids(Side::E, None, mine.iter().map(|&(_, v)| v).collect())?;
        cells.push(mine);
    }
    for &(a1, a2) in &g.edges {
        for (color, v1) in &cells[a1] {
            if let Some((_, v2)) = cells[a2].iter().find(|(c, _)| c == color) {
                b.add_set_ids(Side::F, None, VertexSet::new([*v1, *v2]))?;
            }
        }
    }
    Ok(ColoringEncoding {
        graph: b.build()?,
        cells,
    })
}

pub fn is_proper_coloring(g: &Graph, colors: &[String]) -> bool {
    colors.len() == g.vertices.len() && g.edges.iter().all(|&(a, c)| colors[a] != colors[c])
}

pub fn respects_lists(colors: &[String], lists: &[Vec<String>]) -> bool {
    colors.len() == lists.len() && colors.iter().zip(lists).all(|(c, l)| l.contains(c))
}

/// An indexed family of finite sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdrInstance {
    pub indices: Vec<String>,
    pub sets: Vec<Vec<String>>,
}

/// Encoded SDR problem. Vertex `(s, i)` is named `s@i`.
#[derive(Clone, Debug)]
pub struct SdrEncoding {
    pub graph: Bihypergraph,
    cells: Vec<Vec<(String, VertexId)>>,
}

impl SdrEncoding {
    /// Representative of each index: the least-id cell of `S_i` inside `x`.
    pub fn extract(&self, x: &VertexSet) -> Option<Vec<String>> {
        self.cells
            .iter()
            .map(|cells| {
                cells
                    .iter()
                    .filter(|(_, v)| x.contains(*v))
                    .min_by_key(|(_, v)| *v)
                    .map(|(s, _)| s.clone())
            })
            .collect()
    }
}

pub fn from_sdr(s: &SdrInstance) -> Result<SdrEncoding> {
    if s.indices.len() != s.sets.len() {
        return Err(Error::InvalidInstance("index and set counts differ".into()));
    }
    let mut b = BihypergraphBuilder::new();
    let mut cells: Vec<Vec<(String, VertexId)>> = Vec::with_capacity(s.sets.len());
    for (i, set) in s.indices.iter().zip(&s.sets) {
        let mut mine: Vec<(String, VertexId)> = Vec::new();
        for elem in set {
            if mine.iter().any(|(e, _)| e == elem) {
                continue;
            }
            mine.push((elem.clone(), b.declare(&format!("{elem}@{i}"))?));
        }
        b.add_set_ids(Side::E, None, mine.iter().map(|&(_, v)| v).collect())?;
        cells.push(mine);
    }
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            for (elem, vi) in &cells[i] {
                if let Some((_, vj)) = cells[j].iter().find(|(e, _)| e == elem) {
                    b.add_set_ids(Side::F, None, VertexSet::new([*vi, *vj]))?;
                }
            }
        }
    }
    Ok(SdrEncoding {
        graph: b.build()?,
        cells,
    })
}

pub fn is_sdr(s: &SdrInstance, reps: &[String]) -> bool {
    reps.len() == s.sets.len()
        && reps.iter().zip(&s.sets).all(|(r, set)| set.contains(r))
        && reps.iter().collect::<HashSet<_>>().len() == reps.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_decide;
    use crate::search::{decide, DecideConfig, Verdict};

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn verdict(b: &Bihypergraph) -> Verdict {
        decide(b, &DecideConfig::default()).unwrap().verdict()
    }

    pub(crate) fn cnf_formula() -> CnfFormula {
        let (p, q, r) = (0, 1, 2);
        let (l, n) = (Literal::pos, Literal::neg);
        CnfFormula::new(
            strings(&["p", "q", "r"]),
            vec![
                vec![l(p), l(q)],
                vec![l(p), n(q), l(r)],
                vec![l(p), n(q), n(r)],
                vec![n(p), l(q), l(r)],
                vec![n(p), l(q), n(r)],
                vec![n(p), n(q)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn from_cnf_matches_hand_built_instance() {
        let enc = from_cnf(&cnf_formula());
        let b = &enc.graph;
        assert_eq!(b.names(), &strings(&["p", "-p", "q", "-q", "r", "-r"]));
        assert_eq!((b.e().len(), b.f().len()), (6, 3));
        assert_eq!(b.e().get(1), &b.set_of(["p", "-q", "r"]).unwrap());
        assert_eq!(b.f().get(0), &b.set_of(["p", "-p"]).unwrap());
        assert_eq!(verdict(b), Verdict::FailsS);
    }

    #[test]
    fn from_cnf_single_clause() {
        let c = CnfFormula::new(strings(&["p"]), vec![vec![Literal::pos(0)]]).unwrap();
        let enc = from_cnf(&c);
        assert_eq!(enc.graph.names(), &strings(&["p", "-p"]));
        let cert = brute_force_decide(&enc.graph).unwrap();
        assert_eq!(cert.witness().unwrap().x_side, VertexSet::new([0]));
        assert_eq!(
            enc.assignment_from_partition(&VertexSet::new([0])),
            vec![true]
        );
        assert_eq!(enc.partition_from_assignment(&[true]), VertexSet::new([0]));

        let c = CnfFormula::new(
            strings(&["p"]),
            vec![vec![Literal::pos(0)], vec![Literal::neg(0)]],
        )
        .unwrap();
        assert_eq!(verdict(&from_cnf(&c).graph), Verdict::FailsS);
    }

    #[test]
    fn from_cnf_skips_unused_variables() {
        let c = CnfFormula::new(strings(&["a", "b"]), vec![vec![Literal::neg(1)]]).unwrap();
        let enc = from_cnf(&c);
        assert_eq!(enc.graph.names(), &strings(&["b", "-b"]));
        let x = decide(&enc.graph, &DecideConfig::default())
            .unwrap()
            .witness()
            .unwrap()
            .x_side
            .clone();
        assert!(c.is_satisfied_by(&enc.assignment_from_partition(&x)));
    }

    #[test]
    fn to_cnf_example() {
        let b = Bihypergraph::build::<&str, _, _>(&[], vec![vec!["a", "b"]], vec![vec!["b", "c"]])
            .unwrap();
        let c = to_cnf(&b);
        assert_eq!(c.names(), &strings(&["a", "b", "c"]));
        assert_eq!(
            c.clauses(),
            &[
                vec![Literal::pos(0), Literal::pos(1)],
                vec![Literal::neg(1), Literal::neg(2)]
            ]
        );
        let empty = Bihypergraph::from_ids(0, vec![], vec![]).unwrap();
        assert!(to_cnf(&empty).clauses().is_empty());
        assert!(to_cnf(&empty).is_satisfied_by(&[]));
    }

    fn triangle() -> Graph {
        Graph::new(strings(&["a", "b", "c"]), vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn triangle_coloring() {
        assert_eq!(
            verdict(&from_graph_coloring(&triangle(), 2).unwrap().graph),
            Verdict::FailsS
        );
        let enc = from_graph_coloring(&triangle(), 3).unwrap();
        assert_eq!(enc.graph.vertex_count(), 9);
        assert_eq!((enc.graph.e().len(), enc.graph.f().len()), (3, 9));
        assert_eq!(enc.graph.name(4), "b@2");
        let cert = decide(&enc.graph, &DecideConfig::default()).unwrap();
        let colors = enc.extract(&cert.witness().unwrap().x_side).unwrap();
        assert!(is_proper_coloring(&triangle(), &colors));
    }

    #[test]
    fn single_vertex_one_color() {
        let g = Graph::new(strings(&["a"]), vec![]).unwrap();
        let enc = from_graph_coloring(&g, 1).unwrap();
        let cert = decide(&enc.graph, &DecideConfig::default()).unwrap();
        assert_eq!(
            enc.extract(&cert.witness().unwrap().x_side).unwrap(),
            strings(&["1"])
        );
        assert!(from_graph_coloring(&g, 0).is_err());
    }

    #[test]
    fn self_loops_rejected() {
        assert!(Graph::new(strings(&["a"]), vec![(0, 0)]).is_err());
    }

    fn ladder() -> (Graph, Vec<Vec<String>>) {
        let g = Graph::new(
            strings(&["1", "2", "3", "4", "5", "6"]),
            vec![(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        let lists = [
            ["g", "r"],
            ["b", "g"],
            ["b", "r"],
            ["b", "r"],
            ["b", "g"],
            ["g", "r"],
        ]
        .iter()
        .map(|l| strings(l))
        .collect();
        (g, lists)
    }

    #[test]
    fn ladder_is_two_colorable_but_not_list_colorable() {
        let (g, lists) = ladder();
        let enc = from_list_coloring(&g, &lists).unwrap();
        assert_eq!(
            (
                enc.graph.vertex_count(),
                enc.graph.e().len(),
                enc.graph.f().len()
            ),
            (12, 6, 8)
        );
        assert_eq!(verdict(&enc.graph), Verdict::FailsS);

        let enc = from_graph_coloring(&g, 2).unwrap();
        let cert = decide(&enc.graph, &DecideConfig::default()).unwrap();
        assert!(is_proper_coloring(
            &g,
            &enc.extract(&cert.witness().unwrap().x_side).unwrap()
        ));
    }

    #[test]
    fn list_coloring_single_vertex() {
        let g = Graph::new(strings(&["a"]), vec![]).unwrap();
        let lists = vec![strings(&["c"])];
        let enc = from_list_coloring(&g, &lists).unwrap();
        let cert = decide(&enc.graph, &DecideConfig::default()).unwrap();
        let colors = enc.extract(&cert.witness().unwrap().x_side).unwrap();
        assert_eq!(colors, strings(&["c"]));
        assert!(respects_lists(&colors, &lists));
    }

    #[test]
    fn empty_list_is_flagged_and_fails() {
        let g = Graph::new(strings(&["a"]), vec![]).unwrap();
        let enc = from_list_coloring(&g, &[vec![]]).unwrap();
        assert!(!enc.graph.validate().is_empty());
        assert_eq!(verdict(&enc.graph), Verdict::FailsS);
    }

    fn sdr(sets: &[&[&str]]) -> SdrInstance {
        SdrInstance {
            indices: (1..=sets.len()).map(|i| i.to_string()).collect(),
            sets: sets.iter().map(|s| strings(s)).collect(),
        }
    }

    #[test]
    fn sdr_examples() {
        assert_eq!(
            verdict(&from_sdr(&sdr(&[&["a"], &["a"]])).unwrap().graph),
            Verdict::FailsS
        );

        let s = sdr(&[&["a"], &["b"]]);
        let enc = from_sdr(&s).unwrap();
        let cert = decide(&enc.graph, &DecideConfig::default()).unwrap();
        let reps = enc.extract(&cert.witness().unwrap().x_side).unwrap();
        assert_eq!(reps, strings(&["a", "b"]));
        assert!(is_sdr(&s, &reps));

        let s = sdr(&[&["a", "b"], &["a", "b"], &["a", "b"]]);
        assert_eq!(verdict(&from_sdr(&s).unwrap().graph), Verdict::FailsS);
    }

    #[test]
    fn sdr_pairs_only_for_shared_elements() {
        let enc = from_sdr(&sdr(&[&["a", "b"], &["b", "c"]])).unwrap();
        assert_eq!(enc.graph.f().len(), 1);
        assert_eq!(
            enc.graph.f().get(0),
            &enc.graph.set_of(["b@1", "b@2"]).unwrap()
        );
    }
}
