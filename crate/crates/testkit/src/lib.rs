//! Random instance generators and deliberately naive reference
//! implementations, used as independent oracles in tests.

use std::collections::HashSet;

use proptest::prelude::*;
use psolve_core::encodings::{CnfFormula, Graph, Palette, SdrInstance};
use psolve_core::{Bihypergraph, VertexSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use rand;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of randomly generated instances.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_vertices: usize,
    pub max_sets: usize,
    pub max_size: usize,
}

impl Shape {
    pub const SUITE: Shape = Shape {
        max_vertices: 10,
        max_sets: 8,
        max_size: 4,
    };
}

fn random_set<R: Rng>(rng: &mut R, n: usize, max_size: usize) -> VertexSet {
    // Occasionally empty, which makes the instance fail outright.
    if n == 0 || rng.gen_ratio(1, 60) {
        return VertexSet::empty();
    }
    let size = rng.gen_range(1..=max_size.min(n));
    let ids: Vec<u32> = (0..n as u32).collect();
    ids.choose_multiple(rng, size).copied().collect()
}

pub fn random_instance<R: Rng>(rng: &mut R, shape: Shape) -> Bihypergraph {
    let n = rng.gen_range(1..=shape.max_vertices);
    let family = |rng: &mut R| -> Vec<VertexSet> {
        let k = rng.gen_range(0..=shape.max_sets);
        (0..k).map(|_| random_set(rng, n, shape.max_size)).collect()
    };
    let e = family(rng);
    let f = family(rng);
    Bihypergraph::from_ids(n, e, f).unwrap()
}

/// A reproducible list of random instances.
pub fn suite(seed: u64, count: usize, shape: Shape) -> Vec<Bihypergraph> {
    let mut r = rng(seed);
    (0..count).map(|_| random_instance(&mut r, shape)).collect()
}

/// Every set of size at most `max_size` over `0..n`, ordered by size then lexicographically.
pub fn small_sets(n: usize, max_size: usize) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = (0u32..1 << n)
        .filter(|m| m.count_ones() as usize <= max_size)
        .map(|m| (0..n as u32).filter(|v| m >> v & 1 == 1).collect())
        .collect();
    out.sort_by(|a: &VertexSet, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// All multisets of at most `k` items drawn from `pool`, as index lists.
fn multisets(pool: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for m in &frontier {
            let start = m.last().copied().unwrap_or(0);
            for i in start..pool {
                let mut m2: Vec<usize> = m.clone();
                m2.push(i);
                next.push(m2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Every instance over `0..n` for `n <= max_vertices` whose families hold at
/// most `max_sets` sets (as multisets) of size at most `max_size`.
pub fn exhaustive(
    max_vertices: usize,
    max_sets: usize,
    max_size: usize,
) -> impl Iterator<Item = Bihypergraph> {
    (0..=max_vertices).flat_map(move |n| {
        let sets = small_sets(n, max_size);
        let families: Vec<Vec<VertexSet>> = multisets(sets.len(), max_sets)
            .into_iter()
            .map(|idx| idx.into_iter().map(|i| sets[i].clone()).collect())
            .collect();
        let mut out = Vec::with_capacity(families.len() * families.len());
        for e in &families {
            for f in &families {
                out.push(Bihypergraph::from_ids(n, e.clone(), f.clone()).unwrap());
            }
        }
        out
    })
}

pub fn arb_instance(shape: Shape) -> impl Strategy<Value = Bihypergraph> {
    (1..=shape.max_vertices).prop_flat_map(move |n| {
        let set = prop::collection::btree_set(0..n as u32, 0..=shape.max_size.min(n))
            .prop_map(|s| s.into_iter().collect::<VertexSet>());
        let family = prop::collection::vec(set, 0..=shape.max_sets);
        (Just(n), family.clone(), family)
            .prop_map(|(n, e, f)| Bihypergraph::from_ids(n, e, f).unwrap())
    })
}

/// Random instance whose sets all have size 1 or 2.
pub fn random_pairs_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    e_count: usize,
    f_count: usize,
) -> Bihypergraph {
    let set = |rng: &mut R| -> VertexSet {
        let a = rng.gen_range(0..n as u32);
        if n == 1 || rng.gen_ratio(1, 20) {
            return VertexSet::singleton(a);
        }
        let mut c = rng.gen_range(0..n as u32 - 1);
        if c >= a {
            c += 1;
        }
        VertexSet::new([a, c])
    };
    let e = (0..e_count).map(|_| set(rng)).collect();
    let f = (0..f_count).map(|_| set(rng)).collect();
    Bihypergraph::from_ids(n, e, f).unwrap()
}

fn mask(s: &VertexSet) -> u64 {
    s.iter().fold(0, |m, v| m | 1 << v)
}

/// The full closure of `a` under resolution on pivots from `d`, with no
/// subsumption and no early exit, as bitmasks over a universe of at most 16 vertices.
pub fn naive_closure(a: &[VertexSet], d: &[VertexSet]) -> HashSet<u64> {
    let mut family: HashSet<u64> = a.iter().map(mask).collect();
    let pivots: Vec<u64> = d.iter().map(mask).collect();
    loop {
        let mut added = false;
        for &p in &pivots {
            // Unions of one (c minus v) per pivot element v, built element by element.
            let mut unions: HashSet<u64> = HashSet::from([0]);
            for v in (0..64).filter(|v| p >> v & 1 == 1) {
                let options: Vec<u64> = family
                    .iter()
                    .filter(|&&c| c >> v & 1 == 1)
                    .map(|&c| c & !(1 << v))
                    .collect();
                unions = unions
                    .iter()
                    .flat_map(|&u| options.iter().map(move |&o| u | o))
                    .collect();
                if unions.is_empty() {
                    break;
                }
            }
            for u in unions {
                added |= family.insert(u);
            }
        }
        if !added {
            return family;
        }
    }
}

pub fn naive_contains_empty(a: &[VertexSet], d: &[VertexSet]) -> bool {
    naive_closure(a, d).contains(&0)
}

/// Brute force: some `X` with both `X` and its complement meeting every set.
pub fn has_property_b(n: usize, family: &[VertexSet]) -> bool {
    let masks: Vec<u64> = family.iter().map(mask).collect();
    (0u64..1 << n).any(|x| masks.iter().all(|&m| m & x != 0 && m & !x != 0))
}

pub fn brute_sat(c: &CnfFormula) -> Option<Vec<bool>> {
    let n = c.variable_count();
    assert!(n <= 20);
    (0u32..1 << n)
        .map(|m| (0..n).map(|v| m >> v & 1 == 1).collect::<Vec<bool>>())
        .find(|a| c.is_satisfied_by(a))
}

pub fn random_cnf<R: Rng>(
    rng: &mut R,
    max_vars: usize,
    max_clauses: usize,
    max_len: usize,
) -> CnfFormula {
    use psolve_core::encodings::Literal;
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(0..=max_clauses);
    let clauses = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len)
                .map(|_| {
                    let v = rng.gen_range(0..n as u32);
                    if rng.gen() {
                        Literal::pos(v)
                    } else {
                        Literal::neg(v)
                    }
                })
                .collect()
        })
        .collect();
    CnfFormula::new((1..=n).map(|k| k.to_string()).collect(), clauses).unwrap()
}

/// All graphs on `n` vertices named `0..n`, one per edge subset.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |c| (a, c)))
        .collect();
    (0u64..1 << pairs.len()).map(move |m| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| m >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::new((0..n).map(|v| v.to_string()).collect(), edges).unwrap()
    })
}

/// Exhaustive coloring search over the palette.
pub fn brute_coloring(g: &Graph, palette: &Palette) -> Option<Vec<String>> {
    let n = g.vertices().len();
    let lists: Vec<Vec<String>> = match palette {
        Palette::Uniform(k) => vec![(1..=*k).map(|c| c.to_string()).collect(); n],
        Palette::Lists(l) => l.clone(),
    };
    let mut choice = vec![0usize; n];
    if lists.iter().any(|l| l.is_empty()) {
        return None;
    }
    loop {
        let colors: Vec<&String> = (0..n).map(|v| &lists[v][choice[v]]).collect();
        if g.edges().iter().all(|&(a, c)| colors[a] != colors[c]) {
            return Some(colors.into_iter().cloned().collect());
        }
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            choice[i] += 1;
            if choice[i] < lists[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Exhaustive search for distinct representatives.
pub fn brute_sdr(s: &SdrInstance) -> Option<Vec<String>> {
    fn go(s: &SdrInstance, i: usize, chosen: &mut Vec<String>) -> bool {
        if i == s.sets.len() {
            return true;
        }
        for e in &s.sets[i] {
            if !chosen.contains(e) {
                chosen.push(e.clone());
                if go(s, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    go(s, 0, &mut chosen).then_some(chosen)
}

/// Every family of at most `max_sets` subsets of an `elements`-element ground set.
pub fn all_sdr_instances(max_sets: usize, elements: usize) -> Vec<SdrInstance> {
    let names: Vec<String> = (0..elements)
        .map(|e| ((b'a' + e as u8) as char).to_string())
        .collect();
    let subsets: Vec<Vec<String>> = (0u32..1 << elements)
        .map(|m| {
            (0..elements)
                .filter(|e| m >> e & 1 == 1)
                .map(|e| names[e].clone())
                .collect()
        })
        .collect();
    let mut out = vec![];
    for k in 0..=max_sets {
        let total = subsets.len().pow(k as u32);
        for code in 0..total {
            let mut c = code;
            let sets = (0..k)
                .map(|_| {
                    let s = subsets[c % subsets.len()].clone();
                    c /= subsets.len();
                    s
                })
                .collect();
            out.push(SdrInstance {
                indices: (1..=k).map(|i| i.to_string()).collect(),
                sets,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(small_sets(4, 2).len(), 11);
        assert_eq!(multisets(3, 2).len(), 1 + 3 + 6);
        assert_eq!(all_graphs(3).count(), 8);
        assert_eq!(all_sdr_instances(2, 2).len(), 1 + 4 + 16);
    }

    #[test]
    fn naive_closure_small() {
        // E = {a}, {b}; F = {a,b}: resolving gives the empty set.
        let e = [VertexSet::singleton(0), VertexSet::singleton(1)];
        let f = [VertexSet::new([0, 1])];
        assert!(naive_contains_empty(&e, &f));
        assert!(!naive_contains_empty(&e[..1], &f));
    }

    #[test]
    fn property_b_triangle() {
        let tri = [
            VertexSet::new([0, 1]),
            VertexSet::new([1, 2]),
            VertexSet::new([0, 2]),
        ];
        assert!(!has_property_b(3, &tri));
        assert!(has_property_b(4, &[VertexSet::new([0, 1, 2])]));
    }
}
