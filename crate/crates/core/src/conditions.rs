//! Fast, incomplete Property S criteria. Each check either settles the
//! question outright or answers `Unknown`; none of them ever guesses.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::graph::{family_intersection, Bihypergraph};
use crate::set::{VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConditionVerdict {
    HasS,
    FailsS,
    Unknown,
}

impl fmt::Display for ConditionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionVerdict::HasS => "HasS",
            ConditionVerdict::FailsS => "FailsS",
            ConditionVerdict::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// `|V| = 2k+1` and `E ∩ F` holds every `(k+1)`-subset: fails.
    AllLargeSubsets,
    /// `|I(E) ∪ I(F)| < 2^(|V|-1)`: holds.
    UpsetBound,
    /// `Σ 2^-|A| < 1/2` over `E ∪ F`: holds.
    WeightSum,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::AllLargeSubsets => "all_large_subsets",
            Criterion::UpsetBound => "upset_bound",
            Criterion::WeightSum => "weight_sum",
        }
    }
}

/// An exact value `numerator / 2^exponent`, kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub numerator: BigUint,
    pub exponent: u32,
}

impl Dyadic {
    fn new(mut numerator: BigUint, mut exponent: u32) -> Self {
        if numerator.is_zero() {
            return Dyadic {
                numerator,
                exponent: 0,
            };
        }
        while exponent > 0 && !numerator.bit(0) {
            numerator >>= 1u32;
            exponent -= 1;
        }
        Dyadic {
            numerator,
            exponent,
        }
    }

    pub fn half() -> Self {
        Dyadic {
            numerator: BigUint::one(),
            exponent: 1,
        }
    }

    /// `self < 1/2`
    pub fn is_below_half(&self) -> bool {
        (&self.numerator << 1u32) < (BigUint::one() << self.exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, BigUint::one() << self.exponent)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantity {
    LargeSubsets {
        k: usize,
        required: u64,
        present: u64,
    },
    /// `threshold` is `2^(|V|-1)`, written as a string since it is `1/2` for `|V| = 0`.
    UpsetCount {
        count: u64,
        threshold: String,
    },
    WeightSum {
        sum: Dyadic,
        threshold: Dyadic,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub criterion: Criterion,
    pub verdict: ConditionVerdict,
    pub computed: Option<Quantity>,
    pub note: Option<String>,
}

impl ConditionReport {
    fn unknown(criterion: Criterion, note: impl Into<String>) -> Self {
        ConditionReport {
            criterion,
            verdict: ConditionVerdict::Unknown,
            computed: None,
            note: Some(note.into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConditionCaps {
    pub max_binomial: u64,
    pub max_upset_vertices: usize,
}

impl Default for ConditionCaps {
    fn default() -> Self {
        ConditionCaps {
            max_binomial: 1_000_000,
            max_upset_vertices: 24,
        }
    }
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

pub fn all_large_subsets_check(b: &Bihypergraph) -> ConditionReport {
    all_large_subsets_check_with(b, ConditionCaps::default())
}

pub fn all_large_subsets_check_with(b: &Bihypergraph, caps: ConditionCaps) -> ConditionReport {
    let crit = Criterion::AllLargeSubsets;
    let n = b.vertex_count();
    if n.is_multiple_of(2) {
        return ConditionReport::unknown(crit, format!("|V| = {n} is even"));
    }
    let k = (n - 1) / 2;
    let required = match binomial(n as u64, k as u64 + 1) {
        Some(r) if r <= caps.max_binomial => r,
        _ => {
            return ConditionReport::unknown(
                crit,
                format!(
                    "binomial({n}, {}) exceeds the cap of {}",
                    k + 1,
                    caps.max_binomial
                ),
            )
        }
    };
    let common: HashSet<VertexSet> = family_intersection(b.e().sets(), b.f().sets())
        .into_iter()
        .collect();
    let mut present = 0u64;
    let mut combo: Vec<VertexId> = (0..=k as VertexId).collect();
    loop {
        if common.contains(&VertexSet::new(combo.iter().copied())) {
            present += 1;
        }
        // next (k+1)-combination of 0..n in lexicographic order
        let r = combo.len();
        let Some(i) = (0..r).rev().find(|&i| combo[i] as usize != i + n - r) else {
            break;
        };
        combo[i] += 1;
        for j in i + 1..r {
            combo[j] = combo[j - 1] + 1;
        }
    }
    let verdict = if present == required {
        ConditionVerdict::FailsS
    } else {
        ConditionVerdict::Unknown
    };
    ConditionReport {
        criterion: crit,
        verdict,
        computed: Some(Quantity::LargeSubsets {
            k,
            required,
            present,
        }),
        note: None,
    }
}

pub fn upset_bound_check(b: &Bihypergraph) -> ConditionReport {
    upset_bound_check_with(b, ConditionCaps::default())
}

/// Counts `|I(E) ∪ I(F)|`, where `I(A)` is every subset of `V` containing a member of `A`.
pub fn upset_bound_check_with(b: &Bihypergraph, caps: ConditionCaps) -> ConditionReport {
    let crit = Criterion::UpsetBound;
    let n = b.vertex_count();
    if n > caps.max_upset_vertices.min(40) {
        return ConditionReport::unknown(
            crit,
            format!(
                "|V| = {n} exceeds the enumeration cap of {}",
                caps.max_upset_vertices
            ),
        );
    }
    let masks: Vec<u64> = b
        .e()
        .sets()
        .iter()
        .chain(b.f().sets())
        .map(|s| s.iter().fold(0u64, |m, v| m | 1 << v))
        .collect();
    let count = (0..1u64 << n)
        .filter(|&x| masks.iter().any(|&m| m & !x == 0))
        .count() as u64;
    let threshold = if n == 0 {
        "1/2".to_string()
    } else {
        (1u64 << (n - 1)).to_string()
    };
    // count < 2^(n-1)  <=>  2 count < 2^n
    let verdict = if 2 * count < 1u64 << n {
        ConditionVerdict::HasS
    } else {
        ConditionVerdict::Unknown
    };
    ConditionReport {
        criterion: crit,
        verdict,
        computed: Some(Quantity::UpsetCount { count, threshold }),
        note: None,
    }
}

/// `Σ_{A ∈ E ∪ F} 2^-|A|` over the deduplicated union.
pub fn weight_sum(b: &Bihypergraph) -> Dyadic {
    let union: HashSet<&VertexSet> = b.e().sets().iter().chain(b.f().sets()).collect();
    let exponent = union.iter().map(|s| s.len()).max().unwrap_or(0) as u32;
    let numerator = union.iter().fold(BigUint::zero(), |acc, s| {
        acc + (BigUint::one() << (exponent - s.len() as u32))
    });
    Dyadic::new(numerator, exponent)
}

pub fn weight_check(b: &Bihypergraph) -> ConditionReport {
    let sum = weight_sum(b);
    let verdict = if sum.is_below_half() {
        ConditionVerdict::HasS
    } else {
        ConditionVerdict::Unknown
    };
    let has_empty = b
        .e()
        .sets()
        .iter()
        .chain(b.f().sets())
        .any(VertexSet::is_empty);
    ConditionReport {
        criterion: Criterion::WeightSum,
        verdict,
        computed: Some(Quantity::WeightSum {
            sum,
            threshold: Dyadic::half(),
        }),
        note: has_empty.then(|| "a family contains the empty set".to_string()),
    }
}

pub fn analyze(b: &Bihypergraph, caps: ConditionCaps) -> Vec<ConditionReport> {
    vec![
        all_large_subsets_check_with(b, caps),
        upset_bound_check_with(b, caps),
        weight_check(b),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::cnf_example;

    fn ids(n: usize, e: &[&[u32]], f: &[&[u32]]) -> Bihypergraph {
        let conv = |fam: &[&[u32]]| {
            fam.iter()
                .map(|s| VertexSet::new(s.iter().copied()))
                .collect()
        };
        Bihypergraph::from_ids(n, conv(e), conv(f)).unwrap()
    }

    #[test]
    fn large_subsets_examples() {
        let pairs: &[&[u32]] = &[&[0, 1], &[0, 2], &[1, 2]];
        let r = all_large_subsets_check(&ids(3, pairs, pairs));
        assert_eq!(r.verdict, ConditionVerdict::FailsS);
        assert_eq!(
            r.computed,
            Some(Quantity::LargeSubsets {
                k: 1,
                required: 3,
                present: 3
            })
        );

        let two: &[&[u32]] = &[&[0, 1], &[0, 2]];
        assert_eq!(
            all_large_subsets_check(&ids(3, two, two)).verdict,
            ConditionVerdict::Unknown
        );
        assert_eq!(
            all_large_subsets_check(&ids(4, pairs, pairs)).verdict,
            ConditionVerdict::Unknown
        );
    }

    #[test]
    fn large_subsets_cap() {
        let caps = ConditionCaps {
            max_binomial: 2,
            ..ConditionCaps::default()
        };
        let r = all_large_subsets_check_with(&ids(3, &[], &[]), caps);
        assert_eq!(r.verdict, ConditionVerdict::Unknown);
        assert!(r.note.unwrap().contains("cap"));
    }

    #[test]
    fn upset_examples() {
        assert_eq!(
            upset_bound_check(&ids(3, &[], &[])).verdict,
            ConditionVerdict::HasS
        );

        let r = upset_bound_check(&ids(2, &[&[0]], &[&[0]]));
        assert_eq!(r.verdict, ConditionVerdict::Unknown);
        assert_eq!(
            r.computed,
            Some(Quantity::UpsetCount {
                count: 2,
                threshold: "2".into()
            })
        );

        let r = upset_bound_check(&ids(3, &[&[0, 1, 2]], &[&[0, 1, 2]]));
        assert_eq!(r.verdict, ConditionVerdict::HasS);
        assert_eq!(
            r.computed,
            Some(Quantity::UpsetCount {
                count: 1,
                threshold: "4".into()
            })
        );

        let caps = ConditionCaps {
            max_upset_vertices: 2,
            ..ConditionCaps::default()
        };
        assert_eq!(
            upset_bound_check_with(&ids(3, &[], &[]), caps).verdict,
            ConditionVerdict::Unknown
        );
    }

    #[test]
    fn weight_examples() {
        let r = weight_check(&ids(0, &[], &[]));
        assert_eq!(r.verdict, ConditionVerdict::HasS);
        assert_eq!(weight_sum(&ids(0, &[], &[])).to_string(), "0");

        let b = ids(6, &[&[0, 1, 2]], &[&[3, 4, 5]]);
        assert_eq!(weight_check(&b).verdict, ConditionVerdict::HasS);
        assert_eq!(weight_sum(&b).to_string(), "1/4");

        let r = weight_check(&cnf_example());
        assert_eq!(r.verdict, ConditionVerdict::Unknown);
        assert_eq!(weight_sum(&cnf_example()).to_string(), "7/4");
    }

    #[test]
    fn weight_boundary_is_strict() {
        // {0,1} and {2,3}: 1/4 + 1/4 = 1/2, not below
        let b = ids(4, &[&[0, 1]], &[&[2, 3]]);
        assert_eq!(weight_sum(&b).to_string(), "1/2");
        assert_eq!(weight_check(&b).verdict, ConditionVerdict::Unknown);
    }

    #[test]
    fn weight_ignores_duplicates_and_handles_big_sets() {
        let b = ids(6, &[&[0, 1, 2], &[0, 1, 2]], &[&[0, 1, 2]]);
        assert_eq!(weight_sum(&b).to_string(), "1/8");
        let big = VertexSet::new(0..200);
        let b = Bihypergraph::from_ids(200, vec![big], vec![]).unwrap();
        assert!(weight_check(&b).verdict == ConditionVerdict::HasS);
        assert_eq!(weight_sum(&b).exponent, 200);
    }

    #[test]
    fn empty_set_weight_is_unknown_with_note() {
        let r = weight_check(&ids(1, &[&[]], &[]));
        assert_eq!(r.verdict, ConditionVerdict::Unknown);
        assert!(r.note.is_some());
    }
}
