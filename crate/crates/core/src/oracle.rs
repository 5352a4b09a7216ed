//! Brute-force ground truth: try every `X ⊆ V`.

use crate::error::{Error, Result};
use crate::graph::{Bihypergraph, SPartition};
use crate::search::{Certificate, FailureWitness};
use crate::set::{VertexId, VertexSet};

pub const DEFAULT_CAP: usize = 24;

struct Masks {
    e: Vec<u64>,
    f: Vec<u64>,
}

impl Masks {
    fn new(b: &Bihypergraph, cap: usize) -> Result<Self> {
        let n = b.vertex_count();
        if n > cap.min(63) {
            return Err(Error::UniverseTooLarge {
                size: n,
                cap: cap.min(63),
            });
        }
        let mask = |s: &VertexSet| s.iter().fold(0u64, |m, v| m | 1 << v);
        Ok(Masks {
            e: b.e().sets().iter().map(mask).collect(),
            f: b.f().sets().iter().map(mask).collect(),
        })
    }

    fn is_s_partition(&self, x: u64) -> bool {
        self.e.iter().all(|&m| m & x != 0) && self.f.iter().all(|&m| m & !x != 0)
    }
}

pub fn brute_force_decide(b: &Bihypergraph) -> Result<Certificate> {
    brute_force_decide_with_cap(b, DEFAULT_CAP)
}

/// Returns the lexicographically least witness (by sorted id sequence), or
/// an exhaustion marker.
pub fn brute_force_decide_with_cap(b: &Bihypergraph, cap: usize) -> Result<Certificate> {
    let masks = Masks::new(b, cap)?;
    let n = b.vertex_count() as u32;
    // Preorder walk: a sorted sequence precedes its extensions, which precede
    // sequences with a larger element at the first difference.
    let mut stack: Vec<(u64, u32)> = vec![(0, 0)];
    while let Some((x, next)) = stack.pop() {
        if masks.is_s_partition(x) {
            let members = (0..n).filter(|&v| x >> v & 1 == 1).map(|v| v as VertexId);
            return Ok(Certificate::HasS(SPartition::new(VertexSet::new(members))));
        }
        for v in (next..n).rev() {
            stack.push((x | 1 << v, v + 1));
        }
    }
    Ok(Certificate::FailsS(FailureWitness::Exhausted))
}

pub fn count_s_partitions(b: &Bihypergraph) -> Result<u64> {
    count_s_partitions_with_cap(b, DEFAULT_CAP)
}

pub fn count_s_partitions_with_cap(b: &Bihypergraph, cap: usize) -> Result<u64> {
    let masks = Masks::new(b, cap)?;
    Ok((0..1u64 << b.vertex_count())
        .filter(|&x| masks.is_s_partition(x))
        .count() as u64)
}
