use proptest::prelude::*;
use psolve_core::oracle::{brute_force_decide, count_s_partitions};
use psolve_core::{check_s_partition, Side, Verdict, VertexSet};
use psolve_testkit::{arb_instance, Shape};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn count_positive_iff_has_s(b in arb_instance(Shape::SUITE)) {
        let count = count_s_partitions(&b).unwrap();
        let cert = brute_force_decide(&b).unwrap();
        prop_assert_eq!(count > 0, cert.verdict() == Verdict::HasS);
        if let Some(x) = cert.witness() {
            prop_assert!(check_s_partition(&b, &x.x_side).unwrap());
            // Least witness: no lexicographically smaller sequence works.
            let n = b.vertex_count();
            for m in 0u32..1 << n {
                let y: VertexSet = (0..n as u32).filter(|v| m >> v & 1 == 1).collect();
                if y.members() < x.x_side.members() {
                    prop_assert!(!check_s_partition(&b, &y).unwrap());
                }
            }
        }
    }

    #[test]
    fn adding_a_set_never_increases_count(
        b in arb_instance(Shape::SUITE),
        extra in prop::collection::btree_set(0u32..10, 0..4),
        to_f: bool,
    ) {
        let extra: VertexSet = extra.into_iter().filter(|&v| (v as usize) < b.vertex_count()).collect();
        let side = if to_f { Side::F } else { Side::E };
        let more = b.with_set(side, extra).unwrap();
        prop_assert!(count_s_partitions(&more).unwrap() <= count_s_partitions(&b).unwrap());
    }

    #[test]
    fn complement_symmetry(b in arb_instance(Shape::SUITE)) {
        prop_assert_eq!(count_s_partitions(&b).unwrap(), count_s_partitions(&b.swapped()).unwrap());
    }
}
