use proptest::prelude::*;
use psolve_core::{
    check_s_partition, family_intersection, is_transversal, Bihypergraph, VertexSet,
};
use psolve_testkit::{arb_instance, Shape};

const SMALL: Shape = Shape {
    max_vertices: 12,
    max_sets: 6,
    max_size: 4,
};

fn all_subsets(n: usize) -> impl Iterator<Item = VertexSet> {
    (0u32..1 << n).map(move |m| (0..n as u32).filter(|v| m >> v & 1 == 1).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form(ids in prop::collection::vec(0u32..50, 0..20)) {
        let s = VertexSet::new(ids.clone());
        prop_assert!(s.members().windows(2).all(|w| w[0] < w[1]));
        let mut rev = ids;
        rev.reverse();
        prop_assert_eq!(VertexSet::new(rev), s);
    }

    #[test]
    fn dual_formulation_agrees(b in arb_instance(SMALL)) {
        let n = b.vertex_count();
        for x in all_subsets(n) {
            let complement_hits = is_transversal(&x.complement(n), b.f().sets());
            let no_f_inside = b.f().sets().iter().all(|s| !s.is_subset(&x));
            prop_assert_eq!(complement_hits, no_f_inside);
            check_s_partition(&b, &x).unwrap();
        }
    }

    #[test]
    fn isolated_vertex_never_flips(b in arb_instance(Shape { max_vertices: 8, ..SMALL })) {
        let bigger = b.with_isolated_vertex("fresh").unwrap();
        for x in all_subsets(b.vertex_count()) {
            prop_assert_eq!(check_s_partition(&b, &x).unwrap(), check_s_partition(&bigger, &x).unwrap());
        }
    }

    #[test]
    fn family_intersection_is_symmetric_and_shared(b in arb_instance(SMALL)) {
        let both = family_intersection(b.e().sets(), b.f().sets());
        prop_assert_eq!(&both, &family_intersection(b.f().sets(), b.e().sets()));
        for s in &both {
            prop_assert!(b.e().sets().contains(s) && b.f().sets().contains(s));
        }
        prop_assert!(both.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn out_of_range_is_rejected() {
    let b = Bihypergraph::from_ids(2, vec![VertexSet::singleton(0)], vec![]).unwrap();
    assert!(check_s_partition(&b, &VertexSet::singleton(5)).is_err());
}
