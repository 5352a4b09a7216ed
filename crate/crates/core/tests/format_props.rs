use proptest::prelude::*;
use psolve_core::format::{
    parse_bhg, parse_dimacs, parse_proof, print_bhg, print_dimacs, print_proof,
};
use psolve_core::{decide_by_resolution, Limits, ResolutionOutcome, Side, Strategy};
use psolve_testkit::{arb_instance, random_cnf, rng, Shape};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bhg_round_trip(b in arb_instance(Shape::SUITE)) {
        let text = print_bhg(&b);
        let again = parse_bhg(&text).unwrap();
        prop_assert_eq!(&again, &b);
        prop_assert_eq!(print_bhg(&again), text);
    }

    #[test]
    fn proof_round_trip(b in arb_instance(Shape::SUITE), alt: bool) {
        let strategy = if alt { Strategy::Alternating { depth: 2, first: Side::E } } else { Strategy::FOverE };
        if let ResolutionOutcome::Refuted { refutation, .. } = decide_by_resolution(&b, strategy, Limits::default()).unwrap() {
            let text = print_proof(&b, &refutation);
            let parsed = parse_proof(&text, &b).unwrap();
            prop_assert!(psolve_core::check_refutation(&b, &parsed).is_ok());
            prop_assert_eq!(print_proof(&b, &parsed), text);
        }
    }
}

#[test]
fn dimacs_round_trip() {
    let mut r = rng(3);
    for _ in 0..200 {
        let c = random_cnf(&mut r, 8, 12, 4);
        assert_eq!(parse_dimacs(&print_dimacs(&c)).unwrap(), c);
    }
}
