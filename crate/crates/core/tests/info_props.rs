use causalrate::info::{
    chain_decompositions, conditional_entropy, conditional_mutual_information, entropy, mutual_information,
};
use causalrate::scm::JointTable;
use proptest::prelude::*;

fn arb_joint() -> impl Strategy<Value = JointTable> {
    proptest::collection::vec(2usize..=3, 3)
        .prop_flat_map(|card| {
            let cells: usize = card.iter().product();
            (Just(card), proptest::collection::vec(prop_oneof![Just(0.0), 0.0f64..1.0], cells))
        })
        .prop_filter("some mass", |(_, w)| w.iter().sum::<f64>() > 0.0)
        .prop_map(|(card, w)| JointTable::from_weights(vec!["A".into(), "B".into(), "C".into()], card, w).unwrap())
}

proptest! {
    #[test]
    fn information_is_nonnegative(j in arb_joint()) {
        prop_assert!(mutual_information(&j, &["A"], &["B"]).unwrap().value() >= 0.0);
        prop_assert!(conditional_mutual_information(&j, &["A"], &["B"], &["C"]).unwrap().value() >= 0.0);
        prop_assert!(conditional_entropy(&j, &["A"], &["B", "C"]).unwrap().value() >= 0.0);
    }

    #[test]
    fn chain_rules_hold(j in arb_joint()) {
        let d = chain_decompositions(&j, &["A"], &["B"], &["C"]).unwrap();
        prop_assert!(d.residual() < 1e-9);
        prop_assert!(d.i_ab_y.value() >= d.i_a_y.value() - 1e-9);
    }

    #[test]
    fn mi_is_symmetric_and_bounded(j in arb_joint()) {
        let ab = mutual_information(&j, &["A"], &["B"]).unwrap().value();
        let ba = mutual_information(&j, &["B"], &["A"]).unwrap().value();
        prop_assert!((ab - ba).abs() < 1e-12);
        let ha = entropy(&j, &["A"]).unwrap().value();
        let hb = entropy(&j, &["B"]).unwrap().value();
        prop_assert!(ab <= ha.min(hb) + 1e-12);
    }
}
