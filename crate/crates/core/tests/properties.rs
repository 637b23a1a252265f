mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn derivation_is_leibniz(c in ruled_pair()) {
        leibniz(c)?;
    }

    #[test]
    fn reduction_is_confluent(c in ruled_pair()) {
        confluence(c)?;
    }

    #[test]
    fn charts_blow_down_to_the_original_field(i in 0..all_charts().len()) {
        blow_down(all_charts()[i])?;
    }

    #[test]
    fn pick_holds(p in points()) {
        pick(p)?;
    }

    #[test]
    fn interior_count_matches_brute_force(p in points()) {
        brute_interior(p)?;
    }

    #[test]
    fn jacobian_chain_rule(m in maps()) {
        chain_rule(m)?;
    }

    #[test]
    fn classification_ignores_node_order(c in relabellings()) {
        classify_relabelled(c)?;
    }

    #[test]
    fn scaling_is_recovered(c in scalings()) {
        scaling_round_trip(c)?;
    }
}

#[test]
fn every_chart_blows_down() {
    for c in all_charts() {
        blow_down(c).unwrap();
    }
}
