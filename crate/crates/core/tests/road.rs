use causalrate::identify::{EffectQuery, Target};
use causalrate::info::{conditional_mutual_information, mutual_information};
use causalrate::road::{
    build_scenario, factorization_residual, ground_truth_effect, markov_consistency, naive_phyd, phyd_effect,
    simulate_journeys, RoadRiskScenario,
};
use causalrate::scm::DiscreteScm;
use causalrate::{fixtures, TemplateId};

fn default() -> RoadRiskScenario {
    RoadRiskScenario::default_scenario()
}

#[test]
fn decision_free_escalation_gives_equal_effects() {
    let mut s = fixtures::scenario("null_confounder").unwrap().with_depth(1).unwrap();
    for stage in &mut s.escalation {
        for row in stage.iter_mut() {
            row.fill(0.5);
        }
    }
    let q = EffectQuery::new("Y_f", vec![Target::all("D")], vec![]).unwrap();
    let t = ground_truth_effect(&s, &q).unwrap();
    for r in &t.rows {
        assert!((r.dist[1] - t.rows[0].dist[1]).abs() < 1e-12);
    }
}

#[test]
fn no_journeys_no_accidents() {
    let mut s = default();
    s.journey_rate.fill(0.0);
    let j = build_scenario(&s).unwrap().exact_joint().unwrap();
    assert_eq!(j.prob(&[("Y_f", 1)]).unwrap(), 0.0);
}

#[test]
fn aggressive_driving_is_riskier() {
    let s = default();
    let p = |d: usize| {
        let q = EffectQuery::new("Y_f", vec![Target::at("J_o", 1), Target::at("D", d)], vec![]).unwrap();
        ground_truth_effect(&s, &q).unwrap().rows[0].dist[1]
    };
    assert!(p(2) > p(1) && p(1) > p(0));
}

#[test]
fn markov_and_factorization_hold_at_every_depth() {
    for depth in 1..=3 {
        let s = default().with_depth(depth).unwrap();
        let scm = build_scenario(&s).unwrap();
        for d in 0..s.decision_card {
            assert!(markov_consistency(&scm, d).unwrap() < 1e-9);
            assert!(factorization_residual(&scm, d).unwrap() < 1e-12);
        }
        let chain = DiscreteScm::random_binary(TemplateId::Fig4Chain(depth).build().unwrap(), depth as u64).unwrap();
        for d in 0..2 {
            assert!(markov_consistency(&chain, d).unwrap() < 1e-9);
            assert!(factorization_residual(&chain, d).unwrap() < 1e-12);
        }
    }
}

/// Negative control: traffic at stage 0 also drives the next transition.
#[test]
fn carried_over_traffic_breaks_the_markov_property() {
    let s = default();
    let base = build_scenario(&s).unwrap();
    let dag = base.dag().with_extra::<&str>(&[], &[("T_0", "S_1")], &[]).unwrap();
    let card = base.cards().to_vec();
    let scm = DiscreteScm::from_fn(dag, card, |node, pa| {
        let get = |n: &str| pa.iter().find(|(p, _)| *p == n).map(|&(_, v)| v);
        if node == "S_1" {
            if get("S_0") == Some(1) {
                return vec![0.0, 1.0];
            }
            let p = if get("T_0") == Some(1) { 0.9 } else { 0.05 };
            return vec![1.0 - p, p];
        }
        let own: Vec<usize> = base.dag().parents(node).unwrap().iter().map(|p| get(p).unwrap()).collect();
        base.cpt_row(node, &own).unwrap().to_vec()
    })
    .unwrap();
    assert!(markov_consistency(&scm, 1).unwrap() > 0.01);
}

#[test]
fn claim_history_is_deprecated_but_predictive() {
    let s = default();
    let q = EffectQuery::new("Y_f", vec![Target::all("J_o"), Target::all("D")], vec![Target::all("Y_h")]).unwrap();
    let with_history = ground_truth_effect(&s, &q).unwrap();
    let q0 = EffectQuery::new("Y_f", vec![Target::all("J_o"), Target::all("D")], vec![]).unwrap();
    let without = ground_truth_effect(&s, &q0).unwrap();
    for r in &with_history.rows {
        let base = without.row(&r.do_values, &[]).unwrap();
        assert!((r.dist[1] - base[1]).abs() < 1e-9);
    }
    let scm = build_scenario(&s).unwrap();
    let j = scm.exact_joint().unwrap();
    assert!(mutual_information(&j, &["Y_h"], &["Y_f"]).unwrap().value() > 0.001);
    let post = scm.intervene(&[("J_o", 1), ("D", 2)]).unwrap().exact_joint().unwrap();
    assert!(conditional_mutual_information(&post, &["Y_h"], &["Y_f"], &["J_o", "D"]).unwrap().value() < 1e-9);
}

#[test]
fn phyd_is_exact_and_conditioning_is_biased() {
    let s = default();
    let q = EffectQuery::new("Y_f", vec![Target::all("J_o"), Target::all("D")], vec![]).unwrap();
    let truth = ground_truth_effect(&s, &q).unwrap();
    let est = phyd_effect(&s).unwrap();
    assert!(est.max_abs_diff(&truth).unwrap() < 1e-9);
    assert!(est.normalization_error() < 1e-9);
    assert!(naive_phyd(&s).unwrap().max_total_variation(&truth).unwrap() > 0.005);

    let null = fixtures::scenario("null_confounder").unwrap();
    let est = phyd_effect(&null).unwrap();
    assert!(est.max_abs_diff(&naive_phyd(&null).unwrap()).unwrap() < 1e-12);
}

#[test]
fn simulated_accident_rate_matches_the_model() {
    let s = default();
    let rec = simulate_journeys(&s, 100_000, 3).unwrap();
    let emp = rec.iter().filter(|r| r.y_f == 1).count() as f64 / rec.len() as f64;
    let exact = build_scenario(&s).unwrap().exact_joint().unwrap().prob(&[("Y_f", 1)]).unwrap();
    assert!((emp - exact).abs() < 0.01);
}
