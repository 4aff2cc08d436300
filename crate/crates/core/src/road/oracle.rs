use crate::error::{Error, Result};
use crate::graph::names::{self, CLAIM_FUTURE, DECISION, JOURNEY};
use crate::identify::{
    frontdoor_adjust, naive_conditional, rule2_exchange_check, surgery_oracle, EffectQuery, EffectTable,
};
use crate::info::conditional_mutual_information;
use crate::scm::{assignments, DiscreteScm, JointTable};

use super::scenario::{build_scenario, RoadRiskScenario};

/// `S_0, S_1, …` as present in the model, followed by `Y_f` if present.
pub fn state_chain(scm: &DiscreteScm) -> Vec<String> {
    let mut chain: Vec<String> = (0..).map(names::state).take_while(|s| scm.dag().contains(s)).collect();
    if scm.dag().contains(CLAIM_FUTURE) {
        chain.push(CLAIM_FUTURE.to_string());
    }
    chain
}

fn given_decision(scm: &DiscreteScm, d: usize) -> Result<JointTable> {
    scm.exact_joint()?.condition(&[(DECISION, d)])
}

/// Largest `I(T_i; S_{i+1} | S_i)` over the stages, within the stratum
/// `D = d`. Zero when traffic only acts on the transition it belongs to.
pub fn markov_consistency(scm: &DiscreteScm, d: usize) -> Result<f64> {
    let j = given_decision(scm, d)?;
    let chain = state_chain(scm);
    let mut worst: f64 = 0.0;
    for i in 0..chain.len() - 1 {
        let t = names::traffic(i);
        if !j.contains(&t) {
            continue;
        }
        let cmi = conditional_mutual_information(&j, &[t.as_str()], &[chain[i + 1].as_str()], &[chain[i].as_str()])?;
        worst = worst.max(cmi.value());
    }
    Ok(worst)
}

/// Largest absolute gap, over all trajectories, between `P(S_0, …, Y_f | d)`
/// and `P(S_0 | d) ∏ P(S_{i+1} | S_i, d)`.
pub fn factorization_residual(scm: &DiscreteScm, d: usize) -> Result<f64> {
    let j = given_decision(scm, d)?;
    let chain = state_chain(scm);
    let path = j.marginal_in_order(&chain)?;
    let first = j.marginal_in_order(&chain[..1])?;
    let pairs: Vec<JointTable> = chain.windows(2).map(|w| j.marginal_in_order(w)).collect::<Result<_>>()?;
    let heads: Vec<JointTable> =
        chain[..chain.len() - 1].iter().map(|v| j.marginal_in_order(&[v])).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for states in assignments(path.card()) {
        let mut product = first.get(&states[..1]);
        for i in 0..pairs.len() {
            if product == 0.0 {
                break;
            }
            let head = heads[i].get(&states[i..i + 1]);
            product *= if head > 0.0 { pairs[i].get(&states[i..i + 2]) / head } else { 0.0 };
        }
        worst = worst.max((path.get(&states) - product).abs());
    }
    Ok(worst)
}

/// Oracle answer to `q` on the full scenario model, latent trait included.
pub fn ground_truth_effect(s: &RoadRiskScenario, q: &EffectQuery) -> Result<EffectTable> {
    let scm = build_scenario(s)?;
    surgery_oracle(&scm, &q.outcome, &q.do_vars(), &q.observed_vars())?.select(q)
}

fn observational(scm: &DiscreteScm) -> Result<JointTable> {
    scm.exact_joint()?.marginal(&scm.dag().observed())
}

/// `P(Y_f | do(J_o, D))` for every journey and decision value, estimated
/// from the observational joint with the latent trait marginalized out.
///
/// Front-door adjustment through `S_0 … S_D` within each journey stratum
/// gives `P(Y_f | do(D), J_o)`; the journey observation is then exchanged
/// for an intervention, which the graph licenses because nothing but
/// `Y_h` points into `J_o`.
pub fn phyd_effect(s: &RoadRiskScenario) -> Result<EffectTable> {
    let scm = build_scenario(s)?;
    let j = observational(&scm)?;
    let mediators = s.mediators();
    let m: Vec<&str> = mediators.iter().map(String::as_str).collect();
    let per_journey = frontdoor_adjust(&j, scm.dag(), DECISION, CLAIM_FUTURE, &m, &[JOURNEY])?;
    if !rule2_exchange_check(scm.dag(), CLAIM_FUTURE, &[JOURNEY], &[DECISION], &[])? {
        return Err(Error::CriterionNotMet {
            criterion: "exchange".into(),
            reason: format!("{CLAIM_FUTURE} depends on {JOURNEY} other than through its outgoing edges"),
            witness: None,
        });
    }
    per_journey.promote_given(&[0], &[JOURNEY, DECISION])
}

/// The conditioning estimate `P(Y_f | J_o, D)` that ignores confounding.
pub fn naive_phyd(s: &RoadRiskScenario) -> Result<EffectTable> {
    let scm = build_scenario(s)?;
    naive_conditional(&observational(&scm)?, CLAIM_FUTURE, &[JOURNEY, DECISION], &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identify::Target;

    #[test]
    fn default_scenario_structure() {
        let s = RoadRiskScenario::default_scenario();
        let scm = build_scenario(&s).unwrap();
        assert_eq!(state_chain(&scm), ["S_0", "S_1", "S_2", "Y_f"]);
        for d in 0..s.decision_card {
            assert!(markov_consistency(&scm, d).unwrap() < 1e-9);
            assert!(factorization_residual(&scm, d).unwrap() < 1e-12);
        }
    }

    #[test]
    fn phyd_matches_oracle_and_naive_does_not() {
        let s = RoadRiskScenario::default_scenario();
        let est = phyd_effect(&s).unwrap();
        let q = EffectQuery::new("Y_f", vec![Target::all("J_o"), Target::all("D")], vec![]).unwrap();
        let truth = ground_truth_effect(&s, &q).unwrap();
        assert!(est.max_abs_diff(&truth).unwrap() < 1e-9);
        assert!(est.normalization_error() < 1e-9);
        assert!(naive_phyd(&s).unwrap().max_total_variation(&truth).unwrap() > 0.005);
    }

    #[test]
    fn switch_off_means_no_accident() {
        let s = RoadRiskScenario::default_scenario();
        let q: EffectQuery = "Y_f | do(J_o=0)".parse().unwrap();
        let t = ground_truth_effect(&s, &q).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].dist, [1.0, 0.0]);
    }
}
