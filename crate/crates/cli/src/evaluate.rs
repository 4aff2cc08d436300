use anyhow::Result;
use causalrate::identify::{confounding_gap, noise_verdict, rating_comparison, EffectQuery, EffectTable, Target};
use causalrate::info::mutual_information;
use causalrate::road::{
    build_scenario, factorization_residual, ground_truth_effect, markov_consistency, naive_phyd, phyd_effect,
    Confounder, RoadRiskScenario,
};
use causalrate::{Bits, CapacityReport, EliminationVerdict};
use serde::Serialize;

/// Bumped whenever a field changes meaning or disappears.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Report {
    schema_version: u32,
    scenario: ScenarioInfo,
    tolerance: f64,
    capacity: Capacity,
    claim_history: ClaimHistory,
    verdict: EliminationVerdict,
    confounding_gap: Gap,
    markov_max_cmi: f64,
    factorization_max_residual: f64,
    phyd: Phyd,
    checks: Checks,
}

#[derive(Serialize)]
struct ScenarioInfo {
    name: String,
    depth: usize,
    decision_card: usize,
    traffic_card: usize,
    claim_history_card: usize,
    null_confounder: bool,
}

#[derive(Serialize)]
struct Capacity {
    classification: Vec<String>,
    #[serde(flatten)]
    bits: CapacityReport,
}

#[derive(Serialize)]
struct ClaimHistory {
    observational_mi: Bits,
    /// Largest `|P(Y_f | do(J_o, D), Y_h = h) − P(Y_f | do(J_o, D))|`.
    max_interventional_gap: f64,
}

#[derive(Serialize)]
struct Gap {
    treatment: String,
    i_x_y: Bits,
    i_ux_y: Bits,
    i_u_y_given_x: Bits,
}

#[derive(Serialize)]
struct Phyd {
    estimate: EffectTable,
    oracle: EffectTable,
    max_abs_deviation: f64,
    naive_max_tv: f64,
}

#[derive(Serialize)]
struct Checks {
    history_is_noise: bool,
    history_predicts_observationally: bool,
    phyd_matches_oracle: bool,
    markov: bool,
    factorization: bool,
}

pub fn evaluate(s: &RoadRiskScenario, tol: f64) -> Result<Report> {
    let scm = build_scenario(s)?;
    let dag = scm.dag();
    let full = scm.exact_joint()?;
    let obs = full.marginal(&dag.observed())?;

    let mut classification = vec!["J_o".to_string(), "D".to_string()];
    classification.extend(s.mediators());
    let capacity = rating_comparison(&obs, &["Y_h".to_string()], &classification, &["Y_f".to_string()])?;

    let both = vec![Target::all("J_o"), Target::all("D")];
    let with_h = ground_truth_effect(s, &EffectQuery::new("Y_f", both.clone(), vec![Target::all("Y_h")])?)?;
    let without = ground_truth_effect(s, &EffectQuery::new("Y_f", both, vec![])?)?;
    let mut max_gap: f64 = 0.0;
    for r in &with_h.rows {
        let base = without.row(&r.do_values, &[]).expect("same do-rows");
        for (a, b) in r.dist.iter().zip(base) {
            max_gap = max_gap.max((a - b).abs());
        }
    }
    let observational_mi = mutual_information(&obs, &["Y_h"], &["Y_f"])?;
    let verdict = noise_verdict(dag, "Y_h", "Y_f", &["J_o", "D"])?;

    // A null confounder is measured as a trait with no effect at all.
    let gap_model = match &s.confounder {
        Some(_) => scm.clone(),
        None => {
            let mut inert = s.clone();
            inert.confounder = Some(Confounder { prior: 0.5, decision_shift: 0.0, accident_hazard: 0.0 });
            build_scenario(&inert)?
        }
    };
    let g = confounding_gap(&gap_model, &["D"], "Y_f", "U")?;

    let mut markov: f64 = 0.0;
    let mut factorization: f64 = 0.0;
    for d in 0..s.decision_card {
        markov = markov.max(markov_consistency(&scm, d)?);
        factorization = factorization.max(factorization_residual(&scm, d)?);
    }

    let estimate = phyd_effect(s)?;
    let deviation = estimate.max_abs_diff(&without)?;
    let naive_tv = naive_phyd(s)?.max_total_variation(&without)?;

    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        scenario: ScenarioInfo {
            name: s.name.clone(),
            depth: s.depth,
            decision_card: s.decision_card,
            traffic_card: s.traffic_card,
            claim_history_card: s.claim_history_card,
            null_confounder: s.confounder.is_none(),
        },
        tolerance: tol,
        capacity: Capacity { classification, bits: capacity },
        checks: Checks {
            history_is_noise: verdict.verdict == causalrate::Verdict::Noise && max_gap < tol,
            history_predicts_observationally: observational_mi.value() > 0.0,
            phyd_matches_oracle: deviation < tol,
            markov: markov < tol,
            factorization: factorization < tol,
        },
        claim_history: ClaimHistory { observational_mi, max_interventional_gap: max_gap },
        verdict,
        confounding_gap: Gap {
            treatment: "D".into(),
            i_x_y: g.i_x_y,
            i_ux_y: g.i_ux_y,
            i_u_y_given_x: g.i_u_y_given_x,
        },
        markov_max_cmi: markov,
        factorization_max_residual: factorization,
        phyd: Phyd { estimate, oracle: without, max_abs_deviation: deviation, naive_max_tv: naive_tv },
    })
}
