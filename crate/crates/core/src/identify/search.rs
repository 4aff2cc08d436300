use serde::Serialize;

use crate::error::{Error, Result};
use crate::scm::DiscreteScm;

use super::adjust::{backdoor_adjust_given, frontdoor_adjust, surgery_oracle};
use super::query::{EffectQuery, EffectTable};
use super::verdict::rule2_exchange_check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Backdoor,
    Frontdoor,
}

/// One successful identification of the query from the latent-free joint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub method: Method,
    pub treatment: String,
    /// Adjustment set (back-door) or mediators (front-door).
    pub set: Vec<String>,
    /// Intervened variables handled as observations and exchanged back.
    pub exchanged: Vec<String>,
    pub effect: EffectTable,
    /// Largest cell difference from the surgery oracle.
    pub oracle_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Identification {
    pub query: String,
    pub estimates: Vec<Estimate>,
    pub oracle: EffectTable,
}

fn dedup(sets: Vec<Vec<String>>) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = Vec::new();
    for mut s in sets {
        s.sort();
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// Tries back-door and then front-door adjustment for every choice of
/// treatment in the do-set, the remaining intervened variables being
/// conditioned on and exchanged back when the graph allows it. Every
/// success is listed and compared with the surgery oracle on `scm`.
///
/// Fails with the first criterion failure met when nothing identifies the
/// query.
pub fn identify_effect(scm: &DiscreteScm, q: &EffectQuery) -> Result<Identification> {
    let dag = scm.dag();
    let do_vars = q.do_vars();
    let observed = q.observed_vars();
    if do_vars.is_empty() {
        return Err(Error::EmptySet("do-set"));
    }
    let y = q.outcome.as_str();
    let oracle = surgery_oracle(scm, y, &do_vars, &observed)?.select(q)?;
    let visible = dag.observed();
    let joint = scm.exact_joint()?.marginal(&visible)?;

    let mut estimates = Vec::new();
    let mut failures = Vec::new();
    for &x in &do_vars {
        let exchanged: Vec<&str> = do_vars.iter().copied().filter(|&v| v != x).collect();
        let mut given: Vec<&str> = exchanged.clone();
        given.extend(&observed);
        if !exchanged.is_empty() && !rule2_exchange_check(dag, y, &exchanged, &[x], &observed)? {
            failures.push(Error::CriterionNotMet {
                criterion: "exchange".into(),
                reason: format!("{} cannot be exchanged for an observation alongside do({x})", exchanged.join(", ")),
                witness: None,
            });
            continue;
        }
        let finish = |t: EffectTable| -> Result<EffectTable> {
            let positions: Vec<usize> = (0..exchanged.len()).collect();
            let t = if exchanged.is_empty() { t } else { t.promote_given(&positions, &do_vars)? };
            t.select(q)
        };

        let desc = dag.descendants(x)?;
        let ancestors_of_y = dag.ancestors(y)?;
        let free = |v: &&str| !dag.is_latent(v) && *v != x && *v != y && !given.contains(v);
        let parents: Vec<String> = dag.parents(x)?.into_iter().filter(free).map(String::from).collect();
        let non_desc: Vec<String> =
            visible.iter().copied().filter(free).filter(|v| !desc.contains(v)).map(String::from).collect();
        for z in dedup(vec![Vec::new(), parents, non_desc]) {
            match backdoor_adjust_given(&joint, dag, x, y, &z, &given.iter().map(|s| s.to_string()).collect::<Vec<_>>())
            {
                Ok(t) => {
                    let effect = finish(t)?;
                    estimates.push(Estimate {
                        method: Method::Backdoor,
                        treatment: x.to_string(),
                        set: z,
                        exchanged: exchanged.iter().map(|s| s.to_string()).collect(),
                        oracle_deviation: effect.max_abs_diff(&oracle)?,
                        effect,
                    });
                    break;
                }
                Err(e) => failures.push(e),
            }
        }

        let mediators: Vec<String> = visible
            .iter()
            .copied()
            .filter(free)
            .filter(|v| desc.contains(v) && ancestors_of_y.contains(v))
            .map(String::from)
            .collect();
        let given_owned: Vec<String> = given.iter().map(|s| s.to_string()).collect();
        match frontdoor_adjust(&joint, dag, x, y, &mediators, &given_owned) {
            Ok(t) => {
                let effect = finish(t)?;
                estimates.push(Estimate {
                    method: Method::Frontdoor,
                    treatment: x.to_string(),
                    set: mediators,
                    exchanged: exchanged.iter().map(|s| s.to_string()).collect(),
                    oracle_deviation: effect.max_abs_diff(&oracle)?,
                    effect,
                });
            }
            Err(e) => failures.push(e),
        }
    }
    if estimates.is_empty() {
        return Err(failures.into_iter().next().unwrap_or(Error::EmptySet("do-set")));
    }
    Ok(Identification { query: q.to_string(), estimates, oracle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::road::build_scenario;

    #[test]
    fn scenario_journey_and_decision() {
        let scm = build_scenario(&fixtures::scenario("default").unwrap()).unwrap();
        let q: EffectQuery = "P(Y_f | do(J_o, D))".parse().unwrap();
        let id = identify_effect(&scm, &q).unwrap();
        assert_eq!(id.estimates.len(), 1);
        let e = &id.estimates[0];
        assert_eq!((e.method, e.treatment.as_str()), (Method::Frontdoor, "D"));
        assert_eq!(e.set, ["S_0", "S_1", "S_2"]);
        assert!(e.oracle_deviation < 1e-9);
        assert_eq!(e.effect.do_vars, ["J_o", "D"]);
    }

    #[test]
    fn null_confounder_agrees_everywhere() {
        let scm = build_scenario(&fixtures::scenario("null_confounder").unwrap()).unwrap();
        let q: EffectQuery = "P(Y_f | do(J_o, D))".parse().unwrap();
        let id = identify_effect(&scm, &q).unwrap();
        assert!(id.estimates.iter().any(|e| e.method == Method::Backdoor));
        assert!(id.estimates.iter().any(|e| e.method == Method::Frontdoor));
        assert!(id.estimates.iter().all(|e| e.oracle_deviation < 1e-9));
    }

    #[test]
    fn latent_confounder_without_mediator_fails() {
        let scm = fixtures::model("fig2b_strong_confounder").unwrap();
        let err = identify_effect(&scm, &"Y_f | do(X_c)".parse().unwrap()).unwrap_err();
        match err {
            Error::CriterionNotMet { reason, witness, .. } => {
                assert_eq!(reason, "unblockable back-door");
                assert_eq!(witness.unwrap(), ["X_c", "U", "Y_f"]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pinned_values_filter_rows() {
        let scm = build_scenario(&fixtures::scenario("default").unwrap()).unwrap();
        let id = identify_effect(&scm, &"Y_f | do(J_o=1, D=2)".parse().unwrap()).unwrap();
        assert_eq!(id.oracle.rows.len(), 1);
        assert_eq!(id.estimates[0].effect.rows.len(), 1);
    }
}
