use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Dag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Noise,
    Signal,
    Unidentifiable,
}

/// Outcome of trying to eliminate a rating variable.
///
/// `justification` has one of the forms
///
/// ```text
/// observational: C _||_ Y | {O..}
/// interventional: Y _||_ C | do({O..})
/// signal: back-door blocked by {O..}
/// unidentifiable: open back-door via {L..}
/// ```
///
/// `witness` holds the open trail for `Signal` and `Unidentifiable`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationVerdict {
    pub variable: String,
    pub verdict: Verdict,
    pub justification: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

fn set(v: &[&str]) -> String {
    format!("{{{}}}", v.join(", "))
}

fn check_distinct(candidate: &str, outcome: &str, others: &[&str]) -> Result<()> {
    if candidate == outcome {
        return Err(Error::Overlap(candidate.to_string()));
    }
    if let Some(v) = others.iter().find(|&&v| v == candidate || v == outcome) {
        return Err(Error::Overlap(v.to_string()));
    }
    Ok(())
}

/// Deletion of an observation: is `outcome ⊥ candidate | do_set` in the
/// graph with all edges into `do_set` removed? When true,
/// `P(outcome | do(do_set), candidate) = P(outcome | do(do_set))`.
pub fn rule1_deletion_check<S: AsRef<str>>(dag: &Dag, outcome: &str, candidate: &str, do_set: &[S]) -> Result<bool> {
    let xs: Vec<&str> = do_set.iter().map(AsRef::as_ref).collect();
    dag.index_of(outcome)?;
    dag.index_of(candidate)?;
    check_distinct(candidate, outcome, &xs)?;
    dag.mutilate(&xs)?.d_separated(&[outcome], &[candidate], &xs)
}

/// Exchange of an observation for an intervention: is
/// `outcome ⊥ exchanged | do_set ∪ given` once edges into `do_set` and
/// edges out of `exchanged` are removed? When true,
/// `P(y | do(X), w, g) = P(y | do(X, w), g)`.
pub(crate) fn rule2_exchange_check(
    dag: &Dag,
    outcome: &str,
    exchanged: &[&str],
    do_set: &[&str],
    given: &[&str],
) -> Result<bool> {
    let mut cond: Vec<&str> = do_set.to_vec();
    cond.extend(given);
    let g = dag.mutilate(do_set)?.without_outgoing(exchanged)?;
    g.d_separated(&[outcome], exchanged, &cond)
}

/// Classifies `candidate` as a predictor of `outcome` once `observed` is
/// known. Observational separation is tried first, then deletion under
/// `do(observed)`; failing both, the candidate is a usable `Signal` when
/// `observed`'s non-latent members block its back-door trails, and
/// `Unidentifiable` otherwise.
pub fn noise_verdict<S: AsRef<str>>(
    dag: &Dag,
    candidate: &str,
    outcome: &str,
    observed: &[S],
) -> Result<EliminationVerdict> {
    let obs: Vec<&str> = observed.iter().map(AsRef::as_ref).collect();
    dag.index_of(candidate)?;
    dag.index_of(outcome)?;
    check_distinct(candidate, outcome, &obs)?;
    let verdict = |verdict, justification: String, witness| EliminationVerdict {
        variable: candidate.to_string(),
        verdict,
        justification,
        witness,
    };

    if dag.d_separated(&[candidate], &[outcome], &obs)? {
        return Ok(verdict(Verdict::Noise, format!("observational: {candidate} _||_ {outcome} | {}", set(&obs)), None));
    }
    if rule1_deletion_check(dag, outcome, candidate, &obs)? {
        return Ok(verdict(
            Verdict::Noise,
            format!("interventional: {outcome} _||_ {candidate} | do({})", set(&obs)),
            None,
        ));
    }
    let visible: Vec<&str> = obs.iter().copied().filter(|v| !dag.is_latent(v)).collect();
    let cut = dag.without_outgoing(&[candidate])?;
    match cut.active_trail(&[candidate], &[outcome], &visible)? {
        None => {
            let trail = dag.active_trail(&[candidate], &[outcome], &obs)?;
            Ok(verdict(Verdict::Signal, format!("signal: back-door blocked by {}", set(&visible)), trail))
        }
        Some(trail) => {
            let latent: Vec<&str> = trail.iter().map(String::as_str).filter(|v| dag.is_latent(v)).collect();
            Ok(verdict(
                Verdict::Unidentifiable,
                format!("unidentifiable: open back-door via {}", set(&latent)),
                Some(trail),
            ))
        }
    }
}
