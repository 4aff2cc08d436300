use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::names::{self, CLAIM_FUTURE, CLAIM_HISTORY, CONFOUNDER, DECISION, JOURNEY};
use crate::graph::Dag;
use crate::scm::DiscreteScm;

use super::tta::check_thresholds;

pub const SCHEMA_VERSION: u32 = 1;

/// Latent driver trait. It pushes the decision toward the most aggressive
/// style and adds an accident hazard that does not go through the states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Confounder {
    /// `P(U = 1)`.
    pub prior: f64,
    /// Mixing weight toward the aggressive style when `U = 1`.
    pub decision_shift: f64,
    /// Extra accident probability when `U = 1`, combined noisy-or.
    pub accident_hazard: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoadRiskScenario {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    /// Number of intermediate perilous states.
    pub depth: usize,
    pub decision_card: usize,
    pub traffic_card: usize,
    pub claim_history_card: usize,
    /// `t_1 > … > t_{D+1}` in seconds.
    pub tta_thresholds: Vec<f64>,
    pub claim_history_prior: Vec<f64>,
    /// `P(J_o = 1 | Y_h = h)`.
    pub journey_rate: Vec<f64>,
    pub traffic_prior: Vec<f64>,
    /// Reserved: traffic correlated across stages is not supported.
    #[serde(default)]
    pub serial_traffic: bool,
    /// `P(D | J_o)` for a driver with `U = 0`, one row per journey value.
    pub decision_prior: Vec<Vec<f64>>,
    /// `escalation[i][d][t]`: probability that the peril level is reached at
    /// stage `i` given it had not been at stage `i-1`, decision `d` and
    /// traffic `t` (stage 0 has no predecessor).
    pub escalation: Vec<Vec<Vec<f64>>>,
    /// `P(Y_f = 1 | S_D = s)` on a journey, before the confounder hazard.
    pub crash_given_peril: [f64; 2],
    /// `None` means a null confounder: `U` is left out of the model.
    pub confounder: Option<Confounder>,
}

fn prob(what: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{what} = {p} is not a probability")))
    }
}

fn distribution(what: &str, row: &[f64], card: usize) -> Result<()> {
    if row.len() != card {
        return Err(Error::Parameter(format!("{what} has {} entries, expected {card}", row.len())));
    }
    for &p in row {
        prob(what, p)?;
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter(format!("{what} sums to {sum}")));
    }
    Ok(())
}

impl RoadRiskScenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: RoadRiskScenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parameter(format!(
                "schema_version {} unsupported, expected {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        if self.depth == 0 {
            return Err(Error::InvalidDepth(0));
        }
        if self.serial_traffic {
            return Err(Error::Parameter("serial_traffic is reserved and must be false".into()));
        }
        for (what, c) in [
            ("decision_card", self.decision_card),
            ("traffic_card", self.traffic_card),
            ("claim_history_card", self.claim_history_card),
        ] {
            if c < 2 {
                return Err(Error::Parameter(format!("{what} must be at least 2")));
            }
        }
        check_thresholds(&self.tta_thresholds)?;
        if self.tta_thresholds.len() != self.depth + 1 {
            return Err(Error::Parameter(format!("expected {} TTA thresholds", self.depth + 1)));
        }
        distribution("claim_history_prior", &self.claim_history_prior, self.claim_history_card)?;
        distribution("traffic_prior", &self.traffic_prior, self.traffic_card)?;
        if self.journey_rate.len() != self.claim_history_card {
            return Err(Error::Parameter("journey_rate needs one entry per claim-history value".into()));
        }
        for &p in &self.journey_rate {
            prob("journey_rate", p)?;
        }
        if self.decision_prior.len() != 2 {
            return Err(Error::Parameter("decision_prior needs one row per journey value".into()));
        }
        for row in &self.decision_prior {
            distribution("decision_prior", row, self.decision_card)?;
        }
        if self.escalation.len() != self.depth + 1 {
            return Err(Error::Parameter(format!("escalation needs {} stages", self.depth + 1)));
        }
        for stage in &self.escalation {
            if stage.len() != self.decision_card || stage.iter().any(|r| r.len() != self.traffic_card) {
                return Err(Error::Parameter("escalation stage must be decision_card x traffic_card".into()));
            }
            for &p in stage.iter().flatten() {
                prob("escalation", p)?;
            }
        }
        for &p in &self.crash_given_peril {
            prob("crash_given_peril", p)?;
        }
        if let Some(c) = &self.confounder {
            prob("confounder.prior", c.prior)?;
            prob("confounder.decision_shift", c.decision_shift)?;
            prob("confounder.accident_hazard", c.accident_hazard)?;
        }
        Ok(())
    }

    /// Same scenario at another depth. Stages beyond the current ones repeat
    /// the last escalation stage; thresholds are respaced geometrically
    /// between the current first and last.
    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidDepth(0));
        }
        let mut s = self.clone();
        s.depth = depth;
        s.escalation = (0..=depth).map(|i| self.escalation[i.min(self.depth)].clone()).collect();
        let (hi, lo) = (self.tta_thresholds[0], *self.tta_thresholds.last().unwrap());
        s.tta_thresholds = (0..=depth).map(|i| hi * (lo / hi).powf(i as f64 / depth as f64)).collect();
        s.validate()?;
        Ok(s)
    }

    /// The scenario's causal diagram (no CPTs).
    pub fn graph(&self) -> Result<Dag> {
        let d = self.depth;
        let mut nodes: Vec<String> = vec![CLAIM_HISTORY.into(), JOURNEY.into()];
        let mut edges: Vec<(String, String)> =
            vec![(CLAIM_HISTORY.into(), JOURNEY.into()), (JOURNEY.into(), DECISION.into())];
        if self.confounder.is_some() {
            nodes.push(CONFOUNDER.into());
            edges.push((CONFOUNDER.into(), DECISION.into()));
            edges.push((CONFOUNDER.into(), CLAIM_FUTURE.into()));
        }
        nodes.push(DECISION.into());
        nodes.extend((0..=d).map(names::traffic));
        for i in 0..=d {
            nodes.push(names::state(i));
            edges.push((DECISION.into(), names::state(i)));
            edges.push((names::traffic(i), names::state(i)));
            if i > 0 {
                edges.push((names::state(i - 1), names::state(i)));
            }
        }
        nodes.push(CLAIM_FUTURE.into());
        edges.push((names::state(d), CLAIM_FUTURE.into()));
        edges.push((JOURNEY.into(), CLAIM_FUTURE.into()));
        let latent: Vec<String> = self.confounder.iter().map(|_| CONFOUNDER.to_string()).collect();
        Dag::new(nodes, edges, latent)
    }

    /// Names of the state chain `S_0 … S_D` followed by the accident `Y_f`.
    pub fn chain(&self) -> Vec<String> {
        let mut c: Vec<String> = (0..=self.depth).map(names::state).collect();
        c.push(CLAIM_FUTURE.into());
        c
    }

    /// Mediator set `S_0 … S_D`.
    pub fn mediators(&self) -> Vec<String> {
        (0..=self.depth).map(names::state).collect()
    }
}

fn binary(p: f64) -> Vec<f64> {
    vec![1.0 - p, p]
}

fn value(parents: &[(&str, usize)], name: &str) -> usize {
    parents.iter().find(|(n, _)| *n == name).map(|&(_, v)| v).expect("parent present")
}

/// Emits the scenario as a discrete SCM over [`RoadRiskScenario::graph`].
pub fn build_scenario(s: &RoadRiskScenario) -> Result<DiscreteScm> {
    s.validate()?;
    let dag = s.graph()?;
    let card: Vec<usize> = dag
        .names()
        .iter()
        .map(|n| match n.as_str() {
            CLAIM_HISTORY => s.claim_history_card,
            DECISION => s.decision_card,
            t if t.starts_with("T_") => s.traffic_card,
            _ => 2,
        })
        .collect();
    let aggressive = s.decision_card - 1;
    DiscreteScm::from_fn(dag, card, |node, pa| match node {
        CLAIM_HISTORY => s.claim_history_prior.clone(),
        JOURNEY => binary(s.journey_rate[value(pa, CLAIM_HISTORY)]),
        CONFOUNDER => binary(s.confounder.as_ref().map_or(0.0, |c| c.prior)),
        DECISION => {
            let mut row = s.decision_prior[value(pa, JOURNEY)].clone();
            if let Some(c) = s.confounder.as_ref().filter(|_| value(pa, CONFOUNDER) == 1) {
                for p in &mut row {
                    *p *= 1.0 - c.decision_shift;
                }
                row[aggressive] += c.decision_shift;
            }
            row
        }
        CLAIM_FUTURE => {
            if value(pa, JOURNEY) == 0 {
                return vec![1.0, 0.0];
            }
            let base = s.crash_given_peril[value(pa, &names::state(s.depth))];
            let hazard = match &s.confounder {
                Some(c) if value(pa, CONFOUNDER) == 1 => c.accident_hazard,
                _ => 0.0,
            };
            binary(1.0 - (1.0 - base) * (1.0 - hazard))
        }
        t if t.starts_with("T_") => s.traffic_prior.clone(),
        st => {
            let i: usize = st[2..].parse().expect("state node");
            if i > 0 && value(pa, &names::state(i - 1)) == 1 {
                return vec![0.0, 1.0];
            }
            let (d, t) = (value(pa, DECISION), value(pa, &names::traffic(i)));
            binary(s.escalation[i][d][t])
        }
    })
}
