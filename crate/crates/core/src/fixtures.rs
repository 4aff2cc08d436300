//! Shipped example models. Every constant here is invented for
//! illustration and testing; none is estimated from data.

use crate::error::{Error, Result};
use crate::road::RoadRiskScenario;
use crate::scm::DiscreteScm;

/// Road-risk scenarios, by name.
pub const SCENARIOS: &[(&str, &str)] = &[
    ("default", include_str!("../fixtures/default_scenario.json")),
    ("null_confounder", include_str!("../fixtures/null_confounder_scenario.json")),
];

/// Small SCMs on the confounder templates, by name.
pub const MODELS: &[(&str, &str)] = &[
    // Latent U drives both classification and future claims hard.
    ("fig2b_strong_confounder", include_str!("../fixtures/fig2b_strong_confounder.json")),
    // Mediated classification effect with a latent confounder.
    ("fig3_confounded", include_str!("../fixtures/fig3_confounded.json")),
];

fn lookup<'a>(table: &'a [(&str, &'a str)], name: &str) -> Result<&'a str> {
    table
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| Error::Parameter(format!("no fixture named `{name}`")))
}

pub fn scenario(name: &str) -> Result<RoadRiskScenario> {
    RoadRiskScenario::from_json(lookup(SCENARIOS, name)?)
}

pub fn model(name: &str) -> Result<DiscreteScm> {
    DiscreteScm::from_json(lookup(MODELS, name)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_load() {
        for (name, _) in SCENARIOS {
            scenario(name).unwrap();
        }
        for (name, _) in MODELS {
            model(name).unwrap();
        }
        assert!(model("nope").is_err());
    }

    #[test]
    fn parent_order_in_confounder_fixture() {
        let m = model("fig2b_strong_confounder").unwrap();
        assert_eq!(m.dag().parents("X_c").unwrap(), ["U", "Y_h"]);
        assert_eq!(m.cpt_row("X_c", &[1, 0]).unwrap(), [0.3, 0.7]);
    }
}
