use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use causalrate::road::{build_scenario, RoadRiskScenario};
use causalrate::scm::DiscreteScm;
use causalrate::{fixtures, Dag, TemplateId};
use clap::Args;
use serde_json::Value;

/// Where the model comes from: a JSON file (graph, SCM or scenario,
/// detected by its keys), a built-in template, or a shipped fixture.
#[derive(Args)]
pub struct Source {
    /// Graph, SCM or scenario JSON file.
    #[arg(conflicts_with_all = ["template", "fixture"], required_unless_present_any = ["template", "fixture"])]
    file: Option<PathBuf>,
    /// Built-in graph, e.g. `Fig2c` or `Fig6Canonical(2)`.
    #[arg(long, conflicts_with = "fixture")]
    template: Option<String>,
    /// Shipped model or scenario, e.g. `default`.
    #[arg(long)]
    fixture: Option<String>,
}

pub enum Loaded {
    Graph(Dag),
    Model(DiscreteScm),
    Scenario(RoadRiskScenario),
}

impl Source {
    pub fn load(&self) -> Result<Loaded> {
        if let Some(t) = &self.template {
            return Ok(Loaded::Graph(t.parse::<TemplateId>()?.build()?));
        }
        if let Some(name) = &self.fixture {
            if fixtures::SCENARIOS.iter().any(|(n, _)| n == name) {
                return Ok(Loaded::Scenario(fixtures::scenario(name)?));
            }
            return Ok(Loaded::Model(fixtures::model(name)?));
        }
        let path = self.file.as_ref().expect("clap enforces a source");
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let Some(obj) = value.as_object() else { bail!("{}: expected a JSON object", path.display()) };
        Ok(if obj.contains_key("schema_version") {
            Loaded::Scenario(RoadRiskScenario::from_json(&text)?)
        } else if obj.contains_key("cpt") {
            Loaded::Model(DiscreteScm::from_json(&text)?)
        } else {
            Loaded::Graph(Dag::from_json(&text)?)
        })
    }
}

impl Loaded {
    pub fn graph(self) -> Result<Dag> {
        Ok(match self {
            Loaded::Graph(g) => g,
            Loaded::Model(m) => m.dag().clone(),
            Loaded::Scenario(s) => s.graph()?,
        })
    }

    /// Bare graphs get random CPTs drawn from `seed`.
    pub fn model(self, seed: u64) -> Result<DiscreteScm> {
        Ok(match self {
            Loaded::Graph(g) => DiscreteScm::random_binary(g, seed)?,
            Loaded::Model(m) => m,
            Loaded::Scenario(s) => build_scenario(&s)?,
        })
    }

    pub fn scenario(self) -> Result<RoadRiskScenario> {
        match self {
            Loaded::Scenario(s) => Ok(s),
            _ => bail!("expected a road-risk scenario"),
        }
    }
}
