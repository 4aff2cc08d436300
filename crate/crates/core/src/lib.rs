//! Discrete causal-inference toolkit for deciding whether a rating variable
//! such as claim history carries causal signal about future claims, and for
//! identifying the effect of driving behaviour on claims by front-door
//! adjustment.

pub mod error;
pub mod fixtures;
pub mod graph;
pub mod identify;
pub mod info;
pub mod rng;
pub mod road;
pub mod scm;

pub use error::{Error, Result};
pub use graph::{Dag, TemplateId};
pub use identify::{CapacityReport, EffectQuery, EffectTable, EliminationVerdict, Verdict};
pub use info::Bits;
pub use road::{JourneyRecord, RoadRiskScenario};
pub use scm::{Dataset, DiscreteScm, JointTable};
