//! Real-time road-risk scenario: a driving-state chain discretized by
//! time-to-accident, driven by a decision style and per-stage traffic, with
//! a latent confounder, a journey switch and claim history.
//!
//! Variables of the emitted model, in declaration order:
//!
//! | name | meaning | values |
//! |------|---------|--------|
//! | `Y_h` | claim history | `0, 1, …` (last value means "that many or more") |
//! | `J_o` | journey started | `0/1` |
//! | `U` | latent driver trait (absent under a null confounder) | `0/1` |
//! | `D` | decision style | `0 = cautious … last = aggressive` |
//! | `T_0…T_D` | traffic at each stage | `0 = light … last = dense` |
//! | `S_0…S_D` | peril level reached at stage `i` | `0/1`, absorbing |
//! | `Y_f` | accident, i.e. the final state `S_{D+1}` | `0/1` |
//!
//! The journey switch acts on the outcome: `J_o = 0` forces `Y_f = 0`.

mod journey;
mod oracle;
mod scenario;
mod tta;

pub use journey::{simulate_journeys, write_journeys_csv, JourneyRecord};
pub use oracle::{
    factorization_residual, ground_truth_effect, markov_consistency, naive_phyd, phyd_effect, state_chain,
};
pub use scenario::{build_scenario, Confounder, RoadRiskScenario, SCHEMA_VERSION};
pub use tta::tta_discretize;

impl RoadRiskScenario {
    /// The shipped default: depth 2, three decision styles, two traffic levels.
    pub fn default_scenario() -> Self {
        crate::fixtures::scenario("default").expect("shipped fixture is valid")
    }
}
