//! Causal-effect identification and variable-elimination verdicts.
//!
//! Adjustment estimators read an observational [`JointTable`] that need not
//! (and in realistic use does not) contain latent variables. The surgery
//! oracle is the only routine that looks at a full [`DiscreteScm`].
//!
//! [`JointTable`]: crate::scm::JointTable
//! [`DiscreteScm`]: crate::scm::DiscreteScm

mod adjust;
mod capacity;
mod query;
mod search;
mod verdict;

pub use adjust::{backdoor_adjust, backdoor_adjust_given, frontdoor_adjust, naive_conditional, surgery_oracle};
pub use capacity::{confounding_gap, rating_comparison, CapacityReport, ConfoundingGap};
pub use query::{EffectQuery, EffectRow, EffectTable, Target};
pub use search::{identify_effect, Estimate, Identification, Method};
pub(crate) use verdict::rule2_exchange_check;
pub use verdict::{noise_verdict, rule1_deletion_check, EliminationVerdict, Verdict};
