use serde::Serialize;

use crate::error::{Error, Result};
use crate::info::{conditional_mutual_information, mutual_information, Bits, CLAMP_TOL};
use crate::scm::{DiscreteScm, JointTable};

/// Predictive capacity of the rating schemes, in bits of information
/// about future claims.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityReport {
    /// `I(Y_h; Y_f)`: claim history alone.
    pub naive_bms: Bits,
    /// `I(Y_h, X_c; Y_f)`: history plus classification.
    pub augmented_bms: Bits,
    /// `I(X_c; Y_f)`.
    pub phyd_major: Bits,
    /// `I(Y_h; Y_f | X_c)`.
    pub phyd_minor: Bits,
}

pub fn rating_comparison<S: AsRef<str>>(j: &JointTable, yh: &[S], xc: &[S], yf: &[S]) -> Result<CapacityReport> {
    let mut both: Vec<&str> = yh.iter().map(AsRef::as_ref).collect();
    both.extend(xc.iter().map(AsRef::as_ref));
    let yf: Vec<&str> = yf.iter().map(AsRef::as_ref).collect();
    let (yh, xc) = both.split_at(yh.len());
    let r = CapacityReport {
        naive_bms: mutual_information(j, yh, &yf)?,
        augmented_bms: mutual_information(j, &both, &yf)?,
        phyd_major: mutual_information(j, xc, &yf)?,
        phyd_minor: conditional_mutual_information(j, yh, &yf, xc)?,
    };
    let split = (r.augmented_bms.value() - r.phyd_major.value() - r.phyd_minor.value()).abs();
    if r.augmented_bms.value() < r.naive_bms.value() - CLAMP_TOL || split > CLAMP_TOL {
        return Err(Error::NumericalInconsistency(format!("capacity identities violated: {r:?}")));
    }
    Ok(r)
}

/// How much of the dependence between treatment and outcome runs through
/// a latent confounder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfoundingGap {
    pub i_x_y: Bits,
    pub i_ux_y: Bits,
    pub i_u_y_given_x: Bits,
}

impl ConfoundingGap {
    /// `|I(X;Y) − (I(U,X;Y) − I(U;Y|X))|`.
    pub fn residual(&self) -> f64 {
        (self.i_x_y.value() - (self.i_ux_y.value() - self.i_u_y_given_x.value())).abs()
    }
}

/// Evaluated on the full joint, latent `u` included: only a synthetic model
/// can do this.
pub fn confounding_gap<S: AsRef<str>>(scm: &DiscreteScm, x: &[S], y: &str, u: &str) -> Result<ConfoundingGap> {
    if !scm.dag().is_latent(u) {
        scm.dag().index_of(u)?;
        return Err(Error::NotLatent(u.to_string()));
    }
    let j = scm.exact_joint()?;
    let xs: Vec<&str> = x.iter().map(AsRef::as_ref).collect();
    let mut ux = vec![u];
    ux.extend(&xs);
    let g = ConfoundingGap {
        i_x_y: mutual_information(&j, &xs, &[y])?,
        i_ux_y: mutual_information(&j, &ux, &[y])?,
        i_u_y_given_x: conditional_mutual_information(&j, &[u], &[y], &xs)?,
    };
    if g.residual() > CLAMP_TOL {
        return Err(Error::NumericalInconsistency(format!("confounding gap identity residual {}", g.residual())));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Dag, TemplateId};

    #[test]
    fn fig1d_history_adds_nothing() {
        let scm = DiscreteScm::random_binary(TemplateId::Fig1d.build().unwrap(), 3).unwrap();
        let r = rating_comparison(&scm.exact_joint().unwrap(), &["Y_h"], &["X_c"], &["Y_f"]).unwrap();
        assert_eq!(r.phyd_minor, Bits::ZERO);
        assert!((r.augmented_bms.value() - r.phyd_major.value()).abs() < 1e-12);
        assert!(r.naive_bms.value() > 0.0);
    }

    #[test]
    fn fig2c_history_keeps_value() {
        let scm = DiscreteScm::random_binary(TemplateId::Fig2c.build().unwrap(), 3).unwrap();
        let r = rating_comparison(&scm.exact_joint().unwrap(), &["Y_h"], &["X_c"], &["Y_f"]).unwrap();
        assert!(r.phyd_minor.value() > 0.0);
    }

    #[test]
    fn overlapping_sets_rejected() {
        let scm = DiscreteScm::random_binary(TemplateId::Fig1d.build().unwrap(), 3).unwrap();
        let err = rating_comparison(&scm.exact_joint().unwrap(), &["Y_h"], &["Y_h"], &["Y_f"]).unwrap_err();
        assert_eq!(err, Error::Overlap("Y_h".into()));
    }

    #[test]
    fn deterministic_confounder_hides_treatment() {
        // Y_f copies U and ignores X.
        let dag = Dag::new(["U", "X", "Y"], [("U", "X"), ("U", "Y"), ("X", "Y")], ["U"]).unwrap();
        let cpt = vec![vec![0.5, 0.5], vec![0.7, 0.3, 0.3, 0.7], vec![1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]];
        let scm = DiscreteScm::from_flat(dag, vec![2, 2, 2], cpt).unwrap();
        let g = confounding_gap(&scm, &["X"], "Y", "U").unwrap();
        assert!((g.i_ux_y.value() - 1.0).abs() < 1e-12);
        assert!(g.i_u_y_given_x.value() > 0.8);
        assert!(matches!(confounding_gap(&scm, &["U"], "Y", "X"), Err(Error::NotLatent(_))));
    }
}
