//! Plug-in entropy and mutual information over exact joint tables, in bits.
//!
//! Estimates from samples come from composing [`Dataset::empirical_joint`]
//! with these functions; no bias correction is applied.
//!
//! [`Dataset::empirical_joint`]: crate::scm::Dataset::empirical_joint

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scm::JointTable;

/// Residues in `[-CLAMP_TOL, 0)` clamp to zero; anything lower is an error.
pub const CLAMP_TOL: f64 = 1e-9;

/// An information quantity in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bits(f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);

    pub fn value(self) -> f64 {
        self.0
    }

    /// Clamps a computed information value into the nonnegative range.
    pub fn from_information(value: f64, what: &str) -> Result<Bits> {
        if value.is_nan() || value < -CLAMP_TOL {
            return Err(Error::NumericalInconsistency(format!("{what} = {value} bits")));
        }
        Ok(Bits(value.max(0.0)))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} bits", self.0)
    }
}

fn plogp_sum(mass: &[f64]) -> f64 {
    -mass.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum::<f64>()
}

fn check_disjoint<S: AsRef<str>>(sets: &[&[S]]) -> Result<()> {
    let mut seen: Vec<&str> = Vec::new();
    for set in sets {
        for v in set.iter() {
            let v = v.as_ref();
            if seen.contains(&v) {
                return Err(Error::Overlap(v.to_string()));
            }
            seen.push(v);
        }
    }
    Ok(())
}

fn concat<'a, S: AsRef<str>>(sets: &[&'a [S]]) -> Vec<&'a str> {
    sets.iter().flat_map(|s| s.iter().map(AsRef::as_ref)).collect()
}

fn raw_entropy(j: &JointTable, vars: &[&str]) -> Result<f64> {
    if vars.is_empty() {
        return Ok(0.0);
    }
    Ok(plogp_sum(j.marginal(vars)?.mass()))
}

/// `H(X)`.
pub fn entropy<S: AsRef<str>>(j: &JointTable, x: &[S]) -> Result<Bits> {
    if x.is_empty() {
        return Err(Error::EmptySet("X"));
    }
    check_disjoint(&[x])?;
    Ok(Bits(raw_entropy(j, &concat(&[x]))?))
}

/// `H(X | Z) = H(X, Z) - H(Z)`.
pub fn conditional_entropy<S: AsRef<str>>(j: &JointTable, x: &[S], z: &[S]) -> Result<Bits> {
    if x.is_empty() {
        return Err(Error::EmptySet("X"));
    }
    check_disjoint(&[x, z])?;
    let h = raw_entropy(j, &concat(&[x, z]))? - raw_entropy(j, &concat(&[z]))?;
    Bits::from_information(h, "conditional entropy")
}

/// `I(X; Y) = H(Y) - H(Y | X)`.
pub fn mutual_information<S: AsRef<str>>(j: &JointTable, x: &[S], y: &[S]) -> Result<Bits> {
    conditional_mutual_information(j, x, y, &[])
}

/// `I(X; Y | Z)`, computed both from entropies and by direct summation of
/// `p(x,y,z) log p(x,y,z) p(z) / (p(x,z) p(y,z))`; the two must agree to 1e-9.
pub fn conditional_mutual_information<S: AsRef<str>>(j: &JointTable, x: &[S], y: &[S], z: &[S]) -> Result<Bits> {
    if x.is_empty() {
        return Err(Error::EmptySet("X"));
    }
    if y.is_empty() {
        return Err(Error::EmptySet("Y"));
    }
    check_disjoint(&[x, y, z])?;
    let (xn, yn, zn) = (concat(&[x]), concat(&[y]), concat(&[z]));
    let via_entropy = raw_entropy(j, &concat(&[x, z]))? + raw_entropy(j, &concat(&[y, z]))?
        - raw_entropy(j, &concat(&[x, y, z]))?
        - raw_entropy(j, &zn)?;
    let direct = cmi_direct(j, &xn, &yn, &zn)?;
    if (via_entropy - direct).abs() > CLAMP_TOL {
        return Err(Error::NumericalInconsistency(format!(
            "conditional mutual information routes disagree: {via_entropy} vs {direct}"
        )));
    }
    Bits::from_information(via_entropy, "conditional mutual information")
}

fn cmi_direct(j: &JointTable, x: &[&str], y: &[&str], z: &[&str]) -> Result<f64> {
    let order: Vec<&str> = x.iter().chain(y).chain(z).copied().collect();
    let t = j.marginal_in_order(&order)?;
    let (nx, ny) = (x.len(), y.len());
    let xz: Vec<&str> = x.iter().chain(z).copied().collect();
    let yz: Vec<&str> = y.iter().chain(z).copied().collect();
    let (pxz, pyz, pz) = (t.marginal_in_order(&xz)?, t.marginal_in_order(&yz)?, t.marginal_in_order(z)?);
    let mut total = 0.0;
    let mut buf = Vec::with_capacity(order.len());
    t.for_each_cell(|a, p| {
        if p <= 0.0 {
            return;
        }
        buf.clear();
        buf.extend_from_slice(&a[..nx]);
        buf.extend_from_slice(&a[nx + ny..]);
        let p_xz = pxz.get(&buf);
        let p_yz = pyz.get(&a[nx..]);
        let p_z = pz.get(&a[nx + ny..]);
        total += p * ((p * p_z) / (p_xz * p_yz)).log2();
    });
    Ok(total)
}

/// Both chain-rule expansions of `I(A, B; Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainDecomposition {
    pub i_ab_y: Bits,
    pub i_a_y: Bits,
    pub i_b_y_given_a: Bits,
    pub i_b_y: Bits,
    pub i_a_y_given_b: Bits,
}

impl ChainDecomposition {
    /// Largest violation of `I(A,B;Y) = I(A;Y) + I(B;Y|A) = I(B;Y) + I(A;Y|B)`.
    pub fn residual(&self) -> f64 {
        let total = self.i_ab_y.0;
        (total - self.i_a_y.0 - self.i_b_y_given_a.0).abs().max((total - self.i_b_y.0 - self.i_a_y_given_b.0).abs())
    }
}

pub fn chain_decompositions<S: AsRef<str>>(j: &JointTable, a: &[S], b: &[S], y: &[S]) -> Result<ChainDecomposition> {
    check_disjoint(&[a, b, y])?;
    let ab: Vec<&str> = concat(&[a, b]);
    let yv: Vec<&str> = concat(&[y]);
    let d = ChainDecomposition {
        i_ab_y: mutual_information(j, &ab, &yv)?,
        i_a_y: mutual_information(j, a, y)?,
        i_b_y_given_a: conditional_mutual_information(j, b, y, a)?,
        i_b_y: mutual_information(j, b, y)?,
        i_a_y_given_b: conditional_mutual_information(j, a, y, b)?,
    };
    if d.residual() > CLAMP_TOL {
        return Err(Error::NumericalInconsistency(format!("chain rule residual {}", d.residual())));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(vars: &[&str], card: Vec<usize>, mass: Vec<f64>) -> JointTable {
        JointTable::new(vars.iter().map(|v| v.to_string()).collect(), card, mass).unwrap()
    }

    fn pair(p00: f64, p01: f64, p10: f64, p11: f64) -> JointTable {
        table(&["A", "B"], vec![2, 2], vec![p00, p01, p10, p11])
    }

    #[test]
    fn entropy_basics() {
        assert_eq!(entropy(&table(&["A"], vec![2], vec![0.5, 0.5]), &["A"]).unwrap().value(), 1.0);
        assert_eq!(entropy(&table(&["A"], vec![2], vec![1.0, 0.0]), &["A"]).unwrap().value(), 0.0);
        assert_eq!(entropy(&table(&["A"], vec![4], vec![0.25; 4]), &["A"]).unwrap().value(), 2.0);
        assert!(matches!(entropy(&pair(0.25, 0.25, 0.25, 0.25), &["C"]), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn conditional_entropy_cases() {
        let copy = pair(0.5, 0.0, 0.0, 0.5);
        assert_eq!(conditional_entropy(&copy, &["B"], &["A"]).unwrap().value(), 0.0);
        let indep = pair(0.06, 0.14, 0.24, 0.56);
        let hb = entropy(&indep, &["B"]).unwrap().value();
        assert!((conditional_entropy(&indep, &["B"], &["A"]).unwrap().value() - hb).abs() < 1e-12);
        assert!(matches!(conditional_entropy(&indep, &["A"], &["A"]), Err(Error::Overlap(_))));
    }

    #[test]
    fn conditional_entropy_matches_direct_double_sum() {
        let m = [0.1, 0.05, 0.2, 0.15, 0.3, 0.2];
        let j = table(&["X", "Z"], vec![2, 3], m.to_vec());
        let pz: Vec<f64> = (0..3).map(|z| m[z] + m[3 + z]).collect();
        let direct: f64 = (0..2)
            .flat_map(|x| (0..3).map(move |z| (x, z)))
            .map(|(x, z)| {
                let p = m[3 * x + z];
                -p * (p / pz[z]).log2()
            })
            .sum();
        assert!((conditional_entropy(&j, &["X"], &["Z"]).unwrap().value() - direct).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_cases() {
        assert!(mutual_information(&pair(0.25, 0.25, 0.25, 0.25), &["A"], &["B"]).unwrap().value().abs() < 1e-15);
        assert!((mutual_information(&pair(0.5, 0.0, 0.0, 0.5), &["A"], &["B"]).unwrap().value() - 1.0).abs() < 1e-15);
        // plug-in sum: 2*0.4*log2(0.4/0.25) + 2*0.1*log2(0.1/0.25)
        let oracle = 0.8 * (1.6f64).log2() + 0.2 * (0.4f64).log2();
        let mi = mutual_information(&pair(0.4, 0.1, 0.1, 0.4), &["A"], &["B"]).unwrap().value();
        assert!((mi - oracle).abs() < 1e-12);
        assert!((mi - 0.278).abs() < 0.001);
    }

    #[test]
    fn markov_chain_has_zero_cmi() {
        // A -> B -> C with noisy copies
        let (pa, flip1, flip2) = (0.3, 0.2, 0.1);
        let mut mass = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let p_a = if a == 1 { pa } else { 1.0 - pa };
                    let p_b = if a == b { 1.0 - flip1 } else { flip1 };
                    let p_c = if b == c { 1.0 - flip2 } else { flip2 };
                    mass.push(p_a * p_b * p_c);
                }
            }
        }
        let j = table(&["A", "B", "C"], vec![2, 2, 2], mass);
        assert!(conditional_mutual_information(&j, &["A"], &["C"], &["B"]).unwrap().value() < 1e-9);
        let mi = mutual_information(&j, &["A"], &["C"]).unwrap();
        let cmi = conditional_mutual_information::<&str>(&j, &["A"], &["C"], &[]).unwrap();
        assert_eq!(mi, cmi);
    }

    #[test]
    fn redundant_copies_decompose() {
        let j = table(&["A", "B", "Y"], vec![2, 2, 2], vec![0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
        let d = chain_decompositions(&j, &["A"], &["B"], &["Y"]).unwrap();
        assert!((d.i_ab_y.value() - 1.0).abs() < 1e-12);
        assert!(d.i_b_y_given_a.value().abs() < 1e-12);
        let indep = table(&["A", "B", "Y"], vec![2, 2, 2], vec![0.125; 8]);
        let z = chain_decompositions(&indep, &["A"], &["B"], &["Y"]).unwrap();
        for v in [z.i_ab_y, z.i_a_y, z.i_b_y, z.i_a_y_given_b, z.i_b_y_given_a] {
            assert!(v.value().abs() < 1e-12);
        }
    }

    #[test]
    fn clamp_rules() {
        assert_eq!(Bits::from_information(-5e-10, "x").unwrap(), Bits::ZERO);
        assert!(Bits::from_information(-2e-9, "x").is_err());
    }
}
