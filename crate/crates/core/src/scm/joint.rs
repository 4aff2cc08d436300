use serde::Serialize;

use crate::error::{Error, Result};

/// Normalization tolerance shared by CPT rows and joint tables.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Exact probability mass function over an ordered list of discrete
/// variables. `mass` is row-major: the last variable varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointTable {
    vars: Vec<String>,
    card: Vec<usize>,
    mass: Vec<f64>,
}

impl JointTable {
    pub fn new(vars: Vec<String>, card: Vec<usize>, mass: Vec<f64>) -> Result<Self> {
        let t = Self::unchecked(vars, card, mass)?;
        let total: f64 = t.mass.iter().sum();
        if let Some(bad) = t.mass.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(Error::Shape(format!("negative or non-finite mass {bad}")));
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NumericalInconsistency(format!("joint mass sums to {total}")));
        }
        Ok(t)
    }

    fn unchecked(vars: Vec<String>, card: Vec<usize>, mass: Vec<f64>) -> Result<Self> {
        if vars.len() != card.len() {
            return Err(Error::Shape(format!("{} variables but {} cardinalities", vars.len(), card.len())));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::DuplicateNode(v.clone()));
            }
        }
        let cells: usize = card.iter().product();
        if cells != mass.len() {
            return Err(Error::Shape(format!("{} cells expected, {} given", cells, mass.len())));
        }
        Ok(JointTable { vars, card, mass })
    }

    /// Builds a table from nonnegative weights, dividing by their total once.
    pub fn from_weights(vars: Vec<String>, card: Vec<usize>, mut weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::ZeroProbabilityEvidence("all weights are zero".into()));
        }
        for w in &mut weights {
            *w /= total;
        }
        JointTable::new(vars, card, weights)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn card(&self) -> &[usize] {
        &self.card
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn position(&self, var: &str) -> Result<usize> {
        self.vars.iter().position(|v| v == var).ok_or_else(|| Error::UnknownVariable(var.to_string()))
    }

    pub fn card_of(&self, var: &str) -> Result<usize> {
        Ok(self.card[self.position(var)?])
    }

    pub fn contains(&self, var: &str) -> bool {
        self.vars.iter().any(|v| v == var)
    }

    fn positions<S: AsRef<str>>(&self, vars: &[S]) -> Result<Vec<usize>> {
        let pos: Vec<usize> = vars.iter().map(|v| self.position(v.as_ref())).collect::<Result<_>>()?;
        for (i, p) in pos.iter().enumerate() {
            if pos[..i].contains(p) {
                return Err(Error::Overlap(self.vars[*p].clone()));
            }
        }
        Ok(pos)
    }

    /// Flat index of a full assignment.
    pub fn index_of(&self, assignment: &[usize]) -> usize {
        debug_assert_eq!(assignment.len(), self.card.len());
        assignment.iter().zip(&self.card).fold(0, |acc, (&a, &c)| acc * c + a)
    }

    /// Probability of a full assignment in `vars` order.
    pub fn get(&self, assignment: &[usize]) -> f64 {
        self.mass[self.index_of(assignment)]
    }

    /// Sums out everything not in `keep`; kept variables stay in this table's order.
    pub fn marginal<S: AsRef<str>>(&self, keep: &[S]) -> Result<JointTable> {
        let mut pos = self.positions(keep)?;
        pos.sort_unstable();
        Ok(self.project(&pos))
    }

    /// Marginal over `order`, with variables laid out in exactly that order.
    pub fn marginal_in_order<S: AsRef<str>>(&self, order: &[S]) -> Result<JointTable> {
        let pos = self.positions(order)?;
        Ok(self.project(&pos))
    }

    fn project(&self, pos: &[usize]) -> JointTable {
        let n = self.card.len();
        let out_card: Vec<usize> = pos.iter().map(|&p| self.card[p]).collect();
        let mut out_stride = vec![0usize; n];
        let mut s = 1;
        for (k, &p) in pos.iter().enumerate().rev() {
            out_stride[p] = s;
            s *= out_card[k];
        }
        let mut out = vec![0.0; s.max(1)];
        if n == 0 {
            out[0] = self.mass.iter().sum();
        } else {
            let mut digit = vec![0usize; n];
            let mut t = 0usize;
            for &p in &self.mass {
                out[t] += p;
                // odometer increment
                let mut k = n;
                while k > 0 {
                    k -= 1;
                    digit[k] += 1;
                    t += out_stride[k];
                    if digit[k] < self.card[k] {
                        break;
                    }
                    t -= out_stride[k] * self.card[k];
                    digit[k] = 0;
                }
            }
        }
        JointTable { vars: pos.iter().map(|&p| self.vars[p].clone()).collect(), card: out_card, mass: out }
    }

    /// Conditional distribution of the remaining variables given `evidence`.
    /// Evidence variables are dropped from the result.
    pub fn condition<S: AsRef<str>>(&self, evidence: &[(S, usize)]) -> Result<JointTable> {
        let mut fixed: Vec<Option<usize>> = vec![None; self.vars.len()];
        for (var, value) in evidence {
            let p = self.position(var.as_ref())?;
            if *value >= self.card[p] {
                return Err(Error::ValueOutOfRange { var: self.vars[p].clone(), value: *value, card: self.card[p] });
            }
            if fixed[p].is_some_and(|v| v != *value) {
                return Err(Error::ZeroProbabilityEvidence(describe(evidence)));
            }
            fixed[p] = Some(*value);
        }
        let keep: Vec<usize> = (0..self.vars.len()).filter(|&p| fixed[p].is_none()).collect();
        let mut weights = vec![0.0; keep.iter().map(|&p| self.card[p]).product()];
        let mut digit = vec![0usize; self.vars.len()];
        for &m in &self.mass {
            if fixed.iter().zip(&digit).all(|(f, d)| f.is_none_or(|v| v == *d)) {
                let t = keep.iter().fold(0, |acc, &p| acc * self.card[p] + digit[p]);
                weights[t] += m;
            }
            let mut k = digit.len();
            while k > 0 {
                k -= 1;
                digit[k] += 1;
                if digit[k] < self.card[k] {
                    break;
                }
                digit[k] = 0;
            }
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::ZeroProbabilityEvidence(describe(evidence)));
        }
        for w in &mut weights {
            *w /= total;
        }
        Ok(JointTable {
            vars: keep.iter().map(|&p| self.vars[p].clone()).collect(),
            card: keep.iter().map(|&p| self.card[p]).collect(),
            mass: weights,
        })
    }

    /// Probability of a partial assignment.
    pub fn prob<S: AsRef<str>>(&self, partial: &[(S, usize)]) -> Result<f64> {
        let names: Vec<&str> = partial.iter().map(|(v, _)| v.as_ref()).collect();
        let m = self.marginal_in_order(&names)?;
        let values: Vec<usize> = partial.iter().map(|(_, v)| *v).collect();
        for (i, &v) in values.iter().enumerate() {
            if v >= m.card[i] {
                return Err(Error::ValueOutOfRange { var: m.vars[i].clone(), value: v, card: m.card[i] });
            }
        }
        Ok(m.get(&values))
    }

    /// Total variation distance to a table over the same variables in the same order.
    pub fn total_variation(&self, other: &JointTable) -> Result<f64> {
        if self.vars != other.vars || self.card != other.card {
            return Err(Error::Shape("total variation between tables over different variables".into()));
        }
        Ok(0.5 * self.mass.iter().zip(&other.mass).map(|(a, b)| (a - b).abs()).sum::<f64>())
    }

    /// Largest absolute cell difference; tables must share variables and order.
    pub fn max_abs_diff(&self, other: &JointTable) -> Result<f64> {
        if self.vars != other.vars || self.card != other.card {
            return Err(Error::Shape("comparison between tables over different variables".into()));
        }
        Ok(self.mass.iter().zip(&other.mass).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// Visits every cell with its full assignment.
    pub fn for_each_cell<F: FnMut(&[usize], f64)>(&self, mut f: F) {
        let mut digit = vec![0usize; self.vars.len()];
        for &m in &self.mass {
            f(&digit, m);
            let mut k = digit.len();
            while k > 0 {
                k -= 1;
                digit[k] += 1;
                if digit[k] < self.card[k] {
                    break;
                }
                digit[k] = 0;
            }
        }
    }
}

fn describe<S: AsRef<str>>(evidence: &[(S, usize)]) -> String {
    let parts: Vec<String> = evidence.iter().map(|(v, x)| format!("{}={x}", v.as_ref())).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Mixed-radix enumeration of all assignments for the given cardinalities,
/// most significant first.
pub fn assignments(card: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = card.iter().product();
    (0..total).map(move |mut i| {
        let mut out = vec![0; card.len()];
        for k in (0..card.len()).rev() {
            out[k] = i % card[k];
            i /= card[k];
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn copy_chain() -> JointTable {
        JointTable::new(s(&["A", "B"]), vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap()
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(JointTable::new(s(&["A"]), vec![2], vec![0.5]), Err(Error::Shape(_))));
        assert!(JointTable::new(s(&["A"]), vec![2], vec![0.5, 0.4]).is_err());
        assert!(JointTable::new(s(&["A"]), vec![2], vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn marginal_of_independent_pair() {
        let a = [0.3, 0.7];
        let b = [0.2, 0.5, 0.3];
        let mass = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        let j = JointTable::new(s(&["A", "B"]), vec![2, 3], mass).unwrap();
        let ma = j.marginal(&["A"]).unwrap();
        assert!(ma.mass().iter().zip(a).all(|(x, y)| (x - y).abs() < 1e-15));
        let mb = j.marginal(&["B"]).unwrap();
        assert!(mb.mass().iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15));
        let swapped = j.marginal_in_order(&["B", "A"]).unwrap();
        assert_eq!(swapped.vars(), ["B", "A"]);
        assert!((swapped.get(&[2, 1]) - 0.7 * 0.3).abs() < 1e-15);
    }

    #[test]
    fn condition_on_copy() {
        let c = copy_chain().condition(&[("A", 1)]).unwrap();
        assert_eq!(c.vars(), ["B"]);
        assert_eq!(c.mass(), [0.0, 1.0]);
        assert!(matches!(
            JointTable::new(s(&["A", "B"]), vec![2, 2], vec![1.0, 0.0, 0.0, 0.0]).unwrap().condition(&[("A", 1)]),
            Err(Error::ZeroProbabilityEvidence(_))
        ));
        assert!(matches!(copy_chain().condition(&[("A", 2)]), Err(Error::ValueOutOfRange { .. })));
    }

    #[test]
    fn prob_of_partial_assignment() {
        let j = copy_chain();
        assert_eq!(j.prob(&[("B", 1)]).unwrap(), 0.5);
        assert_eq!(j.prob(&[("B", 1), ("A", 0)]).unwrap(), 0.0);
    }

    #[test]
    fn assignments_are_mixed_radix() {
        let all: Vec<_> = assignments(&[2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[1], [0, 1]);
        assert_eq!(all[3], [1, 0]);
    }
}
