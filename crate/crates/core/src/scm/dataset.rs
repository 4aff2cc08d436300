use std::io::Write;

use crate::error::{Error, Result};
use crate::scm::JointTable;

/// Integer-coded samples. Row values follow `vars` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    vars: Vec<String>,
    card: Vec<usize>,
    rows: Vec<Vec<usize>>,
    seed: u64,
}

impl Dataset {
    pub(crate) fn from_parts(vars: Vec<String>, card: Vec<usize>, rows: Vec<Vec<usize>>, seed: u64) -> Self {
        Dataset { vars, card, rows, seed }
    }

    pub fn new(vars: Vec<String>, card: Vec<usize>, rows: Vec<Vec<usize>>, seed: u64) -> Result<Self> {
        if vars.len() != card.len() {
            return Err(Error::Shape("one cardinality per variable required".into()));
        }
        for row in &rows {
            if row.len() != vars.len() {
                return Err(Error::Shape(format!("row of width {} for {} variables", row.len(), vars.len())));
            }
            for (k, (&x, &c)) in row.iter().zip(&card).enumerate() {
                if x >= c {
                    return Err(Error::ValueOutOfRange { var: vars[k].clone(), value: x, card: c });
                }
            }
        }
        Ok(Dataset { vars, card, rows, seed })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn card(&self) -> &[usize] {
        &self.card
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, var: &str) -> Result<usize> {
        self.vars.iter().position(|v| v == var).ok_or_else(|| Error::UnknownVariable(var.to_string()))
    }

    /// Relative-frequency table over `vars`, in the order given.
    pub fn empirical_joint<S: AsRef<str>>(&self, vars: &[S]) -> Result<JointTable> {
        if self.rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let cols: Vec<usize> = vars.iter().map(|v| self.column(v.as_ref())).collect::<Result<_>>()?;
        let card: Vec<usize> = cols.iter().map(|&c| self.card[c]).collect();
        let mut counts = vec![0.0; card.iter().product()];
        for row in &self.rows {
            let idx = cols.iter().fold(0, |acc, &c| acc * self.card[c] + row[c]);
            counts[idx] += 1.0;
        }
        JointTable::from_weights(cols.iter().map(|&c| self.vars[c].clone()).collect(), card, counts)
    }

    /// CSV with a header row of variable names.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.vars)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| x.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empirical_point_mass_and_empty() {
        let d = Dataset::new(vec!["A".into(), "B".into()], vec![2, 2], vec![vec![1, 1]; 10], 0).unwrap();
        assert_eq!(d.empirical_joint(&["B"]).unwrap().mass(), [0.0, 1.0]);
        let empty = Dataset::new(vec!["A".into()], vec![2], vec![], 0).unwrap();
        assert_eq!(empty.empirical_joint(&["A"]).unwrap_err(), Error::EmptyDataset);
        assert!(matches!(d.empirical_joint(&["C"]), Err(Error::UnknownVariable(_))));
        assert!(Dataset::new(vec!["A".into()], vec![2], vec![vec![2]], 0).is_err());
    }

    #[test]
    fn csv_has_header() {
        let d = Dataset::new(vec!["A".into(), "B".into()], vec![2, 3], vec![vec![0, 2], vec![1, 0]], 0).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "A,B\n0,2\n1,0\n");
    }
}
