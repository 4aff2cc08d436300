use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::is_identifier;

/// A variable, optionally pinned to one value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Target {
    pub var: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<usize>,
}

impl Target {
    pub fn all(var: impl Into<String>) -> Self {
        Target { var: var.into(), value: None }
    }

    pub fn at(var: impl Into<String>, value: usize) -> Self {
        Target { var: var.into(), value: Some(value) }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(v) => write!(f, "{}={v}", self.var),
            None => f.write_str(&self.var),
        }
    }
}

/// `P(outcome | do(interventions), observed)`.
///
/// Text form: `P(Y_f | do(J_o=1, D), Y_h)`; the `P( )` wrapper is optional.
/// Unpinned variables request the distribution for every value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EffectQuery {
    pub outcome: String,
    pub interventions: Vec<Target>,
    pub observed: Vec<Target>,
}

impl EffectQuery {
    pub fn new(outcome: impl Into<String>, interventions: Vec<Target>, observed: Vec<Target>) -> Result<Self> {
        let q = EffectQuery { outcome: outcome.into(), interventions, observed };
        let mut seen = vec![q.outcome.as_str()];
        for t in q.interventions.iter().chain(&q.observed) {
            if seen.contains(&t.var.as_str()) {
                return Err(Error::Overlap(t.var.clone()));
            }
            seen.push(&t.var);
        }
        Ok(q)
    }

    pub fn do_vars(&self) -> Vec<&str> {
        self.interventions.iter().map(|t| t.var.as_str()).collect()
    }

    pub fn observed_vars(&self) -> Vec<&str> {
        self.observed.iter().map(|t| t.var.as_str()).collect()
    }
}

impl fmt::Display for EffectQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({}", self.outcome)?;
        let mut parts = Vec::new();
        if !self.interventions.is_empty() {
            let d: Vec<String> = self.interventions.iter().map(Target::to_string).collect();
            parts.push(format!("do({})", d.join(", ")));
        }
        parts.extend(self.observed.iter().map(Target::to_string));
        if !parts.is_empty() {
            write!(f, " | {}", parts.join(", "))?;
        }
        f.write_str(")")
    }
}

fn parse_target(text: &str, whole: &str) -> Result<Target> {
    let bad = || Error::QuerySyntax(whole.to_string());
    let (var, value) = match text.split_once('=') {
        Some((v, x)) => (v.trim(), Some(x.trim().parse::<usize>().map_err(|_| bad())?)),
        None => (text.trim(), None),
    };
    if !is_identifier(var) {
        return Err(bad());
    }
    Ok(Target { var: var.to_string(), value })
}

impl FromStr for EffectQuery {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::QuerySyntax(s.to_string());
        let mut body = s.trim();
        if let Some(inner) = body.strip_prefix("P(") {
            body = inner.strip_suffix(')').ok_or_else(bad)?;
        }
        let (outcome, rest) = match body.split_once('|') {
            Some((o, r)) => (o.trim(), r.trim()),
            None => (body.trim(), ""),
        };
        if !is_identifier(outcome) {
            return Err(bad());
        }
        let mut interventions = Vec::new();
        let mut observed = Vec::new();
        let mut rest = rest;
        while !rest.is_empty() {
            if let Some(after) = rest.strip_prefix("do(") {
                let close = after.find(')').ok_or_else(bad)?;
                for item in after[..close].split(',').filter(|t| !t.trim().is_empty()) {
                    interventions.push(parse_target(item, s)?);
                }
                rest = after[close + 1..].trim_start();
            } else {
                let end = rest.find(',').unwrap_or(rest.len());
                observed.push(parse_target(&rest[..end], s)?);
                rest = &rest[end..];
            }
            rest = rest.trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
                if rest.is_empty() {
                    return Err(bad());
                }
            } else if !rest.is_empty() {
                return Err(bad());
            }
        }
        EffectQuery::new(outcome, interventions, observed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectRow {
    #[serde(rename = "do")]
    pub do_values: Vec<usize>,
    #[serde(rename = "given")]
    pub given_values: Vec<usize>,
    #[serde(rename = "p")]
    pub dist: Vec<f64>,
}

/// `P(outcome | do(do_vars = ·), given_vars = ·)` for every listed row.
/// Rows run over do-configurations (mixed radix, first variable most
/// significant) and, within each, over given-configurations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectTable {
    pub outcome: String,
    pub do_vars: Vec<String>,
    pub given_vars: Vec<String>,
    pub rows: Vec<EffectRow>,
}

impl EffectTable {
    pub fn row(&self, do_values: &[usize], given_values: &[usize]) -> Option<&[f64]> {
        self.rows.iter().find(|r| r.do_values == do_values && r.given_values == given_values).map(|r| r.dist.as_slice())
    }

    fn paired<'a>(&'a self, other: &'a EffectTable) -> Result<impl Iterator<Item = (&'a [f64], &'a [f64])> + 'a> {
        if self.outcome != other.outcome || self.do_vars != other.do_vars || self.given_vars != other.given_vars {
            return Err(Error::Shape("effect tables answer different queries".into()));
        }
        if self.rows.len() != other.rows.len() {
            return Err(Error::Shape("effect tables have different rows".into()));
        }
        let pairs: Vec<(&[f64], &[f64])> = self
            .rows
            .iter()
            .map(|r| {
                other
                    .row(&r.do_values, &r.given_values)
                    .map(|o| (r.dist.as_slice(), o))
                    .ok_or_else(|| Error::Shape("effect tables have different rows".into()))
            })
            .collect::<Result<_>>()?;
        Ok(pairs.into_iter())
    }

    /// Largest absolute difference over all cells.
    pub fn max_abs_diff(&self, other: &EffectTable) -> Result<f64> {
        Ok(self.paired(other)?.flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs())).fold(0.0, f64::max))
    }

    /// Largest per-row total variation distance.
    pub fn max_total_variation(&self, other: &EffectTable) -> Result<f64> {
        Ok(self
            .paired(other)?
            .map(|(a, b)| 0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
            .fold(0.0, f64::max))
    }

    /// Largest deviation of any row sum from 1.
    pub fn normalization_error(&self) -> f64 {
        self.rows.iter().map(|r| (r.dist.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Keeps rows whose do- and given-values match every pinned target of `q`.
    pub fn select(&self, q: &EffectQuery) -> Result<EffectTable> {
        let pins = |vars: &[String], targets: &[Target]| -> Result<Vec<(usize, usize)>> {
            targets
                .iter()
                .filter_map(|t| t.value.map(|v| (&t.var, v)))
                .map(|(var, v)| {
                    vars.iter()
                        .position(|x| x == var)
                        .map(|p| (p, v))
                        .ok_or_else(|| Error::UnknownVariable(var.clone()))
                })
                .collect()
        };
        let do_pins = pins(&self.do_vars, &q.interventions)?;
        let given_pins = pins(&self.given_vars, &q.observed)?;
        let rows = self
            .rows
            .iter()
            .filter(|r| do_pins.iter().all(|&(p, v)| r.do_values[p] == v))
            .filter(|r| given_pins.iter().all(|&(p, v)| r.given_values[p] == v))
            .cloned()
            .collect();
        Ok(EffectTable { rows, ..self.clone() })
    }

    /// Moves the given variables at `positions` into the do-list, appending
    /// them after the existing do-variables, then reorders the do-list to
    /// `order`. Used once a rule-2 exchange has licensed treating those
    /// observations as interventions.
    pub fn promote_given(&self, positions: &[usize], order: &[&str]) -> Result<EffectTable> {
        let mut do_vars = self.do_vars.clone();
        do_vars.extend(positions.iter().map(|&p| self.given_vars[p].clone()));
        let given_keep: Vec<usize> = (0..self.given_vars.len()).filter(|p| !positions.contains(p)).collect();
        let perm: Vec<usize> = order
            .iter()
            .map(|name| do_vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.to_string())))
            .collect::<Result<_>>()?;
        if perm.len() != do_vars.len() {
            return Err(Error::Shape("reordering must list every do-variable".into()));
        }
        let mut rows: Vec<EffectRow> = self
            .rows
            .iter()
            .map(|r| {
                let mut dv = r.do_values.clone();
                dv.extend(positions.iter().map(|&p| r.given_values[p]));
                EffectRow {
                    do_values: perm.iter().map(|&k| dv[k]).collect(),
                    given_values: given_keep.iter().map(|&p| r.given_values[p]).collect(),
                    dist: r.dist.clone(),
                }
            })
            .collect();
        rows.sort_by(|a, b| (&a.do_values, &a.given_values).cmp(&(&b.do_values, &b.given_values)));
        Ok(EffectTable {
            outcome: self.outcome.clone(),
            do_vars: perm.iter().map(|&k| do_vars[k].clone()).collect(),
            given_vars: given_keep.iter().map(|&p| self.given_vars[p].clone()).collect(),
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_effect_queries() {
        let q: EffectQuery = "P(Y_f | do(J_o=1, D), Y_h)".parse().unwrap();
        assert_eq!(q.outcome, "Y_f");
        assert_eq!(q.interventions, [Target::at("J_o", 1), Target::all("D")]);
        assert_eq!(q.observed, [Target::all("Y_h")]);
        assert_eq!(q.to_string(), "P(Y_f | do(J_o=1, D), Y_h)");
        assert_eq!(q.to_string().parse::<EffectQuery>().unwrap(), q);

        let bare: EffectQuery = "Y_f|do(D)".parse().unwrap();
        assert_eq!(bare.do_vars(), ["D"]);
        assert!(bare.observed.is_empty());
    }

    #[test]
    fn rejects_bad_queries() {
        for bad in ["P(Y_f | do(D)", "Y_f | do(D=x)", "Y_f | D,", "Y_f | do(D) Y_h", "| do(D)"] {
            assert!(bad.parse::<EffectQuery>().is_err(), "{bad}");
        }
        assert_eq!("Y_f | do(D), D".parse::<EffectQuery>().unwrap_err(), Error::Overlap("D".into()));
        assert_eq!("Y_f | do(Y_f)".parse::<EffectQuery>().unwrap_err(), Error::Overlap("Y_f".into()));
    }
}
