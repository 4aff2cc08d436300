//! Built-in causal diagrams.
//!
//! | id | edges |
//! |----|-------|
//! | `Fig1a` | `Y_h→Y_f` |
//! | `Fig1b` | `Y_h→Y_f`, `X_c→Y_f` |
//! | `Fig1c` | `X_c→Y_h`, `X_c→Y_f` |
//! | `Fig1d` | `Y_h→X_c`, `X_c→Y_f` |
//! | `Fig2a` | `Fig1d` + `U→Y_h`, `U→X_c` |
//! | `Fig2b` | `Fig1d` + `U→X_c`, `U→Y_f` |
//! | `Fig2c` | `Fig1d` + `U→Y_h`, `U→Y_f` |
//! | `Fig3` | `Y_h→X_c`, `X_c→Z`, `Z→Y_f`, `U→X_c`, `U→Y_f` |
//! | `Fig4Chain(D)` | `D→S_i`, `T_i→S_i` (i = 0..=D+1), `S_i→S_{i+1}` |
//! | `Fig6Canonical(D)` | `Y_h→J_o→D`, `U→D`, `U→Y_f`, `D→S_i` (i = 0..=D), `S_i→S_{i+1}`, `S_D→Y_f` |
//!
//! `U` is latent in every template that contains it.

use std::fmt;
use std::str::FromStr;

use super::names::{self, CLAIM_FUTURE, CLAIM_HISTORY, CLASSIFICATION, CONFOUNDER, DECISION, JOURNEY, MEDIATOR};
use super::Dag;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TemplateId {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Fig2a,
    Fig2b,
    Fig2c,
    Fig3,
    Fig4Chain(usize),
    Fig6Canonical(usize),
}

impl TemplateId {
    /// The ten template families, with depth 1 for the parameterized ones.
    pub const ALL: [TemplateId; 10] = [
        TemplateId::Fig1a,
        TemplateId::Fig1b,
        TemplateId::Fig1c,
        TemplateId::Fig1d,
        TemplateId::Fig2a,
        TemplateId::Fig2b,
        TemplateId::Fig2c,
        TemplateId::Fig3,
        TemplateId::Fig4Chain(1),
        TemplateId::Fig6Canonical(1),
    ];

    /// Display name of the family, with `(D)` for parameterized ids.
    pub fn family(&self) -> &'static str {
        match self {
            TemplateId::Fig1a => "Fig1a",
            TemplateId::Fig1b => "Fig1b",
            TemplateId::Fig1c => "Fig1c",
            TemplateId::Fig1d => "Fig1d",
            TemplateId::Fig2a => "Fig2a",
            TemplateId::Fig2b => "Fig2b",
            TemplateId::Fig2c => "Fig2c",
            TemplateId::Fig3 => "Fig3",
            TemplateId::Fig4Chain(_) => "Fig4Chain(D)",
            TemplateId::Fig6Canonical(_) => "Fig6Canonical(D)",
        }
    }

    pub fn build(&self) -> Result<Dag> {
        let (yh, xc, yf, u) = (CLAIM_HISTORY, CLASSIFICATION, CLAIM_FUTURE, CONFOUNDER);
        let small = |nodes: &[&str], edges: &[(&str, &str)], latent: &[&str]| {
            Dag::new(nodes.iter().copied(), edges.iter().copied(), latent.iter().copied())
        };
        match *self {
            TemplateId::Fig1a => small(&[yh, yf], &[(yh, yf)], &[]),
            TemplateId::Fig1b => small(&[yh, xc, yf], &[(yh, yf), (xc, yf)], &[]),
            TemplateId::Fig1c => small(&[xc, yh, yf], &[(xc, yh), (xc, yf)], &[]),
            TemplateId::Fig1d => small(&[yh, xc, yf], &[(yh, xc), (xc, yf)], &[]),
            TemplateId::Fig2a => small(&[u, yh, xc, yf], &[(yh, xc), (xc, yf), (u, yh), (u, xc)], &[u]),
            TemplateId::Fig2b => small(&[u, yh, xc, yf], &[(yh, xc), (xc, yf), (u, xc), (u, yf)], &[u]),
            TemplateId::Fig2c => small(&[u, yh, xc, yf], &[(yh, xc), (xc, yf), (u, yh), (u, yf)], &[u]),
            TemplateId::Fig3 => {
                small(&[u, yh, xc, MEDIATOR, yf], &[(yh, xc), (xc, MEDIATOR), (MEDIATOR, yf), (u, xc), (u, yf)], &[u])
            }
            TemplateId::Fig4Chain(d) => {
                check_depth(d)?;
                let mut nodes = vec![DECISION.to_string()];
                let mut edges = Vec::new();
                for i in 0..=d + 1 {
                    nodes.push(names::traffic(i));
                    nodes.push(names::state(i));
                    edges.push((DECISION.to_string(), names::state(i)));
                    edges.push((names::traffic(i), names::state(i)));
                    if i > 0 {
                        edges.push((names::state(i - 1), names::state(i)));
                    }
                }
                Dag::new(nodes, edges, Vec::<String>::new())
            }
            TemplateId::Fig6Canonical(d) => {
                check_depth(d)?;
                let s = |i: usize| names::state(i);
                let mut nodes: Vec<String> = [yh, JOURNEY, u, DECISION].iter().map(|n| n.to_string()).collect();
                let mut edges: Vec<(String, String)> = [(yh, JOURNEY), (JOURNEY, DECISION), (u, DECISION), (u, yf)]
                    .iter()
                    .map(|&(a, b)| (a.to_string(), b.to_string()))
                    .collect();
                for i in 0..=d {
                    nodes.push(s(i));
                    edges.push((DECISION.to_string(), s(i)));
                    if i > 0 {
                        edges.push((s(i - 1), s(i)));
                    }
                }
                nodes.push(yf.to_string());
                edges.push((s(d), yf.to_string()));
                Dag::new(nodes, edges, vec![u.to_string()])
            }
        }
    }
}

fn check_depth(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::InvalidDepth(d))
    } else {
        Ok(())
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateId::Fig4Chain(d) => write!(f, "Fig4Chain({d})"),
            TemplateId::Fig6Canonical(d) => write!(f, "Fig6Canonical({d})"),
            other => f.write_str(other.family()),
        }
    }
}

/// Parses `Fig2c`, `Fig4Chain(3)` or `Fig6Canonical` (depth 1).
impl FromStr for TemplateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownTemplate(s.to_string());
        let (base, depth) = match s.split_once('(') {
            Some((base, rest)) => {
                let d = rest.strip_suffix(')').ok_or_else(unknown)?;
                (base, Some(d.trim().parse::<usize>().map_err(|_| unknown())?))
            }
            None => (s, None),
        };
        let id = match (base, depth) {
            ("Fig4Chain", d) => TemplateId::Fig4Chain(d.unwrap_or(1)),
            ("Fig6Canonical", d) => TemplateId::Fig6Canonical(d.unwrap_or(1)),
            (_, Some(_)) => return Err(unknown()),
            ("Fig1a", None) => TemplateId::Fig1a,
            ("Fig1b", None) => TemplateId::Fig1b,
            ("Fig1c", None) => TemplateId::Fig1c,
            ("Fig1d", None) => TemplateId::Fig1d,
            ("Fig2a", None) => TemplateId::Fig2a,
            ("Fig2b", None) => TemplateId::Fig2b,
            ("Fig2c", None) => TemplateId::Fig2c,
            ("Fig3", None) => TemplateId::Fig3,
            _ => return Err(unknown()),
        };
        if let TemplateId::Fig4Chain(0) | TemplateId::Fig6Canonical(0) = id {
            return Err(Error::InvalidDepth(0));
        }
        Ok(id)
    }
}
