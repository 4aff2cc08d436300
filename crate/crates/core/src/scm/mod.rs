//! Discrete structural causal models: CPTs on a [`Dag`], exact joints,
//! graph-surgery interventions and seeded ancestral sampling.
//!
//! CPT layout: the table of node `v` has one row per configuration of
//! `v`'s parents, parents taken in topological order and enumerated in
//! mixed radix with the first parent most significant. Row `r` holds
//! `P(v = k | parents = config r)` for `k = 0..card(v)`.

mod dataset;
mod joint;

pub use dataset::Dataset;
pub use joint::{assignments, JointTable, NORMALIZATION_TOL};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dag, DagDoc};
use crate::rng::Stream;

/// Default cap on the number of cells `exact_joint` will enumerate.
pub const DEFAULT_STATE_CAP: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteScm {
    dag: Dag,
    card: Vec<usize>,
    cpt: Vec<Vec<f64>>,
}

/// On-disk SCM document: `{"graph": <graph doc>, "card": {...}, "cpt": {"node": [[row], ...]}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScmDoc {
    pub graph: DagDoc,
    pub card: BTreeMap<String, usize>,
    pub cpt: BTreeMap<String, Vec<Vec<f64>>>,
}

impl DiscreteScm {
    pub fn new(dag: Dag, card: &BTreeMap<String, usize>, cpt: &BTreeMap<String, Vec<Vec<f64>>>) -> Result<Self> {
        for key in card.keys().chain(cpt.keys()) {
            dag.index_of(key)?;
        }
        let mut cards = Vec::with_capacity(dag.len());
        for name in dag.names() {
            let c = *card.get(name).ok_or_else(|| Error::Shape(format!("no cardinality for `{name}`")))?;
            if c == 0 {
                return Err(Error::Shape(format!("`{name}` has cardinality 0")));
            }
            cards.push(c);
        }
        let mut flat = Vec::with_capacity(dag.len());
        for name in dag.names() {
            let rows = cpt.get(name).ok_or_else(|| Error::Shape(format!("no CPT for `{name}`")))?;
            flat.push(rows.iter().flatten().copied().collect::<Vec<f64>>());
            let v = dag.index_of(name)?;
            let width = cards[v];
            if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != width) {
                return Err(Error::Shape(format!(
                    "CPT row {r} of `{name}` has {} entries, expected {width}",
                    row.len()
                )));
            }
        }
        Self::from_flat(dag, cards, flat)
    }

    /// Builds from cardinalities and flattened CPTs, both indexed like `dag.names()`.
    pub fn from_flat(dag: Dag, card: Vec<usize>, cpt: Vec<Vec<f64>>) -> Result<Self> {
        if card.len() != dag.len() || cpt.len() != dag.len() {
            return Err(Error::Shape("one cardinality and one CPT per node required".into()));
        }
        for v in 0..dag.len() {
            let rows: usize = dag.parent_indices(v).iter().map(|&p| card[p]).product();
            let name = dag.name(v);
            if cpt[v].len() != rows * card[v] {
                return Err(Error::Shape(format!(
                    "CPT of `{name}` has {} entries, expected {rows} rows of {}",
                    cpt[v].len(),
                    card[v]
                )));
            }
            for (r, row) in cpt[v].chunks(card[v]).enumerate() {
                if let Some(p) = row.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                    return Err(Error::Shape(format!("CPT row {r} of `{name}` has probability {p} outside [0, 1]")));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > NORMALIZATION_TOL {
                    return Err(Error::Normalization { node: name.to_string(), row: r, sum });
                }
            }
        }
        Ok(DiscreteScm { dag, card, cpt })
    }

    /// Builds every CPT row by calling `row(node, parent_assignment)`, with
    /// the parent assignment listed in CPT parent order.
    pub fn from_fn<F>(dag: Dag, card: Vec<usize>, mut row: F) -> Result<Self>
    where
        F: FnMut(&str, &[(&str, usize)]) -> Vec<f64>,
    {
        if card.len() != dag.len() {
            return Err(Error::Shape("one cardinality per node required".into()));
        }
        let mut cpt = Vec::with_capacity(dag.len());
        for v in 0..dag.len() {
            let parents = dag.parent_indices(v);
            let pc: Vec<usize> = parents.iter().map(|&p| card[p]).collect();
            let mut table = Vec::new();
            for values in assignments(&pc) {
                let named: Vec<(&str, usize)> = parents.iter().map(|&p| dag.name(p)).zip(values).collect();
                table.extend(row(dag.name(v), &named));
            }
            cpt.push(table);
        }
        Self::from_flat(dag, card, cpt)
    }

    /// Random CPTs: every entry is `floor + u`, `u ~ U[0,1)`, normalized per
    /// row. A positive floor keeps every cell of the joint positive.
    pub fn random(dag: Dag, card: Vec<usize>, seed: u64, floor: f64) -> Result<Self> {
        let cpt = (0..dag.len())
            .map(|v| {
                let rows: usize = dag.parent_indices(v).iter().map(|&p| card[p]).product();
                let mut s = Stream::new(seed, v as u64);
                let mut table = Vec::with_capacity(rows * card[v]);
                for _ in 0..rows {
                    let raw: Vec<f64> = (0..card[v]).map(|_| floor + s.unit()).collect();
                    let total: f64 = raw.iter().sum();
                    table.extend(raw.iter().map(|w| w / total));
                }
                table
            })
            .collect();
        Self::from_flat(dag, card, cpt)
    }

    /// Random CPTs with every variable binary.
    pub fn random_binary(dag: Dag, seed: u64) -> Result<Self> {
        let card = vec![2; dag.len()];
        Self::random(dag, card, seed, 0.05)
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn cards(&self) -> &[usize] {
        &self.card
    }

    pub fn card_of(&self, name: &str) -> Result<usize> {
        Ok(self.card[self.dag.index_of(name)?])
    }

    /// Flattened CPT of `name` (rows concatenated).
    pub fn cpt(&self, name: &str) -> Result<&[f64]> {
        Ok(&self.cpt[self.dag.index_of(name)?])
    }

    /// `P(name = · | parents = parent_values)`, parent values in topological parent order.
    pub fn cpt_row(&self, name: &str, parent_values: &[usize]) -> Result<&[f64]> {
        let v = self.dag.index_of(name)?;
        let parents = self.dag.parent_indices(v);
        if parents.len() != parent_values.len() {
            return Err(Error::Shape(format!("`{name}` has {} parents", parents.len())));
        }
        let mut r = 0;
        for (&p, &x) in parents.iter().zip(parent_values) {
            if x >= self.card[p] {
                return Err(Error::ValueOutOfRange { var: self.dag.name(p).to_string(), value: x, card: self.card[p] });
            }
            r = r * self.card[p] + x;
        }
        Ok(&self.cpt[v][r * self.card[v]..(r + 1) * self.card[v]])
    }

    fn row_index(&self, v: usize, assignment: &[usize]) -> usize {
        self.dag.parent_indices(v).iter().fold(0, |acc, &p| acc * self.card[p] + assignment[p])
    }

    pub fn state_space(&self) -> u128 {
        self.card.iter().map(|&c| c as u128).product()
    }

    pub fn exact_joint(&self) -> Result<JointTable> {
        self.exact_joint_capped(DEFAULT_STATE_CAP)
    }

    /// Full joint `∏_v P(v | parents(v))` over all nodes in declaration order.
    pub fn exact_joint_capped(&self, cap: usize) -> Result<JointTable> {
        let cells = self.state_space();
        if cells > cap as u128 {
            return Err(Error::StateSpaceTooLarge { cells, cap });
        }
        let n = self.dag.len();
        let mut stride = vec![1usize; n];
        for v in (0..n.saturating_sub(1)).rev() {
            stride[v] = stride[v + 1] * self.card[v + 1];
        }
        let mut mass = vec![0.0; cells as usize];
        let mut assignment = vec![0usize; n];
        self.enumerate(0, 1.0, 0, &stride, &mut assignment, &mut mass);
        JointTable::new(self.dag.names().to_vec(), self.card.clone(), mass)
    }

    fn enumerate(&self, depth: usize, p: f64, index: usize, stride: &[usize], a: &mut [usize], mass: &mut [f64]) {
        let topo = self.dag.topo_indices();
        if depth == topo.len() {
            mass[index] = p;
            return;
        }
        let v = topo[depth];
        let c = self.card[v];
        let base = self.row_index(v, a) * c;
        for k in 0..c {
            let q = self.cpt[v][base + k];
            if q == 0.0 {
                continue;
            }
            a[v] = k;
            self.enumerate(depth + 1, p * q, index + k * stride[v], stride, a, mass);
        }
        a[v] = 0;
    }

    /// `do(assignment)`: surgery on the graph plus point-mass CPTs for the
    /// intervened nodes.
    pub fn intervene<S: AsRef<str>>(&self, assignment: &[(S, usize)]) -> Result<DiscreteScm> {
        let targets: Vec<&str> = assignment.iter().map(|(n, _)| n.as_ref()).collect();
        let dag = self.dag.mutilate(&targets)?;
        // Surgery can change the topological order, and with it the parent
        // order that CPT rows are laid out in.
        let mut cpt: Vec<Vec<f64>> = (0..dag.len()).map(|v| self.relayout(v, dag.parent_indices(v))).collect();
        for (name, value) in assignment {
            let v = self.dag.index_of(name.as_ref())?;
            if *value >= self.card[v] {
                return Err(Error::ValueOutOfRange {
                    var: name.as_ref().to_string(),
                    value: *value,
                    card: self.card[v],
                });
            }
            let mut row = vec![0.0; self.card[v]];
            row[*value] = 1.0;
            cpt[v] = row;
        }
        Ok(DiscreteScm { dag, card: self.card.clone(), cpt })
    }

    /// CPT of `v` with its rows re-enumerated for the parent order `order`,
    /// a permutation of the current parents. Intervened nodes (no parents
    /// left) are overwritten by the caller.
    fn relayout(&self, v: usize, order: &[usize]) -> Vec<f64> {
        let current = self.dag.parent_indices(v);
        if order == current || order.len() != current.len() {
            return self.cpt[v].clone();
        }
        let c = self.card[v];
        let cards: Vec<usize> = order.iter().map(|&p| self.card[p]).collect();
        let mut out = Vec::with_capacity(self.cpt[v].len());
        for values in assignments(&cards) {
            let row = current.iter().fold(0, |acc, p| {
                let k = order.iter().position(|q| q == p).expect("same parent set");
                acc * self.card[*p] + values[k]
            });
            out.extend_from_slice(&self.cpt[v][row * c..(row + 1) * c]);
        }
        out
    }

    /// Ancestral sampling. Row `r` uses RNG stream `r` of `seed`, so the
    /// result does not depend on how rows are scheduled across threads.
    pub fn sample(&self, n: usize, seed: u64) -> Dataset {
        let rows: Vec<Vec<usize>> =
            (0..n).into_par_iter().map(|r| self.sample_row(&mut Stream::new(seed, r as u64))).collect();
        Dataset::from_parts(self.dag.names().to_vec(), self.card.clone(), rows, seed)
    }

    fn sample_row(&self, rng: &mut Stream) -> Vec<usize> {
        let mut a = vec![0usize; self.dag.len()];
        for &v in self.dag.topo_indices() {
            let c = self.card[v];
            let base = self.row_index(v, &a) * c;
            a[v] = rng.categorical(&self.cpt[v][base..base + c]);
        }
        a
    }

    pub fn to_doc(&self) -> ScmDoc {
        let mut card = BTreeMap::new();
        let mut cpt = BTreeMap::new();
        for (v, name) in self.dag.names().iter().enumerate() {
            card.insert(name.clone(), self.card[v]);
            cpt.insert(name.clone(), self.cpt[v].chunks(self.card[v]).map(<[f64]>::to_vec).collect());
        }
        ScmDoc { graph: self.dag.to_doc(), card, cpt }
    }

    pub fn from_doc(doc: ScmDoc) -> Result<Self> {
        let dag = Dag::try_from(doc.graph)?;
        Self::new(dag, &doc.card, &doc.cpt)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("scm document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(serde_json::from_str(text)?)
    }
}
