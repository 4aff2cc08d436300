//! Causal diagrams over named variables.
//!
//! A [`Dag`] is immutable once built. Nodes keep their declaration order,
//! and a deterministic topological order (Kahn's algorithm, ties broken by
//! declaration order) is computed at construction. Parent lists are stored
//! in topological order, which is also the parent order used by CPTs.

mod dsep;
pub mod templates;

pub use dsep::{satisfies_backdoor, satisfies_frontdoor, satisfies_frontdoor_given, CriterionCheck};
pub use templates::TemplateId;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node names used by the built-in templates and the road-risk scenario.
pub mod names {
    pub const CLAIM_HISTORY: &str = "Y_h";
    pub const CLASSIFICATION: &str = "X_c";
    pub const CLAIM_FUTURE: &str = "Y_f";
    pub const CONFOUNDER: &str = "U";
    pub const MEDIATOR: &str = "Z";
    pub const DECISION: &str = "D";
    pub const JOURNEY: &str = "J_o";

    pub fn state(i: usize) -> String {
        format!("S_{i}")
    }

    pub fn traffic(i: usize) -> String {
        format!("T_{i}")
    }
}

/// On-disk form of a graph: `{"nodes": [...], "edges": [["A","B"], ...], "latent": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DagDoc {
    pub nodes: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub latent: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DagDoc", into = "DagDoc")]
pub struct Dag {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    latent: Vec<bool>,
    topo: Vec<usize>,
    rank: Vec<usize>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Dag {
    /// Validates and builds a graph. Fails on unknown endpoints, self-loops,
    /// duplicate edges or nodes, and directed cycles.
    pub fn new<N, E, L, A, B>(nodes: N, edges: E, latent: L) -> Result<Self>
    where
        N: IntoIterator,
        N::Item: AsRef<str>,
        E: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
        L: IntoIterator,
        L::Item: AsRef<str>,
    {
        let names: Vec<String> = nodes.into_iter().map(|n| n.as_ref().to_string()).collect();
        let edges: Vec<(String, String)> =
            edges.into_iter().map(|(a, b)| (a.as_ref().to_string(), b.as_ref().to_string())).collect();
        let latent: Vec<String> = latent.into_iter().map(|n| n.as_ref().to_string()).collect();
        Self::from_parts(names, edges, latent)
    }

    /// [`Dag::new`] with no latent nodes.
    pub fn fully_observed<N, E, A, B>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator,
        N::Item: AsRef<str>,
        E: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        Self::new(nodes, edges, std::iter::empty::<&str>())
    }

    fn from_parts(names: Vec<String>, edges: Vec<(String, String)>, latent: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::InvalidName(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateNode(name.clone()));
            }
        }
        let lookup = |n: &str| index.get(n).copied().ok_or_else(|| Error::UnknownNode(n.to_string()));

        let n = names.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut edge_idx = Vec::with_capacity(edges.len());
        for (a, b) in &edges {
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            if ia == ib {
                return Err(Error::SelfLoop(a.clone()));
            }
            if children[ia].contains(&ib) {
                return Err(Error::DuplicateEdge(a.clone(), b.clone()));
            }
            children[ia].push(ib);
            parents[ib].push(ia);
            edge_idx.push((ia, ib));
        }
        let mut latent_flags = vec![false; n];
        for l in &latent {
            latent_flags[lookup(l)?] = true;
        }

        // Kahn's algorithm, always releasing the lowest declared index first.
        let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            topo.push(v);
            for &c in &children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        if topo.len() != n {
            let stuck = (0..n).filter(|&i| indegree[i] > 0).map(|i| names[i].clone()).collect();
            return Err(Error::Cycle(stuck));
        }
        let mut rank = vec![0; n];
        for (r, &v) in topo.iter().enumerate() {
            rank[v] = r;
        }
        for p in &mut parents {
            p.sort_by_key(|&v| rank[v]);
        }
        for c in &mut children {
            c.sort_by_key(|&v| rank[v]);
        }

        Ok(Dag { names, index, edges: edge_idx, parents, children, latent: latent_flags, topo, rank })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub(crate) fn indices<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.index_of(n.as_ref())).collect()
    }

    /// Edges in declaration order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges.iter().map(|&(a, b)| (self.names[a].as_str(), self.names[b].as_str()))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        match (self.index.get(from), self.index.get(to)) {
            (Some(&a), Some(&b)) => self.children[a].contains(&b),
            _ => false,
        }
    }

    pub fn is_latent(&self, name: &str) -> bool {
        self.index.get(name).is_some_and(|&i| self.latent[i])
    }

    pub fn latent(&self) -> Vec<&str> {
        (0..self.len()).filter(|&i| self.latent[i]).map(|i| self.name(i)).collect()
    }

    /// Non-latent nodes in declaration order.
    pub fn observed(&self) -> Vec<&str> {
        (0..self.len()).filter(|&i| !self.latent[i]).map(|i| self.name(i)).collect()
    }

    pub fn topological_order(&self) -> Vec<&str> {
        self.topo.iter().map(|&i| self.name(i)).collect()
    }

    pub(crate) fn topo_indices(&self) -> &[usize] {
        &self.topo
    }

    pub(crate) fn parent_indices(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub(crate) fn child_indices(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Parents of `v`, in topological order.
    pub fn parents(&self, v: &str) -> Result<Vec<&str>> {
        let i = self.index_of(v)?;
        Ok(self.parents[i].iter().map(|&p| self.name(p)).collect())
    }

    pub fn children(&self, v: &str) -> Result<Vec<&str>> {
        let i = self.index_of(v)?;
        Ok(self.children[i].iter().map(|&c| self.name(c)).collect())
    }

    pub fn ancestors(&self, v: &str) -> Result<Vec<&str>> {
        let i = self.index_of(v)?;
        let mut mark = self.reach(&[i], |g, u| &g.parents[u]);
        mark[i] = false;
        Ok(self.collect_marked(&mark))
    }

    pub fn descendants(&self, v: &str) -> Result<Vec<&str>> {
        let i = self.index_of(v)?;
        let mut mark = self.reach(&[i], |g, u| &g.children[u]);
        mark[i] = false;
        Ok(self.collect_marked(&mark))
    }

    fn collect_marked(&self, mark: &[bool]) -> Vec<&str> {
        (0..self.len()).filter(|&u| mark[u]).map(|u| self.name(u)).collect()
    }

    /// Marks every node reachable from `start` (inclusive) following `next`.
    pub(crate) fn reach<F>(&self, start: &[usize], next: F) -> Vec<bool>
    where
        F: Fn(&Dag, usize) -> &[usize],
    {
        let mut mark = vec![false; self.len()];
        let mut queue: VecDeque<usize> = start.iter().copied().collect();
        for &s in start {
            mark[s] = true;
        }
        while let Some(u) = queue.pop_front() {
            for &w in next(self, u) {
                if !mark[w] {
                    mark[w] = true;
                    queue.push_back(w);
                }
            }
        }
        mark
    }

    /// Nodes in `start` together with all their ancestors.
    pub(crate) fn ancestral_closure(&self, start: &[usize]) -> Vec<bool> {
        self.reach(start, |g, u| &g.parents[u])
    }

    pub(crate) fn descendant_closure(&self, start: &[usize]) -> Vec<bool> {
        self.reach(start, |g, u| &g.children[u])
    }

    /// Rebuilds the graph keeping only edges for which `keep` holds.
    pub(crate) fn filter_edges<F: Fn(usize, usize) -> bool>(&self, keep: F) -> Dag {
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| keep(a, b))
            .map(|&(a, b)| (self.names[a].clone(), self.names[b].clone()))
            .collect();
        let latent = self.latent().into_iter().map(str::to_string).collect();
        Dag::from_parts(self.names.clone(), edges, latent).expect("edge subset of a valid DAG is valid")
    }

    /// Graph surgery for `do(do_set)`: removes every edge into a member of `do_set`.
    pub fn mutilate<S: AsRef<str>>(&self, do_set: &[S]) -> Result<Dag> {
        let targets = self.indices(do_set)?;
        let mut cut = vec![false; self.len()];
        for t in targets {
            cut[t] = true;
        }
        Ok(self.filter_edges(|_, b| !cut[b]))
    }

    /// Removes every edge out of a member of `set` (the "underbar" graph).
    pub fn without_outgoing<S: AsRef<str>>(&self, set: &[S]) -> Result<Dag> {
        let src = self.indices(set)?;
        let mut cut = vec![false; self.len()];
        for s in src {
            cut[s] = true;
        }
        Ok(self.filter_edges(|a, _| !cut[a]))
    }

    /// Returns a copy with extra edges appended. Used to derive scenario graphs
    /// and test fixtures from templates.
    pub fn with_extra<S: AsRef<str>>(&self, nodes: &[S], edges: &[(S, S)], latent: &[S]) -> Result<Dag> {
        let mut names = self.names.clone();
        names.extend(nodes.iter().map(|n| n.as_ref().to_string()));
        let mut e: Vec<(String, String)> =
            self.edges.iter().map(|&(a, b)| (self.names[a].clone(), self.names[b].clone())).collect();
        e.extend(edges.iter().map(|(a, b)| (a.as_ref().to_string(), b.as_ref().to_string())));
        let mut l: Vec<String> = self.latent().into_iter().map(str::to_string).collect();
        l.extend(latent.iter().map(|n| n.as_ref().to_string()));
        Dag::from_parts(names, e, l)
    }

    /// d-separation of `x` and `y` given `z` by Bayes-ball reachability.
    pub fn d_separated<S: AsRef<str>>(&self, x: &[S], y: &[S], z: &[S]) -> Result<bool> {
        Ok(self.active_trail(x, y, z)?.is_none())
    }

    /// An active trail from some member of `x` to some member of `y` given `z`,
    /// or `None` when the sets are d-separated.
    pub fn active_trail<S: AsRef<str>>(&self, x: &[S], y: &[S], z: &[S]) -> Result<Option<Vec<String>>> {
        let (xi, yi, zi) = self.disjoint_triple(x, y, z)?;
        Ok(dsep::active_trail(self, &xi, &yi, &zi).map(|t| t.into_iter().map(|i| self.names[i].clone()).collect()))
    }

    pub(crate) fn disjoint_triple<S: AsRef<str>>(
        &self,
        x: &[S],
        y: &[S],
        z: &[S],
    ) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
        if x.is_empty() {
            return Err(Error::EmptySet("X"));
        }
        if y.is_empty() {
            return Err(Error::EmptySet("Y"));
        }
        let (xi, yi, zi) = (self.indices(x)?, self.indices(y)?, self.indices(z)?);
        let mut owner = vec![0u8; self.len()];
        for (tag, set) in [(1u8, &xi), (2, &yi), (3, &zi)] {
            for &v in set.iter() {
                if owner[v] != 0 && owner[v] != tag {
                    return Err(Error::Overlap(self.names[v].clone()));
                }
                owner[v] = tag;
            }
        }
        Ok((xi, yi, zi))
    }

    pub fn to_doc(&self) -> DagDoc {
        DagDoc {
            nodes: self.names.clone(),
            edges: self.edges().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
            latent: self.latent().into_iter().map(str::to_string).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("graph document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DagDoc = serde_json::from_str(text)?;
        Dag::try_from(doc)
    }

    /// Same node set and edge set, ignoring declaration order.
    pub fn same_structure(&self, other: &Dag) -> bool {
        let mut a = self.to_doc();
        let mut b = other.to_doc();
        for d in [&mut a, &mut b] {
            d.nodes.sort();
            d.edges.sort();
            d.latent.sort();
        }
        a == b
    }
}

impl TryFrom<DagDoc> for Dag {
    type Error = Error;

    fn try_from(doc: DagDoc) -> Result<Self> {
        let edges = doc.edges.into_iter().map(|[a, b]| (a, b)).collect();
        Dag::from_parts(doc.nodes, edges, doc.latent)
    }
}

impl From<Dag> for DagDoc {
    fn from(d: Dag) -> Self {
        d.to_doc()
    }
}
