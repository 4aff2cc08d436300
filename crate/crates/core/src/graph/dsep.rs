//! Reachability-based d-separation and the adjustment criteria built on it.

use std::collections::VecDeque;

use serde::Serialize;

use super::Dag;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    /// Arrived from a child (travelling against the edge).
    Up,
    /// Arrived from a parent.
    Down,
}

/// Bayes-ball search. Returns the node sequence of the first active trail
/// found (shortest in number of hops), or `None` if `x` and `y` are
/// d-separated by `z`.
pub(crate) fn active_trail(g: &Dag, x: &[usize], y: &[usize], z: &[usize]) -> Option<Vec<usize>> {
    let n = g.len();
    let mut in_z = vec![false; n];
    for &v in z {
        in_z[v] = true;
    }
    let mut is_target = vec![false; n];
    for &v in y {
        is_target[v] = true;
    }
    // A collider is open iff it or one of its descendants is observed,
    // i.e. iff it lies in the ancestral closure of z.
    let open_collider = g.ancestral_closure(z);

    let state = |v: usize, d: Dir| 2 * v + (d == Dir::Down) as usize;
    let mut prev: Vec<Option<usize>> = vec![None; 2 * n];
    let mut seen = vec![false; 2 * n];
    let mut queue = VecDeque::new();
    for &s in x {
        seen[state(s, Dir::Up)] = true;
        queue.push_back((s, Dir::Up));
    }

    while let Some((v, d)) = queue.pop_front() {
        let here = state(v, d);
        if is_target[v] && !in_z[v] {
            let mut trail = Vec::new();
            let mut cur = Some(here);
            while let Some(s) = cur {
                trail.push(s / 2);
                cur = prev[s];
            }
            trail.reverse();
            return Some(trail);
        }
        let mut push = |w: usize, dw: Dir, queue: &mut VecDeque<(usize, Dir)>| {
            let s = state(w, dw);
            if !seen[s] {
                seen[s] = true;
                prev[s] = Some(here);
                queue.push_back((w, dw));
            }
        };
        match d {
            Dir::Up if !in_z[v] => {
                for &p in g.parent_indices(v) {
                    push(p, Dir::Up, &mut queue);
                }
                for &c in g.child_indices(v) {
                    push(c, Dir::Down, &mut queue);
                }
            }
            Dir::Up => {}
            Dir::Down => {
                if !in_z[v] {
                    for &c in g.child_indices(v) {
                        push(c, Dir::Down, &mut queue);
                    }
                }
                if open_collider[v] {
                    for &p in g.parent_indices(v) {
                        push(p, Dir::Up, &mut queue);
                    }
                }
            }
        }
    }
    None
}

/// Outcome of a graphical criterion check, with the failing condition and
/// an open trail (when one exists) as witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionCheck {
    pub satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl CriterionCheck {
    fn pass() -> Self {
        CriterionCheck { satisfied: true, reason: None, witness: None }
    }

    fn fail(reason: impl Into<String>, witness: Option<Vec<String>>) -> Self {
        CriterionCheck { satisfied: false, reason: Some(reason.into()), witness }
    }

    /// Converts a failed check into [`Error::CriterionNotMet`].
    pub fn into_result(self, criterion: &str) -> Result<()> {
        if self.satisfied {
            Ok(())
        } else {
            Err(Error::CriterionNotMet {
                criterion: criterion.to_string(),
                reason: self.reason.unwrap_or_default(),
                witness: self.witness,
            })
        }
    }
}

fn names(g: &Dag, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| g.name(i).to_string()).collect()
}

/// Back-door criterion for the ordered pair `(x, y)` relative to `z`:
/// no member of `z` descends from `x`, and `z` blocks every trail from `x`
/// to `y` that starts with an edge into `x`.
pub fn satisfies_backdoor<S: AsRef<str>>(g: &Dag, x: &str, y: &str, z: &[S]) -> Result<CriterionCheck> {
    let (xi, yi) = (g.index_of(x)?, g.index_of(y)?);
    if xi == yi {
        return Err(Error::Overlap(x.to_string()));
    }
    let zi = g.indices(z)?;
    if let Some(&bad) = zi.iter().find(|&&v| v == xi || v == yi) {
        return Err(Error::Overlap(g.name(bad).to_string()));
    }
    let desc = g.descendant_closure(&[xi]);
    if let Some(&d) = zi.iter().find(|&&v| desc[v]) {
        return Ok(CriterionCheck::fail(format!("adjustment set member {} descends from {x}", g.name(d)), None));
    }
    let cut = g.filter_edges(|a, _| a != xi);
    match active_trail(&cut, &[xi], &[yi], &zi) {
        None => Ok(CriterionCheck::pass()),
        Some(t) => Ok(CriterionCheck::fail("unblockable back-door", Some(names(g, &t)))),
    }
}

/// Front-door criterion for `x -> y` through mediators `m`.
pub fn satisfies_frontdoor<S: AsRef<str>>(g: &Dag, x: &str, y: &str, m: &[S]) -> Result<CriterionCheck> {
    satisfies_frontdoor_given::<S>(g, x, y, m, &[])
}

/// Front-door criterion holding within strata of `given`:
///
/// * (a) every directed path from `x` to `y` meets `m`;
/// * (b) `given` blocks every back-door trail from `x` to `m`;
/// * (c) `{x} ∪ given` blocks every back-door trail from `m` to `y`;
/// * no member of `given` descends from `x`.
///
/// With `given = ∅` this is the classic three-condition criterion.
pub fn satisfies_frontdoor_given<S: AsRef<str>>(
    g: &Dag,
    x: &str,
    y: &str,
    m: &[S],
    given: &[S],
) -> Result<CriterionCheck> {
    let (xi, yi) = (g.index_of(x)?, g.index_of(y)?);
    let mi = g.indices(m)?;
    let gi = g.indices(given)?;
    if xi == yi {
        return Err(Error::Overlap(x.to_string()));
    }
    if mi.is_empty() {
        return Ok(CriterionCheck::fail("no mediator declared", None));
    }
    for &v in mi.iter().chain(&gi) {
        if v == xi || v == yi {
            return Err(Error::Overlap(g.name(v).to_string()));
        }
    }
    if let Some(&v) = mi.iter().find(|v| gi.contains(v)) {
        return Err(Error::Overlap(g.name(v).to_string()));
    }

    let desc = g.descendant_closure(&[xi]);
    if let Some(&d) = gi.iter().find(|&&v| desc[v]) {
        return Ok(CriterionCheck::fail(format!("conditioning variable {} descends from {x}", g.name(d)), None));
    }

    // (a) y unreachable from x once the mediators are removed.
    let mut blocked = vec![false; g.len()];
    for &v in &mi {
        blocked[v] = true;
    }
    let no_mediators = g.filter_edges(|a, b| !blocked[a] && !blocked[b]);
    if no_mediators.descendant_closure(&[xi])[yi] {
        let path = directed_path(&no_mediators, xi, yi).map(|p| names(g, &p));
        return Ok(CriterionCheck::fail("directed path avoids the mediators", path));
    }

    // (b) x's outgoing edges removed: x must be separated from m by `given`.
    let x_cut = g.filter_edges(|a, _| a != xi);
    if let Some(t) = active_trail(&x_cut, &[xi], &mi, &gi) {
        return Ok(CriterionCheck::fail("open back-door from treatment to mediator", Some(names(g, &t))));
    }

    // (c) mediators' outgoing edges removed: m separated from y by {x} ∪ given.
    let m_cut = g.filter_edges(|a, _| !blocked[a]);
    let mut cond = gi.clone();
    cond.push(xi);
    if let Some(t) = active_trail(&m_cut, &mi, &[yi], &cond) {
        return Ok(CriterionCheck::fail("open back-door from mediator to outcome", Some(names(g, &t))));
    }
    Ok(CriterionCheck::pass())
}

fn directed_path(g: &Dag, from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; g.len()];
    let mut queue = VecDeque::from([from]);
    prev[from] = from;
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &c in g.child_indices(u) {
            if prev[c] == usize::MAX {
                prev[c] = u;
                queue.push_back(c);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemplateId;

    fn t(id: TemplateId) -> Dag {
        id.build().unwrap()
    }

    #[test]
    fn chain_blocked_by_middle() {
        assert!(t(TemplateId::Fig1d).d_separated(&["Y_h"], &["Y_f"], &["X_c"]).unwrap());
        assert!(!t(TemplateId::Fig1d).d_separated(&["Y_h"], &["Y_f"], &[]).unwrap());
    }

    #[test]
    fn collider_opens_when_conditioned() {
        let g = t(TemplateId::Fig1b);
        assert!(g.d_separated(&["Y_h"], &["X_c"], &[]).unwrap());
        assert!(!g.d_separated(&["Y_h"], &["X_c"], &["Y_f"]).unwrap());
    }

    #[test]
    fn confounder_fork_has_witness() {
        let g = t(TemplateId::Fig2c);
        assert!(!g.d_separated(&["Y_h"], &["Y_f"], &["X_c"]).unwrap());
        assert_eq!(g.active_trail(&["Y_h"], &["Y_f"], &["X_c"]).unwrap().unwrap(), ["Y_h", "U", "Y_f"]);
        assert!(t(TemplateId::Fig2a).d_separated(&["U"], &["Y_f"], &["X_c"]).unwrap());
    }

    #[test]
    fn overlapping_sets_rejected() {
        let g = t(TemplateId::Fig1d);
        assert_eq!(g.d_separated(&["Y_h"], &["Y_f"], &["Y_h"]).unwrap_err(), Error::Overlap("Y_h".into()));
        assert_eq!(g.d_separated(&[], &["Y_f"], &["Y_h"]).unwrap_err(), Error::EmptySet("X"));
    }

    #[test]
    fn backdoor_examples() {
        assert!(satisfies_backdoor::<&str>(&t(TemplateId::Fig1c), "X_c", "Y_f", &[]).unwrap().satisfied);
        let fail = satisfies_backdoor::<&str>(&t(TemplateId::Fig2b), "X_c", "Y_f", &[]).unwrap();
        assert!(!fail.satisfied);
        assert_eq!(fail.witness.unwrap(), ["X_c", "U", "Y_f"]);
        let desc = satisfies_backdoor(&t(TemplateId::Fig1d), "Y_h", "Y_f", &["X_c"]).unwrap();
        assert!(!desc.satisfied);
    }

    #[test]
    fn frontdoor_examples() {
        assert!(satisfies_frontdoor(&t(TemplateId::Fig3), "X_c", "Y_f", &["Z"]).unwrap().satisfied);
        for d in 1..=4 {
            let g = t(TemplateId::Fig6Canonical(d));
            let m: Vec<String> = (0..=d).map(crate::graph::names::state).collect();
            assert!(satisfies_frontdoor(&g, "D", "Y_f", &m).unwrap().satisfied, "D={d}");
            let given = vec!["Y_h".to_string()];
            assert!(satisfies_frontdoor_given(&g, "D", "Y_f", &m, &given).unwrap().satisfied);
        }
        let g = t(TemplateId::Fig2b);
        assert!(!satisfies_frontdoor::<&str>(&g, "X_c", "Y_f", &[]).unwrap().satisfied);
        let r = satisfies_frontdoor(&g, "X_c", "Y_f", &["Y_h"]).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.reason.as_deref(), Some("directed path avoids the mediators"));
    }
}
