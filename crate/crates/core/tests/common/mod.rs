#![allow(dead_code)]

use causalrate::scm::DiscreteScm;
use causalrate::Dag;
use proptest::prelude::*;

/// d-separation by enumerating every simple trail between the two sets.
pub fn brute_force_dsep(g: &Dag, x: &[&str], y: &[&str], z: &[&str]) -> bool {
    let opens_collider = |v: &str| z.contains(&v) || g.descendants(v).unwrap().iter().any(|d| z.contains(d));
    let neighbours = |v: &str| -> Vec<String> {
        let mut n: Vec<String> = g.parents(v).unwrap().into_iter().map(String::from).collect();
        n.extend(g.children(v).unwrap().into_iter().map(String::from));
        n
    };
    fn walk(
        path: &mut Vec<String>,
        targets: &[&str],
        neighbours: &dyn Fn(&str) -> Vec<String>,
        active_mid: &dyn Fn(&str, &str, &str) -> bool,
    ) -> bool {
        let last = path.last().unwrap().clone();
        if path.len() > 1 && targets.contains(&last.as_str()) {
            return true;
        }
        for n in neighbours(&last) {
            if path.contains(&n) {
                continue;
            }
            if path.len() >= 2 && !active_mid(&path[path.len() - 2], &last, &n) {
                continue;
            }
            path.push(n);
            if walk(path, targets, neighbours, active_mid) {
                return true;
            }
            path.pop();
        }
        false
    }
    let active_mid = |a: &str, m: &str, b: &str| {
        let collider = g.has_edge(a, m) && g.has_edge(b, m);
        if collider {
            opens_collider(m)
        } else {
            !z.contains(&m)
        }
    };
    for &s in x {
        let mut path = vec![s.to_string()];
        if walk(&mut path, y, &neighbours, &active_mid) {
            return false;
        }
    }
    true
}

/// Random DAG on up to `max` nodes: edges only go from earlier to later
/// names in a hidden order, names are declared shuffled.
pub fn arb_dag(max: usize) -> impl Strategy<Value = Dag> {
    (2..=max)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (Just(n), proptest::collection::vec(any::<bool>(), pairs), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
        .prop_map(|(n, bits, declared)| {
            let name = |i: usize| format!("N{i}");
            let mut edges = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] {
                        edges.push((name(a), name(b)));
                    }
                    k += 1;
                }
            }
            Dag::fully_observed(declared.into_iter().map(name), edges).unwrap()
        })
}

/// All `(X, Y, Z)` with X and Y nonempty, pairwise disjoint, `{X, Y}` unordered.
pub fn all_triples(names: &[String]) -> Vec<(Vec<&str>, Vec<&str>, Vec<&str>)> {
    let n = names.len();
    let mut out = Vec::new();
    let total = 4usize.pow(n as u32);
    for code in 0..total {
        let (mut x, mut y, mut z) = (Vec::new(), Vec::new(), Vec::new());
        let mut c = code;
        for name in names {
            match c % 4 {
                1 => x.push(name.as_str()),
                2 => y.push(name.as_str()),
                3 => z.push(name.as_str()),
                _ => {}
            }
            c /= 4;
        }
        if !x.is_empty() && !y.is_empty() && x < y {
            out.push((x, y, z));
        }
    }
    out
}

/// Random CPTs with cardinalities 2 or 3 drawn from the seed.
pub fn random_model(dag: Dag, seed: u64, max_card: usize) -> DiscreteScm {
    let card = (0..dag.len())
        .map(|i| 2 + ((seed.wrapping_mul(31).wrapping_add(i as u64 * 7)) as usize % (max_card - 1)))
        .collect();
    DiscreteScm::random(dag, card, seed, 0.05).unwrap()
}
