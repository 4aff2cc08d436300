use crate::error::{Error, Result};
use crate::graph::{satisfies_backdoor, satisfies_frontdoor_given, Dag};
use crate::scm::{assignments, DiscreteScm, JointTable};

use super::query::{EffectRow, EffectTable};

fn cell(vars: &[&str], values: &[usize]) -> String {
    let parts: Vec<String> = vars.iter().zip(values).map(|(v, x)| format!("{v}={x}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn strs<S: AsRef<str>>(s: &[S]) -> Vec<&str> {
    s.iter().map(AsRef::as_ref).collect()
}

fn reject_latent(dag: &Dag, vars: &[&str]) -> Result<()> {
    for v in vars {
        dag.index_of(v)?;
        if dag.is_latent(v) {
            return Err(Error::LatentAdjustment(v.to_string()));
        }
    }
    Ok(())
}

/// Dense marginal in a fixed variable order, with mixed-radix helpers.
struct Dense {
    card: Vec<usize>,
    mass: Vec<f64>,
}

impl Dense {
    fn new(j: &JointTable, order: &[&str]) -> Result<Self> {
        let m = j.marginal_in_order(order)?;
        Ok(Dense { card: m.card().to_vec(), mass: m.mass().to_vec() })
    }

    /// Sums mass over the trailing variables after the first `prefix` ones.
    fn head(&self, prefix: usize) -> Vec<f64> {
        let n: usize = self.card[..prefix].iter().product();
        let tail = self.mass.len() / n.max(1);
        (0..n).map(|i| self.mass[i * tail..(i + 1) * tail].iter().sum()).collect()
    }
}

fn flat(card: &[usize], values: &[usize]) -> usize {
    card.iter().zip(values).fold(0, |acc, (c, v)| acc * c + v)
}

/// `P(y | x, given)` read straight off the joint: the estimate one gets by
/// conditioning rather than intervening. `do_vars` of the result are `x`.
pub fn naive_conditional<S: AsRef<str>>(j: &JointTable, y: &str, x: &[S], given: &[S]) -> Result<EffectTable> {
    let (xs, gs) = (strs(x), strs(given));
    let mut order: Vec<&str> = xs.clone();
    order.extend(&gs);
    order.push(y);
    let d = Dense::new(j, &order)?;
    let cy = *d.card.last().unwrap();
    let head = d.head(order.len() - 1);
    let (cx, cg) = (&d.card[..xs.len()], &d.card[xs.len()..order.len() - 1]);
    let mut rows = Vec::new();
    for xv in assignments(cx) {
        for gv in assignments(cg) {
            let mut key = xv.clone();
            key.extend(&gv);
            let k = flat(&d.card[..order.len() - 1], &key);
            if !(head[k] > 0.0) {
                return Err(Error::PositivityViolation(cell(&order[..order.len() - 1], &key)));
            }
            let dist = (0..cy).map(|yv| d.mass[k * cy + yv] / head[k]).collect();
            rows.push(EffectRow { do_values: xv.clone(), given_values: gv, dist });
        }
    }
    Ok(EffectTable { outcome: y.to_string(), do_vars: owned(&xs), given_vars: owned(&gs), rows })
}

fn owned(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Back-door adjustment `Σ_z P(y | x, z) P(z)`.
pub fn backdoor_adjust<S: AsRef<str>>(j: &JointTable, dag: &Dag, x: &str, y: &str, z: &[S]) -> Result<EffectTable> {
    backdoor_adjust_given::<&str>(j, dag, x, y, &strs(z), &[])
}

/// Back-door adjustment within strata of `given`:
/// `P(y | do(x), g) = Σ_z P(y | x, z, g) P(z | g)`, valid when `z ∪ given`
/// satisfies the back-door criterion.
pub fn backdoor_adjust_given<S: AsRef<str>>(
    j: &JointTable,
    dag: &Dag,
    x: &str,
    y: &str,
    z: &[S],
    given: &[S],
) -> Result<EffectTable> {
    let (zs, gs) = (strs(z), strs(given));
    reject_latent(dag, &zs)?;
    reject_latent(dag, &gs)?;
    let mut adj = zs.clone();
    adj.extend(&gs);
    satisfies_backdoor(dag, x, y, &adj)?.into_result("back-door")?;

    let mut order = gs.clone();
    order.extend(&zs);
    order.push(x);
    order.push(y);
    let d = Dense::new(j, &order)?;
    let (ng, nz) = (gs.len(), zs.len());
    let cg = &d.card[..ng];
    let cz = &d.card[ng..ng + nz];
    let (cx, cy) = (d.card[ng + nz], d.card[ng + nz + 1]);
    let p_g = d.head(ng);
    let p_gz = d.head(ng + nz);
    let p_gzx = d.head(ng + nz + 1);

    let mut rows = Vec::new();
    let mut out = vec![vec![vec![0.0; cy]; assignments(cg).count()]; cx];
    for (gi, gv) in assignments(cg).enumerate() {
        if !(p_g[gi] > 0.0) {
            return Err(Error::PositivityViolation(cell(&gs, &gv)));
        }
        for (zi, zv) in assignments(cz).enumerate() {
            let gz = gi * p_gz.len() / p_g.len() + zi;
            if p_gz[gz] == 0.0 {
                continue;
            }
            let w = p_gz[gz] / p_g[gi];
            for xv in 0..cx {
                let gzx = gz * cx + xv;
                if !(p_gzx[gzx] > 0.0) {
                    let mut key = gv.clone();
                    key.extend(&zv);
                    key.push(xv);
                    return Err(Error::PositivityViolation(cell(&order[..order.len() - 1], &key)));
                }
                for yv in 0..cy {
                    out[xv][gi][yv] += w * d.mass[gzx * cy + yv] / p_gzx[gzx];
                }
            }
        }
    }
    for (xv, per_g) in out.into_iter().enumerate() {
        for (gv, dist) in assignments(cg).zip(per_g) {
            rows.push(EffectRow { do_values: vec![xv], given_values: gv, dist: unit(dist) });
        }
    }
    Ok(EffectTable { outcome: y.to_string(), do_vars: vec![x.to_string()], given_vars: owned(&gs), rows })
}

/// Front-door adjustment through mediators `m`, within strata of `given`:
///
/// `P(y | do(x), g) = Σ_m P(m | x, g) Σ_x' P(y | x', m, g) P(x' | g)`.
///
/// Never reads a latent variable; `j` may or may not contain them.
pub fn frontdoor_adjust<S: AsRef<str>>(
    j: &JointTable,
    dag: &Dag,
    x: &str,
    y: &str,
    m: &[S],
    given: &[S],
) -> Result<EffectTable> {
    let (ms, gs) = (strs(m), strs(given));
    reject_latent(dag, &[x, y])?;
    reject_latent(dag, &ms)?;
    reject_latent(dag, &gs)?;
    satisfies_frontdoor_given(dag, x, y, &ms, &gs)?.into_result("front-door")?;

    let mut order = gs.clone();
    order.push(x);
    order.extend(&ms);
    order.push(y);
    let d = Dense::new(j, &order)?;
    let ng = gs.len();
    let cg = &d.card[..ng];
    let cx = d.card[ng];
    let cm = &d.card[ng + 1..ng + 1 + ms.len()];
    let cy = *d.card.last().unwrap();
    let nm: usize = cm.iter().product();
    let p_g = d.head(ng);
    let p_gx = d.head(ng + 1);
    let p_gxm = d.head(ng + 1 + ms.len());

    let n_given = p_g.len();
    let mut out = vec![vec![vec![0.0; cy]; n_given]; cx];
    for (gi, gv) in assignments(cg).enumerate() {
        if !(p_g[gi] > 0.0) {
            return Err(Error::PositivityViolation(cell(&gs, &gv)));
        }
        let bad_x = |xv: usize, mv: Option<usize>| {
            let mut names = gs.clone();
            names.push(x);
            let mut key = gv.clone();
            key.push(xv);
            if let Some(mi) = mv {
                names.extend(&ms);
                key.extend(assignments(cm).nth(mi).unwrap());
            }
            Error::PositivityViolation(cell(&names, &key))
        };
        for xv in 0..cx {
            if !(p_gx[gi * cx + xv] > 0.0) {
                return Err(bad_x(xv, None));
            }
        }
        for mi in 0..nm {
            // Inner sum, independent of the treatment value.
            let mut inner = vec![0.0; cy];
            let mut reachable = false;
            for xv in 0..cx {
                reachable |= p_gxm[(gi * cx + xv) * nm + mi] > 0.0;
            }
            if !reachable {
                continue;
            }
            for xp in 0..cx {
                let k = (gi * cx + xp) * nm + mi;
                if !(p_gxm[k] > 0.0) {
                    return Err(bad_x(xp, Some(mi)));
                }
                let w = p_gx[gi * cx + xp] / p_g[gi];
                for yv in 0..cy {
                    inner[yv] += w * d.mass[k * cy + yv] / p_gxm[k];
                }
            }
            for xv in 0..cx {
                let pm = p_gxm[(gi * cx + xv) * nm + mi] / p_gx[gi * cx + xv];
                for yv in 0..cy {
                    out[xv][gi][yv] += pm * inner[yv];
                }
            }
        }
    }
    let mut rows = Vec::new();
    for (xv, per_g) in out.into_iter().enumerate() {
        for (gv, dist) in assignments(cg).zip(per_g) {
            rows.push(EffectRow { do_values: vec![xv], given_values: gv, dist: unit(dist) });
        }
    }
    Ok(EffectTable { outcome: y.to_string(), do_vars: vec![x.to_string()], given_vars: owned(&gs), rows })
}

/// Ground truth by graph surgery: for every configuration of `do_vars`,
/// intervene on the full model, enumerate the post-intervention joint and
/// condition on `given`.
pub fn surgery_oracle<S: AsRef<str>>(scm: &DiscreteScm, y: &str, do_vars: &[S], given: &[S]) -> Result<EffectTable> {
    let (xs, gs) = (strs(do_vars), strs(given));
    let mut seen = vec![y];
    for v in xs.iter().chain(&gs) {
        if seen.contains(v) {
            return Err(Error::Overlap(v.to_string()));
        }
        seen.push(v);
    }
    let cx: Vec<usize> = xs.iter().map(|v| scm.card_of(v)).collect::<Result<_>>()?;
    let mut order = gs.clone();
    order.push(y);
    let mut rows = Vec::new();
    for xv in assignments(&cx) {
        let pairs: Vec<(&str, usize)> = xs.iter().copied().zip(xv.iter().copied()).collect();
        let post = scm.intervene(&pairs)?.exact_joint()?;
        let d = Dense::new(&post, &order)?;
        let cy = *d.card.last().unwrap();
        let head = d.head(gs.len());
        for (gi, gv) in assignments(&d.card[..gs.len()]).enumerate() {
            if !(head[gi] > 0.0) {
                let mut names = xs.clone();
                names.extend(&gs);
                let mut key = xv.clone();
                key.extend(&gv);
                return Err(Error::ZeroProbabilityEvidence(cell(&names, &key)));
            }
            let dist = (0..cy).map(|yv| d.mass[gi * cy + yv] / head[gi]).collect();
            rows.push(EffectRow { do_values: xv.clone(), given_values: gv, dist });
        }
    }
    Ok(EffectTable { outcome: y.to_string(), do_vars: owned(&xs), given_vars: owned(&gs), rows })
}

/// Mixtures of conditionals can overshoot 1 by an ulp or two; snap them back.
fn unit(dist: Vec<f64>) -> Vec<f64> {
    dist.into_iter().map(|p| p.clamp(0.0, 1.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemplateId;

    fn fig3(seed: u64) -> DiscreteScm {
        let dag = TemplateId::Fig3.build().unwrap();
        let dag = Dag::new(dag.names(), dag.edges().collect::<Vec<_>>(), ["U"]).unwrap();
        DiscreteScm::random_binary(dag, seed).unwrap()
    }

    #[test]
    fn frontdoor_recovers_surgery_on_fig3() {
        for seed in 0..5 {
            let scm = fig3(seed);
            let obs = scm.exact_joint().unwrap().marginal(&["Y_h", "X_c", "Z", "Y_f"]).unwrap();
            let fd = frontdoor_adjust::<&str>(&obs, scm.dag(), "X_c", "Y_f", &["Z"], &[]).unwrap();
            let truth = surgery_oracle::<&str>(&scm, "Y_f", &["X_c"], &[]).unwrap();
            assert!(fd.max_abs_diff(&truth).unwrap() < 1e-12, "seed {seed}");
            assert!(fd.normalization_error() < 1e-12);
        }
    }

    #[test]
    fn backdoor_on_latent_set_is_rejected() {
        let scm = fig3(1);
        let j = scm.exact_joint().unwrap();
        let err = backdoor_adjust(&j, scm.dag(), "X_c", "Y_f", &["U"]).unwrap_err();
        assert_eq!(err, Error::LatentAdjustment("U".into()));
        let err = backdoor_adjust::<&str>(&j, scm.dag(), "X_c", "Y_f", &[]).unwrap_err();
        assert!(matches!(err, Error::CriterionNotMet { .. }));
    }

    #[test]
    fn backdoor_matches_surgery_when_confounder_observed() {
        let dag = Dag::fully_observed(["U", "X", "Y"], [("U", "X"), ("U", "Y"), ("X", "Y")]).unwrap();
        let scm = DiscreteScm::random(dag, vec![3, 2, 2], 7, 0.05).unwrap();
        let j = scm.exact_joint().unwrap();
        let bd = backdoor_adjust(&j, scm.dag(), "X", "Y", &["U"]).unwrap();
        let truth = surgery_oracle::<&str>(&scm, "Y", &["X"], &[]).unwrap();
        assert!(bd.max_abs_diff(&truth).unwrap() < 1e-12);
        let naive = naive_conditional::<&str>(&j, "Y", &["X"], &[]).unwrap();
        assert!(naive.max_abs_diff(&truth).unwrap() > 1e-6);
    }

    #[test]
    fn positivity_failure_names_the_cell() {
        let dag = Dag::fully_observed(["X", "Z", "Y"], [("X", "Z"), ("Z", "Y")]).unwrap();
        let j = JointTable::new(
            vec!["X".into(), "Z".into(), "Y".into()],
            vec![2, 2, 2],
            vec![0.25, 0.25, 0.0, 0.0, 0.0, 0.0, 0.25, 0.25],
        )
        .unwrap();
        let err = frontdoor_adjust::<&str>(&j, &dag, "X", "Y", &["Z"], &[]).unwrap_err();
        assert_eq!(err, Error::PositivityViolation("{X=1, Z=0}".into()));
    }
}
