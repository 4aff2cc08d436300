use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::names::{self, CLAIM_FUTURE, CLAIM_HISTORY, CONFOUNDER, DECISION, JOURNEY};

use super::scenario::{build_scenario, RoadRiskScenario};

/// One simulated journey. `states` holds `S_0 … S_D` and then the accident
/// indicator, so its last entry equals `y_f`. `u` is 0 under a null
/// confounder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JourneyRecord {
    pub y_h: usize,
    pub j_o: usize,
    pub u: usize,
    pub d: usize,
    pub traffic: Vec<usize>,
    pub states: Vec<usize>,
    pub y_f: usize,
}

/// Ancestral sampling of `n` journeys; row `r` depends only on `(seed, r)`.
pub fn simulate_journeys(s: &RoadRiskScenario, n: usize, seed: u64) -> Result<Vec<JourneyRecord>> {
    if n == 0 {
        return Err(Error::Parameter("journey count must be at least 1".into()));
    }
    let scm = build_scenario(s)?;
    let data = scm.sample(n, seed);
    let col = |name: &str| data.column(name);
    let (yh, jo, d, yf) = (col(CLAIM_HISTORY)?, col(JOURNEY)?, col(DECISION)?, col(CLAIM_FUTURE)?);
    let u = col(CONFOUNDER).ok();
    let traffic: Vec<usize> = (0..=s.depth).map(|i| col(&names::traffic(i))).collect::<Result<_>>()?;
    let states: Vec<usize> = (0..=s.depth).map(|i| col(&names::state(i))).collect::<Result<_>>()?;
    Ok(data
        .rows()
        .iter()
        .map(|r| {
            let mut st: Vec<usize> = states.iter().map(|&c| r[c]).collect();
            st.push(r[yf]);
            JourneyRecord {
                y_h: r[yh],
                j_o: r[jo],
                u: u.map_or(0, |c| r[c]),
                d: r[d],
                traffic: traffic.iter().map(|&c| r[c]).collect(),
                states: st,
                y_f: r[yf],
            }
        })
        .collect())
}

/// CSV with header `y_h,j_o,u,d,T0..TD,S0..S{D+1},y_f`.
pub fn write_journeys_csv<W: Write>(records: &[JourneyRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let (nt, ns) = records.first().map_or((0, 0), |r| (r.traffic.len(), r.states.len()));
    let mut header: Vec<String> = ["y_h", "j_o", "u", "d"].iter().map(|s| s.to_string()).collect();
    header.extend((0..nt).map(|i| format!("T{i}")));
    header.extend((0..ns).map(|i| format!("S{i}")));
    header.push("y_f".into());
    w.write_record(&header)?;
    for r in records {
        let mut row: Vec<String> = [r.y_h, r.j_o, r.u, r.d].iter().map(usize::to_string).collect();
        row.extend(r.traffic.iter().chain(&r.states).map(usize::to_string));
        row.push(r.y_f.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
