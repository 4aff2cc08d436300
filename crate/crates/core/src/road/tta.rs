use crate::error::{Error, Result};

/// Maps a time-to-accident to a state index given strictly decreasing
/// thresholds `t_1 > … > t_{D+1}`. `tta > t_1` is the safe state 0 and
/// `tta < t_{D+1}` the accident state `D+1`; in between, state `i` covers
/// `[t_{i+1}, t_i)`. A value exactly on a threshold lands in the less
/// perilous of the two neighbouring states.
pub fn tta_discretize(tta: f64, thresholds: &[f64]) -> Result<usize> {
    if tta.is_nan() || tta < 0.0 {
        return Err(Error::NegativeTta(tta));
    }
    check_thresholds(thresholds)?;
    Ok(thresholds.iter().filter(|&&t| t > tta).count())
}

pub(crate) fn check_thresholds(t: &[f64]) -> Result<()> {
    if t.is_empty() {
        return Err(Error::Parameter("at least one TTA threshold required".into()));
    }
    if t.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::Parameter(format!("TTA thresholds must be positive and finite: {t:?}")));
    }
    if t.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::Parameter(format!("TTA thresholds must be strictly decreasing: {t:?}")));
    }
    Ok(())
}
