use serde::{Deserialize, Serialize};

use super::{check, FeasibilityQuery, SolverOptions, VerdictStatus};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    /// Largest tested `c` with an infeasible program.
    pub c: f64,
    /// Smallest tested `c` with a feasible program, if any was tested.
    pub feasible_above: Option<f64>,
    /// Every evaluation in order.
    pub evaluations: Vec<(f64, VerdictStatus)>,
}

/// Bisects on `c` for the largest value the program rules out.
///
/// Assumes monotonicity: raising `c` only relaxes the criterion rows. The
/// query's own `c` is ignored.
pub fn max_ruled_out_c(
    q: &FeasibilityQuery,
    c_lo: f64,
    c_hi: f64,
    resolution: f64,
    opts: &SolverOptions,
) -> Result<SearchReport> {
    if !(c_lo >= 0.0 && c_hi >= c_lo && c_hi.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidInterval { lo: c_lo, hi: c_hi });
    }
    let mut evaluations = Vec::new();
    let mut eval = |c: f64| -> Result<VerdictStatus> {
        let (_, verdict) = check(&q.with_c(c), opts)?;
        evaluations.push((c, verdict.status));
        match verdict.status {
            VerdictStatus::NumericalFailure => Err(Error::NumericalFailure(format!(
                "c = {c}: {}",
                verdict.message.unwrap_or_default()
            ))),
            status => Ok(status),
        }
    };

    if eval(c_lo)? == VerdictStatus::Feasible {
        return Err(Error::NoBracket { c_lo });
    }
    if c_hi == c_lo {
        return Ok(SearchReport { c: c_lo, feasible_above: None, evaluations });
    }
    if eval(c_hi)? == VerdictStatus::Infeasible {
        return Ok(SearchReport { c: c_hi, feasible_above: None, evaluations });
    }
    let (mut lo, mut hi) = (c_lo, c_hi);
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match eval(mid)? {
            VerdictStatus::Infeasible => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(SearchReport { c: lo, feasible_above: Some(hi), evaluations })
}
