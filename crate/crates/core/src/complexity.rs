//! Closed-form operation counts of message-passing detection and the
//! complexity reduction ratio between two configurations.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Parameters of the operation-count formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityParams {
    /// Distinct projected values per dimension.
    pub t: u64,
    /// Users per resource.
    pub d_f: u64,
    /// Resources per user.
    pub n: u64,
    /// Number of users.
    pub j: u64,
    /// Detector iterations.
    pub i_t: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounts {
    pub mult: u64,
    pub add: u64,
}

/// Multiplications and additions of the detector:
///
/// `N_m = [(d_f+3) T^d_f N + (N-2) T N] J I_t + T (N-1) J`
///
/// `N_a = [(d_f+1) T^d_f N + (T-1) N + (T^(d_f-1) - 1) T N] J I_t`
pub fn mpa_op_counts(p: &ComplexityParams) -> Result<OpCounts> {
    if p.t == 0 || p.d_f == 0 || p.n == 0 || p.j == 0 {
        return domain("T, d_f, N and J must be positive");
    }
    let (t, d_f, n, j, i_t) = (p.t as i128, p.d_f as i128, p.n as i128, p.j as i128, p.i_t as i128);
    let td = t.pow(p.d_f as u32);
    let td1 = t.pow(p.d_f as u32 - 1);
    let mult = ((d_f + 3) * td * n + (n - 2) * t * n) * j * i_t + t * (n - 1) * j;
    let add = ((d_f + 1) * td * n + (t - 1) * n + (td1 - 1) * t * n) * j * i_t;
    if mult < 0 || add < 0 {
        return domain("operation count formula is negative for these parameters");
    }
    Ok(OpCounts { mult: mult as u64, add: add as u64 })
}

/// Complexity reduction of a low-projection configuration against a baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub lp: ComplexityParams,
    pub baseline: ComplexityParams,
    pub lp_counts: OpCounts,
    pub baseline_counts: OpCounts,
    pub crr_mult: f64,
    pub crr_add: f64,
}

/// `1 - ops(lp) / ops(baseline)` for both operation classes.
pub fn crr(lp: &ComplexityParams, baseline: &ComplexityParams) -> Result<ComplexityReport> {
    let lp_counts = mpa_op_counts(lp)?;
    let baseline_counts = mpa_op_counts(baseline)?;
    if baseline_counts.mult == 0 || baseline_counts.add == 0 {
        return domain("baseline performs no operations");
    }
    Ok(ComplexityReport {
        lp: *lp,
        baseline: *baseline,
        lp_counts,
        baseline_counts,
        crr_mult: 1.0 - lp_counts.mult as f64 / baseline_counts.mult as f64,
        crr_add: 1.0 - lp_counts.add as f64 / baseline_counts.add as f64,
    })
}
