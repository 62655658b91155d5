//! Golden angle modulation (GAM) points and the low-projection 1-D
//! constellation built from them.
//!
//! A basic constellation `A_T` holds `T` distinct, negation-symmetric GAM
//! points (plus the origin when `T` is odd). The low-projection vector
//! `A_{M,T}` has length `M` and repeats some of those points so that any
//! dimension of the mother constellation only ever takes `T` values.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// `(1 - sqrt 5) / 2`, the golden angle expressed in turns.
pub const GOLDEN_OMEGA: f64 = -0.618_033_988_749_894_9;

/// Parameters of a `(rho, phi)`-GAM point set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GamParams {
    pub num_points: usize,
    pub power: f64,
    pub rho: f64,
    pub phi: f64,
}

impl GamParams {
    pub fn new(num_points: usize, power: f64, rho: f64, phi: f64) -> Result<Self> {
        let params = GamParams { num_points, power, rho, phi };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_points == 0 {
            return domain("GAM needs at least one point");
        }
        if !(self.power > 0.0) || !self.power.is_finite() {
            return domain(format!("GAM power must be positive, got {}", self.power));
        }
        if !(self.rho > -1.0) || !self.rho.is_finite() {
            return domain(format!("GAM rho must exceed -1, got {}", self.rho));
        }
        if !(0.0..=PI / 2.0).contains(&self.phi) {
            return domain(format!("GAM phi must lie in [0, pi/2], got {}", self.phi));
        }
        Ok(())
    }

    /// `c_norm = sqrt(2P / (N_p + 1))`.
    pub fn c_norm(&self) -> f64 {
        (2.0 * self.power / (self.num_points as f64 + 1.0)).sqrt()
    }

    /// Phase increment between consecutive points, `2 pi (phi + omega)`.
    pub fn phase_step(&self) -> f64 {
        2.0 * PI * (self.phi + GOLDEN_OMEGA)
    }
}

/// The `n`-th (1-based) point `c_norm sqrt(n + rho) exp(i 2 pi (phi + omega) n)`.
pub fn gam_point(n: usize, params: &GamParams) -> Result<Complex64> {
    params.validate()?;
    if n == 0 || n > params.num_points {
        return domain(format!(
            "GAM index {n} outside 1..={}",
            params.num_points
        ));
    }
    let radius = params.c_norm() * (n as f64 + params.rho).sqrt();
    Ok(Complex64::from_polar(radius, params.phase_step() * n as f64))
}

/// Basic constellation `A_T`: `T/2` GAM points followed by their negations,
/// with the origin appended for odd `T`.
pub fn build_basic_constellation(t: usize, power: f64, rho: f64, phi: f64) -> Result<Vec<Complex64>> {
    if t < 2 {
        return domain(format!("basic constellation needs T >= 2, got {t}"));
    }
    let params = GamParams::new(t / 2, power, rho, phi)?;
    let positive = (1..=params.num_points)
        .map(|n| gam_point(n, &params))
        .collect::<Result<Vec<_>>>()?;
    let mut points = positive.clone();
    points.extend(positive.iter().map(|p| -p));
    if t % 2 == 1 {
        points.push(Complex64::new(0.0, 0.0));
    }
    Ok(points)
}

/// Which points of `A_T` are repeated in `A_{M,T}` and how many extra
/// copies each receives.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OverlapPlan {
    pub points: Vec<usize>,
    pub counts: Vec<usize>,
}

impl OverlapPlan {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn total_repeats(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Extra copies of point `index`.
    pub fn repeats_of(&self, index: usize) -> usize {
        self.points
            .iter()
            .position(|&p| p == index)
            .map_or(0, |l| self.counts[l])
    }
}

/// A length-`M` 1-D constellation whose entries take exactly `T` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constellation1D {
    /// The length-`M` vector `A_{M,T}`.
    pub points: Vec<Complex64>,
    /// The `T` distinct values, i.e. `A_T`.
    pub basic: Vec<Complex64>,
    /// For each entry of `points`, its index into `basic`.
    pub projection_map: Vec<usize>,
}

impl Constellation1D {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distinct_count(&self) -> usize {
        self.basic.len()
    }

    pub fn mean(&self) -> Complex64 {
        self.points.iter().sum::<Complex64>() / self.points.len() as f64
    }
}

fn negation_index(basic: &[Complex64], i: usize) -> Option<usize> {
    let target = -basic[i];
    basic.iter().position(|&p| p == target)
}

/// Build `A_{M,T}` from `A_T` and an overlap plan. Each point is followed
/// immediately by its copies.
pub fn build_lp_vector(basic: &[Complex64], m: usize, plan: &OverlapPlan) -> Result<Constellation1D> {
    let t = basic.len();
    if t == 0 || t > m {
        return domain(format!("need 1 <= T <= M, got T={t}, M={m}"));
    }
    if plan.points.len() != plan.counts.len() {
        return Err(Error::InvalidPlan(
            "points and counts have different lengths".into(),
        ));
    }
    if plan.total_repeats() != m - t {
        return Err(Error::InvalidPlan(format!(
            "repeat counts sum to {}, expected M - T = {}",
            plan.total_repeats(),
            m - t
        )));
    }
    for (l, &p) in plan.points.iter().enumerate() {
        if p >= t {
            return Err(Error::InvalidPlan(format!("point index {p} outside A_T of size {t}")));
        }
        if plan.points[..l].contains(&p) {
            return Err(Error::InvalidPlan(format!("point index {p} listed twice")));
        }
        if plan.counts[l] == 0 {
            return Err(Error::InvalidPlan(format!("point index {p} has a zero count")));
        }
    }
    for i in 0..t {
        let mirror = negation_index(basic, i).ok_or_else(|| {
            Error::InvalidPlan(format!("A_T is not closed under negation at index {i}"))
        })?;
        if plan.repeats_of(i) != plan.repeats_of(mirror) {
            return Err(Error::InvalidPlan(format!(
                "point {i} and its negation {mirror} are repeated a different number of times"
            )));
        }
    }

    let mut points = Vec::with_capacity(m);
    let mut projection_map = Vec::with_capacity(m);
    for (i, &p) in basic.iter().enumerate() {
        for _ in 0..=plan.repeats_of(i) {
            points.push(p);
            projection_map.push(i);
        }
    }
    let out = Constellation1D { points, basic: basic.to_vec(), projection_map };
    let scale = basic.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1.0);
    if out.mean().norm() > 1e-12 * scale {
        return Err(Error::InvalidPlan("resulting vector does not have zero mean".into()));
    }
    Ok(out)
}

/// Deterministic plan following the low-projection rules: repeats go to
/// the lowest-energy points first, a point and its negation are always
/// repeated together, and multiplicities are kept as even as possible.
///
/// The origin (odd `T`) takes single repeats; every other point takes them
/// in `±` pairs. At each step the unit with the fewest repeats so far is
/// chosen, ties going to `±` pairs in ascending energy and then the origin.
pub fn default_overlap_plan(basic: &[Complex64], m: usize) -> Result<OverlapPlan> {
    let t = basic.len();
    if t > m {
        return domain(format!("T={t} exceeds M={m}"));
    }
    let mut repeats = m - t;
    if repeats == 0 {
        return Ok(OverlapPlan::empty());
    }

    let zero = basic.iter().position(|p| *p == Complex64::new(0.0, 0.0));
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..t {
        if Some(i) == zero {
            continue;
        }
        let j = negation_index(basic, i)
            .ok_or_else(|| Error::PlanInfeasible(format!("A_T is not symmetric at index {i}")))?;
        if i < j {
            pairs.push((i, j));
        }
    }
    pairs.sort_by(|a, b| {
        basic[a.0]
            .norm_sqr()
            .total_cmp(&basic[b.0].norm_sqr())
            .then(a.0.cmp(&b.0))
    });

    let mut counts = vec![0usize; t];
    if repeats % 2 == 1 {
        match zero {
            Some(z) => {
                counts[z] += 1;
                repeats -= 1;
            }
            None => {
                return Err(Error::PlanInfeasible(format!(
                    "M - T = {} is odd but A_T (T={t}) has no origin to absorb an unpaired repeat; choose T with the parity of M",
                    m - t
                )))
            }
        }
    }
    while repeats > 0 {
        let best_pair = pairs
            .iter()
            .copied()
            .min_by_key(|&(i, _)| counts[i]);
        let pair_count = best_pair.map(|(i, _)| counts[i]);
        let zero_count = zero.map(|z| counts[z]);
        let take_zero = match (pair_count, zero_count) {
            (Some(pc), Some(zc)) => zc < pc,
            (None, Some(_)) => true,
            _ => false,
        };
        if take_zero {
            counts[zero.expect("zero present")] += 2;
        } else {
            let (i, j) = best_pair.ok_or_else(|| {
                Error::PlanInfeasible("no symmetric pair available for repeats".into())
            })?;
            counts[i] += 1;
            counts[j] += 1;
        }
        repeats -= 2;
    }

    let mut plan = OverlapPlan::empty();
    for (i, &c) in counts.iter().enumerate() {
        if c > 0 {
            plan.points.push(i);
            plan.counts.push(c);
        }
    }
    Ok(plan)
}
