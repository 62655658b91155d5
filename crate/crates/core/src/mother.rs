//! N-dimensional mother constellations built from permuted copies of a
//! low-projection 1-D constellation.

use itertools::Itertools;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::gam::{build_lp_vector, Constellation1D, OverlapPlan};
use crate::metrics::rician_term;
use crate::rng::stream_rng;

/// A bijection on `0..M`. Position `m` of the permuted vector holds entry
/// `indices[m]` of the source.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation((0..m).collect())
    }

    pub fn new(indices: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; indices.len()];
        for &i in &indices {
            if i >= indices.len() || seen[i] {
                return domain(format!("{indices:?} is not a permutation"));
            }
            seen[i] = true;
        }
        Ok(Permutation(indices))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply<T: Copy>(&self, source: &[T]) -> Vec<T> {
        self.0.iter().map(|&i| source[i]).collect()
    }
}

/// `N x M` matrix whose row `n` is `pi_n` applied to the source vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotherConstellation {
    pub rows: Vec<Vec<Complex64>>,
    pub source: Constellation1D,
    pub permutations: Vec<Permutation>,
}

impl MotherConstellation {
    pub fn from_permutations(source: Constellation1D, permutations: Vec<Permutation>) -> Result<Self> {
        if permutations.is_empty() {
            return domain("mother constellation needs at least one dimension");
        }
        for p in &permutations {
            Permutation::new(p.0.clone())?;
            if p.len() != source.len() {
                return domain(format!(
                    "permutation length {} does not match M={}",
                    p.len(),
                    source.len()
                ));
            }
        }
        let rows = permutations.iter().map(|p| p.apply(&source.points)).collect();
        Ok(MotherConstellation { rows, source, permutations })
    }

    pub fn dims(&self) -> usize {
        self.rows.len()
    }

    pub fn size(&self) -> usize {
        self.rows[0].len()
    }

    pub fn column(&self, m: usize) -> Vec<Complex64> {
        self.rows.iter().map(|r| r[m]).collect()
    }

    /// Index into the basic constellation of entry `(n, m)`.
    pub fn projection(&self, n: usize, m: usize) -> usize {
        self.source.projection_map[self.permutations[n].0[m]]
    }

    /// True when no two columns coincide.
    pub fn is_uniquely_decodable(&self) -> bool {
        let m = self.size();
        (0..m).tuple_combinations().all(|(i, l)| {
            self.rows
                .iter()
                .any(|r| r[i] != r[l])
        })
    }
}

/// Cartesian product of `A_T` with itself `N` times. Column `m` holds the
/// digits of `m` in base `T`, least significant digit in the first row.
pub fn cartesian_mother(basic: &[Complex64], n: usize) -> Result<MotherConstellation> {
    let t = basic.len();
    if n == 0 || t == 0 {
        return domain("Cartesian construction needs N >= 1 and a non-empty A_T");
    }
    let m = t
        .checked_pow(n as u32)
        .ok_or_else(|| Error::Domain("T^N overflows".into()))?;
    let copies = m / t;
    let plan = if copies > 1 {
        OverlapPlan { points: (0..t).collect(), counts: vec![copies - 1; t] }
    } else {
        OverlapPlan::empty()
    };
    let source = build_lp_vector(basic, m, &plan)?;

    // Occurrence k of basic point v sits at source position v * copies + k.
    let permutations = (0..n)
        .map(|dim| {
            let mut used = vec![0usize; t];
            let stride = t.pow(dim as u32);
            let idx = (0..m)
                .map(|col| {
                    let v = (col / stride) % t;
                    let pos = v * copies + used[v];
                    used[v] += 1;
                    pos
                })
                .collect();
            Permutation(idx)
        })
        .collect();
    MotherConstellation::from_permutations(source, permutations)
}

fn check_noise(n0: f64) -> Result<()> {
    if !(n0 > 0.0) || !n0.is_finite() {
        return domain(format!("N0 must be positive, got {n0}"));
    }
    Ok(())
}

fn column_pair_distance(rows: &[Vec<Complex64>], i: usize, l: usize, kappa: f64, n0: f64) -> f64 {
    rows.iter()
        .map(|r| rician_term((r[i] - r[l]).norm_sqr(), kappa, n0))
        .sum()
}

/// Minimum and number of minimizing pairs of the column-pair distance.
fn distance_profile(rows: &[Vec<Complex64>], kappa: f64, n0: f64) -> (f64, usize) {
    let m = rows[0].len();
    let mut best = f64::INFINITY;
    let mut count = 0;
    for i in 0..m {
        for l in i + 1..m {
            let d = column_pair_distance(rows, i, l, kappa, n0);
            let tol = if best.is_finite() { 1e-12 * best.abs().max(1e-300) } else { 0.0 };
            if d < best - tol {
                best = d;
                count = 1;
            } else if (d - best).abs() <= tol {
                count += 1;
            }
        }
    }
    (best, count)
}

/// Minimum Rician effective distance between distinct columns.
pub fn mc_distance(mc: &MotherConstellation, kappa: f64, n0: f64) -> Result<f64> {
    check_noise(n0)?;
    if kappa < 0.0 || kappa.is_nan() {
        return domain(format!("kappa must be non-negative, got {kappa}"));
    }
    Ok(distance_profile(&mc.rows, kappa, n0).0)
}

/// Minimum Euclidean distance between columns (not squared).
pub fn med_mc(mc: &MotherConstellation) -> f64 {
    let m = mc.size();
    (0..m)
        .tuple_combinations()
        .map(|(i, l)| {
            mc.rows.iter().map(|r| (r[i] - r[l]).norm_sqr()).sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

/// Minimum product of squared per-dimension differences, taken over the
/// dimensions where the two columns differ.
pub fn mpd_mc(mc: &MotherConstellation) -> f64 {
    let m = mc.size();
    (0..m)
        .tuple_combinations()
        .map(|(i, l)| {
            mc.rows
                .iter()
                .filter(|r| r[i] != r[l])
                .map(|r| (r[i] - r[l]).norm_sqr())
                .product::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Limits for the permutation search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub restarts: usize,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { restarts: 8, max_sweeps: 50, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub mother: MotherConstellation,
    pub distance: f64,
    pub exhaustive: bool,
    pub budget_exhausted: bool,
}

/// Better profile: larger minimum, then fewer minimizing pairs.
fn improves(candidate: (f64, usize), current: (f64, usize)) -> bool {
    let tol = 1e-12 * current.0.abs().max(1e-300);
    candidate.0 > current.0 + tol || ((candidate.0 - current.0).abs() <= tol && candidate.1 < current.1)
}

/// Search the permutations of dimensions `2..N` (the first is the identity)
/// for the mother constellation with the largest `mc_distance`.
///
/// When `M = T^N` the Cartesian construction is returned directly. For
/// `N = 2, M <= 8` all `M!` second-dimension permutations are enumerated in
/// lexicographic order and the first maximizer is kept. Otherwise a
/// pairwise-swap local search with random restarts is used.
pub fn permutation_search(
    source: &Constellation1D,
    n: usize,
    kappa: f64,
    n0: f64,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    check_noise(n0)?;
    let m = source.len();
    let t = source.distinct_count();
    if n == 0 {
        return domain("N must be at least 1");
    }
    let capacity = (t as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if capacity < m as u128 {
        return domain(format!(
            "no uniquely decodable {n}-dimensional constellation exists: need ceil(M^(1/N)) <= T <= M, got T={t}, M={m}"
        ));
    }

    if capacity == m as u128 && n > 1 {
        let mother = cartesian_mother(&source.basic, n)?;
        let distance = mc_distance(&mother, kappa, n0)?;
        return Ok(SearchOutcome { mother, distance, exhaustive: true, budget_exhausted: false });
    }

    if n == 1 {
        let mother = MotherConstellation::from_permutations(source.clone(), vec![Permutation::identity(m)])?;
        let distance = mc_distance(&mother, kappa, n0)?;
        return Ok(SearchOutcome { mother, distance, exhaustive: true, budget_exhausted: false });
    }

    if n == 2 && m <= 8 {
        return exhaustive_two_dims(source, kappa, n0);
    }

    let runs: Vec<(Vec<Permutation>, (f64, usize), bool)> = (0..budget.restarts.max(1))
        .into_par_iter()
        .map(|r| swap_search(source, n, kappa, n0, budget, r as u64))
        .collect();
    let mut best = 0;
    for (r, run) in runs.iter().enumerate() {
        if improves(run.1, runs[best].1) {
            best = r;
        }
    }
    let (perms, profile, exhausted) = runs.into_iter().nth(best).expect("at least one restart");
    let mother = MotherConstellation::from_permutations(source.clone(), perms)?;
    Ok(SearchOutcome { mother, distance: profile.0, exhaustive: false, budget_exhausted: exhausted })
}

fn exhaustive_two_dims(source: &Constellation1D, kappa: f64, n0: f64) -> Result<SearchOutcome> {
    let m = source.len();
    let first = source.points.clone();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for perm in (0..m).permutations(m) {
        let second: Vec<Complex64> = perm.iter().map(|&i| source.points[i]).collect();
        let rows = [first.clone(), second];
        let d = distance_profile(&rows, kappa, n0).0;
        let better = match &best {
            None => true,
            Some((b, _)) => d > *b + 1e-12 * b.abs().max(1e-300),
        };
        if better {
            best = Some((d, perm));
        }
    }
    let (distance, perm) = best.expect("M >= 1");
    let mother = MotherConstellation::from_permutations(
        source.clone(),
        vec![Permutation::identity(m), Permutation(perm)],
    )?;
    Ok(SearchOutcome { mother, distance, exhaustive: true, budget_exhausted: false })
}

fn swap_search(
    source: &Constellation1D,
    n: usize,
    kappa: f64,
    n0: f64,
    budget: &SearchBudget,
    restart: u64,
) -> (Vec<Permutation>, (f64, usize), bool) {
    let m = source.len();
    let mut rng = stream_rng(budget.seed, restart);
    let mut perms = vec![Permutation::identity(m)];
    for _ in 1..n {
        let mut p: Vec<usize> = (0..m).collect();
        p.shuffle(&mut rng);
        perms.push(Permutation(p));
    }
    let mut rows: Vec<Vec<Complex64>> = perms.iter().map(|p| p.apply(&source.points)).collect();
    let mut current = distance_profile(&rows, kappa, n0);

    for _ in 0..budget.max_sweeps {
        let mut changed = false;
        for dim in 1..n {
            for a in 0..m {
                for b in a + 1..m {
                    if rows[dim][a] == rows[dim][b] {
                        continue;
                    }
                    rows[dim].swap(a, b);
                    let candidate = distance_profile(&rows, kappa, n0);
                    if improves(candidate, current) {
                        perms[dim].0.swap(a, b);
                        current = candidate;
                        changed = true;
                    } else {
                        rows[dim].swap(a, b);
                    }
                }
            }
        }
        if !changed {
            return (perms, current, false);
        }
    }
    (perms, current, true)
}
