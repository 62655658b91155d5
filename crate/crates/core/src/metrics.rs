//! Distance and error-probability metrics for superimposed codewords.
//!
//! For a transmitted superimposed codeword `w` and a competitor `w'`, the
//! per-resource squared distance is `tau(k) = |w(k) - w'(k)|^2`. The Rician
//! distance adds, per resource, a line-of-sight part
//! `kappa tau / (1 + kappa + tau/(4 N0))` and a scattered part
//! `4 N0 ln(1 + tau / (4 N0 (1 + kappa)))`.

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codebook::CodebookSet;
use crate::error::{domain, Error, Result};
use crate::rng::stream_rng;

/// Default limit on `M^J` for exhaustive pair enumeration.
pub const DEFAULT_EXACT_CAP: u128 = 4096;

/// Line-of-sight part of the per-resource Rician distance. Infinite
/// `kappa` gives the AWGN limit `tau`.
pub fn los_term(tau: f64, kappa: f64, n0: f64) -> f64 {
    if kappa.is_infinite() {
        tau
    } else {
        kappa * tau / (1.0 + kappa + tau / (4.0 * n0))
    }
}

/// Scattered part of the per-resource Rician distance.
pub fn scatter_term(tau: f64, kappa: f64, n0: f64) -> f64 {
    if kappa.is_infinite() {
        0.0
    } else {
        4.0 * n0 * (tau / (4.0 * n0 * (1.0 + kappa))).ln_1p()
    }
}

/// Per-resource Rician distance; increasing in `tau`, zero at `tau = 0`.
pub fn rician_term(tau: f64, kappa: f64, n0: f64) -> f64 {
    los_term(tau, kappa, n0) + scatter_term(tau, kappa, n0)
}

fn check_channel(kappa: f64, n0: f64) -> Result<()> {
    if !(n0 > 0.0) || !n0.is_finite() {
        return domain(format!("N0 must be positive and finite, got {n0}"));
    }
    if !(kappa >= 0.0) {
        return domain(format!("kappa must be non-negative, got {kappa}"));
    }
    Ok(())
}

/// Rician pair distance `d^2` for per-resource squared distances `tau`.
pub fn rician_pair_distance(tau: &[f64], kappa: f64, n0: f64) -> Result<f64> {
    check_channel(kappa, n0)?;
    if let Some(t) = tau.iter().find(|t| !(**t >= 0.0)) {
        return domain(format!("element distances must be non-negative, got {t}"));
    }
    Ok(tau.iter().map(|&t| rician_term(t, kappa, n0)).sum())
}

/// Chernoff bound `exp(-d^2 / (4 N0)) / 2` on the pairwise error probability.
pub fn pep_chernoff(d2: f64, n0: f64) -> f64 {
    0.5 * (-d2 / (4.0 * n0)).exp()
}

/// Coefficients of an exponential bound `Q(x) <= sum a_i exp(-b_i x^2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QBoundParams {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl QBoundParams {
    /// Single-term bound that reproduces the Chernoff bound.
    pub fn chernoff() -> Self {
        QBoundParams { a: vec![0.5], b: vec![0.5] }
    }

    /// Two-term bound `Q(x) <= exp(-x^2/2)/12 + exp(-2x^2/3)/4`.
    pub fn two_term() -> Self {
        QBoundParams { a: vec![1.0 / 12.0, 0.25], b: vec![0.5, 2.0 / 3.0] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.is_empty() || self.a.len() != self.b.len() {
            return domain("Q-function bound needs matching, non-empty a and b");
        }
        if self.a.iter().chain(&self.b).any(|v| !(*v > 0.0)) {
            return domain("Q-function bound coefficients must be positive");
        }
        Ok(())
    }
}

/// Pairwise error probability bound from the Rician moment generating
/// function, averaged through an exponential Q-function bound.
pub fn pep_general(tau: &[f64], kappa: f64, n0: f64, qb: &QBoundParams) -> Result<f64> {
    check_channel(kappa, n0)?;
    qb.validate()?;
    if tau.iter().any(|t| !(*t >= 0.0)) {
        return domain("element distances must be non-negative");
    }
    let value = qb
        .a
        .iter()
        .zip(&qb.b)
        .map(|(&a, &b)| {
            let prod: f64 = tau
                .iter()
                .map(|&t| {
                    let x = b * t / (2.0 * n0);
                    if kappa.is_infinite() {
                        (-x).exp()
                    } else {
                        let den = 1.0 + kappa + x;
                        (1.0 + kappa) / den * (-kappa * x / den).exp()
                    }
                })
                .product();
            a * prod
        })
        .sum();
    Ok(value)
}

/// Noise level for a given `Eb/N0` in dB, with `Eb` the mean codeword
/// energy divided by `log2 M`.
pub fn noise_from_ebn0(cbs: &CodebookSet, ebn0_db: f64) -> f64 {
    let eb = cbs.mean_codeword_energy() / cbs.bits_per_symbol() as f64;
    eb / 10f64.powf(ebn0_db / 10.0)
}

/// How `delta_min` searches the superimposed constellation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeltaMode {
    /// All `M^J (M^J - 1) / 2` pairs; refused above `cap`.
    Exhaustive { cap: u128 },
    /// Minimum over `t_max` rounds of all pairs among `q` sampled
    /// superimposed codewords. An upper estimate of the true minimum.
    MonteCarlo { q: usize, t_max: usize, seed: u64 },
    /// Exact minimum by branch and bound over per-user codeword differences.
    BranchAndBound,
}

impl DeltaMode {
    pub fn exhaustive() -> Self {
        DeltaMode::Exhaustive { cap: DEFAULT_EXACT_CAP }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DeltaMode::Exhaustive { .. } => "exhaustive",
            DeltaMode::MonteCarlo { .. } => "montecarlo",
            DeltaMode::BranchAndBound => "branch_and_bound",
        }
    }
}

/// Index tuple (one codeword per user) of superimposed codeword `index`
/// in mixed radix `M`.
fn tuple_of(index: u128, m: usize, j: usize) -> Vec<usize> {
    let mut rest = index;
    (0..j)
        .map(|_| {
            let d = (rest % m as u128) as usize;
            rest /= m as u128;
            d
        })
        .collect()
}

fn all_superimposed(cbs: &CodebookSet) -> Vec<Vec<Complex64>> {
    let size = cbs.superimposed_size() as usize;
    (0..size)
        .into_par_iter()
        .map(|i| cbs.superimpose(&tuple_of(i as u128, cbs.m, cbs.j())))
        .collect()
}

fn pair_value<F: Fn(f64) -> f64>(a: &[Complex64], b: &[Complex64], f: &F) -> f64 {
    a.iter().zip(b).map(|(x, y)| f((x - y).norm_sqr())).sum()
}

/// Minimum of `sum_k f(tau(k))` over all pairs of a point list.
fn min_over_pairs<F: Fn(f64) -> f64 + Sync>(points: &[Vec<Complex64>], f: &F) -> f64 {
    (0..points.len())
        .into_par_iter()
        .map(|i| {
            points[i + 1..]
                .iter()
                .map(|q| pair_value(&points[i], q, f))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Monte-Carlo minimum: `t_max` rounds, each over all pairs of `q`
/// sampled superimposed codewords. Identical index tuples are skipped.
/// With `q >= M^J` the whole constellation is used once.
fn monte_carlo_min<F: Fn(f64) -> f64 + Sync>(
    cbs: &CodebookSet,
    q: usize,
    t_max: usize,
    seed: u64,
    f: &F,
) -> f64 {
    if q as u128 >= cbs.superimposed_size() {
        return min_over_pairs(&all_superimposed(cbs), f);
    }
    (0..t_max.max(1))
        .map(|round| {
            let mut rng = stream_rng(seed, round as u64);
            let mut tuples: Vec<Vec<usize>> = (0..q)
                .map(|_| (0..cbs.j()).map(|_| rng.random_range(0..cbs.m)).collect())
                .collect();
            tuples.sort();
            tuples.dedup();
            let points: Vec<Vec<Complex64>> = tuples.iter().map(|t| cbs.superimpose(t)).collect();
            min_over_pairs(&points, f)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Distinct codeword differences of one user, as `(resource, delta)` lists
/// sorted by energy; the zero difference comes first.
fn user_differences(cbs: &CodebookSet, j: usize) -> Vec<Vec<Complex64>> {
    let res = &cbs.graph.resources_of_user[j];
    let cw = &cbs.users[j].codewords;
    let mut diffs: Vec<Vec<Complex64>> = Vec::new();
    for a in 0..cbs.m {
        for b in 0..cbs.m {
            let d: Vec<Complex64> = res.iter().map(|&k| cw[a][k] - cw[b][k]).collect();
            if !diffs.contains(&d) {
                diffs.push(d);
            }
        }
    }
    let energy = |d: &Vec<Complex64>| d.iter().map(|x| x.norm_sqr()).sum::<f64>();
    diffs.sort_by(|x, y| energy(x).total_cmp(&energy(y)));
    diffs
}

/// Minimum over single-user errors of `sum_k f(tau(k))`.
fn single_error_min<F: Fn(f64) -> f64>(cbs: &CodebookSet, f: &F) -> f64 {
    (0..cbs.j())
        .map(|j| {
            let cw = &cbs.users[j].codewords;
            let mut best = f64::INFINITY;
            for a in 0..cbs.m {
                for b in a + 1..cbs.m {
                    best = best.min(pair_value(&cw[a], &cw[b], f));
                }
            }
            best
        })
        .fold(f64::INFINITY, f64::min)
}

struct BranchState<'a> {
    order: Vec<usize>,
    diffs: Vec<Vec<Vec<Complex64>>>,
    resources: &'a [Vec<usize>],
    /// For each position in `order`, resources completed by that user.
    completes: Vec<Vec<usize>>,
}

fn branch<F: Fn(f64) -> f64>(
    st: &BranchState,
    depth: usize,
    acc: &mut [Complex64],
    bound: f64,
    nonzero: bool,
    best: &AtomicU64,
    f: &F,
) {
    let current = f64::from_bits(best.load(Ordering::Relaxed));
    if bound >= current {
        return;
    }
    if depth == st.order.len() {
        if nonzero {
            best.fetch_min(bound.to_bits(), Ordering::Relaxed);
        }
        return;
    }
    let user = st.order[depth];
    let res = &st.resources[user];
    for (di, d) in st.diffs[user].iter().enumerate() {
        for (n, &k) in res.iter().enumerate() {
            acc[k] += d[n];
        }
        let added: f64 = st.completes[depth].iter().map(|&k| f(acc[k].norm_sqr())).sum();
        branch(st, depth + 1, acc, bound + added, nonzero || di != 0, best, f);
        for (n, &k) in res.iter().enumerate() {
            acc[k] -= d[n];
        }
    }
}

/// Exact `min sum_k f(tau(k))` over distinct superimposed pairs for any
/// increasing `f` with `f(0) = 0`. A pair is a choice of difference vector
/// per user, not all zero; resources are charged once all their users are
/// fixed, which gives a valid lower bound for pruning.
fn branch_and_bound_min<F: Fn(f64) -> f64 + Sync>(cbs: &CodebookSet, f: &F) -> f64 {
    let j = cbs.j();
    let k = cbs.k();
    // Fix users resource by resource so resources complete early.
    let mut order = Vec::with_capacity(j);
    for r in 0..k {
        for &u in &cbs.graph.users_of_resource[r] {
            if !order.contains(&u) {
                order.push(u);
            }
        }
    }
    let mut remaining: Vec<usize> = cbs.graph.users_of_resource.iter().map(|u| u.len()).collect();
    let completes = order
        .iter()
        .map(|&u| {
            let mut done = Vec::new();
            for &r in &cbs.graph.resources_of_user[u] {
                remaining[r] -= 1;
                if remaining[r] == 0 {
                    done.push(r);
                }
            }
            done
        })
        .collect();
    let st = BranchState {
        order,
        diffs: (0..j).map(|u| user_differences(cbs, u)).collect(),
        resources: &cbs.graph.resources_of_user,
        completes,
    };

    // Single-user errors are feasible, so their minimum seeds the bound;
    // nudge it up so equal-valued pairs are still visited.
    let seed = single_error_min(cbs, f);
    let best = AtomicU64::new((seed * (1.0 + 1e-12) + 1e-300).to_bits());
    let first = st.order[0];
    (0..st.diffs[first].len()).into_par_iter().for_each(|di| {
        let mut acc = vec![Complex64::new(0.0, 0.0); k];
        let d = &st.diffs[first][di];
        for (n, &r) in st.resources[first].iter().enumerate() {
            acc[r] += d[n];
        }
        let added: f64 = st.completes[0].iter().map(|&r| f(acc[r].norm_sqr())).sum();
        branch(&st, 1, &mut acc, added, di != 0, &best, f);
    });
    f64::from_bits(best.load(Ordering::Relaxed)).min(seed)
}

fn min_metric<F: Fn(f64) -> f64 + Sync>(cbs: &CodebookSet, mode: &DeltaMode, f: &F) -> Result<f64> {
    match *mode {
        DeltaMode::Exhaustive { cap } => {
            let size = cbs.superimposed_size();
            if size > cap {
                return Err(Error::CapExceeded { size, cap });
            }
            Ok(min_over_pairs(&all_superimposed(cbs), f))
        }
        DeltaMode::MonteCarlo { q, t_max, seed } => {
            if q < 2 {
                return domain("Monte-Carlo search needs Q >= 2");
            }
            Ok(monte_carlo_min(cbs, q, t_max, seed, f))
        }
        DeltaMode::BranchAndBound => Ok(branch_and_bound_min(cbs, f)),
    }
}

/// Minimum Rician distance over pairs of superimposed codewords.
pub fn delta_min(cbs: &CodebookSet, kappa: f64, n0: f64, mode: &DeltaMode) -> Result<f64> {
    check_channel(kappa, n0)?;
    min_metric(cbs, mode, &|t| rician_term(t, kappa, n0))
}

/// Minimum squared Euclidean distance of the superimposed constellation.
pub fn med_squared(cbs: &CodebookSet, mode: &DeltaMode) -> Result<f64> {
    min_metric(cbs, mode, &|t| t)
}

/// Per-resource superimposed constellation of the distinct values the
/// connected users take there, or `None` if some user's codebook is not
/// the Cartesian product of its per-resource values.
pub fn resource_sum_sets(cbs: &CodebookSet) -> Option<Vec<Vec<Complex64>>> {
    for j in 0..cbs.j() {
        let product: usize = cbs.graph.resources_of_user[j]
            .iter()
            .map(|&k| cbs.projection(j, k).0.len())
            .product();
        if product != cbs.m {
            return None;
        }
    }
    let sets = (0..cbs.k())
        .map(|k| {
            let mut sums = vec![Complex64::new(0.0, 0.0)];
            for &j in &cbs.graph.users_of_resource[k] {
                let (values, _) = cbs.projection(j, k);
                sums = sums
                    .iter()
                    .flat_map(|s| values.iter().map(move |v| s + v))
                    .collect();
            }
            sums
        })
        .collect();
    Some(sets)
}

/// Minimum squared distance between points of a set (zero if two coincide).
pub fn set_med_squared(points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            best = best.min((points[a] - points[b]).norm_sqr());
        }
    }
    best
}

/// Which path `med_superimposed` took.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MedMethod {
    ResourceSums,
    Exhaustive,
    BranchAndBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MedReport {
    /// Minimum Euclidean distance (not squared).
    pub med: f64,
    pub method: MedMethod,
}

/// Minimum Euclidean distance of the superimposed constellation. Codebooks
/// that are per-resource Cartesian products use the per-resource sum
/// sets; small ones are enumerated; the rest use branch and bound.
pub fn med_superimposed(cbs: &CodebookSet) -> MedReport {
    if let Some(sets) = resource_sum_sets(cbs) {
        let sq = sets.iter().map(|s| set_med_squared(s)).fold(f64::INFINITY, f64::min);
        return MedReport { med: sq.sqrt(), method: MedMethod::ResourceSums };
    }
    if cbs.superimposed_size() <= DEFAULT_EXACT_CAP {
        let sq = min_over_pairs(&all_superimposed(cbs), &|t| t);
        return MedReport { med: sq.sqrt(), method: MedMethod::Exhaustive };
    }
    let sq = branch_and_bound_min(cbs, &|t| t);
    MedReport { med: sq.sqrt(), method: MedMethod::BranchAndBound }
}

/// Minimum squared distance over `pairs` sampled error events: a random
/// superimposed codeword against a copy in which a random non-empty subset
/// of the users on one random resource is re-drawn.
pub fn sampled_med_squared(cbs: &CodebookSet, pairs: usize, seed: u64) -> f64 {
    let chunks = 64usize;
    let per = pairs.div_ceil(chunks);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let mut best = f64::INFINITY;
            for _ in 0..per.min(pairs.saturating_sub(c * per)) {
                let w: Vec<usize> = (0..cbs.j()).map(|_| rng.random_range(0..cbs.m)).collect();
                let k = rng.random_range(0..cbs.k());
                let mut v = w.clone();
                while v == w {
                    for &j in &cbs.graph.users_of_resource[k] {
                        if rng.random_bool(0.5) {
                            v[j] = rng.random_range(0..cbs.m);
                        }
                    }
                }
                let a = cbs.superimpose(&w);
                let b = cbs.superimpose(&v);
                best = best.min(pair_value(&a, &b, &|t| t));
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Components of the lower bound `d1_min + d2_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaLb {
    pub d1: f64,
    pub d2: f64,
    pub total: f64,
}

/// `d2_min` over single-user errors (exact) plus `d1_min` over
/// superimposed pairs estimated with the given Monte-Carlo settings.
pub fn delta_lb(cbs: &CodebookSet, kappa: f64, n0: f64, q: usize, t_max: usize, seed: u64) -> Result<DeltaLb> {
    check_channel(kappa, n0)?;
    let d1 = min_metric(cbs, &DeltaMode::MonteCarlo { q, t_max, seed }, &|t| los_term(t, kappa, n0))?;
    let d2 = single_error_min(cbs, &|t| scatter_term(t, kappa, n0));
    Ok(DeltaLb { d1, d2, total: d1 + d2 })
}

/// Same as [`delta_lb`] but with `d1_min` computed exactly.
pub fn delta_lb_exact(cbs: &CodebookSet, kappa: f64, n0: f64) -> Result<DeltaLb> {
    check_channel(kappa, n0)?;
    let d1 = branch_and_bound_min(cbs, &|t| los_term(t, kappa, n0));
    let d2 = single_error_min(cbs, &|t| scatter_term(t, kappa, n0));
    Ok(DeltaLb { d1, d2, total: d1 + d2 })
}

/// Minimum product distance over all users' codeword pairs, taken over
/// the resources where the two codewords differ.
pub fn mpd_codebook(cbs: &CodebookSet) -> f64 {
    let mut best = f64::INFINITY;
    for u in &cbs.users {
        for a in 0..cbs.m {
            for b in a + 1..cbs.m {
                let p: f64 = u.codewords[a]
                    .iter()
                    .zip(&u.codewords[b])
                    .filter(|(x, y)| x != y)
                    .map(|(x, y)| (x - y).norm_sqr())
                    .product();
                best = best.min(p);
            }
        }
    }
    best
}

/// Union bound on the average bit error rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AberBound {
    pub value: f64,
    /// Standard error of a sampled estimate; zero when exact.
    pub std_error: f64,
    pub exact: bool,
}

fn bit_errors(labels: &[Vec<usize>], w: &[usize], v: &[usize]) -> u32 {
    w.iter()
        .zip(v)
        .enumerate()
        .map(|(j, (&a, &b))| (labels[j][a] ^ labels[j][b]).count_ones())
        .sum()
}

/// Union bound on the bit error rate with the Chernoff PEP, using each
/// user's stored labels. Exact up to `cap` superimposed codewords,
/// otherwise estimated from `samples` random pairs.
pub fn aber_union_bound(
    cbs: &CodebookSet,
    kappa: f64,
    n0: f64,
    cap: u128,
    samples: usize,
    seed: u64,
) -> Result<AberBound> {
    check_channel(kappa, n0)?;
    let labels: Vec<Vec<usize>> = (0..cbs.j()).map(|j| cbs.label_values(j)).collect();
    let size = cbs.superimposed_size();
    let norm = (cbs.j() * cbs.bits_per_symbol()) as f64;
    let term = |w: &[usize], v: &[usize], a: &[Complex64], b: &[Complex64]| {
        let d2 = pair_value(a, b, &|t| rician_term(t, kappa, n0));
        bit_errors(&labels, w, v) as f64 * pep_chernoff(d2, n0)
    };
    if size <= cap {
        let n = size as usize;
        let tuples: Vec<Vec<usize>> = (0..n).map(|i| tuple_of(i as u128, cbs.m, cbs.j())).collect();
        let points = all_superimposed(cbs);
        let total: f64 = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .filter(|&l| l != i)
                    .map(|l| term(&tuples[i], &tuples[l], &points[i], &points[l]))
                    .sum::<f64>()
            })
            .sum();
        return Ok(AberBound { value: total / (n as f64 * norm), std_error: 0.0, exact: true });
    }
    if samples < 2 {
        return domain("sampled union bound needs at least two samples");
    }
    let mut rng = stream_rng(seed, 0);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let w: Vec<usize> = (0..cbs.j()).map(|_| rng.random_range(0..cbs.m)).collect();
        let mut v = w.clone();
        while v == w {
            v = (0..cbs.j()).map(|_| rng.random_range(0..cbs.m)).collect();
        }
        let x = term(&w, &v, &cbs.superimpose(&w), &cbs.superimpose(&v));
        sum += x;
        sum_sq += x * x;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    let scale = (size as f64 - 1.0) / norm;
    Ok(AberBound { value: mean * scale, std_error: (var / n).sqrt() * scale, exact: false })
}

/// Summary written by the `eval` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub delta_min: f64,
    pub med: f64,
    pub med_method: MedMethod,
    pub mpd: f64,
    pub delta_lb: f64,
    pub mode: String,
    #[serde(rename = "Q")]
    pub q: usize,
    pub t_max: usize,
    pub seed: u64,
    #[serde(with = "crate::codebook::kappa_serde")]
    pub kappa: Option<f64>,
    pub ebn0_db: f64,
    pub n0: f64,
}

/// Evaluate every metric on a unit-energy copy of the codebook.
pub fn metric_report(
    cbs: &CodebookSet,
    kappa: f64,
    ebn0_db: f64,
    mode: &DeltaMode,
    q: usize,
    t_max: usize,
    seed: u64,
) -> Result<MetricReport> {
    let cbs = cbs.normalized();
    let n0 = noise_from_ebn0(&cbs, ebn0_db);
    let delta = delta_min(&cbs, kappa, n0, mode)?;
    let lb = delta_lb(&cbs, kappa, n0, q, t_max, seed)?;
    let med = med_superimposed(&cbs);
    Ok(MetricReport {
        delta_min: delta,
        med: med.med,
        med_method: med.method,
        mpd: mpd_codebook(&cbs),
        delta_lb: lb.total,
        mode: mode.name().to_string(),
        q,
        t_max,
        seed,
        kappa: Some(kappa),
        ebn0_db,
        n0,
    })
}
