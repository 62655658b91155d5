//! Operator and GAM parameter optimization and the end-to-end design
//! pipeline.
//!
//! When `T^N = M` every user's codebook is a per-resource Cartesian
//! product, and the minimum distance of the superimposed constellation is
//! the minimum distance of the per-resource sum set
//! `{z_1 a_1 + ... + z_df a_df : a_i in A_T}`; that is maximized directly.
//! Otherwise the lower bound `d1_min + d2_min` is maximized, with `d1_min`
//! estimated by Monte Carlo under a fixed seed.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codebook::{
    assemble, builtin_factor_graph, builtin_signature, CodebookSet, FactorGraph, OperatorParams, Overload,
    SignaturePattern,
};
use crate::error::{domain, Result};
use crate::gam::{build_basic_constellation, build_lp_vector, default_overlap_plan, OverlapPlan};
use crate::labeling::label_codebook_set;
use crate::metrics::{delta_lb, noise_from_ebn0, set_med_squared};
use crate::mother::{permutation_search, MotherConstellation, Permutation, SearchBudget};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// Minimum distance of the per-resource sum set (requires `T^N = M`).
    SumSetMed,
    /// Lower bound `d1_min + d2_min` on the Rician minimum distance.
    DeltaLowerBound,
}

impl ObjectiveKind {
    /// The objective that applies to an `M`-ary, `N`-dimensional design with
    /// `T` projections.
    pub fn for_sizes(m: usize, t: usize, n: usize) -> Self {
        if (t as u128).checked_pow(n as u32) == Some(m as u128) {
            ObjectiveKind::SumSetMed
        } else {
            ObjectiveKind::DeltaLowerBound
        }
    }
}

/// Everything the optimizer holds fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationProblem {
    pub objective: ObjectiveKind,
    pub m: usize,
    pub t: usize,
    pub overload: Overload,
    pub plan: OverlapPlan,
    /// Per-dimension permutations of the low-projection vector.
    pub permutations: Vec<Permutation>,
    #[serde(with = "crate::codebook::kappa_serde::plain")]
    pub kappa: f64,
    pub ebn0_db: f64,
    pub max_iters: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Monte-Carlo sample size and rounds for `d1_min`.
    pub q: usize,
    pub t_max: usize,
    /// Optional starting point used by the first restart.
    #[serde(default)]
    pub initial: Option<OperatorParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub params: OperatorParams,
    pub objective: f64,
    /// Objective after every iteration of the winning restart.
    pub trace: Vec<f64>,
    pub restart: usize,
    pub evaluations: usize,
    #[serde(skip)]
    pub wall_time_s: f64,
}

/// Default iteration cap: 30 for 150% overload, 25 for 200%.
pub fn default_max_iters(overload: Overload) -> usize {
    match overload {
        Overload::P150 => 30,
        Overload::P200 => 25,
    }
}

/// Noise level for a codebook scaled to unit mean codeword energy.
pub fn unit_energy_noise(m: usize, ebn0_db: f64) -> f64 {
    1.0 / (m.trailing_zeros() as f64 * 10f64.powf(ebn0_db / 10.0))
}

struct Structure {
    fg: FactorGraph,
    pattern: SignaturePattern,
}

impl OptimizationProblem {
    fn structure(&self) -> Structure {
        Structure { fg: builtin_factor_graph(self.overload), pattern: builtin_signature(self.overload) }
    }

    /// `MJ/K`, the required sum of the energies.
    pub fn energy_sum(&self) -> f64 {
        let fg = builtin_factor_graph(self.overload);
        (self.m * fg.j) as f64 / fg.k as f64
    }

    pub fn d_f(&self) -> usize {
        builtin_factor_graph(self.overload).d_f
    }

    pub fn validate(&self) -> Result<()> {
        let fg = builtin_factor_graph(self.overload);
        if self.t < 2 || self.t > self.m {
            return domain(format!("need 2 <= T <= M, got T={}, M={}", self.t, self.m));
        }
        if self.permutations.len() != fg.n {
            return domain("one permutation per occupied resource is required");
        }
        if ObjectiveKind::for_sizes(self.m, self.t, fg.n) != self.objective {
            return domain("objective kind does not match the T^N = M condition");
        }
        if !(self.kappa >= 0.0) {
            return domain("kappa must be non-negative");
        }
        if let Some(p) = &self.initial {
            p.check_constraints(self.m, fg.j, fg.k, self.t)?;
        }
        Ok(())
    }

    /// Mother constellation for the given GAM shape.
    pub fn mother(&self, rho: f64, phi: f64) -> Result<MotherConstellation> {
        let basic = build_basic_constellation(self.t, 1.0, rho, phi)?;
        let source = build_lp_vector(&basic, self.m, &self.plan)?;
        MotherConstellation::from_permutations(source, self.permutations.clone())
    }

    /// Codebook for the given parameters, scaled to unit mean codeword energy.
    pub fn codebook(&self, params: &OperatorParams) -> Result<CodebookSet> {
        let st = self.structure();
        let mc = self.mother(params.rho, params.phi)?;
        Ok(assemble(&mc, params, &st.fg, &st.pattern)?.normalized())
    }
}

/// Squared minimum distance of `{sum_i z_i a_i : a_i in A_T}`.
pub fn sum_set_med_squared(basic: &[Complex64], z: &[Complex64]) -> f64 {
    let mut sums = vec![Complex64::new(0.0, 0.0)];
    for zi in z {
        sums = sums.iter().flat_map(|s| basic.iter().map(move |a| s + zi * a)).collect();
    }
    set_med_squared(&sums)
}

/// Squared sum-set minimum distance of the unit-energy codebook.
pub fn objective_sum_set(params: &OperatorParams, problem: &OptimizationProblem) -> Result<f64> {
    let st = problem.structure();
    let mc = problem.mother(params.rho, params.phi)?;
    let raw = assemble(&mc, params, &st.fg, &st.pattern)?;
    let scale = 1.0 / raw.mean_codeword_energy();
    let basic = build_basic_constellation(problem.t, 1.0, params.rho, params.phi)?;
    Ok(sum_set_med_squared(&basic, &params.operators()) * scale)
}

/// `d1_min + d2_min` of the unit-energy codebook with the problem's
/// Monte-Carlo settings.
pub fn objective_lower_bound(params: &OperatorParams, problem: &OptimizationProblem) -> Result<f64> {
    let cbs = problem.codebook(params)?;
    let n0 = noise_from_ebn0(&cbs, problem.ebn0_db);
    Ok(delta_lb(&cbs, problem.kappa, n0, problem.q, problem.t_max, problem.seed)?.total)
}

pub fn evaluate(params: &OperatorParams, problem: &OptimizationProblem) -> Result<f64> {
    match problem.objective {
        ObjectiveKind::SumSetMed => objective_sum_set(params, problem),
        ObjectiveKind::DeltaLowerBound => objective_lower_bound(params, problem),
    }
}

/// Search coordinates: energies (projected onto the scaled simplex),
/// angles 2..d_f, rho, phi. The first angle is fixed to zero.
#[derive(Clone)]
struct Space {
    d_f: usize,
    energy_sum: f64,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Space {
    fn new(problem: &OptimizationProblem) -> Self {
        let d_f = problem.d_f();
        let s = problem.energy_sum();
        let mut lower = vec![0.0; d_f];
        let mut upper = vec![s; d_f];
        lower.extend(std::iter::repeat_n(0.0, d_f - 1));
        upper.extend(std::iter::repeat_n(PI, d_f - 1));
        lower.push(-1.0 + 1e-6);
        upper.push(problem.t as f64);
        lower.push(0.0);
        upper.push(PI / 2.0);
        Space { d_f, energy_sum: s, lower, upper }
    }

    fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Clip to the box and rescale the energies to sum `MJ/K`.
    fn project(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lower[i], self.upper[i]);
        }
        let floor = 1e-6 * self.energy_sum;
        for v in x[..self.d_f].iter_mut() {
            *v = v.max(floor);
        }
        let sum: f64 = x[..self.d_f].iter().sum();
        let f = self.energy_sum / sum;
        for v in x[..self.d_f].iter_mut() {
            *v *= f;
        }
    }

    fn params(&self, x: &[f64]) -> OperatorParams {
        let d = self.d_f;
        let mut angles = vec![0.0];
        angles.extend_from_slice(&x[d..2 * d - 1]);
        OperatorParams { energies: x[..d].to_vec(), angles, rho: x[2 * d - 1], phi: x[2 * d] }
    }

    fn coords(&self, p: &OperatorParams) -> Vec<f64> {
        let mut x = p.energies.clone();
        x.extend_from_slice(&p.angles[1..]);
        x.push(p.rho);
        x.push(p.phi);
        x
    }

    /// Latin-hypercube sample of `n` points in the box.
    fn latin_hypercube(&self, n: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = stream_rng(seed, u64::MAX);
        let dim = self.dim();
        let mut points = vec![vec![0.0; dim]; n];
        for i in 0..dim {
            let mut strata: Vec<usize> = (0..n).collect();
            strata.shuffle(&mut rng);
            for (p, &s) in points.iter_mut().zip(&strata) {
                let u = (s as f64 + rng.random::<f64>()) / n as f64;
                p[i] = self.lower[i] + u * (self.upper[i] - self.lower[i]);
            }
        }
        for p in &mut points {
            self.project(p);
        }
        points
    }
}

struct LocalRun {
    x: Vec<f64>,
    value: f64,
    trace: Vec<f64>,
    evaluations: usize,
}

/// Compass search: poll `+-step` along each coordinate, move to the first
/// strict improvement, halve the step when none is found.
fn compass_search(
    space: &Space,
    problem: &OptimizationProblem,
    start: Vec<f64>,
    start_value: f64,
) -> Result<LocalRun> {
    let mut x = start;
    let mut value = start_value;
    let mut step: Vec<f64> = space.lower.iter().zip(&space.upper).map(|(l, u)| 0.25 * (u - l)).collect();
    let mut trace = vec![value];
    let mut evaluations = 0;
    for _ in 0..problem.max_iters {
        let mut moved = false;
        'poll: for i in 0..space.dim() {
            for sign in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += sign * step[i];
                space.project(&mut y);
                if y == x {
                    continue;
                }
                let v = evaluate(&space.params(&y), problem)?;
                evaluations += 1;
                if v > value {
                    x = y;
                    value = v;
                    moved = true;
                    break 'poll;
                }
            }
        }
        if !moved {
            for s in step.iter_mut() {
                *s *= 0.5;
            }
        }
        trace.push(value);
        if step.iter().zip(&space.upper).zip(&space.lower).all(|((s, u), l)| *s < 1e-7 * (u - l)) {
            break;
        }
    }
    Ok(LocalRun { x, value, trace, evaluations })
}

/// Multi-start compass search from Latin-hypercube starting points.
pub fn optimize(problem: &OptimizationProblem) -> Result<OptimizationResult> {
    problem.validate()?;
    let started = Instant::now();
    let space = Space::new(problem);
    let restarts = problem.restarts.max(1);
    let mut starts = space.latin_hypercube(restarts, problem.seed);
    if let Some(p) = &problem.initial {
        starts[0] = space.coords(p);
        space.project(&mut starts[0]);
    }
    let values = starts
        .par_iter()
        .map(|x| evaluate(&space.params(x), problem))
        .collect::<Result<Vec<f64>>>()?;

    let runs: Vec<LocalRun> = starts
        .into_par_iter()
        .zip(values.into_par_iter())
        .map(|(x, v)| compass_search(&space, problem, x, v))
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.value > runs[best].value {
            best = i;
        }
    }
    let evaluations = runs.iter().map(|r| r.evaluations + 1).sum();
    let run = &runs[best];
    Ok(OptimizationResult {
        params: space.params(&run.x),
        objective: run.value,
        trace: run.trace.clone(),
        restart: best,
        evaluations,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}

/// Inputs of the end-to-end design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignConfig {
    pub m: usize,
    pub t: usize,
    pub overload: Overload,
    #[serde(with = "crate::codebook::kappa_serde::plain")]
    pub kappa: f64,
    pub ebn0_db: f64,
    pub seed: u64,
    pub restarts: usize,
    /// Defaults to 30 (150%) or 25 (200%).
    pub max_iters: Option<usize>,
    pub q: usize,
    pub t_max: usize,
    pub permutation_restarts: usize,
    pub permutation_sweeps: usize,
    pub label_iters: usize,
    pub label_restarts: usize,
}

impl DesignConfig {
    pub fn new(m: usize, t: usize, overload: Overload) -> Self {
        DesignConfig {
            m,
            t,
            overload,
            kappa: 20.0,
            ebn0_db: 16.0,
            seed: 0,
            restarts: 20,
            max_iters: None,
            q: 200,
            t_max: 4,
            permutation_restarts: 8,
            permutation_sweeps: 50,
            label_iters: 20,
            label_restarts: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignOutput {
    pub codebook: CodebookSet,
    pub optimization: OptimizationResult,
    pub problem: OptimizationProblem,
}

/// Build a codebook: basic constellation, low-projection vector,
/// permutation search, operator optimization, then labeling.
pub fn design_pipeline(cfg: &DesignConfig) -> Result<DesignOutput> {
    let fg = builtin_factor_graph(cfg.overload);
    let n = fg.n;
    if cfg.m < 2 || !cfg.m.is_power_of_two() {
        return domain(format!("M must be a power of two >= 2, got {}", cfg.m));
    }
    let feasible = (cfg.t as u128).checked_pow(n as u32).is_none_or(|c| c >= cfg.m as u128);
    if cfg.t > cfg.m || cfg.t < 2 || !feasible {
        return domain(format!(
            "T={} violates ceil(M^(1/N)) <= T <= M for M={}, N={n} (and T >= 2)",
            cfg.t, cfg.m
        ));
    }

    let basic = build_basic_constellation(cfg.t, 1.0, 0.0, 0.0)?;
    let plan = default_overlap_plan(&basic, cfg.m)?;
    let source = build_lp_vector(&basic, cfg.m, &plan)?;
    let column_energy = n as f64 * source.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / cfg.m as f64;
    let n0_mc = column_energy * unit_energy_noise(cfg.m, cfg.ebn0_db);
    let budget = SearchBudget {
        restarts: cfg.permutation_restarts,
        max_sweeps: cfg.permutation_sweeps,
        seed: cfg.seed,
    };
    let search = permutation_search(&source, n, cfg.kappa, n0_mc, &budget)?;

    let problem = OptimizationProblem {
        objective: ObjectiveKind::for_sizes(cfg.m, cfg.t, n),
        m: cfg.m,
        t: cfg.t,
        overload: cfg.overload,
        plan,
        permutations: search.mother.permutations.clone(),
        kappa: cfg.kappa,
        ebn0_db: cfg.ebn0_db,
        max_iters: cfg.max_iters.unwrap_or_else(|| default_max_iters(cfg.overload)),
        restarts: cfg.restarts,
        seed: cfg.seed,
        q: cfg.q,
        t_max: cfg.t_max,
        initial: None,
    };
    let optimization = optimize(&problem)?;
    let cbs = problem.codebook(&optimization.params)?;
    let n0 = noise_from_ebn0(&cbs, cfg.ebn0_db);
    let (mut cbs, _) = label_codebook_set(&cbs, cfg.kappa, n0, cfg.label_iters, cfg.label_restarts, cfg.seed)?;

    let meta = &mut cbs.design_meta;
    meta.t = Some(cfg.t);
    meta.kappa = Some(cfg.kappa);
    meta.ebn0_db = Some(cfg.ebn0_db);
    meta.rho = Some(optimization.params.rho);
    meta.phi = Some(optimization.params.phi);
    meta.energies = Some(optimization.params.energies.clone());
    meta.theta = Some(optimization.params.angles.clone());
    meta.seed = Some(cfg.seed);
    meta.objective = Some(optimization.objective);
    Ok(DesignOutput { codebook: cbs, optimization, problem })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn sum_set_example() {
        let v = sum_set_med_squared(&[c(1.0), c(-1.0)], &[c(1.0), c(0.5)]);
        assert_relative_eq!(v, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn sum_set_size_and_collinear_collapse() {
        let basic = [c(1.0), c(-1.0)];
        let mut sums = vec![Complex64::new(0.0, 0.0)];
        let z = [Complex64::from_polar(1.0, 0.0), Complex64::from_polar(0.7, 0.4), Complex64::from_polar(1.3, 1.1)];
        for zi in &z {
            sums = sums.iter().flat_map(|s| basic.iter().map(move |a| s + zi * a)).collect();
        }
        assert_eq!(sums.len(), 8);
        assert!(set_med_squared(&sums) > 0.0);
        // Equal operators make distinct combinations coincide.
        let equal = [c(1.0), c(1.0), c(1.0)];
        assert_eq!(sum_set_med_squared(&basic, &equal), 0.0);
    }

    #[test]
    fn objective_kind_predicate() {
        assert_eq!(ObjectiveKind::for_sizes(4, 2, 2), ObjectiveKind::SumSetMed);
        assert_eq!(ObjectiveKind::for_sizes(4, 4, 2), ObjectiveKind::DeltaLowerBound);
        assert_eq!(ObjectiveKind::for_sizes(16, 4, 2), ObjectiveKind::SumSetMed);
        assert_eq!(ObjectiveKind::for_sizes(8, 4, 2), ObjectiveKind::DeltaLowerBound);
    }

    fn small_problem(max_iters: usize, seed: u64) -> OptimizationProblem {
        let basic = build_basic_constellation(2, 1.0, 0.0, 0.0).unwrap();
        let plan = default_overlap_plan(&basic, 4).unwrap();
        let source = build_lp_vector(&basic, 4, &plan).unwrap();
        let search = permutation_search(&source, 2, 20.0, 0.1, &SearchBudget::default()).unwrap();
        OptimizationProblem {
            objective: ObjectiveKind::SumSetMed,
            m: 4,
            t: 2,
            overload: Overload::P150,
            plan,
            permutations: search.mother.permutations,
            kappa: 20.0,
            ebn0_db: 16.0,
            max_iters,
            restarts: 4,
            seed,
            q: 200,
            t_max: 2,
            initial: None,
        }
    }

    #[test]
    fn feasibility_and_monotone_trace() {
        let p = small_problem(15, 3);
        let r = optimize(&p).unwrap();
        r.params.check_constraints(4, 6, 4, 2).unwrap();
        assert_eq!(r.params.angles[0], 0.0);
        assert!(r.trace.windows(2).all(|w| w[1] >= w[0]));
        assert_relative_eq!(evaluate(&r.params, &p).unwrap(), r.objective);
    }

    #[test]
    fn zero_budget_returns_best_start() {
        let p = small_problem(0, 5);
        let r = optimize(&p).unwrap();
        let space = Space::new(&p);
        let best = space
            .latin_hypercube(p.restarts, p.seed)
            .iter()
            .map(|x| evaluate(&space.params(x), &p).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(r.objective, best);
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn seed_determinism() {
        let a = optimize(&small_problem(8, 9)).unwrap();
        let b = optimize(&small_problem(8, 9)).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn mismatched_objective_is_rejected() {
        let mut p = small_problem(1, 0);
        p.objective = ObjectiveKind::DeltaLowerBound;
        assert!(optimize(&p).is_err());
        let mut p = small_problem(1, 0);
        p.initial = Some(OperatorParams { energies: vec![1.0; 3], angles: vec![0.0; 3], rho: -2.0, phi: 0.0 });
        assert!(optimize(&p).is_err());
    }

    #[test]
    fn lemma_bound_in_pipeline() {
        let err = design_pipeline(&DesignConfig::new(4, 1, Overload::P150)).unwrap_err();
        assert!(err.to_string().contains("ceil(M^(1/N)) <= T <= M"));
    }
}
