//! Bit-to-codeword labeling by a modified binary switching algorithm.
//!
//! A labeling is an index vector `z`: label value `p` (read as a binary
//! word of `log2 M` bits) is carried by codeword `z[p]`. Its cost sums,
//! over unordered codeword pairs, the number of differing label bits
//! weighted by `exp(-d / (4 N0))`, where `d` is the Rician pair distance.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codebook::CodebookSet;
use crate::error::{domain, Result};
use crate::metrics::rician_term;
use crate::rng::indexed_rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Labeling {
    /// Codeword index for each label value.
    pub z: Vec<usize>,
    /// Total cost.
    pub cost: f64,
    /// Per-codeword cost, indexed by codeword.
    pub xi: Vec<f64>,
    /// Total cost at the start and after every outer iteration of the
    /// winning restart.
    pub trace: Vec<f64>,
    /// Number of trial swaps evaluated across all restarts.
    pub swap_evaluations: usize,
}

/// `exp(-d_il / (4 N0))` for every codeword pair.
fn pair_weights(codewords: &[Vec<Complex64>], kappa: f64, n0: f64) -> Vec<Vec<f64>> {
    let m = codewords.len();
    let mut w = vec![vec![0.0; m]; m];
    for i in 0..m {
        for l in i + 1..m {
            let d: f64 = codewords[i]
                .iter()
                .zip(&codewords[l])
                .map(|(a, b)| rician_term((a - b).norm_sqr(), kappa, n0))
                .sum();
            let v = (-d / (4.0 * n0)).exp();
            w[i][l] = v;
            w[l][i] = v;
        }
    }
    w
}

/// Per-codeword costs for `label_of[codeword]`.
fn costs(weights: &[Vec<f64>], label_of: &[usize]) -> Vec<f64> {
    let m = label_of.len();
    (0..m)
        .map(|i| {
            (0..m)
                .filter(|&l| l != i)
                .map(|l| (label_of[i] ^ label_of[l]).count_ones() as f64 * weights[i][l])
                .sum()
        })
        .collect()
}

fn total(weights: &[Vec<f64>], label_of: &[usize]) -> f64 {
    let m = label_of.len();
    let mut s = 0.0;
    for i in 0..m {
        for l in i + 1..m {
            s += (label_of[i] ^ label_of[l]).count_ones() as f64 * weights[i][l];
        }
    }
    s
}

fn check_inputs(codewords: &[Vec<Complex64>], kappa: f64, n0: f64) -> Result<()> {
    let m = codewords.len();
    if m < 2 || !m.is_power_of_two() {
        return domain(format!("labeling needs a power-of-two M >= 2, got {m}"));
    }
    if !(n0 > 0.0) || !(kappa >= 0.0) {
        return domain("labeling needs N0 > 0 and kappa >= 0");
    }
    Ok(())
}

fn invert(z: &[usize]) -> Result<Vec<usize>> {
    let m = z.len();
    let mut label_of = vec![usize::MAX; m];
    for (p, &cw) in z.iter().enumerate() {
        if cw >= m || label_of[cw] != usize::MAX {
            return domain(format!("{z:?} is not a bijection"));
        }
        label_of[cw] = p;
    }
    Ok(label_of)
}

/// Total cost and per-codeword costs of labeling `z`.
pub fn labeling_cost(codewords: &[Vec<Complex64>], z: &[usize], kappa: f64, n0: f64) -> Result<(f64, Vec<f64>)> {
    check_inputs(codewords, kappa, n0)?;
    if z.len() != codewords.len() {
        return domain("labeling length differs from the number of codewords");
    }
    let label_of = invert(z)?;
    let w = pair_weights(codewords, kappa, n0);
    Ok((total(&w, &label_of), costs(&w, &label_of)))
}

struct Run {
    label_of: Vec<usize>,
    cost: f64,
    trace: Vec<f64>,
    swaps: usize,
}

fn single_run(weights: &[Vec<f64>], i_max: usize, seed: u64, restart: u64) -> Run {
    let m = weights.len();
    let mut rng = indexed_rng(seed, 0, restart);
    let mut label_of: Vec<usize> = (0..m).collect();
    label_of.shuffle(&mut rng);
    let mut cost = total(weights, &label_of);
    let mut trace = vec![cost];
    let mut swaps = 0;
    for _ in 0..i_max {
        let xi = costs(weights, &label_of);
        let mut ranked: Vec<usize> = (0..m).collect();
        ranked.sort_by(|&a, &b| xi[b].total_cmp(&xi[a]).then(a.cmp(&b)));
        for &i in &ranked {
            for l in 0..m {
                if l == i {
                    continue;
                }
                label_of.swap(i, l);
                swaps += 1;
                let trial = total(weights, &label_of);
                if trial <= cost {
                    cost = trial;
                } else {
                    label_of.swap(i, l);
                }
            }
        }
        trace.push(cost);
    }
    Run { label_of, cost, trace, swaps }
}

/// Best labeling over `restarts` random initializations, each improved by
/// `i_max` rounds of cost-ranked pairwise label swaps.
pub fn bsa_label(
    codewords: &[Vec<Complex64>],
    kappa: f64,
    n0: f64,
    i_max: usize,
    restarts: usize,
    seed: u64,
) -> Result<Labeling> {
    check_inputs(codewords, kappa, n0)?;
    let weights = pair_weights(codewords, kappa, n0);
    let runs: Vec<Run> = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|r| single_run(&weights, i_max, seed, r))
        .collect();
    let swap_evaluations = runs.iter().map(|r| r.swaps).sum();
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.cost < a.cost { b } else { a })
        .expect("at least one restart");
    let mut z = vec![0; best.label_of.len()];
    for (cw, &p) in best.label_of.iter().enumerate() {
        z[p] = cw;
    }
    Ok(Labeling {
        xi: costs(&weights, &best.label_of),
        z,
        cost: best.cost,
        trace: best.trace,
        swap_evaluations,
    })
}

/// Label every user of a codebook set; user `j` uses restart streams
/// derived from `(seed, j)`.
pub fn label_codebook_set(
    cbs: &CodebookSet,
    kappa: f64,
    n0: f64,
    i_max: usize,
    restarts: usize,
    seed: u64,
) -> Result<(CodebookSet, Vec<Labeling>)> {
    let width = cbs.bits_per_symbol();
    let mut out = cbs.clone();
    let mut all = Vec::with_capacity(cbs.j());
    for j in 0..cbs.j() {
        let user_seed = seed.wrapping_add((j as u64 + 1).wrapping_mul(0xA076_1D64_78BD_642F));
        let lab = bsa_label(&cbs.users[j].codewords, kappa, n0, i_max, restarts, user_seed)?;
        let mut labels = vec![String::new(); cbs.m];
        for (p, &cw) in lab.z.iter().enumerate() {
            labels[cw] = format!("{p:0width$b}");
        }
        out.users[j].labels = labels;
        all.push(lab);
    }
    Ok((out, all))
}
