//! Downlink link-level simulation: superposition, Rician fading, noise, and
//! log-domain message-passing detection.

use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codebook::CodebookSet;
use crate::error::{domain, Error, Result};
use crate::metrics::noise_from_ebn0;
use crate::rng::indexed_rng;

/// Per-resource Rician channel. `kappa = inf` is the AWGN channel `h = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub kappa: f64,
    pub n0: f64,
}

impl ChannelSpec {
    pub fn new(kappa: f64, n0: f64) -> Result<Self> {
        if !(kappa >= 0.0) {
            return domain(format!("kappa must be non-negative, got {kappa}"));
        }
        if !(n0 >= 0.0) || !n0.is_finite() {
            return domain(format!("N0 must be non-negative, got {n0}"));
        }
        Ok(ChannelSpec { kappa, n0 })
    }

    /// One fading coefficient: line-of-sight amplitude `sqrt(kappa/(1+kappa))`
    /// plus circular Gaussian scatter of variance `1/(1+kappa)`.
    pub fn draw_fading<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        if self.kappa.is_infinite() {
            return Complex64::new(1.0, 0.0);
        }
        let los = (self.kappa / (1.0 + self.kappa)).sqrt();
        let sigma = (0.5 / (1.0 + self.kappa)).sqrt();
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(los + sigma * re, sigma * im)
    }

    /// Circular Gaussian noise sample of variance `N0`.
    pub fn draw_noise<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let s = (self.n0 / 2.0).sqrt();
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(s * re, s * im)
    }
}

/// Received vector with the channel known to the receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct Received {
    pub y: Vec<Complex64>,
    pub h: Vec<Complex64>,
}

/// Superimpose one codeword per user and pass it through the channel.
pub fn transmit<R: Rng + ?Sized>(
    cbs: &CodebookSet,
    symbols: &[usize],
    channel: &ChannelSpec,
    rng: &mut R,
) -> Result<Received> {
    if symbols.len() != cbs.j() || symbols.iter().any(|&s| s >= cbs.m) {
        return domain("need one codeword index below M per user");
    }
    let w = cbs.superimpose(symbols);
    let h: Vec<Complex64> = (0..cbs.k()).map(|_| channel.draw_fading(rng)).collect();
    let y = w
        .iter()
        .zip(&h)
        .map(|(x, g)| g * x + channel.draw_noise(rng))
        .collect();
    Ok(Received { y, h })
}

/// Codeword index per user for the given label values.
pub fn symbols_from_labels(cbs: &CodebookSet, labels: &[usize]) -> Vec<usize> {
    labels
        .iter()
        .enumerate()
        .map(|(j, &l)| cbs.codeword_of_label(j)[l])
        .collect()
}

/// Detector settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub max_iters: usize,
    /// Stop once the largest posterior change falls below this; zero runs
    /// all `max_iters` iterations.
    pub tol: f64,
    /// Keep the hard decisions of every iteration.
    pub record_decisions: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig { max_iters: 10, tol: 1e-5, record_decisions: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderKind {
    Mpa,
    LpMpa,
}

impl std::str::FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mpa" => Ok(DecoderKind::Mpa),
            "lp-mpa" => Ok(DecoderKind::LpMpa),
            _ => domain(format!("unknown decoder '{s}', expected mpa or lp-mpa")),
        }
    }
}

/// Counters and convergence information of one detection.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DecodeStats {
    pub iterations: usize,
    pub converged: bool,
    /// Largest absolute posterior change after each iteration.
    pub max_delta: Vec<f64>,
    pub bit_errors: u64,
    pub frames: u64,
    /// Operations of the probability-domain update this detector
    /// implements: every log-domain sum of messages counts as a
    /// multiplication, every accumulation or normalization as an addition.
    pub n_mult: u64,
    pub n_add: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutput {
    /// Decided codeword index per user.
    pub symbols: Vec<usize>,
    /// Posterior codeword probabilities per user.
    pub posteriors: Vec<Vec<f64>>,
    /// Posteriors after every iteration.
    pub posterior_history: Vec<Vec<Vec<f64>>>,
    /// Decided codewords after every iteration, if requested.
    pub decisions: Vec<Vec<usize>>,
    pub stats: DecodeStats,
}

struct Slot {
    user: usize,
    values: Vec<Complex64>,
    map: Vec<usize>,
}

/// Enumeration tables of a detector: per resource, the connected users and
/// the values each can take there.
pub struct DecoderTables {
    m: usize,
    resources: Vec<Vec<Slot>>,
    /// Per user, its `(resource, slot)` edges.
    edges: Vec<Vec<(usize, usize)>>,
    projected: bool,
}

impl DecoderTables {
    fn build(cbs: &CodebookSet, projected: bool) -> Self {
        let resources: Vec<Vec<Slot>> = (0..cbs.k())
            .map(|k| {
                cbs.graph.users_of_resource[k]
                    .iter()
                    .map(|&user| {
                        let (values, map) = if projected {
                            cbs.projection(user, k)
                        } else {
                            (cbs.users[user].codewords.iter().map(|c| c[k]).collect(), (0..cbs.m).collect())
                        };
                        Slot { user, values, map }
                    })
                    .collect()
            })
            .collect();
        let mut edges = vec![Vec::new(); cbs.j()];
        for (k, slots) in resources.iter().enumerate() {
            for (s, slot) in slots.iter().enumerate() {
                edges[slot.user].push((k, s));
            }
        }
        DecoderTables { m: cbs.m, resources, edges, projected }
    }

    /// Enumerate all `M^d_f` codeword combinations per resource.
    pub fn full(cbs: &CodebookSet) -> Self {
        Self::build(cbs, false)
    }

    /// Enumerate only the distinct projected values per user and resource.
    pub fn projected(cbs: &CodebookSet) -> Self {
        Self::build(cbs, true)
    }

    pub fn for_kind(cbs: &CodebookSet, kind: DecoderKind) -> Self {
        match kind {
            DecoderKind::Mpa => Self::full(cbs),
            DecoderKind::LpMpa => Self::projected(cbs),
        }
    }
}

fn log_normalize(v: &mut [f64]) -> u64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = v.iter().map(|x| (x - max).exp()).sum();
    let shift = max + sum.ln();
    for x in v.iter_mut() {
        *x -= shift;
    }
    // accumulation plus subtraction per entry
    2 * v.len() as u64
}

fn softmax(v: &[f64]) -> Vec<f64> {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = v.iter().map(|x| (x - max).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Message passing detection with precomputed tables.
pub fn decode_with_tables(
    tables: &DecoderTables,
    rx: &Received,
    n0: f64,
    cfg: &DecoderConfig,
) -> Result<DecodeOutput> {
    if !(n0 > 0.0) || !n0.is_finite() {
        return domain(format!("message passing needs a positive finite N0, got {n0}"));
    }
    let m = tables.m;
    let j_users = tables.edges.len();
    let mut stats = DecodeStats { frames: 1, ..DecodeStats::default() };

    // Channel-scaled values, computed once per frame.
    let scaled: Vec<Vec<Vec<Complex64>>> = tables
        .resources
        .iter()
        .enumerate()
        .map(|(k, slots)| {
            slots
                .iter()
                .map(|s| {
                    stats.n_mult += 4 * s.values.len() as u64;
                    stats.n_add += 2 * s.values.len() as u64;
                    s.values.iter().map(|v| rx.h[k] * v).collect()
                })
                .collect()
        })
        .collect();

    let uniform = -(m as f64).ln();
    let mut v2r: Vec<Vec<Vec<f64>>> = tables
        .resources
        .iter()
        .map(|slots| vec![vec![uniform; m]; slots.len()])
        .collect();
    let mut r2v = v2r.clone();
    let mut prev = vec![vec![1.0 / m as f64; m]; j_users];
    let mut history = Vec::new();
    let mut decisions = Vec::new();
    let inv_n0 = 1.0 / n0;

    for _ in 0..cfg.max_iters.max(1) {
        stats.iterations += 1;

        // Resource-node update.
        for (k, slots) in tables.resources.iter().enumerate() {
            let d = slots.len();
            // Messages aggregated onto each slot's distinct values.
            let agg: Vec<Vec<f64>> = slots
                .iter()
                .enumerate()
                .map(|(s, slot)| {
                    if !tables.projected || slot.values.len() == m {
                        let mut a = vec![f64::NEG_INFINITY; slot.values.len()];
                        for (cw, &t) in slot.map.iter().enumerate() {
                            a[t] = v2r[k][s][cw];
                        }
                        a
                    } else {
                        let mut max = vec![f64::NEG_INFINITY; slot.values.len()];
                        for (cw, &t) in slot.map.iter().enumerate() {
                            max[t] = max[t].max(v2r[k][s][cw]);
                        }
                        let mut sum = vec![0.0; slot.values.len()];
                        for (cw, &t) in slot.map.iter().enumerate() {
                            sum[t] += (v2r[k][s][cw] - max[t]).exp();
                        }
                        stats.n_add += m as u64;
                        max.iter().zip(&sum).map(|(mx, sm)| mx + sm.ln()).collect()
                    }
                })
                .collect();

            let sizes: Vec<usize> = slots.iter().map(|s| s.values.len()).collect();
            let mut acc_max: Vec<Vec<f64>> = sizes.iter().map(|&t| vec![f64::NEG_INFINITY; t]).collect();
            let mut acc_sum: Vec<Vec<f64>> = sizes.iter().map(|&t| vec![0.0; t]).collect();
            let mut idx = vec![0usize; d];
            let combos: usize = sizes.iter().product();
            for _ in 0..combos {
                let mut r = rx.y[k];
                for s in 0..d {
                    r -= scaled[k][s][idx[s]];
                }
                let metric = -r.norm_sqr() * inv_n0;
                for target in 0..d {
                    let mut l = metric;
                    for s in 0..d {
                        if s != target {
                            l += agg[s][idx[s]];
                        }
                    }
                    let t = idx[target];
                    let mx = &mut acc_max[target][t];
                    if l > *mx {
                        acc_sum[target][t] = acc_sum[target][t] * (*mx - l).exp() + 1.0;
                        *mx = l;
                    } else {
                        acc_sum[target][t] += (l - *mx).exp();
                    }
                }
                // advance the mixed-radix counter
                for s in 0..d {
                    idx[s] += 1;
                    if idx[s] < sizes[s] {
                        break;
                    }
                    idx[s] = 0;
                }
            }
            let cd = combos as u64;
            let du = d as u64;
            stats.n_mult += cd * (3 + du * (du - 1));
            stats.n_add += cd * (2 * du + 1 + du);

            for (s, slot) in slots.iter().enumerate() {
                let out = &mut r2v[k][s];
                for cw in 0..m {
                    let t = slot.map[cw];
                    out[cw] = acc_max[s][t] + acc_sum[s][t].ln();
                }
                stats.n_add += log_normalize(out);
            }
        }

        // Variable-node update and posteriors.
        let mut delta: f64 = 0.0;
        let mut posteriors = Vec::with_capacity(j_users);
        for (j, edges) in tables.edges.iter().enumerate() {
            let n = edges.len() as u64;
            for (e, &(k, s)) in edges.iter().enumerate() {
                let mut msg = vec![0.0; m];
                for (e2, &(k2, s2)) in edges.iter().enumerate() {
                    if e2 != e {
                        for cw in 0..m {
                            msg[cw] += r2v[k2][s2][cw];
                        }
                    }
                }
                stats.n_mult += (n - 1) * m as u64;
                stats.n_add += log_normalize(&mut msg);
                v2r[k][s] = msg;
            }
            let mut belief = vec![0.0; m];
            for &(k, s) in edges {
                for cw in 0..m {
                    belief[cw] += r2v[k][s][cw];
                }
            }
            stats.n_mult += (n - 1) * m as u64;
            let p = softmax(&belief);
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::Numerical("non-finite posterior".into()));
            }
            for cw in 0..m {
                delta = delta.max((p[cw] - prev[j][cw]).abs());
            }
            posteriors.push(p);
        }
        stats.max_delta.push(delta);
        if cfg.record_decisions {
            decisions.push(posteriors.iter().map(|p| argmax(p)).collect());
        }
        history.push(posteriors.clone());
        prev = posteriors;
        if delta < cfg.tol {
            stats.converged = true;
            break;
        }
    }

    Ok(DecodeOutput {
        symbols: prev.iter().map(|p| argmax(p)).collect(),
        posteriors: prev,
        posterior_history: history,
        decisions,
        stats,
    })
}

/// Message passing over all `M^d_f` codeword combinations per resource.
pub fn mpa_decode(cbs: &CodebookSet, rx: &Received, n0: f64, cfg: &DecoderConfig) -> Result<DecodeOutput> {
    decode_with_tables(&DecoderTables::full(cbs), rx, n0, cfg)
}

/// Message passing over the distinct projected values only: incoming
/// messages are summed per projection, the `T^d_f` projection
/// combinations are enumerated, and each outgoing message is copied back
/// to all codewords sharing a projection. Posteriors equal those of
/// [`mpa_decode`].
pub fn lp_mpa_decode(cbs: &CodebookSet, rx: &Received, n0: f64, cfg: &DecoderConfig) -> Result<DecodeOutput> {
    decode_with_tables(&DecoderTables::projected(cbs), rx, n0, cfg)
}

/// One row of a BER sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerRow {
    pub ebn0_db: f64,
    #[serde(with = "crate::codebook::kappa_serde::plain")]
    pub kappa: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub avg_iters: f64,
    pub n_mult: f64,
    pub n_add: f64,
    pub seed: u64,
    /// Bit errors had detection stopped after each iteration.
    pub bit_errors_per_iter: Vec<u64>,
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = errors as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if errors == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

fn count_bit_errors(labels: &[Vec<usize>], sent: &[usize], got: &[usize]) -> u64 {
    sent.iter()
        .zip(got)
        .enumerate()
        .map(|(j, (&a, &b))| (labels[j][a] ^ labels[j][b]).count_ones() as u64)
        .sum()
}

/// Simulate `frames` frames per `(Eb/N0, kappa)` point. Frame `f` of point
/// `g` draws from the stream addressed by `(seed, g, f)`, so results do not
/// depend on the number of worker threads.
pub fn ber_sweep(
    cbs: &CodebookSet,
    grid: &[(f64, f64)],
    frames: u64,
    kind: DecoderKind,
    cfg: &DecoderConfig,
    seed: u64,
) -> Result<Vec<BerRow>> {
    let tables = DecoderTables::for_kind(cbs, kind);
    let labels: Vec<Vec<usize>> = (0..cbs.j()).map(|j| cbs.label_values(j)).collect();
    let bits_per_frame = (cbs.j() * cbs.bits_per_symbol()) as u64;
    let cfg = DecoderConfig { record_decisions: true, ..*cfg };
    let iters = cfg.max_iters.max(1);

    grid.iter()
        .enumerate()
        .map(|(g, &(ebn0_db, kappa))| {
            let n0 = noise_from_ebn0(cbs, ebn0_db);
            let channel = ChannelSpec::new(kappa, n0)?;
            let per_frame: Vec<(u64, Vec<u64>, usize, u64, u64)> = (0..frames)
                .into_par_iter()
                .map(|f| {
                    let mut rng = indexed_rng(seed, g as u64, f);
                    let sent: Vec<usize> = (0..cbs.j()).map(|_| rng.random_range(0..cbs.m)).collect();
                    let rx = transmit(cbs, &sent, &channel, &mut rng)?;
                    let out = decode_with_tables(&tables, &rx, n0, &cfg)?;
                    let errs = count_bit_errors(&labels, &sent, &out.symbols);
                    let per_iter = (0..iters)
                        .map(|i| {
                            let d = out.decisions.get(i).unwrap_or_else(|| out.decisions.last().expect("one iteration"));
                            count_bit_errors(&labels, &sent, d)
                        })
                        .collect();
                    Ok((errs, per_iter, out.stats.iterations, out.stats.n_mult, out.stats.n_add))
                })
                .collect::<Result<Vec<_>>>()?;
            let bit_errors: u64 = per_frame.iter().map(|r| r.0).sum();
            let mut per_iter = vec![0u64; iters];
            for r in &per_frame {
                for (i, e) in r.1.iter().enumerate() {
                    per_iter[i] += e;
                }
            }
            let trials = frames * bits_per_frame;
            let (ci_low, ci_high) = wilson_interval(bit_errors, trials);
            let nf = frames.max(1) as f64;
            Ok(BerRow {
                ebn0_db,
                kappa,
                frames,
                bit_errors,
                ber: if trials > 0 { bit_errors as f64 / trials as f64 } else { 0.0 },
                ci_low,
                ci_high,
                avg_iters: per_frame.iter().map(|r| r.2 as f64).sum::<f64>() / nf,
                n_mult: per_frame.iter().map(|r| r.3 as f64).sum::<f64>() / nf,
                n_add: per_frame.iter().map(|r| r.4 as f64).sum::<f64>() / nf,
                seed,
                bit_errors_per_iter: per_iter,
            })
        })
        .collect()
}

/// Write sweep rows as CSV; infinite `kappa` is written as `inf`.
pub fn write_ber_csv<W: Write>(rows: &[BerRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    w.write_record([
        "ebn0_db", "kappa", "frames", "bit_errors", "ber", "ci_low", "ci_high", "avg_iters", "n_mult", "n_add", "seed",
    ])
    .map_err(csv_err)?;
    for r in rows {
        let kappa = if r.kappa.is_infinite() { "inf".to_string() } else { r.kappa.to_string() };
        w.write_record([
            r.ebn0_db.to_string(),
            kappa,
            r.frames.to_string(),
            r.bit_errors.to_string(),
            format!("{:e}", r.ber),
            format!("{:e}", r.ci_low),
            format!("{:e}", r.ci_high),
            r.avg_iters.to_string(),
            r.n_mult.to_string(),
            r.n_add.to_string(),
            r.seed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{natural_labels, DesignMeta, FactorGraph, UserCodebook};
    use crate::rng::stream_rng;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single_user() -> CodebookSet {
        let pts = [(1.0, 0.2), (-0.4, 0.9), (-0.7, -0.6), (0.3, -1.1)];
        CodebookSet {
            m: 4,
            graph: FactorGraph::from_matrix(vec![vec![1], vec![1]]).unwrap(),
            overload: None,
            users: vec![UserCodebook {
                id: 1,
                codewords: pts.iter().map(|&(a, b)| vec![c(a, b), c(b, -a)]).collect(),
                labels: natural_labels(4),
            }],
            design_meta: DesignMeta::default(),
        }
    }

    #[test]
    fn noiseless_awgn_returns_codeword() {
        let cbs = single_user();
        let ch = ChannelSpec::new(f64::INFINITY, 0.0).unwrap();
        let mut rng = stream_rng(1, 0);
        let rx = transmit(&cbs, &[2], &ch, &mut rng).unwrap();
        assert_eq!(rx.y, cbs.users[0].codewords[2]);
        assert!(rx.h.iter().all(|h| *h == c(1.0, 0.0)));
    }

    #[test]
    fn fading_second_moment() {
        let ch = ChannelSpec::new(2.0, 1.0).unwrap();
        let mut rng = stream_rng(2, 0);
        let n = 100_000;
        let m2: f64 = (0..n).map(|_| ch.draw_fading(&mut rng).norm_sqr()).sum::<f64>() / n as f64;
        assert!((m2 - 1.0).abs() < 0.01, "E|h|^2 = {m2}");
    }

    #[test]
    fn single_user_one_iteration_is_ml() {
        let cbs = single_user();
        let n0 = 0.4;
        let ch = ChannelSpec::new(3.0, n0).unwrap();
        let mut rng = stream_rng(3, 0);
        for _ in 0..50 {
            let rx = transmit(&cbs, &[rng.random_range(0..4)], &ch, &mut rng).unwrap();
            let cfg = DecoderConfig { max_iters: 1, tol: 0.0, record_decisions: false };
            let out = mpa_decode(&cbs, &rx, n0, &cfg).unwrap();
            let ll: Vec<f64> = cbs.users[0]
                .codewords
                .iter()
                .map(|cw| {
                    -cw.iter().zip(&rx.y).zip(&rx.h).map(|((x, y), h)| (y - h * x).norm_sqr()).sum::<f64>() / n0
                })
                .collect();
            let want = softmax(&ll);
            for (a, b) in out.posteriors[0].iter().zip(&want) {
                assert_relative_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn zero_noise_is_rejected_by_detector() {
        let cbs = single_user();
        let rx = Received { y: vec![c(0.0, 0.0); 2], h: vec![c(1.0, 0.0); 2] };
        assert!(mpa_decode(&cbs, &rx, 0.0, &DecoderConfig::default()).is_err());
    }

    #[test]
    fn wilson_bounds_contain_estimate() {
        let (lo, hi) = wilson_interval(10, 1000);
        assert!(lo < 0.01 && 0.01 < hi);
        assert_eq!(wilson_interval(0, 100).0, 0.0);
    }

    #[test]
    fn csv_header_and_inf() {
        let row = BerRow {
            ebn0_db: 4.0,
            kappa: f64::INFINITY,
            frames: 10,
            bit_errors: 1,
            ber: 0.05,
            ci_low: 0.01,
            ci_high: 0.2,
            avg_iters: 2.0,
            n_mult: 100.0,
            n_add: 50.0,
            seed: 7,
            bit_errors_per_iter: vec![],
        };
        let mut buf = Vec::new();
        write_ber_csv(&[row], &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("ebn0_db,kappa,frames,bit_errors,ber,ci_low,ci_high,avg_iters,n_mult,n_add,seed\n"));
        assert!(s.contains(",inf,"));
    }
}
