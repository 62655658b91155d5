//! Subcommand implementations. Every file written embeds the resolved
//! settings, so a run can be repeated from its outputs alone.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use lpcb_core::labeling::label_codebook_set;
use lpcb_core::metrics::{metric_report, noise_from_ebn0};
use lpcb_core::simulator::{write_ber_csv, DecoderConfig};
use lpcb_core::{ber_sweep, crr, design_pipeline, CodebookSet, ComplexityParams, DeltaMode};
use serde::Serialize;
use serde_json::json;

use crate::config::{
    input_error, ComplexitySettings, DesignSettings, EvalMode, EvalSettings, LabelSettings, SimulateSettings,
};

fn to_value<T: Serialize>(v: &T) -> anyhow::Result<serde_json::Value> {
    Ok(serde_json::to_value(v)?)
}

fn write_text(dir: &Path, name: &str, text: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> anyhow::Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(dir, name, &text)
}

fn read_codebook(path: Option<&PathBuf>) -> anyhow::Result<CodebookSet> {
    let path = path.ok_or_else(|| input_error("a codebook file is required (--codebook or config \"codebook\")"))?;
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(CodebookSet::from_json(&text)?)
}

pub fn design(s: &DesignSettings, out: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let config = to_value(s)?;
    let result = design_pipeline(&s.design_config()?)?;
    let mut cbs = result.codebook;
    cbs.design_meta.config = Some(json!({ "design": config }));
    let codebook = write_text(out, "codebook.json", &cbs.to_json()?)?;
    let trace = write_json(
        out,
        "design.json",
        &json!({
            "config": config,
            "problem": result.problem,
            "optimization": result.optimization,
        }),
    )?;
    Ok(vec![codebook, trace])
}

pub fn label(s: &LabelSettings, out: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let cbs = read_codebook(s.codebook.as_ref())?;
    let config = to_value(s)?;
    let unit = cbs.normalized();
    let n0 = noise_from_ebn0(&unit, s.ebn0_db);
    let (mut labeled, labelings) =
        label_codebook_set(&unit, s.kappa.0, n0, s.label_iters, s.label_restarts, s.seed)?;
    // keep the original scale; only the labels change
    for (dst, src) in labeled.users.iter_mut().zip(&cbs.users) {
        dst.codewords = src.codewords.clone();
    }
    labeled.design_meta.config = Some(json!({ "label": config }));
    let codebook = write_text(out, "labeled.json", &labeled.to_json()?)?;
    let report = write_json(out, "labeling.json", &json!({ "config": config, "users": labelings }))?;
    Ok(vec![codebook, report])
}

pub fn eval(s: &EvalSettings, out: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let cbs = read_codebook(s.codebook.as_ref())?;
    cbs.validate()?;
    let cap = s.cap as u128;
    let mode = match s.mode {
        EvalMode::Auto if cbs.superimposed_size() <= cap => DeltaMode::Exhaustive { cap },
        EvalMode::Auto => DeltaMode::BranchAndBound,
        EvalMode::Exhaustive => DeltaMode::Exhaustive { cap },
        EvalMode::Montecarlo => DeltaMode::MonteCarlo { q: s.q, t_max: s.t_max, seed: s.seed },
        EvalMode::BranchAndBound => DeltaMode::BranchAndBound,
    };
    let report = metric_report(&cbs, s.kappa.0, s.ebn0_db, &mode, s.q, s.t_max, s.seed)?;
    let path = write_json(out, "metrics.json", &json!({ "config": to_value(s)?, "report": report }))?;
    Ok(vec![path])
}

pub fn simulate(s: &SimulateSettings, out: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let cbs = read_codebook(s.codebook.as_ref())?;
    cbs.validate()?;
    if s.ebn0_db.is_empty() || s.kappa.is_empty() {
        return Err(input_error("the Eb/N0 grid and the kappa list must not be empty"));
    }
    if s.max_iters == 0 || !(s.tol >= 0.0) {
        return Err(input_error("max_iters must be positive and tol non-negative"));
    }
    let grid: Vec<(f64, f64)> =
        s.kappa.iter().flat_map(|k| s.ebn0_db.iter().map(move |&e| (e, k.0))).collect();
    let cfg = DecoderConfig { max_iters: s.max_iters, tol: s.tol, record_decisions: true };
    let rows = ber_sweep(&cbs, &grid, s.frames, s.decoder, &cfg, s.seed)?;

    let config = to_value(s)?;
    let mut csv = Vec::new();
    write_ber_csv(&rows, &mut csv)?;
    let mut text = format!("# config: {}\n", serde_json::to_string(&config)?);
    text.push_str(std::str::from_utf8(&csv)?);
    let table = write_text(out, "ber.csv", &text)?;
    let full = write_json(out, "ber.json", &json!({ "config": config, "rows": rows }))?;
    Ok(vec![table, full])
}

pub fn complexity(s: &ComplexitySettings, out: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut s = s.clone();
    if let Some(path) = &s.codebook {
        let cbs = read_codebook(Some(path))?;
        s.t = cbs.projection_count() as u64;
        s.d_f = cbs.d_f() as u64;
        s.n = cbs.n() as u64;
        s.j = cbs.j() as u64;
    }
    let lp = ComplexityParams { t: s.t, d_f: s.d_f, n: s.n, j: s.j, i_t: s.i_t };
    let baseline = ComplexityParams { t: s.baseline_t, i_t: s.baseline_i_t, ..lp };
    let report = crr(&lp, &baseline)?;
    let path = write_json(out, "complexity.json", &json!({ "config": to_value(&s)?, "report": report }))?;
    Ok(vec![path])
}

pub fn validate(path: &Path) -> anyhow::Result<String> {
    let cbs = read_codebook(Some(&path.to_path_buf()))?;
    cbs.validate()?;
    Ok(format!(
        "{}: valid (M={}, K={}, J={}, N={}, T={})",
        path.display(),
        cbs.m,
        cbs.k(),
        cbs.j(),
        cbs.n(),
        cbs.projection_count()
    ))
}
