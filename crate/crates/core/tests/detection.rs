use lpcb_core::fixtures;
use lpcb_core::metrics::noise_from_ebn0;
use lpcb_core::rng::indexed_rng;
use lpcb_core::simulator::{transmit, DecoderConfig, DecoderKind, Received};
use lpcb_core::{
    ber_sweep, lp_mpa_decode, mpa_decode, mpa_op_counts, ChannelSpec, CodebookSet, ComplexityParams, Complex64,
};
use rand::Rng;

fn random_symbols<R: Rng>(cbs: &CodebookSet, rng: &mut R) -> Vec<usize> {
    (0..cbs.j()).map(|_| rng.random_range(0..cbs.m)).collect()
}

#[test]
fn projected_detector_matches_full_detector() {
    let cfg = DecoderConfig { max_iters: 6, tol: 0.0, record_decisions: false };
    for (name, cbs) in fixtures::all() {
        let n0 = noise_from_ebn0(&cbs, 6.0);
        let channel = ChannelSpec::new(3.0, n0).unwrap();
        for f in 0..20 {
            let mut rng = indexed_rng(7, 0, f);
            let sent = random_symbols(&cbs, &mut rng);
            let rx = transmit(&cbs, &sent, &channel, &mut rng).unwrap();
            let a = mpa_decode(&cbs, &rx, n0, &cfg).unwrap();
            let b = lp_mpa_decode(&cbs, &rx, n0, &cfg).unwrap();
            assert_eq!(a.symbols, b.symbols, "{name}");
            for (pa, pb) in a.posteriors.iter().zip(&b.posteriors) {
                for (x, y) in pa.iter().zip(pb) {
                    assert!((x - y).abs() < 1e-9, "{name}: {x} vs {y}");
                }
            }
        }
    }
}

#[test]
fn noise_free_detection_is_error_free() {
    let cbs = fixtures::a43_150();
    let cfg = DecoderConfig::default();
    for f in 0..1000 {
        let mut rng = indexed_rng(3, 1, f);
        let sent = random_symbols(&cbs, &mut rng);
        let y = cbs.superimpose(&sent);
        let rx = Received { y, h: vec![Complex64::new(1.0, 0.0); cbs.k()] };
        let out = lp_mpa_decode(&cbs, &rx, 1e-3, &cfg).unwrap();
        assert_eq!(out.symbols, sent);
    }
}

#[test]
fn posteriors_are_normalized_every_iteration() {
    let cbs = fixtures::a84_150();
    let n0 = noise_from_ebn0(&cbs, 4.0);
    let channel = ChannelSpec::new(1.0, n0).unwrap();
    let cfg = DecoderConfig { max_iters: 5, tol: 0.0, record_decisions: true };
    let mut rng = indexed_rng(1, 2, 3);
    let sent = random_symbols(&cbs, &mut rng);
    let rx = transmit(&cbs, &sent, &channel, &mut rng).unwrap();
    let out = lp_mpa_decode(&cbs, &rx, n0, &cfg).unwrap();
    assert_eq!(out.posterior_history.len(), 5);
    assert_eq!(out.decisions.len(), 5);
    for iteration in &out.posterior_history {
        for p in iteration {
            assert!(p.iter().all(|&x| (0.0..=1.0).contains(&x)));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn measured_operations_track_closed_form() {
    for (name, cbs) in fixtures::all() {
        let n0 = noise_from_ebn0(&cbs, 10.0);
        let channel = ChannelSpec::new(f64::INFINITY, n0).unwrap();
        let mut rng = indexed_rng(0, 0, 0);
        let sent = random_symbols(&cbs, &mut rng);
        let rx = transmit(&cbs, &sent, &channel, &mut rng).unwrap();
        for iters in [1, 4] {
            let cfg = DecoderConfig { max_iters: iters, tol: 0.0, record_decisions: false };
            let out = lp_mpa_decode(&cbs, &rx, n0, &cfg).unwrap();
            let formula = mpa_op_counts(&ComplexityParams {
                t: cbs.projection_count() as u64,
                d_f: cbs.d_f() as u64,
                n: cbs.n() as u64,
                j: cbs.j() as u64,
                i_t: iters as u64,
            })
            .unwrap();
            let rm = out.stats.n_mult as f64 / formula.mult as f64;
            let ra = out.stats.n_add as f64 / formula.add as f64;
            assert!((0.5..=2.0).contains(&rm), "{name} I_t={iters}: mult ratio {rm}");
            assert!((0.5..=2.0).contains(&ra), "{name} I_t={iters}: add ratio {ra}");
        }
    }
}

#[test]
fn projected_detector_is_cheaper() {
    let cbs = fixtures::a43_150();
    let n0 = noise_from_ebn0(&cbs, 10.0);
    let rx = Received { y: cbs.superimpose(&[0; 6]), h: vec![Complex64::new(1.0, 0.0); 4] };
    let cfg = DecoderConfig { max_iters: 2, tol: 0.0, record_decisions: false };
    let full = mpa_decode(&cbs, &rx, n0, &cfg).unwrap().stats;
    let lp = lp_mpa_decode(&cbs, &rx, n0, &cfg).unwrap().stats;
    assert!(lp.n_mult < full.n_mult);
    assert!(lp.n_add < full.n_add);
}

#[test]
fn sweep_is_reproducible_and_monotone() {
    let cbs = fixtures::a43_150();
    let grid = [(0.0, f64::INFINITY), (4.0, f64::INFINITY), (8.0, f64::INFINITY)];
    let cfg = DecoderConfig::default();
    let a = ber_sweep(&cbs, &grid, 3000, DecoderKind::LpMpa, &cfg, 42).unwrap();
    let b = ber_sweep(&cbs, &grid, 3000, DecoderKind::LpMpa, &cfg, 42).unwrap();
    assert_eq!(a, b);
    for w in a.windows(2) {
        assert!(w[1].ber <= w[0].ber);
    }
    for r in &a {
        assert!(r.ci_low <= r.ber && r.ber <= r.ci_high);
        assert_eq!(*r.bit_errors_per_iter.last().unwrap(), r.bit_errors);
    }
}

#[test]
fn fading_has_unit_second_moment() {
    let channel = ChannelSpec::new(2.0, 1.0).unwrap();
    let mut rng = indexed_rng(5, 0, 0);
    let n = 100_000;
    let m2: f64 = (0..n).map(|_| channel.draw_fading(&mut rng).norm_sqr()).sum::<f64>() / n as f64;
    assert!((m2 - 1.0).abs() < 0.01, "{m2}");
    let awgn = ChannelSpec::new(f64::INFINITY, 1.0).unwrap();
    assert_eq!(awgn.draw_fading(&mut rng), Complex64::new(1.0, 0.0));
}
