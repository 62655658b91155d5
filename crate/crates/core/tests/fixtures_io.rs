use lpcb_core::codebook::power_imbalance;
use lpcb_core::fixtures;
use lpcb_core::mother::Permutation;
use lpcb_core::{
    assemble, build_basic_constellation, build_lp_vector, builtin_factor_graph, builtin_signature, CodebookSet,
    Complex64, Error, MotherConstellation, OperatorParams, OverlapPlan, Overload,
};

#[test]
fn fixtures_round_trip_byte_identical() {
    for text in [fixtures::A43_150_JSON, fixtures::A42_200_JSON, fixtures::A84_150_JSON] {
        let cbs = CodebookSet::from_json(text).unwrap();
        assert_eq!(cbs.to_json().unwrap(), text);
    }
}

#[test]
fn fixtures_validate_and_have_unit_energy() {
    for (_, cbs) in fixtures::all() {
        cbs.validate().unwrap();
        assert!((cbs.mean_codeword_energy() - 1.0).abs() < 1e-3);
        assert_eq!(cbs.users.len(), cbs.graph.j);
    }
}

#[test]
fn missing_field_is_a_parse_error() {
    let text = fixtures::A43_150_JSON.replacen("\"M\": 4,", "", 1);
    match CodebookSet::from_json(&text) {
        Err(Error::Parse(msg)) => assert!(msg.contains("missing field"), "{msg}"),
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn support_mismatch_is_a_validation_error() {
    let mut cbs = fixtures::a43_150();
    // user 1 is silent on resource 1
    cbs.users[0].codewords[2][0] = Complex64::new(0.3, 0.0);
    let err = cbs.validate().unwrap_err();
    assert!(err.is_validation(), "{err:?}");
    let err = CodebookSet::from_json(&cbs.to_json().unwrap()).unwrap_err();
    assert!(err.is_validation(), "{err:?}");
}

/// Rebuild the published 4-ary, 3-projection codebook from its operator
/// values alone. The mother constellation is `[x1, 0, 0, -x1]`,
/// `[0, x1, -x1, 0]`; the value of operator `i` times `x1` is read off the
/// first user carrying it.
#[test]
fn a43_reproduced_by_assembly() {
    let cbs = fixtures::a43_150();
    let fg = builtin_factor_graph(Overload::P150);
    let pattern = builtin_signature(Overload::P150);
    let mut products = [None; 3];
    for j in 0..fg.j {
        for (dim, &k) in fg.resources_of_user[j].iter().enumerate() {
            let op = pattern.index[k][j].unwrap();
            let col = if dim == 0 { 0 } else { 1 };
            products[op].get_or_insert(cbs.users[j].codewords[col][k]);
        }
    }
    let p: Vec<Complex64> = products.iter().map(|v| v.unwrap()).collect();
    let x1_phase = p[0].arg();
    let omega = (1.0 - 5f64.sqrt()) / 2.0;
    let phi = (x1_phase / (2.0 * std::f64::consts::PI) - omega).rem_euclid(1.0);
    let params = OperatorParams {
        energies: p.iter().map(|v| v.norm()).collect(),
        angles: p.iter().map(|v| v.arg() - x1_phase).collect(),
        rho: 0.0,
        phi,
    };

    let basic = build_basic_constellation(3, 1.0, 0.0, phi).unwrap();
    let plan = OverlapPlan { points: vec![2], counts: vec![1] };
    let source = build_lp_vector(&basic, 4, &plan).unwrap();
    assert!((source.points[0] - Complex64::from_polar(1.0, x1_phase)).norm() < 1e-12);
    let perms = vec![Permutation::new(vec![0, 2, 3, 1]).unwrap(), Permutation::new(vec![2, 0, 1, 3]).unwrap()];
    let mc = MotherConstellation::from_permutations(source, perms).unwrap();
    let built = assemble(&mc, &params, &fg, &pattern).unwrap();

    for (a, b) in built.users.iter().zip(&cbs.users) {
        for (ca, cb) in a.codewords.iter().zip(&b.codewords) {
            for (x, y) in ca.iter().zip(cb) {
                assert!((x - y).norm() < 1e-4, "{x} vs {y}");
            }
        }
    }
}

#[test]
fn operator_power_checks() {
    let equal = OperatorParams { energies: vec![2.0, 2.0, 2.0], angles: vec![0.0, 1.0, 2.0], rho: 0.0, phi: 0.0 };
    let r = power_imbalance(&equal.operators(), Some(Overload::P150));
    assert!(!r.distinct_magnitudes);
    assert_eq!(r.user_imbalance, Some(false));

    let graded = OperatorParams { energies: vec![1.0, 2.0, 4.0], ..equal.clone() };
    let r = power_imbalance(&graded.operators(), Some(Overload::P150));
    assert!(r.distinct_magnitudes);
    assert_eq!(r.user_imbalance, Some(true));

    let z200 = OperatorParams {
        energies: vec![1.0, 4.0, 2.0, 3.0],
        angles: vec![0.0, 0.5, 1.0, 1.5],
        rho: 0.0,
        phi: 0.0,
    };
    let r = power_imbalance(&z200.operators(), Some(Overload::P200));
    assert_eq!(r.user_imbalance, Some(true));
    assert_eq!(power_imbalance(&z200.operators(), None).user_imbalance, None);
}

#[test]
fn projection_counts_match_design() {
    assert_eq!(fixtures::a43_150().projection_count(), 3);
    assert_eq!(fixtures::a42_200().projection_count(), 2);
    assert_eq!(fixtures::a84_150().projection_count(), 4);
}
