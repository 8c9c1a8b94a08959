use std::path::PathBuf;

use contextua::bench;
use contextua::chsh::{chsh_value, max_violation_search_state, AngleSet};
use contextua::states::{bell_state, schmidt_separable, BellKind};
use contextua::{BeamState32, BeamState64};

fn corpus(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn prepare(name: &str) -> BeamState64 {
    let program = bench::parse(&corpus(name)).unwrap();
    bench::compile::<f64>(&program).evaluate().unwrap()
}

#[test]
fn serialized_state_matches_golden() {
    for stem in ["mach_zehnder_phi_plus", "mach_zehnder_phi_minus"] {
        let got = serde_json::to_value(prepare(&format!("{stem}.bench"))).unwrap();
        let want: serde_json::Value =
            serde_json::from_str(&corpus(&format!("{stem}.expected.json"))).unwrap();
        assert_eq!(got["basis"], want["basis"]);
        assert!((got["intensity"].as_f64().unwrap() - want["intensity"].as_f64().unwrap()).abs() < 1e-12);
        let pairs = got["amplitudes"].as_array().unwrap().iter().zip(want["amplitudes"].as_array().unwrap());
        for (g, w) in pairs {
            for k in 0..2 {
                assert!((g[k].as_f64().unwrap() - w[k].as_f64().unwrap()).abs() < 1e-12, "{stem}");
            }
        }
    }
}

#[test]
fn product_bench_stays_classical() {
    let s = prepare("product_diagonal.bench");
    assert!(schmidt_separable(&s, 1e-12));
    assert!((s.intensity() - 2.5).abs() < 1e-12);
    let best = max_violation_search_state(&s, 1e-10).unwrap();
    assert!(best.s_value <= 2.0 + 1e-9, "{}", best.s_value);
}

#[test]
fn prepared_state_violates_like_bell_state() {
    let s = prepare("mach_zehnder_phi_plus.bench");
    let a = AngleSet::phi_plus_optimum();
    let got = chsh_value(&s, a).unwrap().s_value;
    let want = chsh_value(&bell_state(BellKind::PhiPlus, 1.0).unwrap(), a).unwrap().s_value;
    assert!((got - want).abs() < 1e-12);
}

#[test]
fn single_precision_pipeline() {
    let program = bench::parse(&corpus("mach_zehnder_phi_plus.bench")).unwrap();
    let s: BeamState32 = bench::compile::<f32>(&program).evaluate().unwrap();
    let r = chsh_value(&s, AngleSet::phi_plus_optimum()).unwrap();
    assert!((r.s_value - 2.0 * 2f32.sqrt()).abs() < 1e-5);
    assert!(r.violates_bound);
}

#[test]
fn source_intensity_carried_separately() {
    let text = corpus("mach_zehnder_phi_plus.bench").replace("source a V 1.0", "source a V 7");
    let s = bench::compile::<f64>(&bench::parse(&text).unwrap()).evaluate().unwrap();
    assert!((s.intensity() - 7.0).abs() < 1e-12);
    let base = prepare("mach_zehnder_phi_plus.bench");
    assert!(s.amplitudes().max_abs_diff(base.amplitudes()).unwrap() < 1e-12);
}
