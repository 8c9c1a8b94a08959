//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.
//!
//! Run with `cargo test -p contextua-core --test acceptance`.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use contextua::bench::{self, ErrorKind, Number};
use contextua::chsh::{
    chsh_value, max_violation_search, product_ascent, product_bound_sample, refine_bound,
    sample_pair, AngleSet, VIOLATION_THRESHOLD,
};
use contextua::elements::{
    bell_preparation, compose, lift_on_path, npbs, phase_shifter, phase_shifter_on, pol_flipper,
    pol_rotator, qwp_fast_horizontal, qwp_fast_vertical, Lift, OpticalOperator,
};
use contextua::kochen_specker::{commutation_audit, eigen_verify, ks_operators, KsLabel};
use contextua::linalg::{is_unitary, matmul, CMat};
use contextua::measurement::{
    correlation_direct, correlation_from_intensities, intensity_quad, path_expectation,
    pol_expectation, projector_path, projector_pol, AnalyzerAngles, Branch,
};
use contextua::states::{bell_state, product_state, BeamState, BellKind, Path, ProductStateParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Machine-exact comparisons: every quantity is a short combination of
/// {0, ±1, ±i, 1/√2, e^{iθ}}.
const EXACT: f64 = 1e-12;
/// Optimizer and bound thresholds.
const SEARCH_TOL: f64 = 1e-9;
const BOUND: f64 = VIOLATION_THRESHOLD;
const TIGHTNESS_FLOOR: f64 = 1.95;
const BOUND_SAMPLES: u64 = 100_000;
const BOUND_SEED: u64 = 0x00C0_FFEE;
const PREP_BUDGET: Duration = Duration::from_millis(100);
const BOUND_BUDGET: Duration = Duration::from_secs(10);

type Outcome = Result<String, String>;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(corpus(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_amplitudes(name: &str) -> Vec<(f64, f64)> {
    let v: serde_json::Value = serde_json::from_str(&read(name)).expect("golden json");
    v["amplitudes"]
        .as_array()
        .expect("amplitudes")
        .iter()
        .map(|z| (z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
        .collect()
}

fn max_err_vs(state: &BeamState<f64>, want: &[(f64, f64)]) -> f64 {
    state
        .amplitudes()
        .as_slice()
        .iter()
        .zip(want)
        .map(|(z, &(re, im))| ((z.re - re).powi(2) + (z.im - im).powi(2)).sqrt())
        .fold(0.0, f64::max)
}

fn ac1_bell_preparation() -> Outcome {
    let start = Instant::now();
    let plus_prog = bench::parse(&read("mach_zehnder_phi_plus.bench")).map_err(|e| e.to_string())?;
    let plus = bench::compile::<f64>(&plus_prog).evaluate().map_err(|e| e.to_string())?;
    let minus_prog = bench::parse(&read("mach_zehnder_phi_minus.bench")).map_err(|e| e.to_string())?;
    let last = minus_prog.statements.last().cloned();
    let minus = bench::compile::<f64>(&minus_prog).evaluate().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    ensure(
        matches!(last, Some(bench::Statement::PhaseShift { ref path, angle }) if path == "b" && angle == Number::PiMultiple { num: 1, den: 1 }),
        || "Φ⁻ bench does not end with `ps b pi`".into(),
    )?;
    let phi_p = bell_state::<f64>(BellKind::PhiPlus, 1.0).unwrap();
    let phi_m = bell_state::<f64>(BellKind::PhiMinus, 1.0).unwrap();
    let e_plus = plus.amplitudes().max_abs_diff(phi_p.amplitudes()).unwrap();
    let e_minus = minus.amplitudes().max_abs_diff(phi_m.amplitudes()).unwrap();
    let g_plus = max_err_vs(&plus, &golden_amplitudes("mach_zehnder_phi_plus.expected.json"));
    let g_minus = max_err_vs(&minus, &golden_amplitudes("mach_zehnder_phi_minus.expected.json"));
    ensure(e_plus <= EXACT && g_plus <= EXACT, || {
        format!("Φ⁺ error {e_plus:e} (golden {g_plus:e})")
    })?;
    ensure(e_minus <= EXACT && g_minus <= EXACT, || {
        format!("Φ⁻ error {e_minus:e} (golden {g_minus:e})")
    })?;
    ensure(elapsed < PREP_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "Φ⁺ err {e_plus:.1e}, Φ⁻ err {e_minus:.1e}, {:.2} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn ac2_correlation_law() -> Outcome {
    let phi = bell_state::<f64>(BellKind::PhiPlus, 1.0).unwrap();
    let (mut e_direct, mut e_ratio, mut e_pair) = (0.0f64, 0.0f64, 0.0f64);
    let n = 100;
    for i in 0..n {
        for j in 0..n {
            let a = AnalyzerAngles::new(TAU * i as f64 / n as f64, TAU * j as f64 / n as f64);
            let want = (a.theta + a.phi).cos();
            let d = correlation_direct(&phi, a).map_err(|e| e.to_string())?;
            let q = intensity_quad(&phi, a).map_err(|e| e.to_string())?;
            let r = correlation_from_intensities(&q).map_err(|e| e.to_string())?;
            e_direct = e_direct.max((d - want).abs());
            e_ratio = e_ratio.max((r - want).abs());
            e_pair = e_pair.max((d - r).abs());
        }
    }
    ensure(e_direct <= EXACT && e_ratio <= EXACT && e_pair <= EXACT, || {
        format!("direct {e_direct:e}, ratio {e_ratio:e}, pairwise {e_pair:e}")
    })?;
    Ok(format!(
        "100x100 grid: direct {e_direct:.1e}, ratio {e_ratio:.1e}, pairwise {e_pair:.1e}"
    ))
}

fn ac3_maximal_violation() -> Outcome {
    let phi = bell_state::<f64>(BellKind::PhiPlus, 1.0).unwrap();
    let target = 2.0 * SQRT_2;
    let s = chsh_value(&phi, AngleSet::phi_plus_optimum())
        .map_err(|e| e.to_string())?
        .s_value;
    ensure((s - target).abs() <= EXACT, || format!("S = {s:.17}"))?;
    let found = max_violation_search::<f64>(BellKind::PhiPlus, SEARCH_TOL).map_err(|e| e.to_string())?;
    ensure((found.s_value - target).abs() <= SEARCH_TOL, || {
        format!("search reached {:.12} after {} sweeps", found.s_value, found.sweeps)
    })?;
    Ok(format!(
        "S = {s:.15}; cold-start search {:.12} ({} sweeps)",
        found.s_value, found.sweeps
    ))
}

fn ac4_noncontextual_bound() -> Outcome {
    let start = Instant::now();
    let report = product_bound_sample::<f64>(BOUND_SAMPLES, BOUND_SEED).map_err(|e| e.to_string())?;
    ensure(!report.any_violation && report.max_abs_s <= BOUND, || {
        format!("sampled |S| = {:.15} exceeds bound", report.max_abs_s)
    })?;
    ensure(report.max_abs_s > TIGHTNESS_FLOOR, || {
        format!("sampled max {:.6} not above {TIGHTNESS_FLOOR}", report.max_abs_s)
    })?;

    let refined = refine_bound(&report, SEARCH_TOL).map_err(|e| e.to_string())?;
    let mut ascent_max = refined.s_value.abs();
    for i in 0..16u64 {
        let (p, a) = sample_pair::<f64>(BOUND_SEED ^ 0xA5A5, i);
        let r = product_ascent(p, a, SEARCH_TOL).map_err(|e| e.to_string())?;
        ascent_max = ascent_max.max(r.s_value.abs());
    }
    ensure(ascent_max <= BOUND, || format!("ascent reached |S| = {ascent_max:.15}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed <= BOUND_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{BOUND_SAMPLES} draws: max |S| {:.6}; refined {:.12}; ascent max {:.12}; {:.2} s",
        report.max_abs_s,
        refined.s_value.abs(),
        ascent_max,
        elapsed.as_secs_f64()
    ))
}

fn ac5_factorization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut u = || rng.gen::<f64>() * TAU;
    let (mut err_factor, mut err_double, mut err_single) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let p = ProductStateParams::new(u(), u(), u(), u()).unwrap();
        let a = AnalyzerAngles::new(u(), u());
        let s = product_state(&p, 1.0).unwrap();
        let e = correlation_direct(&s, a).map_err(|e| e.to_string())?;
        let per_factor = pol_expectation(&p, a.theta) * path_expectation(&p, a.phi);
        err_factor = err_factor.max((e - per_factor).abs());
        let double = (2.0 * p.alpha).sin() * (p.beta - a.theta).cos()
            * (2.0 * p.gamma).sin() * (p.delta - a.phi).cos();
        let single = p.alpha.sin() * (p.beta - a.theta).cos()
            * p.gamma.sin() * (p.delta - a.phi).cos();
        err_double = err_double.max((e - double).abs());
        err_single = err_single.max((e - single).abs());
    }
    ensure(err_factor <= EXACT, || format!("E vs E_pol·E_path: {err_factor:e}"))?;
    ensure(err_double <= EXACT, || format!("sin 2α closed form off by {err_double:e}"))?;
    Ok(format!(
        "E = E_pol·E_path to {err_factor:.1e}; matching closed form: sin 2α·cos(β−θ)·sin 2γ·cos(δ−φ) \
         (err {err_double:.1e}); sin α variant err {err_single:.3}"
    ))
}

fn ac6_kochen_specker() -> Outcome {
    let phi_m = bell_state::<f64>(BellKind::PhiMinus, 1.0).unwrap();
    let report = eigen_verify(&phi_m, EXACT).map_err(|e| e.to_string())?;
    let table = commutation_audit(&ks_operators::<f64>(), EXACT).map_err(|e| e.to_string())?;
    let pairs = table.non_commuting_pairs();
    let pair_names: Vec<String> = pairs
        .iter()
        .map(|(a, b)| format!("{}/{}", a.name(), b.name()))
        .collect();
    let summary = format!(
        "max residual {:.1e}; lhs {:+}, rhs {:+}, contradiction {}; non-commuting pairs ({}): {}",
        report.max_residual(),
        report.lhs_product,
        report.rhs_product,
        report.contradiction,
        pairs.len(),
        pair_names.join(", ")
    );
    ensure(report.max_residual() <= EXACT, || summary.clone())?;
    ensure(
        report.lhs_product == 1 && report.rhs_product == -1 && report.contradiction,
        || summary.clone(),
    )?;
    ensure(
        pairs == [(KsLabel::JxPolJyPath, KsLabel::JyPolJxPath)],
        || format!("expected exactly one non-commuting pair (the two composites); {summary}"),
    )?;
    Ok(summary)
}

fn ac7_element_algebra() -> Outcome {
    let id2 = CMat::<f64>::identity(2);
    let mut catalog: Vec<OpticalOperator<f64>> = vec![npbs()];
    for path in [Path::A, Path::B] {
        catalog.push(lift_on_path(&qwp_fast_vertical(), path).unwrap());
        catalog.push(lift_on_path(&qwp_fast_horizontal(), path).unwrap());
        catalog.push(lift_on_path(&pol_flipper(), path).unwrap());
        for &t in &[0.3, PI / 4.0, -2.0] {
            catalog.push(lift_on_path(&pol_rotator(t), path).unwrap());
            catalog.push(OpticalOperator::lifted(phase_shifter_on(path, t), Lift::PathSpace, "ps").unwrap());
        }
    }
    catalog.push(compose(&bell_preparation()).unwrap());
    for op in &catalog {
        ensure(op.is_unitary() && is_unitary(op.matrix(), EXACT).unwrap(), || {
            format!("{} not unitary", op.label())
        })?;
    }
    let qwp4 = qwp_fast_vertical::<f64>().pow(4).unwrap().max_abs_diff(&id2).unwrap();
    let flip2 = pol_flipper::<f64>().pow(2).unwrap().max_abs_diff(&id2).unwrap();
    ensure(qwp4 <= EXACT, || format!("QWP^4 defect {qwp4:e}"))?;
    ensure(flip2 <= EXACT, || format!("flip^2 defect {flip2:e}"))?;
    ensure(phase_shifter(0.0f64) == id2, || "ps(0) != I".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let id4 = CMat::<f64>::identity(4);
    let (mut rot, mut compl, mut orth) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let (t1, t2) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let lhs = matmul(&pol_rotator(t1), &pol_rotator(t2)).unwrap();
        rot = rot.max(lhs.max_abs_diff(&pol_rotator(t1 + t2)).unwrap());
        let x: f64 = rng.gen_range(-10.0..10.0);
        for (p0, pp) in [
            (projector_pol(x, Branch::Zero), projector_pol(x, Branch::Pi)),
            (projector_path(x, Branch::Zero), projector_path(x, Branch::Pi)),
        ] {
            compl = compl.max(p0.matrix().add(pp.matrix()).unwrap().max_abs_diff(&id4).unwrap());
            orth = orth.max(matmul(p0.matrix(), pp.matrix()).unwrap().max_abs());
        }
    }
    ensure(rot <= EXACT, || format!("rotator additivity {rot:e}"))?;
    ensure(compl <= EXACT && orth <= EXACT, || {
        format!("projector completeness {compl:e}, orthogonality {orth:e}")
    })?;
    Ok(format!(
        "{} unitaries; QWP⁴ {qwp4:.0e}, flip² {flip2:.0e}, rotator {rot:.1e}, completeness {compl:.1e}, orthogonality {orth:.1e}",
        catalog.len()
    ))
}

fn ac8_parser() -> Outcome {
    let text = read("mach_zehnder_phi_plus.bench");
    let p1 = bench::parse(&text).map_err(|e| e.to_string())?;
    let f1 = bench::format(&p1);
    let p2 = bench::parse(&f1).map_err(|e| e.to_string())?;
    let f2 = bench::format(&p2);
    ensure(p1.same_structure(&p2) && f1 == f2 && p1.statements.len() == 3, || {
        format!("round trip differs:\n{f1}---\n{f2}")
    })?;

    let cases: [(&str, ErrorKind, usize, usize); 7] = [
        ("", ErrorKind::Semantic, 1, 1),
        ("source a V 1\nnpbs a b\nps c pi\n", ErrorKind::Semantic, 3, 4),
        ("source a V 1\n  laser a\n", ErrorKind::Syntax, 2, 3),
        ("source a V 1\nsource a V 1\n", ErrorKind::Semantic, 2, 1),
        ("source a V 1\nnpbs a b\nnpbs b c\n", ErrorKind::Semantic, 3, 8),
        ("source a V 1\nnpbs a b\npr b pi/0\n", ErrorKind::Lex, 3, 6),
        ("source a V 1\nnpbs a b\nflip b $\n", ErrorKind::Lex, 3, 8),
    ];
    for (src, kind, line, col) in cases {
        let e = match bench::parse(src) {
            Ok(_) => return Err(format!("{src:?} parsed")),
            Err(e) => e,
        };
        ensure((e.kind, e.line, e.column) == (kind, line, col), || {
            format!("{src:?}: got {:?} at {}:{}, want {kind:?} at {line}:{col}", e.kind, e.line, e.column)
        })?;
    }

    let exact = [
        ("pi/4", PI / 4.0),
        ("-pi/4", -PI / 4.0),
        ("pi/2", PI / 2.0),
        ("pi", PI),
        ("2pi", TAU),
    ];
    for (lit, want) in exact {
        let n: Number = lit.parse().map_err(|e: String| e)?;
        ensure(n.to_f64() == want && n.to_string() == lit, || {
            format!("{lit} -> {} ({})", n.to_f64(), n)
        })?;
    }
    let sym = bench::parse("source a V 1\nnpbs a b\npr b pi/4\n").unwrap();
    ensure(bench::format(&sym).contains("pr b pi/4"), || "pi/4 decimalized".into())?;
    Ok("round trip fixed point; 7 error cases located; π literals exact".into())
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 8] = [
        ("AC1", "Bell-state preparation", ac1_bell_preparation),
        ("AC2", "correlation law E = cos(θ+φ)", ac2_correlation_law),
        ("AC3", "maximal 2√2 violation", ac3_maximal_violation),
        ("AC4", "product-state bound |S| ≤ 2", ac4_noncontextual_bound),
        ("AC5", "factorization for product states", ac5_factorization),
        ("AC6", "Kochen-Specker relations", ac6_kochen_specker),
        ("AC7", "element algebra", ac7_element_algebra),
        ("AC8", "bench parser", ac8_parser),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let outcome = std::panic::catch_unwind(run)
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
