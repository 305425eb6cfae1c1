//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use cascade_noise::apd::{apd_to_cascade, step_excess_noise_ratio, step_stats, total_excess_noise, StaircaseApd};
use cascade_noise::engine::*;
use cascade_noise::monte_carlo::mc_step_gain;
use cascade_noise::scenario::{fig2b_identical_external, fig3_internal_only, ScenarioConfig};
use cascade_noise::{rel_close, Network, Power, Stage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative tolerance for algebraically identical formula paths.
const IDENTITY_TOL: f64 = 1e-12;
/// Absolute tolerance for the two forms of the stepwise excess noise factor.
const STEP_FORM_TOL: f64 = 1e-15;
/// Tolerance for the fig3 cumulative total against 1.771561.
const FIG3_TOL: f64 = 1e-9;
/// Monte Carlo agreement, in standard errors.
const MC_SIGMAS: f64 = 4.0;
const MC_TRIALS: u64 = 1_000_000;
const MC_SEED: u64 = 20_240_601;
const RANDOM_NETWORKS: usize = 1000;
const SUITE_SEED: u64 = 0x5eed_cafe;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// n ≤ 12, gains log-uniform on [0.1, 1e4], noises uniform on [0, 1e6]
/// with one in ten set exactly to zero.
fn random_networks(count: usize, seed: u64) -> Vec<Network> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.1) {
            0.0
        } else {
            rng.random_range(0.0..=1e6)
        }
    };
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=12);
            let stages = (0..n)
                .map(|_| {
                    let g = 10f64.powf(rng.random_range(-1.0..=4.0));
                    let ni = noise(&mut rng);
                    let ne = noise(&mut rng);
                    Stage::new(g, ni, ne)
                })
                .collect();
            let si = rng.random_range(1e-3..=1e6);
            let n_i = rng.random_range(1e-3..=1e6);
            Network::new(si, n_i, stages).expect("generated network is valid")
        })
        .collect()
}

fn ref2() -> Network {
    Network::new(100.0, 1.0, vec![Stage::new(10.0, 0.0, 10.0); 2]).unwrap()
}

fn refint() -> Network {
    Network::new(100.0, 1.0, vec![Stage::new(10.0, 5.0, 0.0); 2]).unwrap()
}

fn criterion_1() -> Check {
    let nets = random_networks(RANDOM_NETWORKS, SUITE_SEED);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (i, net) in nets.iter().enumerate() {
        let product = total_product_composition(net).unwrap().value();
        let base = total_base_corrected(net).unwrap().value();
        let snr = snr_ratio_total(net).unwrap().value();
        let friis_comp = total_friis_composition(net).unwrap().value();
        let friis_base = total_base_friis(net).unwrap().value();
        for (a, b) in [(product, base), (product, snr), (base, snr), (friis_comp, friis_base)] {
            worst = worst.max(cascade_noise::rel_diff(a, b));
            ensure(rel_close(a, b, IDENTITY_TOL), || format!("network {i}: {a} vs {b}"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{RANDOM_NETWORKS} networks, worst relative gap {worst:.1e}, {elapsed:?}"))
}

fn criterion_2() -> Check {
    let mut worst: f64 = 0.0;
    for (i, net) in random_networks(RANDOM_NETWORKS, SUITE_SEED).iter().enumerate() {
        let net = net.without_internal_noise();
        let friis = total_friis_composition(&net).unwrap().value();
        let product = total_product_composition(&net).unwrap().value();
        worst = worst.max(cascade_noise::rel_diff(friis, product));
        ensure(rel_close(friis, product, IDENTITY_TOL), || format!("network {i}: {friis} vs {product}"))?;
    }
    Ok(format!("eq4 = eq9 with N_int = 0, worst relative gap {worst:.1e}"))
}

fn close(a: f64, b: f64) -> bool {
    rel_close(a, b, IDENTITY_TOL)
}

fn criterion_3() -> Check {
    let r = build_report(&ref2()).unwrap();
    let friis: Vec<f64> = r.per_stage.iter().map(|s| s.friis.value()).collect();
    let bang: Vec<f64> = r.per_stage.iter().map(|s| s.corrected.value()).collect();
    ensure(close(friis[0], 2.0) && close(friis[1], 2.0), || format!("F_friis = {friis:?}"))?;
    ensure(close(bang[0], 2.0) && close(bang[1], 1.05), || format!("F_bang = {bang:?}"))?;
    let t = r.totals;
    for (name, f) in [
        ("eq2", t.base_friis),
        ("eq4", t.friis_composition),
        ("eq8", t.base_corrected),
        ("eq9", t.product_composition),
        ("snr_ratio", t.snr_ratio),
    ] {
        ensure(close(f.value(), 2.1), || format!("{name} = {}", f.value()))?;
    }
    Ok("F_friis [2, 2], F_bang [2, 1.05], all totals 2.1".into())
}

fn criterion_4() -> Check {
    let r = build_report(&refint()).unwrap();
    let bang: Vec<f64> = r.per_stage.iter().map(|s| s.corrected.value()).collect();
    ensure(close(bang[0], 1.5) && close(bang[1], 1.0 + 5.0 / 150.0), || format!("F_bang = {bang:?}"))?;
    ensure(close(r.totals.product_composition.value(), 1.55), || {
        format!("eq9 = {}", r.totals.product_composition.value())
    })?;
    let (eq2, eq4) = (r.totals.base_friis.value(), r.totals.friis_composition.value());
    ensure(close(eq2, 1.0) && close(eq4, 1.0), || format!("Friis totals {eq2}, {eq4}"))?;
    Ok("F_bang [1.5, 1.0333…], eq9 1.55, Friis totals 1.0".into())
}

fn criterion_5() -> Check {
    // Dominance applies with internal noise neglected: the criterion-2 suite
    // restricted to G ≥ 1.
    let mut checked = 0;
    for (i, net) in random_networks(RANDOM_NETWORKS, SUITE_SEED).iter().enumerate() {
        if net.stages.iter().any(|s| s.power_gain < 1.0) {
            continue;
        }
        let net = net.without_internal_noise();
        checked += 1;
        for x in 2..=net.len() {
            let c = stage_factor_corrected(&net, x).unwrap();
            let f = stage_factor_friis(&net, x).unwrap();
            ensure(c.value() <= f.value(), || format!("network {i} stage {x}: {c} > {f}"))?;
        }
    }
    ensure(checked >= 50, || format!("only {checked} networks with G ≥ 1"))?;

    let fig2b = fig2b_identical_external(&ScenarioConfig::<f64>::default()).map_err(|e| e.to_string())?;
    ensure(fig2b.rows.windows(2).all(|w| w[1].corrected < w[0].corrected), || {
        "fig2b corrected column not strictly decreasing".into()
    })?;

    let cfg = ScenarioConfig {
        n: 6,
        gain: 10.0,
        external_noise: 0.0,
        internal_ratio: 1.0,
        ..ScenarioConfig::default()
    };
    let fig3 = fig3_internal_only(&cfg).map_err(|e| e.to_string())?;
    for (m, row) in fig3.totals.iter().enumerate() {
        let expect = 1.1_f64.powi(m as i32 + 1);
        ensure((row.corrected.value() - expect).abs() <= FIG3_TOL, || {
            format!("fig3 total {}: {} vs {expect}", m + 1, row.corrected.value())
        })?;
    }
    ensure(fig3.totals.windows(2).all(|w| w[1].corrected.value() > w[0].corrected.value()), || {
        "fig3 totals not strictly increasing".into()
    })?;
    let last = fig3.totals.last().unwrap().corrected.value();
    ensure((last - 1.771561).abs() <= FIG3_TOL, || format!("fig3 final total {last}"))?;
    Ok(format!("dominance on {checked} G≥1 networks, fig2b decreasing, fig3 ends at {last:.9}"))
}

fn criterion_6() -> Check {
    let net = ref2();
    let ni2 = stage_input_noise(&net, 2).unwrap().0;
    let bang = stage_factor_corrected(&net, 2).unwrap().value();
    let friis = stage_factor_friis(&net, 2).unwrap().value();
    ensure(ni2 == 20.0 && ni2 != net.input_noise.0, || format!("N_i(2) = {ni2}"))?;
    ensure(close(bang, 1.05) && close(friis, 2.0) && bang != friis, || {
        format!("F_2: bang {bang}, friis {friis}")
    })?;
    Ok("N_i(2) = 20 ≠ 1, F_2 1.05 ≠ 2.0".into())
}

fn criterion_7() -> Check {
    let mut worst: f64 = 0.0;
    for k in 0..=1000 {
        let p = k as f64 / 1000.0;
        let d = (step_excess_noise_ratio(p) - step_stats(p).unwrap().excess_noise.value()).abs();
        worst = worst.max(d);
        ensure(d <= STEP_FORM_TOL, || format!("p = {p}: forms differ by {d:e}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 7);
    for trial in 0..500 {
        let len = rng.random_range(1..=10);
        let steps: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..=1.0)).collect();
        let apd = StaircaseApd::new(steps.clone()).unwrap();
        let net = apd_to_cascade(&apd, Power::new(1.0), Power::new(rng.random_range(1e-3..=1e3))).unwrap();
        for (x, &p) in steps.iter().enumerate() {
            let stage = stage_factor_corrected(&net, x + 1).unwrap().value();
            let step = step_stats(p).unwrap().excess_noise.value();
            ensure(close(stage, step), || format!("vector {trial} step {}: {stage} vs {step}", x + 1))?;
        }
        let total = total_product_composition(&net).unwrap().value();
        let analytic = total_excess_noise(&apd).value();
        ensure(close(total, analytic), || format!("vector {trial}: {total} vs {analytic}"))?;
    }
    Ok(format!("grid worst gap {worst:.1e}; 500 random vectors correspond"))
}

fn criterion_8() -> Check {
    let mut notes = Vec::new();
    for p in [0.1, 0.3, 0.5, 0.9] {
        let start = Instant::now();
        let e = mc_step_gain(p, MC_TRIALS, MC_SEED).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(10), || format!("p = {p}: took {elapsed:?}"))?;
        let z_mean = (e.mean - (1.0 + p)) / e.std_error_mean;
        let z_m2 = (e.second_moment - (1.0 + 3.0 * p)) / e.std_error_second_moment;
        ensure(z_mean.abs() <= MC_SIGMAS, || format!("p = {p}: mean {} is {z_mean:.2}σ off", e.mean))?;
        ensure(z_m2.abs() <= MC_SIGMAS, || {
            format!("p = {p}: second moment {} is {z_m2:.2}σ off", e.second_moment)
        })?;
        let again = mc_step_gain(p, MC_TRIALS, MC_SEED).map_err(|e| e.to_string())?;
        ensure(again == e, || format!("p = {p}: rerun differs"))?;
        notes.push(format!("p={p}: {z_mean:+.2}σ/{z_m2:+.2}σ {:.0?}", elapsed));
    }
    Ok(notes.join(", "))
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_cascade-noise")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

fn criterion_9() -> Check {
    let ref2 = fixture("ref2.toml");
    let ref2 = ref2.to_str().unwrap();

    let out = run(&["analyze", ref2, "--format", "csv"]);
    ensure(code(&out) == 0, || format!("analyze exit {}", code(&out)))?;
    let csv = String::from_utf8(out.stdout.clone()).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    let expected = [
        "stage,input_noise,f_friis,f_bang",
        "1,1.00000000000,2.00000000000,2.00000000000",
        "2,20.0000000000,2.00000000000,1.05000000000",
        "",
        "total,formula,value",
        "eq2,base_friis,2.10000000000",
        "eq4,friis_composition,2.10000000000",
        "eq8,base_corrected,2.10000000000",
        "eq9,product_composition,2.10000000000",
        "snr_ratio,snr_ratio,2.10000000000",
    ];
    ensure(lines == expected, || format!("csv was:\n{csv}"))?;
    let again = run(&["analyze", ref2, "--format", "csv"]);
    ensure(again.stdout == out.stdout, || "csv output not deterministic".into())?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = dir.path().join("report.json");
    let second = dir.path().join("report2.json");
    let out = run(&["analyze", ref2, "--format", "json", "--out", first.to_str().unwrap()]);
    ensure(code(&out) == 0, || format!("json exit {}", code(&out)))?;
    let out = run(&["analyze", first.to_str().unwrap(), "--format", "json", "--out", second.to_str().unwrap()]);
    ensure(code(&out) == 0, || format!("json re-ingest exit {}", code(&out)))?;
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    ensure(a == b, || "json re-ingestion changed the report".into())?;

    let missing = run(&["analyze", "/nonexistent/net.toml"]);
    ensure(code(&missing) == 2, || format!("missing file exit {}", code(&missing)))?;
    let unknown = run(&["scenario", "fig9"]);
    ensure(code(&unknown) == 2, || format!("unknown scenario exit {}", code(&unknown)))?;
    let bad_p = run(&["apd", "--p", "1.5"]);
    ensure(code(&bad_p) == 2, || format!("p out of range exit {}", code(&bad_p)))?;

    let overflow = dir.path().join("overflow.json");
    std::fs::write(
        &overflow,
        r#"{"input_signal": 1, "input_noise": 1, "stages": [{"gain": 1e300, "external_noise": 1}, {"gain": 1e300, "external_noise": 1}]}"#,
    )
    .unwrap();
    let breach = run(&["analyze", overflow.to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&breach.stderr);
    ensure(code(&breach) == 3, || format!("invariant breach exit {}", code(&breach)))?;
    ensure(stderr.contains(" vs "), || format!("breach message lacks both values: {stderr}"))?;

    let mut budget_args = vec!["apd", "--trials", "1000"];
    budget_args.extend(std::iter::repeat(["--p", "1"]).take(25).flatten());
    let budget = run(&budget_args);
    ensure(code(&budget) == 4, || format!("budget exit {}", code(&budget)))?;

    Ok("csv at 12 significant digits, json round trip, exits 0/2/3/4".into())
}

fn main() {
    // `cargo test -- --list` and friends: nothing to enumerate.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [(&str, fn() -> Check); 9] = [
        ("oracle equivalence (eq9 = eq8 = snr, eq4 = eq2)", criterion_1),
        ("Friis/product totals equal without internal noise", criterion_2),
        ("REF2 fixture", criterion_3),
        ("REFINT fixture", criterion_4),
        ("dominance and monotonicity", criterion_5),
        ("second-stage input noise regression", criterion_6),
        ("APD analytics and cascade correspondence", criterion_7),
        ("APD Monte Carlo moments and determinism", criterion_8),
        ("CLI contract", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS  {}. {name}: {detail}", i + 1),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL  {}. {name}: {why}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("FAIL  {}. {name}: panicked", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
