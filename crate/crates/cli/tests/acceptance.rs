//! Acceptance criteria 1-9. Each test prints one PASS/FAIL line.

use std::f64::consts::E;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use htl_cli::sources::{random_symbol, seeded_rng};
use htl_cli::{run, ExperimentConfig, Kind};
use htl_core::besov::{
    besov_disc_norm_default, besov_lp_norm, besov_lp_norm_pow, besov_si_norm, default_grid,
    GeometricTail, StepFunction,
};
use htl_core::dixmier::{
    extrapolated_trace_bracket, hankel_trace_pow, juw_check, trace_bracket, trace_to_si_ratio,
    TraceGrid,
};
use htl_core::hankel::{hankel_spectrum, schatten_norm};
use htl_core::lorentz::{default_h_grid, sandwich_check, PowerSpectrum, ProfileCurve, PsiFunction, SandwichGrid};
use htl_core::symbols::{lacunary, monomial, FourierSymbol};
use htl_core::witness::{oscillation_report, default_t_grid, witness_symbol, H0Spec, WitnessVerdict};
use rand::Rng;
use serde_json::json;

const TRACE_IDENTITY_TOL: f64 = 1e-5;
const TRACE_IDENTITY_GRID: usize = 2048;
const TRACE_IDENTITY_SEED: u64 = 20_240_601;
const P3_MIN_SPREAD: f64 = 0.05;
const MONOMIAL_TOL: f64 = 1e-10;
const CALIBRATION_WINDOW: (f64, f64) = (0.95, 1.05);
const CALIBRATION_TOL: f64 = 0.05;
const SANDWICH_WINDOW: (f64, f64) = (0.95, E + 0.05);
/// Besov equivalence constants, frozen on the first run.
const C_DISC: f64 = 4.5;
const C_SI: f64 = 2.0;
const C_SCHATTEN: f64 = 1.0 + 1e-9;
const LACUNARY_TOL: f64 = 1e-10;
const WITNESS_TOL: f64 = 0.05;
const A_PSI_TOL: f64 = 1e-6;
/// Constants in `‖ψ'‖_p ≤ C ψ(e^{1/(p-1)})`, frozen on the first run.
const C_PSI_PRIME_LOG: f64 = 1.0;
const C_PSI_PRIME_SQRT_LOG: f64 = 2.5;

fn verdict(n: u32, name: &str, pass: bool, detail: String, elapsed: Duration, limit_s: f64) {
    let in_time = elapsed.as_secs_f64() <= limit_s;
    let ok = pass && in_time;
    println!(
        "criterion {n} ({name}): {}  {detail}; {:.2} s of {limit_s} s",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(pass, "criterion {n} failed: {detail}");
    assert!(in_time, "criterion {n} exceeded {limit_s} s");
}

#[test]
fn criterion_1_exact_trace_identity() {
    let start = Instant::now();
    let mut rng = seeded_rng(TRACE_IDENTITY_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let degree = rng.random_range(1..=16);
        let f = random_symbol(&mut rng, degree).unwrap();
        for p in [2.0, 4.0, 6.0] {
            let c = juw_check(&f, p, TRACE_IDENTITY_GRID).unwrap();
            worst = worst.max(c.relerr);
        }
    }
    verdict(1, "exact trace identity", worst <= TRACE_IDENTITY_TOL, format!("max relerr {worst:.3e} <= {TRACE_IDENTITY_TOL:e}"), start.elapsed(), 60.0);
}

#[test]
fn criterion_2_no_constant_at_p3() {
    let start = Instant::now();
    let a = trace_to_si_ratio(&monomial(1).unwrap(), 3.0, TRACE_IDENTITY_GRID).unwrap();
    let zz = FourierSymbol::from_real([(1, 1.0), (2, 1.0)]).unwrap();
    let b = trace_to_si_ratio(&zz, 3.0, TRACE_IDENTITY_GRID).unwrap();
    let spread = (a - b).abs() / a.max(b);
    verdict(
        2,
        "p = 3 admits no constant",
        spread > P3_MIN_SPREAD,
        format!("ratios {a:.6} (z) vs {b:.6} (z+z²), relative difference {spread:.4} > {P3_MIN_SPREAD}"),
        start.elapsed(),
        5.0,
    );
}

#[test]
fn criterion_3_monomial_spectra() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut counts_ok = true;
    for n in 1..=64usize {
        let s = hankel_spectrum(&monomial(n).unwrap(), n + 8).unwrap();
        for k in 0..n + 8 {
            let target = if k < n { 1.0 } else { 0.0 };
            worst = worst.max((s.get(k) - target).abs());
        }
        counts_ok &= s.values().iter().filter(|v| (**v - 1.0).abs() <= MONOMIAL_TOL).count() == n;
    }
    verdict(
        3,
        "monomial spectra",
        counts_ok && worst <= MONOMIAL_TOL,
        format!("n = 1..64, max |μ_k - target| {worst:.3e}"),
        start.elapsed(),
        5.0,
    );
}

#[test]
fn criterion_4_extrapolation_calibration() {
    let start = Instant::now();
    let psi = PsiFunction::log();
    let (lo, hi) = CALIBRATION_WINDOW;
    let truncated = PowerSpectrum::harmonic().truncate(1_000_000);
    let grid = TraceGrid { decades: 6, tol: CALIBRATION_TOL };
    let t = trace_bracket(&truncated, &psi, 1.0, &grid).unwrap();
    let x = extrapolated_trace_bracket(
        &ProfileCurve(&PowerSpectrum::harmonic()),
        &psi,
        1.0,
        &default_h_grid(),
        CALIBRATION_TOL,
    )
    .unwrap();
    let inside = |b: &htl_core::dixmier::TraceBracket| b.lo >= lo && b.hi <= hi && b.collapsed;
    verdict(
        4,
        "extrapolation calibration",
        inside(&t) && inside(&x),
        format!(
            "trace bracket [{:.5}, {:.5}] collapsed={}, extrapolated [{:.5}, {:.5}] collapsed={}, window [{lo}, {hi}]",
            t.lo, t.hi, t.collapsed, x.lo, x.hi, x.collapsed
        ),
        start.elapsed(),
        10.0,
    );
}

fn tail(first_value: f64, first_length: f64, value_ratio: f64, length_ratio: f64) -> GeometricTail {
    GeometricTail { first_value, first_length, value_ratio, length_ratio }
}

/// Nonincreasing step functions whose `p`-th powers carry equal mass per step.
fn sandwich_fixtures() -> Vec<(f64, StepFunction)> {
    let step = |head: &[(f64, f64)], t: GeometricTail| StepFunction::from_steps(head).unwrap().with_tail(t).unwrap();
    vec![
        (1.0, step(&[], tail(1.0, 1.0, 0.5, 2.0))),
        (1.0, step(&[], tail(1.0, 1.0, 1.0 / 3.0, 3.0))),
        (1.0, step(&[], tail(2.0, 0.5, 0.25, 4.0))),
        (1.0, step(&[(2.0, 1.0)], tail(1.0, 1.0, 0.5, 2.0))),
        (1.0, step(&[], tail(1.0, 3.0, 2.0 / 3.0, 1.5))),
        (1.0, step(&[(10.0, 0.1), (4.0, 1.0)], tail(0.5, 2.0, 0.8, 1.25))),
        (2.0, step(&[], tail(1.0, 1.0, 0.5, 4.0))),
        (2.0, step(&[], tail(1.0, 1.0, 0.5f64.sqrt(), 2.0))),
        (2.0, step(&[(5.0, 1.0)], tail(1.0, 2.0, 1.0 / 3.0, 9.0))),
        (1.5, step(&[], tail(1.0, 1.0, 0.25, 8.0))),
    ]
}

#[test]
fn criterion_5_sandwich() {
    let start = Instant::now();
    let psi = PsiFunction::log();
    let (lo, hi) = SANDWICH_WINDOW;
    let mut ratios = Vec::new();
    for (p, h) in sandwich_fixtures() {
        let r = sandwich_check(&h, &psi, p, &SandwichGrid::default()).unwrap();
        ratios.push(r.ratio.expect("fixtures are not p-integrable"));
    }
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(0.0, f64::max);
    verdict(
        5,
        "limsup sandwich",
        ratios.len() == 10 && min >= lo && max <= hi,
        format!("10 fixtures, ratios in [{min:.4}, {max:.4}] within [{lo}, {hi:.4}]"),
        start.elapsed(),
        5.0,
    );
}

#[test]
fn criterion_6_besov_equivalence() {
    let start = Instant::now();
    let mut disc = (f64::INFINITY, 0.0f64);
    let mut si = (f64::INFINITY, 0.0f64);
    let mut sch = (f64::INFINITY, 0.0f64);
    for j in 0..=8 {
        let f = monomial(1 << j).unwrap();
        let s = hankel_spectrum(&f, f.degree()).unwrap();
        for q in [1.25, 1.5, 2.0, 2.5, 3.0] {
            let lp = besov_lp_norm(&f, q).unwrap();
            let r = schatten_norm(&s, q).unwrap() / lp;
            sch = (sch.0.min(r), sch.1.max(r));
            let r = besov_si_norm(&f, q, default_grid(&f)).unwrap() / lp;
            si = (si.0.min(r), si.1.max(r));
            // z has f'' = 0: its disc norm vanishes
            if j >= 1 {
                let r = besov_disc_norm_default(&f, q).unwrap() / lp;
                disc = (disc.0.min(r), disc.1.max(r));
            }
        }
    }
    let within = |(lo, hi): (f64, f64), c: f64| lo >= 1.0 / c && hi <= c;
    let mut lacunary_err: f64 = 0.0;
    for (p, c) in [
        (1.0, vec![1.0, 0.5, 2.0, 0.0, 1.5, 0.25, 3.0, 1.0]),
        (2.0, vec![0.3, 1.0, 0.0, 0.7, 2.0, 1.0, 0.1, 0.9, 1.1, 0.4]),
        (1.5, vec![2.0; 12]),
        (3.0, vec![1.0, 0.0, 0.0, 5.0, 0.2]),
    ] {
        let f = lacunary(p, &c, c.len()).unwrap();
        let expected: f64 = c.iter().map(|v| v.powf(p)).sum();
        lacunary_err = lacunary_err.max((besov_lp_norm_pow(&f, p).unwrap() - expected).abs() / expected.max(1.0));
    }
    verdict(
        6,
        "Besov equivalence",
        within(disc, C_DISC) && within(si, C_SI) && within(sch, C_SCHATTEN) && lacunary_err <= LACUNARY_TOL,
        format!(
            "disc/LP [{:.4}, {:.4}] C={C_DISC}, SI/LP [{:.4}, {:.4}] C={C_SI}, Schatten/LP [{:.12}, {:.12}], lacunary identity err {lacunary_err:.2e}",
            disc.0, disc.1, si.0, si.1, sch.0, sch.1
        ),
        start.elapsed(),
        30.0,
    );
}

#[test]
fn criterion_7_witness_certificate() {
    let start = Instant::now();
    let psi = PsiFunction::log();
    let mut pass = true;
    let mut parts = Vec::new();
    for p in [1.0, 2.0] {
        let r = oscillation_report(&psi, &H0Spec::sin(), p, &default_t_grid()).unwrap();
        let last = r.decade_max.last().copied().unwrap();
        let monotone = r.decade_max.windows(2).all(|w| w[1].1 <= w[0].1);
        let first = r.decade_max.first().unwrap().0;
        pass &= last.0 == 5
            && first == 2
            && last.1 <= WITNESS_TOL
            && monotone
            && (r.gap - 2.0).abs() < 1e-15
            && r.verdict == WitnessVerdict::NonMeasurable;
        parts.push(format!("p={p}: final decade max {:.2e}, gap {}, {:?}", last.1, r.gap, r.verdict));
    }
    let h0 = H0Spec::constant(1.0);
    let r = oscillation_report(&psi, &h0, 1.0, &default_t_grid()).unwrap();
    let zero = witness_symbol(&psi, &h0, 1.0, 12).unwrap().is_zero();
    pass &= r.verdict == WitnessVerdict::NoWitness && zero;
    parts.push(format!("const: {:?}, zero symbol {zero}", r.verdict));
    verdict(7, "witness certificate", pass, parts.join("; "), start.elapsed(), 120.0);
}

#[test]
fn criterion_8_psi_family() {
    let start = Instant::now();
    let mut a_err: f64 = 0.0;
    for beta in [0.5, 1.0] {
        let psi = PsiFunction::log_power(beta).unwrap();
        for alpha in [1.25, 2.0, E] {
            a_err = a_err.max((psi.a_psi_numeric(alpha).unwrap() - alpha.powf(beta)).abs());
            a_err = a_err.max((psi.a_psi(alpha).unwrap() - alpha.powf(beta)).abs());
        }
    }
    let mut monotone = true;
    for beta in [0.5, 1.0] {
        let psi = PsiFunction::log_power(beta).unwrap();
        let v: Vec<f64> = [1.5, 1.25, 1.125, 1.0625].iter().map(|&a| psi.a_psi(a).unwrap()).collect();
        monotone &= v.windows(2).all(|w| w[1] < w[0]) && v.iter().all(|&x| x > 1.0);
    }
    // ψ_1 on [1.01, 3]; for ψ_{1/2} the norm is finite only for p < 2
    let mut c_max = [0.0f64; 2];
    for (slot, (beta, hi)) in [(1.0, 3.0), (0.5, 1.9)].into_iter().enumerate() {
        let psi = PsiFunction::log_power(beta).unwrap();
        for i in 0..=400 {
            let p = 1.01 + (hi - 1.01) * i as f64 / 400.0;
            c_max[slot] = c_max[slot].max(psi.derivative_condition_constant(p).unwrap());
        }
    }
    verdict(
        8,
        "ψ family",
        a_err <= A_PSI_TOL && monotone && c_max[0] <= C_PSI_PRIME_LOG && c_max[1] <= C_PSI_PRIME_SQRT_LOG,
        format!(
            "max |A_ψ(α) - α^β| {a_err:.2e}, decreasing to 1: {monotone}, observed C = {:.6} for ψ_1 on [1.01, 3] (frozen {C_PSI_PRIME_LOG}), {:.6} for ψ_1/2 on [1.01, 1.9] (frozen {C_PSI_PRIME_SQRT_LOG})",
            c_max[0], c_max[1]
        ),
        start.elapsed(),
        5.0,
    );
}

fn run_binary(args: &[&str], out: &Path) -> (Vec<u8>, Option<Vec<u8>>, String) {
    let status = Command::new(env!("CARGO_BIN_EXE_htl"))
        .args(args)
        .arg("--out")
        .arg(out)
        .status()
        .unwrap();
    assert!(status.success(), "htl {args:?} failed");
    let name = std::fs::read_dir(out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|x| x == "json"))
        .unwrap();
    let json = std::fs::read(&name).unwrap();
    let csv = std::fs::read(name.with_extension("csv")).ok();
    (json, csv, name.file_name().unwrap().to_string_lossy().into_owned())
}

#[test]
fn criterion_9_determinism() {
    let start = Instant::now();
    let runs: [&[&str]; 4] = [
        &["juw-check", "--random", "12", "--p", "4", "--seed", "7"],
        &["witness", "--h0", "sin", "--p", "2", "--tmax", "1e5"],
        &["dixmier", "--power", "1", "--terms", "100000", "--decades", "5"],
        &["besov", "--random", "9", "--seed", "3", "--norm", "si", "--q", "1.5"],
    ];
    let mut identical = true;
    let mut names = Vec::new();
    for args in runs {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let ra = run_binary(args, a.path());
        let rb = run_binary(args, b.path());
        identical &= ra == rb;
        names.push(ra.2);
    }
    let config = ExperimentConfig {
        kind: Kind::Hankel,
        params: json!({"symbol": {"random": {"degree": 16}}, "q": [1.0, 2.0, 3.0]}),
        out: None,
        seed: 11,
    };
    let first = run(&config).unwrap();
    let second = run(&config).unwrap();
    identical &= first.json_text() == second.json_text() && first.csv == second.csv;
    verdict(
        9,
        "determinism",
        identical,
        format!("byte-identical reports for {} and a library run", names.join(", ")),
        start.elapsed(),
        60.0,
    );
}

#[test]
fn trace_identity_side_is_the_hankel_trace() {
    let f = FourierSymbol::from_real([(1, 0.5), (3, -0.25)]).unwrap();
    let c = juw_check(&f, 2.0, TRACE_IDENTITY_GRID).unwrap();
    assert_eq!(c.rhs, hankel_trace_pow(&f, 2.0).unwrap());
}
