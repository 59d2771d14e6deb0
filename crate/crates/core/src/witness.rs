//! Non-measurable Hankel operators from oscillating profiles.
//!
//! Pipeline: `h₀ → h = h₀(log(1 + log(1+t))) → g = h + (ψ̃/ψ̃') h' → ḡ(n)`
//! (unit-interval means) `→ c_n = (|ḡ(n) + C| ψ̃'(n))^{1/p} → Σ 2^{-n/p} c_n z^{2^n}`.
//! The Cesàro ratio `R(t) = Σ_{k≤t} c_k^p / ψ̃(t)` tracks `h(t) + C`, so it
//! inherits the oscillation of `h₀`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lorentz::PsiFunction;
use crate::numerics::{gauss_legendre, CompensatedSum};
use crate::symbols::{lacunary, FourierSymbol};

/// Largest number of lacunary terms handed to [`witness_symbol`].
pub const MAX_SYMBOL_TERMS: usize = 13;
/// Largest `t` accepted by [`oscillation_report`].
pub const MAX_T: f64 = 1e8;
/// Residual bound for the final decade.
pub const RESIDUAL_TOL: f64 = 0.05;
/// Gauss-Legendre nodes per unit interval in [`g_bar`].
pub const G_BAR_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum H0Family {
    Sin,
    Cos,
    Const,
}

/// Bounded profile `h₀`: `a·sin(u+φ) + offset`, `a·cos(u+φ) + offset`, or the
/// constant `a + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct H0Spec {
    pub family: H0Family,
    pub amplitude: f64,
    pub phase: f64,
    pub offset: f64,
}

impl H0Spec {
    pub fn new(family: H0Family, amplitude: f64, phase: f64, offset: f64) -> Result<Self> {
        if ![amplitude, phase, offset].iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("h0 parameters must be finite"));
        }
        Ok(Self { family, amplitude, phase, offset })
    }

    pub fn sin() -> Self {
        Self { family: H0Family::Sin, amplitude: 1.0, phase: 0.0, offset: 0.0 }
    }

    pub fn cos() -> Self {
        Self { family: H0Family::Cos, amplitude: 1.0, phase: 0.0, offset: 0.0 }
    }

    pub fn constant(c: f64) -> Self {
        Self { family: H0Family::Const, amplitude: c, phase: 0.0, offset: 0.0 }
    }

    pub fn value(&self, u: f64) -> f64 {
        let a = self.amplitude;
        match self.family {
            H0Family::Sin => a * (u + self.phase).sin() + self.offset,
            H0Family::Cos => a * (u + self.phase).cos() + self.offset,
            H0Family::Const => a + self.offset,
        }
    }

    pub fn derivative(&self, u: f64) -> f64 {
        let a = self.amplitude;
        match self.family {
            H0Family::Sin => a * (u + self.phase).cos(),
            H0Family::Cos => -a * (u + self.phase).sin(),
            H0Family::Const => 0.0,
        }
    }

    pub fn second_derivative(&self, u: f64) -> f64 {
        match self.family {
            H0Family::Const => 0.0,
            _ => -(self.value(u) - self.offset),
        }
    }

    pub fn liminf(&self) -> f64 {
        match self.family {
            H0Family::Const => self.amplitude + self.offset,
            _ => self.offset - self.amplitude.abs(),
        }
    }

    pub fn limsup(&self) -> f64 {
        match self.family {
            H0Family::Const => self.amplitude + self.offset,
            _ => self.offset + self.amplitude.abs(),
        }
    }

    /// `limsup h₀ - liminf h₀`.
    pub fn gap(&self) -> f64 {
        self.limsup() - self.liminf()
    }

    /// Bound on `‖h₀'‖_∞` (also on `‖h₀''‖_∞`).
    pub fn derivative_bound(&self) -> f64 {
        match self.family {
            H0Family::Const => 0.0,
            _ => self.amplitude.abs(),
        }
    }
}

fn inner(t: f64) -> f64 {
    t.ln_1p().ln_1p()
}

/// `h(t) = h₀(log(1 + log(1+t)))`.
pub fn h_of_t(h0: &H0Spec, t: f64) -> f64 {
    h0.value(inner(t))
}

/// `h'(t) = h₀'(log(1 + log(1+t))) / ((1 + log(1+t))(1+t))`.
pub fn h_prime(h0: &H0Spec, t: f64) -> f64 {
    h0.derivative(inner(t)) / ((1.0 + t.ln_1p()) * (1.0 + t))
}

fn check_psi(psi: &PsiFunction) -> Result<()> {
    if psi.k_psi()? == 0.0 {
        return Err(Error::invalid(format!(
            "ψ = {psi} has k_ψ = 0 (A_ψ(e) = 1); the witness construction needs A_ψ(e) ≠ 1"
        )));
    }
    Ok(())
}

fn g_unchecked(psi: &PsiFunction, h0: &H0Spec, t: f64) -> f64 {
    h_of_t(h0, t) + psi.tilde_ratio(t) * h_prime(h0, t)
}

/// `g(t) = h(t) + ψ̃(t) h'(t) / ψ̃'(t)`, the solution of
/// `h(t) = (1/ψ̃(t)) ∫_0^t g ψ̃'`.
pub fn g_of_t(psi: &PsiFunction, h0: &H0Spec, t: f64) -> Result<f64> {
    check_psi(psi)?;
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("t must be >= 0, got {t}")));
    }
    Ok(g_unchecked(psi, h0, t))
}

/// Upper bound `‖h₀'‖_∞ / (β (1 + log(1+t)))` on `|g(t) - h(t)|` for `ψ_β`.
pub fn g_minus_h_bound(psi: &PsiFunction, h0: &H0Spec, t: f64) -> Option<f64> {
    psi.beta().map(|beta| h0.derivative_bound() / (beta * (1.0 + t.ln_1p())))
}

struct UnitRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl UnitRule {
    fn new() -> Self {
        let (x, w) = gauss_legendre(G_BAR_NODES);
        Self {
            nodes: x.iter().map(|x| 0.5 * (x + 1.0)).collect(),
            weights: w.iter().map(|w| 0.5 * w).collect(),
        }
    }

    fn mean(&self, n: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(n + x)).sum()
    }
}

/// `ḡ(n) = ∫_n^{n+1} g`.
pub fn g_bar(psi: &PsiFunction, h0: &H0Spec, n: u64) -> Result<f64> {
    check_psi(psi)?;
    Ok(UnitRule::new().mean(n as f64, |t| g_unchecked(psi, h0, t)))
}

/// `C = -liminf g = -liminf h₀`.
pub fn witness_constant(h0: &H0Spec) -> f64 {
    -h0.liminf()
}

/// `∫_n^{n+1} ψ̃'`-type weight: `ψ̃'(n)` for `n ≥ 1`, `ψ̃(1)` for `n = 0`
/// (where `ψ̃'` is singular when `β < 1`).
fn weight(psi: &PsiFunction, n: usize) -> f64 {
    if n == 0 {
        psi.tilde(1.0)
    } else {
        psi.tilde_derivative(n as f64)
    }
}

/// `c_n = (|ḡ(n) + C| · ψ̃'(n))^{1/p}` for `n < count`.
pub fn witness_coefficients(psi: &PsiFunction, h0: &H0Spec, p: f64, count: usize) -> Result<Vec<f64>> {
    check_psi(psi)?;
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::invalid(format!("p must be >= 1, got {p}")));
    }
    if count == 0 {
        return Err(Error::invalid("coefficient count must be at least 1"));
    }
    if count as f64 > MAX_T + 1.0 {
        return Err(Error::resource(format!("{count} coefficients exceed the cap {}", MAX_T + 1.0)));
    }
    let c = witness_constant(h0);
    if h0.family == H0Family::Const {
        return Ok(vec![0.0; count]);
    }
    let rule = UnitRule::new();
    Ok((0..count)
        .into_par_iter()
        .map(|n| {
            let gb = rule.mean(n as f64, |t| g_unchecked(psi, h0, t));
            ((gb + c).abs() * weight(psi, n)).powf(1.0 / p)
        })
        .collect())
}

/// `Σ_{k ≤ ⌊t⌋} c_k^p / ψ̃(t)`.
pub fn cesaro_ratio(c: &[f64], psi: &PsiFunction, p: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("t must be positive, got {t}")));
    }
    let n = t.floor() as usize;
    if n >= c.len() {
        return Err(Error::invalid(format!("t = {t} exceeds the {} available coefficients", c.len())));
    }
    let mut acc = CompensatedSum::new();
    for v in &c[..=n] {
        acc.add(v.powf(p));
    }
    Ok(acc.value() / psi.tilde(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessSample {
    pub t: f64,
    pub r: f64,
    pub h_plus_c: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessVerdict {
    NonMeasurable,
    NoWitness,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub p: f64,
    pub psi: String,
    pub h0: H0Spec,
    /// `C = -liminf g`.
    pub c: f64,
    pub samples: Vec<WitnessSample>,
    /// `(d, max |residual|)` over `t ∈ [10^d, 10^{d+1}]`.
    pub decade_max: Vec<(i32, f64)>,
    pub residual_tol: f64,
    pub residuals_pass: bool,
    /// `limsup h₀ - liminf h₀`.
    pub gap: f64,
    pub verdict: WitnessVerdict,
}

/// `K` logarithmically spaced points per decade on `[10^lo, 10^hi]`.
pub fn log_grid(lo: i32, hi: i32, per_decade: usize) -> Vec<f64> {
    let k = per_decade.max(1) as i32;
    (lo * k..=hi * k).map(|i| 10f64.powf(i as f64 / k as f64)).collect()
}

/// Default evaluation grid: 20 points per decade on `[10^2, 10^6]`.
pub fn default_t_grid() -> Vec<f64> {
    log_grid(2, 6, 20)
}

fn decade_of(t: f64, top: f64) -> i32 {
    let d = t.log10().floor() as i32;
    let exact_power = 10f64.powi(d) == t;
    // the right endpoint of the last decade belongs to that decade
    if exact_power && t == top && d > 0 {
        d - 1
    } else {
        d
    }
}

fn decade_maxima(samples: &[WitnessSample]) -> Vec<(i32, f64)> {
    let top = samples.iter().map(|s| s.t).fold(0.0, f64::max);
    let mut out: Vec<(i32, f64)> = Vec::new();
    for s in samples {
        let d = decade_of(s.t, top);
        let r = s.residual.abs();
        match out.iter_mut().find(|(e, _)| *e == d) {
            Some(entry) => entry.1 = entry.1.max(r),
            None => out.push((d, r)),
        }
    }
    out.sort_by_key(|&(d, _)| d);
    out
}

/// Samples `R(t)` against `h(t) + C` and issues a verdict: non-measurable when
/// the final decade's residual is within [`RESIDUAL_TOL`], the decade maxima
/// do not increase, and `h₀` has a positive oscillation gap.
pub fn oscillation_report(
    psi: &PsiFunction,
    h0: &H0Spec,
    p: f64,
    t_grid: &[f64],
) -> Result<WitnessReport> {
    check_psi(psi)?;
    if t_grid.is_empty() {
        return Err(Error::invalid("t grid is empty"));
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t >= 1.0) || !t.is_finite()) {
        return Err(Error::invalid(format!("grid t must be finite and >= 1, got {t}")));
    }
    let t_max = t_grid.iter().copied().fold(0.0, f64::max);
    if t_max > MAX_T {
        return Err(Error::resource(format!("t = {t_max} exceeds the cap {MAX_T}")));
    }
    let c_const = witness_constant(h0);
    let gap = h0.gap();
    let mut report = WitnessReport {
        p,
        psi: psi.label(),
        h0: *h0,
        c: c_const,
        samples: Vec::new(),
        decade_max: Vec::new(),
        residual_tol: RESIDUAL_TOL,
        residuals_pass: false,
        gap,
        verdict: WitnessVerdict::NoWitness,
    };
    if !(gap > 0.0) {
        // convergent h0: every coefficient vanishes
        witness_coefficients(psi, h0, p, 1)?;
        return Ok(report);
    }
    let c = witness_coefficients(psi, h0, p, t_max.floor() as usize + 1)?;
    let mut prefix = Vec::with_capacity(c.len());
    let mut acc = CompensatedSum::new();
    for v in &c {
        acc.add(v.powf(p));
        prefix.push(acc.value());
    }
    let mut grid = t_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    report.samples = grid
        .iter()
        .map(|&t| {
            let r = prefix[t.floor() as usize] / psi.tilde(t);
            let target = h_of_t(h0, t) + c_const;
            WitnessSample { t, r, h_plus_c: target, residual: r - target }
        })
        .collect();
    report.decade_max = decade_maxima(&report.samples);
    let maxima: Vec<f64> = report.decade_max.iter().map(|&(_, m)| m).collect();
    let monotone = maxima.windows(2).all(|w| w[1] <= w[0]);
    let final_ok = maxima.last().is_some_and(|&m| m <= RESIDUAL_TOL);
    report.residuals_pass = monotone && final_ok;
    report.verdict = if report.residuals_pass {
        WitnessVerdict::NonMeasurable
    } else {
        WitnessVerdict::Inconclusive
    };
    Ok(report)
}

/// `Σ_{n<J} 2^{-n/p} c_n z^{2^n}` with the witness coefficients.
pub fn witness_symbol(psi: &PsiFunction, h0: &H0Spec, p: f64, terms: usize) -> Result<FourierSymbol> {
    if terms > MAX_SYMBOL_TERMS {
        return Err(Error::invalid(format!(
            "at most {MAX_SYMBOL_TERMS} lacunary terms are supported, got {terms}"
        )));
    }
    let c = witness_coefficients(psi, h0, p, terms)?;
    lacunary(p, &c, terms)
}

/// Inner variable `u` at which `h(t) = h₀(u)`, inverted: `t = e^{e^u - 1} - 1`.
pub fn t_for_inner(u: f64) -> f64 {
    (u.exp_m1()).exp_m1()
}

/// First `t ≥ 0` at which `h` reaches `limsup h₀` (sin and cos families).
pub fn first_peak(h0: &H0Spec) -> Option<f64> {
    let u = match h0.family {
        H0Family::Sin => PI / 2.0 - h0.phase,
        H0Family::Cos => -h0.phase,
        H0Family::Const => return None,
    };
    let u = if h0.amplitude >= 0.0 { u } else { u + PI };
    Some(t_for_inner(u.rem_euclid(2.0 * PI)))
}
