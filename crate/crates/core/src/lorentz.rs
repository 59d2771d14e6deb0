//! Gauge functions `ψ`, Lorentz quasi-norms, partial-sum ratios and the
//! `L^{p+h}` extrapolation functional.

use std::f64::consts::{E, LN_2};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::besov::StepFunction;
use crate::error::{Error, Result};
use crate::hankel::SingularSpectrum;
use crate::numerics::CompensatedSum;
use crate::special::{power_sum, zeta};

/// Sample points used by [`PsiFunction::a_psi_numeric`].
pub const A_PSI_SAMPLES: [f64; 3] = [1e4, 1e6, 1e8];
/// Largest spread of the sampled ratios accepted as convergence.
pub const A_PSI_SPREAD_TOL: f64 = 1e-6;
/// Number of smallest grid `h` entering the limsup surrogate.
pub const TAIL_POINTS: usize = 4;
/// Horizon of the quasi-norm supremum for profiles with unbounded support.
pub const DEFAULT_SUP_HORIZON: f64 = 1e6;

/// Closed-form gauge families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PsiFamily {
    /// `(log(1+t))^β`, `0 < β ≤ 1`.
    LogPower { beta: f64 },
    /// `log(1 + log(1+t))`; slowly varying with `A_ψ ≡ 1`, so `k_ψ = 0`.
    IteratedLog,
}

/// Concave increasing gauge with `ψ(0) = 0` and `ψ(∞) = ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiFunction {
    family: PsiFamily,
}

impl PsiFunction {
    /// `ψ(t) = (log(1+t))^β`.
    pub fn log_power(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::invalid(format!("β must lie in (0, 1], got {beta}")));
        }
        Ok(Self { family: PsiFamily::LogPower { beta } })
    }

    /// `ψ(t) = log(1+t)`.
    pub fn log() -> Self {
        Self { family: PsiFamily::LogPower { beta: 1.0 } }
    }

    pub fn iterated_log() -> Self {
        Self { family: PsiFamily::IteratedLog }
    }

    pub fn family(&self) -> PsiFamily {
        self.family
    }

    /// `β` for the log-power family.
    pub fn beta(&self) -> Option<f64> {
        match self.family {
            PsiFamily::LogPower { beta } => Some(beta),
            PsiFamily::IteratedLog => None,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self.family {
            PsiFamily::LogPower { beta } => t.ln_1p().powf(beta),
            PsiFamily::IteratedLog => t.ln_1p().ln_1p(),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let l = t.max(0.0).ln_1p();
        match self.family {
            PsiFamily::LogPower { beta } => beta * l.powf(beta - 1.0) / (1.0 + t),
            PsiFamily::IteratedLog => 1.0 / ((1.0 + l) * (1.0 + t)),
        }
    }

    /// `ψ(e^s)` without forming `e^s`.
    pub fn psi_of_exp(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return self.eval(s.exp());
        }
        // log(1 + e^s) = s + log1p(e^{-s})
        let l = s + (-s).exp().ln_1p();
        match self.family {
            PsiFamily::LogPower { beta } => l.powf(beta),
            PsiFamily::IteratedLog => l.ln_1p(),
        }
    }

    /// `ψ̃(t) = ψ(2^t - 1)`.
    pub fn tilde(&self, t: f64) -> f64 {
        let l = t.max(0.0) * LN_2;
        match self.family {
            PsiFamily::LogPower { beta } => l.powf(beta),
            PsiFamily::IteratedLog => l.ln_1p(),
        }
    }

    /// `ψ̃'(t)`; infinite at `t = 0` when `β < 1`.
    pub fn tilde_derivative(&self, t: f64) -> f64 {
        let l = t.max(0.0) * LN_2;
        match self.family {
            PsiFamily::LogPower { beta } => beta * LN_2 * l.powf(beta - 1.0),
            PsiFamily::IteratedLog => LN_2 / (1.0 + l),
        }
    }

    /// `ψ̃(t) / ψ̃'(t)`.
    pub fn tilde_ratio(&self, t: f64) -> f64 {
        match self.family {
            PsiFamily::LogPower { beta } => t / beta,
            PsiFamily::IteratedLog => {
                let l = t * LN_2;
                l.ln_1p() * (1.0 + l) / LN_2
            }
        }
    }

    /// Closed form of `A_ψ(α) = lim ψ(t^α)/ψ(t)`.
    pub fn a_psi(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(match self.family {
            PsiFamily::LogPower { beta } => alpha.powf(beta),
            PsiFamily::IteratedLog => 1.0,
        })
    }

    /// Estimate of `A_ψ(α)` from `ψ(e^{αs})/ψ(e^s)` at the sample points
    /// [`A_PSI_SAMPLES`]; fails when the samples spread by more than
    /// [`A_PSI_SPREAD_TOL`].
    pub fn a_psi_numeric(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        let ratios: Vec<f64> =
            A_PSI_SAMPLES.iter().map(|&s| self.psi_of_exp(alpha * s) / self.psi_of_exp(s)).collect();
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > A_PSI_SPREAD_TOL {
            return Err(Error::numerical(format!(
                "A_psi({alpha}) estimate did not converge: samples {ratios:?}"
            )));
        }
        Ok(ratios[ratios.len() - 1])
    }

    /// `k_ψ = log A_ψ(e)`.
    pub fn k_psi(&self) -> Result<f64> {
        Ok(self.a_psi(E)?.ln())
    }

    /// `‖ψ'‖_{L^p(0,∞)}` in closed form, `p > 1`.
    pub fn derivative_norm(&self, p: f64) -> Result<f64> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::invalid(format!("derivative norm needs p > 1, got {p}")));
        }
        match self.family {
            PsiFamily::LogPower { beta } => {
                // substitute u = log(1+t): β^p ∫ u^{p(β-1)} e^{-(p-1)u} du
                let a = p * (beta - 1.0) + 1.0;
                if a <= 0.0 {
                    return Err(Error::numerical(format!(
                        "‖ψ'‖_p diverges for β = {beta}, p = {p}"
                    )));
                }
                let log_int = ln_gamma(a) - a * (p - 1.0).ln();
                Ok(beta * (log_int / p).exp())
            }
            PsiFamily::IteratedLog => Err(Error::invalid(
                "derivative norm is only available for the log-power family",
            )),
        }
    }

    /// `‖ψ'‖_p / ψ(e^{1/(p-1)})`, the smallest admissible constant in the
    /// derivative-norm condition at exponent `p`.
    pub fn derivative_condition_constant(&self, p: f64) -> Result<f64> {
        Ok(self.derivative_norm(p)? / self.psi_of_exp(1.0 / (p - 1.0)))
    }

    /// Short label: `log`, `logpow:β` or `iterlog`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

fn ln_gamma(x: f64) -> f64 {
    // x can be tiny when β(p) approaches the divergence threshold
    if x < 0.5 {
        crate::special::gamma(x + 1.0).ln() - x.ln()
    } else {
        crate::special::gamma(x).ln()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("α must be >= 1, got {alpha}")))
    }
}

impl fmt::Display for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            PsiFamily::LogPower { beta: 1.0 } => write!(f, "log"),
            PsiFamily::LogPower { beta } => write!(f, "logpow:{beta}"),
            PsiFamily::IteratedLog => write!(f, "iterlog"),
        }
    }
}

impl FromStr for PsiFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" => Ok(Self::log()),
            "iterlog" => Ok(Self::iterated_log()),
            _ => {
                let beta = s
                    .strip_prefix("logpow:")
                    .and_then(|b| b.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::invalid(format!("unknown ψ `{s}` (expected log, logpow:β or iterlog)"))
                    })?;
                Self::log_power(beta)
            }
        }
    }
}

/// A nonincreasing profile `μ` on `(0, ∞)`: a singular value function or a
/// decreasing rearrangement.
pub trait Rearrangement: Sync {
    /// `∫_0^t μ(s)^p ds`.
    fn integral_pow(&self, p: f64, t: f64) -> f64;

    /// `‖μ‖_{L^q}^q`, possibly infinite.
    fn norm_pow(&self, q: f64) -> f64;

    /// Length past which `μ` is unknown (a finite truncation of an operator
    /// with more singular values); `None` when known everywhere.
    fn known_length(&self) -> Option<f64>;

    /// True when `μ` is known to vanish beyond some finite point.
    fn has_compact_support(&self) -> bool;

    /// Points in `(0, t_max]` where the profile jumps, in increasing order.
    fn breakpoints(&self, t_max: f64) -> Vec<f64>;

    /// `sup_{0 < t ≤ t_max} ∫_0^t μ^p / ψ(t)`, attained at breakpoints.
    fn ratio_sup(&self, psi: &PsiFunction, p: f64, t_max: f64) -> f64 {
        let mut pts = self.breakpoints(t_max);
        pts.push(t_max);
        pts.iter()
            .map(|&t| self.integral_pow(p, t) / psi.eval(t))
            .fold(0.0, f64::max)
    }
}

fn sup_over_sequence(values: impl Iterator<Item = f64>, psi: &PsiFunction, p: f64, t_max: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut best: f64 = 0.0;
    for (k, v) in values.enumerate() {
        let t = (k + 1) as f64;
        if t > t_max {
            break;
        }
        acc.add(v.powf(p));
        best = best.max(acc.value() / psi.eval(t));
    }
    best
}

impl Rearrangement for SingularSpectrum {
    fn integral_pow(&self, p: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let n = (t.floor() as usize).min(self.len());
        let mut acc = CompensatedSum::new();
        for &v in &self.values()[..n] {
            acc.add(v.powf(p));
        }
        acc.add((t - n as f64).max(0.0) * self.get(n).powf(p));
        acc.value()
    }

    fn norm_pow(&self, q: f64) -> f64 {
        self.values().iter().rev().map(|v| v.powf(q)).sum()
    }

    fn known_length(&self) -> Option<f64> {
        if self.is_exact() {
            None
        } else {
            Some(self.len() as f64)
        }
    }

    fn has_compact_support(&self) -> bool {
        self.is_exact()
    }

    fn breakpoints(&self, t_max: f64) -> Vec<f64> {
        (1..=self.len()).map(|k| k as f64).take_while(|&t| t <= t_max).collect()
    }

    fn ratio_sup(&self, psi: &PsiFunction, p: f64, t_max: f64) -> f64 {
        sup_over_sequence(self.values().iter().copied(), psi, p, t_max)
    }
}

impl Rearrangement for StepFunction {
    fn integral_pow(&self, p: f64, t: f64) -> f64 {
        StepFunction::integral_pow(self, p, t)
    }

    fn norm_pow(&self, q: f64) -> f64 {
        StepFunction::norm_pow(self, q)
    }

    fn known_length(&self) -> Option<f64> {
        None
    }

    fn has_compact_support(&self) -> bool {
        self.tail().is_none_or(|t| t.first_value == 0.0)
    }

    fn breakpoints(&self, t_max: f64) -> Vec<f64> {
        self.breakpoints_up_to(t_max)
    }
}

/// Infinite power-law sequence `μ_k = scale · (k+1)^{-exponent}`, with closed
/// forms for partial sums and norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerSpectrum {
    pub scale: f64,
    pub exponent: f64,
}

impl PowerSpectrum {
    pub fn new(scale: f64, exponent: f64) -> Result<Self> {
        if !(scale > 0.0 && exponent > 0.0) || !scale.is_finite() || !exponent.is_finite() {
            return Err(Error::invalid("power spectrum needs positive scale and exponent"));
        }
        Ok(Self { scale, exponent })
    }

    /// The harmonic sequence `1/(k+1)`.
    pub fn harmonic() -> Self {
        Self { scale: 1.0, exponent: 1.0 }
    }

    pub fn value(&self, k: u64) -> f64 {
        self.scale * ((k + 1) as f64).powf(-self.exponent)
    }

    /// The first `n` terms as a truncated spectrum.
    pub fn truncate(&self, n: usize) -> SingularSpectrum {
        let values = (0..n as u64).map(|k| self.value(k)).collect();
        SingularSpectrum::new(values, n, false).expect("power sequences are nonincreasing")
    }
}

impl Rearrangement for PowerSpectrum {
    fn integral_pow(&self, p: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let n = t.floor();
        let full = power_sum(self.exponent * p, n as u64);
        let part = (t - n) * ((n + 1.0).powf(-self.exponent * p));
        self.scale.powf(p) * (full + part)
    }

    fn norm_pow(&self, q: f64) -> f64 {
        let s = self.exponent * q;
        if s <= 1.0 {
            f64::INFINITY
        } else {
            self.scale.powf(q) * zeta(s)
        }
    }

    fn known_length(&self) -> Option<f64> {
        None
    }

    fn has_compact_support(&self) -> bool {
        false
    }

    fn breakpoints(&self, t_max: f64) -> Vec<f64> {
        (1..).map(|k| k as f64).take_while(|&t| t <= t_max).collect()
    }

    fn ratio_sup(&self, psi: &PsiFunction, p: f64, t_max: f64) -> f64 {
        sup_over_sequence((0..).map(|k| self.value(k)), psi, p, t_max)
    }
}

/// Continuous profile `amplitude · (1+t)^{-exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerProfile {
    pub amplitude: f64,
    pub exponent: f64,
}

impl PowerProfile {
    pub fn new(amplitude: f64, exponent: f64) -> Result<Self> {
        if !(amplitude > 0.0 && exponent > 0.0) || !amplitude.is_finite() || !exponent.is_finite() {
            return Err(Error::invalid("power profile needs positive amplitude and exponent"));
        }
        Ok(Self { amplitude, exponent })
    }
}

impl Rearrangement for PowerProfile {
    fn integral_pow(&self, p: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let e = 1.0 - self.exponent * p;
        let base = if e == 0.0 {
            t.ln_1p()
        } else {
            // ((1+t)^e - 1)/e
            (e * t.ln_1p()).exp_m1() / e
        };
        self.amplitude.powf(p) * base
    }

    fn norm_pow(&self, q: f64) -> f64 {
        let e = self.exponent * q - 1.0;
        if e <= 0.0 {
            f64::INFINITY
        } else {
            self.amplitude.powf(q) / e
        }
    }

    fn known_length(&self) -> Option<f64> {
        None
    }

    fn has_compact_support(&self) -> bool {
        false
    }

    fn breakpoints(&self, _t_max: f64) -> Vec<f64> {
        Vec::new()
    }

    fn ratio_sup(&self, psi: &PsiFunction, p: f64, t_max: f64) -> f64 {
        // continuous profile: scan a logarithmic grid
        let n = 2000;
        let lmax = t_max.ln_1p();
        (1..=n)
            .map(|i| (lmax * i as f64 / n as f64).exp_m1())
            .map(|t| self.integral_pow(p, t) / psi.eval(t))
            .fold(0.0, f64::max)
    }
}

/// Map `q ↦ ‖x‖_q^q`, evaluated for `q` slightly above the base exponent.
pub trait NormCurve: Sync {
    fn norm_pow(&self, q: f64) -> Result<f64>;

    /// True when `x` has finitely many nonzero terms.
    fn is_finite_rank(&self) -> bool {
        false
    }

    /// True when `x` is a finite truncation of a longer sequence.
    fn is_truncated(&self) -> bool {
        false
    }
}

/// [`NormCurve`] of a rearrangement `μ`: `q ↦ ‖μ‖_q^q`.
pub struct ProfileCurve<'a, R: Rearrangement + ?Sized>(pub &'a R);

impl<R: Rearrangement + ?Sized> NormCurve for ProfileCurve<'_, R> {
    fn norm_pow(&self, q: f64) -> Result<f64> {
        let v = self.0.norm_pow(q);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::numerical(format!("‖x‖_q^q diverges at q = {q}")))
        }
    }

    fn is_finite_rank(&self) -> bool {
        self.0.has_compact_support() && self.0.known_length().is_none()
    }

    fn is_truncated(&self) -> bool {
        self.0.known_length().is_some()
    }
}

/// `∫_0^t μ^p / ψ(t)` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioSample {
    pub t: f64,
    pub ratio: f64,
    /// `t` lies beyond the known part of a truncated spectrum.
    pub truncated: bool,
}

/// `(1/ψ(t)) ∫_0^t μ(s)^p ds`; zero for `t = 0`.
pub fn partial_sum_ratio<R: Rearrangement + ?Sized>(
    s: &R,
    psi: &PsiFunction,
    p: f64,
    t: f64,
) -> Result<RatioSample> {
    check_p(p)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("t must be finite and >= 0, got {t}")));
    }
    let truncated = s.known_length().is_some_and(|n| t > n);
    let ratio = if t == 0.0 { 0.0 } else { s.integral_pow(p, t) / psi.eval(t) };
    Ok(RatioSample { t, ratio, truncated })
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("p must be >= 1, got {p}")))
    }
}

/// `sup_t (1/ψ(t)) ∫_0^t μ^p` over breakpoints up to the known length, the end
/// of the support, or [`DEFAULT_SUP_HORIZON`].
pub fn lorentz_quasinorm<R: Rearrangement + ?Sized>(s: &R, psi: &PsiFunction, p: f64) -> Result<f64> {
    let horizon = match s.known_length() {
        Some(n) => n,
        None if s.has_compact_support() => {
            s.breakpoints(f64::INFINITY).last().copied().unwrap_or(1.0)
        }
        None => DEFAULT_SUP_HORIZON,
    };
    lorentz_quasinorm_to(s, psi, p, horizon)
}

pub fn lorentz_quasinorm_to<R: Rearrangement + ?Sized>(
    s: &R,
    psi: &PsiFunction,
    p: f64,
    t_max: f64,
) -> Result<f64> {
    check_p(p)?;
    if !(t_max > 0.0) {
        return Err(Error::invalid("supremum horizon must be positive"));
    }
    Ok(s.ratio_sup(psi, p, t_max))
}

/// `h = 2^{-1}, 2^{-2}, …, 2^{-depth}`.
pub fn dyadic_h_grid(depth: u32) -> Vec<f64> {
    (1..=depth as i32).map(|k| 2f64.powi(-k)).collect()
}

/// Default grid `h = 2^{-1} … 2^{-16}`.
pub fn default_h_grid() -> Vec<f64> {
    dyadic_h_grid(16)
}

fn check_h_grid(h_grid: &[f64]) -> Result<()> {
    if h_grid.is_empty() {
        return Err(Error::invalid("h grid is empty"));
    }
    if let Some(h) = h_grid.iter().find(|h| !(**h > 0.0 && **h <= 1.0)) {
        return Err(Error::invalid(format!("grid h must lie in (0, 1], got {h}")));
    }
    Ok(())
}

/// Indices of the [`TAIL_POINTS`] smallest grid entries.
pub(crate) fn tail_indices(h_grid: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..h_grid.len()).collect();
    idx.sort_by(|&a, &b| h_grid[a].total_cmp(&h_grid[b]));
    idx.truncate(TAIL_POINTS);
    idx
}

/// Values `v(h) = ‖x‖_{p+h}^{p+h} / ψ(e^{1/h})` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolation {
    pub per_h: Vec<(f64, f64)>,
    pub sup_value: f64,
    /// Max of `v` over the smallest grid `h`.
    pub tail_limsup: f64,
}

pub fn extrapolation_functional<C: NormCurve + ?Sized>(
    curve: &C,
    psi: &PsiFunction,
    p: f64,
    h_grid: &[f64],
) -> Result<Extrapolation> {
    check_p(p)?;
    check_h_grid(h_grid)?;
    let values: Vec<f64> = h_grid
        .par_iter()
        .map(|&h| Ok(curve.norm_pow(p + h)? / psi.psi_of_exp(1.0 / h)))
        .collect::<Result<_>>()?;
    let sup_value = values.iter().copied().fold(0.0, f64::max);
    let tail_limsup = tail_indices(h_grid).iter().map(|&i| values[i]).fold(0.0, f64::max);
    Ok(Extrapolation {
        per_h: h_grid.iter().copied().zip(values).collect(),
        sup_value,
        tail_limsup,
    })
}

/// Finite-grid surrogates of the two sides of the Lorentz limsup sandwich.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    /// `max ((1/ψ(t)) ∫_0^t H^p)^{1/p}` over the top half of `t = 10^{1..G}`.
    pub lim_psi: f64,
    /// `max ‖H‖_{p+h}^{1+h} / ψ(e^{1/h})^{1/p}` over the smallest grid `h`.
    pub limsup_extrap: f64,
    /// Same with exponent `(p+h)/p`, i.e. `(‖H‖_{p+h}^{p+h}/ψ(e^{1/h}))^{1/p}`.
    pub limsup_extrap_convexified: f64,
    /// `limsup_extrap / lim_psi`; `None` when `H ∈ L^p` and both sides vanish.
    pub ratio: Option<f64>,
    pub note: Option<String>,
}

/// Configuration of [`sandwich_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichGrid {
    /// Decades of the `t` grid `10^{1..decades}`.
    pub decades: u32,
    pub h_grid: Vec<f64>,
}

impl Default for SandwichGrid {
    fn default() -> Self {
        Self { decades: 64, h_grid: default_h_grid() }
    }
}

pub fn sandwich_check<R: Rearrangement + ?Sized>(
    h: &R,
    psi: &PsiFunction,
    p: f64,
    grid: &SandwichGrid,
) -> Result<SandwichReport> {
    check_p(p)?;
    check_h_grid(&grid.h_grid)?;
    if grid.decades < 2 || grid.decades > 300 {
        return Err(Error::invalid(format!("t grid needs 2..=300 decades, got {}", grid.decades)));
    }
    if h.norm_pow(p).is_finite() {
        return Ok(SandwichReport {
            lim_psi: 0.0,
            limsup_extrap: 0.0,
            limsup_extrap_convexified: 0.0,
            ratio: None,
            note: Some("H is p-integrable: both quantities vanish".into()),
        });
    }
    let g = grid.decades;
    let lim_psi = (g / 2 + 1..=g)
        .map(|d| {
            let t = 10f64.powi(d as i32);
            (h.integral_pow(p, t) / psi.eval(t)).powf(1.0 / p)
        })
        .fold(0.0, f64::max);
    let mut literal: f64 = 0.0;
    let mut convexified: f64 = 0.0;
    for i in tail_indices(&grid.h_grid) {
        let hh = grid.h_grid[i];
        let np = h.norm_pow(p + hh);
        if !np.is_finite() {
            return Err(Error::numerical(format!("‖H‖_(p+h) diverges at h = {hh}")));
        }
        let den = psi.psi_of_exp(1.0 / hh);
        let norm = np.powf(1.0 / (p + hh));
        literal = literal.max(norm.powf(1.0 + hh) / den.powf(1.0 / p));
        convexified = convexified.max((np / den).powf(1.0 / p));
    }
    Ok(SandwichReport {
        lim_psi,
        limsup_extrap: literal,
        limsup_extrap_convexified: convexified,
        ratio: Some(literal / lim_psi),
        note: None,
    })
}
