//! Dixmier-trace brackets, the extrapolated trace formula, the exact
//! `p = 2, 4, 6` trace identity and measurability verdicts.
//!
//! Extended limits cannot be constructed, so every trace is reported as an
//! interval `[lo, hi]` of finite-grid surrogates. A collapsed interval is
//! consistent with measurability; a wide one is evidence, not proof, of a gap.

use serde::Serialize;

use crate::besov::{besov_lp_norm_pow, besov_si_integral};
use crate::error::{Error, Result};
use crate::hankel::{hankel_spectrum, schatten_norm_pow};
use crate::lorentz::{
    extrapolation_functional, partial_sum_ratio, tail_indices, NormCurve, PsiFunction, Rearrangement,
};
use crate::numerics::ls_slope;
use crate::special::gamma;
use crate::symbols::FourierSymbol;

/// Default number of decades of the `t` grid `10^{1..G}`.
pub const DEFAULT_DECADES: u32 = 8;
/// Default collapse tolerance.
pub const DEFAULT_TOL: f64 = 0.05;

/// Text embedded in every report.
pub const SURROGATE_DISCLAIMER: &str = "brackets are finite-grid surrogates of extended limits; \
a collapsed bracket is consistent with measurability, a persistent gap is evidence, not proof";

/// Interval `[lo, hi]` of surrogate values of the Dixmier trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceBracket {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    /// `hi - lo ≤ tol · max(1, hi)`.
    pub collapsed: bool,
    /// All evaluated `(t, ratio)` or `(h, value)` pairs.
    pub samples: Vec<(f64, f64)>,
    /// Grid points entering the bracket.
    pub window: Vec<f64>,
    /// Least-squares slope of the windowed values against `log t`
    /// (against `1/h` for extrapolated brackets).
    pub trend_slope: f64,
    /// Part of the window lies beyond a truncated spectrum.
    pub lower_bound_only: bool,
    /// The operator has finite rank, so every Dixmier trace vanishes.
    pub finite_rank: bool,
}

impl TraceBracket {
    fn build(lo: f64, hi: f64, tol: f64) -> Result<Self> {
        if !(lo >= 0.0 && lo <= hi) || !hi.is_finite() {
            return Err(Error::numerical(format!("invalid trace bracket [{lo}, {hi}]")));
        }
        Ok(Self {
            lo,
            hi,
            tol,
            collapsed: hi - lo <= tol * hi.max(1.0),
            samples: Vec::new(),
            window: Vec::new(),
            trend_slope: 0.0,
            lower_bound_only: false,
            finite_rank: false,
        })
    }

    /// Bracket from explicit bounds.
    pub fn new(lo: f64, hi: f64, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        Self::build(lo, hi, tol)
    }

    fn finite_rank(tol: f64) -> Self {
        let mut b = Self::build(0.0, 0.0, tol).expect("zero bracket is valid");
        b.finite_rank = true;
        b
    }

    pub fn gap(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &TraceBracket) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("tolerance must be positive, got {tol}")))
    }
}

/// Logarithmic grid `t = 10^{1..decades}` with a collapse tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceGrid {
    pub decades: u32,
    pub tol: f64,
}

impl Default for TraceGrid {
    fn default() -> Self {
        Self { decades: DEFAULT_DECADES, tol: DEFAULT_TOL }
    }
}

impl TraceGrid {
    fn validate(&self) -> Result<()> {
        check_tol(self.tol)?;
        if !(2..=300).contains(&self.decades) {
            return Err(Error::invalid(format!("grid needs 2..=300 decades, got {}", self.decades)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        (1..=self.decades as i32).map(|d| 10f64.powi(d)).collect()
    }

    /// Upper half of the grid.
    pub fn window(&self) -> Vec<f64> {
        (self.decades as i32 / 2 + 1..=self.decades as i32).map(|d| 10f64.powi(d)).collect()
    }
}

/// Bracket of `(1/ψ(t)) ∫_0^t μ^p` over the top half of the grid.
pub fn trace_bracket<R: Rearrangement + ?Sized>(
    s: &R,
    psi: &PsiFunction,
    p: f64,
    grid: &TraceGrid,
) -> Result<TraceBracket> {
    grid.validate()?;
    if s.has_compact_support() && s.known_length().is_none() {
        return Ok(TraceBracket::finite_rank(grid.tol));
    }
    let mut samples = Vec::new();
    let mut truncated = false;
    let window = grid.window();
    for t in grid.points() {
        let r = partial_sum_ratio(s, psi, p, t)?;
        if window.contains(&t) {
            truncated |= r.truncated;
        }
        samples.push((t, r.ratio));
    }
    let w: Vec<f64> = samples.iter().filter(|(t, _)| window.contains(t)).map(|&(_, r)| r).collect();
    let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let logs: Vec<f64> = window.iter().map(|t| t.ln()).collect();
    let mut b = TraceBracket::build(lo, hi, grid.tol)?;
    b.trend_slope = ls_slope(&logs, &w);
    b.samples = samples;
    b.window = window;
    b.lower_bound_only = truncated;
    Ok(b)
}

/// `Γ(x)` for `x ∈ [0.5, 4]`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(0.5..=4.0).contains(&x) {
        return Err(Error::invalid(format!("gamma_fn is defined on [0.5, 4], got {x}")));
    }
    Ok(gamma(x))
}

/// Bracket of `v(h) / Γ(1 + k_ψ)` over the smallest grid `h`.
pub fn extrapolated_trace_bracket<C: NormCurve + ?Sized>(
    curve: &C,
    psi: &PsiFunction,
    p: f64,
    h_grid: &[f64],
    tol: f64,
) -> Result<TraceBracket> {
    check_tol(tol)?;
    if curve.is_finite_rank() {
        return Ok(TraceBracket::finite_rank(tol));
    }
    let ex = extrapolation_functional(curve, psi, p, h_grid)?;
    let g = gamma_fn(1.0 + psi.k_psi()?)?;
    let samples: Vec<(f64, f64)> = ex.per_h.iter().map(|&(h, v)| (h, v / g)).collect();
    let idx = tail_indices(h_grid);
    let w: Vec<f64> = idx.iter().map(|&i| samples[i].1).collect();
    let xs: Vec<f64> = idx.iter().map(|&i| 1.0 / samples[i].0).collect();
    let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut b = TraceBracket::build(lo, hi, tol)?;
    b.trend_slope = ls_slope(&xs, &w);
    b.window = idx.iter().map(|&i| samples[i].0).collect();
    b.samples = samples;
    b.lower_bound_only = curve.is_truncated();
    Ok(b)
}

/// `q ↦ ‖f‖^q` in the Littlewood-Paley realization, a surrogate for the
/// Schatten norm curve of the Hankel operator with symbol `f`.
pub struct BesovCurve<'a> {
    pub symbol: &'a FourierSymbol,
}

impl NormCurve for BesovCurve<'_> {
    fn norm_pow(&self, q: f64) -> Result<f64> {
        besov_lp_norm_pow(self.symbol, q)
    }

    /// Symbols are trigonometric polynomials, so their Hankel operators have
    /// finite rank.
    fn is_finite_rank(&self) -> bool {
        true
    }
}

/// `c_p` of the exact trace identity.
pub fn juw_constant(p: f64) -> Result<f64> {
    match p {
        2.0 => Ok(1.0),
        4.0 => Ok(0.5),
        6.0 => Ok(1.0 / 6.0),
        _ => Err(Error::invalid(format!(
            "p must be 2, 4 or 6, the only possible values for the exact trace identity (got {p})"
        ))),
    }
}

/// `c_p ∬ |f(z)-f(w)|^p / |z-w|² dV`, which equals `Tr |H|^p` for `p ∈ {2, 4, 6}`.
pub fn juw_trace(f: &FourierSymbol, p: f64, grid: usize) -> Result<f64> {
    let c = juw_constant(p)?;
    Ok(c * besov_si_integral(f, p, grid)?)
}

/// Both sides of the exact trace identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JuwCheck {
    pub p: f64,
    /// `c_p · SI^p`.
    pub lhs: f64,
    /// `Tr |H|^p` from the singular values.
    pub rhs: f64,
    /// `|lhs - rhs| / max(1, rhs)`.
    pub relerr: f64,
}

/// `Tr |H|^p` of a polynomial symbol from its exact Hankel spectrum.
pub fn hankel_trace_pow(f: &FourierSymbol, p: f64) -> Result<f64> {
    let n = f.degree().max(1);
    schatten_norm_pow(&hankel_spectrum(f, n)?, p)
}

pub fn juw_check(f: &FourierSymbol, p: f64, grid: usize) -> Result<JuwCheck> {
    let lhs = juw_trace(f, p, grid)?;
    let rhs = hankel_trace_pow(f, p)?;
    Ok(JuwCheck { p, lhs, rhs, relerr: (lhs - rhs).abs() / rhs.max(1.0) })
}

/// `Tr |H|^p / ∬ |f(z)-f(w)|^p / |z-w|² dV` for any `p > 1`; constant across
/// symbols only for `p ∈ {2, 4, 6}`.
pub fn trace_to_si_ratio(f: &FourierSymbol, p: f64, grid: usize) -> Result<f64> {
    let si = besov_si_integral(f, p, grid)?;
    if si == 0.0 {
        return Err(Error::invalid("the zero symbol has no trace ratio"));
    }
    Ok(hankel_trace_pow(f, p)? / si)
}

/// Surrogate of the distance from `|T|^p` to the separable part of the
/// Lorentz ideal, which for atomic algebras equals
/// `limsup_t (1/ψ(t)) ∫_0^t μ^p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparableDistance {
    pub distance: f64,
    pub window: Vec<f64>,
    pub lower_bound_only: bool,
}

pub fn distance_to_separable<R: Rearrangement + ?Sized>(
    s: &R,
    psi: &PsiFunction,
    p: f64,
    grid: &TraceGrid,
) -> Result<SeparableDistance> {
    let b = trace_bracket(s, psi, p, grid)?;
    Ok(SeparableDistance { distance: b.hi, window: b.window, lower_bound_only: b.lower_bound_only })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    MeasurableConsistent,
    GapDetected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurabilityReport {
    pub verdict: Verdict,
    pub gap: f64,
}

pub fn measurability_report(b: &TraceBracket) -> MeasurabilityReport {
    let verdict = if b.collapsed { Verdict::MeasurableConsistent } else { Verdict::GapDetected };
    MeasurabilityReport { verdict, gap: b.gap() }
}
