//! Besov norms of holomorphic symbols in three equivalent realizations, and
//! decreasing rearrangements.
//!
//! * Littlewood-Paley: `( Σ_n 2^n ⨍ |W_n * f|^q dθ )^{1/q}` with triangular
//!   dyadic multipliers [`lp_multiplier`].
//! * Weighted disc: `( ∫_D |f''|^q (1-|z|²)^{2q-2} dm )^{1/q}`, `dm` planar
//!   Lebesgue measure.
//! * Double circle integral: `( ∬ |f(z)-f(w)|^q / |z-w|² dV )^{1/q}` with `dV`
//!   the normalized Haar measure on the bitorus.
//!
//! All three are plain quadratures on uniform circle grids (sampled by FFT).
//! Reductions are done in a fixed order so results do not depend on the
//! number of worker threads.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre_on, pairwise_sum, CompensatedSum};
use crate::special::hurwitz_zeta;
use crate::symbols::{circle_samples, second_derivative, FourierSymbol};

/// Default Gauss-Legendre budget for the radial variable of the disc norm.
pub const DEFAULT_RADIAL_NODES: usize = 200;
/// Smallest angular / bitorus grid used by the default quadratures.
pub const MIN_GRID: usize = 256;
/// Largest angular / bitorus grid accepted.
pub const MAX_GRID: usize = 1 << 16;

const RADIAL_PANELS: usize = 24;

/// Default grid for a symbol: `max(256, 4 · degree)`.
pub fn default_grid(f: &FourierSymbol) -> usize {
    MIN_GRID.max(4 * f.degree())
}

/// Fourier multiplier `Ŵ_n(k)` of the `n`-th Littlewood-Paley block.
///
/// For `n ≥ 1` this is the triangle through `(2^{n-1}, 0)`, `(2^n, 1)` and
/// `(2^{n+1}, 0)`. Block `0` carries the frequencies `k ∈ {0, 1}`, which the
/// triangles never reach; with that choice the multipliers sum to one.
pub fn lp_multiplier(n: u32, k: u64) -> f64 {
    if n == 0 {
        return if k <= 1 { 1.0 } else { 0.0 };
    }
    if n > 100 {
        return 0.0;
    }
    let k = k as u128;
    let lo = 1u128 << (n - 1);
    let mid = 1u128 << n;
    let hi = 1u128 << (n + 1);
    if k <= lo || k >= hi {
        return 0.0;
    }
    let up = (k - lo) as f64 / (mid - lo) as f64;
    let down = (hi - k) as f64 / (hi - mid) as f64;
    up.min(down)
}

/// A norm value together with the change observed when the quadrature is
/// refined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub norm_value: f64,
    pub quadrature_error_estimate: f64,
}

fn check_exponent(q: f64, strict: bool) -> Result<()> {
    let ok = q.is_finite() && if strict { q > 1.0 } else { q >= 1.0 };
    if ok {
        Ok(())
    } else if strict {
        Err(Error::invalid(format!("exponent q must be > 1, got {q}")))
    } else {
        Err(Error::invalid(format!("exponent q must be >= 1, got {q}")))
    }
}

fn mean_abs_pow(samples: &[Complex64], q: f64) -> f64 {
    let vals: Vec<f64> = samples.iter().map(|z| abs_pow(*z, q)).collect();
    pairwise_sum(&vals) / samples.len() as f64
}

#[inline]
fn abs_pow(z: Complex64, q: f64) -> f64 {
    let n2 = z.norm_sqr();
    if q == 2.0 {
        n2
    } else if q == 4.0 {
        n2 * n2
    } else if q == 6.0 {
        n2 * n2 * n2
    } else {
        n2.powf(0.5 * q)
    }
}

fn lp_grid(f: &FourierSymbol) -> usize {
    default_grid(f).next_power_of_two()
}

fn lp_norm_pow_on_grid(f: &FourierSymbol, q: f64, m: usize) -> f64 {
    if f.is_zero() {
        return 0.0;
    }
    let top = u64::BITS - (f.degree() as u64).leading_zeros();
    let mut total = CompensatedSum::new();
    for n in 0..=top {
        let (lo, hi) = if n == 0 { (0, 1) } else { (1usize << (n - 1), 1usize << (n + 1)) };
        let block: Vec<(usize, Complex64)> = f
            .iter()
            .filter(|&(k, _)| k >= lo && k <= hi)
            .map(|(k, c)| (k, c * lp_multiplier(n, k as u64)))
            .filter(|(_, c)| c.norm_sqr() != 0.0)
            .collect();
        if block.is_empty() {
            continue;
        }
        let samples = circle_samples(block, m, 0.0);
        total.add((n as f64).exp2() * mean_abs_pow(&samples, q));
    }
    total.value()
}

/// `‖f‖^q` in the Littlewood-Paley realization (no root taken).
pub fn besov_lp_norm_pow(f: &FourierSymbol, q: f64) -> Result<f64> {
    check_exponent(q, false)?;
    let f = f.normalized();
    Ok(lp_norm_pow_on_grid(&f, q, lp_grid(&f)))
}

/// Littlewood-Paley Besov norm `( Σ_n 2^n ⨍ |Φ_n f|^q )^{1/q}`.
pub fn besov_lp_norm(f: &FourierSymbol, q: f64) -> Result<f64> {
    Ok(besov_lp_norm_pow(f, q)?.powf(1.0 / q))
}

/// Littlewood-Paley norm together with the change under grid doubling.
pub fn besov_lp_norm_estimate(f: &FourierSymbol, q: f64) -> Result<NormEstimate> {
    check_exponent(q, false)?;
    let f = f.normalized();
    let m = lp_grid(&f);
    let coarse = lp_norm_pow_on_grid(&f, q, m).powf(1.0 / q);
    let fine = lp_norm_pow_on_grid(&f, q, 2 * m).powf(1.0 / q);
    Ok(NormEstimate {
        norm_value: coarse,
        quadrature_error_estimate: (fine - coarse).abs(),
    })
}

fn radial_rule(radial_nodes: usize) -> Vec<(f64, f64)> {
    // Panels [1-2^-i, 1-2^-(i+1)] graded toward u = 1, where the weight
    // (1-u)^{2q-2} is singular and |f''|^q concentrates for large degrees,
    // and [2^-(i+1), 2^-i] graded toward u = 0, where |f''|^q ~ u^{q m/2}.
    let per_panel = (radial_nodes / RADIAL_PANELS).max(8);
    let mut rule = Vec::with_capacity(per_panel * (2 * RADIAL_PANELS + 2));
    rule.extend(gauss_legendre_on(per_panel, 0.0, (-(RADIAL_PANELS as f64 + 1.0)).exp2()));
    for i in (1..=RADIAL_PANELS).rev() {
        let a = (-(i as f64 + 1.0)).exp2();
        rule.extend(gauss_legendre_on(per_panel, a, 2.0 * a));
    }
    for i in 1..=RADIAL_PANELS {
        let a = 1.0 - (-(i as f64)).exp2();
        let b = if i == RADIAL_PANELS { 1.0 } else { 1.0 - (-(i as f64 + 1.0)).exp2() };
        rule.extend(gauss_legendre_on(per_panel, a, b));
    }
    rule
}

fn disc_integral(d2: &FourierSymbol, q: f64, radial_nodes: usize, angular_nodes: usize) -> f64 {
    if d2.is_zero() {
        return 0.0;
    }
    let rule = radial_rule(radial_nodes);
    let terms: Vec<f64> = rule
        .par_iter()
        .map(|&(u, w)| {
            let r = u.sqrt();
            let scaled = d2.iter().map(|(k, c)| (k, c * r.powi(k as i32)));
            let samples = circle_samples(scaled, angular_nodes, 0.0);
            w * (1.0 - u).powf(2.0 * q - 2.0) * mean_abs_pow(&samples, q)
        })
        .collect();
    // dm = r dr dθ = ½ du dθ, and the angular mean carries a factor 2π
    PI * pairwise_sum(&terms)
}

fn check_disc_nodes(f: &FourierSymbol, radial_nodes: usize, angular_nodes: usize) -> Result<()> {
    if radial_nodes < 8 {
        return Err(Error::invalid(format!(
            "insufficient radial nodes: {radial_nodes} (at least 8 required)"
        )));
    }
    if angular_nodes <= 2 * f.degree() {
        return Err(Error::invalid(format!(
            "insufficient angular nodes: {angular_nodes} for degree {} (need more than twice the degree)",
            f.degree()
        )));
    }
    if angular_nodes > MAX_GRID {
        return Err(Error::resource(format!(
            "angular grid {angular_nodes} exceeds the cap {MAX_GRID}"
        )));
    }
    Ok(())
}

/// Weighted-disc Besov norm `( ∫_D |f''(z)|^q (1-|z|²)^{2q-2} dm(z) )^{1/q}`.
///
/// The radial variable `u = |z|²` is integrated by composite Gauss-Legendre on
/// panels graded toward both ends (`radial_nodes` split evenly, at least 8
/// per panel); the angle by the periodic trapezoid rule on `angular_nodes`
/// points.
pub fn besov_disc_norm(
    f: &FourierSymbol,
    q: f64,
    radial_nodes: usize,
    angular_nodes: usize,
) -> Result<f64> {
    Ok(besov_disc_norm_estimate(f, q, radial_nodes, angular_nodes)?.norm_value)
}

pub fn besov_disc_norm_estimate(
    f: &FourierSymbol,
    q: f64,
    radial_nodes: usize,
    angular_nodes: usize,
) -> Result<NormEstimate> {
    check_exponent(q, true)?;
    check_disc_nodes(f, radial_nodes, angular_nodes)?;
    let d2 = second_derivative(f);
    let coarse = disc_integral(&d2, q, radial_nodes, angular_nodes).powf(1.0 / q);
    let fine = if d2.is_zero() {
        0.0
    } else {
        disc_integral(&d2, q, 2 * radial_nodes, (2 * angular_nodes).min(MAX_GRID)).powf(1.0 / q)
    };
    Ok(NormEstimate {
        norm_value: coarse,
        quadrature_error_estimate: (fine - coarse).abs(),
    })
}

/// Disc norm with the default quadrature (`200` radial, `max(256, 4·deg)` angular).
pub fn besov_disc_norm_default(f: &FourierSymbol, q: f64) -> Result<f64> {
    besov_disc_norm(f, q, DEFAULT_RADIAL_NODES, default_grid(f))
}

fn check_si_grid(f: &FourierSymbol, grid: usize) -> Result<()> {
    if grid < 4 * f.degree() || grid == 0 {
        return Err(Error::invalid(format!(
            "bitorus grid {grid} too coarse for degree {} (need at least 4·degree)",
            f.degree()
        )));
    }
    if grid > MAX_GRID {
        return Err(Error::resource(format!("bitorus grid {grid} exceeds the cap {MAX_GRID}")));
    }
    Ok(())
}

fn si_integral_on_grid(f: &FourierSymbol, q: f64, m: usize) -> f64 {
    if f.is_zero() {
        return 0.0;
    }
    let z_vals = f.sample_circle(m, 0.0);
    let w_vals = f.sample_circle(m, 0.5);
    // |z_i - w_j|² = 4 sin²(π (i - j - ½) / m) depends only on (i - j) mod m
    let inv_dist: Vec<f64> = (0..m)
        .map(|d| {
            let s = (PI * (d as f64 - 0.5) / m as f64).sin();
            1.0 / (4.0 * s * s)
        })
        .collect();
    let rows: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|i| {
            let zi = z_vals[i];
            let mut acc = CompensatedSum::new();
            for (j, wj) in w_vals.iter().enumerate() {
                let d = (i + m - j) % m;
                acc.add(abs_pow(zi - wj, q) * inv_dist[d]);
            }
            acc.value()
        })
        .collect();
    let raw = pairwise_sum(&rows) / (m as f64 * m as f64);
    raw - si_diagonal_correction(f, q, m)
}

/// Leading errors of the staggered rule at the diagonal singularity.
///
/// With `u(θ) = f(e^{iθ})`, the integrand near `φ = θ + x` is
/// `|x|^α G_θ(x)`, `α = q - 2`, where `G_θ(x) = |D(x)|^q (x/2)² / sin²(x/2)`
/// and `D(x) = (u(θ+x) - u(θ)) / x`. On nodes `(k + ½)h`, `k ∈ ℤ`, the sum of
/// `h |x|^α G(x)` exceeds `∫ |x|^α G` by
/// `Σ_j 2 ζ(-α-2j, ½) h^{1+α+2j} G^{(2j)}(0)/(2j)!`; the `j = 0, 1` terms are
/// subtracted. They vanish for even `q`, where the rule is exact.
fn si_diagonal_correction(f: &FourierSymbol, q: f64, m: usize) -> f64 {
    let alpha = q - 2.0;
    if alpha.rem_euclid(2.0) == 0.0 {
        return 0.0;
    }
    let h = 2.0 * PI / m as f64;
    let i = Complex64::i();
    let du = |order: i32, scale: f64| {
        let coeffs = f.iter().map(move |(k, c)| (k, c * (i * k as f64).powi(order) * scale));
        circle_samples(coeffs, m, 0.0)
    };
    let (u1, u2, u3) = (du(1, 1.0), du(2, 0.5), du(3, 1.0 / 6.0));
    let mut g0 = Vec::with_capacity(m);
    let mut g2 = Vec::with_capacity(m);
    for ((a, b), c) in u1.iter().zip(&u2).zip(&u3) {
        // |D|² = P + P1 x + P2 x² + O(x³)
        let p0 = a.norm_sqr();
        g0.push(p0.powf(q / 2.0));
        if p0 > 0.0 {
            let p1 = 2.0 * (a * b.conj()).re / p0;
            let p2 = (b.norm_sqr() + 2.0 * (a * c.conj()).re) / p0;
            let half = q / 2.0;
            g2.push(p0.powf(half) * (half * p2 + 0.5 * half * (half - 1.0) * p1 * p1 + 1.0 / 12.0));
        } else {
            g2.push(0.0);
        }
    }
    let mean = |v: &[f64]| pairwise_sum(v) / m as f64;
    let mut correction = 0.0;
    if -alpha > -10.0 {
        correction += 2.0 * hurwitz_zeta(-alpha, 0.5) * h.powf(1.0 + alpha) * mean(&g0);
    }
    if -alpha - 2.0 > -10.0 {
        correction += 2.0 * hurwitz_zeta(-alpha - 2.0, 0.5) * h.powf(3.0 + alpha) * mean(&g2);
    }
    correction / (2.0 * PI)
}

/// Single-grid value and, when the doubled grid fits under the cap, its
/// Richardson combination with the doubled grid.
fn si_integral_pair(f: &FourierSymbol, q: f64, grid: usize) -> (f64, Option<f64>) {
    let coarse = si_integral_on_grid(f, q, grid);
    if q.rem_euclid(2.0) == 0.0 || 2 * grid > MAX_GRID {
        return (coarse, None);
    }
    // after the diagonal corrections the error is c h^{q+1}: the diagonal
    // remainder and the |·|^q kinks where f(z) = f(w) off the diagonal
    let fine = si_integral_on_grid(f, q, 2 * grid);
    let r = (q + 1.0).exp2();
    (coarse, Some((r * fine - coarse) / (r - 1.0)))
}

/// `∬ |f(z)-f(w)|^q / |z-w|² dV` on a staggered `grid × grid` product grid.
///
/// The `w` grid is offset by half a cell so `z ≠ w` at every node. For even
/// integer `q` and polynomial `f` the integrand is a trigonometric polynomial
/// and the rule is exact once `grid` exceeds its degree. Otherwise the two
/// leading diagonal error terms are subtracted in closed form and the
/// remaining `O(h^{q+1})` error is eliminated by one Richardson step against
/// the grid `2·grid` (skipped when that exceeds the cap).
pub fn besov_si_integral(f: &FourierSymbol, q: f64, grid: usize) -> Result<f64> {
    check_exponent(q, true)?;
    check_si_grid(f, grid)?;
    let (coarse, extrapolated) = si_integral_pair(f, q, grid);
    Ok(extrapolated.unwrap_or(coarse))
}

/// Double-circle Besov norm `( ∬ |f(z)-f(w)|^q / |z-w|² dV )^{1/q}`.
pub fn besov_si_norm(f: &FourierSymbol, q: f64, grid: usize) -> Result<f64> {
    Ok(besov_si_integral(f, q, grid)?.powf(1.0 / q))
}

/// SI norm with an error estimate: the change from the single-grid value to
/// the extrapolated one, which bounds the single-grid error and so, in the
/// asymptotic regime, the error of the returned value.
pub fn besov_si_norm_estimate(f: &FourierSymbol, q: f64, grid: usize) -> Result<NormEstimate> {
    check_exponent(q, true)?;
    check_si_grid(f, grid)?;
    let (coarse, extrapolated) = si_integral_pair(f, q, grid);
    let coarse = coarse.powf(1.0 / q);
    Ok(match extrapolated {
        Some(v) => {
            let v = v.powf(1.0 / q);
            NormEstimate { norm_value: v, quadrature_error_estimate: (v - coarse).abs() }
        }
        None if q.rem_euclid(2.0) == 0.0 => {
            NormEstimate { norm_value: coarse, quadrature_error_estimate: 0.0 }
        }
        None => {
            let half = si_integral_on_grid(f, q, grid / 2).powf(1.0 / q);
            NormEstimate { norm_value: coarse, quadrature_error_estimate: (half - coarse).abs() }
        }
    })
}

/// Self-similar tail of a step function: step `j ≥ 0` has value
/// `first_value · value_ratio^j` and length `first_length · length_ratio^j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricTail {
    pub first_value: f64,
    pub first_length: f64,
    pub value_ratio: f64,
    pub length_ratio: f64,
}

/// Nonincreasing step function on `(0, ∞)`: value `values[i]` on
/// `[breakpoints[i], breakpoints[i+1])`, zero after the last breakpoint unless
/// a [`GeometricTail`] continues it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    tail: Option<GeometricTail>,
}

impl StepFunction {
    /// Builds a step function from `(value, length)` pairs laid out left to right.
    pub fn from_steps(steps: &[(f64, f64)]) -> Result<Self> {
        let mut breakpoints = Vec::with_capacity(steps.len() + 1);
        let mut values = Vec::with_capacity(steps.len());
        let mut t = CompensatedSum::new();
        breakpoints.push(0.0);
        for &(v, len) in steps {
            if !(len > 0.0) || !len.is_finite() {
                return Err(Error::invalid(format!("step length must be positive, got {len}")));
            }
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("step value must be nonnegative, got {v}")));
            }
            if let Some(&prev) = values.last() {
                if v > prev {
                    return Err(Error::invalid("step values must be nonincreasing"));
                }
            }
            t.add(len);
            values.push(v);
            breakpoints.push(t.value());
        }
        Ok(Self { breakpoints, values, tail: None })
    }

    /// Appends a geometric tail after the explicit steps.
    pub fn with_tail(mut self, tail: GeometricTail) -> Result<Self> {
        let GeometricTail { first_value, first_length, value_ratio, length_ratio } = tail;
        if !(first_value >= 0.0 && first_length > 0.0) {
            return Err(Error::invalid("tail needs a nonnegative value and positive length"));
        }
        if !(value_ratio > 0.0 && value_ratio <= 1.0 && length_ratio >= 1.0) {
            return Err(Error::invalid(
                "tail needs value ratio in (0, 1] and length ratio >= 1",
            ));
        }
        if let Some(&last) = self.values.last() {
            if first_value > last {
                return Err(Error::invalid("tail must not exceed the last explicit step"));
            }
        }
        self.tail = Some(tail);
        Ok(self)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail(&self) -> Option<&GeometricTail> {
        self.tail.as_ref()
    }

    /// End of the explicit steps.
    pub fn explicit_end(&self) -> f64 {
        *self.breakpoints.last().expect("breakpoints start at 0")
    }

    pub fn value_at(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        if t < self.explicit_end() {
            let i = self.breakpoints.partition_point(|&b| b <= t) - 1;
            return self.values[i];
        }
        match self.tail {
            None => 0.0,
            Some(tail) => {
                let (j, _) = tail_locate(&tail, t - self.explicit_end());
                tail.first_value * tail.value_ratio.powf(j)
            }
        }
    }

    /// `∫_0^t v(s)^p ds`, in closed form.
    pub fn integral_pow(&self, p: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let mut acc = CompensatedSum::new();
        for (i, &v) in self.values.iter().enumerate() {
            let a = self.breakpoints[i];
            let b = self.breakpoints[i + 1];
            if t <= a {
                return acc.value();
            }
            acc.add(v.powf(p) * (b.min(t) - a));
        }
        let end = self.explicit_end();
        if t <= end {
            return acc.value();
        }
        if let Some(tail) = self.tail {
            acc.add(tail_integral_pow(&tail, p, t - end));
        }
        acc.value()
    }

    /// `‖v‖_{L^q(0,∞)}^q`; infinite when the tail is not `q`-integrable.
    pub fn norm_pow(&self, q: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for (i, &v) in self.values.iter().enumerate() {
            acc.add(v.powf(q) * (self.breakpoints[i + 1] - self.breakpoints[i]));
        }
        if let Some(tail) = self.tail {
            acc.add(tail_norm_pow(&tail, q));
        }
        acc.value()
    }

    pub fn lq_norm(&self, q: f64) -> f64 {
        self.norm_pow(q).powf(1.0 / q)
    }

    /// Breakpoints in `(0, t_max]`, tail breakpoints included.
    pub fn breakpoints_up_to(&self, t_max: f64) -> Vec<f64> {
        let mut out: Vec<f64> =
            self.breakpoints[1..].iter().copied().take_while(|&b| b <= t_max).collect();
        if let Some(tail) = self.tail {
            let mut t = self.explicit_end();
            let mut len = tail.first_length;
            while t + len <= t_max && out.len() < 1_000_000 {
                t += len;
                out.push(t);
                len *= tail.length_ratio;
            }
        }
        out
    }
}

/// Index (fractional part included) of the tail step containing offset `s`,
/// and the offset where that step starts.
fn tail_locate(tail: &GeometricTail, s: f64) -> (f64, f64) {
    let l = tail.first_length;
    let g = tail.length_ratio;
    if g == 1.0 {
        let j = (s / l).floor();
        return (j, j * l);
    }
    // start of step j: l (g^j - 1)/(g - 1)
    let mut j = ((s * (g - 1.0) / l + 1.0).ln() / g.ln()).floor().max(0.0);
    let start = |j: f64| l * (g.powf(j) - 1.0) / (g - 1.0);
    while start(j + 1.0) <= s {
        j += 1.0;
    }
    while j > 0.0 && start(j) > s {
        j -= 1.0;
    }
    (j, start(j))
}

fn geometric_partial(first: f64, ratio: f64, count: f64) -> f64 {
    // first · (1 - ratio^count) / (1 - ratio), accurate for ratio near 1
    if count <= 0.0 || first == 0.0 {
        return 0.0;
    }
    let lr = ratio.ln();
    if lr == 0.0 {
        return first * count;
    }
    first * (-(count * lr).exp_m1()) / (-lr.exp_m1())
}

fn tail_integral_pow(tail: &GeometricTail, p: f64, s: f64) -> f64 {
    let (j, start) = tail_locate(tail, s);
    let first = tail.first_value.powf(p) * tail.first_length;
    let ratio = tail.value_ratio.powf(p) * tail.length_ratio;
    let full = geometric_partial(first, ratio, j);
    let v = tail.first_value * tail.value_ratio.powf(j);
    full + v.powf(p) * (s - start)
}

fn tail_norm_pow(tail: &GeometricTail, q: f64) -> f64 {
    if tail.first_value == 0.0 {
        return 0.0;
    }
    let lr = q * tail.value_ratio.ln() + tail.length_ratio.ln();
    // ratios like 1/2 and 2 cancel only up to rounding of the logarithms
    if lr >= -4.0 * f64::EPSILON {
        return f64::INFINITY;
    }
    tail.first_value.powf(q) * tail.first_length / (-lr.exp_m1())
}

/// Decreasing rearrangement of a weighted sample set: values sorted
/// nonincreasingly, each occupying an interval as long as its weight.
pub fn decreasing_rearrangement(samples: &[(f64, f64)]) -> Result<StepFunction> {
    if let Some(&(v, w)) = samples.iter().find(|(v, w)| !(*w > 0.0) || !(*v >= 0.0)) {
        return Err(Error::invalid(format!(
            "rearrangement samples need value >= 0 and weight > 0, got ({v}, {w})"
        )));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    StepFunction::from_steps(&sorted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{lacunary, monomial};

    #[test]
    fn multiplier_examples() {
        assert_eq!(lp_multiplier(3, 8), 1.0);
        assert_eq!(lp_multiplier(3, 6), 0.5);
        assert_eq!(lp_multiplier(3, 16), 0.0);
        assert_eq!(lp_multiplier(3, 4), 0.0);
        assert_eq!(lp_multiplier(1, 2), 1.0);
        assert_eq!(lp_multiplier(1, 3), 0.5);
        assert_eq!(lp_multiplier(0, 1), 1.0);
        assert_eq!(lp_multiplier(1, 1), 0.0);
    }

    #[test]
    fn multiplier_triangle_vertices() {
        for n in 2..30u32 {
            assert_eq!(lp_multiplier(n, 1 << n), 1.0);
            assert_eq!(lp_multiplier(n, 1 << (n - 1)), 0.0);
            assert_eq!(lp_multiplier(n, 1 << (n + 1)), 0.0);
        }
    }

    #[test]
    fn monomial_lp_norm() {
        for j in 0..9 {
            let f = monomial(1 << j).unwrap();
            for q in [1.0, 1.5, 2.0, 3.0] {
                let v = besov_lp_norm(&f, q).unwrap();
                let expected = (j as f64 / q).exp2();
                assert!((v - expected).abs() < 1e-12 * expected, "j={j} q={q}");
            }
        }
    }

    #[test]
    fn zero_symbol_norms() {
        let z = FourierSymbol::zero();
        assert_eq!(besov_lp_norm(&z, 2.0).unwrap(), 0.0);
        assert_eq!(besov_disc_norm(&z, 2.0, 200, 256).unwrap(), 0.0);
        assert_eq!(besov_si_norm(&z, 2.0, 256).unwrap(), 0.0);
    }

    #[test]
    fn exponent_preconditions() {
        let f = monomial(2).unwrap();
        assert!(besov_lp_norm(&f, 0.9).is_err());
        assert!(besov_disc_norm(&f, 1.0, 200, 256).is_err());
        assert!(besov_si_norm(&f, 1.0, 256).is_err());
        assert!(besov_si_norm(&f, 2.0, 4).is_err());
        assert!(matches!(besov_disc_norm(&f, 2.0, 200, 4), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn lacunary_lp_identity() {
        let c = [0.3, 1.0, 0.0, 2.5, 0.7];
        for p in [1.0, 1.5, 2.0, 3.0] {
            let f = lacunary(p, &c, c.len()).unwrap();
            let expected: f64 = c.iter().map(|v| v.powf(p)).sum();
            let got = besov_lp_norm_pow(&f, p).unwrap();
            assert!((got - expected).abs() < 1e-12, "p={p}: {got} vs {expected}");
        }
    }

    #[test]
    fn constant_term_is_ignored() {
        let f = FourierSymbol::from_real([(0, 5.0), (4, 1.0)]).unwrap();
        assert!((besov_lp_norm(&f, 2.0).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn disc_norm_of_z_squared() {
        let f = monomial(2).unwrap();
        let v = besov_disc_norm(&f, 2.0, 200, 256).unwrap();
        let expected = (4.0 * PI / 3.0).sqrt();
        assert!((v - expected).abs() < 1e-10 * expected, "{v} vs {expected}");
        assert_eq!(besov_disc_norm(&monomial(1).unwrap(), 2.0, 200, 256).unwrap(), 0.0);
    }

    #[test]
    fn si_norm_examples() {
        let v1 = besov_si_norm(&monomial(1).unwrap(), 2.0, 256).unwrap();
        assert!((v1 - 1.0).abs() < 1e-12);
        let v2 = besov_si_norm(&monomial(2).unwrap(), 2.0, 256).unwrap();
        assert!((v2 - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rearrangement_examples() {
        let s = decreasing_rearrangement(&[(2.0, 1.0), (5.0, 1.0)]).unwrap();
        assert_eq!(s.values(), &[5.0, 2.0]);
        assert_eq!(s.breakpoints(), &[0.0, 1.0, 2.0]);
        let one = decreasing_rearrangement(&[(1.0, 3.0)]).unwrap();
        assert_eq!(one.breakpoints(), &[0.0, 3.0]);
        assert!(decreasing_rearrangement(&[(1.0, -1.0)]).is_err());
    }

    #[test]
    fn lacunary_phi_matches_dyadic_steps() {
        // values 2^{-j/p} c_j on [2^j - 1, 2^{j+1} - 1)
        let p = 2.0;
        let c = [1.0, 1.0, 1.0, 1.0, 1.0];
        let samples: Vec<(f64, f64)> = c
            .iter()
            .enumerate()
            .map(|(j, &cj)| ((-(j as f64) / p).exp2() * cj, (j as f64).exp2()))
            .collect();
        let s = decreasing_rearrangement(&samples).unwrap();
        for j in 0..c.len() {
            let start = (j as f64).exp2() - 1.0;
            assert_eq!(s.breakpoints()[j], start);
            assert!((s.value_at(start + 0.25) - (-(j as f64) / p).exp2()).abs() < 1e-15);
        }
    }

    #[test]
    fn geometric_tail_closed_forms() {
        // v_j = 2^{-j} on length 2^j: ∫_0^{2^J - 1} v = J, ‖v‖_{1+h}^{1+h} = 1/(1-2^{-h})
        let s = StepFunction::from_steps(&[])
            .unwrap()
            .with_tail(GeometricTail {
                first_value: 1.0,
                first_length: 1.0,
                value_ratio: 0.5,
                length_ratio: 2.0,
            })
            .unwrap();
        for j in [1, 5, 20, 60] {
            let t = (j as f64).exp2() - 1.0;
            assert!((s.integral_pow(1.0, t) - j as f64).abs() < 1e-9 * j as f64);
        }
        let h = 2f64.powi(-10);
        let expected = 1.0 / (1.0 - (-h).exp2());
        assert!(((s.norm_pow(1.0 + h) - expected) / expected).abs() < 1e-12);
        assert!(s.norm_pow(1.0).is_infinite(), "{}", s.norm_pow(1.0));
        assert_eq!(s.value_at(2.5), 0.5);
        assert_eq!(s.value_at(3.0), 0.25);
    }
}
