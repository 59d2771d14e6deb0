//! Holomorphic symbols on the unit circle, stored by their Fourier coefficients.
//!
//! A [`FourierSymbol`] is a finite map `k -> f̂(k)` over nonnegative
//! frequencies. Zero coefficients are never stored, so the key set is the
//! support and `degree` is its maximum.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible frequency.
pub const MAX_DEGREE: usize = 1 << 23;

/// Largest number of lacunary terms accepted by [`lacunary`].
pub const MAX_LACUNARY_TERMS: usize = 24;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierSymbol {
    coeffs: BTreeMap<usize, Complex64>,
}

impl FourierSymbol {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a symbol from `(k, f̂(k))` pairs. Repeated frequencies are summed
    /// and exact zeros dropped.
    pub fn from_coeffs<I>(coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (k, c) in coeffs {
            if k > MAX_DEGREE {
                return Err(Error::resource(format!(
                    "frequency {k} exceeds the degree cap {MAX_DEGREE}"
                )));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::invalid(format!("non-finite coefficient at k={k}")));
            }
            *map.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| c.norm_sqr() != 0.0);
        Ok(Self { coeffs: map })
    }

    pub fn from_real<I>(coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        Self::from_coeffs(coeffs.into_iter().map(|(k, c)| (k, Complex64::new(c, 0.0))))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (usize, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(|c| c.im == 0.0)
    }

    /// Drops the constant term. Constants do not change any Hankel or Besov
    /// quantity except the Littlewood-Paley block `n = 0`.
    pub fn normalized(&self) -> Self {
        if let Some(c) = self.coeffs.get(&0) {
            log::warn!("dropping constant coefficient f̂(0) = {c} from analysis input");
            let mut coeffs = self.coeffs.clone();
            coeffs.remove(&0);
            Self { coeffs }
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_coeffs(self.iter().map(|(k, c)| (k, c * s))).expect("scaling keeps the degree")
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_coeffs(self.iter().chain(other.iter())).expect("sum keeps the degree")
    }

    /// Sum of `|f̂(k)|` over all `k > n`.
    pub fn tail_l1(&self, n: usize) -> f64 {
        self.coeffs.range(n + 1..).map(|(_, c)| c.norm()).sum()
    }

    /// Samples `f(e^{iθ_j})` at `θ_j = 2π (j + shift) / m`, `j = 0..m`.
    pub fn sample_circle(&self, m: usize, shift: f64) -> Vec<Complex64> {
        circle_samples(self.iter(), m, shift)
    }
}

/// `f̂(n) = 1`, all other coefficients zero.
pub fn monomial(n: usize) -> Result<FourierSymbol> {
    if n == 0 {
        return Err(Error::invalid(
            "monomial degree must be at least 1 (constant symbols give a zero Hankel operator)",
        ));
    }
    FourierSymbol::from_real([(n, 1.0)])
}

/// Truncated lacunary series `Σ_{j<J} 2^{-j/p} c_j z^{2^j}`.
pub fn lacunary(p: f64, c: &[f64], terms: usize) -> Result<FourierSymbol> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::invalid(format!("lacunary exponent p must be >= 1, got {p}")));
    }
    if terms == 0 {
        return Err(Error::invalid("lacunary series needs at least one term"));
    }
    if terms > MAX_LACUNARY_TERMS {
        return Err(Error::resource(format!(
            "{terms} lacunary terms requested; at most {MAX_LACUNARY_TERMS} fit under the degree cap"
        )));
    }
    if c.len() < terms {
        return Err(Error::invalid(format!(
            "coefficient sequence has {} entries, {terms} required",
            c.len()
        )));
    }
    if let Some((j, v)) = c[..terms].iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
        return Err(Error::invalid(format!("lacunary coefficient c_{j} = {v} is negative")));
    }
    FourierSymbol::from_real(
        c[..terms]
            .iter()
            .enumerate()
            .map(|(j, &cj)| (1usize << j, (-(j as f64) / p).exp2() * cj)),
    )
}

/// `Σ_k f̂(k) e^{ikθ}` by Horner's rule in `e^{iθ}`, skipping gaps with
/// integer powers.
pub fn evaluate(f: &FourierSymbol, theta: f64) -> Complex64 {
    let z = Complex64::from_polar(1.0, theta);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev: Option<usize> = None;
    for (k, c) in f.iter().rev() {
        if let Some(p) = prev {
            acc *= z.powu((p - k) as u32);
        }
        acc += c;
        prev = Some(k);
    }
    match prev {
        Some(p) if p > 0 => acc * z.powu(p as u32),
        _ => acc,
    }
}

/// Coefficients of `f''`: `k (k-1) f̂(k)` moved to index `k - 2`.
pub fn second_derivative(f: &FourierSymbol) -> FourierSymbol {
    FourierSymbol::from_coeffs(
        f.iter()
            .filter(|&(k, _)| k >= 2)
            .map(|(k, c)| (k - 2, c * (k as f64 * (k as f64 - 1.0)))),
    )
    .expect("derivative lowers the degree")
}

/// Values of the trigonometric polynomial `Σ a_k e^{ikθ}` on the uniform grid
/// `θ_j = 2π (j + shift) / m`. Frequencies are folded modulo `m`, which is
/// exact for sampling.
pub fn circle_samples<I>(coeffs: I, m: usize, shift: f64) -> Vec<Complex64>
where
    I: IntoIterator<Item = (usize, Complex64)>,
{
    assert!(m > 0, "grid size must be positive");
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (k, c) in coeffs {
        let phase = if shift == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            // the phase depends on k itself, not on k mod m; reduce k*shift
            // modulo m before scaling to keep it accurate
            let turns = ((k as f64 * shift) % m as f64) / m as f64;
            Complex64::from_polar(1.0, 2.0 * PI * turns.fract())
        };
        buf[k % m] += c * phase;
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(m).process(&mut buf);
    buf
}

#[derive(Serialize, Deserialize)]
struct SymbolJson {
    coeffs: Vec<(usize, f64, f64)>,
}

impl Serialize for FourierSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymbolJson {
            coeffs: self.iter().map(|(k, c)| (k, c.re, c.im)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FourierSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SymbolJson::deserialize(d)?;
        FourierSymbol::from_coeffs(
            raw.coeffs
                .into_iter()
                .map(|(k, re, im)| (k, Complex64::new(re, im))),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomials() {
        let m1 = monomial(1).unwrap();
        assert_eq!(m1.iter().collect::<Vec<_>>(), vec![(1, c(1.0, 0.0))]);
        let m3 = monomial(3).unwrap();
        assert_eq!(m3.iter().collect::<Vec<_>>(), vec![(3, c(1.0, 0.0))]);
        assert_eq!(m3.degree(), 3);
        assert!(matches!(monomial(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn lacunary_examples() {
        let f = lacunary(1.0, &[1.0, 1.0], 2).unwrap();
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![(1, c(1.0, 0.0)), (2, c(0.5, 0.0))]);
        let g = lacunary(2.0, &[1.0, 0.0, 1.0], 3).unwrap();
        assert_eq!(g.support().collect::<Vec<_>>(), vec![1, 4]);
        assert_eq!(g.coeff(4), c(0.5, 0.0));
        assert_eq!(g.degree(), 4);
    }

    #[test]
    fn lacunary_rejects_bad_input() {
        assert!(matches!(lacunary(1.0, &[1.0, -0.5], 2), Err(Error::InvalidArgument(_))));
        assert!(matches!(lacunary(1.0, &[1.0; 25], 25), Err(Error::Resource(_))));
        assert!(matches!(lacunary(0.5, &[1.0], 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn degree_cap_is_a_resource_error() {
        let err = FourierSymbol::from_real([(MAX_DEGREE + 1, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn evaluation_examples() {
        let m2 = monomial(2).unwrap();
        assert!((evaluate(&m2, 0.0) - c(1.0, 0.0)).norm() < 1e-15);
        let m1 = monomial(1).unwrap();
        assert!((evaluate(&m1, PI) - c(-1.0, 0.0)).norm() < 1e-15);
        let f = FourierSymbol::from_real([(1, 1.0), (2, 1.0)]).unwrap();
        assert!((evaluate(&f, PI / 2.0) - c(-1.0, 1.0)).norm() < 1e-15);
        assert_eq!(evaluate(&FourierSymbol::zero(), 1.3), c(0.0, 0.0));
    }

    #[test]
    fn second_derivative_examples() {
        let d2 = second_derivative(&monomial(2).unwrap());
        assert_eq!(d2.iter().collect::<Vec<_>>(), vec![(0, c(2.0, 0.0))]);
        let d3 = second_derivative(&monomial(3).unwrap());
        assert_eq!(d3.iter().collect::<Vec<_>>(), vec![(1, c(6.0, 0.0))]);
        assert!(second_derivative(&monomial(1).unwrap()).is_zero());
    }

    #[test]
    fn normalization_drops_constant() {
        let f = FourierSymbol::from_real([(0, 3.0), (2, 1.0)]).unwrap();
        let g = f.normalized();
        assert_eq!(g.support().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn circle_samples_match_pointwise_evaluation() {
        let f = FourierSymbol::from_coeffs([(1, c(0.3, -0.2)), (5, c(1.0, 0.5)), (17, c(-0.7, 0.0))])
            .unwrap();
        for (m, shift) in [(64, 0.0), (64, 0.5), (8, 0.5)] {
            let samples = f.sample_circle(m, shift);
            for (j, s) in samples.iter().enumerate() {
                let theta = 2.0 * PI * (j as f64 + shift) / m as f64;
                assert!((s - evaluate(&f, theta)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn json_round_trip_and_zero_dropping() {
        let f: FourierSymbol =
            serde_json::from_str(r#"{"coeffs": [[1, 1.0, 0.0], [3, 0.0, 0.0], [4, 0.5, -1.5]]}"#)
                .unwrap();
        assert_eq!(f.support().collect::<Vec<_>>(), vec![1, 4]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"coeffs":[[1,1.0,0.0],[4,0.5,-1.5]]}"#);
    }
}
