//! Hankel matrices `(f̂(j+k+1))_{j,k}` of holomorphic symbols and their
//! singular spectra.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbols::FourierSymbol;

/// Largest truncation dimension accepted by [`hankel_matrix`].
pub const MAX_DIMENSION: usize = 1 << 13;

/// `N × N` truncation of the Hankel operator with symbol `f`.
///
/// Only the `2N - 1` antidiagonal values are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelMatrix {
    dimension: usize,
    antidiagonals: Vec<Complex64>,
    degree: usize,
}

/// Builds the truncation `A[j][k] = f̂(j+k+1)`, `0 ≤ j, k < n`.
pub fn hankel_matrix(f: &FourierSymbol, n: usize) -> Result<HankelMatrix> {
    if n == 0 {
        return Err(Error::invalid("Hankel dimension must be at least 1"));
    }
    if n > MAX_DIMENSION {
        return Err(Error::resource(format!(
            "Hankel dimension {n} exceeds the dense SVD bound {MAX_DIMENSION}"
        )));
    }
    let antidiagonals = (1..2 * n).map(|k| f.coeff(k)).collect();
    Ok(HankelMatrix { dimension: n, antidiagonals, degree: f.degree() })
}

impl HankelMatrix {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Degree of the symbol the matrix was built from.
    pub fn symbol_degree(&self) -> usize {
        self.degree
    }

    /// True when the truncation already contains the whole operator.
    pub fn is_exact(&self) -> bool {
        self.dimension >= self.degree
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        assert!(j < self.dimension && k < self.dimension, "index out of range");
        self.antidiagonals[j + k]
    }

    pub fn is_real(&self) -> bool {
        self.antidiagonals.iter().all(|c| c.im == 0.0)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dimension;
        DMatrix::from_fn(n, n, |j, k| self.antidiagonals[j + k])
    }

    pub fn to_dense_real(&self) -> Option<DMatrix<f64>> {
        if !self.is_real() {
            return None;
        }
        let n = self.dimension;
        Some(DMatrix::from_fn(n, n, |j, k| self.antidiagonals[j + k].re))
    }
}

/// Nonincreasing list of nonnegative singular values with truncation metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularSpectrum {
    values: Vec<f64>,
    truncation: usize,
    exact: bool,
}

impl SingularSpectrum {
    /// Validates and wraps `values`; `truncation` is the matrix dimension they
    /// came from and `exact` says whether they are the complete spectrum.
    pub fn new(values: Vec<f64>, truncation: usize, exact: bool) -> Result<Self> {
        if values.len() > truncation {
            return Err(Error::invalid(format!(
                "{} singular values exceed the truncation dimension {truncation}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::invalid(format!("singular values must be finite and >= 0, got {v}")));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::invalid("singular values must be nonincreasing"));
        }
        Ok(Self { values, truncation, exact })
    }

    /// A complete finite spectrum.
    pub fn finite(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        Self::new(values, n, true)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// `μ_k`, zero past the stored values.
    pub fn get(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }

    /// Number of values above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.values.partition_point(|&v| v > tol)
    }
}

/// Singular values of `a`, sorted nonincreasingly.
///
/// Real symbols give real symmetric matrices, whose singular values are the
/// absolute eigenvalues; complex symbols go through a Golub-Kahan SVD.
pub fn singular_values(a: &HankelMatrix) -> Result<SingularSpectrum> {
    let mut values: Vec<f64> = match a.to_dense_real() {
        Some(m) => m.symmetric_eigenvalues().iter().map(|v| v.abs()).collect(),
        None => a.to_dense().singular_values().iter().copied().collect(),
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::numerical("singular value decomposition produced non-finite values"));
    }
    values.sort_by(|x, y| y.total_cmp(x));
    SingularSpectrum::new(values, a.dimension(), a.is_exact())
}

/// Singular values of the `n`-truncation of the Hankel operator with symbol `f`.
pub fn hankel_spectrum(f: &FourierSymbol, n: usize) -> Result<SingularSpectrum> {
    singular_values(&hankel_matrix(f, n)?)
}

/// `Σ μ_k^q`.
pub fn schatten_norm_pow(s: &SingularSpectrum, q: f64) -> Result<f64> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::invalid(format!("Schatten exponent must be >= 1, got {q}")));
    }
    // ascending order adds small terms first
    Ok(s.values().iter().rev().map(|v| v.powf(q)).sum())
}

/// Schatten norm `(Σ μ_k^q)^{1/q}`.
pub fn schatten_norm(s: &SingularSpectrum, q: f64) -> Result<f64> {
    Ok(schatten_norm_pow(s, q)?.powf(1.0 / q))
}

/// Smallest `N` for which the coefficients beyond `N` have `ℓ¹` mass at most
/// `tol`; the degree for polynomial symbols, `1` for the zero symbol.
pub fn truncation_dimension(f: &FourierSymbol, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    // walk the support from the top, accumulating the tail mass
    let mut tail = 0.0;
    for (k, c) in f.iter().rev() {
        tail += c.norm();
        if tail > tol {
            return Ok(k.max(1));
        }
    }
    Ok(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{lacunary, monomial};

    #[test]
    fn matrix_examples() {
        let a = hankel_matrix(&monomial(1).unwrap(), 2).unwrap();
        assert_eq!(a.entry(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(a.entry(0, 1), Complex64::new(0.0, 0.0));
        assert_eq!(a.entry(1, 1), Complex64::new(0.0, 0.0));
        let b = hankel_matrix(&monomial(3).unwrap(), 3).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let expected = if j + k == 2 { 1.0 } else { 0.0 };
                assert_eq!(b.entry(j, k).re, expected);
            }
        }
        assert!(hankel_matrix(&monomial(3).unwrap(), 0).is_err());
        assert!(matches!(
            hankel_matrix(&monomial(3).unwrap(), MAX_DIMENSION + 1),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn monomial_spectrum() {
        for n in [1, 2, 5, 9] {
            let s = hankel_spectrum(&monomial(n).unwrap(), n + 3).unwrap();
            assert!(s.is_exact());
            for (k, v) in s.values().iter().enumerate() {
                let expected = if k < n { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-14);
            }
            for q in [1.0, 2.0, 3.5] {
                let norm = schatten_norm(&s, q).unwrap();
                assert!((norm - (n as f64).powf(1.0 / q)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn complex_symbol_uses_svd() {
        let f = FourierSymbol::from_coeffs([(1, Complex64::new(0.0, 2.0))]).unwrap();
        let s = hankel_spectrum(&f, 3).unwrap();
        assert!((s.get(0) - 2.0).abs() < 1e-14);
        assert!(s.get(1).abs() < 1e-14);
    }

    #[test]
    fn spectrum_invariants() {
        assert!(SingularSpectrum::finite(vec![3.0, 4.0]).is_err());
        assert!(SingularSpectrum::finite(vec![1.0, -0.5]).is_err());
        assert!(SingularSpectrum::new(vec![1.0, 1.0], 1, true).is_err());
        let z = SingularSpectrum::finite(vec![0.0; 4]).unwrap();
        assert_eq!(schatten_norm(&z, 2.0).unwrap(), 0.0);
        assert!(schatten_norm(&z, 0.5).is_err());
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(truncation_dimension(&monomial(5).unwrap(), 1e-12).unwrap(), 5);
        let f = lacunary(1.0, &[1.0, 1.0, 1.0], 3).unwrap();
        assert_eq!(truncation_dimension(&f, 1e-12).unwrap(), 4);
        assert_eq!(truncation_dimension(&FourierSymbol::zero(), 0.1).unwrap(), 1);
        // tolerance above the top coefficient lets the truncation drop it
        let g = FourierSymbol::from_real([(1, 1.0), (8, 1e-3)]).unwrap();
        assert_eq!(truncation_dimension(&g, 1e-2).unwrap(), 1);
        assert!(truncation_dimension(&g, 0.0).is_err());
    }
}
