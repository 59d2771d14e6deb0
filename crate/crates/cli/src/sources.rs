//! Turning symbol and spectrum specifications into core objects.

use std::fs;
use std::path::Path;

use htl_core::hankel::{hankel_spectrum, SingularSpectrum};
use htl_core::lorentz::{PowerSpectrum, Rearrangement};
use htl_core::symbols::{lacunary, monomial, FourierSymbol};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{SpectrumSpec, SymbolSpec};
use crate::{CliError, CliResult};

/// Largest degree of a random fixture.
pub const MAX_RANDOM_DEGREE: usize = 16;

/// Real coefficients uniform in `[-1, 1]` at every frequency `1..=degree`.
pub fn random_symbol<R: Rng>(rng: &mut R, degree: usize) -> CliResult<FourierSymbol> {
    if degree == 0 || degree > MAX_RANDOM_DEGREE {
        return Err(CliError::invalid(format!(
            "random symbol degree must lie in 1..={MAX_RANDOM_DEGREE}, got {degree}"
        )));
    }
    let coeffs: Vec<(usize, f64)> = (1..=degree).map(|k| (k, rng.random_range(-1.0..=1.0))).collect();
    Ok(FourierSymbol::from_real(coeffs)?)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn load_symbol(spec: &SymbolSpec, seed: u64) -> CliResult<FourierSymbol> {
    let f = match spec {
        SymbolSpec::File(path) => {
            let text = read(path)?;
            serde_json::from_str(&text).map_err(|e| {
                CliError::invalid(format!("bad symbol file {}: {e}", path.display()))
            })?
        }
        SymbolSpec::Coeffs(triples) => FourierSymbol::from_coeffs(
            triples.iter().map(|&(k, re, im)| (k, Complex64::new(re, im))),
        )?,
        SymbolSpec::Monomial(n) => monomial(*n)?,
        SymbolSpec::Lacunary { p, c } => lacunary(*p, c, c.len())?,
        SymbolSpec::Random { degree } => random_symbol(&mut seeded_rng(seed), *degree)?,
    };
    Ok(f)
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))
}

/// A loaded spectrum: finite (possibly truncated) or an infinite power law.
#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum {
    Finite(SingularSpectrum),
    Power(PowerSpectrum),
}

impl Spectrum {
    pub fn as_rearrangement(&self) -> &dyn Rearrangement {
        match self {
            Spectrum::Finite(s) => s,
            Spectrum::Power(s) => s,
        }
    }
}

pub fn load_spectrum(spec: &SpectrumSpec, seed: u64) -> CliResult<Spectrum> {
    match spec {
        SpectrumSpec::Csv { path, exact } => {
            let values = parse_spectrum_csv(&read(path)?)
                .map_err(|e| CliError::invalid(format!("bad spectrum file {}: {e}", path.display())))?;
            finite(values, *exact)
        }
        SpectrumSpec::Values { values, exact } => finite(values.clone(), *exact),
        SpectrumSpec::Power { scale, exponent, terms } => {
            let s = PowerSpectrum::new(*scale, *exponent)?;
            Ok(match terms {
                Some(n) => Spectrum::Finite(s.truncate(*n)),
                None => Spectrum::Power(s),
            })
        }
        SpectrumSpec::Hankel { symbol, dim } => {
            let f = load_symbol(symbol, seed)?;
            let n = dim.unwrap_or(f.degree().max(1));
            Ok(Spectrum::Finite(hankel_spectrum(&f, n)?))
        }
    }
}

fn finite(values: Vec<f64>, exact: bool) -> CliResult<Spectrum> {
    let n = values.len();
    Ok(Spectrum::Finite(SingularSpectrum::new(values, n, exact)?))
}

/// `μ_k` from the last column of each record. A first record whose last
/// field is not a number is taken as a header.
pub fn parse_spectrum_csv(text: &str) -> Result<Vec<f64>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let Some(field) = record.iter().next_back().filter(|f| !f.is_empty()) else {
            continue;
        };
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if i == 0 => continue,
            Err(_) => return Err(format!("line {}: not a number: {field:?}", i + 1)),
        }
    }
    Ok(values)
}
