//! Experiment configurations: one JSON document per run.

use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Besov,
    Hankel,
    JuwCheck,
    Extrapolate,
    Dixmier,
    Witness,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Besov => "besov",
            Kind::Hankel => "hankel",
            Kind::JuwCheck => "juw-check",
            Kind::Extrapolate => "extrapolate",
            Kind::Dixmier => "dixmier",
            Kind::Witness => "witness",
        }
    }
}

/// `{"kind": ..., "params": {...}, "out": "dir", "seed": 0}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    #[serde(default = "empty_object")]
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

impl ExperimentConfig {
    pub fn new(kind: Kind, params: Value) -> Self {
        Self { kind, params, out: None, seed: 0 }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::invalid(format!("bad config: {e}")))
    }
}

/// Where a symbol comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    /// JSON file `{"coeffs": [[k, re, im], ...]}`.
    File(PathBuf),
    /// Inline `[k, re, im]` triples.
    Coeffs(Vec<(usize, f64, f64)>),
    Monomial(usize),
    /// `Σ 2^{-j/p} c_j z^{2^j}`.
    Lacunary { p: f64, c: Vec<f64> },
    /// Real coefficients uniform in `[-1, 1]` on `1..=degree`, drawn from the
    /// config seed.
    Random { degree: usize },
}

/// Where a singular-value sequence comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectrumSpec {
    /// CSV with `μ_k` in the last column; a non-numeric first row is a header.
    Csv {
        path: PathBuf,
        #[serde(default)]
        exact: bool,
    },
    Values {
        values: Vec<f64>,
        #[serde(default)]
        exact: bool,
    },
    /// `scale · (k+1)^{-exponent}`, infinite unless `terms` truncates it.
    Power {
        #[serde(default = "one")]
        scale: f64,
        exponent: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        terms: Option<usize>,
    },
    /// Singular values of the `dim × dim` Hankel truncation of a symbol.
    Hankel {
        symbol: SymbolSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Lp,
    Disc,
    Si,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BesovParams {
    pub symbol: SymbolSpec,
    #[serde(default = "default_norm")]
    pub norm: NormKind,
    pub q: f64,
    /// Angular (disc) or bitorus (SI) grid; `max(256, 4·degree)` if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial_nodes: Option<usize>,
}

fn default_norm() -> NormKind {
    NormKind::Lp
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HankelParams {
    pub symbol: SymbolSpec,
    /// Truncation dimension; the symbol degree if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default = "default_schatten_q")]
    pub q: Vec<f64>,
}

fn default_schatten_q() -> Vec<f64> {
    vec![1.0, 2.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JuwParams {
    pub symbol: SymbolSpec,
    pub p: f64,
    #[serde(default = "default_juw_grid")]
    pub grid: usize,
}

pub const DEFAULT_JUW_GRID: usize = 2048;

fn default_juw_grid() -> usize {
    DEFAULT_JUW_GRID
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtrapolateParams {
    #[serde(default = "default_psi")]
    pub psi: String,
    #[serde(default = "one")]
    pub p: f64,
    /// Smallest `h`, a power of two; the grid is `2^{-1} … hmin`.
    #[serde(default = "default_hmin")]
    pub hmin: f64,
    pub spectrum: SpectrumSpec,
}

fn default_psi() -> String {
    "log".into()
}

pub const DEFAULT_HMIN: f64 = 1.0 / 65536.0;

fn default_hmin() -> f64 {
    DEFAULT_HMIN
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DixmierMethod {
    /// Partial-sum ratios of the spectrum on `t = 10^{1..decades}`.
    Spectrum,
    /// Extrapolation of `p+h` norms, of a spectrum or the Besov curve of a symbol.
    Extrapolate,
    /// Exact trace `Tr |H|^p` of a polynomial symbol from the double-circle
    /// identity, next to its (vanishing) Dixmier bracket.
    Juw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DixmierParams {
    #[serde(default = "default_method")]
    pub method: DixmierMethod,
    #[serde(default = "default_psi")]
    pub psi: String,
    #[serde(default = "one")]
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolSpec>,
    #[serde(default = "default_decades")]
    pub decades: u32,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_hmin")]
    pub hmin: f64,
    #[serde(default = "default_juw_grid")]
    pub grid: usize,
}

fn default_method() -> DixmierMethod {
    DixmierMethod::Spectrum
}

fn default_decades() -> u32 {
    htl_core::dixmier::DEFAULT_DECADES
}

fn default_tol() -> f64 {
    htl_core::dixmier::DEFAULT_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum H0Kind {
    Sin,
    Cos,
    Const,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessParams {
    #[serde(default = "default_h0")]
    pub h0: H0Kind,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
    #[serde(default)]
    pub offset: f64,
    #[serde(default = "default_psi")]
    pub psi: String,
    #[serde(default = "one")]
    pub p: f64,
    #[serde(default = "default_tmin")]
    pub tmin: f64,
    #[serde(default = "default_tmax")]
    pub tmax: f64,
    #[serde(default = "default_per_decade")]
    pub per_decade: usize,
    /// Lacunary terms of the witness symbol.
    #[serde(default = "default_terms", rename = "J")]
    pub terms: usize,
}

fn default_h0() -> H0Kind {
    H0Kind::Sin
}

fn default_tmin() -> f64 {
    1e2
}

fn default_tmax() -> f64 {
    1e6
}

fn default_per_decade() -> usize {
    20
}

fn default_terms() -> usize {
    12
}

/// Parses a kind-specific block, rejecting unknown or ill-typed fields.
pub fn parse_params<T: for<'de> Deserialize<'de>>(kind: Kind, params: &Value) -> CliResult<T> {
    T::deserialize(params)
        .map_err(|e| CliError::invalid(format!("bad {} parameters: {e}", kind.name())))
}
