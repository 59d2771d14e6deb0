//! Dispatch of an [`ExperimentConfig`] to the core modules.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use htl_core::besov::{
    besov_disc_norm_estimate, besov_lp_norm_estimate, besov_si_norm_estimate, default_grid,
    DEFAULT_RADIAL_NODES,
};
use htl_core::dixmier::{
    extrapolated_trace_bracket, juw_check, juw_constant, measurability_report, trace_bracket,
    BesovCurve, TraceBracket, TraceGrid, SURROGATE_DISCLAIMER,
};
use htl_core::hankel::{hankel_spectrum, schatten_norm};
use htl_core::lorentz::{dyadic_h_grid, extrapolation_functional, ProfileCurve, PsiFunction};
use htl_core::witness::{oscillation_report, witness_coefficients, H0Family, H0Spec};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::*;
use crate::sources::{load_spectrum, load_symbol};
use crate::{CliError, CliResult};

/// A finished experiment: the JSON document and, for series, a CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub kind: Kind,
    pub json: Value,
    pub csv: Option<String>,
}

impl Report {
    pub fn json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("report values serialize");
        s.push('\n');
        s
    }
}

struct Outcome {
    params: Value,
    result: Value,
    csv: Option<String>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Validates the kind-specific block, runs the experiment and wraps the result
/// with the tool version, the resolved config and the surrogate disclaimer.
pub fn run(config: &ExperimentConfig) -> CliResult<Report> {
    let seed = config.seed;
    let p = &config.params;
    let outcome = match config.kind {
        Kind::Besov => besov(parse_params(config.kind, p)?, seed)?,
        Kind::Hankel => hankel(parse_params(config.kind, p)?, seed)?,
        Kind::JuwCheck => juw(parse_params(config.kind, p)?, seed)?,
        Kind::Extrapolate => extrapolate(parse_params(config.kind, p)?, seed)?,
        Kind::Dixmier => dixmier(parse_params(config.kind, p)?, seed)?,
        Kind::Witness => witness(parse_params(config.kind, p)?)?,
    };
    let json = json!({
        "tool": "htl",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "kind": config.kind.name(),
        "config": {
            "kind": config.kind.name(),
            "seed": seed,
            "params": outcome.params,
        },
        "disclaimer": SURROGATE_DISCLAIMER,
        "result": outcome.result,
    });
    Ok(Report { kind: config.kind, json, csv: outcome.csv })
}

/// Writes `<kind>.json` (and `<kind>.csv`) into `out`, or the JSON to stdout.
pub fn write_report(report: &Report, out: Option<&Path>) -> CliResult<()> {
    let Some(dir) = out else {
        print!("{}", report.json_text());
        return Ok(());
    };
    let io = |e: std::io::Error| CliError::invalid(format!("cannot write to {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let name = report.kind.name();
    fs::write(dir.join(format!("{name}.json")), report.json_text()).map_err(io)?;
    if let Some(csv) = &report.csv {
        fs::write(dir.join(format!("{name}.csv")), csv).map_err(io)?;
    }
    Ok(())
}

fn csv_table<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = [f64; N]>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string())).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

fn parse_psi(label: &str) -> CliResult<PsiFunction> {
    Ok(label.parse::<PsiFunction>()?)
}

fn h_grid(hmin: f64) -> CliResult<Vec<f64>> {
    let depth = -hmin.log2();
    if !(hmin > 0.0 && hmin <= 0.5) || depth.fract() != 0.0 || depth > 60.0 {
        return Err(CliError::invalid(format!(
            "hmin must be a power of two in [2^-60, 1/2], got {hmin}"
        )));
    }
    Ok(dyadic_h_grid(depth as u32))
}

fn besov(mut params: BesovParams, seed: u64) -> CliResult<Outcome> {
    let f = load_symbol(&params.symbol, seed)?;
    let estimate = match params.norm {
        NormKind::Lp => {
            params.grid = None;
            params.radial_nodes = None;
            besov_lp_norm_estimate(&f, params.q)?
        }
        NormKind::Disc => {
            let grid = *params.grid.get_or_insert(default_grid(&f));
            let radial = *params.radial_nodes.get_or_insert(DEFAULT_RADIAL_NODES);
            besov_disc_norm_estimate(&f, params.q, radial, grid)?
        }
        NormKind::Si => {
            params.radial_nodes = None;
            let grid = *params.grid.get_or_insert(default_grid(&f));
            besov_si_norm_estimate(&f, params.q, grid)?
        }
    };
    Ok(Outcome {
        params: to_value(&params),
        result: json!({
            "symbol": f,
            "norm_value": estimate.norm_value,
            "quadrature_error_estimate": estimate.quadrature_error_estimate,
        }),
        csv: None,
    })
}

fn hankel(mut params: HankelParams, seed: u64) -> CliResult<Outcome> {
    let f = load_symbol(&params.symbol, seed)?;
    let n = *params.dim.get_or_insert(f.degree().max(1));
    let s = hankel_spectrum(&f, n)?;
    let mut schatten = BTreeMap::new();
    for &q in &params.q {
        schatten.insert(q.to_string(), schatten_norm(&s, q)?);
    }
    let csv = csv_table(["k", "mu"], s.values().iter().enumerate().map(|(k, &v)| [k as f64, v]));
    Ok(Outcome {
        params: to_value(&params),
        result: json!({
            "symbol": f,
            "dimension": n,
            "exact": s.is_exact(),
            "singular_values": s.values(),
            "schatten": schatten,
        }),
        csv: Some(csv),
    })
}

fn juw(params: JuwParams, seed: u64) -> CliResult<Outcome> {
    let c = juw_constant(params.p)?;
    let f = load_symbol(&params.symbol, seed)?;
    let check = juw_check(&f, params.p, params.grid)?;
    Ok(Outcome {
        params: to_value(&params),
        result: json!({
            "symbol": f,
            "c_p": c,
            "p": check.p,
            "lhs": check.lhs,
            "rhs": check.rhs,
            "relerr": check.relerr,
        }),
        csv: None,
    })
}

fn extrapolate(params: ExtrapolateParams, seed: u64) -> CliResult<Outcome> {
    let psi = parse_psi(&params.psi)?;
    let grid = h_grid(params.hmin)?;
    let spectrum = load_spectrum(&params.spectrum, seed)?;
    let ex = extrapolation_functional(
        &ProfileCurve(spectrum.as_rearrangement()),
        &psi,
        params.p,
        &grid,
    )?;
    let csv = csv_table(["h", "v"], ex.per_h.iter().map(|&(h, v)| [h, v]));
    Ok(Outcome {
        params: to_value(&params),
        result: json!({
            "sup": ex.sup_value,
            "tail_limsup": ex.tail_limsup,
            "per_h": ex.per_h,
        }),
        csv: Some(csv),
    })
}

fn bracket_result(b: &TraceBracket, method: DixmierMethod, grid: Value) -> Value {
    json!({
        "method": method,
        "bracket": {
            "lo": b.lo,
            "hi": b.hi,
            "tol": b.tol,
            "collapsed": b.collapsed,
            "lower_bound_only": b.lower_bound_only,
            "finite_rank": b.finite_rank,
        },
        "verdict": measurability_report(b),
        "grid": grid,
        "trend": {"slope": b.trend_slope, "samples": b.samples},
    })
}

fn dixmier(params: DixmierParams, seed: u64) -> CliResult<Outcome> {
    let psi = parse_psi(&params.psi)?;
    let method = params.method;
    let (result, samples) = match method {
        DixmierMethod::Spectrum => {
            let spectrum = match (&params.spectrum, &params.symbol) {
                (Some(s), None) => load_spectrum(s, seed)?,
                (None, Some(sym)) => load_spectrum(
                    &SpectrumSpec::Hankel { symbol: sym.clone(), dim: None },
                    seed,
                )?,
                _ => return Err(CliError::invalid("method spectrum needs exactly one of spectrum or symbol")),
            };
            let grid = TraceGrid { decades: params.decades, tol: params.tol };
            let b = trace_bracket(spectrum.as_rearrangement(), &psi, params.p, &grid)?;
            let g = json!({"points": grid.points(), "window": b.window});
            (bracket_result(&b, method, g), b.samples)
        }
        DixmierMethod::Extrapolate => {
            let h = h_grid(params.hmin)?;
            let b = match (&params.spectrum, &params.symbol) {
                (Some(s), None) => {
                    let spectrum = load_spectrum(s, seed)?;
                    let curve = ProfileCurve(spectrum.as_rearrangement());
                    extrapolated_trace_bracket(&curve, &psi, params.p, &h, params.tol)?
                }
                (None, Some(sym)) => {
                    let f = load_symbol(sym, seed)?;
                    extrapolated_trace_bracket(&BesovCurve { symbol: &f }, &psi, params.p, &h, params.tol)?
                }
                _ => return Err(CliError::invalid("method extrapolate needs exactly one of spectrum or symbol")),
            };
            let g = json!({"h": h, "window": b.window});
            (bracket_result(&b, method, g), b.samples)
        }
        DixmierMethod::Juw => {
            let Some(sym) = &params.symbol else {
                return Err(CliError::invalid("method juw needs a symbol"));
            };
            if params.spectrum.is_some() {
                return Err(CliError::invalid("method juw takes a symbol, not a spectrum"));
            }
            juw_constant(params.p)?;
            let f = load_symbol(sym, seed)?;
            let check = juw_check(&f, params.p, params.grid)?;
            // polynomial symbols give finite-rank operators
            let b = extrapolated_trace_bracket(&BesovCurve { symbol: &f }, &psi, params.p, &[0.5], params.tol)?;
            let mut r = bracket_result(&b, method, json!({"bitorus": params.grid}));
            r["exact_trace"] = to_value(&check);
            (r, b.samples)
        }
    };
    let csv = csv_table(["x", "value"], samples.iter().map(|&(x, v)| [x, v]));
    Ok(Outcome { params: to_value(&params), result, csv: Some(csv) })
}

/// `per_decade` points per decade on `[tmin, tmax]`, endpoints included.
fn t_grid(tmin: f64, tmax: f64, per_decade: usize) -> CliResult<Vec<f64>> {
    if !(tmin >= 1.0 && tmin <= tmax && tmax.is_finite()) || per_decade == 0 {
        return Err(CliError::invalid(format!(
            "need 1 <= tmin <= tmax < inf and per_decade > 0, got [{tmin}, {tmax}], {per_decade}"
        )));
    }
    let k = per_decade as f64;
    let lo = (tmin.log10() * k).ceil() as i64;
    let hi = (tmax.log10() * k).floor() as i64;
    let mut grid: Vec<f64> = (lo..=hi).map(|i| 10f64.powf(i as f64 / k)).collect();
    grid.retain(|&t| t >= tmin && t <= tmax);
    if grid.first() != Some(&tmin) {
        grid.insert(0, tmin);
    }
    if grid.last() != Some(&tmax) {
        grid.push(tmax);
    }
    Ok(grid)
}

fn witness(params: WitnessParams) -> CliResult<Outcome> {
    let psi = parse_psi(&params.psi)?;
    let family = match params.h0 {
        H0Kind::Sin => H0Family::Sin,
        H0Kind::Cos => H0Family::Cos,
        H0Kind::Const => H0Family::Const,
    };
    let h0 = H0Spec::new(family, params.amplitude, params.phase, params.offset)?;
    let grid = t_grid(params.tmin, params.tmax, params.per_decade)?;
    let report = oscillation_report(&psi, &h0, params.p, &grid)?;
    let coeffs = witness_coefficients(&psi, &h0, params.p, params.terms)?;
    let symbol = htl_core::witness::witness_symbol(&psi, &h0, params.p, params.terms)?;
    let csv = csv_table(
        ["t", "r", "h_plus_c", "residual"],
        report.samples.iter().map(|s| [s.t, s.r, s.h_plus_c, s.residual]),
    );
    let mut result = to_value(&report);
    result["symbol"] = json!({
        "terms": params.terms,
        "coefficients": coeffs,
        "is_zero": symbol.is_zero(),
        "coeffs": symbol,
    });
    Ok(Outcome { params: to_value(&params), result, csv: Some(csv) })
}
