use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use htl_cli::config::*;
use htl_cli::{run, write_report, CliError, CliResult, ExperimentConfig, Kind, EXIT_INVALID};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "htl", version, about = "Hankel-operator trace experiments")]
struct Cli {
    /// Directory for report files (JSON to stdout if absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for random fixtures.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct SymbolArgs {
    /// Symbol JSON file {"coeffs": [[k, re, im], ...]}.
    #[arg(long)]
    symbol: Option<PathBuf>,
    /// The monomial z^N.
    #[arg(long)]
    monomial: Option<usize>,
    /// Lacunary exponent p; use with --lacunary-c.
    #[arg(long, requires = "lacunary_c")]
    lacunary_p: Option<f64>,
    /// Lacunary coefficients c_0,c_1,...
    #[arg(long, value_delimiter = ',', requires = "lacunary_p")]
    lacunary_c: Option<Vec<f64>>,
    /// Random real symbol of this degree (at most 16), drawn from --seed.
    #[arg(long)]
    random: Option<usize>,
}

impl SymbolArgs {
    fn spec(self) -> CliResult<Option<SymbolSpec>> {
        let mut specs = Vec::new();
        if let Some(path) = self.symbol {
            specs.push(SymbolSpec::File(path));
        }
        if let Some(n) = self.monomial {
            specs.push(SymbolSpec::Monomial(n));
        }
        if let (Some(p), Some(c)) = (self.lacunary_p, self.lacunary_c) {
            specs.push(SymbolSpec::Lacunary { p, c });
        }
        if let Some(degree) = self.random {
            specs.push(SymbolSpec::Random { degree });
        }
        if specs.len() > 1 {
            return Err(CliError::invalid("give at most one symbol source"));
        }
        Ok(specs.pop())
    }

    fn required(self) -> CliResult<SymbolSpec> {
        self.spec()?.ok_or_else(|| {
            CliError::invalid("a symbol is required (--symbol, --monomial, --lacunary-p/-c or --random)")
        })
    }
}

#[derive(Args, Default)]
struct SpectrumArgs {
    /// CSV of singular values, one per row (last column).
    #[arg(long)]
    spectrum: Option<PathBuf>,
    /// The CSV lists the whole spectrum, not a truncation.
    #[arg(long, requires = "spectrum")]
    exact: bool,
    /// Power-law spectrum scale·(k+1)^(-EXPONENT).
    #[arg(long)]
    power: Option<f64>,
    #[arg(long, default_value_t = 1.0, requires = "power")]
    power_scale: f64,
    /// Truncate the power law after this many terms.
    #[arg(long, requires = "power")]
    terms: Option<usize>,
}

impl SpectrumArgs {
    fn spec(self) -> CliResult<Option<SpectrumSpec>> {
        match (self.spectrum, self.power) {
            (Some(_), Some(_)) => Err(CliError::invalid("give at most one spectrum source")),
            (Some(path), None) => Ok(Some(SpectrumSpec::Csv { path, exact: self.exact })),
            (None, Some(exponent)) => Ok(Some(SpectrumSpec::Power {
                scale: self.power_scale,
                exponent,
                terms: self.terms,
            })),
            (None, None) => Ok(None),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Besov norm of a symbol.
    Besov {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long, value_enum, default_value = "lp")]
        norm: NormKind,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        radial_nodes: Option<usize>,
    },
    /// Singular values and Schatten norms of a Hankel truncation.
    Hankel {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0])]
        q: Vec<f64>,
    },
    /// Both sides of the exact trace identity for p in {2, 4, 6}.
    JuwCheck {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = DEFAULT_JUW_GRID)]
        grid: usize,
    },
    /// Extrapolation functional of a spectrum.
    Extrapolate {
        #[arg(long, default_value = "log")]
        psi: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = DEFAULT_HMIN)]
        hmin: f64,
        #[command(flatten)]
        spectrum: SpectrumArgs,
    },
    /// Dixmier-trace bracket and measurability verdict.
    Dixmier {
        #[arg(long, value_enum, default_value = "spectrum")]
        method: DixmierMethod,
        #[arg(long, default_value = "log")]
        psi: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long, default_value_t = htl_core::dixmier::DEFAULT_DECADES)]
        decades: u32,
        #[arg(long, default_value_t = htl_core::dixmier::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_HMIN)]
        hmin: f64,
        #[arg(long, default_value_t = DEFAULT_JUW_GRID)]
        grid: usize,
    },
    /// Oscillating-Cesàro witness and its certificate.
    Witness {
        #[arg(long, value_enum, default_value = "sin")]
        h0: H0Kind,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        amplitude: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phase: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        offset: f64,
        #[arg(long, default_value = "log")]
        psi: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1e2)]
        tmin: f64,
        #[arg(long, default_value_t = 1e6)]
        tmax: f64,
        #[arg(long, default_value_t = 20)]
        per_decade: usize,
        /// Lacunary terms of the witness symbol.
        #[arg(long = "J", default_value_t = 12)]
        terms: usize,
    },
    /// Run a JSON experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn params<T: Serialize>(p: T) -> serde_json::Value {
    serde_json::to_value(p).expect("parameters serialize")
}

fn build_config(cli: Cli) -> CliResult<(ExperimentConfig, Option<PathBuf>)> {
    let seed = cli.seed;
    let (kind, p) = match cli.command {
        Command::Run { config } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", config.display())))?;
            let mut c = ExperimentConfig::from_json(&text)?;
            if let Some(s) = seed {
                c.seed = s;
            }
            let out = cli.out.or(c.out.clone());
            return Ok((c, out));
        }
        Command::Besov { symbol, norm, q, grid, radial_nodes } => (
            Kind::Besov,
            params(BesovParams { symbol: symbol.required()?, norm, q, grid, radial_nodes }),
        ),
        Command::Hankel { symbol, dim, q } => {
            (Kind::Hankel, params(HankelParams { symbol: symbol.required()?, dim, q }))
        }
        Command::JuwCheck { symbol, p, grid } => {
            (Kind::JuwCheck, params(JuwParams { symbol: symbol.required()?, p, grid }))
        }
        Command::Extrapolate { psi, p, hmin, spectrum } => {
            let spectrum = spectrum
                .spec()?
                .ok_or_else(|| CliError::invalid("a spectrum is required (--spectrum or --power)"))?;
            (Kind::Extrapolate, params(ExtrapolateParams { psi, p, hmin, spectrum }))
        }
        Command::Dixmier { method, psi, p, spectrum, symbol, decades, tol, hmin, grid } => (
            Kind::Dixmier,
            params(DixmierParams {
                method,
                psi,
                p,
                spectrum: spectrum.spec()?,
                symbol: symbol.spec()?,
                decades,
                tol,
                hmin,
                grid,
            }),
        ),
        Command::Witness { h0, amplitude, phase, offset, psi, p, tmin, tmax, per_decade, terms } => (
            Kind::Witness,
            params(WitnessParams { h0, amplitude, phase, offset, psi, p, tmin, tmax, per_decade, terms }),
        ),
    };
    let mut c = ExperimentConfig::new(kind, p);
    c.seed = seed.unwrap_or(0);
    Ok((c, cli.out))
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("HTL_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::invalid(format!("HTL_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::invalid(format!("cannot size the thread pool: {e}")))
}

fn execute(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let (config, out) = build_config(cli)?;
    log::info!("running {}", config.kind.name());
    let report = run(&config)?;
    write_report(&report, out.as_deref())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_INVALID,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
