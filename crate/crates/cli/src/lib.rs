//! Command-line front end: input resolution, command runners, and the
//! built-in verification suite.

pub mod input;
pub mod run;
pub mod suite;

use clap::{Args, Parser, Subcommand};

use run::RunConfig;

/// Webs and foliations of the projective plane: analysis, Legendre duals,
/// and flatness certification.
#[derive(Parser, Debug)]
#[command(name = "webflat", version, disable_help_subcommand = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonOpts {
    /// Generic curvature samples per flatness verdict.
    #[arg(long, default_value_t = 200, env = "WEBFLAT_SAMPLES")]
    pub samples: usize,
    /// Deterministic RNG seed; fixed default for reproducible reports.
    #[arg(long, default_value_t = 173205080, env = "WEBFLAT_SEED")]
    pub seed: u64,
    /// Flat-consistency threshold on |K|/scale.
    #[arg(long = "flat-tol", default_value_t = 1e-8, env = "WEBFLAT_FLAT_TOL")]
    pub flat_tol: f64,
    /// Non-flat witness floor on |K|/scale.
    #[arg(
        long = "nonflat-floor",
        default_value_t = 1e-4,
        env = "WEBFLAT_NONFLAT_FLOOR"
    )]
    pub nonflat_floor: f64,
    /// Working precision in mantissa bits (53 = plain f64, more switches
    /// the sampling pipeline to paired-limb arithmetic).
    #[arg(long = "precision", default_value_t = 53, env = "WEBFLAT_PRECISION")]
    pub precision_bits: u32,
    /// Probe ladder depth in decades below 1e-2.
    #[arg(long = "probes", default_value_t = 4, env = "WEBFLAT_PROBES")]
    pub probe_decades: u32,
    /// Write the JSON report here instead of stdout.
    #[arg(long = "out", env = "WEBFLAT_OUT")]
    pub out: Option<std::path::PathBuf>,
    /// Report format (only `json`).
    #[arg(long = "format", default_value = "json", env = "WEBFLAT_FORMAT")]
    pub format: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze a single foliation: inflection divisor, invariant lines,
    /// convexity, singularities.
    Analyze {
        /// Foliation spec (fermat:<d>, homog:<d>, rand:<d>:<seed>, or a file).
        spec: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Legendre transform of a web: dual polynomial, degrees, and both
    /// discriminant routes with the cross-check.
    Legendre {
        /// Member specs, combined into one product web.
        specs: Vec<String>,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Flatness verdict for the dual of a web. Exit code 0 means
    /// flat-consistent, 1 non-flat, 2 inconclusive.
    Flatness {
        /// Member specs, combined into one product web.
        specs: Vec<String>,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run the built-in verification suite; exit 0 iff every check passes.
    Suite {
        #[command(flatten)]
        opts: CommonOpts,
    },
}

impl CommonOpts {
    pub fn to_config(&self) -> Result<RunConfig, String> {
        if self.format != "json" {
            return Err(format!("unsupported format `{}`", self.format));
        }
        let config = RunConfig {
            samples: self.samples,
            seed: self.seed,
            flat_tol: self.flat_tol,
            nonflat_floor: self.nonflat_floor,
            precision_bits: self.precision_bits,
            probe_decades: self.probe_decades,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Run a parsed command; returns (report text, exit code).
pub fn execute(cli: Cli) -> Result<(String, i32, Option<std::path::PathBuf>), String> {
    match cli.command {
        Command::Analyze { spec, opts } => {
            let config = opts.to_config()?;
            let fol = input::resolve_foliation(&spec).map_err(|e| e.to_string())?;
            let report = run::cmd_analyze(&fol, &config)?;
            Ok((report.to_string_pretty(), 0, opts.out))
        }
        Command::Legendre { specs, opts } => {
            let config = opts.to_config()?;
            if specs.is_empty() {
                return Err("no web members given".into());
            }
            let web = input::resolve_web(&specs).map_err(|e| e.to_string())?;
            let report = run::cmd_legendre(&web, &config)?;
            Ok((report.to_string_pretty(), 0, opts.out))
        }
        Command::Flatness { specs, opts } => {
            let config = opts.to_config()?;
            if specs.is_empty() {
                return Err("no web members given".into());
            }
            let web = input::resolve_web(&specs).map_err(|e| e.to_string())?;
            let (report, code) = run::cmd_flatness(&web, &config)?;
            Ok((report.to_string_pretty(), code, opts.out))
        }
        Command::Suite { opts } => {
            let config = opts.to_config()?;
            let outcomes = suite::run_suite(&config);
            let (report, all_pass) = suite::suite_report(&config, &outcomes);
            Ok((
                report.to_string_pretty(),
                if all_pass { 0 } else { 1 },
                opts.out,
            ))
        }
    }
}
