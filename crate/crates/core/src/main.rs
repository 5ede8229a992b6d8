use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use frobpoly::arith::{l_coefficients, newton_polygon, FqPolynomial, DEFAULT_BUDGET};
use frobpoly::harness::emit::{polygons_csv, polygons_svg, read_file, render_report, write_file};
use frobpoly::harness::{gnp_estimate, verify_suite, ExperimentReport, Format, Parameters, Suite};
use frobpoly::hasse::{twisted_hasse, twisted_hasse_value, Variant};
use frobpoly::polygon::{fitted_frobenius_polygon, frobenius_polygon, hodge_polygon, Polygon};
use frobpoly::premium::{premium_polygon, SfMode};
use frobpoly::{Error, Result};

#[derive(Parser)]
#[command(name = "frobpoly", version, about = "Hodge, Frobenius, premium and Newton polygons of exponential sums")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    emit: String,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest number of points an exponential sum may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Hodge,
    Frobenius,
    Premium,
    Fitted,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Full,
    Specialized,
    Minimal,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Full => Variant::Full,
            VariantArg::Specialized => Variant::Specialized,
            VariantArg::Minimal => Variant::Minimal,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// A combinatorial polygon.
    Polygon {
        kind: Kind,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        p: Option<u64>,
        /// Index of the fitted polygon.
        #[arg(long)]
        i: Option<u64>,
        /// Number of layers for the premium polygon.
        #[arg(long, default_value_t = 1)]
        a: usize,
        /// Premium over minimal-degree subsets only.
        #[arg(long)]
        minimal: bool,
    },
    /// Newton polygon of the L-function of a polynomial.
    Np {
        /// Polynomial text, or a file containing it.
        #[arg(long)]
        f: String,
    },
    /// Coefficients nu_1..nu_K of the L-function.
    Lpoly {
        #[arg(long)]
        f: String,
        #[arg(long)]
        upto: u32,
    },
    /// Twisted Hasse polynomial at a Frobenius vertex, or its value at f.
    Th {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        a: usize,
        #[arg(long, value_enum, default_value = "full")]
        variant: VariantArg,
        /// Evaluate at the coefficients of this polynomial.
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Sampled minimum of Newton polygons.
    Gnp {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        a: usize,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        /// Replace the default cases by the single case (n, d, p, a).
        #[arg(long, requires_all = ["d", "p"])]
        n: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Vertices for the congruence suite.
        #[arg(long, value_delimiter = ',')]
        k: Vec<u64>,
        #[arg(long)]
        max_seeds: Option<u64>,
    },
}

enum Output {
    Polygons(Vec<(String, Polygon)>),
    Value(serde_json::Value),
    Report(ExperimentReport),
}

fn read_poly(spec: &str) -> Result<FqPolynomial> {
    match spec.parse() {
        Ok(f) => Ok(f),
        Err(parse_err) => {
            let path = Path::new(spec);
            if path.exists() {
                read_file(path)?.parse()
            } else {
                Err(parse_err)
            }
        }
    }
}

fn need(v: Option<u64>, name: &str) -> Result<u64> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required here")))
}

fn run(cli: &Cli) -> Result<Output> {
    let budget = cli.budget;
    Ok(match &cli.command {
        Command::Polygon { kind, n, d, p, i, a, minimal } => {
            let (n, d) = (*n, *d);
            let (label, poly) = match kind {
                Kind::Hodge => ("HP", hodge_polygon(n, d)?),
                Kind::Frobenius => ("FP", frobenius_polygon(n, d, need(*p, "p")?)?),
                Kind::Premium => {
                    let mode = if *minimal { SfMode::MinimalDegree } else { SfMode::All };
                    ("PP", premium_polygon(n, d, need(*p, "p")?, *a, mode)?)
                }
                Kind::Fitted => ("fitted FP", fitted_frobenius_polygon(n, d, need(*p, "p")?, need(*i, "i")?)?),
            };
            Output::Polygons(vec![(label.to_string(), poly)])
        }
        Command::Np { f } => {
            let f = read_poly(f)?;
            Output::Polygons(vec![("NP".to_string(), newton_polygon(&f, budget)?.polygon)])
        }
        Command::Lpoly { f, upto } => {
            let f = read_poly(f)?;
            let nu = l_coefficients(&f, *upto, budget)?;
            let rows: Vec<_> = nu
                .iter()
                .enumerate()
                .map(|(k, v)| json!({"k": k + 1, "nu": v.to_string(), "ord_pi": v.pi_valuation()}))
                .collect();
            Output::Value(json!({"f": f.to_string(), "coefficients": rows}))
        }
        Command::Th { k, a, variant, f, n, d, p } => {
            let variant = Variant::from(*variant);
            match f {
                Some(f) => {
                    let f = read_poly(f)?;
                    let v = twisted_hasse_value(*k, *a, variant, &f)?;
                    Output::Value(json!({"f": f.to_string(), "k": k, "a": a, "value": v.0}))
                }
                None => {
                    let (n, d, p) = (need(*n, "n")?, need(*d, "d")?, need(*p, "p")?);
                    let th = twisted_hasse(*k, *a, n, d, p, variant)?;
                    Output::Value(json!({"n": n, "d": d, "p": p, "k": k, "a": a, "polynomial": th.to_string()}))
                }
            }
        }
        Command::Gnp { n, d, p, a, samples, seed } => {
            Output::Report(gnp_estimate(*n, *d, *p, *a, *samples, *seed, budget)?.1)
        }
        Command::Verify { suite, n, d, p, a, samples, seed, k, max_seeds } => {
            let suite: Suite = suite.parse()?;
            let mut params = suite.default_params();
            if let (Some(n), Some(d), Some(p)) = (n, d, p) {
                params.cases = vec![Parameters::new(*n, *d, *p, a.unwrap_or(1))];
            }
            if let Some(a) = a {
                params.a_values = vec![*a];
                for c in &mut params.cases {
                    c.a = *a;
                }
            }
            params.samples = samples.unwrap_or(params.samples);
            params.seed = seed.unwrap_or(params.seed);
            params.max_seeds = max_seeds.unwrap_or(params.max_seeds);
            params.budget = budget;
            if !k.is_empty() {
                params.ks = k.clone();
            }
            Output::Report(verify_suite(suite, &params)?)
        }
    })
}

#[derive(Serialize)]
struct Labeled<'a> {
    label: &'a str,
    polygon: &'a Polygon,
}

fn render(out: &Output, format: Format) -> Result<String> {
    match (out, format) {
        (Output::Polygons(p), Format::Csv) => Ok(polygons_csv(p)),
        (Output::Polygons(p), Format::Svg) => polygons_svg(p),
        (Output::Polygons(p), Format::Json) => {
            let rows: Vec<Labeled> = p.iter().map(|(label, polygon)| Labeled { label, polygon }).collect();
            Ok(serde_json::to_string_pretty(&rows)? + "\n")
        }
        (Output::Value(v), Format::Json) => Ok(serde_json::to_string_pretty(v)? + "\n"),
        (Output::Value(_), _) => Err(Error::InvalidParameter("this command only emits json".into())),
        (Output::Report(r), f) => render_report(r, f),
    }
}

fn main_inner(cli: &Cli) -> Result<bool> {
    let format: Format = cli.emit.parse()?;
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    }
    let out = run(cli)?;
    let text = render(&out, format)?;
    match &cli.out {
        Some(path) => write_file(path, &text)?,
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
    }
    if let Output::Report(r) = &out {
        for v in r.failures() {
            eprintln!("FAIL {} (case {:?}): {}", v.assertion, v.case, v.witness);
        }
        return Ok(r.passed());
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
