//! Argument handling and dispatch for the `catbert` binary.
//!
//! Exit codes: 0 success, 1 a verification found a violation, 2 usage error.

use std::io::Write;
use std::time::Duration;

use catbert_core::bench::{run_bench, to_csv};
use catbert_core::catbert::{
    catbert_det_formula, catbert_det_sequence, catbert_inverse, catbert_matrix, oeis_compare_auto, parse_bfile,
    snapshot_bfile, BFile,
};
use catbert_core::exact::format_rational;
use catbert_core::factorization::{det_inverse_formula, det_scaled_inverse_formula, FactorizationBundle};
use catbert_core::grid::{param_grid, GRID_A, GRID_P, GRID_Q};
use catbert_core::matrices::hankel_g;
use catbert_core::sequences::gen_catalan;
use catbert_core::suites::{reports_to_json, run_suites, Suite};
use catbert_core::{Error, ExactMatrix, GCParams, Rational, Report};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable overriding the OEIS base URL used by `--oeis-fetch`.
pub const OEIS_URL_ENV: &str = "CATBERT_OEIS_URL";
const DEFAULT_OEIS_URL: &str = "https://oeis.org";

#[derive(Debug, Parser)]
#[command(name = "catbert", version, about = "Exact Hankel matrices of reciprocal generalized Catalan numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 2)]
    pub p: i64,
    #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
    pub q: i64,
    #[arg(long, default_value_t = 1)]
    pub a: usize,
}

impl ParamArgs {
    fn params(&self) -> Result<GCParams, Error> {
        GCParams::new(self.p, self.q, self.a)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print g_0 .. g_{count-1} of g^(q/p).
    Seq {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Print G(n), entries 1/g_{i+j+a}.
    Hankel {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Print G(n)^-1 computed as L^T M K.
    Invert {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: usize,
        /// Cross-check against fraction-free elimination.
        #[arg(long)]
        oracle: bool,
        /// Invert G(n)/q instead of G(n).
        #[arg(long)]
        scaled: bool,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Determinant of G(n)^-1 from the product formula, optionally by elimination too.
    Det {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        scaled: bool,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Run identity suites over a parameter grid.
    Verify(VerifyArgs),
    /// The Hankel matrix of reciprocal Catalan numbers.
    Catbert(CatbertArgs),
    /// Time the factorized inverse against elimination.
    Bench {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [8, 16, 24, 32])]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suites to run (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<String>,
    /// Run every suite.
    #[arg(long)]
    pub all: bool,
    /// Single parameter triple; overrides the grid lists.
    #[arg(long)]
    pub p: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<i64>,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = GRID_P)]
    pub p_list: Vec<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = GRID_Q)]
    pub q_list: Vec<i64>,
    #[arg(long, value_delimiter = ',', default_values_t = GRID_A)]
    pub a_list: Vec<usize>,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Show {
    Matrix,
    Inverse,
    Dets,
    Oeis,
}

#[derive(Debug, Args)]
pub struct CatbertArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Show::Inverse)]
    pub show: Show,
    /// Compare against this b-file instead of the shipped snapshot.
    #[arg(long)]
    pub bfile: Option<std::path::PathBuf>,
    /// Download the live b-file (network access required).
    #[arg(long)]
    pub oeis_fetch: bool,
    #[arg(long, default_value = "A296056")]
    pub oeis_id: String,
    /// Fetch timeout in seconds.
    #[arg(long, default_value_t = 20)]
    pub timeout: u64,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}

/// Failure while executing a subcommand.
enum Failure {
    Usage(String),
    Violation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Violation) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Usage(format!("output error: {e}"))
}

fn require_n(n: usize) -> Result<usize, Failure> {
    if n == 0 {
        Err(Failure::Usage("n must be at least 1".into()))
    } else {
        Ok(n)
    }
}

fn write_matrix(out: &mut dyn Write, m: &ExactMatrix, format: Format) -> Outcome {
    let text = match format {
        Format::Plain => m.to_plain(),
        Format::Json => format!("{}\n", m.to_json()),
        Format::Csv => m.to_csv(),
    };
    out.write_all(text.as_bytes()).map_err(io)
}

fn write_values(out: &mut dyn Write, values: &[String], format: Format) -> Outcome {
    let text = match format {
        Format::Plain => values.join(" "),
        Format::Json => serde_json::to_string(values).expect("strings serialize"),
        Format::Csv => values.join(","),
    };
    writeln!(out, "{text}").map_err(io)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Seq { params, count, format } => {
            let params = params.params()?;
            if count == 0 {
                return Err(Failure::Usage("count must be at least 1".into()));
            }
            let seq = gen_catalan(params, count)?;
            let values: Vec<String> = seq.terms.iter().map(ToString::to_string).collect();
            write_values(out, &values, format)
        }
        Command::Hankel { params, n, format } => {
            let g = hankel_g(params.params()?, require_n(n)?);
            write_matrix(out, &g, format)
        }
        Command::Invert {
            params,
            n,
            oracle,
            scaled,
            format,
        } => {
            let params = params.params()?;
            let bundle = FactorizationBundle::new(params, require_n(n)?)?;
            let inv = if scaled { bundle.scaled_inverse() } else { bundle.inverse() };
            write_matrix(out, &inv, format)?;
            if oracle {
                let mut g = hankel_g(params, n);
                if scaled {
                    g = g.scale(&Rational::new(1.into(), params.q.into()));
                }
                let reference = g.invert_oracle()?;
                if reference != inv {
                    writeln!(out, "oracle: MISMATCH").map_err(io)?;
                    return Err(Failure::Violation);
                }
                if format == Format::Plain {
                    writeln!(out, "oracle: agrees").map_err(io)?;
                }
            }
            Ok(())
        }
        Command::Det {
            params,
            n,
            oracle,
            scaled,
            format,
        } => {
            let params = params.params()?;
            let formula = if scaled {
                det_scaled_inverse_formula(params, n)
            } else {
                det_inverse_formula(params, n)
            };
            let mut values = vec![format_rational(&formula)];
            let mut agree = true;
            if oracle {
                let bundle = FactorizationBundle::new(params, require_n(n)?)?;
                let inv = if scaled { bundle.scaled_inverse() } else { bundle.inverse() };
                let det = inv.det_oracle()?;
                agree = det == formula;
                values.push(format_rational(&det));
            }
            write_values(out, &values, format)?;
            if agree {
                Ok(())
            } else {
                Err(Failure::Violation)
            }
        }
        Command::Verify(args) => verify(args, out),
        Command::Catbert(args) => catbert(args, out),
        Command::Bench {
            params,
            n_list,
            repetitions,
            format,
        } => {
            let params = params.params()?;
            if n_list.windows(2).any(|w| w[0] >= w[1]) || n_list.contains(&0) {
                return Err(Failure::Usage("n-list must be positive and strictly ascending".into()));
            }
            let records = run_bench(params, &n_list, repetitions)?;
            let text = match format {
                Format::Csv => to_csv(&records),
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&records).expect("records serialize")),
                Format::Plain => {
                    let mut s = format!("{:<12} {:>4} {:>14} {:>9} {:>12}\n", "method", "n", "median_ns", "max_bits", "mults");
                    for r in &records {
                        s.push_str(&format!(
                            "{:<12} {:>4} {:>14} {:>9} {:>12}\n",
                            format!("{:?}", r.method).to_lowercase(),
                            r.n,
                            r.wall_nanos,
                            r.max_bits,
                            r.multiplications.map_or("-".to_string(), |m| m.to_string())
                        ));
                    }
                    s
                }
            };
            out.write_all(text.as_bytes()).map_err(io)
        }
    }
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let suites: Vec<Suite> = if args.all {
        Suite::ALL.to_vec()
    } else if args.suite.is_empty() {
        return Err(Failure::Usage("pass --suite NAME[,NAME..] or --all".into()));
    } else {
        args.suite.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    };
    let grid = if args.p.is_some() || args.q.is_some() || args.a.is_some() {
        vec![GCParams::new(args.p.unwrap_or(2), args.q.unwrap_or(-3), args.a.unwrap_or(0))?]
    } else {
        for &p in &args.p_list {
            GCParams::new(p, 1, 0)?;
        }
        param_grid(&args.p_list, &args.q_list, &args.a_list)
    };
    if args.n_max < 2 {
        return Err(Failure::Usage("n-max must be at least 2".into()));
    }
    let reports = run_suites(&suites, &grid, args.n_max)?;
    let text = match args.format {
        Format::Json => format!("{}\n", reports_to_json(&reports)),
        _ => {
            let mut s: String = reports.iter().map(|r| format!("{}\n", r.summary())).collect();
            let failed = reports.iter().filter(|r| !r.passed()).count();
            s.push_str(&format!("{} reports, {} failed\n", reports.len(), failed));
            s
        }
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    if reports.iter().all(Report::passed) {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

/// `{base}/{id}/b{digits}.txt`, e.g. `https://oeis.org/A296056/b296056.txt`.
pub fn bfile_url(base: &str, id: &str) -> String {
    let digits = id.trim_start_matches(['A', 'a']);
    format!("{}/{}/b{}.txt", base.trim_end_matches('/'), id, digits)
}

fn fetch_bfile(id: &str, timeout: u64) -> Result<BFile, Failure> {
    let base = std::env::var(OEIS_URL_ENV).unwrap_or_else(|_| DEFAULT_OEIS_URL.to_string());
    let url = bfile_url(&base, id);
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(Duration::from_secs(timeout)))
        .build()
        .into();
    let body = agent
        .get(&url)
        .call()
        .and_then(|mut resp| resp.body_mut().read_to_string())
        .map_err(|e| Failure::Usage(format!("fetching {url}: {e}")))?;
    Ok(parse_bfile(id, &body)?)
}

fn catbert(args: CatbertArgs, out: &mut dyn Write) -> Outcome {
    let n = require_n(args.n)?;
    match args.show {
        Show::Matrix => write_matrix(out, &catbert_matrix(n)?.matrix, args.format),
        Show::Inverse => write_matrix(out, &catbert_inverse(n)?, args.format),
        Show::Dets => {
            let dets: Vec<String> = (1..=n).map(|k| format_rational(&catbert_det_formula(k))).collect();
            write_values(out, &dets, args.format)
        }
        Show::Oeis => {
            let bfile = if args.oeis_fetch {
                fetch_bfile(&args.oeis_id, args.timeout)?
            } else if let Some(path) = &args.bfile {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))?;
                parse_bfile(&args.oeis_id, &text)?
            } else {
                snapshot_bfile()
            };
            let cmp = oeis_compare_auto(&catbert_det_sequence(n), &bfile);
            let text = match args.format {
                Format::Json => serde_json::to_string_pretty(&cmp).expect("comparison serializes"),
                _ => match &cmp.first_mismatch {
                    None => format!(
                        "{}: {} of {} terms match at offset {}",
                        cmp.id, cmp.matched, n, cmp.offset
                    ),
                    Some(m) => format!(
                        "{}: {} terms match at offset {}; index {} computed {} expected {}",
                        cmp.id, cmp.matched, cmp.offset, m.index, m.computed, m.expected
                    ),
                },
            };
            writeln!(out, "{text}").map_err(io)?;
            if cmp.full_match() {
                Ok(())
            } else {
                Err(Failure::Violation)
            }
        }
    }
}
