//! `braidcob`: braid normal forms, closure invariants, cobordism certificates
//! and the torus-link bound tables.
//!
//! Exit status: 0 on success, 1 when a certificate or check fails, 2 on
//! malformed input.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use braidcob::alexander::alexander;
use braidcob::cert::{CobordismCertificate, Verifier};
use braidcob::replication::{
    bound_csv, bound_grid, clover_bound_with, coxeter_certificate, fourstrand_certificate, estimate_table,
    sixstrand_certificate, theorem_table, trefoil_stack_certificate, BoundConstants, BoundReport,
    EstimateRow,
};
use braidcob::signature::{sigma6, signature_at, PrecisionPolicy, DEFAULT_PRECISION_BITS};
use braidcob::{equal, normal_form, BraidWord};
use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use serde_json::json;

/// `println!` that tolerates a closed pipe.
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "braidcob", version, about = "Braid closures, signatures and cobordism certificates")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Braid group computations.
    #[command(subcommand)]
    Braid(BraidCmd),
    /// Invariants of braid closures.
    #[command(subcommand)]
    Link(LinkCmd),
    /// Generate or verify cobordism certificates.
    #[command(subcommand)]
    Cert(CertCmd),
    /// Tables for torus links against sums of trefoils.
    #[command(subcommand)]
    Paper(PaperCmd),
}

/// A braid given inline or as a JSON file `{"n": .., "w": [..]}`.
#[derive(Args, Clone)]
struct WordInput {
    /// Number of strands for an inline word.
    #[arg(long, requires = "word")]
    strands: Option<usize>,
    /// Comma-separated signed generator indices, e.g. `1,1,-2`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "file")]
    word: Option<String>,
    /// JSON word file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Left normal form.
    Nf(WordInput),
    /// Decide equality of two braids on the same number of strands.
    Eq {
        #[arg(long)]
        strands: usize,
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
}

#[derive(Subcommand)]
enum LinkCmd {
    /// Signature and nullity at `e^{2πiθ}`, or the limit `σ₆`.
    Sigma {
        #[command(flatten)]
        input: WordInput,
        /// θ as `p/q` in (0, 1).
        #[arg(long, conflicts_with = "sigma6", required_unless_present = "sigma6")]
        theta: Option<String>,
        #[arg(long)]
        sigma6: bool,
    },
    /// Alexander polynomial up to units.
    Alexander(WordInput),
}

#[derive(Subcommand)]
enum CertCmd {
    /// Print a built-in certificate as JSON.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Replay a certificate file and report costs and bounds.
    Verify { file: PathBuf },
}

#[derive(Subcommand)]
enum GenCmd {
    Fourstrand,
    Coxeter,
    Sixstrand {
        #[arg(long)]
        l: usize,
    },
    Trefoils {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        nprime: u64,
    },
}

#[derive(Subcommand)]
enum PaperCmd {
    /// `σ₆(T(m, n))` against `5mn/18`.
    GgTable {
        #[arg(long, default_value_t = 12)]
        mmax: u64,
        #[arg(long, default_value_t = 20)]
        nmax: u64,
    },
    /// Upper and lower bounds for `T(m, n)` against `3_1^N` as CSV.
    TheoremTable {
        /// Values used for both `m` and `n`.
        #[arg(long, value_delimiter = ',', default_value = "6,12,18")]
        grid: Vec<u64>,
        /// Offsets added to `⌈7mn/24⌉` to get `N`.
        #[arg(long, value_delimiter = ',', default_value = "0,5,10")]
        offsets: Vec<u64>,
    },
    /// `5mn/18 − Am − Bn − C`.
    Clover {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 20)]
        a: i64,
        #[arg(long, default_value_t = 20)]
        b: i64,
        #[arg(long, default_value_t = 200)]
        c: i64,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Check(anyhow::Error),
    Input(anyhow::Error),
}

type Outcome = Result<(), Failure>;

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn check<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Check(e.into())
}

fn parse_letters(s: &str) -> anyhow::Result<Vec<i32>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<i32>().with_context(|| format!("bad letter {x:?}")))
        .collect()
}

fn parse_word(strands: usize, s: &str) -> anyhow::Result<BraidWord> {
    Ok(BraidWord::new(strands, parse_letters(s)?)?)
}

impl WordInput {
    fn load(&self) -> Result<BraidWord, Failure> {
        match (&self.file, &self.word, self.strands) {
            (Some(path), _, _) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))
                    .map_err(input)?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing {}", path.display()))
                    .map_err(input)
            }
            (None, Some(w), Some(n)) => parse_word(n, w).map_err(input),
            _ => Err(input(anyhow::anyhow!("give --file or --strands with --word"))),
        }
    }
}

fn parse_theta(s: &str) -> anyhow::Result<Ratio<i64>> {
    let (p, q) = s.split_once('/').context("theta must look like p/q")?;
    let (p, q): (i64, i64) = (p.trim().parse()?, q.trim().parse()?);
    anyhow::ensure!(q != 0, "zero denominator");
    Ok(Ratio::new(p, q))
}

/// Starting precision, overridable by `BRAIDCOB_PRECISION_BITS`.
fn policy() -> Result<PrecisionPolicy, Failure> {
    match std::env::var("BRAIDCOB_PRECISION_BITS") {
        Ok(v) => {
            let bits: u32 = v
                .parse()
                .ok()
                .filter(|&b| b >= 16)
                .ok_or_else(|| input(anyhow::anyhow!("BRAIDCOB_PRECISION_BITS must be an integer >= 16, got {v:?}")))?;
            Ok(PrecisionPolicy::with_start(bits))
        }
        Err(_) => Ok(PrecisionPolicy::with_start(DEFAULT_PRECISION_BITS)),
    }
}

fn print_json(v: &impl serde::Serialize) {
    say!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run_braid(cmd: BraidCmd, json: bool) -> Outcome {
    match cmd {
        BraidCmd::Nf(w) => {
            let w = w.load()?;
            let nf = normal_form(&w);
            if json {
                print_json(&json!({
                    "strands": nf.strands(),
                    "infimum": nf.infimum(),
                    "factors": nf.factors(),
                    "word": nf.to_word(),
                }));
            } else {
                say!("{nf}");
            }
        }
        BraidCmd::Eq { strands, first, second } => {
            let a = parse_word(strands, &first).map_err(input)?;
            let b = parse_word(strands, &second).map_err(input)?;
            let same = equal(&a, &b).map_err(input)?;
            if json {
                print_json(&json!({ "equal": same }));
            } else {
                say!("{}", if same { "equal" } else { "different" });
            }
        }
    }
    Ok(())
}

fn run_link(cmd: LinkCmd, json: bool) -> Outcome {
    match cmd {
        LinkCmd::Sigma { input: w, theta, sigma6: _ } => {
            let w = w.load()?;
            let policy = policy()?;
            match theta {
                Some(t) => {
                    let t = parse_theta(&t).map_err(input)?;
                    let p = signature_at(&w, &t, policy.start_bits).map_err(check)?;
                    if json {
                        print_json(&json!({
                            "theta": p.theta.to_string(),
                            "signature": p.signature,
                            "nullity": p.nullity,
                            "precision_bits": p.precision_bits,
                        }));
                    } else {
                        say!("signature {} nullity {}", p.signature, p.nullity);
                    }
                }
                None => {
                    let s = sigma6(&w, policy).map_err(check)?;
                    if json {
                        print_json(&json!({
                            "sigma6": s.value,
                            "halvings": s.halvings,
                            "precision_bits": s.precision_bits,
                        }));
                    } else {
                        say!("{}", s.value);
                    }
                }
            }
        }
        LinkCmd::Alexander(w) => {
            let a = alexander(&w.load()?);
            if json {
                let c: Vec<String> = a.coefficients().iter().map(ToString::to_string).collect();
                print_json(&json!({ "coefficients": c, "display": a.to_string() }));
            } else {
                say!("{a}");
            }
        }
    }
    Ok(())
}

fn run_cert(cmd: CertCmd, json: bool) -> Outcome {
    match cmd {
        CertCmd::Gen(g) => {
            let cert = match g {
                GenCmd::Fourstrand => fourstrand_certificate(),
                GenCmd::Coxeter => coxeter_certificate(),
                GenCmd::Sixstrand { l } => sixstrand_certificate(l).map_err(input)?.0,
                GenCmd::Trefoils { n, nprime } => trefoil_stack_certificate(n, nprime).map_err(input)?,
            };
            print_json(&cert);
        }
        CertCmd::Verify { file } => {
            let text = fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))
                .map_err(input)?;
            let cert: CobordismCertificate = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", file.display()))
                .map_err(input)?;
            let report = Verifier::new(policy()?)
                .verify(&cert)
                .with_context(|| format!("verifying {}", file.display()))
                .map_err(check)?;
            if json {
                print_json(&report);
            } else {
                say!("{report}");
            }
            if report.bound_ok.value() == Some(false) {
                return Err(check(anyhow::anyhow!(
                    "cost {} is below the signature bound {}",
                    report.total_cost,
                    report.lower_bound
                )));
            }
        }
    }
    Ok(())
}

fn run_paper(cmd: PaperCmd, json: bool) -> Outcome {
    let policy = policy()?;
    match cmd {
        PaperCmd::GgTable { mmax, nmax } => {
            let rows: Vec<EstimateRow> = estimate_table(mmax, nmax, policy)
                .into_iter()
                .collect::<Result<_, _>>()
                .map_err(check)?;
            if json {
                print_json(&rows);
            } else {
                say!("{:>4} {:>4} {:>7} {:>9} {:>4} {:>4} within", "m", "n", "sigma6", "5mn/18", "tol", "dev");
                for r in &rows {
                    say!(
                        "{:>4} {:>4} {:>7} {:>9} {:>4} {:>4} {}",
                        r.m, r.n, r.sigma6, r.estimate, r.tolerance, r.deviation, r.within
                    );
                }
            }
        }
        PaperCmd::TheoremTable { grid, offsets } => {
            let points = bound_grid(&grid, &grid, &offsets);
            let rows: Vec<BoundReport> = theorem_table(&points, policy)
                .into_iter()
                .collect::<Result<_, _>>()
                .map_err(input)?;
            if json {
                print_json(&rows);
            } else {
                let _ = write!(std::io::stdout(), "{}", bound_csv(&rows));
            }
            if let Some(r) = rows.iter().find(|r| !r.pass) {
                return Err(check(anyhow::anyhow!("bound check failed at m={} n={} N={}", r.m, r.n, r.n_total)));
            }
        }
        PaperCmd::Clover { m, n, a, b, c } => {
            let v = clover_bound_with(m, n, BoundConstants { a, b, c });
            if json {
                print_json(&json!({ "m": m, "n": n, "bound": v.to_string(), "vacuous": v <= Ratio::from_integer(0) }));
            } else if v <= Ratio::from_integer(0) {
                say!("{v} (vacuous)");
            } else {
                say!("{v}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Braid(c) => run_braid(c, cli.json),
        Command::Link(c) => run_link(c, cli.json),
        Command::Cert(c) => run_cert(c, cli.json),
        Command::Paper(c) => run_paper(c, cli.json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
