//! Command-line front end: exact cover degrees, fiber ledgers, resonance
//! profiles, abelian numbers, residual systoles, spherical metric counts,
//! and the built-in self-check suite, in human or JSON form.
//!
//! Exit status is 0 on success, 1 on invalid input (the message names the
//! violated invariant), and 2 on an internal integrality or consistency
//! failure — the latter signals a bug or an input outside the proven
//! regime, never a malformed request.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigInt, Signed, ToPrimitive};
use serde_json::json;

use isores::rational::parse_rational;
use isores::selfcheck::run_all;
use isores::{Rational, ResidueTuple, Signature, SphericalAngles, SubsetMask};

#[derive(Parser)]
#[command(
    name = "isores",
    version,
    about = "Exact arithmetic for isoresidual covers of strata of k-differentials on the sphere"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    output: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Degree of the isoresidual cover of a stratum (generic fiber size).
    Degree {
        #[command(flatten)]
        sig: SignatureArgs,
    },
    /// Fiber cardinality over a residue tuple, with the full term ledger.
    Fiber {
        #[command(flatten)]
        sig: SignatureArgs,
        #[command(flatten)]
        residues: ResidueArgs,
    },
    /// All resonant subsets of a residue tuple with their abelian numbers.
    Resonance {
        /// Level of the tuple: the residues are k-th powers.
        #[arg(long)]
        k: Option<u32>,
        #[command(flatten)]
        residues: ResidueArgs,
    },
    /// Abelian number of one subset of pole indices.
    Abelian {
        /// Level of the tuple: the residues are k-th powers.
        #[arg(long)]
        k: Option<u32>,
        #[command(flatten)]
        residues: ResidueArgs,
        /// Pole indices, 1-based and comma separated, e.g. "1,2".
        #[arg(long)]
        subset: String,
    },
    /// Residual systole: the smallest modulus of a nonzero root-choice sum.
    Systole {
        /// Level of the tuple: the residues are k-th powers.
        #[arg(long)]
        k: Option<u32>,
        #[command(flatten)]
        residues: ResidueArgs,
    },
    /// Number of cone spherical metrics with dihedral monodromy.
    Spherical {
        /// First odd positive integer angle, in units of pi.
        #[arg(long)]
        a: i64,
        /// Second odd positive integer angle, in units of pi.
        #[arg(long)]
        b: i64,
        /// Non-integer cone angles in units of pi, comma separated, e.g. "1/2,3/2".
        #[arg(long)]
        c: String,
    },
    /// Run every built-in identity and regression check.
    Selfcheck,
}

#[derive(Args)]
struct SignatureArgs {
    /// Level of the stratum: the differentials are k-th powers locally.
    #[arg(long)]
    k: Option<i64>,

    /// Orders at the two distinguished points, comma separated, e.g. "13,3".
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,

    /// Pole orders (positive multiples of k), comma separated.
    #[arg(long)]
    b: Option<String>,

    /// Whole signature as JSON, e.g. '{"k":4,"a":[13,3],"b":[4,4,4]}'.
    #[arg(long, value_name = "JSON")]
    sig_json: Option<String>,
}

#[derive(Args)]
struct ResidueArgs {
    /// Residue roots as conductor-N expressions in z, comma separated,
    /// e.g. "1,1,1+z".
    #[arg(long, allow_hyphen_values = true)]
    roots: Option<String>,

    /// Cyclotomic conductor: z in --roots denotes a primitive N-th root of
    /// unity.  Defaults to 1 (rational residues).
    #[arg(long = "N", value_name = "N")]
    n: Option<u32>,

    /// Numeric residues as re,im pairs flattened into one comma-separated
    /// list, e.g. "1,0,2.5,-1".
    #[arg(long, allow_hyphen_values = true)]
    numeric: Option<String>,

    /// Modulus below which a numeric sum counts as zero.  Defaults to 1e-9.
    #[arg(long)]
    tol: Option<f64>,

    /// Whole tuple as JSON, e.g.
    /// '{"mode":"roots","k":4,"N":4,"roots":["1","1","1+z"]}'.
    #[arg(long, value_name = "JSON")]
    residues_json: Option<String>,
}

enum Failure {
    Usage(String),
    Lib(isores::Error),
}

impl From<isores::Error> for Failure {
    fn from(e: isores::Error) -> Self {
        Failure::Lib(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl SignatureArgs {
    fn build(&self) -> Result<Signature, Failure> {
        if let Some(text) = &self.sig_json {
            if self.k.is_some() || self.a.is_some() || self.b.is_some() {
                return Err(usage("--sig-json replaces --k/--a/--b; do not combine them"));
            }
            return serde_json::from_str(text).map_err(|e| usage(format!("--sig-json: {e}")));
        }
        let k = self.k.ok_or_else(|| usage("missing --k (or use --sig-json)"))?;
        let a_text = self
            .a
            .as_deref()
            .ok_or_else(|| usage("missing --a (or use --sig-json)"))?;
        let b_text = self
            .b
            .as_deref()
            .ok_or_else(|| usage("missing --b (or use --sig-json)"))?;
        let a = parse_i64_list("--a", a_text)?;
        if a.len() != 2 {
            return Err(usage("--a takes exactly two comma-separated orders"));
        }
        let b = parse_i64_list("--b", b_text)?;
        Ok(Signature::new(k, a[0], a[1], b)?)
    }
}

impl ResidueArgs {
    fn build(&self, k: Option<u32>) -> Result<ResidueTuple, Failure> {
        if let Some(text) = &self.residues_json {
            if self.roots.is_some()
                || self.numeric.is_some()
                || self.n.is_some()
                || self.tol.is_some()
            {
                return Err(usage(
                    "--residues-json replaces --roots/--N/--numeric/--tol; do not combine them",
                ));
            }
            let rt: ResidueTuple =
                serde_json::from_str(text).map_err(|e| usage(format!("--residues-json: {e}")))?;
            if let Some(level) = k {
                if rt.k() != level {
                    return Err(usage(format!(
                        "--residues-json has level {} but {} is required here",
                        rt.k(),
                        level
                    )));
                }
            }
            return Ok(rt);
        }
        let k = k.ok_or_else(|| usage("missing --k (or use --residues-json)"))?;
        match (&self.roots, &self.numeric) {
            (Some(_), Some(_)) => Err(usage("choose one of --roots or --numeric")),
            (Some(roots), None) => {
                if self.tol.is_some() {
                    return Err(usage("--tol applies only to --numeric"));
                }
                let n = self.n.unwrap_or(1);
                let parts: Vec<&str> = roots.split(',').map(str::trim).collect();
                Ok(ResidueTuple::exact_parse(k, n, &parts)?)
            }
            (None, Some(numeric)) => {
                if self.n.is_some() {
                    return Err(usage("--N applies only to --roots"));
                }
                let flat: Result<Vec<f64>, Failure> = numeric
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map_err(|_| usage(format!("--numeric: '{t}' is not a number")))
                    })
                    .collect();
                let flat = flat?;
                if flat.is_empty() || flat.len() % 2 != 0 {
                    return Err(usage(
                        "--numeric takes re,im pairs (an even number of values)",
                    ));
                }
                let values = flat.chunks(2).map(|c| (c[0], c[1])).collect();
                Ok(ResidueTuple::numeric(k, values, self.tol.unwrap_or(1e-9))?)
            }
            (None, None) => Err(usage("provide --roots or --numeric (or --residues-json)")),
        }
    }
}

fn parse_i64_list(label: &str, text: &str) -> Result<Vec<i64>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| usage(format!("{label}: '{t}' is not an integer")))
        })
        .collect()
}

fn parse_subset(text: &str) -> Result<SubsetMask, Failure> {
    let indices: Result<Vec<usize>, Failure> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("--subset: '{t}' is not a pole index")))
        })
        .collect();
    SubsetMask::from_indices(&indices?)
        .ok_or_else(|| usage("--subset: pole indices must lie in 1..=63"))
}

/// Exact integer as a JSON value: a number when within the f64-safe range,
/// a decimal string beyond it.
fn big_json(x: &BigInt) -> serde_json::Value {
    const SAFE: i64 = 1 << 53;
    match x.to_i64() {
        Some(v) if (-SAFE..=SAFE).contains(&v) => json!(v),
        _ => json!(x.to_string()),
    }
}

/// Signed compact form for ledger lines: integers without a denominator,
/// everything else as num/den.
fn signed_value(r: &Rational) -> String {
    let sign = if r.is_negative() { "-" } else { "+" };
    let abs = r.abs();
    if abs.is_integer() {
        format!("{sign}{}", abs.numer())
    } else {
        format!("{sign}{}/{}", abs.numer(), abs.denom())
    }
}

fn emit(value: &serde_json::Value) {
    println!("{value}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let out = cli.output;
    match cli.command {
        Command::Degree { sig } => {
            let sig = sig.build()?;
            let degree = sig.degree_generic()?;
            let all_order_k = sig.b().iter().all(|&order| order == sig.k());
            let closed_and_gamma = if all_order_k && sig.k() >= 2 {
                Some((sig.degree_order_k_poles()?, sig.gamma_degree_estimate()?))
            } else {
                None
            };
            match out {
                OutputFormat::Human => {
                    println!("signature {sig}");
                    println!("degree {degree}");
                    if let Some((closed, gamma)) = &closed_and_gamma {
                        println!("closed form {closed}");
                        println!("gamma estimate {gamma}");
                    }
                }
                OutputFormat::Json => {
                    let mut obj = json!({
                        "signature": sig,
                        "degree": big_json(&degree),
                    });
                    if let Some((closed, gamma)) = &closed_and_gamma {
                        obj["closed_form"] = big_json(closed);
                        obj["gamma_estimate"] = json!(gamma);
                    }
                    emit(&obj);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fiber { sig, residues } => {
            let sig = sig.build()?;
            let rt = residues.build(Some(sig.k() as u32))?;
            let report = isores::fiber_count(&sig, &rt)?;
            match out {
                OutputFormat::Human => {
                    println!("signature {sig}");
                    println!("degree {}", report.degree());
                    println!("count {}", report.count());
                    if report.unverified_regime() {
                        println!("unverified regime: a2 < -k with multiple resonant subsets");
                    }
                    println!("terms:");
                    for term in report.terms() {
                        let blocks: Vec<String> = term
                            .partition()
                            .blocks()
                            .iter()
                            .map(|b| b.to_string())
                            .collect();
                        println!(
                            "  {}  J0={}  blocks=[{}]",
                            signed_value(term.contribution()),
                            term.partition().j0(),
                            blocks.join(", ")
                        );
                    }
                }
                OutputFormat::Json => {
                    emit(&json!({
                        "signature": sig,
                        "residues": rt,
                        "report": report,
                    }));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Resonance { k, residues } => {
            let rt = residues.build(k)?;
            let profile = rt.resonant_subsets()?;
            match out {
                OutputFormat::Human => {
                    println!("level {}, {} residues", rt.k(), rt.p());
                    println!("resonant subsets: {}", profile.len());
                    for entry in profile.entries() {
                        println!("  {}  Ab {}", entry.subset, entry.abelian);
                    }
                    if let Some(meta) = profile.numeric() {
                        println!("tolerance {}", meta.tol);
                        for warn in &meta.warnings {
                            println!("  warning: {warn} has a sum within [tol, 10*tol)");
                        }
                    }
                }
                OutputFormat::Json => {
                    let entries: Vec<serde_json::Value> = profile
                        .entries()
                        .iter()
                        .map(|e| json!({"subset": e.subset.indices(), "abelian": e.abelian}))
                        .collect();
                    let numeric = profile.numeric().map(|meta| {
                        let warnings: Vec<Vec<usize>> =
                            meta.warnings.iter().map(|w| w.indices()).collect();
                        json!({"tol": meta.tol, "warnings": warnings})
                    });
                    emit(&json!({
                        "residues": rt,
                        "entries": entries,
                        "numeric": numeric,
                    }));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Abelian {
            k,
            residues,
            subset,
        } => {
            let rt = residues.build(k)?;
            let mask = parse_subset(&subset)?;
            let abelian = rt.abelian_number(mask)?;
            match out {
                OutputFormat::Human => {
                    println!("abelian number {abelian}");
                }
                OutputFormat::Json => {
                    emit(&json!({
                        "residues": rt,
                        "subset": mask.indices(),
                        "abelian": abelian,
                    }));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Systole { k, residues } => {
            let rt = residues.build(k)?;
            let systole = rt.residual_systole()?;
            match out {
                OutputFormat::Human => {
                    println!("residual systole {systole}");
                }
                OutputFormat::Json => {
                    emit(&json!({
                        "residues": rt,
                        "systole": systole,
                    }));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Spherical { a, b, c } => {
            let angles: Result<Vec<Rational>, Failure> = c
                .split(',')
                .map(|t| parse_rational(t).map_err(Failure::Lib))
                .collect();
            let angles = SphericalAngles::new(a, b, angles?)?;
            let count = angles.spherical_count()?;
            match out {
                OutputFormat::Human => {
                    println!("count {count}");
                }
                OutputFormat::Json => {
                    emit(&json!({
                        "angles": angles,
                        "count": big_json(&count),
                    }));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Selfcheck => {
            let outcomes = run_all();
            let passed = outcomes.iter().filter(|o| o.pass).count();
            match out {
                OutputFormat::Human => {
                    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
                    for o in &outcomes {
                        let word = if o.pass { "pass" } else { "FAIL" };
                        println!("{word}  {:width$}  {}", o.name, o.detail);
                    }
                    println!("{passed}/{} checks passed", outcomes.len());
                }
                OutputFormat::Json => {
                    let checks: Vec<serde_json::Value> = outcomes
                        .iter()
                        .map(|o| json!({"name": o.name, "pass": o.pass, "detail": o.detail}))
                        .collect();
                    emit(&json!({
                        "checks": checks,
                        "passed": passed,
                        "total": outcomes.len(),
                    }));
                }
            }
            Ok(if passed == outcomes.len() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}
