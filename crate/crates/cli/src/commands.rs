use std::fmt::Write;

use clap::{Args, Parser, Subcommand};
use flatorb_core::heat::{heat_report, heat_trace_check};
use flatorb_core::krawtchouk::{krawtchouk_eval, krawtchouk_zeros, odd_dimension_zero_scan};
use flatorb_core::linalg::{parse_rational, Rational};
use flatorb_core::orbifold::{singular_strata, Catalog, FlatOrbifoldSpec};
use flatorb_core::spectrum::{compare_spectra, p_spectrum, Comparison};

use crate::error::{CliError, CliResult};
use crate::format::{self, Format};
use crate::specfile::resolve;
use crate::verify;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_DIVERGES: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "flatorb", version, about = "Spectra, strata and heat invariants of flat orbifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// A spec given as `--spec REF` or positionally; `REF` is a path or `builtin:<name>`.
#[derive(Debug, Args)]
pub struct SpecArg {
    #[arg(long = "spec", value_name = "REF")]
    flag: Option<String>,
    #[arg(value_name = "REF", conflicts_with = "flag")]
    positional: Option<String>,
}

impl SpecArg {
    fn reference(&self) -> CliResult<&str> {
        self.flag
            .as_deref()
            .or(self.positional.as_deref())
            .ok_or_else(|| CliError::Usage("missing spec: pass --spec <path|builtin:NAME>".into()))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Values and integer zeros of K_p^d.
    Krawtchouk {
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        zeros: bool,
        #[arg(long, value_name = "MAX")]
        scan_odd_dims: Option<u32>,
    },
    /// Multiplicities of the p-form spectrum up to q <= cutoff.
    Spectrum {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        p: usize,
        #[arg(long, allow_hyphen_values = true)]
        cutoff: String,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// First eigenvalue where two p-spectra differ.
    Compare {
        #[arg(long)]
        spec_a: String,
        #[arg(long)]
        spec_b: String,
        #[arg(long)]
        p: usize,
        #[arg(long, allow_hyphen_values = true)]
        cutoff: String,
    },
    /// Singular strata census.
    Strata {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Leading heat invariants, optionally checked against the truncated trace.
    Heat {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        p: usize,
        #[arg(long, allow_hyphen_values = true)]
        cutoff: Option<String>,
        #[arg(long = "t")]
        t: Vec<f64>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Runs the full reproduction suite.
    VerifyPaper {
        #[arg(long)]
        json: bool,
    },
}

/// Stdout text and exit status of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_OK }
    }
}

fn cutoff(s: &str) -> CliResult<Rational> {
    let q = parse_rational(s)?;
    if q < Rational::from_integer(0.into()) {
        return Err(flatorb_core::Error::NegativeCutoff(s.into()).into());
    }
    Ok(q)
}

fn degree(spec: &FlatOrbifoldSpec, p: usize) -> CliResult<()> {
    if p > spec.dim() {
        return Err(flatorb_core::Error::DegreeOutOfRange { p, d: spec.dim() }.into());
    }
    Ok(())
}

pub fn krawtchouk(d: Option<u32>, p: Option<u32>, zeros: bool, scan: Option<u32>) -> CliResult<String> {
    let mut out = String::new();
    if let Some(max) = scan {
        for (d, hits) in odd_dimension_zero_scan(max)? {
            let pairs: Vec<String> = hits.iter().map(|(p, k)| format!("({p},{k})")).collect();
            let body = if pairs.is_empty() { "none".to_string() } else { pairs.join(" ") };
            writeln!(out, "{d}: {body}").unwrap();
        }
        return Ok(out);
    }
    let d = d.ok_or_else(|| CliError::Usage("krawtchouk needs --d or --scan-odd-dims".into()))?;
    if zeros {
        let p = p.ok_or_else(|| CliError::Usage("--zeros needs --p".into()))?;
        let z: Vec<String> = krawtchouk_zeros(d, p)?.iter().map(ToString::to_string).collect();
        writeln!(out, "{}", z.join(" ")).unwrap();
        return Ok(out);
    }
    let degrees: Vec<u32> = match p {
        Some(p) => vec![p],
        None => (0..=d).collect(),
    };
    out.push('p');
    for k in 0..=d {
        write!(out, "\tk={k}").unwrap();
    }
    out.push('\n');
    for p in degrees {
        write!(out, "{p}").unwrap();
        for k in 0..=i64::from(d) {
            write!(out, "\t{}", krawtchouk_eval(d, p, k)?).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn compare_line(cmp: &Comparison) -> String {
    match cmp {
        Comparison::Equal => "EQUAL".into(),
        Comparison::Diverges { q, m_a, m_b } => format!("DIVERGES at q={q}: {m_a} vs {m_b}"),
    }
}

pub fn run(cli: Cli, catalog: &dyn Catalog) -> CliResult<Outcome> {
    match cli.command {
        Command::Krawtchouk { d, p, zeros, scan_odd_dims } => Ok(Outcome::ok(krawtchouk(d, p, zeros, scan_odd_dims)?)),
        Command::Spectrum { spec, p, cutoff: q, format } => {
            let spec = resolve(spec.reference()?, catalog)?;
            degree(&spec, p)?;
            let table = p_spectrum(&spec, p, &cutoff(&q)?)?;
            Ok(Outcome::ok(match format {
                Format::Tsv => format::spectrum_tsv(&table),
                Format::Json => format::spectrum_json(&table),
            }))
        }
        Command::Compare { spec_a, spec_b, p, cutoff: q } => {
            let (a, b) = (resolve(&spec_a, catalog)?, resolve(&spec_b, catalog)?);
            degree(&a, p)?;
            degree(&b, p)?;
            let q = cutoff(&q)?;
            let cmp = compare_spectra(&p_spectrum(&a, p, &q)?, &p_spectrum(&b, p, &q)?)?;
            let code = if cmp.is_equal() { EXIT_OK } else { EXIT_DIVERGES };
            Ok(Outcome { stdout: format!("{}\n", compare_line(&cmp)), code })
        }
        Command::Strata { spec, format } => {
            let spec = resolve(spec.reference()?, catalog)?;
            let census = singular_strata(&spec);
            Ok(Outcome::ok(match format {
                Format::Tsv => format::strata_tsv(&census),
                Format::Json => format::strata_json(spec.name(), &census),
            }))
        }
        Command::Heat { spec, p, cutoff: q, t, format } => {
            let spec = resolve(spec.reference()?, catalog)?;
            degree(&spec, p)?;
            let report = heat_report(&spec, p)?;
            let checks = if t.is_empty() {
                Vec::new()
            } else {
                let q = q.ok_or_else(|| CliError::Usage("--t needs --cutoff".into()))?;
                heat_trace_check(&spec, p, &cutoff(&q)?, &t)?
            };
            Ok(Outcome::ok(match format {
                Format::Tsv => format::heat_tsv(&report, &checks),
                Format::Json => format::heat_json(&report, &checks),
            }))
        }
        Command::VerifyPaper { json } => {
            let reports = verify::run_all(catalog);
            let stdout = if json { verify::render_json(&reports) } else { verify::render_text(&reports) };
            let code = if reports.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_FAILED };
            Ok(Outcome { stdout, code })
        }
    }
}
