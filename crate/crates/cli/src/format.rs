//! TSV and JSON emitters. Floats carry 12 significant digits; exact values
//! are written as reduced rational strings, so output is byte-deterministic.

use std::collections::BTreeMap;
use std::fmt::Write;

use flatorb_core::heat::{HeatCheck, HeatReport};
use flatorb_core::orbifold::{ComponentCount, StrataCensus};
use flatorb_core::spectrum::{q_parts, SpectrumTable};
use flatorb_core::surd::Surd;
use serde::Serialize;

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

/// `printf("%.12g")`.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let p = SIGNIFICANT_DIGITS;
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (p as i32 - 1 - exp) as usize, x))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// The `f64` closest to the 12-digit rendering; what JSON reports carry.
pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        fmt_g(x).parse().expect("fmt_g output parses")
    } else {
        x
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SurdView {
    exact: String,
    float: f64,
}

impl From<&Surd> for SurdView {
    fn from(s: &Surd) -> Self {
        SurdView { exact: s.to_string(), float: round_sig(s.to_f64()) }
    }
}

#[derive(Serialize)]
struct SpectrumRowView {
    q: String,
    q_num: String,
    q_den: String,
    lambda: f64,
    multiplicity: u64,
}

#[derive(Serialize)]
struct SpectrumView {
    spec_name: String,
    p: usize,
    cutoff: String,
    rows: Vec<SpectrumRowView>,
    max_residual: f64,
}

pub fn spectrum_tsv(table: &SpectrumTable) -> String {
    let mut out = String::from("q_num\tq_den\tlambda_float\tmultiplicity\n");
    for r in &table.rows {
        let (n, d) = q_parts(&r.q);
        writeln!(out, "{n}\t{d}\t{}\t{}", fmt_g(r.eigenvalue()), r.multiplicity).unwrap();
    }
    out
}

pub fn spectrum_json(table: &SpectrumTable) -> String {
    let rows = table
        .rows
        .iter()
        .map(|r| {
            let (n, d) = q_parts(&r.q);
            SpectrumRowView {
                q: r.q.to_string(),
                q_num: n.to_string(),
                q_den: d.to_string(),
                lambda: round_sig(r.eigenvalue()),
                multiplicity: r.multiplicity,
            }
        })
        .collect();
    to_json(&SpectrumView {
        spec_name: table.spec_name.clone(),
        p: table.p,
        cutoff: table.cutoff.to_string(),
        rows,
        max_residual: round_sig(table.max_residual),
    })
}

#[derive(Serialize)]
struct StratumView {
    id: usize,
    dim: usize,
    codim: usize,
    isotropy_order: usize,
    primary: bool,
    iso_max_count: usize,
    volume: SurdView,
    components: Option<usize>,
    orientation_preserving_isotropy: bool,
    representative: Vec<String>,
}

fn components(c: ComponentCount) -> Option<usize> {
    match c {
        ComponentCount::Exact(n) => Some(n),
        ComponentCount::Unrefined => None,
    }
}

fn point(x: &[flatorb_core::linalg::Rational]) -> Vec<String> {
    x.iter().map(ToString::to_string).collect()
}

pub fn strata_tsv(census: &StrataCensus) -> String {
    let mut out = String::from(
        "id\tdim\tcodim\tisotropy_order\tprimary\tvolume\tvolume_float\tcomponents\torientation_preserving\trepresentative\n",
    );
    for s in census.strata() {
        let comp = components(s.component_count).map_or("unrefined".to_string(), |n| n.to_string());
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t({})",
            s.id,
            s.dim,
            s.codim,
            s.isotropy_order,
            s.primary,
            s.volume,
            fmt_g(s.volume_f64()),
            comp,
            s.orientation_preserving_isotropy,
            point(&s.representative).join(",")
        )
        .unwrap();
    }
    out
}

pub fn strata_json(spec_name: &str, census: &StrataCensus) -> String {
    #[derive(Serialize)]
    struct View<'a> {
        spec_name: &'a str,
        strata: Vec<StratumView>,
    }
    let strata = census
        .strata()
        .iter()
        .map(|s| StratumView {
            id: s.id,
            dim: s.dim,
            codim: s.codim,
            isotropy_order: s.isotropy_order,
            primary: s.primary,
            iso_max_count: s.iso_max.len(),
            volume: (&s.volume).into(),
            components: components(s.component_count),
            orientation_preserving_isotropy: s.orientation_preserving_isotropy,
            representative: point(&s.representative),
        })
        .collect();
    to_json(&View { spec_name, strata })
}

#[derive(Serialize)]
struct CheckView {
    t: f64,
    truncated: f64,
    predicted: f64,
    relative_error: f64,
    tail_bound: f64,
}

impl From<&HeatCheck> for CheckView {
    fn from(c: &HeatCheck) -> Self {
        CheckView {
            t: round_sig(c.t),
            truncated: round_sig(c.truncated),
            predicted: round_sig(c.predicted),
            relative_error: round_sig(c.relative_error),
            tail_bound: round_sig(c.tail_bound),
        }
    }
}

pub fn heat_tsv(report: &HeatReport, checks: &[HeatCheck]) -> String {
    let mut out = String::new();
    writeln!(out, "# spec {} p={}", report.spec_name, report.p).unwrap();
    writeln!(out, "a0\t{}\t{}", report.a0, fmt_g(report.a0.to_f64())).unwrap();
    let parity = &report.parity;
    let k = |k: Option<usize>| k.map_or("-".to_string(), |k| k.to_string());
    writeln!(out, "B_plus\t{}\t{}\tk={}", parity.b_plus, fmt_g(parity.b_plus.to_f64()), k(parity.k_plus)).unwrap();
    writeln!(out, "B_minus\t{}\t{}\tk={}", parity.b_minus, fmt_g(parity.b_minus.to_f64()), k(parity.k_minus)).unwrap();
    out.push_str("\nstratum\tcodim\tisotropy_order\tb0\tb0_float\n");
    for s in &report.b0 {
        writeln!(out, "{}\t{}\t{}\t{}\t{}", s.id, s.codim, s.isotropy_order, s.b0, fmt_g(s.b0.to_f64())).unwrap();
    }
    out.push_str("\ncodim\taggregate\taggregate_float\n");
    for (j, agg) in &report.aggregates {
        writeln!(out, "{j}\t{agg}\t{}", fmt_g(agg.to_f64())).unwrap();
    }
    out.push_str("\nj\tc_j\n");
    for (j, c) in &report.c {
        writeln!(out, "{j}\t{}", fmt_g(*c)).unwrap();
    }
    if !checks.is_empty() {
        out.push_str("\nt\ttruncated\tpredicted\trelative_error\ttail_bound\n");
        for c in checks {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                fmt_g(c.t),
                fmt_g(c.truncated),
                fmt_g(c.predicted),
                fmt_g(c.relative_error),
                fmt_g(c.tail_bound)
            )
            .unwrap();
        }
    }
    out
}

pub fn heat_json(report: &HeatReport, checks: &[HeatCheck]) -> String {
    #[derive(Serialize)]
    struct Coefficient {
        id: usize,
        codim: usize,
        isotropy_order: usize,
        b0: SurdView,
    }
    #[derive(Serialize)]
    struct Parity {
        b_plus: SurdView,
        b_minus: SurdView,
        k_plus: Option<usize>,
        k_minus: Option<usize>,
    }
    #[derive(Serialize)]
    struct View {
        spec_name: String,
        p: usize,
        a0: SurdView,
        b0: Vec<Coefficient>,
        parity: Parity,
        aggregates: BTreeMap<usize, SurdView>,
        c: BTreeMap<usize, f64>,
        checks: Vec<CheckView>,
    }
    let view = View {
        spec_name: report.spec_name.clone(),
        p: report.p,
        a0: (&report.a0).into(),
        b0: report
            .b0
            .iter()
            .map(|s| Coefficient { id: s.id, codim: s.codim, isotropy_order: s.isotropy_order, b0: (&s.b0).into() })
            .collect(),
        parity: Parity {
            b_plus: (&report.parity.b_plus).into(),
            b_minus: (&report.parity.b_minus).into(),
            k_plus: report.parity.k_plus,
            k_minus: report.parity.k_minus,
        },
        aggregates: report.aggregates.iter().map(|(&k, v)| (k, v.into())).collect(),
        c: report.c.iter().map(|(&k, &v)| (k, round_sig(v))).collect(),
        checks: checks.iter().map(Into::into).collect(),
    };
    to_json(&view)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_style_matches_printf() {
        assert_eq!(fmt_g(39.47841760435743), "39.4784176044");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(0.5), "0.5");
        assert_eq!(fmt_g(-2.5e-7), "-2.5e-07");
        assert_eq!(fmt_g(1.0e12), "1e+12");
        assert_eq!(fmt_g(123456789012.0), "123456789012");
        assert_eq!(fmt_g(0.0001), "0.0001");
        assert_eq!(fmt_g(9.9999999999999e-5), "0.0001");
        assert_eq!(fmt_g(1e-83), "1e-83");
    }

    #[test]
    fn rounding_is_idempotent() {
        let x = std::f64::consts::PI * 1e5;
        assert_eq!(round_sig(round_sig(x)), round_sig(x));
        assert_eq!(fmt_g(round_sig(x)), fmt_g(x));
    }
}
