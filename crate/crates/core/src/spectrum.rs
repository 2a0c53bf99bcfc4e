//! Hodge p-spectra of flat orbifolds via the multiplicity formula
//! `m_{p,q} = (1/|F|)·Σ_γ tr_p(γ)·e_q(γ)` with
//! `e_q(γ) = Σ_{n ∈ shell(q), Mᵀn = n} e^{2πi n·a(γ)}`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::isometry::AffineIsometry;
use crate::lattice::Shell;
use crate::linalg::{int_to_f64, Rational};
use crate::orbifold::FlatOrbifoldSpec;

/// Largest allowed `|Im m|` and `|m − round(m)|`.
pub const ROUNDING_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumRow {
    pub q: Rational,
    pub multiplicity: u64,
}

impl SpectrumRow {
    /// `λ = 4π²q`.
    pub fn eigenvalue(&self) -> f64 {
        4.0 * core::f64::consts::PI * core::f64::consts::PI * crate::linalg::rat_to_f64(&self.q)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumTable {
    pub spec_name: String,
    pub p: usize,
    pub cutoff: Rational,
    pub rows: Vec<SpectrumRow>,
    /// Worst rounding residual seen while building the table.
    pub max_residual: f64,
}

impl SpectrumTable {
    pub fn multiplicity(&self, q: &Rational) -> u64 {
        self.rows.iter().find(|r| r.q == *q).map_or(0, |r| r.multiplicity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    Diverges { q: Rational, m_a: u64, m_b: u64 },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }
}

/// Shift `a(γ)` over a common denominator, so `n·a mod 1` is exact integer arithmetic.
struct Phase {
    numerators: Vec<i128>,
    denominator: i128,
}

impl Phase {
    fn of(f: &AffineIsometry) -> Self {
        let a = f.a_of();
        let den = a.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let numerators = a
            .iter()
            .map(|x| (x.numer() * (&den / x.denom())).to_i128().expect("small shift numerator"))
            .collect();
        Phase { numerators, denominator: den.to_i128().expect("small shift denominator") }
    }

    fn turns(&self, n: &[i64]) -> f64 {
        let r: i128 = n.iter().zip(&self.numerators).map(|(&x, &y)| i128::from(x) * y).sum();
        r.rem_euclid(self.denominator) as f64 / self.denominator as f64
    }
}

fn fixes(mt: &[Vec<i64>], n: &[i64]) -> bool {
    mt.iter().zip(n).all(|(row, &ni)| row.iter().zip(n).map(|(a, b)| a * b).sum::<i64>() == ni)
}

fn transpose_rows(f: &AffineIsometry) -> Vec<Vec<i64>> {
    let mt = f.linear().transpose().to_i64().expect("point matrices have small entries");
    (0..mt.rows()).map(|i| mt.row(i).to_vec()).collect()
}

/// `e_q(γ)` as `(re, im)`.
pub fn e_term(f: &AffineIsometry, shell: &Shell) -> (f64, f64) {
    e_term_with(&transpose_rows(f), &Phase::of(f), shell)
}

fn e_term_with(mt: &[Vec<i64>], phase: &Phase, shell: &Shell) -> (f64, f64) {
    let mut re = 0.0;
    let mut im = 0.0;
    for n in shell.vectors.iter().filter(|n| fixes(mt, n)) {
        let angle = TAU * phase.turns(n);
        re += libm::cos(angle);
        im += libm::sin(angle);
    }
    (re, im)
}

/// Spectra of several degrees at once; shells and `e`-terms are shared.
pub fn p_spectra(spec: &FlatOrbifoldSpec, degrees: &[usize], cutoff: &Rational) -> Result<Vec<SpectrumTable>> {
    let d = spec.dim();
    if let Some(&p) = degrees.iter().find(|&&p| p > d) {
        return Err(Error::DegreeOutOfRange { p, d });
    }
    let shells = spec.lattice().shells_up_to(cutoff)?;
    let holonomy = spec.holonomy();
    let prepared: Vec<(Vec<Vec<i64>>, Phase)> =
        holonomy.iter().map(|f| (transpose_rows(f), Phase::of(f))).collect();
    let terms: Vec<Vec<(f64, f64)>> = shells
        .iter()
        .map(|s| prepared.iter().map(|(mt, ph)| e_term_with(mt, ph, s)).collect())
        .collect();
    let order = holonomy.len() as f64;
    let mut tables = Vec::with_capacity(degrees.len());
    for &p in degrees {
        let traces: Vec<f64> = holonomy
            .iter()
            .map(|f| f.exterior_trace(p).map(|t| int_to_f64(&t)))
            .collect::<Result<_>>()?;
        let mut rows = Vec::new();
        let mut worst: f64 = 0.0;
        for (shell, e) in shells.iter().zip(&terms) {
            let (re, im) = traces
                .iter()
                .zip(e)
                .fold((0.0, 0.0), |(r, i), (tr, (er, ei))| (r + tr * er, i + tr * ei));
            let (re, im) = (re / order, im / order);
            let rounded = libm::round(re);
            let residual = im.abs().max((re - rounded).abs());
            if residual >= ROUNDING_TOLERANCE || rounded < 0.0 {
                return Err(Error::RoundingResidual { q: format!("{}", shell.q), residual });
            }
            worst = worst.max(residual);
            let m = rounded as u64;
            if m > 0 || shell.q.is_zero() {
                rows.push(SpectrumRow { q: shell.q.clone(), multiplicity: m });
            }
        }
        tables.push(SpectrumTable {
            spec_name: spec.name().into(),
            p,
            cutoff: cutoff.clone(),
            rows,
            max_residual: worst,
        });
    }
    Ok(tables)
}

/// Multiplicities of `q ≤ cutoff` in the spectrum of the Hodge Laplacian on `p`-forms.
pub fn p_spectrum(spec: &FlatOrbifoldSpec, p: usize, cutoff: &Rational) -> Result<SpectrumTable> {
    Ok(p_spectra(spec, &[p], cutoff)?.remove(0))
}

/// First `q` (ascending) where the multiplicities differ.
pub fn compare_spectra(a: &SpectrumTable, b: &SpectrumTable) -> Result<Comparison> {
    if a.p != b.p || a.cutoff != b.cutoff {
        return Err(Error::IncomparableTables(format!(
            "p={} Q={} vs p={} Q={}",
            a.p, a.cutoff, b.p, b.cutoff
        )));
    }
    let mut qs: Vec<&Rational> = a.rows.iter().chain(&b.rows).map(|r| &r.q).collect();
    qs.sort();
    qs.dedup();
    for q in qs {
        let (m_a, m_b) = (a.multiplicity(q), b.multiplicity(q));
        if m_a != m_b {
            return Ok(Comparison::Diverges { q: q.clone(), m_a, m_b });
        }
    }
    Ok(Comparison::Equal)
}

/// Pairwise comparison matrix of the `p`-spectra up to `cutoff`.
pub fn mutual_isospectrality(
    specs: &[FlatOrbifoldSpec],
    p: usize,
    cutoff: &Rational,
) -> Result<Vec<Vec<Comparison>>> {
    let tables = specs.iter().map(|s| p_spectrum(s, p, cutoff)).collect::<Result<Vec<_>>>()?;
    tables
        .iter()
        .map(|a| tables.iter().map(|b| compare_spectra(a, b)).collect())
        .collect()
}

/// `q` values as exact pairs `(numerator, denominator)`; handy for emitters.
pub fn q_parts(q: &Rational) -> (BigInt, BigInt) {
    let q: &BigRational = q;
    (q.numer().clone(), q.denom().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::linalg::{binomial, rat, IntMatrix};
    use crate::orbifold::{BuiltinCatalog, Catalog};
    use alloc::sync::Arc;
    use alloc::vec;

    fn spec(name: &str) -> FlatOrbifoldSpec {
        BuiltinCatalog.lookup(name).unwrap()
    }

    #[test]
    fn e_term_examples() {
        let l = Lattice::standard(4);
        let shells = l.shells_up_to(&rat(1, 1)).unwrap();
        let g: Arc<_> = l.gram().clone();
        let m = IntMatrix::diagonal(&[(-1).into(), (-1).into(), 1.into(), 1.into()]);
        let id = AffineIsometry::identity(g.clone());
        assert_eq!(e_term(&id, &shells[1]), (8.0, 0.0));
        let plain = AffineIsometry::from_point_and_shift(m.clone(), &vec![rat(0, 1); 4], g.clone()).unwrap();
        assert_eq!(e_term(&plain, &shells[1]).0, 4.0);
        let shifted =
            AffineIsometry::from_point_and_shift(m, &[rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 2)], g).unwrap();
        let (re, im) = e_term(&shifted, &shells[1]);
        assert!(re.abs() < 1e-12 && im.abs() < 1e-12);
    }

    #[test]
    fn torus_multiplicities() {
        let t = p_spectrum(&spec("torus(2)"), 0, &rat(1, 1)).unwrap();
        assert_eq!(t.rows, vec![SpectrumRow { q: rat(0, 1), multiplicity: 1 }, SpectrumRow { q: rat(1, 1), multiplicity: 4 }]);
        for p in 0..=3usize {
            let t = p_spectrum(&spec("torus(3)"), p, &rat(0, 1)).unwrap();
            assert_eq!(t.rows[0].multiplicity, binomial(3, p as i64).to_u64().unwrap());
        }
    }

    #[test]
    fn involution_pair_at_q_one() {
        let o = spec("O(4,2)");
        let m = spec("M(4,2)");
        assert_eq!(p_spectrum(&o, 0, &rat(1, 1)).unwrap().multiplicity(&rat(1, 1)), 6);
        assert_eq!(p_spectrum(&m, 0, &rat(1, 1)).unwrap().multiplicity(&rat(1, 1)), 4);
        assert_eq!(p_spectrum(&o, 1, &rat(1, 1)).unwrap().multiplicity(&rat(1, 1)), 16);
        assert_eq!(p_spectrum(&m, 1, &rat(1, 1)).unwrap().multiplicity(&rat(1, 1)), 16);
    }

    #[test]
    fn comparisons() {
        let a = p_spectrum(&spec("O(4,2)"), 0, &rat(4, 1)).unwrap();
        let b = p_spectrum(&spec("M(4,2)"), 0, &rat(4, 1)).unwrap();
        assert_eq!(compare_spectra(&a, &a).unwrap(), Comparison::Equal);
        assert_eq!(compare_spectra(&a, &b).unwrap(), Comparison::Diverges { q: rat(1, 1), m_a: 6, m_b: 4 });
        let c = p_spectrum(&spec("O(4,2)"), 1, &rat(4, 1)).unwrap();
        assert!(matches!(compare_spectra(&a, &c), Err(Error::IncomparableTables(_))));
    }

    #[test]
    fn degree_out_of_range() {
        assert!(matches!(p_spectrum(&spec("torus(2)"), 3, &rat(1, 1)), Err(Error::DegreeOutOfRange { .. })));
    }
}
