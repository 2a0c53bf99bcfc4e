//! Leading heat-trace invariants of flat orbifolds.
//!
//! For a primary stratum `N`, `b₀ᵖ(N) = vol(N)·Σ_{γ ∈ Iso^max(N)} tr_p(γ)/|det(I − A_γ)|`.
//! The predicted small-`t` heat trace is
//! `P(t) = (4πt)^{−d/2}·C(d,p)·vol(O) + Σ_N (4πt)^{−dim N/2}·b₀ᵖ(N)/|Iso(N)|`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::isometry::{AffineIsometry, EigenvalueType};
use crate::krawtchouk::krawtchouk_eval;
use crate::linalg::{binomial, rat_to_f64, Rational};
use crate::orbifold::{singular_strata, FlatOrbifoldSpec, SingularStratum, StrataCensus};
use crate::spectrum::p_spectrum;
use crate::surd::Surd;

/// `tr_p(γ)/|det(I − A_γ)|`.
pub fn b0p_element(g: &AffineIsometry, p: usize) -> Result<Rational> {
    Ok(BigRational::from_integer(g.exterior_trace(p)?) / g.det_complement())
}

/// `b₀ᵖ(N)`, exact.
pub fn b0p_stratum(stratum: &SingularStratum, p: usize) -> Result<Surd> {
    let mut sum = BigRational::zero();
    for g in &stratum.iso_max {
        sum += b0p_element(g, p)?;
    }
    Ok(stratum.volume.scale(&sum))
}

/// `b₀¹(γ) = (d − k − r + Σ 2cos θⱼ)·2^{−k}·Π csc²(θⱼ/2)` for an element of
/// eigenvalue type `E(θ₁,…,θ_s; r)` with `k = 2s + r`.
pub fn b01_eigentype(e: &EigenvalueType, d: usize, k: usize) -> Result<f64> {
    let s = e.angles().len();
    let r = e.minus_one();
    if k != 2 * s + r || k > d {
        return Err(Error::CodimensionMismatch(alloc::format!(
            "k = {k} but 2s + r = {} (s = {s}, r = {r}), d = {d}",
            2 * s + r
        )));
    }
    let cos_sum: f64 = e.angles().iter().map(|&t| 2.0 * libm::cos(t)).sum();
    let csc2: f64 = e
        .angles()
        .iter()
        .map(|&t| {
            let s = libm::sin(t / 2.0);
            1.0 / (s * s)
        })
        .product();
    Ok((d as f64 - k as f64 - r as f64 + cos_sum) * libm::pow(2.0, -(k as f64)) * csc2)
}

/// Parity invariants `B±ᵖ` with the minimal codimensions `k±` they aggregate.
#[derive(Clone, Debug, PartialEq)]
pub struct ParityInvariants {
    pub b_plus: Surd,
    pub b_minus: Surd,
    pub k_plus: Option<usize>,
    pub k_minus: Option<usize>,
}

pub fn b_parity(census: &StrataCensus, p: usize) -> Result<ParityInvariants> {
    let primary: Vec<&SingularStratum> = census.strata().iter().filter(|s| s.primary).collect();
    let min_codim = |parity: usize| primary.iter().filter(|s| s.codim % 2 == parity).map(|s| s.codim).min();
    let k_plus = min_codim(0);
    let k_minus = min_codim(1);
    let aggregate = |k: Option<usize>| -> Result<Surd> {
        let mut total = Surd::zero();
        if let Some(k) = k {
            for s in primary.iter().filter(|s| s.codim == k) {
                let w = Rational::new(1.into(), BigInt::from(s.isotropy_order));
                total = &total + &b0p_stratum(s, p)?.scale(&w);
            }
        }
        Ok(total)
    };
    Ok(ParityInvariants { b_plus: aggregate(k_plus)?, b_minus: aggregate(k_minus)?, k_plus, k_minus })
}

pub fn parity_invariants(spec: &FlatOrbifoldSpec, p: usize) -> Result<ParityInvariants> {
    b_parity(&singular_strata(spec), p)
}

#[derive(Clone, Debug, PartialEq)]
pub enum VolumeRecovery {
    Determined(Surd),
    NotDetermined(String),
}

/// `vol = 2^{k+1}·B₋ᵖ/K_pᵈ(k)` when every singular stratum has the same odd codimension `k`.
pub fn singular_volume_from_spectrum(spec: &FlatOrbifoldSpec, p: usize) -> Result<VolumeRecovery> {
    let d = spec.dim();
    if p > d {
        return Err(Error::DegreeOutOfRange { p, d });
    }
    let census = singular_strata(spec);
    let codims = census.codimensions();
    if codims.len() != 1 {
        return Err(Error::Precondition(alloc::format!(
            "singular strata must share one codimension, found {codims:?}"
        )));
    }
    let k = *codims.iter().next().expect("one codimension");
    if k % 2 == 0 {
        return Ok(VolumeRecovery::NotDetermined(alloc::format!("codimension {k} is even")));
    }
    let kraw = krawtchouk_eval(d as u32, p as u32, k as i64)?;
    if kraw.is_zero() {
        return Ok(VolumeRecovery::NotDetermined(alloc::format!("K_{p}^{d}({k}) = 0")));
    }
    let b_minus = b_parity(&census, p)?.b_minus;
    let factor = BigRational::new(BigInt::from(2u8).pow(k as u32 + 1), kraw);
    Ok(VolumeRecovery::Determined(b_minus.scale(&factor)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StratumCoefficient {
    pub id: usize,
    pub codim: usize,
    pub isotropy_order: usize,
    pub b0: Surd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeatReport {
    pub spec_name: String,
    pub p: usize,
    /// `a₀ᵖ = C(d,p)·vol(O)`.
    pub a0: Surd,
    pub b0: Vec<StratumCoefficient>,
    pub parity: ParityInvariants,
    /// `Σ_{codim j} b₀ᵖ(N)/|Iso(N)|`, exact.
    pub aggregates: BTreeMap<usize, Surd>,
    /// `c_j` multiplying `t^{j/2}` inside `(4πt)^{−d/2}(…)`; `c_0 = a₀ᵖ`.
    pub c: BTreeMap<usize, f64>,
}

impl HeatReport {
    /// Leading-terms prediction `P(t)`.
    pub fn predicted_trace(&self, d: usize, t: f64) -> f64 {
        let scale = libm::pow(4.0 * PI * t, -(d as f64) / 2.0);
        scale * self.c.iter().map(|(&j, &c)| c * libm::pow(t, j as f64 / 2.0)).sum::<f64>()
    }
}

pub fn heat_report(spec: &FlatOrbifoldSpec, p: usize) -> Result<HeatReport> {
    let d = spec.dim();
    if p > d {
        return Err(Error::DegreeOutOfRange { p, d });
    }
    let census = singular_strata(spec);
    let a0 = spec.volume().scale(&BigRational::from_integer(binomial(d as i64, p as i64)));
    let mut b0 = Vec::new();
    let mut aggregates: BTreeMap<usize, Surd> = BTreeMap::new();
    for s in census.strata() {
        let v = b0p_stratum(s, p)?;
        let w = Rational::new(1.into(), BigInt::from(s.isotropy_order));
        let entry = aggregates.entry(s.codim).or_default();
        *entry = &*entry + &v.scale(&w);
        b0.push(StratumCoefficient { id: s.id, codim: s.codim, isotropy_order: s.isotropy_order, b0: v });
    }
    let mut c = BTreeMap::new();
    c.insert(0, a0.to_f64());
    for (&j, agg) in &aggregates {
        let prev = c.get(&j).copied().unwrap_or(0.0);
        c.insert(j, prev + libm::pow(4.0 * PI, j as f64 / 2.0) * agg.to_f64());
    }
    Ok(HeatReport {
        spec_name: spec.name().into(),
        p,
        a0,
        b0,
        parity: b_parity(&census, p)?,
        aggregates,
        c,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeatCheck {
    pub t: f64,
    /// `Σ_{q ≤ Q} m·e^{−4π²qt}`.
    pub truncated: f64,
    pub predicted: f64,
    pub relative_error: f64,
    /// Upper bound on the omitted part `Σ_{q > Q} m·e^{−4π²qt}`.
    pub tail_bound: f64,
}

fn unit_ball_volume(d: usize) -> f64 {
    libm::pow(PI, d as f64 / 2.0) / libm::tgamma(d as f64 / 2.0 + 1.0)
}

/// Bounds `Σ_{q>Q} m_{p,q}·e^{−aq}` using `m ≤ C(d,p)·|shell|` and
/// `#{n : q(n) ≤ r} ≤ ω_d·(√r + D)^d·√det G`, where `D` is the diameter bound
/// of a dual fundamental cell. Integrating by parts gives
/// `tail ≤ C(d,p)·a·∫_Q^∞ e^{−ar}·N(r) dr`.
fn tail_bound(spec: &FlatOrbifoldSpec, p: usize, cutoff: f64, a: f64) -> f64 {
    let d = spec.dim();
    let dual = spec.lattice().dual_gram();
    let diam: f64 = (0..d).map(|i| libm::sqrt(rat_to_f64(&dual[(i, i)]))).sum();
    let det = rat_to_f64(&spec.gram().determinant().expect("square"));
    let omega = unit_ball_volume(d);
    let count = |r: f64| omega * libm::pow(libm::sqrt(r) + diam, d as f64) * libm::sqrt(det);
    // composite Simpson on [Q, Q + 80/a]; the integrand has decayed by e^{−80} there
    let span = 80.0 / a;
    let steps = 4000;
    let h = span / steps as f64;
    let f = |u: f64| libm::exp(-a * u) * count(cutoff + u);
    let mut acc = f(0.0) + f(span);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    let integral = acc * h / 3.0;
    let c = binomial(d as i64, p as i64).to_f64().unwrap_or(f64::INFINITY);
    c * a * libm::exp(-a * cutoff) * integral
}

/// Compares the truncated heat trace with the leading-terms prediction.
pub fn heat_trace_check(spec: &FlatOrbifoldSpec, p: usize, cutoff: &Rational, ts: &[f64]) -> Result<Vec<HeatCheck>> {
    if let Some(&t) = ts.iter().find(|&&t| t <= 0.0 || t.is_nan()) {
        return Err(Error::NonPositiveTime(t));
    }
    let table = p_spectrum(spec, p, cutoff)?;
    let report = heat_report(spec, p)?;
    let d = spec.dim();
    let q_max = rat_to_f64(cutoff);
    Ok(ts
        .iter()
        .map(|&t| {
            let a = 4.0 * PI * PI * t;
            let truncated: f64 = table
                .rows
                .iter()
                .map(|r| r.multiplicity as f64 * libm::exp(-a * rat_to_f64(&r.q)))
                .sum();
            let predicted = report.predicted_trace(d, t);
            HeatCheck {
                t,
                truncated,
                predicted,
                relative_error: (truncated - predicted).abs() / predicted.abs(),
                tail_bound: tail_bound(spec, p, q_max, a),
            }
        })
        .collect())
}
