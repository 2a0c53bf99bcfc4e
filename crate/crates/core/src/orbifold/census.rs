//! Singular strata of `T/F`, where `T = Rᵈ/Λ` and `F` is the holonomy.
//!
//! Fixed-point sets are unions of affine subtori. Starting from the
//! components of `Fix(γ)`, the set is closed under intersection with further
//! fixed sets, so every closed stratum shows up as a subtorus whose pointwise
//! stabilizer is its generic isotropy. Subtori are then grouped into
//! `F`-orbits. In dimension ≤ 2 circles are further cut at the isolated
//! singular points lying on them.
//!
//! Volumes follow `vol_O = vol_T(C)·|H|/|S|` for pointwise stabilizer `H` and
//! setwise stabilizer `S`. 0-dimensional strata are measured by counting.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::subtorus::{solve_mod_one, Subtorus};
use super::FlatOrbifoldSpec;
use crate::isometry::{AffineIsometry, CyclotomicProfile};
use crate::linalg::{ext_gcd, frac, IntMatrix, Rational};
use crate::surd::Surd;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentCount {
    Exact(usize),
    Unrefined,
}

/// Isotropy group order together with the sorted cyclotomic profiles of its elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IsotropyType {
    pub order: usize,
    pub profiles: Vec<CyclotomicProfile>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularStratum {
    pub id: usize,
    pub dim: usize,
    pub codim: usize,
    pub isotropy_order: usize,
    /// Generic isotropy `Iso(N)`, identity included.
    pub isotropy: Vec<AffineIsometry>,
    /// Elements whose fixed space has the dimension of the stratum.
    pub iso_max: Vec<AffineIsometry>,
    pub primary: bool,
    /// `det(KᵀGK)` of the direction lattice of the closure (1 when 0-dimensional).
    pub gram_det: Rational,
    pub volume: Surd,
    pub component_count: ComponentCount,
    pub orientation_preserving_isotropy: bool,
    pub isotropy_type: IsotropyType,
    /// A point of the stratum and the direction lattice through it.
    pub representative: Vec<Rational>,
    pub direction: IntMatrix,
}

impl SingularStratum {
    pub fn isotropy_elements(&self) -> Vec<IntMatrix> {
        self.isotropy.iter().map(|g| g.linear().clone()).collect()
    }

    pub fn iso_max_elements(&self) -> Vec<IntMatrix> {
        self.iso_max.iter().map(|g| g.linear().clone()).collect()
    }

    pub fn volume_f64(&self) -> f64 {
        self.volume.to_f64()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StrataCensus {
    strata: Vec<SingularStratum>,
}

impl StrataCensus {
    pub fn strata(&self) -> &[SingularStratum] {
        &self.strata
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    /// Total volume of the strata of a given codimension.
    pub fn volume_in_codim(&self, codim: usize) -> Surd {
        self.strata.iter().filter(|s| s.codim == codim).map(|s| s.volume.clone()).sum()
    }

    pub fn codimensions(&self) -> BTreeSet<usize> {
        self.strata.iter().map(|s| s.codim).collect()
    }
}

struct Element<'a> {
    iso: &'a AffineIsometry,
}

fn stabilizers(c: &Subtorus, elems: &[Element<'_>]) -> (Vec<usize>, Vec<usize>) {
    let mut pointwise = Vec::new();
    let mut setwise = Vec::new();
    for (i, e) in elems.iter().enumerate() {
        if c.is_fixed_pointwise_by(e.iso) {
            pointwise.push(i);
        }
        if c.image(e.iso) == *c {
            setwise.push(i);
        }
    }
    (pointwise, setwise)
}

/// All subtori that are components of fixed sets of subgroups of `F`.
fn closed_fixed_subtori(elems: &[Element<'_>]) -> BTreeSet<Subtorus> {
    let mut found: BTreeSet<Subtorus> = BTreeSet::new();
    let mut queue: Vec<Subtorus> = Vec::new();
    for e in elems.iter().skip(1) {
        let t: Vec<Rational> = e.iso.translation().iter().map(|x| -x).collect();
        for c in solve_mod_one(&e.iso.fixed_equation(), &t) {
            if found.insert(c.clone()) {
                queue.push(c);
            }
        }
    }
    while let Some(c) = queue.pop() {
        let (ann, coset) = c.congruences();
        for e in elems.iter().skip(1) {
            if c.is_fixed_pointwise_by(e.iso) {
                continue;
            }
            let fix = e.iso.fixed_equation();
            let d = fix.cols();
            let mut data: Vec<BigInt> = ann.entries().to_vec();
            data.extend_from_slice(fix.entries());
            let a = IntMatrix::from_vec(ann.rows() + d, d, data).expect("stacked rows");
            let mut b = coset.clone();
            b.extend(e.iso.translation().iter().map(|x| -x));
            for sub in solve_mod_one(&a, &b) {
                if found.insert(sub.clone()) {
                    queue.push(sub);
                }
            }
        }
    }
    found
}

fn isotropy_type(isotropy: &[AffineIsometry]) -> IsotropyType {
    let mut profiles: Vec<CyclotomicProfile> = isotropy
        .iter()
        .map(|g| g.cyclotomic_profile().expect("holonomy elements have finite order"))
        .collect();
    profiles.sort();
    IsotropyType { order: isotropy.len(), profiles }
}

fn circle_parameter(w: &[BigInt], x: &[Rational]) -> Rational {
    frac(
        &w.iter()
            .zip(x)
            .fold(BigRational::zero(), |acc, (wi, xi)| acc + BigRational::from_integer(wi.clone()) * xi),
    )
}

/// `w` with `w·k = 1` for a primitive vector `k`.
fn dual_unit(k: &[BigInt]) -> Vec<BigInt> {
    let mut w = alloc::vec![BigInt::zero(); k.len()];
    let mut g = BigInt::zero();
    for (i, ki) in k.iter().enumerate() {
        let (ng, s, t) = ext_gcd(&g, ki);
        for wj in w.iter_mut().take(i) {
            *wj *= &s;
        }
        w[i] = t;
        g = ng;
    }
    debug_assert!(g.is_one(), "direction vector must be primitive");
    w
}

/// Orbits of arcs on a circle `C` cut at `cuts`, under its setwise stabilizer.
/// Returns, per orbit, the total arc fraction and the midpoint of its first arc.
fn arc_orbits(
    c: &Subtorus,
    cuts: &[Rational],
    setwise: &[&AffineIsometry],
) -> Vec<(Rational, Rational)> {
    let k = c.basis().column(0);
    let w = dual_unit(&k);
    let x0 = c.point();
    let n = cuts.len();
    let arcs: Vec<(Rational, Rational)> = (0..n)
        .map(|i| {
            let start = cuts[i].clone();
            let end = if i + 1 < n { cuts[i + 1].clone() } else { &cuts[0] + BigRational::one() };
            (start, end)
        })
        .collect();
    let arc_of = |s: &Rational| -> usize {
        let s = frac(s);
        match arcs.iter().position(|(a, b)| *a < s && s < *b) {
            Some(i) => i,
            // wraps past 1 into the last arc
            None => n - 1,
        }
    };
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for g in setwise {
        let eps = if g.linear().mul_vec(&k) == k { BigRational::one() } else { -BigRational::one() };
        let shift: Vec<Rational> = g.apply(x0).iter().zip(x0).map(|(a, b)| a - b).collect();
        let c_shift = circle_parameter(&w, &shift);
        for (i, (a, b)) in arcs.iter().enumerate() {
            let mid = (a + b) / BigRational::from_integer(2.into());
            let image = &eps * &mid + &c_shift;
            let j = arc_of(&image);
            let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut orbits: BTreeMap<usize, (Rational, Rational)> = BTreeMap::new();
    for (i, (a, b)) in arcs.iter().enumerate() {
        let r = root(&mut parent, i);
        let len = b - a;
        orbits
            .entry(r)
            .and_modify(|(total, _)| *total += &len)
            .or_insert_with(|| (len, frac(&((a + b) / BigRational::from_integer(2.into())))));
    }
    orbits.into_values().collect()
}

/// The singular-strata census of a validated spec.
pub fn singular_strata(spec: &FlatOrbifoldSpec) -> StrataCensus {
    let d = spec.dim();
    let elems: Vec<Element<'_>> = spec.holonomy().iter().map(|iso| Element { iso }).collect();
    let subtori = closed_fixed_subtori(&elems);
    let points: Vec<&Subtorus> = subtori.iter().filter(|c| c.dim() == 0).collect();

    let mut seen: BTreeSet<Subtorus> = BTreeSet::new();
    let mut strata: Vec<SingularStratum> = Vec::new();
    for c in &subtori {
        if seen.contains(c) {
            continue;
        }
        // `subtori` is sorted, so the first member reached is the orbit minimum
        for e in &elems {
            seen.insert(c.image(e.iso));
        }
        let (pointwise, setwise) = stabilizers(c, &elems);
        let isotropy: Vec<AffineIsometry> = pointwise.iter().map(|&i| elems[i].iso.clone()).collect();
        let m = c.dim();
        let iso_max: Vec<AffineIsometry> =
            isotropy.iter().filter(|g| g.fixed_dimension() == m).cloned().collect();
        let (gram_det, torus_volume) = if m == 0 {
            (BigRational::one(), Surd::rational(BigRational::one()))
        } else {
            let (det, _) = spec
                .lattice()
                .sublattice_covolume(c.basis())
                .expect("direction columns are independent");
            let v = Surd::sqrt(&det);
            (det, v)
        };
        let ratio = Rational::new(BigInt::from(pointwise.len()), BigInt::from(setwise.len()));
        let base = SingularStratum {
            id: 0,
            dim: m,
            codim: d - m,
            isotropy_order: isotropy.len(),
            primary: !iso_max.is_empty(),
            orientation_preserving_isotropy: isotropy.iter().all(AffineIsometry::is_orientation_preserving),
            isotropy_type: isotropy_type(&isotropy),
            iso_max,
            isotropy,
            gram_det,
            volume: Surd::zero(),
            component_count: ComponentCount::Exact(1),
            representative: c.point().to_vec(),
            direction: c.basis().clone(),
        };
        if m == 0 {
            strata.push(SingularStratum { volume: Surd::rational(BigRational::one()), ..base });
        } else if d <= 2 && m == 1 {
            let k = c.basis().column(0);
            let w = dual_unit(&k);
            let mut cuts: Vec<Rational> = points
                .iter()
                .filter(|p| c.contains(p))
                .map(|p| {
                    let off: Vec<Rational> = p.point().iter().zip(c.point()).map(|(a, b)| a - b).collect();
                    circle_parameter(&w, &off)
                })
                .collect();
            cuts.sort();
            let circle = &torus_volume * &ratio;
            if cuts.is_empty() {
                strata.push(SingularStratum { volume: circle, ..base });
                continue;
            }
            let stab: Vec<&AffineIsometry> = setwise.iter().map(|&i| elems[i].iso).collect();
            for (fraction, mid) in arc_orbits(c, &cuts, &stab) {
                let rep: Vec<Rational> = c
                    .point()
                    .iter()
                    .zip(&k)
                    .map(|(x, ki)| frac(&(x + &mid * BigRational::from_integer(ki.clone()))))
                    .collect();
                strata.push(SingularStratum {
                    volume: &circle * &fraction,
                    representative: rep,
                    ..base.clone()
                });
            }
        } else {
            let count = if d <= 2 { ComponentCount::Exact(1) } else { ComponentCount::Unrefined };
            strata.push(SingularStratum { volume: &torus_volume * &ratio, component_count: count, ..base });
        }
    }
    strata.sort_by(|a, b| {
        (a.codim, a.isotropy_order, &a.representative, &a.direction)
            .cmp(&(b.codim, b.isotropy_order, &b.representative, &b.direction))
    });
    for (i, s) in strata.iter_mut().enumerate() {
        s.id = i;
    }
    StrataCensus { strata }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::orbifold::{BuiltinCatalog, Catalog};
    use alloc::vec;

    fn census(name: &str) -> StrataCensus {
        singular_strata(&BuiltinCatalog.lookup(name).unwrap())
    }

    fn mirror_length(c: &StrataCensus) -> Surd {
        c.strata().iter().filter(|s| s.dim == 1).map(|s| s.volume.clone()).sum()
    }

    fn cone_orders(c: &StrataCensus) -> Vec<usize> {
        let mut v: Vec<usize> = c
            .strata()
            .iter()
            .filter(|s| s.dim == 0 && s.orientation_preserving_isotropy)
            .map(|s| s.isotropy_order)
            .collect();
        v.sort();
        v
    }

    #[test]
    fn involution_strata() {
        for (d, k) in [(2usize, 1usize), (4, 2), (5, 3)] {
            let c = census(&alloc::format!("O({d},{k})"));
            assert_eq!(c.len(), 1 << k);
            for s in c.strata() {
                assert_eq!((s.codim, s.isotropy_order, s.primary), (k, 2, true));
                assert_eq!(s.volume, Surd::rational(rat(1, 1)));
            }
        }
        assert!(census("M(4,2)").is_empty());
        assert!(census("klein_bottle").is_empty());
    }

    #[test]
    fn square_pillowcase_edges_and_corners() {
        let c = census("square_2222");
        let edges: Vec<&SingularStratum> = c.strata().iter().filter(|s| s.dim == 1).collect();
        let corners: Vec<&SingularStratum> = c.strata().iter().filter(|s| s.dim == 0).collect();
        assert_eq!(edges.len(), 4);
        assert_eq!(corners.len(), 4);
        for e in &edges {
            assert_eq!(e.volume, Surd::rational(rat(1, 2)));
            assert_eq!(e.isotropy_order, 2);
        }
        for p in &corners {
            assert_eq!(p.isotropy_order, 4);
            // −I fixes only the corner itself
            assert!(p.primary);
            assert_eq!(p.iso_max.len(), 1);
        }
        assert_eq!(mirror_length(&c), Surd::rational(rat(2, 1)));
    }

    #[test]
    fn remaining_two_orbifolds() {
        let c = census("disk_22star");
        assert_eq!(mirror_length(&c), Surd::rational(rat(1, 1)));
        assert_eq!(cone_orders(&c), vec![2, 2]);

        let c = census("rp2_22x");
        assert_eq!(c.len(), 2);
        assert_eq!(cone_orders(&c), vec![2, 2]);

        let c = census("disk_2star22");
        assert_eq!(mirror_length(&c), Surd::sqrt(&rat(2, 1)));
        assert_eq!(c.strata().iter().filter(|s| s.dim == 1).count(), 2);
        let corners = c.strata().iter().filter(|s| s.dim == 0 && !s.orientation_preserving_isotropy).count();
        assert_eq!(corners, 2);
        assert_eq!(cone_orders(&c), vec![2]);

        let c = census("sphere_244");
        assert_eq!(cone_orders(&c), vec![2, 4, 4]);
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn cone_points_in_dimension_six() {
        let c = census("hex_cone_d6");
        assert_eq!(c.len(), 3);
        for s in c.strata() {
            assert_eq!((s.dim, s.isotropy_order, s.iso_max.len()), (4, 3, 2));
            assert_eq!(s.component_count, ComponentCount::Unrefined);
            assert_eq!(s.volume, Surd::rational(rat(1, 1)));
        }
    }

    #[test]
    fn dual_unit_vector() {
        for k in [vec![3i64, 5], vec![1, 1], vec![-2, 7], vec![0, 1], vec![6, 10, 15]] {
            let kb: Vec<BigInt> = k.iter().map(|&x| BigInt::from(x)).collect();
            let w = dual_unit(&kb);
            let dot: BigInt = w.iter().zip(&kb).map(|(a, b)| a * b).sum();
            assert!(dot.is_one(), "{k:?}");
        }
    }
}
