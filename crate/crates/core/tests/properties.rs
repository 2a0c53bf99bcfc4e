use std::f64::consts::PI;

use flatorb_core::heat::b01_eigentype;
use flatorb_core::isometry::{AffineIsometry, EigenvalueType};
use flatorb_core::krawtchouk::krawtchouk_eval;
use flatorb_core::lattice::Lattice;
use flatorb_core::linalg::{
    binomial, char_poly, int, principal_minor_sum, rat, IntMatrix, RatMatrix, Rational,
};
use flatorb_core::orbifold::{singular_strata, BuiltinCatalog, Catalog, StrataCensus};
use num_bigint::BigInt;
use proptest::prelude::*;

fn small_matrix(d: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-3i64..=3, d * d).prop_map(move |v| {
        IntMatrix::from_vec(d, d, v.into_iter().map(BigInt::from).collect()).unwrap()
    })
}

/// Product of elementary row operations; always unimodular.
fn unimodular(d: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..d, 0..d, -2i64..=2), 0..6).prop_map(move |ops| {
        let mut m = IntMatrix::identity(d);
        for (i, j, c) in ops {
            if i == j {
                continue;
            }
            for col in 0..d {
                let v = &m[(i, col)] + BigInt::from(c) * &m[(j, col)];
                m[(i, col)] = v;
            }
        }
        m
    })
}

/// Naive `det` of a small real matrix by Gaussian elimination with pivoting.
fn det_f64(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // det(xI − M) = Σ_p (−1)^p tr_p(M) x^{d−p}
    #[test]
    fn char_poly_matches_minor_sums(m in (1usize..=5).prop_flat_map(small_matrix)) {
        let d = m.rows();
        let cp = char_poly(&m).unwrap();
        for p in 0..=d {
            let sign = if p % 2 == 0 { int(1) } else { int(-1) };
            prop_assert_eq!(&cp[d - p], &(sign * principal_minor_sum(&m, p).unwrap()));
        }
    }

    #[test]
    fn krawtchouk_symmetries(d in 1u32..=20, p in 0u32..=20, k in 0u32..=20) {
        prop_assume!(p <= d && k <= d);
        let kp = krawtchouk_eval(d, p, i64::from(k)).unwrap();
        // K_p(d − k) = (−1)^p K_p(k)
        let mirrored = krawtchouk_eval(d, p, i64::from(d - k)).unwrap();
        prop_assert_eq!(&mirrored, &(if p % 2 == 0 { kp.clone() } else { -kp.clone() }));
        // C(d,k)·K_p(k) = C(d,p)·K_k(p)
        let swapped = krawtchouk_eval(d, k, i64::from(p)).unwrap();
        prop_assert_eq!(binomial(d.into(), k.into()) * &kp, binomial(d.into(), p.into()) * swapped);
    }

    // Σ_p K_p(k) z^p = (1 − z)^k (1 + z)^{d−k}
    #[test]
    fn krawtchouk_generating_function(d in 1u32..=24, k in 0u32..=24) {
        prop_assume!(k <= d);
        let mut poly = vec![int(1)];
        for i in 0..d {
            let s = if i < k { -1 } else { 1 };
            let mut next = vec![int(0); poly.len() + 1];
            for (j, c) in poly.iter().enumerate() {
                next[j] += c;
                next[j + 1] += c * s;
            }
            poly = next;
        }
        for p in 0..=d {
            prop_assert_eq!(&krawtchouk_eval(d, p, i64::from(k)).unwrap(), &poly[p as usize]);
        }
    }

    #[test]
    fn krawtchouk_is_involution_trace(d in 1usize..=9, k in 0usize..=9, p in 0usize..=9) {
        prop_assume!(k <= d && p <= d);
        let diag: Vec<BigInt> = (0..d).map(|i| if i < k { int(-1) } else { int(1) }).collect();
        let m = IntMatrix::diagonal(&diag);
        prop_assert_eq!(principal_minor_sum(&m, p).unwrap(), krawtchouk_eval(d as u32, p as u32, k as i64).unwrap());
    }

    #[test]
    fn shells_match_box_enumeration(
        a in (1usize..=3).prop_flat_map(small_matrix),
        cutoff in 0i64..=12,
    ) {
        let d = a.rows();
        let ar = a.to_rational();
        let gram = ar.transpose().mul_checked(&ar).unwrap();
        prop_assume!(gram.determinant().unwrap() != rat(0, 1));
        let lattice = Lattice::new(gram.clone()).unwrap();
        let q = rat(cutoff, 1);
        let shells = lattice.shells_up_to(&q).unwrap();
        // |nᵢ| ≤ √(Q·Gᵢᵢ) by Cauchy–Schwarz
        let bound: Vec<i64> = (0..d)
            .map(|i| ((cutoff as f64) * flatorb_core::linalg::rat_to_f64(&gram[(i, i)])).sqrt().floor() as i64)
            .collect();
        let mut expected = std::collections::BTreeMap::<Rational, Vec<Vec<i64>>>::new();
        let mut n = vec![0i64; d];
        fn walk(i: usize, n: &mut Vec<i64>, bound: &[i64], l: &Lattice, q: &Rational,
                out: &mut std::collections::BTreeMap<Rational, Vec<Vec<i64>>>) {
            if i == n.len() {
                let v = l.dual_norm(n);
                if v <= *q {
                    out.entry(v).or_default().push(n.clone());
                }
                return;
            }
            for x in -bound[i]..=bound[i] {
                n[i] = x;
                walk(i + 1, n, bound, l, q, out);
            }
        }
        walk(0, &mut n, &bound, &lattice, &q, &mut expected);
        let got: std::collections::BTreeMap<Rational, Vec<Vec<i64>>> =
            shells.into_iter().map(|s| (s.q, s.vectors)).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn census_volumes_survive_basis_change(
        name in prop::sample::select(vec![
            "square_2222", "disk_22star", "rp2_22x", "disk_2star22", "sphere_244", "O(3,1)", "O(3,2)",
        ]),
        p2 in unimodular(2),
        p3 in unimodular(3),
    ) {
        let spec = BuiltinCatalog.lookup(name).unwrap();
        let p = if spec.dim() == 2 { p2 } else { p3 };
        let moved = spec.change_basis(&p).unwrap();
        let (a, b) = (singular_strata(&spec), singular_strata(&moved));
        prop_assert_eq!(a.len(), b.len());
        for k in 0..=spec.dim() {
            prop_assert_eq!(a.volume_in_codim(k), b.volume_in_codim(k));
        }
        let orders = |c: &StrataCensus| {
            let mut v: Vec<(usize, usize)> = c.strata().iter().map(|s| (s.codim, s.isotropy_order)).collect();
            v.sort();
            v
        };
        prop_assert_eq!(orders(&a), orders(&b));
    }
}

fn random_eigentype() -> impl Strategy<Value = (Vec<(u32, u32)>, usize, usize)> {
    let angle = (3u32..=12).prop_flat_map(|m| (1..m).prop_map(move |j| (j, m)));
    (
        prop::collection::vec(angle, 0..=3),
        0usize..=3,
        0usize..=3,
    )
        .prop_filter("angle must lie in (0, π)", |(angles, _, _)| {
            angles.iter().all(|&(j, m)| 2 * j < m)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    // closed form vs tr₁(A)/det(I − A_⊥) of an explicit real block matrix
    #[test]
    fn b01_routes_agree((angles, r, extra) in random_eigentype()) {
        let s = angles.len();
        let k = 2 * s + r;
        let d = k + extra;
        prop_assume!(d >= 1);
        let thetas: Vec<f64> = angles.iter().map(|&(j, m)| 2.0 * PI * j as f64 / m as f64).collect();
        let ty = EigenvalueType::new(thetas.clone(), r, d).unwrap();
        let closed = b01_eigentype(&ty, d, k).unwrap();

        let mut block = vec![vec![0.0; k]; k];
        for (i, t) in thetas.iter().enumerate() {
            let (c, sn) = (t.cos(), t.sin());
            block[2 * i][2 * i] = c;
            block[2 * i][2 * i + 1] = -sn;
            block[2 * i + 1][2 * i] = sn;
            block[2 * i + 1][2 * i + 1] = c;
        }
        for i in 0..r {
            block[2 * s + i][2 * s + i] = -1.0;
        }
        let trace: f64 = (0..k).map(|i| block[i][i]).sum::<f64>() + extra as f64;
        let complement: Vec<Vec<f64>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 } - block[i][j]).collect())
            .collect();
        let oracle = trace / det_f64(complement).abs();
        prop_assert!((closed - oracle).abs() < 1e-9 * (1.0 + oracle.abs()), "{closed} vs {oracle}");
    }
}

#[test]
fn b01_routes_agree_on_catalog_strata() {
    let cat = BuiltinCatalog;
    let mut checked = 0;
    for name in cat.names() {
        let spec = cat.lookup(&name).unwrap();
        let d = spec.dim();
        for s in singular_strata(&spec).strata() {
            for g in &s.iso_max {
                let exact = flatorb_core::heat::b0p_element(g, 1).unwrap();
                let ty = g.eigenvalue_type().unwrap();
                let closed = b01_eigentype(&ty, d, d - g.fixed_dimension()).unwrap();
                let exact_f = flatorb_core::linalg::rat_to_f64(&exact);
                assert!((exact_f - closed).abs() < 1e-9, "{name}: {exact_f} vs {closed}");
                checked += 1;
            }
        }
    }
    assert!(checked > 20);
}

#[test]
fn gram_orthogonality_is_required() {
    let hex = RatMatrix::from_rows(vec![vec![rat(1, 1), rat(1, 2)], vec![rat(1, 2), rat(1, 1)]]).unwrap();
    let square_rotation = IntMatrix::from_i64(&[&[0, -1], &[1, 0]]);
    let g = std::sync::Arc::new(hex);
    assert!(AffineIsometry::new(square_rotation, vec![rat(0, 1); 2], g).is_err());
}
