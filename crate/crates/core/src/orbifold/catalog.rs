//! Named flat orbifolds.
//!
//! Recognised names:
//! `torus(d)`, `torus_hex`, `O(d,k)`, `M(d,k)`, `M(d,k,(a₁,…,a_d))`,
//! `square_2222`, `disk_22star`, `rp2_22x`, `disk_2star22`, `sphere_244`,
//! `cylinder`, `klein_bottle`, `hex_cone_d6`, `hex_cone_d6(m)` for m ∈ {2,3,4,6}.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{FlatOrbifoldSpec, RawGenerator};
use crate::error::{Error, Result};
use crate::linalg::{is_integer, parse_rational, rat, IntMatrix, RatMatrix, Rational};

pub trait Catalog {
    fn lookup(&self, name: &str) -> Result<FlatOrbifoldSpec>;

    /// Names of every entry worth sweeping in whole-catalog checks.
    fn names(&self) -> Vec<String>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BuiltinCatalog;

fn zero(d: usize) -> Vec<Rational> {
    vec![rat(0, 1); d]
}

fn involution(d: usize, k: usize) -> IntMatrix {
    let diag: Vec<BigInt> = (0..d).map(|i| if i < k { -BigInt::one() } else { BigInt::one() }).collect();
    IntMatrix::diagonal(&diag)
}

fn hex_gram() -> RatMatrix {
    RatMatrix::from_rows(vec![vec![rat(1, 1), rat(1, 2)], vec![rat(1, 2), rat(1, 1)]]).expect("2x2")
}

fn gen(m: &[&[i64]], a: &[Rational]) -> RawGenerator {
    RawGenerator { matrix: IntMatrix::from_i64(m), a: a.to_vec() }
}

fn parse_usize(s: &str, name: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::UnknownName(name.to_string()))
}

/// Splits `head(args)` into `head` and the raw argument text.
fn call_syntax(name: &str) -> Option<(&str, &str)> {
    let open = name.find('(')?;
    let inner = name[open + 1..].strip_suffix(')')?;
    Some((&name[..open], inner))
}

fn involution_params(args: &str, name: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = args.splitn(2, ',').collect();
    if parts.len() != 2 {
        return Err(Error::UnknownName(name.to_string()));
    }
    let d = parse_usize(parts[0], name)?;
    let k = parse_usize(parts[1], name)?;
    if d < 2 || k == 0 || k >= d {
        return Err(Error::InvalidParameters(format!("{name}: need d ≥ 2 and 1 ≤ k ≤ d−1")));
    }
    Ok((d, k))
}

/// `O_k`: the lattice `Zᵈ` with `γ_k = diag(−1×k, 1×(d−k))`.
pub fn involution_orbifold(d: usize, k: usize) -> Result<FlatOrbifoldSpec> {
    if d < 2 || k == 0 || k >= d {
        return Err(Error::InvalidParameters(format!("O({d},{k}): need d ≥ 2 and 1 ≤ k ≤ d−1")));
    }
    let g = RawGenerator { matrix: involution(d, k), a: zero(d) };
    FlatOrbifoldSpec::validate(format!("O({d},{k})"), RatMatrix::identity(d), vec![g])
}

/// `M_k`: as `O_k` but with `γ_k ∘ L_a`, `a ∈ (½Z)ᵈ` having a ½ among its last `d − k` entries.
pub fn involution_manifold(d: usize, k: usize, a: Option<Vec<Rational>>) -> Result<FlatOrbifoldSpec> {
    if d < 2 || k == 0 || k >= d {
        return Err(Error::InvalidParameters(format!("M({d},{k}): need d ≥ 2 and 1 ≤ k ≤ d−1")));
    }
    let explicit = a.is_some();
    let a = a.unwrap_or_else(|| {
        let mut a = zero(d);
        a[d - 1] = rat(1, 2);
        a
    });
    if a.len() != d {
        return Err(Error::InvalidParameters(format!("M({d},{k}): shift has {} entries", a.len())));
    }
    let two = rat(2, 1);
    if !a.iter().all(|x| is_integer(&(x * &two))) {
        return Err(Error::InvalidParameters(format!("M({d},{k}): shift entries must lie in ½Z")));
    }
    if !a[k..].iter().any(|x| !is_integer(x)) {
        return Err(Error::InvalidParameters(format!(
            "M({d},{k}): one of the last {} shift entries must be ½ mod 1",
            d - k
        )));
    }
    let name = if explicit {
        let entries: Vec<String> = a.iter().map(ToString::to_string).collect();
        format!("M({d},{k},({}))", entries.join(","))
    } else {
        format!("M({d},{k})")
    };
    let g = RawGenerator { matrix: involution(d, k), a };
    FlatOrbifoldSpec::validate(name, RatMatrix::identity(d), vec![g])
}

/// Cyclic rotation of order `m` on a 2-dimensional factor, times the identity on `Z⁴`.
pub fn cone_d6(m: usize) -> Result<FlatOrbifoldSpec> {
    let (gram2, rot): (RatMatrix, &[&[i64]]) = match m {
        2 => (RatMatrix::identity(2), &[&[-1, 0], &[0, -1]]),
        3 => (hex_gram(), &[&[-1, -1], &[1, 0]]),
        4 => (RatMatrix::identity(2), &[&[0, -1], &[1, 0]]),
        6 => (hex_gram(), &[&[0, -1], &[1, 1]]),
        _ => return Err(Error::InvalidParameters(format!("hex_cone_d6({m}): m must be 2, 3, 4 or 6"))),
    };
    let gram = gram2.direct_sum(&RatMatrix::identity(4), rat(0, 1));
    let matrix = IntMatrix::from_i64(rot).direct_sum(&IntMatrix::identity(4), BigInt::zero());
    FlatOrbifoldSpec::validate(format!("hex_cone_d6({m})"), gram, vec![RawGenerator { matrix, a: zero(6) }])
}

fn two_orbifold(name: &str) -> Result<FlatOrbifoldSpec> {
    let (o, h) = (rat(0, 1), rat(1, 2));
    let refl_x: &[&[i64]] = &[&[1, 0], &[0, -1]];
    let refl_y: &[&[i64]] = &[&[-1, 0], &[0, 1]];
    let gens = match name {
        "square_2222" => vec![gen(refl_x, &[o.clone(), o.clone()]), gen(refl_y, &[o.clone(), o])],
        "disk_22star" => vec![gen(refl_x, &[h, o.clone()]), gen(refl_y, &[o.clone(), o])],
        "rp2_22x" => vec![gen(refl_x, &[h.clone(), o.clone()]), gen(refl_y, &[o, h])],
        "disk_2star22" => vec![
            gen(&[&[0, 1], &[1, 0]], &[o.clone(), o.clone()]),
            gen(&[&[0, -1], &[-1, 0]], &[o.clone(), o]),
        ],
        "sphere_244" => vec![gen(&[&[0, -1], &[1, 0]], &[o.clone(), o])],
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    FlatOrbifoldSpec::validate(name, RatMatrix::identity(2), gens)
}

impl Catalog for BuiltinCatalog {
    fn lookup(&self, name: &str) -> Result<FlatOrbifoldSpec> {
        let name = name.trim();
        match name {
            "torus_hex" => return FlatOrbifoldSpec::validate(name, hex_gram(), vec![]),
            "cylinder" => return Ok(involution_orbifold(2, 1)?.with_name(name)),
            "klein_bottle" => {
                return Ok(involution_manifold(2, 1, Some(vec![rat(0, 1), rat(1, 2)]))?.with_name(name))
            }
            "hex_cone_d6" => return cone_d6(3),
            "square_2222" | "disk_22star" | "rp2_22x" | "disk_2star22" | "sphere_244" => {
                return two_orbifold(name)
            }
            _ => {}
        }
        let Some((head, args)) = call_syntax(name) else {
            return Err(Error::UnknownName(name.to_string()));
        };
        match head {
            "torus" => {
                let d = parse_usize(args, name)?;
                if d == 0 {
                    return Err(Error::InvalidParameters("torus(0)".into()));
                }
                FlatOrbifoldSpec::validate(name, RatMatrix::identity(d), vec![])
            }
            "O" => {
                let (d, k) = involution_params(args, name)?;
                involution_orbifold(d, k)
            }
            "M" => {
                // M(d,k) or M(d,k,(a1,...,ad))
                let (dk, shift) = match args.find(",(") {
                    Some(i) => {
                        let inner = args[i + 2..]
                            .strip_suffix(')')
                            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
                        let a = inner.split(',').map(|s| parse_rational(s.trim())).collect::<Result<Vec<_>>>()?;
                        (&args[..i], Some(a))
                    }
                    None => (args, None),
                };
                let (d, k) = involution_params(dk, name)?;
                involution_manifold(d, k, shift)
            }
            "hex_cone_d6" => cone_d6(parse_usize(args, name)?),
            _ => Err(Error::UnknownName(name.to_string())),
        }
    }

    fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=4).map(|d| format!("torus({d})")).collect();
        names.push("torus_hex".into());
        for (d, k) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (9, 3), (9, 6)] {
            names.push(format!("O({d},{k})"));
            names.push(format!("M({d},{k})"));
        }
        for n in ["square_2222", "disk_22star", "rp2_22x", "disk_2star22", "sphere_244", "cylinder", "klein_bottle"] {
            names.push(n.into());
        }
        for m in [2, 3, 4, 6] {
            names.push(format!("hex_cone_d6({m})"));
        }
        names
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_name_resolves() {
        let cat = BuiltinCatalog;
        for n in cat.names() {
            let spec = cat.lookup(&n).unwrap();
            assert!(spec.holonomy_order() >= 1, "{n}");
        }
    }

    #[test]
    fn group_orders() {
        let cat = BuiltinCatalog;
        for (n, order) in [
            ("torus(3)", 1),
            ("O(4,2)", 2),
            ("M(4,2)", 2),
            ("square_2222", 4),
            ("rp2_22x", 4),
            ("sphere_244", 4),
            ("hex_cone_d6", 3),
            ("hex_cone_d6(6)", 6),
        ] {
            assert_eq!(cat.lookup(n).unwrap().holonomy_order(), order, "{n}");
        }
    }

    #[test]
    fn shift_syntax_and_validation() {
        let cat = BuiltinCatalog;
        let k = cat.lookup("M(2,1,(0,1/2))").unwrap();
        assert_eq!(k.generators()[0].a, vec![rat(0, 1), rat(1, 2)]);
        assert_eq!(k.holonomy(), cat.lookup("klein_bottle").unwrap().holonomy());
        // the ½ sits among the first k entries only
        assert!(matches!(cat.lookup("M(2,1,(1/2,0))"), Err(Error::InvalidParameters(_))));
        assert!(matches!(cat.lookup("M(2,1,(0,1/3))"), Err(Error::InvalidParameters(_))));
        assert!(matches!(cat.lookup("O(3,3)"), Err(Error::InvalidParameters(_))));
        assert!(matches!(cat.lookup("hex_cone_d6(5)"), Err(Error::InvalidParameters(_))));
        assert!(matches!(cat.lookup("dodecahedron"), Err(Error::UnknownName(_))));
    }
}
