use crate::error::{Error, Result};
use crate::gf::{is_prime, Field, FieldSpec};
use crate::mpoly::MPoly;

fn univariate(field: &Field, coeffs: &[(u64, usize)]) -> MPoly {
    MPoly::from_terms(field, 1, coeffs.iter().map(|&(e, c)| (vec![e], c)))
}

/// Univariate polynomial swapping `c_a` and `c_b` and fixing everything else.
///
/// Conjugates `f(x) = x + sum_{k=0}^{q-2} x^k`, which swaps 0 and 1, by `x -> (x - a)/(b - a)`.
pub fn transposition_poly(field: &Field, a: usize, b: usize) -> Result<MPoly> {
    if a == b {
        return Err(Error::EqualPoints);
    }
    let q = field.q();
    let one = field.one();
    let mut base: Vec<(u64, usize)> = (0..=q as u64 - 2).map(|k| (k, one)).collect();
    base.push((1, one));
    let swap01 = univariate(field, &base);
    let d = field.sub(b, a);
    let d_inv = field.inv(d)?;
    // z = (x - a) / d
    let z = univariate(field, &[(1, d_inv), (0, field.mul(field.neg(a), d_inv))]);
    let inner = MPoly::compose_univariate(&swap01, &z)?;
    Ok(inner.scale(d).add_constant(a))
}

/// `(αx - 1)^(q-1) - x^(q-1) + αx` for the primitive element `α`; induces a `q`-cycle.
pub fn full_cycle_poly(field: &Field) -> MPoly {
    let q = field.q() as u64;
    let alpha = field.primitive_element();
    let one = field.one();
    let lin = univariate(field, &[(1, alpha), (0, field.neg(one))]);
    let x_top = univariate(field, &[(q - 1, one)]);
    let ax = univariate(field, &[(1, alpha)]);
    lin.pow(q - 1)
        .sub(&x_top)
        .and_then(|p| p.add(&ax))
        .expect("same ring")
}

/// `g + h` over disjoint variable blocks: `g` takes the first `g.nvars()` variables.
pub fn sum_lpp(g: &MPoly, h: &MPoly) -> Result<MPoly> {
    if **g.field() != **h.field() {
        return Err(Error::FieldMismatch);
    }
    let n = g.nvars() + h.nvars();
    g.embed(n, 0)?.add(&h.embed(n, g.nvars())?)
}

fn require_permutation(g: &MPoly) -> Result<()> {
    if g.nvars() != 1 || g.induced_permutation().is_none() {
        return Err(Error::NotPermutation);
    }
    Ok(())
}

/// `g(f(x))` for a univariate permutation polynomial `g`.
pub fn compose_outer(g: &MPoly, f: &MPoly) -> Result<MPoly> {
    require_permutation(g)?;
    MPoly::compose_univariate(g, f)
}

/// `f(h_1(x_1), …, h_n(x_n))` for univariate permutation polynomials `h_i`.
pub fn compose_inner(f: &MPoly, hs: &[MPoly]) -> Result<MPoly> {
    if hs.len() != f.nvars() {
        return Err(Error::ArityMismatch {
            expected: f.nvars(),
            got: hs.len(),
        });
    }
    let n = f.nvars();
    let subs = hs
        .iter()
        .enumerate()
        .map(|(i, h)| {
            require_permutation(h)?;
            h.embed(n, i)
        })
        .collect::<Result<Vec<_>>>()?;
    f.substitute(&subs)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(x_1^(p-2) + … + x_n^(p-2))^n` over `F_p`, an LPP of degree `n(p-2)`.
pub fn max_degree_lpp_n(p: u32, n: usize) -> Result<MPoly> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 3 {
        return Err(Error::UnsupportedOrder(p as usize));
    }
    if n == 0 || n >= p as usize || gcd(n, p as usize - 1) != 1 {
        return Err(Error::GcdViolation { p, n });
    }
    let field = FieldSpec::prime(p)?;
    let s = MPoly::from_terms(
        &field,
        n,
        (0..n).map(|i| {
            let mut e = vec![0u64; n];
            e[i] = p as u64 - 2;
            (e, field.one())
        }),
    );
    Ok(s.pow(n as u64))
}

/// A bivariate LPP of degree `2(q-2)` for `q > 3`.
pub fn max_degree_lpp_2(field: &Field) -> Result<MPoly> {
    let q = field.q();
    if q <= 3 {
        return Err(Error::UnsupportedOrder(q));
    }
    if q == 4 {
        return MPoly::parse(
            field,
            2,
            "ux^2y^2 + (u+1)x^2y + (u+1)xy^2 + xy + y^2 + ux + 1",
        );
    }
    let one = field.one();
    let ey = if q % 2 == 1 { q - 2 } else { (q - 2) / 2 };
    let s = MPoly::from_terms(
        field,
        2,
        [(vec![q as u64 - 2, 0], one), (vec![0, ey as u64], one)],
    );
    let mut acc = s.clone();
    let mut power = MPoly::constant(field, 2, one);
    for _ in 0..=q - 2 {
        acc = acc.add(&power)?;
        power = power.multiply(&s)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpp::is_lpp;
    use crate::mpoly::Degree;
    use crate::perm::Permutation;

    fn fields() -> Vec<Field> {
        vec![
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(3).unwrap(),
            FieldSpec::new(2, 2, None, None).unwrap(),
            FieldSpec::prime(5).unwrap(),
            FieldSpec::prime(7).unwrap(),
            FieldSpec::new(2, 3, None, None).unwrap(),
            FieldSpec::new(3, 2, None, None).unwrap(),
        ]
    }

    #[test]
    fn transposition_f3() {
        let f3 = FieldSpec::prime(3).unwrap();
        let t = transposition_poly(&f3, 0, 1).unwrap();
        assert_eq!(t, MPoly::parse(&f3, 1, "2x+1").unwrap());
        assert_eq!(t.induced_permutation().unwrap(), vec![1, 0, 2]);
        assert_eq!(transposition_poly(&f3, 2, 2), Err(Error::EqualPoints));
    }

    #[test]
    fn transposition_all_pairs() {
        for f in fields() {
            let q = f.q();
            for a in 0..q {
                for b in 0..q {
                    if a == b {
                        continue;
                    }
                    let img = transposition_poly(&f, a, b)
                        .unwrap()
                        .induced_permutation()
                        .unwrap();
                    for (c, &v) in img.iter().enumerate() {
                        let want = if c == a {
                            b
                        } else if c == b {
                            a
                        } else {
                            c
                        };
                        assert_eq!(v, want);
                    }
                }
            }
        }
    }

    #[test]
    fn full_cycle_single_cycle() {
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(full_cycle_poly(&f3), MPoly::parse(&f3, 1, "x+1").unwrap());
        for f in fields() {
            let img = full_cycle_poly(&f).induced_permutation().unwrap();
            assert_eq!(
                Permutation::from_images(img).unwrap().cycle_type(),
                vec![f.q()]
            );
        }
    }

    #[test]
    fn sums_and_compositions() {
        let f5 = FieldSpec::prime(5).unwrap();
        let cube = MPoly::parse(&f5, 1, "x^3").unwrap();
        let xy = sum_lpp(&cube, &cube).unwrap();
        let xyz = sum_lpp(&xy, &cube).unwrap();
        assert_eq!(xyz, MPoly::parse(&f5, 3, "x^3+y^3+z^3").unwrap());
        assert!(is_lpp(&xyz));
        let sq = MPoly::parse(&f5, 1, "x^2").unwrap();
        assert!(!is_lpp(&sum_lpp(&sq, &MPoly::var(&f5, 1, 0)).unwrap()));
        let outer = compose_outer(&cube, &xyz).unwrap();
        assert!(is_lpp(&outer));
        assert_eq!(outer.total_degree(), Degree::Finite(9));
        assert_eq!(compose_outer(&sq, &xyz), Err(Error::NotPermutation));
        let id = MPoly::var(&f5, 1, 0);
        assert_eq!(compose_outer(&id, &xyz).unwrap(), xyz);
        let shift = MPoly::parse(&f5, 1, "x+1").unwrap();
        let inner = compose_inner(&xyz, &[shift.clone(), shift.clone(), shift]).unwrap();
        assert!(is_lpp(&inner));
    }

    #[test]
    fn inner_composition_preserves_lpp_exhaustive_q5() {
        let f5 = FieldSpec::prime(5).unwrap();
        let f = MPoly::parse(&f5, 2, "x^3 + 2y").unwrap();
        let shift = MPoly::parse(&f5, 1, "x+1").unwrap();
        let mut g = f.clone();
        for _ in 0..5 {
            g = compose_inner(&g, &[shift.clone(), shift.clone()]).unwrap();
            assert!(is_lpp(&g));
        }
        assert_eq!(g, f);
    }

    #[test]
    fn extremal_degree_n() {
        let p53 = max_degree_lpp_n(5, 3).unwrap();
        assert_eq!(p53.total_degree(), Degree::Finite(9));
        assert_eq!(p53.coeff(&[3, 3, 3]), 1);
        assert!(is_lpp(&p53));
        let p72 = max_degree_lpp_n(7, 2);
        assert!(matches!(p72, Err(Error::GcdViolation { p: 7, n: 2 })));
        let p75 = max_degree_lpp_n(7, 5).unwrap();
        assert_eq!(p75.total_degree(), Degree::Finite(25));
        assert!(matches!(
            max_degree_lpp_n(3, 2),
            Err(Error::GcdViolation { .. })
        ));
        assert_eq!(max_degree_lpp_n(4, 1), Err(Error::NotPrime(4)));
    }

    #[test]
    fn extremal_degree_bivariate() {
        for f in fields() {
            let q = f.q();
            if q <= 3 {
                assert_eq!(max_degree_lpp_2(&f), Err(Error::UnsupportedOrder(q)));
                continue;
            }
            let p = max_degree_lpp_2(&f).unwrap();
            assert!(is_lpp(&p), "q = {q}");
            assert_eq!(
                p.total_degree(),
                Degree::Finite(2 * (q as u32 - 2)),
                "q = {q}"
            );
        }
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(max_degree_lpp_2(&f5).unwrap().coeff(&[3, 3]), 2);
        let f8 = FieldSpec::new(2, 3, None, None).unwrap();
        let p8 = max_degree_lpp_2(&f8).unwrap();
        let top: Vec<_> = p8
            .terms()
            .into_iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == 12)
            .collect();
        assert_eq!(top, vec![(&[6u32, 6][..], f8.one())]);
    }
}
