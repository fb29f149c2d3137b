use conelab::hurwitz::{identity_residuals, mult_sign};
use conelab::scalar::SmallRational;
use conelab::{Algebra, Hurwitz, OctonionDerivation, Rational, Scalar};
use num_traits::Zero;
use proptest::prelude::*;

fn algebra() -> impl Strategy<Value = Algebra> {
    prop::sample::select(Algebra::ALL.to_vec())
}

fn float_triple() -> impl Strategy<Value = (Algebra, [Vec<f64>; 3])> {
    let c = || prop::collection::vec(-3.0f64..3.0, 8);
    (algebra(), c(), c(), c()).prop_map(|(a, x, y, z)| (a, [x, y, z]))
}

fn int_coords() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, 8)
}

fn half<T: Scalar>(alg: Algebra, c: &[i64]) -> Hurwitz<T> {
    Hurwitz::from_fn(alg, |k| T::from_frac(c[k], 2))
}

fn octonion(c: &[i64]) -> Hurwitz<Rational> {
    half(Algebra::O, c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn identities_hold_in_floats((alg, c) in float_triple()) {
        let h = |v: &Vec<f64>| Hurwitz::from_fn(alg, |k| v[k]);
        let (x, y, z) = (h(&c[0]), h(&c[1]), h(&c[2]));
        for (name, r) in identity_residuals(&x, &y, &z) {
            prop_assert!(r < 1e-16, "{alg} {name}: {r:e}");
        }
    }

    #[test]
    fn identities_hold_exactly(alg in algebra(), a in int_coords(), b in int_coords(), c in int_coords()) {
        let (x, y, z) = (half::<SmallRational>(alg, &a), half(alg, &b), half(alg, &c));
        if x.is_zero() {
            return Ok(());
        }
        for (name, r) in identity_residuals(&x, &y, &z) {
            prop_assert!(r == SmallRational::from_i64(0), "{alg} {name}");
        }
    }

    #[test]
    fn norm_is_multiplicative(alg in algebra(), a in int_coords(), b in int_coords()) {
        let (x, y) = (half::<Rational>(alg, &a), half::<Rational>(alg, &b));
        prop_assert_eq!((&x * &y).norm_sqr(), x.norm_sqr() * y.norm_sqr());
    }

    #[test]
    fn generators_are_derivations(a in int_coords(), b in int_coords(), x in int_coords(), y in int_coords()) {
        let d = OctonionDerivation::generator(octonion(&a), octonion(&b)).unwrap();
        let (x, y) = (octonion(&x), octonion(&y));
        let lhs = d.apply(&(&x * &y)).unwrap();
        let rhs = &(&d.apply(&x).unwrap() * &y) + &(&x * &d.apply(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert!(d.apply(&Hurwitz::one(Algebra::O)).unwrap().is_zero());
        prop_assert!(d.apply(&x).unwrap().inner(&x).is_zero());
    }

    #[test]
    fn json_round_trip(alg in algebra(), a in int_coords()) {
        let x = half::<Rational>(alg, &a);
        prop_assert_eq!(Hurwitz::<Rational>::from_json(&x.to_json()).unwrap(), x);
    }
}

#[test]
fn unit_table_is_signed_permutation() {
    for alg in Algebra::ALL {
        let d = alg.dim();
        for i in 0..d {
            let mut seen = vec![false; d];
            for j in 0..d {
                let p = &Hurwitz::<Rational>::unit(alg, i) * &Hurwitz::unit(alg, j);
                let nz: Vec<usize> = (0..d).filter(|&k| !p.coeff(k).is_zero()).collect();
                assert_eq!(nz.len(), 1);
                assert!(!seen[nz[0]]);
                seen[nz[0]] = true;
                assert_eq!(mult_sign(i, j).abs(), 1);
            }
        }
    }
}

#[test]
fn imaginary_units_square_to_minus_one() {
    for alg in Algebra::ALL {
        for k in 1..alg.dim() {
            let e = Hurwitz::<Rational>::unit(alg, k);
            assert_eq!(&e * &e, -Hurwitz::one(alg));
        }
    }
}

#[test]
fn octonions_are_not_associative() {
    let o = Algebra::O;
    let (a, b, c) = (Hurwitz::<Rational>::unit(o, 1), Hurwitz::unit(o, 2), Hurwitz::unit(o, 4));
    assert!(!a.associator(&b, &c).is_zero());
    let h = Algebra::H;
    let (a, b, c) = (Hurwitz::<Rational>::unit(h, 1), Hurwitz::unit(h, 2), Hurwitz::unit(h, 3));
    assert!(a.associator(&b, &c).is_zero());
}
