use conelab::exotic::{
    det_pattern, ineq1_exact, octonion_case_value, quadratic_form, quadratic_form_simplified, reduce_yu, z_factor, z_inequality, ExoticGenerator,
};
use conelab::jordan::PairCase;
use conelab::linalg::{det_cofactor, det_rational};
use conelab::sampling::{gaussian_vector, rng_for, sample_orthogonal_pair_exact};
use conelab::{Algebra, ConeVector, HermitianMatrix, Hurwitz, JordanMap, Rational, Scalar};
use num_traits::Zero;
use proptest::prelude::*;

fn associative() -> impl Strategy<Value = Algebra> {
    prop::sample::select(vec![Algebra::R, Algebra::C, Algebra::H])
}

fn half(c: i64) -> Rational {
    Rational::from_frac(c, 2)
}

fn oct(c: &[i64]) -> Hurwitz<Rational> {
    Hurwitz::from_fn(Algebra::O, |k| half(c[k]))
}

fn oct_coords() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simplified_form_matches_direct(alg in associative(), n in 3usize..=6, seed in any::<u64>()) {
        let b = ExoticGenerator::build(n, alg).unwrap();
        let (u, v) = sample_orthogonal_pair_exact(alg, n, seed, 0);
        let direct = quadratic_form(&b, &u, &v).unwrap();
        prop_assert_eq!(&direct, &quadratic_form_simplified(&b, &u, &v).unwrap());
        prop_assert!(direct >= Rational::zero());
    }

    #[test]
    fn octonion_case3_matches_direct(seed in any::<u64>()) {
        let b = ExoticGenerator::build(3, Algebra::O).unwrap();
        let (u, v) = sample_orthogonal_pair_exact(Algebra::O, 3, seed, 0);
        let c = octonion_case_value(&u, &v).unwrap();
        prop_assert_eq!(c.case, PairCase::Case3);
        prop_assert_eq!(&c.value, &quadratic_form(&b, &u, &v).unwrap());
        let (d, bound) = (c.discriminant.unwrap(), c.discriminant_bound.unwrap());
        prop_assert!(d <= bound);
        prop_assert!(bound <= Rational::zero());
    }

    #[test]
    fn octonion_case2_matches_direct(u1 in 1i64..=4, v1 in -4i64..=4, u3 in oct_coords(), v2 in oct_coords()) {
        let o = Algebra::O;
        let u3 = oct(&u3);
        prop_assume!(!u3.is_zero());
        let (u1, v1) = (half(u1), half(v1));
        let v3 = -u3.conj().inverse().unwrap().scale(&(&u1 * &v1));
        let u = ConeVector::new(o, vec![Hurwitz::real(o, u1), Hurwitz::zero(o), u3]).unwrap();
        let v = ConeVector::new(o, vec![Hurwitz::real(o, v1), oct(&v2), v3]).unwrap();
        prop_assume!(!v.is_zero());
        let b = ExoticGenerator::build(3, o).unwrap();
        let c = octonion_case_value(&u, &v).unwrap();
        prop_assert_eq!(c.case, PairCase::Case2);
        prop_assert_eq!(c.value, quadratic_form(&b, &u, &v).unwrap());
    }

    #[test]
    fn octonion_case1_matches_direct(v2 in oct_coords(), v3 in oct_coords()) {
        let o = Algebra::O;
        let u = ConeVector::new(o, vec![Hurwitz::one(o), Hurwitz::zero(o), Hurwitz::zero(o)]).unwrap();
        let v = ConeVector::new(o, vec![Hurwitz::zero(o), oct(&v2), oct(&v3)]).unwrap();
        prop_assume!(!v.is_zero());
        let b = ExoticGenerator::build(3, o).unwrap();
        let c = octonion_case_value(&u, &v).unwrap();
        prop_assert_eq!(c.case, PairCase::Case1);
        prop_assert_eq!(c.value, quadratic_form(&b, &u, &v).unwrap());
    }

    #[test]
    fn det_pattern_matches_cofactor(n in 3usize..=7, seed in any::<u64>()) {
        let b = ExoticGenerator::build(n, Algebra::R).unwrap();
        let u = gaussian_vector(Algebra::R, n, &mut rng_for(seed, 0));
        let y = reduce_yu(&b, &u).unwrap();
        let diag: Vec<f64> = (0..n - 1).map(|l| y[l][l]).collect();
        let pat = det_pattern(&diag, &y[0][1]);
        let cof = det_cofactor(&y);
        prop_assert!((pat - cof).abs() <= 1e-8 * (1.0 + cof.abs()), "{pat} {cof}");
    }

    #[test]
    fn det_pattern_exact(a in prop::collection::vec(-8i64..=8, 1..6), b in -8i64..=8) {
        let a: Vec<Rational> = a.into_iter().map(half).collect();
        let b = half(b);
        let m: Vec<Vec<Rational>> = (0..a.len()).map(|l| (0..a.len()).map(|k| if l == k { a[l].clone() } else { b.clone() }).collect()).collect();
        prop_assert_eq!(det_pattern(&a, &b), det_rational(&m));
    }

    #[test]
    fn z_forms_agree(num in -40i64..=40, den in 1i64..=9, n in 2usize..=9) {
        let z = Rational::from_frac(num, den);
        let f = z_factor(&z, n);
        prop_assert_eq!(&f, &z_inequality(&z, n));
        if num >= 0 {
            prop_assert!(f >= Rational::zero());
        }
    }

    #[test]
    fn ineq1_holds(n in 3usize..=6, w in prop::collection::vec(1i64..=50, 6)) {
        let w: Vec<Rational> = w[..n].iter().map(|&k| Rational::from_frac(k, 7)).collect();
        prop_assert!(ineq1_exact(n, &w) >= Rational::zero());
    }
}

#[test]
fn identity_is_in_the_kernel() {
    for (n, alg) in [(3, Algebra::R), (4, Algebra::C), (5, Algebra::H), (3, Algebra::O)] {
        let b = ExoticGenerator::build(n, alg).unwrap();
        let y = b.apply_to(&HermitianMatrix::<Rational>::identity(alg, n)).unwrap();
        assert!(y.is_negligible(0.0));
    }
}

#[test]
fn coefficients_at_small_sizes() {
    let b = ExoticGenerator::build(3, Algebra::R).unwrap();
    assert_eq!([b.p::<f64>(), b.q(), b.r(), b.s(), b.t()], [2.5, 10.0, 0.0, 6.0, 4.0]);
    let b = ExoticGenerator::build(4, Algebra::R).unwrap();
    assert_eq!([b.p::<f64>(), b.q(), b.r(), b.s(), b.t()], [11.0, 33.0, 12.0, 12.0, 9.0]);
}

#[test]
fn rejects_unsupported_sizes() {
    assert!(ExoticGenerator::build(2, Algebra::R).is_err());
    assert!(ExoticGenerator::build(4, Algebra::O).is_err());
    let b = ExoticGenerator::build(3, Algebra::O).unwrap();
    let (u, v) = sample_orthogonal_pair_exact(Algebra::O, 3, 0, 0);
    assert!(quadratic_form_simplified(&b, &u, &v).is_err());
}
