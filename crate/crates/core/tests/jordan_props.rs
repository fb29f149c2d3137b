use conelab::jordan::{
    char_poly_exact, cone_member, eigenvalues, jordan_product, jordan_square, min_eigenvalue, quadratic_rep_apply, rank_one_raw, trace_inner,
};
use conelab::{Algebra, ConeVector, HermitianMatrix, Hurwitz, Rational, Scalar};
use proptest::prelude::*;

/// `(alg, n)` with `n <= 3` for octonions.
fn shape() -> impl Strategy<Value = (Algebra, usize)> {
    prop::sample::select(Algebra::ALL.to_vec()).prop_flat_map(|a| (Just(a), 1..=if a == Algebra::O { 3usize } else { 4 }))
}

fn ints(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, len)
}

fn herm<T: Scalar>(alg: Algebra, n: usize, c: &[i64]) -> HermitianMatrix<T> {
    let d = alg.dim();
    HermitianMatrix::from_upper(alg, n, |l, m| Hurwitz::from_fn(alg, |k| T::from_frac(c[(l * n + m) * d + k], 2)))
}

fn vector<T: Scalar>(alg: Algebra, n: usize, c: &[i64], real_first: bool) -> ConeVector<T> {
    let d = alg.dim();
    ConeVector::from_fn(alg, n, |l| Hurwitz::from_fn(alg, |k| if real_first && l == 0 && k > 0 { T::zero() } else { T::from_frac(c[l * d + k], 2) }))
}

const POOL: usize = 4 * 4 * 8;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn jordan_identity((alg, n) in shape(), a in ints(POOL), b in ints(POOL)) {
        let x = herm::<Rational>(alg, n, &a);
        let y = herm::<Rational>(alg, n, &b);
        let x2 = jordan_square(&x);
        let lhs = jordan_product(&jordan_product(&x, &y).unwrap(), &x2).unwrap();
        let rhs = jordan_product(&x, &jordan_product(&y, &x2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_is_commutative_and_trace_inner_symmetric((alg, n) in shape(), a in ints(POOL), b in ints(POOL)) {
        let x = herm::<Rational>(alg, n, &a);
        let y = herm::<Rational>(alg, n, &b);
        prop_assert_eq!(jordan_product(&x, &y).unwrap(), jordan_product(&y, &x).unwrap());
        prop_assert_eq!(trace_inner(&x, &y).unwrap(), trace_inner(&y, &x).unwrap());
        prop_assert_eq!(trace_inner(&x, &y).unwrap(), jordan_product(&x, &y).unwrap().trace());
    }

    #[test]
    fn squares_lie_in_the_cone((alg, n) in shape(), a in ints(POOL)) {
        let x = herm::<Rational>(alg, n, &a);
        prop_assert!(cone_member(&jordan_square(&x)));
        prop_assert!(min_eigenvalue(&jordan_square(&x.to_f64())) > -1e-9);
    }

    #[test]
    fn rank_one_is_idempotent_multiple((alg, n) in shape(), a in ints(32)) {
        let u = vector::<Rational>(alg, n, &a, alg == Algebra::O);
        let x = rank_one_raw(&u);
        prop_assert_eq!(x.trace(), u.norm_sqr());
        prop_assert_eq!(jordan_square(&x), x.scale(&u.norm_sqr()));
        prop_assert!(cone_member(&x));
    }

    #[test]
    fn eigenvalues_sum_to_trace((alg, n) in shape(), a in ints(POOL)) {
        let x = herm::<f64>(alg, n, &a);
        let ev = eigenvalues(&x);
        prop_assert_eq!(ev.len(), n);
        let s: f64 = ev.iter().sum();
        prop_assert!((s - x.trace()).abs() < 1e-9);
        let s2: f64 = ev.iter().map(|e| e * e).sum();
        prop_assert!((s2 - trace_inner(&x, &x).unwrap()).abs() < 1e-8 * (1.0 + s2));
    }

    #[test]
    fn char_poly_vanishes_at_eigenvalues((alg, n) in shape(), a in ints(POOL)) {
        let x = herm::<Rational>(alg, n, &a);
        let p = char_poly_exact(&x);
        prop_assert_eq!(p.len(), n + 1);
        let scale: f64 = 1.0 + x.max_abs().powi(n as i32) * 8.0;
        for e in eigenvalues(&x.to_f64()) {
            let v = p.iter().fold(0.0, |acc, c| acc * e + c.to_f64());
            prop_assert!(v.abs() < 1e-7 * scale, "{v}");
        }
    }

    #[test]
    fn quadratic_rep_is_xyx(alg in prop::sample::select(vec![Algebra::R, Algebra::C, Algebra::H]), n in 1usize..=4, a in ints(POOL), b in ints(POOL)) {
        let x = herm::<Rational>(alg, n, &a);
        let y = herm::<Rational>(alg, n, &b);
        let xyx = x.as_mat().matmul(y.as_mat()).unwrap().matmul(x.as_mat()).unwrap();
        let p = quadratic_rep_apply(&x, &y).unwrap();
        prop_assert_eq!(p.as_mat(), &xyx);
    }

    #[test]
    fn json_round_trip((alg, n) in shape(), a in ints(POOL)) {
        let x = herm::<Rational>(alg, n, &a);
        prop_assert_eq!(HermitianMatrix::<Rational>::from_json(&x.to_json()).unwrap(), x.clone());
        let u = vector::<Rational>(alg, n, &a, false);
        prop_assert_eq!(ConeVector::<Rational>::from_json(&u.to_json()).unwrap(), u);
    }
}

#[test]
fn negative_definite_is_outside() {
    for alg in Algebra::ALL {
        let x = HermitianMatrix::<Rational>::diag_real(alg, &[Rational::from_i64(1), Rational::from_i64(-1)]);
        assert!(!cone_member(&x));
        assert!(cone_member(&HermitianMatrix::<Rational>::identity(alg, 3)));
        assert!(cone_member(&HermitianMatrix::<Rational>::zero(alg, 3)));
    }
}

#[test]
fn off_diagonal_unit_has_spectrum_plus_minus_one() {
    for alg in Algebra::ALL {
        for k in 0..alg.dim() {
            let x = HermitianMatrix::<f64>::elementary(alg, 3, 0, 2, Hurwitz::unit(alg, k));
            let mut ev = eigenvalues(&x);
            ev.sort_by(f64::total_cmp);
            for (a, b) in ev.iter().zip([-1.0, 0.0, 1.0]) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
