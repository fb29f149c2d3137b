use conelab::jordan::min_eigenvalue;
use conelab::linmap::{
    check_lie_condition, check_sv_condition, coords, derivation_dimension, expm, from_coords, lie_map, quadratic_rep, space_dim, DerivationSpace,
    FnMap, LieMap,
};
use conelab::sampling::{gaussian_hurwitz, random_cone_element, random_hermitian, random_matrix, rng_for};
use conelab::{Algebra, ConeMap, HermitianMatrix, Hurwitz, JordanMap, OctonionDerivation, DEFAULT_EPS};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = (Algebra, usize)> {
    prop::sample::select(Algebra::ALL.to_vec()).prop_flat_map(|a| (Just(a), 2..=if a == Algebra::O { 3usize } else { 4 }))
}

/// Random `H` (real trace for octonions, plus a derivation).
fn random_lie(alg: Algebra, n: usize, seed: u64) -> LieMap<f64> {
    let mut rng = rng_for(seed, 0);
    let mut h = random_matrix(alg, n, &mut rng);
    let mut der = None;
    if alg == Algebra::O {
        let tr = h.trace();
        let im = Hurwitz::from_fn(alg, |k| if k == 0 { 0.0 } else { *tr.coeff(k) });
        h.set(0, 0, h.get(0, 0) - &im);
        let (a, b) = (gaussian_hurwitz(alg, &mut rng), gaussian_hurwitz(alg, &mut rng));
        der = Some(OctonionDerivation::generator(a, b).unwrap());
    }
    lie_map(h, der).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lie_maps_pass_the_lie_check((alg, n) in shape(), seed in any::<u64>()) {
        let a = random_lie(alg, n, seed);
        let rep = check_lie_condition(&a, 2000, seed, 1e-9).unwrap();
        prop_assert!(rep.pass, "{}", rep.max_abs_value);
    }

    #[test]
    fn exponential_preserves_the_cone((alg, n) in shape(), seed in any::<u64>()) {
        let a = random_lie(alg, n, seed).to_cone_map().unwrap();
        let mut rng = rng_for(seed, 1);
        for t in [0.0, 0.3, 1.0] {
            let e = expm(&a, t).unwrap();
            let x = random_cone_element(alg, n, &mut rng);
            let y = e.apply(&x);
            // octonion eigenvalues come from the cubic, which loses half the digits at a double root
            let tol = if alg == Algebra::O { 1e-6 } else { 1e-9 };
            prop_assert!(min_eigenvalue(&y) >= -tol * (1.0 + y.max_abs()));
        }
    }

    #[test]
    fn exponential_is_a_one_parameter_group((alg, n) in shape(), seed in any::<u64>(), s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let a = random_lie(alg, n, seed).to_cone_map().unwrap();
        let lhs = expm(&a, s + t).unwrap();
        let rhs = expm(&a, s).unwrap().compose(&expm(&a, t).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-9 * (1.0 + lhs.norm1()));
    }

    #[test]
    fn coords_round_trip((alg, n) in shape(), seed in any::<u64>()) {
        let x = random_hermitian(alg, n, &mut rng_for(seed, 0));
        let c = coords(&x);
        prop_assert_eq!(c.len(), space_dim(alg, n));
        prop_assert!(from_coords(alg, n, &c).sub(&x).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn quadratic_representations_pass_sv((alg, n) in shape(), seed in any::<u64>()) {
        let w = random_hermitian(alg, n, &mut rng_for(seed, 0));
        let p = quadratic_rep(&w);
        let rep = check_sv_condition(&p, 2000, seed, 1e-9 * (1.0 + w.max_abs().powi(2))).unwrap();
        prop_assert!(rep.pass, "{}", rep.min_value);
    }

    #[test]
    fn cone_map_matches_lie_map((alg, n) in shape(), seed in any::<u64>()) {
        let a = random_lie(alg, n, seed);
        let m = a.to_cone_map().unwrap();
        let x = random_hermitian(alg, n, &mut rng_for(seed, 2));
        prop_assert!(m.apply(&x).sub(&a.apply_to(&x).unwrap()).unwrap().max_abs() < 1e-10);
        let back = ConeMap::from_json(&m.to_json()).unwrap();
        prop_assert!(back.max_abs_diff(&m) == 0.0);
    }
}

#[test]
fn minus_trace_identity_fails_sv() {
    for alg in Algebra::ALL {
        let f = FnMap { alg, n: 3, f: |x: &HermitianMatrix<f64>| HermitianMatrix::identity(alg, 3).scale(&-x.trace()) };
        let rep = check_sv_condition(&f, 200, 0, DEFAULT_EPS).unwrap();
        assert!(!rep.pass);
        assert!(rep.witness.is_some());
        assert!((rep.min_value + 1.0).abs() < 1e-9);
    }
}

#[test]
fn trace_identity_is_not_lie() {
    let f = FnMap { alg: Algebra::C, n: 3, f: |x: &HermitianMatrix<f64>| HermitianMatrix::identity(Algebra::C, 3).scale(&x.trace()) };
    assert!(!check_lie_condition(&f, 200, 0, DEFAULT_EPS).unwrap().pass);
    assert!(check_sv_condition(&f, 200, 0, DEFAULT_EPS).unwrap().pass);
}

#[test]
fn checks_are_deterministic() {
    let a = random_lie(Algebra::H, 3, 7);
    let r1 = check_lie_condition(&a, 500, 3, DEFAULT_EPS).unwrap();
    let r2 = check_lie_condition(&a, 500, 3, DEFAULT_EPS).unwrap();
    assert_eq!(r1.to_json(), r2.to_json());
}

#[test]
fn small_derivation_dimensions() {
    let d = |s: &str| derivation_dimension(s.parse::<DerivationSpace>().unwrap()).unwrap();
    assert_eq!(d("H2R"), 1);
    assert_eq!(d("H3R"), 3);
    assert_eq!(d("H3C"), 8);
    assert_eq!(d("O"), 14);
}

#[test]
fn size_one_has_no_orthogonal_pairs() {
    let f = FnMap { alg: Algebra::H, n: 1, f: |x: &HermitianMatrix<f64>| x.scale(&-1.0) };
    let rep = check_sv_condition(&f, 100, 0, DEFAULT_EPS).unwrap();
    assert!(rep.pass && rep.witness.is_none());
}
