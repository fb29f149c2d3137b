//! Seeded random inputs. Every sampler is a pure function of `(seed, index)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hurwitz::{Algebra, Hurwitz};
use crate::jordan::{rank_one_raw, ConeVector, HermitianMatrix, Mat};
use crate::scalar::{Rational, Scalar};

/// Generator for sample `index` of the stream `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

pub fn gaussian_hurwitz(alg: Algebra, rng: &mut impl Rng) -> Hurwitz<f64> {
    Hurwitz::from_fn(alg, |_| rng.sample(StandardNormal))
}

pub fn gaussian_vector(alg: Algebra, n: usize, rng: &mut impl Rng) -> ConeVector<f64> {
    ConeVector::from_fn(alg, n, |_| gaussian_hurwitz(alg, rng))
}

/// Unit vector; the first component is real when `real_first` is set.
pub fn random_unit_vector(alg: Algebra, n: usize, real_first: bool, rng: &mut impl Rng) -> ConeVector<f64> {
    let mut u = gaussian_vector(alg, n, rng);
    if real_first {
        let r = u.get(0).re();
        u.set(0, Hurwitz::real(alg, r));
    }
    u.normalized()
}

pub fn random_hermitian(alg: Algebra, n: usize, rng: &mut impl Rng) -> HermitianMatrix<f64> {
    HermitianMatrix::from_upper(alg, n, |_, _| gaussian_hurwitz(alg, rng))
}

pub fn random_matrix(alg: Algebra, n: usize, rng: &mut impl Rng) -> Mat<f64> {
    Mat::from_fn(alg, n, |_, _| gaussian_hurwitz(alg, rng))
}

/// A random element of the cone: `Σ λ_k u_k u_k*` with `λ_k >= 0`, normalized to trace 1.
pub fn random_cone_element(alg: Algebra, n: usize, rng: &mut impl Rng) -> HermitianMatrix<f64> {
    let terms = rng.random_range(1..=n + 1);
    let mut x = HermitianMatrix::zero(alg, n);
    for _ in 0..terms {
        let u = random_unit_vector(alg, n, alg == Algebra::O, rng);
        let lam: f64 = rng.random::<f64>();
        x = x.add(&rank_one_raw(&u).scale(&lam)).expect("same shape");
    }
    let tr = x.trace();
    x.scale(&(1.0 / tr))
}

fn zero_some(u: &mut ConeVector<f64>, rng: &mut impl Rng) {
    // occasional exact zeros for boundary coverage
    let n = u.len();
    if rng.random_range(0..8) == 0 {
        let k = rng.random_range(0..n);
        u.set(k, Hurwitz::zero(u.algebra()));
    }
}

/// Unit pair with `⟨uu*, vv*⟩ = 0`.
///
/// Associative algebras: `v` is projected against `u`, so `v*u = 0`.
/// Octonions (`n = 3`): one of the three orthogonality cases; `index % 16` selects
/// case 1 (`0`), case 2 (`1`), otherwise case 3 with `v_2` reconstructed.
/// Octonions (`n = 2`): `u = (a, x)`, `v = (|x|², −ax)` up to scale.
///
/// Panics for `n < 2`, where no such pair exists.
pub fn sample_orthogonal_pair(alg: Algebra, n: usize, seed: u64, index: u64) -> (ConeVector<f64>, ConeVector<f64>) {
    assert!(n >= 2, "orthogonal pairs need n >= 2");
    let mut rng = rng_for(seed, index);
    if alg == Algebra::O && n == 2 {
        return octonion_pair2(&mut rng);
    }
    if alg == Algebra::O {
        return octonion_pair(&mut rng, index);
    }
    loop {
        let mut u = gaussian_vector(alg, n, &mut rng);
        zero_some(&mut u, &mut rng);
        if u.norm_sqr() < 1e-8 {
            continue;
        }
        let u = u.normalized();
        let mut v = gaussian_vector(alg, n, &mut rng);
        zero_some(&mut v, &mut rng);
        // v <- v − u (u*v)
        let c = u.dot(&v);
        let v = v.sub(&u.mul_right(&c));
        if v.norm_sqr() < 1e-8 {
            continue;
        }
        return (u, v.normalized());
    }
}

fn real_h(v: f64) -> Hurwitz<f64> {
    Hurwitz::real(Algebra::O, v)
}

fn octonion_pair2(rng: &mut impl Rng) -> (ConeVector<f64>, ConeVector<f64>) {
    let o = Algebra::O;
    loop {
        let a: f64 = if rng.random_range(0..8) == 0 { 0.0 } else { rng.sample(StandardNormal) };
        let x = if rng.random_range(0..8) == 0 { Hurwitz::zero(o) } else { gaussian_hurwitz(o, rng) };
        let u = ConeVector::new(o, vec![real_h(a), x.clone()]).unwrap();
        let v = if x.norm_sqr() < 1e-8 {
            ConeVector::new(o, vec![real_h(0.0), gaussian_hurwitz(o, rng)]).unwrap()
        } else {
            ConeVector::new(o, vec![real_h(x.norm_sqr()), x.scale(&-a)]).unwrap()
        };
        if u.norm_sqr() < 1e-8 || v.norm_sqr() < 1e-8 {
            continue;
        }
        return (u.normalized(), v.normalized());
    }
}

fn octonion_pair(rng: &mut impl Rng, index: u64) -> (ConeVector<f64>, ConeVector<f64>) {
    let o = Algebra::O;
    let z = Hurwitz::zero(o);
    loop {
        let u1: f64 = rng.sample(StandardNormal);
        let v1: f64 = rng.sample(StandardNormal);
        let (u, v) = match index % 16 {
            0 => {
                let u = ConeVector::new(o, vec![real_h(1.0), z.clone(), z.clone()]).unwrap();
                let v = ConeVector::new(o, vec![z.clone(), gaussian_hurwitz(o, rng), gaussian_hurwitz(o, rng)]).unwrap();
                (u, v)
            }
            1 => {
                let u3 = gaussian_hurwitz(o, rng);
                let v3 = -u3.conj().inverse().expect("nonzero").scale(&(u1 * v1));
                let u = ConeVector::new(o, vec![real_h(u1), z.clone(), u3]).unwrap();
                let v = ConeVector::new(o, vec![real_h(v1), gaussian_hurwitz(o, rng), v3]).unwrap();
                (u, v)
            }
            k => {
                let u1 = if k == 2 { 0.0 } else { u1 };
                let u2 = gaussian_hurwitz(o, rng);
                let u3 = if k == 3 { z.clone() } else { gaussian_hurwitz(o, rng) };
                let v3 = gaussian_hurwitz(o, rng);
                let v2 = case3_v2(u1, &u2, &u3, v1, &v3);
                let u = ConeVector::new(o, vec![real_h(u1), u2, u3]).unwrap();
                let v = ConeVector::new(o, vec![real_h(v1), v2, v3]).unwrap();
                (u, v)
            }
        };
        if u.norm_sqr() < 1e-8 || v.norm_sqr() < 1e-8 {
            continue;
        }
        return (u.normalized(), v.normalized());
    }
}

/// `v_2 = −u_1 v_1 ū_2⁻¹ − (ū_2⁻¹ ū_3) v_3`.
pub fn case3_v2<T: Scalar>(u1: T, u2: &Hurwitz<T>, u3: &Hurwitz<T>, v1: T, v3: &Hurwitz<T>) -> Hurwitz<T> {
    let inv = u2.conj().inverse().expect("u_2 != 0");
    let a = inv.scale(&(u1 * v1));
    let b = &(&inv * &u3.conj()) * v3;
    -(a + b)
}

/// Small-denominator rational, `k/den` with `|k| <= range`.
pub fn small_rational(rng: &mut impl Rng, range: i64, den: i64) -> Rational {
    Rational::from_frac(rng.random_range(-range..=range), den)
}

/// Coordinates `k/2` with `|k| <= 4`.
pub fn small_hurwitz(alg: Algebra, rng: &mut impl Rng) -> Hurwitz<Rational> {
    Hurwitz::from_fn(alg, |_| small_rational(rng, 4, 2))
}

/// Exact orthogonal pair with small rational coordinates (not normalized).
pub fn sample_orthogonal_pair_exact(alg: Algebra, n: usize, seed: u64, index: u64) -> (ConeVector<Rational>, ConeVector<Rational>) {
    let mut rng = rng_for(seed, index);
    if alg == Algebra::O && n == 2 {
        let o = Algebra::O;
        loop {
            let a = small_rational(&mut rng, 4, 2);
            let x = small_hurwitz(o, &mut rng);
            if x.is_zero() {
                continue;
            }
            let v = ConeVector::new(o, vec![Hurwitz::real(o, x.norm_sqr()), x.scale(&-a.clone())]).unwrap();
            return (ConeVector::new(o, vec![Hurwitz::real(o, a), x]).unwrap(), v);
        }
    }
    if alg == Algebra::O {
        let o = Algebra::O;
        loop {
            let u1 = small_rational(&mut rng, 4, 2);
            let v1 = small_rational(&mut rng, 4, 2);
            let u2 = small_hurwitz(o, &mut rng);
            if u2.is_zero() {
                continue;
            }
            let u3 = small_hurwitz(o, &mut rng);
            let v3 = small_hurwitz(o, &mut rng);
            let v2 = case3_v2(u1.clone(), &u2, &u3, v1.clone(), &v3);
            let u = ConeVector::new(o, vec![Hurwitz::real(o, u1), u2, u3]).unwrap();
            let v = ConeVector::new(o, vec![Hurwitz::real(o, v1), v2, v3]).unwrap();
            if v.is_zero() {
                continue;
            }
            return (u, v);
        }
    }
    loop {
        let u = ConeVector::from_fn(alg, n, |_| small_hurwitz(alg, &mut rng));
        let v = ConeVector::from_fn(alg, n, |_| small_hurwitz(alg, &mut rng));
        if u.is_zero() {
            continue;
        }
        // v <- v |u|² − u (u*v)
        let v = v.scale(&u.norm_sqr()).sub(&u.mul_right(&u.dot(&v)));
        if v.is_zero() {
            continue;
        }
        return (u, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::{orthogonal_pair_classify, rank_one, trace_inner, PairCase};
    use num_traits::Zero;

    #[test]
    fn pairs_are_orthogonal() {
        for (alg, n) in Algebra::ALL.iter().flat_map(|&a| [(a, 2), (a, if a == Algebra::O { 3 } else { 4 })]) {
            for i in 0..200 {
                let (u, v) = sample_orthogonal_pair(alg, n, 7, i);
                assert!((u.norm_sqr() - 1.0).abs() < 1e-12);
                assert!((v.norm_sqr() - 1.0).abs() < 1e-12);
                let ip = trace_inner(&rank_one(&u).unwrap(), &rank_one(&v).unwrap()).unwrap();
                assert!(ip.abs() < 1e-12, "{alg} {i}: {ip}");
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = sample_orthogonal_pair(Algebra::H, 3, 11, 5);
        let b = sample_orthogonal_pair(Algebra::H, 3, 11, 5);
        assert_eq!(a, b);
    }

    #[test]
    fn exact_pairs() {
        for alg in Algebra::ALL {
            for i in 0..20 {
                let (u, v) = sample_orthogonal_pair_exact(alg, 3, 3, i);
                let (u2, v2) = sample_orthogonal_pair_exact(alg, 2, 3, i);
                assert!(trace_inner(&rank_one(&u2).unwrap(), &rank_one(&v2).unwrap()).unwrap().is_zero());
                let ip = trace_inner(&rank_one(&u).unwrap(), &rank_one(&v).unwrap()).unwrap();
                assert!(ip.is_zero());
                if alg == Algebra::O {
                    assert_eq!(orthogonal_pair_classify(&u, &v).unwrap(), PairCase::Case3);
                }
            }
        }
    }
}
