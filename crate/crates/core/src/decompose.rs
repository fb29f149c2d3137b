//! Forced structure of a hypothetical decomposition `B = lie(H, D) + B′` with `B′`
//! positive, the exact certificate that no such decomposition exists, and an LP
//! falsifier over sampled pairs.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::exotic::{det_pattern, ExoticGenerator};
use crate::hurwitz::{Algebra, Hurwitz, OctonionDerivation};
use crate::jordan::{jordan_square, rank_one, rank_one_raw, sesquilinear, trace_inner, ConeVector, HermitianMatrix, Mat};
use crate::linalg::rref;
use crate::linmap::{lie_map, octonion_derivation_basis, JordanMap, LieMap};
use crate::lp::{solve_feasibility, Inequalities, LpMode, LpOutcome};
use crate::sampling::sample_orthogonal_pair_exact;
use crate::scalar::{format_rational, Rational, Scalar};
use crate::Error;

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

/// `(n−2)(n²−n−1)/2`, the constant in the relation for `h_1`.
pub fn h1_constant(n: usize) -> Rational {
    let n = n as i64;
    Rational::from_frac((n - 2) * (n * n - n - 1), 2)
}

/// `(n−2)(n²−n+1)/2`, the shift in `det Y_l`.
pub fn yl_shift(n: usize) -> Rational {
    let n = n as i64;
    Rational::from_frac((n - 2) * (n * n - n + 1), 2)
}

/// `−n(n−1)(n−2)(n²−n−1)/2`.
pub fn structured_value(n: usize) -> Rational {
    let n = n as i64;
    Rational::from_frac(-n * (n - 1) * (n - 2) * (n * n - n - 1), 2)
}

/// `−(n−1)(n−2)(n²−n−1)/2`, the forced value of `v*Hu` on the structured family.
pub fn structured_vhu(n: usize) -> Rational {
    structured_value(n) / q(n as i64)
}

/// `n^{n−3}(n−1)^{n−3}(n−2)^{n−4}`.
pub fn yl_constant(n: usize) -> Rational {
    let pw = |b: i64, e: i64| -> Rational {
        let b = q(b);
        if e >= 0 {
            num_traits::pow(b, e as usize)
        } else {
            num_traits::pow(b.recip(), (-e) as usize)
        }
    };
    let n = n as i64;
    pw(n, n - 3) * pw(n - 1, n - 3) * pw(n - 2, n - 4)
}

/// A Lie part `H` (and `D` for octonions) together with the residual `B′ = B − lie(H, D)`.
#[derive(Clone, Debug)]
pub struct DecompositionHypothesis<T> {
    pub b: ExoticGenerator,
    pub lie: LieMap<T>,
}

impl<T: Scalar> DecompositionHypothesis<T> {
    pub fn new(b: ExoticGenerator, h: Mat<T>, derivation: Option<OctonionDerivation<T>>) -> Result<Self, Error> {
        if h.algebra() != b.algebra || h.n() != b.n {
            return Err(Error::Shape("H does not match B".into()));
        }
        Ok(DecompositionHypothesis { b, lie: lie_map(h, derivation)? })
    }

    /// `B′(X) = B(X) − HX − XH* − A_D(X)`.
    pub fn positive_part(&self, x: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>, Error> {
        self.b.apply_to(x)?.sub(&self.lie.apply_to(x)?)
    }
}

impl<T: Scalar> JordanMap<T> for DecompositionHypothesis<T> {
    fn algebra(&self) -> Algebra {
        self.b.algebra
    }
    fn n(&self) -> usize {
        self.b.n
    }
    fn apply_to(&self, x: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>, Error> {
        self.positive_part(x)
    }
}

/// `(v + uy)(v + uy)*` is a multiple of an idempotent: `W² = Tr(W) W`.
pub fn line_is_idempotent_multiple<T: Scalar>(u: &ConeVector<T>, v: &ConeVector<T>, y: &Hurwitz<T>) -> bool {
    let w = v.add(&u.mul_right(y));
    let m = rank_one_raw(&w);
    let sq = m.as_mat().matmul(m.as_mat()).expect("same shape");
    let rhs = m.as_mat().scale(&m.trace());
    sq.sub(&rhs).expect("same shape").is_hermitian(0.0) && {
        let d = sq.sub(&rhs).expect("same shape");
        (0..m.n()).all(|l| (0..m.n()).all(|k| d.get(l, k).is_negligible(1e-9)))
    }
}

/// Test points `y` for the line family.
pub fn line_test_points<T: Scalar>(alg: Algebra) -> Vec<Hurwitz<T>> {
    let mut out = vec![Hurwitz::zero(alg), Hurwitz::one(alg), -Hurwitz::one(alg)];
    for k in 1..alg.dim() {
        out.push(Hurwitz::unit(alg, k));
        out.push(-Hurwitz::unit(alg, k));
    }
    if alg.dim() >= 4 {
        out.push(&Hurwitz::unit(alg, 1) + &Hurwitz::unit(alg, 2));
        out.push(&Hurwitz::unit(alg, 2) + &Hurwitz::unit(alg, alg.dim() - 1));
    }
    out
}

/// Checks the hypotheses under which a pair pins `u*(lie(uu*)v)`.
fn check_zero_pair<T: Scalar, A: JordanMap<T> + ?Sized>(a: &A, u: &ConeVector<T>, v: &ConeVector<T>) -> Result<(), Error> {
    let tol = 1e-9;
    if u.is_zero() || v.is_zero() {
        return Err(Error::Precondition("zero vector".into()));
    }
    let uu = rank_one(u)?;
    let vv = rank_one(v)?;
    if !trace_inner(&uu, &vv)?.is_negligible(tol) {
        return Err(Error::Precondition("<uu*, vv*> != 0".into()));
    }
    let val = sesquilinear(v, &a.apply_to(&uu)?, v).re();
    if !val.is_negligible(tol) {
        return Err(Error::Precondition(format!("Re(v*A(uu*)v) = {:?} != 0", val.to_f64())));
    }
    if u.algebra() == Algebra::O {
        for y in line_test_points::<T>(Algebra::O) {
            if !line_is_idempotent_multiple(u, v, &y) {
                return Err(Error::Precondition("line family (v + uy)(v + uy)* is not admissible".into()));
            }
        }
    }
    Ok(())
}

/// The forced value of `u*(lie(uu*) v)`, which equals `u*(A(uu*)v)`.
pub fn forced_lie_value<T: Scalar, A: JordanMap<T> + ?Sized>(a: &A, u: &ConeVector<T>, v: &ConeVector<T>) -> Result<Hurwitz<T>, Error> {
    check_zero_pair(a, u, v)?;
    Ok(sesquilinear(u, &a.apply_to(&rank_one(u)?)?, v))
}

/// The forced value of `v*Hu = (1/||u||²) v*A(uu*)u`.
pub fn zeros_constraint<T: Scalar, A: JordanMap<T> + ?Sized>(a: &A, u: &ConeVector<T>, v: &ConeVector<T>) -> Result<Hurwitz<T>, Error> {
    let g = forced_lie_value(a, u, v)?;
    Ok(g.conj().scale(&(T::one() / u.norm_sqr())))
}

/// `u_l = x` for `l ∈ S`, `1` otherwise; `v = u − n e_1`. `S` uses 1-based indices in `2..=n`.
pub fn structured_vectors<T: Scalar>(n: usize, s: &[usize], x: &Hurwitz<T>) -> Result<(ConeVector<T>, ConeVector<T>), Error> {
    let alg = x.algebra();
    if !(x.norm_sqr() - T::one()).is_negligible(1e-12) {
        return Err(Error::Precondition("x must have norm 1".into()));
    }
    if s.iter().any(|&l| l < 2 || l > n) {
        return Err(Error::Precondition("S must be a subset of {2..n}".into()));
    }
    let u = ConeVector::from_fn(alg, n, |l| if s.contains(&(l + 1)) { x.clone() } else { Hurwitz::one(alg) });
    let v = u.sub(&ConeVector::e(alg, n, 0).scale(&T::from_i64(n as i64)));
    Ok((u, v))
}

/// The three identities of the structured family plus the scaling identity
/// `((e_1 + uy)(e_1 + uy)*)² = (1 + 2Re y + n|y|²)(e_1 + uy)(e_1 + uy)*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuredCheck {
    pub orthogonal: bool,
    pub lines_admissible: bool,
    pub scaling_identity: bool,
    pub pairing_value: String,
    pub pairing_matches: bool,
}

pub fn check_structured(b: &ExoticGenerator, s: &[usize], x: &Hurwitz<Rational>) -> Result<StructuredCheck, Error> {
    let n = b.n;
    let (u, v) = structured_vectors(n, s, x)?;
    let orthogonal = trace_inner(&rank_one(&u)?, &rank_one(&v)?)?.is_zero();
    let ys = line_test_points::<Rational>(x.algebra());
    let lines_admissible = ys.iter().all(|y| line_is_idempotent_multiple(&u, &v, y));
    let e1 = ConeVector::e(x.algebra(), n, 0);
    let scaling_identity = ys.iter().all(|y| {
        let w = e1.add(&u.mul_right(y));
        let m = rank_one_raw(&w);
        let lhs = jordan_square(&m);
        let f = q(1) + q(2) * y.re() + q(n as i64) * y.norm_sqr();
        lhs == m.scale(&f)
    });
    let g = sesquilinear(&u, &b.apply_to(&rank_one(&u)?)?, &v);
    let target = Hurwitz::real(x.algebra(), structured_value(n));
    Ok(StructuredCheck {
        orthogonal,
        lines_admissible,
        scaling_identity,
        pairing_value: format!("{g}"),
        pairing_matches: g == target,
    })
}

/// Layout of the unknowns: the real coordinates of `h_ij` followed, for octonions,
/// by the coefficients of `D` in a basis of `Der(𝕆)`.
#[derive(Clone, Debug)]
pub struct Unknowns {
    pub n: usize,
    pub alg: Algebra,
    pub derivations: Vec<Vec<Vec<Rational>>>,
}

impl Unknowns {
    pub fn new(n: usize, alg: Algebra) -> Self {
        let derivations = if alg == Algebra::O { octonion_derivation_basis() } else { vec![] };
        Unknowns { n, alg, derivations }
    }

    pub fn d(&self) -> usize {
        self.alg.dim()
    }

    pub fn count(&self) -> usize {
        self.n * self.n * self.d() + self.derivations.len()
    }

    /// Index of coordinate `k` of `h_ij` (0-based).
    pub fn h(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.d() + k
    }

    pub fn der(&self, c: usize) -> usize {
        self.n * self.n * self.d() + c
    }

    pub fn name(&self, idx: usize) -> String {
        let hn = self.n * self.n * self.d();
        if idx >= hn {
            return format!("D[{}]", idx - hn + 1);
        }
        let k = idx % self.d();
        let ij = idx / self.d();
        let (i, j) = (ij / self.n + 1, ij % self.n + 1);
        if self.d() == 1 {
            format!("h[{i},{j}]")
        } else {
            format!("h[{i},{j}].{}", k + 1)
        }
    }
}

/// Real linear forms (one per coordinate) of `u*((Huu* + uu*H* + A_D(uu*))v)` in the unknowns.
pub fn lie_forms(unk: &Unknowns, u: &ConeVector<Rational>, v: &ConeVector<Rational>) -> Vec<Vec<Rational>> {
    let (n, alg, d) = (unk.n, unk.alg, unk.d());
    let x = rank_one_raw(u);
    let mut forms = vec![vec![Rational::zero(); unk.count()]; d];
    let mut put = |idx: usize, val: &Hurwitz<Rational>| {
        for (k, form) in forms.iter_mut().enumerate() {
            let c = val.coeff(k);
            if !c.is_zero() {
                form[idx] += c;
            }
        }
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..d {
                let f = Hurwitz::<Rational>::unit(alg, k);
                let fc = f.conj();
                // (H X) v with H = f E_ij: row i is Σ_b (f x_jb) v_b
                let mut acc = Hurwitz::zero(alg);
                for b in 0..n {
                    acc += &(&(&f * x.get(j, b)) * v.get(b));
                }
                let mut val = &u.get(i).conj() * &acc;
                // (X H*) v: row a is (x_aj f̄) v_i
                for a in 0..n {
                    val += &(&u.get(a).conj() * &(&(x.get(a, j) * &fc) * v.get(i)));
                }
                put(unk.h(i, j, k), &val);
            }
        }
    }
    for (c, m) in unk.derivations.iter().enumerate() {
        let ad = HermitianMatrix::from_upper(alg, n, |a, b| crate::hurwitz::apply_derivation_matrix(m, x.get(a, b)));
        let val = sesquilinear(u, &ad, v);
        put(unk.der(c), &val);
    }
    forms
}

/// A linear relation `Σ c_i x_i = rhs` over the unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRelation {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl LinearRelation {
    pub fn to_json(&self, unk: &Unknowns) -> Value {
        let terms: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (unk.name(i), format_rational(c)))
            .collect();
        json!({ "coeffs": terms, "rhs": format_rational(&self.rhs) })
    }

    fn augmented(&self) -> Vec<Rational> {
        let mut r = self.coeffs.clone();
        r.push(self.rhs.clone());
        r
    }
}

/// Relations `u*(lie(uu*)v) = u*(B(uu*)v)`, one per coordinate.
pub fn pair_relations(unk: &Unknowns, b: &ExoticGenerator, u: &ConeVector<Rational>, v: &ConeVector<Rational>) -> Result<Vec<LinearRelation>, Error> {
    let g = forced_lie_value(b, u, v)?;
    Ok(lie_forms(unk, u, v)
        .into_iter()
        .enumerate()
        .map(|(k, coeffs)| LinearRelation { coeffs, rhs: g.coeff(k).clone() })
        .collect())
}

/// An exact linear system kept in reduced row echelon form.
#[derive(Clone, Debug, Default)]
pub struct RelationSystem {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl RelationSystem {
    pub fn add(&mut self, rels: &[LinearRelation]) {
        self.rows.extend(rels.iter().map(LinearRelation::augmented));
        self.pivots = rref(&mut self.rows);
    }

    /// Whether the system is inconsistent (contains `0 = 1`).
    pub fn inconsistent(&self) -> bool {
        self.rows.first().is_some_and(|r| self.pivots.last() == Some(&(r.len() - 1)))
    }

    /// `true` iff the relation lies in the row space of the augmented system.
    pub fn implies(&self, rel: &LinearRelation) -> bool {
        let mut t = rel.augmented();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !t[p].is_zero() {
                let f = t[p].clone();
                for (a, b) in t.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *a -= &f * b;
                    }
                }
            }
        }
        t.iter().all(Zero::is_zero)
    }
}

/// Unit test points: `±f_k` and `(3f_a + 4f_b)/5`.
pub fn center_units(alg: Algebra) -> Vec<Hurwitz<Rational>> {
    let d = alg.dim();
    let mut out = Vec::new();
    for k in 0..d {
        out.push(Hurwitz::unit(alg, k));
        out.push(-Hurwitz::unit(alg, k));
    }
    for a in 0..d {
        for b in a + 1..d {
            out.push(&Hurwitz::unit(alg, a).scale(&Rational::from_frac(3, 5)) + &Hurwitz::unit(alg, b).scale(&Rational::from_frac(4, 5)));
        }
    }
    out
}

fn unit_relation(unk: &Unknowns, idx: usize, rhs: Rational) -> LinearRelation {
    let mut coeffs = vec![Rational::zero(); unk.count()];
    coeffs[idx] = q(1);
    LinearRelation { coeffs, rhs }
}

/// Coordinate `k` of `(1−n)h_1 + Σ_{l≥2} h_l`, equal to `−(n−1)(n−2)(n²−n−1)/2` for `k = 0` and to 0 otherwise.
pub fn h1_relation(unk: &Unknowns, k: usize) -> LinearRelation {
    let n = unk.n;
    let mut coeffs = vec![Rational::zero(); unk.count()];
    coeffs[unk.h(0, 0, k)] = q(1 - n as i64);
    for l in 1..n {
        coeffs[unk.h(l, l, k)] = q(1);
    }
    let rhs = if k == 0 { -q(n as i64 - 1) * h1_constant(n) } else { Rational::zero() };
    LinearRelation { coeffs, rhs }
}

/// One equation of the structured family, with its generating `S`.
#[derive(Clone, Debug)]
pub struct FamilyEquation {
    pub s: Vec<usize>,
    /// Coordinates of `v*Hu = −(n−1)(n−2)(n²−n−1)/2` restricted to the surviving entries.
    pub relations: Vec<LinearRelation>,
}

/// Result of the `x = −1` structured family.
#[derive(Clone, Debug)]
pub struct ForcedRelations {
    pub equations: Vec<FamilyEquation>,
    /// `(i, j)` 1-based with `h_ij = 0` forced, including column sparsity.
    pub off_diagonal_zero: Vec<(usize, usize)>,
    pub h1: Vec<LinearRelation>,
}

/// Subsets used for the `x = −1` family: `∅, {2}, {l} (l = 3..n), {2, 3}`.
pub fn family_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![], vec![2]];
    for l in 3..=n {
        out.push(vec![l]);
    }
    out.push(vec![2, 3]);
    out
}

fn column_sparsity_pairs(n: usize, alg: Algebra) -> Vec<(usize, usize, ConeVector<Rational>, ConeVector<Rational>)> {
    let mut out = Vec::new();
    for l in 0..n {
        let prev = (l + n - 1) % n;
        for i in 0..n {
            if i != l && i != prev {
                out.push((i, l, ConeVector::e(alg, n, l), ConeVector::e(alg, n, i)));
            }
        }
    }
    out
}

/// `v*Hu` expressed through the relations `F = n·conj(v*Hu)` for real `u`:
/// coordinate 0 is unchanged, the others change sign.
fn as_vhu(rels: &[LinearRelation], n: usize) -> Vec<LinearRelation> {
    let s = Rational::from_frac(1, n as i64);
    rels.iter()
        .enumerate()
        .map(|(k, r)| {
            let sign = if k == 0 { s.clone() } else { -s.clone() };
            LinearRelation { coeffs: r.coeffs.iter().map(|c| c * &sign).collect(), rhs: &r.rhs * &sign }
        })
        .collect()
}

pub fn forced_h_relations(b: &ExoticGenerator) -> Result<ForcedRelations, Error> {
    let (n, alg) = (b.n, b.algebra);
    let unk = Unknowns::new(n, alg);
    let mut sys = RelationSystem::default();
    let mut zero = Vec::new();
    for (i, l, u, v) in column_sparsity_pairs(n, alg) {
        sys.add(&pair_relations(&unk, b, &u, &v)?);
        zero.push((i + 1, l + 1));
    }
    let minus_one = -Hurwitz::<Rational>::one(alg);
    let mut equations = Vec::new();
    for s in family_subsets(n) {
        let (u, v) = structured_vectors(n, &s, &minus_one)?;
        let rels = pair_relations(&unk, b, &u, &v)?;
        sys.add(&rels);
        // restrict to the entries that survive column sparsity
        let keep = |idx: usize| {
            let ij = idx / unk.d();
            let (i, j) = (ij / n, ij % n);
            idx < n * n * unk.d() && (i == j || (i + 1) % n == j)
        };
        let restricted: Vec<LinearRelation> = as_vhu(&rels, n)
            .into_iter()
            .map(|r| LinearRelation {
                coeffs: r.coeffs.iter().enumerate().map(|(i, c)| if keep(i) { c.clone() } else { Rational::zero() }).collect(),
                rhs: r.rhs,
            })
            .collect();
        equations.push(FamilyEquation { s, relations: restricted });
    }
    for l in 0..n {
        let j = (l + 1) % n;
        for k in 0..unk.d() {
            if !sys.implies(&unit_relation(&unk, unk.h(l, j, k), Rational::zero())) {
                return Err(Error::Numerical(format!("h[{},{}] is not forced to vanish", l + 1, j + 1)));
            }
        }
        zero.push((l + 1, j + 1));
    }
    let h1: Vec<LinearRelation> = (0..unk.d()).map(|k| h1_relation(&unk, k)).collect();
    if !h1.iter().all(|r| sys.implies(r)) {
        return Err(Error::Numerical("relation for h_1 is not implied".into()));
    }
    zero.sort();
    zero.dedup();
    Ok(ForcedRelations { equations, off_diagonal_zero: zero, h1 })
}

/// Relations from the family `S = {m}` with a unit `x`.
pub fn center_constraints(b: &ExoticGenerator, m: usize, x: &Hurwitz<Rational>) -> Result<Vec<LinearRelation>, Error> {
    let unk = Unknowns::new(b.n, b.algebra);
    let (u, v) = structured_vectors(b.n, &[m], x)?;
    pair_relations(&unk, b, &u, &v)
}

/// Affine form `c_0 + Σ c_i z_i` over `z = (a_1..a_n, b_1..b_n)`, `h_l = a_l + i b_l`; constant last.
type Affine = Vec<Rational>;

#[derive(Clone, Debug, PartialEq)]
struct CAffine {
    re: Affine,
    im: Affine,
}

impl CAffine {
    fn zero(nv: usize) -> Self {
        CAffine { re: vec![Rational::zero(); nv + 1], im: vec![Rational::zero(); nv + 1] }
    }
    fn add_scaled(&mut self, o: &CAffine, s: &Rational) {
        for (a, b) in self.re.iter_mut().zip(&o.re) {
            *a += b * s;
        }
        for (a, b) in self.im.iter_mut().zip(&o.im) {
            *a += b * s;
        }
    }
    fn conj(&self) -> Self {
        CAffine { re: self.re.clone(), im: self.im.iter().map(|v| -v).collect() }
    }
    fn is_const(&self, re: &Rational, im: &Rational) -> bool {
        let nv = self.re.len() - 1;
        self.re[..nv].iter().all(Zero::is_zero) && self.im[..nv].iter().all(Zero::is_zero) && self.re[nv] == *re && self.im[nv] == *im
    }
    fn substitute(&self, var: usize, by: &Affine) -> Self {
        let sub = |f: &Affine| {
            let c = f[var].clone();
            let mut g = f.clone();
            g[var] = Rational::zero();
            if !c.is_zero() {
                for (a, b) in g.iter_mut().zip(by) {
                    *a += &c * b;
                }
            }
            g
        };
        CAffine { re: sub(&self.re), im: sub(&self.im) }
    }
}

/// Outcome of the symbolic check of `R Y_l Rᵀ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YlSymbolic {
    pub l: usize,
    pub middle_block_ok: bool,
    pub last_row_ok: bool,
    pub corner_ok: bool,
    pub det_r_is_one: bool,
    /// `det` of the middle block by the determinant pattern.
    pub middle_det: String,
    pub closed_form_constant: String,
}

impl YlSymbolic {
    pub fn ok(&self) -> bool {
        self.middle_block_ok && self.last_row_ok && self.corner_ok && self.det_r_is_one && self.middle_det == self.closed_form_constant
    }
}

/// The matrix `R`: rows `e_1`, `−e_1 + e_i`, `(2−n, 1, …, 1)`.
pub fn r_matrix(n: usize) -> Vec<Vec<Rational>> {
    let m = n - 1;
    (0..m)
        .map(|a| {
            (0..m)
                .map(|c| {
                    if a == 0 {
                        if c == 0 { q(1) } else { q(0) }
                    } else if a == m - 1 {
                        if c == 0 { q(2 - n as i64) } else { q(1) }
                    } else if c == 0 {
                        q(-1)
                    } else if c == a {
                        q(1)
                    } else {
                        q(0)
                    }
                })
                .collect()
        })
        .collect()
}

/// Symbolic `Y_l` (`l` 1-based in `2..=n`) with entries affine in `(Re h, Im h)`.
fn yl_symbolic_matrix(n: usize, l: usize) -> Vec<Vec<CAffine>> {
    let nv = 2 * n;
    let p = h1_constant(n);
    let qq = q(((n - 1) * (n * n - n - 1)) as i64);
    let t = q(((n - 1) * (n - 1)) as i64);
    let entry = |i: usize, j: usize| -> CAffine {
        let mut e = CAffine::zero(nv);
        if i == j {
            let c = if i == 0 { q(1) } else { t.clone() };
            e.re[nv] = -c;
            e.re[i] = q(-2);
        } else {
            let c = if i == 0 || j == 0 { p.clone() } else { qq.clone() };
            e.re[nv] = -c;
            // −h_i − conj(h_j)
            e.re[i] -= q(1);
            e.re[j] -= q(1);
            e.im[n + i] -= q(1);
            e.im[n + j] += q(1);
        }
        e
    };
    let idx: Vec<usize> = (0..n).filter(|&i| i != l - 1).collect();
    idx.iter().map(|&i| idx.iter().map(|&j| entry(i, j)).collect()).collect()
}

/// Exact symbolic verification of the shape of `R Y_l Rᵀ` after substituting the relation for `h_1`.
pub fn yl_symbolic_check(n: usize, l: usize) -> YlSymbolic {
    if n < 3 || l < 2 || l > n {
        return YlSymbolic {
            l,
            middle_block_ok: false,
            last_row_ok: false,
            corner_ok: false,
            det_r_is_one: false,
            middle_det: String::new(),
            closed_form_constant: format_rational(&yl_constant(n.max(3))),
        };
    }
    let nv = 2 * n;
    let y = yl_symbolic_matrix(n, l);
    let r = r_matrix(n);
    let m = n - 1;
    let mut ryr = vec![vec![CAffine::zero(nv); m]; m];
    for a in 0..m {
        for bb in 0..m {
            let mut acc = CAffine::zero(nv);
            for c in 0..m {
                if r[a][c].is_zero() {
                    continue;
                }
                for d in 0..m {
                    if r[bb][d].is_zero() {
                        continue;
                    }
                    acc.add_scaled(&y[c][d], &(&r[a][c] * &r[bb][d]));
                }
            }
            ryr[a][bb] = acc;
        }
    }
    // h_1 = (1/(n−1)) Σ_{l≥2} h_l + (n−2)(n²−n−1)/2
    let inv = Rational::from_frac(1, n as i64 - 1);
    let mut a1 = vec![Rational::zero(); nv + 1];
    let mut b1 = vec![Rational::zero(); nv + 1];
    for k in 1..n {
        a1[k] = inv.clone();
        b1[n + k] = inv.clone();
    }
    a1[nv] = h1_constant(n);
    let subst = |e: &CAffine| e.substitute(0, &a1).substitute(n, &b1);
    let ryr: Vec<Vec<CAffine>> = ryr.iter().map(|row| row.iter().map(subst).collect()).collect();
    let s = q((n * (n - 1)) as i64);
    let diag = q((n * (n - 1) * (n - 3)) as i64);
    let zero = Rational::zero();
    let mut middle_block_ok = true;
    for a in 1..m.saturating_sub(1) {
        for bb in 1..m - 1 {
            let want = if a == bb { diag.clone() } else { -s.clone() };
            middle_block_ok &= ryr[a][bb].is_const(&want, &zero);
        }
    }
    let last = m - 1;
    let last_row_ok = (1..m).all(|bb| ryr[last][bb].is_const(&zero, &zero) && ryr[bb][last].is_const(&zero, &zero));
    // corner: h_l − h_1 + (n−2)(n²−n+1)/2
    let mut z = CAffine::zero(nv);
    z.re[l - 1] += q(1);
    z.im[n + l - 1] += q(1);
    z.re[0] -= q(1);
    z.im[n] -= q(1);
    z.re[nv] = yl_shift(n);
    let z = subst(&z);
    let corner_ok = ryr[last][0] == z && ryr[0][last] == z.conj();
    let det_r = crate::linalg::det_rational(&r);
    let k = m.saturating_sub(2);
    let middle_det = det_pattern(&vec![diag; k], &-s);
    YlSymbolic {
        l,
        middle_block_ok,
        last_row_ok,
        corner_ok,
        det_r_is_one: det_r == q(1),
        middle_det: format_rational(&middle_det),
        closed_form_constant: format_rational(&yl_constant(n)),
    }
}

fn cmat_det<T: Scalar>(m: &[Vec<Hurwitz<T>>]) -> Hurwitz<T> {
    let n = m.len();
    let alg = m.first().map_or(Algebra::C, |r| r[0].algebra());
    match n {
        0 => Hurwitz::one(alg),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Hurwitz::zero(alg);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Hurwitz<T>>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &m[0][j] * &cmat_det(&minor);
                if j % 2 == 0 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            acc
        }
    }
}

/// `−n^{n−3}(n−1)^{n−3}(n−2)^{n−4}|h_l − h_1 + (n−2)(n²−n+1)/2|²`, without checking the relation for `h_1`.
pub fn yl_closed_form<T: Scalar>(h1: &Hurwitz<T>, hl: &Hurwitz<T>, n: usize) -> T {
    let c = Algebra::C;
    let z = &(&hl.embed(c).expect("embedding") - &h1.embed(c).expect("embedding")) + &Hurwitz::real(c, T::from_rational(&yl_shift(n)));
    -T::from_rational(&yl_constant(n)) * z.norm_sqr()
}

/// `det Y_l` three ways.
#[derive(Clone, Debug, PartialEq)]
pub struct YlDeterminant<T> {
    pub closed_form: T,
    pub via_r_conjugation: T,
    pub brute_force: T,
}

/// `det Y_l` for central `h = (h_1, …, h_n)` (real or complex), `l` 1-based in `2..=n`.
pub fn yl_determinant<T: Scalar>(h: &[Hurwitz<T>], l: usize, n: usize) -> Result<YlDeterminant<T>, Error> {
    if h.len() != n || n < 3 || l < 2 || l > n {
        return Err(Error::Shape("need n >= 3, h of length n and 2 <= l <= n".into()));
    }
    let alg = h[0].algebra();
    if alg.dim() > 2 {
        return Err(Error::Precondition("the h_l must be central (real or complex)".into()));
    }
    let h = |i: usize| h[i].embed(Algebra::C).expect("embedding");
    let sum = (1..n).fold(Hurwitz::<T>::zero(Algebra::C), |acc, i| acc + h(i));
    let rhs = &sum.scale(&(T::one() / T::from_i64(n as i64 - 1))) + &Hurwitz::real(Algebra::C, T::from_rational(&h1_constant(n)));
    let scale = 1.0 + h(0).norm();
    if !(&h(0) - &rhs).is_negligible(1e-10 * scale) {
        return Err(Error::Precondition("h violates the relation for h_1".into()));
    }
    let c = Algebra::C;
    let p = T::from_rational(&h1_constant(n));
    let qq = T::from_i64(((n - 1) * (n * n - n - 1)) as i64);
    let t = T::from_i64(((n - 1) * (n - 1)) as i64);
    let entry = |i: usize, j: usize| -> Hurwitz<T> {
        if i == j {
            let k = if i == 0 { T::one() } else { t.clone() };
            Hurwitz::real(c, -k - T::from_i64(2) * h(i).re())
        } else {
            let k = if i == 0 || j == 0 { p.clone() } else { qq.clone() };
            -(&(&Hurwitz::real(c, k) + &h(i)) + &h(j).conj())
        }
    };
    let idx: Vec<usize> = (0..n).filter(|&i| i != l - 1).collect();
    let y: Vec<Vec<Hurwitz<T>>> = idx.iter().map(|&i| idx.iter().map(|&j| entry(i, j)).collect()).collect();
    let brute = cmat_det(&y).re();
    // explicit conjugation by R
    let r: Vec<Vec<T>> = r_matrix(n).iter().map(|row| row.iter().map(T::from_rational).collect()).collect();
    let m = n - 1;
    let mut ryr = vec![vec![Hurwitz::zero(c); m]; m];
    for a in 0..m {
        for b in 0..m {
            let mut acc = Hurwitz::zero(c);
            for cc in 0..m {
                for d in 0..m {
                    let f = r[a][cc].clone() * r[b][d].clone();
                    if !f.is_zero() {
                        acc += &y[cc][d].scale(&f);
                    }
                }
            }
            ryr[a][b] = acc;
        }
    }
    let mid: Vec<T> = (1..m - 1).map(|i| ryr[i][i].re()).collect();
    let off = if m > 3 { ryr[1][2].re() } else { T::zero() };
    let via = -(ryr[m - 1][0].norm_sqr()) * det_pattern(&mid, &off);
    let closed = yl_closed_form(&h(0), &h(l - 1), n);
    Ok(YlDeterminant { closed_form: closed, via_r_conjugation: via, brute_force: brute })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Normalization,
    ColumnSparsity,
    StructuredFamily,
    Implied,
    Center,
    Determinant,
    Positivity,
    Residual,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepSource {
    None,
    Pair { u: ConeVector<Rational>, v: ConeVector<Rational> },
    Family { s: Vec<usize>, x: Hurwitz<Rational> },
    Index { l: usize },
}

#[derive(Clone, Debug)]
pub struct Step {
    pub kind: StepKind,
    pub description: String,
    pub source: StepSource,
    /// Forced value of `v*Hu` (associative reading) where applicable.
    pub forced_value: Option<Hurwitz<Rational>>,
    pub relations: Vec<LinearRelation>,
    pub symbolic: Option<YlSymbolic>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Indecomposable,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub n: usize,
    pub algebra: Algebra,
    pub steps: Vec<Step>,
    pub residual: Rational,
    pub verdict: Verdict,
}

fn source_pair(u: &ConeVector<Rational>, v: &ConeVector<Rational>) -> StepSource {
    StepSource::Pair { u: u.clone(), v: v.clone() }
}

/// Sets the coordinates of `h_l` for `l >= 2` and `h_1` to the closing values and returns
/// the residual of the relation for `h_1`: with `h_l = h_1 − c` the relation reads `0 = c − p`.
fn closing_residual(n: usize) -> Rational {
    // (1−n)h_1 + Σ_{l≥2}(h_1 − c) − (−(n−1)p) = −(n−1)c + (n−1)p; normalized by −(n−1)
    let c = yl_shift(n);
    let p = h1_constant(n);
    let lhs_minus_rhs = -q(n as i64 - 1) * c + q(n as i64 - 1) * p;
    if n == 1 {
        return Rational::zero();
    }
    -lhs_minus_rhs / q(n as i64 - 1)
}

/// The full exact certificate.
pub fn indecomposability_certificate(n: usize, alg: Algebra) -> Result<Certificate, Error> {
    if n == 2 {
        let residual = closing_residual(2);
        let steps = vec![Step {
            kind: StepKind::Residual,
            description: "closing substitution h_l = h_1 - c into the relation for h_1 (n = 2, no generator)".into(),
            source: StepSource::None,
            forced_value: None,
            relations: vec![],
            symbolic: None,
        }];
        return Ok(Certificate { n, algebra: alg, steps, verdict: if residual.is_zero() { Verdict::Inconclusive } else { Verdict::Indecomposable }, residual });
    }
    let b = ExoticGenerator::build(n, alg)?;
    let unk = Unknowns::new(n, alg);
    let d = unk.d();
    let mut sys = RelationSystem::default();
    let mut steps = Vec::new();

    // Tr(H) real
    let trace_rels: Vec<LinearRelation> = (1..d)
        .map(|k| {
            let mut coeffs = vec![Rational::zero(); unk.count()];
            for l in 0..n {
                coeffs[unk.h(l, l, k)] = q(1);
            }
            LinearRelation { coeffs, rhs: Rational::zero() }
        })
        .collect();
    sys.add(&trace_rels);
    steps.push(Step {
        kind: StepKind::Normalization,
        description: "Tr(H) is real".into(),
        source: StepSource::None,
        forced_value: None,
        relations: trace_rels,
        symbolic: None,
    });

    for (i, l, u, v) in column_sparsity_pairs(n, alg) {
        let rels = pair_relations(&unk, &b, &u, &v)?;
        sys.add(&rels);
        steps.push(Step {
            kind: StepKind::ColumnSparsity,
            description: format!("u = e_{}, v = e_{}: v*Hu = 0", l + 1, i + 1),
            source: source_pair(&u, &v),
            forced_value: Some(zeros_constraint(&b, &u, &v)?),
            relations: rels,
            symbolic: None,
        });
    }
    let minus_one = -Hurwitz::<Rational>::one(alg);
    for s in family_subsets(n) {
        let (u, v) = structured_vectors(n, &s, &minus_one)?;
        let rels = pair_relations(&unk, &b, &u, &v)?;
        sys.add(&rels);
        steps.push(Step {
            kind: StepKind::StructuredFamily,
            description: format!("S = {s:?}, x = -1: v*Hu = -(n-1)(n-2)(n^2-n-1)/2"),
            source: StepSource::Family { s: s.clone(), x: minus_one.clone() },
            forced_value: Some(zeros_constraint(&b, &u, &v)?),
            relations: rels,
            symbolic: None,
        });
    }
    let mut implied = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for k in 0..d {
                    implied.push(unit_relation(&unk, unk.h(i, j, k), Rational::zero()));
                }
            }
        }
    }
    let h1: Vec<LinearRelation> = (0..d).map(|k| h1_relation(&unk, k)).collect();
    implied.extend(h1.iter().cloned());
    if !implied.iter().all(|r| sys.implies(r)) {
        return Err(Error::Numerical("H is not forced to be diagonal with the relation for h_1".into()));
    }
    steps.push(Step {
        kind: StepKind::Implied,
        description: "H is diagonal and (1-n)h_1 + sum_{l>=2} h_l = -(n-1)(n-2)(n^2-n-1)/2".into(),
        source: StepSource::None,
        forced_value: None,
        relations: implied,
        symbolic: None,
    });

    for m in 2..=n {
        for x in center_units(alg) {
            let (u, v) = structured_vectors(n, &[m], &x)?;
            let rels = pair_relations(&unk, &b, &u, &v)?;
            sys.add(&rels);
            steps.push(Step {
                kind: StepKind::Center,
                description: format!("S = {{{m}}}, x = {x}"),
                source: StepSource::Family { s: vec![m], x: x.clone() },
                forced_value: None,
                relations: rels,
                symbolic: None,
            });
        }
    }
    // all h_l central and D = 0
    let central_from = if alg == Algebra::C { 2 } else { 1 };
    let mut central = Vec::new();
    for l in 0..n {
        for k in central_from..d {
            central.push(unit_relation(&unk, unk.h(l, l, k), Rational::zero()));
        }
    }
    for c in 0..unk.derivations.len() {
        central.push(unit_relation(&unk, unk.der(c), Rational::zero()));
    }
    if !central.iter().all(|r| sys.implies(r)) {
        return Err(Error::Numerical("the h_l are not forced into the center".into()));
    }
    if sys.inconsistent() {
        return Err(Error::Numerical("linear relations alone are inconsistent".into()));
    }
    steps.push(Step {
        kind: StepKind::Implied,
        description: match alg {
            Algebra::R | Algebra::C => "center constraints are vacuous: H is already a matrix over the center".into(),
            Algebra::H => "h_l are real".into(),
            Algebra::O => "h_l are real and D = 0".into(),
        },
        source: StepSource::None,
        forced_value: None,
        relations: central,
        symbolic: None,
    });

    for l in 2..=n {
        let sym = yl_symbolic_check(n, l);
        if !sym.ok() {
            return Err(Error::Numerical(format!("R Y_{l} R^T does not have the expected shape")));
        }
        steps.push(Step {
            kind: StepKind::Determinant,
            description: format!("det Y_{l} = -n^(n-3)(n-1)^(n-3)(n-2)^(n-4) |h_{l} - h_1 + (n-2)(n^2-n+1)/2|^2"),
            source: StepSource::Index { l },
            forced_value: None,
            relations: vec![],
            symbolic: Some(sym),
        });
    }
    let closing: Vec<LinearRelation> = (2..=n)
        .map(|l| {
            let mut coeffs = vec![Rational::zero(); unk.count()];
            coeffs[unk.h(l - 1, l - 1, 0)] = q(1);
            coeffs[unk.h(0, 0, 0)] = q(-1);
            LinearRelation { coeffs, rhs: -yl_shift(n) }
        })
        .collect();
    steps.push(Step {
        kind: StepKind::Positivity,
        description: "det Y_l is the coefficient of prod_{m != l} u_m^2 in det X_{u,l} >= 0, so h_l = h_1 - (n-2)(n^2-n+1)/2".into(),
        source: StepSource::None,
        forced_value: None,
        relations: closing.clone(),
        symbolic: None,
    });
    // combine: (h1) − Σ_l closing_l eliminates every unknown
    let mut combo = h1[0].augmented();
    for r in &closing {
        for (a, b) in combo.iter_mut().zip(r.augmented()) {
            *a -= b;
        }
    }
    let nvars = unk.count();
    if !combo[..nvars].iter().all(Zero::is_zero) {
        return Err(Error::Numerical("closing combination does not eliminate the unknowns".into()));
    }
    // 0 = rhs, normalized so that the residual is c − p
    let residual = combo[nvars].clone() / q(n as i64 - 1);
    debug_assert_eq!(residual, closing_residual(n));
    steps.push(Step {
        kind: StepKind::Residual,
        description: "substituting into the relation for h_1 gives 0 = 2 - n".into(),
        source: StepSource::None,
        forced_value: None,
        relations: vec![LinearRelation { coeffs: vec![Rational::zero(); nvars], rhs: residual.clone() }],
        symbolic: None,
    });
    let verdict = if residual.is_zero() { Verdict::Inconclusive } else { Verdict::Indecomposable };
    Ok(Certificate { n, algebra: alg, steps, residual, verdict })
}

/// Result of replaying a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    pub steps_checked: usize,
    pub failures: Vec<usize>,
}

impl Replay {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-derives every step from its source in exact arithmetic.
pub fn replay_certificate(cert: &Certificate) -> Result<Replay, Error> {
    let n = cert.n;
    let mut failures = Vec::new();
    if n == 2 {
        if closing_residual(2) != cert.residual {
            failures.push(0);
        }
        return Ok(Replay { steps_checked: cert.steps.len(), failures });
    }
    let b = ExoticGenerator::build(n, cert.algebra)?;
    let unk = Unknowns::new(n, cert.algebra);
    let mut sys = RelationSystem::default();
    for (i, step) in cert.steps.iter().enumerate() {
        let ok = match (&step.kind, &step.source) {
            (StepKind::Normalization, _) => {
                sys.add(&step.relations);
                true
            }
            (StepKind::ColumnSparsity, StepSource::Pair { u, v }) => {
                let rels = pair_relations(&unk, &b, u, v)?;
                let fv = zeros_constraint(&b, u, v)?;
                sys.add(&rels);
                rels == step.relations && Some(&fv) == step.forced_value.as_ref() && fv.is_zero()
            }
            (StepKind::StructuredFamily | StepKind::Center, StepSource::Family { s, x }) => {
                let (u, v) = structured_vectors(n, s, x)?;
                let rels = pair_relations(&unk, &b, &u, &v)?;
                sys.add(&rels);
                let fv_ok = match &step.forced_value {
                    Some(fv) => *fv == zeros_constraint(&b, &u, &v)? && *fv == Hurwitz::real(cert.algebra, structured_vhu(n)),
                    None => true,
                };
                rels == step.relations && fv_ok
            }
            (StepKind::Implied, _) => step.relations.iter().all(|r| sys.implies(r)),
            (StepKind::Determinant, StepSource::Index { l }) => {
                let sym = yl_symbolic_check(n, *l);
                sym.ok() && Some(&sym) == step.symbolic.as_ref()
            }
            (StepKind::Positivity, _) => step.relations.len() == n - 1
                && step.relations.iter().enumerate().all(|(k, r)| {
                    let l = k + 2;
                    r.rhs == -yl_shift(n)
                        && r.coeffs.iter().enumerate().all(|(idx, c)| {
                            let want = if idx == unk.h(l - 1, l - 1, 0) {
                                q(1)
                            } else if idx == unk.h(0, 0, 0) {
                                q(-1)
                            } else {
                                q(0)
                            };
                            *c == want
                        })
                }),
            (StepKind::Residual, _) => {
                let r = closing_residual(n);
                r == cert.residual && step.relations.first().is_some_and(|rel| rel.rhs == r)
            }
            _ => false,
        };
        if !ok {
            failures.push(i);
        }
    }
    Ok(Replay { steps_checked: cert.steps.len(), failures })
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        let unk = if self.n >= 3 { Some(Unknowns::new(self.n, self.algebra)) } else { None };
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                let source = match &s.source {
                    StepSource::None => Value::Null,
                    StepSource::Pair { u, v } => json!({ "u": u.to_json(), "v": v.to_json() }),
                    StepSource::Family { s, x } => json!({ "S": s, "x": x.to_json() }),
                    StepSource::Index { l } => json!({ "l": l }),
                };
                json!({
                    "kind": s.kind,
                    "description": s.description,
                    "source": source,
                    "forced_value": s.forced_value.as_ref().map(|v| v.to_json()),
                    "relations": unk.as_ref().map(|u| s.relations.iter().map(|r| r.to_json(u)).collect::<Vec<_>>()),
                    "symbolic": s.symbolic,
                })
            })
            .collect();
        json!({
            "n": self.n,
            "algebra": self.algebra.tag(),
            "steps": steps,
            "residual": format_rational(&self.residual),
            "verdict": self.verdict,
        })
    }
}

/// Pairs for the LP: column-sparsity pairs and the structured family first, then
/// `random` exact random pairs.
pub fn decomposition_pairs(n: usize, alg: Algebra, random: usize, seed: u64) -> Result<Vec<(ConeVector<Rational>, ConeVector<Rational>)>, Error> {
    let mut out: Vec<_> = column_sparsity_pairs(n, alg).into_iter().map(|(_, _, u, v)| (u, v)).collect();
    let mut units = vec![Hurwitz::one(alg), -Hurwitz::one(alg)];
    for k in 1..alg.dim() {
        units.push(Hurwitz::unit(alg, k));
        units.push(-Hurwitz::unit(alg, k));
    }
    let mut subsets: Vec<Vec<usize>> = vec![vec![]];
    for a in 2..=n {
        subsets.push(vec![a]);
        for b2 in a + 1..=n {
            subsets.push(vec![a, b2]);
        }
    }
    for s in &subsets {
        for x in &units {
            if s.is_empty() && *x != Hurwitz::one(alg) {
                continue;
            }
            out.push(structured_vectors(n, s, x)?);
        }
    }
    for i in 0..random {
        out.push(sample_orthogonal_pair_exact(alg, n, seed, i as u64));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct LpReport {
    pub pairs: usize,
    pub constraints: usize,
    pub variables: usize,
    pub outcome: LpOutcome,
    pub replay_ok: bool,
}

impl LpReport {
    pub fn feasible(&self) -> bool {
        matches!(self.outcome, LpOutcome::Feasible { .. })
    }

    pub fn to_json(&self, n: usize, alg: Algebra) -> Value {
        let unk = Unknowns { n, alg, derivations: vec![] };
        let body = match &self.outcome {
            LpOutcome::Feasible { h } => json!({
                "status": "feasible",
                "h": h.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (unk.name(i), format_rational(v))).collect::<BTreeMap<_, _>>(),
            }),
            LpOutcome::Infeasible { y } => json!({
                "status": "infeasible",
                "farkas_witness": y.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i.to_string(), format_rational(v))).collect::<BTreeMap<_, _>>(),
            }),
        };
        json!({
            "pairs": self.pairs,
            "constraints": self.constraints,
            "variables": self.variables,
            "result": body,
            "replay_ok": self.replay_ok,
        })
    }
}

/// Necessary linear conditions on `H` for `A − lie(H)` to be positive:
/// `2Re((w*Hu)(u*w)) <= Re(w*A(uu*)w)` for `w = v + uy`.
pub fn lp_constraints<A: JordanMap<Rational> + ?Sized>(a: &A, pairs: &[(ConeVector<Rational>, ConeVector<Rational>)]) -> Result<Inequalities, Error> {
    let (n, alg) = (a.n(), a.algebra());
    if !alg.is_associative() {
        return Err(Error::Unsupported("the LP parametrizes H only for associative algebras".into()));
    }
    let unk = Unknowns { n, alg, derivations: vec![] };
    let mut ys = vec![Hurwitz::zero(alg), Hurwitz::one(alg), -Hurwitz::one(alg)];
    for k in 1..alg.dim() {
        ys.push(Hurwitz::unit(alg, k));
        ys.push(-Hurwitz::unit(alg, k));
    }
    let mut sys = Inequalities::default();
    for (u, v) in pairs {
        let au = a.apply_to(&rank_one(u)?)?;
        for y in &ys {
            let w = v.add(&u.mul_right(y));
            let uw = u.dot(&w);
            let rhs = sesquilinear(&w, &au, &w).re();
            let mut row = vec![Rational::zero(); unk.count()];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..alg.dim() {
                        let f = Hurwitz::<Rational>::unit(alg, k);
                        let val = &(&(&w.get(i).conj() * &f) * u.get(j)) * &uw;
                        row[unk.h(i, j, k)] = q(2) * val.re();
                    }
                }
            }
            sys.push(row, rhs);
        }
    }
    Ok(sys)
}

/// Decides whether some `H` satisfies all sampled necessary conditions.
pub fn attempt_decomposition_lp<A: JordanMap<Rational> + ?Sized>(
    a: &A,
    pairs: &[(ConeVector<Rational>, ConeVector<Rational>)],
    mode: LpMode,
) -> Result<LpReport, Error> {
    let sys = lp_constraints(a, pairs)?;
    let outcome = solve_feasibility(&sys, mode)?;
    let replay_ok = match &outcome {
        LpOutcome::Feasible { h } => crate::lp::verify_feasible(&sys, h),
        LpOutcome::Infeasible { y } => crate::lp::verify_farkas(&sys, y) && y.iter().all(|v| !v.is_negative()),
    };
    Ok(LpReport { pairs: pairs.len(), constraints: sys.len(), variables: sys.vars(), outcome, replay_ok })
}

/// `H` from the unknown vector.
pub fn h_from_unknowns(n: usize, alg: Algebra, h: &[Rational]) -> Mat<Rational> {
    let d = alg.dim();
    Mat::from_fn(alg, n, |i, j| Hurwitz::from_fn(alg, |k| h[(i * n + j) * d + k].clone()))
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}
