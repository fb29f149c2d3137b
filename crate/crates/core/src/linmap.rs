//! Linear maps on `H_n(𝔻)`: coordinates, exponentials, Lie algebra elements,
//! sampled cone conditions and derivation dimensions.

use nalgebra::DMatrix;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::hurwitz::{Algebra, Hurwitz, OctonionDerivation};
use crate::jordan::{doubled_product, jordan_product, jordan_square, rank_one, sesquilinear, ConeVector, HermitianMatrix, Mat};
use crate::linalg::{rank_mod_p, rank_rational, rational_mod, PRIME};
use crate::sampling::sample_orthogonal_pair;
use crate::scalar::{Rational, Scalar};
use crate::{Error, DEFAULT_EPS};

/// A linear map `H_n(𝔻) → H_n(𝔻)` that can be evaluated over the scalar backend `T`.
pub trait JordanMap<T: Scalar>: Sync {
    fn algebra(&self) -> Algebra;
    fn n(&self) -> usize;
    fn apply_to(&self, x: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>, Error>;
}

/// Wraps a closure as a [`JordanMap`].
pub struct FnMap<F> {
    pub alg: Algebra,
    pub n: usize,
    pub f: F,
}

impl<T: Scalar, F> JordanMap<T> for FnMap<F>
where
    F: Fn(&HermitianMatrix<T>) -> HermitianMatrix<T> + Sync,
{
    fn algebra(&self) -> Algebra {
        self.alg
    }
    fn n(&self) -> usize {
        self.n
    }
    fn apply_to(&self, x: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>, Error> {
        Ok((self.f)(x))
    }
}

/// `Re(v* A(uu*) v)`.
pub fn pair_value<T: Scalar, A: JordanMap<T> + ?Sized>(a: &A, u: &ConeVector<T>, v: &ConeVector<T>) -> Result<T, Error> {
    let au = a.apply_to(&rank_one(u)?)?;
    Ok(sesquilinear(v, &au, v).re())
}

/// Real dimension `n + d·n(n−1)/2`.
pub fn space_dim(alg: Algebra, n: usize) -> usize {
    n + alg.dim() * n * (n - 1) / 2
}

/// Position `(l, m, k)` of every basis element; `k = 0` and `l = m` on the diagonal.
pub fn basis_index(alg: Algebra, n: usize) -> Vec<(usize, usize, usize)> {
    let mut out: Vec<_> = (0..n).map(|l| (l, l, 0)).collect();
    for l in 0..n {
        for m in l + 1..n {
            for k in 0..alg.dim() {
                out.push((l, m, k));
            }
        }
    }
    out
}

/// Integer basis `E_ll`, `E_lm f_k + E_ml f̄_k`.
pub fn integer_basis<T: Scalar>(alg: Algebra, n: usize) -> Vec<HermitianMatrix<T>> {
    basis_index(alg, n)
        .into_iter()
        .map(|(l, m, k)| HermitianMatrix::elementary(alg, n, l, m, Hurwitz::unit(alg, k)))
        .collect()
}

/// Coordinates in the integer basis.
pub fn integer_coords<T: Scalar>(x: &HermitianMatrix<T>) -> Vec<T> {
    basis_index(x.algebra(), x.n())
        .into_iter()
        .map(|(l, m, k)| x.get(l, m).coeff(k).clone())
        .collect()
}

/// Orthonormal basis under the trace form: `E_ll`, then `(E_lm f_k + E_ml f̄_k)/√2`.
pub fn basis(alg: Algebra, n: usize) -> Vec<HermitianMatrix<f64>> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    basis_index(alg, n)
        .into_iter()
        .zip(integer_basis::<f64>(alg, n))
        .map(|((l, m, _), b)| if l == m { b } else { b.scale(&r) })
        .collect()
}

pub fn coords(x: &HermitianMatrix<f64>) -> Vec<f64> {
    let s = std::f64::consts::SQRT_2;
    basis_index(x.algebra(), x.n())
        .into_iter()
        .map(|(l, m, k)| if l == m { x.diag(l) } else { s * x.get(l, m).coeff(k) })
        .collect()
}

pub fn from_coords(alg: Algebra, n: usize, c: &[f64]) -> HermitianMatrix<f64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut entries = vec![vec![Hurwitz::zero(alg); n]; n];
    for ((l, m, k), v) in basis_index(alg, n).into_iter().zip(c) {
        if l == m {
            entries[l][l] = Hurwitz::real(alg, *v);
        } else {
            entries[l][m].set_coeff(k, v * r);
        }
    }
    HermitianMatrix::from_upper(alg, n, |l, m| entries[l][m].clone())
}

/// A linear map stored as an `N×N` matrix in the orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeMap {
    pub alg: Algebra,
    pub n: usize,
    pub matrix: DMatrix<f64>,
    pub label: Option<String>,
}

impl ConeMap {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn from_function(alg: Algebra, n: usize, f: impl Fn(&HermitianMatrix<f64>) -> HermitianMatrix<f64>) -> Self {
        let b = basis(alg, n);
        let nn = b.len();
        let mut m = DMatrix::zeros(nn, nn);
        for (j, bj) in b.iter().enumerate() {
            for (i, c) in coords(&f(bj)).into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        ConeMap { alg, n, matrix: m, label: None }
    }

    pub fn from_map<A: JordanMap<f64> + ?Sized>(a: &A) -> Result<Self, Error> {
        let (alg, n) = (a.algebra(), a.n());
        let b = basis(alg, n);
        let nn = b.len();
        let mut m = DMatrix::zeros(nn, nn);
        for (j, bj) in b.iter().enumerate() {
            for (i, c) in coords(&a.apply_to(bj)?).into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        Ok(ConeMap { alg, n, matrix: m, label: None })
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn identity(alg: Algebra, n: usize) -> Self {
        let nn = space_dim(alg, n);
        ConeMap { alg, n, matrix: DMatrix::identity(nn, nn), label: None }
    }

    pub fn zero(alg: Algebra, n: usize) -> Self {
        let nn = space_dim(alg, n);
        ConeMap { alg, n, matrix: DMatrix::zeros(nn, nn), label: None }
    }

    pub fn apply(&self, x: &HermitianMatrix<f64>) -> HermitianMatrix<f64> {
        assert_eq!((x.algebra(), x.n()), (self.alg, self.n), "shape mismatch");
        let c = nalgebra::DVector::from_vec(coords(x));
        let y = &self.matrix * c;
        from_coords(self.alg, self.n, y.as_slice())
    }

    fn check(&self, o: &ConeMap) -> Result<(), Error> {
        if self.alg != o.alg {
            return Err(Error::AlgebraMismatch(self.alg, o.alg));
        }
        if self.n != o.n {
            return Err(Error::Shape(format!("size {} vs {}", self.n, o.n)));
        }
        Ok(())
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &ConeMap) -> Result<ConeMap, Error> {
        self.check(o)?;
        Ok(ConeMap { alg: self.alg, n: self.n, matrix: &self.matrix * &o.matrix, label: None })
    }

    pub fn add(&self, o: &ConeMap) -> Result<ConeMap, Error> {
        self.check(o)?;
        Ok(ConeMap { alg: self.alg, n: self.n, matrix: &self.matrix + &o.matrix, label: None })
    }

    pub fn sub(&self, o: &ConeMap) -> Result<ConeMap, Error> {
        self.check(o)?;
        Ok(ConeMap { alg: self.alg, n: self.n, matrix: &self.matrix - &o.matrix, label: None })
    }

    pub fn scale(&self, s: f64) -> ConeMap {
        ConeMap { alg: self.alg, n: self.n, matrix: &self.matrix * s, label: None }
    }

    /// Adjoint under the trace form.
    pub fn transpose(&self) -> ConeMap {
        ConeMap { alg: self.alg, n: self.n, matrix: self.matrix.transpose(), label: None }
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        self.matrix.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, o: &ConeMap) -> f64 {
        (&self.matrix - &o.matrix).amax()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<f64>> = self.matrix.row_iter().map(|r| r.iter().copied().collect()).collect();
        json!({
            "algebra": self.alg.tag(),
            "n": self.n,
            "dim": self.dim(),
            "label": self.label,
            "matrix": rows,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let alg: Algebra = v
            .get("algebra")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("map without algebra tag".into()))?
            .parse()?;
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("map without n".into()))? as usize;
        let nn = space_dim(alg, n);
        let rows = v.get("matrix").and_then(Value::as_array).ok_or_else(|| Error::Parse("map without matrix".into()))?;
        if rows.len() != nn {
            return Err(Error::Parse(format!("expected {nn} rows, found {}", rows.len())));
        }
        let mut m = DMatrix::zeros(nn, nn);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_array().filter(|r| r.len() == nn).ok_or_else(|| Error::Parse(format!("row {i} malformed")))?;
            for (j, e) in r.iter().enumerate() {
                m[(i, j)] = e.as_f64().ok_or_else(|| Error::Parse(format!("entry ({i},{j}) not a number")))?;
            }
        }
        let label = v.get("label").and_then(Value::as_str).map(str::to_string);
        Ok(ConeMap { alg, n, matrix: m, label })
    }
}

impl JordanMap<f64> for ConeMap {
    fn algebra(&self) -> Algebra {
        self.alg
    }
    fn n(&self) -> usize {
        self.n
    }
    fn apply_to(&self, x: &HermitianMatrix<f64>) -> Result<HermitianMatrix<f64>, Error> {
        if (x.algebra(), x.n()) != (self.alg, self.n) {
            return Err(Error::Shape("input does not match the map".into()));
        }
        Ok(self.apply(x))
    }
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.37;

/// Dense `exp(A)` by scaling and squaring with the degree-13 Padé approximant.
pub fn expm_dense(a: &DMatrix<f64>) -> Result<DMatrix<f64>, Error> {
    let nn = a.nrows();
    let norm = a.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    if !norm.is_finite() {
        return Err(Error::Numerical("non-finite operator".into()));
    }
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    if s > 1000 {
        return Err(Error::Numerical(format!("norm {norm:e} too large for scaling")));
    }
    let a = a * 2f64.powi(-s);
    let b = &PADE13;
    let id = DMatrix::<f64>::identity(nn, nn);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]) + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or_else(|| Error::Numerical("singular Padé denominator".into()))?;
    for _ in 0..s {
        r = &r * &r;
    }
    if r.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("overflow in exponential".into()));
    }
    Ok(r)
}

/// `e^{tA}`.
pub fn expm(a: &ConeMap, t: f64) -> Result<ConeMap, Error> {
    let m = expm_dense(&(&a.matrix * t))?;
    Ok(ConeMap { alg: a.alg, n: a.n, matrix: m, label: None })
}

/// `A_D(X)`: the derivation applied entrywise.
pub fn lift_derivation<T: Scalar>(d: &OctonionDerivation<T>, x: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>, Error> {
    let mut out = Vec::with_capacity(x.n() * x.n());
    for l in 0..x.n() {
        for m in 0..x.n() {
            out.push(d.apply(x.get(l, m))?);
        }
    }
    let n = x.n();
    Ok(HermitianMatrix::from_upper(x.algebra(), n, |l, m| out[l * n + m].clone()))
}

/// `X ↦ HX + XH* + A_D(X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieMap<T> {
    pub h: Mat<T>,
    pub derivation: Option<OctonionDerivation<T>>,
}

pub fn lie_map<T: Scalar>(h: Mat<T>, derivation: Option<OctonionDerivation<T>>) -> Result<LieMap<T>, Error> {
    let alg = h.algebra();
    if alg == Algebra::O {
        if h.n() > 3 {
            return Err(Error::Shape("H_n(O) requires n <= 3".into()));
        }
        let tr = h.trace();
        let im = Hurwitz::from_fn(alg, |k| if k == 0 { T::zero() } else { tr.coeff(k).clone() });
        if !im.is_negligible(1e-12) {
            return Err(Error::Precondition("octonion H must have real trace".into()));
        }
    } else if derivation.is_some() {
        return Err(Error::Precondition("derivation part is only defined for octonions".into()));
    }
    Ok(LieMap { h, derivation })
}

impl<T: Scalar> JordanMap<T> for LieMap<T> {
    fn algebra(&self) -> Algebra {
        self.h.algebra()
    }
    fn n(&self) -> usize {
        self.h.n()
    }
    fn apply_to(&self, x: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>, Error> {
        let hx = self.h.matmul(x.as_mat())?;
        let n = x.n();
        let mut y = HermitianMatrix::from_upper(x.algebra(), n, |l, m| hx.get(l, m) + &hx.get(m, l).conj());
        if let Some(d) = &self.derivation {
            y = y.add(&lift_derivation(d, x)?)?;
        }
        Ok(y)
    }
}

impl<T: Scalar> LieMap<T> {
    pub fn to_cone_map(&self) -> Result<ConeMap, Error> {
        let f64_map = LieMap {
            h: self.h.map(|v| v.to_f64()),
            derivation: self.derivation.as_ref().map(|d| OctonionDerivation {
                generators: d.generators.iter().map(|(a, b)| (a.to_f64(), b.to_f64())).collect(),
            }),
        };
        Ok(ConeMap::from_map(&f64_map)?.with_label("lie"))
    }
}

/// `X ↦ Σ [L(y_k), L(z_k)]X + L(w)X`.
#[derive(Clone, Debug)]
pub struct InnerLieMap<T> {
    pub pairs: Vec<(HermitianMatrix<T>, HermitianMatrix<T>)>,
    pub w: HermitianMatrix<T>,
}

impl<T: Scalar> JordanMap<T> for InnerLieMap<T> {
    fn algebra(&self) -> Algebra {
        self.w.algebra()
    }
    fn n(&self) -> usize {
        self.w.n()
    }
    fn apply_to(&self, x: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>, Error> {
        let mut acc = jordan_product(&self.w, x)?;
        for (y, z) in &self.pairs {
            let a = jordan_product(y, &jordan_product(z, x)?)?;
            let b = jordan_product(z, &jordan_product(y, x)?)?;
            acc = acc.add(&a.sub(&b)?)?;
        }
        Ok(acc)
    }
}

/// `L(X)Y = X ∘ Y`.
pub fn l_op(x: &HermitianMatrix<f64>) -> ConeMap {
    ConeMap::from_function(x.algebra(), x.n(), |y| jordan_product(x, y).expect("same shape")).with_label("L")
}

/// `P(X) = 2L(X)² − L(X²)`.
pub fn quadratic_rep(x: &HermitianMatrix<f64>) -> ConeMap {
    let l = l_op(x);
    let l2 = l_op(&jordan_square(x));
    l.compose(&l).expect("same shape").scale(2.0).sub(&l2).expect("same shape").with_label("P")
}

/// A sampled pair and its value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: u64,
    pub u: ConeVector<f64>,
    pub v: ConeVector<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub params: Value,
    pub samples: u64,
    pub min_value: f64,
    pub max_abs_value: f64,
    pub witness: Option<Witness>,
    pub pass: bool,
}

impl CheckReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

#[derive(Clone, Copy)]
struct Extremes {
    min: (f64, u64),
    max_abs: (f64, u64),
}

impl Extremes {
    fn merge(self, o: Extremes) -> Extremes {
        let pick = |a: (f64, u64), b: (f64, u64), better: fn(f64, f64) -> bool| {
            if better(b.0, a.0) || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        };
        Extremes { min: pick(self.min, o.min, |x, y| x < y), max_abs: pick(self.max_abs, o.max_abs, |x, y| x > y) }
    }
}

/// Evaluates `Re(v* A(uu*) v)` over `samples` seeded orthogonal pairs, in parallel.
/// The reduction is by value with index tie-break, so the result does not depend on scheduling.
fn scan_pairs<A: JordanMap<f64> + ?Sized>(a: &A, samples: u64, seed: u64) -> Result<Option<Extremes>, Error> {
    let (alg, n) = (a.algebra(), a.n());
    if n < 2 {
        return Ok(None);
    }
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let (u, v) = sample_orthogonal_pair(alg, n, seed, i);
            let val = pair_value(a, &u, &v)?;
            if !val.is_finite() {
                return Err(Error::Numerical(format!("non-finite value at sample {i}")));
            }
            Ok(Extremes { min: (val, i), max_abs: (val.abs(), i) })
        })
        .try_fold(|| None, |acc: Option<Extremes>, e| e.map(|e| Some(acc.map_or(e, |a| a.merge(e)))))
        .try_reduce(|| None, |a, b| Ok(match (a, b) {
            (Some(a), Some(b)) => Some(a.merge(b)),
            (a, None) => a,
            (None, b) => b,
        }))
}

fn witness_at<A: JordanMap<f64> + ?Sized>(a: &A, seed: u64, index: u64) -> Result<Witness, Error> {
    let (u, v) = sample_orthogonal_pair(a.algebra(), a.n(), seed, index);
    let value = pair_value(a, &u, &v)?;
    Ok(Witness { index, u, v, value })
}

/// Necessary condition for cross-positivity: `Re(v* A(uu*) v) >= −ε` on orthogonal pairs.
pub fn check_sv_condition<A: JordanMap<f64> + ?Sized>(a: &A, samples: u64, seed: u64, eps: f64) -> Result<CheckReport, Error> {
    let ext = scan_pairs(a, samples, seed)?;
    let (min_value, max_abs_value, pass, witness) = match ext {
        None => (0.0, 0.0, true, None),
        Some(e) => {
            let pass = e.min.0 >= -eps;
            let w = witness_at(a, seed, e.min.1)?;
            (e.min.0, e.max_abs.0, pass, Some(w))
        }
    };
    Ok(CheckReport {
        check: "sv_condition".into(),
        params: json!({ "algebra": a.algebra().tag(), "n": a.n(), "seed": seed, "eps": eps }),
        samples,
        min_value,
        max_abs_value,
        witness,
        pass,
    })
}

/// Necessary condition for membership in the Lie algebra: `|Re(v* A(uu*) v)| <= ε` on orthogonal pairs.
pub fn check_lie_condition<A: JordanMap<f64> + ?Sized>(a: &A, samples: u64, seed: u64, eps: f64) -> Result<CheckReport, Error> {
    let ext = scan_pairs(a, samples, seed)?;
    let (min_value, max_abs_value, pass, witness) = match ext {
        None => (0.0, 0.0, true, None),
        Some(e) => {
            let pass = e.max_abs.0 <= eps;
            let w = witness_at(a, seed, e.max_abs.1)?;
            (e.min.0, e.max_abs.0, pass, Some(w))
        }
    };
    Ok(CheckReport {
        check: "lie_condition".into(),
        params: json!({ "algebra": a.algebra().tag(), "n": a.n(), "seed": seed, "eps": eps }),
        samples,
        min_value,
        max_abs_value,
        witness,
        pass,
    })
}

pub fn check_sv_default<A: JordanMap<f64> + ?Sized>(a: &A, samples: u64, seed: u64) -> Result<CheckReport, Error> {
    check_sv_condition(a, samples, seed, DEFAULT_EPS)
}

/// Spaces whose derivation algebra dimension can be computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DerivationSpace {
    /// The octonions.
    O,
    /// The Albert algebra `H_3(𝕆)`.
    H3O,
    /// `H_n(𝔻)`.
    Jordan(usize, Algebra),
}

impl std::str::FromStr for DerivationSpace {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "O" => Ok(DerivationSpace::O),
            "H3O" => Ok(DerivationSpace::H3O),
            _ => {
                let rest = s.strip_prefix('H').ok_or_else(|| Error::Parse(format!("unknown space {s}")))?;
                let (digits, tag) = rest.split_at(rest.len().saturating_sub(1));
                let n: usize = digits.parse().map_err(|_| Error::Parse(format!("unknown space {s}")))?;
                Ok(DerivationSpace::Jordan(n, tag.parse()?))
            }
        }
    }
}

impl std::fmt::Display for DerivationSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DerivationSpace::O => write!(f, "O"),
            DerivationSpace::H3O => write!(f, "H3O"),
            DerivationSpace::Jordan(n, a) => write!(f, "H{n}{a}"),
        }
    }
}

/// Bounds on the dimension of a derivation algebra, with the method used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub space: String,
    pub unknowns: usize,
    pub equations: usize,
    pub lower: usize,
    pub upper: usize,
    pub method: String,
}

impl DimensionReport {
    pub fn exact(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

/// Leibniz rows for `Der(𝕆)`; unknown `d[r][c]` (index `8r + c`) is coefficient `r` of `D(f_c)`.
pub fn octonion_leibniz_system() -> Vec<Vec<Rational>> {
    use crate::hurwitz::mult_sign;
    let mut rows = Vec::new();
    for i in 0..8 {
        for j in 0..8 {
            for t in 0..8 {
                let mut row = vec![Rational::zero(); 64];
                let idx = |r: usize, c: usize| 8 * r + c;
                row[idx(t, i ^ j)] += Rational::from_i64(mult_sign(i, j) as i64);
                row[idx(t ^ j, i)] -= Rational::from_i64(mult_sign(t ^ j, j) as i64);
                row[idx(i ^ t, j)] -= Rational::from_i64(mult_sign(i, i ^ t) as i64);
                if row.iter().any(|v| !v.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// Structure constants of `XY + YX` in the integer basis: `c[a][b][e]`.
fn structure_constants(alg: Algebra, n: usize) -> Vec<Vec<Vec<i64>>> {
    let b = integer_basis::<Rational>(alg, n);
    b.iter()
        .map(|x| {
            b.iter()
                .map(|y| {
                    integer_coords(&doubled_product(x, y))
                        .into_iter()
                        .map(|v| {
                            assert!(v.is_integer());
                            num_traits::ToPrimitive::to_i64(v.numer()).expect("small")
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Sparse Leibniz rows for `Der(H_n(𝔻))`; unknown `d[e][c]` (index `N e + c`) is coefficient `e` of `D(b_c)`.
fn jordan_leibniz_rows(alg: Algebra, n: usize) -> (usize, Vec<Vec<(usize, i64)>>) {
    let c = structure_constants(alg, n);
    let nn = c.len();
    let mut rows = Vec::new();
    for a in 0..nn {
        for b in a..nn {
            for e in 0..nn {
                let mut row: std::collections::BTreeMap<usize, i64> = Default::default();
                for k in 0..nn {
                    let v = c[a][b][k];
                    if v != 0 {
                        *row.entry(nn * e + k).or_default() += v;
                    }
                    let v = c[k][b][e];
                    if v != 0 {
                        *row.entry(nn * k + a).or_default() -= v;
                    }
                    let v = c[a][k][e];
                    if v != 0 {
                        *row.entry(nn * k + b).or_default() -= v;
                    }
                }
                let row: Vec<_> = row.into_iter().filter(|(_, v)| *v != 0).collect();
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    (nn * nn, rows)
}

fn to_mod(v: i64) -> u64 {
    v.rem_euclid(PRIME as i64) as u64
}

/// Rank mod p of the Gram matrix `AᵀA` of a sparse integer system.
fn gram_rank_mod_p(unknowns: usize, rows: &[Vec<(usize, i64)>]) -> usize {
    let mut g = vec![vec![0u64; unknowns]; unknowns];
    for row in rows {
        for &(i, a) in row {
            for &(j, b) in row {
                let prod = crate::linalg::mulmod(to_mod(a), to_mod(b), PRIME);
                g[i][j] = (g[i][j] + prod) % PRIME;
            }
        }
    }
    rank_mod_p(g, PRIME)
}

/// Matrix of a map in the integer basis, flattened as `d[e][c]`.
fn flatten_map(alg: Algebra, n: usize, f: impl Fn(&HermitianMatrix<Rational>) -> HermitianMatrix<Rational>) -> Vec<Rational> {
    let b = integer_basis::<Rational>(alg, n);
    let nn = b.len();
    let cols: Vec<Vec<Rational>> = b.iter().map(|x| integer_coords(&f(x))).collect();
    let mut out = vec![Rational::zero(); nn * nn];
    for (c, col) in cols.iter().enumerate() {
        for (e, v) in col.iter().enumerate() {
            out[nn * e + c] = v.clone();
        }
    }
    out
}

fn satisfies_leibniz(rows: &[Vec<(usize, i64)>], d: &[Rational]) -> bool {
    rows.iter().all(|row| {
        row.iter()
            .fold(Rational::zero(), |acc, &(i, a)| acc + &d[i] * Rational::from_i64(a))
            .is_zero()
    })
}

/// A basis of `Der(𝕆)` as 8×8 rational matrices (column `c` is `D(f_c)`).
pub fn octonion_derivation_basis() -> Vec<Vec<Vec<Rational>>> {
    let ns = crate::linalg::nullspace(&octonion_leibniz_system(), 64);
    ns.into_iter()
        .map(|v| (0..8).map(|r| (0..8).map(|c| v[8 * r + c].clone()).collect()).collect())
        .collect()
}

fn derivation_bounds(alg: Algebra, n: usize, label: String) -> DimensionReport {
    let (unknowns, rows) = jordan_leibniz_rows(alg, n);
    let equations = rows.len();
    if unknowns <= 256 {
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|row| {
                let mut r = vec![Rational::zero(); unknowns];
                for &(i, a) in row {
                    r[i] = Rational::from_i64(a);
                }
                r
            })
            .collect();
        let dim = unknowns - rank_rational(&dense);
        return DimensionReport { space: label, unknowns, equations, lower: dim, upper: dim, method: "exact rational rank".into() };
    }
    let upper = unknowns - gram_rank_mod_p(unknowns, &rows);
    // explicit derivations: [L(a), L(b)] and, for octonions, lifted A_D
    let b = integer_basis::<Rational>(alg, n);
    let mut known: Vec<Vec<Rational>> = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let (x, y) = (&b[i], &b[j]);
            known.push(flatten_map(alg, n, |z| {
                let a = doubled_product(x, &doubled_product(y, z));
                let c = doubled_product(y, &doubled_product(x, z));
                a.sub(&c).expect("same shape")
            }));
        }
    }
    if alg == Algebra::O {
        for m in octonion_derivation_basis() {
            known.push(flatten_map(alg, n, |z| {
                HermitianMatrix::from_upper(alg, n, |l, k| crate::hurwitz::apply_derivation_matrix(&m, z.get(l, k)))
            }));
        }
    }
    let verified: Vec<&Vec<Rational>> = known.iter().filter(|d| satisfies_leibniz(&rows, d)).collect();
    assert_eq!(verified.len(), known.len(), "explicit derivation failed the Leibniz system");
    let lower = rank_mod_p(verified.iter().map(|d| d.iter().map(|v| rational_mod(v, PRIME)).collect()).collect(), PRIME);
    DimensionReport {
        space: label,
        unknowns,
        equations,
        lower,
        upper,
        method: "upper: rank of Gram matrix mod 2^61-1; lower: rank mod 2^61-1 of explicit derivations verified exactly".into(),
    }
}

/// Dimension bounds for the derivation algebra of `space`.
pub fn derivation_dimension_report(space: DerivationSpace) -> Result<DimensionReport, Error> {
    match space {
        DerivationSpace::O => {
            let rows = octonion_leibniz_system();
            let dim = 64 - rank_rational(&rows);
            Ok(DimensionReport {
                space: space.to_string(),
                unknowns: 64,
                equations: rows.len(),
                lower: dim,
                upper: dim,
                method: "exact rational rank".into(),
            })
        }
        DerivationSpace::H3O => Ok(derivation_bounds(Algebra::O, 3, space.to_string())),
        DerivationSpace::Jordan(n, alg) => {
            if n == 0 || (alg == Algebra::O && n > 3) {
                return Err(Error::Shape(format!("H_{n}({alg}) is not a Jordan algebra of this family")));
            }
            Ok(derivation_bounds(alg, n, space.to_string()))
        }
    }
}

/// `dim Der(space)`; an error if the bounds do not meet.
pub fn derivation_dimension(space: DerivationSpace) -> Result<usize, Error> {
    let r = derivation_dimension_report(space)?;
    r.exact().ok_or_else(|| Error::Numerical(format!("bounds {}..{} do not meet", r.lower, r.upper)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::trace_inner;
    use crate::sampling::{random_hermitian, random_matrix, rng_for};

    #[test]
    fn basis_is_orthonormal() {
        for alg in Algebra::ALL {
            let b = basis(alg, 3);
            assert_eq!(b.len(), space_dim(alg, 3));
            for (i, x) in b.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    let g = trace_inner(x, y).unwrap();
                    assert!((g - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
                }
            }
        }
        assert_eq!(basis(Algebra::R, 2).len(), 3);
        assert_eq!(basis(Algebra::O, 3).len(), 27);
    }

    #[test]
    fn coords_round_trip() {
        let mut rng = rng_for(1, 0);
        let x = random_hermitian(Algebra::H, 3, &mut rng);
        let y = from_coords(Algebra::H, 3, &coords(&x));
        assert!(x.sub(&y).unwrap().is_negligible(1e-14));
    }

    #[test]
    fn lie_map_identity_doubles() {
        let h = Mat::<f64>::identity(Algebra::C, 3);
        let a = lie_map(h, None).unwrap().to_cone_map().unwrap();
        assert!(a.max_abs_diff(&ConeMap::identity(Algebra::C, 3).scale(2.0)) < 1e-14);
    }

    #[test]
    fn octonion_trace_must_be_real() {
        let mut h = Mat::<f64>::zero(Algebra::O, 3);
        h.set(0, 0, Hurwitz::unit(Algebra::O, 2));
        assert!(lie_map(h.clone(), None).is_err());
        h.set(1, 1, -Hurwitz::unit(Algebra::O, 2));
        assert!(lie_map(h, None).is_ok());
        let mut rng = rng_for(2, 0);
        assert!(lie_map(random_matrix(Algebra::R, 3, &mut rng), Some(OctonionDerivation::zero())).is_err());
    }

    #[test]
    fn expm_small_and_scaled() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let e = expm_dense(&(m.clone() * 20.0)).unwrap();
        assert!((e[(0, 0)] - 20f64.cos()).abs() < 1e-12);
        assert!((e[(0, 1)] - 20f64.sin()).abs() < 1e-12);
        let z = expm_dense(&DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(z, DMatrix::identity(3, 3));
    }

    #[test]
    fn octonion_derivations_have_dimension_14() {
        assert_eq!(derivation_dimension(DerivationSpace::O).unwrap(), 14);
        assert_eq!(octonion_derivation_basis().len(), 14);
    }

    #[test]
    fn small_jordan_derivations() {
        assert_eq!(derivation_dimension(DerivationSpace::Jordan(2, Algebra::R)).unwrap(), 1);
        // so(3)
        assert_eq!(derivation_dimension(DerivationSpace::Jordan(3, Algebra::R)).unwrap(), 3);
        assert_eq!("H2R".parse::<DerivationSpace>().unwrap(), DerivationSpace::Jordan(2, Algebra::R));
    }
}
