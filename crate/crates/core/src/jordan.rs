//! The Jordan algebra `H_n(𝔻)` with `X ∘ Y = ½(XY + YX)`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::hurwitz::{mult_sign, Algebra, Hurwitz};
use crate::scalar::{Rational, Scalar};
use crate::{Error, DEFAULT_EPS};

/// Square `n×n` matrix over a Hurwitz algebra, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    alg: Algebra,
    n: usize,
    data: Vec<Hurwitz<T>>,
}

impl<T: Scalar> Mat<T> {
    pub fn zero(alg: Algebra, n: usize) -> Self {
        Mat { alg, n, data: vec![Hurwitz::zero(alg); n * n] }
    }

    pub fn identity(alg: Algebra, n: usize) -> Self {
        let mut m = Self::zero(alg, n);
        for l in 0..n {
            m.set(l, l, Hurwitz::one(alg));
        }
        m
    }

    pub fn from_fn(alg: Algebra, n: usize, mut f: impl FnMut(usize, usize) -> Hurwitz<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for l in 0..n {
            for m in 0..n {
                let x = f(l, m);
                assert_eq!(x.algebra(), alg, "algebra mismatch");
                data.push(x);
            }
        }
        Mat { alg, n, data }
    }

    pub fn diag(alg: Algebra, d: &[Hurwitz<T>]) -> Self {
        let n = d.len();
        Self::from_fn(alg, n, |l, m| if l == m { d[l].clone() } else { Hurwitz::zero(alg) })
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, l: usize, m: usize) -> &Hurwitz<T> {
        &self.data[l * self.n + m]
    }

    pub fn set(&mut self, l: usize, m: usize, x: Hurwitz<T>) {
        assert_eq!(x.algebra(), self.alg, "algebra mismatch");
        self.data[l * self.n + m] = x;
    }

    fn check_shape(&self, o: &Self) -> Result<(), Error> {
        if self.alg != o.alg {
            return Err(Error::AlgebraMismatch(self.alg, o.alg));
        }
        if self.n != o.n {
            return Err(Error::Shape(format!("size {} vs {}", self.n, o.n)));
        }
        Ok(())
    }

    pub fn matmul(&self, o: &Self) -> Result<Self, Error> {
        self.check_shape(o)?;
        Ok(Self::from_fn(self.alg, self.n, |l, m| {
            let mut acc = Hurwitz::zero(self.alg);
            for k in 0..self.n {
                acc += &(self.get(l, k) * o.get(k, m));
            }
            acc
        }))
    }

    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        self.check_shape(o)?;
        Ok(Self::from_fn(self.alg, self.n, |l, m| self.get(l, m) + o.get(l, m)))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, Error> {
        self.check_shape(o)?;
        Ok(Self::from_fn(self.alg, self.n, |l, m| self.get(l, m) - o.get(l, m)))
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_fn(self.alg, self.n, |l, m| self.get(l, m).scale(s))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.alg, self.n, |l, m| self.get(m, l).conj())
    }

    pub fn trace(&self) -> Hurwitz<T> {
        let mut acc = Hurwitz::zero(self.alg);
        for l in 0..self.n {
            acc += self.get(l, l);
        }
        acc
    }

    /// `X w`.
    pub fn mul_vec(&self, w: &ConeVector<T>) -> ConeVector<T> {
        assert_eq!(w.len(), self.n);
        ConeVector::from_fn(self.alg, self.n, |l| {
            let mut acc = Hurwitz::zero(self.alg);
            for m in 0..self.n {
                acc += &(self.get(l, m) * w.get(m));
            }
            acc
        })
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.n).all(|l| {
            (l..self.n).all(|m| (self.get(l, m) - &self.get(m, l).conj()).is_negligible(tol))
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> Mat<U> {
        Mat::from_fn(self.alg, self.n, |l, m| self.get(l, m).map(f))
    }

    pub fn embed(&self, alg: Algebra) -> Result<Self, Error> {
        let data = self.data.iter().map(|x| x.embed(alg)).collect::<Result<Vec<_>, _>>()?;
        Ok(Mat { alg, n: self.n, data })
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.n)
            .map(|l| Value::Array((0..self.n).map(|m| self.get(l, m).to_json()).collect()))
            .collect();
        json!({ "algebra": self.alg.tag(), "n": self.n, "entries": rows })
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let alg: Algebra = v
            .get("algebra")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("matrix without algebra tag".into()))?
            .parse()?;
        let rows = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("matrix without entries".into()))?;
        let n = rows.len();
        if let Some(declared) = v.get("n").and_then(Value::as_u64) {
            if declared as usize != n {
                return Err(Error::Parse(format!("declared n = {declared}, found {n} rows")));
            }
        }
        let mut m = Mat::zero(alg, n);
        for (l, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| Error::Parse("row is not an array".into()))?;
            if row.len() != n {
                return Err(Error::Parse(format!("row {l} has {} entries, expected {n}", row.len())));
            }
            for (k, e) in row.iter().enumerate() {
                let x = Hurwitz::from_json(e)?;
                if x.algebra() != alg {
                    return Err(Error::AlgebraMismatch(x.algebra(), alg));
                }
                m.set(l, k, x);
            }
        }
        Ok(m)
    }
}

/// A hermitian matrix, an element of `H_n(𝔻)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T>(Mat<T>);

impl<T: Scalar> HermitianMatrix<T> {
    /// Validates `X* = X` (exactly, or to 1e−12 for floats) and symmetrizes from the upper triangle.
    pub fn new(m: Mat<T>) -> Result<Self, Error> {
        if m.alg == Algebra::O && m.n > 3 {
            return Err(Error::Shape("H_n(O) requires n <= 3".into()));
        }
        if !m.is_hermitian(1e-12) {
            return Err(Error::Precondition("matrix is not hermitian".into()));
        }
        Ok(Self::from_upper(m.alg, m.n, |l, k| m.get(l, k).clone()))
    }

    /// Builds from entries `(l, m)` with `l <= m`; the diagonal keeps its real part.
    pub fn from_upper(alg: Algebra, n: usize, mut f: impl FnMut(usize, usize) -> Hurwitz<T>) -> Self {
        let mut m = Mat::zero(alg, n);
        for l in 0..n {
            let d = f(l, l);
            m.set(l, l, Hurwitz::real(alg, d.re()));
            for k in l + 1..n {
                let x = f(l, k);
                m.set(k, l, x.conj());
                m.set(l, k, x);
            }
        }
        HermitianMatrix(m)
    }

    pub fn zero(alg: Algebra, n: usize) -> Self {
        HermitianMatrix(Mat::zero(alg, n))
    }

    pub fn identity(alg: Algebra, n: usize) -> Self {
        HermitianMatrix(Mat::identity(alg, n))
    }

    pub fn diag_real(alg: Algebra, d: &[T]) -> Self {
        Self::from_upper(alg, d.len(), |l, m| {
            if l == m {
                Hurwitz::real(alg, d[l].clone())
            } else {
                Hurwitz::zero(alg)
            }
        })
    }

    /// `E_lm f + E_ml f̄` for `l != m`, `E_ll · Re(f)` otherwise.
    pub fn elementary(alg: Algebra, n: usize, l: usize, m: usize, x: Hurwitz<T>) -> Self {
        Self::from_upper(alg, n, |a, b| {
            if (a, b) == (l.min(m), l.max(m)) {
                if l <= m {
                    x.clone()
                } else {
                    x.conj()
                }
            } else {
                Hurwitz::zero(alg)
            }
        })
    }

    pub fn as_mat(&self) -> &Mat<T> {
        &self.0
    }

    pub fn into_mat(self) -> Mat<T> {
        self.0
    }

    pub fn algebra(&self) -> Algebra {
        self.0.alg
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn get(&self, l: usize, m: usize) -> &Hurwitz<T> {
        self.0.get(l, m)
    }

    pub fn diag(&self, l: usize) -> T {
        self.0.get(l, l).re()
    }

    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        Ok(HermitianMatrix(self.0.add(&o.0)?))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, Error> {
        Ok(HermitianMatrix(self.0.sub(&o.0)?))
    }

    pub fn scale(&self, s: &T) -> Self {
        HermitianMatrix(self.0.scale(s))
    }

    pub fn trace(&self) -> T {
        (0..self.n()).fold(T::zero(), |acc, l| acc + self.diag(l))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> HermitianMatrix<U> {
        HermitianMatrix(self.0.map(f))
    }

    pub fn to_f64(&self) -> HermitianMatrix<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn to_rational(&self) -> HermitianMatrix<Rational> {
        self.map(|v| v.to_rational())
    }

    pub fn is_real(&self) -> bool {
        self.0.data.iter().all(|x| x.is_real())
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .data
            .iter()
            .flat_map(|x| x.coeffs().iter().map(|v| v.to_f64().abs()))
            .fold(0.0, f64::max)
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.0.data.iter().all(|x| x.is_negligible(tol))
    }

    pub fn to_json(&self) -> Value {
        self.0.to_json()
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        Self::new(Mat::from_json(v)?)
    }
}

impl<T: Scalar> Serialize for HermitianMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for HermitianMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        HermitianMatrix::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// A column vector in `𝔻ⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeVector<T> {
    alg: Algebra,
    comps: Vec<Hurwitz<T>>,
}

impl<T: Scalar> ConeVector<T> {
    pub fn new(alg: Algebra, comps: Vec<Hurwitz<T>>) -> Result<Self, Error> {
        if let Some(x) = comps.iter().find(|x| x.algebra() != alg) {
            return Err(Error::AlgebraMismatch(x.algebra(), alg));
        }
        Ok(ConeVector { alg, comps })
    }

    pub fn from_fn(alg: Algebra, n: usize, f: impl FnMut(usize) -> Hurwitz<T>) -> Self {
        let comps: Vec<_> = (0..n).map(f).collect();
        ConeVector::new(alg, comps).expect("algebra mismatch")
    }

    pub fn from_reals(alg: Algebra, v: &[T]) -> Self {
        Self::from_fn(alg, v.len(), |l| Hurwitz::real(alg, v[l].clone()))
    }

    /// The standard basis vector `e_l` (0-based).
    pub fn e(alg: Algebra, n: usize, l: usize) -> Self {
        Self::from_fn(alg, n, |k| if k == l { Hurwitz::one(alg) } else { Hurwitz::zero(alg) })
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn get(&self, l: usize) -> &Hurwitz<T> {
        &self.comps[l]
    }

    pub fn comps(&self) -> &[Hurwitz<T>] {
        &self.comps
    }

    pub fn set(&mut self, l: usize, x: Hurwitz<T>) {
        assert_eq!(x.algebra(), self.alg);
        self.comps[l] = x;
    }

    pub fn norm_sqr(&self) -> T {
        self.comps.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr())
    }

    /// `u* w = Σ ū_l w_l`.
    pub fn dot(&self, w: &Self) -> Hurwitz<T> {
        let mut acc = Hurwitz::zero(self.alg);
        for (a, b) in self.comps.iter().zip(&w.comps) {
            acc += &(&a.conj() * b);
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.alg, self.len(), |l| &self.comps[l] + &o.comps[l])
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.alg, self.len(), |l| &self.comps[l] - &o.comps[l])
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_fn(self.alg, self.len(), |l| self.comps[l].scale(s))
    }

    /// Componentwise right multiplication `u y`.
    pub fn mul_right(&self, y: &Hurwitz<T>) -> Self {
        Self::from_fn(self.alg, self.len(), |l| &self.comps[l] * y)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|x| x.is_zero())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> ConeVector<U> {
        ConeVector::from_fn(self.alg, self.len(), |l| self.comps[l].map(f))
    }

    pub fn to_f64(&self) -> ConeVector<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "algebra": self.alg.tag(),
            "components": self.comps.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let alg: Algebra = v
            .get("algebra")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("vector without algebra tag".into()))?
            .parse()?;
        let comps = v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("vector without components".into()))?
            .iter()
            .map(Hurwitz::from_json)
            .collect::<Result<Vec<_>, _>>()?;
        ConeVector::new(alg, comps)
    }
}

impl ConeVector<f64> {
    pub fn normalized(&self) -> Self {
        let s = self.norm_sqr().sqrt();
        self.scale(&(1.0 / s))
    }
}

impl<T: Scalar> Serialize for ConeVector<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for ConeVector<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        ConeVector::from_json(&v).map_err(serde::de::Error::custom)
    }
}

fn check_pair<T: Scalar>(x: &HermitianMatrix<T>, y: &HermitianMatrix<T>) -> Result<(), Error> {
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch(x.algebra(), y.algebra()));
    }
    if x.n() != y.n() {
        return Err(Error::Shape(format!("size {} vs {}", x.n(), y.n())));
    }
    Ok(())
}

/// `XY + YX` without the factor ½.
pub(crate) fn doubled_product<T: Scalar>(x: &HermitianMatrix<T>, y: &HermitianMatrix<T>) -> HermitianMatrix<T> {
    let alg = x.algebra();
    let n = x.n();
    HermitianMatrix::from_upper(alg, n, |l, m| {
        let mut acc = Hurwitz::zero(alg);
        for k in 0..n {
            acc += &(x.get(l, k) * y.get(k, m));
            acc += &(y.get(l, k) * x.get(k, m));
        }
        acc
    })
}

/// `X ∘ Y = ½(XY + YX)`.
pub fn jordan_product<T: Scalar>(x: &HermitianMatrix<T>, y: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>, Error> {
    check_pair(x, y)?;
    let half = T::from_frac(1, 2);
    Ok(doubled_product(x, y).scale(&half))
}

pub fn jordan_square<T: Scalar>(x: &HermitianMatrix<T>) -> HermitianMatrix<T> {
    jordan_product(x, x).expect("same shape")
}

/// `⟨X, Y⟩ = Tr(X ∘ Y) = Σ Re(x_lk y_kl)`.
pub fn trace_inner<T: Scalar>(x: &HermitianMatrix<T>, y: &HermitianMatrix<T>) -> Result<T, Error> {
    check_pair(x, y)?;
    let n = x.n();
    let mut acc = T::zero();
    for l in 0..n {
        for k in 0..n {
            acc = acc + x.get(l, k).inner(&y.get(k, l).conj());
        }
    }
    Ok(acc)
}

/// `P(X)Y = 2X∘(X∘Y) − X²∘Y`.
pub fn quadratic_rep_apply<T: Scalar>(x: &HermitianMatrix<T>, y: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>, Error> {
    let xy = jordan_product(x, y)?;
    let a = jordan_product(x, &xy)?.scale(&T::from_i64(2));
    let b = jordan_product(&jordan_square(x), y)?;
    a.sub(&b)
}

/// `uu*`; for 𝕆 the first component must be real.
pub fn rank_one<T: Scalar>(u: &ConeVector<T>) -> Result<HermitianMatrix<T>, Error> {
    if u.algebra() == Algebra::O {
        if u.len() > 3 {
            return Err(Error::Shape("H_n(O) requires n <= 3".into()));
        }
        if !u.get(0).is_real() {
            return Err(Error::Precondition("octonion vector needs a real first component".into()));
        }
    }
    Ok(rank_one_raw(u))
}

/// `uu*` without the real-first-component guard.
pub fn rank_one_raw<T: Scalar>(u: &ConeVector<T>) -> HermitianMatrix<T> {
    HermitianMatrix::from_upper(u.algebra(), u.len(), |l, m| u.get(l) * &u.get(m).conj())
}

/// `v*(X w) = Σ_l v̄_l (Σ_m x_lm w_m)`.
pub fn sesquilinear<T: Scalar>(v: &ConeVector<T>, x: &HermitianMatrix<T>, w: &ConeVector<T>) -> Hurwitz<T> {
    v.dot(&x.as_mat().mul_vec(w))
}

/// `Tr(X^k)` for `k = 1..=kmax`, powers by repeated Jordan product.
pub fn power_traces<T: Scalar>(x: &HermitianMatrix<T>, kmax: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(kmax);
    if kmax == 0 {
        return out;
    }
    let half = T::from_frac(1, 2);
    let mut p = x.clone();
    out.push(p.trace());
    for _ in 1..kmax {
        p = doubled_product(x, &p).scale(&half);
        out.push(p.trace());
    }
    out
}

/// Newton's identities: power sums to the monic characteristic polynomial,
/// coefficients in descending order `[1, c_1, ..., c_n]`.
pub fn newton_char_poly<T: Scalar>(p: &[T]) -> Vec<T> {
    let n = p.len();
    let mut e = vec![T::one()];
    for k in 1..=n {
        let mut acc = T::zero();
        for i in 1..=k {
            let term = e[k - i].clone() * p[i - 1].clone();
            if i % 2 == 1 {
                acc = acc + term;
            } else {
                acc = acc - term;
            }
        }
        e.push(acc / T::from_i64(k as i64));
    }
    e.into_iter()
        .enumerate()
        .map(|(k, v)| if k % 2 == 1 { -v } else { v })
        .collect()
}

/// Characteristic polynomial of `X` as a Jordan algebra element (degree `n`).
pub fn char_poly<T: Scalar>(x: &HermitianMatrix<T>) -> Vec<T> {
    newton_char_poly(&power_traces(x, x.n()))
}

/// Scales a rational hermitian matrix by the lcm of its denominators.
fn integerize(x: &HermitianMatrix<Rational>) -> (HermitianMatrix<Rational>, BigInt) {
    let mut l = BigInt::one();
    for i in 0..x.n() {
        for j in 0..x.n() {
            for c in x.get(i, j).coeffs() {
                l = l.lcm(c.denom());
            }
        }
    }
    let s = Rational::from_integer(l.clone());
    (x.scale(&s), l)
}

/// Exact characteristic polynomial of a rational matrix via integral doubled powers.
pub fn char_poly_exact(x: &HermitianMatrix<Rational>) -> Vec<Rational> {
    let (m, l) = integerize(x);
    let n = x.n();
    let mut p = Vec::with_capacity(n);
    let mut pk = m.clone();
    let mut two_pow = Rational::one();
    for k in 0..n {
        if k > 0 {
            pk = doubled_product(&m, &pk);
            two_pow *= Rational::from_i64(2);
        }
        p.push(pk.trace() / two_pow.clone());
    }
    let cm = newton_char_poly(&p);
    // roots of cm are L·λ; rescale to the polynomial of X
    let lr = Rational::from_integer(l);
    let mut scale = Rational::one();
    cm.into_iter()
        .map(|c| {
            let v = c / scale.clone();
            scale = scale.clone() * lr.clone();
            v
        })
        .collect()
}

/// Coefficients (descending) of `q(s) = p(s − a)`.
pub fn taylor_shift(p: &[Rational], a: &Rational) -> Vec<Rational> {
    // Horner in ascending form on (s - a)
    let mut q: Vec<Rational> = vec![Rational::zero()];
    for c in p {
        // q <- q·(s − a) + c
        let mut next = vec![Rational::zero(); q.len() + 1];
        for (i, qi) in q.iter().enumerate() {
            next[i] = next[i].clone() + qi.clone();
            next[i + 1] = next[i + 1].clone() - qi.clone() * a.clone();
        }
        let last = next.len() - 1;
        next[last] = next[last].clone() + c.clone();
        q = next;
    }
    q.remove(0);
    q
}

/// For a real-rooted monic polynomial (descending coefficients), all roots are `>= 0`
/// iff the coefficients alternate in sign (Descartes).
pub fn roots_nonnegative(p: &[Rational]) -> bool {
    p.iter().enumerate().all(|(k, c)| {
        if k % 2 == 0 {
            !c.is_negative()
        } else {
            !c.is_positive()
        }
    })
}

/// Exact membership of `X` in the cone with slack `eps` on the eigenvalues.
pub fn cone_member_eps<T: Scalar>(x: &HermitianMatrix<T>, eps: f64) -> bool {
    let xr = x.to_rational();
    let (m, l) = integerize(&xr);
    let cm = char_poly_exact(&m);
    if eps == 0.0 {
        return roots_nonnegative(&cm);
    }
    let shift = Rational::from_f64(eps) * Rational::from_integer(l);
    roots_nonnegative(&taylor_shift(&cm, &shift))
}

/// `true` iff all Jordan eigenvalues are `>= −ε` (ε = 1e−9 for floats, 0 for exact backends).
pub fn cone_member<T: Scalar>(x: &HermitianMatrix<T>) -> bool {
    cone_member_eps(x, if T::EXACT { 0.0 } else { DEFAULT_EPS })
}

/// Real symmetric matrix of size `n·d` whose spectrum is that of `X` with multiplicity `d`.
pub fn real_embedding(x: &HermitianMatrix<f64>) -> Result<DMatrix<f64>, Error> {
    let alg = x.algebra();
    if !alg.is_associative() {
        return Err(Error::Unsupported("octonion matrices have no associative embedding".into()));
    }
    let d = alg.dim();
    let n = x.n();
    let mut m = DMatrix::zeros(n * d, n * d);
    for l in 0..n {
        for k in 0..n {
            let q = x.get(l, k);
            for r in 0..d {
                for s in 0..d {
                    let i = r ^ s;
                    m[(l * d + r, k * d + s)] = q.coeff(i) * mult_sign(i, s) as f64;
                }
            }
        }
    }
    Ok(m)
}

/// Jordan eigenvalues in ascending order.
pub fn eigenvalues(x: &HermitianMatrix<f64>) -> Vec<f64> {
    let alg = x.algebra();
    if alg.is_associative() {
        let m = real_embedding(x).expect("associative");
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let d = alg.dim();
        // each eigenvalue appears d times
        (0..x.n()).map(|i| ev[i * d..(i + 1) * d].iter().sum::<f64>() / d as f64).collect()
    } else {
        let cp = char_poly(x);
        real_roots(&cp)
    }
}

pub fn min_eigenvalue(x: &HermitianMatrix<f64>) -> f64 {
    eigenvalues(x)[0]
}

fn poly_eval(p: &[f64], t: f64) -> (f64, f64) {
    let mut v = 0.0;
    let mut dv = 0.0;
    for c in p {
        dv = dv * t + v;
        v = v * t + c;
    }
    (v, dv)
}

/// Roots of a real-rooted monic polynomial, found left to right by Newton
/// iteration from below followed by deflation.
pub fn real_roots(p: &[f64]) -> Vec<f64> {
    let mut p = p.to_vec();
    let mut roots = Vec::new();
    while p.len() > 1 {
        let bound = 1.0 + p[1..].iter().fold(0.0f64, |a, c| a.max(c.abs()));
        let mut t = -bound;
        for _ in 0..500 {
            let (v, dv) = poly_eval(&p, t);
            if dv == 0.0 {
                break;
            }
            let step = v / dv;
            let next = t - step;
            if !(next > t) || (next - t).abs() <= 1e-15 * (1.0 + t.abs()) {
                t = next.max(t);
                break;
            }
            t = next;
        }
        roots.push(t);
        // deflate by (s − t)
        let mut q = Vec::with_capacity(p.len() - 1);
        let mut acc = 0.0;
        for c in &p[..p.len() - 1] {
            acc = acc * t + c;
            q.push(acc);
        }
        p = q;
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// The three orthogonality cases for `u, v ∈ 𝕆³` with real first components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairCase {
    /// `u_2 = u_3 = v_1 = 0`.
    Case1,
    /// `u_3 ≠ 0, u_2 = 0, v_3 = −u_1 v_1 ū_3⁻¹`.
    Case2,
    /// `u_2 ≠ 0, v_2 = −u_1 v_1 ū_2⁻¹ − (ū_2⁻¹ ū_3) v_3`.
    Case3,
    /// `⟨uu*, vv*⟩ ≠ 0`.
    NotOrthogonal,
}

pub fn orthogonal_pair_classify<T: Scalar>(u: &ConeVector<T>, v: &ConeVector<T>) -> Result<PairCase, Error> {
    if u.algebra() != Algebra::O || v.algebra() != Algebra::O || u.len() != 3 || v.len() != 3 {
        return Err(Error::Precondition("classification needs u, v in O^3".into()));
    }
    if u.is_zero() || v.is_zero() {
        return Err(Error::Domain("zero vector".into()));
    }
    let tol = DEFAULT_EPS;
    let uu = rank_one(u)?;
    let vv = rank_one(v)?;
    let ip = trace_inner(&uu, &vv)?;
    let scale = u.norm_sqr().to_f64() * v.norm_sqr().to_f64();
    if !(ip.to_f64().abs() <= tol * scale.max(1.0) && (!T::EXACT || ip.is_zero())) {
        return Ok(PairCase::NotOrthogonal);
    }
    let u2_zero = u.get(1).is_negligible(tol);
    let u3_zero = u.get(2).is_negligible(tol);
    Ok(match (u2_zero, u3_zero) {
        (true, true) => PairCase::Case1,
        (true, false) => PairCase::Case2,
        _ => PairCase::Case3,
    })
}
