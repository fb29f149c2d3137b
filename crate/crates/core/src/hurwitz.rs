//! The Euclidean Hurwitz algebras ℝ, ℂ, ℍ, 𝕆.
//!
//! Elements are stored in the standard basis `f_1 = 1, f_2, ..., f_d`
//! (index `k` here is `f_{k+1}`). The product comes from Cayley–Dickson
//! doubling `(a,b)(c,d) = (ac − d̄b, da + bc̄)`, which gives
//! `f_i f_j = ±f_{i xor j}` and in particular `f_2 f_3 = f_4`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::scalar::Scalar;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algebra {
    R,
    C,
    H,
    O,
}

impl Algebra {
    pub const ALL: [Algebra; 4] = [Algebra::R, Algebra::C, Algebra::H, Algebra::O];

    pub fn dim(self) -> usize {
        match self {
            Algebra::R => 1,
            Algebra::C => 2,
            Algebra::H => 4,
            Algebra::O => 8,
        }
    }

    pub fn is_associative(self) -> bool {
        self != Algebra::O
    }

    pub fn is_commutative(self) -> bool {
        matches!(self, Algebra::R | Algebra::C)
    }

    pub fn tag(self) -> &'static str {
        match self {
            Algebra::R => "R",
            Algebra::C => "C",
            Algebra::H => "H",
            Algebra::O => "O",
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algebra {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "R" | "r" | "real" => Ok(Algebra::R),
            "C" | "c" | "complex" => Ok(Algebra::C),
            "H" | "h" | "quaternion" => Ok(Algebra::H),
            "O" | "o" | "octonion" => Ok(Algebra::O),
            other => Err(Error::Parse(format!("unknown algebra tag {other:?}"))),
        }
    }
}

impl Serialize for Algebra {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for Algebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sign of `f_i f_j`; the product is `sign * f_{i^j}`.
pub fn mult_sign(i: usize, j: usize) -> i8 {
    static TABLE: OnceLock<[[i8; 8]; 8]> = OnceLock::new();
    TABLE.get_or_init(build_table)[i][j]
}

fn cd_mul(x: &[i64], y: &[i64]) -> Vec<i64> {
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let conj = |v: &[i64]| -> Vec<i64> {
        v.iter().enumerate().map(|(k, &e)| if k == 0 { e } else { -e }).collect()
    };
    let ac = cd_mul(a, c);
    let db = cd_mul(&conj(d), b);
    let da = cd_mul(d, a);
    let bc = cd_mul(b, &conj(c));
    let mut out: Vec<i64> = ac.iter().zip(&db).map(|(p, q)| p - q).collect();
    out.extend(da.iter().zip(&bc).map(|(p, q)| p + q));
    out
}

fn build_table() -> [[i8; 8]; 8] {
    let mut t = [[0i8; 8]; 8];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let mut x = vec![0i64; 8];
            let mut y = vec![0i64; 8];
            x[i] = 1;
            y[j] = 1;
            let p = cd_mul(&x, &y);
            let k = i ^ j;
            debug_assert_eq!(p.iter().filter(|&&v| v != 0).count(), 1);
            *entry = p[k] as i8;
        }
    }
    t
}

/// An element of one of the four Hurwitz algebras.
#[derive(Clone, PartialEq)]
pub struct Hurwitz<T> {
    alg: Algebra,
    c: [T; 8],
}

impl<T: Scalar> Hurwitz<T> {
    pub fn zero(alg: Algebra) -> Self {
        Hurwitz { alg, c: std::array::from_fn(|_| T::zero()) }
    }

    pub fn one(alg: Algebra) -> Self {
        Self::real(alg, T::one())
    }

    pub fn real(alg: Algebra, v: T) -> Self {
        let mut x = Self::zero(alg);
        x.c[0] = v;
        x
    }

    /// The basis element `f_{k+1}`.
    pub fn unit(alg: Algebra, k: usize) -> Self {
        assert!(k < alg.dim(), "basis index {k} out of range for {alg}");
        let mut x = Self::zero(alg);
        x.c[k] = T::one();
        x
    }

    pub fn new(alg: Algebra, coeffs: &[T]) -> Result<Self, Error> {
        if coeffs.len() != alg.dim() {
            return Err(Error::Shape(format!(
                "{alg} needs {} coordinates, got {}",
                alg.dim(),
                coeffs.len()
            )));
        }
        let mut x = Self::zero(alg);
        x.c[..coeffs.len()].clone_from_slice(coeffs);
        Ok(x)
    }

    pub fn from_fn(alg: Algebra, f: impl FnMut(usize) -> T) -> Self {
        let mut f = f;
        let d = alg.dim();
        Hurwitz { alg, c: std::array::from_fn(|k| if k < d { f(k) } else { T::zero() }) }
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c[..self.alg.dim()]
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.c[k]
    }

    pub fn set_coeff(&mut self, k: usize, v: T) {
        assert!(k < self.alg.dim());
        self.c[k] = v;
    }

    pub fn re(&self) -> T {
        self.c[0].clone()
    }

    pub fn conj(&self) -> Self {
        let mut x = self.clone();
        for v in x.c[1..self.alg.dim()].iter_mut() {
            *v = -v.clone();
        }
        x
    }

    /// `|x|²`, the sum of squared coordinates.
    pub fn norm_sqr(&self) -> T {
        self.coeffs().iter().fold(T::zero(), |acc, v| acc + v.clone() * v.clone())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().to_f64().sqrt()
    }

    /// `⟨x, y⟩ = Re(x ȳ)`, the Euclidean product of coordinates.
    pub fn inner(&self, other: &Self) -> T {
        self.coeffs()
            .iter()
            .zip(other.coeffs())
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.conj().scale(&(T::one() / n)))
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut x = self.clone();
        for v in x.c[..self.alg.dim()].iter_mut() {
            *v = v.clone() * s.clone();
        }
        x
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, Error> {
        if self.alg != other.alg {
            return Err(Error::AlgebraMismatch(self.alg, other.alg));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.alg.dim();
        let mut out = Self::zero(self.alg);
        for i in 0..d {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if other.c[j].is_zero() {
                    continue;
                }
                let p = self.c[i].clone() * other.c[j].clone();
                let k = i ^ j;
                if mult_sign(i, j) > 0 {
                    out.c[k] = out.c[k].clone() + p;
                } else {
                    out.c[k] = out.c[k].clone() - p;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|v| v.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs()[1..].iter().all(|v| v.is_zero())
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.coeffs().iter().all(|v| v.is_negligible(tol))
    }

    /// `xy − yx`.
    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    /// `(xy)z − x(yz)`.
    pub fn associator(&self, y: &Self, z: &Self) -> Self {
        &(self * y) * z - self * &(y * z)
    }

    /// Re-tags into a larger algebra (ℝ ⊂ ℂ ⊂ ℍ ⊂ 𝕆 along the first coordinates).
    pub fn embed(&self, alg: Algebra) -> Result<Self, Error> {
        if alg.dim() < self.alg.dim() {
            return Err(Error::AlgebraMismatch(self.alg, alg));
        }
        Ok(Hurwitz { alg, c: self.c.clone() })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Hurwitz<U> {
        Hurwitz::from_fn(self.alg, |k| f(&self.c[k]))
    }

    pub fn to_f64(&self) -> Hurwitz<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "algebra": self.alg.tag(),
            "coeffs": self.coeffs().iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let alg: Algebra = v
            .get("algebra")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("scalar without algebra tag".into()))?
            .parse()?;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("scalar without coeffs".into()))?;
        let vals = coeffs
            .iter()
            .map(|c| T::from_json(c).ok_or_else(|| Error::Parse(format!("bad coefficient {c}"))))
            .collect::<Result<Vec<T>, _>>()?;
        Hurwitz::new(alg, &vals)
    }
}

impl<T: fmt::Debug> fmt::Debug for Hurwitz<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.alg, &self.c[..self.alg.dim()])
    }
}

impl<T: Scalar> fmt::Display for Hurwitz<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in self.coeffs().iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", v.to_json())?;
            } else {
                write!(f, "{}·f{}", v.to_json(), k + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<T: Scalar> Serialize for Hurwitz<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Hurwitz<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Hurwitz::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl<'a, T: Scalar> Add<&'a Hurwitz<T>> for &'a Hurwitz<T> {
    type Output = Hurwitz<T>;
    fn add(self, o: &'a Hurwitz<T>) -> Hurwitz<T> {
        assert_eq!(self.alg, o.alg, "algebra mismatch");
        let mut x = self.clone();
        for k in 0..self.alg.dim() {
            x.c[k] = x.c[k].clone() + o.c[k].clone();
        }
        x
    }
}

impl<'a, T: Scalar> Sub<&'a Hurwitz<T>> for &'a Hurwitz<T> {
    type Output = Hurwitz<T>;
    fn sub(self, o: &'a Hurwitz<T>) -> Hurwitz<T> {
        assert_eq!(self.alg, o.alg, "algebra mismatch");
        let mut x = self.clone();
        for k in 0..self.alg.dim() {
            x.c[k] = x.c[k].clone() - o.c[k].clone();
        }
        x
    }
}

impl<'a, T: Scalar> Mul<&'a Hurwitz<T>> for &'a Hurwitz<T> {
    type Output = Hurwitz<T>;
    fn mul(self, o: &'a Hurwitz<T>) -> Hurwitz<T> {
        assert_eq!(self.alg, o.alg, "algebra mismatch");
        self.mul_unchecked(o)
    }
}

impl<T: Scalar> Add for Hurwitz<T> {
    type Output = Hurwitz<T>;
    fn add(self, o: Hurwitz<T>) -> Hurwitz<T> {
        &self + &o
    }
}

impl<T: Scalar> Sub for Hurwitz<T> {
    type Output = Hurwitz<T>;
    fn sub(self, o: Hurwitz<T>) -> Hurwitz<T> {
        &self - &o
    }
}

impl<T: Scalar> Mul for Hurwitz<T> {
    type Output = Hurwitz<T>;
    fn mul(self, o: Hurwitz<T>) -> Hurwitz<T> {
        &self * &o
    }
}

impl<T: Scalar> Neg for Hurwitz<T> {
    type Output = Hurwitz<T>;
    fn neg(self) -> Hurwitz<T> {
        let mut x = self;
        for k in 0..x.alg.dim() {
            x.c[k] = -x.c[k].clone();
        }
        x
    }
}

impl<T: Scalar> Neg for &Hurwitz<T> {
    type Output = Hurwitz<T>;
    fn neg(self) -> Hurwitz<T> {
        -(self.clone())
    }
}

impl<T: Scalar> AddAssign<&Hurwitz<T>> for Hurwitz<T> {
    fn add_assign(&mut self, o: &Hurwitz<T>) {
        assert_eq!(self.alg, o.alg, "algebra mismatch");
        for k in 0..self.alg.dim() {
            self.c[k] = self.c[k].clone() + o.c[k].clone();
        }
    }
}

impl<T: Scalar> SubAssign<&Hurwitz<T>> for Hurwitz<T> {
    fn sub_assign(&mut self, o: &Hurwitz<T>) {
        assert_eq!(self.alg, o.alg, "algebra mismatch");
        for k in 0..self.alg.dim() {
            self.c[k] = self.c[k].clone() - o.c[k].clone();
        }
    }
}

/// A derivation of 𝕆 given as a sum of generators `D_{a,b}`, with
/// `D_{a,b}(x) = [[a,b],x] + 3((ax)b − a(xb))`.
#[derive(Clone, Debug, PartialEq)]
pub struct OctonionDerivation<T> {
    pub generators: Vec<(Hurwitz<T>, Hurwitz<T>)>,
}

impl<T: Scalar> OctonionDerivation<T> {
    pub fn new(generators: Vec<(Hurwitz<T>, Hurwitz<T>)>) -> Result<Self, Error> {
        for (a, b) in &generators {
            for x in [a, b] {
                if x.algebra() != Algebra::O {
                    return Err(Error::AlgebraMismatch(x.algebra(), Algebra::O));
                }
            }
        }
        Ok(OctonionDerivation { generators })
    }

    pub fn generator(a: Hurwitz<T>, b: Hurwitz<T>) -> Result<Self, Error> {
        Self::new(vec![(a, b)])
    }

    pub fn zero() -> Self {
        OctonionDerivation { generators: Vec::new() }
    }

    pub fn apply(&self, x: &Hurwitz<T>) -> Result<Hurwitz<T>, Error> {
        if x.algebra() != Algebra::O {
            return Err(Error::AlgebraMismatch(x.algebra(), Algebra::O));
        }
        let three = T::from_i64(3);
        let mut out = Hurwitz::zero(Algebra::O);
        for (a, b) in &self.generators {
            let ab = a.commutator(b);
            out += &ab.commutator(x);
            out += &a.associator(x, b).scale(&three);
        }
        Ok(out)
    }

    /// The 8×8 real matrix of the derivation, column `k` is `D(f_{k+1})`.
    pub fn matrix(&self) -> Vec<Vec<T>> {
        let mut m = vec![vec![T::zero(); 8]; 8];
        for k in 0..8 {
            let col = self.apply(&Hurwitz::unit(Algebra::O, k)).expect("octonion input");
            for (r, row) in m.iter_mut().enumerate() {
                row[k] = col.coeff(r).clone();
            }
        }
        m
    }
}

/// Applies a derivation given by its 8×8 matrix.
pub fn apply_derivation_matrix<T: Scalar>(m: &[Vec<T>], x: &Hurwitz<T>) -> Hurwitz<T> {
    Hurwitz::from_fn(Algebra::O, |r| {
        (0..8).fold(T::zero(), |acc, k| acc + m[r][k].clone() * x.coeff(k).clone())
    })
}

/// Squared residuals `|lhs − rhs|²` of the standard identities at `(x, y, z)`.
///
/// Every entry is zero in exact arithmetic.
pub fn identity_residuals<T: Scalar>(x: &Hurwitz<T>, y: &Hurwitz<T>, z: &Hurwitz<T>) -> Vec<(&'static str, T)> {
    let alg = x.algebra();
    let r = |v: T| Hurwitz::real(alg, v);
    let d = |a: &Hurwitz<T>, b: &Hurwitz<T>| (a - b).norm_sqr();
    let dr = |a: T, b: T| {
        let e = a - b;
        e.clone() * e
    };
    let (xc, yc) = (x.conj(), y.conj());
    let (nx, ny) = (x.norm_sqr(), y.norm_sqr());
    let mut out = vec![
        ("x conj(x) = |x|^2", d(&(x * &xc), &r(nx.clone()))),
        ("conj(x) x = |x|^2", d(&(&xc * x), &r(nx.clone()))),
        ("conj(xy) = conj(y) conj(x)", d(&(x * y).conj(), &(&yc * &xc))),
        ("<conj x, conj y> = <x, y>", dr(xc.inner(&yc), x.inner(y))),
        ("<xy, z> = <y, conj(x) z>", dr((x * y).inner(z), y.inner(&(&xc * z)))),
        ("<xy, z> = <x, z conj(y)>", dr((x * y).inner(z), x.inner(&(z * &yc)))),
        ("x(conj(x) y) = |x|^2 y", d(&(x * &(&xc * y)), &y.scale(&nx))),
        ("(x conj(y)) y = |y|^2 x", d(&(&(x * &yc) * y), &x.scale(&ny))),
        ("Re(xy) = Re(yx)", dr((x * y).re(), (y * x).re())),
        ("Re(x(yz)) = Re((xy)z)", dr((x * &(y * z)).re(), (&(x * y) * z).re())),
        ("Re(conj(x)((xy)z)) = |x|^2 Re(yz)", dr((&xc * &(&(x * y) * z)).re(), nx.clone() * (y * z).re())),
        ("|xy|^2 = |x|^2 |y|^2", dr((x * y).norm_sqr(), nx.clone() * ny)),
        ("z(x(zy)) = ((zxz)y)", d(&(z * &(x * &(z * y))), &(&(&(z * x) * z) * y))),
        ("((xz)y)z = x(z(yz))", d(&(&(&(x * z) * y) * z), &(x * &(z * &(y * z))))),
        ("(zx)(yz) = (z(xy))z", d(&(&(z * x) * &(y * z)), &(&(z * &(x * y)) * z))),
    ];
    if !x.is_zero() {
        let inv = x.inverse().expect("nonzero");
        out.push(("x x^-1 = 1", d(&(x * &inv), &Hurwitz::one(alg))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    fn f(k: usize) -> Hurwitz<Rational> {
        Hurwitz::unit(Algebra::O, k - 1)
    }

    #[test]
    fn table_matches_remark_products() {
        assert_eq!(&f(2) * &f(3), f(4));
        assert_eq!(&f(2) * &f(7), -f(8));
        assert_eq!(&f(3) * &f(7), -f(5));
        assert_eq!(&f(2) * &f(2), Hurwitz::real(Algebra::O, int(-1)));
    }

    #[test]
    fn table_restricts_to_quaternions() {
        let i = Hurwitz::<Rational>::unit(Algebra::H, 1);
        let j = Hurwitz::<Rational>::unit(Algebra::H, 2);
        let k = Hurwitz::<Rational>::unit(Algebra::H, 3);
        assert_eq!(&i * &j, k);
        assert_eq!(&(&i * &j) * &k, Hurwitz::real(Algebra::H, int(-1)));
    }

    #[test]
    fn inverse_of_sample_octonion() {
        let x = &(&f(1) + &f(2)) + &f(5);
        assert_eq!(x.norm_sqr(), int(3));
        assert_eq!(&x * &x.inverse().unwrap(), f(1));
        assert!(Hurwitz::<Rational>::zero(Algebra::O).inverse().is_err());
    }

    #[test]
    fn conj_negates_imaginary_part() {
        assert_eq!(f(2).conj(), -f(2));
        let x = Hurwitz::new(Algebra::C, &[rat(1, 2), rat(3, 4)]).unwrap();
        assert_eq!(x.conj().coeffs(), &[rat(1, 2), rat(-3, 4)]);
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Hurwitz::<f64>::one(Algebra::C);
        let b = Hurwitz::<f64>::one(Algebra::H);
        assert!(matches!(a.try_mul(&b), Err(Error::AlgebraMismatch(_, _))));
    }

    #[test]
    fn associator_of_f2_f3_f5_is_nonzero() {
        assert!(!f(2).associator(&f(3), &f(5)).is_zero());
    }

    #[test]
    fn derivation_basics() {
        let d = OctonionDerivation::generator(f(2), f(3)).unwrap();
        assert!(d.apply(&f(1)).unwrap().is_zero());
        assert!(num_traits::Zero::is_zero(&d.apply(&f(4)).unwrap().re()));
        let dd = OctonionDerivation::generator(f(5), f(5)).unwrap();
        for k in 1..=8 {
            assert!(dd.apply(&f(k)).unwrap().is_zero());
        }
        assert!(d.apply(&Hurwitz::one(Algebra::H)).is_err());
    }

    #[test]
    fn derivation_generator_is_leibniz_on_basis() {
        let d = OctonionDerivation::generator(&f(2) + &f(6), &f(3) - &f(8).scale(&rat(1, 2))).unwrap();
        for i in 1..=8 {
            for j in 1..=8 {
                let lhs = d.apply(&(&f(i) * &f(j))).unwrap();
                let rhs = &d.apply(&f(i)).unwrap() * &f(j) + &f(i) * &d.apply(&f(j)).unwrap();
                assert_eq!(lhs, rhs, "Leibniz fails on f{i}, f{j}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let x = Hurwitz::new(Algebra::C, &[rat(1, 3), int(-2)]).unwrap();
        let v = x.to_json();
        assert_eq!(v["coeffs"][0], "1/3");
        assert_eq!(Hurwitz::<Rational>::from_json(&v).unwrap(), x);
    }
}
