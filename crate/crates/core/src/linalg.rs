//! Dense linear algebra helpers: exact row reduction, rank mod a prime, determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Rational;

/// The Mersenne prime 2⁶¹ − 1.
pub const PRIME: u64 = (1 << 61) - 1;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let m = rows.len();
    if m == 0 {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (src, dst) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d = &*d - &(&f * s);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank_rational(rows: &[Vec<Rational>]) -> usize {
    let mut r = rows.to_vec();
    rref(&mut r).len()
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut r = rows.to_vec();
    let pivots = rref(&mut r);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[i][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `A x = b` exactly; `None` if inconsistent. Free variables are set to 0.
pub fn solve(rows: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = aug[i][ncols].clone();
    }
    Some(x)
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn int_mod(v: &BigInt, p: u64) -> u64 {
    let m = v.mod_floor(&BigInt::from(p));
    m.to_u64().expect("reduced")
}

/// Image of a rational in `ℤ/p`; the denominator must be a unit.
pub fn rational_mod(r: &Rational, p: u64) -> u64 {
    let n = int_mod(r.numer(), p);
    let d = int_mod(r.denom(), p);
    assert!(d != 0, "denominator divisible by p");
    mulmod(n, powmod(d, p - 2, p), p)
}

/// Rank over `ℤ/p` of a dense matrix with entries already reduced.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let m = rows.len();
    if m == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(piv) = (r..m).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = powmod(rows[r][c], p - 2, p);
        for x in rows[r].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (d, s) in row.iter_mut().zip(&pivot_row) {
                if *s != 0 {
                    *d = (*d + p - mulmod(f, *s, p)) % p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Determinant by Laplace expansion along the first row.
pub fn det_cofactor(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    match n {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut acc = 0.0;
            for j in 0..n {
                if m[0][j] == 0.0 {
                    continue;
                }
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| *v).collect())
                    .collect();
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += s * m[0][j] * det_cofactor(&minor);
            }
            acc
        }
    }
}

/// Exact determinant by fraction-free elimination.
pub fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for k in c..n {
                let s = &f * &a[c][k];
                a[i][k] = &a[i][k] - &s;
            }
        }
    }
    det
}

pub fn max_abs_rational(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn rank_and_nullspace() {
        let a = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)], vec![int(0), int(1), int(1)]];
        assert_eq!(rank_rational(&a), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let s: Rational = row.iter().zip(&ns[0]).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn mod_p_rank_matches() {
        let a = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_mod_p(a, PRIME), 2);
        assert_eq!(rational_mod(&Rational::new(1.into(), 2.into()), 7), 4);
    }

    #[test]
    fn determinants_agree() {
        let m = vec![vec![2.0, -1.0, 0.5], vec![1.0, 3.0, 2.0], vec![0.0, 1.0, 4.0]];
        let r: Vec<Vec<Rational>> = m.iter().map(|row| row.iter().map(|v| Rational::from_float(*v).unwrap()).collect()).collect();
        let d = det_rational(&r);
        assert!((crate::scalar::rational_to_f64(&d) - det_cofactor(&m)).abs() < 1e-12);
    }

    #[test]
    fn solve_inconsistent() {
        let a = vec![vec![int(1), int(1)], vec![int(1), int(1)]];
        assert!(solve(&a, &[int(1), int(2)]).is_none());
        assert_eq!(solve(&a, &[int(1), int(1)]).unwrap(), vec![int(1), int(0)]);
    }
}
