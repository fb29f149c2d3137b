//! Linear feasibility `{h : A h <= b}` with Farkas certificates.
//!
//! Solved through the bounded auxiliary problem
//! `min bᵀy + w  s.t.  Aᵀy = 0, 1ᵀy + w = 1, y, w >= 0`.
//! A negative optimum yields a Farkas witness `y`; otherwise the simplex
//! multipliers of the `Aᵀy = 0` rows are a feasible `h`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::solve;
use crate::scalar::{Rational, Scalar};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpMode {
    /// Exact rational tableau.
    Exact,
    /// Float tableau; the final basis is re-solved and checked exactly.
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Feasible { h: Vec<Rational> },
    Infeasible { y: Vec<Rational> },
}

/// `A h <= b` as dense rows.
#[derive(Clone, Debug, Default)]
pub struct Inequalities {
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl Inequalities {
    pub fn push(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn vars(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

/// Exact check of `A h <= b`.
pub fn verify_feasible(sys: &Inequalities, h: &[Rational]) -> bool {
    sys.rows.iter().zip(&sys.rhs).all(|(row, b)| {
        let lhs: Rational = row.iter().zip(h).map(|(a, x)| a * x).sum();
        lhs <= *b
    })
}

/// Exact check of `y >= 0, Aᵀy = 0, bᵀy < 0`.
pub fn verify_farkas(sys: &Inequalities, y: &[Rational]) -> bool {
    if y.len() != sys.len() || y.iter().any(|v| v.is_negative()) {
        return false;
    }
    let k = sys.vars();
    let combo_zero = (0..k).all(|j| sys.rows.iter().zip(y).map(|(r, yi)| &r[j] * yi).sum::<Rational>().is_zero());
    let by: Rational = sys.rhs.iter().zip(y).map(|(b, yi)| b * yi).sum();
    combo_zero && by.is_negative()
}

struct Tableau<T> {
    // rows 0..k: Aᵀy = 0, row k: 1ᵀy + w = 1
    t: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    cost: Vec<T>,
    real_cols: usize,
}

fn is_pos<T: Scalar>(x: &T, tol: f64) -> bool {
    if T::EXACT {
        *x > T::zero()
    } else {
        x.to_f64() > tol
    }
}

fn is_nonzero<T: Scalar>(x: &T, tol: f64) -> bool {
    !x.is_negligible(tol)
}

impl<T: Scalar> Tableau<T> {
    fn new(sys: &Inequalities) -> Self {
        let m = sys.len();
        let k = sys.vars();
        let real_cols = m + 1;
        let cols = real_cols + k;
        let mut t = vec![vec![T::zero(); cols]; k + 1];
        for (i, row) in sys.rows.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                t[j][i] = T::from_rational(a);
            }
            t[k][i] = T::one();
        }
        t[k][m] = T::one();
        for j in 0..k {
            t[j][real_cols + j] = T::one();
        }
        let mut rhs = vec![T::zero(); k + 1];
        rhs[k] = T::one();
        let mut basis: Vec<usize> = (0..k).map(|j| real_cols + j).collect();
        basis.push(m);
        let mut cost: Vec<T> = sys.rhs.iter().map(T::from_rational).collect();
        cost.push(T::one());
        cost.extend((0..k).map(|_| T::zero()));
        Tableau { t, rhs, basis, cost, real_cols }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        self.rhs[r] = self.rhs[r].clone() / p;
        let prow = self.t[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.t.len() {
            if i == r || self.t[i][c].is_zero() {
                continue;
            }
            let f = self.t[i][c].clone();
            for (v, pv) in self.t[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            self.rhs[i] = self.rhs[i].clone() - f * prhs.clone();
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, j: usize) -> T {
        let mut z = self.cost[j].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if !self.cost[b].is_zero() && !self.t[r][j].is_zero() {
                z = z - self.cost[b].clone() * self.t[r][j].clone();
            }
        }
        z
    }

    fn run(&mut self, tol: f64, max_pivots: usize) -> Result<(), Error> {
        // degenerate pivots to push artificial columns out of the basis
        for r in 0..self.basis.len() {
            if self.basis[r] >= self.real_cols {
                if let Some(c) = (0..self.real_cols).find(|&c| !self.basis.contains(&c) && is_nonzero(&self.t[r][c], tol)) {
                    self.pivot(r, c);
                }
            }
        }
        for _ in 0..max_pivots {
            // Bland: lowest-index improving column
            let entering = (0..self.real_cols).find(|&j| !self.basis.contains(&j) && is_pos(&-self.reduced_cost(j), tol));
            let Some(c) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, T)> = None;
            for r in 0..self.t.len() {
                if !is_pos(&self.t[r][c], tol) {
                    continue;
                }
                let ratio = self.rhs[r].clone() / self.t[r][c].clone();
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bv)) => {
                        if ratio < bv || (ratio == bv && self.basis[r] < self.basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bv))
                        }
                    }
                };
            }
            let Some((r, _)) = best else {
                return Err(Error::Numerical("auxiliary problem unbounded".into()));
            };
            self.pivot(r, c);
        }
        Err(Error::Numerical("pivot limit reached".into()))
    }
}

/// Column `j` of the auxiliary constraint matrix.
fn aux_column(sys: &Inequalities, j: usize) -> Vec<Rational> {
    let m = sys.len();
    let k = sys.vars();
    let mut col = vec![Rational::zero(); k + 1];
    if j < m {
        col[..k].clone_from_slice(&sys.rows[j]);
        col[k] = Rational::from_i64(1);
    } else if j == m {
        col[k] = Rational::from_i64(1);
    } else {
        col[j - m - 1] = Rational::from_i64(1);
    }
    col
}

fn aux_cost(sys: &Inequalities, j: usize) -> Rational {
    let m = sys.len();
    if j < m {
        sys.rhs[j].clone()
    } else if j == m {
        Rational::from_i64(1)
    } else {
        Rational::zero()
    }
}

/// Re-solves the auxiliary problem exactly for a given basis and checks optimality.
fn outcome_from_basis(sys: &Inequalities, basis: &[usize]) -> Option<LpOutcome> {
    let m = sys.len();
    let k = sys.vars();
    let cols: Vec<Vec<Rational>> = basis.iter().map(|&j| aux_column(sys, j)).collect();
    let bmat: Vec<Vec<Rational>> = (0..=k).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let mut r = vec![Rational::zero(); k + 1];
    r[k] = Rational::from_i64(1);
    let z = solve(&bmat, &r)?;
    if z.iter().any(|v| v.is_negative()) {
        return None;
    }
    let bt: Vec<Vec<Rational>> = cols.clone();
    let cb: Vec<Rational> = basis.iter().map(|&j| aux_cost(sys, j)).collect();
    let pi = solve(&bt, &cb)?;
    // optimality: reduced costs of real columns are nonnegative
    for j in 0..=m {
        let col = aux_column(sys, j);
        let rc: Rational = aux_cost(sys, j) - col.iter().zip(&pi).map(|(a, p)| a * p).sum::<Rational>();
        if rc.is_negative() {
            return None;
        }
    }
    let opt = pi[k].clone();
    if opt.is_negative() {
        let mut y = vec![Rational::zero(); m];
        for (pos, &j) in basis.iter().enumerate() {
            if j < m {
                y[j] = z[pos].clone();
            }
        }
        Some(LpOutcome::Infeasible { y })
    } else {
        Some(LpOutcome::Feasible { h: pi[..k].to_vec() })
    }
}

/// Decides feasibility of `A h <= b`; the outcome is always verified exactly.
pub fn solve_feasibility(sys: &Inequalities, mode: LpMode) -> Result<LpOutcome, Error> {
    if sys.is_empty() {
        return Ok(LpOutcome::Feasible { h: vec![] });
    }
    let max_pivots = 50 * (sys.len() + sys.vars() + 10);
    let basis = match mode {
        LpMode::Float => {
            let mut t = Tableau::<f64>::new(sys);
            t.run(1e-11, max_pivots).ok().map(|_| t.basis)
        }
        LpMode::Exact => None,
    };
    let outcome = match basis.and_then(|b| outcome_from_basis(sys, &b)) {
        Some(o) => o,
        None => {
            let mut t = Tableau::<Rational>::new(sys);
            t.run(0.0, max_pivots)?;
            outcome_from_basis(sys, &t.basis).ok_or_else(|| Error::Numerical("exact basis failed verification".into()))?
        }
    };
    let ok = match &outcome {
        LpOutcome::Feasible { h } => verify_feasible(sys, h),
        LpOutcome::Infeasible { y } => verify_farkas(sys, y),
    };
    if !ok {
        return Err(Error::Numerical("LP outcome failed exact replay".into()));
    }
    Ok(outcome)
}
