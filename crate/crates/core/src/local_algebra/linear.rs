//! Sparse exact linear systems `G·x = t` over `Q(i)` with labeled rows and
//! columns, solved by elimination that tracks row combinations so that an
//! inconsistent system yields a left-null witness.

use num_traits::{One, Zero};

use crate::coeff_series::GaussianRational as Q;

type SparseVec = Vec<(usize, Q)>;

/// A linear system stored by columns.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    columns: Vec<SparseVec>,
    target: SparseVec,
}

/// Outcome of [`LinearSystem::solve`], dense over columns or rows.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    /// Values for every column with `G·x = t`.
    Feasible(Vec<Q>),
    /// Row functional `y` with `yᵀG = 0` and `yᵀt = 1`.
    Infeasible(Vec<Q>),
}

impl LinearSystem {
    /// Column entries must reference rows below `row_labels.len()`; zero
    /// entries are dropped.
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, columns: Vec<SparseVec>, target: SparseVec) -> Self {
        assert_eq!(col_labels.len(), columns.len(), "one label per column");
        let clean = |v: SparseVec| -> SparseVec {
            let mut v: SparseVec = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            v.sort_by_key(|(r, _)| *r);
            assert!(v.iter().all(|(r, _)| *r < row_labels.len()), "row index out of range");
            v
        };
        let columns = columns.into_iter().map(clean).collect();
        let target = clean(target);
        Self { row_labels, col_labels, columns, target }
    }

    pub fn num_rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn num_cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn column(&self, j: usize) -> &[(usize, Q)] {
        &self.columns[j]
    }

    pub fn target(&self) -> &[(usize, Q)] {
        &self.target
    }

    /// Dense row-major copy of the coefficient matrix (for small reports).
    pub fn dense_rows(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.num_cols()]; self.num_rows()];
        for (j, col) in self.columns.iter().enumerate() {
            for (r, c) in col {
                out[*r][j] = c.clone();
            }
        }
        out
    }

    pub fn dense_target(&self) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.num_rows()];
        for (r, c) in &self.target {
            out[*r] = c.clone();
        }
        out
    }

    /// `G·x − t`, dense over rows.
    pub fn residual(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.num_cols());
        let mut out = vec![Q::zero(); self.num_rows()];
        for (j, col) in self.columns.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (r, c) in col {
                out[*r] += &(c * &x[j]);
            }
        }
        for (r, c) in &self.target {
            out[*r] -= c;
        }
        out
    }

    /// `true` iff `G·x = t` exactly.
    pub fn check_solution(&self, x: &[Q]) -> bool {
        x.len() == self.num_cols() && self.residual(x).iter().all(Q::is_zero)
    }

    /// `true` iff `yᵀG = 0` and `yᵀt ≠ 0` exactly.
    pub fn check_witness(&self, y: &[Q]) -> bool {
        if y.len() != self.num_rows() {
            return false;
        }
        let pair = |v: &SparseVec| v.iter().fold(Q::zero(), |acc, (r, c)| &acc + &(c * &y[*r]));
        self.columns.iter().all(|col| pair(col).is_zero()) && !pair(&self.target).is_zero()
    }

    /// Forward elimination column by column, choosing the sparsest
    /// candidate pivot row, then back substitution with free variables
    /// set to zero.
    pub fn solve(&self) -> Solution {
        let nrows = self.num_rows();
        let ncols = self.num_cols();
        let mut rows: Vec<SparseVec> = vec![Vec::new(); nrows];
        for (j, col) in self.columns.iter().enumerate() {
            for (r, c) in col {
                rows[*r].push((j, c.clone()));
            }
        }
        let mut rhs = vec![Q::zero(); nrows];
        for (r, c) in &self.target {
            rhs[*r] = c.clone();
        }
        let mut combo: Vec<SparseVec> = (0..nrows).map(|r| vec![(r, Q::one())]).collect();
        let mut pivoted = vec![false; nrows];
        let mut pivots: Vec<(usize, usize)> = Vec::new();

        for col in 0..ncols {
            // Unpivoted rows are zero in every earlier column, so a nonzero
            // entry in `col` must be their first entry.
            let cands: Vec<usize> =
                (0..nrows).filter(|&r| !pivoted[r] && rows[r].first().is_some_and(|(c, _)| *c == col)).collect();
            let Some(&p) = cands.iter().min_by_key(|&&r| rows[r].len()) else {
                continue;
            };
            pivoted[p] = true;
            pivots.push((col, p));
            let inv = rows[p][0].1.inv().expect("pivot is nonzero");
            let prow = rows[p].clone();
            let pcombo = combo[p].clone();
            let prhs = rhs[p].clone();
            for &r in cands.iter().filter(|&&r| r != p) {
                let factor = &rows[r][0].1 * &inv;
                rows[r] = axpy(&rows[r], &factor, &prow);
                combo[r] = axpy(&combo[r], &factor, &pcombo);
                rhs[r] = &rhs[r] - &(&factor * &prhs);
            }
        }

        let bad = (0..nrows).filter(|&r| !pivoted[r] && !rhs[r].is_zero()).min_by_key(|&r| combo[r].len());
        if let Some(r) = bad {
            let scale = rhs[r].inv().expect("nonzero");
            let mut y = vec![Q::zero(); nrows];
            for (i, c) in &combo[r] {
                y[*i] = c * &scale;
            }
            return Solution::Infeasible(y);
        }

        let mut x = vec![Q::zero(); ncols];
        for &(col, p) in pivots.iter().rev() {
            let mut val = rhs[p].clone();
            for (c, v) in rows[p].iter().skip(1) {
                if !x[*c].is_zero() {
                    val -= &(v * &x[*c]);
                }
            }
            x[col] = &val / &rows[p][0].1;
        }
        Solution::Feasible(x)
    }
}

/// Determinant of a square matrix by exact elimination.
pub(crate) fn determinant(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det = &det * &m[col][col];
        let inv = m[col][col].inv().expect("nonzero pivot");
        for r in col + 1..n {
            let factor = &m[r][col] * &inv;
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let v = &m[r][c] - &(&factor * &m[col][c]);
                m[r][c] = v;
            }
        }
    }
    det
}

/// `a − factor·b` for sorted sparse vectors.
fn axpy(a: &SparseVec, factor: &Q, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(factor * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(factor * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
