use num_traits::{One, Zero};

use super::matrix::RMatrix;
use super::rational::Rational;

/// Reduced row echelon form of a matrix together with the row transform that produced it.
#[derive(Debug, Clone)]
pub struct Rref {
    /// The reduced matrix `R`.
    pub reduced: RMatrix,
    /// Pivot column of each nonzero row of `R`, in row order.
    pub pivots: Vec<usize>,
    /// Invertible `T` with `T · M = R`.
    pub transform: RMatrix,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss–Jordan elimination: leftmost nonzero column, first nonzero row, exact pivots.
pub fn rref(m: &RMatrix) -> Rref {
    let mut r = m.clone();
    let mut t = RMatrix::identity(m.rows());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols() {
        if row == m.rows() {
            break;
        }
        let Some(p) = (row..m.rows()).find(|&i| !r[(i, col)].is_zero()) else {
            continue;
        };
        r.swap_rows(row, p);
        t.swap_rows(row, p);
        let inv = r[(row, col)].recip();
        for j in 0..r.cols() {
            r[(row, j)] *= &inv;
        }
        for j in 0..t.cols() {
            t[(row, j)] *= &inv;
        }
        for i in 0..m.rows() {
            if i == row || r[(i, col)].is_zero() {
                continue;
            }
            let factor = r[(i, col)].clone();
            for j in 0..r.cols() {
                let delta = &factor * &r[(row, j)];
                r[(i, j)] -= delta;
            }
            for j in 0..t.cols() {
                let delta = &factor * &t[(row, j)];
                t[(i, j)] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref {
        reduced: r,
        pivots,
        transform: t,
    }
}

/// Rank plus deterministic kernel and row-space bases of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bases {
    pub rank: usize,
    /// Spans `{v : Mv = 0}`; one vector per free column, with a 1 in that column.
    pub kernel_basis: Vec<Vec<Rational>>,
    /// The nonzero rows of the reduced echelon form.
    pub rowspace_basis: Vec<Vec<Rational>>,
}

pub fn canonical_bases(m: &RMatrix) -> Bases {
    let rr = rref(m);
    let n = m.cols();
    let rowspace_basis: Vec<Vec<Rational>> = (0..rr.rank()).map(|i| rr.reduced.row(i).to_vec()).collect();
    let mut kernel_basis = Vec::new();
    for free in (0..n).filter(|c| !rr.pivots.contains(c)) {
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (i, &p) in rr.pivots.iter().enumerate() {
            v[p] = -rr.reduced[(i, free)].clone();
        }
        kernel_basis.push(v);
    }
    Bases {
        rank: rr.rank(),
        kernel_basis,
        rowspace_basis,
    }
}

/// Outcome of solving `Mx = b` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolve {
    /// A particular solution (free variables set to zero).
    Solution(Vec<Rational>),
    /// `y` with `yᵀM = 0` and `yᵀb = 1`, proving there is no solution.
    Inconsistent(Vec<Rational>),
}

pub fn solve_linear(m: &RMatrix, b: &[Rational]) -> LinearSolve {
    assert_eq!(m.rows(), b.len(), "right-hand side length");
    let rr = rref(m);
    let tb = rr.transform.mul_vec(b);
    // Rows below the rank are zero in R; a nonzero transformed rhs there is a contradiction.
    if let Some(i) = (rr.rank()..m.rows()).find(|&i| !tb[i].is_zero()) {
        let inv = tb[i].recip();
        let y = rr.transform.row(i).iter().map(|t| t * &inv).collect();
        return LinearSolve::Inconsistent(y);
    }
    let mut x = vec![Rational::zero(); m.cols()];
    for (i, &p) in rr.pivots.iter().enumerate() {
        x[p] = tb[i].clone();
    }
    LinearSolve::Solution(x)
}

/// Coefficients expressing `v` as a combination of `vectors`, if it lies in their span.
pub fn in_span(dim: usize, vectors: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let cols = RMatrix::from_rows(dim, vectors.to_vec())
        .expect("span vectors share the dimension")
        .transpose();
    match solve_linear(&cols, v) {
        LinearSolve::Solution(c) => Some(c),
        LinearSolve::Inconsistent(_) => None,
    }
}
