//! Polyhedral convex sets `{x : Ax = y, Gx ≤ α}` and the cones derived from them.
//!
//! In `Qⁿ` every generalized polyhedral set is an ordinary polyhedron, and
//! the annihilator `(ker A)^⊥` is the row space of `A`. The affine block is
//! still kept separate from the inequalities so that normal cones and
//! certificates can expose their subspace component on its own.

mod combo;
mod generators;

pub use combo::{conic_membership, ConicCombo, ConicWitness, EmptyHull, Membership, Separator};
pub use generators::{generators_oracle, generators_oracle_with_limit, Generators, DEFAULT_ORACLE_LIMIT};

use crate::error::{check_dim, Error, Result};
use crate::lp::{lp_solve, LinearProgram, LpOutcome};
use crate::numeric::{canonical_bases, neg, zeros, Extended, RMatrix, Rational};

/// `{x ∈ Qⁿ : Ax = y, Gx ≤ α}`; row `i` of `G` is the functional `x_i*`.
///
/// The representation is kept exactly as given: active sets refer to the listed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GPolySet {
    dim: usize,
    eq_matrix: RMatrix,
    eq_rhs: Vec<Rational>,
    ineq_matrix: RMatrix,
    ineq_rhs: Vec<Rational>,
}

/// Recession cone of a set, flagged when the source set was empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecessionCone {
    pub cone: GPolySet,
    /// The homogenized system is always a cone, but it only means `0⁺D` when `D ≠ ∅`.
    pub source_empty: bool,
}

impl GPolySet {
    pub fn new(
        eq_matrix: RMatrix,
        eq_rhs: Vec<Rational>,
        ineq_matrix: RMatrix,
        ineq_rhs: Vec<Rational>,
    ) -> Result<Self> {
        let dim = eq_matrix.cols();
        check_dim("inequality block width", dim, ineq_matrix.cols())?;
        check_dim("equality right-hand side", eq_matrix.rows(), eq_rhs.len())?;
        check_dim("inequality right-hand side", ineq_matrix.rows(), ineq_rhs.len())?;
        Ok(GPolySet {
            dim,
            eq_matrix,
            eq_rhs,
            ineq_matrix,
            ineq_rhs,
        })
    }

    /// Convenience constructor from row lists.
    pub fn from_rows(
        dim: usize,
        eq: Vec<(Vec<Rational>, Rational)>,
        ineq: Vec<(Vec<Rational>, Rational)>,
    ) -> Result<Self> {
        let (eq_rows, eq_rhs): (Vec<_>, Vec<_>) = eq.into_iter().unzip();
        let (ineq_rows, ineq_rhs): (Vec<_>, Vec<_>) = ineq.into_iter().unzip();
        Self::new(
            RMatrix::from_rows(dim, eq_rows)?,
            eq_rhs,
            RMatrix::from_rows(dim, ineq_rows)?,
            ineq_rhs,
        )
    }

    /// All of `Qⁿ`.
    pub fn whole_space(dim: usize) -> Self {
        GPolySet {
            dim,
            eq_matrix: RMatrix::empty(dim),
            eq_rhs: Vec::new(),
            ineq_matrix: RMatrix::empty(dim),
            ineq_rhs: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eq_matrix(&self) -> &RMatrix {
        &self.eq_matrix
    }

    pub fn eq_rhs(&self) -> &[Rational] {
        &self.eq_rhs
    }

    pub fn ineq_matrix(&self) -> &RMatrix {
        &self.ineq_matrix
    }

    pub fn ineq_rhs(&self) -> &[Rational] {
        &self.ineq_rhs
    }

    pub fn ineq_rows(&self) -> Vec<Vec<Rational>> {
        self.ineq_matrix.to_rows()
    }

    /// Intersection, listing `self`'s rows before `other`'s.
    pub fn intersect(&self, other: &GPolySet) -> Result<GPolySet> {
        check_dim("intersected set", self.dim, other.dim)?;
        let mut eq_rhs = self.eq_rhs.clone();
        eq_rhs.extend_from_slice(&other.eq_rhs);
        let mut ineq_rhs = self.ineq_rhs.clone();
        ineq_rhs.extend_from_slice(&other.ineq_rhs);
        GPolySet::new(
            self.eq_matrix.vstack(&other.eq_matrix),
            eq_rhs,
            self.ineq_matrix.vstack(&other.ineq_matrix),
            ineq_rhs,
        )
    }

    /// Appends the inequality `⟨row, x⟩ ≤ rhs`.
    pub fn with_inequality(mut self, row: Vec<Rational>, rhs: Rational) -> Result<GPolySet> {
        self.ineq_matrix.push_row(row)?;
        self.ineq_rhs.push(rhs);
        Ok(self)
    }

    /// The constraints of this set as an LP with the given cost.
    pub fn to_lp(&self, cost: Vec<Rational>) -> LinearProgram {
        LinearProgram {
            n: self.dim,
            cost,
            eq_matrix: self.eq_matrix.clone(),
            eq_rhs: self.eq_rhs.clone(),
            ineq_matrix: self.ineq_matrix.clone(),
            ineq_rhs: self.ineq_rhs.clone(),
        }
    }

    /// Some point of the set, or `None` when it is empty.
    pub fn feasible_point(&self) -> Result<Option<Vec<Rational>>> {
        Ok(match lp_solve(&self.to_lp(zeros(self.dim)))? {
            LpOutcome::Optimal(s) => Some(s.point),
            LpOutcome::Infeasible(_) => None,
            LpOutcome::Unbounded(_) => unreachable!("zero objective"),
        })
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.feasible_point()?.is_none())
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        check_dim("point", self.dim, x.len())?;
        Ok(self.eq_matrix.mul_vec(x) == self.eq_rhs
            && self
                .ineq_matrix
                .mul_vec(x)
                .iter()
                .zip(&self.ineq_rhs)
                .all(|(l, r)| l <= r))
    }

    fn require_member(&self, x: &[Rational]) -> Result<()> {
        if self.contains(x)? {
            Ok(())
        } else {
            Err(Error::PointNotInSet)
        }
    }

    /// Indices `i` (0-based) with `⟨x_i*, x⟩ = α_i`.
    pub fn active_set(&self, x: &[Rational]) -> Result<Vec<usize>> {
        self.require_member(x)?;
        Ok(self.tight_rows(x))
    }

    fn tight_rows(&self, x: &[Rational]) -> Vec<usize> {
        self.ineq_matrix
            .mul_vec(x)
            .iter()
            .zip(&self.ineq_rhs)
            .enumerate()
            .filter(|(_, (l, r))| l == r)
            .map(|(i, _)| i)
            .collect()
    }

    /// `{v : Av = 0, Gv ≤ 0}`.
    pub fn recession_cone(&self) -> Result<RecessionCone> {
        let cone = GPolySet {
            dim: self.dim,
            eq_matrix: self.eq_matrix.clone(),
            eq_rhs: zeros(self.eq_rhs.len()),
            ineq_matrix: self.ineq_matrix.clone(),
            ineq_rhs: zeros(self.ineq_rhs.len()),
        };
        Ok(RecessionCone {
            cone,
            source_empty: self.is_empty()?,
        })
    }

    /// `{v : Av = 0, ⟨x_i*, v⟩ ≤ 0 for i ∈ I(x)}`.
    pub fn tangent_cone(&self, x: &[Rational]) -> Result<GPolySet> {
        let active = self.active_set(x)?;
        Ok(GPolySet {
            dim: self.dim,
            eq_matrix: self.eq_matrix.clone(),
            eq_rhs: zeros(self.eq_rhs.len()),
            ineq_matrix: self.ineq_matrix.select_rows(&active),
            ineq_rhs: zeros(active.len()),
        })
    }

    /// `cone{x_i* : i ∈ I(x)} + rowspace(A)`.
    pub fn normal_cone(&self, x: &[Rational]) -> Result<ConicCombo> {
        let active = self.active_set(x)?;
        let conic = active.iter().map(|&i| self.ineq_matrix.row(i).to_vec()).collect();
        ConicCombo::new(
            self.dim,
            Vec::new(),
            conic,
            canonical_bases(&self.eq_matrix).rowspace_basis,
        )
    }

    /// `sup{⟨w,x⟩ : x ∈ D}`, `+∞` when unbounded.
    pub fn support_value(&self, w: &[Rational]) -> Result<Extended> {
        check_dim("support direction", self.dim, w.len())?;
        match lp_solve(&self.to_lp(neg(w)))? {
            LpOutcome::Optimal(s) => Ok(Extended::Finite(-s.value)),
            LpOutcome::Unbounded(_) => Ok(Extended::PosInfinity),
            LpOutcome::Infeasible(_) => Err(Error::EmptySet),
        }
    }
}
