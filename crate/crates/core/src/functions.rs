//! Polyhedral convex functions `f(x) = max_k ⟨v_k, x⟩ + β_k` on a polyhedral domain.
//!
//! The domain is `{x : Bx = z, Ux ≤ γ}` with rows `u_j*` of `U`. Outside the
//! domain `f = +∞`. Every function is proper: construction fails when the
//! domain is empty.

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lp::{lp_solve, LinearProgram, LpOutcome};
use crate::numeric::{canonical_bases, dot, int, Extended, Rational};
use crate::sets::{conic_membership, ConicCombo, GPolySet, Membership};

/// One affine piece `x ↦ ⟨slope, x⟩ + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub slope: Vec<Rational>,
    pub constant: Rational,
}

impl Piece {
    pub fn new(slope: Vec<Rational>, constant: Rational) -> Self {
        Piece { slope, constant }
    }

    pub fn value(&self, x: &[Rational]) -> Rational {
        dot(&self.slope, x) + &self.constant
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GPolyFunc {
    pieces: Vec<Piece>,
    domain: GPolySet,
}

/// Result of [`GPolyFunc::is_subgradient`]: both routes, which always agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgradientCheck {
    pub holds: bool,
    /// `f(x) + f*(w)`, compared against `⟨w, x⟩`.
    pub fenchel_sum: Extended,
    /// Membership of `w` in the subdifferential formula.
    pub membership: Membership,
}

impl GPolyFunc {
    pub fn new(pieces: Vec<Piece>, domain: GPolySet) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::NoPieces);
        }
        for (k, p) in pieces.iter().enumerate() {
            check_dim(&format!("slope of piece {k}"), domain.dim(), p.slope.len())?;
        }
        if domain.is_empty()? {
            return Err(Error::EmptyDomain);
        }
        Ok(GPolyFunc { pieces, domain })
    }

    /// Max of affine pieces over all of `Qⁿ`.
    pub fn unconstrained(dim: usize, pieces: Vec<Piece>) -> Result<Self> {
        Self::new(pieces, GPolySet::whole_space(dim))
    }

    /// Reads `f` from an H-representation of its epigraph in `Qⁿ⁺¹` (last coordinate `t`).
    ///
    /// Inequality rows `⟨a,x⟩ + c·t ≤ b` with `c < 0` become pieces after
    /// scaling `c` to `-1`; rows with `c = 0` constrain the domain. Rows with
    /// `c > 0` or equalities involving `t` do not describe an epigraph.
    pub fn from_epigraph(
        dim: usize,
        eq: Vec<(Vec<Rational>, Rational)>,
        ineq: Vec<(Vec<Rational>, Rational)>,
    ) -> Result<Self> {
        let mut pieces = Vec::new();
        let mut dom_eq = Vec::new();
        let mut dom_ineq = Vec::new();
        for (row, rhs) in eq {
            check_dim("epigraph equality row", dim + 1, row.len())?;
            if !row[dim].is_zero() {
                return Err(Error::NotEpigraph("equality involves the epigraph coordinate".into()));
            }
            dom_eq.push((row[..dim].to_vec(), rhs));
        }
        for (row, rhs) in ineq {
            check_dim("epigraph inequality row", dim + 1, row.len())?;
            let c = &row[dim];
            if c.is_zero() {
                dom_ineq.push((row[..dim].to_vec(), rhs));
            } else if c.is_negative() {
                let scale = -c.recip();
                let slope = row[..dim].iter().map(|a| a * &scale).collect();
                pieces.push(Piece::new(slope, -(rhs * scale)));
            } else {
                return Err(Error::NotEpigraph("row bounds t from above".into()));
            }
        }
        Self::new(pieces, GPolySet::from_rows(dim, dom_eq, dom_ineq)?)
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn domain(&self) -> &GPolySet {
        &self.domain
    }

    pub fn slopes(&self) -> Vec<Vec<Rational>> {
        self.pieces.iter().map(|p| p.slope.clone()).collect()
    }

    fn max_piece(&self, x: &[Rational]) -> Rational {
        self.pieces
            .iter()
            .map(|p| p.value(x))
            .max()
            .expect("at least one piece")
    }

    fn require_in_domain(&self, x: &[Rational]) -> Result<()> {
        if self.domain.contains(x)? {
            Ok(())
        } else {
            Err(Error::OutsideDomain)
        }
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<Extended> {
        if self.domain.contains(x)? {
            Ok(Extended::Finite(self.max_piece(x)))
        } else {
            Ok(Extended::PosInfinity)
        }
    }

    /// `Θ(x)`: 0-based indices of pieces attaining the max at `x`.
    pub fn active_pieces(&self, x: &[Rational]) -> Result<Vec<usize>> {
        self.require_in_domain(x)?;
        let fx = self.max_piece(x);
        Ok(self
            .pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.value(x) == fx)
            .map(|(k, _)| k)
            .collect())
    }

    fn max_slope_along(&self, indices: impl Iterator<Item = usize>, h: &[Rational]) -> Rational {
        indices
            .map(|k| dot(&self.pieces[k].slope, h))
            .max()
            .expect("nonempty index set")
    }

    /// `f0⁺(v)`: `max_k ⟨v_k, v⟩` on the domain's recession cone, `+∞` off it.
    pub fn recession_value(&self, v: &[Rational]) -> Result<Extended> {
        let cone = self.domain.recession_cone()?.cone;
        if cone.contains(v)? {
            Ok(Extended::Finite(self.max_slope_along(0..self.pieces.len(), v)))
        } else {
            Ok(Extended::PosInfinity)
        }
    }

    /// `f'(x; h)`: `max_{k∈Θ(x)} ⟨v_k, h⟩` for `h` tangent to the domain at `x`, else `+∞`.
    pub fn directional_derivative(&self, x: &[Rational], h: &[Rational]) -> Result<Extended> {
        let theta = self.active_pieces(x)?;
        check_dim("direction", self.dim(), h.len())?;
        if self.domain.tangent_cone(x)?.contains(h)? {
            Ok(Extended::Finite(self.max_slope_along(theta.into_iter(), h)))
        } else {
            Ok(Extended::PosInfinity)
        }
    }

    /// `∂f(x) = conv{v_k : k ∈ Θ(x)} + cone{u_j* : j ∈ J(x)} + rowspace(B)`.
    pub fn subdifferential_at(&self, x: &[Rational]) -> Result<ConicCombo> {
        let theta = self.active_pieces(x)?;
        let active = self.domain.active_set(x)?;
        ConicCombo::new(
            self.dim(),
            theta.iter().map(|&k| self.pieces[k].slope.clone()).collect(),
            active
                .iter()
                .map(|&j| self.domain.ineq_matrix().row(j).to_vec())
                .collect(),
            canonical_bases(self.domain.eq_matrix()).rowspace_basis,
        )
    }

    /// LP over `(x, t)`: `x ∈ over`, `⟨v_k, x⟩ + β_k ≤ t` for every piece.
    pub(crate) fn epigraph_lp(&self, over: &GPolySet, cost_x: &[Rational], cost_t: Rational) -> Result<LinearProgram> {
        let n = self.dim();
        check_dim("epigraph constraint set", n, over.dim())?;
        let mut cost = cost_x.to_vec();
        cost.push(cost_t);
        let mut lp = LinearProgram::new(n + 1).with_cost(cost);
        let pad = |row: &[Rational], t: Rational| {
            let mut r = row.to_vec();
            r.push(t);
            r
        };
        for (row, rhs) in over.eq_matrix().row_iter().zip(over.eq_rhs()) {
            lp.add_eq(pad(row, Rational::zero()), rhs.clone())?;
        }
        for (row, rhs) in over.ineq_matrix().row_iter().zip(over.ineq_rhs()) {
            lp.add_le(pad(row, Rational::zero()), rhs.clone())?;
        }
        for p in &self.pieces {
            lp.add_le(pad(&p.slope, int(-1)), -p.constant.clone())?;
        }
        Ok(lp)
    }

    /// `f*(w) = sup_{x ∈ dom f} ⟨w, x⟩ - f(x)`, one LP per query.
    pub fn conjugate_value(&self, w: &[Rational]) -> Result<Extended> {
        check_dim("conjugate argument", self.dim(), w.len())?;
        let neg_w: Vec<Rational> = w.iter().map(|x| -x).collect();
        match lp_solve(&self.epigraph_lp(&self.domain, &neg_w, Rational::one())?)? {
            LpOutcome::Optimal(s) => Ok(Extended::Finite(-s.value)),
            LpOutcome::Unbounded(_) => Ok(Extended::PosInfinity),
            LpOutcome::Infeasible(_) => Err(Error::EmptyDomain),
        }
    }

    /// Decides `w ∈ ∂f(x)` by the Fenchel equality and, independently, by
    /// membership in the subdifferential formula; disagreement is an error.
    pub fn is_subgradient(&self, x: &[Rational], w: &[Rational]) -> Result<SubgradientCheck> {
        self.require_in_domain(x)?;
        check_dim("subgradient candidate", self.dim(), w.len())?;
        let fx = self.max_piece(x);
        let fenchel_sum = match self.conjugate_value(w)? {
            Extended::Finite(c) => Extended::Finite(fx + c),
            other => other,
        };
        let fenchel = fenchel_sum == Extended::Finite(dot(w, x));
        let membership = conic_membership(w, &self.subdifferential_at(x)?)?;
        if fenchel != membership.is_member() {
            return Err(Error::Inconsistent(format!(
                "Fenchel equality says {fenchel}, subdifferential formula says {}",
                membership.is_member()
            )));
        }
        Ok(SubgradientCheck {
            holds: fenchel,
            fenchel_sum,
            membership,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    /// max{t1 - t2 + 1, -t1 - t2} on Q².
    fn ex1() -> GPolyFunc {
        GPolyFunc::unconstrained(
            2,
            vec![Piece::new(v(&[1, -1]), int(1)), Piece::new(v(&[-1, -1]), int(0))],
        )
        .unwrap()
    }

    fn abs() -> GPolyFunc {
        GPolyFunc::unconstrained(1, vec![Piece::new(v(&[1]), int(0)), Piece::new(v(&[-1]), int(0))]).unwrap()
    }

    fn opt() -> Vec<Rational> {
        vec![rat(-1, 2), int(2)]
    }

    #[test]
    fn evaluation() {
        let f = ex1();
        assert_eq!(f.evaluate(&v(&[0, 0])).unwrap(), Extended::Finite(int(1)));
        assert_eq!(f.evaluate(&opt()).unwrap(), Extended::Finite(rat(-3, 2)));
        let ray = GPolyFunc::new(
            vec![Piece::new(v(&[1]), int(0))],
            GPolySet::from_rows(1, vec![], vec![(v(&[-1]), int(-1))]).unwrap(),
        )
        .unwrap();
        assert_eq!(ray.evaluate(&v(&[0])).unwrap(), Extended::PosInfinity);
    }

    #[test]
    fn active_piece_sets() {
        let f = ex1();
        assert_eq!(f.active_pieces(&v(&[0, 0])).unwrap(), vec![0]);
        assert_eq!(f.active_pieces(&opt()).unwrap(), vec![0, 1]);
        assert_eq!(f.active_pieces(&v(&[-1, 0])).unwrap(), vec![1]);
    }

    #[test]
    fn recession_values() {
        let f = ex1();
        assert_eq!(f.recession_value(&v(&[0, -1])).unwrap(), Extended::Finite(int(1)));
        assert_eq!(f.recession_value(&v(&[1, 1])).unwrap(), Extended::Finite(int(0)));
        let g = GPolyFunc::new(
            vec![Piece::new(v(&[1]), int(0))],
            GPolySet::from_rows(1, vec![], vec![(v(&[1]), int(0))]).unwrap(),
        )
        .unwrap();
        assert_eq!(g.recession_value(&v(&[1])).unwrap(), Extended::PosInfinity);
    }

    #[test]
    fn directional_derivatives() {
        let f = ex1();
        assert_eq!(
            f.directional_derivative(&opt(), &v(&[1, 0])).unwrap(),
            Extended::Finite(int(1))
        );
        assert_eq!(
            f.directional_derivative(&opt(), &v(&[0, -1])).unwrap(),
            Extended::Finite(int(1))
        );
        assert_eq!(
            f.directional_derivative(&v(&[0, 0]), &v(&[5, 7])).unwrap(),
            Extended::Finite(int(-2))
        );
        let g = GPolyFunc::new(
            vec![Piece::new(v(&[1]), int(0))],
            GPolySet::from_rows(1, vec![], vec![(v(&[1]), int(0))]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            g.directional_derivative(&v(&[0]), &v(&[1])).unwrap(),
            Extended::PosInfinity
        );
        assert_eq!(g.directional_derivative(&v(&[1]), &v(&[1])), Err(Error::OutsideDomain));
    }

    #[test]
    fn subdifferentials() {
        let f = ex1();
        let s = f.subdifferential_at(&opt()).unwrap();
        assert_eq!(s.convex, vec![v(&[1, -1]), v(&[-1, -1])]);
        assert!(s.conic.is_empty() && s.span.is_empty());
        let s = f.subdifferential_at(&v(&[0, 0])).unwrap();
        assert_eq!(s.convex, vec![v(&[1, -1])]);

        let plane = GPolySet::from_rows(3, vec![(v(&[0, 0, 1]), int(0))], vec![]).unwrap();
        let lin = GPolyFunc::new(vec![Piece::new(v(&[2, -1, 3]), int(0))], plane).unwrap();
        let s = lin.subdifferential_at(&v(&[4, 4, 0])).unwrap();
        assert_eq!(s.convex, vec![v(&[2, -1, 3])]);
        assert_eq!(s.span, vec![v(&[0, 0, 1])]);
    }

    #[test]
    fn conjugates() {
        let f = ex1();
        assert_eq!(f.conjugate_value(&v(&[0, -1])).unwrap(), Extended::Finite(rat(-1, 2)));
        // f(0, s) = 1 - s is unbounded below, so f*(0) = +∞.
        assert_eq!(f.conjugate_value(&v(&[0, 0])).unwrap(), Extended::PosInfinity);
        assert_eq!(abs().conjugate_value(&v(&[0])).unwrap(), Extended::Finite(int(0)));
        assert_eq!(abs().conjugate_value(&v(&[2])).unwrap(), Extended::PosInfinity);
    }

    #[test]
    fn subgradient_checks() {
        let f = ex1();
        let c = f.is_subgradient(&opt(), &v(&[0, -1])).unwrap();
        assert!(c.holds);
        assert_eq!(c.fenchel_sum, Extended::Finite(int(-2)));
        assert!(f.is_subgradient(&v(&[0, 0]), &v(&[1, -1])).unwrap().holds);
        assert!(!f.is_subgradient(&v(&[0, 0]), &v(&[0, 0])).unwrap().holds);
    }

    #[test]
    fn epigraph_conversion() {
        // t ≥ x, t ≥ -x, x ≤ 3 (2t ≥ 2x written with t-coefficient -2).
        let f = GPolyFunc::from_epigraph(
            1,
            vec![],
            vec![(v(&[2, -2]), int(0)), (v(&[-1, -1]), int(0)), (v(&[1, 0]), int(3))],
        )
        .unwrap();
        assert_eq!(f.pieces(), abs().pieces());
        assert_eq!(f.evaluate(&v(&[4])).unwrap(), Extended::PosInfinity);
        assert!(matches!(
            GPolyFunc::from_epigraph(1, vec![], vec![(v(&[0, 1]), int(0))]),
            Err(Error::NotEpigraph(_))
        ));
    }

    #[test]
    fn properness_is_enforced() {
        let empty = GPolySet::from_rows(1, vec![], vec![(v(&[1]), int(-1)), (v(&[-1]), int(-1))]).unwrap();
        assert_eq!(
            GPolyFunc::new(vec![Piece::new(v(&[1]), int(0))], empty),
            Err(Error::EmptyDomain)
        );
        assert_eq!(GPolyFunc::unconstrained(1, vec![]), Err(Error::NoPieces));
        assert!(GPolyFunc::unconstrained(2, vec![Piece::new(v(&[1]), int(0))]).is_err());
    }
}
