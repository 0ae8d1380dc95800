//! Exact linear programming with certified outcomes.
//!
//! [`lp_solve`] minimizes `cᵀx` subject to `Ex = e` and `Fx ≤ f` over free
//! variables. Equalities are eliminated up front by writing `x = x₀ + Nz`
//! with `N` a kernel basis of `E`; the reduced inequality problem goes to a
//! Bland's-rule simplex. Every outcome is re-verified in exact arithmetic
//! before it is returned, and a failed verification is an error.
//!
//! Multiplier convention: `c + Eᵀλ + Fᵀμ = 0`, `μ ≥ 0`, and the optimal value
//! equals `-eᵀλ - fᵀμ`. A Farkas certificate `(λ, μ)` has `μ ≥ 0`,
//! `Eᵀλ + Fᵀμ = 0` and `eᵀλ + fᵀμ < 0`, i.e. it combines the constraints
//! into `0 ≤ negative`.

mod simplex;

use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::numeric::{add, canonical_bases, dot, neg, solve_linear, zeros, LinearSolve, RMatrix, Rational};
use simplex::{solve_standard, StdOutcome};

static CERTIFIED: AtomicU64 = AtomicU64::new(0);
static VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Process-wide count of LP outcomes that passed certificate verification.
pub fn certified_count() -> u64 {
    CERTIFIED.load(Ordering::Relaxed)
}

/// Process-wide count of LP outcomes that failed certificate verification.
pub fn violation_count() -> u64 {
    VIOLATIONS.load(Ordering::Relaxed)
}

/// `min cᵀx  s.t.  Ex = e,  Fx ≤ f`, with `x` free in `Qⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub n: usize,
    pub cost: Vec<Rational>,
    pub eq_matrix: RMatrix,
    pub eq_rhs: Vec<Rational>,
    pub ineq_matrix: RMatrix,
    pub ineq_rhs: Vec<Rational>,
}

impl LinearProgram {
    /// Pure feasibility problem over `Qⁿ` with no constraints yet.
    pub fn new(n: usize) -> Self {
        LinearProgram {
            n,
            cost: zeros(n),
            eq_matrix: RMatrix::empty(n),
            eq_rhs: Vec::new(),
            ineq_matrix: RMatrix::empty(n),
            ineq_rhs: Vec::new(),
        }
    }

    pub fn with_cost(mut self, cost: Vec<Rational>) -> Self {
        self.cost = cost;
        self
    }

    pub fn add_eq(&mut self, row: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.eq_matrix.push_row(row)?;
        self.eq_rhs.push(rhs);
        Ok(())
    }

    pub fn add_le(&mut self, row: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.ineq_matrix.push_row(row)?;
        self.ineq_rhs.push(rhs);
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        check_dim("cost vector", self.n, self.cost.len())?;
        check_dim("equality block width", self.n, self.eq_matrix.cols())?;
        check_dim("equality right-hand side", self.eq_matrix.rows(), self.eq_rhs.len())?;
        check_dim("inequality block width", self.n, self.ineq_matrix.cols())?;
        check_dim(
            "inequality right-hand side",
            self.ineq_matrix.rows(),
            self.ineq_rhs.len(),
        )
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.n
            && self.eq_matrix.mul_vec(x) == self.eq_rhs
            && self
                .ineq_matrix
                .mul_vec(x)
                .iter()
                .zip(&self.ineq_rhs)
                .all(|(lhs, rhs)| lhs <= rhs)
    }

    /// Exact re-verification of an outcome against this program.
    pub fn verify(&self, outcome: &LpOutcome) -> Result<()> {
        let fail = |what: &str| Err(Error::CertificateViolation(what.to_string()));
        match outcome {
            LpOutcome::Optimal(sol) => {
                if !self.is_feasible_point(&sol.point) {
                    return fail("optimal point is infeasible");
                }
                if sol.ineq_multipliers.len() != self.ineq_rhs.len() || sol.eq_multipliers.len() != self.eq_rhs.len() {
                    return fail("multiplier length");
                }
                if sol.ineq_multipliers.iter().any(Signed::is_negative) {
                    return fail("negative inequality multiplier");
                }
                let stationarity = add(
                    &add(&self.cost, &self.eq_matrix.tr_mul_vec(&sol.eq_multipliers)),
                    &self.ineq_matrix.tr_mul_vec(&sol.ineq_multipliers),
                );
                if !crate::numeric::is_zero_vec(&stationarity) {
                    return fail("dual feasibility c + Eᵀλ + Fᵀμ = 0");
                }
                let fx = self.ineq_matrix.mul_vec(&sol.point);
                for ((mu, lhs), rhs) in sol.ineq_multipliers.iter().zip(&fx).zip(&self.ineq_rhs) {
                    if !mu.is_zero() && lhs != rhs {
                        return fail("complementary slackness");
                    }
                }
                let primal = dot(&self.cost, &sol.point);
                let dual = -dot(&self.eq_rhs, &sol.eq_multipliers) - dot(&self.ineq_rhs, &sol.ineq_multipliers);
                if primal != sol.value || dual != sol.value {
                    return fail("duality gap");
                }
                Ok(())
            }
            LpOutcome::Infeasible(cert) => {
                if cert.ineq_multipliers.len() != self.ineq_rhs.len() || cert.eq_multipliers.len() != self.eq_rhs.len()
                {
                    return fail("Farkas multiplier length");
                }
                if cert.ineq_multipliers.iter().any(Signed::is_negative) {
                    return fail("negative Farkas multiplier");
                }
                let combo = add(
                    &self.eq_matrix.tr_mul_vec(&cert.eq_multipliers),
                    &self.ineq_matrix.tr_mul_vec(&cert.ineq_multipliers),
                );
                if !crate::numeric::is_zero_vec(&combo) {
                    return fail("Farkas combination is not zero");
                }
                if !cert.bound().is_negative() {
                    return fail("Farkas bound is not negative");
                }
                let bound = dot(&self.eq_rhs, &cert.eq_multipliers) + dot(&self.ineq_rhs, &cert.ineq_multipliers);
                if bound != cert.bound {
                    return fail("Farkas bound mismatch");
                }
                Ok(())
            }
            LpOutcome::Unbounded(ub) => {
                if !self.is_feasible_point(&ub.point) {
                    return fail("unbounded outcome point is infeasible");
                }
                if ub.ray.len() != self.n || !crate::numeric::is_zero_vec(&self.eq_matrix.mul_vec(&ub.ray)) {
                    return fail("ray leaves the equality subspace");
                }
                if self.ineq_matrix.mul_vec(&ub.ray).iter().any(Signed::is_positive) {
                    return fail("ray is not a recession direction");
                }
                if !dot(&self.cost, &ub.ray).is_negative() {
                    return fail("ray is not a descent direction");
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalSolution {
    pub point: Vec<Rational>,
    pub value: Rational,
    pub eq_multipliers: Vec<Rational>,
    pub ineq_multipliers: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub eq_multipliers: Vec<Rational>,
    pub ineq_multipliers: Vec<Rational>,
    /// `eᵀλ + fᵀμ`, strictly negative.
    pub bound: Rational,
}

impl FarkasCertificate {
    pub fn bound(&self) -> &Rational {
        &self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnboundedRay {
    pub point: Vec<Rational>,
    pub ray: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(OptimalSolution),
    Infeasible(FarkasCertificate),
    Unbounded(UnboundedRay),
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<&OptimalSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible(_))
    }
}

/// Solves `p` exactly and returns a verified outcome.
pub fn lp_solve(p: &LinearProgram) -> Result<LpOutcome> {
    p.validate()?;
    let outcome = solve_unchecked(p)?;
    match p.verify(&outcome) {
        Ok(()) => {
            CERTIFIED.fetch_add(1, Ordering::Relaxed);
            Ok(outcome)
        }
        Err(e) => {
            VIOLATIONS.fetch_add(1, Ordering::Relaxed);
            Err(e)
        }
    }
}

fn farkas(p: &LinearProgram, eq: Vec<Rational>, ineq: Vec<Rational>) -> LpOutcome {
    let bound = dot(&p.eq_rhs, &eq) + dot(&p.ineq_rhs, &ineq);
    LpOutcome::Infeasible(FarkasCertificate {
        eq_multipliers: eq,
        ineq_multipliers: ineq,
        bound,
    })
}

/// Equality multipliers `λ` with `Eᵀλ = target`; `target` is known to lie in the row space.
fn equality_multipliers(p: &LinearProgram, target: &[Rational]) -> Result<Vec<Rational>> {
    match solve_linear(&p.eq_matrix.transpose(), target) {
        LinearSolve::Solution(l) => Ok(l),
        LinearSolve::Inconsistent(_) => Err(Error::CertificateViolation(
            "reduced multipliers do not lift to the equality block".into(),
        )),
    }
}

fn solve_unchecked(p: &LinearProgram) -> Result<LpOutcome> {
    let x0 = match solve_linear(&p.eq_matrix, &p.eq_rhs) {
        LinearSolve::Solution(x0) => x0,
        LinearSolve::Inconsistent(y) => {
            // yᵀE = 0, yᵀe = 1; negate to read as "0 = -1".
            return Ok(farkas(p, neg(&y), zeros(p.ineq_rhs.len())));
        }
    };
    let kernel = canonical_bases(&p.eq_matrix).kernel_basis;
    let k = kernel.len();
    let mi = p.ineq_matrix.rows();

    // Reduced problem in z: min c'ᵀz s.t. Mz ≤ b.
    let reduced_cost: Vec<Rational> = kernel.iter().map(|v| dot(&p.cost, v)).collect();
    let mut reduced = RMatrix::zeros(mi, k);
    for i in 0..mi {
        for (j, v) in kernel.iter().enumerate() {
            reduced[(i, j)] = dot(p.ineq_matrix.row(i), v);
        }
    }
    let fx0 = p.ineq_matrix.mul_vec(&x0);
    let b: Vec<Rational> = p.ineq_rhs.iter().zip(&fx0).map(|(f, g)| f - g).collect();

    // Standard form over [z⁺, z⁻, s].
    let mut a = RMatrix::zeros(mi, 2 * k + mi);
    for i in 0..mi {
        for j in 0..k {
            a[(i, j)] = reduced[(i, j)].clone();
            a[(i, k + j)] = -reduced[(i, j)].clone();
        }
        a[(i, 2 * k + i)] = Rational::from_integer(1.into());
    }
    let mut c = reduced_cost.clone();
    c.extend(neg(&reduced_cost));
    c.extend(zeros(mi));

    let lift = |w: &[Rational]| -> Vec<Rational> {
        let z: Vec<Rational> = (0..k).map(|j| &w[j] - &w[k + j]).collect();
        crate::numeric::combine(p.n, &z, &kernel)
    };

    Ok(match solve_standard(&a, &b, &c) {
        StdOutcome::Optimal { x, y } => {
            let point = add(&x0, &lift(&x));
            let mu = neg(&y);
            let residual = add(&p.cost, &p.ineq_matrix.tr_mul_vec(&mu));
            let lambda = equality_multipliers(p, &neg(&residual))?;
            let value = dot(&p.cost, &point);
            LpOutcome::Optimal(OptimalSolution {
                point,
                value,
                eq_multipliers: lambda,
                ineq_multipliers: mu,
            })
        }
        StdOutcome::Infeasible { y } => {
            let mu = neg(&y);
            let lambda = equality_multipliers(p, &neg(&p.ineq_matrix.tr_mul_vec(&mu)))?;
            farkas(p, lambda, mu)
        }
        StdOutcome::Unbounded { x, ray } => LpOutcome::Unbounded(UnboundedRay {
            point: add(&x0, &lift(&x)),
            ray: lift(&ray),
        }),
    })
}
