//! The conjugate dual `max{g(w)}` with `g(w) = -f*(-w) - δ*(w | D)`.
//!
//! `g` is evaluated pointwise with two LPs. The dual itself is solved as one
//! composite LP obtained by dualizing both inner programs, over variables
//! `(w, λ, μ, ν, η, ξ)`:
//!
//! ```text
//! maximize   λᵀβ - μᵀγ - νᵀz - ηᵀα - ξᵀy
//! subject to Σλ = 1,  λ, μ, η ≥ 0,
//!            w + Vᵀλ + Uᵀμ + Bᵀν = 0,
//!            Gᵀη + Aᵀξ = w.
//! ```
//!
//! In `Qⁿ` both the primal and `D - dom f` are polyhedral, so every strong
//! duality hypothesis holds and `duality_report` asserts zero gap whenever
//! either side attains its optimum.

use num_traits::Zero;

use crate::analysis::{solve_primal, verify_optimal, PrimalOutcome, Problem};
use crate::error::{check_dim, Error, Result};
use crate::lp::{lp_solve, LinearProgram, LpOutcome};
use crate::numeric::{dot, int, neg, zeros, Extended, Rational};
use crate::sets::Membership;

/// Block offsets of the composite LP's variable vector.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Layout {
    n: usize,
    pieces: usize,
    dom_ineq: usize,
    dom_eq: usize,
    set_ineq: usize,
    set_eq: usize,
}

impl Layout {
    fn lambda(&self) -> usize {
        self.n
    }
    fn mu(&self) -> usize {
        self.lambda() + self.pieces
    }
    fn nu(&self) -> usize {
        self.mu() + self.dom_ineq
    }
    fn eta(&self) -> usize {
        self.nu() + self.dom_eq
    }
    fn xi(&self) -> usize {
        self.eta() + self.set_ineq
    }
    fn total(&self) -> usize {
        self.xi() + self.set_eq
    }
}

#[derive(Debug, Clone)]
pub struct DualProblem<'a> {
    primal: &'a Problem,
    composite: LinearProgram,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualOutcome {
    Solved {
        maximizer: Vec<Rational>,
        value: Rational,
    },
    /// `g ≡ -∞`.
    Infeasible,
    /// `g` is unbounded above; `point` has finite `g` and the composite
    /// objective grows along `ray`, of which only the `w` block is kept.
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

impl DualOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            DualOutcome::Solved { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl<'a> DualProblem<'a> {
    pub fn new(primal: &'a Problem) -> Self {
        let f = primal.objective();
        let d = primal.constraints();
        let dom = f.domain();
        let n = primal.dim();
        let layout = Layout {
            n,
            pieces: f.pieces().len(),
            dom_ineq: dom.ineq_rhs().len(),
            dom_eq: dom.eq_rhs().len(),
            set_ineq: d.ineq_rhs().len(),
            set_eq: d.eq_rhs().len(),
        };
        let total = layout.total();

        let mut cost = zeros(total);
        for (k, piece) in f.pieces().iter().enumerate() {
            cost[layout.lambda() + k] = -piece.constant.clone();
        }
        let blocks = [
            (layout.mu(), dom.ineq_rhs()),
            (layout.nu(), dom.eq_rhs()),
            (layout.eta(), d.ineq_rhs()),
            (layout.xi(), d.eq_rhs()),
        ];
        for (start, rhs) in blocks {
            for (i, r) in rhs.iter().enumerate() {
                cost[start + i] = r.clone();
            }
        }
        let mut lp = LinearProgram::new(total).with_cost(cost);

        let mut simplex = zeros(total);
        for k in 0..layout.pieces {
            simplex[layout.lambda() + k] = int(1);
        }
        lp.add_eq(simplex, int(1)).expect("row width");
        let nonneg = (layout.lambda()..layout.nu()).chain(layout.eta()..layout.xi());
        for j in nonneg {
            let mut row = zeros(total);
            row[j] = int(-1);
            lp.add_le(row, int(0)).expect("row width");
        }

        // Column i of the transposed blocks.
        let slopes = f.slopes();
        for i in 0..n {
            let mut row = zeros(total);
            row[i] = int(1);
            for (k, s) in slopes.iter().enumerate() {
                row[layout.lambda() + k] = s[i].clone();
            }
            for (j, u) in dom.ineq_matrix().row_iter().enumerate() {
                row[layout.mu() + j] = u[i].clone();
            }
            for (j, b) in dom.eq_matrix().row_iter().enumerate() {
                row[layout.nu() + j] = b[i].clone();
            }
            lp.add_eq(row, int(0)).expect("row width");

            let mut row = zeros(total);
            row[i] = int(-1);
            for (j, g) in d.ineq_matrix().row_iter().enumerate() {
                row[layout.eta() + j] = g[i].clone();
            }
            for (j, a) in d.eq_matrix().row_iter().enumerate() {
                row[layout.xi() + j] = a[i].clone();
            }
            lp.add_eq(row, int(0)).expect("row width");
        }
        DualProblem { primal, composite: lp }
    }

    pub fn primal(&self) -> &Problem {
        self.primal
    }

    /// `g(w)`. `-∞` whenever `f*(-w)` or `δ*(w | D)` is `+∞`; with `D = ∅`
    /// the support function is `-∞` and `g = +∞` wherever `f*(-w)` is finite.
    pub fn dual_value(&self, w: &[Rational]) -> Result<Extended> {
        check_dim("dual point", self.primal.dim(), w.len())?;
        let conj = self.primal.objective().conjugate_value(&neg(w))?;
        let support = match self.primal.constraints().support_value(w) {
            Err(Error::EmptySet) => Extended::NegInfinity,
            other => other?,
        };
        Ok(match (conj, support) {
            (Extended::PosInfinity, _) | (_, Extended::PosInfinity) => Extended::NegInfinity,
            (_, Extended::NegInfinity) => Extended::PosInfinity,
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(-a - b),
            (Extended::NegInfinity, _) => unreachable!("proper functions have conjugates above -∞"),
        })
    }

    pub fn solve(&self) -> Result<DualOutcome> {
        let n = self.primal.dim();
        match lp_solve(&self.composite)? {
            LpOutcome::Optimal(s) => {
                let maximizer = s.point[..n].to_vec();
                let value = -s.value;
                if self.dual_value(&maximizer)? != Extended::Finite(value.clone()) {
                    return Err(Error::Inconsistent(
                        "dual maximizer does not attain the composite value".into(),
                    ));
                }
                Ok(DualOutcome::Solved { maximizer, value })
            }
            LpOutcome::Infeasible(_) => Ok(DualOutcome::Infeasible),
            LpOutcome::Unbounded(u) => Ok(DualOutcome::Unbounded {
                point: u.point[..n].to_vec(),
                ray: u.ray[..n].to_vec(),
            }),
        }
    }
}

/// `g(w) ≤ f(u)` at a point of `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakDuality {
    pub dual_value: Extended,
    pub primal_value: Extended,
    pub holds: bool,
    /// `g(w) = f(u)` finite; both points are then optimal, which is checked.
    pub tight: bool,
}

pub fn weak_duality_check(p: &Problem, u: &[Rational], w: &[Rational]) -> Result<WeakDuality> {
    check_dim("dual point", p.dim(), w.len())?;
    if !p.constraints().contains(u)? {
        return Err(Error::PointNotInSet);
    }
    let dp = DualProblem::new(p);
    let dual_value = dp.dual_value(w)?;
    let primal_value = p.objective().evaluate(u)?;
    let holds = dual_value <= primal_value;
    let tight = dual_value.is_finite() && dual_value == primal_value;
    if tight {
        let value = dual_value.finite().expect("tight values are finite");
        if !verify_optimal(p, u)?.is_certified() || dp.solve()?.value() != Some(value) {
            return Err(Error::Inconsistent(
                "equal primal and dual values at non-optimal points".into(),
            ));
        }
    }
    Ok(WeakDuality {
        dual_value,
        primal_value,
        holds,
        tight,
    })
}

/// `w ∈ N_D(u) ∩ (-∂f(u))` with `f(u) = g(w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointCertificate {
    pub primal_point: Vec<Rational>,
    pub dual_point: Vec<Rational>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JointFailure {
    /// `δ*(w | D) ≠ ⟨w, u⟩`.
    NotNormal { support: Extended, pairing: Rational },
    /// `-w ∉ ∂f(u)`.
    NotSubgradient { fenchel_sum: Extended, pairing: Rational },
    /// `f(u) ≠ g(w)`.
    ValueGap { primal: Rational, dual: Extended },
}

/// Every failed check, in the order normal cone, subgradient, value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MismatchReport {
    pub failures: Vec<JointFailure>,
}

impl MismatchReport {
    pub fn first(&self) -> &JointFailure {
        &self.failures[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JointVerdict {
    Certified(JointCertificate),
    Mismatch(MismatchReport),
}

pub fn joint_certificate(p: &Problem, u: &[Rational], w: &[Rational]) -> Result<JointVerdict> {
    check_dim("dual point", p.dim(), w.len())?;
    let fu = match p.objective().evaluate(u)? {
        Extended::Finite(v) if p.constraints().contains(u)? => v,
        _ => return Err(Error::PointNotInSet),
    };
    let pairing = dot(w, u);
    let mut failures = Vec::new();

    let support = p.constraints().support_value(w)?;
    if support != Extended::Finite(pairing.clone()) {
        failures.push(JointFailure::NotNormal {
            support,
            pairing: pairing.clone(),
        });
    }
    let minus_w = neg(w);
    let sub = p.objective().is_subgradient(u, &minus_w)?;
    if !sub.holds {
        failures.push(JointFailure::NotSubgradient {
            fenchel_sum: sub.fenchel_sum,
            pairing: -pairing,
        });
    }
    debug_assert_eq!(sub.holds, matches!(sub.membership, Membership::Member(_)));
    let dual = DualProblem::new(p).dual_value(w)?;
    if dual != Extended::Finite(fu.clone()) {
        failures.push(JointFailure::ValueGap {
            primal: fu.clone(),
            dual,
        });
    }

    if failures.is_empty() {
        Ok(JointVerdict::Certified(JointCertificate {
            primal_point: u.to_vec(),
            dual_point: w.to_vec(),
            value: fu,
        }))
    } else {
        Ok(JointVerdict::Mismatch(MismatchReport { failures }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub primal: PrimalOutcome,
    pub dual: DualOutcome,
    /// Primal minus dual optimal value, when both are attained; always zero.
    pub gap: Option<Rational>,
}

/// Solves both sides and asserts the strong duality relations.
pub fn duality_report(p: &Problem) -> Result<DualityReport> {
    let primal = solve_primal(p)?;
    let dual = DualProblem::new(p).solve()?;
    let gap = match (primal.value(), dual.value()) {
        (Some(a), Some(b)) => Some(a - b),
        (None, None) => None,
        _ => return Err(Error::Inconsistent("only one side attains its optimum".into())),
    };
    if gap.as_ref().is_some_and(|g| !g.is_zero()) {
        return Err(Error::Inconsistent("nonzero duality gap".into()));
    }
    let primal_feasible = !matches!(primal, PrimalOutcome::Infeasible);
    let dual_feasible = !matches!(dual, DualOutcome::Infeasible);
    if primal_feasible && dual_feasible && gap.is_none() {
        return Err(Error::Inconsistent("both sides feasible but unsolved".into()));
    }
    Ok(DualityReport { primal, dual, gap })
}
