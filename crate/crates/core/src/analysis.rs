//! The primal problem `min{f(x) : x ∈ D}`: existence, solving, and optimality certificates.
//!
//! Existence is decided three ways that share no code path:
//!
//! * a bounded-below test on the epigraph LP,
//! * a recession test looking for `v ∈ 0⁺D ∩ 0⁺dom f` with `f0⁺(v) < 0`,
//! * an explicit membership test
//!   `0 ∈ conv{v_k} + cone{x_i*} + cone{u_j*} + rowspace[A; B]`.
//!
//! Their agreement is checked on every call. Optimality at a point uses the
//! same membership test restricted to the active pieces and constraints.
//! In `Qⁿ` the sum `∂f(x) + N_D(x)` is polyhedral and hence closed, so the
//! closure-free form of the optimality condition is exact and is the only one
//! implemented.

use num_traits::Signed;

use crate::error::{check_dim, Error, Result};
use crate::functions::GPolyFunc;
use crate::lp::{lp_solve, LinearProgram, LpOutcome};
use crate::numeric::{canonical_bases, combine, int, zeros, Extended, Rational};
use crate::sets::{conic_membership, ConicCombo, GPolySet, Membership, Separator};

/// `min{f(x) : x ∈ D}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    f: GPolyFunc,
    d: GPolySet,
    feasible: bool,
}

impl Problem {
    pub fn new(f: GPolyFunc, d: GPolySet) -> Result<Self> {
        check_dim("constraint set", f.dim(), d.dim())?;
        let feasible = !d.intersect(f.domain())?.is_empty()?;
        Ok(Problem { f, d, feasible })
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn objective(&self) -> &GPolyFunc {
        &self.f
    }

    pub fn constraints(&self) -> &GPolySet {
        &self.d
    }

    /// Whether `D ∩ dom f` is nonempty.
    pub fn is_feasible(&self) -> bool {
        self.feasible
    }

    /// `D ∩ dom f`, with the rows of `D` listed first.
    pub fn feasible_set(&self) -> GPolySet {
        self.d
            .intersect(self.f.domain())
            .expect("dimensions checked at construction")
    }

    fn require_feasible(&self) -> Result<()> {
        if self.feasible {
            Ok(())
        } else {
            Err(Error::InfeasibleProblem)
        }
    }

    /// `rowspace[A; B]`, the finite-dimensional `(ker A ∩ ker B)^⊥`.
    pub fn joint_rowspace(&self) -> Vec<Vec<Rational>> {
        canonical_bases(&self.d.eq_matrix().vstack(self.f.domain().eq_matrix())).rowspace_basis
    }

    fn epigraph_lp(&self) -> Result<LinearProgram> {
        self.f.epigraph_lp(&self.feasible_set(), &zeros(self.dim()), int(1))
    }

    fn in_recession_cones(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.d.recession_cone()?.cone.contains(v)? && self.f.domain().recession_cone()?.cone.contains(v)?)
    }

    /// Checks that `v` is a recession direction of `D` along which `f` decreases.
    fn check_descent_ray(&self, v: &[Rational], route: &str) -> Result<Rational> {
        let ok = self.in_recession_cones(v)?;
        match self.f.recession_value(v)? {
            Extended::Finite(r) if ok && r.is_negative() => Ok(r),
            other => Err(Error::Inconsistent(format!(
                "{route} ray is not a descent recession direction (f0+ = {other})"
            ))),
        }
    }
}

/// Verdict of the bounded-below test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrankWolfe {
    /// `f ≥ γ` on `D`, with `γ` the infimum.
    BoundedBelow { gamma: Rational },
    /// A ray of `D ∩ dom f` along which `f` decreases without bound.
    Unbounded { ray: Vec<Rational>, recession: Rational },
}

/// Verdict of the recession-function test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Eaves {
    /// `f0⁺(v) ≥ 0` for every `v ∈ 0⁺D`.
    Confirmed,
    /// `v ∈ 0⁺D` with `f0⁺(v) ≤ -1`.
    Counterexample {
        direction: Vec<Rational>,
        recession: Rational,
    },
}

/// Multipliers placing 0 in the explicit existence set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExistenceWitness {
    /// Over all pieces; nonnegative, sums to one.
    pub lambda: Vec<Rational>,
    /// Over the inequality rows `x_i*` of `D`.
    pub mu_constraints: Vec<Rational>,
    /// Over the inequality rows `u_j*` of `dom f`.
    pub mu_domain: Vec<Rational>,
    /// Coordinates over `subspace_basis`.
    pub nu: Vec<Rational>,
    pub subspace_basis: Vec<Vec<Rational>>,
}

/// Verdict of the explicit membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Explicit {
    Member(ExistenceWitness),
    NotMember(Separator),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExistenceReport {
    pub feasible: bool,
    /// `None` when the problem is infeasible; likewise below.
    pub frank_wolfe: Option<FrankWolfe>,
    pub eaves: Option<Eaves>,
    pub explicit: Option<Explicit>,
}

impl ExistenceReport {
    /// `Some(true)` when a solution exists, `None` when `D ∩ dom f = ∅`.
    pub fn solution_exists(&self) -> Option<bool> {
        self.frank_wolfe
            .as_ref()
            .map(|fw| matches!(fw, FrankWolfe::BoundedBelow { .. }))
    }
}

pub fn check_frank_wolfe(p: &Problem) -> Result<FrankWolfe> {
    p.require_feasible()?;
    match lp_solve(&p.epigraph_lp()?)? {
        LpOutcome::Optimal(s) => Ok(FrankWolfe::BoundedBelow { gamma: s.value }),
        LpOutcome::Unbounded(u) => {
            let ray = u.ray[..p.dim()].to_vec();
            let recession = p.check_descent_ray(&ray, "bounded-below")?;
            Ok(FrankWolfe::Unbounded { ray, recession })
        }
        LpOutcome::Infeasible(_) => Err(Error::Inconsistent("feasible flag disagrees with epigraph LP".into())),
    }
}

/// One homogeneous feasibility LP: `Av = 0, Bv = 0, Gv ≤ 0, Uv ≤ 0, ⟨v_k, v⟩ ≤ -1`.
/// Homogeneity of `f0⁺` makes the `-1` normalization lossless.
pub fn check_eaves(p: &Problem) -> Result<Eaves> {
    p.require_feasible()?;
    let n = p.dim();
    let mut lp = LinearProgram::new(n);
    for set in [&p.d, p.f.domain()] {
        for row in set.eq_matrix().row_iter() {
            lp.add_eq(row.to_vec(), int(0))?;
        }
        for row in set.ineq_matrix().row_iter() {
            lp.add_le(row.to_vec(), int(0))?;
        }
    }
    for piece in p.f.pieces() {
        lp.add_le(piece.slope.clone(), int(-1))?;
    }
    match lp_solve(&lp)? {
        LpOutcome::Optimal(s) => {
            let recession = p.check_descent_ray(&s.point, "recession")?;
            if recession > int(-1) {
                return Err(Error::Inconsistent("normalized recession value above -1".into()));
            }
            Ok(Eaves::Counterexample {
                direction: s.point,
                recession,
            })
        }
        LpOutcome::Infeasible(_) => Ok(Eaves::Confirmed),
        LpOutcome::Unbounded(_) => unreachable!("zero objective"),
    }
}

pub fn check_explicit(p: &Problem) -> Result<Explicit> {
    p.require_feasible()?;
    let subspace_basis = p.joint_rowspace();
    let mut conic = p.d.ineq_rows();
    conic.extend(p.f.domain().ineq_rows());
    let combo = ConicCombo::new(p.dim(), p.f.slopes(), conic, subspace_basis.clone())?;
    match conic_membership(&zeros(p.dim()), &combo)? {
        Membership::Member(w) => {
            let split = p.d.ineq_rhs().len();
            Ok(Explicit::Member(ExistenceWitness {
                lambda: w.convex,
                mu_constraints: w.conic[..split].to_vec(),
                mu_domain: w.conic[split..].to_vec(),
                nu: w.span,
                subspace_basis,
            }))
        }
        Membership::NotMember(sep) => {
            p.check_descent_ray(&sep.direction, "separating")?;
            Ok(Explicit::NotMember(sep))
        }
    }
}

/// Runs all three existence tests and checks that they agree.
pub fn existence_report(p: &Problem) -> Result<ExistenceReport> {
    if !p.feasible {
        return Ok(ExistenceReport {
            feasible: false,
            frank_wolfe: None,
            eaves: None,
            explicit: None,
        });
    }
    let fw = check_frank_wolfe(p)?;
    let ev = check_eaves(p)?;
    let ex = check_explicit(p)?;
    let verdicts = [
        matches!(fw, FrankWolfe::BoundedBelow { .. }),
        matches!(ev, Eaves::Confirmed),
        matches!(ex, Explicit::Member(_)),
    ];
    if verdicts.iter().any(|&v| v != verdicts[0]) {
        return Err(Error::Inconsistent(format!(
            "existence tests disagree (bounded, recession, explicit) = {verdicts:?}"
        )));
    }
    Ok(ExistenceReport {
        feasible: true,
        frank_wolfe: Some(fw),
        eaves: Some(ev),
        explicit: Some(ex),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimalOutcome {
    Solved { minimizer: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded { ray: Vec<Rational> },
}

impl PrimalOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            PrimalOutcome::Solved { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Solves the problem through its epigraph LP and cross-checks the result
/// against all three existence tests.
pub fn solve_primal(p: &Problem) -> Result<PrimalOutcome> {
    if !p.feasible {
        return Ok(PrimalOutcome::Infeasible);
    }
    let n = p.dim();
    let outcome = match lp_solve(&p.epigraph_lp()?)? {
        LpOutcome::Optimal(s) => {
            let minimizer = s.point[..n].to_vec();
            if !p.d.contains(&minimizer)? || p.f.evaluate(&minimizer)? != Extended::Finite(s.value.clone()) {
                return Err(Error::Inconsistent(
                    "epigraph minimizer does not attain its value".into(),
                ));
            }
            PrimalOutcome::Solved {
                minimizer,
                value: s.value,
            }
        }
        LpOutcome::Unbounded(u) => PrimalOutcome::Unbounded {
            ray: u.ray[..n].to_vec(),
        },
        LpOutcome::Infeasible(_) => return Err(Error::Inconsistent("feasible flag disagrees with epigraph LP".into())),
    };
    let report = existence_report(p)?;
    let consistent = match (&outcome, &report.frank_wolfe) {
        (PrimalOutcome::Solved { value, .. }, Some(FrankWolfe::BoundedBelow { gamma })) => value == gamma,
        (PrimalOutcome::Unbounded { .. }, Some(FrankWolfe::Unbounded { .. })) => true,
        _ => false,
    };
    if !consistent {
        return Err(Error::Inconsistent("solver disagrees with existence tests".into()));
    }
    Ok(outcome)
}

/// `Sol(P) = {x ∈ D ∩ dom f : ⟨v_k, x⟩ + β_k ≤ γ̄ for every k}`.
pub fn solution_set(p: &Problem) -> Result<GPolySet> {
    let PrimalOutcome::Solved { minimizer, value } = solve_primal(p)? else {
        return Err(Error::NoSolution);
    };
    let mut set = p.feasible_set();
    for piece in p.f.pieces() {
        set = set.with_inequality(piece.slope.clone(), &value - &piece.constant)?;
    }
    if !set.contains(&minimizer)? {
        return Err(Error::Inconsistent(
            "minimizer outside the described solution set".into(),
        ));
    }
    Ok(set)
}

/// Multipliers witnessing
/// `0 ∈ conv{v_k : k ∈ Θ(x)} + cone{x_i* : i ∈ I(x)} + cone{u_j* : j ∈ J(x)} + rowspace[A; B]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalityCertificate {
    pub point: Vec<Rational>,
    /// `Θ(x)` and the convex weights over it.
    pub active_pieces: Vec<usize>,
    pub lambda: Vec<Rational>,
    /// `I(x)` and the multipliers over it.
    pub active_constraints: Vec<usize>,
    pub mu_constraints: Vec<Rational>,
    /// `J(x)` and the multipliers over it.
    pub active_domain: Vec<usize>,
    pub mu_domain: Vec<Rational>,
    pub subspace_basis: Vec<Vec<Rational>>,
    pub nu: Vec<Rational>,
}

impl OptimalityCertificate {
    /// `Σλ_k v_k + Σμ_i x_i* + Σμ_j u_j* + Sᵀν`; zero for a valid certificate.
    pub fn residual(&self, p: &Problem) -> Vec<Rational> {
        let n = p.dim();
        let slopes: Vec<Vec<Rational>> = self
            .active_pieces
            .iter()
            .map(|&k| p.f.pieces()[k].slope.clone())
            .collect();
        let cons: Vec<Vec<Rational>> = self
            .active_constraints
            .iter()
            .map(|&i| p.d.ineq_matrix().row(i).to_vec())
            .collect();
        let dom: Vec<Vec<Rational>> = self
            .active_domain
            .iter()
            .map(|&j| p.f.domain().ineq_matrix().row(j).to_vec())
            .collect();
        let parts = [
            combine(n, &self.lambda, &slopes),
            combine(n, &self.mu_constraints, &cons),
            combine(n, &self.mu_domain, &dom),
            combine(n, &self.nu, &self.subspace_basis),
        ];
        parts.iter().fold(zeros(n), |acc, v| crate::numeric::add(&acc, v))
    }

    pub fn verify(&self, p: &Problem) -> Result<()> {
        let ok = crate::numeric::is_zero_vec(&self.residual(p))
            && self.lambda.iter().sum::<Rational>() == int(1)
            && !self
                .lambda
                .iter()
                .chain(&self.mu_constraints)
                .chain(&self.mu_domain)
                .any(Signed::is_negative)
            && self.active_pieces == p.f.active_pieces(&self.point)?
            && self.active_constraints == p.d.active_set(&self.point)?
            && self.active_domain == p.f.domain().active_set(&self.point)?;
        if ok {
            Ok(())
        } else {
            Err(Error::CertificateViolation("optimality multipliers".into()))
        }
    }
}

/// A feasible descent direction at a non-optimal point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub point: Vec<Rational>,
    /// `h ∈ T_D(x) ∩ T_dom f(x)` with `f'(x; h) < 0`.
    pub direction: Vec<Rational>,
    pub derivative: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptimalityVerdict {
    Certified(OptimalityCertificate),
    Refuted(Refutation),
}

impl OptimalityVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, OptimalityVerdict::Certified(_))
    }
}

/// Certifies or refutes optimality of a feasible point `x`.
pub fn verify_optimal(p: &Problem, x: &[Rational]) -> Result<OptimalityVerdict> {
    check_dim("point", p.dim(), x.len())?;
    if !p.d.contains(x)? || !p.f.domain().contains(x)? {
        return Err(Error::PointNotInSet);
    }
    let theta = p.f.active_pieces(x)?;
    let active_constraints = p.d.active_set(x)?;
    let active_domain = p.f.domain().active_set(x)?;
    let subspace_basis = p.joint_rowspace();
    let mut conic: Vec<Vec<Rational>> = active_constraints
        .iter()
        .map(|&i| p.d.ineq_matrix().row(i).to_vec())
        .collect();
    conic.extend(
        active_domain
            .iter()
            .map(|&j| p.f.domain().ineq_matrix().row(j).to_vec()),
    );
    let slopes = theta.iter().map(|&k| p.f.pieces()[k].slope.clone()).collect();
    let combo = ConicCombo::new(p.dim(), slopes, conic, subspace_basis.clone())?;

    let verdict = match conic_membership(&zeros(p.dim()), &combo)? {
        Membership::Member(w) => {
            let split = active_constraints.len();
            let cert = OptimalityCertificate {
                point: x.to_vec(),
                active_pieces: theta,
                lambda: w.convex,
                mu_constraints: w.conic[..split].to_vec(),
                active_constraints,
                mu_domain: w.conic[split..].to_vec(),
                active_domain,
                subspace_basis,
                nu: w.span,
            };
            cert.verify(p)?;
            OptimalityVerdict::Certified(cert)
        }
        Membership::NotMember(sep) => {
            let h = sep.direction;
            if !p.d.tangent_cone(x)?.contains(&h)? {
                return Err(Error::Inconsistent("separating direction leaves T_D(x)".into()));
            }
            let derivative = match p.f.directional_derivative(x, &h)? {
                Extended::Finite(d) if d.is_negative() => d,
                other => {
                    return Err(Error::Inconsistent(format!(
                        "separating direction is not a descent direction (f' = {other})"
                    )))
                }
            };
            OptimalityVerdict::Refuted(Refutation {
                point: x.to_vec(),
                direction: h,
                derivative,
            })
        }
    };

    let fx = p.f.evaluate(x)?;
    let attains = match solve_primal(p)? {
        PrimalOutcome::Solved { value, .. } => fx == Extended::Finite(value),
        _ => false,
    };
    if attains != verdict.is_certified() {
        return Err(Error::Inconsistent(
            "optimality verdict disagrees with solver value".into(),
        ));
    }
    Ok(verdict)
}
