//! JSON encodings of library results. Every number is a rational string.

use polyopt::analysis::{Eaves, ExistenceReport, Explicit, FrankWolfe, OptimalityVerdict, PrimalOutcome};
use polyopt::duality::{DualOutcome, DualityReport, JointFailure, JointVerdict, WeakDuality};
use polyopt::numeric::{format_rational, Extended, Rational};
use polyopt::sets::ConicCombo;
use serde_json::{json, Value};

pub fn q(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn ext(e: &Extended) -> Value {
    Value::String(e.to_string())
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

pub fn vectors(vs: &[Vec<Rational>]) -> Value {
    Value::Array(vs.iter().map(|v| vector(v)).collect())
}

pub fn primal(o: &PrimalOutcome) -> Value {
    match o {
        PrimalOutcome::Solved { minimizer, value } => json!({
            "status": "solved",
            "point": vector(minimizer),
            "value": q(value),
        }),
        PrimalOutcome::Infeasible => json!({ "status": "infeasible" }),
        PrimalOutcome::Unbounded { ray } => json!({ "status": "unbounded", "ray": vector(ray) }),
    }
}

pub fn dual(o: &DualOutcome) -> Value {
    match o {
        DualOutcome::Solved { maximizer, value } => json!({
            "status": "solved",
            "point": vector(maximizer),
            "value": q(value),
        }),
        DualOutcome::Infeasible => json!({ "status": "infeasible" }),
        DualOutcome::Unbounded { point, ray } => json!({
            "status": "unbounded",
            "point": vector(point),
            "ray": vector(ray),
        }),
    }
}

pub fn existence(r: &ExistenceReport) -> Value {
    let bounded = r.frank_wolfe.as_ref().map(|fw| match fw {
        FrankWolfe::BoundedBelow { gamma } => json!({ "holds": true, "infimum": q(gamma) }),
        FrankWolfe::Unbounded { ray, recession } => json!({
            "holds": false,
            "ray": vector(ray),
            "recession_value": q(recession),
        }),
    });
    let recession = r.eaves.as_ref().map(|ev| match ev {
        Eaves::Confirmed => json!({ "holds": true }),
        Eaves::Counterexample { direction, recession } => json!({
            "holds": false,
            "direction": vector(direction),
            "recession_value": q(recession),
        }),
    });
    let explicit = r.explicit.as_ref().map(|ex| match ex {
        Explicit::Member(w) => json!({
            "holds": true,
            "lambda": vector(&w.lambda),
            "mu_constraints": vector(&w.mu_constraints),
            "mu_domain": vector(&w.mu_domain),
            "nu": vector(&w.nu),
            "subspace_basis": vectors(&w.subspace_basis),
        }),
        Explicit::NotMember(s) => json!({
            "holds": false,
            "direction": vector(&s.direction),
            "level": q(&s.level),
        }),
    });
    json!({
        "feasible": r.feasible,
        "solution_exists": r.solution_exists(),
        "bounded_below": bounded,
        "recession": recession,
        "explicit": explicit,
    })
}

pub fn optimality(v: &OptimalityVerdict) -> Value {
    match v {
        OptimalityVerdict::Certified(c) => json!({
            "status": "certified",
            "point": vector(&c.point),
            "active_pieces": c.active_pieces,
            "lambda": vector(&c.lambda),
            "active_constraints": c.active_constraints,
            "mu_constraints": vector(&c.mu_constraints),
            "active_domain": c.active_domain,
            "mu_domain": vector(&c.mu_domain),
            "subspace_basis": vectors(&c.subspace_basis),
            "nu": vector(&c.nu),
        }),
        OptimalityVerdict::Refuted(r) => json!({
            "status": "refuted",
            "point": vector(&r.point),
            "direction": vector(&r.direction),
            "directional_derivative": q(&r.derivative),
        }),
    }
}

pub fn joint(v: &JointVerdict) -> Value {
    match v {
        JointVerdict::Certified(c) => json!({
            "status": "certified",
            "primal_point": vector(&c.primal_point),
            "dual_point": vector(&c.dual_point),
            "value": q(&c.value),
        }),
        JointVerdict::Mismatch(m) => json!({
            "status": "mismatch",
            "failures": m.failures.iter().map(joint_failure).collect::<Vec<_>>(),
        }),
    }
}

fn joint_failure(f: &JointFailure) -> Value {
    match f {
        JointFailure::NotNormal { support, pairing } => json!({
            "check": "normal_cone",
            "support_value": ext(support),
            "pairing": q(pairing),
        }),
        JointFailure::NotSubgradient { fenchel_sum, pairing } => json!({
            "check": "subgradient",
            "fenchel_sum": ext(fenchel_sum),
            "pairing": q(pairing),
        }),
        JointFailure::ValueGap { primal, dual } => json!({
            "check": "value",
            "primal_value": q(primal),
            "dual_value": ext(dual),
        }),
    }
}

pub fn weak(w: &WeakDuality) -> Value {
    json!({
        "dual_value": ext(&w.dual_value),
        "primal_value": ext(&w.primal_value),
        "holds": w.holds,
        "tight": w.tight,
    })
}

pub fn report(r: &DualityReport) -> Value {
    json!({
        "primal": primal(&r.primal),
        "dual": dual(&r.dual),
        "gap": r.gap.as_ref().map(q),
    })
}

pub fn combo(c: &ConicCombo) -> Value {
    json!({
        "convex": vectors(&c.convex),
        "conic": vectors(&c.conic),
        "span": vectors(&c.span),
    })
}
