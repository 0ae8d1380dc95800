//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons only.
//!
//! Run with `cargo test -p polyopt-core --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Pow, Signed};
use polyopt::analysis::{
    existence_report, solution_set, solve_primal, verify_optimal, Eaves, Explicit, FrankWolfe, OptimalityVerdict,
    PrimalOutcome, Problem,
};
use polyopt::duality::{duality_report, joint_certificate, weak_duality_check, DualOutcome, DualProblem, JointVerdict};
use polyopt::functions::{GPolyFunc, Piece};
use polyopt::lp::{certified_count, violation_count};
use polyopt::numeric::{canonical_bases, int, rat, Extended, Rational};
use polyopt::sets::{generators_oracle, GPolySet};
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const CORPUS_SIZE: usize = 500;
const CORPUS_SEED: u64 = 0x5eed_0001;

fn v(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

fn ex1() -> Problem {
    let f = GPolyFunc::unconstrained(
        2,
        vec![Piece::new(v(&[1, -1]), int(1)), Piece::new(v(&[-1, -1]), int(0))],
    )
    .unwrap();
    let d = GPolySet::from_rows(2, vec![], vec![(v(&[1, 0]), int(1)), (v(&[0, 1]), int(2))]).unwrap();
    Problem::new(f, d).unwrap()
}

fn corpus() -> Vec<Problem> {
    let mut rng = common::rng(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|_| common::feasible_problem(&mut rng, 4))
        .collect()
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let elapsed = start.elapsed();
    if elapsed < limit {
        Ok(format!("{elapsed:.2?}"))
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn primal_example() -> Outcome {
    let start = Instant::now();
    let p = ex1();
    let out = solve_primal(&p).map_err(|e| e.to_string())?;
    ensure!(out.value() == Some(&rat(-3, 2)), "value {out:?}");
    let g = generators_oracle(&solution_set(&p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure!(
        g.vertices == vec![vec![rat(-1, 2), int(2)]],
        "vertices {:?}",
        g.vertices
    );
    ensure!(
        g.extreme_rays.is_empty() && g.lineality_basis.is_empty(),
        "solution set is not a point"
    );
    within(start, Duration::from_secs(1)).map(|t| format!("value -3/2, solution set {{(-1/2, 2)}}, {t}"))
}

fn dual_example() -> Outcome {
    let start = Instant::now();
    let p = ex1();
    let dp = DualProblem::new(&p);
    let out = dp.solve().map_err(|e| e.to_string())?;
    ensure!(
        out == DualOutcome::Solved {
            maximizer: v(&[0, 1]),
            value: rat(-3, 2)
        },
        "dual outcome {out:?}"
    );
    for k in 0..=4 {
        let lambda = rat(k, 4);
        let g = dp.dual_value(&[lambda.clone(), int(1)]).map_err(|e| e.to_string())?;
        let expected = rat(-3, 2) - rat(3, 2) * &lambda;
        ensure!(
            g == Extended::Finite(expected.clone()),
            "g at λ = {lambda}: {g}, expected {expected}"
        );
    }
    for w in [v(&[0, 2]), v(&[-1, 0]), v(&[2, 1])] {
        let g = dp.dual_value(&w).map_err(|e| e.to_string())?;
        ensure!(g == Extended::NegInfinity, "g{w:?} = {g}");
    }
    within(start, Duration::from_secs(1)).map(|t| format!("maximizer (0, 1), value -3/2, 8 probes exact, {t}"))
}

fn certificate_example() -> Outcome {
    let p = ex1();
    let u = vec![rat(-1, 2), int(2)];
    let OptimalityVerdict::Certified(c) = verify_optimal(&p, &u).map_err(|e| e.to_string())? else {
        return Err("optimal point refuted".into());
    };
    ensure!(
        c.active_pieces == vec![0, 1] && c.lambda == vec![rat(1, 2), rat(1, 2)],
        "λ = {:?}",
        c.lambda
    );
    ensure!(
        c.active_constraints == vec![1] && c.mu_constraints == vec![int(1)],
        "μ = {:?}",
        c.mu_constraints
    );
    ensure!(
        c.mu_domain.is_empty() && c.nu.is_empty(),
        "unexpected extra multipliers"
    );
    // ½(1, -1) + ½(-1, -1) + (0, 1), summed by hand.
    let sum: Vec<Rational> = (0..2)
        .map(|i| {
            rat(1, 2) * &p.objective().pieces()[0].slope[i]
                + rat(1, 2) * &p.objective().pieces()[1].slope[i]
                + p.constraints().ineq_matrix().row(1)[i].clone()
        })
        .collect();
    ensure!(sum == v(&[0, 0]), "multiplier identity sums to {sum:?}");
    ensure!(c.residual(&p) == v(&[0, 0]), "residual {:?}", c.residual(&p));
    match joint_certificate(&p, &u, &v(&[0, 1])).map_err(|e| e.to_string())? {
        JointVerdict::Certified(j) if j.value == rat(-3, 2) => {}
        other => return Err(format!("joint certificate {other:?}")),
    }
    Ok("½v1 + ½v2 + x2* = 0; joint certificate value -3/2".into())
}

fn is_ray(p: &Problem, ray: &[Rational]) -> Result<bool, String> {
    let d_cone = p.constraints().recession_cone().map_err(|e| e.to_string())?.cone;
    let in_cone = d_cone.contains(ray).map_err(|e| e.to_string())?;
    let f0 = p.objective().recession_value(ray).map_err(|e| e.to_string())?;
    Ok(in_cone && matches!(f0, Extended::Finite(r) if r.is_negative()))
}

fn existence_equivalence(corpus: &[Problem]) -> Outcome {
    let start = Instant::now();
    let (mut yes, mut no) = (0, 0);
    for (i, p) in corpus.iter().enumerate() {
        let r = existence_report(p).map_err(|e| format!("instance {i}: {e}"))?;
        let (fw, ev, ex) = (r.frank_wolfe.unwrap(), r.eaves.unwrap(), r.explicit.unwrap());
        let verdicts = [
            matches!(fw, FrankWolfe::BoundedBelow { .. }),
            matches!(ev, Eaves::Confirmed),
            matches!(ex, Explicit::Member(_)),
        ];
        ensure!(
            verdicts.iter().all(|&b| b == verdicts[0]),
            "instance {i}: verdicts {verdicts:?}"
        );
        if verdicts[0] {
            yes += 1;
            continue;
        }
        no += 1;
        let FrankWolfe::Unbounded { ray, .. } = &fw else {
            unreachable!()
        };
        let Eaves::Counterexample { direction, .. } = &ev else {
            unreachable!()
        };
        let Explicit::NotMember(sep) = &ex else { unreachable!() };
        for w in [ray, direction, &sep.direction] {
            ensure!(
                is_ray(p, w)?,
                "instance {i}: witness {w:?} is not a descent recession direction"
            );
        }
    }
    ensure!(yes > 0 && no > 0, "corpus not mixed: {yes} solvable, {no} unbounded");
    within(start, Duration::from_secs(60))
        .map(|t| format!("{} instances agree ({yes} solvable, {no} unbounded), {t}", corpus.len()))
}

fn weak_strong_duality(corpus: &[Problem]) -> Outcome {
    let mut rng = common::rng(CORPUS_SEED + 1);
    let (mut probes, mut finite, mut strong) = (0, 0, 0);
    for (i, p) in corpus.iter().enumerate() {
        let report = duality_report(p).map_err(|e| format!("instance {i}: {e}"))?;
        match (report.primal.value(), report.dual.value()) {
            (Some(a), Some(b)) => {
                ensure!(a == b, "instance {i}: primal {a} dual {b}");
                strong += 1;
            }
            (None, None) => {}
            (a, b) => return Err(format!("instance {i}: primal {a:?} dual {b:?}")),
        }
        let feasible = p.feasible_set();
        let n = p.dim();
        for k in 0..10 {
            let Some(u) = common::sample_point(&mut rng, &feasible) else {
                continue;
            };
            let w = match (&report.dual, k % 2) {
                (DualOutcome::Solved { maximizer, .. }, 0) => {
                    let step = common::vector(&mut rng, n);
                    let s = rat(rng.gen_range(0..=2), 4);
                    maximizer.iter().zip(&step).map(|(m, d)| m + &s * d).collect()
                }
                (DualOutcome::Unbounded { point, .. }, 0) => point.clone(),
                _ => common::vector(&mut rng, n),
            };
            let check = weak_duality_check(p, &u, &w).map_err(|e| format!("instance {i}: {e}"))?;
            ensure!(
                check.holds,
                "instance {i}: g{w:?} = {} > f{u:?} = {}",
                check.dual_value,
                check.primal_value
            );
            probes += 1;
            finite += usize::from(check.dual_value.is_finite());
        }
    }
    ensure!(probes >= 9 * corpus.len(), "only {probes} probes drawn");
    Ok(format!(
        "{probes} weak-duality probes ({finite} with finite g), {strong} instances with equal optimal values"
    ))
}

fn certificate_iff_optimal(corpus: &[Problem]) -> Outcome {
    let (mut certified, mut refuted, mut instances) = (0, 0, 0);
    for (i, p) in corpus.iter().enumerate() {
        let PrimalOutcome::Solved { minimizer, value } = solve_primal(p).map_err(|e| e.to_string())? else {
            continue;
        };
        instances += 1;
        let g = generators_oracle(&p.feasible_set()).map_err(|e| format!("instance {i}: {e}"))?;
        for x in g.vertices.iter().chain([&minimizer]) {
            let fx = p.objective().evaluate(x).map_err(|e| e.to_string())?;
            let optimal = fx == Extended::Finite(value.clone());
            match verify_optimal(p, x).map_err(|e| format!("instance {i}: {e}"))? {
                OptimalityVerdict::Certified(c) => {
                    ensure!(optimal, "instance {i}: certified {x:?} with f = {fx}, optimum {value}");
                    ensure!(
                        c.residual(p).iter().all(|r| r == &int(0)),
                        "instance {i}: residual nonzero"
                    );
                    certified += 1;
                }
                OptimalityVerdict::Refuted(r) => {
                    ensure!(!optimal, "instance {i}: refuted optimal {x:?}");
                    let h = &r.direction;
                    let tangent = p.constraints().tangent_cone(x).map_err(|e| e.to_string())?;
                    ensure!(
                        tangent.contains(h).map_err(|e| e.to_string())?,
                        "instance {i}: h ∉ T_D(x)"
                    );
                    let d = p.objective().directional_derivative(x, h).map_err(|e| e.to_string())?;
                    ensure!(
                        matches!(&d, Extended::Finite(r) if r.is_negative()),
                        "instance {i}: f'(x; h) = {d}"
                    );
                    refuted += 1;
                }
            }
        }
    }
    ensure!(certified > 0 && refuted > 0, "certified {certified}, refuted {refuted}");
    Ok(format!(
        "{instances} bounded instances: {certified} certified, {refuted} refuted"
    ))
}

/// `epi f ∩ (D × Q)` in `Q^{n+1}`.
fn epigraph(p: &Problem) -> GPolySet {
    let pad = |row: &[Rational], t: Rational| {
        let mut r = row.to_vec();
        r.push(t);
        r
    };
    let feasible = p.feasible_set();
    let eq = feasible
        .eq_matrix()
        .row_iter()
        .zip(feasible.eq_rhs())
        .map(|(r, b)| (pad(r, int(0)), b.clone()))
        .collect();
    let mut ineq: Vec<_> = feasible
        .ineq_matrix()
        .row_iter()
        .zip(feasible.ineq_rhs())
        .map(|(r, b)| (pad(r, int(0)), b.clone()))
        .collect();
    for piece in p.objective().pieces() {
        ineq.push((pad(&piece.slope, int(-1)), -piece.constant.clone()));
    }
    GPolySet::from_rows(p.dim() + 1, eq, ineq).unwrap()
}

fn vertex_oracle(corpus: &[Problem]) -> Outcome {
    let mut checked = 0;
    for (i, p) in corpus.iter().enumerate().filter(|(_, p)| p.dim() <= 3) {
        let PrimalOutcome::Solved { value, .. } = solve_primal(p).map_err(|e| e.to_string())? else {
            continue;
        };
        let g = generators_oracle(&epigraph(p)).map_err(|e| format!("instance {i}: {e}"))?;
        let n = p.dim();
        let best = g.vertices.iter().map(|x| x[n].clone()).min();
        ensure!(
            best.as_ref() == Some(&value),
            "instance {i}: vertex minimum {best:?}, solver {value}"
        );
        checked += 1;
    }
    ensure!(checked > 0, "no bounded instances with n ≤ 3");
    Ok(format!(
        "{checked} bounded instances with n ≤ 3 match the epigraph vertex minimum"
    ))
}

fn step(x: &[Rational], h: &[Rational], t: &Rational) -> Vec<Rational> {
    x.iter().zip(h).map(|(a, b)| a + t * b).collect()
}

fn eval(f: &GPolyFunc, x: &[Rational]) -> Result<Extended, String> {
    f.evaluate(x).map_err(|e| e.to_string())
}

fn finite(e: Extended) -> Result<Rational, String> {
    e.finite()
        .cloned()
        .ok_or_else(|| format!("expected a finite value, got {e}"))
}

fn recession_oracle(rng: &mut impl Rng, f: &GPolyFunc) -> Result<Option<bool>, String> {
    let Some(x) = common::sample_point(rng, f.domain()) else {
        return Ok(None);
    };
    let dir = common::vector(rng, f.dim());
    let ten = Rational::from_integer(BigInt::from(10));
    let ts: Vec<Rational> = (9..=11).map(|k: u32| Pow::pow(&ten, k)).collect();
    match f.recession_value(&dir).map_err(|e| e.to_string())? {
        Extended::Finite(r) => {
            let at: Vec<Rational> = ts
                .iter()
                .map(|t| finite(eval(f, &step(&x, &dir, t))?))
                .collect::<Result<_, String>>()?;
            let secant = |a: usize, b: usize| (&at[b] - &at[a]) / (&ts[b] - &ts[a]);
            let (s1, s2) = (secant(0, 1), secant(1, 2));
            ensure!(s1 == s2 && s1 == r, "f0+({dir:?}) = {r}, secants {s1}, {s2}");
            Ok(Some(true))
        }
        Extended::PosInfinity => {
            ensure!(
                eval(f, &step(&x, &dir, &ts[0]))? == Extended::PosInfinity,
                "f finite far along {dir:?}"
            );
            Ok(Some(false))
        }
        Extended::NegInfinity => Err("recession value -inf".into()),
    }
}

fn derivative_oracle(rng: &mut impl Rng, p: &Problem) -> Result<Option<bool>, String> {
    let f = p.objective();
    let x = match solve_primal(p).map_err(|e| e.to_string())? {
        PrimalOutcome::Solved { minimizer, .. } if rng.gen_bool(0.5) => minimizer,
        _ => match common::point_in(rng, f.domain()) {
            Some(x) => x,
            None => return Ok(None),
        },
    };
    let h = common::vector(rng, f.dim());
    let fx = finite(eval(f, &x)?)?;
    match f.directional_derivative(&x, &h).map_err(|e| e.to_string())? {
        Extended::Finite(d) => {
            let mut quotients = Vec::new();
            for k in 0..64u32 {
                let t = Rational::new(BigInt::from(1), BigInt::from(2).pow(k));
                let q = (finite(eval(f, &step(&x, &h, &t))?)? - &fx) / &t;
                if let Some(prev) = quotients.last() {
                    ensure!(&q <= prev, "quotient increased as t decreased at x = {x:?}, h = {h:?}");
                }
                quotients.push(q);
                let m = quotients.len();
                if m >= 3 && quotients[m - 1] == quotients[m - 2] && quotients[m - 2] == quotients[m - 3] {
                    ensure!(
                        quotients[m - 1] == d,
                        "f'({x:?}; {h:?}) = {d}, quotient {}",
                        quotients[m - 1]
                    );
                    return Ok(Some(true));
                }
            }
            Err(format!("quotient did not stabilize at x = {x:?}, h = {h:?}"))
        }
        Extended::PosInfinity => {
            let t = Rational::new(BigInt::from(1), BigInt::from(2).pow(60u32));
            ensure!(
                eval(f, &step(&x, &h, &t))? == Extended::PosInfinity,
                "h = {h:?} keeps x in dom f"
            );
            Ok(Some(false))
        }
        Extended::NegInfinity => Err("directional derivative -inf".into()),
    }
}

fn subgradient_oracle(rng: &mut impl Rng, f: &GPolyFunc) -> Result<Option<bool>, String> {
    let Some(x) = common::point_in(rng, f.domain()) else {
        return Ok(None);
    };
    let n = f.dim();
    let w = if rng.gen_bool(0.5) {
        common::vector(rng, n)
    } else {
        // A random element of conv{active slopes} + cone{active domain rows} + rowspace(B).
        let theta = f.active_pieces(&x).map_err(|e| e.to_string())?;
        let weights: Vec<u32> = theta.iter().map(|_| rng.gen_range(1..=3)).collect();
        let total: u32 = weights.iter().sum();
        let mut w = vec![int(0); n];
        for (&k, &c) in theta.iter().zip(&weights) {
            let c = rat(c.into(), total.into());
            for (o, s) in w.iter_mut().zip(&f.pieces()[k].slope) {
                *o += &c * s;
            }
        }
        let active: Vec<Vec<Rational>> = f
            .domain()
            .active_set(&x)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|j| f.domain().ineq_matrix().row(j).to_vec())
            .collect();
        let mut span = canonical_bases(f.domain().eq_matrix()).rowspace_basis;
        span.extend(span.clone().into_iter().map(|r| r.iter().map(|x| -x).collect()));
        let extra = common::conic_sample(rng, n, &[active, span].concat());
        w.iter().zip(&extra).map(|(a, b)| a + b).collect()
    };
    let check = f.is_subgradient(&x, &w).map_err(|e| e.to_string())?;
    let pairing: Rational = w.iter().zip(&x).map(|(a, b)| a * b).sum();
    let fenchel = check.fenchel_sum == Extended::Finite(pairing);
    ensure!(
        fenchel == check.membership.is_member() && fenchel == check.holds,
        "routes disagree at x = {x:?}, w = {w:?}"
    );
    Ok(Some(check.holds))
}

fn analytic_oracles() -> Outcome {
    let mut rng = common::rng(CORPUS_SEED + 2);
    let mut tally = [(0usize, 0usize); 3];
    while tally[0].0 < 200 {
        let p = common::feasible_problem(&mut rng, 4);
        if let Some(fin) = recession_oracle(&mut rng, p.objective())? {
            tally[0] = (tally[0].0 + 1, tally[0].1 + usize::from(fin));
        }
    }
    while tally[1].0 < 200 {
        let p = common::feasible_problem(&mut rng, 4);
        if let Some(fin) = derivative_oracle(&mut rng, &p)? {
            tally[1] = (tally[1].0 + 1, tally[1].1 + usize::from(fin));
        }
    }
    while tally[2].0 < 200 {
        let p = common::feasible_problem(&mut rng, 4);
        if let Some(holds) = subgradient_oracle(&mut rng, p.objective())? {
            tally[2] = (tally[2].0 + 1, tally[2].1 + usize::from(holds));
        }
    }
    for (name, (total, pos)) in ["recession", "derivative", "subgradient"].iter().zip(tally) {
        ensure!(pos > 0 && pos < total, "{name} cases not mixed: {pos} of {total}");
    }
    Ok(format!(
        "recession {} ({} finite), derivative {} ({} finite), subgradient {} ({} members)",
        tally[0].0, tally[0].1, tally[1].0, tally[1].1, tally[2].0, tally[2].1
    ))
}

fn lp_certification() -> Outcome {
    let (ok, bad) = (certified_count(), violation_count());
    ensure!(bad == 0, "{bad} LP outcomes failed verification");
    ensure!(ok > 0, "no LP outcomes recorded");
    Ok(format!("{ok} LP outcomes verified, 0 violations"))
}

fn run(id: u32, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    match &result {
        Ok(detail) => println!("PASS criterion {id} ({name}): {detail}"),
        Err(detail) => println!("FAIL criterion {id} ({name}): {detail}"),
    }
    result.is_ok()
}

fn main() -> ExitCode {
    let corpus = corpus();
    let results = [
        run(1, "worked example, primal", primal_example),
        run(2, "worked example, dual", dual_example),
        run(3, "worked example, certificates", certificate_example),
        run(4, "existence tests agree", || existence_equivalence(&corpus)),
        run(5, "weak and strong duality", || weak_strong_duality(&corpus)),
        run(6, "certificate iff optimal", || certificate_iff_optimal(&corpus)),
        run(7, "vertex oracle", || vertex_oracle(&corpus)),
        run(8, "analytic formula oracles", analytic_oracles),
        run(9, "LP certification", lp_certification),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
