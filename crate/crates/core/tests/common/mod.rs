//! Seeded random instances shared by the integration tests.
//!
//! Sizes: `n ≤ 4`, at most 6 constraints in `D`, at most 4 pieces, entries
//! `p/q` with `|p| ≤ 9` and `1 ≤ q ≤ 9`.

#![allow(dead_code)]

use num_traits::Signed;
use polyopt::analysis::Problem;
use polyopt::functions::{GPolyFunc, Piece};
use polyopt::lp::{lp_solve, LinearProgram, LpOutcome};
use polyopt::numeric::{int, rat, Rational};
use polyopt::sets::GPolySet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Row = (Vec<Rational>, Rational);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn entry(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

/// Mostly small integers, so that slopes often tie and faces are degenerate.
pub fn coarse(rng: &mut impl Rng) -> Rational {
    if rng.gen_bool(0.6) {
        int(rng.gen_range(-2..=2))
    } else {
        entry(rng)
    }
}

pub fn vector(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| coarse(rng)).collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A row through or above `anchor`, or with an unrelated right-hand side.
fn row_at(rng: &mut impl Rng, n: usize, anchor: &[Rational], equality: bool) -> Row {
    let row = vector(rng, n);
    let rhs = if rng.gen_bool(0.1) {
        entry(rng)
    } else if equality || rng.gen_bool(0.3) {
        dot(&row, anchor)
    } else {
        dot(&row, anchor) + int(rng.gen_range(0..=3))
    };
    (row, rhs)
}

fn random_set(rng: &mut impl Rng, n: usize, anchor: &[Rational], max_rows: usize) -> GPolySet {
    let rows = rng.gen_range(0..=max_rows);
    let eqs = if rows > 0 && rng.gen_bool(0.25) { 1 } else { 0 };
    let eq = (0..eqs).map(|_| row_at(rng, n, anchor, true)).collect();
    let ineq = (eqs..rows).map(|_| row_at(rng, n, anchor, false)).collect();
    GPolySet::from_rows(n, eq, ineq).expect("rows match dimension")
}

/// A random feasible problem in dimension `1..=max_dim`.
pub fn feasible_problem(rng: &mut impl Rng, max_dim: usize) -> Problem {
    loop {
        let n = rng.gen_range(1..=max_dim);
        let anchor = vector(rng, n);
        let pieces = (0..rng.gen_range(1..=4))
            .map(|_| Piece::new(vector(rng, n), entry(rng)))
            .collect();
        let domain = if rng.gen_bool(0.3) {
            random_set(rng, n, &anchor, 2)
        } else {
            GPolySet::whole_space(n)
        };
        let Ok(f) = GPolyFunc::new(pieces, domain) else {
            continue;
        };
        let d = random_set(rng, n, &anchor, 6);
        let p = Problem::new(f, d).expect("dimensions agree");
        if p.is_feasible() {
            return p;
        }
    }
}

/// A feasible problem whose minimum is attained.
pub fn bounded_problem(rng: &mut impl Rng, max_dim: usize) -> Problem {
    loop {
        let p = feasible_problem(rng, max_dim);
        if matches!(
            polyopt::analysis::solve_primal(&p).expect("solvable"),
            polyopt::analysis::PrimalOutcome::Solved { .. }
        ) {
            return p;
        }
    }
}

/// A point of `set ∩ [-5, 5]ⁿ`, from a random linear objective; `None` if that box misses the set.
pub fn point_in(rng: &mut impl Rng, set: &GPolySet) -> Option<Vec<Rational>> {
    let n = set.dim();
    let mut lp = LinearProgram::new(n).with_cost(vector(rng, n));
    for (row, rhs) in set.eq_matrix().row_iter().zip(set.eq_rhs()) {
        lp.add_eq(row.to_vec(), rhs.clone()).unwrap();
    }
    for (row, rhs) in set.ineq_matrix().row_iter().zip(set.ineq_rhs()) {
        lp.add_le(row.to_vec(), rhs.clone()).unwrap();
    }
    for i in 0..n {
        let mut e = vec![int(0); n];
        e[i] = int(1);
        lp.add_le(e.clone(), int(5)).unwrap();
        e[i] = int(-1);
        lp.add_le(e, int(5)).unwrap();
    }
    match lp_solve(&lp).expect("certified") {
        LpOutcome::Optimal(s) => Some(s.point),
        _ => None,
    }
}

/// A point of `set`, mixed toward the interior by averaging two box-LP vertices.
pub fn sample_point(rng: &mut impl Rng, set: &GPolySet) -> Option<Vec<Rational>> {
    let a = point_in(rng, set)?;
    let b = point_in(rng, set)?;
    let t = rat(rng.gen_range(0..=4), 4);
    Some(a.iter().zip(&b).map(|(x, y)| &t * x + (int(1) - &t) * y).collect())
}

/// A random element of `cone(rows)`.
pub fn conic_sample(rng: &mut impl Rng, n: usize, rows: &[Vec<Rational>]) -> Vec<Rational> {
    let mut out = vec![int(0); n];
    for r in rows {
        let c = int(rng.gen_range(0..=3));
        for (o, x) in out.iter_mut().zip(r) {
            *o += &c * x;
        }
    }
    out
}

pub fn nonneg(r: &Rational) -> bool {
    !r.is_negative()
}
