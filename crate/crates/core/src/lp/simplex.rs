//! Two-phase tableau simplex over exact rationals with Bland's rule.
//!
//! Solves `min cᵀx  s.t.  Ax = b, x ≥ 0`. Dual values are read off the
//! artificial columns of the final tableau, which always hold `B⁻¹`.

use num_traits::{One, Signed, Zero};

use crate::numeric::{RMatrix, Rational};

#[derive(Debug, Clone)]
pub(crate) enum StdOutcome {
    /// Primal optimum `x` and duals `y` with `c - Aᵀy ≥ 0`.
    Optimal { x: Vec<Rational>, y: Vec<Rational> },
    /// `y` with `Aᵀy ≤ 0` and `bᵀy > 0`.
    Infeasible { y: Vec<Rational> },
    /// Feasible `x` and `d ≥ 0` with `Ad = 0`, `cᵀd < 0`.
    Unbounded { x: Vec<Rational>, ray: Vec<Rational> },
}

struct Tableau {
    t: RMatrix,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

enum Step {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let inv = self.t[(r, j)].recip();
        for k in 0..self.t.cols() {
            self.t[(r, k)] *= &inv;
        }
        self.rhs[r] *= &inv;
        for i in 0..self.t.rows() {
            if i == r || self.t[(i, j)].is_zero() {
                continue;
            }
            let factor = self.t[(i, j)].clone();
            for k in 0..self.t.cols() {
                if self.t[(r, k)].is_zero() {
                    continue;
                }
                let delta = &factor * &self.t[(r, k)];
                self.t[(i, k)] -= delta;
            }
            let delta = &factor * &self.rhs[r];
            self.rhs[i] -= delta;
        }
        self.basis[r] = j;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut rc = cost[j].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.t[(r, j)].is_zero() {
                rc -= &cost[b] * &self.t[(r, j)];
            }
        }
        rc
    }

    /// `c_Bᵀ B⁻¹`, read from the artificial block starting at column `art`.
    fn duals(&self, cost: &[Rational], art: usize) -> Vec<Rational> {
        (0..self.t.rows())
            .map(|i| {
                self.basis
                    .iter()
                    .enumerate()
                    .map(|(r, &b)| &cost[b] * &self.t[(r, art + i)])
                    .sum()
            })
            .collect()
    }

    fn run(&mut self, cost: &[Rational], enterable: usize) -> Step {
        loop {
            let entering =
                (0..enterable).find(|&j| !self.basis.contains(&j) && self.reduced_cost(cost, j).is_negative());
            let Some(j) = entering else {
                return Step::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.t.rows() {
                let a = &self.t[(r, j)];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((best_r, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*best_r]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, j),
                None => return Step::Unbounded(j),
            }
        }
    }

    fn primal(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rhs[r].clone();
            }
        }
        x
    }
}

pub(crate) fn solve_standard(a: &RMatrix, b: &[Rational], c: &[Rational]) -> StdOutcome {
    let (m, n) = (a.rows(), a.cols());
    // Flip rows so the right-hand side is nonnegative, then append artificials.
    let sign: Vec<Rational> = b
        .iter()
        .map(|bi| {
            if bi.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            }
        })
        .collect();
    let mut t = RMatrix::zeros(m, n + m);
    for i in 0..m {
        for j in 0..n {
            t[(i, j)] = &sign[i] * &a[(i, j)];
        }
        t[(i, n + i)] = Rational::one();
    }
    let rhs = b.iter().zip(&sign).map(|(bi, s)| bi * s).collect();
    let mut tab = Tableau {
        t,
        rhs,
        basis: (n..n + m).collect(),
    };
    let unflip = |y: Vec<Rational>| -> Vec<Rational> { y.iter().zip(&sign).map(|(v, s)| v * s).collect() };

    let mut phase1 = vec![Rational::zero(); n + m];
    for c1 in &mut phase1[n..] {
        *c1 = Rational::one();
    }
    match tab.run(&phase1, n + m) {
        Step::Optimal => {}
        Step::Unbounded(_) => unreachable!("phase one is bounded below by zero"),
    }
    let infeasibility: Rational = tab
        .basis
        .iter()
        .enumerate()
        .filter(|&(_, &bv)| bv >= n)
        .map(|(r, _)| tab.rhs[r].clone())
        .sum();
    if infeasibility.is_positive() {
        return StdOutcome::Infeasible {
            y: unflip(tab.duals(&phase1, n)),
        };
    }
    // Drive zero-level artificials out of the basis where the row allows it.
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.t[(r, j)].is_zero()) {
                tab.pivot(r, j);
            }
        }
    }

    let mut phase2 = c.to_vec();
    phase2.resize(n + m, Rational::zero());
    match tab.run(&phase2, n) {
        Step::Optimal => StdOutcome::Optimal {
            x: tab.primal(n),
            y: unflip(tab.duals(&phase2, n)),
        },
        Step::Unbounded(j) => {
            let mut ray = vec![Rational::zero(); n];
            ray[j] = Rational::one();
            for (r, &bv) in tab.basis.iter().enumerate() {
                if bv < n {
                    ray[bv] = -tab.t[(r, j)].clone();
                }
            }
            StdOutcome::Unbounded { x: tab.primal(n), ray }
        }
    }
}
