//! Brute-force V-representation of small polyhedra, used as a test oracle.

use num_traits::{Signed, Zero};

use super::GPolySet;
use crate::error::{Error, Result};
use crate::numeric::{canonical_bases, rref, solve_linear, LinearSolve, Rational};

/// Dimension above which enumeration is refused.
pub const DEFAULT_ORACLE_LIMIT: usize = 6;

/// `D = conv(vertices) + cone(extreme_rays) + span(lineality_basis)`.
///
/// Vertices and rays describe the pointed part `D ∩ L^⊥`, where `L` is the
/// lineality space. Rays are scaled so their first nonzero entry is ±1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    pub vertices: Vec<Vec<Rational>>,
    pub extreme_rays: Vec<Vec<Rational>>,
    pub lineality_basis: Vec<Vec<Rational>>,
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= m {
        rec(0, m, k, &mut Vec::new(), &mut out);
    }
    out
}

fn normalize_ray(r: Vec<Rational>) -> Vec<Rational> {
    let lead = r.iter().find(|x| !x.is_zero()).expect("nonzero ray").abs();
    r.into_iter().map(|x| x / &lead).collect()
}

pub fn generators_oracle(d: &GPolySet) -> Result<Generators> {
    generators_oracle_with_limit(d, DEFAULT_ORACLE_LIMIT)
}

/// Enumerates vertices from every `n`-rank choice of tight rows and extreme
/// rays from every `(n-1)`-rank choice. Exponential; meant for tiny instances.
pub fn generators_oracle_with_limit(d: &GPolySet, limit: usize) -> Result<Generators> {
    let n = d.dim();
    if n > limit {
        return Err(Error::ScaleExceeded { dim: n, limit });
    }
    let g = d.ineq_matrix();
    let lineality_basis = canonical_bases(&d.eq_matrix().vstack(g)).kernel_basis;

    // Restrict to L^⊥ so the remaining polyhedron is pointed.
    let mut base = d.eq_matrix().clone();
    let mut base_rhs = d.eq_rhs().to_vec();
    for l in &lineality_basis {
        base.push_row(l.clone())?;
        base_rhs.push(Rational::zero());
    }
    let base_rank = rref(&base).rank();

    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    for s in subsets(g.rows(), n - base_rank) {
        let m = base.vstack(&g.select_rows(&s));
        if rref(&m).rank() != n {
            continue;
        }
        let mut rhs = base_rhs.clone();
        rhs.extend(s.iter().map(|&i| d.ineq_rhs()[i].clone()));
        if let LinearSolve::Solution(x) = solve_linear(&m, &rhs) {
            if d.contains(&x)? && !vertices.contains(&x) {
                vertices.push(x);
            }
        }
    }
    vertices.sort();

    let mut extreme_rays: Vec<Vec<Rational>> = Vec::new();
    if !vertices.is_empty() && n > base_rank {
        for s in subsets(g.rows(), n - 1 - base_rank) {
            let m = base.vstack(&g.select_rows(&s));
            let kernel = canonical_bases(&m).kernel_basis;
            if kernel.len() != 1 {
                continue;
            }
            let r = kernel.into_iter().next().expect("one kernel vector");
            for cand in [r.clone(), r.iter().map(|x| -x).collect()] {
                if g.mul_vec(&cand).iter().all(|v| !v.is_positive()) {
                    let cand = normalize_ray(cand);
                    if !extreme_rays.contains(&cand) {
                        extreme_rays.push(cand);
                    }
                }
            }
        }
    }
    extreme_rays.sort();

    Ok(Generators {
        vertices,
        extreme_rays,
        lineality_basis,
    })
}

impl Generators {
    /// True when the generated set is a single point.
    pub fn is_singleton(&self) -> bool {
        self.vertices.len() == 1 && self.extreme_rays.is_empty() && self.lineality_basis.is_empty()
    }
}
