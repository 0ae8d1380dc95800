use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lp::{lp_solve, LinearProgram, LpOutcome};
use crate::numeric::{combine, dot, int, zeros, Rational};

/// How to read a [`ConicCombo`] whose convex part is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmptyHull {
    /// `conv ∅` contributes `{0}`: the set is the cone plus the span.
    #[default]
    PureCone,
    /// `conv ∅ = ∅`: the whole set is empty.
    EmptySet,
}

/// The set `conv(W) + cone(U) + span(S)` in `Qⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicCombo {
    pub dim: usize,
    pub convex: Vec<Vec<Rational>>,
    pub conic: Vec<Vec<Rational>>,
    pub span: Vec<Vec<Rational>>,
    pub empty_hull: EmptyHull,
}

impl ConicCombo {
    pub fn new(
        dim: usize,
        convex: Vec<Vec<Rational>>,
        conic: Vec<Vec<Rational>>,
        span: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        for v in convex.iter().chain(&conic).chain(&span) {
            check_dim("conic combination generator", dim, v.len())?;
        }
        Ok(ConicCombo {
            dim,
            convex,
            conic,
            span,
            empty_hull: EmptyHull::default(),
        })
    }

    pub fn with_empty_hull(mut self, empty_hull: EmptyHull) -> Self {
        self.empty_hull = empty_hull;
        self
    }

    /// True when the convex part is a genuine hull constraint (`Σλ = 1`).
    fn has_hull(&self) -> bool {
        !self.convex.is_empty() || self.empty_hull == EmptyHull::EmptySet
    }
}

/// Multipliers placing a target in a [`ConicCombo`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicWitness {
    /// `λ ≥ 0` over the convex generators, summing to one (when there are any).
    pub convex: Vec<Rational>,
    /// `μ ≥ 0` over the conic generators.
    pub conic: Vec<Rational>,
    /// Free coefficients over the span generators.
    pub span: Vec<Rational>,
}

impl ConicWitness {
    /// `Wᵀλ + Uᵀμ + Sᵀν`.
    pub fn point(&self, combo: &ConicCombo) -> Vec<Rational> {
        let mut p = combine(combo.dim, &self.convex, &combo.convex);
        for (o, x) in p.iter_mut().zip(combine(combo.dim, &self.conic, &combo.conic)) {
            *o += x;
        }
        for (o, x) in p.iter_mut().zip(combine(combo.dim, &self.span, &combo.span)) {
            *o += x;
        }
        p
    }

    pub fn verify(&self, combo: &ConicCombo, target: &[Rational]) -> Result<()> {
        let ok = self.convex.len() == combo.convex.len()
            && self.conic.len() == combo.conic.len()
            && self.span.len() == combo.span.len()
            && !self.convex.iter().chain(&self.conic).any(Signed::is_negative)
            && (!combo.has_hull() || self.convex.iter().sum::<Rational>().is_one())
            && self.point(combo) == target;
        if ok {
            Ok(())
        } else {
            Err(Error::CertificateViolation("conic membership witness".into()))
        }
    }
}

/// A direction `d` and level `τ` separating the target from a [`ConicCombo`]:
/// `⟨w,d⟩ ≤ τ` for convex generators, `⟨u,d⟩ ≤ 0` for conic ones,
/// `⟨s,d⟩ = 0` on the span, and `⟨target,d⟩ > τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub direction: Vec<Rational>,
    pub level: Rational,
}

impl Separator {
    pub fn verify(&self, combo: &ConicCombo, target: &[Rational]) -> Result<()> {
        let d = &self.direction;
        let ok = d.len() == combo.dim
            && combo.convex.iter().all(|w| dot(w, d) <= self.level)
            && combo.conic.iter().all(|u| !dot(u, d).is_positive())
            && combo.span.iter().all(|s| dot(s, d).is_zero())
            && dot(target, d) > self.level
            && (combo.has_hull() || self.level.is_zero());
        if ok {
            Ok(())
        } else {
            Err(Error::CertificateViolation("conic membership separator".into()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member(ConicWitness),
    NotMember(Separator),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }

    pub fn witness(&self) -> Option<&ConicWitness> {
        match self {
            Membership::Member(w) => Some(w),
            Membership::NotMember(_) => None,
        }
    }
}

/// Decides `target ∈ conv(W) + cone(U) + span(S)` with one feasibility LP.
///
/// Either outcome is returned with an exactly verified certificate; the
/// separator is read off the LP's Farkas multipliers.
pub fn conic_membership(target: &[Rational], combo: &ConicCombo) -> Result<Membership> {
    check_dim("membership target", combo.dim, target.len())?;
    let (nw, nu, ns) = (combo.convex.len(), combo.conic.len(), combo.span.len());
    let nvars = nw + nu + ns;
    let mut lp = LinearProgram::new(nvars);
    for (i, t) in target.iter().enumerate() {
        let row = combo
            .convex
            .iter()
            .chain(&combo.conic)
            .chain(&combo.span)
            .map(|g| g[i].clone())
            .collect();
        lp.add_eq(row, t.clone())?;
    }
    if combo.has_hull() {
        let mut row = zeros(nvars);
        for r in &mut row[..nw] {
            *r = Rational::one();
        }
        lp.add_eq(row, Rational::one())?;
    }
    for j in 0..nw + nu {
        let mut row = zeros(nvars);
        row[j] = int(-1);
        lp.add_le(row, Rational::zero())?;
    }

    let membership = match lp_solve(&lp)? {
        LpOutcome::Optimal(sol) => {
            let p = sol.point;
            Membership::Member(ConicWitness {
                convex: p[..nw].to_vec(),
                conic: p[nw..nw + nu].to_vec(),
                span: p[nw + nu..].to_vec(),
            })
        }
        LpOutcome::Infeasible(cert) => {
            let y = &cert.eq_multipliers;
            let direction = y[..combo.dim].iter().map(|h| -h).collect();
            let level = if combo.has_hull() {
                y[combo.dim].clone()
            } else {
                Rational::zero()
            };
            Membership::NotMember(Separator { direction, level })
        }
        LpOutcome::Unbounded(_) => unreachable!("zero objective cannot be unbounded"),
    };
    match &membership {
        Membership::Member(w) => w.verify(combo, target)?,
        Membership::NotMember(s) => s.verify(combo, target)?,
    }
    Ok(membership)
}
