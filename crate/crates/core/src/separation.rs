//! Strict separation of `a(μ)` from `a(μ')` and the projective lift onto
//! `E' = { y ∈ R^{d+1} : ⟨y, (w, -α)⟩ = 1 }`.
//!
//! The point `(a(v), 1)` spans a line through the origin; the lift is where
//! that line pierces `E'`, namely `(a(v), 1) / (⟨a(v), w⟩ - α)`. The scaling
//! factor is negative exactly on the `μ` side of the hyperplane, which is
//! where the signs of the final affine coefficients come from.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{int, Point, Scalar};
use crate::lp::{lp_solve, LinearProgram, LpOutcome, Relation};
use crate::model::{Configuration, Face};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparationError {
    #[error("both sides of the separation must be nonempty")]
    EmptySide,
    #[error("conv(a(mu)) and conv(a(mu')) intersect; no strictly separating hyperplane exists")]
    SeparationInfeasible,
    #[error("vertex {0} lies on the hyperplane; the lift is undefined")]
    DegenerateLift(usize),
}

/// `H = { x : ⟨x, w⟩ = α }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub w: Vec<Scalar>,
    pub alpha: Scalar,
}

impl Hyperplane {
    /// `⟨x, w⟩ - α`.
    pub fn offset(&self, x: &Point) -> Scalar {
        x.dot(&self.w) - &self.alpha
    }

    /// True when `below` lies strictly in `⟨x,w⟩ < α` and `above` strictly in `⟨x,w⟩ > α`.
    pub fn strictly_separates<'a>(
        &self,
        below: impl IntoIterator<Item = &'a Point>,
        above: impl IntoIterator<Item = &'a Point>,
    ) -> bool {
        !self.w.iter().all(Zero::is_zero)
            && below.into_iter().all(|p| p.dim() == self.w.len() && self.offset(p).is_negative())
            && above.into_iter().all(|p| p.dim() == self.w.len() && self.offset(p).is_positive())
    }
}

/// Finds `(w, α)` with `⟨a(v), w⟩ ≤ α - 1` on `mu` and `≥ α + 1` on its complement.
///
/// Among all such hyperplanes the LP picks one minimizing `‖w‖₁`; remaining
/// ties are broken by the simplex pivot rule.
pub fn separating_hyperplane(config: &Configuration, mu: &Face) -> Result<Hyperplane, SeparationError> {
    let other = mu.complement(config.len());
    if mu.is_empty() || other.is_empty() {
        return Err(SeparationError::EmptySide);
    }
    let d = config.d();
    // Columns: w_0..w_{d-1}, α, t_0..t_{d-1} with t_k ≥ |w_k|.
    let n = 2 * d + 1;
    let mut lp = LinearProgram::new(n);
    for k in 0..=d {
        lp.set_free(k);
    }
    let row = |p: &Point| -> Vec<Scalar> {
        let mut coeffs = vec![Scalar::zero(); n];
        coeffs[..d].clone_from_slice(p.coords());
        coeffs[d] = -Scalar::one();
        coeffs
    };
    for &v in mu.vertices() {
        lp.add_constraint(row(config.point(v)), Relation::Le, -Scalar::one());
    }
    for &v in other.vertices() {
        lp.add_constraint(row(config.point(v)), Relation::Ge, Scalar::one());
    }
    for k in 0..d {
        for sign in [1, -1] {
            let mut coeffs = vec![Scalar::zero(); n];
            coeffs[d + 1 + k] = Scalar::one();
            coeffs[k] = int(sign);
            lp.add_constraint(coeffs, Relation::Ge, Scalar::zero());
        }
    }
    let mut objective = vec![Scalar::zero(); n];
    for c in objective.iter_mut().skip(d + 1) {
        *c = Scalar::one();
    }
    lp.minimize(objective);
    let outcome = lp_solve(&lp).expect("separation LP is well formed");
    let x = match outcome {
        LpOutcome::Optimal(sol) => sol.point,
        LpOutcome::Infeasible => return Err(SeparationError::SeparationInfeasible),
        LpOutcome::Unbounded => unreachable!("objective is bounded below by zero"),
    };
    let h = Hyperplane { w: x[..d].to_vec(), alpha: x[d].clone() };
    debug_assert!(h.strictly_separates(
        mu.vertices().iter().map(|&v| config.point(v)),
        other.vertices().iter().map(|&v| config.point(v)),
    ));
    Ok(h)
}

/// Hyperplane used when `μ` is empty: `w = e_1`, `α` one below the smallest first coordinate.
pub fn trivial_hyperplane(config: &Configuration) -> Hyperplane {
    let d = config.d();
    let mut w = vec![Scalar::zero(); d];
    w[0] = Scalar::one();
    let min = config.points().iter().map(|p| p[0].clone()).min().expect("configuration has points");
    Hyperplane { w, alpha: min - Scalar::one() }
}

/// The configuration carried onto `E'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedConfiguration {
    pub lifted_points: Vec<Point>,
    /// `w' = (w, -α)`.
    pub w_prime: Vec<Scalar>,
    /// `⟨a(v_i), w⟩ - α`, indexed by vertex.
    pub sign_factors: Vec<Scalar>,
}

impl LiftedConfiguration {
    /// True when every lifted point satisfies `⟨â(v), w'⟩ = 1`.
    pub fn on_target_hyperplane(&self) -> bool {
        self.lifted_points.iter().all(|p| p.dot(&self.w_prime).is_one())
    }
}

/// `â(v_i) = (a(v_i), 1) / (⟨a(v_i), w⟩ - α)`.
pub fn lift_configuration(config: &Configuration, h: &Hyperplane) -> Result<LiftedConfiguration, SeparationError> {
    let mut w_prime = h.w.clone();
    w_prime.push(-h.alpha.clone());
    let mut lifted_points = Vec::with_capacity(config.len());
    let mut sign_factors = Vec::with_capacity(config.len());
    for (v, p) in config.points().iter().enumerate() {
        let factor = h.offset(p);
        if factor.is_zero() {
            return Err(SeparationError::DegenerateLift(v));
        }
        lifted_points.push(p.extended(Scalar::one()).scaled(&factor.recip()));
        sign_factors.push(factor);
    }
    Ok(LiftedConfiguration { lifted_points, w_prime, sign_factors })
}

/// A common point of `conv(a(mu))` and `conv(a(mu'))`, if one exists.
///
/// Independent of [`separating_hyperplane`]: the two LPs are dual, so exactly
/// one of them is feasible.
pub fn hull_common_point(config: &Configuration, mu: &Face) -> Option<Point> {
    let other = mu.complement(config.len());
    let d = config.d();
    let (a, b) = (mu.vertices(), other.vertices());
    let n = a.len() + b.len();
    let mut lp = LinearProgram::new(n);
    let mut sum_a = vec![Scalar::zero(); n];
    let mut sum_b = vec![Scalar::zero(); n];
    for i in 0..a.len() {
        sum_a[i] = Scalar::one();
    }
    for i in a.len()..n {
        sum_b[i] = Scalar::one();
    }
    lp.add_constraint(sum_a, Relation::Eq, Scalar::one());
    lp.add_constraint(sum_b, Relation::Eq, Scalar::one());
    for k in 0..d {
        let mut coeffs: Vec<Scalar> = a.iter().map(|&v| config.point(v)[k].clone()).collect();
        coeffs.extend(b.iter().map(|&v| -config.point(v)[k].clone()));
        lp.add_constraint(coeffs, Relation::Eq, Scalar::zero());
    }
    let x = lp_solve(&lp).expect("hull LP is well formed").into_point()?;
    let mut p = Point::zero(d);
    for (lambda, &v) in x.iter().zip(a) {
        p.add_scaled(config.point(v), lambda);
    }
    Some(p)
}

/// Validates a hyperplane against a configuration: strict separation of `mu`
/// (below) from its complement (above).
pub fn separates(config: &Configuration, mu: &Face, h: &Hyperplane) -> bool {
    let other = mu.complement(config.len());
    h.w.len() == config.d()
        && h.strictly_separates(
            mu.vertices().iter().map(|&v| config.point(v)),
            other.vertices().iter().map(|&v| config.point(v)),
        )
}
