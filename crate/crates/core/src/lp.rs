//! Small dense exact linear programming.
//!
//! Two-phase primal simplex over [`Scalar`] with Bland's rule: the entering
//! column is the lowest-indexed improving column and ties in the ratio test
//! go to the lowest-indexed basic variable. Bland's rule cannot cycle, and
//! with a fixed variable ordering the returned vertex is a pure function of
//! the program.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{dot, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Scalar>,
    pub relation: Relation,
    pub rhs: Scalar,
}

impl Constraint {
    pub fn is_satisfied_by(&self, x: &[Scalar]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

/// Bounds on one variable; `None` on a side means unbounded on that side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarBounds {
    pub lower: Option<Scalar>,
    pub upper: Option<Scalar>,
}

impl VarBounds {
    pub fn free() -> Self {
        VarBounds { lower: None, upper: None }
    }

    pub fn nonnegative() -> Self {
        VarBounds { lower: Some(Scalar::zero()), upper: None }
    }

    pub fn nonpositive() -> Self {
        VarBounds { lower: None, upper: Some(Scalar::zero()) }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.lower.as_ref().map_or(true, |l| x >= l) && self.upper.as_ref().map_or(true, |u| x <= u)
    }
}

/// `maximize objective · x` subject to `constraints` and per-variable bounds.
///
/// Variables default to `x ≥ 0`. Without an objective the program is a pure
/// feasibility problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    constraints: Vec<Constraint>,
    objective: Option<Vec<Scalar>>,
    bounds: Vec<VarBounds>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("constraint {index} has {got} coefficients, expected {expected}")]
    ConstraintLength { index: usize, got: usize, expected: usize },
    #[error("objective has {got} coefficients, expected {expected}")]
    ObjectiveLength { got: usize, expected: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub point: Vec<Scalar>,
    /// Objective value at `point`; zero for feasibility problems.
    pub value: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Scalar]> {
        match self {
            LpOutcome::Optimal(sol) => Some(&sol.point),
            _ => None,
        }
    }

    pub fn into_point(self) -> Option<Vec<Scalar>> {
        match self {
            LpOutcome::Optimal(sol) => Some(sol.point),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            constraints: Vec::new(),
            objective: None,
            bounds: vec![VarBounds::nonnegative(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[VarBounds] {
        &self.bounds
    }

    pub fn objective(&self) -> Option<&[Scalar]> {
        self.objective.as_deref()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Scalar>, relation: Relation, rhs: Scalar) -> &mut Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn set_bounds(&mut self, var: usize, bounds: VarBounds) -> &mut Self {
        self.bounds[var] = bounds;
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, VarBounds::free())
    }

    pub fn maximize(&mut self, objective: Vec<Scalar>) -> &mut Self {
        self.objective = Some(objective);
        self
    }

    pub fn minimize(&mut self, objective: Vec<Scalar>) -> &mut Self {
        self.objective = Some(objective.into_iter().map(|c| -c).collect());
        self
    }

    fn validate(&self) -> Result<(), LpError> {
        for (index, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(LpError::ConstraintLength { index, got: c.coeffs.len(), expected: self.num_vars });
            }
        }
        if let Some(obj) = &self.objective {
            if obj.len() != self.num_vars {
                return Err(LpError::ObjectiveLength { got: obj.len(), expected: self.num_vars });
            }
        }
        Ok(())
    }

    /// Checks every constraint and bound exactly.
    pub fn is_feasible_point(&self, x: &[Scalar]) -> bool {
        x.len() == self.num_vars
            && self.constraints.iter().all(|c| c.is_satisfied_by(x))
            && self.bounds.iter().zip(x).all(|(b, v)| b.contains(v))
    }
}

/// How an original variable is expressed through nonnegative columns:
/// `x = offset + sign_plus·y_plus - y_minus`.
struct VarMap {
    offset: Scalar,
    plus: Option<(usize, bool)>,
    minus: Option<usize>,
}

struct Tableau {
    rows: Vec<Vec<Scalar>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Scalar {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Scalar], j: usize) -> Scalar {
        let mut z = cost[j].clone();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if !cost[b].is_zero() && !row[j].is_zero() {
                z -= &cost[b] * &row[j];
            }
        }
        z
    }

    /// Maximizes `cost · y` over columns `< allowed`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Scalar], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_positive());
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, Scalar)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }

    fn value(&self, j: usize) -> Scalar {
        self.basis
            .iter()
            .position(|&b| b == j)
            .map_or_else(Scalar::zero, |i| self.rhs(i).clone())
    }
}

/// Solves `lp` exactly.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;

    // Standard form: every column is nonnegative.
    let mut maps = Vec::with_capacity(lp.num_vars);
    let mut extra_rows: Vec<(usize, Scalar)> = Vec::new();
    let mut ncols = 0;
    for b in &lp.bounds {
        let map = match (&b.lower, &b.upper) {
            (Some(l), u) => {
                let col = ncols;
                ncols += 1;
                if let Some(u) = u {
                    if u < l {
                        return Ok(LpOutcome::Infeasible);
                    }
                    extra_rows.push((col, u - l));
                }
                VarMap { offset: l.clone(), plus: Some((col, true)), minus: None }
            }
            (None, Some(u)) => {
                let col = ncols;
                ncols += 1;
                VarMap { offset: u.clone(), plus: Some((col, false)), minus: None }
            }
            (None, None) => {
                let col = ncols;
                ncols += 2;
                VarMap { offset: Scalar::zero(), plus: Some((col, true)), minus: Some(col + 1) }
            }
        };
        maps.push(map);
    }
    let std_vars = ncols;

    let mut std_rows: Vec<(Vec<Scalar>, Relation, Scalar)> = Vec::new();
    for c in &lp.constraints {
        let mut row = vec![Scalar::zero(); std_vars];
        let mut rhs = c.rhs.clone();
        for (coef, map) in c.coeffs.iter().zip(&maps) {
            if coef.is_zero() {
                continue;
            }
            rhs -= coef * &map.offset;
            if let Some((col, positive)) = map.plus {
                row[col] = if positive { coef.clone() } else { -coef };
            }
            if let Some(col) = map.minus {
                row[col] = -coef;
            }
        }
        std_rows.push((row, c.relation, rhs));
    }
    for (col, cap) in extra_rows {
        let mut row = vec![Scalar::zero(); std_vars];
        row[col] = Scalar::from_integer(1.into());
        std_rows.push((row, Relation::Le, cap));
    }

    // Flip rows so every rhs is nonnegative.
    for (row, rel, rhs) in std_rows.iter_mut() {
        if rhs.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            *rhs = -rhs.clone();
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let m = std_rows.len();
    let n_slack = std_rows.iter().filter(|(_, rel, _)| *rel != Relation::Eq).count();
    let n_art = std_rows.iter().filter(|(_, rel, _)| *rel != Relation::Le).count();
    let art_start = std_vars + n_slack;
    let cols = art_start + n_art;
    let one = Scalar::from_integer(1.into());

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (std_vars, art_start);
    for (coeffs, rel, rhs) in std_rows {
        let mut row = coeffs;
        row.resize(cols + 1, Scalar::zero());
        row[cols] = rhs;
        match rel {
            Relation::Le => {
                row[next_slack] = one.clone();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -one.clone();
                next_slack += 1;
                row[next_art] = one.clone();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = one.clone();
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, cols };

    if n_art > 0 {
        let mut phase1 = vec![Scalar::zero(); cols];
        for c in phase1.iter_mut().skip(art_start) {
            *c = -one.clone();
        }
        tab.optimize(&phase1, cols);
        let infeasibility: Scalar = (art_start..cols).map(|j| tab.value(j)).sum();
        if infeasibility.is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= art_start {
                match (0..art_start).find(|&j| !tab.rows[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = vec![Scalar::zero(); cols];
    if let Some(obj) = &lp.objective {
        for (c, map) in obj.iter().zip(&maps) {
            if let Some((col, positive)) = map.plus {
                cost[col] = if positive { c.clone() } else { -c };
            }
            if let Some(col) = map.minus {
                cost[col] = -c;
            }
        }
        if !tab.optimize(&cost, art_start) {
            return Ok(LpOutcome::Unbounded);
        }
    }

    let point: Vec<Scalar> = maps
        .iter()
        .map(|map| {
            let mut x = map.offset.clone();
            if let Some((col, positive)) = map.plus {
                let v = tab.value(col);
                if positive {
                    x += v;
                } else {
                    x -= v;
                }
            }
            if let Some(col) = map.minus {
                x -= tab.value(col);
            }
            x
        })
        .collect();
    let value = lp.objective.as_ref().map_or_else(Scalar::zero, |obj| dot(obj, &point));
    debug_assert!(lp.is_feasible_point(&point));
    Ok(LpOutcome::Optimal(LpSolution { point, value }))
}
