//! Dense exact linear algebra.
//!
//! Systems are brought to row echelon form by fraction-free (Bareiss)
//! elimination over the integers after clearing each row's denominators. The
//! pivot in every column is the first nonzero entry at or below the current
//! row, so results are deterministic. Back substitution then runs over the
//! rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{Point, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix rows have inconsistent lengths")]
    Ragged,
    #[error("right-hand side has {rhs} entries but the matrix has {rows} rows")]
    RhsLength { rows: usize, rhs: usize },
    #[error("linear system is inconsistent")]
    NoSolution,
    #[error("points are affinely independent")]
    NoDependence,
    #[error("points have mixed dimensions")]
    MixedDimensions,
}

/// Solution set of a consistent system: `particular + span(nullspace)`.
///
/// `particular` sets every free variable to zero. `nullspace` holds one basis
/// vector per free column, with that column set to one and the other free
/// columns set to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: Vec<Scalar>,
    pub nullspace: Vec<Vec<Scalar>>,
}

impl LinearSolution {
    pub fn is_unique(&self) -> bool {
        self.nullspace.is_empty()
    }
}

struct Echelon {
    /// Rows in echelon form, integer entries, last column is the rhs.
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    cols: usize,
}

fn clear_denominators(row: &[Scalar], rhs: &Scalar) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .chain(std::iter::once(rhs))
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .chain(std::iter::once(rhs))
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

fn bareiss_echelon(matrix: &[Vec<Scalar>], rhs: &[Scalar]) -> Echelon {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| clear_denominators(row, b))
        .collect();
    let m = rows.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (top, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[col];
        for row in rest.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..=cols {
                // Sylvester's identity guarantees the division is exact.
                let num = pivot * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero());
                row[j] = num / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot.clone();
        pivots.push(col);
        r += 1;
    }
    Echelon { rows, pivots, cols }
}

fn back_substitute(ech: &Echelon, free_values: &[(usize, Scalar)], homogeneous: bool) -> Vec<Scalar> {
    let mut x = vec![Scalar::zero(); ech.cols];
    for (col, v) in free_values {
        x[*col] = v.clone();
    }
    for (k, &pc) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.rows[k];
        let mut acc = if homogeneous {
            Scalar::zero()
        } else {
            BigRational::from_integer(row[ech.cols].clone())
        };
        for j in pc + 1..ech.cols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= &x[j] * BigRational::from_integer(row[j].clone());
            }
        }
        x[pc] = acc / BigRational::from_integer(row[pc].clone());
    }
    x
}

/// Solves `matrix · x = rhs` exactly.
///
/// Returns one solution together with a basis of the nullspace; the solution
/// is unique when the nullspace is empty.
pub fn solve_linear_system(matrix: &[Vec<Scalar>], rhs: &[Scalar]) -> Result<LinearSolution, LinalgError> {
    if rhs.len() != matrix.len() {
        return Err(LinalgError::RhsLength { rows: matrix.len(), rhs: rhs.len() });
    }
    let cols = matrix.first().map_or(0, Vec::len);
    if matrix.iter().any(|row| row.len() != cols) {
        return Err(LinalgError::Ragged);
    }
    let ech = bareiss_echelon(matrix, rhs);
    let rank = ech.pivots.len();
    if ech.rows[rank..].iter().any(|row| !row[cols].is_zero()) {
        return Err(LinalgError::NoSolution);
    }
    let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
    let particular = back_substitute(&ech, &[], false);
    let nullspace = free
        .iter()
        .map(|&f| back_substitute(&ech, &[(f, Scalar::one())], true))
        .collect();
    Ok(LinearSolution { particular, nullspace })
}

/// Nontrivial affine dependence `λ` of `points`: `Σλ_i = 0` and `Σλ_i·p_i = 0`.
///
/// The returned vector is scaled so that its first nonzero entry is 1.
pub fn affine_dependence(points: &[Point]) -> Result<Vec<Scalar>, LinalgError> {
    let dim = points.first().map_or(0, Point::dim);
    if points.iter().any(|p| p.dim() != dim) {
        return Err(LinalgError::MixedDimensions);
    }
    let mut matrix: Vec<Vec<Scalar>> = (0..dim)
        .map(|k| points.iter().map(|p| p[k].clone()).collect())
        .collect();
    matrix.push(vec![Scalar::one(); points.len()]);
    let rhs = vec![Scalar::zero(); matrix.len()];
    let sol = solve_linear_system(&matrix, &rhs)?;
    let mut lambda = sol.nullspace.into_iter().next().ok_or(LinalgError::NoDependence)?;
    let lead = lambda.iter().find(|x| !x.is_zero()).cloned().ok_or(LinalgError::NoDependence)?;
    for x in lambda.iter_mut() {
        *x /= &lead;
    }
    Ok(lambda)
}

pub fn mat_vec(matrix: &[Vec<Scalar>], x: &[Scalar]) -> Vec<Scalar> {
    matrix.iter().map(|row| crate::arith::dot(row, x)).collect()
}
