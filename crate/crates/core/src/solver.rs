//! Exhaustive Tverberg and rainbow Tverberg search.
//!
//! Candidate partitions are visited in a fixed order: blocks are listed by
//! minimum element and partitions compare lexicographically as sequences of
//! sorted blocks (a proper prefix sorts first). The first candidate whose
//! convex hulls share a point, found by an exact LP, is returned.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{combination, Point, Scalar};
use crate::linalg::{affine_dependence, LinalgError};
use crate::lp::{lp_solve, LinearProgram, Relation};
use crate::model::{canonical_order, Coloring, TverbergPartition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("need at least r = {r} points, got {n}")]
    TooFewPoints { n: usize, r: usize },
    #[error("points have mixed dimensions")]
    MixedDimensions,
    #[error("coloring covers {got} vertices but there are {expected} points")]
    ColoringSize { expected: usize, got: usize },
    #[error("no partition with intersecting hulls among {searched} candidates")]
    SearchExhausted { searched: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Visits every partition of `0..n` into exactly `r` nonempty blocks in
/// search order, skipping non-rainbow blocks when `coloring` is given.
pub fn visit_partitions<F>(n: usize, r: usize, coloring: Option<&Coloring>, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[Vec<usize>]) -> ControlFlow<()>,
{
    if r == 0 || n < r {
        return ControlFlow::Continue(());
    }
    let colors = coloring.map(Coloring::color_map);
    let mut used = vec![false; n];
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(r);
    next_block(n, r, colors.as_deref(), &mut used, &mut blocks, &mut visit)
}

fn next_block<F>(
    n: usize,
    r: usize,
    colors: Option<&[usize]>,
    used: &mut [bool],
    blocks: &mut Vec<Vec<usize>>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[Vec<usize>]) -> ControlFlow<()>,
{
    let remaining = used.iter().filter(|u| !**u).count();
    let blocks_left = r - blocks.len();
    if blocks_left == 0 {
        return if remaining == 0 { visit(blocks) } else { ControlFlow::Continue(()) };
    }
    if remaining < blocks_left {
        return ControlFlow::Continue(());
    }
    let first = used.iter().position(|u| !*u).expect("remaining > 0");
    used[first] = true;
    blocks.push(vec![first]);
    let res = grow_block(n, r, colors, used, blocks, first, visit);
    blocks.pop();
    used[first] = false;
    res
}

/// Depth-first over supersets of the current last block, in prefix-lexicographic order.
fn grow_block<F>(
    n: usize,
    r: usize,
    colors: Option<&[usize]>,
    used: &mut [bool],
    blocks: &mut Vec<Vec<usize>>,
    last: usize,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[Vec<usize>]) -> ControlFlow<()>,
{
    next_block(n, r, colors, used, blocks, visit)?;
    for e in last + 1..n {
        if used[e] {
            continue;
        }
        let block = blocks.last().expect("block in progress");
        if let Some(colors) = colors {
            if block.iter().any(|&v| colors[v] == colors[e]) {
                continue;
            }
        }
        used[e] = true;
        blocks.last_mut().expect("block in progress").push(e);
        let res = grow_block(n, r, colors, used, blocks, e, visit);
        blocks.last_mut().expect("block in progress").pop();
        used[e] = false;
        res?;
    }
    ControlFlow::Continue(())
}

/// All candidate partitions, in search order.
pub fn enumerate_partitions(n: usize, r: usize, coloring: Option<&Coloring>) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let _ = visit_partitions(n, r, coloring, |p| {
        out.push(p.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// A common point of several convex hulls with its convex coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullIntersection {
    pub witness: Point,
    /// One coefficient vector per block, aligned with the block's points.
    pub coefficients: Vec<Vec<Scalar>>,
}

/// Decides whether `conv(B_1) ∩ … ∩ conv(B_k)` is nonempty and returns a common point.
///
/// One nonnegative variable per point; each block's variables sum to 1 and
/// every block's combination is tied to the first block's.
pub fn hulls_intersect(blocks: &[Vec<Point>]) -> Option<HullIntersection> {
    let dim = blocks.iter().flatten().next().map_or(0, Point::dim);
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| {
            let start = *acc;
            *acc += b.len();
            Some(start)
        })
        .collect();
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut lp = LinearProgram::new(n);
    for (b, &off) in blocks.iter().zip(&offsets) {
        let mut coeffs = vec![Scalar::zero(); n];
        for c in coeffs.iter_mut().skip(off).take(b.len()) {
            *c = Scalar::one();
        }
        lp.add_constraint(coeffs, Relation::Eq, Scalar::one());
    }
    for (b, &off) in blocks.iter().zip(&offsets).skip(1) {
        for k in 0..dim {
            let mut coeffs = vec![Scalar::zero(); n];
            for (i, p) in blocks[0].iter().enumerate() {
                coeffs[i] = p[k].clone();
            }
            for (i, p) in b.iter().enumerate() {
                coeffs[off + i] = -p[k].clone();
            }
            lp.add_constraint(coeffs, Relation::Eq, Scalar::zero());
        }
    }
    let x = lp_solve(&lp).expect("hull LP is well formed").into_point()?;
    let coefficients: Vec<Vec<Scalar>> =
        blocks.iter().zip(&offsets).map(|(b, &off)| x[off..off + b.len()].to_vec()).collect();
    let witness = combination(dim, coefficients[0].iter().zip(&blocks[0]));
    Some(HullIntersection { witness, coefficients })
}

fn check_points(points: &[Point], r: usize) -> Result<(), SolverError> {
    if points.len() < r {
        return Err(SolverError::TooFewPoints { n: points.len(), r });
    }
    let dim = points[0].dim();
    if points.iter().any(|p| p.dim() != dim) {
        return Err(SolverError::MixedDimensions);
    }
    Ok(())
}

fn search(points: &[Point], r: usize, coloring: Option<&Coloring>) -> Result<TverbergPartition, SolverError> {
    check_points(points, r)?;
    let mut searched = 0;
    let mut found = None;
    let _ = visit_partitions(points.len(), r, coloring, |blocks| {
        searched += 1;
        let hulls: Vec<Vec<Point>> =
            blocks.iter().map(|b| b.iter().map(|&v| points[v].clone()).collect()).collect();
        match hulls_intersect(&hulls) {
            Some(hit) => {
                found = Some((blocks.to_vec(), hit));
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    });
    let (blocks, hit) = found.ok_or(SolverError::SearchExhausted { searched })?;
    let coefficients: BTreeMap<usize, Scalar> = blocks
        .iter()
        .zip(hit.coefficients)
        .flat_map(|(b, cs)| b.iter().copied().zip(cs))
        .collect();
    let partition = TverbergPartition { blocks, coefficients, witness: hit.witness };
    debug_assert_eq!(partition.validate(points), Ok(()));
    Ok(partition)
}

/// First partition of `points` into `r` blocks whose convex hulls intersect.
///
/// With `(r-1)(k+1)+1` points spanning an affine space of dimension `k`,
/// Tverberg's theorem guarantees success.
pub fn tverberg_partition(points: &[Point], r: usize) -> Result<TverbergPartition, SolverError> {
    search(points, r, None)
}

/// First rainbow partition of `points` into `r` blocks whose convex hulls intersect.
///
/// For a prime `r` and color classes of size at most `r - 1` the optimal
/// colored Tverberg theorem guarantees success. Those hypotheses are checked
/// by the model layer; here the search simply runs and may come up empty.
pub fn colored_tverberg_partition(
    points: &[Point],
    r: usize,
    coloring: &Coloring,
) -> Result<TverbergPartition, SolverError> {
    if coloring.num_vertices() != points.len() {
        return Err(SolverError::ColoringSize { expected: points.len(), got: coloring.num_vertices() });
    }
    search(points, r, Some(coloring))
}

/// Radon partition read off an affine dependence: positive coefficients in
/// one block, the rest in the other. Blocks are in canonical order.
pub fn radon_partition(points: &[Point]) -> Result<TverbergPartition, SolverError> {
    check_points(points, 2)?;
    let lambda = affine_dependence(points)?;
    let (pos, rest): (Vec<usize>, Vec<usize>) = (0..points.len()).partition(|&i| lambda[i].is_positive());
    let total: Scalar = pos.iter().map(|&i| &lambda[i]).sum();
    let mut coefficients = BTreeMap::new();
    for &i in &pos {
        coefficients.insert(i, &lambda[i] / &total);
    }
    for &i in &rest {
        coefficients.insert(i, -&lambda[i] / &total);
    }
    let dim = points[0].dim();
    let witness = combination(dim, pos.iter().map(|&i| (&coefficients[&i], &points[i])));
    let blocks = canonical_order(&[pos, rest]);
    Ok(TverbergPartition { blocks, coefficients, witness })
}
