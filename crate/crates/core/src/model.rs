//! Domain model: configurations, faces, colorings, partitions and
//! certificates, with validators for every structural invariant.
//!
//! Vertex indices are 0-based throughout.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{combination, Point, Scalar};
use crate::separation::Hyperplane;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("d must be at least 1, got {0}")]
    BadDimension(usize),
    #[error("r must be at least 2, got {0}")]
    BadR(usize),
    #[error("expected {expected} points for d={d}, r={r}, got {got}")]
    WrongPointCount { d: usize, r: usize, expected: usize, got: usize },
    #[error("point {index} has dimension {got}, expected {expected}")]
    PointDimension { index: usize, got: usize, expected: usize },
    #[error("colored mode requires a prime r, got {0}")]
    NonPrimeR(usize),
    #[error("colored mode requires a coloring")]
    MissingColoring,
    #[error("classical mode does not take a coloring")]
    UnexpectedColoring,
    #[error("color class C{class} has {size} vertices, more than r-1 = {limit}")]
    ColorClassTooLarge { class: usize, size: usize, limit: usize },
    #[error("vertex {0} appears in more than one color class")]
    ColorOverlap(usize),
    #[error("vertex {0} has no color")]
    Uncolored(usize),
    #[error("vertex index {index} out of range 0..{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("vertex index {0} repeated")]
    DuplicateIndex(usize),
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// `N + 1 = (r - 1)(d + 1) + 1`, the Tverberg point count.
pub fn tverberg_point_count(d: usize, r: usize) -> usize {
    (r - 1) * (d + 1) + 1
}

/// A face of the simplex, given by its vertex indices in increasing order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face(Vec<usize>);

impl Face {
    /// Sorts `indices`; duplicates are rejected.
    pub fn new(mut indices: Vec<usize>) -> Result<Self, ModelError> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateIndex(w[0]));
        }
        Ok(Face(indices))
    }

    pub fn empty() -> Self {
        Face(Vec::new())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn check_range(&self, n: usize) -> Result<(), ModelError> {
        match self.0.last() {
            Some(&index) if index >= n => Err(ModelError::IndexOutOfRange { index, n }),
            _ => Ok(()),
        }
    }

    /// The face on exactly the indices of `0..n` not in `self`.
    pub fn complement(&self, n: usize) -> Face {
        Face((0..n).filter(|&v| !self.contains(v)).collect())
    }
}

/// Partition of the vertex set into color classes `C_0, …, C_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    classes: Vec<Vec<usize>>,
}

impl Coloring {
    /// Validates that `classes` partition `0..n` with every class of size at most `r - 1`.
    pub fn new(classes: Vec<Vec<usize>>, n: usize, r: usize) -> Result<Self, ModelError> {
        let mut seen = vec![false; n];
        let mut classes = classes;
        for (class, members) in classes.iter_mut().enumerate() {
            members.sort_unstable();
            if members.len() > r - 1 {
                return Err(ModelError::ColorClassTooLarge { class, size: members.len(), limit: r - 1 });
            }
            for &v in members.iter() {
                if v >= n {
                    return Err(ModelError::IndexOutOfRange { index: v, n });
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(ModelError::ColorOverlap(v));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(ModelError::Uncolored(v));
        }
        Ok(Coloring { classes })
    }

    /// Every vertex in its own class.
    pub fn discrete(n: usize) -> Self {
        Coloring { classes: (0..n).map(|v| vec![v]).collect() }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_vertices(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    /// Color of every vertex, indexed by vertex.
    pub fn color_map(&self) -> Vec<usize> {
        let mut map = vec![0; self.num_vertices()];
        for (c, members) in self.classes.iter().enumerate() {
            for &v in members {
                map[v] = c;
            }
        }
        map
    }

    /// True when no two vertices of `block` share a color.
    pub fn is_rainbow(&self, block: &[usize]) -> bool {
        let map = self.color_map();
        let mut used = BTreeSet::new();
        block.iter().all(|&v| used.insert(map[v]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Classical,
    Colored,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Classical => "classical",
            Mode::Colored => "colored",
        })
    }
}

/// Labeled points `a(v_0), …, a(v_N)` in `R^d` with `N = (r-1)(d+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    d: usize,
    r: usize,
    points: Vec<Point>,
    mode: Mode,
    coloring: Option<Coloring>,
    mu: Face,
}

impl Configuration {
    pub fn new(
        d: usize,
        r: usize,
        points: Vec<Point>,
        mode: Mode,
        coloring: Option<Coloring>,
        mu: Face,
    ) -> Result<Self, ModelError> {
        if d < 1 {
            return Err(ModelError::BadDimension(d));
        }
        if r < 2 {
            return Err(ModelError::BadR(r));
        }
        let expected = tverberg_point_count(d, r);
        if points.len() != expected {
            return Err(ModelError::WrongPointCount { d, r, expected, got: points.len() });
        }
        if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| p.dim() != d) {
            return Err(ModelError::PointDimension { index, got: p.dim(), expected: d });
        }
        match (mode, &coloring) {
            (Mode::Colored, None) => return Err(ModelError::MissingColoring),
            (Mode::Classical, Some(_)) => return Err(ModelError::UnexpectedColoring),
            (Mode::Colored, Some(c)) => {
                if !is_prime(r) {
                    return Err(ModelError::NonPrimeR(r));
                }
                // Re-validate in case the coloring was built for other parameters.
                Coloring::new(c.classes.clone(), expected, r)?;
            }
            (Mode::Classical, None) => {}
        }
        mu.check_range(expected)?;
        Ok(Configuration { d, r, points, mode, coloring, mu })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of points, `N + 1`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, v: usize) -> &Point {
        &self.points[v]
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn coloring(&self) -> Option<&Coloring> {
        self.coloring.as_ref()
    }

    pub fn mu(&self) -> &Face {
        &self.mu
    }

    pub fn mu_complement(&self) -> Face {
        self.mu.complement(self.len())
    }

    pub fn with_mu(&self, mu: Face) -> Result<Self, ModelError> {
        mu.check_range(self.len())?;
        Ok(Configuration { mu, ..self.clone() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("vertex {0} appears in more than one block")]
    Overlap(usize),
    #[error("vertex index {0} out of range")]
    OutOfRange(usize),
    #[error("coefficients are not defined exactly on the union of the blocks")]
    CoefficientDomain,
    #[error("coefficient of vertex {0} is negative")]
    NegativeCoefficient(usize),
    #[error("coefficients of block {0} do not sum to 1")]
    BlockSum(usize),
    #[error("convex combination of block {0} differs from the witness")]
    WitnessMismatch(usize),
}

/// Checks that `blocks` are nonempty, pairwise disjoint and inside `0..n`.
pub fn check_blocks(blocks: &[Vec<usize>], n: usize) -> Result<(), PartitionError> {
    let mut seen = BTreeSet::new();
    for (j, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(PartitionError::EmptyBlock(j));
        }
        for &v in block {
            if v >= n {
                return Err(PartitionError::OutOfRange(v));
            }
            if !seen.insert(v) {
                return Err(PartitionError::Overlap(v));
            }
        }
    }
    Ok(())
}

/// `r` disjoint blocks with convex coefficients and a common witness point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TverbergPartition {
    pub blocks: Vec<Vec<usize>>,
    pub coefficients: BTreeMap<usize, Scalar>,
    pub witness: Point,
}

impl TverbergPartition {
    /// Checks every invariant against the points the partition was found for.
    pub fn validate(&self, points: &[Point]) -> Result<(), PartitionError> {
        check_blocks(&self.blocks, points.len())?;
        let domain: BTreeSet<usize> = self.blocks.iter().flatten().copied().collect();
        if !self.coefficients.keys().copied().eq(domain.iter().copied()) {
            return Err(PartitionError::CoefficientDomain);
        }
        if let Some((&v, _)) = self.coefficients.iter().find(|(_, c)| c.is_negative()) {
            return Err(PartitionError::NegativeCoefficient(v));
        }
        for (j, block) in self.blocks.iter().enumerate() {
            let sum: Scalar = block.iter().map(|v| &self.coefficients[v]).sum();
            if !sum.is_one() {
                return Err(PartitionError::BlockSum(j));
            }
            let combo = combination(self.witness.dim(), block.iter().map(|v| (&self.coefficients[v], &points[*v])));
            if combo != self.witness {
                return Err(PartitionError::WitnessMismatch(j));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("expected {expected} blocks, got {got}")]
    BlockCount { expected: usize, got: usize },
    #[error(transparent)]
    Blocks(#[from] PartitionError),
    #[error("signed coefficients of block {0} do not sum to 1")]
    BlockSum(usize),
    #[error("vertex {0} violates the sign condition")]
    Sign(usize),
    #[error("beta must be positive")]
    BetaNotPositive,
    #[error("point b has dimension {got}, expected {expected}")]
    PointDimension { got: usize, expected: usize },
    #[error("hyperplane normal has dimension {got}, expected {expected}")]
    NormalDimension { got: usize, expected: usize },
    #[error("hyperplane normal is zero")]
    ZeroNormal,
    #[error("rainbow certificate without a coloring")]
    MissingColoring,
    #[error("block {0} is not rainbow")]
    NotRainbow(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A plus-minus Tverberg certificate: blocks, signed affine coefficients,
/// the common point `b`, the normalizer `beta` and the separating hyperplane
/// used to produce them.
///
/// `mu` records the distinguished face the signs refer to; `coloring` is the
/// coloring the blocks are rainbow for, present iff `rainbow` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlusMinusCertificate {
    pub d: usize,
    pub r: usize,
    pub mu: Face,
    pub blocks: Vec<Vec<usize>>,
    pub signed_coefficients: BTreeMap<usize, Scalar>,
    pub point_b: Point,
    pub beta: Scalar,
    pub hyperplane: Hyperplane,
    pub rainbow: bool,
    pub coloring: Option<Coloring>,
}

impl PlusMinusCertificate {
    pub fn num_points(&self) -> usize {
        tverberg_point_count(self.d, self.r)
    }

    /// Checks every invariant that does not need the point coordinates.
    pub fn validate(&self) -> Result<(), CertificateError> {
        if self.d < 1 {
            return Err(ModelError::BadDimension(self.d).into());
        }
        if self.r < 2 {
            return Err(ModelError::BadR(self.r).into());
        }
        let n = self.num_points();
        if self.blocks.len() != self.r {
            return Err(CertificateError::BlockCount { expected: self.r, got: self.blocks.len() });
        }
        check_blocks(&self.blocks, n)?;
        self.mu.check_range(n)?;
        let domain: BTreeSet<usize> = self.blocks.iter().flatten().copied().collect();
        if !self.signed_coefficients.keys().copied().eq(domain.iter().copied()) {
            return Err(PartitionError::CoefficientDomain.into());
        }
        for (j, block) in self.blocks.iter().enumerate() {
            let sum: Scalar = block.iter().map(|v| &self.signed_coefficients[v]).sum();
            if !sum.is_one() {
                return Err(CertificateError::BlockSum(j));
            }
        }
        if let Some(v) = self.sign_violation() {
            return Err(CertificateError::Sign(v));
        }
        if !self.beta.is_positive() {
            return Err(CertificateError::BetaNotPositive);
        }
        if self.point_b.dim() != self.d {
            return Err(CertificateError::PointDimension { got: self.point_b.dim(), expected: self.d });
        }
        if self.hyperplane.w.len() != self.d {
            return Err(CertificateError::NormalDimension { got: self.hyperplane.w.len(), expected: self.d });
        }
        if self.hyperplane.w.iter().all(Zero::is_zero) {
            return Err(CertificateError::ZeroNormal);
        }
        match (&self.coloring, self.rainbow) {
            (None, true) => return Err(CertificateError::MissingColoring),
            (Some(c), _) => {
                let c = Coloring::new(c.classes().to_vec(), n, self.r)?;
                if self.rainbow {
                    if let Some(j) = self.blocks.iter().position(|b| !c.is_rainbow(b)) {
                        return Err(CertificateError::NotRainbow(j));
                    }
                }
            }
            (None, false) => {}
        }
        Ok(())
    }

    /// First vertex whose coefficient has the wrong sign for its side of `mu`.
    pub fn sign_violation(&self) -> Option<usize> {
        self.signed_coefficients.iter().find_map(|(&v, c)| {
            let bad = if self.mu.contains(v) { c.is_positive() } else { c.is_negative() };
            bad.then_some(v)
        })
    }

    /// Vertices of each block with a strictly negative, zero, and strictly
    /// positive coefficient. Purely informational.
    pub fn sign_pattern(&self) -> Vec<(usize, usize, usize)> {
        self.blocks
            .iter()
            .map(|block| {
                block.iter().fold((0, 0, 0), |(neg, zero, pos), v| {
                    let c = &self.signed_coefficients[v];
                    if c.is_negative() {
                        (neg + 1, zero, pos)
                    } else if c.is_zero() {
                        (neg, zero + 1, pos)
                    } else {
                        (neg, zero, pos + 1)
                    }
                })
            })
            .collect()
    }
}

/// Formats blocks as `{0} {1,2}`.
pub fn format_blocks(blocks: &[Vec<usize>]) -> String {
    blocks
        .iter()
        .map(|b| {
            let inner: Vec<String> = b.iter().map(usize::to_string).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Blocks sorted by size, then lexicographically; the listing order.
pub fn display_order(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = blocks.to_vec();
    for b in out.iter_mut() {
        b.sort_unstable();
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Blocks sorted by minimum element; the canonical form used by the search.
pub fn canonical_order(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = blocks.to_vec();
    for b in out.iter_mut() {
        b.sort_unstable();
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[i64]) -> Vec<Point> {
        xs.iter().map(|&x| Point::from_ints(&[x])).collect()
    }

    #[test]
    fn primes() {
        let ps: Vec<usize> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn minimal_classical_configuration() {
        let c = Configuration::new(1, 2, line(&[0, 1, 3]), Mode::Classical, None, Face::empty()).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.mu_complement().vertices(), &[0, 1, 2]);
    }

    #[test]
    fn rejects_wrong_count_and_dimension() {
        let err = Configuration::new(1, 2, line(&[0, 1]), Mode::Classical, None, Face::empty()).unwrap_err();
        assert!(matches!(err, ModelError::WrongPointCount { expected: 3, got: 2, .. }));
        let pts = vec![Point::from_ints(&[0]), Point::from_ints(&[1, 1]), Point::from_ints(&[2])];
        let err = Configuration::new(1, 2, pts, Mode::Classical, None, Face::empty()).unwrap_err();
        assert!(matches!(err, ModelError::PointDimension { index: 1, .. }));
    }

    #[test]
    fn colored_mode_needs_prime_r() {
        let pts = line(&[0, 1, 2, 3, 4, 5, 6]);
        let coloring = Coloring::discrete(7);
        let err = Configuration::new(1, 4, pts, Mode::Colored, Some(coloring), Face::empty()).unwrap_err();
        assert_eq!(err, ModelError::NonPrimeR(4));
    }

    #[test]
    fn coloring_validation() {
        assert!(matches!(
            Coloring::new(vec![vec![0, 1, 2]], 3, 3),
            Err(ModelError::ColorClassTooLarge { class: 0, size: 3, limit: 2 })
        ));
        assert_eq!(Coloring::new(vec![vec![0, 1], vec![1, 2]], 3, 3), Err(ModelError::ColorOverlap(1)));
        assert_eq!(Coloring::new(vec![vec![0, 1]], 3, 3), Err(ModelError::Uncolored(2)));
        let c = Coloring::new(vec![vec![1, 0], vec![2]], 3, 3).unwrap();
        assert!(c.is_rainbow(&[0, 2]));
        assert!(!c.is_rainbow(&[0, 1]));
    }

    #[test]
    fn face_complement_and_range() {
        let f = Face::new(vec![3, 1]).unwrap();
        assert_eq!(f.vertices(), &[1, 3]);
        assert_eq!(f.complement(5).vertices(), &[0, 2, 4]);
        assert!(f.check_range(3).is_err());
        assert_eq!(Face::new(vec![2, 2]), Err(ModelError::DuplicateIndex(2)));
    }

    #[test]
    fn mu_out_of_range() {
        let mu = Face::new(vec![5]).unwrap();
        let err = Configuration::new(1, 2, line(&[0, 1, 3]), Mode::Classical, None, mu).unwrap_err();
        assert_eq!(err, ModelError::IndexOutOfRange { index: 5, n: 3 });
    }

    #[test]
    fn block_orders() {
        let blocks = vec![vec![2, 0], vec![1]];
        assert_eq!(canonical_order(&blocks), vec![vec![0, 2], vec![1]]);
        assert_eq!(display_order(&blocks), vec![vec![1], vec![0, 2]]);
        assert_eq!(format_blocks(&display_order(&blocks)), "{1} {0,2}");
    }

    #[test]
    fn partition_validation_catches_overlap() {
        let p = TverbergPartition {
            blocks: vec![vec![0, 1], vec![1]],
            coefficients: BTreeMap::new(),
            witness: Point::zero(1),
        };
        assert_eq!(p.validate(&line(&[0, 1, 2])), Err(PartitionError::Overlap(1)));
    }
}
