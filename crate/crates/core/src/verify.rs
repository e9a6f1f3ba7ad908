//! Certificate verification and a brute-force oracle.
//!
//! The oracle never touches the lift. For each candidate partition it asks an
//! exact LP directly for affine coefficients with the sign pattern required
//! by `μ` and a common point `b`, which makes agreement with the pipeline
//! meaningful evidence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;

use num_traits::{One, Signed, Zero};

use crate::arith::{combination, Point, Scalar};
use crate::lp::{lp_solve, LinearProgram, Relation, VarBounds};
use crate::model::{Coloring, Configuration, Face, Mode, PlusMinusCertificate};
use crate::separation::{separates, separating_hyperplane, trivial_hyperplane};
use crate::solver::visit_partitions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectReason {
    DimensionMismatch,
    MuMismatch,
    WrongBlockCount,
    IndexOutOfRange,
    EmptyBlock,
    BlocksNotDisjoint,
    CoefficientDomain,
    AffineCombinationMismatch,
    SignViolation,
    BetaNotPositive,
    HyperplaneNotSeparating,
    BetaInconsistent,
    InvalidColoring,
    NotRainbow,
}

impl RejectReason {
    pub fn code(self) -> &'static str {
        match self {
            RejectReason::DimensionMismatch => "dimension-mismatch",
            RejectReason::MuMismatch => "mu-mismatch",
            RejectReason::WrongBlockCount => "wrong-block-count",
            RejectReason::IndexOutOfRange => "index-out-of-range",
            RejectReason::EmptyBlock => "empty-block",
            RejectReason::BlocksNotDisjoint => "blocks-not-disjoint",
            RejectReason::CoefficientDomain => "coefficient-domain",
            RejectReason::AffineCombinationMismatch => "affine-combination-mismatch",
            RejectReason::SignViolation => "sign-violation",
            RejectReason::BetaNotPositive => "beta-not-positive",
            RejectReason::HyperplaneNotSeparating => "hyperplane-not-separating",
            RejectReason::BetaInconsistent => "beta-inconsistent",
            RejectReason::InvalidColoring => "invalid-coloring",
            RejectReason::NotRainbow => "not-rainbow",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }
}

/// Re-checks every claim of `cert` against `config` in exact arithmetic.
///
/// The certificate's `μ` must be the configuration's `μ`, or empty for a
/// classical certificate (which then only claims nonnegative coefficients).
/// A rainbow claim is checked against the coloring recorded in the
/// certificate, which must itself be a valid coloring for `(N, r)`.
pub fn verify_certificate(config: &Configuration, cert: &PlusMinusCertificate) -> Verdict {
    match check(config, cert) {
        Ok(()) => Verdict::Accept,
        Err(reason) => Verdict::Reject(reason),
    }
}

fn check(config: &Configuration, cert: &PlusMinusCertificate) -> Result<(), RejectReason> {
    use RejectReason::*;
    let n = config.len();
    let d = config.d();
    if cert.d != d || cert.r != config.r() || cert.point_b.dim() != d || cert.hyperplane.w.len() != d {
        return Err(DimensionMismatch);
    }
    if !cert.mu.is_empty() && cert.mu != *config.mu() {
        return Err(MuMismatch);
    }
    if cert.blocks.len() != config.r() {
        return Err(WrongBlockCount);
    }
    let mut seen = BTreeSet::new();
    for block in &cert.blocks {
        if block.is_empty() {
            return Err(EmptyBlock);
        }
        for &v in block {
            if v >= n {
                return Err(IndexOutOfRange);
            }
            if !seen.insert(v) {
                return Err(BlocksNotDisjoint);
            }
        }
    }
    if !cert.signed_coefficients.keys().copied().eq(seen.iter().copied()) {
        return Err(CoefficientDomain);
    }
    for block in &cert.blocks {
        let sum: Scalar = block.iter().map(|v| &cert.signed_coefficients[v]).sum();
        let combo = combination(d, block.iter().map(|v| (&cert.signed_coefficients[v], config.point(*v))));
        if !sum.is_one() || combo != cert.point_b {
            return Err(AffineCombinationMismatch);
        }
    }
    if cert.sign_violation().is_some() {
        return Err(SignViolation);
    }
    if !cert.beta.is_positive() {
        return Err(BetaNotPositive);
    }
    if !separates(config, &cert.mu, &cert.hyperplane) {
        return Err(HyperplaneNotSeparating);
    }
    // Σ c_v (⟨a(v),w⟩ - α) = ⟨b,w⟩ - α on every block, and the lift forces it to equal 1/β.
    if !(&cert.beta * cert.hyperplane.offset(&cert.point_b)).is_one() {
        return Err(BetaInconsistent);
    }
    if let Some(coloring) = &cert.coloring {
        let valid = Coloring::new(coloring.classes().to_vec(), n, config.r()).is_ok();
        if !valid {
            return Err(InvalidColoring);
        }
    }
    if cert.rainbow {
        let coloring = cert.coloring.as_ref().ok_or(InvalidColoring)?;
        if !cert.blocks.iter().all(|b| coloring.is_rainbow(b)) {
            return Err(NotRainbow);
        }
    }
    Ok(())
}

/// Sign-constrained affine coefficients for `blocks` and the common point `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedSolution {
    pub coefficients: BTreeMap<usize, Scalar>,
    pub point_b: Point,
}

/// Decides whether `blocks` admit per-block affine coefficients, `≤ 0` on
/// `mu` and `≥ 0` elsewhere, all representing one common point `b`.
pub fn signed_solve(config: &Configuration, mu: &Face, blocks: &[Vec<usize>]) -> Option<SignedSolution> {
    let d = config.d();
    let vertices: Vec<usize> = blocks.iter().flatten().copied().collect();
    let col: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let m = vertices.len();
    let n = m + d;
    let mut lp = LinearProgram::new(n);
    for (i, &v) in vertices.iter().enumerate() {
        let bounds = if mu.contains(v) { VarBounds::nonpositive() } else { VarBounds::nonnegative() };
        lp.set_bounds(i, bounds);
    }
    for k in 0..d {
        lp.set_free(m + k);
    }
    for block in blocks {
        let mut coeffs = vec![Scalar::zero(); n];
        for v in block {
            coeffs[col[v]] = Scalar::one();
        }
        lp.add_constraint(coeffs, Relation::Eq, Scalar::one());
        for k in 0..d {
            let mut coeffs = vec![Scalar::zero(); n];
            for v in block {
                coeffs[col[v]] = config.point(*v)[k].clone();
            }
            coeffs[m + k] = -Scalar::one();
            lp.add_constraint(coeffs, Relation::Eq, Scalar::zero());
        }
    }
    let x = lp_solve(&lp).expect("oracle LP is well formed").into_point()?;
    let coefficients = vertices.iter().enumerate().map(|(i, &v)| (v, x[i].clone())).collect();
    Some(SignedSolution { coefficients, point_b: Point::new(x[m..].to_vec()) })
}

/// Every partition of `0..N` into `r` blocks (rainbow for the configuration's
/// coloring in colored mode) that admits a plus-minus representation for the
/// configuration's `μ`. Listed in search order.
pub fn oracle_enumerate(config: &Configuration) -> Vec<Vec<Vec<usize>>> {
    let coloring = match config.mode() {
        Mode::Colored => config.coloring(),
        Mode::Classical => None,
    };
    oracle_enumerate_with(config, config.mu(), coloring)
}

pub fn oracle_enumerate_with(config: &Configuration, mu: &Face, coloring: Option<&Coloring>) -> Vec<Vec<Vec<usize>>> {
    let mut found = Vec::new();
    let _ = visit_partitions(config.len(), config.r(), coloring, |blocks| {
        if signed_solve(config, mu, blocks).is_some() {
            found.push(blocks.to_vec());
        }
        ControlFlow::Continue(())
    });
    found
}

/// Builds a full certificate for `blocks` without the lift, or `None` when
/// the blocks admit no plus-minus representation.
///
/// Needs `|μ| ≤ r - 1` so that some block avoids `μ` and `⟨b,w⟩ - α > 0`.
pub fn oracle_certificate(
    config: &Configuration,
    mu: &Face,
    coloring: Option<&Coloring>,
    blocks: &[Vec<usize>],
) -> Option<PlusMinusCertificate> {
    let sol = signed_solve(config, mu, blocks)?;
    let hyperplane = if mu.is_empty() {
        trivial_hyperplane(config)
    } else {
        separating_hyperplane(config, mu).ok()?
    };
    let offset = hyperplane.offset(&sol.point_b);
    if !offset.is_positive() {
        return None;
    }
    Some(PlusMinusCertificate {
        d: config.d(),
        r: config.r(),
        mu: mu.clone(),
        blocks: blocks.to_vec(),
        signed_coefficients: sol.coefficients,
        point_b: sol.point_b,
        beta: offset.recip(),
        hyperplane,
        rainbow: coloring.is_some(),
        coloring: coloring.cloned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, int};
    use crate::pipeline::plus_minus_partition;

    fn line_config(xs: &[i64], mu: &[usize]) -> Configuration {
        let pts = xs.iter().map(|&x| Point::from_ints(&[x])).collect();
        let r = (xs.len() - 1) / 2 + 1;
        Configuration::new(1, r, pts, Mode::Classical, None, Face::new(mu.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn accepts_worked_certificate() {
        let config = line_config(&[0, 1, 3], &[2]);
        let cert = plus_minus_partition(&config).unwrap();
        assert_eq!(verify_certificate(&config, &cert), Verdict::Accept);
    }

    #[test]
    fn tampered_coefficient() {
        let config = line_config(&[0, 1, 3], &[2]);
        let mut cert = plus_minus_partition(&config).unwrap();
        let c = cert.signed_coefficients.get_mut(&2).unwrap();
        *c = -c.clone();
        assert_eq!(verify_certificate(&config, &cert), Verdict::Reject(RejectReason::AffineCombinationMismatch));
    }

    #[test]
    fn overlapping_blocks() {
        let config = line_config(&[0, 1, 3], &[2]);
        let mut cert = plus_minus_partition(&config).unwrap();
        cert.blocks[0].push(1);
        assert_eq!(verify_certificate(&config, &cert), Verdict::Reject(RejectReason::BlocksNotDisjoint));
    }

    #[test]
    fn other_tampering() {
        let config = line_config(&[0, 1, 3], &[2]);
        let cert = plus_minus_partition(&config).unwrap();

        let mut t = cert.clone();
        t.beta = frac(1, 3);
        assert_eq!(verify_certificate(&config, &t), Verdict::Reject(RejectReason::BetaInconsistent));

        let mut t = cert.clone();
        t.beta = int(0);
        assert_eq!(verify_certificate(&config, &t), Verdict::Reject(RejectReason::BetaNotPositive));

        let mut t = cert.clone();
        t.hyperplane.alpha = int(0);
        assert_eq!(verify_certificate(&config, &t), Verdict::Reject(RejectReason::HyperplaneNotSeparating));

        let mut t = cert.clone();
        t.mu = Face::new(vec![0]).unwrap();
        assert_eq!(verify_certificate(&config, &t), Verdict::Reject(RejectReason::MuMismatch));

        let mut t = cert.clone();
        t.rainbow = true;
        assert_eq!(verify_certificate(&config, &t), Verdict::Reject(RejectReason::InvalidColoring));

        let mut t = cert.clone();
        t.rainbow = true;
        t.coloring = Some(Coloring::new(vec![vec![1], vec![2], vec![0]], 3, 2).unwrap());
        assert_eq!(verify_certificate(&config, &t), Verdict::Accept);

        let mut t = cert;
        t.blocks.pop();
        assert_eq!(verify_certificate(&config, &t), Verdict::Reject(RejectReason::WrongBlockCount));
    }

    #[test]
    fn sign_violation_is_caught() {
        // {0,2}{1}: 1 = 2/3·0 + 1/3·3 needs a positive coefficient on vertex 2 ∈ μ.
        let config = line_config(&[0, 1, 3], &[2]);
        let classical = plus_minus_partition(&line_config(&[0, 1, 3], &[])).unwrap();
        let mut t = classical;
        t.mu = config.mu().clone();
        t.hyperplane = separating_hyperplane(&config, config.mu()).unwrap();
        assert_eq!(verify_certificate(&config, &t), Verdict::Reject(RejectReason::SignViolation));
    }

    #[test]
    fn oracle_lists_worked_partition() {
        let config = line_config(&[0, 1, 3], &[2]);
        let list = oracle_enumerate(&config);
        assert!(list.contains(&vec![vec![0], vec![1, 2]]));
        // {0,1}{2} forces weight 1 on vertex 2 in mu; {0,2}{1} needs weight 1/3 on it.
        assert_eq!(list, vec![vec![vec![0], vec![1, 2]]]);
    }

    #[test]
    fn oracle_classical_line() {
        let config = line_config(&[0, 1, 2], &[]);
        assert_eq!(oracle_enumerate(&config), vec![vec![vec![0, 2], vec![1]]]);
    }

    #[test]
    fn oracle_certificates_verify() {
        let config = line_config(&[0, 1, 3], &[2]);
        for blocks in oracle_enumerate(&config) {
            let cert = oracle_certificate(&config, config.mu(), None, &blocks).unwrap();
            assert_eq!(verify_certificate(&config, &cert), Verdict::Accept);
        }
    }
}
