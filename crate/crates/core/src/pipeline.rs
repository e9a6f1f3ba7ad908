//! End-to-end plus-minus construction.
//!
//! 1. Separate `a(μ)` strictly from `a(μ')` by a hyperplane `(w, α)`.
//! 2. Lift every point onto `E'` (see [`crate::separation`]).
//! 3. Find a Tverberg (or rainbow Tverberg) partition of the lifted points
//!    with convex coefficients `α_i`.
//! 4. Pull back: `β = Σ_{i∈I_ℓ} α_i / s_i` for any block `ℓ`, where
//!    `s_i = ⟨a(v_i), w⟩ - α`, and the affine coefficients are
//!    `α_i / (β s_i)`. The common point is `b = u / β` with `u` the first `d`
//!    coordinates of the lifted witness.
//!
//! `β` is positive because, with `|μ| ≤ r - 1`, at least one of the `r`
//! blocks avoids `μ` and all of its summands are nonnegative.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{Point, Scalar};
use crate::model::{is_prime, Coloring, Configuration, Face, ModelError, Mode, PlusMinusCertificate, TverbergPartition};
use crate::separation::{
    lift_configuration, separating_hyperplane, trivial_hyperplane, Hyperplane, LiftedConfiguration, SeparationError,
};
use crate::solver::{colored_tverberg_partition, tverberg_partition, SolverError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("a(mu) and a(mu') cannot be strictly separated")]
    SeparationInfeasible,
    #[error("mu has {size} vertices, more than r-1 = {limit}")]
    MuTooLarge { size: usize, limit: usize },
    #[error("corollary mode requires a nonempty mu")]
    EmptyMu,
    #[error("rainbow modes require a prime r, got {0}")]
    NonPrimeR(usize),
    #[error("colored mode requires a configuration with a coloring")]
    MissingColoring,
    #[error("hyperplane does not strictly separate mu from its complement")]
    BadHyperplane,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<SeparationError> for PipelineError {
    fn from(e: SeparationError) -> Self {
        match e {
            SeparationError::SeparationInfeasible => PipelineError::SeparationInfeasible,
            SeparationError::DegenerateLift(_) => PipelineError::BadHyperplane,
            SeparationError::EmptySide => PipelineError::Internal(e.to_string()),
        }
    }
}

impl From<SolverError> for PipelineError {
    fn from(e: SolverError) -> Self {
        PipelineError::Internal(e.to_string())
    }
}

/// Which back-end and which `μ` a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveMode {
    /// Plain Tverberg partition; `μ` is ignored.
    Classical,
    /// Plus-minus partition with the classical back-end.
    PlusMinus,
    /// Plus-minus partition with rainbow blocks for the configuration's coloring.
    Colored,
    /// Plus-minus partition with rainbow blocks for [`corollary_coloring`].
    Corollary,
}

impl FromStr for SolveMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "classical" => Ok(SolveMode::Classical),
            "plusminus" => Ok(SolveMode::PlusMinus),
            "colored" => Ok(SolveMode::Colored),
            "corollary" => Ok(SolveMode::Corollary),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

impl fmt::Display for SolveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMode::Classical => "classical",
            SolveMode::PlusMinus => "plusminus",
            SolveMode::Colored => "colored",
            SolveMode::Corollary => "corollary",
        })
    }
}

/// Output of [`pull_back_coefficients`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullBack {
    pub beta: Scalar,
    /// `β` recomputed from each block separately; all entries are equal.
    pub block_betas: Vec<Scalar>,
    pub signed_coefficients: BTreeMap<usize, Scalar>,
    pub point_b: Point,
}

/// Turns a Tverberg partition of the lifted points into affine coefficients
/// of the original points.
pub fn pull_back_coefficients(
    partition: &TverbergPartition,
    lifted: &LiftedConfiguration,
) -> Result<PullBack, PipelineError> {
    let d = lifted.w_prime.len() - 1;
    let mut block_betas = Vec::with_capacity(partition.blocks.len());
    let mut block_us = Vec::with_capacity(partition.blocks.len());
    for block in &partition.blocks {
        let mut beta = Scalar::zero();
        let mut u = Point::zero(d);
        for &v in block {
            let alpha = &partition.coefficients[&v];
            beta += alpha / &lifted.sign_factors[v];
            let head = Point::new(lifted.lifted_points[v].coords()[..d].to_vec());
            u.add_scaled(&head, alpha);
        }
        block_betas.push(beta);
        block_us.push(u);
    }
    let beta = block_betas[0].clone();
    if block_betas.iter().any(|b| *b != beta) {
        return Err(PipelineError::Internal("per-block beta values disagree".into()));
    }
    if block_us.iter().any(|u| *u != block_us[0]) {
        return Err(PipelineError::Internal("per-block u values disagree".into()));
    }
    if !beta.is_positive() {
        return Err(PipelineError::Internal(format!("beta = {beta} is not positive")));
    }
    let signed_coefficients = partition
        .coefficients
        .iter()
        .map(|(&v, alpha)| (v, alpha / (&beta * &lifted.sign_factors[v])))
        .collect();
    let point_b = block_us[0].scaled(&beta.recip());
    Ok(PullBack { beta, block_betas, signed_coefficients, point_b })
}

/// Coloring for the corollary: `C_0 = vert(μ)`, then the remaining vertices
/// in index order, chunked into classes of `r - 1`.
pub fn corollary_coloring(config: &Configuration, mu: &Face) -> Result<Coloring, PipelineError> {
    let r = config.r();
    if mu.is_empty() {
        return Err(PipelineError::EmptyMu);
    }
    if mu.len() > r - 1 {
        return Err(PipelineError::MuTooLarge { size: mu.len(), limit: r - 1 });
    }
    if !is_prime(r) {
        return Err(PipelineError::NonPrimeR(r));
    }
    mu.check_range(config.len())?;
    let rest = mu.complement(config.len());
    let mut classes = vec![mu.vertices().to_vec()];
    classes.extend(rest.vertices().chunks(r - 1).map(<[usize]>::to_vec));
    Ok(Coloring::new(classes, config.len(), r)?)
}

/// Everything a pipeline run produced, for inspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineRun {
    pub certificate: PlusMinusCertificate,
    pub lifted: LiftedConfiguration,
    pub lifted_partition: TverbergPartition,
    pub pull_back: PullBack,
}

/// The face and coloring a mode works with.
fn mode_inputs(config: &Configuration, mode: SolveMode) -> Result<(Face, Option<Coloring>), PipelineError> {
    let mu = match mode {
        SolveMode::Classical => Face::empty(),
        _ => config.mu().clone(),
    };
    let limit = config.r() - 1;
    if mu.len() > limit {
        return Err(PipelineError::MuTooLarge { size: mu.len(), limit });
    }
    let coloring = match mode {
        SolveMode::Classical | SolveMode::PlusMinus => None,
        SolveMode::Colored => {
            let c = config.coloring().ok_or(PipelineError::MissingColoring)?;
            if !is_prime(config.r()) {
                return Err(PipelineError::NonPrimeR(config.r()));
            }
            Some(c.clone())
        }
        SolveMode::Corollary => Some(corollary_coloring(config, &mu)?),
    };
    Ok((mu, coloring))
}

/// Hyperplane the pipeline uses for `mode`.
pub fn choose_hyperplane(config: &Configuration, mode: SolveMode) -> Result<Hyperplane, PipelineError> {
    let (mu, _) = mode_inputs(config, mode)?;
    if mu.is_empty() {
        Ok(trivial_hyperplane(config))
    } else {
        Ok(separating_hyperplane(config, &mu)?)
    }
}

/// Runs the pipeline with the hyperplane it would pick itself.
pub fn run_pipeline(config: &Configuration, mode: SolveMode) -> Result<PipelineRun, PipelineError> {
    let h = choose_hyperplane(config, mode)?;
    run_with_hyperplane(config, mode, &h)
}

/// Runs the pipeline with a caller-supplied separating hyperplane.
pub fn run_with_hyperplane(
    config: &Configuration,
    mode: SolveMode,
    h: &Hyperplane,
) -> Result<PipelineRun, PipelineError> {
    let (mu, coloring) = mode_inputs(config, mode)?;
    if !crate::separation::separates(config, &mu, h) {
        return Err(PipelineError::BadHyperplane);
    }
    let lifted = lift_configuration(config, h)?;
    let lifted_partition = match &coloring {
        Some(c) => colored_tverberg_partition(&lifted.lifted_points, config.r(), c)?,
        None => tverberg_partition(&lifted.lifted_points, config.r())?,
    };
    if !lifted_partition.blocks.iter().any(|b| b.iter().all(|&v| !mu.contains(v))) {
        return Err(PipelineError::Internal("every block meets mu".into()));
    }
    let pull_back = pull_back_coefficients(&lifted_partition, &lifted)?;
    let certificate = PlusMinusCertificate {
        d: config.d(),
        r: config.r(),
        mu,
        blocks: lifted_partition.blocks.clone(),
        signed_coefficients: pull_back.signed_coefficients.clone(),
        point_b: pull_back.point_b.clone(),
        beta: pull_back.beta.clone(),
        hyperplane: h.clone(),
        rainbow: coloring.is_some(),
        coloring,
    };
    certificate.validate().map_err(|e| PipelineError::Internal(e.to_string()))?;
    Ok(PipelineRun { certificate, lifted, lifted_partition, pull_back })
}

/// Plus-minus partition of `config`, rainbow when the configuration is colored.
pub fn plus_minus_partition(config: &Configuration) -> Result<PlusMinusCertificate, PipelineError> {
    let mode = match config.mode() {
        Mode::Classical => SolveMode::PlusMinus,
        Mode::Colored => SolveMode::Colored,
    };
    solve(config, mode)
}

/// Plus-minus partition where every block holds at most one vertex of `μ`.
pub fn run_corollary(config: &Configuration) -> Result<PlusMinusCertificate, PipelineError> {
    solve(config, SolveMode::Corollary)
}

pub fn solve(config: &Configuration, mode: SolveMode) -> Result<PlusMinusCertificate, PipelineError> {
    run_pipeline(config, mode).map(|run| run.certificate)
}
