//! `tvpm`: solve, verify and brute-force plus-minus Tverberg partitions.
//!
//! Exit codes: 0 success, 1 I/O or internal error, 2 parse or input
//! validation error, 3 separation infeasible, 4 mu too large,
//! 5 verification reject, 6 empty oracle listing with `--expect-nonempty`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tvpm_core::model::{display_order, format_blocks};
use tvpm_core::pipeline::{solve, PipelineError, SolveMode};
use tvpm_core::random::{random_separable_configuration, ColoringKind};
use tvpm_core::verify::{oracle_enumerate, verify_certificate, Verdict};
use tvpm_core::{parse_certificate, parse_configuration, serialize_certificate, Configuration};

const EXIT_INTERNAL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_SEPARATION: u8 = 3;
const EXIT_MU_TOO_LARGE: u8 = 4;
const EXIT_REJECT: u8 = 5;
const EXIT_ORACLE_EMPTY: u8 = 6;

#[derive(Parser)]
#[command(name = "tvpm", version, about = "Exact plus-minus Tverberg partitions and certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a certificate for a configuration.
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// classical, plusminus, colored or corollary
        #[arg(long, default_value = "plusminus")]
        mode: SolveMode,
        /// Write the certificate here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Report how many coefficients per block are negative, zero and
        /// positive on standard error.
        #[arg(long)]
        signs: bool,
    },
    /// Check a certificate against a configuration.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// List every block partition admitting a plus-minus representation.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        /// Exit nonzero when the listing is empty.
        #[arg(long)]
        expect_nonempty: bool,
    },
    /// Run solve, verify and oracle on random separable configurations.
    Batch {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also cross-check every certificate against the oracle.
        #[arg(long)]
        oracle: bool,
        /// Solve with random rainbow colorings.
        #[arg(long)]
        colored: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_INTERNAL, format!("cannot read {}: {e}", path.display())))
}

fn load_config(path: &Path) -> Result<Configuration, Failure> {
    parse_configuration(&read(path)?).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn pipeline_exit(e: &PipelineError) -> u8 {
    match e {
        PipelineError::SeparationInfeasible => EXIT_SEPARATION,
        PipelineError::MuTooLarge { .. } => EXIT_MU_TOO_LARGE,
        PipelineError::EmptyMu
        | PipelineError::NonPrimeR(_)
        | PipelineError::MissingColoring
        | PipelineError::Model(_) => EXIT_PARSE,
        PipelineError::BadHyperplane | PipelineError::Internal(_) => EXIT_INTERNAL,
    }
}

fn cmd_solve(input: &Path, mode: SolveMode, output: Option<&Path>, signs: bool) -> Result<(), Failure> {
    let config = load_config(input)?;
    let cert = solve(&config, mode).map_err(|e| Failure::new(pipeline_exit(&e), e.to_string()))?;
    if signs {
        for (j, (neg, zero, pos)) in cert.sign_pattern().into_iter().enumerate() {
            eprintln!("B{j}: {neg} negative, {zero} zero, {pos} positive");
        }
    }
    let text = serialize_certificate(&cert);
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_INTERNAL, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(input: &Path, cert: &Path) -> Result<(), Failure> {
    let config = load_config(input)?;
    let cert = parse_certificate(&read(cert)?)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", cert.display())))?;
    match verify_certificate(&config, &cert) {
        Verdict::Accept => {
            println!("accept");
            Ok(())
        }
        Verdict::Reject(reason) => {
            println!("reject {reason}");
            Err(Failure::new(EXIT_REJECT, format!("certificate rejected: {reason}")))
        }
    }
}

fn cmd_oracle(input: &Path, expect_nonempty: bool) -> Result<(), Failure> {
    let config = load_config(input)?;
    let listing = oracle_enumerate(&config);
    for blocks in &listing {
        println!("{}", format_blocks(&display_order(blocks)));
    }
    if expect_nonempty && listing.is_empty() {
        return Err(Failure::new(EXIT_ORACLE_EMPTY, "no plus-minus partition found"));
    }
    Ok(())
}

fn cmd_batch(count: usize, seed: u64, oracle: bool, colored: bool) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for i in 0..count {
        let d = rng.gen_range(1..=2);
        let r = rng.gen_range(2..=3);
        let mu_size = rng.gen_range(0..r);
        let kind = if colored { ColoringKind::Random } else { ColoringKind::None };
        let config = random_separable_configuration(&mut rng, d, r, mu_size, kind);
        let mode = if colored { SolveMode::Colored } else { SolveMode::PlusMinus };
        let outcome = solve(&config, mode).map_err(|e| e.to_string()).and_then(|cert| {
            match verify_certificate(&config, &cert) {
                Verdict::Accept => {}
                Verdict::Reject(reason) => return Err(format!("rejected: {reason}")),
            }
            if oracle && !oracle_enumerate(&config).contains(&cert.blocks) {
                return Err("certificate blocks missing from oracle listing".into());
            }
            Ok(())
        });
        if let Err(msg) = outcome {
            failures += 1;
            println!("instance {i} (d={d}, r={r}, |mu|={mu_size}): FAIL {msg}");
        }
    }
    println!("{} of {count} instances passed", count - failures);
    if failures > 0 {
        return Err(Failure::new(EXIT_INTERNAL, format!("{failures} instances failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve { input, mode, output, signs } => cmd_solve(input, *mode, output.as_deref(), *signs),
        Command::Verify { input, cert } => cmd_verify(input, cert),
        Command::Oracle { input, expect_nonempty } => cmd_oracle(input, *expect_nonempty),
        Command::Batch { count, seed, oracle, colored } => cmd_batch(*count, *seed, *oracle, *colored),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tvpm: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
