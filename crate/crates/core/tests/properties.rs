use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tvpm_core::arith::{frac, int, Point};
use tvpm_core::model::Mode;
use tvpm_core::pipeline::{run_with_hyperplane, solve, SolveMode};
use tvpm_core::random::{random_points, random_separable_configuration, ColoringKind};
use tvpm_core::separation::{hull_common_point, separates, separating_hyperplane, Hyperplane, SeparationError};
use tvpm_core::solver::hulls_intersect;
use tvpm_core::verify::{oracle_certificate, oracle_enumerate, verify_certificate, Verdict};
use tvpm_core::{
    parse_certificate, parse_configuration, serialize_certificate, serialize_configuration, Configuration, Face,
};

fn config_from_seed(seed: u64, kind: ColoringKind) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.gen_range(1..=2);
    let r = rng.gen_range(2..=3);
    let k = rng.gen_range(0..r);
    random_separable_configuration(&mut rng, d, r, k, kind)
}

fn in_hull(points: &[Point], p: &Point) -> bool {
    hulls_intersect(&[points.to_vec(), vec![p.clone()]]).is_some()
}

#[test]
fn separation_and_hull_intersection_are_dual() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let (mut sep, mut insep) = (0, 0);
    for _ in 0..150 {
        let d = rng.gen_range(1..=3);
        let r = 2;
        let n = (d + 1) * (r - 1) + 1;
        let points = random_points(&mut rng, n, d);
        let size = rng.gen_range(1..n);
        let mut mu: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            mu.swap(i, rng.gen_range(0..=i));
        }
        mu.truncate(size);
        let mu = Face::new(mu).unwrap();
        let config = Configuration::new(d, r, points.clone(), Mode::Classical, None, mu.clone()).unwrap();
        let common = hull_common_point(&config, &mu);
        match separating_hyperplane(&config, &mu) {
            Ok(h) => {
                assert!(separates(&config, &mu, &h));
                assert!(common.is_none());
                sep += 1;
            }
            Err(SeparationError::SeparationInfeasible) => {
                let p = common.expect("inseparable faces share a point");
                let inside: Vec<Point> = mu.vertices().iter().map(|&v| points[v].clone()).collect();
                let outside: Vec<Point> =
                    mu.complement(n).vertices().iter().map(|&v| points[v].clone()).collect();
                assert!(in_hull(&inside, &p) && in_hull(&outside, &p));
                insep += 1;
            }
            Err(e) => panic!("unexpected {e}"),
        }
    }
    assert!(sep > 10 && insep > 10, "{sep} separable, {insep} inseparable");
}

#[test]
fn any_separating_hyperplane_gives_a_valid_certificate() {
    for seed in 0..40 {
        let config = config_from_seed(seed, ColoringKind::None);
        if config.mu().is_empty() {
            continue;
        }
        let h = separating_hyperplane(&config, config.mu()).unwrap();
        let variants = [
            Hyperplane { w: h.w.iter().map(|x| x * int(3)).collect(), alpha: &h.alpha * int(3) },
            Hyperplane { w: h.w.clone(), alpha: &h.alpha + frac(1, 3) },
            Hyperplane { w: h.w.clone(), alpha: &h.alpha - frac(1, 3) },
        ];
        for alt in variants {
            if !separates(&config, config.mu(), &alt) {
                continue;
            }
            let run = run_with_hyperplane(&config, SolveMode::PlusMinus, &alt).unwrap();
            assert_eq!(verify_certificate(&config, &run.certificate), Verdict::Accept, "seed {seed}");
        }
    }
}

#[test]
fn oracle_is_sound_and_contains_pipeline_output() {
    for seed in 100..130 {
        let kind = if seed % 2 == 0 { ColoringKind::Random } else { ColoringKind::None };
        let config = config_from_seed(seed, kind);
        let listing = oracle_enumerate(&config);
        assert!(!listing.is_empty(), "seed {seed}");
        let coloring = match config.mode() {
            Mode::Colored => config.coloring(),
            Mode::Classical => None,
        };
        for blocks in &listing {
            let cert = oracle_certificate(&config, config.mu(), coloring, blocks).expect("listed blocks certify");
            assert_eq!(verify_certificate(&config, &cert), Verdict::Accept, "seed {seed}, {blocks:?}");
        }
        let cert = tvpm_core::plus_minus_partition(&config).unwrap();
        assert!(listing.contains(&cert.blocks), "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solve_verify_and_round_trip(seed in any::<u64>(), colored in any::<bool>()) {
        let kind = if colored { ColoringKind::Random } else { ColoringKind::None };
        let config = config_from_seed(seed, kind);
        let text = serialize_configuration(&config);
        prop_assert_eq!(&parse_configuration(&text).unwrap(), &config);

        let cert = tvpm_core::plus_minus_partition(&config).unwrap();
        prop_assert_eq!(verify_certificate(&config, &cert), Verdict::Accept);
        prop_assert_eq!(cert.rainbow, colored);
        let back = parse_certificate(&serialize_certificate(&cert)).unwrap();
        prop_assert_eq!(&back, &cert);

        // Coefficients follow the sign pattern of mu.
        prop_assert!(cert.sign_violation().is_none());
    }

    #[test]
    fn corollary_blocks_hold_at_most_one_mu_vertex(seed in any::<u64>()) {
        let config = config_from_seed(seed, ColoringKind::None);
        prop_assume!(!config.mu().is_empty());
        let cert = solve(&config, SolveMode::Corollary).unwrap();
        for block in &cert.blocks {
            prop_assert!(block.iter().filter(|&&v| config.mu().contains(v)).count() <= 1);
        }
        prop_assert_eq!(verify_certificate(&config, &cert), Verdict::Accept);
    }
}
