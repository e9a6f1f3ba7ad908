//! Random configurations satisfying the plus-minus hypotheses, for property
//! tests, the batch driver and benchmarks.

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::arith::{dot, frac, int, Point, Scalar};
use crate::model::{tverberg_point_count, Coloring, Configuration, Face, Mode};

/// How to color a random instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColoringKind {
    None,
    /// Every vertex its own color.
    Discrete,
    /// Random classes of size `1..=r-1`.
    Random,
}

fn random_scalar<R: Rng>(rng: &mut R) -> Scalar {
    frac(rng.gen_range(-12..=12), rng.gen_range(1..=3))
}

/// Moves `p` along `w` until `⟨p, w⟩` is strictly negative (`below`) or
/// strictly positive.
fn push_to_side(p: Point, w: &[Scalar], below: bool) -> Point {
    let norm2 = dot(w, w);
    let s = p.dot(w);
    let wrong = if below { !s.is_negative() } else { !s.is_positive() };
    if !wrong {
        return p;
    }
    let steps = (s.abs() / &norm2).floor() + int(1);
    let dir = Point::new(w.to_vec());
    let mut q = p;
    q.add_scaled(&dir, &if below { -steps } else { steps });
    q
}

/// A random coloring of `0..n` with classes of size at most `r - 1`.
pub fn random_coloring<R: Rng>(rng: &mut R, n: usize, r: usize) -> Coloring {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut classes = Vec::new();
    let mut rest = &order[..];
    while !rest.is_empty() {
        let size = rng.gen_range(1..=(r - 1).min(rest.len()));
        classes.push(rest[..size].to_vec());
        rest = &rest[size..];
    }
    Coloring::new(classes, n, r).expect("class sizes bounded by r - 1")
}

/// A configuration with `|μ| = mu_size` whose `μ` points lie strictly on one
/// side of a random hyperplane through the origin and all other points
/// strictly on the other side.
pub fn random_separable_configuration<R: Rng>(
    rng: &mut R,
    d: usize,
    r: usize,
    mu_size: usize,
    coloring: ColoringKind,
) -> Configuration {
    let n = tverberg_point_count(d, r);
    let w: Vec<Scalar> = loop {
        let w: Vec<Scalar> = (0..d).map(|_| int(rng.gen_range(-3..=3))).collect();
        if w.iter().any(|x| !x.is_zero()) {
            break w;
        }
    };
    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(rng);
    let mu = Face::new(indices[..mu_size.min(n)].to_vec()).expect("distinct indices");
    let points = (0..n)
        .map(|v| {
            let p = Point::new((0..d).map(|_| random_scalar(rng)).collect());
            push_to_side(p, &w, mu.contains(v))
        })
        .collect();
    let (mode, coloring) = match coloring {
        ColoringKind::None => (Mode::Classical, None),
        ColoringKind::Discrete => (Mode::Colored, Some(Coloring::discrete(n))),
        ColoringKind::Random => (Mode::Colored, Some(random_coloring(rng, n, r))),
    };
    Configuration::new(d, r, points, mode, coloring, mu).expect("generated configuration is valid")
}

/// `count` random points in `R^d` with small integer coordinates.
pub fn random_points<R: Rng>(rng: &mut R, count: usize, d: usize) -> Vec<Point> {
    (0..count)
        .map(|_| Point::new((0..d).map(|_| int(rng.gen_range(-20..=20))).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::Hyperplane;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_instances_are_separable_by_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let d = rng.gen_range(1..=3);
            let r = rng.gen_range(2..=3);
            let k = rng.gen_range(0..r);
            let c = random_separable_configuration(&mut rng, d, r, k, ColoringKind::Random);
            assert_eq!(c.mu().len(), k);
            assert!(c.coloring().unwrap().classes().iter().all(|cl| cl.len() < r));
            if k > 0 {
                assert!(crate::separation::hull_common_point(&c, c.mu()).is_none());
            }
        }
    }

    #[test]
    fn push_to_side_moves_strictly() {
        let w = vec![int(1), int(-2)];
        let p = push_to_side(Point::from_ints(&[5, 0]), &w, true);
        assert!(p.dot(&w).is_negative());
        let q = push_to_side(Point::from_ints(&[0, 0]), &w, false);
        assert!(q.dot(&w).is_positive());
        let h = Hyperplane { w, alpha: int(0) };
        assert!(h.strictly_separates([&p], [&q]));
    }
}
