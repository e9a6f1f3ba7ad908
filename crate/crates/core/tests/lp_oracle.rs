//! Cross-checks the simplex against exhaustive vertex enumeration on small
//! programs with nonnegative variables.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tvpm_core::arith::int;
use tvpm_core::lp::{lp_solve, LinearProgram, LpOutcome, Relation};

type Q = BigRational;

/// Determinant by cofactor expansion; fine for n <= 3.
fn det(m: &[Vec<Q>]) -> Q {
    match m.len() {
        0 => Q::one(),
        1 => m[0][0].clone(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<Q>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum(),
    }
}

/// Cramer's rule; `None` when the system is singular.
fn cramer(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let d = det(a);
    if d.is_zero() {
        return None;
    }
    Some(
        (0..a.len())
            .map(|j| {
                let replaced: Vec<Vec<Q>> = a
                    .iter()
                    .zip(b)
                    .map(|(row, bi)| {
                        let mut row = row.clone();
                        row[j] = bi.clone();
                        row
                    })
                    .collect();
                det(&replaced) / &d
            })
            .collect(),
    )
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// All feasible vertices: every choice of n tight rows (constraints or
/// `x_i = 0`) with a unique solution that satisfies the whole program.
fn feasible_vertices(lp: &LinearProgram) -> Vec<Vec<Q>> {
    let n = lp.num_vars();
    let mut rows: Vec<(Vec<Q>, Q)> = lp.constraints().iter().map(|c| (c.coeffs.clone(), c.rhs.clone())).collect();
    for i in 0..n {
        let mut e = vec![Q::zero(); n];
        e[i] = Q::one();
        rows.push((e, Q::zero()));
    }
    subsets(rows.len(), n)
        .into_iter()
        .filter_map(|pick| {
            let a: Vec<Vec<Q>> = pick.iter().map(|&i| rows[i].0.clone()).collect();
            let b: Vec<Q> = pick.iter().map(|&i| rows[i].1.clone()).collect();
            cramer(&a, &b)
        })
        .filter(|x| lp.is_feasible_point(x))
        .collect()
}

fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=6);
    let mut lp = LinearProgram::new(n);
    for _ in 0..m {
        let coeffs = (0..n).map(|_| int(rng.gen_range(-4..=4))).collect();
        let rel = match rng.gen_range(0..5) {
            0 => Relation::Eq,
            1 | 2 => Relation::Ge,
            _ => Relation::Le,
        };
        lp.add_constraint(coeffs, rel, int(rng.gen_range(-6..=6)));
    }
    lp.maximize((0..n).map(|_| int(rng.gen_range(-3..=3))).collect());
    lp
}

#[test]
fn simplex_agrees_with_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (mut feasible, mut infeasible, mut unbounded) = (0, 0, 0);
    for _ in 0..400 {
        let lp = random_lp(&mut rng);
        let vertices = feasible_vertices(&lp);
        let objective = lp.objective().unwrap().to_vec();
        let value = |x: &[Q]| -> Q { x.iter().zip(&objective).map(|(a, b)| a * b).sum() };
        match lp_solve(&lp).unwrap() {
            LpOutcome::Infeasible => {
                assert!(vertices.is_empty(), "simplex says infeasible, oracle found {vertices:?}");
                infeasible += 1;
            }
            LpOutcome::Optimal(sol) => {
                assert!(lp.is_feasible_point(&sol.point));
                let best = vertices.iter().map(|v| value(v)).max().expect("oracle found no vertex");
                assert_eq!(value(&sol.point), best);
                feasible += 1;
            }
            LpOutcome::Unbounded => {
                assert!(!vertices.is_empty());
                unbounded += 1;
            }
        }
    }
    assert!(feasible > 20 && infeasible > 20, "{feasible} feasible, {infeasible} infeasible, {unbounded} unbounded");
}
