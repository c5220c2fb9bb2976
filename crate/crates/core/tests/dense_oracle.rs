//! Ring solver checked against dense linear algebra on the full matrix.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringhopf::spectra::{self, char_poly};
use ringhopf::{Complex64, RingParams};

fn random_ring(rng: &mut ChaCha8Rng, n: usize) -> RingParams {
    let a = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
    let b = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
    RingParams::new(a, b).unwrap()
}

fn dense(p: &RingParams) -> DMatrix<f64> {
    let j = p.jacobian();
    DMatrix::from_fn(p.n(), p.n(), |r, c| j[r][c])
}

/// Pair the two lists so the largest distance is small: repeatedly take the
/// globally closest unmatched pair.
fn matched_max_distance(x: &[Complex64], y: &[Complex64]) -> f64 {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            pairs.push(((a - b).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (mut used_x, mut used_y) = (vec![false; x.len()], vec![false; y.len()]);
    let mut worst: f64 = 0.0;
    for (d, i, j) in pairs {
        if !used_x[i] && !used_y[j] {
            used_x[i] = true;
            used_y[j] = true;
            worst = worst.max(d);
        }
    }
    worst
}

#[test]
fn matches_dense_eigensolver() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.gen_range(3..=12);
        let p = random_ring(&mut rng, n);
        let ours = spectra::eigenvalues(&p).unwrap().eigenvalues;
        let theirs: Vec<Complex64> = dense(&p)
            .complex_eigenvalues()
            .iter()
            .map(|z| Complex64::new(z.re, z.im))
            .collect();
        let d = matched_max_distance(&ours, &theirs);
        assert!(
            d < 1e-8,
            "n={n} a={:?} b={:?}: distance {d:e}",
            p.a(),
            p.b()
        );
        worst = worst.max(d);
    }
    eprintln!("worst root distance {worst:e}");
}

/// `det(J - z I)` by the Leibniz formula.
fn leibniz_det(m: &[Vec<Complex64>]) -> Complex64 {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 1 {
            return vec![vec![0]];
        }
        let mut out = Vec::new();
        for perm in permutations(n - 1) {
            for pos in 0..n {
                let mut p = perm.clone();
                p.insert(pos, n - 1);
                out.push(p);
            }
        }
        out
    }
    let sign = |p: &[usize]| {
        let inversions = (0..p.len())
            .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        if inversions % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    permutations(m.len())
        .iter()
        .map(|p| (0..m.len()).map(|i| m[i][p[i]]).product::<Complex64>() * sign(p))
        .sum()
}

#[test]
fn char_poly_matches_cofactor_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let p = random_ring(&mut rng, 5);
        let cp = char_poly(&p);
        for _ in 0..5 {
            let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let m: Vec<Vec<Complex64>> = p
                .jacobian()
                .iter()
                .enumerate()
                .map(|(r, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(c, &v)| {
                            Complex64::new(v, 0.0)
                                - if r == c { z } else { Complex64::new(0.0, 0.0) }
                        })
                        .collect()
                })
                .collect();
            let expected = leibniz_det(&m);
            let scale = 1.0 + expected.norm();
            assert!((cp.eval(z) - expected).norm() < 1e-11 * scale);
            let expanded = cp.coefficients.eval_complex(z);
            assert!((expanded - expected).norm() < 1e-10 * scale);
        }
    }
}

#[test]
fn sum_and_product_of_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let n = rng.gen_range(3..=12);
        let p = random_ring(&mut rng, n);
        let s = spectra::eigenvalues(&p).unwrap();
        let sum: Complex64 = s.eigenvalues.iter().sum();
        let trace: f64 = p.a().iter().sum();
        let scale = p.a().iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        assert!((sum.re - trace).abs() < 1e-9 * scale && sum.im.abs() < 1e-9 * scale);

        let prod: Complex64 = s.eigenvalues.iter().product();
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let det = p.a().iter().product::<f64>() + sign * p.b().iter().product::<f64>();
        let prod_scale = p.a().iter().map(|x| x.abs()).product::<f64>()
            + p.b().iter().map(|x| x.abs()).product::<f64>();
        assert!(
            (prod.re - det).abs() < 1e-9 * prod_scale && prod.im.abs() < 1e-9 * prod_scale,
            "prod {prod} det {det}"
        );
    }
}

#[test]
fn eigenvectors_close_and_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..300 {
        let n = rng.gen_range(3..=10);
        let p = random_ring(&mut rng, n);
        for &mu in &spectra::eigenvalues(&p).unwrap().eigenvalues {
            let v = spectra::eigenvector_for(&p, mu).unwrap();
            assert!((v.closure - 1.0).norm() < 1e-8);
            let norm = v.moduli.iter().cloned().fold(0.0, f64::max);
            assert!(spectra::eigen_residual(&p, mu, &v.entries) < 1e-8 * norm * (1.0 + mu.norm()));
        }
    }
}
