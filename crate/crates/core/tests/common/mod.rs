//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Weighted pool-adjacent-violators fit of `y` (isotonic, nondecreasing).
pub fn pava(y: &[f64], w: &[f64]) -> Vec<f64> {
    // Blocks of (weighted mean, weight, size).
    let mut blocks: Vec<(f64, f64, usize)> = Vec::new();
    for (&yi, &wi) in y.iter().zip(w) {
        blocks.push((yi, wi, 1));
        while blocks.len() > 1 {
            let (m2, w2, s2) = blocks[blocks.len() - 1];
            let (m1, w1, s1) = blocks[blocks.len() - 2];
            if m1 <= m2 {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            blocks.push(((m1 * w1 + m2 * w2) / (w1 + w2), w1 + w2, s1 + s2));
        }
    }
    blocks.iter().flat_map(|&(m, _, s)| std::iter::repeat_n(m, s)).collect()
}

/// Greatest convex minorant of points with increasing abscissae, evaluated
/// at every abscissa by minimizing over all spanning chords (O(n^3)).
pub fn brute_force_gcm(points: &[(f64, f64)]) -> Vec<f64> {
    let n = points.len();
    (0..n)
        .map(|i| {
            let x = points[i].0;
            let mut best = points[i].1;
            for j in 0..=i {
                for k in i..n {
                    if j == k {
                        continue;
                    }
                    let (xj, yj) = points[j];
                    let (xk, yk) = points[k];
                    let v = yj + (yk - yj) * (x - xj) / (xk - xj);
                    best = best.min(v);
                }
            }
            best
        })
        .collect()
}

/// Indices of the extreme points of the lower hull: points lying strictly
/// below every chord that spans them.
pub fn brute_force_vertices(points: &[(f64, f64)], tol: f64) -> Vec<usize> {
    let n = points.len();
    (0..n)
        .filter(|&i| {
            (0..i).all(|j| {
                (i + 1..n).all(|k| {
                    let (xj, yj) = points[j];
                    let (xk, yk) = points[k];
                    let chord = yj + (yk - yj) * (points[i].0 - xj) / (xk - xj);
                    points[i].1 < chord - tol * (1.0 + chord.abs())
                })
            })
        })
        .collect()
}

/// `n` sorted, distinct abscissae in `(0, 1)`.
pub fn sorted_uniform(r: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
    x.sort_by(f64::total_cmp);
    x.dedup();
    x
}

pub fn normal(r: &mut impl Rng) -> f64 {
    rand_distr::Distribution::sample(&rand_distr::StandardNormal, r)
}
