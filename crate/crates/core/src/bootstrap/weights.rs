use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Exchangeable bootstrap weight distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    /// Multinomial counts: the nonparametric bootstrap.
    #[default]
    Multinomial,
    /// Normalized unit exponentials: the Bayesian bootstrap.
    Dirichlet,
}

impl std::str::FromStr for WeightScheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "multinomial" => Ok(WeightScheme::Multinomial),
            "dirichlet" => Ok(WeightScheme::Dirichlet),
            other => Err(format!("unknown weight scheme '{other}'")),
        }
    }
}

/// Generator for substream `stream` of `seed`. Streams are independent, so
/// replication `b` always sees the same numbers whatever thread runs it.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mixes a seed with a path of tags into a new seed (splitmix64 finalizer).
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    let mut z = seed;
    for &t in tags {
        z = z
            .wrapping_add(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(t.wrapping_mul(0xD1B5_4A32_D192_ED03));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// Counts of `trials` uniform draws among `n` cells.
pub fn multinomial_counts<T: Scalar, R: Rng + ?Sized>(trials: usize, n: usize, rng: &mut R) -> Vec<T> {
    let mut counts = vec![0usize; n];
    for _ in 0..trials {
        counts[rng.random_range(0..n)] += 1;
    }
    counts.into_iter().map(T::from_count).collect()
}

/// Draws `n` exchangeable weights summing to `n`.
pub fn draw_weights<T: Scalar, R: Rng + ?Sized>(scheme: WeightScheme, n: usize, rng: &mut R) -> Vec<T> {
    match scheme {
        WeightScheme::Multinomial => multinomial_counts(n, n, rng),
        WeightScheme::Dirichlet => {
            let e: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
            let total: f64 = e.iter().sum();
            let scale = n as f64 / total;
            e.into_iter().map(|v| T::lit(v * scale)).collect()
        }
    }
}
