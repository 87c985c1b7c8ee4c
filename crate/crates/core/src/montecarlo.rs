//! Importance-sampled `λ_eff` over the full three-dimensional weight, for
//! dispersions that depend on the direction of `q`.
//!
//! Sample points `w ∈ R³` are drawn from the normalized density
//! `e^{−w²} w² / ((3/2) π^{3/2})`: `|w|²` is `Gamma(5/2, 1)` and the
//! direction is uniform on the sphere. The estimator is then the plain
//! sample mean of `λ(ω_L(w / r_c))`.
//!
//! Samples are split into fixed blocks of [`BLOCK_SIZE`]. Block `b` draws
//! from ChaCha8 seeded with `seed` on stream `b`, and block statistics are
//! merged in block order, so a given seed gives bitwise-identical output
//! for any number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, UnitSphere};
use rayon::prelude::*;

use crate::error::{ensure_positive, Error, Result};
use crate::heating::{LambdaEffResult, Method};
use crate::spectrum::NoiseSpectrum;

pub const BLOCK_SIZE: usize = 1 << 14;
pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: usize,
    mean: f64,
    /// Sum of squared deviations from `mean`.
    m2: f64,
}

impl Moments {
    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let (na, nb) = (self.count as f64, other.count as f64);
        let delta = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + delta * (nb / count as f64),
            m2: self.m2 + other.m2 + delta * delta * (na * nb / count as f64),
        }
    }
}

/// Monte Carlo `λ_eff` for an arbitrary (possibly anisotropic) dispersion
/// `q ↦ ω_L(q)` with `q` in rad/m.
pub fn lambda_eff_mc<D>(
    spectrum: &NoiseSpectrum,
    dispersion3d: D,
    r_c: f64,
    samples: usize,
    seed: u64,
) -> Result<LambdaEffResult>
where
    D: Fn([f64; 3]) -> f64 + Sync,
{
    ensure_positive("r_c", r_c)?;
    spectrum.validate()?;
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_SAMPLES} samples are required, got {samples}"
        )));
    }
    let radial_sq =
        Gamma::<f64>::new(2.5, 1.0).map_err(|e| Error::InternalConsistency(e.to_string()))?;

    let blocks = samples.div_ceil(BLOCK_SIZE);
    let per_block: Vec<Result<Moments>> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block as u64);
            let n = BLOCK_SIZE.min(samples - block * BLOCK_SIZE);
            let mut values = Vec::with_capacity(n);
            for _ in 0..n {
                let w = radial_sq.sample(&mut rng).sqrt();
                let dir: [f64; 3] = UnitSphere.sample(&mut rng);
                let q = [w * dir[0] / r_c, w * dir[1] / r_c, w * dir[2] / r_c];
                let omega = dispersion3d(q);
                if !omega.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "dispersion returned non-finite frequency {omega} at q = {q:?}"
                    )));
                }
                values.push(spectrum.rate(omega.abs()));
            }
            let mean = values.iter().sum::<f64>() / n as f64;
            let m2 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            Ok(Moments { count: n, mean, m2 })
        })
        .collect();

    let mut total = Moments::default();
    for block in per_block {
        total = total.merge(block?);
    }
    let n = total.count as f64;
    let variance = total.m2 / (n - 1.0);
    Ok(LambdaEffResult {
        value: total.mean,
        error_estimate: (variance / n).sqrt(),
        evaluations: total.count,
        method: Method::MonteCarlo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::Dispersion;

    #[test]
    fn white_noise_is_exact() {
        let s = NoiseSpectrum::white(1.0).unwrap();
        let d = Dispersion::linear(5000.0).unwrap();
        let r = lambda_eff_mc(&s, |q| d.evaluate_vector(q), 1e-7, 50_000, 7).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.error_estimate, 0.0);
        assert_eq!(r.evaluations, 50_000);
        assert_eq!(r.method, Method::MonteCarlo);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let s = NoiseSpectrum::lorentzian(1.0, 5e10).unwrap();
        let d = Dispersion::linear(5000.0).unwrap();
        let a = lambda_eff_mc(&s, |q| d.evaluate_vector(q), 1e-7, 40_000, 99).unwrap();
        let b = lambda_eff_mc(&s, |q| d.evaluate_vector(q), 1e-7, 40_000, 99).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
        let c = lambda_eff_mc(&s, |q| d.evaluate_vector(q), 1e-7, 40_000, 100).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn independent_of_thread_count() {
        let s = NoiseSpectrum::exp_cutoff(1.0, 5e10).unwrap();
        let d = Dispersion::linear(5000.0).unwrap();
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    lambda_eff_mc(&s, |q| d.evaluate_vector(q), 1e-7, 3 * BLOCK_SIZE + 17, 5)
                        .unwrap()
                })
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.value.to_bits(), four.value.to_bits());
        assert_eq!(one.error_estimate.to_bits(), four.error_estimate.to_bits());
    }

    #[test]
    fn radial_moments_match_target_density() {
        // E[w²] under e^{-w²} w⁴ dw is 5/2, E[w⁴] is 35/4
        let radial_sq = Gamma::new(2.5, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 200_000;
        let (mut m1, mut m2) = (0.0, 0.0);
        for _ in 0..n {
            let t: f64 = radial_sq.sample(&mut rng);
            m1 += t;
            m2 += t * t;
        }
        assert!((m1 / n as f64 - 2.5).abs() < 0.02);
        assert!((m2 / n as f64 - 8.75).abs() < 0.15);
    }

    #[test]
    fn validation() {
        let s = NoiseSpectrum::white(1.0).unwrap();
        assert!(lambda_eff_mc(&s, |_| 0.0, 1e-7, 999, 0).is_err());
        assert!(lambda_eff_mc(&s, |_| 0.0, 0.0, 10_000, 0).is_err());
        assert!(lambda_eff_mc(&s, |_| f64::NAN, 1.0, 10_000, 0).is_err());
    }

    #[test]
    fn moments_merge_matches_direct() {
        let xs: Vec<f64> = (0..37).map(|i| (i as f64 * 0.37).sin()).collect();
        let direct = |v: &[f64]| {
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            Moments {
                count: v.len(),
                mean,
                m2: v.iter().map(|x| (x - mean).powi(2)).sum(),
            }
        };
        let whole = direct(&xs);
        let merged = direct(&xs[..10]).merge(direct(&xs[10..]));
        assert!((whole.mean - merged.mean).abs() < 1e-15);
        assert!((whole.m2 - merged.m2).abs() < 1e-13);
    }
}
