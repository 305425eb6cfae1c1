//! Seeded Monte Carlo probe of staircase-APD gain statistics.
//!
//! Every trial starts with one carrier. At step `x` each carrier present
//! independently produces one extra carrier with probability `p_x`; the
//! trial's gain `M` is the final carrier count.
//!
//! Random numbers come from ChaCha8 (`rand_chacha`). Worker `w` of a run
//! with seed `s` uses `ChaCha8Rng::seed_from_u64(s)` on stream `w`, and
//! handles trials `[w·⌊T/W⌋ + min(w, T mod W), ...)` in order. Results are
//! therefore bit-identical for a fixed `(seed, trials, workers)` triple.
//! Moment sums are kept as exact integers, so the mean and second moment do
//! not depend on how workers are merged.

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::apd::StaircaseApd;
use crate::error::{Error, Result};

/// Upper bound on the expected number of per-carrier Bernoulli draws in one
/// run.
pub const EVENT_BUDGET: f64 = 1e9;

/// How a Monte Carlo run is sized and seeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::ZeroTrials);
        }
        if self.workers == 0 {
            return Err(Error::ZeroWorkers);
        }
        Ok(())
    }
}

/// Sample gain statistics of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    /// Sample `⟨M⟩`.
    pub mean: f64,
    /// Sample `⟨M²⟩`.
    pub second_moment: f64,
    /// Unbiased sample variance of `M`.
    pub variance: f64,
    /// `⟨M²⟩ / ⟨M⟩²`.
    pub excess_noise: f64,
    /// `sqrt(variance / trials)`.
    pub std_error_mean: f64,
    /// Standard error of the sample second moment.
    pub std_error_second_moment: f64,
}

/// Gain of a single multiplication step, `M = 1 + Bernoulli(p)`.
pub fn mc_step_gain(p: f64, trials: u64, seed: u64) -> Result<McEstimate> {
    mc_step_gain_with(p, McConfig::new(trials, seed))
}

pub fn mc_step_gain_with(p: f64, config: McConfig) -> Result<McEstimate> {
    let coin = bernoulli(p)?;
    config.check()?;
    Ok(run(config, |rng| 1 + u64::from(coin.sample(rng))))
}

/// Final carrier count of the full branching process through every step.
pub fn mc_total_gain(apd: &StaircaseApd<f64>, trials: u64, seed: u64) -> Result<McEstimate> {
    mc_total_gain_with(apd, McConfig::new(trials, seed))
}

pub fn mc_total_gain_with(apd: &StaircaseApd<f64>, config: McConfig) -> Result<McEstimate> {
    config.check()?;
    let coins = apd
        .steps()
        .iter()
        .map(|&p| bernoulli(p))
        .collect::<Result<Vec<_>>>()?;

    let requested = config.trials as f64 * expected_draws_per_trial(apd.steps());
    if !(requested <= EVENT_BUDGET) {
        return Err(Error::EventBudget {
            requested,
            budget: EVENT_BUDGET,
        });
    }

    Ok(run(config, |rng| {
        let mut carriers: u64 = 1;
        for coin in &coins {
            let born = (0..carriers).filter(|_| coin.sample(rng)).count() as u64;
            carriers += born;
        }
        carriers
    }))
}

/// `Σ_x ∏_{y<x} (1 + p_y)`: expected carriers entering each step, summed.
fn expected_draws_per_trial(steps: &[f64]) -> f64 {
    let mut carriers = 1.0;
    let mut draws = 0.0;
    for &p in steps {
        draws += carriers;
        carriers *= 1.0 + p;
    }
    draws
}

fn bernoulli(p: f64) -> Result<Bernoulli> {
    Bernoulli::new(p).map_err(|_| Error::ProbabilityOutOfRange(p))
}

#[derive(Debug, Default, Clone, Copy)]
struct Sums {
    n: u64,
    m: u128,
    m2: u128,
    m4: f64,
}

impl Sums {
    fn push(&mut self, gain: u64) {
        let g = u128::from(gain);
        self.n += 1;
        self.m += g;
        self.m2 += g * g;
        let gf = gain as f64;
        self.m4 += gf * gf * gf * gf;
    }

    fn merge(&mut self, other: Sums) {
        self.n += other.n;
        self.m += other.m;
        self.m2 += other.m2;
        self.m4 += other.m4;
    }
}

fn run<F>(config: McConfig, sample: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng) -> u64 + Sync,
{
    let workers = config.workers.min(usize::try_from(config.trials).unwrap_or(usize::MAX));
    let per_worker = |w: usize| {
        let base = config.trials / workers as u64;
        let extra = u64::from((w as u64) < config.trials % workers as u64);
        base + extra
    };
    let simulate = |w: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(w as u64);
        let mut sums = Sums::default();
        for _ in 0..per_worker(w) {
            sums.push(sample(&mut rng));
        }
        sums
    };

    let mut total = Sums::default();
    if workers == 1 {
        total = simulate(0);
    } else {
        let parts: Vec<Sums> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let simulate = &simulate;
                    scope.spawn(move || simulate(w))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("Monte Carlo worker panicked"))
                .collect()
        });
        for part in parts {
            total.merge(part);
        }
    }
    summarize(config, workers, total)
}

fn summarize(config: McConfig, workers: usize, s: Sums) -> McEstimate {
    let n = s.n as f64;
    let mean = s.m as f64 / n;
    let second_moment = s.m2 as f64 / n;

    let variance = if s.n < 2 {
        0.0
    } else {
        // n·ΣM² − (ΣM)², exact while it fits in u128
        let nu = u128::from(s.n);
        let spread = nu
            .checked_mul(s.m2)
            .zip(s.m.checked_mul(s.m))
            .map(|(a, b)| (a - b) as f64)
            .unwrap_or_else(|| n * s.m2 as f64 - (s.m as f64) * (s.m as f64));
        (spread / (n * (n - 1.0))).max(0.0)
    };
    let variance_sq = if s.n < 2 {
        0.0
    } else {
        let m2 = s.m2 as f64;
        ((s.m4 - m2 * m2 / n) / (n - 1.0)).max(0.0)
    };

    McEstimate {
        trials: config.trials,
        seed: config.seed,
        workers,
        mean,
        second_moment,
        variance,
        excess_noise: second_moment / (mean * mean),
        std_error_mean: (variance / n).sqrt(),
        std_error_second_moment: (variance_sq / n).sqrt(),
    }
}
