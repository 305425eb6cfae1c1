//! Staircase avalanche photodiode excess-noise analytics and their mapping
//! onto an equivalent cascade network.
//!
//! Each step `x` multiplies a carrier with gain `M_x = 1 + B`, `B ~
//! Bernoulli(p_x)`, so `⟨M_x⟩ = 1 + p_x`, `var(M_x) = p_x(1 − p_x)`,
//! `⟨M_x²⟩ = 1 + 3p_x`, and the stepwise excess noise factor is
//! `⟨M_x²⟩/⟨M_x⟩² = (1 + 3p_x)/(1 + p_x)²`.

use crate::engine::{self, product};
use crate::error::{Error, Result};
use crate::network::{CascadeNetwork, NoiseFactor, PowerLevel, StageSpec};
use crate::scalar::Scalar;

/// Per-step ionization probabilities of a staircase APD.
#[derive(Debug, Clone, PartialEq)]
pub struct StaircaseApd<T> {
    steps: Vec<T>,
}

impl<T: Scalar> StaircaseApd<T> {
    pub fn new(steps: Vec<T>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidApd("at least one step is required".into()));
        }
        if let Some((i, p)) = steps.iter().enumerate().find(|(_, p)| !valid_probability(**p)) {
            return Err(Error::InvalidApd(format!(
                "step {}: ionization probability must lie in [0, 1], got {}",
                i + 1,
                p
            )));
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[T] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `∏ (1 + p_x)`, the mean total gain.
    pub fn mean_gain(&self) -> T {
        self.steps.iter().fold(T::one(), |acc, &p| acc * (T::one() + p))
    }
}

fn valid_probability<T: Scalar>(p: T) -> bool {
    p >= T::zero() && p <= T::one()
}

/// Gain moments of one multiplication step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats<T> {
    pub probability: T,
    pub mean_gain: T,
    pub variance: T,
    pub second_moment: T,
    pub excess_noise: NoiseFactor<T>,
}

pub fn step_stats<T: Scalar>(p: T) -> Result<StepStats<T>> {
    if !valid_probability(p) {
        return Err(Error::ProbabilityOutOfRange(p.as_f64()));
    }
    let mean_gain = T::one() + p;
    let variance = p * (T::one() - p);
    Ok(StepStats {
        probability: p,
        mean_gain,
        variance,
        second_moment: T::one() + T::lit(3.0) * p,
        excess_noise: NoiseFactor::from_excess(variance / (mean_gain * mean_gain)),
    })
}

/// `(1 + 3p)/(1 + p)²`, the ratio form of the stepwise excess noise factor.
pub fn step_excess_noise_ratio<T: Scalar>(p: T) -> T {
    let m = T::one() + p;
    (T::one() + T::lit(3.0) * p) / (m * m)
}

/// Product of the stepwise excess noise factors.
pub fn total_excess_noise<T: Scalar>(apd: &StaircaseApd<T>) -> NoiseFactor<T> {
    product(apd.steps.iter().map(|&p| {
        step_stats(p)
            .expect("StaircaseApd holds validated probabilities")
            .excess_noise
    }))
}

/// Cascade whose corrected stage-wise factors reproduce the stepwise excess
/// noise factors of `apd`.
///
/// Stage `x` gets power gain `(1 + p_x)²`, no external noise, and internal
/// noise `N_int(x) = δ_x·N_i(x)·G_x` with `δ_x = p_x(1 − p_x)/(1 + p_x)²`.
pub fn apd_to_cascade<T: Scalar>(
    apd: &StaircaseApd<T>,
    input_signal: PowerLevel<T>,
    input_noise: PowerLevel<T>,
) -> Result<CascadeNetwork<T>> {
    let mut net = CascadeNetwork::new_unchecked(input_signal.0, input_noise.0, Vec::new());
    for (i, &p) in apd.steps.iter().enumerate() {
        let stats = step_stats(p)?;
        let gain = stats.mean_gain * stats.mean_gain;
        net.stages.push(StageSpec::ideal(gain));
        // N_i(x) does not depend on stage x itself.
        let stage_input = engine::stage_input_noise(&net, i + 1)?.0;
        net.stages[i].internal_noise = PowerLevel(stats.excess_noise.excess() * stage_input * gain);
    }
    net.validated()?;
    Ok(net)
}
