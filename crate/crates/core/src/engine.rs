//! Signal/noise propagation through a cascade and every noise-factor
//! formula, each evaluated along its own path so they can cross-check one
//! another.
//!
//! Stage indices are 1-based throughout: stage `x` reads node `x − 1` of the
//! propagation trace and writes node `x`.
//!
//! | function                              | form                                          |
//! |---------------------------------------|-----------------------------------------------|
//! | [`stage_factor_friis`]                | `1 + N_ext(x) / (N_i·G_x)`                    |
//! | [`stage_factor_corrected`]            | `1 + (N_int(x)+N_ext(x)) / (N_i(x)·G_x)`      |
//! | [`stage_factor_corrected_recursive`]  | same, from `N_i·∏G_j·∏F_k` over earlier stages |
//! | [`total_base_friis`]                  | `1 + Σ N_ext(x) / (N_i·∏_{y≤x} G_y)`          |
//! | [`total_base_corrected`]              | `1 + Σ (N_int+N_ext)(x) / (N_i·∏_{y≤x} G_y)`  |
//! | [`total_friis_composition`]           | `F_1 + Σ_{x≥2} (F_x − 1) / ∏_{y<x} G_y`       |
//! | [`total_product_composition`]         | `∏ F_x` (corrected stage factors)            |
//! | [`snr_ratio_total`]                   | `SNR_in / SNR_out` from [`propagate`]         |

use std::fmt;

use crate::error::{Error, Result};
use crate::network::{CascadeNetwork, NoiseFactor, PowerLevel};
use crate::scalar::{rel_diff, Scalar};

/// Relative tolerance for the algebraic identities between formula paths.
pub const IDENTITY_REL_TOL: f64 = 1e-12;

/// Signal and noise power at one node of the cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeState<T> {
    pub signal: PowerLevel<T>,
    pub noise: PowerLevel<T>,
}

impl<T: Scalar> NodeState<T> {
    pub fn snr(&self) -> T {
        self.signal.0 / self.noise.0
    }
}

/// Node 0 is the network input; node `x` is the output of stage `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationTrace<T> {
    pub nodes: Vec<NodeState<T>>,
}

impl<T: Scalar> PropagationTrace<T> {
    pub fn input(&self) -> &NodeState<T> {
        &self.nodes[0]
    }

    pub fn output(&self) -> &NodeState<T> {
        self.nodes.last().expect("trace always holds the input node")
    }

    /// `SNR_o(x−1) / SNR_o(x)`: the stage-wise factor read straight off the
    /// trace.
    pub fn stage_snr_ratio(&self, x: usize) -> Result<T> {
        if x == 0 || x >= self.nodes.len() {
            return Err(Error::StageOutOfRange {
                index: x,
                stages: self.nodes.len() - 1,
            });
        }
        Ok(self.nodes[x - 1].snr() / self.nodes[x].snr())
    }
}

pub fn propagate<T: Scalar>(network: &CascadeNetwork<T>) -> Result<PropagationTrace<T>> {
    network.validated()?;
    let mut node = NodeState {
        signal: network.input_signal,
        noise: network.input_noise,
    };
    let mut nodes = Vec::with_capacity(network.len() + 1);
    nodes.push(node);
    for s in &network.stages {
        node = NodeState {
            signal: PowerLevel(node.signal.0 * s.power_gain),
            noise: PowerLevel(node.noise.0 * s.power_gain + s.added_noise()),
        };
        nodes.push(node);
    }
    Ok(PropagationTrace { nodes })
}

fn check_index<T: Scalar>(network: &CascadeNetwork<T>, x: usize) -> Result<()> {
    network.validated()?;
    network.stage(x).map(|_| ())
}

/// Noise power at the input terminals of stage `x`: the source noise
/// amplified by every earlier stage plus each earlier stage's added noise
/// amplified by the stages between it and `x`.
pub fn stage_input_noise<T: Scalar>(network: &CascadeNetwork<T>, x: usize) -> Result<PowerLevel<T>> {
    check_index(network, x)?;
    Ok(PowerLevel(input_noise_at(network, x)))
}

fn input_noise_at<T: Scalar>(network: &CascadeNetwork<T>, x: usize) -> T {
    // Walk backwards from stage x-1 so the downstream gain product is built
    // once per stage.
    let mut downstream_gain = T::one();
    let mut added = T::zero();
    for s in network.stages[..x - 1].iter().rev() {
        added = added + s.added_noise() * downstream_gain;
        downstream_gain = downstream_gain * s.power_gain;
    }
    network.input_noise.0 * downstream_gain + added
}

/// Friis' stage-wise factor. Uses the source noise `N_i` regardless of the
/// stage position and ignores internal noise.
pub fn stage_factor_friis<T: Scalar>(network: &CascadeNetwork<T>, x: usize) -> Result<NoiseFactor<T>> {
    check_index(network, x)?;
    Ok(friis_at(network, x))
}

fn friis_at<T: Scalar>(network: &CascadeNetwork<T>, x: usize) -> NoiseFactor<T> {
    let s = &network.stages[x - 1];
    NoiseFactor::from_excess(s.external_noise.0 / (network.input_noise.0 * s.power_gain))
}

/// Corrected stage-wise factor `N_o(x) / (N_i(x)·G_x)`.
pub fn stage_factor_corrected<T: Scalar>(
    network: &CascadeNetwork<T>,
    x: usize,
) -> Result<NoiseFactor<T>> {
    check_index(network, x)?;
    Ok(corrected_at(network, x, input_noise_at(network, x)))
}

fn corrected_at<T: Scalar>(network: &CascadeNetwork<T>, x: usize, input_noise: T) -> NoiseFactor<T> {
    let s = &network.stages[x - 1];
    NoiseFactor::from_excess(s.added_noise() / (input_noise * s.power_gain))
}

/// Corrected stage-wise factor expressed through the factors of the stages
/// before it, `1 + (N_int+N_ext)(x) / (N_i·∏_{j≤x} G_j·∏_{k<x} F_k)`.
///
/// Recomputes every earlier factor by the same recursion and never touches
/// the stage input noise, so it is an independent route to
/// [`stage_factor_corrected`].
pub fn stage_factor_corrected_recursive<T: Scalar>(
    network: &CascadeNetwork<T>,
    x: usize,
) -> Result<NoiseFactor<T>> {
    check_index(network, x)?;
    let n_i = network.input_noise.0;
    let mut gains = T::one();
    let mut factors = T::one();
    let mut last = NoiseFactor::unity();
    for s in &network.stages[..x] {
        gains = gains * s.power_gain;
        last = NoiseFactor::from_excess(s.added_noise() / (n_i * gains * factors));
        factors = factors * last.value();
    }
    Ok(last)
}

/// Friis' total factor; internal noises are excluded by construction.
pub fn total_base_friis<T: Scalar>(network: &CascadeNetwork<T>) -> Result<NoiseFactor<T>> {
    network.validated()?;
    Ok(base_sum(network, |s| s.external_noise.0))
}

/// Total factor including internal noises.
pub fn total_base_corrected<T: Scalar>(network: &CascadeNetwork<T>) -> Result<NoiseFactor<T>> {
    network.validated()?;
    Ok(base_sum(network, |s| s.added_noise()))
}

fn base_sum<T: Scalar>(
    network: &CascadeNetwork<T>,
    noise: impl Fn(&crate::network::StageSpec<T>) -> T,
) -> NoiseFactor<T> {
    let n_i = network.input_noise.0;
    let mut gains = T::one();
    let mut excess = T::zero();
    for s in &network.stages {
        gains = gains * s.power_gain;
        excess = excess + noise(s) / (n_i * gains);
    }
    NoiseFactor::from_excess(excess)
}

/// Friis' total factor composed from his stage-wise factors.
pub fn total_friis_composition<T: Scalar>(network: &CascadeNetwork<T>) -> Result<NoiseFactor<T>> {
    network.validated()?;
    let mut excess = friis_at(network, 1).excess();
    let mut gains = network.stages[0].power_gain;
    for x in 2..=network.len() {
        excess = excess + friis_at(network, x).excess() / gains;
        gains = gains * network.stages[x - 1].power_gain;
    }
    Ok(NoiseFactor::from_excess(excess))
}

/// Total factor as the product of the corrected stage-wise factors.
pub fn total_product_composition<T: Scalar>(
    network: &CascadeNetwork<T>,
) -> Result<NoiseFactor<T>> {
    network.validated()?;
    let factors = (1..=network.len()).map(|x| corrected_at(network, x, input_noise_at(network, x)));
    Ok(product(factors))
}

/// `∏ F_x`, accumulated in excess form: `(1+E)(1+e) − 1 = E + e·(1+E)`.
pub(crate) fn product<T: Scalar>(factors: impl IntoIterator<Item = NoiseFactor<T>>) -> NoiseFactor<T> {
    let excess = factors
        .into_iter()
        .fold(T::zero(), |acc, f| acc + f.excess() * (T::one() + acc));
    NoiseFactor::from_excess(excess)
}

/// `SNR_i / SNR_o` from direct propagation.
pub fn snr_ratio_total<T: Scalar>(network: &CascadeNetwork<T>) -> Result<NoiseFactor<T>> {
    let trace = propagate(network)?;
    Ok(NoiseFactor::from_value(trace.input().snr() / trace.output().snr()))
}

/// Per-stage line of a [`NoiseReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageReport<T> {
    /// 1-based stage index.
    pub stage: usize,
    pub input_noise: PowerLevel<T>,
    pub friis: NoiseFactor<T>,
    pub corrected: NoiseFactor<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Totals<T> {
    pub base_friis: NoiseFactor<T>,
    pub base_corrected: NoiseFactor<T>,
    pub friis_composition: NoiseFactor<T>,
    pub product_composition: NoiseFactor<T>,
    pub snr_ratio: NoiseFactor<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseReport<T> {
    pub per_stage: Vec<StageReport<T>>,
    pub totals: Totals<T>,
}

/// Two formula paths that should agree but do not.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantBreach {
    pub identity: &'static str,
    pub left: f64,
    pub right: f64,
    pub rel_diff: f64,
}

impl fmt::Display for InvariantBreach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {:.17e} vs {:.17e} (relative difference {:.3e})",
            self.identity, self.left, self.right, self.rel_diff
        )
    }
}

impl<T: Scalar> NoiseReport<T> {
    /// Checks that the total-factor paths agree within `rel_tol`:
    /// product = base corrected = SNR ratio, and Friis composition = Friis
    /// base.
    pub fn check_identities(&self, rel_tol: T) -> std::result::Result<(), InvariantBreach> {
        let t = &self.totals;
        let pairs = [
            ("eq9 product vs eq8 base", t.product_composition, t.base_corrected),
            ("eq9 product vs snr_ratio", t.product_composition, t.snr_ratio),
            ("eq8 base vs snr_ratio", t.base_corrected, t.snr_ratio),
            ("eq4 composition vs eq2 base", t.friis_composition, t.base_friis),
        ];
        for (identity, a, b) in pairs {
            let d = rel_diff(a.value(), b.value());
            if !(d <= rel_tol) {
                return Err(InvariantBreach {
                    identity,
                    left: a.value().as_f64(),
                    right: b.value().as_f64(),
                    rel_diff: d.as_f64(),
                });
            }
        }
        Ok(())
    }
}

/// Every stage-wise factor, stage input noise and total factor of `network`.
pub fn build_report<T: Scalar>(network: &CascadeNetwork<T>) -> Result<NoiseReport<T>> {
    network.validated()?;
    let per_stage: Vec<_> = (1..=network.len())
        .map(|x| {
            let input_noise = input_noise_at(network, x);
            StageReport {
                stage: x,
                input_noise: PowerLevel(input_noise),
                friis: friis_at(network, x),
                corrected: corrected_at(network, x, input_noise),
            }
        })
        .collect();
    let product_composition = product(per_stage.iter().map(|r| r.corrected));
    let totals = Totals {
        base_friis: total_base_friis(network)?,
        base_corrected: total_base_corrected(network)?,
        friis_composition: total_friis_composition(network)?,
        product_composition,
        snr_ratio: snr_ratio_total(network)?,
    };
    Ok(NoiseReport { per_stage, totals })
}
