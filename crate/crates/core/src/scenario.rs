//! Comparison scenarios between Friis' and the corrected noise factors.
//!
//! Each generator builds an explicit [`CascadeNetwork`] of identical stages
//! and reads every number off [`crate::engine`]; nothing here evaluates a
//! noise formula itself.
//!
//! | scenario | stages                                  | series                      |
//! |----------|-----------------------------------------|-----------------------------|
//! | `fig2a`  | no added noise                          | stage-wise factors          |
//! | `fig2b`  | identical external noise, no internal   | stage-wise factors          |
//! | `fig2c`  | as `fig2b`                              | totals of the first m stages |
//! | `fig3`   | internal noise `δ·N_i(x)`, no external  | stage-wise and totals       |

use std::fmt;
use std::str::FromStr;

use crate::engine;
use crate::error::{Error, Result};
use crate::network::{CascadeNetwork, NoiseFactor, PowerLevel, StageSpec};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig3,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::Fig2a, Scenario::Fig2b, Scenario::Fig2c, Scenario::Fig3];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fig2a => "fig2a",
            Scenario::Fig2b => "fig2b",
            Scenario::Fig2c => "fig2c",
            Scenario::Fig3 => "fig3",
        }
    }

    /// Parameters used when nothing is overridden.
    pub fn default_config<T: Scalar>(self) -> ScenarioConfig<T> {
        let base = ScenarioConfig::default();
        match self {
            Scenario::Fig2a => ScenarioConfig {
                external_noise: T::zero(),
                ..base
            },
            Scenario::Fig2b | Scenario::Fig2c => base,
            Scenario::Fig3 => ScenarioConfig {
                external_noise: T::zero(),
                internal_ratio: T::one(),
                ..base
            },
        }
    }

    pub fn run<T: Scalar>(self, config: &ScenarioConfig<T>) -> Result<SeriesTable<T>> {
        match self {
            Scenario::Fig2a => fig2a_no_noise(config),
            Scenario::Fig2b => fig2b_identical_external(config),
            Scenario::Fig2c => fig2c_totals(config),
            Scenario::Fig3 => fig3_internal_only(config),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| format!("unknown scenario {s:?}; expected one of fig2a, fig2b, fig2c, fig3"))
    }
}

/// Identical-stage cascade parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig<T> {
    pub n: usize,
    /// Common power gain, `≥ 1`.
    pub gain: T,
    pub external_noise: T,
    /// `δ = N_int(x) / N_i(x)`, the same for every stage.
    pub internal_ratio: T,
    pub input_noise: T,
    pub input_signal: T,
}

impl<T: Scalar> Default for ScenarioConfig<T> {
    fn default() -> Self {
        Self {
            n: 6,
            gain: T::lit(10.0),
            external_noise: T::lit(10.0),
            internal_ratio: T::zero(),
            input_noise: T::one(),
            input_signal: T::lit(100.0),
        }
    }
}

impl<T: Scalar> ScenarioConfig<T> {
    fn check_common(&self, scenario: Scenario) -> Result<()> {
        let fail = |reason: String| {
            Err(Error::Scenario {
                scenario: scenario.name(),
                reason,
            })
        };
        if self.n == 0 {
            return fail("n must be ≥ 1".into());
        }
        if !(self.gain >= T::one()) || !self.gain.is_finite() {
            return fail(format!("gain must be a finite value ≥ 1, got {}", self.gain));
        }
        if !(self.external_noise >= T::zero()) || !(self.internal_ratio >= T::zero()) {
            return fail("external noise and internal ratio must be ≥ 0".into());
        }
        if !(self.input_noise > T::zero()) || !(self.input_signal > T::zero()) {
            return fail("input signal and input noise must be > 0".into());
        }
        Ok(())
    }

    fn require(&self, scenario: Scenario, ok: bool, reason: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Scenario {
                scenario: scenario.name(),
                reason: reason.into(),
            })
        }
    }

    /// The cascade described by this configuration.
    ///
    /// Internal noise of stage `x` is `δ` times the noise arriving at its
    /// input, so stages are appended one at a time.
    pub fn network(&self) -> Result<CascadeNetwork<T>> {
        let mut net = CascadeNetwork::new_unchecked(self.input_signal, self.input_noise, Vec::new());
        for x in 1..=self.n {
            net.stages.push(StageSpec::new(self.gain, T::zero(), self.external_noise));
            if self.internal_ratio > T::zero() {
                let arriving = engine::stage_input_noise(&net, x)?.0;
                net.stages[x - 1].internal_noise = PowerLevel(self.internal_ratio * arriving);
            }
        }
        net.validated()?;
        Ok(net)
    }
}

/// One bar pair: Friis' value against the corrected value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow<T> {
    /// Stage index, or the number of leading stages for cumulative series.
    pub stage: usize,
    pub friis: NoiseFactor<T>,
    pub corrected: NoiseFactor<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable<T> {
    pub label: &'static str,
    /// `true` when `rows` hold totals of the first `stage` stages.
    pub cumulative: bool,
    pub rows: Vec<SeriesRow<T>>,
    /// Cumulative totals accompanying a stage-wise series (fig3 only).
    pub totals: Vec<SeriesRow<T>>,
}

fn stage_rows<T: Scalar>(net: &CascadeNetwork<T>) -> Result<Vec<SeriesRow<T>>> {
    let report = engine::build_report(net)?;
    Ok(report
        .per_stage
        .iter()
        .map(|s| SeriesRow {
            stage: s.stage,
            friis: s.friis,
            corrected: s.corrected,
        })
        .collect())
}

fn cumulative_rows<T: Scalar>(net: &CascadeNetwork<T>) -> Result<Vec<SeriesRow<T>>> {
    (1..=net.len())
        .map(|m| {
            let prefix = net.prefix(m);
            Ok(SeriesRow {
                stage: m,
                friis: engine::total_friis_composition(&prefix)?,
                corrected: engine::total_product_composition(&prefix)?,
            })
        })
        .collect()
}

/// Stage-wise factors with no added noise anywhere.
pub fn fig2a_no_noise<T: Scalar>(config: &ScenarioConfig<T>) -> Result<SeriesTable<T>> {
    let sc = Scenario::Fig2a;
    config.check_common(sc)?;
    config.require(
        sc,
        config.external_noise == T::zero() && config.internal_ratio == T::zero(),
        "requires external noise = 0 and internal ratio = 0",
    )?;
    Ok(SeriesTable {
        label: sc.name(),
        cumulative: false,
        rows: stage_rows(&config.network()?)?,
        totals: Vec::new(),
    })
}

fn check_fig2<T: Scalar>(sc: Scenario, config: &ScenarioConfig<T>) -> Result<()> {
    config.check_common(sc)?;
    config.require(
        sc,
        config.external_noise > T::zero() && config.internal_ratio == T::zero(),
        "requires external noise > 0 and internal ratio = 0",
    )
}

/// Stage-wise factors with the same external noise after every stage.
pub fn fig2b_identical_external<T: Scalar>(config: &ScenarioConfig<T>) -> Result<SeriesTable<T>> {
    let sc = Scenario::Fig2b;
    check_fig2(sc, config)?;
    Ok(SeriesTable {
        label: sc.name(),
        cumulative: false,
        rows: stage_rows(&config.network()?)?,
        totals: Vec::new(),
    })
}

/// Totals of the leading `m = 1..n` stages, Friis composition against the
/// product of corrected factors.
pub fn fig2c_totals<T: Scalar>(config: &ScenarioConfig<T>) -> Result<SeriesTable<T>> {
    let sc = Scenario::Fig2c;
    check_fig2(sc, config)?;
    Ok(SeriesTable {
        label: sc.name(),
        cumulative: true,
        rows: cumulative_rows(&config.network()?)?,
        totals: Vec::new(),
    })
}

/// Internal noise proportional to each stage's input noise, no external
/// noise: stage-wise factors plus cumulative totals.
pub fn fig3_internal_only<T: Scalar>(config: &ScenarioConfig<T>) -> Result<SeriesTable<T>> {
    let sc = Scenario::Fig3;
    config.check_common(sc)?;
    config.require(sc, config.external_noise == T::zero(), "requires external noise = 0")?;
    let net = config.network()?;
    Ok(SeriesTable {
        label: sc.name(),
        cumulative: false,
        rows: stage_rows(&net)?,
        totals: cumulative_rows(&net)?,
    })
}
