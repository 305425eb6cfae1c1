//! Cascade network description and validation.
//!
//! All powers are linear and share one arbitrary unit inside a network.
//! Decibels only appear at I/O boundaries (see [`crate::units`]).

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::units::linear_to_db;

/// Longest cascade the engine accepts.
pub const MAX_STAGES: usize = 10_000;

/// Non-negative linear power.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct PowerLevel<T>(pub T);

impl<T: Scalar> PowerLevel<T> {
    pub fn new(value: T) -> Self {
        Self(value)
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn value(self) -> T {
        self.0
    }
}

impl<T: Scalar> From<T> for PowerLevel<T> {
    fn from(value: T) -> Self {
        Self(value)
    }
}

/// One stage of a cascade: power gain plus the two noise powers it adds.
///
/// Internal noise stands for irregularities generated inside the stage,
/// external noise is added at its output. Both are amplified only by the
/// stages that follow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageSpec<T> {
    pub power_gain: T,
    pub internal_noise: PowerLevel<T>,
    pub external_noise: PowerLevel<T>,
}

impl<T: Scalar> StageSpec<T> {
    pub fn new(power_gain: T, internal_noise: T, external_noise: T) -> Self {
        Self {
            power_gain,
            internal_noise: PowerLevel(internal_noise),
            external_noise: PowerLevel(external_noise),
        }
    }

    /// Noiseless stage with the given power gain.
    pub fn ideal(power_gain: T) -> Self {
        Self::new(power_gain, T::zero(), T::zero())
    }

    /// Amplitude (carrier) gain `M` with `G = M²`.
    pub fn amplitude_gain(&self) -> T {
        self.power_gain.sqrt()
    }

    /// `N_int + N_ext`.
    pub fn added_noise(&self) -> T {
        self.internal_noise.0 + self.external_noise.0
    }
}

/// Source powers plus the ordered stages of a cascade.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeNetwork<T> {
    pub input_signal: PowerLevel<T>,
    pub input_noise: PowerLevel<T>,
    pub stages: Vec<StageSpec<T>>,
}

impl<T: Scalar> CascadeNetwork<T> {
    /// Builds a network and rejects it unless every invariant holds.
    pub fn new(input_signal: T, input_noise: T, stages: Vec<StageSpec<T>>) -> Result<Self> {
        let net = Self::new_unchecked(input_signal, input_noise, stages);
        net.validated()?;
        Ok(net)
    }

    /// Builds a network without checking it; use [`validate`] before
    /// relying on it.
    pub fn new_unchecked(input_signal: T, input_noise: T, stages: Vec<StageSpec<T>>) -> Self {
        Self {
            input_signal: PowerLevel(input_signal),
            input_noise: PowerLevel(input_noise),
            stages,
        }
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Stage `x`, 1-based.
    pub fn stage(&self, x: usize) -> Result<&StageSpec<T>> {
        if x == 0 || x > self.stages.len() {
            return Err(Error::StageOutOfRange {
                index: x,
                stages: self.stages.len(),
            });
        }
        Ok(&self.stages[x - 1])
    }

    /// The first `m` stages with the same source.
    pub fn prefix(&self, m: usize) -> Self {
        Self {
            input_signal: self.input_signal,
            input_noise: self.input_noise,
            stages: self.stages[..m.min(self.stages.len())].to_vec(),
        }
    }

    /// Same network with every internal noise set to zero.
    pub fn without_internal_noise(&self) -> Self {
        let mut out = self.clone();
        for s in &mut out.stages {
            s.internal_noise = PowerLevel::zero();
        }
        out
    }

    pub(crate) fn validated(&self) -> Result<()> {
        let violations = validate(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidNetwork(violations))
        }
    }
}

/// Network field that a [`Violation`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    InputSignal,
    InputNoise,
    Gain,
    InternalNoise,
    ExternalNoise,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::InputSignal => "input_signal",
            Field::InputNoise => "input_noise",
            Field::Gain => "gain",
            Field::InternalNoise => "internal_noise",
            Field::ExternalNoise => "external_noise",
        })
    }
}

/// A broken network invariant. Stage indices are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyStages,
    TooManyStages { count: usize, max: usize },
    NotFinite { stage: Option<usize>, field: Field },
    NonPositiveInputSignal(f64),
    NonPositiveInputNoise(f64),
    NonPositiveGain { stage: usize, value: f64 },
    NegativeNoise { stage: usize, field: Field, value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyStages => write!(f, "stages: required, n ≥ 1"),
            Violation::TooManyStages { count, max } => {
                write!(f, "stages: {count} stages exceeds the supported maximum of {max}")
            }
            Violation::NotFinite { stage: None, field } => write!(f, "{field} must be finite"),
            Violation::NotFinite {
                stage: Some(x),
                field,
            } => write!(f, "stage {x}: {field} must be finite"),
            Violation::NonPositiveInputSignal(v) => {
                write!(f, "input_signal must be > 0 (got {v})")
            }
            Violation::NonPositiveInputNoise(v) => write!(f, "input_noise must be > 0 (got {v})"),
            Violation::NonPositiveGain { stage, value } => {
                write!(f, "stage {stage}: gain must be > 0 (got {value})")
            }
            Violation::NegativeNoise {
                stage,
                field,
                value,
            } => write!(f, "stage {stage}: {field} must be ≥ 0 (got {value})"),
        }
    }
}

/// Collects every invariant violation of `network`; empty means valid.
pub fn validate<T: Scalar>(network: &CascadeNetwork<T>) -> Vec<Violation> {
    let mut out = Vec::new();

    let positive = |v: T, field, out: &mut Vec<Violation>, err: fn(f64) -> Violation| {
        if !v.is_finite() {
            out.push(Violation::NotFinite { stage: None, field });
        } else if v <= T::zero() {
            out.push(err(v.as_f64()));
        }
    };
    positive(
        network.input_signal.0,
        Field::InputSignal,
        &mut out,
        Violation::NonPositiveInputSignal,
    );
    positive(
        network.input_noise.0,
        Field::InputNoise,
        &mut out,
        Violation::NonPositiveInputNoise,
    );

    if network.stages.is_empty() {
        out.push(Violation::EmptyStages);
    } else if network.stages.len() > MAX_STAGES {
        out.push(Violation::TooManyStages {
            count: network.stages.len(),
            max: MAX_STAGES,
        });
    }

    for (i, s) in network.stages.iter().enumerate() {
        let stage = i + 1;
        if !s.power_gain.is_finite() {
            out.push(Violation::NotFinite {
                stage: Some(stage),
                field: Field::Gain,
            });
        } else if s.power_gain <= T::zero() {
            out.push(Violation::NonPositiveGain {
                stage,
                value: s.power_gain.as_f64(),
            });
        }
        for (field, v) in [
            (Field::InternalNoise, s.internal_noise.0),
            (Field::ExternalNoise, s.external_noise.0),
        ] {
            if !v.is_finite() {
                out.push(Violation::NotFinite {
                    stage: Some(stage),
                    field,
                });
            } else if v < T::zero() {
                out.push(Violation::NegativeNoise {
                    stage,
                    field,
                    value: v.as_f64(),
                });
            }
        }
    }
    out
}

/// Dimensionless noise factor `F ≥ 1`.
///
/// Stored as the excess `F − 1` so that compositions needing `F − 1`
/// (Friis' stage-wise sum) never subtract two nearly equal numbers.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NoiseFactor<T> {
    excess: T,
}

impl<T: Scalar> NoiseFactor<T> {
    pub fn unity() -> Self {
        Self { excess: T::zero() }
    }

    /// From the linear factor `F`.
    pub fn from_value(value: T) -> Self {
        Self {
            excess: value - T::one(),
        }
    }

    /// From the excess `F − 1`.
    pub fn from_excess(excess: T) -> Self {
        Self { excess }
    }

    /// Linear factor `F`.
    pub fn value(self) -> T {
        T::one() + self.excess
    }

    /// `F − 1`.
    pub fn excess(self) -> T {
        self.excess
    }

    /// Noise figure `10·log10(F)` in dB.
    pub fn figure_db(self) -> T {
        // F > 0 for any excess > -1, which every formula here guarantees.
        linear_to_db(self.value()).unwrap_or(T::nan())
    }
}

impl<T: Scalar> fmt::Display for NoiseFactor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}
