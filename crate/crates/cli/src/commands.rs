//! The three CLI verbs as functions from parsed arguments to rendered text.

use std::path::{Path, PathBuf};

use cascade_noise::apd::{apd_to_cascade, step_stats, total_excess_noise, StaircaseApd};
use cascade_noise::engine::{build_report, total_product_composition, IDENTITY_REL_TOL};
use cascade_noise::monte_carlo::{mc_total_gain_with, McConfig};
use cascade_noise::scenario::Scenario;
use cascade_noise::Power;

use crate::error::CliError;
use crate::input::{load_network, load_steps};
use crate::output::{render_apd, render_report, render_series, ApdOutput, RenderOptions};

pub fn cmd_analyze(path: &Path, opts: RenderOptions) -> Result<String, CliError> {
    let network = load_network(path)?;
    let report = build_report(&network)?;
    report
        .check_identities(IDENTITY_REL_TOL)
        .map_err(|b| CliError::Invariant(b.to_string()))?;
    Ok(render_report(&network, &report, opts))
}

/// Overrides applied on top of a scenario's default configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScenarioOverrides {
    pub n: Option<usize>,
    pub gain: Option<f64>,
    pub ext: Option<f64>,
    pub delta: Option<f64>,
    pub ni: Option<f64>,
    pub si: Option<f64>,
}

pub fn cmd_scenario(
    scenario: Scenario,
    overrides: ScenarioOverrides,
    opts: RenderOptions,
) -> Result<String, CliError> {
    let mut config = scenario.default_config::<f64>();
    let o = overrides;
    config.n = o.n.unwrap_or(config.n);
    config.gain = o.gain.unwrap_or(config.gain);
    config.external_noise = o.ext.unwrap_or(config.external_noise);
    config.internal_ratio = o.delta.unwrap_or(config.internal_ratio);
    config.input_noise = o.ni.unwrap_or(config.input_noise);
    config.input_signal = o.si.unwrap_or(config.input_signal);
    let table = scenario.run(&config)?;
    Ok(render_series(&table, &config, opts))
}

#[derive(Debug, Clone, Default)]
pub struct ApdArgs {
    pub probabilities: Vec<f64>,
    pub file: Option<PathBuf>,
    pub trials: Option<u64>,
    pub seed: u64,
    pub workers: usize,
}

pub fn cmd_apd(args: &ApdArgs, opts: RenderOptions) -> Result<String, CliError> {
    let mut steps = args.probabilities.clone();
    if let Some(file) = &args.file {
        steps.extend(load_steps(file)?);
    }
    if steps.is_empty() {
        return Err(CliError::Input("apd: give at least one --p or a --file".into()));
    }
    let apd = StaircaseApd::new(steps)?;
    let stats = apd
        .steps()
        .iter()
        .map(|&p| step_stats(p))
        .collect::<Result<Vec<_>, _>>()?;
    let cascade = apd_to_cascade(&apd, Power::new(1.0), Power::new(1.0))?;
    let monte_carlo = match args.trials {
        Some(trials) => {
            let config = McConfig::new(trials, args.seed).with_workers(args.workers);
            Some(mc_total_gain_with(&apd, config)?)
        }
        None => None,
    };
    let out = ApdOutput {
        steps: stats,
        total: total_excess_noise(&apd),
        mean_gain: apd.mean_gain(),
        cascade_total: total_product_composition(&cascade)?,
        monte_carlo,
    };
    Ok(render_apd(&out, opts))
}
