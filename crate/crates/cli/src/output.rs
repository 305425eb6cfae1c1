//! Rendering of reports as aligned text, csv, or json.
//!
//! csv and table output are a sequence of sections, each a header line
//! followed by rows; csv separates sections with one blank line. json
//! mirrors the report types field for field. All computed numbers in csv
//! and json carry 12 significant digits; json echoes input parameters at
//! full precision.

use std::fmt::Write as _;

use cascade_noise::apd::StepStats;
use cascade_noise::engine::NoiseReport;
use cascade_noise::monte_carlo::McEstimate;
use cascade_noise::scenario::{ScenarioConfig, SeriesRow, SeriesTable};
use cascade_noise::{Factor, Network};
use clap::ValueEnum;
use serde::Serialize;

use crate::input::NetworkFile;
use crate::number::{round12, sig12};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    pub format: Format,
    pub db: bool,
}

/// Header plus rows of already formatted cells.
#[derive(Debug, Default)]
struct Section {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Section {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

fn render_sections(sections: &[Section], format: Format) -> String {
    let mut out = String::new();
    for (i, s) in sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match format {
            Format::Csv => {
                out.push_str(&s.header.join(","));
                out.push('\n');
                for r in &s.rows {
                    out.push_str(&r.join(","));
                    out.push('\n');
                }
            }
            _ => {
                let mut widths: Vec<usize> = s.header.iter().map(|h| h.chars().count()).collect();
                for r in &s.rows {
                    for (w, c) in widths.iter_mut().zip(r) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    let padded: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect();
                    padded.join("  ")
                };
                let _ = writeln!(out, "{}", line(&s.header));
                let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                let _ = writeln!(out, "{}", rule.join("  "));
                for r in &s.rows {
                    let _ = writeln!(out, "{}", line(r));
                }
            }
        }
    }
    out
}

fn num(v: f64, format: Format) -> String {
    match format {
        Format::Table => format!("{v:.9}")
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string(),
        _ => sig12(v),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct FactorJson {
    value: f64,
    figure_db: f64,
}

impl From<Factor> for FactorJson {
    fn from(f: Factor) -> Self {
        Self {
            value: round12(f.value()),
            figure_db: round12(f.figure_db()),
        }
    }
}

/// Formula paths of the total noise factor, in output order.
pub const TOTAL_PATHS: [(&str, &str); 5] = [
    ("eq2", "base_friis"),
    ("eq4", "friis_composition"),
    ("eq8", "base_corrected"),
    ("eq9", "product_composition"),
    ("snr_ratio", "snr_ratio"),
];

fn totals_in_order(report: &NoiseReport<f64>) -> [Factor; 5] {
    let t = report.totals;
    [
        t.base_friis,
        t.friis_composition,
        t.base_corrected,
        t.product_composition,
        t.snr_ratio,
    ]
}

#[derive(Serialize)]
struct StageJson {
    stage: usize,
    stage_input_noise: f64,
    friis: FactorJson,
    corrected: FactorJson,
}

#[derive(Serialize)]
struct TotalJson {
    path: &'static str,
    name: &'static str,
    #[serde(flatten)]
    factor: FactorJson,
}

#[derive(Serialize)]
struct ReportJson {
    network: NetworkFile,
    per_stage: Vec<StageJson>,
    totals: Vec<TotalJson>,
}

pub fn render_report(network: &Network, report: &NoiseReport<f64>, opts: RenderOptions) -> String {
    if opts.format == Format::Json {
        return to_json(&ReportJson {
            network: NetworkFile::from_network(network),
            per_stage: report
                .per_stage
                .iter()
                .map(|s| StageJson {
                    stage: s.stage,
                    stage_input_noise: round12(s.input_noise.0),
                    friis: s.friis.into(),
                    corrected: s.corrected.into(),
                })
                .collect(),
            totals: TOTAL_PATHS
                .iter()
                .zip(totals_in_order(report))
                .map(|(&(path, name), f)| TotalJson {
                    path,
                    name,
                    factor: f.into(),
                })
                .collect(),
        });
    }

    let f = opts.format;
    let mut stages = if opts.db {
        Section::new(&["stage", "input_noise", "f_friis", "f_bang", "nf_friis_db", "nf_bang_db"])
    } else {
        Section::new(&["stage", "input_noise", "f_friis", "f_bang"])
    };
    for s in &report.per_stage {
        let mut row = vec![
            s.stage.to_string(),
            num(s.input_noise.0, f),
            num(s.friis.value(), f),
            num(s.corrected.value(), f),
        ];
        if opts.db {
            row.push(num(s.friis.figure_db(), f));
            row.push(num(s.corrected.figure_db(), f));
        }
        stages.push(row);
    }

    let mut totals = if opts.db {
        Section::new(&["total", "formula", "value", "nf_db"])
    } else {
        Section::new(&["total", "formula", "value"])
    };
    for (&(path, name), factor) in TOTAL_PATHS.iter().zip(totals_in_order(report)) {
        let mut row = vec![path.to_string(), name.to_string(), num(factor.value(), f)];
        if opts.db {
            row.push(num(factor.figure_db(), f));
        }
        totals.push(row);
    }
    render_sections(&[stages, totals], f)
}

#[derive(Serialize)]
struct SeriesRowJson {
    stage: usize,
    friis: FactorJson,
    corrected: FactorJson,
}

#[derive(Serialize)]
struct ConfigJson {
    n: usize,
    gain: f64,
    external_noise: f64,
    internal_ratio: f64,
    input_noise: f64,
    input_signal: f64,
}

#[derive(Serialize)]
struct SeriesJson {
    label: &'static str,
    cumulative: bool,
    config: ConfigJson,
    rows: Vec<SeriesRowJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    totals: Vec<SeriesRowJson>,
}

fn series_rows_json(rows: &[SeriesRow<f64>]) -> Vec<SeriesRowJson> {
    rows.iter()
        .map(|r| SeriesRowJson {
            stage: r.stage,
            friis: r.friis.into(),
            corrected: r.corrected.into(),
        })
        .collect()
}

fn series_section(header: &[&str], db_header: &[&str], rows: &[SeriesRow<f64>], opts: RenderOptions) -> Section {
    let mut s = if opts.db {
        Section::new(&[header, db_header].concat())
    } else {
        Section::new(header)
    };
    for r in rows {
        let mut row = vec![
            r.stage.to_string(),
            num(r.friis.value(), opts.format),
            num(r.corrected.value(), opts.format),
        ];
        if opts.db {
            row.push(num(r.friis.figure_db(), opts.format));
            row.push(num(r.corrected.figure_db(), opts.format));
        }
        s.push(row);
    }
    s
}

pub fn render_series(table: &SeriesTable<f64>, config: &ScenarioConfig<f64>, opts: RenderOptions) -> String {
    if opts.format == Format::Json {
        return to_json(&SeriesJson {
            label: table.label,
            cumulative: table.cumulative,
            config: ConfigJson {
                n: config.n,
                gain: config.gain,
                external_noise: config.external_noise,
                internal_ratio: config.internal_ratio,
                input_noise: config.input_noise,
                input_signal: config.input_signal,
            },
            rows: series_rows_json(&table.rows),
            totals: series_rows_json(&table.totals),
        });
    }
    let db_cols = ["nf_friis_db", "nf_corrected_db"];
    let mut sections = vec![series_section(&["stage", "friis", "corrected"], &db_cols, &table.rows, opts)];
    if !table.totals.is_empty() {
        sections.push(series_section(
            &["stages", "friis_total", "corrected_total"],
            &db_cols,
            &table.totals,
            opts,
        ));
    }
    render_sections(&sections, opts.format)
}

/// Analytic APD results plus an optional Monte Carlo diagnostic.
pub struct ApdOutput {
    pub steps: Vec<StepStats<f64>>,
    pub total: Factor,
    pub mean_gain: f64,
    /// Product of corrected stage factors of the equivalent cascade.
    pub cascade_total: Factor,
    pub monte_carlo: Option<McEstimate>,
}

#[derive(Serialize)]
struct StepJson {
    step: usize,
    p: f64,
    mean_gain: f64,
    variance: f64,
    second_moment: f64,
    excess_noise: FactorJson,
}

#[derive(Serialize)]
struct ApdTotalJson {
    excess_noise: FactorJson,
    mean_gain: f64,
    cascade_eq9: FactorJson,
}

#[derive(Serialize)]
struct DiagnosticJson {
    trials: u64,
    seed: u64,
    workers: usize,
    mean: f64,
    second_moment: f64,
    variance: f64,
    excess_noise: f64,
    std_error_mean: f64,
    std_error_second_moment: f64,
    analytic_mean: f64,
    analytic_excess_noise: f64,
}

#[derive(Serialize)]
struct ApdJson {
    steps: Vec<StepJson>,
    total: ApdTotalJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<DiagnosticJson>,
}

pub fn render_apd(out: &ApdOutput, opts: RenderOptions) -> String {
    let f = opts.format;
    if f == Format::Json {
        return to_json(&ApdJson {
            steps: out
                .steps
                .iter()
                .enumerate()
                .map(|(i, s)| StepJson {
                    step: i + 1,
                    p: s.probability,
                    mean_gain: round12(s.mean_gain),
                    variance: round12(s.variance),
                    second_moment: round12(s.second_moment),
                    excess_noise: s.excess_noise.into(),
                })
                .collect(),
            total: ApdTotalJson {
                excess_noise: out.total.into(),
                mean_gain: round12(out.mean_gain),
                cascade_eq9: out.cascade_total.into(),
            },
            diagnostic: out.monte_carlo.map(|mc| DiagnosticJson {
                trials: mc.trials,
                seed: mc.seed,
                workers: mc.workers,
                mean: round12(mc.mean),
                second_moment: round12(mc.second_moment),
                variance: round12(mc.variance),
                excess_noise: round12(mc.excess_noise),
                std_error_mean: round12(mc.std_error_mean),
                std_error_second_moment: round12(mc.std_error_second_moment),
                analytic_mean: round12(out.mean_gain),
                analytic_excess_noise: round12(out.total.value()),
            }),
        });
    }

    let mut steps = if opts.db {
        Section::new(&["step", "p", "mean_gain", "variance", "excess_noise", "nf_db"])
    } else {
        Section::new(&["step", "p", "mean_gain", "variance", "excess_noise"])
    };
    for (i, s) in out.steps.iter().enumerate() {
        let mut row = vec![
            (i + 1).to_string(),
            num(s.probability, f),
            num(s.mean_gain, f),
            num(s.variance, f),
            num(s.excess_noise.value(), f),
        ];
        if opts.db {
            row.push(num(s.excess_noise.figure_db(), f));
        }
        steps.push(row);
    }

    let mut total = Section::new(&["total", "excess_noise", "mean_gain", "cascade_eq9"]);
    total.push(vec![
        "analytic".into(),
        num(out.total.value(), f),
        num(out.mean_gain, f),
        num(out.cascade_total.value(), f),
    ]);

    let mut sections = vec![steps, total];
    if let Some(mc) = out.monte_carlo {
        let mut d = Section::new(&[
            "diagnostic",
            "trials",
            "seed",
            "workers",
            "mean",
            "second_moment",
            "variance",
            "excess_noise",
            "std_error_mean",
            "std_error_second_moment",
            "analytic_mean",
            "analytic_excess_noise",
        ]);
        d.push(vec![
            "monte_carlo".into(),
            mc.trials.to_string(),
            mc.seed.to_string(),
            mc.workers.to_string(),
            num(mc.mean, f),
            num(mc.second_moment, f),
            num(mc.variance, f),
            num(mc.excess_noise, f),
            num(mc.std_error_mean, f),
            num(mc.std_error_second_moment, f),
            num(out.mean_gain, f),
            num(out.total.value(), f),
        ]);
        sections.push(d);
    }
    render_sections(&sections, f)
}
