//! Phase sweeps and sensitivity tables, with CSV and JSON writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::error::{QuftiError, Result};
use crate::interferometer::{build_unitary, WeightMoments, WeightVector};
use crate::permanent::{permanent_ryser_with, permanent_truncated, Execution};
use crate::probability::{
    identity_term_probability, prob_distinguishable_closed, prob_distinguishable_exact_with,
    prob_distinguishable_truncated, prob_indistinguishable_closed, prob_indistinguishable_exact_with,
    prob_indistinguishable_truncated, PhotonModel, ProbabilityMethod, ProbabilityResult, DEGENERATE_SPREAD,
};
use crate::sensitivity::{sensitivity_analytic, sensitivity_from_curve, sensitivity_numerical_with};

pub const SWEEP_CSV_HEADER: [&str; 6] = ["phi", "model", "method", "probability", "sensitivity", "truncation_error"];

pub const SENSITIVITY_CSV_HEADER: [&str; 6] =
    ["phi", "sensitivity_i", "sensitivity_d", "ratio", "analytic_i", "analytic_d"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub phi: f64,
    pub model: PhotonModel,
    pub method: ProbabilityMethod,
    pub probability: Option<f64>,
    pub sensitivity: Option<f64>,
    pub truncation_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutput {
    pub n: usize,
    pub weights: Vec<f64>,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub phi: f64,
    pub sensitivity_i: Option<f64>,
    pub sensitivity_d: Option<f64>,
    pub ratio: Option<f64>,
    pub analytic_i: Option<f64>,
    pub analytic_d: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityOutput {
    pub n: usize,
    pub weights: Vec<f64>,
    pub rows: Vec<SensitivityRow>,
}

/// Approximations that leave their regime produce an empty field, not a failure.
fn within_regime<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(QuftiError::OutsideSmallPhaseRegime { .. }) | Err(QuftiError::DegenerateWeights { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn exact_probability(weights: &WeightVector, phi: f64, model: PhotonModel, execution: Execution) -> Result<ProbabilityResult> {
    let u = build_unitary(weights, phi)?;
    match model {
        PhotonModel::Indistinguishable => prob_indistinguishable_exact_with(&u, execution),
        PhotonModel::Distinguishable => prob_distinguishable_exact_with(&u.distinguishable(), execution),
    }
}

fn truncated_probability(weights: &WeightVector, moments: &WeightMoments, phi: f64, model: PhotonModel) -> Result<f64> {
    Ok(match model {
        PhotonModel::Indistinguishable => prob_indistinguishable_truncated(&build_unitary(weights, phi)?, moments)?.value,
        PhotonModel::Distinguishable => prob_distinguishable_truncated(moments, phi)?.value,
    })
}

/// `|perm(U) - truncated|` for I, `|perm(T) - |identity term|²|` for D.
fn truncation_error(weights: &WeightVector, moments: &WeightMoments, phi: f64, model: PhotonModel, execution: Execution) -> Result<f64> {
    let u = build_unitary(weights, phi)?;
    Ok(match model {
        PhotonModel::Indistinguishable => {
            let exact = permanent_ryser_with(u.matrix(), execution)?;
            (exact - permanent_truncated(&u, moments)?.value).norm()
        }
        PhotonModel::Distinguishable => {
            let exact = permanent_ryser_with(u.distinguishable().matrix(), execution)?;
            (exact - identity_term_probability(moments, phi)).abs()
        }
    })
}

/// All rows for one phase value, ordered by model then method.
pub fn sweep_point(
    weights: &WeightVector,
    moments: &WeightMoments,
    phi: f64,
    models: &[PhotonModel],
    methods: &[ProbabilityMethod],
    execution: Execution,
) -> Result<Vec<SweepRow>> {
    let degenerate = moments.spread() <= DEGENERATE_SPREAD;
    let mut rows = Vec::with_capacity(models.len() * methods.len());
    for &model in models {
        for &method in methods {
            let row = match method {
                ProbabilityMethod::Exact => {
                    let p = exact_probability(weights, phi, model, execution)?;
                    let sensitivity = if phi == 0.0 {
                        None
                    } else {
                        sensitivity_numerical_with(model, weights, phi, execution)?.finite()
                    };
                    SweepRow { phi, model, method, probability: Some(p.value), sensitivity, truncation_error: None }
                }
                ProbabilityMethod::ClosedForm => {
                    let p = match model {
                        PhotonModel::Indistinguishable => prob_indistinguishable_closed(moments, phi),
                        PhotonModel::Distinguishable => prob_distinguishable_closed(moments, phi),
                    };
                    let probability = within_regime(p)?.map(|r| r.value);
                    let sensitivity = within_regime(sensitivity_analytic(model, moments))?.map(|r| r.value);
                    SweepRow { phi, model, method, probability, sensitivity, truncation_error: None }
                }
                ProbabilityMethod::Truncated => {
                    let probability = within_regime(truncated_probability(weights, moments, phi, model))?;
                    let sensitivity = if phi == 0.0 {
                        None
                    } else {
                        within_regime(sensitivity_from_curve(model, phi, degenerate, |x| {
                            truncated_probability(weights, moments, x, model)
                        }))?
                        .and_then(|r| r.finite())
                    };
                    let err = truncation_error(weights, moments, phi, model, execution)?;
                    SweepRow { phi, model, method, probability, sensitivity, truncation_error: Some(err) }
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Compute every row of a sweep. Rows are ordered by φ regardless of how
/// the points were scheduled.
pub fn sweep(config: &RunConfig) -> Result<SweepOutput> {
    let weights = config.resolve()?;
    let moments = weights.moments();
    let points = config.grid.points()?;
    let models = config.model.models();
    let methods = config.method_order();

    let per_point = |phi: f64, execution| sweep_point(&weights, &moments, phi, &models, &methods, execution);
    let chunks: Vec<Vec<SweepRow>> = if !config.parallel {
        points.iter().map(|&phi| per_point(phi, Execution::Serial)).collect::<Result<_>>()?
    } else if points.len() == 1 {
        vec![per_point(points[0], Execution::Parallel)?]
    } else {
        points.par_iter().map(|&phi| per_point(phi, Execution::Serial)).collect::<Result<_>>()?
    };

    Ok(SweepOutput {
        n: weights.len(),
        weights: weights.as_slice().to_vec(),
        rows: chunks.into_iter().flatten().collect(),
    })
}

fn sensitivity_point(weights: &WeightVector, moments: &WeightMoments, phi: f64, execution: Execution) -> Result<SensitivityRow> {
    let numeric = |model| -> Result<Option<f64>> {
        if phi == 0.0 {
            return Ok(None);
        }
        Ok(sensitivity_numerical_with(model, weights, phi, execution)?.finite())
    };
    let analytic = |model| -> Result<Option<f64>> { Ok(within_regime(sensitivity_analytic(model, moments))?.map(|r| r.value)) };
    let sensitivity_i = numeric(PhotonModel::Indistinguishable)?;
    let sensitivity_d = numeric(PhotonModel::Distinguishable)?;
    Ok(SensitivityRow {
        phi,
        sensitivity_i,
        sensitivity_d,
        ratio: sensitivity_i.zip(sensitivity_d).map(|(i, d)| i / d),
        analytic_i: analytic(PhotonModel::Indistinguishable)?,
        analytic_d: analytic(PhotonModel::Distinguishable)?,
    })
}

/// Numerical and analytic sensitivities for both models across the grid.
/// Only the weights and grid of the configuration are used.
pub fn sensitivity_table(config: &RunConfig) -> Result<SensitivityOutput> {
    let cfg = RunConfig { methods: vec![ProbabilityMethod::Exact], ..config.clone() };
    let weights = cfg.resolve()?;
    let moments = weights.moments();
    let points = cfg.grid.points()?;

    let rows: Vec<SensitivityRow> = if !cfg.parallel {
        points.iter().map(|&phi| sensitivity_point(&weights, &moments, phi, Execution::Serial)).collect::<Result<_>>()?
    } else if points.len() == 1 {
        vec![sensitivity_point(&weights, &moments, points[0], Execution::Parallel)?]
    } else {
        points
            .par_iter()
            .map(|&phi| sensitivity_point(&weights, &moments, phi, Execution::Serial))
            .collect::<Result<_>>()?
    };

    Ok(SensitivityOutput { n: weights.len(), weights: weights.as_slice().to_vec(), rows })
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn field(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub fn write_sweep_csv<W: Write>(out: &SweepOutput, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SWEEP_CSV_HEADER)?;
    for r in &out.rows {
        w.write_record([
            format_float(r.phi),
            r.model.tag().to_string(),
            r.method.tag().to_string(),
            field(r.probability),
            field(r.sensitivity),
            field(r.truncation_error),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sensitivity_csv<W: Write>(out: &SensitivityOutput, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SENSITIVITY_CSV_HEADER)?;
    for r in &out.rows {
        w.write_record([
            format_float(r.phi),
            field(r.sensitivity_i),
            field(r.sensitivity_d),
            field(r.ratio),
            field(r.analytic_i),
            field(r.analytic_d),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut writer: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writeln!(writer)?;
    Ok(())
}

/// Open the configured destination, or stdout.
pub fn open_output(config: &RunConfig) -> Result<Box<dyn Write>> {
    Ok(match &config.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Compute a sweep and write it in the configured format.
pub fn run_sweep(config: &RunConfig) -> Result<SweepOutput> {
    let out = sweep(config)?;
    let mut dest = open_output(config)?;
    match config.format {
        OutputFormat::Csv => write_sweep_csv(&out, &mut dest)?,
        OutputFormat::Json => write_json(&out, &mut dest)?,
    }
    dest.flush()?;
    Ok(out)
}

pub fn run_sensitivity(config: &RunConfig) -> Result<SensitivityOutput> {
    let out = sensitivity_table(config)?;
    let mut dest = open_output(config)?;
    match config.format {
        OutputFormat::Csv => write_sensitivity_csv(&out, &mut dest)?,
        OutputFormat::Json => write_json(&out, &mut dest)?,
    }
    dest.flush()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ModelSelection, PhiGrid, WeightSpec};

    fn config(n: usize, methods: Vec<ProbabilityMethod>) -> RunConfig {
        RunConfig {
            n: Some(n),
            weights: WeightSpec::Linear,
            grid: PhiGrid::linear(0.0, 1e-2, 3),
            model: ModelSelection::Both,
            methods,
            parallel: false,
            ..RunConfig::default()
        }
    }

    #[test]
    fn row_layout_and_empty_fields() {
        let out = sweep(&config(3, vec![ProbabilityMethod::Truncated, ProbabilityMethod::Exact])).unwrap();
        assert_eq!(out.rows.len(), 3 * 2 * 2);
        let first = &out.rows[0];
        assert_eq!((first.phi, first.model, first.method), (0.0, PhotonModel::Indistinguishable, ProbabilityMethod::Exact));
        assert_eq!(first.sensitivity, None);
        assert_eq!(first.truncation_error, None);
        assert_eq!(out.rows[1].method, ProbabilityMethod::Truncated);
        assert!(out.rows[1].truncation_error.unwrap() < 1e-15);
        assert!(out.rows.windows(2).all(|w| w[0].phi <= w[1].phi));
        assert!(out.rows.iter().filter(|r| r.phi > 0.0).all(|r| r.sensitivity.is_some()));
    }

    #[test]
    fn closed_form_out_of_regime_is_empty() {
        let mut cfg = config(4, vec![ProbabilityMethod::ClosedForm]);
        cfg.grid = PhiGrid::single(2.0);
        let out = sweep(&cfg).unwrap();
        assert!(out.rows.iter().all(|r| r.probability.is_none()));
        assert!(out.rows.iter().all(|r| r.sensitivity.is_some()));
    }

    #[test]
    fn csv_header_is_exact() {
        let out = sweep(&config(2, vec![ProbabilityMethod::Exact])).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&out, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "phi,model,method,probability,sensitivity,truncation_error");
        assert_eq!(lines.next().unwrap(), "0.0000000000000000e0,I,exact,1.0000000000000000e0,,");
    }

    #[test]
    fn sensitivity_table_two_mode() {
        let cfg = RunConfig {
            n: None,
            weights: WeightSpec::File(std::path::PathBuf::new()),
            ..config(2, vec![])
        };
        // file spec without a path cannot be read
        assert!(sensitivity_table(&cfg).is_err());

        let mut cfg = config(2, vec![]);
        cfg.weights = WeightSpec::Index0;
        cfg.grid = PhiGrid::linear(0.0, 0.01, 2);
        let out = sensitivity_table(&cfg).unwrap();
        assert_eq!(out.rows[0].sensitivity_i, None);
        assert!((out.rows[0].analytic_i.unwrap() - 0.5).abs() < 1e-15);
        assert!((out.rows[1].sensitivity_i.unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 0.9999996000000533, -2.5e7] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }
}
