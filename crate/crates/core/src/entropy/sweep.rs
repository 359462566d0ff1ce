use std::fmt::Write as _;

use num_bigint::BigUint;

use super::{count_good_traces, monotonicity_report, CountOptions, GoodnessParams, MicrostateSpace};
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::shift::{AdmissibilityMode, Sft, DEFAULT_PATTERN_CAP};

pub const CSV_HEADER: &str =
    "d,method,mode,count,log_count_per_d_nats,log_count_per_d_base_a,beta0,certified_upper_bound,note";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepParams {
    /// Labels of `F`, resolved against each chart's monoid.
    pub f: Vec<String>,
    pub delta: Rational,
    pub epsilon: Rational,
    pub mode: AdmissibilityMode,
    pub count: CountOptions,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub d: usize,
    pub method: String,
    pub mode: String,
    pub count: Option<BigUint>,
    pub log_count_per_d_nats: Option<f64>,
    pub log_count_per_d_base_a: Option<f64>,
    pub beta0: Option<f64>,
    pub certified_upper_bound: Option<f64>,
    pub note: Option<String>,
}

impl SweepRow {
    /// A row with no values, noting why the chart could not be counted.
    pub fn failed(d: usize, mode: AdmissibilityMode, err: &Error) -> Self {
        SweepRow {
            d,
            method: String::new(),
            mode: mode.to_string(),
            count: None,
            log_count_per_d_nats: None,
            log_count_per_d_base_a: None,
            beta0: None,
            certified_upper_bound: None,
            note: Some(err.to_string()),
        }
    }

    pub fn hypotheses_unmet(&self) -> bool {
        self.note.as_deref().is_some_and(|n| n.starts_with("hypotheses unmet"))
    }
}

/// Counts one chart and, for a proper subshift, attaches the certified bound.
pub fn estimate_row(chart: &Chart, sft: &Sft, params: &SweepParams) -> Result<SweepRow> {
    let f = chart.positions_of(&params.f)?;
    let goodness = GoodnessParams::with_epsilon(f.clone(), params.delta, params.epsilon)?;
    let space = MicrostateSpace::new(chart, sft, &f, params.mode, DEFAULT_PATTERN_CAP)?;
    let result = count_good_traces(&space, &goodness, &params.count)?;
    let estimate = result.estimate();
    let mut row = SweepRow {
        d: chart.d(),
        method: result.method.to_string(),
        mode: result.mode.to_string(),
        count: Some(result.count),
        log_count_per_d_nats: Some(estimate.nats),
        log_count_per_d_base_a: Some(estimate.base_a),
        beta0: None,
        certified_upper_bound: None,
        note: None,
    };
    if !sft.is_full_shift() {
        match monotonicity_report(chart, sft, &f, params.delta) {
            Ok(report) => {
                row.beta0 = Some(report.beta0);
                row.certified_upper_bound = report.certified_upper_bound;
                if !report.hypotheses_met {
                    row.note = Some(format!("hypotheses unmet: {}", report.unmet.join("; ")));
                }
            }
            Err(Error::HypothesesUnmet(why)) => row.note = Some(format!("hypotheses unmet: {why}")),
            Err(e) => return Err(e),
        }
    }
    Ok(row)
}

/// One row per chart; a chart that fails yields a row carrying the reason.
pub fn sweep(charts: &[Chart], sft: &Sft, params: &SweepParams) -> Vec<SweepRow> {
    charts
        .iter()
        .map(|chart| {
            estimate_row(chart, sft, params)
                .unwrap_or_else(|e| SweepRow::failed(chart.d(), params.mode, &e))
        })
        .collect()
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// CSV text with an optional `# soficlab seed=N` first line.
pub fn sweep_csv(rows: &[SweepRow], seed: Option<u64>) -> String {
    let mut out = String::new();
    if let Some(seed) = seed {
        writeln!(out, "# soficlab seed={seed}").unwrap();
    }
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in rows {
        let note = r.note.as_deref().unwrap_or("").replace([',', '\n'], ";");
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.d,
            r.method,
            r.mode,
            opt(&r.count),
            opt(&r.log_count_per_d_nats),
            opt(&r.log_count_per_d_base_a),
            opt(&r.beta0),
            opt(&r.certified_upper_bound),
            note
        )
        .unwrap();
    }
    out
}
