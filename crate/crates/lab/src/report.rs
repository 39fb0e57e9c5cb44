//! Report files. Each file opens with `#` comment lines that record the
//! command, the seed and the configuration; the body is CSV. Nothing in a
//! report depends on the clock unless a timestamp is asked for, so equal
//! configurations give byte-identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_rational::BigRational;

use lrs_core::density::{DashboardRow, PolyExperimentReport};
use lrs_core::inequality::{CensusReport, SmallValueReport};
use lrs_core::interval;
use lrs_core::sieve::TailCountReport;

use crate::error::{LabError, LabResult};

#[derive(Debug, Clone, Default)]
pub struct Header {
    pub command: String,
    pub seed: u64,
    pub config: Vec<(String, String)>,
    pub timestamp: Option<u64>,
}

impl Header {
    pub fn new(command: &str, seed: u64) -> Self {
        Header {
            command: command.into(),
            seed,
            ..Default::default()
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.config.push((key.into(), value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        let mut s = format!("# lrs-lab {}\n# seed = {}\n", self.command, self.seed);
        for (k, v) in &self.config {
            let _ = writeln!(s, "# {k} = {v}");
        }
        if let Some(t) = self.timestamp {
            let _ = writeln!(s, "# generated_unix = {t}");
        }
        s
    }
}

/// Exact rational as `n` or `n/d`.
pub fn rational_str(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn csv_body<R: IntoIterator<Item = Vec<String>>>(columns: &[&str], rows: R) -> LabResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| LabError::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 fields"))
}

pub fn census_csv(h: &Header, r: &CensusReport) -> LabResult<String> {
    let rows = r.outcomes.iter().map(|o| {
        vec![
            o.n.to_string(),
            o.kind.to_string(),
            o.verdict.to_string(),
            rational_str(&o.lhs_low),
            rational_str(&o.lhs_high),
            o.rhs.to_string(),
            o.probable_used.to_string(),
        ]
    });
    let body = csv_body(
        &["n", "kind", "verdict", "lhs_low", "lhs_high", "rhs", "probable_used"],
        rows,
    )?;
    Ok(h.render() + &body)
}

pub fn census_summary(h: &Header, r: &CensusReport) -> String {
    let mut s = h.render();
    let _ = writeln!(s, "x = {}", r.x);
    let _ = writeln!(s, "kind = {}", r.kind);
    let _ = writeln!(s, "holds = {}", r.holds);
    let _ = writeln!(s, "fails = {}", r.fails);
    let _ = writeln!(s, "undecided = {}", r.undecided);
    let _ = writeln!(s, "skipped_zero = {}", r.skipped_zero);
    let _ = writeln!(s, "probable_used = {}", r.probable_used);
    let _ = writeln!(s, "errored = {}", r.errored.len());
    let _ = writeln!(s, "ratio_fails_over_x_div_log_x = {:.6}", r.ratio);
    let idx: Vec<String> = r.exceptional_indices.iter().map(u64::to_string).collect();
    let _ = writeln!(s, "exceptional_indices = [{}]", idx.join(", "));
    for (n, e) in &r.errored {
        let _ = writeln!(s, "error {n} = {e}");
    }
    s
}

pub fn tail_counts_csv(h: &Header, rows: &[(&str, &TailCountReport)]) -> LabResult<String> {
    let body = csv_body(
        &["x", "experiment", "threshold", "count", "comparison_value", "undecided_count"],
        rows.iter().map(|(name, r)| {
            vec![
                r.x.to_string(),
                name.to_string(),
                r.threshold_description.clone(),
                r.count.to_string(),
                format!("{:.6}", r.comparison),
                r.undecided.to_string(),
            ]
        }),
    )?;
    Ok(h.render() + &body)
}

pub fn dashboard_csv(h: &Header, rows: &[DashboardRow]) -> LabResult<String> {
    let body = csv_body(
        &[
            "x",
            "y",
            "rough_count",
            "rough_reference",
            "high_omega_threshold",
            "high_omega_count",
            "high_omega_reference",
            "tau_sigma_threshold",
            "tau_sigma_count",
            "tau_sigma_undecided",
            "tau_sigma_reference",
        ],
        rows.iter().map(|r| {
            vec![
                r.x.to_string(),
                r.y.to_string(),
                r.rough.count.to_string(),
                format!("{:.6}", r.rough.comparison),
                r.high_omega.threshold_description.clone(),
                r.high_omega.count.to_string(),
                format!("{:.6}", r.high_omega.comparison),
                r.tau_sigma.threshold_description.clone(),
                r.tau_sigma.count.to_string(),
                r.tau_sigma.undecided.to_string(),
                format!("{:.6}", r.tau_sigma.comparison),
            ]
        }),
    )?;
    Ok(h.render() + &body)
}

/// Two-column `(x, count)` plot data for one dashboard metric.
pub fn dashboard_plot(h: &Header, rows: &[DashboardRow], metric: &str) -> LabResult<String> {
    let pick = |r: &DashboardRow| match metric {
        "rough" => r.rough.count,
        "high_omega" => r.high_omega.count,
        _ => r.tau_sigma.count,
    };
    let body = csv_body(
        &["x", metric],
        rows.iter().map(|r| vec![r.x.to_string(), pick(r).to_string()]),
    )?;
    Ok(h.render() + &body)
}

pub fn small_values_csv(h: &Header, r: &SmallValueReport) -> LabResult<String> {
    let mut rows: Vec<(u64, &str)> = r
        .indices
        .iter()
        .map(|&n| (n, "member"))
        .chain(r.undecided.iter().map(|&n| (n, "undecided")))
        .chain(r.zeros.iter().map(|&n| (n, "zero")))
        .collect();
    rows.sort();
    let body = csv_body(
        &["n", "status"],
        rows.into_iter().map(|(n, s)| vec![n.to_string(), s.to_string()]),
    )?;
    let h = h
        .clone()
        .with("delta_low", format!("{:.12}", interval::to_f64(&r.delta.lo)))
        .with("delta_high", format!("{:.12}", interval::to_f64(&r.delta.hi)))
        .with("members", r.indices.len())
        .with("undecided", r.undecided.len());
    Ok(h.render() + &body)
}

pub fn poly_summary(h: &Header, r: &PolyExperimentReport) -> String {
    let mut s = h.render();
    let fd = r.failure_density();
    let td = r.tail_density();
    let _ = writeln!(s, "x = {}", r.x);
    let _ = writeln!(s, "failures = {}", r.failures);
    let _ = writeln!(s, "failures_odd = {}", r.failures_odd);
    let _ = writeln!(s, "failures_even = {}", r.failures_even);
    let _ = writeln!(s, "failure_density = {} ({:.6})", rational_str(&fd), lrs_core::density::density_f64(&fd));
    let _ = writeln!(s, "tail_count = {}", r.tail_count);
    let _ = writeln!(s, "tail_density = {} ({:.6})", rational_str(&td), lrs_core::density::density_f64(&td));
    let _ = writeln!(s, "implication_violations = {}", r.implication_violations.len());
    let _ = writeln!(s, "even_violations = {}", r.even_violations.len());
    s
}

pub fn poly_csv(h: &Header, r: &PolyExperimentReport) -> LabResult<String> {
    let body = csv_body(
        &["n", "parity"],
        r.failure_indices.iter().map(|&n| {
            vec![n.to_string(), if n % 2 == 1 { "odd" } else { "even" }.to_string()]
        }),
    )?;
    Ok(h.render() + &body)
}

pub fn write_file(dir: &Path, name: &str, content: &str) -> LabResult<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, content).map_err(|e| LabError::io(&path, e))?;
    Ok(path)
}
