//! Report formatting: aligned text tables, CSV and JSON.

use condgof::engine::{StudyResult, TestResult};
use condgof::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "unknown format '{other}' (expected table, csv or json)"
            )),
        }
    }
}

/// Format with six significant digits (the convention for observed
/// statistic values).
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// p-values print with three decimals.
pub fn pvalue(p: f64) -> String {
    format!("{p:.3}")
}

pub fn print_test_report(
    label: &str,
    sample: &Sample,
    p_hat: Option<f64>,
    results: &[TestResult],
    format: Format,
) {
    match format {
        Format::Table => {
            let p_hat = p_hat.map_or("-".to_string(), sig6);
            println!(
                "dataset: {label} (n = {}, t = {}, p_hat = {p_hat})",
                sample.n(),
                sample.t()
            );
            if let Some(first) = results.first() {
                println!("K = {}, seed = {}", first.replications, first.seed);
            }
            if results.iter().any(|r| r.degenerate) {
                println!("warning: t = 0 is degenerate; every p-value is trivially 1");
            }
            println!();
            println!("{:<10} {:>14} {:>8}", "statistic", "observed", "p_cond");
            for r in results {
                println!(
                    "{:<10} {:>14} {:>8}",
                    r.statistic.name(),
                    sig6(r.observed),
                    pvalue(r.p_cond)
                );
            }
        }
        Format::Csv => {
            println!("statistic,observed,p_cond,extreme_count,replications,seed,degenerate");
            for r in results {
                println!(
                    "{},{},{},{},{},{},{}",
                    r.statistic.name(),
                    sig6(r.observed),
                    pvalue(r.p_cond),
                    r.extreme_count,
                    r.replications,
                    r.seed,
                    r.degenerate
                );
            }
        }
        Format::Json => {
            let body = serde_json::json!({
                "dataset": label,
                "n": sample.n(),
                "t": sample.t(),
                "p_hat": p_hat,
                "results": results,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&body).expect("serializable")
            );
        }
    }
}

pub fn print_study_report(title: &str, result: &StudyResult, format: Format) {
    match format {
        Format::Table => {
            println!(
                "{title} (alpha = {}, M = {}, K = {}, seed = {})",
                result.alpha, result.outer_replications, result.inner_replications, result.seed
            );
            if result.degenerate_datasets > 0 {
                println!(
                    "degenerate datasets (t = 0, never rejected): {}",
                    result.degenerate_datasets
                );
            }
            println!();
            let names: Vec<String> = result
                .rows
                .iter()
                .map(|r| r.statistic.to_string())
                .collect();
            let width = 8usize;
            print!("{:<10}", "");
            for name in &names {
                print!(" {name:>width$}");
            }
            println!();
            print!("{:<10}", "rate");
            for row in &result.rows {
                print!(" {:>width$}", format!("{:.3}", row.rejection_rate));
            }
            println!();
            print!("{:<10}", "mc_se");
            for row in &result.rows {
                print!(" {:>width$}", format!("{:.3}", row.mc_standard_error));
            }
            println!();
        }
        Format::Csv => {
            println!(
                "statistic,rejection_rate,mc_standard_error,rejections,outer,inner,alpha,seed"
            );
            for row in &result.rows {
                println!(
                    "{},{:.6},{:.6},{},{},{},{},{}",
                    row.statistic.name(),
                    row.rejection_rate,
                    row.mc_standard_error,
                    row.rejections,
                    result.outer_replications,
                    result.inner_replications,
                    result.alpha,
                    result.seed
                );
            }
        }
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(result).expect("serializable")
            );
        }
    }
}

/// Observed versus expected frequency table, optionally lumping the tail
/// into a single `>= lump` row, with expected counts to one decimal.
pub struct FrequencyTable {
    pub columns: Vec<(String, Vec<f64>)>,
    pub observed: Vec<u64>,
    pub lump: Option<u64>,
}

impl FrequencyTable {
    /// Rows of (label, observed, expected-per-column) after lumping.
    pub fn rows(&self) -> Vec<(String, f64, Vec<f64>)> {
        let max_value = self.observed.len() as u64 - 1;
        let cut = self.lump.map_or(max_value + 1, |l| l.min(max_value + 1));
        let mut rows = Vec::new();
        for j in 0..cut {
            let observed = self.observed.get(j as usize).copied().unwrap_or(0) as f64;
            let expected = self
                .columns
                .iter()
                .map(|(_, e)| e.get(j as usize).copied().unwrap_or(0.0))
                .collect();
            rows.push((j.to_string(), observed, expected));
        }
        if cut <= max_value {
            let observed: u64 = self.observed[cut as usize..].iter().sum();
            // Tail expectation is the total mass above the cut, not the sum
            // of the displayed rows.
            let expected = self
                .columns
                .iter()
                .map(|(_, e)| {
                    let head: f64 = e[..cut as usize].iter().sum();
                    let n: f64 = self.observed.iter().sum::<u64>() as f64;
                    n - head
                })
                .collect();
            rows.push((format!(">={cut}"), observed as f64, expected));
        }
        rows
    }

    pub fn print(&self) {
        print!("{:<6} {:>9}", "value", "observed");
        for (name, _) in &self.columns {
            print!(" {:>14}", name);
        }
        println!();
        for (label, observed, expected) in self.rows() {
            print!("{label:<6} {observed:>9}");
            for e in expected {
                print!(" {e:>14.1}");
            }
            println!();
        }
    }
}
