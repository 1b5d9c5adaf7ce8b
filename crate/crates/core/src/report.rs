//! Result tables and per-conference aggregates.
//!
//! Masses are carried in kg and converted to tonnes only here. Human-facing
//! tables print tonnes with two decimals and percentages with one; the CSV
//! outputs keep full precision (shortest round-trip representation).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::optimize::{EditionEvaluation, RealizedSavings, Savings, ScenarioLabel, VenueScenario};
use crate::records::EditionMode;
use crate::sum::compensated_sum;

pub const RESULTS_HEADER: [&str; 11] = [
    "conference",
    "year",
    "mode",
    "scenario",
    "country",
    "city",
    "airport",
    "total_tonnes",
    "savings_pct",
    "traveler_count",
    "fallback_count",
];

pub const PLOT_HEADER: [&str; 4] = ["conference", "year", "scenario", "tonnes"];

/// Written in the `savings_pct` column when savings are undefined.
pub const UNDEFINED_SAVINGS: &str = "NA";

#[derive(Debug, Clone, PartialEq)]
pub struct EditionReport {
    pub conference: String,
    pub year: i32,
    pub mode: EditionMode,
    pub scenarios: Vec<VenueScenario>,
    pub traveler_count: usize,
    pub fallback_count: usize,
}

impl From<&EditionEvaluation> for EditionReport {
    fn from(e: &EditionEvaluation) -> Self {
        EditionReport {
            conference: e.edition.conference.clone(),
            year: e.edition.year,
            mode: e.edition.mode,
            scenarios: e.scenarios.clone(),
            traveler_count: e.traveler_count,
            fallback_count: e.fallback_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub conference: String,
    pub year: i32,
    pub mode: EditionMode,
    pub scenario: ScenarioLabel,
    pub country: String,
    pub city: String,
    pub airport: String,
    pub total_kg: f64,
    pub savings: Savings,
    pub realized: Option<RealizedSavings>,
    pub traveler_count: usize,
    pub fallback_count: usize,
}

impl TableRow {
    pub fn total_tonnes(&self) -> f64 {
        self.total_kg / 1000.0
    }

    /// Savings with one decimal and a percent sign, e.g. `-20.0%`.
    pub fn savings_display(&self) -> String {
        savings_text(self.savings)
    }

    /// Realised-savings note for virtual and hybrid editions.
    pub fn annotation(&self) -> Option<String> {
        let r = self.realized?;
        Some(match self.mode {
            EditionMode::Virtual => "virtual: realized savings 100%; totals are counterfactual".to_string(),
            _ => format!(
                "hybrid: savings range between {} and {}",
                savings_text(r.low),
                pct_text(r.high_pct)
            ),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConferenceSummary {
    pub conference: String,
    pub per_year_actual_tonnes: BTreeMap<i32, f64>,
    pub mean_actual_tonnes: f64,
}

fn pct_text(v: f64) -> String {
    let s = format!("{v:.1}%");
    if s == "-0.0%" {
        "0.0%".to_string()
    } else {
        s
    }
}

fn savings_text(s: Savings) -> String {
    match s {
        Savings::Defined(v) => pct_text(v),
        Savings::Undefined => "undefined".to_string(),
    }
}

/// One row per edition per scenario, sorted by (year, conference, scenario).
pub fn build_table(reports: &[EditionReport]) -> Vec<TableRow> {
    let mut rows: Vec<TableRow> = reports
        .iter()
        .flat_map(|r| {
            r.scenarios.iter().map(move |s| TableRow {
                conference: r.conference.clone(),
                year: r.year,
                mode: r.mode,
                scenario: s.label,
                country: s.country_code.clone(),
                city: s.city.clone(),
                airport: s.airport.iata.clone(),
                total_kg: s.total_co2_kg,
                savings: s.savings,
                realized: s.realized,
                traveler_count: r.traveler_count,
                fallback_count: r.fallback_count,
            })
        })
        .collect();
    rows.sort_by(|a, b| {
        (a.year, &a.conference, a.scenario)
            .cmp(&(b.year, &b.conference, b.scenario))
            .then(a.total_kg.total_cmp(&b.total_kg))
    });
    rows
}

/// Actual-venue totals per conference and year, in tonnes. Years without an
/// edition are absent. Virtual editions contribute their counterfactual
/// in-person total.
pub fn per_year_totals(reports: &[EditionReport]) -> Vec<ConferenceSummary> {
    let mut grouped: BTreeMap<&str, BTreeMap<i32, Vec<f64>>> = BTreeMap::new();
    for r in reports {
        if let Some(actual) = r.scenarios.iter().find(|s| s.label == ScenarioLabel::Actual) {
            grouped
                .entry(r.conference.as_str())
                .or_default()
                .entry(r.year)
                .or_default()
                .push(actual.total_co2_kg);
        }
    }
    grouped
        .into_iter()
        .map(|(conference, years)| {
            let per_year: BTreeMap<i32, f64> = years
                .into_iter()
                .map(|(y, mut kgs)| {
                    kgs.sort_by(f64::total_cmp);
                    (y, compensated_sum(kgs) / 1000.0)
                })
                .collect();
            let mean = compensated_sum(per_year.values().copied()) / per_year.len() as f64;
            ConferenceSummary {
                conference: conference.to_string(),
                per_year_actual_tonnes: per_year,
                mean_actual_tonnes: mean,
            }
        })
        .collect()
}

fn csv_writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(buf)
}

fn csv_bytes<F>(header: &[&str], write_rows: F) -> Vec<u8>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>,
{
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(header).expect("write to Vec");
        write_rows(&mut w).expect("write to Vec");
        w.flush().expect("flush to Vec");
    }
    buf
}

/// `results.csv` contents.
pub fn results_csv(rows: &[TableRow]) -> Vec<u8> {
    csv_bytes(&RESULTS_HEADER, |w| {
        for r in rows {
            let savings = match r.savings {
                Savings::Defined(v) => v.to_string(),
                Savings::Undefined => UNDEFINED_SAVINGS.to_string(),
            };
            w.write_record([
                r.conference.clone(),
                r.year.to_string(),
                r.mode.as_str().to_string(),
                r.scenario.as_str().to_string(),
                r.country.clone(),
                r.city.clone(),
                r.airport.clone(),
                r.total_tonnes().to_string(),
                savings,
                r.traveler_count.to_string(),
                r.fallback_count.to_string(),
            ])?;
        }
        Ok(())
    })
}

/// Tidy `conference,year,scenario,tonnes` series for external plotting.
pub fn plot_csv(rows: &[TableRow]) -> Vec<u8> {
    csv_bytes(&PLOT_HEADER, |w| {
        for r in rows {
            w.write_record([
                r.conference.clone(),
                r.year.to_string(),
                r.scenario.as_str().to_string(),
                r.total_tonnes().to_string(),
            ])?;
        }
        Ok(())
    })
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn location(row: &TableRow) -> String {
    format!("{} ({}, {})", row.country, row.city, row.airport)
}

/// Markdown table with one line per edition: the actual venue next to the
/// BOC and BPS alternatives and their savings.
pub fn results_markdown(rows: &[TableRow]) -> String {
    let mut out = String::from(
        "| Year | Conference | Actual location | Actual tCO2 | Optimal location BOC | BOC tCO2 | Savings BOC | Optimal location BPS | BPS tCO2 | Savings BPS | Travelers | Fallbacks | Notes |\n\
         |---:|---|---|---:|---|---:|---:|---|---:|---:|---:|---:|---|\n",
    );
    let mut i = 0;
    while i < rows.len() {
        let key = (rows[i].year, &rows[i].conference);
        let mut j = i;
        while j < rows.len() && (rows[j].year, &rows[j].conference) == key {
            j += 1;
        }
        let group = &rows[i..j];
        let find = |label| group.iter().find(|r| r.scenario == label);
        let first = &group[0];
        let mut cells = vec![first.year.to_string(), md_cell(&first.conference)];
        match find(ScenarioLabel::Actual) {
            Some(r) => {
                let mut loc = location(r);
                match r.mode {
                    EditionMode::Virtual => loc.push_str(" - Virtual"),
                    EditionMode::Hybrid => loc.push_str(" - Hybrid"),
                    EditionMode::InPerson => {}
                }
                cells.push(md_cell(&loc));
                cells.push(format!("{:.2}", r.total_tonnes()));
            }
            None => cells.extend([String::new(), String::new()]),
        }
        for label in [ScenarioLabel::Boc, ScenarioLabel::Bps] {
            match find(label) {
                Some(r) => {
                    cells.push(md_cell(&location(r)));
                    cells.push(format!("{:.2}", r.total_tonnes()));
                    cells.push(r.savings_display());
                }
                None => cells.extend([String::new(), String::new(), String::new()]),
            }
        }
        cells.push(first.traveler_count.to_string());
        cells.push(first.fallback_count.to_string());
        let notes: Vec<String> = group
            .iter()
            .filter(|r| r.mode == EditionMode::Hybrid || r.scenario == ScenarioLabel::Actual)
            .filter_map(|r| r.annotation().map(|a| format!("{}: {a}", r.scenario)))
            .collect();
        cells.push(md_cell(&notes.join("; ")));
        let _ = writeln!(out, "| {} |", cells.join(" | "));
        i = j;
    }
    out
}

/// Markdown table of per-year actual totals and their mean per conference.
pub fn summary_markdown(summaries: &[ConferenceSummary]) -> String {
    let mut out = String::from("| Conference | Year | Actual tCO2 |\n|---|---:|---:|\n");
    for s in summaries {
        for (year, t) in &s.per_year_actual_tonnes {
            let _ = writeln!(out, "| {} | {year} | {t:.2} |", md_cell(&s.conference));
        }
        let _ = writeln!(out, "| {} | mean | {:.2} |", md_cell(&s.conference), s.mean_actual_tonnes);
    }
    out
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(bytes))
        .map_err(|e| Error::io(path, e))
}

pub fn emit_csv(rows: &[TableRow], path: &Path) -> Result<()> {
    write_file(path, &results_csv(rows))
}

pub fn emit_markdown(rows: &[TableRow], path: &Path) -> Result<()> {
    write_file(path, results_markdown(rows).as_bytes())
}

pub fn emit_plot_csv(rows: &[TableRow], path: &Path) -> Result<()> {
    write_file(path, &plot_csv(rows))
}

pub fn emit_summary_markdown(summaries: &[ConferenceSummary], path: &Path) -> Result<()> {
    write_file(path, summary_markdown(summaries).as_bytes())
}
