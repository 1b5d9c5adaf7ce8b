use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use confcarbon::geodata::{self, AirportScope, GeoDataset};
use confcarbon::optimize::{evaluate_edition, optimal_location_boc, optimal_location_bps, EditionEvaluation, EvalOptions};
use confcarbon::par::{self, Parallelism};
use confcarbon::records::{self, check_references, parse_edition, ConferenceEdition, PaperRecord, ResolutionWarning};
use confcarbon::report::{self, EditionReport};
use confcarbon::{EmissionModel, Error};

use crate::InputArgs;

/// One or more errors from a command. Any I/O error makes the exit code 2,
/// otherwise it is 1.
pub struct Failure {
    pub errors: Vec<Error>,
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        if self.errors.iter().any(Error::is_io) {
            2
        } else {
            1
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { errors: vec![e] }
    }
}

type CmdResult = Result<(), Failure>;

struct Edition {
    path: PathBuf,
    edition: ConferenceEdition,
    records: Vec<PaperRecord>,
}

fn bundled_or(path: &Option<PathBuf>, name: &str, bundled: &'static str) -> Result<(String, String), Error> {
    match path {
        None => Ok((format!("bundled {name}"), bundled.to_string())),
        Some(p) => std::fs::read_to_string(p)
            .map(|text| (p.display().to_string(), text))
            .map_err(|e| Error::Io {
                path: p.clone(),
                source: e,
            }),
    }
}

fn load_dataset(inputs: &InputArgs) -> Result<GeoDataset, Error> {
    if inputs.airports.is_none() && inputs.capitals.is_none() && inputs.cities.is_none() {
        return GeoDataset::bundled();
    }
    if let (Some(a), Some(c), Some(t)) = (&inputs.airports, &inputs.capitals, &inputs.cities) {
        return geodata::load_geodata(a, c, t);
    }
    let (an, a) = bundled_or(&inputs.airports, "airports.csv", geodata::BUNDLED_AIRPORTS)?;
    let (cn, c) = bundled_or(&inputs.capitals, "capitals.csv", geodata::BUNDLED_CAPITALS)?;
    let (tn, t) = bundled_or(&inputs.cities, "cities.csv", geodata::BUNDLED_CITIES)?;
    GeoDataset::from_csv((&an, &a), (&cn, &c), (&tn, &t))
}

fn options(inputs: &InputArgs) -> EvalOptions {
    EvalOptions {
        scope: if inputs.include_all_airports {
            AirportScope::All
        } else {
            AirportScope::InternationalOnly
        },
        candidates: inputs.candidate_set(),
        parallelism: if inputs.serial {
            Parallelism::Serial
        } else {
            Parallelism::Parallel
        },
    }
}

/// Loads geodata, model and editions, collecting every input problem before
/// giving up.
fn load_all(inputs: &InputArgs, paths: &[PathBuf]) -> Result<(GeoDataset, EmissionModel, Vec<Edition>), Failure> {
    let mut errors = Vec::new();
    let dataset = load_dataset(inputs).map_err(|e| errors.push(e)).ok();
    let model = EmissionModel::load(inputs.model.as_deref()).map_err(|e| errors.push(e)).ok();

    let mut editions = Vec::new();
    for path in paths {
        match parse_edition(path) {
            Ok((edition, records)) => editions.push(Edition {
                path: path.clone(),
                edition,
                records,
            }),
            Err(e) => errors.push(e),
        }
    }

    if let Some(ds) = &dataset {
        if let Some(candidates) = inputs.candidate_set() {
            let unknown: Vec<String> = candidates
                .iter()
                .filter(|c| ds.capital(c).is_none())
                .map(|c| format!("--candidates: no capital for country {c:?}"))
                .collect();
            if !unknown.is_empty() {
                errors.push(Error::Validation {
                    source_name: "command line".into(),
                    problems: unknown,
                });
            }
        }
        for e in &editions {
            if let Err(err) = check_references(&e.path.display().to_string(), ds, &e.edition, &e.records) {
                errors.push(err);
            }
        }
    }

    let mut seen: BTreeMap<(&str, i32), &Path> = BTreeMap::new();
    for e in &editions {
        if let Some(first) = seen.insert((&e.edition.conference, e.edition.year), &e.path) {
            errors.push(Error::Validation {
                source_name: e.path.display().to_string(),
                problems: vec![format!(
                    "{} {} is also defined in {}",
                    e.edition.conference,
                    e.edition.year,
                    first.display()
                )],
            });
        }
    }

    match (dataset, model) {
        (Some(ds), Some(m)) if errors.is_empty() => Ok((ds, m, editions)),
        _ => Err(Failure { errors }),
    }
}

pub fn validate(inputs: &InputArgs, paths: &[PathBuf]) -> CmdResult {
    let (ds, _, editions) = load_all(inputs, paths)?;
    let papers: usize = editions.iter().map(|e| e.records.len()).sum();
    eprintln!(
        "ok: {} airports, {} capitals, {} cities; {} editions, {} papers",
        ds.airport_count(),
        ds.capital_count(),
        ds.city_count(),
        editions.len(),
        papers
    );
    Ok(())
}

pub fn optimize(inputs: &InputArgs, path: &Path) -> CmdResult {
    let (ds, _, editions) = load_all(inputs, &[path.to_path_buf()])?;
    let opts = options(inputs);
    let e = &editions[0];
    let (travelers, _) = records::resolve_travelers(&ds, &e.records, opts.scope, opts.parallelism)?;
    let boc = optimal_location_boc(&ds, &travelers, opts.candidates.as_ref(), opts.parallelism)?;
    let bps = optimal_location_bps(&ds, &e.records, &travelers, opts.parallelism)?;
    let candidates = opts.candidates.as_ref().map_or(ds.capital_count(), |c| c.len());

    let mut out = String::new();
    let _ = writeln!(out, "edition: {} {} ({} papers)", e.edition.conference, e.edition.year, e.records.len());
    let _ = writeln!(
        out,
        "BOC: {} ({}, {}) distance_sum_km={:.3} candidates={}",
        boc.capital.country_code, boc.capital.capital_city, boc.airport.iata, boc.distance_sum_km, candidates
    );
    let _ = writeln!(
        out,
        "BPS: {} ({}, {}) submissions={} distance_sum_km={:.3}",
        bps.capital.country_code, bps.capital.capital_city, bps.airport.iata, bps.submissions, bps.distance_sum_km
    );
    print!("{out}");
    Ok(())
}

fn warnings_text(evals: &[EditionEvaluation]) -> String {
    let mut out = String::new();
    for e in evals {
        let overrides = e
            .warnings
            .iter()
            .filter(|w| matches!(w, ResolutionWarning::OverrideUsed { .. }))
            .count();
        let coverage = if e.traveler_count == 0 {
            100.0
        } else {
            100.0 * (e.traveler_count - e.fallback_count) as f64 / e.traveler_count as f64
        };
        let _ = writeln!(
            out,
            "{} {}: {} travelers, {} capital fallbacks, {} airport overrides, city coverage {:.1}%",
            e.edition.conference, e.edition.year, e.traveler_count, e.fallback_count, overrides, coverage
        );
        for w in &e.warnings {
            let _ = writeln!(out, "  {w}");
        }
    }
    out
}

pub fn footprint(inputs: &InputArgs, paths: &[PathBuf], out: &Path) -> CmdResult {
    let (ds, model, editions) = load_all(inputs, paths)?;
    let opts = options(inputs);
    let mut evals = par::try_map(opts.parallelism, &editions, |e| {
        evaluate_edition(&ds, &model, &e.edition, &e.records, &opts)
    })?;
    evals.sort_by(|a, b| (a.edition.year, &a.edition.conference).cmp(&(b.edition.year, &b.edition.conference)));

    let reports: Vec<EditionReport> = evals.iter().map(EditionReport::from).collect();
    let rows = report::build_table(&reports);
    let summaries = report::per_year_totals(&reports);

    std::fs::create_dir_all(out).map_err(|e| Error::Io {
        path: out.to_path_buf(),
        source: e,
    })?;
    report::emit_csv(&rows, &out.join("results.csv"))?;
    report::emit_markdown(&rows, &out.join("results.md"))?;
    report::emit_plot_csv(&rows, &out.join("per_year.csv"))?;
    report::emit_summary_markdown(&summaries, &out.join("summary.md"))?;
    std::fs::write(out.join("warnings.txt"), warnings_text(&evals)).map_err(|e| Error::Io {
        path: out.join("warnings.txt"),
        source: e,
    })?;
    eprintln!("wrote {} editions to {}", evals.len(), out.display());
    Ok(())
}
