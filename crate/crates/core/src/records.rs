//! Conference editions, paper records and traveler resolution.
//!
//! An edition file is one JSON document:
//!
//! ```json
//! {
//!   "conference": "ICML",
//!   "year": 2019,
//!   "mode": "in_person",
//!   "venue": { "city": "Long Beach", "country_code": "US", "airport_iata": "LAX" },
//!   "papers": [
//!     { "paper_id": "icml19-001", "city": "Beijing", "country_code": "CN" },
//!     { "paper_id": "icml19-002", "city": "Zurich", "country_code": "CH", "origin_airport_iata": "ZRH" }
//!   ]
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geo::GeoPoint;
use crate::geodata::{is_country_code, is_iata, Airport, AirportScope, GeoDataset, ResolutionQuality};
use crate::par::{self, Parallelism};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EditionMode {
    InPerson,
    Virtual,
    Hybrid,
}

impl EditionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EditionMode::InPerson => "in_person",
            EditionMode::Virtual => "virtual",
            EditionMode::Hybrid => "hybrid",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "in_person" => Some(EditionMode::InPerson),
            "virtual" => Some(EditionMode::Virtual),
            "hybrid" => Some(EditionMode::Hybrid),
            _ => None,
        }
    }
}

impl fmt::Display for EditionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One edition of a conference. Virtual and hybrid editions keep the venue
/// that was announced before the switch.
#[derive(Debug, Clone, PartialEq)]
pub struct ConferenceEdition {
    pub conference: String,
    pub year: i32,
    pub mode: EditionMode,
    pub venue_city: String,
    pub venue_country: String,
    pub venue_airport_iata: Option<String>,
}

/// One accepted paper, standing for one traveler from the first author's
/// affiliation.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperRecord {
    pub paper_id: String,
    pub affiliation_city: String,
    pub affiliation_country: String,
    pub origin_airport_override: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedTraveler {
    pub paper_id: String,
    pub origin_point: GeoPoint,
    pub origin_airport: Airport,
    pub resolution: ResolutionQuality,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolutionWarning {
    CapitalFallback {
        paper_id: String,
        city: String,
        country_code: String,
    },
    OverrideUsed {
        paper_id: String,
        iata: String,
    },
}

impl fmt::Display for ResolutionWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResolutionWarning::CapitalFallback {
                paper_id,
                city,
                country_code,
            } => write!(f, "{paper_id}: city {city:?} not found in {country_code}, using capital"),
            ResolutionWarning::OverrideUsed { paper_id, iata } => {
                write!(f, "{paper_id}: origin airport overridden to {iata}")
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdition {
    conference: String,
    year: i64,
    mode: String,
    venue: RawVenue,
    papers: Vec<RawPaper>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVenue {
    city: String,
    country_code: String,
    #[serde(default)]
    airport_iata: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPaper {
    paper_id: String,
    city: String,
    country_code: String,
    #[serde(default)]
    origin_airport_iata: Option<String>,
}

pub fn parse_edition(path: &Path) -> Result<(ConferenceEdition, Vec<PaperRecord>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edition_str(&path.display().to_string(), &text)
}

/// Parses and fully validates an edition document. Every validation problem
/// is reported, not just the first.
pub fn parse_edition_str(source_name: &str, text: &str) -> Result<(ConferenceEdition, Vec<PaperRecord>)> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawEdition = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse {
            source_name: source_name.to_string(),
            location: if path == "." { "$".to_string() } else { format!("$.{path}") },
            message: e.into_inner().to_string(),
        }
    })?;

    let mut problems = Vec::new();
    if raw.conference.trim().is_empty() {
        problems.push("conference: must not be empty".to_string());
    }
    if !(1950..=2100).contains(&raw.year) {
        problems.push(format!("year: {} outside [1950, 2100]", raw.year));
    }
    let mode = EditionMode::parse(&raw.mode);
    if mode.is_none() {
        problems.push(format!(
            "mode: {:?} is not one of \"in_person\", \"virtual\", \"hybrid\"",
            raw.mode
        ));
    }
    if raw.venue.city.trim().is_empty() {
        problems.push("venue.city: must not be empty".to_string());
    }
    if !is_country_code(&raw.venue.country_code) {
        problems.push(format!("venue.country_code: invalid country code {:?}", raw.venue.country_code));
    }
    if let Some(code) = &raw.venue.airport_iata {
        if !is_iata(code) {
            problems.push(format!("venue.airport_iata: invalid IATA code {code:?}"));
        }
    }

    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, p) in raw.papers.iter().enumerate() {
        let at = format!("papers[{i}] (paper_id {:?})", p.paper_id);
        if p.paper_id.trim().is_empty() {
            problems.push(format!("{at}: paper_id must not be empty"));
        } else if let Some(first) = seen.insert(p.paper_id.as_str(), i) {
            problems.push(format!("{at}: duplicate paper_id {:?} (first at papers[{first}])", p.paper_id));
        }
        if !is_country_code(&p.country_code) {
            problems.push(format!("{at}: invalid country_code {:?}", p.country_code));
        }
        if let Some(code) = &p.origin_airport_iata {
            if !is_iata(code) {
                problems.push(format!("{at}: invalid origin_airport_iata {code:?}"));
            }
        }
    }

    if !problems.is_empty() {
        return Err(Error::Validation {
            source_name: source_name.to_string(),
            problems,
        });
    }

    let edition = ConferenceEdition {
        conference: raw.conference.trim().to_string(),
        year: raw.year as i32,
        mode: mode.expect("validated"),
        venue_city: raw.venue.city.trim().to_string(),
        venue_country: raw.venue.country_code,
        venue_airport_iata: raw.venue.airport_iata,
    };
    let records = raw
        .papers
        .into_iter()
        .map(|p| PaperRecord {
            paper_id: p.paper_id,
            affiliation_city: p.city.trim().to_string(),
            affiliation_country: p.country_code,
            origin_airport_override: p.origin_airport_iata,
        })
        .collect();
    Ok((edition, records))
}

/// Checks that every country and airport an edition refers to exists in
/// the dataset, reporting all problems at once.
pub fn check_references(
    source_name: &str,
    dataset: &GeoDataset,
    edition: &ConferenceEdition,
    records: &[PaperRecord],
) -> Result<()> {
    let mut problems = Vec::new();
    match &edition.venue_airport_iata {
        Some(iata) if dataset.airport(iata).is_none() => {
            problems.push(format!("venue.airport_iata: unknown airport {iata}"));
        }
        Some(_) => {}
        None => {
            if dataset.resolve_city(&edition.venue_city, &edition.venue_country).is_err() {
                problems.push(format!("venue.country_code: unknown country {}", edition.venue_country));
            }
        }
    }
    for (i, r) in records.iter().enumerate() {
        let at = format!("papers[{i}] (paper_id {:?})", r.paper_id);
        if dataset.capital(&r.affiliation_country).is_none()
            && dataset.city(&r.affiliation_city, &r.affiliation_country).is_none()
        {
            problems.push(format!("{at}: unknown country {}", r.affiliation_country));
        }
        if let Some(iata) = &r.origin_airport_override {
            if dataset.airport(iata).is_none() {
                problems.push(format!("{at}: unknown origin airport {iata}"));
            }
        }
    }
    if records.is_empty() {
        problems.push("papers: at least one paper is required".to_string());
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation {
            source_name: source_name.to_string(),
            problems,
        })
    }
}

/// Maps each record to a traveler, preserving order.
///
/// The origin point always comes from the affiliation city (or the capital
/// fallback); an airport override only replaces the nearest-airport search.
pub fn resolve_travelers(
    dataset: &GeoDataset,
    records: &[PaperRecord],
    scope: AirportScope,
    mode: Parallelism,
) -> Result<(Vec<ResolvedTraveler>, Vec<ResolutionWarning>)> {
    let located = records
        .iter()
        .map(|r| {
            dataset
                .resolve_city(&r.affiliation_city, &r.affiliation_country)
                .map_err(|e| e.with_context(format!("paper_id {:?}", r.paper_id)))
        })
        .collect::<Result<Vec<_>>>()?;

    // many papers share a city; search each distinct point once
    let distinct: Vec<GeoPoint> = located
        .iter()
        .zip(records)
        .filter(|(_, r)| r.origin_airport_override.is_none())
        .map(|((p, _), _)| (p.lat().to_bits(), p.lon().to_bits()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|(lat, lon)| GeoPoint::new(f64::from_bits(lat), f64::from_bits(lon)).expect("valid point"))
        .collect();
    let nearest = par::try_map(mode, &distinct, |p| dataset.nearest_airport(*p, scope).map(|a| a.iata.clone()))?;
    let lookup: BTreeMap<(u64, u64), &str> = distinct
        .iter()
        .zip(&nearest)
        .map(|(p, iata)| ((p.lat().to_bits(), p.lon().to_bits()), iata.as_str()))
        .collect();

    let mut travelers = Vec::with_capacity(records.len());
    let mut warnings = Vec::new();
    for (record, (point, quality)) in records.iter().zip(located) {
        if quality == ResolutionQuality::CapitalFallback {
            warnings.push(ResolutionWarning::CapitalFallback {
                paper_id: record.paper_id.clone(),
                city: record.affiliation_city.clone(),
                country_code: record.affiliation_country.clone(),
            });
        }
        let airport = match &record.origin_airport_override {
            Some(iata) => {
                let airport = dataset.airport(iata).ok_or_else(|| Error::UnknownAirportOverride {
                    iata: iata.clone(),
                    context: Some(format!("paper_id {:?}", record.paper_id)),
                })?;
                warnings.push(ResolutionWarning::OverrideUsed {
                    paper_id: record.paper_id.clone(),
                    iata: iata.clone(),
                });
                airport
            }
            None => {
                let iata = lookup[&(point.lat().to_bits(), point.lon().to_bits())];
                dataset.airport(iata).expect("airport from dataset")
            }
        };
        travelers.push(ResolvedTraveler {
            paper_id: record.paper_id.clone(),
            origin_point: point,
            origin_airport: airport.clone(),
            resolution: quality,
        });
    }
    Ok((travelers, warnings))
}
