//! Venue selection and scenario evaluation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::emissions::EmissionModel;
use crate::error::{Error, Result};
use crate::geo::{haversine_distance, GeoPoint};
use crate::geodata::{Airport, AirportScope, CapitalRecord, GeoDataset, ResolutionQuality};
use crate::par::{self, Parallelism};
use crate::records::{resolve_travelers, ConferenceEdition, EditionMode, PaperRecord, ResolutionWarning, ResolvedTraveler};
use crate::sum::{compensated_sum, sum_by_key};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScenarioLabel {
    Actual,
    /// Capital minimising the summed distance to all affiliations.
    Boc,
    /// Capital of the country with the most papers.
    Bps,
}

impl ScenarioLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioLabel::Actual => "Actual",
            ScenarioLabel::Boc => "BOC",
            ScenarioLabel::Bps => "BPS",
        }
    }
}

impl fmt::Display for ScenarioLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Savings relative to the actual venue, in percent. Negative values mean
/// the alternative emits more.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Savings {
    Defined(f64),
    /// Actual emissions are zero while the alternative's are not.
    Undefined,
}

impl Savings {
    pub fn value(self) -> Option<f64> {
        match self {
            Savings::Defined(v) => Some(v),
            Savings::Undefined => None,
        }
    }
}

/// Savings actually realised given how the edition was held. A virtual
/// edition realises 100%; a hybrid one lies somewhere between the computed
/// in-person savings and 100%.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizedSavings {
    pub low: Savings,
    pub high_pct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VenueScenario {
    pub label: ScenarioLabel,
    pub country_code: String,
    pub city: String,
    pub airport: Airport,
    pub total_co2_kg: f64,
    pub savings: Savings,
    /// Set for virtual and hybrid editions, whose totals are counterfactual.
    pub realized: Option<RealizedSavings>,
}

/// A capital chosen by one of the selection strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct VenueChoice {
    pub capital: CapitalRecord,
    pub airport: Airport,
    /// Summed great-circle distance from the capital to every affiliation.
    pub distance_sum_km: f64,
    /// Papers whose affiliation is in this country.
    pub submissions: usize,
}

#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    pub scope: AirportScope,
    /// Restricts the BOC candidates to these country codes.
    pub candidates: Option<BTreeSet<String>>,
    pub parallelism: Parallelism,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EditionEvaluation {
    pub edition: ConferenceEdition,
    /// Actual, BOC, BPS in that order.
    pub scenarios: Vec<VenueScenario>,
    pub boc: VenueChoice,
    pub bps: VenueChoice,
    pub traveler_count: usize,
    pub fallback_count: usize,
    pub warnings: Vec<ResolutionWarning>,
}

/// Signed percentage saved by `alternative_kg` relative to `actual_kg`.
pub fn savings_pct(actual_kg: f64, alternative_kg: f64) -> Result<f64> {
    if actual_kg == 0.0 {
        if alternative_kg == 0.0 {
            return Ok(0.0);
        }
        return Err(Error::UndefinedSavings { alternative_kg });
    }
    Ok(100.0 * (actual_kg - alternative_kg) / actual_kg)
}

fn savings(actual_kg: f64, alternative_kg: f64) -> Savings {
    match savings_pct(actual_kg, alternative_kg) {
        Ok(v) => Savings::Defined(v),
        Err(_) => Savings::Undefined,
    }
}

/// Total round-trip kg CO₂ of all travelers flying to `venue_airport`.
///
/// Per-traveler values are summed in `paper_id` order with compensation, so
/// the total is bit-identical under any permutation of `travelers` and in
/// either parallelism mode.
pub fn total_emissions(
    model: &EmissionModel,
    travelers: &[ResolvedTraveler],
    venue_airport: &Airport,
    mode: Parallelism,
) -> f64 {
    let per_traveler = par::map(mode, travelers, |t| {
        (t.paper_id.as_str(), model.round_trip_kg(&t.origin_airport, venue_airport))
    });
    sum_by_key(per_traveler)
}

/// Affiliation points in a canonical order (paper_id, then coordinates).
fn canonical_points(travelers: &[ResolvedTraveler]) -> Vec<GeoPoint> {
    let mut keyed: Vec<(&str, u64, u64, GeoPoint)> = travelers
        .iter()
        .map(|t| {
            let p = t.origin_point;
            (t.paper_id.as_str(), p.lat().to_bits(), p.lon().to_bits(), p)
        })
        .collect();
    keyed.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
    keyed.into_iter().map(|k| k.3).collect()
}

fn distance_sum<D>(site: GeoPoint, points: &[GeoPoint], dist: &D) -> f64
where
    D: Fn(GeoPoint, GeoPoint) -> f64,
{
    compensated_sum(points.iter().map(|p| dist(site, *p)))
}

/// Index of the candidate minimising the summed distance, comparing by
/// `(sum, country_code)`. Returns the index and its sum.
pub(crate) fn argmin_distance_sum<D>(
    candidates: &[&CapitalRecord],
    points: &[GeoPoint],
    dist: D,
    mode: Parallelism,
) -> Option<(usize, f64)>
where
    D: Fn(GeoPoint, GeoPoint) -> f64 + Sync + Send,
{
    let sums = par::map(mode, candidates, |c| distance_sum(c.capital_location, points, &dist));
    sums.iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| {
            a.total_cmp(b)
                .then_with(|| candidates[*i].country_code.cmp(&candidates[*j].country_code))
        })
        .map(|(i, s)| (i, *s))
}

fn submissions_of(records_by_country: &BTreeMap<&str, usize>, code: &str) -> usize {
    records_by_country.get(code).copied().unwrap_or(0)
}

fn count_by_country(records: &[PaperRecord]) -> BTreeMap<&str, usize> {
    let mut counts = BTreeMap::new();
    for r in records {
        *counts.entry(r.affiliation_country.as_str()).or_insert(0) += 1;
    }
    counts
}

/// Capital with the least summed great-circle distance to every affiliation
/// location (one term per traveler). `candidates` restricts the countries
/// considered; `None` means every capital in the dataset.
pub fn optimal_location_boc(
    dataset: &GeoDataset,
    travelers: &[ResolvedTraveler],
    candidates: Option<&BTreeSet<String>>,
    mode: Parallelism,
) -> Result<VenueChoice> {
    if travelers.is_empty() {
        return Err(Error::EmptyTravelers);
    }
    let capitals: Vec<&CapitalRecord> = match candidates {
        None => dataset.capitals().collect(),
        Some(codes) => codes
            .iter()
            .map(|c| {
                dataset.capital(c).ok_or_else(|| Error::UnknownCountry {
                    country_code: c.clone(),
                    context: Some("candidate list".into()),
                })
            })
            .collect::<Result<_>>()?,
    };
    let points = canonical_points(travelers);
    let (best, sum) = argmin_distance_sum(&capitals, &points, haversine_distance, mode).ok_or(Error::EmptyCapitals)?;
    let (capital, airport) = dataset.capital_airport(&capitals[best].country_code)?;
    Ok(VenueChoice {
        capital: capital.clone(),
        airport: airport.clone(),
        distance_sum_km: sum,
        submissions: 0,
    })
}

/// Capital of the country with the most papers. Ties go to the tied country
/// whose capital has the smaller distance sum, then to the smaller code.
pub fn optimal_location_bps(
    dataset: &GeoDataset,
    records: &[PaperRecord],
    travelers: &[ResolvedTraveler],
    mode: Parallelism,
) -> Result<VenueChoice> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let counts = count_by_country(records);
    let max = *counts.values().max().expect("non-empty");
    let tied: Vec<&str> = counts.iter().filter(|(_, n)| **n == max).map(|(c, _)| *c).collect();

    let winner = if tied.len() == 1 {
        tied[0]
    } else {
        let points = canonical_points(travelers);
        let with_capital: Vec<&CapitalRecord> = tied.iter().filter_map(|c| dataset.capital(c)).collect();
        match argmin_distance_sum(&with_capital, &points, haversine_distance, mode) {
            Some((i, _)) => with_capital[i].country_code.as_str(),
            None => tied[0],
        }
    };
    let (capital, airport) = dataset
        .capital_airport(winner)
        .map_err(|e| e.with_context("country with the most papers"))?;
    let points = canonical_points(travelers);
    Ok(VenueChoice {
        capital: capital.clone(),
        airport: airport.clone(),
        distance_sum_km: distance_sum(capital.capital_location, &points, &haversine_distance),
        submissions: max,
    })
}

fn venue_airport<'a>(dataset: &'a GeoDataset, edition: &ConferenceEdition, scope: AirportScope) -> Result<&'a Airport> {
    let ctx = || format!("venue of {} {}", edition.conference, edition.year);
    match &edition.venue_airport_iata {
        Some(iata) => dataset.airport(iata).ok_or_else(|| Error::UnknownAirportOverride {
            iata: iata.clone(),
            context: Some(ctx()),
        }),
        None => {
            let (point, _) = dataset
                .resolve_city(&edition.venue_city, &edition.venue_country)
                .map_err(|e| e.with_context(ctx()))?;
            dataset.nearest_airport(point, scope)
        }
    }
}

/// Resolves every traveler and computes the Actual, BOC and BPS scenarios
/// for one edition.
pub fn evaluate_edition(
    dataset: &GeoDataset,
    model: &EmissionModel,
    edition: &ConferenceEdition,
    records: &[PaperRecord],
    options: &EvalOptions,
) -> Result<EditionEvaluation> {
    let mode = options.parallelism;
    let actual_airport = venue_airport(dataset, edition, options.scope)?;
    let (travelers, warnings) = resolve_travelers(dataset, records, options.scope, mode)?;

    let mut boc = optimal_location_boc(dataset, &travelers, options.candidates.as_ref(), mode)?;
    let bps = optimal_location_bps(dataset, records, &travelers, mode)?;
    let counts = count_by_country(records);
    boc.submissions = submissions_of(&counts, &boc.capital.country_code);

    let actual_kg = total_emissions(model, &travelers, actual_airport, mode);
    let boc_kg = total_emissions(model, &travelers, &boc.airport, mode);
    let bps_kg = total_emissions(model, &travelers, &bps.airport, mode);

    let realized = |s: Savings| match edition.mode {
        EditionMode::InPerson => None,
        EditionMode::Virtual => Some(RealizedSavings {
            low: Savings::Defined(100.0),
            high_pct: 100.0,
        }),
        EditionMode::Hybrid => Some(RealizedSavings { low: s, high_pct: 100.0 }),
    };
    let actual_savings = Savings::Defined(0.0);
    let boc_savings = savings(actual_kg, boc_kg);
    let bps_savings = savings(actual_kg, bps_kg);

    let scenarios = vec![
        VenueScenario {
            label: ScenarioLabel::Actual,
            country_code: edition.venue_country.clone(),
            city: edition.venue_city.clone(),
            airport: actual_airport.clone(),
            total_co2_kg: actual_kg,
            savings: actual_savings,
            realized: realized(actual_savings),
        },
        VenueScenario {
            label: ScenarioLabel::Boc,
            country_code: boc.capital.country_code.clone(),
            city: boc.capital.capital_city.clone(),
            airport: boc.airport.clone(),
            total_co2_kg: boc_kg,
            savings: boc_savings,
            realized: realized(boc_savings),
        },
        VenueScenario {
            label: ScenarioLabel::Bps,
            country_code: bps.capital.country_code.clone(),
            city: bps.capital.capital_city.clone(),
            airport: bps.airport.clone(),
            total_co2_kg: bps_kg,
            savings: bps_savings,
            realized: realized(bps_savings),
        },
    ];

    let fallback_count = travelers
        .iter()
        .filter(|t| t.resolution == ResolutionQuality::CapitalFallback)
        .count();
    Ok(EditionEvaluation {
        edition: edition.clone(),
        scenarios,
        boc,
        bps,
        traveler_count: travelers.len(),
        fallback_count,
        warnings,
    })
}
