//! Air-travel CO₂ accounting for conference editions.
//!
//! The pipeline resolves each accepted paper to one traveler flying from the
//! airport nearest the first author's affiliation, prices the round trip with
//! a banded per-kilometre emission model, and compares the actual venue with
//! two alternative venue-selection strategies:
//!
//! * **BOC** elects the country whose capital minimises the summed
//!   great-circle distance to every affiliation location (a discrete
//!   1-median over capitals).
//! * **BPS** elects the country contributing the most papers.
//!
//! Both alternatives are hosted at the capital's designated airport.

pub mod emissions;
pub mod error;
pub mod geo;
pub mod geodata;
pub mod optimize;
pub mod par;
pub mod records;
pub mod report;
pub mod sum;

pub use emissions::{EmissionModel, Trip};
pub use error::{Error, Result};
pub use geo::{haversine_distance, GeoPoint, EARTH_RADIUS_KM};
pub use geodata::{Airport, AirportScope, CapitalRecord, CityRecord, GeoDataset, ResolutionQuality};
pub use optimize::{
    evaluate_edition, optimal_location_boc, optimal_location_bps, savings_pct, total_emissions,
    EditionEvaluation, EvalOptions, Savings, ScenarioLabel, VenueScenario,
};
pub use par::Parallelism;
pub use records::{ConferenceEdition, EditionMode, PaperRecord, ResolvedTraveler};
pub use report::{ConferenceSummary, EditionReport, TableRow};
