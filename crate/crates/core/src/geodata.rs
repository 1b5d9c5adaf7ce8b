//! Offline airport, capital and city datasets.
//!
//! All three files are plain CSV with a fixed header:
//!
//! | file          | header                                                   |
//! |---------------|----------------------------------------------------------|
//! | airports.csv  | `iata,name,city,country_code,lat,lon,international`      |
//! | capitals.csv  | `country_code,capital_city,lat,lon,designated_airport_iata` |
//! | cities.csv    | `city,country_code,lat,lon`                              |
//!
//! A copy generated from public airport and gazetteer data is compiled into
//! the crate and available through [`GeoDataset::bundled`].

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geo::{haversine_distance, GeoPoint};

const AIRPORTS_HEADER: [&str; 7] = ["iata", "name", "city", "country_code", "lat", "lon", "international"];
const CAPITALS_HEADER: [&str; 5] = ["country_code", "capital_city", "lat", "lon", "designated_airport_iata"];
const CITIES_HEADER: [&str; 4] = ["city", "country_code", "lat", "lon"];

pub static BUNDLED_AIRPORTS: &str = include_str!("../data/airports.csv");
pub static BUNDLED_CAPITALS: &str = include_str!("../data/capitals.csv");
pub static BUNDLED_CITIES: &str = include_str!("../data/cities.csv");

#[derive(Debug, Clone, PartialEq)]
pub struct Airport {
    pub iata: String,
    pub name: String,
    pub city: String,
    pub country_code: String,
    pub location: GeoPoint,
    pub international: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapitalRecord {
    pub country_code: String,
    pub capital_city: String,
    pub capital_location: GeoPoint,
    pub designated_airport_iata: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CityRecord {
    pub city: String,
    pub country_code: String,
    pub location: GeoPoint,
}

/// How an affiliation city was turned into coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResolutionQuality {
    Exact,
    /// City not in the gazetteer; the country's capital stands in.
    CapitalFallback,
}

/// Which airports a nearest-airport search may return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AirportScope {
    #[default]
    InternationalOnly,
    All,
}

#[derive(Debug, Clone)]
pub struct GeoDataset {
    /// Sorted by IATA code.
    airports: Vec<Airport>,
    international: Vec<usize>,
    capitals: BTreeMap<String, CapitalRecord>,
    cities: BTreeMap<(String, String), CityRecord>,
}

pub(crate) fn is_iata(code: &str) -> bool {
    code.len() == 3 && code.bytes().all(|b| b.is_ascii_uppercase())
}

pub(crate) fn is_country_code(code: &str) -> bool {
    code.len() == 2 && code.bytes().all(|b| b.is_ascii_uppercase())
}

fn city_key(city: &str, country_code: &str) -> (String, String) {
    let folded = city.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
    (folded, country_code.to_string())
}

/// Loads and validates the three datasets from disk.
pub fn load_geodata(airports_path: &Path, capitals_path: &Path, cities_path: &Path) -> Result<GeoDataset> {
    let airports = read_to_string(airports_path)?;
    let capitals = read_to_string(capitals_path)?;
    let cities = read_to_string(cities_path)?;
    GeoDataset::from_csv(
        (&airports_path.display().to_string(), &airports),
        (&capitals_path.display().to_string(), &capitals),
        (&cities_path.display().to_string(), &cities),
    )
}

fn read_to_string(path: &Path) -> Result<String> {
    let mut s = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|e| Error::io(path, e))?;
    Ok(s)
}

struct Rows<'a> {
    source: &'a str,
    rows: Vec<(u64, csv::StringRecord)>,
}

fn read_rows<'a>(source: &'a str, text: &str, header: &[&str]) -> Result<Rows<'a>> {
    let parse_err = |line: u64, message: String| Error::Parse {
        source_name: source.to_string(),
        location: format!("line {line}"),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let found = reader.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    if found.iter().map(str::trim).ne(header.iter().copied()) {
        return Err(parse_err(
            1,
            format!("expected header `{}`, found `{}`", header.join(","), found.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != header.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        rows.push((line, record));
    }
    Ok(Rows { source, rows })
}

impl Rows<'_> {
    fn err(&self, line: u64, message: impl Into<String>) -> Error {
        Error::Parse {
            source_name: self.source.to_string(),
            location: format!("line {line}"),
            message: message.into(),
        }
    }

    fn point(&self, line: u64, lat: &str, lon: &str) -> Result<GeoPoint> {
        let lat: f64 = lat
            .trim()
            .parse()
            .map_err(|_| self.err(line, format!("invalid latitude {lat:?}")))?;
        let lon: f64 = lon
            .trim()
            .parse()
            .map_err(|_| self.err(line, format!("invalid longitude {lon:?}")))?;
        GeoPoint::new(lat, lon).map_err(|e| self.err(line, e.to_string()))
    }

    fn country(&self, line: u64, code: &str) -> Result<String> {
        let code = code.trim();
        if is_country_code(code) {
            Ok(code.to_string())
        } else {
            Err(self.err(line, format!("invalid country code {code:?}")))
        }
    }

    fn iata(&self, line: u64, code: &str) -> Result<String> {
        let code = code.trim();
        if is_iata(code) {
            Ok(code.to_string())
        } else {
            Err(self.err(line, format!("invalid IATA code {code:?}")))
        }
    }
}

fn integrity(source: &str, message: String) -> Error {
    Error::Integrity {
        source_name: source.to_string(),
        message,
    }
}

impl GeoDataset {
    /// The dataset shipped with the crate.
    pub fn bundled() -> Result<GeoDataset> {
        GeoDataset::from_csv(
            ("bundled airports.csv", BUNDLED_AIRPORTS),
            ("bundled capitals.csv", BUNDLED_CAPITALS),
            ("bundled cities.csv", BUNDLED_CITIES),
        )
    }

    /// Builds a dataset from in-memory CSV text, each given as
    /// `(source name, contents)`.
    pub fn from_csv(airports: (&str, &str), capitals: (&str, &str), cities: (&str, &str)) -> Result<GeoDataset> {
        let airport_rows = read_rows(airports.0, airports.1, &AIRPORTS_HEADER)?;
        let mut by_iata: BTreeMap<String, (u64, Airport)> = BTreeMap::new();
        for (line, r) in &airport_rows.rows {
            let line = *line;
            let iata = airport_rows.iata(line, &r[0])?;
            let international = match r[6].trim() {
                "true" => true,
                "false" => false,
                other => return Err(airport_rows.err(line, format!("international must be true or false, found {other:?}"))),
            };
            let airport = Airport {
                iata: iata.clone(),
                name: r[1].trim().to_string(),
                city: r[2].trim().to_string(),
                country_code: airport_rows.country(line, &r[3])?,
                location: airport_rows.point(line, &r[4], &r[5])?,
                international,
            };
            if let Some((first, _)) = by_iata.get(&iata) {
                return Err(integrity(
                    airports.0,
                    format!("duplicate IATA code {iata} on lines {first} and {line}"),
                ));
            }
            by_iata.insert(iata, (line, airport));
        }

        let capital_rows = read_rows(capitals.0, capitals.1, &CAPITALS_HEADER)?;
        let mut capital_map: BTreeMap<String, (u64, CapitalRecord)> = BTreeMap::new();
        for (line, r) in &capital_rows.rows {
            let line = *line;
            let record = CapitalRecord {
                country_code: capital_rows.country(line, &r[0])?,
                capital_city: r[1].trim().to_string(),
                capital_location: capital_rows.point(line, &r[2], &r[3])?,
                designated_airport_iata: capital_rows.iata(line, &r[4])?,
            };
            match by_iata.get(&record.designated_airport_iata) {
                None => {
                    return Err(integrity(
                        capitals.0,
                        format!(
                            "line {line}: designated airport {} for {} is not in the airport dataset",
                            record.designated_airport_iata, record.country_code
                        ),
                    ))
                }
                Some((_, a)) if !a.international => {
                    return Err(integrity(
                        capitals.0,
                        format!(
                            "line {line}: designated airport {} for {} is not flagged international",
                            record.designated_airport_iata, record.country_code
                        ),
                    ))
                }
                Some(_) => {}
            }
            if let Some((first, _)) = capital_map.get(&record.country_code) {
                return Err(integrity(
                    capitals.0,
                    format!("duplicate country {} on lines {first} and {line}", record.country_code),
                ));
            }
            capital_map.insert(record.country_code.clone(), (line, record));
        }

        let city_rows = read_rows(cities.0, cities.1, &CITIES_HEADER)?;
        let mut city_map: BTreeMap<(String, String), (u64, CityRecord)> = BTreeMap::new();
        for (line, r) in &city_rows.rows {
            let line = *line;
            let record = CityRecord {
                city: r[0].trim().to_string(),
                country_code: city_rows.country(line, &r[1])?,
                location: city_rows.point(line, &r[2], &r[3])?,
            };
            if record.city.is_empty() {
                return Err(city_rows.err(line, "empty city name"));
            }
            let key = city_key(&record.city, &record.country_code);
            if let Some((first, _)) = city_map.get(&key) {
                return Err(integrity(
                    cities.0,
                    format!("duplicate city {:?}/{} on lines {first} and {line}", record.city, record.country_code),
                ));
            }
            city_map.insert(key, (line, record));
        }

        let airports: Vec<Airport> = by_iata.into_values().map(|(_, a)| a).collect();
        let international = airports
            .iter()
            .enumerate()
            .filter(|(_, a)| a.international)
            .map(|(i, _)| i)
            .collect();
        Ok(GeoDataset {
            airports,
            international,
            capitals: capital_map.into_iter().map(|(k, (_, v))| (k, v)).collect(),
            cities: city_map.into_iter().map(|(k, (_, v))| (k, v)).collect(),
        })
    }

    pub fn airport_count(&self) -> usize {
        self.airports.len()
    }

    pub fn capital_count(&self) -> usize {
        self.capitals.len()
    }

    pub fn city_count(&self) -> usize {
        self.cities.len()
    }

    /// Airports in IATA order.
    pub fn airports(&self) -> &[Airport] {
        &self.airports
    }

    /// Capitals in country-code order.
    pub fn capitals(&self) -> impl Iterator<Item = &CapitalRecord> {
        self.capitals.values()
    }

    pub fn airport(&self, iata: &str) -> Option<&Airport> {
        self.airports
            .binary_search_by(|a| a.iata.as_str().cmp(iata))
            .ok()
            .map(|i| &self.airports[i])
    }

    pub fn capital(&self, country_code: &str) -> Option<&CapitalRecord> {
        self.capitals.get(country_code)
    }

    pub fn city(&self, city: &str, country_code: &str) -> Option<&CityRecord> {
        self.cities.get(&city_key(city, country_code))
    }

    /// Coordinates for an affiliation city, falling back to the country's
    /// capital when the city is not in the gazetteer.
    pub fn resolve_city(&self, city: &str, country_code: &str) -> Result<(GeoPoint, ResolutionQuality)> {
        if let Some(rec) = self.city(city, country_code) {
            return Ok((rec.location, ResolutionQuality::Exact));
        }
        match self.capitals.get(country_code) {
            Some(cap) => Ok((cap.capital_location, ResolutionQuality::CapitalFallback)),
            None => Err(Error::UnknownCountry {
                country_code: country_code.to_string(),
                context: None,
            }),
        }
    }

    /// Closest airport to `point` by great-circle distance. Ties go to the
    /// lexicographically smallest IATA code.
    pub fn nearest_airport(&self, point: GeoPoint, scope: AirportScope) -> Result<&Airport> {
        let candidates: Box<dyn Iterator<Item = usize>> = match scope {
            AirportScope::All => Box::new(0..self.airports.len()),
            AirportScope::InternationalOnly => Box::new(self.international.iter().copied()),
        };
        let mut best: Option<(f64, usize)> = None;
        for i in candidates {
            let d = haversine_distance(point, self.airports[i].location);
            // indices ascend in IATA order, so strict < keeps the smallest code on ties
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, i));
            }
        }
        best.map(|(_, i)| &self.airports[i]).ok_or(Error::EmptyDataset)
    }

    /// A country's capital and its designated airport.
    pub fn capital_airport(&self, country_code: &str) -> Result<(&CapitalRecord, &Airport)> {
        let cap = self.capitals.get(country_code).ok_or_else(|| Error::UnknownCountry {
            country_code: country_code.to_string(),
            context: None,
        })?;
        let airport = self
            .airport(&cap.designated_airport_iata)
            .expect("designated airports are checked at load time");
        Ok((cap, airport))
    }
}
