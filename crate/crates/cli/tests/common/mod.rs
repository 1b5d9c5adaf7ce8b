#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/e2e")
}

pub fn edition_paths() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixture_dir().join("editions"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    paths
}

/// Runs the binary against the e2e fixture geodata.
pub fn run_fixture(args: &[&str]) -> Output {
    let dir = fixture_dir();
    Command::new(env!("CARGO_BIN_EXE_confcarbon"))
        .arg("--airports")
        .arg(dir.join("airports.csv"))
        .arg("--capitals")
        .arg(dir.join("capitals.csv"))
        .arg("--cities")
        .arg(dir.join("cities.csv"))
        .args(args)
        .output()
        .expect("spawn confcarbon")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confcarbon"))
        .args(args)
        .output()
        .expect("spawn confcarbon")
}

/// Great-circle distance by the spherical Vincenty (atan2) form, written
/// independently of the library's haversine.
pub fn oracle_distance_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dl = (lon2 - lon1).to_radians();
    let y = ((p2.cos() * dl.sin()).powi(2) + (p1.cos() * p2.sin() - p1.sin() * p2.cos() * dl.cos()).powi(2)).sqrt();
    let x = p1.sin() * p2.sin() + p1.cos() * p2.cos() * dl.cos();
    6371.0 * y.atan2(x)
}

/// Exhaustive 1-median over candidate capitals: smallest summed distance,
/// ties to the smaller code.
pub fn oracle_boc(capitals: &[(String, f64, f64)], points: &[(f64, f64)]) -> (String, f64) {
    let mut best: Option<(f64, &String)> = None;
    for (code, lat, lon) in capitals {
        let mut s = 0.0;
        for (plat, plon) in points {
            s += oracle_distance_km(*lat, *lon, *plat, *plon);
        }
        let better = match best {
            None => true,
            Some((bs, bc)) => s < bs || (s == bs && code < bc),
        };
        if better {
            best = Some((s, code));
        }
    }
    let (s, c) = best.expect("at least one capital");
    (c.clone(), s)
}
