use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use confcarbon::geodata::{AirportScope, GeoDataset, BUNDLED_CITIES};
use confcarbon::optimize::{evaluate_edition, optimal_location_boc, EvalOptions};
use confcarbon::par::Parallelism;
use confcarbon::records::{parse_edition_str, resolve_travelers, ConferenceEdition, PaperRecord};
use confcarbon::EmissionModel;

fn synthetic_edition(ds: &GeoDataset, papers: usize) -> (ConferenceEdition, Vec<PaperRecord>) {
    let cities: Vec<(&str, &str)> = BUNDLED_CITIES
        .lines()
        .skip(1)
        .filter(|l| !l.contains('"'))
        .filter_map(|l| {
            let mut f = l.split(',');
            Some((f.next()?, f.next()?))
        })
        .filter(|(_, cc)| ds.capital(cc).is_some())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut pick = || cities[rng.gen_range(0..cities.len())];
    let venue = pick();
    let papers: Vec<serde_json::Value> = (0..papers)
        .map(|i| {
            let (city, cc) = pick();
            serde_json::json!({"paper_id": format!("p{i:05}"), "city": city, "country_code": cc})
        })
        .collect();
    let text = serde_json::json!({
        "conference": "BENCH",
        "year": 2020,
        "mode": "in_person",
        "venue": {"city": venue.0, "country_code": venue.1},
        "papers": papers,
    })
    .to_string();
    parse_edition_str("bench", &text).expect("synthetic edition")
}

const MODES: [(&str, Parallelism); 2] = [("serial", Parallelism::Serial), ("parallel", Parallelism::Parallel)];

fn bench(c: &mut Criterion) {
    let ds = GeoDataset::bundled().unwrap();
    let model = EmissionModel::default();

    for papers in [500, 5000] {
        let (edition, records) = synthetic_edition(&ds, papers);
        let (travelers, _) =
            resolve_travelers(&ds, &records, AirportScope::InternationalOnly, Parallelism::Serial).unwrap();

        let mut g = c.benchmark_group(format!("papers_{papers}"));
        for (name, mode) in MODES {
            g.bench_function(BenchmarkId::new("resolve", name), |b| {
                b.iter(|| resolve_travelers(&ds, &records, AirportScope::InternationalOnly, mode).unwrap())
            });
            g.bench_function(BenchmarkId::new("boc", name), |b| {
                b.iter(|| optimal_location_boc(&ds, &travelers, None, mode).unwrap())
            });
            let opts = EvalOptions {
                parallelism: mode,
                ..EvalOptions::default()
            };
            g.bench_function(BenchmarkId::new("evaluate_edition", name), |b| {
                b.iter(|| evaluate_edition(&ds, &model, &edition, &records, &opts).unwrap())
            });
        }
        g.finish();
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench
}
criterion_main!(benches);
