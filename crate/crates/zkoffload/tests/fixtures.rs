//! The checked-in fixture files must stay in lockstep with the values the
//! library generates; regenerate with the generate_fixtures example.

use std::path::PathBuf;
use zkoffload::harness::ScenarioConfig;
use zkoffload::ledger::GasSchedule;
use zkoffload::tsp::{fixture_map30, fixture_map70, TspMap};

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read(name: &str) -> String {
    let path = fixtures_dir().join(name);
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing fixture {}: {e}", path.display()))
}

#[test]
fn maps_match_the_generators() {
    let map30: TspMap = serde_json::from_str(&read("map30.json")).unwrap();
    assert_eq!(map30, fixture_map30());
    let map70: TspMap = serde_json::from_str(&read("map70.json")).unwrap();
    assert_eq!(map70, fixture_map70());
}

#[test]
fn gas_schedule_matches_the_default() {
    let schedule: GasSchedule = serde_json::from_str(&read("gas_schedule.json")).unwrap();
    assert_eq!(schedule, GasSchedule::default());
}

#[test]
fn bench_scenario_is_loadable_and_valid() {
    let dir = fixtures_dir();
    let config = ScenarioConfig::load(&dir.join("bench.json")).unwrap();
    config.validate().unwrap();
    let registry = config.registry(&dir).unwrap();
    assert_eq!(registry.get(1).unwrap().n, 30);
    assert_eq!(registry.get(2).unwrap().n, 70);
    let schedule = config.schedule(&dir).unwrap();
    assert_eq!(schedule, GasSchedule::default());
    assert!(config.csv_out.is_some());
}
