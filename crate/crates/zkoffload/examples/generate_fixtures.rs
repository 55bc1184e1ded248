//! Regenerates the checked-in fixtures: the two benchmark maps, the
//! default gas schedule, and a ready-to-run sweep scenario. Run from
//! anywhere; paths resolve against the workspace root.

use std::path::PathBuf;
use zkoffload::harness::{ScenarioConfig, Sweep, Variant};
use zkoffload::ledger::GasSchedule;
use zkoffload::tsp::{fixture_map30, fixture_map70};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    std::fs::create_dir_all(&dir)?;

    let map30 = fixture_map30();
    let map70 = fixture_map70();
    std::fs::write(dir.join("map30.json"), serde_json::to_string(&map30)?)?;
    std::fs::write(dir.join("map70.json"), serde_json::to_string(&map70)?)?;

    std::fs::write(
        dir.join("gas_schedule.json"),
        serde_json::to_string_pretty(&GasSchedule::default())?,
    )?;

    let scenario = ScenarioConfig {
        maps: vec!["map30.json".into(), "map70.json".into()],
        sweeps: vec![Sweep {
            mapnumber: 2,
            sizes: vec![5, 10, 15, 20],
        }],
        variants: vec![Variant::Verified, Variant::Unverified, Variant::Onchain],
        gas_schedule: Some("gas_schedule.json".into()),
        seed: 42,
        stake: 100,
        csv_out: Some("gas.csv".into()),
        log_out: Some("receipts.jsonl".into()),
    };
    std::fs::write(
        dir.join("bench.json"),
        serde_json::to_string_pretty(&scenario)?,
    )?;

    for map in [&map30, &map70] {
        println!(
            "map {}: {} cities, max distance {}",
            map.mapnumber,
            map.n,
            map.max_distance()
        );
    }
    println!("fixtures written to {}", dir.canonicalize()?.display());
    Ok(())
}
