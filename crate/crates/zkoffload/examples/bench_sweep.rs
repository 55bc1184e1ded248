//! A compact gas sweep over the three submission variants. The verified
//! curve steps with the padding tier, the other two climb with instance
//! size; where they cross decides which variant to pay for.

use zkoffload::harness::{run_benchmark, rows_to_csv, BenchPlan, KeyStore, Sweep, Variant};
use zkoffload::ledger::GasSchedule;
use zkoffload::tsp::MapRegistry;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let registry = MapRegistry::fixtures();
    let mut keys = KeyStore::new();

    // Sizes flank the tier boundaries around the crossover region.
    let plan = BenchPlan::new(
        vec![Sweep {
            mapnumber: 2,
            sizes: vec![3, 10, 20, 25, 27, 28, 30, 31, 32, 35],
        }],
        vec![Variant::Verified, Variant::Unverified, Variant::Onchain],
        42,
    );

    println!("running {} combinations (key setup included)...", plan.sweeps[0].sizes.len() * 3);
    let report = run_benchmark(&registry, &mut keys, GasSchedule::default(), &plan)?;

    print!("{}", rows_to_csv(&report.rows));
    match (report.crossover.s_star, report.crossover.s_double_star) {
        (Some(first), Some(settled)) => println!(
            "\nonchain checking first costs more than proof verification at size {first}; \
             from size {settled} it never wins again"
        ),
        _ => println!("\nno crossover inside this size range"),
    }
    println!("{} receipts in the trace", report.ledger.log().len());
    Ok(())
}
