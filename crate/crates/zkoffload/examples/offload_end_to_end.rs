//! One full offloading round through the harness: the consumer posts a
//! task with a stake, the provider solves off the chain and submits a
//! proof-carrying result, the consumer settles and revalidates.

use zkoffload::harness::{run_offload, KeyStore, OffloadConfig, ProviderConfig, Variant};
use zkoffload::ledger::{GasSchedule, Ledger};
use zkoffload::tsp::{MapRegistry, TaskSpec, Tier};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let registry = MapRegistry::fixtures();
    let mut keys = KeyStore::new();
    let mut ledger = Ledger::new(GasSchedule::default(), &[(1, 1_000), (2, 0)]);

    let size = 12usize;
    let config = OffloadConfig {
        consumer: 1,
        provider: ProviderConfig::honest(2, Variant::Verified, 7),
        task: TaskSpec::new(1, (1..=size as u64).collect(), Tier::for_instance_size(size)?)?,
        stake: 250,
        min_duration: 3,
    };

    println!("posting a {size}-city task with a 250 coin stake...");
    let report = run_offload(&mut ledger, &registry, &mut keys, &config)?;

    let run = &report.provider;
    println!(
        "provider: solved sum {} in {} attempt(s)",
        run.tour.sum, run.attempts
    );
    println!(
        "provider: witness {:.0} ms, proof {:.0} ms, submit gas {}",
        run.witness_time.as_secs_f64() * 1e3,
        run.proof_time.as_secs_f64() * 1e3,
        run.submit_gas().expect("submitted")
    );
    assert!(run.accepted());

    let outcome = &report.consumer;
    let tour = outcome.solution.as_ref().expect("a solution was stored");
    println!(
        "consumer: retrieved sum {} path {:?}",
        tour.sum, tour.path
    );
    println!(
        "consumer: revalidation {}",
        if outcome.revalidated == Some(true) { "passed" } else { "failed" }
    );
    println!(
        "settlement: provider holds {} coins, consumer {} (supply {})",
        ledger.balance(2),
        ledger.balance(1),
        ledger.total_supply()
    );
    Ok(())
}
