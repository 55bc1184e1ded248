//! A contract-level walk through one task: deploy, post, submit a bad
//! and then a good solution, settle, and inspect the receipts. Everything
//! the harness automates, done by hand here.

use zkoffload::harness::KeyStore;
use zkoffload::ledger::{GasSchedule, Ledger, TxEffect};
use zkoffload::snark::{compute_witness, prove};
use zkoffload::tsp::{fixture_map30, solve_heuristic, TaskSpec, Tier, TspCircuit, TspWitness};

const CONSUMER: u64 = 1;
const PROVIDER: u64 = 2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = fixture_map30();
    let tier = Tier::new(10)?;
    let task = TaskSpec::new(map.mapnumber, (1..=6).collect(), tier)?;

    let mut keys = KeyStore::new();
    let prep = keys.ensure(&map, tier.value())?.clone();

    let mut ledger = Ledger::new(GasSchedule::default(), &[(CONSUMER, 500), (PROVIDER, 0)]);
    println!(
        "genesis: consumer {} coins, provider {}, supply {}",
        ledger.balance(CONSUMER),
        ledger.balance(PROVIDER),
        ledger.total_supply()
    );

    let (verifier, r) = ledger.deploy_verifier(CONSUMER, prep.vk.clone(), map.mapnumber, tier.value())?;
    println!("deploy verifier -> address {verifier}, gas {}", r.gas_used);
    let (broker, r) = ledger.deploy_broker(CONSUMER, None, Some(verifier))?;
    println!("deploy broker   -> address {broker}, gas {}", r.gas_used);

    let r = ledger.create_task_request(broker, CONSUMER, 200, task.clone(), true, 2)?;
    println!(
        "post task       -> gas {}, stake escrowed, consumer now {}",
        r.gas_used,
        ledger.balance(CONSUMER)
    );
    println!("broker state: {}", ledger.broker_state(broker)?);

    // Provider side: solve, build the witness, prove.
    let tour = solve_heuristic(&map, &task.instance, 11)?;
    let witness = TspWitness::build(&map, &task, &tour)?;
    let assignment = compute_witness(&TspCircuit::with_witness(&map, tier, witness.clone()))?;
    let proof = prove(&prep.pk, &prep.cs, &assignment, b"walkthrough")?;
    println!("solved: sum {} path {:?}", tour.sum, tour.path);

    // A corrupted proof is a valid transaction with a discard outcome.
    let mut bad = proof.to_bytes();
    bad[40] ^= 0x10;
    let r = ledger.submit_solution(
        broker,
        PROVIDER,
        &witness.padded_path,
        witness.claimed_sum,
        witness.hash_of_path,
        witness.hash_of_cities,
        &bad,
    )?;
    match &r.effect {
        TxEffect::SolutionDiscarded { reason } => {
            println!("bad submission  -> discarded ({reason}), gas {}", r.gas_used)
        }
        other => panic!("expected a discard, got {other:?}"),
    }

    let r = ledger.submit_solution(
        broker,
        PROVIDER,
        &witness.padded_path,
        witness.claimed_sum,
        witness.hash_of_path,
        witness.hash_of_cities,
        &proof.to_bytes(),
    )?;
    println!("good submission -> {:?}, gas {}", r.effect, r.gas_used);

    ledger.advance_blocks(2);
    let r = ledger.end_task(broker, CONSUMER)?;
    println!("end task        -> {:?}, gas {}", r.effect, r.gas_used);
    println!(
        "balances: consumer {}, provider {}, supply still {}",
        ledger.balance(CONSUMER),
        ledger.balance(PROVIDER),
        ledger.total_supply()
    );

    let stored = ledger.retrieve_solution(broker)?;
    println!("stored solution: sum {}, padded path {:?}", stored.sum, stored.path);

    println!("\nfull receipt log:");
    for line in ledger.export_log_jsonl().lines() {
        println!("  {line}");
    }
    Ok(())
}
