//! Every way a provider can cheat, and where each attempt dies. Witness
//! level faults never leave the provider's machine; submission level
//! faults reach the contract and are discarded there.

use zkoffload::harness::{
    run_offload, FaultMode, KeyStore, OffloadConfig, ProviderConfig, ProviderOutcome, Variant,
};
use zkoffload::ledger::{GasSchedule, Ledger};
use zkoffload::tsp::{MapRegistry, TaskSpec, Tier};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let registry = MapRegistry::fixtures();
    let mut keys = KeyStore::new();
    keys.ensure(registry.get(1)?, 10)?;

    let faults = [
        (FaultMode::None, false, "honest baseline"),
        (FaultMode::CorruptSum, false, "wrong sum, one bad attempt"),
        (FaultMode::CorruptSum, true, "wrong sum, every attempt"),
        (FaultMode::CorruptPath, false, "tampered path, one bad attempt"),
        (FaultMode::CorruptProof, false, "flipped proof byte"),
        (FaultMode::DecoupleHash, false, "path swapped after hashing"),
    ];

    for (fault, persists, label) in faults {
        let mut ledger = Ledger::new(GasSchedule::default(), &[(1, 1_000), (2, 0)]);
        let mut provider = ProviderConfig::honest(2, Variant::Verified, 7);
        provider.fault = fault;
        provider.fault_persists = persists;
        let config = OffloadConfig {
            consumer: 1,
            provider,
            task: TaskSpec::new(1, (1..=6).collect(), Tier::new(10)?)?,
            stake: 100,
            min_duration: 1,
        };
        let report = run_offload(&mut ledger, &registry, &mut keys, &config)?;
        let outcome = match &report.provider.outcome {
            ProviderOutcome::Accepted { receipt } => {
                format!("accepted on attempt {} (gas {})", report.provider.attempts, receipt.gas_used)
            }
            ProviderOutcome::Discarded { receipt } => {
                format!("discarded by the contract (gas {} still burned)", receipt.gas_used)
            }
            ProviderOutcome::Aborted { reason } => {
                format!("aborted before submitting: {reason}")
            }
        };
        let paid = if ledger.balance(2) > 0 { "paid" } else { "unpaid" };
        println!("{label:<32} -> {outcome}; provider {paid}");
    }
    Ok(())
}
