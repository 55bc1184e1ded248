//! Client-side orchestration: the provider and consumer flows over a
//! ledger, key management per (map, tier) circuit, and fault injection for
//! exercising every rejection path from the outside.

mod bench;

pub use bench::{
    rows_to_csv, run_benchmark, BenchPlan, BenchReport, BenchmarkRow, Crossover, Sweep,
};

use crate::ledger::{Address, Ledger, LedgerError, Receipt, TxEffect};
use crate::snark::{
    compute_witness, prove, setup, ProvingKey, SnarkError, VerifyingKey,
};
use crate::constraint::ConstraintSystem;
use crate::tsp::{
    build_tsp_circuit, solve_heuristic, strip_padding, validate_tour, MapRegistry, TaskSpec,
    Tier, Tour, TspCircuit, TspError, TspMap, TspWitness,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Tsp(#[from] TspError),
    #[error(transparent)]
    Snark(#[from] SnarkError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error("no keys prepared for map {mapnumber} tier {tier}")]
    MissingKeys { mapnumber: u64, tier: u32 },
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How a solution travels to the ledger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Proof-carrying submission checked by the verifier contract.
    Verified,
    /// Stored without any check.
    Unverified,
    /// Plain validation executed inside the metered contract.
    Onchain,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Verified => "verified",
            Variant::Unverified => "unverified",
            Variant::Onchain => "onchain",
        }
    }
}

/// Provider-side sabotage, applied before witness computation or before
/// submission depending on the mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultMode {
    None,
    /// Claim a wrong tour length; the witness fails in-circuit.
    CorruptSum,
    /// Alter a path slot after hashing; the witness fails in-circuit.
    CorruptPath,
    /// Flip a byte of the finished proof; the contract verdict is false.
    CorruptProof,
    /// Submit a different path under the honest digest; the contract
    /// rehash catches it.
    DecoupleHash,
}

impl FaultMode {
    fn breaks_witness(&self) -> bool {
        matches!(self, FaultMode::CorruptSum | FaultMode::CorruptPath)
    }
}

/// Everything needed to prove on one circuit.
#[derive(Clone)]
pub struct PreparedCircuit {
    pub cs: ConstraintSystem,
    pub pk: ProvingKey,
    pub vk: VerifyingKey,
}

/// Proving and verifying keys per (mapnumber, tier), generated from a
/// deterministic per-circuit seed so independent runs agree byte-for-byte.
#[derive(Clone, Default)]
pub struct KeyStore {
    entries: BTreeMap<(u64, u32), PreparedCircuit>,
}

fn key_seed(mapnumber: u64, tier: u32) -> Vec<u8> {
    format!("zkoffload/keys/v1/map{mapnumber}/tier{tier}").into_bytes()
}

impl KeyStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Generates keys for (map, tier) unless already present.
    pub fn ensure(&mut self, map: &TspMap, tier: u32) -> Result<&PreparedCircuit, HarnessError> {
        let slot = (map.mapnumber, tier);
        if !self.entries.contains_key(&slot) {
            let cs = build_tsp_circuit(map, tier)?;
            let (pk, vk) = setup(&cs, &key_seed(map.mapnumber, tier))?;
            self.entries.insert(slot, PreparedCircuit { cs, pk, vk });
        }
        Ok(&self.entries[&slot])
    }

    pub fn get(&self, mapnumber: u64, tier: u32) -> Result<&PreparedCircuit, HarnessError> {
        self.entries
            .get(&(mapnumber, tier))
            .ok_or(HarnessError::MissingKeys { mapnumber, tier })
    }

    pub fn slots(&self) -> Vec<(u64, u32)> {
        self.entries.keys().copied().collect()
    }

    /// Writes `map<M>_tier<T>.pk` / `.vk` pairs into `dir`.
    pub fn save_dir(&self, dir: &Path) -> Result<(), HarnessError> {
        std::fs::create_dir_all(dir)?;
        for ((mapnumber, tier), prep) in &self.entries {
            let stem = format!("map{mapnumber}_tier{tier}");
            std::fs::write(dir.join(format!("{stem}.pk")), prep.pk.to_bytes())?;
            std::fs::write(dir.join(format!("{stem}.vk")), prep.vk.to_bytes())?;
        }
        Ok(())
    }

    /// Loads every key pair for `registry` maps found in `dir`. The circuit
    /// is re-synthesized locally; a key generated for different circuit
    /// data fails the digest check at proving time.
    pub fn load_dir(&mut self, dir: &Path, registry: &MapRegistry) -> Result<usize, HarnessError> {
        let mut loaded = 0;
        for map in registry.maps() {
            for tier in crate::tsp::TIERS {
                let stem = format!("map{}_tier{}", map.mapnumber, tier);
                let pk_path = dir.join(format!("{stem}.pk"));
                let vk_path = dir.join(format!("{stem}.vk"));
                if !pk_path.exists() || !vk_path.exists() {
                    continue;
                }
                let pk = ProvingKey::from_bytes(&std::fs::read(&pk_path)?)?;
                let vk = VerifyingKey::from_bytes(&std::fs::read(&vk_path)?)?;
                let cs = build_tsp_circuit(map, tier)?;
                self.entries
                    .insert((map.mapnumber, tier), PreparedCircuit { cs, pk, vk });
                loaded += 1;
            }
        }
        Ok(loaded)
    }
}

/// Provider behaviour knobs.
#[derive(Clone, Debug)]
pub struct ProviderConfig {
    pub address: Address,
    pub variant: Variant,
    pub solver_seed: u64,
    pub proof_seed: Vec<u8>,
    pub fault: FaultMode,
    /// A transient fault hits the first attempt only; a persistent one
    /// survives the retry and aborts the run.
    pub fault_persists: bool,
}

impl ProviderConfig {
    pub fn honest(address: Address, variant: Variant, solver_seed: u64) -> Self {
        ProviderConfig {
            address,
            variant,
            solver_seed,
            proof_seed: b"provider-proof".to_vec(),
            fault: FaultMode::None,
            fault_persists: false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum ProviderOutcome {
    /// Stored on the ledger (verified-accepted or plain-stored).
    Accepted { receipt: Receipt },
    /// The contract rejected the submission.
    Discarded { receipt: Receipt },
    /// Witness computation failed twice; nothing was submitted.
    Aborted { reason: String },
}

#[derive(Clone, Debug)]
pub struct ProviderRun {
    pub outcome: ProviderOutcome,
    pub attempts: u32,
    pub tour: Tour,
    pub witness_time: Duration,
    pub proof_time: Duration,
}

impl ProviderRun {
    pub fn accepted(&self) -> bool {
        matches!(self.outcome, ProviderOutcome::Accepted { .. })
    }

    pub fn submit_gas(&self) -> Option<u64> {
        match &self.outcome {
            ProviderOutcome::Accepted { receipt } | ProviderOutcome::Discarded { receipt } => {
                Some(receipt.gas_used)
            }
            ProviderOutcome::Aborted { .. } => None,
        }
    }
}

/// The provider flow: fetch the task, solve off-chain, and submit through
/// the configured variant. For the verified variant a failed witness is
/// recomputed once from a fresh solve; a second failure aborts the run.
pub fn run_provider(
    ledger: &mut Ledger,
    broker: Address,
    registry: &MapRegistry,
    keys: &KeyStore,
    config: &ProviderConfig,
) -> Result<ProviderRun, HarnessError> {
    let (task, verify_flag) = ledger.get_task_request(broker)?;
    let map = registry.get(task.mapnumber)?;
    let solve = |attempt: u64| solve_heuristic(map, &task.instance, config.solver_seed + attempt);

    if config.variant != Variant::Verified {
        let tour = solve(0)?;
        let mut sum = tour.sum;
        if config.fault == FaultMode::CorruptSum {
            sum += 1;
        }
        let receipt = match config.variant {
            Variant::Unverified => {
                ledger.submit_solution_unverified(broker, config.address, &tour.path, sum)?
            }
            Variant::Onchain => {
                ledger.submit_solution_onchain_check(broker, config.address, &tour.path, sum)?
            }
            Variant::Verified => unreachable!(),
        };
        let outcome = outcome_from(receipt);
        return Ok(ProviderRun {
            outcome,
            attempts: 1,
            tour,
            witness_time: Duration::ZERO,
            proof_time: Duration::ZERO,
        });
    }

    if !verify_flag {
        return Err(LedgerError::VerifyFlagMismatch.into());
    }
    let prep = keys.get(task.mapnumber, task.tier.value())?;
    let mut witness_time = Duration::ZERO;
    let mut attempts = 0u32;
    let (assignment, witness, tour) = loop {
        let tour = solve(attempts as u64)?;
        let mut witness = TspWitness::build(map, &task, &tour)?;
        if config.fault.breaks_witness() && (attempts == 0 || config.fault_persists) {
            apply_witness_fault(&mut witness, config.fault);
        }
        attempts += 1;
        let circuit = TspCircuit::with_witness(map, task.tier, witness.clone());
        let started = Instant::now();
        let result = compute_witness(&circuit);
        witness_time += started.elapsed();
        match result {
            Ok(assignment) => break (assignment, witness, tour),
            Err(err) if attempts >= 2 => {
                return Ok(ProviderRun {
                    outcome: ProviderOutcome::Aborted {
                        reason: err.to_string(),
                    },
                    attempts,
                    tour,
                    witness_time,
                    proof_time: Duration::ZERO,
                });
            }
            Err(_) => {}
        }
    };

    let started = Instant::now();
    let proof = prove(&prep.pk, &prep.cs, &assignment, &config.proof_seed)?;
    let proof_time = started.elapsed();

    let mut proof_bytes = proof.to_bytes();
    let mut submitted_path = witness.padded_path.clone();
    match config.fault {
        FaultMode::CorruptProof => proof_bytes[17] ^= 0x40,
        // Real cities sit at the front; swapping two changes the path but
        // not the digest that travels with it.
        FaultMode::DecoupleHash => submitted_path.swap(0, 1),
        _ => {}
    }

    let receipt = ledger.submit_solution(
        broker,
        config.address,
        &submitted_path,
        witness.claimed_sum,
        witness.hash_of_path,
        witness.hash_of_cities,
        &proof_bytes,
    )?;
    Ok(ProviderRun {
        outcome: outcome_from(receipt),
        attempts,
        tour,
        witness_time,
        proof_time,
    })
}

fn outcome_from(receipt: Receipt) -> ProviderOutcome {
    match receipt.effect {
        TxEffect::SolutionAccepted { .. } | TxEffect::SolutionStored { .. } => {
            ProviderOutcome::Accepted { receipt }
        }
        _ => ProviderOutcome::Discarded { receipt },
    }
}

fn apply_witness_fault(witness: &mut TspWitness, fault: FaultMode) {
    match fault {
        FaultMode::CorruptSum => witness.claimed_sum += 1,
        FaultMode::CorruptPath => witness.padded_path.swap(0, 1),
        _ => {}
    }
}

#[derive(Clone, Debug)]
pub struct ConsumerOutcome {
    pub end_receipt: Receipt,
    pub refunded: bool,
    /// The retrieved tour, unpadded; None when nothing was stored.
    pub solution: Option<Tour>,
    /// Consumer-side validate_tour verdict on the retrieved solution.
    pub revalidated: Option<bool>,
}

/// Closes the task after the minimum duration and re-validates whatever
/// was stored. The ledger clock is advanced as needed; real consumers wait.
pub fn finish_task(
    ledger: &mut Ledger,
    broker: Address,
    consumer: Address,
    registry: &MapRegistry,
) -> Result<ConsumerOutcome, HarnessError> {
    let (task, verify_flag) = ledger.get_task_request(broker)?;
    let end_receipt = match ledger.end_task(broker, consumer) {
        Err(LedgerError::TooEarly { ready_at, height }) => {
            ledger.advance_blocks(ready_at - height);
            ledger.end_task(broker, consumer)?
        }
        other => other?,
    };
    let refunded = matches!(end_receipt.effect, TxEffect::TaskEnded { refunded: true, .. });
    let (solution, revalidated) = match ledger.retrieve_solution(broker) {
        Ok(stored) => {
            let map = registry.get(task.mapnumber)?;
            let path = if verify_flag {
                strip_padding(&stored.path).unwrap_or_default()
            } else {
                stored.path.clone()
            };
            let tour = Tour {
                path,
                sum: stored.sum,
            };
            let verdict = !tour.path.is_empty()
                && validate_tour(map, &task.instance, &tour).unwrap_or(false);
            (Some(tour), Some(verdict))
        }
        Err(LedgerError::NoSolution) => (None, None),
        Err(err) => return Err(err.into()),
    };
    Ok(ConsumerOutcome {
        end_receipt,
        refunded,
        solution,
        revalidated,
    })
}

/// One full offloading round on a fresh broker.
#[derive(Clone, Debug)]
pub struct OffloadConfig {
    pub consumer: Address,
    pub provider: ProviderConfig,
    pub task: TaskSpec,
    pub stake: u64,
    pub min_duration: u64,
}

#[derive(Clone, Debug)]
pub struct OffloadReport {
    pub broker: Address,
    pub provider: ProviderRun,
    pub consumer: ConsumerOutcome,
}

/// Deploys contracts for the task, runs one provider against it, then
/// closes and re-validates: the whole lifecycle in submission order.
pub fn run_offload(
    ledger: &mut Ledger,
    registry: &MapRegistry,
    keys: &mut KeyStore,
    config: &OffloadConfig,
) -> Result<OffloadReport, HarnessError> {
    let map = registry.get(config.task.mapnumber)?;
    let variant = config.provider.variant;
    let verifier = if variant == Variant::Verified {
        let prep = keys.ensure(map, config.task.tier.value())?;
        let vk = prep.vk.clone();
        let (addr, _) = ledger.deploy_verifier(
            config.consumer,
            vk,
            config.task.mapnumber,
            config.task.tier.value(),
        )?;
        Some(addr)
    } else {
        None
    };
    // Only the in-contract checker needs the matrix on the ledger.
    let onchain_map = (variant == Variant::Onchain).then(|| map.clone());
    let (broker, _) = ledger.deploy_broker(config.consumer, onchain_map, verifier)?;
    ledger.create_task_request(
        broker,
        config.consumer,
        config.stake,
        config.task.clone(),
        variant == Variant::Verified,
        config.min_duration,
    )?;
    let provider = run_provider(ledger, broker, registry, keys, &config.provider)?;
    let consumer = finish_task(ledger, broker, config.consumer, registry)?;
    Ok(OffloadReport {
        broker,
        provider,
        consumer,
    })
}

/// Re-checks the ledger invariants a correct run must preserve: the coin
/// supply never changes, receipts are numbered gaplessly, blocks move
/// forward, and every transaction burned gas.
pub fn audit_ledger(ledger: &Ledger, expected_supply: u128) -> Result<(), String> {
    if ledger.total_supply() != expected_supply {
        return Err(format!(
            "supply drifted: {} != {}",
            ledger.total_supply(),
            expected_supply
        ));
    }
    let mut prev_block = 0;
    for (i, receipt) in ledger.log().iter().enumerate() {
        if receipt.tx_id != i as u64 + 1 {
            return Err(format!("receipt {i} has tx_id {}", receipt.tx_id));
        }
        if receipt.block <= prev_block {
            return Err(format!("tx {} did not advance the chain", receipt.tx_id));
        }
        if receipt.gas_used == 0 {
            return Err(format!("tx {} burned no gas", receipt.tx_id));
        }
        prev_block = receipt.block;
    }
    if ledger.height() < prev_block {
        return Err("height lags the last receipt".into());
    }
    Ok(())
}

/// File-facing run description for the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioConfig {
    /// Map JSON files to register, relative to the config file.
    pub maps: Vec<String>,
    pub sweeps: Vec<Sweep>,
    pub variants: Vec<Variant>,
    /// Gas schedule JSON, relative to the config file; default when absent.
    pub gas_schedule: Option<String>,
    pub seed: u64,
    pub stake: u64,
    pub csv_out: Option<String>,
    pub log_out: Option<String>,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn registry(&self, base: &Path) -> Result<MapRegistry, HarnessError> {
        let mut registry = MapRegistry::new();
        for rel in &self.maps {
            let text = std::fs::read_to_string(base.join(rel))?;
            let map: TspMap =
                serde_json::from_str(&text).map_err(|e| HarnessError::Config(e.to_string()))?;
            registry.register(map)?;
        }
        Ok(registry)
    }

    pub fn schedule(&self, base: &Path) -> Result<crate::ledger::GasSchedule, HarnessError> {
        match &self.gas_schedule {
            Some(rel) => {
                let text = std::fs::read_to_string(base.join(rel))?;
                serde_json::from_str(&text).map_err(|e| HarnessError::Config(e.to_string()))
            }
            None => Ok(crate::ledger::GasSchedule::default()),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        for sweep in &self.sweeps {
            for &size in &sweep.sizes {
                if Tier::for_instance_size(size).is_err() {
                    return Err(HarnessError::Config(format!(
                        "sweep size {size} on map {} exceeds the largest tier",
                        sweep.mapnumber
                    )));
                }
            }
        }
        if self.variants.is_empty() {
            return Err(HarnessError::Config("no variants selected".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::KeyStore;
    use crate::tsp::fixture_map30;
    use once_cell::sync::Lazy;

    /// Keys for (map 1, tier 10), generated once for the whole module tree.
    pub static BASE_KEYS: Lazy<KeyStore> = Lazy::new(|| {
        let mut keys = KeyStore::new();
        keys.ensure(&fixture_map30(), 10).unwrap();
        keys
    });
}

#[cfg(test)]
mod tests {
    use super::test_support::BASE_KEYS;
    use super::*;
    use crate::ledger::GasSchedule;
    use crate::tsp::fixture_map30;

    const CONSUMER: Address = 1;
    const PROVIDER: Address = 2;

    fn env() -> (Ledger, MapRegistry, KeyStore) {
        let ledger = Ledger::new(GasSchedule::default(), &[(CONSUMER, 10_000), (PROVIDER, 0)]);
        (ledger, MapRegistry::fixtures(), BASE_KEYS.clone())
    }

    fn offload(task_sizes: &[u64], provider: ProviderConfig) -> OffloadConfig {
        OffloadConfig {
            consumer: CONSUMER,
            provider,
            task: TaskSpec::new(1, task_sizes.to_vec(), Tier::new(10).unwrap()).unwrap(),
            stake: 100,
            min_duration: 3,
        }
    }

    #[test]
    fn honest_eight_city_offload_is_accepted_and_paid() {
        let (mut ledger, registry, mut keys) = env();
        let instance: Vec<u64> = (1..=8).collect();
        let config = offload(&instance, ProviderConfig::honest(PROVIDER, Variant::Verified, 7));
        let report = run_offload(&mut ledger, &registry, &mut keys, &config).unwrap();
        assert!(report.provider.accepted());
        assert_eq!(report.provider.attempts, 1);
        assert!(!report.consumer.refunded);
        assert_eq!(report.consumer.revalidated, Some(true));
        assert_eq!(
            report.consumer.solution.as_ref().unwrap().sum,
            report.provider.tour.sum
        );
        assert_eq!(ledger.balance(PROVIDER), 100);
        assert!(report.provider.proof_time > report.provider.witness_time);
    }

    #[test]
    fn transient_witness_faults_recover_on_retry() {
        for fault in [FaultMode::CorruptSum, FaultMode::CorruptPath] {
            let (mut ledger, registry, mut keys) = env();
            let mut provider = ProviderConfig::honest(PROVIDER, Variant::Verified, 7);
            provider.fault = fault;
            let config = offload(&[1, 2, 3, 4, 5], provider);
            let report = run_offload(&mut ledger, &registry, &mut keys, &config).unwrap();
            assert!(report.provider.accepted(), "{fault:?}");
            assert_eq!(report.provider.attempts, 2);
            assert_eq!(report.consumer.revalidated, Some(true));
        }
    }

    #[test]
    fn persistent_witness_faults_abort_without_submitting() {
        for fault in [FaultMode::CorruptSum, FaultMode::CorruptPath] {
            let (mut ledger, registry, mut keys) = env();
            let mut provider = ProviderConfig::honest(PROVIDER, Variant::Verified, 7);
            provider.fault = fault;
            provider.fault_persists = true;
            let config = offload(&[1, 2, 3, 4, 5], provider);
            let report = run_offload(&mut ledger, &registry, &mut keys, &config).unwrap();
            assert!(
                matches!(report.provider.outcome, ProviderOutcome::Aborted { .. }),
                "{fault:?}"
            );
            assert_eq!(report.provider.attempts, 2);
            // Nothing submitted: the consumer gets the stake back.
            assert!(report.consumer.refunded);
            assert!(report.consumer.solution.is_none());
            assert_eq!(ledger.balance(PROVIDER), 0);
        }
    }

    #[test]
    fn submission_level_faults_are_discarded_by_the_contract() {
        for fault in [FaultMode::CorruptProof, FaultMode::DecoupleHash] {
            let (mut ledger, registry, mut keys) = env();
            let mut provider = ProviderConfig::honest(PROVIDER, Variant::Verified, 7);
            provider.fault = fault;
            let config = offload(&[1, 2, 3, 4, 5], provider);
            let report = run_offload(&mut ledger, &registry, &mut keys, &config).unwrap();
            assert!(
                matches!(report.provider.outcome, ProviderOutcome::Discarded { .. }),
                "{fault:?}"
            );
            assert!(report.consumer.refunded);
            assert_eq!(ledger.balance(PROVIDER), 0);
        }
    }

    #[test]
    fn onchain_variant_rejects_corrupt_sums_and_accepts_honest_ones() {
        let (mut ledger, registry, mut keys) = env();
        let honest = ProviderConfig::honest(PROVIDER, Variant::Onchain, 3);
        let config = offload(&[1, 2, 3, 4, 5, 6], honest);
        let report = run_offload(&mut ledger, &registry, &mut keys, &config).unwrap();
        assert!(report.provider.accepted());
        assert_eq!(report.consumer.revalidated, Some(true));

        let mut bad = ProviderConfig::honest(PROVIDER, Variant::Onchain, 3);
        bad.fault = FaultMode::CorruptSum;
        let config = offload(&[1, 2, 3, 4, 5, 6], bad);
        let report = run_offload(&mut ledger, &registry, &mut keys, &config).unwrap();
        assert!(matches!(
            report.provider.outcome,
            ProviderOutcome::Discarded { .. }
        ));
    }

    #[test]
    fn unverified_variant_stores_even_corrupt_sums() {
        let (mut ledger, registry, mut keys) = env();
        let mut provider = ProviderConfig::honest(PROVIDER, Variant::Unverified, 3);
        provider.fault = FaultMode::CorruptSum;
        let config = offload(&[1, 2, 3, 4], provider);
        let report = run_offload(&mut ledger, &registry, &mut keys, &config).unwrap();
        // Stored without checks; the consumer-side revalidation is what
        // catches the lie.
        assert!(report.provider.accepted());
        assert_eq!(report.consumer.revalidated, Some(false));
    }

    #[test]
    fn keystore_round_trips_through_files() {
        let dir = tempfile::tempdir().unwrap();
        BASE_KEYS.save_dir(dir.path()).unwrap();
        let mut loaded = KeyStore::new();
        let n = loaded.load_dir(dir.path(), &MapRegistry::fixtures()).unwrap();
        assert_eq!(n, 1);
        let a = loaded.get(1, 10).unwrap();
        let b = BASE_KEYS.get(1, 10).unwrap();
        assert_eq!(a.pk, b.pk);
        assert_eq!(a.vk, b.vk);
        assert_eq!(a.cs.digest(), b.cs.digest());
        assert!(loaded.get(1, 20).is_err());
    }

    #[test]
    fn key_generation_is_deterministic_per_slot() {
        let mut a = KeyStore::new();
        let mut b = KeyStore::new();
        let map = fixture_map30();
        let ka = a.ensure(&map, 10).unwrap().vk.clone();
        let kb = b.ensure(&map, 10).unwrap().vk.clone();
        assert_eq!(ka, kb);
    }

    #[test]
    fn scenario_config_validation() {
        let sweep = |sizes: Vec<usize>| Sweep {
            mapnumber: 1,
            sizes,
        };
        let config = ScenarioConfig {
            maps: vec![],
            sweeps: vec![sweep(vec![3, 61])],
            variants: vec![Variant::Verified],
            gas_schedule: None,
            seed: 0,
            stake: 1,
            csv_out: None,
            log_out: None,
        };
        assert!(matches!(
            config.validate(),
            Err(HarnessError::Config(_))
        ));
        let ok = ScenarioConfig {
            sweeps: vec![sweep(vec![3, 60])],
            ..config
        };
        ok.validate().unwrap();
        let none = ScenarioConfig {
            variants: vec![],
            ..ok
        };
        assert!(none.validate().is_err());
    }
}
