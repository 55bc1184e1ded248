//! Simulated single-writer ledger: accounts, block height, deployed
//! contracts, and an append-only receipt log.
//!
//! Transactions apply strictly in call order. A call that returns an error
//! changes nothing: no receipt, no gas, no height. A call that returns a
//! receipt may still carry a negative outcome (a discarded submission is a
//! successful transaction). Gas is metered per a configurable schedule but
//! never debited, so token conservation is exact: stake moves between
//! accounts and contract escrow only.

use crate::algebra::FieldElement;
use crate::snark::{verify, Proof, VerifyingKey};
use crate::tsp::{hash_padded, validate_tour, HashDigest, TaskSpec, Tour, TspError, TspMap};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub type Address = u64;

/// First address handed to deployed contracts; genesis accounts should stay
/// below it.
pub const CONTRACT_ADDRESS_BASE: Address = 100;

/// Named cost constants of the synthetic gas model. The absolute numbers
/// are calibration, not consensus rules; tests assert shapes and ratios.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GasSchedule {
    /// Flat cost of every transaction.
    pub tx_base: u64,
    /// Cost per 32-byte word written to contract storage.
    pub store_word: u64,
    /// Cost per loop iteration of in-contract plain computation.
    pub step_cost: u64,
    /// Cost per field element absorbed by the in-contract hash.
    pub hash_per_element: u64,
    /// Cost per pairing evaluation inside proof verification.
    pub pairing_cost: u64,
    /// Cost per public input fed to proof verification.
    pub public_input_cost: u64,
}

impl Default for GasSchedule {
    fn default() -> Self {
        GasSchedule {
            tx_base: 21_000,
            store_word: 5_000,
            step_cost: 1_800,
            hash_per_element: 600,
            pairing_cost: 40_000,
            public_input_cost: 3_000,
        }
    }
}

impl GasSchedule {
    pub fn words(bytes: usize) -> u64 {
        ((bytes + 31) / 32) as u64
    }

    /// Proof verification: four pairings plus per-input preparation.
    pub fn verify_cost(&self, num_inputs: usize) -> u64 {
        self.pairing_cost * 4 + self.public_input_cost * num_inputs as u64
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum LedgerError {
    #[error("unknown account {0}")]
    UnknownAccount(Address),
    #[error("account {account} holds {balance}, needs {needed}")]
    InsufficientBalance {
        account: Address,
        balance: u64,
        needed: u64,
    },
    #[error("unknown contract {0}")]
    UnknownContract(Address),
    #[error("contract {0} is not a broker")]
    NotABroker(Address),
    #[error("contract {0} is not a verifier")]
    NotAVerifier(Address),
    #[error("operation needs state {expected}, contract is in {actual}")]
    WrongState {
        expected: BrokerState,
        actual: BrokerState,
    },
    #[error("submission kind does not match the task's verify flag")]
    VerifyFlagMismatch,
    #[error("broker is not wired to a verifier contract")]
    MissingVerifier,
    #[error("broker holds no map for in-contract checking")]
    MissingMap,
    #[error("verifier is bound to map {bound_map} tier {bound_tier}")]
    VerifierBindingMismatch { bound_map: u64, bound_tier: u32 },
    #[error("too early: task can end at block {ready_at}, height is {height}")]
    TooEarly { ready_at: u64, height: u64 },
    #[error("no solution was stored")]
    NoSolution,
    #[error("submitted path has {got} slots, tier needs {expected}")]
    PathArity { expected: usize, got: usize },
    #[error(transparent)]
    Task(#[from] TspError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BrokerState {
    Ready,
    Running,
    Ended,
}

impl std::fmt::Display for BrokerState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            BrokerState::Ready => "ready",
            BrokerState::Running => "running",
            BrokerState::Ended => "ended",
        };
        f.write_str(name)
    }
}

/// An accepted or stored submission. `proof_tx` references the receipt of
/// the submission that carried the verified proof; plain variants have none.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredSolution {
    pub provider: Address,
    pub path: Vec<u64>,
    pub sum: u64,
    pub proof_tx: Option<u64>,
}

/// Task data held by a running broker.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveTask {
    pub spec: TaskSpec,
    pub consumer: Address,
    pub stake: u64,
    pub verify_flag: bool,
    pub min_duration: u64,
    pub created_at: u64,
    /// Digest of the tier-padded instance, fixed at creation; submitted
    /// proofs are verified against this copy, never the provider's.
    pub hash_of_cities: Option<HashDigest>,
}

/// The escrow state machine: ready -> running -> ended, no other edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrokerContract {
    pub state: BrokerState,
    pub verifier: Option<Address>,
    pub map: Option<TspMap>,
    pub task: Option<ActiveTask>,
    pub solutions: Vec<StoredSolution>,
}

/// Stateless proof checker bound to one (map, tier) circuit at deployment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifierContract {
    pub mapnumber: u64,
    pub tier: u32,
    pub vk: VerifyingKey,
}

impl VerifierContract {
    /// Contract semantics: anything malformed is a false verdict, since a
    /// contract cannot throw usefully mid-verification.
    pub fn check(&self, proof_bytes: &[u8], public_inputs: &[FieldElement]) -> bool {
        let Ok(proof) = Proof::from_bytes(proof_bytes) else {
            return false;
        };
        verify(&self.vk, public_inputs, &proof).unwrap_or(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Contract {
    Broker(BrokerContract),
    Verifier(VerifierContract),
}

/// Outcome payload of a transaction receipt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum TxEffect {
    Deployed { address: Address },
    TaskCreated { stake: u64, verify_flag: bool },
    SolutionAccepted { index: usize },
    SolutionStored { index: usize },
    SolutionDiscarded { reason: String },
    Verdict { value: bool },
    TaskEnded { paid_to: Address, amount: u64, refunded: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Receipt {
    pub tx_id: u64,
    pub block: u64,
    pub caller: Address,
    pub contract: Address,
    pub op: String,
    pub gas_used: u64,
    pub effect: TxEffect,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    schedule: GasSchedule,
    accounts: BTreeMap<Address, u64>,
    contracts: BTreeMap<Address, Contract>,
    height: u64,
    next_tx: u64,
    next_address: Address,
    log: Vec<Receipt>,
}

impl Ledger {
    /// Genesis addresses must be distinct and below the contract range.
    pub fn new(schedule: GasSchedule, genesis: &[(Address, u64)]) -> Self {
        let mut accounts = BTreeMap::new();
        for &(addr, balance) in genesis {
            assert!(addr < CONTRACT_ADDRESS_BASE, "genesis address in contract range");
            assert!(accounts.insert(addr, balance).is_none(), "duplicate genesis address");
        }
        Ledger {
            schedule,
            accounts,
            contracts: BTreeMap::new(),
            height: 0,
            next_tx: 0,
            next_address: CONTRACT_ADDRESS_BASE,
            log: Vec::new(),
        }
    }

    pub fn schedule(&self) -> &GasSchedule {
        &self.schedule
    }

    pub fn height(&self) -> u64 {
        self.height
    }

    pub fn log(&self) -> &[Receipt] {
        &self.log
    }

    pub fn balance(&self, addr: Address) -> u64 {
        self.accounts.get(&addr).copied().unwrap_or(0)
    }

    /// Total tokens across accounts and contract escrow; constant for the
    /// lifetime of the ledger.
    pub fn total_supply(&self) -> u128 {
        self.accounts.values().map(|&b| b as u128).sum()
    }

    /// Simulated passage of time; not a transaction, no receipt.
    pub fn advance_blocks(&mut self, n: u64) {
        self.height += n;
    }

    /// One receipt line per transaction, in order.
    pub fn export_log_jsonl(&self) -> String {
        let mut out = String::new();
        for receipt in &self.log {
            out.push_str(&serde_json::to_string(receipt).expect("receipt serializes"));
            out.push('\n');
        }
        out
    }

    pub fn broker_state(&self, addr: Address) -> Result<BrokerState, LedgerError> {
        Ok(self.broker(addr)?.state)
    }

    pub fn solutions(&self, addr: Address) -> Result<&[StoredSolution], LedgerError> {
        Ok(&self.broker(addr)?.solutions)
    }

    pub fn deploy_verifier(
        &mut self,
        deployer: Address,
        vk: VerifyingKey,
        mapnumber: u64,
        tier: u32,
    ) -> Result<(Address, Receipt), LedgerError> {
        crate::tsp::Tier::new(tier)?;
        let gas = self.schedule.tx_base
            + self.schedule.store_word * GasSchedule::words(vk.to_bytes().len());
        let addr = self.allocate_address();
        self.contracts.insert(
            addr,
            Contract::Verifier(VerifierContract {
                mapnumber,
                tier,
                vk,
            }),
        );
        let receipt = self.push_receipt(
            deployer,
            addr,
            "deploy_verifier",
            gas,
            TxEffect::Deployed { address: addr },
        );
        Ok((addr, receipt))
    }

    pub fn deploy_broker(
        &mut self,
        deployer: Address,
        map: Option<TspMap>,
        verifier: Option<Address>,
    ) -> Result<(Address, Receipt), LedgerError> {
        if let Some(map) = &map {
            map.validate()?;
        }
        if let Some(v) = verifier {
            self.verifier(v)?;
        }
        let map_words = map.as_ref().map_or(0, |m| (m.n * m.n) as u64);
        let gas = self.schedule.tx_base + self.schedule.store_word * (1 + map_words);
        let addr = self.allocate_address();
        self.accounts.entry(addr).or_insert(0);
        self.contracts.insert(
            addr,
            Contract::Broker(BrokerContract {
                state: BrokerState::Ready,
                verifier,
                map,
                task: None,
                solutions: Vec::new(),
            }),
        );
        let receipt = self.push_receipt(
            deployer,
            addr,
            "deploy_broker",
            gas,
            TxEffect::Deployed { address: addr },
        );
        Ok((addr, receipt))
    }

    /// Escrows the stake and moves the broker to running.
    pub fn create_task_request(
        &mut self,
        broker: Address,
        caller: Address,
        stake: u64,
        task: TaskSpec,
        verify_flag: bool,
        min_duration: u64,
    ) -> Result<Receipt, LedgerError> {
        let contract = self.broker(broker)?;
        expect_state(contract, BrokerState::Ready)?;
        task.validate_shape()?;
        if let Some(map) = &contract.map {
            task.validate_against(map)?;
        }
        if verify_flag {
            let vaddr = contract.verifier.ok_or(LedgerError::MissingVerifier)?;
            let v = self.verifier(vaddr)?;
            if (v.mapnumber, v.tier) != (task.mapnumber, task.tier.value()) {
                return Err(LedgerError::VerifierBindingMismatch {
                    bound_map: v.mapnumber,
                    bound_tier: v.tier,
                });
            }
        }
        let balance = *self
            .accounts
            .get(&caller)
            .ok_or(LedgerError::UnknownAccount(caller))?;
        if balance < stake {
            return Err(LedgerError::InsufficientBalance {
                account: caller,
                balance,
                needed: stake,
            });
        }

        // The instance digest is fixed now, in its tier-padded form, so
        // later submissions cannot substitute a different city list.
        let hash_of_cities = if verify_flag {
            let mut padded = task.instance.clone();
            padded.resize(task.tier.slots(), 0);
            Some(hash_padded(&padded)?)
        } else {
            None
        };
        let mut gas = self.schedule.tx_base
            + self.schedule.store_word * (task.instance.len() as u64 + 5);
        if verify_flag {
            gas += self.schedule.hash_per_element * task.tier.slots() as u64;
        }

        *self.accounts.get_mut(&caller).unwrap() -= stake;
        *self.accounts.entry(broker).or_insert(0) += stake;
        let created_at = self.height + 1;
        let contract = self.broker_mut(broker);
        contract.state = BrokerState::Running;
        contract.task = Some(ActiveTask {
            spec: task,
            consumer: caller,
            stake,
            verify_flag,
            min_duration,
            created_at,
            hash_of_cities,
        });
        Ok(self.push_receipt(
            caller,
            broker,
            "create_task_request",
            gas,
            TxEffect::TaskCreated { stake, verify_flag },
        ))
    }

    /// View call: the data a provider needs to work on the task.
    pub fn get_task_request(&self, broker: Address) -> Result<(TaskSpec, bool), LedgerError> {
        let contract = self.broker(broker)?;
        expect_state(contract, BrokerState::Running)?;
        let task = contract.task.as_ref().expect("running broker has a task");
        Ok((task.spec.clone(), task.verify_flag))
    }

    /// Proof-carrying submission. The contract recomputes the path digest,
    /// checks the instance digest against its own copy, then verifies; a
    /// failed check discards the submission but the transaction succeeds.
    #[allow(clippy::too_many_arguments)]
    pub fn submit_solution(
        &mut self,
        broker: Address,
        caller: Address,
        padded_path: &[u64],
        sum: u64,
        hash_of_path: HashDigest,
        hash_of_cities: HashDigest,
        proof_bytes: &[u8],
    ) -> Result<Receipt, LedgerError> {
        let contract = self.broker(broker)?;
        expect_state(contract, BrokerState::Running)?;
        let task = contract.task.as_ref().expect("running broker has a task");
        if !task.verify_flag {
            return Err(LedgerError::VerifyFlagMismatch);
        }
        let slots = task.spec.tier.slots();
        if padded_path.len() != slots {
            return Err(LedgerError::PathArity {
                expected: slots,
                got: padded_path.len(),
            });
        }
        let vaddr = task.verifier_address(contract)?;
        let stored_cities_digest = task
            .hash_of_cities
            .expect("verified task stores its instance digest");

        // In-contract recomputation closes the proof/path decoupling hole:
        // the digest entering verification is derived from the very path
        // that would be stored.
        let mut gas = self.schedule.tx_base
            + self.schedule.hash_per_element * slots as u64;
        let recomputed = hash_padded(padded_path)?;
        let outcome = if recomputed != hash_of_path {
            Err("path digest does not match the submitted path".to_string())
        } else if stored_cities_digest != hash_of_cities {
            Err("instance digest does not match the task".to_string())
        } else {
            gas += self.schedule.verify_cost(6);
            let public_inputs = [
                FieldElement::from_u64(sum),
                hash_of_path.limb0,
                hash_of_path.limb1,
                stored_cities_digest.limb0,
                stored_cities_digest.limb1,
                FieldElement::one(),
            ];
            let verifier = self.verifier(vaddr)?;
            if verifier.check(proof_bytes, &public_inputs) {
                Ok(())
            } else {
                Err("proof verification failed".to_string())
            }
        };

        match outcome {
            Ok(()) => {
                // Path, sum, provider and the 256-byte proof reference all
                // hit storage.
                gas += self.schedule.store_word * (slots as u64 + 2 + 8);
                let tx_id = self.next_tx + 1;
                let contract = self.broker_mut(broker);
                let index = contract.solutions.len();
                contract.solutions.push(StoredSolution {
                    provider: caller,
                    path: padded_path.to_vec(),
                    sum,
                    proof_tx: Some(tx_id),
                });
                Ok(self.push_receipt(
                    caller,
                    broker,
                    "submit_solution",
                    gas,
                    TxEffect::SolutionAccepted { index },
                ))
            }
            Err(reason) => Ok(self.push_receipt(
                caller,
                broker,
                "submit_solution",
                gas,
                TxEffect::SolutionDiscarded { reason },
            )),
        }
    }

    /// Trusting variant: stores whatever arrives, charging storage only.
    pub fn submit_solution_unverified(
        &mut self,
        broker: Address,
        caller: Address,
        path: &[u64],
        sum: u64,
    ) -> Result<Receipt, LedgerError> {
        let contract = self.broker(broker)?;
        expect_state(contract, BrokerState::Running)?;
        let task = contract.task.as_ref().expect("running broker has a task");
        if task.verify_flag {
            return Err(LedgerError::VerifyFlagMismatch);
        }
        let gas = self.schedule.tx_base
            + self.schedule.store_word * (path.len() as u64 + 2);
        let contract = self.broker_mut(broker);
        let index = contract.solutions.len();
        contract.solutions.push(StoredSolution {
            provider: caller,
            path: path.to_vec(),
            sum,
            proof_tx: None,
        });
        Ok(self.push_receipt(
            caller,
            broker,
            "submit_solution_unverified",
            gas,
            TxEffect::SolutionStored { index },
        ))
    }

    /// Runs the plain validity check inside the metered environment. Gas is
    /// linear in the path length: five scans (range, duplicates, coverage,
    /// edge sum, comparison) plus fixed overhead.
    pub fn submit_solution_onchain_check(
        &mut self,
        broker: Address,
        caller: Address,
        path: &[u64],
        sum: u64,
    ) -> Result<Receipt, LedgerError> {
        let contract = self.broker(broker)?;
        expect_state(contract, BrokerState::Running)?;
        let task = contract.task.as_ref().expect("running broker has a task");
        let map = contract.map.as_ref().ok_or(LedgerError::MissingMap)?;
        let instance = task.spec.instance.clone();

        let iterations = 5 * path.len() as u64 + 2;
        let mut gas = self.schedule.tx_base + self.schedule.step_cost * iterations;
        let tour = Tour {
            path: path.to_vec(),
            sum,
        };
        // A malformed question (unknown city) is a false verdict here; the
        // metered environment cannot throw usefully.
        let valid = validate_tour(map, &instance, &tour).unwrap_or(false);

        if valid {
            gas += self.schedule.store_word * (path.len() as u64 + 2);
            let contract = self.broker_mut(broker);
            let index = contract.solutions.len();
            contract.solutions.push(StoredSolution {
                provider: caller,
                path: path.to_vec(),
                sum,
                proof_tx: None,
            });
            Ok(self.push_receipt(
                caller,
                broker,
                "submit_solution_onchain_check",
                gas,
                TxEffect::SolutionAccepted { index },
            ))
        } else {
            Ok(self.push_receipt(
                caller,
                broker,
                "submit_solution_onchain_check",
                gas,
                TxEffect::SolutionDiscarded {
                    reason: "in-contract validation failed".to_string(),
                },
            ))
        }
    }

    /// Standalone proof check, receipted so verification cost is observable
    /// in isolation.
    pub fn verify_tx(
        &mut self,
        verifier: Address,
        caller: Address,
        proof_bytes: &[u8],
        public_inputs: &[FieldElement],
    ) -> Result<(bool, Receipt), LedgerError> {
        let contract = self.verifier(verifier)?;
        let value = contract.check(proof_bytes, public_inputs);
        let gas = self.schedule.tx_base + self.schedule.verify_cost(public_inputs.len());
        let receipt = self.push_receipt(
            caller,
            verifier,
            "verify_tx",
            gas,
            TxEffect::Verdict { value },
        );
        Ok((value, receipt))
    }

    /// Closes the task once the minimum duration has passed. The first
    /// accepted provider wins the stake; with no solutions the consumer is
    /// refunded.
    pub fn end_task(&mut self, broker: Address, caller: Address) -> Result<Receipt, LedgerError> {
        let contract = self.broker(broker)?;
        expect_state(contract, BrokerState::Running)?;
        let task = contract.task.as_ref().expect("running broker has a task");
        let ready_at = task.created_at + task.min_duration;
        if self.height < ready_at {
            return Err(LedgerError::TooEarly {
                ready_at,
                height: self.height,
            });
        }
        let stake = task.stake;
        let consumer = task.consumer;
        let winner = contract.solutions.first().map(|s| s.provider);
        let (paid_to, refunded) = match winner {
            Some(provider) => (provider, false),
            None => (consumer, true),
        };
        let gas = self.schedule.tx_base + self.schedule.store_word;

        *self.accounts.get_mut(&broker).expect("broker has an account") -= stake;
        *self.accounts.entry(paid_to).or_insert(0) += stake;
        self.broker_mut(broker).state = BrokerState::Ended;
        Ok(self.push_receipt(
            caller,
            broker,
            "end_task",
            gas,
            TxEffect::TaskEnded {
                paid_to,
                amount: stake,
                refunded,
            },
        ))
    }

    /// View call: the winning (first stored) solution of an ended task.
    pub fn retrieve_solution(&self, broker: Address) -> Result<StoredSolution, LedgerError> {
        let contract = self.broker(broker)?;
        expect_state(contract, BrokerState::Ended)?;
        contract
            .solutions
            .first()
            .cloned()
            .ok_or(LedgerError::NoSolution)
    }

    fn allocate_address(&mut self) -> Address {
        while self.contracts.contains_key(&self.next_address)
            || self.accounts.contains_key(&self.next_address)
        {
            self.next_address += 1;
        }
        let addr = self.next_address;
        self.next_address += 1;
        addr
    }

    fn broker(&self, addr: Address) -> Result<&BrokerContract, LedgerError> {
        match self.contracts.get(&addr) {
            Some(Contract::Broker(b)) => Ok(b),
            Some(_) => Err(LedgerError::NotABroker(addr)),
            None => Err(LedgerError::UnknownContract(addr)),
        }
    }

    fn broker_mut(&mut self, addr: Address) -> &mut BrokerContract {
        match self.contracts.get_mut(&addr) {
            Some(Contract::Broker(b)) => b,
            _ => unreachable!("validated before mutation"),
        }
    }

    fn verifier(&self, addr: Address) -> Result<&VerifierContract, LedgerError> {
        match self.contracts.get(&addr) {
            Some(Contract::Verifier(v)) => Ok(v),
            Some(_) => Err(LedgerError::NotAVerifier(addr)),
            None => Err(LedgerError::UnknownContract(addr)),
        }
    }

    fn push_receipt(
        &mut self,
        caller: Address,
        contract: Address,
        op: &str,
        gas_used: u64,
        effect: TxEffect,
    ) -> Receipt {
        debug_assert!(gas_used > 0);
        self.next_tx += 1;
        self.height += 1;
        let receipt = Receipt {
            tx_id: self.next_tx,
            block: self.height,
            caller,
            contract,
            op: op.to_string(),
            gas_used,
            effect,
        };
        self.log.push(receipt.clone());
        receipt
    }
}

impl ActiveTask {
    fn verifier_address(&self, broker: &BrokerContract) -> Result<Address, LedgerError> {
        broker.verifier.ok_or(LedgerError::MissingVerifier)
    }
}

fn expect_state(broker: &BrokerContract, expected: BrokerState) -> Result<(), LedgerError> {
    if broker.state == expected {
        Ok(())
    } else {
        Err(LedgerError::WrongState {
            expected,
            actual: broker.state,
        })
    }
}
