//! Gas and latency sweeps across instance sizes and submission variants,
//! all on one shared ledger so the receipt log doubles as a trace.

use super::{
    run_offload, HarnessError, KeyStore, OffloadConfig, ProviderConfig, Variant,
};
use crate::ledger::{Address, GasSchedule, Ledger};
use crate::tsp::{MapRegistry, TaskSpec, Tier};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

const BENCH_CONSUMER: Address = 1;
const BENCH_PROVIDER: Address = 2;

/// One sweep: instance sizes drawn from the front of a registered map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sweep {
    pub mapnumber: u64,
    pub sizes: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct BenchPlan {
    pub sweeps: Vec<Sweep>,
    pub variants: Vec<Variant>,
    pub seed: u64,
    pub stake: u64,
    pub min_duration: u64,
    /// Run and discard one verified round first so cold-start effects do
    /// not land in the first timed row.
    pub warmup: bool,
}

impl BenchPlan {
    pub fn new(sweeps: Vec<Sweep>, variants: Vec<Variant>, seed: u64) -> Self {
        BenchPlan {
            sweeps,
            variants,
            seed,
            stake: 100,
            min_duration: 1,
            warmup: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub instance_size: usize,
    pub mapnumber: u64,
    pub variant: Variant,
    pub tier: u32,
    /// Gas of the submission transaction alone.
    pub gas_used: u64,
    pub witness_time_ms: f64,
    pub proof_time_ms: f64,
}

/// Where the gas curves of the onchain and verified variants cross.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossover {
    /// Smallest measured size where onchain costs more than verified.
    pub s_star: Option<usize>,
    /// Smallest measured size from which onchain stays more expensive for
    /// every larger measured size.
    pub s_double_star: Option<usize>,
}

impl Crossover {
    pub fn from_rows(rows: &[BenchmarkRow]) -> Crossover {
        let mut verified = BTreeMap::new();
        let mut onchain = BTreeMap::new();
        for row in rows {
            match row.variant {
                Variant::Verified => verified.insert(row.instance_size, row.gas_used),
                Variant::Onchain => onchain.insert(row.instance_size, row.gas_used),
                Variant::Unverified => None,
            };
        }
        let common: Vec<usize> = verified
            .keys()
            .filter(|s| onchain.contains_key(s))
            .copied()
            .collect();
        let s_star = common
            .iter()
            .copied()
            .find(|s| onchain[s] > verified[s]);
        let mut s_double_star = None;
        for &s in common.iter().rev() {
            if onchain[&s] > verified[&s] {
                s_double_star = Some(s);
            } else {
                break;
            }
        }
        Crossover {
            s_star,
            s_double_star,
        }
    }
}

pub struct BenchReport {
    pub rows: Vec<BenchmarkRow>,
    pub ledger: Ledger,
    pub crossover: Crossover,
    /// Genesis coin supply, for conservation checks after the fact.
    pub initial_supply: u128,
}

/// Runs every (map, size, variant) combination as a full offloading round.
/// Seeds for the solver and the proof blinding derive from the plan seed,
/// so two runs of the same plan produce identical gas numbers and logs.
pub fn run_benchmark(
    registry: &MapRegistry,
    keys: &mut KeyStore,
    schedule: GasSchedule,
    plan: &BenchPlan,
) -> Result<BenchReport, HarnessError> {
    let runs: usize = plan.sweeps.iter().map(|s| s.sizes.len()).sum::<usize>()
        * plan.variants.len()
        + usize::from(plan.warmup);
    let funding = plan
        .stake
        .checked_mul(runs as u64 + 1)
        .ok_or_else(|| HarnessError::Config("stake too large".into()))?;
    let mut ledger = Ledger::new(
        schedule,
        &[(BENCH_CONSUMER, funding), (BENCH_PROVIDER, 0)],
    );

    if plan.warmup {
        if let (Some(sweep), true) = (plan.sweeps.first(), plan.variants.contains(&Variant::Verified))
        {
            if let Some(&size) = sweep.sizes.first() {
                run_one(&mut ledger, registry, keys, plan, sweep.mapnumber, size, Variant::Verified)?;
            }
        }
    }

    let mut rows = Vec::new();
    for sweep in &plan.sweeps {
        for &size in &sweep.sizes {
            for &variant in &plan.variants {
                let (report, tier) = run_one(
                    &mut ledger,
                    registry,
                    keys,
                    plan,
                    sweep.mapnumber,
                    size,
                    variant,
                )?;
                let gas_used = report.provider.submit_gas().ok_or_else(|| {
                    HarnessError::Config(format!(
                        "honest {} run at size {size} did not submit",
                        variant.name()
                    ))
                })?;
                rows.push(BenchmarkRow {
                    instance_size: size,
                    mapnumber: sweep.mapnumber,
                    variant,
                    tier,
                    gas_used,
                    witness_time_ms: millis(report.provider.witness_time),
                    proof_time_ms: millis(report.provider.proof_time),
                });
            }
        }
    }
    let crossover = Crossover::from_rows(&rows);
    Ok(BenchReport {
        rows,
        ledger,
        crossover,
        initial_supply: funding as u128,
    })
}

fn run_one(
    ledger: &mut Ledger,
    registry: &MapRegistry,
    keys: &mut KeyStore,
    plan: &BenchPlan,
    mapnumber: u64,
    size: usize,
    variant: Variant,
) -> Result<(super::OffloadReport, u32), HarnessError> {
    let map = registry.get(mapnumber)?;
    if size == 0 || size > map.n {
        return Err(HarnessError::Config(format!(
            "size {size} out of range for map {mapnumber} with {} cities",
            map.n
        )));
    }
    let instance: Vec<u64> = (1..=size as u64).collect();
    let tier = Tier::for_instance_size(size)?;
    let mut provider = ProviderConfig::honest(
        BENCH_PROVIDER,
        variant,
        plan.seed
            .wrapping_add(mapnumber.wrapping_mul(1_000_003))
            .wrapping_add(size as u64),
    );
    provider.proof_seed =
        format!("bench/{}/{}/{}/{}", plan.seed, mapnumber, size, variant.name()).into_bytes();
    let config = OffloadConfig {
        consumer: BENCH_CONSUMER,
        provider,
        task: TaskSpec::new(mapnumber, instance, tier)?,
        stake: plan.stake,
        min_duration: plan.min_duration,
    };
    let report = run_offload(ledger, registry, keys, &config)?;
    Ok((report, tier.value()))
}

fn millis(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub fn rows_to_csv(rows: &[BenchmarkRow]) -> String {
    let mut out = String::from(
        "instance_size,mapnumber,variant,tier,gas_used,witness_time_ms,proof_time_ms\n",
    );
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{:.3},{:.3}",
            row.instance_size,
            row.mapnumber,
            row.variant.name(),
            row.tier,
            row.gas_used,
            row.witness_time_ms,
            row.proof_time_ms,
        )
        .expect("string writes cannot fail");
    }
    out
}
