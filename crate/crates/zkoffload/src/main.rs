//! Command line front end. All protocol logic lives in the library; this
//! file only parses arguments, moves state through JSON files, and prints
//! receipts. Exit codes: 0 success, 1 error or broken invariant, 2 the
//! retrieved solution failed revalidation, 3 submission discarded, 4
//! provider aborted.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::error::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use zkoffload::harness::{
    audit_ledger, finish_task, run_benchmark, run_provider, rows_to_csv, BenchPlan, FaultMode,
    KeyStore, ProviderConfig, ProviderOutcome, ScenarioConfig, Variant,
};
use zkoffload::ledger::{Address, GasSchedule, Ledger};
use zkoffload::tsp::{MapRegistry, TaskSpec, Tier, TspMap, TIERS};

const CONSUMER: Address = 1;
const PROVIDER: Address = 2;

#[derive(Parser)]
#[command(name = "zkoffload", version, about = "Offload TSP tasks to a simulated ledger with proof-carrying results")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Key material management.
    Keys {
        #[command(subcommand)]
        command: KeysCommand,
    },
    /// Task lifecycle on a state file.
    Task {
        #[command(subcommand)]
        command: TaskCommand,
    },
    /// Provider-side actions.
    Provider {
        #[command(subcommand)]
        command: ProviderCommand,
    },
    /// Consumer-side actions.
    Consumer {
        #[command(subcommand)]
        command: ConsumerCommand,
    },
    /// Measurements.
    Bench {
        #[command(subcommand)]
        command: BenchCommand,
    },
}

#[derive(Subcommand)]
enum KeysCommand {
    /// Run the trusted setup for each (map, tier) pair and write the keys.
    Setup(KeysSetupArgs),
}

#[derive(Subcommand)]
enum TaskCommand {
    /// Deploy contracts and post a task request on a fresh state file.
    Create(TaskCreateArgs),
}

#[derive(Subcommand)]
enum ProviderCommand {
    /// Solve the posted task and submit the result.
    Run(ProviderRunArgs),
}

#[derive(Subcommand)]
enum ConsumerCommand {
    /// Close the task, collect the solution, and revalidate it.
    Run(ConsumerRunArgs),
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Sweep instance sizes and variants, writing a gas/latency CSV.
    Sweep(BenchSweepArgs),
}

#[derive(Args)]
struct KeysSetupArgs {
    /// Map JSON files; the built-in fixture maps when omitted.
    #[arg(long = "map")]
    maps: Vec<PathBuf>,
    /// Tiers to prepare; every tier covering the map when omitted.
    #[arg(long = "tier")]
    tiers: Vec<u32>,
    /// Output directory for .pk/.vk files.
    #[arg(long, default_value = "keys")]
    out: PathBuf,
}

#[derive(Args)]
struct TaskCreateArgs {
    /// State file to create; refuses to overwrite an existing one.
    #[arg(long)]
    state: PathBuf,
    #[arg(long = "map")]
    maps: Vec<PathBuf>,
    #[arg(long)]
    mapnumber: u64,
    /// Comma-separated city list, e.g. 1,4,9.
    #[arg(long, conflicts_with = "size")]
    instance: Option<String>,
    /// Shorthand for cities 1..=SIZE.
    #[arg(long)]
    size: Option<usize>,
    /// Capacity tier; the smallest tier that fits when omitted.
    #[arg(long)]
    tier: Option<u32>,
    #[arg(long, value_enum, default_value_t = VariantArg::Verified)]
    mode: VariantArg,
    #[arg(long, default_value_t = 100)]
    stake: u64,
    /// Blocks the task must stay open before it can be ended.
    #[arg(long, default_value_t = 3)]
    min_duration: u64,
    /// Key directory; required for verified mode.
    #[arg(long, default_value = "keys")]
    keys: PathBuf,
}

#[derive(Args)]
struct ProviderRunArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long = "map")]
    maps: Vec<PathBuf>,
    #[arg(long, default_value = "keys")]
    keys: PathBuf,
    #[arg(long, default_value_t = 7)]
    solver_seed: u64,
    /// Blinding seed for the proof.
    #[arg(long, default_value = "provider-proof")]
    proof_seed: String,
    #[arg(long, value_enum, default_value_t = FaultArg::None)]
    fault: FaultArg,
    /// Apply the fault on the retry as well.
    #[arg(long)]
    fault_persists: bool,
}

#[derive(Args)]
struct ConsumerRunArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long = "map")]
    maps: Vec<PathBuf>,
}

#[derive(Args)]
struct BenchSweepArgs {
    /// Scenario JSON; see ScenarioConfig in the library docs.
    #[arg(long)]
    config: PathBuf,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the CSV output path.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Override the receipt log output path.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Key cache directory, reused and extended across runs.
    #[arg(long)]
    keys: Option<PathBuf>,
    #[arg(long)]
    no_warmup: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Verified,
    Unverified,
    Onchain,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Verified => Variant::Verified,
            VariantArg::Unverified => Variant::Unverified,
            VariantArg::Onchain => Variant::Onchain,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    None,
    CorruptSum,
    CorruptPath,
    CorruptProof,
    DecoupleHash,
}

impl From<FaultArg> for FaultMode {
    fn from(f: FaultArg) -> FaultMode {
        match f {
            FaultArg::None => FaultMode::None,
            FaultArg::CorruptSum => FaultMode::CorruptSum,
            FaultArg::CorruptPath => FaultMode::CorruptPath,
            FaultArg::CorruptProof => FaultMode::CorruptProof,
            FaultArg::DecoupleHash => FaultMode::DecoupleHash,
        }
    }
}

/// Everything a multi-command session carries between invocations.
#[derive(Serialize, Deserialize)]
struct SessionState {
    ledger: Ledger,
    broker: Address,
    variant: Variant,
    initial_supply: u128,
}

impl SessionState {
    fn load(path: &Path) -> Result<Self, Box<dyn Error>> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read state file {}: {e}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }

    fn save(&self, path: &Path) -> Result<(), Box<dyn Error>> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    /// Audits first so a broken ledger is never written back.
    fn audit_and_save(&self, path: &Path) -> Result<(), Box<dyn Error>> {
        audit_ledger(&self.ledger, self.initial_supply)
            .map_err(|e| format!("invariant check failed: {e}"))?;
        self.save(path)
    }
}

fn load_registry(paths: &[PathBuf]) -> Result<MapRegistry, Box<dyn Error>> {
    if paths.is_empty() {
        return Ok(MapRegistry::fixtures());
    }
    let mut registry = MapRegistry::new();
    for path in paths {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read map {}: {e}", path.display()))?;
        let map: TspMap = serde_json::from_str(&text)?;
        registry.register(map)?;
    }
    Ok(registry)
}

fn parse_instance(args: &TaskCreateArgs) -> Result<Vec<u64>, Box<dyn Error>> {
    match (&args.instance, args.size) {
        (Some(list), None) => list
            .split(',')
            .map(|part| part.trim().parse::<u64>().map_err(Into::into))
            .collect(),
        (None, Some(size)) => Ok((1..=size as u64).collect()),
        _ => Err("give exactly one of --instance or --size".into()),
    }
}

fn cmd_keys_setup(args: KeysSetupArgs) -> Result<ExitCode, Box<dyn Error>> {
    let registry = load_registry(&args.maps)?;
    let mut keys = KeyStore::new();
    for map in registry.maps() {
        let tiers: Vec<u32> = if args.tiers.is_empty() {
            // Smallest set of tiers that covers every instance size on
            // this map.
            TIERS.into_iter().filter(|&t| (t as usize) < map.n + 10).collect()
        } else {
            args.tiers.clone()
        };
        for tier in tiers {
            let prep = keys.ensure(map, tier)?;
            println!(
                "map {} tier {}: {} constraints, circuit {}",
                map.mapnumber,
                tier,
                prep.cs.num_constraints(),
                &hex::encode(prep.cs.digest())[..16],
            );
        }
    }
    keys.save_dir(&args.out)?;
    println!("keys written to {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_task_create(args: TaskCreateArgs) -> Result<ExitCode, Box<dyn Error>> {
    if args.state.exists() {
        return Err(format!(
            "state file {} already exists; this command starts a fresh session",
            args.state.display()
        )
        .into());
    }
    let registry = load_registry(&args.maps)?;
    let map = registry.get(args.mapnumber)?;
    let instance = parse_instance(&args)?;
    let tier = match args.tier {
        Some(t) => Tier::new(t)?,
        None => Tier::for_instance_size(instance.len())?,
    };
    let task = TaskSpec::new(args.mapnumber, instance, tier)?;
    let variant = Variant::from(args.mode);

    let mut ledger = Ledger::new(
        GasSchedule::default(),
        &[(CONSUMER, args.stake), (PROVIDER, 0)],
    );
    let initial_supply = ledger.total_supply();
    let verifier = if variant == Variant::Verified {
        let mut keys = KeyStore::new();
        keys.load_dir(&args.keys, &registry)?;
        let vk = keys.get(args.mapnumber, tier.value())?.vk.clone();
        let (addr, receipt) =
            ledger.deploy_verifier(CONSUMER, vk, args.mapnumber, tier.value())?;
        println!("verifier deployed at {addr} (gas {})", receipt.gas_used);
        Some(addr)
    } else {
        None
    };
    let onchain_map = (variant == Variant::Onchain).then(|| map.clone());
    let (broker, receipt) = ledger.deploy_broker(CONSUMER, onchain_map, verifier)?;
    println!("broker deployed at {broker} (gas {})", receipt.gas_used);
    let receipt = ledger.create_task_request(
        broker,
        CONSUMER,
        args.stake,
        task.clone(),
        variant == Variant::Verified,
        args.min_duration,
    )?;
    println!(
        "task posted: map {} instance {:?} tier {} mode {} stake {} (gas {})",
        task.mapnumber,
        task.instance,
        tier,
        variant.name(),
        args.stake,
        receipt.gas_used
    );

    let state = SessionState {
        ledger,
        broker,
        variant,
        initial_supply,
    };
    state.audit_and_save(&args.state)?;
    println!("state written to {}", args.state.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_provider_run(args: ProviderRunArgs) -> Result<ExitCode, Box<dyn Error>> {
    let registry = load_registry(&args.maps)?;
    let mut state = SessionState::load(&args.state)?;
    let mut keys = KeyStore::new();
    if state.variant == Variant::Verified {
        keys.load_dir(&args.keys, &registry)?;
    }
    let config = ProviderConfig {
        address: PROVIDER,
        variant: state.variant,
        solver_seed: args.solver_seed,
        proof_seed: args.proof_seed.into_bytes(),
        fault: args.fault.into(),
        fault_persists: args.fault_persists,
    };
    let run = run_provider(&mut state.ledger, state.broker, &registry, &keys, &config)?;
    println!(
        "solve: sum {} path {:?} (attempt {})",
        run.tour.sum, run.tour.path, run.attempts
    );
    if state.variant == Variant::Verified {
        println!(
            "witness {:.1} ms, proof {:.1} ms",
            run.witness_time.as_secs_f64() * 1e3,
            run.proof_time.as_secs_f64() * 1e3
        );
    }
    let code = match &run.outcome {
        ProviderOutcome::Accepted { receipt } => {
            println!("submission accepted (tx {}, gas {})", receipt.tx_id, receipt.gas_used);
            ExitCode::SUCCESS
        }
        ProviderOutcome::Discarded { receipt } => {
            println!("submission discarded (tx {}, gas {})", receipt.tx_id, receipt.gas_used);
            ExitCode::from(3)
        }
        ProviderOutcome::Aborted { reason } => {
            println!("aborted without submitting: {reason}");
            ExitCode::from(4)
        }
    };
    state.audit_and_save(&args.state)?;
    Ok(code)
}

fn cmd_consumer_run(args: ConsumerRunArgs) -> Result<ExitCode, Box<dyn Error>> {
    let registry = load_registry(&args.maps)?;
    let mut state = SessionState::load(&args.state)?;
    let outcome = finish_task(&mut state.ledger, state.broker, CONSUMER, &registry)?;
    println!(
        "task ended (tx {}, gas {})",
        outcome.end_receipt.tx_id, outcome.end_receipt.gas_used
    );
    let code = if outcome.refunded {
        println!("no usable solution; stake refunded");
        ExitCode::SUCCESS
    } else {
        let tour = outcome.solution.as_ref().expect("paid tasks store a solution");
        println!("retrieved: sum {} path {:?}", tour.sum, tour.path);
        match outcome.revalidated {
            Some(true) => {
                println!("revalidation passed");
                ExitCode::SUCCESS
            }
            _ => {
                println!("revalidation FAILED: the stored solution is not a valid tour");
                ExitCode::from(2)
            }
        }
    };
    state.audit_and_save(&args.state)?;
    Ok(code)
}

fn cmd_bench_sweep(args: BenchSweepArgs) -> Result<ExitCode, Box<dyn Error>> {
    let config = ScenarioConfig::load(&args.config)?;
    config.validate()?;
    let base = args
        .config
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let registry = config.registry(&base)?;
    let schedule = config.schedule(&base)?;

    let mut plan = BenchPlan::new(
        config.sweeps.clone(),
        config.variants.clone(),
        args.seed.unwrap_or(config.seed),
    );
    plan.stake = config.stake;
    plan.warmup = !args.no_warmup;

    let mut keys = KeyStore::new();
    if let Some(dir) = &args.keys {
        if dir.exists() {
            let loaded = keys.load_dir(dir, &registry)?;
            println!("loaded {loaded} key pairs from {}", dir.display());
        }
    }

    let report = run_benchmark(&registry, &mut keys, schedule, &plan)?;
    audit_ledger(&report.ledger, report.initial_supply)
        .map_err(|e| format!("invariant check failed: {e}"))?;

    if let Some(dir) = &args.keys {
        keys.save_dir(dir)?;
    }
    let csv_path = args
        .csv
        .or_else(|| config.csv_out.as_ref().map(|p| base.join(p)))
        .ok_or("no CSV output path: set csv_out in the scenario or pass --csv")?;
    std::fs::write(&csv_path, rows_to_csv(&report.rows))?;
    println!("{} rows written to {}", report.rows.len(), csv_path.display());
    if let Some(log_path) = args.log.or_else(|| config.log_out.as_ref().map(|p| base.join(p))) {
        std::fs::write(&log_path, report.ledger.export_log_jsonl())?;
        println!(
            "{} receipts written to {}",
            report.ledger.log().len(),
            log_path.display()
        );
    }
    match (report.crossover.s_star, report.crossover.s_double_star) {
        (Some(s), Some(ss)) => println!(
            "onchain checking first costs more than verification at size {s}; \
             stays more expensive from size {ss}"
        ),
        _ => println!("no crossover in the measured range"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Keys { command: KeysCommand::Setup(args) } => cmd_keys_setup(args),
        Command::Task { command: TaskCommand::Create(args) } => cmd_task_create(args),
        Command::Provider { command: ProviderCommand::Run(args) } => cmd_provider_run(args),
        Command::Consumer { command: ConsumerCommand::Run(args) } => cmd_consumer_run(args),
        Command::Bench { command: BenchCommand::Sweep(args) } => cmd_bench_sweep(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
