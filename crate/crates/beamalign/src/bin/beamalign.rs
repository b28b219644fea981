//! Benchmark CLI: scenario runs with CSV output, the self-check
//! property suite, the MAC latency table and parameter sweeps.
//!
//! Flags override values from an optional `key = value` config file.

use beamalign::experiment::{run, verify, ExperimentConfig, Scenario};
use beamalign::mac_latency::{scheme_delay_ms, scheme_frame_budget, MacTimingConfig, Scheme};
use clap::{Args, Parser, Subcommand};
use std::collections::HashMap;
use std::fs;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "beamalign", about = "magnitude-only sparse beam alignment benchmarks", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default, Clone)]
struct Overrides {
    /// config file with one `key = value` per line; flags win
    #[arg(long)]
    config: Option<String>,
    /// single_path | multipath | scaling | latency | theory_validation
    #[arg(long)]
    scenario: Option<String>,
    /// number of array elements / beam directions
    #[arg(long)]
    n: Option<usize>,
    /// sparsity (number of paths)
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "snr-db")]
    snr_db: Option<f64>,
    /// quasi-omni peak-to-trough ripple in dB (0 = ideal flat)
    #[arg(long = "ripple-db")]
    ripple_db: Option<f64>,
    /// beam-combining probes per side in the 802.11ad baseline
    #[arg(long)]
    gamma: Option<usize>,
    /// comma-separated subset of agile,exhaustive,11ad
    #[arg(long)]
    schemes: Option<String>,
    /// CSV output path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
    /// candidate grid refinement factor for off-grid angles
    #[arg(long = "fine-grid")]
    fine_grid: Option<usize>,
    /// bins per hash
    #[arg(long = "b-count")]
    b_count: Option<usize>,
    /// independent hashings per side
    #[arg(long = "l-hashes")]
    l_hashes: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// run a scenario and emit one CSV row per (scheme, trial)
    Run(Overrides),
    /// run the closed-form and Monte-Carlo property suites
    Verify {
        /// 10× fewer Monte-Carlo trials, wider tolerance
        #[arg(long)]
        fast: bool,
    },
    /// print the 802.11ad A-BFT latency model table
    Latency {
        /// comma-separated client counts
        #[arg(long, default_value = "1,4")]
        clients: String,
        #[arg(long, default_value = "4")]
        k: usize,
    },
    /// sweep array sizes and report frame budgets per scheme
    Sweep(Overrides),
}

fn parse_config_file(path: &str) -> Result<HashMap<String, String>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let mut map = HashMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected key = value", ln + 1))?;
        map.insert(key.trim().replace('-', "_"), value.trim().to_string());
    }
    Ok(map)
}

fn parse_from<T: std::str::FromStr>(map: &HashMap<String, String>, key: &str) -> Result<Option<T>, String>
where
    T::Err: std::fmt::Display,
{
    match map.get(key) {
        None => Ok(None),
        Some(v) => v.parse::<T>().map(Some).map_err(|e| format!("config key '{key}': {e}")),
    }
}

fn parse_schemes(s: &str) -> Result<Vec<Scheme>, String> {
    s.split(',')
        .map(|p| Scheme::parse(p.trim()).map_err(|e| e.to_string()))
        .collect()
}

fn build_config(ov: &Overrides) -> Result<ExperimentConfig, String> {
    let file = match &ov.config {
        Some(path) => parse_config_file(path)?,
        None => HashMap::new(),
    };
    let scenario_str = ov
        .scenario
        .clone()
        .or_else(|| file.get("scenario").cloned())
        .unwrap_or_else(|| "single_path".into());
    let scenario = Scenario::parse(&scenario_str).map_err(|e| e.to_string())?;
    let mut cfg = ExperimentConfig::for_scenario(scenario);

    // file values first, then flags on top
    if let Some(v) = parse_from(&file, "n")? {
        cfg.n = v;
    }
    if let Some(v) = parse_from(&file, "k")? {
        cfg.k = v;
    }
    if let Some(v) = parse_from(&file, "b_count")? {
        cfg.b_count = v;
    }
    if let Some(v) = parse_from(&file, "l_hashes")? {
        cfg.l_hashes = v;
    }
    if let Some(v) = parse_from(&file, "trials")? {
        cfg.trials = v;
    }
    if let Some(v) = parse_from(&file, "seed")? {
        cfg.seed = v;
    }
    if let Some(v) = parse_from(&file, "snr_db")? {
        cfg.snr_db = v;
    }
    if let Some(v) = parse_from(&file, "ripple_db")? {
        cfg.ripple_db = v;
    }
    if let Some(v) = parse_from(&file, "gamma")? {
        cfg.gamma = v;
    }
    if let Some(v) = parse_from(&file, "fine_grid")? {
        cfg.fine_grid_factor = v;
    }
    if let Some(v) = file.get("schemes") {
        cfg.schemes = parse_schemes(v)?;
    }
    if let Some(v) = file.get("out") {
        cfg.out = Some(v.clone());
    }

    if let Some(v) = ov.n {
        cfg.n = v;
    }
    if let Some(v) = ov.k {
        cfg.k = v;
    }
    if let Some(v) = ov.b_count {
        cfg.b_count = v;
    }
    if let Some(v) = ov.l_hashes {
        cfg.l_hashes = v;
    }
    if let Some(v) = ov.trials {
        cfg.trials = v;
    }
    if let Some(v) = ov.seed {
        cfg.seed = v;
    }
    if let Some(v) = ov.snr_db {
        cfg.snr_db = v;
    }
    if let Some(v) = ov.ripple_db {
        cfg.ripple_db = v;
    }
    if let Some(v) = ov.gamma {
        cfg.gamma = v;
    }
    if let Some(v) = ov.fine_grid {
        cfg.fine_grid_factor = v;
    }
    if let Some(s) = &ov.schemes {
        cfg.schemes = parse_schemes(s)?;
    }
    if let Some(o) = &ov.out {
        cfg.out = Some(o.clone());
    }
    Ok(cfg)
}

fn run_scenario(ov: &Overrides) -> Result<(), String> {
    let cfg = build_config(ov)?;
    let started = std::time::Instant::now();
    let out = run(&cfg).map_err(|e| e.to_string())?;
    match &cfg.out {
        Some(path) => {
            fs::write(path, &out.csv).map_err(|e| format!("cannot write {path}: {e}"))?;
            eprint!("{}", out.summary);
            eprintln!("  wrote {path} in {:.1} s", started.elapsed().as_secs_f64());
        }
        None => {
            print!("{}", out.csv);
            eprint!("{}", out.summary);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(ov) => run_scenario(ov),
        Command::Sweep(ov) => {
            // sweep = run with the scaling scenario unless overridden
            let mut cfg_ov = ov.clone();
            cfg_ov.scenario = Some(ov.scenario.clone().unwrap_or_else(|| "scaling".into()));
            run_scenario(&cfg_ov)
        }
        Command::Verify { fast } => {
            let checks = verify(*fast);
            let mut ok = true;
            for c in &checks {
                println!("{} {:<45} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                ok &= c.passed;
            }
            if ok {
                Ok(())
            } else {
                Err("one or more checks failed".into())
            }
        }
        Command::Latency { clients, k } => (|| {
            let mac = MacTimingConfig::default();
            let clients: Vec<usize> = clients
                .split(',')
                .map(|c| c.trim().parse().map_err(|e| format!("--clients: {e}")))
                .collect::<Result<_, String>>()?;
            println!("{:<6} {:>10} {:>10}  {}", "size", "11ad fr", "agile fr", "delay ms per client count");
            for n in [8usize, 16, 64, 128, 256] {
                let mut cells = String::new();
                for &c in &clients {
                    cells.push_str(&format!(
                        "  [{} cl: 11ad {:>8.2}  agile {:>6.2}]",
                        c,
                        scheme_delay_ms(Scheme::Standard11ad, n, c, &mac),
                        scheme_delay_ms(Scheme::Agile, n, c, &mac),
                    ));
                }
                println!(
                    "{:<6} {:>10} {:>10}{}",
                    n,
                    scheme_frame_budget(Scheme::Standard11ad, n, *k, 4),
                    scheme_frame_budget(Scheme::Agile, n, *k, 4),
                    cells
                );
            }
            Ok(())
        })(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
