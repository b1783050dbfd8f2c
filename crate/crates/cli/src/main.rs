//! Batch experiment runner for the coordinated spatial reuse simulator.
//!
//! Subcommands:
//! - `run`: execute a configured experiment over many seeds and write
//!   `trace_<seed>.csv`, `aggregate.csv`, `summary.csv`, and `fairness.csv`
//! - `tune`: random-search hyperparameters for one algorithm
//! - `sweep-d`: sweep the square side and report the best static
//!   concurrent-transmitter count per distance
//! - `report`: re-aggregate previously written traces

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use csr_core::bandit::Algorithm;
use csr_core::experiment::output::{
    read_traces, write_aggregate, write_fairness, write_summary, write_trace, write_tuning_report,
    SummaryRow,
};
use csr_core::experiment::{
    aggregate, fairness_report, run_experiment, tune, ExperimentConfig, ScenarioSource, SearchSpec,
    TuneEnv,
};
use csr_core::rng::{substream, StreamId};
use csr_core::scenario::square_scenario;
use csr_core::scheduler::oracle_best;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "csr-sim",
    version,
    about = "Multi-AP coordinated spatial reuse simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiment over all seeds and write CSV results.
    Run {
        /// Experiment config (TOML); defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Override the number of seeds.
        #[arg(long)]
        seeds: Option<u64>,
        /// Override the seed list, comma separated.
        #[arg(long, value_delimiter = ',')]
        seed_list: Option<Vec<u64>>,
    },
    /// Random-search hyperparameters for one algorithm.
    Tune {
        /// Number of candidates to evaluate.
        #[arg(long)]
        budget: usize,
        /// Algorithm: epsilon-greedy | softmax | ucb | thompson.
        #[arg(long)]
        algo: Algorithm,
        /// Experiment config supplying channel/PHY overrides.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Seed of the candidate-sampling stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep the square side d and evaluate the static strategies.
    SweepD {
        #[arg(long = "d-min")]
        d_min: f64,
        #[arg(long = "d-max")]
        d_max: f64,
        #[arg(long, default_value_t = 2.5)]
        step: f64,
        /// Monte-Carlo TXOPs per (d, k) point.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Experiment config supplying channel/PHY/scenario overrides.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Aggregate existing trace_<seed>.csv files.
    Report {
        /// Directory containing trace files.
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.99)]
        ci_level: f64,
        #[arg(long, default_value_t = 50)]
        smoothing_window: usize,
    },
}

fn load_config(path: &Option<PathBuf>) -> Result<ExperimentConfig> {
    match path {
        Some(path) => {
            ExperimentConfig::from_file(path).with_context(|| format!("loading {}", path.display()))
        }
        None => Ok(ExperimentConfig::default()),
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            config,
            out,
            seeds,
            seed_list,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(n) = seeds {
                cfg.run.seeds = n;
                cfg.run.seed_list = None;
            }
            if let Some(list) = seed_list {
                cfg.run.seed_list = Some(list);
            }
            let resolved = cfg.resolve()?;
            std::fs::create_dir_all(&out)?;

            let traces = run_experiment(&resolved)?;
            for trace in &traces {
                write_trace(&out, trace, resolved.txop.duration_s)?;
            }
            let mean_rate_bps = if traces.len() >= 2 {
                let agg = aggregate(&traces, resolved.ci_level, resolved.smoothing_window)?;
                write_aggregate(&out.join("aggregate.csv"), &agg, resolved.txop.duration_s)?;
                agg.overall_mean_bps
            } else {
                // Confidence intervals need at least two runs.
                println!("single seed: skipping aggregate.csv");
                traces[0].mean_rate_bps()
            };
            let fairness = fairness_report(&traces)?;
            write_fairness(&out.join("fairness.csv"), &fairness)?;
            write_summary(
                &out.join("summary.csv"),
                &[SummaryRow {
                    label: resolved.label.clone(),
                    mean_rate_bps,
                }],
            )?;
            println!(
                "{}: {} runs x {} TXOPs, mean rate {:.2} Mb/s",
                resolved.label,
                traces.len(),
                resolved.txops,
                mean_rate_bps / 1e6
            );
            println!("results in {}", out.display());
        }
        Command::Tune {
            budget,
            algo,
            config,
            out,
            seed,
        } => {
            let resolved = load_config(&config)?.resolve()?;
            std::fs::create_dir_all(&out)?;
            let spec = SearchSpec::default_for(algo);
            let env = TuneEnv::from_config(&resolved);
            let mut rng = substream(seed, StreamId::Tuner);
            let outcome = tune(&spec, budget, &env, &mut rng)?;
            write_tuning_report(&out.join("tuning_report.csv"), &spec, &outcome)?;
            let best = outcome.best_theta();
            println!(
                "{}: best of {} candidates scores {:.2} Mb/s",
                algo.name(),
                budget,
                outcome.best_score_bps() / 1e6
            );
            println!(
                "  epsilon={} decay={} temperature={} ucb_c={} ts_prior_var={} \
                 ts_obs_var={} discount={}",
                best.epsilon,
                best.epsilon_decay,
                best.temperature,
                best.ucb_c,
                best.ts_prior_var,
                best.ts_obs_var,
                best.discount
            );
        }
        Command::SweepD {
            d_min,
            d_max,
            step,
            samples,
            config,
            out,
        } => {
            anyhow::ensure!(d_min > 0.0 && d_max >= d_min && step > 0.0, "bad d range");
            let cfg = load_config(&config)?;
            let resolved = cfg.resolve()?;
            std::fs::create_dir_all(&out)?;
            // Station offset and walls follow the square-scenario config;
            // channel and PHY overrides apply as configured.
            let (offset, walls) = match &resolved.scenario {
                ScenarioSource::Square {
                    station_offset,
                    walls,
                    ..
                } => (*station_offset, walls.clone()),
                _ => (2.0, Vec::new()),
            };
            let mut rng = substream(0, StreamId::Reception);
            let mut csv = String::from("d,k,mean_rate_mbps,is_best\n");
            let mut d = d_min;
            while d <= d_max + 1e-9 {
                let topo = square_scenario(d, offset, walls.clone())?;
                let sweep = oracle_best(
                    &topo,
                    &resolved.channel,
                    &resolved.table,
                    &resolved.txop,
                    samples,
                    &mut rng,
                )?;
                for (i, rate) in sweep.mean_rates_bps.iter().enumerate() {
                    writeln!(
                        csv,
                        "{},{},{},{}",
                        d,
                        i + 1,
                        rate / 1e6,
                        if i + 1 == sweep.best_k { 1 } else { 0 }
                    )
                    .expect("string write");
                }
                println!(
                    "d={:5.1} m: best k={} ({:.1} Mb/s)",
                    d,
                    sweep.best_k,
                    sweep.mean_rates_bps[sweep.best_k - 1] / 1e6
                );
                d += step;
            }
            std::fs::write(out.join("sweep_d.csv"), csv)?;
            println!("sweep written to {}", out.join("sweep_d.csv").display());
        }
        Command::Report {
            traces,
            out,
            ci_level,
            smoothing_window,
        } => {
            let runs = read_traces(&traces)?;
            std::fs::create_dir_all(&out)?;
            let agg = aggregate(&runs, ci_level, smoothing_window)?;
            // Trace files do not carry τ; report uses the default TXOP
            // duration for the sim-time column.
            let tau = csr_core::txop::TxopConfig::default().duration_s;
            write_aggregate(&out.join("aggregate.csv"), &agg, tau)?;
            write_summary(
                &out.join("summary.csv"),
                &[SummaryRow {
                    label: format!("report ({} traces)", runs.len()),
                    mean_rate_bps: agg.overall_mean_bps,
                }],
            )?;
            println!(
                "aggregated {} traces x {} TXOPs, mean {:.2} Mb/s",
                runs.len(),
                runs[0].len(),
                agg.overall_mean_bps / 1e6
            );
        }
    }
    Ok(())
}
