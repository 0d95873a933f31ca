use std::fmt::Write as _;
use std::time::Instant;

use lee_toric::interleaver::{simulate, BurstModel, InterleavingMap, SimulationStats};
use serde::Serialize;

use crate::format::OutputFormat;
use crate::{CliError, Report, SimulateArgs};

#[derive(Debug, Serialize)]
pub struct Metadata {
    pub wall_seconds: f64,
    pub threads: usize,
}

#[derive(Debug, Serialize)]
pub struct SimulationRecord {
    #[serde(flatten)]
    pub stats: SimulationStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

fn histogram(h: &std::collections::BTreeMap<u32, u64>) -> String {
    let parts: Vec<String> = h.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(" ")
    }
}

pub fn run(args: &SimulateArgs) -> Result<Report, CliError> {
    let model = BurstModel::parse(&args.model, args.count)?;
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let map = InterleavingMap::new(args.n)?;
    let pool = match args.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?,
        None => rayon::ThreadPoolBuilder::new().build().map_err(|e| CliError::Usage(e.to_string()))?,
    };
    let start = Instant::now();
    let stats = pool.install(|| simulate(&map, model, args.trials, args.seed))?;
    let wall = start.elapsed().as_secs_f64();
    let digits = args.output.precision as usize;

    let body = match args.output.format {
        OutputFormat::Json => {
            let metadata = args.timing.then(|| Metadata { wall_seconds: wall, threads: pool.current_num_threads() });
            let record = SimulationRecord { stats: stats.clone(), metadata };
            serde_json::to_string_pretty(&record).expect("serializable") + "\n"
        }
        OutputFormat::Csv => {
            let mut s = String::from("n,q,model,trials,seed,successes,success_rate,max_tally,mean_max_tally\n");
            writeln!(
                s,
                "{},{},{},{},{},{},{:.digits$},{},{:.digits$}",
                stats.n,
                stats.q,
                stats.model,
                stats.trials,
                stats.master_seed,
                stats.successes,
                stats.success_rate,
                stats.max_tally,
                stats.mean_max_tally
            )
            .unwrap();
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "model {}, n = {}, q = {}, trials {}, seed {}",
                stats.model, stats.n, stats.q, stats.trials, stats.master_seed
            )
            .unwrap();
            writeln!(s, "success rate {:.digits$} ({}/{})", stats.success_rate, stats.successes, stats.trials).unwrap();
            writeln!(s, "errors per trial {:.digits$}", stats.mean_errors_per_trial).unwrap();
            writeln!(s, "max tally {}, mean worst-codeword tally {:.digits$}", stats.max_tally, stats.mean_max_tally)
                .unwrap();
            writeln!(s, "codewords by error count   {}", histogram(&stats.tally_histogram)).unwrap();
            writeln!(s, "trials by worst codeword   {}", histogram(&stats.max_tally_histogram)).unwrap();
            if !stats.failed_trials.is_empty() {
                let ids: Vec<String> = stats.failed_trials.iter().map(u64::to_string).collect();
                writeln!(s, "first failing trials       {}", ids.join(" ")).unwrap();
            }
            writeln!(s, "wall time {wall:.3} s, worker threads {}", pool.current_num_threads()).unwrap();
            s
        }
    };

    let perfect = stats.successes == stats.trials;
    Ok(Report {
        body,
        passed: !args.expect_perfect || perfect,
        failure: (!perfect).then(|| format!("success rate {} below 1", stats.success_rate)),
    })
}
