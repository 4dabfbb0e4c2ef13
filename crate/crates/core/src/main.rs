use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rust_decimal::Decimal;

use aria_core::agent::{AgentCondition, AgentDeps};
use aria_core::game::GameConfig;
use aria_core::session::{read_log, SessionManager};
use aria_core::sim::{self, ScriptedPlayer, VerifyOptions};

#[derive(Parser)]
#[command(name = "aria", version, about = "Affective prisoner's dilemma agent: simulator, verifier and session service")]
struct Cli {
    /// Directory holding lexicon.csv, phrases.json, embeddings.txt and stopwords.txt.
    #[arg(long, global = true, env = "ARIA_DATA_DIR")]
    data_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one match against a scripted player and print the JSON report.
    Match(MatchArgs),
    /// Every condition against every player; writes CSV.
    Tournament(TournamentArgs),
    /// Check the appraisal and coping tables and the move-equivalence oracle.
    Verify(VerifyArgs),
    /// Re-run a session log and compare agent outputs.
    Replay(ReplayArgs),
    /// Run the session service.
    Serve(ServeArgs),
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long, default_value = "occ")]
    condition: AgentCondition,
    /// e.g. always-take:anger, alternate:echo, moves=give2,take1:random
    #[arg(long, default_value = "always-give:joy")]
    player: ScriptedPlayer,
    #[arg(long, default_value_t = 25)]
    rounds: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TournamentArgs {
    #[arg(long = "condition", value_delimiter = ',', default_value = "occ,emotionless,random")]
    conditions: Vec<AgentCondition>,
    /// Player specs; repeat the flag for several players.
    #[arg(long = "player")]
    players: Vec<ScriptedPlayer>,
    #[arg(long, default_value_t = 1)]
    repetitions: u32,
    #[arg(long, default_value_t = 25)]
    rounds: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Random histories checked after the exhaustive pass.
    #[arg(long, default_value_t = 10_000)]
    random: u64,
    #[arg(long, default_value_t = 25)]
    random_length: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ReplayArgs {
    log: PathBuf,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, env = "ARIA_PORT", default_value_t = 8080)]
    port: u16,
    #[arg(long, env = "ARIA_BIND", default_value = "127.0.0.1")]
    bind: std::net::IpAddr,
    /// Seed for condition assignment and default session seeds.
    #[arg(long, env = "ARIA_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "ARIA_ROUNDS_PLAYED", default_value_t = 25)]
    rounds_played: u32,
    #[arg(long, env = "ARIA_ROUNDS_ANNOUNCED", default_value_t = 30)]
    rounds_announced: u32,
    #[arg(long, env = "ARIA_BONUS_PER_POINT", default_value = "0.05")]
    bonus_per_point: Decimal,
    #[arg(long, env = "ARIA_LOG_DIR", default_value = "logs")]
    log_dir: PathBuf,
}

fn load_deps(dir: Option<&Path>) -> Result<AgentDeps, String> {
    match dir {
        Some(d) => AgentDeps::from_dir(d).map_err(|e| format!("{}: {e}", d.display())),
        None => Ok(AgentDeps::bundled()),
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, String> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    let deps = load_deps(cli.data_dir.as_deref())?;
    match cli.command {
        Command::Match(a) => {
            let report = sim::run_match(a.condition, &a.player, a.rounds, a.seed, &deps).map_err(|e| e.to_string())?;
            let mut out = output(a.out.as_deref())?;
            out.write_all(report.to_json().as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| e.to_string())?;
            Ok(true)
        }
        Command::Tournament(a) => {
            let rows = sim::tournament(&a.conditions, &a.players, a.repetitions, a.rounds, a.seed, &deps)
                .map_err(|e| e.to_string())?;
            sim::write_tournament_csv(&rows, output(a.out.as_deref())?).map_err(|e| e.to_string())?;
            Ok(true)
        }
        Command::Verify(a) => {
            let opts = VerifyOptions {
                depth: a.depth,
                random_sequences: a.random,
                random_length: a.random_length,
                seed: a.seed,
            };
            let report = sim::verify_oracles(&deps.lexicon, opts).map_err(|e| e.to_string())?;
            println!(
                "appraisal cells: {}  coping cases: {}  sequences: {} (depth {})  random: {}  decisions: {}",
                report.appraisal_cells,
                report.coping_cases,
                report.sequences,
                report.depth,
                report.random_sequences,
                report.decisions
            );
            for v in &report.violations {
                println!("VIOLATION {v}");
            }
            println!("{}", if report.passed() { "PASS" } else { "FAIL" });
            Ok(report.passed())
        }
        Command::Replay(a) => {
            let lines = read_log(&a.log).map_err(|e| e.to_string())?;
            let report = sim::replay_log(&lines, &deps).map_err(|e| e.to_string())?;
            println!("session {} ({}): {} rounds", report.session_id, report.condition, report.rounds);
            for m in &report.mismatches {
                println!("MISMATCH {m}");
            }
            println!("{}", if report.passed() { "PASS" } else { "FAIL" });
            Ok(report.passed())
        }
        Command::Serve(a) => {
            let defaults = GameConfig {
                rounds_played: a.rounds_played,
                rounds_announced: a.rounds_announced,
                bonus_per_point: a.bonus_per_point,
                rng_seed: a.seed,
            };
            let manager = SessionManager::new(deps.shared(), defaults, Some(a.log_dir)).map_err(|e| e.to_string())?;
            let recovered = manager.recover_all().map_err(|e| e.to_string())?;
            tracing::info!(recovered, "sessions recovered");
            let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
            runtime
                .block_on(aria_core::server::serve(SocketAddr::new(a.bind, a.port), manager.into()))
                .map_err(|e| e.to_string())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("aria: {e}");
            ExitCode::from(2)
        }
    }
}
