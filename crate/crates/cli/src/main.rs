mod dot;
mod input;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use eve_core::automata::DEFAULT_AUTOMATON_CAP;
use eve_core::equilibrium::{Analysis, Answer, Options, Verdict};
use eve_core::game::{check_bisimilar, run_profile, LtlGame, DEFAULT_STATE_CAP};
use eve_core::ltl::LtlFormula;
use eve_core::solver::PunishmentResult;
use eve_core::synthesis::{synthesize_profile, transducer_doc, transducer_dot, validate_equilibrium_with_cap};

use input::{load_game, load_query, InputKind, QuerySource};
use report::Report;

/// Nash equilibrium analysis of multi-player games with LTL goals.
#[derive(Parser, Debug)]
#[command(name = "eve", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Does the game have a Nash equilibrium?
    Solve(#[command(flatten)] Common),
    /// Does some Nash equilibrium run satisfy the query?
    ENash {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        query: Query,
    },
    /// Do all Nash equilibrium runs satisfy the query?
    ANash {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        query: Query,
    },
    /// Write one strategy per player forming a Nash equilibrium.
    Synthesize {
        #[command(flatten)]
        common: Common,
        /// Directory for the strategy files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Overwrite existing strategy files.
        #[arg(long)]
        force: bool,
    },
    /// Are two games bisimilar?
    Bisim {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP, value_parser = positive)]
        max_states: usize,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// A `.srml` module system or an `.arena` file.
    input: PathBuf,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Worker threads.
    #[arg(long, value_parser = positive)]
    jobs: Option<usize>,
    /// Single-threaded, and no timings in the report.
    #[arg(long)]
    deterministic: bool,
    /// Bound on the reachable states of the input and of the parity game.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP, value_parser = positive)]
    max_states: usize,
    /// Bound on the states of each goal automaton.
    #[arg(long, default_value_t = DEFAULT_AUTOMATON_CAP, value_parser = positive)]
    max_automaton: usize,
    /// Write the game graph, with the witness run in bold, as DOT. With
    /// `synthesize`, each strategy is also written next to it as
    /// `<stem>-<player>.dot`.
    #[arg(long)]
    export_dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Query {
    /// The query formula.
    #[arg(long, conflicts_with = "phi_file")]
    phi: Option<String>,
    /// A file holding the query formula.
    #[arg(long)]
    phi_file: Option<PathBuf>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Task {
    Solve,
    ENash,
    ANash,
    Synthesize,
}

impl Task {
    fn name(self) -> &'static str {
        match self {
            Task::Solve => "solve",
            Task::ENash => "e-nash",
            Task::ANash => "a-nash",
            Task::Synthesize => "synthesize",
        }
    }
}

/// Everything one analysis run needs, resolved from the command line.
#[derive(Debug)]
struct RunConfig {
    task: Task,
    input: PathBuf,
    kind: InputKind,
    query: Option<QuerySource>,
    options: Options,
    deterministic: bool,
    json: bool,
    export_dot: Option<PathBuf>,
    out: Option<PathBuf>,
    force: bool,
}

impl RunConfig {
    fn new(task: Task, c: Common, q: Option<Query>) -> anyhow::Result<Self> {
        let query = q.map(|q| match (q.phi, q.phi_file) {
            (Some(f), _) => QuerySource::Inline(f),
            (None, Some(p)) => QuerySource::File(p),
            (None, None) => QuerySource::Input,
        });
        let jobs = if c.deterministic { Some(1) } else { c.jobs };
        Ok(RunConfig {
            task,
            kind: InputKind::of(&c.input)?,
            input: c.input,
            query,
            options: Options { max_states: c.max_states, max_automaton: c.max_automaton, jobs },
            deterministic: c.deterministic,
            json: c.json,
            export_dot: c.export_dot,
            out: None,
            force: false,
        })
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("EVE_LOG")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(c) => RunConfig::new(Task::Solve, c, None).and_then(|cfg| run(&cfg)),
        Command::ENash { common: c, query: q } => RunConfig::new(Task::ENash, c, Some(q)).and_then(|cfg| run(&cfg)),
        Command::ANash { common: c, query: q } => RunConfig::new(Task::ANash, c, Some(q)).and_then(|cfg| run(&cfg)),
        Command::Synthesize { common, out, force } => RunConfig::new(Task::Synthesize, common, None).and_then(|mut cfg| {
            cfg.out = Some(out);
            cfg.force = force;
            run(&cfg)
        }),
        Command::Bisim { first, second, json, max_states } => bisim(&first, &second, json, max_states),
    };
    match result {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Runs one analysis and prints its report; `Ok(true)` on a positive answer.
fn run(cfg: &RunConfig) -> anyhow::Result<bool> {
    let start = Instant::now();
    let game = load_game(&cfg.input, cfg.options.max_states)?;
    log::info!(
        "{} ({:?}): {} players, {} states",
        cfg.input.display(),
        cfg.kind,
        game.cgs.num_players(),
        game.cgs.num_states()
    );
    let phi = cfg.query.as_ref().map(|q| load_query(q, &game)).transpose()?;
    let analysis = Analysis::new(&game, cfg.options.clone())?;
    let verdict = decide(&analysis, cfg.task, phi.as_ref())?;

    if cfg.task == Task::Synthesize && verdict.is_yes() {
        write_strategies(cfg, &analysis, &verdict)?;
    }
    if let Some(path) = &cfg.export_dot {
        fs::write(path, dot::game_dot(&game, verdict.lasso.as_ref())).with_context(|| path.display().to_string())?;
    }
    let elapsed = (!cfg.deterministic).then(|| start.elapsed());
    let yes = verdict.is_yes();
    let report = Report::new(cfg.task.name(), &game, verdict, elapsed);
    if cfg.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.text(&game));
    }
    Ok(yes)
}

fn decide(analysis: &Analysis, task: Task, phi: Option<&LtlFormula>) -> anyhow::Result<Verdict> {
    Ok(match (task, phi) {
        (Task::ENash, Some(phi)) => analysis.decide(Some(&analysis.query_automaton(phi)?)),
        (Task::ANash, Some(phi)) => {
            let d = analysis.query_automaton(&LtlFormula::not(phi.clone()))?;
            let mut v = analysis.decide(Some(&d));
            v.answer = if v.is_yes() { Answer::No } else { Answer::Yes };
            v
        }
        _ => analysis.decide(None),
    })
}

fn write_strategies(cfg: &RunConfig, analysis: &Analysis, verdict: &Verdict) -> anyhow::Result<()> {
    let game = analysis.game;
    let cgs = &game.cgs;
    let out = cfg.out.as_deref().unwrap_or(Path::new("."));
    let files: Vec<PathBuf> = cgs.players.iter().map(|p| out.join(format!("{p}.json"))).collect();
    if !cfg.force {
        if let Some(existing) = files.iter().find(|f| f.exists()) {
            anyhow::bail!("{} exists; pass --force to overwrite", existing.display());
        }
    }

    let witness = verdict.product_lasso.as_ref().context("verdict has no witness")?;
    let n = cgs.num_players();
    let pun: Vec<&PunishmentResult> =
        (0..n).filter(|j| !verdict.winners.contains(j)).map(|j| analysis.punishment(j)).collect();
    let profile = synthesize_profile(&analysis.parity, &verdict.winners, witness, &pun)?;
    check_profile(game, &profile.transducers, verdict, cfg.options.max_automaton)?;

    fs::create_dir_all(out).with_context(|| out.display().to_string())?;
    for (i, json) in files.iter().enumerate() {
        let doc = transducer_doc(&analysis.parity.cgs, &profile, i);
        fs::write(json, serde_json::to_string_pretty(&doc)? + "\n").with_context(|| json.display().to_string())?;
        log::info!("wrote {}", json.display());
    }
    if let Some(path) = &cfg.export_dot {
        for (i, p) in cgs.players.iter().enumerate() {
            let dot = transducer_dot_path(path, p);
            fs::write(&dot, transducer_dot(&analysis.parity.cgs, &profile, i))
                .with_context(|| dot.display().to_string())?;
        }
    }
    if !cfg.json {
        eprintln!("wrote strategies for {n} players ({} states) to {}", profile.state_names.len(), out.display());
    }
    Ok(())
}

/// `game.dot` with player `x` becomes `game-x.dot`.
fn transducer_dot_path(game_dot: &Path, player: &str) -> PathBuf {
    let stem = game_dot.file_stem().and_then(|s| s.to_str()).unwrap_or("game");
    game_dot.with_file_name(format!("{stem}-{player}.dot"))
}

fn check_profile(
    game: &LtlGame,
    profile: &[eve_core::game::StrategyTransducer],
    verdict: &Verdict,
    cap: usize,
) -> anyhow::Result<()> {
    let outcome = run_profile(&game.cgs, profile)?;
    if Some(&outcome) != verdict.lasso.as_ref() {
        anyhow::bail!("synthesized strategies do not reproduce the witness run");
    }
    if !validate_equilibrium_with_cap(game, profile, cap)? {
        anyhow::bail!("synthesized strategies are not an equilibrium");
    }
    Ok(())
}

fn bisim(first: &Path, second: &Path, json: bool, max_states: usize) -> anyhow::Result<bool> {
    let a = load_game(first, max_states)?;
    let b = load_game(second, max_states)?;
    let same = check_bisimilar(&a.cgs, &a.labels, &b.cgs, &b.labels)?;
    if json {
        println!("{}", serde_json::json!({ "bisimilar": same }));
    } else {
        println!("{}", if same { "BISIMILAR" } else { "NOT BISIMILAR" });
    }
    Ok(same)
}
