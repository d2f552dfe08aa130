//! `ccs`: load or generate games, classify networks, compute optima,
//! construct and verify equilibria, report efficiency metrics and export
//! DOT.
//!
//! Exit status: 0 success, 1 domain error, 2 usage or input error,
//! 3 resource cap exceeded. Errors go to stderr as a JSON object.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use ccs_core::equilibria::{
    construct_se, enumerate_equilibria, verify_ne_with, verify_se_with, SearchOptions,
};
use ccs_core::format::{game_from_json, game_to_json, profile_from_json, to_dot};
use ccs_core::instances::{self, RandomClass};
use ccs_core::metrics::compute_metrics;
use ccs_core::optimal::solve_optimal;
use ccs_core::topology::{classify, decompose_sp, find_forbidden_embedding, SpDecomposition};
use ccs_core::{Cost, Error, Game, Limits, StrategyProfile};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "ccs", version, about = "Capacitated cost-sharing network games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug)]
struct Opts {
    /// Number of agents for generated instances.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Rational ε for generated instances ("p/q").
    #[arg(long, global = true, value_parser = parse_rational)]
    eps: Option<Cost>,
    /// Rational R for generated instances ("p/q").
    #[arg(long, global = true, value_parser = parse_rational)]
    r: Option<Cost>,
    /// Seed for random instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Approximate edge budget for random instances.
    #[arg(long, global = true, default_value_t = 6)]
    size: usize,
    /// Largest coalition searched when testing for SE.
    #[arg(long, global = true)]
    max_coalition: Option<usize>,
    /// Maximum number of profiles or joint deviations scanned.
    #[arg(long, global = true)]
    profile_cap: Option<u128>,
    /// Worker threads for enumeration (output is identical for any value).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Topology flags, SP decomposition and a forbidden-pattern witness.
    Classify { input: Option<PathBuf> },
    /// Strategy paths per agent class with cost and bottleneck capacity.
    Paths { input: Option<PathBuf> },
    /// Minimum social cost with a witness profile.
    SolveOpt { input: Option<PathBuf> },
    /// Construct a SE on an SPP network.
    ConstructSe { input: Option<PathBuf> },
    /// Check a profile for NE and SE, reporting a deviation if any.
    Verify {
        input: Option<PathBuf>,
        /// Profile file: a list of edge-id lists, one per agent.
        #[arg(long)]
        profile: PathBuf,
    },
    /// All NE and SE (one profile per orbit for symmetric games).
    Enumerate { input: Option<PathBuf> },
    /// PoA, PoS, SPoA, SPoS with witnesses and bound checks.
    Metrics { input: Option<PathBuf> },
    /// Emit an instance as game JSON.
    ///
    /// Tags: fig1, fig2, fig4, fig5, fig6, fig7, fig8, walkthrough,
    /// no-se (needs a game file whose network is used), random-<class>
    /// (parallel-edges, parallel-paths, spp, ep, sp, general),
    /// random-asym-single, random-asym-multi.
    Gen {
        tag: String,
        input: Option<PathBuf>,
    },
    /// Graphviz DOT with "p/q | c" edge labels.
    EmitDot { input: Option<PathBuf> },
}

fn parse_rational(s: &str) -> Result<Cost, String> {
    s.parse::<Cost>().map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Core(Error::Input(_)) => 2,
            Failure::Core(Error::Domain(_)) => 1,
            Failure::Core(Error::Resource { .. }) => 3,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Usage(m) => json!({"error": {"kind": "usage", "message": m}}),
            Failure::Core(e @ Error::Resource { what, required, cap }) => json!({"error": {
                "kind": e.kind(),
                "message": e.to_string(),
                "what": what,
                "required": required.to_string(),
                "cap": cap.to_string(),
            }}),
            Failure::Core(e) => json!({"error": {"kind": e.kind(), "message": e.to_string()}}),
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
        }
        _ => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn load_game(path: &Option<PathBuf>) -> Result<Game, Failure> {
    Ok(game_from_json(&read_input(path)?)?)
}

fn search_options(opts: &Opts) -> SearchOptions {
    let mut limits = Limits::default();
    if let Some(cap) = opts.profile_cap {
        limits.profile_cap = cap;
    }
    SearchOptions {
        max_coalition: opts.max_coalition,
        jobs: opts.jobs.max(1),
        limits,
    }
}

fn profile_json(game: &Game, p: &StrategyProfile) -> Value {
    json!({
        "paths": p.to_ids(game.network()),
        "costs": game.agent_costs(p).iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "social_cost": game.social_cost(p).to_string(),
    })
}

fn classify_cmd(game: &Game) -> Result<Value, Failure> {
    let net = game.network();
    let class = classify(net)?;
    let mut out = serde_json::to_value(class).expect("serializable");
    let decomposition = match decompose_sp(net)? {
        SpDecomposition::Sp(tree) => json!(tree.to_string()),
        SpDecomposition::NotSp(_) => Value::Null,
    };
    out["decomposition"] = decomposition;
    out["embedding"] = serde_json::to_value(find_forbidden_embedding(net)).expect("serializable");
    Ok(out)
}

fn paths_cmd(game: &Game, opts: &Opts) -> Result<Value, Failure> {
    let net = game.network();
    let limits = search_options(opts).limits;
    let space = game.strategy_space(&limits)?;
    let classes: Vec<Value> = space
        .classes
        .iter()
        .enumerate()
        .map(|(k, paths)| {
            let agents: Vec<usize> = (0..game.n()).filter(|&i| space.agent_class[i] == k).collect();
            let (s, t) = game.terminals(agents[0]);
            json!({
                "source": net.node_name(s),
                "sink": net.node_name(t),
                "agents": agents,
                "paths": paths.iter().map(|p| json!({
                    "edges": p.edge_ids(net),
                    "cost": p.cost(net).to_string(),
                    "bottleneck": p.bottleneck(net),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({ "classes": classes }))
}

fn solve_opt_cmd(game: &Game, opts: &Opts) -> Result<Value, Failure> {
    let opt = solve_optimal(game, &search_options(opts).limits)?;
    Ok(json!({
        "cost": opt.cost.to_string(),
        "used_edges": opt.used_edges,
        "profile": profile_json(game, &opt.profile),
    }))
}

fn construct_cmd(game: &Game, opts: &Opts) -> Result<Value, Failure> {
    let (construction, p) = construct_se(game)?;
    let so = search_options(opts);
    let witness = verify_se_with(game, &p, &so)?;
    Ok(json!({
        "construction": construction,
        "profile": profile_json(game, &p),
        "verified_se": witness.is_none(),
    }))
}

fn verify_cmd(game: &Game, profile: &PathBuf, opts: &Opts) -> Result<Value, Failure> {
    let text = fs::read_to_string(profile)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", profile.display())))?;
    let p = profile_from_json(game, &text)?;
    let net = game.network();
    if !game.is_feasible(&p) {
        return Ok(json!({
            "feasible": false,
            "profile": profile_json(game, &p),
            "ne": false,
            "se": false,
            "ne_witness": Value::Null,
            "se_witness": Value::Null,
        }));
    }
    let so = search_options(opts);
    let ne = verify_ne_with(game, &p, &so.limits)?;
    let se = verify_se_with(game, &p, &so)?;
    Ok(json!({
        "feasible": true,
        "profile": profile_json(game, &p),
        "ne": ne.is_none(),
        "se": se.is_none(),
        "ne_witness": ne.map(|w| w.report(net)),
        "se_witness": se.map(|w| w.report(net)),
        "max_coalition": so.max_coalition,
    }))
}

fn enumerate_cmd(game: &Game, opts: &Opts) -> Result<Value, Failure> {
    let sets = enumerate_equilibria(game, &search_options(opts))?;
    let list = |v: &[StrategyProfile]| v.iter().map(|p| profile_json(game, p)).collect::<Vec<_>>();
    Ok(json!({
        "symmetric": game.is_symmetric(),
        "ne": list(&sets.ne),
        "se": list(&sets.se),
        "ne_count": sets.ne.len(),
        "se_count": sets.se.len(),
        "stats": {
            "profiles_scanned": sets.stats.profiles_scanned.to_string(),
            "feasible_profiles": sets.stats.feasible_profiles.to_string(),
            "cap_hit": sets.stats.cap_hit,
        },
    }))
}

fn metrics_cmd(game: &Game, opts: &Opts) -> Result<Value, Failure> {
    let report = compute_metrics(game, &search_options(opts))?;
    let mut v = serde_json::to_value(&report).expect("serializable");
    v["stats"] = json!({
        "profiles_scanned": report.stats.profiles_scanned.to_string(),
        "feasible_profiles": report.stats.feasible_profiles.to_string(),
        "cap_hit": report.stats.cap_hit,
    });
    Ok(v)
}

fn gen_cmd(tag: &str, input: &Option<PathBuf>, opts: &Opts) -> Result<Game, Failure> {
    let eps = opts.eps.unwrap_or_else(instances::default_eps);
    let r = opts.r.unwrap_or_else(instances::default_r);
    let game = match tag {
        "fig1" => instances::build_fig1(),
        "fig2" => instances::build_fig2_braess(),
        "fig4" => instances::build_fig4_sp_spoa(opts.n.unwrap_or(3), eps)?,
        "fig5" => instances::build_fig5_unbounded_spoa(r)?,
        "fig6" => instances::build_fig6_sp_spos(opts.n.unwrap_or(4), eps)?,
        "fig7" => instances::build_fig7_unbounded_spos(r)?,
        "fig8" => instances::build_fig8_asymmetric(r)?,
        "walkthrough" => instances::build_walkthrough(),
        "no-se" => {
            if input.is_none() {
                return Err(Failure::Usage("gen no-se needs a game file for its network".into()));
            }
            instances::build_no_se_game(load_game(input)?.network())?
        }
        "random-asym-single" | "random-asym-multi" => instances::random_asymmetric_spp(
            opts.n.unwrap_or(2),
            opts.size,
            tag == "random-asym-single",
            opts.seed,
        )?,
        _ => match tag.strip_prefix("random-") {
            Some(class) => {
                let class: RandomClass = class.parse()?;
                instances::random_game(class, opts.n.unwrap_or(2), opts.size, opts.seed)?
            }
            None => return Err(Failure::Usage(format!("unknown instance tag {tag:?}"))),
        },
    };
    Ok(game)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let opts = &cli.opts;
    let value = match &cli.command {
        Command::Classify { input } => classify_cmd(&load_game(input)?)?,
        Command::Paths { input } => paths_cmd(&load_game(input)?, opts)?,
        Command::SolveOpt { input } => solve_opt_cmd(&load_game(input)?, opts)?,
        Command::ConstructSe { input } => construct_cmd(&load_game(input)?, opts)?,
        Command::Verify { input, profile } => verify_cmd(&load_game(input)?, profile, opts)?,
        Command::Enumerate { input } => enumerate_cmd(&load_game(input)?, opts)?,
        Command::Metrics { input } => metrics_cmd(&load_game(input)?, opts)?,
        Command::Gen { tag, input } => return Ok(game_to_json(&gen_cmd(tag, input, opts)?) + "\n"),
        Command::EmitDot { input } => return Ok(to_dot(&load_game(input)?)),
    };
    Ok(serde_json::to_string_pretty(&value).expect("serializable") + "\n")
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Usage(format!("cannot write stdout: {e}")))
        }
    }
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", serde_json::to_string(&f.to_json()).expect("serializable"));
    ExitCode::from(f.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Failure::Usage(e.render().to_string().trim().to_string())),
    };
    match run(&cli).and_then(|text| emit(&text, &cli.opts.output)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => fail(&f),
    }
}
