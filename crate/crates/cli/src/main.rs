use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use log::LevelFilter;

use posslog::frontend::alloc::CountingAlloc;
use posslog::frontend::{
    bench, generate_dataset, parse_program, parse_rules, parse_task, render_interpretation,
    render_program, render_task, Algorithm, BenchConfig, Profile, TaskBody, TaskDocument,
};
use posslog::induction::existence_obstacle;
use posslog::semantics::{cn, poss_stable_models, reduct};
use posslog::variants::{
    lsm_existence, partial_obstacles, solve_complete, solve_partial, verify_partial,
};
use posslog::{
    ilpsm, ilpsmmin, verify_solution, Caps, Error, Outcome, PossProgram, SolutionReport,
    SolveConfig,
};

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc;

#[derive(Parser)]
#[command(
    name = "posslog",
    version,
    about = "Stable models and rule induction for possibilistic programs"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print fixpoint iterates and search events.
    #[arg(long, global = true)]
    trace: bool,
    /// Maximum atoms for stable-model enumeration.
    #[arg(long, global = true, value_name = "N")]
    cap_atoms: Option<usize>,
    /// Maximum number of total interpretations to enumerate.
    #[arg(long, global = true, value_name = "N")]
    cap_total_interps: Option<u128>,
    /// Candidate budget for the minimal search.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the poss-stable models of the background.
    Psm { file: PathBuf },
    /// Decide whether the task has a solution.
    Exists { file: PathBuf },
    /// Construct a solution.
    Ilpsm { file: PathBuf },
    /// Construct a solution with the fewest rules.
    Ilpsmmin { file: PathBuf },
    /// Make the positives exactly the poss-stable models.
    Complete {
        file: PathBuf,
        #[arg(long)]
        min: bool,
    },
    /// Solve an ordinary task over plain interpretations.
    Lsm {
        file: PathBuf,
        #[arg(long)]
        min: bool,
    },
    /// Solve a task with partial examples.
    Partial {
        file: PathBuf,
        #[arg(long)]
        min: bool,
    },
    /// Write a random dataset.
    Gen {
        #[arg(long)]
        profile: Profile,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a solver over every `.task` file of a directory.
    Bench {
        dir: PathBuf,
        #[arg(long, default_value = "ilpsmmin")]
        algo: Algorithm,
        /// Per-task wall-clock limit in seconds.
        #[arg(long, default_value_t = 600.0)]
        time_limit: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Per-task allocation budget in bytes.
        #[arg(long)]
        memory_budget: Option<usize>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Check a hypothesis file against a task.
    Verify {
        file: PathBuf,
        #[arg(long)]
        hypothesis: PathBuf,
    },
}

/// What a command reports besides its output.
enum Verdict {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.global.trace {
        LevelFilter::Debug
    } else {
        LevelFilter::Warn
    };
    env_logger::Builder::new()
        .filter_level(LevelFilter::Warn)
        .filter_module("posslog", level)
        .format_timestamp(None)
        .init();
    match run(&cli) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_limit() { 3 } else { 2 })
        }
    }
}

fn caps(global: &Global) -> posslog::Result<Caps> {
    let mut caps = Caps::from_env()?;
    if let Some(n) = global.cap_atoms {
        caps.atoms = n;
    }
    if let Some(n) = global.cap_total_interps {
        caps.total_interps = n;
    }
    if let Some(n) = global.budget {
        caps.budget = n;
    }
    Ok(caps)
}

fn read(path: &Path) -> posslog::Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn load(path: &Path) -> posslog::Result<TaskDocument> {
    parse_task(&read(path)?)
}

fn print_program(program: &PossProgram, doc: &TaskDocument, plain: bool) {
    if plain {
        for r in program.rules() {
            println!("{r}");
        }
    } else {
        print!("{}", render_program(program, &doc.lattice));
    }
}

fn report(result: SolutionReport, doc: &TaskDocument, plain: bool) -> posslog::Result<Verdict> {
    match result.outcome {
        Outcome::Solution(h) => {
            print_program(&h, doc, plain);
            Ok(Verdict::Yes)
        }
        Outcome::Fail => {
            println!("% no solution");
            Ok(Verdict::No)
        }
        Outcome::Inconclusive => Err(Error::BudgetExhausted(result.stats.candidates)),
    }
}

fn run(cli: &Cli) -> posslog::Result<Verdict> {
    let config = SolveConfig::with_caps(caps(&cli.global)?);
    match &cli.command {
        Command::Psm { file } => {
            let doc = load(file)?;
            let (program, lattice) = match &doc.body {
                TaskBody::Total { background, .. } => (background.clone(), doc.lattice.clone()),
                TaskBody::Partial(t) => (
                    posslog::lift(t.background(), &doc.lattice),
                    doc.lattice.clone(),
                ),
            };
            let models = poss_stable_models(&program, &config.caps)?;
            for m in &models {
                if cli.global.trace {
                    for (i, step) in cn(&reduct(&program, &m.projection()))?
                        .iterates
                        .iter()
                        .enumerate()
                    {
                        println!("% T^{i} = {}", render_interpretation(step, &lattice));
                    }
                }
                println!("{}", render_interpretation(m, &lattice));
            }
            if models.is_empty() {
                println!("% no poss-stable models");
            }
            Ok(Verdict::Yes)
        }
        Command::Exists { file } => {
            let doc = load(file)?;
            let exists = match &doc.body {
                TaskBody::Partial(t) => {
                    let branches = partial_obstacles(t, &config.caps)?;
                    for (i, (_, obstacle)) in branches.iter().enumerate() {
                        match obstacle {
                            Some(o) => println!("% branch {i}: {o:?}"),
                            None => println!("% branch {i}: ok"),
                        }
                    }
                    branches.iter().any(|(_, o)| o.is_none())
                }
                TaskBody::Total { .. } => {
                    let obstacle = existence_obstacle(&doc.to_induction_task()?, &config.caps)?;
                    if let Some(o) = obstacle {
                        println!("% {o:?}");
                    }
                    obstacle.is_none()
                }
            };
            println!("exists: {exists}");
            Ok(if exists { Verdict::Yes } else { Verdict::No })
        }
        Command::Ilpsm { file } => {
            let doc = load(file)?;
            report(ilpsm(&doc.to_induction_task()?, &config)?, &doc, false)
        }
        Command::Ilpsmmin { file } => {
            let doc = load(file)?;
            report(ilpsmmin(&doc.to_induction_task()?, &config)?, &doc, false)
        }
        Command::Complete { file, min } => {
            let doc = load(file)?;
            let task = doc.to_induction_task()?;
            if !task.negatives().is_empty() {
                return Err(Error::InvalidTask(
                    "complete tasks take no negative examples".into(),
                ));
            }
            let result = solve_complete(
                task.background(),
                task.positives(),
                task.alphabet(),
                task.lattice(),
                *min,
                &config,
            )?;
            report(result, &doc, false)
        }
        Command::Lsm { file, min } => {
            let doc = load(file)?;
            let task = doc.to_induction_task()?;
            if !lsm_existence(&task)? {
                println!("% no solution");
                return Ok(Verdict::No);
            }
            let result = if *min {
                ilpsmmin(&task, &config)?
            } else {
                ilpsm(&task, &config)?
            };
            report(result, &doc, true)
        }
        Command::Partial { file, min } => {
            let doc = load(file)?;
            let task = doc.to_partial_task()?;
            report(solve_partial(&task, *min, &config)?, &doc, true)
        }
        Command::Gen {
            profile,
            seed,
            count,
            out,
        } => {
            fs::create_dir_all(out)?;
            let docs = generate_dataset(*profile, *seed, *count);
            for doc in &docs {
                let name = doc.name.as_deref().expect("generated tasks are named");
                fs::write(out.join(format!("{name}.task")), render_task(doc))?;
            }
            println!("wrote {} {profile} tasks", docs.len());
            Ok(Verdict::Yes)
        }
        Command::Bench {
            dir,
            algo,
            time_limit,
            csv,
            json,
            memory_budget,
            workers,
        } => {
            let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
                .map(|e| e.map(|e| e.path()))
                .collect::<Result<_, _>>()?;
            paths.retain(|p| p.extension().is_some_and(|x| x == "task"));
            paths.sort();
            let docs = paths
                .iter()
                .map(|p| {
                    let mut doc = load(p)?;
                    if doc.name.is_none() {
                        doc.name = p.file_stem().map(|s| s.to_string_lossy().into_owned());
                    }
                    Ok(doc)
                })
                .collect::<posslog::Result<Vec<_>>>()?;
            if !time_limit.is_finite() || *time_limit <= 0.0 {
                return Err(Error::InvalidTask(
                    "--time-limit must be a positive number of seconds".into(),
                ));
            }
            let bench_config = BenchConfig {
                algorithm: *algo,
                time_limit: Duration::from_secs_f64(*time_limit),
                memory_budget: *memory_budget,
                workers: *workers,
                caps: config.caps.clone(),
            };
            let result = bench(&docs, &bench_config);
            if let Some(path) = csv {
                fs::write(path, result.to_csv()?)?;
            }
            if let Some(path) = json {
                fs::write(path, result.to_json())?;
            }
            print!("{}", result.table());
            Ok(Verdict::Yes)
        }
        Command::Verify { file, hypothesis } => {
            let doc = load(file)?;
            let text = read(hypothesis)?;
            let valid = match &doc.body {
                TaskBody::Partial(task) => {
                    verify_partial(task, &parse_rules(&text)?, &config.caps)?
                }
                TaskBody::Total { .. } => verify_solution(
                    &doc.to_induction_task()?,
                    &parse_program(&text, &doc.lattice)?,
                ),
            };
            println!("{}", if valid { "valid" } else { "invalid" });
            Ok(if valid { Verdict::Yes } else { Verdict::No })
        }
    }
}
