//! Command-line front end.
//!
//! Exit codes: 0 success, 1 theorem counterexample, 2 usage or parse error,
//! 3 resource cap exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::equilibrium::{
    equilibria, iesds, is_equilibrium, random_applicable_game, verify_importance_of_being_different,
};
use crate::error::Error;
use crate::game::{ContributionProfile, Game};
use crate::rational::Rational;
use crate::scoring::{binned_top_difference, divergence, mean_motivation, score};
use crate::sweep::{
    ranked_table, run_sweep, write_binned_csv, write_sweep_csv, write_table_csv, SweepConfig,
    TypeUniverse,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAP: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "achievement",
    version,
    about = "Multi-goal achievement game analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Types {
    /// A, O and B (two goals only).
    Abo,
    /// Every base-3 type code.
    Full,
}

impl From<Types> for TypeUniverse {
    fn from(t: Types) -> Self {
        match t {
            Types::Abo => TypeUniverse::Abo,
            Types::Full => TypeUniverse::FullGrid,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a game, list its equilibria and score it.
    Analyze {
        /// Game document (JSON).
        game: PathBuf,
        /// Contribution profile document to evaluate against the game.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Motivation given to the injected defector in the DD score.
        #[arg(long, default_value = "1/4")]
        defector: Rational,
        /// Also print the strategies surviving iterated strict-dominance elimination.
        #[arg(long)]
        iesds: bool,
    },
    /// Print the ranked score table for every group composition.
    Table {
        /// Group size N.
        #[arg(long)]
        agents: usize,
        /// Number of goals M.
        #[arg(long)]
        goals: usize,
        /// Motivation of the injected defector in the DD score.
        #[arg(long, default_value = "1/4")]
        delta: Rational,
        /// Agent types to draw groups from.
        #[arg(long, value_enum, default_value_t = Types::Abo)]
        types: Types,
        /// Worker threads; output is identical for any count.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score every group composition and write the sweep and binned CSVs.
    Sweep {
        /// Group size N.
        #[arg(long)]
        agents: usize,
        /// Number of goals M.
        #[arg(long)]
        goals: usize,
        /// Motivation of the injected defector in the DD score.
        #[arg(long, default_value = "1/4")]
        delta: Rational,
        /// Groups with divergence at or above this are divergent.
        #[arg(long, default_value = "1/2")]
        cutoff: Rational,
        /// Width of the mean-motivation bins.
        #[arg(long, default_value = "0.1")]
        bin_width: Rational,
        /// Worker threads; output is identical for any count.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Agent types to draw groups from.
        #[arg(long, value_enum, default_value_t = Types::Full)]
        types: Types,
        /// Run even when the estimated work exceeds the cap.
        #[arg(long)]
        allow_large: bool,
        /// Directory for sweep_nN_mM.csv and binned_nN_mM.csv.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Check the diagonal-equilibrium theorem on seeded random games.
    VerifyTheorem {
        /// Agents per game (N = M); at least 2.
        #[arg(long)]
        agents: usize,
        /// Number of random games.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Seed for the game generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Cap(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze {
            game,
            profile,
            defector,
            iesds,
        } => cmd_analyze(&game, profile.as_deref(), &defector, iesds, out),
        Command::Table {
            agents,
            goals,
            delta,
            types,
            workers,
            out: path,
        } => cmd_table(
            agents,
            goals,
            delta,
            types.into(),
            workers,
            path.as_deref(),
            out,
        ),
        Command::Sweep {
            agents,
            goals,
            delta,
            cutoff,
            bin_width,
            workers,
            types,
            allow_large,
            out_dir,
        } => {
            let config = SweepConfig {
                delta,
                type_universe: types.into(),
                divergence_cutoff: cutoff,
                bin_width,
                worker_count: workers,
                allow_large,
                ..SweepConfig::new(agents, goals)
            };
            cmd_sweep(&config, &out_dir, out)
        }
        Command::VerifyTheorem {
            agents,
            trials,
            seed,
        } => cmd_verify_theorem(agents, trials, seed, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Cap(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_CAP
        }
        Err(Failure::Verification) => EXIT_VERIFICATION_FAILED,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn list(values: &[Rational]) -> String {
    values
        .iter()
        .map(Rational::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn matrix(values: &[Vec<Rational>]) -> String {
    let rows: Vec<String> = values.iter().map(|r| format!("[{}]", list(r))).collect();
    format!("[{}]", rows.join(", "))
}

fn show_score(name: &str, v: &Option<Rational>) -> String {
    match v {
        Some(v) => format!("{name} {} ({})", v.to_fixed(2), v),
        None => format!("{name} n/a"),
    }
}

fn cmd_analyze(
    path: &Path,
    profile_path: Option<&Path>,
    defector: &Rational,
    show_iesds: bool,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let text = read(path)?;
    let game = Game::from_json_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let class = game.classify();
    let costs = game.costs();

    writeln!(
        out,
        "game: {} agents, {} goals, costs {{{}}}, thresholds ({})",
        game.n_agents(),
        game.n_goals(),
        list(costs.as_slice()),
        list(game.thresholds())
    )?;
    writeln!(out, "motivations: {}", matrix(game.motivations()))?;
    let even = match &class.universal_threshold {
        Some(g) => format!("yes (g = {g})"),
        None => "no".to_string(),
    };
    writeln!(
        out,
        "classification: individual purpose: {}, even: {even}, extreme: {}",
        yes_no(class.is_individual_purpose),
        yes_no(class.is_extreme)
    )?;

    let set = equilibria(&game)?;
    for (j, cols) in set.per_goal.iter().enumerate() {
        let fraction = set.achieved_fractions()[j]
            .as_ref()
            .map_or("n/a".to_string(), Rational::to_string);
        writeln!(
            out,
            "goal {}: {} equilibrium column(s), achieved fraction {fraction}",
            j + 1,
            cols.len()
        )?;
        for c in cols {
            let values: Vec<Rational> = c.column.iter().map(|&k| costs[k].clone()).collect();
            let status = if c.achieves_goal {
                "achieved"
            } else {
                "not achieved"
            };
            writeln!(out, "  ({}) {status}", list(&values))?;
        }
    }
    writeln!(out, "equilibria: {}", set.total_count())?;

    let report = score(&game, defector)?;
    writeln!(
        out,
        "scores: {}, {}, {}, {}",
        show_score("MGA", &report.mga),
        show_score("ALL", &report.all_score),
        show_score("DD", &report.dd),
        show_score("VL", &report.vl)
    )?;
    if report.no_equilibrium_scenarios > 0 {
        writeln!(
            out,
            "scenarios without equilibrium: {}",
            report.no_equilibrium_scenarios
        )?;
    }
    writeln!(
        out,
        "divergence: {}, mean motivation: {}",
        divergence(&game),
        mean_motivation(&game)
    )?;

    if show_iesds {
        let survivors = iesds(&game)?;
        writeln!(out, "dominance elimination: {} round(s)", survivors.rounds)?;
        for (i, strategies) in survivors.per_agent.iter().enumerate() {
            let shown: Vec<String> = strategies
                .iter()
                .map(|s| {
                    let v: Vec<Rational> = s.iter().map(|&k| costs[k].clone()).collect();
                    format!("({})", list(&v))
                })
                .collect();
            writeln!(out, "  agent {}: {}", i + 1, shown.join(" "))?;
        }
    }

    if let Some(p) = profile_path {
        let text = read(p)?;
        let profile = ContributionProfile::from_json_str(&game, &text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
        writeln!(out, "profile: {}", matrix(&profile.values(&game)))?;
        for i in 0..game.n_agents() {
            writeln!(
                out,
                "  agent {} utility {}",
                i + 1,
                game.utility(&profile, i)?
            )?;
        }
        for j in 0..game.n_goals() {
            let status = if game.goal_achieved(&profile, j)? {
                "achieved"
            } else {
                "not achieved"
            };
            writeln!(out, "  goal {} {status}", j + 1)?;
        }
        let verdict = if is_equilibrium(&game, &profile)? {
            "is an equilibrium"
        } else {
            "not an equilibrium"
        };
        writeln!(out, "profile {verdict}")?;
    }
    Ok(())
}

fn cmd_table(
    agents: usize,
    goals: usize,
    delta: Rational,
    types: TypeUniverse,
    workers: usize,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let config = SweepConfig {
        delta,
        type_universe: types,
        worker_count: workers,
        ..SweepConfig::new(agents, goals)
    };
    let rows = ranked_table(&config)?;
    match path {
        Some(p) => write_table_csv(&rows, fs::File::create(p)?)?,
        None => write_table_csv(&rows, out)?,
    }
    Ok(())
}

fn cmd_sweep(config: &SweepConfig, out_dir: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let records = run_sweep(config).map_err(|e| match e {
        Error::CapExceeded { estimate, cap, .. } => Failure::Cap(format!(
            "sweep of {} agents and {} goals needs an estimated {estimate} column evaluations \
             (cap {cap}); pass --allow-large to run it anyway",
            config.n_agents, config.n_goals
        )),
        other => other.into(),
    })?;
    let bins = binned_top_difference(&records, &config.bin_width, &config.divergence_cutoff)?;
    fs::create_dir_all(out_dir)?;
    let stem = format!("n{}_m{}", config.n_agents, config.n_goals);
    let sweep_path = out_dir.join(format!("sweep_{stem}.csv"));
    let binned_path = out_dir.join(format!("binned_{stem}.csv"));
    write_sweep_csv(&records, fs::File::create(&sweep_path)?)?;
    write_binned_csv(&bins, fs::File::create(&binned_path)?)?;
    writeln!(out, "{} records -> {}", records.len(), sweep_path.display())?;
    writeln!(out, "{} bins -> {}", bins.len(), binned_path.display())?;
    Ok(())
}

fn cmd_verify_theorem(
    agents: usize,
    trials: usize,
    seed: u64,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    if agents < 2 {
        return Err(Failure::Usage(format!(
            "--agents must be at least 2 for the theorem to say anything, got {agents}"
        )));
    }
    if trials < 1 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    for trial in 1..=trials {
        let game = random_applicable_game(agents, &mut rng)?;
        let report = verify_importance_of_being_different(&game)?;
        let ok = report.applicable && report.holds();
        if ok {
            passed += 1;
            let eq = report
                .equilibria
                .first()
                .map(|p| matrix(&p.values(&game)))
                .unwrap_or_default();
            writeln!(
                out,
                "trial {trial}/{trials}: pass (g = {}, unique diagonal equilibrium {eq})",
                game.threshold(0)
            )?;
        } else {
            writeln!(
                out,
                "trial {trial}/{trials}: FAIL (applicable {}, unique {}, diagonal {}, all goals {}, {} equilibria)",
                report.applicable,
                report.unique_equilibrium,
                report.equilibrium_is_diagonal,
                report.all_goals_achieved,
                report.equilibrium_count
            )?;
            writeln!(out, "{}", game.to_json_pretty())?;
        }
    }
    writeln!(out, "{passed}/{trials} passed")?;
    if passed == trials {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
