use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use discord_dynamics::config::{Method, Overrides, Scenario, ScenarioConfig};
use discord_dynamics::{output, run_scenario, run_selftest, AppError};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Fig1a,
    Fig1b,
    Fig2,
    Fig3,
    Custom,
    /// Run the invariant suites and print a JSON summary.
    Selftest,
}

/// Discord and entanglement of two coupled qubits in thermal reservoirs.
#[derive(Debug, Parser)]
#[command(name = "discord-dynamics", version)]
struct Cli {
    command: Command,
    /// Exchange coupling J
    #[arg(long = "J")]
    j: Option<f64>,
    /// DM interaction strength D
    #[arg(long = "D")]
    d: Option<f64>,
    /// Qubit frequency
    #[arg(long)]
    omega: Option<f64>,
    /// Mean reservoir occupation
    #[arg(long)]
    nbar: Option<f64>,
    /// Spontaneous emission rate
    #[arg(long)]
    gamma: Option<f64>,
    /// Reservoir mode frequency, used with --t-res to set nbar
    #[arg(long)]
    omega_e: Option<f64>,
    /// Reservoir temperature, used with --omega-e to set nbar
    #[arg(long)]
    t_res: Option<f64>,
    /// Final time of the trajectory
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of time samples, endpoints included
    #[arg(long)]
    steps: Option<usize>,
    /// ground, separable10 or file:PATH
    #[arg(long)]
    initial: Option<String>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// D grid for fig3 as a:b:s
    #[arg(long)]
    d_range: Option<String>,
    /// Temperature grid for fig3 as a:b:s
    #[arg(long)]
    t_range: Option<String>,
    /// Output CSV path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with any of the settings above
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write <out>.gp
    #[arg(long)]
    emit_gnuplot: bool,
    /// Worker threads; 0 uses all cores
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            j: self.j,
            d: self.d,
            omega: self.omega,
            nbar: self.nbar,
            gamma: self.gamma,
            omega_e: self.omega_e,
            t_res: self.t_res,
            t_max: self.t_max,
            steps: self.steps,
            initial: self.initial.clone(),
            method: self.method,
            d_range: self.d_range.clone(),
            t_range: self.t_range.clone(),
            out: self.out.clone(),
            emit_gnuplot: self.emit_gnuplot.then_some(true),
        }
    }
}

fn scenario(c: Command) -> Option<Scenario> {
    match c {
        Command::Fig1a => Some(Scenario::Fig1a),
        Command::Fig1b => Some(Scenario::Fig1b),
        Command::Fig2 => Some(Scenario::Fig2),
        Command::Fig3 => Some(Scenario::Fig3),
        Command::Custom => Some(Scenario::Custom),
        Command::Selftest => None,
    }
}

fn run(cli: &Cli) -> Result<u8, AppError> {
    let Some(scenario) = scenario(cli.command) else {
        let report = run_selftest();
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        for name in &report.failed {
            eprintln!("selftest: {name} FAILED");
        }
        return Ok(if report.passed { 0 } else { 3 });
    };
    let file = match &cli.config {
        Some(path) => Overrides::load(path)?,
        None => Overrides::default(),
    };
    let cfg = ScenarioConfig::resolve(scenario, cli.overrides().over(file))?;
    let table = run_scenario(&cfg)?;
    output::emit(&cfg, &table)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global().expect("thread pool");
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
