use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use toml::{Table, Value};

use fracpr_cli::config::{parse_value, Command, RunConfig};
use fracpr_cli::error::CliError;
use fracpr_cli::{commands, output};

#[derive(Parser, Debug)]
#[command(name = "fracpr", version, about = "Fractional-order Pinsky-Rinzel neuron simulations and analyses")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Integrate the model and write the state trajectory.
    Simulate(Overrides),
    /// Post-transient somatic peak values over a parameter sweep.
    Bifurcate(Overrides),
    /// Equilibrium stability over a parameter range, with stable intervals.
    StabilityScan(Overrides),
    /// Locate one equilibrium and print its spectrum.
    Equilibrium(Overrides),
    /// Spike statistics for a simulated or recorded trajectory.
    SpikeMetrics(Overrides),
}

#[derive(Args, Debug, Default)]
struct Overrides {
    /// TOML file with any of the configuration keys.
    #[arg(short, long)]
    config: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    step_size: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_end: Option<f64>,
    /// Memory length in steps; 0 keeps the full history.
    #[arg(long)]
    window: Option<i64>,
    #[arg(long)]
    corrector_iterations: Option<i64>,
    #[arg(long = "i-sapp", allow_hyphen_values = true)]
    i_sapp: Option<f64>,
    #[arg(long = "i-dapp", allow_hyphen_values = true)]
    i_dapp: Option<f64>,
    #[arg(long = "g-c", allow_hyphen_values = true)]
    g_c: Option<f64>,
    /// alpha, i-sapp, i-dapp or g-c.
    #[arg(long)]
    param: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    to: Option<f64>,
    #[arg(long)]
    steps: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    increment: Option<f64>,
    /// warm-start or fixed.
    #[arg(long)]
    seeding: Option<String>,
    /// fixed or constant-h-alpha.
    #[arg(long)]
    step_rule: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    transient_cut: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    threshold: Option<f64>,
    /// smooth or non_smooth.
    #[arg(long)]
    gates: Option<String>,
    /// Append the ionic current columns to `simulate` output.
    #[arg(long)]
    currents: bool,
    /// Trajectory CSV for spike-metrics.
    #[arg(long)]
    input: Option<String>,
    /// Output path; `-` writes to stdout.
    #[arg(short, long)]
    output: Option<String>,
    /// Worker threads for scans; 0 reads FRACPR_JOBS or uses all cores.
    #[arg(long)]
    jobs: Option<i64>,
    /// Override any key, e.g. `--set g_c=2.1`. Applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Print the merged configuration as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

impl Overrides {
    fn flags(&self) -> Vec<(&'static str, Value)> {
        let mut out = Vec::new();
        let mut f = |k: &'static str, v: Option<f64>| {
            if let Some(v) = v {
                out.push((k, Value::Float(v)));
            }
        };
        f("alpha", self.alpha);
        f("step_size", self.step_size);
        f("t_end", self.t_end);
        f("i_sapp", self.i_sapp);
        f("i_dapp", self.i_dapp);
        f("g_c", self.g_c);
        f("from", self.from);
        f("to", self.to);
        f("increment", self.increment);
        f("transient_cut", self.transient_cut);
        f("threshold", self.threshold);
        let ints = [
            ("window", self.window),
            ("corrector_iterations", self.corrector_iterations),
            ("steps", self.steps),
            ("jobs", self.jobs),
        ];
        out.extend(ints.into_iter().filter_map(|(k, v)| v.map(|v| (k, Value::Integer(v)))));
        let strings = [
            ("param", &self.param),
            ("seeding", &self.seeding),
            ("step_rule", &self.step_rule),
            ("gates", &self.gates),
            ("input", &self.input),
            ("output", &self.output),
        ];
        out.extend(strings.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, Value::String(v)))));
        if self.currents {
            out.push(("currents", Value::Boolean(true)));
        }
        out
    }
}

fn merged_config(command: Command, o: &Overrides) -> Result<RunConfig, CliError> {
    let mut table = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            text.parse::<Table>()
                .map_err(|e| CliError::Config { key: "config".into(), message: format!("{path}: {e}") })?
        }
        None => Table::new(),
    };
    for (k, v) in o.flags() {
        table.insert(k.into(), v);
    }
    for item in &o.set {
        let (k, v) = item.split_once('=').ok_or_else(|| CliError::Config {
            key: item.clone(),
            message: "--set expects KEY=VALUE".into(),
        })?;
        table.insert(k.trim().into(), parse_value(v.trim()));
    }
    table.insert("command".into(), Value::String(command.name().into()));
    RunConfig::from_table(table)
}

fn jobs(cfg: &RunConfig) -> usize {
    if cfg.jobs > 0 {
        return cfg.jobs;
    }
    std::env::var("FRACPR_JOBS").ok().and_then(|v| v.parse().ok()).unwrap_or(0)
}

fn run(command: Command, o: &Overrides) -> Result<(), CliError> {
    let cfg = merged_config(command, o)?;
    if o.dump_config {
        print!("{}", cfg.to_toml_string());
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs(&cfg))
        .build()
        .map_err(|e| CliError::Compute(e.to_string()))?;
    let (out, err) = match pool.install(|| commands::execute(&cfg)) {
        Ok(out) => (out, None),
        Err((out, e)) => (out, Some(e)),
    };
    let has_output = !out.table.as_str().is_empty();
    if has_output {
        output::write_output(&cfg.output, &out, command.name())?;
    }
    if let Some(e) = err {
        return Err(e);
    }
    if !out.failed_cells.is_empty() {
        return Err(CliError::Compute(format!("{} cell(s) failed; see manifest", out.failed_cells.len())));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, o) = match &cli.command {
        Sub::Simulate(o) => (Command::Simulate, o),
        Sub::Bifurcate(o) => (Command::Bifurcate, o),
        Sub::StabilityScan(o) => (Command::StabilityScan, o),
        Sub::Equilibrium(o) => (Command::Equilibrium, o),
        Sub::SpikeMetrics(o) => (Command::SpikeMetrics, o),
    };
    match run(command, o) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
