use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eitkerr::parallel::Execution;
use eitkerr_cli::{run, CliError, Command, CommandOutput, Config};

#[derive(Parser, Debug)]
#[command(
    name = "eitkerr",
    version,
    about = "EIT cross-Kerr sweeps and QND probe analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// TOML config file with dotted section keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path; side files share its stem. Stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (1 runs sequentially).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Material preset applied before the config file.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Override a config key, e.g. `--set lambda.omega1=0.3`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Print every config key with its resolved value and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// ρ_cb against two-photon detuning, single emitter and line-averaged.
    Spectrum,
    /// First-order probe dispersion over an Ω1 × Ω2 grid.
    DispersionMap,
    /// Maximum pulse bandwidth at fixed absorption over an Ω1 × Ω2 grid.
    BandwidthMap,
    /// J(d) and the optimal reduced detuning.
    Jcurve,
    /// T_ab, T_cd and phase shifts against probe photon number.
    Scalings,
    /// Probe states, overlaps and Q-functions for each signal photon number.
    Qnd,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Spectrum => Command::Spectrum,
            Cmd::DispersionMap => Command::DispersionMap,
            Cmd::BandwidthMap => Command::BandwidthMap,
            Cmd::Jcurve => Command::Jcurve,
            Cmd::Scalings => Command::Scalings,
            Cmd::Qnd => Command::Qnd,
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<Config, CliError> {
    let mut config = Config::default();
    if let Some(preset) = &cli.preset {
        config.apply_preset(preset)?;
    }
    if let Some(path) = &cli.config {
        config.apply_file(path)?;
    }
    for s in &cli.set {
        config.set_str(s)?;
    }
    Ok(config)
}

fn side_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn write_output(out: Option<&Path>, output: &CommandOutput) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, &output.primary)?;
            for (suffix, content) in &output.extras {
                std::fs::write(side_path(path, suffix), content)?;
            }
        }
        None => std::io::stdout()
            .lock()
            .write_all(output.primary.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let config = resolve_config(cli)?;
    if cli.print_config {
        let mut stdout = std::io::stdout().lock();
        for (key, value) in config.entries() {
            writeln!(stdout, "{key} = {value}")?;
        }
        return Ok(());
    }
    let command = Command::from(cli.command);
    if command == Command::Qnd && cli.out.is_none() {
        return Err(CliError::Config(
            "qnd writes several files and needs --out".into(),
        ));
    }
    let exec = match cli.jobs {
        Some(0) => return Err(CliError::Config("--jobs must be at least 1".into())),
        Some(1) => Execution::Sequential,
        _ => Execution::default(),
    };
    log::info!("running {} with {:?}", command.name(), exec);
    let output = in_pool(cli.jobs, || run(command, &config, exec))??;
    write_output(cli.out.as_deref(), &output)
}

#[cfg(feature = "parallel")]
fn in_pool<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    match jobs {
        Some(n) if n > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
        _ => Ok(f()),
    }
}

#[cfg(not(feature = "parallel"))]
fn in_pool<R: Send>(_jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    Ok(f())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eitkerr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
