//! `photon-product` command-line tool.
//!
//! Exit codes: 0 on success, 1 on domain or I/O errors, 2 on positioned
//! parse diagnostics (and on bad command-line usage).

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use photon_product::nogo::{best_unitary_fidelity, closure_experiment, nogo_sweep, CascadePhases, MIN_BUDGET};
use photon_product::oracle::cross_check;
use photon_product::synth::{predicted_success_probability, rail_amplitudes, verify_plan};
use photon_product::{
    emit_netlist, parse_netlist, parse_target_doc, product_fidelity, simulate, synthesize, Circuit, Error,
    ProductState, SinglePhotonState, TargetSpec,
};

use report::{OracleReport, Output, PlanReport, SimulateReport, VerifyReport};

#[derive(Parser)]
#[command(
    name = "photon-product",
    version,
    about = "Post-selected linear-optical product-state synthesis"
)]
struct Cli {
    /// Print a human-readable view instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ReportArg {
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the interferometer for a target and write its netlist.
    Synth {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        out_netlist: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Run a netlist on one photon per target entry and score the result.
    Simulate {
        #[arg(long)]
        netlist: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Input mode of each photon, in target order. Defaults to the
        /// layout `synth` uses.
        #[arg(long, value_delimiter = ',')]
        inputs: Option<Vec<usize>>,
        /// Output rails as `rail1,rail2`. Defaults to the `synth` layout.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        rails: Option<Vec<usize>>,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Synthesize, simulate and score a target.
    Verify {
        #[arg(long)]
        target: PathBuf,
        /// Also replay the circuit on the dense joint-state oracle.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Best fidelity any 2x2 unitary reaches on a two-photon target.
    Nogo {
        #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep")]
        target: Option<PathBuf>,
        /// Number of random targets to sweep.
        #[arg(long, requires = "seed")]
        sweep: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Fidelity evaluations per optimization.
        #[arg(long, default_value_t = MIN_BUDGET)]
        budget: usize,
        #[command(flatten)]
        report: ReportArg,
    },
    /// How far cascades of k stages are from a single stage.
    Closure {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Zero inter-stage phases instead of random ones.
        #[arg(long)]
        zero_phases: bool,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Success probability of the balanced scheme for n photons.
    Prob {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// An error tied to an input file.
    InFile {
        path: PathBuf,
        source: Error,
    },
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::InFile { source, .. } | CliError::Domain(source) if source.is_diagnostic() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::InFile { path, source } => write!(f, "{}:{source}", path.display()),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn in_file<T>(path: &Path, r: photon_product::Result<T>) -> CliResult<T> {
    r.map_err(|source| match source {
        Error::Diagnostic(_) => CliError::InFile {
            path: path.to_path_buf(),
            source,
        },
        other => CliError::Domain(other),
    })
}

fn load_target(path: &Path) -> CliResult<TargetSpec> {
    in_file(path, parse_target_doc(&read(path)?))
}

fn load_netlist(path: &Path) -> CliResult<Circuit> {
    in_file(path, parse_netlist(&read(path)?))
}

fn emit(out: &Output, report: &ReportArg, pretty: bool) -> CliResult<()> {
    if let Some(path) = &report.report {
        write(path, &out.to_json())?;
    }
    if pretty {
        print!("{}", out.to_pretty());
    } else if report.report.is_none() {
        print!("{}", out.to_json());
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Synth {
            target,
            out_netlist,
            report,
        } => {
            let t = load_target(&target)?;
            let v = verify_plan(&t, synthesize(&t)?)?;
            if let Some(path) = out_netlist {
                write(&path, &emit_netlist(&v.plan.circuit))?;
            }
            emit(&Output::Synth(PlanReport::new(&v)), &report, pretty)
        }
        Command::Simulate {
            netlist,
            target,
            inputs,
            rails,
            report,
        } => {
            let circuit = load_netlist(&netlist)?;
            let t = load_target(&target)?;
            let layout = synthesize(&t)?;
            let inputs = inputs.unwrap_or_else(|| layout.inputs.iter().map(|(_, m)| *m).collect());
            let rails = rails.map_or(layout.output_rails, |r| (r[0], r[1]));
            if inputs.len() != t.len() {
                return Err(Error::WrongPhotonCount {
                    expected: t.len(),
                    got: inputs.len(),
                }
                .into());
            }
            let m = circuit.num_modes();
            for &mode in inputs.iter().chain([&rails.0, &rails.1]) {
                if mode >= m {
                    return Err(Error::ModeOutOfRange { mode, num_modes: m }.into());
                }
            }
            let input = ProductState::new(
                t.photons()
                    .iter()
                    .zip(&inputs)
                    .map(|(p, &mode)| Ok((p.label, SinglePhotonState::basis(m, mode)?)))
                    .collect::<photon_product::Result<Vec<_>>>()?,
            )?;
            let result = simulate(&circuit, &input)?;
            let fidelity = product_fidelity(&result.state, &t.to_product_state(m, rails)?)?;
            let out = SimulateReport {
                num_modes: m,
                inputs,
                output_rails: rails,
                fidelity,
                probability: result.probability,
                photon_probabilities: result.photon_probabilities.clone(),
                rail_amplitudes: rail_amplitudes(&result.state, rails),
            };
            emit(&Output::Simulate(out), &report, pretty)
        }
        Command::Verify { target, oracle, report } => {
            let t = load_target(&target)?;
            let v = verify_plan(&t, synthesize(&t)?)?;
            let oracle = if oracle {
                let x = cross_check(&v.plan.circuit, &v.plan.input_state()?)?;
                Some(OracleReport {
                    max_amp_diff: x.max_amp_diff,
                    prob_diff: x.prob_diff,
                })
            } else {
                None
            };
            let out = VerifyReport {
                plan: PlanReport::new(&v),
                oracle,
            };
            emit(&Output::Verify(out), &report, pretty)
        }
        Command::Nogo {
            target,
            sweep,
            seed,
            budget,
            report,
        } => {
            let out = match (target, sweep) {
                (Some(path), _) => Output::NoGo(best_unitary_fidelity(&load_target(&path)?, budget)?),
                (None, Some(trials)) => Output::NoGoSweep(nogo_sweep(trials, seed.unwrap_or_default(), budget)?),
                (None, None) => unreachable!("clap requires --target or --sweep"),
            };
            emit(&out, &report, pretty)
        }
        Command::Closure {
            k,
            trials,
            seed,
            zero_phases,
            report,
        } => {
            let phases = if zero_phases {
                CascadePhases::Zero
            } else {
                CascadePhases::Random
            };
            emit(
                &Output::Closure(closure_experiment(k, trials, seed, phases)?),
                &report,
                pretty,
            )
        }
        Command::Prob { n } => {
            if n == 0 {
                return Err(Error::InvalidArgument("n must be at least 1".into()).into());
            }
            println!("{}", predicted_success_probability(n));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
