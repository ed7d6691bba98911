use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use hpcqc::advisor::{advise_with, render_report, AdviseOptions, Policy, ReportFormat};
use hpcqc::bench::{render_bench, run_suite, BenchConfig, Suite};
use hpcqc::circuit::{build_ansatz, parse_circuit, render_circuit, AnsatzKind, Circuit, CircuitError};
use hpcqc::config::{Config, ConfigFile};
use hpcqc::encoding::{compare_modalities, render_rows, EOTensorSpec, EncodingScheme};
use hpcqc::random::random_params;
use hpcqc::resources::{estimate_model_only, render_table, scan, Calibration};
use hpcqc::stabilizer::{run_clifford, run_extended, t_gate_count};
use hpcqc::transpile::{t_count, transpile, SynthesisCost, SynthesisMode};

#[derive(Parser)]
#[command(name = "hpcqc", version, about = "Clifford+T resource estimation and HPC/QC dispatch")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML config file; defaults to $HPCQC_CONFIG when set.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Synthesis precision per rotation.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true, value_enum)]
    policy: Option<PolicyArg>,
    #[arg(long, global = true)]
    t_threshold: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: FormatArg,
    /// Surface-code calibration file (TOML).
    #[arg(long, global = true)]
    calibration: Option<PathBuf>,
    #[arg(long, global = true)]
    shots: Option<u64>,
    /// T budget for the extended simulator.
    #[arg(long, global = true)]
    t_max: Option<usize>,
    /// Physical error rate.
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Seconds per surface-code round.
    #[arg(long, global = true)]
    cycle_time: Option<f64>,
    #[arg(long, global = true)]
    target_logical_error: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Full,
    Symmetry,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Count,
    Sequence,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a benchmark ansatz with seeded random angles.
    Ansatz {
        kind: String,
        #[arg(short = 'n', long = "qubits")]
        n: usize,
        #[arg(short = 'd', long, default_value_t = 1)]
        depth: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Lower a circuit to H, S, Sdg, T, Tdg, CNOT.
    Transpile {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "sequence")]
        mode: ModeArg,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// T-count under both policies.
    Count { file: PathBuf },
    /// Sample measurement outcomes.
    Simulate { file: PathBuf },
    /// Surface-code estimates for a list of T-counts.
    Estimate {
        #[arg(short = 'q', long, default_value_t = 5)]
        logical_qubits: u64,
        /// Comma-separated, ascending; accepts 1e8 style integers.
        #[arg(short = 't', long = "t", value_delimiter = ',', required = true, value_parser = parse_count)]
        t: Vec<u64>,
        /// Skip the anchor lookup table.
        #[arg(long)]
        model_only: bool,
    },
    /// Decide between HPC simulation and quantum execution.
    Advise {
        /// Circuit file; optional when --t-override is given.
        file: Option<PathBuf>,
        #[arg(long, value_parser = parse_count)]
        t_override: Option<u64>,
        #[arg(long)]
        logical_qubits: Option<u64>,
    },
    /// Run a simulator scaling suite (clifford or extended).
    Bench {
        suite: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
    /// Encoding budgets for IxJxK:modality[:symmetric] tensors.
    Encode {
        #[arg(required = true)]
        specs: Vec<String>,
        /// angle, amplitude or hybrid:<f>
        #[arg(long, default_value = "angle")]
        scheme: String,
    },
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if f >= 0.0 && f.fract() == 0.0 && f < 1.8e19 {
        Ok(f as u64)
    } else {
        Err(format!("`{s}` is not a non-negative integer"))
    }
}

enum CliError {
    /// Bad input: usage or parse failure.
    Input(String),
    Failed(String),
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn read_text(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(failed)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}

fn read_circuit(path: &Path) -> Result<Circuit, CliError> {
    parse_circuit(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Failed(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn calibration(cfg: &Config) -> Result<Calibration, CliError> {
    match &cfg.calibration {
        Some(p) => Calibration::load(p).map_err(input),
        None => Ok(Calibration::default()),
    }
}

#[derive(Serialize)]
struct EstimateRow {
    t: u64,
    logical_qubits: u64,
    distance: u32,
    data_qubits: u64,
    distillation_qubits: u64,
    total_physical_qubits: u64,
    hours_per_shot: f64,
    source: &'static str,
}

#[derive(Serialize)]
struct EncodeRow {
    spec: String,
    scheme: String,
    pixel_qubits: u64,
    pixel_gates: u64,
    image_qubits: u64,
    image_gates: u64,
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    engine: &'a str,
    shots: u64,
    seed: u64,
    t: usize,
    counts: &'a std::collections::BTreeMap<String, u64>,
}

#[derive(Serialize)]
struct TranspileReport<'a> {
    mode: &'a str,
    epsilon: f64,
    t_count: u64,
    approximated: usize,
    approx_error: f64,
    circuit: &'a str,
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let c = &cli.common;
    let flags = ConfigFile {
        epsilon: c.epsilon,
        t_threshold: c.t_threshold,
        policy: c.policy.map(|p| match p {
            PolicyArg::Full => Policy::FullSynthesis,
            PolicyArg::Symmetry => Policy::SymmetryBreaking,
        }),
        p: c.p,
        cycle_time: c.cycle_time,
        target_logical_error: c.target_logical_error,
        calibration: c.calibration.clone(),
        seed: c.seed,
        shots: c.shots,
        t_max: c.t_max,
    };
    let cfg = Config::resolve(c.config.as_deref(), &flags).map_err(input)?;
    let machine = c.format == FormatArg::Machine;

    match cli.command {
        Command::Ansatz {
            kind,
            n,
            depth,
            output,
        } => {
            let kind: AnsatzKind = kind.parse().map_err(CliError::Input)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let params = random_params(kind.param_count(n, depth), &mut rng);
            let circuit = build_ansatz(kind, n, depth, &params)?;
            emit(&render_circuit(&circuit), output.as_deref())?;
        }
        Command::Transpile { file, mode, output } => {
            let circuit = read_circuit(&file)?;
            let mode = match mode {
                ModeArg::Count => SynthesisMode::Count,
                ModeArg::Sequence => SynthesisMode::Sequence,
            };
            let out = transpile(&circuit, cfg.epsilon, mode, &SynthesisCost::default()).map_err(failed)?;
            let text = render_circuit(&out.circuit);
            let mode_name = match mode {
                SynthesisMode::Count => "count",
                SynthesisMode::Sequence => "sequence",
            };
            let body = if machine {
                json(&TranspileReport {
                    mode: mode_name,
                    epsilon: cfg.epsilon,
                    t_count: out.t_count,
                    approximated: out.approximated,
                    approx_error: out.approx_error,
                    circuit: &text,
                })
            } else {
                format!(
                    "# mode {mode_name} epsilon {} t_count {} approximated {} approx_error {:e}\n{text}",
                    cfg.epsilon, out.t_count, out.approximated, out.approx_error
                )
            };
            emit(&body, output.as_deref())?;
        }
        Command::Count { file } => {
            let circuit = read_circuit(&file)?;
            let r = t_count(&circuit, cfg.epsilon).map_err(failed)?;
            if machine {
                print!("{}", json(&r));
            } else {
                println!("t_full: {}", r.t_full);
                println!("t_sym: {}", r.t_sym);
                println!("epsilon: {}", r.epsilon);
                println!("clifford_gates: {}", r.clifford_count);
                for b in &r.breakdown {
                    println!(
                        "block {}: t_full={} t_sym={} non_clifford={}",
                        b.block, b.t_full, b.t_sym, b.non_clifford_gates
                    );
                }
            }
        }
        Command::Simulate { file } => {
            let circuit = read_circuit(&file)?;
            let t = t_gate_count(&circuit).map_err(|e| {
                CliError::Failed(format!("{e}; run `hpcqc transpile` first"))
            })?;
            let (engine, hist) = if t == 0 {
                ("clifford", run_clifford(&circuit, cfg.shots, cfg.seed))
            } else {
                ("extended", run_extended(&circuit, cfg.shots, cfg.seed, cfg.t_max))
            };
            let hist = hist.map_err(failed)?;
            if machine {
                print!(
                    "{}",
                    json(&SimulateReport {
                        engine,
                        shots: cfg.shots,
                        seed: cfg.seed,
                        t,
                        counts: &hist.counts,
                    })
                );
            } else {
                println!("# engine {engine} shots {} seed {} t {t}", cfg.shots, cfg.seed);
                print!("{}", hist.render());
            }
        }
        Command::Estimate {
            logical_qubits,
            t,
            model_only,
        } => {
            let cal = calibration(&cfg)?;
            let rows = if model_only {
                if t.windows(2).any(|w| w[0] > w[1]) {
                    return Err(CliError::Input("t values must be ascending".into()));
                }
                t.iter()
                    .map(|&t| estimate_model_only(&cfg.profile, logical_qubits, t, &cal))
                    .collect::<Result<Vec<_>, _>>()
            } else {
                scan(&cfg.profile, logical_qubits, &t, &cal)
            }
            .map_err(failed)?;
            if machine {
                let out: Vec<EstimateRow> = rows
                    .iter()
                    .map(|r| EstimateRow {
                        t: r.t,
                        logical_qubits: r.logical_qubits,
                        distance: r.d,
                        data_qubits: r.data_qubits,
                        distillation_qubits: r.distillation_qubits,
                        total_physical_qubits: r.total_physical,
                        hours_per_shot: r.hours_per_shot,
                        source: r.assumptions.source.name(),
                    })
                    .collect();
                print!("{}", json(&out));
            } else {
                print!("{}", render_table(&rows));
            }
        }
        Command::Advise {
            file,
            t_override,
            logical_qubits,
        } => {
            let circuit = match (&file, t_override) {
                (Some(f), _) => read_circuit(f)?,
                (None, Some(_)) => Circuit::new(logical_qubits.unwrap_or(1).max(1) as usize)?,
                (None, None) => {
                    return Err(CliError::Input("advise needs a circuit file or --t-override".into()))
                }
            };
            let cal = calibration(&cfg)?;
            let report = advise_with(
                &circuit,
                cfg.epsilon,
                cfg.policy,
                cfg.t_threshold,
                &cfg.profile,
                &cal,
                AdviseOptions {
                    t_override,
                    logical_qubits,
                },
            )
            .map_err(failed)?;
            let format = if machine { ReportFormat::Machine } else { ReportFormat::Text };
            print!("{}", render_report(&report, format));
            return Ok(report.decision.exit_code());
        }
        Command::Bench {
            suite,
            output,
            repeats,
        } => {
            let suite: Suite = suite.parse().map_err(CliError::Input)?;
            let bench_cfg = BenchConfig {
                repeats,
                seed: cfg.seed,
                ..BenchConfig::default()
            };
            let report = run_suite(suite, &bench_cfg).map_err(failed)?;
            let body = if machine { json(&report) } else { render_bench(&report) };
            emit(&body, output.as_deref())?;
        }
        Command::Encode { specs, scheme } => {
            let scheme: EncodingScheme = scheme.parse().map_err(input)?;
            let specs: Vec<EOTensorSpec> = specs
                .iter()
                .map(|s| s.parse())
                .collect::<Result<_, _>>()
                .map_err(input)?;
            let rows = compare_modalities(&specs, scheme).map_err(input)?;
            if machine {
                let out: Vec<EncodeRow> = rows
                    .iter()
                    .map(|r| EncodeRow {
                        spec: r.spec.to_string(),
                        scheme: r.scheme.to_string(),
                        pixel_qubits: r.per_pixel.qubits,
                        pixel_gates: r.per_pixel.gates,
                        image_qubits: r.whole_image.qubits,
                        image_gates: r.whole_image.gates,
                    })
                    .collect();
                print!("{}", json(&out));
            } else {
                print!("{}", render_rows(&rows));
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
