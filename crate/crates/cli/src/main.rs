//! Command-line front end for resourceforge.
//!
//! Every subcommand prints one JSON object (or `key<TAB>value` lines with
//! `--out tsv`). Exit status is 0 on success, 1 when the input violates a
//! domain rule (the error kind is printed on stderr) and 2 when a file or
//! argument cannot be read.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use resourceforge::io::{self, read_json, LoadError, MeasurementFile};
use resourceforge::measurement::params_from_unitary;
use resourceforge::monotones::padded_spectra;
use resourceforge::protocol::deficit_bound_for;
use resourceforge::state::permute_subsystems;
use resourceforge::*;
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(name = "resourceforge", version, about = "Resource-theory quantities for finite-dimensional quantum states")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    out: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args, Debug)]
struct StateArg {
    /// State file: {"dims": [...], "matrix": [[[re, im], ...], ...]}.
    #[arg(long)]
    state: PathBuf,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    state2: PathBuf,
}

#[derive(Args, Debug)]
struct OptArgs {
    /// Optimizer config file; the flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Grid points per angle used to seed restarts.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a state file and report its spectrum.
    Validate(StateArg),
    /// Eigenvalues of a state, descending.
    Spectrum(StateArg),
    /// Tensor product of two states.
    Tensor(PairArgs),
    /// Reduced state on the listed subsystems.
    Ptrace {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<usize>,
    },
    /// Reorder subsystems: new subsystem k is old subsystem order[k].
    Permute {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        order: Vec<usize>,
    },
    /// Apply a local isometry, given as a matrix file [[[re, im], ...], ...], to one subsystem.
    Embed {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        isometry: PathBuf,
        #[arg(long, default_value_t = 0)]
        subsystem: usize,
    },
    /// Random density matrix from the induced measure.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Subsystem dimensions; defaults to a single system.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
    /// Von Neumann entropy in bits.
    Entropy(StateArg),
    /// Relative entropy S(state || state2) in bits.
    Relent(PairArgs),
    /// Mutual information of a bipartite state.
    Mutinfo(StateArg),
    /// log2(d) - S.
    Negentropy(StateArg),
    /// Gibbs state of a Hamiltonian file {"beta": b, "matrix": ...}.
    Gibbs {
        #[arg(long)]
        ham: PathBuf,
    },
    /// Free-energy gap to the Gibbs state, as S(state || gibbs) in bits.
    Fgap {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        ham: PathBuf,
    },
    /// Apply a projective measurement {"dimension": d, "basis": ...} to one subsystem.
    Measure {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        meas: PathBuf,
        #[arg(long, default_value_t = 0)]
        side: usize,
    },
    /// Apply measurements to both halves of a bipartite state.
    MeasureBoth {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        meas: PathBuf,
        #[arg(long)]
        meas2: PathBuf,
    },
    /// Dephase one qubit in the computational basis.
    Dephase {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        qubit: usize,
    },
    /// Angle parameters of a measurement basis.
    Params {
        #[arg(long)]
        meas: PathBuf,
    },
    /// One-way deficit for a given measurement on A.
    DeficitFixed {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        meas: PathBuf,
    },
    /// Discord integrand for a given measurement on A.
    DiscordFixed {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        meas: PathBuf,
    },
    /// One-way deficit, minimized over measurements on A.
    Deficit(Quantumness),
    /// Discord, minimized over measurements on A.
    Discord(Quantumness),
    /// Zero-way deficit, minimized over measurements on both sides.
    Deficit0(Quantumness),
    /// Zero-way discord, minimized over measurements on both sides.
    Discord0(Quantumness),
    /// Relative-entropy distance to states classical on A.
    RelentCq(Quantumness),
    /// Relative-entropy distance to states classical on both sides.
    RelentCc(Quantumness),
    /// One-way deficit after embedding A into a larger space.
    Gendeficit {
        #[command(flatten)]
        q: Quantumness,
        #[arg(long, default_value_t = 1)]
        extra_dim: usize,
    },
    /// Per-copy one-way deficit of two copies.
    Multicopy {
        #[command(flatten)]
        q: Quantumness,
        #[arg(long, default_value_t = 2)]
        copies: usize,
    },
    /// Whether spectrum x majorizes y (comma-separated lists).
    Majorize {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        y: Vec<f64>,
    },
    /// Whether noisy operations turn state into state2 in one shot.
    Transition(PairArgs),
    /// Conversion rate from two relative-entropy distances in bits.
    Rate {
        #[arg(long, allow_negative_numbers = true)]
        source: f64,
        #[arg(long, allow_negative_numbers = true)]
        target: f64,
    },
    /// Rate of distilling pure qubits.
    Purity(StateArg),
    /// Thermodynamic conversion rate between states commuting with the Hamiltonian.
    Thermorate {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        state2: PathBuf,
        #[arg(long)]
        ham: PathBuf,
    },
    /// Run a protocol script and count the pure local qubits left.
    Protocol(ProtocolArgs),
    /// N - S - extracted qubits for a CLOCC script.
    Bound(ProtocolArgs),
}

#[derive(Args, Debug)]
struct Quantumness {
    #[arg(long)]
    state: PathBuf,
    #[command(flatten)]
    opt: OptArgs,
}

#[derive(Args, Debug)]
struct ProtocolArgs {
    #[arg(long)]
    state: PathBuf,
    /// Script file: {"mode": "CLOCC"|"NLOCC", "steps": [...]}.
    #[arg(long)]
    script: PathBuf,
    /// Owner of each subsystem, e.g. A,B,B; defaults to A,B.
    #[arg(long, value_delimiter = ',')]
    owners: Option<Vec<String>>,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
}

enum Failure {
    Domain(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Parse { .. } => Failure::Input(e.to_string()),
            LoadError::Domain(d) => Failure::Domain(d),
        }
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn state(path: &Path) -> std::result::Result<DensityMatrix, Failure> {
    Ok(io::load_state(path)?)
}

fn hamiltonian(path: &Path) -> std::result::Result<Hamiltonian, Failure> {
    Ok(read_json::<Hamiltonian>(path)?)
}

fn measurement(path: &Path) -> std::result::Result<ProjectiveMeasurement, Failure> {
    Ok(ProjectiveMeasurement::try_from(read_json::<MeasurementFile>(path)?)?)
}

fn config(opt: &OptArgs) -> std::result::Result<OptimizerConfig, Failure> {
    let mut cfg = match &opt.config {
        Some(path) => read_json::<OptimizerConfig>(path)?,
        None => OptimizerConfig::default(),
    };
    cfg.restarts = opt.restarts.unwrap_or(cfg.restarts);
    cfg.grid_points = opt.grid.unwrap_or(cfg.grid_points);
    cfg.tolerance = opt.tol.unwrap_or(cfg.tolerance);
    cfg.seed = opt.seed.unwrap_or(cfg.seed);
    cfg.max_iterations = opt.max_iter.unwrap_or(cfg.max_iterations);
    cfg.validate()?;
    Ok(cfg)
}

fn choice_value(choice: &MeasurementChoice) -> Value {
    match choice {
        MeasurementChoice::OneSided(m) => json!({ "A": io::measurement_value(m) }),
        MeasurementChoice::BothSides(a, b) => json!({ "A": io::measurement_value(a), "B": io::measurement_value(b) }),
        MeasurementChoice::Embedded { isometry, measurement } => json!({
            "isometry": io::matrix_value(isometry.matrix()),
            "A": io::measurement_value(measurement),
        }),
    }
}

fn quantumness_value(r: &QuantumnessResult) -> Value {
    json!({
        "value_bits": io::number(r.value),
        "measurement": choice_value(&r.measurement),
        "trace": r.trace.iter().map(|&(i, v)| json!([i, io::number(v)])).collect::<Vec<_>>(),
    })
}

fn optimized(q: &Quantumness, f: impl Fn(&DensityMatrix, &OptimizerConfig) -> Result<QuantumnessResult>) -> Outcome {
    let rho = state(&q.state)?;
    let cfg = config(&q.opt)?;
    Ok(quantumness_value(&f(&rho, &cfg)?))
}

fn rate_value(r: &RateResult) -> Value {
    json!({
        "rate": io::number(r.rate),
        "numerator_bits": io::number(r.numerator_bits),
        "denominator_bits": io::number(r.denominator_bits),
    })
}

fn spectrum_value(s: &Spectrum) -> Value {
    Value::Array(s.values().iter().map(|&v| io::number(v)).collect())
}

fn register(args: &ProtocolArgs) -> std::result::Result<(Register, ProtocolScript), Failure> {
    let rho = state(&args.state)?;
    let script: ProtocolScript = read_json(&args.script)?;
    let owners = match &args.owners {
        None => vec![Side::A, Side::B],
        Some(labels) => labels
            .iter()
            .map(|l| match l.trim() {
                "A" | "a" => Ok(Side::A),
                "B" | "b" => Ok(Side::B),
                other => Err(Failure::Input(format!("owner must be A or B, got {other:?}"))),
            })
            .collect::<std::result::Result<_, _>>()?,
    };
    Ok((Register::new(rho, owners)?, script))
}

fn run(command: &Command) -> Outcome {
    let scalar = |key: &str, v: f64| json!({ key: io::number(v) });
    match command {
        Command::Validate(a) => {
            let rho = state(&a.state)?;
            Ok(json!({ "valid": true, "dims": rho.dims(), "spectrum": spectrum_value(&rho.spectrum()) }))
        }
        Command::Spectrum(a) => Ok(json!({ "spectrum": spectrum_value(&state(&a.state)?.spectrum()) })),
        Command::Tensor(p) => Ok(io::state_value(&tensor(&state(&p.state)?, &state(&p.state2)?)?)),
        Command::Ptrace { state: path, keep } => Ok(io::state_value(&partial_trace(&state(path)?, keep)?)),
        Command::Permute { state: path, order } => Ok(io::state_value(&permute_subsystems(&state(path)?, order)?)),
        Command::Embed { state: path, isometry, subsystem } => {
            let v = Isometry::new(read_json::<ComplexMatrix>(isometry)?)?;
            Ok(io::state_value(&embed(&state(path)?, &v, *subsystem)?))
        }
        Command::Random { dim, rank, seed, dims } => {
            let rho = random_density(*dim, rank.unwrap_or(*dim), *seed)?;
            let rho = match dims {
                Some(d) => rho.with_dims(d.clone())?,
                None => rho,
            };
            Ok(io::state_value(&rho))
        }
        Command::Entropy(a) => Ok(scalar("entropy_bits", vn_entropy(&state(&a.state)?))),
        Command::Relent(p) => Ok(scalar("value_bits", relative_entropy(&state(&p.state)?, &state(&p.state2)?)?)),
        Command::Mutinfo(a) => Ok(scalar("value_bits", mutual_information(&state(&a.state)?)?)),
        Command::Negentropy(a) => Ok(scalar("value_bits", negentropy(&state(&a.state)?))),
        Command::Gibbs { ham } => Ok(io::state_value(&gibbs_state(&hamiltonian(ham)?))),
        Command::Fgap { state: path, ham } => {
            let h = hamiltonian(ham)?;
            let gap = free_energy_gap(&state(path)?, &h)?;
            let mut out = Map::new();
            out.insert("value_bits".into(), io::number(gap));
            // kT ln2 per bit, in the units of the Hamiltonian.
            if h.beta() > 0.0 {
                out.insert("free_energy".into(), io::number(gap * std::f64::consts::LN_2 / h.beta()));
            }
            Ok(Value::Object(out))
        }
        Command::Measure { state: path, meas, side } => {
            Ok(io::state_value(&measure_local(&state(path)?, &measurement(meas)?, *side)?))
        }
        Command::MeasureBoth { state: path, meas, meas2 } => {
            Ok(io::state_value(&measure_both(&state(path)?, &measurement(meas)?, &measurement(meas2)?)?))
        }
        Command::Dephase { state: path, qubit } => Ok(io::state_value(&dephasing_channel(&state(path)?, *qubit)?)),
        Command::Params { meas } => {
            let p = params_from_unitary(measurement(meas)?.basis())?;
            Ok(json!({ "angles": p.angles().iter().map(|&a| io::number(a)).collect::<Vec<_>>() }))
        }
        Command::DeficitFixed { state: path, meas } => {
            Ok(scalar("value_bits", deficit_one_way_fixed(&state(path)?, &measurement(meas)?)?))
        }
        Command::DiscordFixed { state: path, meas } => {
            Ok(scalar("value_bits", discord_fixed(&state(path)?, &measurement(meas)?)?))
        }
        Command::Deficit(q) => optimized(q, deficit_one_way),
        Command::Discord(q) => optimized(q, discord),
        Command::Deficit0(q) => optimized(q, deficit_zero_way),
        Command::Discord0(q) => optimized(q, discord_zero_way),
        Command::RelentCq(q) => optimized(q, relent_to_cq),
        Command::RelentCc(q) => optimized(q, relent_to_cc),
        Command::Gendeficit { q, extra_dim } => optimized(q, |r, c| generalized_deficit(r, *extra_dim, c)),
        Command::Multicopy { q, copies } => optimized(q, |r, c| multicopy_deficit(r, *copies, c)),
        Command::Majorize { x, y } => {
            let (x, y) = (Spectrum::new(x.clone())?, Spectrum::new(y.clone())?);
            Ok(json!({ "majorizes": majorizes(&x, &y)? }))
        }
        Command::Transition(p) => {
            let (rho, sigma) = (state(&p.state)?, state(&p.state2)?);
            let possible = single_shot_noisy_transition(&rho, &sigma)?;
            let (a, b) = padded_spectra(&rho, &sigma);
            Ok(
                json!({ "possible": possible, "source_spectrum": spectrum_value(&a), "target_spectrum": spectrum_value(&b) }),
            )
        }
        Command::Rate { source, target } => Ok(rate_value(&conversion_rate(*source, *target)?)),
        Command::Purity(a) => Ok(rate_value(&purity_rate(&state(&a.state)?))),
        Command::Thermorate { state: path, state2, ham } => {
            Ok(rate_value(&thermo_rate(&state(path)?, &state(state2)?, &hamiltonian(ham)?)?))
        }
        Command::Protocol(args) => {
            let (reg, script) = register(args)?;
            let out = run_protocol(&reg, &script)?;
            let owners: Vec<String> = out.owners().iter().map(|s| s.to_string()).collect();
            Ok(json!({
                "state": io::state_value(out.state()),
                "owners": owners,
                "extracted_qubits": extracted_local_purity(&out, args.epsilon)?,
            }))
        }
        Command::Bound(args) => {
            let (reg, script) = register(args)?;
            Ok(scalar("bound_bits", deficit_bound_for(&reg, &script, args.epsilon)?))
        }
    }
}

fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("JSON values serialize"),
        Format::Tsv => match value {
            Value::Object(map) => map
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}\t{s}"),
                    other => format!("{k}\t{other}"),
                })
                .collect::<Vec<_>>()
                .join("\n"),
            other => other.to_string(),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(value) => {
            // A closed pipe downstream is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{}", render(&value, cli.out));
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
