//! `fockwitness`: command-line front end for the beam-split entanglement
//! simulator.
//!
//! Exit codes: 0 on success, 2 for usage or parse errors, 3 for I/O
//! failures and resource limits.

mod display;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fockwitness::entangle::{self, binary_patterns};
use fockwitness::io::StateFile;
use fockwitness::patterns::{classes, k_value, pattern_class};
use fockwitness::rational::rational_string;
use fockwitness::witness::{self, Partition};
use fockwitness::{linop, Error, FockBasis, ModeUnitary, PhotonPattern, PureState};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::display::{class_ordering, k_ordering, ProbabilityTable};

const MAX_DIM_VAR: &str = "FOCKWITNESS_MAX_DIM";
const DEFAULT_MAX_DIM: usize = 65536;

#[derive(Parser)]
#[command(name = "fockwitness", version, about = "Beam-split multi-photon entanglement and DFT witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the beam-split state (or one photon partition of it) as JSON.
    Generate {
        #[arg(short = 'M', long = "modes")]
        modes: usize,
        #[arg(short = 'N', long = "photons")]
        photons: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Probabilities of the photon partitions (N, M-N).
    Partition {
        #[arg(short = 'M', long = "modes")]
        modes: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Joint photon-number distribution in the input modes or after local DFTs.
    Probabilities {
        #[command(flatten)]
        source: StateSource,
        #[arg(long, value_enum, default_value_t = BasisChoice::Input)]
        basis: BasisChoice,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also write the single-photon DFT matrix as row-major [re, im] pairs.
        #[arg(long)]
        dump_unitary: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cyclic pattern classes of N photons in M modes.
    Classes {
        #[arg(short = 'M', long = "modes")]
        modes: usize,
        #[arg(short = 'N', long = "photons")]
        photons: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Correlation fidelities and witness value of a state.
    Witness {
        #[command(flatten)]
        source: StateSource,
        /// Weight p of the state in p*state + (1-p)*uniform noise.
        #[arg(long)]
        noise_p: Option<f64>,
        /// Number of random product states to check against the bound.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Separable bounds, fidelity thresholds and the noise law of the ideal state.
    Bounds {
        #[arg(short = 'M', long = "modes")]
        modes: usize,
        #[arg(short = 'N', long = "photons")]
        photons: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// DFT output statistics of one input pattern, grouped by K.
    Suppression {
        #[arg(short = 'M', long = "modes")]
        modes: usize,
        pattern: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct StateSource {
    /// State file written by `generate`.
    #[arg(long, conflicts_with_all = ["product_a", "product_b"])]
    state: Option<PathBuf>,
    #[arg(short = 'M', long = "modes")]
    modes: Option<usize>,
    /// Photons in system A; selects the partition of a state file.
    #[arg(short = 'N', long = "photons")]
    photons: Option<usize>,
    /// Pattern of A for a product Fock state (needs --product-b).
    #[arg(long, requires = "product_b")]
    product_a: Option<String>,
    #[arg(long, requires = "product_a")]
    product_b: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisChoice {
    Input,
    Dft,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum CliError {
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource(_) => CliError::Io(e.to_string()),
            Error::Domain(_) | Error::Parse(_) => CliError::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn max_dim() -> CliResult<usize> {
    match std::env::var(MAX_DIM_VAR) {
        Ok(v) => v
            .parse()
            .map_err(|_| CliError::Usage(format!("{MAX_DIM_VAR}={v:?} is not a dimension"))),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn basis_size(modes: usize, photons: usize) -> u128 {
    binomial(modes + photons - 1, photons)
}

fn check_dim(dim: u128) -> CliResult<()> {
    let cap = max_dim()?;
    if dim > cap as u128 {
        return Err(CliError::Io(format!(
            "joint dimension {dim} exceeds {MAX_DIM_VAR} = {cap}"
        )));
    }
    Ok(())
}

fn check_partition(modes: usize, photons: usize) -> CliResult<()> {
    if modes == 0 {
        return Err(CliError::Usage("M must be at least 1".into()));
    }
    if photons > modes {
        return Err(CliError::Usage(format!(
            "N = {photons} exceeds M = {modes}"
        )));
    }
    check_dim(basis_size(modes, photons) * basis_size(modes, modes - photons))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::Io(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn emit_json(output: Option<&Path>, value: &Value) -> CliResult<()> {
    emit(output, &serde_json::to_string_pretty(value).expect("json value"))
}

fn parse_pattern(text: &str) -> CliResult<PhotonPattern> {
    text.parse().map_err(|e: Error| CliError::Usage(e.to_string()))
}

impl StateSource {
    fn load(&self) -> CliResult<PureState> {
        if let Some(path) = &self.state {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            let file = StateFile::from_json(&text)
                .map_err(|e| CliError::Io(format!("unreadable state file {}: {e}", path.display())))?;
            let dim: usize = file.strata.iter().map(|s| s.amplitudes.len()).sum();
            check_dim(dim as u128)?;
            return Ok(file.select(self.photons)?);
        }
        if let (Some(a), Some(b)) = (&self.product_a, &self.product_b) {
            let a = parse_pattern(a)?;
            let b = parse_pattern(b)?;
            check_dim(basis_size(a.modes(), a.photons()) * basis_size(b.modes(), b.photons()))?;
            let basis_a = Arc::new(FockBasis::new(a.modes(), a.photons())?);
            let basis_b = Arc::new(FockBasis::new(b.modes(), b.photons())?);
            return Ok(PureState::joint_basis_state(basis_a, basis_b, &a, &b)?);
        }
        match (self.modes, self.photons) {
            (Some(m), Some(n)) => {
                check_partition(m, n)?;
                Ok(entangle::phi_partition(m, n)?)
            }
            _ => Err(CliError::Usage(
                "give a state with --state FILE, --product-a/--product-b, or -M and -N".into(),
            )),
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Generate {
            modes,
            photons,
            output,
        } => cmd_generate(modes, photons, output.as_deref()),
        Command::Partition { modes, output } => cmd_partition(modes, output.as_deref()),
        Command::Probabilities {
            source,
            basis,
            format,
            dump_unitary,
            output,
        } => {
            let state = source.load()?;
            cmd_probabilities(&state, basis, format, dump_unitary.as_deref(), output.as_deref())
        }
        Command::Classes {
            modes,
            photons,
            output,
        } => cmd_classes(modes, photons, output.as_deref()),
        Command::Witness {
            source,
            noise_p,
            samples,
            seed,
            output,
        } => {
            let state = source.load()?;
            cmd_witness(&state, noise_p, samples, seed, output.as_deref())
        }
        Command::Bounds {
            modes,
            photons,
            output,
        } => cmd_bounds(modes, photons, output.as_deref()),
        Command::Suppression {
            modes,
            pattern,
            output,
        } => cmd_suppression(modes, &pattern, output.as_deref()),
    }
}

fn cmd_generate(modes: usize, photons: Option<usize>, output: Option<&Path>) -> CliResult<()> {
    let file = match photons {
        Some(n) => {
            check_partition(modes, n)?;
            StateFile::from_joint(&entangle::phi_partition(modes, n)?)?
        }
        None => {
            if modes == 0 {
                return Err(CliError::Usage("M must be at least 1".into()));
            }
            if modes > entangle::MAX_GENERATED_MODES {
                return Err(CliError::Io(format!(
                    "at most {} modes can be generated",
                    entangle::MAX_GENERATED_MODES
                )));
            }
            let total: u128 = (0..=modes)
                .map(|n| basis_size(modes, n) * basis_size(modes, modes - n))
                .sum();
            check_dim(total)?;
            StateFile::from_stratified(&entangle::generate_psi(modes)?)?
        }
    };
    emit(output, &file.to_json())
}

fn cmd_partition(modes: usize, output: Option<&Path>) -> CliResult<()> {
    if modes == 0 {
        return Err(CliError::Usage("M must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for n in 0..=modes {
        let exact = entangle::partition_probability_exact(modes, n)?;
        rows.push(json!({
            "photons_a": n,
            "photons_b": modes - n,
            "probability": entangle::partition_probability(modes, n)?,
            "probability_exact": exact.to_string(),
            "gaussian_estimate": entangle::gaussian_partition_estimate(modes, n),
            "schmidt_rank": binary_patterns(modes, n).len(),
        }));
    }
    let edge = entangle::partition_probability_exact(modes, 0)?
        + entangle::partition_probability_exact(modes, modes)?;
    let usable = BigRational::one() - &edge;
    emit_json(
        output,
        &json!({
            "modes": modes,
            "partitions": rows,
            "empty_side_probability": edge.to_f64(),
            "empty_side_probability_exact": edge.to_string(),
            "usable_probability": usable.to_f64(),
            "usable_probability_exact": usable.to_string(),
        }),
    )
}

fn cmd_probabilities(
    state: &PureState,
    basis: BasisChoice,
    format: Format,
    dump_unitary: Option<&Path>,
    output: Option<&Path>,
) -> CliResult<()> {
    let (basis_a, basis_b) = state.joint_bases()?;
    if basis_a.modes() != basis_b.modes() {
        return Err(CliError::Usage("both systems need the same mode count".into()));
    }
    let table = match basis {
        BasisChoice::Input => ProbabilityTable::new(
            "input",
            basis_a,
            basis_b,
            &fockwitness::fock::distribution(state),
            class_ordering(basis_a),
            class_ordering(basis_b),
        ),
        BasisChoice::Dft => {
            let dft = ModeUnitary::dft(basis_a.modes());
            let out = linop::apply(&dft, state, fockwitness::Side::Both)?;
            ProbabilityTable::new(
                "dft",
                basis_a,
                basis_b,
                &out.probabilities(),
                k_ordering(basis_a),
                k_ordering(basis_b),
            )
        }
    };
    if let Some(path) = dump_unitary {
        let u = ModeUnitary::dft(basis_a.modes()).to_json();
        fs::write(path, serde_json::to_string_pretty(&u).expect("json"))
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    match format {
        Format::Json => emit_json(output, &serde_json::to_value(&table).expect("table")),
        Format::Csv => {
            let text = table
                .to_csv()
                .map_err(|e| CliError::Io(format!("csv output failed: {e}")))?;
            emit(output, text.trim_end())
        }
    }
}

fn cmd_classes(modes: usize, photons: usize, output: Option<&Path>) -> CliResult<()> {
    if modes == 0 {
        return Err(CliError::Usage("M must be at least 1".into()));
    }
    check_dim(basis_size(modes, photons))?;
    let basis = FockBasis::new(modes, photons)?;
    let list: Vec<Value> = classes(&basis)
        .iter()
        .map(|c| {
            json!({
                "representative": c.representative(),
                "cardinality": c.cardinality(),
                "allowed_K": c.allowed_k(),
                "elements": c.elements(),
                "complementary": fockwitness::patterns::complementary_class(c)
                    .map(|bar| bar.representative().to_string()),
            })
        })
        .collect();
    emit_json(
        output,
        &json!({ "modes": modes, "photons": photons, "classes": list }),
    )
}

fn cmd_witness(
    state: &PureState,
    noise_p: Option<f64>,
    samples: usize,
    seed: u64,
    output: Option<&Path>,
) -> CliResult<()> {
    let partition = Partition::of_state(state)?;
    let report = partition.evaluate(state)?;
    let mut out = report.to_json();
    if let Some(p) = noise_p {
        if !(0.0..=1.0).contains(&p) {
            return Err(CliError::Usage(format!("--noise-p {p} is not in [0, 1]")));
        }
        let random = partition.evaluate_white_noise();
        let slope = report.witness_value - random.witness_value;
        let offset = random.witness_value;
        let value = slope * p + offset;
        out["mixture"] = json!({
            "p": p,
            "witness_value": value,
            "witness_value_exact": rational_string(value),
            "slope": slope,
            "offset": offset,
            "threshold": -offset / slope,
            "random_state": random.to_json(),
        });
    }
    if samples > 0 {
        let s = witness::sample_separable(partition.modes(), partition.photons_a(), samples, seed)?;
        out["separable_sample"] = serde_json::to_value(s).expect("sample");
    }
    emit_json(output, &out)
}

fn cmd_bounds(modes: usize, photons: usize, output: Option<&Path>) -> CliResult<()> {
    check_partition(modes, photons)?;
    let basic = witness::basic_bound(modes, photons)?;
    let thresholds = witness::state_fidelity_thresholds(modes, photons)?;
    let law = witness::mixture_threshold(modes, photons)?;
    let partition = Partition::new(modes, photons)?;
    // Dense diagonalization is only cheap for small joint spaces.
    let max_eigenvalue = (partition.joint_dim() <= 1024)
        .then(|| partition.witness_operator().map(|w| witness::max_eigenvalue(&w)))
        .transpose()?;
    emit_json(
        output,
        &json!({
            "modes": modes,
            "photons_a": photons,
            "basic_bound": fockwitness::rational::to_f64(basic),
            "basic_bound_exact": basic.to_string(),
            "ideal_optimized_lhs_exact": partition.ideal_optimized_lhs().to_string(),
            "basic_fidelity_threshold": thresholds.basic_f64(),
            "basic_fidelity_threshold_exact": thresholds.basic.to_string(),
            "tight_fidelity_threshold": thresholds.tight_f64(),
            "tight_fidelity_threshold_exact": thresholds.tight.to_string(),
            "mixture_law": law,
            "witness_max_eigenvalue": max_eigenvalue,
        }),
    )
}

fn cmd_suppression(modes: usize, pattern: &str, output: Option<&Path>) -> CliResult<()> {
    let input = parse_pattern(pattern)?;
    if input.modes() != modes {
        return Err(CliError::Usage(format!(
            "pattern {input} has {} modes, expected {modes}",
            input.modes()
        )));
    }
    check_dim(basis_size(modes, input.photons()))?;
    let basis = Arc::new(FockBasis::new(modes, input.photons())?);
    let start = PureState::basis_state(basis.clone(), &input)?;
    let out = linop::apply(&ModeUnitary::dft(modes), &start, fockwitness::Side::A)?;
    let probs = out.probabilities();
    let class = pattern_class(&input);
    let applies = class.cardinality() == 1;
    let mut groups = Vec::new();
    let mut violations = Vec::new();
    for k in 0..modes {
        let outcomes: Vec<Value> = (0..basis.len())
            .filter(|&i| k_value(basis.pattern(i)) == k)
            .map(|i| json!({ "pattern": basis.pattern(i), "probability": probs[i] }))
            .collect();
        let total: f64 = (0..basis.len())
            .filter(|&i| k_value(basis.pattern(i)) == k)
            .map(|i| probs[i])
            .sum();
        if applies && k != 0 && total >= 1e-12 {
            violations.push(k);
        }
        groups.push(json!({ "K": k, "total_probability": total, "outcomes": outcomes }));
    }
    emit_json(
        output,
        &json!({
            "modes": modes,
            "input": input,
            "cardinality": class.cardinality(),
            "suppression_applies": applies,
            "groups": groups,
            "violations": violations,
        }),
    )
}
