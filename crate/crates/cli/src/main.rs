use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtm_core::circsim::{
    materialize_sparse, output_distribution, run_from, ImageCache, Mode, SimOptions, SparseState,
    DEFAULT_SUPPORT_CAP, PRUNE,
};
use qtm_core::decompose::{synthesize_work, DecomposeError, WorkMatrix};
use qtm_core::numerics::{CertifiedReal, Cx, TOL_CONSTRUCT, TOL_E2E};
use qtm_core::qtm::{measure_window, run, validate, QtmError, Verdict};
use qtm_core::yao::{
    encode_input, CompiledCircuit, Compiler, GateDictionary, KeyCache, Precision, ANGLE_BITS,
};
use qtmc::circuit_code::{parse_circuit, write_circuit, MachineInfo};
use qtmc::equiv::Equivalence;
use qtmc::matrix_text::{parse_matrix, MatrixFile};
use qtmc::qtm_text::{parse_qtm, QtmFile};
use qtmc::random::random_unitary;
use qtmc::{CliError, FormatError};

/// Environment variable overriding the simulator's support cap.
const SUPPORT_CAP_VAR: &str = "QTMC_SUPPORT_CAP";
/// Tape ring used when checking well-formedness.
const DEFAULT_RING: usize = 5;

#[derive(Parser)]
#[command(
    name = "qtmc",
    version,
    about = "Compile quantum Turing machines to circuits and check the result"
)]
struct Cli {
    /// Tolerance on the total-variation distance between machine and circuit.
    #[arg(long, global = true, default_value_t = TOL_E2E)]
    tol_e2e: f64,
    /// Tolerance for unitarity and orthonormality checks.
    #[arg(long, global = true, default_value_t = TOL_CONSTRUCT)]
    tol_construct: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a machine description.
    #[command(subcommand)]
    Qtm(QtmCommand),
    /// Compile a machine to a circuit code file.
    Compile(CompileArgs),
    /// Print the circuit code for inputs of length n.
    Codegen(CodegenArgs),
    /// Simulate a circuit code file.
    #[command(subcommand)]
    Circuit(CircuitCommand),
    /// Synthesize a unitary matrix into elementary gates.
    Synth(SynthArgs),
    /// Compare machine and circuit output distributions.
    Equiv(EquivArgs),
}

#[derive(Subcommand)]
enum QtmCommand {
    /// Check that the time evolution is unitary on a circular tape.
    Validate {
        file: PathBuf,
        /// Circular tape length used for the check.
        #[arg(long, default_value_t = DEFAULT_RING)]
        ring: usize,
    },
    /// Run the machine and print the window distribution.
    Run {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long)]
        t: Option<usize>,
    },
}

#[derive(Args)]
struct MachineArgs {
    #[arg(long)]
    qtm: PathBuf,
    /// Input length.
    #[arg(long)]
    n: usize,
    /// Step count; defaults to the machine's time bound at n.
    #[arg(long)]
    t: Option<usize>,
    /// Build G1 with certified arithmetic and record angles to this many bits.
    #[arg(long, value_name = "BITS")]
    certify: Option<u32>,
}

#[derive(Args)]
struct CompileArgs {
    #[command(flatten)]
    machine: MachineArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CodegenArgs {
    #[command(flatten)]
    machine: MachineArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Dictionary,
    Elementary,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Dictionary => Mode::Dictionary,
            ModeArg::Elementary => Mode::Elementary,
        }
    }
}

#[derive(Subcommand)]
enum CircuitCommand {
    /// Run a circuit on one input and print the output distribution.
    Run {
        file: PathBuf,
        /// Input word for compiled machines, or a bit string for plain circuits.
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, value_enum, default_value = "elementary")]
        mode: ModeArg,
        /// Machine the circuit was compiled from; supplies G1's matrix in dictionary mode.
        #[arg(long)]
        qtm: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SynthArgs {
    /// Matrix file; omit to synthesize a seeded random unitary.
    matrix: Option<PathBuf>,
    /// Dimension of the random unitary.
    #[arg(long, conflicts_with = "matrix")]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Synthesize with certified arithmetic and record angles to this many bits.
    #[arg(long, value_name = "BITS")]
    certify: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EquivArgs {
    #[arg(long)]
    qtm: PathBuf,
    /// Comma-separated input words; an empty item is the empty word.
    #[arg(long, allow_hyphen_values = true)]
    inputs: String,
    /// Step count; defaults to the machine's time bound per input.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, value_enum, default_value = "elementary")]
    mode: ModeArg,
}

enum Outcome {
    Ok,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qtmc: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Qtm(QtmCommand::Validate { file, ring }) => {
            let m = load_qtm(file)?;
            match validate(&m.spec, *ring, cli.tol_construct)? {
                Verdict::WellFormed => {
                    println!("well-formed");
                    Ok(Outcome::Ok)
                }
                Verdict::Violation(msg) => {
                    println!("violation: {msg}");
                    Ok(Outcome::Fail)
                }
            }
        }
        Command::Qtm(QtmCommand::Run { file, input, t }) => {
            let m = load_qtm(file)?;
            let x = m.symbols.parse(input)?;
            let steps = steps(&m, x.len(), *t)?;
            let dist = measure_window(&run(&m.spec, &x, steps)?, steps)?;
            let lines: Vec<(String, f64)> = dist
                .iter()
                .map(|(w, p)| (m.symbols.render(w), *p))
                .collect();
            print_distribution(lines)?;
            Ok(Outcome::Ok)
        }
        Command::Compile(args) => {
            let (m, compiler, dict, circ) = compile(cli, &args.machine)?;
            let mut out = BufWriter::new(fs::File::create(&args.out)?);
            write_circuit(
                &mut out,
                &dict,
                &circ,
                Some(&machine_info(&m)),
                &mut KeyCache::default(),
            )?;
            out.flush()?;
            println!(
                "wires {} t {} gates {} g1-gates {} dict {} hash {}",
                circ.wires(),
                circ.provenance().steps,
                circ.gate_count(),
                compiler.g1().gates().len(),
                dict.len(),
                dict.content_hash()
            );
            Ok(Outcome::Ok)
        }
        Command::Codegen(args) => {
            let (m, _, dict, circ) = compile(cli, &args.machine)?;
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            write_circuit(
                &mut out,
                &dict,
                &circ,
                Some(&machine_info(&m)),
                &mut KeyCache::default(),
            )?;
            out.flush()?;
            Ok(Outcome::Ok)
        }
        Command::Circuit(CircuitCommand::Run {
            file,
            input,
            mode,
            qtm,
        }) => circuit_run(file, input, (*mode).into(), qtm.as_deref()),
        Command::Synth(args) => synth(cli, args),
        Command::Equiv(args) => {
            let m = load_qtm(&args.qtm)?;
            check_well_formed(&m, cli.tol_construct)?;
            let compiler = Compiler::new(&m.spec, Precision::Fast)?;
            let inputs: Vec<Vec<usize>> = args
                .inputs
                .split(',')
                .map(|w| m.symbols.parse(w))
                .collect::<Result<_, _>>()?;
            let mut harness = Equivalence::new(&compiler).with_options(sim_options()?);
            let mut passed = true;
            for x in &inputs {
                let steps = steps(&m, x.len(), args.t)?;
                let report = harness.check(
                    std::slice::from_ref(x),
                    steps,
                    args.mode.into(),
                    cli.tol_e2e,
                )?;
                passed &= report.passed();
                for line in report
                    .render(&m.symbols)
                    .lines()
                    .filter(|l| l.starts_with("input"))
                {
                    println!("{line}");
                }
            }
            println!("verdict {}", if passed { "pass" } else { "fail" });
            Ok(if passed { Outcome::Ok } else { Outcome::Fail })
        }
    }
}

fn load_qtm(path: &Path) -> Result<QtmFile, CliError> {
    let text = fs::read_to_string(path)?;
    parse_qtm(&text).map_err(|e| {
        FormatError {
            line: e.line,
            message: format!("{}: {}", path.display(), e.message),
        }
        .into()
    })
}

fn steps(m: &QtmFile, n: usize, t: Option<usize>) -> Result<usize, CliError> {
    t.or_else(|| m.steps_for(n))
        .ok_or_else(|| FormatError::plain("no --t given and the machine has no time line").into())
}

fn sim_options() -> Result<SimOptions, CliError> {
    let cap = match std::env::var(SUPPORT_CAP_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            FormatError::plain(format!("{SUPPORT_CAP_VAR}={v:?} is not a positive integer"))
        })?,
        Err(_) => DEFAULT_SUPPORT_CAP,
    };
    Ok(SimOptions {
        prune: PRUNE,
        support_cap: cap,
    })
}

fn machine_info(m: &QtmFile) -> MachineInfo {
    MachineInfo {
        states: m.spec.states(),
        initial: m.spec.initial(),
        symbols: m.symbols.clone(),
    }
}

/// Rejects machines whose evolution is not unitary; machines too large for
/// the explicit check are passed on to G1's own orthonormality checks.
fn check_well_formed(m: &QtmFile, tol: f64) -> Result<(), CliError> {
    match validate(&m.spec, DEFAULT_RING, tol) {
        Ok(Verdict::WellFormed) | Err(QtmError::SizeLimit { .. }) => Ok(()),
        Ok(Verdict::Violation(msg)) => {
            Err(FormatError::plain(format!("machine is not well-formed: {msg}")).into())
        }
        Err(e) => Err(e.into()),
    }
}

fn compile(
    cli: &Cli,
    args: &MachineArgs,
) -> Result<(QtmFile, Compiler, GateDictionary, CompiledCircuit), CliError> {
    let m = load_qtm(&args.qtm)?;
    check_well_formed(&m, cli.tol_construct)?;
    let precision = match args.certify {
        Some(bits) => Precision::Certified { bits },
        None => Precision::Fast,
    };
    let compiler = Compiler::new(&m.spec, precision)?;
    let steps = steps(&m, args.n, args.t)?;
    let (dict, circ) = compiler.compile(args.n, steps)?;
    Ok((m, compiler, dict, circ))
}

fn print_distribution(mut lines: Vec<(String, f64)>) -> io::Result<()> {
    lines.sort_by(|a, b| a.0.cmp(&b.0));
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for (w, p) in lines {
        writeln!(out, "{w} {p:.12}")?;
    }
    out.flush()
}

fn circuit_run(
    file: &Path,
    input: &str,
    mode: Mode,
    qtm: Option<&Path>,
) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(file)?;
    let parsed = parse_circuit(&text)?;
    let mut circ = parsed.circuit;
    if mode == Mode::Dictionary {
        if let Some(g1) = circ.g1().cloned() {
            let unitary = match qtm {
                Some(path) => {
                    let m = load_qtm(path)?;
                    let hash = m.spec.content_hash();
                    if circ.provenance().qtm_hash.as_deref() != Some(hash.as_str()) {
                        return Err(FormatError::plain(
                            "circuit was compiled from a different machine",
                        )
                        .into());
                    }
                    Compiler::new(&m.spec, Precision::Fast)?
                        .g1()
                        .unitary()
                        .cloned()
                        .expect("compiled G1 has a matrix")
                }
                None => materialize_sparse(g1.gates(), PRUNE)?,
            };
            circ = circ.with_g1(Arc::new(g1.with_unitary(unitary)));
        }
    }
    let opts = sim_options()?;
    match (&parsed.machine, circ.layout().copied()) {
        (Some(m), Some(layout)) => {
            let x = m.symbols.parse(input)?;
            let key = encode_input(&x, &layout, m.initial)?;
            let state = run_from(
                &circ,
                SparseState::basis(circ.wires(), key),
                mode,
                &opts,
                &mut ImageCache::new(),
            )?;
            let dist = output_distribution(&state, &layout)?;
            print_distribution(
                dist.iter()
                    .map(|(w, p)| (m.symbols.render(w), *p))
                    .collect(),
            )?;
        }
        _ => {
            let w = circ.wires();
            if input.len() != w || !input.chars().all(|c| c == '0' || c == '1') {
                return Err(FormatError::plain(format!("input must be a {w}-bit string")).into());
            }
            let key = u128::from_str_radix(input, 2).unwrap_or(0);
            let key = if w == 0 { 0 } else { key };
            let state = run_from(
                &circ,
                SparseState::basis(w, key),
                mode,
                &opts,
                &mut ImageCache::new(),
            )?;
            let lines = state
                .iter()
                .map(|(k, a)| {
                    (
                        if w == 0 {
                            String::new()
                        } else {
                            format!("{k:0w$b}")
                        },
                        a.norm_sqr(),
                    )
                })
                .collect();
            print_distribution(lines)?;
        }
    }
    Ok(Outcome::Ok)
}

fn synth(cli: &Cli, args: &SynthArgs) -> Result<Outcome, CliError> {
    let matrix = match (&args.matrix, args.random) {
        (Some(path), _) => parse_matrix(&fs::read_to_string(path)?)?,
        (None, Some(dim)) => {
            let dense = random_unitary(dim, args.seed);
            let exact = dense
                .entries()
                .iter()
                .map(|z| Cx {
                    re: CertifiedReal::from_f64(z.re).expect("finite"),
                    im: CertifiedReal::from_f64(z.im).expect("finite"),
                })
                .collect();
            MatrixFile { dense, exact }
        }
        (None, None) => return Err(FormatError::plain("give a matrix file or --random DIM").into()),
    };
    let dim = matrix.dense.dim();
    if !dim.is_power_of_two() {
        return Err(DecomposeError::DimNotPow2(dim).into());
    }
    let defect = matrix.dense.unitarity_defect();
    if defect > cli.tol_construct {
        return Err(DecomposeError::NotUnitary { defect }.into());
    }
    let (seq, bits) = match args.certify {
        Some(bits) => (
            synthesize_work(WorkMatrix::from_columns(dim, matrix.certified_columns()))?,
            bits,
        ),
        None => (
            synthesize_work(WorkMatrix::<f64>::from_dense(&matrix.dense))?,
            ANGLE_BITS,
        ),
    };
    let circ = CompiledCircuit::from_gates(seq);
    let mut cache = KeyCache::new(bits);
    let dict = circ.dictionary(&mut cache);
    match &args.out {
        Some(path) => {
            let mut out = BufWriter::new(fs::File::create(path)?);
            write_circuit(&mut out, &dict, &circ, None, &mut cache)?;
            out.flush()?;
            println!(
                "wires {} gates {} dict {}",
                circ.wires(),
                circ.gate_count(),
                dict.len()
            );
        }
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            write_circuit(&mut out, &dict, &circ, None, &mut cache)?;
            out.flush()?;
        }
    }
    Ok(Outcome::Ok)
}
