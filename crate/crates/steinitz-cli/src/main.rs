//! Command-line front end: instance generation, rearrangement, sign
//! assignment, exact oracles, certificate verification, and bound sweeps.
//!
//! Exit codes: 0 on success, 1 on validation failure, 2 when an oracle
//! refuses an oversized search space. Errors are emitted as one JSON object
//! on stderr.

mod io;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use steinitz::instances::{l1_lower_bound, random_zero_sum, seminorm_lower_bound};
use steinitz::oracles::{column_one_min, exact_u, exact_v};
use steinitz::signing::{apply_signs, assign_matrix_signs};
use steinitz::transference::{rearrange_with, Method, RearrangeOptions};
use steinitz::{verify_row_permuted, Error as LibError, NormSpec, RowPermutations, SignMatrix};

use io::{Instance, ReportFile, ReportOptions, SignsFile};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn from_lib(err: LibError) -> Self {
        let code = match err {
            LibError::BudgetExceeded { .. } => 2,
            _ => 1,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "steinitz",
    version,
    about = "Row-wise rearrangement of vector matrices with bounded prefix column sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    L1Lower,
    SeminormLower,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    L1,
    L2,
    Linf,
}

impl NormArg {
    fn spec(self) -> NormSpec {
        match self {
            NormArg::L1 => NormSpec::L1,
            NormArg::L2 => NormSpec::L2,
            NormArg::Linf => NormSpec::Linf,
        }
    }

    fn name(self) -> &'static str {
        match self {
            NormArg::L1 => "l1",
            NormArg::L2 => "l2",
            NormArg::Linf => "linf",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Pairing,
    ColumnGs,
}

impl MethodArg {
    fn method(self) -> Method {
        match self {
            MethodArg::Auto => Method::BestOf,
            MethodArg::Pairing => Method::PairingIteration,
            MethodArg::ColumnGs => Method::ColumnSteinitz,
        }
    }

    fn name(self) -> &'static str {
        match self {
            MethodArg::Auto => "auto",
            MethodArg::Pairing => "pairing",
            MethodArg::ColumnGs => "column-gs",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    U,
    V,
    Col1,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file (random zero-sum or a lower-bound family)
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        /// Ambient dimension
        #[arg(long)]
        d: usize,
        /// Rows (defaults to d for --kind l1-lower)
        #[arg(long)]
        k: Option<usize>,
        /// Columns (required for --kind random)
        #[arg(long)]
        n: Option<usize>,
        /// Horizontal copies for --kind l1-lower
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Norm for --kind random
        #[arg(long, value_enum, default_value_t = NormArg::L2)]
        norm: NormArg,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Rearrange an instance and write the certified report
    Rearrange {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = 64)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-6)]
        slack: f64,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write per-prefix norms of the result as `m,prefix_norm` rows
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sign the instance entries and report the achieved prefix bound
    Signs {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Exact brute-force oracles (refuse oversized searches with exit 2)
    Oracle {
        #[arg(value_enum)]
        which: OracleKind,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = steinitz::oracles::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Recheck a report against its instance; exit 0 iff all checks pass
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        report: PathBuf,
    },
    /// Sweep a parameter grid and record achieved vs theoretical bounds
    Bench {
        /// Grid like "d=2,3;k=1,2;n=10,50;norm=l1,l2,linf"
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            #[derive(Serialize)]
            struct ErrorBody<'a> {
                error: &'a str,
                code: u8,
            }
            let body = serde_json::to_string(&ErrorBody {
                error: &err.message,
                code: err.code,
            })
            .expect("error body serializes");
            eprintln!("{body}");
            ExitCode::from(err.code)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gen {
            kind,
            d,
            k,
            n,
            s,
            seed,
            norm,
            output,
        } => cmd_gen(kind, d, k, n, s, seed, norm, &output),
        Command::Rearrange {
            input,
            method,
            max_iters,
            slack,
            output,
            csv,
        } => cmd_rearrange(&input, method, max_iters, slack, &output, csv.as_deref()),
        Command::Signs { input, output } => cmd_signs(&input, &output),
        Command::Oracle {
            which,
            input,
            budget,
        } => cmd_oracle(which, &input, budget),
        Command::Verify { input, report } => cmd_verify(&input, &report),
        Command::Bench { grid, seed, output } => cmd_bench(&grid, seed, &output),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    kind: GenKind,
    d: usize,
    k: Option<usize>,
    n: Option<usize>,
    s: usize,
    seed: u64,
    norm: NormArg,
    output: &Path,
) -> Result<(), CliError> {
    let (matrix, spec) = match kind {
        GenKind::Random => {
            let k = k.ok_or_else(|| CliError::validation("--kind random requires --k"))?;
            let n = n.ok_or_else(|| CliError::validation("--kind random requires --n"))?;
            let spec = norm.spec();
            let matrix = random_zero_sum(d, k, n, &spec, seed).map_err(CliError::from_lib)?;
            (matrix, spec)
        }
        GenKind::L1Lower => {
            let k = k.unwrap_or(d);
            l1_lower_bound(d, s, k).map_err(CliError::from_lib)?
        }
        GenKind::SeminormLower => seminorm_lower_bound(d).map_err(CliError::from_lib)?,
    };
    io::write_json(output, &Instance::from_parts(&matrix, spec))
}

fn cmd_rearrange(
    input: &Path,
    method: MethodArg,
    max_iters: usize,
    slack: f64,
    output: &Path,
    csv: Option<&Path>,
) -> Result<(), CliError> {
    let instance = Instance::load(input)?;
    let matrix = instance.matrix()?;
    let opts = RearrangeOptions {
        max_iters,
        target_slack: slack,
        ..RearrangeOptions::default()
    };
    let report = rearrange_with(&matrix, &instance.norm, opts, method.method())
        .map_err(CliError::from_lib)?;

    if let Some(csv_path) = csv {
        let rearranged = matrix
            .apply_permutations(&report.permutations)
            .map_err(CliError::from_lib)?;
        let mut text = String::from("m,prefix_norm\n");
        for m in 1..=rearranged.n() {
            let sigma = rearranged
                .prefix_column_sums(m)
                .map_err(CliError::from_lib)?;
            writeln!(text, "{m},{}", instance.norm.eval(&sigma)).expect("write to string");
        }
        io::write_text(csv_path, &text)?;
    }

    let file = ReportFile {
        instance_digest: instance.digest(),
        options: ReportOptions {
            method: method.name().to_string(),
            max_iters: opts.max_iters,
            target_slack: opts.target_slack,
            zero_tolerance: opts.zero_tolerance,
        },
        report,
    };
    io::write_json(output, &file)
}

fn cmd_signs(input: &Path, output: &Path) -> Result<(), CliError> {
    let instance = Instance::load(input)?;
    let matrix = instance.matrix()?;
    let signs = assign_matrix_signs(&matrix, &instance.norm).map_err(CliError::from_lib)?;
    let signed = apply_signs(&matrix, &signs).map_err(CliError::from_lib)?;
    let max_prefix_norm = signed.max_prefix_norm(&instance.norm);
    let bound = (2 * instance.d) as f64 - 1.0;
    let file = SignsFile {
        d: instance.d,
        k: instance.k,
        n: instance.n,
        max_prefix_norm,
        bound,
        within_bound: max_prefix_norm <= bound + 1e-9,
        signs,
    };
    io::write_json(output, &file)
}

fn cmd_oracle(which: OracleKind, input: &Path, budget: u64) -> Result<(), CliError> {
    let instance = Instance::load(input)?;
    let matrix = instance.matrix()?;

    #[derive(Serialize)]
    struct OracleOutput<'a> {
        oracle: &'a str,
        value: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness_permutations: Option<RowPermutations>,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness_signs: Option<SignMatrix>,
    }

    let out = match which {
        OracleKind::U => {
            let (value, witness) =
                exact_u(&matrix, &instance.norm, budget).map_err(CliError::from_lib)?;
            OracleOutput {
                oracle: "u",
                value,
                witness_permutations: Some(witness),
                witness_signs: None,
            }
        }
        OracleKind::V => {
            let (value, witness) =
                exact_v(&matrix, &instance.norm, budget).map_err(CliError::from_lib)?;
            OracleOutput {
                oracle: "v",
                value,
                witness_permutations: None,
                witness_signs: Some(witness),
            }
        }
        OracleKind::Col1 => {
            let value = column_one_min(&matrix, &instance.norm).map_err(CliError::from_lib)?;
            OracleOutput {
                oracle: "col1",
                value,
                witness_permutations: None,
                witness_signs: None,
            }
        }
    };
    println!(
        "{}",
        serde_json::to_string(&out).expect("oracle output serializes")
    );
    Ok(())
}

fn cmd_verify(input: &Path, report_path: &Path) -> Result<(), CliError> {
    let instance = Instance::load(input)?;
    let matrix = instance.matrix()?;
    let file = ReportFile::load(report_path)?;
    let mut failures: Vec<String> = Vec::new();

    if file.instance_digest != instance.digest() {
        failures.push("instance digest does not match the report".into());
    }
    if !verify_row_permuted(&matrix, &file.report.permutations) {
        failures.push("permutations are not a bijection of the columns per row".into());
    } else {
        let rearranged = matrix
            .apply_permutations(&file.report.permutations)
            .map_err(CliError::from_lib)?;
        let recomputed = rearranged.max_prefix_norm(&instance.norm);
        if (recomputed - file.report.final_max_prefix).abs() > 1e-12 {
            failures.push(format!(
                "recomputed max prefix {recomputed} differs from claimed {}",
                file.report.final_max_prefix
            ));
        }
        if recomputed > file.report.bound_used + file.options.target_slack {
            failures.push(format!(
                "max prefix {recomputed} exceeds bound {} + slack",
                file.report.bound_used
            ));
        }
        for (orig, new) in matrix.total_sum().iter().zip(rearranged.total_sum()) {
            if (orig - new).abs() > 1e-9 {
                failures.push("total sum changed under the permutation".into());
                break;
            }
        }
    }
    let d = instance.d as f64;
    let dk = d * instance.k as f64;
    let expected_bound = match file.report.method {
        Method::PairingIteration => 4.0 * d - 2.0,
        Method::ColumnSteinitz => dk,
        Method::BestOf => dk.min(4.0 * d - 2.0),
    };
    if file.report.bound_used != expected_bound {
        failures.push(format!(
            "bound_used {} does not match the method's bound {expected_bound}",
            file.report.bound_used
        ));
    }
    if file.report.iterations != file.report.per_pass.len() {
        failures.push("iteration count does not match the recorded passes".into());
    }
    for (idx, pass) in file.report.per_pass.iter().enumerate() {
        if pass.output_max_prefix > pass.input_max_prefix / 2.0 + pass.achieved_v + 1e-9 {
            failures.push(format!("pass {idx} violates the halving inequality"));
        }
        if pass.achieved_v > 2.0 * d - 1.0 + 1e-9 {
            failures.push(format!("pass {idx} sign bound exceeds 2d-1"));
        }
    }

    if failures.is_empty() {
        println!("{{\"valid\":true}}");
        Ok(())
    } else {
        Err(CliError::validation(format!(
            "verification failed: {}",
            failures.join("; ")
        )))
    }
}

fn cmd_bench(grid: &str, seed: u64, output: &Path) -> Result<(), CliError> {
    let spec = parse_grid(grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::from("d,k,n,norm,seed,final_max_prefix,bound,iterations,within_bound\n");
    for &d in &spec.d {
        for &k in &spec.k {
            for &n in &spec.n {
                for norm in &spec.norms {
                    let sub_seed: u64 = rng.random();
                    let ns = norm.spec();
                    let matrix =
                        random_zero_sum(d, k, n, &ns, sub_seed).map_err(CliError::from_lib)?;
                    let report =
                        rearrange_with(&matrix, &ns, RearrangeOptions::default(), Method::BestOf)
                            .map_err(CliError::from_lib)?;
                    let within = report.final_max_prefix <= report.bound_used + 1e-6;
                    writeln!(
                        text,
                        "{d},{k},{n},{},{sub_seed},{},{},{},{within}",
                        norm.name(),
                        report.final_max_prefix,
                        report.bound_used,
                        report.iterations
                    )
                    .expect("write to string");
                }
            }
        }
    }
    io::write_text(output, &text)
}

struct GridSpec {
    d: Vec<usize>,
    k: Vec<usize>,
    n: Vec<usize>,
    norms: Vec<NormArg>,
}

fn parse_grid(grid: &str) -> Result<GridSpec, CliError> {
    let mut d = None;
    let mut k = None;
    let mut n = None;
    let mut norms = None;
    for part in grid.split(';') {
        let (key, values) = part.split_once('=').ok_or_else(|| {
            CliError::validation(format!("grid part '{part}' is not key=values"))
        })?;
        match key.trim() {
            "d" => d = Some(parse_usizes(values)?),
            "k" => k = Some(parse_usizes(values)?),
            "n" => n = Some(parse_usizes(values)?),
            "norm" => {
                let parsed = values
                    .split(',')
                    .map(|v| match v.trim() {
                        "l1" => Ok(NormArg::L1),
                        "l2" => Ok(NormArg::L2),
                        "linf" => Ok(NormArg::Linf),
                        other => Err(CliError::validation(format!("unknown norm '{other}'"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                norms = Some(parsed);
            }
            other => return Err(CliError::validation(format!("unknown grid key '{other}'"))),
        }
    }
    Ok(GridSpec {
        d: d.ok_or_else(|| CliError::validation("grid needs d=..."))?,
        k: k.ok_or_else(|| CliError::validation("grid needs k=..."))?,
        n: n.ok_or_else(|| CliError::validation("grid needs n=..."))?,
        norms: norms.ok_or_else(|| CliError::validation("grid needs norm=..."))?,
    })
}

fn parse_usizes(values: &str) -> Result<Vec<usize>, CliError> {
    values
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|e| CliError::validation(format!("bad grid value '{v}': {e}")))
        })
        .collect()
}
