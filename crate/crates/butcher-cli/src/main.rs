//! Command-line front end for the truncated Butcher group library.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 parse error, 3 contract violation
//! (order mismatch, refused float verb), 4 selftest failure.

use butcher::io::{self, CoeffText};
use butcher::scalar::Rational;
use butcher::symplectic::Violation;
use butcher::tree::{ordered_subtrees, partitions, splittings, DecompositionTerm, Tree};
use butcher::{
    bracket, evolve, exp, log, right_translation_derivative, star, GroupElement, LieElement,
    RkTableau, Scalar,
};
use clap::{Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "butcher",
    version,
    about = "Exact-arithmetic calculator for the truncated Butcher group",
    after_help = "The default truncation order is 6; the BUTCHER_MAX_ORDER \
                  environment variable overrides it for verbs that take --max-order."
)]
struct Cli {
    /// Coefficient arithmetic mode.
    #[arg(long, value_enum, default_value_t = Arithmetic::Exact, global = true)]
    arithmetic: Arithmetic,

    /// Run exactness-demanding verbs (inv, exp, log, evolve, selftest) even
    /// in float mode.
    #[arg(long, global = true)]
    allow_approx: bool,

    /// Write the primary output to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Arithmetic {
    /// Arbitrary-precision rationals; every result is exact.
    Exact,
    /// Double precision, for finite-difference cross-checks.
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// List all rooted trees up to an order, graded and canonically sorted.
    Trees {
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Ordered-subtree classes of a tree, with multiplicities.
    Ost { tree: String },
    /// Edge-partition classes of a tree: skeleton, cut forest, multiplicity.
    Partitions { tree: String },
    /// Nontrivial splitting classes of a tree.
    Splittings { tree: String },
    /// Butcher product of two trees: attach the second below the first's root.
    Bprod { u: String, v: String },
    /// Group product of two element files.
    Mul { a: PathBuf, b: PathBuf },
    /// Group inverse of an element file via the partition (antipode) formula.
    Inv { a: PathBuf },
    /// Lie bracket of two tangent element files.
    Bracket { a: PathBuf, b: PathBuf },
    /// Star product of two tangent element files.
    Star { a: PathBuf, b: PathBuf },
    /// Lie group exponential of a tangent element file.
    Exp { a: PathBuf },
    /// Lie group logarithm of an element file.
    Log { a: PathBuf },
    /// Right product integral of a polynomial curve file, evaluated at t = 1.
    Evolve {
        curve: PathBuf,
        /// Emit the full solution curve instead of its time-1 element.
        #[arg(long)]
        full_curve: bool,
    },
    /// Derivative of right translation by B at the identity, in direction A.
    Dtrans { b: PathBuf, a: PathBuf },
    /// Check the symplectic conditions of an element file.
    SymplecticCheck {
        a: PathBuf,
        /// Check the tangent-space condition Q instead of P.
        #[arg(long)]
        tangent: bool,
        /// Restrict the check to pairs with |u| + |v| <= this order.
        #[arg(long)]
        order: Option<usize>,
        /// Print the first violating pair and its defect.
        #[arg(long)]
        witness: bool,
    },
    /// Elementary weights of a Runge-Kutta tableau JSON file.
    RkWeights {
        tableau: PathBuf,
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Run the invariant suite and report pass/fail per property.
    Selftest {
        #[arg(long)]
        max_order: Option<usize>,
        /// Random elements per property.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

enum Failure {
    Io(String),
    Parse(String),
    Contract(String),
    Selftest,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Contract(_) => 3,
            Failure::Selftest => 4,
        }
    }
}

fn parse_failure(err: impl std::fmt::Display) -> Failure {
    Failure::Parse(err.to_string())
}

fn contract_failure(err: impl std::fmt::Display) -> Failure {
    Failure::Contract(err.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, output.as_bytes())
                    .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
                None => {
                    print!("{output}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(failure) => fail(failure),
            }
        }
        Err(failure) => fail(failure),
    }
}

fn fail(failure: Failure) -> ExitCode {
    match &failure {
        Failure::Io(msg) | Failure::Parse(msg) | Failure::Contract(msg) => {
            eprintln!("error: {msg}");
        }
        Failure::Selftest => {}
    }
    ExitCode::from(failure.code())
}

fn default_order(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("BUTCHER_MAX_ORDER") {
        Ok(value) => value.trim().parse().map_err(|_| {
            Failure::Parse(format!("BUTCHER_MAX_ORDER is not a valid order: `{value}`"))
        }),
        Err(_) => Ok(6),
    }
}

/// Verbs whose contracts promise exact results.
fn requires_exact(command: &Command) -> bool {
    matches!(
        command,
        Command::Inv { .. }
            | Command::Exp { .. }
            | Command::Log { .. }
            | Command::Evolve { .. }
            | Command::Selftest { .. }
    )
}

fn run(cli: &Cli) -> Result<String, Failure> {
    if cli.arithmetic == Arithmetic::Float && requires_exact(&cli.command) && !cli.allow_approx {
        return Err(Failure::Contract(
            "this verb promises exact results; float mode needs --allow-approx".into(),
        ));
    }
    match &cli.command {
        Command::Trees { max_order } => {
            let order = default_order(*max_order)?;
            let mut out = String::new();
            for tree in butcher::enumerate_trees(order) {
                writeln!(out, "{tree}").unwrap();
            }
            Ok(out)
        }
        Command::Ost { tree } => {
            let tau = parse_tree(tree)?;
            Ok(format_terms(&ordered_subtrees(&tau)))
        }
        Command::Partitions { tree } => {
            let tau = parse_tree(tree)?;
            Ok(format_terms(&partitions(&tau)))
        }
        Command::Splittings { tree } => {
            let tau = parse_tree(tree)?;
            let mut out = String::new();
            for sp in splittings(&tau) {
                writeln!(
                    out,
                    "kept={} removed={} mult={}",
                    sp.kept, sp.removed, sp.multiplicity
                )
                .unwrap();
            }
            Ok(out)
        }
        Command::Bprod { u, v } => {
            let u = parse_tree(u)?;
            let v = parse_tree(v)?;
            Ok(format!("{}\n", u.butcher_product(&v)))
        }
        Command::Selftest {
            max_order,
            samples,
            seed,
        } => {
            let order = default_order(*max_order)?;
            let results = butcher::selftest::run(order, *samples, *seed);
            let mut out = String::new();
            let mut failures = 0;
            for r in &results {
                writeln!(
                    out,
                    "{} {} — {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                )
                .unwrap();
                failures += usize::from(!r.passed);
            }
            writeln!(
                out,
                "{} properties, {} failed, order {}",
                results.len(),
                failures,
                order
            )
            .unwrap();
            if failures > 0 {
                print!("{out}");
                return Err(Failure::Selftest);
            }
            Ok(out)
        }
        command => match cli.arithmetic {
            Arithmetic::Exact => run_typed::<Rational>(command),
            Arithmetic::Float => run_typed::<f64>(command),
        },
    }
}

fn run_typed<F: CoeffText>(command: &Command) -> Result<String, Failure> {
    match command {
        Command::Mul { a, b } => {
            let a = read_group::<F>(a)?;
            let b = read_group::<F>(b)?;
            let product = a.multiply(&b).map_err(contract_failure)?;
            Ok(io::write_group_element(&product))
        }
        Command::Inv { a } => {
            let a = read_group::<F>(a)?;
            Ok(io::write_group_element(&a.invert()))
        }
        Command::Bracket { a, b } => {
            let a = read_lie::<F>(a)?;
            let b = read_lie::<F>(b)?;
            let result = bracket(&a, &b).map_err(contract_failure)?;
            Ok(io::write_lie_element(&result))
        }
        Command::Star { a, b } => {
            let a = read_lie::<F>(a)?;
            let b = read_lie::<F>(b)?;
            let result = star(&a, &b).map_err(contract_failure)?;
            Ok(io::write_lie_element(&result))
        }
        Command::Exp { a } => {
            let a = read_lie::<F>(a)?;
            Ok(io::write_group_element(&exp(&a)))
        }
        Command::Log { a } => {
            let a = read_group::<F>(a)?;
            Ok(io::write_lie_element(&log(&a)))
        }
        Command::Evolve { curve, full_curve } => {
            let curve = read_text(curve).and_then(|text| {
                io::parse_curve::<F>(&text).map_err(file_failure)
            })?;
            let solution = evolve(&curve);
            if *full_curve {
                Ok(write_solution_curve(&solution))
            } else {
                Ok(io::write_group_element(&solution.at_one()))
            }
        }
        Command::Dtrans { b, a } => {
            let b = read_group::<F>(b)?;
            let a = read_lie::<F>(a)?;
            let result = right_translation_derivative(&b, &a).map_err(contract_failure)?;
            Ok(io::write_lie_element(&result))
        }
        Command::SymplecticCheck {
            a,
            tangent,
            order,
            witness,
        } => {
            if *tangent {
                let x = read_lie::<F>(a)?;
                let x = restrict_lie(x, *order)?;
                report_check(
                    "tangent-symplectic",
                    butcher::symplectic::check_tangent_symplectic(&x),
                    *witness,
                )
            } else {
                let a = read_group::<F>(a)?;
                let a = restrict_group(a, *order)?;
                report_check(
                    "symplectic",
                    butcher::symplectic::check_symplectic(&a),
                    *witness,
                )
            }
        }
        Command::RkWeights { tableau, max_order } => {
            let order = default_order(*max_order)?;
            let text = read_text(tableau)?;
            let tableau = RkTableau::<F>::from_json(&text).map_err(parse_failure)?;
            let mismatches = tableau.row_sum_mismatches();
            if !mismatches.is_empty() {
                eprintln!(
                    "warning: row sums of A do not match c at stages {:?}",
                    mismatches
                );
            }
            Ok(io::write_group_element(&tableau.elementary_weights(order)))
        }
        Command::Trees { .. }
        | Command::Ost { .. }
        | Command::Partitions { .. }
        | Command::Splittings { .. }
        | Command::Bprod { .. }
        | Command::Selftest { .. } => unreachable!("handled before arithmetic dispatch"),
    }
}

fn parse_tree(text: &str) -> Result<Tree, Failure> {
    text.parse().map_err(parse_failure)
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn file_failure(err: io::FileError) -> Failure {
    if err.is_contract_violation() {
        Failure::Contract(err.to_string())
    } else {
        Failure::Parse(err.to_string())
    }
}

fn read_group<F: CoeffText>(path: &Path) -> Result<GroupElement<F>, Failure> {
    let text = read_text(path)?;
    io::parse_group_element(&text).map_err(file_failure)
}

fn read_lie<F: CoeffText>(path: &Path) -> Result<LieElement<F>, Failure> {
    let text = read_text(path)?;
    io::parse_lie_element(&text).map_err(file_failure)
}

fn restrict_group<F: Scalar>(
    a: GroupElement<F>,
    order: Option<usize>,
) -> Result<GroupElement<F>, Failure> {
    match order {
        Some(n) if n != a.max_order() => a.truncate(n).map_err(contract_failure),
        _ => Ok(a),
    }
}

fn restrict_lie<F: Scalar>(
    x: LieElement<F>,
    order: Option<usize>,
) -> Result<LieElement<F>, Failure> {
    match order {
        Some(n) if n != x.max_order() => x.truncate(n).map_err(contract_failure),
        _ => Ok(x),
    }
}

fn report_check<F: CoeffText>(
    label: &str,
    outcome: Result<(), Violation<F>>,
    witness: bool,
) -> Result<String, Failure> {
    match outcome {
        Ok(()) => Ok(format!("{label}: true\n")),
        Err(v) => {
            let mut out = format!("{label}: false\n");
            if witness {
                writeln!(
                    out,
                    "witness: u={} v={} defect={}",
                    v.u,
                    v.v,
                    v.defect.to_text()
                )
                .unwrap();
            }
            Ok(out)
        }
    }
}

fn format_terms(terms: &[DecompositionTerm]) -> String {
    let mut out = String::new();
    for term in terms {
        let kept = term
            .kept
            .as_ref()
            .map_or_else(|| "-".to_string(), |t| t.encode());
        let removed = if term.removed.is_empty() {
            "-".to_string()
        } else {
            term.removed.to_string()
        };
        writeln!(out, "kept={kept} removed={removed} mult={}", term.multiplicity).unwrap();
    }
    out
}

fn write_solution_curve<F: CoeffText>(solution: &butcher::SolutionCurve<F>) -> String {
    let table = butcher::TreeTable::shared(solution.max_order());
    let mut out = format!("order {}\n", solution.max_order());
    for (tree, poly) in table.trees().iter().zip(solution.polys()) {
        if poly.coeffs().is_empty() {
            continue;
        }
        out.push_str(&tree.encode());
        for c in poly.coeffs() {
            out.push(' ');
            out.push_str(&c.to_text());
        }
        out.push('\n');
    }
    out
}
