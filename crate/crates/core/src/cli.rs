//! Command-line front end. Exit codes: 0 success, 1 validation or
//! verification failure, 2 usage or input error.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::gram::{check_balanced, compute_gram, diagnostics, gram_stats, GramError, GramStats};
use crate::hecke::{benson_curtis_vertex, rep_matrices, validate_wgraph, CoxeterSystem, WGraph};
use crate::integer_linear::{PadicSolver, PRIME_SCHEDULE};
use crate::poly_matrix::PolyMatrix;
use crate::poly_recovery::{detect_degree, lift_samples, EvalSample, RecoveryPolicy};
use crate::polyring_linear::LiftConfig;
use crate::rational_recovery::{recover_rational, Residue};
use crate::rep_engine::{standard_basis_with, RepError};

#[derive(Debug, Parser)]
#[command(name = "hecke-gram", version, about = "Exact linear algebra over Z and Z[v], and Gram matrices of W-graph representations")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Prime for p-adic membership tests (default: built-in schedule).
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    #[arg(long, global = true, default_value_t = 200)]
    pub degree_bound: usize,
    #[arg(long, global = true, default_value_t = 20)]
    pub denominator_bound: u64,
    /// First place of the specialization windows.
    #[arg(long, global = true)]
    pub place_start: Option<u64>,
    /// Benson-Curtis subset, 1-based generators, e.g. "1,2,3,5,6".
    #[arg(long = "subset-J", global = true)]
    pub subset_j: Option<String>,
    /// Worker threads for per-place computations.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Accepted for reproducible scripting; all computations are deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check W-graph conditions, quadratic and braid relations.
    Validate {
        wgraph: PathBuf,
        coxeter: PathBuf,
    },
    /// Schreier tree of the standard basis at a specialization of v.
    Tree {
        wgraph: PathBuf,
        #[arg(long, default_value_t = 1)]
        place: i64,
    },
    /// Compute and verify the primitive Gram matrix.
    Gram {
        wgraph: PathBuf,
        coxeter: PathBuf,
        /// Name used in the statistics row.
        #[arg(long)]
        name: Option<String>,
        /// Also report the experimental observations on the bases.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Statistics row of a Gram matrix file.
    Stats {
        matrix: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Rational or polynomial recovery from data on standard input.
    Recover {
        #[arg(value_enum)]
        mode: RecoverMode,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RecoverMode {
    /// Lines "a b": the fraction y/x congruent to a mod b.
    Rational,
    /// Lines "place value": the polynomial through the samples.
    Poly,
    /// Lines "place value" with unknown positive scalars.
    DegreeDetect,
}

/// Outcome of a command: text for standard output and an exit code.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }

    fn fail(code: i32, stdout: String, stderr: impl Into<String>) -> Self {
        Outcome { stdout, stderr: stderr.into(), code }
    }
}

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| Outcome::fail(2, String::new(), format!("{}: {e}", path.display())))
}

fn load_wgraph(path: &Path) -> Result<WGraph, Outcome> {
    WGraph::parse(&read(path)?).map_err(|e| Outcome::fail(2, String::new(), format!("{}: {e}", path.display())))
}

fn load_coxeter(path: &Path) -> Result<CoxeterSystem, Outcome> {
    CoxeterSystem::parse(&read(path)?).map_err(|e| Outcome::fail(2, String::new(), format!("{}: {e}", path.display())))
}

fn parse_subset(s: &str, rank: usize) -> Result<Vec<usize>, Outcome> {
    let mut out = Vec::new();
    for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let t = t.trim_start_matches('s');
        match t.parse::<usize>() {
            Ok(k) if (1..=rank).contains(&k) => out.push(k - 1),
            _ => return Err(Outcome::fail(2, String::new(), format!("bad generator '{t}' in --subset-J"))),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn lift_config(opts: &GlobalOpts) -> LiftConfig {
    let mut cfg = LiftConfig { degree_bound: opts.degree_bound, ..LiftConfig::default() };
    if let Some(p) = opts.place_start {
        cfg.place_start = p.max(2);
    }
    cfg
}

fn parse_rational(t: &str) -> Option<BigRational> {
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            (d != BigInt::from(0)).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(t.parse().ok()?)),
    }
}

fn data_lines(input: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    input
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap().split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
}

fn read_samples(input: &str) -> Result<Vec<EvalSample>, Outcome> {
    let mut out = Vec::new();
    for (ln, t) in data_lines(input) {
        let bad = || Outcome::fail(2, String::new(), format!("line {ln}: expected \"place value\""));
        if t.len() != 2 {
            return Err(bad());
        }
        let place: BigInt = t[0].parse().map_err(|_| bad())?;
        let value = parse_rational(t[1]).ok_or_else(bad)?;
        out.push(EvalSample::new(place, value));
    }
    Ok(out)
}

fn fraction(y: &BigInt, x: &BigInt) -> String {
    if *x == BigInt::from(1) {
        y.to_string()
    } else {
        format!("{y}/{x}")
    }
}

fn coeff_list(c: &[BigRational]) -> String {
    let parts: Vec<String> = c.iter().map(|q| fraction(q.numer(), q.denom())).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(",")
    }
}

/// Runs `recover` on the given input text.
pub fn cmd_recover(mode: RecoverMode, input: &str, opts: &GlobalOpts) -> Outcome {
    let den = BigInt::from(opts.denominator_bound);
    let policy = RecoveryPolicy {
        degree_bound: opts.degree_bound,
        denominator_bound: Some(den.clone()),
        ..RecoveryPolicy::default()
    };
    match mode {
        RecoverMode::Rational => {
            let mut out = String::new();
            let mut failed = false;
            for (ln, t) in data_lines(input) {
                let parsed = (t.len() == 2).then(|| Some((t[0].parse::<BigInt>().ok()?, t[1].parse::<BigInt>().ok()?))).flatten();
                let Some((a, b)) = parsed.filter(|(_, b)| *b >= BigInt::from(2)) else {
                    return Outcome::fail(2, out, format!("line {ln}: expected \"a b\" with b >= 2"));
                };
                match recover_rational(&Residue::new(a, b)) {
                    Some((y, x)) => writeln!(out, "{}", fraction(&y, &x)).unwrap(),
                    None => {
                        failed = true;
                        writeln!(out, "fail").unwrap();
                    }
                }
            }
            Outcome { stdout: out, stderr: String::new(), code: i32::from(failed) }
        }
        RecoverMode::Poly => {
            let samples = match read_samples(input) {
                Ok(s) => s,
                Err(o) => return o,
            };
            match lift_samples(&samples, opts.degree_bound, Some(&den)) {
                Ok(f) => Outcome::ok(format!("{}\n", coeff_list(f.coeffs()))),
                Err(e) => Outcome::fail(1, String::new(), e.to_string()),
            }
        }
        RecoverMode::DegreeDetect => {
            let samples = match read_samples(input) {
                Ok(s) => s,
                Err(o) => return o,
            };
            match detect_degree(&samples, &policy) {
                Ok(d) => {
                    let places: Vec<String> = d.places.iter().map(BigInt::to_string).collect();
                    Outcome::ok(format!(
                        "degree {}\nplaces {}\ncoefficients {}\n",
                        d.degree,
                        places.join(","),
                        coeff_list(d.poly.coeffs())
                    ))
                }
                Err(e) => Outcome::fail(1, String::new(), e.to_string()),
            }
        }
    }
}

fn cmd_validate(wgraph: &Path, coxeter: &Path) -> Result<Outcome, Outcome> {
    let g = load_wgraph(wgraph)?;
    let cox = load_coxeter(coxeter)?;
    let report = validate_wgraph(&g, &cox);
    if report.is_valid() {
        Ok(Outcome::ok(format!("valid: dimension {}, rank {}\n", g.dim(), g.rank())))
    } else {
        let mut out = String::new();
        for v in &report.violations {
            writeln!(out, "violation: {v}").unwrap();
        }
        Ok(Outcome::fail(1, out, format!("{} violation(s)", report.violations.len())))
    }
}

fn cmd_tree(wgraph: &Path, place: i64, opts: &GlobalOpts) -> Result<Outcome, Outcome> {
    let g = load_wgraph(wgraph)?;
    let subset = match &opts.subset_j {
        Some(s) => parse_subset(s, g.rank())?,
        None => crate::hecke::benson_curtis_subsets(&g)
            .into_iter()
            .next()
            .map(|(j, _)| j)
            .ok_or_else(|| Outcome::fail(1, String::new(), "no Benson-Curtis subset"))?,
    };
    let vertex = benson_curtis_vertex(&g, &subset).map_err(|e| Outcome::fail(1, String::new(), e.to_string()))?;
    let b = BigInt::from(place);
    let gens: Vec<_> = rep_matrices(&g)
        .map_err(|e| Outcome::fail(1, String::new(), e.to_string()))?
        .iter()
        .map(|m| m.eval(&b))
        .collect();
    let mut seed = vec![BigInt::from(0); g.dim()];
    seed[vertex] = BigInt::from(1);
    let primes: Vec<u64> = match opts.prime {
        Some(p) => vec![p],
        None => PRIME_SCHEDULE.to_vec(),
    };
    let mut last = RepError::BadPrimes;
    for p in primes {
        if !crate::arith::is_prime_u64(p) || p >= 1 << 32 {
            return Err(Outcome::fail(2, String::new(), format!("--prime {p} is not a prime below 2^32")));
        }
        match standard_basis_with(&gens, &seed, &mut PadicSolver::new(p, g.dim())) {
            Ok((_, tree)) => {
                let mut out = tree.to_text();
                let lengths: Vec<String> = tree.depths().iter().map(usize::to_string).collect();
                writeln!(out, "# lengths {}", lengths.join(",")).unwrap();
                return Ok(Outcome::ok(out));
            }
            Err(e) => last = e,
        }
    }
    Ok(Outcome::fail(1, String::new(), last.to_string()))
}

fn stats_block(stats: &GramStats, name: &str) -> String {
    format!("{}\n{}\n", GramStats::csv_header(), stats.csv_row(name))
}

fn write_or_print(text: String, opts: &GlobalOpts, out: &mut String) -> Result<(), Outcome> {
    match &opts.output {
        Some(p) => fs::write(p, text).map_err(|e| Outcome::fail(2, String::new(), format!("{}: {e}", p.display()))),
        None => {
            out.push_str(&text);
            Ok(())
        }
    }
}

fn cmd_gram(wgraph: &Path, coxeter: &Path, name: Option<&str>, diag: bool, opts: &GlobalOpts) -> Result<Outcome, Outcome> {
    let g = load_wgraph(wgraph)?;
    let cox = load_coxeter(coxeter)?;
    let subset = opts.subset_j.as_deref().map(|s| parse_subset(s, g.rank())).transpose()?;
    let cfg = lift_config(opts);
    let run = match compute_gram(&g, &cox, subset.as_deref(), &cfg) {
        Ok(r) => r,
        Err(e @ (GramError::Verification(_) | GramError::InvalidWGraph(_))) => {
            return Ok(Outcome::fail(1, String::new(), e.to_string()))
        }
        Err(e) => return Ok(Outcome::fail(1, String::new(), e.to_string())),
    };
    let mut out = String::new();
    write_or_print(run.p.to_dense_text(), opts, &mut out)?;
    let name = name
        .map(str::to_string)
        .unwrap_or_else(|| wgraph.file_stem().map_or("gram".into(), |s| s.to_string_lossy().into_owned()));
    out.push_str(&stats_block(&gram_stats(&run.p), &name));
    if diag {
        let subset: Vec<String> = run.subset.iter().map(|s| (s + 1).to_string()).collect();
        writeln!(out, "# subset J = {{{}}}, seed e{}", subset.join(","), run.vertex + 1).unwrap();
        writeln!(out, "# balanced: {}", if check_balanced(&run.p) { "yes" } else { "no" }).unwrap();
        for o in diagnostics(&run, &cfg) {
            writeln!(out, "# {}: {} ({})", o.name, if o.holds { "holds" } else { "fails" }, o.detail).unwrap();
        }
    }
    Ok(Outcome::ok(out))
}

fn cmd_stats(matrix: &Path, name: Option<&str>) -> Result<Outcome, Outcome> {
    let p = PolyMatrix::parse(&read(matrix)?).map_err(|e| Outcome::fail(2, String::new(), format!("{}: {e}", matrix.display())))?;
    let name = name
        .map(str::to_string)
        .unwrap_or_else(|| matrix.file_stem().map_or("matrix".into(), |s| s.to_string_lossy().into_owned()));
    Ok(Outcome::ok(stats_block(&gram_stats(&p), &name)))
}

/// Executes a parsed command line; `stdin` supplies data for `recover`.
pub fn execute(cli: &Cli, stdin: impl FnOnce() -> std::io::Result<String>) -> Outcome {
    if let Some(j) = cli.opts.jobs {
        // ignore the error if a pool was already installed
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let opts = &cli.opts;
    let result = match &cli.command {
        Command::Validate { wgraph, coxeter } => cmd_validate(wgraph, coxeter),
        Command::Tree { wgraph, place } => cmd_tree(wgraph, *place, opts),
        Command::Gram { wgraph, coxeter, name, diagnostics } => cmd_gram(wgraph, coxeter, name.as_deref(), *diagnostics, opts),
        Command::Stats { matrix, name } => cmd_stats(matrix, name.as_deref()),
        Command::Recover { mode } => match stdin() {
            Ok(input) => Ok(cmd_recover(*mode, &input, opts)),
            Err(e) => Err(Outcome::fail(2, String::new(), format!("stdin: {e}"))),
        },
    };
    result.unwrap_or_else(|e| e)
}

/// Entry point for the binary: parses arguments, runs, prints, and returns
/// the exit code.
pub fn main_with_args(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out = execute(&cli, || {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    });
    print!("{}", out.stdout);
    if !out.stderr.is_empty() {
        eprintln!("error: {}", out.stderr);
    }
    out.code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> GlobalOpts {
        Cli::try_parse_from(["hecke-gram", "recover", "rational"]).unwrap().opts
    }

    #[test]
    fn rational_mode() {
        let o = cmd_recover(RecoverMode::Rational, "68 101\n0 97\n198 997\n", &opts());
        assert_eq!(o, Outcome::ok("2/3\n0\n-7/5\n".into()));
        let o = cmd_recover(RecoverMode::Rational, "3 5\n", &opts());
        assert_eq!(o.code, 1);
        assert_eq!(cmd_recover(RecoverMode::Rational, "3\n", &opts()).code, 2);
    }

    #[test]
    fn poly_mode() {
        let o = cmd_recover(RecoverMode::Poly, "3 3/2\n5 5/2\n", &opts());
        assert_eq!(o.stdout, "0,1/2\n");
    }

    #[test]
    fn subset_parsing() {
        assert_eq!(parse_subset("s1, 3,2", 6).unwrap(), vec![0, 1, 2]);
        assert!(parse_subset("7", 6).is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(main_with_args(["hecke-gram".to_string(), "frobnicate".to_string()]), 2);
    }
}
