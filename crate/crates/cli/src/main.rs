use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use symcone::caselaw::{case_counts, classify, enumerate_quadruples};
use symcone::facial::{build_witness_with, spectral_frame, verify_certificate_json, WitnessTolerances};
use symcone::peirce::Pair;
use symcone::suites::{run_suite, SuiteOptions, SuiteReport, SUITE_NAMES};
use symcone::{
    fine_peirce, identity, in_cop, random_element, spectral, Algebra, AlgebraRef, Budget, CaseTag, CopStatus,
    Element, JordanFrame, Operator, Quadruple, SelfAdjointOp,
};

mod report;

use report::{fmt_f, Table};

const DEFAULT_SEED: u64 = 2024;

#[derive(Parser)]
#[command(name = "symcone", version, about = "Jordan algebras, Peirce blocks and copositive cones over symmetric cones")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Seed for every random choice.
    #[arg(long, global = true, env = "SYMCONE_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Worker threads for suite batches (0 = one per core).
    #[arg(long, global = true, env = "SYMCONE_THREADS", default_value_t = 0)]
    threads: usize,

    /// Numerical tolerance passed to decompositions and cone tests.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect an algebra descriptor.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Fine Peirce decomposition along the frame of an element.
    Peirce {
        #[arg(long)]
        spec: PathBuf,
        /// Element coordinates (JSON array); a seeded random element if absent.
        #[arg(long)]
        element: Option<PathBuf>,
    },
    /// Copositivity checks.
    #[command(subcommand)]
    Cop(CopCmd),
    /// Build a certificate that R+ c⊗c is a non-exposed extreme ray of COP(K).
    Witness(WitnessArgs),
    /// Case classification of index quadruples.
    #[command(subcommand)]
    Cases(CasesCmd),
    /// Invariant suites and certificate checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Dimension, rank, factors and identity.
    Info {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Subcommand)]
enum CopCmd {
    /// Decide whether an operator is copositive over the cone of squares.
    Check {
        /// Operator JSON: {"algebra": {...}, "matrix": [[...], ...]}.
        #[arg(long)]
        op: PathBuf,
        /// Algebra the operator must live on.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Random starts of the multistart search.
    #[arg(long, default_value_t = 64)]
    starts: usize,
    /// Gradient steps per start.
    #[arg(long, default_value_t = 500)]
    iterations: usize,
}

impl From<BudgetArgs> for Budget {
    fn from(b: BudgetArgs) -> Self {
        Budget {
            starts: b.starts,
            iterations: b.iterations,
        }
    }
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Primitive idempotent coordinates (JSON array).
    #[arg(long, conflicts_with = "frame_index")]
    idempotent: Option<PathBuf>,
    /// Use the k-th element of the frame of a seeded random element.
    #[arg(long)]
    frame_index: Option<usize>,
    /// Sampled cone points and probe exposers.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Subcommand)]
enum CasesCmd {
    /// Tag of a single quadruple (0-based indices).
    Classify { i: usize, j: usize, k: usize, l: usize },
    /// Partition table and per-case counts for rank r.
    Verify {
        #[arg(long)]
        rank: usize,
        /// Mark the corner of pairs with both indices >= p, as for c with p frame elements outside it.
        #[arg(long)]
        p: Option<usize>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run the invariant suites.
    All {
        /// Run only these suites.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITE_NAMES))]
        only: Vec<String>,
        /// Cut every sample count by ten.
        #[arg(long)]
        quick: bool,
        /// Swap in a non-symmetric operator fixture; the block suite must fail.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Re-check a witness certificate from its stored data.
    Cert { file: PathBuf },
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Failed = 1,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(s) => ExitCode::from(s as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<symcone::Error>() {
        Some(symcone::Error::NumericalFailure(_)) => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> anyhow::Result<Status> {
    match &cli.command {
        Command::Algebra(AlgebraCmd::Info { spec }) => algebra_info(cli, spec),
        Command::Peirce { spec, element } => peirce(cli, spec, element.as_deref()),
        Command::Cop(CopCmd::Check { op, spec, budget }) => cop_check(cli, op, spec.as_deref(), *budget),
        Command::Witness(args) => witness(cli, args),
        Command::Cases(CasesCmd::Classify { i, j, k, l }) => cases_classify(cli, Quadruple::new(*i, *j, *k, *l)),
        Command::Cases(CasesCmd::Verify { rank, p }) => cases_verify(cli, *rank, *p),
        Command::Verify(VerifyCmd::All {
            only,
            quick,
            inject_fault,
        }) => verify_all(cli, only, *quick, *inject_fault),
        Command::Verify(VerifyCmd::Cert { file }) => verify_cert(cli, file),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_algebra(path: &Path) -> anyhow::Result<AlgebraRef> {
    let text = read(path)?;
    Algebra::from_json(&text).map_err(|e| anyhow!(e).context(format!("parsing {}", path.display())))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoordsFile {
    Flat(Vec<f64>),
    Wrapped { coords: Vec<f64> },
}

fn load_element(alg: &AlgebraRef, path: &Path) -> anyhow::Result<Element> {
    let text = read(path)?;
    let coords = match serde_json::from_str::<CoordsFile>(&text).with_context(|| format!("parsing {}", path.display()))? {
        CoordsFile::Flat(c) | CoordsFile::Wrapped { coords: c } => c,
    };
    Ok(Element::new(alg, coords)?)
}

fn emit<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn algebra_info(cli: &Cli, spec: &Path) -> anyhow::Result<Status> {
    let alg = load_algebra(spec)?;
    let e = identity(&alg);
    if cli.format == Format::Json {
        emit(&json!({
            "algebra": alg.spec(),
            "dim": alg.dim(),
            "rank": alg.rank(),
            "factors": alg.factors().iter().map(|f| json!({
                "factor": f.to_string(),
                "dim": f.dim(),
                "rank": f.rank(),
            })).collect::<Vec<_>>(),
            "identity": e,
        }))?;
    } else {
        println!("{alg}: dim {}, rank {}", alg.dim(), alg.rank());
        let mut t = Table::new(&["factor", "dim", "rank", "offset"]);
        for (f, off) in alg.factors().iter().zip(alg.offsets()) {
            t.row(vec![f.to_string(), f.dim().to_string(), f.rank().to_string(), off.to_string()]);
        }
        print!("{t}");
        println!("identity {}", fmt_coords(e.coords()));
    }
    Ok(Status::Ok)
}

fn fmt_coords(c: &[f64]) -> String {
    format!("[{}]", c.iter().map(|x| fmt_f(*x)).collect::<Vec<_>>().join(", "))
}

fn peirce(cli: &Cli, spec: &Path, element: Option<&Path>) -> anyhow::Result<Status> {
    let alg = load_algebra(spec)?;
    let x = match element {
        Some(p) => load_element(&alg, p)?,
        None => random_element(&alg, cli.seed),
    };
    let sd = spectral(&x)?;
    let frame = JordanFrame::new(sd.frame.clone(), cli.tol)?;
    let sys = fine_peirce(&frame, cli.tol)?;
    if cli.format == Format::Json {
        emit(&json!({
            "element": x,
            "eigenvalues": sd.eigenvalues,
            "system": sys,
        }))?;
    } else {
        println!("{alg}: element {}", fmt_coords(x.coords()));
        let mut t = Table::new(&["i", "eigenvalue", "frame element"]);
        for (i, (l, c)) in sd.eigenvalues.iter().zip(&sd.frame).enumerate() {
            t.row(vec![i.to_string(), fmt_f(*l), fmt_coords(c.coords())]);
        }
        print!("{t}");
        let mut t = Table::new(&["pair", "dim E_ij"]);
        let mut total = 0;
        for p in sys.pairs() {
            let d = sys.space(p)?.dim();
            total += d;
            t.row(vec![format!("({}, {})", p.i, p.j), d.to_string()]);
        }
        print!("{t}");
        println!("total {total} of {}", alg.dim());
    }
    Ok(Status::Ok)
}

fn cop_check(cli: &Cli, op: &Path, spec: Option<&Path>, budget: BudgetArgs) -> anyhow::Result<Status> {
    let a = SelfAdjointOp::from_json(&read(op)?).with_context(|| format!("parsing {}", op.display()))?;
    if let Some(spec) = spec {
        let alg = load_algebra(spec)?;
        if *alg != **a.algebra() {
            bail!("operator lives on {}, not on {alg}", a.algebra());
        }
    }
    let rep = in_cop(&a, budget.into(), cli.seed, cli.tol)?;
    if cli.format == Format::Json {
        emit(&rep)?;
    } else {
        let status = match rep.status {
            CopStatus::CertifiedCopositive => "copositive",
            CopStatus::CertifiedNotCopositive => "not copositive",
            CopStatus::Inconclusive => "inconclusive",
        };
        println!("{status} ({:?})", rep.method);
        println!("min x•A(x) over unit cone points: {}", fmt_f(rep.min_value));
        if let Some(w) = &rep.witness {
            println!("witness {}", fmt_coords(w.coords()));
        }
        if !rep.detail.is_empty() {
            println!("{}", rep.detail);
        }
    }
    Ok(if rep.is_copositive() { Status::Ok } else { Status::Failed })
}

fn witness(cli: &Cli, args: &WitnessArgs) -> anyhow::Result<Status> {
    let alg = load_algebra(&args.spec)?;
    if alg.dim() < 2 {
        return Err(symcone::Error::HypothesisViolation(format!(
            "{alg} has dimension {}; a non-exposed ray needs dimension at least 2",
            alg.dim()
        ))
        .into());
    }
    let c = match (&args.idempotent, args.frame_index) {
        (Some(p), _) => load_element(&alg, p)?,
        (None, k) => {
            let frame = spectral_frame(&alg, cli.seed)?;
            let k = k.unwrap_or(0);
            frame
                .get(k)
                .cloned()
                .ok_or_else(|| anyhow!("frame index {k} out of range for rank {}", frame.len()))?
        }
    };
    let cert = build_witness_with(
        &c,
        args.samples,
        cli.seed,
        cli.tol,
        WitnessTolerances::default(),
        args.budget.into(),
    )?;
    let text = cert.to_json()?;
    if let Some(out) = &args.out {
        fs::write(out, format!("{text}\n")).with_context(|| format!("writing {}", out.display()))?;
    }
    match (cli.format, &args.out) {
        (Format::Json, None) => println!("{text}"),
        (Format::Json, Some(out)) => emit(&json!({
            "status": cert.status,
            "out": out,
            "failures": cert.failures,
        }))?,
        (Format::Text, _) => {
            let r = &cert.residuals;
            println!("{alg}: c = {}", fmt_coords(c.coords()));
            println!("d = e - c = {}", fmt_coords(cert.d.coords()));
            println!("copositivity: {:?} via {:?}", cert.copositivity.status, cert.copositivity.method);
            let mut t = Table::new(&["residual", "value"]);
            t.row(vec!["c∘c - c".into(), fmt_f(r.idempotency)]);
            t.row(vec!["c•d".into(), fmt_f(r.orthogonality)]);
            t.row(vec!["|‖A‖² - 2‖c‖²‖d‖²|".into(), fmt_f(r.norm_identity)]);
            t.row(vec!["<A, c⊗c>".into(), fmt_f(r.ray_pairing)]);
            t.row(vec!["min sampled form".into(), fmt_f(r.sampled_min_form)]);
            print!("{t}");
            let refuted = cert.probes.iter().filter(|p| p.refuted).count();
            println!("probes refuted: {refuted}/{}", cert.probes.len());
            for f in &cert.failures {
                println!("failure: {f}");
            }
            println!("{}", if cert.is_valid() { "VALID" } else { "INVALID" });
        }
    }
    Ok(if cert.is_valid() { Status::Ok } else { Status::Failed })
}

fn cases_classify(cli: &Cli, q: Quadruple) -> anyhow::Result<Status> {
    let tag = classify(&q).map_err(|e| anyhow!(e).context(format!("classifying {q}")))?;
    let inputs: Vec<_> = tag.required_inputs(&q).iter().map(|p| (p.i, p.j)).collect();
    if cli.format == Format::Json {
        emit(&json!({
            "quadruple": [q.i, q.j, q.k, q.l],
            "case": tag.value(),
            "leading_order": tag.leading_order(),
            "gamma_order": tag.gamma_order(),
            "inputs": inputs,
        }))?;
    } else {
        let gamma = tag.gamma_order().map_or("vanishes".to_string(), |g| format!("O(ε^{g})"));
        println!("{q}: {tag}, leading order ε^{}, γ {gamma}", tag.leading_order());
    }
    Ok(Status::Ok)
}

fn cases_verify(cli: &Cli, rank: usize, p: Option<usize>) -> anyhow::Result<Status> {
    if rank == 0 {
        bail!("rank must be at least 1");
    }
    if p.is_some_and(|p| p > rank) {
        bail!("p must not exceed the rank");
    }
    let listed = enumerate_quadruples(rank)?;
    let counts = case_counts(rank)?;
    let pairs: Vec<Pair> = Pair::all(rank).collect();
    let n = pairs.len();
    let total_ok = listed.len() == n * (n + 1) / 2;
    let tag_of = |a: Pair, b: Pair| listed.iter().find(|(q, _)| q.left() == a && q.right() == b).map(|(_, t)| *t);
    let in_corner = |a: Pair| p.is_some_and(|p| a.i >= p);
    if cli.format == Format::Json {
        let table: Vec<Vec<Option<u8>>> = pairs
            .iter()
            .map(|&a| pairs.iter().map(|&b| tag_of(a, b).map(|t| t.value())).collect())
            .collect();
        emit(&json!({
            "rank": rank,
            "pairs": pairs.iter().map(|q| [q.i, q.j]).collect::<Vec<_>>(),
            "table": table,
            "counts": CaseTag::all().zip(counts).map(|(t, c)| json!({"case": t.value(), "count": c})).collect::<Vec<_>>(),
            "total": listed.len(),
            "complete": total_ok,
        }))?;
    } else {
        let mut header = vec!["".to_string()];
        header.extend(pairs.iter().map(|q| format!("{}{}", q.i, q.j)));
        let mut t = Table::from_strings(header);
        for &a in &pairs {
            let mut row = vec![format!("{}{}", a.i, a.j)];
            for &b in &pairs {
                row.push(if in_corner(a) && in_corner(b) {
                    "*".into()
                } else if in_corner(a) {
                    String::new()
                } else {
                    tag_of(a, b).map_or(String::new(), |t| format!("({})", t.value()))
                });
            }
            t.row(row);
        }
        print!("{t}");
        let mut c = Table::new(&["case", "count"]);
        for (tag, k) in CaseTag::all().zip(counts) {
            c.row(vec![tag.to_string(), k.to_string()]);
        }
        print!("{c}");
        println!("{} quadruples, {n} pairs", listed.len());
    }
    Ok(if total_ok { Status::Ok } else { Status::Failed })
}

fn verify_all(cli: &Cli, only: &[String], quick: bool, inject_fault: bool) -> anyhow::Result<Status> {
    let opts = SuiteOptions {
        seed: cli.seed,
        quick,
        inject_fault,
    };
    let names: Vec<&str> = if only.is_empty() {
        SUITE_NAMES.to_vec()
    } else {
        SUITE_NAMES.iter().copied().filter(|n| only.iter().any(|o| o == n)).collect()
    };
    let reports: Vec<SuiteReport> = names
        .par_iter()
        .map(|n| run_suite(n, &opts))
        .collect::<symcone::Result<_>>()?;
    let pass = reports.iter().all(|r| r.pass);
    if cli.format == Format::Json {
        emit(&json!({"seed": cli.seed, "quick": quick, "pass": pass, "suites": reports}))?;
    } else {
        let mut t = Table::new(&["suite", "check", "count", "worst", "limit", "result"]);
        for r in &reports {
            for c in &r.checks {
                t.row(vec![
                    r.suite.clone(),
                    c.name.clone(),
                    c.count.to_string(),
                    fmt_f(c.worst),
                    fmt_f(c.limit),
                    if c.pass { "pass" } else { "FAIL" }.into(),
                ]);
            }
        }
        print!("{t}");
        for r in &reports {
            for c in r.failing() {
                println!("failed: {} / {}", r.suite, c.name);
            }
        }
        println!("{}", if pass { "all suites pass" } else { "verification failed" });
    }
    Ok(if pass { Status::Ok } else { Status::Failed })
}

fn verify_cert(cli: &Cli, file: &Path) -> anyhow::Result<Status> {
    let failures = verify_certificate_json(&read(file)?).with_context(|| format!("checking {}", file.display()))?;
    if cli.format == Format::Json {
        emit(&json!({"file": file, "valid": failures.is_empty(), "failures": failures}))?;
    } else if failures.is_empty() {
        println!("{}: valid", file.display());
    } else {
        for f in &failures {
            println!("{}: {f}", file.display());
        }
    }
    Ok(if failures.is_empty() { Status::Ok } else { Status::Failed })
}
