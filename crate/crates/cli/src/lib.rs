//! Commands behind the `qdouble` binary. Each command returns a
//! [`ReportDocument`] whose JSON form depends only on the configuration.

use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdouble::abelian::{solve_ab_system, AbElem, FinAbGroup};
use qdouble::bounds::{centralizer_report, BoundsReport};
use qdouble::double::{galois_failures, QuantumDouble};
use qdouble::group::{make_group_with_cap, Family, DEFAULT_ORDER_CAP};
use qdouble::partition::{
    default_s_range, lemma_solvable, random_template, s_independence_check, PartitionSystem, SetPartition,
    WreathPowerSystem,
};
use qdouble::Error;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub mod oracle;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "qdouble",
    version,
    about = "Exact indicator and bound computations for quantum doubles of finite groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads (0 uses every core).
    #[arg(long, default_value_t = 0, global = true)]
    pub jobs: usize,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Largest group order that will be enumerated.
    #[arg(long = "cap-order", default_value_t = DEFAULT_ORDER_CAP, global = true)]
    pub cap_order: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Indicator table of every irreducible D(G)-module for n = 1..nmax.
    Indicators {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 8)]
        nmax: u64,
    },
    /// Checks f_y(z) = f_y(z^s) for every base point y and n = 1..nmax.
    Galois {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 12)]
        nmax: u64,
    },
    /// Centralizer witness in the truncated substitution group over F_p.
    Bounds {
        #[arg(long)]
        p: u32,
    },
    /// Random partition systems against exhaustive search, or with
    /// --sindep, s-independence of the reduced wreath systems.
    Lemma {
        /// Number of random instances.
        #[arg(long)]
        fuzz: Option<usize>,
        #[arg(long)]
        sindep: bool,
        #[arg(long, default_value_t = 4)]
        r: usize,
        #[arg(long = "B")]
        b: Option<String>,
        #[arg(long)]
        n: Option<u64>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub format: Format,
    pub seed: u64,
    pub cap_order: u64,
}

impl From<&Cli> for RunConfig {
    fn from(cli: &Cli) -> Self {
        RunConfig {
            command: cli.command.clone(),
            format: cli.common.format,
            seed: cli.common.seed,
            cap_order: cli.common.cap_order,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    /// Whether every internal cross-check passed.
    pub ok: bool,
    pub payload: serde_json::Value,
    #[serde(skip)]
    pub text: String,
    #[serde(skip)]
    pub csv: Option<String>,
}

impl ReportDocument {
    fn new(config: &RunConfig, ok: bool, payload: serde_json::Value, text: String) -> Self {
        ReportDocument {
            tool: "qdouble",
            version: env!("CARGO_PKG_VERSION"),
            config: config.clone(),
            ok,
            payload,
            text,
            csv: None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Text => self.text.clone(),
            Format::Csv => self.csv.clone().unwrap_or_else(|| self.text.clone()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok {
            EXIT_OK
        } else {
            EXIT_VERIFY
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Resource(_) => EXIT_RESOURCE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Resource(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceCap { .. } | Error::ClassCap { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn run(config: &RunConfig) -> CliResult<ReportDocument> {
    match &config.command {
        Command::Indicators { .. } => cmd_indicators(config),
        Command::Galois { .. } => cmd_galois(config),
        Command::Bounds { .. } => cmd_bounds(config),
        Command::Lemma { .. } => cmd_lemma(config),
    }
}

fn quantum_double(spec: &str, cap: u64) -> CliResult<QuantumDouble> {
    let group = Arc::new(make_group_with_cap(spec, cap)?);
    Ok(QuantumDouble::new(group)?)
}

pub fn cmd_indicators(config: &RunConfig) -> CliResult<ReportDocument> {
    let Command::Indicators { group, nmax } = &config.command else { unreachable!() };
    if *nmax == 0 {
        return Err(CliError::Usage("--nmax must be at least 1".into()));
    }
    let qd = quantum_double(group, config.cap_order)?;
    let table = qd.integrality_report(*nmax);
    let mut failures = Vec::new();
    for class in 0..qd.sectors().len() {
        for n in 1..=*nmax {
            if !qd.identity_check(class, n) {
                failures.push(serde_json::json!({"check": "identity", "class": class, "n": n}));
            }
            if qd.sector_indicators(class, n) != qd.indicators_via_f(class, n) {
                failures.push(serde_json::json!({"check": "two-path", "class": class, "n": n}));
            }
        }
    }
    let ok = failures.is_empty();
    let mut payload = table.to_json();
    payload["checks"] = serde_json::json!({ "passed": ok, "failures": failures });

    let mut text = String::new();
    let _ = writeln!(
        text,
        "group {}  |G| = {}  irreps of D(G): {}",
        table.group_spec,
        qd.group().order(),
        table.irreps.len()
    );
    let _ = write!(text, "{:>5} {:>5} {:>5}", "class", "irrep", "dim");
    for n in 1..=*nmax {
        let _ = write!(text, " {:>8}", format!("n={n}"));
    }
    text.push('\n');
    for (label, row) in table.irreps.iter().zip(&table.values) {
        let _ = write!(text, "{:>5} {:>5} {:>5}", label.class, label.irrep, label.dim);
        for v in row {
            let _ = write!(text, " {:>8}", v.to_string());
        }
        text.push('\n');
    }
    let _ = writeln!(text, "verdict: {}; cross-checks {}", table.verdict(), if ok { "passed" } else { "FAILED" });

    let mut csv = String::from("class,irrep,dim,n,value,is_integer\n");
    for (label, row) in table.irreps.iter().zip(&table.values) {
        for (j, v) in row.iter().enumerate() {
            let coeffs: Vec<String> = v.canonical().iter().map(i64::to_string).collect();
            let _ = writeln!(
                csv,
                "{},{},{},{},\"[{}]\",{}",
                label.class,
                label.irrep,
                label.dim,
                j + 1,
                coeffs.join(" "),
                v.is_rational_integer()
            );
        }
    }
    let mut doc = ReportDocument::new(config, ok, payload, text);
    doc.csv = Some(csv);
    Ok(doc)
}

pub fn cmd_galois(config: &RunConfig) -> CliResult<ReportDocument> {
    let Command::Galois { group, nmax } = &config.command else { unreachable!() };
    if *nmax == 0 {
        return Err(CliError::Usage("--nmax must be at least 1".into()));
    }
    let qd = quantum_double(group, config.cap_order)?;
    let g = qd.group();
    let mut entries = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for (class, sector) in qd.sectors().iter().enumerate() {
        for n in 1..=*nmax {
            let fails = galois_failures(g, sector, n);
            all &= fails.is_empty();
            let _ = writeln!(
                text,
                "y-class {class:>3}  n = {n:>3}  {}",
                if fails.is_empty() { "pass".to_string() } else { format!("fail ({} pairs)", fails.len()) }
            );
            entries.push(serde_json::json!({
                "class": class,
                "base_point": sector.base_point,
                "n": n,
                "pass": fails.is_empty(),
                "failures": fails.iter().take(16).map(|&(z, s)| serde_json::json!({"z": z, "s": s})).collect::<Vec<_>>(),
            }));
        }
    }
    // the invariance is a theorem for wreath products S_N x| A^N, which
    // include symmetric and abelian groups
    let covered = matches!(g.family(), Family::Wreath { .. } | Family::Symmetric(_) | Family::Abelian(_));
    let _ = writeln!(text, "overall: {}", if all { "pass" } else { "fail" });
    let payload = serde_json::json!({
        "group_spec": g.spec(),
        "n_range": [1, nmax],
        "wreath_family": covered,
        "all_pass": all,
        "entries": entries,
    });
    Ok(ReportDocument::new(config, all || !covered, payload, text))
}

pub fn bounds_text(r: &BoundsReport) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:>3} {:>8} {:>6} {:>6} {:>6} {:>12} {:>8} {:>14}",
        "p", "|G|", "k(G)", "p^3", "|Z_g|", "p^((p+1)/2)", "k(D(G))", "((p+1)/2)ln p"
    );
    let _ = writeln!(
        text,
        "{:>3} {:>8} {:>6} {:>6} {:>6} {:>12} {:>8} {:>14.6}",
        r.p,
        r.group_order,
        r.class_count,
        r.p_cubed,
        r.centralizer_order,
        r.expected_centralizer_order,
        r.k_double.map_or("-".to_string(), |k| k.to_string()),
        r.witness_log
    );
    for v in &r.violations {
        let _ = writeln!(text, "violation: {v}");
    }
    text
}

pub fn cmd_bounds(config: &RunConfig) -> CliResult<ReportDocument> {
    let Command::Bounds { p } = &config.command else { unreachable!() };
    let report = centralizer_report(*p, config.cap_order)?;
    let ok = report.violations.is_empty();
    let text = bounds_text(&report);
    let mut doc = ReportDocument::new(config, ok, serde_json::to_value(&report).expect("serializable"), text.clone());
    doc.csv = Some(format!(
        "p,order,k_G,p_cubed,Z_g,expected_Z_g,k_double,witness_log\n{},{},{},{},{},{},{},{}\n",
        report.p,
        report.group_order,
        report.class_count,
        report.p_cubed,
        report.centralizer_order,
        report.expected_centralizer_order,
        report.k_double.map_or(String::new(), |k| k.to_string()),
        report.witness_log
    ));
    Ok(doc)
}

fn random_elem<R: Rng>(rng: &mut R, b: &FinAbGroup) -> AbElem {
    b.invariants().iter().map(|&q| rng.gen_range(0..q as i64)).collect()
}

fn random_partition<R: Rng>(rng: &mut R, r: usize) -> SetPartition {
    let labels: Vec<usize> = (0..r).map(|_| rng.gen_range(0..r)).collect();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; r];
    for (i, &l) in labels.iter().enumerate() {
        if slot[l] == usize::MAX {
            slot[l] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[l]].push(i);
    }
    SetPartition::new(r, blocks).expect("labels give a partition")
}

/// Groups used by the lemma fuzzer when `--B` is absent.
pub const LEMMA_GROUPS: [&str; 5] = ["cyclic:2", "cyclic:3", "cyclic:4", "cyclic:2x2", "cyclic:6"];

pub fn random_partition_system<R: Rng>(rng: &mut R, b: &FinAbGroup, max_r: usize) -> PartitionSystem {
    let r = rng.gen_range(1..=max_r.max(1));
    let (p, q) = (random_partition(rng, r), random_partition(rng, r));
    let mut p_targets: Vec<AbElem> = p.blocks().iter().map(|_| random_elem(rng, b)).collect();
    let q_targets: Vec<AbElem> = q.blocks().iter().map(|_| random_elem(rng, b)).collect();
    // half of the instances are made consistent, so both verdicts occur
    if rng.gen_bool(0.5) {
        let total_q = q_targets.iter().fold(b.zero(), |a, t| b.add(&a, t));
        let rest = p_targets[1..].iter().fold(b.zero(), |a, t| b.add(&a, t));
        p_targets[0] = b.sub(&total_q, &rest);
    }
    PartitionSystem { group: b.clone(), p, q, p_targets, q_targets }
}

fn parse_b(spec: &str) -> CliResult<FinAbGroup> {
    Ok(FinAbGroup::parse(spec)?)
}

pub fn cmd_lemma(config: &RunConfig) -> CliResult<ReportDocument> {
    let Command::Lemma { fuzz, sindep, r, b, n } = &config.command else { unreachable!() };
    if *r == 0 {
        return Err(CliError::Usage("--r must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let b = b.as_deref().map(parse_b).transpose()?;
    if *sindep {
        let count = fuzz.unwrap_or(200);
        let mut reports = Vec::new();
        let mut failing = Vec::new();
        let mut no_root = 0;
        for _ in 0..count {
            let template = match (&b, n) {
                (None, None) => random_template(&mut rng, *r, 12, 12)?,
                _ => fixed_template(&mut rng, b.as_ref(), *r, n.unwrap_or(12))?,
            };
            let report = s_independence_check(&template, &default_s_range(&template))?;
            no_root += report.cbar.is_empty() as usize;
            if !report.holds() {
                failing.push(serde_json::to_value(&report).expect("serializable"));
            }
            reports.push(report);
        }
        let ok = failing.is_empty();
        let solvable =
            reports.iter().filter(|r| r.cbar.iter().any(|c| c.per_s.first().is_some_and(|s| s.solvable))).count();
        let text = format!(
            "s-independence: {}/{} templates constant across s ({} solvable, {} without cbar)\n",
            count - failing.len(),
            count,
            solvable,
            no_root
        );
        let payload = serde_json::json!({
            "mode": "sindep",
            "templates": count,
            "constant": count - failing.len(),
            "solvable": solvable,
            "without_cbar": no_root,
            "counterexamples": failing,
        });
        return Ok(ReportDocument::new(config, ok, payload, text));
    }

    let count = fuzz.unwrap_or(1000);
    let groups: Vec<FinAbGroup> = match &b {
        Some(b) => vec![b.clone()],
        None => LEMMA_GROUPS.iter().map(|s| FinAbGroup::parse(s).expect("valid")).collect(),
    };
    let mut agree = 0;
    let mut solvable = 0;
    let mut counterexamples = Vec::new();
    for _ in 0..count {
        let bg = groups.choose(&mut rng).expect("nonempty");
        let sys = random_partition_system(&mut rng, bg, *r);
        let linear = sys.to_linear_system();
        let brute = oracle::brute_force_count(&linear);
        let by_lemma = lemma_solvable(&sys)?;
        let solved = solve_ab_system(&linear)?;
        let count_ok = if solved.solvable { solved.count == brute.into() } else { brute == 0 };
        if by_lemma == (brute > 0) && count_ok {
            agree += 1;
        } else {
            counterexamples.push(serde_json::to_value(&sys).expect("serializable"));
        }
        solvable += (brute > 0) as usize;
    }
    let ok = agree == count;
    let text = format!("lemma oracle: {agree}/{count} agreements ({solvable} solvable)\n");
    let payload = serde_json::json!({
        "mode": "fuzz",
        "instances": count,
        "agreements": agree,
        "solvable": solvable,
        "counterexamples": counterexamples,
    });
    Ok(ReportDocument::new(config, ok, payload, text))
}

/// A template over a given `B` (or a random central extension) and a
/// given `n`: `tau`, `theta` are random with orders dividing `n` and `k` is
/// random. With a given `B`, `c` is random and half the time a multiple of
/// `l`.
fn fixed_template<R: Rng>(rng: &mut R, b: Option<&FinAbGroup>, max_r: usize, n: u64) -> CliResult<WreathPowerSystem> {
    if n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let mut w = random_template(rng, max_r, 12, n)?;
    if let Some(b) = b {
        w.group = b.clone();
        w.c = random_elem(rng, b);
    }
    let r = rng.gen_range(1..=max_r);
    let divides = |p: &[usize]| qdouble::group::wreath::perm_cycles(p).iter().all(|c| n.is_multiple_of(c.len() as u64));
    let random_perm = |rng: &mut R| loop {
        let mut p: Vec<usize> = (0..r).collect();
        p.shuffle(rng);
        if divides(&p) {
            return p;
        }
    };
    w.tau = random_perm(rng);
    w.theta = random_perm(rng);
    w.n = n;
    w.k = (0..r).map(|_| random_elem(rng, &w.group)).collect();
    if b.is_some() && rng.gen_bool(0.5) {
        let x = random_elem(rng, &w.group);
        w.c = w.group.scale(&x, w.ell() as i64);
    }
    w.s = *qdouble::partition::unit_residues(w.group.order() * n).choose(rng).expect("nonempty");
    Ok(w)
}
