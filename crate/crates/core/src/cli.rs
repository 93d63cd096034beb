//! The `jaccomb` command line.
//!
//! Every command builds a [`Report`] and prints it either as a table or as
//! JSON (schema [`SCHEMA`]). Exit codes: `0` success or affirmative verdict,
//! `1` negative verdict or failed check, `2` invalid input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abel::admissible_classes;
use crate::class_group::{build_class_group, spanning_tree_count};
use crate::classification::{classify, classify_auto, JacobianClass};
use crate::curve::CurveGraph;
use crate::polarization::{generality_witness, Polarization};
use crate::stability::{stable_multidegrees, Multidegree};

pub const SCHEMA: &str = "jaccomb/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "jaccomb", version, about = "Combinatorics of fine compactified Jacobians")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Components, δ, separating points and the degree class group.
    Analyze { file: PathBuf },
    /// Whether a polarization is general.
    CheckGeneral {
        file: PathBuf,
        /// JSON array of integers or "num/den" strings.
        #[arg(long)]
        q: String,
    },
    /// The stable multidegrees of a general polarization.
    StableDegrees {
        file: PathBuf,
        #[arg(long)]
        q: String,
    },
    /// Fine compactified Jacobians of a given degree up to translation.
    Classify {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
        /// Decide Abel-map admissibility of every class.
        #[arg(long)]
        abel: bool,
        /// Grid denominator; by default chosen and refined automatically.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        grid: Option<u64>,
    },
    /// Checks the cycles I_2, …, I_N.
    Kodaira {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=6))]
        n_max: u64,
    },
}

/// Everything a command reports. Absent sections are omitted from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_group: Option<ClassGroupSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generality: Option<GeneralityResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_degrees: Option<StableDegreesResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kodaira: Option<Vec<KodairaCase>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub components: Vec<String>,
    pub nodes: u64,
    /// `δ_{C_i}` per component.
    pub delta: Vec<u32>,
    /// Components through each separating point.
    pub separating_points: Vec<Vec<usize>>,
}

/// Integers are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupSummary {
    pub order: String,
    pub invariant_factors: Vec<String>,
    pub spanning_trees: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralityResult {
    pub polarization: Polarization,
    pub general: bool,
    /// Components of a subcurve where `q` is integral.
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableDegreesResult {
    pub polarization: Polarization,
    pub multidegrees: Vec<Multidegree>,
    pub complexity: String,
    pub count_matches_complexity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub total_degree: i64,
    pub grid_denominator: u64,
    /// `None` when the grid was given explicitly.
    pub stabilized: Option<bool>,
    pub classes: Vec<JacobianClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KodairaCase {
    pub n: u64,
    pub classes: u64,
    pub expected_classes: u64,
    pub stabilized: bool,
    pub complexity: String,
    pub admissible_classes: u64,
    pub admissible_representative: Option<Polarization>,
    pub failures: Vec<String>,
}

/// Outcome of a command: the report and the exit code it implies.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub code: i32,
}

/// Input that a command cannot work with; maps to exit code 2.
#[derive(Debug)]
pub struct InvalidInput(pub String);

impl<E: std::error::Error> From<E> for InvalidInput {
    fn from(e: E) -> Self {
        InvalidInput(e.to_string())
    }
}

type CmdResult = Result<Outcome, InvalidInput>;

/// Parses `args` (program name first), runs the command and writes its output.
/// Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let text = match cli.format {
                Format::Json => to_json(&outcome.report),
                Format::Table => render_table(&outcome.report),
            };
            let _ = out.write_all(text.as_bytes());
            outcome.code
        }
        Err(InvalidInput(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
    }
}

/// Sizes the global thread pool from `JACCOMB_THREADS` (`0` or unset: one
/// thread per core).
pub fn configure_threads() -> Result<(), InvalidInput> {
    let Ok(raw) = std::env::var("JACCOMB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| InvalidInput(format!("JACCOMB_THREADS must be a non-negative integer, got {raw:?}")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn execute(command: &Command) -> CmdResult {
    match command {
        Command::Analyze { file } => cmd_analyze(&load(file)?),
        Command::CheckGeneral { file, q } => cmd_check_general(&load(file)?, q),
        Command::StableDegrees { file, q } => cmd_stable_degrees(&load(file)?, q),
        Command::Classify {
            file,
            degree,
            abel,
            grid,
        } => cmd_classify(&load(file)?, *degree, *abel, *grid),
        Command::Kodaira { n_max } => cmd_kodaira(*n_max),
    }
}

fn load(path: &PathBuf) -> Result<CurveGraph, InvalidInput> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InvalidInput(format!("{}: {e}", path.display())))?;
    CurveGraph::from_json(&text).map_err(|e| InvalidInput(format!("{}: {e}", path.display())))
}

fn parse_q(g: &CurveGraph, raw: &str) -> Result<Polarization, InvalidInput> {
    let q: Polarization = raw.parse()?;
    if q.len() != g.num_components() {
        return Err(InvalidInput(format!(
            "polarization has {} entries, curve has {} components",
            q.len(),
            g.num_components()
        )));
    }
    Ok(q)
}

fn report(command: &str) -> Report {
    Report {
        schema: SCHEMA.to_string(),
        command: command.to_string(),
        curve: None,
        class_group: None,
        generality: None,
        stable_degrees: None,
        classification: None,
        kodaira: None,
    }
}

fn curve_summary(g: &CurveGraph) -> Result<CurveSummary, InvalidInput> {
    let nodal = g.with_nodal_points();
    let points = nodal.points().unwrap_or_default();
    let separating_points = nodal
        .separating_points()?
        .into_iter()
        .map(|p| points[p].on.clone())
        .collect();
    Ok(CurveSummary {
        components: g.components().iter().map(|c| c.name.clone()).collect(),
        nodes: g.edge_count(),
        delta: (0..g.num_components())
            .map(|i| (0..g.num_components()).map(|j| g.intersection(i, j)).sum())
            .collect(),
        separating_points,
    })
}

fn class_group_summary(g: &CurveGraph) -> ClassGroupSummary {
    let cg = build_class_group(g);
    ClassGroupSummary {
        order: cg.order().to_string(),
        invariant_factors: cg.invariant_factors().iter().map(ToString::to_string).collect(),
        spanning_trees: spanning_tree_count(g).to_string(),
    }
}

pub fn cmd_analyze(g: &CurveGraph) -> CmdResult {
    let mut r = report("analyze");
    r.curve = Some(curve_summary(g)?);
    r.class_group = Some(class_group_summary(g));
    Ok(Outcome { report: r, code: EXIT_OK })
}

pub fn cmd_check_general(g: &CurveGraph, raw_q: &str) -> CmdResult {
    let q = parse_q(g, raw_q)?;
    let witness = generality_witness(g, &q)?.map(|w| w.components().collect::<Vec<_>>());
    let general = witness.is_none();
    let mut r = report("check-general");
    r.generality = Some(GeneralityResult {
        polarization: q,
        general,
        witness,
    });
    Ok(Outcome {
        report: r,
        code: if general { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

pub fn cmd_stable_degrees(g: &CurveGraph, raw_q: &str) -> CmdResult {
    let q = parse_q(g, raw_q)?;
    if let Some(w) = generality_witness(g, &q)? {
        let mut r = report("stable-degrees");
        r.generality = Some(GeneralityResult {
            polarization: q,
            general: false,
            witness: Some(w.components().collect()),
        });
        return Ok(Outcome {
            report: r,
            code: EXIT_NEGATIVE,
        });
    }
    let multidegrees = stable_multidegrees(g, &q)?;
    let complexity = build_class_group(g).order().clone();
    let matches = BigInt::from(multidegrees.len()) == complexity;
    let mut r = report("stable-degrees");
    r.stable_degrees = Some(StableDegreesResult {
        polarization: q,
        multidegrees,
        complexity: complexity.to_string(),
        count_matches_complexity: matches,
    });
    Ok(Outcome {
        report: r,
        code: if matches { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

pub fn cmd_classify(g: &CurveGraph, degree: i64, abel: bool, grid: Option<u64>) -> CmdResult {
    let (mut classes, grid_denominator, stabilized) = match grid {
        Some(d) => (classify(g, degree, d)?, d, None),
        None => {
            let auto = classify_auto(g, degree, None)?;
            (auto.classes, auto.grid_denominator, Some(auto.stabilized))
        }
    };
    if abel {
        classes = admissible_classes(g, classes)?;
    }
    let mut r = report("classify");
    r.curve = Some(curve_summary(g)?);
    r.classification = Some(ClassificationResult {
        total_degree: degree,
        grid_denominator,
        stabilized,
        classes,
    });
    Ok(Outcome { report: r, code: EXIT_OK })
}

/// `((n−1)/n, …, (n−1)/n, −(n−1)²/n)`.
pub fn kodaira_abel_polarization(n: u64) -> Polarization {
    let n = n as i64;
    let mut nums = vec![n - 1; n as usize - 1];
    nums.push(-(n - 1) * (n - 1));
    Polarization::from_fractions(&nums, n).expect("integral total")
}

/// Whether `a − b` is an integer vector.
pub fn congruent_mod_integers(a: &Polarization, b: &Polarization) -> bool {
    a.len() == b.len() && a.values().iter().zip(b.values()).all(|(x, y)| (x - y).is_integer())
}

pub fn cmd_kodaira(n_max: u64) -> CmdResult {
    if !(2..=6).contains(&n_max) {
        return Err(InvalidInput(format!("--n-max must lie in 2..=6, got {n_max}")));
    }
    let mut cases = Vec::new();
    for n in 2..=n_max {
        let g = CurveGraph::cycle(n as usize)?;
        let expected: u64 = (1..n).product();
        let classes = admissible_classes(&g, classify(&g, 0, n)?)?;
        let refined = classify(&g, 0, 2 * n)?;
        let stabilized = refined.len() == classes.len()
            && refined.iter().zip(&classes).all(|(a, b)| a.signature == b.signature);
        let complexity = build_class_group(&g).order().clone();
        let admissible: Vec<&JacobianClass> = classes
            .iter()
            .filter(|c| c.abel_admissible == Some(true))
            .collect();

        let mut failures = Vec::new();
        if classes.len() as u64 != expected {
            failures.push(format!("{} classes, expected {expected}", classes.len()));
        }
        if !stabilized {
            failures.push(format!("grid {} and {} disagree", n, 2 * n));
        }
        if complexity != BigInt::from(n) {
            failures.push(format!("c(X) = {complexity}, expected {n}"));
        }
        if admissible.len() != 1 {
            failures.push(format!("{} admissible classes, expected 1", admissible.len()));
        } else if !congruent_mod_integers(&admissible[0].representative, &kodaira_abel_polarization(n)) {
            failures.push(format!(
                "admissible representative {} is not congruent to {}",
                admissible[0].representative,
                kodaira_abel_polarization(n)
            ));
        }
        cases.push(KodairaCase {
            n,
            classes: classes.len() as u64,
            expected_classes: expected,
            stabilized,
            complexity: complexity.to_string(),
            admissible_classes: admissible.len() as u64,
            admissible_representative: (admissible.len() == 1).then(|| admissible[0].representative.clone()),
            failures,
        });
    }
    let passed = cases.iter().all(|c| c.failures.is_empty());
    let mut r = report("kodaira");
    r.kodaira = Some(cases);
    Ok(Outcome {
        report: r,
        code: if passed { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

fn set_of(names: &[String], members: &[usize]) -> String {
    let items: Vec<&str> = members
        .iter()
        .map(|&i| names.get(i).map_or("?", String::as_str))
        .collect();
    format!("{{{}}}", items.join(", "))
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("C{i}")).collect()
}

fn join_degrees(ds: &[Multidegree]) -> String {
    let items: Vec<String> = ds.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

/// Human-readable rendering of a report.
pub fn render_table(r: &Report) -> String {
    let mut s = String::new();
    let names = r
        .curve
        .as_ref()
        .map(|c| c.components.clone())
        .unwrap_or_else(|| {
            let n = r
                .generality
                .as_ref()
                .map(|g| g.polarization.len())
                .or_else(|| r.stable_degrees.as_ref().map(|sd| sd.polarization.len()))
                .unwrap_or(0);
            default_names(n)
        });

    if let Some(c) = &r.curve {
        let _ = writeln!(s, "components:        {}", c.components.len());
        let _ = writeln!(s, "nodes:             {}", c.nodes);
        let deltas: Vec<String> = c
            .components
            .iter()
            .zip(&c.delta)
            .map(|(n, d)| format!("{n}={d}"))
            .collect();
        let _ = writeln!(s, "delta:             {}", deltas.join(" "));
        let seps: Vec<String> = c.separating_points.iter().map(|p| set_of(&names, p)).collect();
        let _ = writeln!(
            s,
            "separating points: {}",
            if seps.is_empty() { "none".to_string() } else { seps.join(" ") }
        );
    }
    if let Some(cg) = &r.class_group {
        let _ = writeln!(s, "c(X):              {}", cg.order);
        let _ = writeln!(
            s,
            "invariant factors: {}",
            if cg.invariant_factors.is_empty() {
                "none".to_string()
            } else {
                cg.invariant_factors.join(" ")
            }
        );
        let _ = writeln!(s, "spanning trees:    {}", cg.spanning_trees);
    }
    if let Some(g) = &r.generality {
        let _ = writeln!(s, "q = {}", g.polarization);
        match &g.witness {
            None => {
                let _ = writeln!(s, "GENERAL");
            }
            Some(w) => {
                let _ = writeln!(s, "NOT GENERAL: integral at {}", set_of(&names, w));
            }
        }
    }
    if let Some(sd) = &r.stable_degrees {
        let _ = writeln!(s, "q = {}", sd.polarization);
        for d in &sd.multidegrees {
            let _ = writeln!(s, "{d}");
        }
        let _ = writeln!(
            s,
            "{} stable multidegrees, c(X) = {}{}",
            sd.multidegrees.len(),
            sd.complexity,
            if sd.count_matches_complexity { "" } else { "  MISMATCH" }
        );
    }
    if let Some(c) = &r.classification {
        let grid = match c.stabilized {
            None => format!("grid {}", c.grid_denominator),
            Some(true) => format!("grid {} (unchanged at {})", c.grid_denominator, 2 * c.grid_denominator),
            Some(false) => format!(
                "grid {} (not certified: refinement exceeds the point budget)",
                c.grid_denominator
            ),
        };
        let _ = writeln!(s, "degree {}, {grid}", c.total_degree);
        let _ = writeln!(s, "{} classes", c.classes.len());
        for (k, class) in c.classes.iter().enumerate() {
            let _ = writeln!(s, "[{}] q = {}", k + 1, class.representative);
            if let Some(flag) = class.abel_admissible {
                let witness = class
                    .abel_witness
                    .as_ref()
                    .map(|w| format!(", twist {w}"))
                    .unwrap_or_default();
                let _ = writeln!(s, "    abel: {}{witness}", if flag { "yes" } else { "no" });
            }
            let _ = writeln!(s, "    signature: {}", join_degrees(class.signature.degrees()));
        }
    }
    if let Some(cases) = &r.kodaira {
        for c in cases {
            let status = if c.failures.is_empty() { "ok" } else { "FAIL" };
            let _ = writeln!(
                s,
                "I_{}: {} classes (expected {}), c(X) = {}, {} admissible  {status}",
                c.n, c.classes, c.expected_classes, c.complexity, c.admissible_classes
            );
            for f in &c.failures {
                let _ = writeln!(s, "    {f}");
            }
        }
    }
    s
}
