//! Command-line front end: parses arguments, runs one library call and
//! renders a [`RunReport`] as text or JSON.
//!
//! Exit codes: `0` the command ran (verdicts, including negative ones and
//! failed preconditions such as a non-normal space, are in the report);
//! `1` usage, parse or input error; `2` internal invariant breach.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use indexmap::IndexMap;
use serde::Serialize;
use serde_json::{json, Value};

use ordtop::closure::{is_generated_by, smallest_closed_preorder};
use ordtop::exact;
use ordtop::format::{self, parse_grid, relation_to_file, Instance};
use ordtop::grid::{self, ConeGrid, Rung, WindowSampling};
use ordtop::lab::{self, SearchConfig, SearchMode};
use ordtop::qpmetric::{check_admissible, check_strict, is_albert, synthesize_qpm};
use ordtop::separation::{check_completely_regular, separate_monotone, validates_separation};
use ordtop::{props, Error, PointSet, PropertyReport};

#[derive(Parser, Debug)]
#[command(
    name = "ordtop",
    version,
    about = "Finite topological preordered spaces and discrete causal structure"
)]
pub struct Cli {
    /// Emit the structured JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock timings (makes output machine-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full property battery on a space file.
    Check { file: PathBuf },
    /// Evaluate every registered theorem instance on a space file.
    Suite { file: PathBuf },
    /// Separate closed decreasing A from closed increasing B by a
    /// continuous isotone function.
    Separate {
        file: PathBuf,
        /// Comma-separated point names of A.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        a: Vec<String>,
        /// Comma-separated point names of B.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        b: Vec<String>,
    },
    /// Check the file's quasi-pseudo-metric, or synthesize one.
    Qpm {
        file: PathBuf,
        /// Also check strictness.
        #[arg(long)]
        strict: bool,
    },
    /// Smallest closed preorder containing a relation.
    Closure { file: PathBuf, relation: PathBuf },
    /// Cone-grid commands.
    Grid {
        file: PathBuf,
        #[command(subcommand)]
        action: GridAction,
    },
    /// Search for an instance satisfying a named predicate.
    Search(SearchArgs),
    /// Convex-hull diameter of a ball around 1 in the ordered grid E_n.
    Interval {
        #[arg(long)]
        n: usize,
        /// Decimal or fraction, e.g. 0.01 or 1/100.
        #[arg(long)]
        eps: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum GridAction {
    /// Classify the grid on the causality ladder.
    Ladder {
        #[arg(long, default_value_t = 8)]
        k_max: u32,
        /// Windows checked for global hyperbolicity (all if fewer).
        #[arg(long, default_value_t = 256)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Causal hull of the window t0,x0,t1,x1.
    Hull { window: String },
    /// Export a window as a finite preordered space.
    Export { window: String },
    /// Measure J⁺ row throughput.
    Bench,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    pub predicate: String,
    /// Scan every space in canonical order (default).
    #[arg(long, conflicts_with = "random")]
    pub exhaustive: bool,
    /// Draw seeded random spaces.
    #[arg(long)]
    pub random: bool,
    /// Largest number of points.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Smallest number of points.
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random draws, or a cap on exhaustive scanning.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Stop after this many seconds (outcome then depends on machine speed).
    #[arg(long)]
    pub time_budget: Option<f64>,
}

/// One verdict with an optional witness.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl From<&PropertyReport> for Check {
    fn from(r: &PropertyReport) -> Self {
        Check {
            name: r.property.clone(),
            verdict: r.verdict,
            witness: r
                .witness
                .as_ref()
                .map(|w| serde_json::to_value(w).expect("serializable")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub name: String,
    pub seconds: f64,
}

/// The structured result of one command.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub checks: Vec<Check>,
    pub values: IndexMap<String, Value>,
    /// A failed precondition of the requested operation (for example a
    /// non-normal space passed to `separate`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<Timing>,
}

impl RunReport {
    fn check(&mut self, name: &str, verdict: bool, witness: Option<Value>) {
        self.checks.push(Check {
            name: name.to_string(),
            verdict,
            witness,
        });
    }

    fn value(&mut self, key: &str, v: impl Serialize) {
        self.values.insert(
            key.to_string(),
            serde_json::to_value(v).expect("serializable"),
        );
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("$ {}\n", self.command.join(" "));
        for c in &self.checks {
            out += &format!(
                "{:<5} {}\n",
                if c.verdict { "PASS" } else { "FAIL" },
                c.name
            );
            if let Some(w) = &c.witness {
                out += &format!("      witness: {w}\n");
            }
        }
        for (k, v) in &self.values {
            match v {
                Value::String(s) => out += &format!("{k}: {s}\n"),
                other => out += &format!("{k}: {other}\n"),
            }
        }
        if let Some(e) = &self.error {
            out += &format!("error: {e}\n");
        }
        for t in &self.timings {
            out += &format!("time {}: {:.6} s\n", t.name, t.seconds);
        }
        out
    }
}

/// Result of [`run`]: exit code and the two output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    /// Usage, parse or input error (exit 1).
    Input(String),
    /// Internal invariant breach (exit 2).
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Errors that are an answer about the input rather than a failure to run.
fn is_verdict_error(e: &Error) -> bool {
    matches!(
        e,
        Error::NotNormal
            | Error::NotConvex { .. }
            | Error::NotCompletelyRegular
            | Error::NotDiscrete
            | Error::NotASubrelation(..)
    )
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let start = Instant::now();
    let mut report = RunReport {
        command: echo(&cli.command),
        ..RunReport::default()
    };
    match execute(&cli.command, &mut report) {
        Ok(()) => {}
        Err(Failure::Input(msg)) => {
            return Outcome {
                code: 1,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            }
        }
        Err(Failure::Internal(msg)) => {
            return Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("internal error: {msg}\n"),
            }
        }
    }
    if cli.timings {
        report.timings.push(Timing {
            name: "total".into(),
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Outcome {
        code: 0,
        stdout: if cli.json {
            report.to_json()
        } else {
            report.to_text()
        },
        stderr: String::new(),
    }
}

fn echo(cmd: &Command) -> Vec<String> {
    let p = |p: &Path| p.display().to_string();
    match cmd {
        Command::Check { file } => vec!["check".into(), p(file)],
        Command::Suite { file } => vec!["suite".into(), p(file)],
        Command::Separate { file, a, b } => vec![
            "separate".into(),
            p(file),
            format!("--a={}", a.join(",")),
            format!("--b={}", b.join(",")),
        ],
        Command::Qpm { file, strict } => {
            let mut v = vec!["qpm".into(), p(file)];
            if *strict {
                v.push("--strict".into());
            }
            v
        }
        Command::Closure { file, relation } => vec!["closure".into(), p(file), p(relation)],
        Command::Grid { file, action } => {
            let mut v = vec!["grid".into(), p(file)];
            match action {
                GridAction::Ladder {
                    k_max,
                    budget,
                    seed,
                } => v.extend([
                    "ladder".into(),
                    format!("--k-max={k_max}"),
                    format!("--budget={budget}"),
                    format!("--seed={seed}"),
                ]),
                GridAction::Hull { window } => v.extend(["hull".into(), window.clone()]),
                GridAction::Export { window } => v.extend(["export".into(), window.clone()]),
                GridAction::Bench => v.push("bench".into()),
            }
            v
        }
        Command::Search(s) => {
            let mut v = vec![
                "search".into(),
                s.predicate.clone(),
                if s.random { "--random" } else { "--exhaustive" }.into(),
                format!("--n-min={}", s.n_min),
                format!("--n={}", s.n),
                format!("--seed={}", s.seed),
            ];
            if let Some(k) = s.samples {
                v.push(format!("--samples={k}"));
            }
            if let Some(b) = s.time_budget {
                v.push(format!("--time-budget={b}"));
            }
            v
        }
        Command::Interval { n, eps } => vec![
            "interval".into(),
            format!("--n={n}"),
            format!("--eps={eps}"),
        ],
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_space(path: &Path) -> Result<Instance, Failure> {
    Ok(Instance::parse(&read(path)?)?)
}

fn load_grid(path: &Path) -> Result<ConeGrid, Failure> {
    Ok(parse_grid(&read(path)?)?)
}

fn names_to_set(inst: &Instance, names: &[String]) -> Result<PointSet, Failure> {
    let mut s = PointSet::empty(inst.space.n());
    for name in names.iter().filter(|n| !n.is_empty()) {
        let i = inst
            .names
            .iter()
            .position(|m| m == name)
            .ok_or_else(|| Failure::Input(format!("unknown point `{name}`")))?;
        s.insert(i);
    }
    Ok(s)
}

fn set_names(inst: &Instance, s: &PointSet) -> Vec<String> {
    s.iter().map(|i| inst.names[i].clone()).collect()
}

fn parse_window(text: &str) -> Result<grid::Window, Failure> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Input(format!("bad window `{text}`, expected t0,x0,t1,x1")))?;
    parts
        .try_into()
        .map_err(|_| Failure::Input(format!("bad window `{text}`, expected t0,x0,t1,x1")))
}

fn site_name((t, x): grid::Site) -> String {
    format!("{t}:{x}")
}

/// Runs a library call whose verdict-like errors belong in the report.
fn answer<T>(report: &mut RunReport, r: ordtop::Result<T>) -> Result<Option<T>, Failure> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if is_verdict_error(&e) => {
            report.error = Some(e.to_string());
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn execute(cmd: &Command, report: &mut RunReport) -> Result<(), Failure> {
    match cmd {
        Command::Check { file } => {
            let inst = load_space(file)?;
            report.value("points", &inst.names);
            for r in props::battery(&inst.space)? {
                report.checks.push(Check::from(&r));
            }
        }
        Command::Suite { file } => {
            let inst = load_space(file)?;
            let suite = lab::theorem_suite(&inst.space)?;
            for c in &suite.checks {
                let witness = match (c.point, &c.set) {
                    (Some(x), _) => Some(json!({ "point": inst.names[x] })),
                    (None, Some(s)) => Some(json!({ "set": set_names(&inst, s) })),
                    _ => None,
                };
                report.check(c.theorem, c.holds, witness);
            }
            let fired: Vec<&str> = suite
                .checks
                .iter()
                .filter(|c| c.fired)
                .map(|c| c.theorem)
                .collect();
            report.value("fired", fired);
        }
        Command::Separate { file, a, b } => {
            let inst = load_space(file)?;
            let (sa, sb) = (names_to_set(&inst, a)?, names_to_set(&inst, b)?);
            if let Some(f) = answer(report, separate_monotone(&inst.space, &sa, &sb))? {
                let valid = validates_separation(&inst.space, &f, &sa, &sb);
                if !valid {
                    return Err(Failure::Internal(format!(
                        "separating function {} fails re-validation",
                        f.display()
                    )));
                }
                let table: IndexMap<&str, String> = inst
                    .names
                    .iter()
                    .zip(f.values())
                    .map(|(n, v)| (n.as_str(), exact::to_display(v)))
                    .collect();
                report.value("f", table);
                report.check("isotone, continuous, 0 on A and 1 on B", valid, None);
            }
        }
        Command::Qpm { file, strict } => {
            let inst = load_space(file)?;
            let (source, qpm) = match &inst.qpm {
                Some(p) => ("file", Some(p.clone())),
                None => ("synthesized", answer(report, synthesize_qpm(&inst.space))?),
            };
            if let Some(p) = qpm {
                report.value("source", source);
                report.value("qpm", &p);
                report
                    .checks
                    .push(Check::from(&check_admissible(&inst.space, &p)?));
                if *strict {
                    report
                        .checks
                        .push(Check::from(&check_strict(&inst.space, &p)?));
                }
                report.check(
                    "Albert (p ∨ p⁻¹ vanishes only on the diagonal)",
                    is_albert(&p),
                    None,
                );
            } else {
                let cr = check_completely_regular(&inst.space)?;
                if let Some(fail) = cr.failure {
                    report.value("regularity_failure", fail);
                }
            }
        }
        Command::Closure { file, relation } => {
            let inst = load_space(file)?;
            let rel = format::parse_relation(&read(relation)?, &inst.names)?;
            let closed = smallest_closed_preorder(inst.space.topology(), &rel)?;
            report.value(
                "closure",
                relation_to_file(closed.graph(), &inst.names).pairs,
            );
            report.value("equals_order", closed == *inst.space.order());
            if let Some(generated) = answer(report, is_generated_by(&inst.space, &rel))? {
                report.check("order is generated by the relation", generated, None);
            }
        }
        Command::Grid { file, action } => {
            let g = load_grid(file)?;
            grid_command(&g, action, report)?;
        }
        Command::Search(s) => {
            let cfg = SearchConfig {
                predicate: s.predicate.clone(),
                n_min: s.n_min,
                n_max: s.n,
                mode: if s.random {
                    SearchMode::Random
                } else {
                    SearchMode::Exhaustive
                },
                seed: s.seed,
                samples: s.samples,
                time_budget: s.time_budget.map(std::time::Duration::from_secs_f64),
            };
            let r = lab::counterexample_search(&cfg)?;
            report.value("predicate", &r.predicate);
            report.value("mode", r.mode);
            report.value("status", r.status);
            report.value("scanned", r.scanned);
            if let Some(w) = &r.witness {
                let sp = Instance::from_file(&w.space)?.space;
                if !lab::predicate(&r.predicate, &sp)? {
                    return Err(Failure::Internal(
                        "search witness fails re-validation".into(),
                    ));
                }
                report.value("witness_index", w.index);
                report.value("witness", &w.space);
                for rep in &w.reports {
                    report.checks.push(Check::from(rep));
                }
            }
        }
        Command::Interval { n, eps } => {
            let eps = exact::parse(eps)?;
            let r = lab::interval_diagnostic(*n, eps)?;
            let v = serde_json::to_value(&r).expect("serializable");
            for (k, val) in v.as_object().expect("struct").iter() {
                report.values.insert(k.clone(), val.clone());
            }
            report.value(
                "diameter_is_1_minus_1_over_n",
                r.diameter == exact::one() - ordtop::exact::Q::new(1, *n as i64),
            );
        }
    }
    Ok(())
}

fn grid_command(g: &ConeGrid, action: &GridAction, report: &mut RunReport) -> Result<(), Failure> {
    report.value("extent", [g.extent_t(), g.extent_x()]);
    match action {
        GridAction::Ladder {
            k_max,
            budget,
            seed,
        } => {
            let sampling = WindowSampling {
                budget: *budget,
                seed: *seed,
            };
            let r = grid::causality_ladder_with(g, *k_max, sampling)?;
            for rung in [
                Rung::Causal,
                Rung::StablyCausal,
                Rung::CausallySimple,
                Rung::GloballyHyperbolic,
            ] {
                let witness = match rung {
                    Rung::Causal => r
                        .closed_curve
                        .map(|(a, b)| json!({ "closed_curve": [site_name(a), site_name(b)] })),
                    Rung::GloballyHyperbolic => r
                        .hyperbolicity
                        .as_ref()
                        .and_then(|h| h.witness.as_ref())
                        .map(|w| serde_json::to_value(w).expect("serializable")),
                    _ => None,
                };
                report.check(rung.as_str(), r.rung >= rung, witness);
            }
            report.value("rung", r.rung);
            report.value("k_max", r.k_max);
            if let Some(k) = r.antisymmetric_at {
                report.value("antisymmetric_at", k);
            }
            if let Some(s) = r.seifert_stabilized {
                report.value("seifert_stabilized", s);
            }
            if let Some(e) = r.seifert_extra {
                report.value("seifert_extra", e);
            }
            if !r.seifert_extra_sample.is_empty() {
                let pairs: Vec<[String; 2]> = r
                    .seifert_extra_sample
                    .iter()
                    .map(|&(a, b)| [site_name(a), site_name(b)])
                    .collect();
                report.value("seifert_extra_sample", pairs);
            }
        }
        GridAction::Hull { window } => {
            let w = parse_window(window)?;
            let h = grid::hull(g, w)?;
            let sites: Vec<String> = h.iter().map(|i| site_name(g.site(i))).collect();
            report.value("window", w);
            report.value("size", sites.len());
            report.value("hull", sites);
        }
        GridAction::Export { window } => {
            let w = parse_window(window)?;
            let ex = grid::export_finite_space(g, w)?;
            let mut inst = Instance::new(ex.space);
            inst.names = ex.sites.iter().map(|&s| site_name(s)).collect();
            report.value("window", w);
            report.value("space", inst.to_file());
        }
        GridAction::Bench => {
            let b = grid::bench(g);
            report.value("sites", b.sites);
            report.value("rows", b.rows);
            report.value("pairs", b.pairs);
            report.value("rows_per_second", b.rows_per_second.round());
            report.timings.push(Timing {
                name: "rows".into(),
                seconds: b.seconds,
            });
        }
    }
    Ok(())
}
