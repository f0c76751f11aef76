//! Batch driver: configuration, suite execution in dependency order, and
//! JSON or markdown reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use crate::currents::{commutator_suite, modes_from_ope, verify_serre_mode_equivalence, KacMoodyLevel};
use crate::dirac::{matrix_suite, reduce, reduce_records, DiracError, Scenario, SCENARIOS};
use crate::distcalc::ModeWindow;
use crate::qcoeff::{eval_q1, qint, qsum, TRational};
use crate::qvirasoro::{
    antisymmetry_check, classical_jacobi_check, classical_limit_suite, weight_relation_check, ClassicalVirasoro,
    QVirasoroBracket,
};
use crate::report::{timed, CheckRecord, Report, Status};
use crate::vertexcalc::{exchange_suite, verify_ee_ope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Exchange,
    Commutators,
    Modes,
    Dirac,
    Reduce,
    Limit,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "qdirac", about = "Exact verification of the Dirac reduction of sl(2)_q to the q-Virasoro algebra")]
pub struct RunConfig {
    /// Constraint system to reduce.
    #[arg(long, default_value = "q-sl2")]
    pub scenario: String,
    /// Modes -N..=N are checked.
    #[arg(long, short = 'n', default_value_t = crate::distcalc::DEFAULT_WINDOW)]
    pub window: usize,
    /// Suites to run.
    #[arg(long = "suite", value_enum, value_delimiter = ',', default_value = "all")]
    pub suites: Vec<Suite>,
    /// Skip the reduction with the q^{h|n|} bracket weight.
    #[arg(long)]
    pub no_weight: bool,
    /// Exponent h of the bracket weight.
    #[arg(long, default_value_t = 2)]
    pub weight_exponent: i64,
    /// Order of the h-expansion in the classical limit.
    #[arg(long, default_value_t = crate::qvirasoro::DEFAULT_ORDER)]
    pub order: i64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::parse_from(["qdirac"])
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("window must be at least 1")]
    Window,
    #[error("expansion order must be non-negative, got {0}")]
    Order(i64),
    #[error("unknown scenario {0:?}; expected one of {known}", known = SCENARIOS.join(", "))]
    Scenario(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse report: {0}")]
    Parse(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_CONFIG
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<ModeWindow, CliError> {
        if !SCENARIOS.contains(&self.scenario.as_str()) {
            return Err(CliError::Scenario(self.scenario.clone()));
        }
        if self.order < 0 {
            return Err(CliError::Order(self.order));
        }
        ModeWindow::new(self.window).map_err(|_| CliError::Window)
    }

    fn wants(&self, s: Suite) -> bool {
        self.suites.contains(&Suite::All) || self.suites.contains(&s)
    }
}

/// `[2n] = [n](qⁿ + q⁻ⁿ)`, `[-n] = -[n]`, `[n] → n` at `q = 1`, for `|n| ≤ 24`.
pub fn qint_identities() -> Vec<CheckRecord> {
    let bad = (-24i64..=24).find(|&n| {
        qint(2 * n) != &qint(n) * &qsum(n)
            || qint(-n) != -&qint(n)
            || eval_q1(&qint(n)).ok() != Some(TRational::rational(crate::qcoeff::ExactRational::from_int(n)))
    });
    vec![CheckRecord::pass_fail("qcoeff.identities", "q-integers", bad.is_none())
        .at_mode(bad)
        .values("[2n] = [n](q^n + q^-n), [-n] = -[n], [n](q=1) = n for |n| <= 24", "same")]
}

fn stage(report: &mut Report, name: &str, f: impl FnOnce() -> Vec<CheckRecord>) {
    let start = Instant::now();
    report.extend(timed(f));
    *report.durations.entry(name.to_string()).or_insert(0.0) += start.elapsed().as_secs_f64();
}

fn failed(id: &str, e: impl ToString) -> Vec<CheckRecord> {
    vec![CheckRecord::pass_fail(id, "setup", false).note(e.to_string())]
}

/// Runs the selected suites in dependency order.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let w = cfg.validate()?;
    let key = cfg.scenario.as_str();
    let deformed = key == "q-sl2";
    let mut report = Report::new(key, w.size());
    if cfg.suites.contains(&Suite::All) {
        stage(&mut report, "qcoeff", qint_identities);
    }
    if cfg.wants(Suite::Exchange) {
        stage(&mut report, "exchange", || exchange_suite(w));
    }
    if cfg.wants(Suite::Commutators) {
        stage(&mut report, "commutators", || {
            let mut v = verify_ee_ope(w);
            v.extend(commutator_suite(w));
            v
        });
    }
    if cfg.wants(Suite::Modes) {
        stage(&mut report, "modes", || {
            let mut v: Vec<CheckRecord> = (1..=3).flat_map(|k| modes_from_ope(KacMoodyLevel { k }, w)).collect();
            v.extend(verify_serre_mode_equivalence(w));
            v
        });
    }
    let scenario = |weight| Scenario::from_key(key, w, weight).map_err(|e: DiracError| e.to_string());
    if cfg.wants(Suite::Dirac) {
        stage(&mut report, "dirac", || match scenario(None) {
            Ok(sc) => matrix_suite(&sc),
            Err(e) => failed("dirac", e),
        });
    }
    let need_reduction = cfg.wants(Suite::Reduce) || cfg.wants(Suite::Limit);
    let mut reduced = None;
    if need_reduction {
        let start = Instant::now();
        reduced = Some(scenario(None).and_then(|sc| reduce(sc.current, &sc.table, &sc.constraints).map(|r| (sc, r)).map_err(|e| e.to_string())));
        *report.durations.entry("reduce".into()).or_insert(0.0) += start.elapsed().as_secs_f64();
    }
    if cfg.wants(Suite::Reduce) {
        stage(&mut report, "reduce", || {
            let mut v = match &reduced {
                Some(Ok((sc, r))) => reduce_records(sc, r),
                Some(Err(e)) => failed("reduce", e),
                None => vec![],
            };
            if deformed && !cfg.no_weight {
                v.extend(match scenario(Some(cfg.weight_exponent)) {
                    Ok(sc) => crate::dirac::reduce_suite(&sc),
                    Err(e) => failed("reduce.weighted", e),
                });
            }
            v
        });
    }
    if cfg.wants(Suite::Limit) {
        stage(&mut report, "limit", || {
            let mut v = Vec::new();
            // the undeformed endpoint comes from the engine's own classical reduction
            let classical = match &reduced {
                Some(Ok((_, r))) if !deformed => Ok(r.result.clone()),
                _ => Scenario::from_key("classical-sl2", w, None)
                    .and_then(|sc| reduce(sc.current, &sc.table, &sc.constraints))
                    .map(|r| r.result)
                    .map_err(|e| e.to_string()),
            };
            let classical = match classical {
                Ok(c) => c,
                Err(e) => {
                    v.extend(failed("limit.classical", e));
                    return v;
                }
            };
            if deformed {
                v.extend(antisymmetry_check(&QVirasoroBracket::new(true), w));
                v.extend(antisymmetry_check(&QVirasoroBracket::new(false), w));
                v.push(weight_relation_check(w));
                match &reduced {
                    Some(Ok((_, r))) => v.extend(classical_limit_suite(&r.result, &classical, cfg.order, false)),
                    Some(Err(e)) => v.extend(failed("limit", e)),
                    None => {}
                }
            }
            match ClassicalVirasoro::from_reduced(&classical) {
                Some(cv) => v.extend(classical_jacobi_check(&cv, 6.min(w.size() as i64 / 2))),
                None => v.extend(failed("virasoro.modes", "reduced bracket is not of Virasoro form")),
            }
            v
        });
    }
    Ok(report)
}

pub fn exit_status(report: &Report) -> i32 {
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn md_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('|', "\\|").replace('\n', " ")
}

fn md_unescape(s: &str) -> String {
    let mut out = String::new();
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(n) = chars.next() {
                out.push(n);
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn md_cells(line: &str) -> Vec<String> {
    let inner = line.trim().trim_start_matches('|');
    let mut cells = Vec::new();
    let mut cur = String::new();
    let mut escaped = false;
    for c in inner.chars() {
        if escaped {
            cur.push('\\');
            cur.push(c);
            escaped = false;
        } else if c == '\\' {
            escaped = true;
        } else if c == '|' {
            cells.push(md_unescape(cur.trim()));
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    cells
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::DiscrepancyDocumented => "discrepancy-documented",
    }
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Markdown => {
            let mut s = format!("# Verification report\n\nscenario: {}\nwindow: {}\n\n", report.scenario, report.window);
            s.push_str(&format!(
                "pass: {}, fail: {}, discrepancy-documented: {}\n\n",
                report.count(Status::Pass),
                report.count(Status::Fail),
                report.count(Status::DiscrepancyDocumented)
            ));
            s.push_str("| id | paper_eq | status | mode | engine_value | expected_value | seconds | note |\n");
            s.push_str("|---|---|---|---|---|---|---|---|\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                    md_escape(&c.id),
                    md_escape(&c.paper_eq),
                    status_str(c.status),
                    c.mode.map(|m| m.to_string()).unwrap_or_default(),
                    md_escape(&c.engine_value),
                    md_escape(&c.expected_value),
                    c.seconds,
                    md_escape(c.note.as_deref().unwrap_or("")),
                ));
            }
            s.push_str("\n| suite | seconds |\n|---|---|\n");
            for (k, v) in &report.durations {
                s.push_str(&format!("| {} | {v} |\n", md_escape(k)));
            }
            s
        }
    }
}

fn perr(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

pub fn parse(text: &str, format: Format) -> Result<Report, CliError> {
    match format {
        Format::Json => serde_json::from_str(text).map_err(|e| perr(e.to_string())),
        Format::Markdown => {
            let mut lines = text.lines();
            let field = |l: Option<&str>, key: &str| -> Result<String, CliError> {
                l.and_then(|l| l.strip_prefix(key)).map(|v| v.trim().to_string()).ok_or_else(|| perr(format!("missing {key}")))
            };
            let mut lines_iter = lines.by_ref().filter(|l| !l.trim().is_empty()).skip(1);
            let scenario = field(lines_iter.next(), "scenario:")?;
            let window = field(lines_iter.next(), "window:")?.parse().map_err(|_| perr("bad window"))?;
            let mut report = Report::new(scenario, window);
            let mut in_suites = false;
            for l in lines_iter {
                if !l.starts_with('|') || l.starts_with("|---") || l.starts_with("| id |") {
                    continue;
                }
                if l.starts_with("| suite |") {
                    in_suites = true;
                    continue;
                }
                let cells = md_cells(l);
                if in_suites {
                    let [k, v] = cells.as_slice() else { return Err(perr(l)) };
                    report.durations.insert(k.clone(), v.parse().map_err(|_| perr(l))?);
                    continue;
                }
                let [id, eq, st, mode, ev, xv, secs, note] = cells.as_slice() else { return Err(perr(l)) };
                let status = match st.as_str() {
                    "pass" => Status::Pass,
                    "fail" => Status::Fail,
                    "discrepancy-documented" => Status::DiscrepancyDocumented,
                    other => return Err(perr(format!("bad status {other}"))),
                };
                let mut c = CheckRecord::new(id.clone(), eq.clone(), status).values(ev.clone(), xv.clone());
                c.mode = if mode.is_empty() { None } else { Some(mode.parse().map_err(|_| perr(l))?) };
                c.seconds = secs.parse().map_err(|_| perr(l))?;
                c.note = (!note.is_empty()).then(|| note.clone());
                report.checks.push(c);
            }
            Ok(report)
        }
    }
}

pub fn write_report(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

/// Parses arguments, runs, writes the report, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("qdirac: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = write_report(&emit(&report, cfg.format), cfg.output.as_deref()) {
        eprintln!("qdirac: {e}");
        return e.exit_code();
    }
    for f in report.failures() {
        eprintln!("FAIL {} ({}) at mode {:?}", f.id, f.paper_eq, f.mode);
    }
    exit_status(&report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markdown_escaping_round_trips() {
        let mut r = Report::new("q-sl2", 3);
        r.extend([CheckRecord::pass_fail("a|b", "x\\y", false).values("1 | 2", "").note("n")]);
        let back = parse(&emit(&r, Format::Markdown), Format::Markdown).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new("q-sl2", 1);
        for f in [Format::Json, Format::Markdown] {
            assert_eq!(parse(&emit(&r, f), f).unwrap(), r);
        }
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig::default();
        assert!(c.validate().is_ok());
        c.scenario = "su3".into();
        assert!(matches!(c.validate(), Err(CliError::Scenario(_))));
        let c = RunConfig { window: 0, ..RunConfig::default() };
        assert!(matches!(c.validate(), Err(CliError::Window)));
    }

    #[test]
    fn qint_identities_pass() {
        assert!(qint_identities()[0].passed());
    }
}
