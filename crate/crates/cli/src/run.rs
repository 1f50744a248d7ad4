use std::fmt::Write;

use clap::ValueEnum;
use serde_json::{json, Value};

use towercoh::cech::leray_comparison;
use towercoh::document::Input;
use towercoh::generators::{build, named, Generated};
use towercoh::les::{assemble_les, certify_exact, completed_les_check, pair_les};
use towercoh::simplicial;
use towercoh::tower::{completed_report, corollary_one_check, main_theorem_check, validate_tower, ValidationLevel};
use towercoh::{Error, Modulus, Pair, Tower};

use crate::{Format, Task};

pub enum Source {
    Generator(String),
    Document(String),
}

pub struct Job {
    pub task: Task,
    pub p: u64,
    pub s: u32,
    pub s_max: u32,
    pub n_max: Option<usize>,
    pub r_max: usize,
    pub degree: usize,
    pub absolute: bool,
}

#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Validation(String),
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Internal(_) => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Parse(m) => format!("parse error: {m}"),
            Failure::Validation(m) => format!("validation error: {m}"),
            Failure::Internal(m) => format!("internal error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Document(m) => Failure::Parse(m),
            Error::NotPrime(_)
            | Error::ZeroExponent
            | Error::ModulusTooLarge { .. }
            | Error::InvalidComplex(_)
            | Error::NotASubcomplex(_)
            | Error::InvalidMap(_)
            | Error::InvalidTower(_)
            | Error::InvalidGenerator(_) => Failure::Validation(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

pub struct Report {
    pub text: String,
    pub json: Value,
    pub passed: bool,
    pub failure: Option<String>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

enum Object {
    Pair(Pair),
    Tower(Tower),
}

fn resolve(job: &Job, source: Source) -> Result<(Object, Value), Failure> {
    let built = match source {
        Source::Generator(name) => {
            let spec = named(&name, job.p, job.r_max)?;
            build(&spec)?.object
        }
        Source::Document(text) => match Input::parse(&text)? {
            Input::Complex(p) => Generated::Pair(p),
            Input::Tower(t) => Generated::Tower(t),
            Input::Generator(spec) => build(&spec)?.object,
        },
    };
    let echo = Input::from(&built).to_value();
    let object = match built {
        Generated::Complex(c) => Object::Pair(Pair::absolute(c)),
        Generated::Pair(p) => Object::Pair(p),
        Generated::Tower(t) => Object::Tower(t),
    };
    Ok((object, echo))
}

fn task_name(t: Task) -> String {
    t.to_possible_value().expect("named").get_name().to_string()
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).expect("digit") as usize]).collect()
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn run(job: &Job, source: Source) -> Result<Report, Failure> {
    let (object, input) = resolve(job, source)?;
    let mut echo = json!({
        "task": task_name(job.task),
        "p": job.p,
        "input": input,
    });
    let report = match (&object, job.task) {
        (Object::Pair(pair), Task::Cohomology) => pair_cohomology(job, pair, &mut echo)?,
        (Object::Pair(pair), Task::Leray) => leray(job, pair, &mut echo)?,
        (Object::Pair(pair), Task::Les) => les(job, pair, &mut echo)?,
        (Object::Tower(tower), task) => {
            let validation = validate_tower(tower);
            if !validation.is_valid() {
                let mut msg = String::from("tower conditions violated");
                for issue in &validation.issues {
                    let at = issue.simplex.as_ref().map(|s| format!(" at {s:?}")).unwrap_or_default();
                    let _ = write!(msg, "\n  level {}: {}{at}: {}", issue.level, issue.condition, issue.detail);
                }
                return Err(Failure::Validation(msg));
            }
            let header = match validation.level {
                ValidationLevel::CoveringOnly => "validation: covering conditions only (no deck actions given)\n",
                ValidationLevel::WithDeckActions => "validation: covering conditions and deck actions\n",
            };
            echo["validation"] = serde_json::to_value(&validation).expect("serializable");
            let mut report = match task {
                Task::Cohomology => tower_cohomology(job, tower, &mut echo)?,
                Task::TowerReport => tower_report(job, tower, &mut echo)?,
                Task::TheoremCheck => theorem_check(job, tower, &mut echo)?,
                Task::Les => tower_les(job, tower, &mut echo)?,
                Task::Leray => return Err(Failure::Parse("task `leray` needs a complex or pair, not a tower".into())),
            };
            report.text.insert_str(0, header);
            report
        }
        (Object::Pair(_), task) => {
            return Err(Failure::Parse(format!("task `{}` needs a tower", task_name(task))));
        }
    };
    let mut json = json!({ "job": echo, "result": report.json });
    json["passed"] = Value::Bool(report.passed);
    Ok(Report { json, ..report })
}

fn modulus(job: &Job) -> Result<Modulus, Failure> {
    Ok(Modulus::new(job.p, job.s)?)
}

fn pair_dim(pair: &Pair) -> usize {
    pair.total().dim().unwrap_or(0)
}

fn pair_cohomology(job: &Job, pair: &Pair, echo: &mut Value) -> Result<Report, Failure> {
    let md = modulus(job)?;
    let n_max = job.n_max.unwrap_or_else(|| pair_dim(pair));
    echo["s"] = json!(job.s);
    echo["n_max"] = json!(n_max);
    let mut text = String::new();
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let h = simplicial::cohomology(pair, n, md);
        let _ = writeln!(text, "H^{n}(X, Z; {md}) = {}", h.invariants());
        rows.push(json!({ "n": n, "invariants": h.invariants() }));
    }
    Ok(Report {
        text,
        json: json!({ "cohomology": rows }),
        passed: true,
        failure: None,
    })
}

fn leray(job: &Job, pair: &Pair, echo: &mut Value) -> Result<Report, Failure> {
    let md = modulus(job)?;
    let n_max = job.n_max.unwrap_or(2);
    echo["s"] = json!(job.s);
    echo["n_max"] = json!(n_max);
    let report = leray_comparison(pair, md, n_max);
    let mut text = String::new();
    for d in &report.degrees {
        let _ = writeln!(
            text,
            "n={}: Čech {} | simplicial {} | comparison isomorphism: {}",
            d.degree,
            d.cech,
            d.simplicial,
            if d.comparison_is_isomorphism { "yes" } else { "no" }
        );
    }
    let cert = &report.certificate;
    let _ = writeln!(text, "acyclicity certificate: {}", pass(cert.holds()));
    for f in &cert.failures {
        let _ = writeln!(text, "  {f}");
    }
    let passed = report.passed();
    let _ = writeln!(text, "Čech = simplicial in degrees 0..{n_max}: {}", pass(passed));
    Ok(Report {
        text,
        json: serde_json::to_value(&report).expect("serializable"),
        passed,
        failure: (!passed).then(|| "star-cover Čech cohomology differs from simplicial cohomology".into()),
    })
}

fn les(job: &Job, pair: &Pair, echo: &mut Value) -> Result<Report, Failure> {
    let md = modulus(job)?;
    let n_max = job.n_max.unwrap_or_else(|| pair_dim(pair));
    echo["s"] = json!(job.s);
    echo["n_max"] = json!(n_max);
    let data = pair_les(pair, md, n_max)?;
    let seq = assemble_les(&data)?;
    let exactness = certify_exact(&seq.nodes);
    let mut text = String::new();
    for (i, node) in seq.nodes.iter().enumerate() {
        let status = match exactness.checks.iter().find(|c| c.index == i) {
            Some(c) if c.exact() => "exact",
            Some(_) => "NOT EXACT",
            None => "end",
        };
        let _ = writeln!(text, "{:<14} {:<24} {status}", node.label, node.module.to_string());
    }
    let lifts = seq.lift_independent.iter().all(|&b| b);
    let _ = writeln!(text, "connecting maps independent of lift: {}", pass(lifts));
    let passed = exactness.passed() && lifts;
    let _ = writeln!(text, "exact at every node: {}", pass(exactness.passed()));
    let failure = exactness
        .first_failure()
        .map(|c| format!("not exact at {}", c.label))
        .or_else(|| (!lifts).then(|| "connecting map depends on the lift".into()));
    Ok(Report {
        text,
        json: json!({ "sequence": seq, "exactness": exactness }),
        passed,
        failure,
    })
}

fn tower_cohomology(job: &Job, tower: &Tower, echo: &mut Value) -> Result<Report, Failure> {
    let md = modulus(job)?;
    let n_max = job
        .n_max
        .unwrap_or_else(|| tower.levels().iter().map(pair_dim).max().unwrap_or(0));
    echo["s"] = json!(job.s);
    echo["n_max"] = json!(n_max);
    let mut text = String::new();
    let mut rows = Vec::new();
    for (r, pair) in tower.levels().iter().enumerate() {
        for n in 0..=n_max {
            let h = simplicial::cohomology(pair, n, md);
            let _ = writeln!(text, "r={r} H^{n}(Y_r, Z_r; {md}) = {}", h.invariants());
            rows.push(json!({ "r": r, "n": n, "invariants": h.invariants() }));
        }
    }
    Ok(Report {
        text,
        json: json!({ "cohomology": rows }),
        passed: true,
        failure: None,
    })
}

fn tower_report(job: &Job, tower: &Tower, echo: &mut Value) -> Result<Report, Failure> {
    let n = job.degree;
    echo["degree"] = json!(n);
    echo["s_max"] = json!(job.s_max);
    let report = completed_report(tower, n, job.p, job.s_max)?;
    let mut text = String::new();
    let _ = writeln!(text, "H^{n}(Y_r, Z_r; Z/{}^s)", job.p);
    let cells: Vec<Vec<String>> = (1..=report.s_max)
        .map(|s| {
            (0..=report.r_max)
                .map(|r| report.invariants(r, s).map(|i| i.to_string()).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = (0..=report.r_max)
        .map(|r| cells.iter().map(|row| row[r].chars().count()).max().unwrap_or(0).max(r.to_string().len()) + 2)
        .collect();
    let mut header = format!("{:<6}", "s\\r");
    for (r, w) in widths.iter().enumerate() {
        let _ = write!(header, "{:<w$}", r);
    }
    let _ = writeln!(text, "{}", header.trim_end());
    for (row, s) in cells.iter().zip(1..) {
        let mut line = format!("{:<6}", s);
        for (cell, w) in row.iter().zip(&widths) {
            let _ = write!(line, "{:<w$}", cell);
        }
        let _ = writeln!(text, "{}", line.trim_end());
    }
    for (s, c) in report.classifications.iter().enumerate() {
        let _ = writeln!(text, "s={}: {c}", s + 1);
    }
    let _ = writeln!(text, "reduction squares commute: {}", pass(report.squares_commute()));
    let _ = writeln!(text, "mod p reduction surjective on cochains: {}", pass(report.reduction_surjective));
    let _ = writeln!(text, "H̃{} inferred: {}", superscript(n), report.inferred);
    let passed = report.squares_commute() && report.reduction_surjective;
    Ok(Report {
        text,
        json: serde_json::to_value(&report).expect("serializable"),
        passed,
        failure: (!passed).then(|| "reduction and pullback do not commute".into()),
    })
}

fn theorem_check(job: &Job, tower: &Tower, echo: &mut Value) -> Result<Report, Failure> {
    let n_max = job.n_max.unwrap_or(2);
    echo["n_max"] = json!(n_max);
    echo["s_max"] = json!(job.s_max);
    let report = main_theorem_check(tower, job.p, n_max, job.s_max)?;
    let mut text = report.to_string();
    let mut passed = report.passed();
    let mut failure = report.first_failure();
    let _ = writeln!(text, "main theorem check: {}", pass(report.passed()));
    let mut json = json!({ "theorem": report });
    if job.absolute {
        let cor = corollary_one_check(tower, job.p, n_max, job.s_max)?;
        let _ = writeln!(text, "absolute = relative with every Z_r empty: {}", pass(cor.passed()));
        if !cor.passed() && failure.is_none() {
            failure = Some("relative and absolute computations differ with Z_r empty".into());
        }
        passed &= cor.passed();
        json["absolute"] = serde_json::to_value(&cor).expect("serializable");
    }
    Ok(Report {
        text,
        json,
        passed,
        failure,
    })
}

fn tower_les(job: &Job, tower: &Tower, echo: &mut Value) -> Result<Report, Failure> {
    let n_max = job.n_max.unwrap_or(1);
    echo["n_max"] = json!(n_max);
    echo["s_max"] = json!(job.s_max);
    let report = completed_les_check(tower, job.p, n_max, job.s_max)?;
    let mut text = String::new();
    for l in &report.levels {
        let _ = writeln!(text, "r={} s={}: {}", l.r, l.s, l.terms.join(" -> "));
        let _ = writeln!(text, "  exact: {}", pass(l.passed()));
    }
    let squares = report.naturality.iter().filter(|q| q.commutes).count();
    let _ = writeln!(text, "naturality squares commuting: {squares}/{}", report.naturality.len());
    for c in &report.classifications {
        let _ = writeln!(text, "{} s={}: {}", c.term.label(c.n), c.s, c.classification);
    }
    let passed = report.passed();
    let _ = writeln!(text, "completed LES check: {}", pass(passed));
    Ok(Report {
        text,
        json: serde_json::to_value(&report).expect("serializable"),
        passed,
        failure: report.first_failure(),
    })
}
