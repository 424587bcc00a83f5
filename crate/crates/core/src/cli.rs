//! Command-line front end for the `fillscope` binary.

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::constructions::{self, Built, DEFAULT_AREA_BUDGET};
use crate::corridors::{extended_skt_corridors, trace_corridors, CorridorReport};
use crate::diagram::format::{from_text, to_text};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::metrics::{ediam_lower_retraction, measure};
use crate::models::GroupModel;
use crate::presentation::{build_presentation, retraction, Family};
use crate::render;

pub const CSV_HEADER: &str = "# fillscope-csv v1";

#[derive(Parser, Debug)]
#[command(name = "fillscope", version, about = "Build, check and measure van Kampen diagrams")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print a presentation
    Present {
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Build a diagram family and write it with its certificate
    Construct {
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        hatted: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        budget_faces: Option<u64>,
    },
    /// Validate a diagram file (and its certificate, if any)
    Verify { file: PathBuf },
    /// Report intrinsic and extrinsic diameters
    Measure {
        file: PathBuf,
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 10)]
        cap: u32,
        #[arg(long, value_delimiter = ',')]
        retraction: Vec<String>,
    },
    /// Trace corridors and rings
    Corridors {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        letters: Vec<String>,
        #[arg(long)]
        extended: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build a family over a parameter range and write one CSV row per instance
    Scan {
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        budget_faces: Option<u64>,
    },
    /// Draw a diagram as DOT or SVG
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        letters: Vec<String>,
        #[arg(long)]
        extended: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Dot,
    Svg,
}

/// Outcome classes mapped onto exit codes.
enum Fail {
    Invalid(String),
    Flags(String),
    Budget(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Param(_) | Error::Parse(_) | Error::WrongFamily(_) | Error::AlphabetMismatch(_) => {
                Fail::Flags(e.to_string())
            }
            Error::Resource(_) | Error::AreaBudget { .. } | Error::ExceedsCap { .. } => Fail::Budget(e.to_string()),
            _ => Fail::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Flags(e.to_string())
    }
}

impl From<csv::Error> for Fail {
    fn from(e: csv::Error) -> Self {
        Fail::Flags(e.to_string())
    }
}

type CliResult = std::result::Result<(), Fail>;

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut out = std::io::stdout().lock();
    match dispatch(cli.cmd, &mut out) {
        Ok(()) => 0,
        Err(Fail::Invalid(m)) => {
            eprintln!("error: {m}");
            1
        }
        Err(Fail::Flags(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Fail::Budget(m)) => {
            eprintln!("error: {m}");
            3
        }
    }
}

fn read_diagram(path: &PathBuf) -> std::result::Result<(Diagram, Option<crate::diagram::format::Certificate>), Fail> {
    let text = fs::read_to_string(path)?;
    Ok(from_text(&text)?)
}

fn need(v: Option<usize>, name: &str) -> Result<usize> {
    v.ok_or_else(|| Error::Param(format!("--{name} is required for this family")))
}

/// Builds one instance of a named family.
pub fn build_family(family: &str, k: Option<usize>, m: Option<usize>, n: Option<usize>, hatted: bool, budget: u64) -> Result<Built> {
    match family {
        "dn" => constructions::dn_diagram(need(k, "k")?, need(n, "n")?),
        "sigma" => constructions::sigma_m_diagram(need(k, "k")?, need(m, "m")?),
        "bpower" => constructions::bpower_stack_with_budget(need(k, "k")?, need(m, "m")?, hatted, budget),
        "bpower_hat" => constructions::bpower_stack_with_budget(need(k, "k")?, need(m, "m")?, true, budget),
        "delta" => constructions::delta_m_diagram_with_budget(need(k, "k")?, need(m, "m")?, budget),
        "qmwn" => constructions::qm_wn_diagram_with_budget(need(m, "m")?, need(n, "n")?, budget),
        other => Err(Error::Param(format!(
            "unknown family {other}; expected dn, sigma, bpower, bpower_hat, delta or qmwn"
        ))),
    }
}

fn parse_range(text: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::Param(format!("bad range {text}; expected N or A..B"));
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        Ok(a..=b)
    } else {
        let a: usize = text.trim().parse().map_err(|_| bad())?;
        Ok(a..=a)
    }
}

fn letter_syms(d: &Diagram, names: &[String]) -> Result<Vec<u32>> {
    names.iter().map(|n| d.presentation().sym(n.trim())).collect()
}

fn corridor_report(d: &Diagram, letters: &[String], extended: bool) -> Result<CorridorReport> {
    let syms = letter_syms(d, letters)?;
    if extended && matches!(d.presentation().family(), Family::Pk { .. }) && letters.is_empty() {
        return extended_skt_corridors(d);
    }
    trace_corridors(d, &syms, extended)
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> CliResult {
    match cmd {
        Cmd::Present { family, k, m } => {
            let fam = Family::from_parts(&family, k, m)?;
            let p = build_presentation(&fam)?;
            writeln!(out, "presentation {fam}")?;
            write!(out, "{}", p.to_text())?;
        }
        Cmd::Construct { family, k, m, n, hatted, output, budget_faces } => {
            let b = build_family(&family, k, m, n, hatted, budget_faces.unwrap_or(DEFAULT_AREA_BUDGET))?;
            let text = to_text(&b.diagram, Some(&b.cert));
            match output {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Cmd::Verify { file } => {
            let (d, cert) = read_diagram(&file)?;
            let report = d.validate();
            if !report.passed() {
                write!(out, "{report}")?;
                return Err(Fail::Invalid(format!("{} violation(s)", report.violations.len())));
            }
            if let Some(c) = cert {
                c.check(&d).map_err(|e| Fail::Invalid(e.to_string()))?;
            }
            writeln!(out, "valid: {} vertices, {} edges, area {}", d.vertex_count(), d.edge_count(), d.area())?;
        }
        Cmd::Measure { file, model, cap, retraction: rs } => {
            let (d, _) = read_diagram(&file)?;
            let model = match model {
                Some(name) => Some(GroupModel::for_presentation(&name, d.presentation())?),
                None => None,
            };
            let rets = rs
                .iter()
                .map(|r| retraction(r, d.presentation().clone()))
                .collect::<Result<Vec<_>>>()?;
            let report = measure(&d, model.as_ref().map(|m| (m, cap)), &rets)?;
            write!(out, "{report}")?;
        }
        Cmd::Corridors { file, letters, extended, csv: csv_path } => {
            let (d, _) = read_diagram(&file)?;
            let rep = corridor_report(&d, &letters, extended)?;
            write!(out, "{}", rep.to_text(&d))?;
            if let Some(p) = csv_path {
                let mut f = fs::File::create(p)?;
                writeln!(f, "{CSV_HEADER}")?;
                let mut w = csv::Writer::from_writer(f);
                w.write_record(["kind", "index", "length", "cells", "left", "right"])?;
                for row in rep.csv_rows(&d) {
                    w.write_record(&row)?;
                }
                w.flush()?;
            }
        }
        Cmd::Scan { family, k, m, n, csv: csv_path, threads, budget_faces } => {
            let budget = budget_faces.unwrap_or(DEFAULT_AREA_BUDGET);
            let ms: Vec<Option<usize>> = match &m {
                Some(t) => parse_range(t)?.map(Some).collect(),
                None => vec![None],
            };
            let ns: Vec<Option<usize>> = match &n {
                Some(t) => parse_range(t)?.map(Some).collect(),
                None => vec![None],
            };
            let jobs: Vec<(Option<usize>, Option<usize>)> =
                ms.iter().flat_map(|&mm| ns.iter().map(move |&nn| (mm, nn))).collect();
            let rows = scan_rows(&family, k, &jobs, threads, budget)?;
            let mut buf: Vec<u8> = Vec::new();
            writeln!(buf, "{CSV_HEADER}")?;
            {
                let mut w = csv::Writer::from_writer(&mut buf);
                w.write_record(scan_header(&family))?;
                for r in &rows {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
            match csv_path {
                Some(p) => fs::write(p, &buf)?,
                None => out.write_all(&buf)?,
            }
        }
        Cmd::Render { file, format, output, letters, extended } => {
            let (d, _) = read_diagram(&file)?;
            let rep = if letters.is_empty() && !extended {
                None
            } else {
                Some(corridor_report(&d, &letters, extended)?)
            };
            let text = match format {
                Format::Dot => render::to_dot(&d, rep.as_ref()),
                Format::Svg => render::to_svg(&d, rep.as_ref()),
            };
            match output {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
    }
    Ok(())
}

fn scan_header(family: &str) -> Vec<&'static str> {
    match family {
        "sigma" => vec!["k", "m", "n", "len_v", "area", "idiam"],
        "delta" => vec!["k", "m", "n", "len_u", "area", "idiam"],
        "dn" => vec!["k", "n", "area", "idiam"],
        "bpower" | "bpower_hat" => vec!["k", "m", "area", "idiam", "top_b"],
        "qmwn" => vec!["m", "n", "q", "area", "idiam", "phi_t_lower"],
        _ => vec![],
    }
}

fn scan_one(family: &str, k: Option<usize>, m: Option<usize>, n: Option<usize>, budget: u64) -> Result<Vec<String>> {
    let b = build_family(family, k, m, n, false, budget)?;
    let d = &b.diagram;
    let s = |x: usize| x.to_string();
    let opt = |x: Option<usize>| x.map_or(String::new(), |v| v.to_string());
    let meta = |key: &str| b.cert.get_meta(key).unwrap_or("").to_string();
    let param = |key: &str| b.cert.get_param(key).map_or(String::new(), |v| v.to_string());
    Ok(match family {
        "sigma" => vec![opt(k), opt(m), param("n"), meta("len_v"), s(d.area()), d.idiam().to_string()],
        "delta" => vec![opt(k), opt(m), param("n"), meta("len_u"), s(d.area()), d.idiam().to_string()],
        "dn" => vec![opt(k), opt(n), s(d.area()), d.idiam().to_string()],
        "bpower" | "bpower_hat" => {
            vec![opt(k), opt(m), s(d.area()), d.idiam().to_string(), meta("top_b_edges")]
        }
        "qmwn" => {
            let r = retraction("phi_t", d.presentation().clone())?;
            let low = ediam_lower_retraction(d, &r)?.0;
            vec![opt(m), opt(n), meta("q"), s(d.area()), d.idiam().to_string(), low.to_string()]
        }
        other => return Err(Error::Param(format!("unknown family {other}"))),
    })
}

/// Evaluates the jobs across threads; rows come back in job order.
fn scan_rows(
    family: &str,
    k: Option<usize>,
    jobs: &[(Option<usize>, Option<usize>)],
    threads: usize,
    budget: u64,
) -> Result<Vec<Vec<String>>> {
    if scan_header(family).is_empty() {
        return Err(Error::Param(format!("unknown family {family}")));
    }
    let threads = if threads == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        threads
    }
    .min(jobs.len().max(1));
    let next = Arc::new(std::sync::atomic::AtomicUsize::new(0));
    let mut slots: Vec<Option<Result<Vec<String>>>> = (0..jobs.len()).map(|_| None).collect();
    let results: Vec<Vec<(usize, Result<Vec<String>>)>> = std::thread::scope(|sc| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                let next = next.clone();
                sc.spawn(move || {
                    let mut mine = Vec::new();
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        if i >= jobs.len() {
                            break;
                        }
                        let (m, n) = jobs[i];
                        mine.push((i, scan_one(family, k, m, n, budget)));
                    }
                    mine
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
    });
    for batch in results {
        for (i, r) in batch {
            slots[i] = Some(r);
        }
    }
    slots.into_iter().map(|s| s.expect("every job ran")).collect()
}
