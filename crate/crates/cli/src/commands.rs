use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gcover::bratteli::{bratteli_to_kr, kr_to_bratteli, telescope_ordered, validate_ordered, vershik_orbit, OrderedBratteliPrefix};
use gcover::covering::{telescope, validate_covering};
use gcover::structured::{fiber_analysis, merge_equal_symbols, rank_profile, validate_structured, StructuredCovering};
use gcover::symbolic::{expand_symbol, expansiveness_probe, language_of_level, window_of_thread, ProbeOutcome, Seed};
use gcover::transform::gm_to_kr;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::document::{parse_document, BratteliDocument, CoveringDocument, Document, DocumentError, ModelError};

#[derive(Debug, Parser)]
#[command(name = "gcover", version, about = "Validate and analyze graph covering and Bratteli prefix documents")]
pub struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for the parallel checks (output is identical for any value).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the resulting document here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a covering (.cov) or Bratteli (.bd) document.
    Validate { file: PathBuf },
    /// Circuit counts and the rank estimates of a structured covering.
    Rank { file: PathBuf },
    /// Keep only the listed levels (0 must be among them).
    Telescope {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Ordered Bratteli diagram of a KR covering.
    ToBratteli {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// KR covering of an ordered Bratteli diagram.
    FromBratteli {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// KR covering with the word tables of a GM covering.
    GmToKr {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Vershik orbit of the minimal path into a top vertex.
    VershikOrbit {
        file: PathBuf,
        /// Top-level vertex; defaults to the first one.
        #[arg(long)]
        top: Option<String>,
        /// Print at most this many paths.
        #[arg(long, default_value_t = 256)]
        limit: usize,
    },
    /// Length-L words of level n read from the top-level symbols.
    Language {
        file: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        length: usize,
    },
    /// Rows of the n-symbol of circuit i.
    Symbol {
        file: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        circuit: usize,
    },
    /// Array window around column `offset` of the symbol c(level, circuit).
    Window {
        file: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        circuit: usize,
        #[arg(long)]
        offset: usize,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        half_width: usize,
    },
    /// Search for a recognizability window.
    Probe {
        file: PathBuf,
        /// Rows that row 1 must determine.
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        wmax: usize,
    },
    /// Predecessor counts of the depth-N threads of a KR covering.
    Fibers {
        file: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Merge level-m circuits with equal words.
    Merge {
        file: PathBuf,
        #[arg(long)]
        level: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Document { path: String, source: DocumentError },
    #[error("{0}")]
    Usage(String),
    #[error("{kind}: {message}")]
    Domain { kind: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain { .. } => 1,
            _ => 2,
        }
    }
}

/// Domain error tagged with its variant name, e.g. `NotProperlyOrdered`.
fn domain<E: std::fmt::Debug + std::fmt::Display>(e: E) -> CliError {
    let debug = format!("{e:?}");
    let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
    CliError::Domain { kind, message: e.to_string() }
}

fn model(e: ModelError) -> CliError {
    CliError::Domain { kind: "InvalidDocument".into(), message: e.0 }
}

/// What a command prints and the exit code it asks for.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0 }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn load(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_document(&text).map_err(|source| CliError::Document { path: path.display().to_string(), source })
}

fn load_covering(path: &Path) -> Result<CoveringDocument, CliError> {
    match load(path)? {
        Document::Covering(d) => Ok(d),
        Document::Bratteli(_) => Err(CliError::Usage(format!("{}: expected a covering document", path.display()))),
    }
}

fn load_bratteli(path: &Path) -> Result<BratteliDocument, CliError> {
    match load(path)? {
        Document::Bratteli(d) => Ok(d),
        Document::Covering(_) => Err(CliError::Usage(format!("{}: expected a Bratteli document", path.display()))),
    }
}

fn load_structured(path: &Path) -> Result<StructuredCovering, CliError> {
    load_covering(path)?.require_structured().map_err(model)
}

fn load_valid_ordered(path: &Path) -> Result<OrderedBratteliPrefix, CliError> {
    let b = load_bratteli(path)?.to_ordered().map_err(model)?;
    if let Some(v) = validate_ordered(&b).first() {
        return Err(CliError::Domain { kind: "InvalidDiagram".into(), message: format!("{v:?}") });
    }
    Ok(b)
}

fn emit(doc: Document, out: &Output, summary: String) -> Result<Report, CliError> {
    let text = doc.to_text();
    match &out.output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            let line = format!("{summary}; wrote {}\n", path.display());
            Ok(Report::ok(line, json!({ "summary": summary, "written": path.display().to_string() })))
        }
        None => Ok(Report::ok(text.clone(), json!({ "summary": summary, "document": text }))),
    }
}

fn letters(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Rank { file } => {
            let r = rank_profile(&load_structured(file)?);
            let text = format!(
                "circuit counts: {}\nwindow from level {}: KR estimate {}, GM estimate {} ({})\n",
                letters(&r.circuit_counts),
                r.window_start,
                r.kr_estimate,
                r.gm_estimate,
                r.scope
            );
            Ok(Report::ok(text, to_json(&r)))
        }
        Command::Telescope { file, keep, out } => telescope_cmd(file, keep, out),
        Command::ToBratteli { file, out } => {
            let b = kr_to_bratteli(&load_structured(file)?).map_err(domain)?;
            emit(Document::Bratteli(BratteliDocument::from_ordered(&b)), out, format!("depth {} diagram", b.depth()))
        }
        Command::FromBratteli { file, out } => {
            let b = load_bratteli(file)?.to_ordered().map_err(model)?;
            let sc = bratteli_to_kr(&b).map_err(domain)?;
            emit(Document::Covering(CoveringDocument::from_structured(&sc)), out, format!("depth {} KR covering", sc.depth()))
        }
        Command::GmToKr { file, out } => {
            let r = gm_to_kr(&load_structured(file)?).map_err(domain)?;
            let sizes: Vec<usize> = (0..=r.output.depth()).map(|n| r.output.graph(n).vertex_count()).collect();
            emit(
                Document::Covering(CoveringDocument::from_structured(&r.output)),
                out,
                format!("KR covering with level sizes {}", letters(&sizes)),
            )
        }
        Command::VershikOrbit { file, top, limit } => orbit_cmd(file, top.as_deref(), *limit),
        Command::Language { file, level, length } => {
            let l = language_of_level(&load_structured(file)?, *level, *length).map_err(domain)?;
            let mut text = format!("{} words of length {} at level {}\n", l.words.len(), l.length, l.level);
            for w in &l.words {
                writeln!(text, "{}", letters(w)).unwrap();
            }
            let witnesses: Vec<Value> = l
                .witnesses
                .iter()
                .map(|(w, (circuit, index))| json!({ "word": w, "circuit": circuit, "index": index }))
                .collect();
            let json = json!({ "level": l.level, "length": l.length, "source_level": l.source_level, "witnesses": witnesses });
            Ok(Report::ok(text, json))
        }
        Command::Symbol { file, level, circuit } => {
            let sc = load_structured(file)?;
            let s = expand_symbol(&sc, *level, *circuit).map_err(domain)?;
            let mut text = format!("symbol c({level},{circuit}), width {}\n", s.width);
            for m in (0..=*level).rev() {
                let row = s.row(m);
                writeln!(text, "row {m}: letters {} | cuts {} {}", letters(&row.letters), letters(&row.starts), s.width).unwrap();
            }
            Ok(Report::ok(text, to_json(&s)))
        }
        Command::Window { file, level, circuit, offset, rows, half_width } => {
            let sc = load_structured(file)?;
            let seed = Seed { level: *level, circuit: *circuit, offset: *offset };
            let w = window_of_thread(&sc, seed, *rows, *half_width).map_err(domain)?;
            let mut text = format!("window of half-width {half_width} at column {offset} of c({level},{circuit})\n");
            for m in (0..=*rows).rev() {
                let mut line = format!("row {m}:");
                for (k, c) in w.columns().enumerate() {
                    line.push_str(if w.cuts[m].contains(&c) { " |" } else { "  " });
                    write!(line, "{}", w.letter_rows[m][k]).unwrap();
                }
                writeln!(text, "{line}").unwrap();
            }
            Ok(Report::ok(text, to_json(&w)))
        }
        Command::Probe { file, depth, wmax } => {
            let r = expansiveness_probe(&load_structured(file)?, *depth, *wmax).map_err(domain)?;
            let text = match &r.outcome {
                ProbeOutcome::Found { width } => format!("found W = {width} ({} rows, {})\n", r.rows, r.scope),
                ProbeOutcome::NoWindow { tested_width, witness } => {
                    let mut t = format!("NoWindow up to W = {tested_width} ({} rows, {})\n", r.rows, r.scope);
                    if let Some(w) = witness {
                        writeln!(t, "ambiguous word: {}", w.join(" ")).unwrap();
                    }
                    t
                }
            };
            Ok(Report::ok(text, to_json(&r)))
        }
        Command::Fibers { file, depth } => {
            let sc = load_structured(file)?;
            let r = fiber_analysis(&sc, depth.unwrap_or(sc.depth())).map_err(domain)?;
            let text = format!(
                "depth {}: central thread has {} predecessors (max circuits {}, rank proxy {}); other threads all have one: {} ({})\n",
                r.depth, r.central_count, r.max_circuit_count, r.rank_proxy, r.non_central_all_one, r.scope
            );
            Ok(Report { code: if r.holds() { 0 } else { 1 }, ..Report::ok(text, to_json(&r)) })
        }
        Command::Merge { file, level, out } => {
            let sc = load_structured(file)?;
            let merged = merge_equal_symbols(&sc, *level).map_err(domain)?;
            let summary = format!("level {level}: {} circuits become {}", sc.circuit_count(*level), merged.circuit_count(*level));
            emit(Document::Covering(CoveringDocument::from_structured(&merged)), out, summary)
        }
    }
}

fn validate(file: &Path) -> Result<Report, CliError> {
    match load(file)? {
        Document::Covering(doc) => {
            let base = doc.to_prefix().map_err(model)?;
            let mut problems: Vec<String> = validate_covering(&base).iter().map(ToString::to_string).collect();
            let mut json = json!({ "kind": "covering", "mode": doc.mode.to_string(), "depth": base.depth() });
            if problems.is_empty() {
                if let Some(sc) = doc.to_structured().map_err(model)? {
                    let r = validate_structured(&sc);
                    problems.extend(r.violations.iter().map(ToString::to_string));
                    json["kr_valid"] = json!(r.kr_valid);
                    json["gm_valid"] = json!(r.gm_valid);
                }
            }
            json["violations"] = json!(problems);
            json["valid"] = json!(problems.is_empty());
            let mut text = format!("covering, mode {}, depth {}: ", doc.mode, base.depth());
            finish_validation(&mut text, &problems);
            Ok(Report { code: u8::from(!problems.is_empty()), ..Report::ok(text, json) })
        }
        Document::Bratteli(doc) => {
            let b = doc.to_ordered().map_err(model)?;
            let problems: Vec<String> = validate_ordered(&b).iter().map(|v| format!("{v:?}")).collect();
            let json = json!({ "kind": "bratteli", "depth": b.depth(), "violations": problems, "valid": problems.is_empty() });
            let mut text = format!("bratteli diagram, depth {}: ", b.depth());
            finish_validation(&mut text, &problems);
            Ok(Report { code: u8::from(!problems.is_empty()), ..Report::ok(text, json) })
        }
    }
}

fn finish_validation(text: &mut String, problems: &[String]) {
    if problems.is_empty() {
        text.push_str("valid\n");
    } else {
        writeln!(text, "{} violation(s)", problems.len()).unwrap();
        for p in problems {
            writeln!(text, "  {p}").unwrap();
        }
    }
}

fn telescope_cmd(file: &Path, keep: &[usize], out: &Output) -> Result<Report, CliError> {
    if keep.first() != Some(&0) || keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("--keep must be strictly increasing and start with 0".into()));
    }
    let summary = format!("kept levels {}", letters(keep));
    match load(file)? {
        Document::Covering(doc) => {
            let t = telescope(&doc.to_prefix().map_err(model)?, keep).map_err(domain)?;
            emit(Document::Covering(CoveringDocument::from_prefix(&t)), out, summary)
        }
        Document::Bratteli(_) => {
            let mut b = load_valid_ordered(file)?;
            let last = *keep.last().expect("non-empty");
            if last > b.depth() {
                return Err(domain(gcover::bratteli::BratteliError::BadLevels { m: 0, n: last, depth: b.depth() }));
            }
            b.diagram.level_vertices.truncate(last + 1);
            b.diagram.edges.truncate(last);
            b.order.truncate(last);
            // Top-down, so the lower level numbers stay put.
            for w in keep.windows(2).rev() {
                if w[1] > w[0] + 1 {
                    b = telescope_ordered(&b, w[0], w[1]).map_err(domain)?;
                }
            }
            emit(Document::Bratteli(BratteliDocument::from_ordered(&b)), out, summary)
        }
    }
}

fn orbit_cmd(file: &Path, top: Option<&str>, limit: usize) -> Result<Report, CliError> {
    let b = load_valid_ordered(file)?;
    let depth = b.depth();
    let names = &b.diagram.level_vertices[depth];
    let v = match top {
        Some(name) => names
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| CliError::Usage(format!("no vertex `{name}` at level {depth}")))?,
        None => 0,
    };
    let orbit = vershik_orbit(&b, &b.extremal_path_to(depth, v, false)).map_err(domain)?;
    let shown: Vec<Vec<usize>> = orbit
        .iter()
        .take(limit)
        .map(|p| p.edges.iter().enumerate().map(|(k, &e)| b.order_of(k + 1, e)).collect())
        .collect();
    let mut text = format!("{} paths into {} (order indices, level 1 first)\n", orbit.len(), names[v]);
    for p in &shown {
        writeln!(text, "{}", letters(p)).unwrap();
    }
    if shown.len() < orbit.len() {
        writeln!(text, "... {} more", orbit.len() - shown.len()).unwrap();
    }
    text.push_str("AtMaximum\n");
    let json = json!({ "top": names[v], "length": orbit.len(), "paths": shown, "end": "AtMaximum" });
    Ok(Report::ok(text, json))
}
