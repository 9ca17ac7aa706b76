use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use srclog_core::analyzer::{analyze_unit, build_call_graph, parse_source, SourceUnit, StaticReport};
use srclog_core::blackbox::ClusterTree;
use srclog_core::evaluator::{parse_ground_truth, parse_template_list, score, time_online, EvalReport};
use srclog_core::matcher::{compile, report_counts, HeaderStripper, MatchCounts, OnlineParser};
use srclog_core::template::{read_repository, write_repository};
use srclog_core::whitebox::{
    extract_unit, post_process, ExtractedTemplate, HttpGateway, LlmGateway, MockGateway, Verifier,
};
use srclog_core::{Template, TemplateBody, TemplateSource};

use crate::config::{Config, GatewayKind};

pub fn make_gateway(config: &Config) -> Box<dyn LlmGateway> {
    match config.gateway.kind {
        GatewayKind::Mock => Box::new(MockGateway::default()),
        GatewayKind::Http => Box::new(HttpGateway),
    }
}

/// All `.java` files below `dir`, sorted, relative to `dir`.
pub fn java_files(dir: &Path) -> Result<Vec<PathBuf>> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<PathBuf>) -> io::Result<()> {
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            if path.is_dir() {
                walk(root, &path, out)?;
            } else if path.extension().is_some_and(|e| e == "java") {
                out.push(path.strip_prefix(root).unwrap_or(&path).to_path_buf());
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    walk(dir, dir, &mut out).with_context(|| format!("reading {}", dir.display()))?;
    out.sort();
    Ok(out)
}

struct Loaded {
    units: Vec<(SourceUnit, String)>,
    files: usize,
    errors: Vec<String>,
}

fn load_project(dir: &Path, pool: &rayon::ThreadPool) -> Result<Loaded> {
    let files = java_files(dir)?;
    let parsed: Vec<Result<(SourceUnit, String), String>> = pool.install(|| {
        files
            .par_iter()
            .map(|rel| {
                let text = fs::read_to_string(dir.join(rel)).map_err(|e| format!("{}: {e}", rel.display()))?;
                let unit = parse_source(&text, rel).map_err(|e| format!("{}: {e}", rel.display()))?;
                Ok((unit, text))
            })
            .collect()
    });
    let mut loaded = Loaded {
        units: Vec::new(),
        files: files.len(),
        errors: Vec::new(),
    };
    for item in parsed {
        match item {
            Ok(u) => loaded.units.push(u),
            Err(e) => loaded.errors.push(e),
        }
    }
    Ok(loaded)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(workers).build()?)
}

#[derive(Debug, Clone, Serialize)]
pub struct FileSummary {
    pub path: String,
    pub log_calls: usize,
    pub paths: usize,
    pub records: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtractSummary {
    pub files: usize,
    pub parsed_files: usize,
    pub syntax_errors: Vec<String>,
    pub gateway_failures: Vec<String>,
    pub log_calls: usize,
    pub paths: usize,
    pub records: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub verifier_errors: usize,
    pub per_file: Vec<FileSummary>,
    #[serde(skip)]
    pub elapsed_secs: f64,
}

impl ExtractSummary {
    pub fn print(&self) {
        println!(
            "files: {} ({} parsed, {} with syntax errors)",
            self.files,
            self.parsed_files,
            self.syntax_errors.len()
        );
        println!("log calls: {}, paths: {}", self.log_calls, self.paths);
        println!(
            "templates: {} records, {} accepted, {} rejected",
            self.records, self.accepted, self.rejected
        );
        if !self.gateway_failures.is_empty() || self.verifier_errors > 0 {
            println!(
                "gateway failures: {}, verifier errors: {}",
                self.gateway_failures.len(),
                self.verifier_errors
            );
        }
        println!("elapsed: {:.3} s", self.elapsed_secs);
    }
}

fn report_path(dir: &Path, unit: &Path, ext: &str) -> PathBuf {
    let mut name = unit.as_os_str().to_os_string();
    name.push(ext);
    dir.join(name)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Offline extraction: analysis, model extraction and post-processing for a
/// whole project. Syntax errors and gateway failures skip the file.
pub fn cmd_extract(project: &Path, config: &Config, out_repo: &Path, reports: Option<&Path>) -> Result<ExtractSummary> {
    let start = Instant::now();
    let pool = pool(config.extract.workers)?;
    let loaded = load_project(project, &pool)?;
    for e in &loaded.errors {
        eprintln!("warning: skipped {e}");
    }
    let analyzer = config.analyzer.to_analyzer_config();
    let units: Vec<SourceUnit> = loaded.units.iter().map(|(u, _)| u.clone()).collect();
    let graph = build_call_graph(&units, &analyzer);
    let gateway = make_gateway(config);
    let gateway_config = config.gateway.to_gateway_config();

    let analyzed: Vec<(StaticReport, Result<Vec<ExtractedTemplate>, String>)> = pool.install(|| {
        loaded
            .units
            .par_iter()
            .map(|(unit, text)| {
                let report = analyze_unit(unit, &graph, &analyzer);
                let records = extract_unit(text, &report, gateway.as_ref(), &gateway_config)
                    .map_err(|e| format!("{}: {e}", unit.path.display()));
                (report, records)
            })
            .collect()
    });

    let mut summary = ExtractSummary {
        files: loaded.files,
        parsed_files: loaded.units.len(),
        syntax_errors: loaded.errors.clone(),
        gateway_failures: Vec::new(),
        log_calls: 0,
        paths: 0,
        records: 0,
        accepted: 0,
        rejected: 0,
        verifier_errors: 0,
        per_file: Vec::new(),
        elapsed_secs: 0.0,
    };
    let mut records = Vec::new();
    for ((unit, _), (report, extracted)) in loaded.units.iter().zip(analyzed) {
        if let Some(dir) = reports {
            write_file(&report_path(dir, &unit.path, ".txt"), &report.render())?;
            write_file(
                &report_path(dir, &unit.path, ".json"),
                &(serde_json::to_string_pretty(&report)? + "\n"),
            )?;
        }
        let extracted = extracted.unwrap_or_else(|e| {
            eprintln!("warning: extraction failed for {e}");
            summary.gateway_failures.push(e);
            Vec::new()
        });
        summary.log_calls += report.call_count;
        summary.paths += report.total_paths;
        summary.per_file.push(FileSummary {
            path: unit.path.display().to_string(),
            log_calls: report.call_count,
            paths: report.total_paths,
            records: extracted.len(),
        });
        records.extend(extracted);
    }
    summary.records = records.len();

    let verifier = Verifier {
        gateway: gateway.as_ref(),
        config: &gateway_config,
    };
    let outcome = post_process(&records, &config.policy, Some(&verifier));
    for (record, reason) in &outcome.rejected {
        eprintln!("rejected `{}` from {} ({reason})", record.template, record.method);
    }
    summary.accepted = outcome.accepted.len();
    summary.rejected = outcome.rejected.len();
    summary.verifier_errors = outcome.verifier_errors;

    if let Some(parent) = out_repo.parent() {
        fs::create_dir_all(parent)?;
    }
    let file = File::create(out_repo).with_context(|| format!("creating {}", out_repo.display()))?;
    let mut w = BufWriter::new(file);
    write_repository(&mut w, &outcome.accepted)?;
    w.flush()?;
    if summary.files == 0 {
        eprintln!("warning: no Java files under {}", project.display());
    } else if summary.accepted == 0 {
        eprintln!("warning: repository is empty");
    }
    summary.elapsed_secs = start.elapsed().as_secs_f64();
    Ok(summary)
}

pub fn load_repository(path: &Path) -> Result<Vec<Template>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_repository(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ParseSummary {
    pub counts: MatchCounts,
    /// Lines that were not valid UTF-8 and were decoded lossily.
    pub lossy_lines: u64,
    pub blackbox_clusters: usize,
    pub blackbox_appended: usize,
    #[serde(skip)]
    pub elapsed_secs: f64,
}

impl ParseSummary {
    pub fn print(&self) {
        let c = &self.counts;
        println!(
            "lines: {} (matched {}, routed {}, empty {})",
            c.total, c.matched, c.routed, c.dropped_empty
        );
        println!("match rate: {:.2}%", 100.0 * c.match_rate);
        if let Some((id, n, share)) = &c.top_template {
            println!("top template: {id} with {n} lines ({:.1}% of matched)", 100.0 * share);
        }
        println!(
            "black-box clusters: {}, appended to repository: {}",
            self.blackbox_clusters, self.blackbox_appended
        );
        println!("elapsed: {:.3} s", self.elapsed_secs);
    }
}

fn open_input(input: Option<&Path>) -> Result<Box<dyn BufRead>> {
    Ok(match input {
        None => Box::new(BufReader::new(io::stdin())),
        Some(p) if p == Path::new("-") => Box::new(BufReader::new(io::stdin())),
        Some(p) => Box::new(BufReader::new(
            File::open(p).with_context(|| format!("opening {}", p.display()))?,
        )),
    })
}

/// Online parsing of a log stream in input order.
pub fn cmd_parse(
    repo_path: &Path,
    input: Option<&Path>,
    config: &Config,
    header: Option<&str>,
    out_results: &Path,
    append_blackbox: bool,
) -> Result<ParseSummary> {
    let start = Instant::now();
    let templates = load_repository(repo_path)?;
    let known: HashSet<TemplateBody> = templates.iter().map(|t| t.template.clone()).collect();
    let next_bb = templates
        .iter()
        .filter_map(|t| t.id.strip_prefix("bb-")?.parse::<u64>().ok())
        .max()
        .unwrap_or(0);
    let repo = compile(templates, config.matcher.options())?;
    let mut parser = OnlineParser {
        repo,
        header: HeaderStripper::new(header)?,
        tree: ClusterTree::new(config.blackbox),
    };

    let mut reader = open_input(input)?;
    let out = File::create(out_results).with_context(|| format!("creating {}", out_results.display()))?;
    let mut w = BufWriter::new(out);
    let mut counts_input = Vec::new();
    let mut buf = Vec::new();
    let mut lossy_lines = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf).context("reading log input")? == 0 {
            break;
        }
        while matches!(buf.last(), Some(b'\n' | b'\r')) {
            buf.pop();
        }
        let line = match std::str::from_utf8(&buf) {
            Ok(s) => std::borrow::Cow::Borrowed(s),
            Err(_) => {
                lossy_lines += 1;
                String::from_utf8_lossy(&buf)
            }
        };
        let result = parser.process(&line);
        serde_json::to_writer(&mut w, &result)?;
        w.write_all(b"\n")?;
        counts_input.push(result);
    }
    w.flush()?;
    let counts = report_counts(&counts_input);

    let exported = parser.tree.export_templates();
    let mut appended = 0;
    if append_blackbox {
        let fresh: Vec<Template> = exported
            .iter()
            .filter(|t| !known.contains(&t.template))
            .enumerate()
            .map(|(i, t)| Template {
                id: format!("bb-{:04}", next_bb + 1 + i as u64),
                source: TemplateSource::Blackbox,
                ..t.clone()
            })
            .collect();
        if !fresh.is_empty() {
            let file = OpenOptions::new().append(true).open(repo_path)?;
            let mut w = BufWriter::new(file);
            write_repository(&mut w, &fresh)?;
            w.flush()?;
        }
        appended = fresh.len();
    }
    Ok(ParseSummary {
        counts,
        lossy_lines,
        blackbox_clusters: exported.len(),
        blackbox_appended: appended,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// Reads parsed templates either as a repository (JSON lines) or as a plain
/// list with one template per line.
pub fn load_templates(path: &Path) -> Result<Vec<Template>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    if first.trim_start().starts_with('{') {
        return read_repository(text.as_bytes()).with_context(|| format!("reading {}", path.display()));
    }
    let bodies = parse_template_list(&text).with_context(|| format!("reading {}", path.display()))?;
    Ok(bodies
        .into_iter()
        .enumerate()
        .map(|(i, template)| Template {
            id: format!("p-{:04}", i + 1),
            template,
            level: None,
            methods: Vec::new(),
            source: TemplateSource::Whitebox,
            match_count: None,
        })
        .collect())
}

pub fn cmd_eval(
    parsed_path: &Path,
    truth_path: &Path,
    logs: Option<&Path>,
    repetitions: usize,
    config: &Config,
    header: Option<&str>,
) -> Result<EvalReport> {
    if repetitions == 0 {
        bail!("repetitions must be at least 1");
    }
    let parsed = load_templates(parsed_path)?;
    let truth_text = fs::read_to_string(truth_path).with_context(|| format!("reading {}", truth_path.display()))?;
    let truth = parse_ground_truth(&truth_text).with_context(|| format!("reading {}", truth_path.display()))?;
    let bodies: Vec<TemplateBody> = parsed.iter().map(|t| t.template.clone()).collect();
    let mut report = score(&bodies, &truth);
    if let Some(log_path) = logs {
        let mut text = String::new();
        File::open(log_path)
            .with_context(|| format!("opening {}", log_path.display()))?
            .read_to_string(&mut text)?;
        let lines: Vec<&str> = text.lines().collect();
        let mut unique = Vec::new();
        let mut seen = HashSet::new();
        for t in parsed {
            if seen.insert(t.template.clone()) {
                unique.push(t);
            }
        }
        let repo = compile(unique, config.matcher.options())?;
        let header = HeaderStripper::new(header)?;
        report.timing = Some(time_online(&repo, &header, &lines, repetitions, config.blackbox));
    }
    Ok(report)
}

/// Static analysis reports for a project without querying any model.
pub fn cmd_report(project: &Path, config: &Config, only: Option<&Path>) -> Result<(Vec<StaticReport>, Vec<String>)> {
    let pool = pool(config.extract.workers)?;
    let loaded = load_project(project, &pool)?;
    let analyzer = config.analyzer.to_analyzer_config();
    let units: Vec<SourceUnit> = loaded.units.iter().map(|(u, _)| u.clone()).collect();
    let graph = build_call_graph(&units, &analyzer);
    let reports = units
        .iter()
        .filter(|u| only.is_none_or(|p| u.path == p))
        .map(|u| analyze_unit(u, &graph, &analyzer))
        .collect::<Vec<_>>();
    if let Some(p) = only {
        if reports.is_empty() {
            bail!("{} is not a parsed source file of the project", p.display());
        }
    }
    Ok((reports, loaded.errors))
}
