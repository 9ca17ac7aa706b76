//! Anchored pattern matching of log lines against the template repository.

use std::collections::{BTreeMap, HashSet};

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blackbox::ClusterTree;
use crate::template::{Segment, Template, TemplateBody};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MatchOptions {
    /// Let wildcards between two constants match the empty string.
    pub allow_empty_inner: bool,
    /// Any whitespace run inside a constant matches any non-empty whitespace run.
    pub flexible_whitespace: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            allow_empty_inner: false,
            flexible_whitespace: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("duplicate template `{0}`")]
    DuplicateTemplate(String),
    #[error("invalid header pattern: {0}")]
    HeaderPattern(#[from] regex::Error),
}

fn push_constant(pattern: &mut String, text: &str, flexible_whitespace: bool) {
    if !flexible_whitespace {
        pattern.push_str(&regex::escape(text));
        return;
    }
    let mut in_ws = false;
    let mut run = String::new();
    for ch in text.chars() {
        if ch.is_whitespace() {
            if !in_ws {
                pattern.push_str(&regex::escape(&run));
                run.clear();
                pattern.push_str(r"\s+");
                in_ws = true;
            }
        } else {
            in_ws = false;
            run.push(ch);
        }
    }
    pattern.push_str(&regex::escape(&run));
}

/// Full-match pattern source for a template body. Each wildcard is one
/// capture group.
pub fn pattern_source(body: &TemplateBody, options: MatchOptions) -> String {
    let segments = body.segments();
    let last = segments.len().saturating_sub(1);
    let mut pattern = String::from(r"(?s)\A");
    for (i, seg) in segments.iter().enumerate() {
        match seg {
            Segment::Const(text) => push_constant(&mut pattern, text, options.flexible_whitespace),
            Segment::Wild => {
                let at_edge = i == 0 || i == last;
                pattern.push_str(if at_edge || options.allow_empty_inner {
                    "(.*?)"
                } else {
                    "(.+?)"
                });
            }
        }
    }
    pattern.push_str(r"\z");
    pattern
}

#[derive(Debug, Clone)]
pub struct CompiledEntry {
    pub template: Template,
    pattern: Regex,
}

impl CompiledEntry {
    pub fn pattern(&self) -> &Regex {
        &self.pattern
    }

    fn captures(&self, line: &str) -> Option<Vec<String>> {
        let caps = self.pattern.captures(line)?;
        Some(
            caps.iter()
                .skip(1)
                .map(|m| m.map(|m| m.as_str().to_string()).unwrap_or_default())
                .collect(),
        )
    }
}

/// Immutable, ordered set of compiled templates.
#[derive(Debug, Clone, Default)]
pub struct CompiledRepository {
    entries: Vec<CompiledEntry>,
}

/// Compiles and orders the repository: most constant characters first, then
/// fewest wildcards, then template text.
pub fn compile(templates: Vec<Template>, options: MatchOptions) -> Result<CompiledRepository, MatchError> {
    let mut seen = HashSet::new();
    for t in &templates {
        if !seen.insert(t.template.clone()) {
            return Err(MatchError::DuplicateTemplate(t.template.to_string()));
        }
    }
    let mut entries: Vec<CompiledEntry> = templates
        .into_iter()
        .map(|template| {
            let pattern = Regex::new(&pattern_source(&template.template, options))
                .expect("escaped template patterns always compile");
            CompiledEntry { template, pattern }
        })
        .collect();
    entries.sort_by(|a, b| {
        let (ta, tb) = (&a.template.template, &b.template.template);
        tb.const_chars()
            .cmp(&ta.const_chars())
            .then(ta.wildcard_count().cmp(&tb.wildcard_count()))
            .then_with(|| ta.to_string().cmp(&tb.to_string()))
    });
    Ok(CompiledRepository { entries })
}

impl CompiledRepository {
    pub fn entries(&self) -> &[CompiledEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn templates(&self) -> impl Iterator<Item = &Template> {
        self.entries.iter().map(|e| &e.template)
    }

    /// First template, in repository order, that matches the whole message.
    pub fn find(&self, message: &str) -> Option<(&Template, Vec<String>)> {
        self.entries
            .iter()
            .find_map(|e| e.captures(message).map(|caps| (&e.template, caps)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Outcome {
    Matched { template_id: String },
    Routed { cluster_id: u64, template: String },
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub line: String,
    #[serde(flatten)]
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub captures: Vec<String>,
}

/// Matches one header-stripped message; misses are clustered in `tree`.
pub fn match_line(repo: &CompiledRepository, tree: &mut ClusterTree, message: &str) -> MatchResult {
    let trimmed = message.trim();
    let outcome_and_caps = if trimmed.is_empty() {
        let _ = tree.ingest(trimmed);
        (Outcome::Empty, Vec::new())
    } else if let Some((template, captures)) = repo.find(trimmed) {
        (
            Outcome::Matched {
                template_id: template.id.clone(),
            },
            captures,
        )
    } else {
        let ingested = tree
            .ingest(trimmed)
            .expect("non-empty messages always cluster");
        (
            Outcome::Routed {
                cluster_id: ingested.cluster_id,
                template: ingested.template,
            },
            Vec::new(),
        )
    };
    MatchResult {
        line: message.to_string(),
        outcome: outcome_and_caps.0,
        captures: outcome_and_caps.1,
    }
}

/// Removes a per-dataset header (timestamp, level, component) from raw lines.
///
/// When the pattern has a `content` group, that group is the message;
/// otherwise everything after the match is. Lines the pattern does not match
/// are passed through unchanged.
#[derive(Debug, Clone, Default)]
pub struct HeaderStripper {
    pattern: Option<Regex>,
}

impl HeaderStripper {
    pub fn new(pattern: Option<&str>) -> Result<Self, MatchError> {
        Ok(HeaderStripper {
            pattern: pattern.map(Regex::new).transpose()?,
        })
    }

    pub fn strip<'a>(&self, line: &'a str) -> &'a str {
        let Some(re) = &self.pattern else {
            return line;
        };
        match re.captures(line) {
            Some(caps) => match caps.name("content") {
                Some(m) => m.as_str(),
                None => &line[caps.get(0).map_or(0, |m| m.end())..],
            },
            None => line,
        }
    }
}

/// Header stripping, repository matching and black-box routing for a stream.
#[derive(Debug)]
pub struct OnlineParser {
    pub repo: CompiledRepository,
    pub header: HeaderStripper,
    pub tree: ClusterTree,
}

impl OnlineParser {
    pub fn process(&mut self, raw_line: &str) -> MatchResult {
        let message = self.header.strip(raw_line);
        let mut result = match_line(&self.repo, &mut self.tree, message);
        result.line = raw_line.to_string();
        result
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct MatchCounts {
    pub total: u64,
    pub matched: u64,
    pub routed: u64,
    pub dropped_empty: u64,
    /// Matched over non-empty lines.
    pub match_rate: f64,
    pub per_template: BTreeMap<String, u64>,
    pub per_cluster: BTreeMap<u64, u64>,
    /// Most frequent template and its share of matched lines.
    pub top_template: Option<(String, u64, f64)>,
}

pub fn report_counts<'a, I: IntoIterator<Item = &'a MatchResult>>(results: I) -> MatchCounts {
    let mut counts = MatchCounts::default();
    for r in results {
        counts.total += 1;
        match &r.outcome {
            Outcome::Matched { template_id } => {
                counts.matched += 1;
                *counts.per_template.entry(template_id.clone()).or_default() += 1;
            }
            Outcome::Routed { cluster_id, .. } => {
                counts.routed += 1;
                *counts.per_cluster.entry(*cluster_id).or_default() += 1;
            }
            Outcome::Empty => counts.dropped_empty += 1,
        }
    }
    let non_empty = counts.total - counts.dropped_empty;
    counts.match_rate = if non_empty == 0 {
        0.0
    } else {
        counts.matched as f64 / non_empty as f64
    };
    counts.top_template = counts
        .per_template
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(id, n)| (id.clone(), *n, *n as f64 / counts.matched as f64));
    counts
}
