//! Strict template-level scoring and online parsing timing.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blackbox::{ClusterTree, TreeParams};
use crate::matcher::{match_line, CompiledRepository, HeaderStripper};
use crate::template::{TemplateBody, WILDCARD};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GroundTruth {
    pub templates: Vec<TemplateBody>,
    /// Optional line index to template index labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<usize, usize>>,
}

impl GroundTruth {
    pub fn new(templates: Vec<TemplateBody>) -> Self {
        GroundTruth {
            templates,
            labels: None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct TemplateListError {
    pub line: usize,
    pub message: String,
}

/// Reads one template per line. Blank lines are skipped; Drain-style `<*>`
/// markers and broken wildcard fragments are errors.
pub fn parse_template_list(text: &str) -> Result<Vec<TemplateBody>, TemplateListError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fail = |message: &str| TemplateListError {
            line: i + 1,
            message: message.to_string(),
        };
        if line.contains("<*>") {
            return Err(fail("`<*>` is not a wildcard here, use `<.*>`"));
        }
        let rest = line.replace(WILDCARD, "");
        if rest.contains("<.*") || rest.contains(".*>") {
            return Err(fail("incomplete wildcard marker"));
        }
        out.push(TemplateBody::parse(line));
    }
    Ok(out)
}

pub fn parse_ground_truth(text: &str) -> Result<GroundTruth, TemplateListError> {
    parse_template_list(text).map(GroundTruth::new)
}

/// Same constants in the same order with wildcards in the same positions.
pub fn templates_equal(a: &TemplateBody, b: &TemplateBody) -> bool {
    a == b
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub repetitions: usize,
    pub lines: usize,
    pub mean_seconds: f64,
    pub min_seconds: f64,
    pub max_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub parsed: usize,
    pub truth: usize,
    pub correct: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// (parsed index, ground-truth index)
    pub matched_pairs: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl EvalReport {
    pub fn table(&self) -> String {
        let mut s = format!(
            "{:<10} {:>9} {:>9} {:>9}\n{:<10} {:>9.3} {:>9.3} {:>9.3}\n",
            "", "precision", "recall", "f1", "templates", self.precision, self.recall, self.f1
        );
        s.push_str(&format!(
            "correct {} of {} parsed, {} ground truth\n",
            self.correct, self.parsed, self.truth
        ));
        if let Some(t) = &self.timing {
            s.push_str(&format!(
                "online parsing: {:.3} s mean over {} runs ({} lines)\n",
                t.mean_seconds, t.repetitions, t.lines
            ));
        }
        s
    }
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

/// Greedy one-to-one pairing; each template on either side pairs at most once.
pub fn score(parsed: &[TemplateBody], truth: &GroundTruth) -> EvalReport {
    let mut used = vec![false; truth.templates.len()];
    let mut matched_pairs = Vec::new();
    for (i, p) in parsed.iter().enumerate() {
        let hit = truth
            .templates
            .iter()
            .enumerate()
            .find(|(j, t)| !used[*j] && templates_equal(p, t));
        if let Some((j, _)) = hit {
            used[j] = true;
            matched_pairs.push((i, j));
        }
    }
    let correct = matched_pairs.len();
    let precision = ratio(correct, parsed.len());
    let recall = ratio(correct, truth.templates.len());
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    EvalReport {
        parsed: parsed.len(),
        truth: truth.templates.len(),
        correct,
        precision,
        recall,
        f1,
        matched_pairs,
        timing: None,
    }
}

/// Wall-clock of a full match pass averaged over `repetitions` runs, each
/// with a fresh cluster tree. Compilation is not timed.
pub fn time_online<S: AsRef<str>>(
    repo: &CompiledRepository,
    header: &HeaderStripper,
    lines: &[S],
    repetitions: usize,
    params: TreeParams,
) -> Timing {
    let repetitions = repetitions.max(1);
    let mut runs = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let mut tree = ClusterTree::new(params);
        let start = Instant::now();
        for line in lines {
            std::hint::black_box(match_line(repo, &mut tree, header.strip(line.as_ref())));
        }
        runs.push(start.elapsed().as_secs_f64());
    }
    Timing {
        repetitions,
        lines: lines.len(),
        mean_seconds: runs.iter().sum::<f64>() / repetitions as f64,
        min_seconds: runs.iter().copied().fold(f64::INFINITY, f64::min),
        max_seconds: runs.iter().copied().fold(0.0, f64::max),
    }
}
