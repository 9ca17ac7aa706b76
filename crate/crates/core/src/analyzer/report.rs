use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::ast::SourceUnit;
use super::callgraph::CallGraph;
use super::paths::{enumerate_paths, find_log_calls, CallPath, CalleeKind};
use super::AnalyzerConfig;
use crate::template::Level;

const UNDEFINED_TEMPLATE: &str = "undefined template";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallReport {
    pub line: u32,
    pub level: Level,
    /// Enclosing method as `class.method`.
    pub method: String,
    /// Literal format string, when the message is one.
    pub initial_template: Option<String>,
    pub paths: Vec<CallPath>,
    pub involves_conditional: bool,
    pub involves_external_call: bool,
    pub truncated: bool,
    pub recursion_cycle: bool,
    pub placeholder_mismatch: bool,
}

/// Static analysis results for the logging calls of one source unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaticReport {
    pub unit: String,
    pub class_fqn: String,
    pub call_count: usize,
    pub calls: Vec<CallReport>,
    pub total_paths: usize,
}

impl StaticReport {
    pub fn from_calls(unit: String, class_fqn: String, calls: Vec<CallReport>) -> Self {
        let total_paths = calls.iter().map(|c| c.paths.len()).sum();
        StaticReport {
            unit,
            class_fqn,
            call_count: calls.len(),
            calls,
            total_paths,
        }
    }

    /// Text layout: per-call header, numbered paths and steps, closing total.
    pub fn render(&self) -> String {
        render_report(self)
    }
}

/// Runs call discovery and path enumeration for every logging call of `unit`.
pub fn analyze_unit(unit: &SourceUnit, graph: &CallGraph<'_>, config: &AnalyzerConfig) -> StaticReport {
    let calls = find_log_calls(unit, config)
        .into_iter()
        .map(|site| {
            let enumeration = enumerate_paths(&site, graph, config.budget);
            let involves_conditional = enumeration.paths.iter().any(|p| p.conditional);
            let involves_external_call = enumeration.paths.iter().any(|p| p.steps.len() > 1);
            let truncated = enumeration.truncated || enumeration.paths.iter().any(|p| p.truncated);
            let recursion_cycle = enumeration.cycle_detected();
            CallReport {
                line: site.line,
                level: site.level,
                method: site.method.clone(),
                placeholder_mismatch: site.placeholder_mismatch(),
                initial_template: site.literal_format,
                paths: enumeration.paths,
                involves_conditional,
                involves_external_call,
                truncated,
                recursion_cycle,
            }
        })
        .collect();
    StaticReport::from_calls(unit.path.display().to_string(), unit.fqn(), calls)
}

pub fn render_report(report: &StaticReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Extracted {} log calls", report.call_count);
    out.push('\n');
    for (i, call) in report.calls.iter().enumerate() {
        let _ = writeln!(out, "=== Analysis of log call {} ===", i + 1);
        let _ = writeln!(out, "Location: line {}, method: {}", call.line, call.level);
        let _ = writeln!(
            out,
            "Template: {}",
            call.initial_template.as_deref().unwrap_or(UNDEFINED_TEMPLATE)
        );
        if call.truncated {
            out.push_str("Note: path enumeration truncated by budget\n");
        }
        if call.placeholder_mismatch {
            out.push_str("Note: placeholder count does not match argument count\n");
        }
        out.push('\n');
        let _ = writeln!(
            out,
            "=== Call path analysis results ({} paths in total) ===",
            call.paths.len()
        );
        out.push('\n');
        for (p, path) in call.paths.iter().enumerate() {
            let _ = writeln!(out, "--- Path {} ---", p + 1);
            for (s, step) in path.steps.iter().enumerate() {
                let _ = writeln!(out, "  {}. Class: {}", s + 1, step.class_fqn);
                let _ = writeln!(out, "     Call code: {}", step.call_code);
                match &step.callee {
                    CalleeKind::LogInvocation => {
                        out.push_str("     Callee information: log method invocation\n")
                    }
                    CalleeKind::BuiltIn => out.push_str("     Callee information: built-in method\n"),
                    CalleeKind::Unknown => out.push_str("     Callee information: unknown method\n"),
                    CalleeKind::UserMethod { source } => {
                        out.push_str("     Callee information:\n");
                        for line in source.lines() {
                            let _ = writeln!(out, "       {line}");
                        }
                    }
                }
            }
            for cycle in &path.cycles {
                let _ = writeln!(out, "  Recursive call collapsed: {}", cycle.join(" -> "));
            }
            out.push('\n');
        }
    }
    let _ = writeln!(
        out,
        "A total of {} log calls, with {} complete paths found.",
        report.call_count, report.total_paths
    );
    out
}
