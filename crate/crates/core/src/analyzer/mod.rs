//! Static analysis of logging calls in a Java subset.

mod ast;
mod callgraph;
mod lexer;
mod parser;
mod paths;
pub mod pretty;
mod report;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use ast::{BinOp, Call, Expr, MethodDecl, Param, SourceUnit, Stmt};
pub use callgraph::{build_call_graph, CallEdge, CallGraph, CallTarget, MethodKey};
pub use parser::parse_source;
pub use paths::{
    enumerate_paths, find_log_calls, CallPath, CalleeKind, LogCallSite, PathBudget,
    PathEnumeration, PathStep,
};
pub use report::{analyze_unit, render_report, CallReport, StaticReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: u32,
    pub message: String,
}

impl SyntaxError {
    pub(crate) fn new(line: u32, message: impl Into<String>) -> Self {
        SyntaxError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for SyntaxError {}

pub const DEFAULT_BUILTINS: [&str; 14] = [
    "toUpperCase",
    "toLowerCase",
    "trim",
    "strip",
    "valueOf",
    "toString",
    "format",
    "substring",
    "replace",
    "replaceAll",
    "concat",
    "join",
    "repeat",
    "intern",
];

pub const DEFAULT_LOGGER_NAMES: [&str; 4] = ["log", "logger", "LOG", "LOGGER"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalyzerConfig {
    pub builtin_methods: Vec<String>,
    pub logger_names: Vec<String>,
    pub budget: PathBudget,
}

impl Default for AnalyzerConfig {
    fn default() -> Self {
        AnalyzerConfig {
            builtin_methods: DEFAULT_BUILTINS.iter().map(|s| s.to_string()).collect(),
            logger_names: DEFAULT_LOGGER_NAMES.iter().map(|s| s.to_string()).collect(),
            budget: PathBudget::default(),
        }
    }
}
