//! Logging call discovery and inter-procedural string-construction paths.
//!
//! Each logging call is traced back through resolved helper methods to every
//! reachable `return` expression. String literals become constants; variables,
//! built-in and unknown calls become wildcards. Branch conditions are never
//! evaluated, so every `return` reachable under some branch choice is a path.

use serde::{Deserialize, Serialize};

use super::ast::{walk_stmt_calls, Call, Expr, SourceUnit, Stmt};
use super::callgraph::{CallGraph, CallTarget, MethodKey};
use super::pretty::{call_to_string, method_to_string};
use super::AnalyzerConfig;
use crate::template::{Level, TemplateBody};

/// Limits applied while enumerating paths for one call site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PathBudget {
    pub max_call_depth: usize,
    pub max_paths_per_site: usize,
}

impl Default for PathBudget {
    fn default() -> Self {
        Self {
            max_call_depth: 8,
            max_paths_per_site: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogCallSite {
    /// Fully qualified class containing the call.
    pub class_fqn: String,
    /// Enclosing method as `class.method`.
    pub method: String,
    pub line: u32,
    pub level: Level,
    pub call: Call,
    pub literal_format: Option<String>,
}

impl LogCallSite {
    pub fn args(&self) -> &[Expr] {
        &self.call.args
    }

    /// `{}` placeholder count of the literal format, if there is one.
    pub fn placeholder_count(&self) -> Option<usize> {
        self.literal_format.as_ref().map(|f| f.matches("{}").count())
    }

    /// True when the placeholder count cannot be reconciled with the argument
    /// count, allowing one trailing throwable argument.
    pub fn placeholder_mismatch(&self) -> bool {
        match self.placeholder_count() {
            Some(placeholders) => {
                let values = self.call.args.len().saturating_sub(1);
                placeholders > values || values > placeholders + 1
            }
            None => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CalleeKind {
    LogInvocation,
    UserMethod { source: String },
    BuiltIn,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub class_fqn: String,
    pub call_code: String,
    pub callee: CalleeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CallPath {
    pub steps: Vec<PathStep>,
    pub yielded: TemplateBody,
    /// Some traversed callee contains a branch.
    pub conditional: bool,
    /// A call was cut off by the depth budget and yielded a wildcard.
    pub truncated: bool,
    /// Recursive call chains that were collapsed to a wildcard.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cycles: Vec<Vec<String>>,
}

impl CallPath {
    fn wild() -> Self {
        CallPath {
            yielded: TemplateBody::wild(),
            ..Default::default()
        }
    }

    fn join(&self, other: &CallPath) -> CallPath {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        let mut cycles = self.cycles.clone();
        cycles.extend(other.cycles.iter().cloned());
        CallPath {
            steps,
            yielded: self.yielded.concat(&other.yielded),
            conditional: self.conditional || other.conditional,
            truncated: self.truncated || other.truncated,
            cycles,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathEnumeration {
    pub paths: Vec<CallPath>,
    /// More paths existed than `max_paths_per_site`.
    pub truncated: bool,
}

impl PathEnumeration {
    pub fn cycle_detected(&self) -> bool {
        self.paths.iter().any(|p| !p.cycles.is_empty())
    }
}

pub(crate) fn log_level(call: &Call, logger_names: &[String]) -> Option<Level> {
    match call.receiver.as_deref() {
        Some(Expr::Ident(name)) if logger_names.iter().any(|n| n == name) => {
            Level::ALL.into_iter().find(|l| l.as_str() == call.method)
        }
        _ => None,
    }
}

/// Finds every logger invocation in `unit`, in source order.
pub fn find_log_calls(unit: &SourceUnit, config: &AnalyzerConfig) -> Vec<LogCallSite> {
    let class_fqn = unit.fqn();
    let mut sites = Vec::new();
    for method in &unit.methods {
        walk_stmt_calls(&method.body, &mut |call| {
            if let Some(level) = log_level(call, &config.logger_names) {
                let literal_format = match call.args.first() {
                    Some(Expr::Str(s)) => Some(s.clone()),
                    _ => None,
                };
                sites.push(LogCallSite {
                    class_fqn: class_fqn.clone(),
                    method: format!("{class_fqn}.{}", method.name),
                    line: call.line,
                    level,
                    call: call.clone(),
                    literal_format,
                });
            }
        });
    }
    sites
}

/// Enumerates the string-construction paths of one logging call.
///
/// Only the first argument contributes to the message; the remaining
/// arguments fill `{}` placeholders and are represented by those wildcards.
pub fn enumerate_paths(site: &LogCallSite, graph: &CallGraph<'_>, budget: PathBudget) -> PathEnumeration {
    let unit = graph
        .unit(&site.class_fqn)
        .expect("call site belongs to a unit of the graph");
    let mut walker = Walker {
        graph,
        budget,
        stack: Vec::new(),
        dropped: false,
    };
    let head = PathStep {
        class_fqn: site.class_fqn.clone(),
        call_code: call_to_string(&site.call),
        callee: CalleeKind::LogInvocation,
    };
    let alternatives = match site.call.args.first() {
        Some(message) => walker.eval(message, unit, 0, true),
        None => vec![CallPath::default()],
    };
    let paths = alternatives
        .into_iter()
        .map(|mut path| {
            path.steps.insert(0, head.clone());
            path
        })
        .collect();
    PathEnumeration {
        paths,
        truncated: walker.dropped,
    }
}

struct Walker<'g, 'p> {
    graph: &'g CallGraph<'p>,
    budget: PathBudget,
    stack: Vec<MethodKey>,
    dropped: bool,
}

impl<'g, 'p> Walker<'g, 'p> {
    fn cap(&mut self, paths: &mut Vec<CallPath>) {
        if paths.len() > self.budget.max_paths_per_site {
            paths.truncate(self.budget.max_paths_per_site);
            self.dropped = true;
        }
    }

    fn eval(&mut self, expr: &Expr, unit: &'p SourceUnit, depth: usize, format_string: bool) -> Vec<CallPath> {
        match expr {
            Expr::Str(text) => {
                let body = if format_string {
                    let mut body = TemplateBody::new();
                    for (i, piece) in text.split("{}").enumerate() {
                        if i > 0 {
                            body.push_wild();
                        }
                        body.push_const(piece);
                    }
                    body
                } else {
                    TemplateBody::constant(text)
                };
                vec![CallPath {
                    yielded: body,
                    ..Default::default()
                }]
            }
            Expr::Literal(text) if is_plain_literal(text) => vec![CallPath {
                yielded: TemplateBody::constant(text),
                ..Default::default()
            }],
            Expr::Literal(_) | Expr::Ident(_) | Expr::Not(_) | Expr::Binary { .. } => {
                vec![CallPath::wild()]
            }
            Expr::Concat(lhs, rhs) => {
                let left = self.eval(lhs, unit, depth, format_string);
                let right = self.eval(rhs, unit, depth, format_string);
                let mut out = Vec::with_capacity(left.len() * right.len());
                'product: for l in &left {
                    for r in &right {
                        if out.len() == self.budget.max_paths_per_site {
                            self.dropped = true;
                            break 'product;
                        }
                        out.push(l.join(r));
                    }
                }
                out
            }
            Expr::Call(call) => self.eval_call(call, unit, depth),
        }
    }

    fn eval_call(&mut self, call: &Call, unit: &'p SourceUnit, depth: usize) -> Vec<CallPath> {
        let target = self.graph.resolve(unit, call);
        let call_code = call_to_string(call);
        match target {
            CallTarget::BuiltIn { class } => vec![CallPath {
                steps: vec![PathStep {
                    class_fqn: class,
                    call_code,
                    callee: CalleeKind::BuiltIn,
                }],
                ..CallPath::wild()
            }],
            CallTarget::Unknown { class } => vec![CallPath {
                steps: vec![PathStep {
                    class_fqn: class.unwrap_or_else(|| "unknown".into()),
                    call_code,
                    callee: CalleeKind::Unknown,
                }],
                ..CallPath::wild()
            }],
            CallTarget::User(key) => {
                if self.stack.contains(&key) {
                    let mut chain: Vec<String> = self.stack.iter().map(|k| k.to_string()).collect();
                    chain.push(key.to_string());
                    return vec![CallPath {
                        cycles: vec![chain],
                        ..CallPath::wild()
                    }];
                }
                if depth >= self.budget.max_call_depth {
                    return vec![CallPath {
                        truncated: true,
                        ..CallPath::wild()
                    }];
                }
                let (callee_unit, method) = self
                    .graph
                    .method(&key)
                    .expect("resolved targets exist in the graph");
                let step = PathStep {
                    class_fqn: key.class.clone(),
                    call_code,
                    callee: CalleeKind::UserMethod {
                        source: method_to_string(method),
                    },
                };
                let conditional = contains_branch(&method.body);
                let head = CallPath {
                    steps: vec![step],
                    conditional,
                    ..Default::default()
                };
                let (returns, _) = reachable_returns(&method.body);
                let values: Vec<&Expr> = returns.into_iter().flatten().collect();
                if values.is_empty() {
                    return vec![head.join(&CallPath::wild())];
                }
                self.stack.push(key);
                let mut out = Vec::new();
                for value in values {
                    for alt in self.eval(value, callee_unit, depth + 1, false) {
                        out.push(head.join(&alt));
                    }
                    self.cap(&mut out);
                }
                self.stack.pop();
                out
            }
        }
    }
}

fn is_plain_literal(text: &str) -> bool {
    matches!(text, "true" | "false" | "null") || text.bytes().all(|b| b.is_ascii_digit())
}

fn contains_branch(stmts: &[Stmt]) -> bool {
    stmts.iter().any(|s| matches!(s, Stmt::If { .. }))
}

/// Collects `return` statements reachable under some branch choice, in
/// source order. The flag reports whether every branch returns.
pub(crate) fn reachable_returns(stmts: &[Stmt]) -> (Vec<Option<&Expr>>, bool) {
    let mut out = Vec::new();
    for stmt in stmts {
        match stmt {
            Stmt::Return(value) => {
                out.push(value.as_ref());
                return (out, true);
            }
            Stmt::If {
                then_branch,
                else_branch,
                ..
            } => {
                let (t, t_returns) = reachable_returns(then_branch);
                let (e, e_returns) = reachable_returns(else_branch);
                out.extend(t);
                out.extend(e);
                if t_returns && e_returns {
                    return (out, true);
                }
            }
            Stmt::Expr(_) => {}
        }
    }
    (out, false)
}
