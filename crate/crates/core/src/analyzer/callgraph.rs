use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::{walk_stmt_calls, Call, Expr, MethodDecl, SourceUnit};
use super::pretty::call_to_string;
use super::AnalyzerConfig;
use crate::template::Level;

/// Identity of a method inside the analyzed project.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MethodKey {
    pub class: String,
    pub method: String,
    pub arity: usize,
}

impl fmt::Display for MethodKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}/{}", self.class, self.method, self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CallTarget {
    User(MethodKey),
    /// A recognized library method; carries the owning class for reports.
    BuiltIn { class: String },
    /// Not resolvable; `class` is the best-effort owning class, if any.
    Unknown { class: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallEdge {
    pub caller: MethodKey,
    pub line: u32,
    pub call_code: String,
    pub target: CallTarget,
}

/// Project-wide method index plus every resolved call edge.
#[derive(Debug)]
pub struct CallGraph<'p> {
    units: BTreeMap<String, &'p SourceUnit>,
    methods: BTreeMap<MethodKey, (&'p SourceUnit, &'p MethodDecl)>,
    builtins: BTreeSet<String>,
    logger_names: Vec<String>,
    pub edges: Vec<CallEdge>,
}

impl<'p> CallGraph<'p> {
    pub fn method(&self, key: &MethodKey) -> Option<(&'p SourceUnit, &'p MethodDecl)> {
        self.methods.get(key).copied()
    }

    pub fn unit(&self, fqn: &str) -> Option<&'p SourceUnit> {
        self.units.get(fqn).copied()
    }

    pub fn method_count(&self) -> usize {
        self.methods.len()
    }

    /// Returns the level when `call` is a logger invocation such as `log.error(..)`.
    pub fn log_level(&self, call: &Call) -> Option<Level> {
        super::paths::log_level(call, &self.logger_names)
    }

    fn resolve_class(&self, unit: &SourceUnit, name: &str) -> Option<String> {
        if name.contains('.') {
            return self.units.contains_key(name).then(|| name.to_string());
        }
        if name == unit.class_name {
            return Some(unit.fqn());
        }
        for import in &unit.imports {
            if let Some(prefix) = import.strip_suffix(".*") {
                let candidate = format!("{prefix}.{name}");
                if self.units.contains_key(&candidate) {
                    return Some(candidate);
                }
            } else if import.rsplit('.').next() == Some(name) && self.units.contains_key(import) {
                return Some(import.clone());
            }
        }
        let same_package = if unit.package.is_empty() {
            name.to_string()
        } else {
            format!("{}.{}", unit.package, name)
        };
        self.units
            .contains_key(&same_package)
            .then_some(same_package)
    }

    fn external_class(unit: &SourceUnit, name: &str) -> Option<String> {
        if name.contains('.') {
            return Some(name.to_string());
        }
        unit.imports
            .iter()
            .find(|i| i.rsplit('.').next() == Some(name))
            .cloned()
    }

    /// Resolves a (non-logger) call made from inside `unit`.
    pub fn resolve(&self, unit: &SourceUnit, call: &Call) -> CallTarget {
        let arity = call.args.len();
        let builtin = self.builtins.contains(&call.method);
        match call.receiver.as_deref() {
            None => {
                let key = MethodKey {
                    class: unit.fqn(),
                    method: call.method.clone(),
                    arity,
                };
                if self.methods.contains_key(&key) {
                    CallTarget::User(key)
                } else if builtin {
                    CallTarget::BuiltIn {
                        class: "java.lang.String".into(),
                    }
                } else {
                    CallTarget::Unknown {
                        class: Some(unit.fqn()),
                    }
                }
            }
            Some(Expr::Ident(name)) => {
                if let Some(class) = self.resolve_class(unit, name) {
                    let key = MethodKey {
                        class: class.clone(),
                        method: call.method.clone(),
                        arity,
                    };
                    return if self.methods.contains_key(&key) {
                        CallTarget::User(key)
                    } else {
                        CallTarget::Unknown { class: Some(class) }
                    };
                }
                let looks_like_class = name
                    .rsplit('.')
                    .next()
                    .and_then(|s| s.chars().next())
                    .is_some_and(|c| c.is_ascii_uppercase());
                if builtin {
                    let class = if looks_like_class && !name.contains('.') {
                        format!("java.lang.{name}")
                    } else {
                        "java.lang.String".into()
                    };
                    CallTarget::BuiltIn { class }
                } else {
                    let class = if looks_like_class {
                        Self::external_class(unit, name).or_else(|| Some(name.to_string()))
                    } else {
                        None
                    };
                    CallTarget::Unknown { class }
                }
            }
            Some(_) if builtin => CallTarget::BuiltIn {
                class: "java.lang.String".into(),
            },
            Some(_) => CallTarget::Unknown { class: None },
        }
    }
}

/// Indexes every method of the project and resolves all non-logger calls.
pub fn build_call_graph<'p>(units: &'p [SourceUnit], config: &AnalyzerConfig) -> CallGraph<'p> {
    let mut graph = CallGraph {
        units: units.iter().map(|u| (u.fqn(), u)).collect(),
        methods: BTreeMap::new(),
        builtins: config.builtin_methods.iter().cloned().collect(),
        logger_names: config.logger_names.clone(),
        edges: Vec::new(),
    };
    for unit in units {
        let class = unit.fqn();
        for method in &unit.methods {
            let key = MethodKey {
                class: class.clone(),
                method: method.name.clone(),
                arity: method.params.len(),
            };
            graph.methods.entry(key).or_insert((unit, method));
        }
    }

    let mut edges = Vec::new();
    for unit in units {
        let class = unit.fqn();
        for method in &unit.methods {
            let caller = MethodKey {
                class: class.clone(),
                method: method.name.clone(),
                arity: method.params.len(),
            };
            walk_stmt_calls(&method.body, &mut |call| {
                if graph.log_level(call).is_some() {
                    return;
                }
                edges.push(CallEdge {
                    caller: caller.clone(),
                    line: call.line,
                    call_code: call_to_string(call),
                    target: graph.resolve(unit, call),
                });
            });
        }
    }
    graph.edges = edges;
    graph
}
