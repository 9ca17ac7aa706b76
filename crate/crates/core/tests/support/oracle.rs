//! Random program generator for the analyzable Java subset, plus an
//! independent interpreter that explores every branch combination.

use std::collections::BTreeSet;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LEVELS: usize = 3;
const MAX_IFS: usize = 3;
const MAX_CALLS_PER_EXPR: usize = 2;
const BUILTINS: [&str; 3] = ["toUpperCase", "toLowerCase", "trim"];

#[derive(Debug, Clone)]
pub enum GExpr {
    Str(String),
    Int(u32),
    Param(usize),
    Builtin { recv: Box<GExpr>, op: &'static str },
    Call { class: usize, method: usize, args: Vec<GExpr> },
    Concat(Vec<GExpr>),
}

#[derive(Debug, Clone)]
pub enum GStmt {
    If { cond: String, then: Vec<GStmt>, els: Option<Vec<GStmt>> },
    Return(GExpr),
    Log { level: &'static str, msg: GExpr },
}

#[derive(Debug, Clone)]
pub struct GMethod {
    pub name: String,
    pub params: usize,
    pub level: usize,
    pub body: Vec<GStmt>,
}

#[derive(Debug, Clone)]
pub struct GClass {
    pub name: String,
    pub methods: Vec<GMethod>,
}

#[derive(Debug, Clone)]
pub struct Program {
    pub classes: Vec<GClass>,
}

/// One log call of the entry method: its interpreted outputs.
#[derive(Debug, Clone)]
pub struct LogOutputs {
    pub level: &'static str,
    pub outputs: BTreeSet<String>,
}

struct Gen {
    rng: ChaCha8Rng,
    /// (class, method) pairs available per level
    by_level: Vec<Vec<(usize, usize, usize)>>,
}

impl Gen {
    fn literal(&mut self, allow_braces: bool) -> String {
        const PIECES: [&str; 12] = [
            "User_", "id=", " failed", "Guest", ":", " ", "_NotFound", "conn ", "x", "", "-", "to ",
        ];
        let mut s = String::new();
        for _ in 0..self.rng.gen_range(1..=2) {
            s.push_str(PIECES.choose(&mut self.rng).unwrap());
        }
        if allow_braces && self.rng.gen_bool(0.2) {
            s.push_str("{}");
        }
        s
    }

    fn atom(&mut self, params: usize, level: usize, depth: usize, log_site: bool) -> GExpr {
        let callable = level + 1 < self.by_level.len() && !self.by_level[level + 1].is_empty();
        let roll = self.rng.gen_range(0..10);
        match roll {
            0..=2 => GExpr::Str(self.literal(log_site)),
            3 => GExpr::Int(self.rng.gen_range(0..100)),
            4 | 5 if params > 0 => GExpr::Param(self.rng.gen_range(0..params)),
            6 if params > 0 => GExpr::Builtin {
                recv: Box::new(GExpr::Param(self.rng.gen_range(0..params))),
                op: BUILTINS.choose(&mut self.rng).unwrap(),
            },
            _ if callable && depth == 0 => {
                let &(class, method, arity) = self.by_level[level + 1].choose(&mut self.rng).unwrap();
                let args = (0..arity)
                    .map(|_| self.expr(params, level, depth + 1, false))
                    .collect();
                let call = GExpr::Call { class, method, args };
                if self.rng.gen_bool(0.15) {
                    GExpr::Builtin {
                        recv: Box::new(call),
                        op: BUILTINS.choose(&mut self.rng).unwrap(),
                    }
                } else {
                    call
                }
            }
            _ => GExpr::Str(self.literal(log_site)),
        }
    }

    fn expr(&mut self, params: usize, level: usize, depth: usize, log_site: bool) -> GExpr {
        let n = self.rng.gen_range(1..=3);
        let mut calls = 0;
        let mut parts = Vec::with_capacity(n);
        while parts.len() < n {
            let atom = self.atom(params, level, depth, log_site);
            // `1 + 2 + "a"` is arithmetic in Java, keep numbers off the front
            if parts.is_empty() && matches!(atom, GExpr::Int(_)) {
                continue;
            }
            let is_call = matches!(&atom, GExpr::Call { .. })
                || matches!(&atom, GExpr::Builtin { recv, .. } if matches!(**recv, GExpr::Call { .. }));
            if is_call {
                if calls == MAX_CALLS_PER_EXPR {
                    continue;
                }
                calls += 1;
            }
            parts.push(atom);
        }
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            GExpr::Concat(parts)
        }
    }

    fn cond(&mut self, params: usize) -> String {
        if params == 0 {
            return "flag()".to_string();
        }
        let p = self.rng.gen_range(0..params);
        match self.rng.gen_range(0..4) {
            0 => format!("p{p}.startsWith(\"user\")"),
            1 => format!("p{p} == null"),
            2 => format!("!p{p}.isEmpty()"),
            _ => format!("p{p}.length() > 3 && p{p} != null"),
        }
    }

    /// A statement list that always ends by returning.
    fn body(&mut self, params: usize, level: usize, ifs: &mut usize) -> Vec<GStmt> {
        let roll = self.rng.gen_range(0..3);
        if *ifs == 0 || roll == 0 {
            return vec![GStmt::Return(self.expr(params, level, 0, false))];
        }
        *ifs -= 1;
        let cond = self.cond(params);
        let then = self.body(params, level, ifs);
        if roll == 1 {
            let els = self.body(params, level, ifs);
            vec![GStmt::If { cond, then, els: Some(els) }]
        } else {
            let mut out = vec![GStmt::If { cond, then, els: None }];
            out.extend(self.body(params, level, ifs));
            out
        }
    }

    fn log_body(&mut self, params: usize, ifs: &mut usize) -> Vec<GStmt> {
        const LEVELS_: [&str; 4] = ["info", "warn", "error", "debug"];
        let mut out = Vec::new();
        for _ in 0..self.rng.gen_range(1..=2) {
            let level = LEVELS_.choose(&mut self.rng).unwrap();
            let msg = self.expr(params, 0, 0, true);
            if *ifs > 0 && self.rng.gen_bool(0.4) {
                *ifs -= 1;
                let cond = self.cond(params);
                let other = self.expr(params, 0, 0, true);
                out.push(GStmt::If {
                    cond,
                    then: vec![GStmt::Log { level, msg }],
                    els: Some(vec![GStmt::Log { level: "error", msg: other }]),
                });
            } else {
                out.push(GStmt::Log { level, msg });
            }
        }
        out
    }
}

/// Builds a program whose class `C0` has an `entry` method with log calls;
/// helper methods live at call levels 1..=3 and only call deeper levels.
pub fn generate(seed: u64) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let class_count = rng.gen_range(1..=3);
    let mut classes: Vec<GClass> = (0..class_count)
        .map(|i| GClass {
            name: format!("C{i}"),
            methods: Vec::new(),
        })
        .collect();
    let mut by_level = vec![Vec::new(); LEVELS + 1];
    let mut sigs: Vec<(usize, String, usize, usize)> = Vec::new();
    for level in 1..=LEVELS {
        for k in 0..rng.gen_range(1..=2) {
            let class = rng.gen_range(0..class_count);
            let arity = rng.gen_range(0..=2);
            let name = format!("m{level}x{k}");
            let method = classes[class].methods.len();
            classes[class].methods.push(GMethod {
                name: name.clone(),
                params: arity,
                level,
                body: Vec::new(),
            });
            by_level[level].push((class, method, arity));
            sigs.push((class, name, arity, level));
        }
    }
    let mut gen = Gen { rng, by_level };
    for class in classes.iter_mut() {
        for m in class.methods.iter_mut() {
            let mut ifs = gen.rng.gen_range(0..=MAX_IFS);
            m.body = gen.body(m.params, m.level, &mut ifs);
        }
    }
    let mut ifs = gen.rng.gen_range(0..=MAX_IFS);
    let entry_body = gen.log_body(1, &mut ifs);
    classes[0].methods.push(GMethod {
        name: "entry".into(),
        params: 1,
        level: 0,
        body: entry_body,
    });
    Program { classes }
}

fn quote(s: &str) -> String {
    format!("\"{s}\"")
}

impl Program {
    fn render_expr(&self, e: &GExpr, from_class: usize, out: &mut String) {
        match e {
            GExpr::Str(s) => out.push_str(&quote(s)),
            GExpr::Int(n) => {
                let _ = write!(out, "{n}");
            }
            GExpr::Param(p) => {
                let _ = write!(out, "p{p}");
            }
            GExpr::Builtin { recv, op } => {
                self.render_expr(recv, from_class, out);
                let _ = write!(out, ".{op}()");
            }
            GExpr::Call { class, method, args } => {
                if *class != from_class {
                    let _ = write!(out, "{}.", self.classes[*class].name);
                }
                out.push_str(&self.classes[*class].methods[*method].name);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.render_expr(a, from_class, out);
                }
                out.push(')');
            }
            GExpr::Concat(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" + ");
                    }
                    self.render_expr(p, from_class, out);
                }
            }
        }
    }

    fn render_stmts(&self, stmts: &[GStmt], class: usize, indent: usize, out: &mut String) {
        let pad = " ".repeat(indent);
        for s in stmts {
            match s {
                GStmt::Return(e) => {
                    out.push_str(&pad);
                    out.push_str("return ");
                    self.render_expr(e, class, out);
                    out.push_str(";\n");
                }
                GStmt::Log { level, msg } => {
                    let _ = write!(out, "{pad}log.{level}(");
                    self.render_expr(msg, class, out);
                    out.push_str(");\n");
                }
                GStmt::If { cond, then, els } => {
                    let _ = writeln!(out, "{pad}if ({cond}) {{");
                    self.render_stmts(then, class, indent + 4, out);
                    if let Some(els) = els {
                        let _ = writeln!(out, "{pad}}} else {{");
                        self.render_stmts(els, class, indent + 4, out);
                    }
                    let _ = writeln!(out, "{pad}}}");
                }
            }
        }
    }

    /// Java source of every class, as (file name, text).
    pub fn sources(&self) -> Vec<(String, String)> {
        self.classes
            .iter()
            .enumerate()
            .map(|(ci, class)| {
                let mut out = String::from("package gen;\n\n");
                let _ = writeln!(out, "public class {} {{", class.name);
                for m in &class.methods {
                    let params: Vec<String> = (0..m.params).map(|p| format!("String p{p}")).collect();
                    let ret = if m.level == 0 { "void" } else { "String" };
                    let _ = writeln!(out, "    public static {ret} {}({}) {{", m.name, params.join(", "));
                    self.render_stmts(&m.body, ci, 8, &mut out);
                    out.push_str("    }\n");
                }
                out.push_str("}\n");
                (format!("{}.java", class.name), out)
            })
            .collect()
    }

    fn eval(&self, e: &GExpr, env: &[String]) -> Vec<String> {
        let mut values = self.eval_all(e, env);
        values.sort();
        values.dedup();
        values
    }

    fn eval_all(&self, e: &GExpr, env: &[String]) -> Vec<String> {
        match e {
            GExpr::Str(s) => vec![s.clone()],
            GExpr::Int(n) => vec![n.to_string()],
            GExpr::Param(p) => vec![env[*p].clone()],
            GExpr::Builtin { recv, op } => self
                .eval(recv, env)
                .into_iter()
                .map(|v| match *op {
                    "toUpperCase" => v.to_uppercase(),
                    "toLowerCase" => v.to_lowercase(),
                    _ => v.trim().to_string(),
                })
                .collect(),
            GExpr::Call { class, method, args } => {
                let mut arg_sets: Vec<Vec<String>> = vec![Vec::new()];
                for a in args {
                    let values = self.eval(a, env);
                    arg_sets = arg_sets
                        .into_iter()
                        .flat_map(|prefix| {
                            values.iter().map(move |v| {
                                let mut next = prefix.clone();
                                next.push(v.clone());
                                next
                            })
                        })
                        .collect();
                }
                let m = &self.classes[*class].methods[*method];
                arg_sets.iter().flat_map(|args| self.exec(&m.body, args)).collect()
            }
            GExpr::Concat(parts) => parts.iter().fold(vec![String::new()], |acc, p| {
                let values = self.eval(p, env);
                acc.iter()
                    .flat_map(|a| values.iter().map(move |v| format!("{a}{v}")))
                    .collect()
            }),
        }
    }

    /// Every value the statement list can return, over all branch outcomes.
    fn exec(&self, stmts: &[GStmt], env: &[String]) -> Vec<String> {
        let Some((first, rest)) = stmts.split_first() else {
            return Vec::new();
        };
        match first {
            GStmt::Return(e) => self.eval(e, env),
            GStmt::Log { .. } => self.exec(rest, env),
            GStmt::If { then, els, .. } => {
                let mut out = self.exec(then, env);
                match els {
                    Some(els) => out.extend(self.exec(els, env)),
                    None => out.extend(self.exec(rest, env)),
                }
                out
            }
        }
    }

    fn collect_logs(&self, stmts: &[GStmt], env: &[String], out: &mut Vec<LogOutputs>) {
        for s in stmts {
            match s {
                GStmt::Log { level, msg } => out.push(LogOutputs {
                    level,
                    outputs: self.eval(msg, env).into_iter().collect(),
                }),
                GStmt::If { then, els, .. } => {
                    self.collect_logs(then, env, out);
                    if let Some(els) = els {
                        self.collect_logs(els, env, out);
                    }
                }
                GStmt::Return(_) => {}
            }
        }
    }

    /// Interpreted outputs of each log call of `C0.entry`, in source order,
    /// with the entry parameter bound to `arg`.
    pub fn interpret_entry(&self, arg: &str) -> Vec<LogOutputs> {
        let entry = self.classes[0]
            .methods
            .iter()
            .find(|m| m.name == "entry")
            .expect("generated programs have an entry method");
        let mut out = Vec::new();
        self.collect_logs(&entry.body, &[arg.to_string()], &mut out);
        out
    }
}
