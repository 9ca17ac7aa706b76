//! Canonical source rendering of parsed trees, used for report call codes
//! and callee listings.

use std::fmt::Write;

use super::ast::{Call, Expr, MethodDecl, Stmt};

const INDENT: &str = "  ";

// Binding strength used to decide where parentheses are needed.
const PREC_CONCAT: u8 = 5;
const PREC_UNARY: u8 = 6;
const PREC_POSTFIX: u8 = 7;

fn prec(expr: &Expr) -> u8 {
    match expr {
        Expr::Binary { op, .. } => op.precedence(),
        Expr::Concat(..) => PREC_CONCAT,
        Expr::Not(_) => PREC_UNARY,
        _ => PREC_POSTFIX,
    }
}

pub fn quote_str(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for ch in text.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn expr_to_string(expr: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, expr);
    out
}

pub fn call_to_string(call: &Call) -> String {
    let mut out = String::new();
    write_call(&mut out, call);
    out
}

fn write_operand(out: &mut String, expr: &Expr, min_prec: u8) {
    if prec(expr) < min_prec {
        out.push('(');
        write_expr(out, expr);
        out.push(')');
    } else {
        write_expr(out, expr);
    }
}

fn write_expr(out: &mut String, expr: &Expr) {
    match expr {
        Expr::Str(s) => out.push_str(&quote_str(s)),
        Expr::Ident(name) | Expr::Literal(name) => out.push_str(name),
        Expr::Concat(l, r) => {
            write_operand(out, l, PREC_CONCAT);
            out.push_str(" + ");
            write_operand(out, r, PREC_CONCAT + 1);
        }
        Expr::Not(e) => {
            out.push('!');
            write_operand(out, e, PREC_UNARY);
        }
        Expr::Binary { op, lhs, rhs } => {
            let p = op.precedence();
            write_operand(out, lhs, p);
            let _ = write!(out, " {} ", op.symbol());
            write_operand(out, rhs, p + 1);
        }
        Expr::Call(call) => write_call(out, call),
    }
}

fn write_call(out: &mut String, call: &Call) {
    if let Some(recv) = &call.receiver {
        write_operand(out, recv, PREC_POSTFIX);
        out.push('.');
    }
    out.push_str(&call.method);
    out.push('(');
    for (i, arg) in call.args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, arg);
    }
    out.push(')');
}

/// Renders a method declaration with two-space indentation and K&R braces.
pub fn method_to_string(method: &MethodDecl) -> String {
    let mut out = String::new();
    for m in &method.modifiers {
        out.push_str(m);
        out.push(' ');
    }
    let _ = write!(out, "{} {}(", method.return_type, method.name);
    for (i, p) in method.params.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{} {}", p.ty, p.name);
    }
    out.push_str(") {\n");
    write_stmts(&mut out, &method.body, 1);
    out.push('}');
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str(INDENT);
    }
}

fn write_stmts(out: &mut String, stmts: &[Stmt], depth: usize) {
    for stmt in stmts {
        indent(out, depth);
        write_stmt(out, stmt, depth);
        out.push('\n');
    }
}

fn write_stmt(out: &mut String, stmt: &Stmt, depth: usize) {
    match stmt {
        Stmt::Return(None) => out.push_str("return;"),
        Stmt::Return(Some(e)) => {
            out.push_str("return ");
            write_expr(out, e);
            out.push(';');
        }
        Stmt::Expr(e) => {
            write_expr(out, e);
            out.push(';');
        }
        Stmt::If {
            cond,
            then_branch,
            else_branch,
        } => {
            out.push_str("if (");
            write_expr(out, cond);
            out.push_str(") {\n");
            write_stmts(out, then_branch, depth + 1);
            indent(out, depth);
            out.push('}');
            match else_branch.as_slice() {
                [] => {}
                [nested @ Stmt::If { .. }] => {
                    out.push_str(" else ");
                    write_stmt(out, nested, depth);
                }
                branch => {
                    out.push_str(" else {\n");
                    write_stmts(out, branch, depth + 1);
                    indent(out, depth);
                    out.push('}');
                }
            }
        }
    }
}
