//! Recursive descent parser for the analyzed Java subset.
//!
//! Supported: package and import declarations, one class, static or instance
//! methods, `if`/`else`, `return`, expression statements, string/number
//! literals, identifiers, `+` concatenation, method calls and the boolean
//! operators used in branch conditions. Anything else is a [`SyntaxError`].

use std::path::Path;

use super::ast::{BinOp, Call, Expr, MethodDecl, Param, SourceUnit, Stmt};
use super::lexer::{tokenize, Tok, Token};
use super::SyntaxError;

const MODIFIERS: [&str; 9] = [
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "synchronized",
    "native",
    "strictfp",
];

const RESERVED: [&str; 10] = [
    "new", "for", "while", "do", "switch", "try", "catch", "throw", "class", "else",
];

/// Parses one source file of the supported subset.
pub fn parse_source(text: &str, path: &Path) -> Result<SourceUnit, SyntaxError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    parser.unit(path)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].tok
    }

    fn line(&self) -> u32 {
        self.tokens[self.pos].line
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::new(self.line(), message))
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::Number(n) => format!("`{n}`"),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Eof => "end of file".into(),
        }
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), SyntaxError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`, found {}", self.describe()))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.err(format!("expected identifier, found {}", self.describe())),
        }
    }

    fn qualified_name(&mut self) -> Result<String, SyntaxError> {
        let mut name = self.ident()?;
        while self.is_punct(".") && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    fn unit(&mut self, path: &Path) -> Result<SourceUnit, SyntaxError> {
        let mut package = String::new();
        if self.eat_keyword("package") {
            package = self.qualified_name()?;
            self.expect_punct(";")?;
        }

        let mut imports = Vec::new();
        while self.eat_keyword("import") {
            self.eat_keyword("static");
            let mut name = self.qualified_name()?;
            if self.eat_punct(".") {
                self.expect_punct("*")?;
                name.push_str(".*");
            }
            self.expect_punct(";")?;
            imports.push(name);
        }

        self.modifiers()?;
        if !self.eat_keyword("class") {
            return self.err(format!("expected `class`, found {}", self.describe()));
        }
        let class_name = self.ident()?;
        if self.eat_keyword("extends") {
            self.qualified_name()?;
        }
        if self.eat_keyword("implements") {
            self.qualified_name()?;
            while self.eat_punct(",") {
                self.qualified_name()?;
            }
        }
        self.expect_punct("{")?;

        let mut methods = Vec::new();
        loop {
            if self.eat_punct("}") {
                break;
            }
            if self.eat_punct(";") {
                continue;
            }
            if *self.peek() == Tok::Eof {
                return self.err("unexpected end of file inside class body");
            }
            let method = self.method()?;
            if methods
                .iter()
                .any(|m: &MethodDecl| m.name == method.name && m.params.len() == method.params.len())
            {
                return Err(SyntaxError::new(
                    method.line,
                    format!("duplicate method `{}` with {} parameters", method.name, method.params.len()),
                ));
            }
            methods.push(method);
        }
        if *self.peek() != Tok::Eof {
            return self.err(format!(
                "only one class per file is supported, found {}",
                self.describe()
            ));
        }

        Ok(SourceUnit {
            path: path.to_path_buf(),
            package,
            class_name,
            imports,
            methods,
        })
    }

    fn modifiers(&mut self) -> Result<Vec<String>, SyntaxError> {
        let mut mods = Vec::new();
        loop {
            if self.is_punct("@") {
                return self.err("annotations are outside the supported subset");
            }
            match self.peek() {
                Tok::Ident(s) if MODIFIERS.contains(&s.as_str()) => {
                    mods.push(s.clone());
                    self.bump();
                }
                _ => return Ok(mods),
            }
        }
    }

    fn type_name(&mut self) -> Result<String, SyntaxError> {
        let mut ty = self.qualified_name()?;
        if self.is_punct("<") {
            return self.err("generic types are outside the supported subset");
        }
        while self.eat_punct("[") {
            self.expect_punct("]")?;
            ty.push_str("[]");
        }
        Ok(ty)
    }

    fn method(&mut self) -> Result<MethodDecl, SyntaxError> {
        let modifiers = self.modifiers()?;
        if self.is_keyword("class") {
            return self.err("nested classes are outside the supported subset");
        }
        let return_type = self.type_name()?;
        if self.is_punct("(") {
            return self.err("constructors are outside the supported subset");
        }
        let line = self.line();
        let name = self.ident()?;
        if self.is_punct("=") || self.is_punct(";") {
            return self.err("field declarations are outside the supported subset");
        }
        self.expect_punct("(")?;
        let mut params: Vec<Param> = Vec::new();
        if !self.eat_punct(")") {
            loop {
                self.eat_keyword("final");
                let ty = self.type_name()?;
                let pname = self.ident()?;
                if params.iter().any(|p| p.name == pname) {
                    return self.err(format!("duplicate parameter `{pname}`"));
                }
                params.push(Param { name: pname, ty });
                if self.eat_punct(")") {
                    break;
                }
                self.expect_punct(",")?;
            }
        }
        if self.eat_keyword("throws") {
            self.qualified_name()?;
            while self.eat_punct(",") {
                self.qualified_name()?;
            }
        }
        let body = self.block()?;
        let is_static = modifiers.iter().any(|m| m == "static");
        Ok(MethodDecl {
            name,
            modifiers,
            return_type,
            params,
            is_static,
            body,
            line,
        })
    }

    fn block(&mut self) -> Result<Vec<Stmt>, SyntaxError> {
        self.expect_punct("{")?;
        let mut stmts = Vec::new();
        while !self.eat_punct("}") {
            if *self.peek() == Tok::Eof {
                return self.err("unexpected end of file inside block");
            }
            self.statement(&mut stmts)?;
        }
        Ok(stmts)
    }

    /// Parses one statement, appending to `out`. Nested blocks are flattened.
    fn statement(&mut self, out: &mut Vec<Stmt>) -> Result<(), SyntaxError> {
        if self.is_punct("{") {
            out.extend(self.block()?);
            return Ok(());
        }
        if self.eat_punct(";") {
            return Ok(());
        }
        if self.eat_keyword("if") {
            self.expect_punct("(")?;
            let cond = self.expr()?;
            self.expect_punct(")")?;
            let mut then_branch = Vec::new();
            self.statement(&mut then_branch)?;
            let mut else_branch = Vec::new();
            if self.eat_keyword("else") {
                self.statement(&mut else_branch)?;
            }
            out.push(Stmt::If {
                cond,
                then_branch,
                else_branch,
            });
            return Ok(());
        }
        if self.eat_keyword("return") {
            if self.eat_punct(";") {
                out.push(Stmt::Return(None));
            } else {
                let e = self.expr()?;
                self.expect_punct(";")?;
                out.push(Stmt::Return(Some(e)));
            }
            return Ok(());
        }
        if let Tok::Ident(s) = self.peek() {
            if RESERVED.contains(&s.as_str()) {
                return self.err(format!("`{s}` is outside the supported subset"));
            }
            if matches!(self.peek_at(1), Tok::Ident(_)) {
                return self.err("local variable declarations are outside the supported subset");
            }
        }
        let e = self.expr()?;
        if self.is_punct("=") {
            return self.err("assignments are outside the supported subset");
        }
        self.expect_punct(";")?;
        out.push(Stmt::Expr(e));
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinOp> {
        match self.peek() {
            Tok::Punct("||") => Some(BinOp::Or),
            Tok::Punct("&&") => Some(BinOp::And),
            Tok::Punct("==") => Some(BinOp::Eq),
            Tok::Punct("!=") => Some(BinOp::Ne),
            Tok::Punct("<") => Some(BinOp::Lt),
            Tok::Punct("<=") => Some(BinOp::Le),
            Tok::Punct(">") => Some(BinOp::Gt),
            Tok::Punct(">=") => Some(BinOp::Ge),
            _ => None,
        }
    }

    fn binary(&mut self, min_prec: u8) -> Result<Expr, SyntaxError> {
        let mut lhs = self.additive()?;
        while let Some(op) = self.binary_op() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.bump();
            let rhs = self.binary(prec + 1)?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn additive(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.eat_punct("+") {
            let rhs = self.unary()?;
            lhs = Expr::Concat(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat_punct("!") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Expr, SyntaxError> {
        let mut expr = self.primary()?;
        while self.is_punct(".") {
            self.bump();
            let line = self.line();
            let name = self.ident()?;
            if self.is_punct("(") {
                let args = self.args()?;
                expr = Expr::Call(Call {
                    receiver: Some(Box::new(expr)),
                    method: name,
                    args,
                    line,
                });
            } else {
                match expr {
                    Expr::Ident(base) => expr = Expr::Ident(format!("{base}.{name}")),
                    _ => return self.err("field access is only supported on names"),
                }
            }
        }
        Ok(expr)
    }

    fn args(&mut self) -> Result<Vec<Expr>, SyntaxError> {
        self.expect_punct("(")?;
        let mut args = Vec::new();
        if self.eat_punct(")") {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat_punct(")") {
                return Ok(args);
            }
            self.expect_punct(",")?;
        }
    }

    fn primary(&mut self) -> Result<Expr, SyntaxError> {
        let line = self.line();
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::Str(s))
            }
            Tok::Number(n) => {
                self.bump();
                Ok(Expr::Literal(n))
            }
            Tok::Ident(s) if matches!(s.as_str(), "true" | "false" | "null") => {
                self.bump();
                Ok(Expr::Literal(s))
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                if self.is_punct("(") {
                    let args = self.args()?;
                    Ok(Expr::Call(Call {
                        receiver: None,
                        method: name,
                        args,
                        line,
                    }))
                } else {
                    Ok(Expr::Ident(name))
                }
            }
            Tok::Punct("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            _ => self.err(format!("expected expression, found {}", self.describe())),
        }
    }
}
