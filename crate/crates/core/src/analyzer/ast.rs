use std::path::PathBuf;

/// One parsed source file: a single class with its methods.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceUnit {
    pub path: PathBuf,
    pub package: String,
    pub class_name: String,
    pub imports: Vec<String>,
    pub methods: Vec<MethodDecl>,
}

impl SourceUnit {
    /// Fully qualified class name, e.g. `com.example.Foo`.
    pub fn fqn(&self) -> String {
        if self.package.is_empty() {
            self.class_name.clone()
        } else {
            format!("{}.{}", self.package, self.class_name)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodDecl {
    pub name: String,
    pub modifiers: Vec<String>,
    pub return_type: String,
    pub params: Vec<Param>,
    pub is_static: bool,
    pub body: Vec<Stmt>,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    If {
        cond: Expr,
        then_branch: Vec<Stmt>,
        else_branch: Vec<Stmt>,
    },
    Return(Option<Expr>),
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// String literal, unescaped.
    Str(String),
    /// Variable or (dotted) class/field reference.
    Ident(String),
    /// Number, `true`, `false` or `null`, kept as source text.
    Literal(String),
    Concat(Box<Expr>, Box<Expr>),
    Call(Call),
    Not(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Call {
    pub receiver: Option<Box<Expr>>,
    pub method: String,
    pub args: Vec<Expr>,
    pub line: u32,
}

impl Expr {
    pub fn str(text: &str) -> Expr {
        Expr::Str(text.to_string())
    }

    pub fn ident(name: &str) -> Expr {
        Expr::Ident(name.to_string())
    }

    pub fn concat(lhs: Expr, rhs: Expr) -> Expr {
        Expr::Concat(Box::new(lhs), Box::new(rhs))
    }

    pub fn call(receiver: Option<Expr>, method: &str, args: Vec<Expr>, line: u32) -> Expr {
        Expr::Call(Call {
            receiver: receiver.map(Box::new),
            method: method.to_string(),
            args,
            line,
        })
    }

    /// Visits every call in this expression, outermost first.
    pub fn walk_calls<'a>(&'a self, f: &mut dyn FnMut(&'a Call)) {
        match self {
            Expr::Str(_) | Expr::Ident(_) | Expr::Literal(_) => {}
            Expr::Concat(l, r) => {
                l.walk_calls(f);
                r.walk_calls(f);
            }
            Expr::Not(e) => e.walk_calls(f),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.walk_calls(f);
                rhs.walk_calls(f);
            }
            Expr::Call(call) => {
                f(call);
                if let Some(recv) = &call.receiver {
                    recv.walk_calls(f);
                }
                for arg in &call.args {
                    arg.walk_calls(f);
                }
            }
        }
    }
}

/// Visits every call appearing anywhere in a statement list.
pub fn walk_stmt_calls<'a>(stmts: &'a [Stmt], f: &mut dyn FnMut(&'a Call)) {
    for stmt in stmts {
        match stmt {
            Stmt::If {
                cond,
                then_branch,
                else_branch,
            } => {
                cond.walk_calls(f);
                walk_stmt_calls(then_branch, f);
                walk_stmt_calls(else_branch, f);
            }
            Stmt::Return(Some(e)) | Stmt::Expr(e) => e.walk_calls(f),
            Stmt::Return(None) => {}
        }
    }
}
