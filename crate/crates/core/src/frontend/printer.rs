// SPDX-License-Identifier: Apache-2.0

//! Canonical pretty-printer. Output re-parses to a structurally identical tree.

use std::fmt::Write;

use super::ast::*;

const INDENT: &str = "    ";

pub fn pretty_print(tree: &SyntaxTree) -> String {
    let mut p = Printer { out: String::new(), depth: 0 };
    for (i, class) in tree.classes.iter().enumerate() {
        if i > 0 {
            p.out.push('\n');
        }
        p.class(class);
    }
    p.out
}

pub fn print_expr(expr: &Expr) -> String {
    let mut p = Printer { out: String::new(), depth: 0 };
    p.expr(expr, 0);
    p.out
}

struct Printer {
    out: String,
    depth: usize,
}

impl Printer {
    fn line(&mut self, text: &str) {
        for _ in 0..self.depth {
            self.out.push_str(INDENT);
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn class(&mut self, class: &ClassDecl) {
        let mut head = String::new();
        if class.is_static {
            head.push_str("static ");
        }
        let _ = write!(head, "class {}", class.name);
        if let Some(s) = &class.supertype {
            let _ = write!(head, " extends {}", s.name);
        }
        head.push_str(" {");
        self.line(&head);
        self.depth += 1;
        for member in &class.members {
            match member {
                Member::Field(f) => {
                    let mut s = String::new();
                    if f.is_static {
                        s.push_str("static ");
                    }
                    let _ = write!(s, "{} {}", f.ty.name, f.name);
                    if let Some(init) = &f.init {
                        s.push_str(" = ");
                        s.push_str(&print_expr(init));
                    }
                    s.push(';');
                    self.line(&s);
                }
                Member::Method(m) => {
                    let mut s = String::new();
                    if m.is_static {
                        s.push_str("static ");
                    }
                    if m.is_native {
                        s.push_str("native ");
                    }
                    let _ = write!(s, "{} {}", m.ret.name, m.name);
                    if !m.type_params.is_empty() {
                        let _ = write!(s, "<{}>", m.type_params.join(", "));
                    }
                    s.push_str(&params(&m.params));
                    match &m.body {
                        Some(body) => self.block_with_head(&s, body),
                        None => {
                            s.push(';');
                            self.line(&s);
                        }
                    }
                }
                Member::Ctor(c) => {
                    let head = format!("{}{}", class.name, params(&c.params));
                    self.block_with_head(&head, &c.body);
                }
            }
        }
        self.depth -= 1;
        self.line("}");
    }

    fn block_with_head(&mut self, head: &str, body: &Block) {
        self.line(&format!("{head} {{"));
        self.stmts(body);
        self.line("}");
    }

    fn stmts(&mut self, block: &Block) {
        self.depth += 1;
        for stmt in &block.stmts {
            self.stmt(stmt);
        }
        self.depth -= 1;
    }

    fn stmt(&mut self, stmt: &Stmt) {
        match &stmt.kind {
            StmtKind::If { cond, then_block, else_block } => {
                self.line(&format!("if ({}) {{", print_expr(cond)));
                self.stmts(then_block);
                if let Some(b) = else_block {
                    self.line("} else {");
                    self.stmts(b);
                }
                self.line("}");
            }
            StmtKind::Return(None) => self.line("return;"),
            StmtKind::Return(Some(e)) => self.line(&format!("return {};", print_expr(e))),
            StmtKind::Throw(e) => self.line(&format!("throw {};", print_expr(e))),
            StmtKind::Local { ty, name, init } => match init {
                Some(e) => self.line(&format!("{} {} = {};", ty.name, name, print_expr(e))),
                None => self.line(&format!("{} {};", ty.name, name)),
            },
            StmtKind::Assign { target, value } => {
                self.line(&format!("{} = {};", print_expr(target), print_expr(value)))
            }
            StmtKind::Expr(e) => self.line(&format!("{};", print_expr(e))),
        }
    }

    /// `min_prec` is the weakest binary operator that may appear unparenthesized.
    fn expr(&mut self, expr: &Expr, min_prec: u8) {
        match &expr.kind {
            ExprKind::Literal(lit) => self.literal(lit),
            ExprKind::Ident(name) => self.out.push_str(name),
            ExprKind::This => self.out.push_str("this"),
            ExprKind::Unary { op, operand } => {
                self.out.push_str(op.symbol());
                self.operand(operand);
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let prec = op.precedence();
                let wrap = prec < min_prec;
                if wrap {
                    self.out.push('(');
                }
                self.expr(lhs, prec);
                let _ = write!(self.out, " {} ", op.symbol());
                self.expr(rhs, prec + 1);
                if wrap {
                    self.out.push(')');
                }
            }
            ExprKind::Member { receiver, name } => {
                self.operand(receiver);
                let _ = write!(self.out, ".{name}");
            }
            ExprKind::Call { callee, type_args, args } => {
                self.expr(callee, u8::MAX);
                if let Some(ta) = type_args {
                    let names: Vec<String> = ta.args.iter().map(|t| t.name.to_string()).collect();
                    let _ = write!(self.out, "<{}>", names.join(", "));
                }
                self.args(args);
            }
            ExprKind::New { ty, args } => {
                let _ = write!(self.out, "new {}", ty.name);
                self.args(args);
            }
            ExprKind::Instantiate { ty, args } => {
                let _ = write!(self.out, "New<{}>.get", ty.name);
                self.args(args);
            }
        }
    }

    /// Receivers and unary operands: anything looser than a postfix chain is parenthesized.
    fn operand(&mut self, expr: &Expr) {
        let needs_parens = matches!(expr.kind, ExprKind::Binary { .. } | ExprKind::Unary { .. });
        if needs_parens {
            self.out.push('(');
            self.expr(expr, 0);
            self.out.push(')');
        } else {
            self.expr(expr, 0);
        }
    }

    fn args(&mut self, args: &[Expr]) {
        self.out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            self.expr(a, 0);
        }
        self.out.push(')');
    }

    fn literal(&mut self, lit: &Literal) {
        match lit {
            Literal::Int(v) => {
                let _ = write!(self.out, "{v}");
            }
            Literal::Bool(b) => {
                let _ = write!(self.out, "{b}");
            }
            Literal::Null => self.out.push_str("null"),
            Literal::Str(s) => {
                self.out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => self.out.push_str("\\\""),
                        '\\' => self.out.push_str("\\\\"),
                        '\n' => self.out.push_str("\\n"),
                        '\t' => self.out.push_str("\\t"),
                        c => self.out.push(c),
                    }
                }
                self.out.push('"');
            }
        }
    }
}

fn params(params: &[Param]) -> String {
    let parts: Vec<String> = params.iter().map(|p| format!("{} {}", p.ty.name, p.name)).collect();
    format!("({})", parts.join(", "))
}
