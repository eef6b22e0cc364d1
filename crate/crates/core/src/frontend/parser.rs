// SPDX-License-Identifier: Apache-2.0

//! Recursive-descent parser. Grammar is documented in `docs/language.md`.

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::SyntaxError;

pub fn parse(file: &SourceFile) -> Result<SyntaxTree, SyntaxError> {
    let tokens = tokenize(&file.path, &file.content)?;
    let mut parser = Parser { path: &file.path, tokens, pos: 0 };
    let mut classes = Vec::new();
    while parser.peek() != &Tok::Eof {
        classes.push(parser.class_decl()?);
    }
    let span = Span { offset: 0, len: file.content.len() as u32, line: 1, col: 1 };
    let mut tree = SyntaxTree { path: file.path.clone(), id: 0, span, classes };
    tree.renumber();
    Ok(tree)
}

struct Parser<'a> {
    path: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    /// Span from `start` through the last consumed token.
    fn since(&self, start: Span) -> Span {
        start.to(self.prev_span())
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        let tok = &self.tokens[self.pos];
        let expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        let message = if expected.is_empty() {
            format!("unexpected {}", tok.tok.describe())
        } else {
            format!("expected {}, found {}", expected.join(" or "), tok.tok.describe())
        };
        SyntaxError::new(self.path, tok.span.line, tok.span.col, message, expected)
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if self.peek() == &tok {
            Ok(self.bump())
        } else {
            Err(self.error(&[&format!("`{}`", tok.spelling())]))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(name)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn class_decl(&mut self) -> PResult<ClassDecl> {
        let start = self.span();
        let is_static = self.eat(&Tok::Static);
        if self.peek() != &Tok::Class {
            return Err(self.error(&["`class`"]));
        }
        self.bump();
        let name = self.ident()?;
        let supertype = if self.eat(&Tok::Extends) {
            let s = self.span();
            let super_name = self.ident()?;
            Some(TypeRef { id: 0, span: self.since(s), name: TypeName::Class(super_name) })
        } else {
            None
        };
        self.expect(Tok::LBrace)?;
        let mut members = Vec::new();
        while !matches!(self.peek(), Tok::RBrace | Tok::Eof) {
            members.push(self.member(&name)?);
        }
        self.expect(Tok::RBrace)?;
        Ok(ClassDecl { id: 0, span: self.since(start), is_static, name, supertype, members })
    }

    fn member(&mut self, class_name: &str) -> PResult<Member> {
        let start = self.span();
        // Constructor: `ClassName(`.
        if matches!(self.peek(), Tok::Ident(n) if n == class_name) && self.peek_at(1) == &Tok::LParen {
            self.bump();
            let params = self.params()?;
            let body = self.block()?;
            return Ok(Member::Ctor(CtorDecl { id: 0, span: self.since(start), params, body }));
        }
        let is_static = self.eat(&Tok::Static);
        let is_native = self.eat(&Tok::Native);
        let ty = self.type_ref(true)?;
        let name = self.ident()?;
        match self.peek() {
            Tok::Lt | Tok::LParen => {
                let type_params = if self.eat(&Tok::Lt) {
                    let mut names = vec![self.ident()?];
                    while self.eat(&Tok::Comma) {
                        names.push(self.ident()?);
                    }
                    self.expect(Tok::Gt)?;
                    names
                } else {
                    Vec::new()
                };
                let params = self.params()?;
                let body = if is_native {
                    self.expect(Tok::Semi)?;
                    None
                } else {
                    Some(self.block()?)
                };
                Ok(Member::Method(MethodDecl {
                    id: 0,
                    span: self.since(start),
                    is_static,
                    is_native,
                    ret: ty,
                    name,
                    type_params,
                    params,
                    body,
                }))
            }
            Tok::Assign | Tok::Semi if !is_native => {
                let init = if self.eat(&Tok::Assign) { Some(self.expr()?) } else { None };
                self.expect(Tok::Semi)?;
                Ok(Member::Field(FieldDecl { id: 0, span: self.since(start), is_static, ty, name, init }))
            }
            _ if is_native => Err(self.error(&["`(`"])),
            _ => Err(self.error(&["`(`", "`=`", "`;`"])),
        }
    }

    fn params(&mut self) -> PResult<Vec<Param>> {
        self.expect(Tok::LParen)?;
        let mut params = Vec::new();
        if self.peek() != &Tok::RParen {
            loop {
                let start = self.span();
                let ty = self.type_ref(false)?;
                let name = self.ident()?;
                params.push(Param { id: 0, span: self.since(start), ty, name });
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        Ok(params)
    }

    fn type_ref(&mut self, allow_void: bool) -> PResult<TypeRef> {
        let span = self.span();
        let name = match self.peek().clone() {
            Tok::KwInt => TypeName::Int,
            Tok::KwLong => TypeName::Long,
            Tok::KwBool => TypeName::Bool,
            Tok::KwString => TypeName::String,
            Tok::KwObject => TypeName::Object,
            Tok::KwVoid if allow_void => TypeName::Void,
            Tok::Ident(n) => TypeName::Class(n),
            _ => return Err(self.error(&["type"])),
        };
        self.bump();
        Ok(TypeRef { id: 0, span, name })
    }

    fn block(&mut self) -> PResult<Block> {
        let start = self.span();
        self.expect(Tok::LBrace)?;
        let mut stmts = Vec::new();
        while !matches!(self.peek(), Tok::RBrace | Tok::Eof) {
            stmts.push(self.stmt()?);
        }
        self.expect(Tok::RBrace)?;
        Ok(Block { id: 0, span: self.since(start), stmts })
    }

    /// A braced block, or a single statement wrapped into one.
    fn body(&mut self) -> PResult<Block> {
        if self.peek() == &Tok::LBrace {
            return self.block();
        }
        let stmt = self.stmt()?;
        Ok(Block { id: 0, span: stmt.span, stmts: vec![stmt] })
    }

    fn starts_local_decl(&self) -> bool {
        match self.peek() {
            Tok::KwInt | Tok::KwLong | Tok::KwBool | Tok::KwString | Tok::KwObject => true,
            Tok::Ident(_) => matches!(self.peek_at(1), Tok::Ident(_)),
            _ => false,
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let start = self.span();
        let kind = match self.peek() {
            Tok::If => {
                self.bump();
                self.expect(Tok::LParen)?;
                let cond = self.expr()?;
                self.expect(Tok::RParen)?;
                let then_block = self.body()?;
                let else_block = if self.eat(&Tok::Else) { Some(self.body()?) } else { None };
                StmtKind::If { cond, then_block, else_block }
            }
            Tok::Return => {
                self.bump();
                let value = if self.peek() == &Tok::Semi { None } else { Some(self.expr()?) };
                self.expect(Tok::Semi)?;
                StmtKind::Return(value)
            }
            Tok::Throw => {
                self.bump();
                let value = self.expr()?;
                self.expect(Tok::Semi)?;
                StmtKind::Throw(value)
            }
            Tok::KwVoid => return Err(self.error(&["statement"])),
            _ if self.starts_local_decl() => {
                let ty = self.type_ref(false)?;
                let name = self.ident()?;
                let init = if self.eat(&Tok::Assign) { Some(self.expr()?) } else { None };
                self.expect(Tok::Semi)?;
                StmtKind::Local { ty, name, init }
            }
            _ => {
                let target = self.expr()?;
                if self.eat(&Tok::Assign) {
                    let value = self.expr()?;
                    self.expect(Tok::Semi)?;
                    StmtKind::Assign { target, value }
                } else {
                    self.expect(Tok::Semi)?;
                    StmtKind::Expr(target)
                }
            }
        };
        Ok(Stmt { id: 0, span: self.since(start), kind })
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinaryOp> {
        Some(match self.peek() {
            Tok::OrOr => BinaryOp::Or,
            Tok::AndAnd => BinaryOp::And,
            Tok::EqEq => BinaryOp::Eq,
            Tok::Ne => BinaryOp::Ne,
            Tok::Lt => BinaryOp::Lt,
            Tok::Le => BinaryOp::Le,
            Tok::Gt => BinaryOp::Gt,
            Tok::Ge => BinaryOp::Ge,
            Tok::Plus => BinaryOp::Add,
            Tok::Minus => BinaryOp::Sub,
            Tok::Star => BinaryOp::Mul,
            Tok::Slash => BinaryOp::Div,
            Tok::Percent => BinaryOp::Rem,
            _ => return None,
        })
    }

    /// Precedence climbing; all binary operators are left-associative.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.bump();
            let rhs = self.binary(prec + 1)?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }, span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let start = self.span();
        let op = match self.peek() {
            Tok::Bang => UnaryOp::Not,
            Tok::Minus => UnaryOp::Neg,
            _ => return self.postfix(),
        };
        self.bump();
        let operand = self.unary()?;
        Ok(Expr::new(ExprKind::Unary { op, operand: Box::new(operand) }, self.since(start)))
    }

    /// Tries to read `<T, ...>` immediately followed by `(`; rewinds on failure.
    fn try_call_type_args(&mut self) -> Option<TypeArgList> {
        if self.peek() != &Tok::Lt {
            return None;
        }
        let save = self.pos;
        let start = self.span();
        self.bump();
        let mut args = Vec::new();
        loop {
            match self.type_ref(false) {
                Ok(t) => args.push(t),
                Err(_) => {
                    self.pos = save;
                    return None;
                }
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        if self.peek() != &Tok::Gt || self.peek_at(1) != &Tok::LParen {
            self.pos = save;
            return None;
        }
        self.bump();
        Some(TypeArgList { id: 0, span: self.since(start), args })
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if self.peek() != &Tok::RParen {
            loop {
                args.push(self.expr()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let start = self.span();
        let mut expr = self.primary()?;
        while self.eat(&Tok::Dot) {
            let name = self.ident()?;
            let member = Expr::new(ExprKind::Member { receiver: Box::new(expr), name }, self.since(start));
            let type_args = self.try_call_type_args();
            expr = if type_args.is_some() || self.peek() == &Tok::LParen {
                let args = self.args()?;
                Expr::new(ExprKind::Call { callee: Box::new(member), type_args, args }, self.since(start))
            } else {
                member
            };
        }
        Ok(expr)
    }

    /// `New<T>.get(` lookahead for the uninitialized instantiator.
    fn at_instantiate(&self) -> bool {
        matches!(self.peek(), Tok::Ident(n) if n == "New")
            && self.peek_at(1) == &Tok::Lt
            && self.peek_at(3) == &Tok::Gt
            && self.peek_at(4) == &Tok::Dot
            && matches!(self.peek_at(5), Tok::Ident(n) if n == "get")
            && self.peek_at(6) == &Tok::LParen
    }

    fn primary(&mut self) -> PResult<Expr> {
        let start = self.span();
        let kind = match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                ExprKind::Literal(Literal::Int(v))
            }
            Tok::Str(s) => {
                self.bump();
                ExprKind::Literal(Literal::Str(s))
            }
            Tok::True => {
                self.bump();
                ExprKind::Literal(Literal::Bool(true))
            }
            Tok::False => {
                self.bump();
                ExprKind::Literal(Literal::Bool(false))
            }
            Tok::Null => {
                self.bump();
                ExprKind::Literal(Literal::Null)
            }
            Tok::This => {
                self.bump();
                ExprKind::This
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                // Parentheses are not represented; the inner node keeps its own span.
                return Ok(inner);
            }
            Tok::New => {
                self.bump();
                let ty = self.type_ref(false)?;
                let args = self.args()?;
                ExprKind::New { ty, args }
            }
            Tok::Ident(_) if self.at_instantiate() => {
                self.bump();
                self.bump();
                let ty = self.type_ref(false)?;
                self.bump();
                self.bump();
                self.bump();
                let args = self.args()?;
                ExprKind::Instantiate { ty, args }
            }
            Tok::Ident(name) => {
                self.bump();
                let ident = Expr::new(ExprKind::Ident(name), start);
                let type_args = self.try_call_type_args();
                if type_args.is_some() || self.peek() == &Tok::LParen {
                    let args = self.args()?;
                    ExprKind::Call { callee: Box::new(ident), type_args, args }
                } else {
                    return Ok(ident);
                }
            }
            _ => return Err(self.error(&["expression"])),
        };
        Ok(Expr::new(kind, self.since(start)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_src(src: &str) -> Result<SyntaxTree, SyntaxError> {
        parse(&SourceFile::new("t.ul", src))
    }

    #[test]
    fn empty_class() {
        let tree = parse_src("class A { }").unwrap();
        assert_eq!(tree.classes.len(), 1);
        assert_eq!(tree.classes[0].name, "A");
        assert!(tree.classes[0].members.is_empty());
    }

    #[test]
    fn missing_semicolon_reports_closing_brace() {
        let err = parse_src("class A { int f() { return 1 } }").unwrap_err();
        assert_eq!((err.line, err.col), (1, 30));
        assert!(err.expected.iter().any(|e| e == "`;`"), "{err:?}");
        assert_eq!(err.to_string(), "t.ul:1:30: expected `;`, found `}`");
    }

    #[test]
    fn generic_call_vs_comparison() {
        let tree =
            parse_src("class A { static bool f(int a, int b) { int x = DB.Q<int>(\"k\"); return a < b; } }").unwrap();
        let m = tree.classes[0].methods().next().unwrap();
        let body = m.body.as_ref().unwrap();
        match &body.stmts[0].kind {
            StmtKind::Local { init: Some(Expr { kind: ExprKind::Call { type_args, .. }, .. }), .. } => {
                assert_eq!(type_args.as_ref().unwrap().args[0].name, TypeName::Int);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            &body.stmts[1].kind,
            StmtKind::Return(Some(Expr { kind: ExprKind::Binary { op: BinaryOp::Lt, .. }, .. }))
        ));
    }

    #[test]
    fn instantiate_form() {
        let tree = parse_src("class A { void f() { B b = New<B>.get(1, 2); } }").unwrap();
        let m = tree.classes[0].methods().next().unwrap();
        match &m.body.as_ref().unwrap().stmts[0].kind {
            StmtKind::Local { init: Some(Expr { kind: ExprKind::Instantiate { ty, args }, .. }), .. } => {
                assert_eq!(ty.name, TypeName::Class("B".into()));
                assert_eq!(args.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbraced_if_body_is_wrapped() {
        let tree = parse_src("class A { int f(int x) { if (x > 0) return 1; else return 2; } }").unwrap();
        let m = tree.classes[0].methods().next().unwrap();
        match &m.body.as_ref().unwrap().stmts[0].kind {
            StmtKind::If { then_block, else_block, .. } => {
                assert_eq!(then_block.stmts.len(), 1);
                assert_eq!(else_block.as_ref().unwrap().stmts.len(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let tree = parse_src("class A { bool f(int a) { return a + 1 * 2 > 3 && true; } }").unwrap();
        let m = tree.classes[0].methods().next().unwrap();
        let StmtKind::Return(Some(e)) = &m.body.as_ref().unwrap().stmts[0].kind else { panic!() };
        let ExprKind::Binary { op: BinaryOp::And, lhs, .. } = &e.kind else { panic!("{e:?}") };
        let ExprKind::Binary { op: BinaryOp::Gt, lhs, .. } = &lhs.kind else { panic!() };
        assert!(matches!(lhs.kind, ExprKind::Binary { op: BinaryOp::Add, .. }));
    }

    #[test]
    fn native_method_requires_semicolon() {
        assert!(parse_src("class S { static native int q(string s); }").is_ok());
        assert!(parse_src("class S { static native int q(string s) { } }").is_err());
    }

    #[test]
    fn void_local_rejected() {
        assert!(parse_src("class A { void f() { void x; } }").is_err());
    }
}
