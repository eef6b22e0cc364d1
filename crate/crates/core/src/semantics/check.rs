// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use super::*;
use crate::frontend::ast::*;
use crate::frontend::Program;

/// Class that must declare the isolator and instantiator natives before
/// `recv._()` and `New<T>.get(..)` type-check.
pub const ENV_CLASS: &str = "Env";
pub const ISOLATE_NATIVE: &str = "isolate";
pub const INSTANTIATE_NATIVE: &str = "instantiate";

/// Resolves every name in `program` and type-checks all bodies.
///
/// All diagnostics are collected; the table is only returned when there are none.
pub fn resolve(program: &Program) -> Result<SymbolTable, Vec<SemanticError>> {
    let mut errors = Vec::new();
    let mut table = SymbolTable::default();
    declare_builtins(&mut table);
    declare_classes(program, &mut table, &mut errors);
    check_hierarchy(program, &table, &mut errors);

    for (file, tree) in program.trees.iter().enumerate() {
        for class in &tree.classes {
            let mut cx = Checker {
                table: &mut table,
                errors: &mut errors,
                path: &tree.path,
                file,
                class,
                is_static: false,
                ret: None,
                scopes: Vec::new(),
            };
            cx.check_class();
        }
    }
    if errors.is_empty() {
        Ok(table)
    } else {
        Err(errors)
    }
}

fn declare_builtins(table: &mut SymbolTable) {
    for (name, primitive) in [("int", true), ("long", true), ("bool", true), ("string", true), ("object", false)] {
        table.types.insert(
            name.to_string(),
            TypeInfo {
                name: name.to_string(),
                is_primitive: primitive,
                is_static: false,
                declared_supertype: None,
                members: Vec::new(),
                ctor_params: None,
                file: None,
            },
        );
    }
}

fn member_sigs(class: &ClassDecl) -> Vec<MemberSig> {
    class
        .members
        .iter()
        .filter_map(|m| match m {
            Member::Field(f) => Some(MemberSig {
                name: f.name.clone(),
                kind: MemberKind::Field,
                param_names: Vec::new(),
                param_types: Vec::new(),
                type_params: Vec::new(),
                return_type: f.ty.name.clone(),
                is_static: f.is_static,
                is_native: false,
            }),
            Member::Method(m) => Some(MemberSig {
                name: m.name.clone(),
                kind: MemberKind::Method,
                param_names: m.params.iter().map(|p| p.name.clone()).collect(),
                param_types: m.params.iter().map(|p| p.ty.name.clone()).collect(),
                type_params: m.type_params.clone(),
                return_type: m.ret.name.clone(),
                is_static: m.is_static,
                is_native: m.is_native,
            }),
            Member::Ctor(_) => None,
        })
        .collect()
}

fn declare_classes(program: &Program, table: &mut SymbolTable, errors: &mut Vec<SemanticError>) {
    for (file, tree) in program.trees.iter().enumerate() {
        for class in &tree.classes {
            if class.name == "New" || table.types.contains_key(&class.name) {
                errors.push(SemanticError::at(
                    ErrorKind::Name,
                    &tree.path,
                    class.span,
                    format!("class `{}` is already defined or reserved", class.name),
                ));
                continue;
            }
            let mut seen: BTreeMap<&str, ()> = BTreeMap::new();
            let mut ctors = 0;
            for member in &class.members {
                let (name, span) = match member {
                    Member::Field(f) => (f.name.as_str(), f.span),
                    Member::Method(m) => (m.name.as_str(), m.span),
                    Member::Ctor(c) => {
                        ctors += 1;
                        if ctors > 1 {
                            errors.push(SemanticError::at(
                                ErrorKind::Name,
                                &tree.path,
                                c.span,
                                format!("class `{}` declares more than one constructor", class.name),
                            ));
                        }
                        if class.is_static {
                            errors.push(SemanticError::at(
                                ErrorKind::Type,
                                &tree.path,
                                c.span,
                                format!("static class `{}` cannot declare a constructor", class.name),
                            ));
                        }
                        continue;
                    }
                };
                if seen.insert(name, ()).is_some() {
                    errors.push(SemanticError::at(
                        ErrorKind::Name,
                        &tree.path,
                        span,
                        format!("duplicate member `{name}` in class `{}`", class.name),
                    ));
                }
                let is_static = match member {
                    Member::Field(f) => f.is_static,
                    Member::Method(m) => m.is_static,
                    Member::Ctor(_) => true,
                };
                if class.is_static && !is_static {
                    errors.push(SemanticError::at(
                        ErrorKind::Type,
                        &tree.path,
                        span,
                        format!("member `{name}` of static class `{}` must be static", class.name),
                    ));
                }
            }
            table.types.insert(
                class.name.clone(),
                TypeInfo {
                    name: class.name.clone(),
                    is_primitive: false,
                    is_static: class.is_static,
                    declared_supertype: class.supertype.as_ref().map(|s| s.name.to_string()),
                    members: member_sigs(class),
                    ctor_params: class.ctor().map(|c| c.params.iter().map(|p| p.ty.name.clone()).collect()),
                    file: Some(file),
                },
            );
        }
    }
}

fn check_hierarchy(program: &Program, table: &SymbolTable, errors: &mut Vec<SemanticError>) {
    for tree in &program.trees {
        for class in &tree.classes {
            let Some(sup) = &class.supertype else { continue };
            let sup_name = sup.name.to_string();
            if !table.class_exists(&sup_name) {
                errors.push(SemanticError::at(
                    ErrorKind::Name,
                    &tree.path,
                    sup.span,
                    format!("unknown supertype `{sup_name}`"),
                ));
                continue;
            }
            let chain = table.supertype_chain(&class.name);
            let last = chain.last().and_then(|c| table.types.get(c));
            if last.and_then(|t| t.declared_supertype.as_ref()).is_some() {
                errors.push(SemanticError::at(
                    ErrorKind::Type,
                    &tree.path,
                    class.span,
                    format!("cyclic inheritance involving `{}`", class.name),
                ));
                continue;
            }
            // Overrides must keep the inherited signature.
            for own in member_sigs(class) {
                if let Some((owner, inherited)) = table.lookup_member(&sup_name, &own.name) {
                    if inherited.kind != own.kind
                        || inherited.param_types != own.param_types
                        || inherited.return_type != own.return_type
                        || inherited.is_static != own.is_static
                    {
                        errors.push(SemanticError::at(
                            ErrorKind::Type,
                            &tree.path,
                            class.span,
                            format!("`{}.{}` conflicts with inherited member of `{owner}`", class.name, own.name),
                        ));
                    }
                }
            }
        }
    }
}

struct Checker<'a> {
    table: &'a mut SymbolTable,
    errors: &'a mut Vec<SemanticError>,
    path: &'a str,
    file: usize,
    class: &'a ClassDecl,
    is_static: bool,
    /// `Some` inside methods; `None` inside constructors and field initializers.
    ret: Option<TypeName>,
    scopes: Vec<Vec<(String, TypeName)>>,
}

fn numeric(t: &TypeName) -> bool {
    matches!(t, TypeName::Int | TypeName::Long)
}

impl<'a> Checker<'a> {
    fn key(&self, node: NodeId) -> NodeKey {
        NodeKey { file: self.file, node }
    }

    fn err(&mut self, kind: ErrorKind, span: Span, message: impl Into<String>) {
        self.errors.push(SemanticError::at(kind, self.path, span, message));
    }

    fn check_class(&mut self) {
        let class = self.class;
        for member in &class.members {
            self.scopes.clear();
            match member {
                Member::Field(f) => {
                    self.check_type(&f.ty, false);
                    self.is_static = f.is_static;
                    self.ret = None;
                    if let Some(init) = &f.init {
                        let t = self.expr(init);
                        self.expect_assignable(&t, &f.ty.name, init.span);
                    }
                }
                Member::Method(m) => {
                    self.check_type(&m.ret, true);
                    self.is_static = m.is_static;
                    self.ret = Some(m.ret.name.clone());
                    self.scopes.push(Vec::new());
                    self.declare_params(&m.params);
                    if let Some(body) = &m.body {
                        self.block(body);
                        if m.ret.name != TypeName::Void && !block_terminates(body) {
                            self.err(
                                ErrorKind::Type,
                                m.span,
                                format!("method `{}` may finish without returning a value", m.name),
                            );
                        }
                    } else if !m.is_static {
                        self.err(ErrorKind::Type, m.span, "native methods must be static");
                    }
                }
                Member::Ctor(c) => {
                    self.is_static = false;
                    self.ret = None;
                    self.scopes.push(Vec::new());
                    self.declare_params(&c.params);
                    self.block(&c.body);
                }
            }
        }
    }

    fn declare_params(&mut self, params: &[Param]) {
        for p in params {
            self.check_type(&p.ty, false);
            self.declare(&p.name, p.ty.name.clone(), p.span);
        }
    }

    fn check_type(&mut self, t: &TypeRef, allow_void: bool) {
        match &t.name {
            TypeName::Void if !allow_void => {
                self.err(ErrorKind::Type, t.span, "`void` is not a value type");
            }
            TypeName::Class(name) if !self.table.class_exists(name) => {
                self.err(ErrorKind::Name, t.span, format!("unknown type `{name}`"));
            }
            _ => {}
        }
        let key = self.key(t.id);
        self.table.resolutions.insert(key, Resolution::Type(t.name.clone()));
    }

    fn declare(&mut self, name: &str, ty: TypeName, span: Span) {
        if self.lookup_local(name).is_some() {
            self.err(ErrorKind::Name, span, format!("`{name}` is already declared in this scope"));
        }
        if let Some(scope) = self.scopes.last_mut() {
            scope.push((name.to_string(), ty));
        }
    }

    fn lookup_local(&self, name: &str) -> Option<&TypeName> {
        self.scopes.iter().rev().flat_map(|s| s.iter().rev()).find(|(n, _)| n == name).map(|(_, t)| t)
    }

    fn block(&mut self, block: &Block) {
        self.scopes.push(Vec::new());
        for stmt in &block.stmts {
            self.stmt(stmt);
        }
        self.scopes.pop();
    }

    fn stmt(&mut self, stmt: &Stmt) {
        match &stmt.kind {
            StmtKind::If { cond, then_block, else_block } => {
                let t = self.expr(cond);
                self.expect_assignable(&t, &TypeName::Bool, cond.span);
                self.block(then_block);
                if let Some(b) = else_block {
                    self.block(b);
                }
            }
            StmtKind::Return(value) => match (self.ret.clone(), value) {
                (None, None) | (Some(TypeName::Void), None) => {}
                (None, Some(e)) | (Some(TypeName::Void), Some(e)) => {
                    self.expr(e);
                    self.err(ErrorKind::Type, e.span, "cannot return a value here");
                }
                (Some(ret), Some(e)) => {
                    let t = self.expr(e);
                    self.expect_assignable(&t, &ret, e.span);
                }
                (Some(ret), None) => {
                    self.err(ErrorKind::Type, stmt.span, format!("missing return value of type `{ret}`"))
                }
            },
            StmtKind::Throw(e) => {
                let t = self.expr(e);
                self.expect_assignable(&t, &TypeName::String, e.span);
            }
            StmtKind::Local { ty, name, init } => {
                self.check_type(ty, false);
                if let Some(e) = init {
                    let t = self.expr(e);
                    self.expect_assignable(&t, &ty.name, e.span);
                }
                self.declare(name, ty.name.clone(), stmt.span);
            }
            StmtKind::Assign { target, value } => {
                let target_ty = match &target.kind {
                    ExprKind::Ident(_) | ExprKind::Member { .. } => self.expr(target),
                    _ => {
                        self.expr(target);
                        self.err(ErrorKind::Type, target.span, "invalid assignment target");
                        return;
                    }
                };
                let v = self.expr(value);
                match &target_ty {
                    ExprType::Value(t) => {
                        let t = t.clone();
                        self.expect_assignable(&v, &t, value.span);
                    }
                    ExprType::Error => {}
                    _ => self.err(ErrorKind::Type, target.span, "invalid assignment target"),
                }
            }
            StmtKind::Expr(e) => {
                self.expr(e);
            }
        }
    }

    fn assignable(&self, from: &ExprType, to: &TypeName) -> bool {
        match from {
            ExprType::Error => true,
            ExprType::Null => to.is_reference(),
            ExprType::ClassRef(_) => false,
            ExprType::Value(t) => {
                t == to
                    || (numeric(t) && numeric(to))
                    || match (t, to) {
                        (TypeName::Class(_), TypeName::Object) => true,
                        (TypeName::Class(a), TypeName::Class(b)) => self.table.is_subtype(a, b),
                        _ => false,
                    }
            }
        }
    }

    fn expect_assignable(&mut self, from: &ExprType, to: &TypeName, span: Span) {
        if !self.assignable(from, to) {
            let found = describe(from);
            self.err(ErrorKind::Type, span, format!("expected `{to}`, found {found}"));
        }
    }

    fn record(&mut self, expr: &Expr, t: ExprType) -> ExprType {
        let key = self.key(expr.id);
        self.table.expr_types.insert(key, t.clone());
        t
    }

    fn poison(&mut self, expr: &Expr) -> ExprType {
        self.record(expr, ExprType::Error)
    }

    fn expr(&mut self, expr: &Expr) -> ExprType {
        let t = match &expr.kind {
            ExprKind::Literal(lit) => match lit {
                Literal::Int(_) => ExprType::Value(TypeName::Int),
                Literal::Bool(_) => ExprType::Value(TypeName::Bool),
                Literal::Str(_) => ExprType::Value(TypeName::String),
                Literal::Null => ExprType::Null,
            },
            ExprKind::This => {
                if self.is_static {
                    self.err(ErrorKind::Type, expr.span, "`this` is not available in a static context");
                    return self.poison(expr);
                }
                ExprType::Value(TypeName::Class(self.class.name.clone()))
            }
            ExprKind::Ident(name) => return self.ident(expr, name),
            ExprKind::Unary { op, operand } => {
                let t = self.expr(operand);
                if t == ExprType::Error {
                    return self.poison(expr);
                }
                match (op, t.type_name()) {
                    (UnaryOp::Not, Some(TypeName::Bool)) => ExprType::Value(TypeName::Bool),
                    (UnaryOp::Neg, Some(n)) if numeric(n) => ExprType::Value(n.clone()),
                    _ => {
                        self.err(
                            ErrorKind::Type,
                            expr.span,
                            format!("operator `{}` cannot be applied to {}", op.symbol(), describe(&t)),
                        );
                        return self.poison(expr);
                    }
                }
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let l = self.expr(lhs);
                let r = self.expr(rhs);
                if l == ExprType::Error || r == ExprType::Error {
                    return self.poison(expr);
                }
                match self.binary(*op, &l, &r) {
                    Some(t) => ExprType::Value(t),
                    None => {
                        self.err(
                            ErrorKind::Type,
                            expr.span,
                            format!(
                                "operator `{}` cannot be applied to {} and {}",
                                op.symbol(),
                                describe(&l),
                                describe(&r)
                            ),
                        );
                        return self.poison(expr);
                    }
                }
            }
            ExprKind::Member { receiver, name } => return self.field_read(expr, receiver, name),
            ExprKind::Call { callee, args, type_args } => {
                if let Some(ta) = type_args {
                    for t in &ta.args {
                        self.check_type(t, false);
                    }
                }
                return self.call(expr, callee, args);
            }
            ExprKind::New { ty, args } => {
                self.check_type(ty, false);
                let arg_types: Vec<(ExprType, Span)> = args.iter().map(|a| (self.expr(a), a.span)).collect();
                let TypeName::Class(name) = &ty.name else {
                    self.err(ErrorKind::Type, ty.span, format!("cannot instantiate `{}`", ty.name));
                    return self.poison(expr);
                };
                let Some(info) = self.table.type_info(name).cloned() else { return self.poison(expr) };
                if info.is_static {
                    self.err(ErrorKind::Type, ty.span, format!("cannot instantiate static class `{name}`"));
                }
                let params = info.ctor_params.clone().unwrap_or_default();
                self.check_args(&params, &arg_types, expr.span, &format!("constructor of `{name}`"));
                ExprType::Value(ty.name.clone())
            }
            ExprKind::Instantiate { ty, args } => {
                self.check_type(ty, false);
                for a in args {
                    self.expr(a);
                }
                if !self.env_native(INSTANTIATE_NATIVE) {
                    self.err(
                        ErrorKind::Name,
                        expr.span,
                        format!("`New<T>.get` requires `{ENV_CLASS}.{INSTANTIATE_NATIVE}` to be declared"),
                    );
                    return self.poison(expr);
                }
                match &ty.name {
                    TypeName::Object => {}
                    TypeName::Class(name) if self.table.class_exists(name) => {}
                    other => {
                        self.err(ErrorKind::Type, ty.span, format!("cannot allocate `{other}`"));
                        return self.poison(expr);
                    }
                }
                ExprType::Value(ty.name.clone())
            }
        };
        self.record(expr, t)
    }

    fn env_native(&self, name: &str) -> bool {
        self.table.type_info(ENV_CLASS).and_then(|t| t.member(name)).is_some_and(|m| m.is_native && m.is_static)
    }

    fn binary(&self, op: BinaryOp, l: &ExprType, r: &ExprType) -> Option<TypeName> {
        use BinaryOp::*;
        let (lt, rt) = (l.type_name(), r.type_name());
        match op {
            Add | Sub | Mul | Div | Rem => match (lt?, rt?) {
                (a, b) if numeric(a) && numeric(b) => {
                    if *a == TypeName::Long || *b == TypeName::Long {
                        Some(TypeName::Long)
                    } else {
                        Some(TypeName::Int)
                    }
                }
                (TypeName::String, TypeName::String) if op == Add => Some(TypeName::String),
                _ => None,
            },
            Lt | Le | Gt | Ge => (numeric(lt?) && numeric(rt?)).then_some(TypeName::Bool),
            And | Or => (lt? == &TypeName::Bool && rt? == &TypeName::Bool).then_some(TypeName::Bool),
            Eq | Ne => {
                let ok = match (l, r) {
                    (ExprType::Null, ExprType::Null) => true,
                    (ExprType::Null, ExprType::Value(t)) | (ExprType::Value(t), ExprType::Null) => t.is_reference(),
                    (ExprType::Value(a), ExprType::Value(b)) => {
                        a == b
                            || (numeric(a) && numeric(b))
                            || (a.is_reference()
                                && b.is_reference()
                                && (self.assignable(l, b) || self.assignable(r, a)))
                    }
                    _ => false,
                };
                ok.then_some(TypeName::Bool)
            }
        }
    }

    fn ident(&mut self, expr: &Expr, name: &str) -> ExprType {
        let key = self.key(expr.id);
        if let Some(t) = self.lookup_local(name).cloned() {
            self.table.resolutions.insert(key, Resolution::Local(t.clone()));
            return self.record(expr, ExprType::Value(t));
        }
        let class_name = self.class.name.clone();
        if let Some((container, sig)) = self.table.lookup_member(&class_name, name) {
            if sig.kind == MemberKind::Field {
                let (container, sig) = (container.to_string(), sig.clone());
                if !sig.is_static && self.is_static {
                    self.err(ErrorKind::Type, expr.span, format!("instance field `{name}` used in a static context"));
                }
                let t = sig.return_type.clone();
                self.table
                    .resolutions
                    .insert(key, Resolution::Field { container, member: sig, static_receiver: false });
                return self.record(expr, ExprType::Value(t));
            }
        }
        if self.table.class_exists(name) {
            self.table.resolutions.insert(key, Resolution::Class(name.to_string()));
            return self.record(expr, ExprType::ClassRef(name.to_string()));
        }
        self.err(ErrorKind::Name, expr.span, format!("unresolved identifier `{name}`"));
        self.poison(expr)
    }

    /// Static class name of a receiver, or its instance class.
    fn receiver(&mut self, receiver: &Expr) -> Option<(String, bool)> {
        let t = self.expr(receiver);
        match t {
            ExprType::ClassRef(c) => Some((c, true)),
            ExprType::Value(TypeName::Class(c)) => Some((c, false)),
            ExprType::Error => None,
            other => {
                self.err(ErrorKind::Type, receiver.span, format!("{} has no members", describe(&other)));
                None
            }
        }
    }

    fn field_read(&mut self, expr: &Expr, receiver: &Expr, name: &str) -> ExprType {
        let Some((class, static_receiver)) = self.receiver(receiver) else { return self.poison(expr) };
        let found = self.table.lookup_member(&class, name).map(|(c, s)| (c.to_string(), s.clone()));
        match found {
            Some((container, sig)) if sig.kind == MemberKind::Field => {
                if sig.is_static != static_receiver {
                    let msg = if static_receiver {
                        format!("instance field `{class}.{name}` accessed through the type")
                    } else {
                        format!("static field `{class}.{name}` accessed through an instance")
                    };
                    self.err(ErrorKind::Type, expr.span, msg);
                }
                let t = sig.return_type.clone();
                let key = self.key(expr.id);
                self.table.resolutions.insert(key, Resolution::Field { container, member: sig, static_receiver });
                self.record(expr, ExprType::Value(t))
            }
            Some(_) => {
                self.err(ErrorKind::Type, expr.span, format!("method `{class}.{name}` used as a value"));
                self.poison(expr)
            }
            None => {
                self.err(ErrorKind::Name, expr.span, format!("`{class}` has no member `{name}`"));
                self.poison(expr)
            }
        }
    }

    fn call(&mut self, expr: &Expr, callee: &Expr, args: &[Expr]) -> ExprType {
        let key = self.key(expr.id);
        let (class, name, static_receiver, implicit) = match &callee.kind {
            ExprKind::Ident(name) => (self.class.name.clone(), name.clone(), self.is_static, true),
            ExprKind::Member { receiver, name } if name == "_" && args.is_empty() => {
                let t = self.expr(receiver);
                let ok = match &t {
                    ExprType::Null | ExprType::Error => true,
                    ExprType::Value(v) => v.is_reference(),
                    ExprType::ClassRef(_) => false,
                };
                if !ok {
                    self.err(ErrorKind::Type, receiver.span, format!("cannot isolate {}", describe(&t)));
                }
                let ret = self
                    .table
                    .type_info(ENV_CLASS)
                    .and_then(|t| t.member(ISOLATE_NATIVE))
                    .filter(|m| m.is_native && m.is_static)
                    .map(|m| m.return_type.clone());
                let Some(ret) = ret else {
                    self.err(
                        ErrorKind::Name,
                        callee.span,
                        format!("isolator requires `{ENV_CLASS}.{ISOLATE_NATIVE}` to be declared"),
                    );
                    return self.poison(expr);
                };
                self.table.resolutions.insert(key, Resolution::Isolator);
                return self.record(expr, ExprType::Value(ret));
            }
            ExprKind::Member { receiver, name } => {
                let Some((class, is_static)) = self.receiver(receiver) else {
                    args.iter().for_each(|a| {
                        self.expr(a);
                    });
                    return self.poison(expr);
                };
                (class, name.clone(), is_static, false)
            }
            _ => {
                self.err(ErrorKind::Type, callee.span, "expression is not callable");
                return self.poison(expr);
            }
        };
        let arg_types: Vec<(ExprType, Span)> = args.iter().map(|a| (self.expr(a), a.span)).collect();
        let found = self.table.lookup_member(&class, &name).map(|(c, s)| (c.to_string(), s.clone()));
        let Some((container, sig)) = found.filter(|(_, s)| s.kind == MemberKind::Method) else {
            self.err(ErrorKind::Name, callee.span, format!("unresolved method `{name}` on `{class}`"));
            return self.poison(expr);
        };
        if implicit {
            // Unqualified calls may reach statics from anywhere, instances only from instance code.
            if !sig.is_static && self.is_static {
                self.err(
                    ErrorKind::Type,
                    callee.span,
                    format!("instance method `{name}` called from a static context"),
                );
            }
        } else if sig.is_static != static_receiver {
            let msg = if static_receiver {
                format!("instance method `{class}.{name}` called through the type")
            } else {
                format!("static method `{class}.{name}` called through an instance")
            };
            self.err(ErrorKind::Type, callee.span, msg);
        }
        self.check_args(&sig.param_types, &arg_types, expr.span, &format!("`{class}.{name}`"));
        let ret = sig.return_type.clone();
        let static_receiver = !implicit && static_receiver;
        self.table.resolutions.insert(key, Resolution::Method { container, member: sig, static_receiver });
        self.record(expr, ExprType::Value(ret))
    }

    fn check_args(&mut self, params: &[TypeName], args: &[(ExprType, Span)], span: Span, what: &str) {
        if params.len() != args.len() {
            self.err(ErrorKind::Type, span, format!("{what} takes {} argument(s), {} given", params.len(), args.len()));
            return;
        }
        for (p, (a, s)) in params.iter().zip(args) {
            self.expect_assignable(a, p, *s);
        }
    }
}

fn describe(t: &ExprType) -> String {
    match t {
        ExprType::Value(t) => format!("`{t}`"),
        ExprType::Null => "`null`".to_string(),
        ExprType::ClassRef(c) => format!("type name `{c}`"),
        ExprType::Error => "an erroneous expression".to_string(),
    }
}

fn block_terminates(block: &Block) -> bool {
    block.stmts.iter().any(stmt_terminates)
}

fn stmt_terminates(stmt: &Stmt) -> bool {
    match &stmt.kind {
        StmtKind::Return(_) | StmtKind::Throw(_) => true,
        StmtKind::If { then_block, else_block: Some(e), .. } => block_terminates(then_block) && block_terminates(e),
        _ => false,
    }
}
