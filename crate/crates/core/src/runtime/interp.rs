// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashMap, HashSet};

use super::*;
use crate::fakegen::FAKE_CLASS;
use crate::semantics::{ExprType, Resolution, ENV_CLASS, INSTANTIATE_NATIVE, ISOLATE_NATIVE};

type R<T> = Result<T, ExecOutcome>;

enum Flow {
    Normal,
    Return(Value),
}

struct Obj {
    class: String,
    fields: HashMap<String, Value>,
    ctor_args: Vec<Value>,
    initialized: bool,
}

struct Frame<'p> {
    file: usize,
    this: Option<Value>,
    locals: Vec<(&'p str, Value)>,
    cov: Option<usize>,
}

pub(super) struct Machine<'r, 'p, 'o> {
    rt: &'r Runtime<'p>,
    oracle: &'o mut ChoiceOracle,
    cfg: ExecConfig,
    heap: Vec<Obj>,
    statics: HashMap<(&'p str, &'p str), Value>,
    static_ready: HashSet<&'p str>,
    cov: HashMap<usize, MethodCoverage>,
    log: Vec<SideEffect>,
    isolated: Vec<Value>,
    fake: Option<ObjId>,
    steps: u64,
    depth: usize,
}

fn fault<T>(message: impl Into<String>) -> R<T> {
    Err(ExecOutcome::RuntimeFault { message: message.into() })
}

fn default_value(t: &TypeName) -> Value {
    match t {
        TypeName::Int | TypeName::Long => Value::Int(0),
        TypeName::Bool => Value::Bool(false),
        TypeName::String => Value::Str(String::new()),
        TypeName::Void => Value::Void,
        TypeName::Object | TypeName::Class(_) => Value::Null,
    }
}

fn literal(l: &Literal) -> Value {
    match l {
        Literal::Int(v) => Value::Int(*v),
        Literal::Bool(b) => Value::Bool(*b),
        Literal::Str(s) => Value::Str(s.clone()),
        Literal::Null => Value::Null,
    }
}

fn values_equal(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => x == y,
        (Value::Bool(x), Value::Bool(y)) => x == y,
        (Value::Str(x), Value::Str(y)) => x == y,
        (Value::Null, Value::Null) => true,
        (x, y) => match (x.object(), y.object()) {
            (Some(i), Some(j)) => i == j,
            _ => false,
        },
    }
}

impl<'r, 'p, 'o> Machine<'r, 'p, 'o> {
    pub(super) fn new(rt: &'r Runtime<'p>, oracle: &'o mut ChoiceOracle, cfg: ExecConfig) -> Self {
        Machine {
            rt,
            oracle,
            cfg,
            heap: Vec::new(),
            statics: HashMap::new(),
            static_ready: HashSet::new(),
            cov: HashMap::new(),
            log: Vec::new(),
            isolated: Vec::new(),
            fake: None,
            steps: 0,
            depth: 0,
        }
    }

    pub(super) fn finish(self) -> (CoverageMap, Vec<SideEffect>, Vec<Value>, Vec<Allocation>, u64) {
        let mut map = CoverageMap::default();
        for (i, c) in self.cov {
            map.methods.insert(self.rt.methods[i].key.clone(), c);
        }
        let uninit = self
            .heap
            .into_iter()
            .enumerate()
            .filter(|(_, o)| !o.initialized)
            .map(|(id, o)| Allocation { id: id as ObjId, class: o.class, ctor_args: o.ctor_args })
            .collect();
        (map, self.log, self.isolated, uninit, self.steps)
    }

    pub(super) fn run_entry(&mut self, entry: &EntryInfo, receiver_args: &[Input], args: &[Input]) -> ExecOutcome {
        match self.entry(entry, receiver_args, args) {
            Ok(value) => ExecOutcome::Returned { value },
            Err(o) => o,
        }
    }

    fn entry(&mut self, entry: &EntryInfo, receiver_args: &[Input], args: &[Input]) -> R<Value> {
        let rt = self.rt;
        let class = rt.classes.get(entry.class.as_str()).expect("entry class exists");
        let method = class.methods[entry.method.as_str()];
        let this = if method.is_static {
            None
        } else {
            let cargs = receiver_args.iter().map(|a| self.input(a)).collect::<R<Vec<_>>>()?;
            Some(self.construct(class.decl.name.as_str(), cargs)?)
        };
        let args = args.iter().map(|a| self.input(a)).collect::<R<Vec<_>>>()?;
        if args.len() != method.params.len() {
            return fault(format!("`{}` takes {} argument(s), {} given", entry.key, method.params.len(), args.len()));
        }
        self.invoke(class.decl.name.as_str(), method, this, args)
    }

    fn input(&mut self, i: &Input) -> R<Value> {
        Ok(match i {
            Input::Int(v) => Value::Int(*v),
            Input::Bool(b) => Value::Bool(*b),
            Input::Str(s) => Value::Str(s.clone()),
            Input::Null => Value::Null,
            Input::Uninit(c) => {
                let Some(c) = self.rt.classes.get(c.as_str()) else {
                    return fault(format!("unknown class `{c}`"));
                };
                self.alloc(c.decl.name.as_str(), Vec::new(), false)
            }
        })
    }

    fn tick(&mut self) -> R<()> {
        self.steps += 1;
        if self.steps > self.cfg.budget {
            return Err(ExecOutcome::StepBudgetExceeded);
        }
        Ok(())
    }

    fn class(&self, name: &str) -> R<&'r ClassRt<'p>> {
        match self.rt.classes.get(name) {
            Some(c) => Ok(c),
            None => fault(format!("unknown class `{name}`")),
        }
    }

    /// Instance field declarations of `class` and its supertypes, root first.
    fn field_chain(&self, class: &str) -> Vec<(&'p str, &'p FieldDecl, usize)> {
        let mut chain = Vec::new();
        let mut cur = self.rt.classes.get(class);
        let mut seen = HashSet::new();
        while let Some(c) = cur {
            if !seen.insert(c.decl.name.as_str()) {
                break;
            }
            chain.push(c);
            cur = c.supertype.and_then(|s| self.rt.classes.get(s));
        }
        chain
            .into_iter()
            .rev()
            .flat_map(|c| c.decl.fields().filter(|f| !f.is_static).map(move |f| (c.decl.name.as_str(), f, c.file)))
            .collect()
    }

    fn alloc(&mut self, class: &str, ctor_args: Vec<Value>, initialized: bool) -> Value {
        let fields =
            self.field_chain(class).into_iter().map(|(_, f, _)| (f.name.clone(), default_value(&f.ty.name))).collect();
        let id = self.heap.len() as ObjId;
        self.heap.push(Obj { class: class.to_string(), fields, ctor_args, initialized });
        if initialized {
            Value::Ref(id)
        } else {
            Value::Uninit(id)
        }
    }

    fn ensure_static_init(&mut self, class: &'p str) -> R<()> {
        if !self.static_ready.insert(class) {
            return Ok(());
        }
        let c = self.class(class)?;
        for f in c.decl.fields().filter(|f| f.is_static) {
            self.statics.insert((class, f.name.as_str()), default_value(&f.ty.name));
        }
        for f in c.decl.fields().filter(|f| f.is_static) {
            if let Some(init) = &f.init {
                let mut frame = Frame { file: c.file, this: None, locals: Vec::new(), cov: None };
                let v = self.expr(&mut frame, init)?;
                self.statics.insert((class, f.name.as_str()), v);
            }
        }
        Ok(())
    }

    fn construct(&mut self, class: &'p str, args: Vec<Value>) -> R<Value> {
        self.ensure_static_init(class)?;
        let this = self.alloc(class, args.clone(), true);
        let id = this.object().expect("fresh object");
        for (_, f, file) in self.field_chain(class) {
            if let Some(init) = &f.init {
                let mut frame = Frame { file, this: Some(this.clone()), locals: Vec::new(), cov: None };
                let v = self.expr(&mut frame, init)?;
                self.heap[id as usize].fields.insert(f.name.clone(), v);
            }
        }
        // Parameterless constructors of supertypes run root first.
        let mut chain = Vec::new();
        let mut cur = self.class(class)?.supertype;
        while let Some(s) = cur {
            let Some(c) = self.rt.classes.get(s) else { break };
            if chain.iter().any(|x: &&ClassRt| x.decl.name == c.decl.name) {
                break;
            }
            chain.push(c);
            cur = c.supertype;
        }
        for c in chain.into_iter().rev() {
            if let Some(ctor) = c.decl.ctor().filter(|ct| ct.params.is_empty()) {
                self.run_ctor(c, ctor, this.clone(), Vec::new())?;
            }
        }
        let c = self.class(class)?;
        if let Some(ctor) = c.decl.ctor() {
            self.run_ctor(c, ctor, this.clone(), args)?;
        }
        Ok(this)
    }

    fn run_ctor(&mut self, c: &ClassRt<'p>, ctor: &'p CtorDecl, this: Value, args: Vec<Value>) -> R<()> {
        let params: Vec<&'p str> = ctor.params.iter().map(|p| p.name.as_str()).collect();
        self.run_body(c.file, ctor.id, &ctor.body, &params, Some(this), args).map(|_| ())
    }

    fn run_body(
        &mut self,
        file: usize,
        decl_id: NodeId,
        body: &'p Block,
        params: &[&'p str],
        this: Option<Value>,
        args: Vec<Value>,
    ) -> R<Value> {
        self.tick()?;
        if self.depth >= self.cfg.max_depth {
            return fault("call depth limit exceeded");
        }
        let cov = self.rt.method_index.get(&(file, decl_id)).copied();
        if let Some(i) = cov {
            let idx = &self.rt.methods[i];
            self.cov.entry(i).or_insert_with(|| MethodCoverage::empty(idx.statements, idx.ifs)).entered = true;
        }
        let locals = params.iter().copied().zip(args).collect();
        let mut frame = Frame { file, this, locals, cov };
        self.depth += 1;
        let flow = self.block(&mut frame, body);
        self.depth -= 1;
        match flow? {
            Flow::Return(v) => Ok(v),
            Flow::Normal => Ok(Value::Void),
        }
    }

    fn invoke(&mut self, class: &'p str, m: &'p MethodDecl, this: Option<Value>, args: Vec<Value>) -> R<Value> {
        if m.is_native {
            self.tick()?;
            return self.native(class, m, args);
        }
        if m.is_static {
            self.ensure_static_init(class)?;
        }
        let c = self.class(class)?;
        let params: Vec<&'p str> = m.params.iter().map(|p| p.name.as_str()).collect();
        let body = m.body.as_ref().expect("non-native methods have bodies");
        self.run_body(c.file, m.id, body, &params, this, args)
    }

    fn native(&mut self, class: &str, m: &MethodDecl, args: Vec<Value>) -> R<Value> {
        if let Some(primitive) = EnvPrimitive::from_native(class, &m.name) {
            self.log.push(SideEffect { primitive, args });
            return simulate_environment(primitive, self.cfg.env);
        }
        if class == ENV_CLASS {
            match m.name.as_str() {
                ISOLATE_NATIVE => return Ok(self.isolate(args.into_iter().next().unwrap_or(Value::Null))),
                INSTANTIATE_NATIVE => {
                    let Some(Value::Str(name)) = args.first() else { return fault("instantiate expects a type name") };
                    let name = name.clone();
                    self.class(&name)?;
                    return Ok(self.alloc(&name, Vec::new(), false));
                }
                _ if crate::fakegen::chooser(&m.ret.name) == Some(m.name.as_str()) => {
                    let Some(Value::Str(label)) = args.first() else { return fault("choice label must be a string") };
                    return self.choose(label.clone(), &m.ret.name);
                }
                _ => {}
            }
        }
        fault(format!("native `{class}.{}` has no implementation", m.name))
    }

    fn choose(&mut self, label: String, ty: &TypeName) -> R<Value> {
        let Some(v) = self.oracle.next(&label) else {
            return Err(ExecOutcome::ChoiceExhausted { label, value_type: ty.clone() });
        };
        match (ty, v) {
            (TypeName::Int, ChoiceValue::Int(i)) => Ok(Value::Int(i as i32 as i64)),
            (TypeName::Long, ChoiceValue::Int(i)) => Ok(Value::Int(i)),
            (TypeName::Bool, ChoiceValue::Bool(b)) => Ok(Value::Bool(b)),
            (TypeName::String, ChoiceValue::Str(s)) => Ok(Value::Str(s)),
            (_, v) => fault(format!("scripted value {v:?} for `{label}` does not fit `{ty}`")),
        }
    }

    fn isolate(&mut self, receiver: Value) -> Value {
        self.isolated.push(receiver);
        let id = match self.fake {
            Some(id) => id,
            None => {
                let v = self.alloc(FAKE_CLASS, Vec::new(), true);
                let id = v.object().expect("fresh object");
                self.fake = Some(id);
                id
            }
        };
        Value::Ref(id)
    }

    fn hit(&mut self, frame: &Frame, id: NodeId) {
        if let Some(i) = frame.cov {
            if let Some(c) = self.cov.get_mut(&i) {
                c.statements_hit.insert(id);
            }
        }
    }

    fn edge(&mut self, frame: &Frame, id: NodeId, taken: bool) {
        if let Some(i) = frame.cov {
            if let Some(c) = self.cov.get_mut(&i) {
                c.edges_hit.insert((id, taken));
            }
        }
    }

    fn block(&mut self, frame: &mut Frame<'p>, b: &'p Block) -> R<Flow> {
        let mark = frame.locals.len();
        let mut flow = Ok(Flow::Normal);
        for s in &b.stmts {
            match self.stmt(frame, s) {
                Ok(Flow::Normal) => {}
                other => {
                    flow = other;
                    break;
                }
            }
        }
        frame.locals.truncate(mark);
        flow
    }

    fn stmt(&mut self, frame: &mut Frame<'p>, s: &'p Stmt) -> R<Flow> {
        self.hit(frame, s.id);
        self.tick()?;
        match &s.kind {
            StmtKind::If { cond, then_block, else_block } => {
                let c = self.bool(frame, cond)?;
                self.edge(frame, s.id, c);
                if c {
                    self.block(frame, then_block)
                } else if let Some(e) = else_block {
                    self.block(frame, e)
                } else {
                    Ok(Flow::Normal)
                }
            }
            StmtKind::Return(e) => {
                let v = match e {
                    Some(e) => self.expr(frame, e)?,
                    None => Value::Void,
                };
                Ok(Flow::Return(v))
            }
            StmtKind::Throw(e) => {
                let v = self.expr(frame, e)?;
                Err(ExecOutcome::Threw { message: v.to_string() })
            }
            StmtKind::Local { ty, name, init } => {
                let v = match init {
                    Some(e) => self.expr(frame, e)?,
                    None => default_value(&ty.name),
                };
                frame.locals.push((name.as_str(), v));
                Ok(Flow::Normal)
            }
            StmtKind::Assign { target, value } => {
                self.assign(frame, target, value)?;
                Ok(Flow::Normal)
            }
            StmtKind::Expr(e) => {
                self.expr(frame, e)?;
                Ok(Flow::Normal)
            }
        }
    }

    fn resolution(&self, frame: &Frame, e: &Expr) -> Option<&'p Resolution> {
        self.rt.table.resolution(frame.file, e.id)
    }

    fn is_class_ref(&self, frame: &Frame, e: &Expr) -> bool {
        matches!(self.resolution(frame, e), Some(Resolution::Class(_)))
    }

    fn assign(&mut self, frame: &mut Frame<'p>, target: &'p Expr, value: &'p Expr) -> R<()> {
        match (&target.kind, self.resolution(frame, target)) {
            (ExprKind::Ident(name), Some(Resolution::Local(_))) => {
                let v = self.expr(frame, value)?;
                match frame.locals.iter_mut().rev().find(|(n, _)| n == name) {
                    Some(slot) => slot.1 = v,
                    None => return fault(format!("unbound local `{name}`")),
                }
                Ok(())
            }
            (_, Some(Resolution::Field { container, member, .. })) if member.is_static => {
                if let ExprKind::Member { receiver, .. } = &target.kind {
                    if !self.is_class_ref(frame, receiver) {
                        self.expr(frame, receiver)?;
                    }
                }
                let v = self.expr(frame, value)?;
                let c = self.class(container)?;
                let key = (c.decl.name.as_str(), self.static_field_name(c, &member.name)?);
                self.ensure_static_init(key.0)?;
                self.statics.insert(key, v);
                Ok(())
            }
            (kind, Some(Resolution::Field { member, .. })) => {
                let obj = match kind {
                    ExprKind::Member { receiver, .. } => self.expr(frame, receiver)?,
                    _ => frame.this.clone().unwrap_or(Value::Null),
                };
                let v = self.expr(frame, value)?;
                let Some(id) = obj.object() else {
                    return fault(format!("null dereference writing field `{}`", member.name));
                };
                self.heap[id as usize].fields.insert(member.name.clone(), v);
                Ok(())
            }
            _ => fault("invalid assignment target"),
        }
    }

    fn static_field_name(&self, c: &ClassRt<'p>, name: &str) -> R<&'p str> {
        match c.decl.fields().find(|f| f.is_static && f.name == name) {
            Some(f) => Ok(f.name.as_str()),
            None => fault(format!("unknown static field `{}.{name}`", c.decl.name)),
        }
    }

    fn get_static(&mut self, container: &str, name: &str) -> R<Value> {
        let c = self.class(container)?;
        let key = (c.decl.name.as_str(), self.static_field_name(c, name)?);
        self.ensure_static_init(key.0)?;
        Ok(self.statics.get(&key).cloned().unwrap_or(Value::Null))
    }

    fn get_field(&self, obj: &Value, name: &str) -> R<Value> {
        let Some(id) = obj.object() else {
            return fault(format!("null dereference reading field `{name}`"));
        };
        match self.heap[id as usize].fields.get(name) {
            Some(v) => Ok(v.clone()),
            None => fault(format!("`{}` has no field `{name}`", self.heap[id as usize].class)),
        }
    }

    fn bool(&mut self, frame: &mut Frame<'p>, e: &'p Expr) -> R<bool> {
        match self.expr(frame, e)? {
            Value::Bool(b) => Ok(b),
            v => fault(format!("expected a bool, found {v}")),
        }
    }

    fn int(&mut self, frame: &mut Frame<'p>, e: &'p Expr) -> R<i64> {
        match self.expr(frame, e)? {
            Value::Int(i) => Ok(i),
            v @ Value::Uninit(_) => fault(format!("arithmetic on uninitialized instance {v}")),
            v => fault(format!("expected an integer, found {v}")),
        }
    }

    /// Truncates to 32 bits when the static type of `e` is `int`.
    fn narrow(&self, frame: &Frame, e: &Expr, v: i64) -> Value {
        match self.rt.table.expr_type(frame.file, e.id) {
            Some(ExprType::Value(TypeName::Int)) => Value::Int(v as i32 as i64),
            _ => Value::Int(v),
        }
    }

    fn expr(&mut self, frame: &mut Frame<'p>, e: &'p Expr) -> R<Value> {
        match &e.kind {
            ExprKind::Literal(l) => Ok(literal(l)),
            ExprKind::This => Ok(frame.this.clone().unwrap_or(Value::Null)),
            ExprKind::Ident(name) => match self.resolution(frame, e) {
                Some(Resolution::Local(_)) => match frame.locals.iter().rev().find(|(n, _)| n == name) {
                    Some((_, v)) => Ok(v.clone()),
                    None => fault(format!("unbound local `{name}`")),
                },
                Some(Resolution::Field { container, member, .. }) if member.is_static => {
                    self.get_static(container, &member.name)
                }
                Some(Resolution::Field { member, .. }) => {
                    let this = frame.this.clone().unwrap_or(Value::Null);
                    self.get_field(&this, &member.name)
                }
                _ => fault(format!("`{name}` is not a value")),
            },
            ExprKind::Unary { op, operand } => match op {
                UnaryOp::Not => Ok(Value::Bool(!self.bool(frame, operand)?)),
                UnaryOp::Neg => {
                    let v = self.int(frame, operand)?;
                    Ok(self.narrow(frame, e, v.wrapping_neg()))
                }
            },
            ExprKind::Binary { op, lhs, rhs } => self.binary(frame, e, *op, lhs, rhs),
            ExprKind::Member { receiver, name } => match self.resolution(frame, e) {
                Some(Resolution::Field { container, member, .. }) if member.is_static => {
                    if !self.is_class_ref(frame, receiver) {
                        self.expr(frame, receiver)?;
                    }
                    self.get_static(container, &member.name)
                }
                _ => {
                    let obj = self.expr(frame, receiver)?;
                    self.get_field(&obj, name)
                }
            },
            ExprKind::Call { callee, args, .. } => self.call(frame, e, callee, args),
            ExprKind::New { ty, args } => {
                let args = self.args(frame, args)?;
                let TypeName::Class(name) = &ty.name else { return fault(format!("cannot instantiate `{}`", ty.name)) };
                let class = self.class(name)?.decl.name.as_str();
                self.construct(class, args)
            }
            ExprKind::Instantiate { ty, args } => {
                let args = self.args(frame, args)?;
                let class = match &ty.name {
                    TypeName::Class(name) => self.class(name)?.decl.name.as_str(),
                    _ => "object",
                };
                Ok(self.alloc(class, args, false))
            }
        }
    }

    fn args(&mut self, frame: &mut Frame<'p>, args: &'p [Expr]) -> R<Vec<Value>> {
        args.iter().map(|a| self.expr(frame, a)).collect()
    }

    fn binary(&mut self, frame: &mut Frame<'p>, e: &'p Expr, op: BinaryOp, lhs: &'p Expr, rhs: &'p Expr) -> R<Value> {
        use BinaryOp::*;
        match op {
            And => return Ok(Value::Bool(self.bool(frame, lhs)? && self.bool(frame, rhs)?)),
            Or => return Ok(Value::Bool(self.bool(frame, lhs)? || self.bool(frame, rhs)?)),
            _ => {}
        }
        let l = self.expr(frame, lhs)?;
        let r = self.expr(frame, rhs)?;
        match op {
            Eq => return Ok(Value::Bool(values_equal(&l, &r))),
            Ne => return Ok(Value::Bool(!values_equal(&l, &r))),
            Add if matches!(l, Value::Str(_)) || matches!(r, Value::Str(_)) => {
                return Ok(Value::Str(format!("{l}{r}")));
            }
            _ => {}
        }
        let (a, b) = match (&l, &r) {
            (Value::Int(a), Value::Int(b)) => (*a, *b),
            _ => return fault(format!("operator `{}` cannot be applied to {l} and {r}", op.symbol())),
        };
        let v = match op {
            Add => a.wrapping_add(b),
            Sub => a.wrapping_sub(b),
            Mul => a.wrapping_mul(b),
            Div | Rem if b == 0 => return fault("division by zero"),
            Div => a.wrapping_div(b),
            Rem => a.wrapping_rem(b),
            Lt => return Ok(Value::Bool(a < b)),
            Le => return Ok(Value::Bool(a <= b)),
            Gt => return Ok(Value::Bool(a > b)),
            Ge => return Ok(Value::Bool(a >= b)),
            Eq | Ne | And | Or => unreachable!("handled above"),
        };
        Ok(self.narrow(frame, e, v))
    }

    fn call(&mut self, frame: &mut Frame<'p>, e: &'p Expr, callee: &'p Expr, args: &'p [Expr]) -> R<Value> {
        let res = self.resolution(frame, e);
        if let Some(Resolution::Isolator) = res {
            let ExprKind::Member { receiver, .. } = &callee.kind else { return fault("malformed isolator call") };
            let recv = self.expr(frame, receiver)?;
            return Ok(self.isolate(recv));
        }
        let Some(Resolution::Method { container, member, .. }) = res else {
            return fault("unresolved call");
        };
        if member.is_static {
            if let ExprKind::Member { receiver, .. } = &callee.kind {
                if !self.is_class_ref(frame, receiver) {
                    self.expr(frame, receiver)?;
                }
            }
            let args = self.args(frame, args)?;
            let (class, m) = self.find_method(container, &member.name)?;
            return self.invoke(class, m, None, args);
        }
        let recv = match &callee.kind {
            ExprKind::Member { receiver, .. } => self.expr(frame, receiver)?,
            _ => frame.this.clone().unwrap_or(Value::Null),
        };
        let args = self.args(frame, args)?;
        let id = match recv {
            Value::Ref(id) => id,
            Value::Uninit(id) => {
                return fault(format!(
                    "method `{}` dispatched on uninitialized instance of `{}`",
                    member.name, self.heap[id as usize].class
                ))
            }
            Value::Null => return fault(format!("null dereference calling `{}`", member.name)),
            v => return fault(format!("cannot call `{}` on {v}", member.name)),
        };
        let runtime_class = self.heap[id as usize].class.clone();
        let (class, m) = self.find_method(&runtime_class, &member.name)?;
        self.invoke(class, m, Some(Value::Ref(id)), args)
    }

    /// Looks `name` up on `class` and its supertypes.
    fn find_method(&self, class: &str, name: &str) -> R<(&'p str, &'p MethodDecl)> {
        let mut cur = self.rt.classes.get(class);
        let mut hops = 0;
        while let Some(c) = cur {
            if let Some(m) = c.methods.get(name) {
                return Ok((c.decl.name.as_str(), m));
            }
            hops += 1;
            if hops > self.rt.classes.len() {
                break;
            }
            cur = c.supertype.and_then(|s| self.rt.classes.get(s));
        }
        fault(format!("no method `{name}` on `{class}`"))
    }
}
