// SPDX-License-Identifier: Apache-2.0

//! Lexing, parsing and printing of `.ul` subject-language sources.

pub mod ast;
mod lexer;
mod parser;
mod printer;
pub mod visit;

use std::fmt;

pub use ast::{SourceFile, SyntaxTree};
pub use parser::parse;
pub use printer::{pretty_print, print_expr};

/// Path under which the built-in [`PRELUDE`] is registered.
pub const PRELUDE_PATH: &str = "<prelude>/Sys.ul";

/// Simulated environment primitives available to every program.
pub const PRELUDE: &str = "\
static class Sys {
    static native int dbQuery(string query);
    static native bool netSend(string message);
    static native string fsRead(string path);
}
";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub path: String,
    pub line: u32,
    pub col: u32,
    pub message: String,
    pub expected: Vec<String>,
}

impl SyntaxError {
    pub(crate) fn new(path: &str, line: u32, col: u32, message: String, expected: Vec<String>) -> Self {
        Self { path: path.to_string(), line, col, message, expected }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.path, self.line, self.col, self.message)
    }
}

impl std::error::Error for SyntaxError {}

/// A set of parsed files. The file index is the position in `trees`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Program {
    pub trees: Vec<SyntaxTree>,
}

impl Program {
    pub fn parse(files: &[SourceFile]) -> Result<Program, SyntaxError> {
        let trees = files.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        Ok(Program { trees })
    }

    /// Parses `files` and appends the built-in prelude.
    pub fn parse_with_prelude(files: &[SourceFile]) -> Result<Program, SyntaxError> {
        let mut program = Program::parse(files)?;
        program.trees.push(prelude_tree());
        Ok(program)
    }

    pub fn find_class(&self, name: &str) -> Option<(usize, &ast::ClassDecl)> {
        self.trees.iter().enumerate().find_map(|(i, t)| t.class(name).map(|c| (i, c)))
    }

    pub fn tree(&self, path: &str) -> Option<&SyntaxTree> {
        self.trees.iter().find(|t| t.path == path)
    }

    /// Replaces the tree with the same path, or appends it.
    pub fn replace_or_add(&mut self, tree: SyntaxTree) {
        match self.trees.iter_mut().find(|t| t.path == tree.path) {
            Some(slot) => *slot = tree,
            None => self.trees.push(tree),
        }
    }
}

pub fn prelude_tree() -> SyntaxTree {
    parse(&SourceFile::new(PRELUDE_PATH, PRELUDE)).expect("prelude parses")
}

#[cfg(test)]
mod tests {
    use super::visit::{walk_tree, NodeKind, Visitor};
    use super::*;
    use ast::{NodeId, Span};

    #[test]
    fn prelude_parses() {
        let tree = prelude_tree();
        assert_eq!(tree.classes[0].name, "Sys");
        assert_eq!(tree.classes[0].methods().count(), 3);
    }

    struct Checker {
        stack: Vec<Span>,
        ids: Vec<NodeId>,
        violations: usize,
    }

    impl Visitor for Checker {
        fn enter(&mut self, _: NodeKind, id: NodeId, span: Span) {
            if let Some(parent) = self.stack.last() {
                if !parent.contains(&span) {
                    self.violations += 1;
                }
            }
            self.stack.push(span);
            self.ids.push(id);
        }
        fn leave(&mut self, _: NodeKind) {
            self.stack.pop();
        }
    }

    #[test]
    fn spans_nest_and_ids_are_dense() {
        let src = "class A extends B { int x = 1; A(int y) { x = y; } static bool f<T>(A a, long n) {\n if (n <= 0) throw \"bad\"; int v = Q.R<int>(\"k\", a).s; return a.g(-n, new C(1)) && !(v == 2); } }";
        let tree = parse(&SourceFile::new("t.ul", src)).unwrap();
        let mut c = Checker { stack: vec![], ids: vec![], violations: 0 };
        walk_tree(&tree, &mut c);
        assert_eq!(c.violations, 0);
        let mut ids = c.ids.clone();
        ids.sort();
        assert_eq!(ids, (0..tree.node_count() as NodeId).collect::<Vec<_>>());
        // pre-order numbering
        assert_eq!(c.ids, ids);
    }
}
