// SPDX-License-Identifier: Apache-2.0

use super::ast::Span;
use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    // keywords
    Class,
    Extends,
    Static,
    Native,
    If,
    Else,
    Return,
    Throw,
    New,
    True,
    False,
    Null,
    This,
    KwInt,
    KwLong,
    KwBool,
    KwString,
    KwVoid,
    KwObject,
    // punctuation
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Comma,
    Dot,
    Lt,
    Gt,
    Le,
    Ge,
    EqEq,
    Ne,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Bang,
    AndAnd,
    OrOr,
    Eof,
}

impl Tok {
    /// How the token is spelled in source, for diagnostics.
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(i) => format!("integer `{i}`"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::Eof => "end of file".to_string(),
            other => format!("`{}`", other.spelling()),
        }
    }

    pub fn spelling(&self) -> &'static str {
        match self {
            Tok::Class => "class",
            Tok::Extends => "extends",
            Tok::Static => "static",
            Tok::Native => "native",
            Tok::If => "if",
            Tok::Else => "else",
            Tok::Return => "return",
            Tok::Throw => "throw",
            Tok::New => "new",
            Tok::True => "true",
            Tok::False => "false",
            Tok::Null => "null",
            Tok::This => "this",
            Tok::KwInt => "int",
            Tok::KwLong => "long",
            Tok::KwBool => "bool",
            Tok::KwString => "string",
            Tok::KwVoid => "void",
            Tok::KwObject => "object",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Le => "<=",
            Tok::Ge => ">=",
            Tok::EqEq => "==",
            Tok::Ne => "!=",
            Tok::Assign => "=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Percent => "%",
            Tok::Bang => "!",
            Tok::AndAnd => "&&",
            Tok::OrOr => "||",
            Tok::Ident(_) => "identifier",
            Tok::Int(_) => "integer",
            Tok::Str(_) => "string",
            Tok::Eof => "<eof>",
        }
    }
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "class" => Tok::Class,
        "extends" => Tok::Extends,
        "static" => Tok::Static,
        "native" => Tok::Native,
        "if" => Tok::If,
        "else" => Tok::Else,
        "return" => Tok::Return,
        "throw" => Tok::Throw,
        "new" => Tok::New,
        "true" => Tok::True,
        "false" => Tok::False,
        "null" => Tok::Null,
        "this" => Tok::This,
        "int" => Tok::KwInt,
        "long" => Tok::KwLong,
        "bool" => Tok::KwBool,
        "string" => Tok::KwString,
        "void" => Tok::KwVoid,
        "object" => Tok::KwObject,
        _ => return None,
    })
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span_from(&self, start: usize, line: u32, col: u32) -> Span {
        Span { offset: start as u32, len: (self.pos - start) as u32, line, col }
    }
}

pub fn tokenize(path: &str, src: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut cur = Cursor { src, pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        skip_trivia(&mut cur, path)?;
        let (start, line, col) = (cur.pos, cur.line, cur.col);
        let Some(c) = cur.bump() else {
            out.push(Token { tok: Tok::Eof, span: cur.span_from(start, line, col) });
            return Ok(out);
        };
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '%' => Tok::Percent,
            '<' | '>' | '=' | '!' => {
                let eq = cur.peek() == Some('=');
                if eq {
                    cur.bump();
                }
                match (c, eq) {
                    ('<', false) => Tok::Lt,
                    ('<', true) => Tok::Le,
                    ('>', false) => Tok::Gt,
                    ('>', true) => Tok::Ge,
                    ('=', false) => Tok::Assign,
                    ('=', true) => Tok::EqEq,
                    ('!', false) => Tok::Bang,
                    _ => Tok::Ne,
                }
            }
            '&' | '|' => {
                if cur.peek() != Some(c) {
                    return Err(SyntaxError::new(
                        path,
                        line,
                        col,
                        format!("unexpected character `{c}`"),
                        vec![format!("`{c}{c}`")],
                    ));
                }
                cur.bump();
                if c == '&' {
                    Tok::AndAnd
                } else {
                    Tok::OrOr
                }
            }
            '"' => lex_string(&mut cur, path, line, col)?,
            c if c.is_ascii_digit() => {
                while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                    cur.bump();
                }
                let text = &src[start..cur.pos];
                let value = text.parse::<i64>().map_err(|_| {
                    SyntaxError::new(path, line, col, format!("integer literal `{text}` out of range"), vec![])
                })?;
                Tok::Int(value)
            }
            c if c.is_alphabetic() || c == '_' => {
                while cur.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    cur.bump();
                }
                let word = &src[start..cur.pos];
                keyword(word).unwrap_or_else(|| Tok::Ident(word.to_string()))
            }
            other => return Err(SyntaxError::new(path, line, col, format!("unexpected character `{other}`"), vec![])),
        };
        out.push(Token { tok, span: cur.span_from(start, line, col) });
    }
}

fn skip_trivia(cur: &mut Cursor<'_>, path: &str) -> Result<(), SyntaxError> {
    loop {
        match (cur.peek(), cur.peek2()) {
            (Some(c), _) if c.is_whitespace() => {
                cur.bump();
            }
            (Some('/'), Some('/')) => {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            }
            (Some('/'), Some('*')) => {
                let (line, col) = (cur.line, cur.col);
                cur.bump();
                cur.bump();
                loop {
                    match cur.bump() {
                        Some('*') if cur.peek() == Some('/') => {
                            cur.bump();
                            break;
                        }
                        Some(_) => {}
                        None => {
                            return Err(SyntaxError::new(
                                path,
                                line,
                                col,
                                "unterminated block comment".to_string(),
                                vec!["`*/`".to_string()],
                            ))
                        }
                    }
                }
            }
            _ => return Ok(()),
        }
    }
}

fn lex_string(cur: &mut Cursor<'_>, path: &str, line: u32, col: u32) -> Result<Tok, SyntaxError> {
    let mut value = String::new();
    loop {
        match cur.bump() {
            Some('"') => return Ok(Tok::Str(value)),
            Some('\\') => {
                let escaped = match cur.bump() {
                    Some('n') => '\n',
                    Some('t') => '\t',
                    Some('"') => '"',
                    Some('\\') => '\\',
                    other => {
                        return Err(SyntaxError::new(
                            path,
                            cur.line,
                            cur.col,
                            format!("invalid escape `\\{}`", other.map(String::from).unwrap_or_default()),
                            vec![],
                        ))
                    }
                };
                value.push(escaped);
            }
            Some('\n') | None => {
                return Err(SyntaxError::new(
                    path,
                    line,
                    col,
                    "unterminated string literal".to_string(),
                    vec!["`\"`".to_string()],
                ))
            }
            Some(c) => value.push(c),
        }
    }
}
