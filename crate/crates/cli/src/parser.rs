//! Lexer and recursive-descent parser for the session format.
//!
//! Errors carry line/column positions. The grammar is line-oriented only
//! in spirit: statements end with `;` (or a block), whitespace is free,
//! `#` starts a comment.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Arrow,
    Colon,
    Semi,
    Comma,
    Star,
    Plus,
    Minus,
    Caret,
    Slash,
    Eq,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.pos.line, self.pos.col, self.message)
    }
}

impl std::error::Error for ParseError {}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c2) = chars.peek() {
                    if c2 == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '0'..='9' => {
                let mut n = 0i64;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|x| x.checked_add(v as i64))
                            .ok_or_else(|| ParseError {
                                pos,
                                message: "integer literal overflows".into(),
                            })?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push((Tok::Int(n), pos));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), pos));
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    out.push((Tok::Arrow, pos));
                } else {
                    out.push((Tok::Minus, pos));
                }
            }
            _ => {
                let tok = match c {
                    ':' => Tok::Colon,
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    '*' => Tok::Star,
                    '+' => Tok::Plus,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    '=' => Tok::Eq,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    other => {
                        return Err(ParseError {
                            pos,
                            message: format!("unexpected character `{other}`"),
                        })
                    }
                };
                chars.next();
                col += 1;
                out.push((tok, pos));
            }
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// Noncommutative expression AST. Products preserve factor order.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(i64, i64),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModuleSpec {
    Trivial,
    CokerMatrix(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerifyDirective {
    Tmf(String),
    Normal { f: String, expect: Option<String> },
    Regular { f: String, upto: u32 },
    Central { auto: String, f: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Field(FieldDecl),
    Bound(u32),
    Param { name: String, num: i64, den: i64 },
    Gens(Vec<(String, u32)>),
    Rel(Expr),
    Elem { name: String, expr: Expr },
    Auto { name: String, images: Vec<(String, Expr)> },
    Matrix {
        name: String,
        rows: usize,
        cols: usize,
        rowdeg: Vec<i64>,
        coldeg: Vec<i64>,
        entries: Vec<Expr>,
    },
    TmfDecl { name: String, phi: String, tau: String, f: String },
    ModuleDecl { name: String, spec: ModuleSpec },
    Morphism {
        name: String,
        source: String,
        target: String,
        psi_f: String,
        psi_g: String,
    },
    Verify(VerifyDirective),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldDecl {
    Rationals,
    Prime(u64),
}

pub struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(text)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == &tok {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            other => self.err(format!("expected an identifier, found {other}")),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let neg = if self.peek() == &Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(if neg { -n } else { n })
            }
            other => self.err(format!("expected an integer, found {other}")),
        }
    }

    pub fn parse_session(&mut self) -> Result<Vec<Stmt>, ParseError> {
        let mut out = Vec::new();
        while self.peek() != &Tok::Eof {
            out.push(self.statement()?);
        }
        Ok(out)
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let kw = self.ident()?;
        match kw.as_str() {
            "field" => {
                let name = self.ident()?;
                let decl = if name == "Q" {
                    FieldDecl::Rationals
                } else if let Some(p) = name.strip_prefix('F') {
                    let p: u64 = p
                        .parse()
                        .map_err(|_| ParseError { pos: self.pos(), message: format!("bad field `{name}`") })?;
                    FieldDecl::Prime(p)
                } else {
                    return self.err(format!("unknown field `{name}` (use Q or F<p>)"));
                };
                self.expect(Tok::Semi)?;
                Ok(Stmt::Field(decl))
            }
            "bound" => {
                let what = self.ident()?;
                if what != "degree" {
                    return self.err("expected `degree` after `bound`");
                }
                let n = self.integer()?;
                if n < 1 {
                    return self.err("degree bound must be positive");
                }
                self.expect(Tok::Semi)?;
                Ok(Stmt::Bound(n as u32))
            }
            "param" => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let num = self.integer()?;
                let den = if self.peek() == &Tok::Slash {
                    self.next();
                    self.integer()?
                } else {
                    1
                };
                self.expect(Tok::Semi)?;
                Ok(Stmt::Param { name, num, den })
            }
            "gens" => {
                let mut gens = Vec::new();
                loop {
                    let name = self.ident()?;
                    self.expect(Tok::Colon)?;
                    let d = self.integer()?;
                    if d < 1 {
                        return self.err("generator degrees must be positive");
                    }
                    gens.push((name, d as u32));
                    if self.peek() == &Tok::Semi {
                        self.next();
                        break;
                    }
                }
                Ok(Stmt::Gens(gens))
            }
            "rel" => {
                let e = self.expr()?;
                self.expect(Tok::Semi)?;
                Ok(Stmt::Rel(e))
            }
            "elem" => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let e = self.expr()?;
                self.expect(Tok::Semi)?;
                Ok(Stmt::Elem { name, expr: e })
            }
            "auto" => {
                let name = self.ident()?;
                self.expect(Tok::LBrace)?;
                let mut images = Vec::new();
                while self.peek() != &Tok::RBrace {
                    let g = self.ident()?;
                    self.expect(Tok::Arrow)?;
                    let e = self.expr()?;
                    self.expect(Tok::Semi)?;
                    images.push((g, e));
                }
                self.expect(Tok::RBrace)?;
                Ok(Stmt::Auto { name, images })
            }
            "matrix" => {
                let name = self.ident()?;
                let kw = self.ident()?;
                if kw != "rows" {
                    return self.err("expected `rows`");
                }
                let rows = self.integer()? as usize;
                let kw = self.ident()?;
                if kw != "cols" {
                    return self.err("expected `cols`");
                }
                let cols = self.integer()? as usize;
                let kw = self.ident()?;
                if kw != "rowdeg" {
                    return self.err("expected `rowdeg`");
                }
                let rowdeg = self.int_list()?;
                let kw = self.ident()?;
                if kw != "coldeg" {
                    return self.err("expected `coldeg`");
                }
                let coldeg = self.int_list()?;
                if rowdeg.len() != rows || coldeg.len() != cols {
                    return self.err("degree lists must match the declared shape");
                }
                self.expect(Tok::LBrace)?;
                let mut entries = Vec::new();
                for i in 0..rows {
                    for j in 0..cols {
                        entries.push(self.expr()?);
                        if j + 1 < cols {
                            self.expect(Tok::Comma)?;
                        }
                    }
                    self.expect(Tok::Semi)?;
                    let _ = i;
                }
                self.expect(Tok::RBrace)?;
                Ok(Stmt::Matrix { name, rows, cols, rowdeg, coldeg, entries })
            }
            "tmf" => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                self.expect(Tok::LParen)?;
                let phi = self.ident()?;
                self.expect(Tok::Comma)?;
                let tau = self.ident()?;
                self.expect(Tok::RParen)?;
                let kw = self.ident()?;
                if kw != "of" {
                    return self.err("expected `of`");
                }
                let f = self.ident()?;
                self.expect(Tok::Semi)?;
                Ok(Stmt::TmfDecl { name, phi, tau, f })
            }
            "module" => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let kind = self.ident()?;
                let spec = match kind.as_str() {
                    "trivial" => ModuleSpec::Trivial,
                    "coker" => ModuleSpec::CokerMatrix(self.ident()?),
                    other => return self.err(format!("unknown module form `{other}`")),
                };
                self.expect(Tok::Semi)?;
                Ok(Stmt::ModuleDecl { name, spec })
            }
            "morphism" => {
                let name = self.ident()?;
                self.expect(Tok::Colon)?;
                let source = self.ident()?;
                self.expect(Tok::Arrow)?;
                let target = self.ident()?;
                self.expect(Tok::LBrace)?;
                let mut psi_f = None;
                let mut psi_g = None;
                while self.peek() != &Tok::RBrace {
                    let side = self.ident()?;
                    self.expect(Tok::Eq)?;
                    let m = self.ident()?;
                    self.expect(Tok::Semi)?;
                    match side.as_str() {
                        "F" => psi_f = Some(m),
                        "G" => psi_g = Some(m),
                        other => return self.err(format!("expected F or G, found `{other}`")),
                    }
                }
                self.expect(Tok::RBrace)?;
                let (Some(psi_f), Some(psi_g)) = (psi_f, psi_g) else {
                    return self.err("morphism needs both F and G components");
                };
                Ok(Stmt::Morphism { name, source, target, psi_f, psi_g })
            }
            "verify" => {
                let what = self.ident()?;
                let dir = match what.as_str() {
                    "tmf" => VerifyDirective::Tmf(self.ident()?),
                    "normal" => {
                        let f = self.ident()?;
                        let expect = if let Tok::Ident(kw) = self.peek() {
                            if kw == "expect" {
                                self.next();
                                Some(self.ident()?)
                            } else {
                                None
                            }
                        } else {
                            None
                        };
                        VerifyDirective::Normal { f, expect }
                    }
                    "regular" => {
                        let f = self.ident()?;
                        let kw = self.ident()?;
                        if kw != "upto" {
                            return self.err("expected `upto`");
                        }
                        let m = self.integer()?;
                        VerifyDirective::Regular { f, upto: m as u32 }
                    }
                    "central" => {
                        let auto = self.ident()?;
                        let f = self.ident()?;
                        VerifyDirective::Central { auto, f }
                    }
                    other => return self.err(format!("unknown verify directive `{other}`")),
                };
                self.expect(Tok::Semi)?;
                Ok(Stmt::Verify(dir))
            }
            other => self.err(format!("unknown statement `{other}`")),
        }
    }

    fn int_list(&mut self) -> Result<Vec<i64>, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        while self.peek() != &Tok::RBracket {
            out.push(self.integer()?);
            if self.peek() == &Tok::Comma {
                self.next();
            }
        }
        self.expect(Tok::RBracket)?;
        Ok(out)
    }

    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == &Tok::Star {
            self.next();
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == &Tok::Minus {
            self.next();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let mut base = self.atom()?;
        while self.peek() == &Tok::Caret {
            self.next();
            let e = self.integer()?;
            base = Expr::Pow(Box::new(base), e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                if self.peek() == &Tok::Slash {
                    self.next();
                    let d = self.integer()?;
                    Ok(Expr::Num(n, d))
                } else {
                    Ok(Expr::Num(n, 1))
                }
            }
            Tok::Ident(s) => {
                self.next();
                Ok(Expr::Ident(s))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => self.err(format!("expected a scalar, name or `(`, found {other}")),
        }
    }
}
