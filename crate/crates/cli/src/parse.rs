//! The scheme-description language.
//!
//! ```text
//! decl    := "field" NAME "=" ("QQ" | "GF(" INT ")")
//!          | "algebra" NAME "=" NAME "[t]/(" POLY ")"
//!          | "scheme" NAME "over" NAME "=" "[" VARS "]" ["/" "(" POLYLIST ")"]
//!          | "morphism" NAME ":" NAME "->" NAME "=" "(" POLYLIST ")"
//!          | "bundle" NAME "on" NAME "=" "[" ROW ("," ROW)* "]" "rank" INT
//! command := "restrict" NAME
//!          | "points" NAME "over" ALG
//!          | "verify" TARGET ARGS ["expect" STATUS]
//! ALG     := "GF(" INT ")" ["[eps]"]
//! STATUS  := "verified" | "refuted" | "skipped" | "budget-exceeded"
//! ```
//!
//! Statements end at `;` or a newline outside brackets; `#` starts a comment.
//! A scheme declared over another scheme is presented relative to it: its
//! variables are appended to the base variables.

use std::sync::Arc;

use thiserror::Error;
use weilkit::algebra::{BaseField, EtaleAlgebra};
use weilkit::bundle::make_bundle;
use weilkit::points::TestAlgebra;
use weilkit::poly::{is_identifier, parse_modulus, parse_poly, ParseError, Poly, PolyRing};
use weilkit::scheme::{extended_ring, relative_scheme, AffineScheme, Morphism};
use weilkit::Config;

use crate::session::{Action, Command, Decl, Declaration, Location, Session, Status, Target, TARGETS};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{location}: syntax error: {message} (expected {})", expected.join(" | "))]
    Syntax {
        location: Location,
        message: String,
        expected: Vec<String>,
    },
    #[error("{location}: name error: {message}")]
    Name { location: Location, message: String },
    #[error("{location}: type mismatch: {message}")]
    TypeMismatch { location: Location, message: String },
    /// A declaration could not be validated within the configured limits.
    #[error("{location}: budget exceeded: {message}")]
    Budget { location: Location, message: String },
}

impl DslError {
    pub fn location(&self) -> Location {
        match self {
            DslError::Syntax { location, .. }
            | DslError::Name { location, .. }
            | DslError::TypeMismatch { location, .. }
            | DslError::Budget { location, .. } => *location,
        }
    }
}

type PResult<T> = Result<T, DslError>;

pub fn parse_session(text: &str) -> PResult<Session> {
    parse_session_with(text, Config::default())
}

/// Parses with the given limits, which also bound the checks made while
/// declaring bundles and morphisms.
pub fn parse_session_with(text: &str, config: Config) -> PResult<Session> {
    let mut p = Parser::new(text, config);
    p.statements()?;
    Ok(p.session)
}

const STATEMENTS: &[&str] = &[
    "field", "algebra", "scheme", "morphism", "bundle", "restrict", "points", "verify",
];

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    line_starts: Vec<usize>,
    /// Start of the statement being parsed.
    stmt: usize,
    session: Session,
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, config: Config) -> Self {
        let line_starts = std::iter::once(0)
            .chain(text.match_indices('\n').map(|(i, _)| i + 1))
            .collect();
        Parser {
            text,
            pos: 0,
            line_starts,
            stmt: 0,
            session: Session::new(config),
        }
    }

    fn location(&self, offset: usize) -> Location {
        let line = self.line_starts.partition_point(|&s| s <= offset);
        let start = self.line_starts[line - 1];
        Location {
            line,
            column: self.text[start..offset].chars().count() + 1,
        }
    }

    fn syntax<T>(&self, at: usize, message: impl Into<String>, expected: &[&str]) -> PResult<T> {
        Err(DslError::Syntax {
            location: self.location(at),
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn mismatch<T>(&self, at: usize, message: impl Into<String>) -> PResult<T> {
        Err(DslError::TypeMismatch {
            location: self.location(at),
            message: message.into(),
        })
    }

    fn rejected<T>(&self, at: usize, e: weilkit::Error) -> PResult<T> {
        if e.is_budget() {
            Err(DslError::Budget {
                location: self.location(at),
                message: e.to_string(),
            })
        } else {
            self.mismatch(at, e.to_string())
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn found(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some('\n') => "end of line".into(),
            Some(c) => format!("'{c}'"),
        }
    }

    /// Skips spaces and comments, and newlines too when `lines` is set.
    fn skip(&mut self, lines: bool) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.pos += self.peek().unwrap().len_utf8();
                }
            } else if c.is_whitespace() && (lines || c != '\n') {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip(false);
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> PResult<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.syntax(self.pos, format!("unexpected {}", self.found()), &[token])
        }
    }

    /// Like [`Parser::expect`] but inside brackets, where newlines are blanks.
    fn expect_in(&mut self, token: &str) -> PResult<()> {
        self.skip(true);
        self.expect(token)
    }

    fn word(&mut self, extra: char) -> Option<(usize, &'a str)> {
        self.skip(false);
        let start = self.pos;
        while self.peek().is_some_and(|c| is_name_char(c) || c == extra) {
            self.pos += 1;
        }
        (self.pos > start).then(|| (start, &self.text[start..self.pos]))
    }

    fn name(&mut self) -> PResult<(usize, &'a str)> {
        match self.word('_') {
            Some((at, w)) if w.starts_with(|c: char| c.is_ascii_alphabetic()) => Ok((at, w)),
            _ => self.syntax(self.pos, format!("unexpected {}", self.found()), &["name"]),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        let save = self.pos;
        match self.word('_') {
            Some((_, w)) if w == kw => Ok(()),
            _ => {
                self.pos = save;
                self.skip(false);
                self.syntax(self.pos, format!("unexpected {}", self.found()), &[kw])
            }
        }
    }

    fn integer(&mut self) -> PResult<u64> {
        self.skip(true);
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        match self.text[start..self.pos].parse() {
            Ok(n) => Ok(n),
            Err(_) => self.syntax(start, format!("unexpected {}", self.found()), &["integer"]),
        }
    }

    fn statements(&mut self) -> PResult<()> {
        loop {
            self.skip(true);
            while self.eat(";") {
                self.skip(true);
            }
            if self.peek().is_none() {
                return Ok(());
            }
            let start = self.pos;
            self.statement(start)?;
            self.skip(false);
            match self.peek() {
                None | Some(';') | Some('\n') => {}
                _ => return self.syntax(self.pos, format!("unexpected {}", self.found()), &[";", "end of line"]),
            }
        }
    }

    fn statement(&mut self, start: usize) -> PResult<()> {
        self.stmt = start;
        let Some((at, kw)) = self.word('_') else {
            return self.syntax(start, format!("unexpected {}", self.found()), STATEMENTS);
        };
        match kw {
            "field" => self.field(),
            "algebra" => self.algebra(),
            "scheme" => self.scheme_decl(),
            "morphism" => self.morphism(),
            "bundle" => self.bundle(),
            "restrict" | "points" | "verify" => {
                let (action, expect) = match kw {
                    "restrict" => (Action::Restrict(self.scheme_ref()?), None),
                    "points" => {
                        let x = self.scheme_ref()?;
                        self.keyword("over")?;
                        (Action::Points { x, algebra: self.test_algebra()? }, None)
                    }
                    _ => {
                        let target = self.target()?;
                        (Action::Verify(target), self.expectation()?)
                    }
                };
                let text = echo(&self.text[start..self.pos]);
                self.session.commands.push(Command {
                    text,
                    location: self.location(start),
                    action,
                    expect,
                });
                Ok(())
            }
            other => self.syntax(at, format!("unknown statement '{other}'"), STATEMENTS),
        }
    }

    fn declare(&mut self, at: usize, name: &str, decl: Decl) -> PResult<()> {
        let d = Declaration {
            name: name.to_string(),
            location: self.location(self.stmt),
            decl,
        };
        self.session.declare(d).map_err(|_| DslError::Name {
            location: self.location(at),
            message: format!("'{name}' is already declared"),
        })
    }

    fn lookup(&self, at: usize, name: &str) -> PResult<&Decl> {
        self.session.get(name).map(|d| &d.decl).ok_or_else(|| DslError::Name {
            location: self.location(at),
            message: format!("unknown name '{name}'"),
        })
    }

    fn field(&mut self) -> PResult<()> {
        let (at, name) = self.name()?;
        self.expect("=")?;
        self.skip(false);
        let k = if self.eat("QQ") {
            BaseField::Rationals
        } else if self.eat("GF(") {
            let p_at = self.pos;
            let p = self.integer()?;
            self.expect(")")?;
            match BaseField::prime(p) {
                Ok(k) => k,
                Err(e) => return self.mismatch(p_at, e.to_string()),
            }
        } else {
            return self.syntax(self.pos, format!("unexpected {}", self.found()), &["QQ", "GF("]);
        };
        self.declare(at, name, Decl::Field(Arc::new(EtaleAlgebra::trivial(k))))
    }

    fn algebra(&mut self) -> PResult<()> {
        let (at, name) = self.name()?;
        self.expect("=")?;
        let (k_at, k_name) = self.name()?;
        let k = match self.lookup(k_at, k_name)? {
            Decl::Field(k) => k.base(),
            other => return self.mismatch(k_at, format!("'{k_name}' is a {}, not a field", other.kind())),
        };
        self.expect("[t]/(")?;
        let (f_at, text) = self.capture()?;
        self.expect_in(")")?;
        let f = parse_modulus(k, &text).map_err(|e| self.poly_error(f_at, e))?;
        match EtaleAlgebra::new(k, f) {
            Ok(l) => self.declare(at, name, Decl::Algebra(Arc::new(l))),
            Err(e) => self.mismatch(f_at, e.to_string()),
        }
    }

    fn scheme_decl(&mut self) -> PResult<()> {
        let (at, name) = self.name()?;
        self.keyword("over")?;
        let (c_at, c_name) = self.name()?;
        let base = match self.lookup(c_at, c_name)? {
            Decl::Field(l) | Decl::Algebra(l) => Err(l.clone()),
            Decl::Scheme(x) => Ok(x.clone()),
            other => {
                return self.mismatch(
                    c_at,
                    format!("'{c_name}' is a {}, not a field, algebra or scheme", other.kind()),
                )
            }
        };
        self.expect("=")?;
        let vars = self.vars()?;
        let ring = match &base {
            Err(l) => PolyRing::new(l.clone(), vars.clone()),
            Ok(x) => {
                if let Some(v) = vars.iter().find(|v| x.vars().contains(v)) {
                    return self.mismatch(c_at, format!("variable '{v}' is already a coordinate of '{c_name}'"));
                }
                extended_ring(x, &vars)
            }
        };
        let gens = if self.eat("/") {
            self.expect("(")?;
            self.poly_list(&ring, ")")?.into_iter().map(|(_, p)| p).collect()
        } else {
            Vec::new()
        };
        let scheme = match base {
            Err(_) => AffineScheme::new(ring, gens).map(Arc::new),
            Ok(x) => relative_scheme(&x, &vars, gens).map(|(y, _)| y),
        };
        match scheme {
            Ok(x) => self.declare(at, name, Decl::Scheme(x)),
            Err(e) => self.mismatch(at, e.to_string()),
        }
    }

    fn vars(&mut self) -> PResult<Vec<String>> {
        self.expect("[")?;
        let mut vars: Vec<String> = Vec::new();
        self.skip(true);
        if self.eat("]") {
            return Ok(vars);
        }
        loop {
            self.skip(true);
            let (at, v) = self.name()?;
            if !is_identifier(v) || v == "t" {
                return self.syntax(at, format!("'{v}' cannot be a variable"), &["variable name"]);
            }
            if vars.iter().any(|w| w == v) {
                return self.syntax(at, format!("variable '{v}' repeated"), &["variable name"]);
            }
            vars.push(v.to_string());
            self.skip(true);
            if self.eat("]") {
                return Ok(vars);
            }
            if !self.eat(",") {
                return self.syntax(self.pos, format!("unexpected {}", self.found()), &[",", "]"]);
            }
        }
    }

    /// Source text of one polynomial, up to a `,`, `)` or `]` outside
    /// brackets. Comments become blanks so offsets stay aligned.
    fn capture(&mut self) -> PResult<(usize, String)> {
        self.skip(true);
        let start = self.pos;
        let mut out = String::new();
        let mut depth = 0usize;
        let mut comment = false;
        while let Some(c) = self.peek() {
            if comment {
                comment = c != '\n';
                out.push(if c == '\n' { '\n' } else { ' ' });
                self.pos += c.len_utf8();
                continue;
            }
            match c {
                '#' => comment = true,
                '(' | '[' => depth += 1,
                ')' | ']' | ',' if depth == 0 => break,
                ')' | ']' => depth -= 1,
                ';' => break,
                _ => {}
            }
            out.push(if comment { ' ' } else { c });
            self.pos += c.len_utf8();
        }
        if self.peek().is_none_or(|c| c == ';') {
            return self.syntax(self.pos, format!("unexpected {}", self.found()), &[",", ")", "]"]);
        }
        if out.trim().is_empty() {
            return self.syntax(start, "empty polynomial", &["polynomial"]);
        }
        Ok((start, out))
    }

    fn poly_error(&self, base: usize, e: ParseError) -> DslError {
        let location = self.location(base + e.offset);
        if e.message.starts_with("unknown variable") {
            DslError::Name {
                location,
                message: e.message,
            }
        } else {
            DslError::Syntax {
                location,
                message: e.message,
                expected: e.expected,
            }
        }
    }

    fn poly(&mut self, ring: &Arc<PolyRing>) -> PResult<(usize, Poly)> {
        let (at, text) = self.capture()?;
        parse_poly(ring, &text).map(|p| (at, p)).map_err(|e| self.poly_error(at, e))
    }

    /// Comma-separated polynomials after an opening bracket, through `close`.
    fn poly_list(&mut self, ring: &Arc<PolyRing>, close: &str) -> PResult<Vec<(usize, Poly)>> {
        let mut out = Vec::new();
        self.skip(true);
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.poly(ring)?);
            self.skip(true);
            if self.eat(close) {
                return Ok(out);
            }
            if !self.eat(",") {
                return self.syntax(self.pos, format!("unexpected {}", self.found()), &[",", close]);
            }
        }
    }

    fn scheme_ref(&mut self) -> PResult<Arc<AffineScheme>> {
        let (at, name) = self.name()?;
        match self.lookup(at, name)? {
            Decl::Scheme(x) => Ok(x.clone()),
            other => self.mismatch(at, format!("'{name}' is a {}, not a scheme", other.kind())),
        }
    }

    fn morphism_ref(&mut self) -> PResult<Arc<Morphism>> {
        let (at, name) = self.name()?;
        match self.lookup(at, name)? {
            Decl::Morphism(m) => Ok(m.clone()),
            other => self.mismatch(at, format!("'{name}' is a {}, not a morphism", other.kind())),
        }
    }

    fn bundle_ref(&mut self) -> PResult<weilkit::bundle::Bundle> {
        let (at, name) = self.name()?;
        match self.lookup(at, name)? {
            Decl::Bundle(e) => Ok(e.clone()),
            other => self.mismatch(at, format!("'{name}' is a {}, not a bundle", other.kind())),
        }
    }

    fn morphism(&mut self) -> PResult<()> {
        let (at, name) = self.name()?;
        self.expect(":")?;
        let x = self.scheme_ref()?;
        self.expect("->")?;
        let y = self.scheme_ref()?;
        self.expect("=")?;
        self.expect("(")?;
        let images = self.poly_list(x.ring(), ")")?.into_iter().map(|(_, p)| p).collect();
        let cap = self.session.config.gb_degree_cap;
        match Morphism::new(x, y, images, cap) {
            Ok(m) => self.declare(at, name, Decl::Morphism(Arc::new(m))),
            Err(e) => self.rejected(at, e),
        }
    }

    fn bundle(&mut self) -> PResult<()> {
        let (at, name) = self.name()?;
        self.keyword("on")?;
        let x = self.scheme_ref()?;
        self.expect("=")?;
        self.expect("[")?;
        let mut rows = Vec::new();
        loop {
            self.expect_in("[")?;
            rows.push(self.poly_list(x.ring(), "]")?.into_iter().map(|(_, p)| p).collect());
            self.skip(true);
            if self.eat("]") {
                break;
            }
            if !self.eat(",") {
                return self.syntax(self.pos, format!("unexpected {}", self.found()), &[",", "]"]);
            }
        }
        self.keyword("rank")?;
        let rank = self.integer()? as usize;
        match make_bundle(&x, rows, rank, &self.session.config) {
            Ok(e) => self.declare(at, name, Decl::Bundle(e)),
            Err(e) => self.rejected(at, e),
        }
    }

    fn test_algebra(&mut self) -> PResult<TestAlgebra> {
        self.skip(false);
        let at = self.pos;
        if !self.eat("GF(") {
            return self.syntax(at, format!("unexpected {}", self.found()), &["GF("]);
        }
        let q = self.integer()?;
        self.expect(")")?;
        let dual = self.text[self.pos..].starts_with("[eps]");
        if dual {
            self.pos += "[eps]".len();
        }
        let a = if dual { TestAlgebra::dual(q) } else { TestAlgebra::field(q) };
        a.or_else(|e| self.mismatch(at, e.to_string()))
    }

    fn test_algebras(&mut self) -> PResult<Vec<TestAlgebra>> {
        self.keyword("over")?;
        let mut out = vec![self.test_algebra()?];
        while self.eat(",") {
            out.push(self.test_algebra()?);
        }
        Ok(out)
    }

    fn equations(&mut self, kw: &str, x: &AffineScheme) -> PResult<Vec<Poly>> {
        self.keyword(kw)?;
        self.expect("(")?;
        Ok(self.poly_list(x.ring(), ")")?.into_iter().map(|(_, p)| p).collect())
    }

    fn target(&mut self) -> PResult<Target> {
        let Some((at, word)) = self.word('-') else {
            return self.syntax(self.pos, format!("unexpected {}", self.found()), TARGETS);
        };
        Ok(match word {
            "adjunction" => {
                let x = self.scheme_ref()?;
                Target::Adjunction { x, algebras: self.test_algebras()? }
            }
            "triangles" => {
                let x = self.scheme_ref()?;
                let y = if self.peek_word("with") {
                    self.keyword("with")?;
                    let (y_at, y_name) = self.name()?;
                    let y = match self.lookup(y_at, y_name)? {
                        Decl::Scheme(y) => y.clone(),
                        other => return self.mismatch(y_at, format!("'{y_name}' is a {}, not a scheme", other.kind())),
                    };
                    if !y.coef().is_trivial() || y.base_field() != x.base_field() {
                        return self.mismatch(y_at, format!("'{y_name}' must be a scheme over the base field"));
                    }
                    Some(y)
                } else {
                    None
                };
                Target::Triangles { x, y }
            }
            "base-change" => {
                let x = self.scheme_ref()?;
                self.keyword("to")?;
                Target::BaseChange { x, t: self.scheme_ref()? }
            }
            "fiber-product" => {
                let f = self.morphism_ref()?;
                self.expect(",")?;
                Target::FiberProduct { f, g: self.morphism_ref()? }
            }
            "preserves-closed" => Target::PreservesClosed(self.morphism_ref()?),
            "preserves-smooth" => Target::PreservesSmooth(self.scheme_ref()?),
            "preserves-etale" => {
                self.skip(false);
                let y_at = self.pos;
                let y = self.scheme_ref()?;
                if weilkit::scheme::relative_presentation(&y).is_err() {
                    return self.mismatch(y_at, "scheme is not declared over another scheme");
                }
                Target::PreservesEtale(y)
            }
            "bundle" => Target::Bundle(self.bundle_ref()?),
            "zero-section" => Target::ZeroSection(self.bundle_ref()?),
            "normal" => {
                let x = self.scheme_ref()?;
                let equations = self.equations("along", &x)?;
                Target::Normal { x, equations, algebras: self.test_algebras()? }
            }
            "thom" => {
                let e = self.bundle_ref()?;
                Target::Thom { e, algebras: self.test_algebras()? }
            }
            "step2" => {
                let e = self.bundle_ref()?;
                Target::Step2 { e, algebras: self.test_algebras()? }
            }
            "gysin-shadow" => {
                let x = self.scheme_ref()?;
                let equations = self.equations("along", &x)?;
                Target::GysinShadow { x, equations, algebras: self.test_algebras()? }
            }
            "galois-split" => Target::GaloisSplit(self.scheme_ref()?),
            "norm-open" => {
                let x = self.scheme_ref()?;
                self.keyword("by")?;
                self.expect("(")?;
                let (_, g) = self.poly(x.ring())?;
                self.expect_in(")")?;
                let algebras = if self.peek_word("over") { self.test_algebras()? } else { Vec::new() };
                Target::NormOpen { x, g, algebras }
            }
            "affine-shadow" => {
                let x = self.scheme_ref()?;
                let upto = if self.peek_word("upto") {
                    self.keyword("upto")?;
                    self.integer()? as usize
                } else {
                    2
                };
                Target::AffineShadow { x, upto }
            }
            other => return self.syntax(at, format!("unknown verify target '{other}'"), TARGETS),
        })
    }

    fn peek_word(&mut self, kw: &str) -> bool {
        let save = self.pos;
        let hit = self.word('_').is_some_and(|(_, w)| w == kw);
        self.pos = save;
        hit
    }

    fn expectation(&mut self) -> PResult<Option<Status>> {
        if !self.peek_word("expect") {
            return Ok(None);
        }
        self.keyword("expect")?;
        let Some((at, w)) = self.word('-') else {
            return self.syntax(self.pos, format!("unexpected {}", self.found()), &["refuted", "skipped"]);
        };
        match w {
            "verified" => Ok(None),
            "refuted" => Ok(Some(Status::Refuted)),
            "skipped" => Ok(Some(Status::Skipped)),
            "budget-exceeded" => Ok(Some(Status::BudgetExceeded)),
            _ => self.syntax(at, format!("unknown status '{w}'"), &["verified", "refuted", "skipped", "budget-exceeded"]),
        }
    }
}

/// The statement with comments dropped and whitespace collapsed.
fn echo(text: &str) -> String {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .collect::<Vec<_>>()
        .join(" ")
}
