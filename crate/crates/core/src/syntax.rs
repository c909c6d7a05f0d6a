//! Terms, atoms, clauses and programs over the language with constant `0`
//! and unary function `s`, plus the concrete text syntax.
//!
//! ```text
//! % builtin: num/1
//! p.
//! q :- p, not r.
//! e(X) :- n(X), not e(X).
//! ```
//!
//! Variables start with an uppercase letter, numerals `n` abbreviate
//! `s(...s(0)...)`, and `%` starts a comment. A comment of the form
//! `% builtin: name/arity, ...` declares predicates evaluated by an oracle
//! instead of by clauses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// The numeral `s^n(0)`.
    Nat(BigUint),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn nat(n: u64) -> Self {
        Term::Nat(BigUint::from(n))
    }

    /// Builds `f(args)`, folding `s` applied to a numeral into a numeral.
    pub fn app(f: &str, mut args: Vec<Term>) -> Self {
        if f == "s" && args.len() == 1 {
            if let Term::Nat(n) = &args[0] {
                return Term::Nat(n + 1u32);
            }
            return Term::App("s".into(), vec![args.pop().unwrap()]);
        }
        Term::App(f.into(), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Nat(_) | Term::Const(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Nesting depth of function symbols; `s^n(0)` has depth `n`.
    pub fn depth(&self) -> u64 {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Nat(n) => n.to_u64().unwrap_or(u64::MAX),
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn as_nat(&self) -> Option<&BigUint> {
        match self {
            Term::Nat(n) => Some(n),
            _ => None,
        }
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
            _ => {}
        }
    }

    fn collect_symbols(&self, consts: &mut BTreeSet<String>, funcs: &mut BTreeSet<(String, usize)>) {
        match self {
            Term::Const(c) => {
                consts.insert(c.clone());
            }
            Term::App(f, args) => {
                funcs.insert((f.clone(), args.len()));
                args.iter().for_each(|t| t.collect_symbols(consts, funcs));
            }
            _ => {}
        }
    }

    pub fn substitute(&self, binding: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => binding.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::app(f, args.iter().map(|t| t.substitute(binding)).collect()),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => write!(f, "{v}"),
            Term::Nat(n) => write!(f, "{n}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                write!(f, ")")
            }
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { pred: pred.into(), args }
    }

    pub fn prop(pred: impl Into<String>) -> Self {
        Atom::new(pred, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn substitute(&self, binding: &BTreeMap<String, Term>) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|t| t.substitute(binding)).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            write_list(f, &self.args)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `head ← premises, ¬constraints`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub head: Atom,
    pub premises: Vec<Atom>,
    pub constraints: Vec<Atom>,
}

impl Clause {
    pub fn new(head: Atom, premises: Vec<Atom>, constraints: Vec<Atom>) -> Self {
        Clause { head, premises, constraints }
    }

    pub fn fact(head: Atom) -> Self {
        Clause::new(head, Vec::new(), Vec::new())
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        std::iter::once(&self.head).chain(self.premises.iter()).chain(self.constraints.iter())
    }

    pub fn is_ground(&self) -> bool {
        self.atoms().all(Atom::is_ground)
    }

    /// Variables in first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for atom in self.atoms() {
            atom.args.iter().for_each(|t| t.collect_vars(&mut out));
        }
        out
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if self.premises.is_empty() && self.constraints.is_empty() {
            return write!(f, ".");
        }
        write!(f, " :- ")?;
        let body: Vec<String> = self
            .premises
            .iter()
            .map(|a| a.to_string())
            .chain(self.constraints.iter().map(|a| format!("not {a}")))
            .collect();
        write!(f, "{}.", body.join(", "))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub clauses: Vec<Clause>,
    /// Predicates (name, arity) whose truth comes from an oracle.
    pub builtins: BTreeSet<(String, usize)>,
}

impl Program {
    pub fn new(clauses: Vec<Clause>) -> Self {
        Program { clauses, builtins: BTreeSet::new() }
    }

    pub fn with_builtins<I, S>(mut self, builtins: I) -> Self
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        self.builtins.extend(builtins.into_iter().map(|(name, arity)| (name.into(), arity)));
        self
    }

    pub fn is_ground(&self) -> bool {
        self.clauses.iter().all(Clause::is_ground)
    }

    pub fn is_builtin(&self, atom: &Atom) -> bool {
        self.builtins.contains(&(atom.pred.clone(), atom.arity()))
    }

    /// Constants (other than numerals) and function symbols (other than `s`)
    /// occurring anywhere in the program.
    pub fn signature(&self) -> (BTreeSet<String>, BTreeSet<(String, usize)>) {
        let mut consts = BTreeSet::new();
        let mut funcs = BTreeSet::new();
        for clause in &self.clauses {
            for atom in clause.atoms() {
                atom.args.iter().for_each(|t| t.collect_symbols(&mut consts, &mut funcs));
            }
        }
        funcs.remove(&("s".to_string(), 1));
        (consts, funcs)
    }

    /// Checks that every predicate is used with a single arity.
    pub fn check_arities(&self) -> Result<(), ParseError> {
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        for (name, arity) in &self.builtins {
            seen.insert(name, *arity);
        }
        for clause in &self.clauses {
            for atom in clause.atoms() {
                match seen.get(atom.pred.as_str()) {
                    Some(&a) if a != atom.arity() => {
                        return Err(ParseError::ArityMismatch {
                            pred: atom.pred.clone(),
                            expected: a,
                            found: atom.arity(),
                            line: 0,
                        })
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(&atom.pred, atom.arity());
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.builtins.is_empty() {
            let decl: Vec<String> = self.builtins.iter().map(|(name, arity)| format!("{name}/{arity}")).collect();
            writeln!(f, "% builtin: {}", decl.join(", "))?;
        }
        for clause in &self.clauses {
            writeln!(f, "{clause}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("predicate {pred} used with arity {found} at line {line}, previously {expected}")]
    ArityMismatch { pred: String, expected: usize, found: usize, line: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Num(BigUint),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
}

/// A `% builtin:` entry: name, arity, line.
type BuiltinDecl = (String, usize, usize);

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
    builtins: Vec<BuiltinDecl>,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1, builtins: Vec::new() }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col, message: message.into() }
    }

    fn comment(&mut self) -> Result<(), ParseError> {
        let line = self.line;
        let mut text = String::new();
        while let Some(&c) = self.chars.peek() {
            if c == '\n' {
                break;
            }
            text.push(c);
            self.bump();
        }
        let body = text.trim();
        if let Some(decl) = body.strip_prefix("builtin:") {
            for item in decl.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (name, arity) =
                    item.split_once('/').ok_or_else(|| self.error(format!("bad builtin declaration `{item}`")))?;
                let arity =
                    arity.trim().parse::<usize>().map_err(|_| self.error(format!("bad builtin arity in `{item}`")))?;
                self.builtins.push((name.trim().to_string(), arity, line));
            }
        }
        Ok(())
    }

    fn tokens(mut self) -> Result<(Vec<Spanned>, Vec<BuiltinDecl>), ParseError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let (line, col) = (self.line, self.col);
            let tok = match c {
                c if c.is_whitespace() => {
                    self.bump();
                    continue;
                }
                '%' => {
                    self.bump();
                    self.comment()?;
                    continue;
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                ':' => {
                    self.bump();
                    if self.bump() != Some('-') {
                        return Err(ParseError::Syntax { line, col, message: "expected `:-`".into() });
                    }
                    Tok::If
                }
                c if c.is_ascii_digit() => {
                    let mut s = String::new();
                    while let Some(&d) = self.chars.peek() {
                        if !d.is_ascii_digit() {
                            break;
                        }
                        s.push(d);
                        self.bump();
                    }
                    Tok::Num(s.parse().expect("digits"))
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while let Some(&d) = self.chars.peek() {
                        if !(d.is_alphanumeric() || d == '_' || d == '\'') {
                            break;
                        }
                        s.push(d);
                        self.bump();
                    }
                    if c.is_uppercase() || c == '_' {
                        Tok::Var(s)
                    } else {
                        Tok::Ident(s)
                    }
                }
                other => {
                    return Err(ParseError::Syntax { line, col, message: format!("unexpected character `{other}`") })
                }
            };
            out.push(Spanned { tok, line, col });
        }
        Ok((out, self.builtins))
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|s| (s.line, s.col)).unwrap_or(self.eof)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax { line, col, message: message.into() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.next() {
            Some(Tok::Var(v)) => Ok(Term::Var(v)),
            Some(Tok::Num(n)) => Ok(Term::Nat(n)),
            Some(Tok::Ident(name)) => {
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let args = self.args()?;
                    Ok(Term::app(&name, args))
                } else {
                    Ok(Term::Const(name))
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected a term"))
            }
        }
    }

    // Parses `t1, ..., tn)` after the opening parenthesis.
    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = vec![self.term()?];
        loop {
            match self.next() {
                Some(Tok::Comma) => args.push(self.term()?),
                Some(Tok::RParen) => return Ok(args),
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected `,` or `)`"));
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.next() {
            Some(Tok::Ident(name)) => {
                let args = if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    self.args()?
                } else {
                    Vec::new()
                };
                Ok(Atom::new(name, args))
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected an atom"))
            }
        }
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        let head = self.atom()?;
        let mut premises = Vec::new();
        let mut constraints = Vec::new();
        if self.peek() == Some(&Tok::If) {
            self.pos += 1;
            loop {
                let negated = self.peek() == Some(&Tok::Ident("not".into()))
                    && matches!(self.toks.get(self.pos + 1).map(|s| &s.tok), Some(Tok::Ident(_)));
                if negated {
                    self.pos += 1;
                    constraints.push(self.atom()?);
                } else {
                    premises.push(self.atom()?);
                }
                match self.peek() {
                    Some(Tok::Comma) => self.pos += 1,
                    _ => break,
                }
            }
        }
        self.expect(Tok::Dot, "`.` at end of clause")?;
        Ok(Clause::new(head, premises, constraints))
    }
}

/// Parses a program in the text syntax described in the module docs.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let eof = text.lines().enumerate().last().map_or((1, 1), |(i, l)| (i + 1, l.chars().count() + 1));
    let (toks, decls) = Lexer::new(text).tokens()?;
    let mut parser = Parser { toks, pos: 0, eof };
    let mut program = Program::default();
    let mut arities: BTreeMap<String, usize> = BTreeMap::new();
    for (name, arity, line) in decls {
        if let Some(&prev) = arities.get(&name) {
            if prev != arity {
                return Err(ParseError::ArityMismatch { pred: name, expected: prev, found: arity, line });
            }
        }
        arities.insert(name.clone(), arity);
        program.builtins.insert((name, arity));
    }
    while parser.peek().is_some() {
        let line = parser.here().0;
        let clause = parser.clause()?;
        for atom in clause.atoms() {
            match arities.get(&atom.pred) {
                Some(&a) if a != atom.arity() => {
                    return Err(ParseError::ArityMismatch {
                        pred: atom.pred.clone(),
                        expected: a,
                        found: atom.arity(),
                        line,
                    })
                }
                Some(_) => {}
                None => {
                    arities.insert(atom.pred.clone(), atom.arity());
                }
            }
        }
        program.clauses.push(clause);
    }
    Ok(program)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_four_clause_example() {
        let p = parse_program("p. q :- p, not r. r :- not q. s :- not t.").unwrap();
        assert_eq!(p.clauses.len(), 4);
        assert_eq!(p.clauses[0], Clause::fact(Atom::prop("p")));
        assert_eq!(p.clauses[1], Clause::new(Atom::prop("q"), vec![Atom::prop("p")], vec![Atom::prop("r")]));
        assert_eq!(p.clauses[2].constraints, vec![Atom::prop("q")]);
        assert!(p.is_ground());
    }

    #[test]
    fn empty_text_is_empty_program() {
        assert_eq!(parse_program("").unwrap(), Program::default());
        assert_eq!(parse_program("  % only a comment\n").unwrap(), Program::default());
    }

    #[test]
    fn parses_variables_and_numerals() {
        let p = parse_program("e(X) :- n(X), not e(X).").unwrap();
        assert_eq!(p.clauses.len(), 1);
        assert_eq!(p.clauses[0].variables(), vec!["X".to_string()]);
        assert!(!p.is_ground());
        let q = parse_program("p(3). p(s(s(0))).").unwrap();
        assert_eq!(q.clauses[0].head.args[0], Term::nat(3));
        assert_eq!(q.clauses[1].head.args[0], Term::nat(2));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_program("p.\nq :- .").unwrap_err();
        assert_eq!(err, ParseError::Syntax { line: 2, col: 6, message: "expected an atom".into() });
        assert!(matches!(parse_program("p"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_program("p :- q ; r."), Err(ParseError::Syntax { line: 1, col: 8, .. })));
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let err = parse_program("p(0).\nq :- p.").unwrap_err();
        assert!(matches!(err, ParseError::ArityMismatch { ref pred, expected: 1, found: 0, line: 2 } if pred == "p"));
    }

    #[test]
    fn builtin_declarations() {
        let p = parse_program("% builtin: num/1\np :- num(X), not r(X).").unwrap();
        assert!(p.builtins.contains(&("num".to_string(), 1)));
        let printed = p.to_string();
        assert_eq!(parse_program(&printed).unwrap(), p);
    }

    #[test]
    fn not_as_an_atom_name() {
        // `not` followed by something other than an atom is the atom `not`.
        let p = parse_program("not. p :- not.").unwrap();
        assert_eq!(p.clauses[1].premises, vec![Atom::prop("not")]);
    }
}
