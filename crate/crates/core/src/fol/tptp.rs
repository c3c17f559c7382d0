//! TPTP FOF: bare formulas (the annotation fragment), whole `fof(...)` files,
//! and the emitter.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use super::mangle::{self, Mangler};
use super::{Formula, Term, TptpProblem, TptpUnit, UnitRole};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TptpError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("lexical error at {line}:{column}: {message}")]
    Lexical { line: usize, column: usize, message: String },
    #[error("duplicate unit name `{0}`")]
    DuplicateName(String),
    #[error("unit `{name}` has unsupported role `{role}` (only axiom and conjecture are accepted)")]
    UnsupportedRole { name: String, role: String },
    #[error("unsupported TPTP construct `{0}`")]
    Unsupported(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmitError {
    #[error("unit names `{first}` and `{second}` collide as `{spelling}`")]
    UnitNameCollision { first: String, second: String, spelling: String },
    #[error("unit `{0}` contains free variables")]
    OpenFormula(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    Bang,
    Question,
    Tilde,
    And,
    Or,
    Implies,
    RevImplies,
    Iff,
    Xor,
    Nor,
    Nand,
    Eq,
    Neq,
    Lower(String),
    Upper(String),
    Quoted(String),
    Dollar(String),
    Number(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) | Tok::Number(s) => format!("`{s}`"),
            Tok::Quoted(s) => format!("'{s}'"),
            Tok::Dollar(s) => format!("`${s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("{other:?}"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, TptpError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    macro_rules! advance {
        ($n:expr) => {
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        };
    }
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance!(1);
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let (l, c0) = (line, col);
            advance!(2);
            loop {
                if i >= chars.len() {
                    return Err(TptpError::Lexical { line: l, column: c0, message: "unterminated comment".into() });
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    advance!(2);
                    break;
                }
                advance!(1);
            }
            continue;
        }
        let (l, c0) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: l, column: c0 });
        let three: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
        if three == "<=>" {
            push(&mut out, Tok::Iff);
            advance!(3);
        } else if three == "<~>" {
            push(&mut out, Tok::Xor);
            advance!(3);
        } else if two == "=>" {
            push(&mut out, Tok::Implies);
            advance!(2);
        } else if two == "<=" {
            push(&mut out, Tok::RevImplies);
            advance!(2);
        } else if two == "~|" {
            push(&mut out, Tok::Nor);
            advance!(2);
        } else if two == "~&" {
            push(&mut out, Tok::Nand);
            advance!(2);
        } else if two == "!=" {
            push(&mut out, Tok::Neq);
            advance!(2);
        } else {
            match c {
                '(' => push(&mut out, Tok::LParen),
                ')' => push(&mut out, Tok::RParen),
                '[' => push(&mut out, Tok::LBracket),
                ']' => push(&mut out, Tok::RBracket),
                ',' => push(&mut out, Tok::Comma),
                ':' => push(&mut out, Tok::Colon),
                '.' => push(&mut out, Tok::Dot),
                '!' => push(&mut out, Tok::Bang),
                '?' => push(&mut out, Tok::Question),
                '~' => push(&mut out, Tok::Tilde),
                '&' => push(&mut out, Tok::And),
                '|' => push(&mut out, Tok::Or),
                '=' => push(&mut out, Tok::Eq),
                '\'' => {
                    advance!(1);
                    let mut name = String::new();
                    loop {
                        match chars.get(i) {
                            None => {
                                return Err(TptpError::Lexical {
                                    line: l,
                                    column: c0,
                                    message: "unterminated quoted atom".into(),
                                })
                            }
                            Some('\\') => match chars.get(i + 1) {
                                Some(&e @ ('\\' | '\'')) => {
                                    name.push(e);
                                    advance!(2);
                                }
                                _ => {
                                    return Err(TptpError::Lexical {
                                        line,
                                        column: col,
                                        message: "invalid escape in quoted atom".into(),
                                    })
                                }
                            },
                            Some('\'') => {
                                advance!(1);
                                break;
                            }
                            Some('\n') => {
                                return Err(TptpError::Lexical {
                                    line: l,
                                    column: c0,
                                    message: "newline inside quoted atom".into(),
                                })
                            }
                            Some(&ch) => {
                                name.push(ch);
                                advance!(1);
                            }
                        }
                    }
                    if name.is_empty() {
                        return Err(TptpError::Lexical { line: l, column: c0, message: "empty quoted atom".into() });
                    }
                    push(&mut out, Tok::Quoted(name));
                    continue;
                }
                '"' => {
                    return Err(TptpError::Unsupported("distinct object (double-quoted term)".into()));
                }
                '$' => {
                    advance!(1);
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        advance!(1);
                    }
                    push(&mut out, Tok::Dollar(chars[start..i].iter().collect()));
                    continue;
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        advance!(1);
                    }
                    let word: String = chars[start..i].iter().collect();
                    let tok = if c.is_ascii_digit() {
                        if !word.chars().all(|d| d.is_ascii_digit()) {
                            return Err(TptpError::Lexical {
                                line: l,
                                column: c0,
                                message: format!("malformed number `{word}`"),
                            });
                        }
                        Tok::Number(word)
                    } else if c.is_ascii_uppercase() || c == '_' {
                        Tok::Upper(word)
                    } else {
                        Tok::Lower(word)
                    };
                    push(&mut out, tok);
                    continue;
                }
                other => {
                    return Err(TptpError::Lexical {
                        line: l,
                        column: c0,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
            advance!(1);
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BinOp {
    And,
    Or,
    Implies,
    RevImplies,
    Iff,
    Xor,
    Nor,
    Nand,
}

impl BinOp {
    fn from_tok(t: &Tok) -> Option<BinOp> {
        Some(match t {
            Tok::And => BinOp::And,
            Tok::Or => BinOp::Or,
            Tok::Implies => BinOp::Implies,
            Tok::RevImplies => BinOp::RevImplies,
            Tok::Iff => BinOp::Iff,
            Tok::Xor => BinOp::Xor,
            Tok::Nor => BinOp::Nor,
            Tok::Nand => BinOp::Nand,
            _ => return None,
        })
    }

    // Unary connectives bind tighter than all of these. Among binary
    // connectives `&` binds tightest and the equivalences loosest; input with
    // explicit parentheses (all that the TPTP grammar admits) parses the same.
    fn precedence(self) -> u8 {
        match self {
            BinOp::And | BinOp::Nand => 4,
            BinOp::Or | BinOp::Nor => 3,
            BinOp::Implies | BinOp::RevImplies => 2,
            BinOp::Iff | BinOp::Xor => 1,
        }
    }

    fn associative(self) -> bool {
        matches!(self, BinOp::And | BinOp::Or)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    last: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, TptpError> {
        Ok(Parser { toks: lex(text)?, pos: 0, last: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Tok {
        self.last = self.pos;
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    /// Error located at the token most recently consumed.
    fn error_prev(&self, message: impl Into<String>) -> TptpError {
        let s = &self.toks[self.last];
        TptpError::Syntax { line: s.line, column: s.column, message: message.into() }
    }

    fn error(&self, message: impl Into<String>) -> TptpError {
        let s = &self.toks[self.pos];
        TptpError::Syntax { line: s.line, column: s.column, message: message.into() }
    }

    fn expect(&mut self, want: Tok) -> Result<(), TptpError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", want.describe(), self.peek().describe())))
        }
    }

    fn formula(&mut self) -> Result<Formula, TptpError> {
        self.binary(0)
    }

    fn binary(&mut self, min_prec: u8) -> Result<Formula, TptpError> {
        let mut lhs = self.unit()?;
        while let Some(op) = BinOp::from_tok(self.peek()) {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.next();
            lhs = if op.associative() {
                let mut items = vec![lhs, self.binary(prec + 1)?];
                while BinOp::from_tok(self.peek()) == Some(op) {
                    self.next();
                    items.push(self.binary(prec + 1)?);
                }
                if op == BinOp::And {
                    Formula::And(items)
                } else {
                    Formula::Or(items)
                }
            } else {
                // The remaining connectives group to the right.
                let rhs = self.binary(prec)?;
                match op {
                    BinOp::Implies => Formula::implies(lhs, rhs),
                    BinOp::RevImplies => Formula::implies(rhs, lhs),
                    BinOp::Iff => Formula::iff(lhs, rhs),
                    BinOp::Xor => Formula::not(Formula::iff(lhs, rhs)),
                    BinOp::Nor => Formula::not(Formula::Or(vec![lhs, rhs])),
                    BinOp::Nand => Formula::not(Formula::And(vec![lhs, rhs])),
                    BinOp::And | BinOp::Or => unreachable!(),
                }
            };
        }
        Ok(lhs)
    }

    fn unit(&mut self) -> Result<Formula, TptpError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.next();
                Ok(Formula::not(self.unit()?))
            }
            Tok::Bang | Tok::Question => {
                let universal = self.next() == Tok::Bang;
                self.expect(Tok::LBracket)?;
                let mut vars = Vec::new();
                loop {
                    match self.next() {
                        Tok::Upper(v) => {
                            if vars.contains(&v) {
                                return Err(self.error_prev(format!("variable `{v}` bound twice")));
                            }
                            vars.push(v);
                        }
                        other => {
                            return Err(self.error_prev(format!("expected variable, found {}", other.describe())))
                        }
                    }
                    match self.next() {
                        Tok::Comma => continue,
                        Tok::RBracket => break,
                        other => {
                            return Err(self.error_prev(format!("expected `,` or `]`, found {}", other.describe())))
                        }
                    }
                }
                // The colon is optional; the colon-free form appears in hand-written annotations.
                if *self.peek() == Tok::Colon {
                    self.next();
                }
                let body = self.unit()?;
                Ok(if universal {
                    Formula::Forall(vars, Box::new(body))
                } else {
                    Formula::Exists(vars, Box::new(body))
                })
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Dollar(word) if word == "true" || word == "false" => {
                self.next();
                if matches!(self.peek(), Tok::Eq | Tok::Neq) {
                    return Err(self.error("`$true`/`$false` cannot appear in an equation"));
                }
                Ok(if word == "true" { Formula::True } else { Formula::False })
            }
            Tok::Dollar(word) => Err(TptpError::Unsupported(format!("${word}"))),
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, TptpError> {
        let lhs_is_var = matches!(self.peek(), Tok::Upper(_));
        let lhs = self.term()?;
        match self.peek() {
            Tok::Eq => {
                self.next();
                Ok(Formula::Equality(lhs, self.term()?))
            }
            Tok::Neq => {
                self.next();
                Ok(Formula::not(Formula::Equality(lhs, self.term()?)))
            }
            _ if lhs_is_var => Err(self.error("a variable is not a formula")),
            _ => Ok(match lhs {
                Term::Constant(name) => Formula::Predicate(name, vec![]),
                Term::Function(name, args) => Formula::Predicate(name, args),
                Term::Variable(_) => unreachable!(),
            }),
        }
    }

    fn term(&mut self) -> Result<Term, TptpError> {
        match self.next() {
            Tok::Upper(v) => Ok(Term::Variable(v)),
            Tok::Lower(name) | Tok::Quoted(name) => self.application(name),
            Tok::Number(n) => Ok(Term::Constant(n)),
            other => Err(self.error_prev(format!("expected a term, found {}", other.describe()))),
        }
    }

    fn application(&mut self, name: String) -> Result<Term, TptpError> {
        if *self.peek() != Tok::LParen {
            return Ok(Term::Constant(name));
        }
        self.next();
        let mut args = vec![self.term()?];
        loop {
            match self.next() {
                Tok::Comma => args.push(self.term()?),
                Tok::RParen => break,
                other => return Err(self.error_prev(format!("expected `,` or `)`, found {}", other.describe()))),
            }
        }
        Ok(Term::Function(name, args))
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }
}

/// Parses a bare FOF formula, the form used inside annotations.
pub fn parse_tptp_formula(text: &str) -> Result<Formula, TptpError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    if !p.at_eof() {
        return Err(p.error(format!("unexpected {} after formula", p.peek().describe())));
    }
    Ok(f)
}

/// Parses a sequence of `fof(name, role, formula[, annotations]).` units.
pub fn parse_tptp_file(text: &str) -> Result<TptpProblem, TptpError> {
    let mut p = Parser::new(text)?;
    let mut problem = TptpProblem::default();
    let mut names = HashSet::new();
    while !p.at_eof() {
        let kind = match p.next() {
            Tok::Lower(k) => k,
            other => return Err(p.error_prev(format!("expected `fof`, found {}", other.describe()))),
        };
        if kind != "fof" {
            return Err(TptpError::Unsupported(kind));
        }
        p.expect(Tok::LParen)?;
        let name = match p.next() {
            Tok::Lower(n) | Tok::Quoted(n) | Tok::Number(n) => n,
            other => return Err(p.error_prev(format!("expected unit name, found {}", other.describe()))),
        };
        p.expect(Tok::Comma)?;
        let role = match p.next() {
            Tok::Lower(r) => r,
            other => return Err(p.error_prev(format!("expected role, found {}", other.describe()))),
        };
        let role = match role.as_str() {
            "axiom" => UnitRole::Axiom,
            "conjecture" => UnitRole::Conjecture,
            _ => return Err(TptpError::UnsupportedRole { name, role }),
        };
        p.expect(Tok::Comma)?;
        let formula = p.formula()?;
        if *p.peek() == Tok::Comma {
            skip_annotations(&mut p)?;
        }
        p.expect(Tok::RParen)?;
        p.expect(Tok::Dot)?;
        if !names.insert(name.clone()) {
            return Err(TptpError::DuplicateName(name));
        }
        problem.push(TptpUnit { name, role, formula });
    }
    Ok(problem)
}

fn skip_annotations(p: &mut Parser) -> Result<(), TptpError> {
    let mut depth = 0usize;
    loop {
        match p.peek() {
            Tok::Eof => return Err(p.error("unterminated unit annotations")),
            Tok::RParen if depth == 0 => return Ok(()),
            Tok::LParen | Tok::LBracket => depth += 1,
            Tok::RParen | Tok::RBracket => depth -= 1,
            _ => {}
        }
        p.next();
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EmitStyle {
    /// Symbols that are not lower words are single-quoted.
    #[default]
    Quoted,
    /// Symbols are rewritten into lower words.
    Mangled,
}

pub const HEADER: &str = "% TPTP FOF problem written by fowl\n";

/// Serializes `problem` as TPTP FOF, one unit per line after a header comment.
pub fn emit_tptp(problem: &TptpProblem, style: EmitStyle) -> Result<String, EmitError> {
    let mut out = String::from(HEADER);
    let mut symbols = Mangler::new();
    let mut spelled: HashMap<String, String> = HashMap::new();
    for unit in &problem.units {
        if !unit.formula.is_closed() {
            return Err(EmitError::OpenFormula(unit.name.clone()));
        }
        let name = match style {
            EmitStyle::Quoted => unit_name_quoted(&unit.name),
            EmitStyle::Mangled => {
                if unit.name.chars().all(|c| c.is_ascii_digit()) && !unit.name.is_empty() {
                    unit.name.clone()
                } else {
                    mangle::mangle_base(&unit.name)
                }
            }
        };
        if let Some(first) = spelled.insert(name.clone(), unit.name.clone()) {
            return Err(EmitError::UnitNameCollision { first, second: unit.name.clone(), spelling: name });
        }
        let mut spell = |s: &str| match style {
            EmitStyle::Quoted => mangle::quote_symbol(s),
            EmitStyle::Mangled => symbols.mangle(s),
        };
        let _ = writeln!(
            out,
            "fof({}, {}, {}).",
            name,
            unit.role.as_str(),
            formula_to_string(&unit.formula, &mut spell)
        );
    }
    Ok(out)
}

fn unit_name_quoted(name: &str) -> String {
    if !name.is_empty() && name.chars().all(|c| c.is_ascii_digit()) {
        name.to_string()
    } else {
        mangle::quote_symbol(name)
    }
}

/// Renders one formula, spelling symbols through `spell` and variables as
/// upper words (distinct source names never share a spelling).
pub fn formula_to_string(f: &Formula, spell: &mut impl FnMut(&str) -> String) -> String {
    let mut vars: HashMap<String, String> = HashMap::new();
    let mut used: HashSet<String> = HashSet::new();
    for v in f.variable_names() {
        let base = mangle::variable_base(&v);
        let spelling = mangle::unique_spelling(&base, |s| used.contains(s));
        used.insert(spelling.clone());
        vars.insert(v, spelling);
    }
    let mut out = String::new();
    write_formula(&mut out, f, spell, &vars);
    out
}

/// Quoted-style rendering of one formula, mainly for diagnostics.
pub fn display_formula(f: &Formula) -> String {
    formula_to_string(f, &mut |s| mangle::quote_symbol(s))
}

fn write_term(out: &mut String, t: &Term, spell: &mut impl FnMut(&str) -> String, vars: &HashMap<String, String>) {
    match t {
        Term::Variable(v) => out.push_str(&vars[v]),
        Term::Constant(c) => out.push_str(&spell(c)),
        Term::Function(name, args) => {
            out.push_str(&spell(name));
            write_args(out, args, spell, vars);
        }
    }
}

fn write_args(out: &mut String, args: &[Term], spell: &mut impl FnMut(&str) -> String, vars: &HashMap<String, String>) {
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_term(out, a, spell, vars);
    }
    out.push(')');
}

fn write_formula(out: &mut String, f: &Formula, spell: &mut impl FnMut(&str) -> String, vars: &HashMap<String, String>) {
    match f {
        Formula::True => out.push_str("$true"),
        Formula::False => out.push_str("$false"),
        Formula::Predicate(name, args) => {
            out.push_str(&spell(name));
            if !args.is_empty() {
                write_args(out, args, spell, vars);
            }
        }
        Formula::Equality(a, b) => {
            write_term(out, a, spell, vars);
            out.push_str(" = ");
            write_term(out, b, spell, vars);
        }
        Formula::Not(g) => match g.as_ref() {
            Formula::Equality(a, b) => {
                write_term(out, a, spell, vars);
                out.push_str(" != ");
                write_term(out, b, spell, vars);
            }
            _ => {
                out.push_str("~ ");
                write_formula(out, g, spell, vars);
            }
        },
        Formula::And(items) | Formula::Or(items) if items.len() < 2 => match items.first() {
            Some(g) => write_formula(out, g, spell, vars),
            None => out.push_str(if matches!(f, Formula::And(_)) { "$true" } else { "$false" }),
        },
        Formula::And(items) | Formula::Or(items) => {
            let sep = if matches!(f, Formula::And(_)) { " & " } else { " | " };
            out.push('(');
            for (i, g) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                write_formula(out, g, spell, vars);
            }
            out.push(')');
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            out.push('(');
            write_formula(out, a, spell, vars);
            out.push_str(if matches!(f, Formula::Implies(..)) { " => " } else { " <=> " });
            write_formula(out, b, spell, vars);
            out.push(')');
        }
        Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
            out.push_str(if matches!(f, Formula::Forall(..)) { "! [" } else { "? [" });
            for (i, v) in vs.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&vars[v]);
            }
            out.push_str("] : ");
            write_formula(out, body, spell, vars);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str, args: Vec<Term>) -> Formula {
        Formula::pred(name, args)
    }

    fn x() -> Term {
        Term::var("X")
    }

    #[test]
    fn proper_part_annotation_parses() {
        let expected = Formula::Forall(
            vec!["X".into()],
            Box::new(Formula::not(p("proper part of", vec![x(), x()]))),
        );
        assert_eq!(parse_tptp_formula("![X]: ~'proper part of'(X,X)").unwrap(), expected);
        // Colon-free form with a space before the argument list.
        assert_eq!(parse_tptp_formula("![X] ~ 'proper part of' (X,X)").unwrap(), expected);
        assert_eq!(parse_tptp_formula("(![X]: ~'proper part of'(X,X))").unwrap(), expected);
    }

    #[test]
    fn true_literal() {
        assert_eq!(parse_tptp_formula("$true").unwrap(), Formula::True);
        assert_eq!(parse_tptp_formula("$false").unwrap(), Formula::False);
    }

    #[test]
    fn precedence_matches_parenthesized_oracle() {
        let a = || p("a", vec![]);
        let b = || p("b", vec![]);
        let expected = Formula::iff(
            Formula::implies(a(), b()),
            Formula::Or(vec![Formula::not(a()), b()]),
        );
        assert_eq!(parse_tptp_formula("(a => b) <=> (~a | b)").unwrap(), expected);
        assert_eq!(parse_tptp_formula("((a => b) <=> ((~a) | b))").unwrap(), expected);
        assert_eq!(parse_tptp_formula("a => b <=> ~a | b").unwrap(), expected);
        assert_eq!(
            parse_tptp_formula("a & b | c").unwrap(),
            parse_tptp_formula("(a & b) | c").unwrap()
        );
        assert_eq!(
            parse_tptp_formula("~ a & b").unwrap(),
            parse_tptp_formula("(~ a) & b").unwrap()
        );
        assert_eq!(
            parse_tptp_formula("! [X] : p(X) & q").unwrap(),
            parse_tptp_formula("(! [X] : p(X)) & q").unwrap()
        );
    }

    #[test]
    fn chains_flatten_but_parentheses_nest() {
        let a = || p("a", vec![]);
        let b = || p("b", vec![]);
        let c = || p("c", vec![]);
        assert_eq!(parse_tptp_formula("a & b & c").unwrap(), Formula::And(vec![a(), b(), c()]));
        assert_eq!(
            parse_tptp_formula("(a & b) & c").unwrap(),
            Formula::And(vec![Formula::And(vec![a(), b()]), c()])
        );
    }

    #[test]
    fn derived_connectives() {
        assert_eq!(
            parse_tptp_formula("a <= b").unwrap(),
            Formula::implies(p("b", vec![]), p("a", vec![]))
        );
        assert_eq!(
            parse_tptp_formula("a <~> b").unwrap(),
            Formula::not(Formula::iff(p("a", vec![]), p("b", vec![])))
        );
        assert_eq!(
            parse_tptp_formula("! [X,Y] : X != Y").unwrap(),
            Formula::Forall(
                vec!["X".into(), "Y".into()],
                Box::new(Formula::neq(Term::var("X"), Term::var("Y")))
            )
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse_tptp_formula("p(X,\n  ]") {
            Err(TptpError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_tptp_formula("'unterminated"), Err(TptpError::Lexical { .. })));
        assert!(matches!(parse_tptp_formula("'bad\\q'"), Err(TptpError::Lexical { .. })));
        assert!(matches!(parse_tptp_formula("p & X"), Err(TptpError::Syntax { .. })));
    }

    #[test]
    fn quoted_atoms_unescape() {
        assert_eq!(parse_tptp_formula("'it\\'s'").unwrap(), p("it's", vec![]));
    }

    const WATER: &str = "fof(chebi_15377_inst, \n    axiom, \n        o(n15377_0) & part_of(n15377_0, m15377) & has_no_charge(n15377_0)\n      & h(n15377_1) & part_of(n15377_1, m15377) & has_no_charge(n15377_1) \n      & h(n15377_2) & part_of(n15377_2, m15377) & has_no_charge(n15377_2) \n      & has_single_bond_to(n15377_0, n15377_1)\n      & has_single_bond_to(n15377_0, n15377_2)\n      & ~has_bond(n15377_1, n15377_2)\n      & ![X]:(part_of(X, m15377)\n               => (X=n15377_0 | X=n15377_1 | X=n15377_2))\n      & connected(m15377)). \n";

    #[test]
    fn water_instance_parses() {
        let problem = parse_tptp_file(WATER).unwrap();
        assert_eq!(problem.units.len(), 1);
        assert_eq!(problem.units[0].name, "chebi_15377_inst");
        assert_eq!(problem.units[0].role, UnitRole::Axiom);
        match &problem.units[0].formula {
            Formula::And(items) => assert_eq!(items.len(), 14),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn file_level_rules() {
        assert!(parse_tptp_file("").unwrap().is_empty());
        assert!(parse_tptp_file("% only a comment\n/* block */").unwrap().is_empty());
        assert_eq!(
            parse_tptp_file("fof(a, axiom, p). fof(a, axiom, q).").unwrap_err(),
            TptpError::DuplicateName("a".into())
        );
        assert!(matches!(
            parse_tptp_file("fof(a, hypothesis, p)."),
            Err(TptpError::UnsupportedRole { .. })
        ));
        assert!(matches!(parse_tptp_file("cnf(a, axiom, p)."), Err(TptpError::Unsupported(_))));
        assert!(matches!(parse_tptp_file("include('Axioms/SET001.ax')."), Err(TptpError::Unsupported(_))));
        let with_info = parse_tptp_file("fof(a, axiom, p, file('x.p', a), [status(thm)]).").unwrap();
        assert_eq!(with_info.units[0].formula, p("p", vec![]));
    }

    #[test]
    fn emits_quoted_style() {
        let problem = TptpProblem::new(vec![TptpUnit::axiom(
            "axiom_name",
            Formula::Forall(vec!["X".into()], Box::new(Formula::not(p("proper part of", vec![x(), x()])))),
        )]);
        let text = emit_tptp(&problem, EmitStyle::Quoted).unwrap();
        assert!(text.contains("! [X] : ~ 'proper part of'(X,X)"), "{text}");
        assert_eq!(text, format!("{HEADER}fof(axiom_name, axiom, ! [X] : ~ 'proper part of'(X,X)).\n"));
    }

    #[test]
    fn empty_problem_is_header_only() {
        assert_eq!(emit_tptp(&TptpProblem::default(), EmitStyle::Quoted).unwrap(), HEADER);
    }

    #[test]
    fn mangled_style_rewrites_symbols_and_detects_name_clashes() {
        let problem = TptpProblem::new(vec![TptpUnit::axiom(
            "u",
            Formula::And(vec![p("Proper Part", vec![Term::constant("a")]), p("proper_Part", vec![Term::constant("a")])]),
        )]);
        let text = emit_tptp(&problem, EmitStyle::Mangled).unwrap();
        assert!(text.contains("(proper_Part(a) & proper_Part_2(a))"), "{text}");

        let clash = TptpProblem::new(vec![
            TptpUnit::axiom("Unit A", Formula::True),
            TptpUnit::axiom("unit_A", Formula::True),
        ]);
        assert!(matches!(
            emit_tptp(&clash, EmitStyle::Mangled),
            Err(EmitError::UnitNameCollision { .. })
        ));
    }

    #[test]
    fn variables_are_spelled_as_upper_words_without_merging() {
        let f = Formula::Forall(
            vec!["x".into(), "X".into()],
            Box::new(p("p", vec![Term::var("x"), Term::var("X")])),
        );
        let text = display_formula(&f);
        assert_eq!(text, "! [X,X_2] : p(X,X_2)");
        assert_eq!(parse_tptp_formula(&text).unwrap().variable_names().len(), 2);
    }

    #[test]
    fn open_formulas_are_rejected() {
        let problem = TptpProblem::new(vec![TptpUnit::axiom("u", p("p", vec![x()]))]);
        assert_eq!(emit_tptp(&problem, EmitStyle::Quoted), Err(EmitError::OpenFormula("u".into())));
    }

    #[test]
    fn emitted_files_reparse() {
        let problem = parse_tptp_file(WATER).unwrap();
        let text = emit_tptp(&problem, EmitStyle::Quoted).unwrap();
        assert_eq!(parse_tptp_file(&text).unwrap(), problem);
    }
}
