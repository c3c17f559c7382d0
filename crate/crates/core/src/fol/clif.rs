//! CLIF (Common Logic Interchange Format), FOL fragment only.
//!
//! Common Logic does not separate predicate, function and constant names;
//! each occurrence is classified by its position. Names bound by a
//! quantifier become [`Term::Variable`].

use std::collections::HashMap;

use thiserror::Error;

use super::{Formula, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClifError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unbalanced parentheses: {0}")]
    Unbalanced(String),
    #[error("`{0}` is beyond the FOL fragment of Common Logic")]
    BeyondFol(String),
    #[error("predicate `{name}` used with arity {first} and {second}")]
    ArityOverload { name: String, first: usize, second: usize },
    #[error("function `{name}` used with arity {first} and {second}")]
    FunctionArityOverload { name: String, first: usize, second: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sexp {
    Name { text: String, quoted: bool, line: usize, column: usize },
    List { items: Vec<Sexp>, line: usize, column: usize },
}

impl Sexp {
    fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::Name { line, column, .. } | Sexp::List { line, column, .. } => (*line, *column),
        }
    }

    fn keyword(&self) -> Option<&str> {
        match self {
            Sexp::Name { text, quoted: false, .. } => Some(text),
            _ => None,
        }
    }

    fn head(&self) -> Option<&str> {
        match self {
            Sexp::List { items, .. } => items.first().and_then(Sexp::keyword),
            _ => None,
        }
    }
}

fn read_all(text: &str) -> Result<Vec<Sexp>, ClifError> {
    let chars: Vec<char> = text.chars().collect();
    let mut stack: Vec<(Vec<Sexp>, usize, usize)> = Vec::new();
    let mut top = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let bump = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let c = chars[i];
        let (l, c0) = (line, col);
        if c.is_whitespace() {
            bump(&mut i, &mut line, &mut col);
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                bump(&mut i, &mut line, &mut col);
            }
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            bump(&mut i, &mut line, &mut col);
            bump(&mut i, &mut line, &mut col);
            loop {
                if i >= chars.len() {
                    return Err(ClifError::Syntax { line: l, column: c0, message: "unterminated comment".into() });
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    bump(&mut i, &mut line, &mut col);
                    bump(&mut i, &mut line, &mut col);
                    break;
                }
                bump(&mut i, &mut line, &mut col);
            }
        } else if c == '(' {
            stack.push((Vec::new(), l, c0));
            bump(&mut i, &mut line, &mut col);
        } else if c == ')' {
            let Some((items, ol, oc)) = stack.pop() else {
                return Err(ClifError::Unbalanced(format!("unexpected `)` at {l}:{c0}")));
            };
            let list = Sexp::List { items, line: ol, column: oc };
            match stack.last_mut() {
                Some((parent, ..)) => parent.push(list),
                None => top.push(list),
            }
            bump(&mut i, &mut line, &mut col);
        } else if c == '"' || c == '\'' {
            bump(&mut i, &mut line, &mut col);
            let mut name = String::new();
            loop {
                match chars.get(i) {
                    None => {
                        return Err(ClifError::Syntax {
                            line: l,
                            column: c0,
                            message: "unterminated quoted name".into(),
                        })
                    }
                    Some('\\') if matches!(chars.get(i + 1), Some('"' | '\'' | '\\')) => {
                        name.push(chars[i + 1]);
                        bump(&mut i, &mut line, &mut col);
                        bump(&mut i, &mut line, &mut col);
                    }
                    Some(&q) if q == c => {
                        bump(&mut i, &mut line, &mut col);
                        break;
                    }
                    Some(&ch) => {
                        name.push(ch);
                        bump(&mut i, &mut line, &mut col);
                    }
                }
            }
            let atom = Sexp::Name { text: name, quoted: true, line: l, column: c0 };
            match stack.last_mut() {
                Some((parent, ..)) => parent.push(atom),
                None => top.push(atom),
            }
        } else {
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() && !matches!(chars[i], '(' | ')' | '"' | '\'') {
                bump(&mut i, &mut line, &mut col);
            }
            let text: String = chars[start..i].iter().collect();
            let atom = Sexp::Name { text, quoted: false, line: l, column: c0 };
            match stack.last_mut() {
                Some((parent, ..)) => parent.push(atom),
                None => top.push(atom),
            }
        }
    }
    if let Some((_, l, c)) = stack.last() {
        return Err(ClifError::Unbalanced(format!("`(` at {l}:{c} is never closed")));
    }
    Ok(top)
}

struct Converter {
    predicates: HashMap<String, usize>,
    functions: HashMap<String, usize>,
    bound: Vec<String>,
}

fn syntax(e: &Sexp, message: impl Into<String>) -> ClifError {
    let (line, column) = e.pos();
    ClifError::Syntax { line, column, message: message.into() }
}

fn is_sequence_marker(name: &str) -> bool {
    name.starts_with("...")
}

impl Converter {
    fn name<'a>(&self, e: &'a Sexp) -> Result<&'a str, ClifError> {
        match e {
            Sexp::Name { text, quoted, .. } => {
                if !quoted && is_sequence_marker(text) {
                    return Err(ClifError::BeyondFol(format!("sequence marker {text}")));
                }
                Ok(text)
            }
            Sexp::List { .. } => Err(syntax(e, "expected a name")),
        }
    }

    fn is_bound(&self, name: &str) -> bool {
        self.bound.iter().any(|b| b == name)
    }

    fn note_predicate(&mut self, name: &str, arity: usize) -> Result<(), ClifError> {
        match self.predicates.get(name) {
            Some(&first) if first != arity => {
                Err(ClifError::ArityOverload { name: name.to_string(), first, second: arity })
            }
            Some(_) => Ok(()),
            None => {
                self.predicates.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    fn note_function(&mut self, name: &str, arity: usize) -> Result<(), ClifError> {
        match self.functions.get(name) {
            Some(&first) if first != arity => {
                Err(ClifError::FunctionArityOverload { name: name.to_string(), first, second: arity })
            }
            Some(_) => Ok(()),
            None => {
                self.functions.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    /// `None` for a bare `(cl:comment "...")`, which carries no sentence.
    fn sentence(&mut self, e: &Sexp) -> Result<Option<Formula>, ClifError> {
        let Sexp::List { items, .. } = e else {
            let name = self.name(e)?.to_string();
            if self.is_bound(&name) {
                return Err(ClifError::BeyondFol(format!("variable `{name}` used as a sentence")));
            }
            self.note_predicate(&name, 0)?;
            return Ok(Some(Formula::Predicate(name, vec![])));
        };
        let Some(first) = items.first() else {
            return Err(syntax(e, "empty sentence `()`"));
        };
        let args = &items[1..];
        let connective = first.keyword().map(str::to_string);
        let f = match connective.as_deref() {
            Some("and") => Formula::and(self.sentences(args)?),
            Some("or") => Formula::or(self.sentences(args)?),
            Some("not") => {
                let [s] = args else { return Err(syntax(e, "`not` takes exactly one sentence")) };
                Formula::not(self.required(s)?)
            }
            Some("if") => {
                let [a, b] = args else { return Err(syntax(e, "`if` takes exactly two sentences")) };
                Formula::implies(self.required(a)?, self.required(b)?)
            }
            Some("iff") => {
                let [a, b] = args else { return Err(syntax(e, "`iff` takes exactly two sentences")) };
                Formula::iff(self.required(a)?, self.required(b)?)
            }
            Some(q @ ("forall" | "exists")) => return self.quantified(e, q == "forall", args).map(Some),
            Some("=") => {
                let [a, b] = args else { return Err(syntax(e, "`=` takes exactly two terms")) };
                Formula::eq(self.term(a)?, self.term(b)?)
            }
            Some("cl:comment" | "cl-comment") => {
                return match args {
                    [Sexp::Name { quoted: true, .. }] => Ok(None),
                    [Sexp::Name { quoted: true, .. }, s] => self.sentence(s),
                    _ => Err(syntax(e, "malformed cl:comment")),
                };
            }
            Some(k @ ("cl:text" | "cl-text" | "cl:module" | "cl-module" | "cl:imports" | "cl-imports" | "cl:roleset" | "roleset:")) => {
                return Err(ClifError::BeyondFol(format!("{k} inside a sentence")));
            }
            _ => {
                let pred = self.name(first)?.to_string();
                if self.is_bound(&pred) {
                    return Err(ClifError::BeyondFol(format!("variable `{pred}` in predicate position")));
                }
                let terms = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                self.note_predicate(&pred, terms.len())?;
                Formula::Predicate(pred, terms)
            }
        };
        Ok(Some(f))
    }

    fn required(&mut self, e: &Sexp) -> Result<Formula, ClifError> {
        self.sentence(e)?.ok_or_else(|| syntax(e, "a comment is not a sentence"))
    }

    fn sentences(&mut self, items: &[Sexp]) -> Result<Vec<Formula>, ClifError> {
        items.iter().map(|s| self.required(s)).collect()
    }

    fn quantified(&mut self, e: &Sexp, universal: bool, args: &[Sexp]) -> Result<Formula, ClifError> {
        let [Sexp::List { items: decls, .. }, body] = args else {
            return Err(syntax(e, "quantifier needs a variable list and one body"));
        };
        if decls.is_empty() {
            return Err(syntax(e, "empty quantifier variable list"));
        }
        let mut vars = Vec::new();
        let mut guards = Vec::new();
        for d in decls {
            match d {
                Sexp::Name { .. } => vars.push(self.name(d)?.to_string()),
                // Restricted quantification: `(x Sort)`.
                Sexp::List { items, .. } => match items.as_slice() {
                    [v, sort] => {
                        let v = self.name(v)?.to_string();
                        let sort = self.name(sort)?.to_string();
                        self.note_predicate(&sort, 1)?;
                        guards.push(Formula::Predicate(sort, vec![Term::Variable(v.clone())]));
                        vars.push(v);
                    }
                    _ => return Err(syntax(d, "expected `name` or `(name Sort)`")),
                },
            }
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(syntax(e, format!("variable `{v}` bound twice")));
            }
        }
        let depth = self.bound.len();
        self.bound.extend(vars.iter().cloned());
        let body = self.required(body);
        self.bound.truncate(depth);
        let body = body?;
        Ok(if universal {
            let body = if guards.is_empty() { body } else { Formula::implies(Formula::and(guards), body) };
            Formula::Forall(vars, Box::new(body))
        } else {
            guards.push(body);
            Formula::Exists(vars, Box::new(Formula::and(guards)))
        })
    }

    fn term(&mut self, e: &Sexp) -> Result<Term, ClifError> {
        match e {
            Sexp::Name { .. } => {
                let name = self.name(e)?.to_string();
                Ok(if self.is_bound(&name) { Term::Variable(name) } else { Term::Constant(name) })
            }
            Sexp::List { items, .. } => {
                let Some(first) = items.first() else {
                    return Err(syntax(e, "empty term `()`"));
                };
                if first.head().is_some() || matches!(first, Sexp::List { .. }) {
                    return Err(ClifError::BeyondFol("compound term in function position".into()));
                }
                let f = self.name(first)?.to_string();
                if self.is_bound(&f) {
                    return Err(ClifError::BeyondFol(format!("variable `{f}` in function position")));
                }
                if items.len() == 1 {
                    return Err(syntax(e, format!("function `{f}` applied to no arguments")));
                }
                let args = items[1..].iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                self.note_function(&f, args.len())?;
                Ok(Term::Function(f, args))
            }
        }
    }
}

/// Parses CLIF text into one formula per top-level sentence.
pub fn parse_clif(text: &str) -> Result<Vec<Formula>, ClifError> {
    let mut conv = Converter { predicates: HashMap::new(), functions: HashMap::new(), bound: Vec::new() };
    let mut out = Vec::new();
    let mut queue: Vec<Sexp> = read_all(text)?;
    queue.reverse();
    while let Some(e) = queue.pop() {
        match e.head() {
            Some("cl:text" | "cl-text") => {
                let Sexp::List { mut items, .. } = e else { unreachable!() };
                items.remove(0);
                // An optional name precedes the body.
                if matches!(items.first(), Some(Sexp::Name { .. })) {
                    items.remove(0);
                }
                for item in items.into_iter().rev() {
                    queue.push(item);
                }
            }
            Some(k @ ("cl:module" | "cl-module" | "cl:imports" | "cl-imports")) => {
                return Err(ClifError::BeyondFol(k.to_string()));
            }
            _ => {
                if let Some(f) = conv.sentence(&e)? {
                    out.push(f);
                }
            }
        }
    }
    Ok(out)
}
