//! Symbol and variable spelling for TPTP output.

use std::collections::{HashMap, HashSet};

/// TPTP `lower_word`: a lowercase letter followed by alphanumerics or `_`.
pub fn is_lower_word(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    }
}

/// TPTP `upper_word`, the lexical class of variables.
pub fn is_upper_word(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_uppercase() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    }
}

/// Single-quotes `name` unless it is already a bare lower word.
pub fn quote_symbol(name: &str) -> String {
    if is_lower_word(name) {
        return name.to_string();
    }
    let mut out = String::with_capacity(name.len() + 2);
    out.push('\'');
    for c in name.chars() {
        if c == '\'' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('\'');
    out
}

/// Base spelling of a symbol in mangled style, before collision suffixes:
/// lowercase first letter, every character outside `[a-zA-Z0-9_]` becomes
/// `_`, and a leading digit gets an `s_` prefix.
pub fn mangle_base(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if let Some(first) = out.chars().next() {
        if first.is_ascii_uppercase() {
            let lower = first.to_ascii_lowercase();
            out.replace_range(..1, lower.encode_utf8(&mut [0; 4]));
        }
    }
    match out.chars().next() {
        None => "s_".to_string(),
        Some(c) if c.is_ascii_digit() => format!("s_{out}"),
        // `_foo` is not a lower word either.
        Some('_') => format!("s{out}"),
        Some(_) => out,
    }
}

/// Deterministic original→mangled table. Collisions get `_2`, `_3`, …
/// suffixes in first-seen order.
#[derive(Clone, Debug, Default)]
pub struct Mangler {
    assigned: HashMap<String, String>,
    used: HashSet<String>,
}

impl Mangler {
    pub fn new() -> Self {
        Self::default()
    }

    /// Marks a spelling as taken without binding it to any original name.
    pub fn reserve(&mut self, spelling: impl Into<String>) {
        self.used.insert(spelling.into());
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.assigned.get(name).map(String::as_str)
    }

    pub fn mangle(&mut self, name: &str) -> String {
        if let Some(done) = self.assigned.get(name) {
            return done.clone();
        }
        let base = mangle_base(name);
        let spelling = unique_spelling(&base, |s| self.used.contains(s));
        self.used.insert(spelling.clone());
        self.assigned.insert(name.to_string(), spelling.clone());
        spelling
    }
}

/// `base` itself when free, else the first free `base_2`, `base_3`, ….
pub fn unique_spelling(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (2..)
        .map(|n| format!("{base}_{n}"))
        .find(|candidate| !taken(candidate))
        .expect("unbounded suffix search")
}

/// Spelling of a variable as a TPTP upper word.
pub fn variable_base(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    match out.chars().next() {
        Some(c) if c.is_ascii_lowercase() => {
            let upper = c.to_ascii_uppercase();
            out.replace_range(..1, upper.encode_utf8(&mut [0; 4]));
            out
        }
        Some(c) if c.is_ascii_uppercase() => out,
        _ => format!("V{out}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_words() {
        assert!(is_lower_word("p"));
        assert!(is_lower_word("proper_part_of2"));
        assert!(!is_lower_word("Proper"));
        assert!(!is_lower_word("proper part"));
        assert!(!is_lower_word(""));
    }

    #[test]
    fn quoting_escapes_quotes_and_backslashes() {
        assert_eq!(quote_symbol("p"), "p");
        assert_eq!(quote_symbol("proper part of"), "'proper part of'");
        assert_eq!(quote_symbol("it's"), "'it\\'s'");
        assert_eq!(quote_symbol("a\\b"), "'a\\\\b'");
    }

    #[test]
    fn mangle_rules() {
        assert_eq!(mangle_base("Fish"), "fish");
        assert_eq!(mangle_base("proper part of"), "proper_part_of");
        assert_eq!(mangle_base("<http://x.org/A>"), "s_http___x_org_A_");
        assert_eq!(mangle_base("2nd"), "s_2nd");
        assert_eq!(mangle_base(""), "s_");
    }

    #[test]
    fn collisions_are_suffixed_in_first_seen_order() {
        let mut m = Mangler::new();
        assert_eq!(m.mangle("Fish"), "fish");
        assert_eq!(m.mangle("fish"), "fish_2");
        assert_eq!(m.mangle("FISH?"), "fISH_");
        assert_eq!(m.mangle("fish!"), "fish_");
        assert_eq!(m.mangle("fish "), "fish__2");
        assert_eq!(m.mangle("Fish"), "fish");
    }

    #[test]
    fn variables_become_upper_words() {
        assert_eq!(variable_base("x"), "X");
        assert_eq!(variable_base("X1"), "X1");
        assert_eq!(variable_base("_tmp"), "V_tmp");
        assert_eq!(variable_base("1"), "V1");
    }
}
