use super::OwlError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    LParen,
    RParen,
    Equals,
    Carets,
    /// `<...>` with the brackets removed.
    FullIri(String),
    /// Keyword, number, or abbreviated IRI (anything containing `:`).
    Word(String),
    /// Decoded string literal contents.
    Str(String),
    /// Language tag without the `@`.
    Lang(String),
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | '"' | '<' | '>' | '=' | '^' | '@')
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, OwlError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    let err = |line, column, message: &str| OwlError::Syntax { line, column, message: message.to_string() };
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l, column: col });
        match c {
            c if c.is_whitespace() || c == '\u{feff}' => {
                bump!();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump!();
                }
            }
            '(' => {
                bump!();
                push(&mut out, Tok::LParen);
            }
            ')' => {
                bump!();
                push(&mut out, Tok::RParen);
            }
            '=' => {
                bump!();
                push(&mut out, Tok::Equals);
            }
            '^' => {
                bump!();
                if bump!() != Some('^') {
                    return Err(err(l, col, "expected `^^`"));
                }
                push(&mut out, Tok::Carets);
            }
            '<' => {
                bump!();
                let mut iri = String::new();
                loop {
                    match bump!() {
                        Some('>') => break,
                        Some(c) if c.is_whitespace() => return Err(err(l, col, "whitespace inside IRI")),
                        Some(c) => iri.push(c),
                        None => return Err(err(l, col, "unterminated IRI")),
                    }
                }
                if iri.is_empty() {
                    return Err(err(l, col, "empty IRI `<>`"));
                }
                push(&mut out, Tok::FullIri(iri));
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        Some('"') => break,
                        Some('\\') => match bump!() {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(err(line, column, "invalid escape in string literal")),
                        },
                        Some(c) => s.push(c),
                        None => return Err(err(l, col, "unterminated string literal")),
                    }
                }
                push(&mut out, Tok::Str(s));
            }
            '@' => {
                bump!();
                let mut tag = String::new();
                while chars.peek().is_some_and(|&c| c.is_ascii_alphanumeric() || c == '-') {
                    tag.push(bump!().unwrap());
                }
                if tag.is_empty() {
                    return Err(err(l, col, "empty language tag"));
                }
                push(&mut out, Tok::Lang(tag));
            }
            '>' => return Err(err(l, col, "unexpected `>`")),
            _ => {
                let mut word = String::new();
                while chars.peek().is_some_and(|&c| is_word_char(c)) {
                    word.push(bump!().unwrap());
                }
                push(&mut out, Tok::Word(word));
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, column });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn prefix_declaration() {
        assert_eq!(
            toks("Prefix(:=<http://x.org/>)"),
            vec![
                Tok::Word("Prefix".into()),
                Tok::LParen,
                Tok::Word(":".into()),
                Tok::Equals,
                Tok::FullIri("http://x.org/".into()),
                Tok::RParen,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn literals() {
        assert_eq!(
            toks(r#""a \"b\""^^xsd:string "c"@en-GB # trailing"#),
            vec![
                Tok::Str("a \"b\"".into()),
                Tok::Carets,
                Tok::Word("xsd:string".into()),
                Tok::Str("c".into()),
                Tok::Lang("en-GB".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions() {
        let t = tokenize("Ontology(\n  :a)").unwrap();
        assert_eq!((t[2].line, t[2].column), (2, 3));
        assert!(matches!(tokenize("\"open"), Err(OwlError::Syntax { .. })));
    }
}
