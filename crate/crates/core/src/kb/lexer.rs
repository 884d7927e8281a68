use super::{ParseError, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Number(String),
    Section(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Colon,
    Slash,
    Tilde,
    Caret,
    StrictArrow,
    DefeasibleArrow,
    NotEqual,
    PlusMinus,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Section(s) => format!("section `#{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Caret => "`^`".into(),
            Tok::StrictArrow => "`<-`".into(),
            Tok::DefeasibleArrow => "`-<`".into(),
            Tok::NotEqual => "`!=`".into(),
            Tok::PlusMinus => "`+-`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub(crate) fn error_at(source: &str, span: Span, message: impl Into<String>) -> ParseError {
    let snippet = source
        .lines()
        .nth(span.line.saturating_sub(1))
        .unwrap_or("")
        .to_string();
    ParseError {
        line: span.line,
        column: span.column,
        message: message.into(),
        snippet,
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut out: Vec<Token> = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, column: col };
        let next = chars.get(i + 1).copied();
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };

        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }

        let fixed = match (c, next) {
            ('<', Some('-')) => Some((Tok::StrictArrow, 2)),
            ('-', Some('<')) => Some((Tok::DefeasibleArrow, 2)),
            ('!', Some('=')) => Some((Tok::NotEqual, 2)),
            ('+', Some('-')) => Some((Tok::PlusMinus, 2)),
            ('(', _) => Some((Tok::LParen, 1)),
            (')', _) => Some((Tok::RParen, 1)),
            ('{', _) => Some((Tok::LBrace, 1)),
            ('}', _) => Some((Tok::RBrace, 1)),
            (',', _) => Some((Tok::Comma, 1)),
            (':', _) => Some((Tok::Colon, 1)),
            ('/', _) => Some((Tok::Slash, 1)),
            ('~', _) => Some((Tok::Tilde, 1)),
            ('^', _) => Some((Tok::Caret, 1)),
            _ => None,
        };
        if let Some((tok, n)) = fixed {
            out.push(Token { tok, span });
            advance(n, &mut i, &mut col);
            continue;
        }

        // A leading-dot decimal such as `.5` is only a number where a
        // probability is expected.
        let number_context = matches!(
            out.last().map(|t| &t.tok),
            Some(Tok::Colon | Tok::PlusMinus | Tok::Slash)
        );
        let starts_number = c.is_ascii_digit()
            || (c == '.' && number_context && next.is_some_and(|d| d.is_ascii_digit()));
        if starts_number {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Number(text),
                span,
            });
            continue;
        }

        if c == '.' {
            out.push(Token {
                tok: Tok::Dot,
                span,
            });
            advance(1, &mut i, &mut col);
            continue;
        }

        if c == '#' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && is_ident_char(chars[j]) {
                j += 1;
            }
            if j == start {
                return Err(error_at(source, span, "expected a section name after `#`"));
            }
            let name: String = chars[start..j].iter().collect();
            col += j - i;
            i = j;
            out.push(Token {
                tok: Tok::Section(name),
                span,
            });
            continue;
        }

        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(text),
                span,
            });
            continue;
        }

        return Err(error_at(
            source,
            span,
            format!("unexpected character `{c}`"),
        ));
    }
    Ok(out)
}
