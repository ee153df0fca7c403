use super::diagnostic::{Code, Diagnostic};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// `[A-Za-z0-9_]` runs, with interior `-` allowed when followed by an
    /// alphanumeric (taxon names such as `Event-driven`).
    Word(String),
    Colon,
    Comma,
    Arrow,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Newline,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of file".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn lex(text: &str, diags: &mut Vec<Diagnostic>) -> Vec<Token> {
    let mut out = Vec::new();
    for (li, raw) in text.split('\n').enumerate() {
        let line = li + 1;
        let chars: Vec<char> = raw.strip_suffix('\r').unwrap_or(raw).chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let single = match c {
                ':' => Some(Tok::Colon),
                ',' => Some(Tok::Comma),
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                '=' => Some(Tok::Eq),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Token { tok, line, col });
                i += 1;
            } else if c == '#' {
                break;
            } else if c == ' ' || c == '\t' {
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Token {
                    tok: Tok::Arrow,
                    line,
                    col,
                });
                i += 2;
            } else if is_word_char(c) {
                let start = i;
                while i < chars.len() {
                    let hyphen = chars[i] == '-'
                        && chars.get(i + 1).is_some_and(|n| n.is_ascii_alphanumeric());
                    if !(is_word_char(chars[i]) || hyphen) {
                        break;
                    }
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Word(chars[start..i].iter().collect()),
                    line,
                    col,
                });
            } else {
                diags.push(Diagnostic::new(
                    Code::UnexpectedChar,
                    line,
                    col,
                    format!("unexpected character `{c}`"),
                ));
                i += 1;
            }
        }
        out.push(Token {
            tok: Tok::Newline,
            line,
            col: chars.len() + 1,
        });
    }
    let (line, col) = out.last().map_or((1, 1), |t| (t.line, t.col));
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    out
}
