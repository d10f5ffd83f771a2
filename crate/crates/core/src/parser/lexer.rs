use crate::error::{Error, Result, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lowercase- or digit-initial name.
    Ident(String),
    /// Uppercase- or underscore-initial name.
    Var(String),
    /// `#`-prefixed generated name.
    Reserved(String),
    Quoted(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    ColonDash,
    Colon,
    Bar,
    Amp,
    Tilde,
    Eq,
    Neq,
    FatArrow,
    Arrow,
    Iff,
    Minus,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Reserved(s) => format!("`{s}`"),
            Tok::Quoted(s) => format!("\"{s}\""),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", punct_text(other)),
        }
    }
}

fn punct_text(t: &Tok) -> &'static str {
    match t {
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBrack => "[",
        Tok::RBrack => "]",
        Tok::Comma => ",",
        Tok::Dot => ".",
        Tok::ColonDash => ":-",
        Tok::Colon => ":",
        Tok::Bar => "|",
        Tok::Amp => "&",
        Tok::Tilde => "~",
        Tok::Eq => "=",
        Tok::Neq => "!=",
        Tok::FatArrow => "=>",
        Tok::Arrow => "->",
        Tok::Iff => "<->",
        Tok::Minus => "-",
        _ => "?",
    }
}

pub fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(src: &str) -> Result<Vec<(Tok, SourceSpan)>> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    let mut line = 1;
    let mut line_start = 0;
    let span = |start: usize, end: usize, line: usize, line_start: usize| SourceSpan {
        start,
        end,
        line,
        column: start - line_start + 1,
    };
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        if c == '\n' {
            line += 1;
            line_start = pos + 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '%' {
            while i < bytes.len() && bytes[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let start = pos;
        let next = bytes.get(i + 1).map(|b| b.1);
        let next2 = bytes.get(i + 2).map(|b| b.1);
        let (tok, len) = if c.is_ascii_alphanumeric() || c == '_' || c == '#' {
            let mut j = i + 1;
            while j < bytes.len() && is_name_char(bytes[j].1) {
                j += 1;
            }
            let end = bytes.get(j).map(|b| b.0).unwrap_or(src.len());
            let text = src[start..end].to_string();
            let tok = if c == '#' {
                if text.len() == 1 {
                    return Err(Error::Parse {
                        message: "`#` must be followed by a name".into(),
                        span: span(start, end, line, line_start),
                    });
                }
                Tok::Reserved(text)
            } else if c.is_ascii_uppercase() || c == '_' {
                Tok::Var(text)
            } else {
                Tok::Ident(text)
            };
            (tok, j - i)
        } else if c == '"' {
            let mut j = i + 1;
            let mut text = String::new();
            loop {
                match bytes.get(j) {
                    None => {
                        return Err(Error::Parse {
                            message: "unterminated string".into(),
                            span: span(start, src.len(), line, line_start),
                        })
                    }
                    Some((_, '"')) => break,
                    Some((_, '\\')) => {
                        if let Some((_, e)) = bytes.get(j + 1) {
                            text.push(*e);
                        }
                        j += 2;
                    }
                    Some((_, '\n')) => {
                        return Err(Error::Parse {
                            message: "newline in string".into(),
                            span: span(start, bytes[j].0, line, line_start),
                        })
                    }
                    Some((_, ch)) => {
                        text.push(*ch);
                        j += 1;
                    }
                }
            }
            (Tok::Quoted(text), j + 1 - i)
        } else {
            match (c, next, next2) {
                ('<', Some('-'), Some('>')) => (Tok::Iff, 3),
                (':', Some('-'), _) => (Tok::ColonDash, 2),
                ('=', Some('>'), _) => (Tok::FatArrow, 2),
                ('-', Some('>'), _) => (Tok::Arrow, 2),
                ('!', Some('='), _) => (Tok::Neq, 2),
                ('(', _, _) => (Tok::LParen, 1),
                (')', _, _) => (Tok::RParen, 1),
                ('[', _, _) => (Tok::LBrack, 1),
                (']', _, _) => (Tok::RBrack, 1),
                (',', _, _) => (Tok::Comma, 1),
                ('.', _, _) => (Tok::Dot, 1),
                (':', _, _) => (Tok::Colon, 1),
                ('|', _, _) => (Tok::Bar, 1),
                ('&', _, _) => (Tok::Amp, 1),
                ('~', _, _) => (Tok::Tilde, 1),
                ('=', _, _) => (Tok::Eq, 1),
                ('-', _, _) => (Tok::Minus, 1),
                _ => {
                    return Err(Error::Parse {
                        message: format!("unexpected character `{c}`"),
                        span: span(start, start + c.len_utf8(), line, line_start),
                    })
                }
            }
        };
        let end = bytes.get(i + len).map(|b| b.0).unwrap_or(src.len());
        out.push((tok, span(start, end, line, line_start)));
        i += len;
    }
    out.push((Tok::Eof, span(src.len(), src.len(), line, line_start)));
    Ok(out)
}

/// Shared cursor over a token stream.
pub struct Cursor {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Cursor> {
        Ok(Cursor { toks: tokenize(src)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    pub fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    pub fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) | Tok::Var(s) if s == w)
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`, found {}", punct_text(t), self.peek().describe())))
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { message: message.into(), span: self.span() }
    }

    pub fn error_at(&self, span: SourceSpan, message: impl Into<String>) -> Error {
        Error::Parse { message: message.into(), span }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_operators() {
        let toks: Vec<Tok> = tokenize("a :- b, X != Y, forall Z (c(Z) => d). % c\n<-> -> -x")
            .unwrap()
            .into_iter()
            .map(|t| t.0)
            .collect();
        assert!(toks.contains(&Tok::Neq));
        assert!(toks.contains(&Tok::FatArrow));
        assert!(toks.contains(&Tok::Iff));
        assert!(toks.contains(&Tok::Arrow));
        assert!(toks.contains(&Tok::Minus));
        assert_eq!(toks.last(), Some(&Tok::Eof));
    }

    #[test]
    fn spans_track_lines() {
        let toks = tokenize("a.\n  b.").unwrap();
        assert_eq!(toks[2].1.line, 2);
        assert_eq!(toks[2].1.column, 3);
    }
}
