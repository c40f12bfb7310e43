//! Line-oriented lexing shared by the `.mq`, `.slq` and fixture readers.

use crate::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Num(String),
    Tensor,
    Arrow,
    Sym(char),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Num(s) => format!("'{s}'"),
            Tok::Tensor => "'(x)'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::Sym(c) => format!("'{c}'"),
        }
    }
}

/// Tokens of one line with 1-based columns.
pub(crate) struct Cursor {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl Cursor {
    /// `col0` is the column of the first character of `text` in its line.
    pub(crate) fn new(text: &str, line: usize, col0: usize) -> Result<Self, ParseError> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            let col = col0 + k;
            if c.is_whitespace() {
                k += 1;
            } else if is_ident_start(c) {
                let st = k;
                while k < chars.len() && is_ident_char(chars[k]) {
                    k += 1;
                }
                toks.push((Tok::Ident(chars[st..k].iter().collect()), col));
            } else if c.is_ascii_digit() {
                let st = k;
                while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                    k += 1;
                }
                // Digits followed by letters form a basis token such as `1` or an
                // identifier-like name; a fraction is `digits/digits`.
                if k + 1 < chars.len() && chars[k] == '/' && chars[k + 1].is_ascii_digit() {
                    k += 1;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                }
                toks.push((Tok::Num(chars[st..k].iter().collect()), col));
            } else if c == '(' && chars.get(k + 1) == Some(&'x') && chars.get(k + 2) == Some(&')') {
                toks.push((Tok::Tensor, col));
                k += 3;
            } else if c == '-' && chars.get(k + 1) == Some(&'>') {
                toks.push((Tok::Arrow, col));
                k += 2;
            } else if "[](){}+-*.:,=/^|".contains(c) {
                toks.push((Tok::Sym(c), col));
                k += 1;
            } else {
                return Err(ParseError::new(line, col, format!("unexpected character '{c}'")));
            }
        }
        Ok(Cursor { toks, pos: 0, line, end_col: col0 + chars.len() })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub(crate) fn peek_at(&self, ahead: usize) -> Option<&Tok> {
        self.toks.get(self.pos + ahead).map(|(t, _)| t)
    }

    pub(crate) fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    pub(crate) fn line(&self) -> usize {
        self.line
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of line")),
        }
    }

    pub(crate) fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    pub(crate) fn expect_tok(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    /// A name; numeric-looking words count too, so basis token `1` is accepted.
    pub(crate) fn word(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Ident(s)) | Some(Tok::Num(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, col))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    pub(crate) fn ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, col))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }
}

/// Strips a `#` comment and returns the trimmed content and its start column.
pub(crate) fn content(raw: &str) -> (&str, usize) {
    let body = raw.split('#').next().unwrap_or("");
    let lead = body.len() - body.trim_start().len();
    (body.trim(), lead + 1)
}
