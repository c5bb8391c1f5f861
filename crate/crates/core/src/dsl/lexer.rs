use super::{DslError, ErrorKind, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(String),
    /// `L:` or `R:` written without a space.
    Tag(char),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    SemiSemi,
    Colon,
    Slash,
    Arrow,
    /// `-[`
    EdgeOpen,
    /// `]->`
    EdgeClose,
    Minus,
    Star,
    Plus,
    Dot,
    Bars,
    Eq,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Int(s) => format!("`{s}`"),
            Tok::Tag(c) => format!("`{c}:`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::SemiSemi => ";;",
            Tok::Colon => ":",
            Tok::Slash => "/",
            Tok::Arrow => "->",
            Tok::EdgeOpen => "-[",
            Tok::EdgeClose => "]->",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Plus => "+",
            Tok::Dot => ".",
            Tok::Bars => "||",
            Tok::Eq => "=",
            _ => "?",
        }
    }
}

pub fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let peek = |j: usize| chars.get(j).copied();
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if (word == "L" || word == "R") && peek(i) == Some(':') {
                i += 1;
                Tok::Tag(c)
            } else {
                Tok::Ident(word)
            }
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(chars[start..i].iter().collect())
        } else {
            let two = (c, peek(i + 1));
            let (tok, len) = match two {
                (';', Some(';')) => (Tok::SemiSemi, 2),
                ('|', Some('|')) => (Tok::Bars, 2),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('-', Some('[')) => (Tok::EdgeOpen, 2),
                (']', Some('-')) if peek(i + 2) == Some('>') => (Tok::EdgeClose, 3),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (',', _) => (Tok::Comma, 1),
                (';', _) => (Tok::Semi, 1),
                (':', _) => (Tok::Colon, 1),
                ('/', _) => (Tok::Slash, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('+', _) => (Tok::Plus, 1),
                ('.', _) => (Tok::Dot, 1),
                ('=', _) => (Tok::Eq, 1),
                _ => {
                    return Err(DslError::new(ErrorKind::Syntax, pos, format!("unexpected character `{c}`")));
                }
            };
            i += len;
            tok
        };
        col += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}
