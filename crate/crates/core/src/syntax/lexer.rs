use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `~name`
    NegIdent(String),
    /// `#0`, `#rs`, `#absurd`
    PosLabel(String),
    /// `$0`, `$rs`
    NegLabel(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::NegIdent(s) => write!(f, "`~{s}`"),
            Tok::PosLabel(s) => write!(f, "`#{s}`"),
            Tok::NegLabel(s) => write!(f, "`${s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexError {
    pub line: usize,
    pub col: usize,
    pub found: char,
}

// longest first
const SYMBOLS: &[&str] = &[
    "true+", "true-", "false+", "false-", "&+", "&-", "|+", "|-", "=>", "::", ";", ":", ",", ".", "(", ")", "{", "}",
    "<", ">", "|", "?", "!",
];

fn word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn lex(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let take_word = |mut j: usize| {
        let start = j;
        while j < chars.len() && word_char(chars[j]) {
            j += 1;
        }
        (chars[start..j].iter().collect::<String>(), j)
    };
    while i < chars.len() {
        let c = chars[i];
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
        let next_is_word = chars.get(i + 1).is_some_and(|&n| n.is_ascii_alphanumeric());
        if c == '#' && !next_is_word {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tok, len) = if matches!(c, '#' | '$' | '~') && next_is_word {
            let (w, j) = take_word(i + 1);
            let tok = match c {
                '#' => Tok::PosLabel(w),
                '$' => Tok::NegLabel(w),
                _ => Tok::NegIdent(w),
            };
            (tok, j - i)
        } else if let Some(sym) = SYMBOLS.iter().find(|s| {
            let n = s.chars().count();
            chars[i..].iter().take(n).copied().eq(s.chars())
        }) {
            (Tok::Sym(sym), sym.chars().count())
        } else if word_char(c) {
            let (w, j) = take_word(i);
            (Tok::Ident(w), j - i)
        } else {
            return Err(LexError { line, col, found: c });
        };
        out.push(Token { tok, line, col });
        i += len;
        col += len;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
