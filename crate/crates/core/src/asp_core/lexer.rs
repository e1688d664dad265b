use super::ast::Span;
use super::parser::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    Str,
    Directive(String),
    Dot,
    DotDot,
    Comma,
    Colon,
    If,
    WeakIf,
    Semi,
    Pipe,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    At,
    Plus,
    Minus,
    Star,
    Slash,
    Backslash,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) => format!("'{s}'"),
            Tok::Int(i) => format!("'{i}'"),
            Tok::Str => "string".to_string(),
            Tok::Directive(d) => format!("'#{d}'"),
            Tok::Eof => "end of input".to_string(),
            other => format!("'{}'", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Dot => ".",
            Tok::DotDot => "..",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::If => ":-",
            Tok::WeakIf => ":~",
            Tok::Semi => ";",
            Tok::Pipe => "|",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::At => "@",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Backslash => "\\",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut line_start = 0usize;

    macro_rules! span {
        ($start:expr, $end:expr, $line:expr, $ls:expr) => {
            Span {
                start: $start,
                end: $end,
                line: $line,
                col: ($start - $ls + 1) as u32,
            }
        };
    }

    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            i += 1;
            line += 1;
            line_start = i;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'%' {
            if bytes.get(i + 1) == Some(&b'*') {
                let (start, sl, sls) = (i, line, line_start);
                i += 2;
                loop {
                    if i + 1 >= bytes.len() {
                        return Err(ParseError::new(
                            ParseErrorKind::Syntax {
                                expected: "'*%' closing block comment".into(),
                                found: "end of input".into(),
                            },
                            span!(start, bytes.len(), sl, sls),
                        ));
                    }
                    if bytes[i] == b'*' && bytes[i + 1] == b'%' {
                        i += 2;
                        break;
                    }
                    if bytes[i] == b'\n' {
                        line += 1;
                        line_start = i + 1;
                    }
                    i += 1;
                }
            } else {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            continue;
        }

        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            let word = &src[start..i];
            if c.is_ascii_uppercase() || c == b'_' {
                Tok::Var(word.to_string())
            } else {
                Tok::Ident(word.to_string())
            }
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let text = &src[start..i];
            match text.parse::<i64>() {
                Ok(v) => Tok::Int(v),
                Err(_) => {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax {
                            expected: "integer in 64-bit range".into(),
                            found: format!("'{text}'"),
                        },
                        span!(start, i, line, line_start),
                    ))
                }
            }
        } else if c == b'#' {
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Directive(src[start + 1..i].to_string())
        } else if c == b'"' {
            i += 1;
            while i < bytes.len() && bytes[i] != b'"' {
                if bytes[i] == b'\\' {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'\n' {
                    line += 1;
                    line_start = i + 1;
                }
                i += 1;
            }
            i += 1;
            Tok::Str
        } else {
            let next = bytes.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                (b':', Some(b'-')) => (Tok::If, 2),
                (b':', Some(b'~')) => (Tok::WeakIf, 2),
                (b':', _) => (Tok::Colon, 1),
                (b'.', Some(b'.')) => (Tok::DotDot, 2),
                (b'.', _) => (Tok::Dot, 1),
                (b',', _) => (Tok::Comma, 1),
                (b';', _) => (Tok::Semi, 1),
                (b'|', _) => (Tok::Pipe, 1),
                (b'(', _) => (Tok::LParen, 1),
                (b')', _) => (Tok::RParen, 1),
                (b'{', _) => (Tok::LBrace, 1),
                (b'}', _) => (Tok::RBrace, 1),
                (b'[', _) => (Tok::LBracket, 1),
                (b']', _) => (Tok::RBracket, 1),
                (b'@', _) => (Tok::At, 1),
                (b'+', _) => (Tok::Plus, 1),
                (b'-', _) => (Tok::Minus, 1),
                (b'*', _) => (Tok::Star, 1),
                (b'/', _) => (Tok::Slash, 1),
                (b'\\', _) => (Tok::Backslash, 1),
                (b'!', Some(b'=')) => (Tok::Ne, 2),
                (b'<', Some(b'>')) => (Tok::Ne, 2),
                (b'<', Some(b'=')) => (Tok::Le, 2),
                (b'<', _) => (Tok::Lt, 1),
                (b'>', Some(b'=')) => (Tok::Ge, 2),
                (b'>', _) => (Tok::Gt, 1),
                (b'=', Some(b'=')) => (Tok::Eq, 2),
                (b'=', _) => (Tok::Eq, 1),
                _ => {
                    let ch = src[i..].chars().next().unwrap_or('?');
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax {
                            expected: "a token".into(),
                            found: format!("'{ch}'"),
                        },
                        span!(start, i + ch.len_utf8(), line, line_start),
                    ));
                }
            };
            i += len;
            tok
        };
        out.push(Token {
            tok,
            span: span!(start, i, line, line_start),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span!(bytes.len(), bytes.len(), line, line_start),
    });
    Ok(out)
}
