use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Var(String),
    Name(String),
    Quoted(String),
    Int(i64),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Slash,
    End,
    Amp,
    Question,
    Neck,
    Eq,
    Le,
    Lt,
    Ge,
    Gt,
    Plus,
    Minus,
    Star,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Var(v) => format!("variable `{}`", v),
            Tok::Name(n) => format!("`{}`", n),
            Tok::Quoted(q) => format!("'{}'", q),
            Tok::Int(i) => format!("integer {}", i),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Slash => "`/`".into(),
            Tok::End => "`.`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Question => "`?`".into(),
            Tok::Neck => "`:-`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Le => "`=<`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! advance {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance!();
            }
            continue;
        }
        let (tline, tcol) = (line, col);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: tline,
                col: tcol,
            })
        };
        let peek = |k: usize| chars.get(i + k).copied();

        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance!();
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<i64>().map_err(|_| SyntaxError {
                line: tline,
                col: tcol,
                message: format!("integer literal {} out of range", s),
            })?;
            push(&mut out, Tok::Int(n));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                advance!();
            }
            let s: String = chars[start..i].iter().collect();
            let tok = if c.is_uppercase() || c == '_' {
                Tok::Var(s)
            } else {
                Tok::Name(s)
            };
            push(&mut out, tok);
            continue;
        }
        if c == '\'' {
            advance!();
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None => {
                        return Err(SyntaxError {
                            line: tline,
                            col: tcol,
                            message: "unterminated quoted atom".into(),
                        })
                    }
                    Some('\\') if i + 1 < chars.len() => {
                        advance!();
                        s.push(chars[i]);
                        advance!();
                    }
                    Some('\'') => {
                        advance!();
                        if chars.get(i) == Some(&'\'') {
                            s.push('\'');
                            advance!();
                        } else {
                            break;
                        }
                    }
                    Some(&ch) => {
                        s.push(ch);
                        advance!();
                    }
                }
            }
            push(&mut out, Tok::Quoted(s));
            continue;
        }
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBrack, 1),
            ']' => (Tok::RBrack, 1),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            ',' => (Tok::Comma, 1),
            '/' => (Tok::Slash, 1),
            '&' => (Tok::Amp, 1),
            '?' => (Tok::Question, 1),
            '+' => (Tok::Plus, 1),
            '-' => (Tok::Minus, 1),
            '*' => (Tok::Star, 1),
            '.' => (Tok::End, 1),
            ':' if peek(1) == Some('-') => (Tok::Neck, 2),
            '=' if peek(1) == Some('<') => (Tok::Le, 2),
            '=' => (Tok::Eq, 1),
            '<' if peek(1) == Some('=') => (Tok::Le, 2),
            '<' => (Tok::Lt, 1),
            '>' if peek(1) == Some('=') => (Tok::Ge, 2),
            '>' => (Tok::Gt, 1),
            other => {
                return Err(SyntaxError {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character `{}`", other),
                })
            }
        };
        for _ in 0..len {
            advance!();
        }
        push(&mut out, tok);
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}
