use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Nat(String),
    Decimal(String),
    Skip,
    If,
    Else,
    Observe,
    Bernoulli,
    Geometric,
    True,
    Assign,
    Semi,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Plus,
    Slash,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Bang,
    AndAnd,
    OrOr,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Nat(s) | Tok::Decimal(s) => return write!(f, "number `{s}`"),
            Tok::Skip => "`skip`",
            Tok::If => "`if`",
            Tok::Else => "`else`",
            Tok::Observe => "`observe`",
            Tok::Bernoulli => "`bernoulli`",
            Tok::Geometric => "`geometric`",
            Tok::True => "`true`",
            Tok::Assign => "`:=`",
            Tok::Semi => "`;`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Plus => "`+`",
            Tok::Slash => "`/`",
            Tok::Eq => "`=`",
            Tok::Ne => "`!=`",
            Tok::Lt => "`<`",
            Tok::Le => "`<=`",
            Tok::Gt => "`>`",
            Tok::Ge => "`>=`",
            Tok::Bang => "`!`",
            Tok::AndAnd => "`&&`",
            Tok::OrOr => "`||`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LexError {
    pub pos: Pos,
    pub found: char,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "skip" => Tok::Skip,
        "if" => Tok::If,
        "else" => Tok::Else,
        "observe" => Tok::Observe,
        "bernoulli" => Tok::Bernoulli,
        "geometric" => Tok::Geometric,
        "true" => Tok::True,
        _ => return None,
    })
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
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
        let tok = if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            keyword(&word).unwrap_or(Tok::Ident(word))
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Decimal(chars[start..i].iter().collect())
            } else {
                Tok::Nat(chars[start..i].iter().collect())
            }
        } else {
            let next = chars.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                (':', Some('=')) => (Tok::Assign, 2),
                ('!', Some('=')) => (Tok::Ne, 2),
                ('<', Some('=')) => (Tok::Le, 2),
                ('>', Some('=')) => (Tok::Ge, 2),
                ('&', Some('&')) => (Tok::AndAnd, 2),
                ('|', Some('|')) => (Tok::OrOr, 2),
                (';', _) => (Tok::Semi, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                ('+', _) => (Tok::Plus, 1),
                ('/', _) => (Tok::Slash, 1),
                ('=', _) => (Tok::Eq, 1),
                ('<', _) => (Tok::Lt, 1),
                ('>', _) => (Tok::Gt, 1),
                ('!', _) => (Tok::Bang, 1),
                _ => return Err(LexError { pos, found: c }),
            };
            i += len;
            tok
        };
        col += i - start;
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, column: col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn lexes_operators_and_numbers() {
        assert_eq!(
            toks("X := 0.25; x_1 != 3 # comment\n<= >= && || !"),
            vec![
                Tok::Ident("X".into()),
                Tok::Assign,
                Tok::Decimal("0.25".into()),
                Tok::Semi,
                Tok::Ident("x_1".into()),
                Tok::Ne,
                Tok::Nat("3".into()),
                Tok::Le,
                Tok::Ge,
                Tok::AndAnd,
                Tok::OrOr,
                Tok::Bang,
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn tracks_positions() {
        let t = tokenize("skip;\n  observe(X=1)").unwrap();
        assert_eq!(t[2].pos, Pos { line: 2, column: 3 });
        assert_eq!(t[4].pos, Pos { line: 2, column: 11 });
    }

    #[test]
    fn rejects_stray_characters() {
        let e = tokenize("X := 1 $").unwrap_err();
        assert_eq!(e.found, '$');
        assert_eq!(e.pos, Pos { line: 1, column: 8 });
    }
}
