use std::fmt;

use num_traits::{One, Zero};

use super::ast::{Program, Rhs, Stmt};
use super::lexer::{tokenize, Pos, Tok, Token};
use crate::automata::VarId;
use crate::guard::{Cmp, Guard};
use crate::rational::{parse_decimal, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: expected {}, found {found}", fmt_expected(.expected))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("semantic error at line {line}, column {column}: {message}")]
    Semantic {
        line: usize,
        column: usize,
        message: String,
    },
}

impl ParseError {
    pub fn location(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. } | ParseError::Semantic { line, column, .. } => {
                (*line, *column)
            }
        }
    }
}

fn fmt_expected(expected: &[String]) -> String {
    match expected {
        [] => "nothing".into(),
        [one] => one.clone(),
        _ => format!("one of {}", expected.join(", ")),
    }
}

/// Parses a complete program.
pub fn parse(source: &str) -> Result<Program, ParseError> {
    let tokens = tokenize(source).map_err(|e| ParseError::Syntax {
        line: e.pos.line,
        column: e.pos.column,
        expected: vec!["a token".into()],
        found: format!("`{}`", e.found),
    })?;
    let mut p = Parser { tokens, at: 0 };
    let prog = p.program()?;
    p.expect(Tok::Eof)?;
    Ok(prog)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

const STMT_START: &[&str] = &["`skip`", "identifier", "`if`", "`observe`"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let pos = self.pos();
        Err(ParseError::Syntax {
            line: pos.line,
            column: pos.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn semantic<T>(pos: Pos, message: String) -> Result<T, ParseError> {
        Err(ParseError::Semantic {
            line: pos.line,
            column: pos.column,
            message,
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            self.error(&[&tok.to_string()])
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut stmts = vec![self.stmt()?];
        while *self.peek() == Tok::Semi {
            self.bump();
            if matches!(self.peek(), Tok::Eof | Tok::RBrace) {
                break;
            }
            stmts.push(self.stmt()?);
        }
        Ok(Program { stmts })
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        match self.peek().clone() {
            Tok::Skip => {
                self.bump();
                Ok(Stmt::Skip)
            }
            Tok::Ident(name) => {
                self.bump();
                self.expect(Tok::Assign)?;
                let rhs = self.rhs()?;
                Ok(Stmt::Assign(VarId::from(name), rhs))
            }
            Tok::If => {
                self.bump();
                self.expect(Tok::LParen)?;
                let g = self.guard()?;
                self.expect(Tok::RParen)?;
                let then = self.block()?;
                self.expect(Tok::Else)?;
                let otherwise = self.block()?;
                Ok(Stmt::IfElse(g, then, otherwise))
            }
            Tok::Observe => {
                self.bump();
                self.expect(Tok::LParen)?;
                let g = self.guard()?;
                self.expect(Tok::RParen)?;
                Ok(Stmt::Observe(g))
            }
            _ => self.error(STMT_START),
        }
    }

    fn block(&mut self) -> Result<Program, ParseError> {
        self.expect(Tok::LBrace)?;
        let p = self.program()?;
        self.expect(Tok::RBrace)?;
        Ok(p)
    }

    fn rhs(&mut self) -> Result<Rhs, ParseError> {
        match self.peek().clone() {
            Tok::Nat(_) => Ok(Rhs::Const(self.nat()?)),
            Tok::Ident(name) => {
                self.bump();
                let y = VarId::from(name);
                if *self.peek() == Tok::Plus {
                    self.bump();
                    Ok(Rhs::VarPlus(y, self.nat()?))
                } else {
                    Ok(Rhs::Var(y))
                }
            }
            Tok::Bernoulli | Tok::Geometric => {
                let geometric = *self.peek() == Tok::Geometric;
                self.bump();
                self.expect(Tok::LParen)?;
                let pos = self.pos();
                let p = self.prob()?;
                self.expect(Tok::RParen)?;
                if geometric {
                    if p >= Rational::one() {
                        return Self::semantic(pos, format!("geometric parameter {p} must be below 1"));
                    }
                    Ok(Rhs::Geometric(p))
                } else {
                    Ok(Rhs::Bernoulli(p))
                }
            }
            _ => self.error(&["number", "identifier", "`bernoulli`", "`geometric`"]),
        }
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Nat(digits) => {
                self.bump();
                digits
                    .parse::<u64>()
                    .or_else(|_| Self::semantic(pos, format!("constant {digits} is too large")))
            }
            _ => self.error(&["natural number"]),
        }
    }

    /// `nat "/" nat` or a decimal literal, required to lie in [0, 1].
    fn prob(&mut self) -> Result<Rational, ParseError> {
        let pos = self.pos();
        let value = match self.peek().clone() {
            Tok::Decimal(text) => {
                self.bump();
                parse_decimal(&text).expect("lexer only produces well-formed decimals")
            }
            Tok::Nat(digits) => {
                self.bump();
                let num = digits
                    .parse::<num_bigint::BigInt>()
                    .expect("lexer only produces digits");
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let den_pos = self.pos();
                    let den = match self.peek().clone() {
                        Tok::Nat(d) => {
                            self.bump();
                            d.parse::<num_bigint::BigInt>().expect("lexer only produces digits")
                        }
                        _ => return self.error(&["natural number"]),
                    };
                    if den.is_zero() {
                        return Self::semantic(den_pos, "division by zero in probability".into());
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                }
            }
            _ => return self.error(&["probability"]),
        };
        if value > Rational::one() {
            return Self::semantic(pos, format!("probability {value} is greater than 1"));
        }
        Ok(value)
    }

    fn guard(&mut self) -> Result<Guard, ParseError> {
        let mut g = self.conj()?;
        while *self.peek() == Tok::OrOr {
            self.bump();
            g = g.or(self.conj()?);
        }
        Ok(g)
    }

    fn conj(&mut self) -> Result<Guard, ParseError> {
        let mut g = self.atom()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            g = g.and(self.atom()?);
        }
        Ok(g)
    }

    fn atom(&mut self) -> Result<Guard, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(self.atom()?.negate())
            }
            Tok::LParen => {
                self.bump();
                let g = self.guard()?;
                self.expect(Tok::RParen)?;
                Ok(g)
            }
            Tok::True => {
                self.bump();
                Ok(Guard::True)
            }
            Tok::Ident(name) => {
                self.bump();
                let cmp = match self.peek() {
                    Tok::Eq => Cmp::Eq,
                    Tok::Ne => Cmp::Ne,
                    Tok::Lt => Cmp::Lt,
                    Tok::Le => Cmp::Le,
                    Tok::Gt => Cmp::Gt,
                    Tok::Ge => Cmp::Ge,
                    _ => return self.error(&["`=`", "`!=`", "`<`", "`<=`", "`>`", "`>=`"]),
                };
                self.bump();
                let c = match self.peek() {
                    Tok::Nat(_) => self.nat()?,
                    // Comparing two variables is outside the rectangular fragment.
                    _ => return self.error(&["natural number"]),
                };
                Ok(Guard::Atom(VarId::from(name), cmp, c))
            }
            _ => self.error(&["`!`", "`(`", "`true`", "identifier"]),
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::free_vars;
    use crate::rational::{int, rat};

    const PIRANHA: &str = "P := bernoulli(1/2);
if (P = 1) {
    R := 1
} else {
    R := bernoulli(1/2)
};
observe(R = 1)";

    #[test]
    fn parses_piranha() {
        let p = parse(PIRANHA).unwrap();
        let pv = VarId::from("P");
        let rv = VarId::from("R");
        assert_eq!(
            p.stmts,
            vec![
                Stmt::Assign(pv.clone(), Rhs::Bernoulli(rat(1, 2))),
                Stmt::IfElse(
                    Guard::Atom(pv.clone(), Cmp::Eq, 1),
                    Program::new(vec![Stmt::Assign(rv.clone(), Rhs::Const(1))]),
                    Program::new(vec![Stmt::Assign(rv.clone(), Rhs::Bernoulli(rat(1, 2)))]),
                ),
                Stmt::Observe(Guard::Atom(rv.clone(), Cmp::Eq, 1)),
            ]
        );
        let names: Vec<_> = free_vars(&p).into_iter().map(|v| v.to_string()).collect();
        assert_eq!(names, vec!["P", "R"]);
    }

    #[test]
    fn minimal_programs() {
        assert_eq!(
            parse("X := 0").unwrap().stmts,
            vec![Stmt::Assign(VarId::from("X"), Rhs::Const(0))]
        );
        assert!(free_vars(&parse("skip").unwrap()).is_empty());
        assert_eq!(free_vars(&parse("X := Y").unwrap()).len(), 2);
        assert_eq!(parse("skip;").unwrap().stmts, vec![Stmt::Skip]);
    }

    #[test]
    fn probability_literals_are_exact() {
        let p = parse("X := bernoulli(0.25); Y := geometric(2/6); Z := bernoulli(1)").unwrap();
        assert_eq!(p.stmts[0], Stmt::Assign(VarId::from("X"), Rhs::Bernoulli(rat(1, 4))));
        assert_eq!(p.stmts[1], Stmt::Assign(VarId::from("Y"), Rhs::Geometric(rat(1, 3))));
        assert_eq!(p.stmts[2], Stmt::Assign(VarId::from("Z"), Rhs::Bernoulli(int(1))));
    }

    #[test]
    fn semantic_errors() {
        let e = parse("X := bernoulli(3/2)").unwrap_err();
        assert!(matches!(e, ParseError::Semantic { line: 1, column: 16, .. }), "{e}");
        assert!(matches!(parse("X := geometric(1)"), Err(ParseError::Semantic { .. })));
        assert!(matches!(parse("X := bernoulli(1.5)"), Err(ParseError::Semantic { .. })));
        assert!(matches!(parse("X := bernoulli(1/0)"), Err(ParseError::Semantic { .. })));
        assert!(matches!(parse("X := 99999999999999999999999"), Err(ParseError::Semantic { .. })));
    }

    #[test]
    fn syntax_errors_carry_location_and_expectations() {
        let e = parse("X := 1;\nobserve(X == 1)").unwrap_err();
        match e {
            ParseError::Syntax { line, column, expected, .. } => {
                assert_eq!((line, column), (2, 12));
                assert_eq!(expected, vec!["natural number"]);
            }
            other => panic!("unexpected {other}"),
        }
        assert!(matches!(parse(""), Err(ParseError::Syntax { line: 1, column: 1, .. })));
        assert!(matches!(parse("if (X = 1) { skip }"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("observe(X = Y)"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("while (true) { skip }"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("X := 1 Y := 2"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("X := 1 @"), Err(ParseError::Syntax { line: 1, column: 8, .. })));
    }

    #[test]
    fn guard_precedence() {
        let p = parse("observe(!X = 1 || Y > 2 && (Z <= 3 || true))").unwrap();
        let expect = Guard::atom("X", Cmp::Eq, 1).negate().or(Guard::atom("Y", Cmp::Gt, 2)
            .and(Guard::atom("Z", Cmp::Le, 3).or(Guard::True)));
        assert_eq!(p.stmts, vec![Stmt::Observe(expect)]);
    }

    #[test]
    fn pretty_print_round_trip() {
        let src = "X := geometric(0.5); Y := X + 2; if (X > 1 && !(Y = 3 || Y = 4)) { Z := Y; observe(Z != 0) } else { skip; Z := bernoulli(1/3) }";
        let p = parse(src).unwrap();
        assert_eq!(parse(&p.to_string()).unwrap(), p);
    }
}
