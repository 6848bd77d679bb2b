use crate::error::{Error, Result};
use crate::io::SymbolTable;
use crate::poly::{Polynomial, VarId};

/// Parses `expr := ['+'|'-'] term (('+'|'-') term)*` where a term is an
/// integer, an `integer '*' varprod`, or a bare `varprod`.
pub fn parse(text: &str) -> Result<(Polynomial, SymbolTable)> {
    let mut table = SymbolTable::new();
    let p = parse_into(text, &mut table)?;
    Ok((p, table))
}

/// Like [`parse`], resolving names against an existing table and
/// registering new ones after its current entries.
pub fn parse_into(text: &str, table: &mut SymbolTable) -> Result<Polynomial> {
    let raw = Parser::new(text).expr(table)?;
    Polynomial::canonicalize(raw)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Invalid(char),
}

struct Parser {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

impl Parser {
    fn new(text: &str) -> Self {
        let mut tokens = Vec::new();
        let (mut line, mut col) = (1usize, 1usize);
        let mut chars = text.chars().peekable();
        while let Some(&ch) = chars.peek() {
            let start = (line, col);
            if ch == '\n' {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            if ch.is_whitespace() {
                chars.next();
                col += 1;
                continue;
            }
            let tok = match ch {
                '+' => Token::Plus,
                '-' => Token::Minus,
                '*' => Token::Star,
                c if c.is_ascii_digit() => {
                    let mut s = String::new();
                    while let Some(&d) = chars.peek() {
                        if !d.is_ascii_digit() {
                            break;
                        }
                        s.push(d);
                        chars.next();
                        col += 1;
                    }
                    tokens.push((Token::Int(s), start.0, start.1));
                    continue;
                }
                c if c.is_ascii_alphabetic() => {
                    let mut s = String::new();
                    while let Some(&d) = chars.peek() {
                        if !(d.is_ascii_alphanumeric() || d == '_') {
                            break;
                        }
                        s.push(d);
                        chars.next();
                        col += 1;
                    }
                    tokens.push((Token::Ident(s), start.0, start.1));
                    continue;
                }
                other => {
                    tokens.push((Token::Invalid(other), start.0, start.1));
                    break;
                }
            };
            chars.next();
            col += 1;
            tokens.push((tok, start.0, start.1));
        }
        Parser {
            tokens,
            pos: 0,
            end: (line, col),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map_or(self.end, |&(_, l, c)| (l, c))
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (l, c) = self.here();
        match self.peek() {
            Some(Token::Invalid(ch)) => syntax(l, c, format!("unexpected character '{ch}'")),
            _ => syntax(l, c, message),
        }
    }

    fn expr(&mut self, table: &mut SymbolTable) -> Result<Vec<(i64, Vec<VarId>)>> {
        let mut out = Vec::new();
        let mut negative = match self.peek() {
            Some(Token::Plus) => {
                self.pos += 1;
                false
            }
            Some(Token::Minus) => {
                self.pos += 1;
                true
            }
            Some(_) => false,
            None => return Err(self.error("empty expression")),
        };
        loop {
            let (coeff, vars) = self.term(table)?;
            out.push((if negative { -coeff } else { coeff }, vars));
            match self.peek() {
                None => break,
                Some(Token::Plus) => negative = false,
                Some(Token::Minus) => negative = true,
                Some(_) => return Err(self.error("expected '+' or '-'")),
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self, table: &mut SymbolTable) -> Result<(i64, Vec<VarId>)> {
        match self.peek().cloned() {
            Some(Token::Int(digits)) => {
                let (l, c) = self.here();
                let value: i64 = digits
                    .parse()
                    .map_err(|_| syntax(l, c, format!("integer literal {digits} overflows")))?;
                self.pos += 1;
                if self.peek() == Some(&Token::Star) {
                    self.pos += 1;
                    Ok((value, self.varprod(table)?))
                } else {
                    Ok((value, Vec::new()))
                }
            }
            Some(Token::Ident(_)) => Ok((1, self.varprod(table)?)),
            Some(_) => Err(self.error("expected integer or variable")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn varprod(&mut self, table: &mut SymbolTable) -> Result<Vec<VarId>> {
        let mut vars = Vec::new();
        loop {
            match self.peek() {
                Some(Token::Ident(name)) => {
                    vars.push(table.intern(name));
                    self.pos += 1;
                }
                _ => return Err(self.error("expected variable")),
            }
            if self.peek() != Some(&Token::Star) {
                return Ok(vars);
            }
            self.pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    #[test]
    fn parses_section2_hamiltonian() {
        let (p, t) = parse("1 + x1*x2*x5 + x1*x6*x7*x8 + x3*x4*x8 - x1*x3*x4").unwrap();
        assert_eq!(p.num_terms(), 5);
        assert_eq!(p.degree(), 4);
        assert_eq!(t.names(), &["x1", "x2", "x5", "x6", "x7", "x8", "x3", "x4"]);
    }

    #[test]
    fn idempotent_at_parse_time() {
        let (p, t) = parse("x1*x1").unwrap();
        assert_eq!(p, Polynomial::var(VarId(0)));
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn parses_final_ramsey_leaf() {
        let (p, t) = parse("2 - a27 - a28 + a27*a28").unwrap();
        let a27 = t.lookup("a27").unwrap();
        let a28 = t.lookup("a28").unwrap();
        assert_eq!(p.constant_term(), 2);
        assert_eq!(p.coefficient(&Monomial::new([a27])), -1);
        assert_eq!(p.coefficient(&Monomial::new([a28])), -1);
        assert_eq!(p.coefficient(&Monomial::new([a27, a28])), 1);
    }

    #[test]
    fn multiline_and_coefficients() {
        let (p, _) = parse("  -3*a*b\n + 4\n\t- b ").unwrap();
        assert_eq!(p.to_string(), "4 - x1 - 3*x0*x1");
    }

    #[test]
    fn reports_position_of_errors() {
        match parse("1 + x1*\n  + 2") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        match parse("x1 x2") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 4)),
            other => panic!("unexpected {other:?}"),
        }
        match parse("x1 + $") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 6)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse("3*"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn integer_overflow_is_an_error() {
        let err = parse("99999999999999999999*x").unwrap_err();
        assert!(err.to_string().contains("overflows"));
    }
}
