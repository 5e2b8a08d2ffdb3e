//! The shared expression grammar: generator identifiers, integer literals,
//! + − * / ^ with ^ binding tightest and a non-negative integer exponent,
//! and parentheses. Whitespace is insignificant. Errors carry line and
//! column.

use crate::error::{Error, Result};
use crate::field::{PrimeField, RatFunc};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str, line0: usize, col0: usize) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = line0;
    let mut col = col0;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let advance = |chars: &mut std::iter::Peekable<std::str::Chars>, col: &mut usize| {
            chars.next();
            *col += 1;
        };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(&mut chars, &mut col),
            '+' => {
                advance(&mut chars, &mut col);
                out.push(Spanned { tok: Tok::Plus, line: tline, col: tcol });
            }
            '-' | '−' => {
                chars.next();
                col += 1;
                out.push(Spanned { tok: Tok::Minus, line: tline, col: tcol });
            }
            '*' => {
                advance(&mut chars, &mut col);
                out.push(Spanned { tok: Tok::Star, line: tline, col: tcol });
            }
            '/' => {
                advance(&mut chars, &mut col);
                out.push(Spanned { tok: Tok::Slash, line: tline, col: tcol });
            }
            '^' => {
                advance(&mut chars, &mut col);
                out.push(Spanned { tok: Tok::Caret, line: tline, col: tcol });
            }
            '(' => {
                advance(&mut chars, &mut col);
                out.push(Spanned { tok: Tok::LParen, line: tline, col: tcol });
            }
            ')' => {
                advance(&mut chars, &mut col);
                out.push(Spanned { tok: Tok::RParen, line: tline, col: tcol });
            }
            c if c.is_ascii_digit() => {
                let mut n: u64 = 0;
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(d as u64 - '0' as u64))
                        .ok_or(Error::Parse {
                            line: tline,
                            col: tcol,
                            msg: "integer literal too large".into(),
                        })?;
                    chars.next();
                    col += 1;
                }
                out.push(Spanned { tok: Tok::Int(n), line: tline, col: tcol });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    name.push(d);
                    chars.next();
                    col += 1;
                }
                out.push(Spanned { tok: Tok::Ident(name), line: tline, col: tcol });
            }
            other => {
                return Err(Error::Parse {
                    line: tline,
                    col: tcol,
                    msg: format!("unexpected character '{}'", other),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    prime: PrimeField,
    names: &'a [String],
    end_line: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }


    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(s) = self.peek() {
            match s.tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(s) = self.peek() {
            match s.tok {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?)?;
                }
                Tok::Slash => {
                    let at = (s.line, s.col);
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).map_err(|_| Error::Parse {
                        line: at.0,
                        col: at.1,
                        msg: "division by zero".into(),
                    })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if let Some(s) = self.peek() {
            if s.tok == Tok::Minus {
                self.bump();
                return Ok(self.unary()?.neg());
            }
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if let Some(s) = self.peek() {
            if s.tok == Tok::Caret {
                let at = (s.line, s.col);
                self.bump();
                let exp = match self.bump() {
                    Some(Spanned {
                        tok: Tok::Int(n), ..
                    }) => u32::try_from(n).map_err(|_| Error::Parse {
                        line: at.0,
                        col: at.1,
                        msg: "exponent too large".into(),
                    })?,
                    _ => {
                        return Err(Error::Parse {
                            line: at.0,
                            col: at.1,
                            msg: "expected a non-negative integer exponent after ^".into(),
                        })
                    }
                };
                return Ok(base.pow(exp)?);
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.bump() {
            Some(Spanned {
                tok: Tok::Ident(name),
                line,
                col,
            }) => match self.names.iter().position(|n| *n == name) {
                Some(i) => Ok(RatFunc::gen(self.prime, self.nvars(), i)?),
                None => Err(Error::Parse {
                    line,
                    col,
                    msg: format!("unknown identifier '{}'", name),
                }),
            },
            Some(Spanned {
                tok: Tok::Int(n), ..
            }) => Ok(RatFunc::constant(self.prime, self.nvars(), n as i64)),
            Some(Spanned {
                tok: Tok::LParen, ..
            }) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Spanned {
                        tok: Tok::RParen, ..
                    }) => Ok(inner),
                    other => Err(match other {
                        Some(s) => Error::Parse {
                            line: s.line,
                            col: s.col,
                            msg: "expected ')'".into(),
                        },
                        None => Error::Parse {
                            line: self.end_line,
                            col: self.end_col,
                            msg: "expected ')'".into(),
                        },
                    }),
                }
            }
            other => Err(match other {
                Some(s) => Error::Parse {
                    line: s.line,
                    col: s.col,
                    msg: "expected an identifier, integer, or '('".into(),
                },
                None => Error::Parse {
                    line: self.end_line,
                    col: self.end_col,
                    msg: "unexpected end of expression".into(),
                },
            }),
        }
    }
}

/// Parse one expression into a rational function over the named generators.
/// `line0`/`col0` locate the expression inside its source file so reported
/// positions are absolute.
pub fn parse_expr_at(
    text: &str,
    prime: PrimeField,
    names: &[String],
    line0: usize,
    col0: usize,
) -> Result<RatFunc> {
    let toks = lex(text, line0, col0)?;
    let end_col = col0 + text.chars().count();
    let mut p = Parser {
        toks,
        pos: 0,
        prime,
        names,
        end_line: line0,
        end_col,
    };
    let value = p.expr()?;
    if let Some(s) = p.peek() {
        return Err(Error::Parse {
            line: s.line,
            col: s.col,
            msg: "trailing input after expression".into(),
        });
    }
    Ok(value)
}

pub fn parse_expr(text: &str, prime: PrimeField, names: &[String]) -> Result<RatFunc> {
    parse_expr_at(text, prime, names, 1, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_arithmetic() {
        let prime = PrimeField::new(2).unwrap();
        let ns = names(&["s", "t"]);
        let v = parse_expr("s^2*t + 1", prime, &ns).unwrap();
        let s = RatFunc::gen(prime, 2, 0).unwrap();
        let t = RatFunc::gen(prime, 2, 1).unwrap();
        let expect = s
            .pow(2)
            .unwrap()
            .mul(&t)
            .unwrap()
            .add(&RatFunc::one(prime, 2))
            .unwrap();
        assert_eq!(v, expect);
    }

    #[test]
    fn caret_binds_tightest() {
        // -s^2 is -(s^2); s/t^2 is s/(t^2).
        let prime = PrimeField::new(3).unwrap();
        let ns = names(&["s", "t"]);
        let s = RatFunc::gen(prime, 3 - 1, 0).unwrap();
        let t = RatFunc::gen(prime, 2, 1).unwrap();
        let v = parse_expr("-s^2", prime, &ns).unwrap();
        assert_eq!(v, s.pow(2).unwrap().neg());
        let v = parse_expr("s/t^2", prime, &ns).unwrap();
        assert_eq!(v, s.div(&t.pow(2).unwrap()).unwrap());
    }

    #[test]
    fn reports_unknown_identifier_position() {
        let prime = PrimeField::new(2).unwrap();
        let ns = names(&["s"]);
        let err = parse_expr("s + u", prime, &ns).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 1,
                col: 5,
                msg: "unknown identifier 'u'".into()
            }
        );
    }

    #[test]
    fn reports_division_by_zero() {
        let prime = PrimeField::new(2).unwrap();
        let ns = names(&["s"]);
        let err = parse_expr("s / (s - s)", prime, &ns).unwrap_err();
        assert!(matches!(err, Error::Parse { col: 3, .. }));
    }

    #[test]
    fn whitespace_is_insignificant() {
        let prime = PrimeField::new(5).unwrap();
        let ns = names(&["s", "t"]);
        let a = parse_expr("( s + t ) ^ 3", prime, &ns).unwrap();
        let b = parse_expr("(s+t)^3", prime, &ns).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn offset_positions() {
        let prime = PrimeField::new(2).unwrap();
        let ns = names(&["s"]);
        let err = parse_expr_at("bad", prime, &ns, 7, 11).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 7,
                col: 11,
                msg: "unknown identifier 'bad'".into()
            }
        );
    }
}
