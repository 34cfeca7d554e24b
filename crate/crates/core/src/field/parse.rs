use thiserror::Error;

use super::expr::{Expr, Func, Node};

/// Parse failure; `offset` is a byte offset into the source.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        if c.is_ascii_digit() || c == b'.' {
            return self.number(start).map(|n| (start, Tok::Num(n)));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            return Ok((start, Tok::Ident(self.src[start..self.pos].to_string())));
        }
        if b"+-*/^()".contains(&c) {
            self.pos += 1;
            return Ok((start, Tok::Op(c as char)));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(ParseError::Syntax { offset: start, message: format!("unexpected character '{ch}'") })
    }

    fn number(&mut self, start: usize) -> Result<f64, ParseError> {
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            let from = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos - from
        };
        let mut count = digits(&mut self.pos);
        if bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            count += digits(&mut self.pos);
        }
        if count == 0 {
            return Err(ParseError::Syntax { offset: start, message: "malformed number".into() });
        }
        if matches!(bytes.get(self.pos), Some(b'e' | b'E')) {
            let mut probe = self.pos + 1;
            if matches!(bytes.get(probe), Some(b'+' | b'-')) {
                probe += 1;
            }
            if bytes.get(probe).is_some_and(|b| b.is_ascii_digit()) {
                self.pos = probe;
                digits(&mut self.pos);
            }
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| ParseError::Syntax { offset: start, message: "malformed number".into() })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
    vars: &'a [&'a str],
}

/// Parses `src` with the given variable names bound to indices 0, 1, ...
pub fn parse_expr(src: &str, vars: &[&str]) -> Result<Expr, ParseError> {
    let mut lexer = Lexer { src, pos: 0 };
    let (at, tok) = lexer.next()?;
    let mut p = Parser { lexer, tok, at, vars };
    let e = p.sum()?;
    if p.tok != Tok::End {
        return Err(p.unexpected());
    }
    Ok(e)
}

impl Parser<'_> {
    fn bump(&mut self) -> Result<(), ParseError> {
        let (at, tok) = self.lexer.next()?;
        self.at = at;
        self.tok = tok;
        Ok(())
    }

    fn unexpected(&self) -> ParseError {
        let message = match &self.tok {
            Tok::End => "unexpected end of input".to_string(),
            Tok::Num(n) => format!("unexpected number {n}"),
            Tok::Ident(s) => format!("unexpected identifier '{s}'"),
            Tok::Op(c) => format!("unexpected '{c}'"),
        };
        ParseError::Syntax { offset: self.at, message }
    }

    fn expect(&mut self, op: char) -> Result<(), ParseError> {
        if self.tok == Tok::Op(op) {
            self.bump()
        } else {
            Err(ParseError::Syntax { offset: self.at, message: format!("expected '{op}'") })
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        while let Tok::Op(op @ ('+' | '-')) = self.tok {
            self.bump()?;
            let rhs = self.product()?;
            lhs = Expr::raw(if op == '+' { Node::Add(lhs, rhs) } else { Node::Sub(lhs, rhs) });
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Tok::Op(op @ ('*' | '/')) = self.tok {
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Expr::raw(if op == '*' { Node::Mul(lhs, rhs) } else { Node::Div(lhs, rhs) });
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.tok {
            Tok::Op('-') => {
                self.bump()?;
                let inner = self.unary()?;
                Ok(match inner.node() {
                    Node::Const(c) => Expr::constant(-c),
                    _ => Expr::raw(Node::Neg(inner)),
                })
            }
            Tok::Op('+') => {
                self.bump()?;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.tok == Tok::Op('^') {
            self.bump()?;
            let exponent = self.unary()?;
            return Ok(Expr::raw(Node::Pow(base, exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Num(n) => {
                self.bump()?;
                Ok(Expr::constant(n))
            }
            Tok::Op('(') => {
                self.bump()?;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let offset = self.at;
                self.bump()?;
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Expr::var(i as u8));
                }
                match Func::from_name(&name) {
                    Some(func) => {
                        self.expect('(')?;
                        let arg = self.sum()?;
                        self.expect(')')?;
                        Ok(Expr::call(func, &arg))
                    }
                    None => Err(ParseError::UnknownIdentifier { offset, name }),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const XS: [&str; 4] = ["x0", "x1", "x2", "x3"];

    fn eval(src: &str, p: [f64; 4]) -> f64 {
        parse_expr(src, &XS).unwrap().eval(&p).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("x0*x1 + 2", [3.0, 4.0, 0.0, 0.0]), 14.0);
        assert_eq!(eval("2^3^2", [0.0; 4]), 512.0);
        assert_eq!(eval("-2^2", [0.0; 4]), -4.0);
        assert_eq!(eval("8/4/2", [0.0; 4]), 1.0);
        assert_eq!(eval("1 - 2 - 3", [0.0; 4]), -4.0);
        assert_eq!(eval("2^-1", [0.0; 4]), 0.5);
        assert_eq!(eval("1.5e2 + .5", [0.0; 4]), 150.5);
    }

    #[test]
    fn errors_carry_offsets() {
        let err = parse_expr("x0 + foo(x1)", &XS).unwrap_err();
        assert_eq!(err, ParseError::UnknownIdentifier { offset: 5, name: "foo".into() });
        let err = parse_expr("x0 + * 2", &XS).unwrap_err();
        assert_eq!(err.offset(), 5);
        let err = parse_expr("(x0", &XS).unwrap_err();
        assert_eq!(err.offset(), 3);
        let err = parse_expr("x0 $ 1", &XS).unwrap_err();
        assert_eq!(err.offset(), 3);
        assert!(parse_expr("", &XS).is_err());
        assert!(parse_expr("x4", &XS).is_err());
    }

    #[test]
    fn function_names_need_parentheses() {
        assert!(parse_expr("sin x0", &XS).is_err());
        assert_eq!(eval("cos(0) + exp(0) + ln(1)", [0.0; 4]), 2.0);
    }

    #[test]
    fn custom_variable_set() {
        let e = parse_expr("t^2 + 1", &["t"]).unwrap();
        assert_eq!(e.eval(&[3.0]).unwrap(), 10.0);
        assert!(parse_expr("x0", &["t"]).is_err());
    }
}
