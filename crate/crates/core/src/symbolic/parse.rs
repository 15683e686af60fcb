//! Recursive-descent parser for the expression grammar (see `docs/grammar.md`).

use num_bigint::BigInt;
use num_rational::BigRational;

use super::expr::Expr;
use super::scalar::Scalar;
use super::table::SymbolTable;
use super::{Result, SymbolicError};

pub fn parse_expr(text: &str, table: &SymbolTable) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, table };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    table: &'a SymbolTable,
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> SymbolicError {
        SymbolicError::Syntax { pos: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let d = self.unary()?;
                acc = acc.checked_div(&d).map_err(|_| SymbolicError::Syntax {
                    pos: at,
                    message: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let paren = self.eat(b'(');
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let n = self.integer().ok_or_else(|| self.err("expected integer exponent"))?;
        if paren && !self.eat(b')') {
            return Err(self.err("expected `)`"));
        }
        let e: i64 = n
            .try_into()
            .map_err(|_| SymbolicError::Syntax { pos: at, message: "exponent too large".into() })?;
        let e = if neg { -e } else { e };
        base.powi(e).map_err(|_| SymbolicError::Syntax {
            pos: at,
            message: "negative power of zero".into(),
        })
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer().expect("digit");
                Ok(Expr::constant(Scalar::real(BigRational::from_integer(n))))
            }
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while self.pos < self.src.len() && is_ident_char(self.src[self.pos]) {
                    self.pos += 1;
                }
                while self.pos < self.src.len() && self.src[self.pos] == b'\'' {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if name == "i" {
                    return Ok(Expr::i());
                }
                match self.table.get(name) {
                    Some(s) => Ok(Expr::sym(s)),
                    None => Err(SymbolicError::Undeclared { name: name.to_string(), pos: start }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> SymbolTable {
        let mut t = SymbolTable::new();
        for n in ["q", "v", "t", "x", "y", "x'"] {
            t.coordinate(n).unwrap();
        }
        t.parameter("m", true, true).unwrap();
        t
    }

    #[test]
    fn smoke() {
        let t = table();
        let e = parse_expr("q + v*t", &t).unwrap();
        assert_eq!(e.vars().len(), 3);
        assert_eq!(parse_expr("x^-1 * x", &t).unwrap(), Expr::one());
        assert_eq!(parse_expr("i*i", &t).unwrap(), Expr::int(-1));
        assert_eq!(parse_expr("-x^2", &t).unwrap(), -parse_expr("x*x", &t).unwrap());
        assert!(parse_expr("x' - x", &t).unwrap().vars().len() == 2);
    }

    #[test]
    fn errors_carry_positions() {
        let t = table();
        assert_eq!(
            parse_expr("q + w", &t),
            Err(SymbolicError::Undeclared { name: "w".into(), pos: 4 })
        );
        assert!(matches!(parse_expr("q + ", &t), Err(SymbolicError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_expr("(q", &t), Err(SymbolicError::Syntax { .. })));
        assert!(matches!(parse_expr("q/(x-x)", &t), Err(SymbolicError::Syntax { pos: 1, .. })));
    }

    #[test]
    fn printing_round_trips() {
        let t = table();
        for src in [
            "3/2*x^2*y - (1+2*i)*x + i",
            "(m*q + 1)/(x^2 - y)",
            "-i*x/(2*m)",
            "(1-1/2*i)/(x + i*y)",
        ] {
            let e = parse_expr(src, &t).unwrap();
            assert_eq!(parse_expr(&e.to_string(), &t).unwrap(), e, "{src} -> {e}");
        }
    }
}
