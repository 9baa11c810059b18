//! Recursive-descent parser for the polynomial grammar.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['\''] | '(' poly ')' ['\''] | coeff
//! atom   := 'u' | 'v' | 'u_' ['-'] digits | '1'
//! coeff  := real | '(' real ('+'|'-') real 'i' ')'
//! ```
//!
//! Whitespace is ignored. `*` is always multiplication; the postfix
//! apostrophe is the adjoint.

use super::{check_index, NCPoly, PolyError};
use crate::matcore::C64;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub(super) fn parse(text: &str) -> Result<NCPoly, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let out = p.poly()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

impl Parser<'_> {
    fn error(&self, message: &str) -> PolyError {
        PolyError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<NCPoly, PolyError> {
        let negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
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

    fn term(&mut self) -> Result<NCPoly, PolyError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NCPoly, PolyError> {
        let mut base = match self.peek() {
            Some(b'(') => {
                let save = self.pos;
                match self.complex_coeff() {
                    Some(z) => NCPoly::constant(z),
                    None => {
                        self.pos = save + 1;
                        let inner = self.poly()?;
                        if !self.eat(b')') {
                            return Err(self.error("expected ')'"));
                        }
                        inner
                    }
                }
            }
            Some(b'u') => {
                self.pos += 1;
                if self.src.get(self.pos) == Some(&b'_') {
                    self.pos += 1;
                    NCPoly::u(self.index()?)
                } else {
                    NCPoly::u(0)
                }
            }
            Some(b'v') => {
                self.pos += 1;
                NCPoly::v()
            }
            Some(b) if b.is_ascii_digit() => {
                let x = self.real().ok_or_else(|| self.error("malformed number"))?;
                NCPoly::constant(C64::new(x, 0.0))
            }
            Some(_) => return Err(self.error("expected a generator, number or '('")),
            None => return Err(self.error("unexpected end of input")),
        };
        while self.eat(b'\'') {
            base = base.adjoint();
        }
        Ok(base)
    }

    fn index(&mut self) -> Result<i64, PolyError> {
        let start = self.pos;
        let negative = self.src.get(self.pos) == Some(&b'-');
        if negative {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.error("expected digits after 'u_'"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match text.parse::<i64>() {
            Ok(n) => check_index(n),
            Err(_) => Err(PolyError::IndexOverflow {
                index: if negative { i64::MIN } else { i64::MAX },
            }),
        }
    }

    /// `digits ['.' digits] [('e'|'E') ['+'|'-'] digits]`, no leading sign.
    fn real(&mut self) -> Option<f64> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos > s
        };
        if !digits(self) {
            self.pos = start;
            return None;
        }
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            if !digits(self) {
                self.pos = start;
                return None;
            }
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if !digits(self) {
                self.pos = save;
            }
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    fn signed_real(&mut self) -> Option<f64> {
        let sign = if self.eat(b'-') {
            -1.0
        } else {
            self.eat(b'+');
            1.0
        };
        self.real().map(|x| sign * x)
    }

    /// `'(' real ('+'|'-') real 'i' ')'`; leaves the position untouched on failure.
    fn complex_coeff(&mut self) -> Option<C64> {
        let save = self.pos;
        let out = (|| {
            if !self.eat(b'(') {
                return None;
            }
            let re = self.signed_real()?;
            let sign = if self.eat(b'+') {
                1.0
            } else if self.eat(b'-') {
                -1.0
            } else {
                return None;
            };
            let im = self.real()?;
            if !self.eat(b'i') || !self.eat(b')') {
                return None;
            }
            Some(C64::new(re, sign * im))
        })();
        if out.is_none() {
            self.pos = save;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Letter, Symbol, Word};
    use super::*;

    fn words(p: &NCPoly) -> Vec<(Word, C64)> {
        p.terms().map(|(w, c)| (w.clone(), *c)).collect()
    }

    #[test]
    fn commutator_has_two_words() {
        let p = parse("u*v - v*u").unwrap();
        let t = words(&p);
        assert_eq!(t.len(), 2);
        assert!(t.contains(&(vec![Letter::u(0), Letter::v()], C64::new(1.0, 0.0))));
        assert!(t.contains(&(vec![Letter::v(), Letter::u(0)], C64::new(-1.0, 0.0))));
    }

    #[test]
    fn starred_letter() {
        let p = parse("u'").unwrap();
        assert_eq!(words(&p), vec![(vec![Letter::u(0).star()], C64::new(1.0, 0.0))]);
    }

    #[test]
    fn complex_coefficient_not_simplified() {
        let p = parse("(1+2i)*u*u'").unwrap();
        assert_eq!(
            words(&p),
            vec![(vec![Letter::u(0), Letter::u(0).star()], C64::new(1.0, 2.0))]
        );
    }

    #[test]
    fn chain_letters_and_whitespace() {
        let p = parse("  u_-12 *  u_3' ").unwrap();
        assert_eq!(p.symbols(), vec![Symbol::U(-12), Symbol::U(3)]);
        assert_eq!(parse("u").unwrap(), parse("u_0").unwrap());
    }

    #[test]
    fn grouping_and_numbers() {
        assert_eq!(parse("(1+2)").unwrap(), NCPoly::constant(C64::new(3.0, 0.0)));
        assert_eq!(parse("2.5e-1").unwrap(), NCPoly::constant(C64::new(0.25, 0.0)));
        assert_eq!(
            parse("(u + v)*2").unwrap(),
            parse("2*u + 2*v").unwrap()
        );
        assert!(parse("u - u").unwrap().is_zero());
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert_eq!(
            parse("u * "),
            Err(PolyError::Syntax {
                position: 4,
                message: "unexpected end of input".into()
            })
        );
        assert!(matches!(parse("u + w"), Err(PolyError::Syntax { position: 4, .. })));
        assert!(matches!(parse("(u + v"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("u_"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("u v"), Err(PolyError::Syntax { position: 2, .. })));
    }

    #[test]
    fn index_cap() {
        assert!(parse("u_1000000").is_ok());
        assert_eq!(
            parse("u_-1000001"),
            Err(PolyError::IndexOverflow { index: -1_000_001 })
        );
        assert!(matches!(
            parse("u_99999999999999999999999"),
            Err(PolyError::IndexOverflow { .. })
        ));
    }
}
