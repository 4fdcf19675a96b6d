use std::iter::Peekable;
use std::str::Chars;

use num::BigInt;

use super::{Cyclotomic, CyclotomicError, Rational};

/// Recursive-descent parser for the printed grammar:
///
/// ```text
/// expr   := sign? term (('+' | '-') term)*
/// term   := factor ('*' factor)*
/// factor := int ('/' int)? | 'z' int ('^' '-'? int)? | '(' expr ')'
/// ```
pub(super) fn parse(text: &str) -> Result<Cyclotomic, CyclotomicError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { chars: compact.chars().peekable(), text };
    let v = p.expr()?;
    if p.chars.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    chars: Peekable<Chars<'a>>,
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> CyclotomicError {
        CyclotomicError::Parse { text: self.text.to_string(), reason: reason.to_string() }
    }

    fn expr(&mut self) -> Result<Cyclotomic, CyclotomicError> {
        let mut negate = false;
        match self.chars.peek() {
            Some('-') => {
                negate = true;
                self.chars.next();
            }
            Some('+') => {
                self.chars.next();
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        while let Some(&c) = self.chars.peek() {
            match c {
                '+' => {
                    self.chars.next();
                    acc = acc + self.term()?;
                }
                '-' => {
                    self.chars.next();
                    acc = acc - self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Cyclotomic, CyclotomicError> {
        let mut acc = self.factor()?;
        while self.chars.peek() == Some(&'*') {
            self.chars.next();
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Cyclotomic, CyclotomicError> {
        match self.chars.peek() {
            Some('(') => {
                self.chars.next();
                let v = self.expr()?;
                if self.chars.next() != Some(')') {
                    return Err(self.error("missing `)`"));
                }
                Ok(v)
            }
            Some('z') => {
                self.chars.next();
                let n = self.integer()?;
                let n: u32 = n.try_into().map_err(|_| self.error("bad conductor"))?;
                let k = if self.chars.peek() == Some(&'^') {
                    self.chars.next();
                    let neg = self.chars.peek() == Some(&'-');
                    if neg {
                        self.chars.next();
                    }
                    let k = self.integer()? as i64;
                    if neg {
                        -k
                    } else {
                        k
                    }
                } else {
                    1
                };
                Cyclotomic::root_of_unity(n, k).map_err(|_| self.error("conductor must be positive"))
            }
            Some(c) if c.is_ascii_digit() => {
                let numer = self.integer()?;
                let denom = if self.chars.peek() == Some(&'/') {
                    self.chars.next();
                    self.integer()?
                } else {
                    1
                };
                if denom == 0 {
                    return Err(self.error("zero denominator"));
                }
                Ok(Cyclotomic::from_rational(Rational::new(
                    BigInt::from(numer),
                    BigInt::from(denom),
                )))
            }
            _ => Err(self.error("expected a number, `zN` or `(`")),
        }
    }

    fn integer(&mut self) -> Result<u64, CyclotomicError> {
        let mut digits = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        digits.parse().map_err(|_| self.error("expected an integer"))
    }
}
