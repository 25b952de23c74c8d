//! Element syntax: polynomial expressions in `x` with rational coefficients,
//! `+ - * /`, integer powers `^` (negative allowed), parentheses and implicit
//! multiplication, e.g. `(1-x)^-1`, `3/2 x^2 - 1`, `2(x+1)`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::mp::parse_rational;
use crate::nf::{ElementRecord, FieldElement, NumberField};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            'x' => {
                out.push(Tok::X);
                i += 1
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                    i += 1;
                }
                out.push(Tok::Num(parse_rational(&s[start..i])?));
            }
            _ => return Err(Error::Format(format!("element: unexpected character {c:?} at offset {i}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a NumberField,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<FieldElement> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    let r = self.term()?;
                    acc = self.field.add(&acc, &r);
                }
                Tok::Minus => {
                    self.pos += 1;
                    let r = self.term()?;
                    acc = self.field.sub(&acc, &r);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElement> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let r = self.unary()?;
                    acc = self.field.mul(&acc, &r);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let r = self.unary()?;
                    acc = self.field.div(&acc, &r)?;
                }
                Some(Tok::X | Tok::LParen | Tok::Num(_)) => {
                    let r = self.power()?;
                    acc = self.field.mul(&acc, &r);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FieldElement> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(self.field.neg(&v))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<FieldElement> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let e = match self.next() {
            Some(Tok::Num(n)) if n.is_integer() => n.to_integer(),
            _ => return Err(Error::Format("element: exponent must be an integer".into())),
        };
        let e: i64 = i64::try_from(e).map_err(|_| Error::Format("element: exponent too large".into()))?;
        self.field.pow(&base, if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<FieldElement> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(self.field.from_rational(n)),
            Some(Tok::X) => Ok(self.field.generator()),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(Error::Format("element: missing ')'".into()));
                }
                Ok(v)
            }
            Some(t) => Err(Error::Format(format!("element: unexpected token {t:?}"))),
            None => Err(Error::Format("element: unexpected end of expression".into())),
        }
    }
}

/// Parses an expression into an element of `field`.
pub fn parse_element(field: &NumberField, s: &str) -> Result<FieldElement> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Format("element: empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, field };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Format(format!("element: trailing input in {s:?}")));
    }
    Ok(v)
}

/// Accepts an expression string, a `{"coeffs": [...]}` record, or a bare coefficient array.
pub fn element_from_json(field: &NumberField, v: &serde_json::Value) -> Result<FieldElement> {
    match v {
        serde_json::Value::String(s) => parse_element(field, s),
        serde_json::Value::Object(_) => {
            let rec: ElementRecord =
                serde_json::from_value(v.clone()).map_err(|e| Error::Format(format!("element: {e}")))?;
            field.element_from_record(&rec)
        }
        serde_json::Value::Array(items) => {
            let coeffs = items
                .iter()
                .map(|c| match c {
                    serde_json::Value::String(s) => Ok(s.clone()),
                    serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
                    _ => Err(Error::Format(format!("element: bad coefficient {c}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            field.element_from_record(&ElementRecord { coeffs })
        }
        serde_json::Value::Number(n) if n.is_i64() => Ok(field.from_rational(BigRational::from_integer(BigInt::from(
            n.as_i64().expect("checked"),
        )))),
        _ => Err(Error::Format(format!("element: unsupported value {v}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        let k = NumberField::from_poly(&[1, -1, 0, 1]).unwrap();
        let x = k.generator();
        assert_eq!(parse_element(&k, "x").unwrap(), x);
        assert_eq!(parse_element(&k, "x^3").unwrap(), k.element_from_ints(&[-1, 1]));
        let mu = k.inverse(&k.sub(&k.one(), &x)).unwrap();
        assert_eq!(parse_element(&k, "(1-x)^-1").unwrap(), mu);
        assert_eq!(parse_element(&k, "1/(1-x)").unwrap(), mu);
        assert_eq!(parse_element(&k, "2(x+1)").unwrap(), k.element_from_ints(&[2, 2]));
        assert_eq!(parse_element(&k, "2x^2 - -1").unwrap(), k.element_from_ints(&[1, 0, 2]));
        let half = parse_element(&k, "3/2 x").unwrap();
        assert_eq!(half.coeffs()[1], BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_element(&k, "0.5").unwrap(), k.from_rational(BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn errors() {
        let k = NumberField::from_poly(&[1, 0, 1]).unwrap();
        for bad in ["", "y", "x^", "(x", "x)", "x^1.5", "1 +"] {
            assert!(matches!(parse_element(&k, bad), Err(Error::Format(_))), "{bad}");
        }
        assert!(matches!(parse_element(&k, "1/0"), Err(Error::Arithmetic(_))));
    }

    #[test]
    fn json_forms() {
        let k = NumberField::from_poly(&[1, 0, 1]).unwrap();
        let want = k.element_from_ints(&[1, 2]);
        for v in [serde_json::json!("1+2x"), serde_json::json!({"coeffs": ["1", "2"]}), serde_json::json!([1, "2"])] {
            assert_eq!(element_from_json(&k, &v).unwrap(), want);
        }
    }
}
