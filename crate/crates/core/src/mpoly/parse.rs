use crate::error::{Error, Result};
use crate::gf::Field;

use super::MPoly;

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    input: &'a str,
}

impl<'a> Cursor<'a> {
    fn err(&self) -> Error {
        Error::Parse {
            what: "polynomial",
            input: self.input.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .parse()
            .ok()
    }

    fn exponent(&mut self) -> Result<u64> {
        if self.peek() == Some('^') {
            self.pos += 1;
            let braced = self.peek() == Some('{');
            if braced {
                self.pos += 1;
            }
            let e = self.digits().ok_or_else(|| self.err())?;
            if braced {
                if self.peek() != Some('}') {
                    return Err(self.err());
                }
                self.pos += 1;
            }
            Ok(e)
        } else {
            Ok(1)
        }
    }
}

pub(super) fn parse_poly(field: &Field, nvars: usize, input: &str) -> Result<MPoly> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cur = Cursor {
        chars,
        pos: 0,
        input,
    };
    if cur.chars.is_empty() {
        return Err(cur.err());
    }
    let mut terms = Vec::new();
    while cur.pos < cur.chars.len() {
        let mut negative = false;
        while let Some(c @ ('+' | '-')) = cur.peek() {
            negative ^= c == '-';
            cur.pos += 1;
        }
        let mut coeff = field.one();
        let mut exps = vec![0u64; nvars];
        let mut factors = 0usize;
        loop {
            match cur.peek() {
                None | Some('+') | Some('-') => break,
                Some('*') => {
                    cur.pos += 1;
                    continue;
                }
                Some(c) if c.is_ascii_digit() => {
                    let n = cur.digits().ok_or_else(|| cur.err())?;
                    let e = cur.exponent()?;
                    coeff = field.mul(coeff, field.pow(field.from_int(n as i64), e));
                }
                Some('u') => {
                    cur.pos += 1;
                    let e = cur.exponent()?;
                    coeff = field.mul(coeff, field.pow(field.generator_u(), e));
                }
                Some('(') => {
                    let start = cur.pos + 1;
                    let mut depth = 0i32;
                    loop {
                        match cur.peek() {
                            Some('(') => depth += 1,
                            Some(')') => {
                                depth -= 1;
                                if depth == 0 {
                                    break;
                                }
                            }
                            None => return Err(cur.err()),
                            _ => {}
                        }
                        cur.pos += 1;
                    }
                    let inner: String = cur.chars[start..cur.pos].iter().collect();
                    cur.pos += 1;
                    let value = field.parse_element(&inner).map_err(|_| cur.err())?;
                    let e = cur.exponent()?;
                    coeff = field.mul(coeff, field.pow(value, e));
                }
                Some(c @ ('x' | 'y' | 'z')) => {
                    cur.pos += 1;
                    let idx = match (c, cur.digits()) {
                        (_, None) => (c as u8 - b'x') as usize,
                        ('x', Some(k)) if k >= 1 => k as usize - 1,
                        _ => return Err(cur.err()),
                    };
                    if idx >= nvars {
                        return Err(cur.err());
                    }
                    exps[idx] += cur.exponent()?;
                }
                Some(_) => return Err(cur.err()),
            }
            factors += 1;
        }
        if factors == 0 {
            return Err(cur.err());
        }
        if negative {
            coeff = field.neg(coeff);
        }
        terms.push((exps, coeff));
    }
    Ok(MPoly::from_terms(field, nvars, terms))
}

#[cfg(test)]
mod tests {
    use crate::gf::FieldSpec;
    use crate::mpoly::MPoly;

    #[test]
    fn parses_common_forms() {
        let f7 = FieldSpec::prime(7).unwrap();
        let a = MPoly::parse(&f7, 2, "x^5 - y^5 + 3*x*y - 1").unwrap();
        assert_eq!(a.coeff(&[5, 0]), 1);
        assert_eq!(a.coeff(&[0, 5]), 6);
        assert_eq!(a.coeff(&[1, 1]), 3);
        assert_eq!(a.coeff(&[0, 0]), 6);
        let b = MPoly::parse(&f7, 2, "x^{3}y^{2}").unwrap();
        assert_eq!(b.coeff(&[3, 2]), 1);
        let c = MPoly::parse(&f7, 2, "2 x x").unwrap();
        assert_eq!(c.coeff(&[2, 0]), 2);
    }

    #[test]
    fn parses_extension_coefficients() {
        let f9 = FieldSpec::new(3, 2, Some(vec![2, 2, 1]), None).unwrap();
        let a = MPoly::parse(&f9, 2, "(2u+1)x^2 + 2uy + u^2").unwrap();
        let u = f9.generator_u();
        assert_eq!(a.coeff(&[2, 0]), f9.parse_element("2u+1").unwrap());
        assert_eq!(a.coeff(&[0, 1]), f9.mul(f9.from_int(2), u));
        assert_eq!(a.coeff(&[0, 0]), f9.mul(u, u));
    }

    #[test]
    fn rejects_garbage() {
        let f5 = FieldSpec::prime(5).unwrap();
        for bad in ["", "x^", "w", "z", "x+(1", "x4", "+", "x^-1"] {
            assert!(MPoly::parse(&f5, 2, bad).is_err(), "{bad}");
        }
    }
}
