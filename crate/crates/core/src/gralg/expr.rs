//! Expression grammar shared by the presentation parser and the printer:
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := atom ('*' atom)*
//! atom   := int | name ['^' int]
//! ```
//!
//! Integer coefficients are reduced mod p. Factors are multiplied left to
//! right with Koszul signs.

use crate::fplinalg::PrimeField;

use super::{Element, Generator, Monomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    /// 1-based column inside the expression text.
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(t) = single {
            out.push((col, t));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<u64>().map_err(|_| ExprError {
                column: col,
                message: format!("integer `{s}` too large"),
            })?;
            out.push((col, Tok::Int(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push((col, Tok::Name(chars[start..i].iter().collect())));
        } else {
            return Err(ExprError {
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
    gens: &'a [Generator],
    field: PrimeField,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            column: self.col(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Element, ExprError> {
        let f = self.field;
        let mut out = Element::zero();
        let mut sign = 1u32;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            sign = f.neg(1);
        }
        loop {
            let t = self.term()?;
            out.add_scaled(&t, sign, f);
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = f.neg(1),
                None => return Ok(out),
                Some(_) => return self.err("expected `+`, `-` or end of expression"),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Element, ExprError> {
        let mut acc = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let col = self.col();
            let rhs = self.atom()?;
            let prod = acc.raw_product(&rhs, self.gens, self.field);
            if prod.undefined {
                return Err(ExprError {
                    column: col,
                    message: "product of two module basis elements is undefined".into(),
                });
            }
            acc = prod.value;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Element, ExprError> {
        let n = self.gens.len();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                let c = (v % self.field.p() as u64) as u32;
                Ok(Element::from_monomial(Monomial::one(n), c))
            }
            Some(Tok::Name(name)) => {
                let Some(idx) = self.gens.iter().position(|g| g.name == name) else {
                    return self.err(format!("unknown generator `{name}`"));
                };
                self.pos += 1;
                let mut exp = 1u64;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    match self.peek() {
                        Some(Tok::Int(e)) => {
                            exp = *e;
                            self.pos += 1;
                        }
                        _ => return self.err("expected integer exponent after `^`"),
                    }
                }
                let g = Element::from_monomial(Monomial::generator(n, idx), 1);
                let mut acc = Element::one(n);
                for _ in 0..exp {
                    acc = acc.raw_product(&g, self.gens, self.field).value;
                    if acc.is_zero() {
                        break;
                    }
                }
                Ok(acc)
            }
            _ => self.err("expected a generator name or an integer"),
        }
    }
}

/// Parse into the free graded-commutative algebra; no relations applied.
pub fn parse_raw(text: &str, gens: &[Generator], field: PrimeField) -> Result<Element, ExprError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ExprError {
            column: 1,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: text.chars().count() + 1,
        gens,
        field,
    };
    p.expr()
}

pub fn format_monomial(m: &Monomial, gens: &[Generator]) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .zip(gens)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, g)| {
            if e == 1 {
                g.name.clone()
            } else {
                format!("{}^{}", g.name, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Canonical printing: terms in descending monomial order, coefficients as
/// signed residues.
pub fn format_element(e: &Element, gens: &[Generator], field: PrimeField) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, &c)) in e.terms().iter().rev().enumerate() {
        let s = field.signed(c);
        let neg = s < 0;
        let abs = s.unsigned_abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&abs.to_string());
        } else {
            if abs != 1 {
                out.push_str(&format!("{abs}*"));
            }
            out.push_str(&format_monomial(m, gens));
        }
    }
    out
}
