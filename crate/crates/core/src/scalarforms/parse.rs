//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | 'i' | 'x'n | 'y'n | 'z'
//!         | 'Y[' i ',' j '][' r ',' c ']' | '(' expr ')'
//! ```
//!
//! `y<n>` and `z` are contact coordinates and only accepted when the context
//! names a contact dimension.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::polynomial::Polynomial;
use super::scalar::GaussianRational;
use super::variable::Variable;
use crate::error::{Error, Result};
use crate::hodgedomain::HodgeNumbers;

/// What names are legal while parsing.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParseContext<'a> {
    /// Range-checks `Y[i,j][r,c]` against the block shape when present;
    /// without it block entries are rejected.
    pub hodge: Option<&'a HodgeNumbers>,
    /// Highest admissible parameter index, if bounded.
    pub max_param: Option<u32>,
    /// Enables `y1..yn` and `z`, and bounds `x1..xn`.
    pub contact_n: Option<u32>,
}

impl<'a> ParseContext<'a> {
    pub fn with_hodge(h: &'a HodgeNumbers) -> Self {
        ParseContext {
            hodge: Some(h),
            ..Default::default()
        }
    }

    pub fn params(n: u32) -> Self {
        ParseContext {
            max_param: Some(n),
            ..Default::default()
        }
    }

    pub fn contact(n: u32) -> Self {
        ParseContext {
            contact_n: Some(n),
            max_param: Some(n),
            ..Default::default()
        }
    }
}

pub fn parse_polynomial(text: &str, ctx: &ParseContext<'_>) -> Result<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ctx,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a single variable name such as `x3` or `Y[2,1][1,1]`.
pub fn parse_variable(text: &str, ctx: &ParseContext<'_>) -> Result<Variable> {
    let p = parse_polynomial(text, ctx)?;
    let vars = p.variables();
    let single = vars.len() == 1 && p.num_terms() == 1;
    if single {
        let v = *vars.iter().next().unwrap();
        if p == Polynomial::var(v) {
            return Ok(v);
        }
    }
    Err(Error::Syntax {
        position: 0,
        message: format!("`{}` is not a single variable", text),
    })
}

struct Parser<'s, 'c> {
    src: &'s [u8],
    pos: usize,
    ctx: &'c ParseContext<'c>,
}

impl Parser<'_, '_> {
    fn err(&self, message: &str) -> Error {
        Error::Syntax {
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc.add_assign_ref(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc.sub_assign_ref(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| Error::Syntax {
                    position: start,
                    message: "exponent too large".into(),
                })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a nonnegative integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn small_index(&mut self) -> Result<usize> {
        let start = self.pos;
        let n = self.integer()?;
        n.try_into().map_err(|_| Error::Syntax {
            position: start,
            message: "index too large".into(),
        })
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        match c {
            b'0'..=b'9' => {
                let num = self.integer()?;
                let value = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den_pos = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(Error::Syntax {
                            position: den_pos,
                            message: "zero denominator".into(),
                        });
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from_integer(num)
                };
                Ok(Polynomial::constant(value.into()))
            }
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            b'Y' => self.block_entry(),
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => self.identifier(),
            _ => Err(self.err("unexpected character")),
        }
    }

    fn identifier(&mut self) -> Result<Polynomial> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if name == "i" {
            return Ok(Polynomial::constant(GaussianRational::new(
                BigRational::zero(),
                BigRational::one(),
            )));
        }
        if name == "z" {
            if self.ctx.contact_n.is_some() {
                return Ok(Polynomial::var(Variable::Height));
            }
            return Err(Error::UnknownVariable(name.into()));
        }
        let (head, digits) = name.split_at(1);
        let index: Option<u32> = if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            digits.parse().ok()
        } else {
            None
        };
        match (head, index) {
            ("x", Some(n)) if n >= 1 => {
                if let Some(max) = self.ctx.max_param {
                    if n > max {
                        return Err(Error::UnknownVariable(name.into()));
                    }
                }
                Ok(Polynomial::var(Variable::Param(n)))
            }
            ("y", Some(n)) if n >= 1 => match self.ctx.contact_n {
                Some(max) if n <= max => Ok(Polynomial::var(Variable::Dual(n))),
                _ => Err(Error::UnknownVariable(name.into())),
            },
            _ => Err(Error::UnknownVariable(name.into())),
        }
    }

    fn block_entry(&mut self) -> Result<Polynomial> {
        self.pos += 1;
        self.expect(b'[')?;
        let i = self.small_index()?;
        self.expect(b',')?;
        let j = self.small_index()?;
        self.expect(b']')?;
        self.expect(b'[')?;
        let r = self.small_index()?;
        self.expect(b',')?;
        let c = self.small_index()?;
        self.expect(b']')?;
        let name = format!("Y[{},{}][{},{}]", i, j, r, c);
        let Some(h) = self.ctx.hodge else {
            return Err(Error::UnknownVariable(name));
        };
        let w = h.weight();
        let out_of_range = |reason: String| Error::EntryOutOfRange {
            name: name.clone(),
            reason,
        };
        if i > w || j > w {
            return Err(out_of_range(format!("block indices exceed weight {}", w)));
        }
        if i <= j {
            return Err(out_of_range("only strictly lower blocks (i > j) are coordinates".into()));
        }
        let (rows, cols) = h.block_size(i, j);
        if r == 0 || c == 0 {
            return Err(out_of_range("entry indices are 1-based".into()));
        }
        if r > rows || c > cols {
            return Err(out_of_range(format!(
                "block ({},{}) is {}x{}",
                i, j, rows, cols
            )));
        }
        Ok(Polynomial::var(Variable::entry(i, j, r - 1, c - 1)))
    }
}
