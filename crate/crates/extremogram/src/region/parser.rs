//! Recursive-descent parser for the region DSL.

use crate::error::{Error, Result};

use super::{Constraint, ConstraintSet, RegionSpec};

pub(super) fn parse_region(text: &str) -> Result<RegionSpec> {
    let mut p = Parser::new(text);
    let region = p.region()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(region)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn syntax(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected '{}'", b as char)))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.bytes[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn region(&mut self) -> Result<RegionSpec> {
        let mut disjuncts = vec![self.term()?];
        while self.eat(b'|') {
            disjuncts.push(self.term()?);
        }
        RegionSpec::new(disjuncts)
    }

    fn term(&mut self) -> Result<ConstraintSet> {
        let mut constraints = vec![self.atom()?];
        while self.eat(b'&') {
            constraints.push(self.atom()?);
        }
        Ok(ConstraintSet { constraints })
    }

    fn atom(&mut self) -> Result<Constraint> {
        self.skip_ws();
        if self.eat_keyword("band(") {
            return self.band();
        }
        self.interval()
    }

    fn interval(&mut self) -> Result<Constraint> {
        self.skip_ws();
        let lo_closed = match self.bump() {
            Some(b'(') => false,
            Some(b'[') => true,
            _ => return Err(self.syntax("expected '(', '[' or 'band('")),
        };
        let lo = self.bound()?;
        self.expect(b',')?;
        let hi = self.bound()?;
        self.skip_ws();
        let hi_closed = match self.bump() {
            Some(b')') => false,
            Some(b']') => true,
            _ => return Err(self.syntax("expected ')' or ']'")),
        };
        let coord = if self.eat(b'@') {
            let k = self.integer()?;
            if k == 0 {
                return Err(Error::Semantic("coordinate indices start at 1".into()));
            }
            k - 1
        } else {
            0
        };
        let c = Constraint::CoordInterval {
            coord,
            lo,
            hi,
            // closedness at an infinite endpoint is meaningless
            lo_closed: lo_closed && lo.is_finite(),
            hi_closed: hi_closed && hi.is_finite(),
        };
        c.validate()?;
        Ok(c)
    }

    fn band(&mut self) -> Result<Constraint> {
        let lo = self.bound()?;
        let lo_closed = self.comparator()?;
        let weights = self.linexpr()?;
        let hi_closed = self.comparator()?;
        let hi = self.bound()?;
        self.expect(b')')?;
        let c = Constraint::LinearBand {
            weights,
            lo,
            hi,
            lo_closed,
            hi_closed,
        };
        c.validate()?;
        Ok(c)
    }

    /// "<" (open) or "<=" (closed).
    fn comparator(&mut self) -> Result<bool> {
        self.skip_ws();
        if self.peek() == Some(b'<') {
            self.pos += 1;
            if self.peek() == Some(b'=') {
                self.pos += 1;
                return Ok(true);
            }
            return Ok(false);
        }
        Err(self.syntax("expected '<' or '<='"))
    }

    fn bound(&mut self) -> Result<f64> {
        self.skip_ws();
        if self.eat_keyword("-inf") {
            return Ok(f64::NEG_INFINITY);
        }
        if self.eat_keyword("inf") {
            return Ok(f64::INFINITY);
        }
        self.number()
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(b) if b.is_ascii_digit() || b == b'.') {
            self.pos += 1;
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        text.parse::<f64>().map_err(|_| {
            self.pos = start;
            self.syntax("expected a number")
        })
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        text.parse::<usize>().map_err(|_| {
            self.pos = start;
            self.syntax("expected an integer")
        })
    }

    /// Signed sum of coordinate terms, e.g. `x1 - x2` or `0.5*x1 + x3`.
    fn linexpr(&mut self) -> Result<Vec<(usize, f64)>> {
        let mut weights: Vec<(usize, f64)> = Vec::new();
        let mut sign = 1.0;
        self.skip_ws();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1.0;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let (coord, coef) = self.coordterm()?;
            let coef = sign * coef;
            match weights.iter_mut().find(|(c, _)| *c == coord) {
                Some((_, w)) => *w += coef,
                None => weights.push((coord, coef)),
            }
            self.skip_ws();
            sign = match self.peek() {
                Some(b'+') => 1.0,
                Some(b'-') => -1.0,
                _ => break,
            };
            self.pos += 1;
        }
        Ok(weights)
    }

    fn coordterm(&mut self) -> Result<(usize, f64)> {
        self.skip_ws();
        let coef = if matches!(self.peek(), Some(b) if b.is_ascii_digit() || b == b'.') {
            let v = self.number()?;
            self.expect(b'*')?;
            v
        } else {
            1.0
        };
        self.skip_ws();
        if self.peek() != Some(b'x') {
            return Err(self.syntax("expected a coordinate term like 'x1'"));
        }
        self.pos += 1;
        let k = self.integer()?;
        if k == 0 {
            return Err(Error::Semantic("coordinate indices start at 1".into()));
        }
        Ok((k - 1, coef))
    }
}
