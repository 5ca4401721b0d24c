use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{LaurentPoly, Var};
use crate::error::{Error, Result};

impl fmt::Display for LaurentPoly {
    /// Canonical rendering: terms sorted descending in the lexicographic
    /// exponent order, `^` for powers, explicit `*`, e.g. `-A^3 + A^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coeff) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = coeff.is_negative();
            let mag = coeff.magnitude();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = &self.vars()[i];
                factors.push(render_factor(v, e));
            }
            if factors.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn render_factor(v: &Var, raw: i64) -> String {
    if v.half {
        if raw % 2 == 0 {
            render_plain(&v.name, raw / 2)
        } else {
            format!("{}^{}/2", v.name, raw)
        }
    } else {
        render_plain(&v.name, raw)
    }
}

fn render_plain(name: &str, e: i64) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{}^{}", name, e)
    }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { s: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphabetic() || self.s[self.pos] == b'_') {
            self.pos += 1;
            while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                self.pos += 1;
            }
            Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string())
        } else {
            self.err("expected variable name")
        }
    }
}

/// Parse the canonical polynomial grammar produced by `Display`.
pub fn parse_poly(input: &str) -> Result<LaurentPoly> {
    let mut lx = Lexer::new(input);
    let p = parse_sum(&mut lx)?;
    lx.skip_ws();
    if lx.pos != lx.s.len() {
        return lx.err("trailing input");
    }
    Ok(p)
}

pub(crate) fn parse_sum(lx: &mut Lexer) -> Result<LaurentPoly> {
    let mut acc = LaurentPoly::zero();
    let mut sign = match lx.peek() {
        Some(b'-') => {
            lx.bump();
            -1
        }
        Some(b'+') => {
            lx.bump();
            1
        }
        _ => 1,
    };
    loop {
        let term = parse_term(lx, sign)?;
        acc = acc.add(&term);
        match lx.peek() {
            Some(b'+') => {
                lx.bump();
                sign = 1;
            }
            Some(b'-') => {
                lx.bump();
                sign = -1;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer, sign: i64) -> Result<LaurentPoly> {
    let mut acc = LaurentPoly::constant(sign);
    let mut saw_factor = false;
    loop {
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = lx.integer()?;
                acc = acc.mul(&LaurentPoly::constant_big(n));
                saw_factor = true;
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = lx.ident()?;
                let mut raw = 2i64; // doubled exponent 1
                let mut half = false;
                if lx.peek() == Some(b'^') {
                    lx.bump();
                    let e: BigInt = lx.integer()?;
                    let e: i64 = e.to_string().parse().map_err(|_| Error::Parse { pos: lx.pos, msg: "exponent too large".into() })?;
                    if lx.peek() == Some(b'/') {
                        lx.bump();
                        let d = lx.integer()?;
                        if d != BigInt::from(2) {
                            return lx.err("only /2 exponents are supported");
                        }
                        raw = e;
                        half = true;
                    } else {
                        raw = 2 * e;
                    }
                }
                let var = if half { Var::half(&name) } else { Var::new(&name) };
                let m = if half {
                    LaurentPoly::monomial_raw(var, raw, BigInt::one())
                } else {
                    LaurentPoly::monomial_raw(var, raw / 2, BigInt::one())
                };
                acc = acc.mul(&m);
                saw_factor = true;
            }
            _ => break,
        }
        if lx.peek() == Some(b'*') {
            lx.bump();
        }
    }
    if !saw_factor {
        return lx.err("expected term");
    }
    Ok(acc)
}

/// Split a combo rendering into (sign, coefficient, label-text) pieces.
/// `is_label_start` recognizes the beginning of a generator label.
pub(crate) fn parse_combo_terms(
    input: &str,
    is_label_start: impl Fn(&str) -> bool,
) -> Result<Vec<(i64, LaurentPoly, String)>> {
    let mut out = Vec::new();
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let mut sign = 1i64;
    // leading sign
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
        sign = if bytes[pos] == b'-' { -1 } else { 1 };
        pos += 1;
    }
    loop {
        // find the end of this term: a top-level ' + ' or ' - '
        let mut depth = 0usize;
        let mut end = pos;
        while end < bytes.len() {
            match bytes[end] {
                b'(' | b'[' => depth += 1,
                b')' | b']' => depth = depth.saturating_sub(1),
                b'+' | b'-' if depth == 0 && end > pos && bytes[end - 1].is_ascii_whitespace() => break,
                _ => {}
            }
            end += 1;
        }
        let piece = input[pos..end].trim();
        if piece.is_empty() {
            return Err(Error::Parse { pos, msg: "empty combo term".into() });
        }
        out.push(split_piece(piece, sign, &is_label_start)?);
        if end >= bytes.len() {
            return Ok(out);
        }
        sign = if bytes[end] == b'-' { -1 } else { 1 };
        pos = end + 1;
    }
}

fn split_piece(
    piece: &str,
    sign: i64,
    is_label_start: &impl Fn(&str) -> bool,
) -> Result<(i64, LaurentPoly, String)> {
    if piece.starts_with('(') {
        let close = matching_paren(piece).ok_or(Error::Parse { pos: 0, msg: "unbalanced parens".into() })?;
        let coeff = parse_poly(&piece[1..close])?;
        let rest = piece[close + 1..].trim_start().trim_start_matches('*');
        return Ok((sign, coeff, rest.trim().to_string()));
    }
    if is_label_start(piece) {
        return Ok((sign, LaurentPoly::one(), piece.to_string()));
    }
    // a monomial coefficient: split at the '*' before the label start
    let mut idx = 0;
    let b = piece.as_bytes();
    while idx < b.len() {
        if b[idx] == b'*' && is_label_start(piece[idx + 1..].trim_start()) {
            let coeff = parse_poly(&piece[..idx])?;
            return Ok((sign, coeff, piece[idx + 1..].trim().to_string()));
        }
        idx += 1;
    }
    // no label at all: a pure scalar term is not valid combo syntax here
    Err(Error::Parse { pos: 0, msg: format!("no generator label in `{piece}`") })
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_examples() {
        let a = LaurentPoly::var("A");
        let p = &LaurentPoly::monomial(&Var::new("A"), 3, -1) + &LaurentPoly::monomial(&Var::new("A"), -1, 1);
        assert_eq!(p.to_string(), "-A^3 + A^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::constant(-7).to_string(), "-7");
        assert_eq!(a.to_string(), "A");
        let q = &LaurentPoly::monomial(&Var::new("t"), 2, 3) - &LaurentPoly::constant(3);
        assert_eq!(q.to_string(), "3*t^2 - 3");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["-A^3 + A^-1", "3*t^2 - 3", "0", "A", "t^1/2 - t^-3/2"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(p.to_string(), s, "round trip failed for {s}");
        }
        // non-canonical input still parses to an equal value
        let p = parse_poly("u^2*t^-1 - 5").unwrap();
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn parse_interop() {
        // multiplication is commutative in the grammar
        let p = parse_poly("2*A*t^2").unwrap();
        let q = parse_poly("t^2*A*2").unwrap();
        assert_eq!(p, q);
    }
}
