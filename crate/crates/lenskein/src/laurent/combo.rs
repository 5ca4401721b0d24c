use std::collections::BTreeMap;
use std::fmt;

use super::poly::LaurentPoly;

/// Formal R-linear combination of named basis generators with Laurent
/// polynomial coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Combo<L: Ord + Clone> {
    terms: BTreeMap<L, LaurentPoly>,
}

impl<L: Ord + Clone> Combo<L> {
    pub fn zero() -> Self {
        Combo { terms: BTreeMap::new() }
    }

    pub fn generator(label: L) -> Self {
        Self::term(label, LaurentPoly::one())
    }

    pub fn term(label: L, coeff: LaurentPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(label, coeff);
        }
        Combo { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, label: &L) -> LaurentPoly {
        self.terms.get(label).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (l, c) in &other.terms {
            let entry = terms.entry(l.clone()).or_insert_with(LaurentPoly::zero);
            *entry = entry.add(c);
        }
        terms.retain(|_, c| !c.is_zero());
        Combo { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&LaurentPoly::constant(-1)))
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(l, p)| (l.clone(), p.mul(c))).collect();
        Combo { terms }
    }

    pub fn add_term(&mut self, label: L, coeff: &LaurentPoly) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(label).or_insert_with(LaurentPoly::zero);
        *entry = entry.add(coeff);
        if entry.is_zero() {
            let keys: Vec<L> = self.terms.iter().filter(|(_, c)| c.is_zero()).map(|(l, _)| l.clone()).collect();
            for k in keys {
                self.terms.remove(&k);
            }
        }
    }

    pub fn map_labels<M: Ord + Clone>(&self, f: impl Fn(&L) -> M) -> Combo<M> {
        let mut out = Combo::zero();
        for (l, c) in &self.terms {
            out.add_term(f(l), c);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        let mut terms = BTreeMap::new();
        for (l, c) in &self.terms {
            let c2 = f(c);
            if !c2.is_zero() {
                terms.insert(l.clone(), c2);
            }
        }
        Combo { terms }
    }

    /// Render with the engine's label syntax: coefficient 1 is omitted,
    /// single-monomial coefficients attach with `*`, and longer coefficients
    /// are parenthesized.
    pub fn render(&self, label_fmt: impl Fn(&L) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (l, c)) in self.terms.iter().enumerate() {
            let (sign, body) = coeff_body(c, &label_fmt(l));
            if i == 0 {
                if sign < 0 {
                    out.push('-');
                }
            } else if sign < 0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        out
    }
}

/// Split the coefficient into an extracted leading sign (if that keeps the
/// output tidy) and the rendered term body.
fn coeff_body(c: &LaurentPoly, label: &str) -> (i8, String) {
    if c.is_one() {
        return (1, label.to_string());
    }
    if c.term_count() == 1 {
        let neg = c.neg();
        if neg.is_one() {
            return (-1, label.to_string());
        }
        let s = c.to_string();
        if let Some(stripped) = s.strip_prefix('-') {
            return (-1, format!("{stripped}*{label}"));
        }
        return (1, format!("{s}*{label}"));
    }
    (1, format!("({c})*{label}"))
}

impl<L: Ord + Clone + fmt::Debug> fmt::Display for Combo<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|l| format!("{l:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_cancels() {
        let x = Combo::term(2u32, LaurentPoly::var("A"));
        let y = Combo::term(2u32, LaurentPoly::var("A").neg());
        assert!(x.add(&y).is_zero());
    }

    #[test]
    fn render_styles() {
        let mut v: Combo<u32> = Combo::zero();
        v.add_term(0, &LaurentPoly::one());
        v.add_term(1, &LaurentPoly::var("A").neg());
        v.add_term(2, &(&LaurentPoly::var("A") + &LaurentPoly::one()));
        let s = v.render(|n| format!("x^{n}"));
        assert_eq!(s, "x^0 - A*x^1 + (A + 1)*x^2");
    }
}
