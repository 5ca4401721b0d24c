use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A named variable. `half` marks variables whose exponents are stored as
/// doubled integers so that half-integer powers stay integral.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub half: bool,
}

impl Var {
    pub fn new(name: &str) -> Self {
        Var { name: name.into(), half: false }
    }

    pub fn half(name: &str) -> Self {
        Var { name: name.into(), half: true }
    }
}

/// Exact integer-coefficient Laurent polynomial in named variables.
///
/// Terms map exponent vectors (aligned with `vars`, which is sorted by name)
/// to nonzero coefficients. The representation is canonical: no zero
/// coefficients, no variable with identically-zero exponents, and the `half`
/// flag is cleared whenever every stored exponent of that variable is even.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LaurentPoly {
    vars: Vec<Var>,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { vars: vec![], terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::constant_big(BigInt::from(c))
    }

    pub fn constant_big(c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![], c);
        }
        LaurentPoly { vars: vec![], terms }
    }

    /// The monomial `c * var^exp` (exp in ordinary units, also for half vars).
    pub fn monomial(var: &Var, exp: i64, c: i64) -> Self {
        let stored = if var.half { 2 * exp } else { exp };
        Self::monomial_raw(var.clone(), stored, BigInt::from(c))
    }

    /// Monomial with a raw stored exponent (doubled when `var.half`).
    pub fn monomial_raw(var: Var, stored_exp: i64, c: BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut terms = BTreeMap::new();
        terms.insert(vec![stored_exp], c);
        let mut p = LaurentPoly { vars: vec![var], terms };
        p.compact();
        p
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(&Var::new(name), 1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().map_or(false, |(e, c)| {
            e.iter().all(|&x| x == 0) && c.is_one()
        })
    }

    /// True when the polynomial is a single term `±x1^e1…xn^en`
    /// (a unit of the Laurent ring).
    pub fn is_unit_monomial(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().next().map_or(false, |c| c.magnitude().is_one())
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    /// Exponents of `var` in raw stored units together with the coefficient
    /// polynomials in the remaining variables, sorted by exponent.
    pub fn coefficients_of(&self, var: &str) -> Vec<(i64, LaurentPoly)> {
        let Some(idx) = self.vars.iter().position(|v| v.name == var) else {
            return if self.is_zero() { vec![] } else { vec![(0, self.clone())] };
        };
        let rest: Vec<Var> = self.vars.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, v)| v.clone()).collect();
        let mut buckets: BTreeMap<i64, BTreeMap<Vec<i64>, BigInt>> = BTreeMap::new();
        for (exps, c) in &self.terms {
            let mut e = exps.clone();
            let ve = e.remove(idx);
            buckets.entry(ve).or_default().insert(e, c.clone());
        }
        buckets
            .into_iter()
            .map(|(e, terms)| {
                let mut p = LaurentPoly { vars: rest.clone(), terms };
                p.compact();
                (e, p)
            })
            .collect()
    }

    /// Rebuild from `coefficients_of`-style parts: `sum coeff * var^exp`
    /// with exponents in raw stored units.
    pub fn from_coefficients(var: &Var, parts: impl IntoIterator<Item = (i64, LaurentPoly)>) -> Self {
        let mut acc = Self::zero();
        for (e, c) in parts {
            let m = Self::monomial_raw(var.clone(), e, BigInt::one());
            acc = &acc + &(&c * &m);
        }
        acc
    }

    /// Minimal and maximal raw exponent of `var`, if the polynomial is nonzero.
    pub fn exp_range(&self, var: &str) -> Option<(i64, i64)> {
        if self.is_zero() {
            return None;
        }
        let Some(idx) = self.vars.iter().position(|v| v.name == var) else {
            return Some((0, 0));
        };
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for exps in self.terms.keys() {
            lo = lo.min(exps[idx]);
            hi = hi.max(exps[idx]);
        }
        Some((lo, hi))
    }

    /// Drop zero coefficients, unused variables, and needless half flags.
    fn compact(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.vars.clear();
            return;
        }
        // drop variables with all-zero exponents
        let n = self.vars.len();
        let mut keep: Vec<bool> = (0..n).map(|i| self.terms.keys().any(|e| e[i] != 0)).collect();
        // demote half vars whose exponents are all even
        for i in 0..n {
            if self.vars[i].half && keep[i] && self.terms.keys().all(|e| e[i] % 2 == 0) {
                self.vars[i].half = false;
                let old = std::mem::take(&mut self.terms);
                for (mut e, c) in old {
                    e[i] /= 2;
                    self.terms.insert(e, c);
                }
            }
            let _ = &mut keep;
        }
        if keep.iter().all(|&k| k) {
            return;
        }
        let old = std::mem::take(&mut self.terms);
        for (e, c) in old {
            let e2: Vec<i64> = e.iter().zip(&keep).filter(|(_, &k)| k).map(|(&x, _)| x).collect();
            self.terms.insert(e2, c);
        }
        let vars = std::mem::take(&mut self.vars);
        self.vars = vars.into_iter().zip(keep).filter(|(_, k)| *k).map(|(v, _)| v).collect();
    }

    /// Align two polynomials over the union of their variables.
    fn aligned(a: &Self, b: &Self) -> (Vec<Var>, Vec<(Vec<i64>, BigInt)>, Vec<(Vec<i64>, BigInt)>) {
        let mut names: BTreeMap<String, bool> = BTreeMap::new();
        for v in a.vars.iter().chain(b.vars.iter()) {
            *names.entry(v.name.clone()).or_insert(false) |= v.half;
        }
        let vars: Vec<Var> = names.iter().map(|(n, &h)| Var { name: n.clone(), half: h }).collect();
        let remap = |p: &Self| -> Vec<(Vec<i64>, BigInt)> {
            let idx: Vec<(usize, i64)> = p
                .vars
                .iter()
                .map(|v| {
                    let j = vars.binary_search_by(|w| w.name.cmp(&v.name)).unwrap();
                    let scale = if vars[j].half && !v.half { 2 } else { 1 };
                    (j, scale)
                })
                .collect();
            p.terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = vec![0i64; vars.len()];
                    for (k, &x) in e.iter().enumerate() {
                        let (j, s) = idx[k];
                        e2[j] = x * s;
                    }
                    (e2, c.clone())
                })
                .collect()
        };
        let ta = remap(a);
        let tb = remap(b);
        (vars, ta, tb)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        LaurentPoly { vars: self.vars.clone(), terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (vars, ta, tb) = Self::aligned(self, other);
        let mut terms: BTreeMap<Vec<i64>, BigInt> = ta.into_iter().collect();
        for (e, c) in tb {
            let entry = terms.entry(e).or_insert_with(BigInt::zero);
            *entry += c;
        }
        let mut p = LaurentPoly { vars, terms };
        p.compact();
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (vars, ta, tb) = Self::aligned(self, other);
        let mut terms: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (ea, ca) in &ta {
            for (eb, cb) in &tb {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = terms.entry(e).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        let mut p = LaurentPoly { vars, terms };
        p.compact();
        p
    }

    pub fn scale(&self, c: i64) -> Self {
        self.mul(&Self::constant(c))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute `var -> target^power` for every entry of `map`; exact.
    pub fn substitute_powers(&self, map: &BTreeMap<String, (Var, i64)>) -> Self {
        let mut acc = Self::zero();
        for (exps, c) in &self.terms {
            let mut term = Self::constant_big(c.clone());
            for (i, &e) in exps.iter().enumerate() {
                let v = &self.vars[i];
                // raw -> ordinary units times 2 to stay integral for half vars
                let doubled_exp = if v.half { e } else { 2 * e };
                let (tv, p) = match map.get(&v.name) {
                    Some((t, p)) => (t.clone(), *p),
                    None => (v.clone(), 1),
                };
                let doubled_target = doubled_exp * p;
                let m = if tv.half {
                    Self::monomial_raw(tv, doubled_target, BigInt::one())
                } else if doubled_target % 2 == 0 {
                    Self::monomial_raw(tv, doubled_target / 2, BigInt::one())
                } else {
                    Self::monomial_raw(Var { name: tv.name, half: true }, doubled_target, BigInt::one())
                };
                term = term.mul(&m);
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Coefficient sign of the lexicographically greatest term.
    fn leading_sign(&self) -> Ordering {
        match self.terms.iter().next_back() {
            Some((_, c)) => {
                if c.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            None => Ordering::Equal,
        }
    }

    /// Canonical representative `± var^k · p` with the minimal `var` exponent
    /// shifted to 0 and a positive leading coefficient.
    pub fn normalize_units(&self, var: &str) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NormalizeZero);
        }
        let mut p = self.clone();
        if let Some(idx) = p.vars.iter().position(|v| v.name == var) {
            let min = p.terms.keys().map(|e| e[idx]).min().unwrap();
            if min != 0 {
                let old = std::mem::take(&mut p.terms);
                for (mut e, c) in old {
                    e[idx] -= min;
                    p.terms.insert(e, c);
                }
            }
        }
        if p.leading_sign() == Ordering::Less {
            p = p.neg();
        }
        p.compact();
        Ok(p)
    }

    /// Shift every variable's minimal exponent to 0 and fix the overall sign.
    /// This is the unit normalization used for gcd outputs.
    pub fn unit_normalize_all(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut p = self.clone();
        let shifts: Vec<i64> = (0..p.vars.len())
            .map(|i| p.terms.keys().map(|e| e[i]).min().unwrap())
            .collect();
        if shifts.iter().any(|&s| s != 0) {
            let old = std::mem::take(&mut p.terms);
            for (mut e, c) in old {
                for (i, s) in shifts.iter().enumerate() {
                    e[i] -= s;
                }
                p.terms.insert(e, c);
            }
        }
        if p.leading_sign() == Ordering::Less {
            p = p.neg();
        }
        p.compact();
        p
    }

    /// Exact quotient `q` with `q * den == self`, or the failing remainder.
    ///
    /// Both operands are shifted into the polynomial domain first so the
    /// leading-term peeling terminates; the monomial shift is restored on
    /// the quotient (division by a unit monomial is always exact).
    pub fn exact_divide(&self, den: &Self) -> Result<Self> {
        assert!(!den.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (vars, tn, td) = Self::aligned(self, den);
        let nvars = vars.len();
        let shift = |terms: Vec<(Vec<i64>, BigInt)>| -> (Vec<i64>, BTreeMap<Vec<i64>, BigInt>) {
            let mut mins = vec![i64::MAX; nvars];
            for (e, _) in &terms {
                for i in 0..nvars {
                    mins[i] = mins[i].min(e[i]);
                }
            }
            let shifted = terms
                .into_iter()
                .map(|(mut e, c)| {
                    for i in 0..nvars {
                        e[i] -= mins[i];
                    }
                    (e, c)
                })
                .collect();
            (mins, shifted)
        };
        let (nshift, mut num) = shift(tn);
        let (dshift, den_map) = shift(td);
        let (dlead_e, dlead_c) = den_map.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();

        let mut quot: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        loop {
            let Some((ne, nc)) = num.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) else {
                // restore the Laurent shift on the quotient
                let terms = quot
                    .into_iter()
                    .map(|(mut e, c)| {
                        for i in 0..nvars {
                            e[i] += nshift[i] - dshift[i];
                        }
                        (e, c)
                    })
                    .collect();
                let mut q = LaurentPoly { vars, terms };
                q.compact();
                return Ok(q);
            };
            let qe: Vec<i64> = ne.iter().zip(&dlead_e).map(|(a, b)| a - b).collect();
            let (qc, rem) = num_integer::Integer::div_rem(&nc, &dlead_c);
            if qe.iter().any(|&x| x < 0) || !rem.is_zero() {
                let mut r = LaurentPoly { vars, terms: num };
                r.compact();
                return Err(Error::NotDivisible { remainder: r.to_string() });
            }
            quot.insert(qe.clone(), qc.clone());
            for (de, dc) in &den_map {
                let e: Vec<i64> = qe.iter().zip(de).map(|(a, b)| a + b).collect();
                let entry = num.entry(e).or_insert_with(BigInt::zero);
                *entry -= &qc * dc;
            }
            num.retain(|_, c| !c.is_zero());
        }
    }

    /// Apply `f` to every coefficient (used e.g. for specializations).
    pub fn map_coeffs(&self, f: impl Fn(&BigInt) -> BigInt) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), f(c))).collect();
        let mut p = LaurentPoly { vars: self.vars.clone(), terms };
        p.compact();
        p
    }

    /// Integer content (gcd of all coefficients), non-negative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = num_integer::Integer::gcd(&g, c);
        }
        g
    }

    /// Evaluate with every variable set to 1 (sum of coefficients).
    pub fn eval_all_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Reverse a univariate polynomial: `t^e -> t^(-e)`. Handy for symmetry checks.
    pub fn invert_var(&self, var: &str) -> Self {
        let mut map = BTreeMap::new();
        if let Some(v) = self.vars.iter().find(|v| v.name == var) {
            map.insert(var.to_string(), (v.clone(), -1));
        }
        self.substitute_powers(&map)
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::add(self, rhs)
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> LaurentPoly {
        LaurentPoly::var("A")
    }

    fn a_inv() -> LaurentPoly {
        LaurentPoly::monomial(&Var::new("A"), -1, 1)
    }

    #[test]
    fn difference_of_squares() {
        let lhs = &(&a() + &a_inv()) * &(&a() - &a_inv());
        let rhs = &LaurentPoly::monomial(&Var::new("A"), 2, 1) - &LaurentPoly::monomial(&Var::new("A"), -2, 1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn add_zero_identity() {
        let p = &a() + &LaurentPoly::constant(7);
        assert_eq!(&p + &LaurentPoly::zero(), p);
    }

    #[test]
    fn sub_self_is_zero() {
        let t = LaurentPoly::var("t");
        let p = &t.pow(2) - &LaurentPoly::one();
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn normalize_units_examples() {
        let t = LaurentPoly::var("t");
        // -t^2 + t -> t - 1
        let p = &t.neg().mul(&t) + &t;
        assert_eq!(p.normalize_units("t").unwrap(), &t - &LaurentPoly::one());
        // t^-3 -> 1
        let q = LaurentPoly::monomial(&Var::new("t"), -3, 1);
        assert_eq!(q.normalize_units("t").unwrap(), LaurentPoly::one());
        // 3t^5 - 3t^3 -> 3t^2 - 3
        let r = &LaurentPoly::monomial(&Var::new("t"), 5, 3) - &LaurentPoly::monomial(&Var::new("t"), 3, 3);
        let want = &LaurentPoly::monomial(&Var::new("t"), 2, 3) - &LaurentPoly::constant(3);
        assert_eq!(r.normalize_units("t").unwrap(), want);
        assert_eq!(LaurentPoly::zero().normalize_units("t"), Err(Error::NormalizeZero));
    }

    #[test]
    fn exact_divide_examples() {
        let t = LaurentPoly::var("t");
        let t2m1 = &t.pow(2) - &LaurentPoly::one();
        let tm1 = &t - &LaurentPoly::one();
        assert_eq!(t2m1.exact_divide(&tm1).unwrap(), &t + &LaurentPoly::one());

        let t5m1 = &t.pow(5) - &LaurentPoly::one();
        let q = t5m1.exact_divide(&tm1).unwrap();
        let want = &(&(&(&t.pow(4) + &t.pow(3)) + &t.pow(2)) + &t) + &LaurentPoly::one();
        assert_eq!(q, want);

        let t2p1 = &t.pow(2) + &LaurentPoly::one();
        assert!(matches!(t2p1.exact_divide(&tm1), Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn substitution_examples() {
        let u = Var::new("u");
        let t = Var::new("t");
        // u*t - 1 with u -> t^2, t -> t^3 gives t^5 - 1
        let p = &(&LaurentPoly::var("u") * &LaurentPoly::var("t")) - &LaurentPoly::one();
        let mut map = BTreeMap::new();
        map.insert("u".to_string(), (t.clone(), 2));
        map.insert("t".to_string(), (t.clone(), 3));
        let got = p.substitute_powers(&map);
        let want = &LaurentPoly::monomial(&t, 5, 1) - &LaurentPoly::one();
        assert_eq!(got, want);

        // u^2 with u -> t^-1 gives t^-2
        let mut map2 = BTreeMap::new();
        map2.insert("u".to_string(), (t.clone(), -1));
        let got2 = LaurentPoly::monomial(&u, 2, 1).substitute_powers(&map2);
        assert_eq!(got2, LaurentPoly::monomial(&t, -2, 1));

        // constants are fixed
        let c = LaurentPoly::constant(7);
        assert_eq!(c.substitute_powers(&map2), LaurentPoly::constant(7));
    }

    #[test]
    fn half_exponents_stay_integral() {
        let t = Var::half("t");
        let half = LaurentPoly::monomial_raw(t.clone(), 1, BigInt::one()); // t^(1/2)
        let one_t = half.mul(&half);
        assert_eq!(one_t, LaurentPoly::var("t"));
    }
}
