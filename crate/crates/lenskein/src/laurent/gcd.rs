use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::poly::{LaurentPoly, Var};

/// Gcd in the Laurent polynomial ring over the integers, unique up to units
/// and returned unit-normalized. `gcd(0, 0) = 0` by convention.
///
/// Unit monomials are stripped first; the polynomial gcd is then computed by
/// content/primitive-part recursion with a subresultant PRS in the outer
/// variable. Integer content is retained.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() && b.is_zero() {
        return LaurentPoly::zero();
    }
    if a.is_zero() {
        return b.unit_normalize_all();
    }
    if b.is_zero() {
        return a.unit_normalize_all();
    }
    let pa = a.unit_normalize_all();
    let pb = b.unit_normalize_all();
    gcd_poly(&pa, &pb).unit_normalize_all()
}

/// Gcd of genuine polynomials (all exponents non-negative).
fn gcd_poly(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let main = match a.vars().iter().chain(b.vars().iter()).map(|v| v.clone()).max_by(|x, y| x.name.cmp(&y.name)) {
        Some(v) => v,
        None => {
            // both constants
            let ca = a.content();
            let cb = b.content();
            return LaurentPoly::constant_big(num_integer::Integer::gcd(&ca, &cb));
        }
    };

    let ca = coeffs(a, &main.name);
    let cb = coeffs(b, &main.name);
    let cont_a = content_of(&ca);
    let cont_b = content_of(&cb);
    let cont = gcd_poly(&cont_a, &cont_b);
    let ppa: Vec<LaurentPoly> = ca.iter().map(|c| c.exact_divide(&cont_a).expect("content divides")).collect();
    let ppb: Vec<LaurentPoly> = cb.iter().map(|c| c.exact_divide(&cont_b).expect("content divides")).collect();

    if ppa.len() == 1 || ppb.len() == 1 {
        // a primitive part of degree 0 is 1, so the pp-gcd is trivial
        return cont;
    }

    let pp_gcd = subresultant_prs(ppa, ppb);
    let pp_gcd_poly = assemble(&main, &pp_gcd);
    cont.mul(&pp_gcd_poly)
}

/// Dense coefficient vector of `p` in the variable `main` (constant term first).
fn coeffs(p: &LaurentPoly, main: &str) -> Vec<LaurentPoly> {
    let parts = p.coefficients_of(main);
    let deg = parts.last().map(|(e, _)| *e).unwrap_or(0);
    assert!(parts.iter().all(|(e, _)| *e >= 0), "gcd expects polynomial exponents");
    let mut v = vec![LaurentPoly::zero(); deg as usize + 1];
    for (e, c) in parts {
        v[e as usize] = c;
    }
    v
}

fn assemble(main: &Var, cs: &[LaurentPoly]) -> LaurentPoly {
    LaurentPoly::from_coefficients(main, cs.iter().cloned().enumerate().map(|(i, c)| (i as i64, c)))
}

fn content_of(cs: &[LaurentPoly]) -> LaurentPoly {
    let mut g = LaurentPoly::zero();
    for c in cs {
        if !c.is_zero() {
            g = gcd_poly(&g, c);
        }
    }
    g
}

fn deg(p: &[LaurentPoly]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

fn trim(mut p: Vec<LaurentPoly>) -> Vec<LaurentPoly> {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn is_zero_vec(p: &[LaurentPoly]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn scale_vec(p: &[LaurentPoly], s: &LaurentPoly) -> Vec<LaurentPoly> {
    p.iter().map(|c| c.mul(s)).collect()
}

fn divide_vec(p: &[LaurentPoly], s: &LaurentPoly) -> Vec<LaurentPoly> {
    p.iter().map(|c| c.exact_divide(s).expect("PRS division is exact")).collect()
}

/// Pseudo-remainder of `a` by `b` in the main variable: lc(b)^(deg a - deg b + 1) * a mod b.
fn prem(a: &[LaurentPoly], b: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let db = deg(b);
    let lcb = b[db].clone();
    let mut r = a.to_vec();
    let mut e = deg(a) as i64 - db as i64 + 1;
    while !is_zero_vec(&r) && deg(&r) >= db {
        let dr = deg(&r);
        let lr = r[dr].clone();
        r = scale_vec(&r, &lcb);
        for (i, bc) in b.iter().enumerate() {
            let k = dr - db + i;
            r[k] = r[k].sub(&lr.mul(bc));
        }
        r = trim(r);
        e -= 1;
    }
    let mut extra = LaurentPoly::one();
    for _ in 0..e.max(0) {
        extra = extra.mul(&lcb);
    }
    trim(scale_vec(&r, &extra))
}

/// Subresultant polynomial remainder sequence; returns the primitive gcd of
/// two primitive polynomials given as dense coefficient vectors.
fn subresultant_prs(a: Vec<LaurentPoly>, b: Vec<LaurentPoly>) -> Vec<LaurentPoly> {
    let (mut f, mut g) = if deg(&a) >= deg(&b) { (trim(a), trim(b)) } else { (trim(b), trim(a)) };
    let mut h = LaurentPoly::one();
    let mut gamma = LaurentPoly::one();
    loop {
        let d = deg(&f) as i64 - deg(&g) as i64;
        let r = prem(&f, &g);
        if is_zero_vec(&r) {
            return primitive_part(&g);
        }
        if deg(&r) == 0 {
            return vec![LaurentPoly::one()];
        }
        // divisor gamma * h^d is exact by the subresultant theory
        let mut div = gamma.clone();
        for _ in 0..d {
            div = div.mul(&h);
        }
        f = g;
        g = divide_vec(&r, &div);
        gamma = f[deg(&f)].clone();
        h = if d >= 1 {
            let mut num = LaurentPoly::one();
            for _ in 0..d {
                num = num.mul(&gamma);
            }
            let mut den = LaurentPoly::one();
            for _ in 0..(d - 1) {
                den = den.mul(&h);
            }
            num.exact_divide(&den).expect("subresultant h update is exact")
        } else {
            gamma.clone()
        };
    }
}

fn primitive_part(p: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let cont = content_of(p);
    p.iter().map(|c| c.exact_divide(&cont).expect("content divides")).collect()
}

/// Integer gcd helper for reuse by callers working with plain integers.
pub fn int_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let g: BigInt = num_integer::Integer::gcd(a, b);
    if g.is_negative() {
        -g
    } else {
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> LaurentPoly {
        LaurentPoly::var("t")
    }

    #[test]
    fn factorization_oracle_example() {
        // t^2 - 1 = (t-1)(t+1), t^3 - 1 = (t-1)(t^2+t+1): gcd is t - 1
        let p = &t().pow(2) - &LaurentPoly::one();
        let q = &t().pow(3) - &LaurentPoly::one();
        assert_eq!(gcd(&p, &q), &t() - &LaurentPoly::one());
    }

    #[test]
    fn gcd_with_zero_normalizes() {
        let p = LaurentPoly::monomial(&Var::new("t"), -2, -3); // -3 t^-2
        assert_eq!(gcd(&p, &LaurentPoly::zero()), LaurentPoly::constant(3));
        assert_eq!(gcd(&LaurentPoly::zero(), &LaurentPoly::zero()), LaurentPoly::zero());
    }

    #[test]
    fn integer_content_retained() {
        let p = &t().scale(2) - &LaurentPoly::constant(2);
        let q = &t().scale(4) - &LaurentPoly::constant(4);
        assert_eq!(gcd(&p, &q), p);
    }

    #[test]
    fn bivariate_gcd() {
        let u = LaurentPoly::var("u");
        let common = &(&u * &t()) - &LaurentPoly::one();
        let p = common.mul(&(&u + &t()));
        let q = common.mul(&(&u.pow(2) + &LaurentPoly::constant(3)));
        assert_eq!(gcd(&p, &q), common.unit_normalize_all());
    }
}
