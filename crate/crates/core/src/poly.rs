//! Exact arithmetic in the aspect-ratio parameter `y`: integer-coefficient
//! polynomials and gcd-reduced rational functions.
//!
//! All symbolic moment computations stay in this domain; floating point only
//! appears when a finished value is evaluated at a numeric `y`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial in `y` with exact integer coefficients, stored sparsely with
/// no explicit zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct YPoly {
    coeffs: BTreeMap<u32, i64>,
}

fn add_i64(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("polynomial coefficient overflow")
}

fn mul_i64(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("polynomial coefficient overflow")
}

impl YPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(0, c)
    }

    /// The variable `y`.
    pub fn y() -> Self {
        Self::monomial(1, 1)
    }

    /// `c * y^e`.
    pub fn monomial(exponent: u32, c: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(exponent, c);
        }
        Self { coeffs }
    }

    /// `y^e`.
    pub fn y_pow(exponent: u32) -> Self {
        Self::monomial(exponent, 1)
    }

    pub fn from_coeffs(pairs: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in pairs {
            out.set(e, add_i64(out.coeff(e), c));
        }
        out
    }

    fn set(&mut self, exponent: u32, c: i64) {
        if c == 0 {
            self.coeffs.remove(&exponent);
        } else {
            self.coeffs.insert(exponent, c);
        }
    }

    pub fn coeff(&self, exponent: u32) -> i64 {
        self.coeffs.get(&exponent).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, i64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0) == 1
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> i64 {
        self.degree().map(|d| self.coeff(d)).unwrap_or(0)
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero();
        if c != 0 {
            for (&e, &a) in &self.coeffs {
                out.set(e, mul_i64(a, c));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate at a floating-point `y` (ascending exponents, fixed order).
    pub fn eval_f64(&self, y: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(&e, &c)| c as f64 * y.powi(e as i32))
            .sum()
    }

    /// Evaluate exactly at the rational point `num/den`.
    pub fn eval_frac(&self, y: Frac) -> Frac {
        let d = self.degree().unwrap_or(0);
        let mut acc_num: i128 = 0;
        for (&e, &c) in &self.coeffs {
            let term = c as i128
                * y.num.checked_pow(e).expect("rational evaluation overflow")
                * y.den
                    .checked_pow(d - e)
                    .expect("rational evaluation overflow");
            acc_num = acc_num.checked_add(term).expect("rational evaluation overflow");
        }
        Frac::new(acc_num, y.den.checked_pow(d).expect("rational evaluation overflow"))
    }

    fn to_dense(&self) -> Vec<i128> {
        let d = match self.degree() {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut v = vec![0i128; d + 1];
        for (&e, &c) in &self.coeffs {
            v[e as usize] = c as i128;
        }
        v
    }

    fn from_dense(v: &[i128]) -> Self {
        let mut out = Self::zero();
        for (e, &c) in v.iter().enumerate() {
            if c != 0 {
                out.set(
                    e as u32,
                    i64::try_from(c).expect("polynomial coefficient overflow"),
                );
            }
        }
        out
    }

    /// Exact quotient `self / rhs` over the integers, or `None` when the
    /// division does not come out exact.
    pub fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let mut rem = self.to_dense();
        let div = rhs.to_dense();
        let dd = div.len() - 1;
        if rem.len() - 1 < dd {
            return None;
        }
        let lead = div[dd];
        let mut quot = vec![0i128; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            if c % lead != 0 {
                return None;
            }
            let q = c / lead;
            quot[i - dd] = q;
            for (j, &dj) in div.iter().enumerate() {
                rem[i - dd + j] -= q * dj;
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return None;
        }
        Some(Self::from_dense(&quot))
    }
}

impl Add for &YPoly {
    type Output = YPoly;
    fn add(self, rhs: &YPoly) -> YPoly {
        let mut out = self.clone();
        for (&e, &c) in &rhs.coeffs {
            out.set(e, add_i64(out.coeff(e), c));
        }
        out
    }
}

impl Sub for &YPoly {
    type Output = YPoly;
    fn sub(self, rhs: &YPoly) -> YPoly {
        let mut out = self.clone();
        for (&e, &c) in &rhs.coeffs {
            out.set(e, add_i64(out.coeff(e), -c));
        }
        out
    }
}

impl Neg for &YPoly {
    type Output = YPoly;
    fn neg(self) -> YPoly {
        self.scale(-1)
    }
}

impl Mul for &YPoly {
    type Output = YPoly;
    fn mul(self, rhs: &YPoly) -> YPoly {
        let mut out = YPoly::zero();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &rhs.coeffs {
                let e = e1 + e2;
                out.set(e, add_i64(out.coeff(e), mul_i64(c1, c2)));
            }
        }
        out
    }
}

impl fmt::Display for YPoly {
    /// Human-readable ascending form, e.g. `1 + 2y - y^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&e, &c)) in self.coeffs.iter().enumerate() {
            let mag = c.unsigned_abs();
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "y")?,
                (1, m) => write!(f, "{m}y")?,
                (e, 1) => write!(f, "y^{e}")?,
                (e, m) => write!(f, "{m}y^{e}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Exact rational numbers
// ---------------------------------------------------------------------------

/// Reduced exact fraction with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Frac {
    num: i128,
    den: i128,
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Frac {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd_i128(num, den).max(1);
        Self {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn from_int(v: i128) -> Self {
        Self { num: v, den: 1 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl std::str::FromStr for Frac {
    type Err = Error;

    /// Parses `"3"` or `"3/2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: i128 = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational numerator {n:?}")))?;
        let den: i128 = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational denominator {d:?}")))?;
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Self::new(num, den))
    }
}

// ---------------------------------------------------------------------------
// Rational functions
// ---------------------------------------------------------------------------

/// Quotient of two [`YPoly`] values, kept gcd-reduced with a
/// positive-leading-coefficient denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFn {
    num: YPoly,
    den: YPoly,
}

/// Content (positive gcd of coefficients) of a dense polynomial.
fn content(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, &c| gcd_i128(g, c))
}

fn primitive(v: &mut Vec<i128>) -> i128 {
    while v.last() == Some(&0) {
        v.pop();
    }
    let c = content(v);
    if c > 1 {
        for x in v.iter_mut() {
            *x /= c;
        }
    }
    c.max(1)
}

/// Pseudo-remainder of `a` by `b` (dense, `b` nonempty).
fn pseudo_rem(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        if dr < db {
            break;
        }
        let c = r[dr];
        if c == 0 {
            r.pop();
            continue;
        }
        // Scale the remainder so the leading term eliminates exactly.
        for x in r.iter_mut() {
            *x = x.checked_mul(lead).expect("gcd coefficient overflow");
        }
        let q = r[dr] / lead;
        for (j, &bj) in b.iter().enumerate() {
            r[dr - db + j] -= q * bj;
        }
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

/// Positive-leading gcd over the integers (primitive PRS with content fixup).
fn poly_gcd(a: &YPoly, b: &YPoly) -> YPoly {
    if a.is_zero() {
        let mut g = b.clone();
        if g.leading_coeff() < 0 {
            g = g.scale(-1);
        }
        return g;
    }
    if b.is_zero() {
        return poly_gcd(b, a);
    }
    let mut da = a.to_dense();
    let mut db = b.to_dense();
    let ca = primitive(&mut da);
    let cb = primitive(&mut db);
    if da.len() < db.len() {
        std::mem::swap(&mut da, &mut db);
    }
    while !db.is_empty() {
        let mut r = pseudo_rem(&da, &db);
        primitive(&mut r);
        da = db;
        db = r;
    }
    let mut g = da;
    let cg = gcd_i128(ca, cb);
    for x in g.iter_mut() {
        *x *= cg;
    }
    if g.last().map(|&c| c < 0).unwrap_or(false) {
        for x in g.iter_mut() {
            *x = -*x;
        }
    }
    YPoly::from_dense(&g)
}

impl RationalFn {
    pub fn new(num: YPoly, den: YPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        let mut out = Self { num, den };
        out.reduce();
        Ok(out)
    }

    pub fn from_poly(p: YPoly) -> Self {
        Self {
            num: p,
            den: YPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(YPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(YPoly::one())
    }

    pub fn num(&self) -> &YPoly {
        &self.num
    }

    pub fn den(&self) -> &YPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = YPoly::one();
            return;
        }
        let g = poly_gcd(&self.num, &self.den);
        if !g.is_one() {
            self.num = self.num.exact_div(&g).expect("gcd divides numerator");
            self.den = self.den.exact_div(&g).expect("gcd divides denominator");
        }
        if self.den.leading_coeff() < 0 {
            self.num = self.num.scale(-1);
            self.den = self.den.scale(-1);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let num = &self.num * &rhs.num;
        let den = &self.den * &rhs.den;
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// The polynomial this rational function reduces to, if any.
    pub fn as_polynomial(&self) -> Option<YPoly> {
        if self.den.is_one() {
            return Some(self.num.clone());
        }
        self.num.exact_div(&self.den)
    }

    pub fn eval_f64(&self, y: f64) -> f64 {
        self.num.eval_f64(y) / self.den.eval_f64(y)
    }

    /// Exact evaluation at a rational point; `None` when the denominator
    /// vanishes there.
    pub fn eval_frac(&self, y: Frac) -> Option<Frac> {
        let n = self.num.eval_frac(y);
        let d = self.den.eval_frac(y);
        if d.num == 0 {
            return None;
        }
        Some(Frac::new(
            n.num.checked_mul(d.den).expect("rational evaluation overflow"),
            n.den.checked_mul(d.num).expect("rational evaluation overflow"),
        ))
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y() -> YPoly {
        YPoly::y()
    }

    #[test]
    fn poly_arithmetic_and_display() {
        let one_plus_y = &YPoly::one() + &y();
        assert_eq!(one_plus_y.to_string(), "1 + y");
        let p = YPoly::from_coeffs([(0, 1), (1, 2)]);
        assert_eq!(p.to_string(), "1 + 2y");
        let sq = &one_plus_y * &one_plus_y;
        assert_eq!(sq, YPoly::from_coeffs([(0, 1), (1, 2), (2, 1)]));
        assert_eq!((&sq - &sq), YPoly::zero());
        assert_eq!(YPoly::zero().to_string(), "0");
        let m = YPoly::from_coeffs([(0, 1), (1, -1), (3, -2)]);
        assert_eq!(m.to_string(), "1 - y - 2y^3");
        assert_eq!(m.eval_f64(2.0), 1.0 - 2.0 - 16.0);
        assert_eq!(
            m.eval_frac(Frac::new(1, 2)),
            Frac::new(1, 4) // 1 - 1/2 - 2/8
        );
    }

    #[test]
    fn poly_json_shape() {
        let p = YPoly::from_coeffs([(0, 1), (1, 2)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "{\"coeffs\":{\"0\":1,\"1\":2}}");
        let back: YPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn exact_division() {
        let one_plus_y = &YPoly::one() + &y();
        let cube = one_plus_y.pow(3);
        assert_eq!(cube.exact_div(&one_plus_y).unwrap(), one_plus_y.pow(2));
        assert_eq!(cube.exact_div(&y()), None);
        assert_eq!(
            YPoly::from_coeffs([(1, 1), (2, 1)]).exact_div(&y()).unwrap(),
            one_plus_y
        );
    }

    #[test]
    fn rational_reduction() {
        let one_plus_y = &YPoly::one() + &y();
        // (y + y^2) / (y(1+y)) = 1
        let r = RationalFn::new(&y() * &one_plus_y, &y() * &one_plus_y).unwrap();
        assert_eq!(r, RationalFn::one());
        // y/(1+y) + 1/(1+y) = 1
        let a = RationalFn::new(y(), one_plus_y.clone()).unwrap();
        let b = RationalFn::new(YPoly::one(), one_plus_y.clone()).unwrap();
        assert_eq!(a.add(&b), RationalFn::one());
        assert_eq!(a.mul(&b).den(), &one_plus_y.pow(2));
        assert!(RationalFn::new(YPoly::one(), YPoly::zero()).is_err());
    }

    #[test]
    fn rational_polynomial_extraction() {
        let one_plus_y = &YPoly::one() + &y();
        let r = RationalFn::new(one_plus_y.pow(3), one_plus_y.pow(2)).unwrap();
        assert_eq!(r.as_polynomial().unwrap(), one_plus_y);
        let s = RationalFn::new(YPoly::one(), one_plus_y).unwrap();
        assert_eq!(s.as_polynomial(), None);
        assert_eq!(s.eval_frac(Frac::new(1, 1)).unwrap(), Frac::new(1, 2));
        assert_eq!(s.eval_frac(Frac::new(-1, 1)), None);
    }

    #[test]
    fn frac_parse_display() {
        let f: Frac = "3/2".parse().unwrap();
        assert_eq!(f, Frac::new(3, 2));
        assert_eq!(f.to_string(), "3/2");
        assert_eq!("4/2".parse::<Frac>().unwrap().to_string(), "2");
        assert!("1/0".parse::<Frac>().is_err());
        assert_eq!(Frac::new(-2, -4), Frac::new(1, 2));
        assert_eq!(Frac::new(2, -4).to_string(), "-1/2");
    }
}
