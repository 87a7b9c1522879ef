//! The exact coefficient ring ℚ[κ, κ⁻¹], where κ is a formal invertible
//! symbol standing for 2πi.  Keeping κ free (no relation like κ² ∈ ℚ) makes
//! every identity in the toolkit decidable by coefficient comparison, while
//! π² is still representable exactly as −κ²/4.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

pub type Rational = BigRational;

/// Build a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Element of ℚ[κ, κ⁻¹]: a finite map κ-exponent → nonzero rational.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<i64, Rational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(0, r);
        }
        Scalar { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(rat(n, 1))
    }

    /// c·κ^e as a single term.
    pub fn kappa_term(c: Rational, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Scalar { terms }
    }

    /// κ itself.
    pub fn kappa() -> Self {
        Scalar::kappa_term(Rational::one(), 1)
    }

    /// κ^e.
    pub fn kappa_pow(e: i64) -> Self {
        Scalar::kappa_term(Rational::one(), e)
    }

    /// π² = −κ²/4 exactly.
    pub fn pi_squared() -> Self {
        Scalar::kappa_term(rat(-1, 4), 2)
    }

    /// π^{2k} = (−1/4)^k κ^{2k}.
    pub fn pi_pow_even(k: u32) -> Self {
        let c = rat(-1, 4).pow(k as i32);
        Scalar::kappa_term(c, 2 * k as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Coefficient of κ^e (zero if absent).
    pub fn coeff(&self, e: i64) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// The purely rational part, failing if κ-terms are present.
    pub fn as_rational(&self) -> Result<Rational> {
        if self.terms.keys().any(|&e| e != 0) {
            return Err(Error::Validation(format!(
                "scalar {self} is not a plain rational"
            )));
        }
        Ok(self.coeff(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rational)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, e: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e, c * r))
                .collect(),
        }
    }

    /// Multiply by κ^e.
    pub fn mul_kappa_pow(&self, e: i64) -> Self {
        Scalar {
            terms: self.terms.iter().map(|(&k, c)| (k + e, c.clone())).collect(),
        }
    }

    /// Multiplicative inverse for single-term scalars (c·κ^e); the full ring
    /// is not a field, so anything else is rejected.
    pub fn invert_monomial(&self) -> Result<Scalar> {
        if self.terms.len() != 1 {
            return Err(Error::Validation(format!(
                "cannot invert non-monomial scalar {self}"
            )));
        }
        let (&e, c) = self.terms.iter().next().unwrap();
        Ok(Scalar::kappa_term(c.recip(), -e))
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute κ = 2πi numerically.
    pub fn eval(&self) -> Complex64 {
        let kappa = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let mut acc = Complex64::new(0.0, 0.0);
        for (&e, c) in &self.terms {
            let cf = c.to_f64().unwrap_or_else(|| {
                // fall back through numerator/denominator separately
                let n = c.numer().to_f64().unwrap_or(f64::NAN);
                let d = c.denom().to_f64().unwrap_or(f64::NAN);
                n / d
            });
            acc += kappa.powi(e as i32) * cf;
        }
        acc
    }

    /// Text form `c0*k^e0 + c1*k^e1 + …` with rationals as `p/q`.
    pub fn to_text(&self) -> String {
        format!("{self}")
    }

    /// Parse the text form produced by `to_text`.  Accepts `p/q`, `p/q*k^e`,
    /// `k`, `k^e`, joined by `+` or `-`.
    pub fn parse(s: &str) -> Result<Scalar> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Scalar::zero());
        }
        let mut out = Scalar::zero();
        // split into signed summands
        let mut chunks: Vec<(i32, String)> = Vec::new();
        let mut cur = String::new();
        let mut sign = 1;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '+' if !cur.trim().is_empty() => {
                    chunks.push((sign, cur.clone()));
                    cur.clear();
                    sign = 1;
                }
                '-' if i == 0 => sign = -1,
                '-' if !cur.trim().is_empty() && !cur.trim_end().ends_with('^') => {
                    chunks.push((sign, cur.clone()));
                    cur.clear();
                    sign = -1;
                }
                _ => cur.push(ch),
            }
        }
        if !cur.trim().is_empty() {
            chunks.push((sign, cur));
        }
        for (sg, chunk) in chunks {
            let chunk = chunk.trim();
            let (coef_str, kexp) = if let Some(star) = chunk.find('*') {
                let (c, k) = chunk.split_at(star);
                (c.trim().to_string(), parse_kpow(&k[1..])?)
            } else if chunk.starts_with('k') {
                ("1".to_string(), parse_kpow(chunk)?)
            } else {
                (chunk.to_string(), 0)
            };
            let c = parse_rational(&coef_str)?;
            out += &Scalar::kappa_term(c * BigInt::from(sg), kexp);
        }
        Ok(out)
    }
}

fn parse_kpow(s: &str) -> Result<i64> {
    let s = s.trim();
    if s == "k" {
        return Ok(1);
    }
    let rest = s
        .strip_prefix("k^")
        .ok_or_else(|| Error::Parse(format!("bad kappa power `{s}`")))?;
    rest.parse::<i64>()
        .map_err(|e| Error::Parse(format!("bad kappa exponent `{rest}`: {e}")))
}

/// Parse `p` or `p/q` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = n
        .parse()
        .map_err(|e| Error::Parse(format!("bad numerator `{n}`: {e}")))?;
    let den: BigInt = d
        .parse()
        .map_err(|e| Error::Parse(format!("bad denominator `{d}`: {e}")))?;
    if den.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(num, den))
}

pub fn rational_to_text(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in &self.terms {
            let neg = c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
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
            if e == 0 {
                write!(f, "{}", rational_to_text(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", rational_to_text(&mag))?;
                }
                if e == 1 {
                    write!(f, "k")?;
                } else {
                    write!(f, "k^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.insert_term(e, c.clone());
        }
        out
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (&e, c) in &rhs.terms {
            self.insert_term(e, c.clone());
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.insert_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.insert_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_text())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        Scalar::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_times_kappa() {
        let k = Scalar::kappa();
        assert_eq!(&k * &k, Scalar::kappa_pow(2));
    }

    #[test]
    fn pi_squared_representation() {
        // π²·(−1/3)·... : −π²/3 must come out as κ²/12.
        let minus_pi2_over_3 = Scalar::pi_squared().scale(&rat(-1, 3));
        assert_eq!(minus_pi2_over_3, Scalar::kappa_term(rat(1, 12), 2));
    }

    #[test]
    fn product_of_binomials() {
        let k = Scalar::kappa();
        let one = Scalar::one();
        let lhs = &(&k + &one) * &(&k - &one);
        let rhs = &Scalar::kappa_pow(2) - &one;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_basics() {
        let k = Scalar::kappa().eval();
        assert!((k - Complex64::new(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-12);
        let k2 = Scalar::kappa_pow(2).eval();
        let expect = -(2.0 * std::f64::consts::PI).powi(2);
        assert!((k2.re - expect).abs() < 1e-9 && k2.im.abs() < 1e-9);
        assert_eq!(Scalar::one().eval(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn text_round_trip() {
        let s = &Scalar::kappa_term(rat(-3, 7), -2) + &Scalar::from_rational(rat(5, 2));
        let t = s.to_text();
        assert_eq!(Scalar::parse(&t).unwrap(), s);
        assert_eq!(Scalar::parse("0").unwrap(), Scalar::zero());
        assert_eq!(
            Scalar::parse("1/2*k^2 - k + 3").unwrap(),
            &(&Scalar::kappa_term(rat(1, 2), 2) - &Scalar::kappa()) + &Scalar::from_int(3)
        );
    }
}
