//! Truncated formal Laurent series over ℚ[κ, κ⁻¹] and the log-extended
//! q-series type.
//!
//! A `LaurentSeries` knows its coefficients exactly for every exponent ≤ `hi`
//! and is guaranteed to vanish below `lo`.  Asking for a coefficient above
//! `hi` is a `Window` error, never a silent zero; arithmetic propagates the
//! truncation order pessimistically.

use crate::error::{Error, Result};
use crate::scalar::{rat, Rational, Scalar};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Rational binomial coefficient binom(α, k) via the falling factorial.
pub fn binom_rat(alpha: &Rational, k: u32) -> Rational {
    let mut num = Rational::one();
    for i in 0..k {
        num *= alpha - rat(i as i64, 1);
    }
    num / factorial(k)
}

/// Integer binomial binom(n, k) for n possibly negative, k ≥ 0.
pub fn binom_int(n: i64, k: u32) -> Rational {
    binom_rat(&rat(n, 1), k)
}

pub fn factorial(k: u32) -> Rational {
    let mut f = Rational::one();
    for i in 1..=k as i64 {
        f *= rat(i, 1);
    }
    f
}

/// Truncated formal Laurent series in one variable.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    pub var: &'static str,
    /// Guaranteed vanishing bound: no nonzero coefficient below `lo`.
    pub lo: i64,
    /// Truncation order: coefficients are exact for exponents in (−∞, hi].
    pub hi: i64,
    coeffs: BTreeMap<i64, Scalar>,
}

impl LaurentSeries {
    pub fn new(var: &'static str, lo: i64, hi: i64, coeffs: BTreeMap<i64, Scalar>) -> Self {
        let mut s = LaurentSeries {
            var,
            lo,
            hi,
            coeffs,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let (lo, hi) = (self.lo, self.hi);
        self.coeffs.retain(|&e, c| {
            debug_assert!(e >= lo && e <= hi, "coefficient outside window");
            !c.is_zero()
        });
    }

    pub fn zero(var: &'static str, hi: i64) -> Self {
        LaurentSeries {
            var,
            lo: hi,
            hi,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(var: &'static str, c: Scalar, hi: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        LaurentSeries {
            var,
            lo: 0,
            hi,
            coeffs,
        }
    }

    pub fn one(var: &'static str, hi: i64) -> Self {
        Self::constant(var, Scalar::one(), hi)
    }

    /// c·x^e with truncation order `hi`.
    pub fn monomial(var: &'static str, c: Scalar, e: i64, hi: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        LaurentSeries {
            var,
            lo: e.min(hi),
            hi,
            coeffs,
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (&i64, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact coefficient of x^e; `Window` error above the truncation order.
    pub fn coeff(&self, e: i64) -> Result<Scalar> {
        if e > self.hi {
            return Err(Error::Window(format!(
                "coefficient of {}^{} requested, window ends at {}",
                self.var, e, self.hi
            )));
        }
        Ok(self.coeffs.get(&e).cloned().unwrap_or_else(Scalar::zero))
    }

    /// Coefficient of x^{−1}.
    pub fn residue(&self) -> Result<Scalar> {
        self.coeff(-1)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.var, rhs.var);
        let hi = self.hi.min(rhs.hi);
        let lo = self.lo.min(rhs.lo).min(hi);
        let mut coeffs = BTreeMap::new();
        for (&e, c) in self.coeffs.iter().chain(rhs.coeffs.iter()) {
            if e <= hi {
                let entry = coeffs.entry(e).or_insert_with(Scalar::zero);
                *entry += c;
            }
        }
        LaurentSeries::new(self.var, lo, hi, coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            var: self.var,
            lo: self.lo,
            hi: self.hi,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return LaurentSeries::zero(self.var, self.hi);
        }
        LaurentSeries {
            var: self.var,
            lo: self.lo,
            hi: self.hi,
            coeffs: self.coeffs.iter().map(|(&e, k)| (e, k * c)).collect(),
        }
    }

    /// Multiply by x^n (exact window shift).
    pub fn shift(&self, n: i64) -> Self {
        LaurentSeries {
            var: self.var,
            lo: self.lo + n,
            hi: self.hi + n,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e + n, c.clone())).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.var, rhs.var);
        // unknown coefficients above self.hi multiply rhs terms from rhs.lo up,
        // so the product is exact only through min(self.hi+rhs.lo, rhs.hi+self.lo)
        let hi = (self.hi + rhs.lo).min(rhs.hi + self.lo);
        let lo = (self.lo + rhs.lo).min(hi);
        let mut coeffs: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &rhs.coeffs {
                let e = e1 + e2;
                if e <= hi {
                    let entry = coeffs.entry(e).or_insert_with(Scalar::zero);
                    *entry += &(c1 * c2);
                }
            }
        }
        LaurentSeries::new(self.var, lo, hi, coeffs)
    }

    /// Restrict the truncation order (no-op if already tighter).
    pub fn truncate(&self, hi: i64) -> Self {
        if hi >= self.hi {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&e, _)| e <= hi)
            .map(|(&e, c)| (e, c.clone()))
            .collect();
        LaurentSeries::new(self.var, self.lo.min(hi), hi, coeffs)
    }

    /// Formal derivative d/dx.
    pub fn derivative(&self) -> Self {
        let mut coeffs = BTreeMap::new();
        for (&e, c) in &self.coeffs {
            if e != 0 {
                coeffs.insert(e - 1, c.scale(&rat(e, 1)));
            }
        }
        LaurentSeries::new(self.var, self.lo - 1, self.hi - 1, coeffs)
    }

    /// Integer power; negative powers go through `invert`.
    pub fn pow_i64(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.invert()?.pow_i64(-n);
        }
        if n == 0 {
            return Ok(LaurentSeries::one(self.var, (self.hi - self.lo).max(0)));
        }
        let mut acc = LaurentSeries::one(self.var, i64::MAX / 4);
        let mut base = self.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a series whose lowest coefficient sits
    /// exactly at `lo` and is an invertible monomial in ℚ[κ, κ⁻¹].
    pub fn invert(&self) -> Result<Self> {
        let lead = self.coeffs.get(&self.lo).ok_or_else(|| {
            Error::Substitution(format!(
                "cannot invert series with vanishing leading coefficient at {}^{}",
                self.var, self.lo
            ))
        })?;
        let lead_inv = lead.invert_monomial()?;
        // self = lead·x^lo·(1 + g), g = Σ_{j≥1} g_j x^j known through hi−lo
        let rel_hi = self.hi - self.lo;
        let mut g = BTreeMap::new();
        for (&e, c) in &self.coeffs {
            if e > self.lo {
                g.insert(e - self.lo, &lead_inv * c);
            }
        }
        let g = LaurentSeries::new(self.var, 1.min(rel_hi), rel_hi, g);
        // (1+g)^{-1} = Σ (−g)^j, terminates per order since g has lo ≥ 1
        let mut inv_unit = LaurentSeries::one(self.var, rel_hi);
        let mut pw = LaurentSeries::one(self.var, rel_hi);
        for _ in 0..=rel_hi.max(0) {
            pw = pw.mul(&g.neg()).truncate(rel_hi);
            if pw.is_zero_on_window() {
                break;
            }
            inv_unit = inv_unit.add(&pw);
        }
        Ok(inv_unit.scale(&lead_inv).shift(-self.lo))
    }

    /// exp(c·x) truncated at `order`: Σ_{k=0}^{order} c^k x^k / k!.
    pub fn exp_series(var: &'static str, c: &Scalar, order: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        let mut ck = Scalar::one();
        for k in 0..=order.max(0) {
            let term = ck.scale(&factorial(k as u32).recip());
            if !term.is_zero() {
                coeffs.insert(k, term);
            }
            ck = &ck * c;
        }
        LaurentSeries::new(var, 0, order, coeffs)
    }

    /// e^{2πix} − 1 through `order`.
    pub fn expm1(var: &'static str, order: i64) -> Self {
        let e = Self::exp_series(var, &Scalar::kappa(), order);
        e.sub(&LaurentSeries::one(var, order))
    }

    /// (e^{2πix} − 1)^{−m} for m ≥ 1, exact through x^order, by the
    /// factor-out-(2πix)^{−m} procedure: write e^{2πix}−1 = 2πix·(1+h) and
    /// binomially expand (1+h)^{−m}.
    pub fn expm1_inverse_power(var: &'static str, m: u32, order: i64) -> Self {
        let m = m as i64;
        // h = Σ_{k≥2} κ^{k−1} x^{k−1} / k!, needed through x^{order+m}
        let rel = order + m;
        let mut hc = BTreeMap::new();
        let mut kpow = Scalar::kappa();
        for k in 2..=(rel + 1).max(1) {
            let c = kpow.scale(&factorial(k as u32).recip());
            if !c.is_zero() && k - 1 <= rel {
                hc.insert(k - 1, c);
            }
            kpow = &kpow * &Scalar::kappa();
        }
        let h = LaurentSeries::new(var, 1.min(rel), rel, hc);
        // (1+h)^{−m} = Σ_j binom(−m, j) h^j, terminates per order
        let mut unit = LaurentSeries::one(var, rel);
        let mut hj = LaurentSeries::one(var, rel);
        for j in 1..=rel.max(0) {
            hj = hj.mul(&h).truncate(rel);
            if hj.is_zero_on_window() {
                break;
            }
            unit = unit.add(&hj.scale(&Scalar::from_rational(binom_int(-m, j as u32))));
        }
        let kappa_inv_m = Scalar::kappa_pow(-m);
        unit.scale(&kappa_inv_m).shift(-m).truncate(order)
    }

    /// (e^{2πix} − 1)^{j} for any integer j, exact through x^order.
    pub fn expm1_power(var: &'static str, j: i64, order: i64) -> Self {
        if j >= 0 {
            Self::expm1(var, order + j)
                .pow_i64(j)
                .expect("nonnegative power cannot fail")
                .truncate(order)
        } else {
            Self::expm1_inverse_power(var, (-j) as u32, order)
        }
    }

    /// exp(c·l·x) for integer l (used for the e^{±2lπix} kernels).
    pub fn exp_kappa_mult(var: &'static str, l: i64, order: i64) -> Self {
        let c = Scalar::kappa().scale(&rat(l, 1));
        Self::exp_series(var, &c, order)
    }

    /// (1/2πi)·log(1+x) = Σ_{j≥0} (−κ)^j x^{j+1}/(j+1), through `order`.
    pub fn log1p_over_kappa(var: &'static str, order: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        let mut minus_kappa_pow = Scalar::one();
        let minus_kappa = -&Scalar::kappa();
        for j in 0..order.max(0) {
            // (−κ)^j κ^{−1} / (j+1) at x^{j+1}
            let coeff = minus_kappa_pow.scale(&rat(1, j + 1)).mul_kappa_pow(-1);
            coeffs.insert(j + 1, coeff);
            minus_kappa_pow = &minus_kappa_pow * &minus_kappa;
        }
        LaurentSeries::new(var, 1.min(order), order, coeffs)
    }

    /// Σ_m binom(α, m)·(base − 1)^m for a base with unit constant term.
    pub fn binom_pow(&self, alpha: &Rational) -> Result<Self> {
        let c0 = self.coeff(0)?;
        if !c0.is_one() {
            return Err(Error::Substitution(
                "binom_pow requires constant term 1".into(),
            ));
        }
        if self.lo > 0 {
            return Err(Error::Substitution(
                "binom_pow base must include exponent 0 in its window".into(),
            ));
        }
        if self.lo < 0 {
            return Err(Error::Substitution(
                "binom_pow base must be a power series (lo ≥ 0)".into(),
            ));
        }
        let hi = self.hi;
        let dev = self.sub(&LaurentSeries::one(self.var, hi));
        // dev has lo ≥ 1 after subtracting 1
        let mut acc = LaurentSeries::one(self.var, hi);
        let mut pw = LaurentSeries::one(self.var, hi);
        for m in 1..=hi.max(0) {
            pw = pw.mul(&dev).truncate(hi);
            if pw.is_zero_on_window() {
                break;
            }
            acc = acc.add(&pw.scale(&Scalar::from_rational(binom_rat(alpha, m as u32))));
        }
        Ok(acc)
    }

    /// Formal composition outer(inner).  Preconditions: inner has lo = 1;
    /// when outer has negative exponents the x-coefficient of inner must be
    /// an invertible monomial in ℚ[κ, κ⁻¹].
    pub fn substitute(&self, inner: &Self) -> Result<Self> {
        if inner.lo < 1 {
            return Err(Error::Substitution(
                "inner series must have zero constant term (lo = 1)".into(),
            ));
        }
        let olo = self.lo;
        let ohi = self.hi;
        let inner_rel = inner.hi - 1; // u(x) = inner/x known through this order
        let out_hi = ohi.min(olo + inner_rel);
        // u = inner·x^{−1}
        let u = inner.shift(-1);
        let mut upow_cache: BTreeMap<i64, LaurentSeries> = BTreeMap::new();
        upow_cache.insert(0, LaurentSeries::one(self.var, inner_rel));
        let mut result = LaurentSeries::zero(inner.var, out_hi);
        for (&e, c) in &self.coeffs {
            let up = match upow_cache.get(&e) {
                Some(p) => p.clone(),
                None => {
                    let p = if e >= 0 {
                        u.pow_i64(e)?.truncate(inner_rel)
                    } else {
                        u.invert()?.pow_i64(-e)?.truncate(inner_rel)
                    };
                    upow_cache.insert(e, p.clone());
                    p
                }
            };
            // inner^e = x^e · u^e
            result = result.add(&up.shift(e).scale(c).truncate(out_hi));
        }
        Ok(result)
    }

    /// Numeric evaluation at a complex point (κ ↦ 2πi first).
    pub fn eval(&self, x: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (&e, c) in &self.coeffs {
            acc += c.eval() * x.powi(e as i32);
        }
        acc
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};{}..{}](", self.var, self.lo, self.hi)?;
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{}^{}", self.var, e)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl serde::Serialize for LaurentSeries {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("LaurentSeries", 4)?;
        st.serialize_field("var", self.var)?;
        st.serialize_field("lo", &self.lo)?;
        st.serialize_field("hi", &self.hi)?;
        let coeffs: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .map(|(e, c)| (e.to_string(), c.to_text()))
            .collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// Finite sum Σ_{(r,k)} (log q)^k q^r · body(q), r rational in [0, 1) per
/// fractional class, body a Laurent series in integer powers of q (the body
/// window may start below zero: the c = 1 character begins at q^{−1/24}).
#[derive(Clone, PartialEq, Debug)]
pub struct QLogSeries {
    blocks: BTreeMap<(Rational, u32), LaurentSeries>,
}

impl QLogSeries {
    pub fn zero() -> Self {
        QLogSeries {
            blocks: BTreeMap::new(),
        }
    }

    /// Reduce an absolute exponent to (fractional class in [0,1), integer part).
    pub fn split_exponent(r: &Rational) -> (Rational, i64) {
        let fl = r.floor();
        let frac = r - &fl;
        let n = fl.to_integer();
        let n_i64 = i64::try_from(n).expect("q-exponent floor fits in i64");
        (frac, n_i64)
    }

    /// Single term c·(log q)^k·q^r with the body window [n, hi_total] implied
    /// by an absolute truncation exponent.
    pub fn term(c: Scalar, k: u32, r_abs: Rational, body_hi: i64) -> Self {
        let (frac, n) = Self::split_exponent(&r_abs);
        let body = LaurentSeries::monomial("q", c, n, body_hi);
        let mut blocks = BTreeMap::new();
        blocks.insert((frac, k), body);
        QLogSeries { blocks }
    }

    pub fn from_block(r_frac: Rational, k: u32, body: LaurentSeries) -> Self {
        let mut blocks = BTreeMap::new();
        blocks.insert((r_frac, k), body);
        QLogSeries { blocks }
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(Rational, u32), &LaurentSeries)> {
        self.blocks.iter()
    }

    pub fn max_log_power(&self) -> u32 {
        self.blocks.keys().map(|(_, k)| *k).max().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut blocks = self.blocks.clone();
        for (key, body) in &rhs.blocks {
            blocks
                .entry(key.clone())
                .and_modify(|b| *b = b.add(body))
                .or_insert_with(|| body.clone());
        }
        QLogSeries { blocks }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        QLogSeries {
            blocks: self
                .blocks
                .iter()
                .map(|(k, b)| (k.clone(), b.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        QLogSeries {
            blocks: self
                .blocks
                .iter()
                .map(|(k, b)| (k.clone(), b.scale(c)))
                .collect(),
        }
    }

    /// Multiply by q^n for integer n.
    pub fn shift_q(&self, n: i64) -> Self {
        QLogSeries {
            blocks: self
                .blocks
                .iter()
                .map(|(k, b)| (k.clone(), b.shift(n)))
                .collect(),
        }
    }

    /// Multiply by a plain integer-power q-series.
    pub fn mul_qseries(&self, s: &LaurentSeries) -> Self {
        QLogSeries {
            blocks: self
                .blocks
                .iter()
                .map(|(k, b)| (k.clone(), b.mul(s)))
                .collect(),
        }
    }

    /// Exact q·d/dq:  q d/dq[(log q)^k q^{r+n}] =
    /// k (log q)^{k−1} q^{r+n} + (r+n)(log q)^k q^{r+n}.
    pub fn qddq(&self) -> Self {
        let mut out = QLogSeries::zero();
        for ((r, k), body) in &self.blocks {
            // (r+n)·c_n part, same block
            let mut scaled = BTreeMap::new();
            for (&n, c) in body.support() {
                let factor = r + rat(n, 1);
                let v = c.scale(&factor);
                if !v.is_zero() {
                    scaled.insert(n, v);
                }
            }
            let same = LaurentSeries::new("q", body.lo, body.hi, scaled);
            out = out.add(&QLogSeries::from_block(r.clone(), *k, same));
            // k·c_n part, log power drops
            if *k >= 1 {
                let dropped = body.scale(&Scalar::from_int(*k as i64));
                out = out.add(&QLogSeries::from_block(r.clone(), *k - 1, dropped));
            }
        }
        out
    }

    /// Coefficient of (log q)^k q^{r_abs}; `Window` error above a block's
    /// truncation order, zero for classes never touched.
    pub fn coeff(&self, k: u32, r_abs: &Rational) -> Result<Scalar> {
        let (frac, n) = Self::split_exponent(r_abs);
        match self.blocks.get(&(frac, k)) {
            Some(body) => body.coeff(n),
            None => Ok(Scalar::zero()),
        }
    }

    /// True when every stored coefficient inside every block window is zero.
    pub fn is_zero_on_window(&self) -> bool {
        self.blocks.values().all(|b| b.is_zero_on_window())
    }

    /// Truncate every block body to an absolute exponent bound.
    pub fn truncate_abs(&self, hi_abs: &Rational) -> Self {
        let mut blocks = BTreeMap::new();
        for ((r, k), body) in &self.blocks {
            let rel = hi_abs - r;
            let n = rel.floor().to_integer();
            let n = i64::try_from(n).unwrap_or(i64::MAX);
            blocks.insert((r.clone(), *k), body.truncate(n.min(body.hi)));
        }
        QLogSeries { blocks }
    }

    /// Nonzero coefficients as (k, absolute exponent, value), sorted.
    pub fn entries(&self) -> Vec<(u32, Rational, Scalar)> {
        let mut out = Vec::new();
        for ((r, k), body) in &self.blocks {
            for (&n, c) in body.support() {
                out.push((*k, r + rat(n, 1), c.clone()));
            }
        }
        out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x() -> &'static str {
        "x"
    }

    /// Long-division oracle: invert a series naively, coefficient by
    /// coefficient, independent of `invert`'s factor-and-geometric route.
    fn long_division_inverse(s: &LaurentSeries, hi: i64) -> LaurentSeries {
        let lead = s.coeff(s.lo).unwrap();
        let lead_inv = lead.invert_monomial().unwrap();
        let mut inv: BTreeMap<i64, Scalar> = BTreeMap::new();
        let out_lo = -s.lo;
        for e in out_lo..=hi {
            // coefficient of x^{e + s.lo} in s·inv must be δ_{e+s.lo, 0}
            let target = if e + s.lo == 0 {
                Scalar::one()
            } else {
                Scalar::zero()
            };
            let mut acc = Scalar::zero();
            for (&f, c) in inv.iter() {
                let need = e + s.lo - f;
                if need > s.lo {
                    if let Ok(sc) = s.coeff(need) {
                        acc += &(c * &sc);
                    }
                }
            }
            let coef = &(&target - &acc) * &lead_inv;
            if !coef.is_zero() {
                inv.insert(e, coef);
            }
        }
        LaurentSeries::new(s.var, out_lo, hi, inv)
    }

    #[test]
    fn exp_series_examples() {
        let e = LaurentSeries::exp_series(x(), &Scalar::kappa(), 2);
        assert_eq!(e.coeff(0).unwrap(), Scalar::one());
        assert_eq!(e.coeff(1).unwrap(), Scalar::kappa());
        assert_eq!(
            e.coeff(2).unwrap(),
            Scalar::kappa_pow(2).scale(&rat(1, 2))
        );
        let z = LaurentSeries::exp_series(x(), &Scalar::zero(), 5);
        assert_eq!(z, LaurentSeries::one(x(), 5));
        let em = LaurentSeries::exp_series(x(), &-&Scalar::kappa(), 1);
        assert_eq!(em.coeff(1).unwrap(), -&Scalar::kappa());
    }

    #[test]
    fn expm1_inverse_leading_terms() {
        // oracle: long division of e^{2πix}−1
        let m1 = LaurentSeries::expm1_inverse_power(x(), 1, 6);
        let oracle = long_division_inverse(&LaurentSeries::expm1(x(), 8), 6);
        for e in -1..=6 {
            assert_eq!(m1.coeff(e).unwrap(), oracle.coeff(e).unwrap(), "at {e}");
        }
        assert_eq!(m1.coeff(-1).unwrap(), Scalar::kappa_pow(-1));
        assert_eq!(m1.coeff(0).unwrap(), Scalar::from_rational(rat(-1, 2)));
        // m = 2 lowest coefficient
        let m2 = LaurentSeries::expm1_inverse_power(x(), 2, 4);
        assert_eq!(m2.coeff(-2).unwrap(), Scalar::kappa_pow(-2));
    }

    #[test]
    fn expm1_inverse_times_expm1_is_one() {
        for m in 1..=6u32 {
            let inv = LaurentSeries::expm1_inverse_power(x(), m, 6);
            let pos = LaurentSeries::expm1(x(), 8 + m as i64).pow_i64(m as i64).unwrap();
            let prod = inv.mul(&pos);
            assert!(prod.coeff(0).unwrap().is_one(), "m={m}");
            for e in prod.lo..=prod.hi {
                if e != 0 {
                    assert!(prod.coeff(e).unwrap().is_zero(), "m={m} e={e}");
                }
            }
        }
    }

    #[test]
    fn residue_examples() {
        let s = LaurentSeries::monomial(x(), Scalar::one(), -1, 3);
        assert!(s.residue().unwrap().is_one());
        let base = LaurentSeries::new(
            x(),
            0,
            5,
            [(0, Scalar::one()), (1, Scalar::one())].into_iter().collect(),
        );
        let cubed = base.pow_i64(3).unwrap();
        assert!(cubed.residue().unwrap().is_zero());
        // e^{2πix}(e^{2πix}−1)^{−1}: residue κ⁻¹ (long-division oracle)
        let e = LaurentSeries::exp_series(x(), &Scalar::kappa(), 6);
        let inv = long_division_inverse(&LaurentSeries::expm1(x(), 8), 6);
        let s = e.mul(&inv);
        assert_eq!(s.residue().unwrap(), Scalar::kappa_pow(-1));
    }

    #[test]
    fn residue_window_error() {
        let s = LaurentSeries::zero(x(), -2);
        assert!(s.residue().is_err());
    }

    #[test]
    fn substitute_examples() {
        // outer = x², inner = 2x → 4x²
        let outer = LaurentSeries::monomial(x(), Scalar::one(), 2, 6);
        let inner = LaurentSeries::monomial(x(), Scalar::from_int(2), 1, 6);
        let got = outer.substitute(&inner).unwrap();
        assert_eq!(got.coeff(2).unwrap(), Scalar::from_int(4));

        // outer = x⁻¹, inner = (1/2πi)log(1+x): κx⁻¹ + κ/2 + …, checked
        // against the long-division oracle for the inner series inverse.
        let outer = LaurentSeries::monomial(x(), Scalar::one(), -1, 6);
        let inner = LaurentSeries::log1p_over_kappa(x(), 8);
        let got = outer.substitute(&inner).unwrap();
        let oracle = long_division_inverse(&inner, 5);
        for e in -1..=4 {
            assert_eq!(got.coeff(e).unwrap(), oracle.coeff(e).unwrap(), "at {e}");
        }
        assert_eq!(got.coeff(-1).unwrap(), Scalar::kappa());
        assert_eq!(
            got.coeff(0).unwrap(),
            Scalar::kappa().scale(&rat(1, 2))
        );

        // exp(κ·) ∘ (1/2πi)log(1+x) = 1 + x through the window
        let outer = LaurentSeries::exp_series(x(), &Scalar::kappa(), 8);
        let got = outer.substitute(&inner).unwrap();
        assert!(got.coeff(0).unwrap().is_one());
        assert!(got.coeff(1).unwrap().is_one());
        for e in 2..=got.hi {
            assert!(got.coeff(e).unwrap().is_zero(), "at {e}");
        }
    }

    #[test]
    fn binom_pow_examples() {
        let base = LaurentSeries::new(
            x(),
            0,
            6,
            [(0, Scalar::one()), (1, Scalar::one())].into_iter().collect(),
        );
        let inv = base.binom_pow(&rat(-1, 1)).unwrap();
        for e in 0..=6 {
            let expect = if e % 2 == 0 { 1 } else { -1 };
            assert_eq!(inv.coeff(e).unwrap(), Scalar::from_int(expect));
        }
        let half = base.binom_pow(&rat(1, 2)).unwrap();
        assert_eq!(half.coeff(2).unwrap(), Scalar::from_rational(rat(-1, 8)));
        let zero = base.binom_pow(&rat(0, 1)).unwrap();
        assert!(zero.coeff(0).unwrap().is_one());
        for e in 1..=6 {
            assert!(zero.coeff(e).unwrap().is_zero());
        }
    }

    #[test]
    fn qlog_qddq_examples() {
        // q^{1/2} → (1/2)q^{1/2}
        let s = QLogSeries::term(Scalar::one(), 0, rat(1, 2), 4);
        let d = s.qddq();
        assert_eq!(
            d.coeff(0, &rat(1, 2)).unwrap(),
            Scalar::from_rational(rat(1, 2))
        );
        // (log q)·q → q + (log q)·q
        let s = QLogSeries::term(Scalar::one(), 1, rat(1, 1), 4);
        let d = s.qddq();
        assert!(d.coeff(0, &rat(1, 1)).unwrap().is_one());
        assert!(d.coeff(1, &rat(1, 1)).unwrap().is_one());
        // (log q)² → 2·log q
        let s = QLogSeries::term(Scalar::one(), 2, rat(0, 1), 4);
        let d = s.qddq();
        assert_eq!(d.coeff(1, &rat(0, 1)).unwrap(), Scalar::from_int(2));
        assert!(d.coeff(2, &rat(0, 1)).unwrap().is_zero());
    }

    #[test]
    fn derivative_kills_residue() {
        let s = LaurentSeries::new(
            x(),
            -3,
            5,
            [
                (-3, Scalar::kappa()),
                (-1, Scalar::from_int(7)),
                (2, Scalar::from_rational(rat(5, 3))),
            ]
            .into_iter()
            .collect(),
        );
        assert!(s.derivative().residue().unwrap().is_zero());
    }
}
