//! Capped-precision arithmetic in `Z_p`.
//!
//! A [`PAdicInt`] is an element of `Z_p` known modulo `p^N`. Every value
//! carries its own precision `N`; binary operations resolve mixed
//! precision to the minimum and never invent digits. Residues are kept in
//! a single machine word, so `p^N` must fit in a `u64` (for `p = 3` that is
//! 40 digits, for `p = 7` it is 22).
//!
//! Ratios that leave `Z_p` (values such as `1/p` or `(u/p - 1) * d`) are
//! handled by [`PAdicFraction`], a numerator over an explicit power of `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};

/// Largest precision `N` with `p^N <= u64::MAX`.
pub fn max_precision(p: u64) -> u32 {
    let mut n = 0u32;
    let mut m: u64 = 1;
    while let Some(next) = m.checked_mul(p) {
        m = next;
        n += 1;
    }
    n
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `p`-adic valuation of a nonzero integer.
pub fn int_valuation(mut k: u64, p: u64) -> u32 {
    debug_assert!(k != 0);
    let mut v = 0;
    while k.is_multiple_of(p) {
        k /= p;
        v += 1;
    }
    v
}

/// `floor(log_p k)` for `k >= 1`.
pub fn floor_log(mut k: u64, p: u64) -> u32 {
    let mut r = 0;
    while k >= p {
        k /= p;
        r += 1;
    }
    r
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    let order = p - 1;
    let mut factors = Vec::new();
    let mut m = order;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, order / q, p) != 1)).unwrap_or(1)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Working parameters shared by the series-level modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PAdicConfig {
    pub prime: u64,
    /// Target precision `N` of reported results.
    pub precision: u32,
    /// Degree cap `D` for truncated series.
    pub degree_cap: usize,
    /// Extra digits carried internally and sacrificed to denominators.
    pub slack: u32,
}

impl PAdicConfig {
    pub fn new(prime: u64, precision: u32, degree_cap: usize) -> Result<Self> {
        // every base-p digit of D can cost a digit twice: once in the
        // logarithm recursion and once when clearing its denominators
        let mut slack = 1;
        let mut d = degree_cap.max(1) as u64;
        while d > 0 {
            d /= prime.max(2);
            slack += 2;
        }
        let cfg = PAdicConfig { prime, precision, degree_cap, slack };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_slack(mut self, slack: u32) -> Result<Self> {
        self.slack = slack;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.prime) || self.prime == 2 {
            return Err(Error::UnsupportedPrime(self.prime));
        }
        if self.precision == 0 {
            return Err(Error::InvalidArgument("precision must be positive".into()));
        }
        let max = max_precision(self.prime);
        if self.working_precision() > max {
            return Err(Error::PrecisionTooLarge { p: self.prime, precision: self.working_precision(), max });
        }
        Ok(())
    }

    /// `N + slack`, the precision used inside series recursions.
    pub fn working_precision(&self) -> u32 {
        self.precision + self.slack
    }

    pub fn zero(&self) -> PAdicInt {
        PAdicInt::zero(self.prime, self.precision)
    }

    pub fn int(&self, v: i64) -> PAdicInt {
        PAdicInt::from_i64(self.prime, self.precision, v)
    }
}

/// An element of `Z_p` known modulo `p^N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdicInt {
    p: u64,
    prec: u32,
    modulus: u64,
    residue: u64,
}

impl PAdicInt {
    /// Builds `value mod p^precision`. Panics if `p^precision` overflows a
    /// `u64`; use [`PAdicInt::try_new`] for a checked constructor.
    pub fn from_i64(p: u64, precision: u32, value: i64) -> Self {
        Self::try_new(p, precision, value as i128).expect("precision out of range")
    }

    pub fn try_new(p: u64, precision: u32, value: i128) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::UnsupportedPrime(p));
        }
        let max = max_precision(p);
        if precision > max {
            return Err(Error::PrecisionTooLarge { p, precision, max });
        }
        let modulus = p.pow(precision);
        let residue = value.rem_euclid(modulus as i128) as u64;
        Ok(PAdicInt { p, prec: precision, modulus, residue })
    }

    pub fn from_residue(p: u64, precision: u32, residue: u64) -> Self {
        let modulus = p.pow(precision);
        PAdicInt { p, prec: precision, modulus, residue: residue % modulus }
    }

    pub fn zero(p: u64, precision: u32) -> Self {
        Self::from_residue(p, precision, 0)
    }

    pub fn one(p: u64, precision: u32) -> Self {
        Self::from_residue(p, precision, 1)
    }

    pub fn random<R: Rng + ?Sized>(p: u64, precision: u32, rng: &mut R) -> Self {
        let modulus = p.pow(precision);
        Self::from_residue(p, precision, rng.random_range(0..modulus))
    }

    pub fn random_unit<R: Rng + ?Sized>(p: u64, precision: u32, rng: &mut R) -> Self {
        loop {
            let x = Self::random(p, precision, rng);
            if x.is_unit() {
                return x;
            }
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// Representative in `(-p^N/2, p^N/2]`.
    pub fn signed_residue(&self) -> i128 {
        let r = self.residue as i128;
        if r > (self.modulus / 2) as i128 {
            r - self.modulus as i128
        } else {
            r
        }
    }

    /// Largest `v < N` with `p^v | residue`, or `None` when the residue is
    /// zero modulo `p^N` (valuation indistinguishable from `>= N`).
    pub fn valuation(&self) -> Option<u32> {
        if self.residue == 0 {
            return None;
        }
        Some(int_valuation(self.residue, self.p))
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn is_unit(&self) -> bool {
        self.prec > 0 && !self.residue.is_multiple_of(self.p)
    }

    fn same_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "p-adic integers over different primes");
    }

    /// Drops precision to `min(N, n)`.
    pub fn reduce_precision(&self, n: u32) -> Self {
        if n >= self.prec {
            *self
        } else {
            Self::from_residue(self.p, n, self.residue)
        }
    }

    /// Zero-extends the residue to precision `n`. The new digits are
    /// *asserted* to be zero, so this is only for values whose lift is
    /// exact by construction (integers, or fixed-modulus recursions whose
    /// final output is truncated again).
    pub(crate) fn lift_precision(&self, n: u32) -> Self {
        if n <= self.prec {
            return *self;
        }
        Self::from_residue(self.p, n.min(max_precision(self.p)), self.residue)
    }

    /// `p^k * x`, known to precision `N + k` (capped by the word size).
    pub fn mul_p_pow(&self, k: u32) -> Self {
        let n = (self.prec + k).min(max_precision(self.p));
        let shifted = self.lift_precision(n);
        shifted * Self::from_residue(self.p, n, self.p.pow(k.min(n)))
    }

    /// Exact division by `p^k`; the result is known to precision `N - k`.
    pub fn div_p_pow_exact(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(*self);
        }
        if k > self.prec {
            return Err(Error::PrecisionExhausted("division by p consumed all digits".into()));
        }
        let pk = self.p.pow(k);
        if !self.residue.is_multiple_of(pk) {
            return Err(Error::NotDivisible { p: self.p, power: k });
        }
        Ok(Self::from_residue(self.p, self.prec - k, self.residue / pk))
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let inv = inv_mod(self.residue, self.modulus).ok_or(Error::NotAUnit)?;
        Ok(Self { residue: inv, ..*self })
    }

    /// `self / other` for a unit `other`.
    pub fn div_unit(&self, other: &Self) -> Result<Self> {
        Ok(*self * other.inverse()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.p, self.prec);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn mul_int(&self, k: i64) -> Self {
        *self * Self::from_i64(self.p, self.prec, k)
    }

    /// Number of leading digits on which `self` and `other` agree, capped at
    /// the common precision.
    pub fn agreement(&self, other: &Self) -> u32 {
        let d = *self - *other;
        d.valuation().unwrap_or(d.prec)
    }

    /// Equality modulo `p^min(N_self, N_other)`.
    pub fn congruent(&self, other: &Self) -> bool {
        (*self - *other).is_zero()
    }

    /// The unique `(p-1)`-st root of unity congruent to `self` mod `p`.
    pub fn teichmuller(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let mut x = *self;
        for _ in 0..self.prec {
            let next = x.pow(self.p);
            if next == x {
                break;
            }
            x = next;
        }
        Ok(x)
    }

    /// Principal-unit part `x / teichmuller(x)`.
    pub fn one_unit_part(&self) -> Result<Self> {
        self.div_unit(&self.teichmuller()?)
    }

    /// `log(1 + x)` for `x` in `pZ_p`.
    ///
    /// The logarithm is an isometry of `pZ_p` for odd `p`. Each term is
    /// evaluated as `y^k * p^(vk - v_p(k)) / (k / p^v_p(k))` with
    /// `x = p^v y`, so no digit is lost: the result has the full input
    /// precision.
    pub fn log1p(&self) -> Result<Self> {
        let n = self.prec;
        let v = match self.valuation() {
            None => return Ok(Self::zero(self.p, n)),
            Some(0) => return Err(Error::NotInMaximalIdeal),
            Some(v) => v,
        };
        let y = self.div_p_pow_exact(v)?;
        let mut acc = Self::zero(self.p, n);
        let mut y_pow = Self::one(self.p, y.prec);
        let mut k: u64 = 1;
        loop {
            // v*k - floor(log_p k) bounds the valuation of every term from k on
            if v as u64 * k - floor_log(k, self.p) as u64 >= n as u64 {
                break;
            }
            let vk = int_valuation(k, self.p);
            let shift = v as u64 * k - vk as u64;
            y_pow = y_pow * y;
            if shift < n as u64 {
                let unit = Self::from_i64(self.p, n, (k / self.p.pow(vk)) as i64);
                let term = y_pow.mul_p_pow(shift as u32).reduce_precision(n).div_unit(&unit)?;
                acc = if k % 2 == 1 { acc + term } else { acc - term };
            }
            k += 1;
        }
        Ok(acc.reduce_precision(n))
    }

    /// `exp(x)` for `x` in `pZ_p`, with the same no-loss evaluation as
    /// [`PAdicInt::log1p`]: the factorial's `p`-part is cancelled exactly.
    pub fn exp(&self) -> Result<Self> {
        let n = self.prec;
        let v = match self.valuation() {
            None => return Ok(Self::one(self.p, n)),
            Some(0) => return Err(Error::NotInMaximalIdeal),
            Some(v) => v,
        };
        let y = self.div_p_pow_exact(v)?;
        let mut acc = Self::one(self.p, n);
        let mut y_pow = Self::one(self.p, y.prec);
        let mut fact_unit = Self::one(self.p, n);
        let mut fact_val: u64 = 0;
        let p = self.p;
        let mut k: u64 = 1;
        loop {
            // lower bound v*k - (k-1)/(p-1) for every term from k on
            let bound = (v as u64 * k) as f64 - (k as f64 - 1.0) / (p as f64 - 1.0);
            if bound >= n as f64 {
                break;
            }
            let vk = int_valuation(k, p);
            fact_val += vk as u64;
            fact_unit = fact_unit.mul_int((k / p.pow(vk)) as i64);
            y_pow = y_pow * y;
            let shift = v as u64 * k - fact_val;
            if shift < n as u64 {
                let term = y_pow.mul_p_pow(shift as u32).reduce_precision(n).div_unit(&fact_unit)?;
                acc = acc + term;
            }
            k += 1;
        }
        Ok(acc)
    }
}

impl Add for PAdicInt {
    type Output = PAdicInt;
    fn add(self, rhs: Self) -> Self {
        self.same_prime(&rhs);
        let (a, b) = align(self, rhs);
        let m = a.modulus as u128;
        let r = ((a.residue as u128 + b.residue as u128) % m) as u64;
        PAdicInt { residue: r, ..a }
    }
}

impl Sub for PAdicInt {
    type Output = PAdicInt;
    fn sub(self, rhs: Self) -> Self {
        self.same_prime(&rhs);
        let (a, b) = align(self, rhs);
        let m = a.modulus as u128;
        let r = ((a.residue as u128 + m - b.residue as u128) % m) as u64;
        PAdicInt { residue: r, ..a }
    }
}

impl Mul for PAdicInt {
    type Output = PAdicInt;
    fn mul(self, rhs: Self) -> Self {
        self.same_prime(&rhs);
        let (a, b) = align(self, rhs);
        PAdicInt { residue: mul_mod(a.residue, b.residue, a.modulus), ..a }
    }
}

impl Neg for PAdicInt {
    type Output = PAdicInt;
    fn neg(self) -> Self {
        let r = if self.residue == 0 { 0 } else { self.modulus - self.residue };
        PAdicInt { residue: r, ..self }
    }
}

#[inline]
fn align(a: PAdicInt, b: PAdicInt) -> (PAdicInt, PAdicInt) {
    if a.prec == b.prec {
        (a, b)
    } else if a.prec < b.prec {
        (a, b.reduce_precision(a.prec))
    } else {
        (a.reduce_precision(b.prec), b)
    }
}

impl fmt::Debug for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.signed_residue(), self.p, self.prec)
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `numerator / p^den_exp` with `numerator` in `Z_p`.
///
/// The absolute precision of the value is `N(numerator) - den_exp`, which
/// can be negative when every known digit was consumed by the denominator.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct PAdicFraction {
    numerator: PAdicInt,
    den_exp: u32,
}

impl PAdicFraction {
    pub fn new(numerator: PAdicInt, den_exp: u32) -> Self {
        PAdicFraction { numerator, den_exp }.normalized()
    }

    pub fn integral(x: PAdicInt) -> Self {
        PAdicFraction { numerator: x, den_exp: 0 }
    }

    pub fn numerator(&self) -> PAdicInt {
        self.numerator
    }

    pub fn den_exp(&self) -> u32 {
        self.den_exp
    }

    pub fn prime(&self) -> u64 {
        self.numerator.p
    }

    /// Absolute precision: the value is known modulo `p^precision`.
    pub fn precision(&self) -> i64 {
        self.numerator.prec as i64 - self.den_exp as i64
    }

    /// `None` when no known digit is nonzero.
    pub fn valuation(&self) -> Option<i64> {
        self.numerator.valuation().map(|v| v as i64 - self.den_exp as i64)
    }

    pub fn is_integral(&self) -> bool {
        self.den_exp == 0
    }

    pub fn to_integral(&self) -> Option<PAdicInt> {
        (self.den_exp == 0).then_some(self.numerator)
    }

    fn normalized(mut self) -> Self {
        while self.den_exp > 0 && self.numerator.prec > 0 && self.numerator.residue.is_multiple_of(self.numerator.p) {
            if self.numerator.is_zero() {
                // zero numerator: keep the absolute precision, clear the denominator
                let prec = self.precision().max(0) as u32;
                return PAdicFraction { numerator: PAdicInt::zero(self.numerator.p, prec), den_exp: 0 };
            }
            self.numerator = self.numerator.div_p_pow_exact(1).expect("divisible");
            self.den_exp -= 1;
        }
        self
    }

    /// `x / p^k`.
    pub fn div_p_pow(&self, k: u32) -> Self {
        PAdicFraction { numerator: self.numerator, den_exp: self.den_exp + k }.normalized()
    }

    pub fn scale(&self, x: &PAdicInt) -> Self {
        PAdicFraction { numerator: self.numerator * *x, den_exp: self.den_exp }.normalized()
    }

    /// Multiplication by an integer, raising the numerator's precision by
    /// the `p`-part of `k` so no digit is lost.
    pub fn mul_int(&self, k: i64) -> Self {
        if k == 0 {
            let prec = self.precision().max(0) as u32;
            return PAdicFraction { numerator: PAdicInt::zero(self.prime(), prec), den_exp: 0 };
        }
        let p = self.prime();
        let v = int_valuation(k.unsigned_abs(), p);
        let unit = k / (p.pow(v) as i64);
        let num = self.numerator.mul_p_pow(v).mul_int(unit);
        PAdicFraction { numerator: num, den_exp: self.den_exp }.normalized()
    }

    /// Digits of agreement in absolute terms; capped at the common precision.
    pub fn agreement(&self, other: &Self) -> i64 {
        let d = *self - *other;
        d.valuation().unwrap_or_else(|| d.precision())
    }
}

impl Add for PAdicFraction {
    type Output = PAdicFraction;
    fn add(self, rhs: Self) -> Self {
        let k = self.den_exp.max(rhs.den_exp);
        let a = self.numerator.mul_p_pow(k - self.den_exp);
        let b = rhs.numerator.mul_p_pow(k - rhs.den_exp);
        PAdicFraction { numerator: a + b, den_exp: k }.normalized()
    }
}

impl Sub for PAdicFraction {
    type Output = PAdicFraction;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for PAdicFraction {
    type Output = PAdicFraction;
    fn neg(self) -> Self {
        PAdicFraction { numerator: -self.numerator, den_exp: self.den_exp }
    }
}

impl Mul for PAdicFraction {
    type Output = PAdicFraction;
    fn mul(self, rhs: Self) -> Self {
        PAdicFraction { numerator: self.numerator * rhs.numerator, den_exp: self.den_exp + rhs.den_exp }.normalized()
    }
}

impl fmt::Debug for PAdicFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_exp == 0 {
            write!(f, "{:?}", self.numerator)
        } else {
            write!(f, "({:?}) / {}^{}", self.numerator, self.numerator.p, self.den_exp)
        }
    }
}

impl fmt::Display for PAdicFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_xoshiro::SplitMix64;

    fn z(p: u64, n: u32, v: i64) -> PAdicInt {
        PAdicInt::from_i64(p, n, v)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(z(5, 4, 0).valuation(), None);
        assert_eq!(z(5, 4, 75).valuation(), Some(2));
        // repeated division oracle
        let mut x = 486u64;
        let mut v = 0;
        while x.is_multiple_of(3) {
            x /= 3;
            v += 1;
        }
        assert_eq!(z(3, 6, 486).valuation(), Some(v));
        assert_eq!(v, 5);
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(z(5, 1, 2).teichmuller().unwrap(), z(5, 1, 2));
        assert_eq!(z(7, 3, 1).teichmuller().unwrap(), z(7, 3, 1));
        // fixpoint iteration oracle on raw integers
        let m = 625u64;
        let mut x = 2u64;
        loop {
            let next = pow_mod(x, 5, m);
            if next == x {
                break;
            }
            x = next;
        }
        assert_eq!(z(5, 4, 2).teichmuller().unwrap().residue(), x);
        assert!(matches!(z(5, 4, 10).teichmuller(), Err(Error::NotAUnit)));
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        for p in [3u64, 5, 7, 11] {
            for a in 1..p {
                let w = z(p, 8, a as i64).teichmuller().unwrap();
                assert_eq!(w.pow(p - 1), z(p, 8, 1));
                assert_eq!(w.residue() % p, a);
            }
        }
    }

    #[test]
    fn log_and_exp_zero() {
        assert_eq!(z(5, 6, 0).log1p().unwrap(), z(5, 6, 0));
        assert_eq!(z(5, 6, 0).exp().unwrap(), z(5, 6, 1));
        assert!(matches!(z(5, 6, 2).log1p(), Err(Error::NotInMaximalIdeal)));
    }

    #[test]
    fn log_exp_round_trip() {
        let mut rng = SplitMix64::seed_from_u64(7);
        for p in [3u64, 5, 7] {
            for _ in 0..50 {
                let x = PAdicInt::random(p, 12, &mut rng).mul_p_pow(1).reduce_precision(12);
                let e = x.exp().unwrap();
                assert_eq!((e - z(p, 12, 1)).log1p().unwrap(), x);
                let l = x.log1p().unwrap();
                assert_eq!(l.exp().unwrap() - z(p, 12, 1), x);
            }
        }
    }

    #[test]
    fn log_is_additive() {
        let mut rng = SplitMix64::seed_from_u64(11);
        for p in [3u64, 5, 7] {
            for _ in 0..50 {
                let u = z(p, 10, 1) + PAdicInt::random(p, 9, &mut rng).mul_p_pow(1);
                let v = z(p, 10, 1) + PAdicInt::random(p, 9, &mut rng).mul_p_pow(1);
                let lhs = (u * v - z(p, 10, 1)).log1p().unwrap();
                let rhs = (u - z(p, 10, 1)).log1p().unwrap() + (v - z(p, 10, 1)).log1p().unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn fraction_arithmetic() {
        let third = PAdicFraction::new(z(3, 8, 1), 1);
        let two_thirds = third + third;
        assert_eq!(two_thirds.den_exp(), 1);
        let one = third + third + third;
        assert_eq!(one.den_exp(), 0);
        assert_eq!(one.numerator().residue(), 1);
        assert_eq!(one.precision(), 7);
        assert_eq!(third.valuation(), Some(-1));
    }

    #[test]
    fn mixed_precision_resolves_to_minimum() {
        let a = z(5, 3, 7);
        let b = z(5, 6, 11);
        assert_eq!((a + b).precision(), 3);
        assert_eq!((a * b).precision(), 3);
    }

    #[test]
    fn exact_division() {
        assert_eq!(z(3, 6, 18).div_p_pow_exact(2).unwrap(), z(3, 4, 2));
        assert!(matches!(z(3, 6, 19).div_p_pow_exact(1), Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
    }
}
