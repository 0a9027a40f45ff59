//! Truncated power series in one or two variables.
//!
//! Every series carries a degree cap `D` and an `exact` flag. An inexact
//! series is known modulo degree `D + 1`; an exact one is a polynomial
//! whose coefficients above `D` are known to vanish. Operations compute the
//! cap of their result from the caps (and exactness) of their inputs, so
//! comparisons never claim more than was computed.

use crate::error::{Error, Result};
use crate::padic::PAdicInt;
use crate::ring::Coefficient;

#[derive(Clone, Debug)]
pub struct TruncatedSeries<C: Coefficient> {
    ring: C::Ring,
    vars: usize,
    cap: usize,
    exact: bool,
    coeffs: Vec<C>,
}

#[inline]
fn tri(d: usize) -> usize {
    d * (d + 1) / 2
}

#[inline]
fn idx2(i: usize, j: usize) -> usize {
    tri(i + j) + j
}

fn storage_len(vars: usize, cap: usize) -> usize {
    if vars == 1 {
        cap + 1
    } else {
        tri(cap + 1)
    }
}

/// Cap of a result built from the given `(exact, cap)` inputs; `exact_cap`
/// is the cap to use when every input is exact.
fn combine_caps(parts: &[(bool, usize)], exact_cap: usize) -> (bool, usize) {
    let inexact = parts.iter().filter(|(e, _)| !e).map(|&(_, c)| c).min();
    match inexact {
        None => (true, exact_cap),
        Some(c) => (false, c),
    }
}

fn mul_uni<C: Coefficient>(ring: &C::Ring, a: &[C], b: &[C], cap: usize) -> Vec<C> {
    let mut out = vec![C::zero(ring); cap + 1];
    let la = a.len().min(cap + 1);
    for (i, ai) in a[..la].iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        let lb = b.len().min(cap + 1 - i);
        for (j, bj) in b[..lb].iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] = out[i + j].add(&ai.mul(bj));
            }
        }
    }
    out
}

fn mul_bi<C: Coefficient>(ring: &C::Ring, a: &[C], a_cap: usize, b: &[C], b_cap: usize, cap: usize) -> Vec<C> {
    let mut out = vec![C::zero(ring); tri(cap + 1)];
    for da in 0..=a_cap.min(cap) {
        for ja in 0..=da {
            let x = &a[idx2(da - ja, ja)];
            if x.is_zero() {
                continue;
            }
            for db in 0..=b_cap.min(cap - da) {
                for jb in 0..=db {
                    let y = &b[idx2(db - jb, jb)];
                    if !y.is_zero() {
                        let k = idx2(da - ja + db - jb, ja + jb);
                        out[k] = out[k].add(&x.mul(y));
                    }
                }
            }
        }
    }
    out
}

impl<C: Coefficient> TruncatedSeries<C> {
    fn raw(ring: &C::Ring, vars: usize, cap: usize, exact: bool, mut coeffs: Vec<C>) -> Self {
        coeffs.resize(storage_len(vars, cap), C::zero(ring));
        TruncatedSeries { ring: ring.clone(), vars, cap, exact, coeffs }
    }

    /// The zero polynomial in one variable.
    pub fn zero(ring: &C::Ring, cap: usize) -> Self {
        Self::raw(ring, 1, cap, true, Vec::new())
    }

    /// The zero polynomial in two variables.
    pub fn zero2(ring: &C::Ring, cap: usize) -> Self {
        Self::raw(ring, 2, cap, true, Vec::new())
    }

    pub fn constant(ring: &C::Ring, c: C, cap: usize) -> Self {
        Self::raw(ring, 1, cap, true, vec![c])
    }

    pub fn one(ring: &C::Ring, cap: usize) -> Self {
        Self::constant(ring, C::one(ring), cap)
    }

    /// The polynomial `Z`.
    pub fn var(ring: &C::Ring, cap: usize) -> Self {
        assert!(cap >= 1, "cap must be at least 1");
        Self::raw(ring, 1, cap, true, vec![C::zero(ring), C::one(ring)])
    }

    /// The polynomial `X` (`which = 0`) or `Y` (`which = 1`) in two variables.
    pub fn var2(ring: &C::Ring, which: usize, cap: usize) -> Self {
        assert!(cap >= 1 && which < 2);
        let mut s = Self::zero2(ring, cap);
        s.coeffs[idx2(1 - which, which)] = C::one(ring);
        s
    }

    /// Series known to degree `cap`; coefficients past `cap` are dropped.
    pub fn from_coeffs(ring: &C::Ring, mut coeffs: Vec<C>, cap: usize) -> Self {
        coeffs.truncate(cap + 1);
        Self::raw(ring, 1, cap, false, coeffs)
    }

    /// Exact polynomial with the given coefficients.
    pub fn polynomial(ring: &C::Ring, coeffs: Vec<C>) -> Self {
        let cap = coeffs.len().saturating_sub(1);
        Self::raw(ring, 1, cap, true, coeffs)
    }

    pub fn from_fn(ring: &C::Ring, cap: usize, f: impl Fn(usize) -> C) -> Self {
        Self::raw(ring, 1, cap, false, (0..=cap).map(f).collect())
    }

    /// Bivariate series from `f(i, j)` = coefficient of `X^i Y^j`.
    pub fn from_fn2(ring: &C::Ring, cap: usize, f: impl Fn(usize, usize) -> C) -> Self {
        let mut coeffs = Vec::with_capacity(tri(cap + 1));
        for d in 0..=cap {
            for j in 0..=d {
                coeffs.push(f(d - j, j));
            }
        }
        Self::raw(ring, 2, cap, false, coeffs)
    }

    /// Exact bivariate polynomial from `(i, j, c)` terms.
    pub fn polynomial2(ring: &C::Ring, terms: &[(usize, usize, C)]) -> Self {
        let cap = terms.iter().map(|t| t.0 + t.1).max().unwrap_or(0);
        let mut s = Self::zero2(ring, cap);
        for (i, j, c) in terms {
            let k = idx2(*i, *j);
            s.coeffs[k] = s.coeffs[k].add(c);
        }
        s
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Coefficient of `Z^k` (zero above the cap of an exact series).
    pub fn coeff(&self, k: usize) -> C {
        assert_eq!(self.vars, 1);
        if k <= self.cap {
            self.coeffs[k].clone()
        } else {
            assert!(self.exact, "coefficient {k} is beyond the known cap {}", self.cap);
            C::zero(&self.ring)
        }
    }

    /// Coefficient of `X^i Y^j`.
    pub fn coeff2(&self, i: usize, j: usize) -> C {
        assert_eq!(self.vars, 2);
        if i + j <= self.cap {
            self.coeffs[idx2(i, j)].clone()
        } else {
            assert!(self.exact, "coefficient ({i},{j}) is beyond the known cap {}", self.cap);
            C::zero(&self.ring)
        }
    }

    /// Stored coefficients (univariate: by degree; bivariate: by total
    /// degree, then by the `Y` exponent).
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Highest total degree with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        match self.vars {
            1 => self.coeffs.iter().rposition(|c| !c.is_zero()),
            _ => (0..=self.cap).rev().find(|&d| (0..=d).any(|j| !self.coeffs[idx2(d - j, j)].is_zero())),
        }
    }

    /// Lowest total degree with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        match self.vars {
            1 => self.coeffs.iter().position(|c| !c.is_zero()),
            _ => (0..=self.cap).find(|&d| (0..=d).any(|j| !self.coeffs[idx2(d - j, j)].is_zero())),
        }
    }

    /// Changes the storage cap. An exact series stays exact unless nonzero
    /// terms are cut; an inexact one can only shrink.
    pub fn with_cap(&self, cap: usize) -> Self {
        if self.exact {
            let cut = self.degree().is_some_and(|d| d > cap);
            let mut coeffs = self.coeffs.clone();
            coeffs.truncate(storage_len(self.vars, cap));
            Self::raw(&self.ring, self.vars, cap, !cut, coeffs)
        } else {
            let cap = cap.min(self.cap);
            let mut coeffs = self.coeffs.clone();
            coeffs.truncate(storage_len(self.vars, cap));
            Self::raw(&self.ring, self.vars, cap, false, coeffs)
        }
    }

    /// Forgets exactness and truncates at `cap`.
    pub fn truncate(&self, cap: usize) -> Self {
        let mut s = self.with_cap(cap.min(self.cap));
        s.exact = false;
        s
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "series in different numbers of variables");
    }

    fn binary_cap(&self, other: &Self, exact_cap: usize) -> (bool, usize) {
        combine_caps(&[(self.exact, self.cap), (other.exact, other.cap)], exact_cap)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let (exact, cap) = self.binary_cap(other, self.cap.max(other.cap));
        let n = storage_len(self.vars, cap);
        let zero = C::zero(&self.ring);
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).unwrap_or(&zero);
                let b = other.coeffs.get(k).unwrap_or(&zero);
                a.add(b)
            })
            .collect();
        Self::raw(&self.ring, self.vars, cap, exact, coeffs)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.neg()).collect();
        Self::raw(&self.ring, self.vars, self.cap, self.exact, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let (exact, cap) = self.binary_cap(other, self.cap + other.cap);
        self.mul_to(other, exact, cap)
    }

    fn mul_to(&self, other: &Self, exact: bool, cap: usize) -> Self {
        let coeffs = if self.vars == 1 {
            mul_uni(&self.ring, &self.coeffs, &other.coeffs, cap)
        } else {
            mul_bi(&self.ring, &self.coeffs, self.cap, &other.coeffs, other.cap, cap)
        };
        Self::raw(&self.ring, self.vars, cap, exact, coeffs)
    }

    /// Multiplication by a ring element.
    pub fn scale(&self, c: &C) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.mul(c)).collect();
        Self::raw(&self.ring, self.vars, self.cap, self.exact, coeffs)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.mul_int(k)).collect();
        Self::raw(&self.ring, self.vars, self.cap, self.exact, coeffs)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = if self.vars == 1 {
            Self::one(&self.ring, 0)
        } else {
            Self::raw(&self.ring, 2, 0, true, vec![C::one(&self.ring)])
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplies by `Z^k` (univariate).
    pub fn shift_up(&self, k: usize) -> Self {
        assert_eq!(self.vars, 1);
        let mut coeffs = vec![C::zero(&self.ring); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::raw(&self.ring, 1, self.cap + k, self.exact, coeffs)
    }

    /// Divides by `Z` (univariate); the constant term must vanish.
    pub fn divide_by_var(&self) -> Result<Self> {
        assert_eq!(self.vars, 1);
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if self.cap == 0 {
            return Err(Error::InvalidArgument("series known only to degree 0".into()));
        }
        Ok(Self::raw(&self.ring, 1, self.cap - 1, self.exact, self.coeffs[1..].to_vec()))
    }

    fn has_zero_constant(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    /// `self(inner)`. `self` must be univariate; `inner` may have one or two
    /// variables and must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        assert_eq!(self.vars, 1, "outer series must be univariate");
        if !inner.has_zero_constant() {
            return Err(Error::NonzeroConstantTerm);
        }
        let deg = if self.exact { self.degree().unwrap_or(0) } else { self.cap };
        let (exact, cap) = combine_caps(&[(self.exact, self.cap), (inner.exact, inner.cap)], deg.max(1) * inner.cap);
        Ok(self.compose_to(inner, exact, cap))
    }

    fn compose_to(&self, inner: &Self, exact: bool, cap: usize) -> Self {
        let top = self.degree().map_or(0, |d| d.min(cap));
        let constant = |c: C| {
            let mut v = vec![C::zero(&self.ring); storage_len(inner.vars, cap)];
            v[0] = c;
            Self::raw(&self.ring, inner.vars, cap, exact, v)
        };
        let mut acc = constant(self.coeffs[top].clone());
        for k in (0..top).rev() {
            acc = acc.mul_to(inner, exact, cap);
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[k]);
        }
        acc
    }

    /// `self(s(Z), t(Z))` for bivariate `self` and univariate `s`, `t` with
    /// zero constant terms.
    pub fn substitute(&self, s: &Self, t: &Self) -> Result<Self> {
        assert_eq!(self.vars, 2, "substitute needs a bivariate series");
        assert!(s.vars == 1 && t.vars == 1);
        if !s.has_zero_constant() || !t.has_zero_constant() {
            return Err(Error::NonzeroConstantTerm);
        }
        let deg = if self.exact { self.degree().unwrap_or(0) } else { self.cap };
        let (exact, cap) =
            combine_caps(&[(self.exact, self.cap), (s.exact, s.cap), (t.exact, t.cap)], deg.max(1) * s.cap.max(t.cap));
        let top = self.degree().map_or(0, |d| d.min(cap));
        let one = Self::raw(&self.ring, 1, cap, exact, vec![C::one(&self.ring)]);
        let mut s_pows = vec![one.clone()];
        for i in 1..=top {
            let next = s_pows[i - 1].mul_to(s, exact, cap);
            s_pows.push(next);
        }
        // Horner in t over the Y-exponent
        let mut acc = Self::raw(&self.ring, 1, cap, exact, Vec::new());
        for j in (0..=top).rev() {
            acc = acc.mul_to(t, exact, cap);
            for i in 0..=(top - j) {
                let c = &self.coeffs[idx2(i, j)];
                if c.is_zero() {
                    continue;
                }
                for (k, x) in s_pows[i].coeffs.iter().enumerate() {
                    if !x.is_zero() {
                        acc.coeffs[k] = acc.coeffs[k].add(&c.mul(x));
                    }
                }
            }
        }
        Ok(acc)
    }

    /// `self(s(X), t(Y))` for bivariate `self` and univariate `s`, `t` with
    /// zero constant terms; the result is bivariate.
    pub fn substitute_separate(&self, s: &Self, t: &Self) -> Result<Self> {
        assert_eq!(self.vars, 2, "substitute needs a bivariate series");
        assert!(s.vars == 1 && t.vars == 1);
        if !s.has_zero_constant() || !t.has_zero_constant() {
            return Err(Error::NonzeroConstantTerm);
        }
        let deg = if self.exact { self.degree().unwrap_or(0) } else { self.cap };
        let (exact, cap) =
            combine_caps(&[(self.exact, self.cap), (s.exact, s.cap), (t.exact, t.cap)], deg.max(1) * s.cap.max(t.cap));
        let top = self.degree().map_or(0, |d| d.min(cap));
        let powers = |u: &Self| {
            let mut out = vec![Self::raw(&self.ring, 1, cap, exact, vec![C::one(&self.ring)])];
            for i in 1..=top {
                let next = out[i - 1].mul_to(u, exact, cap);
                out.push(next);
            }
            out
        };
        let (sp, tp) = (powers(s), powers(t));
        let mut out = Self::raw(&self.ring, 2, cap, exact, Vec::new());
        for d in 0..=top {
            for b in 0..=d {
                let c = &self.coeffs[idx2(d - b, b)];
                if c.is_zero() {
                    continue;
                }
                let (x, y) = (&sp[d - b], &tp[b]);
                for (i, xi) in x.coeffs.iter().enumerate() {
                    if xi.is_zero() {
                        continue;
                    }
                    let cx = c.mul(xi);
                    for (j, yj) in y.coeffs[..=cap - i].iter().enumerate() {
                        if !yj.is_zero() {
                            let k = idx2(i, j);
                            out.coeffs[k] = out.coeffs[k].add(&cx.mul(yj));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse modulo degree `cap + 1`.
    pub fn mul_inverse(&self) -> Result<Self> {
        assert_eq!(self.vars, 1, "mul_inverse is univariate");
        let t0 = self.coeffs[0].inverse()?;
        let cap = self.cap;
        let mut t: Vec<C> = Vec::with_capacity(cap + 1);
        t.push(t0.clone());
        for k in 1..=cap {
            let mut acc = C::zero(&self.ring);
            for j in 1..=k {
                let s = &self.coeffs[j];
                if !s.is_zero() {
                    acc = acc.add(&s.mul(&t[k - j]));
                }
            }
            t.push(acc.mul(&t0).neg());
        }
        Ok(Self::raw(&self.ring, 1, cap, false, t))
    }

    /// Compositional inverse modulo degree `cap + 1`, by Newton iteration.
    pub fn revert(&self) -> Result<Self> {
        assert_eq!(self.vars, 1, "revert is univariate");
        if !self.has_zero_constant() {
            return Err(Error::NonzeroConstantTerm);
        }
        if self.cap == 0 {
            return Err(Error::InvalidArgument("series known only to degree 0".into()));
        }
        let u_inv = self.coeffs[1].inverse()?;
        let cap = self.cap;
        let s = self.truncate(cap);
        let ds = s.derive_raw(0, cap);
        let z = Self::var(&self.ring, 1).truncate(cap).with_cap_padded(cap);
        let mut t = Self::raw(&self.ring, 1, cap, false, vec![C::zero(&self.ring), u_inv]);
        let mut good = 1usize;
        while good < cap {
            let st = s.compose_to(&t, false, cap);
            let err = st.sub(&z);
            let inv = ds.compose_to(&t, false, cap).mul_inverse()?;
            t = t.sub(&err.mul_to(&inv, false, cap));
            good = 2 * good + 1;
        }
        Ok(t)
    }

    fn with_cap_padded(mut self, cap: usize) -> Self {
        self.coeffs.resize(storage_len(self.vars, cap), C::zero(&self.ring));
        self.cap = cap;
        self
    }

    fn derive_raw(&self, var: usize, cap: usize) -> Self {
        if self.vars == 1 {
            let coeffs = (0..=cap)
                .map(|k| self.coeffs.get(k + 1).map_or(C::zero(&self.ring), |c| c.mul_int(k as i64 + 1)))
                .collect();
            Self::raw(&self.ring, 1, cap, false, coeffs)
        } else {
            Self::from_fn2(&self.ring, cap, |i, j| {
                let (a, b, m) = if var == 0 { (i + 1, j, i + 1) } else { (i, j + 1, j + 1) };
                if a + b <= self.cap {
                    self.coeffs[idx2(a, b)].mul_int(m as i64)
                } else {
                    C::zero(&self.ring)
                }
            })
        }
    }

    /// Formal derivative in variable `var` (0 for `X`/`Z`, 1 for `Y`). The
    /// cap drops by one.
    pub fn derive(&self, var: usize) -> Result<Self> {
        assert!(var < self.vars);
        if self.cap == 0 {
            if self.exact {
                return Ok(Self::raw(&self.ring, self.vars, 0, true, Vec::new()));
            }
            return Err(Error::InvalidArgument("derivative of a series known only to degree 0".into()));
        }
        let mut d = self.derive_raw(var, self.cap - 1);
        d.exact = self.exact;
        Ok(d)
    }

    /// Horner sum of the stored coefficients at `x` (univariate). No tail
    /// estimate is applied.
    pub fn evaluate(&self, x: &C) -> C {
        assert_eq!(self.vars, 1);
        let top = self.degree().unwrap_or(0);
        let mut acc = self.coeffs[top].clone();
        for k in (0..top).rev() {
            acc = acc.mul(x).add(&self.coeffs[k]);
        }
        acc
    }

    /// Degree to which `self` and `other` are both known.
    pub fn common_cap(&self, other: &Self) -> usize {
        match (self.exact, other.exact) {
            (true, true) => self.cap.max(other.cap),
            (true, false) => other.cap,
            (false, true) => self.cap,
            (false, false) => self.cap.min(other.cap),
        }
    }

    /// Minimum coefficient agreement (in `p`-adic digits) up to the common
    /// cap.
    pub fn agreement(&self, other: &Self) -> u32 {
        self.check_vars(other);
        let cap = self.common_cap(other);
        let zero = C::zero(&self.ring);
        (0..storage_len(self.vars, cap))
            .map(|k| {
                let a = self.coeffs.get(k).unwrap_or(&zero);
                let b = other.coeffs.get(k).unwrap_or(&zero);
                a.agreement(b)
            })
            .min()
            .unwrap_or(u32::MAX)
    }

    /// Minimum coefficient precision.
    pub fn precision(&self) -> u32 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(u32::MAX)
    }

    /// True when the series agree to their full precision up to the common
    /// cap.
    pub fn equals_mod_caps(&self, other: &Self) -> bool {
        self.agreement(other) >= self.precision().min(other.precision())
    }

    pub fn reduce_precision(&self, n: u32) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.reduce_precision(n)).collect();
        Self::raw(&self.ring, self.vars, self.cap, self.exact, coeffs)
    }

    /// Applies `f` to every coefficient.
    pub fn map<D: Coefficient>(&self, ring: &D::Ring, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries::raw(ring, self.vars, self.cap, self.exact, self.coeffs.iter().map(f).collect())
    }
}

impl TruncatedSeries<PAdicInt> {
    /// The same series with coefficients embedded in another ring.
    pub fn embed<D: Coefficient>(&self, ring: &D::Ring) -> TruncatedSeries<D> {
        self.map(ring, |c| D::from_padic(ring, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::BaseRing;
    use proptest::prelude::*;

    type S = TruncatedSeries<PAdicInt>;
    const R: BaseRing = BaseRing { p: 5, precision: 8 };

    fn poly(v: &[i64]) -> S {
        S::polynomial(&R, v.iter().map(|&x| R.int(x)).collect())
    }

    fn series(v: &[i64], cap: usize) -> S {
        S::from_coeffs(&R, v.iter().map(|&x| R.int(x)).collect(), cap)
    }

    #[test]
    fn compose_examples() {
        let z = S::var(&R, 8);
        let s = series(&[0, 3, 1, 4, 1, 5], 8);
        assert!(z.compose(&s).unwrap().equals_mod_caps(&s));
        let got = poly(&[0, 0, 1]).compose(&poly(&[0, 1, 1])).unwrap();
        assert!(got.is_exact());
        assert!(got.equals_mod_caps(&poly(&[0, 0, 1, 2, 1])));
        assert_eq!(poly(&[1, 1]).compose(&poly(&[1, 1])).unwrap_err(), Error::NonzeroConstantTerm);
    }

    #[test]
    fn revert_matches_catalan_numbers() {
        // inverse of Z + Z^2 has coefficients (-1)^(k-1) C_(k-1)
        let cap = 12;
        let t = series(&[0, 1, 1], cap).revert().unwrap();
        let mut catalan = vec![1i64];
        for n in 0..cap {
            let next = catalan[n] * 2 * (2 * n as i64 + 1) / (n as i64 + 2);
            catalan.push(next);
        }
        for k in 1..=cap {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(t.coeff(k), R.int(sign * catalan[k - 1]), "k = {k}");
        }
        assert!(S::var(&R, 5).truncate(5).revert().unwrap().equals_mod_caps(&S::var(&R, 5)));
    }

    #[test]
    fn mul_inverse_examples() {
        let inv = series(&[1, -1], 10).mul_inverse().unwrap();
        assert!(inv.equals_mod_caps(&series(&[1; 11], 10)));
        assert!(S::one(&R, 4).mul_inverse().unwrap().equals_mod_caps(&S::one(&R, 4)));
        assert_eq!(series(&[5, 1], 4).mul_inverse().unwrap_err(), Error::NotAUnit);
    }

    #[test]
    fn derive_examples() {
        assert!(poly(&[7]).derive(0).unwrap().equals_mod_caps(&S::zero(&R, 0)));
        assert!(poly(&[0, 0, 0, 1]).derive(0).unwrap().equals_mod_caps(&poly(&[0, 0, 3])));
        let d = series(&[1, 2, 3], 6).derive(0).unwrap();
        assert_eq!(d.cap(), 5);
        assert!(!d.is_exact());
    }

    #[test]
    fn cap_discipline() {
        let a = series(&[1, 1], 6);
        let b = series(&[1, 2], 4);
        assert_eq!(a.mul(&b).cap(), 4);
        assert_eq!(a.add(&poly(&[1, 1, 1])).cap(), 6);
        let e = poly(&[1, 1]).mul(&poly(&[1, 1]));
        assert!(e.is_exact());
        assert_eq!(e.cap(), 2);
        assert!(a.compose(&series(&[0, 1], 3)).unwrap().cap() == 3);
    }

    #[test]
    fn bivariate_substitution() {
        // F = X + Y + XY at (Z, Z) is 2Z + Z^2
        let f = S::polynomial2(&R, &[(1, 0, R.int(1)), (0, 1, R.int(1)), (1, 1, R.int(1))]);
        let z = S::var(&R, 6).truncate(6);
        let got = f.substitute(&z, &z).unwrap();
        assert!(got.equals_mod_caps(&series(&[0, 2, 1], 6)));
        let sep = f.substitute_separate(&poly(&[0, 2]), &poly(&[0, 0, 1])).unwrap();
        assert_eq!(sep.coeff2(1, 0), R.int(2));
        assert_eq!(sep.coeff2(0, 2), R.int(1));
        assert_eq!(sep.coeff2(1, 2), R.int(2));
        assert_eq!(sep.coeff2(0, 1), R.int(0));
        let comp = poly(&[0, 1, 1]).compose(&f).unwrap();
        assert_eq!(comp.coeff2(2, 0), R.int(1));
        assert_eq!(comp.coeff2(1, 1), R.int(3));
    }

    fn arb_series(cap: usize, zero_const: bool, unit_linear: bool) -> impl Strategy<Value = S> {
        proptest::collection::vec(0u64..390625, cap + 1).prop_map(move |v| {
            let mut c: Vec<PAdicInt> = v.iter().map(|&r| PAdicInt::from_residue(5, 8, r)).collect();
            if zero_const {
                c[0] = R.int(0);
            }
            if unit_linear && !c[1].is_unit() {
                c[1] = c[1] + R.int(1);
            }
            S::from_coeffs(&R, c, cap)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn ring_axioms(a in arb_series(8, false, false), b in arb_series(8, false, false), c in arb_series(8, false, false)) {
            prop_assert!(a.mul(&b).mul(&c).equals_mod_caps(&a.mul(&b.mul(&c))));
            prop_assert!(a.mul(&b.add(&c)).equals_mod_caps(&a.mul(&b).add(&a.mul(&c))));
            prop_assert!(a.mul(&b).equals_mod_caps(&b.mul(&a)));
        }

        #[test]
        fn composition_is_associative(g in arb_series(7, false, false), h in arb_series(7, true, false), k in arb_series(7, true, false)) {
            let lhs = g.compose(&h.compose(&k).unwrap()).unwrap();
            let rhs = g.compose(&h).unwrap().compose(&k).unwrap();
            prop_assert!(lhs.equals_mod_caps(&rhs));
        }

        #[test]
        fn revert_round_trip(s in arb_series(9, true, true)) {
            let t = s.revert().unwrap();
            let z = S::var(&R, 9);
            prop_assert!(s.compose(&t).unwrap().equals_mod_caps(&z));
            prop_assert!(t.compose(&s).unwrap().equals_mod_caps(&z));
            prop_assert!(t.revert().unwrap().equals_mod_caps(&s));
        }

        #[test]
        fn inverse_round_trip(s in arb_series(9, false, false)) {
            prop_assume!(s.coeff(0).is_unit());
            let t = s.mul_inverse().unwrap();
            prop_assert!(s.mul(&t).equals_mod_caps(&S::one(&R, 0)));
        }

        #[test]
        fn product_rule(a in arb_series(8, false, false), b in arb_series(8, false, false)) {
            let lhs = a.mul(&b).derive(0).unwrap();
            let rhs = a.derive(0).unwrap().mul(&b).add(&a.mul(&b.derive(0).unwrap()));
            prop_assert!(lhs.equals_mod_caps(&rhs));
        }

        #[test]
        fn chain_rule(f in arb_series(8, false, false), g in arb_series(8, true, false)) {
            let lhs = f.compose(&g).unwrap().derive(0).unwrap();
            let rhs = f.derive(0).unwrap().compose(&g).unwrap().mul(&g.derive(0).unwrap());
            prop_assert!(lhs.equals_mod_caps(&rhs));
        }
    }
}
