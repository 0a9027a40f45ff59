//! Finite extensions of `Z_p` presented as towers of quotient rings.
//!
//! A ring is either the base `Z_p / p^N` or a monic quotient
//! `R[Z] / (m(Z))` of a previously built ring `R`. Elements are stored as
//! flat coordinate vectors over `Z_p` (the coordinates of the nested power
//! basis), so embedding a subring element into a larger ring is zero
//! padding and divisibility by `p` is coordinatewise.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::padic::{floor_log, int_valuation, PAdicFraction, PAdicInt};
use crate::ring::{determinant, BaseRing, Coefficient};
use crate::series::TruncatedSeries;

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtKind {
    Unramified,
    Eisenstein,
}

pub struct ExtRing {
    id: u64,
    coeff: LocalRing,
    kind: ExtKind,
    degree: usize,
    /// `m_0 .. m_{d-1}` of the monic modulus `Z^d + sum m_i Z^i`.
    modulus: Vec<ExtElement>,
    abs_degree: usize,
    ramification: u64,
    residue_degree: u32,
    frobenius_root: OnceLock<std::result::Result<ExtElement, Error>>,
}

impl fmt::Debug for ExtRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[Z]/(deg {} {:?}) #{}", self.coeff, self.degree, self.kind, self.id)
    }
}

/// Descriptor of a coefficient ring: the base or an extension.
#[derive(Clone)]
pub enum LocalRing {
    Base(BaseRing),
    Ext(Arc<ExtRing>),
}

impl PartialEq for LocalRing {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (LocalRing::Base(a), LocalRing::Base(b)) => a == b,
            (LocalRing::Ext(a), LocalRing::Ext(b)) => a.id == b.id,
            _ => false,
        }
    }
}

impl fmt::Debug for LocalRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalRing::Base(b) => write!(f, "Z_{}/{}^{}", b.p, b.p, b.precision),
            LocalRing::Ext(e) => e.fmt(f),
        }
    }
}

impl From<BaseRing> for LocalRing {
    fn from(b: BaseRing) -> Self {
        LocalRing::Base(b)
    }
}

fn reduce_mod_p(c: &[PAdicInt]) -> Vec<u64> {
    c.iter().map(|x| x.residue() % x.prime()).collect()
}

/// Remainder of `a` modulo monic `b` over `F_p`; both low-degree first.
fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let off = r.len() - db;
            for i in 0..db {
                r[off + i] = (r[off + i] + p * p - lead * b[i] % p) % p;
            }
        }
    }
    r
}

/// Brute-force irreducibility test over `F_p` for a monic polynomial.
pub fn is_irreducible_mod_p(poly: &[u64], p: u64) -> bool {
    let d = poly.len() - 1;
    for k in 1..=d / 2 {
        let count = p.pow(k as u32);
        for code in 0..count {
            let mut g: Vec<u64> = (0..k).map(|i| (code / p.pow(i as u32)) % p).collect();
            g.push(1);
            if fp_rem(poly, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl LocalRing {
    pub fn base(&self) -> BaseRing {
        match self {
            LocalRing::Base(b) => *b,
            LocalRing::Ext(e) => e.coeff.base(),
        }
    }

    pub fn prime(&self) -> u64 {
        self.base().p
    }

    pub fn precision(&self) -> u32 {
        self.base().precision
    }

    /// Degree over `Z_p`.
    pub fn abs_degree(&self) -> usize {
        match self {
            LocalRing::Base(_) => 1,
            LocalRing::Ext(e) => e.abs_degree,
        }
    }

    /// Degree over the coefficient ring (1 for the base).
    pub fn degree(&self) -> usize {
        match self {
            LocalRing::Base(_) => 1,
            LocalRing::Ext(e) => e.degree,
        }
    }

    pub fn kind(&self) -> Option<ExtKind> {
        match self {
            LocalRing::Base(_) => None,
            LocalRing::Ext(e) => Some(e.kind),
        }
    }

    /// Absolute ramification index.
    pub fn ramification_index(&self) -> u64 {
        match self {
            LocalRing::Base(_) => 1,
            LocalRing::Ext(e) => e.ramification,
        }
    }

    /// Absolute residue degree.
    pub fn residue_degree(&self) -> u32 {
        match self {
            LocalRing::Base(_) => 1,
            LocalRing::Ext(e) => e.residue_degree,
        }
    }

    pub fn residue_field_size(&self) -> u64 {
        self.prime().pow(self.residue_degree())
    }

    pub fn coefficient_ring(&self) -> Option<&LocalRing> {
        match self {
            LocalRing::Base(_) => None,
            LocalRing::Ext(e) => Some(&e.coeff),
        }
    }

    /// Rings from the base up to `self`.
    pub fn tower(&self) -> Vec<LocalRing> {
        let mut out = vec![self.clone()];
        while let Some(c) = out.last().unwrap().coefficient_ring() {
            let c = c.clone();
            out.push(c);
        }
        out.reverse();
        out
    }

    /// True when `sub` is `self` or one of its coefficient rings.
    pub fn contains(&self, sub: &LocalRing) -> bool {
        self.tower().iter().any(|r| r == sub)
    }

    fn digit_zero(&self) -> PAdicInt {
        let b = self.base();
        PAdicInt::zero(b.p, b.precision)
    }

    pub fn zero(&self) -> ExtElement {
        ExtElement { ring: self.clone(), c: vec![self.digit_zero(); self.abs_degree()] }
    }

    pub fn one(&self) -> ExtElement {
        self.from_padic(&PAdicInt::one(self.prime(), self.precision()))
    }

    pub fn int(&self, v: i64) -> ExtElement {
        self.from_padic(&PAdicInt::from_i64(self.prime(), self.precision(), v))
    }

    pub fn from_padic(&self, x: &PAdicInt) -> ExtElement {
        let mut e = self.zero();
        e.c[0] = x.reduce_precision(self.precision());
        e
    }

    /// The class of `Z` in `R[Z]/(m)`.
    pub fn generator(&self) -> ExtElement {
        let LocalRing::Ext(e) = self else {
            panic!("the base ring has no generator");
        };
        let r = e.coeff.abs_degree();
        let mut x = self.zero();
        if e.degree == 1 {
            // Z = -m_0
            let m0 = -&e.modulus[0];
            x.c[..r].copy_from_slice(&m0.c);
        } else {
            x.c[r] = PAdicInt::one(self.prime(), self.precision());
        }
        x
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElement {
        let b = self.base();
        ExtElement {
            ring: self.clone(),
            c: (0..self.abs_degree()).map(|_| PAdicInt::random(b.p, b.precision, rng)).collect(),
        }
    }

    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElement {
        loop {
            let x = self.random(rng);
            if x.valuation() == Some(0) {
                return x;
            }
        }
    }

    fn mul_flat(&self, a: &[PAdicInt], b: &[PAdicInt]) -> Vec<PAdicInt> {
        match self {
            LocalRing::Base(_) => vec![a[0] * b[0]],
            LocalRing::Ext(e) => e.mul_flat(a, b),
        }
    }

    fn valuation_flat(&self, c: &[PAdicInt]) -> Option<u64> {
        match self {
            LocalRing::Base(_) => c[0].valuation().map(u64::from),
            LocalRing::Ext(e) => {
                let r = e.coeff.abs_degree();
                let d = e.degree as u64;
                (0..e.degree)
                    .filter_map(|i| {
                        let v = e.coeff.valuation_flat(&c[i * r..(i + 1) * r])?;
                        Some(match e.kind {
                            ExtKind::Eisenstein => d * v + i as u64,
                            ExtKind::Unramified => v,
                        })
                    })
                    .min()
            }
        }
    }

    /// Builds `base[Z]/(m)` for a monic `m` (given without its leading `1`)
    /// whose reduction is irreducible over `F_p`.
    pub fn unramified(base: BaseRing, modulus: &[PAdicInt]) -> Result<LocalRing> {
        let d = modulus.len();
        if d == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        let mut red = reduce_mod_p(modulus);
        red.push(1);
        if !is_irreducible_mod_p(&red, base.p) {
            return Err(Error::Reducible);
        }
        let coeff = LocalRing::Base(base);
        let m = modulus.iter().map(|x| coeff.from_padic(x)).collect();
        Ok(Self::build(coeff, ExtKind::Unramified, m))
    }

    /// Unramified extension of degree `d` defined by the first monic
    /// irreducible polynomial over `F_p` in lexicographic order.
    pub fn unramified_of_degree(base: BaseRing, d: usize) -> Result<LocalRing> {
        let p = base.p;
        let count = p.checked_pow(d as u32).ok_or_else(|| Error::InvalidArgument("degree too large".into()))?;
        for code in 0..count {
            let mut poly: Vec<u64> = (0..d).map(|i| (code / p.pow(i as u32)) % p).collect();
            poly.push(1);
            if is_irreducible_mod_p(&poly, p) {
                let m: Vec<PAdicInt> = poly[..d].iter().map(|&c| base.int(c as i64)).collect();
                return Self::unramified(base, &m);
            }
        }
        Err(Error::Reducible)
    }

    /// Builds `coeff[Z]/(m)` for an Eisenstein `m` over `coeff` (given
    /// without its leading `1`).
    pub fn eisenstein(coeff: &LocalRing, modulus: Vec<ExtElement>) -> Result<LocalRing> {
        if modulus.is_empty() {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        if let Some(bad) = modulus.iter().find(|m| m.ring != *coeff) {
            return Err(Error::RingMismatch(format!("modulus coefficient lives in {:?}", bad.ring)));
        }
        if coeff.kind() == Some(ExtKind::Unramified) {
            return Err(Error::InvalidArgument("Eisenstein over an unramified ring is not supported".into()));
        }
        if modulus[0].valuation() != Some(1) {
            return Err(Error::NotEisenstein(format!(
                "constant term has valuation {:?}, expected 1",
                modulus[0].valuation()
            )));
        }
        if let Some(i) = modulus.iter().position(|m| m.valuation() == Some(0)) {
            return Err(Error::NotEisenstein(format!("coefficient of Z^{i} is a unit")));
        }
        Ok(Self::build(coeff.clone(), ExtKind::Eisenstein, modulus))
    }

    fn build(coeff: LocalRing, kind: ExtKind, modulus: Vec<ExtElement>) -> LocalRing {
        let degree = modulus.len();
        let (ramification, residue_degree) = match kind {
            ExtKind::Eisenstein => (coeff.ramification_index() * degree as u64, coeff.residue_degree()),
            ExtKind::Unramified => (coeff.ramification_index(), coeff.residue_degree() * degree as u32),
        };
        LocalRing::Ext(Arc::new(ExtRing {
            id: NEXT_RING_ID.fetch_add(1, Ordering::Relaxed),
            abs_degree: coeff.abs_degree() * degree,
            coeff,
            kind,
            degree,
            modulus,
            ramification,
            residue_degree,
            frobenius_root: OnceLock::new(),
        }))
    }
}

fn is_zero_slice(c: &[PAdicInt]) -> bool {
    c.iter().all(|x| x.is_zero())
}

fn is_scalar_slice(c: &[PAdicInt]) -> bool {
    is_zero_slice(&c[1..])
}

impl ExtRing {
    fn mul_flat(&self, a: &[PAdicInt], b: &[PAdicInt]) -> Vec<PAdicInt> {
        let d = self.degree;
        let r = self.coeff.abs_degree();
        if is_scalar_slice(b) {
            return a.iter().map(|x| *x * b[0]).collect();
        }
        if is_scalar_slice(a) {
            return b.iter().map(|x| *x * a[0]).collect();
        }
        let zero = self.coeff.digit_zero();
        let mut prod = vec![zero; (2 * d - 1) * r];
        let bz: Vec<bool> = (0..d).map(|j| is_zero_slice(&b[j * r..(j + 1) * r])).collect();
        for i in 0..d {
            let ai = &a[i * r..(i + 1) * r];
            if is_zero_slice(ai) {
                continue;
            }
            for j in 0..d {
                if bz[j] {
                    continue;
                }
                let t = self.coeff.mul_flat(ai, &b[j * r..(j + 1) * r]);
                let out = &mut prod[(i + j) * r..(i + j + 1) * r];
                for (o, x) in out.iter_mut().zip(&t) {
                    *o = *o + *x;
                }
            }
        }
        self.reduce(&mut prod);
        prod.truncate(d * r);
        prod
    }

    /// Reduces a flat coefficient vector of length `L * r` (`L >= d`)
    /// modulo the defining polynomial.
    fn reduce(&self, prod: &mut [PAdicInt]) {
        let d = self.degree;
        let r = self.coeff.abs_degree();
        let len = prod.len() / r;
        for k in (d..len).rev() {
            let t: Vec<PAdicInt> = prod[k * r..(k + 1) * r].to_vec();
            if is_zero_slice(&t) {
                continue;
            }
            for (i, m) in self.modulus.iter().enumerate() {
                if is_zero_slice(&m.c) {
                    continue;
                }
                let s = self.coeff.mul_flat(&t, &m.c);
                let out = &mut prod[(k - d + i) * r..(k - d + i + 1) * r];
                for (o, x) in out.iter_mut().zip(&s) {
                    *o = *o - *x;
                }
            }
        }
    }
}

/// Element of a [`LocalRing`], stored as flat `Z_p` coordinates.
#[derive(Clone)]
pub struct ExtElement {
    ring: LocalRing,
    c: Vec<PAdicInt>,
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<i128> = self.c.iter().map(|x| x.signed_residue()).collect();
        write!(f, "{:?} + O({}^{}) in {:?}", digits, self.ring.prime(), self.precision(), self.ring)
    }
}

impl PartialEq for ExtElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.c == other.c
    }
}

impl ExtElement {
    pub fn ring(&self) -> &LocalRing {
        &self.ring
    }

    /// Flat coordinates over `Z_p`.
    pub fn coordinates(&self) -> &[PAdicInt] {
        &self.c
    }

    pub fn from_coordinates(ring: &LocalRing, c: Vec<PAdicInt>) -> Result<Self> {
        if c.len() != ring.abs_degree() {
            return Err(Error::InvalidArgument(format!("expected {} coordinates, got {}", ring.abs_degree(), c.len())));
        }
        Ok(ExtElement { ring: ring.clone(), c })
    }

    /// Coefficient of `Z^i` in the coefficient ring.
    pub fn coefficient(&self, i: usize) -> ExtElement {
        let coeff = self.ring.coefficient_ring().expect("base elements have no coefficients");
        let r = coeff.abs_degree();
        ExtElement { ring: coeff.clone(), c: self.c[i * r..(i + 1) * r].to_vec() }
    }

    /// `sum coeffs[i] Z^i` in `ring`; coefficients live in its coefficient ring.
    pub fn from_coefficients(ring: &LocalRing, coeffs: &[ExtElement]) -> Result<Self> {
        let coeff = ring.coefficient_ring().ok_or(Error::InvalidArgument("base ring".into()))?;
        if coeffs.len() > ring.degree() {
            return Err(Error::InvalidArgument("too many coefficients".into()));
        }
        let mut out = ring.zero();
        let r = coeff.abs_degree();
        for (i, x) in coeffs.iter().enumerate() {
            if x.ring != *coeff {
                return Err(Error::RingMismatch("coefficient outside the coefficient ring".into()));
            }
            out.c[i * r..(i + 1) * r].copy_from_slice(&x.c);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        is_zero_slice(&self.c)
    }

    pub fn precision(&self) -> u32 {
        self.c.iter().map(|x| x.precision()).min().unwrap_or(0)
    }

    pub fn reduce_precision(&self, n: u32) -> Self {
        ExtElement { ring: self.ring.clone(), c: self.c.iter().map(|x| x.reduce_precision(n)).collect() }
    }

    /// Valuation in units of the uniformizer of the ring, or `None` when the
    /// element is zero to the known precision.
    pub fn valuation(&self) -> Option<u64> {
        self.ring.valuation_flat(&self.c)
    }

    /// Valuation as `v / e` with `v(p) = 1`: returns `(v, e)`.
    pub fn valuation_p(&self) -> Option<(u64, u64)> {
        self.valuation().map(|v| (v, self.ring.ramification_index()))
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// `p`-adic digits of agreement: the largest `k` with `self - other`
    /// in `p^k O`, capped at the common precision.
    pub fn agreement(&self, other: &Self) -> u32 {
        self.assert_same_ring(other);
        self.c.iter().zip(&other.c).map(|(a, b)| a.agreement(b)).min().unwrap_or(u32::MAX)
    }

    fn assert_same_ring(&self, other: &Self) {
        assert!(self.ring == other.ring, "elements of different rings: {:?} vs {:?}", self.ring, other.ring);
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, x: &PAdicInt) -> Self {
        ExtElement { ring: self.ring.clone(), c: self.c.iter().map(|y| *y * *x).collect() }
    }

    /// Exact division of every coordinate by `p^k`.
    pub fn div_p_pow_exact(&self, k: u32) -> Result<Self> {
        let c = self.c.iter().map(|x| x.div_p_pow_exact(k)).collect::<Result<Vec<_>>>()?;
        Ok(ExtElement { ring: self.ring.clone(), c })
    }

    pub fn mul_p_pow(&self, k: u32) -> Self {
        ExtElement { ring: self.ring.clone(), c: self.c.iter().map(|x| x.mul_p_pow(k)).collect() }
    }

    /// Inverse of a unit: a residue-field inverse `x^(q-2)` refined by
    /// Newton's iteration, checked by multiplication.
    pub fn inverse(&self) -> Result<Self> {
        if let LocalRing::Base(_) = self.ring {
            let inv = self.c[0].inverse()?;
            return Ok(self.ring.from_padic(&inv));
        }
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let q = self.ring.residue_field_size();
        let one = self.ring.one();
        let two = self.ring.int(2);
        let mut y = self.pow(q - 2);
        let target = self.ring.ramification_index() * self.precision() as u64;
        let mut good = 1u64;
        while good < target {
            y = &y * &(&two - &(self * &y));
            good *= 2;
        }
        if !(&(self * &y) - &one).is_zero() {
            return Err(Error::PrecisionExhausted("Newton inverse did not converge".into()));
        }
        Ok(y)
    }

    /// `self` as an element of `target`, which must contain its ring.
    pub fn embed(&self, target: &LocalRing) -> Result<Self> {
        if !target.contains(&self.ring) {
            return Err(Error::RingMismatch(format!("{:?} is not a subring of {:?}", self.ring, target)));
        }
        let mut out = target.zero();
        out.c[..self.c.len()].copy_from_slice(&self.c);
        Ok(out)
    }

    /// Element of the coefficient ring equal to `self`, if `self` lies in it.
    pub fn descend(&self) -> Result<Self> {
        let coeff = self.ring.coefficient_ring().ok_or(Error::InvalidArgument("base ring".into()))?;
        let r = coeff.abs_degree();
        let resid = self.c[r..].iter().filter_map(|x| x.valuation()).min();
        if let Some(v) = resid {
            return Err(Error::DescentFailure(v));
        }
        Ok(ExtElement { ring: coeff.clone(), c: self.c[..r].to_vec() })
    }

    /// Descends repeatedly to `Z_p`.
    pub fn descend_to_base(&self) -> Result<PAdicInt> {
        let mut x = self.clone();
        while x.ring.coefficient_ring().is_some() {
            x = x.descend()?;
        }
        Ok(x.c[0])
    }

    fn mul_by_generator(&self) -> Self {
        let LocalRing::Ext(e) = &self.ring else { panic!("base ring has no generator") };
        let r = e.coeff.abs_degree();
        let mut v = vec![e.coeff.digit_zero(); r];
        v.extend_from_slice(&self.c);
        e.reduce(&mut v);
        v.truncate(e.degree * r);
        ExtElement { ring: self.ring.clone(), c: v }
    }

    /// Matrix of multiplication by `self` over the coefficient ring
    /// (column `j` holds the coordinates of `self * Z^j`).
    pub fn multiplication_matrix(&self) -> Vec<Vec<ExtElement>> {
        let d = self.ring.degree();
        let mut cols = Vec::with_capacity(d);
        let mut y = self.clone();
        for j in 0..d {
            cols.push((0..d).map(|i| y.coefficient(i)).collect::<Vec<_>>());
            if j + 1 < d {
                y = y.mul_by_generator();
            }
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Trace to the coefficient ring.
    pub fn trace(&self) -> Self {
        let d = self.ring.degree();
        let mut y = self.clone();
        let coeff = self.ring.coefficient_ring().expect("trace needs an extension ring");
        let mut acc = coeff.zero();
        for j in 0..d {
            acc = &acc + &y.coefficient(j);
            if j + 1 < d {
                y = y.mul_by_generator();
            }
        }
        acc
    }

    /// Norm to the coefficient ring, as a determinant.
    pub fn norm(&self) -> Self {
        let coeff = self.ring.coefficient_ring().expect("norm needs an extension ring");
        determinant(coeff, &self.multiplication_matrix())
    }

    /// Trace down to `target` by composing relative traces.
    pub fn trace_to(&self, target: &LocalRing) -> Result<Self> {
        let mut x = self.clone();
        while x.ring != *target {
            if x.ring.coefficient_ring().is_none() {
                return Err(Error::RingMismatch("target is not a subring".into()));
            }
            x = x.trace();
        }
        Ok(x)
    }

    pub fn norm_to(&self, target: &LocalRing) -> Result<Self> {
        let mut x = self.clone();
        while x.ring != *target {
            if x.ring.coefficient_ring().is_none() {
                return Err(Error::RingMismatch("target is not a subring".into()));
            }
            x = x.norm();
        }
        Ok(x)
    }

    pub fn trace_to_base(&self) -> PAdicInt {
        let mut x = self.clone();
        while x.ring.coefficient_ring().is_some() {
            x = x.trace();
        }
        x.c[0]
    }

    pub fn norm_to_base(&self) -> PAdicInt {
        let mut x = self.clone();
        while x.ring.coefficient_ring().is_some() {
            x = x.norm();
        }
        x.c[0]
    }

    fn absolute_matrix(&self) -> Vec<Vec<PAdicInt>> {
        let n = self.ring.abs_degree();
        let cols: Vec<Vec<PAdicInt>> = (0..n)
            .map(|j| {
                let mut b = self.ring.zero();
                b.c[j] = PAdicInt::one(self.ring.prime(), self.ring.precision());
                (self * &b).c
            })
            .collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
    }

    /// Trace over `Z_p` of the flattened multiplication matrix.
    pub fn absolute_trace(&self) -> PAdicInt {
        let m = self.absolute_matrix();
        (0..m.len()).fold(self.ring.digit_zero(), |acc, i| acc + m[i][i])
    }

    /// Norm over `Z_p` as the determinant of the flattened matrix.
    pub fn absolute_norm(&self) -> PAdicInt {
        determinant(&self.ring.base(), &self.absolute_matrix())
    }

    /// Arithmetic Frobenius of an unramified extension of the base.
    pub fn frobenius(&self) -> Result<Self> {
        let LocalRing::Ext(e) = &self.ring else {
            return Ok(self.clone());
        };
        if e.kind != ExtKind::Unramified || !matches!(e.coeff, LocalRing::Base(_)) {
            return Err(Error::NotUnramified);
        }
        let root = e.frobenius_root.get_or_init(|| frobenius_root(&self.ring, e)).clone()?;
        let mut acc = self.ring.zero();
        for i in (0..e.degree).rev() {
            acc = &acc * &root;
            acc.c[0] = acc.c[0] + self.c[i];
        }
        Ok(acc)
    }

    /// `log` of the principal part of a unit, as a fraction: with `q` the
    /// residue field size, `log(u) = log(u^((q-1) p^m)) / ((q-1) p^m)` for
    /// `m` large enough that `u^((q-1) p^m) - 1` lies in `pO`.
    pub fn log_unit(&self) -> Result<ExtFraction> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let p = self.ring.prime();
        let n = self.precision();
        let q = self.ring.residue_field_size();
        let e = self.ring.ramification_index();
        let one = self.ring.one();
        let mut w = self.pow(q - 1);
        let mut m = 0u32;
        loop {
            match (&w - &one).valuation() {
                None => return Ok(ExtFraction::integral(self.ring.zero())),
                Some(v) if v >= e => break,
                _ => {
                    w = w.pow(p);
                    m += 1;
                    if m > 64 {
                        return Err(Error::PrecisionExhausted("unit does not approach 1".into()));
                    }
                }
            }
        }
        let y = (&w - &one).div_p_pow_exact(1)?;
        let mut acc = self.ring.zero();
        let mut y_pow = self.ring.one();
        let mut k: u64 = 1;
        while k - floor_log(k, p) as u64 <= n as u64 {
            y_pow = &y_pow * &y;
            let vk = int_valuation(k, p);
            let shift = k - vk as u64;
            if shift < n as u64 {
                let unit = PAdicInt::from_i64(p, n, (k / p.pow(vk)) as i64).inverse()?;
                let term = y_pow.mul_p_pow(shift as u32).reduce_precision(n).scale(&unit);
                acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
            }
            k += 1;
        }
        let q1 = PAdicInt::from_i64(p, n, (q - 1) as i64).inverse()?;
        Ok(ExtFraction::new(acc.reduce_precision(n).scale(&q1), m))
    }
}

fn frobenius_root(ring: &LocalRing, e: &ExtRing) -> Result<ExtElement> {
    // Newton's method on the defining polynomial from Z^p
    let p = ring.prime();
    let m_at = |x: &ExtElement| -> (ExtElement, ExtElement) {
        let d = e.degree;
        let mut val = ring.one();
        let mut der = ring.int(d as i64);
        for i in (0..d).rev() {
            val = &(&val * x) + &e.modulus[i].embed(ring).unwrap();
            if i > 0 {
                der = &(&der * x) + &e.modulus[i].embed(ring).unwrap().scale(&ring.base().int(i as i64));
            }
        }
        (val, der)
    };
    let mut x = ring.generator().pow(p);
    for _ in 0..2 * 64 {
        let (val, der) = m_at(&x);
        if val.is_zero() {
            return Ok(x);
        }
        x = &x - &(&val * &der.inverse()?);
    }
    Err(Error::PrecisionExhausted("Frobenius root did not converge".into()))
}

macro_rules! binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl<'a> $tr<&'a ExtElement> for &'a ExtElement {
            type Output = ExtElement;
            fn $f(self, rhs: &'a ExtElement) -> ExtElement {
                self.assert_same_ring(rhs);
                ExtElement {
                    ring: self.ring.clone(),
                    c: self.c.iter().zip(&rhs.c).map(|(a, b)| *a $op *b).collect(),
                }
            }
        }
        impl $tr for ExtElement {
            type Output = ExtElement;
            fn $f(self, rhs: ExtElement) -> ExtElement {
                <&ExtElement as $tr<&ExtElement>>::$f(&self, &rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);

impl<'a> Mul<&'a ExtElement> for &'a ExtElement {
    type Output = ExtElement;
    fn mul(self, rhs: &'a ExtElement) -> ExtElement {
        self.assert_same_ring(rhs);
        ExtElement { ring: self.ring.clone(), c: self.ring.mul_flat(&self.c, &rhs.c) }
    }
}

impl Mul for ExtElement {
    type Output = ExtElement;
    fn mul(self, rhs: ExtElement) -> ExtElement {
        &self * &rhs
    }
}

impl Neg for &ExtElement {
    type Output = ExtElement;
    fn neg(self) -> ExtElement {
        ExtElement { ring: self.ring.clone(), c: self.c.iter().map(|x| -*x).collect() }
    }
}

impl Neg for ExtElement {
    type Output = ExtElement;
    fn neg(self) -> ExtElement {
        -&self
    }
}

impl Coefficient for ExtElement {
    type Ring = LocalRing;

    fn ring_of(&self) -> LocalRing {
        self.ring.clone()
    }
    fn zero(ring: &LocalRing) -> Self {
        ring.zero()
    }
    fn one(ring: &LocalRing) -> Self {
        ring.one()
    }
    fn from_int(ring: &LocalRing, v: i64) -> Self {
        ring.int(v)
    }
    fn from_padic(ring: &LocalRing, x: &PAdicInt) -> Self {
        ring.from_padic(x)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        ExtElement::is_zero(self)
    }
    fn inverse(&self) -> Result<Self> {
        ExtElement::inverse(self)
    }
    fn agreement(&self, other: &Self) -> u32 {
        ExtElement::agreement(self, other)
    }
    fn precision(&self) -> u32 {
        ExtElement::precision(self)
    }
    fn reduce_precision(&self, n: u32) -> Self {
        ExtElement::reduce_precision(self, n)
    }
    fn scale(&self, x: &PAdicInt) -> Self {
        ExtElement::scale(self, x)
    }
    fn mul_int(&self, k: i64) -> Self {
        self.scale(&PAdicInt::from_i64(self.ring.prime(), self.ring.precision(), k))
    }
}

/// `numerator / p^den_exp` with the numerator in a [`LocalRing`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExtFraction {
    num: ExtElement,
    den_exp: u32,
}

impl ExtFraction {
    pub fn new(num: ExtElement, den_exp: u32) -> Self {
        ExtFraction { num, den_exp }.normalized()
    }

    pub fn integral(num: ExtElement) -> Self {
        ExtFraction { num, den_exp: 0 }
    }

    fn normalized(mut self) -> Self {
        while self.den_exp > 0 && self.num.c.iter().all(|x| x.residue() % x.prime() == 0) && !self.num.is_zero() {
            self.num = self.num.div_p_pow_exact(1).unwrap();
            self.den_exp -= 1;
        }
        if self.num.is_zero() {
            // keep the absolute precision, drop the denominator
            let prec = self.precision().max(0) as u32;
            self.num = self.num.ring.zero().reduce_precision(prec);
            self.den_exp = 0;
        }
        self
    }

    pub fn numerator(&self) -> &ExtElement {
        &self.num
    }

    pub fn den_exp(&self) -> u32 {
        self.den_exp
    }

    pub fn ring(&self) -> &LocalRing {
        &self.num.ring
    }

    /// Absolute precision: known modulo `p^precision O`.
    pub fn precision(&self) -> i64 {
        self.num.precision() as i64 - self.den_exp as i64
    }

    /// Valuation in uniformizer units (may be negative).
    pub fn valuation(&self) -> Option<i64> {
        let e = self.num.ring.ramification_index() as i64;
        self.num.valuation().map(|v| v as i64 - e * self.den_exp as i64)
    }

    /// Valuation as a rational `(num, den)` with `v(p) = 1`.
    pub fn valuation_p(&self) -> Option<(i64, u64)> {
        self.valuation().map(|v| (v, self.num.ring.ramification_index()))
    }

    fn aligned(&self, other: &Self) -> (ExtElement, ExtElement, u32) {
        let d = self.den_exp.max(other.den_exp);
        (self.num.mul_p_pow(d - self.den_exp), other.num.mul_p_pow(d - other.den_exp), d)
    }

    pub fn embed(&self, target: &LocalRing) -> Result<Self> {
        Ok(ExtFraction { num: self.num.embed(target)?, den_exp: self.den_exp })
    }

    pub fn scale(&self, x: &PAdicInt) -> Self {
        ExtFraction::new(self.num.scale(x), self.den_exp)
    }

    pub fn mul_elem(&self, x: &ExtElement) -> Self {
        ExtFraction::new(&self.num * x, self.den_exp)
    }

    pub fn div_p_pow(&self, k: u32) -> Self {
        ExtFraction::new(self.num.clone(), self.den_exp + k)
    }

    pub fn trace_to_base(&self) -> PAdicFraction {
        PAdicFraction::new(self.num.trace_to_base(), self.den_exp)
    }

    pub fn trace(&self) -> Self {
        ExtFraction::new(self.num.trace(), self.den_exp)
    }

    pub fn map_numerator(&self, f: impl FnOnce(&ExtElement) -> ExtElement) -> Self {
        ExtFraction::new(f(&self.num), self.den_exp)
    }
}

impl Add for &ExtFraction {
    type Output = ExtFraction;
    fn add(self, rhs: &ExtFraction) -> ExtFraction {
        let (a, b, d) = self.aligned(rhs);
        ExtFraction::new(&a + &b, d)
    }
}

impl Sub for &ExtFraction {
    type Output = ExtFraction;
    fn sub(self, rhs: &ExtFraction) -> ExtFraction {
        let (a, b, d) = self.aligned(rhs);
        ExtFraction::new(&a - &b, d)
    }
}

impl Neg for &ExtFraction {
    type Output = ExtFraction;
    fn neg(self) -> ExtFraction {
        ExtFraction { num: -&self.num, den_exp: self.den_exp }
    }
}

impl Mul for &ExtFraction {
    type Output = ExtFraction;
    fn mul(self, rhs: &ExtFraction) -> ExtFraction {
        ExtFraction::new(&self.num * &rhs.num, self.den_exp + rhs.den_exp)
    }
}

/// Tail precision, in `p`-adic digits, of a series known to degree `cap`
/// evaluated at `x`: the omitted terms lie in `x^(cap+1) O`.
fn tail_digits(cap: usize, x: &ExtElement) -> Option<u32> {
    let v = x.valuation()?;
    let e = x.ring.ramification_index();
    Some((((cap as u64 + 1) * v) / e).min(u32::MAX as u64) as u32)
}

/// Evaluates a `Z_p`-series at `x`. For an inexact series `x` must lie in
/// the maximal ideal, and the result's precision is lowered to what the
/// truncation guarantees.
pub fn evaluate_series(s: &TruncatedSeries<PAdicInt>, x: &ExtElement) -> Result<ExtElement> {
    if s.vars() != 1 {
        return Err(Error::InvalidArgument("evaluation needs a univariate series".into()));
    }
    let top = s.degree().unwrap_or(0);
    let mut acc = x.ring.zero();
    for k in (0..=top).rev() {
        acc = &acc * x;
        acc.c[0] = acc.c[0] + s.coeff(k);
    }
    finish_tail(s.is_exact(), s.cap(), x, acc)
}

/// Evaluates a series with coefficients in a subring of `x`'s ring.
pub fn evaluate_series_ext(s: &TruncatedSeries<ExtElement>, x: &ExtElement) -> Result<ExtElement> {
    if s.vars() != 1 {
        return Err(Error::InvalidArgument("evaluation needs a univariate series".into()));
    }
    let top = s.degree().unwrap_or(0);
    let mut acc = x.ring.zero();
    for k in (0..=top).rev() {
        acc = &acc * x;
        acc = &acc + &s.coeff(k).embed(&x.ring)?;
    }
    finish_tail(s.is_exact(), s.cap(), x, acc)
}

fn finish_tail(exact: bool, cap: usize, x: &ExtElement, acc: ExtElement) -> Result<ExtElement> {
    if exact {
        return Ok(acc);
    }
    match x.valuation() {
        Some(0) => Err(Error::NotInMaximalIdeal),
        _ => Ok(match tail_digits(cap, x) {
            Some(t) => acc.reduce_precision(t),
            None => acc,
        }),
    }
}

/// A chain of Eisenstein extensions generated by successive roots of a
/// Lubin-Tate polynomial: level 1 is cut out by `f(Z)/Z`, level `k+1` by
/// `f(Z) - w_k` over level `k`.
#[derive(Clone, Debug)]
pub struct EisensteinTower {
    pub base: BaseRing,
    /// `rings[k]` is level `k + 1`.
    pub rings: Vec<LocalRing>,
    /// `generators[k]` is the class `w_(k+1)` in `rings[k]`.
    pub generators: Vec<ExtElement>,
}

impl EisensteinTower {
    pub fn levels(&self) -> usize {
        self.rings.len()
    }

    pub fn ring(&self, level: usize) -> &LocalRing {
        &self.rings[level - 1]
    }

    pub fn generator(&self, level: usize) -> &ExtElement {
        &self.generators[level - 1]
    }
}

/// Builds the torsion tower of the polynomial `f` (coefficients from `Z^0`,
/// of degree `p`, `f(0) = 0`) up to level `n`.
pub fn eisenstein_from_torsion(base: BaseRing, f: &[PAdicInt], n: usize) -> Result<EisensteinTower> {
    let p = base.p as usize;
    if n == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    let f: Vec<PAdicInt> = f.iter().map(|c| c.reduce_precision(base.precision)).collect();
    let deg = f.iter().rposition(|c| !c.is_zero());
    if deg != Some(p) {
        return Err(Error::NotEisenstein(format!("polynomial has degree {deg:?}, expected {p}")));
    }
    if !f[0].is_zero() {
        return Err(Error::NotEisenstein("polynomial has a constant term".into()));
    }
    let lead_inv = f[p].inverse().map_err(|_| Error::NotEisenstein("leading coefficient is not a unit".into()))?;
    let base_ring = LocalRing::Base(base);
    let level1: Vec<ExtElement> = (1..p).map(|i| base_ring.from_padic(&(f[i] * lead_inv))).collect();
    let mut rings = vec![LocalRing::eisenstein(&base_ring, level1)?];
    let mut generators = vec![rings[0].generator()];
    for k in 1..n {
        let prev = &rings[k - 1];
        let w = &generators[k - 1];
        let mut m: Vec<ExtElement> = (0..p).map(|i| prev.from_padic(&(f[i] * lead_inv))).collect();
        m[0] = &m[0] - &w.scale(&lead_inv);
        let ring = LocalRing::eisenstein(prev, m)?;
        generators.push(ring.generator());
        rings.push(ring);
    }
    Ok(EisensteinTower { base, rings, generators })
}

/// Applies the ring endomorphism of a tower that sends the generator of
/// each level `k` to `images[k - 1]` (an element of that level's ring)
/// and fixes the base.
pub fn apply_generator_images(x: &ExtElement, images: &[ExtElement]) -> Result<ExtElement> {
    let ring = x.ring.clone();
    let LocalRing::Ext(e) = &ring else {
        return Ok(x.clone());
    };
    let level = ring.tower().len() - 1;
    let img = images.get(level - 1).ok_or_else(|| Error::InvalidArgument(format!("no image for level {level}")))?;
    if img.ring != ring {
        return Err(Error::RingMismatch("generator image must live in its own level".into()));
    }
    let mut acc = ring.zero();
    for i in (0..e.degree).rev() {
        acc = &acc * img;
        let c = apply_generator_images(&x.coefficient(i), images)?;
        acc = &acc + &c.embed(&ring)?;
    }
    Ok(acc)
}
