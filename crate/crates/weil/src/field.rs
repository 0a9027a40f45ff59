//! Finite fields `F_(l^m)` as polynomials over `F_l` modulo a brute-force
//! certified irreducible.

use crate::error::{Result, WeilError};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// `F_l[x] / (modulus)`, `modulus` monic of degree `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDesc {
    l: u64,
    m: usize,
    /// Low to high, including the leading 1.
    modulus: Vec<u64>,
}

/// A handle to a field; cheap to clone and shareable across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field(Arc<FieldDesc>);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteFieldElement {
    field: Field,
    c: Vec<u64>,
}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.l.hash(state);
        self.0.modulus.hash(state);
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn poly_rem(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], l - 2, l);
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let f = top * lead_inv % l;
            let shift = r.len() - 1 - db;
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + l - f * bi % l) % l;
            }
        }
        r.pop();
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Trial division by every monic polynomial of degree `1 ..= m/2`.
pub fn is_irreducible(modulus: &[u64], l: u64) -> bool {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        for idx in 0..l.pow(d as u32) {
            let mut f = digits(idx, l, d);
            f.push(1);
            if poly_rem(modulus, &f, l).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn digits(mut idx: u64, l: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(idx % l);
        idx /= l;
    }
    out
}

impl Field {
    /// `F_l[x]/(modulus)` after checking that `l` is an odd prime and the
    /// modulus is monic and irreducible.
    pub fn new(l: u64, modulus: Vec<u64>) -> Result<Self> {
        if l < 3 || !is_prime(l) {
            return Err(WeilError::InvalidField(format!("{l} is not an odd prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= l) {
            return Err(WeilError::InvalidField("modulus must be monic with reduced coefficients".into()));
        }
        if !is_irreducible(&modulus, l) {
            return Err(WeilError::InvalidField(format!("{modulus:?} is reducible mod {l}")));
        }
        let m = modulus.len() - 1;
        let q = (l as u128).pow(m as u32);
        if q > 1 << 32 {
            return Err(WeilError::InvalidField(format!("field of size {q} is too large")));
        }
        Ok(Field(Arc::new(FieldDesc { l, m, modulus })))
    }

    /// The first irreducible monic of degree `m`, ordered by base-`l` index.
    pub fn of_degree(l: u64, m: usize) -> Result<Self> {
        if m == 1 {
            return Self::new(l, vec![0, 1]);
        }
        for idx in 0..l.pow(m as u32) {
            let mut f = digits(idx, l, m);
            f.push(1);
            if f[0] != 0 && is_irreducible(&f, l) {
                return Self::new(l, f);
            }
        }
        Err(WeilError::InvalidField(format!("no irreducible of degree {m} mod {l}")))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.l
    }

    pub fn degree(&self) -> usize {
        self.0.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn size(&self) -> u64 {
        self.0.l.pow(self.0.m as u32)
    }

    pub fn zero(&self) -> FiniteFieldElement {
        FiniteFieldElement { field: self.clone(), c: vec![0; self.0.m] }
    }

    pub fn one(&self) -> FiniteFieldElement {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> FiniteFieldElement {
        let mut e = self.zero();
        e.c[0] = v.rem_euclid(self.0.l as i64) as u64;
        e
    }

    /// The element whose base-`l` digits are its coordinates.
    pub fn from_index(&self, idx: u64) -> FiniteFieldElement {
        FiniteFieldElement { field: self.clone(), c: digits(idx, self.0.l, self.0.m) }
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Result<FiniteFieldElement> {
        if c.len() != self.0.m || c.iter().any(|&x| x >= self.0.l) {
            return Err(WeilError::InvalidField(format!("bad coordinates {c:?}")));
        }
        Ok(FiniteFieldElement { field: self.clone(), c: c.to_vec() })
    }

    /// A fixed quadratic non-residue (the first one by index).
    fn non_residue(&self) -> FiniteFieldElement {
        (1..self.size()).map(|i| self.from_index(i)).find(|x| !x.is_square()).expect("odd field has non-squares")
    }
}

impl FiniteFieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn index(&self) -> u64 {
        let l = self.field.0.l;
        self.c.iter().rev().fold(0, |acc, &d| acc * l + d)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut acc = self.field.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(WeilError::DivisionByZero);
        }
        Ok(self.pow(self.field.size() as u128 - 2))
    }

    /// `x -> x^l`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.field.0.l as u128)
    }

    pub fn is_square(&self) -> bool {
        self.is_zero() || self.pow((self.field.size() as u128 - 1) / 2).is_one()
    }

    /// A square root by Tonelli-Shanks, `None` for non-squares.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if !self.is_square() {
            return None;
        }
        let q = self.field.size() as u128;
        let (mut s, mut t) = (0u32, q - 1);
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let mut c = self.field.non_residue().pow(t);
        let mut x = self.pow(t.div_ceil(2));
        let mut b = self.pow(t);
        let mut m = s;
        while !b.is_one() {
            let mut i = 0;
            let mut b2 = b.clone();
            while !b2.is_one() {
                b2 = &b2 * &b2;
                i += 1;
            }
            let mut g = c.clone();
            for _ in 0..(m - i - 1) {
                g = &g * &g;
            }
            x = &x * &g;
            c = &g * &g;
            b = &b * &c;
            m = i;
        }
        Some(x)
    }

    /// Multiplicative order, for nonzero elements.
    pub fn order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let n = self.field.size() - 1;
        let mut order = n;
        let mut rest = n;
        let mut d = 2;
        while rest > 1 {
            if d * d > rest {
                d = rest;
            }
            if rest.is_multiple_of(d) {
                while rest.is_multiple_of(d) {
                    rest /= d;
                }
                while order.is_multiple_of(d) && self.pow((order / d) as u128).is_one() {
                    order /= d;
                }
            }
            d += 1;
        }
        Some(order)
    }
}

impl fmt::Debug for FiniteFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.c)
        }
    }
}

impl Add for &FiniteFieldElement {
    type Output = FiniteFieldElement;
    fn add(self, o: &FiniteFieldElement) -> FiniteFieldElement {
        let l = self.field.0.l;
        let c = self.c.iter().zip(&o.c).map(|(a, b)| (a + b) % l).collect();
        FiniteFieldElement { field: self.field.clone(), c }
    }
}

impl Sub for &FiniteFieldElement {
    type Output = FiniteFieldElement;
    fn sub(self, o: &FiniteFieldElement) -> FiniteFieldElement {
        let l = self.field.0.l;
        let c = self.c.iter().zip(&o.c).map(|(a, b)| (a + l - b) % l).collect();
        FiniteFieldElement { field: self.field.clone(), c }
    }
}

impl Neg for &FiniteFieldElement {
    type Output = FiniteFieldElement;
    fn neg(self) -> FiniteFieldElement {
        let l = self.field.0.l;
        let c = self.c.iter().map(|a| (l - a) % l).collect();
        FiniteFieldElement { field: self.field.clone(), c }
    }
}

impl Mul for &FiniteFieldElement {
    type Output = FiniteFieldElement;
    fn mul(self, o: &FiniteFieldElement) -> FiniteFieldElement {
        let d = &self.field.0;
        let (l, m) = (d.l, d.m);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % l;
            }
        }
        for k in (m..prod.len()).rev() {
            let t = prod[k];
            if t != 0 {
                for i in 0..m {
                    prod[k - m + i] = (prod[k - m + i] + l - t * d.modulus[i] % l) % l;
                }
            }
        }
        prod.truncate(m);
        FiniteFieldElement { field: self.field.clone(), c: prod }
    }
}
