//! Short Weierstrass curves `y^2 = x^3 + ax + b` and the CM curve
//! `y^2 = x^3 - x` with `iota(x, y) = (-x, iy)`.

use crate::error::{Result, WeilError};
use crate::field::{Field, FiniteFieldElement};
use rand::Rng;

type Fq = FiniteFieldElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine(Fq, Fq),
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    /// Applies `x -> x^l` to both coordinates.
    pub fn frobenius(&self) -> Self {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.frobenius(), y.frobenius()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    field: Field,
    a: Fq,
    b: Fq,
}

impl Curve {
    pub fn new(field: &Field, a: i64, b: i64) -> Result<Self> {
        let (a, b) = (field.int(a), field.int(b));
        let disc = &(&a.pow(3) * &field.int(4)) + &(&b.pow(2) * &field.int(27));
        if disc.is_zero() {
            return Err(WeilError::Singular);
        }
        Ok(Curve { field: field.clone(), a, b })
    }

    /// `y^2 = x^3 - x`.
    pub fn cm(field: &Field) -> Result<Self> {
        Self::new(field, -1, 0)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn rhs(&self, x: &Fq) -> Fq {
        &(&x.pow(3) + &(&self.a * x)) + &self.b
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => (y * y) == self.rhs(x),
        }
    }

    pub fn point(&self, x: Fq, y: Fq) -> Result<CurvePoint> {
        let p = CurvePoint::Affine(x, y);
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(WeilError::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.clone(), -y),
        }
    }

    /// The tangent or chord slope at `p`, `q`; `None` when `p + q = O`.
    pub(crate) fn slope(&self, p: &CurvePoint, q: &CurvePoint) -> Option<Fq> {
        let (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) = (p, q) else {
            return None;
        };
        if x1 == x2 {
            if y1 != y2 || y1.is_zero() {
                return None;
            }
            let num = &(&(x1 * x1) * &self.field.int(3)) + &self.a;
            let den = y1 + y1;
            Some(&num * &den.inverse().expect("nonzero"))
        } else {
            Some(&(y2 - y1) * &(x2 - x1).inverse().expect("distinct x"))
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        match (p, q) {
            (CurvePoint::Infinity, _) => q.clone(),
            (_, CurvePoint::Infinity) => p.clone(),
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, _)) => match self.slope(p, q) {
                None => CurvePoint::Infinity,
                Some(m) => {
                    let x3 = &(&(&m * &m) - x1) - x2;
                    let y3 = &(&m * &(x1 - &x3)) - y1;
                    CurvePoint::Affine(x3, y3)
                }
            },
        }
    }

    pub fn sub(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        self.add(p, &self.neg(q))
    }

    pub fn mul(&self, p: &CurvePoint, k: i64) -> CurvePoint {
        let base = if k < 0 { self.neg(p) } else { p.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &b);
            }
            b = self.add(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Order of `p`, given a multiple `n` of it.
    pub fn order_dividing(&self, p: &CurvePoint, n: u64) -> u64 {
        let mut order = n;
        for d in prime_factors(n) {
            while order.is_multiple_of(d) && self.mul(p, (order / d) as i64).is_infinity() {
                order /= d;
            }
        }
        order
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> CurvePoint {
        loop {
            let x = self.field.from_index(rng.random_range(0..self.field.size()));
            if let Some(y) = self.rhs(&x).sqrt() {
                let y = if rng.random_bool(0.5) { -&y } else { y };
                return CurvePoint::Affine(x, y);
            }
        }
    }

    /// `#E(F_q)` from a brute-force count over the prime field and the
    /// Frobenius recurrence, for curves with coefficients in `F_l`.
    pub fn order(&self) -> u64 {
        let l = self.field.characteristic();
        let prime = Field::of_degree(l, 1).expect("prime field");
        let (a, b) = (self.a.coeffs()[0], self.b.coeffs()[0]);
        let mut count = 1u64;
        for x in 0..l {
            let r = prime.int(((x * x % l * x + a * x + b) % l) as i64);
            count += if r.is_zero() {
                1
            } else if r.is_square() {
                2
            } else {
                0
            };
        }
        let t = l as i128 + 1 - count as i128;
        let (mut s0, mut s1) = (2i128, t);
        for _ in 1..self.field.degree() {
            let s2 = t * s1 - l as i128 * s0;
            s0 = s1;
            s1 = s2;
        }
        (self.field.size() as i128 + 1 - s1) as u64
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `a + b iota` on `y^2 = x^3 - x`, with `iota(x, y) = (-x, iy)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMEndomorphism {
    pub a: i64,
    pub b: i64,
    i: Fq,
}

impl CMEndomorphism {
    /// Requires `i^2 = -1`.
    pub fn new(a: i64, b: i64, i: &Fq) -> Result<Self> {
        let f = i.field();
        if (i * i) != f.int(-1) {
            return Err(WeilError::NoCm);
        }
        Ok(CMEndomorphism { a, b, i: i.clone() })
    }

    /// A square root of `-1` in the field, when there is one.
    pub fn sqrt_minus_one(field: &Field) -> Result<Fq> {
        field.int(-1).sqrt().ok_or(WeilError::NoCm)
    }

    pub fn iota(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(-x, &self.i * y),
        }
    }

    pub fn apply(&self, curve: &Curve, p: &CurvePoint) -> CurvePoint {
        curve.add(&curve.mul(p, self.a), &curve.mul(&self.iota(p), self.b))
    }

    /// `a - b iota`.
    pub fn dual(&self) -> Self {
        CMEndomorphism { a: self.a, b: -self.b, i: self.i.clone() }
    }

    /// The degree `a^2 + b^2`.
    pub fn norm(&self) -> i64 {
        self.a * self.a + self.b * self.b
    }

    /// `iota^2 = [-1]` and `phi phi^ = [a^2 + b^2]` on the given points.
    pub fn check_consistency(&self, curve: &Curve, points: &[CurvePoint]) -> bool {
        points.iter().all(|p| {
            curve.contains(&self.iota(p))
                && self.iota(&self.iota(p)) == curve.neg(p)
                && self.dual().apply(curve, &self.apply(curve, p)) == curve.mul(p, self.norm())
        })
    }
}
