//! The coefficient-ring abstraction shared by series, matrices and towers.

use std::fmt;

use crate::error::Result;
use crate::padic::PAdicInt;

/// Commutative ring element with an attached ring descriptor.
///
/// Zero and one need a descriptor because precision (and, for extension
/// rings, the defining polynomial) is part of the ring, not of the type.
pub trait Coefficient: Clone + fmt::Debug + Send + Sync + Sized {
    type Ring: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn ring_of(&self) -> Self::Ring;
    fn zero(ring: &Self::Ring) -> Self;
    fn one(ring: &Self::Ring) -> Self;
    fn from_int(ring: &Self::Ring, v: i64) -> Self;
    fn from_padic(ring: &Self::Ring, x: &PAdicInt) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// True when every known digit is zero.
    fn is_zero(&self) -> bool;
    fn inverse(&self) -> Result<Self>;

    /// Number of `p`-adic digits on which the two values agree, capped at
    /// their common precision.
    fn agreement(&self, other: &Self) -> u32;
    /// Precision in `p`-adic digits.
    fn precision(&self) -> u32;
    fn reduce_precision(&self, n: u32) -> Self;

    fn mul_int(&self, k: i64) -> Self {
        self.mul(&Self::from_int(&self.ring_of(), k))
    }

    fn scale(&self, x: &PAdicInt) -> Self {
        self.mul(&Self::from_padic(&self.ring_of(), x))
    }
}

/// `Z_p` modulo `p^precision`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BaseRing {
    pub p: u64,
    pub precision: u32,
}

impl BaseRing {
    pub fn new(p: u64, precision: u32) -> Self {
        BaseRing { p, precision }
    }

    pub fn int(&self, v: i64) -> PAdicInt {
        PAdicInt::from_i64(self.p, self.precision, v)
    }
}

impl Coefficient for PAdicInt {
    type Ring = BaseRing;

    fn ring_of(&self) -> BaseRing {
        BaseRing { p: self.prime(), precision: self.precision() }
    }
    fn zero(ring: &BaseRing) -> Self {
        PAdicInt::zero(ring.p, ring.precision)
    }
    fn one(ring: &BaseRing) -> Self {
        PAdicInt::one(ring.p, ring.precision)
    }
    fn from_int(ring: &BaseRing, v: i64) -> Self {
        PAdicInt::from_i64(ring.p, ring.precision, v)
    }
    fn from_padic(ring: &BaseRing, x: &PAdicInt) -> Self {
        x.reduce_precision(ring.precision)
    }
    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        *self - *rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn is_zero(&self) -> bool {
        PAdicInt::is_zero(self)
    }
    fn inverse(&self) -> Result<Self> {
        PAdicInt::inverse(self)
    }
    fn agreement(&self, other: &Self) -> u32 {
        PAdicInt::agreement(self, other)
    }
    fn precision(&self) -> u32 {
        PAdicInt::precision(self)
    }
    fn reduce_precision(&self, n: u32) -> Self {
        PAdicInt::reduce_precision(self, n)
    }
    fn mul_int(&self, k: i64) -> Self {
        PAdicInt::mul_int(self, k)
    }
}

/// Characteristic polynomial `det(x I - A)` by Berkowitz's division-free
/// algorithm, coefficients from the leading `1` down to the constant.
pub fn charpoly<C: Coefficient>(ring: &C::Ring, a: &[Vec<C>]) -> Vec<C> {
    let n = a.len();
    let mut poly = vec![C::one(ring)];
    for r in 0..n {
        // column of the Toeplitz factor: 1, -a_rr, -R C, -R A C, ...
        let mut col = Vec::with_capacity(r + 2);
        col.push(C::one(ring));
        col.push(a[r][r].neg());
        let mut v: Vec<C> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let rc = (0..r).fold(C::zero(ring), |acc, j| acc.add(&a[r][j].mul(&v[j])));
            col.push(rc.neg());
            v = (0..r).map(|i| (0..r).fold(C::zero(ring), |acc, j| acc.add(&a[i][j].mul(&v[j])))).collect();
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = C::zero(ring);
            for j in 0..=r.min(i) {
                if i - j < col.len() {
                    acc = acc.add(&col[i - j].mul(&poly[j]));
                }
            }
            next.push(acc);
        }
        poly = next;
    }
    poly
}

/// Determinant over any commutative coefficient ring.
pub fn determinant<C: Coefficient>(ring: &C::Ring, a: &[Vec<C>]) -> C {
    let n = a.len();
    let cp = charpoly(ring, a);
    if n.is_multiple_of(2) {
        cp[n].clone()
    } else {
        cp[n].neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn berkowitz_small_matrices() {
        let r = BaseRing::new(7, 6);
        let m = |rows: &[&[i64]]| -> Vec<Vec<PAdicInt>> {
            rows.iter().map(|row| row.iter().map(|&v| r.int(v)).collect()).collect()
        };
        assert_eq!(determinant(&r, &m(&[&[3]])), r.int(3));
        assert_eq!(determinant(&r, &m(&[&[1, 2], &[3, 4]])), r.int(-2));
        assert_eq!(determinant(&r, &m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])), r.int(6));
        let cp = charpoly(&r, &m(&[&[1, 2], &[3, 4]]));
        assert_eq!(cp, vec![r.int(1), r.int(-5), r.int(-2)]);
    }

    #[test]
    fn berkowitz_matches_cofactor_expansion() {
        // 4x4 with a non-unit pivot everywhere in the first column
        let r = BaseRing::new(5, 8);
        let vals = [[5, 1, 2, 3], [10, 4, 0, 1], [25, 2, 2, 2], [15, 1, 3, 4]];
        let a: Vec<Vec<PAdicInt>> = vals.iter().map(|row| row.iter().map(|&v| r.int(v)).collect()).collect();
        fn cofactor(m: &[Vec<i64>]) -> i64 {
            if m.len() == 1 {
                return m[0][0];
            }
            (0..m.len())
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m[1..]
                        .iter()
                        .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                        .collect();
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * m[0][j] * cofactor(&minor)
                })
                .sum()
        }
        let ints: Vec<Vec<i64>> = vals.iter().map(|r| r.to_vec()).collect();
        assert_eq!(determinant(&r, &a), r.int(cofactor(&ints)));
    }
}
