//! Exact-rational oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use recip_core::{PAdicFraction, PAdicInt};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn split_p(x: &BigInt, p: u64) -> (BigInt, u32) {
    let pb = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while !x.is_zero() && (&x % &pb).is_zero() {
        x /= &pb;
        v += 1;
    }
    (x, v)
}

fn residue(x: &BigInt, modulus: u64) -> u64 {
    let m = BigInt::from(modulus);
    (((x % &m) + &m) % &m).to_u64().unwrap()
}

/// The `p`-adic expansion of a rational, known to absolute precision `n`.
pub fn to_fraction(q: &BigRational, p: u64, n: u32) -> PAdicFraction {
    if q.is_zero() {
        return PAdicFraction::integral(PAdicInt::zero(p, n));
    }
    let (num, a) = split_p(q.numer(), p);
    let (den, b) = split_p(q.denom(), p);
    let v = a as i64 - b as i64;
    let (num_prec, den_exp) = if v >= 0 { (n, 0) } else { (n + (-v) as u32, (-v) as u32) };
    let modulus = p.pow(num_prec);
    let u = PAdicInt::from_residue(p, num_prec, residue(&num, modulus))
        .div_unit(&PAdicInt::from_residue(p, num_prec, residue(&den, modulus)))
        .unwrap();
    let shift = if v >= 0 { v as u32 } else { 0 };
    PAdicFraction::new(u.mul_p_pow(shift).reduce_precision(num_prec), den_exp)
}

/// A rational that must be `p`-integral, reduced modulo `p^n`.
pub fn to_padic(q: &BigRational, p: u64, n: u32) -> PAdicInt {
    to_fraction(q, p, n).to_integral().expect("rational is not p-integral")
}

/// Generalized binomial coefficient `C(a, k)` as an exact rational.
pub fn binomial(a: i64, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k as i64 {
        acc *= rat(a - i, i + 1);
    }
    acc
}

/// `(-1)^(k+1) / k`, the coefficients of `log(1 + Z)`.
pub fn log1p_coeff(k: usize) -> BigRational {
    let s = if k % 2 == 1 { 1 } else { -1 };
    rat(s, k as i64)
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k as i64).fold(BigInt::one(), |a, i| a * i)
}

pub fn abs_i64(x: &BigInt) -> i64 {
    x.abs().to_i64().unwrap()
}
