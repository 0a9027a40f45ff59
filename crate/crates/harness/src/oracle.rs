//! Exact-rational reference values, computed independently of the
//! library's recursions and reduced to `p`-adic numbers at the end.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
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
    (((x % &m) + &m) % &m).to_u64().expect("residue fits")
}

/// The `p`-adic expansion of `q` to absolute precision `n`.
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
        .expect("denominator is prime to p");
    let shift = if v >= 0 { v as u32 } else { 0 };
    PAdicFraction::new(u.mul_p_pow(shift).reduce_precision(num_prec), den_exp)
}

/// A `p`-integral rational reduced modulo `p^n`.
pub fn to_padic(q: &BigRational, p: u64, n: u32) -> PAdicInt {
    to_fraction(q, p, n).to_integral().expect("rational is p-integral")
}

/// `C(a, k)` for any integer `a`.
pub fn binomial(a: i64, k: usize) -> BigRational {
    (0..k as i64).fold(BigRational::one(), |acc, i| acc * rat(a - i, i + 1))
}

/// Coefficient of `Z^k` in `log(1 + Z)`.
pub fn log1p_coeff(k: usize) -> BigRational {
    rat(if k % 2 == 1 { 1 } else { -1 }, k as i64)
}

/// `num / den` as power series to degree `cap`; `den[0]` must be nonzero.
pub fn series_quotient(num: &[BigRational], den: &[BigRational], cap: usize) -> Vec<BigRational> {
    let at = |s: &[BigRational], k: usize| s.get(k).cloned().unwrap_or_else(BigRational::zero);
    let mut q: Vec<BigRational> = Vec::with_capacity(cap + 1);
    for k in 0..=cap {
        let mut acc = at(num, k);
        for i in 1..=k {
            acc -= at(den, i) * &q[k - i];
        }
        q.push(acc / &den[0]);
    }
    q
}

/// `(1+Z) g'/g` for a polynomial `g`, the logarithmic derivative against
/// `log(1+Z)`.
pub fn multiplicative_delta(g: &[BigRational], cap: usize) -> Vec<BigRational> {
    let mut num = vec![BigRational::zero(); g.len() + 1];
    for (k, c) in g.iter().enumerate().skip(1) {
        let d = c * BigRational::from_integer(BigInt::from(k));
        num[k - 1] += &d;
        num[k] += d;
    }
    series_quotient(&num, g, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reductions() {
        assert_eq!(to_padic(&rat(1, 2), 3, 4), PAdicInt::from_i64(3, 4, 41));
        assert_eq!(to_fraction(&rat(1, 3), 3, 4).den_exp(), 1);
        assert_eq!(binomial(-1, 3), rat(-1, 1));
        assert_eq!(binomial(5, 2), rat(10, 1));
    }

    #[test]
    fn delta_of_one_plus_z() {
        // (1+Z) * 1/(1+Z) = 1
        let d = multiplicative_delta(&[rat(1, 1), rat(1, 1)], 5);
        assert_eq!(d[0], rat(1, 1));
        assert!(d[1..].iter().all(Zero::is_zero));
        // (1+Z)/(2+Z) = 1/2 + Z/4 - Z^2/8 + ...
        let d = multiplicative_delta(&[rat(2, 1), rat(1, 1)], 3);
        assert_eq!(d, vec![rat(1, 2), rat(1, 4), rat(-1, 8), rat(1, 16)]);
    }
}
