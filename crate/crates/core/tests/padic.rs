mod common;

use common::{factorial, rat, to_padic};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use recip_core::padic::{int_valuation, max_precision};
use recip_core::{Error, PAdicInt};

/// Partial sum of a series in `x = p^v u`, summed until every further term
/// is divisible by `p^(n+4)`.
fn rational_series(x: i64, p: u64, n: u32, term: impl Fn(usize) -> BigRational) -> BigRational {
    let v = int_valuation(x.unsigned_abs(), p) as usize;
    let mut acc = BigRational::zero();
    let mut k = 1;
    // v(x^k / k!) > k(v - 1/(p-1)), which also bounds v(x^k / k)
    let p = p as usize;
    while k * v * (p - 1) < k + (n as usize + 4) * (p - 1) {
        acc += term(k);
        k += 1;
    }
    acc
}

#[test]
fn log_and_exp_against_rational_expansions() {
    for (p, x, n) in [(3u64, 3i64, 20u32), (3, -6, 20), (5, 5, 15), (5, 50, 15), (7, 7, 12), (7, -14, 12)] {
        let log = rational_series(x, p, n, |k| {
            let s = if k % 2 == 1 { 1 } else { -1 };
            BigRational::new(BigInt::from(x).pow(k as u32) * s, BigInt::from(k))
        });
        let exp = rational_series(x, p, n, |k| BigRational::new(BigInt::from(x).pow(k as u32), factorial(k)));
        let px = PAdicInt::from_i64(p, n, x);
        assert_eq!(px.log1p().unwrap(), to_padic(&log, p, n), "log(1+{x}) p={p}");
        assert_eq!(px.exp().unwrap(), to_padic(&(exp + rat(1, 1)), p, n), "exp({x}) p={p}");
    }
}

#[test]
fn log_and_exp_domain() {
    let unit = PAdicInt::from_i64(5, 10, 2);
    assert_eq!(unit.log1p(), Err(Error::NotInMaximalIdeal));
    assert_eq!(unit.exp(), Err(Error::NotInMaximalIdeal));
    assert_eq!(PAdicInt::zero(5, 10).exp().unwrap(), PAdicInt::one(5, 10));
}

#[test]
fn ring_axioms_randomized() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);
    for p in [3u64, 5, 7] {
        let n = max_precision(p);
        for _ in 0..500 {
            let a = PAdicInt::random(p, n, &mut rng);
            let b = PAdicInt::random(p, n, &mut rng);
            let c = PAdicInt::random(p, n, &mut rng);
            assert_eq!((a + b) + c, a + (b + c));
            assert_eq!((a * b) * c, a * (b * c));
            assert_eq!(a * (b + c), a * b + a * c);
            assert_eq!(a + b, b + a);
            assert_eq!(a * b, b * a);
            assert_eq!(a - a, PAdicInt::zero(p, n));
            assert_eq!(a + (-a), PAdicInt::zero(p, n));
            if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
                if va + vb < n {
                    assert_eq!((a * b).valuation(), Some(va + vb));
                }
            }
            if a.is_unit() {
                assert_eq!(a * a.inverse().unwrap(), PAdicInt::one(p, n));
            } else {
                assert_eq!(a.inverse(), Err(Error::NotAUnit));
            }
        }
    }
}

#[test]
fn teichmuller_for_every_residue() {
    for p in [3u64, 5, 7, 11, 13] {
        let n = max_precision(p).min(12);
        for r in 1..p {
            let x = PAdicInt::from_residue(p, n, r);
            let w = x.teichmuller().unwrap();
            assert_eq!(w.pow(p - 1), PAdicInt::one(p, n), "p={p} r={r}");
            assert_eq!(w.residue() % p, r);
            // the principal part is 1 mod p
            assert_eq!(x.one_unit_part().unwrap().residue() % p, 1);
        }
    }
}

#[test]
fn precision_limits() {
    assert_eq!(max_precision(3), 40);
    assert_eq!(max_precision(5), 27);
    assert_eq!(max_precision(7), 22);
    assert!(matches!(PAdicInt::try_new(5, 28, 1), Err(Error::PrecisionTooLarge { p: 5, precision: 28, max: 27 })));
}

fn principal(p: u64, n: u32) -> impl Strategy<Value = PAdicInt> {
    (0..p.pow(n - 1)).prop_map(move |r| PAdicInt::from_residue(p, n, r * p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn exp_inverts_log(x in principal(5, 20)) {
        let one = PAdicInt::one(5, 20);
        prop_assert_eq!(x.log1p().unwrap().exp().unwrap(), one + x);
        prop_assert_eq!((x.exp().unwrap() - one).log1p().unwrap(), x);
    }

    #[test]
    fn log_is_a_homomorphism(x in principal(7, 15), y in principal(7, 15)) {
        let one = PAdicInt::one(7, 15);
        let uv = (one + x) * (one + y) - one;
        prop_assert_eq!(uv.log1p().unwrap(), x.log1p().unwrap() + y.log1p().unwrap());
    }

    #[test]
    fn valuation_of_products(a in 1i64..1_000_000, b in 1i64..1_000_000) {
        let (x, y) = (PAdicInt::from_i64(3, 30, a), PAdicInt::from_i64(3, 30, b));
        let want = int_valuation(a as u64, 3) + int_valuation(b as u64, 3);
        prop_assert_eq!((x * y).valuation(), Some(want));
    }
}
