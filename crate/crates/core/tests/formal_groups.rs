mod common;

use common::{binomial, factorial, log1p_coeff, rat, to_fraction, to_padic};
use num_rational::BigRational;
use proptest::prelude::*;
use recip_core::lubin_tate::{lt_isomorphism, torsion_correspondence, torsion_tower};
use recip_core::padic::floor_log;
use recip_core::{FormalGroupLaw, PAdicConfig, PAdicInt, TruncatedSeries};

fn cfg(p: u64, n: u32, d: usize) -> PAdicConfig {
    PAdicConfig::new(p, n, d).unwrap()
}

#[test]
fn multiplicative_law_matches_closed_forms() {
    for (p, n, d) in [(3, 12, 16), (5, 12, 16), (7, 12, 16)] {
        let g = FormalGroupLaw::multiplicative(cfg(p, n, d)).unwrap();
        let law = g.law();
        for i in 0..=d {
            for j in 0..=(d - i) {
                let want = i64::from(matches!((i, j), (1, 0) | (0, 1) | (1, 1)));
                assert_eq!(law.coeff2(i, j), PAdicInt::from_i64(p, n, want), "p={p} ({i},{j})");
            }
        }
        for k in 1..=d {
            let want = to_fraction(&log1p_coeff(k), p, n);
            let got = g.logarithm()[k];
            assert!(got.agreement(&want) >= n as i64, "p={p} lambda_{k}: {got:?} vs {want:?}");
        }
        for a in [2i64, 4, 7, -1, -3, 1 + p as i64, 100] {
            let s = g.mult_by(&PAdicInt::from_i64(p, n, a)).unwrap();
            for k in 1..=d {
                let want = to_padic(&binomial(a, k), p, n);
                let c = s.coeff(k);
                assert!(c.precision() >= n - floor_log(k as u64, p));
                assert!(c.congruent(&want), "p={p} [{a}]_{k}");
            }
            let exact = g.mult_by_int(a, d).unwrap();
            for k in 1..=d {
                assert_eq!(exact.coeff(k), to_padic(&binomial(a, k), p, n), "p={p} exact [{a}]_{k}");
            }
        }
    }
}

#[test]
fn multiplicative_exponential_is_exp_minus_one() {
    let (p, n, d) = (5, 8, 12);
    let g = FormalGroupLaw::multiplicative(cfg(p, n, d)).unwrap();
    let e = g.exponential().unwrap();
    for (k, c) in e.iter().enumerate().skip(1) {
        let want = to_fraction(&BigRational::new(1.into(), factorial(k)), p, n);
        assert!(c.agreement(&want) >= n as i64, "1/{k}!: {c:?} vs {want:?}");
    }
}

#[test]
fn logarithm_denominators_are_bounded() {
    for p in [3u64, 5, 7] {
        let c = cfg(p, 10, 30);
        let g = FormalGroupLaw::special(c, c.int(p as i64)).unwrap();
        let lam = g.logarithm();
        assert_eq!(lam[1], recip_core::PAdicFraction::integral(c.int(1)));
        for (k, l) in lam.iter().enumerate().skip(1) {
            assert!(l.den_exp() <= floor_log(k as u64, p), "p={p} k={k}");
        }
    }
}

#[test]
fn special_law_passes_all_checks() {
    for (p, pi) in [(3u64, -3i64), (5, 5), (5, 10), (7, 14)] {
        let n = 12;
        let c = cfg(p, n, 16);
        let g = FormalGroupLaw::special(c, c.int(pi)).unwrap();
        assert_eq!(g.check_unit_law(), n);
        assert_eq!(g.check_commutativity(), n);
        assert_eq!(g.check_associativity(), n);
        assert_eq!(g.check_commutes_with_f().unwrap(), n);
        assert!(g.check_log_functional().unwrap() >= n as i64);
        assert!(g.check_log_homomorphism().unwrap() >= n as i64);
    }
}

#[test]
fn general_frobenius_series() {
    // f = 5Z + 10Z^2 + 6Z^5 + 25Z^7 with uniformizer 5
    let c = cfg(5, 10, 14);
    let r = recip_core::BaseRing::new(5, 10);
    let mut coeffs = vec![r.int(0); 8];
    coeffs[1] = r.int(5);
    coeffs[2] = r.int(10);
    coeffs[5] = r.int(6);
    coeffs[7] = r.int(25);
    let g = FormalGroupLaw::new(c, TruncatedSeries::polynomial(&r, coeffs)).unwrap();
    assert_eq!(g.check_associativity(), 10);
    assert_eq!(g.check_commutes_with_f().unwrap(), 10);
    assert!(g.check_log_homomorphism().unwrap() >= 10);
    assert!(g.mult_by(&c.int(5)).unwrap().equals_mod_caps(g.frobenius_series()));
}

#[test]
fn torsion_tower_of_the_multiplicative_group() {
    let c = cfg(3, 10, 12);
    let g = FormalGroupLaw::multiplicative(c).unwrap();
    let t = torsion_tower(&g, 1).unwrap();
    let w = t.generator(1);
    let r = t.ring(1);
    // w = zeta_3 - 1 is a root of Z^2 + 3Z + 3
    let q = &(&w.pow(2) + &w.scale(&c.int(3))) + &r.int(3);
    assert!(q.is_zero());
    assert_eq!(w.valuation(), Some(1));
    assert_eq!(w.trace_to_base(), c.int(-3));
    assert_eq!(w.norm_to_base(), c.int(3));
}

#[test]
fn logarithm_on_torsion_tower() {
    let c = cfg(3, 10, 40);
    let g = FormalGroupLaw::special(c, c.int(3)).unwrap();
    let t = torsion_tower(&g, 3).unwrap();
    for k in 1..=3 {
        // [pi]^k kills w_k
        let mut x = t.generator(k).clone();
        for _ in 0..k {
            x = g.apply_f(&x).unwrap();
        }
        assert!(x.is_zero());
    }
    // torsion points lie in the kernel of the logarithm; the denominators
    // of lambda cost 3 digits and the truncation more at ramification 6
    let lo = g.log_at(t.generator(1)).unwrap();
    let hi = g.log_at(t.generator(2)).unwrap();
    assert!(lo.precision() >= 7 && lo.numerator().is_zero(), "{lo:?}");
    assert!(hi.precision() >= 3 && hi.numerator().is_zero());
    let diff = &hi.scale(&g.uniformizer()) - &lo.embed(t.ring(2)).unwrap();
    assert!(diff.precision() >= 3 && diff.numerator().is_zero());
    assert!(g.log_at(t.generator(3)).unwrap().precision() <= 0);
}

#[test]
fn identity_isomorphism() {
    let c = cfg(5, 10, 16);
    let g = FormalGroupLaw::special(c, c.int(5)).unwrap();
    let iso = lt_isomorphism(&g, &g, &c.int(1)).unwrap();
    assert!(iso.eta().equals_mod_caps(&TruncatedSeries::var(&g.base_ring(), 1)));
    let scaled = lt_isomorphism(&g, &g, &c.int(-1)).unwrap();
    assert!(scaled.eta().equals_mod_caps(&g.mult_by(&c.int(-1)).unwrap()));
}

#[test]
fn twin_isomorphism_maps_torsion_to_torsion() {
    let c = cfg(3, 10, 20);
    let gm = FormalGroupLaw::multiplicative(c).unwrap();
    let sp = FormalGroupLaw::special(c, c.int(3)).unwrap();
    let iso = lt_isomorphism(&gm, &sp, &c.int(1)).unwrap();
    assert_eq!(iso.period(), c.int(1));
    assert_eq!(iso.check_homomorphism().unwrap(), 10);
    assert!(iso.check_compare_logs().unwrap() >= 10);
    for a in [2i64, 5, -7] {
        assert!(iso.check_endomorphisms(&c.int(a)).unwrap() >= 10 - floor_log(20, 3));
    }
    let ts = torsion_tower(&gm, 1).unwrap();
    let tt = torsion_tower(&sp, 1).unwrap();
    let zero = torsion_correspondence(&iso, &ts, &tt, 0).unwrap();
    assert!(zero.passed() && zero.image.is_zero());
    let cert = torsion_correspondence(&iso, &ts, &tt, 1).unwrap();
    assert!(cert.passed(), "{cert:?}");
    // eta(zeta_3 - 1) is a nonzero root of f(Z)/Z = Z^2 + 3
    let x = &cert.image;
    assert!(!x.is_zero());
    assert!((&x.pow(2) + &x.ring().int(3)).reduce_precision(cert.precision).is_zero());
}

#[test]
fn non_trivial_period() {
    let c = cfg(5, 8, 16);
    let a = FormalGroupLaw::special(c, c.int(5)).unwrap();
    let b = FormalGroupLaw::multiplicative(c).unwrap();
    let omega = c.int(7);
    let iso = lt_isomorphism(&a, &b, &omega).unwrap();
    assert_eq!(iso.period(), omega);
    assert_eq!(iso.check_homomorphism().unwrap(), 8);
    assert!(iso.check_compare_logs().unwrap() >= 8);
}

#[test]
fn rational_oracle_sanity() {
    assert_eq!(to_padic(&rat(1, 2), 3, 4), PAdicInt::from_i64(3, 4, 41));
    assert_eq!(to_fraction(&rat(1, 3), 3, 4).den_exp(), 1);
}

fn special_5() -> FormalGroupLaw {
    let c = cfg(5, 12, 16);
    FormalGroupLaw::special(c, c.int(5)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn endomorphism_ring_action(a in any::<i64>(), b in any::<i64>()) {
        let g = special_5();
        let (a, b) = (PAdicInt::from_i64(5, 12, a), PAdicInt::from_i64(5, 12, b));
        let floor = 12 - floor_log(16, 5);
        prop_assert!(g.check_endomorphism_product(&a, &b).unwrap() >= floor);
        prop_assert!(g.check_endomorphism_sum(&a, &b).unwrap() >= floor);
        prop_assert!(g.check_log_linearity(&a).unwrap() >= 12);
    }

    #[test]
    fn mult_by_matches_integer_version(a in -10_000i64..10_000) {
        let g = special_5();
        let s = g.mult_by(&PAdicInt::from_i64(5, 12, a)).unwrap();
        let t = g.mult_by_int(a, 16).unwrap();
        prop_assert!(s.equals_mod_caps(&t));
    }
}
