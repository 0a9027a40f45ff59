mod common;

use common::{factorial, to_padic};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use recip_core::coleman::{cyclotomic, delta_at_zero};
use recip_core::iwasawa::{
    d_star, divide_by_theta, eval_at_psi_star, eval_character, gamma_generator, iota_star, iota_w, theta_congruence,
    theta_element, verify_dertheta, GroupAlgebraElement, IwasawaElement, UnitTowerData,
};
use recip_core::{BaseRing, Error, PAdicConfig, PAdicInt, TruncatedSeries};

fn exp_p_oracle(p: u64, n: u32) -> PAdicInt {
    let mut acc = BigRational::zero();
    for k in 0..(3 * n as usize + 10) {
        acc += BigRational::new(BigInt::from(p).pow(k as u32), factorial(k));
    }
    to_padic(&acc, p, n)
}

#[test]
fn character_values() {
    for p in [5u64, 7] {
        let n = 15;
        let c = gamma_generator(p, n, None).unwrap();
        let r = BaseRing::new(p, n);
        let one = r.int(1);
        let kappa = r.int(1234);
        let k = IwasawaElement::constant(&kappa, &c).unwrap();
        for s in [0i64, 1, -3, 17] {
            assert_eq!(eval_character(&k, &r.int(s)).unwrap(), kappa);
        }
        let theta = theta_element(&c).unwrap();
        assert!(eval_at_psi_star(&theta).unwrap().is_zero());
        assert_eq!(eval_character(&theta, &one).unwrap(), exp_p_oracle(p, n) - one);
        // on the branch T = <gamma> - 1, and <c> = exp(p)
        let t = IwasawaElement::variable(&c).unwrap();
        assert_eq!(eval_at_psi_star(&t).unwrap(), exp_p_oracle(p, n) - one);
        assert_eq!(c.one_unit_part().unwrap(), exp_p_oracle(p, n));
    }
}

#[test]
fn derivatives_of_theta_powers() {
    for p in [5u64, 7] {
        let c = gamma_generator(p, 18, None).unwrap();
        let theta = theta_element(&c).unwrap();
        for m in 1..=3usize {
            let want = PAdicInt::from_i64(p, 18, (p as i64).pow(m as u32));
            assert_eq!(d_star(&theta.pow(m as u64), m).unwrap(), want, "p={p} m={m}");
            // lower derivatives of theta^m vanish at psi*
            for j in 0..m {
                assert!(d_star(&theta.pow(m as u64), j).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn d_star_rejects_large_orders() {
    let c = gamma_generator(5, 10, None).unwrap();
    let theta = theta_element(&c).unwrap();
    assert!(matches!(d_star(&theta, 5), Err(Error::InvalidArgument(_))));
    let other = IwasawaElement::new(2, theta.series().clone(), c).unwrap();
    assert!(eval_at_psi_star(&other).is_err());
    assert!(theta.add(&other).is_err());
}

/// `(1/m!) d^m/ds^m F(x0 + u(exp(ps) - 1))` at `s = 0` from the chain rule,
/// with `y^(j)(0) = u p^j`.
fn chain_rule(f: &TruncatedSeries<PAdicInt>, u: PAdicInt, m: usize) -> PAdicInt {
    let p = u.prime();
    let r = *f.ring();
    let x0 = u - r.int(1);
    let d1 = f.derive(0).unwrap();
    let d2 = d1.derive(0).unwrap();
    let d3 = d2.derive(0).unwrap();
    let (f1, f2, f3) = (d1.evaluate(&x0), d2.evaluate(&x0), d3.evaluate(&x0));
    let y = |j: u32| u * r.int((p as i64).pow(j));
    match m {
        0 => f.evaluate(&x0),
        1 => f1 * y(1),
        2 => (f2 * y(1) * y(1) + f1 * y(2)).div_unit(&r.int(2)).unwrap(),
        3 => (f3 * y(1).pow(3) + f2 * y(1) * y(2) * r.int(3) + f1 * y(3)).div_unit(&r.int(6)).unwrap(),
        _ => unreachable!(),
    }
}

#[test]
fn d_star_matches_the_chain_rule() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(11);
    for p in [5u64, 7] {
        let c = gamma_generator(p, 16, None).unwrap();
        let u = c.one_unit_part().unwrap();
        for _ in 0..30 {
            let f = IwasawaElement::random_sparse(&c, 10, 0.5, &mut rng).unwrap();
            for m in 0..=3 {
                assert_eq!(d_star(&f, m).unwrap(), chain_rule(f.series(), u, m), "p={p} m={m}");
            }
        }
    }
}

#[test]
fn theta_divides_the_kernel() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
    let c = gamma_generator(7, 12, None).unwrap();
    let theta = theta_element(&c).unwrap();
    for _ in 0..20 {
        let f = IwasawaElement::random_sparse(&c, 9, 0.6, &mut rng).unwrap();
        let q = divide_by_theta(&f).unwrap();
        let f0 = IwasawaElement::constant(&eval_at_psi_star(&f).unwrap(), &c).unwrap();
        let diff = f.sub(&f0).unwrap();
        assert!(q.mul(&theta).unwrap().series().equals_mod_caps(diff.series()));
    }
}

#[test]
fn dertheta_random_elements() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(2024);
    for p in [5u64, 7] {
        let c = gamma_generator(p, 20, None).unwrap();
        for _ in 0..50 {
            let f = IwasawaElement::random_sparse(&c, 12, 0.4, &mut rng).unwrap();
            for m in 1..=3 {
                let cert = verify_dertheta(&f, m).unwrap();
                assert!(cert.passed(), "p={p} {cert:?}");
                assert_eq!(cert.precision, 20);
            }
        }
    }
}

#[test]
fn dertheta_trivial_cases() {
    let c = gamma_generator(5, 12, None).unwrap();
    let kappa = PAdicInt::from_i64(5, 12, 3);
    let cert = verify_dertheta(&IwasawaElement::constant(&kappa, &c).unwrap(), 1).unwrap();
    assert!(cert.passed());
    assert!(cert.lhs.congruent(&kappa.mul_int(5)) && cert.rhs.congruent(&kappa.mul_int(5)));
    let cert = verify_dertheta(&theta_element(&c).unwrap(), 1).unwrap();
    assert!(cert.lhs.is_zero() && cert.rhs.is_zero());
}

#[test]
fn theta_congruence_grid() {
    for (p, n, g0) in [(5u64, 1u32, None), (5, 2, None), (7, 1, None), (7, 2, None), (5, 2, Some(3)), (3, 2, None)] {
        let c = gamma_generator(p, 12, g0).unwrap();
        let cert = theta_congruence(n, &c).unwrap();
        assert!(cert.holds(), "{cert:?}");
        assert!(!cert.control_accepted, "{cert:?}");
        assert_eq!(cert.order as u64, p.pow(n - 1) * (p - 1));
    }
}

#[test]
fn theta_congruence_needs_room() {
    let c = gamma_generator(5, 4, None).unwrap();
    assert!(matches!(theta_congruence(2, &c), Err(Error::InvalidArgument(_))));
    let c = gamma_generator(5, 12, None).unwrap();
    assert!(matches!(theta_congruence(4, &c), Err(Error::InvalidArgument(_))));
}

#[test]
fn group_algebra_product() {
    let r = BaseRing::new(5, 6);
    let mut a = GroupAlgebraElement::zero(5, 2, 6);
    a.add_term(2, r.int(3));
    a.add_term(7, r.int(1));
    let mut b = GroupAlgebraElement::zero(5, 2, 6);
    b.add_term(13, r.int(2));
    let ab = a.mul(&b);
    assert_eq!(ab.coeff(26 % 25), r.int(6));
    assert_eq!(ab.coeff(91 % 25), r.int(2));
    assert_eq!(ab.coeffs().iter().filter(|x| !x.is_zero()).count(), 2);
}

#[test]
fn iota_star_on_cyclotomic_units() {
    let c = PAdicConfig::new(3, 10, 10).unwrap();
    let data = cyclotomic(c, 2, 3).unwrap();
    let units = UnitTowerData::from_coleman(&data).unwrap();
    let one = c.int(1);
    let res = iota_star(&units, 3, &one).unwrap();
    assert_eq!(res.partials.len(), 3);
    let gap = res.gaps[0].expect("S_2 differs from S_1");
    assert!(gap.0 >= gap.1 as i64, "v(S_2 - S_1) = {gap:?}");
    assert!(res.gaps_nondecreasing(), "{:?}", res.gaps);

    let ones = (1..=3).map(|k| units.tower().ring(k).one()).collect();
    let trivial = UnitTowerData::new(units.tower().clone(), ones).unwrap();
    for s in iota_star(&trivial, 3, &one).unwrap().partials {
        assert!(s.numerator().is_zero());
    }

    let squared = iota_star(&units.power(2), 2, &one).unwrap();
    let base = iota_star(&units, 2, &one).unwrap();
    for (a, b) in squared.partials.iter().zip(&base.partials) {
        let d = a - &b.scale(&c.int(2));
        assert!(d.numerator().is_zero(), "{d:?}");
    }
}

#[test]
fn iota_w_feeds_through_delta() {
    let c = PAdicConfig::new(5, 10, 10).unwrap();
    let omega = c.int(7);
    let u0 = c.int(1);
    assert!(iota_w(&c.int(0), &omega, &u0).unwrap().numerator().is_zero());
    let a = 4;
    let g = cyclotomic(c, a, 1).unwrap();
    let dw = delta_at_zero(g.series()).unwrap();
    // (1 - 1/5) * 7 * 3/2 = 42/5
    let got = iota_w(&dw, &omega, &u0).unwrap();
    assert_eq!(got.den_exp(), 1);
    assert!(got.agreement(&common::to_fraction(&common::rat(42, 5), 5, 10)) >= got.precision());
    let x = c.int(13);
    let sum = iota_w(&(dw + x), &omega, &u0).unwrap();
    let parts = iota_w(&dw, &omega, &u0).unwrap() + iota_w(&x, &omega, &u0).unwrap();
    assert!(sum.agreement(&parts) >= sum.precision());
    assert!(matches!(iota_w(&dw, &c.int(5), &u0), Err(Error::NotAUnit)));
}

fn element(c: PAdicInt) -> impl Strategy<Value = IwasawaElement> {
    let (p, n) = (c.prime(), c.precision());
    prop::collection::vec(0..p.pow(n), 1..8).prop_map(move |v| {
        let r = BaseRing::new(p, n);
        let coeffs = v.into_iter().map(|x| PAdicInt::from_residue(p, n, x)).collect();
        IwasawaElement::on_psi_star(TruncatedSeries::polynomial(&r, coeffs), &c).unwrap()
    })
}

fn c7() -> PAdicInt {
    gamma_generator(7, 12, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn evaluation_is_a_ring_homomorphism(f in element(c7()), g in element(c7()), s in -1000i64..1000) {
        let s = PAdicInt::from_i64(7, 12, s);
        let (fs, gs) = (eval_character(&f, &s).unwrap(), eval_character(&g, &s).unwrap());
        prop_assert_eq!(eval_character(&f.add(&g).unwrap(), &s).unwrap(), fs + gs);
        prop_assert_eq!(eval_character(&f.mul(&g).unwrap(), &s).unwrap(), fs * gs);
    }

    #[test]
    fn first_derivative_is_leibniz(f in element(c7()), g in element(c7())) {
        let lhs = d_star(&f.mul(&g).unwrap(), 1).unwrap();
        let rhs = d_star(&f, 1).unwrap() * eval_at_psi_star(&g).unwrap()
            + eval_at_psi_star(&f).unwrap() * d_star(&g, 1).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
