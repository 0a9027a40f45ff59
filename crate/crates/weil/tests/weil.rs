use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use recip_weil::{
    cm_adjointness, find_torsion_field, level_compatibility, miller_pairing, parse_fixtures, torsion_grid,
    write_fixture, CurvePoint, SearchSpec, TorsionFixture, WeilError,
};
use std::sync::OnceLock;

fn five() -> &'static TorsionFixture {
    static FX: OnceLock<TorsionFixture> = OnceLock::new();
    FX.get_or_init(|| find_torsion_field(SearchSpec { need_cm: true, ..SearchSpec::new(5) }).unwrap())
}

fn five_extension() -> &'static TorsionFixture {
    static FX: OnceLock<TorsionFixture> = OnceLock::new();
    FX.get_or_init(|| find_torsion_field(SearchSpec { need_cm: true, min_degree: 2, ..SearchSpec::new(5) }).unwrap())
}

fn nine() -> &'static TorsionFixture {
    static FX: OnceLock<TorsionFixture> = OnceLock::new();
    FX.get_or_init(|| find_torsion_field(SearchSpec::new(9)).unwrap())
}

#[test]
fn found_fields() {
    for fx in [five(), five_extension(), nine()] {
        let f = fx.field();
        eprintln!("n={} l={} m={} #E={}", fx.n, f.characteristic(), f.degree(), fx.order);
        assert_eq!((f.size() - 1) % fx.n, 0);
        assert_eq!(fx.order % (fx.n * fx.n), 0);
    }
    assert!(five_extension().field().degree() >= 2);
}

#[test]
fn alternating_and_antisymmetric() {
    let fx = five();
    let e = &fx.curve;
    let mut rng = SplitMix64::seed_from_u64(3);
    let grid = torsion_grid(e, &fx.p, &fx.q, 5);
    for p in &grid {
        assert!(miller_pairing(e, p, p, 5, &mut rng).unwrap().is_one());
        for q in &grid {
            let a = miller_pairing(e, p, q, 5, &mut rng).unwrap();
            let b = miller_pairing(e, q, p, 5, &mut rng).unwrap();
            assert!((&a * &b).is_one());
            assert!(a.pow(5).is_one());
        }
    }
    assert_eq!(miller_pairing(e, &fx.p, &fx.q, 5, &mut rng).unwrap().order(), Some(5));
}

#[test]
fn bilinear_in_both_slots() {
    let fx = five();
    let e = &fx.curve;
    let mut rng = SplitMix64::seed_from_u64(4);
    let grid = torsion_grid(e, &fx.p, &fx.q, 5);
    for (i, p1) in grid.iter().enumerate() {
        let p2 = &grid[(7 * i + 3) % grid.len()];
        let q = &grid[(11 * i + 5) % grid.len()];
        let lhs = miller_pairing(e, &e.add(p1, p2), q, 5, &mut rng).unwrap();
        let rhs = &miller_pairing(e, p1, q, 5, &mut rng).unwrap() * &miller_pairing(e, p2, q, 5, &mut rng).unwrap();
        assert_eq!(lhs, rhs);
        let lhs = miller_pairing(e, q, &e.add(p1, p2), 5, &mut rng).unwrap();
        let rhs = &miller_pairing(e, q, p1, 5, &mut rng).unwrap() * &miller_pairing(e, q, p2, 5, &mut rng).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn frobenius_equivariance() {
    let fx = five_extension();
    let e = &fx.curve;
    let l = fx.field().characteristic() as u128;
    let mut rng = SplitMix64::seed_from_u64(5);
    let grid = torsion_grid(e, &fx.p, &fx.q, 5);
    let mut moved = 0;
    for p in &grid {
        for q in grid.iter().step_by(3) {
            let v = miller_pairing(e, p, q, 5, &mut rng).unwrap();
            let w = miller_pairing(e, &p.frobenius(), &q.frobenius(), 5, &mut rng).unwrap();
            assert_eq!(v.pow(l), w);
            moved += usize::from(p.frobenius() != *p);
        }
    }
    assert!(moved > 0, "Frobenius acts trivially on the grid");
}

#[test]
fn cm_adjointness_on_five_torsion() {
    let fx = five();
    let e = &fx.curve;
    let mut rng = SplitMix64::seed_from_u64(6);
    let grid = torsion_grid(e, &fx.p, &fx.q, 5);
    for (a, b) in [(1, 0), (3, 0), (2, 1), (1, 2), (3, 4), (4, 3)] {
        let phi = fx.cm(a, b).unwrap();
        assert!(phi.check_consistency(e, &grid));
        let report = cm_adjointness(e, &grid, 5, &phi, &mut rng).unwrap();
        assert!(report.passed(), "a={a} b={b} {report:?}");
        assert_eq!(report.pairs, 625);
    }
    assert_eq!(fx.cm(3, 4).unwrap().norm(), 25);
}

#[test]
fn adjointness_needs_the_dual() {
    // e(phi P, Q) = e(P, phi Q) fails for phi = 2 + iota since phi^ != phi
    let fx = five();
    let e = &fx.curve;
    let mut rng = SplitMix64::seed_from_u64(7);
    let phi = fx.cm(2, 1).unwrap();
    let (p, q) = (&fx.p, &fx.q);
    let same: Vec<bool> = [(p, q), (q, p), (p, &e.add(p, q))]
        .iter()
        .map(|(x, y)| {
            miller_pairing(e, &phi.apply(e, x), y, 5, &mut rng).unwrap()
                == miller_pairing(e, x, &phi.apply(e, y), 5, &mut rng).unwrap()
        })
        .collect();
    assert!(same.iter().any(|s| !s));
}

#[test]
fn level_compatibility_nine() {
    let fx = nine();
    let e = &fx.curve;
    let mut rng = SplitMix64::seed_from_u64(8);
    let upper = torsion_grid(e, &fx.p, &fx.q, 9);
    let lower = torsion_grid(e, &e.mul(&fx.p, 3), &e.mul(&fx.q, 3), 3);
    let good = level_compatibility(e, &lower, &upper, 3, 9, |q| e.mul(q, 3), &mut rng).unwrap();
    assert!(good.passed(), "{good:?}");
    assert_eq!(good.pairs, 9 * 81);
    let bad = level_compatibility(e, &lower, &upper, 3, 9, |q| e.mul(q, 6), &mut rng).unwrap();
    assert!(!bad.passed());
    // points already of order 3 on the upper slot see a trivial pairing
    for p in &lower {
        for q in &lower {
            assert!(miller_pairing(e, p, q, 9, &mut rng).unwrap().is_one());
        }
    }
}

#[test]
fn fixtures_round_trip() {
    let mut text = String::from("# found by search\n");
    write_fixture(&mut text, "torsion5", five());
    write_fixture(&mut text, "torsion9", nine());
    let parsed = parse_fixtures(&text).unwrap();
    assert_eq!(&parsed["torsion5"], five());
    assert_eq!(&parsed["torsion9"], nine());
    assert!(matches!(parse_fixtures("torsion5.n 5"), Err(WeilError::Fixture(_))));
    let broken = text.replace(&format!("torsion5.order = {}", five().order), "torsion5.order = 1");
    assert!(parse_fixtures(&broken).is_err());
}

#[test]
fn pairing_preconditions() {
    let fx = five();
    let e = &fx.curve;
    let mut rng = SplitMix64::seed_from_u64(9);
    let l = fx.field().characteristic();
    assert!(matches!(miller_pairing(e, &fx.p, &fx.q, 3, &mut rng), Err(WeilError::NotTorsion(3))));
    assert!(matches!(miller_pairing(e, &fx.p, &fx.q, 5 * l, &mut rng), Err(WeilError::BadOrder(_))));
    assert!(miller_pairing(e, &CurvePoint::Infinity, &fx.q, 5, &mut rng).unwrap().is_one());
}
