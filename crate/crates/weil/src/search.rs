//! Brute-force search for small fields over which `y^2 = x^3 - x` has full
//! rational `n`-torsion, and the key-value fixture format recording them.

use crate::curve::{prime_factors, CMEndomorphism, Curve, CurvePoint};
use crate::error::{Result, WeilError};
use crate::field::{Field, FiniteFieldElement};
use crate::pairing::miller_pairing;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use std::collections::BTreeMap;
use std::fmt::Write;

/// Largest field size searched.
pub const FIELD_BOUND: u64 = 1 << 20;

/// A field with full rational `n`-torsion on `y^2 = x^3 - x` and a basis
/// `(P, Q)` of `E[n]` whose pairing has exact order `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionFixture {
    pub n: u64,
    pub curve: Curve,
    /// `#E(F_q)`.
    pub order: u64,
    pub sqrt_minus_one: Option<FiniteFieldElement>,
    pub p: CurvePoint,
    pub q: CurvePoint,
}

impl TorsionFixture {
    pub fn field(&self) -> &Field {
        self.curve.field()
    }

    pub fn cm(&self, a: i64, b: i64) -> Result<CMEndomorphism> {
        CMEndomorphism::new(a, b, self.sqrt_minus_one.as_ref().ok_or(WeilError::NoCm)?)
    }
}

/// Search parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub n: u64,
    /// Require `sqrt(-1)` in the field, so that `iota` is rational.
    pub need_cm: bool,
    /// Smallest extension degree allowed (2 forces a nontrivial Frobenius).
    pub min_degree: usize,
    pub bound: u64,
    pub seed: u64,
}

impl SearchSpec {
    pub fn new(n: u64) -> Self {
        SearchSpec { n, need_cm: false, min_degree: 1, bound: FIELD_BOUND, seed: 0 }
    }
}

fn odd_primes_below(bound: u64) -> impl Iterator<Item = u64> {
    (3..=bound).step_by(2).filter(|&l| (3..).step_by(2).take_while(|d| d * d <= l).all(|d| l % d != 0))
}

/// The smallest field (by size) satisfying `spec`.
pub fn find_torsion_field(spec: SearchSpec) -> Result<TorsionFixture> {
    let n = spec.n;
    let primes = prime_factors(n);
    if primes.len() != 1 {
        return Err(WeilError::BadOrder(n));
    }
    let r = primes[0];
    let mut candidates = Vec::new();
    for l in odd_primes_below(spec.bound) {
        if l % r == 0 {
            continue;
        }
        let mut q = l;
        for m in 1.. {
            if q > spec.bound {
                break;
            }
            if m >= spec.min_degree && (q - 1) % n == 0 && (!spec.need_cm || q % 4 == 1) {
                candidates.push((q, l, m));
            }
            q *= l;
        }
    }
    candidates.sort();
    for (_, l, m) in &candidates {
        let field = Field::of_degree(*l, *m)?;
        let curve = Curve::cm(&field)?;
        let order = curve.order();
        if order % (n * n) != 0 {
            continue;
        }
        if let Some((p, q)) = find_basis(&curve, order, n, r, spec.seed)? {
            let sqrt_minus_one = CMEndomorphism::sqrt_minus_one(&field).ok();
            return Ok(TorsionFixture { n, curve, order, sqrt_minus_one, p, q });
        }
    }
    let degree = odd_primes_below(spec.bound)
        .find(|l| l % r != 0)
        .and_then(|l| (1..64).find(|&m| (l as u128).pow(m as u32) % n as u128 == 1))
        .unwrap_or(0) as usize;
    Err(WeilError::TorsionNotRational { n, bound: spec.bound, degree })
}

/// Two points of order `n = r^k` with pairing of exact order `n`.
fn find_basis(curve: &Curve, order: u64, n: u64, r: u64, seed: u64) -> Result<Option<(CurvePoint, CurvePoint)>> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut cofactor = order;
    while cofactor.is_multiple_of(r) {
        cofactor /= r;
    }
    let sylow = order / cofactor;
    let mut points: Vec<CurvePoint> = Vec::new();
    for _ in 0..200 {
        let x = curve.mul(&curve.random_point(&mut rng), cofactor as i64);
        let o = curve.order_dividing(&x, sylow);
        if o < n {
            continue;
        }
        let x = curve.mul(&x, (o / n) as i64);
        for y in &points {
            let e = miller_pairing(curve, y, &x, n, &mut rng)?;
            if e.order() == Some(n) {
                return Ok(Some((y.clone(), x)));
            }
        }
        points.push(x);
        if points.len() > 12 {
            return Ok(None);
        }
    }
    Ok(None)
}

fn coords(x: &FiniteFieldElement) -> String {
    x.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn point_text(p: &CurvePoint) -> String {
    match p {
        CurvePoint::Infinity => "inf".into(),
        CurvePoint::Affine(x, y) => format!("{};{}", coords(x), coords(y)),
    }
}

/// Appends `name.key = value` lines describing `fx`.
pub fn write_fixture(out: &mut String, name: &str, fx: &TorsionFixture) {
    let f = fx.field();
    let modulus = f.modulus().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    let i = fx.sqrt_minus_one.as_ref().map(coords).unwrap_or_else(|| "none".into());
    for (k, v) in [
        ("n", fx.n.to_string()),
        ("l", f.characteristic().to_string()),
        ("modulus", modulus),
        ("order", fx.order.to_string()),
        ("i", i),
        ("p", point_text(&fx.p)),
        ("q", point_text(&fx.q)),
    ] {
        writeln!(out, "{name}.{k} = {v}").expect("write to string");
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',').map(|t| t.trim().parse().map_err(|_| WeilError::Fixture(format!("bad number in `{s}`")))).collect()
}

fn parse_point(curve: &Curve, s: &str) -> Result<CurvePoint> {
    if s.trim() == "inf" {
        return Ok(CurvePoint::Infinity);
    }
    let (x, y) = s.split_once(';').ok_or_else(|| WeilError::Fixture(format!("bad point `{s}`")))?;
    let f = curve.field();
    curve.point(f.from_coeffs(&parse_list(x)?)?, f.from_coeffs(&parse_list(y)?)?)
}

/// Parses every fixture in a key-value text, validating fields, points and
/// torsion orders. Blank lines and `#` comments are ignored.
pub fn parse_fixtures(text: &str) -> Result<BTreeMap<String, TorsionFixture>> {
    let mut raw: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (key, value) = line.split_once('=').ok_or_else(|| WeilError::Fixture(format!("no `=` in `{line}`")))?;
        let (name, field) =
            key.trim().rsplit_once('.').ok_or_else(|| WeilError::Fixture(format!("key `{key}` lacks a name")))?;
        raw.entry(name.to_string()).or_default().insert(field.to_string(), value.trim().to_string());
    }
    let mut out = BTreeMap::new();
    for (name, kv) in raw {
        let get = |k: &str| kv.get(k).ok_or_else(|| WeilError::Fixture(format!("{name}.{k} missing")));
        let num = |k: &str| -> Result<u64> {
            get(k)?.parse().map_err(|_| WeilError::Fixture(format!("{name}.{k} is not a number")))
        };
        let field = Field::new(num("l")?, parse_list(get("modulus")?)?)?;
        let curve = Curve::cm(&field)?;
        let n = num("n")?;
        let i = match get("i")?.as_str() {
            "none" => None,
            s => Some(field.from_coeffs(&parse_list(s)?)?),
        };
        let fx = TorsionFixture {
            n,
            order: num("order")?,
            sqrt_minus_one: i,
            p: parse_point(&curve, get("p")?)?,
            q: parse_point(&curve, get("q")?)?,
            curve,
        };
        if fx.order != fx.curve.order() {
            return Err(WeilError::Fixture(format!("{name}.order disagrees with the point count")));
        }
        if !fx.curve.mul(&fx.p, n as i64).is_infinity() || !fx.curve.mul(&fx.q, n as i64).is_infinity() {
            return Err(WeilError::NotTorsion(n));
        }
        out.insert(name, fx);
    }
    Ok(out)
}
