//! The Weil pairing by Miller's algorithm, and grid checks of its
//! normalization identities.

use crate::curve::{CMEndomorphism, Curve, CurvePoint};
use crate::error::{Result, WeilError};
use crate::field::FiniteFieldElement;
use rand::Rng;

type Fq = FiniteFieldElement;

/// Retries of the auxiliary point before a pairing is declared degenerate.
pub const RETRY_BUDGET: u32 = 64;

/// `l_(A,B)(R) / v_(A+B)(R)` at every `R`; `None` when some value vanishes.
fn step(curve: &Curve, a: &CurvePoint, b: &CurvePoint, at: &[CurvePoint], acc: &mut [Fq]) -> Option<CurvePoint> {
    let sum = curve.add(a, b);
    let (CurvePoint::Affine(xa, ya), CurvePoint::Affine(..)) = (a, b) else {
        return Some(sum);
    };
    for (r, f) in at.iter().zip(acc.iter_mut()) {
        let CurvePoint::Affine(xr, yr) = r else { return None };
        let (num, den) = match (curve.slope(a, b), &sum) {
            (None, _) => (xr - xa, curve.field().one()),
            (Some(m), CurvePoint::Affine(xs, _)) => (&(yr - ya) - &(&m * &(xr - xa)), xr - xs),
            (Some(_), CurvePoint::Infinity) => unreachable!("a slope means a finite sum"),
        };
        if num.is_zero() || den.is_zero() {
            return None;
        }
        *f = &(&*f * &num) * &den.inverse().ok()?;
    }
    Some(sum)
}

/// `f_(n,P)` with divisor `n(P) - n(O)`, evaluated at each point of `at`.
pub fn miller(curve: &Curve, p: &CurvePoint, n: u64, at: &[CurvePoint]) -> Option<Vec<Fq>> {
    let mut acc = vec![curve.field().one(); at.len()];
    let mut t = p.clone();
    for bit in (0..63 - n.leading_zeros()).rev() {
        for f in acc.iter_mut() {
            *f = &*f * &*f;
        }
        t = step(curve, &t.clone(), &t, at, &mut acc)?;
        if (n >> bit) & 1 == 1 {
            t = step(curve, &t.clone(), p, at, &mut acc)?;
        }
    }
    Some(acc)
}

/// `e_n(P, Q) = (f_P(Q+S) / f_P(S)) / (f_Q(P-S) / f_Q(-S))` with a random
/// auxiliary `S`, retried while the divisors meet.
pub fn miller_pairing<R: Rng + ?Sized>(
    curve: &Curve,
    p: &CurvePoint,
    q: &CurvePoint,
    n: u64,
    rng: &mut R,
) -> Result<Fq> {
    if n.is_multiple_of(curve.field().characteristic()) {
        return Err(WeilError::BadOrder(n));
    }
    if !curve.contains(p) || !curve.contains(q) {
        return Err(WeilError::NotOnCurve);
    }
    if !curve.mul(p, n as i64).is_infinity() || !curve.mul(q, n as i64).is_infinity() {
        return Err(WeilError::NotTorsion(n));
    }
    if p.is_infinity() || q.is_infinity() || n == 1 {
        return Ok(curve.field().one());
    }
    for _ in 0..RETRY_BUDGET {
        let s = curve.random_point(rng);
        let pts_p = [curve.add(q, &s), s.clone()];
        let pts_q = [curve.sub(p, &s), curve.neg(&s)];
        if pts_p.iter().chain(&pts_q).any(|x| x.is_infinity()) {
            continue;
        }
        let (Some(fp), Some(fq)) = (miller(curve, p, n, &pts_p), miller(curve, q, n, &pts_q)) else {
            continue;
        };
        let num = &fp[0] * &fq[1];
        let den = &fp[1] * &fq[0];
        if den.is_zero() || num.is_zero() {
            continue;
        }
        return Ok(&num * &den.inverse()?);
    }
    Err(WeilError::Degenerate(RETRY_BUDGET))
}

/// Number of grid pairs checked and how many failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GridReport {
    pub pairs: usize,
    pub failures: usize,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.pairs > 0 && self.failures == 0
    }

    fn record(&mut self, ok: bool) {
        self.pairs += 1;
        if !ok {
            self.failures += 1;
        }
    }
}

/// All `aP + bQ` for `0 <= a, b < n`.
pub fn torsion_grid(curve: &Curve, p: &CurvePoint, q: &CurvePoint, n: u64) -> Vec<CurvePoint> {
    let mut out = Vec::with_capacity((n * n) as usize);
    let mut row = CurvePoint::Infinity;
    for _ in 0..n {
        let mut x = row.clone();
        for _ in 0..n {
            out.push(x.clone());
            x = curve.add(&x, q);
        }
        row = curve.add(&row, p);
    }
    out
}

/// `e(phi P, Q) = e(P, phi^ Q)` over all pairs of `points`.
pub fn cm_adjointness<R: Rng + ?Sized>(
    curve: &Curve,
    points: &[CurvePoint],
    n: u64,
    phi: &CMEndomorphism,
    rng: &mut R,
) -> Result<GridReport> {
    let dual = phi.dual();
    let mut report = GridReport::default();
    for p in points {
        let fp = phi.apply(curve, p);
        for q in points {
            let lhs = miller_pairing(curve, &fp, q, n, rng)?;
            let rhs = miller_pairing(curve, p, &dual.apply(curve, q), n, rng)?;
            report.record(lhs == rhs);
        }
    }
    Ok(report)
}

/// `e_(p^(k+1))(P, Q) = e_(p^k)(P, pi* Q)` for `P` in `lower`, `Q` in
/// `upper`; `pi_star` maps `p^(k+1)`-torsion into `p^k`-torsion.
pub fn level_compatibility<R: Rng + ?Sized>(
    curve: &Curve,
    lower: &[CurvePoint],
    upper: &[CurvePoint],
    n_lower: u64,
    n_upper: u64,
    pi_star: impl Fn(&CurvePoint) -> CurvePoint,
    rng: &mut R,
) -> Result<GridReport> {
    let mut report = GridReport::default();
    for p in lower {
        for q in upper {
            let lhs = miller_pairing(curve, p, q, n_upper, rng)?;
            let image = pi_star(q);
            let rhs = match miller_pairing(curve, p, &image, n_lower, rng) {
                Ok(v) => v,
                Err(WeilError::NotTorsion(_)) => {
                    report.record(false);
                    continue;
                }
                Err(e) => return Err(e),
            };
            report.record(lhs == rhs);
        }
    }
    Ok(report)
}
