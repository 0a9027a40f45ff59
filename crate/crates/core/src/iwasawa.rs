//! One-variable Iwasawa-algebra calculus on the `psi*` branch.
//!
//! `Z_p[[Z_p^x]]` splits into `p - 1` copies of `Z_p[[T]]`, one per power of
//! the Teichmüller character. On a branch `T = <gamma> - 1`, so the character
//! `psi* <psi*>^s` sends `T` to `<c> exp(ps) - 1`, where `c = psi*(gamma)`
//! and `log <c> = p`. The theta element `gamma c^-1 - 1` becomes
//! `(1 + T) / <c> - 1` and vanishes exactly at `s = 0`.

use crate::coleman::ColemanData;
use crate::error::{Error, Result};
use crate::localfield::{ExtElement, ExtFraction};
use crate::lubin_tate::TorsionTower;
use crate::padic::{int_valuation, primitive_root, PAdicFraction, PAdicInt};
use crate::ring::BaseRing;
use crate::series::TruncatedSeries;
use rand::Rng;

type Series = TruncatedSeries<PAdicInt>;

/// The branch carrying `psi* <psi*>^s`.
pub const PSI_STAR_BRANCH: u64 = 1;

/// `c = omega(g0) exp(p)` for a primitive root `g0` modulo `p` (the smallest
/// one when `g0` is `None`), so that `log_p <c> = p`.
pub fn gamma_generator(p: u64, precision: u32, g0: Option<u64>) -> Result<PAdicInt> {
    let g0 = g0.unwrap_or_else(|| primitive_root(p));
    let w = PAdicInt::from_i64(p, precision, g0 as i64).teichmuller()?;
    let c = w * PAdicInt::from_i64(p, precision, p as i64).exp()?;
    check_generator(&c)?;
    Ok(c)
}

fn check_generator(c: &PAdicInt) -> Result<()> {
    let p = c.prime();
    if !c.is_unit() {
        return Err(Error::NotAUnit);
    }
    let r = c.residue() % p;
    if p > 2 && primitive_root_order(r, p) != p - 1 {
        return Err(Error::InvalidArgument(format!("{r} is not a primitive root mod {p}")));
    }
    let one = PAdicInt::one(p, c.precision());
    let log = (c.one_unit_part()? - one).log1p()?;
    if log != PAdicInt::from_i64(p, c.precision(), p as i64) {
        return Err(Error::InvalidArgument("log <c> differs from p".into()));
    }
    Ok(())
}

fn primitive_root_order(r: u64, p: u64) -> u64 {
    let mut x = r % p;
    let mut k = 1;
    while x != 1 && k < p {
        x = x * r % p;
        k += 1;
    }
    k
}

/// A branch-tagged series in `T = <gamma> - 1`.
#[derive(Clone, Debug)]
pub struct IwasawaElement {
    branch: u64,
    series: Series,
    c: PAdicInt,
}

impl IwasawaElement {
    pub fn new(branch: u64, series: Series, c: PAdicInt) -> Result<Self> {
        let p = c.prime();
        if branch >= p - 1 {
            return Err(Error::InvalidArgument(format!("branch {branch} outside 0..{}", p - 1)));
        }
        if series.vars() != 1 || series.ring().p != p {
            return Err(Error::InvalidArgument("series must be univariate over the same prime".into()));
        }
        check_generator(&c)?;
        Ok(IwasawaElement { branch, series, c })
    }

    /// An element of the `psi*` branch.
    pub fn on_psi_star(series: Series, c: &PAdicInt) -> Result<Self> {
        Self::new(PSI_STAR_BRANCH, series, *c)
    }

    pub fn constant(k: &PAdicInt, c: &PAdicInt) -> Result<Self> {
        let r = BaseRing::new(c.prime(), c.precision());
        Self::on_psi_star(Series::polynomial(&r, vec![*k]), c)
    }

    /// The variable `T` itself.
    pub fn variable(c: &PAdicInt) -> Result<Self> {
        let r = BaseRing::new(c.prime(), c.precision());
        Self::on_psi_star(Series::polynomial(&r, vec![r.int(0), r.int(1)]), c)
    }

    /// A polynomial of degree at most `degree` whose coefficients are
    /// nonzero with probability `density`.
    pub fn random_sparse<R: Rng + ?Sized>(c: &PAdicInt, degree: usize, density: f64, rng: &mut R) -> Result<Self> {
        let (p, n) = (c.prime(), c.precision());
        let r = BaseRing::new(p, n);
        let coeffs = (0..=degree)
            .map(|_| if rng.random_bool(density) { PAdicInt::random(p, n, rng) } else { r.int(0) })
            .collect();
        Self::on_psi_star(Series::polynomial(&r, coeffs), c)
    }

    pub fn branch(&self) -> u64 {
        self.branch
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn generator(&self) -> PAdicInt {
        self.c
    }

    pub fn prime(&self) -> u64 {
        self.c.prime()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.branch != other.branch || self.c != other.c {
            return Err(Error::InvalidArgument("elements on different branches or generators".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(IwasawaElement { series: self.series.add(&other.series), ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(IwasawaElement { series: self.series.sub(&other.series), ..self.clone() })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(IwasawaElement { series: self.series.mul(&other.series), ..self.clone() })
    }

    pub fn pow(&self, e: u64) -> Self {
        IwasawaElement { series: self.series.pow(e), ..self.clone() }
    }

    pub fn scale(&self, k: &PAdicInt) -> Self {
        IwasawaElement { series: self.series.scale(k), ..self.clone() }
    }

    /// Digits lost to truncation when `T` is replaced by an element of `pZ_p`.
    fn tail_precision(&self) -> u32 {
        if self.series.is_exact() {
            u32::MAX
        } else {
            self.series.cap() as u32 + 1
        }
    }
}

/// `theta* = gamma c^-1 - 1`, that is `(1 + T) / <c> - 1` on the branch.
pub fn theta_element(c: &PAdicInt) -> Result<IwasawaElement> {
    check_generator(c)?;
    let r = BaseRing::new(c.prime(), c.precision());
    let inv = c.one_unit_part()?.inverse()?;
    IwasawaElement::on_psi_star(Series::polynomial(&r, vec![inv - r.int(1), inv]), c)
}

fn require_psi_star(f: &IwasawaElement) -> Result<()> {
    if f.branch != PSI_STAR_BRANCH {
        return Err(Error::InvalidArgument(format!("branch {} does not carry psi*", f.branch)));
    }
    Ok(())
}

/// `F(psi* <psi*>^s)`: `T` is replaced by `<c> exp(ps) - 1`.
pub fn eval_character(f: &IwasawaElement, s: &PAdicInt) -> Result<PAdicInt> {
    require_psi_star(f)?;
    let p = f.prime();
    let n = f.c.precision();
    let ps = s.mul_int(p as i64);
    let x = f.c.one_unit_part()? * ps.exp()? - PAdicInt::one(p, n);
    let value = f.series.evaluate(&x);
    Ok(value.reduce_precision(f.tail_precision().min(value.precision())))
}

/// `F(psi*)`.
pub fn eval_at_psi_star(f: &IwasawaElement) -> Result<PAdicInt> {
    eval_character(f, &PAdicInt::zero(f.prime(), f.c.precision()))
}

/// The `m`-th Taylor coefficient in `s` of `F(psi* <psi*>^s)`, expanded
/// symbolically from `<c> exp(ps) - 1 = (<c> - 1) + <c> sum p^j s^j / j!`.
pub fn d_star(f: &IwasawaElement, m: usize) -> Result<PAdicInt> {
    require_psi_star(f)?;
    let p = f.prime();
    if m as u64 >= p {
        return Err(Error::InvalidArgument(format!("order {m} needs {m}! to be a unit mod {p}")));
    }
    let n = f.c.precision();
    let r = BaseRing::new(p, n);
    let u = f.c.one_unit_part()?;
    let mut coeffs = Vec::with_capacity(m + 1);
    let mut term = u;
    for j in 0..=m {
        if j > 0 {
            term = term.mul_int(p as i64).div_unit(&r.int(j as i64))?;
        }
        coeffs.push(if j == 0 { term - r.int(1) } else { term });
    }
    let x = Series::from_coeffs(&r, coeffs, m);
    let top = if f.series.is_exact() { f.series.degree().unwrap_or(0) } else { f.series.cap() };
    let mut acc = Series::zero(&r, m);
    for k in (0..=top).rev() {
        acc = acc.mul(&x).add(&Series::constant(&r, f.series.coeff(k), m)).with_cap(m);
    }
    let value = acc.coeff(m);
    Ok(value.reduce_precision(f.tail_precision().min(value.precision())))
}

/// `Q` with `Q theta* = F - F(psi*)`, by synthetic division at the zero
/// `<c> - 1` of `theta*`.
pub fn divide_by_theta(f: &IwasawaElement) -> Result<IwasawaElement> {
    require_psi_star(f)?;
    let n = f.c.precision();
    let r = BaseRing::new(f.prime(), n);
    let u = f.c.one_unit_part()?;
    let x0 = u - r.int(1);
    let top = if f.series.is_exact() { f.series.degree().unwrap_or(0) } else { f.series.cap() };
    // q_(k-1) = f_k + x0 q_k, then multiply by <c> since theta* = (T - x0)/<c>
    let mut q = vec![r.int(0); top.max(1)];
    let mut carry = r.int(0);
    for k in (1..=top).rev() {
        carry = f.series.coeff(k) + x0 * carry;
        q[k - 1] = carry * u;
    }
    let series = if f.series.is_exact() {
        Series::polynomial(&r, q)
    } else {
        let cap = f.series.cap();
        Series::from_fn(&r, cap - 1, |k| q[k].reduce_precision(n.min((cap - k) as u32)))
    };
    IwasawaElement::new(f.branch, series, f.c)
}

/// Both sides of `D*(m)(theta*^m F)(psi*) = p^m F(psi*)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerthetaCertificate {
    pub m: usize,
    pub lhs: PAdicInt,
    pub rhs: PAdicInt,
    /// Digits to which both sides are known.
    pub precision: u32,
    pub agreement: u32,
}

impl DerthetaCertificate {
    pub fn passed(&self) -> bool {
        self.agreement >= self.precision
    }
}

pub fn verify_dertheta(f: &IwasawaElement, m: usize) -> Result<DerthetaCertificate> {
    let theta = theta_element(&f.c)?;
    let lhs = d_star(&theta.pow(m as u64).mul(f)?, m)?;
    let rhs = eval_at_psi_star(f)?.mul_p_pow(m as u32);
    let precision = lhs.precision().min(rhs.precision());
    Ok(DerthetaCertificate { m, lhs, rhs, precision, agreement: lhs.agreement(&rhs) })
}

/// An element of `Z/p^N [(Z/p^n)^x]`, indexed by the residues prime to `p`
/// in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAlgebraElement {
    level: u32,
    units: Vec<u64>,
    coeffs: Vec<PAdicInt>,
}

impl GroupAlgebraElement {
    pub fn zero(p: u64, level: u32, precision: u32) -> Self {
        let q = p.pow(level);
        let units: Vec<u64> = (1..q).filter(|b| b % p != 0).collect();
        let coeffs = vec![PAdicInt::zero(p, precision); units.len()];
        GroupAlgebraElement { level, units, coeffs }
    }

    pub fn prime(&self) -> u64 {
        self.coeffs[0].prime()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn order(&self) -> usize {
        self.units.len()
    }

    pub fn units(&self) -> &[u64] {
        &self.units
    }

    pub fn coeffs(&self) -> &[PAdicInt] {
        &self.coeffs
    }

    fn modulus(&self) -> u64 {
        self.prime().pow(self.level)
    }

    fn index(&self, b: u64) -> usize {
        self.units.binary_search(&(b % self.modulus())).expect("residue prime to p")
    }

    /// Adds `k [sigma_b]`.
    pub fn add_term(&mut self, b: u64, k: PAdicInt) {
        let i = self.index(b);
        self.coeffs[i] = self.coeffs[i] + k;
    }

    pub fn coeff(&self, b: u64) -> PAdicInt {
        self.coeffs[self.index(b)]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.prime(), self.level, self.coeffs[0].precision().min(other.coeffs[0].precision()));
        for (a, x) in self.units.iter().zip(&self.coeffs) {
            if x.is_zero() {
                continue;
            }
            for (b, y) in other.units.iter().zip(&other.coeffs) {
                out.add_term(a * b, *x * *y);
            }
        }
        out
    }
}

/// Outcome of deciding `theta_n sum_b b^-1 [sigma_b] + (p-1)p^n in p^n I_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaCertificate {
    pub p: u64,
    pub level: u32,
    pub order: usize,
    pub precision: u32,
    /// `None` when the membership holds, otherwise the first coordinate the
    /// elimination could not clear and the valuation left there.
    pub residual: Option<(u64, u32)>,
    /// Whether the shifted constant `-(p-1)p^n + p^n` is (wrongly) accepted.
    pub control_accepted: bool,
}

impl ThetaCertificate {
    pub fn holds(&self) -> bool {
        self.residual.is_none()
    }

    pub fn passed(&self) -> bool {
        self.holds() && !self.control_accepted
    }
}

/// Largest group order accepted by [`theta_congruence`].
pub const MAX_THETA_ORDER: usize = 200;

/// Decides the theta congruence at level `n` with exact linear algebra over
/// `Z/p^N`. Galois is `(Z/p^n)^x` through `psi`, lifts are the integers
/// `1 <= b < p^n`, and `I_n` is generated by `sigma_b - b`.
pub fn theta_congruence(n: u32, c: &PAdicInt) -> Result<ThetaCertificate> {
    let p = c.prime();
    let prec = c.precision();
    if n == 0 {
        return Err(Error::InvalidArgument("level must be positive".into()));
    }
    if prec < 2 * n + 1 {
        return Err(Error::InvalidArgument(format!("precision {prec} cannot separate p^{n} I from p^{n}")));
    }
    check_generator(c)?;
    let q = p.pow(n);
    let mut twisted = GroupAlgebraElement::zero(p, n, prec);
    if twisted.order() > MAX_THETA_ORDER {
        return Err(Error::InvalidArgument(format!("group order {} above {MAX_THETA_ORDER}", twisted.order())));
    }
    let lift = |b: u64| PAdicInt::from_i64(p, prec, b as i64);
    for &b in twisted.units.clone().iter() {
        twisted.add_term(b, lift(b).inverse()?);
    }
    let mut theta = GroupAlgebraElement::zero(p, n, prec);
    theta.add_term(c.residue() % q, c.inverse()?);
    theta.add_term(1, -PAdicInt::one(p, prec));
    let lhs = theta.mul(&twisted);

    let pn = PAdicInt::one(p, prec).mul_p_pow(n);
    let mut basis = HowellBasis::new(p, prec, twisted.order());
    for &h in &twisted.units {
        for &b in &twisted.units {
            let mut g = GroupAlgebraElement::zero(p, n, prec);
            g.add_term(h * b, pn);
            g.add_term(h, -(pn * lift(b)));
            basis.insert(HowellBasis::residues(&g.coeffs));
        }
    }
    let constant = PAdicInt::from_i64(p, prec, (p - 1) as i64) * pn;
    let mut target = lhs.clone();
    target.add_term(1, constant);
    let residual = basis.reduce(HowellBasis::residues(&target.coeffs)).map(|(i, v)| (twisted.units[i], v));
    let mut control = lhs;
    control.add_term(1, constant - pn);
    let control_accepted = basis.reduce(HowellBasis::residues(&control.coeffs)).is_none();
    Ok(ThetaCertificate { p, level: n, order: twisted.order(), precision: prec, residual, control_accepted })
}

/// Triangular generators of a submodule of `(Z/p^N)^L`, closed under
/// multiplication by `p` (a Howell form), so membership is decided by
/// reduction. Entries are residues modulo `p^N`.
struct HowellBasis {
    p: u64,
    prec: u32,
    modulus: u64,
    rows: Vec<Option<Vec<u64>>>,
}

impl HowellBasis {
    fn new(p: u64, prec: u32, len: usize) -> Self {
        HowellBasis { p, prec, modulus: p.pow(prec), rows: vec![None; len] }
    }

    fn residues(v: &[PAdicInt]) -> Vec<u64> {
        v.iter().map(|x| x.residue()).collect()
    }

    fn lead(&self, v: &[u64]) -> Option<(usize, u32)> {
        v.iter().enumerate().find(|(_, x)| **x != 0).map(|(i, x)| (i, int_valuation(*x, self.p)))
    }

    /// `a - f b` entrywise.
    fn axpy(&self, a: &[u64], f: u64, b: &[u64]) -> Vec<u64> {
        let m = self.modulus as u128;
        a.iter().zip(b).map(|(x, y)| ((*x as u128 + m - (f as u128 * *y as u128) % m) % m) as u64).collect()
    }

    fn scaled(&self, v: &[u64], f: u64) -> Vec<u64> {
        let m = self.modulus as u128;
        v.iter().map(|x| (*x as u128 * f as u128 % m) as u64).collect()
    }

    /// Scales `v` so its leading entry is `p^k`.
    fn normalize(&self, v: &[u64], i: usize, k: u32) -> Vec<u64> {
        let w = v[i] / self.p.pow(k);
        let u = PAdicInt::from_residue(self.p, self.prec, w).inverse().expect("unit part").residue();
        self.scaled(v, u)
    }

    /// Stores `v` as the row with pivot `i`, queueing its `p`-saturation.
    fn place(&mut self, v: &[u64], i: usize, k: u32, pending: &mut Vec<Vec<u64>>) {
        let nv = self.normalize(v, i, k);
        pending.push(self.scaled(&nv, self.p.pow(self.prec - k)));
        self.rows[i] = Some(nv);
    }

    fn insert(&mut self, v: Vec<u64>) {
        let mut pending = vec![v];
        while let Some(mut v) = pending.pop() {
            while let Some((i, k)) = self.lead(&v) {
                let Some(row) = self.rows[i].clone() else {
                    self.place(&v, i, k, &mut pending);
                    break;
                };
                let rk = int_valuation(row[i], self.p);
                if k >= rk {
                    v = self.axpy(&v, v[i] / self.p.pow(rk), &row);
                } else {
                    self.place(&v, i, k, &mut pending);
                    let pivot = self.rows[i].clone().expect("just placed");
                    pending.push(self.axpy(&row, row[i] / self.p.pow(k), &pivot));
                    break;
                }
            }
        }
    }

    /// Reduces `v` to zero or returns the first coordinate where that fails.
    fn reduce(&self, mut v: Vec<u64>) -> Option<(usize, u32)> {
        while let Some((i, k)) = self.lead(&v) {
            match &self.rows[i] {
                Some(row) if int_valuation(row[i], self.p) <= k => {
                    v = self.axpy(&v, v[i] / self.p.pow(int_valuation(row[i], self.p)), row);
                }
                _ => return Some((i, k)),
            }
        }
        None
    }
}

/// A norm-coherent sequence of units `u_1 .. u_n` on a torsion tower with
/// the Galois action `sigma_b: w_k -> [b](w_k)` tabulated at every level.
#[derive(Clone, Debug)]
pub struct UnitTowerData {
    tower: TorsionTower,
    units: Vec<ExtElement>,
    /// `galois[k-1]` lists `(b, images of w_1 .. w_k)` for `b` prime to `p`
    /// below `p^k`.
    galois: Vec<Vec<(u64, Vec<ExtElement>)>>,
}

impl UnitTowerData {
    pub fn new(tower: TorsionTower, units: Vec<ExtElement>) -> Result<Self> {
        if units.is_empty() || units.len() > tower.levels() {
            return Err(Error::InvalidArgument(format!(
                "{} units for a tower of {} levels",
                units.len(),
                tower.levels()
            )));
        }
        for (k, u) in units.iter().enumerate() {
            if u.ring() != tower.ring(k + 1) {
                return Err(Error::RingMismatch(format!("u_{} is not in the level-{} ring", k + 1, k + 1)));
            }
            if !u.is_unit() {
                return Err(Error::NotAUnit);
            }
        }
        for k in 1..units.len() {
            let down = units[k].norm_to(tower.ring(k))?;
            if !(&down - &units[k - 1]).is_zero() {
                return Err(Error::NotNormCoherent(k as u32));
            }
        }
        let p = tower.law().prime();
        let mut galois = Vec::with_capacity(units.len());
        for k in 1..=units.len() {
            let q = p.pow(k as u32);
            let mut table = Vec::new();
            for b in (1..q).filter(|b| b % p != 0) {
                table.push((b, tower.galois_images(b as i64, k)?));
            }
            galois.push(table);
        }
        let data = UnitTowerData { tower, units, galois };
        data.spot_check_galois()?;
        Ok(data)
    }

    /// The values `beta_k` of Coleman data, when they are norm-coherent.
    pub fn from_coleman(data: &ColemanData) -> Result<Self> {
        Self::new(data.tower().clone(), data.betas().to_vec())
    }

    /// `sigma_b sigma_b' = sigma_bb'` on the top generator for a few pairs.
    fn spot_check_galois(&self) -> Result<()> {
        let n = self.units.len();
        let table = &self.galois[n - 1];
        let q = self.tower.law().prime().pow(n as u32);
        let w = self.tower.generator(n);
        for (i, j) in [(0, 0), (1, table.len() / 2), (table.len() - 1, 1)] {
            let (a, ia) = &table[i.min(table.len() - 1)];
            let (b, ib) = &table[j.min(table.len() - 1)];
            let ab = a * b % q;
            let iab = &table.iter().find(|(x, _)| *x == ab).expect("group closed").1;
            let lhs = self.tower.apply_galois(&self.tower.apply_galois(w, ib)?, ia)?;
            let rhs = self.tower.apply_galois(w, iab)?;
            if !(&lhs - &rhs).is_zero() {
                return Err(Error::InvalidArgument(format!("sigma_{a} sigma_{b} != sigma_{ab}")));
            }
        }
        Ok(())
    }

    pub fn tower(&self) -> &TorsionTower {
        &self.tower
    }

    pub fn units(&self) -> &[ExtElement] {
        &self.units
    }

    pub fn levels(&self) -> usize {
        self.units.len()
    }

    /// Replaces every `u_k` by `u_k^e`.
    pub fn power(&self, e: u64) -> Self {
        UnitTowerData { units: self.units.iter().map(|u| u.pow(e)).collect(), ..self.clone() }
    }
}

/// Successive values `S_k` of the twisted logarithmic Galois sum and the
/// `p`-adic valuations of their differences.
#[derive(Clone, Debug)]
pub struct IotaStar {
    pub partials: Vec<ExtFraction>,
    /// `v_p(S_(k+1) - S_k)` as `(numerator, denominator)`, `None` when the
    /// difference vanishes to the available precision.
    pub gaps: Vec<Option<(i64, u64)>>,
}

impl IotaStar {
    pub fn value(&self) -> &ExtFraction {
        self.partials.last().expect("at least one level")
    }

    /// Whether the gaps never decrease, reading `None` as infinite.
    pub fn gaps_nondecreasing(&self) -> bool {
        self.gaps.windows(2).all(|w| match (w[0], w[1]) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some((a, da)), Some((b, db))) => a * db as i64 <= b * da as i64,
        })
    }
}

/// `S_k = (1 - u0/p) sum_b b^-1 log(sigma_b u_k)` for `k = 1 .. n`, `b`
/// running over the integers in `[1, p^k)` prime to `p`; the logarithm is
/// that of the principal part.
pub fn iota_star(u: &UnitTowerData, n: usize, unit_root: &PAdicInt) -> Result<IotaStar> {
    if n == 0 || n > u.levels() {
        return Err(Error::InvalidArgument(format!("level {n} outside 1..={}", u.levels())));
    }
    let p = u.tower.law().prime();
    let mut partials: Vec<ExtFraction> = Vec::with_capacity(n);
    for k in 1..=n {
        let ring = u.tower.ring(k);
        let prec = ring.precision();
        let mut acc = ExtFraction::integral(ring.zero());
        for (b, images) in &u.galois[k - 1] {
            let conj = u.tower.apply_galois(&u.units[k - 1], images)?;
            let weight = PAdicInt::from_i64(p, prec, *b as i64).inverse()?;
            acc = &acc + &conj.log_unit()?.scale(&weight);
        }
        let factor = PAdicInt::from_i64(p, prec, p as i64) - unit_root.reduce_precision(prec);
        partials.push(acc.scale(&factor).div_p_pow(1));
    }
    let mut gaps = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        let lower = partials[k - 1].embed(u.tower.ring(k + 1))?;
        gaps.push((&partials[k] - &lower).valuation_p());
    }
    Ok(IotaStar { partials, gaps })
}

/// `iota_w = (1 - u0/p) Omega delta_w`.
pub fn iota_w(delta_w: &PAdicInt, omega: &PAdicInt, unit_root: &PAdicInt) -> Result<PAdicFraction> {
    if !omega.is_unit() {
        return Err(Error::NotAUnit);
    }
    let p = delta_w.prime();
    let factor = PAdicInt::from_i64(p, delta_w.precision(), p as i64) - *unit_root;
    Ok(PAdicFraction::new(factor * *omega * *delta_w, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_normalization() {
        for p in [5u64, 7, 11] {
            let c = gamma_generator(p, 12, None).unwrap();
            assert_eq!(c.residue() % p, primitive_root(p));
        }
        assert!(gamma_generator(7, 10, Some(2)).is_err());
        assert!(check_generator(&PAdicInt::from_i64(5, 10, 2)).is_err());
    }

    #[test]
    fn theta_vanishes_at_psi_star() {
        let c = gamma_generator(5, 15, None).unwrap();
        let t = theta_element(&c).unwrap();
        assert!(eval_at_psi_star(&t).unwrap().is_zero());
        assert_eq!(d_star(&t, 1).unwrap(), PAdicInt::from_i64(5, 15, 5));
        assert_eq!(d_star(&t.pow(2), 2).unwrap(), PAdicInt::from_i64(5, 15, 25));
    }

    #[test]
    fn congruence_small_grid() {
        for (p, n) in [(5u64, 1u32), (5, 2), (7, 1)] {
            let c = gamma_generator(p, 10, None).unwrap();
            let cert = theta_congruence(n, &c).unwrap();
            assert!(cert.passed(), "{cert:?}");
        }
    }
}
