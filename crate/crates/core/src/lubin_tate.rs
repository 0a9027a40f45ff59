//! Height-one Lubin-Tate formal groups over `Z_p`.
//!
//! The group law, endomorphisms, logarithm and same-uniformizer
//! isomorphisms are all solved degree by degree from a commutation
//! relation with the Frobenius series `f`. Each step divides by
//! `pi - pi^k`, so the recursions run at the working precision
//! `N + slack` and results are truncated back to `N`.
//!
//! Input series, uniformizers and periods are taken as their integer
//! representatives: the objects built are the ones attached to those
//! integers. Endomorphisms `[a]` for a `p`-adic `a` known to `N` digits
//! are reported with the precision that `a` actually determines
//! (`N - floor(log_p k)` at degree `k`).

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::localfield::{
    apply_generator_images, eisenstein_from_torsion, evaluate_series, EisensteinTower, ExtElement, ExtFraction,
    LocalRing,
};
use crate::padic::{floor_log, max_precision, PAdicConfig, PAdicFraction, PAdicInt};
use crate::ring::BaseRing;
use crate::series::TruncatedSeries;

type Series = TruncatedSeries<PAdicInt>;

/// Frobenius series with known closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `f = (1+Z)^p - 1`, `pi = p`: the multiplicative group.
    Multiplicative,
    /// `f = pi Z + Z^p`.
    Special,
}

#[derive(Clone, Debug)]
pub struct FormalGroupLaw {
    config: PAdicConfig,
    pi: PAdicInt,
    f: Series,
    /// The law at `N` and at `N + L` digits (the latter for comparisons
    /// against `p^L lambda`), solved on first use.
    laws: OnceLock<(Series, Series)>,
    log: Vec<PAdicFraction>,
    closed_form: Option<ClosedForm>,
    work: Work,
}

/// Working-precision data reused by later recursions.
#[derive(Clone, Debug)]
struct Work {
    m: u32,
    pi: PAdicInt,
    f: Vec<PAdicInt>,
    /// `f_pows[a][s]` = coefficient of `Z^s` in `f^a`.
    f_pows: Vec<Vec<PAdicInt>>,
    /// `p^shift * lambda`, integral.
    scaled_log: Vec<PAdicInt>,
    shift: u32,
}

fn lift(x: &PAdicInt, m: u32) -> PAdicInt {
    x.lift_precision(m)
}

/// Powers `f^a` for `a <= cap`, truncated at degree `cap`.
fn series_powers(f: &[PAdicInt], cap: usize, m: u32, p: u64) -> Vec<Vec<PAdicInt>> {
    let zero = PAdicInt::zero(p, m);
    let nz: Vec<(usize, PAdicInt)> =
        f.iter().enumerate().filter(|(i, c)| *i <= cap && !c.is_zero()).map(|(i, c)| (i, *c)).collect();
    let mut out = Vec::with_capacity(cap + 1);
    let mut cur = vec![zero; cap + 1];
    cur[0] = PAdicInt::one(p, m);
    out.push(cur.clone());
    for _ in 1..=cap {
        let mut next = vec![zero; cap + 1];
        for (s, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(i, fi) in &nz {
                if s + i <= cap {
                    next[s + i] = next[s + i] + *c * fi;
                }
            }
        }
        out.push(next.clone());
        cur = next;
    }
    out
}

/// `e / (pi - pi^k)`, with the division by `p` checked to be exact and the
/// quotient carried back at full working precision.
fn div_pi_gap(e: PAdicInt, pi: PAdicInt, k: usize, m: u32) -> Result<PAdicInt> {
    let q = e.div_p_pow_exact(1)?.lift_precision(m);
    let u = pi.div_p_pow_exact(1)?.lift_precision(m);
    let gap = PAdicInt::one(pi.prime(), m) - pi.pow(k as u64 - 1);
    Ok(q * (u * gap).inverse()?)
}

impl FormalGroupLaw {
    /// Builds the law attached to `f`, where `pi = f'(0)`.
    pub fn new(config: PAdicConfig, f: Series) -> Result<Self> {
        config.validate()?;
        let p = config.prime;
        let n = config.precision;
        let d = config.degree_cap;
        let m = config.working_precision();
        if f.vars() != 1 {
            return Err(Error::NotLubinTate("f must be univariate".into()));
        }
        if d < 2 {
            return Err(Error::InvalidArgument("degree cap must be at least 2".into()));
        }
        let shift = floor_log(d as u64, p);
        if m < n + 2 * shift + 1 {
            return Err(Error::InvalidArgument(format!(
                "slack {} is below the log denominator budget {}",
                config.slack,
                2 * shift + 1
            )));
        }
        let top = if f.is_exact() { f.degree().unwrap_or(0) } else { f.cap() };
        if !f.is_exact() && f.cap() < d {
            return Err(Error::NotLubinTate(format!("f is known only to degree {}", f.cap())));
        }
        if f.coeffs().iter().any(|c| c.prime() != p) {
            return Err(Error::NotLubinTate("coefficients over a different prime".into()));
        }
        let coeffs: Vec<PAdicInt> = (0..=top).map(|i| f.coeff(i).reduce_precision(n)).collect();
        if !coeffs[0].is_zero() {
            return Err(Error::NotLubinTate("f(0) must vanish".into()));
        }
        let pi = *coeffs.get(1).ok_or_else(|| Error::NotLubinTate("f has no linear term".into()))?;
        if pi.valuation() != Some(1) {
            return Err(Error::NotLubinTate("f'(0) must have valuation 1".into()));
        }
        if top < p as usize {
            return Err(Error::NotLubinTate(format!("f must reach degree {p}")));
        }
        for (i, c) in coeffs.iter().enumerate().skip(2) {
            let r = c.residue() % p;
            let want = u64::from(i == p as usize);
            if r != want {
                return Err(Error::NotLubinTate(format!("f is not Z^p mod p at degree {i}")));
            }
        }
        let f_work: Vec<PAdicInt> = coeffs.iter().map(|c| lift(c, m)).collect();
        let pi_w = f_work[1];
        let f_pows = series_powers(&f_work, d, m, p);
        let mut work = Work { m, pi: pi_w, f: f_work, f_pows, scaled_log: Vec::new(), shift };
        work.scaled_log = Self::solve_log(&work, d)?;
        let log = (0..=d).map(|k| PAdicFraction::new(work.scaled_log[k].reduce_precision(n + shift), shift)).collect();
        let f = f.reduce_precision(n);
        Ok(FormalGroupLaw { config, pi, f, laws: OnceLock::new(), log, closed_form: None, work })
    }

    /// `group_law(f, pi)`: as [`FormalGroupLaw::new`], checking `f'(0) = pi`.
    pub fn with_uniformizer(config: PAdicConfig, f: Series, pi: PAdicInt) -> Result<Self> {
        if f.vars() != 1 || f.cap() < 1 || !f.coeff(1).congruent(&pi) {
            return Err(Error::NotLubinTate("f is not pi Z modulo degree 2".into()));
        }
        Self::new(config, f)
    }

    /// `f = (1+Z)^p - 1`, `pi = p`.
    pub fn multiplicative(config: PAdicConfig) -> Result<Self> {
        let p = config.prime;
        let ring = BaseRing::new(p, config.precision);
        let mut binom = vec![1i64];
        for k in 1..=p as i64 {
            let prev = *binom.last().unwrap();
            binom.push(prev * (p as i64 - k + 1) / k);
        }
        binom[0] = 0;
        let f = Series::polynomial(&ring, binom.iter().map(|&c| ring.int(c)).collect());
        let mut g = Self::new(config, f)?;
        g.closed_form = Some(ClosedForm::Multiplicative);
        Ok(g)
    }

    /// `f = pi Z + Z^p`.
    pub fn special(config: PAdicConfig, pi: PAdicInt) -> Result<Self> {
        let p = config.prime;
        let ring = BaseRing::new(p, config.precision);
        let mut c = vec![ring.int(0); p as usize + 1];
        c[1] = pi.reduce_precision(config.precision);
        c[p as usize] = ring.int(1);
        let mut g = Self::new(config, Series::polynomial(&ring, c))?;
        g.closed_form = Some(ClosedForm::Special);
        Ok(g)
    }

    fn solve_law(work: &Work, d: usize) -> Result<Vec<Vec<PAdicInt>>> {
        let p = work.pi.prime();
        let m = work.m;
        let zero = PAdicInt::zero(p, m);
        let imax = (work.f.len() - 1).min(d);
        // comp[k][j] = coefficient of X^(k-j) Y^j
        let mut comp: Vec<Vec<PAdicInt>> = vec![vec![], vec![PAdicInt::one(p, m), PAdicInt::one(p, m)]];
        // pows[i][k] = degree-k part of F^i, for i >= 2
        let mut pows: Vec<Vec<Vec<PAdicInt>>> = vec![Vec::new(); imax + 1];
        for row in pows.iter_mut().skip(2) {
            *row = vec![Vec::new(); d + 1];
        }
        let hom = |a: &[PAdicInt], b: &[PAdicInt], out: &mut [PAdicInt]| {
            for (x, ax) in a.iter().enumerate() {
                if ax.is_zero() {
                    continue;
                }
                for (y, by) in b.iter().enumerate() {
                    if !by.is_zero() {
                        out[x + y] = out[x + y] + *ax * *by;
                    }
                }
            }
        };
        for k in 2..=d {
            let mut a_part = vec![zero; k + 1];
            for i in 2..=imax.min(k) {
                let mut h = vec![zero; k + 1];
                for j in 1..=(k + 1 - i) {
                    let prev: &[PAdicInt] = if i == 2 { &comp[k - j] } else { &pows[i - 1][k - j] };
                    if !prev.is_empty() {
                        hom(&comp[j], prev, &mut h);
                    }
                }
                for (t, x) in a_part.iter_mut().zip(&h) {
                    *t = *t + work.f[i] * *x;
                }
                pows[i][k] = h;
            }
            // degree-k part of F_{<k}(f(X), f(Y))
            let mut b_part = vec![zero; k + 1];
            for (s_deg, slot) in b_part.iter_mut().enumerate() {
                let (s, t) = (k - s_deg, s_deg);
                let mut acc = zero;
                for (j, cj) in comp.iter().enumerate().skip(1) {
                    for (bexp, c) in cj.iter().enumerate() {
                        let aexp = j - bexp;
                        if c.is_zero() || aexp > s || bexp > t {
                            continue;
                        }
                        let x = work.f_pows[aexp][s] * work.f_pows[bexp][t];
                        if !x.is_zero() {
                            acc = acc + *c * x;
                        }
                    }
                }
                *slot = acc;
            }
            let mut fk = Vec::with_capacity(k + 1);
            for (b, a) in b_part.iter().zip(&a_part) {
                fk.push(div_pi_gap(*b - *a, work.pi, k, m)?);
            }
            comp.push(fk);
        }
        Ok(comp)
    }

    fn solve_log(work: &Work, d: usize) -> Result<Vec<PAdicInt>> {
        let p = work.pi.prime();
        let m = work.m;
        let mut lam = vec![PAdicInt::zero(p, m), PAdicInt::one(p, m).mul_p_pow(work.shift).reduce_precision(m)];
        for k in 2..=d {
            let mut acc = PAdicInt::zero(p, m);
            for (j, l) in lam.iter().enumerate().skip(1) {
                acc = acc + *l * work.f_pows[j][k];
            }
            lam.push(div_pi_gap(acc, work.pi, k, m)?);
        }
        Ok(lam)
    }

    /// Coefficients of the endomorphism commuting with `f` with linear term
    /// `a` (at working precision), to degree `cap`.
    fn endomorphism(&self, a: PAdicInt, cap: usize) -> Result<Vec<PAdicInt>> {
        let w = &self.work;
        let p = self.prime();
        let m = w.m;
        let zero = PAdicInt::zero(p, m);
        let local;
        let f_pows = if cap <= self.config.degree_cap {
            &w.f_pows
        } else {
            local = series_powers(&w.f, cap, m, p);
            &local
        };
        let imax = (w.f.len() - 1).min(cap);
        let mut coeffs = vec![zero, a];
        let mut pows: Vec<Vec<PAdicInt>> = vec![Vec::new(); imax + 1];
        for row in pows.iter_mut().skip(2) {
            *row = vec![zero; cap + 1];
        }
        for k in 2..=cap {
            let mut a_part = zero;
            for i in 2..=imax.min(k) {
                let mut h = zero;
                for j in 1..=(k + 1 - i) {
                    let prev = if i == 2 { coeffs[k - j] } else { pows[i - 1][k - j] };
                    h = h + coeffs[j] * prev;
                }
                pows[i][k] = h;
                a_part = a_part + w.f[i] * h;
            }
            let mut b_part = zero;
            for (j, c) in coeffs.iter().enumerate().skip(1) {
                b_part = b_part + *c * f_pows[j][k];
            }
            coeffs.push(div_pi_gap(b_part - a_part, w.pi, k, m)?);
        }
        Ok(coeffs)
    }

    /// `[a]` for `a` known to `N` digits; coefficient `k` carries
    /// `N - floor(log_p k)` digits, the precision `a` determines.
    pub fn mult_by(&self, a: &PAdicInt) -> Result<Series> {
        let n = self.precision();
        let a = a.reduce_precision(n);
        if a.congruent(&self.pi) && a.precision() == n {
            return Ok(self.f.with_cap(self.config.degree_cap));
        }
        let p = self.prime();
        let c = self.endomorphism(lift(&a, self.work.m), self.config.degree_cap)?;
        let ring = BaseRing::new(p, n);
        Ok(Series::from_fn(&ring, self.config.degree_cap, |k| {
            let loss = if k == 0 { 0 } else { floor_log(k as u64, p) };
            c[k].reduce_precision(n.saturating_sub(loss))
        }))
    }

    /// `[b]` for an integer `b`, to degree `cap`, at full precision `N`.
    pub fn mult_by_int(&self, b: i64, cap: usize) -> Result<Series> {
        let p = self.prime();
        let n = self.precision();
        let a = PAdicInt::from_i64(p, self.work.m, b);
        let c = self.endomorphism(a, cap)?;
        let ring = BaseRing::new(p, n);
        Ok(Series::from_fn(&ring, cap, |k| c[k].reduce_precision(n)))
    }

    pub fn config(&self) -> &PAdicConfig {
        &self.config
    }

    pub fn prime(&self) -> u64 {
        self.config.prime
    }

    pub fn precision(&self) -> u32 {
        self.config.precision
    }

    pub fn degree_cap(&self) -> usize {
        self.config.degree_cap
    }

    pub fn base_ring(&self) -> BaseRing {
        BaseRing::new(self.prime(), self.precision())
    }

    pub fn uniformizer(&self) -> PAdicInt {
        self.pi
    }

    pub fn frobenius_series(&self) -> &Series {
        &self.f
    }

    /// The group law `F(X, Y)`, known to total degree `D`.
    pub fn law(&self) -> &Series {
        &self.laws().0
    }

    fn laws(&self) -> &(Series, Series) {
        self.laws.get_or_init(|| {
            let (p, n, d) = (self.prime(), self.precision(), self.degree_cap());
            // the slack check in `new` guarantees every division is exact
            let comps = Self::solve_law(&self.work, d).expect("group law recursion lost exactness");
            (law_series(&comps, p, d, n), law_series(&comps, p, d, n + self.work.shift))
        })
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        self.closed_form
    }

    /// `X + Y + XY` for the multiplicative group, otherwise the truncated law.
    pub fn exact_law(&self) -> Series {
        match self.closed_form {
            Some(ClosedForm::Multiplicative) => {
                let r = self.base_ring();
                Series::polynomial2(&r, &[(1, 0, r.int(1)), (0, 1, r.int(1)), (1, 1, r.int(1))])
            }
            _ => self.law().clone(),
        }
    }

    /// Logarithm coefficients `lambda_k` as fractions, `k = 0..=D`.
    pub fn logarithm(&self) -> &[PAdicFraction] {
        &self.log
    }

    /// `(p^L lambda, L)` with `L = floor(log_p D)`; the series is integral
    /// and known to `N + L` digits.
    pub fn scaled_logarithm(&self) -> (Series, u32) {
        let s = self.work.shift;
        let r = BaseRing::new(self.prime(), self.precision() + s);
        let n = self.precision() + s;
        (Series::from_fn(&r, self.config.degree_cap, |k| self.work.scaled_log[k].reduce_precision(n)), s)
    }

    /// `lambda'(Z)`, which is integral.
    pub fn log_derivative(&self) -> Result<Series> {
        let d = self.config.degree_cap;
        let r = self.base_ring();
        let c = (0..d)
            .map(|k| {
                self.log[k + 1]
                    .mul_int(k as i64 + 1)
                    .to_integral()
                    .map(|x| x.reduce_precision(self.precision()))
                    .ok_or(Error::NotIntegral { degree: k })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Series::from_coeffs(&r, c, d - 1))
    }

    /// Formal exponential `exp_F = lambda^(-1)` as fractions: coefficient
    /// `k` has denominator dividing `p^(k-1)`. Computed by reverting the
    /// integral series `lambda(pZ)/p`, with the logarithm recomputed at the
    /// precision the denominators need (when the prime allows it).
    pub fn exponential(&self) -> Result<Vec<PAdicFraction>> {
        let d = self.config.degree_cap;
        let p = self.prime();
        let n = self.precision();
        let shift = self.work.shift;
        let m = (n + d as u32 + shift + 1).min(max_precision(p)).max(self.work.m);
        let scaled = if m == self.work.m {
            self.work.scaled_log.clone()
        } else {
            let f: Vec<PAdicInt> = self.work.f.iter().map(|c| lift(c, m)).collect();
            let work = Work {
                m,
                pi: lift(&self.work.pi, m),
                f_pows: series_powers(&f, d, m, p),
                f,
                scaled_log: Vec::new(),
                shift,
            };
            Self::solve_log(&work, d)?
        };
        let r = BaseRing::new(p, m);
        let mut mu = vec![PAdicInt::zero(p, m)];
        for (k, l) in scaled.iter().enumerate().skip(1) {
            // lambda_k p^(k-1) = Lambda_k p^(k-1-L)
            let e = k as i64 - 1 - shift as i64;
            mu.push(if e >= 0 {
                l.mul_p_pow(e as u32).reduce_precision(m)
            } else {
                l.div_p_pow_exact((-e) as u32).map_err(|_| Error::NotIntegral { degree: k })?.lift_precision(m)
            });
        }
        let inv = Series::from_coeffs(&r, mu, d).revert()?;
        Ok((0..=d)
            .map(|k| {
                if k == 0 {
                    return PAdicFraction::integral(PAdicInt::zero(p, n));
                }
                let abs = n.min((m - shift).saturating_sub(k as u32));
                PAdicFraction::new(inv.coeff(k).reduce_precision(abs + k as u32 - 1), k as u32 - 1)
            })
            .collect())
    }

    /// `lambda(x)` for `x` in the maximal ideal of a tower ring, with the
    /// truncation tail folded into the reported precision. At most
    /// `precision(x) - L` digits survive the denominators.
    pub fn log_at(&self, x: &ExtElement) -> Result<ExtFraction> {
        let (lam, shift) = self.scaled_logarithm();
        let v = match x.valuation() {
            None => return Ok(ExtFraction::integral(x.ring().zero())),
            Some(0) => return Err(Error::NotInMaximalIdeal),
            Some(v) => v,
        };
        let e = x.ring().ramification_index();
        let sum = evaluate_series(&lam.with_cap(lam.cap()), x)?;
        // terms j > D have valuation >= j v / e - floor(log_p j); between
        // powers of p that bound grows, so only D+1 and the powers matter
        let p = self.prime();
        let d = self.config.degree_cap as u64;
        let bound = |j: u64| (j * v / e) as i64 - floor_log(j, p) as i64;
        let mut tail = bound(d + 1);
        let mut j = p.pow(floor_log(d + 1, p) + 1);
        while bound(j) < tail + p as i64 {
            tail = tail.min(bound(j));
            j *= p;
        }
        let keep = (tail + shift as i64).clamp(0, u32::MAX as i64) as u32;
        Ok(ExtFraction::new(sum.reduce_precision(keep), shift))
    }

    /// Minimum coefficient agreement of `F(X,Y)` and `F(Y,X)`.
    pub fn check_commutativity(&self) -> u32 {
        let law = self.law();
        let swapped = Series::from_fn2(&self.base_ring(), law.cap(), |i, j| law.coeff2(j, i));
        law.agreement(&swapped)
    }

    /// Agreement of `F(X, 0)` with `X` and `F(0, Y)` with `Y`.
    pub fn check_unit_law(&self) -> u32 {
        let r = self.base_ring();
        let d = self.config.degree_cap;
        let law = self.law();
        let x = Series::from_fn(&r, d, |k| law.coeff2(k, 0));
        let y = Series::from_fn(&r, d, |k| law.coeff2(0, k));
        let z = Series::var(&r, 1);
        x.agreement(&z).min(y.agreement(&z))
    }

    /// Agreement of `F(F(X,Y),Z)` and `F(X,F(Y,Z))` on every trivariate
    /// coefficient of total degree at most `D`.
    pub fn check_associativity(&self) -> u32 {
        associativity_agreement(self.law())
    }

    /// Agreement of `f(F(X,Y))` with `F(f(X), f(Y))`.
    pub fn check_commutes_with_f(&self) -> Result<u32> {
        let lhs = self.f.compose(self.law())?;
        let rhs = self.law().substitute_separate(&self.f, &self.f)?;
        Ok(lhs.agreement(&rhs))
    }

    /// Agreement (in digits of `lambda`) of `lambda(f(Z))` with `pi lambda(Z)`.
    pub fn check_log_functional(&self) -> Result<i64> {
        let (lam, shift) = self.scaled_logarithm();
        let r = *lam.ring();
        let f = self.f.map(&r, |c| lift(c, r.precision));
        let lhs = lam.compose(&f)?;
        let rhs = lam.scale(&lift(&self.pi, r.precision));
        Ok(lhs.agreement(&rhs) as i64 - shift as i64)
    }

    /// Agreement of `lambda(F(X,Y))` with `lambda(X) + lambda(Y)`.
    pub fn check_log_homomorphism(&self) -> Result<i64> {
        let (lam, shift) = self.scaled_logarithm();
        let lhs = lam.compose(&self.laws().1)?;
        let r = *lam.ring();
        let rhs = Series::from_fn2(&r, self.degree_cap(), |i, j| match (i, j) {
            (0, 0) => PAdicInt::zero(r.p, r.precision),
            (k, 0) | (0, k) => lam.coeff(k),
            _ => PAdicInt::zero(r.p, r.precision),
        });
        Ok(lhs.agreement(&rhs) as i64 - shift as i64)
    }

    /// Agreement of `[a] o [b]` with `[ab]`.
    pub fn check_endomorphism_product(&self, a: &PAdicInt, b: &PAdicInt) -> Result<u32> {
        let lhs = self.mult_by(a)?.compose(&self.mult_by(b)?)?;
        let rhs = self.mult_by(&(*a * *b))?;
        Ok(lhs.agreement(&rhs))
    }

    /// Agreement of `[a+b]` with `F([a], [b])`.
    pub fn check_endomorphism_sum(&self, a: &PAdicInt, b: &PAdicInt) -> Result<u32> {
        let lhs = self.mult_by(&(*a + *b))?;
        let rhs = self.law().substitute(&self.mult_by(a)?, &self.mult_by(b)?)?;
        Ok(lhs.agreement(&rhs))
    }

    /// Agreement (in digits of `lambda`) of `lambda o [a]` with `a lambda`.
    pub fn check_log_linearity(&self, a: &PAdicInt) -> Result<i64> {
        let (lam, shift) = self.scaled_logarithm();
        let r = *lam.ring();
        let a = lift(a, r.precision);
        let end = self.endomorphism(lift(&a, self.work.m), self.degree_cap())?;
        let end = Series::from_fn(&r, self.degree_cap(), |k| end[k].reduce_precision(r.precision));
        let lhs = lam.compose(&end)?;
        let rhs = lam.scale(&a);
        Ok(lhs.agreement(&rhs) as i64 - shift as i64)
    }

    /// The Frobenius polynomial applied to a tower element (exact when `f`
    /// is a polynomial).
    pub fn apply_f(&self, x: &ExtElement) -> Result<ExtElement> {
        evaluate_series(&self.f, x)
    }
}

/// Homogeneous components `comp[k][j]` (coefficient of `X^(k-j) Y^j`) as a series.
fn law_series(comp: &[Vec<PAdicInt>], p: u64, d: usize, n: u32) -> Series {
    Series::from_fn2(&BaseRing::new(p, n), d, |i, j| {
        if i + j == 0 {
            PAdicInt::zero(p, n)
        } else {
            comp[i + j][j].reduce_precision(n)
        }
    })
}

/// Trivariate comparison of `F(F(X,Y),Z)` and `F(X,F(Y,Z))`.
fn associativity_agreement(law: &Series) -> u32 {
    let d = law.cap();
    let r = *law.ring();
    let idx = |i: usize, j: usize, l: usize| (i * (d + 1) + j) * (d + 1) + l;
    let zero = PAdicInt::zero(r.p, r.precision);
    let one = Series::from_fn2(&r, d, |i, j| {
        if i + j == 0 {
            PAdicInt::one(r.p, r.precision)
        } else {
            PAdicInt::zero(r.p, r.precision)
        }
    });
    let mut pows = vec![one];
    for a in 1..=d {
        let next = pows[a - 1].mul(law);
        pows.push(next);
    }
    let mut left = vec![zero; (d + 1).pow(3)];
    let mut right = vec![zero; (d + 1).pow(3)];
    for tot in 1..=d {
        for b in 0..=tot {
            let a = tot - b;
            let c = law.coeff2(a, b);
            if c.is_zero() {
                continue;
            }
            // c G(X,Y)^a Z^b and c X^a G(Y,Z)^b
            for (gi, gj, g) in bivariate_terms(&pows[a], d - b) {
                left[idx(gi, gj, b)] = left[idx(gi, gj, b)] + c * g;
            }
            for (gi, gj, g) in bivariate_terms(&pows[b], d - a) {
                right[idx(a, gi, gj)] = right[idx(a, gi, gj)] + c * g;
            }
        }
    }
    left.iter().zip(&right).map(|(x, y)| x.agreement(y)).min().unwrap_or(u32::MAX)
}

fn bivariate_terms(s: &Series, max_deg: usize) -> Vec<(usize, usize, PAdicInt)> {
    let mut out = Vec::new();
    for dd in 0..=max_deg.min(s.cap()) {
        for j in 0..=dd {
            let c = s.coeff2(dd - j, j);
            if !c.is_zero() {
                out.push((dd - j, j, c));
            }
        }
    }
    out
}

/// `group_law(f, pi)`.
pub fn group_law(config: PAdicConfig, f: Series, pi: PAdicInt) -> Result<FormalGroupLaw> {
    FormalGroupLaw::with_uniformizer(config, f, pi)
}

/// `[a]` of a law.
pub fn mult_by(a: &PAdicInt, g: &FormalGroupLaw) -> Result<Series> {
    g.mult_by(a)
}

/// Torsion generators of a law, level by level.
#[derive(Clone, Debug)]
pub struct TorsionTower {
    law: FormalGroupLaw,
    tower: EisensteinTower,
}

/// Builds the torsion tower of `g` to level `n` and certifies
/// `f(w_1) = 0`, `f(w_(k+1)) = w_k` and `w_1 != 0`.
pub fn torsion_tower(g: &FormalGroupLaw, n: usize) -> Result<TorsionTower> {
    let f = g.frobenius_series();
    if !f.is_exact() {
        return Err(Error::NotEisenstein("Frobenius series must be a polynomial".into()));
    }
    let coeffs: Vec<PAdicInt> = (0..=f.cap()).map(|k| f.coeff(k)).collect();
    let tower = eisenstein_from_torsion(g.base_ring(), &coeffs, n)?;
    let t = TorsionTower { law: g.clone(), tower };
    for k in 1..=n {
        let image = t.law.apply_f(t.generator(k))?;
        let expected = if k == 1 { t.ring(1).zero() } else { t.generator(k - 1).embed(t.ring(k))? };
        if !(&image - &expected).is_zero() {
            return Err(Error::PrecisionExhausted(format!("torsion relation fails at level {k}")));
        }
    }
    if t.generator(1).is_zero() {
        return Err(Error::PrecisionExhausted("level-1 generator vanishes".into()));
    }
    Ok(t)
}

impl TorsionTower {
    pub fn law(&self) -> &FormalGroupLaw {
        &self.law
    }

    pub fn eisenstein(&self) -> &EisensteinTower {
        &self.tower
    }

    pub fn levels(&self) -> usize {
        self.tower.levels()
    }

    pub fn ring(&self, level: usize) -> &LocalRing {
        self.tower.ring(level)
    }

    pub fn generator(&self, level: usize) -> &ExtElement {
        self.tower.generator(level)
    }

    /// Images of `w_1 .. w_n` under the automorphism `sigma_b: w_n -> [b](w_n)`,
    /// for `b` prime to `p`.
    pub fn galois_images(&self, b: i64, n: usize) -> Result<Vec<ExtElement>> {
        let p = self.law.prime() as i64;
        if b.rem_euclid(p) == 0 {
            return Err(Error::InvalidArgument(format!("{b} is not prime to p")));
        }
        if n == 0 || n > self.levels() {
            return Err(Error::InvalidArgument(format!("level {n} outside the tower")));
        }
        let modulus = p.pow(n as u32);
        let b = b.rem_euclid(modulus);
        let ring = self.ring(n);
        let w = self.generator(n);
        let top = match self.law.closed_form {
            Some(ClosedForm::Multiplicative) => &(&ring.one() + w).pow(b as u64) - &ring.one(),
            Some(ClosedForm::Special) if n == 1 => {
                let t = PAdicInt::from_i64(p as u64, self.law.precision(), b).teichmuller()?;
                w.scale(&t)
            }
            _ => {
                let e = ring.ramification_index() as usize;
                let cap = e * self.law.precision() as usize + 1;
                let s = self.law.mult_by_int(b, cap)?;
                evaluate_series(&s, w)?
            }
        };
        let mut images = vec![top];
        for k in (1..n).rev() {
            let mut x = self.law.apply_f(images.last().unwrap())?;
            while x.ring() != self.ring(k) {
                x = x.descend()?;
            }
            images.push(x);
        }
        images.reverse();
        Ok(images)
    }

    /// Applies `sigma_b` to an element of the level-`n` ring.
    pub fn apply_galois(&self, x: &ExtElement, images: &[ExtElement]) -> Result<ExtElement> {
        apply_generator_images(x, images)
    }

    /// The `p` points of `ker [pi]` in the level-1 ring: `0` and the
    /// conjugates of `w_1`.
    pub fn level_one_kernel(&self) -> Result<Vec<ExtElement>> {
        let p = self.law.prime() as i64;
        let mut out = vec![self.ring(1).zero()];
        for b in 1..p {
            out.push(self.galois_images(b, 1)?.remove(0));
        }
        Ok(out)
    }
}

/// A same-uniformizer isomorphism `eta: source -> target`.
#[derive(Clone, Debug)]
pub struct LTIsomorphism {
    source: FormalGroupLaw,
    target: FormalGroupLaw,
    eta: Series,
    /// `eta` at `N + L` digits, for comparisons against `p^L lambda`.
    eta_wide: Series,
    omega: PAdicInt,
}

/// `eta = exp_target o (omega lambda_source)`, solved from
/// `Lambda_target(eta) = omega Lambda_source` with an exact division by
/// `p^L` at every degree (the integrality certificate).
pub fn lt_isomorphism(source: &FormalGroupLaw, target: &FormalGroupLaw, omega: &PAdicInt) -> Result<LTIsomorphism> {
    if source.prime() != target.prime() {
        return Err(Error::InvalidArgument("laws over different primes".into()));
    }
    if !source.uniformizer().congruent(&target.uniformizer()) {
        return Err(Error::InvalidArgument("laws have different uniformizers".into()));
    }
    if source.degree_cap() != target.degree_cap() || source.work.m != target.work.m {
        return Err(Error::InvalidArgument("laws built with different caps or precisions".into()));
    }
    if !omega.is_unit() {
        return Err(Error::NotAUnit);
    }
    let p = source.prime();
    let d = source.degree_cap();
    let m = source.work.m;
    let n = source.precision().min(target.precision());
    let shift = source.work.shift;
    let (ls, lt) = (&source.work.scaled_log, &target.work.scaled_log);
    let om = lift(omega, m);
    let zero = PAdicInt::zero(p, m);
    let mut eta = vec![zero, om];
    // pows[j][k] = coefficient of Z^k in eta^j, j >= 2
    let mut pows: Vec<Vec<PAdicInt>> = vec![vec![zero; d + 1]; d + 1];
    for k in 2..=d {
        let mut acc = om * ls[k];
        for j in 2..=k {
            let mut h = zero;
            for i in 1..=(k + 1 - j) {
                let prev = if j == 2 { eta[k - i] } else { pows[j - 1][k - i] };
                h = h + eta[i] * prev;
            }
            pows[j][k] = h;
            acc = acc - lt[j] * h;
        }
        let q = acc.div_p_pow_exact(shift).map_err(|_| Error::NotIntegral { degree: k })?;
        eta.push(q.lift_precision(m));
    }
    let ring = BaseRing::new(p, n);
    let series = Series::from_fn(&ring, d, |k| eta[k].reduce_precision(n));
    let wide = BaseRing::new(p, n + shift);
    let eta_wide = Series::from_fn(&wide, d, |k| eta[k].reduce_precision(n + shift));
    Ok(LTIsomorphism {
        source: source.clone(),
        target: target.clone(),
        eta: series,
        eta_wide,
        omega: omega.reduce_precision(n),
    })
}

/// Certificate that `eta(w_n)` is a level-`n` torsion point of the target.
#[derive(Clone, Debug)]
pub struct TorsionCertificate {
    pub image: ExtElement,
    /// Digits to which `eta(w_n)` is known.
    pub precision: u32,
    /// `[pi^n](eta(w_n)) = 0` to that precision.
    pub killed: bool,
    /// `[pi^(n-1)](eta(w_n))` has a known nonzero digit.
    pub exact_level: bool,
    /// Norm and trace to `Z_p` match those of the target's own generator.
    pub conjugate_of_target: bool,
}

impl TorsionCertificate {
    pub fn passed(&self) -> bool {
        self.killed && self.exact_level && self.conjugate_of_target
    }
}

impl LTIsomorphism {
    pub fn eta(&self) -> &Series {
        &self.eta
    }

    pub fn source(&self) -> &FormalGroupLaw {
        &self.source
    }

    pub fn target(&self) -> &FormalGroupLaw {
        &self.target
    }

    pub fn omega(&self) -> PAdicInt {
        self.omega
    }

    /// `Omega = eta'(0)`.
    pub fn period(&self) -> PAdicInt {
        self.eta.coeff(1)
    }

    /// Agreement of `eta(F_s(X,Y))` with `F_t(eta(X), eta(Y))`.
    pub fn check_homomorphism(&self) -> Result<u32> {
        let lhs = self.eta.compose(self.source.law())?;
        let rhs = self.target.law().substitute_separate(&self.eta, &self.eta)?;
        Ok(lhs.agreement(&rhs))
    }

    /// Agreement of `eta o [a]_s` with `[a]_t o eta`.
    pub fn check_endomorphisms(&self, a: &PAdicInt) -> Result<u32> {
        let lhs = self.eta.compose(&self.source.mult_by(a)?)?;
        let rhs = self.target.mult_by(a)?.compose(&self.eta)?;
        Ok(lhs.agreement(&rhs))
    }

    /// Agreement (in digits of `lambda`) of `lambda_t o eta` with
    /// `Omega lambda_s`.
    pub fn check_compare_logs(&self) -> Result<i64> {
        let (lt, shift) = self.target.scaled_logarithm();
        let (ls, _) = self.source.scaled_logarithm();
        let lhs = lt.compose(&self.eta_wide)?;
        let rhs = ls.scale(&lift(&self.omega, lt.ring().precision));
        Ok(lhs.agreement(&rhs) as i64 - shift as i64)
    }
}

/// Evaluates `eta(w_n)` in the source tower and certifies it is a torsion
/// point of exact level `n` for the target law.
pub fn torsion_correspondence(
    iso: &LTIsomorphism,
    source: &TorsionTower,
    target: &TorsionTower,
    n: usize,
) -> Result<TorsionCertificate> {
    if n == 0 {
        let r = source.ring(1);
        let x = evaluate_series(&iso.eta, &r.zero())?;
        let zero = x.is_zero();
        return Ok(TorsionCertificate {
            precision: x.precision(),
            image: x,
            killed: zero,
            exact_level: zero,
            conjugate_of_target: zero,
        });
    }
    let x = evaluate_series(&iso.eta, source.generator(n))?;
    let prec = x.precision();
    let mut y = x.clone();
    let mut before_last = None;
    for k in 0..n {
        if k == n - 1 {
            before_last = Some(y.clone());
        }
        y = iso.target.apply_f(&y)?;
    }
    let killed = y.is_zero();
    let exact_level = before_last.is_some_and(|z| !z.is_zero());
    let w = target.generator(n);
    let conj = x.norm_to_base().congruent(&w.norm_to_base()) && x.trace_to_base().congruent(&w.trace_to_base());
    Ok(TorsionCertificate { image: x, precision: prec, killed, exact_level, conjugate_of_target: conj })
}
