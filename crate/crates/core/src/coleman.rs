//! Coleman power series on height-one Lubin-Tate towers: interpolation
//! checks, the norm operator, the logarithmic derivative `delta g =
//! g' / (g lambda')`, its value at zero and the normalized traces
//! `pi^-n Tr(delta g(w_n))`.

use crate::error::{Error, Result};
use crate::localfield::{evaluate_series, ExtElement};
use crate::lubin_tate::{torsion_tower, ClosedForm, FormalGroupLaw, TorsionTower};
use crate::padic::{PAdicConfig, PAdicFraction, PAdicInt};
use crate::ring::BaseRing;
use crate::series::TruncatedSeries;

type Series = TruncatedSeries<PAdicInt>;
type ExtSeries = TruncatedSeries<ExtElement>;

/// A candidate Coleman series `g` together with the unit values
/// `beta_1 .. beta_n` it should interpolate on a torsion tower.
#[derive(Clone, Debug)]
pub struct ColemanData {
    name: String,
    tower: TorsionTower,
    betas: Vec<ExtElement>,
    g: Series,
}

impl ColemanData {
    /// Validates that `beta_k` is a unit of the level-`k` ring and that the
    /// sequence is norm-coherent.
    pub fn new(name: &str, tower: TorsionTower, betas: Vec<ExtElement>, g: Series) -> Result<Self> {
        let data = Self::without_coherence(name, tower, betas, g)?;
        if let Some(k) = data.first_incoherent_level() {
            return Err(Error::NotNormCoherent(k as u32));
        }
        Ok(data)
    }

    /// As [`ColemanData::new`] without the norm-coherence requirement (for
    /// interpolation-only test data).
    pub fn without_coherence(name: &str, tower: TorsionTower, betas: Vec<ExtElement>, g: Series) -> Result<Self> {
        if betas.is_empty() || betas.len() > tower.levels() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a tower of {} levels",
                betas.len(),
                tower.levels()
            )));
        }
        for (k, b) in betas.iter().enumerate() {
            if b.ring() != tower.ring(k + 1) {
                return Err(Error::RingMismatch(format!("beta_{} is not in the level-{} ring", k + 1, k + 1)));
            }
            if !b.is_unit() {
                return Err(Error::NotAUnit);
            }
        }
        if g.vars() != 1 || !g.coeff(0).is_unit() {
            return Err(Error::NotAUnit);
        }
        Ok(ColemanData { name: name.to_string(), tower, betas, g })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn law(&self) -> &FormalGroupLaw {
        self.tower.law()
    }

    pub fn tower(&self) -> &TorsionTower {
        &self.tower
    }

    pub fn betas(&self) -> &[ExtElement] {
        &self.betas
    }

    pub fn series(&self) -> &Series {
        &self.g
    }

    pub fn levels(&self) -> usize {
        self.betas.len()
    }

    /// First level `k` with `Norm(beta_(k+1)) != beta_k`.
    pub fn first_incoherent_level(&self) -> Option<usize> {
        (1..self.betas.len()).find(|&k| {
            let down = self.betas[k].norm_to(self.tower.ring(k));
            !matches!(down, Ok(x) if (&x - &self.betas[k - 1]).is_zero())
        })
    }
}

/// `g_a = ((1+Z)^a - 1)/Z` on the multiplicative tower, with
/// `beta_k = 1 + zeta + ... + zeta^(a-1)`, `zeta = 1 + w_k`.
pub fn cyclotomic(config: PAdicConfig, a: u64, levels: usize) -> Result<ColemanData> {
    let p = config.prime;
    if a == 0 || a.is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!("a = {a} must be positive and prime to p")));
    }
    let law = FormalGroupLaw::multiplicative(config)?;
    let tower = torsion_tower(&law, levels)?;
    let r = BaseRing::new(p, config.precision);
    let g = Series::polynomial(&r, (1..=a).map(|i| exact_binomial(a, i, &r)).collect());
    let mut betas = Vec::with_capacity(levels);
    for k in 1..=levels {
        let ring = tower.ring(k);
        let zeta = &ring.one() + tower.generator(k);
        let mut acc = ring.zero();
        let mut pow = ring.one();
        for _ in 0..a {
            acc = &acc + &pow;
            pow = &pow * &zeta;
        }
        betas.push(acc);
    }
    ColemanData::new(&format!("cyclotomic:a={a}"), tower, betas, g)
}

fn exact_binomial(a: u64, k: u64, r: &BaseRing) -> PAdicInt {
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (a - i) as u128 / (i + 1) as u128;
    }
    PAdicInt::try_new(r.p, r.precision, c as i128).expect("binomial fits")
}

/// `g = Z + c` with `beta_k = w_k + c` on the multiplicative tower. These
/// values are not norm-coherent; the data only exercises interpolation.
pub fn tautological(config: PAdicConfig, c: i64, levels: usize) -> Result<ColemanData> {
    let law = FormalGroupLaw::multiplicative(config)?;
    let tower = torsion_tower(&law, levels)?;
    let r = BaseRing::new(config.prime, config.precision);
    let g = Series::polynomial(&r, vec![r.int(c), r.int(1)]);
    let betas = (1..=levels).map(|k| tower.generator(k) + &tower.ring(k).int(c)).collect();
    ColemanData::without_coherence(&format!("tautological:c={c}"), tower, betas, g)
}

/// Built-in data by name: `cyclotomic:a=<a>` or `tautological:c=<c>`.
pub fn dataset(name: &str, config: PAdicConfig, levels: usize) -> Result<ColemanData> {
    let unknown = || Error::UnknownDataset(name.to_string());
    let (kind, arg) = name.split_once(':').ok_or_else(unknown)?;
    let (key, value) = arg.split_once('=').ok_or_else(unknown)?;
    match (kind.trim(), key.trim()) {
        ("cyclotomic", "a") => cyclotomic(config, value.trim().parse().map_err(|_| unknown())?, levels),
        ("tautological", "c") => tautological(config, value.trim().parse().map_err(|_| unknown())?, levels),
        _ => Err(unknown()),
    }
}

/// Per-level result of comparing `g(w_k)` with `beta_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelAgreement {
    pub level: usize,
    /// Digits of agreement between `g(w_k)` and `beta_k`.
    pub agreement: u32,
    /// Digits both sides are known to.
    pub precision: u32,
}

impl LevelAgreement {
    pub fn passed(&self) -> bool {
        self.agreement >= self.precision
    }
}

/// Evaluates `g(w_k)` at every level and compares with `beta_k`.
pub fn check_interpolation(data: &ColemanData) -> Result<Vec<LevelAgreement>> {
    (1..=data.levels())
        .map(|k| {
            let value = evaluate_series(&data.g, data.tower.generator(k))?;
            let beta = &data.betas[k - 1];
            Ok(LevelAgreement {
                level: k,
                agreement: value.agreement(beta),
                precision: value.precision().min(beta.precision()),
            })
        })
        .collect()
}

/// `prod_{l in ker [pi]} g(F(w_(k+1), l))` in the level-`(k+1)` ring, which
/// for norm-coherent data equals `beta_k`.
pub fn norm_product_at(data: &ColemanData, k: usize) -> Result<ExtElement> {
    let tower = &data.tower;
    if k == 0 || k >= tower.levels() {
        return Err(Error::InvalidArgument(format!("level {k} needs level {} in the tower", k + 1)));
    }
    let ring = tower.ring(k + 1);
    let law = tower.law().exact_law();
    let w = tower.generator(k + 1);
    let mut acc = ring.one();
    for l in tower.level_one_kernel()? {
        let l = l.embed(ring)?;
        let x = evaluate_bivariate(&law, w, &l)?;
        acc = &acc * &evaluate_series(&data.g, &x)?;
    }
    Ok(acc)
}

/// `F(x, y)` with the truncation tail folded into the precision.
fn evaluate_bivariate(f: &Series, x: &ExtElement, y: &ExtElement) -> Result<ExtElement> {
    let ring = x.ring();
    let d = f.cap();
    let top = if f.is_exact() { f.degree().unwrap_or(0) } else { d };
    let mut xp = vec![ring.one()];
    let mut yp = vec![ring.one()];
    for i in 1..=top {
        xp.push(&xp[i - 1] * x);
        yp.push(&yp[i - 1] * y);
    }
    let mut acc = ring.zero();
    for t in 0..=top {
        for j in 0..=t {
            let c = f.coeff2(t - j, j);
            if !c.is_zero() {
                acc = &acc + &(&xp[t - j] * &yp[j]).scale(&c);
            }
        }
    }
    if f.is_exact() {
        return Ok(acc);
    }
    let v = match (x.valuation(), y.valuation()) {
        (Some(0), _) | (_, Some(0)) => return Err(Error::NotInMaximalIdeal),
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => return Ok(acc),
    };
    let e = ring.ramification_index();
    Ok(acc.reduce_precision(((d as u64 + 1) * v / e).min(u32::MAX as u64) as u32))
}

/// `g(l + W)` as a series in `W` over the ring of `l`.
fn taylor_shift(g: &Series, l: &ExtElement) -> ExtSeries {
    let ring = l.ring().clone();
    let top = if g.is_exact() { g.degree().unwrap_or(0) } else { g.cap() };
    let mut a: Vec<ExtElement> = (0..=top).map(|k| ring.from_padic(&g.coeff(k))).collect();
    for i in 0..top {
        for j in (i..top).rev() {
            let t = &a[j + 1] * l;
            a[j] = &a[j] + &t;
        }
    }
    if g.is_exact() {
        return ExtSeries::polynomial(&ring, a);
    }
    if let Some(v) = l.valuation() {
        let e = ring.ramification_index();
        for (k, c) in a.iter_mut().enumerate() {
            let t = ((g.cap() + 1 - k) as u64 * v / e).min(u32::MAX as u64) as u32;
            *c = c.reduce_precision(t);
        }
    }
    ExtSeries::from_coeffs(&ring, a, g.cap())
}

/// `F(Z, l) - l` over the ring of `l`.
fn translation(law: &FormalGroupLaw, l: &ExtElement) -> ExtSeries {
    let ring = l.ring().clone();
    if law.closed_form() == Some(ClosedForm::Multiplicative) {
        return ExtSeries::polynomial(&ring, vec![ring.zero(), &ring.one() + l]);
    }
    let f = law.law();
    let d = f.cap();
    let mut lp = vec![ring.one()];
    for j in 1..=d {
        lp.push(&lp[j - 1] * l);
    }
    let v = l.valuation();
    let e = ring.ramification_index();
    let mut c = vec![ring.zero()];
    for i in 1..=d {
        let mut acc = ring.zero();
        for j in 0..=(d - i) {
            let x = f.coeff2(i, j);
            if !x.is_zero() {
                acc = &acc + &lp[j].scale(&x);
            }
        }
        if let Some(v) = v {
            acc = acc.reduce_precision(((d - i + 1) as u64 * v / e).min(u32::MAX as u64) as u32);
        }
        c.push(acc);
    }
    ExtSeries::from_coeffs(&ring, c, d)
}

/// The Coleman norm operator: the series `h` with
/// `h(f(Z)) = prod_{l in ker [pi]} g(F(Z, l))`, to degree `cap`.
///
/// The product is formed in the level-1 ring and must descend to `Z_p`.
/// `h` is recovered from the coefficients of `Z^(pk)`, where the system is
/// the identity modulo `p`; the result is then checked against every
/// coefficient of the product up to degree `cap`.
pub fn coleman_norm(g: &Series, law: &FormalGroupLaw, cap: usize) -> Result<Series> {
    if !g.coeff(0).is_unit() {
        return Err(Error::NotAUnit);
    }
    let p = law.prime() as usize;
    let n = law.precision();
    let want = cap + n as usize;
    let wide;
    let law = if law.closed_form() == Some(ClosedForm::Multiplicative) {
        law
    } else {
        // the translations F(Z, l) - l lose (D - i)/e digits at degree i
        let d = p * want + (p - 1) * n as usize;
        let c = PAdicConfig::new(law.prime(), n, d)?;
        wide = FormalGroupLaw::with_uniformizer(c, law.frobenius_series().clone(), law.uniformizer())?;
        &wide
    };
    let tower = torsion_tower(law, 1)?;
    let mut product: Option<ExtSeries> = None;
    for l in tower.level_one_kernel()? {
        let term = taylor_shift(g, &l).compose(&translation(law, &l))?;
        product = Some(match product {
            None => term,
            Some(acc) => acc.mul(&term).with_cap(p * want),
        });
    }
    let product = product.expect("kernel is nonempty").with_cap(p * want);
    let pcap = if product.is_exact() { p * want } else { product.cap() };
    let base = BaseRing::new(law.prime(), n);
    let mut coeffs = Vec::with_capacity(pcap + 1);
    for k in 0..=pcap {
        coeffs.push(product.coeff(k).descend_to_base()?);
    }
    let dp = (pcap / p).min(want);
    if dp < cap {
        return Err(Error::PrecisionExhausted(format!("norm product known only to degree {pcap}")));
    }
    let big_f = law.frobenius_series().with_cap(p * dp);
    let fr = *big_f.ring();
    // m[k][j] = coefficient of Z^(pk) in f^j
    let mut m = vec![vec![PAdicInt::zero(fr.p, fr.precision); dp + 1]; dp + 1];
    let mut pow = Series::one(&fr, p * dp).truncate(p * dp);
    for j in 1..=dp {
        pow = pow.mul(&big_f).with_cap(p * dp);
        for (k, row) in m.iter_mut().enumerate().skip(1) {
            row[j] = pow.coeff(p * k);
        }
    }
    let rhs: Vec<PAdicInt> = (0..=dp).map(|k| coeffs[p * k].reduce_precision(n)).collect();
    let mut h = rhs.clone();
    for _ in 0..=(n as usize + 1) {
        let mut next = rhs.clone();
        for k in 1..=dp {
            let mut acc = next[k];
            for j in 1..=dp {
                let mut c = m[k][j];
                if j == k {
                    c = c - PAdicInt::one(fr.p, fr.precision);
                }
                if !c.is_zero() {
                    acc = acc - c * h[j];
                }
            }
            next[k] = acc;
        }
        if next == h {
            break;
        }
        h = next;
    }
    let out = Series::from_fn(&base, cap, |k| h[k].reduce_precision(n.min((dp + 1 - k) as u32)));
    let check = out.compose(law.frobenius_series())?;
    let target = Series::from_coeffs(&base, coeffs.iter().map(|c| c.reduce_precision(n)).collect(), cap);
    let agree = check.agreement(&target);
    if agree < out.precision() {
        return Err(Error::PrecisionExhausted(format!("norm equation holds only to {agree} digits")));
    }
    Ok(out)
}

/// `delta g = g' / (g lambda')`, known to degree `D - 1`.
pub fn delta(g: &Series, law: &FormalGroupLaw) -> Result<Series> {
    if !g.coeff(0).is_unit() {
        return Err(Error::NotAUnit);
    }
    let dl = law.log_derivative()?;
    let g = g.reduce_precision(law.precision());
    let dg = g.derive(0)?;
    let den = g.mul(&dl).mul_inverse()?;
    Ok(dg.mul(&den).with_cap(dl.cap()))
}

/// `delta_w = g'(0) / g(0)`, using `lambda'(0) = 1`.
pub fn delta_at_zero(g: &Series) -> Result<PAdicInt> {
    if g.cap() < 1 && !g.is_exact() {
        return Err(Error::PrecisionExhausted("g known only to degree 0".into()));
    }
    g.coeff(1).div_unit(&g.coeff(0))
}

/// `pi^-n Tr(delta g(w_n))`, the trace taken from level `n` down to `Z_p`.
///
/// `delta g` is rebuilt to degree `e_n N` so that the truncation tail is
/// below `p^N`; the value generally has denominator `p`, so it is returned
/// as a fraction with `N - n` absolute digits.
pub fn trace_delta_level(g: &Series, tower: &TorsionTower, n: usize) -> Result<PAdicFraction> {
    if n == 0 || n > tower.levels() {
        return Err(Error::InvalidArgument(format!("level {n} outside the tower")));
    }
    let law = tower.law();
    let prec = law.precision();
    let e = tower.ring(n).ramification_index() as usize;
    let cfg = PAdicConfig::new(law.prime(), prec, e * prec as usize + 1)?;
    let wide = FormalGroupLaw::with_uniformizer(cfg, law.frobenius_series().clone(), law.uniformizer())?;
    let d = delta(g, &wide)?;
    let value = evaluate_series(&d, tower.generator(n))?;
    let tr = value.trace_to_base();
    let u = law.uniformizer().lift_precision(prec + 1).div_p_pow_exact(1)?.inverse()?;
    Ok(PAdicFraction::new(tr * u.pow(n as u64), n as u32))
}

/// `(1 - u0/p) delta_w(g)`, the level-independent value the traces should
/// take (`u0 = 1` for the multiplicative tower).
pub fn trace_prediction(g: &Series, unit_root: &PAdicInt) -> Result<PAdicFraction> {
    let dw = delta_at_zero(g)?;
    let factor = PAdicInt::from_i64(dw.prime(), dw.precision(), dw.prime() as i64) - *unit_root;
    Ok(PAdicFraction::new(factor * dw, 1))
}

/// `(u0/p - 1) delta_w(g)`, the dual-exponential functional.
pub fn dual_exp(g: &Series, unit_root: &PAdicInt) -> Result<PAdicFraction> {
    if !unit_root.is_unit() {
        return Err(Error::NotAUnit);
    }
    Ok(-trace_prediction(g, unit_root)?)
}
