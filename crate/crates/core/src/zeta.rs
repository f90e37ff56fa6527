//! Spectral zeta functions of `D₀*D₀` and `D*D`.
//!
//! Eigenvalues enter as certified rational brackets. Complex powers are taken
//! in `f64`; every term carries a rounding allowance, the bracket width is
//! propagated through `|d/dλ λ^{-s}| = |s| λ^{-σ-1}`, and the omitted tail is
//! bounded from `λ_n ≥ c·p^{2n-2}` with `c = ((1-2q)/(1-q))²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::rational_to_f64;
use crate::spectrum::{eigenvalue_table, refine_eigenvalue, EigenvalueRecord};
use crate::tree::Prime;
use crate::Rational;

/// Most eigenvalues a single evaluation may request.
pub const MAX_EIGENVALUES: u32 = 400;

const POLE_GUARD: f64 = 1e-12;

/// Most terms of the correction series summed left of `Re s = 0`.
pub const CONTINUATION_TERMS: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexS {
    pub re: f64,
    pub im: f64,
}

impl ComplexS {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    /// Parses `"re"` or `"re,im"`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse s = {text:?}"));
        let mut parts = text.split(',').map(str::trim);
        let re: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let im: f64 = match parts.next() {
            Some(t) => t.parse().map_err(|_| bad())?,
            None => 0.0,
        };
        if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
            return Err(bad());
        }
        Ok(Self { re, im })
    }

    fn c(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    fn from_c(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaResult {
    pub s: ComplexS,
    pub value: ComplexS,
    /// Bound on `|value - exact|`; `inf` when no bound is available.
    pub error: f64,
    pub terms_used: usize,
    /// `heuristic_tail`: the tail is an empirical estimate.
    /// `correction_no_decay`: the correction terms do not become small
    /// relative to the reference terms.
    pub flags: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefactorMode {
    /// `(1 - 1/p)/(1 - p^{1-2s})`.
    Paper,
    /// `(1 - p^{-2s})/(1 - p^{1-2s}) = Σ_m multiplicity(m) p^{-2ms}`.
    Totient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceMode {
    /// `μ_n = pⁿ`.
    Paper,
    /// `μ_n = p^{2n-2}`.
    Asymptotic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleSource {
    Reference,
    Prefactor,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub s: ComplexS,
    pub k: i64,
    pub source: PoleSource,
}

/// `multiplicity(m)` as a float, safe for large `m`.
fn multiplicity_f(p: Prime, m: u32) -> f64 {
    let pf = p.get() as f64;
    if m == 0 {
        1.0
    } else {
        pf.powi(m as i32) * (1.0 - 1.0 / pf)
    }
}

fn qf(p: Prime) -> f64 {
    1.0 / (p.get() as f64 * p.get() as f64)
}

/// `p^{-z}`.
fn p_pow_neg(p: Prime, z: Complex64) -> Complex64 {
    (-z * (p.get() as f64).ln()).exp()
}

/// `e^z - 1` without cancellation for small `z`.
fn expm1_c(z: Complex64) -> Complex64 {
    let half = (z.im / 2.0).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * half * half,
        z.re.exp() * z.im.sin(),
    )
}

fn rounding(value: Complex64, s: Complex64, log: f64) -> f64 {
    16.0 * f64::EPSILON * (1.0 + s.norm() * log.abs()) * value.norm()
}

fn digits_for(eps: f64) -> u32 {
    ((-eps.log10()).ceil().max(0.0) as u32 + 4).max(14)
}

/// `Σ_{n>m} (c q^{1-n})^{-σ}`, the tail of `Σ λ_n^{-σ}`.
fn direct_tail(p: Prime, sigma: f64, m: u32) -> f64 {
    let q = qf(p);
    let c = ((1.0 - 2.0 * q) / (1.0 - q)).powi(2);
    c.powf(-sigma) * q.powf(m as f64 * sigma) / (1.0 - q.powf(sigma))
}

fn terms_for(p: Prime, sigma: f64, budget: f64) -> Result<u32> {
    (1..=MAX_EIGENVALUES)
        .find(|&m| direct_tail(p, sigma, m) <= budget)
        .ok_or(Error::EigenvalueBudget {
            budget: MAX_EIGENVALUES as usize,
        })
}

fn records(p: Prime, count: u32, eps: f64) -> Result<Vec<EigenvalueRecord>> {
    Ok(eigenvalue_table(p, count, digits_for(eps))?.records)
}

/// `λ^{-s}` at the bracket midpoint, its rounding allowance and the
/// bracket-width contribution.
fn eigen_power(rec: &EigenvalueRecord, s: Complex64) -> (Complex64, f64) {
    let mid = rational_to_f64(&rec.midpoint());
    let lo = rational_to_f64(&rec.lo);
    let hi = rational_to_f64(&rec.hi);
    let half_width = rational_to_f64(&rec.width()) / 2.0;
    let log = mid.ln();
    let value = (-s * log).exp();
    let worst = if s.re + 1.0 > 0.0 { lo } else { hi };
    let spread = s.norm() * half_width * worst.powf(-s.re - 1.0);
    (value, rounding(value, s, log) + spread)
}

/// `ζ_{D₀}(s) = Σ_n λ_n^{-s}` for `Re s > 0`.
pub fn zeta_d0(p: Prime, s: ComplexS, eps: f64) -> Result<ZetaResult> {
    if s.re <= 0.0 {
        return Err(Error::InvalidParameter(
            "the direct sum needs Re s > 0".into(),
        ));
    }
    let m = terms_for(p, s.re, eps / 2.0)?;
    let recs = records(p, m, eps)?;
    zeta_d0_from(p, &recs, s)
}

/// `ζ_{D₀}(s)` from given records `λ_1..λ_M` plus the analytic tail.
pub fn zeta_d0_from(p: Prime, recs: &[EigenvalueRecord], s: ComplexS) -> Result<ZetaResult> {
    if s.re <= 0.0 {
        return Err(Error::InvalidParameter(
            "the direct sum needs Re s > 0".into(),
        ));
    }
    let sc = s.c();
    let mut sum = Complex64::zero();
    let mut err = direct_tail(p, s.re, recs.len() as u32);
    for rec in recs {
        let (v, e) = eigen_power(rec, sc);
        sum += v;
        err += e;
    }
    Ok(ZetaResult {
        s,
        value: ComplexS::from_c(sum),
        error: err,
        terms_used: recs.len(),
        flags: Vec::new(),
    })
}

/// `(1-1/p)/(1-p^{1-2s})` or `(1-p^{-2s})/(1-p^{1-2s})`.
pub fn prefactor(p: Prime, s: ComplexS, mode: PrefactorMode) -> Result<Complex64> {
    let sc = s.c();
    let den = Complex64::one() - p_pow_neg(p, 2.0 * sc - 1.0);
    if den.norm() < POLE_GUARD {
        return Err(Error::Pole(format!(
            "s = {} + {}i is on the prefactor pole set",
            s.re, s.im
        )));
    }
    let num = match mode {
        PrefactorMode::Paper => Complex64::new(1.0 - 1.0 / p.get() as f64, 0.0),
        PrefactorMode::Totient => Complex64::one() - p_pow_neg(p, 2.0 * sc),
    };
    Ok(num / den)
}

/// `ζ_D(s) = prefactor(s)·ζ_{D₀}(s)` for `Re s > 1/2`.
pub fn zeta_d(p: Prime, s: ComplexS, eps: f64, mode: PrefactorMode) -> Result<ZetaResult> {
    if s.re <= 0.5 {
        return Err(Error::InvalidParameter("ζ_D needs Re s > 1/2".into()));
    }
    let pre = prefactor(p, s, mode)?;
    let inner = zeta_d0(p, s, eps / (1.0 + pre.norm()))?;
    let value = pre * inner.value.c();
    Ok(ZetaResult {
        s,
        value: ComplexS::from_c(value),
        error: pre.norm() * inner.error + 16.0 * f64::EPSILON * value.norm(),
        terms_used: inner.terms_used,
        flags: inner.flags,
    })
}

/// `Tr (D*D)^{-s}` for real `s > 1/2`.
pub fn schatten_trace(p: Prime, s: f64, eps: f64, mode: PrefactorMode) -> Result<ZetaResult> {
    if s <= 0.5 {
        return Err(Error::InvalidParameter(
            "the trace is finite only for s > 1/2".into(),
        ));
    }
    zeta_d(p, ComplexS::real(s), eps, mode)
}

/// `Σ_{m,n} multiplicity(m) (p^{2m} λ_n)^{-s}` summed pair by pair, without the
/// closed-form prefactor; `Re s > 1/2`.
pub fn zeta_d_double_sum(p: Prime, s: ComplexS, eps: f64) -> Result<ZetaResult> {
    let sigma = s.re;
    if sigma <= 0.5 {
        return Err(Error::InvalidParameter(
            "the double sum needs Re s > 1/2".into(),
        ));
    }
    let pf = p.get() as f64;
    let r = pf.powf(1.0 - 2.0 * sigma);
    let q = qf(p);
    let c = ((1.0 - 2.0 * q) / (1.0 - q)).powi(2);
    let z_upper = c.powf(-sigma) / (1.0 - q.powf(sigma));
    // Σ_{m>M} multiplicity(m) p^{-2mσ} ≤ r^{M+1}/(1-r)
    let m_max = (0..200u32)
        .find(|&m| r.powi(m as i32 + 1) / (1.0 - r) * z_upper <= eps / 4.0)
        .ok_or(Error::EigenvalueBudget { budget: 200 })?;
    let weight_sum: f64 = (0..=m_max)
        .map(|m| multiplicity_f(p, m) * pf.powf(-2.0 * m as f64 * sigma))
        .sum();
    let n_max = terms_for(p, sigma, eps / (4.0 * weight_sum))?;
    let recs = records(p, n_max, eps)?;
    let sc = s.c();
    let mut sum = Complex64::zero();
    let mut err =
        r.powi(m_max as i32 + 1) / (1.0 - r) * z_upper + weight_sum * direct_tail(p, sigma, n_max);
    for m in 0..=m_max {
        let mult = multiplicity_f(p, m);
        let scale = pf.powi(2 * m as i32);
        for rec in &recs {
            let mid = rational_to_f64(&rec.midpoint()) * scale;
            let lo = rational_to_f64(&rec.lo) * scale;
            let half_width = rational_to_f64(&rec.width()) * scale / 2.0;
            let log = mid.ln();
            let v = (-sc * log).exp() * mult;
            sum += v;
            err += rounding(v, sc, log) + mult * sc.norm() * half_width * lo.powf(-sigma - 1.0);
        }
    }
    Ok(ZetaResult {
        s,
        value: ComplexS::from_c(sum),
        error: err,
        terms_used: recs.len() * (m_max as usize + 1),
        flags: Vec::new(),
    })
}

/// `Σ_n μ_n^{-s}` in closed form.
pub fn reference_closed_form(p: Prime, s: ComplexS, mode: ReferenceMode) -> Result<Complex64> {
    let sc = s.c();
    let (num, den) = match mode {
        ReferenceMode::Paper => {
            let x = p_pow_neg(p, sc);
            (x, Complex64::one() - x)
        }
        ReferenceMode::Asymptotic => (Complex64::one(), Complex64::one() - p_pow_neg(p, 2.0 * sc)),
    };
    if den.norm() < POLE_GUARD {
        return Err(Error::Pole(format!(
            "s = {} + {}i is a pole of the reference sum",
            s.re, s.im
        )));
    }
    Ok(num / den)
}

fn mu(p: Prime, n: u32, mode: ReferenceMode) -> Rational {
    let pr = Rational::from_integer(p.get().into());
    match mode {
        ReferenceMode::Paper => num_traits::pow(pr, n as usize),
        ReferenceMode::Asymptotic => num_traits::pow(pr, 2 * n as usize - 2),
    }
}

/// `ζ_{D₀}(s) = Σ_n (λ_n^{-s} - μ_n^{-s}) + Σ_n μ_n^{-s}` for `Re s > -2`.
///
/// For `Re s > 0` the correction tail is bounded from the a-priori brackets.
/// Otherwise it is extrapolated from the last two terms and the result carries
/// `heuristic_tail`.
pub fn zeta_d0_continued(
    p: Prime,
    s: ComplexS,
    mode: ReferenceMode,
    eps: f64,
) -> Result<ZetaResult> {
    if s.re <= -2.0 {
        return Err(Error::InvalidParameter(
            "continuation is offered for Re s > -2 only".into(),
        ));
    }
    let closed = reference_closed_form(p, s, mode)?;
    let sigma = s.re;
    let sc = s.c();
    let q = qf(p);
    let pf = p.get() as f64;
    let term = |rec: &EigenvalueRecord| {
        let mu_q = mu(p, rec.index, mode);
        let mu_f = rational_to_f64(&mu_q);
        let mu_pow = (-sc * mu_f.ln()).exp();
        let (lam_pow, spread) = eigen_power(rec, sc);
        let d = match mode {
            ReferenceMode::Asymptotic => {
                // λ/μ = 1 - ε with ε tiny: expand around μ
                let gap = rational_to_f64(&((&mu_q - rec.midpoint()) / &mu_q));
                mu_pow * expm1_c(-sc * (-gap).ln_1p())
            }
            ReferenceMode::Paper => lam_pow - mu_pow,
        };
        (d, mu_pow, spread + rounding(mu_pow, sc, mu_f.ln()))
    };
    let mut recs = Vec::new();
    if sigma > 0.0 {
        let mut m = terms_for(p, sigma, eps / 4.0)?;
        if mode == ReferenceMode::Paper {
            while pf.powf(-(m as f64 + 1.0) * sigma) / (1.0 - pf.powf(-sigma)) > eps / 4.0 {
                m += 1;
                if m > MAX_EIGENVALUES {
                    return Err(Error::EigenvalueBudget {
                        budget: MAX_EIGENVALUES as usize,
                    });
                }
            }
        }
        recs = records(p, m.max(4), eps)?;
    } else {
        // λ_n^{-σ} grows, so each bracket is refined relative to its size;
        // stop once the corrections are negligible and shrinking
        let mut last = f64::INFINITY;
        for n in 1..=CONTINUATION_TERMS {
            let scale = -sigma * (2.0 * (n as f64 - 1.0)) * (p.get() as f64).log10();
            let digits = digits_for(eps) + scale.ceil() as u32 + 1;
            let rec = refine_eigenvalue(p, n, digits)?;
            let (d, _, _) = term(&rec);
            recs.push(rec);
            let size = d.norm();
            if n >= 4 && size <= eps / 100.0 && size < last {
                break;
            }
            if mode == ReferenceMode::Paper && n >= 12 {
                break;
            }
            last = size;
        }
    }
    let mut sum = Complex64::zero();
    let mut err = 0.0;
    let mut terms = Vec::with_capacity(recs.len());
    let mut relative = Vec::with_capacity(recs.len());
    for rec in &recs {
        let (d, mu_pow, e) = term(rec);
        err += e;
        sum += d;
        terms.push(d.norm());
        relative.push(d.norm() / mu_pow.norm());
    }
    let mut flags = Vec::new();
    let m = recs.len();
    let tail = if sigma > 0.0 {
        match mode {
            ReferenceMode::Asymptotic => {
                // λ_n ∈ (μ_n(1-δ_n), μ_n), δ_n ≤ 2qⁿ/(1-q)
                let delta = 2.0 * q.powi(m as i32 + 1) / (1.0 - q);
                let k = (1.0 - delta).powf(-sigma - 1.0);
                sc.norm() * k * 2.0 / (1.0 - q)
                    * q.powf(-sigma)
                    * q.powf((m as f64 + 1.0) * (sigma + 1.0))
                    / (1.0 - q.powf(sigma + 1.0))
            }
            ReferenceMode::Paper => {
                direct_tail(p, sigma, m as u32)
                    + pf.powf(-(m as f64 + 1.0) * sigma) / (1.0 - pf.powf(-sigma))
            }
        }
    } else {
        flags.push("heuristic_tail".to_string());
        let ratio = terms[m - 1] / terms[m - 2];
        if ratio < 1.0 {
            terms[m - 1] * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        }
    };
    if relative[m - 1] > 1e-3 && relative[m - 1] >= 0.5 * relative[m - 3] {
        flags.push("correction_no_decay".to_string());
    }
    let value = sum + closed;
    Ok(ZetaResult {
        s,
        value: ComplexS::from_c(value),
        error: err + tail + 16.0 * f64::EPSILON * (closed.norm() + value.norm()),
        terms_used: m,
        flags,
    })
}

/// Poles with `|k| ≤ kmax` of `ζ_D`: the reference family of the chosen mode
/// and the prefactor family `s = (1 - 2πik/ln p)/2`.
pub fn pole_list(p: Prime, mode: ReferenceMode, kmax: u32) -> Vec<Pole> {
    let lp = (p.get() as f64).ln();
    let step = match mode {
        ReferenceMode::Paper => 2.0 * PI / lp,
        ReferenceMode::Asymptotic => PI / lp,
    };
    let ks = -(kmax as i64)..=kmax as i64;
    let reference = ks.clone().map(|k| Pole {
        s: ComplexS::new(0.0, step * k as f64),
        k,
        source: PoleSource::Reference,
    });
    let pref = ks.map(|k| Pole {
        s: ComplexS::new(0.5, -PI * k as f64 / lp),
        k,
        source: PoleSource::Prefactor,
    });
    reference.chain(pref).collect()
}
