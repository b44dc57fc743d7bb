//! Fourier expansions of multiple Eisenstein series of level N.
//!
//! `G(w; τ) = Σ_{(u, v) ∈ Δ(w)} c · ζ(u) · (-2πi/N)^{wt v} ĝ(v; q)` with
//! `q = e^{2πiτ}`, and the regularised `G^⊔̃` with `ζ^⊔̃` and `ĝ^⊔̃` in place
//! of `ζ` and `ĝ`. A truncated lattice sum serves as an independent oracle.

use std::collections::BTreeMap;
use std::sync::RwLock;

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::hopf::coproduct;
use crate::numerics::{two_pi_i_power, Estimate, PrecisionCtx, ZetaCache};
use crate::qseries::{g_hat, g_sha_hat, QSeries};
use crate::words::{IndexWord, LinComb};

/// Truncated q-expansion `Σ_{m ≤ M} c_m q^m` with per-coefficient error bounds.
#[derive(Clone, Debug)]
pub struct FourierExpansion {
    pub word: LinComb<IndexWord>,
    pub level: u32,
    pub order: usize,
    pub regularized: bool,
    pub coeffs: Vec<Estimate>,
}

impl FourierExpansion {
    fn zero(word: LinComb<IndexWord>, order: usize, regularized: bool, prec: u32) -> Self {
        let level = word.level();
        Self { word, level, order, regularized, coeffs: vec![Estimate::zero(prec); order + 1] }
    }

    pub fn coeff(&self, m: usize) -> &Estimate {
        &self.coeffs[m]
    }

    /// Coefficientwise difference, keeping the left operand's label.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, Estimate::sub)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, Estimate::add)
    }

    fn zip(&self, other: &Self, f: impl Fn(&Estimate, &Estimate) -> Estimate) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::InvalidInput(format!("orders {} and {} differ", self.order, other.order)));
        }
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect();
        Ok(out)
    }

    pub fn scale(&self, c: &Complex) -> Self {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|e| e.scale(c)).collect();
        out
    }

    /// `q ↦ q^k`, truncated at the same order.
    pub fn dilate(&self, k: usize) -> Self {
        let prec = self.coeffs[0].value.prec().0;
        let mut out = self.clone();
        out.coeffs = (0..=self.order)
            .map(|m| if m % k == 0 { self.coeffs[m / k].clone() } else { Estimate::zero(prec) })
            .collect();
        out
    }

    /// Largest coefficient modulus and largest error bound.
    pub fn max_norm(&self) -> (f64, f64) {
        self.coeffs.iter().fold((0.0, 0.0), |(a, e), c| (a.max(c.abs()), e.max(c.error)))
    }

    /// Sums the expansion at `τ`, adding a geometric estimate for the
    /// discarded terms.
    pub fn evaluate(&self, tau: &Complex) -> Result<Estimate> {
        if *tau.imag() <= 0 {
            return Err(Error::InvalidInput("τ must lie in the upper half plane".into()));
        }
        let prec = self.coeffs[0].value.prec().0 + 16;
        let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
        let q = Complex::with_val(prec, Complex::with_val(prec, (0, two_pi)) * tau).exp();
        let qabs = Float::with_val(53, q.abs_ref()).to_f64();
        let mut acc = Estimate::zero(prec);
        let mut qm = Complex::with_val(prec, 1);
        for c in &self.coeffs {
            acc = acc.add(&c.scale(&qm));
            qm *= &q;
        }
        let last = self.coeffs.last().map(|c| c.abs()).unwrap_or(0.0);
        acc.error += last * qabs.powi(self.order as i32 + 1) * (self.order as f64 + 2.0) / (1.0 - qabs).max(1e-300);
        Ok(acc)
    }
}

/// Shared state for assembling many expansions: the numeric value cache,
/// exact divisor series, and powers of `-2πi/N`.
#[derive(Debug)]
pub struct Expander {
    zetas: ZetaCache,
    series: RwLock<BTreeMap<(IndexWord, usize, bool), QSeries>>,
    powers: RwLock<BTreeMap<(u32, u32), Complex>>,
}

impl Expander {
    pub fn new(ctx: PrecisionCtx) -> Self {
        Self { zetas: ZetaCache::new(ctx), series: RwLock::default(), powers: RwLock::default() }
    }

    pub fn zetas(&self) -> &ZetaCache {
        &self.zetas
    }

    pub fn ctx(&self) -> &PrecisionCtx {
        self.zetas.ctx()
    }

    fn prec(&self) -> u32 {
        self.ctx().precision + 32
    }

    fn power(&self, level: u32, k: u32) -> Complex {
        if let Some(p) = self.powers.read().unwrap().get(&(level, k)) {
            return p.clone();
        }
        let p = two_pi_i_power(level, k, self.prec());
        self.powers.write().unwrap().insert((level, k), p.clone());
        p
    }

    fn divisor(&self, v: &IndexWord, order: usize, regularized: bool) -> QSeries {
        let key = (v.clone(), order, regularized);
        if let Some(s) = self.series.read().unwrap().get(&key) {
            return s.clone();
        }
        let s = if regularized { g_sha_hat(v, order).series } else { g_hat(v, order).series };
        self.series.write().unwrap().insert(key, s.clone());
        s
    }

    fn assemble(&self, u: &LinComb<IndexWord>, order: usize, regularized: bool) -> Result<FourierExpansion> {
        let prec = self.prec();
        let mut out = FourierExpansion::zero(u.clone(), order, regularized, self.ctx().precision);
        for ((left, right), c) in coproduct(u).iter() {
            let z = if regularized { self.zetas.zeta_tsha(left)? } else { self.zetas.zeta(left)? };
            let scale = Complex::with_val(prec, c.to_complex(prec) * self.power(u.level(), right.weight()));
            let z = z.scale(&scale);
            if right.is_empty() {
                out.coeffs[0] = out.coeffs[0].add(&z);
                continue;
            }
            let g = self.divisor(right, order, regularized);
            for (m, gm) in g.coeffs().iter().enumerate().skip(1) {
                if !gm.is_zero() {
                    out.coeffs[m] = out.coeffs[m].add(&z.scale(&gm.to_complex(prec)));
                }
            }
        }
        Ok(out)
    }

    /// `G(w)` for a combination of words with every entry at least 2.
    pub fn g_fourier(&self, u: &LinComb<IndexWord>, order: usize) -> Result<FourierExpansion> {
        if let Some((w, _)) = u.iter().find(|(w, _)| !w.all_at_least_two()) {
            return Err(Error::NotAdmissible(format!("{w}: every entry must be at least 2")));
        }
        self.assemble(u, order, false)
    }

    /// `G^⊔̃(w)`, defined for every combination of index words.
    pub fn g_sha_fourier(&self, u: &LinComb<IndexWord>, order: usize) -> Result<FourierExpansion> {
        self.assemble(u, order, true)
    }
}

/// `G(w)` for a single word; see [`Expander::g_fourier`].
pub fn g_fourier(w: &IndexWord, order: usize, ctx: &PrecisionCtx) -> Result<FourierExpansion> {
    Expander::new(*ctx).g_fourier(&LinComb::from_word(w.clone()), order)
}

/// `G^⊔̃(w)` for a single word; see [`Expander::g_sha_fourier`].
pub fn g_sha_fourier(w: &IndexWord, order: usize, ctx: &PrecisionCtx) -> Result<FourierExpansion> {
    Expander::new(*ctx).g_sha_fourier(&LinComb::from_word(w.clone()), order)
}

const LATTICE_PREC: u32 = 64;

/// Truncated Eisenstein summation over `λ = l N τ + m` with `0 ≤ l ≤ L`,
/// `|m| ≤ M`, `m ≡ a_i`, and `0 ≺ λ_1 ≺ ⋯ ≺ λ_r` in the order
/// `l τ + m ≻ 0 ⇔ l > 0` or `l = 0, m > 0`.
fn lattice_sum(w: &IndexWord, tau: &Complex, l_max: u32, m_max: u32) -> (Complex, f64) {
    let prec = LATTICE_PREC;
    let level = w.level() as i64;
    let e = w.entries();
    let r = e.len();
    let step = Complex::with_val(prec, tau * level);
    let max_n = e.iter().map(|x| x.0).max().unwrap_or(1) as usize;
    let mut heads = vec![Complex::new(prec); r + 1];
    heads[0] = Complex::with_val(prec, 1);
    let mut pows = vec![Complex::new(prec); max_n + 1];
    for l in 0..=l_max as i64 {
        let row = Complex::with_val(prec, &step * l);
        let start = if l == 0 { 1 } else { -(m_max as i64) };
        for m in start..=m_max as i64 {
            let res = m.rem_euclid(level) as u32;
            if !e.iter().any(|x| x.1 == res) {
                continue;
            }
            let lambda = Complex::with_val(prec, &row + m);
            pows[1] = Complex::with_val(prec, lambda.recip_ref());
            for p in 2..=max_n {
                pows[p] = Complex::with_val(prec, &pows[p - 1] * &pows[1]);
            }
            for j in (1..=r).rev() {
                if e[j - 1].1 == res {
                    let t = Complex::with_val(prec, &heads[j - 1] * &pows[e[j - 1].0 as usize]);
                    heads[j] += t;
                }
            }
        }
    }
    // Each missing row or column contributes at most a geometric or
    // power-law remainder; this is an estimate, not a bound.
    let n_min = e.iter().map(|x| x.0).min().unwrap_or(2) as f64;
    let im = tau.imag().to_f64() * level as f64;
    let cols = (r as f64) * 2.0 / ((n_min - 1.0) * (m_max as f64).powf(n_min - 1.0));
    let rows = (l_max as f64 + 1.0) * (-2.0 * std::f64::consts::PI * im * (l_max as f64 + 1.0)).exp() * 10.0;
    (heads.swap_remove(r), cols * (l_max as f64 + 1.0) + rows)
}

/// The truncated lattice sum as an oracle for `G(w; τ)`, for depth at most
/// two and entries at least 3, where the truncation error is controlled.
pub fn lattice_oracle(w: &IndexWord, tau: &Complex, l_max: u32, m_max: u32) -> Result<Estimate> {
    if w.depth() > 2 {
        return Err(Error::Unsupported(format!("{w}: lattice oracle handles depth at most 2")));
    }
    if w.ns().iter().any(|&n| n < 3) {
        return Err(Error::NotAdmissible(format!("{w}: lattice oracle needs entries at least 3")));
    }
    if *tau.imag() <= 0 {
        return Err(Error::InvalidInput("τ must lie in the upper half plane".into()));
    }
    let (v, err) = lattice_sum(w, tau, l_max, m_max);
    Ok(Estimate::new(v, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx { precision: 96, series_cutoff: 2000, tail_order: 24 }
    }

    #[test]
    fn depth_three_lattice_sum_agrees() {
        let w = IndexWord::new(1, &[(3, 0), (3, 0), (4, 0)]).unwrap();
        let tau = Complex::with_val(96, (0.1, 1.2));
        let g = Expander::new(ctx()).g_fourier(&LinComb::from_word(w.clone()), 12).unwrap();
        let fourier = g.evaluate(&tau).unwrap();
        let (lat, _) = lattice_sum(&w, &tau, 10, 4000);
        let d = Complex::with_val(64, &fourier.value - &lat);
        assert!(Float::with_val(53, d.abs_ref()).to_f64() < 1e-6);
    }

    #[test]
    fn oracle_refuses_depth_three() {
        let w = IndexWord::new(1, &[(3, 0), (3, 0), (3, 0)]).unwrap();
        let tau = Complex::with_val(64, (0, 1));
        assert!(matches!(lattice_oracle(&w, &tau, 2, 10), Err(Error::Unsupported(_))));
    }
}
