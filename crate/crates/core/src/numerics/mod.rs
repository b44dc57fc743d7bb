//! Numerical evaluation of level-N multiple zeta values, multiple L-values
//! of shuffle and harmonic type, the regularised `ζ^⊔̃`, and mono- and
//! multitangent functions.
//!
//! Nested sums are cut at `K` and completed by asymptotic tail expansions
//! with exact rational coefficients, so a modest `K` already reaches the
//! working precision. L-values go through iterated integrals on roots of
//! unity, evaluated by Hölder convolution.

mod polylog;
mod tails;
mod tangent;

use std::collections::BTreeMap;
use std::sync::RwLock;

use rug::{Complex, Float};

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::products::shuffle_reg0;
use crate::words::{IndexWord, Letter, LetterWord, LinComb};

use polylog::{g_at_one, Point};
use tails::{eval_inverse_series, nested_tail, TailLevel};

pub use tangent::{
    multitangent_via_monotangents, psi_mono_numeric, psi_mono_qseries, psi_multi_numeric,
};

/// Working precision and truncation parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionCtx {
    /// Mantissa bits for every floating-point operation.
    pub precision: u32,
    /// Direct summation bound `K` before the asymptotic tail takes over.
    pub series_cutoff: u64,
    /// Number of inverse powers kept in tail expansions.
    pub tail_order: u32,
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        Self { precision: 192, series_cutoff: 100_000, tail_order: 24 }
    }
}

impl PrecisionCtx {
    pub fn new(precision: u32, series_cutoff: u64) -> Result<Self> {
        let ctx = Self { precision, series_cutoff, ..Self::default() };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision < 64 {
            return Err(Error::InvalidInput(format!("precision {} below 64 bits", self.precision)));
        }
        if self.series_cutoff < 1000 {
            return Err(Error::InvalidInput(format!("series cutoff {} below 1000", self.series_cutoff)));
        }
        if self.tail_order < 4 {
            return Err(Error::InvalidInput("tail order below 4".into()));
        }
        Ok(())
    }

    fn work(&self) -> u32 {
        self.precision + 32
    }

    fn rounding(&self) -> f64 {
        2f64.powi(-(self.precision as i32) + 8)
    }
}

/// A complex value with an absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub value: Complex,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: Complex, error: f64) -> Self {
        Self { value, error }
    }

    pub fn exact(value: Complex) -> Self {
        Self { value, error: 0.0 }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Complex::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::exact(Complex::with_val(prec, 1))
    }

    pub fn abs(&self) -> f64 {
        Float::with_val(53, self.value.abs_ref()).to_f64()
    }

    pub fn re(&self) -> f64 {
        self.value.real().to_f64()
    }

    pub fn im(&self) -> f64 {
        self.value.imag().to_f64()
    }

    pub fn add(&self, other: &Estimate) -> Estimate {
        let value = Complex::with_val(self.value.prec().0, &self.value + &other.value);
        Estimate { value, error: self.error + other.error }
    }

    pub fn sub(&self, other: &Estimate) -> Estimate {
        let value = Complex::with_val(self.value.prec().0, &self.value - &other.value);
        Estimate { value, error: self.error + other.error }
    }

    pub fn mul(&self, other: &Estimate) -> Estimate {
        let value = Complex::with_val(self.value.prec().0, &self.value * &other.value);
        let error = self.abs() * other.error + other.abs() * self.error + self.error * other.error;
        Estimate { value, error }
    }

    /// Multiplies by an exactly known constant.
    pub fn scale(&self, c: &Complex) -> Estimate {
        let value = Complex::with_val(self.value.prec().0, &self.value * c);
        let mag = Float::with_val(53, c.abs_ref()).to_f64();
        Estimate { value, error: self.error * mag }
    }

    /// Distance to another value, plus both error bounds.
    pub fn distance(&self, other: &Estimate) -> f64 {
        let d = Complex::with_val(self.value.prec().0, &self.value - &other.value);
        Float::with_val(53, d.abs_ref()).to_f64()
    }
}

fn real_estimate(v: Float, error: f64, prec: u32) -> Estimate {
    Estimate::new(Complex::with_val(prec, (v, 0)), error)
}

/// First index `k > x` with `k ≡ a (mod N)`, written as `x + δ` with `1 ≤ δ ≤ N`.
fn first_offset(x: i64, a: i64, level: u32) -> u32 {
    let d = (a - x).rem_euclid(level as i64) as u32;
    if d == 0 {
        level
    } else {
        d
    }
}

/// `ζ(n_1,…,n_r; a_1,…,a_r) = Σ_{0<k_1<⋯<k_r, k_i ≡ a_i} ∏ k_i^{-n_i}` for `n_r ≥ 2`.
pub fn zeta_numeric(w: &IndexWord, ctx: &PrecisionCtx) -> Result<Estimate> {
    ctx.validate()?;
    if !w.is_admissible() {
        return Err(Error::NotAdmissible(format!("{w}: last entry must be at least 2")));
    }
    let prec = ctx.work();
    let level = w.level();
    let e = w.entries();
    let r = e.len();
    if r == 0 {
        return Ok(Estimate::one(ctx.precision));
    }
    let k_max = ctx.series_cutoff;
    let max_n = e.iter().map(|x| x.0).max().unwrap();
    // heads[j] = Σ over 0<k_1<⋯<k_j≤k of ∏ k_i^{-n_i}
    let mut heads: Vec<Float> = vec![Float::new(prec); r + 1];
    heads[0] = Float::with_val(prec, 1);
    let mut pows: Vec<Float> = vec![Float::new(prec); max_n as usize + 1];
    for k in 1..=k_max {
        let res = (k % level as u64) as u32;
        if !e.iter().any(|x| x.1 == res) {
            continue;
        }
        let inv = Float::with_val(prec, k).recip();
        pows[1] = inv.clone();
        for p in 2..=max_n as usize {
            pows[p] = Float::with_val(prec, &pows[p - 1] * &inv);
        }
        for j in (1..=r).rev() {
            if e[j - 1].1 == res {
                let t = Float::with_val(prec, &heads[j - 1] * &pows[e[j - 1].0 as usize]);
                heads[j] += t;
            }
        }
    }
    let x0 = Complex::with_val(prec, k_max);
    let mut total = heads[r].clone();
    let mut error = 0.0;
    for j in 0..r {
        // k_{j+1} starts just past K; later gaps only depend on residue differences.
        let mut prev = k_max as i64;
        let levels: Vec<TailLevel> = e[j..]
            .iter()
            .map(|&(n, a)| {
                let delta = first_offset(prev, a as i64, level);
                prev = a as i64;
                TailLevel { s: n, delta }
            })
            .collect();
        let c = nested_tail(&levels, level, ctx.tail_order as usize);
        let (tail, last) = eval_inverse_series(&c, &x0, prec);
        let head_mag = heads[j].to_f64().abs();
        total += Float::with_val(prec, &heads[j] * tail.real());
        error += head_mag * last;
    }
    error += ctx.rounding() * (1.0 + total.to_f64().abs());
    Ok(real_estimate(total, error, ctx.precision))
}

/// Iterated-integral points for a letter word read backwards, with
/// `y_a ↦ η^{-a}` and `x ↦ 0`.
fn letter_points(w: &LetterWord) -> Vec<Point> {
    let level = w.level();
    w.letters()
        .iter()
        .rev()
        .map(|l| match l {
            Letter::X => Point::Zero,
            Letter::Y(a) => Point::unit(level, -(*a as i64)),
        })
        .collect()
}

/// `L_⧢(w)`, the shuffle-type multiple L-value of a letter word that starts
/// with a `y`-letter and does not end in `y_0`.
pub fn mlv_sha_numeric(w: &LetterWord, ctx: &PrecisionCtx) -> Result<Estimate> {
    ctx.validate()?;
    if w.is_empty() {
        return Ok(Estimate::one(ctx.precision));
    }
    if !w.in_h1() {
        return Err(Error::NotInH1(w.to_string()));
    }
    if w.letters().last() == Some(&Letter::Y(0)) {
        return Err(Error::NotAdmissible(format!("{w} ends in y0")));
    }
    let ys = w.letters().iter().filter(|l| matches!(l, Letter::Y(_))).count();
    let g = g_at_one(&letter_points(w), w.level(), ctx.work());
    let v = if ys % 2 == 1 { -g } else { g };
    let error = ctx.rounding() * (w.len() as f64 + 1.0) * (1.0 + Float::with_val(53, v.abs_ref()).to_f64());
    Ok(Estimate::new(Complex::with_val(ctx.precision, v), error))
}

/// `L_∗(n; a) = Σ_{0<k_1<⋯<k_r} ∏ η^{a_i k_i} k_i^{-n_i}`, the harmonic-type
/// multiple L-value.
pub fn mlv_ast_numeric(w: &IndexWord, ctx: &PrecisionCtx) -> Result<Estimate> {
    ctx.validate()?;
    let e = w.entries();
    if e.is_empty() {
        return Ok(Estimate::one(ctx.precision));
    }
    let (n_last, a_last) = *e.last().unwrap();
    if n_last == 1 && a_last == 0 {
        return Err(Error::NotAdmissible(format!("{w} diverges")));
    }
    let level = w.level();
    // Li_{n_r..n_1}(η^{a_r}, …, η^{a_1}) = (-1)^r G(0^{n_r-1}, c_1, …; 1)
    // with c_j = η^{-(a_r + ⋯ + a_{r-j+1})}.
    let mut args = Vec::new();
    let mut acc = 0i64;
    for &(n, a) in e.iter().rev() {
        acc += a as i64;
        args.extend(std::iter::repeat(Point::Zero).take(n as usize - 1));
        args.push(Point::unit(level, -acc));
    }
    let g = g_at_one(&args, level, ctx.work());
    let v = if e.len() % 2 == 1 { -g } else { g };
    let error = ctx.rounding() * (args.len() as f64 + 1.0) * (1.0 + Float::with_val(53, v.abs_ref()).to_f64());
    Ok(Estimate::new(Complex::with_val(ctx.precision, v), error))
}

fn combine<W: crate::words::Word>(
    level_comb: &LinComb<W>,
    ctx: &PrecisionCtx,
    mut f: impl FnMut(&W) -> Result<Estimate>,
) -> Result<Estimate> {
    let mut acc = Estimate::zero(ctx.precision);
    for (w, c) in level_comb.iter() {
        let v = f(w)?;
        acc = acc.add(&v.scale(&c.to_complex(ctx.work())));
    }
    Ok(acc)
}

/// `ζ^⊔̃(w) = (L^{reg}_⧢ ∘ π ∘ ρ)(w)` at `T = 0`, defined for every index word.
pub fn zeta_tsha(w: &IndexWord, ctx: &PrecisionCtx) -> Result<Estimate> {
    combine(&tsha_letters(w)?, ctx, |v| mlv_sha_numeric(v, ctx))
}

fn tsha_letters(w: &IndexWord) -> Result<LinComb<LetterWord>> {
    shuffle_reg0(&LinComb::from_word(w.rho()).pi().to_letters())
}

/// `(L_∗ ∘ π)(w)`, a third route to `ζ(w)` for admissible words.
pub fn zeta_via_harmonic(w: &IndexWord, ctx: &PrecisionCtx) -> Result<Estimate> {
    if !w.is_admissible() {
        return Err(Error::NotAdmissible(w.to_string()));
    }
    combine(&LinComb::from_word(w.clone()).pi(), ctx, |v| mlv_ast_numeric(v, ctx))
}

/// Evaluates a linear combination of words term by term.
pub fn eval_comb<W: crate::words::Word>(
    u: &LinComb<W>,
    ctx: &PrecisionCtx,
    f: impl FnMut(&W) -> Result<Estimate>,
) -> Result<Estimate> {
    combine(u, ctx, f)
}

type Memo<W> = RwLock<BTreeMap<W, Estimate>>;

fn memo<W: Ord + Clone>(map: &Memo<W>, w: &W, f: impl FnOnce() -> Result<Estimate>) -> Result<Estimate> {
    if let Some(v) = map.read().unwrap().get(w) {
        return Ok(v.clone());
    }
    let v = f()?;
    map.write().unwrap().entry(w.clone()).or_insert_with(|| v.clone());
    Ok(v)
}

/// Memoised evaluator for a fixed context. Reads run concurrently;
/// insertions take the write lock. Values are deterministic, so a lost
/// insertion race only repeats work.
#[derive(Debug)]
pub struct ZetaCache {
    ctx: PrecisionCtx,
    plain: Memo<IndexWord>,
    regularised: Memo<IndexWord>,
    sha: Memo<LetterWord>,
    ast: Memo<IndexWord>,
}

impl ZetaCache {
    pub fn new(ctx: PrecisionCtx) -> Self {
        Self {
            ctx,
            plain: RwLock::default(),
            regularised: RwLock::default(),
            sha: RwLock::default(),
            ast: RwLock::default(),
        }
    }

    pub fn ctx(&self) -> &PrecisionCtx {
        &self.ctx
    }

    pub fn zeta(&self, w: &IndexWord) -> Result<Estimate> {
        memo(&self.plain, w, || zeta_numeric(w, &self.ctx))
    }

    pub fn mlv_sha(&self, w: &LetterWord) -> Result<Estimate> {
        memo(&self.sha, w, || mlv_sha_numeric(w, &self.ctx))
    }

    pub fn mlv_ast(&self, w: &IndexWord) -> Result<Estimate> {
        memo(&self.ast, w, || mlv_ast_numeric(w, &self.ctx))
    }

    pub fn zeta_tsha(&self, w: &IndexWord) -> Result<Estimate> {
        memo(&self.regularised, w, || combine(&tsha_letters(w)?, &self.ctx, |v| self.mlv_sha(v)))
    }

    pub fn zeta_via_harmonic(&self, w: &IndexWord) -> Result<Estimate> {
        if !w.is_admissible() {
            return Err(Error::NotAdmissible(w.to_string()));
        }
        combine(&LinComb::from_word(w.clone()).pi(), &self.ctx, |v| self.mlv_ast(v))
    }
}

/// `(-2πi/N)^k` at the given precision.
pub fn two_pi_i_power(level: u32, k: u32, prec: u32) -> Complex {
    let base = Complex::with_val(prec, (0, -polylog::pi(prec) * 2u32 / level));
    let mut out = Complex::with_val(prec, 1);
    for _ in 0..k {
        out *= &base;
    }
    out
}

/// Embeds an exact coefficient at the context precision.
pub fn embed(c: &CycloNum, ctx: &PrecisionCtx) -> Complex {
    c.to_complex(ctx.work())
}
