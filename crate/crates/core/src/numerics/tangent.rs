//! Mono- and multitangent functions of level N,
//! `Ψ(n; a; τ) = Σ_{m_1<⋯<m_r, m_i ≡ a_i} ∏ (τ + m_i)^{-n_i}`.
//!
//! Indices in `[-M, M]` are summed directly. Chains that leave that window
//! are completed with the same nested asymptotic tails as the MZVs, taken
//! at `M ± τ`.

use rug::ops::Pow;
use rug::{Complex, Float};

use super::polylog::pi;
use super::tails::{bernoulli, eval_inverse_series, nested_tail, TailLevel};
use super::{first_offset, Estimate, PrecisionCtx, ZetaCache};
use crate::cyclo::root_of_unity;
use crate::error::{Error, Result};
use crate::words::IndexWord;

fn check_tau(tau: &Complex) -> Result<()> {
    if *tau.imag() <= 0 {
        return Err(Error::InvalidInput(format!("τ = {}+{}i is not in the upper half plane", tau.real().to_f64(), tau.imag().to_f64())));
    }
    Ok(())
}

fn modulus(z: &Complex) -> f64 {
    Float::with_val(53, z.abs_ref()).to_f64()
}

/// Symmetric window `[-M, M]`, wide enough for the tail expansions to be
/// far inside their asymptotic regime.
fn window(level: u32, tau: &Complex) -> i64 {
    128 * level as i64 + 4 * modulus(tau).ceil() as i64
}

fn tail(levels: &[TailLevel], level: u32, x0: &Complex, ctx: &PrecisionCtx) -> (Complex, f64) {
    let c = nested_tail(levels, level, ctx.tail_order as usize);
    eval_inverse_series(&c, x0, ctx.work())
}

/// `Σ_{m_1 < ⋯ < m_i < -M}` over `entries`, read through `m = -k`.
fn left_tail(entries: &[(u32, i64)], level: u32, tau: &Complex, m: i64, ctx: &PrecisionCtx) -> (Complex, f64) {
    let prec = ctx.work();
    if entries.is_empty() {
        return (Complex::with_val(prec, 1), 0.0);
    }
    let mut prev = m;
    let levels: Vec<TailLevel> = entries
        .iter()
        .rev()
        .map(|&(n, a)| {
            let delta = first_offset(prev, -a, level);
            prev = -a;
            TailLevel { s: n, delta }
        })
        .collect();
    let x0 = Complex::with_val(prec, Complex::with_val(prec, m) - tau);
    let (v, err) = tail(&levels, level, &x0, ctx);
    let weight: u32 = entries.iter().map(|e| e.0).sum();
    (if weight % 2 == 1 { -v } else { v }, err)
}

/// `Σ_{M < m_j < ⋯ < m_r}` over `entries`.
fn right_tail(entries: &[(u32, i64)], level: u32, tau: &Complex, m: i64, ctx: &PrecisionCtx) -> (Complex, f64) {
    let prec = ctx.work();
    if entries.is_empty() {
        return (Complex::with_val(prec, 1), 0.0);
    }
    let mut prev = m;
    let levels: Vec<TailLevel> = entries
        .iter()
        .map(|&(n, a)| {
            let delta = first_offset(prev, a, level);
            prev = a;
            TailLevel { s: n, delta }
        })
        .collect();
    let x0 = Complex::with_val(prec, Complex::with_val(prec, m) + tau);
    tail(&levels, level, &x0, ctx)
}

/// `mids[i][t]`: chain sum of `entries[i..i+t]` with every index in `[-M, M]`.
fn window_chains(entries: &[(u32, i64)], level: u32, tau: &Complex, m_cut: i64, prec: u32) -> Vec<Vec<Complex>> {
    let r = entries.len();
    let max_n = entries.iter().map(|e| e.0).max().unwrap_or(1) as usize;
    let mut mids: Vec<Vec<Complex>> =
        (0..r).map(|i| (0..=r - i).map(|t| Complex::with_val(prec, if t == 0 { 1 } else { 0 })).collect()).collect();
    let mut pows = vec![Complex::new(prec); max_n + 1];
    for m in -m_cut..=m_cut {
        let res = m.rem_euclid(level as i64);
        if !entries.iter().any(|e| e.1.rem_euclid(level as i64) == res) {
            continue;
        }
        let z = Complex::with_val(prec, tau + Complex::with_val(prec, m));
        pows[1] = Complex::with_val(prec, z.recip_ref());
        for p in 2..=max_n {
            pows[p] = Complex::with_val(prec, &pows[p - 1] * &pows[1]);
        }
        for (i, row) in mids.iter_mut().enumerate() {
            for t in (1..row.len()).rev() {
                let (n, a) = entries[i + t - 1];
                if a.rem_euclid(level as i64) == res {
                    let add = Complex::with_val(prec, &row[t - 1] * &pows[n as usize]);
                    row[t] += add;
                }
            }
        }
    }
    mids
}

fn normalise(ns: &[u32], residues: &[i64]) -> Result<Vec<(u32, i64)>> {
    if ns.len() != residues.len() {
        return Err(Error::InvalidInput("index rows differ in length".into()));
    }
    Ok(ns.iter().copied().zip(residues.iter().copied()).collect())
}

/// Direct evaluation of `Ψ(n⃗; a⃗; τ)` for `n_i ≥ 2`.
pub fn psi_multi_numeric(ns: &[u32], residues: &[i64], level: u32, tau: &Complex, ctx: &PrecisionCtx) -> Result<Estimate> {
    ctx.validate()?;
    check_tau(tau)?;
    let entries = normalise(ns, residues)?;
    if let Some(&(n, _)) = entries.iter().find(|e| e.0 < 2) {
        return Err(Error::NotAdmissible(format!("multitangent entry {n} below 2")));
    }
    let prec = ctx.work();
    let r = entries.len();
    if r == 0 {
        return Ok(Estimate::one(ctx.precision));
    }
    let m_cut = window(level, tau);
    let mids = window_chains(&entries, level, tau, m_cut, prec);
    let lefts: Vec<(Complex, f64)> = (0..=r).map(|i| left_tail(&entries[..i], level, tau, m_cut, ctx)).collect();
    let rights: Vec<(Complex, f64)> = (0..=r).map(|j| right_tail(&entries[j..], level, tau, m_cut, ctx)).collect();
    let mut total = Complex::new(prec);
    let mut error = 0.0;
    for i in 0..=r {
        for j in i..=r {
            let mid = if j == i { Complex::with_val(prec, 1) } else { mids[i][j - i].clone() };
            let (l, le) = &lefts[i];
            let (rv, re) = &rights[j];
            let term = Complex::with_val(prec, &mid * l) * rv;
            let mm = modulus(&mid);
            error += mm * (le * modulus(rv) + re * modulus(l) + le * re);
            total += term;
        }
    }
    error += ctx.rounding() * (1.0 + modulus(&total)) * (2 * m_cut) as f64;
    Ok(Estimate::new(Complex::with_val(ctx.precision, total), error))
}

/// `ψ(y) ~ log y - 1/(2y) - Σ_k B_{2k}/(2k y^{2k})` for large `|y|`.
fn digamma_asymptotic(y: &Complex, terms: usize, prec: u32) -> (Complex, f64) {
    let bern = bernoulli(2 * terms);
    let inv = Complex::with_val(prec, y.recip_ref());
    let inv2 = Complex::with_val(prec, inv.square_ref());
    let mut acc = Complex::with_val(prec, y.ln_ref());
    acc -= Complex::with_val(prec, &inv / 2u32);
    let mut p = inv2.clone();
    let mut last = 0.0;
    for k in 1..=terms {
        let c = Float::with_val(prec, &bern[2 * k]) / (2 * k as u32);
        let t = Complex::with_val(prec, &p * &c);
        last = modulus(&t);
        acc -= t;
        p *= &inv2;
    }
    (acc, last)
}

/// `Ψ(n; a; τ)`; for `n = 1` the symmetric limit over `|m| < M`.
pub fn psi_mono_numeric(n: u32, a: i64, level: u32, tau: &Complex, ctx: &PrecisionCtx) -> Result<Estimate> {
    ctx.validate()?;
    check_tau(tau)?;
    if n == 0 {
        return Err(Error::InvalidInput("monotangent weight must be positive".into()));
    }
    if n >= 2 {
        return psi_multi_numeric(&[n], &[a], level, tau, ctx);
    }
    let prec = ctx.work();
    let m_cut = window(level, tau);
    let mids = window_chains(&[(1, a)], level, tau, m_cut, prec);
    // Σ_{m>M} 1/(m+τ) - Σ_{k>M, k≡-a} 1/(k-τ) = (ψ(y₋) - ψ(y₊))/N
    let n_f = level as i64;
    let d_plus = first_offset(m_cut, a, level) as i64;
    let d_minus = first_offset(m_cut, -a, level) as i64;
    let y_plus = Complex::with_val(prec, (tau + Complex::with_val(prec, m_cut + d_plus)) / n_f);
    let y_minus = Complex::with_val(prec, (Complex::with_val(prec, m_cut + d_minus) - tau) / n_f);
    let terms = ctx.tail_order as usize;
    let (p_minus, e_minus) = digamma_asymptotic(&y_minus, terms, prec);
    let (p_plus, e_plus) = digamma_asymptotic(&y_plus, terms, prec);
    let tail = Complex::with_val(prec, (p_minus - p_plus) / n_f);
    let total = Complex::with_val(prec, &mids[0][1] + &tail);
    let error = (e_minus + e_plus) / level as f64 + ctx.rounding() * (1.0 + modulus(&total)) * (2 * m_cut) as f64;
    Ok(Estimate::new(Complex::with_val(ctx.precision, total), error))
}

/// The q-series side:
/// `Ψ(n; a; Nτ') = (-2πi/N)^n Σ_{c>0} c^{n-1} η^{ac} q^c/(n-1)! - δ_{n,1} πi/N`
/// with `q = e^{2πiτ'}`, evaluated at `τ' = τ/N`.
pub fn psi_mono_qseries(n: u32, a: i64, level: u32, tau: &Complex, ctx: &PrecisionCtx) -> Result<Estimate> {
    ctx.validate()?;
    check_tau(tau)?;
    if n == 0 {
        return Err(Error::InvalidInput("monotangent weight must be positive".into()));
    }
    let prec = ctx.work();
    let two_pi = Float::with_val(prec, pi(prec) * 2u32);
    let expo = Complex::with_val(prec, (0, &two_pi)) * tau / level;
    let q = Complex::with_val(prec, expo.exp_ref());
    let qmag = modulus(&q);
    let target = -(ctx.precision as f64) - 16.0;
    let mut sum = Complex::new(prec);
    let mut qc = Complex::with_val(prec, 1);
    let mut c = 1u64;
    loop {
        qc *= &q;
        let eta = root_of_unity(level, a * c as i64 % level as i64, prec);
        let coeff = Float::with_val(prec, c).pow(n - 1);
        sum += Complex::with_val(prec, &qc * &eta) * coeff;
        let bound = (n as f64 - 1.0) * (c as f64).log2() + c as f64 * qmag.log2();
        if c > 2 * n as u64 && bound < target {
            break;
        }
        c += 1;
    }
    let mut pref = super::two_pi_i_power(level, n, prec);
    for k in 2..n {
        pref /= k;
    }
    let mut total = Complex::with_val(prec, &pref * &sum);
    if n == 1 {
        total -= Complex::with_val(prec, (0, pi(prec) / level));
    }
    let error = ctx.rounding() * (1.0 + modulus(&total)) * c as f64;
    Ok(Estimate::new(Complex::with_val(ctx.precision, total), error))
}

/// Compositions `k` of `Σ n_i` with `k_p ≥ n_p` for `p ≠ q` and `k_q ≥ min_kq`.
fn reduction_compositions(ns: &[u32], q: usize, min_kq: u32) -> Vec<Vec<u32>> {
    fn spread(k: &mut Vec<u32>, ns: &[u32], others: &[usize], left: u32, out: &mut Vec<Vec<u32>>) {
        match others.split_first() {
            None if left == 0 => out.push(k.clone()),
            None => {}
            Some((&p, rest)) => {
                for e in 0..=left {
                    k[p] = ns[p] + e;
                    spread(k, ns, rest, left - e, out);
                }
            }
        }
    }
    let others: Vec<usize> = (0..ns.len()).filter(|&p| p != q).collect();
    let mut out = Vec::new();
    for kq in min_kq.max(1)..=ns[q] {
        let mut k = ns.to_vec();
        k[q] = kq;
        spread(&mut k, ns, &others, ns[q] - kq, &mut out);
    }
    out
}

/// The partial-fraction reduction of a multitangent to monotangents,
/// `Σ_q Σ_k ± ∏ C(k_p-1, n_p-1) ζ(left) ζ(right) Ψ(k_q; a_q; τ)`, keeping the
/// terms with `k_q ≥ min_kq`.
pub fn multitangent_via_monotangents(
    w: &IndexWord,
    tau: &Complex,
    min_kq: u32,
    zetas: &ZetaCache,
) -> Result<Estimate> {
    let ctx = zetas.ctx();
    let level = w.level();
    let ns = w.ns();
    if ns.iter().any(|&n| n < 2) {
        return Err(Error::NotAdmissible(format!("{w}: multitangent entries must be at least 2")));
    }
    let a: Vec<i64> = w.residues().iter().map(|&x| x as i64).collect();
    let r = ns.len();
    if r == 0 {
        return Ok(Estimate::one(ctx.precision));
    }
    let prec = ctx.work();
    let total_n: u32 = ns.iter().sum();
    let mut acc = Estimate::zero(ctx.precision);
    for q in 0..r {
        let mut monos: Vec<Option<Estimate>> = vec![None; ns[q] as usize + 1];
        for k in reduction_compositions(&ns, q, min_kq) {
            let mut binom = rug::Integer::from(1);
            for p in (0..r).filter(|&p| p != q) {
                binom *= rug::Integer::from(rug::Integer::binomial_u(k[p] - 1, ns[p] - 1));
            }
            let sign_exp = total_n + ns[q] + k[q + 1..].iter().sum::<u32>();
            let left: Vec<(u32, i64)> = (0..q).rev().map(|p| (k[p], a[q] - a[p])).collect();
            let right: Vec<(u32, i64)> = (q + 1..r).map(|p| (k[p], a[p] - a[q])).collect();
            let zl = zetas.zeta(&IndexWord::new(level, &left)?)?;
            let zr = zetas.zeta(&IndexWord::new(level, &right)?)?;
            let kq = k[q] as usize;
            if monos[kq].is_none() {
                monos[kq] = Some(psi_mono_numeric(k[q], a[q], level, tau, ctx)?);
            }
            let mono = monos[kq].as_ref().unwrap();
            let mut c = Complex::with_val(prec, &binom);
            if sign_exp % 2 == 1 {
                c = -c;
            }
            acc = acc.add(&zl.mul(&zr).mul(mono).scale(&c));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx { precision: 128, series_cutoff: 2000, tail_order: 24 }
    }

    fn i_times(y: f64) -> Complex {
        Complex::with_val(160, (0, y))
    }

    #[test]
    fn cotangent_square() {
        // Σ_m (τ+m)^{-2} = π²/sin²(πτ)
        let tau = i_times(1.0);
        let v = psi_mono_numeric(2, 0, 1, &tau, &ctx()).unwrap();
        let p = pi(160);
        let s = Complex::with_val(160, &tau * &p).sin();
        let exact = Complex::with_val(160, p.square() / s.square());
        assert!(v.distance(&Estimate::exact(exact)) < 1e-25);
    }

    #[test]
    fn cotangent() {
        // lim Σ_{|m|<M} 1/(τ+m) = π cot(πτ)
        let tau = Complex::with_val(160, (0.3, 0.7));
        let v = psi_mono_numeric(1, 0, 1, &tau, &ctx()).unwrap();
        let p = pi(160);
        let z = Complex::with_val(160, &tau * &p);
        let exact = Complex::with_val(160, z.cos_ref()) / Complex::with_val(160, z.sin_ref()) * &p;
        assert!(v.distance(&Estimate::exact(exact)) < 1e-25);
    }

    #[test]
    fn both_sides_of_the_monotangent_expansion() {
        for level in 1..=3u32 {
            for n in 1..=4u32 {
                for a in 0..level as i64 {
                    let tau = Complex::with_val(160, (0.5, 1.5));
                    let lhs = psi_mono_numeric(n, a, level, &tau, &ctx()).unwrap();
                    let rhs = psi_mono_qseries(n, a, level, &tau, &ctx()).unwrap();
                    assert!(lhs.distance(&rhs) < 1e-20, "n={n} a={a} N={level}");
                }
            }
        }
    }
}
