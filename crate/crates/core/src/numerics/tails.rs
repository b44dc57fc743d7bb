//! Asymptotic expansions of nested congruence tails.
//!
//! For levels `(s_1, δ_1), …, (s_r, δ_r)` the tail
//! `Σ ∏ k_i^{-s_i}` over `k_1 = x + δ_1 + N j_1`, `k_{i+1} = k_i + δ_{i+1} + N j_{i+1}`
//! (all `j ≥ 0`) has an asymptotic expansion `Σ_p c_p x^{-p}` with rational
//! coefficients. Each level applies the Hurwitz expansion
//! `Σ_j (y + j)^{-s} ~ y^{1-s}/(s-1) + y^{-s}/2 + Σ_k B_{2k}/(2k)! (s)_{2k-1} y^{-s-2k+1}`
//! and re-expands `(x + δ)^{-e}` in powers of `1/x`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct TailLevel {
    pub s: u32,
    pub delta: u32,
}

/// `B_0, …, B_n` with `B_1 = -1/2`.
pub(crate) fn bernoulli(n: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut b = cache.lock().unwrap();
    while b.len() <= n {
        let m = b.len() as u32;
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Rational::new();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from(bk * Integer::from(Integer::binomial_u(m + 1, k as u32)));
        }
        b.push(-acc / Integer::from(m + 1));
    }
    b[..=n].to_vec()
}

fn binom(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// Expansion of `Σ_{j≥0} (x + δ + N j)^{-s}` up to `x^{-order}`.
fn progression(s: u32, delta: u32, level: u32, order: usize) -> Vec<Rational> {
    assert!(s >= 2, "progression tail needs s ≥ 2");
    let bern = bernoulli(order + 2);
    let mut terms: Vec<(u32, Rational)> = Vec::new();
    terms.push((s - 1, Rational::from((1, level * (s - 1)))));
    terms.push((s, Rational::from((1, 2))));
    let mut k = 1u32;
    while (s + 2 * k - 1) as usize <= order {
        let mut c = bern[2 * k as usize].clone();
        c /= Integer::from(Integer::factorial(2 * k));
        for t in 0..(2 * k - 1) {
            c *= s + t;
        }
        c *= Integer::from(level).pow(2 * k - 1);
        terms.push((s + 2 * k - 1, c));
        k += 1;
    }
    let mut out = vec![Rational::new(); order + 1];
    for (e, c) in terms.into_iter().filter(|t| t.0 as usize <= order) {
        // (x + δ)^{-e} = Σ_l (-1)^l C(e+l-1, l) δ^l x^{-e-l}
        let mut dpow = Integer::from(1);
        for l in 0..=(order.saturating_sub(e as usize)) {
            let mut t = Rational::from(&c * binom(e + l as u32 - 1, l as u32));
            t *= &dpow;
            if l % 2 == 1 {
                t = -t;
            }
            out[e as usize + l] += t;
            dpow *= delta;
        }
    }
    out
}

fn expansion_cache() -> &'static Mutex<HashMap<(Vec<TailLevel>, u32, usize), Vec<Rational>>> {
    static CACHE: OnceLock<Mutex<HashMap<(Vec<TailLevel>, u32, usize), Vec<Rational>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients `c_0, …, c_order` of the nested tail expansion. The last
/// level must have `s ≥ 2`; earlier levels may have `s = 1`.
pub(crate) fn nested_tail(levels: &[TailLevel], level: u32, order: usize) -> Vec<Rational> {
    let key = (levels.to_vec(), level, order);
    if let Some(c) = expansion_cache().lock().unwrap().get(&key) {
        return c.clone();
    }
    let mut c = vec![Rational::new(); order + 1];
    c[0] = Rational::from(1);
    for lv in levels.iter().rev() {
        let mut next = vec![Rational::new(); order + 1];
        for (p, cp) in c.iter().enumerate() {
            if *cp == 0 {
                continue;
            }
            let s = lv.s + p as u32;
            if s as usize > order + 1 {
                break;
            }
            for (i, t) in progression(s, lv.delta, level, order).into_iter().enumerate() {
                if t != 0 {
                    next[i] += Rational::from(cp * &t);
                }
            }
        }
        c = next;
    }
    expansion_cache().lock().unwrap().insert(key, c.clone());
    c
}

/// `Σ_p c_p x^{-p}` together with the size of the last retained term, which
/// serves as the truncation estimate.
pub(crate) fn eval_inverse_series(c: &[Rational], x: &Complex, prec: u32) -> (Complex, f64) {
    let u = Complex::with_val(prec, x.recip_ref());
    let mut acc = Complex::new(prec);
    for cp in c.iter().rev() {
        acc *= &u;
        acc += Float::with_val(prec, cp);
    }
    let umag = Float::with_val(53, u.abs_ref()).to_f64();
    let last = c
        .iter()
        .enumerate()
        .rev()
        .find(|(_, cp)| **cp != 0)
        .map(|(p, cp)| cp.to_f64().abs() * umag.powi(p as i32))
        .unwrap_or(0.0);
    (acc, last)
}
