//! Iterated integrals `G(z_1, …, z_w; y)` with `z_i ∈ {0} ∪ μ_N ∪ (1 - μ_N)`.
//!
//! `G(0^{m_1-1}, c_1, …, 0^{m_k-1}, c_k; y) = (-1)^k Li_{m_1,…,m_k}(y/c_1, c_1/c_2, …, c_{k-1}/c_k)`
//! converges geometrically once `|y| < |c_j|` for every `j`. Values at `y = 1`
//! are reached through the Hölder convolution
//! `G(z_1,…,z_w; 1) = Σ_k (-1)^k G(1-z_k,…,1-z_1; 1-λ) G(z_{k+1},…,z_w; λ)`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::cyclo::root_of_unity;

/// A point of the alphabet, kept symbolic so that exact zeros stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Point {
    Zero,
    /// `η^e`.
    Unit(u32),
    /// `1 - η^e` with `e ≠ 0`.
    OneMinusUnit(u32),
}

impl Point {
    pub(crate) fn unit(level: u32, e: i64) -> Self {
        Point::Unit(e.rem_euclid(level as i64) as u32)
    }

    fn one_minus(self) -> Self {
        match self {
            Point::Zero => Point::Unit(0),
            Point::Unit(0) => Point::Zero,
            Point::Unit(e) => Point::OneMinusUnit(e),
            Point::OneMinusUnit(e) => Point::Unit(e),
        }
    }

    fn value(self, level: u32, prec: u32) -> Complex {
        match self {
            Point::Zero => Complex::new(prec),
            Point::Unit(e) => root_of_unity(level, e as i64, prec),
            Point::OneMinusUnit(e) => Complex::with_val(prec, 1) - root_of_unity(level, e as i64, prec),
        }
    }
}

/// Smallest modulus of a nonzero `1 - η^e`, capped at one.
fn min_gap(level: u32) -> f64 {
    if level <= 6 {
        1.0
    } else {
        (2.0 * (std::f64::consts::PI / level as f64).sin()).min(1.0)
    }
}

/// `Li_{m_1..m_k}(x_1..x_k) = Σ_{i_1 > ⋯ > i_k ≥ 1} ∏ x_j^{i_j}/i_j^{m_j}`, summed to `terms`.
fn nested_li(ms: &[u32], xs: &[Complex], terms: usize, prec: u32) -> Complex {
    let k = ms.len();
    // partial[j] holds the sum over i_j < ⋯ < current bound for levels j..k.
    let mut partial: Vec<Complex> = vec![Complex::new(prec); k + 1];
    partial[k] = Complex::with_val(prec, 1);
    let mut pow: Vec<Complex> = vec![Complex::with_val(prec, 1); k];
    for n in 1..=terms {
        let inv = Float::with_val(prec, n).recip();
        // Outer levels first so that each update sees the previous bound.
        for j in 0..k {
            pow[j] *= &xs[j];
            let t = Complex::with_val(prec, &pow[j] * Float::with_val(prec, (&inv).pow(ms[j])));
            let inner = partial[j + 1].clone();
            partial[j] += t * inner;
        }
    }
    partial.swap_remove(0)
}

/// `G(args; y)` for real `0 < y < 1` and a nonzero last argument, by the
/// multiple polylogarithm series.
fn g_series(args: &[Point], y: &Float, level: u32, prec: u32) -> Complex {
    if args.is_empty() {
        return Complex::with_val(prec, 1);
    }
    debug_assert!(args.last() != Some(&Point::Zero));
    let mut ms = Vec::new();
    let mut cs = Vec::new();
    let mut m = 1;
    for p in args {
        if *p == Point::Zero {
            m += 1;
        } else {
            ms.push(m);
            cs.push(p.value(level, prec));
            m = 1;
        }
    }
    let y = Complex::with_val(prec, (y, 0));
    let mut xs = Vec::with_capacity(cs.len());
    xs.push(Complex::with_val(prec, &y / &cs[0]));
    for j in 1..cs.len() {
        xs.push(Complex::with_val(prec, &cs[j - 1] / &cs[j]));
    }
    let ratio = cs
        .iter()
        .map(|c| Float::with_val(53, y.abs_ref()).to_f64() / Float::with_val(53, c.abs_ref()).to_f64())
        .fold(0.0f64, f64::max);
    let bits = prec as f64 + 24.0 + 4.0 * ms.len() as f64;
    let terms = (bits / -ratio.log2()).ceil() as usize + 8;
    let li = nested_li(&ms, &xs, terms, prec);
    if cs.len() % 2 == 1 {
        -li
    } else {
        li
    }
}

/// `G(args; 1)`; requires `args[0] ≠ 1` and a nonzero last argument.
pub(crate) fn g_at_one(args: &[Point], level: u32, prec: u32) -> Complex {
    let w = args.len();
    if w == 0 {
        return Complex::with_val(prec, 1);
    }
    debug_assert!(args[0] != Point::Unit(0) && args[w - 1] != Point::Zero);
    let work = prec + 16 + 2 * w as u32;
    let s = min_gap(level);
    let lambda = if s >= 1.0 { Float::with_val(work, 0.5) } else { Float::with_val(work, 1.0 / (1.0 + s)) };
    let comp = Float::with_val(work, 1 - &lambda);
    let mut acc = Complex::new(work);
    for k in 0..=w {
        let left: Vec<Point> = args[..k].iter().rev().map(|p| p.one_minus()).collect();
        let lhs = g_series(&left, &comp, level, work);
        let rhs = g_series(&args[k..], &lambda, level, work);
        let term = lhs * rhs;
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Complex::with_val(prec, acc)
}

pub(crate) fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}
