//! Exact truncated q-series: multiple divisor functions `ĝ`, the generating
//! series `H`, and the shuffle-regularised `ĝ^⊔̃`.
//!
//! Every series here is normalised: the factor `(-2πi/N)^{weight}` that turns
//! `ĝ` into the divisor function `g` is not applied, only recorded as a weight
//! tag. Coefficients are accumulated in the group ring `Q[Z/N]`, one integer
//! vector per power of `η`, and folded into `Q(η)` at the end.

use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::words::IndexWord;

/// `c_0 + c_1 q + ⋯ + c_M q^M` with coefficients in `Q(η_N)`.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    level: u32,
    coeffs: Vec<CycloNum>,
}

impl QSeries {
    pub fn zero(level: u32, order: usize) -> Self {
        Self { level, coeffs: vec![CycloNum::zero(level); order + 1] }
    }

    pub fn one(level: u32, order: usize) -> Self {
        let mut s = Self::zero(level, order);
        s.coeffs[0] = CycloNum::one(level);
        s
    }

    pub fn from_coeffs(level: u32, coeffs: Vec<CycloNum>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a q-series needs at least one coefficient".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| c.level() != level) {
            return Err(Error::LevelMismatch(level, c.level()));
        }
        Ok(Self { level, coeffs })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// The truncation order `M`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CycloNum] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> &CycloNum {
        &self.coeffs[m]
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|m| &self.coeffs[m] + &other.coeffs[m]).collect();
        Ok(Self { level: self.level, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|m| &self.coeffs[m] - &other.coeffs[m]).collect();
        Ok(Self { level: self.level, coeffs })
    }

    /// Truncated product; the result has the smaller of the two orders.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order().min(other.order());
        let mut coeffs = vec![CycloNum::zero(self.level); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Ok(Self { level: self.level, coeffs })
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        Self { level: self.level, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `f(q) ↦ f(q^k)`, keeping the order.
    pub fn dilate(&self, k: usize) -> Self {
        let mut out = Self::zero(self.level, self.order());
        for (m, c) in self.coeffs.iter().enumerate() {
            if m * k <= self.order() {
                out.coeffs[m * k] = c.clone();
            }
        }
        out
    }

    /// Reinterprets a rational series at another level.
    pub fn with_level(&self, level: u32) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                c.as_rational()
                    .map(|q| CycloNum::from_rational(level, q.clone()))
                    .ok_or_else(|| Error::InvalidInput("series has irrational coefficients".into()))
            })
            .collect::<Result<_>>()?;
        Ok(Self { level, coeffs })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.level == other.level {
            Ok(())
        } else {
            Err(Error::LevelMismatch(self.level, other.level))
        }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| format!("({c})q^{m}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0 + O(q^{})", self.order() + 1)
        } else {
            write!(f, "{} + O(q^{})", parts.join(" + "), self.order() + 1)
        }
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A normalised divisor series `ĝ` together with its weight tag.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalizedDivisor {
    pub weight: u32,
    pub series: QSeries,
}

impl NormalizedDivisor {
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        Ok(Self { weight: self.weight + other.weight, series: self.series.checked_mul(&other.series)? })
    }
}

/// Series with coefficients in `Q[Z/N]`: `rows[m][k]` multiplies `η^k q^m`.
#[derive(Clone)]
struct GroupSeries {
    level: usize,
    rows: Vec<Vec<Integer>>,
}

impl GroupSeries {
    fn zero(level: u32, order: usize) -> Self {
        Self { level: level as usize, rows: vec![vec![Integer::new(); level as usize]; order + 1] }
    }

    fn add_scaled(&mut self, other: &Self, c: &Integer, root: usize) {
        for (dst, src) in self.rows.iter_mut().zip(&other.rows) {
            for (k, v) in src.iter().enumerate() {
                if *v != 0 {
                    dst[(k + root) % self.level] += Integer::from(v * c);
                }
            }
        }
    }

    fn to_cyclo(&self, denom: &Integer) -> Vec<CycloNum> {
        let level = self.level as u32;
        let roots: Vec<CycloNum> = (0..level).map(|k| CycloNum::root_power(level, k as i64)).collect();
        self.rows
            .iter()
            .map(|row| {
                let mut acc = CycloNum::zero(level);
                for (k, v) in row.iter().enumerate() {
                    if *v != 0 {
                        acc = &acc + &roots[k].scale(&Rational::from((v.clone(), denom.clone())));
                    }
                }
                acc
            })
            .collect()
    }
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `ĝ(w)`: `[q^m]` is the sum over `0 < d_1 < ⋯ < d_r` and `c_i > 0` with
/// `Σ c_i d_i = m` of `∏ η^{a_i c_i} c_i^{n_i-1}/(n_i-1)!`.
pub fn g_hat(w: &IndexWord, order: usize) -> NormalizedDivisor {
    let level = w.level();
    let r = w.depth();
    // stage[i] collects the sums over d_1 < ⋯ < d_i ≤ current d.
    let mut stage: Vec<GroupSeries> = (0..=r).map(|_| GroupSeries::zero(level, order)).collect();
    stage[0].rows[0][0] = Integer::from(1);
    let e = w.entries();
    for d in 1..=order {
        for i in (1..=r).rev() {
            let (n, a) = e[i - 1];
            let (lower, upper) = stage.split_at_mut(i);
            let src = &lower[i - 1];
            let dst = &mut upper[0];
            let mut c = 1;
            while c * d <= order {
                let weight = Integer::from(c).pow(n - 1);
                let root = (a as usize * c) % level as usize;
                for m in 0..=order - c * d {
                    for (k, v) in src.rows[m].iter().enumerate() {
                        if *v != 0 {
                            dst.rows[m + c * d][(k + root) % level as usize] += Integer::from(v * &weight);
                        }
                    }
                }
                c += 1;
            }
        }
    }
    let denom: Integer = e.iter().map(|&(n, _)| factorial(n - 1)).product();
    let series = QSeries { level, coeffs: stage[r].to_cyclo(&denom) };
    NormalizedDivisor { weight: w.weight(), series }
}

/// One factor `e^{d z} η^{a d} (q^d/(1-q^d))^n` of the generating series `H`,
/// with `z` an integer combination of the formal variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HLetter {
    pub n: u32,
    pub a: u32,
    pub z: Vec<i64>,
}

/// Polynomial-in-x truncated series: exponent tuple to q-series.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiSeries {
    pub bounds: Vec<u32>,
    pub terms: BTreeMap<Vec<u32>, QSeries>,
}

impl MultiSeries {
    pub fn vars(&self) -> usize {
        self.bounds.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&QSeries> {
        self.terms.get(exps)
    }
}

/// Enumerates `0 < d_1 < ⋯ < d_m` with `Σ n_j d_j ≤ order`.
fn for_each_tuple(ns: &[u32], order: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(ns: &[u32], j: usize, prev: usize, budget: usize, ds: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if j == ns.len() {
            f(ds);
            return;
        }
        let mut d = prev + 1;
        loop {
            // The cheapest completion puts the remaining d's at d, d+1, ….
            let need: usize = ns[j..].iter().enumerate().map(|(l, &n)| n as usize * (d + l)).sum();
            if need > budget {
                break;
            }
            ds.push(d);
            rec(ns, j + 1, d, budget - ns[j] as usize * d, ds, f);
            ds.pop();
            d += 1;
        }
    }
    rec(ns, 0, 0, order, &mut Vec::new(), f);
}

/// `∏ (q^{d_j}/(1-q^{d_j}))^{n_j}` as integer coefficients up to `order`.
fn geometric_product(ns: &[u32], ds: &[usize], order: usize) -> Vec<Integer> {
    let shift: usize = ns.iter().zip(ds).map(|(&n, &d)| n as usize * d).sum();
    let mut s = vec![Integer::new(); order + 1];
    s[shift] = Integer::from(1);
    for (&n, &d) in ns.iter().zip(ds) {
        // Multiply by (1 - q^d)^{-n} = Σ_c C(c+n-1, n-1) q^{cd}.
        let mut next = vec![Integer::new(); order + 1];
        for m in shift..=order {
            if s[m] == 0 {
                continue;
            }
            let mut c = 0;
            while m + c * d <= order {
                let b = Integer::from(Integer::binomial_u((c + n as usize - 1) as u32, n - 1));
                next[m + c * d] += Integer::from(&s[m] * &b);
                c += 1;
            }
        }
        s = next;
    }
    s
}

/// Accumulates `Σ_d ∏_i D_i^{e_i} η^{Σ a_j d_j} ∏ (q^{d_j}/(1-q^{d_j}))^{n_j}`
/// for each requested exponent tuple `e`, where `D_i = Σ_j d_j z_{j,i}`.
fn accumulate_h(letters: &[HLetter], level: u32, order: usize, monomials: &[Vec<u32>]) -> Vec<GroupSeries> {
    let ns: Vec<u32> = letters.iter().map(|l| l.n).collect();
    let vars = letters.first().map_or(0, |l| l.z.len());
    let mut acc: Vec<GroupSeries> = monomials.iter().map(|_| GroupSeries::zero(level, order)).collect();
    for_each_tuple(&ns, order, &mut |ds| {
        let s = geometric_product(&ns, ds, order);
        let root = letters.iter().zip(ds).map(|(l, &d)| l.a as usize * d).sum::<usize>() % level as usize;
        let big: Vec<Integer> = (0..vars)
            .map(|i| letters.iter().zip(ds).map(|(l, &d)| Integer::from(l.z[i] * d as i64)).sum())
            .collect();
        for (slot, e) in acc.iter_mut().zip(monomials) {
            let mut c = Integer::from(1);
            for (dv, &k) in big.iter().zip(e) {
                c *= Integer::from(dv.pow(k));
            }
            if c == 0 {
                continue;
            }
            for (m, v) in s.iter().enumerate() {
                if *v != 0 {
                    slot.rows[m][root] += Integer::from(v * &c);
                }
            }
        }
    });
    acc
}

fn box_monomials(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|e| {
                (0..=b).map(move |k| {
                    let mut e = e.clone();
                    e.push(k);
                    e
                })
            })
            .collect();
    }
    out
}

/// The generating series `H` truncated to `x`-degrees within `bounds` and to
/// `q`-order `order`.
pub fn h_hat(letters: &[HLetter], level: u32, order: usize, bounds: &[u32]) -> Result<MultiSeries> {
    for l in letters {
        if l.z.len() != bounds.len() {
            return Err(Error::InvalidInput("variable count differs from the bounds".into()));
        }
        if l.n == 0 {
            return Err(Error::InvalidIndex("letter with n = 0".into()));
        }
    }
    let monomials = box_monomials(bounds);
    let acc = accumulate_h(letters, level, order, &monomials);
    let mut terms = BTreeMap::new();
    for (e, g) in monomials.into_iter().zip(acc) {
        let denom: Integer = e.iter().map(|&k| factorial(k)).product();
        let coeffs = g.to_cyclo(&denom);
        if coeffs.iter().any(|c| !c.is_zero()) {
            terms.insert(e, QSeries { level, coeffs });
        }
    }
    Ok(MultiSeries { bounds: bounds.to_vec(), terms })
}

fn compositions(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=r {
        for mut rest in compositions(r - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `ĝ^⊔̃(w)`: the coefficient of `x_1^{n_1-1} ⋯ x_r^{n_r-1}` in `g_⧢`, which is
/// `H ∘ exp` evaluated at the reversed differences of residues and variables.
pub fn g_sha_hat(w: &IndexWord, order: usize) -> NormalizedDivisor {
    let level = w.level();
    let r = w.depth();
    let e = w.entries();
    let target: Vec<u32> = e.iter().map(|&(n, _)| n - 1).collect();
    let mut total = GroupSeries::zero(level, order);
    let mut total_denom = Integer::from(1);
    let mut parts: Vec<(GroupSeries, Integer)> = Vec::new();
    for comp in compositions(r) {
        // Blocks of positions s..=t in the reversed-difference order map to
        // z = x_{r-s+1} - x_{r-t} and a = a_{r-s+1} - a_{r-t}, with x_0 = a_0 = 0.
        let mut letters = Vec::new();
        let mut s = 1;
        let mut weight = Integer::from(1);
        for &len in &comp {
            let t = s + len - 1;
            let mut z = vec![0i64; r];
            z[r - s] += 1;
            if r > t {
                z[r - t - 1] -= 1;
            }
            let hi = e[r - s].1 as i64;
            let lo = if r > t { e[r - t - 1].1 as i64 } else { 0 };
            letters.push(HLetter { n: len as u32, a: (hi - lo).rem_euclid(level as i64) as u32, z });
            weight *= factorial(len as u32);
            s = t + 1;
        }
        let acc = accumulate_h(&letters, level, order, std::slice::from_ref(&target)).pop().unwrap();
        parts.push((acc, weight));
    }
    // Bring every composition over the common denominator ∏(n_i - 1)! · lcm of block factorials.
    let lcm = parts.iter().fold(Integer::from(1), |l, (_, w)| l.lcm(w));
    for (acc, w) in &parts {
        total.add_scaled(acc, &Integer::from(&lcm / w), 0);
    }
    total_denom *= lcm;
    for &k in &target {
        total_denom *= factorial(k);
    }
    let series = QSeries { level, coeffs: total.to_cyclo(&total_denom) };
    NormalizedDivisor { weight: w.weight(), series }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(level: u32, e: &[(u32, i64)]) -> IndexWord {
        IndexWord::new(level, e).unwrap()
    }

    fn ints(level: u32, v: &[i64]) -> Vec<CycloNum> {
        v.iter().map(|&x| CycloNum::from_int(level, x)).collect()
    }

    #[test]
    fn divisor_count() {
        let g = g_hat(&w(1, &[(1, 0)]), 5);
        assert_eq!(g.series.coeffs(), &ints(1, &[0, 1, 2, 2, 3, 2])[..]);
        assert_eq!(g.weight, 1);
    }

    #[test]
    fn twisted_divisor_sum() {
        let g = g_hat(&w(2, &[(2, 1)]), 3);
        assert_eq!(g.series.coeffs(), &ints(2, &[0, -1, 1, -4])[..]);
    }

    #[test]
    fn unit_series() {
        let g = g_hat(&IndexWord::empty(3), 4);
        assert_eq!(g.series, QSeries::one(3, 4));
        assert_eq!(g_sha_hat(&IndexWord::empty(3), 4).series, QSeries::one(3, 4));
    }

    #[test]
    fn h_with_zero_variable_is_divisor_series() {
        let letters = [HLetter { n: 1, a: 1, z: vec![0] }];
        let h = h_hat(&letters, 3, 8, &[2]).unwrap();
        assert_eq!(h.terms.len(), 1);
        assert_eq!(h.coeff(&[0]).unwrap(), &g_hat(&w(3, &[(1, 1)]), 8).series);
    }

    #[test]
    fn h_first_order_in_x_is_sigma_one() {
        let letters = [HLetter { n: 1, a: 0, z: vec![1] }];
        let h = h_hat(&letters, 1, 8, &[1]).unwrap();
        let sigma1: Vec<i64> = (0..=8).map(|m: i64| (1..=m).filter(|d| m % d == 0).sum()).collect();
        assert_eq!(h.coeff(&[1]).unwrap().coeffs(), &ints(1, &sigma1)[..]);
    }

    #[test]
    fn depth_one_regularised_equals_plain() {
        for a in 0..3 {
            for n in 1..4 {
                let u = w(3, &[(n, a)]);
                assert_eq!(g_sha_hat(&u, 10), g_hat(&u, 10));
            }
        }
    }

    #[test]
    fn two_letter_h_at_zero_residues() {
        let letters = [HLetter { n: 1, a: 0, z: vec![0] }, HLetter { n: 1, a: 0, z: vec![0] }];
        let h = h_hat(&letters, 1, 12, &[0]).unwrap();
        assert_eq!(h.coeff(&[0]).unwrap(), &g_hat(&w(1, &[(1, 0), (1, 0)]), 12).series);
    }
}
