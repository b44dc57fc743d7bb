//! Exact arithmetic in the cyclotomic field `Q(η)`, `η = exp(2πi/N)`.
//!
//! Elements are stored in the power basis `1, η, …, η^{φ(N)-1}` reduced modulo
//! the cyclotomic polynomial `Φ_N`, so two equal field elements always have
//! identical coefficient vectors.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use rug::float::Constant;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

struct LevelTable {
    /// Coefficients of `Φ_N`, lowest degree first; monic of degree `φ(N)`.
    phi: Vec<Integer>,
    /// `η^k` in the power basis for `k = 0..N`.
    powers: Vec<Vec<Integer>>,
}

fn tables() -> &'static RwLock<HashMap<u32, Arc<LevelTable>>> {
    static TABLES: OnceLock<RwLock<HashMap<u32, Arc<LevelTable>>>> = OnceLock::new();
    TABLES.get_or_init(|| RwLock::new(HashMap::new()))
}

fn table(n: u32) -> Arc<LevelTable> {
    if let Some(t) = tables().read().unwrap().get(&n) {
        return t.clone();
    }
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    for k in 0..n as usize {
        let mut p = vec![Integer::new(); k + 1];
        p[k] = Integer::from(1);
        reduce_int(&mut p, &phi);
        p.resize(deg, Integer::new());
        powers.push(p);
    }
    let t = Arc::new(LevelTable { phi, powers });
    tables().write().unwrap().entry(n).or_insert(t).clone()
}

fn reduce_int(p: &mut Vec<Integer>, phi: &[Integer]) {
    let deg = phi.len() - 1;
    while p.len() > deg {
        let c = p.pop().unwrap();
        if c != 0 {
            let shift = p.len() - deg;
            for (i, f) in phi[..deg].iter().enumerate() {
                p[shift + i] -= Integer::from(&c * f);
            }
        }
    }
}

fn reduce_rat(p: &mut Vec<Rational>, phi: &[Integer]) {
    let deg = phi.len() - 1;
    while p.len() > deg {
        let c = p.pop().unwrap();
        if c != 0 {
            let shift = p.len() - deg;
            for (i, f) in phi[..deg].iter().enumerate() {
                p[shift + i] -= Rational::from(&c * f);
            }
        }
    }
}

/// The cyclotomic polynomial `Φ_n`, lowest degree coefficient first.
pub fn cyclotomic_poly(n: u32) -> Vec<Integer> {
    assert!(n >= 1, "cyclotomic level must be positive");
    // X^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![Integer::new(); n as usize + 1];
    num[0] = Integer::from(-1);
    num[n as usize] = Integer::from(1);
    for d in 1..n {
        if n % d == 0 {
            num = div_monic(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn div_monic(num: &[Integer], den: &[Integer]) -> Vec<Integer> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![Integer::new(); num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn].clone();
        for (i, f) in den.iter().enumerate() {
            rem[k + i] -= Integer::from(&c * f);
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|r| *r == 0));
    quot
}

/// Euler's totient, the dimension of `Q(η)` over `Q`.
pub fn totient(n: u32) -> usize {
    (1..=n).filter(|k| gcd(*k, n) == 1).count()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An element of `Q(η_N)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloNum {
    level: u32,
    coeffs: Vec<Rational>,
}

impl CycloNum {
    pub fn zero(level: u32) -> Self {
        assert!(level >= 1, "cyclotomic level must be positive");
        Self { level, coeffs: vec![Rational::new(); totient(level)] }
    }

    pub fn one(level: u32) -> Self {
        Self::from_rational(level, Rational::from(1))
    }

    pub fn from_int(level: u32, n: i64) -> Self {
        Self::from_rational(level, Rational::from(n))
    }

    pub fn from_rational(level: u32, q: Rational) -> Self {
        let mut z = Self::zero(level);
        z.coeffs[0] = q;
        z
    }

    /// Builds an element from power-basis coefficients, reducing modulo `Φ_N`
    /// if more than `φ(N)` are given.
    pub fn from_coeffs(level: u32, coeffs: Vec<Rational>) -> Self {
        let t = table(level);
        let mut c = coeffs;
        reduce_rat(&mut c, &t.phi);
        c.resize(t.phi.len() - 1, Rational::new());
        Self { level, coeffs: c }
    }

    /// `η^a`, with `a` taken modulo the level.
    pub fn root_power(level: u32, a: i64) -> Self {
        let t = table(level);
        let k = a.rem_euclid(level as i64) as usize;
        let coeffs = t.powers[k].iter().map(|c| Rational::from(c)).collect();
        Self { level, coeffs }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|c| *c == 0)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..].iter().all(|c| *c == 0).then(|| &self.coeffs[0])
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.level == other.level {
            Ok(())
        } else {
            Err(Error::LevelMismatch(self.level, other.level))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| Rational::from(a + b)).collect();
        Ok(Self { level: self.level, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| Rational::from(a - b)).collect();
        Ok(Self { level: self.level, coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.coeffs.len();
        if d == 1 {
            return Ok(Self { level: self.level, coeffs: vec![Rational::from(&self.coeffs[0] * &other.coeffs[0])] });
        }
        let mut prod = vec![Rational::new(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if *b != 0 {
                    prod[i + j] += Rational::from(a * b);
                }
            }
        }
        reduce_rat(&mut prod, &table(self.level).phi);
        Ok(Self { level: self.level, coeffs: prod })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in `Q[X]`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let t = table(self.level);
        let phi: Vec<Rational> = t.phi.iter().map(Rational::from).collect();
        let s = poly_inverse_mod(&self.coeffs, &phi);
        Ok(Self::from_coeffs(self.level, s))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|c| Rational::from(c * q)).collect();
        Self { level: self.level, coeffs }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&Rational::from(n))
    }

    /// Complex conjugate, i.e. the image under `η ↦ η^{-1}`.
    pub fn conj(&self) -> Self {
        let mut acc = vec![Rational::new(); self.coeffs.len()];
        let t = table(self.level);
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let k = (self.level as usize - i) % self.level as usize;
            for (slot, p) in acc.iter_mut().zip(&t.powers[k]) {
                *slot += Rational::from(c * p);
            }
        }
        Self { level: self.level, coeffs: acc }
    }

    /// Numerical value with absolute error below `2^{-prec}`.
    pub fn to_complex(&self, prec: u32) -> Complex {
        let mag: i64 = self
            .coeffs
            .iter()
            .map(|c| c.numer().significant_bits() as i64 - c.denom().significant_bits() as i64 + 1)
            .max()
            .unwrap_or(0)
            .max(0);
        let work = prec + 32 + mag as u32 + self.coeffs.len() as u32;
        let mut acc = Complex::new(work);
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let root = root_of_unity(self.level, i as i64, work);
            acc += root * Float::with_val(work, c);
        }
        Complex::with_val(prec, acc)
    }
}

/// `exp(2πi a / n)` at the given precision; exact for the real and imaginary
/// unit cases.
pub fn root_of_unity(n: u32, a: i64, prec: u32) -> Complex {
    let k = a.rem_euclid(n as i64);
    let n = n as i64;
    if k == 0 {
        return Complex::with_val(prec, (1, 0));
    }
    if 2 * k == n {
        return Complex::with_val(prec, (-1, 0));
    }
    if 4 * k == n {
        return Complex::with_val(prec, (0, 1));
    }
    if 4 * k == 3 * n {
        return Complex::with_val(prec, (0, -1));
    }
    let theta: Float = Float::with_val(prec + 16, Constant::Pi) * 2u32 * Float::with_val(prec + 16, k) / n;
    let (s, c) = theta.sin_cos(Float::new(prec + 16));
    Complex::with_val(prec, (c, s))
}

fn trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (vec![Rational::new()], rem);
    }
    let mut quot = vec![Rational::new(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = Rational::from(&rem[k + db] / &lead);
        if c != 0 {
            for (i, f) in b.iter().enumerate() {
                rem[k + i] -= Rational::from(&c * f);
            }
        }
        quot[k] = c;
    }
    rem.truncate(db.max(1));
    trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Rational::from(x * y);
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::new(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    // Invariant: s_i * a ≡ r_i (mod m).
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rational::new()], vec![Rational::from(1)]);
    while !(r1.len() == 1) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r1 is a nonzero constant because Φ_N is irreducible.
    let c = r1[0].clone().recip();
    s1.iter().map(|x| Rational::from(x * &c)).collect()
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a CycloNum> for &'a CycloNum {
            type Output = CycloNum;
            /// Panics on a level mismatch; use the `checked_` form to handle it.
            fn $m(self, rhs: &'a CycloNum) -> CycloNum {
                self.$checked(rhs).expect("cyclotomic level mismatch")
            }
        }
        impl $tr for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { level: self.level, coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect() }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let (sign, abs) = if *c < 0 { ("-", Rational::from(-c)) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if abs != 1 {
                        write!(f, "{abs}*")?;
                    }
                    if i == 1 {
                        write!(f, "η")?;
                    } else {
                        write!(f, "η^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum[N={}]({})", self.level, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    fn cn(level: u32, v: &[(i64, i64)]) -> CycloNum {
        CycloNum::from_coeffs(level, v.iter().map(|&(a, b)| Rational::from((a, b))).collect())
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn root_power_reduces() {
        assert_eq!(CycloNum::root_power(3, 2), cn(3, &[(-1, 1), (-1, 1)]));
        assert_eq!(CycloNum::root_power(2, 1), CycloNum::from_int(2, -1));
        assert_eq!(CycloNum::root_power(4, -1), cn(4, &[(0, 1), (-1, 1)]));
        assert_eq!(CycloNum::root_power(5, 5), CycloNum::one(5));
    }

    #[test]
    fn inverse_of_one_plus_i() {
        let z = cn(4, &[(1, 1), (1, 1)]);
        assert_eq!(z.inv().unwrap(), cn(4, &[(1, 2), (-1, 2)]));
        assert!(matches!(CycloNum::zero(4).inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn level_mismatch_is_reported() {
        let e = CycloNum::one(2).checked_add(&CycloNum::one(3));
        assert_eq!(e, Err(Error::LevelMismatch(2, 3)));
    }

    #[test]
    fn numerical_embedding() {
        let z = cn(6, &[(1, 3), (2, 1)]);
        let v = z.to_complex(100);
        let expect_re = 1.0 / 3.0 + 2.0 * (std::f64::consts::PI / 3.0).cos();
        let expect_im = 2.0 * (std::f64::consts::PI / 3.0).sin();
        assert!((v.real().to_f64() - expect_re).abs() < 1e-15);
        assert!((v.imag().to_f64() - expect_im).abs() < 1e-15);
    }

    #[test]
    fn conjugation_inverts_roots() {
        for n in 1..9 {
            for a in 0..n as i64 {
                assert_eq!(CycloNum::root_power(n, a).conj(), CycloNum::root_power(n, -a));
            }
        }
    }
}
