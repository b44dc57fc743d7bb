//! Index words `(n_1,…,n_r; a_1,…,a_r)`, letter words over `{x, y_a}` and
//! linear combinations of both with cyclotomic coefficients.
//!
//! An index word corresponds to the letter word `y_{a_1} x^{n_1-1} ⋯ y_{a_r} x^{n_r-1}`.
//! Index words are ordered by depth and then lexicographically, which makes the
//! printed form of every combination canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};

/// A pair sequence `(n_i, a_i)` with `n_i ≥ 1` and `a_i ∈ Z/NZ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexWord {
    level: u32,
    entries: Vec<(u32, u32)>,
}

impl IndexWord {
    /// Residues are reduced modulo `level`; every `n` must be positive.
    pub fn new(level: u32, entries: &[(u32, i64)]) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidIndex("level must be positive".into()));
        }
        let mut out = Vec::with_capacity(entries.len());
        for &(n, a) in entries {
            if n == 0 {
                return Err(Error::InvalidIndex(format!("entry n = 0 in {entries:?}")));
            }
            out.push((n, a.rem_euclid(level as i64) as u32));
        }
        Ok(Self { level, entries: out })
    }

    pub fn empty(level: u32) -> Self {
        Self { level, entries: Vec::new() }
    }

    pub(crate) fn from_raw(level: u32, entries: Vec<(u32, u32)>) -> Self {
        debug_assert!(entries.iter().all(|&(n, a)| n >= 1 && a < level));
        Self { level, entries }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    pub fn weight(&self) -> u32 {
        self.entries.iter().map(|e| e.0).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ns(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn residues(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.1).collect()
    }

    /// `n_r ≥ 2`, the convergence condition for the nested sums.
    pub fn is_admissible(&self) -> bool {
        self.entries.last().map_or(true, |e| e.0 >= 2)
    }

    /// All `n_i ≥ 2`.
    pub fn all_at_least_two(&self) -> bool {
        self.entries.iter().all(|e| e.0 >= 2)
    }

    fn modn(&self, a: i64) -> u32 {
        a.rem_euclid(self.level as i64) as u32
    }

    /// Replaces residues by consecutive differences `a_i - a_{i-1}`.
    pub fn rho(&self) -> Self {
        let mut prev = 0i64;
        let entries = self
            .entries
            .iter()
            .map(|&(n, a)| {
                let d = self.modn(a as i64 - prev);
                prev = a as i64;
                (n, d)
            })
            .collect();
        Self { level: self.level, entries }
    }

    /// Replaces residues by partial sums; inverse of [`IndexWord::rho`].
    pub fn rho_inv(&self) -> Self {
        let mut acc = 0i64;
        let entries = self
            .entries
            .iter()
            .map(|&(n, a)| {
                acc += a as i64;
                (n, self.modn(acc))
            })
            .collect();
        Self { level: self.level, entries }
    }

    pub fn to_letters(&self) -> LetterWord {
        let mut letters = Vec::with_capacity(self.weight() as usize);
        for &(n, a) in &self.entries {
            letters.push(Letter::Y(a));
            letters.extend(std::iter::repeat(Letter::X).take(n as usize - 1));
        }
        LetterWord { level: self.level, letters }
    }

    /// Subword of entries `lo..hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Self {
        Self { level: self.level, entries: self.entries[lo..hi].to_vec() }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self { level: self.level, entries }
    }

    /// Every nonempty word of weight at most `max_weight` and depth at most
    /// `max_depth` whose entries are all at least `min_n`, in word order.
    pub fn enumerate(level: u32, max_weight: u32, max_depth: usize, min_n: u32) -> Vec<IndexWord> {
        let min_n = min_n.max(1);
        let mut out = Vec::new();
        let mut stack: Vec<Vec<(u32, u32)>> = vec![Vec::new()];
        while let Some(cur) = stack.pop() {
            if !cur.is_empty() {
                out.push(IndexWord::from_raw(level, cur.clone()));
            }
            if cur.len() == max_depth {
                continue;
            }
            let wt: u32 = cur.iter().map(|e| e.0).sum();
            for n in min_n..=max_weight.saturating_sub(wt) {
                for a in 0..level {
                    let mut next = cur.clone();
                    next.push((n, a));
                    stack.push(next);
                }
            }
        }
        out.sort();
        out
    }
}

impl Ord for IndexWord {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.level, self.entries.len(), &self.entries).cmp(&(other.level, other.entries.len(), &other.entries))
    }
}

impl PartialOrd for IndexWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "∅");
        }
        let ns: Vec<String> = self.entries.iter().map(|e| e.0.to_string()).collect();
        let as_: Vec<String> = self.entries.iter().map(|e| e.1.to_string()).collect();
        write!(f, "({};{})", ns.join(","), as_.join(","))
    }
}

impl fmt::Debug for IndexWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Letter {
    X,
    Y(u32),
}

/// A word over `{x} ∪ {y_a : a ∈ Z/NZ}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LetterWord {
    level: u32,
    letters: Vec<Letter>,
}

impl LetterWord {
    pub fn new(level: u32, letters: Vec<Letter>) -> Result<Self> {
        if let Some(Letter::Y(a)) = letters.iter().find(|l| matches!(l, Letter::Y(a) if *a >= level)) {
            return Err(Error::InvalidIndex(format!("letter y_{a} at level {level}")));
        }
        Ok(Self { level, letters })
    }

    pub fn empty(level: u32) -> Self {
        Self { level, letters: Vec::new() }
    }

    pub(crate) fn from_raw(level: u32, letters: Vec<Letter>) -> Self {
        Self { level, letters }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Empty or starting with a `y`-letter.
    pub fn in_h1(&self) -> bool {
        !matches!(self.letters.first(), Some(Letter::X))
    }

    pub fn to_index(&self) -> Result<IndexWord> {
        if !self.in_h1() {
            return Err(Error::NotInH1(self.to_string()));
        }
        let mut entries: Vec<(u32, u32)> = Vec::new();
        for l in &self.letters {
            match l {
                Letter::Y(a) => entries.push((1, *a)),
                Letter::X => entries.last_mut().unwrap().0 += 1,
            }
        }
        Ok(IndexWord { level: self.level, entries })
    }
}

impl Ord for LetterWord {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.level, self.letters.len(), &self.letters).cmp(&(other.level, other.letters.len(), &other.letters))
    }
}

impl PartialOrd for LetterWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LetterWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::X => "x".to_string(),
                Letter::Y(a) => format!("y{a}"),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for LetterWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Anything that can index a linear combination.
pub trait Word: Clone + Ord + fmt::Display {
    fn level(&self) -> u32;
}

impl Word for IndexWord {
    fn level(&self) -> u32 {
        self.level
    }
}

impl Word for LetterWord {
    fn level(&self) -> u32 {
        self.level
    }
}

/// A finite formal sum `Σ c_w w` with nonzero coefficients in `Q(η_N)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinComb<W: Word> {
    level: u32,
    terms: BTreeMap<W, CycloNum>,
}

impl<W: Word> LinComb<W> {
    pub fn zero(level: u32) -> Self {
        Self { level, terms: BTreeMap::new() }
    }

    pub fn from_word(w: W) -> Self {
        let level = w.level();
        let mut terms = BTreeMap::new();
        terms.insert(w, CycloNum::one(level));
        Self { level, terms }
    }

    pub fn from_terms(level: u32, terms: impl IntoIterator<Item = (W, CycloNum)>) -> Result<Self> {
        let mut out = Self::zero(level);
        for (w, c) in terms {
            out.try_add_term(w, c)?;
        }
        Ok(out)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&W, &CycloNum)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &W) -> CycloNum {
        self.terms.get(w).cloned().unwrap_or_else(|| CycloNum::zero(self.level))
    }

    pub fn try_add_term(&mut self, w: W, c: CycloNum) -> Result<()> {
        if w.level() != self.level {
            return Err(Error::LevelMismatch(self.level, w.level()));
        }
        if c.level() != self.level {
            return Err(Error::LevelMismatch(self.level, c.level()));
        }
        self.add_term(w, c);
        Ok(())
    }

    /// Adds `c·w`, dropping the term if it cancels.
    pub fn add_term(&mut self, w: W, c: CycloNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(old) => {
                *old = &*old + &c;
                if old.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_rational(&mut self, w: W, q: &Rational) {
        if *q != 0 {
            self.add_term(w, CycloNum::from_rational(self.level, q.clone()));
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&CycloNum::from_int(other.level, -1)))
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        let mut out = Self::zero(self.level);
        for (w, d) in &self.terms {
            out.add_term(w.clone(), d * c);
        }
        out
    }

    /// Applies a linear map given on basis words.
    pub fn map_linear<V: Word, E>(
        &self,
        out_level: u32,
        mut f: impl FnMut(&W) -> std::result::Result<LinComb<V>, E>,
    ) -> std::result::Result<LinComb<V>, E> {
        let mut out = LinComb::zero(out_level);
        for (w, c) in &self.terms {
            for (v, d) in f(w)?.terms {
                out.add_term(v, &d * c);
            }
        }
        Ok(out)
    }
}

impl<W: Word> fmt::Display for LinComb<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({c})·{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<W: Word> fmt::Debug for LinComb<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl LinComb<IndexWord> {
    /// Letterwise `z_{n,a} ↦ N^{-1} Σ_b η^{-ab} z_{n,b}`.
    pub fn pi(&self) -> Self {
        self.letterwise_fourier(-1, true)
    }

    /// Letterwise `z_{n,b} ↦ Σ_a η^{ab} z_{n,a}`.
    pub fn pi_inv(&self) -> Self {
        self.letterwise_fourier(1, false)
    }

    fn letterwise_fourier(&self, sign: i64, normalise: bool) -> Self {
        let n = self.level;
        let mut out = Self::zero(n);
        for (w, c) in &self.terms {
            let mut partial: Vec<(Vec<(u32, u32)>, CycloNum)> = vec![(Vec::new(), c.clone())];
            for &(k, a) in w.entries() {
                let mut next = Vec::with_capacity(partial.len() * n as usize);
                for (prefix, coeff) in &partial {
                    for b in 0..n {
                        let mut p = prefix.clone();
                        p.push((k, b));
                        next.push((p, coeff * &CycloNum::root_power(n, sign * a as i64 * b as i64)));
                    }
                }
                partial = next;
            }
            let norm = Rational::from((1, n.pow(w.depth() as u32)));
            for (entries, coeff) in partial {
                let coeff = if normalise { coeff.scale(&norm) } else { coeff };
                out.add_term(IndexWord::from_raw(n, entries), coeff);
            }
        }
        out
    }

    pub fn rho(&self) -> Self {
        self.map_words(IndexWord::rho)
    }

    pub fn rho_inv(&self) -> Self {
        self.map_words(IndexWord::rho_inv)
    }

    fn map_words(&self, f: impl Fn(&IndexWord) -> IndexWord) -> Self {
        let mut out = Self::zero(self.level);
        for (w, c) in &self.terms {
            out.add_term(f(w), c.clone());
        }
        out
    }

    pub fn to_letters(&self) -> LinComb<LetterWord> {
        let mut out = LinComb::zero(self.level);
        for (w, c) in &self.terms {
            out.add_term(w.to_letters(), c.clone());
        }
        out
    }
}

impl LinComb<LetterWord> {
    pub fn to_index(&self) -> Result<LinComb<IndexWord>> {
        let mut out = LinComb::zero(self.level);
        for (w, c) in &self.terms {
            out.add_term(w.to_index()?, c.clone());
        }
        Ok(out)
    }
}

/// A formal sum of tensors `Σ c · (left ⊗ right)` of index words.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorComb {
    level: u32,
    terms: BTreeMap<(IndexWord, IndexWord), CycloNum>,
}

impl TensorComb {
    pub fn zero(level: u32) -> Self {
        Self { level, terms: BTreeMap::new() }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(IndexWord, IndexWord), &CycloNum)> {
        self.terms.iter()
    }

    pub fn coeff(&self, left: &IndexWord, right: &IndexWord) -> CycloNum {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(|| CycloNum::zero(self.level))
    }

    pub fn add_term(&mut self, left: IndexWord, right: IndexWord, c: CycloNum) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        match self.terms.get_mut(&key) {
            Some(old) => {
                *old = &*old + &c;
                if old.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        let mut out = Self::zero(self.level);
        for ((l, r), d) in &self.terms {
            out.add_term(l.clone(), r.clone(), d * c);
        }
        out
    }
}

impl fmt::Display for TensorComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((l, r), c)| format!("({c})·{l}⊗{r}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TensorComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
