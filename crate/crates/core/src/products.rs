//! Shuffle and harmonic products, their twisted versions `⊔̃` and `⊛̃`, and
//! the shuffle regularisation that sends `y_0` to zero.

use std::collections::{BTreeMap, HashMap};

use rug::Rational;

use crate::error::{Error, Result};
use crate::words::{IndexWord, Letter, LetterWord, LinComb, Word};

type Counts<T> = BTreeMap<Vec<T>, i128>;

/// Quasi-shuffle of two sequences: `merge` decides whether the first letters
/// may contract into one. With `merge` always `None` this is the shuffle.
fn quasi_shuffle<T: Copy + Ord>(u: &[T], v: &[T], merge: impl Fn(T, T) -> Option<T>) -> Counts<T> {
    let (lu, lv) = (u.len(), v.len());
    // table[i][j] holds the product of the suffixes u[i..] and v[j..].
    let mut table: Vec<Vec<Counts<T>>> = vec![vec![Counts::new(); lv + 1]; lu + 1];
    for i in (0..=lu).rev() {
        for j in (0..=lv).rev() {
            let mut cell = Counts::new();
            if i == lu || j == lv {
                let tail: Vec<T> = if i == lu { v[j..].to_vec() } else { u[i..].to_vec() };
                cell.insert(tail, 1);
            } else {
                prepend_into(&mut cell, u[i], &table[i + 1][j]);
                prepend_into(&mut cell, v[j], &table[i][j + 1]);
                if let Some(m) = merge(u[i], v[j]) {
                    prepend_into(&mut cell, m, &table[i + 1][j + 1]);
                }
            }
            table[i][j] = cell;
        }
        // Rows below i + 1 are no longer needed.
        if i + 2 <= lu {
            table[i + 2] = Vec::new();
        }
    }
    std::mem::take(&mut table[0][0])
}

fn prepend_into<T: Copy + Ord>(out: &mut Counts<T>, head: T, src: &Counts<T>) {
    for (w, c) in src {
        let mut v = Vec::with_capacity(w.len() + 1);
        v.push(head);
        v.extend_from_slice(w);
        *out.entry(v).or_insert(0) += c;
    }
}

fn bilinear<W: Word>(
    u: &LinComb<W>,
    v: &LinComb<W>,
    mut f: impl FnMut(&W, &W) -> Result<Vec<(W, i128)>>,
) -> Result<LinComb<W>> {
    if u.level() != v.level() {
        return Err(Error::LevelMismatch(u.level(), v.level()));
    }
    let level = u.level();
    let mut out = LinComb::zero(level);
    for (w1, c1) in u.iter() {
        for (w2, c2) in v.iter() {
            let c = c1 * c2;
            for (w, k) in f(w1, w2)? {
                out.add_term(w, if k == 1 { c.clone() } else { c.scale(&Rational::from(k)) });
            }
        }
    }
    Ok(out)
}

/// Shuffle of two letter words, with multiplicities.
pub fn shuffle_words(u: &LetterWord, v: &LetterWord) -> Vec<(LetterWord, i128)> {
    let level = u.level();
    quasi_shuffle(u.letters(), v.letters(), |_, _| None)
        .into_iter()
        .map(|(w, c)| (LetterWord::from_raw(level, w), c))
        .collect()
}

/// The shuffle product `⧢` on letter words.
pub fn shuffle(u: &LinComb<LetterWord>, v: &LinComb<LetterWord>) -> Result<LinComb<LetterWord>> {
    bilinear(u, v, |a, b| Ok(shuffle_words(a, b)))
}

/// The shuffle product transported to index words through `z_{n,a} = y_a x^{n-1}`.
pub fn index_shuffle(u: &LinComb<IndexWord>, v: &LinComb<IndexWord>) -> Result<LinComb<IndexWord>> {
    shuffle(&u.to_letters(), &v.to_letters())?.to_index()
}

/// Harmonic product of two index words, with multiplicities.
pub fn harmonic_words(u: &IndexWord, v: &IndexWord) -> Vec<(IndexWord, i128)> {
    let n = u.level();
    quasi_shuffle(u.entries(), v.entries(), |(n1, a1), (n2, a2)| Some((n1 + n2, (a1 + a2) % n)))
        .into_iter()
        .map(|(w, c)| (IndexWord::from_raw(n, w), c))
        .collect()
}

/// The harmonic product `∗`, merging `z_{n1,a1}` and `z_{n2,a2}` into
/// `z_{n1+n2, a1+a2}`.
pub fn harmonic(u: &LinComb<IndexWord>, v: &LinComb<IndexWord>) -> Result<LinComb<IndexWord>> {
    bilinear(u, v, |a, b| Ok(harmonic_words(a, b)))
}

/// Twisted shuffle of two index words: `ρ^{-1}(ρ u ⧢ ρ v)`.
pub fn tsha_words(u: &IndexWord, v: &IndexWord) -> Vec<(IndexWord, i128)> {
    shuffle_words(&u.rho().to_letters(), &v.rho().to_letters())
        .into_iter()
        .map(|(w, c)| (w.to_index().expect("shuffle of H^1 words stays in H^1").rho_inv(), c))
        .collect()
}

/// The twisted shuffle product `⊔̃`.
pub fn tsha(u: &LinComb<IndexWord>, v: &LinComb<IndexWord>) -> Result<LinComb<IndexWord>> {
    bilinear(u, v, |a, b| Ok(tsha_words(a, b)))
}

/// Twisted harmonic product of two index words: contracting letters must share
/// their residue, which the merged letter keeps.
pub fn tast_words(u: &IndexWord, v: &IndexWord) -> Vec<(IndexWord, i128)> {
    let n = u.level();
    quasi_shuffle(u.entries(), v.entries(), |(n1, a1), (n2, a2)| (a1 == a2).then_some((n1 + n2, a1)))
        .into_iter()
        .map(|(w, c)| (IndexWord::from_raw(n, w), c))
        .collect()
}

/// The twisted harmonic product `⊛̃`, equal to `π^{-1}(π u ∗ π v)`.
pub fn tast(u: &LinComb<IndexWord>, v: &LinComb<IndexWord>) -> Result<LinComb<IndexWord>> {
    bilinear(u, v, |a, b| Ok(tast_words(a, b)))
}

/// Shuffle regularisation: the `⧢`-algebra map that kills `y_0` and fixes the
/// words not ending in `y_0`. Defined on `H^1`, the span of words starting
/// with a `y`-letter.
pub fn shuffle_reg0(u: &LinComb<LetterWord>) -> Result<LinComb<LetterWord>> {
    let mut memo = HashMap::new();
    let mut out = LinComb::zero(u.level());
    for (w, c) in u.iter() {
        if !w.in_h1() {
            return Err(Error::NotInH1(w.to_string()));
        }
        for (v, q) in reg0_word(w, &mut memo) {
            out.add_term(v, c.scale(&q));
        }
    }
    Ok(out)
}

fn reg0_word(w: &LetterWord, memo: &mut HashMap<LetterWord, Vec<(LetterWord, Rational)>>) -> Vec<(LetterWord, Rational)> {
    if let Some(r) = memo.get(w) {
        return r.clone();
    }
    let letters = w.letters();
    let k = letters.iter().rev().take_while(|l| **l == Letter::Y(0)).count();
    let result = if k == 0 {
        vec![(w.clone(), Rational::from(1))]
    } else {
        // y_0 ⧢ (w' y_0^{k-1}) = k·w + R, and reg kills the left-hand side.
        let level = w.level();
        let shorter = LetterWord::from_raw(level, letters[..letters.len() - 1].to_vec());
        let y0 = LetterWord::from_raw(level, vec![Letter::Y(0)]);
        let mut acc: BTreeMap<LetterWord, Rational> = BTreeMap::new();
        let scale = Rational::from((-1, k as i64));
        for (v, c) in shuffle_words(&y0, &shorter) {
            if v == *w {
                debug_assert_eq!(c, k as i128);
                continue;
            }
            for (u, q) in reg0_word(&v, memo) {
                *acc.entry(u).or_insert_with(Rational::new) += Rational::from(c) * &q * &scale;
            }
        }
        acc.into_iter().filter(|(_, q)| *q != 0).collect()
    };
    memo.insert(w.clone(), result.clone());
    result
}
