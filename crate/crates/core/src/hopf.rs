//! Goncharov's coproduct transported to index words, and the convolution of
//! two evaluators along it.
//!
//! For `w = (n_1,…,n_r; a_1,…,a_r)` the coproduct is a sum over marked positions
//! `t_1 < ⋯ < t_h`. Each block `t_j … t_{j+1}-1` chooses one position `q_j`
//! whose letter moves to the right-hand factor; the remaining entries of the
//! block are redistributed by binomial weights into two words that join the
//! unmarked prefix on the left, multiplied together with `⊔̃`.

use std::collections::{BTreeMap, HashMap};

use rug::Integer;

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::products::tsha;
use crate::words::{IndexWord, LetterWord, LinComb, TensorComb};

/// One way a block contributes: an integer weight, its two left words and
/// the letter passed to the right.
struct BlockOption {
    weight: Integer,
    before: IndexWord,
    after: IndexWord,
    letter: (u32, u32),
}

fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

fn block_options(w: &IndexWord, lo: usize, hi: usize) -> Vec<BlockOption> {
    let level = w.level() as i64;
    let e = w.entries();
    let block_weight: u32 = e[lo..hi].iter().map(|x| x.0).sum();
    let mut out = Vec::new();
    for q in lo..hi {
        let others: Vec<usize> = (lo..hi).filter(|&p| p != q).collect();
        let mut ks = vec![0u32; hi - lo];
        enumerate_ks(e, &others, 0, block_weight, &mut ks, lo, &mut |ks| {
            let used: u32 = others.iter().map(|&p| ks[p - lo]).sum();
            let kq = block_weight - used;
            let mut weight = Integer::from(1);
            for &p in &others {
                weight *= binomial(ks[p - lo] - 1, e[p].0 - 1);
            }
            let tail: u32 = (q + 1..hi).map(|p| ks[p - lo]).sum();
            if (block_weight + e[q].0 + tail) % 2 == 1 {
                weight = -weight;
            }
            let aq = e[q].1 as i64;
            let before: Vec<(u32, u32)> = (lo..q)
                .rev()
                .map(|p| (ks[p - lo], (aq - e[p].1 as i64).rem_euclid(level) as u32))
                .collect();
            let after: Vec<(u32, u32)> = (q + 1..hi)
                .map(|p| (ks[p - lo], (e[p].1 as i64 - aq).rem_euclid(level) as u32))
                .collect();
            out.push(BlockOption {
                weight,
                before: IndexWord::from_raw(w.level(), before),
                after: IndexWord::from_raw(w.level(), after),
                letter: (kq, e[q].1),
            });
        });
    }
    out
}

/// Assigns `k_p ≥ n_p` to the non-chosen positions, leaving at least one for `k_q`.
fn enumerate_ks(
    e: &[(u32, u32)],
    others: &[usize],
    idx: usize,
    budget: u32,
    ks: &mut Vec<u32>,
    lo: usize,
    f: &mut impl FnMut(&[u32]),
) {
    if idx == others.len() {
        if budget >= 1 {
            f(ks);
        }
        return;
    }
    let p = others[idx];
    let need_rest: u32 = others[idx + 1..].iter().map(|&r| e[r].0).sum();
    let min = e[p].0;
    if budget < min + need_rest + 1 {
        return;
    }
    for k in min..=budget - need_rest - 1 {
        ks[p - lo] = k;
        enumerate_ks(e, others, idx + 1, budget - k, ks, lo, f);
    }
}

/// The coproduct of a single index word.
pub fn coproduct_word(w: &IndexWord) -> TensorComb {
    let level = w.level();
    let r = w.depth();
    let mut out = TensorComb::zero(level);
    let mut cache: HashMap<Vec<IndexWord>, LinComb<IndexWord>> = HashMap::new();
    let mut options_cache: HashMap<(usize, usize), std::rc::Rc<Vec<BlockOption>>> = HashMap::new();
    for mask in 0u64..(1u64 << r) {
        let marks: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
        let prefix = w.slice(0, marks.first().copied().unwrap_or(r));
        let blocks: Vec<std::rc::Rc<Vec<BlockOption>>> = marks
            .iter()
            .enumerate()
            .map(|(j, &t)| {
                let end = marks.get(j + 1).copied().unwrap_or(r);
                options_cache.entry((t, end)).or_insert_with(|| std::rc::Rc::new(block_options(w, t, end))).clone()
            })
            .collect();
        if blocks.iter().any(|b| b.is_empty()) {
            continue;
        }
        let mut choice = vec![0usize; blocks.len()];
        loop {
            let mut weight = Integer::from(1);
            let mut factors = vec![prefix.clone()];
            let mut right = Vec::with_capacity(blocks.len());
            for (b, &c) in blocks.iter().zip(&choice) {
                let o = &b[c];
                weight *= &o.weight;
                factors.push(o.before.clone());
                factors.push(o.after.clone());
                right.push(o.letter);
            }
            if weight != 0 {
                factors.retain(|f| !f.is_empty());
                factors.sort();
                let left = cache.entry(factors.clone()).or_insert_with(|| flatten(level, &factors)).clone();
                let right = IndexWord::from_raw(level, right);
                let c = CycloNum::from_rational(level, weight.into());
                for (lw, lc) in left.iter() {
                    out.add_term(lw.clone(), right.clone(), lc * &c);
                }
            }
            // Advance the mixed-radix counter over block choices.
            let mut j = 0;
            loop {
                if j == blocks.len() {
                    break;
                }
                choice[j] += 1;
                if choice[j] < blocks[j].len() {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
            if j == blocks.len() {
                break;
            }
        }
    }
    out
}

fn flatten(level: u32, factors: &[IndexWord]) -> LinComb<IndexWord> {
    let mut acc = LinComb::from_word(IndexWord::empty(level));
    for f in factors {
        acc = tsha(&acc, &LinComb::from_word(f.clone())).expect("factors share the level");
    }
    acc
}

/// The coproduct, extended linearly to combinations.
pub fn coproduct(u: &LinComb<IndexWord>) -> TensorComb {
    let mut out = TensorComb::zero(u.level());
    for (w, c) in u.iter() {
        for ((l, r), d) in coproduct_word(w).iter() {
            out.add_term(l.clone(), r.clone(), d * c);
        }
    }
    out
}

/// `ε(∅) = 1`, zero on nonempty words.
pub fn counit(u: &LinComb<IndexWord>) -> CycloNum {
    u.coeff(&IndexWord::empty(u.level()))
}

/// Product in the tensor square: `(a ⊗ b)(c ⊗ d) = (a ⊔̃ c) ⊗ (b ⊔̃ d)`.
pub fn tensor_product(s: &TensorComb, t: &TensorComb) -> Result<TensorComb> {
    if s.level() != t.level() {
        return Err(Error::LevelMismatch(s.level(), t.level()));
    }
    let mut out = TensorComb::zero(s.level());
    for ((a, b), c1) in s.iter() {
        for ((c, d), c2) in t.iter() {
            let left = tsha(&LinComb::from_word(a.clone()), &LinComb::from_word(c.clone()))?;
            let right = tsha(&LinComb::from_word(b.clone()), &LinComb::from_word(d.clone()))?;
            let coeff = c1 * c2;
            for (l, lc) in left.iter() {
                for (r, rc) in right.iter() {
                    out.add_term(l.clone(), r.clone(), &(lc * rc) * &coeff);
                }
            }
        }
    }
    Ok(out)
}

/// Three-fold tensors, used to state coassociativity.
pub type Tensor3 = BTreeMap<(IndexWord, IndexWord, IndexWord), CycloNum>;

fn add3(out: &mut Tensor3, key: (IndexWord, IndexWord, IndexWord), c: CycloNum) {
    let slot = out.entry(key.clone()).or_insert_with(|| CycloNum::zero(c.level()));
    *slot = &*slot + &c;
    if slot.is_zero() {
        out.remove(&key);
    }
}

/// `(Δ ⊗ id) Δ(w)`.
pub fn coproduct_left_twice(w: &IndexWord) -> Tensor3 {
    let mut out = Tensor3::new();
    for ((l, r), c) in coproduct_word(w).iter() {
        for ((ll, lr), d) in coproduct_word(l).iter() {
            add3(&mut out, (ll.clone(), lr.clone(), r.clone()), c * d);
        }
    }
    out
}

/// `(id ⊗ Δ) Δ(w)`.
pub fn coproduct_right_twice(w: &IndexWord) -> Tensor3 {
    let mut out = Tensor3::new();
    for ((l, r), c) in coproduct_word(w).iter() {
        for ((rl, rr), d) in coproduct_word(r).iter() {
            add3(&mut out, (l.clone(), rl.clone(), rr.clone()), c * d);
        }
    }
    out
}

/// `Σ coeff · f(left) · g(right)`, accumulated through `fold`.
pub fn convolve<A, B, C, E>(
    tc: &TensorComb,
    mut f: impl FnMut(&IndexWord) -> std::result::Result<A, E>,
    mut g: impl FnMut(&IndexWord) -> std::result::Result<B, E>,
    init: C,
    mut fold: impl FnMut(&mut C, &CycloNum, A, B),
) -> std::result::Result<C, E> {
    let mut acc = init;
    for ((l, r), c) in tc.iter() {
        let a = f(l)?;
        let b = g(r)?;
        fold(&mut acc, c, a, b);
    }
    Ok(acc)
}

/// `Σ_{i=0}^{n} (-1)^i (a_i ⋯ a_1) ⧢ (a_{i+1} ⋯ a_n)`, which vanishes for
/// every nonempty word.
pub fn antipode_sum(w: &LetterWord) -> LinComb<LetterWord> {
    let level = w.level();
    let letters = w.letters();
    let mut out = LinComb::zero(level);
    for i in 0..=letters.len() {
        let rev: Vec<_> = letters[..i].iter().rev().copied().collect();
        let head = LetterWord::from_raw(level, rev);
        let tail = LetterWord::from_raw(level, letters[i..].to_vec());
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for (v, c) in crate::products::shuffle_words(&head, &tail) {
            out.add_term(v, CycloNum::from_rational(level, rug::Rational::from(c * sign)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(level: u32, e: &[(u32, i64)]) -> IndexWord {
        IndexWord::new(level, e).unwrap()
    }

    #[test]
    fn depth_two_golden_identity() {
        let d = coproduct_word(&w(2, &[(2, 1), (3, 1)]));
        let one = CycloNum::one(2);
        let mut expect = TensorComb::zero(2);
        expect.add_term(w(2, &[(2, 1), (3, 1)]), IndexWord::empty(2), one.clone());
        expect.add_term(IndexWord::empty(2), w(2, &[(2, 1), (3, 1)]), one.clone());
        expect.add_term(w(2, &[(2, 1)]), w(2, &[(3, 1)]), one.clone());
        expect.add_term(w(2, &[(3, 0)]), w(2, &[(2, 1)]), CycloNum::from_int(2, 3));
        expect.add_term(w(2, &[(2, 0)]), w(2, &[(3, 1)]), one);
        assert_eq!(d, expect);
    }

    #[test]
    fn primitive_in_depth_one() {
        let d = coproduct_word(&w(3, &[(4, 2)]));
        assert_eq!(d.len(), 2);
        assert!(d.coeff(&IndexWord::empty(3), &w(3, &[(4, 2)])).is_one());
        assert!(d.coeff(&w(3, &[(4, 2)]), &IndexWord::empty(3)).is_one());
    }

    #[test]
    fn empty_word_is_grouplike() {
        let d = coproduct_word(&IndexWord::empty(2));
        assert_eq!(d.len(), 1);
        assert!(d.coeff(&IndexWord::empty(2), &IndexWord::empty(2)).is_one());
    }

    #[test]
    fn antipode_sum_vanishes() {
        let lw = w(3, &[(2, 1), (1, 0), (2, 2)]).to_letters();
        assert!(antipode_sum(&lw).is_zero());
    }
}
