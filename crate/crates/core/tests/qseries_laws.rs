use mes_core::cyclo::CycloNum;
use mes_core::products::tsha;
use mes_core::qseries::{g_hat, g_sha_hat, QSeries};
use mes_core::words::{IndexWord, LinComb};
use rug::Rational;

fn words_upto(level: u32, max_weight: u32, max_depth: usize, min_n: u32) -> Vec<IndexWord> {
    IndexWord::enumerate(level, max_weight, max_depth, min_n)
}

/// Direct enumeration of all (d, c) tuples in the definition of ĝ.
fn g_hat_brute(w: &IndexWord, order: usize) -> QSeries {
    let level = w.level();
    let e = w.entries();
    let mut coeffs = vec![CycloNum::zero(level); order + 1];
    fn rec(
        e: &[(u32, u32)],
        level: u32,
        prev_d: usize,
        m: usize,
        c: CycloNum,
        order: usize,
        coeffs: &mut Vec<CycloNum>,
    ) {
        if e.is_empty() {
            coeffs[m] = &coeffs[m] + &c;
            return;
        }
        let (n, a) = e[0];
        for d in prev_d + 1..=order {
            for k in 1..=order {
                if m + k * d > order {
                    break;
                }
                let mut f = Rational::from(k as i64);
                f = f.pow(n - 1);
                let fact: u64 = (1..n as u64).product::<u64>().max(1);
                f /= fact;
                let term = CycloNum::root_power(level, a as i64 * k as i64).scale(&f);
                rec(&e[1..], level, d, m + k * d, &c * &term, order, coeffs);
            }
        }
    }
    rec(e, level, 0, 0, CycloNum::one(level), order, &mut coeffs);
    QSeries::from_coeffs(level, coeffs).unwrap()
}

trait PowR {
    fn pow(self, k: u32) -> Self;
}
impl PowR for Rational {
    fn pow(self, k: u32) -> Self {
        let mut out = Rational::from(1);
        for _ in 0..k {
            out *= &self;
        }
        out
    }
}

fn sum_series(c: &LinComb<IndexWord>, order: usize, f: impl Fn(&IndexWord, usize) -> QSeries) -> QSeries {
    let mut acc = QSeries::zero(c.level(), order);
    for (w, k) in c.iter() {
        acc = acc.checked_add(&f(w, order).scale(k)).unwrap();
    }
    acc
}

#[test]
fn divisor_series_matches_brute_force() {
    for level in 1..=3 {
        for w in words_upto(level, 5, 3, 1) {
            assert_eq!(g_hat(&w, 12).series, g_hat_brute(&w, 12), "{w}");
        }
    }
}

/// Depth two: the two compositions of H∘exp written out by hand.
#[test]
fn depth_two_regularised_series_by_hand() {
    for level in 1..=3u32 {
        for w in words_upto(level, 5, 2, 1).into_iter().filter(|w| w.depth() == 2) {
            let order = 12;
            let (k1, a1) = w.entries()[0];
            let (k2, a2) = w.entries()[1];
            let mut coeffs = vec![CycloNum::zero(level); order + 1];
            let fact = |n: u32| -> i64 { (1..=n as i64).product::<i64>().max(1) };
            for d1 in 1..=order {
                for d2 in d1 + 1..=order {
                    for c1 in 1..=order {
                        for c2 in 1..=order {
                            let m = c1 * d1 + c2 * d2;
                            if m > order {
                                continue;
                            }
                            let x = ((d2 - d1) as i64).pow(k1 - 1) * (d1 as i64).pow(k2 - 1);
                            let q = Rational::from((x, fact(k1 - 1) * fact(k2 - 1)));
                            let root = (a2 as i64 - a1 as i64) * d1 as i64 + a1 as i64 * d2 as i64;
                            coeffs[m] = &coeffs[m] + &CycloNum::root_power(level, root).scale(&q);
                        }
                    }
                }
                if k1 == 1 {
                    // (q^d/(1-q^d))^2 = Σ_{c≥2} (c-1) q^{cd}
                    for c in 2..=order {
                        let m = c * d1;
                        if m > order {
                            break;
                        }
                        let q = Rational::from(((c as i64 - 1) * (d1 as i64).pow(k2 - 1), 2 * fact(k2 - 1)));
                        coeffs[m] = &coeffs[m] + &CycloNum::root_power(level, a2 as i64 * d1 as i64).scale(&q);
                    }
                }
            }
            assert_eq!(g_sha_hat(&w, order).series, QSeries::from_coeffs(level, coeffs).unwrap(), "{w}");
        }
    }
}

#[test]
fn regularised_equals_plain_when_all_entries_at_least_two() {
    for level in 1..=3 {
        for w in words_upto(level, 6, 2, 2) {
            assert_eq!(g_sha_hat(&w, 30), g_hat(&w, 30), "{w}");
        }
    }
}

#[test]
fn regularised_series_is_tsha_multiplicative() {
    for level in 1..=3 {
        let words = words_upto(level, 3, 2, 1);
        for u in &words {
            for v in &words {
                if u.weight() + v.weight() > 4 {
                    continue;
                }
                let lhs = g_sha_hat(u, 20).series.checked_mul(&g_sha_hat(v, 20).series).unwrap();
                let prod = tsha(&LinComb::from_word(u.clone()), &LinComb::from_word(v.clone())).unwrap();
                let rhs = sum_series(&prod, 20, |w, m| g_sha_hat(w, m).series);
                assert_eq!(lhs, rhs, "{u} ⊔̃ {v}");
            }
        }
    }
}

#[test]
fn distribution_at_the_series_level() {
    for level in 2..=3u32 {
        for base in words_upto(1, 4, 2, 1) {
            let order = 18;
            let ns = base.ns();
            let mut acc = QSeries::zero(level, order);
            let r = ns.len() as u32;
            for code in 0..level.pow(r) {
                let mut c = code;
                let e: Vec<(u32, i64)> = ns
                    .iter()
                    .map(|&n| {
                        let a = c % level;
                        c /= level;
                        (n, a as i64)
                    })
                    .collect();
                let w = IndexWord::new(level, &e).unwrap();
                acc = acc.checked_add(&g_sha_hat(&w, order).series).unwrap();
            }
            let factor = CycloNum::from_int(level, (level as i64).pow(base.weight()));
            let rhs = g_sha_hat(&base, order).series.dilate(level as usize).with_level(level).unwrap().scale(&factor);
            assert_eq!(acc, rhs, "{base} at level {level}");
        }
    }
}

#[test]
fn constant_terms_vanish_in_positive_depth() {
    for w in words_upto(2, 4, 3, 1) {
        assert!(g_hat(&w, 6).series.coeff(0).is_zero());
        assert!(g_sha_hat(&w, 6).series.coeff(0).is_zero());
    }
}
