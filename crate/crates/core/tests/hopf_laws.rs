use mes_core::hopf::{coproduct, coproduct_left_twice, coproduct_right_twice, coproduct_word, tensor_product};
use mes_core::products::tsha;
use mes_core::words::{IndexWord, LinComb};

fn all_words(level: u32, max_weight: u32, max_depth: usize) -> Vec<IndexWord> {
    IndexWord::enumerate(level, max_weight, max_depth, 1)
}

#[test]
fn coassociative_up_to_weight_six() {
    for w in all_words(2, 6, 3) {
        assert_eq!(coproduct_left_twice(&w), coproduct_right_twice(&w), "word {w}");
    }
}

#[test]
fn counit_laws() {
    for w in all_words(3, 4, 3) {
        let d = coproduct_word(&w);
        let empty = IndexWord::empty(3);
        for ((l, r), c) in d.iter() {
            if l.is_empty() || r.is_empty() {
                let other = if l.is_empty() { r } else { l };
                assert!(other == &w && c.is_one(), "word {w}: {l}⊗{r} has {c}");
            }
        }
        assert!(d.coeff(&empty, &w).is_one());
        assert!(d.coeff(&w, &empty).is_one());
    }
}

#[test]
fn multiplicative_for_twisted_shuffle() {
    for level in 1..=3 {
        let words = all_words(level, 4, 3);
        for u in &words {
            for v in &words {
                if u.weight() + v.weight() > 5 {
                    continue;
                }
                let prod = tsha(&LinComb::from_word(u.clone()), &LinComb::from_word(v.clone())).unwrap();
                let lhs = coproduct(&prod);
                let rhs = tensor_product(&coproduct_word(u), &coproduct_word(v)).unwrap();
                assert_eq!(lhs, rhs, "{u} ⊔̃ {v}");
            }
        }
    }
}
