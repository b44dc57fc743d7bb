//! Fixed inputs shared by the benchmarks.

use mes_core::numerics::PrecisionCtx;
use mes_core::words::IndexWord;

/// `(n_1,…,n_r; a_1,…,a_r)` at level `level`.
pub fn word(level: u32, entries: &[(u32, i64)]) -> IndexWord {
    IndexWord::new(level, entries).expect("benchmark words are valid")
}

/// Words of increasing depth at level 2.
pub fn ladder() -> Vec<IndexWord> {
    vec![
        word(2, &[(4, 1)]),
        word(2, &[(2, 1), (3, 1)]),
        word(2, &[(2, 1), (2, 0), (3, 1)]),
        word(2, &[(2, 1), (2, 0), (2, 1), (2, 1)]),
    ]
}

/// The context benchmarks run at: default precision, a short cutoff.
pub fn ctx() -> PrecisionCtx {
    PrecisionCtx { series_cutoff: 5_000, ..PrecisionCtx::default() }
}
