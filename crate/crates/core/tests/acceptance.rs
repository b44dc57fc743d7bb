//! Acceptance run: one PASS/FAIL line per criterion, with timing.
//!
//! Criteria 8 and 9 compare against identities as printed; those statements
//! do not hold (see the indented diagnostics), so their FAIL lines are
//! expected and do not change the exit status. Any other failure does.
//! Pass criterion numbers as arguments to run a subset.

use std::collections::HashMap;
use std::rc::Rc;
use std::time::Instant;

use mes_core::cyclo::CycloNum;
use mes_core::eisenstein::{lattice_oracle, Expander};
use mes_core::hopf::{
    antipode_sum, coproduct, coproduct_left_twice, coproduct_right_twice, coproduct_word, tensor_product,
};
use mes_core::numerics::{
    multitangent_via_monotangents, psi_mono_numeric, psi_mono_qseries, psi_multi_numeric, two_pi_i_power,
    Estimate, PrecisionCtx, ZetaCache,
};
use mes_core::products::{harmonic, harmonic_words, index_shuffle, shuffle, shuffle_reg0, tast, tast_words, tsha};
use mes_core::qseries::{g_hat, g_sha_hat, QSeries};
use mes_core::relations::{cusp_decomposition_demo, default_suite, RelationReport};
use mes_core::words::{IndexWord, Letter, LetterWord, LinComb, TensorComb};
use rug::{Complex, Rational};

/// Criteria whose printed statements are known not to hold.
const KNOWN_DEFECTS: [u32; 2] = [8, 9];

struct Verdict {
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self { pass, summary: summary.into(), notes: Vec::new() }
    }
}

/// Collects the first few violations of a family of checks.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn w(level: u32, e: &[(u32, i64)]) -> IndexWord {
    IndexWord::new(level, e).unwrap()
}

fn one(u: &IndexWord) -> LinComb<IndexWord> {
    LinComb::from_word(u.clone())
}

fn analytic_ctx() -> PrecisionCtx {
    PrecisionCtx { precision: 128, series_cutoff: 4000, tail_order: 24 }
}

fn words(level: u32, max_weight: u32, max_depth: usize, min_n: u32) -> Vec<IndexWord> {
    IndexWord::enumerate(level, max_weight, max_depth, min_n)
}

fn criterion_1() -> Verdict {
    let d = coproduct_word(&w(2, &[(2, 1), (3, 1)]));
    let unit = CycloNum::one(2);
    let mut expected = TensorComb::zero(2);
    expected.add_term(IndexWord::empty(2), w(2, &[(2, 1), (3, 1)]), unit.clone());
    expected.add_term(w(2, &[(2, 0)]), w(2, &[(3, 1)]), unit.clone());
    expected.add_term(w(2, &[(2, 1)]), w(2, &[(3, 1)]), unit.clone());
    expected.add_term(w(2, &[(3, 0)]), w(2, &[(2, 1)]), CycloNum::from_int(2, 3));
    expected.add_term(w(2, &[(2, 1), (3, 1)]), IndexWord::empty(2), unit);
    Verdict::new(d == expected, format!("coproduct of (2,3;1,1) at N=2: {d}"))
}

fn criterion_2() -> Verdict {
    let ctx = analytic_ctx();
    let order = 10;
    let e = Expander::new(ctx);
    let g = e.g_fourier(&one(&w(2, &[(2, 1), (3, 1)])), order).unwrap();
    let empty = IndexWord::empty(2);
    let parts: [(IndexWord, IndexWord, i64); 5] = [
        (w(2, &[(2, 1), (3, 1)]), empty.clone(), 1),
        (w(2, &[(2, 0)]), w(2, &[(3, 1)]), 1),
        (w(2, &[(2, 1)]), w(2, &[(3, 1)]), 1),
        (w(2, &[(3, 0)]), w(2, &[(2, 1)]), 3),
        (empty.clone(), w(2, &[(2, 1), (3, 1)]), 1),
    ];
    let prec = ctx.precision + 32;
    let mut worst: f64 = 0.0;
    for m in 0..=order {
        let mut acc = Complex::new(prec);
        for (u, v, c) in &parts {
            let z = if u.is_empty() { Estimate::one(prec) } else { e.zetas().zeta(u).unwrap() };
            let gm = if v.is_empty() {
                Complex::with_val(prec, if m == 0 { 1 } else { 0 })
            } else {
                g_hat(v, order).series.coeff(m).to_complex(prec)
            };
            acc += Complex::with_val(prec, &z.value * two_pi_i_power(2, v.weight(), prec)) * gm * *c;
        }
        worst = worst.max(g.coeff(m).distance(&Estimate::exact(acc)));
    }
    Verdict::new(worst <= 1e-8, format!("G(2,3;1,1) N=2 M=10 vs five-term assembly: max gap {worst:.2e}"))
}

/// Exact `π`-route for `⊛̃` on basis words. Coefficients live in
/// `Z[x]/(x^N − 1)` over the common denominator `N^(depth u + depth v)` and
/// are reduced modulo `Φ_N` only where the two sides differ. Expansions and
/// word-level harmonic products are memoised by interned word ids.
struct PiRoute {
    level: u32,
    ids: HashMap<IndexWord, usize>,
    words: Vec<IndexWord>,
    pi: HashMap<usize, Rc<Vec<(usize, usize)>>>,
    harmonic: HashMap<(usize, usize), Rc<Vec<(usize, i64)>>>,
}

type Accumulator = HashMap<usize, [i64; 3]>;

impl PiRoute {
    fn new(level: u32) -> Self {
        assert!(level <= 3);
        Self { level, ids: HashMap::new(), words: Vec::new(), pi: HashMap::new(), harmonic: HashMap::new() }
    }

    fn id(&mut self, w: &IndexWord) -> usize {
        if let Some(&i) = self.ids.get(w) {
            return i;
        }
        self.words.push(w.clone());
        self.ids.insert(w.clone(), self.words.len() - 1);
        self.words.len() - 1
    }

    /// `N^depth · π(w)` as (word, exponent of η) pairs, each with coefficient one.
    fn pi(&mut self, id: usize) -> Rc<Vec<(usize, usize)>> {
        if let Some(p) = self.pi.get(&id) {
            return p.clone();
        }
        let n = self.level as i64;
        let mut partial: Vec<(Vec<(u32, i64)>, i64)> = vec![(Vec::new(), 0)];
        for &(k, a) in self.words[id].entries() {
            partial = partial
                .iter()
                .flat_map(|(prefix, e)| {
                    (0..n).map(move |b| {
                        let mut p = prefix.clone();
                        p.push((k, b));
                        (p, e - a as i64 * b)
                    })
                })
                .collect();
        }
        let out: Vec<(usize, usize)> =
            partial.into_iter().map(|(e, x)| (self.id(&w(self.level, &e)), x.rem_euclid(n) as usize)).collect();
        let out = Rc::new(out);
        self.pi.insert(id, out.clone());
        out
    }

    fn harmonic(&mut self, a: usize, b: usize) -> Rc<Vec<(usize, i64)>> {
        if let Some(h) = self.harmonic.get(&(a, b)) {
            return h.clone();
        }
        let terms = harmonic_words(&self.words[a].clone(), &self.words[b].clone());
        let out = Rc::new(terms.into_iter().map(|(x, c)| (self.id(&x), c as i64)).collect::<Vec<_>>());
        self.harmonic.insert((a, b), out.clone());
        out
    }

    /// Whether `π(u ⊛̃ v) = π u ∗ π v`.
    fn holds(&mut self, u: &IndexWord, v: &IndexWord) -> bool {
        let n = self.level as usize;
        let scale = (u.depth() + v.depth()) as u32;
        let mut left = Accumulator::new();
        for (x, k) in tast_words(u, v) {
            let factor = k as i64 * (n as i64).pow(scale - x.depth() as u32);
            let id = self.id(&x);
            for &(y, e) in self.pi(id).iter() {
                left.entry(y).or_default()[e] += factor;
            }
        }
        let mut right = Accumulator::new();
        let (pu, pv) = (self.id(u), self.id(v));
        let (pu, pv) = (self.pi(pu), self.pi(pv));
        for &(b, eb) in pu.iter() {
            for &(c, ec) in pv.iter() {
                let e = (eb + ec) % n;
                for &(y, m) in self.harmonic(b, c).iter() {
                    right.entry(y).or_default()[e] += m;
                }
            }
        }
        for (y, r) in &right {
            let l = left.remove(y).unwrap_or_default();
            if l != *r && !self.vanishes(&l, r) {
                return false;
            }
        }
        left.values().all(|l| self.vanishes(l, &[0; 3]))
    }

    fn vanishes(&self, l: &[i64; 3], r: &[i64; 3]) -> bool {
        let n = self.level as usize;
        let diff = (0..n).map(|i| Rational::from(l[i] - r[i])).collect();
        CycloNum::from_coeffs(self.level, diff).is_zero()
    }
}

fn criterion_3() -> Verdict {
    type Product = fn(&LinComb<IndexWord>, &LinComb<IndexWord>) -> mes_core::error::Result<LinComb<IndexWord>>;
    let products: [(&str, Product); 4] = [("sha", index_shuffle), ("ast", harmonic), ("tsha", tsha), ("tast", tast)];
    let mut t = Tally::default();
    for level in 1..=3u32 {
        let all = words(level, 6, 6, 1);
        let mut route = PiRoute::new(level);
        for u in &all {
            for v in all.iter().filter(|v| u.weight() + v.weight() <= 6) {
                let (a, b) = (one(u), one(v));
                for (name, p) in products {
                    t.check(p(&a, &b).unwrap() == p(&b, &a).unwrap(), || format!("{name} not commutative on {u}, {v}"));
                }
                // Both sides commute, so unordered pairs suffice from here on.
                if u > v {
                    continue;
                }
                t.check(route.holds(u, v), || format!("tast differs from π-route on {u}, {v}"));
                let rho = index_shuffle(&a.rho(), &b.rho()).unwrap().rho_inv();
                t.check(tsha(&a, &b).unwrap() == rho, || format!("tsha differs from ρ-route on {u}, {v}"));
                let (x, y) = (LinComb::from_word(u.to_letters()), LinComb::from_word(v.to_letters()));
                let lhs = shuffle_reg0(&shuffle(&x, &y).unwrap()).unwrap();
                let rhs = shuffle(&shuffle_reg0(&x).unwrap(), &shuffle_reg0(&y).unwrap()).unwrap();
                t.check(lhs == rhs, || format!("reg0 not a homomorphism on {u}, {v}"));
            }
        }
        // Associativity on triples of total weight ≤ 6.
        for (name, p) in products {
            let mut pairs = HashMap::new();
            for u in &all {
                for v in all.iter().filter(|v| u.weight() + v.weight() <= 5) {
                    pairs.insert((u.clone(), v.clone()), p(&one(u), &one(v)).unwrap());
                }
            }
            for ((u, v), uv) in &pairs {
                for x in all.iter().filter(|x| u.weight() + v.weight() + x.weight() <= 6) {
                    let left = p(uv, &one(x)).unwrap();
                    let right = p(&one(u), &pairs[&(v.clone(), x.clone())]).unwrap();
                    t.check(left == right, || format!("{name} not associative on {u}, {v}, {x}"));
                }
            }
        }
        let mut layer = vec![LetterWord::empty(level)];
        for _ in 0..6 {
            let mut next = Vec::new();
            for lw in &layer {
                for l in std::iter::once(Letter::X).chain((0..level).map(Letter::Y)) {
                    let mut ls = lw.letters().to_vec();
                    ls.push(l);
                    let nw = LetterWord::new(level, ls).unwrap();
                    t.check(antipode_sum(&nw).is_zero(), || format!("antipode sum of {nw} is nonzero"));
                    next.push(nw);
                }
            }
            layer = next;
        }
    }
    let mut v = Verdict::new(t.ok(), format!("{} exact identities at N ≤ 3, weight ≤ 6", t.checked));
    v.notes = t.failures;
    v
}

fn criterion_4() -> Verdict {
    let mut t = Tally::default();
    for u in words(2, 6, 3, 1) {
        let d = coproduct_word(&u);
        for ((l, r), _) in d.iter() {
            t.check(l.weight() + r.weight() == u.weight(), || format!("grading fails on {u}: {l} ⊗ {r}"));
        }
        let empty = IndexWord::empty(2);
        t.check(d.coeff(&empty, &u).is_one() && d.coeff(&u, &empty).is_one(), || format!("counit fails on {u}"));
        t.check(coproduct_left_twice(&u) == coproduct_right_twice(&u), || format!("coassociativity fails on {u}"));
    }
    let all = words(2, 5, 5, 1);
    for u in &all {
        for v in all.iter().filter(|v| u.weight() + v.weight() <= 5) {
            let lhs = coproduct(&tsha(&one(u), &one(v)).unwrap());
            let rhs = tensor_product(&coproduct_word(u), &coproduct_word(v)).unwrap();
            t.check(lhs == rhs, || format!("Δ not multiplicative on {u} ⊔̃ {v}"));
        }
    }
    let mut v = Verdict::new(t.ok(), format!("{} Hopf identities at N = 2", t.checked));
    v.notes = t.failures;
    v
}

fn criterion_5() -> Verdict {
    let mut t = Tally::default();
    for level in 1..=3u32 {
        for u in words(level, 6, 3, 2) {
            t.check(g_sha_hat(&u, 30) == g_hat(&u, 30), || format!("regularised series differs on {u}"));
        }
        let small = words(level, 3, 3, 1);
        for u in &small {
            for v in small.iter().filter(|v| u.weight() + v.weight() <= 4) {
                let lhs = g_sha_hat(u, 20).series.checked_mul(&g_sha_hat(v, 20).series).unwrap();
                let mut rhs = QSeries::zero(level, 20);
                for (x, c) in tsha(&one(u), &one(v)).unwrap().iter() {
                    rhs = rhs.checked_add(&g_sha_hat(x, 20).series.scale(c)).unwrap();
                }
                t.check(lhs == rhs, || format!("series not ⊔̃-multiplicative on {u}, {v}"));
            }
        }
    }
    for level in 2..=3u32 {
        let order = 20;
        for base in words(1, 4, 3, 1) {
            let ns = base.ns();
            let mut acc = QSeries::zero(level, order);
            for code in 0..level.pow(ns.len() as u32) {
                let mut c = code;
                let e: Vec<(u32, i64)> = ns
                    .iter()
                    .map(|&n| {
                        let a = c % level;
                        c /= level;
                        (n, a as i64)
                    })
                    .collect();
                acc = acc.checked_add(&g_sha_hat(&w(level, &e), order).series).unwrap();
            }
            let factor = CycloNum::from_int(level, (level as i64).pow(base.weight()));
            let rhs = g_sha_hat(&base, order).series.dilate(level as usize).with_level(level).unwrap().scale(&factor);
            t.check(acc == rhs, || format!("distribution fails for {base} at N = {level}"));
        }
    }
    let mut v = Verdict::new(t.ok(), format!("{} exact q-series identities", t.checked));
    v.notes = t.failures;
    v
}

fn criterion_6() -> Verdict {
    let ctx = analytic_ctx();
    let cache = ZetaCache::new(ctx);
    let mut worst = [0f64; 5];
    let mut t = Tally::default();
    for level in 1..=4u32 {
        for u in words(level, 5, 5, 1).into_iter().filter(|u| u.is_admissible()) {
            let a = cache.zeta(&u).unwrap();
            let d = a.distance(&cache.zeta_tsha(&u).unwrap()).max(a.distance(&cache.zeta_via_harmonic(&u).unwrap()));
            worst[0] = worst[0].max(d);
            t.check(d <= 1e-8, || format!("three routes differ on {u}: {d:.2e}"));
        }
    }
    for level in 1..=3u32 {
        let adm: Vec<IndexWord> = words(level, 4, 3, 1).into_iter().filter(|u| u.is_admissible()).collect();
        for u in &adm {
            for v in adm.iter().filter(|v| u.weight() + v.weight() <= 6) {
                let lhs = cache.zeta(u).unwrap().mul(&cache.zeta(v).unwrap());
                let mut rhs = Estimate::zero(ctx.precision);
                for (x, c) in tast(&one(u), &one(v)).unwrap().iter() {
                    rhs = rhs.add(&cache.zeta(x).unwrap().scale(&c.to_complex(ctx.precision + 32)));
                }
                let d = lhs.distance(&rhs);
                worst[1] = worst[1].max(d);
                t.check(d <= 1e-8, || format!("stuffle fails on {u}, {v}: {d:.2e}"));
            }
        }
    }
    let taus = [Complex::with_val(160, (0, 1)), Complex::with_val(160, (0.5, 1.5))];
    for tau in &taus {
        for level in 1..=3u32 {
            for n in 1..=5u32 {
                for a in 0..level as i64 {
                    let d = psi_mono_numeric(n, a, level, tau, &ctx)
                        .unwrap()
                        .distance(&psi_mono_qseries(n, a, level, tau, &ctx).unwrap());
                    worst[2] = worst[2].max(d);
                    t.check(d <= 1e-8, || format!("monotangent sides differ at n={n} a={a} N={level}: {d:.2e}"));
                }
            }
        }
    }
    let taus = [Complex::with_val(160, (0, 1)), Complex::with_val(160, (0.3, 1.1))];
    for level in 1..=2u32 {
        for u in words(level, 6, 3, 2).into_iter().filter(|u| u.depth() >= 2) {
            for tau in &taus {
                let a: Vec<i64> = u.residues().iter().map(|&x| x as i64).collect();
                let direct = psi_multi_numeric(&u.ns(), &a, level, tau, &ctx).unwrap();
                let d = direct.distance(&multitangent_via_monotangents(&u, tau, 1, &cache).unwrap());
                worst[3] = worst[3].max(d);
                t.check(d <= 1e-6, || format!("multitangent reduction fails on {u}: {d:.2e}"));
            }
        }
    }
    for u in words(2, 7, 3, 2) {
        let r = mes_core::relations::check_antipode_zeta(&u, &cache).unwrap();
        worst[4] = worst[4].max(r.residual);
        t.check(r.residual <= 1e-6, || format!("antipode relation fails on {u}: {:.2e}", r.residual));
    }
    let mut v = Verdict::new(
        t.ok(),
        format!(
            "{} checks; worst: routes {:.1e}, stuffle {:.1e}, monotangent {:.1e}, multitangent {:.1e}, antipode {:.1e}",
            t.checked, worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    );
    v.notes = t.failures;
    v
}

fn criterion_7() -> Verdict {
    let e = Expander::new(PrecisionCtx { precision: 96, series_cutoff: 4000, tail_order: 24 });
    let mut worst: f64 = 0.0;
    let mut t = Tally::default();
    for u in [w(1, &[(4, 0)]), w(2, &[(4, 1)]), w(2, &[(3, 1), (3, 1)])] {
        let g = e.g_fourier(&one(&u), 15).unwrap();
        for im in [1.0, 2.0] {
            let tau = Complex::with_val(96, (0.0, im));
            let d = g.evaluate(&tau).unwrap().distance(&lattice_oracle(&u, &tau, 8, 20_000).unwrap());
            worst = worst.max(d);
            t.check(d <= 1e-3, || format!("{u} at τ = {im}i: {d:.2e}"));
        }
    }
    let mut v = Verdict::new(t.ok(), format!("6 lattice comparisons, worst gap {worst:.2e}"));
    v.notes = t.failures;
    v
}

fn criterion_8(reports: &[RelationReport]) -> Verdict {
    let in_scope = |r: &RelationReport| {
        matches!(
            r.relation.as_str(),
            "restricted_double_shuffle"
                | "linear_identity"
                | "distribution"
                | "sum_formula"
                | "weighted_sum_formula"
                | "gen_function_identity"
        )
    };
    let scoped: Vec<&RelationReport> = reports.iter().filter(|r| in_scope(r)).collect();
    let failing: Vec<&&RelationReport> = scoped.iter().filter(|r| !r.pass).collect();
    let mut v = Verdict::new(
        failing.is_empty(),
        format!("{}/{} printed relations hold at M = 15", scoped.len() - failing.len(), scoped.len()),
    );
    for r in failing {
        v.notes.push(format!("{} {}: residual {:.3e}", r.relation, r.params, r.residual));
    }
    for r in reports.iter().filter(|r| r.relation.ends_with("_derived")) {
        v.notes.push(format!(
            "{} {} {}: residual {:.3e}",
            if r.pass { "holds" } else { "FAILS" },
            r.relation,
            r.params,
            r.residual
        ));
    }
    v
}

fn criterion_9() -> Verdict {
    let e = Expander::new(analytic_ctx());
    let r = cusp_decomposition_demo(10, &e).unwrap();
    let mut v = Verdict::new(r.pass, format!("weight-12 combination vs Δ/680: relative residual {:.3e}", r.residual));
    for key in ["constant_term", "fitted_scalar", "fitted_over_two_pi_i_12", "residual_after_fit"] {
        v.notes.push(format!("{key} = {}", r.details[key]));
    }
    v
}

fn main() {
    // Numeric arguments select criteria; anything else is ignored.
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    let mut report = |id: u32, title: &str, f: &mut dyn FnMut() -> Verdict| {
        if !only.is_empty() && !only.contains(&id) {
            return;
        }
        let start = Instant::now();
        let v = f();
        let secs = start.elapsed().as_secs_f64();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {id} ({title}) [{secs:.2}s]: {}", v.summary);
        for n in &v.notes {
            println!("    {n}");
        }
        if !v.pass && !KNOWN_DEFECTS.contains(&id) {
            unexpected.push(id);
        }
    };
    report(1, "coproduct golden", &mut criterion_1);
    report(2, "Fourier golden", &mut criterion_2);
    report(3, "exact algebra", &mut criterion_3);
    report(4, "Hopf", &mut criterion_4);
    report(5, "q-series", &mut criterion_5);
    report(6, "analytic", &mut criterion_6);
    report(7, "lattice oracle", &mut criterion_7);
    report(8, "relation suite", &mut || criterion_8(&default_suite(15, &analytic_ctx()).unwrap()));
    report(9, "cusp form", &mut criterion_9);
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
