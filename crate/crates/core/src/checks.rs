//! Invariant suites run by `fungraph check-lemmas`.
//!
//! Each suite checks one family of identities over an exhaustive range of
//! small digraphs and reports the number of cases and any counterexamples.
//! `max_size` caps every enumerated range; the defaults use sizes up to 6.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    cycle, cycle_product, cycle_product_structure, gcd, lcm, product, scalar, sum, SumOfCycles,
};
use crate::digraph::FunctionalDigraph;
use crate::division::{cyclic_divides, factorize, quotients_with, DivisionConfig};
use crate::enumerate::{all_digraphs, EnumFilter};
use crate::error::Result;
use crate::witness::{branch_c, branch_d, build_witness, verify_witness, FixedPointConstruction};
use crate::Verdict;

pub const DEFAULT_MAX_SIZE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub module: &'static str,
    pub name: &'static str,
    pub cases: usize,
    /// At most a handful of counterexamples, described.
    pub failures: Vec<String>,
    pub failure_count: usize,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

struct Tally {
    cases: usize,
    failures: Vec<String>,
    failure_count: usize,
}

impl Tally {
    fn new() -> Self {
        Self { cases: 0, failures: Vec::new(), failure_count: 0 }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < 5 {
                self.failures.push(describe());
            }
        }
    }

    fn finish(self, module: &'static str, name: &'static str) -> SuiteOutcome {
        SuiteOutcome {
            module,
            name,
            cases: self.cases,
            failures: self.failures,
            failure_count: self.failure_count,
        }
    }
}

type Suite = fn(usize) -> Result<SuiteOutcome>;

/// Every suite, in the order `check-lemmas` runs them.
pub const SUITES: &[(&str, &str, Suite)] = &[
    ("algebra", "cycle-products", cycle_products),
    ("algebra", "product-size-and-commutativity", product_commutativity),
    ("algebra", "semiring-laws", semiring_laws),
    ("algebra", "cyclic-part-of-products", cyclic_part_of_products),
    ("algebra", "cycle-sums-in-products", cycle_sums_in_products),
    ("algebra", "prime-power-cycles-irreducible", prime_power_cycles_irreducible),
    ("algebra", "cycle-times-connected", cycle_times_connected),
    ("algebra", "height-of-products", height_of_products),
    ("division", "quotients-sound-and-complete", quotients_sound_and_complete),
    ("division", "divisibility-passes-to-cyclic-parts", divisibility_passes_to_cyclic_parts),
    ("division", "prunes-keep-quotients", prunes_keep_quotients),
    ("witness", "witnesses-verify", witnesses_verify),
    ("witness", "fixed-point-equations", fixed_point_equations),
    ("witness", "disconnected-identity", disconnected_identity),
    ("witness", "long-cycle-identity", long_cycle_identity),
];

pub fn run_all(max_size: usize) -> Result<Vec<SuiteOutcome>> {
    SUITES.iter().map(|(_, _, suite)| suite(max_size)).collect()
}

pub fn run_module(module: &str, max_size: usize) -> Result<Vec<SuiteOutcome>> {
    SUITES
        .iter()
        .filter(|(m, _, _)| *m == module)
        .map(|(_, _, suite)| suite(max_size))
        .collect()
}

fn upto(max: usize) -> Result<Vec<FunctionalDigraph>> {
    let mut out = Vec::new();
    for n in 0..=max {
        out.extend(all_digraphs(EnumFilter::all(n))?);
    }
    Ok(out)
}

fn upto_filtered(max: usize, filter: impl Fn(usize) -> EnumFilter) -> Result<Vec<FunctionalDigraph>> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(all_digraphs(filter(n))?);
    }
    Ok(out)
}

fn cycles(lengths: &[usize]) -> Result<FunctionalDigraph> {
    Ok(SumOfCycles::from_lengths(lengths.to_vec())?.to_digraph())
}

/// `C_a C_b = gcd(a, b) C_lcm(a, b)` for `a, b <= 12`.
pub fn cycle_products(_: usize) -> Result<SuiteOutcome> {
    let mut t = Tally::new();
    for a in 1..=12 {
        for b in 1..=12 {
            let lhs = product(&cycle(a)?, &cycle(b)?);
            let (copies, len) = cycle_product(a, b);
            let rhs = scalar(copies, &cycle(len)?);
            t.check(
                lhs.is_isomorphic(&rhs) && copies == gcd(a, b) && len == lcm(a, b),
                || format!("C{a}·C{b}"),
            );
        }
    }
    Ok(t.finish("algebra", "cycle-products"))
}

pub fn product_commutativity(max_size: usize) -> Result<SuiteOutcome> {
    let all = upto(max_size.min(4))?;
    let mut t = Tally::new();
    for a in &all {
        for b in &all {
            let ab = product(a, b);
            t.check(
                ab.len() == a.len() * b.len() && ab.is_isomorphic(&product(b, a)),
                || format!("{a}·{b}"),
            );
        }
    }
    Ok(t.finish("algebra", "product-size-and-commutativity"))
}

/// Associativity and distributivity on all triples up to size 3 and 100
/// seeded random triples up to size 5.
pub fn semiring_laws(max_size: usize) -> Result<SuiteOutcome> {
    let small = upto(max_size.min(3))?;
    let mut triples = Vec::new();
    for a in &small {
        for b in &small {
            for c in &small {
                triples.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let cap = max_size.min(5);
    let mut random = || {
        let n = rng.gen_range(1..=cap);
        let succ = (0..n).map(|_| rng.gen_range(0..n)).collect();
        FunctionalDigraph::from_successors(succ).expect("in range")
    };
    for _ in 0..100 {
        triples.push((random(), random(), random()));
    }
    let mut t = Tally::new();
    for (a, b, c) in &triples {
        let assoc = product(&product(a, b), c).is_isomorphic(&product(a, &product(b, c)));
        let distrib = product(a, &sum(b, c)).is_isomorphic(&sum(&product(a, b), &product(a, c)));
        t.check(assoc && distrib, || format!("({a}, {b}, {c})"));
    }
    Ok(t.finish("algebra", "semiring-laws"))
}

/// `[AB] = [A][B]` on all pairs up to size 4.
pub fn cyclic_part_of_products(max_size: usize) -> Result<SuiteOutcome> {
    let all = upto(max_size.min(4))?;
    let mut t = Tally::new();
    for a in &all {
        for b in &all {
            let lhs = product(a, b).cyclic_part();
            let rhs = a.cyclic_part().product(&b.cyclic_part());
            t.check(lhs == rhs, || format!("[{a}·{b}]"));
        }
    }
    Ok(t.finish("algebra", "cyclic-part-of-products"))
}

fn sums_of_cycles(max_len: usize, max_parts: usize) -> Vec<Vec<usize>> {
    fn grow(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, min: usize, max_len: usize, left: usize) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for len in min..=max_len {
            cur.push(len);
            grow(out, cur, len, max_len, left - 1);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut out, &mut Vec::new(), 1, max_len, max_parts);
    out
}

/// For sums of cycles `A, B` (lengths <= 6, at most 4 parts), with `[AB]`
/// taken from the digraph product: `C_l ⊆ AB` iff some `lcm(a, b) = l`; every
/// cycle of `AB` is at most `max(A)·max(B)`; if `A = C_l` every cycle is at
/// least `l`.
pub fn cycle_sums_in_products(_: usize) -> Result<SuiteOutcome> {
    let sums = sums_of_cycles(6, 4);
    let digraphs: Vec<FunctionalDigraph> = sums.iter().map(|s| cycles(s)).collect::<Result<_>>()?;
    let mut t = Tally::new();
    for (sa, a) in sums.iter().zip(&digraphs) {
        for (sb, b) in sums.iter().zip(&digraphs) {
            let ab = product(a, b).cyclic_part();
            let mut lengths: Vec<usize> = sa.iter().flat_map(|&x| sb.iter().map(move |&y| lcm(x, y))).collect();
            lengths.sort_unstable();
            lengths.dedup();
            let mut present: Vec<usize> = ab.lengths().to_vec();
            present.dedup();
            let max_a = *sa.iter().max().expect("non-empty");
            let max_b = *sb.iter().max().expect("non-empty");
            let bounded = ab.max_len().is_some_and(|m| m <= max_a * max_b);
            let single = sa.len() != 1 || ab.min_len().is_some_and(|m| m >= sa[0]);
            t.check(present == lengths && bounded && single, || format!("{a}·{b}"));
        }
    }
    Ok(t.finish("algebra", "cycle-sums-in-products"))
}

/// `C_l` has no factorization into two digraphs other than `C1` for the prime
/// powers `l` in `{2, 3, 4, 5, 7, 8, 9}`.
pub fn prime_power_cycles_irreducible(_: usize) -> Result<SuiteOutcome> {
    let mut t = Tally::new();
    for l in [2, 3, 4, 5, 7, 8, 9] {
        let f = factorize(&cycle(l)?, &DivisionConfig::default())?;
        t.check(f.irreducible == Verdict::Yes, || format!("C{l}: {:?}", f.factors));
    }
    Ok(t.finish("algebra", "prime-power-cycles-irreducible"))
}

/// `C_n X` for connected `X` with cycle `l`: `gcd(n, l)` isomorphic components
/// on cycles of length `lcm(n, l)`, and `C_n X = nX` when `n | l`.
pub fn cycle_times_connected(max_size: usize) -> Result<SuiteOutcome> {
    let connected = upto_filtered(max_size.min(6), EnumFilter::connected)?;
    let mut t = Tally::new();
    for x in &connected {
        let l = x.components()[0].cycle_len;
        for n in 1..=6 {
            let ok = match cycle_product_structure(n, x) {
                Ok(s) => {
                    let whole = scalar(s.count, &s.representative);
                    let prod = product(&cycle(n)?, x);
                    let shape = s.count == gcd(n, l) && s.cycle_len == lcm(n, l) && whole.is_isomorphic(&prod);
                    shape && (l % n != 0 || prod.is_isomorphic(&scalar(n, x)))
                }
                Err(_) => false,
            };
            t.check(ok, || format!("C{n}·{x}"));
        }
    }
    Ok(t.finish("algebra", "cycle-times-connected"))
}

/// `d(XY) = max(d(X), d(Y))` for `X, Y` in F1 up to size 5.
pub fn height_of_products(max_size: usize) -> Result<SuiteOutcome> {
    let f1 = upto_filtered(max_size.min(5), |n| EnumFilter::in_class(n, 1))?;
    let mut t = Tally::new();
    for x in &f1 {
        for y in &f1 {
            let dx = x.height_profile()?.height;
            let dy = y.height_profile()?.height;
            let ok = product(x, y).height_profile().is_ok_and(|p| p.height == dx.max(dy));
            t.check(ok, || format!("d({x}·{y})"));
        }
    }
    Ok(t.finish("algebra", "height-of-products"))
}

/// For every `X` and every `A` up to size 6, the pruned quotient search
/// returns exactly the digraphs found by multiplying out every candidate.
pub fn quotients_sound_and_complete(max_size: usize) -> Result<SuiteOutcome> {
    let max = max_size.min(6);
    let all = upto(max)?;
    let mut t = Tally::new();
    for a in all.iter().filter(|a| !a.is_empty()) {
        for x in all.iter().filter(|x| !x.is_empty() && a.len() % x.len() == 0) {
            let size = a.len() / x.len();
            let q = quotients_with(x, a, &DivisionConfig::with_bound(max))?;
            let code = a.canonical_form();
            let naive: Vec<FunctionalDigraph> = all_digraphs(EnumFilter::all(size))?
                .into_iter()
                .filter(|y| product(x, y).canonical_form() == code)
                .collect();
            let sound = q.quotients.iter().all(|y| product(x, y).canonical_form() == code);
            t.check(q.exhaustive && sound && q.quotients == naive, || format!("{a} / {x}"));
        }
    }
    Ok(t.finish("division", "quotients-sound-and-complete"))
}

/// `X | A` implies `[X] | [A]`, over every divisibility found (without
/// prunes) among digraphs up to size 4.
pub fn divisibility_passes_to_cyclic_parts(max_size: usize) -> Result<SuiteOutcome> {
    let all = upto(max_size.min(4))?;
    let mut t = Tally::new();
    for a in all.iter().filter(|a| !a.is_empty()) {
        for x in all.iter().filter(|x| !x.is_empty()) {
            let q = quotients_with(x, a, &DivisionConfig::unpruned(4))?;
            if q.verdict() == Verdict::Yes {
                let ok = cyclic_divides(&x.cyclic_part(), &a.cyclic_part())?;
                t.check(ok, || format!("{x} | {a}"));
            }
        }
    }
    Ok(t.finish("division", "divisibility-passes-to-cyclic-parts"))
}

/// Pruned and unpruned searches agree on every pair up to size 6.
pub fn prunes_keep_quotients(max_size: usize) -> Result<SuiteOutcome> {
    let max = max_size.min(6);
    let all = upto(max)?;
    let mut t = Tally::new();
    for a in all.iter().filter(|a| !a.is_empty()) {
        for x in all.iter().filter(|x| !x.is_empty() && a.len() % x.len() == 0 && x.len() > 1) {
            let pruned = quotients_with(x, a, &DivisionConfig::with_bound(max))?;
            let plain = quotients_with(x, a, &DivisionConfig::unpruned(max))?;
            t.check(pruned.quotients == plain.quotients, || format!("{a} / {x}"));
        }
    }
    Ok(t.finish("division", "prunes-keep-quotients"))
}

/// Every `X` with `2 <= |X| <= 4` gets a witness that re-verifies.
pub fn witnesses_verify(max_size: usize) -> Result<SuiteOutcome> {
    let mut t = Tally::new();
    for n in 2..=max_size.min(4) {
        for x in all_digraphs(EnumFilter::all(n))? {
            let ok = build_witness(&x, crate::division::DEFAULT_BOUND)
                .and_then(|r| verify_witness(r, crate::division::DEFAULT_BOUND))
                .is_ok();
            t.check(ok, || format!("{x}"));
        }
    }
    Ok(t.finish("witness", "witnesses-verify"))
}

/// Pointwise identities of the fixed-point construction, for every F1 digraph
/// `X != C1` up to size 4.
pub fn fixed_point_equations(max_size: usize) -> Result<SuiteOutcome> {
    let f1 = upto_filtered(max_size.min(4), |n| EnumFilter::in_class(n, 1))?;
    let mut t = Tally::new();
    for x in f1.iter().filter(|x| x.len() > 1) {
        let c = FixedPointConstruction::new(x)?;
        for (name, ok) in fixed_point_identities(&c)? {
            t.check(ok, || format!("{name} fails for {x}"));
        }
    }
    Ok(t.finish("witness", "fixed-point-equations"))
}

/// Named pass/fail results of each identity, each checked over its whole domain.
pub fn fixed_point_identities(c: &FixedPointConstruction) -> Result<Vec<(&'static str, bool)>> {
    let b = c.b();
    let d = c.height();
    let nb = b.len();
    let beta = c.beta();
    let tuples: Vec<Vec<usize>> = (0..nb).map(|i| c.decode(i)).collect();
    let t_vertex = c.t();

    let beta_fixed = b.succ(beta) == beta;
    let mut reach_beta = true;
    let mut depth_d = true;
    let mut after_d_minus_1 = true;
    for (i, bt) in tuples.iter().enumerate() {
        reach_beta &= b.iterate(i, d + 1)? == beta;
        depth_d &= (b.iterate(i, d)? == beta) == (bt[d] == t_vertex);
        if bt[d] != t_vertex {
            continue;
        }
        for (j, bt2) in tuples.iter().enumerate().skip(i) {
            if bt2[d] != t_vertex {
                continue;
            }
            let lhs = b.iterate(i, d - 1)? == b.iterate(j, d - 1)?;
            let rhs = c.x().iterate(bt[d - 1], d - 1)? == c.x().iterate(bt2[d - 1], d - 1)?;
            after_d_minus_1 &= lhs == rhs;
        }
    }

    // B(b) ignores b_1, and component i of B(b) depends only on b_{i+1}.
    let mut local = true;
    for bt in &tuples {
        let base = c.b_succ_tuple(bt);
        for j in 1..=d + 1 {
            for &v in c.level(j) {
                let moved = c.b_succ_tuple(&c.replace_component(bt, j, v)?);
                local &= (0..=d).all(|k| k + 2 == j || moved[k] == base[k]);
            }
        }
    }

    // B(b)^{P(i), X(x)} = B(b^{i,x}) whenever depth(x) <= i.
    let mut shift = true;
    let p = c.p();
    for (idx, bt) in tuples.iter().enumerate() {
        let next = c.decode(b.succ(idx));
        for i in 0..=d {
            for x in (0..c.x().len()).filter(|&x| c.depth(x) <= i) {
                let lhs = c.replace_component(&next, p.succ(i), c.x().succ(x))?;
                let rhs = c.b_succ_tuple(&c.replace_component(bt, i, x)?);
                shift &= lhs == rhs;
            }
        }
    }

    let xy = product(c.x(), c.y());
    let ab = product(c.a(), c.b());
    let phi = c.phi();
    let iso = xy.check_iso_map(&ab, &phi) && xy.canonical_form() == ab.canonical_form();

    Ok(vec![
        ("beta is fixed", beta_fixed),
        ("B^(d+1) is constant", reach_beta),
        ("B^d(b) = beta iff b_(d+1) = t", depth_d),
        ("B^(d-1) classes follow X^(d-1)", after_d_minus_1),
        ("B is local in components", local),
        ("B commutes with replacement", shift),
        ("phi is an isomorphism", iso),
    ])
}

/// `X · pC_p = C_p (C_p X1 + p X2)` for every disconnected `X` up to size 5.
pub fn disconnected_identity(max_size: usize) -> Result<SuiteOutcome> {
    let mut t = Tally::new();
    for n in 2..=max_size.min(5) {
        for x in all_digraphs(EnumFilter::all(n))?.into_iter().filter(|x| !x.is_connected()) {
            let (a, b, y, p, _) = branch_d(&x)?;
            let ok = y.is_isomorphic(&scalar(p, &cycle(p)?))
                && product(&x, &y).canonical_form() == product(&a, &b).canonical_form();
            t.check(ok, || format!("{x}"));
        }
    }
    Ok(t.finish("witness", "disconnected-identity"))
}

/// `X C_{l^2} = C_{p^a} (C_{l/p^a} X')` for every connected `X` up to size 6
/// with cycle length `2 <= l <= 4`.
pub fn long_cycle_identity(max_size: usize) -> Result<SuiteOutcome> {
    let mut t = Tally::new();
    for l in 2..=4 {
        for x in upto_filtered(max_size.min(6), |n| EnumFilter::in_class(n, l))? {
            let (a, b, y, _) = branch_c(&x)?;
            let ok = product(&x, &y).canonical_form() == product(&a, &b).canonical_form();
            t.check(ok, || format!("{x}"));
        }
    }
    Ok(t.finish("witness", "long-cycle-identity"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_small_size() {
        for outcome in run_all(4).unwrap() {
            assert!(outcome.passed(), "{}: {:?}", outcome.name, outcome.failures);
            assert!(outcome.cases > 0, "{} ran no cases", outcome.name);
        }
    }

    #[test]
    fn sums_of_cycles_count() {
        // Multisets of 1..=4 parts from 6 lengths.
        assert_eq!(sums_of_cycles(6, 4).len(), 6 + 21 + 56 + 126);
    }
}
