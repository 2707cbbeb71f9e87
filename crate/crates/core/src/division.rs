//! Divisibility, quotients and irreducibility.
//!
//! `X | A` means `XY = A` for some `Y`. Quotients are found by searching all
//! digraphs of size `|A| / |X|`, after three necessary conditions that are
//! cheap to test:
//!
//! 1. `|X|` divides `|A|`;
//! 2. every cycle length `y` of a candidate satisfies `lcm(x, y) ∈ [A]` for
//!    some cycle length `x` of `X`;
//! 3. the cyclic parts divide: `[X][Y] = [A]` for some sum of cycles `[Y]`
//!    on at most `|A| / |X|` vertices, decided exactly by [`cyclic_quotients`].
//!
//! No height-based pruning is done: the height law only holds inside F1.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{cycle_product, product, SumOfCycles};
use crate::digraph::FunctionalDigraph;
use crate::enumerate::{all_digraphs_with, EnumConfig, EnumFilter};
use crate::error::{Error, Result};
use crate::Verdict;

pub const DEFAULT_BOUND: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisionConfig {
    /// Largest quotient size searched exhaustively.
    pub bound: usize,
    /// Apply the cyclic-part prunes before the search.
    pub prune: bool,
    pub enumeration: EnumConfig,
}

impl DivisionConfig {
    pub fn with_bound(bound: usize) -> Self {
        Self {
            bound,
            ..Self::default()
        }
    }

    pub fn unpruned(bound: usize) -> Self {
        Self {
            bound,
            prune: false,
            ..Self::default()
        }
    }
}

impl Default for DivisionConfig {
    fn default() -> Self {
        Self {
            bound: DEFAULT_BOUND,
            prune: true,
            enumeration: EnumConfig::default(),
        }
    }
}

/// How a quotient search was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    /// `|X|` does not divide `|A|`.
    Size,
    /// `[X]` does not divide `[A]`.
    CyclicPart,
    /// Every candidate of the quotient size was tested.
    Search,
    /// The quotient size is above the bound; nothing was searched.
    BoundExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSet {
    pub divisor: FunctionalDigraph,
    pub dividend: FunctionalDigraph,
    /// All `Y` (canonical representatives, canonical order) with `XY = A`.
    pub quotients: Vec<FunctionalDigraph>,
    pub exhaustive: bool,
    pub decided_by: Decision,
    /// Number of isomorphism classes of the quotient size that were enumerated.
    pub candidates: usize,
    /// How many of them survived the prunes and were multiplied out.
    pub tested: usize,
}

impl QuotientSet {
    pub fn verdict(&self) -> Verdict {
        if !self.quotients.is_empty() {
            Verdict::Yes
        } else if self.exhaustive {
            Verdict::No
        } else {
            Verdict::Unknown
        }
    }
}

pub fn quotients(x: &FunctionalDigraph, a: &FunctionalDigraph, bound: usize) -> Result<QuotientSet> {
    quotients_with(x, a, &DivisionConfig::with_bound(bound))
}

pub fn quotients_with(
    x: &FunctionalDigraph,
    a: &FunctionalDigraph,
    config: &DivisionConfig,
) -> Result<QuotientSet> {
    if x.is_empty() {
        return Err(Error::EmptyDivisor);
    }
    let settled = |decided_by, exhaustive| QuotientSet {
        divisor: x.clone(),
        dividend: a.clone(),
        quotients: Vec::new(),
        exhaustive,
        decided_by,
        candidates: 0,
        tested: 0,
    };
    if a.len() % x.len() != 0 {
        return Ok(settled(Decision::Size, true));
    }
    let size = a.len() / x.len();
    let x_cycles = x.cyclic_part();
    let a_cycles = a.cyclic_part();
    let allowed = if config.prune {
        // A quotient of size s cannot have more than s cycle vertices.
        let mut allowed = cyclic_quotients(&x_cycles, &a_cycles)?;
        allowed.retain(|y| y.size() <= size);
        if allowed.is_empty() {
            return Ok(settled(Decision::CyclicPart, true));
        }
        Some(allowed)
    } else {
        None
    };
    if size > config.bound || size > config.enumeration.constructive_limit {
        return Ok(settled(Decision::BoundExceeded, false));
    }

    let candidates = all_digraphs_with(EnumFilter::all(size), &config.enumeration)?;
    let survivors: Vec<&FunctionalDigraph> = candidates
        .iter()
        .filter(|y| match &allowed {
            Some(allowed) => {
                let y_cycles = y.cyclic_part();
                cycle_length_compatible(&x_cycles, &a_cycles, &y_cycles)
                    && allowed.binary_search(&y_cycles).is_ok()
            }
            None => true,
        })
        .collect();
    let target = a.canonical_form();
    let found: Vec<FunctionalDigraph> = survivors
        .par_iter()
        .filter(|y| product(x, y).canonical_form() == target)
        .map(|y| (*y).clone())
        .collect();
    Ok(QuotientSet {
        divisor: x.clone(),
        dividend: a.clone(),
        quotients: found,
        exhaustive: true,
        decided_by: Decision::Search,
        candidates: candidates.len(),
        tested: survivors.len(),
    })
}

pub fn divides(x: &FunctionalDigraph, a: &FunctionalDigraph, bound: usize) -> Result<Verdict> {
    Ok(quotients(x, a, bound)?.verdict())
}

/// Outcome of a factor search on `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// `Yes` when `X` is irreducible.
    pub irreducible: Verdict,
    /// A non-trivial factorisation `X = F·G`, when one was found.
    pub factors: Option<(FunctionalDigraph, FunctionalDigraph)>,
}

pub fn is_irreducible(x: &FunctionalDigraph, bound: usize) -> Result<Verdict> {
    Ok(factorize(x, &DivisionConfig::with_bound(bound))?.irreducible)
}

/// Searches for `X = F·G` with `1 < |F| <= |G| < |X|`.
pub fn factorize(x: &FunctionalDigraph, config: &DivisionConfig) -> Result<Factorization> {
    let n = x.len();
    if n == 0 {
        return Err(Error::Malformed("irreducibility needs a non-empty digraph".into()));
    }
    let mut open = false;
    for s in (2..n).filter(|s| n % s == 0 && s * s <= n) {
        if s > config.enumeration.constructive_limit {
            open = true;
            continue;
        }
        for f in all_digraphs_with(EnumFilter::all(s), &config.enumeration)? {
            let q = quotients_with(&f, x, config)?;
            if let Some(g) = q.quotients.into_iter().next() {
                return Ok(Factorization {
                    irreducible: Verdict::No,
                    factors: Some((f, g)),
                });
            }
            open |= !q.exhaustive;
        }
    }
    Ok(Factorization {
        irreducible: if open { Verdict::Unknown } else { Verdict::Yes },
        factors: None,
    })
}

/// Every cycle `y` of `Y` must produce, with some cycle `x` of `X`, a cycle
/// length `lcm(x, y)` that occurs in `A`.
pub fn cycle_length_compatible(x: &SumOfCycles, a: &SumOfCycles, y: &SumOfCycles) -> bool {
    y.lengths()
        .iter()
        .all(|&ly| x.lengths().iter().any(|&lx| a.contains(cycle_product(lx, ly).1)))
}

/// All sums of cycles `Y` with `X·Y = A`, in ascending order. Exact.
pub fn cyclic_quotients(x: &SumOfCycles, a: &SumOfCycles) -> Result<Vec<SumOfCycles>> {
    if x.is_empty() {
        return Err(Error::EmptyDivisor);
    }
    let x_mult = x.multiplicities();
    let a_mult = a.multiplicities();
    // A part y must satisfy lcm(x, y) ∈ A for every x, so y divides some length of A.
    let mut parts: Vec<usize> = a_mult
        .keys()
        .flat_map(|&l| (1..=l).filter(move |d| l % d == 0))
        .filter(|&y| x_mult.keys().all(|&lx| a_mult.contains_key(&cycle_product(lx, y).1)))
        .collect();
    parts.sort_unstable_by(|p, q| q.cmp(p));
    parts.dedup();
    let consumption: Vec<BTreeMap<usize, usize>> = parts
        .iter()
        .map(|&y| {
            let mut used = BTreeMap::new();
            for (&lx, &mx) in &x_mult {
                let (copies, len) = cycle_product(lx, y);
                *used.entry(len).or_insert(0) += copies * mx;
            }
            used
        })
        .collect();

    let mut found = Vec::new();
    let mut chosen = Vec::new();
    let mut remaining = a_mult;
    search_parts(&parts, &consumption, 0, &mut remaining, &mut chosen, &mut found);
    let mut out: Vec<SumOfCycles> = found
        .into_iter()
        .map(|lengths| SumOfCycles::from_lengths(lengths).expect("positive parts"))
        .collect();
    out.sort();
    Ok(out)
}

pub fn cyclic_divides(x: &SumOfCycles, a: &SumOfCycles) -> Result<bool> {
    Ok(!cyclic_quotients(x, a)?.is_empty())
}

fn search_parts(
    parts: &[usize],
    consumption: &[BTreeMap<usize, usize>],
    start: usize,
    remaining: &mut BTreeMap<usize, usize>,
    chosen: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if remaining.values().all(|&c| c == 0) {
        found.push(chosen.clone());
        return;
    }
    for i in start..parts.len() {
        let fits = consumption[i]
            .iter()
            .all(|(len, &need)| remaining.get(len).is_some_and(|&have| have >= need));
        if !fits {
            continue;
        }
        for (len, &need) in &consumption[i] {
            *remaining.get_mut(len).unwrap() -= need;
        }
        chosen.push(parts[i]);
        search_parts(parts, consumption, i, remaining, chosen, found);
        chosen.pop();
        for (len, &need) in &consumption[i] {
            *remaining.get_mut(len).unwrap() += need;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cycle, scalar, sum};

    fn g(succ: &[usize]) -> FunctionalDigraph {
        FunctionalDigraph::from_successors(succ.to_vec()).unwrap()
    }

    fn soc(lengths: &[usize]) -> SumOfCycles {
        SumOfCycles::from_lengths(lengths.to_vec()).unwrap()
    }

    fn c(l: usize) -> FunctionalDigraph {
        cycle(l).unwrap()
    }

    #[test]
    fn two_quotients_of_two_c2() {
        let q = quotients(&c(2), &scalar(2, &c(2)), 8).unwrap();
        assert!(q.exhaustive);
        assert_eq!(q.quotients.len(), 2);
        assert!(q.quotients.iter().any(|y| y.is_isomorphic(&c(2))));
        assert!(q.quotients.iter().any(|y| y.is_isomorphic(&scalar(2, &c(1)))));
    }

    #[test]
    fn identity_divisor() {
        let x = g(&[0, 0, 1, 1, 3]);
        let q = quotients(&c(1), &x, 8).unwrap();
        assert_eq!(q.quotients.len(), 1);
        assert!(q.quotients[0].is_isomorphic(&x));
    }

    #[test]
    fn cyclic_prune_settles_without_search() {
        let q = quotients(&g(&[0, 0]), &c(2), 8).unwrap();
        assert!(q.quotients.is_empty() && q.exhaustive);
        assert_eq!(q.decided_by, Decision::CyclicPart);
        // The single size-1 candidate, checked by hand.
        assert!(!product(&g(&[0, 0]), &c(1)).is_isomorphic(&c(2)));
        let unpruned = quotients_with(&g(&[0, 0]), &c(2), &DivisionConfig::unpruned(8)).unwrap();
        assert_eq!((unpruned.candidates, unpruned.quotients.len()), (1, 0));
    }

    #[test]
    fn divides_examples() {
        assert_eq!(divides(&c(2), &scalar(2, &c(2)), 8).unwrap(), Verdict::Yes);
        assert_eq!(divides(&c(4), &c(2), 8).unwrap(), Verdict::No);
        let two = scalar(2, &c(1));
        let target = sum(&c(2), &two);
        let unpruned = quotients_with(&two, &target, &DivisionConfig::unpruned(8)).unwrap();
        assert_eq!((unpruned.candidates, unpruned.quotients.len()), (3, 0));
        assert_eq!(divides(&two, &target, 8).unwrap(), Verdict::No);
    }

    #[test]
    fn bound_gives_unknown() {
        let x = c(2);
        let a = scalar(20, &c(2));
        let q = quotients(&x, &a, 8).unwrap();
        assert_eq!(q.decided_by, Decision::BoundExceeded);
        assert_eq!(q.verdict(), Verdict::Unknown);
        assert_eq!(divides(&c(3), &a, 8).unwrap(), Verdict::No);
    }

    #[test]
    fn irreducibility_examples() {
        assert_eq!(is_irreducible(&c(8), 8).unwrap(), Verdict::Yes);
        assert_eq!(is_irreducible(&scalar(2, &c(2)), 8).unwrap(), Verdict::No);
        let f = factorize(&c(6), &DivisionConfig::default()).unwrap();
        assert_eq!(f.irreducible, Verdict::No);
        let (a, b) = f.factors.unwrap();
        assert!(product(&a, &b).is_isomorphic(&c(6)));
        assert!(product(&c(2), &c(3)).is_isomorphic(&c(6)));
        assert_eq!(is_irreducible(&c(1), 8).unwrap(), Verdict::Yes);
        assert_eq!(is_irreducible(&c(7), 8).unwrap(), Verdict::Yes);
        assert!(is_irreducible(&FunctionalDigraph::empty(), 8).is_err());
    }

    #[test]
    fn cyclic_quotient_search() {
        assert_eq!(cyclic_quotients(&soc(&[2]), &soc(&[2, 2])).unwrap(), vec![soc(&[1, 1]), soc(&[2])]);
        assert!(cyclic_quotients(&soc(&[2]), &soc(&[3])).unwrap().is_empty());
        assert_eq!(cyclic_quotients(&soc(&[1]), &soc(&[3, 5])).unwrap(), vec![soc(&[3, 5])]);
        assert_eq!(cyclic_quotients(&soc(&[2]), &SumOfCycles::empty()).unwrap(), vec![SumOfCycles::empty()]);
        // C4 · {C2, C4} both give 2C4 or 4C4 respectively; 3C4 = C4·Y has no solution.
        assert!(cyclic_quotients(&soc(&[4]), &soc(&[4, 4, 4])).unwrap().contains(&soc(&[1, 1, 1])));
        assert!(cyclic_quotients(&soc(&[1, 2]), &soc(&[3])).unwrap().is_empty());
        assert!(cyclic_quotients(&SumOfCycles::empty(), &soc(&[1])).is_err());
    }

    #[test]
    fn compatibility_prune() {
        let x = soc(&[2]);
        let a = soc(&[6, 6]);
        assert!(cycle_length_compatible(&x, &a, &soc(&[3, 6])));
        assert!(!cycle_length_compatible(&x, &a, &soc(&[3, 4])));
    }
}
