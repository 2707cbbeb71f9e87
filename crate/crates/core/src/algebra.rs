//! Semiring operations on functional digraphs and cycle arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::digraph::FunctionalDigraph;
use crate::error::{Error, Result};

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: usize) -> usize {
    (n + 1..).find(|&p| is_prime(p)).expect("primes are unbounded")
}

/// Smallest prime divisor of `n >= 2`.
pub fn smallest_prime_factor(n: usize) -> Option<usize> {
    (2..=n).find(|&d| n % d == 0)
}

/// `(p, alpha)` if `n = p^alpha` with `p` prime and `alpha >= 1`.
pub fn prime_power(n: usize) -> Option<(usize, u32)> {
    let p = smallest_prime_factor(n)?;
    let mut m = n;
    let mut alpha = 0;
    while m % p == 0 {
        m /= p;
        alpha += 1;
    }
    (m == 1).then_some((p, alpha))
}

/// A multiset of cycle lengths, kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct SumOfCycles {
    lengths: Vec<usize>,
}

impl SumOfCycles {
    pub fn from_lengths(mut lengths: Vec<usize>) -> Result<Self> {
        if lengths.contains(&0) {
            return Err(Error::InvalidCycleLength);
        }
        lengths.sort_unstable();
        Ok(Self { lengths })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `count` copies of `C_len`.
    pub fn uniform(count: usize, len: usize) -> Result<Self> {
        Self::from_lengths(vec![len; count])
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Number of cycles.
    pub fn count(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// Number of vertices.
    pub fn size(&self) -> usize {
        self.lengths.iter().sum()
    }

    pub fn max_len(&self) -> Option<usize> {
        self.lengths.last().copied()
    }

    pub fn min_len(&self) -> Option<usize> {
        self.lengths.first().copied()
    }

    pub fn contains(&self, len: usize) -> bool {
        self.lengths.binary_search(&len).is_ok()
    }

    /// Length → multiplicity.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &l in &self.lengths {
            *m.entry(l).or_insert(0) += 1;
        }
        m
    }

    /// Distributes [`cycle_product`] over every pair of cycles.
    pub fn product(&self, other: &SumOfCycles) -> SumOfCycles {
        let mut lengths = Vec::new();
        for &a in &self.lengths {
            for &b in &other.lengths {
                let (copies, len) = cycle_product(a, b);
                lengths.extend(std::iter::repeat(len).take(copies));
            }
        }
        lengths.sort_unstable();
        SumOfCycles { lengths }
    }

    pub fn sum(&self, other: &SumOfCycles) -> SumOfCycles {
        let mut lengths = [self.lengths.as_slice(), other.lengths.as_slice()].concat();
        lengths.sort_unstable();
        SumOfCycles { lengths }
    }

    /// Cycles laid out one after another in ascending length.
    pub fn to_digraph(&self) -> FunctionalDigraph {
        let mut succ = Vec::with_capacity(self.size());
        for &len in &self.lengths {
            let base = succ.len();
            succ.extend((0..len).map(|k| base + (k + 1) % len));
        }
        FunctionalDigraph::from_successors_unchecked(succ)
    }

    /// Fails unless every component of `x` is a cycle.
    pub fn from_digraph(x: &FunctionalDigraph) -> Result<Self> {
        if x.cycle_membership().iter().all(|&c| c) {
            Ok(x.cyclic_part())
        } else {
            Err(Error::Malformed(format!("{x} is not a sum of cycles")))
        }
    }
}

impl fmt::Display for SumOfCycles {
    /// `C1+3C2`, or `0` for the empty sum.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, (len, count)) in self.multiplicities().into_iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if count > 1 {
                write!(f, "{count}")?;
            }
            write!(f, "C{len}")?;
        }
        Ok(())
    }
}

/// Disjoint union; the vertices of `b` follow those of `a`.
pub fn sum(a: &FunctionalDigraph, b: &FunctionalDigraph) -> FunctionalDigraph {
    let offset = a.len();
    let succ = a
        .successors()
        .iter()
        .copied()
        .chain(b.successors().iter().map(|&s| s + offset))
        .collect();
    FunctionalDigraph::from_successors_unchecked(succ)
}

pub fn sum_all<'a>(parts: impl IntoIterator<Item = &'a FunctionalDigraph>) -> FunctionalDigraph {
    parts
        .into_iter()
        .fold(FunctionalDigraph::empty(), |acc, x| sum(&acc, x))
}

/// Direct product. Vertex `(a, b)` is numbered `a * |B| + b`.
pub fn product(a: &FunctionalDigraph, b: &FunctionalDigraph) -> FunctionalDigraph {
    let nb = b.len();
    let mut succ = Vec::with_capacity(a.len() * nb);
    for &sa in a.successors() {
        for &sb in b.successors() {
            succ.push(sa * nb + sb);
        }
    }
    FunctionalDigraph::from_successors_unchecked(succ)
}

/// `k` disjoint copies of `a`; copy `j` occupies `j*|A| .. (j+1)*|A|`.
pub fn scalar(k: usize, a: &FunctionalDigraph) -> FunctionalDigraph {
    let n = a.len();
    let succ = (0..k)
        .flat_map(|j| a.successors().iter().map(move |&s| j * n + s))
        .collect();
    FunctionalDigraph::from_successors_unchecked(succ)
}

/// `C_len`, with vertex `k` pointing to `k+1 mod len`.
pub fn cycle(len: usize) -> Result<FunctionalDigraph> {
    if len == 0 {
        return Err(Error::InvalidCycleLength);
    }
    Ok(FunctionalDigraph::from_successors_unchecked(
        (0..len).map(|k| (k + 1) % len).collect(),
    ))
}

/// `C_a C_b = gcd(a,b) C_lcm(a,b)`, returned as `(copies, length)`.
pub fn cycle_product(a: usize, b: usize) -> (usize, usize) {
    (gcd(a, b), lcm(a, b))
}

pub fn sum_of_cycles_product(a: &SumOfCycles, b: &SumOfCycles) -> SumOfCycles {
    a.product(b)
}

/// Shape of `C_n X` for connected `X` with cycle length `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleProductStructure {
    /// `gcd(n, l)` mutually isomorphic components.
    pub count: usize,
    /// One of them; its cycle has length `lcm(n, l)`.
    pub representative: FunctionalDigraph,
    pub cycle_len: usize,
}

/// Computes `C_n X` and checks that it splits into `gcd(n, l)` pairwise
/// isomorphic components with cycles of length `lcm(n, l)`.
pub fn cycle_product_structure(n: usize, x: &FunctionalDigraph) -> Result<CycleProductStructure> {
    let cn = cycle(n)?;
    let comps = x.components();
    let [component] = comps.as_slice() else {
        return Err(Error::NotConnected);
    };
    let l = component.cycle_len;
    let prod = product(&cn, x);
    let parts = prod.components();
    let (count, len) = cycle_product(n, l);
    if parts.len() != count {
        return Err(Error::Invariant(format!(
            "C{n}·{x} has {} components, expected {count}",
            parts.len()
        )));
    }
    let first = parts[0].digraph.canonical_form();
    for part in &parts {
        if part.cycle_len != len {
            return Err(Error::Invariant(format!(
                "component of C{n}·{x} has cycle length {}, expected {len}",
                part.cycle_len
            )));
        }
        if part.digraph.canonical_form() != first {
            return Err(Error::Invariant(format!(
                "components of C{n}·{x} are not isomorphic"
            )));
        }
    }
    Ok(CycleProductStructure {
        count,
        representative: parts[0].digraph.clone(),
        cycle_len: len,
    })
}
