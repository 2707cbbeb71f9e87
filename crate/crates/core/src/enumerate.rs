//! All functional digraphs of a given size, one per isomorphism class.
//!
//! Two independent generators are provided. [`brute_force_classes`] runs
//! through all `n^n` endofunctions and deduplicates by canonical form; it is
//! the oracle. [`constructive_classes`] assembles rooted trees into necklaces
//! on a cycle and necklaces into multisets of components, building canonical
//! codes directly; it is the scalable path used everywhere else.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::canonical::{
    least_rotation, CanonicalForm, COMPONENT_CLOSE, COMPONENT_OPEN, TREE_CLOSE, TREE_OPEN,
};
use crate::digraph::FunctionalDigraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumFilter {
    pub size: usize,
    pub connected_only: bool,
    /// Only digraphs all of whose cycles have this length.
    pub cycle_len: Option<usize>,
}

impl EnumFilter {
    pub fn all(size: usize) -> Self {
        Self {
            size,
            connected_only: false,
            cycle_len: None,
        }
    }

    pub fn connected(size: usize) -> Self {
        Self {
            connected_only: true,
            ..Self::all(size)
        }
    }

    /// Connected digraphs whose cycle has length `len` (the class F_len).
    pub fn in_class(size: usize, len: usize) -> Self {
        Self {
            cycle_len: Some(len),
            ..Self::connected(size)
        }
    }

    fn accepts(&self, x: &FunctionalDigraph) -> bool {
        let cycles = x.cyclic_part();
        (!self.connected_only || cycles.count() == 1)
            && self
                .cycle_len
                .map_or(true, |len| cycles.lengths().iter().all(|&l| l == len))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    pub constructive_limit: usize,
    pub brute_force_limit: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self {
            constructive_limit: 9,
            brute_force_limit: 7,
        }
    }
}

/// Representatives in canonical-code order, using the default limits.
pub fn all_digraphs(filter: EnumFilter) -> Result<Vec<FunctionalDigraph>> {
    all_digraphs_with(filter, &EnumConfig::default())
}

pub fn all_digraphs_with(filter: EnumFilter, config: &EnumConfig) -> Result<Vec<FunctionalDigraph>> {
    if filter.cycle_len == Some(0) {
        return Err(Error::InvalidCycleLength);
    }
    let classes = cached_classes(filter.size, config)?;
    Ok(classes
        .iter()
        .filter(|x| filter.accepts(x))
        .cloned()
        .collect())
}

pub fn count_digraphs(n: usize) -> Result<usize> {
    Ok(cached_classes(n, &EnumConfig::default())?.len())
}

fn cached_classes(n: usize, config: &EnumConfig) -> Result<Arc<Vec<FunctionalDigraph>>> {
    if n > config.constructive_limit {
        return Err(Error::SizeLimit {
            size: n,
            limit: config.constructive_limit,
        });
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<FunctionalDigraph>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return Ok(hit.clone());
    }
    let classes = Arc::new(constructive_unchecked(n));
    cache.lock().unwrap().insert(n, classes.clone());
    Ok(classes)
}

/// Canonical representatives of all `n^n` endofunctions, deduplicated.
pub fn brute_force_classes(n: usize, config: &EnumConfig) -> Result<Vec<FunctionalDigraph>> {
    if n > config.brute_force_limit {
        return Err(Error::SizeLimit {
            size: n,
            limit: config.brute_force_limit,
        });
    }
    let total = n.pow(n as u32);
    let codes: BTreeSet<CanonicalForm> = (0..total)
        .into_par_iter()
        .fold(BTreeSet::new, |mut set, mut index| {
            let mut succ = vec![0; n];
            for s in succ.iter_mut() {
                *s = index % n;
                index /= n;
            }
            set.insert(FunctionalDigraph::from_successors_unchecked(succ).canonical_form());
            set
        })
        .reduce(BTreeSet::new, |mut a, mut b| {
            if a.len() < b.len() {
                std::mem::swap(&mut a, &mut b);
            }
            a.extend(b);
            a
        });
    Ok(codes.iter().map(CanonicalForm::to_digraph).collect())
}

pub fn constructive_classes(n: usize, config: &EnumConfig) -> Result<Vec<FunctionalDigraph>> {
    if n > config.constructive_limit {
        return Err(Error::SizeLimit {
            size: n,
            limit: config.constructive_limit,
        });
    }
    Ok(constructive_unchecked(n))
}

fn constructive_unchecked(n: usize) -> Vec<FunctionalDigraph> {
    let trees = rooted_trees(n);
    // connected[m] = component codes of size m, sorted.
    let connected: Vec<Vec<Vec<u8>>> = (0..=n).map(|m| connected_codes(m, &trees)).collect();
    let flat: Vec<(usize, &Vec<u8>)> = (1..=n)
        .flat_map(|m| connected[m].iter().map(move |c| (m, c)))
        .collect();

    let mut results: Vec<CanonicalForm> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    multisets(&flat, 0, n, &mut chosen, &mut |picked| {
        let mut comps: Vec<&Vec<u8>> = picked.iter().map(|&i| flat[i].1).collect();
        comps.sort_unstable();
        let tokens: Vec<u8> = comps.into_iter().flatten().copied().collect();
        results.push(CanonicalForm::from_tokens(tokens));
    });
    results.sort_unstable();
    results.iter().map(CanonicalForm::to_digraph).collect()
}

/// Non-decreasing index sequences into `items` whose sizes sum to `remaining`.
fn multisets(
    items: &[(usize, &Vec<u8>)],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if remaining == 0 {
        emit(chosen);
        return;
    }
    for i in start..items.len() {
        let size = items[i].0;
        if size > remaining {
            // items are ordered by size
            break;
        }
        chosen.push(i);
        multisets(items, i, remaining - size, chosen, emit);
        chosen.pop();
    }
}

/// `trees[k]`: canonical codes of all unlabelled rooted trees on `k` vertices.
fn rooted_trees(max: usize) -> Vec<Vec<Vec<u8>>> {
    let mut trees: Vec<Vec<Vec<u8>>> = vec![Vec::new(); max + 1];
    if max >= 1 {
        trees[1] = vec![vec![TREE_OPEN, TREE_CLOSE]];
    }
    for k in 2..=max {
        let mut next = BTreeSet::new();
        for code in &trees[k - 1] {
            let parent = decode_tree(code);
            for v in 0..parent.len() {
                let mut grown = parent.clone();
                grown.push(Some(v));
                next.insert(encode_tree(&grown));
            }
        }
        trees[k] = next.into_iter().collect();
    }
    trees
}

/// Parent array in pre-order; the root has no parent.
fn decode_tree(code: &[u8]) -> Vec<Option<usize>> {
    let mut parent = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for &tok in code {
        if tok == TREE_OPEN {
            parent.push(stack.last().copied());
            stack.push(parent.len() - 1);
        } else {
            stack.pop();
        }
    }
    parent
}

fn encode_tree(parent: &[Option<usize>]) -> Vec<u8> {
    let mut children = vec![Vec::new(); parent.len()];
    let mut root = 0;
    for (v, p) in parent.iter().enumerate() {
        match p {
            Some(p) => children[*p].push(v),
            None => root = v,
        }
    }
    fn code(v: usize, children: &[Vec<usize>]) -> Vec<u8> {
        let mut subs: Vec<Vec<u8>> = children[v].iter().map(|&c| code(c, children)).collect();
        subs.sort_unstable();
        let mut out = vec![TREE_OPEN];
        subs.into_iter().for_each(|s| out.extend(s));
        out.push(TREE_CLOSE);
        out
    }
    code(root, &children)
}

/// Component codes of all connected digraphs on `m` vertices: every cyclic
/// sequence of rooted trees with total size `m`, kept only in least rotation.
fn connected_codes(m: usize, trees: &[Vec<Vec<u8>>]) -> Vec<Vec<u8>> {
    let mut out = BTreeSet::new();
    let mut seq: Vec<&[u8]> = Vec::new();
    necklaces(m, trees, &mut seq, &mut |seq| {
        let shift = least_rotation(seq);
        let n = seq.len();
        if (0..n).all(|k| seq[(shift + k) % n] == seq[k]) {
            let mut code = vec![COMPONENT_OPEN];
            seq.iter().for_each(|t| code.extend_from_slice(t));
            code.push(COMPONENT_CLOSE);
            out.insert(code);
        }
    });
    out.into_iter().collect()
}

fn necklaces<'a>(
    remaining: usize,
    trees: &'a [Vec<Vec<u8>>],
    seq: &mut Vec<&'a [u8]>,
    emit: &mut dyn FnMut(&[&'a [u8]]),
) {
    if remaining == 0 {
        if !seq.is_empty() {
            emit(seq);
        }
        return;
    }
    for size in 1..=remaining {
        for t in &trees[size] {
            seq.push(t);
            necklaces(remaining - size, trees, seq, emit);
            seq.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(count_digraphs(0).unwrap(), 1);
        assert_eq!(count_digraphs(1).unwrap(), 1);
        assert_eq!(count_digraphs(2).unwrap(), 3);
        assert_eq!(count_digraphs(3).unwrap(), 7);
    }

    #[test]
    fn size_two_classes() {
        let reps = all_digraphs(EnumFilter::all(2)).unwrap();
        let expected = ["[1,0]", "[0,0]", "[0,1]"];
        let mut got: Vec<String> = reps.iter().map(|x| x.to_string()).collect();
        got.sort();
        let mut want: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn rooted_tree_counts() {
        let trees = rooted_trees(8);
        let counts: Vec<usize> = trees.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![0, 1, 1, 2, 4, 9, 20, 48, 115]);
    }

    #[test]
    fn generated_codes_are_canonical() {
        for n in 0..=6 {
            for x in constructive_classes(n, &EnumConfig::default()).unwrap() {
                assert_eq!(x.canonical_form().to_digraph(), x);
            }
        }
    }

    #[test]
    fn filters() {
        let conn = all_digraphs(EnumFilter::connected(4)).unwrap();
        assert_eq!(conn.len(), 9);
        assert!(conn.iter().all(|x| x.component_count() == 1));
        let f1 = all_digraphs(EnumFilter::in_class(4, 1)).unwrap();
        assert_eq!(f1.len(), 4);
        assert!(f1.iter().all(|x| x.is_in_f1()));
        let f2 = all_digraphs(EnumFilter::in_class(3, 2)).unwrap();
        assert_eq!(f2.len(), 1);
        assert_eq!(f2[0].cyclic_part().lengths(), &[2]);
    }

    #[test]
    fn size_limits() {
        let tight = EnumConfig {
            constructive_limit: 3,
            brute_force_limit: 2,
        };
        assert!(matches!(
            all_digraphs_with(EnumFilter::all(4), &tight),
            Err(Error::SizeLimit { size: 4, limit: 3 })
        ));
        assert!(brute_force_classes(3, &tight).is_err());
        assert!(all_digraphs(EnumFilter::all(10)).is_err());
    }

    #[test]
    fn ordered_and_distinct() {
        let reps = all_digraphs(EnumFilter::all(5)).unwrap();
        let codes: Vec<_> = reps.iter().map(FunctionalDigraph::canonical_form).collect();
        assert!(codes.windows(2).all(|w| w[0] < w[1]));
    }
}
