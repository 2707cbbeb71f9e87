//! Complete isomorphism invariant for functional digraphs.
//!
//! Every vertex off a cycle is the root of a tree hanging towards its cycle.
//! Trees get AHU-style codes: `1`, the sorted codes of the children, `0`.
//! A component is the least rotation of its cycle's sequence of tree codes
//! wrapped in `2 ... 3`, and the whole digraph is the sorted concatenation of
//! its component codes. All codes are prefix-free, so lexicographic order on
//! the token sequence is a total order on isomorphism classes.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::digraph::FunctionalDigraph;

pub(crate) const TREE_CLOSE: u8 = 0;
pub(crate) const TREE_OPEN: u8 = 1;
pub(crate) const COMPONENT_OPEN: u8 = 2;
pub(crate) const COMPONENT_CLOSE: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub(crate) fn from_tokens(tokens: Vec<u8>) -> Self {
        Self(tokens)
    }

    pub fn tokens(&self) -> &[u8] {
        &self.0
    }

    /// Rebuild the canonical representative digraph. Vertices are numbered in
    /// pre-order of the code; each cycle's roots come first within their trees.
    pub fn to_digraph(&self) -> FunctionalDigraph {
        let mut succ: Vec<usize> = Vec::with_capacity(self.0.len() / 2);
        let mut stack: Vec<usize> = Vec::new();
        let mut roots: Vec<usize> = Vec::new();
        for &tok in &self.0 {
            match tok {
                TREE_OPEN => {
                    let v = succ.len();
                    match stack.last() {
                        Some(&parent) => succ.push(parent),
                        None => {
                            succ.push(v);
                            roots.push(v);
                        }
                    }
                    stack.push(v);
                }
                TREE_CLOSE => {
                    stack.pop();
                }
                COMPONENT_OPEN => roots.clear(),
                COMPONENT_CLOSE => {
                    for (i, &r) in roots.iter().enumerate() {
                        succ[r] = roots[(i + 1) % roots.len()];
                    }
                }
                _ => unreachable!("canonical forms only contain tokens 0..=3"),
            }
        }
        FunctionalDigraph::from_successors_unchecked(succ)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .0
            .iter()
            .map(|&t| match t {
                TREE_CLOSE => ')',
                TREE_OPEN => '(',
                COMPONENT_OPEN => '[',
                _ => ']',
            })
            .collect();
        f.write_str(&s)
    }
}

pub(crate) fn canonical_form(x: &FunctionalDigraph) -> CanonicalForm {
    let n = x.len();
    let on_cycle = x.cycle_membership();
    let pred = x.predecessors();

    // Breadth-first from the cycles; reversed, this processes trees bottom-up.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| on_cycle[v]).collect();
    while let Some(v) = queue.pop_front() {
        for &w in &pred[v] {
            if !on_cycle[w] {
                order.push(w);
                queue.push_back(w);
            }
        }
    }

    let mut codes: Vec<Vec<u8>> = vec![Vec::new(); n];
    let build = |v: usize, codes: &mut Vec<Vec<u8>>| {
        let mut children: Vec<Vec<u8>> = pred[v]
            .iter()
            .filter(|&&w| !on_cycle[w])
            .map(|&w| std::mem::take(&mut codes[w]))
            .collect();
        children.sort_unstable();
        let mut code = Vec::with_capacity(2 + children.iter().map(Vec::len).sum::<usize>());
        code.push(TREE_OPEN);
        for c in children {
            code.extend_from_slice(&c);
        }
        code.push(TREE_CLOSE);
        codes[v] = code;
    };
    for &v in order.iter().rev() {
        build(v, &mut codes);
    }
    for v in (0..n).filter(|&v| on_cycle[v]) {
        build(v, &mut codes);
    }

    let mut done = vec![false; n];
    let mut components: Vec<Vec<u8>> = Vec::new();
    for start in 0..n {
        if !on_cycle[start] || done[start] {
            continue;
        }
        let mut cycle = vec![start];
        done[start] = true;
        let mut v = x.succ(start);
        while v != start {
            done[v] = true;
            cycle.push(v);
            v = x.succ(v);
        }
        // Rank the tree codes so the rotation search works on integers.
        let mut distinct: Vec<&[u8]> = cycle.iter().map(|&v| codes[v].as_slice()).collect();
        distinct.sort_unstable();
        distinct.dedup();
        let ranks: Vec<u32> = cycle
            .iter()
            .map(|&v| distinct.binary_search(&codes[v].as_slice()).unwrap() as u32)
            .collect();
        let shift = least_rotation(&ranks);
        let mut code = vec![COMPONENT_OPEN];
        for k in 0..cycle.len() {
            code.extend_from_slice(&codes[cycle[(shift + k) % cycle.len()]]);
        }
        code.push(COMPONENT_CLOSE);
        components.push(code);
    }
    components.sort_unstable();
    CanonicalForm(components.concat())
}

/// Start index of the lexicographically least rotation.
pub(crate) fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        let a = &s[(i + k) % n];
        let b = &s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}
