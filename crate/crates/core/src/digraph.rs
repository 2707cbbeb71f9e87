use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::SumOfCycles;
use crate::canonical::{self, CanonicalForm};
use crate::error::{Error, Result};

/// A finite digraph in which every vertex has exactly one out-neighbour.
///
/// Vertices are `0..len()`; `succ[v]` is the out-neighbour of `v`. The empty
/// digraph is allowed and is the additive identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FunctionalDigraph {
    succ: Vec<usize>,
}

/// A connected component, relabelled onto `0..digraph.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub digraph: FunctionalDigraph,
    pub cycle_len: usize,
    /// Cycle vertices (local labels) in successor order, starting from the smallest.
    pub cycle_vertices: Vec<usize>,
    /// `vertices[local]` is the label of that vertex in the parent digraph.
    pub vertices: Vec<usize>,
}

/// Depth data for a digraph in F1 (connected, cycle of length one).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightProfile {
    pub fixed_point: usize,
    pub depth: Vec<usize>,
    pub height: usize,
}

/// A vertex map `forward[v]` between two digraphs of the same size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct IsoMap {
    pub forward: Vec<usize>,
}

impl FunctionalDigraph {
    pub fn from_successors(succ: Vec<usize>) -> Result<Self> {
        let n = succ.len();
        if let Some((v, &s)) = succ.iter().enumerate().find(|(_, &s)| s >= n) {
            return Err(Error::Malformed(format!(
                "successor {s} of vertex {v} is outside 0..{n}"
            )));
        }
        Ok(Self { succ })
    }

    /// Caller guarantees every entry is in range.
    pub(crate) fn from_successors_unchecked(succ: Vec<usize>) -> Self {
        debug_assert!(succ.iter().all(|&s| s < succ.len()));
        Self { succ }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn successors(&self) -> &[usize] {
        &self.succ
    }

    /// The out-neighbour of `v`. Panics if `v` is out of range.
    #[inline]
    pub fn succ(&self, v: usize) -> usize {
        self.succ[v]
    }

    /// In-neighbour lists.
    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (v, &s) in self.succ.iter().enumerate() {
            pred[s].push(v);
        }
        pred
    }

    /// `on_cycle[v]` is true iff `v` lies on the cycle of its component.
    pub fn cycle_membership(&self) -> Vec<bool> {
        // Peel vertices of in-degree zero; what remains is exactly the cycles.
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for &s in &self.succ {
            indeg[s] += 1;
        }
        let mut on_cycle = vec![true; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        while let Some(v) = queue.pop_front() {
            on_cycle[v] = false;
            let s = self.succ[v];
            indeg[s] -= 1;
            if indeg[s] == 0 {
                queue.push_back(s);
            }
        }
        on_cycle
    }

    /// Component index of every vertex, numbered by smallest member.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let pred = self.predecessors();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            // Undirected flood fill over successor and predecessor edges.
            let mut stack = vec![start];
            label[start] = count;
            while let Some(v) = stack.pop() {
                let s = self.succ[v];
                for w in std::iter::once(s).chain(pred[v].iter().copied()) {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn components(&self) -> Vec<Component> {
        let (label, count) = self.component_labels();
        let on_cycle = self.cycle_membership();
        let mut members = vec![Vec::new(); count];
        for v in 0..self.len() {
            members[label[v]].push(v);
        }
        members
            .into_iter()
            .map(|vertices| {
                let (digraph, local) = self.induced(&vertices);
                let first = *vertices
                    .iter()
                    .find(|&&v| on_cycle[v])
                    .expect("every component has a cycle");
                let mut cycle_vertices = vec![local[first]];
                let mut v = self.succ[first];
                while v != first {
                    cycle_vertices.push(local[v]);
                    v = self.succ[v];
                }
                Component {
                    digraph,
                    cycle_len: cycle_vertices.len(),
                    cycle_vertices,
                    vertices,
                }
            })
            .collect()
    }

    /// Sub-digraph induced by `vertices` (sorted ascending, closed under
    /// successor), relabelled in that order. Also returns the old→new map
    /// (`usize::MAX` for dropped vertices).
    fn induced(&self, vertices: &[usize]) -> (FunctionalDigraph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.len()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let succ = vertices.iter().map(|&v| local[self.succ[v]]).collect();
        (FunctionalDigraph::from_successors_unchecked(succ), local)
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().1
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// The cyclic part `[X]`: one cycle length per connected component.
    pub fn cyclic_part(&self) -> SumOfCycles {
        let (label, count) = self.component_labels();
        let on_cycle = self.cycle_membership();
        let mut lengths = vec![0usize; count];
        for v in 0..self.len() {
            if on_cycle[v] {
                lengths[label[v]] += 1;
            }
        }
        SumOfCycles::from_lengths(lengths).expect("cycle lengths are positive")
    }

    /// Fixed point, depths and height; fails unless the digraph is in F1.
    pub fn height_profile(&self) -> Result<HeightProfile> {
        let mut fixed = (0..self.len()).filter(|&v| self.succ[v] == v);
        let (Some(chi), None) = (fixed.next(), fixed.next()) else {
            return Err(Error::NotInF1);
        };
        let pred = self.predecessors();
        let mut depth = vec![usize::MAX; self.len()];
        depth[chi] = 0;
        let mut queue = VecDeque::from([chi]);
        while let Some(v) = queue.pop_front() {
            for &w in &pred[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if depth.contains(&usize::MAX) {
            return Err(Error::NotInF1);
        }
        let height = depth.iter().copied().max().unwrap_or(0);
        Ok(HeightProfile {
            fixed_point: chi,
            depth,
            height,
        })
    }

    pub fn is_in_f1(&self) -> bool {
        self.height_profile().is_ok()
    }

    /// `X_{|d}`: the vertices of depth at most `d`, relabelled in ascending order.
    pub fn truncate(&self, d: usize) -> Result<FunctionalDigraph> {
        Ok(self.truncate_with_map(d)?.0)
    }

    /// Like [`truncate`](Self::truncate), also returning the kept original labels.
    pub fn truncate_with_map(&self, d: usize) -> Result<(FunctionalDigraph, Vec<usize>)> {
        let profile = self.height_profile()?;
        let kept: Vec<usize> = (0..self.len()).filter(|&v| profile.depth[v] <= d).collect();
        let (digraph, _) = self.induced(&kept);
        Ok((digraph, kept))
    }

    /// `X^k(x)`.
    pub fn iterate(&self, x: usize, k: usize) -> Result<usize> {
        let n = self.len();
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, size: n });
        }
        let mut v = x;
        let mut remaining = k;
        // After n steps we are on a cycle and can reduce modulo its length.
        let direct = remaining.min(n);
        for _ in 0..direct {
            v = self.succ[v];
        }
        remaining -= direct;
        if remaining > 0 {
            let mut len = 1;
            let mut w = self.succ[v];
            while w != v {
                w = self.succ[w];
                len += 1;
            }
            for _ in 0..remaining % len {
                v = self.succ[v];
            }
        }
        Ok(v)
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canonical::canonical_form(self)
    }

    /// A canonical representative of this digraph's isomorphism class.
    pub fn canonical_representative(&self) -> FunctionalDigraph {
        self.canonical_form().to_digraph()
    }

    pub fn is_isomorphic(&self, other: &FunctionalDigraph) -> bool {
        self.len() == other.len() && self.canonical_form() == other.canonical_form()
    }

    /// True iff `map` is a bijection onto `target` commuting with successors.
    pub fn check_iso_map(&self, target: &FunctionalDigraph, map: &IsoMap) -> bool {
        let n = self.len();
        if target.len() != n || map.forward.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &image in &map.forward {
            if image >= n || hit[image] {
                return false;
            }
            hit[image] = true;
        }
        (0..n).all(|v| map.forward[self.succ[v]] == target.succ[map.forward[v]])
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<FunctionalDigraph> {
        let n = self.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Malformed("relabelling is not a permutation".into()));
        }
        let mut succ = vec![0; n];
        for v in 0..n {
            succ[perm[v]] = perm[self.succ[v]];
        }
        Ok(FunctionalDigraph::from_successors_unchecked(succ))
    }

    /// Graphviz rendering; fixed points are drawn as self-arcs.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph \"{}\" {{\n", name.replace('"', "\\\""));
        for v in 0..self.len() {
            out.push_str(&format!("  {v};\n"));
        }
        for (v, &s) in self.succ.iter().enumerate() {
            out.push_str(&format!("  {v} -> {s};\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl IsoMap {
    pub fn identity(n: usize) -> Self {
        Self {
            forward: (0..n).collect(),
        }
    }
}

/// Serialized as its successor-list literal, e.g. `"[0,0,1]"`.
impl Serialize for FunctionalDigraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for FunctionalDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, s) in self.succ.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for FunctionalDigraph {
    type Err = Error;

    /// Parses the successor-list literal `[s0,s1,...]`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Malformed(format!("expected `[s0,...]`, got {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Self::empty());
        }
        let succ = inner
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Malformed(format!("bad successor {:?}", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_successors(succ)
    }
}
