//! Witness construction for connected digraphs with a fixed point (F1).
//!
//! Let `X ∈ F1`, `X != C1`, with fixed point `χ` and height `d >= 1`.
//!
//! - `P` is the path `d -> d-1 -> ... -> 0` with a loop on `0`.
//! - `A` is `XP` plus one vertex `u` pointing to `(χ, d-1)`, so
//!   `|A| = |X|(d+1) + 1` and `X ∤ A` by size.
//! - `𝒳` is `X` plus a vertex `t` pointing to a deepest vertex `x̂`, so `t` is
//!   the unique vertex of depth `d+1`. Let `V_i` be the vertices of `𝒳` of
//!   depth at most `i`.
//! - `B` lives on tuples `b = (b_1, ..., b_{d+1})` with `b_i ∈ V_i`, and
//!   `B(b)_i = 𝒳(b_{i+1})` for `i <= d`, `B(b)_{d+1} = t`. It has height
//!   `d+1` and the same number of `E^{d-1}` classes on its depth-`d`
//!   truncation as `X`, which rules out `X | B`.
//! - `Y` is `PB` plus the tuples with `b_d = χ`, each pointing to
//!   `(d-1, B(b))`.
//! - `φ: XY -> AB` is an explicit isomorphism.
//!
//! Tuples are flattened in mixed radix over `(|V_1|, ..., |V_{d+1}|)`, with
//! `b_1` the most significant digit.

use std::collections::HashSet;

use crate::algebra::product;
use crate::digraph::{FunctionalDigraph, IsoMap};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct FixedPointConstruction {
    x: FunctionalDigraph,
    chi: usize,
    depth: Vec<usize>,
    d: usize,
    x_hat: usize,
    t: usize,
    xcal: FunctionalDigraph,
    /// `levels[i]` = sorted `V_i` for `i in 1..=d+1`; `levels[0]` is unused.
    levels: Vec<Vec<usize>>,
    /// `position[i][v]` = index of `v` in `levels[i]`, or `usize::MAX`.
    position: Vec<Vec<usize>>,
    radix: Vec<usize>,
    stride: Vec<usize>,
    p: FunctionalDigraph,
    a: FunctionalDigraph,
    b: FunctionalDigraph,
    beta: usize,
    y: FunctionalDigraph,
    /// B-vertices with `b_d = χ`, ascending; they follow `PB` inside `Y`.
    v_chi: Vec<usize>,
}

impl FixedPointConstruction {
    /// Builds every object with the default choice of `x̂`.
    pub fn new(x: &FunctionalDigraph) -> Result<Self> {
        let x_hat = choose_x_hat(x)?;
        Self::with_x_hat(x, x_hat)
    }

    pub fn with_x_hat(x: &FunctionalDigraph, x_hat: usize) -> Result<Self> {
        let profile = x.height_profile()?;
        let d = profile.height;
        if d == 0 {
            return Err(Error::NoWitness("C1".into()));
        }
        let xcal = build_xhat(x, x_hat)?;
        let n = x.len();
        let t = n;
        let mut xcal_depth = profile.depth.clone();
        xcal_depth.push(d + 1);

        let mut levels = vec![Vec::new(); d + 2];
        let mut position = vec![vec![usize::MAX; n + 1]; d + 2];
        for i in 1..=d + 1 {
            levels[i] = (0..=n).filter(|&v| xcal_depth[v] <= i).collect();
            for (k, &v) in levels[i].iter().enumerate() {
                position[i][v] = k;
            }
        }
        let radix: Vec<usize> = (1..=d + 1).map(|i| levels[i].len()).collect();
        // stride[i] for i in 1..=d+1, with b_{d+1} least significant.
        let mut stride = vec![0; d + 2];
        stride[d + 1] = 1;
        for i in (1..=d).rev() {
            stride[i] = stride[i + 1] * radix[i];
        }

        let p = build_p(d)?;
        let mut this = Self {
            x: x.clone(),
            chi: profile.fixed_point,
            depth: profile.depth,
            d,
            x_hat,
            t,
            xcal,
            levels,
            position,
            radix,
            stride,
            p,
            a: FunctionalDigraph::empty(),
            b: FunctionalDigraph::empty(),
            beta: 0,
            y: FunctionalDigraph::empty(),
            v_chi: Vec::new(),
        };
        this.a = this.build_a();
        this.b = this.build_b();
        this.beta = this.encode(&this.beta_tuple());
        this.v_chi = (0..this.b.len())
            .filter(|&idx| this.decode(idx)[d - 1] == this.chi)
            .collect();
        this.y = this.build_y();
        Ok(this)
    }

    pub fn x(&self) -> &FunctionalDigraph {
        &self.x
    }

    pub fn fixed_point(&self) -> usize {
        self.chi
    }

    pub fn height(&self) -> usize {
        self.d
    }

    /// Depth of `v` in `X`.
    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn x_hat(&self) -> usize {
        self.x_hat
    }

    /// Label of the added vertex `t` in `𝒳` (always `|X|`).
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn xcal(&self) -> &FunctionalDigraph {
        &self.xcal
    }

    /// `V_i` for `1 <= i <= d+1`.
    pub fn level(&self, i: usize) -> &[usize] {
        &self.levels[i]
    }

    /// `(|V_1|, ..., |V_{d+1}|)`.
    pub fn radix(&self) -> &[usize] {
        &self.radix
    }

    pub fn p(&self) -> &FunctionalDigraph {
        &self.p
    }

    pub fn a(&self) -> &FunctionalDigraph {
        &self.a
    }

    pub fn b(&self) -> &FunctionalDigraph {
        &self.b
    }

    pub fn y(&self) -> &FunctionalDigraph {
        &self.y
    }

    /// The fixed point `β` of `B`, as a flattened index.
    pub fn beta(&self) -> usize {
        self.beta
    }

    /// `β_i = 𝒳^{d-i+1}(t)`.
    pub fn beta_tuple(&self) -> Vec<usize> {
        (1..=self.d + 1)
            .map(|i| self.xcal.iterate(self.t, self.d + 1 - i).expect("t is a vertex"))
            .collect()
    }

    /// Index of the extra vertex `u` in `A`.
    pub fn u(&self) -> usize {
        self.x.len() * (self.d + 1)
    }

    /// Index of `(x, i)` in `A` (and in `XP`).
    pub fn a_vertex(&self, x: usize, i: usize) -> usize {
        x * (self.d + 1) + i
    }

    /// B-vertices with `b_d = χ`.
    pub fn v_chi(&self) -> &[usize] {
        &self.v_chi
    }

    /// Index of `(i, b)` of `PB` inside `Y`.
    pub fn y_vertex(&self, i: usize, b: usize) -> usize {
        i * self.b.len() + b
    }

    /// Index inside `Y` of the extra copy of `b ∈ V_χ(B)`.
    pub fn y_extra_vertex(&self, b: usize) -> Option<usize> {
        let rank = self.v_chi.binary_search(&b).ok()?;
        Some(self.p.len() * self.b.len() + rank)
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.d + 1);
        tuple
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let pos = self.position[k + 1][v];
                debug_assert!(pos != usize::MAX, "vertex {v} not in V_{}", k + 1);
                pos * self.stride[k + 1]
            })
            .sum()
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut tuple = vec![0; self.d + 1];
        for i in (1..=self.d + 1).rev() {
            tuple[i - 1] = self.levels[i][index % self.radix[i - 1]];
            index /= self.radix[i - 1];
        }
        tuple
    }

    /// `b_i`, with the convention `b_0 = χ`.
    pub fn component(&self, b: &[usize], i: usize) -> usize {
        if i == 0 {
            self.chi
        } else {
            b[i - 1]
        }
    }

    /// Whether `v` may appear as component `i` of a tuple.
    pub fn allowed(&self, i: usize, v: usize) -> bool {
        (1..=self.d + 1).contains(&i) && self.position[i].get(v).is_some_and(|&p| p != usize::MAX)
    }

    /// `b^{i,x}`: `b` with its `i`-th component replaced by `x`; `b^{0,x} = b`.
    pub fn replace_component(&self, b: &[usize], i: usize, x: usize) -> Result<Vec<usize>> {
        if i == 0 {
            return Ok(b.to_vec());
        }
        if !self.allowed(i, x) {
            return Err(Error::InvalidComponent { index: i, vertex: x });
        }
        let mut out = b.to_vec();
        out[i - 1] = x;
        Ok(out)
    }

    /// The successor map of `B` on tuples.
    pub fn b_succ_tuple(&self, b: &[usize]) -> Vec<usize> {
        let d = self.d;
        let mut next: Vec<usize> = (1..=d).map(|i| self.xcal.succ(b[i])).collect();
        next.push(self.t);
        next
    }

    fn build_a(&self) -> FunctionalDigraph {
        let xp = product(&self.x, &self.p);
        let mut succ = xp.successors().to_vec();
        succ.push(self.a_vertex(self.chi, self.d - 1));
        FunctionalDigraph::from_successors_unchecked(succ)
    }

    fn build_b(&self) -> FunctionalDigraph {
        let size: usize = self.radix.iter().product();
        let succ = (0..size)
            .map(|idx| self.encode(&self.b_succ_tuple(&self.decode(idx))))
            .collect();
        FunctionalDigraph::from_successors_unchecked(succ)
    }

    fn build_y(&self) -> FunctionalDigraph {
        let pb = product(&self.p, &self.b);
        let mut succ = pb.successors().to_vec();
        for &b in &self.v_chi {
            succ.push(self.y_vertex(self.d - 1, self.b.succ(b)));
        }
        FunctionalDigraph::from_successors_unchecked(succ)
    }

    /// Image of `(x, y)` under `φ`, as an index of `AB`.
    pub fn phi_at(&self, x: usize, y: usize) -> usize {
        let nb = self.b.len();
        let pb = self.p.len() * nb;
        let (a, b) = if y < pb {
            let (i, b_idx) = (y / nb, y % nb);
            if self.depth[x] <= i {
                let b = self.decode(b_idx);
                let replaced = self
                    .replace_component(&b, i, x)
                    .expect("depth(x) <= i puts x in V_i");
                (self.a_vertex(self.component(&b, i), i), self.encode(&replaced))
            } else {
                (self.a_vertex(x, i), b_idx)
            }
        } else {
            let b = self.decode(self.v_chi[y - pb]);
            let replaced = self
                .replace_component(&b, self.d, x)
                .expect("V_d contains every vertex of X");
            (self.u(), self.encode(&replaced))
        };
        a * nb + b
    }

    /// `φ` as a map from `XY` (vertex `x·|Y| + y`) to `AB` (vertex `a·|B| + b`).
    pub fn phi(&self) -> IsoMap {
        let ny = self.y.len();
        IsoMap {
            forward: (0..self.x.len() * ny)
                .map(|v| self.phi_at(v / ny, v % ny))
                .collect(),
        }
    }

    /// Checks `d(B) = d + 1` and `n_B = n_X`, which together rule out `X | B`.
    pub fn certificate(&self) -> Result<HeightCertificate> {
        HeightCertificate::compute(&self.x, &self.b)
    }
}

/// `d(B) = d(X) + 1` together with `n_B = n_X` (classes of `E^{d-1}` on
/// `E_{|d}`, `d = d(X)`). For `B ∈ F1` these rule out `X | B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct HeightCertificate {
    pub height_x: usize,
    pub height_b: usize,
    pub classes_x: usize,
    pub classes_b: usize,
}

impl HeightCertificate {
    pub fn compute(x: &FunctionalDigraph, b: &FunctionalDigraph) -> Result<Self> {
        let height_x = x.height_profile()?.height;
        let height_b = b.height_profile()?.height;
        if height_x == 0 {
            return Err(Error::NoWitness("C1".into()));
        }
        Ok(Self {
            height_x,
            height_b,
            classes_x: equivalence_count(x, height_x)?,
            classes_b: equivalence_count(b, height_x)?,
        })
    }

    pub fn holds(&self) -> bool {
        self.height_x >= 1 && self.height_b == self.height_x + 1 && self.classes_b == self.classes_x
    }
}

/// `P`: vertices `0..=d`, `P(i) = max(i - 1, 0)`.
pub fn build_p(d: usize) -> Result<FunctionalDigraph> {
    if d == 0 {
        return Err(Error::Malformed("the path P needs d >= 1".into()));
    }
    Ok(FunctionalDigraph::from_successors_unchecked(
        (0..=d).map(|i| i.saturating_sub(1)).collect(),
    ))
}

/// `𝒳`: `X` plus a vertex `t = |X|` pointing to `x̂`, which must be deepest.
pub fn build_xhat(x: &FunctionalDigraph, x_hat: usize) -> Result<FunctionalDigraph> {
    let profile = x.height_profile()?;
    if x_hat >= x.len() {
        return Err(Error::VertexOutOfRange {
            vertex: x_hat,
            size: x.len(),
        });
    }
    if profile.depth[x_hat] != profile.height {
        return Err(Error::WrongDepth {
            vertex: x_hat,
            depth: profile.depth[x_hat],
            expected: profile.height,
        });
    }
    let mut succ = x.successors().to_vec();
    succ.push(x_hat);
    Ok(FunctionalDigraph::from_successors_unchecked(succ))
}

/// The deepest vertex whose `𝒳` has the least canonical form (lowest label
/// on ties), so the construction does not depend on how `X` is labelled.
pub fn choose_x_hat(x: &FunctionalDigraph) -> Result<usize> {
    let profile = x.height_profile()?;
    let mut seen = HashSet::new();
    (0..x.len())
        .filter(|&v| profile.depth[v] == profile.height)
        .map(|v| (build_xhat(x, v).expect("deepest vertex").canonical_form(), v))
        .filter(|(code, _)| seen.insert(code.clone()))
        .min()
        .map(|(_, v)| v)
        .ok_or(Error::NotInF1)
}

pub fn build_a(x: &FunctionalDigraph) -> Result<FunctionalDigraph> {
    Ok(FixedPointConstruction::new(x)?.a)
}

/// `B` together with its fixed point `β` (flattened index).
pub fn build_b(x: &FunctionalDigraph) -> Result<(FunctionalDigraph, usize)> {
    let c = FixedPointConstruction::new(x)?;
    Ok((c.b, c.beta))
}

pub fn build_y(x: &FunctionalDigraph) -> Result<FunctionalDigraph> {
    Ok(FixedPointConstruction::new(x)?.y)
}

pub fn phi(x: &FunctionalDigraph) -> Result<IsoMap> {
    Ok(FixedPointConstruction::new(x)?.phi())
}

/// Number of classes of `{e : depth(e) <= d}` under `e ~ e'` iff
/// `E^{d-1}(e) = E^{d-1}(e')`.
pub fn equivalence_count(e: &FunctionalDigraph, d: usize) -> Result<usize> {
    if d == 0 {
        return Err(Error::Malformed("equivalence classes need d >= 1".into()));
    }
    let profile = e.height_profile()?;
    let images: HashSet<usize> = (0..e.len())
        .filter(|&v| profile.depth[v] <= d)
        .map(|v| e.iterate(v, d - 1).expect("vertex in range"))
        .collect();
    Ok(images.len())
}

/// Validates the certificate for `X` against a given `B`.
pub fn certificate_not_divides_b(x: &FunctionalDigraph, b: &FunctionalDigraph) -> Result<HeightCertificate> {
    let cert = HeightCertificate::compute(x, b)?;
    if cert.holds() {
        Ok(cert)
    } else {
        Err(Error::Invariant(format!(
            "certificate fails: d(X)={}, d(B)={}, n_X={}, n_B={}",
            cert.height_x, cert.height_b, cert.classes_x, cert.classes_b
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(succ: &[usize]) -> FunctionalDigraph {
        FunctionalDigraph::from_successors(succ.to_vec()).unwrap()
    }

    #[test]
    fn path_p() {
        assert_eq!(build_p(1).unwrap(), g(&[0, 0]));
        assert_eq!(build_p(2).unwrap(), g(&[0, 0, 1]));
        assert_eq!(build_p(5).unwrap().height_profile().unwrap().height, 5);
        assert!(build_p(0).is_err());
    }

    #[test]
    fn xhat_extension() {
        let x = g(&[0, 0]);
        let xcal = build_xhat(&x, 1).unwrap();
        assert_eq!(xcal, g(&[0, 0, 1]));
        let prof = xcal.height_profile().unwrap();
        assert_eq!((prof.height, prof.depth[2]), (2, 2));
        assert!(matches!(build_xhat(&x, 0), Err(Error::WrongDepth { .. })));
        assert!(build_xhat(&x, 5).is_err());

        let star = g(&[0, 0, 0, 1]);
        let xcal = build_xhat(&star, 3).unwrap();
        let sizes: Vec<usize> = (0..=3).map(|i| xcal.truncate(i).unwrap().len()).collect();
        assert_eq!(sizes, vec![1, 3, 4, 5]);
    }

    #[test]
    fn two_vertex_example() {
        let c = FixedPointConstruction::new(&g(&[0, 0])).unwrap();
        assert_eq!((c.fixed_point(), c.x_hat(), c.height()), (0, 1, 1));
        assert_eq!(c.radix(), &[2, 3]);
        assert_eq!(c.a().len(), 5);
        assert_eq!(c.b().len(), 6);
        assert_eq!(c.y().len(), 15);
        assert_eq!(c.beta_tuple(), vec![1, 2]);
        assert_eq!(c.decode(c.beta()), vec![1, 2]);
        assert_eq!(c.b().succ(c.beta()), c.beta());
        // A: four vertices of XP plus u, all into (χ, 0).
        assert!(c.a().is_isomorphic(&g(&[0, 0, 0, 0, 0])));
        // B: four tuples -> (χ, t) -> (x̂, t) with a loop.
        assert!(c.b().is_isomorphic(&g(&[4, 4, 4, 4, 5, 5])));
        assert_eq!(c.b().height_profile().unwrap().height, 2);
        assert_eq!(c.v_chi().len(), c.b().len() / c.x().len());
    }

    #[test]
    fn replace_component_rules() {
        let c = FixedPointConstruction::new(&g(&[0, 0])).unwrap();
        let b = vec![0, 0];
        assert_eq!(c.replace_component(&b, 0, 1).unwrap(), b);
        assert_eq!(c.replace_component(&b, 1, 1).unwrap(), vec![1, 0]);
        assert_eq!(c.replace_component(&b, 2, 2).unwrap(), vec![0, 2]);
        // t is not in V_1.
        assert!(c.replace_component(&b, 1, 2).is_err());
        assert!(c.replace_component(&b, 3, 0).is_err());
        for i in 1..=2 {
            for &v in c.level(i) {
                assert_eq!(c.replace_component(&b, i, v).unwrap()[i - 1], v);
            }
        }
    }

    #[test]
    fn phi_spot_checks_on_two_vertex_example() {
        let c = FixedPointConstruction::new(&g(&[0, 0])).unwrap();
        let (chi, x_hat) = (0, 1);
        let nb = c.b().len();
        let phi = c.phi();
        let ny = c.y().len();
        let at = |x: usize, y: usize| phi.forward[x * ny + y];
        let ab = |a: usize, b: &[usize]| a * nb + c.encode(b);

        // (x̂, (1, χχ)) -> ((χ, 1), x̂χ)
        let y = c.y_vertex(1, c.encode(&[chi, chi]));
        assert_eq!(at(x_hat, y), ab(c.a_vertex(chi, 1), &[x_hat, chi]));
        // (χ, (0, b)) -> ((χ, 0), b) for every b
        for b in 0..nb {
            assert_eq!(at(chi, c.y_vertex(0, b)), c.a_vertex(chi, 0) * nb + b);
        }
        // (x̂, χχ) -> (u, x̂χ)
        let y = c.y_extra_vertex(c.encode(&[chi, chi])).unwrap();
        assert_eq!(at(x_hat, y), ab(c.u(), &[x_hat, chi]));

        let xy = product(c.x(), c.y());
        let abg = product(c.a(), c.b());
        assert!(xy.check_iso_map(&abg, &phi));
    }

    #[test]
    fn equivalence_counts() {
        assert_eq!(equivalence_count(&g(&[0]), 1).unwrap(), 1);
        assert_eq!(equivalence_count(&g(&[0, 0]), 1).unwrap(), 2);
        let (b, _) = build_b(&g(&[0, 0])).unwrap();
        assert_eq!(equivalence_count(&b, 1).unwrap(), 2);
        assert!(equivalence_count(&g(&[0, 0]), 0).is_err());
    }

    #[test]
    fn certificates() {
        let x = g(&[0, 0]);
        let (b, _) = build_b(&x).unwrap();
        let cert = certificate_not_divides_b(&x, &b).unwrap();
        assert_eq!(cert, HeightCertificate { height_x: 1, height_b: 2, classes_x: 2, classes_b: 2 });
        // A B of the wrong height is rejected.
        assert!(certificate_not_divides_b(&x, &g(&[0, 0, 0])).is_err());

        let star = g(&[0, 0, 0]);
        let c = FixedPointConstruction::new(&star).unwrap();
        assert_eq!(c.radix(), &[3, 4]);
        assert_eq!(c.b().len(), 12);
        assert_eq!(c.b().height_profile().unwrap().height, 2);
        assert!(c.certificate().unwrap().holds());
    }

    #[test]
    fn a_sizes() {
        for x in [g(&[0, 0]), g(&[0, 0, 1]), g(&[0, 0, 0, 2])] {
            let c = FixedPointConstruction::new(&x).unwrap();
            assert_eq!(c.a().len(), x.len() * (c.height() + 1) + 1);
            assert_eq!(c.a().len() % x.len(), 1);
            let prof = c.a().height_profile().unwrap();
            assert_eq!(prof.fixed_point, c.a_vertex(c.fixed_point(), 0));
        }
    }

    #[test]
    fn rejects_non_f1_and_c1() {
        assert!(FixedPointConstruction::new(&g(&[0])).is_err());
        assert!(FixedPointConstruction::new(&g(&[1, 0])).is_err());
        assert!(FixedPointConstruction::new(&g(&[0, 1])).is_err());
    }
}
