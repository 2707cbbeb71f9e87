//! Non-primality witnesses.
//!
//! For every functional digraph `X != C1` there are `A, B, Y` with
//! `XY = AB`, `X ∤ A` and `X ∤ B`, so `X` is not prime. The construction
//! depends on the shape of `X`:
//!
//! - disconnected: `X = X1 + X2` with `X1` a component on a longest cycle
//!   (length `l`) and `p` the least prime above `l`; then
//!   `X · pC_p = C_p · (C_p X1 + p X2)`;
//! - connected with cycle length `l > 1`: with `p^a` the largest power of the
//!   least prime factor of `l`, either `X = C_{p^a}` and
//!   `C_{p^a} · pC_{p^{a+1}} = C_{p^{a+1}} · C_{p^{a+1}}`, or
//!   `X C_{l^2} = C_{p^a} · (C_{l/p^a} X')` where `X'` is a component of
//!   `C_{l^2} X`;
//! - a fixed point: see [`FixedPointConstruction`].
//!
//! Every report carries evidence for both non-divisibility claims and is
//! re-verified before it is returned.

mod fixed_point;

use serde::Serialize;

pub use fixed_point::{
    build_a, build_b, build_p, build_xhat, build_y, certificate_not_divides_b, choose_x_hat,
    equivalence_count, phi, FixedPointConstruction, HeightCertificate,
};

use crate::algebra::{cycle, cycle_product_structure, next_prime_above, prime_power, product, scalar, smallest_prime_factor, sum, sum_all};
use crate::digraph::{FunctionalDigraph, IsoMap};
use crate::division::{cyclic_quotients, quotients_with, DivisionConfig};
use crate::enumerate::EnumConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `X` is disconnected.
    D,
    /// `X` is connected and its cycle is longer than one.
    C,
    /// `X` is connected with a fixed point.
    F1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcase {
    /// `X` is itself a cycle of prime-power length.
    PrimePowerCycle,
    General,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_hat: Option<usize>,
}

/// Why `X` does not divide a target digraph `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NonDivEvidence {
    /// `|X|` does not divide `|T|`.
    SizeArgument { divisor_size: usize, target_size: usize },
    /// No digraph of size `|T|/|X|` is a quotient; `candidates` classes were tried.
    ExhaustiveSearch { quotient_size: usize, candidates: usize },
    /// `T = B` of the fixed-point construction: `d(B) = d(X) + 1` and `n_B = n_X`.
    Certificate(HeightCertificate),
    /// `T` is a cycle of prime-power length, hence irreducible, and `X` is
    /// neither `C1` nor `T`.
    IrreducibleCycle { cycle_len: usize },
    /// No sum of cycles `Y` with at most `|T|/|X|` vertices has `[X][Y] = [T]`.
    CyclicPart { quotient_size: usize },
}

impl NonDivEvidence {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::SizeArgument { .. } => "size-argument",
            Self::ExhaustiveSearch { .. } => "exhaustive-search",
            Self::Certificate(_) => "certificate",
            Self::IrreducibleCycle { .. } => "irreducible-cycle",
            Self::CyclicPart { .. } => "cyclic-part",
        }
    }

    /// Re-derives the claim `X ∤ target` from scratch.
    pub fn validate(&self, x: &FunctionalDigraph, target: &FunctionalDigraph) -> Result<()> {
        let fail = |msg: String| Err(Error::WitnessInvalid(msg));
        match *self {
            Self::SizeArgument { divisor_size, target_size } => {
                if divisor_size != x.len() || target_size != target.len() {
                    return fail("size-argument records the wrong sizes".into());
                }
                if target.len() % x.len() == 0 {
                    return fail(format!("{} is a multiple of {}", target.len(), x.len()));
                }
            }
            Self::ExhaustiveSearch { quotient_size, candidates } => {
                if target.len() != quotient_size * x.len() {
                    return fail("exhaustive-search records the wrong quotient size".into());
                }
                let search = exhaustive(x, target, quotient_size)?;
                if !search.quotients.is_empty() {
                    return fail(format!("{x} divides {target}: quotient {}", search.quotients[0]));
                }
                if search.candidates != candidates {
                    return fail(format!(
                        "exhaustive-search records {candidates} candidates, found {}",
                        search.candidates
                    ));
                }
            }
            Self::Certificate(recorded) => {
                let cert = HeightCertificate::compute(x, target)?;
                if cert != recorded {
                    return fail(format!("certificate mismatch: recorded {recorded:?}, computed {cert:?}"));
                }
                if !cert.holds() {
                    return fail(format!("certificate does not hold: {cert:?}"));
                }
            }
            Self::IrreducibleCycle { cycle_len } => {
                let c = cycle(cycle_len)?;
                if !target.is_isomorphic(&c) {
                    return fail(format!("{target} is not C{cycle_len}"));
                }
                if prime_power(cycle_len).is_none() {
                    return fail(format!("{cycle_len} is not a prime power"));
                }
                if x.len() <= 1 || x.is_isomorphic(&c) {
                    return fail(format!("{x} is C1 or C{cycle_len}"));
                }
            }
            Self::CyclicPart { quotient_size } => {
                if target.len() != quotient_size * x.len() {
                    return fail("cyclic-part records the wrong quotient size".into());
                }
                if let Some(y) = small_cyclic_quotient(x, target, quotient_size)? {
                    return fail(format!("[X] divides [T] with quotient {y}"));
                }
            }
        }
        Ok(())
    }
}

fn exhaustive(x: &FunctionalDigraph, target: &FunctionalDigraph, size: usize) -> Result<crate::division::QuotientSet> {
    let search = quotients_with(x, target, &DivisionConfig::unpruned(size))?;
    if !search.exhaustive {
        return Err(Error::SizeLimit {
            size,
            limit: EnumConfig::default().constructive_limit,
        });
    }
    Ok(search)
}

fn small_cyclic_quotient(
    x: &FunctionalDigraph,
    target: &FunctionalDigraph,
    size: usize,
) -> Result<Option<crate::SumOfCycles>> {
    Ok(cyclic_quotients(&x.cyclic_part(), &target.cyclic_part())?
        .into_iter()
        .find(|y| y.size() <= size))
}

/// Largest quotient size that exhaustive evidence will search.
fn search_limit(bound: usize) -> usize {
    bound.min(EnumConfig::default().constructive_limit)
}

/// Picks evidence for `X ∤ target` in order of independence from the
/// construction: size, exhaustive search, then the structural arguments.
fn choose_evidence(
    x: &FunctionalDigraph,
    target: &FunctionalDigraph,
    bound: usize,
    certificate: Option<HeightCertificate>,
) -> Result<NonDivEvidence> {
    if target.len() % x.len() != 0 {
        return Ok(NonDivEvidence::SizeArgument {
            divisor_size: x.len(),
            target_size: target.len(),
        });
    }
    let quotient_size = target.len() / x.len();
    let evidence = if quotient_size <= search_limit(bound) {
        let search = exhaustive(x, target, quotient_size)?;
        NonDivEvidence::ExhaustiveSearch {
            quotient_size,
            candidates: search.candidates,
        }
    } else if let Some(cert) = certificate {
        NonDivEvidence::Certificate(cert)
    } else if let Some(len) = prime_power_cycle_len(target) {
        NonDivEvidence::IrreducibleCycle { cycle_len: len }
    } else {
        NonDivEvidence::CyclicPart { quotient_size }
    };
    evidence.validate(x, target)?;
    Ok(evidence)
}

fn prime_power_cycle_len(t: &FunctionalDigraph) -> Option<usize> {
    let n = t.len();
    let c = cycle(n).ok()?;
    (prime_power(n).is_some() && t.is_isomorphic(&c)).then_some(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub branch: Branch,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcase: Option<Subcase>,
    pub parameters: Parameters,
    pub x: FunctionalDigraph,
    pub a: FunctionalDigraph,
    pub b: FunctionalDigraph,
    pub y: FunctionalDigraph,
    /// Mixed-radix digits `(|V_1|, ..., |V_{d+1}|)` of the B tuples (F1 only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radix: Option<Vec<usize>>,
    /// Fixed point of `B` (F1 only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<usize>,
    /// `φ: XY -> AB` (F1 only; the other branches rely on canonical equality).
    #[serde(rename = "phi", skip_serializing_if = "Option::is_none")]
    pub iso: Option<IsoMap>,
    pub not_div_a: NonDivEvidence,
    pub not_div_b: NonDivEvidence,
}

#[derive(Serialize)]
struct Document<'a> {
    schema: u32,
    #[serde(flatten)]
    report: &'a WitnessReport,
}

impl WitnessReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&Document { schema: 1, report: self })
            .expect("reports always serialize")
    }

    pub fn quotient_size_a(&self) -> Option<usize> {
        (self.a.len() % self.x.len() == 0).then(|| self.a.len() / self.x.len())
    }

    pub fn quotient_size_b(&self) -> Option<usize> {
        (self.b.len() % self.x.len() == 0).then(|| self.b.len() / self.x.len())
    }
}

fn check_input(x: &FunctionalDigraph) -> Result<()> {
    if x.is_empty() {
        return Err(Error::NoWitness("the empty digraph".into()));
    }
    if x.len() == 1 {
        return Err(Error::NoWitness("C1".into()));
    }
    Ok(())
}

/// Builds and verifies a witness. `bound` caps the quotient sizes searched
/// exhaustively when choosing and re-checking evidence.
pub fn build_witness(x: &FunctionalDigraph, bound: usize) -> Result<WitnessReport> {
    check_input(x)?;
    let report = if !x.is_connected() {
        disconnected(x, bound)?
    } else {
        let len = x.components()[0].cycle_len;
        if len > 1 {
            long_cycle(x, len, bound)?
        } else {
            fixed_point(x, bound)?
        }
    };
    verify_witness(report, bound)
}

/// `(A, B, Y)` for disconnected `X`, together with `p` and `l`.
pub fn branch_d(x: &FunctionalDigraph) -> Result<(FunctionalDigraph, FunctionalDigraph, FunctionalDigraph, usize, usize)> {
    let mut comps = x.components();
    if comps.len() < 2 {
        return Err(Error::Malformed(format!("{x} is connected")));
    }
    comps.sort_by_cached_key(|c| (std::cmp::Reverse(c.cycle_len), c.digraph.canonical_form()));
    let ell = comps[0].cycle_len;
    let p = next_prime_above(ell);
    let cp = cycle(p)?;
    let x1 = &comps[0].digraph;
    let x2 = sum_all(comps[1..].iter().map(|c| &c.digraph));
    let b = sum(&product(&cp, x1), &scalar(p, &x2));
    let y = scalar(p, &cp);
    Ok((cp, b, y, p, ell))
}

/// `(A, B, Y)` for connected `X` with cycle length `l > 1`, with the subcase.
pub fn branch_c(x: &FunctionalDigraph) -> Result<(FunctionalDigraph, FunctionalDigraph, FunctionalDigraph, Subcase)> {
    let comps = x.components();
    let [comp] = comps.as_slice() else {
        return Err(Error::NotConnected);
    };
    let ell = comp.cycle_len;
    if ell < 2 {
        return Err(Error::InvalidCycleLength);
    }
    let p = smallest_prime_factor(ell).expect("ell >= 2");
    let q = max_power_dividing(p, ell);
    if x.len() == ell && ell == q {
        let c = cycle(p * q)?;
        let y = scalar(p, &c);
        return Ok((c.clone(), c, y, Subcase::PrimePowerCycle));
    }
    let x_prime = cycle_product_structure(ell * ell, x)?.representative;
    let a = cycle(q)?;
    let b = product(&cycle(ell / q)?, &x_prime);
    let y = cycle(ell * ell)?;
    Ok((a, b, y, Subcase::General))
}

fn max_power_dividing(p: usize, n: usize) -> usize {
    let mut q = 1;
    while n % (q * p) == 0 {
        q *= p;
    }
    q
}

fn disconnected(x: &FunctionalDigraph, bound: usize) -> Result<WitnessReport> {
    let (a, b, y, p, ell) = branch_d(x)?;
    Ok(WitnessReport {
        branch: Branch::D,
        subcase: None,
        parameters: Parameters {
            p: Some(p),
            ell: Some(ell),
            ..Parameters::default()
        },
        not_div_a: choose_evidence(x, &a, bound, None)?,
        not_div_b: choose_evidence(x, &b, bound, None)?,
        x: x.clone(),
        a,
        b,
        y,
        radix: None,
        beta: None,
        iso: None,
    })
}

fn long_cycle(x: &FunctionalDigraph, ell: usize, bound: usize) -> Result<WitnessReport> {
    let (a, b, y, subcase) = branch_c(x)?;
    let p = smallest_prime_factor(ell).expect("ell >= 2");
    let (_, alpha) = prime_power(max_power_dividing(p, ell)).expect("power of p");
    Ok(WitnessReport {
        branch: Branch::C,
        subcase: Some(subcase),
        parameters: Parameters {
            p: Some(p),
            alpha: Some(alpha),
            ell: Some(ell),
            ..Parameters::default()
        },
        not_div_a: choose_evidence(x, &a, bound, None)?,
        not_div_b: choose_evidence(x, &b, bound, None)?,
        x: x.clone(),
        a,
        b,
        y,
        radix: None,
        beta: None,
        iso: None,
    })
}

fn fixed_point(x: &FunctionalDigraph, bound: usize) -> Result<WitnessReport> {
    let c = FixedPointConstruction::new(x)?;
    let cert = c.certificate()?;
    Ok(WitnessReport {
        branch: Branch::F1,
        subcase: None,
        parameters: Parameters {
            d: Some(c.height()),
            x_hat: Some(c.x_hat()),
            ..Parameters::default()
        },
        not_div_a: choose_evidence(x, c.a(), bound, None)?,
        not_div_b: choose_evidence(x, c.b(), bound, Some(cert))?,
        x: x.clone(),
        a: c.a().clone(),
        b: c.b().clone(),
        y: c.y().clone(),
        radix: Some(c.radix().to_vec()),
        beta: Some(c.beta()),
        iso: Some(c.phi()),
    })
}

/// Re-checks every claim of a report. When a quotient size is within the
/// search bound, an exhaustive search is run as well, whatever evidence the
/// report recorded.
pub fn verify_witness(report: WitnessReport, bound: usize) -> Result<WitnessReport> {
    let invalid = |msg: &str| Err(Error::WitnessInvalid(msg.into()));
    let x = &report.x;
    if check_input(x).is_err() {
        return invalid("X must be non-empty and different from C1");
    }
    let xy = product(x, &report.y);
    let ab = product(&report.a, &report.b);
    if xy.canonical_form() != ab.canonical_form() {
        return invalid("XY and AB are not isomorphic");
    }
    match (&report.iso, report.branch) {
        (Some(phi), _) => {
            if !xy.check_iso_map(&ab, phi) {
                return invalid("phi is not an isomorphism from XY to AB");
            }
        }
        (None, Branch::F1) => return invalid("F1 report without phi"),
        (None, _) => {}
    }
    if let (Some(beta), Branch::F1) = (report.beta, report.branch) {
        if beta >= report.b.len() || report.b.succ(beta) != beta {
            return invalid("beta is not a fixed point of B");
        }
    }
    for (target, evidence, side) in [(&report.a, &report.not_div_a, "A"), (&report.b, &report.not_div_b, "B")] {
        evidence
            .validate(x, target)
            .map_err(|e| Error::WitnessInvalid(format!("X ∤ {side}: {e}")))?;
        if target.len() % x.len() == 0 {
            let size = target.len() / x.len();
            if size <= search_limit(bound) && !exhaustive(x, target, size)?.quotients.is_empty() {
                return Err(Error::WitnessInvalid(format!("X ∤ {side}: X divides {side}")));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::DEFAULT_BOUND;

    fn g(succ: &[usize]) -> FunctionalDigraph {
        FunctionalDigraph::from_successors(succ.to_vec()).unwrap()
    }

    fn cycles(lengths: &[usize]) -> FunctionalDigraph {
        crate::SumOfCycles::from_lengths(lengths.to_vec()).unwrap().to_digraph()
    }

    #[test]
    fn no_witness_for_c1_or_empty() {
        assert!(matches!(build_witness(&g(&[0]), 8), Err(Error::NoWitness(_))));
        assert!(matches!(build_witness(&FunctionalDigraph::empty(), 8), Err(Error::NoWitness(_))));
    }

    #[test]
    fn branch_d_examples() {
        let (a, b, y, p, ell) = branch_d(&cycles(&[1, 1])).unwrap();
        assert_eq!((p, ell), (2, 1));
        assert!(a.is_isomorphic(&cycles(&[2])));
        assert!(b.is_isomorphic(&cycles(&[2, 1, 1])));
        assert!(y.is_isomorphic(&cycles(&[2, 2])));

        let (a, b, y, p, ell) = branch_d(&cycles(&[1, 2])).unwrap();
        assert_eq!((p, ell), (3, 2));
        assert!(a.is_isomorphic(&cycles(&[3])));
        assert!(b.is_isomorphic(&cycles(&[6, 1, 1, 1])));
        assert!(y.is_isomorphic(&cycles(&[3, 3, 3])));

        let r = build_witness(&cycles(&[1, 1]), DEFAULT_BOUND).unwrap();
        assert_eq!(r.branch, Branch::D);
        assert_eq!(r.not_div_b, NonDivEvidence::ExhaustiveSearch { quotient_size: 2, candidates: 3 });
        assert_eq!(r.not_div_a, NonDivEvidence::ExhaustiveSearch { quotient_size: 1, candidates: 1 });
    }

    #[test]
    fn branch_c_examples() {
        let (a, b, y, sub) = branch_c(&cycles(&[2])).unwrap();
        assert_eq!(sub, Subcase::PrimePowerCycle);
        assert!(a.is_isomorphic(&cycles(&[4])) && b.is_isomorphic(&cycles(&[4])));
        assert!(y.is_isomorphic(&cycles(&[4, 4])));

        let (a, b, y, sub) = branch_c(&cycles(&[6])).unwrap();
        assert_eq!(sub, Subcase::General);
        assert!(a.is_isomorphic(&cycles(&[2])));
        assert!(y.is_isomorphic(&cycles(&[36])));
        assert_eq!(b.len(), 3 * 36);
        assert_eq!(b.cyclic_part(), crate::SumOfCycles::uniform(3, 36).unwrap());

        // A 2-cycle with one tail.
        let x = g(&[1, 0, 0]);
        let (a, b, y, _) = branch_c(&x).unwrap();
        assert!(a.is_isomorphic(&cycles(&[2])) && y.is_isomorphic(&cycles(&[4])));
        assert_eq!(b.len(), 6);
        let r = build_witness(&x, DEFAULT_BOUND).unwrap();
        assert_eq!(r.parameters, Parameters { p: Some(2), alpha: Some(1), ell: Some(2), ..Parameters::default() });
        assert_eq!(r.not_div_b, NonDivEvidence::ExhaustiveSearch { quotient_size: 2, candidates: 3 });
    }

    #[test]
    fn two_vertex_fixed_point_report() {
        let r = build_witness(&g(&[0, 0]), DEFAULT_BOUND).unwrap();
        assert_eq!(r.branch, Branch::F1);
        assert_eq!((r.a.len(), r.b.len(), r.y.len()), (5, 6, 15));
        assert_eq!(r.radix.as_deref(), Some(&[2, 3][..]));
        assert_eq!(r.not_div_a.kind(), "size-argument");
        assert_eq!(r.not_div_b, NonDivEvidence::ExhaustiveSearch { quotient_size: 3, candidates: 7 });
        assert_eq!(r.iso.as_ref().unwrap().forward.len(), 30);
    }

    #[test]
    fn large_quotients_fall_back_to_structure() {
        let path = g(&[0, 0, 1, 2]);
        let r = build_witness(&path, DEFAULT_BOUND).unwrap();
        assert_eq!((r.b.len(), r.y.len()), (120, 510));
        assert!(matches!(r.not_div_b, NonDivEvidence::Certificate(_)));

        let r = build_witness(&cycles(&[6]), DEFAULT_BOUND).unwrap();
        assert_eq!(r.not_div_a.kind(), "size-argument");
        assert_eq!(r.not_div_b.kind(), "cyclic-part");

        let r = build_witness(&cycles(&[2]), 1).unwrap();
        assert_eq!(r.not_div_a, NonDivEvidence::IrreducibleCycle { cycle_len: 4 });
        assert_eq!(r.not_div_b, NonDivEvidence::IrreducibleCycle { cycle_len: 4 });

        let r = build_witness(&g(&[0, 0]), 2).unwrap();
        assert!(matches!(r.not_div_b, NonDivEvidence::Certificate(_)));
    }

    #[test]
    fn tampered_reports_are_rejected() {
        let r = build_witness(&g(&[0, 0]), DEFAULT_BOUND).unwrap();
        let mut succ = r.b.successors().to_vec();
        succ[0] = (succ[0] + 1) % succ.len();
        let tampered = WitnessReport { b: g(&succ), ..r.clone() };
        assert!(matches!(verify_witness(tampered, DEFAULT_BOUND), Err(Error::WitnessInvalid(_))));

        let mut phi = r.iso.clone().unwrap();
        phi.forward[0] = phi.forward[1];
        let tampered = WitnessReport { iso: Some(phi), ..r.clone() };
        assert!(verify_witness(tampered, DEFAULT_BOUND).is_err());

        let wrong = WitnessReport {
            not_div_b: NonDivEvidence::ExhaustiveSearch { quotient_size: 3, candidates: 6 },
            ..r.clone()
        };
        assert!(verify_witness(wrong, DEFAULT_BOUND).is_err());

        // X = C2 divides A = C2 + C2; the recorded evidence must not survive.
        let bogus = WitnessReport {
            x: cycles(&[2]),
            a: cycles(&[2, 2]),
            b: cycles(&[2]),
            y: cycles(&[2, 2]),
            branch: Branch::C,
            iso: None,
            beta: None,
            radix: None,
            subcase: None,
            parameters: Parameters::default(),
            not_div_a: NonDivEvidence::CyclicPart { quotient_size: 2 },
            not_div_b: NonDivEvidence::IrreducibleCycle { cycle_len: 2 },
        };
        assert!(verify_witness(bogus, DEFAULT_BOUND).is_err());
    }

    #[test]
    fn json_is_deterministic() {
        let a = build_witness(&g(&[0, 0]), DEFAULT_BOUND).unwrap().to_json();
        let b = build_witness(&g(&[0, 0]), DEFAULT_BOUND).unwrap().to_json();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["branch"], "F1");
        assert_eq!(v["x"], "[0,0]");
        assert_eq!(v["radix"], serde_json::json!([2, 3]));
        assert_eq!(v["not_div_a"]["kind"], "size-argument");
        assert_eq!(v["phi"].as_array().unwrap().len(), 30);
    }
}
