//! Structure decompositions with replayable certificates: even plane
//! matroids peel down to a two-dimensional base through doublings and
//! semidoublings, and claw-free Fano-free matroids either do the same or
//! reduce to a circled affine geometry under doublings. Also the witness
//! families with extremal critical number and the universality and
//! K5 embedding checks built on them.

use crate::critical::critical_number;
use crate::gf2::{
    hyperplane_from_dual, pt, Flat, LinearMap, Point, MAX_DIM,
};
use crate::matroid::{
    affine_geometry, ag_circ, k5, parse_matroid, projective_geometry, semidoubling,
    twist_decompose, twist_rebuild, Matroid, Tokens, TwistPair,
};
use crate::recognize::{
    find_aligned_induced_embedding, find_claw_fano_violation, find_induced_embedding, is_k_even,
    recognize_bose_burton, InducedEmbedding, Violation,
};
use crate::{ClawfreeError, Result};
use std::fmt;
use std::str::FromStr;

/// One growth step of a chain certificate. The apex of every step is the
/// new top standard basis vector of the grown space, so a doubling step
/// needs no data and a semidoubling step carries only the dual of the
/// hyperplane whose complement is antidoubled, written in the
/// coordinates of the matroid being grown.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChainStep {
    Double,
    Semidouble { h0_dual: Point },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChainKind {
    /// Base of dimension at most 2, steps may double or semidouble.
    EvenPlane,
    /// Base is a circled affine geometry, steps only double.
    AgCirc,
}

/// A replayable construction: a base matroid and a chain of growth
/// steps. Replaying yields a matroid of dimension base + #steps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureCertificate {
    pub kind: ChainKind,
    pub base: Matroid,
    pub steps: Vec<ChainStep>,
}

impl StructureCertificate {
    pub fn final_dim(&self) -> u32 {
        self.base.dim() + self.steps.len() as u32
    }

    /// Rebuilds the certified matroid. Each step grows the current
    /// matroid R of dimension d into dimension d+1 with apex e_d over
    /// the hyperplane spanned by the old coordinates.
    pub fn replay(&self) -> Result<Matroid> {
        let mut r = self.base.clone();
        for step in &self.steps {
            let d = r.dim();
            if d + 1 > MAX_DIM {
                return Err(ClawfreeError::DimTooLarge(d + 1));
            }
            let twister = match step {
                ChainStep::Double => Matroid::empty(d),
                ChainStep::Semidouble { h0_dual } => {
                    if !h0_dual.fits(d) {
                        return Err(ClawfreeError::PointOutOfRange(h0_dual.value(), d));
                    }
                    let h0 = hyperplane_from_dual(d, *h0_dual);
                    Matroid::from_point_set(h0.to_point_set().complement())
                }
            };
            let apex = pt(1 << d);
            r = twist_rebuild(
                &TwistPair { base: r, twister },
                d + 1,
                apex,
                apex,
            )?;
        }
        Ok(r)
    }
}

impl fmt::Display for StructureCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ChainKind::EvenPlane => "even-plane-chain",
            ChainKind::AgCirc => "ag-circ-chain",
        };
        write!(f, "certificate {kind} {} steps {}", self.base, self.steps.len())?;
        let mut dim = self.base.dim();
        for step in &self.steps {
            match step {
                ChainStep::Double => write!(f, "\nstep double apex {}", 1u32 << dim)?,
                ChainStep::Semidouble { h0_dual } => write!(
                    f,
                    "\nstep semidouble apex {} h0_dual {}",
                    1u32 << dim,
                    h0_dual
                )?,
            }
            dim += 1;
        }
        Ok(())
    }
}

impl FromStr for StructureCertificate {
    type Err = ClawfreeError;

    fn from_str(s: &str) -> Result<StructureCertificate> {
        let mut toks = Tokens::new(s);
        toks.expect_word("certificate")?;
        let kind = match toks.next() {
            Some("even-plane-chain") => ChainKind::EvenPlane,
            Some("ag-circ-chain") => ChainKind::AgCirc,
            Some(t) => {
                return Err(ClawfreeError::Parse(format!(
                    "unknown certificate kind {t:?}"
                )))
            }
            None => return Err(ClawfreeError::Parse("missing certificate kind".into())),
        };
        let base = parse_matroid(&mut toks)?;
        toks.expect_word("steps")?;
        let count = toks.expect_u32("a step count")?;
        let mut dim = base.dim();
        let mut steps = Vec::new();
        for _ in 0..count {
            if dim + 1 > MAX_DIM {
                return Err(ClawfreeError::DimTooLarge(dim + 1));
            }
            toks.expect_word("step")?;
            let shape = toks.next();
            toks.expect_word("apex")?;
            let apex = toks.expect_u32("an apex value")?;
            if apex != 1 << dim {
                return Err(ClawfreeError::Parse(format!(
                    "step at dimension {dim} must have apex {}, found {apex}",
                    1u32 << dim
                )));
            }
            let step = match shape {
                Some("double") => ChainStep::Double,
                Some("semidouble") => {
                    toks.expect_word("h0_dual")?;
                    let u = toks.expect_u32("a hyperplane dual")?;
                    let p = Point::new(u)
                        .ok_or_else(|| ClawfreeError::Parse("zero hyperplane dual".into()))?;
                    if !p.fits(dim) {
                        return Err(ClawfreeError::PointOutOfRange(u, dim));
                    }
                    ChainStep::Semidouble { h0_dual: p }
                }
                Some(t) => {
                    return Err(ClawfreeError::Parse(format!("unknown step shape {t:?}")))
                }
                None => return Err(ClawfreeError::Parse("missing step shape".into())),
            };
            steps.push(step);
            dim += 1;
        }
        toks.expect_end()?;
        Ok(StructureCertificate { kind, base, steps })
    }
}

/// A certificate together with the coordinate change carrying the input
/// matroid onto its replay: the map sends ground set to ground set
/// exactly, not merely up to isomorphism.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainDecomposition {
    pub certificate: StructureCertificate,
    pub transport: LinearMap,
}

impl ChainDecomposition {
    /// Replays the certificate and confirms the transported ground set
    /// matches it point for point.
    pub fn verify_against(&self, input: &Matroid) -> bool {
        let Ok(replayed) = self.certificate.replay() else {
            return false;
        };
        self.transport.source_dim() == input.dim()
            && self.transport.is_injective()
            && self.transport.image_of_set(input.ground()) == *replayed.ground()
    }
}

struct Peeled {
    base: Matroid,
    steps: Vec<ChainStep>,
    to_replay: LinearMap,
}

impl Peeled {
    fn leaf(m: &Matroid) -> Peeled {
        Peeled {
            base: m.clone(),
            steps: Vec::new(),
            to_replay: LinearMap::identity(m.dim()),
        }
    }

    /// Extends a peel of M|H to a peel of M, where M is the twist of
    /// M|H at the apex over H. `h0_dual` is the antidoubled hyperplane
    /// dual in H coordinates for a semidoubling step, nothing for a
    /// doubling.
    fn grow(mut self, h: &Flat, apex: Point, h0_dual: Option<Point>) -> Peeled {
        let n = h.ambient_dim();
        let step = match h0_dual {
            None => ChainStep::Double,
            Some(u) => ChainStep::Semidouble {
                h0_dual: pt(self
                    .to_replay
                    .transport_dual(u.value())
                    .expect("peel transport is invertible")),
            },
        };
        let mut pairs: Vec<(u32, u32)> = h
            .basis_points()
            .iter()
            .enumerate()
            .map(|(i, p)| (p.value(), self.to_replay.apply_value(1 << i)))
            .collect();
        pairs.push((apex.value(), 1 << (n - 1)));
        let to_replay = LinearMap::from_basis_pairs(n, n, &pairs)
            .expect("hyperplane basis plus apex spans the space");
        self.steps.push(step);
        Peeled {
            base: self.base,
            steps: self.steps,
            to_replay,
        }
    }

    fn into_decomposition(self, kind: ChainKind) -> ChainDecomposition {
        ChainDecomposition {
            certificate: StructureCertificate {
                kind,
                base: self.base,
                steps: self.steps,
            },
            transport: self.to_replay,
        }
    }
}

/// How a twist layer can look for a matroid staying in the even plane
/// class: the twister is either empty or the complement of a hyperplane.
enum TwisterShape {
    Empty,
    AffineOver { h0_dual: Point },
}

fn classify_twister(twister: &Matroid) -> Option<TwisterShape> {
    if twister.is_empty() {
        return Some(TwisterShape::Empty);
    }
    if recognize_bose_burton(twister) != Some(1) {
        return None;
    }
    let h0 = Flat::from_points(twister.dim(), twister.ground().complement().iter());
    Some(TwisterShape::AffineOver {
        h0_dual: h0.hyperplane_dual().expect("affine complement is a hyperplane"),
    })
}

/// Picks the peel slot for a matroid with a non-element: apex outside
/// the ground set (preferring the top basis vector so constructor-built
/// inputs peel along their own construction) and a hyperplane dual
/// separating it.
fn peel_slot(m: &Matroid) -> (Point, Point) {
    let n = m.dim();
    let top = 1u32 << (n - 1);
    let w = if !m.ground().contains(pt(top)) {
        top
    } else {
        m.ground()
            .complement()
            .first()
            .expect("peel slot needs a non-element")
            .value()
    };
    let u = if w >> (n - 1) & 1 == 1 {
        top
    } else {
        w & w.wrapping_neg()
    };
    (pt(w), pt(u))
}

fn peel_even(m: &Matroid) -> Peeled {
    let n = m.dim();
    if n <= 2 {
        return Peeled::leaf(m);
    }
    assert!(
        !m.ground().complement().is_empty(),
        "a projective geometry of dimension {n} is not three-even"
    );
    let (w, u) = peel_slot(m);
    let h = hyperplane_from_dual(n, u);
    let pair = twist_decompose(m, w, u).expect("peel slot is valid");
    let Some(shape) = classify_twister(&pair.twister) else {
        panic!(
            "three-even matroid failed to peel at apex {w} dual {u}: {m}"
        );
    };
    let sub = peel_even(&pair.base);
    match shape {
        TwisterShape::Empty => sub.grow(&h, w, None),
        TwisterShape::AffineOver { h0_dual } => sub.grow(&h, w, Some(h0_dual)),
    }
}

/// Decomposes a three-even matroid into a chain certificate over a
/// two-dimensional base. The transported ground set equals the replay
/// exactly. Fails only when the input is not three-even; an internal
/// contradiction with the chain description would abort loudly instead
/// of producing a bad certificate.
pub fn decompose_e3(m: &Matroid) -> Result<ChainDecomposition> {
    if !is_k_even(m, 3) {
        return Err(ClawfreeError::NotThreeEven);
    }
    Ok(peel_even(m).into_decomposition(ChainKind::EvenPlane))
}

/// Result of recognizing an affine geometry with at most one extra
/// element under a chain of doublings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AgChain {
    /// The matroid is exactly the complement of a hyperplane.
    PureAffine,
    /// The matroid arises from the circled affine geometry of dimension
    /// t by doublings; the decomposition's base is that matroid
    /// literally.
    Circled {
        t: u32,
        decomposition: ChainDecomposition,
    },
}

/// Recognizes matroids containing a spanning affine geometry: E must
/// contain the complement of some hyperplane H. The part of E inside H
/// decides the shape: empty gives the affine geometry itself, a single
/// point gives the circled affine geometry, and anything larger must
/// hang off a doubling apex inside the closure of that part, which is
/// peeled and recursed on. Returns `None` when no hyperplane works.
pub fn recognize_ag_doubling_chain(m: &Matroid) -> Option<AgChain> {
    let n = m.dim();
    let hd = (1..1u32 << n).map(pt).find(|&u| {
        hyperplane_from_dual(n, u)
            .to_point_set()
            .complement()
            .difference(m.ground())
            .is_empty()
    })?;
    let h = hyperplane_from_dual(n, hd);
    let inside = m.ground().intersection(&h.to_point_set());
    let closure = Flat::from_points(n, inside.iter());
    match closure.dim() {
        0 => Some(AgChain::PureAffine),
        1 => {
            let base = ag_circ(n);
            let iso = find_induced_embedding(m, &base)
                .expect("affine geometry plus a point maps onto the circled model");
            Some(AgChain::Circled {
                t: n,
                decomposition: ChainDecomposition {
                    certificate: StructureCertificate {
                        kind: ChainKind::AgCirc,
                        base,
                        steps: Vec::new(),
                    },
                    transport: iso.as_linear_map(),
                },
            })
        }
        _ => {
            let missing = closure.to_point_set().difference(&inside);
            let w = missing.first().expect("a proper flat part misses points");
            assert!(
                crate::matroid::is_doubling_apex(m, w),
                "affine part with a deficient closure must double at {w}: {m}"
            );
            let wv = w.value();
            let u = if wv >> (n - 1) & 1 == 1 {
                pt(1 << (n - 1))
            } else {
                pt(wv & wv.wrapping_neg())
            };
            let pair = twist_decompose(m, w, u).expect("doubling apex gives a twist slot");
            debug_assert!(pair.twister.is_empty());
            match recognize_ag_doubling_chain(&pair.base) {
                Some(AgChain::Circled { t, decomposition }) => {
                    let peeled = Peeled {
                        base: decomposition.certificate.base,
                        steps: decomposition.certificate.steps,
                        to_replay: decomposition.transport,
                    };
                    let grown = peeled.grow(&hyperplane_from_dual(n, u), w, None);
                    Some(AgChain::Circled {
                        t,
                        decomposition: grown.into_decomposition(ChainKind::AgCirc),
                    })
                }
                other => panic!(
                    "doubling of an affine-spanning matroid lost the structure ({other:?}): {m}"
                ),
            }
        }
    }
}

/// Final classification of a claw-free Fano-free matroid, or the plane
/// refuting freeness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Decomposition {
    EvenPlaneChain(ChainDecomposition),
    AgCircChain {
        t: u32,
        decomposition: ChainDecomposition,
    },
    Violation(Violation),
}

/// Decomposition report. The chain outcomes describe the restriction of
/// the input to the closure of its ground set (equal to the input when
/// full-rank); a violation is reported in input coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecisionReport {
    pub span: Flat,
    pub outcome: Decomposition,
}

/// Decides whether a matroid has an induced claw or Fano plane, and if
/// not, certifies its structure: an even plane chain or a doubled
/// circled affine geometry. Certificates replay the full-rank part of
/// the input exactly under the recorded transport.
pub fn decompose_claw_fano_free(m: &Matroid) -> DecisionReport {
    let span = m.span();
    let part = if span.dim() == m.dim() {
        m.clone()
    } else {
        m.restrict(&span)
    };
    if let Some(v) = find_claw_fano_violation(&part) {
        // Any violating plane is spanned by ground elements, so it maps
        // back into input coordinates through the span basis.
        let lifted = Flat::from_points(
            m.dim(),
            v.flat
                .basis_points()
                .iter()
                .map(|p| span.point_from_coords(p.value()).expect("plane lives in the span")),
        );
        return DecisionReport {
            span,
            outcome: Decomposition::Violation(Violation {
                flat: lifted,
                kind: v.kind,
            }),
        };
    }
    let outcome = match decompose_free_part(&part) {
        FreePeel::Even(peeled) => {
            Decomposition::EvenPlaneChain(peeled.into_decomposition(ChainKind::EvenPlane))
        }
        FreePeel::Circ { t, decomposition } => Decomposition::AgCircChain { t, decomposition },
    };
    DecisionReport { span, outcome }
}

enum FreePeel {
    Even(Peeled),
    Circ {
        t: u32,
        decomposition: ChainDecomposition,
    },
}

/// Scans for a triangle with exactly two ground elements, preferring one
/// inside a plane carrying five elements when such a plane exists.
/// Returns the two ground elements; their sum is the non-element apex.
fn two_point_triangle(m: &Matroid) -> (u32, u32) {
    let n = m.dim();
    for plane in crate::gf2::flats(n, 3) {
        if plane.count_common(m.ground()) != 5 {
            continue;
        }
        let inside: Vec<u32> = plane
            .points()
            .filter(|p| m.contains(*p))
            .map(|p| p.value())
            .collect();
        for (i, &a) in inside.iter().enumerate() {
            for &b in &inside[i + 1..] {
                if !m.ground().contains(pt(a ^ b)) {
                    return (a, b);
                }
            }
        }
        unreachable!("five points of a plane cannot be sum-closed");
    }
    let vals: Vec<u32> = m.ground().iter().map(|p| p.value()).collect();
    for (i, &a) in vals.iter().enumerate() {
        for &b in &vals[i + 1..] {
            if !m.ground().contains(pt(a ^ b)) {
                return (a, b);
            }
        }
    }
    unreachable!("a full-rank Fano-free matroid of dimension 3 or more has an open pair");
}

/// The structure walk for a full-rank matroid already known to be free
/// of claws and Fano planes.
fn decompose_free_part(m: &Matroid) -> FreePeel {
    let n = m.dim();
    if n <= 2 {
        return FreePeel::Even(Peeled::leaf(m));
    }
    let (u_pt, v_pt) = two_point_triangle(m);
    let w = pt(u_pt ^ v_pt);
    // Greedy basis through {u, v}; dropping u leaves a spanning
    // hyperplane H that keeps v and excludes w.
    let mut j_flat = Flat::from_values(n, [u_pt, v_pt]);
    let mut h_vals = vec![v_pt];
    for e in m.ground().iter() {
        if j_flat.dim() == n {
            break;
        }
        if j_flat.insert(e) {
            h_vals.push(e.value());
        }
    }
    let h = Flat::from_values(n, h_vals.iter().copied());
    debug_assert_eq!(h.dim(), n - 1);
    debug_assert!(!h.contains(w));
    let u_h = h.hyperplane_dual().expect("spanning hyperplane has a dual");
    let pair = twist_decompose(m, w, u_h).expect("apex sits outside the hyperplane");

    if pair.twister.is_empty() {
        // Doubling: both chain kinds pass through unchanged.
        return match decompose_free_part(&pair.base) {
            FreePeel::Even(sub) => FreePeel::Even(sub.grow(&h, w, None)),
            FreePeel::Circ { t, decomposition } => {
                let peeled = Peeled {
                    base: decomposition.certificate.base,
                    steps: decomposition.certificate.steps,
                    to_replay: decomposition.transport,
                };
                FreePeel::Circ {
                    t,
                    decomposition: peeled.grow(&h, w, None).into_decomposition(ChainKind::AgCirc),
                }
            }
        };
    }

    // The twister is the block of points with exactly one element among
    // {x, x+w}; the doubled block is the rest of the ground inside H.
    let b1 = pair.twister.ground();
    let b2 = pair.base.ground().difference(b1);
    if let Some(TwisterShape::AffineOver { h0_dual }) = classify_twister(&pair.twister) {
        // Semidoubling layer; the rest of the chain must stay even.
        return match decompose_free_part(&pair.base) {
            FreePeel::Even(sub) => FreePeel::Even(sub.grow(&h, w, Some(h0_dual))),
            FreePeel::Circ { t, .. } => panic!(
                "semidoubling over a circled chain (base {t}) contradicts the plane choice: {m}"
            ),
        };
    }
    if recognize_bose_burton(&Matroid::from_point_set(b2)) == Some(1) {
        // The doubled block spans an affine geometry, so the whole
        // matroid is affine plus an apex chain.
        return match recognize_ag_doubling_chain(m) {
            Some(AgChain::Circled { t, decomposition }) if t >= 3 => {
                FreePeel::Circ { t, decomposition }
            }
            Some(_) => FreePeel::Even(peel_even(m)),
            None => panic!(
                "affine doubled block without a spanning affine restriction: {m}"
            ),
        };
    }
    panic!(
        "apex partition at {w} over dual {u_h} has no affine block: {m}"
    );
}

/// A matroid of dimension n whose critical number meets the even plane
/// ceiling n/2 + 1: alternating semidoublings over a fixed hyperplane
/// and over the whole previous space, seeded with a full plane.
pub fn chibound_witness(n: u32) -> Matroid {
    assert!(n >= 1 && n <= MAX_DIM, "need 1 <= n <= {MAX_DIM}");
    if n == 1 {
        return Matroid::new(1, [pt(1)]);
    }
    let mut m = projective_geometry(2);
    while m.dim() < n {
        let d = m.dim();
        let dual = if d % 2 == 0 { pt(1) } else { pt(1 << (d - 1)) };
        m = semidoubling(&m, &hyperplane_from_dual(d, dual)).unwrap();
    }
    m
}

/// Witnesses that excluding a claw and a Fano plane bounds nothing: a
/// three-even (hence claw-free and Fano-free) matroid with critical
/// number at least k.
pub fn gsfalse_family(k: u32) -> Matroid {
    assert!(k >= 1 && 2 * k - 2 <= MAX_DIM, "family index out of range");
    if k == 1 {
        affine_geometry(1)
    } else {
        chibound_witness(2 * k - 2)
    }
}

/// Verdict of an embedding lemma check: the hypothesis can fail, or the
/// promised embedding is produced, or the lemma would be refuted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EmbeddingVerdict {
    HypothesisNotMet,
    Embedded(InducedEmbedding),
    Refuted,
}

/// Checks the universality property: a three-even host with critical
/// number at least dim(N) + min(4, chi(N) + 2) must contain every
/// three-even N as an induced restriction. `aligned` optionally demands
/// the embedding carry a chosen pattern hyperplane into a chosen host
/// hyperplane (duals given as (host, pattern)).
pub fn check_universality(
    host: &Matroid,
    pattern: &Matroid,
    aligned: Option<(Point, Point)>,
) -> EmbeddingVerdict {
    if !is_k_even(host, 3) || !is_k_even(pattern, 3) {
        return EmbeddingVerdict::HypothesisNotMet;
    }
    let chi_pattern = critical_number(pattern).chi;
    let threshold = pattern.dim() + 4.min(chi_pattern + 2);
    if critical_number(host).chi < threshold {
        return EmbeddingVerdict::HypothesisNotMet;
    }
    let found = match aligned {
        None => find_induced_embedding(pattern, host),
        Some((host_dual, pattern_dual)) => {
            find_aligned_induced_embedding(pattern, host, pattern_dual, host_dual)
        }
    };
    match found {
        Some(e) => EmbeddingVerdict::Embedded(e),
        None => EmbeddingVerdict::Refuted,
    }
}

/// Checks that a three-even matroid with critical number at least 3
/// contains the K5 cycle matroid as an induced restriction.
pub fn check_k5_lemma(m: &Matroid) -> EmbeddingVerdict {
    if !is_k_even(m, 3) || critical_number(m).chi < 3 {
        return EmbeddingVerdict::HypothesisNotMet;
    }
    match find_induced_embedding(&k5(), m) {
        Some(e) => EmbeddingVerdict::Embedded(e),
        None => EmbeddingVerdict::Refuted,
    }
}
