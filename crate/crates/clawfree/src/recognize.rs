//! Decision procedures: induced-embedding search, triangle profiles,
//! Bose-Burton and affine recognition, k-evenness, claw/Fano freeness,
//! and canonical forms for isomorphism work.

use crate::gf2::{dot, flats, pt, Flat, LinearMap, Point};
use crate::matroid::Matroid;
use std::sync::OnceLock;

/// A linear injection of one geometry into another realizing an induced
/// restriction: elements map to elements, non-elements of the image span
/// stay non-elements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InducedEmbedding {
    source_dim: u32,
    target_dim: u32,
    images: Vec<u32>,
}

impl InducedEmbedding {
    pub fn source_dim(&self) -> u32 {
        self.source_dim
    }

    pub fn target_dim(&self) -> u32 {
        self.target_dim
    }

    /// Images of the source standard basis vectors.
    pub fn images(&self) -> Vec<Point> {
        self.images.iter().map(|&v| Point::new(v).unwrap()).collect()
    }

    pub fn as_linear_map(&self) -> LinearMap {
        LinearMap::new(self.source_dim, self.target_dim, self.images.clone())
    }

    /// Image of a source point. Total because the map is injective.
    pub fn apply(&self, p: Point) -> Point {
        let mut v = 0u32;
        let mut rest = p.value();
        while rest != 0 {
            v ^= self.images[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        Point::new(v).expect("embedding is injective")
    }

    /// Replays the embedding point by point: injectivity plus the induced
    /// condition phi(G') intersect E(M) = phi(E(N)).
    pub fn verify(&self, pattern: &Matroid, host: &Matroid) -> bool {
        if self.source_dim != pattern.dim()
            || self.target_dim != host.dim()
            || self.images.len() != pattern.dim() as usize
        {
            return false;
        }
        let mut span = Flat::empty(self.target_dim);
        if !self.images.iter().all(|&v| v != 0 && {
            let mut f = span.clone();
            let grew = f.insert_value(v);
            span = f;
            grew
        }) {
            return false;
        }
        for s in 1..1u32 << self.source_dim {
            let p = Point::new(s).unwrap();
            let img = self.apply(p);
            if pattern.contains(p) != host.contains(img) {
                return false;
            }
        }
        true
    }
}

fn search_embedding(
    pattern: &Matroid,
    host: &Matroid,
    alignment: Option<(u32, u32)>,
) -> Option<InducedEmbedding> {
    let k = pattern.dim();
    let n = host.dim();
    if k > n {
        return None;
    }
    // phi[x] = image of source vector x, filled level by level.
    let mut phi = vec![0u32; 1 << k];
    let mut images = vec![0u32; k as usize];

    fn descend(
        level: u32,
        k: u32,
        n: u32,
        pattern: &Matroid,
        host: &Matroid,
        alignment: Option<(u32, u32)>,
        phi: &mut [u32],
        images: &mut [u32],
    ) -> bool {
        if level == k {
            return true;
        }
        let half = 1usize << level;
        'candidate: for y in 1..1u32 << n {
            if let Some((src_dual, tgt_dual)) = alignment {
                if dot(y, tgt_dual) != (src_dual >> level) & 1 {
                    continue;
                }
            }
            // Check the new span slice {x + e_level : x in old span}.
            for x in 0..half {
                let img = phi[x] ^ y;
                if img == 0 {
                    continue 'candidate;
                }
                let s = (x as u32) | (1 << level);
                if pattern.ground().contains_value(s) != host.ground().contains_value(img) {
                    continue 'candidate;
                }
            }
            for x in 0..half {
                phi[x + half] = phi[x] ^ y;
            }
            images[level as usize] = y;
            if descend(level + 1, k, n, pattern, host, alignment, phi, images) {
                return true;
            }
        }
        false
    }

    if descend(0, k, n, pattern, host, alignment, &mut phi, &mut images) {
        Some(InducedEmbedding {
            source_dim: k,
            target_dim: n,
            images,
        })
    } else {
        None
    }
}

/// Searches for an induced embedding of the pattern into the host.
/// Deterministic: returns the first embedding in lexicographic order of
/// the basis-image list, or `None` after exhausting the search.
pub fn find_induced_embedding(pattern: &Matroid, host: &Matroid) -> Option<InducedEmbedding> {
    search_embedding(pattern, host, None)
}

/// Like [`find_induced_embedding`], but additionally requires the
/// embedding to carry the pattern hyperplane with dual `pattern_dual`
/// into the host hyperplane with dual `host_dual` (and nothing else of
/// the image into it).
pub fn find_aligned_induced_embedding(
    pattern: &Matroid,
    host: &Matroid,
    pattern_dual: Point,
    host_dual: Point,
) -> Option<InducedEmbedding> {
    assert!(pattern_dual.fits(pattern.dim()) && host_dual.fits(host.dim()));
    search_embedding(pattern, host, Some((pattern_dual.value(), host_dual.value())))
}

/// Whether the host has an induced restriction isomorphic to the pattern.
pub fn has_induced(host: &Matroid, pattern: &Matroid) -> bool {
    find_induced_embedding(pattern, host).is_some()
}

/// Isomorphism of matroids as coordinatized objects: same ambient
/// dimension plus a coordinate change carrying one ground set onto the
/// other. Elements map to elements, so the search places a basis chosen
/// from the elements and only needs to consider element images; a
/// common completion outside the spans always exists once the span
/// restrictions match.
pub fn is_isomorphic(a: &Matroid, b: &Matroid) -> bool {
    if a.dim() != b.dim() || a.size() != b.size() {
        return false;
    }
    if a == b {
        return true;
    }
    if a.dim() <= 4 {
        return exact_canonical_bits(a) == exact_canonical_bits(b);
    }
    let (sa, sb) = (a.span(), b.span());
    if sa.dim() != sb.dim() {
        return false;
    }
    search_full_rank_iso(&a.restrict(&sa), &b.restrict(&sb))
}

/// Backtracking isomorphism test for full-rank matroids of equal
/// dimension and size. A basis of the first ground set is mapped level
/// by level to elements of the second, each choice checked against the
/// membership pattern of every subset sum placed so far.
fn search_full_rank_iso(a: &Matroid, b: &Matroid) -> bool {
    let n = a.dim();
    debug_assert!(a.is_full_rank() && b.is_full_rank() && n == b.dim());
    if n == 0 {
        return true;
    }
    let mut basis = Vec::new();
    let mut flat = Flat::empty(n);
    for p in a.ground().iter() {
        if flat.insert(p) {
            basis.push(p.value());
        }
    }
    let candidates: Vec<u32> = b.ground().iter().map(|p| p.value()).collect();
    // pattern[s] = XOR of the basis subset s; phi holds its image.
    let mut pattern = vec![0u32; 1 << n];
    for s in 1usize..1 << n {
        pattern[s] = pattern[s & (s - 1)] ^ basis[s.trailing_zeros() as usize];
    }
    let mut phi = vec![0u32; 1 << n];
    fn descend(
        level: u32,
        a: &Matroid,
        b: &Matroid,
        candidates: &[u32],
        pattern: &[u32],
        phi: &mut [u32],
    ) -> bool {
        let n = a.dim();
        if level == n {
            return true;
        }
        let half = 1usize << level;
        'candidate: for &y in candidates {
            for x in 0..half {
                let img = phi[x] ^ y;
                if img == 0 {
                    continue 'candidate;
                }
                let p = pt(pattern[x + half]);
                if a.contains(p) != b.contains(pt(img)) {
                    continue 'candidate;
                }
            }
            for x in 0..half {
                phi[x + half] = phi[x] ^ y;
            }
            if descend(level + 1, a, b, candidates, pattern, phi) {
                return true;
            }
        }
        false
    }
    descend(0, a, b, &candidates, &pattern, &mut phi)
}

/// Triangle census of a matroid: counts[i] = number of triangles T of
/// the ambient geometry with |T intersect E| = i.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TriangleProfile {
    pub counts: [u64; 4],
}

impl TriangleProfile {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn triangle_profile(m: &Matroid) -> TriangleProfile {
    let mut counts = [0u64; 4];
    for t in flats(m.dim(), 2) {
        counts[t.count_common(m.ground()) as usize] += 1;
    }
    TriangleProfile { counts }
}

/// Recognizes Bose-Burton geometries: returns the order k when the
/// non-elements form a flat of codimension k. Equivalent to the triangle
/// criterion "no triangle meets E exactly once" for nonempty E; the empty
/// matroid is not considered Bose-Burton.
pub fn recognize_bose_burton(m: &Matroid) -> Option<u32> {
    if m.is_empty() {
        return None;
    }
    let missing = m.ground().complement();
    let f = Flat::from_points(m.dim(), missing.iter());
    if f.num_points() == missing.len() as u64 {
        Some(m.dim() - f.dim())
    } else {
        None
    }
}

/// True when M is triangle-free and has no induced claw; for such M the
/// pair (E, cl(E)) is an affine geometry, which this procedure also
/// asserts (a failure of that consequence would be reported loudly).
pub fn recognize_affine_span(m: &Matroid) -> bool {
    if m.ground().contains_triangle() {
        return false;
    }
    if let Some(v) = find_claw_fano_violation(m) {
        debug_assert!(matches!(v.kind, ViolationKind::Claw));
        return false;
    }
    if !m.is_empty() {
        let affine_part = m.restrict(&m.span());
        assert_eq!(
            recognize_bose_burton(&affine_part),
            Some(1),
            "triangle-free claw-free matroid whose span restriction is not affine: {m}"
        );
    }
    true
}

/// The four-element-circuit criterion: M is triangle-free and every
/// triple of distinct elements lies in a four-element circuit (its sum
/// completed inside E). Agrees with [`recognize_affine_span`].
pub fn affine_by_four_circuits(m: &Matroid) -> bool {
    let vals: Vec<u32> = m.ground().iter().map(|p| p.value()).collect();
    for (i, &a) in vals.iter().enumerate() {
        for &b in &vals[i + 1..] {
            if m.ground().contains_value(a ^ b) {
                return false;
            }
        }
    }
    for (i, &a) in vals.iter().enumerate() {
        for (j, &b) in vals.iter().enumerate().skip(i + 1) {
            for &c in &vals[j + 1..] {
                // a + b + c is nonzero here: a + b inside E is excluded
                // above, so the completing fourth point is sound.
                if !m.ground().contains_value(a ^ b ^ c) {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether every flat of dimension exactly k meets E in an even number
/// of points. Checking only dimension k is sound for the k-even class;
/// [`is_k_even_all_dims`] is the literal all-dimensions oracle.
pub fn is_k_even(m: &Matroid, k: u32) -> bool {
    assert!(k >= 2, "evenness is defined for dimensions 2 and up");
    flats(m.dim(), k).all(|f| f.count_common(m.ground()) % 2 == 0)
}

/// Literal form of the k-even condition: every flat of every dimension
/// from k up has even intersection with E.
pub fn is_k_even_all_dims(m: &Matroid, k: u32) -> bool {
    assert!(k >= 2);
    (k..=m.dim()).all(|d| flats(m.dim(), d).all(|f| f.count_common(m.ground()) % 2 == 0))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ViolationKind {
    /// Three independent points and nothing else in a plane.
    Claw,
    /// A fully occupied plane.
    Fano,
}

impl std::fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ViolationKind::Claw => write!(f, "claw"),
            ViolationKind::Fano => write!(f, "fano"),
        }
    }
}

/// A plane witnessing an induced claw or Fano restriction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub flat: Flat,
    pub kind: ViolationKind,
}

/// Scans every plane of the geometry. Both excluded matroids are
/// three-dimensional, so planes are the only flats that can carry one:
/// a full plane is a Fano restriction, and a plane meeting E in exactly
/// three independent points is a claw.
pub fn find_claw_fano_violation(m: &Matroid) -> Option<Violation> {
    if m.dim() < 3 {
        return None;
    }
    for plane in flats(m.dim(), 3) {
        match plane.count_common(m.ground()) {
            7 => {
                return Some(Violation {
                    flat: plane,
                    kind: ViolationKind::Fano,
                })
            }
            3 => {
                let pts: Vec<u32> = plane
                    .points()
                    .filter(|p| m.contains(*p))
                    .map(|p| p.value())
                    .collect();
                if pts[0] ^ pts[1] != pts[2] {
                    return Some(Violation {
                        flat: plane,
                        kind: ViolationKind::Claw,
                    });
                }
            }
            _ => {}
        }
    }
    None
}

pub fn is_claw_fano_free(m: &Matroid) -> bool {
    find_claw_fano_violation(m).is_none()
}

/// Isomorphism invariant of a matroid. Exact forms (available through
/// dimension 4) are equal precisely for isomorphic matroids; signatures
/// are cheap necessary invariants used to bucket census candidates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CanonicalForm {
    Exact { dim: u32, ground_bits: u64 },
    Signature(Signature),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Signature {
    pub dim: u32,
    pub size: u32,
    pub triangles: [u64; 4],
    pub plane_histogram: [u64; 8],
    pub hyperplane_sizes: Vec<u32>,
}

/// Point maps of all invertible linear transformations of GF(2)^n,
/// generated in a fixed order. Each table maps vector index to image.
pub(crate) fn gl_point_tables(n: u32) -> &'static [Vec<u32>] {
    assert!(n <= 4, "full linear group sweeps are capped at dimension 4");
    static TABLES: OnceLock<[Vec<Vec<u32>>; 5]> = OnceLock::new();
    let all = TABLES.get_or_init(|| {
        let mut out: [Vec<Vec<u32>>; 5] = Default::default();
        for n in 0..=4u32 {
            let mut maps = Vec::new();
            let mut images = Vec::new();
            build_invertible(n, &mut images, &mut maps);
            out[n as usize] = maps;
        }
        out
    });
    &all[n as usize]
}

fn build_invertible(n: u32, images: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if images.len() == n as usize {
        let mut table = vec![0u32; 1 << n];
        for v in 1usize..1 << n {
            table[v] = table[v & (v - 1)] ^ images[v.trailing_zeros() as usize];
        }
        out.push(table);
        return;
    }
    let mut span = Flat::empty(n);
    for &img in images.iter() {
        span.insert_value(img);
    }
    for y in 1..1u32 << n {
        if !span.contains(Point::new(y).unwrap()) {
            images.push(y);
            build_invertible(n, images, out);
            images.pop();
        }
    }
}

/// Minimum ground-set bitstring over all coordinate changes. Only
/// available through dimension 4, where the full group sweep is cheap.
pub fn exact_canonical_bits(m: &Matroid) -> Option<u64> {
    if m.dim() > 4 {
        return None;
    }
    let values: Vec<u32> = m.ground().iter().map(|p| p.value()).collect();
    let mut best = u64::MAX;
    for table in gl_point_tables(m.dim()) {
        let mut bits = 0u64;
        for &v in &values {
            bits |= 1 << table[v as usize];
        }
        best = best.min(bits);
    }
    if best == u64::MAX {
        best = 0; // empty ground set, empty group product
    }
    Some(best)
}

pub fn invariant_signature(m: &Matroid) -> Signature {
    let n = m.dim();
    let mut plane_histogram = [0u64; 8];
    if n >= 3 {
        for plane in flats(n, 3) {
            plane_histogram[plane.count_common(m.ground()) as usize] += 1;
        }
    }
    let mut hyperplane_sizes: Vec<u32> = (1..1u32 << n)
        .map(|u| {
            m.ground()
                .iter()
                .filter(|p| dot(p.value(), u) == 0)
                .count() as u32
        })
        .collect();
    hyperplane_sizes.sort_unstable();
    Signature {
        dim: n,
        size: m.size() as u32,
        triangles: triangle_profile(m).counts,
        plane_histogram,
        hyperplane_sizes,
    }
}

/// Exact canonical form through dimension 4, invariant signature above.
pub fn canonical_form(m: &Matroid) -> CanonicalForm {
    match exact_canonical_bits(m) {
        Some(ground_bits) => CanonicalForm::Exact {
            dim: m.dim(),
            ground_bits,
        },
        None => CanonicalForm::Signature(invariant_signature(m)),
    }
}
