//! The matroid data model and its constructions.
//!
//! A matroid is a pair (E, G): an ambient geometry G = PG(n-1,2) plus a
//! set E of its points. Induced restriction to a flat re-coordinatizes
//! through the flat's echelon basis, so restrictions are first-class
//! matroids that can be recursed on.

use crate::gf2::{dot, hyperplane_from_dual, Flat, Point, PointSet, MAX_DIM};
use crate::{ClawfreeError, Result};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matroid {
    ground: PointSet,
}

impl Matroid {
    pub fn new(dim: u32, points: impl IntoIterator<Item = Point>) -> Matroid {
        Matroid {
            ground: PointSet::from_points(dim, points),
        }
    }

    pub fn from_point_set(ground: PointSet) -> Matroid {
        Matroid { ground }
    }

    pub fn empty(dim: u32) -> Matroid {
        Matroid {
            ground: PointSet::empty(dim),
        }
    }

    /// Dimension of the ambient geometry, not the rank of E.
    pub fn dim(&self) -> u32 {
        self.ground.dim()
    }

    pub fn size(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn ground(&self) -> &PointSet {
        &self.ground
    }

    pub fn contains(&self, p: Point) -> bool {
        self.ground.contains(p)
    }

    /// Closure of E: the minimal flat containing every element.
    pub fn span(&self) -> Flat {
        let mut f = Flat::empty(self.dim());
        for p in self.ground.iter() {
            f.insert(p);
            if f.dim() == self.dim() {
                break;
            }
        }
        f
    }

    pub fn rank(&self) -> u32 {
        self.span().dim()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim()
    }

    /// Induced restriction M|F = (E intersect F, F), re-coordinatized so
    /// that F's i-th basis vector becomes the i-th standard basis vector.
    pub fn restrict(&self, f: &Flat) -> Matroid {
        assert_eq!(
            f.ambient_dim(),
            self.dim(),
            "flat lives in a different geometry"
        );
        let k = f.dim();
        let mut ground = PointSet::empty(k);
        let rows = f.rows();
        let mut v = 0u32;
        for i in 1u64..1 << k {
            v ^= rows[i.trailing_zeros() as usize];
            if self.ground.contains_value(v) {
                let coords = (i ^ (i >> 1)) as u32;
                ground.insert_value(coords);
            }
        }
        Matroid { ground }
    }

    /// The complement matroid (G - E, G).
    pub fn complement(&self) -> Matroid {
        Matroid {
            ground: self.ground.complement(),
        }
    }
}

impl fmt::Display for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim {} elements", self.dim())?;
        for p in self.ground.iter() {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

impl FromStr for Matroid {
    type Err = ClawfreeError;

    fn from_str(s: &str) -> Result<Matroid> {
        let mut toks = Tokens::new(s);
        let m = parse_matroid(&mut toks)?;
        toks.expect_end()?;
        Ok(m)
    }
}

/// Whitespace token cursor shared by the matroid and certificate parsers.
pub(crate) struct Tokens<'a> {
    iter: std::str::SplitWhitespace<'a>,
    peeked: Option<Option<&'a str>>,
}

impl<'a> Tokens<'a> {
    pub(crate) fn new(s: &'a str) -> Tokens<'a> {
        Tokens {
            iter: s.split_whitespace(),
            peeked: None,
        }
    }

    pub(crate) fn next(&mut self) -> Option<&'a str> {
        match self.peeked.take() {
            Some(t) => t,
            None => self.iter.next(),
        }
    }

    pub(crate) fn peek(&mut self) -> Option<&'a str> {
        if self.peeked.is_none() {
            self.peeked = Some(self.iter.next());
        }
        self.peeked.unwrap()
    }

    pub(crate) fn expect_word(&mut self, word: &str) -> Result<()> {
        match self.next() {
            Some(t) if t == word => Ok(()),
            Some(t) => Err(ClawfreeError::Parse(format!(
                "expected {word:?}, found {t:?}"
            ))),
            None => Err(ClawfreeError::Parse(format!(
                "expected {word:?}, found end of input"
            ))),
        }
    }

    pub(crate) fn expect_u32(&mut self, what: &str) -> Result<u32> {
        match self.next() {
            Some(t) => t
                .parse()
                .map_err(|_| ClawfreeError::Parse(format!("expected {what}, found {t:?}"))),
            None => Err(ClawfreeError::Parse(format!(
                "expected {what}, found end of input"
            ))),
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<()> {
        match self.next() {
            None => Ok(()),
            Some(t) => Err(ClawfreeError::Parse(format!("unexpected trailing {t:?}"))),
        }
    }
}

/// Parses `dim <n> elements <v>*`, stopping at the first non-integer
/// token so a larger record can continue after the element list.
pub(crate) fn parse_matroid(toks: &mut Tokens<'_>) -> Result<Matroid> {
    toks.expect_word("dim")?;
    let n = toks.expect_u32("a dimension")?;
    if n > MAX_DIM {
        return Err(ClawfreeError::DimTooLarge(n));
    }
    toks.expect_word("elements")?;
    let mut ground = PointSet::empty(n);
    while let Some(t) = toks.peek() {
        let Ok(v) = t.parse::<u32>() else { break };
        toks.next();
        let p = Point::new(v)
            .ok_or_else(|| ClawfreeError::Parse("zero is not a point".into()))?;
        if !p.fits(n) {
            return Err(ClawfreeError::PointOutOfRange(v, n));
        }
        ground.insert(p);
    }
    Ok(Matroid { ground })
}

/// The full projective geometry PG(t-1,2): every point is an element.
pub fn projective_geometry(t: u32) -> Matroid {
    assert!(t <= MAX_DIM, "dimension {t} exceeds {MAX_DIM}");
    Matroid {
        ground: PointSet::full(t),
    }
}

/// The Bose-Burton geometry of order k: the complement of the flat
/// spanned by the last n-k standard basis vectors, so the elements are
/// exactly the points with a nonzero bit among the first k coordinates.
/// Order 0 gives the empty matroid, order n the projective geometry.
pub fn bose_burton(n: u32, k: u32) -> Matroid {
    assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
    assert!(k <= n, "order must satisfy 0 <= k <= n");
    let low = (1u32 << k) - 1;
    let mut ground = PointSet::empty(n);
    for v in 1..1u32 << n {
        if v & low != 0 {
            ground.insert_value(v);
        }
    }
    Matroid { ground }
}

/// The affine geometry AG(n-1,2): the Bose-Burton geometry of order 1.
pub fn affine_geometry(n: u32) -> Matroid {
    bose_burton(n, 1)
}

/// The standard basis as a matroid: t independent elements of full rank.
pub fn independent(t: u32) -> Matroid {
    assert!(t >= 1 && t <= MAX_DIM, "need 1 <= t <= {MAX_DIM}");
    Matroid::new(t, (0..t).map(|i| Point::new(1 << i).unwrap()))
}

/// The Fano plane PG(2,2).
pub fn fano() -> Matroid {
    projective_geometry(3)
}

/// The cycle matroid of the complete graph on five vertices: all vectors
/// of Hamming weight 1 or 2 in GF(2)^4.
pub fn k5() -> Matroid {
    Matroid::new(
        4,
        (1u32..16)
            .filter(|v| v.count_ones() <= 2)
            .map(|v| Point::new(v).unwrap()),
    )
}

/// The affine geometry AG(t-2,2) inside PG(t-1,2) plus one extra point of
/// the removed hyperplane: elements are the points with top coordinate 1,
/// together with the first standard basis vector.
pub fn ag_circ(t: u32) -> Matroid {
    assert!(t >= 2 && t <= MAX_DIM, "need 2 <= t <= {MAX_DIM}");
    let mut ground = PointSet::empty(t);
    for v in 1u32 << (t - 1)..1 << t {
        ground.insert_value(v);
    }
    ground.insert_value(1);
    Matroid { ground }
}

/// A five-element full-rank matroid in dimension 3. All such point sets
/// are equivalent under coordinate changes, so one representative serves.
pub fn p5() -> Matroid {
    Matroid::new(3, [1, 2, 3, 4, 7].map(|v| Point::new(v).unwrap()))
}

fn grown_dim(m: &Matroid) -> Result<u32> {
    let n = m.dim() + 1;
    if n > MAX_DIM {
        Err(ClawfreeError::DimTooLarge(n))
    } else {
        Ok(n)
    }
}

/// The doubling of M: both copies of E across a new top coordinate, so
/// E' = E + (w + E) with apex w the new standard basis vector.
pub fn doubling(m: &Matroid) -> Result<Matroid> {
    let n = grown_dim(m)?;
    let w = Point::new(1 << m.dim()).unwrap();
    let e = m.ground().embed(n);
    Ok(Matroid {
        ground: e.union(&e.translate(w)),
    })
}

/// Checks the triangle characterization of a doubling apex: w is not an
/// element and every triangle through w meets E in 0 or 2 points, which
/// for w outside E is exactly invariance of E under translation by w.
pub fn is_doubling_apex(m: &Matroid, w: Point) -> bool {
    w.fits(m.dim()) && !m.contains(w) && m.ground().translate(w) == *m.ground()
}

/// The twist doubling of M by N (both on the same geometry):
/// E' = E + (w + (E symmetric-difference D)) where D is N's ground set
/// and w is the new top coordinate.
pub fn twist_doubling(m: &Matroid, twister: &Matroid) -> Result<Matroid> {
    if m.dim() != twister.dim() {
        return Err(ClawfreeError::DimMismatch(m.dim(), twister.dim()));
    }
    let n = grown_dim(m)?;
    let w = Point::new(1 << m.dim()).unwrap();
    let e = m.ground().embed(n);
    let delta = m
        .ground()
        .symmetric_difference(twister.ground())
        .embed(n);
    Ok(Matroid {
        ground: e.union(&delta.translate(w)),
    })
}

/// The semidoubling of M with respect to a hyperplane H of its geometry:
/// the twist doubling by the affine geometry (G - H, G). Elements inside
/// H are doubled, elements outside are antidoubled.
pub fn semidoubling(m: &Matroid, h: &Flat) -> Result<Matroid> {
    if h.ambient_dim() != m.dim() {
        return Err(ClawfreeError::DimMismatch(m.dim(), h.ambient_dim()));
    }
    if !h.is_hyperplane() {
        return Err(ClawfreeError::NotHyperplane);
    }
    let affine = Matroid {
        ground: h.to_point_set().complement(),
    };
    twist_doubling(m, &affine)
}

/// Base and twister recovered from a twist doubling, both re-coordinatized
/// onto the chosen hyperplane.
pub struct TwistPair {
    pub base: Matroid,
    pub twister: Matroid,
}

/// Inverts a twist doubling at apex w across the hyperplane with the
/// given dual: returns M = Mp|H together with the twister
/// N = ({x in H : exactly one of x, x+w is an element}, H), both in H's
/// coordinates. Rebuilding at the same apex and hyperplane restores Mp
/// exactly.
pub fn twist_decompose(mp: &Matroid, w: Point, h_dual: Point) -> Result<TwistPair> {
    let n = mp.dim();
    if !w.fits(n) {
        return Err(ClawfreeError::PointOutOfRange(w.value(), n));
    }
    if !h_dual.fits(n) {
        return Err(ClawfreeError::PointOutOfRange(h_dual.value(), n));
    }
    if mp.contains(w) {
        return Err(ClawfreeError::ApexInGround(w.value()));
    }
    if dot(w.value(), h_dual.value()) == 0 {
        return Err(ClawfreeError::ApexInHyperplane(w.value()));
    }
    let h = hyperplane_from_dual(n, h_dual);
    let k = h.dim();
    let rows = h.rows();
    let mut base = PointSet::empty(k);
    let mut twister = PointSet::empty(k);
    let mut v = 0u32;
    for i in 1u64..1 << k {
        v ^= rows[i.trailing_zeros() as usize];
        let coords = (i ^ (i >> 1)) as u32;
        let in_e = mp.ground().contains_value(v);
        if in_e {
            base.insert_value(coords);
        }
        if in_e != mp.ground().contains_value(v ^ w.value()) {
            twister.insert_value(coords);
        }
    }
    Ok(TwistPair {
        base: Matroid { ground: base },
        twister: Matroid { ground: twister },
    })
}

/// Replays a twist pair inside an ambient geometry: the inverse of
/// [`twist_decompose`]. The pair's coordinates are interpreted through
/// the hyperplane named by `h_dual`, and the twist is applied at apex w.
pub fn twist_rebuild(pair: &TwistPair, ambient: u32, w: Point, h_dual: Point) -> Result<Matroid> {
    if pair.base.dim() != pair.twister.dim() {
        return Err(ClawfreeError::DimMismatch(pair.base.dim(), pair.twister.dim()));
    }
    if ambient > MAX_DIM {
        return Err(ClawfreeError::DimTooLarge(ambient));
    }
    if pair.base.dim() + 1 != ambient {
        return Err(ClawfreeError::DimMismatch(pair.base.dim() + 1, ambient));
    }
    if !w.fits(ambient) {
        return Err(ClawfreeError::PointOutOfRange(w.value(), ambient));
    }
    if !h_dual.fits(ambient) {
        return Err(ClawfreeError::PointOutOfRange(h_dual.value(), ambient));
    }
    if dot(w.value(), h_dual.value()) == 0 {
        return Err(ClawfreeError::ApexInHyperplane(w.value()));
    }
    let h = hyperplane_from_dual(ambient, h_dual);
    let mut ground = PointSet::empty(ambient);
    let delta = pair
        .base
        .ground()
        .symmetric_difference(pair.twister.ground());
    for c in pair.base.ground().iter() {
        ground.insert_value(h.value_from_coords(c.value()));
    }
    for c in delta.iter() {
        ground.insert_value(h.value_from_coords(c.value()) ^ w.value());
    }
    Ok(Matroid { ground })
}
