//! Linear algebra over GF(2).
//!
//! The ambient space is GF(2)^n for n up to [`MAX_DIM`]. Nonzero vectors
//! are [`Point`]s of the projective geometry PG(n-1,2); the zero vector is
//! represented by `None` wherever a sum can vanish, never by a `Point`.
//! Subspaces appear as [`Flat`]s in reduced echelon form (pivot = lowest
//! set bit, pivots strictly ascending, each pivot confined to its own
//! row), so equal flats have identical representations.

use crate::{ClawfreeError, Result};
use std::fmt;
use std::str::FromStr;

/// Largest supported ambient dimension. Point sets are dense bitsets of
/// 2^n bits, so this is a deliberate desk-scale ceiling.
pub const MAX_DIM: u32 = 24;

/// A point of PG(n-1,2): a nonzero vector of GF(2)^n, encoded as an
/// integer with bit i holding coordinate i.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Point(u32);

impl Point {
    /// Wraps a nonzero vector. Returns `None` for the zero vector.
    pub fn new(value: u32) -> Option<Point> {
        if value == 0 {
            None
        } else {
            Some(Point(value))
        }
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// True when the point lies in GF(2)^dim.
    pub fn fits(self, dim: u32) -> bool {
        dim < 32 && self.0 >> dim == 0
    }

    /// GF(2) sum; `None` exactly when the two points are equal.
    pub fn xor(self, other: Point) -> Option<Point> {
        Point::new(self.0 ^ other.0)
    }
}

/// Vector sum of two points, `None` when the sum is the zero vector
/// (that is, when the points coincide).
pub fn point_add(x: Point, y: Point) -> Option<Point> {
    x.xor(y)
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Point {
    type Err = ClawfreeError;

    fn from_str(s: &str) -> Result<Point> {
        let v: u32 = s
            .parse()
            .map_err(|_| ClawfreeError::Parse(format!("expected a point value, got {s:?}")))?;
        Point::new(v).ok_or_else(|| ClawfreeError::Parse("zero is not a point".into()))
    }
}

pub(crate) fn pt(value: u32) -> Point {
    Point::new(value).expect("zero is not a point")
}

fn word_count(dim: u32) -> usize {
    if dim < 6 {
        1
    } else {
        1usize << (dim - 6)
    }
}

// Masks of the bit positions whose index has bit j clear, for j = 0..5.
// Used to apply an XOR-by-2^j index permutation inside a 64-bit word.
const SWAP_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// A set of points of PG(n-1,2), stored as a dense bitset indexed by
/// point value. Bit 0 (the zero vector) is always clear.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PointSet {
    dim: u32,
    words: Vec<u64>,
}

impl PointSet {
    pub fn empty(dim: u32) -> PointSet {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        PointSet {
            dim,
            words: vec![0; word_count(dim)],
        }
    }

    /// All 2^dim - 1 points of the geometry.
    pub fn full(dim: u32) -> PointSet {
        let mut s = PointSet::empty(dim);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        if dim < 6 {
            s.words[0] &= (1u64 << (1u32 << dim)) - 1;
        }
        s.words[0] &= !1;
        s
    }

    pub fn from_points(dim: u32, points: impl IntoIterator<Item = Point>) -> PointSet {
        let mut s = PointSet::empty(dim);
        for p in points {
            s.insert(p);
        }
        s
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.fits(self.dim) && self.contains_value(p.0)
    }

    pub(crate) fn contains_value(&self, v: u32) -> bool {
        debug_assert!(v >> self.dim == 0);
        self.words[(v >> 6) as usize] >> (v & 63) & 1 == 1
    }

    pub fn insert(&mut self, p: Point) {
        assert!(
            p.fits(self.dim),
            "point {p} does not fit in dimension {}",
            self.dim
        );
        self.insert_value(p.0);
    }

    pub(crate) fn insert_value(&mut self, v: u32) {
        debug_assert!(v != 0 && v >> self.dim == 0);
        self.words[(v >> 6) as usize] |= 1u64 << (v & 63);
    }

    pub fn remove(&mut self, p: Point) {
        if p.fits(self.dim) {
            self.words[(p.0 >> 6) as usize] &= !(1u64 << (p.0 & 63));
        }
    }

    /// Points in ascending value order.
    pub fn iter(&self) -> PointsIter<'_> {
        PointsIter {
            words: &self.words,
            word_idx: 0,
            current: self.words[0],
        }
    }

    pub fn first(&self) -> Option<Point> {
        self.iter().next()
    }

    fn zip_with(&self, other: &PointSet, f: impl Fn(u64, u64) -> u64) -> PointSet {
        assert_eq!(self.dim, other.dim, "point sets live in different geometries");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        PointSet { dim: self.dim, words }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> PointSet {
        PointSet::full(self.dim).difference(self)
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        assert_eq!(self.dim, other.dim);
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        assert_eq!(self.dim, other.dim);
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & b == 0)
    }

    /// The set {s + t : s in self, s != t}. Translation by t is an index
    /// permutation (XOR by t), applied as bit and word butterflies; the
    /// element equal to t itself maps to the zero vector and is dropped.
    pub fn translate(&self, t: Point) -> PointSet {
        assert!(t.fits(self.dim));
        let mut out = self.clone();
        let v = t.0;
        for j in 0..6u32 {
            if v >> j & 1 == 1 {
                let m = SWAP_MASKS[j as usize];
                let d = 1u32 << j;
                for w in out.words.iter_mut() {
                    *w = ((*w & m) << d) | ((*w >> d) & m);
                }
            }
        }
        for j in 6..self.dim {
            if v >> j & 1 == 1 {
                let stride = 1usize << (j - 6);
                for i in 0..out.words.len() {
                    if i & stride == 0 {
                        out.words.swap(i, i | stride);
                    }
                }
            }
        }
        out.words[0] &= !1;
        out
    }

    /// Same point values inside a larger ambient geometry.
    pub fn embed(&self, dim: u32) -> PointSet {
        assert!(dim >= self.dim && dim <= MAX_DIM);
        let mut out = PointSet::empty(dim);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        out
    }

    /// Whether the set contains three points summing to zero.
    pub fn contains_triangle(&self) -> bool {
        self.iter()
            .any(|a| !self.intersection(&self.translate(a)).is_empty())
    }

    /// Number of members with value strictly greater than v.
    pub fn count_greater(&self, v: u32) -> usize {
        let wi = (v >> 6) as usize;
        let at_or_below = !0u64 >> (63 - (v & 63));
        let mut n = (self.words[wi] & !at_or_below).count_ones() as usize;
        for &w in &self.words[wi + 1..] {
            n += w.count_ones() as usize;
        }
        n
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = Point;
    type IntoIter = PointsIter<'a>;
    fn into_iter(self) -> PointsIter<'a> {
        self.iter()
    }
}

pub struct PointsIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for PointsIter<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let b = self.current.trailing_zeros();
        self.current &= self.current - 1;
        Some(Point(((self.word_idx as u32) << 6) | b))
    }
}

/// A flat of PG(n-1,2): a GF(2) subspace minus the zero vector, held in
/// reduced echelon form. The empty basis is the empty flat of dimension 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Flat {
    ambient: u32,
    basis: Vec<u32>,
}

impl Flat {
    pub fn empty(ambient: u32) -> Flat {
        assert!(ambient <= MAX_DIM, "dimension {ambient} exceeds {MAX_DIM}");
        Flat {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: u32) -> Flat {
        assert!(ambient <= MAX_DIM);
        Flat {
            ambient,
            basis: (0..ambient).map(|i| 1u32 << i).collect(),
        }
    }

    pub fn from_points(ambient: u32, points: impl IntoIterator<Item = Point>) -> Flat {
        let mut f = Flat::empty(ambient);
        for p in points {
            f.insert(p);
        }
        f
    }

    pub(crate) fn from_values(ambient: u32, values: impl IntoIterator<Item = u32>) -> Flat {
        let mut f = Flat::empty(ambient);
        for v in values {
            f.insert_value(v);
        }
        f
    }

    pub fn ambient_dim(&self) -> u32 {
        self.ambient
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn basis_points(&self) -> Vec<Point> {
        self.basis.iter().map(|&r| Point(r)).collect()
    }

    pub(crate) fn rows(&self) -> &[u32] {
        &self.basis
    }

    /// Extends the flat by a point. Returns true when the dimension grew.
    pub fn insert(&mut self, p: Point) -> bool {
        assert!(p.fits(self.ambient));
        self.insert_value(p.0)
    }

    pub(crate) fn insert_value(&mut self, v: u32) -> bool {
        debug_assert!(v >> self.ambient == 0);
        let x = self.reduce(v);
        if x == 0 {
            return false;
        }
        let pivot = x & x.wrapping_neg();
        for row in self.basis.iter_mut() {
            if *row & pivot != 0 {
                *row ^= x;
            }
        }
        let pos = self
            .basis
            .iter()
            .position(|&r| r & r.wrapping_neg() > pivot)
            .unwrap_or(self.basis.len());
        self.basis.insert(pos, x);
        true
    }

    /// Reduces v against the basis; zero iff v lies in the flat's span.
    pub(crate) fn reduce(&self, v: u32) -> u32 {
        let mut x = v;
        for &row in &self.basis {
            if x & row & row.wrapping_neg() != 0 {
                x ^= row;
            }
        }
        x
    }

    pub fn contains(&self, p: Point) -> bool {
        p.fits(self.ambient) && self.reduce(p.0) == 0
    }

    /// Number of points (2^dim - 1).
    pub fn num_points(&self) -> u64 {
        (1u64 << self.basis.len()) - 1
    }

    /// The points of the flat. Deterministic order (a Gray-code walk of
    /// basis combinations), not ascending by value.
    pub fn points(&self) -> FlatPointsIter<'_> {
        FlatPointsIter {
            basis: &self.basis,
            i: 1,
            v: 0,
        }
    }

    pub fn to_point_set(&self) -> PointSet {
        let mut s = PointSet::empty(self.ambient);
        for p in self.points() {
            s.insert_value(p.0);
        }
        s
    }

    /// How many points of the flat lie in the given set.
    pub fn count_common(&self, s: &PointSet) -> u64 {
        debug_assert_eq!(self.ambient, s.dim());
        let mut v = 0u32;
        let mut count = 0;
        for i in 1..1u64 << self.basis.len() {
            v ^= self.basis[i.trailing_zeros() as usize];
            if s.contains_value(v) {
                count += 1;
            }
        }
        count
    }

    /// Coordinates of a member point with respect to the echelon basis.
    /// `None` when the point is outside the flat.
    pub fn coords_of(&self, p: Point) -> Option<u32> {
        if !p.fits(self.ambient) {
            return None;
        }
        let mut c = 0u32;
        for (i, &row) in self.basis.iter().enumerate() {
            if p.0 & row & row.wrapping_neg() != 0 {
                c |= 1 << i;
            }
        }
        if self.value_from_coords(c) == p.0 {
            Some(c)
        } else {
            None
        }
    }

    /// The member point with the given coordinates; `None` for coords 0.
    pub fn point_from_coords(&self, coords: u32) -> Option<Point> {
        assert!(coords >> self.basis.len() == 0, "coordinates out of range");
        Point::new(self.value_from_coords(coords))
    }

    pub(crate) fn value_from_coords(&self, coords: u32) -> u32 {
        let mut v = 0u32;
        let mut c = coords;
        while c != 0 {
            v ^= self.basis[c.trailing_zeros() as usize];
            c &= c - 1;
        }
        v
    }

    pub fn is_hyperplane(&self) -> bool {
        self.ambient >= 1 && self.dim() + 1 == self.ambient
    }

    /// For a hyperplane, the unique nonzero dual vector u with
    /// F = {v : <u,v> = 0}. `None` when the flat is not a hyperplane.
    pub fn hyperplane_dual(&self) -> Option<Point> {
        if !self.is_hyperplane() {
            return None;
        }
        let mut pivot_mask = 0u32;
        for &row in &self.basis {
            pivot_mask |= row & row.wrapping_neg();
        }
        let free = !pivot_mask & ((1u32 << self.ambient) - 1);
        debug_assert_eq!(free.count_ones(), 1);
        let mut u = free;
        for &row in &self.basis {
            if row & free != 0 {
                u |= row & row.wrapping_neg();
            }
        }
        Some(Point(u))
    }

    pub fn contains_set(&self, s: &PointSet) -> bool {
        s.iter().all(|p| self.contains(p))
    }
}

pub struct FlatPointsIter<'a> {
    basis: &'a [u32],
    i: u64,
    v: u32,
}

impl Iterator for FlatPointsIter<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.i >= 1u64 << self.basis.len() {
            return None;
        }
        self.v ^= self.basis[self.i.trailing_zeros() as usize];
        self.i += 1;
        Some(Point(self.v))
    }
}

/// The hyperplane {v : <u,v> = 0} of GF(2)^ambient. Nonzero duals are in
/// bijection with hyperplanes.
pub fn hyperplane_from_dual(ambient: u32, u: Point) -> Flat {
    assert!(u.fits(ambient), "dual {u} does not fit in dimension {ambient}");
    let p = 31 - u.0.leading_zeros();
    let mut basis = Vec::with_capacity(ambient as usize - 1);
    for i in 0..ambient {
        if i == p {
            continue;
        }
        let mut row = 1u32 << i;
        if u.0 >> i & 1 == 1 {
            row |= 1 << p;
        }
        basis.push(row);
    }
    Flat { ambient, basis }
}

/// Parity of the dot product <u, v> over GF(2).
pub(crate) fn dot(u: u32, v: u32) -> u32 {
    (u & v).count_ones() & 1
}

/// The three-block partition of cl(F + {w}) minus zero: the apex itself,
/// the points of F, and the translate w + F. Rejects w inside F.
pub struct SpanParts {
    pub apex: Point,
    pub flat_points: PointSet,
    pub translate: PointSet,
}

pub fn apex_partition_of_span(f: &Flat, w: Point) -> Result<SpanParts> {
    if !w.fits(f.ambient_dim()) {
        return Err(ClawfreeError::PointOutOfRange(w.value(), f.ambient_dim()));
    }
    if f.contains(w) {
        return Err(ClawfreeError::PointInFlat(w.value()));
    }
    let flat_points = f.to_point_set();
    let mut translate = flat_points.translate(w);
    translate.remove(w);
    Ok(SpanParts {
        apex: w,
        flat_points,
        translate,
    })
}

/// True when the set is a circuit: its sum is zero and no proper nonempty
/// subset sums to zero. Equivalently (over GF(2), distinct nonzero
/// elements): sum zero and rank exactly one less than the cardinality.
pub fn is_circuit(x: &PointSet) -> bool {
    if x.is_empty() {
        return false;
    }
    let mut sum = 0u32;
    let mut span = Flat::empty(x.dim());
    let mut len = 0u32;
    for p in x.iter() {
        sum ^= p.value();
        span.insert(p);
        len += 1;
    }
    sum == 0 && span.dim() + 1 == len
}

/// Number of d-dimensional flats of PG(n-1,2) (the Gaussian binomial
/// [n choose d]_2). Panics on u128 overflow, which needs n beyond any
/// desk-scale use.
pub fn flat_count(n: u32, d: u32) -> u128 {
    if d > n {
        return 0;
    }
    // dp over ambient dimension using [m,k] = [m-1,k-1] + 2^k [m-1,k].
    let mut row: Vec<u128> = vec![1]; // [0 choose 0]
    for _m in 1..=n {
        let mut next = vec![1u128];
        for k in 1..row.len() {
            let term = (1u128 << k)
                .checked_mul(row[k])
                .and_then(|t| t.checked_add(row[k - 1]))
                .expect("flat count overflows u128");
            next.push(term);
        }
        next.push(1);
        row = next;
    }
    row[d as usize]
}

/// Streams every d-dimensional flat of PG(n-1,2) exactly once, in a
/// deterministic order: pivot supports in lexicographic order, free-bit
/// assignments in odometer order within each support.
pub fn flats(n: u32, d: u32) -> FlatsIter {
    assert!(n <= MAX_DIM);
    let exhausted = d > n;
    let pivots: Vec<u32> = (0..d.min(n)).collect();
    let mut it = FlatsIter {
        ambient: n,
        dim: d,
        pivots,
        free: Vec::new(),
        digits: Vec::new(),
        exhausted,
    };
    if !it.exhausted {
        it.recompute_free();
    }
    it
}

pub struct FlatsIter {
    ambient: u32,
    dim: u32,
    pivots: Vec<u32>,
    free: Vec<Vec<u32>>,
    digits: Vec<u64>,
    exhausted: bool,
}

impl FlatsIter {
    fn recompute_free(&mut self) {
        let is_pivot = |f: u32| self.pivots.contains(&f);
        self.free = self
            .pivots
            .iter()
            .map(|&c| (c + 1..self.ambient).filter(|&f| !is_pivot(f)).collect())
            .collect();
        self.digits = vec![0; self.pivots.len()];
    }

    fn advance(&mut self) {
        for i in 0..self.digits.len() {
            self.digits[i] += 1;
            if self.digits[i] < 1u64 << self.free[i].len() {
                return;
            }
            self.digits[i] = 0;
        }
        // Odometer wrapped: move to the next pivot support in lex order.
        let r = self.pivots.len();
        let n = self.ambient;
        let mut i = r;
        loop {
            if i == 0 {
                self.exhausted = true;
                return;
            }
            i -= 1;
            if self.pivots[i] < n - (r as u32 - i as u32) {
                self.pivots[i] += 1;
                for j in i + 1..r {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                self.recompute_free();
                return;
            }
        }
    }
}

impl Iterator for FlatsIter {
    type Item = Flat;

    fn next(&mut self) -> Option<Flat> {
        if self.exhausted {
            return None;
        }
        if self.dim == 0 {
            self.exhausted = true;
            return Some(Flat::empty(self.ambient));
        }
        let basis: Vec<u32> = (0..self.pivots.len())
            .map(|i| {
                let mut row = 1u32 << self.pivots[i];
                let mut d = self.digits[i];
                while d != 0 {
                    let b = d.trailing_zeros() as usize;
                    row |= 1 << self.free[i][b];
                    d &= d - 1;
                }
                row
            })
            .collect();
        let flat = Flat {
            ambient: self.ambient,
            basis,
        };
        self.advance();
        Some(flat)
    }
}

/// A linear map GF(2)^source -> GF(2)^target, stored as the images of the
/// standard basis vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap {
    source_dim: u32,
    target_dim: u32,
    images: Vec<u32>,
}

impl LinearMap {
    pub fn new(source_dim: u32, target_dim: u32, images: Vec<u32>) -> LinearMap {
        assert_eq!(images.len(), source_dim as usize);
        assert!(images.iter().all(|&v| v >> target_dim == 0));
        LinearMap {
            source_dim,
            target_dim,
            images,
        }
    }

    pub fn identity(dim: u32) -> LinearMap {
        LinearMap {
            source_dim: dim,
            target_dim: dim,
            images: (0..dim).map(|i| 1u32 << i).collect(),
        }
    }

    pub fn source_dim(&self) -> u32 {
        self.source_dim
    }

    pub fn target_dim(&self) -> u32 {
        self.target_dim
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply_value(&self, v: u32) -> u32 {
        debug_assert!(v >> self.source_dim == 0);
        let mut out = 0u32;
        let mut rest = v;
        while rest != 0 {
            out ^= self.images[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        out
    }

    /// Image of a point; `None` when the point lies in the kernel.
    pub fn apply(&self, p: Point) -> Option<Point> {
        Point::new(self.apply_value(p.0))
    }

    /// Composition: first this map, then `after`.
    pub fn then(&self, after: &LinearMap) -> LinearMap {
        assert_eq!(self.target_dim, after.source_dim);
        LinearMap {
            source_dim: self.source_dim,
            target_dim: after.target_dim,
            images: self.images.iter().map(|&v| after.apply_value(v)).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut f = Flat::empty(self.target_dim);
        self.images.iter().all(|&v| v != 0 && f.insert_value(v))
    }

    /// Builds the unique linear map sending each x_j to y_j, given pairs
    /// whose x parts span the source space. `None` when the x parts fail
    /// to span or the assignments are inconsistent.
    pub fn from_basis_pairs(
        source_dim: u32,
        target_dim: u32,
        pairs: &[(u32, u32)],
    ) -> Option<LinearMap> {
        let mut rows: Vec<(u32, u32)> = Vec::new();
        for &(x0, y0) in pairs {
            debug_assert!(x0 >> source_dim == 0 && y0 >> target_dim == 0);
            let (mut x, mut y) = (x0, y0);
            for &(rx, ry) in &rows {
                if x & rx & rx.wrapping_neg() != 0 {
                    x ^= rx;
                    y ^= ry;
                }
            }
            if x == 0 {
                if y != 0 {
                    return None;
                }
                continue;
            }
            let pivot = x & x.wrapping_neg();
            for (rx, ry) in rows.iter_mut() {
                if *rx & pivot != 0 {
                    *rx ^= x;
                    *ry ^= y;
                }
            }
            rows.push((x, y));
        }
        if rows.len() < source_dim as usize {
            return None;
        }
        let images = (0..source_dim)
            .map(|i| {
                let mut x = 1u32 << i;
                let mut y = 0u32;
                for &(rx, ry) in &rows {
                    if x & rx & rx.wrapping_neg() != 0 {
                        x ^= rx;
                        y ^= ry;
                    }
                }
                debug_assert_eq!(x, 0);
                y
            })
            .collect();
        Some(LinearMap {
            source_dim,
            target_dim,
            images,
        })
    }

    pub fn image_of_set(&self, s: &PointSet) -> PointSet {
        debug_assert_eq!(s.dim(), self.source_dim);
        let mut out = PointSet::empty(self.target_dim);
        for p in s.iter() {
            let v = self.apply_value(p.0);
            assert!(v != 0, "set meets the kernel of the map");
            out.insert_value(v);
        }
        out
    }

    /// For an invertible map L, the dual vector u' with <Lx, u'> = <x, u>
    /// for all x, so the hyperplane with dual u maps onto the hyperplane
    /// with dual u'. Solves the transposed system; `None` for non-square
    /// or singular maps.
    pub fn transport_dual(&self, u: u32) -> Option<u32> {
        if self.source_dim != self.target_dim {
            return None;
        }
        debug_assert!(u >> self.source_dim == 0);
        // Equations: <images[i], u'> = bit i of u, one per basis vector.
        let mut rows: Vec<(u32, u32)> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, u >> i & 1))
            .collect();
        let mut solution = 0u32;
        for i in 0..rows.len() {
            let Some(j) = (i..rows.len()).find(|&j| rows[j].0 != 0) else {
                return None;
            };
            rows.swap(i, j);
            let (a, _) = rows[i];
            let pivot = a & a.wrapping_neg();
            for j in 0..rows.len() {
                if j != i && rows[j].0 & pivot != 0 {
                    rows[j].0 ^= rows[i].0;
                    rows[j].1 ^= rows[i].1;
                }
            }
        }
        for &(a, s) in &rows {
            debug_assert_eq!(a.count_ones(), 1);
            if s == 1 {
                solution |= a;
            }
        }
        Some(solution)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn set(dim: u32, vals: &[u32]) -> PointSet {
        PointSet::from_points(dim, vals.iter().map(|&v| pt(v)))
    }

    #[test]
    fn point_sum_basics() {
        assert_eq!(point_add(pt(0b001), pt(0b010)), Some(pt(0b011)));
        assert_eq!(point_add(pt(0b101), pt(0b101)), None);
        assert_eq!(point_add(pt(0b110), pt(0b011)), Some(pt(0b101)));
    }

    #[test]
    fn full_set_sizes() {
        for n in 0..=8 {
            assert_eq!(PointSet::full(n).len() as u64, (1u64 << n) - 1);
        }
    }

    #[test]
    fn closure_examples() {
        let f = Flat::from_points(3, []);
        assert_eq!(f.dim(), 0);
        let f = Flat::from_points(3, [pt(0b001), pt(0b010)]);
        assert_eq!(f.dim(), 2);
        let pts: HashSet<u32> = f.points().map(|p| p.value()).collect();
        assert_eq!(pts, HashSet::from([1, 2, 3]));
        let g = Flat::from_points(3, [pt(0b001), pt(0b010), pt(0b011)]);
        assert_eq!(g, f);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Flat::from_points(3, [pt(1), pt(2), pt(4)]).dim(), 3);
        assert_eq!(Flat::from_points(3, [pt(1), pt(2), pt(3)]).dim(), 2);
        let all = PointSet::full(3);
        assert_eq!(Flat::from_points(3, all.iter()).dim(), 3);
    }

    #[test]
    fn echelon_form_is_canonical() {
        // Same flat from different spanning sets gives identical bases.
        let a = Flat::from_points(4, [pt(0b1100), pt(0b0110), pt(0b1010)]);
        let b = Flat::from_points(4, [pt(0b0110), pt(0b1010)]);
        assert_eq!(a, b);
        for w in a.rows().windows(2) {
            assert!(w[0].trailing_zeros() < w[1].trailing_zeros());
        }
        // Each pivot appears in exactly one row.
        for (i, &r) in a.rows().iter().enumerate() {
            let pivot = r & r.wrapping_neg();
            for (j, &s) in a.rows().iter().enumerate() {
                assert_eq!(s & pivot != 0, i == j);
            }
        }
    }

    #[test]
    fn hyperplane_examples() {
        let h = hyperplane_from_dual(3, pt(0b100));
        let pts: HashSet<u32> = h.points().map(|p| p.value()).collect();
        assert_eq!(pts, HashSet::from([0b001, 0b010, 0b011]));
        let h = hyperplane_from_dual(3, pt(0b111));
        let pts: HashSet<u32> = h.points().map(|p| p.value()).collect();
        assert_eq!(pts, HashSet::from([0b011, 0b101, 0b110]));
        let h = hyperplane_from_dual(1, pt(1));
        assert_eq!(h.dim(), 0);
    }

    #[test]
    fn hyperplane_dual_bijection() {
        for n in 1..=5u32 {
            let mut seen = HashSet::new();
            for v in 1..1u32 << n {
                let h = hyperplane_from_dual(n, pt(v));
                assert_eq!(h.dim() + 1, n);
                for p in h.points() {
                    assert_eq!(dot(v, p.value()), 0);
                }
                assert_eq!(h.hyperplane_dual(), Some(pt(v)));
                seen.insert(h);
            }
            assert_eq!(seen.len() as u128, flat_count(n, n - 1));
        }
    }

    #[test]
    fn every_point_lies_in_the_right_number_of_hyperplanes() {
        for n in 1..=5u32 {
            for v in 1..1u32 << n {
                let count = (1..1u32 << n)
                    .filter(|&u| dot(u, v) == 0)
                    .count() as u64;
                assert_eq!(count, (1u64 << (n - 1)) - 1, "n={n} v={v}");
            }
        }
    }

    #[test]
    fn flat_count_small_values() {
        assert_eq!(flat_count(3, 2), 7);
        assert_eq!(flat_count(4, 2), 35);
        assert_eq!(flat_count(4, 3), 15);
        assert_eq!(flat_count(7, 3), 11811);
        for n in 0..=6 {
            assert_eq!(flat_count(n, 0), 1);
            assert_eq!(flat_count(n, n), 1);
        }
    }

    // Oracle: flats of dimension d are the distinct closures of d-tuples
    // of points, collected by brute force.
    fn brute_force_flats(n: u32, d: u32) -> HashSet<Flat> {
        let mut out = HashSet::new();
        let mut stack = vec![(Flat::empty(n), 1u32)];
        while let Some((f, start)) = stack.pop() {
            if f.dim() == d {
                out.insert(f);
                continue;
            }
            for v in start..1u32 << n {
                let mut g = f.clone();
                if g.insert_value(v) {
                    stack.push((g, v + 1));
                }
            }
        }
        out
    }

    #[test]
    fn flat_enumeration_matches_brute_force() {
        for n in 0..=4u32 {
            for d in 0..=n {
                let enumerated: Vec<Flat> = flats(n, d).collect();
                let distinct: HashSet<Flat> = enumerated.iter().cloned().collect();
                assert_eq!(enumerated.len(), distinct.len(), "duplicates at n={n} d={d}");
                assert_eq!(distinct.len() as u128, flat_count(n, d));
                assert_eq!(distinct, brute_force_flats(n, d), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn flats_of_dimension_zero() {
        assert_eq!(flats(5, 0).count(), 1);
        assert_eq!(flats(0, 0).count(), 1);
        assert_eq!(flats(2, 3).count(), 0);
    }

    #[test]
    fn apex_partition_of_span_examples() {
        let f = Flat::from_points(3, [pt(1), pt(2)]);
        let parts = apex_partition_of_span(&f, pt(4)).unwrap();
        assert_eq!(parts.apex, pt(4));
        let fp: HashSet<u32> = parts.flat_points.iter().map(|p| p.value()).collect();
        let tp: HashSet<u32> = parts.translate.iter().map(|p| p.value()).collect();
        assert_eq!(fp, HashSet::from([1, 2, 3]));
        assert_eq!(tp, HashSet::from([5, 6, 7]));

        let empty = Flat::empty(3);
        let parts = apex_partition_of_span(&empty, pt(5)).unwrap();
        assert!(parts.flat_points.is_empty() && parts.translate.is_empty());

        let f = Flat::from_points(2, [pt(1)]);
        let parts = apex_partition_of_span(&f, pt(2)).unwrap();
        assert_eq!(parts.translate.iter().next(), Some(pt(3)));

        assert!(apex_partition_of_span(&Flat::full(3), pt(5)).is_err());
    }

    #[test]
    fn circuit_examples() {
        assert!(is_circuit(&set(3, &[1, 2, 3])));
        assert!(is_circuit(&set(3, &[0b001, 0b010, 0b100, 0b111])));
        assert!(!is_circuit(&set(3, &[1, 2])));
        assert!(!is_circuit(&set(3, &[1])));
        // Sum zero but contains a smaller dependent set: not minimal.
        assert!(!is_circuit(&set(4, &[1, 2, 3, 4, 8, 12])));
    }

    // Oracle: minimality by enumerating proper subsets.
    fn is_circuit_brute(x: &PointSet) -> bool {
        let vals: Vec<u32> = x.iter().map(|p| p.value()).collect();
        if vals.is_empty() || vals.iter().fold(0, |a, b| a ^ b) != 0 {
            return false;
        }
        for mask in 1..(1u32 << vals.len()) - 1 {
            let mut s = 0u32;
            let mut m = mask;
            while m != 0 {
                s ^= vals[m.trailing_zeros() as usize];
                m &= m - 1;
            }
            if s == 0 {
                return false;
            }
        }
        true
    }

    #[test]
    fn coords_round_trip() {
        let f = Flat::from_points(5, [pt(0b10010), pt(0b01100), pt(0b00011)]);
        for c in 1..1u32 << f.dim() {
            let p = f.point_from_coords(c).unwrap();
            assert_eq!(f.coords_of(p), Some(c));
            assert!(f.contains(p));
        }
        assert!(f.coords_of(pt(0b10000)).is_none());
        assert_eq!(f.point_from_coords(0), None);
    }

    #[test]
    fn linear_map_from_pairs() {
        let m = LinearMap::from_basis_pairs(2, 2, &[(0b01, 0b10), (0b11, 0b01)]).unwrap();
        assert_eq!(m.apply_value(0b01), 0b10);
        assert_eq!(m.apply_value(0b11), 0b01);
        assert_eq!(m.apply_value(0b10), 0b11);
        assert!(m.is_injective());
        // Consistent assignment on a dependent triple is accepted.
        let m = LinearMap::from_basis_pairs(2, 3, &[(0b01, 0b001), (0b10, 0b010), (0b11, 0b011)])
            .unwrap();
        assert_eq!(m.apply_value(0b11), 0b011);
        // Inconsistent assignment on a dependent triple.
        assert!(LinearMap::from_basis_pairs(
            2,
            3,
            &[(0b01, 0b001), (0b10, 0b010), (0b11, 0b111)]
        )
        .is_none());
        // Pairs whose sources fail to span the whole space.
        assert!(LinearMap::from_basis_pairs(3, 2, &[(0b011, 0b01)]).is_none());
    }

    proptest! {
        #[test]
        fn closure_idempotent_and_monotone(
            n in 1u32..=6,
            seed_x in proptest::collection::vec(1u32..64, 0..8),
            seed_extra in proptest::collection::vec(1u32..64, 0..4),
        ) {
            let mask = (1u32 << n) - 1;
            let xs: Vec<Point> = seed_x.iter().filter_map(|&v| Point::new(v & mask)).collect();
            let mut ys = xs.clone();
            ys.extend(seed_extra.iter().filter_map(|&v| Point::new(v & mask)));
            let cx = Flat::from_points(n, xs.iter().copied());
            let cy = Flat::from_points(n, ys.iter().copied());
            // Idempotent: closing the closure's points changes nothing.
            let cc = Flat::from_points(n, cx.points());
            prop_assert_eq!(&cc, &cx);
            // Monotone: every point of cl(X) lies in cl(Y) for X subset Y.
            for p in cx.points() {
                prop_assert!(cy.contains(p));
            }
        }

        #[test]
        fn extending_a_flat_by_an_outside_point(
            n in 1u32..=6,
            seed in proptest::collection::vec(1u32..64, 0..6),
            w in 1u32..64,
        ) {
            let mask = (1u32 << n) - 1;
            let f = Flat::from_points(n, seed.iter().filter_map(|&v| Point::new(v & mask)));
            if let Some(w) = Point::new(w & mask) {
                if !f.contains(w) {
                    let mut g = f.clone();
                    prop_assert!(g.insert(w));
                    prop_assert_eq!(g.dim(), f.dim() + 1);
                }
            }
        }

        #[test]
        fn translate_matches_naive(
            n in 1u32..=9,
            seed in proptest::collection::vec(1u32..512, 0..40),
            t in 1u32..512,
        ) {
            let mask = (1u32 << n) - 1;
            let s = PointSet::from_points(n, seed.iter().filter_map(|&v| Point::new(v & mask)));
            if let Some(t) = Point::new(t & mask) {
                let fast = s.translate(t);
                let mut naive = PointSet::empty(n);
                for p in s.iter() {
                    if let Some(q) = p.xor(t) {
                        naive.insert(q);
                    }
                }
                prop_assert_eq!(fast, naive);
            }
        }

        #[test]
        fn set_algebra_laws(
            n in 1u32..=7,
            a in proptest::collection::vec(1u32..128, 0..30),
            b in proptest::collection::vec(1u32..128, 0..30),
        ) {
            let mask = (1u32 << n) - 1;
            let sa = PointSet::from_points(n, a.iter().filter_map(|&v| Point::new(v & mask)));
            let sb = PointSet::from_points(n, b.iter().filter_map(|&v| Point::new(v & mask)));
            prop_assert_eq!(sa.complement().complement(), sa.clone());
            prop_assert_eq!(sa.union(&sb).len() + sa.intersection(&sb).len(), sa.len() + sb.len());
            prop_assert!(sa.intersection(&sb).is_subset(&sa));
            prop_assert_eq!(sa.difference(&sb).union(&sa.intersection(&sb)), sa.clone());
        }

        #[test]
        fn circuit_test_matches_brute_force(
            n in 2u32..=5,
            seed in proptest::collection::vec(1u32..32, 1..7),
        ) {
            let mask = (1u32 << n) - 1;
            let s = PointSet::from_points(n, seed.iter().filter_map(|&v| Point::new(v & mask)));
            if !s.is_empty() {
                prop_assert_eq!(is_circuit(&s), is_circuit_brute(&s));
            }
        }

        #[test]
        fn count_greater_agrees_with_filter(
            n in 1u32..=8,
            seed in proptest::collection::vec(1u32..256, 0..40),
            v in 0u32..256,
        ) {
            let mask = (1u32 << n) - 1;
            let s = PointSet::from_points(n, seed.iter().filter_map(|&x| Point::new(x & mask)));
            let v = v & mask;
            let expected = s.iter().filter(|p| p.value() > v).count();
            prop_assert_eq!(s.count_greater(v), expected);
        }
    }
}
