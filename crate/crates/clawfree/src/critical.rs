//! Critical number: the codimension of the largest flat avoiding the
//! ground set, found by a canonical-chain branch and bound search. Also
//! the apex partition of a hyperplane and the affinity check on its
//! blocks.

use crate::gf2::{dot, hyperplane_from_dual, Flat, Point, PointSet};
#[cfg(test)]
use crate::gf2::flats;
use crate::matroid::Matroid;
use crate::recognize::{is_claw_fano_free, recognize_bose_burton};
use crate::{ClawfreeError, Result};

/// Critical number together with a maximum flat disjoint from E.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChiResult {
    pub chi: u32,
    pub witness: Flat,
}

/// Smallest k such that some flat of codimension k avoids E entirely.
pub fn critical_number(m: &Matroid) -> ChiResult {
    let witness = max_empty_flat(m);
    ChiResult {
        chi: m.dim() - witness.dim(),
        witness,
    }
}

/// The first flat of maximum dimension disjoint from E, in the canonical
/// search order (basis chains ascending, each basis point minimal in its
/// coset of the flat built so far).
pub fn max_empty_flat(m: &Matroid) -> Flat {
    let n = m.dim();
    if m.is_empty() {
        return Flat::full(n);
    }
    // A triangle inside E meets every hyperplane, so no hyperplane can
    // avoid E and the best possible dimension drops by one more.
    let cap = if m.ground().contains_triangle() {
        n - 2
    } else {
        n - 1
    };
    let pool = m.ground().complement();
    let mut search = Search {
        best: Flat::empty(n),
        cap,
    };
    let mut flat_points = Vec::new();
    let mut basis = Vec::new();
    search.extend(&pool, &mut basis, &mut flat_points, 0);
    search.best
}

struct Search {
    best: Flat,
    cap: u32,
}

impl Search {
    /// Explores extensions of the current flat. `compat` holds exactly
    /// the points x for which span(flat + x) still avoids E; it excludes
    /// the flat's own points. Each target flat is reached along exactly
    /// one chain: basis values ascend, and every basis point is the
    /// minimum of its coset of the flat it extends. Returns true when
    /// the cap is reached and the whole search can stop.
    fn extend(
        &mut self,
        compat: &PointSet,
        basis: &mut Vec<u32>,
        flat_points: &mut Vec<u32>,
        last: u32,
    ) -> bool {
        let k = basis.len() as u32;
        if k > self.best.dim() {
            self.best = Flat::from_values(compat.dim(), basis.iter().copied());
            if self.best.dim() == self.cap {
                return true;
            }
        }
        for x in compat.iter().map(|p| p.value()) {
            if x <= last {
                continue;
            }
            if !flat_points.iter().all(|&f| x < (x ^ f)) {
                continue;
            }
            // Remaining points of any flat reachable from the extended
            // chain all exceed x and sit in the shrunken pool.
            let next = compat.intersection(&compat.translate(Point::new(x).unwrap()));
            let room = (1usize << (k + 1)) + next.count_greater(x);
            if room < 1 << (self.best.dim() + 1) {
                continue;
            }
            basis.push(x);
            let added = flat_points.len();
            flat_points.push(x);
            for i in 0..added {
                flat_points.push(flat_points[i] ^ x);
            }
            let stop = self.extend(&next, basis, flat_points, x);
            flat_points.truncate(added);
            basis.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

/// The partition of a hyperplane H by the triangles through an apex
/// w outside H: a point x of H lands in block i when the pair
/// {x, x + w} contains exactly i ground set elements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ApexPartition {
    pub hyperplane: Flat,
    pub apex: Point,
    pub b0: PointSet,
    pub b1: PointSet,
    pub b2: PointSet,
}

pub fn apex_partition(m: &Matroid, h_dual: Point, w: Point) -> Result<ApexPartition> {
    let n = m.dim();
    if !h_dual.fits(n) {
        return Err(ClawfreeError::PointOutOfRange(h_dual.value(), n));
    }
    if !w.fits(n) {
        return Err(ClawfreeError::PointOutOfRange(w.value(), n));
    }
    if dot(w.value(), h_dual.value()) == 0 {
        return Err(ClawfreeError::ApexInHyperplane(w.value()));
    }
    let hyperplane = hyperplane_from_dual(n, h_dual);
    let h_points = hyperplane.to_point_set();
    let in_e = m.ground().intersection(&h_points);
    let partner_in_e = m.ground().translate(w).intersection(&h_points);
    let b2 = in_e.intersection(&partner_in_e);
    let b1 = in_e.symmetric_difference(&partner_in_e);
    let b0 = h_points.difference(&b1).difference(&b2);
    Ok(ApexPartition {
        hyperplane,
        apex: w,
        b0,
        b1,
        b2,
    })
}

/// Outcome of checking which apex block is an affine geometry in the
/// hyperplane. At most one block can be: two disjoint sets of size
/// 2^(n-2) cannot both fit in a hyperplane alongside anything else.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ApexBlockAffinity {
    /// B1 or B2 is empty, so there is nothing to decide.
    Vacuous,
    B1Affine,
    B2Affine,
    /// Neither block is affine while both are nonempty. Unreachable
    /// when the preconditions genuinely hold.
    Violated,
}

/// Checks that one of the nonempty apex blocks B1, B2 is an affine
/// geometry spanning the hyperplane. Preconditions (reported as errors):
/// the matroid is full-rank with no claw or Fano plane, and the apex
/// lies outside both the ground set and the hyperplane.
pub fn check_technical_lemma(m: &Matroid, w: Point, h_dual: Point) -> Result<ApexBlockAffinity> {
    if !m.is_full_rank() {
        return Err(ClawfreeError::InvalidParameter(
            "apex block affinity requires a full-rank matroid".into(),
        ));
    }
    if m.contains(w) {
        return Err(ClawfreeError::ApexInGround(w.value()));
    }
    if !is_claw_fano_free(m) {
        return Err(ClawfreeError::InvalidParameter(
            "apex block affinity requires a claw-free and Fano-free matroid".into(),
        ));
    }
    let parts = apex_partition(m, h_dual, w)?;
    if parts.b1.is_empty() || parts.b2.is_empty() {
        return Ok(ApexBlockAffinity::Vacuous);
    }
    let affine = |block: &PointSet| {
        let sub = Matroid::from_point_set(block.clone()).restrict(&parts.hyperplane);
        recognize_bose_burton(&sub) == Some(1)
    };
    let b1 = affine(&parts.b1);
    let b2 = affine(&parts.b2);
    debug_assert!(!(b1 && b2));
    if b1 {
        Ok(ApexBlockAffinity::B1Affine)
    } else if b2 {
        Ok(ApexBlockAffinity::B2Affine)
    } else {
        Ok(ApexBlockAffinity::Violated)
    }
}

/// Reference computation: scan all flats by descending dimension.
#[cfg(test)]
fn chi_by_flat_scan(m: &Matroid) -> u32 {
    let n = m.dim();
    for d in (1..=n).rev() {
        if flats(n, d).any(|f| f.count_common(m.ground()) == 0) {
            return n - d;
        }
    }
    n
}
