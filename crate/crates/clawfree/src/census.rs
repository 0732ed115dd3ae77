//! Isomorphism class census. Small dimensions enumerate every ground
//! set and partition them into orbits of the general linear group;
//! dimensions five through seven enumerate only the three-even classes,
//! which is feasible because each arises by doubling or semidoubling
//! from a three-even class one dimension down.

use crate::critical::critical_number;
use crate::gf2::{hyperplane_from_dual, pt};
use crate::matroid::{doubling, semidoubling, Matroid};
use crate::recognize::{
    invariant_signature, is_claw_fano_free, is_isomorphic, is_k_even, Signature,
};
use crate::{ClawfreeError, Result};
use std::collections::HashMap;

/// Largest dimension the exact census enumerates directly.
pub const EXACT_CENSUS_MAX: u32 = 4;
/// Largest dimension the constructive three-even census reaches.
pub const E3_CENSUS_MAX: u32 = 7;

/// One isomorphism class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CensusRecord {
    /// Canonical representative: the ground set minimizing its bit mask
    /// over the group when known exactly, otherwise the smallest mask
    /// the construction produced.
    pub matroid: Matroid,
    /// Number of distinct ground sets in the class; only the exact
    /// census computes it.
    pub orbit_size: Option<u64>,
    pub full_rank: bool,
    pub three_even: bool,
    pub claw_fano_free: bool,
    pub chi: u32,
}

/// Class filters. A set flag keeps only classes with that property.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct CensusFilter {
    pub full_rank: bool,
    pub three_even: bool,
    pub claw_fano_free: bool,
}

impl CensusFilter {
    pub fn admits(&self, r: &CensusRecord) -> bool {
        (!self.full_rank || r.full_rank)
            && (!self.three_even || r.three_even)
            && (!self.claw_fano_free || r.claw_fano_free)
    }
}

fn record(m: Matroid, orbit_size: Option<u64>) -> CensusRecord {
    let chi = critical_number(&m).chi;
    CensusRecord {
        full_rank: m.is_full_rank(),
        three_even: is_k_even(&m, 3),
        claw_fano_free: is_claw_fano_free(&m),
        chi,
        orbit_size,
        matroid: m,
    }
}

/// Lists the isomorphism classes of dimension n matching the filter.
/// Dimensions up to four enumerate everything; five through seven
/// require the three-even filter. Output is sorted by ground set size,
/// then by representative mask.
pub fn census(n: u32, filter: &CensusFilter) -> Result<Vec<CensusRecord>> {
    let mut records = if n <= EXACT_CENSUS_MAX {
        exact_census(n)
    } else if n <= E3_CENSUS_MAX && filter.three_even {
        e3_census(n)
    } else {
        return Err(ClawfreeError::CensusScale(n));
    };
    records.retain(|r| filter.admits(r));
    records.sort_by_key(|r| (r.matroid.ground().len(), ground_mask(&r.matroid)));
    Ok(records)
}

fn ground_mask(m: &Matroid) -> u128 {
    m.ground()
        .iter()
        .fold(0u128, |acc, p| acc | 1 << (p.value() - 1))
}

/// Point maps of the elementary matrices adding coordinate j into
/// coordinate i. These generate the whole group, so closing a ground
/// set under them walks its full orbit.
fn elementary_point_maps(n: u32) -> Vec<impl Fn(u32) -> u32> {
    let mut maps = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                maps.push(move |v: u32| v ^ ((v >> j & 1) << i));
            }
        }
    }
    maps
}

fn apply_to_mask(f: &impl Fn(u32) -> u32, mask: u64, num_points: u32) -> u64 {
    let mut out = 0u64;
    for v in 1..=num_points {
        if mask >> (v - 1) & 1 == 1 {
            out |= 1 << (f(v) - 1);
        }
    }
    out
}

fn mask_matroid(n: u32, mask: u64) -> Matroid {
    Matroid::new(
        n,
        (1..1u32 << n).filter(|&v| mask >> (v - 1) & 1 == 1).map(pt),
    )
}

fn exact_census(n: u32) -> Vec<CensusRecord> {
    assert!(n <= EXACT_CENSUS_MAX);
    let num_points = (1u32 << n) - 1;
    let maps = elementary_point_maps(n);
    let mut visited = vec![false; 1usize << num_points];
    let mut records = Vec::new();
    for start in 0..1u64 << num_points {
        if visited[start as usize] {
            continue;
        }
        let mut stack = vec![start];
        visited[start as usize] = true;
        let mut size = 0u64;
        let mut min_mask = start;
        while let Some(mask) = stack.pop() {
            size += 1;
            min_mask = min_mask.min(mask);
            for f in &maps {
                let img = apply_to_mask(f, mask, num_points);
                if !visited[img as usize] {
                    visited[img as usize] = true;
                    stack.push(img);
                }
            }
        }
        records.push(record(mask_matroid(n, min_mask), Some(size)));
    }
    records
}

/// Deduplicating class store for dimensions past the exact range:
/// cheap invariants bucket candidates, explicit isomorphism tests
/// settle collisions.
struct ClassStore {
    buckets: HashMap<Signature, Vec<Matroid>>,
}

impl ClassStore {
    fn new() -> ClassStore {
        ClassStore {
            buckets: HashMap::new(),
        }
    }

    fn insert(&mut self, m: Matroid) {
        let sig = invariant_signature(&m);
        let bucket = self.buckets.entry(sig).or_default();
        if let Some(seen) = bucket.iter_mut().find(|s| is_isomorphic(s, &m)) {
            if ground_mask(&m) < ground_mask(seen) {
                *seen = m;
            }
            return;
        }
        bucket.push(m);
    }

    fn into_classes(self) -> Vec<Matroid> {
        self.buckets.into_values().flatten().collect()
    }
}

/// All three-even classes of dimension 2: evenness is vacuous there, so
/// these are just the four classes of the plane.
fn dim2_classes() -> Vec<Matroid> {
    vec![
        Matroid::empty(2),
        Matroid::new(2, [pt(1)]),
        Matroid::new(2, [pt(1), pt(2)]),
        Matroid::new(2, [pt(1), pt(2), pt(3)]),
    ]
}

/// Grows the complete list of three-even classes one dimension at a
/// time. Every three-even matroid is a twist of its restriction to any
/// hyperplane avoiding a chosen non-element, with a twister that is
/// empty or affine, so doubling and all semidoublings of the classes
/// one dimension down cover everything.
fn e3_census(n: u32) -> Vec<CensusRecord> {
    let mut classes = dim2_classes();
    for d in 2..n {
        let mut store = ClassStore::new();
        for base in &classes {
            store.insert(doubling(base).expect("dimension stays in range"));
            for u in 1..1u32 << d {
                let h = hyperplane_from_dual(d, pt(u));
                store.insert(semidoubling(base, &h).expect("dimension stays in range"));
            }
        }
        classes = store.into_classes();
    }
    classes.into_iter().map(|m| record(m, None)).collect()
}
