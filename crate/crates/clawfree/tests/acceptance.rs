//! Acceptance gate: one test per shipped guarantee, each printing a
//! single pass or fail line. Thresholds, sample sizes, and seeds are
//! pinned here. Run
//! `cargo test -p clawfree --test acceptance -- --nocapture`
//! to see the line per check even on success.

use clawfree::census::{census, CensusFilter};
use clawfree::critical::{check_technical_lemma, critical_number, ApexBlockAffinity};
use clawfree::gf2::{flat_count, flats, hyperplane_from_dual, Flat, Point};
use clawfree::matroid::{
    ag_circ, bose_burton, doubling, fano, independent, k5, projective_geometry, semidoubling,
    twist_doubling, Matroid,
};
use clawfree::recognize::{
    affine_by_four_circuits, has_induced, is_claw_fano_free, is_isomorphic, is_k_even,
    is_k_even_all_dims, recognize_affine_span, ViolationKind,
};
use clawfree::structure::{
    check_k5_lemma, check_universality, chibound_witness, decompose_claw_fano_free,
    gsfalse_family, Decomposition, EmbeddingVerdict,
};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use std::collections::BTreeSet;
use std::time::Instant;

fn pt(v: u32) -> Point {
    Point::new(v).expect("nonzero point value")
}

fn mask_matroid(dim: u32, mask: u64) -> Matroid {
    let points = (1u32..1 << dim)
        .filter(|v| mask >> (v - 1) & 1 == 1)
        .map(pt);
    Matroid::new(dim, points)
}

fn random_matroid(dim: u32, rng: &mut ChaCha8Rng) -> Matroid {
    mask_matroid(dim, rng.next_u64())
}

/// Quarter-density masks hit the claw-free regime far more often than
/// uniform ones, so samples cover both answers of the recognizers.
fn sparse_matroid(dim: u32, rng: &mut ChaCha8Rng) -> Matroid {
    mask_matroid(dim, rng.next_u64() & rng.next_u64())
}

struct Gate {
    name: &'static str,
    checks: u64,
    failures: Vec<String>,
}

impl Gate {
    fn new(name: &'static str) -> Gate {
        Gate {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    fn conclude(self) {
        if self.failures.is_empty() {
            println!("{}: pass ({} checks)", self.name, self.checks);
        } else {
            println!(
                "{}: FAIL ({} of {} checks)",
                self.name,
                self.failures.len(),
                self.checks
            );
            for f in self.failures.iter().take(8) {
                println!("  {f}");
            }
            panic!("{} failed", self.name);
        }
    }
}

fn three_even_filter() -> CensusFilter {
    CensusFilter {
        three_even: true,
        ..CensusFilter::default()
    }
}

fn has_claw_plane(m: &Matroid) -> bool {
    flats(m.dim(), 3).any(|f| f.count_common(m.ground()) == 3 && m.restrict(&f).rank() == 3)
}

fn has_fano_plane(m: &Matroid) -> bool {
    flats(m.dim(), 3).any(|f| f.count_common(m.ground()) == 7)
}

#[test]
fn t01_chi_ground_truths() {
    let mut g = Gate::new("01 chi ground truths");
    for t in 1..=6 {
        let chi = critical_number(&projective_geometry(t)).chi;
        g.check(chi == t, || format!("chi(pg({t})) = {chi}, wanted {t}"));
    }
    for n in 1..=6 {
        for k in 0..=n {
            let chi = critical_number(&bose_burton(n, k)).chi;
            g.check(chi == k, || format!("chi(bb({n},{k})) = {chi}, wanted {k}"));
        }
    }
    for t in 3..=6 {
        let chi = critical_number(&ag_circ(t)).chi;
        g.check(chi == 2, || format!("chi(ag_circ({t})) = {chi}, wanted 2"));
    }
    let chi = critical_number(&k5()).chi;
    g.check(chi == 3, || format!("chi(k5) = {chi}, wanted 3"));
    g.conclude();
}

fn check_doubling(g: &mut Gate, m: &Matroid) {
    let d = doubling(m).expect("one dimension of headroom");
    let before = critical_number(m).chi;
    let after = critical_number(&d).chi;
    g.check(before == after, || {
        format!("chi changed from {before} to {after} under doubling of {m}")
    });
    if !has_claw_plane(m) {
        g.check(!has_claw_plane(&d), || {
            format!("doubling introduced a claw into {m}")
        });
    }
    if !has_fano_plane(m) {
        g.check(!has_fano_plane(&d), || {
            format!("doubling introduced a fano plane into {m}")
        });
    }
    g.check(is_claw_fano_free(m) == is_claw_fano_free(&d), || {
        format!("freeness flipped under doubling of {m}")
    });
}

#[test]
fn t02_doubling_preserves_chi_and_freeness() {
    let mut g = Gate::new("02 doubling invariance");
    for mask in 0..1u64 << 15 {
        check_doubling(&mut g, &mask_matroid(4, mask));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10_000 {
        let m = random_matroid(6, &mut rng);
        check_doubling(&mut g, &m);
    }
    g.conclude();
}

#[test]
fn t03_evenness_definitions_agree() {
    let mut g = Gate::new("03 evenness definitions");
    for dim in 3..=4 {
        for mask in 0..1u64 << ((1u32 << dim) - 1) {
            let m = mask_matroid(dim, mask);
            g.check(is_k_even(&m, 3) == is_k_even_all_dims(&m, 3), || {
                format!("evenness oracles disagree on {m}")
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1_000 {
        let m = random_matroid(5, &mut rng);
        g.check(is_k_even(&m, 3) == is_k_even_all_dims(&m, 3), || {
            format!("evenness oracles disagree on {m}")
        });
    }
    g.conclude();
}

#[test]
fn t04_twist_membership_iff() {
    let mut g = Gate::new("04 twist membership iff");
    let bases: Vec<Matroid> = (0..1u64 << 7)
        .map(|mask| mask_matroid(3, mask))
        .filter(|m| is_k_even(m, 3))
        .collect();
    g.check(bases.len() == 64, || {
        format!("{} three-even dim-3 bases, wanted 64", bases.len())
    });
    for base in &bases {
        for mask in 0..1u64 << 7 {
            let twister = mask_matroid(3, mask);
            let twisted = twist_doubling(base, &twister).expect("fits in one more dimension");
            g.check(
                is_k_even(&twisted, 3) == is_k_even(&twister, 2),
                || format!("twist evenness mismatch: base {base}, twister {twister}"),
            );
        }
    }
    g.conclude();
}

#[test]
fn t05_semidoubling_raises_restricted_chi() {
    let mut g = Gate::new("05 semidoubling chi step");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..1_000u64 {
        let dim = 2 + (i % 5) as u32;
        let m = random_matroid(dim, &mut rng);
        let dual = pt(1 + rng.next_u32() % ((1 << dim) - 1));
        let h = hyperplane_from_dual(dim, dual);
        let grown = semidoubling(&m, &h).expect("fits in one more dimension");
        let inside = critical_number(&m.restrict(&h)).chi;
        let after = critical_number(&grown).chi;
        g.check(after == inside + 1, || {
            format!("chi {after} after semidoubling, restriction had {inside}: {m} dual {dual}")
        });
    }
    g.conclude();
}

#[test]
fn t06_witness_family_is_extremal() {
    let mut g = Gate::new("06 chibound witnesses");
    for n in 2..=10 {
        let w = chibound_witness(n);
        let chi = critical_number(&w).chi;
        g.check(chi == n / 2 + 1, || {
            format!("chi(witness({n})) = {chi}, wanted {}", n / 2 + 1)
        });
        g.check(is_k_even(&w, 3), || format!("witness({n}) not three-even"));
    }
    let filter = three_even_filter();
    for n in 1..=6 {
        for r in census(n, &filter).expect("census dimension in range") {
            g.check(r.chi <= n / 2 + 1, || {
                format!("chi {} beats the bound at dim {n}: {}", r.chi, r.matroid)
            });
        }
    }
    g.conclude();
}

#[test]
fn t07_counterexample_family_checks() {
    let mut g = Gate::new("07 gsfalse family");
    for k in 1..=5 {
        let m = gsfalse_family(k);
        g.check(is_k_even(&m, 3), || format!("gsfalse({k}) not three-even"));
        g.check(is_claw_fano_free(&m), || {
            format!("gsfalse({k}) has a claw or fano plane")
        });
        let chi = critical_number(&m).chi;
        g.check(chi >= k, || format!("chi(gsfalse({k})) = {chi}, wanted >= {k}"));
    }
    g.conclude();
}

fn check_chain(g: &mut Gate, m: &Matroid, cd: &clawfree::structure::ChainDecomposition) {
    g.check(cd.verify_against(m), || {
        format!("certificate transport does not replay {m}")
    });
    let replayed = cd.certificate.replay().expect("certificate replays");
    g.check(is_claw_fano_free(&replayed), || {
        format!("replayed certificate not claw/fano-free for {m}")
    });
    g.check(is_isomorphic(&replayed, m), || {
        format!("replay not isomorphic to {m}")
    });
}

#[test]
fn t08_full_rank_classification_exhaustive() {
    let mut g = Gate::new("08 structure classification");
    for dim in 1..=4u32 {
        for mask in 0..1u64 << ((1u32 << dim) - 1) {
            let m = mask_matroid(dim, mask);
            if !m.is_full_rank() {
                continue;
            }
            let free = is_claw_fano_free(&m);
            let report = decompose_claw_fano_free(&m);
            match report.outcome {
                Decomposition::Violation(v) => {
                    g.check(!free, || format!("violation reported on free {m}"));
                    let common = v.flat.count_common(m.ground());
                    let witness_ok = v.flat.dim() == 3
                        && match v.kind {
                            ViolationKind::Claw => {
                                common == 3 && m.restrict(&v.flat).rank() == 3
                            }
                            ViolationKind::Fano => common == 7,
                        };
                    g.check(witness_ok, || {
                        format!("witness plane does not exhibit {} in {m}", v.kind)
                    });
                }
                Decomposition::EvenPlaneChain(cd) => {
                    g.check(free, || format!("even chain issued for non-free {m}"));
                    check_chain(&mut g, &m, &cd);
                }
                Decomposition::AgCircChain { t, decomposition } => {
                    g.check(free, || format!("circled chain issued for non-free {m}"));
                    g.check(t >= 3, || format!("circled base of dimension {t} for {m}"));
                    check_chain(&mut g, &m, &decomposition);
                }
            }
        }
    }
    g.conclude();
}

#[test]
fn t09_k5_free_implies_chi_two() {
    let mut g = Gate::new("09 k5-free chi bound");
    let pattern = k5();
    for dim in 1..=4u32 {
        for mask in 0..1u64 << ((1u32 << dim) - 1) {
            let m = mask_matroid(dim, mask);
            if !m.is_full_rank() || !is_claw_fano_free(&m) || has_induced(&m, &pattern) {
                continue;
            }
            let chi = critical_number(&m).chi;
            g.check(chi <= 2, || format!("chi {chi} without an induced k5: {m}"));
        }
    }
    let filter = three_even_filter();
    for n in 3..=6 {
        for r in census(n, &filter).expect("census dimension in range") {
            if !r.full_rank || !r.claw_fano_free || has_induced(&r.matroid, &pattern) {
                continue;
            }
            g.check(r.chi <= 2, || {
                format!("chi {} without an induced k5 at dim {n}: {}", r.chi, r.matroid)
            });
        }
    }
    g.conclude();
}

#[test]
fn t10_high_chi_forces_k5() {
    let mut g = Gate::new("10 chi three forces k5");
    let pattern = k5();
    let filter = three_even_filter();
    for n in 3..=6 {
        for r in census(n, &filter).expect("census dimension in range") {
            let verdict = check_k5_lemma(&r.matroid);
            if r.chi >= 3 {
                match verdict {
                    EmbeddingVerdict::Embedded(e) => {
                        g.check(e.verify(&pattern, &r.matroid), || {
                            format!("embedding fails verification in {}", r.matroid)
                        });
                    }
                    other => g.check(false, || {
                        format!("{other:?} with chi {} at dim {n}: {}", r.chi, r.matroid)
                    }),
                }
            } else {
                g.check(verdict == EmbeddingVerdict::HypothesisNotMet, || {
                    format!("hypothesis misjudged for {}", r.matroid)
                });
            }
        }
    }
    g.conclude();
}

#[test]
fn t11_embedding_threshold_sampled() {
    let mut g = Gate::new("11 universality threshold");
    let filter = three_even_filter();
    for dim in 1..=2u32 {
        // The witness at 2(dim + 4) - 2 has critical number exactly
        // dim + 4, the smallest value meeting the hypothesis.
        let host = chibound_witness(2 * (dim + 4) - 2);
        let host_chi = critical_number(&host).chi;
        g.check(host_chi == dim + 4, || {
            format!("host chi {host_chi} at pattern dim {dim}, wanted {}", dim + 4)
        });
        for r in census(dim, &filter).expect("census dimension in range") {
            let started = Instant::now();
            let verdict = check_universality(&host, &r.matroid, None);
            let elapsed = started.elapsed();
            match verdict {
                EmbeddingVerdict::Embedded(e) => {
                    g.check(e.verify(&r.matroid, &host), || {
                        format!("embedding fails verification for pattern {}", r.matroid)
                    });
                }
                other => g.check(false, || {
                    format!("{other:?} for pattern {}", r.matroid)
                }),
            }
            g.check(elapsed.as_secs() < 60, || {
                format!("search took {elapsed:?} for pattern {}", r.matroid)
            });
        }
    }
    g.conclude();
}

#[test]
fn t12_apex_blocks_affine() {
    let mut g = Gate::new("12 apex block affinity");
    for mask in 0..1u64 << 15 {
        let m = mask_matroid(4, mask);
        if !m.is_full_rank() || !is_claw_fano_free(&m) {
            continue;
        }
        for w in 1u32..16 {
            if m.contains(pt(w)) {
                continue;
            }
            for u in 1u32..16 {
                if (w & u).count_ones() & 1 == 0 {
                    continue;
                }
                let verdict =
                    check_technical_lemma(&m, pt(w), pt(u)).expect("preconditions were checked");
                g.check(verdict != ApexBlockAffinity::Violated, || {
                    format!("apex {w} dual {u} leaves no affine block in {m}")
                });
            }
        }
    }
    g.conclude();
}

fn check_freeness_oracles(g: &mut Gate, m: &Matroid, claw: &Matroid, fano_plane: &Matroid) {
    let by_scan = is_claw_fano_free(m);
    let by_search = !has_induced(m, claw) && !has_induced(m, fano_plane);
    g.check(by_scan == by_search, || {
        format!("plane scan and embedding search disagree on {m}")
    });
}

fn check_affine_oracles(g: &mut Gate, m: &Matroid) {
    g.check(
        recognize_affine_span(m) == affine_by_four_circuits(m),
        || format!("affine recognizers disagree on {m}"),
    );
}

#[test]
fn t13_oracle_equivalences() {
    let mut g = Gate::new("13 oracle equivalences");
    let claw = independent(3);
    let fano_plane = fano();

    for dim in 1..=3u32 {
        for mask in 0..1u64 << ((1u32 << dim) - 1) {
            let m = mask_matroid(dim, mask);
            check_freeness_oracles(&mut g, &m, &claw, &fano_plane);
            check_affine_oracles(&mut g, &m);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for dim in 4..=5u32 {
        for _ in 0..150 {
            let m = random_matroid(dim, &mut rng);
            check_freeness_oracles(&mut g, &m, &claw, &fano_plane);
            check_affine_oracles(&mut g, &m);
        }
        for _ in 0..150 {
            let m = sparse_matroid(dim, &mut rng);
            check_freeness_oracles(&mut g, &m, &claw, &fano_plane);
            check_affine_oracles(&mut g, &m);
        }
    }

    // Affine positives and their one-point depletions, which random
    // masks almost never produce.
    for n in 2..=5u32 {
        for u in 1..1u32 << n {
            let h = hyperplane_from_dual(n, pt(u));
            let coset = Matroid::from_point_set(h.to_point_set().complement());
            check_affine_oracles(&mut g, &coset);
            let mut depleted = coset.ground().clone();
            depleted.remove(depleted.first().expect("coset is nonempty"));
            check_affine_oracles(&mut g, &Matroid::from_point_set(depleted));
        }
    }

    for n in 1..=4u32 {
        let mut by_dim: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); (n + 1) as usize];
        let points: Vec<Point> = (1..1u32 << n).map(pt).collect();
        for mask in 0..1u64 << points.len() {
            let chosen = points
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| *p);
            let f = Flat::from_points(n, chosen);
            by_dim[f.dim() as usize]
                .insert(f.basis_points().iter().map(|p| p.value()).collect());
        }
        for d in 0..=n {
            let brute = &by_dim[d as usize];
            g.check(flat_count(n, d) == brute.len() as u128, || {
                format!(
                    "flat_count({n},{d}) = {}, brute force found {}",
                    flat_count(n, d),
                    brute.len()
                )
            });
            let enumerated: BTreeSet<Vec<u32>> = flats(n, d)
                .map(|f| f.basis_points().iter().map(|p| p.value()).collect())
                .collect();
            g.check(&enumerated == brute, || {
                format!("flats({n},{d}) misses or repeats a flat")
            });
        }
    }
    g.conclude();
}
