use std::collections::BTreeSet;

use apollonian::lorentz::{dot, norm2};
use apollonian::packing::*;
use apollonian::LatticeVector;
use num_bigint::BigInt;
use num_rational::BigRational;

fn lv(c: &[i64]) -> LatticeVector {
    LatticeVector::from_slice(c)
}

/// Curvatures of the strip gasket seeded by `(0, 0, 2, 2)`, from Descartes
/// swaps `k_d ↦ 2(k_a + k_b + k_c) − k_d` that strictly increase the
/// swapped entry, never undoing the previous swap.
fn descartes_oracle(kmax: i64) -> Vec<i64> {
    fn walk(q: [i64; 4], last: Option<usize>, kmax: i64, out: &mut Vec<i64>) {
        for i in 0..4 {
            if Some(i) == last {
                continue;
            }
            let others: i64 = (0..4).filter(|&j| j != i).map(|j| q[j]).sum();
            let k = 2 * others - q[i];
            if k > q[i] && k <= kmax {
                out.push(k);
                let mut next = q;
                next[i] = k;
                walk(next, Some(i), kmax, out);
            }
        }
    }
    let mut out: Vec<i64> = [0, 0, 2, 2].into_iter().filter(|&k| k <= kmax).collect();
    walk([0, 0, 2, 2], None, kmax, &mut out);
    out.sort();
    out
}

#[test]
fn oracle_sanity() {
    assert_eq!(descartes_oracle(10), [0, 0, 2, 2, 8, 8]);
}

#[test]
fn rho4_matches_descartes_oracle() {
    for kmax in [0, 10, 40, 60] {
        let out = enumerate(4, &EnumerateOptions::new(kmax)).unwrap();
        assert!(out.stabilized && !out.truncated);
        assert_eq!(out.curvatures(), descartes_oracle(kmax), "kmax {kmax}");
    }
}

#[test]
fn property_a_small() {
    for (rho, kmax) in [(4, 40), (5, 10), (6, 8)] {
        let out = enumerate(rho, &EnumerateOptions::new(kmax)).unwrap();
        let v: Vec<LatticeVector> = out.records.iter().map(|r| r.vector.clone()).collect();
        let report = verify_packing(&v, &LatticeVector::strip_point(rho)).unwrap();
        assert!(report.passed, "{:?}", report.first_failure);
        assert!(report.violations.is_empty());
        assert!(report.tangent_pairs > 0);
    }
}

#[test]
fn base_planes_are_tangent() {
    let rho = 7;
    let p = dot(&LatticeVector::e(rho, rho), &LatticeVector::e(rho, rho - 1)).unwrap();
    assert_eq!(p, BigInt::from(-1));
}

/// After stabilization, every generator image of a retained record is
/// retained, out of the curvature range, or beyond the final search
/// margin.
#[test]
fn orbit_closure() {
    for (rho, kmax) in [(4, 30), (5, 10), (6, 6)] {
        let mut opts = EnumerateOptions::new(kmax);
        opts.window = Window::Explored;
        let out = enumerate(rho, &opts).unwrap();
        assert_eq!(out.bound_kind, BoundKind::CellMargin);
        let set: BTreeSet<&LatticeVector> = out.records.iter().map(|r| &r.vector).collect();
        let g = build_group(rho).unwrap();
        let e = LatticeVector::strip_point(rho);
        let margin = BigRational::from_integer(out.bound.into());
        for r in &out.records {
            for gen in &g.generators {
                let w = gen.apply(&r.vector);
                let k = -dot(&w, &e).unwrap();
                let in_range = k >= BigInt::from(0) && k <= BigInt::from(kmax);
                let beyond = cell_excess(&w).unwrap().is_some_and(|x| x > margin);
                assert!(set.contains(&w) || !in_range || beyond, "rho {rho}: {w}");
            }
        }
    }
}

#[test]
fn descend_rho4_example() {
    let g = build_group(4).unwrap();
    let m = lv(&[2, -1, 2, 2]);
    let d = descend(&g, &m).unwrap();
    let e = LatticeVector::strip_point(4);
    assert_eq!(dot(&d.terminal, &e).unwrap(), BigInt::from(0));
    // The word reproduces the terminal, and m belongs to the enumerated orbit.
    assert_eq!(g.apply_word(&d.word, &m), d.terminal);
    let mut opts = EnumerateOptions::new(10);
    opts.window = Window::Explored;
    let orbit: BTreeSet<LatticeVector> = enumerate(4, &opts).unwrap().records.into_iter().map(|r| r.vector).collect();
    assert!(orbit.contains(&m));
}

#[test]
fn descent_reaches_curvature_zero() {
    for rho in [4, 5, 6, 7] {
        let g = build_group(rho).unwrap();
        let e = LatticeVector::strip_point(rho);
        for r in enumerate(rho, &EnumerateOptions::new(8)).unwrap().records {
            let d = descend(&g, &r.vector).unwrap();
            assert_eq!(dot(&d.terminal, &e).unwrap(), BigInt::from(0), "rho {rho}: {}", r.vector);
        }
    }
}

#[test]
fn clusters_at_rho9() {
    let g = build_group(9).unwrap();
    let out = enumerate(9, &EnumerateOptions::new(3)).unwrap();
    assert!(!out.records.is_empty());
    for r in &out.records {
        let c = find_cluster(&g, &r.vector).unwrap();
        assert_eq!(c.members.len(), 9);
        assert!(c.contains(&r.vector) && c.is_mutually_tangent());
    }
    let base = find_cluster(&g, &LatticeVector::e(9, 9)).unwrap();
    assert_eq!(base.members, base_cluster(9));
}

#[test]
fn descartes_on_random_clusters() {
    for rho in 4..=10 {
        let g = build_group(rho).unwrap();
        let e = LatticeVector::strip_point(rho);
        for c in random_clusters(&g, 10, 8, 11) {
            let r = descartes_check(&c, &e).unwrap();
            assert!(r.passed, "rho {rho}: {:?}", r.curvatures);
        }
    }
}

#[test]
fn every_record_is_a_unit_vector_in_e1() {
    let out = enumerate(9, &EnumerateOptions::new(5)).unwrap();
    let d = LatticeVector::ones(9);
    for r in &out.records {
        assert_eq!(norm2(&r.vector), BigInt::from(1));
        assert!(dot(&r.vector, &d).unwrap() < BigInt::from(0));
        assert!((0..=5).contains(&r.curvature));
    }
}

#[test]
fn csv_has_one_row_per_record() {
    let out = enumerate(4, &EnumerateOptions::new(10)).unwrap();
    let csv = out.to_csv();
    assert_eq!(csv.lines().count(), out.records.len() + 1);
    assert!(csv.starts_with("curvature,vector,word_length"));
}

#[test]
fn custom_perspective() {
    // The tangency point of e_1 and e_2 as the point at infinity.
    let e = &LatticeVector::e(4, 1) + &LatticeVector::e(4, 2);
    let mut opts = EnumerateOptions::new(6);
    opts.perspective = Some(e.clone());
    let out = enumerate(4, &opts).unwrap();
    assert_eq!(out.bound_kind, BoundKind::Height);
    let ks = out.curvatures();
    // e_1 and e_2 become the two parallel lines.
    assert_eq!(ks.iter().filter(|&&k| k == 0).count(), 2);
    assert!(ks.iter().all(|&k| (0..=6).contains(&k)));
    let mut bad = opts.clone();
    bad.perspective = Some(lv(&[1, 0, 0, 0]));
    assert!(enumerate(4, &bad).is_err());
}
