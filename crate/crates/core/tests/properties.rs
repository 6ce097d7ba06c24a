use apollonian::coxeter::{cos2, pair_relation};
use apollonian::lorentz::{center, dot, euclid_dist2, norm2};
use apollonian::packing::build_group;
use apollonian::render::{sphere_to_datum, tangency_residual, EuclideanChart};
use apollonian::LatticeVector;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

fn vector(rho: usize) -> impl Strategy<Value = LatticeVector> {
    prop::collection::vec(-30i64..=30, rho).prop_map(|c| LatticeVector::from_slice(&c))
}

fn rho_and_vectors() -> impl Strategy<Value = (usize, LatticeVector, LatticeVector)> {
    (4usize..=10).prop_flat_map(|rho| (Just(rho), vector(rho), vector(rho)))
}

fn word(gens: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..gens, 0..14)
}

fn rho_and_word() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (4usize..=10).prop_flat_map(|rho| {
        let gens = build_group(rho).unwrap().len();
        (Just(rho), word(gens))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_are_involutive_isometries((rho, x, y) in rho_and_vectors()) {
        let g = build_group(rho).unwrap();
        for gen in &g.generators {
            let (gx, gy) = (gen.apply(&x), gen.apply(&y));
            prop_assert_eq!(dot(&gx, &gy).unwrap(), dot(&x, &y).unwrap());
            prop_assert_eq!(gen.apply(&gx), x.clone());
        }
    }

    #[test]
    fn form_is_symmetric_and_bilinear((_rho, x, y) in rho_and_vectors(), a in -5i64..=5) {
        prop_assert_eq!(dot(&x, &y).unwrap(), dot(&y, &x).unwrap());
        let ax = x.scale(&BigInt::from(a));
        prop_assert_eq!(dot(&ax, &y).unwrap(), dot(&x, &y).unwrap() * a);
    }

    #[test]
    fn orbit_parity_and_curvature((rho, w) in rho_and_word()) {
        let g = build_group(rho).unwrap();
        let er = LatticeVector::e(rho, rho);
        let m = g.apply_word(&w, &er);
        prop_assert_eq!(norm2(&m), BigInt::from(1));
        prop_assert!(dot(&m, &er).unwrap().is_odd());
        prop_assert!(!dot(&m, &LatticeVector::strip_point(rho)).unwrap().is_positive());
    }

    #[test]
    fn relation_is_symmetric_and_scale_free(
        (_rho, x, y) in rho_and_vectors(),
        a in 1i64..=7,
        b in -7i64..=-1,
    ) {
        prop_assume!(norm2(&x).is_positive() && norm2(&y).is_positive());
        prop_assert_eq!(pair_relation(&x, &y).unwrap(), pair_relation(&y, &x).unwrap());
        let (sx, sy) = (x.scale(&BigInt::from(a)), y.scale(&BigInt::from(b)));
        prop_assert_eq!(cos2(&sx, &sy).unwrap(), cos2(&x, &y).unwrap());
    }

    /// Chart distances agree with the exact `euclid_dist2` on sphere
    /// centers of random orbit members.
    #[test]
    fn chart_is_an_isometry((rho, w1) in rho_and_word(), seed in 0usize..1000) {
        let g = build_group(rho).unwrap();
        let e = LatticeVector::strip_point(rho);
        let chart = EuclideanChart::new(&e).unwrap();
        let w2: Vec<usize> = w1.iter().map(|&i| (i + seed) % g.len()).collect();
        let m1 = g.apply_word(&w1, &LatticeVector::e(rho, 1));
        let m2 = g.apply_word(&w2, &LatticeVector::e(rho, 2));
        let (Ok(a), Ok(b)) = (center(&m1, &e), center(&m2, &e)) else {
            return Ok(());
        };
        let exact = euclid_dist2(&a, &b, &e).unwrap().to_f64().unwrap();
        let (pa, pb) = (chart.point(&a).unwrap(), chart.point(&b).unwrap());
        let d2: f64 = pa.iter().zip(&pb).map(|(x, y)| (x - y) * (x - y)).sum();
        prop_assert!((d2 - exact).abs() <= 1e-9 * exact.max(1e-300), "{} vs {}", d2, exact);
    }

    /// Exactly tangent spheres are numerically tangent in the chart.
    #[test]
    fn tangency_survives_the_chart((rho, w) in rho_and_word()) {
        let g = build_group(rho).unwrap();
        let e = LatticeVector::strip_point(rho);
        let chart = EuclideanChart::new(&e).unwrap();
        let members: Vec<LatticeVector> = (1..=rho).map(|i| g.apply_word(&w, &LatticeVector::e(rho, i))).collect();
        let data: Vec<_> = members.iter().map(|m| sphere_to_datum(m, &chart).unwrap()).collect();
        for i in 0..rho {
            for j in i + 1..rho {
                if let Some(r) = tangency_residual(&data[i].shape, &data[j].shape) {
                    prop_assert!(r < 1e-9, "{} {} residual {}", members[i], members[j], r);
                }
            }
        }
    }
}
