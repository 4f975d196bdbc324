use genus_cantor::geometry::{delta_metric, delta_point_to_segment, Aabb, Point3, Similarity};
use genus_cantor::ifs::Address;
use genus_cantor::maps::{degree, iota, iota1, iota2, iota3, winding_map, Cylindrical};
use genus_cantor::qfield::QSqrt2;
use genus_cantor::sequences::{folding_sequence, meets_density_bound, widths_and_prefix_sums, FoldingSequence};
use genus_cantor::verify::near_pairs;
use num_bigint::BigUint;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

fn coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn point() -> impl Strategy<Value = Point3> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

fn small_q() -> impl Strategy<Value = QSqrt2> {
    (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
        .prop_map(|(a, b, c, d)| QSqrt2::frac(a, b) + QSqrt2::frac_sqrt2(c, d))
}

fn rotation(k: u8) -> [[f64; 3]; 3] {
    let (c, s) = ((k as f64).cos(), (k as f64).sin());
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn folding_sequences_are_palindromes(n in 1usize..400) {
        let a = folding_sequence(n).unwrap();
        prop_assert_eq!(a.len(), n);
        prop_assert!(a.iter().all(|&x| x == 1 || x == 2));
        let rev: Vec<u8> = a.iter().rev().copied().collect();
        prop_assert_eq!(&a, &rev);
    }

    #[test]
    fn prefix_sums_accumulate_widths(n in 1usize..200) {
        let a = folding_sequence(n).unwrap();
        let (c, pre) = widths_and_prefix_sums(&a).unwrap();
        prop_assert_eq!(pre[0], 0);
        for i in 0..n {
            prop_assert_eq!(pre[i + 1] - pre[i], c[i]);
            prop_assert_eq!(c[i], if a[i] == 1 { 1 } else { 3 });
        }
    }

    #[test]
    fn admissible_density_is_minimal(g in 1usize..40) {
        let s = FoldingSequence::new(g).unwrap();
        let root = (s.n as f64).sqrt().round() as u64;
        prop_assert_eq!(root * root, s.n);
        prop_assert_eq!(root % 2, 1);
        prop_assert!(meets_density_bound(s.n, s.width()));
        prop_assert!(!meets_density_bound((root - 2) * (root - 2), s.width()));
    }

    #[test]
    fn density_bound_is_monotone(n in 1u64..100_000, d in 0u64..1000, cg in 1u64..300) {
        if meets_density_bound(n, cg) {
            prop_assert!(meets_density_bound(n + d, cg));
        }
    }

    #[test]
    fn qsqrt2_field_identities(x in small_q(), y in small_q()) {
        let s = x.clone() + y.clone();
        prop_assert!((s.to_f64() - (x.to_f64() + y.to_f64())).abs() < 1e-9);
        if let Some(yi) = y.inv() {
            prop_assert_eq!(x.clone() * y.clone() * yi, x.clone());
        }
        let d = x.to_f64() - y.to_f64();
        if d.abs() > 1e-9 {
            prop_assert_eq!((x.clone() - y.clone()).signum(), if d > 0.0 { 1 } else { -1 });
        }
        prop_assert_eq!(x.clone() * x.conj(), QSqrt2::from_rational(x.norm()));
    }

    #[test]
    fn delta_is_a_metric(p in point(), q in point(), r in point()) {
        let d = delta_metric(p, q);
        prop_assert_eq!(d, delta_metric(q, p));
        prop_assert!(delta_metric(p, r) <= d + delta_metric(q, r) + 1e-12);
        prop_assert!(d <= p.dist(q) + 1e-12);
        prop_assert!(p.dist(q) <= std::f64::consts::SQRT_2 * d + 1e-12);
    }

    #[test]
    fn segment_delta_matches_dense_sampling(p in point(), a in point(), b in point()) {
        let exact = delta_point_to_segment(p, a, b);
        let sampled = (0..=2000)
            .map(|i| delta_metric(p, a.lerp(b, i as f64 / 2000.0)))
            .fold(f64::INFINITY, f64::min);
        prop_assert!(exact <= sampled + 1e-12);
        prop_assert!(sampled - exact <= a.dist(b) / 2000.0 + 1e-9);
    }

    #[test]
    fn similarity_inverse_round_trips(s in 0.01..5.0f64, k in 0u8..7, t in point(), p in point()) {
        let f = Similarity::new(s, rotation(k), t).unwrap();
        let q = f.inverse().apply(f.apply(p));
        prop_assert!(q.dist(p) < 1e-9);
        let g = f.compose(&f);
        prop_assert!((g.scale() - s * s).abs() < 1e-12);
        prop_assert!(g.apply(p).dist(f.apply(f.apply(p))) < 1e-9);
    }

    #[test]
    fn foldings_are_isometries_of_finite_order(k in 1usize..12, p in point(), q in point()) {
        let quarter = iota3(k).unwrap();
        prop_assert!(!quarter.power(2).is_identity() && quarter.power(4).is_identity());
        for (m, order) in [(iota1(k).unwrap(), 2), (iota2(k).unwrap(), 2), (quarter, 4), (iota(), 2)] {
            prop_assert!(m.power(order).is_identity());
            let (mp, mq) = (m.apply_f64(p), m.apply_f64(q));
            prop_assert!((mp.dist(mq) - p.dist(q)).abs() < 1e-9);
            prop_assert!((delta_metric(mp, mq) - delta_metric(p, q)).abs() < 1e-9);
        }
    }

    #[test]
    fn winding_multiplies_angle(n in 1u64..5000, theta in -20.0..20.0f64, r in 0.0..3.0f64, z in coord()) {
        let w = winding_map(Cylindrical { r, theta, z }, n);
        prop_assert_eq!((w.r, w.z), (r, z));
        prop_assert!((0.0..TAU).contains(&w.theta));
        let again = winding_map(Cylindrical { r, theta: theta + PI / n as f64, z }, n);
        let diff = (again.theta - w.theta).rem_euclid(TAU);
        prop_assert!(diff.min(TAU - diff) < 1e-6);
        let expect = (2.0 * n as f64 * theta).rem_euclid(TAU);
        let err = (expect - w.theta).rem_euclid(TAU);
        prop_assert!(err.min(TAU - err) < 1e-9 * n as f64 * (1.0 + theta.abs()));
    }

    #[test]
    fn degree_doubles_with_genus_scale(e in 0u32..8, n in 1u64..10_000) {
        let g = 1usize << e;
        prop_assert_eq!(degree(2 * g, n).unwrap(), degree(g, n).unwrap() * BigUint::from(2u32));
        prop_assert_eq!(degree(g + 1, n).unwrap(), degree(2 * g, n).unwrap());
    }

    #[test]
    fn sweep_matches_brute_force(
        boxes in prop::collection::vec((point(), 0.0..2.0f64, 0.0..2.0f64, 0.0..2.0f64), 0..60),
        pad in 0.0..1.5f64,
    ) {
        let boxes: Vec<Aabb> = boxes
            .into_iter()
            .map(|(p, a, b, c)| Aabb { min: p, max: p + Point3::new(a, b, c) })
            .collect();
        let mut brute = Vec::new();
        for a in 0..boxes.len() {
            for b in a + 1..boxes.len() {
                if boxes[a].distance(&boxes[b]) <= pad {
                    brute.push((a, b));
                }
            }
        }
        prop_assert_eq!(near_pairs(&boxes, pad), brute);
    }

    #[test]
    fn shift_drops_the_first_letter(
        prefix in prop::collection::vec(1usize..9, 0..6),
        tail in prop::collection::vec(1usize..9, 1..4),
        depth in 1usize..20,
    ) {
        let a = Address::new(prefix, tail).unwrap();
        let s = a.shift();
        for k in 0..depth {
            prop_assert_eq!(s.letter(k), a.letter(k + 1));
        }
    }
}
