use proptest::prelude::*;

use polyrigid::cauchy::{cyclic_changes, dent, sign_vector_from_flex, Sign};
use polyrigid::generate::{random_convex_surface, trial_rng};
use polyrigid::geometry::surface::fixtures::icosahedron;
use polyrigid::io::{fmt_f64, CsvTable, FrameworkFile};
use polyrigid::rigidity::rigidity_rank;
use polyrigid::suspension::theta_prime;
use polyrigid::{EdgeKind, Framework, Motion, Point3, Tolerance};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn point() -> impl Strategy<Value = Point3> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

fn kind() -> impl Strategy<Value = EdgeKind> {
    prop_oneof![Just(EdgeKind::Bar), Just(EdgeKind::Cable), Just(EdgeKind::Strut)]
}

prop_compose! {
    fn framework()(pts in prop::collection::vec(point(), 2..12))
        (edges in prop::collection::vec((0..pts.len(), 0..pts.len(), kind()), 0..30), pts in Just(pts))
        -> Framework {
        let mut seen = std::collections::BTreeSet::new();
        let edges = edges
            .into_iter()
            .filter(|&(i, j, _)| i != j && seen.insert((i.min(j), i.max(j))))
            .collect();
        Framework::new(pts, edges).expect("valid framework")
    }
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Minus), Just(Sign::Zero), Just(Sign::Plus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_bitwise(fw in framework()) {
        let file = FrameworkFile::from_framework(&fw);
        let back = FrameworkFile::from_json_str(&file.to_json_string()).unwrap();
        prop_assert_eq!(&back, &file);
        let again = back.framework(&tol()).unwrap();
        for (p, q) in fw.vertices().iter().zip(again.vertices()) {
            for c in 0..3 {
                prop_assert_eq!(p[c].to_bits(), q[c].to_bits());
            }
        }
        prop_assert_eq!(again.edges(), fw.edges());
    }

    #[test]
    fn csv_values_round_trip(xs in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 1..40)) {
        let mut t = CsvTable::new(["k", "x"]);
        for (k, x) in xs.iter().enumerate() {
            t.push([k.to_string(), fmt_f64(*x)]);
        }
        let back = CsvTable::from_csv_str(&t.to_csv_string()).unwrap();
        let ys = back.column_f64("x").unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn cyclic_changes_are_even(signs in prop::collection::vec(sign(), 0..24)) {
        let c = cyclic_changes(&signs);
        prop_assert_eq!(c % 2, 0);
        let neg: Vec<Sign> = signs.iter().map(|s| s.neg()).collect();
        prop_assert_eq!(cyclic_changes(&neg), c);
        prop_assert!(c <= signs.iter().filter(|&&s| s != Sign::Zero).count());
    }

    #[test]
    fn negated_motion_negates_signs(v in prop::collection::vec(point(), 12)) {
        let ico = icosahedron();
        let m = Motion { velocities: v };
        let a = sign_vector_from_flex(&ico, &m).unwrap();
        let b = sign_vector_from_flex(&ico, &m.scaled(-1.0)).unwrap();
        prop_assert_eq!(b, a.neg());
    }

    #[test]
    fn theta_prime_is_symmetric(z1 in 0.0..1.0f64, z2 in 0.0..1.0f64, r1 in 0.05..3.0f64, r2 in 0.05..3.0f64, th in 0.05..3.09f64) {
        let a = theta_prime(z1, r1, z2, r2, th).unwrap();
        let b = theta_prime(z2, r2, z1, r1, th).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn dent_is_an_involution(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let mut rng = trial_rng(seed, 0);
        let Ok(hull) = random_convex_surface(&mut rng, 10, 1e-6) else { return Ok(()) };
        let e = hull.edges()[pick.index(hull.num_edges())];
        let Ok(d) = dent(&hull, e, &tol()) else { return Ok(()) };
        let back = dent(&d.surface, d.new_edge, &tol()).unwrap();
        prop_assert_eq!(back.surface.canonical_faces(), hull.canonical_faces());
        prop_assert_eq!(back.new_edge, (e.0.min(e.1), e.0.max(e.1)));
    }

    #[test]
    fn rank_is_invariant_under_rigid_motion(fw in framework(), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let rot = polyrigid::generate::random_rotation(&mut rng);
        let shift = nalgebra::Vector3::new(1.5, -3.0, 0.25);
        let moved = fw.with_vertices(fw.vertices().iter().map(|p| rot * p + shift).collect()).unwrap();
        prop_assert_eq!(rigidity_rank(&fw, &tol()), rigidity_rank(&moved, &tol()));
    }
}
