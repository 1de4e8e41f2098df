use std::f64::consts::PI;

use liespec::geometry;
use liespec::lie::LieGroupCatalogEntry;
use liespec::linalg::Matrix;
use liespec::metric::{self, MetricSpec};
use liespec::rep;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix3() -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3.0f64..3.0, 9)
        .prop_map(|v| Matrix::from_row_major(3, 3, v).unwrap())
        .prop_filter("well conditioned", |a| a.determinant().abs() > 0.05)
}

fn matrix2() -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3.0f64..3.0, 4)
        .prop_map(|v| Matrix::from_row_major(2, 2, v).unwrap())
        .prop_filter("well conditioned", |a| a.determinant().abs() > 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_reconstructs_aat(a in matrix3()) {
        let s = MetricSpec::from_matrix(a).unwrap();
        prop_assert!(s.reconstruction_residual() < 1e-9);
        prop_assert!(s.sigma().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn right_orthogonal_invariance(a in matrix3(), seed in any::<u64>()) {
        let r = metric::random_orthogonal(3, &mut ChaCha8Rng::seed_from_u64(seed));
        let s = MetricSpec::from_matrix(a.clone()).unwrap();
        let sr = MetricSpec::from_matrix(&a * &r).unwrap();
        prop_assert!(sr.gram().max_abs_diff(s.gram()) <= 1e-9 * s.gram().max_abs());
        let su2 = LieGroupCatalogEntry::su2();
        let (l, lr) = (
            rep::lambda1_certified(&su2, &s).unwrap().lambda1,
            rep::lambda1_certified(&su2, &sr).unwrap().lambda1,
        );
        prop_assert!((l - lr).abs() <= 1e-9 * l);
    }

    #[test]
    fn su2_eigenvalue_window(a in matrix3()) {
        let s = MetricSpec::from_matrix(a).unwrap();
        let r = rep::lambda1_certified(&LieGroupCatalogEntry::su2(), &s).unwrap();
        let s2 = s.sigma_k(2).powi(2);
        prop_assert!(r.certified);
        prop_assert!(r.lambda1 > 2.0 * s2 && r.lambda1 <= 8.0 * s2 * (1.0 + 1e-9));
    }

    #[test]
    fn lambda1_scales_quadratically(a in matrix3(), t in 0.2f64..5.0) {
        let so3 = LieGroupCatalogEntry::so3();
        let s = MetricSpec::from_matrix(a).unwrap();
        let l = rep::lambda1_certified(&so3, &s).unwrap().lambda1;
        let lt = rep::lambda1_certified(&so3, &s.scaled(t).unwrap()).unwrap().lambda1;
        prop_assert!((lt - t * t * l).abs() <= 1e-9 * lt);
    }

    #[test]
    fn torus_li_inequality(a in matrix2()) {
        let t2 = LieGroupCatalogEntry::torus(2).unwrap();
        let s = MetricSpec::from_matrix(a).unwrap();
        let l = rep::lambda1_certified(&t2, &s).unwrap().lambda1;
        let d = geometry::torus_diameter(&s, 32).unwrap();
        prop_assert!(d.lower <= d.value && d.value <= d.upper);
        prop_assert!(l * d.lower * d.lower >= PI * PI / 4.0 - 1e-6);
    }

    #[test]
    fn loewner_order_shortens_lengths(a in matrix3(), c in matrix3(), x in prop::collection::vec(-1.0f64..1.0, 3)) {
        let sa = MetricSpec::from_matrix(a).unwrap();
        let sc = MetricSpec::from_matrix(c).unwrap();
        let sb = MetricSpec::from_aat(&(sa.aat() + sc.aat())).unwrap();
        prop_assert!(metric::loewner_leq(&sa, &sb).unwrap());
        prop_assert!(sb.norm_sq(&x) <= sa.norm_sq(&x) * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn matrix_text_round_trip(a in matrix3()) {
        let back = metric::parse_matrix_text(&metric::format_matrix_text(&a)).unwrap();
        prop_assert_eq!(back, a);
    }
}
