use num_complex::Complex64;
use proptest::prelude::*;
use slitdisk::blaschke::{factorial_zeros, BlaschkeProduct};
use slitdisk::counterexample::default_counterexample;
use slitdisk::hyperbolic::{mobius, pseudo_distance};
use slitdisk::innerfn::{radial_real_part, SingularInner};
use slitdisk::slitmap::SlitMap;
use slitdisk::{BoundaryDeviation, Point, RunConfig};

fn disk(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..radius, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mobius_preserves_the_metric(a in disk(0.95), z in disk(0.95), w in disk(0.95)) {
        let before = pseudo_distance(z, w).unwrap();
        let after = pseudo_distance(mobius(a, z).unwrap(), mobius(a, w).unwrap()).unwrap();
        prop_assert!((before - after).abs() < 1e-12);
        prop_assert!(before < 1.0);
    }

    #[test]
    fn h_lands_off_the_slit_and_g_undoes_it(zeta in disk(0.999)) {
        let map = SlitMap::new();
        let z = map.h(zeta).unwrap().value();
        prop_assert!(z.norm() < 1.0);
        prop_assert!(!(z.im == 0.0 && (0.0..1.0).contains(&z.re)));
        prop_assert!((map.g(z).unwrap().value() - zeta).norm() < 1e-9);
    }

    #[test]
    fn blaschke_product_is_bounded_by_one(z in disk(0.9999)) {
        let b = BlaschkeProduct::new(factorial_zeros(Complex64::new(0.0, 0.5), 20).unwrap(), 1e-12).unwrap();
        prop_assert!(b.eval(z).unwrap().norm() < 1.0);
    }

    #[test]
    fn singular_modulus_is_exp_of_the_radial_real_part(log_eps in -8.0f64..-0.5, theta in -1.4f64..1.4) {
        let eps = 10f64.powf(log_eps);
        let s = SingularInner::atom(Complex64::new(1.0, 0.0), 1.0).unwrap();
        let v = s.eval(BoundaryDeviation::polar(eps, theta).unwrap()).unwrap().norm();
        let expected = radial_real_part(eps, theta).unwrap().exp();
        prop_assert!(v <= 1.0);
        if expected > 1e-300 {
            prop_assert!((v - expected).abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn config_text_round_trips(seed in any::<u64>(), n_max in 5usize..40, floor in 1e-4f64..0.5) {
        let cfg = RunConfig { seed, n_max, floor, ..RunConfig::default() };
        prop_assert_eq!(RunConfig::from_text(&cfg.to_text()).unwrap(), cfg);
    }
}

#[test]
fn phi_stays_below_one_near_both_slit_edges() {
    let cx = default_counterexample().unwrap();
    for k in 3..=12u32 {
        let eps = 10f64.powi(-(k as i32));
        for anchor in [1.0, -1.0] {
            let p = Point::near(Complex64::new(anchor, 0.0), Complex64::new(eps, eps / 2.0));
            let v = cx.phi_eval(p).unwrap().norm();
            assert!(v < 1.0, "k = {k}, anchor = {anchor}: {v}");
        }
    }
}
