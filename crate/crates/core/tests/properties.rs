//! Randomized properties of the floating-point backend.

mod common;

use bcinv::banach::{limit_representation, perturbation_bound, BanachSetting, BoundSide, Complex64, LimitConfig};
use bcinv::inverse::{bc_inverse, verify_bc_inverse, CornerFrame, Method};
use common::{float_instance, other_inner_inverse, rel, rng, twisted, Shape};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![Just(Shape::Generic), Just(Shape::Aligned)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn computed_inverse_is_certified(seed in any::<u64>(), n in 2usize..=7, shape in shape()) {
        let inst = float_instance(&mut rng(seed), n, shape);
        for m in [Method::CornerSolve, Method::Factor, Method::Group] {
            let y = bc_inverse(&inst.alg, &inst.a, &inst.frame, m).unwrap();
            let cert = verify_bc_inverse(&inst.alg, &inst.a, &inst.frame, &y);
            prop_assert!(cert.verdict, "{m}: {:?}", cert.worst());
        }
    }

    #[test]
    fn inner_inverse_choice_is_irrelevant(seed in any::<u64>(), n in 2usize..=7) {
        let mut g = rng(seed);
        let inst = float_instance(&mut g, n, Shape::Generic);
        let f = &inst.frame;
        let g2 = other_inner_inverse(&mut g, &f.b, &f.g);
        let h2 = other_inner_inverse(&mut g, &f.c, &f.h);
        let Ok(f2) = CornerFrame::new(&inst.alg, f.b.clone(), f.c.clone(), g2, h2) else {
            return Ok(());
        };
        let y2 = bc_inverse(&inst.alg, &inst.a, &f2, Method::Factor).unwrap();
        prop_assert!(rel(&y2, &inst.y) < 1e-8, "{}", rel(&y2, &inst.y));
    }

    #[test]
    fn off_corner_perturbation_is_invisible(seed in any::<u64>(), n in 2usize..=7) {
        // y depends on a only through q a p
        let mut g = rng(seed);
        let inst = float_instance(&mut g, n, Shape::Generic);
        let m = twisted(&mut g, &inst.frame.q, &inst.frame.p, 0.5);
        let y2 = bc_inverse(&inst.alg, &inst.a.add(&m), &inst.frame, Method::Factor).unwrap();
        prop_assert!(rel(&y2, &inst.y) < 1e-7, "{}", rel(&y2, &inst.y));
    }

    #[test]
    fn limit_matches_algebraic(seed in any::<u64>(), n in 2usize..=6) {
        let inst = float_instance(&mut rng(seed), n, Shape::Generic);
        let r = limit_representation(&inst.alg, &inst.a, &inst.v, &LimitConfig::default()).unwrap();
        prop_assert!(rel(&r.y, &inst.y) < 1e-6, "{}", rel(&r.y, &inst.y));
    }

    #[test]
    fn bound_holds_inside_radius(seed in any::<u64>(), n in 2usize..=6, t in 0.01f64..0.95, angle in 0.0f64..6.28, left in any::<bool>()) {
        let inst = float_instance(&mut rng(seed), n, Shape::Generic);
        let s = BanachSetting::new(&inst.alg, &inst.a, &inst.frame).unwrap();
        let side = if left { BoundSide::Left } else { BoundSide::Right };
        let probe = perturbation_bound(&inst.alg, &s, Complex64::new(0.0, 0.0), side).unwrap();
        prop_assume!(probe.radius.is_finite());
        let lambda = Complex64::from_polar(t * probe.radius, angle);
        if let Ok(b) = perturbation_bound(&inst.alg, &s, lambda, side) {
            prop_assert!(b.holds, "measured {:e} > bound {:e}", b.measured, b.bound);
        }
    }
}
