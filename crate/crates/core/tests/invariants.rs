use proptest::prelude::*;

use pjlab_core::auxiliary::an_bn_eval;
use pjlab_core::identities::{
    difference, ladder, normalized_residual, recurrence, sample_points, Reporter, Status, Tolerances,
};
use pjlab_core::moments::{cross_check, moment_table};
use pjlab_core::ortho::{build_ortho, hankel_det_oracle};
use pjlab_core::pipeline::Pipeline;
use pjlab_core::weight::{Shift, WeightParams};
use pjlab_core::{DerivOrder, LabError, PrecisionCtx, Real};

const BITS: usize = 192;

fn params() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.3f64..3.0, 0.2f64..3.0, 0.05f64..5.0)
}

fn ctx() -> PrecisionCtx {
    PrecisionCtx::new(BITS).unwrap()
}

fn build(a: f64, b: f64, t: f64, n: usize, ctx: &PrecisionCtx) -> Pipeline {
    let p = WeightParams::from_f64(a, b, t, BITS).unwrap();
    Pipeline::build(&p, n, ctx).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn moment_routes_agree_and_moments_are_positive((a, b, t) in params()) {
        let ctx = ctx();
        let p = WeightParams::from_f64(a, b, t, BITS).unwrap();
        let tabs = moment_table(&p, 8, &[Shift::NONE, Shift::BETA_DOWN], &ctx).unwrap();
        for tab in &tabs {
            prop_assert!(tab.mu.iter().all(|m| m.is_positive()));
        }
        for r in cross_check(&tabs[0], &ctx).unwrap() {
            prop_assert!(r.agrees(), "k = {}: {} > {}", r.k, r.difference, r.combined_bound);
        }
    }

    #[test]
    fn determinants_and_support_bounds((a, b, t) in params()) {
        let ctx = ctx();
        let p = WeightParams::from_f64(a, b, t, BITS).unwrap();
        let tabs = moment_table(&p, 14, &[Shift::NONE], &ctx).unwrap();
        let sys = build_ortho(&tabs[0], 6, &ctx).unwrap();
        let tol = Real::from_f64(10f64.powi(-(BITS as i32) / 4), 64);
        for n in 0..=7 {
            let oracle = hankel_det_oracle(&tabs[0], n, &ctx).unwrap();
            prop_assert!(((&oracle - &sys.d[n]) / &oracle).abs() < tol, "n = {}", n);
        }
        let quarter = Real::ratio(1, 4, 64);
        for n in 0..=6 {
            prop_assert!(sys.alpha_rec[n].is_positive() && sys.alpha_rec[n] < Real::one(64));
            if n > 0 {
                prop_assert!(sys.beta_rec[n].is_positive() && sys.beta_rec[n] <= quarter);
            }
        }
    }

    #[test]
    fn algebraic_identities_hold_to_a_sixth_of_the_bits((a, b, t) in params()) {
        let ctx = ctx();
        let pipe = build(a, b, t, 5, &ctx);
        let tol = Tolerances::new(BITS);
        let mut rep = Reporter::new(&tol, ctx.residual_floor());
        difference::check(&pipe, &mut rep);
        recurrence::check(&pipe, &mut rep);
        let bound = Real::from_f64(10f64.powi(-(BITS as i32) / 6), 64);
        for r in &rep.reports {
            prop_assert!(r.status != Status::Fail, "{} at n = {}", r.identity, r.n);
            prop_assert!(r.residual < bound, "{} at n = {}: {}", r.identity, r.n, r.residual);
        }
        for n in 0..=5 {
            let gap = &pipe.aux.big_r_star[n] - &pipe.aux.big_r[n] + (2 * n as i64 + 1) + a + b;
            prop_assert!(gap.abs() < Real::from_f64(1e-40, 64));
        }
    }

    #[test]
    fn ladder_relations_at_random_points((a, b, t) in params(), seed in any::<u64>()) {
        let ctx = ctx();
        let pipe = build(a, b, t, 4, &ctx);
        let zs = sample_points(8, seed, BITS);
        let tol = Tolerances::new(BITS);
        let mut rep = Reporter::new(&tol, ctx.residual_floor());
        ladder::check(&pipe, None, &zs, &mut rep).unwrap();
        prop_assert!(rep.reports.iter().all(|r| r.status != Status::Fail));
        for z in &zs {
            prop_assert!(an_bn_eval(&pipe.aux, 0, z).unwrap().1.is_zero());
        }
    }

    #[test]
    fn normalized_residual_is_scale_invariant(
        xs in proptest::collection::vec(-1e3f64..1e3, 2..6),
        scale in 1e-3f64..1e3,
    ) {
        let floor = Real::pow2(-600, 256);
        let terms: Vec<Real> = xs.iter().map(|&x| Real::from_f64(x, 256)).collect();
        let scaled: Vec<Real> = terms.iter().map(|x| x * Real::from_f64(scale, 256)).collect();
        let a = normalized_residual(&terms, &floor);
        let b = normalized_residual(&scaled, &floor);
        prop_assert!((a.to_f64() - b.to_f64()).abs() <= 1e-12 * a.to_f64().max(1e-300));
        prop_assert!(a <= Real::one(64));
    }

    #[test]
    fn stencils_are_exact_on_random_quartics(
        c in proptest::array::uniform5(-10i64..10),
        t in 0.5f64..4.0,
    ) {
        let ctx = PrecisionCtx::new(256).unwrap();
        let t = Real::from_f64(t, 256);
        let poly = |s: &Real| -> Result<Real, LabError> {
            Ok(c.iter().rev().fold(Real::zero(256), |acc, &k| acc * s + k))
        };
        let d1 = ctx.fd_derivative(poly, &t, DerivOrder::First).unwrap();
        let d2 = ctx.fd_derivative(poly, &t, DerivOrder::Second).unwrap();
        let exact1 = (1..5).rev().fold(Real::zero(256), |acc, j| acc * &t + c[j] * j as i64);
        let exact2 = (2..5).rev().fold(Real::zero(256), |acc, j| acc * &t + c[j] * (j * (j - 1)) as i64);
        let scale = Real::from_f64(1e4, 64);
        prop_assert!((&d1.value - &exact1).abs() < Real::pow2(-150, 64) * &scale);
        prop_assert!((&d2.value - &exact2).abs() < Real::pow2(-100, 64) * &scale);
    }
}
