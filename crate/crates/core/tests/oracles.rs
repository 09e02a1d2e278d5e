//! Frozen reference values computed independently of this crate.

use pjlab_core::moments::{moment_kummer, moment_quad};
use pjlab_core::pipeline::Pipeline;
use pjlab_core::weight::{Shift, WeightParams};
use pjlab_core::{DerivOrder, Interval, LabError, PrecisionCtx, Real};

/// `int_0^1 e^(-1/x) x (1-x) dx`, from a trapezoid rule after the substitution
/// `x = 1/(1+e^(-u))`, halving the step until successive sums agree to 200
/// digits at 1024 bits.
const EXP_BETA_INTEGRAL: &str =
    "0.0236294758731994085862679269195941435387611519273495268827068081498919671244610953624244092";

/// `H_2 = t (ln D_2)'` at `alpha = beta = t = 1`, from Kummer-function moments
/// and a high-precision numerical derivative at 1024 bits.
const H2_UNIT: &str =
    "-3.6478337086848022638313799367526713943019232398629812547899654252073558548976873922891271";

fn pinned(s: &str) -> Real {
    Real::parse_decimal(s, 320).unwrap()
}

fn digits(d: i32) -> Real {
    Real::from_f64(10f64.powi(-d), 64)
}

fn exp_beta(ctx: &PrecisionCtx) -> pjlab_core::QuadResult {
    ctx.de_quad(Interval::Unit, |a| {
        if a.x.is_zero() {
            return ctx.zero();
        }
        ctx.exp(&(-a.x.recip())) * &a.x * &a.complement
    })
    .unwrap()
}

#[test]
fn essential_zero_integral_matches_trapezoid_pin() {
    let ctx = PrecisionCtx::new(256).unwrap();
    let q = exp_beta(&ctx);
    let e = (&q.value - pinned(EXP_BETA_INTEGRAL)).abs();
    assert!(e <= &q.error_bound + digits(85), "error {e}, bound {}", q.error_bound);
    assert!(q.error_bound < digits(60));
}

#[test]
fn quadrature_is_bit_identical_on_repeat() {
    let ctx = PrecisionCtx::new(256).unwrap();
    let a = exp_beta(&ctx);
    let b = exp_beta(&ctx);
    assert_eq!(a.value, b.value);
    assert_eq!(a.error_bound, b.error_bound);
    let fresh = PrecisionCtx::new(256).unwrap();
    assert_eq!(exp_beta(&fresh).value, a.value);
}

#[test]
fn doubling_precision_moves_value_within_bound() {
    let lo = PrecisionCtx::new(256).unwrap();
    let hi = PrecisionCtx::new(512)
        .unwrap()
        .with_quad_target(lo.quad_target() * Real::pow2(-64, 64))
        .unwrap();
    let a = exp_beta(&lo);
    let b = exp_beta(&hi);
    assert!((&a.value - &b.value).abs() <= a.error_bound);
}

#[test]
fn unit_moment_pinned_by_both_routes() {
    let ctx = PrecisionCtx::new(256).unwrap();
    let p = WeightParams::from_f64(1.0, 1.0, 1.0, 256).unwrap();
    let pin = pinned(EXP_BETA_INTEGRAL);
    let q = moment_quad(&p, 0, Shift::NONE, &ctx).unwrap();
    let u = moment_kummer(&p, 0, &ctx).unwrap();
    assert!((&q.value - &pin).abs() <= &q.error_bound + digits(85));
    assert!((&u.value - &pin).abs() <= &u.error_bound + digits(85));
}

#[test]
fn leading_moment_decays_like_exp_minus_t() {
    let ctx = PrecisionCtx::new(192).unwrap();
    let shifted = |t: f64| {
        let p = WeightParams::from_f64(1.0, 1.0, t, 192).unwrap();
        let m = moment_kummer(&p, 0, &ctx).unwrap().value;
        ctx.ln(&m).to_f64() + t
    };
    let (a, b) = (shifted(50.0), shifted(100.0));
    // ln mu_0 + t = -(beta+1) ln t + O(1): moves by about -2 ln 2 per doubling
    assert!((b - a + 2.0 * std::f64::consts::LN_2).abs() < 0.1, "{a} {b}");
}

#[test]
fn h2_matches_pin() {
    let ctx = PrecisionCtx::new(256).unwrap();
    let p = WeightParams::from_f64(1.0, 1.0, 1.0, 256).unwrap();
    let pipe = Pipeline::build(&p, 2, &ctx).unwrap();
    let e = (&pipe.aux.big_h[2] - pinned(H2_UNIT)).abs();
    assert!(e < digits(60), "{e}");
    assert!(pipe.aux.big_h[0].is_zero());
}

#[test]
fn exp_derivative_converges_at_fourth_order() {
    let ctx = PrecisionCtx::new(256).unwrap();
    let t = ctx.one();
    let e = ctx.exp(&t);
    let err = |scale: f64| {
        let c = PrecisionCtx::new(256)
            .unwrap()
            .with_fd_step_scale(Real::from_f64(scale, 256))
            .unwrap();
        let d = c
            .fd_derivative::<_, LabError>(|s| Ok(c.exp(s)), &t, DerivOrder::First)
            .unwrap();
        let actual = (&d.value - &e).abs();
        assert!(actual <= d.error_proxy, "error above proxy at scale {scale}");
        actual
    };
    let coarse = err(1e-2);
    let fine = err(0.25e-2);
    let ratio = (coarse / fine).to_f64();
    assert!((ratio.log(4.0) - 4.0).abs() < 0.1, "ratio {ratio}");
}
