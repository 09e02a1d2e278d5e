//! `alpha_0` and `R_0` against Kummer's function, and the behaviour of `R_0`
//! for large and small `t`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Result;
use crate::pipeline::Pipeline;
use crate::precision::PrecisionCtx;
use crate::real::Real;
use crate::special::kummer_u_scaled;
use crate::weight::WeightParams;

use super::Reporter;

/// Points at which `t (R_0 - t - alpha - 2 beta - 2)` is sampled.
pub const LARGE_T: [f64; 3] = [1e2, 1e3, 1e4];
pub const SMALL_T: f64 = 1e-3;

pub fn check(p: &Pipeline, ctx: &PrecisionCtx, rep: &mut Reporter) -> Result<()> {
    let t = p.t();
    if !t.is_positive() {
        return Ok(());
    }
    let (al, be) = (&p.params.alpha, &p.params.beta);
    let a1 = be + 1i64;
    let u1 = kummer_u_scaled(&a1, &(-al - 1i64), t, ctx)?.value;
    let u0 = kummer_u_scaled(&a1, &-al, t, ctx)?.value;
    rep.terms("alpha0-kummer", 0, t, &[p.ortho.alpha_rec[0].clone(), -(&u1 / &u0)]);

    // Gamma(beta) U(beta, .) / (Gamma(1+beta) U(1+beta, .)) = U-ratio / beta
    let ub = kummer_u_scaled(be, &-al, t, ctx)?.value;
    let ratio = be * &ub / &u0;
    rep.terms("big-r0-kummer", 0, t, &[p.aux.big_r[0].clone(), -ratio]);
    Ok(())
}

fn big_r0(params: &WeightParams, t: f64, ctx: &PrecisionCtx) -> Result<Real> {
    let p = Pipeline::build(&params.at_t(Real::from_f64(t, ctx.bits()))?, 0, ctx)?;
    Ok(p.aux.big_r[0].clone())
}

/// Large- and small-`t` behaviour of `R_0`; independent of the `t` grid.
pub fn asymptotics(params: &WeightParams, ctx: &PrecisionCtx, rep: &mut Reporter) -> Result<()> {
    let (al, be) = (&params.alpha, &params.beta);
    let shift = al + be * 2i64 + 2i64;
    let mut scaled = Vec::with_capacity(LARGE_T.len());
    let mut plain = Vec::with_capacity(LARGE_T.len());
    for &t in &LARGE_T {
        let tr = Real::from_f64(t, ctx.bits());
        let gap = big_r0(params, t, ctx)? - &tr - &shift;
        scaled.push(&gap * &tr);
        plain.push(gap);
    }
    let (b1, b2) = (scaled[1].abs(), scaled[2].abs());
    let spread = if b1.is_zero() || b2.is_zero() {
        Real::from_f64(f64::INFINITY, 64)
    } else {
        b1.clone().max(b2.clone()) / b1.min(b2)
    };
    let list = |v: &[Real]| v.iter().map(|x| x.to_sci_string(6)).collect::<Vec<_>>().join(", ");
    let last = Real::from_f64(LARGE_T[2], ctx.bits());
    rep.residual("big-r0-large-t", 0, &last, spread).note(&format!(
        "t(R_0 - t - c) = [{}], R_0 - t - c = [{}] at t = {:?}",
        list(&scaled),
        list(&plain),
        LARGE_T
    ));

    let small = Real::from_f64(SMALL_T, ctx.bits());
    let r0 = big_r0(params, SMALL_T, ctx)?;
    let limit = al + be + 1i64;
    rep.residual("big-r0-small-t", 0, &small, (r0 - limit).abs());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::testing::{all_below, collect, find, pipeline};
    use crate::identities::Status;

    #[test]
    fn ratios_match_at_unit_point() {
        let (p, ctx) = pipeline(1.0, 1.0, 1.0, 0, 256);
        all_below(&collect(&ctx, |rep| check(&p, &ctx, rep).unwrap()), 1e-35);
    }

    #[test]
    fn nothing_at_t0() {
        let (p, ctx) = pipeline(1.0, 1.0, 0.0, 0, 192);
        assert!(collect(&ctx, |rep| check(&p, &ctx, rep).unwrap()).is_empty());
    }

    #[test]
    fn large_and_small_t_behaviour() {
        let ctx = PrecisionCtx::new(192).unwrap();
        let params = WeightParams::from_f64(1.5, 0.5, 0.0, 192).unwrap();
        let reports = collect(&ctx, |rep| asymptotics(&params, &ctx, rep).unwrap());
        let large = find(&reports, "big-r0-large-t", 0);
        assert_eq!(large.status, Status::Pass, "{}", large.notes);
        assert_eq!(find(&reports, "big-r0-small-t", 0).status, Status::Pass);
    }
}
