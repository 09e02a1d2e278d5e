//! Gamma, Beta and the Kummer function of the second kind.

use crate::error::{LabError, Result};
use crate::precision::{Interval, PrecisionCtx, QuadResult, Target};
use crate::real::Real;

/// `Gamma(x)` for `x > 0`.
///
/// Uses `Gamma(x) = N^x e^-N sum_k N^k / (x)_(k+1) + Gamma(x, N)` with `N`
/// large enough that the incomplete tail is below the working precision.
/// Every term of the series is positive, so there is no cancellation.
pub fn gamma(x: &Real, ctx: &PrecisionCtx) -> Result<Real> {
    if !x.is_positive() {
        return Err(LabError::Domain(alloc::format!("Gamma at {x}")));
    }
    let wide = ctx.widened(32);
    let p = wide.bits();
    let x = x.with_bits(p);
    let xf = x.to_f64();
    let goal = (p as f64 + 16.0) * core::f64::consts::LN_2;
    let lg = libm::lgamma(xf);
    let mut n = libm::ceil((2.0 * xf + 10.0).max(goal));
    while (xf - 1.0) * libm::log(n) - n + core::f64::consts::LN_2 - lg > -goal {
        n += libm::ceil(goal / 4.0);
    }
    let big_n = Real::from_f64(n, p);
    let tiny = Real::pow2(-(p as i32 + 8), 64);
    let mut term = x.recip();
    let mut sum = term.clone();
    let mut k = 1i64;
    loop {
        term = term * &big_n / (&x + k);
        sum += &term;
        if k as f64 > n && term < &sum * &tiny {
            break;
        }
        k += 1;
    }
    let scale = wide.exp(&(&x * wide.ln(&big_n) - &big_n));
    Ok((sum * scale).with_bits(ctx.bits()))
}

/// `B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)` for `a, b > 0`.
pub fn beta_fn(a: &Real, b: &Real, ctx: &PrecisionCtx) -> Result<Real> {
    Ok(gamma(a, ctx)? * gamma(b, ctx)? / gamma(&(a + b), ctx)?)
}

/// `Gamma(a) U(a, b, z) = int_0^inf e^(-z s) s^(a-1) (1+s)^(b-a-1) ds`,
/// valid for `a > 0`, `z > 0` and any real `b`.
pub fn kummer_u_scaled(a: &Real, b: &Real, z: &Real, ctx: &PrecisionCtx) -> Result<QuadResult> {
    if !a.is_positive() || !z.is_positive() {
        return Err(LabError::Domain(alloc::format!(
            "integral form of U(a, b, z) at a = {a}, z = {z}"
        )));
    }
    let am1 = a - 1;
    let c = b - a - 1;
    let target = Target::Relative(ctx.quad_target());
    let mut r = ctx.de_quad_vec(Interval::HalfLine, 1, &target, |s, out| {
        out[0] = ctx.exp(&(&am1 * &s.ln_x + &c * &s.ln_complement - z * &s.x));
    })?;
    Ok(r.pop().expect("one component"))
}

/// Kummer's function of the second kind `U(a, b, z)` for `a > 0`, `z > 0`.
pub fn kummer_u(a: &Real, b: &Real, z: &Real, ctx: &PrecisionCtx) -> Result<QuadResult> {
    let scaled = kummer_u_scaled(a, b, z, ctx)?;
    let g = gamma(a, ctx)?;
    Ok(QuadResult {
        value: scaled.value / &g,
        error_bound: scaled.error_bound / &g,
        ..scaled
    })
}
