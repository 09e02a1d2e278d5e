//! The Painlevé III limit: `beta -> infinity` with `s = beta t` fixed.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Result;
use crate::pipeline::{Family, Pipeline};
use crate::precision::{DerivOrder, PrecisionCtx};
use crate::real::Real;
use crate::weight::WeightParams;

use super::{normalized_residual, Reporter};

/// Residual of the limiting sigma equation at one `beta`, with `t = s/beta`.
pub fn residual_at(n: usize, alpha: &Real, s: &Real, beta: &Real, ctx: &PrecisionCtx, floor: &Real) -> Result<Real> {
    let t = s / beta;
    let params = WeightParams::new(alpha.clone(), beta.clone(), t.clone())?;
    let center = Pipeline::build(&params, n, ctx)?;
    let fam = Family::around(&center, ctx)?;
    let h = &center.aux.big_h[n];
    let ht = &center.aux.big_h_prime[n];
    let htt = fam.derivative(DerivOrder::First, |m| Ok(m.aux.big_h_prime[n].clone()))?.value;
    let hs = ht / beta;
    let shss = &t * &htt / beta;
    let lin = alpha * &hs + n as i64;
    let terms = [
        &shss * &shss,
        -(&lin * &lin),
        -((s * &hs - h) * &hs * (Real::one(64) - &hs) * 4i64),
    ];
    Ok(normalized_residual(&terms, floor))
}

pub fn check(n: usize, alpha: &Real, s: &Real, betas: &[Real], ctx: &PrecisionCtx, rep: &mut Reporter) -> Result<()> {
    if betas.is_empty() {
        return Ok(());
    }
    let floor = rep.floor().clone();
    let mut residuals = Vec::with_capacity(betas.len());
    for b in betas {
        residuals.push(residual_at(n, alpha, s, b, ctx, &floor)?);
    }
    let list: Vec<_> = betas
        .iter()
        .zip(&residuals)
        .map(|(b, r)| format!("beta {} -> {}", b.to_sci_string(3), r.to_sci_string(3)))
        .collect();
    let list = list.join(", ");
    for i in 1..betas.len() {
        let ratio = if residuals[i - 1].is_zero() {
            Real::zero(64)
        } else {
            &residuals[i] / &residuals[i - 1]
        };
        rep.residual("painleve-iii-decay", n, &(s / &betas[i]), ratio).note(&list);
    }
    let last = betas.len() - 1;
    let t = s / &betas[last];
    rep.residual("painleve-iii-limit", n, &t, residuals[last].clone()).note(&list);
    Ok(())
}
