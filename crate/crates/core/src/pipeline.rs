//! The full chain at one parameter point: moments, the orthogonal system and
//! the auxiliary quantities, plus families of such chains on a `t` stencil.

use alloc::vec::Vec;

use crate::auxiliary::{aux_compute, AuxSet};
use crate::error::Result;
use crate::moments::{cross_check, moment_table, moment_table_checked, MomentTable, RouteAgreement};
use crate::ortho::{build_ortho, OrthoSystem};
use crate::precision::{DerivOrder, FdEstimate, PrecisionCtx, Stencil};
use crate::real::Real;
use crate::weight::{Shift, WeightParams};

/// Shifts needed by the auxiliary quantities.
pub const PIPELINE_SHIFTS: [Shift; 2] = [Shift::NONE, Shift::BETA_DOWN];

#[derive(Clone, Debug)]
pub struct Pipeline {
    pub params: WeightParams,
    pub n_max: usize,
    /// Unshifted and `(0,-1)` tables up to `k = 2 n_max + 2`.
    pub moments: Vec<MomentTable>,
    /// Kummer cross-check of the unshifted table; empty unless requested and
    /// `t > 0`.
    pub route_agreement: Vec<RouteAgreement>,
    pub ortho: OrthoSystem,
    pub aux: AuxSet,
}

impl Pipeline {
    pub fn build(params: &WeightParams, n_max: usize, ctx: &PrecisionCtx) -> Result<Self> {
        let k_max = 2 * n_max as i64 + 2;
        let moments = moment_table(params, k_max, &PIPELINE_SHIFTS, ctx)?;
        Self::finish(params, n_max, moments, Vec::new(), ctx)
    }

    /// As [`Pipeline::build`], also requiring the quadrature and Kummer
    /// routes to agree on every unshifted moment.
    pub fn build_checked(params: &WeightParams, n_max: usize, ctx: &PrecisionCtx) -> Result<Self> {
        let k_max = 2 * n_max as i64 + 2;
        let (moments, agreement) = moment_table_checked(params, k_max, &PIPELINE_SHIFTS, ctx)?;
        Self::finish(params, n_max, moments, agreement, ctx)
    }

    /// As [`Pipeline::build`], recording the route comparison for `t > 0`
    /// without failing on disagreement.
    pub fn build_with_routes(params: &WeightParams, n_max: usize, ctx: &PrecisionCtx) -> Result<Self> {
        let k_max = 2 * n_max as i64 + 2;
        let moments = moment_table(params, k_max, &PIPELINE_SHIFTS, ctx)?;
        let agreement = if params.t.is_positive() {
            cross_check(&moments[0], ctx)?
        } else {
            Vec::new()
        };
        Self::finish(params, n_max, moments, agreement, ctx)
    }

    fn finish(
        params: &WeightParams,
        n_max: usize,
        moments: Vec<MomentTable>,
        route_agreement: Vec<RouteAgreement>,
        ctx: &PrecisionCtx,
    ) -> Result<Self> {
        let ortho = build_ortho(&moments[0], n_max, ctx)?;
        let aux = aux_compute(&ortho, &moments, ctx)?;
        Ok(Pipeline {
            params: params.with_bits(ctx.bits()),
            n_max,
            moments,
            route_agreement,
            ortho,
            aux,
        })
    }

    pub fn t(&self) -> &Real {
        &self.params.t
    }
}

/// Pipelines at the five points of a stencil in `t`; `members[2]` is the
/// centre.
#[derive(Clone, Debug)]
pub struct Family {
    pub stencil: Stencil,
    pub members: [Pipeline; 5],
}

impl Family {
    /// Rebuilds `center` at the other stencil points with step
    /// `t * fd_step_scale`.
    pub fn around(center: &Pipeline, ctx: &PrecisionCtx) -> Result<Self> {
        Self::with_stencil(center, ctx.stencil(center.t())?, ctx)
    }

    /// Rebuilds `center` with an explicit step `h`.
    pub fn with_step(center: &Pipeline, h: &Real, ctx: &PrecisionCtx) -> Result<Self> {
        Self::with_stencil(center, Stencil::new(center.t(), h)?, ctx)
    }

    fn with_stencil(center: &Pipeline, stencil: Stencil, ctx: &PrecisionCtx) -> Result<Self> {
        let mut built = Vec::with_capacity(5);
        for (j, t) in stencil.points.iter().enumerate() {
            if j == 2 {
                built.push(center.clone());
            } else {
                built.push(Pipeline::build(&center.params.at_t(t.clone())?, center.n_max, ctx)?);
            }
        }
        let members: [Pipeline; 5] = match built.try_into() {
            Ok(m) => m,
            Err(_) => unreachable!("five stencil points"),
        };
        Ok(Family { stencil, members })
    }

    pub fn center(&self) -> &Pipeline {
        &self.members[2]
    }

    /// Stencil derivative in `t` of a quantity read off each member.
    pub fn derivative<F>(&self, order: DerivOrder, mut f: F) -> Result<FdEstimate>
    where
        F: FnMut(&Pipeline) -> Result<Real>,
    {
        let [a, b, c, d, e] = &self.members;
        let samples = [f(a)?, f(b)?, f(c)?, f(d)?, f(e)?];
        Ok(self.stencil.estimate(&samples, order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_derivative_of_log_norm() {
        // t d/dt ln h_0 = -R*_0
        let ctx = PrecisionCtx::new(192).unwrap();
        let p = WeightParams::from_f64(1.0, 1.0, 1.0, 192).unwrap();
        let center = Pipeline::build(&p, 1, &ctx).unwrap();
        let fam = Family::around(&center, &ctx).unwrap();
        let d = fam
            .derivative(DerivOrder::First, |m| Ok(ctx.ln(&m.ortho.h[0])))
            .unwrap();
        let e = (d.value * center.t() + &center.aux.big_r_star[0]).abs();
        assert!(e < Real::from_f64(1e-30, 64));
        assert!(Family::with_step(&center, &ctx.one(), &ctx).is_err());
    }
}
