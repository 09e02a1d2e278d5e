//! Moment tables: agreement of the two routes, positivity, and the Beta
//! closed form at `t = 0`.

use crate::error::Result;
use crate::moments::quadrature_tables;
use crate::pipeline::Pipeline;
use crate::precision::PrecisionCtx;
use crate::real::Real;
use crate::weight::Shift;

use super::Reporter;

pub fn check(p: &Pipeline, rep: &mut Reporter) {
    let t = p.t();
    for a in &p.route_agreement {
        let ratio = if a.difference.is_zero() {
            a.difference.clone()
        } else {
            &a.difference / &a.combined_bound
        };
        let rel = (&a.difference / &a.quad).abs();
        rep.residual("moment-routes", a.k as usize, t, ratio)
            .note(&alloc::format!("relative difference {}", rel.to_sci_string(3)));
    }
    let mut bad = None;
    for tab in &p.moments {
        if let Some(i) = tab.mu.iter().position(|m| !m.is_positive()) {
            bad = Some((tab.shift, tab.k_min + i as i64));
            break;
        }
    }
    let flag = if bad.is_some() { Real::one(t.bits()) } else { Real::zero(t.bits()) };
    let r = rep.residual("moment-positivity", 0, t, flag);
    if let Some((s, k)) = bad {
        r.note(&alloc::format!("moment k = {k} of shift {s} is not positive"));
    }
}

/// At `t = 0`, compares an independent quadrature table with the Beta closed
/// form held by the pipeline, as a relative difference.
pub fn check_closed_form(p: &Pipeline, ctx: &PrecisionCtx, rep: &mut Reporter) -> Result<()> {
    if !p.t().is_zero() {
        return Ok(());
    }
    let closed = &p.moments[0];
    let quad = quadrature_tables(&p.params, closed.k_max(), &[Shift::NONE], ctx)?;
    for k in 0..=closed.k_max() {
        let b = closed.at(k)?;
        let q = quad[0].at(k)?;
        rep.residual("moment-closed-form", k as usize, p.t(), ((q - b) / b).abs());
    }
    Ok(())
}
