//! Flows in `t`: Toda equations for the recurrence coefficients, the flows
//! of `p1(n)`, `r*_n` and `ln D_n`, and the convergence order of the stencil.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Result;
use crate::pipeline::Family;
use crate::precision::{DerivOrder, PrecisionCtx};
use crate::real::Real;

use super::{normalized_residual, Reporter};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Alpha,
    Beta,
    P1,
    LogDet,
}

impl Flow {
    pub const ALL: [Flow; 4] = [Flow::Alpha, Flow::Beta, Flow::P1, Flow::LogDet];

    pub fn identity(self) -> &'static str {
        match self {
            Flow::Alpha => "toda-alpha",
            Flow::Beta => "toda-beta",
            Flow::P1 => "p1-flow",
            Flow::LogDet => "log-det-flow",
        }
    }

    fn degrees(self, n_max: usize) -> core::ops::RangeInclusive<usize> {
        match self {
            Flow::Alpha => 0..=n_max,
            Flow::Beta | Flow::P1 => 1..=n_max,
            Flow::LogDet => 1..=n_max + 1,
        }
    }
}

/// Residual terms of a flow at degree `n`, with the stencil error proxy
/// carried by the derivative term.
pub fn flow_terms(fam: &Family, flow: Flow, n: usize, ctx: &PrecisionCtx) -> Result<(Vec<Real>, Real)> {
    let p = fam.center();
    let t = p.t();
    let a = &p.aux;
    let d = match flow {
        Flow::Alpha => fam.derivative(DerivOrder::First, |m| Ok(m.ortho.alpha_rec[n].clone()))?,
        Flow::Beta => fam.derivative(DerivOrder::First, |m| Ok(m.ortho.beta_rec[n].clone()))?,
        Flow::P1 => fam.derivative(DerivOrder::First, |m| Ok(m.ortho.p1[n].clone()))?,
        Flow::LogDet => fam.derivative(DerivOrder::First, |m| Ok(ctx.ln(&m.ortho.d[n])))?,
    };
    let lead = t * &d.value;
    let terms = match flow {
        Flow::Alpha => alloc::vec![lead, -&a.r_star[n], a.r_star[n + 1].clone()],
        Flow::Beta => {
            let b = &p.ortho.beta_rec[n];
            alloc::vec![lead, -(&a.big_r_star[n - 1] * b), &a.big_r_star[n] * b]
        }
        Flow::P1 => alloc::vec![lead, -&a.r_star[n]],
        Flow::LogDet => alloc::vec![lead, -&a.big_h[n]],
    };
    Ok((terms, t * &d.error_proxy))
}

pub fn check(fam: &Family, ctx: &PrecisionCtx, rep: &mut Reporter) -> Result<()> {
    let p = fam.center();
    let t = p.t();
    for flow in Flow::ALL {
        for n in flow.degrees(p.n_max) {
            let (terms, proxy) = flow_terms(fam, flow, n, ctx)?;
            rep.stencil_terms(flow.identity(), n, t, &terms, &proxy);
        }
    }
    for n in 1..=p.n_max {
        let rs = fam.derivative(DerivOrder::First, |m| Ok(m.aux.r_star[n].clone()))?;
        let r = fam.derivative(DerivOrder::First, |m| Ok(m.aux.r[n].clone()))?;
        let terms = [t * &rs.value, -&p.aux.r_star[n], -(t * &r.value)];
        let proxy = t * &(rs.error_proxy + r.error_proxy);
        rep.stencil_terms("rstar-flow", n, t, &terms, &proxy);
    }
    Ok(())
}

/// Convergence order of the stencil residual of each flow, from families
/// whose steps halve from one to the next. Reports `|order - 4|` for the
/// worst consecutive pair, at the degree where the coarsest residual peaks.
pub fn order(families: &[Family], ctx: &PrecisionCtx, rep: &mut Reporter) -> Result<()> {
    if families.len() < 2 {
        return Ok(());
    }
    let p = families[0].center();
    let t = p.t();
    let floor = rep.floor().clone();
    for flow in Flow::ALL {
        let mut errors = Vec::with_capacity(families.len());
        let mut peak = 0;
        for (i, fam) in families.iter().enumerate() {
            let mut worst = Real::zero(64);
            for n in flow.degrees(p.n_max) {
                let (terms, _) = flow_terms(fam, flow, n, ctx)?;
                let r = normalized_residual(&terms, &floor);
                if r > worst {
                    worst = r;
                    if i == 0 {
                        peak = n;
                    }
                }
            }
            errors.push(worst);
        }
        let mut orders = Vec::with_capacity(errors.len() - 1);
        let mut residual = Real::zero(64);
        let mut degenerate = false;
        for w in errors.windows(2) {
            if w[0].is_zero() || w[1].is_zero() {
                degenerate = true;
                continue;
            }
            let o = (w[0].log10_abs() - w[1].log10_abs()) / core::f64::consts::LOG10_2;
            orders.push(o);
            let dev = Real::from_f64((o - 4.0).abs(), 64);
            residual = residual.max(dev);
        }
        let listed: Vec<String> = orders.iter().map(|o| format!("{o:.3}")).collect();
        let steps: Vec<String> = families.iter().map(|f| f.stencil.h.to_sci_string(3)).collect();
        let r = rep.residual("toda-order", peak, t, residual);
        r.note(&format!("{} orders [{}] at steps [{}]", flow.identity(), listed.join(", "), steps.join(", ")));
        if degenerate {
            r.inconclusive("a coarse residual vanished exactly");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::testing::{all_below, collect, find, pipeline};
    use crate::identities::Status;

    #[test]
    fn flows_below_error_proxy() {
        let (p, ctx) = pipeline(1.0, 1.0, 1.0, 3, 256);
        let fam = Family::around(&p, &ctx).unwrap();
        let reports = collect(&ctx, |rep| check(&fam, &ctx, rep).unwrap());
        all_below(&reports, 1e-15);
        for r in &reports {
            let proxy = r.error_proxy.as_ref().expect("stencil proxy");
            assert!(r.residual <= *proxy, "{} at n = {}", r.identity, r.n);
        }
    }

    #[test]
    fn row_zero_alpha_flow() {
        // r*_0 = 0, so t alpha_0' = -r*_1
        let (p, ctx) = pipeline(1.5, 0.5, 2.0, 1, 256);
        let fam = Family::around(&p, &ctx).unwrap();
        let (terms, _) = flow_terms(&fam, Flow::Alpha, 0, &ctx).unwrap();
        assert!(terms[1].is_zero());
        let e = (&terms[0] + &terms[2]).abs();
        assert!(e < Real::from_f64(1e-20, 64));
    }

    #[test]
    fn fourth_order_convergence() {
        let (p, ctx) = pipeline(1.0, 1.0, 1.0, 2, 192);
        let fams: Vec<_> = [32, 64, 128]
            .iter()
            .map(|&d| Family::with_step(&p, &(p.t() / d), &ctx).unwrap())
            .collect();
        let reports = collect(&ctx, |rep| order(&fams, &ctx, rep).unwrap());
        assert_eq!(reports.len(), Flow::ALL.len());
        for r in &reports {
            assert_eq!(r.status, Status::Pass, "{}", r.notes);
        }
        assert!(find(&reports, "toda-order", reports[0].n).notes.contains("orders"));
    }
}
