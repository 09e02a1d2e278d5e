//! The orthogonal system itself: determinants, recurrence data, support
//! bounds, and orthogonality by direct quadrature.

use alloc::vec::Vec;

use crate::auxiliary::LadderIntegrals;
use crate::error::Result;
use crate::ortho::{hankel_det_oracle, poly_eval_coeffs};
use crate::pipeline::Pipeline;
use crate::precision::PrecisionCtx;
use crate::real::{Complex, Real};

use super::{normalized_residual_complex, Reporter};

pub fn check(p: &Pipeline, ladder: Option<&LadderIntegrals>, zs: &[Complex], ctx: &PrecisionCtx, rep: &mut Reporter) -> Result<()> {
    let sys = &p.ortho;
    let t = p.t();
    let cap = sys.degree_cap();

    for n in 0..=cap + 1 {
        let oracle = hankel_det_oracle(&p.moments[0], n, ctx)?;
        rep.residual("hankel-determinant", n, t, ((&oracle - &sys.d[n]) / &oracle).abs());
    }

    for n in 0..=p.n_max {
        let terms = [sys.alpha_rec[n].clone(), -&sys.p1[n], sys.p1[n + 1].clone()];
        rep.terms("alpha-from-p1", n, t, &terms);
    }
    let mut partial = Real::zero(ctx.bits());
    for n in 1..=cap {
        partial += &sys.alpha_rec[n - 1];
        rep.terms("alpha-sum-p1", n, t, &[partial.clone(), sys.p1[n].clone()]);
    }

    for n in 0..=p.n_max {
        let mut worst: Option<(Real, &Complex)> = None;
        for z in zs {
            let pn = poly_eval_coeffs(sys, n, z)?;
            let mut terms = Vec::with_capacity(4);
            terms.push(z * &pn);
            terms.push(-poly_eval_coeffs(sys, n + 1, z)?);
            terms.push(-(&pn * &sys.alpha_rec[n]));
            if n > 0 {
                terms.push(-(poly_eval_coeffs(sys, n - 1, z)? * &sys.beta_rec[n]));
            }
            let r = normalized_residual_complex(&terms, rep.floor());
            if worst.as_ref().map_or(true, |(w, _)| r > *w) {
                worst = Some((r, z));
            }
        }
        if let Some((r, z)) = worst {
            rep.residual("three-term-recurrence", n, t, r).z = Some(z.clone());
        }
    }

    let quarter = Real::ratio(1, 4, 64);
    for n in 0..=p.n_max {
        let a = &sys.alpha_rec[n];
        let mut why = alloc::string::String::new();
        if !(a.is_positive() && *a < Real::one(64)) {
            why = alloc::format!("alpha_{n} = {} outside (0, 1)", a.to_sci_string(6));
        }
        if n > 0 {
            let b = &sys.beta_rec[n];
            if !(b.is_positive() && *b <= quarter) {
                why = alloc::format!("beta_{n} = {} outside (0, 1/4]", b.to_sci_string(6));
            }
        }
        let flag = if why.is_empty() { Real::zero(64) } else { Real::one(64) };
        let r = rep.residual("support-bounds", n, t, flag);
        if !why.is_empty() {
            r.note(&why);
        }
    }

    if let Some(ints) = ladder {
        for n in 1..=cap {
            let scale = (&sys.h[n] * &sys.h[n - 1]).sqrt();
            rep.residual("orthogonality", n, t, (&ints.overlap[n] / scale).abs());
        }
        for n in 0..=cap {
            let terms = [ints.square[n][1].clone(), &p.params.beta * &ints.square[n][2]];
            rep.terms("integration-by-parts", n, t, &terms);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::sample_points;
    use crate::identities::testing::{all_below, collect, find, pipeline};
    use crate::identities::Status;

    #[test]
    fn hold_with_direct_quadrature() {
        let (p, ctx) = pipeline(1.0, 1.0, 1.0, 4, 256);
        let ints = LadderIntegrals::compute(&p.ortho, &ctx).unwrap();
        let zs = sample_points(16, 7, 256);
        let reports = collect(&ctx, |rep| check(&p, Some(&ints), &zs, &ctx, rep).unwrap());
        all_below(&reports, 1e-40);
        assert!(reports.iter().any(|r| r.identity == "orthogonality" && r.n == 2));
        assert!(find(&reports, "three-term-recurrence", 3).z.is_some());
    }

    #[test]
    fn wrong_recurrence_coefficient_fails() {
        let (mut p, ctx) = pipeline(1.5, 0.5, 2.0, 3, 256);
        p.ortho.beta_rec[2] += &Real::from_f64(1e-25, 64);
        let zs = sample_points(16, 7, 256);
        let reports = collect(&ctx, |rep| check(&p, None, &zs, &ctx, rep).unwrap());
        assert_eq!(find(&reports, "three-term-recurrence", 2).status, Status::Fail);
        assert_eq!(find(&reports, "three-term-recurrence", 1).status, Status::Pass);
    }

    #[test]
    fn out_of_range_coefficient_is_flagged() {
        let (mut p, ctx) = pipeline(1.0, 1.0, 0.5, 2, 192);
        p.ortho.beta_rec[1] = Real::ratio(1, 2, 64);
        let reports = collect(&ctx, |rep| check(&p, None, &[], &ctx, rep).unwrap());
        let r = find(&reports, "support-bounds", 1);
        assert_eq!(r.status, Status::Fail);
        assert!(r.notes.contains("beta_1"));
    }
}
