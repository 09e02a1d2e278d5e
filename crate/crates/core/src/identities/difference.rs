//! Difference equations linking consecutive rows of the auxiliary quantities.

use crate::pipeline::Pipeline;
use crate::real::Real;

use super::Reporter;

pub fn check(p: &Pipeline, rep: &mut Reporter) {
    let sys = &p.ortho;
    let a = &p.aux;
    let t = p.t();
    let (al, be) = (&p.params.alpha, &p.params.beta);
    let cap = sys.degree_cap();
    let (rs, bigrs, r, bigr) = (&a.r_star, &a.big_r_star, &a.r, &a.big_r);

    for n in 0..=p.n_max {
        let terms = [rs[n + 1].clone(), rs[n].clone(), -t, &sys.alpha_rec[n] * &bigrs[n]];
        rep.terms("rstar-step", n, t, &terms);

        let terms = [
            r[n + 1].clone(),
            r[n].clone(),
            -((Real::one(64) - &sys.alpha_rec[n]) * &bigr[n]),
            be.clone(),
        ];
        rep.terms("r-step", n, t, &terms);

        let terms = [
            -&r[n + 1],
            r[n].clone(),
            rs[n + 1].clone(),
            -&rs[n],
            sys.alpha_rec[n].clone(),
        ];
        rep.terms("r-difference", n, t, &terms);
    }

    let mut partial = Real::zero(t.bits());
    for n in 0..=cap {
        let k = al + be + (2 * n as i64 + 1);
        rep.terms("big-r-gap", n, t, &[bigrs[n].clone(), -&bigr[n], k]);

        let c = al + be + (2 * n as i64);
        let ni = n as i64;
        let terms = [
            partial.clone(),
            -(t * ni),
            al * ni,
            Real::from_i64(ni * ni, 64),
            &c * &rs[n],
            -(&c * &r[n]),
        ];
        rep.terms("rstar-partial-sum", n, t, &terms);
        partial += &bigrs[n];

        rep.terms("p1-from-aux", n, t, &[rs[n].clone(), -&r[n], -&sys.p1[n]]);
    }

    for n in 1..=p.n_max {
        let bn = &sys.beta_rec[n];
        let terms = [&rs[n] * &rs[n], -(t * &rs[n]), -(bn * &bigrs[n] * &bigrs[n - 1])];
        rep.terms("rstar-quadratic", n, t, &terms);

        let terms = [&r[n] * &r[n], be * &r[n], -(bn * &bigr[n] * &bigr[n - 1])];
        rep.terms("r-quadratic", n, t, &terms);

        let terms = [
            (t - &(&rs[n] * 2)) * (Real::from_i64(n as i64, 64) - &r[n]),
            -(al * &rs[n]),
            -(bn * &bigrs[n] * &bigr[n - 1]),
            -(bn * &bigrs[n - 1] * &bigr[n]),
        ];
        rep.terms("mixed-quadratic", n, t, &terms);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::testing::{all_below, collect, find, pipeline};
    use crate::identities::Status;

    #[test]
    fn hold_at_unit_parameters() {
        let (p, ctx) = pipeline(1.0, 1.0, 1.0, 10, 256);
        all_below(&collect(&ctx, |rep| check(&p, rep)), 1e-40);
    }

    #[test]
    fn row_zero_reduces_to_first_step() {
        let (p, ctx) = pipeline(1.0, 1.0, 1.0, 2, 256);
        let a = &p.aux;
        assert!(a.r_star[0].is_zero() && a.r[0].is_zero());
        let e = &a.r_star[1] - &(p.t() - &(&p.ortho.alpha_rec[0] * &a.big_r_star[0]));
        assert!(e.abs() < Real::from_f64(1e-60, 64));
        let reports = collect(&ctx, |rep| check(&p, rep));
        assert_eq!(find(&reports, "rstar-step", 0).status, Status::Pass);
    }

    #[test]
    fn partial_sum_at_t0_matches_closed_form() {
        let (p, ctx) = pipeline(1.5, 0.5, 0.0, 6, 256);
        all_below(&collect(&ctx, |rep| check(&p, rep)), 1e-40);
        for n in 0..=6 {
            let expect = crate::identities::t0::r_closed(&p.params.alpha, &p.params.beta, n);
            assert!((&p.aux.r[n] - &expect).abs() < Real::from_f64(1e-60, 64));
        }
    }

    #[test]
    fn perturbation_is_detected() {
        let (mut p, ctx) = pipeline(1.0, 1.0, 1.0, 4, 256);
        p.aux.r_star[2] += &Real::from_f64(1e-30, 64);
        let reports = collect(&ctx, |rep| check(&p, rep));
        assert_eq!(find(&reports, "rstar-step", 1).status, Status::Fail);
        assert_eq!(find(&reports, "rstar-step", 2).status, Status::Fail);
        assert_eq!(find(&reports, "rstar-step", 3).status, Status::Pass);
        assert_eq!(find(&reports, "p1-from-aux", 2).status, Status::Fail);
    }
}
