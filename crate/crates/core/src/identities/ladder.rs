//! Ladder relations and the compatibility conditions on `A_n(z)`, `B_n(z)`
//! at sample points off the support.

use alloc::vec::Vec;

use crate::auxiliary::{an_bn_eval, LadderIntegrals};
use crate::error::Result;
use crate::ortho::poly_eval;
use crate::pipeline::Pipeline;
use crate::real::{Complex, Real};
use crate::weight::v_prime_eval;

use super::{normalized_residual_complex, Reporter};

/// Keeps the worst residual over the sample points.
struct Worst<'z> {
    value: Option<(Real, &'z Complex)>,
}

impl<'z> Worst<'z> {
    fn new() -> Self {
        Worst { value: None }
    }

    fn offer(&mut self, r: Real, z: &'z Complex) {
        if self.value.as_ref().map_or(true, |(w, _)| r > *w) {
            self.value = Some((r, z));
        }
    }

    fn report(self, rep: &mut Reporter, name: &'static str, n: usize, t: &Real) {
        if let Some((r, z)) = self.value {
            rep.residual(name, n, t, r).z = Some(z.clone());
        }
    }
}

pub fn check(p: &Pipeline, ints: Option<&LadderIntegrals>, zs: &[Complex], rep: &mut Reporter) -> Result<()> {
    let sys = &p.ortho;
    let aux = &p.aux;
    let t = p.t();
    let floor = rep.floor().clone();
    let res = |terms: &[Complex]| normalized_residual_complex(terms, &floor);

    for n in 0..=p.n_max {
        let mut raising = Worst::new();
        let mut lowering = Worst::new();
        let mut sum = Worst::new();
        let mut diff = Worst::new();
        let mut quad = Worst::new();
        let mut integrals = Worst::new();
        for (iz, z) in zs.iter().enumerate() {
            let v = v_prime_eval(&p.params, z)?;
            let (a_n, b_n) = an_bn_eval(aux, n, z)?;
            let (a_n1, b_n1) = an_bn_eval(aux, n + 1, z)?;
            let (pn, dpn) = poly_eval(sys, n, z)?;
            let zn = z - &sys.alpha_rec[n];

            sum.offer(res(&[b_n1.clone(), b_n.clone(), -(&zn * &a_n), v.clone()]), z);

            let mut terms = Vec::with_capacity(5);
            terms.push(Complex::from_real(Real::one(64)));
            terms.push(&zn * &b_n1);
            terms.push(-(&zn * &b_n));
            terms.push(-(&a_n1 * &sys.beta_rec[n + 1]));
            if n > 0 {
                let (a_m, _) = an_bn_eval(aux, n - 1, z)?;
                terms.push(&a_m * &sys.beta_rec[n]);
            }
            diff.offer(res(&terms), z);

            if n > 0 {
                let (pm, dpm) = poly_eval(sys, n - 1, z)?;
                let (a_m, _) = an_bn_eval(aux, n - 1, z)?;
                let bn = &sys.beta_rec[n];
                raising.offer(res(&[dpn.clone(), &b_n * &pn, -(&(&a_n * &pm) * bn)]), z);
                lowering.offer(res(&[dpm, -(&b_n * &pm), -(&v * &pm), &a_m * &pn]), z);

                let mut terms = Vec::with_capacity(n + 3);
                terms.push(&b_n * &b_n);
                terms.push(&v * &b_n);
                for j in 0..n {
                    terms.push(an_bn_eval(aux, j, z)?.0);
                }
                terms.push(-(&(&a_n * &a_m) * bn));
                quad.offer(res(&terms), z);
            }

            if let Some(ints) = ints {
                if iz < 2 {
                    let (ao, bo) = ints.an_bn(n, z)?;
                    let num = (&a_n - &ao).abs() + (&b_n - &bo).abs();
                    let den = a_n.abs() + ao.abs() + b_n.abs() + bo.abs() + &floor;
                    integrals.offer(num / den, z);
                }
            }
        }
        raising.report(rep, "ladder-raising", n, t);
        lowering.report(rep, "ladder-lowering", n, t);
        sum.report(rep, "compat-sum", n, t);
        diff.report(rep, "compat-difference", n, t);
        quad.report(rep, "compat-quadratic", n, t);
        integrals.report(rep, "ladder-integrals", n, t);
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
    fn hold_off_the_support() {
        let (p, ctx) = pipeline(1.0, 1.0, 1.0, 4, 256);
        let ints = LadderIntegrals::compute(&p.ortho, &ctx).unwrap();
        let zs = sample_points(8, 3, 256);
        let reports = collect(&ctx, |rep| check(&p, Some(&ints), &zs, rep).unwrap());
        all_below(&reports, 1e-40);
        assert!(zs.iter().all(|z| {
            let r = (&z.re - &Real::ratio(1, 2, 64)).square() + z.im.square();
            r >= Real::from_f64(2.25, 64) && r <= Real::from_f64(9.0, 64)
        }));
    }

    #[test]
    fn b0_vanishes() {
        let (p, _) = pipeline(1.5, 0.5, 2.0, 1, 192);
        for z in sample_points(4, 11, 192) {
            assert!(an_bn_eval(&p.aux, 0, &z).unwrap().1.is_zero());
        }
    }

    #[test]
    fn wrong_big_r_breaks_compatibility() {
        let (mut p, ctx) = pipeline(1.0, 1.0, 1.0, 3, 256);
        p.aux.big_r[2] += &Real::from_f64(1e-20, 64);
        let zs = sample_points(8, 3, 256);
        let reports = collect(&ctx, |rep| check(&p, None, &zs, rep).unwrap());
        assert_eq!(find(&reports, "compat-sum", 2).status, Status::Fail);
        assert_eq!(find(&reports, "ladder-raising", 2).status, Status::Fail);
        assert_eq!(find(&reports, "compat-sum", 0).status, Status::Pass);
    }
}
