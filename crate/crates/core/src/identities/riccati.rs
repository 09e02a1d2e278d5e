//! Riccati equations for `R_n`, the quadratic relations among `R_n`, `r_n`,
//! `r*_n`, the second-order equation for `R_n` and its Painlevé V form.

use alloc::vec::Vec;

use crate::error::Result;
use crate::pipeline::Family;
use crate::precision::DerivOrder;
use crate::real::Real;

use super::Reporter;

/// Relative size below which a 2x2 determinant counts as singular.
const SINGULAR: f64 = 1e-12;

struct Row<'a> {
    t: &'a Real,
    alpha: &'a Real,
    beta: &'a Real,
    n: i64,
    k: Real,
    big_r: &'a Real,
    big_r_prime: &'a Real,
}

impl Row<'_> {
    /// `(r* - r)^2 + (2n+alpha-t) r* + (beta+t) r - n t`.
    fn q(&self, r: &Real, rs: &Real) -> Real {
        let d = rs - r;
        &d * &d + (self.alpha - self.t + 2 * self.n) * rs + (self.beta + self.t) * r - self.t * self.n
    }

    /// `2 r^2 + (t + 2 beta - 2 r*) r + (2n+alpha) r* - n t`.
    fn e(&self, r: &Real, rs: &Real) -> Real {
        r * r * 2i64 + (self.t + self.beta * 2i64 - rs * 2i64) * r + (self.alpha + 2 * self.n) * rs
            - self.t * self.n
    }

    /// `r*` implied by the Riccati equation for `R`.
    fn r_star_of(&self, r: &Real) -> Real {
        let big_r = self.big_r;
        (self.t * self.big_r_prime - &self.k * &(r * 2i64 - big_r + self.beta)) / (big_r * 2i64) + r
            - (big_r - self.beta - self.t) / 2i64
    }

    /// Left sides of the two representations of `R`, with `r*` eliminated.
    fn eliminated(&self, r: &Real, r_prime: &Real) -> (Real, Real) {
        let rs = self.r_star_of(r);
        let e = self.e(r, &rs);
        let tr = self.t * r_prime;
        let f = self.big_r * &self.q(r, &rs) * 2i64 - &self.k * &(&e - &tr);
        let g = &self.k * &((self.beta + r) * r) * 2i64 - self.big_r * &(&e + &tr);
        (f, g)
    }
}

pub fn check(fam: &Family, rep: &mut Reporter) -> Result<()> {
    let p = fam.center();
    let t = p.t();
    let a = &p.aux;
    let (al, be) = (&p.params.alpha, &p.params.beta);
    let singular = Real::from_f64(SINGULAR, 64);

    for n in 0..=p.n_max {
        let ni = n as i64;
        let c = al + be + 2 * ni;
        let k = &c + 1i64;
        let big_r = &a.big_r[n];
        let (r, rs) = (&a.r[n], &a.r_star[n]);
        let d1 = fam.derivative(DerivOrder::First, |m| Ok(m.aux.big_r[n].clone()))?;
        let d2 = fam.derivative(DerivOrder::Second, |m| Ok(m.aux.big_r[n].clone()))?;
        let (rp, rpp) = (&d1.value, &d2.value);
        let row = Row { t, alpha: al, beta: be, n: ni, k: k.clone(), big_r, big_r_prime: rp };
        let lin = r * 2i64 - big_r + be;

        let terms = [
            t * rp,
            -(big_r * &(rs - r) * 2i64),
            -(&k * &lin),
            -((big_r - be - t) * big_r),
        ];
        rep.stencil_terms("riccati-big-r", n, t, &terms, &(t * &d1.error_proxy));

        let terms = [
            rs.clone(),
            -(t * rp / (big_r * 2i64)),
            &k * &lin / (big_r * 2i64),
            -r,
            (big_r - be - t) / 2i64,
        ];
        let proxy = t * &d1.error_proxy / (big_r * 2i64).abs();
        rep.stencil_terms("rstar-from-riccati", n, t, &terms, &proxy);

        // The second-order equation for R_n factors; the first factor is the
        // Riccati equation of a neighbouring solution and must not vanish.
        let f1 = [&c * &k, -(big_r * (al * 2i64 + be * 2i64 + (4 * ni + 1))), big_r * big_r, -(t * rp)];
        let f1_sum: Real = f1.iter().sum();
        let inverse = if f1_sum.is_zero() { Real::from_f64(f64::MAX, 64) } else { f1_sum.abs().recip() };
        let report = rep.residual("discarded-riccati-factor", n, t, inverse);
        report.note(&alloc::format!("first factor {}", f1_sum.to_sci_string(4)));
        if !report.passed() {
            report.inconclusive("the first factor is numerically small here");
        }

        let km = &k - big_r;
        let t2 = t * t;
        let b2 = be * be;
        let k2 = &k * &k;
        let c1 = -&t2 + al * t * 2i64 + &k2 * 3i64 - &b2;
        let c2 = -(&k * &(&t2 + al * t * 2i64 + &k2 - &b2 * 3i64));
        let r2 = big_r * big_r;
        let r3 = &r2 * big_r;
        let r4 = &r3 * big_r;
        let f2 = [
            &t2 * &km * big_r * rpp * 2i64,
            &t2 * (big_r * 3i64 - &k) * rp * rp,
            t * &km * big_r * rp * 2i64,
            &r4 * big_r,
            -(&k * &r4 * 3i64),
            &c1 * &r3,
            &c2 * &r2,
            -(&b2 * &k2 * big_r * 3i64),
            &b2 * &k2 * &k,
        ];
        let proxy = (&t2 * &km * big_r * 2i64).abs() * &d2.error_proxy
            + (&t2 * (big_r * 3i64 - &k) * rp * 2i64).abs() * &d1.error_proxy;
        rep.stencil_terms("two-ode-factor", n, t, &f2, &proxy);

        let f2_sum: Real = f2.iter().sum();
        let mut spread = Vec::with_capacity(f1.len() * f2.len() + 1);
        spread.push(-(&f1_sum * &f2_sum));
        for x in &f1 {
            for y in &f2 {
                spread.push(x * y);
            }
        }
        rep.terms("two-ode-product", n, t, &spread);

        let s = big_r / &k;
        let sp = rp / &k;
        let spp = rpp / &k;
        let sm1 = &s - 1i64;
        let sm1t2 = &sm1 * &sm1 / &t2;
        let terms = [
            spp.clone(),
            -((&s * 3i64 - 1i64) / (&s * &sm1 * 2i64) * &sp * &sp),
            &sp / t,
            -(&sm1t2 * &k2 / 2i64 * &s),
            &sm1t2 * &b2 / (&s * 2i64),
            -(al * &s / t),
            &s * (&s + 1i64) / (&sm1 * 2i64),
        ];
        let proxy = &d2.error_proxy / k.abs()
            + ((&s * 3i64 - 1i64) / (&s * &sm1) * &sp).abs() * &d1.error_proxy / k.abs();
        rep.stencil_terms("painleve-v", n, t, &terms, &proxy);

        if n == 0 {
            continue;
        }
        let rpr = fam.derivative(DerivOrder::First, |m| Ok(m.aux.r[n].clone()))?;
        let r_prime = &rpr.value;
        let q = row.q(r, rs);
        let e = row.e(r, rs);
        let rr = r * r + be * r;
        let tr = t * r_prime;

        let terms = [&k / big_r * &rr, big_r / &k * &q, -e.clone()];
        rep.terms("quadratic-big-r", n, t, &terms);

        let d = rs - r;
        let q2 = &d * &d - t * &d + be * r + (al + 2 * ni) * rs - t * ni;
        let one_m_c2 = Real::one(64) - &(&c * &c);
        let terms = [&one_m_c2 / big_r * &rr, &q2 * big_r, -e.clone(), &c * &tr];
        let proxy = (&c * t).abs() * &rpr.error_proxy;
        rep.stencil_terms("quadratic-big-r-flow", n, t, &terms, &proxy);

        let terms = [big_r * &q * 2i64, -(&k * &e), &k * &tr];
        let proxy = (&k * t).abs() * &rpr.error_proxy;
        rep.stencil_terms("big-r-representation", n, t, &terms, &proxy);

        let terms = [&k * &((be + r) * r) * 2i64, -(big_r * &e), -(big_r * &tr)];
        let proxy = (big_r * t).abs() * &rpr.error_proxy;
        rep.stencil_terms("big-r-inverse-representation", n, t, &terms, &proxy);

        // Both representations are affine in (r, r') once r* is eliminated.
        let zero = Real::zero(t.bits());
        let one = Real::one(t.bits());
        let (f0, g0) = row.eliminated(&zero, &zero);
        let (f1r, g1r) = row.eliminated(&one, &zero);
        let (f1p, g1p) = row.eliminated(&zero, &one);
        let (b1, b2c) = (&f1r - &f0, &g1r - &g0);
        let (c1, c2) = (&f1p - &f0, &g1p - &g0);
        let det = &b1 * &c2 - &b2c * &c1;
        let det_scale = (&b1 * &c2).abs() + (&b2c * &c1).abs();
        let r_solved = (-(&f0 * &c2) + &g0 * &c1) / &det;
        let rp_solved = (-(&b1 * &g0) + &b2c * &f0) / &det;
        let flat = det_scale.is_zero() || (det.abs() / &det_scale) < singular;

        let report = rep.terms("r-from-big-r", n, t, &[r.clone(), -r_solved]);
        if flat {
            report.inconclusive("the two representations are degenerate here");
        }
        let report = rep.stencil_terms("r-prime-from-big-r", n, t, &[r_prime.clone(), -rp_solved], &rpr.error_proxy);
        if flat {
            report.inconclusive("the two representations are degenerate here");
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
    fn riccati_system_at_unit_point() {
        let (p, ctx) = pipeline(1.0, 1.0, 1.0, 2, 256);
        let fam = Family::around(&p, &ctx).unwrap();
        let reports = collect(&ctx, |rep| check(&fam, rep).unwrap());
        let plain: Vec<_> = reports
            .iter()
            .filter(|r| r.identity != "discarded-riccati-factor")
            .cloned()
            .collect();
        all_below(&plain, 1e-18);
        assert!(find(&reports, "two-ode-factor", 2).residual < Real::from_f64(1e-12, 64));
        assert!(find(&reports, "painleve-v", 2).residual < Real::from_f64(1e-10, 64));
        let first = find(&reports, "discarded-riccati-factor", 2);
        assert_eq!(first.status, Status::Pass);
        assert!(first.residual < Real::from_f64(1e3, 64));
    }

    #[test]
    fn solved_r_tracks_perturbed_input() {
        let (mut p, ctx) = pipeline(1.5, 0.5, 2.0, 2, 256);
        p.aux.r[1] += &Real::from_f64(1e-15, 64);
        let mut fam = Family::around(&p, &ctx).unwrap();
        fam.members[2] = p;
        let reports = collect(&ctx, |rep| check(&fam, rep).unwrap());
        assert_eq!(find(&reports, "r-from-big-r", 1).status, Status::Fail);
        assert_eq!(find(&reports, "r-from-big-r", 2).status, Status::Pass);
    }
}
