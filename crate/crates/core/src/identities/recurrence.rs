//! Recurrence coefficients and `H_n` recovered from the auxiliary quantities
//! and from `p1(n)`, including the discrete sigma form.

use alloc::vec::Vec;

use crate::pipeline::Pipeline;
use crate::real::Real;

use super::{normalized_residual, Reporter};

/// Below this relative size a denominator is treated as vanishing.
const SINGULAR: f64 = 1e-12;

fn relative_size(terms: &[Real]) -> Real {
    let sum: Real = terms.iter().sum();
    let scale: Real = terms.iter().map(|x| x.abs()).sum();
    if scale.is_zero() {
        scale
    } else {
        sum.abs() / scale
    }
}

pub fn check(p: &Pipeline, rep: &mut Reporter) {
    let sys = &p.ortho;
    let a = &p.aux;
    let t = p.t();
    let (al, be) = (&p.params.alpha, &p.params.beta);
    let cap = sys.degree_cap();
    let p1 = &sys.p1;
    let (rs, r, bigr, bigh) = (&a.r_star, &a.r, &a.big_r, &a.big_h);
    let c_of = |n: usize| al + be + (2 * n as i64);
    let singular = Real::from_f64(SINGULAR, 64);

    for n in 0..=p.n_max {
        let terms = [
            (al + be + (2 * n as i64 + 2)) * &sys.alpha_rec[n],
            -((&rs[n] - &r[n]) * 2),
            -&bigr[n],
            be.clone(),
            t.clone(),
        ];
        rep.terms("alpha-from-aux", n, t, &terms);
    }

    for n in 0..=cap {
        let c = c_of(n);
        let ni = n as i64;
        let terms = [bigh[n].clone(), -(&c * &p1[n]), -((al - t + ni) * ni)];
        rep.terms("h-from-p1", n, t, &terms);

        let terms = [bigr[n].clone(), -&bigh[n], bigh[n + 1].clone(), -(al + be + (2 * ni + 1))];
        rep.terms("big-r-from-h", n, t, &terms);

        if n == 0 {
            continue;
        }
        let one_m_c2 = Real::one(64) - &(&c * &c);
        let bn = &sys.beta_rec[n];
        let d = &rs[n] - &r[n];
        let terms = [
            &one_m_c2 * bn,
            &d * &d,
            (be + t) * &r[n],
            -((t - al - (2 * ni)) * &rs[n]),
            -(t * ni),
        ];
        rep.terms("beta-from-aux", n, t, &terms);

        let terms = [
            &c * &r[n],
            &p1[n] * &p1[n],
            (al - t + 2 * ni) * &p1[n],
            -(t * ni),
            &one_m_c2 * bn,
        ];
        rep.terms("r-from-p1", n, t, &terms);
    }

    for n in 1..=p.n_max {
        let c = c_of(n);
        let ni = n as i64;
        let bn = &sys.beta_rec[n];
        let x = &p1[n];
        let tb = t + be;
        let big_x = (-(x * x * x * 2i64) + (t * 3i64 - al + be * 2i64 - (2 * ni)) * x * x
            - (t * t - &(t * (-be + ni) * 2i64) - (al + 2 * ni) * be) * x
            - &tb * t * ni)
            / &c;
        let y = [
            (&c - 1i64) * (&c + 1i64),
            x * 2i64 / &c,
            (&c - 1i64) * (&c + 2i64) * &p1[n + 1],
            -((&c + 1i64) * (&c - 2i64) * &p1[n - 1]),
            -(&tb * (c.recip() + &c)),
        ];
        let mut terms: Vec<Real> = y.iter().map(|v| bn * v).collect();
        terms.push(-big_x);
        let rel = relative_size(&y);
        let rep_ = rep.terms("beta-from-p1", n, t, &terms);
        if rel < singular {
            rep_.inconclusive("denominator Y_n is numerically zero");
        }

        discrete_sigma(p, n, rep);
    }
}

fn discrete_sigma(p: &Pipeline, n: usize, rep: &mut Reporter) {
    let t = p.t();
    let (al, be) = (&p.params.alpha, &p.params.beta);
    let ni = n as i64;
    let c = al + be + (2 * ni);
    let ab = al + be;
    let tilde = |m: usize| &p.aux.big_h[m] - &((&ab + m as i64) * m as i64);
    let (hm, h0, hp) = (tilde(n - 1), tilde(n), tilde(n + 1));
    let tb = be + t;
    let w = &h0 + &(&tb * ni);
    let wc = &w / &c;
    let c2 = &c * &c;

    let z_terms = [
        (&c - 1i64) * (&c + 1i64),
        -((c.recip() + &c) * &tb),
        -((&c + 1i64) * (&hm + &(&tb * (ni - 1)))),
        &wc * 2i64 / &c,
        (&c - 1i64) * (&hp + &(&tb * (ni + 1))),
    ];
    let z_inner: Real = z_terms.iter().sum();
    let big_z = &c * &z_inner;
    let q = -(t * ni * &tb)
        + (al * be + be * (t * -1i64 + ni) * 2i64 + (t * -1i64 + 2 * ni) * t) * &wc
        + (-al + be * 2i64 - (2 * ni) + t * 3i64) * &wc * &wc
        - &wc * &wc * &wc * 2i64;
    let one_m_c2 = Real::one(64) - &c2;
    let qz = &q / &big_z;
    let zt = t * ni + (t - al - (2 * ni)) * &wc - &wc * &wc - &one_m_c2 * &qz;
    let ztc = &zt / &c;

    let mut terms = alloc::vec![
        t * ni,
        -((al + 2 * ni) * &wc),
        &ztc * (-(al + t + 2 * ni) + &wc * 2i64),
        &ztc * &ztc * 2i64,
    ];
    let rhs = [
        -(&h0 * &h0 * 2i64),
        &h0 * (&hp + 1i64) * 2i64,
        &hp * (&ab + (2 * ni - 1)),
        -(&hm * (&ab + (2 * ni + 1) - &h0 * 2i64 + &hp * 2i64)),
    ];
    terms.extend(rhs.iter().map(|v| -(v * &qz)));

    let floor = rep.floor().clone();
    let small_z = relative_size(&z_terms) < Real::from_f64(SINGULAR, 64);
    let res = normalized_residual(&terms, &floor);
    let r = rep.residual("discrete-sigma", n, t, res);
    if small_z {
        r.inconclusive("denominator Z_n is numerically zero");
    }
}
