//! Second-order equations in `t` for `H_n`, and the exact expressions of
//! `r_n`, `r*_n` and `H_n'` through `H_n`.

use crate::error::Result;
use crate::pipeline::Family;
use crate::precision::DerivOrder;
use crate::real::Real;

use super::Reporter;

pub fn check(fam: &Family, rep: &mut Reporter) -> Result<()> {
    let p = fam.center();
    let t = p.t();
    let a = &p.aux;
    let (al, be) = (&p.params.alpha, &p.params.beta);
    let ab = al + be;
    let cap = p.ortho.degree_cap();

    for n in 0..=p.n_max {
        let ni = n as i64;
        let h = &a.big_h[n];
        let hp = &a.big_h_prime[n];
        let d2 = fam.derivative(DerivOrder::First, |m| Ok(m.aux.big_h_prime[n].clone()))?;
        let hpp = &d2.value;
        let th2 = t * hpp;
        let proxy = th2.abs() * t * &d2.error_proxy * 2i64;

        let base = (&ab + ni) * ni - h + (al + t) * hp;
        let terms = [
            &th2 * &th2,
            -(&base * &base),
            -(hp * (t * hp - h) * (be - hp) * 4i64),
        ];
        let r = rep.stencil_terms("sigma-ode", n, t, &terms, &proxy);
        if n == 0 {
            r.note("reduces to 0 = 0 at n = 0");
        }

        let ht = h - &((&ab + ni) * ni);
        let g = al + be * 2i64 + t;
        let bracket = &ht * 4i64 + &g * &g + (&ab + ni) * (4 * ni) - be * &ab * 4i64;
        let terms = [
            &th2 * &th2,
            t * hp * hp * hp * 4i64,
            -(hp * hp * &bracket),
            -(hp * (-(&g * &ht) - (&ab + ni) * be * (2 * ni)) * 2i64),
            -(&ht * &ht),
        ];
        let r = rep.stencil_terms("sigma-ode-shifted", n, t, &terms, &proxy);
        if n == 0 {
            r.note("reduces to 0 = 0 at n = 0");
        }
    }

    for n in 0..=cap {
        let ni = n as i64;
        let c = &ab + 2 * ni;
        let hp = &a.big_h_prime[n];
        let terms = [a.r_star[n].clone(), -((t * ni + t * hp) / &c)];
        rep.terms("rstar-from-h", n, t, &terms);
        let terms = [a.r[n].clone(), -(((al + ni) * ni + t * hp - &a.big_h[n]) / &c)];
        rep.terms("r-from-h", n, t, &terms);
        if n == 0 {
            continue;
        }
        let d = fam.derivative(DerivOrder::First, |m| Ok(m.aux.big_h[n].clone()))?;
        let terms = [d.value.clone(), Real::from_i64(ni, 64), -(&c * &a.r_star[n] / t)];
        rep.stencil_terms("h-prime-stencil", n, t, &terms, &d.error_proxy);
    }

    for n in 1..=p.n_max {
        let ni = n as i64;
        let c = &ab + 2 * ni;
        let r = &a.r[n];
        let rs = &a.r_star[n];
        let d = fam.derivative(DerivOrder::First, |m| Ok(m.aux.r[n].clone()))?;
        let tr = t * &d.value;
        let proxy = tr.abs() * t * &d.error_proxy * 2i64;
        let inner = -(&c * rs * rs * 2i64) + (al + be * 2i64 + 4 * ni) * t * rs - t * t * ni;
        let last = (al + 2 * ni) * rs - t * ni;
        let terms = [&tr * &tr, -(t * t * r * r), -(r * &inner * 2i64), -(&last * &last)];
        rep.stencil_terms("r-rstar-ode", n, t, &terms, &proxy);
    }
    Ok(())
}
