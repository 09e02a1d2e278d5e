//! Closed forms at `t = 0`, where the weight is a Jacobi weight on `[0, 1]`.

use alloc::format;

use crate::ortho::OrthoSystem;
use crate::pipeline::Pipeline;
use crate::real::Real;

use super::Reporter;

/// Degree at which the approach to the classical limit is checked.
pub const LIMIT_DEGREE: usize = 200;

pub fn alpha_closed(alpha: &Real, beta: &Real, n: usize) -> Real {
    let ni = n as i64;
    let ab = alpha + beta;
    let num = &ab * (2 * ni) + 2 * ni * ni + 2 * ni + (alpha + 1i64) * &ab;
    let c = &ab + 2 * ni;
    num / (&c * (&c + 2i64))
}

pub fn beta_closed(alpha: &Real, beta: &Real, n: usize) -> Real {
    let ni = n as i64;
    let ab = alpha + beta;
    let c = &ab + 2 * ni;
    let c2 = &c * &c;
    (alpha + ni) * ni * (beta + ni) * (&ab + ni) / (&c2 * (&c2 - 1i64))
}

pub fn big_r_closed(alpha: &Real, beta: &Real, n: usize) -> Real {
    alpha + beta + (2 * n as i64 + 1)
}

pub fn r_closed(alpha: &Real, beta: &Real, n: usize) -> Real {
    let ni = n as i64;
    (alpha + ni) * ni / (alpha + beta + 2 * ni)
}

fn relative(x: &Real, exact: &Real) -> Real {
    ((x - exact) / exact).abs()
}

/// Distances of `alpha_n` and `beta_n` from the classical limits 1/2, 1/16.
fn distances(alpha_n: &Real, beta_n: &Real) -> (Real, Real) {
    ((alpha_n - &Real::ratio(1, 2, 64)).abs(), (beta_n - &Real::ratio(1, 16, 64)).abs())
}

pub fn check(p: &Pipeline, rep: &mut Reporter) {
    let t = p.t();
    if !t.is_zero() {
        return;
    }
    let (al, be) = (&p.params.alpha, &p.params.beta);
    let sys = &p.ortho;
    for n in 0..=p.n_max {
        rep.residual("t0-alpha", n, t, relative(&sys.alpha_rec[n], &alpha_closed(al, be, n)));
        rep.residual("t0-big-r", n, t, relative(&p.aux.big_r[n], &big_r_closed(al, be, n)));
        if n > 0 {
            rep.residual("t0-beta", n, t, relative(&sys.beta_rec[n], &beta_closed(al, be, n)));
            rep.residual("t0-r", n, t, relative(&p.aux.r[n], &r_closed(al, be, n)));
        }
    }

    // Largest relative increase of either distance between consecutive n;
    // changes below the noise level count as no change.
    let noise = rep.floor().sqrt();
    let mut worst = Real::zero(64);
    let mut at = 1;
    for n in 1..p.n_max {
        let (da0, db0) = distances(&sys.alpha_rec[n], &sys.beta_rec[n]);
        let (da1, db1) = distances(&sys.alpha_rec[n + 1], &sys.beta_rec[n + 1]);
        for (d0, d1) in [(da0, da1), (db0, db1)] {
            if d1 <= &d0 + &noise {
                continue;
            }
            let rise = (&d1 - &d0) / (&d0 + &noise);
            if rise > worst {
                worst = rise;
                at = n;
            }
        }
    }
    rep.residual("t0-classical-trend", at, t, worst);
}

/// Distance from the classical limits at `n`, from a computed system when
/// one is given and from the closed forms otherwise.
pub fn classical_limit(sys: Option<&OrthoSystem>, alpha: &Real, beta: &Real, n: usize, rep: &mut Reporter) {
    let (a, b, source) = match sys {
        Some(s) if s.n_max >= n => (s.alpha_rec[n].clone(), s.beta_rec[n].clone(), "computed system"),
        _ => (alpha_closed(alpha, beta, n), beta_closed(alpha, beta, n), "closed forms"),
    };
    let (da, db) = distances(&a, &b);
    let zero = Real::zero(64);
    rep.residual("t0-classical-limit", n, &zero, da.clone().max(db.clone())).note(&format!(
        "{source}: |alpha_n - 1/2| = {}, |beta_n - 1/16| = {}",
        da.to_sci_string(4),
        db.to_sci_string(4)
    ));
}
