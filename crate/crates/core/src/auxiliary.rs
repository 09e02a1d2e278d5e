//! Auxiliary integrals `R_n, R*_n, r_n, r*_n`, the ladder coefficients
//! `A_n(z), B_n(z)` they parametrize, and `H_n` with its exact `t`-derivative.
//!
//! With `P_n` the monic polynomials and `h_n` their norms:
//!
//! * `R_n  = beta/h_n     int P_n^2 w dy/(1-y)`
//! * `R*_n = t/h_n        int P_n^2 w dy/y`
//! * `r_n  = beta/h_(n-1) int P_(n-1) P_n w dy/(1-y)`
//! * `r*_n = t/h_(n-1)    int P_(n-1) P_n w dy/y`
//!
//! Each is a contraction of polynomial coefficients against shifted moments.

use alloc::vec::Vec;

use crate::error::{LabError, Result};
use crate::moments::MomentTable;
use crate::ortho::{bilinear, poly_values_real, OrthoSystem};
use crate::precision::{Interval, PrecisionCtx, Target};
use crate::real::{Complex, Real};
use crate::weight::{Shift, WeightParams};

/// Auxiliary quantities for rows `n = 0..=n_max + 1`; `big_h` has one more
/// entry so that `H_(n+1)` exists for every row.
#[derive(Clone, Debug)]
pub struct AuxSet {
    pub params: WeightParams,
    pub n_max: usize,
    pub big_r: Vec<Real>,
    pub big_r_star: Vec<Real>,
    pub r: Vec<Real>,
    pub r_star: Vec<Real>,
    /// `H_n = -sum_(j<n) R*_j`.
    pub big_h: Vec<Real>,
    /// `H_n' = -n + (2n+alpha+beta) r*_n / t`; empty at `t = 0`.
    pub big_h_prime: Vec<Real>,
    /// `S_n = R_n / (2n+1+alpha+beta)`.
    pub s: Vec<Real>,
}

fn moments_from(table: &MomentTable, k0: i64, len: usize) -> Result<Vec<Real>> {
    (0..len as i64).map(|i| table.at(k0 + i).cloned()).collect()
}

fn find(tables: &[MomentTable], shift: Shift) -> Result<&MomentTable> {
    tables
        .iter()
        .find(|t| t.shift == shift)
        .ok_or_else(|| LabError::Missing(alloc::format!("moment table for shift {shift}")))
}

/// Fills every row of [`AuxSet`] from the polynomial coefficients and the
/// unshifted and `(0,-1)` moment tables.
pub fn aux_compute(sys: &OrthoSystem, tables: &[MomentTable], ctx: &PrecisionCtx) -> Result<AuxSet> {
    let p = sys.params.with_bits(ctx.bits());
    let rows = sys.degree_cap() + 1;
    let len = 2 * rows - 1;
    let t_zero = p.t.is_zero();
    let shifted = moments_from(find(tables, Shift::BETA_DOWN)?, 0, len)?;
    let inv_y = if t_zero {
        Vec::new()
    } else {
        moments_from(find(tables, Shift::NONE)?, -1, len)?
    };
    let zero = ctx.zero();
    let mut big_r = Vec::with_capacity(rows);
    let mut big_r_star = Vec::with_capacity(rows);
    let mut r = Vec::with_capacity(rows);
    let mut r_star = Vec::with_capacity(rows);
    for n in 0..rows {
        let c = &sys.coeffs[n];
        big_r.push(&p.beta * bilinear(c, c, &shifted, 0) / &sys.h[n]);
        big_r_star.push(if t_zero {
            zero.clone()
        } else {
            &p.t * bilinear(c, c, &inv_y, 0) / &sys.h[n]
        });
        if n == 0 {
            r.push(zero.clone());
            r_star.push(zero.clone());
            continue;
        }
        let cm = &sys.coeffs[n - 1];
        r.push(&p.beta * bilinear(cm, c, &shifted, 0) / &sys.h[n - 1]);
        r_star.push(if t_zero {
            zero.clone()
        } else {
            &p.t * bilinear(cm, c, &inv_y, 0) / &sys.h[n - 1]
        });
    }
    let mut big_h = Vec::with_capacity(rows + 1);
    big_h.push(zero.clone());
    for rs in &big_r_star {
        let last = big_h.last().expect("nonempty").clone();
        big_h.push(last - rs);
    }
    let big_h_prime = if t_zero {
        Vec::new()
    } else {
        (0..rows)
            .map(|n| {
                let c = &p.alpha + &p.beta + 2 * n as i64;
                c * &r_star[n] / &p.t - n as i64
            })
            .collect()
    };
    let s = big_r
        .iter()
        .enumerate()
        .map(|(n, rn)| rn / (&p.alpha + &p.beta + (2 * n as i64 + 1)))
        .collect();
    Ok(AuxSet {
        params: p,
        n_max: sys.n_max,
        big_r,
        big_r_star,
        r,
        r_star,
        big_h,
        big_h_prime,
        s,
    })
}

impl AuxSet {
    pub fn rows(&self) -> usize {
        self.big_r.len()
    }

    pub fn check_row(&self, n: usize) -> Result<()> {
        if n >= self.rows() {
            return Err(LabError::Missing(alloc::format!(
                "auxiliary row {n}; set ends at {}",
                self.rows() - 1
            )));
        }
        Ok(())
    }
}

/// `A_n(z) = R*_n/z^2 + R_n/z - R_n/(z-1)` and
/// `B_n(z) = r*_n/z^2 - (n - r_n)/z - r_n/(z-1)`.
pub fn an_bn_eval(aux: &AuxSet, n: usize, z: &Complex) -> Result<(Complex, Complex)> {
    aux.check_row(n)?;
    let zm1 = z - &Real::one(64);
    if z.is_zero() || zm1.is_zero() {
        return Err(LabError::Domain(alloc::format!("A_n, B_n at the pole z = {z}")));
    }
    let zi = z.recip();
    let zi2 = &zi * &zi;
    let wi = zm1.recip();
    let a = &(&zi2.scale(&aux.big_r_star[n]) + &zi.scale(&aux.big_r[n])) - &wi.scale(&aux.big_r[n]);
    let n_minus_r = -(&aux.r[n] - n as i64);
    let b = &(&zi2.scale(&aux.r_star[n]) - &zi.scale(&n_minus_r)) - &wi.scale(&aux.r[n]);
    Ok((a, b))
}

/// The real integrals behind the defining formulas of `A_n(z)` and `B_n(z)`,
/// for every degree of a system, from one vector quadrature.
///
/// The divided difference `(v'(z) - v'(y))/(z - y)` splits into
/// `t/(z^2 y) + (alpha y + t)/(z y^2) + beta/((z-1)(y-1))`, so each ladder
/// coefficient is three real integrals combined with complex factors.
#[derive(Clone, Debug)]
pub struct LadderIntegrals {
    params: WeightParams,
    /// Per degree: `P_n^2 w` against `1/y`, `(alpha + t/y)/y`, `1/(y-1)`.
    pub square: Vec<[Real; 3]>,
    /// Per degree: `P_(n-1) P_n w` against the same three kernels (zero at
    /// `n = 0`).
    pub cross: Vec<[Real; 3]>,
    /// Per degree: `int P_(n-1) P_n w`, zero by orthogonality.
    pub overlap: Vec<Real>,
    h: Vec<Real>,
}

impl LadderIntegrals {
    pub fn compute(sys: &OrthoSystem, ctx: &PrecisionCtx) -> Result<Self> {
        let p = sys.params.with_bits(ctx.bits());
        let cap = sys.degree_cap();
        let per = 7;
        let q = ctx.quad_target();
        let mut goals = Vec::with_capacity(per * (cap + 1));
        for n in 0..=cap {
            let sq = &q * &sys.h[n];
            let cr = if n == 0 { sq.clone() } else { &q * (&sys.h[n] * &sys.h[n - 1]).sqrt() };
            goals.extend([sq.clone(), sq.clone(), sq, cr.clone(), cr.clone(), cr.clone(), cr]);
        }
        let ints = ctx.de_quad_vec(Interval::Unit, per * (cap + 1), &Target::Componentwise(goals), |y, out| {
            let w = ctx.exp(&p.ln_weight_at(y));
            if w.is_zero() {
                return;
            }
            let Ok(vals) = poly_values_real(sys, cap, &y.x) else {
                return;
            };
            let g1 = y.recip_x.clone();
            let g2 = (&p.alpha + &p.t * &y.recip_x) * &y.recip_x;
            let g3 = -y.complement.recip();
            for n in 0..=cap {
                let o = &mut out[per * n..per * (n + 1)];
                let aa = vals[n].square() * &w;
                o[0] = &aa * &g1;
                o[1] = &aa * &g2;
                o[2] = &aa * &g3;
                if n > 0 {
                    let bb = &vals[n - 1] * &vals[n] * &w;
                    o[3] = &bb * &g1;
                    o[4] = &bb * &g2;
                    o[5] = &bb * &g3;
                    o[6] = bb;
                }
            }
        })?;
        let mut square = Vec::with_capacity(cap + 1);
        let mut cross = Vec::with_capacity(cap + 1);
        let mut overlap = Vec::with_capacity(cap + 1);
        for n in 0..=cap {
            let c = &ints[per * n..per * (n + 1)];
            square.push([c[0].value.clone(), c[1].value.clone(), c[2].value.clone()]);
            cross.push([c[3].value.clone(), c[4].value.clone(), c[5].value.clone()]);
            overlap.push(c[6].value.clone());
        }
        Ok(LadderIntegrals {
            params: p,
            square,
            cross,
            overlap,
            h: sys.h.clone(),
        })
    }

    pub fn degree_cap(&self) -> usize {
        self.square.len() - 1
    }

    /// `(A_n(z), B_n(z))` from the integrals.
    pub fn an_bn(&self, n: usize, z: &Complex) -> Result<(Complex, Complex)> {
        if n > self.degree_cap() {
            return Err(LabError::Missing(alloc::format!("ladder integrals of degree {n}")));
        }
        let zm1 = z - &Real::one(64);
        if z.im.is_zero() && !z.re.is_negative() && !zm1.re.is_positive() {
            return Err(LabError::Domain(alloc::format!(
                "ladder integrals at z = {z} on the support [0, 1]"
            )));
        }
        let zi = z.recip();
        let c1 = (&zi * &zi).scale(&self.params.t);
        let c3 = zm1.recip().scale(&self.params.beta);
        let combine = |v: &[Real; 3], h: &Real| {
            let s = &(&c1.scale(&v[0]) + &zi.scale(&v[1])) + &c3.scale(&v[2]);
            &s / h
        };
        let a = combine(&self.square[n], &self.h[n]);
        let b = if n == 0 {
            Complex::from_real(Real::zero(z.bits()))
        } else {
            combine(&self.cross[n], &self.h[n - 1])
        };
        Ok((a, b))
    }
}

/// `A_n(z)` and `B_n(z)` from their defining integrals
/// `1/h int (v'(z) - v'(y))/(z - y) P P w dy`, evaluated by quadrature.
pub fn an_bn_oracle(sys: &OrthoSystem, n: usize, z: &Complex, ctx: &PrecisionCtx) -> Result<(Complex, Complex)> {
    if n > sys.degree_cap() {
        return Err(LabError::Missing(alloc::format!("polynomial of degree {n}")));
    }
    let zm1 = z - &Real::one(64);
    if z.im.is_zero() && !z.re.is_negative() && !zm1.re.is_positive() {
        return Err(LabError::Domain(alloc::format!(
            "ladder oracle at z = {z} on the support [0, 1]"
        )));
    }
    LadderIntegrals::compute(sys, ctx)?.an_bn(n, z)
}

/// `(H_n, H_n - n(n+alpha+beta), H_n')`; the derivative is absent at `t = 0`.
pub fn hn_from_aux(aux: &AuxSet, n: usize) -> Result<(Real, Real, Option<Real>)> {
    aux.check_row(n)?;
    let h = aux.big_h[n].clone();
    let nn = n as i64;
    let tilde = &h - (&aux.params.alpha + &aux.params.beta + nn) * nn;
    Ok((h, tilde, aux.big_h_prime.get(n).cloned()))
}

/// `alpha_n` and (for `n >= 1`) `beta_n` rebuilt from the auxiliaries:
///
/// * `alpha_n = [2(r*_n - r_n) + R_n - beta - t] / (2n+2+alpha+beta)`
/// * `beta_n = [-(r*_n - r_n)^2 - (beta+t) r_n + (t-alpha-2n) r*_n + n t]
///   / [1 - (2n+alpha+beta)^2]`
pub fn recurrence_from_aux(aux: &AuxSet, n: usize) -> Result<(Real, Option<Real>)> {
    aux.check_row(n)?;
    let p = &aux.params;
    let nn = n as i64;
    let d = &aux.r_star[n] - &aux.r[n];
    let alpha = (&d * 2 + &aux.big_r[n] - &p.beta - &p.t) / (&p.alpha + &p.beta + (2 * nn + 2));
    if n == 0 {
        return Ok((alpha, None));
    }
    let c = &p.alpha + &p.beta + 2 * nn;
    let num = -d.square() - (&p.beta + &p.t) * &aux.r[n]
        + (&p.t - &p.alpha - 2 * nn) * &aux.r_star[n]
        + &p.t * nn;
    let beta = num / (c.square() * -1 + 1);
    Ok((alpha, Some(beta)))
}
