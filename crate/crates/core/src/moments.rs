//! Moments `mu_k = int_0^1 x^k w(x) dx` of the weight and its shifted
//! variants, by quadrature, by the Kummer `U` integral, and (at `t = 0`) by
//! the Beta function.

use alloc::vec::Vec;

use crate::error::{LabError, Result};
use crate::precision::{Interval, PrecisionCtx, QuadResult, Target};
use crate::real::Real;
use crate::special::{gamma, kummer_u_scaled};
use crate::weight::{Shift, WeightParams};

/// How a table was filled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentRoute {
    /// Double-exponential quadrature on `(0, 1)`.
    Quadrature,
    /// `Gamma(a+k+1) Gamma(b+1) / Gamma(a+b+k+2)` at `t = 0`.
    BetaClosedForm,
}

/// Moments `mu_k` for `k = k_min..=k_max` of one shifted weight.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub params: WeightParams,
    pub shift: Shift,
    pub k_min: i64,
    pub mu: Vec<Real>,
    pub bounds: Vec<Real>,
    pub route: MomentRoute,
}

impl MomentTable {
    pub fn k_max(&self) -> i64 {
        self.k_min + self.mu.len() as i64 - 1
    }

    pub fn get(&self, k: i64) -> Option<&Real> {
        if k < self.k_min {
            return None;
        }
        self.mu.get((k - self.k_min) as usize)
    }

    pub fn bound(&self, k: i64) -> Option<&Real> {
        if k < self.k_min {
            return None;
        }
        self.bounds.get((k - self.k_min) as usize)
    }

    /// `mu_k`, or an error naming the missing index.
    pub fn at(&self, k: i64) -> Result<&Real> {
        self.get(k).ok_or_else(|| {
            LabError::Missing(alloc::format!("moment k = {k} of shift {}", self.shift))
        })
    }
}

/// Agreement of the quadrature and Kummer routes at one `k`.
#[derive(Clone, Debug)]
pub struct RouteAgreement {
    pub k: i64,
    pub quad: Real,
    pub kummer: Real,
    pub difference: Real,
    pub combined_bound: Real,
}

impl RouteAgreement {
    pub fn agrees(&self) -> bool {
        self.difference <= self.combined_bound
    }
}

fn check_shift(params: &WeightParams, k: i64, shift: Shift) -> Result<()> {
    if (&params.beta + shift.d_beta as i64) <= Real::from_i64(-1, 64) {
        return Err(LabError::Domain(alloc::format!(
            "moment with beta shift {} diverges at x = 1",
            shift.d_beta
        )));
    }
    if params.t.is_zero() && (&params.alpha + (k + shift.d_alpha as i64)) <= Real::from_i64(-1, 64) {
        return Err(LabError::Domain(alloc::format!(
            "moment k = {k} with alpha shift {} diverges at x = 0 when t = 0",
            shift.d_alpha
        )));
    }
    Ok(())
}

/// `int_0^1 x^(k + d_alpha) w(x) (1-x)^d_beta dx` by quadrature.
pub fn moment_quad(params: &WeightParams, k: i64, shift: Shift, ctx: &PrecisionCtx) -> Result<QuadResult> {
    if k < -1 {
        return Err(LabError::InvalidParameter(alloc::format!("moment index {k} < -1")));
    }
    check_shift(params, k, shift)?;
    let p = params.with_bits(ctx.bits());
    let a = &p.alpha + (k + shift.d_alpha as i64);
    let b = &p.beta + shift.d_beta as i64;
    ctx.de_quad(Interval::Unit, |x| {
        let mut l = &a * &x.ln_x + &b * &x.ln_complement;
        if !p.t.is_zero() {
            l -= &p.t * &x.recip_x;
        }
        ctx.exp(&l)
    })
}

/// `mu_k = e^-t Gamma(1+beta) U(1+beta, -alpha-k, t)` through the integral
/// form of `U`; needs `t > 0`.
pub fn moment_kummer(params: &WeightParams, k: i64, ctx: &PrecisionCtx) -> Result<QuadResult> {
    if params.t.is_zero() {
        return Err(LabError::Unsupported(
            "the Kummer route needs t > 0; use the Beta closed form at t = 0",
        ));
    }
    if k < 0 {
        return Err(LabError::InvalidParameter(alloc::format!("moment index {k} < 0")));
    }
    let p = params.with_bits(ctx.bits());
    let a = &p.beta + 1;
    let b = -(&p.alpha + k);
    let u = kummer_u_scaled(&a, &b, &p.t, ctx)?;
    let e = ctx.exp(&(-&p.t));
    Ok(QuadResult {
        value: &u.value * &e,
        error_bound: &u.error_bound * &e,
        ..u
    })
}

/// Kummer-route moments `k = 0..=k_max` sharing one set of nodes.
pub fn moment_kummer_table(params: &WeightParams, k_max: i64, ctx: &PrecisionCtx) -> Result<Vec<QuadResult>> {
    if params.t.is_zero() {
        return Err(LabError::Unsupported("the Kummer route needs t > 0"));
    }
    let p = params.with_bits(ctx.bits());
    let len = (k_max + 1) as usize;
    // e^-t s^beta (1+s)^-(alpha+beta+2+k) e^(-t s)
    let c = &p.alpha + &p.beta + 2;
    let target = Target::Relative(ctx.quad_target());
    ctx.de_quad_vec(Interval::HalfLine, len, &target, |s, out| {
        let l = &p.beta * &s.ln_x - &c * &s.ln_complement - &p.t * (&s.x + 1);
        let mut v = ctx.exp(&l);
        if v.is_zero() {
            return;
        }
        let r = s.complement.recip();
        for o in out.iter_mut() {
            *o = v.clone();
            v *= &r;
        }
    })
}

/// Beta closed-form table at `t = 0` for `k = 0..=k_max`.
pub fn beta_moments(params: &WeightParams, k_max: i64, shift: Shift, ctx: &PrecisionCtx) -> Result<MomentTable> {
    if !params.t.is_zero() {
        return Err(LabError::Unsupported("the Beta closed form holds only at t = 0"));
    }
    check_shift(params, 0, shift)?;
    let p = params.with_bits(ctx.bits());
    let a = &p.alpha + shift.d_alpha as i64;
    let b = &p.beta + shift.d_beta as i64;
    // mu_0 = B(a+1, b+1); mu_(k+1) = mu_k (a+k+1)/(a+b+k+2)
    let mut mu = Vec::with_capacity(k_max as usize + 1);
    let mut cur = gamma(&(&a + 1), ctx)? * gamma(&(&b + 1), ctx)? / gamma(&(&a + &b + 2), ctx)?;
    for k in 0..=k_max {
        mu.push(cur.clone());
        cur = cur * (&a + (k + 1)) / (&a + &b + (k + 2));
    }
    let eps = Real::pow2(-(ctx.bits() as i32 - 16), 64);
    let bounds = mu
        .iter()
        .enumerate()
        .map(|(k, m)| m * &eps * (k as i64 + 2))
        .collect();
    Ok(MomentTable {
        params: p,
        shift,
        k_min: 0,
        mu,
        bounds,
        route: MomentRoute::BetaClosedForm,
    })
}

/// Tables for every shift. At `t > 0` all shifts come from one vector
/// quadrature on `(0, 1)` and start at `k = -1`; at `t = 0` they use the
/// Beta closed form and start at `k = 0`.
pub fn moment_table(params: &WeightParams, k_max: i64, shifts: &[Shift], ctx: &PrecisionCtx) -> Result<Vec<MomentTable>> {
    if k_max < 0 {
        return Err(LabError::InvalidParameter(alloc::format!("k_max = {k_max} < 0")));
    }
    if params.t.is_zero() {
        return shifts
            .iter()
            .map(|&s| beta_moments(params, k_max, s, ctx))
            .collect();
    }
    quadrature_tables(params, k_max, shifts, ctx)
}

/// Tables for every shift by quadrature alone, also at `t = 0` (where they
/// start at `k = 0`).
pub fn quadrature_tables(params: &WeightParams, k_max: i64, shifts: &[Shift], ctx: &PrecisionCtx) -> Result<Vec<MomentTable>> {
    if k_max < 0 {
        return Err(LabError::InvalidParameter(alloc::format!("k_max = {k_max} < 0")));
    }
    let k_min = if params.t.is_zero() { 0 } else { -1i64 };
    for &s in shifts {
        check_shift(params, k_min, s)?;
    }
    let p = params.with_bits(ctx.bits());
    let len = (k_max - k_min + 1) as usize;
    let target = Target::Relative(ctx.quad_target());
    let res = ctx.de_quad_vec(Interval::Unit, len * shifts.len(), &target, |x, out| {
        let base = ctx.exp(&p.ln_weight_at(x));
        if base.is_zero() {
            return;
        }
        for (j, s) in shifts.iter().enumerate() {
            let mut v = base.clone();
            if s.d_alpha < 0 {
                v *= &x.recip_x;
            }
            if s.d_beta < 0 {
                v /= &x.complement;
            } else {
                for _ in 0..s.d_beta {
                    v *= &x.complement;
                }
            }
            if k_min < 0 {
                v *= &x.recip_x;
            }
            for o in out[j * len..(j + 1) * len].iter_mut() {
                *o = v.clone();
                v *= &x.x;
            }
        }
    })?;
    let mut tables = Vec::with_capacity(shifts.len());
    for (j, &s) in shifts.iter().enumerate() {
        let chunk = &res[j * len..(j + 1) * len];
        tables.push(MomentTable {
            params: p.clone(),
            shift: s,
            k_min,
            mu: chunk.iter().map(|q| q.value.clone()).collect(),
            bounds: chunk.iter().map(|q| q.error_bound.clone()).collect(),
            route: MomentRoute::Quadrature,
        });
    }
    Ok(tables)
}

/// Compares an unshifted quadrature table against the Kummer route for
/// `k = 0..=k_max` of the table.
pub fn cross_check(table: &MomentTable, ctx: &PrecisionCtx) -> Result<Vec<RouteAgreement>> {
    if table.shift != Shift::NONE {
        return Err(LabError::Unsupported("only the unshifted moments have a Kummer form"));
    }
    let kt = moment_kummer_table(&table.params, table.k_max(), ctx)?;
    let mut out = Vec::with_capacity(kt.len());
    for (k, q) in kt.into_iter().enumerate() {
        let k = k as i64;
        let quad = table.at(k)?.clone();
        let difference = (&quad - &q.value).abs();
        let combined_bound = table.bound(k).cloned().unwrap_or_else(|| ctx.zero()) + &q.error_bound;
        out.push(RouteAgreement {
            k,
            quad,
            kummer: q.value,
            difference,
            combined_bound,
        });
    }
    Ok(out)
}

/// [`moment_table`] plus, at `t > 0`, the Kummer cross-check of the
/// unshifted table; a disagreement beyond the combined bounds is an error.
pub fn moment_table_checked(
    params: &WeightParams,
    k_max: i64,
    shifts: &[Shift],
    ctx: &PrecisionCtx,
) -> Result<(Vec<MomentTable>, Vec<RouteAgreement>)> {
    let tables = moment_table(params, k_max, shifts, ctx)?;
    if params.t.is_zero() {
        return Ok((tables, Vec::new()));
    }
    let Some(plain) = tables.iter().find(|t| t.shift == Shift::NONE) else {
        return Ok((tables, Vec::new()));
    };
    let agreement = cross_check(plain, ctx)?;
    if let Some(bad) = agreement.iter().find(|a| !a.agrees()) {
        return Err(LabError::RouteDisagreement {
            k: bad.k,
            difference: bad.difference.clone(),
            bound: bad.combined_bound.clone(),
        });
    }
    Ok((tables, agreement))
}
