//! Monic orthogonal polynomials of the weight, built from a factorization of
//! the Hankel moment matrix.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{LabError, Result};
use crate::moments::MomentTable;
use crate::precision::{DerivOrder, FdEstimate, PrecisionCtx, Stencil};
use crate::real::{Complex, Real};
use crate::weight::{Shift, WeightParams};

/// Recurrence data of the monic system
/// `x P_n = P_(n+1) + alpha_n P_n + beta_n P_(n-1)`.
///
/// Polynomials are built up to degree `n_max + 1` so that every index
/// `n <= n_max` has both neighbours: `h`, `p1`, `beta_rec` and `coeffs` have
/// `n_max + 2` entries, `alpha_rec` has `n_max + 1`, and `d` has `n_max + 3`
/// (`D_0` through `D_(n_max+2)`).
#[derive(Clone, Debug)]
pub struct OrthoSystem {
    pub params: WeightParams,
    pub n_max: usize,
    /// Squared norms `h_n`.
    pub h: Vec<Real>,
    /// Subleading coefficients `p1(n)` (coefficient of `z^(n-1)` in `P_n`).
    pub p1: Vec<Real>,
    pub alpha_rec: Vec<Real>,
    /// `beta_rec[0]` is a zero placeholder.
    pub beta_rec: Vec<Real>,
    /// Hankel determinants `D_n = prod_(j<n) h_j`.
    pub d: Vec<Real>,
    /// `coeffs[n][j]` is the coefficient of `z^j` in `P_n`.
    pub coeffs: Vec<Vec<Real>>,
}

/// Builds the system from an unshifted moment table covering
/// `k <= 2 n_max + 2`.
///
/// The Hankel matrix `(mu_(i+j))` of size `n_max + 2` is factored as
/// `L D L^T`; the rows of `L^-1` are the monic coefficients and `D` holds the
/// norms.
pub fn build_ortho(moments: &MomentTable, n_max: usize, ctx: &PrecisionCtx) -> Result<OrthoSystem> {
    if moments.shift != Shift::NONE {
        return Err(LabError::InvalidParameter(alloc::format!(
            "orthogonal system needs the unshifted moments, got shift {}",
            moments.shift
        )));
    }
    let m = n_max + 2;
    let need = 2 * m as i64 - 2;
    if moments.k_max() < need {
        return Err(LabError::Missing(alloc::format!(
            "moments up to k = {need}, table ends at {}",
            moments.k_max()
        )));
    }
    let bits = ctx.bits();
    // The factorization loses a few bits per order; guard bits keep the
    // outputs accurate to the working precision relative to the given moments.
    let g = bits + 64 + 6 * m;
    let mu: Vec<Real> = (0..=need)
        .map(|k| moments.at(k).map(|v| v.with_bits(g)))
        .collect::<Result<_>>()?;

    // L D L^T with unit lower L.
    let zero = Real::zero(g);
    let one = Real::one(g);
    let mut l = vec![vec![zero.clone(); m]; m];
    let mut dg: Vec<Real> = Vec::with_capacity(m);
    for j in 0..m {
        let mut dj = mu[2 * j].clone();
        for k in 0..j {
            dj -= l[j][k].square() * &dg[k];
        }
        if !dj.is_positive() {
            return Err(LabError::Precision { order: j, bits });
        }
        for i in j + 1..m {
            let mut s = mu[i + j].clone();
            for k in 0..j {
                s -= &l[i][k] * &l[j][k] * &dg[k];
            }
            l[i][j] = s / &dj;
        }
        l[j][j] = one.clone();
        dg.push(dj);
    }

    // Rows of L^-1.
    let mut coeffs: Vec<Vec<Real>> = Vec::with_capacity(m);
    for n in 0..m {
        let mut row = vec![zero.clone(); n + 1];
        row[n] = one.clone();
        for j in (0..n).rev() {
            let mut s = zero.clone();
            for (k, ck) in coeffs.iter().enumerate().take(n).skip(j) {
                s += &l[n][k] * &ck[j];
            }
            row[j] = -s;
        }
        coeffs.push(row);
    }

    let alpha_rec: Vec<Real> = (0..=n_max)
        .map(|n| (bilinear(&coeffs[n], &coeffs[n], &mu, 1) / &dg[n]).with_bits(bits))
        .collect();
    let beta_rec: Vec<Real> = (0..m)
        .map(|n| if n == 0 { ctx.zero() } else { (&dg[n] / &dg[n - 1]).with_bits(bits) })
        .collect();
    let mut d = Vec::with_capacity(m + 1);
    let mut acc = one;
    d.push(ctx.one());
    for hn in &dg {
        acc *= hn;
        d.push(acc.with_bits(bits));
    }
    let coeffs: Vec<Vec<Real>> = coeffs
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.with_bits(bits)).collect())
        .collect();
    let h: Vec<Real> = dg.iter().map(|v| v.with_bits(bits)).collect();
    let p1: Vec<Real> = (0..m)
        .map(|n| if n == 0 { ctx.zero() } else { coeffs[n][n - 1].clone() })
        .collect();
    Ok(OrthoSystem {
        params: moments.params.clone(),
        n_max,
        h,
        p1,
        alpha_rec,
        beta_rec,
        d,
        coeffs,
    })
}

/// `sum_(i,j) c_i e_j mu_(i+j+offset)` for a slice indexed from `k = 0`.
pub(crate) fn bilinear(c: &[Real], e: &[Real], mu: &[Real], offset: usize) -> Real {
    let mut conv = vec![Real::zero(64); c.len() + e.len() - 1];
    for (i, ci) in c.iter().enumerate() {
        for (j, ej) in e.iter().enumerate() {
            conv[i + j] += ci * ej;
        }
    }
    conv.iter()
        .enumerate()
        .map(|(k, v)| v * &mu[k + offset])
        .sum()
}

/// Determinant of `(mu_(j+k))_(j,k<n)` by fraction-free elimination at 64
/// extra bits; independent of [`build_ortho`].
pub fn hankel_det_oracle(moments: &MomentTable, n: usize, ctx: &PrecisionCtx) -> Result<Real> {
    if n == 0 {
        return Ok(ctx.one());
    }
    let bits = ctx.bits() + 64;
    let mut a: Vec<Vec<Real>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| moments.at((i + j) as i64).map(|v| v.with_bits(bits)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut prev = Real::one(bits);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            return Err(LabError::Precision { order: k, bits });
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(a[n - 1][n - 1].with_bits(ctx.bits()))
}

impl OrthoSystem {
    /// Largest degree with a stored polynomial.
    pub fn degree_cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.degree_cap() {
            return Err(LabError::Missing(alloc::format!(
                "polynomial of degree {n}; system ends at {}",
                self.degree_cap()
            )));
        }
        Ok(())
    }
}

/// `(P_n(z), P_n'(z))` from the three-term recurrence.
pub fn poly_eval(sys: &OrthoSystem, n: usize, z: &Complex) -> Result<(Complex, Complex)> {
    sys.check_degree(n)?;
    let bits = sys.h[0].bits();
    let zero = Complex::from_real(Real::zero(bits));
    let mut p_prev = zero.clone();
    let mut p = Complex::from_real(Real::one(bits));
    let mut d_prev = zero.clone();
    let mut d = zero;
    for k in 0..n {
        let zk = z - &sys.alpha_rec[k];
        let next = &zk * &p - p_prev.scale(&sys.beta_rec[k]);
        let dnext = &(&zk * &d) + &p - d_prev.scale(&sys.beta_rec[k]);
        p_prev = core::mem::replace(&mut p, next);
        d_prev = core::mem::replace(&mut d, dnext);
    }
    Ok((p, d))
}

/// `P_n(z)` by Horner's rule on the stored coefficients.
pub fn poly_eval_coeffs(sys: &OrthoSystem, n: usize, z: &Complex) -> Result<Complex> {
    sys.check_degree(n)?;
    let c = &sys.coeffs[n];
    let mut acc = Complex::from_real(c[n].clone());
    for j in (0..n).rev() {
        acc = &(&acc * z) + &c[j];
    }
    Ok(acc)
}

/// `P_0(x), ..., P_n(x)` at a real point via the recurrence.
pub fn poly_values_real(sys: &OrthoSystem, n: usize, x: &Real) -> Result<Vec<Real>> {
    sys.check_degree(n)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(Real::one(x.bits()));
    for k in 0..n {
        let mut next = (x - &sys.alpha_rec[k]) * &out[k];
        if k > 0 {
            next -= &sys.beta_rec[k] * &out[k - 1];
        }
        out.push(next);
    }
    Ok(out)
}

/// `H_n = t d/dt ln D_n` and `H_n - n(n+alpha+beta)` from systems built on
/// the points of `stencil`.
pub fn hankel_hn(family: &[OrthoSystem; 5], stencil: &Stencil, n: usize, ctx: &PrecisionCtx) -> Result<(FdEstimate, Real)> {
    let mut samples: [Real; 5] = core::array::from_fn(|_| ctx.zero());
    for (s, sys) in samples.iter_mut().zip(family) {
        let dn = sys
            .d
            .get(n)
            .ok_or_else(|| LabError::Missing(alloc::format!("D_{n}")))?;
        *s = ctx.ln(dn);
    }
    let d = stencil.estimate(&samples, DerivOrder::First);
    let h = FdEstimate {
        value: &d.value * &stencil.t,
        error_proxy: &d.error_proxy * &stencil.t,
    };
    let p = &family[2].params;
    let nn = n as i64;
    let tilde = &h.value - (&p.alpha + &p.beta + nn) * nn;
    Ok((h, tilde))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::beta_moments;

    fn t0_system(n_max: usize) -> (OrthoSystem, MomentTable, PrecisionCtx) {
        let ctx = PrecisionCtx::new(256).unwrap();
        let p = WeightParams::from_f64(1.0, 1.0, 0.0, 256).unwrap();
        let tab = beta_moments(&p, 2 * n_max as i64 + 2, Shift::NONE, &ctx).unwrap();
        (build_ortho(&tab, n_max, &ctx).unwrap(), tab, ctx)
    }

    #[test]
    fn jacobi_anchor_values() {
        let (sys, _, ctx) = t0_system(3);
        let tiny = Real::pow2(-220, 256);
        assert!((&sys.alpha_rec[1] - ctx.ratio(1, 2)).abs() < tiny);
        assert!((&sys.beta_rec[1] - ctx.ratio(1, 20)).abs() < tiny);
        assert!(sys.p1[0].is_zero());
        assert!((&sys.alpha_rec[0] + &sys.p1[1]).abs() < tiny);
    }

    #[test]
    fn oracle_determinants() {
        let (sys, tab, ctx) = t0_system(3);
        assert_eq!(hankel_det_oracle(&tab, 0, &ctx).unwrap(), ctx.one());
        assert_eq!(hankel_det_oracle(&tab, 1, &ctx).unwrap(), *tab.at(0).unwrap());
        let d2 = hankel_det_oracle(&tab, 2, &ctx).unwrap();
        assert!((&d2 - ctx.ratio(1, 720)).abs() < Real::pow2(-250, 256));
        for n in 0..=4 {
            let o = hankel_det_oracle(&tab, n, &ctx).unwrap();
            assert!((&o - &sys.d[n]).abs() < &o * Real::pow2(-200, 64));
        }
    }

    #[test]
    fn monic_evaluation() {
        let (sys, _, ctx) = t0_system(4);
        let z = Complex::from_real(sys.alpha_rec[0].clone());
        assert!(poly_eval(&sys, 1, &z).unwrap().0.abs() < Real::pow2(-240, 256));
        let big = Complex::from_real(ctx.int(1_000_000));
        let (p4, _) = poly_eval(&sys, 4, &big).unwrap();
        let ratio = p4.re / ctx.int(1_000_000).powi(4);
        assert!((ratio - 1).abs() < Real::from_f64(1e-5, 64));
        let w = Complex::new(ctx.ratio(3, 2), ctx.ratio(-1, 3));
        let a = poly_eval(&sys, 5, &w).unwrap().0;
        let b = poly_eval_coeffs(&sys, 5, &w).unwrap();
        assert!((&a - &b).abs() < Real::pow2(-200, 256));
        assert!(poly_eval(&sys, 6, &w).is_err());
    }
}
