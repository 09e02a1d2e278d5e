//! The weight `w(x) = e^(-t/x) x^alpha (1-x)^beta` on `[0, 1]`.

use alloc::string::ToString;

use crate::error::{LabError, Result};
use crate::precision::{Abscissa, PrecisionCtx};
use crate::real::{Complex, Real};

/// Parameters `(alpha, beta, t)` of the weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightParams {
    pub alpha: Real,
    pub beta: Real,
    pub t: Real,
}

impl WeightParams {
    pub fn new(alpha: Real, beta: Real, t: Real) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(LabError::InvalidParameter(alloc::format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if !beta.is_positive() {
            return Err(LabError::InvalidParameter(alloc::format!(
                "beta must be positive, got {beta}"
            )));
        }
        if t.is_negative() || !t.is_finite() {
            return Err(LabError::InvalidParameter(alloc::format!(
                "t must be non-negative, got {t}"
            )));
        }
        Ok(WeightParams { alpha, beta, t })
    }

    /// Convenience constructor from `f64` values, exact in binary.
    pub fn from_f64(alpha: f64, beta: f64, t: f64, bits: usize) -> Result<Self> {
        Self::new(
            Real::from_f64(alpha, bits),
            Real::from_f64(beta, bits),
            Real::from_f64(t, bits),
        )
    }

    /// Same `(alpha, beta)` at another `t`.
    pub fn at_t(&self, t: Real) -> Result<Self> {
        Self::new(self.alpha.clone(), self.beta.clone(), t)
    }

    /// Rounds all parameters to the context precision.
    pub fn with_bits(&self, bits: usize) -> Self {
        WeightParams {
            alpha: self.alpha.with_bits(bits),
            beta: self.beta.with_bits(bits),
            t: self.t.with_bits(bits),
        }
    }

    /// `ln w` at a quadrature node.
    pub fn ln_weight_at(&self, a: &Abscissa) -> Real {
        let mut l = &self.alpha * &a.ln_x + &self.beta * &a.ln_complement;
        if !self.t.is_zero() {
            l -= &self.t * &a.recip_x;
        }
        l
    }
}

/// Exponent shift `(d_alpha, d_beta)` of the weight, giving
/// `w(x) x^d_alpha (1-x)^d_beta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shift {
    pub d_alpha: i32,
    pub d_beta: i32,
}

impl Shift {
    pub const NONE: Shift = Shift {
        d_alpha: 0,
        d_beta: 0,
    };
    /// The `w(y)/(1-y)` weight.
    pub const BETA_DOWN: Shift = Shift {
        d_alpha: 0,
        d_beta: -1,
    };

    pub fn new(d_alpha: i32, d_beta: i32) -> Result<Self> {
        if !(d_alpha == 0 || d_alpha == -1) || d_beta < -1 {
            return Err(LabError::InvalidParameter(alloc::format!(
                "unsupported weight shift ({d_alpha}, {d_beta})"
            )));
        }
        Ok(Shift { d_alpha, d_beta })
    }
}

impl core::fmt::Display for Shift {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({},{})", self.d_alpha, self.d_beta)
    }
}

/// `w(x)` for `0 < x < 1`.
pub fn weight_eval(params: &WeightParams, x: &Real, ctx: &PrecisionCtx) -> Result<Real> {
    let one = ctx.one();
    if !x.is_positive() || *x >= one {
        return Err(LabError::Domain(alloc::format!("weight at x = {x}")));
    }
    let x = ctx.real(x);
    let co = &one - &x;
    let l = &params.alpha * ctx.ln(&x) + &params.beta * ctx.ln(&co) - &params.t / &x;
    Ok(ctx.exp(&l))
}

/// `v'(z) = -t/z^2 - alpha/z - beta/(z-1)` where `w = e^-v`.
pub fn v_prime_eval(params: &WeightParams, z: &Complex) -> Result<Complex> {
    let zm1 = z - &Real::one(64);
    if z.is_zero() || zm1.is_zero() {
        return Err(LabError::Domain(z.to_string() + " is a pole of v'"));
    }
    let zi = z.recip();
    let zi2 = &zi * &zi;
    Ok(-(zi2.scale(&params.t) + zi.scale(&params.alpha) + zm1.recip().scale(&params.beta)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_values() {
        let ctx = PrecisionCtx::new(192).unwrap();
        let half = ctx.ratio(1, 2);
        let p = WeightParams::from_f64(1.0, 1.0, 0.0, 192).unwrap();
        assert!((weight_eval(&p, &half, &ctx).unwrap() - ctx.ratio(1, 4)).abs() < Real::pow2(-185, 192));
        let p = WeightParams::from_f64(1.0, 1.0, 1.0, 192).unwrap();
        let expect = ctx.exp(&ctx.int(-2)) / 4;
        assert!((weight_eval(&p, &half, &ctx).unwrap() - expect).abs() < Real::pow2(-185, 192));
        let p = WeightParams::from_f64(2.0, 3.0, 1.0, 192).unwrap();
        let w = weight_eval(&p, &ctx.ratio(1, 1000), &ctx).unwrap();
        assert!(w < ctx.exp(&ctx.int(-1000)));
        assert!(weight_eval(&p, &ctx.one(), &ctx).is_err());
        assert!(weight_eval(&p, &ctx.zero(), &ctx).is_err());
    }

    #[test]
    fn v_prime_values() {
        let p = WeightParams::from_f64(1.0, 1.0, 0.0, 128).unwrap();
        let z = Complex::from_real(Real::from_i64(2, 128));
        let v = v_prime_eval(&p, &z).unwrap();
        assert_eq!(v.re.to_f64(), -1.5);
        let p = WeightParams::from_f64(1.0, 1.0, 1.0, 128).unwrap();
        let z = Complex::from_real(Real::from_i64(-1, 128));
        assert_eq!(v_prime_eval(&p, &z).unwrap().re.to_f64(), 0.5);
        assert!(v_prime_eval(&p, &Complex::from_real(Real::one(128))).is_err());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(WeightParams::from_f64(0.0, 1.0, 1.0, 64).is_err());
        assert!(WeightParams::from_f64(1.0, -1.0, 1.0, 64).is_err());
        assert!(WeightParams::from_f64(1.0, 1.0, -1e-3, 64).is_err());
        assert!(Shift::new(1, 0).is_err());
        assert!(Shift::new(0, -2).is_err());
    }
}
