//! Working-precision context, double-exponential quadrature and central
//! difference stencils in `t`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use astro_float::Consts;

use crate::error::{LabError, Result};
use crate::real::{Real, RM};

/// Levels below this are never accepted as converged.
const MIN_LEVEL: u32 = 3;

/// Default cap on step halvings.
pub const DEFAULT_MAX_LEVEL: u32 = 12;

/// Smallest algebraic endpoint exponent the default truncation point is
/// sized for: integrands behaving like `x^(g-1)` with `g >= 1/4`.
pub const DEFAULT_ENDPOINT_DECAY: f64 = 0.25;

/// Exponents below this are treated as an exact zero by the integrands.
pub const NEGLIGIBLE_EXPONENT: f64 = -1_048_576.0;

/// Integration domain of [`PrecisionCtx::de_quad`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Interval {
    /// `(0, 1)` with the tanh-sinh map.
    Unit,
    /// `(0, inf)` with the exp-sinh map.
    HalfLine,
}

/// One quadrature node, with the logarithms integrands usually need
/// precomputed so that an integrand costs a single `exp`.
#[derive(Clone, Debug)]
pub struct Abscissa {
    pub x: Real,
    /// `1 - x` on the unit interval, `1 + x` on the half-line, computed
    /// without cancellation.
    pub complement: Real,
    pub ln_x: Real,
    pub ln_complement: Real,
    pub recip_x: Real,
    /// `dx/du` of the substitution.
    pub weight: Real,
}

/// Outcome of one integral.
#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Real,
    pub error_bound: Real,
    pub evaluations: usize,
    pub level: u32,
}

/// Convergence goal for a vector of integrals.
#[derive(Clone, Debug)]
pub enum Target {
    Absolute(Real),
    /// Relative to the magnitude of each component.
    Relative(Real),
    /// One absolute goal per component.
    Componentwise(Vec<Real>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivOrder {
    First,
    Second,
}

/// Central-difference derivative with the 3-point vs 5-point discrepancy as
/// an error proxy.
#[derive(Clone, Debug)]
pub struct FdEstimate {
    pub value: Real,
    pub error_proxy: Real,
}

/// The five points `t - 2h, ..., t + 2h`.
#[derive(Clone, Debug)]
pub struct Stencil {
    pub t: Real,
    pub h: Real,
    pub points: [Real; 5],
}

impl Stencil {
    pub fn new(t: &Real, h: &Real) -> Result<Self> {
        let lowest = t - &(h * 2);
        if !h.is_positive() || !lowest.is_positive() {
            return Err(LabError::Stencil(t.clone()));
        }
        let points = [-2i64, -1, 0, 1, 2].map(|j| t + &(h * j));
        Ok(Stencil {
            t: t.clone(),
            h: h.clone(),
            points,
        })
    }

    /// Applies the stencil to `samples[j] = g(points[j])`.
    pub fn estimate(&self, samples: &[Real; 5], order: DerivOrder) -> FdEstimate {
        let [m2, m1, c, p1, p2] = samples;
        let h = &self.h;
        match order {
            DerivOrder::First => {
                let five = (m2 - p2 + (p1 - m1) * 8) / (h * 12);
                let three = (p1 - m1) / (h * 2);
                let error_proxy = (&five - three).abs();
                FdEstimate {
                    value: five,
                    error_proxy,
                }
            }
            DerivOrder::Second => {
                let h2 = h.square();
                let five = ((p1 + m1) * 16 - (p2 + m2) - c * 30) / (&h2 * 12);
                let three = (p1 + m1 - c * 2) / h2;
                let error_proxy = (&five - three).abs();
                FdEstimate {
                    value: five,
                    error_proxy,
                }
            }
        }
    }
}

/// Precision settings plus per-precision caches (constants, quadrature
/// nodes). Cloning yields an independent context with empty caches.
pub struct PrecisionCtx {
    bits: usize,
    quad_target: Option<Real>,
    fd_step_scale: Option<Real>,
    max_level: u32,
    endpoint_decay: f64,
    consts: RefCell<Consts>,
    nodes: RefCell<BTreeMap<(Interval, u32), Arc<Vec<Abscissa>>>>,
}

impl Clone for PrecisionCtx {
    fn clone(&self) -> Self {
        PrecisionCtx {
            bits: self.bits,
            quad_target: self.quad_target.clone(),
            fd_step_scale: self.fd_step_scale.clone(),
            max_level: self.max_level,
            endpoint_decay: self.endpoint_decay,
            consts: RefCell::new(new_consts()),
            nodes: RefCell::new(BTreeMap::new()),
        }
    }
}

impl core::fmt::Debug for PrecisionCtx {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PrecisionCtx")
            .field("bits", &self.bits)
            .field("quad_target", &self.quad_target())
            .field("fd_step_scale", &self.fd_step_scale())
            .field("max_level", &self.max_level)
            .finish()
    }
}

fn new_consts() -> Consts {
    Consts::new().expect("allocating the constant cache")
}

/// Working precision suggested for polynomials up to degree `n_max`.
///
/// Hankel moment matrices lose a roughly constant number of bits per order,
/// so the budget grows linearly in `n_max`.
pub fn policy_bits(n_max: usize) -> usize {
    (64 + 24 * n_max).max(192)
}

impl PrecisionCtx {
    pub fn new(bits: usize) -> Result<Self> {
        if bits < 64 {
            return Err(LabError::InvalidParameter(alloc::format!(
                "working precision must be at least 64 bits, got {bits}"
            )));
        }
        Ok(PrecisionCtx {
            bits,
            quad_target: None,
            fd_step_scale: None,
            max_level: DEFAULT_MAX_LEVEL,
            endpoint_decay: DEFAULT_ENDPOINT_DECAY,
            consts: RefCell::new(new_consts()),
            nodes: RefCell::new(BTreeMap::new()),
        })
    }

    /// Context at [`policy_bits`] for degree `n_max`.
    pub fn for_degree(n_max: usize) -> Self {
        Self::new(policy_bits(n_max)).expect("policy precision is valid")
    }

    pub fn with_quad_target(mut self, target: Real) -> Result<Self> {
        if !target.is_positive() {
            return Err(LabError::InvalidParameter(alloc::format!(
                "quadrature target must be positive, got {target}"
            )));
        }
        self.quad_target = Some(target.with_bits(self.bits));
        Ok(self)
    }

    pub fn with_fd_step_scale(mut self, scale: Real) -> Result<Self> {
        if !scale.is_positive() || scale >= Real::one(64) {
            return Err(LabError::InvalidParameter(alloc::format!(
                "stencil step scale must lie in (0, 1), got {scale}"
            )));
        }
        self.fd_step_scale = Some(scale.with_bits(self.bits));
        Ok(self)
    }

    pub fn with_max_level(mut self, level: u32) -> Result<Self> {
        if level < MIN_LEVEL || level > 20 {
            return Err(LabError::InvalidParameter(alloc::format!(
                "quadrature level cap must lie in {MIN_LEVEL}..=20, got {level}"
            )));
        }
        self.max_level = level;
        Ok(self)
    }

    /// Sizes the truncation point for integrands vanishing like `x^(g-1)`
    /// (or `x^-(g+1)` at infinity) with `g >= decay`.
    pub fn with_endpoint_decay(mut self, decay: f64) -> Result<Self> {
        if !(decay > 0.0 && decay <= 1.0) {
            return Err(LabError::InvalidParameter(alloc::format!(
                "endpoint decay must lie in (0, 1], got {decay}"
            )));
        }
        self.endpoint_decay = decay;
        self.nodes.borrow_mut().clear();
        Ok(self)
    }

    /// Same settings at `extra` more bits; defaulted targets and steps
    /// follow the new precision.
    pub fn widened(&self, extra: usize) -> Self {
        let mut c = self.clone();
        c.bits += extra;
        if let Some(q) = &self.quad_target {
            c.quad_target = Some(q.with_bits(c.bits) * Real::pow2(-(extra as i32), 64));
        }
        c
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// Error goal for quadrature; defaults to `2^-(bits - 16)`.
    pub fn quad_target(&self) -> Real {
        match &self.quad_target {
            Some(q) => q.clone(),
            None => Real::pow2(-(self.bits as i32 - 16), self.bits),
        }
    }

    /// Relative stencil step; defaults to `2^-(bits/4)`.
    pub fn fd_step_scale(&self) -> Real {
        match &self.fd_step_scale {
            Some(s) => s.clone(),
            None => Real::pow2(-((self.bits / 4) as i32), self.bits),
        }
    }

    /// Residual denominator floor `10^-(bits/2)`.
    pub fn residual_floor(&self) -> Real {
        Real::from_i64(10, self.bits)
            .powi((self.bits / 2) as u32)
            .recip()
    }

    pub fn zero(&self) -> Real {
        Real::zero(self.bits)
    }

    pub fn one(&self) -> Real {
        Real::one(self.bits)
    }

    pub fn int(&self, v: i64) -> Real {
        Real::from_i64(v, self.bits)
    }

    pub fn ratio(&self, num: i64, den: i64) -> Real {
        Real::ratio(num, den, self.bits)
    }

    pub fn real(&self, v: &Real) -> Real {
        v.with_bits(self.bits)
    }

    pub fn pi(&self) -> Real {
        Real(self.consts.borrow_mut().pi(self.bits, RM))
    }

    pub fn ln2(&self) -> Real {
        Real(self.consts.borrow_mut().ln_2(self.bits, RM))
    }

    /// `e^x`; arguments below [`NEGLIGIBLE_EXPONENT`] give an exact zero.
    pub fn exp(&self, x: &Real) -> Real {
        if x.to_f64() < NEGLIGIBLE_EXPONENT {
            return self.zero();
        }
        let mut cc = self.consts.borrow_mut();
        Real(x.0.exp(self.bits, RM, &mut cc))
    }

    /// Natural logarithm; the caller guarantees `x > 0`.
    pub fn ln(&self, x: &Real) -> Real {
        let mut cc = self.consts.borrow_mut();
        Real(x.0.ln(self.bits, RM, &mut cc))
    }

    /// `x^y = e^(y ln x)` for `x > 0`.
    pub fn powf(&self, x: &Real, y: &Real) -> Real {
        self.exp(&(y * self.ln(x)))
    }

    /// `(sinh x, cosh x)` from a single exponential.
    pub fn sinh_cosh(&self, x: &Real) -> (Real, Real) {
        let e = self.exp(x);
        let ei = e.recip();
        let half = Real::from_f64(0.5, 64);
        ((&e - &ei) * &half, (e + ei) * half)
    }

    /// Largest integer `u` used by the substitution on `interval`.
    fn truncation(&self, interval: Interval) -> i32 {
        let goal = (self.bits as f64 + 32.0) * core::f64::consts::LN_2;
        let speed = match interval {
            Interval::Unit => core::f64::consts::PI,
            Interval::HalfLine => core::f64::consts::FRAC_PI_2,
        };
        libm::ceil(libm::asinh(goal / (speed * self.endpoint_decay))) as i32
    }

    /// Nodes added at `level`: all integers in `[-J, J]` at level 0, odd
    /// multiples of `2^-level` afterwards.
    fn level_nodes(&self, interval: Interval, level: u32) -> Arc<Vec<Abscissa>> {
        if let Some(n) = self.nodes.borrow().get(&(interval, level)) {
            return n.clone();
        }
        let j_max = self.truncation(interval) as i64;
        let mut us: Vec<Real> = Vec::new();
        if level == 0 {
            us.extend((0..=j_max).map(|j| self.int(j)));
        } else {
            let denom = 1i64 << level;
            let mut i = 1i64;
            while i < j_max * denom {
                us.push(Real::from_i64(i, self.bits) * Real::pow2(-(level as i32), 64));
                i += 2;
            }
        }
        let mut out = Vec::with_capacity(2 * us.len());
        for u in &us {
            let (pos, neg) = self.node_pair(interval, u);
            out.push(pos);
            if let Some(neg) = neg {
                out.push(neg);
            }
        }
        let out = Arc::new(out);
        self.nodes
            .borrow_mut()
            .insert((interval, level), out.clone());
        out
    }

    /// Node at `u >= 0` and its mirror at `-u` (absent for `u = 0`).
    fn node_pair(&self, interval: Interval, u: &Real) -> (Abscissa, Option<Abscissa>) {
        let (sh, ch) = self.sinh_cosh(u);
        let pi = self.pi();
        let mirror = !u.is_zero();
        match interval {
            Interval::Unit => {
                // q = exp(-pi sinh u), x = 1/(1+q), 1-x = q/(1+q)
                let a = &pi * &sh;
                let q = self.exp(&(-&a));
                let one_q = &q + 1;
                let ln_one_q = self.ln(&one_q);
                let x = one_q.recip();
                let co = &q * &x;
                let weight = &pi * &ch * &x * &co;
                let pos = Abscissa {
                    x: x.clone(),
                    complement: co.clone(),
                    ln_x: -&ln_one_q,
                    ln_complement: -(&a + &ln_one_q),
                    recip_x: one_q.clone(),
                    weight: weight.clone(),
                };
                let neg = mirror.then(|| Abscissa {
                    recip_x: co.recip(),
                    x: co,
                    complement: x,
                    ln_x: -(&a + &ln_one_q),
                    ln_complement: -&ln_one_q,
                    weight,
                });
                (pos, neg)
            }
            Interval::HalfLine => {
                // s = exp(pi/2 sinh u); the mirror node is 1/s
                let a = &pi * &sh * Real::from_f64(0.5, 64);
                let s = self.exp(&a);
                let si = s.recip();
                let one_s = &s + 1;
                let ln_one_s = self.ln(&one_s);
                let half_pi_ch = &pi * &ch * Real::from_f64(0.5, 64);
                let pos = Abscissa {
                    x: s.clone(),
                    complement: one_s,
                    ln_x: a.clone(),
                    ln_complement: ln_one_s.clone(),
                    recip_x: si.clone(),
                    weight: &half_pi_ch * &s,
                };
                let neg = mirror.then(|| Abscissa {
                    complement: &si + 1,
                    ln_complement: &ln_one_s - &a,
                    ln_x: -&a,
                    recip_x: s,
                    weight: &half_pi_ch * &si,
                    x: si,
                });
                (pos, neg)
            }
        }
    }

    /// Integral of a scalar integrand to the context's absolute target.
    pub fn de_quad<F>(&self, interval: Interval, mut f: F) -> Result<QuadResult>
    where
        F: FnMut(&Abscissa) -> Real,
    {
        let target = Target::Absolute(self.quad_target());
        let mut v = self.de_quad_vec(interval, 1, &target, |a, out| out[0] = f(a))?;
        Ok(v.pop().expect("one component"))
    }

    /// Integrates `dim` integrands sharing the nodes. `f` writes the
    /// integrand values at a node into its output slice; components are
    /// summed in a fixed node order, so results are reproducible.
    pub fn de_quad_vec<F>(
        &self,
        interval: Interval,
        dim: usize,
        target: &Target,
        mut f: F,
    ) -> Result<Vec<QuadResult>>
    where
        F: FnMut(&Abscissa, &mut [Real]),
    {
        if let Target::Componentwise(g) = target {
            if g.len() != dim {
                return Err(LabError::InvalidParameter(alloc::format!(
                    "{} componentwise goals for {dim} integrands",
                    g.len()
                )));
            }
        }
        let zero = self.zero();
        let mut vals = vec![zero.clone(); dim];
        let mut sum = vec![zero.clone(); dim];
        let mut abs_sum = vec![zero.clone(); dim];
        let mut tail = vec![zero.clone(); dim];
        let mut evaluations = 0usize;

        // Level 0 is ordered by |u|; the last pair sits at |u| = J and
        // carries the truncation estimate.
        let base = self.level_nodes(interval, 0);
        for (i, node) in base.iter().enumerate() {
            vals.iter_mut().for_each(|v| *v = zero.clone());
            f(node, &mut vals);
            evaluations += 1;
            let outer = i + 2 >= base.len();
            for c in 0..dim {
                let term = &vals[c] * &node.weight;
                if outer {
                    tail[c] += term.abs();
                }
                abs_sum[c] += term.abs();
                sum[c] += term;
            }
        }

        let mut diff = vec![zero.clone(); dim];
        for level in 1..=self.max_level {
            let nodes = self.level_nodes(interval, level);
            let h = Real::pow2(-(level as i32), 64);
            let mut part = vec![zero.clone(); dim];
            let mut part_abs = vec![zero.clone(); dim];
            for node in nodes.iter() {
                vals.iter_mut().for_each(|v| *v = zero.clone());
                f(node, &mut vals);
                evaluations += 1;
                for c in 0..dim {
                    let term = &vals[c] * &node.weight;
                    part_abs[c] += term.abs();
                    part[c] += term;
                }
            }
            for c in 0..dim {
                let next = &sum[c] * Real::from_f64(0.5, 64) + &part[c] * &h;
                abs_sum[c] = &abs_sum[c] * Real::from_f64(0.5, 64) + &part_abs[c] * &h;
                diff[c] = (&next - &sum[c]).abs();
                sum[c] = next;
            }
            if level < MIN_LEVEL {
                continue;
            }
            let bounds = self.bounds(&diff, &tail, &abs_sum);
            let converged = (0..dim).all(|c| {
                let goal = match target {
                    Target::Absolute(a) => a.clone(),
                    Target::Relative(r) => r * sum[c].abs(),
                    Target::Componentwise(g) => g[c].clone(),
                };
                bounds[c] <= goal
            });
            if converged {
                return Ok(sum
                    .into_iter()
                    .zip(bounds)
                    .map(|(value, error_bound)| QuadResult {
                        value,
                        error_bound,
                        evaluations,
                        level,
                    })
                    .collect());
            }
        }
        // Report the worst component.
        let bounds = self.bounds(&diff, &tail, &abs_sum);
        let worst = (0..dim)
            .max_by(|&a, &b| {
                let ra = &bounds[a] / (sum[a].abs() + self.residual_floor());
                let rb = &bounds[b] / (sum[b].abs() + self.residual_floor());
                ra.partial_cmp(&rb).unwrap_or(core::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        Err(LabError::Quadrature {
            estimate: sum[worst].clone(),
            bound: bounds[worst].clone(),
            level: self.max_level,
        })
    }

    fn bounds(&self, diff: &[Real], tail: &[Real], abs_sum: &[Real]) -> Vec<Real> {
        let eps = Real::pow2(-(self.bits as i32 - 8), 64);
        diff.iter()
            .zip(tail)
            .zip(abs_sum)
            .map(|((d, t), a)| d + t + a * &eps)
            .collect()
    }

    /// Step `t * fd_step_scale` stencil around `t`.
    pub fn stencil(&self, t: &Real) -> Result<Stencil> {
        Stencil::new(t, &(t * self.fd_step_scale()))
    }

    /// Derivative of `g` at `t` from a 5-point central stencil.
    pub fn fd_derivative<G, E>(&self, mut g: G, t: &Real, order: DerivOrder) -> Result<FdEstimate, E>
    where
        G: FnMut(&Real) -> Result<Real, E>,
        E: From<LabError>,
    {
        let st = self.stencil(t)?;
        let [a, b, c, d, e] = &st.points;
        let samples = [g(a)?, g(b)?, g(c)?, g(d)?, g(e)?];
        Ok(st.estimate(&samples, order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_nodes_are_mirrored() {
        let ctx = PrecisionCtx::new(128).unwrap();
        let nodes = ctx.level_nodes(Interval::Unit, 2);
        let a = &nodes[0];
        let b = &nodes[1];
        assert!((&a.x - &b.complement).abs() < Real::pow2(-120, 128));
        assert!((&a.x + &a.complement - 1).abs() < Real::pow2(-120, 128));
        assert!((ctx.exp(&a.ln_complement) - &a.complement).abs() < Real::pow2(-120, 128));
    }

    #[test]
    fn half_line_nodes_are_reciprocal() {
        let ctx = PrecisionCtx::new(128).unwrap();
        let nodes = ctx.level_nodes(Interval::HalfLine, 1);
        let a = &nodes[0];
        let b = &nodes[1];
        assert!((&a.x * &b.x - 1).abs() < Real::pow2(-120, 128));
        assert!((ctx.ln(&b.complement) - &b.ln_complement).abs() < Real::pow2(-118, 128));
    }

    #[test]
    fn truncation_point_grows_with_precision() {
        let lo = PrecisionCtx::new(128).unwrap();
        let hi = PrecisionCtx::new(2048).unwrap();
        assert!(lo.truncation(Interval::Unit) < hi.truncation(Interval::Unit));
        assert!(lo.truncation(Interval::Unit) <= lo.truncation(Interval::HalfLine));
    }

    #[test]
    fn stencil_rejects_nonpositive_points() {
        let t = Real::from_f64(1.0, 128);
        assert!(Stencil::new(&t, &Real::from_f64(0.5, 128)).is_err());
        assert!(Stencil::new(&t, &Real::from_f64(0.25, 128)).is_ok());
    }

    #[test]
    fn constant_and_beta_integrals() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let one = ctx.de_quad(Interval::Unit, |_| ctx.one()).unwrap();
        assert!((&one.value - 1).abs() <= one.error_bound);
        assert!(one.error_bound <= ctx.quad_target());
        let b22 = ctx
            .de_quad(Interval::Unit, |a| &a.x * &a.complement)
            .unwrap();
        assert!((&b22.value - ctx.ratio(1, 6)).abs() < Real::pow2(-230, 256));
        let gamma3 = ctx
            .de_quad(Interval::HalfLine, |a| ctx.exp(&(&a.ln_x * 2 - &a.x)))
            .unwrap();
        assert!((&gamma3.value - 2).abs() < Real::pow2(-230, 256));
    }

    #[test]
    fn level_cap_reports_best_estimate() {
        let ctx = PrecisionCtx::new(256).unwrap().with_max_level(3).unwrap();
        // Non-smooth integrand: |x - 1/3| converges only algebraically.
        let third = ctx.ratio(1, 3);
        match ctx.de_quad(Interval::Unit, |a| (&a.x - &third).abs()) {
            Err(LabError::Quadrature { estimate, bound, level }) => {
                assert_eq!(level, 3);
                assert!(bound.is_positive());
                assert!((estimate - ctx.ratio(5, 18)).abs() < Real::from_f64(1e-2, 64));
            }
            other => panic!("expected a convergence failure, got {other:?}"),
        }
    }

    #[test]
    fn stencils_are_exact_on_quartics() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let t = ctx.int(2);
        let d1 = ctx
            .fd_derivative::<_, LabError>(|s| Ok(s.square()), &ctx.one(), DerivOrder::First)
            .unwrap();
        assert!((&d1.value - 2).abs() < Real::pow2(-180, 256));
        let d2 = ctx
            .fd_derivative::<_, LabError>(|s| Ok(s.powi(3)), &t, DerivOrder::Second)
            .unwrap();
        assert!((&d2.value - 12).abs() < Real::pow2(-150, 256));
        let d4 = ctx
            .fd_derivative::<_, LabError>(|s| Ok(s.powi(4)), &t, DerivOrder::First)
            .unwrap();
        assert!((&d4.value - 32).abs() < Real::pow2(-180, 256));
    }
}
