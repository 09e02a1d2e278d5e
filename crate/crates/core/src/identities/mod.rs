//! Every identity of the theory as a normalized residual.
//!
//! A residual is `|sum of terms| / (sum of |terms| + floor)`, with the terms
//! being the additive pieces of `LHS - RHS`; the floor `10^-(bits/2)` keeps
//! `0/0` away. Each identity is registered once in [`REGISTRY`] with a
//! tolerance class, and the reporter refuses names that are not registered.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{LabError, Result};
use crate::real::{Complex, Real};

pub mod difference;
pub mod kummer;
pub mod ladder;
pub mod moments;
pub mod ortho;
pub mod p3;
pub mod recurrence;
pub mod riccati;
mod runner;
pub mod sigma;
pub mod t0;
pub mod toda;

pub use runner::{run, sample_points, P3Plan, RunPlan, SuiteConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Moments,
    Ortho,
    Ladder,
    Difference,
    Recurrence,
    Toda,
    Sigma,
    Riccati,
    Kummer,
    T0,
    P3,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Moments,
        Suite::Ortho,
        Suite::Ladder,
        Suite::Difference,
        Suite::Recurrence,
        Suite::Toda,
        Suite::Sigma,
        Suite::Riccati,
        Suite::Kummer,
        Suite::T0,
        Suite::P3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Moments => "moments",
            Suite::Ortho => "ortho",
            Suite::Ladder => "ladder",
            Suite::Difference => "difference",
            Suite::Recurrence => "recurrence",
            Suite::Toda => "toda",
            Suite::Sigma => "sigma",
            Suite::Riccati => "riccati",
            Suite::Kummer => "kummer",
            Suite::T0 => "t0",
            Suite::P3 => "p3",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl core::fmt::Display for Suite {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Groups of identities sharing a default tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ToleranceClass {
    /// Exact identities between pipeline quantities.
    Algebraic,
    /// Formulas reconstructing recurrence data, and the difference equation.
    Recurrence,
    /// Hankel determinant against the product of norms, `10^-(bits/4)`.
    Determinant,
    /// Moment route disagreement in units of the combined error bound.
    Route,
    /// Closed forms at `t = 0`.
    Anchor,
    /// Kummer `U` ratios at `n = 0`.
    Kummer,
    /// One stencil derivative.
    Stencil,
    /// Riccati-type relations with one stencil derivative.
    Riccati,
    /// The second-order factor built from first and second derivatives.
    TwoOde,
    /// Second-order ODE checks with two stencil orders.
    TwoStencil,
    /// Distance of a measured convergence order from 4.
    Order,
    /// Inverse normalized size of a factor that must stay away from zero.
    Nonvanishing,
    /// Limits (`n -> infinity`, `beta -> infinity`).
    Limit,
    /// Distance to the `t = 0` value at small `t`.
    Continuity,
    /// Ratio of the largest to the smallest of a bounded sequence.
    Spread,
    /// Ratio of successive residuals in a limit.
    Decay,
}

impl ToleranceClass {
    pub const ALL: [ToleranceClass; 16] = [
        ToleranceClass::Algebraic,
        ToleranceClass::Recurrence,
        ToleranceClass::Determinant,
        ToleranceClass::Route,
        ToleranceClass::Anchor,
        ToleranceClass::Kummer,
        ToleranceClass::Stencil,
        ToleranceClass::Riccati,
        ToleranceClass::TwoOde,
        ToleranceClass::TwoStencil,
        ToleranceClass::Order,
        ToleranceClass::Nonvanishing,
        ToleranceClass::Limit,
        ToleranceClass::Continuity,
        ToleranceClass::Spread,
        ToleranceClass::Decay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ToleranceClass::Algebraic => "algebraic",
            ToleranceClass::Recurrence => "recurrence",
            ToleranceClass::Determinant => "determinant",
            ToleranceClass::Route => "route",
            ToleranceClass::Anchor => "anchor",
            ToleranceClass::Kummer => "kummer",
            ToleranceClass::Stencil => "stencil",
            ToleranceClass::Riccati => "riccati",
            ToleranceClass::TwoOde => "two-ode",
            ToleranceClass::TwoStencil => "two-stencil",
            ToleranceClass::Order => "order",
            ToleranceClass::Nonvanishing => "nonvanishing",
            ToleranceClass::Limit => "limit",
            ToleranceClass::Continuity => "continuity",
            ToleranceClass::Spread => "spread",
            ToleranceClass::Decay => "decay",
        }
    }

    pub fn parse(s: &str) -> Option<ToleranceClass> {
        ToleranceClass::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn default_value(self, bits: usize) -> Real {
        let ten_pow = |k: u32| Real::from_i64(10, bits).powi(k).recip();
        match self {
            ToleranceClass::Algebraic => ten_pow(40),
            ToleranceClass::Recurrence => ten_pow(35),
            ToleranceClass::Determinant => ten_pow((bits / 4) as u32),
            ToleranceClass::Route => Real::one(bits),
            ToleranceClass::Anchor => ten_pow(30),
            ToleranceClass::Kummer => ten_pow(35),
            ToleranceClass::Stencil => ten_pow(15),
            ToleranceClass::Riccati => ten_pow(18),
            ToleranceClass::TwoOde => ten_pow(12),
            ToleranceClass::TwoStencil => ten_pow(10),
            ToleranceClass::Order => Real::ratio(1, 2, bits),
            ToleranceClass::Nonvanishing => Real::from_i64(1000, bits),
            ToleranceClass::Limit => ten_pow(3),
            ToleranceClass::Continuity => ten_pow(2),
            ToleranceClass::Spread => Real::from_i64(4, bits),
            ToleranceClass::Decay => Real::ratio(1, 2, bits),
        }
    }
}

/// A registered identity.
#[derive(Clone, Copy, Debug)]
pub struct Identity {
    pub name: &'static str,
    pub suite: Suite,
    pub class: ToleranceClass,
    pub statement: &'static str,
}

macro_rules! registry {
    ($($name:literal, $suite:ident, $class:ident, $stmt:literal;)*) => {
        /// Every identity the suites evaluate.
        pub static REGISTRY: &[Identity] = &[
            $(Identity {
                name: $name,
                suite: Suite::$suite,
                class: ToleranceClass::$class,
                statement: $stmt,
            },)*
        ];
    };
}

registry! {
    "moment-routes", Moments, Route, "|quadrature - Kummer U| <= combined bound for every unshifted moment";
    "moment-positivity", Moments, Algebraic, "every tabulated moment is positive";
    "moment-closed-form", Moments, Algebraic, "quadrature moments at t = 0 equal Gamma(a+k+1)Gamma(b+1)/Gamma(a+b+k+2)";
    "hankel-determinant", Ortho, Determinant, "det(mu_(i+j)) = prod h_j";
    "alpha-from-p1", Ortho, Algebraic, "alpha_n = p1(n) - p1(n+1)";
    "alpha-sum-p1", Ortho, Algebraic, "sum_(j<n) alpha_j = -p1(n)";
    "three-term-recurrence", Ortho, Algebraic, "z P_n = P_(n+1) + alpha_n P_n + beta_n P_(n-1) on the stored coefficients";
    "support-bounds", Ortho, Algebraic, "0 < alpha_n < 1 and 0 < beta_n <= 1/4";
    "orthogonality", Ortho, Algebraic, "int P_(n-1) P_n w = 0 by quadrature";
    "integration-by-parts", Ortho, Algebraic, "int P_n^2 w (alpha y + t)/y^2 = -beta int P_n^2 w/(y-1)";
    "ladder-raising", Ladder, Algebraic, "P_n' + B_n P_n = beta_n A_n P_(n-1)";
    "ladder-lowering", Ladder, Algebraic, "P_(n-1)' - (B_n + v') P_(n-1) = -A_(n-1) P_n";
    "compat-sum", Ladder, Algebraic, "B_(n+1) + B_n = (z - alpha_n) A_n - v'";
    "compat-difference", Ladder, Algebraic, "1 + (z - alpha_n)(B_(n+1) - B_n) = beta_(n+1) A_(n+1) - beta_n A_(n-1)";
    "compat-quadratic", Ladder, Algebraic, "B_n^2 + v' B_n + sum_(j<n) A_j = beta_n A_n A_(n-1)";
    "ladder-integrals", Ladder, Algebraic, "partial-fraction A_n, B_n equal their defining integrals";
    "rstar-step", Difference, Algebraic, "r*_(n+1) + r*_n = t - alpha_n R*_n";
    "big-r-gap", Difference, Algebraic, "R*_n - R_n = -(2n+1+alpha+beta)";
    "r-step", Difference, Algebraic, "r_(n+1) + r_n = (1 - alpha_n) R_n - beta";
    "rstar-quadratic", Difference, Algebraic, "r*_n^2 - t r*_n = beta_n R*_n R*_(n-1)";
    "r-quadratic", Difference, Algebraic, "r_n^2 + beta r_n = beta_n R_n R_(n-1)";
    "mixed-quadratic", Difference, Algebraic, "(t - 2r*_n)(n - r_n) - alpha r*_n = beta_n (R*_n R_(n-1) + R*_(n-1) R_n)";
    "rstar-partial-sum", Difference, Algebraic, "sum_(j<n) R*_j = n(t - alpha - n) - (2n+alpha+beta)(r*_n - r_n)";
    "r-difference", Difference, Algebraic, "r_(n+1) - r_n - r*_(n+1) + r*_n = alpha_n";
    "p1-from-aux", Difference, Algebraic, "r*_n - r_n = p1(n)";
    "alpha-from-aux", Recurrence, Recurrence, "(2n+2+alpha+beta) alpha_n = 2(r*_n - r_n) + R_n - beta - t";
    "beta-from-aux", Recurrence, Recurrence, "(1 - (2n+alpha+beta)^2) beta_n = -(r*_n - r_n)^2 - (beta+t) r_n + (t-alpha-2n) r*_n + n t";
    "h-from-p1", Recurrence, Recurrence, "H_n = (2n+alpha+beta) p1(n) + n(n+alpha-t)";
    "big-r-from-h", Recurrence, Recurrence, "R_n = H_n - H_(n+1) + 2n+1+alpha+beta";
    "r-from-p1", Recurrence, Recurrence, "(2n+alpha+beta) r_n = -p1^2 - (2n+alpha-t) p1 + n t - (1-(2n+alpha+beta)^2) beta_n";
    "beta-from-p1", Recurrence, Recurrence, "beta_n Y_n = X_n";
    "discrete-sigma", Recurrence, Recurrence, "second-order difference equation for H~_n";
    "toda-alpha", Toda, Stencil, "t alpha_n' = r*_n - r*_(n+1)";
    "toda-beta", Toda, Stencil, "t beta_n' = (R*_(n-1) - R*_n) beta_n";
    "p1-flow", Toda, Stencil, "t p1(n)' = r*_n";
    "rstar-flow", Toda, Stencil, "t r*_n' = r*_n + t r_n'";
    "log-det-flow", Toda, Stencil, "t (ln D_n)' = -sum_(j<n) R*_j";
    "toda-order", Toda, Order, "stencil residuals of the flows shrink like h^4";
    "sigma-ode", Sigma, Stencil, "(t H'')^2 = (n(n+alpha+beta) - H + (alpha+t) H')^2 + 4 H'(t H' - H)(beta - H')";
    "sigma-ode-shifted", Sigma, Stencil, "the same equation written for H~_n = H_n - n(n+alpha+beta)";
    "rstar-from-h", Sigma, Algebraic, "r*_n = (n t + t H_n')/(2n+alpha+beta)";
    "r-from-h", Sigma, Algebraic, "r_n = (n(n+alpha) + t H_n' - H_n)/(2n+alpha+beta)";
    "h-prime-stencil", Sigma, Stencil, "-H_n' = n - (2n+alpha+beta) r*_n/t against a stencil of H_n";
    "r-rstar-ode", Sigma, Stencil, "first-order quadratic equation for r_n with r*_n";
    "riccati-big-r", Riccati, Riccati, "t R_n' = 2R_n(r*_n - r_n) + (2n+1+alpha+beta)(2r_n - R_n + beta) + (R_n - beta - t) R_n";
    "rstar-from-riccati", Riccati, Riccati, "r*_n recovered from R_n, R_n' and r_n";
    "quadratic-big-r", Riccati, Algebraic, "quadratic relation between R_n, r_n and r*_n";
    "quadratic-big-r-flow", Riccati, Riccati, "quadratic relation between R_n, r_n, r*_n and t r_n'";
    "big-r-representation", Riccati, Riccati, "R_n in terms of r_n, r*_n and t r_n'";
    "big-r-inverse-representation", Riccati, Riccati, "1/R_n in terms of r_n, r*_n and t r_n'";
    "r-from-big-r", Riccati, Riccati, "r_n = F(R_n, R_n') by solving the two representations";
    "r-prime-from-big-r", Riccati, Riccati, "r_n' = G(R_n, R_n') by solving the two representations";
    "discarded-riccati-factor", Riccati, Nonvanishing, "|first factor of the factored second-order equation| exceeds 1/tolerance";
    "two-ode-factor", Riccati, TwoOde, "the second-order factor of the factored equation vanishes";
    "two-ode-product", Riccati, Algebraic, "product of the two factors equals the distributed left side";
    "painleve-v", Riccati, TwoStencil, "S_n = R_n/(2n+1+alpha+beta) satisfies Painleve V";
    "alpha0-kummer", Kummer, Kummer, "alpha_0 = U(1+beta,-alpha-1,t)/U(1+beta,-alpha,t)";
    "big-r0-kummer", Kummer, Kummer, "R_0 = U(beta,-alpha,t)/U(1+beta,-alpha,t)";
    "big-r0-large-t", Kummer, Spread, "t(R_0 - t - (alpha+2beta+2)) stays bounded for large t";
    "big-r0-small-t", Kummer, Continuity, "R_0(t) -> 1+alpha+beta as t -> 0";
    "t0-alpha", T0, Anchor, "alpha_n(0) closed form";
    "t0-beta", T0, Anchor, "beta_n(0) closed form";
    "t0-big-r", T0, Anchor, "R_n(0) = 2n+1+alpha+beta";
    "t0-r", T0, Anchor, "r_n(0) = n(n+alpha)/(2n+alpha+beta)";
    "t0-classical-trend", T0, Algebraic, "|alpha_n(0) - 1/2| and |beta_n(0) - 1/16| do not increase with n";
    "t0-classical-limit", T0, Limit, "|alpha_n(0) - 1/2| and |beta_n(0) - 1/16| are small at n = 200";
    "painleve-iii-limit", P3, Limit, "sigma-form Painleve III residual at the largest beta";
    "painleve-iii-decay", P3, Decay, "the Painleve III residual shrinks as beta grows";
}

pub fn lookup(name: &str) -> Option<&'static Identity> {
    REGISTRY.iter().find(|i| i.name == name)
}

/// Tolerance defaults with overrides by class or identity name; an identity
/// override beats a class override.
#[derive(Clone, Debug)]
pub struct Tolerances {
    bits: usize,
    overrides: BTreeMap<String, Real>,
}

impl Tolerances {
    pub fn new(bits: usize) -> Self {
        Tolerances {
            bits,
            overrides: BTreeMap::new(),
        }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn set(&mut self, key: &str, value: Real) -> Result<()> {
        if ToleranceClass::parse(key).is_none() && lookup(key).is_none() {
            return Err(LabError::InvalidParameter(alloc::format!(
                "unknown tolerance class or identity {key:?}"
            )));
        }
        if !value.is_positive() {
            return Err(LabError::InvalidParameter(alloc::format!(
                "tolerance for {key} must be positive, got {value}"
            )));
        }
        self.overrides.insert(key.to_string(), value);
        Ok(())
    }

    pub fn for_identity(&self, id: &Identity) -> Real {
        if let Some(v) = self.overrides.get(id.name) {
            return v.clone();
        }
        if let Some(v) = self.overrides.get(id.class.name()) {
            return v.clone();
        }
        id.class.default_value(self.bits)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The check sits at a singular point of the identity.
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// One evaluated identity at one point.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub identity: &'static str,
    pub suite: Suite,
    pub class: ToleranceClass,
    /// Polynomial index; moment reports use it for `k`.
    pub n: usize,
    pub t: Real,
    pub z: Option<Complex>,
    pub residual: Real,
    pub tolerance: Real,
    pub status: Status,
    /// Stencil discrepancy on the residual's scale, for stencil checks.
    pub error_proxy: Option<Real>,
    pub notes: String,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// `|sum| / (sum |term| + floor)`.
pub fn normalized_residual(terms: &[Real], floor: &Real) -> Real {
    let mut sum = Real::zero(floor.bits());
    let mut scale = floor.clone();
    for t in terms {
        sum += t;
        scale += t.abs();
    }
    sum.abs() / scale
}

pub fn normalized_residual_complex(terms: &[Complex], floor: &Real) -> Real {
    let mut sum = Complex::from_real(Real::zero(floor.bits()));
    let mut scale = floor.clone();
    for t in terms {
        sum = &sum + t;
        scale += t.abs();
    }
    sum.abs() / scale
}

fn term_scale(terms: &[Real], floor: &Real) -> Real {
    terms.iter().fold(floor.clone(), |acc, t| acc + t.abs())
}

/// Collects reports, resolving classes and tolerances from the registry.
#[derive(Debug)]
pub struct Reporter<'a> {
    tolerances: &'a Tolerances,
    floor: Real,
    pub reports: Vec<ResidualReport>,
}

impl<'a> Reporter<'a> {
    pub fn new(tolerances: &'a Tolerances, floor: Real) -> Self {
        Reporter {
            tolerances,
            floor,
            reports: Vec::new(),
        }
    }

    pub fn floor(&self) -> &Real {
        &self.floor
    }

    /// Records a residual directly.
    pub fn residual(&mut self, name: &'static str, n: usize, t: &Real, residual: Real) -> &mut ResidualReport {
        let id = lookup(name).unwrap_or_else(|| panic!("identity {name} is not registered"));
        let tolerance = self.tolerances.for_identity(id);
        let status = if residual.is_finite() && residual < tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        self.reports.push(ResidualReport {
            identity: id.name,
            suite: id.suite,
            class: id.class,
            n,
            t: t.clone(),
            z: None,
            residual,
            tolerance,
            status,
            error_proxy: None,
            notes: String::new(),
        });
        self.reports.last_mut().expect("just pushed")
    }

    pub fn terms(&mut self, name: &'static str, n: usize, t: &Real, terms: &[Real]) -> &mut ResidualReport {
        let r = normalized_residual(terms, &self.floor);
        self.residual(name, n, t, r)
    }

    /// Stencil check: the terms plus the stencil error proxy of the
    /// differentiated term, normalized the same way.
    pub fn stencil_terms(&mut self, name: &'static str, n: usize, t: &Real, terms: &[Real], proxy: &Real) -> &mut ResidualReport {
        let scaled = proxy / term_scale(terms, &self.floor);
        let rep = self.terms(name, n, t, terms);
        rep.error_proxy = Some(scaled);
        rep
    }

    pub fn complex_terms(&mut self, name: &'static str, n: usize, t: &Real, z: &Complex, terms: &[Complex]) -> &mut ResidualReport {
        let r = normalized_residual_complex(terms, &self.floor);
        let rep = self.residual(name, n, t, r);
        rep.z = Some(z.clone());
        rep
    }
}

impl ResidualReport {
    pub fn note(&mut self, s: &str) -> &mut Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(s);
        self
    }

    pub fn inconclusive(&mut self, why: &str) -> &mut Self {
        self.status = Status::Inconclusive;
        self.note(why)
    }
}

/// Sorts by identity name, then `n`, then `t`.
pub fn sort_reports(reports: &mut [ResidualReport]) {
    reports.sort_by(|a, b| {
        a.identity
            .cmp(b.identity)
            .then(a.n.cmp(&b.n))
            .then(a.t.partial_cmp(&b.t).unwrap_or(core::cmp::Ordering::Equal))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique_and_resolvable() {
        for (i, a) in REGISTRY.iter().enumerate() {
            assert!(REGISTRY[i + 1..].iter().all(|b| b.name != a.name), "{}", a.name);
            assert_eq!(lookup(a.name).unwrap().suite, a.suite);
        }
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(s));
            assert!(REGISTRY.iter().any(|i| i.suite == s), "suite {s} is empty");
        }
        for c in ToleranceClass::ALL {
            assert_eq!(ToleranceClass::parse(c.name()), Some(c));
        }
    }

    #[test]
    fn tolerance_overrides_resolve_by_precedence() {
        let mut tol = Tolerances::new(256);
        let id = lookup("sigma-ode").unwrap();
        assert!(tol.for_identity(id) < Real::from_f64(1.1e-15, 64));
        tol.set("stencil", Real::from_f64(1e-3, 64)).unwrap();
        assert_eq!(tol.for_identity(id).to_f64(), 1e-3);
        tol.set("sigma-ode", Real::from_f64(1e-5, 64)).unwrap();
        assert_eq!(tol.for_identity(id).to_f64(), 1e-5);
        assert!(tol.set("no-such-thing", Real::one(64)).is_err());
        assert!(tol.set("stencil", Real::zero(64)).is_err());
    }

    #[test]
    fn residual_normalization() {
        let floor = Real::pow2(-200, 256);
        let terms = [Real::from_i64(3, 256), Real::from_i64(-3, 256)];
        assert!(normalized_residual(&terms, &floor).is_zero());
        let terms = [Real::from_i64(1, 256), Real::from_i64(1, 256)];
        assert!((normalized_residual(&terms, &floor) - 1).abs() < Real::pow2(-190, 64));
        let zero = [Real::zero(256)];
        assert!(normalized_residual(&zero, &floor).is_zero());
    }

    #[test]
    fn reporter_status() {
        let tol = Tolerances::new(256);
        let mut rep = Reporter::new(&tol, Real::pow2(-400, 256));
        let t = Real::one(256);
        rep.terms("big-r-gap", 0, &t, &[Real::one(256), -Real::one(256)]);
        rep.terms("big-r-gap", 1, &t, &[Real::one(256), Real::one(256)]);
        assert_eq!(rep.reports[0].status, Status::Pass);
        assert_eq!(rep.reports[1].status, Status::Fail);
    }

    #[test]
    #[should_panic(expected = "not registered")]
    fn unregistered_identity_panics() {
        let tol = Tolerances::new(128);
        let mut rep = Reporter::new(&tol, Real::pow2(-64, 128));
        rep.residual("made-up", 0, &Real::one(128), Real::zero(128));
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use crate::pipeline::Pipeline;
    use crate::precision::PrecisionCtx;
    use crate::weight::WeightParams;

    pub fn pipeline(alpha: f64, beta: f64, t: f64, n_max: usize, bits: usize) -> (Pipeline, PrecisionCtx) {
        let ctx = PrecisionCtx::new(bits).unwrap();
        let p = WeightParams::from_f64(alpha, beta, t, bits).unwrap();
        (Pipeline::build(&p, n_max, &ctx).unwrap(), ctx)
    }

    /// Runs `f` against a fresh reporter and returns its reports.
    pub fn collect<F>(ctx: &PrecisionCtx, f: F) -> Vec<ResidualReport>
    where
        F: FnOnce(&mut Reporter),
    {
        let tol = Tolerances::new(ctx.bits());
        let mut rep = Reporter::new(&tol, ctx.residual_floor());
        f(&mut rep);
        rep.reports
    }

    pub fn find<'a>(reports: &'a [ResidualReport], name: &str, n: usize) -> &'a ResidualReport {
        reports
            .iter()
            .find(|r| r.identity == name && r.n == n)
            .unwrap_or_else(|| panic!("no report for {name} at n = {n}"))
    }

    /// Asserts every report passes and stays below `bound`.
    pub fn all_below(reports: &[ResidualReport], bound: f64) {
        assert!(!reports.is_empty());
        let b = Real::from_f64(bound, 64);
        for r in reports {
            assert_eq!(r.status, Status::Pass, "{} at n = {}: {}", r.identity, r.n, r.residual);
            assert!(r.residual < b, "{} at n = {}: {}", r.identity, r.n, r.residual);
        }
    }
}
