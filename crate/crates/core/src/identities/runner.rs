use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::auxiliary::LadderIntegrals;
use crate::error::{LabError, Result};
use crate::pipeline::{Family, Pipeline};
use crate::precision::PrecisionCtx;
use crate::real::{Complex, Real};
use crate::weight::WeightParams;

use super::{
    difference, kummer, ladder, moments, ortho, p3, recurrence, riccati, sigma, sort_reports, t0, toda, Reporter,
    ResidualReport, Suite, Tolerances,
};

/// Parameter pair, `t` grid and degree range of a verification run.
#[derive(Clone, Debug)]
pub struct RunPlan {
    pub alpha: Real,
    pub beta: Real,
    pub t_grid: Vec<Real>,
    pub n_max: usize,
}

/// Degree, fixed `s = beta t`, and the increasing `beta` values of the
/// Painlevé III limit check.
#[derive(Clone, Debug)]
pub struct P3Plan {
    pub n: usize,
    pub s: Real,
    pub betas: Vec<Real>,
}

impl P3Plan {
    pub fn standard() -> Self {
        P3Plan {
            n: 1,
            s: Real::one(64),
            betas: [1e3, 1e4, 1e5].iter().map(|&b| Real::from_f64(b, 64)).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suites: BTreeSet<Suite>,
    pub tolerances: Tolerances,
    /// Seed of the sample points in the complex plane.
    pub seed: u64,
    /// Degree of the convergence-order measurement; `None` skips it.
    pub order_degree: Option<usize>,
    pub p3: P3Plan,
}

impl SuiteConfig {
    pub fn all(bits: usize) -> Self {
        SuiteConfig {
            suites: Suite::ALL.iter().copied().collect(),
            tolerances: Tolerances::new(bits),
            seed: 0x5eed,
            order_degree: Some(3),
            p3: P3Plan::standard(),
        }
    }

    fn has(&self, s: Suite) -> bool {
        self.suites.contains(&s)
    }
}

/// `count` points in the annulus `1.5 <= |z - 1/2| <= 3`, reproducible from
/// `seed`.
pub fn sample_points(count: usize, seed: u64, bits: usize) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let radius: f64 = rng.gen_range(1.5..=3.0);
            let angle: f64 = rng.gen_range(0.0..core::f64::consts::TAU);
            Complex::new(
                Real::from_f64(0.5 + radius * libm::cos(angle), bits),
                Real::from_f64(radius * libm::sin(angle), bits),
            )
        })
        .collect()
}

/// Coarse steps of the convergence-order measurement, as fractions of `t`.
const ORDER_STEPS: [i64; 3] = [64, 128, 256];

/// Runs the selected suites over the plan and returns the reports sorted by
/// identity, degree and `t`. Stencil suites are skipped at `t = 0`.
pub fn run(plan: &RunPlan, cfg: &SuiteConfig, ctx: &PrecisionCtx) -> Result<Vec<ResidualReport>> {
    let bits = ctx.bits();
    let mut rep = Reporter::new(&cfg.tolerances, ctx.residual_floor());
    let ladder_z = sample_points(8, cfg.seed, bits);
    let recurrence_z = sample_points(16, cfg.seed.wrapping_add(1), bits);
    let base = WeightParams::new(plan.alpha.clone(), plan.beta.clone(), Real::zero(bits))?;
    let needs_ints = cfg.has(Suite::Ortho) || cfg.has(Suite::Ladder);
    let stencil_suites = [Suite::Toda, Suite::Sigma, Suite::Riccati];

    for t in &plan.t_grid {
        let at = |e: LabError| e.within(format!("alpha = {}, beta = {}, t = {}", plan.alpha, plan.beta, t));
        let params = base.at_t(t.clone()).map_err(at)?;
        let p = if cfg.has(Suite::Moments) {
            Pipeline::build_with_routes(&params, plan.n_max, ctx)
        } else {
            Pipeline::build(&params, plan.n_max, ctx)
        }
        .map_err(at)?;

        if cfg.has(Suite::Moments) {
            moments::check(&p, &mut rep);
            moments::check_closed_form(&p, ctx, &mut rep).map_err(at)?;
        }
        let ints = if needs_ints {
            Some(LadderIntegrals::compute(&p.ortho, ctx).map_err(at)?)
        } else {
            None
        };
        if cfg.has(Suite::Ortho) {
            ortho::check(&p, ints.as_ref(), &recurrence_z, ctx, &mut rep).map_err(at)?;
        }
        if cfg.has(Suite::Ladder) {
            ladder::check(&p, ints.as_ref(), &ladder_z, &mut rep).map_err(at)?;
        }
        if cfg.has(Suite::Difference) {
            difference::check(&p, &mut rep);
        }
        if cfg.has(Suite::Recurrence) {
            recurrence::check(&p, &mut rep);
        }
        if cfg.has(Suite::Kummer) {
            kummer::check(&p, ctx, &mut rep).map_err(at)?;
        }
        if cfg.has(Suite::T0) {
            t0::check(&p, &mut rep);
        }
        if t.is_zero() {
            continue;
        }
        if stencil_suites.iter().any(|s| cfg.has(*s)) {
            let fam = Family::around(&p, ctx).map_err(at)?;
            if cfg.has(Suite::Toda) {
                toda::check(&fam, ctx, &mut rep).map_err(at)?;
            }
            if cfg.has(Suite::Sigma) {
                sigma::check(&fam, &mut rep).map_err(at)?;
            }
            if cfg.has(Suite::Riccati) {
                riccati::check(&fam, &mut rep).map_err(at)?;
            }
        }
        if let (true, Some(deg)) = (cfg.has(Suite::Toda), cfg.order_degree) {
            let small = PrecisionCtx::for_degree(deg);
            let center = Pipeline::build(&params, deg, &small).map_err(at)?;
            let mut fams = Vec::with_capacity(ORDER_STEPS.len());
            for d in ORDER_STEPS {
                fams.push(Family::with_step(&center, &(t / d), &small).map_err(at)?);
            }
            toda::order(&fams, &small, &mut rep).map_err(at)?;
        }
    }

    let pair = |e: LabError| e.within(format!("alpha = {}, beta = {}", plan.alpha, plan.beta));
    if cfg.has(Suite::Kummer) {
        kummer::asymptotics(&base, ctx, &mut rep).map_err(pair)?;
    }
    if cfg.has(Suite::T0) {
        if !plan.t_grid.iter().any(|t| t.is_zero()) {
            let p = Pipeline::build(&base, plan.n_max, ctx).map_err(pair)?;
            t0::check(&p, &mut rep);
        }
        t0::classical_limit(None, &plan.alpha, &plan.beta, t0::LIMIT_DEGREE, &mut rep);
    }
    if cfg.has(Suite::P3) {
        let plan3 = &cfg.p3;
        p3::check(plan3.n, &plan.alpha, &plan3.s, &plan3.betas, ctx, &mut rep)
            .map_err(|e| e.within("Painleve III limit"))?;
    }

    let mut reports = rep.reports;
    sort_reports(&mut reports);
    Ok(reports)
}
