//! Sampling estimators for range Rényi entropy.
//!
//! The workhorse is a frequency-moment estimator: with `p` the probability
//! of a sampled color, `p^(a-1)` has mean `sum p_i^a`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::approx_shannon::{
    ceil_count, check_unit, over_budget, probe_heavy, Branch, DualAccessOracle, Estimate, EstimatorConfig,
    EvalCache, SamplingIndex,
};
use crate::entropy::{ColorId, EntropyKind, EntropySummary, Order};
use crate::error::{Error, Result};
use crate::points::QueryRect;

/// Estimate of `sum_i (N_i/N)^a` over the colors of a box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub alpha: f64,
    pub value: f64,
    /// Relative error the sample count was chosen for.
    pub epsilon: f64,
    pub samples: usize,
    pub exact: bool,
}

/// Which sample-count rule the additive estimator followed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RenyiBranch {
    /// `max{1, 1/(a-1)^2} * a / D^2` was the smaller factor.
    SamplesOnly,
    /// `1 / (1 - 2^((1-a) D))^2` was the smaller factor.
    DualAccess,
}

/// The two sample-count factors `(samples-only, dual-access)`.
pub fn additive_factors(alpha: f64, delta: f64) -> (f64, f64) {
    let inv = 1.0 / ((alpha - 1.0) * (alpha - 1.0));
    let samples_only = inv.max(1.0) * alpha / (delta * delta);
    let q = 1.0 - (-(alpha - 1.0) * delta).exp2();
    (samples_only, 1.0 / (q * q))
}

/// Branch with the cheaper factor; ties go to samples-only.
pub fn choose_branch(alpha: f64, delta: f64) -> RenyiBranch {
    let (a, b) = additive_factors(alpha, delta);
    if b >= a {
        RenyiBranch::SamplesOnly
    } else {
        RenyiBranch::DualAccess
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    Order::new(alpha).map(|_| ())
}

/// Samples for a `(1 + eps)` moment estimate.
pub fn moment_samples(n: usize, alpha: f64, eps: f64, cfg: &EstimatorConfig) -> usize {
    let n = n.max(2) as f64;
    ceil_count(cfg.c_mom * alpha * n.powf(1.0 - 1.0 / alpha) * n.log2() / (eps * eps))
}

/// Samples for the additive Rényi estimator.
pub fn additive_renyi_samples(n: usize, alpha: f64, delta: f64, cfg: &EstimatorConfig) -> usize {
    let (a, b) = additive_factors(alpha, delta);
    let n = n.max(2) as f64;
    ceil_count(cfg.c_mom * a.min(b) * n.powf(1.0 - 1.0 / alpha) * n.log2())
}

fn exact_moment(index: &SamplingIndex, oracle: &DualAccessOracle<'_>, alpha: f64) -> Result<f64> {
    let mut h = crate::rangetree::histogram_via_tree(index.tree(), index.points(), oracle.rect())?;
    if let Some(c) = oracle.excluded() {
        h.remove(c);
    }
    let n = h.total();
    Ok(h.weights().map(|w| (w / n).powf(alpha)).sum())
}

fn moment_on<R: Rng + ?Sized>(
    index: &SamplingIndex,
    oracle: &DualAccessOracle<'_>,
    alpha: f64,
    eps: f64,
    t: usize,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<MomentEstimate> {
    if oracle.total() <= 0.0 {
        return Err(Error::EmptyRange);
    }
    if over_budget(index, t, cfg) {
        let value = exact_moment(index, oracle, alpha)?;
        return Ok(MomentEstimate { alpha, value, epsilon: eps, samples: 0, exact: true });
    }
    let mut cache = EvalCache::new(oracle);
    let value = cache.mean_of(t, rng, |p| p.powf(alpha - 1.0))?;
    Ok(MomentEstimate { alpha, value: value.min(1.0), epsilon: eps, samples: t, exact: false })
}

/// Estimates `sum_i p_i^a` over the colors of `rect` to relative error `eps`.
pub fn estimate_moment<R: Rng + ?Sized>(
    index: &SamplingIndex,
    rect: &QueryRect,
    alpha: f64,
    eps: f64,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<MomentEstimate> {
    check_alpha(alpha)?;
    check_unit("epsilon", eps)?;
    cfg.validate()?;
    let oracle = index.oracle(rect)?;
    moment_on(index, &oracle, alpha, eps, moment_samples(index.len(), alpha, eps, cfg), cfg, rng)
}

/// Like [`estimate_moment`] over the colors other than `excluded`, with
/// probabilities taken relative to the reduced total.
pub fn estimate_moment_excluding<R: Rng + ?Sized>(
    index: &SamplingIndex,
    rect: &QueryRect,
    alpha: f64,
    eps: f64,
    excluded: ColorId,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<MomentEstimate> {
    check_alpha(alpha)?;
    check_unit("epsilon", eps)?;
    cfg.validate()?;
    let oracle = index.oracle_excluding(rect, excluded)?;
    moment_on(index, &oracle, alpha, eps, moment_samples(index.len(), alpha, eps, cfg), cfg, rng)
}

fn renyi_from_moment(alpha: f64, m: f64) -> f64 {
    if m <= 0.0 {
        return 0.0;
    }
    (-m.log2() / (alpha - 1.0)).max(0.0)
}

/// Estimate within `delta` of the order-`alpha` Rényi entropy of `rect`.
pub fn estimate_additive_renyi<R: Rng + ?Sized>(
    index: &SamplingIndex,
    rect: &QueryRect,
    alpha: f64,
    delta: f64,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<Estimate> {
    check_alpha(alpha)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    cfg.validate()?;
    let oracle = index.oracle(rect)?;
    let t = additive_renyi_samples(index.len(), alpha, delta, cfg);
    let m = moment_on(index, &oracle, alpha, delta, t, cfg, rng)?;
    Ok(Estimate {
        summary: EntropySummary { kind: EntropyKind::renyi(alpha)?, count: oracle.total(), value: renyi_from_moment(alpha, m.value) },
        branch: if m.exact { Branch::Exact } else { Branch::Sampled },
        samples: m.samples,
        heavy: None,
    })
}

/// Rényi entropy from the heavy color's exact share `p`, an estimate
/// `rest_moment` of the moment of the other colors relative to their own total,
/// and an estimate `moment` of the full moment.
pub fn combine_heavy_renyi(alpha: f64, p: f64, rest_moment: f64, moment: f64) -> f64 {
    let h1 = 1.0 - p.powf(alpha);
    let h2 = rest_moment * (1.0 - p).powf(alpha);
    let bar = (h1 - h2).max(0.0);
    if moment <= 0.0 {
        return 0.0;
    }
    (bar / moment + 1.0).log2() / (alpha - 1.0)
}

/// Relative accuracies `(e1, e2)` of the full and the color-excluded moment
/// estimates in the heavy branch.
pub fn heavy_accuracies(alpha: f64, eps: f64, cfg: &EstimatorConfig) -> (f64, f64) {
    let e0 = eps / cfg.c1;
    let e1 = e0 / 3.0;
    let e2 = if alpha <= 2.0 { (alpha - 1.0) * e1 / cfg.c2 } else { e1 / cfg.c2 };
    (e1, e2)
}

/// Estimate within a factor `1 + eps` of the order-`alpha` Rényi entropy of `rect`.
pub fn estimate_multiplicative_renyi<R: Rng + ?Sized>(
    index: &SamplingIndex,
    rect: &QueryRect,
    alpha: f64,
    eps: f64,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<Estimate> {
    check_alpha(alpha)?;
    check_unit("epsilon", eps)?;
    cfg.validate()?;
    let kind = EntropyKind::renyi(alpha)?;
    let oracle = index.oracle(rect)?;
    if oracle.total() <= 0.0 {
        return Err(Error::EmptyRange);
    }
    let total = oracle.total();
    let summary = |value: f64| EntropySummary { kind, count: total, value };
    let (heavy, probes) = probe_heavy(index, &oracle, cfg, rng)?;
    let Some(hc) = heavy else {
        let delta = 1.5f64.log2() * eps;
        let t = additive_renyi_samples(index.len(), alpha, delta, cfg);
        let m = moment_on(index, &oracle, alpha, delta, t, cfg, rng)?;
        let branch = if m.exact { Branch::Exact } else { Branch::Sampled };
        return Ok(Estimate { summary: summary(renyi_from_moment(alpha, m.value)), branch, samples: probes + m.samples, heavy });
    };
    if hc.weight >= total {
        return Ok(Estimate { summary: summary(0.0), branch: Branch::SingleColor, samples: probes, heavy });
    }
    let (e1, e2) = heavy_accuracies(alpha, eps, cfg);
    let rest = index.oracle_excluding(rect, hc.color)?;
    let m_rest = moment_on(index, &rest, alpha, e2, moment_samples(index.len(), alpha, e2, cfg), cfg, rng)?;
    let m_all = moment_on(index, &oracle, alpha, e1, moment_samples(index.len(), alpha, e1, cfg), cfg, rng)?;
    let value = combine_heavy_renyi(alpha, hc.ratio(), m_rest.value, m_all.value);
    let branch = if m_rest.exact || m_all.exact { Branch::Exact } else { Branch::Heavy };
    Ok(Estimate { summary: summary(value), branch, samples: probes + m_rest.samples + m_all.samples, heavy })
}
