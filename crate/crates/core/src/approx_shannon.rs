//! Sampling estimators for range Shannon entropy.
//!
//! A [`SamplingIndex`] holds a color-aware range tree for weighted sampling and
//! one counting tree per color. Bound to a query box it becomes a
//! [`DualAccessOracle`]: `samp` draws a color with probability equal to its
//! share of the box weight, `eval` returns that share exactly.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{self, ColorId, EntropyKind, EntropySummary};
use crate::error::{Error, Result};
use crate::points::{ColoredPointSet, QueryRect};
use crate::rangetree::{ColorCounter, RangeSampler, RangeTree};

/// Sample-count constants and the exact fallback switch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    /// Additive Shannon: `c_add * log2(n/D)^2 * log2 n / D^2` samples.
    pub c_add: f64,
    /// Multiplicative Shannon without a heavy color: `c_mult * log2 n / (0.9 e^2)`.
    pub c_mult: f64,
    /// Heavy-color probe: `c_heavy * log(2n) / log 3` samples.
    pub c_heavy: f64,
    /// Frequency moments: `c_mom * a * n^(1-1/a) * log2 n / e^2`.
    pub c_mom: f64,
    /// Accuracy split of the heavy Rényi branch: e0 = e / c1.
    pub c1: f64,
    /// Accuracy split of the heavy Rényi branch: e2 = e1 / c2 (times a - 1 when a <= 2).
    pub c2: f64,
    /// Answer exactly when the sample count would exceed `n log2 n`.
    pub fallback: bool,
    /// Seed used by [`EstimatorConfig::rng`].
    pub seed: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig { c_add: 1.0, c_mult: 1.0, c_heavy: 1.0, c_mom: 1.0, c1: 8.0, c2: 8.0, fallback: true, seed: 0 }
    }
}

impl EstimatorConfig {
    pub fn with_seed(seed: u64) -> Self {
        EstimatorConfig { seed, ..Default::default() }
    }

    /// A fresh generator seeded from `seed`.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, c) in [
            ("c_add", self.c_add),
            ("c_mult", self.c_mult),
            ("c_heavy", self.c_heavy),
            ("c_mom", self.c_mom),
            ("c1", self.c1),
            ("c2", self.c2),
        ] {
            if !(c.is_finite() && c >= 1.0) {
                return Err(Error::InvalidParameter(format!("{name} must be a finite number >= 1, got {c}")));
            }
        }
        Ok(())
    }
}

/// Checks that an accuracy parameter lies strictly between 0 and 1.
pub(crate) fn check_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {x}")))
    }
}

/// Which rule produced an estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Plain sampling estimate over the whole box.
    Sampled,
    /// A verified heavy color was split off and the rest estimated.
    Heavy,
    /// The only color in the box; the answer is exactly 0.
    SingleColor,
    /// The sample budget exceeded `n log2 n`; the box was scanned.
    Exact,
}

/// A color holding more than 2/3 of the box weight, with exact weights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeavyColor {
    pub color: ColorId,
    pub weight: f64,
    pub total: f64,
}

impl HeavyColor {
    pub fn ratio(&self) -> f64 {
        self.weight / self.total
    }
}

/// Result of a randomized query.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    /// `count` is the exact box weight, `value` the estimate.
    pub summary: EntropySummary,
    pub branch: Branch,
    /// Number of SAMP calls spent.
    pub samples: usize,
    pub heavy: Option<HeavyColor>,
}

impl Estimate {
    pub fn value(&self) -> f64 {
        self.summary.value
    }

    pub fn fell_back(&self) -> bool {
        self.branch == Branch::Exact
    }
}

/// Trees for sampling and per-color counting.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplingIndex {
    points: ColoredPointSet,
    tree: RangeTree,
    counter: ColorCounter,
}

impl SamplingIndex {
    pub fn build(points: &ColoredPointSet) -> Self {
        SamplingIndex {
            points: points.clone(),
            tree: RangeTree::build_color_aware(points),
            counter: ColorCounter::build(points),
        }
    }

    pub fn points(&self) -> &ColoredPointSet {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub(crate) fn tree(&self) -> &RangeTree {
        &self.tree
    }

    /// The `n` used in sample-count formulas (at least 2).
    pub(crate) fn log_n(&self) -> (f64, f64) {
        let n = self.points.len().max(2) as f64;
        (n, n.log2())
    }

    /// Dual-access oracle for the points in `rect`.
    pub fn oracle(&self, rect: &QueryRect) -> Result<DualAccessOracle<'_>> {
        let sampler = self.tree.sampler(rect)?;
        let total = sampler.total_weight();
        Ok(DualAccessOracle { index: self, rect: rect.clone(), sampler, total, excluded: None })
    }

    /// Dual-access oracle for the points in `rect` whose color is not `color`.
    pub fn oracle_excluding(&self, rect: &QueryRect, color: ColorId) -> Result<DualAccessOracle<'_>> {
        let sampler = self.tree.sampler_excluding(rect, color)?;
        let total = sampler.total_weight();
        Ok(DualAccessOracle { index: self, rect: rect.clone(), sampler, total, excluded: Some(color) })
    }

    /// Exact entropy of the box by reporting its points.
    pub fn exact(&self, rect: &QueryRect, kind: EntropyKind) -> Result<EntropySummary> {
        let h = crate::rangetree::histogram_via_tree(&self.tree, &self.points, rect)?;
        Ok(entropy::entropy(&h, kind))
    }

    /// Exact entropy of the box without `color`.
    pub fn exact_excluding(&self, rect: &QueryRect, color: ColorId, kind: EntropyKind) -> Result<EntropySummary> {
        let mut h = crate::rangetree::histogram_via_tree(&self.tree, &self.points, rect)?;
        h.remove(color);
        Ok(entropy::entropy(&h, kind))
    }
}

/// SAMP and EVAL for one query box.
#[derive(Clone, Debug)]
pub struct DualAccessOracle<'a> {
    index: &'a SamplingIndex,
    rect: QueryRect,
    sampler: RangeSampler<'a>,
    total: f64,
    excluded: Option<ColorId>,
}

impl<'a> DualAccessOracle<'a> {
    /// Weight of the distribution's support.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn rect(&self) -> &QueryRect {
        &self.rect
    }

    pub fn excluded(&self) -> Option<ColorId> {
        self.excluded
    }

    /// Draws a color with probability proportional to its weight in the box.
    pub fn samp<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<ColorId> {
        self.sampler.sample(rng).map(|id| self.index.points.color(id as usize))
    }

    /// Exact weight of `color` in the box (0 for the excluded color).
    pub fn weight(&self, color: ColorId) -> Result<f64> {
        if Some(color) == self.excluded {
            return Ok(0.0);
        }
        self.index.counter.weight(color, &self.rect)
    }

    /// Exact probability of `color`.
    pub fn eval(&self, color: ColorId) -> Result<f64> {
        if self.total <= 0.0 {
            return Ok(0.0);
        }
        Ok(self.weight(color)? / self.total)
    }
}

/// EVAL answers are fixed for a query, so repeated colors reuse them.
pub(crate) struct EvalCache<'o, 'a> {
    oracle: &'o DualAccessOracle<'a>,
    seen: HashMap<ColorId, f64>,
}

impl<'o, 'a> EvalCache<'o, 'a> {
    pub(crate) fn new(oracle: &'o DualAccessOracle<'a>) -> Self {
        EvalCache { oracle, seen: HashMap::new() }
    }

    pub(crate) fn eval(&mut self, c: ColorId) -> Result<f64> {
        if let Some(&p) = self.seen.get(&c) {
            return Ok(p);
        }
        let p = self.oracle.eval(c)?;
        self.seen.insert(c, p);
        Ok(p)
    }

    /// Mean of `f(EVAL(SAMP()))` over `t` draws.
    pub(crate) fn mean_of<R: Rng + ?Sized>(&mut self, t: usize, rng: &mut R, f: impl Fn(f64) -> f64) -> Result<f64> {
        let mut sum = 0.0;
        for _ in 0..t {
            let c = self.oracle.samp(rng).ok_or(Error::EmptyRange)?;
            sum += f(self.eval(c)?);
        }
        Ok(sum / t.max(1) as f64)
    }
}

/// Rounds a real sample count up; anything absurd saturates.
pub(crate) fn ceil_count(x: f64) -> usize {
    if !x.is_finite() || x >= usize::MAX as f64 {
        usize::MAX
    } else {
        (x.ceil() as usize).max(1)
    }
}

/// Samples for the additive estimator.
pub fn additive_samples(n: usize, delta: f64, cfg: &EstimatorConfig) -> usize {
    let n = n.max(2) as f64;
    ceil_count(cfg.c_add * (n / delta).log2().powi(2) * n.log2() / (delta * delta))
}

/// Samples for the multiplicative estimator when no color is heavy.
pub fn multiplicative_samples(n: usize, eps: f64, cfg: &EstimatorConfig) -> usize {
    let n = n.max(2) as f64;
    ceil_count(cfg.c_mult * n.log2() / (eps * eps * 0.9))
}

/// Samples for the heavy-color probe.
pub fn heavy_probe_samples(n: usize, cfg: &EstimatorConfig) -> usize {
    let n = n.max(2) as f64;
    ceil_count(cfg.c_heavy * (2.0 * n).ln() / 3f64.ln())
}

/// Whether `t` samples exceed the scan cost `n log2 n`.
pub(crate) fn over_budget(index: &SamplingIndex, t: usize, cfg: &EstimatorConfig) -> bool {
    let (n, lg) = index.log_n();
    cfg.fallback && t as f64 > n * lg
}

fn nonempty(oracle: &DualAccessOracle<'_>) -> Result<()> {
    if oracle.total() > 0.0 {
        Ok(())
    } else {
        Err(Error::EmptyRange)
    }
}

/// Plug-in mean of `log2(1/EVAL(SAMP()))` over `t` draws.
fn plug_in<R: Rng + ?Sized>(oracle: &DualAccessOracle<'_>, t: usize, rng: &mut R) -> Result<f64> {
    let mut cache = EvalCache::new(oracle);
    let h = cache.mean_of(t, rng, |p| if p > 0.0 { -p.log2() } else { 0.0 })?;
    Ok(h.max(0.0))
}

fn additive_on<R: Rng + ?Sized>(
    index: &SamplingIndex,
    oracle: &DualAccessOracle<'_>,
    delta: f64,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<(f64, usize, bool)> {
    let t = additive_samples(index.len(), delta, cfg);
    if over_budget(index, t, cfg) {
        let s = match oracle.excluded() {
            None => index.exact(oracle.rect(), EntropyKind::Shannon)?,
            Some(c) => index.exact_excluding(oracle.rect(), c, EntropyKind::Shannon)?,
        };
        return Ok((s.value, 0, true));
    }
    Ok((plug_in(oracle, t, rng)?, t, false))
}

/// Estimate within `delta` of the Shannon entropy of `rect`, with high probability.
pub fn estimate_additive<R: Rng + ?Sized>(
    index: &SamplingIndex,
    rect: &QueryRect,
    delta: f64,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<Estimate> {
    check_unit("delta", delta)?;
    cfg.validate()?;
    let oracle = index.oracle(rect)?;
    nonempty(&oracle)?;
    let (value, samples, exact) = additive_on(index, &oracle, delta, cfg, rng)?;
    Ok(Estimate {
        summary: EntropySummary { kind: EntropyKind::Shannon, count: oracle.total(), value },
        branch: if exact { Branch::Exact } else { Branch::Sampled },
        samples,
        heavy: None,
    })
}

/// Probes the box for a color with more than 2/3 of its weight. Any returned
/// color has been checked with an exact count.
pub fn detect_heavy_color<R: Rng + ?Sized>(
    index: &SamplingIndex,
    rect: &QueryRect,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<Option<HeavyColor>> {
    cfg.validate()?;
    let oracle = index.oracle(rect)?;
    nonempty(&oracle)?;
    Ok(probe_heavy(index, &oracle, cfg, rng)?.0)
}

pub(crate) fn probe_heavy<R: Rng + ?Sized>(
    index: &SamplingIndex,
    oracle: &DualAccessOracle<'_>,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<(Option<HeavyColor>, usize)> {
    let k = heavy_probe_samples(index.len(), cfg);
    let mut checked: Vec<ColorId> = Vec::new();
    for _ in 0..k {
        let c = oracle.samp(rng).ok_or(Error::EmptyRange)?;
        if checked.contains(&c) {
            continue;
        }
        checked.push(c);
        let w = oracle.weight(c)?;
        // 3w > 2N compares the weights themselves, not a rounded ratio.
        if 3.0 * w > 2.0 * oracle.total() {
            return Ok((Some(HeavyColor { color: c, weight: w, total: oracle.total() }), k));
        }
    }
    Ok((None, k))
}

/// Entropy of the box from the heavy color's exact share and an estimate
/// `h_rest` of the entropy of the remaining colors.
pub fn combine_heavy_shannon(total: f64, heavy: f64, h_rest: f64) -> f64 {
    let rest = total - heavy;
    if rest <= 0.0 {
        return 0.0;
    }
    (rest / total) * h_rest + (heavy / total) * (total / heavy).log2() + (rest / total) * (total / rest).log2()
}

/// Estimate within a factor `1 + eps` of the Shannon entropy of `rect`, with high probability.
pub fn estimate_multiplicative<R: Rng + ?Sized>(
    index: &SamplingIndex,
    rect: &QueryRect,
    eps: f64,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<Estimate> {
    check_unit("epsilon", eps)?;
    cfg.validate()?;
    let oracle = index.oracle(rect)?;
    nonempty(&oracle)?;
    let total = oracle.total();
    let summary = |value: f64| EntropySummary { kind: EntropyKind::Shannon, count: total, value };
    let (heavy, probes) = probe_heavy(index, &oracle, cfg, rng)?;
    match heavy {
        Some(hc) if hc.weight >= total => {
            Ok(Estimate { summary: summary(0.0), branch: Branch::SingleColor, samples: probes, heavy })
        }
        Some(hc) => {
            let rest = index.oracle_excluding(rect, hc.color)?;
            let (h_rest, t, exact) = additive_on(index, &rest, eps, cfg, rng)?;
            let value = combine_heavy_shannon(total, hc.weight, h_rest);
            let branch = if exact { Branch::Exact } else { Branch::Heavy };
            Ok(Estimate { summary: summary(value), branch, samples: probes + t, heavy })
        }
        None => {
            let t = multiplicative_samples(index.len(), eps, cfg);
            if over_budget(index, t, cfg) {
                let s = index.exact(rect, EntropyKind::Shannon)?;
                return Ok(Estimate { summary: summary(s.value), branch: Branch::Exact, samples: probes, heavy });
            }
            let value = plug_in(&oracle, t, rng)?;
            Ok(Estimate { summary: summary(value), branch: Branch::Sampled, samples: probes + t, heavy })
        }
    }
}

/// Deterministic per-query generator, so answers do not depend on query order.
pub fn query_rng(seed: u64, rect: &QueryRect) -> ChaCha8Rng {
    let mut s = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &x in rect.lo().iter().chain(rect.hi()) {
        s = s.rotate_left(17) ^ x.to_bits();
        s = s.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    }
    ChaCha8Rng::seed_from_u64(s)
}
