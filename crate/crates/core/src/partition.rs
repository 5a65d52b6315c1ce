//! Entropy-driven partitioning.
//!
//! A bucket is scored by its expected entropy `(|B| / n) H(B)`, which never
//! decreases when the bucket grows. On a line this makes the optimal `k`
//! bucket problems tractable: [`maxpart_dp`] minimizes the largest score
//! exactly, [`maxpart_approx`] within `1 + eps` using far fewer queries and
//! [`sumpart_approx`] minimizes the sum of scores within `1 + eps`. In higher
//! dimensions [`greedy_tree_split`] repeatedly halves the leaf with the
//! smallest (or largest) score.
//!
//! Every algorithm talks to the data only through a backend: a
//! [`SequenceEntropy`] for sorted positions or a [`RangeEntropy`] for boxes.

use serde::{Deserialize, Serialize};

use crate::approx_renyi::{estimate_additive_renyi, estimate_multiplicative_renyi};
use crate::approx_shannon::{check_unit, estimate_additive, estimate_multiplicative, query_rng, EstimatorConfig, SamplingIndex};
use crate::entropy::{self, ColorHistogram, ColorId, EntropyKind, EntropySummary};
use crate::error::{Error, Result};
use crate::exact1d::Exact1DIndex;
use crate::exactnd::ExactNDIndex;
use crate::oracle::OracleIndex;
use crate::points::{ColoredPointSet, QueryRect};
use crate::sweep1d::Sweep1DIndex;

/// What answered the queries, with its error parameters if it approximates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackendInfo {
    pub name: String,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
}

impl BackendInfo {
    pub fn exact(name: &str) -> Self {
        BackendInfo { name: name.to_string(), epsilon: None, delta: None }
    }
}

/// Entropy of the points inside a box.
pub trait RangeEntropy {
    fn summary(&self, rect: &QueryRect) -> Result<EntropySummary>;
    fn info(&self) -> BackendInfo;
}

/// Entropy of the points at sorted positions `[a, b)`.
pub trait SequenceEntropy {
    fn len(&self) -> usize;
    fn bucket(&self, a: usize, b: usize) -> Result<EntropySummary>;
    fn info(&self) -> BackendInfo;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Brute-force sequence backend: scans the bucket.
#[derive(Clone, Debug)]
pub struct ColorSequence {
    colors: Vec<ColorId>,
    weights: Vec<f64>,
    kind: EntropyKind,
}

impl ColorSequence {
    pub fn new(colors: Vec<ColorId>, kind: EntropyKind) -> Self {
        let weights = vec![1.0; colors.len()];
        ColorSequence { colors, weights, kind }
    }

    /// The points of a line in coordinate order.
    pub fn from_points(points: &ColoredPointSet, kind: EntropyKind) -> Result<Self> {
        if points.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: points.dim() });
        }
        let order = points.order_by_axis(0);
        Ok(ColorSequence {
            colors: order.iter().map(|&i| points.color(i as usize)).collect(),
            weights: order.iter().map(|&i| points.weight(i as usize)).collect(),
            kind,
        })
    }
}

impl SequenceEntropy for ColorSequence {
    fn len(&self) -> usize {
        self.colors.len()
    }

    fn bucket(&self, a: usize, b: usize) -> Result<EntropySummary> {
        let mut h = ColorHistogram::new();
        for i in a..b.min(self.colors.len()) {
            h.add(self.colors[i], self.weights[i]);
        }
        Ok(entropy::entropy(&h, self.kind))
    }

    fn info(&self) -> BackendInfo {
        BackendInfo::exact("oracle")
    }
}

/// Sequence view of an exact 1-D index.
#[derive(Clone, Copy, Debug)]
pub struct ExactSequence<'a> {
    pub index: &'a Exact1DIndex,
    pub kind: EntropyKind,
}

impl SequenceEntropy for ExactSequence<'_> {
    fn len(&self) -> usize {
        self.index.len()
    }

    fn bucket(&self, a: usize, b: usize) -> Result<EntropySummary> {
        self.index.query_positions(a, b, self.kind)
    }

    fn info(&self) -> BackendInfo {
        BackendInfo::exact("exact1d")
    }
}

/// Sequence view of any box backend: positions `[a, b)` become the interval
/// between their coordinates. Coordinates must be distinct so that every cut
/// is expressible as an interval.
#[derive(Clone, Debug)]
pub struct RectSequence<B> {
    keys: Vec<f64>,
    backend: B,
}

impl<B: RangeEntropy> RectSequence<B> {
    pub fn new(points: &ColoredPointSet, backend: B) -> Result<Self> {
        if points.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: points.dim() });
        }
        let keys: Vec<f64> = points.order_by_axis(0).iter().map(|&i| points.coord(i as usize, 0)).collect();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("box backends need distinct coordinates on a line".into()));
        }
        Ok(RectSequence { keys, backend })
    }
}

impl<B: RangeEntropy> SequenceEntropy for RectSequence<B> {
    fn len(&self) -> usize {
        self.keys.len()
    }

    fn bucket(&self, a: usize, b: usize) -> Result<EntropySummary> {
        if a >= b {
            return Err(Error::InvalidParameter(format!("empty bucket [{a}, {b})")));
        }
        self.backend.summary(&QueryRect::interval(self.keys[a], self.keys[b - 1]))
    }

    fn info(&self) -> BackendInfo {
        self.backend.info()
    }
}

/// Brute-force box backend.
#[derive(Clone, Copy, Debug)]
pub struct OracleBackend<'a> {
    pub index: &'a OracleIndex,
    pub kind: EntropyKind,
}

impl RangeEntropy for OracleBackend<'_> {
    fn summary(&self, rect: &QueryRect) -> Result<EntropySummary> {
        self.index.query(rect, self.kind)
    }

    fn info(&self) -> BackendInfo {
        BackendInfo::exact("oracle")
    }
}

/// Exact d-dimensional index as a box backend.
#[derive(Clone, Copy, Debug)]
pub struct ExactBackend<'a> {
    pub index: &'a ExactNDIndex,
    pub kind: EntropyKind,
}

impl RangeEntropy for ExactBackend<'_> {
    fn summary(&self, rect: &QueryRect) -> Result<EntropySummary> {
        self.index.query(rect, self.kind)
    }

    fn info(&self) -> BackendInfo {
        BackendInfo::exact("exactnd")
    }
}

impl RangeEntropy for Sweep1DIndex {
    fn summary(&self, rect: &QueryRect) -> Result<EntropySummary> {
        self.query(rect)
    }

    fn info(&self) -> BackendInfo {
        let (epsilon, delta) = match self.kind() {
            EntropyKind::Shannon => (Some(self.epsilon()), Some(self.epsilon())),
            EntropyKind::Renyi(o) => (None, Some(self.epsilon() * (o.get() + 1.0) / (o.get() - 1.0))),
        };
        BackendInfo { name: "deterministic".into(), epsilon, delta }
    }
}

/// Which sampling estimator answers a box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum EstimateMode {
    Additive { delta: f64 },
    Multiplicative { epsilon: f64 },
    RenyiAdditive { alpha: f64, delta: f64 },
    RenyiMultiplicative { alpha: f64, epsilon: f64 },
}

/// Sampling estimator as a box backend. Each box gets its own generator derived
/// from the seed and the box, so repeated queries agree.
#[derive(Clone, Copy, Debug)]
pub struct EstimatorBackend<'a> {
    pub index: &'a SamplingIndex,
    pub mode: EstimateMode,
    pub config: EstimatorConfig,
}

impl RangeEntropy for EstimatorBackend<'_> {
    fn summary(&self, rect: &QueryRect) -> Result<EntropySummary> {
        let mut rng = query_rng(self.config.seed, rect);
        let (idx, cfg) = (self.index, &self.config);
        let out = match self.mode {
            EstimateMode::Additive { delta } => estimate_additive(idx, rect, delta, cfg, &mut rng),
            EstimateMode::Multiplicative { epsilon } => estimate_multiplicative(idx, rect, epsilon, cfg, &mut rng),
            EstimateMode::RenyiAdditive { alpha, delta } => estimate_additive_renyi(idx, rect, alpha, delta, cfg, &mut rng),
            EstimateMode::RenyiMultiplicative { alpha, epsilon } => {
                estimate_multiplicative_renyi(idx, rect, alpha, epsilon, cfg, &mut rng)
            }
        };
        match out {
            Ok(e) => Ok(e.summary),
            Err(Error::EmptyRange) => Ok(EntropySummary::empty(match self.mode {
                EstimateMode::RenyiAdditive { alpha, .. } | EstimateMode::RenyiMultiplicative { alpha, .. } => {
                    EntropyKind::renyi(alpha)?
                }
                _ => EntropyKind::Shannon,
            })),
            Err(e) => Err(e),
        }
    }

    fn info(&self) -> BackendInfo {
        let (epsilon, delta) = match self.mode {
            EstimateMode::Additive { delta } | EstimateMode::RenyiAdditive { delta, .. } => (None, Some(delta)),
            EstimateMode::Multiplicative { epsilon } | EstimateMode::RenyiMultiplicative { epsilon, .. } => {
                (Some(epsilon), None)
            }
        };
        BackendInfo { name: "estimate".into(), epsilon, delta }
    }
}

/// Expected-entropy scores of buckets of a sequence.
pub struct Scorer<'a, S: ?Sized> {
    seq: &'a S,
    total: f64,
}

impl<'a, S: SequenceEntropy + ?Sized> Scorer<'a, S> {
    pub fn new(seq: &'a S) -> Result<Self> {
        let total = seq.bucket(0, seq.len())?.count;
        Ok(Scorer { seq, total })
    }

    /// `(|B| / n) H(B)` for positions `[a, b)`.
    pub fn score(&self, a: usize, b: usize) -> Result<f64> {
        if a >= b || self.total <= 0.0 {
            return Ok(0.0);
        }
        let s = self.seq.bucket(a, b)?;
        Ok(s.count / self.total * s.value)
    }
}

/// A partition of sorted positions into `k` consecutive buckets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bucketing1D {
    pub k: usize,
    /// `0 = cuts[0] < cuts[1] < ... < cuts[k] = n`.
    pub cuts: Vec<usize>,
    /// Expected entropy of each bucket.
    pub scores: Vec<f64>,
    /// The optimized quantity: largest score or sum of scores.
    pub objective: f64,
    pub backend: BackendInfo,
}

impl Bucketing1D {
    pub fn buckets(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cuts.windows(2).map(|w| (w[0], w[1]))
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::TooManyBuckets { k, n });
    }
    Ok(())
}

fn finish<S: SequenceEntropy + ?Sized>(sc: &Scorer<'_, S>, cuts: Vec<usize>, sum: bool) -> Result<Bucketing1D> {
    let scores = cuts.windows(2).map(|w| sc.score(w[0], w[1])).collect::<Result<Vec<_>>>()?;
    let objective = if sum { scores.iter().sum() } else { scores.iter().copied().fold(0.0, f64::max) };
    Ok(Bucketing1D { k: cuts.len() - 1, cuts, scores, objective, backend: sc.seq.info() })
}

/// How the DP finds the best start of the last bucket.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerSearch {
    /// Binary search for the crossing of the rising prefix optimum and the
    /// falling last-bucket score.
    Binary,
    /// Try every start.
    Linear,
}

/// Exact minimum over `k`-bucket partitions of the largest expected entropy.
pub fn maxpart_dp<S: SequenceEntropy + ?Sized>(seq: &S, k: usize) -> Result<Bucketing1D> {
    maxpart_dp_with(seq, k, InnerSearch::Binary)
}

pub fn maxpart_dp_with<S: SequenceEntropy + ?Sized>(seq: &S, k: usize, search: InnerSearch) -> Result<Bucketing1D> {
    let n = seq.len();
    check_k(k, n)?;
    let sc = Scorer::new(seq)?;
    // dp[j][i]: best value for the first i items in j + 1 buckets
    let mut dp = vec![vec![f64::INFINITY; n + 1]; k];
    let mut arg = vec![vec![0usize; n + 1]; k];
    for i in 1..=n {
        dp[0][i] = sc.score(0, i)?;
    }
    for j in 1..k {
        for i in j + 1..=n {
            let (lo, hi) = (j, i - 1);
            let cost = |s: usize| -> Result<f64> { Ok(dp[j - 1][s].max(sc.score(s, i)?)) };
            let (best, at) = match search {
                InnerSearch::Linear => {
                    let mut best = (f64::INFINITY, lo);
                    for s in lo..=hi {
                        let c = cost(s)?;
                        if c < best.0 {
                            best = (c, s);
                        }
                    }
                    best
                }
                InnerSearch::Binary => {
                    // smallest s with dp[j-1][s] >= score(s, i)
                    let (mut a, mut b) = (lo, hi + 1);
                    while a < b {
                        let m = (a + b) / 2;
                        if dp[j - 1][m] >= sc.score(m, i)? {
                            b = m;
                        } else {
                            a = m + 1;
                        }
                    }
                    let mut best = (f64::INFINITY, lo);
                    for s in [a.saturating_sub(1), a] {
                        if s >= lo && s <= hi {
                            let c = cost(s)?;
                            if c < best.0 {
                                best = (c, s);
                            }
                        }
                    }
                    best
                }
            };
            dp[j][i] = best;
            arg[j][i] = at;
        }
    }
    let mut cuts = vec![n];
    let mut i = n;
    for j in (1..k).rev() {
        i = arg[j][i];
        cuts.push(i);
    }
    cuts.push(0);
    cuts.reverse();
    finish(&sc, cuts, false)
}

/// Greedy cover with buckets of score at most `e`; `None` if it needs more
/// than `k` buckets.
fn greedy_cuts<S: SequenceEntropy + ?Sized>(sc: &Scorer<'_, S>, n: usize, k: usize, e: f64) -> Result<Option<Vec<usize>>> {
    let mut cuts = vec![0];
    let mut s = 0;
    while s < n {
        if cuts.len() > k {
            return Ok(None);
        }
        // largest b in (s, n] with score(s, b) <= e; a single item scores 0
        let (mut a, mut b) = (s + 1, n);
        while a < b {
            let m = (a + b).div_ceil(2);
            if sc.score(s, m)? <= e {
                a = m;
            } else {
                b = m - 1;
            }
        }
        cuts.push(a);
        s = a;
    }
    Ok(if cuts.len() - 1 <= k { Some(cuts) } else { None })
}

/// Splits buckets until there are exactly `k`; scores cannot grow.
fn refine_to(mut cuts: Vec<usize>, k: usize) -> Vec<usize> {
    while cuts.len() - 1 < k {
        let Some(i) = (1..cuts.len()).rev().find(|&i| cuts[i] - cuts[i - 1] >= 2) else { break };
        cuts.insert(i, cuts[i] - 1);
    }
    cuts
}

/// Smallest nonzero score any bucket can have: every mixed bucket contains two
/// adjacent items of different colors, and scores only grow with the bucket.
pub fn smallest_mixed_score<S: SequenceEntropy + ?Sized>(sc: &Scorer<'_, S>, n: usize) -> Result<Option<f64>> {
    let mut best: Option<f64> = None;
    for i in 0..n.saturating_sub(1) {
        let s = sc.score(i, i + 2)?;
        if s > 0.0 {
            best = Some(best.map_or(s, |b: f64| b.min(s)));
        }
    }
    Ok(best)
}

/// `(1 + eps)` approximation of [`maxpart_dp`]: binary search over the
/// geometric grid `l (1+eps)^t` between the smallest mixed score `l` and the
/// score of the whole sequence, testing each value with a greedy cover.
pub fn maxpart_approx<S: SequenceEntropy + ?Sized>(seq: &S, k: usize, eps: f64) -> Result<Bucketing1D> {
    let n = seq.len();
    check_k(k, n)?;
    check_unit("epsilon", eps)?;
    let sc = Scorer::new(seq)?;
    if let Some(cuts) = greedy_cuts(&sc, n, k, 0.0)? {
        return finish(&sc, refine_to(cuts, k), false);
    }
    let hi = sc.score(0, n)?;
    let lo = smallest_mixed_score(&sc, n)?.unwrap_or(hi).min(hi);
    let steps = ((hi / lo).ln() / eps.ln_1p()).ceil().max(0.0) as usize;
    let grid = |t: usize| if t >= steps { hi } else { lo * (1.0 + eps).powi(t as i32) };
    let (mut a, mut b) = (0usize, steps);
    while a < b {
        let m = (a + b) / 2;
        if greedy_cuts(&sc, n, k, grid(m))?.is_some() {
            b = m;
        } else {
            a = m + 1;
        }
    }
    // one bucket always fits under the top of the grid
    let cuts = greedy_cuts(&sc, n, k, grid(a))?.unwrap_or_else(|| vec![0, n]);
    finish(&sc, refine_to(cuts, k), false)
}

/// `(1 + eps)` approximation of the minimum sum of expected entropies.
///
/// Layer by layer the prefix optimum is only consulted at sparse breakpoints:
/// the last index of each maximal run whose values stay within a factor
/// `1 + eps/(2k)` of each other, plus the index right before the current end.
/// Since a later start only shrinks the last bucket, each layer loses at most
/// that factor.
pub fn sumpart_approx<S: SequenceEntropy + ?Sized>(seq: &S, k: usize, eps: f64) -> Result<Bucketing1D> {
    let n = seq.len();
    check_k(k, n)?;
    check_unit("epsilon", eps)?;
    let sc = Scorer::new(seq)?;
    let delta = eps / (2.0 * k as f64);
    let mut prev = vec![f64::INFINITY; n + 1];
    for (i, p) in prev.iter_mut().enumerate().skip(1) {
        *p = sc.score(0, i)?;
    }
    let mut args: Vec<Vec<usize>> = Vec::with_capacity(k);
    for j in 1..k {
        let ends = run_ends(&prev, j, n - 1, delta);
        let mut cur = vec![f64::INFINITY; n + 1];
        let mut arg = vec![0usize; n + 1];
        for i in j + 1..=n {
            let mut best = (f64::INFINITY, i - 1);
            for s in ends.iter().copied().take_while(|&s| s < i - 1).chain([i - 1]) {
                let c = prev[s] + sc.score(s, i)?;
                if c < best.0 {
                    best = (c, s);
                }
            }
            cur[i] = best.0;
            arg[i] = best.1;
        }
        args.push(arg);
        prev = cur;
    }
    let mut cuts = vec![n];
    let mut i = n;
    for arg in args.iter().rev() {
        i = arg[i];
        cuts.push(i);
    }
    cuts.push(0);
    cuts.reverse();
    finish(&sc, cuts, true)
}

/// Last indices of the maximal runs over `lo..=hi` whose values stay within a
/// factor `1 + delta` of the run minimum.
fn run_ends(values: &[f64], lo: usize, hi: usize, delta: f64) -> Vec<usize> {
    let mut ends = Vec::new();
    if lo > hi {
        return ends;
    }
    let (mut min, mut max) = (values[lo], values[lo]);
    for s in lo + 1..=hi {
        let (a, b) = (min.min(values[s]), max.max(values[s]));
        if b <= (1.0 + delta) * a {
            (min, max) = (a, b);
        } else {
            ends.push(s - 1);
            (min, max) = (values[s], values[s]);
        }
    }
    ends.push(hi);
    ends
}

/// Which leaf the greedy splitter picks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    /// Split the leaf with the smallest expected entropy.
    Min,
    /// Split the leaf with the largest expected entropy.
    Max,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub rect: QueryRect,
    pub parent: Option<usize>,
    pub children: Option<(usize, usize)>,
    pub depth: usize,
    /// Expected entropy of the node's points.
    pub score: f64,
    /// Input indices of the node's points.
    pub points: Vec<u32>,
}

/// One split: every candidate leaf with its score, and the choice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitStep {
    pub candidates: Vec<(usize, f64)>,
    pub chosen: usize,
    pub axis: usize,
    /// Points with coordinate `<= at` go left.
    pub at: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreePartition {
    /// Nodes in creation order; node 0 is the root.
    pub nodes: Vec<TreeNode>,
    pub trace: Vec<SplitStep>,
    pub backend: BackendInfo,
}

impl TreePartition {
    /// Leaf ids in creation order.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].children.is_none()).collect()
    }
}

/// Where to split a node: the median along the first axis, cycling from the
/// node depth, on which its points take at least two values.
fn split_point(points: &ColoredPointSet, idx: &[u32], depth: usize) -> Option<(usize, f64)> {
    let d = points.dim();
    for step in 0..d {
        let axis = (depth + step) % d;
        let mut xs: Vec<f64> = idx.iter().map(|&i| points.coord(i as usize, axis)).collect();
        xs.sort_by(f64::total_cmp);
        let (first, last) = (xs[0], xs[xs.len() - 1]);
        if first == last {
            continue;
        }
        let median = xs[(xs.len() - 1) / 2];
        let at = if median < last { median } else { xs.iter().copied().rfind(|&x| x < last).unwrap_or(first) };
        return Some((axis, at));
    }
    None
}

fn bounding_rect(points: &ColoredPointSet) -> Result<QueryRect> {
    let d = points.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for i in 0..points.len() {
        for k in 0..d {
            lo[k] = lo[k].min(points.coord(i, k));
            hi[k] = hi[k].max(points.coord(i, k));
        }
    }
    QueryRect::new(lo, hi)
}

/// Splits the extreme leaf `k - 1` times. Ties go to the oldest leaf.
pub fn greedy_tree_split<B: RangeEntropy + ?Sized>(
    points: &ColoredPointSet,
    k: usize,
    objective: Objective,
    backend: &B,
) -> Result<TreePartition> {
    check_k(k, points.len())?;
    let root = bounding_rect(points)?;
    let all = backend.summary(&root)?;
    let total = all.count;
    let score = |s: &EntropySummary| if total > 0.0 { s.count / total * s.value } else { 0.0 };
    let mut nodes = vec![TreeNode {
        rect: root,
        parent: None,
        children: None,
        depth: 0,
        score: score(&all),
        points: (0..points.len() as u32).collect(),
    }];
    let mut trace = Vec::new();
    let mut leaves = 1;
    while leaves < k {
        let candidates: Vec<(usize, f64, usize, f64)> = (0..nodes.len())
            .filter(|&i| nodes[i].children.is_none())
            .filter_map(|i| split_point(points, &nodes[i].points, nodes[i].depth).map(|(a, at)| (i, nodes[i].score, a, at)))
            .collect();
        let pick = candidates.iter().copied().reduce(|best, c| {
            let better = match objective {
                Objective::Min => c.1 < best.1,
                Objective::Max => c.1 > best.1,
            };
            if better { c } else { best }
        });
        let Some((id, _, axis, at)) = pick else {
            return Err(Error::Unsplittable { reached: leaves, requested: k });
        };
        let node = nodes[id].clone();
        let (left_pts, right_pts): (Vec<u32>, Vec<u32>) =
            node.points.iter().partition(|&&i| points.coord(i as usize, axis) <= at);
        let mut lhi = node.rect.hi().to_vec();
        lhi[axis] = at;
        let mut rlo = node.rect.lo().to_vec();
        rlo[axis] = at.next_up();
        let halves = [
            (QueryRect::new(node.rect.lo().to_vec(), lhi)?, left_pts),
            (QueryRect::new(rlo, node.rect.hi().to_vec())?, right_pts),
        ];
        let first = nodes.len();
        for (rect, pts) in halves {
            let s = backend.summary(&rect)?;
            nodes.push(TreeNode { rect, parent: Some(id), children: None, depth: node.depth + 1, score: score(&s), points: pts });
        }
        nodes[id].children = Some((first, first + 1));
        trace.push(SplitStep { candidates: candidates.iter().map(|c| (c.0, c.1)).collect(), chosen: id, axis, at });
        leaves += 1;
    }
    Ok(TreePartition { nodes, trace, backend: backend.info() })
}
