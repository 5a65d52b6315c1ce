//! Deterministic approximate range entropy on a line.
//!
//! Each point `p_j` of color `u`, with `p_{j-1}` the previous point of `u`, is
//! mapped to the plane point `(p_j, p_{j-1})`. An interval `[l, r]` becomes the
//! box `[l, r] x (-inf, l)`, which holds exactly one mapped point for every
//! color present in `[l, r]`. A two-level range tree over the mapped points
//! splits the query box into nodes with pairwise disjoint color sets.
//!
//! For a node `v` with color set `U` and leftmost point `x_v`, the points of
//! `U` in `[l, r]` are the points of `U` in `[x_v, r]`. So each node stores, as
//! a function of the right end `r`, the smallest exponents `i` with
//! `(1+e)^i >= |P(U) n [x_v, r]|` and `(1+e)^i >= F` (Shannon, `F = N H`) or
//! `(1+e)^i >= G` (Rényi, `G = sum N_c^a`). Both functions only grow with `r`,
//! so the exponents form a short list of runs.
//!
//! Positions are ranks in coordinate order (ties by input index).

use serde::{Deserialize, Serialize};

use crate::entropy::{ColorId, EntropyKind, EntropySummary, Order};
use crate::error::{Error, Result};
use crate::points::{ColoredPointSet, QueryRect};

/// Exponent stored while `F = 0` (one color so far).
pub const ZERO_LEVEL: i32 = i32::MIN;

/// Constant in the shrunk accuracy `e / (4 c log2 log2 n)`.
pub const MERGE_DEPTH_CONSTANT: f64 = 4.0;

/// Relative slack added to a computed `F` or `G` before taking its exponent,
/// so floating-point rounding can only raise the stored estimate.
const SLACK: f64 = 1e-9;

/// One mapped point: its position, the position of the previous point of the
/// same color (if any) and the color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappedPoint {
    pub pos: u32,
    pub prev: Option<u32>,
    pub color: ColorId,
}

/// The plane points built from a line: `(position, previous position)`.
pub fn mapped_points(points: &ColoredPointSet) -> Result<Vec<MappedPoint>> {
    if points.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: points.dim() });
    }
    let order = points.order_by_axis(0);
    let mut last: Vec<Option<u32>> = vec![None; points.color_bound()];
    Ok(order
        .iter()
        .enumerate()
        .map(|(p, &i)| {
            let color = points.color(i as usize);
            let prev = last[color as usize].replace(p as u32);
            MappedPoint { pos: p as u32, prev, color }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Run {
    /// Last position (inclusive) at which these exponents hold.
    last: u32,
    count: i32,
    mass: i32,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct FirstNode {
    /// Position range `[lo, hi)` covered by this node.
    lo: u32,
    hi: u32,
    /// First occurrences inside `[lo, hi)` sorted by `prev + 1` (0 when none).
    keys: Vec<u32>,
    starts: Vec<u32>,
    colors: Vec<ColorId>,
    /// Secondary heap: node id -> (offset, length) into `runs`.
    spans: Vec<(u32, u32)>,
}

/// What each node tracks besides the point count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
enum Mass {
    Shannon,
    Renyi(Order),
}

/// Work done by one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub nodes: usize,
    /// Depth of the balanced merge over the nodes.
    pub merge_depth: usize,
}

/// The per-node estimate behind one query.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeEstimate {
    pub colors: Vec<ColorId>,
    /// Leftmost position of the node.
    pub start: usize,
    pub count_level: i32,
    pub mass_level: i32,
    /// `(1+e)^count_level`, at least the true count.
    pub count_hat: f64,
    /// `(1+e)^(count_level-1)`, below the true count.
    pub count_low: f64,
    /// Shannon: the node entropy estimate. Rényi: `(1+e)^(mass_level-1)`.
    pub value: f64,
}

/// Threshold arrays of one node: `(exponent, last position)` pairs, where the
/// position is the largest right end whose value is within `(1+e)^exponent`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdArrays {
    pub start: usize,
    pub colors: Vec<ColorId>,
    pub count: Vec<(i32, usize)>,
    pub mass: Vec<(i32, usize)>,
}

/// Deterministic 1-D index for Shannon or Rényi entropy.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sweep1DIndex {
    mass: Mass,
    eps: f64,
    eps_prime: f64,
    keys: Vec<f64>,
    /// powers[i] = (1+e')^(i-1)
    powers: Vec<f64>,
    first: Vec<FirstNode>,
    runs: Vec<Run>,
}

struct Builder<'a> {
    mass: Mass,
    powers: &'a [f64],
    ln_base: f64,
    occ: Vec<Vec<u32>>,
    rank: Vec<u32>,
    colors: Vec<ColorId>,
    xlogx: Vec<f64>,
    counts: Vec<u32>,
    runs: Vec<Run>,
}

impl Sweep1DIndex {
    /// Shannon variant: `H <= h <= (1+eps) H + eps` for every interval.
    pub fn build_shannon(points: &ColoredPointSet, eps: f64) -> Result<Self> {
        Self::build(points, eps, Mass::Shannon)
    }

    /// Rényi variant: `H_a <= h <= H_a + eps (a+1)/(a-1)` for every interval.
    pub fn build_renyi(points: &ColoredPointSet, eps: f64, alpha: f64) -> Result<Self> {
        Self::build(points, eps, Mass::Renyi(Order::new(alpha)?))
    }

    fn build(points: &ColoredPointSet, eps: f64, mass: Mass) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {eps}")));
        }
        let mapped = mapped_points(points)?;
        if !points.is_unit_weight() {
            return Err(Error::WeightedInputUnsupported);
        }
        let n = points.len();
        let eps_prime = shrunk_epsilon(eps, n, mass);
        let ln_base = eps_prime.ln_1p();
        let order = points.order_by_axis(0);
        let keys: Vec<f64> = order.iter().map(|&i| points.coord(i as usize, 0)).collect();

        let nf = n.max(2) as f64;
        let top = match mass {
            Mass::Shannon => nf * nf.log2() + 1.0,
            Mass::Renyi(o) => nf.powf(o.get() + 1.0),
        };
        let levels = (top.ln() / ln_base).ceil() as usize + 3;
        let powers: Vec<f64> = (0..=levels).map(|i| (1.0 + eps_prime).powi(i as i32 - 1)).collect();

        let m = points.color_bound();
        let mut occ: Vec<Vec<u32>> = vec![Vec::new(); m];
        let mut rank = vec![0u32; n];
        for mp in &mapped {
            rank[mp.pos as usize] = occ[mp.color as usize].len() as u32;
            occ[mp.color as usize].push(mp.pos);
        }
        let xlogx: Vec<f64> = (0..=n)
            .map(|k| {
                let k = k as f64;
                match mass {
                    Mass::Shannon if k > 0.0 => k * k.log2(),
                    Mass::Shannon => 0.0,
                    Mass::Renyi(o) => k.powf(o.get()),
                }
            })
            .collect();
        let mut b = Builder {
            mass,
            powers: &powers,
            ln_base,
            occ,
            rank,
            colors: mapped.iter().map(|mp| mp.color).collect(),
            xlogx,
            counts: vec![0; m],
            runs: Vec::new(),
        };
        let mut first = vec![FirstNode::default(); if n == 0 { 0 } else { 4 * n }];
        if n > 0 {
            b.build_first(&mapped, &mut first, 1, 0, n);
        }
        let runs = std::mem::take(&mut b.runs);
        Ok(Sweep1DIndex { mass, eps, eps_prime, keys, powers, first, runs })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    /// The shrunk accuracy used for the thresholds.
    pub fn epsilon_prime(&self) -> f64 {
        self.eps_prime
    }

    pub fn kind(&self) -> EntropyKind {
        match self.mass {
            Mass::Shannon => EntropyKind::Shannon,
            Mass::Renyi(o) => EntropyKind::Renyi(o),
        }
    }

    /// Stored runs over all nodes (space proxy).
    pub fn num_runs(&self) -> usize {
        self.runs.len()
    }

    /// Nodes holding threshold arrays.
    pub fn num_nodes(&self) -> usize {
        self.first.iter().map(|f| f.spans.iter().filter(|s| s.1 > 0).count()).sum()
    }

    /// `(1+e')^i`.
    pub fn level_value(&self, i: i32) -> f64 {
        if i == ZERO_LEVEL {
            0.0
        } else {
            self.powers[(i + 1) as usize]
        }
    }

    /// The largest value the guarantee allows for a true entropy `truth`.
    pub fn upper_bound(&self, truth: f64) -> f64 {
        match self.mass {
            Mass::Shannon => (1.0 + self.eps) * truth + self.eps,
            Mass::Renyi(o) => {
                let a = o.get();
                truth + self.eps * (a + 1.0) / (a - 1.0)
            }
        }
    }

    /// Caps on the number of distinct count and mass exponents per node.
    pub fn array_caps(&self) -> (usize, usize) {
        let n = self.len().max(2) as f64;
        let lb = self.eps_prime.ln_1p();
        let count = (n.ln() / lb).ceil() as usize + 1;
        let mass = match self.mass {
            Mass::Shannon => ((n * n.log2()).ln() / lb).ceil() as usize + 2,
            Mass::Renyi(o) => (n.powf(o.get() + 1.0).ln() / lb).ceil() as usize + 1,
        };
        (count, mass)
    }

    /// Sorted positions covered by a closed interval.
    pub fn span(&self, lo: f64, hi: f64) -> (usize, usize) {
        let a = self.keys.partition_point(|&k| k < lo);
        let b = self.keys.partition_point(|&k| k <= hi);
        (a, b.max(a))
    }

    pub fn query(&self, rect: &QueryRect) -> Result<EntropySummary> {
        self.query_with_stats(rect).map(|(s, _)| s)
    }

    pub fn query_with_stats(&self, rect: &QueryRect) -> Result<(EntropySummary, QueryStats)> {
        let (a, b) = self.rect_span(rect)?;
        let mut stats = QueryStats::default();
        if a >= b {
            return Ok((EntropySummary::empty(self.kind()), stats));
        }
        let mut nodes: Vec<(i32, i32)> = Vec::new();
        self.collect(a, b, &mut |_, _, _, r| nodes.push((r.count, r.mass)));
        stats.nodes = nodes.len();
        let value = match self.mass {
            Mass::Shannon => {
                let leaves: Vec<Triple> = nodes.iter().map(|&(c, m)| self.triple(c, m)).collect();
                let (t, depth) = merge_balanced(&leaves);
                stats.merge_depth = depth;
                t.h
            }
            Mass::Renyi(o) => {
                let a = o.get();
                let num: f64 = nodes.iter().map(|&(c, _)| self.level_value(c)).sum();
                let den: f64 = nodes.iter().map(|&(_, m)| self.level_value(m - 1)).sum();
                ((a * num.log2() - den.log2()) / (a - 1.0)).max(0.0)
            }
        };
        Ok((EntropySummary { kind: self.kind(), count: (b - a) as f64, value }, stats))
    }

    /// The canonical nodes of a query with their individual estimates.
    pub fn node_estimates(&self, rect: &QueryRect) -> Result<Vec<NodeEstimate>> {
        let (a, b) = self.rect_span(rect)?;
        let mut out = Vec::new();
        if a >= b {
            return Ok(out);
        }
        self.collect(a, b, &mut |f, lo, hi, r| {
            let t = self.triple(r.count, r.mass);
            let value = match self.mass {
                Mass::Shannon => t.h,
                Mass::Renyi(_) => self.level_value(r.mass - 1),
            };
            out.push(NodeEstimate {
                colors: f.colors[lo..hi].to_vec(),
                start: f.starts[lo..hi].iter().copied().min().unwrap_or(0) as usize,
                count_level: r.count,
                mass_level: r.mass,
                count_hat: t.n_hat,
                count_low: t.n_low,
                value,
            });
        });
        Ok(out)
    }

    /// Threshold arrays of every stored node.
    pub fn threshold_arrays(&self) -> Vec<ThresholdArrays> {
        let n = self.len();
        let mut out = Vec::new();
        for f in &self.first {
            self.walk_secondary(f, 1, 0, f.keys.len(), &mut |lo, hi, runs| {
                let clip = |p: u32| (p as usize).min(n.saturating_sub(1));
                let mut count: Vec<(i32, usize)> = Vec::new();
                let mut mass: Vec<(i32, usize)> = Vec::new();
                for r in runs {
                    match count.last_mut() {
                        Some(last) if last.0 == r.count => last.1 = clip(r.last),
                        _ => count.push((r.count, clip(r.last))),
                    }
                    match mass.last_mut() {
                        Some(last) if last.0 == r.mass => last.1 = clip(r.last),
                        _ => mass.push((r.mass, clip(r.last))),
                    }
                }
                out.push(ThresholdArrays {
                    start: f.starts[lo..hi].iter().copied().min().unwrap_or(0) as usize,
                    colors: f.colors[lo..hi].to_vec(),
                    count,
                    mass,
                });
            });
        }
        out
    }

    fn walk_secondary(&self, f: &FirstNode, id: usize, lo: usize, hi: usize, out: &mut impl FnMut(usize, usize, &[Run])) {
        if lo >= hi || id >= f.spans.len() {
            return;
        }
        let (o, l) = f.spans[id];
        out(lo, hi, &self.runs[o as usize..(o + l) as usize]);
        if hi - lo > 1 {
            let mid = (lo + hi) / 2;
            self.walk_secondary(f, 2 * id, lo, mid, out);
            self.walk_secondary(f, 2 * id + 1, mid, hi, out);
        }
    }

    fn rect_span(&self, rect: &QueryRect) -> Result<(usize, usize)> {
        if rect.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: rect.dim() });
        }
        Ok(self.span(rect.lo()[0], rect.hi()[0]))
    }

    fn triple(&self, count: i32, mass: i32) -> Triple {
        let n_hat = self.level_value(count);
        let n_low = self.level_value(count - 1);
        let h = if mass == ZERO_LEVEL { 0.0 } else { self.level_value(mass) / n_low };
        Triple { n_hat, n_low, h }
    }

    /// Visits the canonical nodes of positions `[a, b)`, passing the run that
    /// holds at right end `b - 1`.
    fn collect(&self, a: usize, b: usize, out: &mut impl FnMut(&FirstNode, usize, usize, Run)) {
        let last = (b - 1) as u32;
        let key = a as u32;
        self.first_visit(1, a, b, &mut |f| {
            let k = f.keys.partition_point(|&y| y <= key);
            secondary_prefix(1, 0, f.keys.len(), k, &mut |id, lo, hi| {
                let (o, l) = f.spans[id];
                let runs = &self.runs[o as usize..(o + l) as usize];
                let i = runs.partition_point(|r| r.last < last);
                out(f, lo, hi, runs[i]);
            });
        });
    }

    fn first_visit<'a>(&'a self, id: usize, a: usize, b: usize, out: &mut impl FnMut(&'a FirstNode)) {
        let f = &self.first[id];
        let (lo, hi) = (f.lo as usize, f.hi as usize);
        if b <= lo || hi <= a {
            return;
        }
        if a <= lo && hi <= b {
            out(f);
            return;
        }
        self.first_visit(2 * id, a, b, out);
        self.first_visit(2 * id + 1, a, b, out);
    }
}

/// Secondary nodes covering the first `k` entries.
fn secondary_prefix(id: usize, lo: usize, hi: usize, k: usize, out: &mut impl FnMut(usize, usize, usize)) {
    if k <= lo || lo >= hi {
        return;
    }
    if hi <= k {
        out(id, lo, hi);
        return;
    }
    let mid = (lo + hi) / 2;
    secondary_prefix(2 * id, lo, mid, k, out);
    secondary_prefix(2 * id + 1, mid, hi, k, out);
}

/// `e / (4 c log2 log2 n)` for Shannon, `e / 2` for Rényi.
pub fn shrunk_epsilon_for(kind: EntropyKind, eps: f64, n: usize) -> f64 {
    match kind {
        EntropyKind::Shannon => shrunk_epsilon(eps, n, Mass::Shannon),
        EntropyKind::Renyi(o) => shrunk_epsilon(eps, n, Mass::Renyi(o)),
    }
}

fn shrunk_epsilon(eps: f64, n: usize, mass: Mass) -> f64 {
    match mass {
        Mass::Shannon => {
            let n = n.max(2) as f64;
            let loglog = n.log2().log2().max(1.0);
            eps / (4.0 * MERGE_DEPTH_CONSTANT * loglog)
        }
        Mass::Renyi(_) => eps / 2.0,
    }
}

/// Node summary used by the Shannon merge: an upper count estimate, a lower
/// one and an entropy estimate.
#[derive(Clone, Copy, Debug)]
struct Triple {
    n_hat: f64,
    n_low: f64,
    h: f64,
}

fn merge_pair(v: Triple, w: Triple) -> Triple {
    let sum = v.n_hat + w.n_hat;
    let low = v.n_low + w.n_low;
    let h = (v.n_hat * v.h + w.n_hat * w.h + v.n_hat * (sum / v.n_low).log2() + w.n_hat * (sum / w.n_low).log2()) / low;
    Triple { n_hat: sum, n_low: low, h }
}

/// Pairwise merge in rounds; returns the result and the number of rounds.
fn merge_balanced(leaves: &[Triple]) -> (Triple, usize) {
    let mut cur = leaves.to_vec();
    let mut depth = 0;
    while cur.len() > 1 {
        cur = cur.chunks(2).map(|c| if c.len() == 2 { merge_pair(c[0], c[1]) } else { c[0] }).collect();
        depth += 1;
    }
    (cur[0], depth)
}

impl Builder<'_> {
    fn build_first(&mut self, mapped: &[MappedPoint], first: &mut [FirstNode], id: usize, lo: usize, hi: usize) {
        let mut entries: Vec<(u32, u32, ColorId)> = mapped[lo..hi]
            .iter()
            .filter(|mp| mp.prev.is_none_or(|p| (p as usize) < lo))
            .map(|mp| (mp.prev.map_or(0, |p| p + 1), mp.pos, mp.color))
            .collect();
        entries.sort_unstable();
        let k = entries.len();
        let mut node = FirstNode {
            lo: lo as u32,
            hi: hi as u32,
            keys: entries.iter().map(|e| e.0).collect(),
            starts: entries.iter().map(|e| e.1).collect(),
            colors: entries.iter().map(|e| e.2).collect(),
            spans: vec![(0, 0); if k == 0 { 0 } else { 4 * k }],
        };
        if k > 0 {
            self.build_secondary(&mut node, 1, 0, k);
        }
        first[id] = node;
        if hi - lo > 1 {
            let mid = (lo + hi) / 2;
            self.build_first(mapped, first, 2 * id, lo, mid);
            self.build_first(mapped, first, 2 * id + 1, mid, hi);
        }
    }

    /// Builds runs for secondary node `id` over entries `[lo, hi)` and returns
    /// the sorted positions of its colors from their starts onward.
    fn build_secondary(&mut self, node: &mut FirstNode, id: usize, lo: usize, hi: usize) -> Vec<u32> {
        let merged = if hi - lo == 1 {
            let c = node.colors[lo] as usize;
            let s = node.starts[lo];
            self.occ[c][self.rank[s as usize] as usize..].to_vec()
        } else {
            let mid = (lo + hi) / 2;
            let left = self.build_secondary(node, 2 * id, lo, mid);
            let right = self.build_secondary(node, 2 * id + 1, mid, hi);
            merge_sorted(&left, &right)
        };
        let offset = self.runs.len() as u32;
        self.sweep(&merged);
        node.spans[id] = (offset, self.runs.len() as u32 - offset);
        merged
    }

    fn level(&self, x: f64) -> i32 {
        let p = self.powers;
        let mut i = ((x.ln() / self.ln_base).ceil().max(0.0) as usize + 1).min(p.len() - 1);
        while i + 1 < p.len() && p[i] < x {
            i += 1;
        }
        while i > 0 && p[i - 1] >= x {
            i -= 1;
        }
        i as i32 - 1
    }

    /// Appends the runs of exponents over right ends at the merged positions.
    fn sweep(&mut self, merged: &[u32]) {
        let mut touched: Vec<ColorId> = Vec::new();
        // Neumaier-compensated sum of the per-color terms.
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        let mut current: Option<Run> = None;
        for (t, &p) in merged.iter().enumerate() {
            let c = self.colors[p as usize];
            let k = self.counts[c as usize] as usize;
            if k == 0 {
                touched.push(c);
            }
            self.counts[c as usize] += 1;
            let delta = self.xlogx[k + 1] - self.xlogx[k];
            let s = sum + delta;
            comp += if sum.abs() >= delta.abs() { (sum - s) + delta } else { (delta - s) + sum };
            sum = s;
            let total = (t + 1) as f64;
            let count = self.level(total);
            let mass = match self.mass {
                Mass::Shannon => {
                    let f = self.xlogx[t + 1] - (sum + comp);
                    if touched.len() < 2 {
                        ZERO_LEVEL
                    } else {
                        self.level(f.max(0.0) * (1.0 + SLACK))
                    }
                }
                Mass::Renyi(_) => self.level((sum + comp) * (1.0 + SLACK)),
            };
            match current {
                Some(r) if r.count == count && r.mass == mass => {}
                Some(r) => {
                    self.runs.push(Run { last: p - 1, ..r });
                    current = Some(Run { last: 0, count, mass });
                }
                None => current = Some(Run { last: 0, count, mass }),
            }
        }
        if let Some(r) = current {
            self.runs.push(Run { last: u32::MAX, ..r });
        }
        for c in touched {
            self.counts[c as usize] = 0;
        }
    }
}

fn merge_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
