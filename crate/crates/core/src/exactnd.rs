//! Exact range entropy in any dimension with color-ordered buckets.
//!
//! Points are sorted by color and cut into buckets of at most `ceil(n^t)`
//! points, so two consecutive buckets share at most one color. Inside a bucket
//! every query box selects the same points as the box obtained by snapping each
//! face inward to the nearest bucket coordinate; those snapped boxes are the
//! table keys. Each entry stores the entropy, total weight, smallest and
//! largest color and their weights. A query reads one entry per bucket and
//! stitches them in color order, repairing the one color two neighbours share.
//!
//! A bucket whose table would exceed the entry budget keeps no table and
//! computes the entry for the snapped box from its points at query time.

use serde::{Deserialize, Serialize};

use crate::entropy::{self, ColorId, EntropyKind, EntropySummary, Order};
use crate::error::{Error, Result};
use crate::points::{ColoredPointSet, QueryRect};

/// Default cap on the number of stored table entries over all buckets.
pub const DEFAULT_ENTRY_BUDGET: usize = 1 << 20;

/// What one bucket contributes to a query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BucketEntry {
    pub count: f64,
    pub value: f64,
    pub min_color: ColorId,
    pub max_color: ColorId,
    pub min_weight: f64,
    pub max_weight: f64,
}

impl BucketEntry {
    fn empty() -> Self {
        BucketEntry { count: 0.0, value: 0.0, min_color: 0, max_color: 0, min_weight: 0.0, max_weight: 0.0 }
    }
}

/// Work done by one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub buckets_visited: usize,
    pub table_lookups: usize,
    pub scanned_buckets: usize,
    pub shared_color_repairs: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Table {
    counts: Vec<f64>,
    values: Vec<Vec<f64>>,
    min_color: Vec<u32>,
    max_color: Vec<u32>,
    min_weight: Vec<f64>,
    max_weight: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Bucket {
    ids: Vec<u32>,
    /// Local color index per point (into `palette`).
    local: Vec<u32>,
    palette: Vec<ColorId>,
    weights: Vec<f64>,
    axes: Vec<Vec<f64>>,
    /// Rank of each point along each axis, point-major.
    ranks: Vec<u32>,
    strides: Vec<usize>,
    table: Option<Table>,
}

fn pair_index(lo: usize, hi: usize) -> usize {
    hi * (hi + 1) / 2 + lo
}

impl Bucket {
    fn dim(&self) -> usize {
        self.axes.len()
    }

    fn table_size(&self) -> usize {
        self.axes.iter().map(|a| a.len() * (a.len() + 1) / 2).fold(1usize, |acc, x| acc.saturating_mul(x))
    }

    /// Snapped rank box `(lo_k, hi_k)` per axis, or `None` when it is empty.
    fn snap(&self, rect: &QueryRect) -> Option<Vec<(usize, usize)>> {
        let mut out = Vec::with_capacity(self.dim());
        for (k, axis) in self.axes.iter().enumerate() {
            let lo = axis.partition_point(|&x| x < rect.lo()[k]);
            let end = axis.partition_point(|&x| x <= rect.hi()[k]);
            if end == 0 || lo >= end {
                return None;
            }
            out.push((lo, end - 1));
        }
        Some(out)
    }

    fn key(&self, ranks: &[(usize, usize)]) -> usize {
        ranks.iter().zip(&self.strides).map(|(&(l, h), &s)| pair_index(l, h) * s).sum()
    }

    fn inside(&self, p: usize, ranks: &[(usize, usize)]) -> bool {
        let d = self.dim();
        ranks.iter().enumerate().all(|(k, &(l, h))| {
            let r = self.ranks[p * d + k] as usize;
            l <= r && r <= h
        })
    }

    /// Entry for a snapped box computed from the points.
    fn scan(&self, ranks: &[(usize, usize)], kind: EntropyKind) -> BucketEntry {
        let mut w = vec![0.0f64; self.palette.len()];
        for p in 0..self.ids.len() {
            if self.inside(p, ranks) {
                w[self.local[p] as usize] += self.weights[p];
            }
        }
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return BucketEntry::empty();
        }
        let lo = w.iter().position(|&x| x > 0.0).unwrap();
        let hi = w.iter().rposition(|&x| x > 0.0).unwrap();
        let value = match kind {
            EntropyKind::Shannon => entropy::shannon_of_weights(w.iter().copied(), total),
            EntropyKind::Renyi(o) => entropy::renyi_of_weights(w.iter().copied(), total, o.get()),
        };
        BucketEntry {
            count: total,
            value,
            min_color: self.palette[lo],
            max_color: self.palette[hi],
            min_weight: w[lo],
            max_weight: w[hi],
        }
    }

    /// Builds every entry; the last axis is swept so each entry extends the previous one.
    fn fill(&mut self, kinds: &[EntropyKind]) {
        let d = self.dim();
        let size = self.table_size();
        let mut t = Table {
            counts: vec![0.0; size],
            values: vec![vec![0.0; size]; kinds.len()],
            min_color: vec![0; size],
            max_color: vec![0; size],
            min_weight: vec![0.0; size],
            max_weight: vec![0.0; size],
        };
        let last = d - 1;
        let c_last = self.axes[last].len();
        let mut by_last: Vec<usize> = (0..self.ids.len()).collect();
        by_last.sort_by_key(|&p| self.ranks[p * d + last]);
        let prefix_pairs: Vec<Vec<(usize, usize)>> = (0..last)
            .map(|k| {
                let c = self.axes[k].len();
                (0..c).flat_map(|hi| (0..=hi).map(move |lo| (lo, hi))).collect()
            })
            .collect();
        let mut combo = vec![0usize; last];
        let mut w = vec![0.0f64; self.palette.len()];
        let mut h = vec![0.0f64; kinds.len()];
        loop {
            let ranges: Vec<(usize, usize)> = (0..last).map(|k| prefix_pairs[k][combo[k]]).collect();
            let members: Vec<usize> = by_last
                .iter()
                .copied()
                .filter(|&p| {
                    ranges.iter().enumerate().all(|(k, &(l, hh))| {
                        let r = self.ranks[p * d + k] as usize;
                        l <= r && r <= hh
                    })
                })
                .collect();
            let base: usize = ranges.iter().enumerate().map(|(k, &(l, hh))| pair_index(l, hh) * self.strides[k]).sum();
            let mut start = 0;
            for lo in 0..c_last {
                while start < members.len() && (self.ranks[members[start] * d + last] as usize) < lo {
                    start += 1;
                }
                w.iter_mut().for_each(|x| *x = 0.0);
                h.iter_mut().for_each(|x| *x = 0.0);
                let mut n = 0.0;
                let (mut lo_c, mut hi_c) = (usize::MAX, 0usize);
                let mut cur = start;
                for hi in lo..c_last {
                    while cur < members.len() && self.ranks[members[cur] * d + last] as usize == hi {
                        let p = members[cur];
                        let c = self.local[p] as usize;
                        let old = w[c];
                        let new = old + self.weights[p];
                        for (q, &kind) in kinds.iter().enumerate() {
                            h[q] = entropy::reweight_raw(kind, n, h[q], old, new).1;
                        }
                        n += self.weights[p];
                        w[c] = new;
                        lo_c = lo_c.min(c);
                        hi_c = hi_c.max(c);
                        cur += 1;
                    }
                    let cell = base + pair_index(lo, hi) * self.strides[last];
                    t.counts[cell] = n;
                    for q in 0..kinds.len() {
                        t.values[q][cell] = h[q];
                    }
                    if n > 0.0 {
                        t.min_color[cell] = self.palette[lo_c];
                        t.max_color[cell] = self.palette[hi_c];
                        t.min_weight[cell] = w[lo_c];
                        t.max_weight[cell] = w[hi_c];
                    }
                }
            }
            // Next combination of the leading axes.
            let mut k = 0;
            loop {
                if k == last {
                    self.table = Some(t);
                    return;
                }
                combo[k] += 1;
                if combo[k] < prefix_pairs[k].len() {
                    break;
                }
                combo[k] = 0;
                k += 1;
            }
        }
    }
}

/// Exact range entropy index for points in any dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactNDIndex {
    dim: usize,
    t: f64,
    bucket_cap: usize,
    orders: Vec<Order>,
    buckets: Vec<Bucket>,
}

impl ExactNDIndex {
    pub fn build(points: &ColoredPointSet, t: f64, orders: &[f64]) -> Result<Self> {
        Self::build_with_budget(points, t, orders, DEFAULT_ENTRY_BUDGET)
    }

    /// Like [`build`](Self::build) with an explicit cap on stored table entries.
    pub fn build_with_budget(points: &ColoredPointSet, t: f64, orders: &[f64], budget: usize) -> Result<Self> {
        let dim = points.dim();
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!("t must lie in [0, 1], got {t}")));
        }
        let orders: Vec<Order> = orders.iter().map(|&a| Order::new(a)).collect::<Result<_>>()?;
        let mut ids: Vec<u32> = (0..points.len() as u32).filter(|&i| points.weight(i as usize) > 0.0).collect();
        ids.sort_by_key(|&i| (points.color(i as usize), i));
        let cap = crate::exact1d::bucket_size(points.len(), t);
        let mut kinds = vec![EntropyKind::Shannon];
        kinds.extend(orders.iter().map(|&o| EntropyKind::Renyi(o)));
        let mut used = 0usize;
        let mut buckets = Vec::new();
        for chunk in ids.chunks(cap) {
            let mut b = make_bucket(points, chunk);
            let size = b.table_size();
            if used + size <= budget {
                b.fill(&kinds);
                used += size;
            }
            buckets.push(b);
        }
        Ok(ExactNDIndex { dim, t, bucket_cap: cap, orders, buckets })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Indexed points (zero weights are dropped at build).
    pub fn len(&self) -> usize {
        self.buckets.iter().map(|b| b.ids.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn num_buckets(&self) -> usize {
        self.buckets.len()
    }

    pub fn bucket_capacity(&self) -> usize {
        self.bucket_cap
    }

    pub fn orders(&self) -> Vec<f64> {
        self.orders.iter().map(|o| o.get()).collect()
    }

    /// Buckets that keep a full table.
    pub fn tabulated_buckets(&self) -> usize {
        self.buckets.iter().filter(|b| b.table.is_some()).count()
    }

    /// Number of stored table entries.
    pub fn stored_entries(&self) -> usize {
        self.buckets.iter().filter(|b| b.table.is_some()).map(|b| b.table_size()).sum()
    }

    /// Input indices of the points in bucket `i`, in color order.
    pub fn bucket_points(&self, i: usize) -> &[u32] {
        &self.buckets[i].ids
    }

    /// Distinct colors of bucket `i`, ascending.
    pub fn bucket_colors(&self, i: usize) -> &[ColorId] {
        &self.buckets[i].palette
    }

    /// The snapped box of bucket `i` for `rect`, in coordinates.
    pub fn canonical_rect(&self, i: usize, rect: &QueryRect) -> Option<QueryRect> {
        let b = &self.buckets[i];
        let snapped = b.snap(rect)?;
        let lo = snapped.iter().enumerate().map(|(k, &(l, _))| b.axes[k][l]).collect();
        let hi = snapped.iter().enumerate().map(|(k, &(_, h))| b.axes[k][h]).collect();
        QueryRect::new(lo, hi).ok()
    }

    fn kind_slot(&self, kind: EntropyKind) -> Result<usize> {
        match kind {
            EntropyKind::Shannon => Ok(0),
            EntropyKind::Renyi(o) => self
                .orders
                .iter()
                .position(|&x| x == o)
                .map(|p| p + 1)
                .ok_or(Error::OrderNotIndexed(o.get())),
        }
    }

    /// Entry bucket `i` contributes for `rect`, from its table or by scanning.
    pub fn bucket_entry(&self, i: usize, rect: &QueryRect, kind: EntropyKind) -> Result<BucketEntry> {
        let q = self.kind_slot(kind)?;
        Ok(self.entry(&self.buckets[i], rect, kind, q).0)
    }

    fn entry(&self, b: &Bucket, rect: &QueryRect, kind: EntropyKind, q: usize) -> (BucketEntry, bool) {
        let Some(ranks) = b.snap(rect) else {
            return (BucketEntry::empty(), true);
        };
        match &b.table {
            Some(t) => {
                let cell = b.key(&ranks);
                if t.counts[cell] <= 0.0 {
                    return (BucketEntry::empty(), true);
                }
                (
                    BucketEntry {
                        count: t.counts[cell],
                        value: t.values[q][cell],
                        min_color: t.min_color[cell],
                        max_color: t.max_color[cell],
                        min_weight: t.min_weight[cell],
                        max_weight: t.max_weight[cell],
                    },
                    true,
                )
            }
            None => (b.scan(&ranks, kind), false),
        }
    }

    pub fn query(&self, rect: &QueryRect, kind: EntropyKind) -> Result<EntropySummary> {
        self.query_with_stats(rect, kind).map(|(s, _)| s)
    }

    pub fn query_with_stats(&self, rect: &QueryRect, kind: EntropyKind) -> Result<(EntropySummary, QueryStats)> {
        if rect.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rect.dim() });
        }
        let q = self.kind_slot(kind)?;
        let mut stats = QueryStats::default();
        let mut stitch = Stitch::new(kind);
        for b in &self.buckets {
            stats.buckets_visited += 1;
            let (e, from_table) = self.entry(b, rect, kind, q);
            if from_table {
                stats.table_lookups += 1;
            } else {
                stats.scanned_buckets += 1;
            }
            if stitch.push(&e) {
                stats.shared_color_repairs += 1;
            }
        }
        Ok((stitch.finish(), stats))
    }
}

fn make_bucket(points: &ColoredPointSet, ids: &[u32]) -> Bucket {
    let d = points.dim();
    let mut palette: Vec<ColorId> = ids.iter().map(|&i| points.color(i as usize)).collect();
    palette.dedup();
    let local = ids.iter().map(|&i| palette.binary_search(&points.color(i as usize)).unwrap() as u32).collect();
    let weights = ids.iter().map(|&i| points.weight(i as usize)).collect();
    let mut axes = Vec::with_capacity(d);
    for k in 0..d {
        let mut a: Vec<f64> = ids.iter().map(|&i| points.coord(i as usize, k)).collect();
        a.sort_by(f64::total_cmp);
        a.dedup();
        axes.push(a);
    }
    let mut ranks = vec![0u32; ids.len() * d];
    for (p, &i) in ids.iter().enumerate() {
        for k in 0..d {
            let x = points.coord(i as usize, k);
            ranks[p * d + k] = axes[k].partition_point(|&y| y < x) as u32;
        }
    }
    let mut strides = vec![0usize; d];
    let mut s = 1usize;
    for k in (0..d).rev() {
        strides[k] = s;
        let c = axes[k].len();
        s = s.saturating_mul(c * (c + 1) / 2);
    }
    Bucket { ids: ids.to_vec(), local, palette, weights, axes, ranks, strides, table: None }
}

/// Running union of bucket entries taken in color order.
pub struct Stitch {
    kind: EntropyKind,
    n: f64,
    h: f64,
    last_color: Option<ColorId>,
    last_weight: f64,
}

impl Stitch {
    pub fn new(kind: EntropyKind) -> Self {
        Stitch { kind, n: 0.0, h: 0.0, last_color: None, last_weight: 0.0 }
    }

    /// Adds the next entry; returns whether the shared color had to be repaired.
    pub fn push(&mut self, e: &BucketEntry) -> bool {
        if e.count <= 0.0 {
            return false;
        }
        let kind = self.kind;
        if self.last_color == Some(e.min_color) {
            // Fold the shared color into the running set, drop it from the entry, then merge.
            let joined = self.last_weight + e.min_weight;
            let (n, h) = entropy::reweight_raw(kind, self.n, self.h, self.last_weight, joined);
            let (rn, rh) = entropy::delete_raw(kind, e.count, e.value, e.min_weight);
            let (n, h) = entropy::merge_raw(kind, n, h, rn, rh);
            self.n = n;
            self.h = h;
            if e.max_color == e.min_color {
                self.last_weight = joined;
            } else {
                self.last_color = Some(e.max_color);
                self.last_weight = e.max_weight;
            }
            true
        } else {
            let (n, h) = entropy::merge_raw(kind, self.n, self.h, e.count, e.value);
            self.n = n;
            self.h = h;
            self.last_color = Some(e.max_color);
            self.last_weight = e.max_weight;
            false
        }
    }

    pub fn finish(&self) -> EntropySummary {
        EntropySummary { kind: self.kind, count: self.n, value: self.h }
    }
}
