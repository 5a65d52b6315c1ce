//! Exact range entropy on a line with a precomputed bucket table.
//!
//! Points are sorted (ties by input index) and cut into buckets of
//! `s = ceil(n^t)` consecutive positions. The table holds the entropy of every
//! run of whole buckets `i..=j`. A query takes the longest run of whole buckets
//! inside the range and folds in the at most `2s` leftover points color by
//! color: remove the color's weight already counted, re-insert the new total.

use serde::{Deserialize, Serialize};

use crate::entropy::{self, ColorId, EntropyKind, EntropySummary, Order};
use crate::error::{Error, Result};
use crate::points::{ColoredPointSet, QueryRect};

/// Work done by one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Points handled one by one outside the table run.
    pub fringe_points: usize,
    /// Distinct colors among the fringe points.
    pub fringe_colors: usize,
    /// Whether a table run was used.
    pub table_hit: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ColorPositions {
    pos: Vec<u32>,
    /// prefix[i] = weight of the first i entries.
    prefix: Vec<f64>,
}

impl ColorPositions {
    fn weight_between(&self, a: usize, b: usize) -> f64 {
        let i = self.pos.partition_point(|&p| (p as usize) < a);
        let j = self.pos.partition_point(|&p| (p as usize) < b);
        self.prefix[j] - self.prefix[i]
    }
}

/// Exact 1-D range entropy index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Exact1DIndex {
    t: f64,
    bucket: usize,
    buckets: usize,
    keys: Vec<f64>,
    colors: Vec<ColorId>,
    weights: Vec<f64>,
    orders: Vec<Order>,
    counts: Vec<f64>,
    /// One table per kind: Shannon first, then each order.
    values: Vec<Vec<f64>>,
    by_color: Vec<ColorPositions>,
}

impl Exact1DIndex {
    /// Builds the index; `orders` lists the Rényi orders answerable later.
    pub fn build(points: &ColoredPointSet, t: f64, orders: &[f64]) -> Result<Self> {
        if points.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: points.dim() });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!("t must lie in [0, 1], got {t}")));
        }
        let orders: Vec<Order> = orders.iter().map(|&a| Order::new(a)).collect::<Result<_>>()?;
        let n = points.len();
        let order = points.order_by_axis(0);
        let keys: Vec<f64> = order.iter().map(|&i| points.coord(i as usize, 0)).collect();
        let colors: Vec<ColorId> = order.iter().map(|&i| points.color(i as usize)).collect();
        let weights: Vec<f64> = order.iter().map(|&i| points.weight(i as usize)).collect();
        let bucket = bucket_size(n, t);
        let buckets = if n == 0 { 0 } else { n.div_ceil(bucket) };

        let m = points.color_bound();
        let mut by_color: Vec<ColorPositions> =
            (0..m).map(|_| ColorPositions { pos: Vec::new(), prefix: vec![0.0] }).collect();
        for (p, (&c, &w)) in colors.iter().zip(weights.iter()).enumerate() {
            let cp = &mut by_color[c as usize];
            cp.pos.push(p as u32);
            let last = *cp.prefix.last().unwrap();
            cp.prefix.push(last + w);
        }

        let mut idx = Exact1DIndex {
            t,
            bucket,
            buckets,
            keys,
            colors,
            weights,
            orders,
            counts: Vec::new(),
            values: Vec::new(),
            by_color,
        };
        idx.fill_table(m);
        Ok(idx)
    }

    fn kinds(&self) -> Vec<EntropyKind> {
        std::iter::once(EntropyKind::Shannon).chain(self.orders.iter().map(|&o| EntropyKind::Renyi(o))).collect()
    }

    /// Fills the table row by row; each entry extends the previous one by one bucket.
    fn fill_table(&mut self, num_colors: usize) {
        let k = self.buckets;
        let cells = k * (k + 1) / 2;
        let kinds = self.kinds();
        self.counts = vec![0.0; cells];
        self.values = vec![vec![0.0; cells]; kinds.len()];
        let mut cnt = vec![0.0f64; num_colors];
        let mut touched: Vec<ColorId> = Vec::new();
        let mut agg: Vec<(ColorId, f64)> = Vec::new();
        for i in 0..k {
            for &c in &touched {
                cnt[c as usize] = 0.0;
            }
            touched.clear();
            let mut n = 0.0;
            let mut h = vec![0.0; kinds.len()];
            for j in i..k {
                let (s, e) = self.bucket_span(j);
                agg.clear();
                agg.extend((s..e).filter(|&p| self.weights[p] > 0.0).map(|p| (self.colors[p], self.weights[p])));
                aggregate(&mut agg);
                let mut n_after = n;
                for &(c, w) in &agg {
                    let old = cnt[c as usize];
                    if old == 0.0 {
                        touched.push(c);
                    }
                    for (q, &kind) in kinds.iter().enumerate() {
                        let (_, v) = entropy::reweight_raw(kind, n_after, h[q], old, old + w);
                        h[q] = v;
                    }
                    n_after += w;
                    cnt[c as usize] = old + w;
                }
                n = n_after;
                let cell = self.cell(i, j);
                self.counts[cell] = n;
                for q in 0..kinds.len() {
                    self.values[q][cell] = h[q];
                }
            }
        }
    }

    fn cell(&self, i: usize, j: usize) -> usize {
        i * self.buckets - i * i.saturating_sub(1) / 2 + (j - i)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Points per bucket (the last bucket may hold fewer).
    pub fn bucket_size(&self) -> usize {
        self.bucket
    }

    pub fn num_buckets(&self) -> usize {
        self.buckets
    }

    pub fn orders(&self) -> Vec<f64> {
        self.orders.iter().map(|o| o.get()).collect()
    }

    /// Sorted positions `[start, end)` of bucket `j`.
    pub fn bucket_span(&self, j: usize) -> (usize, usize) {
        (j * self.bucket, ((j + 1) * self.bucket).min(self.keys.len()))
    }

    /// Stored entropy of buckets `i..=j`.
    pub fn table_entry(&self, i: usize, j: usize, kind: EntropyKind) -> Result<EntropySummary> {
        let q = self.kind_slot(kind)?;
        if i > j || j >= self.buckets {
            return Err(Error::InvalidParameter(format!("no table entry for buckets {i}..={j}")));
        }
        let cell = self.cell(i, j);
        Ok(EntropySummary { kind, count: self.counts[cell], value: self.values[q][cell] })
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

    /// Sorted positions covered by a closed interval.
    pub fn span(&self, lo: f64, hi: f64) -> (usize, usize) {
        let a = self.keys.partition_point(|&k| k < lo);
        let b = self.keys.partition_point(|&k| k <= hi);
        (a, b.max(a))
    }

    pub fn query(&self, rect: &QueryRect, kind: EntropyKind) -> Result<EntropySummary> {
        self.query_with_stats(rect, kind).map(|(s, _)| s)
    }

    pub fn query_with_stats(&self, rect: &QueryRect, kind: EntropyKind) -> Result<(EntropySummary, QueryStats)> {
        if rect.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: rect.dim() });
        }
        let (a, b) = self.span(rect.lo()[0], rect.hi()[0]);
        self.query_positions_with_stats(a, b, kind)
    }

    /// Entropy of the points at sorted positions `[a, b)`.
    pub fn query_positions(&self, a: usize, b: usize, kind: EntropyKind) -> Result<EntropySummary> {
        self.query_positions_with_stats(a, b, kind).map(|(s, _)| s)
    }

    pub fn query_positions_with_stats(&self, a: usize, b: usize, kind: EntropyKind) -> Result<(EntropySummary, QueryStats)> {
        let q = self.kind_slot(kind)?;
        let b = b.min(self.keys.len());
        let mut stats = QueryStats::default();
        if a >= b {
            return Ok((EntropySummary::empty(kind), stats));
        }
        let s = self.bucket;
        let first = a.div_ceil(s);
        let last_end_bucket = if b == self.keys.len() { self.buckets } else { b / s };
        let (mut n, mut h, table_lo, table_hi) = if first < last_end_bucket {
            let j = last_end_bucket - 1;
            let cell = self.cell(first, j);
            stats.table_hit = true;
            (self.counts[cell], self.values[q][cell], first * s, self.bucket_span(j).1)
        } else {
            (0.0, 0.0, a, a)
        };
        let mut fringe: Vec<(ColorId, f64)> = (a..table_lo)
            .chain(table_hi.max(a)..b)
            .filter(|&p| self.weights[p] > 0.0)
            .map(|p| (self.colors[p], self.weights[p]))
            .collect();
        stats.fringe_points = (table_lo - a) + (b - table_hi.max(a));
        debug_assert!(stats.fringe_points <= 2 * s);
        aggregate(&mut fringe);
        stats.fringe_colors = fringe.len();
        for &(c, w) in &fringe {
            let inside = if table_lo < table_hi { self.by_color[c as usize].weight_between(table_lo, table_hi) } else { 0.0 };
            let (n2, h2) = entropy::reweight_raw(kind, n, h, inside, inside + w);
            n = n2;
            h = h2;
        }
        Ok((EntropySummary { kind, count: n, value: h }, stats))
    }
}

/// ceil(n^t), at least 1.
pub fn bucket_size(n: usize, t: f64) -> usize {
    if n == 0 {
        return 1;
    }
    let s = (n as f64).powf(t).ceil() as usize;
    s.clamp(1, n)
}

/// Sorts (color, weight) pairs by color and sums equal colors.
pub(crate) fn aggregate(items: &mut Vec<(ColorId, f64)>) {
    items.sort_unstable_by_key(|&(c, _)| c);
    let mut out = 0;
    for i in 0..items.len() {
        if out > 0 && items[out - 1].0 == items[i].0 {
            items[out - 1].1 += items[i].1;
        } else {
            items[out] = items[i];
            out += 1;
        }
    }
    items.truncate(out);
}
