//! Entropy values and the update algebra for color-disjoint sets.
//!
//! All logarithms are base 2. An empty set has entropy 0 under every kind.
//! Weighted sets use weights in place of counts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense color identifier.
pub type ColorId = u32;

/// A Rényi order, always finite and strictly greater than 1.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Order(f64);

impl Order {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 1.0 {
            Ok(Order(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Order::new(v)
    }
}

impl From<Order> for f64 {
    fn from(o: Order) -> f64 {
        o.0
    }
}

/// Which entropy is being measured.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum EntropyKind {
    Shannon,
    Renyi(Order),
}

impl EntropyKind {
    pub fn renyi(alpha: f64) -> Result<Self> {
        Ok(EntropyKind::Renyi(Order::new(alpha)?))
    }

    pub fn alpha(self) -> Option<f64> {
        match self {
            EntropyKind::Shannon => None,
            EntropyKind::Renyi(o) => Some(o.get()),
        }
    }
}

impl std::fmt::Display for EntropyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EntropyKind::Shannon => write!(f, "shannon"),
            EntropyKind::Renyi(o) => write!(f, "renyi({})", o.get()),
        }
    }
}

/// Entropy of a set together with its total weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropySummary {
    pub kind: EntropyKind,
    pub count: f64,
    pub value: f64,
}

impl EntropySummary {
    pub fn empty(kind: EntropyKind) -> Self {
        EntropySummary { kind, count: 0.0, value: 0.0 }
    }

    /// A set made of one color with total weight `w`.
    pub fn single_color(kind: EntropyKind, w: f64) -> Self {
        EntropySummary { kind, count: w.max(0.0), value: 0.0 }
    }

    pub fn is_empty(&self) -> bool {
        self.count <= 0.0
    }

    /// Entropy of the union with a color-disjoint set.
    pub fn merge(&self, other: &EntropySummary) -> Result<EntropySummary> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        let (count, value) = merge_raw(self.kind, self.count, self.value, other.count, other.value);
        Ok(EntropySummary { kind: self.kind, count, value })
    }

    /// Adds a color not yet present, with total weight `w`.
    pub fn insert_color(&self, w: f64) -> Result<EntropySummary> {
        check_weight(w)?;
        let (count, value) = insert_raw(self.kind, self.count, self.value, w);
        Ok(EntropySummary { kind: self.kind, count, value })
    }

    /// Removes every point of one present color, whose total weight is `w`.
    pub fn delete_color(&self, w: f64) -> Result<EntropySummary> {
        check_weight(w)?;
        if w >= self.count {
            return Err(Error::Underflow { total: self.count, removed: w });
        }
        let (count, value) = delete_raw(self.kind, self.count, self.value, w);
        Ok(EntropySummary { kind: self.kind, count, value })
    }
}

fn check_weight(w: f64) -> Result<()> {
    if w.is_finite() && w > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWeight(w))
    }
}

/// Per-color total weights of a point set.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ColorHistogram {
    weights: BTreeMap<ColorId, f64>,
}

impl ColorHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_colors<I: IntoIterator<Item = ColorId>>(colors: I) -> Self {
        let mut h = Self::new();
        for c in colors {
            h.add(c, 1.0);
        }
        h
    }

    pub fn add(&mut self, color: ColorId, w: f64) {
        if w > 0.0 {
            *self.weights.entry(color).or_insert(0.0) += w;
        }
    }

    pub fn get(&self, color: ColorId) -> f64 {
        self.weights.get(&color).copied().unwrap_or(0.0)
    }

    pub fn remove(&mut self, color: ColorId) -> f64 {
        self.weights.remove(&color).unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.weights.values().sum()
    }

    pub fn num_colors(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ColorId, f64)> + '_ {
        self.weights.iter().map(|(&c, &w)| (c, w))
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.weights.values().copied()
    }

    /// Color of largest weight, ties broken by smaller id.
    pub fn heaviest(&self) -> Option<(ColorId, f64)> {
        let mut best: Option<(ColorId, f64)> = None;
        for (c, w) in self.iter() {
            if best.is_none_or(|(_, bw)| w > bw) {
                best = Some((c, w));
            }
        }
        best
    }
}

/// Shannon entropy of a histogram.
pub fn shannon_entropy(h: &ColorHistogram) -> EntropySummary {
    let n = h.total();
    EntropySummary { kind: EntropyKind::Shannon, count: n, value: shannon_of_weights(h.weights(), n) }
}

/// Rényi entropy of order `alpha` of a histogram.
pub fn renyi_entropy(h: &ColorHistogram, alpha: f64) -> Result<EntropySummary> {
    let order = Order::new(alpha)?;
    let n = h.total();
    Ok(EntropySummary { kind: EntropyKind::Renyi(order), count: n, value: renyi_of_weights(h.weights(), n, alpha) })
}

/// Entropy of the given kind.
pub fn entropy(h: &ColorHistogram, kind: EntropyKind) -> EntropySummary {
    let n = h.total();
    let value = match kind {
        EntropyKind::Shannon => shannon_of_weights(h.weights(), n),
        EntropyKind::Renyi(o) => renyi_of_weights(h.weights(), n, o.get()),
    };
    EntropySummary { kind, count: n, value }
}

/// Shannon entropy of per-color weights summing to `n`.
pub fn shannon_of_weights<I: IntoIterator<Item = f64>>(weights: I, n: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    let mut s = 0.0;
    for w in weights {
        if w > 0.0 {
            s += (w / n) * (n / w).log2();
        }
    }
    s.max(0.0)
}

/// Rényi entropy of per-color weights summing to `n`.
pub fn renyi_of_weights<I: IntoIterator<Item = f64>>(weights: I, n: f64, alpha: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    let mut s = 0.0;
    for w in weights {
        if w > 0.0 {
            s += (w / n).powf(alpha);
        }
    }
    if s <= 0.0 {
        return 0.0;
    }
    ((1.0 / s).log2() / (alpha - 1.0)).max(0.0)
}

/// Shannon merge of two color-disjoint sets.
pub fn merge_shannon(a: &EntropySummary, b: &EntropySummary) -> EntropySummary {
    let (count, value) = shannon_merge(a.count, a.value, b.count, b.value);
    EntropySummary { kind: EntropyKind::Shannon, count, value }
}

/// Shannon entropy after adding a new color of weight `w`.
pub fn insert_color_shannon(a: &EntropySummary, w: f64) -> Result<EntropySummary> {
    check_weight(w)?;
    let (count, value) = shannon_merge(a.count, a.value, w, 0.0);
    Ok(EntropySummary { kind: EntropyKind::Shannon, count, value })
}

/// Shannon entropy after removing a whole color of weight `w`.
pub fn delete_color_shannon(a: &EntropySummary, w: f64) -> Result<EntropySummary> {
    check_weight(w)?;
    if w >= a.count {
        return Err(Error::Underflow { total: a.count, removed: w });
    }
    let (count, value) = shannon_delete(a.count, a.value, w);
    Ok(EntropySummary { kind: EntropyKind::Shannon, count, value })
}

/// Rényi merge of two color-disjoint sets.
pub fn merge_renyi(a: &EntropySummary, b: &EntropySummary, alpha: f64) -> Result<EntropySummary> {
    let order = Order::new(alpha)?;
    let (count, value) = renyi_merge(a.count, a.value, b.count, b.value, alpha);
    Ok(EntropySummary { kind: EntropyKind::Renyi(order), count, value })
}

/// Rényi entropy after adding a new color of weight `w`.
pub fn insert_color_renyi(a: &EntropySummary, w: f64, alpha: f64) -> Result<EntropySummary> {
    let order = Order::new(alpha)?;
    check_weight(w)?;
    let (count, value) = renyi_merge(a.count, a.value, w, 0.0, alpha);
    Ok(EntropySummary { kind: EntropyKind::Renyi(order), count, value })
}

/// Rényi entropy after removing a whole color of weight `w`.
pub fn delete_color_renyi(a: &EntropySummary, w: f64, alpha: f64) -> Result<EntropySummary> {
    let order = Order::new(alpha)?;
    check_weight(w)?;
    if w >= a.count {
        return Err(Error::Underflow { total: a.count, removed: w });
    }
    let (count, value) = renyi_delete(a.count, a.value, w, alpha);
    Ok(EntropySummary { kind: EntropyKind::Renyi(order), count, value })
}

pub(crate) fn merge_raw(kind: EntropyKind, n1: f64, h1: f64, n2: f64, h2: f64) -> (f64, f64) {
    match kind {
        EntropyKind::Shannon => shannon_merge(n1, h1, n2, h2),
        EntropyKind::Renyi(o) => renyi_merge(n1, h1, n2, h2, o.get()),
    }
}

pub(crate) fn insert_raw(kind: EntropyKind, n: f64, h: f64, w: f64) -> (f64, f64) {
    merge_raw(kind, n, h, w, 0.0)
}

/// Removes a whole color of weight `w`; removing everything yields the empty set.
pub(crate) fn delete_raw(kind: EntropyKind, n: f64, h: f64, w: f64) -> (f64, f64) {
    match kind {
        EntropyKind::Shannon => shannon_delete(n, h, w),
        EntropyKind::Renyi(o) => renyi_delete(n, h, w, o.get()),
    }
}

/// Replaces the weight of a present color `old` by `new` (either may be 0).
pub(crate) fn reweight_raw(kind: EntropyKind, n: f64, h: f64, old: f64, new: f64) -> (f64, f64) {
    let (n, h) = if old > 0.0 { delete_raw(kind, n, h, old) } else { (n, h) };
    if new > 0.0 {
        insert_raw(kind, n, h, new)
    } else {
        (n, h)
    }
}

pub(crate) fn shannon_merge(n1: f64, h1: f64, n2: f64, h2: f64) -> (f64, f64) {
    if n2 <= 0.0 {
        return (n1.max(0.0), if n1 > 0.0 { h1 } else { 0.0 });
    }
    if n1 <= 0.0 {
        return (n2, h2);
    }
    let n = n1 + n2;
    let f = n1 * h1 + n2 * h2 + n1 * (n / n1).log2() + n2 * (n / n2).log2();
    (n, (f / n).max(0.0))
}

pub(crate) fn shannon_delete(n: f64, h: f64, w: f64) -> (f64, f64) {
    let rest = n - w;
    if rest <= 0.0 || rest <= n * 1e-15 {
        return (0.0, 0.0);
    }
    let f = n * h - w * (n / w).log2() - rest * (n / rest).log2();
    (rest, (f / rest).max(0.0))
}

/// log2(2^a + 2^b)
fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// log2(2^a - 2^b), or -inf when the difference is not positive.
fn log2_sub(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if b >= a {
        return f64::NEG_INFINITY;
    }
    a + (-(b - a).exp2()).ln_1p() / std::f64::consts::LN_2
}

/// log2 of the power sum N^alpha * 2^((1-alpha) H).
fn log2_power_sum(n: f64, h: f64, alpha: f64) -> f64 {
    if n <= 0.0 {
        f64::NEG_INFINITY
    } else {
        alpha * n.log2() + (1.0 - alpha) * h
    }
}

fn renyi_from_log2_power_sum(n: f64, ls: f64, alpha: f64) -> f64 {
    if n <= 0.0 || !ls.is_finite() {
        return 0.0;
    }
    ((alpha * n.log2() - ls) / (alpha - 1.0)).max(0.0)
}

pub(crate) fn renyi_merge(n1: f64, h1: f64, n2: f64, h2: f64, alpha: f64) -> (f64, f64) {
    if n2 <= 0.0 {
        return (n1.max(0.0), if n1 > 0.0 { h1 } else { 0.0 });
    }
    if n1 <= 0.0 {
        return (n2, h2);
    }
    let ls = log2_add(log2_power_sum(n1, h1, alpha), log2_power_sum(n2, h2, alpha));
    let n = n1 + n2;
    (n, renyi_from_log2_power_sum(n, ls, alpha))
}

pub(crate) fn renyi_delete(n: f64, h: f64, w: f64, alpha: f64) -> (f64, f64) {
    let rest = n - w;
    if rest <= 0.0 || rest <= n * 1e-15 {
        return (0.0, 0.0);
    }
    let ls = log2_sub(log2_power_sum(n, h, alpha), alpha * w.log2());
    (rest, renyi_from_log2_power_sum(rest, ls, alpha))
}
