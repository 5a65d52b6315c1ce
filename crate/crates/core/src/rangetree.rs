//! Multi-level orthogonal range trees over weighted colored points.
//!
//! Level `k` is a balanced tree over the points sorted by coordinate `k`
//! (ties by input index). Every node of a non-final level carries a tree of
//! the next level over its own points. Nodes of the final level are contiguous
//! ranges of a sorted array with prefix weights, so node weights are O(1).
//!
//! A color-aware tree also stores, per final-level array, the positions of each
//! color with prefix weights. The weight of color `u` inside a node is then two
//! binary searches away, which is what color-excluding sampling needs.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{ColorHistogram, ColorId};
use crate::error::{Error, Result};
use crate::points::{ColoredPointSet, QueryRect};

#[derive(Clone, Debug, Serialize, Deserialize)]
enum Level {
    Inner(Box<InnerLevel>),
    Last(Box<LastLevel>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct InnerLevel {
    keys: Vec<f64>,
    /// Next-level structure per node, heap numbered (root 1).
    assoc: Vec<Option<Level>>,
}

/// A sorted array of points with prefix weights; its tree nodes are ranges.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LastLevel {
    keys: Vec<f64>,
    ids: Vec<u32>,
    prefix: Vec<f64>,
    cp_colors: Vec<ColorId>,
    cp_pos: Vec<u32>,
    cp_prefix: Vec<f64>,
}

impl LastLevel {
    fn build(points: &ColoredPointSet, mut ids: Vec<u32>, axis: usize, color_aware: bool) -> Self {
        ids.sort_by(|&a, &b| points.coord(a as usize, axis).total_cmp(&points.coord(b as usize, axis)).then(a.cmp(&b)));
        let keys: Vec<f64> = ids.iter().map(|&i| points.coord(i as usize, axis)).collect();
        let mut prefix = Vec::with_capacity(ids.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for &i in &ids {
            acc += points.weight(i as usize);
            prefix.push(acc);
        }
        let (mut cp_colors, mut cp_pos, mut cp_prefix) = (Vec::new(), Vec::new(), Vec::new());
        if color_aware {
            let mut pairs: Vec<(ColorId, u32)> =
                ids.iter().enumerate().map(|(p, &i)| (points.color(i as usize), p as u32)).collect();
            pairs.sort_unstable();
            cp_prefix.push(0.0);
            let mut acc = 0.0;
            for (c, p) in pairs {
                cp_colors.push(c);
                cp_pos.push(p);
                acc += points.weight(ids[p as usize] as usize);
                cp_prefix.push(acc);
            }
        }
        LastLevel { keys, ids, prefix, cp_colors, cp_pos, cp_prefix }
    }

    fn len(&self) -> usize {
        self.ids.len()
    }

    fn span(&self, lo: f64, hi: f64) -> (usize, usize) {
        let a = self.keys.partition_point(|&k| k < lo);
        let b = self.keys.partition_point(|&k| k <= hi);
        (a, b.max(a))
    }

    fn weight(&self, l: usize, r: usize) -> f64 {
        (self.prefix[r] - self.prefix[l]).max(0.0)
    }

    /// Weight of color `c` among positions `[l, r)`.
    fn color_weight(&self, c: ColorId, l: usize, r: usize) -> f64 {
        let s = self.cp_colors.partition_point(|&x| x < c);
        let e = self.cp_colors.partition_point(|&x| x <= c);
        if s == e {
            return 0.0;
        }
        let pos = &self.cp_pos[s..e];
        let i1 = s + pos.partition_point(|&p| (p as usize) < l);
        let i2 = s + pos.partition_point(|&p| (p as usize) < r);
        (self.cp_prefix[i2] - self.cp_prefix[i1]).max(0.0)
    }

    /// Prefix weight up to position `i`, minus color `c` when given.
    fn prefix_excl(&self, i: usize, exclude: Option<ColorId>) -> f64 {
        match exclude {
            None => self.prefix[i],
            Some(c) => self.prefix[i] - self.color_weight(c, 0, i),
        }
    }

    fn decompose<'a>(&'a self, a: usize, b: usize, out: &mut impl FnMut(&'a LastLevel, usize, usize)) {
        if a >= b {
            return;
        }
        fn rec<'a>(
            lv: &'a LastLevel,
            l: usize,
            r: usize,
            a: usize,
            b: usize,
            out: &mut impl FnMut(&'a LastLevel, usize, usize),
        ) {
            if b <= l || r <= a {
                return;
            }
            if a <= l && r <= b {
                out(lv, l, r);
                return;
            }
            let mid = (l + r) / 2;
            rec(lv, l, mid, a, b, out);
            rec(lv, mid, r, a, b, out);
        }
        rec(self, 0, self.len(), a, b, out);
    }

    /// Root-to-leaf descent inside node `[l, r)` following child weights.
    fn descend<R: Rng + ?Sized>(&self, l: usize, r: usize, exclude: Option<ColorId>, rng: &mut R) -> Option<u32> {
        let base = self.prefix_excl(l, exclude);
        let top = self.prefix_excl(r, exclude);
        let total = top - base;
        if total <= 0.0 {
            return None;
        }
        let target = base + rng.gen::<f64>() * total;
        let (mut lo, mut hi) = (l, r);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if target < self.prefix_excl(mid, exclude) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let usable = |p: usize| {
            let w = self.prefix[p + 1] - self.prefix[p];
            w > 0.0 && exclude.is_none_or(|c| self.color_weight(c, p, p + 1) < w)
        };
        if usable(lo) {
            return Some(self.ids[lo]);
        }
        // Rounding at a boundary landed on an unusable point; take the nearest usable one.
        (l..lo).rev().chain(lo + 1..r).find(|&p| usable(p)).map(|p| self.ids[p])
    }
}

impl Level {
    fn build(points: &ColoredPointSet, ids: Vec<u32>, axis: usize, dim: usize, color_aware: bool) -> Level {
        if axis + 1 == dim {
            return Level::Last(Box::new(LastLevel::build(points, ids, axis, color_aware)));
        }
        let mut ids = ids;
        ids.sort_by(|&a, &b| points.coord(a as usize, axis).total_cmp(&points.coord(b as usize, axis)).then(a.cmp(&b)));
        let keys: Vec<f64> = ids.iter().map(|&i| points.coord(i as usize, axis)).collect();
        let m = ids.len();
        let mut assoc: Vec<Option<Level>> = Vec::new();
        if m > 0 {
            assoc.resize_with(4 * m, || None);
            fn rec(
                points: &ColoredPointSet,
                ids: &[u32],
                node: usize,
                l: usize,
                r: usize,
                axis: usize,
                dim: usize,
                color_aware: bool,
                assoc: &mut Vec<Option<Level>>,
            ) {
                assoc[node] = Some(Level::build(points, ids[l..r].to_vec(), axis + 1, dim, color_aware));
                if r - l > 1 {
                    let mid = (l + r) / 2;
                    rec(points, ids, 2 * node, l, mid, axis, dim, color_aware, assoc);
                    rec(points, ids, 2 * node + 1, mid, r, axis, dim, color_aware, assoc);
                }
            }
            rec(points, &ids, 1, 0, m, axis, dim, color_aware, &mut assoc);
        }
        Level::Inner(Box::new(InnerLevel { keys, assoc }))
    }

    /// Calls `out` for every final-level piece covering the points in `rect`.
    /// With `split_last` the final-level ranges are split into tree nodes.
    fn visit<'a>(
        &'a self,
        rect: &QueryRect,
        axis: usize,
        split_last: bool,
        out: &mut impl FnMut(&'a LastLevel, usize, usize),
    ) {
        let (lo, hi) = (rect.lo()[axis], rect.hi()[axis]);
        match self {
            Level::Last(lv) => {
                let (a, b) = lv.span(lo, hi);
                if a < b {
                    if split_last {
                        lv.decompose(a, b, out);
                    } else {
                        out(lv, a, b);
                    }
                }
            }
            Level::Inner(inner) => {
                let a = inner.keys.partition_point(|&k| k < lo);
                let b = inner.keys.partition_point(|&k| k <= hi);
                if a >= b {
                    return;
                }
                fn rec<'a>(
                    inner: &'a InnerLevel,
                    node: usize,
                    l: usize,
                    r: usize,
                    a: usize,
                    b: usize,
                    rect: &QueryRect,
                    axis: usize,
                    split_last: bool,
                    out: &mut impl FnMut(&'a LastLevel, usize, usize),
                ) {
                    if b <= l || r <= a {
                        return;
                    }
                    if a <= l && r <= b {
                        if let Some(next) = &inner.assoc[node] {
                            next.visit(rect, axis + 1, split_last, out);
                        }
                        return;
                    }
                    let mid = (l + r) / 2;
                    rec(inner, 2 * node, l, mid, a, b, rect, axis, split_last, out);
                    rec(inner, 2 * node + 1, mid, r, a, b, rect, axis, split_last, out);
                }
                rec(inner, 1, 0, inner.keys.len(), a, b, rect, axis, split_last, out);
            }
        }
    }
}

/// A canonical node: a contiguous range of one final-level array.
#[derive(Clone, Copy, Debug)]
pub struct CanonicalNode<'a> {
    level: &'a LastLevel,
    lo: usize,
    hi: usize,
}

impl<'a> CanonicalNode<'a> {
    pub fn weight(&self) -> f64 {
        self.level.weight(self.lo, self.hi)
    }

    pub fn count(&self) -> usize {
        self.hi - self.lo
    }

    /// Input indices of the points stored under this node.
    pub fn point_ids(&self) -> &'a [u32] {
        &self.level.ids[self.lo..self.hi]
    }

    /// Weight of color `c` under this node. Needs a color-aware tree.
    pub fn color_weight(&self, c: ColorId) -> f64 {
        self.level.color_weight(c, self.lo, self.hi)
    }

    /// Picks a point under this node by root-to-leaf descent on child weights.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<u32> {
        self.level.descend(self.lo, self.hi, None, rng)
    }
}

/// Range tree over a fixed point set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RangeTree {
    dim: usize,
    len: usize,
    color_aware: bool,
    root: Option<Level>,
}

impl RangeTree {
    pub fn build(points: &ColoredPointSet) -> Self {
        Self::build_inner(points, false)
    }

    /// Tree that also answers per-node color weights.
    pub fn build_color_aware(points: &ColoredPointSet) -> Self {
        Self::build_inner(points, true)
    }

    fn build_inner(points: &ColoredPointSet, color_aware: bool) -> Self {
        let dim = points.dim();
        let root = if dim == 0 {
            None
        } else {
            Some(Level::build(points, (0..points.len() as u32).collect(), 0, dim, color_aware))
        };
        RangeTree { dim, len: points.len(), color_aware, root }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_color_aware(&self) -> bool {
        self.color_aware
    }

    fn check(&self, rect: &QueryRect) -> Result<()> {
        if rect.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rect.dim() });
        }
        Ok(())
    }

    fn for_each<'a>(&'a self, rect: &QueryRect, split_last: bool, mut out: impl FnMut(&'a LastLevel, usize, usize)) {
        if let Some(root) = &self.root {
            root.visit(rect, 0, split_last, &mut out);
        }
    }

    /// Canonical nodes whose disjoint union is exactly the points in `rect`.
    pub fn canonical_nodes(&self, rect: &QueryRect) -> Result<Vec<CanonicalNode<'_>>> {
        self.check(rect)?;
        let mut nodes = Vec::new();
        self.collect_nodes(rect, &mut nodes);
        Ok(nodes)
    }

    fn collect_nodes<'a>(&'a self, rect: &QueryRect, nodes: &mut Vec<CanonicalNode<'a>>) {
        self.for_each(rect, true, |level, lo, hi| nodes.push(CanonicalNode { level, lo, hi }));
    }

    /// Total weight of the points in `rect`.
    pub fn range_weight(&self, rect: &QueryRect) -> Result<f64> {
        self.check(rect)?;
        let mut w = 0.0;
        self.for_each(rect, false, |lv, a, b| w += lv.weight(a, b));
        Ok(w)
    }

    /// Number of points in `rect`.
    pub fn range_count(&self, rect: &QueryRect) -> Result<usize> {
        self.check(rect)?;
        let mut c = 0;
        self.for_each(rect, false, |_, a, b| c += b - a);
        Ok(c)
    }

    /// Input indices of the points in `rect`.
    pub fn report(&self, rect: &QueryRect) -> Result<Vec<u32>> {
        self.check(rect)?;
        let mut out = Vec::new();
        self.for_each(rect, false, |lv, a, b| out.extend_from_slice(&lv.ids[a..b]));
        Ok(out)
    }

    /// Weight of color `c` in `rect`. Needs a color-aware tree.
    pub fn range_color_weight(&self, rect: &QueryRect, c: ColorId) -> Result<f64> {
        self.require_colors()?;
        self.check(rect)?;
        let mut w = 0.0;
        self.for_each(rect, false, |lv, a, b| w += lv.color_weight(c, a, b));
        Ok(w)
    }

    fn require_colors(&self) -> Result<()> {
        if self.color_aware {
            Ok(())
        } else {
            Err(Error::InvalidParameter("tree was built without color information".into()))
        }
    }

    /// Prepares repeated weighted sampling inside `rect`.
    pub fn sampler(&self, rect: &QueryRect) -> Result<RangeSampler<'_>> {
        let nodes = self.canonical_nodes(rect)?;
        Ok(RangeSampler::new(nodes, None))
    }

    /// Prepares repeated sampling inside `rect` that never returns color `c`.
    pub fn sampler_excluding(&self, rect: &QueryRect, c: ColorId) -> Result<RangeSampler<'_>> {
        self.require_colors()?;
        let nodes = self.canonical_nodes(rect)?;
        Ok(RangeSampler::new(nodes, Some(c)))
    }

    /// One weighted sample from `rect`, or `None` when its weight is zero.
    pub fn sample<R: Rng + ?Sized>(&self, rect: &QueryRect, rng: &mut R) -> Result<Option<u32>> {
        Ok(self.sampler(rect)?.sample(rng))
    }

    /// One weighted sample from `rect` restricted to colors other than `c`.
    pub fn sample_excluding<R: Rng + ?Sized>(&self, rect: &QueryRect, c: ColorId, rng: &mut R) -> Result<Option<u32>> {
        Ok(self.sampler_excluding(rect, c)?.sample(rng))
    }
}

/// Weighted sampler over a fixed set of canonical nodes.
#[derive(Clone, Debug)]
pub struct RangeSampler<'a> {
    nodes: Vec<CanonicalNode<'a>>,
    cumulative: Vec<f64>,
    total: f64,
    exclude: Option<ColorId>,
}

impl<'a> RangeSampler<'a> {
    fn new(nodes: Vec<CanonicalNode<'a>>, exclude: Option<ColorId>) -> Self {
        let mut cumulative = Vec::with_capacity(nodes.len());
        let mut total = 0.0;
        for n in &nodes {
            let w = match exclude {
                None => n.weight(),
                Some(c) => (n.weight() - n.color_weight(c)).max(0.0),
            };
            total += w;
            cumulative.push(total);
        }
        RangeSampler { nodes, cumulative, total, exclude }
    }

    /// Total weight available to this sampler.
    pub fn total_weight(&self) -> f64 {
        self.total
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<u32> {
        if self.total <= 0.0 {
            return None;
        }
        let u = rng.gen::<f64>() * self.total;
        let mut i = self.cumulative.partition_point(|&c| c <= u).min(self.nodes.len() - 1);
        let weight_of = |i: usize| self.cumulative[i] - if i == 0 { 0.0 } else { self.cumulative[i - 1] };
        while weight_of(i) <= 0.0 && i > 0 {
            i -= 1;
        }
        let n = &self.nodes[i];
        n.level.descend(n.lo, n.hi, self.exclude, rng)
    }
}

/// One range tree per color, answering the weight of a color inside a box.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColorCounter {
    trees: Vec<RangeTree>,
}

impl ColorCounter {
    pub fn build(points: &ColoredPointSet) -> Self {
        let m = points.color_bound();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); m];
        for i in 0..points.len() {
            members[points.color(i) as usize].push(i);
        }
        let trees = members
            .into_iter()
            .map(|ids| {
                let mut sub = ColoredPointSet::new(points.dim());
                for &i in &ids {
                    sub.push_parts(points.coords(i), points.color(i), points.weight(i)).expect("valid point");
                }
                RangeTree::build(&sub)
            })
            .collect();
        ColorCounter { trees }
    }

    pub fn num_colors(&self) -> usize {
        self.trees.len()
    }

    /// Weight of color `c` inside `rect`.
    pub fn weight(&self, c: ColorId, rect: &QueryRect) -> Result<f64> {
        match self.trees.get(c as usize) {
            Some(t) => t.range_weight(rect),
            None => Ok(0.0),
        }
    }
}

/// Histogram of the points in `rect` using a range tree for reporting.
pub fn histogram_via_tree(tree: &RangeTree, points: &ColoredPointSet, rect: &QueryRect) -> Result<ColorHistogram> {
    let mut h = ColorHistogram::new();
    tree.check(rect)?;
    tree.for_each(rect, false, |lv, a, b| {
        for &i in &lv.ids[a..b] {
            h.add(points.color(i as usize), points.weight(i as usize));
        }
    });
    Ok(h)
}
