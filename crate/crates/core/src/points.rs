//! Colored, weighted points and closed query rectangles.

use serde::{Deserialize, Serialize};

use crate::entropy::{ColorHistogram, ColorId};
use crate::error::{Error, Result};

/// An owned input point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub coords: Vec<f64>,
    pub color: ColorId,
    pub weight: f64,
}

impl Point {
    pub fn new(coords: Vec<f64>, color: ColorId) -> Self {
        Point { coords, color, weight: 1.0 }
    }

    pub fn weighted(coords: Vec<f64>, color: ColorId, weight: f64) -> Self {
        Point { coords, color, weight }
    }
}

/// A closed axis-aligned box. Bounds may be infinite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryRect {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl QueryRect {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        if lo.iter().chain(hi.iter()).any(|v| v.is_nan()) {
            return Err(Error::InvalidParameter("rectangle bound is NaN".into()));
        }
        Ok(QueryRect { lo, hi })
    }

    /// One-dimensional interval [a, b].
    pub fn interval(a: f64, b: f64) -> Self {
        QueryRect { lo: vec![a], hi: vec![b] }
    }

    /// The whole space in `dim` dimensions.
    pub fn everything(dim: usize) -> Self {
        QueryRect { lo: vec![f64::NEG_INFINITY; dim], hi: vec![f64::INFINITY; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, coords: &[f64]) -> bool {
        coords.iter().zip(self.lo.iter().zip(self.hi.iter())).all(|(&x, (&l, &h))| l <= x && x <= h)
    }

    /// True when the box contains no point of the real space.
    pub fn is_degenerate(&self) -> bool {
        self.lo.iter().zip(self.hi.iter()).any(|(l, h)| l > h)
    }
}

/// A borrowed view of one stored point.
#[derive(Clone, Copy, Debug)]
pub struct PointRef<'a> {
    pub coords: &'a [f64],
    pub color: ColorId,
    pub weight: f64,
}

/// A set of points in a fixed dimension, stored column by column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoredPointSet {
    dim: usize,
    coords: Vec<f64>,
    colors: Vec<ColorId>,
    weights: Vec<f64>,
    labels: Vec<String>,
}

impl ColoredPointSet {
    pub fn new(dim: usize) -> Self {
        ColoredPointSet { dim, coords: Vec::new(), colors: Vec::new(), weights: Vec::new(), labels: Vec::new() }
    }

    pub fn from_points(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut s = Self::new(dim);
        for p in points {
            s.push(p)?;
        }
        Ok(s)
    }

    /// Unit-weight points from (coordinates, color) pairs.
    pub fn from_coords(dim: usize, items: impl IntoIterator<Item = (Vec<f64>, ColorId)>) -> Result<Self> {
        Self::from_points(dim, items.into_iter().map(|(c, col)| Point::new(c, col)))
    }

    /// One-dimensional unit-weight points.
    pub fn from_line(items: impl IntoIterator<Item = (f64, ColorId)>) -> Self {
        let mut s = Self::new(1);
        for (x, c) in items {
            s.push(Point::new(vec![x], c)).expect("finite coordinate");
        }
        s
    }

    pub fn push(&mut self, p: Point) -> Result<()> {
        self.push_parts(&p.coords, p.color, p.weight)
    }

    pub fn push_parts(&mut self, coords: &[f64], color: ColorId, weight: f64) -> Result<()> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: coords.len() });
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("coordinate is not finite".into()));
        }
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidWeight(weight));
        }
        self.coords.extend_from_slice(coords);
        self.colors.push(color);
        self.weights.push(weight);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn coords(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coord(&self, i: usize, k: usize) -> f64 {
        self.coords[i * self.dim + k]
    }

    pub fn color(&self, i: usize) -> ColorId {
        self.colors[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn point(&self, i: usize) -> PointRef<'_> {
        PointRef { coords: self.coords(i), color: self.colors[i], weight: self.weights[i] }
    }

    pub fn iter(&self) -> impl Iterator<Item = PointRef<'_>> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// One more than the largest color id in use.
    pub fn color_bound(&self) -> usize {
        self.colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_unit_weight(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// Human readable color names, indexed by color id. May be empty.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn set_labels(&mut self, labels: Vec<String>) {
        self.labels = labels;
    }

    pub fn label(&self, c: ColorId) -> Option<&str> {
        self.labels.get(c as usize).map(|s| s.as_str())
    }

    /// Per-color weights of the points inside `rect`, by a full scan.
    pub fn histogram_in(&self, rect: &QueryRect) -> ColorHistogram {
        let mut h = ColorHistogram::new();
        for i in 0..self.len() {
            if rect.contains(self.coords(i)) {
                h.add(self.colors[i], self.weights[i]);
            }
        }
        h
    }

    /// Projection onto one axis.
    pub fn project(&self, axis: usize) -> ColoredPointSet {
        let mut s = ColoredPointSet::new(1);
        for i in 0..self.len() {
            s.coords.push(self.coord(i, axis));
            s.colors.push(self.colors[i]);
            s.weights.push(self.weights[i]);
        }
        s.labels = self.labels.clone();
        s
    }

    /// Indices sorted by coordinate `k`, ties by input index.
    pub fn order_by_axis(&self, k: usize) -> Vec<u32> {
        let mut idx: Vec<u32> = (0..self.len() as u32).collect();
        idx.sort_by(|&a, &b| {
            self.coord(a as usize, k).total_cmp(&self.coord(b as usize, k)).then(a.cmp(&b))
        });
        idx
    }

    pub fn check_dim(&self, rect: &QueryRect) -> Result<()> {
        if rect.dim() != self.dim {
            Err(Error::DimensionMismatch { expected: self.dim, found: rect.dim() })
        } else {
            Ok(())
        }
    }
}
