//! Brute-force reference answers, small demo data, random data generators and
//! the reduction gadgets from boolean matrix multiplication and set intersection.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{self, ColorHistogram, ColorId, EntropyKind, EntropySummary};
use crate::error::{Error, Result};
use crate::partition::{Scorer, SequenceEntropy};
use crate::points::{ColoredPointSet, Point, QueryRect};

/// Entropy of the points in `rect` by a full scan.
pub fn oracle_entropy(points: &ColoredPointSet, rect: &QueryRect, kind: EntropyKind) -> Result<EntropySummary> {
    points.check_dim(rect)?;
    Ok(entropy::entropy(&points.histogram_in(rect), kind))
}

/// Scan-based baseline index: stores the points, answers by brute force.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleIndex {
    points: ColoredPointSet,
}

impl OracleIndex {
    pub fn build(points: &ColoredPointSet) -> Self {
        OracleIndex { points: points.clone() }
    }

    pub fn points(&self) -> &ColoredPointSet {
        &self.points
    }

    pub fn histogram(&self, rect: &QueryRect) -> Result<ColorHistogram> {
        self.points.check_dim(rect)?;
        Ok(self.points.histogram_in(rect))
    }

    pub fn query(&self, rect: &QueryRect, kind: EntropyKind) -> Result<EntropySummary> {
        oracle_entropy(&self.points, rect, kind)
    }
}

/// Twenty points in the plane, four colors; `demo_rect` holds nine of them
/// (two red, three green, four blue) and every other point lies outside the
/// slab 2 <= x <= 6 as well.
pub fn demo_points() -> ColoredPointSet {
    const RED: ColorId = 0;
    const GREEN: ColorId = 1;
    const BLUE: ColorId = 2;
    const PURPLE: ColorId = 3;
    let raw: [(f64, f64, ColorId); 20] = [
        (2.5, 3.0, RED),
        (5.5, 4.5, RED),
        (3.0, 5.0, GREEN),
        (4.0, 2.5, GREEN),
        (5.0, 5.5, GREEN),
        (2.2, 2.2, BLUE),
        (3.5, 3.5, BLUE),
        (4.5, 4.0, BLUE),
        (5.8, 3.2, BLUE),
        (1.0, 1.0, RED),
        (7.0, 2.0, RED),
        (0.5, 4.0, GREEN),
        (8.0, 7.5, GREEN),
        (1.5, 7.0, BLUE),
        (6.5, 6.5, BLUE),
        (0.8, 5.5, PURPLE),
        (1.2, 2.8, PURPLE),
        (6.8, 4.4, PURPLE),
        (7.5, 1.0, PURPLE),
        (9.0, 3.0, PURPLE),
    ];
    let mut s = ColoredPointSet::from_coords(2, raw.iter().map(|&(x, y, c)| (vec![x, y], c))).expect("valid demo data");
    s.set_labels(vec!["red".into(), "green".into(), "blue".into(), "purple".into()]);
    s
}

/// The query box of the demo data.
pub fn demo_rect() -> QueryRect {
    QueryRect::new(vec![2.0, 2.0], vec![6.0, 6.0]).expect("valid rectangle")
}

/// How colors are drawn by [`random_points`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ColorLaw {
    Uniform,
    /// Probability of color `i` proportional to `1 / (i + 1)^s`.
    Zipf(f64),
}

/// `n` unit-weight points with coordinates uniform in `[0, 1)^dim`.
pub fn random_points<R: Rng + ?Sized>(n: usize, dim: usize, colors: usize, law: ColorLaw, rng: &mut R) -> ColoredPointSet {
    let colors = colors.max(1);
    let weights: Vec<f64> = (0..colors)
        .map(|i| match law {
            ColorLaw::Uniform => 1.0,
            ColorLaw::Zipf(s) => 1.0 / ((i + 1) as f64).powf(s),
        })
        .collect();
    let pick = WeightedIndex::new(&weights).expect("positive weights");
    let mut s = ColoredPointSet::new(dim);
    for _ in 0..n {
        let coords: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
        s.push(Point::new(coords, pick.sample(rng) as ColorId)).expect("valid point");
    }
    s
}

/// Like [`random_points`] with integer coordinates in `[0, side)`, so ties occur.
pub fn random_grid_points<R: Rng + ?Sized>(n: usize, dim: usize, side: u32, colors: usize, rng: &mut R) -> ColoredPointSet {
    let mut s = ColoredPointSet::new(dim);
    for _ in 0..n {
        let coords: Vec<f64> = (0..dim).map(|_| rng.gen_range(0..side.max(1)) as f64).collect();
        s.push(Point::new(coords, rng.gen_range(0..colors.max(1)) as ColorId)).expect("valid point");
    }
    s
}

/// A random box inside `[0, 1)^dim` (or `[0, side)` scaled), bounds uniform.
pub fn random_rect<R: Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> QueryRect {
    let mut lo = Vec::with_capacity(dim);
    let mut hi = Vec::with_capacity(dim);
    for _ in 0..dim {
        let a = rng.gen::<f64>() * scale;
        let b = rng.gen::<f64>() * scale;
        lo.push(a.min(b));
        hi.push(a.max(b));
    }
    QueryRect::new(lo, hi).expect("valid rectangle")
}

/// Points on a line built from two boolean matrices so that entry (i, j) of
/// their boolean product can be read off the entropy of one interval.
#[derive(Clone, Debug)]
pub struct MatrixGadget {
    pub side: usize,
    pub points: ColoredPointSet,
    a: Vec<Vec<bool>>,
    b: Vec<Vec<bool>>,
}

impl MatrixGadget {
    /// `a` and `b` are square with the same side `s`; the result has `2 s^2` points and `s` colors.
    pub fn new(a: &[Vec<bool>], b: &[Vec<bool>]) -> Self {
        let s = a.len();
        assert!(a.iter().all(|r| r.len() == s) && b.len() == s && b.iter().all(|r| r.len() == s));
        let mut colors: Vec<ColorId> = Vec::with_capacity(2 * s * s);
        for row in a {
            colors.extend((0..s).filter(|&c| !row[c]).map(|c| c as ColorId));
            colors.extend((0..s).filter(|&c| row[c]).map(|c| c as ColorId));
        }
        for j in 0..s {
            colors.extend((0..s).filter(|&r| b[r][j]).map(|r| r as ColorId));
            colors.extend((0..s).filter(|&r| !b[r][j]).map(|r| r as ColorId));
        }
        let points = ColoredPointSet::from_line(colors.iter().enumerate().map(|(p, &c)| ((p + 1) as f64, c)));
        MatrixGadget { side: s, points, a: a.to_vec(), b: b.to_vec() }
    }

    fn zeros_in_row(&self, i: usize) -> usize {
        self.a[i].iter().filter(|&&v| !v).count()
    }

    fn ones_in_col(&self, j: usize) -> usize {
        (0..self.side).filter(|&r| self.b[r][j]).count()
    }

    /// 1-based position of the first point of the interval for entry (i, j) (0-based indices).
    fn first_pos(&self, i: usize) -> usize {
        i * self.side + self.zeros_in_row(i) + 1
    }

    fn last_pos(&self, j: usize) -> usize {
        self.side * self.side + j * self.side + self.ones_in_col(j)
    }

    /// The query interval whose entropy reveals entry (i, j).
    pub fn interval(&self, i: usize, j: usize) -> QueryRect {
        QueryRect::interval(self.first_pos(i) as f64, self.last_pos(j) as f64)
    }

    /// Parts of the interval in block `A_i` and block `B_j`, and the number of whole blocks between.
    fn shape(&self, i: usize, j: usize) -> (usize, usize, usize) {
        let p1 = self.side - self.zeros_in_row(i);
        let p2 = self.ones_in_col(j);
        let t = (self.side - 1 - i) + j;
        (p1, p2, t)
    }

    /// Shannon entropy the interval would have if the product entry were 0.
    pub fn shannon_if_zero(&self, i: usize, j: usize) -> f64 {
        let (p1, p2, t) = self.shape(i, j);
        let s = self.side;
        let n = (t * s + p1 + p2) as f64;
        let term = |cnt: f64, k: usize| {
            if k == 0 || cnt == 0.0 {
                0.0
            } else {
                cnt * (k as f64 / n) * (n / k as f64).log2()
            }
        };
        // When both partial blocks overlap the second count is negative; the
        // value is then only a comparison target.
        term((p1 + p2) as f64, t + 1) + term(s as f64 - (p1 + p2) as f64, t)
    }

    /// Rényi entropy the interval would have if the product entry were 0.
    pub fn renyi_if_zero(&self, i: usize, j: usize, alpha: f64) -> f64 {
        let (p1, p2, t) = self.shape(i, j);
        let s = self.side;
        let n = (t * s + p1 + p2) as f64;
        if n == 0.0 {
            return 0.0;
        }
        let sum = (p1 + p2) as f64 * ((t + 1) as f64 / n).powf(alpha)
            + (s as f64 - (p1 + p2) as f64) * (t as f64 / n).powf(alpha);
        (1.0 / sum).log2() / (alpha - 1.0)
    }

    /// The boolean product entry computed directly.
    pub fn product(&self, i: usize, j: usize) -> bool {
        (0..self.side).any(|k| self.a[i][k] && self.b[k][j])
    }
}

/// Points on two parallel lines built from a set family so that whether two
/// sets intersect can be read off the entropy of one rectangle.
#[derive(Clone, Debug)]
pub struct SetGadget {
    pub points: ColoredPointSet,
    prefix: Vec<usize>,
    total: usize,
}

impl SetGadget {
    /// Sets hold arbitrary element ids; colors are the distinct elements.
    pub fn new(sets: &[Vec<u32>]) -> Self {
        let mut universe: Vec<u32> = sets.iter().flatten().copied().collect();
        universe.sort_unstable();
        universe.dedup();
        let total: usize = sets.iter().map(|s| s.len()).sum();
        let n = total as f64;
        let mut prefix = vec![0usize];
        let mut points = ColoredPointSet::new(2);
        for set in sets {
            let base = *prefix.last().unwrap();
            for (k, e) in set.iter().enumerate() {
                let color = universe.binary_search(e).unwrap() as ColorId;
                let x = (k + 1 + base) as f64;
                points.push(Point::new(vec![-x, -x + n], color)).unwrap();
                points.push(Point::new(vec![x, x - n], color)).unwrap();
            }
            prefix.push(base + set.len());
        }
        SetGadget { points, prefix, total }
    }

    /// Rectangle holding exactly the copy of set `i` on one line and of set `j` on the other (0-based).
    pub fn rect(&self, i: usize, j: usize) -> QueryRect {
        let n = self.total as f64;
        let (ni, ni1) = (self.prefix[i + 1] as f64, self.prefix[i] as f64);
        let (nj, nj1) = (self.prefix[j + 1] as f64, self.prefix[j] as f64);
        QueryRect::new(vec![-ni, nj1 + 1.0 - n], vec![nj, n - ni1 - 1.0]).expect("valid rectangle")
    }

    /// Number of points the rectangle for (i, j) should hold.
    pub fn expected_count(&self, i: usize, j: usize) -> usize {
        (self.prefix[i + 1] - self.prefix[i]) + (self.prefix[j + 1] - self.prefix[j])
    }
}


/// Best `k`-bucket partition of a sequence by trying every set of cuts.
/// Scores are expected entropies; `sum` minimizes their sum, otherwise their
/// maximum. Returns the value and the cuts `0 = c_0 < ... < c_k = n`.
pub fn exhaustive_partition<S: SequenceEntropy + ?Sized>(seq: &S, k: usize, sum: bool) -> Result<(f64, Vec<usize>)> {
    let n = seq.len();
    if k == 0 || k > n {
        return Err(Error::TooManyBuckets { k, n });
    }
    let sc = Scorer::new(seq)?;
    let mut table = vec![vec![0.0; n + 1]; n + 1];
    for a in 0..n {
        for b in a + 1..=n {
            table[a][b] = sc.score(a, b)?;
        }
    }
    let mut best = (f64::INFINITY, Vec::new());
    let mut cuts = vec![0];
    enumerate_cuts(n, k, &mut cuts, &mut |c| {
        let scores = c.windows(2).map(|w| table[w[0]][w[1]]);
        let v = if sum { scores.sum() } else { scores.fold(0.0, f64::max) };
        if v < best.0 {
            best = (v, c.to_vec());
        }
    });
    Ok(best)
}

fn enumerate_cuts(n: usize, k: usize, cuts: &mut Vec<usize>, out: &mut impl FnMut(&[usize])) {
    let last = *cuts.last().unwrap_or(&0);
    if cuts.len() == k {
        cuts.push(n);
        out(cuts);
        cuts.pop();
        return;
    }
    // leave room for the remaining buckets
    let left = k - cuts.len();
    for c in last + 1..=n - left {
        cuts.push(c);
        enumerate_cuts(n, k, cuts, out);
        cuts.pop();
    }
}
