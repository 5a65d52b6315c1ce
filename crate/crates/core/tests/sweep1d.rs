use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use range_entropy::entropy::{renyi_entropy, shannon_entropy, ColorHistogram};
use range_entropy::sweep1d::{mapped_points, Sweep1DIndex, ZERO_LEVEL};
use range_entropy::{ColorId, ColoredPointSet, Error, Point, QueryRect};

fn line(colors: &[ColorId]) -> ColoredPointSet {
    ColoredPointSet::from_line(colors.iter().enumerate().map(|(i, &c)| (i as f64, c)))
}

fn random_colors(n: usize, k: u32, seed: u64) -> Vec<ColorId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // a skewed law so that both heavy and rare colors show up
    (0..n).map(|_| { let u: f64 = rng.gen(); ((u * u * k as f64) as u32).min(k - 1) }).collect()
}

fn hist_of(colors: &[ColorId], a: usize, b: usize, keep: Option<&[ColorId]>) -> ColorHistogram {
    ColorHistogram::from_colors(colors[a..b].iter().copied().filter(|c| keep.map_or(true, |k| k.contains(c))))
}

#[test]
fn mapped_box_holds_each_color_once() {
    let colors = random_colors(120, 9, 3);
    let pts = line(&colors);
    let mapped = mapped_points(&pts).unwrap();
    for a in 0..colors.len() {
        for b in a..colors.len() {
            let mut seen: Vec<ColorId> = mapped
                .iter()
                .filter(|m| (m.pos as usize) >= a && (m.pos as usize) <= b && m.prev.map_or(true, |p| (p as usize) < a))
                .map(|m| m.color)
                .collect();
            seen.sort_unstable();
            let mut want: Vec<ColorId> = colors[a..=b].to_vec();
            want.sort_unstable();
            want.dedup();
            assert_eq!(seen, want);
        }
    }
}

#[test]
fn every_interval_is_sandwiched_on_small_inputs() {
    for (seed, k) in [(1u64, 2u32), (2, 5), (3, 30)] {
        let colors = random_colors(90, k, seed);
        let pts = line(&colors);
        let sh = Sweep1DIndex::build_shannon(&pts, 0.2).unwrap();
        let re = Sweep1DIndex::build_renyi(&pts, 0.2, 2.5).unwrap();
        for a in 0..colors.len() {
            for b in a..colors.len() {
                let rect = QueryRect::interval(a as f64, b as f64);
                let h = hist_of(&colors, a, b + 1, None);
                let truth = shannon_entropy(&h).value;
                let got = sh.query(&rect).unwrap();
                assert_eq!(got.count, (b + 1 - a) as f64);
                assert!(got.value >= truth - 1e-9 && got.value <= sh.upper_bound(truth) + 1e-9, "{a}..{b}: {} vs {truth}", got.value);
                let truth = renyi_entropy(&h, 2.5).unwrap().value;
                let got = re.query(&rect).unwrap().value;
                assert!(got >= truth - 1e-9 && got <= re.upper_bound(truth) + 1e-9, "{a}..{b}: {got} vs {truth}");
            }
        }
    }
}

#[test]
fn single_color_and_empty_ranges_are_zero() {
    let pts = line(&[4, 4, 4, 1, 4]);
    let sh = Sweep1DIndex::build_shannon(&pts, 0.1).unwrap();
    assert_eq!(sh.query(&QueryRect::interval(0.0, 2.0)).unwrap().value, 0.0);
    assert_eq!(sh.query(&QueryRect::interval(3.0, 3.0)).unwrap().value, 0.0);
    let e = sh.query(&QueryRect::interval(10.0, 20.0)).unwrap();
    assert!(e.is_empty() && e.value == 0.0);
    let re = Sweep1DIndex::build_renyi(&pts, 0.1, 2.0).unwrap();
    let h = re.query(&QueryRect::interval(0.0, 2.0)).unwrap().value;
    assert!(h >= 0.0 && h <= re.upper_bound(0.0));
}

#[test]
fn weighted_and_planar_inputs_are_rejected() {
    let pts = ColoredPointSet::from_points(1, [Point::weighted(vec![0.0], 0, 2.0), Point::new(vec![1.0], 1)]).unwrap();
    assert!(matches!(Sweep1DIndex::build_shannon(&pts, 0.1), Err(Error::WeightedInputUnsupported)));
    let plane = ColoredPointSet::from_coords(2, [(vec![0.0, 0.0], 0)]).unwrap();
    assert!(matches!(Sweep1DIndex::build_renyi(&plane, 0.1, 2.0), Err(Error::DimensionMismatch { .. })));
    assert!(Sweep1DIndex::build_shannon(&line(&[0, 1]), 0.0).is_err());
    assert!(Sweep1DIndex::build_renyi(&line(&[0, 1]), 0.1, 1.0).is_err());
}

#[test]
fn node_estimates_sandwich_their_part() {
    let colors = random_colors(400, 12, 8);
    let pts = line(&colors);
    let sh = Sweep1DIndex::build_shannon(&pts, 0.3).unwrap();
    let re = Sweep1DIndex::build_renyi(&pts, 0.3, 3.0).unwrap();
    let e = sh.epsilon_prime();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let a = rng.gen_range(0..colors.len());
        let b = rng.gen_range(a..colors.len());
        let rect = QueryRect::interval(a as f64, b as f64);
        let nodes = sh.node_estimates(&rect).unwrap();
        let mut seen: Vec<ColorId> = nodes.iter().flat_map(|v| v.colors.clone()).collect();
        let total = seen.len();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), total, "node color sets overlap");
        assert_eq!(seen, hist_of(&colors, a, b + 1, None).iter().map(|(c, _)| c).collect::<Vec<_>>());
        for v in &nodes {
            let part = hist_of(&colors, a, b + 1, Some(&v.colors));
            let truth = shannon_entropy(&part).value;
            assert!(v.start >= a);
            assert!(v.count_low < part.total() && part.total() <= v.count_hat);
            assert!(v.value >= truth - 1e-9 && v.value <= (1.0 + e).powi(2) * truth + 1e-9);
            assert_eq!(v.mass_level == ZERO_LEVEL, part.num_colors() == 1);
        }
        for v in re.node_estimates(&rect).unwrap() {
            let part = hist_of(&colors, a, b + 1, Some(&v.colors));
            let g: f64 = part.weights().map(|w| w.powf(3.0)).sum();
            assert!(v.value <= g * (1.0 + 1e-9) && g <= v.value * (1.0 + re.epsilon_prime()).powi(2));
        }
    }
}

#[test]
fn threshold_arrays_match_direct_prefixes() {
    let colors = random_colors(300, 7, 21);
    let n = colors.len();
    let pts = line(&colors);
    for idx in [Sweep1DIndex::build_shannon(&pts, 0.25).unwrap(), Sweep1DIndex::build_renyi(&pts, 0.25, 2.0).unwrap()] {
        let (count_cap, mass_cap) = idx.array_caps();
        let renyi = idx.kind().alpha().is_some();
        let arrays = idx.threshold_arrays();
        assert_eq!(arrays.len(), idx.num_nodes());
        for t in arrays {
            assert!(t.count.len() <= count_cap && t.mass.len() <= mass_cap);
            assert!(t.count.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
            assert!(t.mass.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
            assert_eq!(t.count.last().unwrap().1, n - 1);
            let mass_of = |end: usize| {
                let h = hist_of(&colors, t.start, end + 1, Some(&t.colors));
                if renyi {
                    h.weights().map(|w| w * w).sum::<f64>()
                } else {
                    h.total() * shannon_entropy(&h).value
                }
            };
            for &(i, last) in &t.count {
                let cap = idx.level_value(i);
                assert!(hist_of(&colors, t.start, last + 1, Some(&t.colors)).total() <= cap);
                if last + 1 < n {
                    assert!(hist_of(&colors, t.start, last + 2, Some(&t.colors)).total() > cap);
                }
            }
            for &(i, last) in &t.mass {
                let cap = idx.level_value(i);
                assert!(mass_of(last) <= cap * (1.0 + 1e-9));
                if last + 1 < n {
                    assert!(mass_of(last + 1) > cap * (1.0 - 1e-9));
                }
            }
        }
    }
}

#[test]
fn coarse_thresholds_dominate_fine_ones() {
    let colors = random_colors(250, 10, 4);
    let pts = line(&colors);
    let coarse = Sweep1DIndex::build_shannon(&pts, 0.5).unwrap();
    let fine = Sweep1DIndex::build_shannon(&pts, 0.05).unwrap();
    let (ca, fa) = (coarse.threshold_arrays(), fine.threshold_arrays());
    assert_eq!(ca.len(), fa.len());
    for (c, f) in ca.iter().zip(&fa) {
        assert_eq!((c.start, &c.colors), (f.start, &f.colors));
        for &(i, last) in &c.count {
            let cap = coarse.level_value(i);
            // the fine entry with the largest threshold not above `cap`
            if let Some(&(_, fl)) = f.count.iter().filter(|e| fine.level_value(e.0) <= cap).last() {
                assert!(fl <= last);
            }
        }
    }
}

#[test]
fn merge_depth_is_logarithmic_in_node_count() {
    let colors = random_colors(1000, 50, 6);
    let pts = line(&colors);
    let sh = Sweep1DIndex::build_shannon(&pts, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let lg = (colors.len() as f64).log2().ceil() as usize;
    for _ in 0..200 {
        let a = rng.gen_range(0..colors.len());
        let b = rng.gen_range(a..colors.len());
        let (_, st) = sh.query_with_stats(&QueryRect::interval(a as f64, b as f64)).unwrap();
        assert!(st.nodes >= 1 && st.nodes <= 2 * lg * lg);
        assert_eq!(st.merge_depth, (st.nodes as f64).log2().ceil() as usize);
    }
}

#[test]
fn index_round_trips_through_serde() {
    let pts = line(&random_colors(200, 6, 9));
    let idx = Sweep1DIndex::build_renyi(&pts, 0.2, 2.0).unwrap();
    let bytes = serde_json::to_vec(&idx).unwrap();
    let back: Sweep1DIndex = serde_json::from_slice(&bytes).unwrap();
    let r = QueryRect::interval(13.0, 170.0);
    assert_eq!(idx.query(&r).unwrap(), back.query(&r).unwrap());
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 { x * x.log2() } else { 0.0 }
}

/// `F = N H` from counts.
fn mass_f(counts: &[u32]) -> f64 {
    let n: f64 = counts.iter().map(|&c| c as f64).sum();
    xlogx(n) - counts.iter().map(|&c| xlogx(c as f64)).sum::<f64>()
}

fn partitions(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(cur.clone());
        return;
    }
    for p in (1..=n.min(max)).rev() {
        cur.push(p);
        partitions(n - p, p, cur, out);
        cur.pop();
    }
}

#[test]
fn smallest_positive_mass_is_two() {
    for n in 2..=12 {
        let mut all = Vec::new();
        partitions(n, n, &mut Vec::new(), &mut all);
        let min = all.iter().filter(|p| p.len() >= 2).map(|p| mass_f(p)).fold(f64::INFINITY, f64::min);
        assert!(min >= 2.0 - 1e-12, "n = {n}: {min}");
    }
    assert!((mass_f(&[1, 1]) - 2.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn masses_grow_under_insertion(counts in prop::collection::vec(1u32..30, 1..8), pick in 0usize..9, alpha in 1.1f64..5.0) {
        let mut more = counts.clone();
        if pick < counts.len() { more[pick] += 1 } else { more.push(1) }
        prop_assert!(mass_f(&more) >= mass_f(&counts) - 1e-9);
        let g = |c: &[u32]| c.iter().map(|&x| (x as f64).powf(alpha)).sum::<f64>();
        prop_assert!(g(&more) >= g(&counts));
    }

    #[test]
    fn random_queries_stay_in_bounds(seed in 0u64..1000, eps in 0.05f64..0.9) {
        let colors = random_colors(150, 1 + (seed % 20) as u32, seed);
        let pts = line(&colors);
        let sh = Sweep1DIndex::build_shannon(&pts, eps).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let a = rng.gen_range(0..colors.len());
            let b = rng.gen_range(a..colors.len());
            let truth = shannon_entropy(&hist_of(&colors, a, b + 1, None)).value;
            let got = sh.query(&QueryRect::interval(a as f64, b as f64)).unwrap().value;
            prop_assert!(got >= truth - 1e-9 && got <= sh.upper_bound(truth) + 1e-9);
        }
    }
}

#[test]
fn distinct_and_repeated_extremes() {
    let distinct: Vec<ColorId> = (0..50).collect();
    let idx = Sweep1DIndex::build_shannon(&line(&distinct), 0.2).unwrap();
    for t in idx.threshold_arrays() {
        for &(i, last) in &t.count {
            // all colors distinct: the count on [start, x] is the number of node
            // colors starting at or before x
            let c = t.colors.iter().filter(|&&c| (c as usize) >= t.start && (c as usize) <= last).count() as f64;
            assert!(c <= idx.level_value(i));
        }
        assert!(t.mass.iter().all(|&(i, _)| i == ZERO_LEVEL || idx.level_value(i) >= 2.0));
    }
    // one color: every first-level node keeps only its first point
    let same = vec![3; 64];
    let idx = Sweep1DIndex::build_shannon(&line(&same), 0.2).unwrap();
    let arrays = idx.threshold_arrays();
    assert_eq!(arrays.len(), 127);
    assert!(arrays.iter().all(|t| t.colors == [3] && t.mass == [(ZERO_LEVEL, 63)]));
}
