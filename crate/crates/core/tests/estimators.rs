use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use range_entropy::approx_renyi::*;
use range_entropy::approx_shannon::*;
use range_entropy::oracle::{demo_points, demo_rect, oracle_entropy};
use range_entropy::{ColorHistogram, ColoredPointSet, EntropyKind, Error, QueryRect};

/// Points on a line at 0..n, with `counts[c]` points of color c in random order.
fn line_from_counts(counts: &[usize], seed: u64) -> ColoredPointSet {
    let mut colors: Vec<u32> = counts.iter().enumerate().flat_map(|(c, &k)| std::iter::repeat(c as u32).take(k)).collect();
    colors.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    ColoredPointSet::from_line(colors.into_iter().enumerate().map(|(i, c)| (i as f64, c)))
}

fn sampled() -> EstimatorConfig {
    EstimatorConfig { fallback: false, ..Default::default() }
}

fn all(p: &ColoredPointSet) -> QueryRect {
    QueryRect::interval(-1.0, p.len() as f64)
}

#[test]
fn single_color_is_exactly_zero() {
    let p = line_from_counts(&[40], 1);
    let idx = SamplingIndex::build(&p);
    let r = all(&p);
    let cfg = sampled();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    assert_eq!(estimate_additive(&idx, &r, 0.3, &cfg, &mut rng).unwrap().value(), 0.0);
    let m = estimate_multiplicative(&idx, &r, 0.3, &cfg, &mut rng).unwrap();
    assert_eq!((m.value(), m.branch), (0.0, Branch::SingleColor));
    assert_eq!(estimate_moment(&idx, &r, 2.0, 0.5, &cfg, &mut rng).unwrap().value, 1.0);
    assert_eq!(estimate_additive_renyi(&idx, &r, 2.0, 0.3, &cfg, &mut rng).unwrap().value(), 0.0);
    assert_eq!(estimate_multiplicative_renyi(&idx, &r, 3.0, 0.3, &cfg, &mut rng).unwrap().value(), 0.0);
}

#[test]
fn empty_range_is_an_error() {
    let p = line_from_counts(&[5, 5], 1);
    let idx = SamplingIndex::build(&p);
    let r = QueryRect::interval(100.0, 200.0);
    let cfg = EstimatorConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    assert!(matches!(estimate_additive(&idx, &r, 0.3, &cfg, &mut rng), Err(Error::EmptyRange)));
    assert!(matches!(estimate_multiplicative(&idx, &r, 0.3, &cfg, &mut rng), Err(Error::EmptyRange)));
    assert!(matches!(detect_heavy_color(&idx, &r, &cfg, &mut rng), Err(Error::EmptyRange)));
    assert!(matches!(estimate_moment(&idx, &r, 2.0, 0.3, &cfg, &mut rng), Err(Error::EmptyRange)));
    assert!(matches!(estimate_additive_renyi(&idx, &r, 2.0, 0.3, &cfg, &mut rng), Err(Error::EmptyRange)));
    assert!(matches!(estimate_multiplicative_renyi(&idx, &r, 2.0, 0.3, &cfg, &mut rng), Err(Error::EmptyRange)));
}

#[test]
fn bad_parameters_are_rejected() {
    let p = line_from_counts(&[5, 5], 1);
    let idx = SamplingIndex::build(&p);
    let r = all(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = EstimatorConfig::default();
    assert!(matches!(estimate_additive_renyi(&idx, &r, 1.0, 0.3, &cfg, &mut rng), Err(Error::InvalidOrder(_))));
    assert!(matches!(estimate_additive_renyi(&idx, &r, 0.5, 0.3, &cfg, &mut rng), Err(Error::InvalidOrder(_))));
    assert!(estimate_additive(&idx, &r, 1.5, &cfg, &mut rng).is_err());
    assert!(estimate_multiplicative(&idx, &r, 0.0, &cfg, &mut rng).is_err());
    let small = EstimatorConfig { c_mom: 0.1, ..cfg };
    assert!(estimate_moment(&idx, &r, 2.0, 0.3, &small, &mut rng).is_err());
}

#[test]
fn oracle_pair_is_exact() {
    let p = demo_points();
    let idx = SamplingIndex::build(&p);
    let o = idx.oracle(&demo_rect()).unwrap();
    assert_eq!(o.total(), 9.0);
    assert_eq!(o.eval(0).unwrap(), 2.0 / 9.0);
    assert_eq!(o.eval(2).unwrap(), 4.0 / 9.0);
    assert_eq!(o.eval(3).unwrap(), 0.0);
    let ex = idx.oracle_excluding(&demo_rect(), 2).unwrap();
    assert_eq!(ex.total(), 5.0);
    assert_eq!(ex.eval(1).unwrap(), 0.6);
    assert_eq!(ex.eval(2).unwrap(), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut hits = [0usize; 4];
    for _ in 0..90_000 {
        hits[o.samp(&mut rng).unwrap() as usize] += 1;
    }
    assert_eq!(hits[3], 0);
    for (c, want) in [(0, 2.0 / 9.0), (1, 3.0 / 9.0), (2, 4.0 / 9.0)] {
        assert!((hits[c] as f64 / 90_000.0 - want).abs() < 0.01);
    }
}

#[test]
fn estimates_are_reproducible_from_a_seed() {
    let p = line_from_counts(&[30, 20, 10, 5], 2);
    let idx = SamplingIndex::build(&p);
    let r = QueryRect::interval(3.0, 50.0);
    let cfg = sampled();
    let a = estimate_additive(&idx, &r, 0.3, &cfg, &mut cfg.rng()).unwrap();
    let b = estimate_additive(&idx, &r, 0.3, &cfg, &mut cfg.rng()).unwrap();
    assert_eq!(a, b);
    let q1 = query_rng(7, &r).gen::<u64>();
    let q2 = query_rng(7, &r).gen::<u64>();
    let q3 = query_rng(7, &QueryRect::interval(3.0, 51.0)).gen::<u64>();
    assert_eq!(q1, q2);
    assert_ne!(q1, q3);
}

#[test]
fn large_budgets_fall_back_to_a_scan() {
    let p = line_from_counts(&[3, 2, 1], 4);
    let idx = SamplingIndex::build(&p);
    let r = all(&p);
    let truth = oracle_entropy(&p, &r, EntropyKind::Shannon).unwrap().value;
    let e = estimate_additive(&idx, &r, 0.05, &EstimatorConfig::default(), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert!(e.fell_back());
    assert!((e.value() - truth).abs() < 1e-12);
    let s = estimate_additive(&idx, &r, 0.05, &sampled(), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert_eq!(s.branch, Branch::Sampled);
    assert_eq!(s.samples, additive_samples(p.len(), 0.05, &sampled()));
}

#[test]
fn demo_box_additive_rate() {
    let p = demo_points();
    let idx = SamplingIndex::build(&p);
    let cfg = sampled();
    let mut ok = 0;
    for seed in 0..200 {
        let e = estimate_additive(&idx, &demo_rect(), 0.1, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        assert_eq!(e.branch, Branch::Sampled);
        ok += ((e.value() - 1.5305).abs() <= 0.1) as usize;
    }
    assert!(ok >= 190, "{ok}/200");
}

#[test]
fn heavy_color_is_found() {
    // 90% heavy at n = 512.
    let p = line_from_counts(&[461, 13, 13, 13, 12], 5);
    assert_eq!(p.len(), 512);
    let idx = SamplingIndex::build(&p);
    let r = all(&p);
    let cfg = EstimatorConfig::default();
    let mut found = 0;
    for seed in 0..1000 {
        if let Some(h) = detect_heavy_color(&idx, &r, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap() {
            assert_eq!((h.color, h.weight, h.total), (0, 461.0, 512.0));
            found += 1;
        }
    }
    assert!(found >= 990);
}

#[test]
fn light_colors_are_never_reported_heavy() {
    let cfg = EstimatorConfig::default();
    let uniform = line_from_counts(&[10; 10], 6);
    let idx = SamplingIndex::build(&uniform);
    for seed in 0..300 {
        assert_eq!(detect_heavy_color(&idx, &all(&uniform), &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap(), None);
    }
    // Exactly 2:1 is not more than 2/3, so neither color qualifies.
    let two = line_from_counts(&[20, 10], 6);
    let idx = SamplingIndex::build(&two);
    for seed in 0..300 {
        assert_eq!(detect_heavy_color(&idx, &all(&two), &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap(), None);
    }
    let skew = line_from_counts(&[21, 10], 6);
    let idx = SamplingIndex::build(&skew);
    for seed in 0..300 {
        if let Some(h) = detect_heavy_color(&idx, &all(&skew), &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap() {
            assert_eq!(h.color, 0);
        }
    }
}

#[test]
fn heavy_share_bound_on_a_grid() {
    // For a heavy share q in (2/3, 1): (1-q)/q <= binary entropy of q.
    let steps = 10_000;
    for i in 1..steps {
        let q = 2.0 / 3.0 + (1.0 / 3.0) * i as f64 / steps as f64;
        let h2 = q * (1.0 / q).log2() + (1.0 - q) * (1.0 / (1.0 - q)).log2();
        assert!((1.0 - q) / q <= h2 + 1e-15, "q = {q}");
    }
}

#[test]
fn heavy_branch_identities_with_exact_parts() {
    let p = line_from_counts(&[80, 7, 5, 4, 3, 1], 8);
    let idx = SamplingIndex::build(&p);
    let r = QueryRect::interval(2.0, 90.0);
    let h = p.histogram_in(&r);
    let (heavy, w) = h.heaviest().unwrap();
    let rest = idx.exact_excluding(&r, heavy, EntropyKind::Shannon).unwrap().value;
    let got = combine_heavy_shannon(h.total(), w, rest);
    let want = oracle_entropy(&p, &r, EntropyKind::Shannon).unwrap().value;
    assert!((got - want).abs() < 1e-9);
    for alpha in [1.5, 2.0, 3.0, 5.0] {
        let m_all: f64 = h.weights().map(|x| (x / h.total()).powf(alpha)).sum();
        let rest_total = h.total() - w;
        let m_rest: f64 = h.iter().filter(|&(c, _)| c != heavy).map(|(_, x)| (x / rest_total).powf(alpha)).sum();
        let got = combine_heavy_renyi(alpha, w / h.total(), m_rest, m_all);
        let want = oracle_entropy(&p, &r, EntropyKind::renyi(alpha).unwrap()).unwrap().value;
        assert!((got - want).abs() < 1e-9);
    }
}

#[test]
fn moment_examples() {
    let cfg = sampled();
    let p = line_from_counts(&[8, 4, 2, 1, 1], 9);
    let idx = SamplingIndex::build(&p);
    let r = all(&p);
    let truth = 86.0 / 256.0;
    let mut ok = 0;
    for seed in 0..200 {
        let m = estimate_moment(&idx, &r, 2.0, 0.2, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        assert!(m.value > 0.0 && m.value <= 1.0);
        ok += ((m.value - truth).abs() <= 0.2 * truth) as usize;
    }
    assert!(ok >= 190);

    // Uniform colors make every draw equal, so the estimate is exact.
    let u = line_from_counts(&[5; 16], 9);
    let idx = SamplingIndex::build(&u);
    let m = estimate_moment(&idx, &all(&u), 2.0, 0.3, &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    assert!((m.value - 1.0 / 16.0).abs() < 1e-12);

    // Removing the heavy color leaves two equal colors.
    let h = line_from_counts(&[50, 6, 6], 9);
    let idx = SamplingIndex::build(&h);
    for alpha in [1.5, 2.0, 3.0] {
        let m = estimate_moment_excluding(&idx, &all(&h), alpha, 0.3, 0, &cfg, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!((m.value - 2f64.powf(1.0 - alpha)).abs() < 1e-12);
    }
    // Excluding an absent color changes nothing.
    let a = estimate_moment(&idx, &all(&h), 2.0, 0.3, &cfg, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    let b = estimate_moment_excluding(&idx, &all(&h), 2.0, 0.3, 77, &cfg, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    assert_eq!(a.value, b.value);
}

#[test]
fn moment_draws_are_unbiased() {
    // Mean of p^(a-1) over 10^5 draws within 3 standard errors of the moment.
    let counts = [30usize, 12, 9, 5, 3, 1];
    let p = line_from_counts(&counts, 10);
    let idx = SamplingIndex::build(&p);
    let o = idx.oracle(&all(&p)).unwrap();
    let hist = ColorHistogram::from_colors(p.colors().iter().copied());
    for alpha in [1.5, 2.0, 3.0] {
        let n = hist.total();
        let truth: f64 = hist.weights().map(|w| (w / n).powf(alpha)).sum();
        let second: f64 = hist.weights().map(|w| (w / n).powf(2.0 * alpha - 1.0)).sum();
        let sd = (second - truth * truth).sqrt();
        let draws = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(alpha.to_bits());
        let mut sum = 0.0;
        for _ in 0..draws {
            let c = o.samp(&mut rng).unwrap();
            sum += o.eval(c).unwrap().powf(alpha - 1.0);
        }
        let mean = sum / draws as f64;
        assert!((mean - truth).abs() <= 3.0 * sd / (draws as f64).sqrt(), "alpha {alpha}: {mean} vs {truth}");
    }
}

#[test]
fn renyi_additive_and_multiplicative_rates() {
    let cfg = EstimatorConfig { c1: 1.0, c2: 1.0, ..sampled() };
    let p = demo_points();
    let idx = SamplingIndex::build(&p);
    let truth = (81.0f64 / 29.0).log2();
    let mut ok = 0;
    for seed in 0..200 {
        let e = estimate_additive_renyi(&idx, &demo_rect(), 2.0, 0.15, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        ok += ((e.value() - truth).abs() <= 0.15) as usize;
    }
    assert!(ok >= 190, "{ok}");

    let q = line_from_counts(&[300, 34, 33, 33], 11);
    let idx = SamplingIndex::build(&q);
    let r = all(&q);
    let truth = oracle_entropy(&q, &r, EntropyKind::renyi(2.0).unwrap()).unwrap().value;
    let mut ok = 0;
    for seed in 0..200 {
        let e = estimate_multiplicative_renyi(&idx, &r, 2.0, 0.25, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        assert_ne!(e.branch, Branch::Exact);
        ok += (e.value() <= 1.25 * truth && e.value() >= truth / 1.25) as usize;
    }
    assert!(ok >= 190, "{ok}");
}

#[test]
fn renyi_branch_comparator_on_a_grid() {
    for &alpha in &[1.1, 1.5, 2.0, 2.5, 3.0, 6.0] {
        for &delta in &[0.01, 0.05, 0.1, 0.3, 0.9] {
            let samples_only = (1.0f64).max(1.0 / ((alpha - 1.0) * (alpha - 1.0))) * alpha / (delta * delta);
            let dual = 1.0 / (1.0 - 2f64.powf((1.0 - alpha) * delta)).powi(2);
            let (a, b) = additive_factors(alpha, delta);
            assert!((a - samples_only).abs() <= 1e-9 * samples_only);
            assert!((b - dual).abs() <= 1e-9 * dual);
            let want = if dual >= samples_only { RenyiBranch::SamplesOnly } else { RenyiBranch::DualAccess };
            assert_eq!(choose_branch(alpha, delta), want);
        }
    }
}
