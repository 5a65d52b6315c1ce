use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use range_entropy::entropy::{self, EntropyKind};
use range_entropy::exact1d::Exact1DIndex;
use range_entropy::exactnd::{BucketEntry, ExactNDIndex, Stitch};
use range_entropy::oracle::{demo_points, demo_rect, oracle_entropy, random_grid_points, random_points, random_rect, ColorLaw};
use range_entropy::{ColorHistogram, ColoredPointSet, Error, Point, QueryRect};

fn kinds() -> Vec<EntropyKind> {
    vec![EntropyKind::Shannon, EntropyKind::renyi(1.5).unwrap(), EntropyKind::renyi(2.0).unwrap(), EntropyKind::renyi(3.0).unwrap()]
}

const ORDERS: [f64; 3] = [1.5, 2.0, 3.0];

#[test]
fn demo_values_through_exact_indexes() {
    let p = demo_points();
    let line = p.project(0);
    let e1 = Exact1DIndex::build(&line, 0.5, &[2.0]).unwrap();
    let en = ExactNDIndex::build(&p, 0.5, &[2.0]).unwrap();
    let sh = (2.0 / 9.0) * 4.5f64.log2() + (3.0 / 9.0) * 3f64.log2() + (4.0 / 9.0) * 2.25f64.log2();
    let r2 = (81.0f64 / 29.0).log2();
    let k2 = EntropyKind::renyi(2.0).unwrap();
    let slab = QueryRect::interval(2.0, 6.0);
    assert!((e1.query(&slab, EntropyKind::Shannon).unwrap().value - sh).abs() < 1e-9);
    assert!((e1.query(&slab, k2).unwrap().value - r2).abs() < 1e-9);
    assert!((en.query(&demo_rect(), EntropyKind::Shannon).unwrap().value - sh).abs() < 1e-9);
    assert!((en.query(&demo_rect(), k2).unwrap().value - r2).abs() < 1e-9);
    assert_eq!(e1.query(&QueryRect::interval(100.0, 200.0), EntropyKind::Shannon).unwrap().value, 0.0);
    assert_eq!(en.query(&QueryRect::new(vec![50.0, 50.0], vec![60.0, 60.0]).unwrap(), k2).unwrap().value, 0.0);
}

#[test]
fn unknown_order_is_rejected() {
    let p = demo_points();
    let e1 = Exact1DIndex::build(&p.project(0), 0.5, &[2.0]).unwrap();
    let k3 = EntropyKind::renyi(3.0).unwrap();
    assert!(matches!(e1.query(&QueryRect::interval(0.0, 1.0), k3), Err(Error::OrderNotIndexed(_))));
    let en = ExactNDIndex::build(&p, 0.5, &[]).unwrap();
    assert!(matches!(en.query(&demo_rect(), k3), Err(Error::OrderNotIndexed(_))));
}

#[test]
fn table_entries_match_direct_computation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &t in &[0.0, 0.25, 0.5, 1.0] {
        let p = random_grid_points(150, 1, 40, 7, &mut rng);
        let idx = Exact1DIndex::build(&p, t, &ORDERS).unwrap();
        let order = p.order_by_axis(0);
        for i in 0..idx.num_buckets() {
            for j in i..idx.num_buckets() {
                let (s, _) = idx.bucket_span(i);
                let (_, e) = idx.bucket_span(j);
                let h = ColorHistogram::from_colors(order[s..e].iter().map(|&q| p.color(q as usize)));
                for k in kinds() {
                    let got = idx.table_entry(i, j, k).unwrap();
                    let want = entropy::entropy(&h, k);
                    assert!((got.value - want.value).abs() < 1e-9, "t={t} ({i},{j}) {k}");
                    assert_eq!(got.count, want.count);
                }
            }
        }
    }
    let p = random_grid_points(10, 1, 40, 3, &mut rng);
    let one = Exact1DIndex::build(&p, 1.0, &[]).unwrap();
    assert_eq!(one.num_buckets(), 1);
}

#[test]
fn exact1d_matches_oracle_and_bounds_fringe() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = random_points(2000, 1, 40, ColorLaw::Zipf(1.1), &mut rng);
    for &t in &[0.25, 0.5, 0.75] {
        let idx = Exact1DIndex::build(&p, t, &ORDERS).unwrap();
        for _ in 0..300 {
            let r = random_rect(1, 1.0, &mut rng);
            for k in kinds() {
                let (got, stats) = idx.query_with_stats(&r, k).unwrap();
                let want = oracle_entropy(&p, &r, k).unwrap();
                assert!((got.value - want.value).abs() < 1e-6);
                assert!(stats.fringe_points <= 2 * idx.bucket_size());
            }
        }
    }
}

#[test]
fn exact1d_handles_ties_and_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut p = ColoredPointSet::new(1);
    for _ in 0..400 {
        let w = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.1..5.0) };
        p.push(Point::weighted(vec![rng.gen_range(0..30) as f64], rng.gen_range(0..6), w)).unwrap();
    }
    let idx = Exact1DIndex::build(&p, 0.5, &ORDERS).unwrap();
    for _ in 0..400 {
        let a = rng.gen_range(-1..31) as f64;
        let b = a + rng.gen_range(0..15) as f64;
        let r = QueryRect::interval(a, b);
        for k in kinds() {
            let got = idx.query(&r, k).unwrap().value;
            let want = oracle_entropy(&p, &r, k).unwrap().value;
            assert!((got - want).abs() < 1e-9, "[{a},{b}] {k}: {got} vs {want}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn exact1d_answer_does_not_depend_on_t(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_grid_points(300, 1, 100, 9, &mut rng);
        let idx: Vec<Exact1DIndex> = [0.25, 0.5, 0.75].iter().map(|&t| Exact1DIndex::build(&p, t, &[2.0]).unwrap()).collect();
        for _ in 0..30 {
            let r = random_rect(1, 100.0, &mut rng);
            let v: Vec<f64> = idx.iter().map(|i| i.query(&r, EntropyKind::Shannon).unwrap().value).collect();
            prop_assert!((v[0] - v[1]).abs() < 1e-9 && (v[1] - v[2]).abs() < 1e-9);
        }
    }

    #[test]
    fn exactnd_matches_oracle(seed in 0u64..1000, dim in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_grid_points(90, dim, 6, 7, &mut rng);
        let idx = ExactNDIndex::build(&p, 0.5, &ORDERS).unwrap();
        for _ in 0..15 {
            let r = random_rect(dim, 6.0, &mut rng);
            for k in kinds() {
                let (got, st) = idx.query_with_stats(&r, k).unwrap();
                prop_assert_eq!(st.buckets_visited, idx.num_buckets());
                let want = oracle_entropy(&p, &r, k).unwrap();
                prop_assert!((got.value - want.value).abs() < 1e-9);
                prop_assert!((got.count - want.count).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn exactnd_buckets_share_at_most_one_color() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let p = random_points(500, 2, 12, ColorLaw::Zipf(1.5), &mut rng);
    let idx = ExactNDIndex::build(&p, 0.5, &[]).unwrap();
    let mut seen = 0;
    for i in 0..idx.num_buckets() {
        assert!(idx.bucket_points(i).len() <= idx.bucket_capacity());
        seen += idx.bucket_points(i).len();
        if i > 0 {
            let a = idx.bucket_colors(i - 1);
            let b = idx.bucket_colors(i);
            assert!(a.iter().filter(|c| b.contains(c)).count() <= 1);
        }
    }
    assert_eq!(seen, 500);
}

#[test]
fn snapped_rectangles_select_the_same_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = random_grid_points(120, 2, 10, 5, &mut rng);
    let idx = ExactNDIndex::build(&p, 0.5, &[]).unwrap();
    for _ in 0..200 {
        let r = random_rect(2, 10.0, &mut rng);
        for i in 0..idx.num_buckets() {
            let pts = idx.bucket_points(i);
            let want: Vec<u32> = pts.iter().copied().filter(|&q| r.contains(p.coords(q as usize))).collect();
            match idx.canonical_rect(i, &r) {
                None => assert!(want.is_empty()),
                Some(c) => {
                    let got: Vec<u32> = pts.iter().copied().filter(|&q| c.contains(p.coords(q as usize))).collect();
                    assert_eq!(got, want);
                }
            }
        }
    }
}

#[test]
fn table_and_scan_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p = random_grid_points(100, 2, 9, 6, &mut rng);
    let full = ExactNDIndex::build(&p, 0.5, &ORDERS).unwrap();
    let lazy = ExactNDIndex::build_with_budget(&p, 0.5, &ORDERS, 0).unwrap();
    assert_eq!(full.tabulated_buckets(), full.num_buckets());
    assert_eq!(lazy.tabulated_buckets(), 0);
    for _ in 0..300 {
        let r = random_rect(2, 9.0, &mut rng);
        for k in kinds() {
            for i in 0..full.num_buckets() {
                let a = full.bucket_entry(i, &r, k).unwrap();
                let b = lazy.bucket_entry(i, &r, k).unwrap();
                assert_eq!((a.min_color, a.max_color, a.count), (b.min_color, b.max_color, b.count));
                assert!((a.value - b.value).abs() < 1e-9);
            }
        }
    }
}

fn entry(h: &ColorHistogram, kind: EntropyKind) -> BucketEntry {
    let (lo, hi) = (h.iter().next().unwrap(), h.iter().last().unwrap());
    let s = entropy::entropy(h, kind);
    BucketEntry { count: s.count, value: s.value, min_color: lo.0, max_color: hi.0, min_weight: lo.1, max_weight: hi.1 }
}

#[test]
fn stitch_handles_shared_and_disjoint_boundaries() {
    let mk = |items: &[(u32, f64)]| {
        let mut h = ColorHistogram::new();
        for &(c, w) in items {
            h.add(c, w);
        }
        h
    };
    let cases: Vec<Vec<ColorHistogram>> = vec![
        vec![mk(&[(0, 2.0), (1, 3.0)]), mk(&[(1, 4.0), (2, 1.0)])],
        vec![mk(&[(0, 2.0), (1, 3.0)]), mk(&[(2, 4.0), (3, 1.0)])],
        vec![mk(&[(0, 2.0), (1, 3.0)]), mk(&[(1, 4.0)]), mk(&[(1, 1.0), (5, 2.0)])],
        vec![mk(&[(1, 3.0)]), mk(&[(1, 4.0)])],
    ];
    for kind in kinds() {
        for parts in &cases {
            let mut s = Stitch::new(kind);
            let mut all = ColorHistogram::new();
            for h in parts {
                s.push(&entry(h, kind));
                for (c, w) in h.iter() {
                    all.add(c, w);
                }
            }
            let want = entropy::entropy(&all, kind);
            assert!((s.finish().value - want.value).abs() < 1e-12);
            assert_eq!(s.finish().count, want.count);
        }
    }
}
