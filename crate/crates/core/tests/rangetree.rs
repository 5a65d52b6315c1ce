use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use range_entropy::oracle::{random_grid_points, random_points, random_rect, ColorLaw};
use range_entropy::rangetree::{histogram_via_tree, ColorCounter, RangeTree};
use range_entropy::{ColoredPointSet, Point, QueryRect};

fn inside_ids(p: &ColoredPointSet, r: &QueryRect) -> Vec<u32> {
    (0..p.len() as u32).filter(|&i| r.contains(p.coords(i as usize))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn canonical_nodes_partition_the_range(seed in 0u64..10_000, dim in 1usize..4, n in 0usize..120) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_grid_points(n, dim, 8, 5, &mut rng);
        let t = RangeTree::build(&p);
        for _ in 0..10 {
            let r = random_rect(dim, 8.0, &mut rng);
            let nodes = t.canonical_nodes(&r).unwrap();
            let mut got: Vec<u32> = nodes.iter().flat_map(|v| v.point_ids().iter().copied()).collect();
            let before = got.len();
            got.sort_unstable();
            got.dedup();
            prop_assert_eq!(before, got.len());
            prop_assert_eq!(got, inside_ids(&p, &r));
            let bound = 4.0 * ((n.max(2) as f64).log2() + 1.0).powi(dim as i32);
            prop_assert!((nodes.len() as f64) <= bound);
            prop_assert_eq!(t.range_count(&r).unwrap(), inside_ids(&p, &r).len());
        }
    }

    #[test]
    fn color_weights_match_scan(seed in 0u64..10_000, dim in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_points(80, dim, 6, ColorLaw::Zipf(1.0), &mut rng);
        let t = RangeTree::build_color_aware(&p);
        let cc = ColorCounter::build(&p);
        for _ in 0..10 {
            let r = random_rect(dim, 1.0, &mut rng);
            let h = p.histogram_in(&r);
            prop_assert_eq!(histogram_via_tree(&t, &p, &r).unwrap(), h.clone());
            for c in 0..6 {
                prop_assert!((t.range_color_weight(&r, c).unwrap() - h.get(c)).abs() < 1e-9);
                prop_assert!((cc.weight(c, &r).unwrap() - h.get(c)).abs() < 1e-9);
                let via_nodes: f64 = t.canonical_nodes(&r).unwrap().iter().map(|v| v.color_weight(c)).sum();
                prop_assert!((via_nodes - h.get(c)).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn sampling_follows_weights() {
    let mut p = ColoredPointSet::new(1);
    for (i, w) in [1.0, 2.0, 0.0, 4.0, 8.0, 1.0].iter().enumerate() {
        p.push(Point::weighted(vec![i as f64], i as u32, *w)).unwrap();
    }
    let t = RangeTree::build_color_aware(&p);
    let r = QueryRect::interval(0.0, 4.5);
    let s = t.sampler(&r).unwrap();
    assert_eq!(s.total_weight(), 15.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut hits = [0usize; 6];
    let trials = 150_000;
    for _ in 0..trials {
        hits[s.sample(&mut rng).unwrap() as usize] += 1;
    }
    assert_eq!(hits[2], 0);
    assert_eq!(hits[5], 0);
    for (i, w) in [1.0, 2.0, 0.0, 4.0, 8.0].iter().enumerate() {
        let f = hits[i] as f64 / trials as f64;
        assert!((f - w / 15.0).abs() < 0.01, "point {i}: {f}");
    }
    let ex = t.sampler_excluding(&r, 4).unwrap();
    assert_eq!(ex.total_weight(), 7.0);
    let mut hits = [0usize; 6];
    for _ in 0..70_000 {
        hits[ex.sample(&mut rng).unwrap() as usize] += 1;
    }
    assert_eq!(hits[4], 0);
    assert!((hits[3] as f64 / 70_000.0 - 4.0 / 7.0).abs() < 0.01);
}

#[test]
fn excluding_sampler_skips_color_in_2d() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = random_points(300, 2, 3, ColorLaw::Zipf(2.0), &mut rng);
    let t = RangeTree::build_color_aware(&p);
    let r = QueryRect::new(vec![0.1, 0.2], vec![0.8, 0.9]).unwrap();
    let h = p.histogram_in(&r);
    let s = t.sampler_excluding(&r, 0).unwrap();
    assert!((s.total_weight() - (h.total() - h.get(0))).abs() < 1e-9);
    for _ in 0..5000 {
        let id = s.sample(&mut rng).unwrap();
        assert_ne!(p.color(id as usize), 0);
        assert!(r.contains(p.coords(id as usize)));
    }
}

#[test]
fn empty_range_has_no_sample() {
    let p = ColoredPointSet::from_line([(1.0, 0), (2.0, 1)]);
    let t = RangeTree::build(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert_eq!(t.sample(&QueryRect::interval(5.0, 6.0), &mut rng).unwrap(), None);
    assert!(t.canonical_nodes(&QueryRect::everything(2)).is_err());
}

#[test]
fn excluding_without_colors_is_an_error() {
    let p = ColoredPointSet::from_line([(1.0, 0)]);
    let t = RangeTree::build(&p);
    assert!(t.sampler_excluding(&QueryRect::interval(0.0, 2.0), 0).is_err());
}
