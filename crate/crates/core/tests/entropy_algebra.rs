use proptest::prelude::*;
use range_entropy::entropy::*;

fn hist(ws: &[f64], offset: u32) -> ColorHistogram {
    let mut h = ColorHistogram::new();
    for (i, &w) in ws.iter().enumerate() {
        h.add(i as ColorId + offset, w);
    }
    h
}

fn union(a: &ColorHistogram, b: &ColorHistogram) -> ColorHistogram {
    let mut h = a.clone();
    for (c, w) in b.iter() {
        h.add(c, w);
    }
    h
}

fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![(1u32..50u32).prop_map(|x| x as f64), 0.01f64..40.0], 1..12)
}

/// Weights for tests that delete a color. The rest is recovered from the
/// summary alone, so a rest far lighter than the deleted color loses digits.
fn delete_weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![(1u32..50u32).prop_map(|x| x as f64), 1.0f64..50.0], 1..12)
}

proptest! {
    #[test]
    fn shannon_merge_matches_direct(a in weights(), b in weights()) {
        let (ha, hb) = (hist(&a, 0), hist(&b, 100));
        let m = merge_shannon(&shannon_entropy(&ha), &shannon_entropy(&hb));
        let d = shannon_entropy(&union(&ha, &hb));
        prop_assert!((m.value - d.value).abs() < 1e-9);
        prop_assert!((m.count - d.count).abs() < 1e-9);
    }

    #[test]
    fn renyi_merge_matches_direct(a in weights(), b in weights(), alpha in 1.05f64..6.0) {
        let (ha, hb) = (hist(&a, 0), hist(&b, 100));
        let m = merge_renyi(&renyi_entropy(&ha, alpha).unwrap(), &renyi_entropy(&hb, alpha).unwrap(), alpha).unwrap();
        let d = renyi_entropy(&union(&ha, &hb), alpha).unwrap();
        prop_assert!((m.value - d.value).abs() < 1e-9);
    }

    #[test]
    fn insert_then_delete_round_trips(a in delete_weights(), w in 1.0f64..50.0, alpha in 1.05f64..3.0) {
        let h = hist(&a, 0);
        let s = shannon_entropy(&h);
        let up = insert_color_shannon(&s, w).unwrap();
        let mut hu = h.clone();
        hu.add(999, w);
        prop_assert!((up.value - shannon_entropy(&hu).value).abs() < 1e-9);
        let back = delete_color_shannon(&up, w).unwrap();
        prop_assert!((back.value - s.value).abs() < 1e-9);

        let r = renyi_entropy(&h, alpha).unwrap();
        let rup = insert_color_renyi(&r, w, alpha).unwrap();
        prop_assert!((rup.value - renyi_entropy(&hu, alpha).unwrap().value).abs() < 1e-9);
        let rback = delete_color_renyi(&rup, w, alpha).unwrap();
        prop_assert!((rback.value - r.value).abs() < 1e-9);
    }

    #[test]
    fn entropy_bounds(a in weights(), alpha in 1.05f64..8.0) {
        let h = hist(&a, 0);
        let k = h.num_colors() as f64;
        let s = shannon_entropy(&h).value;
        let r = renyi_entropy(&h, alpha).unwrap().value;
        prop_assert!(s >= 0.0 && s <= k.log2() + 1e-12);
        prop_assert!(r >= 0.0 && r <= s + 1e-9);
        let r2 = renyi_entropy(&h, alpha + 0.5).unwrap().value;
        prop_assert!(r2 <= r + 1e-9);
    }

    #[test]
    fn delete_matches_direct(a in prop::collection::vec(1u32..40, 2..10), pick in 0usize..10, alpha in 1.1f64..3.0) {
        let ws: Vec<f64> = a.iter().map(|&x| x as f64).collect();
        let i = pick % ws.len();
        let h = hist(&ws, 0);
        let mut rest = h.clone();
        rest.remove(i as ColorId);
        let d = delete_color_shannon(&shannon_entropy(&h), ws[i]).unwrap();
        prop_assert!((d.value - shannon_entropy(&rest).value).abs() < 1e-9);
        let dr = delete_color_renyi(&renyi_entropy(&h, alpha).unwrap(), ws[i], alpha).unwrap();
        prop_assert!((dr.value - renyi_entropy(&rest, alpha).unwrap().value).abs() < 1e-9);
    }
}

#[test]
fn delete_everything_is_underflow() {
    let s = shannon_entropy(&hist(&[3.0], 0));
    assert!(matches!(delete_color_shannon(&s, 3.0), Err(range_entropy::Error::Underflow { .. })));
    let r = renyi_entropy(&hist(&[3.0, 1.0], 0), 2.0).unwrap();
    assert!(matches!(delete_color_renyi(&r, 5.0, 2.0), Err(range_entropy::Error::Underflow { .. })));
}

#[test]
fn summary_methods_follow_kind() {
    let k = EntropyKind::renyi(3.0).unwrap();
    let h = hist(&[1.0, 2.0, 3.0], 0);
    let s = entropy(&h, k);
    let up = s.insert_color(4.0).unwrap();
    let mut h2 = h.clone();
    h2.add(9, 4.0);
    assert!((up.value - entropy(&h2, k).value).abs() < 1e-12);
    let down = up.delete_color(2.0).unwrap();
    h2.remove(1);
    assert!((down.value - entropy(&h2, k).value).abs() < 1e-12);
}
