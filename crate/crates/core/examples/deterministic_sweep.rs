//! Deterministic interval entropy with guaranteed bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use range_entropy::entropy::{renyi_entropy, shannon_entropy};
use range_entropy::sweep1d::Sweep1DIndex;
use range_entropy::{ColoredPointSet, QueryRect};

fn main() -> range_entropy::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 5_000;
    // slowly drifting colors, so intervals range from pure to mixed
    let mut c = 0u32;
    let points = ColoredPointSet::from_line((0..n).map(|i| {
        if rng.gen_bool(0.02) {
            c = rng.gen_range(0..60);
        }
        (i as f64, if rng.gen_bool(0.2) { rng.gen_range(0..60) } else { c })
    }));
    let eps = 0.2;
    let shannon = Sweep1DIndex::build_shannon(&points, eps)?;
    let collision = Sweep1DIndex::build_renyi(&points, eps, 2.0)?;
    println!("{} runs over {} nodes", shannon.num_runs(), shannon.num_nodes());

    for _ in 0..8 {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(a..n);
        let rect = QueryRect::interval(a as f64, b as f64);
        let hist = points.histogram_in(&rect);
        let h = shannon_entropy(&hist).value;
        let (got, stats) = shannon.query_with_stats(&rect)?;
        let h2 = renyi_entropy(&hist, 2.0)?.value;
        let got2 = collision.query(&rect)?.value;
        println!(
            "[{a:>4}, {b:>4}] H {h:.3} <= {:.3} <= {:.3}   H2 {h2:.3} <= {got2:.3} <= {:.3}   ({} nodes)",
            got.value,
            shannon.upper_bound(h),
            collision.upper_bound(h2),
            stats.nodes
        );
    }
    Ok(())
}
