//! Randomized Shannon estimates next to the exact answer.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use range_entropy::approx_shannon::{
    detect_heavy_color, estimate_additive, estimate_multiplicative, EstimatorConfig, SamplingIndex,
};
use range_entropy::oracle::{random_points, ColorLaw};
use range_entropy::{EntropyKind, QueryRect};

fn main() -> range_entropy::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let points = random_points(20_000, 2, 50, ColorLaw::Zipf(1.3), &mut rng);
    let index = SamplingIndex::build(&points);
    let cfg = EstimatorConfig { fallback: false, ..EstimatorConfig::with_seed(7) };

    let boxes = [
        QueryRect::new(vec![0.1, 0.1], vec![0.6, 0.5])?,
        QueryRect::new(vec![0.0, 0.0], vec![1.0, 1.0])?,
        QueryRect::new(vec![0.45, 0.45], vec![0.5, 0.5])?,
    ];
    println!("{:>8} {:>9} {:>9} {:>9} {:>8}", "points", "exact", "additive", "relative", "samples");
    for rect in &boxes {
        let truth = index.exact(rect, EntropyKind::Shannon)?;
        let mut rng = cfg.rng();
        let add = estimate_additive(&index, rect, 0.1, &cfg, &mut rng)?;
        let mul = estimate_multiplicative(&index, rect, 0.1, &cfg, &mut rng)?;
        println!(
            "{:>8} {:>9.4} {:>9.4} {:>9.4} {:>8}",
            truth.count,
            truth.value,
            add.value(),
            mul.value(),
            add.samples + mul.samples
        );
    }

    // A box dominated by one color: the probe finds it and verifies the share exactly.
    let skewed = random_points(5_000, 1, 8, ColorLaw::Zipf(4.0), &mut rng);
    let index = SamplingIndex::build(&skewed);
    let all = QueryRect::everything(1);
    if let Some(h) = detect_heavy_color(&index, &all, &cfg, &mut cfg.rng())? {
        println!("color {} holds {:.1}% of the line", h.color, 100.0 * h.ratio());
    }
    Ok(())
}
