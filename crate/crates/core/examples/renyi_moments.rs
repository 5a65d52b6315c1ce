//! Frequency moments and Rényi entropy estimates for a few orders.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use range_entropy::approx_renyi::{estimate_additive_renyi, estimate_moment, estimate_multiplicative_renyi};
use range_entropy::approx_shannon::{EstimatorConfig, SamplingIndex};
use range_entropy::oracle::{random_points, ColorLaw};
use range_entropy::{EntropyKind, QueryRect};

fn main() -> range_entropy::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let points = random_points(10_000, 1, 40, ColorLaw::Zipf(1.0), &mut rng);
    let index = SamplingIndex::build(&points);
    let rect = QueryRect::interval(0.25, 0.75);
    let cfg = EstimatorConfig { fallback: false, c1: 1.0, c2: 1.0, ..EstimatorConfig::with_seed(5) };

    let hist = points.histogram_in(&rect);
    println!("{} points, {} colors in range", hist.total(), hist.num_colors());
    println!("{:>5} {:>10} {:>10} {:>8} {:>8} {:>8}", "order", "moment", "estimate", "exact", "add", "mult");
    for alpha in [1.5, 2.0, 3.0] {
        let moment: f64 = hist.weights().map(|w| (w / hist.total()).powf(alpha)).sum();
        let mut rng = cfg.rng();
        let m = estimate_moment(&index, &rect, alpha, 0.2, &cfg, &mut rng)?;
        let exact = index.exact(&rect, EntropyKind::renyi(alpha)?)?.value;
        let add = estimate_additive_renyi(&index, &rect, alpha, 0.2, &cfg, &mut rng)?;
        let mul = estimate_multiplicative_renyi(&index, &rect, alpha, 0.2, &cfg, &mut rng)?;
        println!(
            "{alpha:>5} {moment:>10.5} {:>10.5} {exact:>8.4} {:>8.4} {:>8.4}",
            m.value,
            add.value(),
            mul.value()
        );
    }
    Ok(())
}
