//! Splitting a sequence into low-entropy buckets, and a plane into boxes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use range_entropy::oracle::{random_points, ColorLaw, OracleIndex};
use range_entropy::partition::{
    greedy_tree_split, maxpart_approx, maxpart_dp, sumpart_approx, ColorSequence, Objective, OracleBackend,
};
use range_entropy::{ColorId, EntropyKind};

fn main() -> range_entropy::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    // five segments of mostly one color
    let colors: Vec<ColorId> = (0..500)
        .map(|i| if rng.gen_bool(0.1) { rng.gen_range(0..5) } else { (i / 100) as ColorId })
        .collect();
    let seq = ColorSequence::new(colors, EntropyKind::Shannon);
    for (name, b) in [
        ("max, exact", maxpart_dp(&seq, 5)?),
        ("max, approx", maxpart_approx(&seq, 5, 0.1)?),
        ("sum, approx", sumpart_approx(&seq, 5, 0.1)?),
    ] {
        println!("{name:>12}: cuts {:?} objective {:.4}", b.cuts, b.objective);
    }

    let points = random_points(2_000, 2, 6, ColorLaw::Zipf(0.8), &mut rng);
    let oracle = OracleIndex::build(&points);
    let backend = OracleBackend { index: &oracle, kind: EntropyKind::Shannon };
    let tree = greedy_tree_split(&points, 6, Objective::Max, &backend)?;
    for &leaf in &tree.leaves() {
        let node = &tree.nodes[leaf];
        println!("box {:?}..{:?}: {} points, score {:.3}", node.rect.lo(), node.rect.hi(), node.points.len(), node.score);
    }
    Ok(())
}
