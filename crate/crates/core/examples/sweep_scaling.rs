//! Build and query cost of the deterministic sweep as the line grows.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use range_entropy::sweep1d::Sweep1DIndex;
use range_entropy::{ColoredPointSet, QueryRect};

fn main() {
    let eps: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.5);
    println!("n,colors,build_ms,runs,nodes,mean_query_nodes,query_us");
    for n in [1_000usize, 10_000, 100_000] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let k = (n / 2) as u32;
        let pts = ColoredPointSet::from_line((0..n).map(|i| (i as f64, rng.gen_range(0..k))));
        let t = Instant::now();
        let idx = Sweep1DIndex::build_shannon(&pts, eps).unwrap();
        let build = t.elapsed();
        let queries: Vec<QueryRect> = (0..20_000)
            .map(|_| {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(a..n);
                QueryRect::interval(a as f64, b as f64)
            })
            .collect();
        let t = Instant::now();
        let mut acc = 0.0;
        let mut nodes = 0usize;
        for q in &queries {
            let (s, st) = idx.query_with_stats(q).unwrap();
            acc += s.value;
            nodes += st.nodes;
        }
        let per = t.elapsed().as_secs_f64() * 1e6 / queries.len() as f64;
        let mean = nodes as f64 / queries.len() as f64;
        println!("{n},{k},{},{},{},{mean:.1},{per:.2}", build.as_millis(), idx.num_runs(), idx.num_nodes());
        std::hint::black_box(acc);
    }
}
