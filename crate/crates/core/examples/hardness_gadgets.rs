//! Reading a boolean matrix product and set disjointness off entropy queries.

use range_entropy::entropy::shannon_entropy;
use range_entropy::oracle::{oracle_entropy, MatrixGadget, SetGadget};
use range_entropy::EntropyKind;

fn main() -> range_entropy::Result<()> {
    let a = vec![vec![true, false, true], vec![false, true, false], vec![true, true, false]];
    let b = vec![vec![false, true, true], vec![true, true, true], vec![false, false, false]];
    let g = MatrixGadget::new(&a, &b);
    println!("product read from {} points:", g.points.len());
    for i in 0..3 {
        let row: Vec<u8> = (0..3)
            .map(|j| {
                let h = oracle_entropy(&g.points, &g.interval(i, j), EntropyKind::Shannon).unwrap().value;
                ((h - g.shannon_if_zero(i, j)).abs() > 1e-9) as u8
            })
            .collect();
        println!("  {row:?}");
    }

    let sets = vec![vec![1, 2, 3], vec![4, 5], vec![3, 6], vec![7]];
    let s = SetGadget::new(&sets);
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let h = shannon_entropy(&s.points.histogram_in(&s.rect(i, j)));
            let disjoint = (h.value - h.count.log2()).abs() < 1e-9;
            println!("{:?} and {:?}: {}", sets[i], sets[j], if disjoint { "disjoint" } else { "intersect" });
        }
    }
    Ok(())
}
