//! Exact range entropy on the nine-point demo file.
//!
//! Run with `cargo run --example exact_queries [path.csv]`.

use std::path::PathBuf;

use range_entropy::exact1d::Exact1DIndex;
use range_entropy::exactnd::ExactNDIndex;
use range_entropy::ingest::read_points_file;
use range_entropy::oracle::{demo_points, demo_rect, OracleIndex};
use range_entropy::{EntropyKind, QueryRect};

fn main() -> range_entropy::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo9.csv"));
    let points = read_points_file(&path)?;
    println!("{} points in {} dimensions, colors {:?}", points.len(), points.dim(), points.labels());

    let kinds = [EntropyKind::Shannon, EntropyKind::renyi(2.0)?];
    let everything = QueryRect::everything(points.dim());
    let scan = OracleIndex::build(&points);
    let grid = ExactNDIndex::build(&points, 0.5, &[2.0])?;
    for kind in kinds {
        let a = scan.query(&everything, kind)?;
        let b = grid.query(&everything, kind)?;
        println!("{kind:>12}: scan {:.6}  exactnd {:.6}", a.value, b.value);
    }

    // The same nine points are the box [2,6]^2 of a larger set, and also the
    // interval [2,6] of its projection onto the first axis.
    let full = demo_points();
    let line = Exact1DIndex::build(&full.project(0), 0.5, &[2.0])?;
    let plane = ExactNDIndex::build(&full, 0.5, &[2.0])?;
    for kind in kinds {
        let on_line = line.query(&QueryRect::interval(2.0, 6.0), kind)?;
        let in_box = plane.query(&demo_rect(), kind)?;
        println!("{kind:>12}: interval {:.6}  box {:.6}", on_line.value, in_box.value);
    }
    Ok(())
}
