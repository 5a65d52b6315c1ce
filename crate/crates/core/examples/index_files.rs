//! Saving an index to disk and answering from the loaded copy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use range_entropy::exactnd::ExactNDIndex;
use range_entropy::oracle::{random_points, random_rect, ColorLaw};
use range_entropy::persist::{load_file, read_header, save_file, AnyIndex};
use range_entropy::EntropyKind;

fn main() -> range_entropy::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let points = random_points(3_000, 2, 16, ColorLaw::Uniform, &mut rng);
    let index = AnyIndex::ExactND(ExactNDIndex::build(&points, 0.5, &[2.0])?);

    let path = std::env::temp_dir().join("range-entropy-demo.rqe");
    save_file(&index, &path)?;
    let size = std::fs::metadata(&path)?.len();
    let kind = read_header(&mut std::fs::File::open(&path)?)?;
    println!("wrote {} ({size} bytes, {kind})", path.display());

    let (AnyIndex::ExactND(before), AnyIndex::ExactND(after)) = (&index, load_file(&path)?) else {
        unreachable!("saved an exactnd index");
    };
    for _ in 0..5 {
        let r = random_rect(2, 1.0, &mut rng);
        let a = before.query(&r, EntropyKind::Shannon)?.value;
        let b = after.query(&r, EntropyKind::Shannon)?.value;
        println!("{a:.12} {b:.12} {}", if a.to_bits() == b.to_bits() { "same" } else { "DIFFERENT" });
    }
    std::fs::remove_file(&path)?;
    Ok(())
}
