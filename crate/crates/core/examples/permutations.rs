//! Seeded permutation families with per-index forward and inverse evaluation.

use nearram::prg::{permutation, PermutationMode, Seed};

fn main() {
    let seed = Seed::from_u64(42);
    for mode in [PermutationMode::Shuffle, PermutationMode::Feistel] {
        let p = permutation(mode, &seed, 10);
        let images: Vec<usize> = (0..10).map(|i| p.forward(i)).collect();
        let back: Vec<usize> = images.iter().map(|&j| p.inverse(j)).collect();
        println!("{mode:?}: {images:?} -> inverse {back:?}");
    }

    // Feistel evaluates single points of huge domains without a table.
    let big = permutation(PermutationMode::Feistel, &seed, 3_000_000_000);
    let x = big.forward(123_456_789);
    println!("feistel on 3e9 points: 123456789 -> {x} -> {}", big.inverse(x));
}
