//! Powering-construction small-bias bits: random access, and an exhaustive bias certificate.

use nearram::prg::{bias_bound, certify_bias, BitSource, Seed};

fn main() -> nearram::Result<()> {
    // 128-bit seed: x and y in GF(2^64).
    let seed = Seed::from_hex("0123456789abcdef fedcba9876543210".replace(' ', "").as_str())?;
    let src = BitSource::new(&seed, 1 << 20, 64)?;
    let head: Vec<i8> = (0..16).map(|i| src.bit_at(i)).collect::<Result<_, _>>()?;
    println!("first 16 signs: {head:?}");
    println!("bit 999999 = {}", src.bit_at(999_999)?);
    println!("bias bound for 2^20 bits over GF(2^64): {:e}", src.delta());

    // Every seed of a tiny field, every subset of at most 4 positions.
    let cert = certify_bias(8, 16, 4)?;
    println!(
        "m=8, N=16: max bias {:.5} on {:?}, bound {:.5}, holds: {}",
        cert.max_bias,
        cert.worst_subset,
        bias_bound(16, 8),
        cert.holds()
    );
    Ok(())
}
