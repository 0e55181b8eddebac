//! Seeded pseudorandomness: small-bias bits, permutation families and sign sources.

pub mod field;
pub mod permutation;
pub mod seed;
pub mod signs;
pub mod small_bias;

pub use permutation::{permutation, FeistelPermutation, PermutationFamily, PermutationMode, TablePermutation};
pub use seed::Seed;
pub use signs::{collect_signs, ConstantSigns, FlippedSign, SignSource, StreamSigns};
pub use small_bias::{bias_bound, bit_at, certify_bias, generate_bits, BiasCertificate, BitSource, DEFAULT_FIELD_DEGREE};
