//! A signed 2-lift and the union of the base and signed spectra.

use nearram::graph::named;
use nearram::lifts::{deck_is_automorphism, sign_from_source, two_lift, verify_spectrum_union};
use nearram::prg::{Seed, StreamSigns};
use nearram::spectra::{nontrivial_lambda, signed_spectrum, spectral_radius};
use nearram::structure::bicycle_free_radius;

fn main() {
    let base = named::cube();
    let sg = sign_from_source(base, &StreamSigns::new(&Seed::from_u64(3)), 0);
    println!("signs: {:?}", sg.signing().as_slice());

    let lift = two_lift(&sg);
    println!("lift: {} vertices, simple: {}", lift.vertex_count(), lift.is_simple());
    println!("deck swap is an automorphism: {}", deck_is_automorphism(&lift));

    let u = verify_spectrum_union(&sg, 1e-8);
    println!("spectrum union holds: {} (max deviation {:.1e})", u.holds, u.max_deviation);
    println!(
        "lambda(lift) = {:.6} = max(lambda(base), rho(signed)) = max({:.6}, {:.6})",
        nontrivial_lambda(&u.lift),
        nontrivial_lambda(&nearram::spectra::adjacency_spectrum(sg.base())),
        spectral_radius(&signed_spectrum(&sg))
    );
    println!(
        "bicycle-free radius: base {:?}, lift {:?}",
        bicycle_free_radius(sg.base()),
        bicycle_free_radius(&lift)
    );
}
