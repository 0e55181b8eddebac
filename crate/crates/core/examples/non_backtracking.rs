//! Signed non-backtracking spectra: Ihara-Bass, eigenvector lifting and completeness.

use nearram::graph::named;
use nearram::lifts::sign_from_source;
use nearram::nb::{
    completeness_check, eigenvector_residual, exact_spectral_radius, ihara_bass_residual, lift_eigenvector, nb_roots,
    sample_points, translate_eigenvalue_bound,
};
use nearram::prg::{Seed, StreamSigns};

fn main() -> nearram::Result<()> {
    let sg = sign_from_source(named::petersen(), &StreamSigns::new(&Seed::from_u64(9)), 0);

    let ib = ihara_bass_residual(&sg, &sample_points(16, 0.2, 1))?;
    println!("Ihara-Bass on signed Petersen: max residual {:.2e} (excess {})", ib.max_residual, ib.excess);

    let eig = sg.adjacency().symmetric_eigen();
    for i in 0..eig.eigenvalues.len() {
        let mu = eig.eigenvalues[i];
        let f = eig.eigenvectors.column(i).into_owned();
        for lam in nb_roots(mu, 2.0) {
            match lift_eigenvector(&sg, &f, mu, lam, 1e-9) {
                Ok(g) => println!("mu {mu:+.4} -> lambda {lam:.4}: residual {:.1e}", eigenvector_residual(&sg, &g, lam)),
                Err(e) => println!("mu {mu:+.4} -> lambda {lam:.4}: skipped ({e})"),
            }
        }
    }

    let c = completeness_check(&sg)?;
    println!("predicted {} of {} eigenvalues, worst mismatch {:.1e}", c.predicted, c.dimension, c.max_mismatch);
    println!(
        "rho(B) = {:.6}; adjacency threshold 2 sqrt 2 + 0.1 corresponds to {:.6}",
        exact_spectral_radius(sg.base(), Some(sg.signing().as_slice()))?,
        translate_eigenvalue_bound(3, 0.1)
    );
    Ok(())
}
