//! Lanczos iteration with full reorthogonalization for extreme eigenvalues
//! of a symmetric operator.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RitzPair {
    pub value: f64,
    /// `|beta_k * s_k|`, an upper bound on `||A y - theta y||` for the Ritz vector.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct LanczosResult {
    pub largest: RitzPair,
    pub smallest: RitzPair,
    pub steps: usize,
}

/// Runs up to `max_steps` Lanczos steps on `apply` (computes `y = A x`),
/// keeping every basis vector orthogonal to `deflate` when given.
pub fn lanczos_extremes(
    n: usize,
    apply: impl Fn(&[f64], &mut [f64]),
    deflate: Option<&[f64]>,
    max_steps: usize,
    seed: u64,
) -> LanczosResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let project = |v: &mut DVector<f64>| {
        if let Some(u) = deflate {
            let u = DVector::from_column_slice(u);
            let c = u.dot(v) / u.dot(&u);
            v.axpy(-c, &u, 1.0);
        }
    };
    let mut q = DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
    project(&mut q);
    q /= q.norm();

    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = DVector::zeros(n);
    let budget = max_steps.min(n.saturating_sub(usize::from(deflate.is_some()))).max(1);
    for k in 0..budget {
        apply(q.as_slice(), w.as_mut_slice());
        let a = q.dot(&w);
        alpha.push(a);
        basis.push(q.clone());
        // Full reorthogonalization, twice for stability.
        for _ in 0..2 {
            project(&mut w);
            for b in &basis {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        let bnorm = w.norm();
        if k + 1 == budget || bnorm < 1e-12 {
            beta.push(bnorm);
            break;
        }
        beta.push(bnorm);
        q = &w / bnorm;
    }

    let k = alpha.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = t.symmetric_eigen();
    let last_beta = beta[k - 1];
    let pair = |i: usize| RitzPair {
        value: eig.eigenvalues[i],
        residual: (last_beta * eig.eigenvectors[(k - 1, i)]).abs(),
    };
    let (mut imax, mut imin) = (0, 0);
    for i in 0..k {
        if eig.eigenvalues[i] > eig.eigenvalues[imax] {
            imax = i;
        }
        if eig.eigenvalues[i] < eig.eigenvalues[imin] {
            imin = i;
        }
    }
    LanczosResult {
        largest: pair(imax),
        smallest: pair(imin),
        steps: k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_extremes() {
        let diag: Vec<f64> = (0..200).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let apply = |x: &[f64], y: &mut [f64]| {
            for i in 0..x.len() {
                y[i] = diag[i] * x[i];
            }
        };
        let r = lanczos_extremes(200, apply, None, 200, 1);
        let max = diag.iter().cloned().fold(f64::MIN, f64::max);
        let min = diag.iter().cloned().fold(f64::MAX, f64::min);
        assert!((r.largest.value - max).abs() < 1e-8);
        assert!((r.smallest.value - min).abs() < 1e-8);
    }
}
