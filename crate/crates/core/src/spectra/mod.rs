//! Adjacency spectra, the near-Ramanujan verdict and non-backtracking radii.

mod lanczos;

pub use lanczos::{lanczos_extremes, LanczosResult, RitzPair};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lifts::SignedGraph;
use crate::nb;

pub const DENSE_CAP: usize = 4096;
pub const THRESHOLD_TOLERANCE: f64 = 1e-6;
/// Largest `2|E|` for which the non-backtracking matrix is eigensolved.
pub const NB_DENSE_CAP: usize = 2048;

/// Eigenvalues of a symmetric matrix, largest first.
pub fn symmetric_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

pub fn adjacency_spectrum(g: &Graph) -> Vec<f64> {
    symmetric_eigenvalues(g.adjacency_matrix())
}

pub fn signed_spectrum(sg: &SignedGraph) -> Vec<f64> {
    symmetric_eigenvalues(sg.adjacency())
}

/// `2 sqrt(d - 1)`.
pub fn ramanujan_bound(d: usize) -> f64 {
    2.0 * ((d as f64) - 1.0).sqrt()
}

/// Largest nontrivial eigenvalue magnitude of an unsigned spectrum.
pub fn nontrivial_lambda(spectrum: &[f64]) -> f64 {
    match spectrum.len() {
        0 | 1 => 0.0,
        n => spectrum[1].max(spectrum[n - 1].abs()),
    }
}

/// Largest eigenvalue magnitude of a signed spectrum.
pub fn spectral_radius(spectrum: &[f64]) -> f64 {
    spectrum.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ramanujan,
    EpsNearRamanujan,
    Above,
}

impl Verdict {
    pub fn classify(lambda: f64, d: usize, eps: f64, tol: f64) -> Self {
        let t = ramanujan_bound(d);
        if lambda <= t + tol {
            Verdict::Ramanujan
        } else if lambda <= t + eps + tol {
            Verdict::EpsNearRamanujan
        } else {
            Verdict::Above
        }
    }

    pub fn passes(self) -> bool {
        self != Verdict::Above
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy)]
pub struct SpectrumOptions {
    pub eps: f64,
    pub tol: f64,
    pub dense_cap: usize,
    pub lanczos_steps: usize,
    /// Also eigensolve the non-backtracking matrix when small enough.
    pub with_rho_b: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            eps: 0.0,
            tol: THRESHOLD_TOLERANCE,
            dense_cap: DENSE_CAP,
            lanczos_steps: 300,
            with_rho_b: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralReport {
    pub n: usize,
    pub d: usize,
    pub signed: bool,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda_n: f64,
    /// `max(lambda2, |lambda_n|)` unsigned, spectral radius signed.
    pub lambda: f64,
    pub rho_b: Option<f64>,
    pub threshold: f64,
    pub eps: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub method: Method,
    /// Ritz residual bound for iterative estimates, zero when dense.
    pub residual: f64,
}

fn apply_weighted(g: &Graph, weights: Option<&[i8]>, x: &[f64], y: &mut [f64]) {
    for (v, yv) in y.iter_mut().enumerate() {
        *yv = g
            .incident(v)
            .iter()
            .map(|inc| weights.map_or(1.0, |w| f64::from(w[inc.edge])) * x[inc.neighbor])
            .sum();
    }
}

fn analyze(g: &Graph, weights: Option<&[i8]>, d: usize, opts: &SpectrumOptions) -> SpectralReport {
    let n = g.vertex_count();
    let signed = weights.is_some();
    let (lambda1, lambda2, lambda_n, method, residual);
    if n <= opts.dense_cap {
        let m = match weights {
            Some(w) => g.weighted_adjacency(|e| f64::from(w[e])),
            None => g.adjacency_matrix(),
        };
        let ev = symmetric_eigenvalues(m);
        lambda1 = ev[0];
        lambda2 = *ev.get(1).unwrap_or(&ev[0]);
        lambda_n = ev[n - 1];
        method = Method::Dense;
        residual = 0.0;
    } else {
        let apply = |x: &[f64], y: &mut [f64]| apply_weighted(g, weights, x, y);
        let ones = vec![1.0; n];
        // The all-ones vector is an exact eigenvector (eigenvalue d) unsigned.
        let deflate = if signed { None } else { Some(ones.as_slice()) };
        let r = lanczos_extremes(n, apply, deflate, opts.lanczos_steps, 0x5eed);
        if signed {
            lambda1 = r.largest.value;
            lambda2 = r.largest.value;
        } else {
            lambda1 = d as f64;
            lambda2 = r.largest.value;
        }
        lambda_n = r.smallest.value;
        method = Method::Lanczos;
        residual = r.largest.residual.max(r.smallest.residual);
    }
    let lambda = if signed {
        lambda1.abs().max(lambda_n.abs())
    } else {
        lambda2.max(lambda_n.abs())
    };
    SpectralReport {
        n,
        d,
        signed,
        lambda1,
        lambda2,
        lambda_n,
        lambda,
        rho_b: None,
        threshold: ramanujan_bound(d),
        eps: opts.eps,
        verdict: Verdict::classify(lambda, d, opts.eps, opts.tol),
        tolerance: opts.tol,
        method,
        residual,
    }
}

pub fn spectral_report(g: &Graph, d: usize, opts: &SpectrumOptions) -> SpectralReport {
    let mut r = analyze(g, None, d, opts);
    if opts.with_rho_b && 2 * g.edge_count() <= NB_DENSE_CAP && !g.has_loops() {
        r.rho_b = nb::exact_spectral_radius(g, None).ok();
    }
    r
}

pub fn signed_report(sg: &SignedGraph, opts: &SpectrumOptions) -> SpectralReport {
    let mut r = analyze(sg.base(), Some(sg.signing().as_slice()), sg.d(), opts);
    if opts.with_rho_b && 2 * sg.edge_count() <= NB_DENSE_CAP && !sg.base().has_loops() {
        r.rho_b = nb::exact_spectral_radius(sg.base(), Some(sg.signing().as_slice())).ok();
    }
    r
}

/// Whether `lambda(g) <= rho + tol` for an unsigned `d`-regular graph.
///
/// Dense up to `opts.dense_cap` vertices; beyond that a Lanczos estimate is
/// used and a value within its residual band of `rho` is reported as
/// indeterminate.
pub fn decide_threshold(g: &Graph, d: usize, rho: f64, opts: &SpectrumOptions) -> Result<bool> {
    let r = analyze(g, None, d, opts);
    let band = r.residual.max(opts.tol);
    if r.method == Method::Lanczos && (r.lambda - rho).abs() <= band {
        return Err(Error::Indeterminate {
            estimate: r.lambda,
            threshold: rho,
            band,
        });
    }
    Ok(r.lambda <= rho + opts.tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct NbRadius {
    pub ell: usize,
    /// `tr(B^l (B^T)^l)^(1 / 2l)`, an upper bound on `rho(B)`.
    pub trace_bound: f64,
    pub exact: Option<f64>,
}

pub fn nb_spectral_radius(sg: &SignedGraph, ell: usize) -> Result<NbRadius> {
    if ell == 0 {
        return Err(Error::Regime("ell must be at least 1".into()));
    }
    let signs = Some(sg.signing().as_slice());
    let log_trace = nb::log_trace_power(sg.base(), signs, ell);
    let exact = (2 * sg.edge_count() <= NB_DENSE_CAP && !sg.base().has_loops())
        .then(|| nb::exact_spectral_radius(sg.base(), signs).ok())
        .flatten();
    Ok(NbRadius {
        ell,
        trace_bound: (log_trace / (2.0 * ell as f64)).exp(),
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn named_spectra() {
        assert!(close(&adjacency_spectrum(&named::complete(4)), &[3.0, -1.0, -1.0, -1.0], 1e-10));
        assert!(close(&adjacency_spectrum(&named::cycle(6)), &[2.0, 1.0, 1.0, -1.0, -1.0, -2.0], 1e-10));
        let p = spectral_report(&named::petersen(), 3, &SpectrumOptions::default());
        assert!((p.lambda1 - 3.0).abs() < 1e-10);
        assert!((p.lambda - 2.0).abs() < 1e-10);
        assert_eq!(p.verdict, Verdict::Ramanujan);
    }

    #[test]
    fn thresholds() {
        let o = SpectrumOptions::default();
        let p = named::petersen();
        assert!(decide_threshold(&p, 3, ramanujan_bound(3), &o).unwrap());
        assert!(!decide_threshold(&p, 3, 1.9, &o).unwrap());
        let two_k4 = named::disjoint_union(&named::complete(4), &named::complete(4));
        assert!(!decide_threshold(&two_k4, 3, ramanujan_bound(3), &o).unwrap());
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        use crate::models::{Model, ModelSpec};
        use crate::prg::Seed;
        let g = ModelSpec::new(Model::Lift, 400, 3).sample(&Seed::from_u64(2)).unwrap();
        let dense = spectral_report(&g, 3, &SpectrumOptions::default());
        let it = spectral_report(&g, 3, &SpectrumOptions { dense_cap: 10, ..Default::default() });
        assert_eq!(it.method, Method::Lanczos);
        assert!((dense.lambda2 - it.lambda2).abs() < 1e-6, "{} {}", dense.lambda2, it.lambda2);
        assert!((dense.lambda_n - it.lambda_n).abs() < 1e-6);
    }

    #[test]
    fn nb_radius_of_small_graphs() {
        let k4 = SignedGraph::unsigned(named::complete(4));
        let r = nb_spectral_radius(&k4, 6).unwrap();
        assert!((r.exact.unwrap() - 2.0).abs() < 1e-8);
        assert!(r.trace_bound >= 2.0 - 1e-9);
        let c3 = SignedGraph::unsigned(named::cycle(3));
        let r = nb_spectral_radius(&c3, 4).unwrap();
        assert!((r.exact.unwrap() - 1.0).abs() < 1e-8);
        assert!(r.trace_bound >= 1.0 - 1e-9);
    }
}
