//! The non-backtracking operator of an edge-signed multigraph.
//!
//! Rows and columns are arcs (`2e` and `2e + 1` for edge `e`). `B[a, b]` is
//! the sign of `b`'s edge when `b` leaves the head of `a` and `b` is not the
//! reversal of `a`. With parallel edges this forbids only the reversal along
//! the same edge.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{reverse_arc, Graph};
use crate::lifts::SignedGraph;

#[derive(Debug, Clone)]
pub struct NonBacktracking {
    /// `succ[a]` lists `(b, B[a, b])`.
    succ: Vec<Vec<(usize, i8)>>,
}

impl NonBacktracking {
    pub fn new(g: &Graph, signs: Option<&[i8]>) -> Self {
        let succ = (0..g.arc_count())
            .map(|a| {
                let head = g.arc_head(a);
                g.incident(head)
                    .iter()
                    .filter(|inc| inc.arc != reverse_arc(a))
                    .map(|inc| (inc.arc, signs.map_or(1, |s| s[inc.edge])))
                    .collect()
            })
            .collect();
        NonBacktracking { succ }
    }

    pub fn dim(&self) -> usize {
        self.succ.len()
    }

    pub fn row(&self, a: usize) -> &[(usize, i8)] {
        &self.succ[a]
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (a, row) in self.succ.iter().enumerate() {
            for &(b, s) in row {
                m[(a, b)] += f64::from(s);
            }
        }
        m
    }

    pub fn apply(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_iterator(
            self.dim(),
            self.succ
                .iter()
                .map(|row| row.iter().map(|&(b, s)| x[b] * f64::from(s)).sum::<Complex64>()),
        )
    }
}

pub fn build_b(sg: &SignedGraph) -> NonBacktracking {
    NonBacktracking::new(sg.base(), Some(sg.signing().as_slice()))
}

pub fn nb_eigenvalues(g: &Graph, signs: Option<&[i8]>) -> Result<Vec<Complex64>> {
    if g.arc_count() == 0 {
        return Ok(Vec::new());
    }
    general_eigenvalues(NonBacktracking::new(g, signs).to_dense())
}

pub fn exact_spectral_radius(g: &Graph, signs: Option<&[i8]>) -> Result<f64> {
    Ok(nb_eigenvalues(g, signs)?.iter().fold(0.0, |m, z| m.max(z.norm())))
}

/// Eigenvalues of a real square matrix via a real Schur form.
///
/// The QR iteration can stall on highly structured matrices, so on failure
/// it is retried after a random orthogonal similarity transform.
pub fn general_eigenvalues(m: DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    let limit = 200 * n.max(10);
    if let Some(s) = Schur::try_new(m.clone(), f64::EPSILON, limit) {
        return Ok(s.complex_eigenvalues().iter().copied().collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    for _ in 0..8 {
        let r = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        let q = r.qr().q();
        let conj = &q * &m * q.transpose();
        if let Some(s) = Schur::try_new(conj, f64::EPSILON, limit) {
            return Ok(s.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::Singular(format!("Schur iteration did not converge on a {n}x{n} matrix")))
}

/// `ln tr(B^l (B^T)^l)`, i.e. the log squared Frobenius norm of `B^l`,
/// summed row by row with rescaling so large powers cannot overflow.
/// Returns `-inf` when `B^l = 0`.
pub fn log_trace_power(g: &Graph, signs: Option<&[i8]>, ell: usize) -> f64 {
    let b = NonBacktracking::new(g, signs);
    let dim = b.dim();
    let mut acc = vec![0.0f64; dim];
    let mut mark = vec![false; dim];
    let mut logs = Vec::with_capacity(dim);
    for a in 0..dim {
        let mut cur: Vec<(usize, f64)> = vec![(a, 1.0)];
        let mut log_scale = 0.0;
        for _ in 0..ell {
            let mut touched = Vec::new();
            for &(x, v) in &cur {
                for &(y, s) in b.row(x) {
                    if !mark[y] {
                        mark[y] = true;
                        touched.push(y);
                    }
                    acc[y] += v * f64::from(s);
                }
            }
            cur = touched
                .into_iter()
                .map(|y| {
                    mark[y] = false;
                    (y, std::mem::take(&mut acc[y]))
                })
                .filter(|&(_, v)| v != 0.0)
                .collect();
            let top = cur.iter().fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
            if top > 1e100 {
                cur.iter_mut().for_each(|(_, v)| *v /= top);
                log_scale += top.ln();
            }
        }
        let sq: f64 = cur.iter().map(|&(_, v)| v * v).sum();
        if sq > 0.0 {
            logs.push(sq.ln() + 2.0 * log_scale);
        }
    }
    let Some(max) = logs.iter().copied().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln()
}

#[derive(Debug, Clone, Serialize)]
pub struct IharaBassCheck {
    pub q: usize,
    pub excess: i64,
    pub points: Vec<(f64, f64)>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// `n` points `r e^{i theta}` with uniform angles.
pub fn sample_points(n: usize, radius: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::from_polar(radius, rng.random::<f64>() * std::f64::consts::TAU))
        .collect()
}

fn require_regular_loopless(sg: &SignedGraph) -> Result<()> {
    if sg.base().has_loops() {
        return Err(Error::Regime("non-backtracking checks exclude loops".into()));
    }
    Ok(())
}

/// `max |det(I - zB) - (1 - z^2)^exc det((1 + q z^2) I - z A)|` over `points`.
pub fn ihara_bass_residual(sg: &SignedGraph, points: &[Complex64]) -> Result<IharaBassCheck> {
    require_regular_loopless(sg)?;
    let q = sg.d().saturating_sub(1);
    let exc = sg.base().excess();
    let b = build_b(sg).to_dense().map(|x| Complex64::new(x, 0.0));
    let a = sg.adjacency().map(|x| Complex64::new(x, 0.0));
    let (m, n) = (b.nrows(), a.nrows());
    let mut residuals = Vec::with_capacity(points.len());
    for &z in points {
        let pre = Complex64::new(1.0, 0.0) - z * z;
        if exc < 0 && pre.norm() < 1e-12 {
            return Err(Error::Singular(format!("(1 - z^2)^{exc} has a pole at z = {z}")));
        }
        let lhs = (DMatrix::<Complex64>::identity(m, m) - &b * z).determinant();
        let rhs_mat = DMatrix::<Complex64>::identity(n, n) * (Complex64::new(1.0, 0.0) + z * z * q as f64) - &a * z;
        let rhs = pre.powi(exc as i32) * rhs_mat.determinant();
        residuals.push((lhs - rhs).norm());
    }
    Ok(IharaBassCheck {
        q,
        excess: exc,
        points: points.iter().map(|z| (z.re, z.im)).collect(),
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        residuals,
    })
}

/// The two roots of `lambda^2 - mu lambda + q = 0`.
pub fn nb_roots(mu: f64, q: f64) -> [Complex64; 2] {
    let disc = Complex64::new(mu * mu - 4.0 * q, 0.0).sqrt();
    [(mu + disc) / 2.0, (mu - disc) / 2.0]
}

/// Builds `g_{vw} = w(vw) f_v - lambda f_w` from an eigenpair `(mu, f)` of the
/// signed adjacency matrix, so that `B g = lambda g`.
pub fn lift_eigenvector(
    sg: &SignedGraph,
    f: &DVector<f64>,
    mu: f64,
    lambda: Complex64,
    tol: f64,
) -> Result<DVector<Complex64>> {
    let fnorm = f.norm();
    if fnorm == 0.0 {
        return Err(Error::NotEigenvector { residual: f64::INFINITY });
    }
    let residual = (sg.adjacency() * f - f * mu).norm() / fnorm;
    if residual > tol {
        return Err(Error::NotEigenvector { residual });
    }
    for bad in [0.0, 1.0, -1.0] {
        if (lambda - bad).norm() < 1e-9 {
            return Err(Error::DegenerateEigenvalue(format!("lambda = {lambda}")));
        }
    }
    let q = sg.d() as f64 - 1.0;
    let char_res = (lambda * lambda - lambda * mu + q).norm();
    if char_res > 1e-8 * (1.0 + lambda.norm_sqr()) {
        return Err(Error::DegenerateEigenvalue(format!(
            "lambda = {lambda} does not solve lambda^2 - {mu} lambda + {q} = 0"
        )));
    }
    let g = sg.base();
    Ok(DVector::from_fn(g.arc_count(), |a, _| {
        let e = a / 2;
        let (u, v) = (g.arc_tail(a), g.arc_head(a));
        Complex64::new(sg.weight(e) * f[u], 0.0) - lambda * f[v]
    }))
}

/// `||B g - lambda g|| / ||g||`.
pub fn eigenvector_residual(sg: &SignedGraph, g: &DVector<Complex64>, lambda: Complex64) -> f64 {
    let bg = build_b(sg).apply(g);
    (bg - g * lambda).norm() / g.norm()
}

/// The non-backtracking magnitude matching adjacency magnitude
/// `2 sqrt(d - 1) + eps`: `sqrt(q) + sqrt(eps) sqrt(sqrt(q) + eps/4) + eps/2`.
pub fn translate_eigenvalue_bound(d: usize, eps: f64) -> f64 {
    let sq = (d as f64 - 1.0).sqrt();
    sq + eps.sqrt() * (sq + eps / 4.0).sqrt() + eps / 2.0
}

/// The eigenvalues of `B` predicted from the adjacency spectrum: both roots
/// for each adjacency eigenvalue plus `exc` copies each of `+1` and `-1`
/// (removed instead when `exc < 0`).
pub fn predicted_nb_spectrum(sg: &SignedGraph) -> Vec<Complex64> {
    let q = sg.d() as f64 - 1.0;
    let mut out: Vec<Complex64> = crate::spectra::signed_spectrum(sg)
        .into_iter()
        .flat_map(|mu| nb_roots(mu, q))
        .collect();
    let exc = sg.base().excess();
    for _ in 0..exc.unsigned_abs() {
        for s in [1.0, -1.0] {
            let z = Complex64::new(s, 0.0);
            if exc > 0 {
                out.push(z);
            } else if let Some(i) = nearest(&out, z) {
                out.swap_remove(i);
            }
        }
    }
    out
}

fn nearest(values: &[Complex64], z: Complex64) -> Option<usize> {
    (0..values.len()).min_by(|&i, &j| (values[i] - z).norm().total_cmp(&(values[j] - z).norm()))
}

#[derive(Debug, Clone, Serialize)]
pub struct CompletenessCheck {
    pub dimension: usize,
    pub predicted: usize,
    /// Largest distance in a greedy matching of predicted to computed eigenvalues.
    pub max_mismatch: f64,
}

/// Matches the predicted spectrum against a dense eigensolve of `B`.
pub fn completeness_check(sg: &SignedGraph) -> Result<CompletenessCheck> {
    require_regular_loopless(sg)?;
    let predicted = predicted_nb_spectrum(sg);
    let mut computed = nb_eigenvalues(sg.base(), Some(sg.signing().as_slice()))?;
    let dimension = computed.len();
    let mut max_mismatch: f64 = if predicted.len() == dimension { 0.0 } else { f64::INFINITY };
    for z in &predicted {
        if let Some(i) = nearest(&computed, *z) {
            max_mismatch = max_mismatch.max((computed[i] - z).norm());
            computed.swap_remove(i);
        }
    }
    Ok(CompletenessCheck {
        dimension,
        predicted: predicted.len(),
        max_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use crate::prg::{Seed, StreamSigns};

    #[test]
    fn row_counts() {
        let b = build_b(&SignedGraph::unsigned(named::petersen()));
        assert_eq!(b.dim(), 30);
        assert!((0..30).all(|a| b.row(a).len() == 2));
        let single = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(NonBacktracking::new(&single, None).to_dense(), DMatrix::zeros(2, 2));
    }

    #[test]
    fn k4_spectrum() {
        let k4 = SignedGraph::unsigned(named::complete(4));
        let mut ev = nb_eigenvalues(k4.base(), None).unwrap();
        ev.sort_by(|a, b| b.re.total_cmp(&a.re));
        assert!((ev[0] - 2.0).norm() < 1e-8);
        let c = completeness_check(&k4).unwrap();
        assert_eq!(c.predicted, 12);
        assert!(c.max_mismatch < 1e-4, "{c:?}");
        let r7 = Complex64::new(-0.5, 7f64.sqrt() / 2.0);
        assert_eq!(ev.iter().filter(|z| (*z - r7).norm() < 1e-6).count(), 3);
    }

    #[test]
    fn ihara_bass_at_fixed_points() {
        let k4 = SignedGraph::unsigned(named::complete(4));
        let c = ihara_bass_residual(&k4, &[Complex64::new(1.0 / 3.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert!(c.max_residual < 1e-8);
        assert_eq!(c.residuals[1], 0.0);
    }

    #[test]
    fn lifted_eigenvectors_k4() {
        let k4 = SignedGraph::unsigned(named::complete(4));
        let ones = DVector::from_element(4, 1.0);
        let g = lift_eigenvector(&k4, &ones, 3.0, Complex64::new(2.0, 0.0), 1e-9).unwrap();
        assert!(eigenvector_residual(&k4, &g, Complex64::new(2.0, 0.0)) < 1e-12);
        let f = DVector::from_vec(vec![1.0, -1.0, 0.0, 0.0]);
        let lam = nb_roots(-1.0, 2.0)[0];
        let g = lift_eigenvector(&k4, &f, -1.0, lam, 1e-9).unwrap();
        assert!(eigenvector_residual(&k4, &g, lam) < 1e-12);
        // the other root of mu = 3 is 1, excluded
        assert!(lift_eigenvector(&k4, &ones, 3.0, Complex64::new(1.0, 0.0), 1e-9).is_err());
        assert!(lift_eigenvector(&k4, &DVector::zeros(4), 3.0, Complex64::new(2.0, 0.0), 1e-9).is_err());
    }

    #[test]
    fn multigraph_eigenvectors() {
        // theta-like multigraph with parallel edges: the edge-based rule matters here
        let g = named::regular(2, 3, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let sg = SignedGraph::new(g, crate::lifts::EdgeSigning::new(vec![1, -1, 1]).unwrap()).unwrap();
        let eig = sg.adjacency().symmetric_eigen();
        for i in 0..2 {
            let mu = eig.eigenvalues[i];
            let f = eig.eigenvectors.column(i).into_owned();
            for lam in nb_roots(mu, 2.0) {
                let g = lift_eigenvector(&sg, &f, mu, lam, 1e-9).unwrap();
                assert!(eigenvector_residual(&sg, &g, lam) < 1e-10);
            }
        }
        let pts = sample_points(8, 0.1, 3);
        assert!(ihara_bass_residual(&sg, &pts).unwrap().max_residual < 1e-10);
    }

    #[test]
    fn translate_bound_values() {
        assert!((translate_eigenvalue_bound(3, 0.0) - 2f64.sqrt()).abs() < 1e-15);
        assert!((translate_eigenvalue_bound(3, 0.1) - 1.843_583_245_185_664).abs() < 1e-12);
        let mut prev = 0.0;
        for i in 0..100 {
            let v = translate_eigenvalue_bound(5, i as f64 * 0.05);
            assert!(v >= prev);
            prev = v;
        }
        // the bound is the larger root at mu = 2 sqrt(q) + eps
        let [hi, _] = nb_roots(2.0 * 2f64.sqrt() + 0.1, 2.0);
        assert!((hi.re - translate_eigenvalue_bound(3, 0.1)).abs() < 1e-12);
    }

    #[test]
    fn log_trace_matches_dense() {
        let g = named::petersen();
        let src = StreamSigns::new(&Seed::from_u64(4));
        let sg = crate::lifts::sign_from_source(g, &src, 0);
        let b = build_b(&sg).to_dense();
        for ell in 1..5 {
            let p = b.pow(ell as u32);
            let t = (&p * p.transpose()).trace();
            let l = log_trace_power(sg.base(), Some(sg.signing().as_slice()), ell);
            assert!((l.exp() - t).abs() < 1e-6 * t, "{ell}: {} vs {t}", l.exp());
        }
    }
}
