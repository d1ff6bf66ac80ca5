//! Lowest eigenpairs of the discrete Dirichlet Laplacian, packaged as a
//! `Spectrum` with normalized eigenfunctions.
//!
//! The iterative path is shift-invert Lanczos at shift zero: the operator is
//! positive definite, so one banded Cholesky factorization turns the lowest
//! eigenvalues into the dominant ones of the inverse. Full reorthogonalization
//! plus explicit locking handles the degenerate clusters that symmetric
//! domains produce. A dense path (matrix dimension <= 2000) doubles as the
//! reference oracle in tests.

use std::io::Write;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Domain, InteriorGrid, Point};
use crate::operator::{GridOperator, SparseSymMatrix};
use crate::oracles::bessel::bessel_j_int;

/// Relative discretization budget: eigenvalues with lambda * h^2 above this
/// carry more than ~0.2% second-order stencil error and are not trusted.
pub const RESOLUTION_BUDGET: f64 = 0.02;

/// Relative gap below which eigenvalues are treated as one degenerate cluster.
pub const CLUSTER_GAP: f64 = 1e-8;

pub const DEFAULT_SEED: u64 = 0x5EED;

const DENSE_LIMIT: usize = 2000;
/// Below this dimension the solver routes to the dense path outright.
const DENSE_ROUTE: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumSource {
    Discrete { h: f64 },
    Analytic { oracle: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Cos,
    Sin,
}

/// Closed-form eigenfunction of an analytic spectrum, with its index
/// bookkeeping.
#[derive(Debug, Clone)]
pub enum ModeShape {
    /// prod_i sqrt(2/L_i) sin(k_i pi x_i / L_i) on a box.
    Box { indices: Vec<u32>, lengths: Vec<f64> },
    /// norm * J_nu(zero * rho / r) * {cos, sin}(nu theta) on a disk.
    Disk { nu: u32, k: u32, parity: Parity, r: f64, zero: f64, norm: f64 },
}

impl ModeShape {
    pub fn eval(&self, p: &Point) -> f64 {
        match self {
            ModeShape::Box { indices, lengths } => {
                let mut v = 1.0;
                for ((&k, &l), &c) in indices.iter().zip(lengths).zip(p.coords()) {
                    v *= (2.0 / l).sqrt() * (k as f64 * std::f64::consts::PI * c / l).sin();
                }
                v
            }
            ModeShape::Disk { nu, parity, r, zero, norm, .. } => {
                let rho = p.norm();
                let theta = p.y().atan2(p.x());
                let radial = bessel_j_int(*nu, zero * rho / r);
                let angular = match parity {
                    Parity::Cos => (*nu as f64 * theta).cos(),
                    Parity::Sin => (*nu as f64 * theta).sin(),
                };
                norm * radial * angular
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            ModeShape::Box { indices, .. } => {
                let parts: Vec<String> = indices.iter().map(|k| k.to_string()).collect();
                format!("k=({})", parts.join(","))
            }
            ModeShape::Disk { nu, k, parity, .. } => {
                let p = match parity {
                    Parity::Cos => "cos",
                    Parity::Sin => "sin",
                };
                format!("nu={nu} k={k} {p}")
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Modes {
    /// Coefficients over interior grid points, normalized so that
    /// sum_x u(x)^2 h^n = 1.
    Grid { grid: Arc<InteriorGrid>, vectors: Vec<Vec<f64>> },
    Closed(Vec<ModeShape>),
}

/// Ascending eigenvalues with evaluable eigenfunctions and the trusted cutoff.
#[derive(Debug, Clone)]
pub struct Spectrum {
    source: SpectrumSource,
    domain: Domain,
    eigenvalues: Vec<f64>,
    modes: Modes,
    lambda_max_trusted: f64,
}

impl Spectrum {
    pub fn from_grid(
        source_h: f64,
        domain: Domain,
        grid: Arc<InteriorGrid>,
        eigenvalues: Vec<f64>,
        vectors: Vec<Vec<f64>>,
    ) -> Self {
        let lambda_k = eigenvalues.last().copied().unwrap_or(0.0);
        let lambda_max_trusted = (RESOLUTION_BUDGET / (source_h * source_h)).min(lambda_k);
        Spectrum {
            source: SpectrumSource::Discrete { h: source_h },
            domain,
            eigenvalues,
            modes: Modes::Grid { grid, vectors },
            lambda_max_trusted,
        }
    }

    pub fn from_modes(
        oracle: &str,
        domain: Domain,
        eigenvalues: Vec<f64>,
        shapes: Vec<ModeShape>,
        lambda_max: f64,
    ) -> Self {
        Spectrum {
            source: SpectrumSource::Analytic { oracle: oracle.to_string() },
            domain,
            eigenvalues,
            modes: Modes::Closed(shapes),
            lambda_max_trusted: lambda_max,
        }
    }

    pub fn source(&self) -> &SpectrumSource {
        &self.source
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, j: usize) -> f64 {
        self.eigenvalues[j]
    }

    /// Largest lambda at which the spectrum is trusted: the discretization
    /// rule lambda h^2 <= 0.02 clamped by the last computed eigenvalue, or the
    /// generation cutoff for analytic spectra.
    pub fn resolved_cutoff(&self) -> f64 {
        self.lambda_max_trusted
    }

    /// Evaluate the j-th eigenfunction at a point. Discrete spectra use
    /// multilinear interpolation between grid values, with the eliminated
    /// boundary layer contributing zero.
    pub fn eval(&self, j: usize, p: &Point) -> f64 {
        match &self.modes {
            Modes::Closed(shapes) => shapes[j].eval(p),
            Modes::Grid { grid, vectors } => interpolate(grid, &vectors[j], p),
        }
    }

    pub fn mode_label(&self, j: usize) -> String {
        match &self.modes {
            Modes::Closed(shapes) => shapes[j].label(),
            Modes::Grid { .. } => format!("grid mode {}", j + 1),
        }
    }

    pub fn grid(&self) -> Option<&Arc<InteriorGrid>> {
        match &self.modes {
            Modes::Grid { grid, .. } => Some(grid),
            Modes::Closed(_) => None,
        }
    }

    pub fn grid_vector(&self, j: usize) -> Option<&[f64]> {
        match &self.modes {
            Modes::Grid { vectors, .. } => Some(&vectors[j]),
            Modes::Closed(_) => None,
        }
    }

    /// Spectrum text export: header "j lambda", then 1-based index and
    /// eigenvalue with 17 significant digits per line.
    pub fn export_text<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "j lambda")?;
        for (j, lam) in self.eigenvalues.iter().enumerate() {
            writeln!(w, "{} {:.16e}", j + 1, lam)?;
        }
        Ok(())
    }
}

fn interpolate(grid: &InteriorGrid, u: &[f64], p: &Point) -> f64 {
    let dim = grid.dim();
    let h = grid.h();
    let mut base = [0i64; 3];
    let mut frac = [0.0f64; 3];
    for (a, &c) in p.coords().iter().enumerate() {
        let t = c / h;
        let f = t.floor();
        base[a] = f as i64;
        frac[a] = t - f;
    }
    let mut value = 0.0;
    for corner in 0..(1usize << dim) {
        let mut key = [0i64; 3];
        let mut weight = 1.0;
        for (a, key_a) in key.iter_mut().take(dim).enumerate() {
            let bit = (corner >> a) & 1;
            *key_a = base[a] + bit as i64;
            weight *= if bit == 1 { frac[a] } else { 1.0 - frac[a] };
        }
        if weight == 0.0 {
            continue;
        }
        if let Some(idx) = grid.index_of(key) {
            value += weight * u[idx as usize];
        }
    }
    value
}

// ---------------------------------------------------------------------------
// Banded Cholesky
// ---------------------------------------------------------------------------

/// Lower-banded Cholesky factor, row-major band storage. Row i holds
/// L[i][j] for j in [i-bw, i] at band[i*(bw+1) + bw - (i - j)].
pub struct BandCholesky {
    n: usize,
    bw: usize,
    band: Vec<f64>,
}

impl BandCholesky {
    pub fn factor(mat: &SparseSymMatrix) -> Result<Self> {
        let n = mat.dim();
        let bw = mat.bandwidth();
        let stride = bw + 1;
        let mut band = vec![0.0f64; n * stride];
        for i in 0..n {
            band[i * stride + bw] = mat.diag()[i];
            for (j, v) in mat.upper_row(i) {
                let j = j as usize;
                // store A[j][i] in the lower band
                band[j * stride + bw - (j - i)] = v;
            }
        }
        for i in 0..n {
            let jmin = i.saturating_sub(bw);
            for j in jmin..i {
                let len = j - jmin;
                let (lo, hi) = band.split_at_mut(i * stride);
                // L[j][k] for k in [jmin, j)
                let row_j = &lo[j * stride + (bw - (j - jmin))..j * stride + bw];
                // L[i][k] for k in [jmin, j]; the last slot is A[i][j] being updated
                let off = bw - (i - jmin);
                let row_i = &mut hi[off..off + len + 1];
                let dot: f64 = row_i[..len].iter().zip(&row_j[..len]).map(|(a, b)| a * b).sum();
                let pivot = lo[j * stride + bw];
                row_i[len] = (row_i[len] - dot) / pivot;
            }
            let len = i - jmin;
            let row = &band[i * stride + (bw - len)..=i * stride + bw];
            let dot: f64 = row[..len].iter().map(|v| v * v).sum();
            let s = row[len] - dot;
            if s <= 0.0 || !s.is_finite() {
                return Err(Error::NotPositiveDefinite { row: i, pivot: s });
            }
            band[i * stride + bw] = s.sqrt();
        }
        Ok(BandCholesky { n, bw, band })
    }

    /// Solve A x = b via the two triangular band solves.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let stride = self.bw + 1;
        let mut x = b.to_vec();
        // forward: L z = b
        for i in 0..self.n {
            let jmin = i.saturating_sub(self.bw);
            let row = &self.band[i * stride + self.bw - (i - jmin)..i * stride + stride];
            let mut s = x[i];
            for (k, &l) in row[..i - jmin].iter().enumerate() {
                s -= l * x[jmin + k];
            }
            x[i] = s / row[i - jmin];
        }
        // backward: L^T x = z (column i of L is strided in the row-major band)
        for i in (0..self.n).rev() {
            let jmax = (i + self.bw).min(self.n - 1);
            let mut s = x[i];
            for j in (i + 1)..=jmax {
                s -= self.band[j * stride + self.bw - (j - i)] * x[j];
            }
            x[i] = s / self.band[i * stride + self.bw];
        }
        x
    }
}

// ---------------------------------------------------------------------------
// Solvers on raw symmetric matrices
// ---------------------------------------------------------------------------

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn scale(v: &mut [f64], s: f64) {
    for c in v.iter_mut() {
        *c *= s;
    }
}

/// Index and value of the first coefficient that is not numerically zero.
fn first_nonzero(v: &[f64]) -> (usize, f64) {
    let max = v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let threshold = 1e-11 * max;
    for (i, &c) in v.iter().enumerate() {
        if c.abs() > threshold {
            return (i, c);
        }
    }
    (0, v.first().copied().unwrap_or(0.0))
}

/// Deterministic ordering and sign convention: ascending eigenvalues; within
/// a cluster of relative gap < 1e-8, descending |first nonzero coefficient|,
/// ties by that coefficient's grid index; afterwards the first nonzero
/// coefficient of every vector is made positive.
fn canonical_order(pairs: &mut [(f64, Vec<f64>)]) {
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let n = pairs.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n {
            let prev = pairs[end - 1].0;
            let gap = (pairs[end].0 - prev).abs();
            if gap < CLUSTER_GAP * prev.abs().max(1e-300) {
                end += 1;
            } else {
                break;
            }
        }
        if end - start > 1 {
            pairs[start..end].sort_by(|a, b| {
                let (ia, ca) = first_nonzero(&a.1);
                let (ib, cb) = first_nonzero(&b.1);
                cb.abs()
                    .partial_cmp(&ca.abs())
                    .unwrap()
                    .then(ia.cmp(&ib))
            });
        }
        start = end;
    }
    for (_, v) in pairs.iter_mut() {
        let (_, c) = first_nonzero(v);
        if c < 0.0 {
            scale(v, -1.0);
        }
    }
}

/// Dense reference path: full symmetric eigendecomposition, lowest k pairs.
/// Limited to dimension 2000; this is the oracle the iterative path is tested
/// against.
pub fn solve_lowest_dense(mat: &SparseSymMatrix, k: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = mat.dim();
    if k == 0 || k > n {
        return Err(Error::KTooLarge { k, dim: n });
    }
    if n > DENSE_LIMIT {
        return Err(Error::Config(format!(
            "dense eigensolver is limited to dimension {DENSE_LIMIT}, got {n}"
        )));
    }
    let mut dense = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        dense[(i, i)] = mat.diag()[i];
        for (j, v) in mat.upper_row(i) {
            dense[(i, j as usize)] = v;
            dense[(j as usize, i)] = v;
        }
    }
    let eig = dense.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let mut pairs: Vec<(f64, Vec<f64>)> = order[..k]
        .iter()
        .map(|&c| {
            let mut v: Vec<f64> = eig.eigenvectors.column(c).iter().copied().collect();
            let nrm = norm2(&v);
            scale(&mut v, 1.0 / nrm);
            (eig.eigenvalues[c], v)
        })
        .collect();
    canonical_order(&mut pairs);
    Ok(pairs)
}

/// Shift-invert Lanczos with full reorthogonalization and locking. Returns the
/// k lowest eigenpairs of a positive definite matrix, each verified against
/// the residual contract ||A u - lambda u|| <= tol * lambda * ||u||.
pub fn solve_lowest_iterative(
    mat: &SparseSymMatrix,
    k: usize,
    tol: f64,
    seed: u64,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = mat.dim();
    if k == 0 || k > n {
        return Err(Error::KTooLarge { k, dim: n });
    }
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(Error::Config(format!("residual tolerance must lie in (0, 1e-4], got {tol}")));
    }
    let chol = BandCholesky::factor(mat)?;

    // Locking discipline: each deflated run locks a verified prefix of its own
    // lowest Ritz pairs (stopping at the first unconverged one, so a higher
    // pair can never jump the queue). Termination needs a confirmation pass:
    // a fresh deflated run whose lowest new pair lies above the current k-th
    // eigenvalue, which rules out degenerate copies still hiding below it.
    let lock_cap = (k + 8).min(n);
    let mut locked: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_residual = f64::INFINITY;
    let mut m_base = (2 * k + 40).max(60);
    let mut barren = 0usize;

    for _restart in 0..64 {
        let mut v0: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        for (_, u) in &locked {
            let c = dot(&v0, u);
            axpy(&mut v0, -c, u);
        }
        let nrm = norm2(&v0);
        if nrm < 1e-12 {
            continue;
        }
        scale(&mut v0, 1.0 / nrm);

        // before the bottom is full, chase everything still missing; once
        // locked >= k, a run only needs the deflated bottom pair or two, so
        // the Ritz probe below ends it after a handful of steps
        let wanted = ((k + 2).saturating_sub(locked.len())).clamp(2, k + 2);
        let m_max = m_base.min(n - locked.len());
        let mut basis: Vec<Vec<f64>> = vec![v0];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();

        let lowest_new = loop {
            let j = alphas.len();
            let mut w = chol.solve(&basis[j]);
            let alpha = dot(&w, &basis[j]);
            alphas.push(alpha);
            axpy(&mut w, -alpha, &basis[j]);
            if j > 0 {
                axpy(&mut w, -betas[j - 1], &basis[j - 1]);
            }
            // full reorthogonalization, two passes
            for _ in 0..2 {
                for (_, u) in &locked {
                    let c = dot(&w, u);
                    axpy(&mut w, -c, u);
                }
                for u in &basis {
                    let c = dot(&w, u);
                    axpy(&mut w, -c, u);
                }
            }
            let beta = norm2(&w);
            let breakdown = beta < 1e-13;
            let full = basis.len() >= m_max;
            let mut should_harvest = breakdown || full;
            if !should_harvest && basis.len() >= 4 && basis.len() % 5 == 0 {
                // cheap probe on the tridiagonal Ritz residuals: harvest once
                // the wanted number of top pairs look converged
                let (theta, svec) = tridiag_eigen(&alphas, &betas);
                let m = theta.len();
                let mut order: Vec<usize> = (0..m).collect();
                order.sort_by(|&a, &b| theta[b].partial_cmp(&theta[a]).unwrap());
                let probe = wanted.min(m);
                let ready = order
                    .iter()
                    .take(probe)
                    .all(|&c| (beta * svec[(m - 1, c)]).abs() <= 0.05 * tol * theta[c].abs());
                should_harvest = ready;
            }
            if should_harvest {
                break harvest(
                    mat,
                    &basis,
                    &alphas,
                    &betas,
                    beta,
                    tol,
                    &mut locked,
                    lock_cap,
                    &mut best_residual,
                );
            }
            scale(&mut w, 1.0 / beta);
            betas.push(beta);
            basis.push(w);
        };

        match lowest_new {
            Some(low) => {
                barren = 0;
                if locked.len() >= k {
                    locked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                    // confirmation: the deflated spectrum starts above the
                    // k-th locked eigenvalue, so the bottom is complete
                    if low > locked[k - 1].0 * (1.0 + 1e-9) {
                        locked.truncate(k);
                        canonical_order(&mut locked);
                        return Ok(locked);
                    }
                }
            }
            None => {
                barren += 1;
                if barren >= 2 {
                    m_base = m_base + m_base / 2;
                    barren = 0;
                }
                // a barren full-length run over the whole remaining space
                // means the deflated operator has nothing left to offer
                if m_max == n - locked.len() && locked.len() >= k {
                    locked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                    locked.truncate(k);
                    canonical_order(&mut locked);
                    return Ok(locked);
                }
            }
        }
    }

    Err(Error::NonConvergence {
        requested: k,
        achieved: locked.len().min(k),
        best_residual,
    })
}

/// Eigen-decomposition of the symmetric tridiagonal Lanczos matrix.
fn tridiag_eigen(alphas: &[f64], betas: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alphas.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Lock the verified prefix of this run's lowest Ritz pairs. Returns the
/// lowest newly locked eigenvalue, or None if the run's bottom pair failed
/// verification (in which case nothing at all is locked, preserving the
/// prefix property).
#[allow(clippy::too_many_arguments)]
fn harvest(
    mat: &SparseSymMatrix,
    basis: &[Vec<f64>],
    alphas: &[f64],
    betas: &[f64],
    beta_last: f64,
    tol: f64,
    locked: &mut Vec<(f64, Vec<f64>)>,
    lock_cap: usize,
    best_residual: &mut f64,
) -> Option<f64> {
    let n = basis[0].len();
    let (theta, svec) = tridiag_eigen(alphas, betas);
    let m = theta.len();
    let mut order: Vec<usize> = (0..m).collect();
    // largest theta of the inverse first = lowest lambda first
    order.sort_by(|&a, &b| theta[b].partial_cmp(&theta[a]).unwrap());
    let mut lowest_new: Option<f64> = None;
    for &c in &order {
        if locked.len() >= lock_cap {
            break;
        }
        if theta[c] <= 0.0 {
            break;
        }
        // estimated inverse-operator residual: a clearly unconverged pair
        // ends the prefix
        let est = (beta_last * svec[(m - 1, c)]).abs();
        if est > 0.5 * theta[c] {
            break;
        }
        let mut y = vec![0.0f64; n];
        for (i, b) in basis.iter().enumerate() {
            axpy(&mut y, svec[(i, c)], b);
        }
        for (_, u) in locked.iter() {
            let d = dot(&y, u);
            axpy(&mut y, -d, u);
        }
        let nrm = norm2(&y);
        if nrm < 1e-8 {
            break;
        }
        scale(&mut y, 1.0 / nrm);
        let ay = mat.apply(&y).expect("dimension checked at entry");
        let lambda = dot(&y, &ay);
        let mut res = 0.0;
        for i in 0..n {
            let r = ay[i] - lambda * y[i];
            res += r * r;
        }
        let res = res.sqrt();
        *best_residual = best_residual.min(res / lambda.abs().max(1e-300));
        if lambda > 0.0 && res <= tol * lambda {
            locked.push((lambda, y));
            lowest_new = Some(lowest_new.map_or(lambda, |v: f64| v.min(lambda)));
        } else {
            break;
        }
    }
    lowest_new
}

/// Route between dense and iterative paths by matrix size.
pub fn solve_lowest(
    mat: &SparseSymMatrix,
    k: usize,
    tol: f64,
    seed: u64,
) -> Result<Vec<(f64, Vec<f64>)>> {
    if mat.dim() <= DENSE_ROUTE {
        solve_lowest_dense(mat, k)
    } else {
        solve_lowest_iterative(mat, k, tol, seed)
    }
}

/// Lowest K eigenpairs of a grid operator as a `Spectrum`. Eigenfunctions are
/// scaled so the discrete quadrature sum_x u(x)^2 h^n equals one.
pub fn lowest_eigenpairs(op: &GridOperator, k: usize, tol: f64, seed: u64) -> Result<Spectrum> {
    let pairs = solve_lowest(op.matrix(), k, tol, seed)?;
    let grid = op.grid().clone();
    let weight = grid.cell_weight().sqrt();
    let mut eigenvalues = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for (lam, mut v) in pairs {
        scale(&mut v, 1.0 / weight);
        eigenvalues.push(lam);
        vectors.push(v);
    }
    Ok(Spectrum::from_grid(
        op.h(),
        op.domain().clone(),
        grid,
        eigenvalues,
        vectors,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::assemble_dirichlet_laplacian;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn diagonal_matrix_lowest_two() {
        let mat = SparseSymMatrix::diagonal(3, vec![1.0, 2.0, 3.0]).unwrap();
        let pairs = solve_lowest(&mat, 2, 1e-8, DEFAULT_SEED).unwrap();
        assert!((pairs[0].0 - 1.0).abs() < 1e-12);
        assert!((pairs[1].0 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn k_too_large_rejected() {
        let mat = SparseSymMatrix::diagonal(3, vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(solve_lowest(&mat, 4, 1e-8, 0), Err(Error::KTooLarge { .. })));
    }

    #[test]
    fn interval_matches_tridiagonal_toeplitz_closed_form() {
        let d = Domain::interval(1.0).unwrap();
        let op = assemble_dirichlet_laplacian(&d, 0.25).unwrap();
        let s = lowest_eigenpairs(&op, 3, 1e-8, DEFAULT_SEED).unwrap();
        // 2 (1 - cos(k pi h)) / h^2
        for (k, lam) in s.eigenvalues().iter().enumerate() {
            let expect = 32.0 * (1.0 - ((k + 1) as f64 * PI / 4.0).cos());
            assert!((lam - expect).abs() < 1e-10, "lambda_{k} = {lam} vs {expect}");
        }
        assert!((s.eigenvalue(0) - (32.0 - 16.0 * 2f64.sqrt())).abs() < 1e-10);
        assert!((s.eigenvalue(1) - 32.0).abs() < 1e-10);
        assert!((s.eigenvalue(2) - (32.0 + 16.0 * 2f64.sqrt())).abs() < 1e-10);
    }

    fn random_spd(n: usize, seed: u64) -> SparseSymMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut upper = Vec::new();
        let mut row_abs = vec![0.0f64; n];
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                if rng.random::<f64>() < 0.15 {
                    let v = rng.random::<f64>() * 2.0 - 1.0;
                    upper.push((i, j, v));
                    row_abs[i as usize] += v.abs();
                    row_abs[j as usize] += v.abs();
                }
            }
        }
        // diagonally dominant, hence positive definite
        let diag: Vec<f64> = (0..n)
            .map(|i| row_abs[i] + 0.5 + rng.random::<f64>())
            .collect();
        SparseSymMatrix::from_parts(n, diag, &upper).unwrap()
    }

    #[test]
    fn iterative_matches_dense_oracle_on_random_spd() {
        let mat = random_spd(50, 0xACE);
        let oracle = solve_lowest_dense(&mat, 10).unwrap();
        let got = solve_lowest_iterative(&mat, 10, 1e-8, DEFAULT_SEED).unwrap();
        for i in 0..10 {
            assert!(
                (got[i].0 - oracle[i].0).abs() < 1e-8,
                "eigenvalue {i}: {} vs {}",
                got[i].0,
                oracle[i].0
            );
        }
    }

    #[test]
    fn iterative_matches_dense_on_square_grid_with_degeneracies() {
        let op = assemble_dirichlet_laplacian(&Domain::unit_square(), 1.0 / 20.0).unwrap();
        let oracle = solve_lowest_dense(op.matrix(), 12).unwrap();
        let got = solve_lowest_iterative(op.matrix(), 12, 1e-9, DEFAULT_SEED).unwrap();
        for i in 0..12 {
            assert!(
                (got[i].0 - oracle[i].0).abs() < 1e-7 * oracle[i].0,
                "eigenvalue {i}: {} vs {}",
                got[i].0,
                oracle[i].0
            );
        }
    }

    #[test]
    fn residual_contract_holds() {
        let op = assemble_dirichlet_laplacian(&Domain::l_shape(), 1.0 / 24.0).unwrap();
        let tol = 1e-8;
        let pairs = solve_lowest_iterative(op.matrix(), 8, tol, DEFAULT_SEED).unwrap();
        for (lam, v) in &pairs {
            let av = op.matrix().apply(v).unwrap();
            let mut res = 0.0;
            for i in 0..v.len() {
                let r = av[i] - lam * v[i];
                res += r * r;
            }
            assert!(res.sqrt() <= tol * lam * norm2(v));
        }
    }

    #[test]
    fn discrete_orthonormality_with_quadrature_weight() {
        let op = assemble_dirichlet_laplacian(&Domain::unit_square(), 1.0 / 16.0).unwrap();
        let s = lowest_eigenpairs(&op, 6, 1e-8, DEFAULT_SEED).unwrap();
        let g = s.grid().unwrap().clone();
        let w = g.cell_weight();
        for i in 0..6 {
            for j in 0..6 {
                let ui = s.grid_vector(i).unwrap();
                let uj = s.grid_vector(j).unwrap();
                let prod: f64 = ui.iter().zip(uj).map(|(a, b)| a * b).sum::<f64>() * w;
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (prod - expect).abs() < 1e-10,
                    "orthonormality ({i},{j}): {prod}"
                );
            }
        }
    }

    #[test]
    fn determinism_for_fixed_seed() {
        let op = assemble_dirichlet_laplacian(&Domain::disk(1.0).unwrap(), 1.0 / 16.0).unwrap();
        let a = solve_lowest_iterative(op.matrix(), 5, 1e-8, 42).unwrap();
        let b = solve_lowest_iterative(op.matrix(), 5, 1e-8, 42).unwrap();
        for i in 0..5 {
            assert_eq!(a[i].0, b[i].0);
            assert_eq!(a[i].1, b[i].1);
        }
    }

    #[test]
    fn sign_convention_first_nonzero_positive() {
        let op = assemble_dirichlet_laplacian(&Domain::unit_square(), 1.0 / 12.0).unwrap();
        let pairs = solve_lowest(op.matrix(), 5, 1e-8, DEFAULT_SEED).unwrap();
        for (_, v) in &pairs {
            let (_, c) = first_nonzero(v);
            assert!(c > 0.0);
        }
    }

    #[test]
    fn resolved_cutoff_rule() {
        // h = 1/256 with lambda_K large: cutoff = 0.02 / h^2 = 1310.72
        let s = Spectrum::from_grid(
            1.0 / 256.0,
            Domain::unit_square(),
            Domain::unit_square().interior_grid(0.25).unwrap(),
            vec![19.0, 2000.0],
            vec![vec![0.0; 9], vec![0.0; 9]],
        );
        assert!((s.resolved_cutoff() - 1310.72).abs() < 1e-9);
        // single-point grid at h = 1/2: min(0.08, 16) = 0.08
        let s = Spectrum::from_grid(
            0.5,
            Domain::unit_square(),
            Domain::unit_square().interior_grid(0.5).unwrap(),
            vec![16.0],
            vec![vec![1.0]],
        );
        assert!((s.resolved_cutoff() - 0.08).abs() < 1e-12);
    }

    #[test]
    fn poincare_lower_bound_on_suite_domains() {
        for d in [
            Domain::unit_square(),
            Domain::rectangle(2.0, 1.0).unwrap(),
            Domain::disk(1.0).unwrap(),
            Domain::annulus(0.25, 1.0).unwrap(),
            Domain::l_shape(),
        ] {
            let op = assemble_dirichlet_laplacian(&d, 1.0 / 24.0).unwrap();
            let s = lowest_eigenpairs(&op, 1, 1e-8, DEFAULT_SEED).unwrap();
            let bound = s.eigenvalue(0) * d.diameter().powi(2);
            assert!(bound >= 1.0, "Poincare bound violated: {bound} on {:?}", d.shape());
        }
    }

    #[test]
    fn spectral_subspace_estimate() {
        // for v in the span of eigenfunctions with lambda_j <= lambda:
        // ||A v|| <= lambda (1 + tol) ||v||
        let op = assemble_dirichlet_laplacian(&Domain::unit_square(), 1.0 / 16.0).unwrap();
        let tol = 1e-8;
        let pairs = solve_lowest(op.matrix(), 8, tol, DEFAULT_SEED).unwrap();
        let lam = pairs[7].0;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mut v = vec![0.0; op.dim()];
            for (_, u) in &pairs {
                let c = rng.random::<f64>() * 2.0 - 1.0;
                axpy(&mut v, c, u);
            }
            let av = op.matrix().apply(&v).unwrap();
            assert!(norm2(&av) <= lam * (1.0 + tol) * norm2(&v) + 1e-12);
        }
    }

    #[test]
    fn band_cholesky_solves() {
        let mat = random_spd(80, 0xBEEF);
        let chol = BandCholesky::factor(&mat).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x: Vec<f64> = (0..80).map(|_| rng.random::<f64>() - 0.5).collect();
        let b = mat.apply(&x).unwrap();
        let got = chol.solve(&b);
        for i in 0..80 {
            assert!((got[i] - x[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn interpolation_hits_grid_values_and_vanishes_outside() {
        let op = assemble_dirichlet_laplacian(&Domain::unit_square(), 0.25).unwrap();
        let s = lowest_eigenpairs(&op, 2, 1e-8, DEFAULT_SEED).unwrap();
        let g = s.grid().unwrap().clone();
        for i in 0..g.len() {
            let p = g.point(i);
            let direct = s.grid_vector(0).unwrap()[i];
            assert!((s.eval(0, &p) - direct).abs() < 1e-13);
        }
        // boundary points interpolate toward the eliminated zero layer
        assert!(s.eval(0, &Point::d2(0.0, 0.5)).abs() < 1e-13);
        assert!(s.eval(0, &Point::d2(1.0, 1.0)).abs() < 1e-13);
    }
}
