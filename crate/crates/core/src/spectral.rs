//! The pointwise spectral objects: counting function, spectral function
//! e(x,y;lambda), the flat-space free term, boundary-weighted local residuals,
//! the global Weyl-law fit and the trace identity.

use rayon::prelude::*;

use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::oracles::bessel::bessel_j;

/// Volume of the Euclidean unit ball in dimension n.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        2 => std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI / 3.0,
        _ => unit_ball_volume(n - 2) * 2.0 * std::f64::consts::PI / n as f64,
    }
}

/// Leading Weyl coefficient C_n = (2 pi)^{-n} omega_n.
pub fn weyl_constant(n: usize) -> f64 {
    unit_ball_volume(n) * (2.0 * std::f64::consts::PI).powi(-(n as i32))
}

/// Dimension-dependent constants of the leading spectral term.
#[derive(Debug, Clone, Copy)]
pub struct FreeTerm {
    pub n: usize,
    pub omega_n: f64,
    pub c_n: f64,
}

impl FreeTerm {
    pub fn new(n: usize) -> Self {
        FreeTerm { n, omega_n: unit_ball_volume(n), c_n: weyl_constant(n) }
    }

    /// On-diagonal free term C_n lambda^{n/2}.
    pub fn diag(&self, lambda: f64) -> f64 {
        self.c_n * lambda.powf(self.n as f64 / 2.0)
    }
}

/// C_n lambda^{n/2}, the diagonal value of the free spectral term.
pub fn free_term_diag(n: usize, lambda: f64) -> f64 {
    FreeTerm::new(n).diag(lambda)
}

/// Off-diagonal free term: the normalized Fourier transform of the ball
/// indicator, (2 pi)^{-n/2} (tau/|x|)^{n/2} J_{n/2}(tau |x|) at tau = sqrt(lambda).
pub fn free_term_offdiag(n: usize, displacement: &[f64], lambda: f64) -> Result<f64> {
    let rho = displacement.iter().map(|c| c * c).sum::<f64>().sqrt();
    if rho == 0.0 {
        return Ok(free_term_diag(n, lambda));
    }
    let tau = lambda.sqrt();
    let order = n as f64 / 2.0;
    let j = bessel_j(order, tau * rho)?;
    Ok((2.0 * std::f64::consts::PI).powf(-order) * (tau / rho).powf(order) * j)
}

fn check_cutoff(s: &Spectrum, lambda: f64) -> Result<()> {
    let cutoff = s.resolved_cutoff();
    if lambda > cutoff {
        return Err(Error::BeyondCutoff { lambda, cutoff });
    }
    Ok(())
}

fn check_point(s: &Spectrum, p: &Point) -> Result<()> {
    if s.domain().in_closure(p) {
        Ok(())
    } else {
        Err(Error::PointOutsideDomain(p.coords().to_vec()))
    }
}

/// Eigenvalue counting function N(lambda) = #{j : lambda_j <= lambda}, with
/// multiplicity; right-continuous (the closed condition at jump points).
pub fn counting(s: &Spectrum, lambda: f64) -> Result<usize> {
    check_cutoff(s, lambda)?;
    Ok(s.eigenvalues().partition_point(|&l| l <= lambda))
}

/// Spectral function e(x, y; lambda) = sum over lambda_j <= lambda of
/// u_j(x) u_j(y).
pub fn spectral_function(s: &Spectrum, x: &Point, y: &Point, lambda: f64) -> Result<f64> {
    check_cutoff(s, lambda)?;
    check_point(s, x)?;
    check_point(s, y)?;
    let count = s.eigenvalues().partition_point(|&l| l <= lambda);
    let mut total = 0.0;
    for j in 0..count {
        total += s.eval(j, x) * s.eval(j, y);
    }
    Ok(total)
}

/// Diagonal spectral function sampled on an ascending lambda grid in a single
/// pass over the modes.
pub fn diag_sweep(s: &Spectrum, x: &Point, lambdas: &[f64]) -> Result<Vec<f64>> {
    check_point(s, x)?;
    if let Some(&last) = lambdas.last() {
        check_cutoff(s, last)?;
    }
    debug_assert!(lambdas.windows(2).all(|w| w[0] <= w[1]));
    let eigenvalues = s.eigenvalues();
    let mut out = Vec::with_capacity(lambdas.len());
    let mut j = 0;
    let mut partial = 0.0;
    for &lam in lambdas {
        while j < eigenvalues.len() && eigenvalues[j] <= lam {
            let u = s.eval(j, x);
            partial += u * u;
            j += 1;
        }
        out.push(partial);
    }
    Ok(out)
}

/// Boundary-weighted local residual
/// r(x, lambda) = |e(x,x;lambda) - C_n lambda^{n/2}| (1 + s(x) sqrt(lambda)) / lambda^{n/2}.
pub fn local_weyl_residual(s: &Spectrum, d: &Domain, x: &Point, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Config(format!("lambda must be positive, got {lambda}")));
    }
    let e = spectral_function(s, x, x, lambda)?;
    let sx = d.boundary_distance(x)?;
    let n = d.dim();
    let e0 = free_term_diag(n, lambda);
    Ok((e - e0).abs() * (1.0 + sx * lambda.sqrt()) / lambda.powf(n as f64 / 2.0))
}

/// One row of a local-residual sweep.
#[derive(Debug, Clone, Copy)]
pub struct LocalWeylSample {
    pub x: Point,
    pub s: f64,
    pub lambda: f64,
    pub e_diag: f64,
    pub e0: f64,
    pub residual: f64,
}

/// Sweep r(x, lambda) over a set of points and an ascending lambda grid.
/// Rows are ordered point-major, matching the deterministic CSV layout.
pub fn local_weyl_sweep(
    s: &Spectrum,
    d: &Domain,
    points: &[Point],
    lambdas: &[f64],
) -> Result<Vec<LocalWeylSample>> {
    if let Some(&last) = lambdas.last() {
        check_cutoff(s, last)?;
    }
    let n = d.dim();
    let rows: Vec<Result<Vec<LocalWeylSample>>> = points
        .par_iter()
        .map(|x| {
            let sx = d.boundary_distance(x)?;
            let es = diag_sweep(s, x, lambdas)?;
            Ok(lambdas
                .iter()
                .zip(es)
                .map(|(&lam, e)| {
                    let e0 = free_term_diag(n, lam);
                    let residual =
                        (e - e0).abs() * (1.0 + sx * lam.sqrt()) / lam.powf(n as f64 / 2.0);
                    LocalWeylSample { x: *x, s: sx, lambda: lam, e_diag: e, e0, residual }
                })
                .collect())
        })
        .collect();
    let mut out = Vec::with_capacity(points.len() * lambdas.len());
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

/// Global Weyl-law fit report: two-term least squares
/// N(lambda) ~ A lambda^{n/2} + B lambda^{(n-1)/2} against the counting
/// function, plus the remainder against the target constant C_n vol.
#[derive(Debug, Clone)]
pub struct WeylFitReport {
    pub dim: usize,
    pub leading: f64,
    pub boundary_coefficient: f64,
    pub target: f64,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub samples: Vec<WeylFitSample>,
}

#[derive(Debug, Clone, Copy)]
pub struct WeylFitSample {
    pub lambda: f64,
    pub count: f64,
    pub leading_term: f64,
    pub remainder: f64,
    pub normalized_remainder: f64,
}

impl WeylFitReport {
    /// Largest |remainder| / (lambda^{(n-1)/2} log lambda) over the samples.
    pub fn normalized_remainder_sup(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.normalized_remainder.abs())
            .fold(0.0, f64::max)
    }
}

/// Fit the counting function on log-spaced samples of [lambda_lo, lambda_hi].
pub fn weyl_fit(
    s: &Spectrum,
    d: &Domain,
    lambda_lo: f64,
    lambda_hi: f64,
    sample_count: usize,
) -> Result<WeylFitReport> {
    if s.is_empty() || !(s.eigenvalue(0) < lambda_lo && lambda_lo < lambda_hi) {
        return Err(Error::Config(format!(
            "fit window must satisfy lambda_1 < lo < hi, got [{lambda_lo}, {lambda_hi}]"
        )));
    }
    check_cutoff(s, lambda_hi)?;
    let in_window = s
        .eigenvalues()
        .iter()
        .filter(|&&l| l >= lambda_lo && l <= lambda_hi)
        .count();
    if in_window < 10 {
        return Err(Error::WindowTooSmall { count: in_window });
    }
    let n = d.dim();
    let lambdas = log_spaced(lambda_lo, lambda_hi, sample_count);
    let half_n = n as f64 / 2.0;
    let half_n1 = (n as f64 - 1.0) / 2.0;
    // 2x2 normal equations for N ~ A phi1 + B phi2
    let (mut s11, mut s12, mut s22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut counts = Vec::with_capacity(lambdas.len());
    for &lam in &lambdas {
        let count = counting(s, lam)? as f64;
        let phi1 = lam.powf(half_n);
        let phi2 = lam.powf(half_n1);
        s11 += phi1 * phi1;
        s12 += phi1 * phi2;
        s22 += phi2 * phi2;
        b1 += phi1 * count;
        b2 += phi2 * count;
        counts.push(count);
    }
    let det = s11 * s22 - s12 * s12;
    let leading = (b1 * s22 - b2 * s12) / det;
    let boundary_coefficient = (s11 * b2 - s12 * b1) / det;
    let target = weyl_constant(n) * d.area();
    let samples = lambdas
        .iter()
        .zip(counts)
        .map(|(&lam, count)| {
            let leading_term = target * lam.powf(half_n);
            let remainder = count - leading_term;
            let normalized_remainder = remainder / (lam.powf(half_n1) * lam.ln());
            WeylFitSample { lambda: lam, count, leading_term, remainder, normalized_remainder }
        })
        .collect();
    Ok(WeylFitReport {
        dim: n,
        leading,
        boundary_coefficient,
        target,
        lambda_lo,
        lambda_hi,
        samples,
    })
}

/// Quadrature value of the trace integral of e(x,x;lambda) over the domain.
#[derive(Debug, Clone, Copy)]
pub struct TraceQuadrature {
    pub value: f64,
    pub error_estimate: f64,
}

/// Trace of the spectral projector as an integral. Discrete spectra use the
/// grid quadrature, which reproduces N(lambda) up to orthonormality error;
/// analytic spectra use a composite midpoint rule over the bounding box with
/// a nested-grid error estimate.
pub fn trace_counting(
    s: &Spectrum,
    d: &Domain,
    lambda: f64,
    cells_per_side: usize,
) -> Result<TraceQuadrature> {
    check_cutoff(s, lambda)?;
    if let Some(grid) = s.grid() {
        let count = s.eigenvalues().partition_point(|&l| l <= lambda);
        let w = grid.cell_weight();
        let mut total = 0.0;
        for j in 0..count {
            let v = s.grid_vector(j).expect("grid spectrum has vectors");
            total += v.iter().map(|c| c * c).sum::<f64>() * w;
        }
        Ok(TraceQuadrature { value: total, error_estimate: 0.0 })
    } else {
        let m = cells_per_side.max(2);
        let fine = midpoint_trace(s, d, lambda, m)?;
        let coarse = midpoint_trace(s, d, lambda, m / 2)?;
        Ok(TraceQuadrature { value: fine, error_estimate: (fine - coarse).abs() })
    }
}

fn midpoint_trace(s: &Spectrum, d: &Domain, lambda: f64, m: usize) -> Result<f64> {
    let bb = d.bounding_box();
    let n = d.dim();
    let count = s.eigenvalues().partition_point(|&l| l <= lambda);
    let steps: Vec<f64> = bb.iter().map(|(lo, hi)| (hi - lo) / m as f64).collect();
    let cell: f64 = steps.iter().product();
    let eval_cell = |p: &Point| -> f64 {
        if !d.contains(p) {
            return 0.0;
        }
        let mut acc = 0.0;
        for j in 0..count {
            let u = s.eval(j, p);
            acc += u * u;
        }
        acc
    };
    let total: f64 = match n {
        1 => (0..m)
            .into_par_iter()
            .map(|i| {
                let x = bb[0].0 + (i as f64 + 0.5) * steps[0];
                eval_cell(&Point::d1(x))
            })
            .sum(),
        2 => (0..m)
            .into_par_iter()
            .map(|row| {
                let y = bb[1].0 + (row as f64 + 0.5) * steps[1];
                let mut acc = 0.0;
                for i in 0..m {
                    let x = bb[0].0 + (i as f64 + 0.5) * steps[0];
                    acc += eval_cell(&Point::d2(x, y));
                }
                acc
            })
            .sum(),
        _ => (0..m)
            .into_par_iter()
            .map(|iz| {
                let z = bb[2].0 + (iz as f64 + 0.5) * steps[2];
                let mut acc = 0.0;
                for row in 0..m {
                    let y = bb[1].0 + (row as f64 + 0.5) * steps[1];
                    for i in 0..m {
                        let x = bb[0].0 + (i as f64 + 0.5) * steps[0];
                        acc += eval_cell(&Point::d3(x, y, z));
                    }
                }
                acc
            })
            .sum(),
    };
    Ok(total * cell)
}

/// Supremum of e(x,x;lambda) / lambda^{n/2} over a product grid of points and
/// lambdas (ascending).
pub fn diagonal_bound_check(
    s: &Spectrum,
    d: &Domain,
    lambdas: &[f64],
    points: &[Point],
) -> Result<f64> {
    if let Some(&last) = lambdas.last() {
        check_cutoff(s, last)?;
    }
    let half_n = d.dim() as f64 / 2.0;
    let sups: Vec<Result<f64>> = points
        .par_iter()
        .map(|x| {
            let es = diag_sweep(s, x, lambdas)?;
            Ok(lambdas
                .iter()
                .zip(es)
                .map(|(&lam, e)| e / lam.powf(half_n))
                .fold(0.0, f64::max))
        })
        .collect();
    let mut sup = 0.0f64;
    for v in sups {
        sup = sup.max(v?);
    }
    Ok(sup)
}

/// n log-spaced values from lo to hi inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (la, lb) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Uniformly spaced interior sample points: an m x m grid strictly inside the
/// bounding box, filtered to the domain interior.
pub fn interior_sample_grid(d: &Domain, m: usize) -> Vec<Point> {
    let bb = d.bounding_box();
    let mut out = Vec::new();
    match d.dim() {
        1 => {
            for i in 1..=m {
                let x = bb[0].0 + (bb[0].1 - bb[0].0) * i as f64 / (m + 1) as f64;
                let p = Point::d1(x);
                if d.contains(&p) {
                    out.push(p);
                }
            }
        }
        2 => {
            for j in 1..=m {
                let y = bb[1].0 + (bb[1].1 - bb[1].0) * j as f64 / (m + 1) as f64;
                for i in 1..=m {
                    let x = bb[0].0 + (bb[0].1 - bb[0].0) * i as f64 / (m + 1) as f64;
                    let p = Point::d2(x, y);
                    if d.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
        _ => {
            for k in 1..=m {
                let z = bb[2].0 + (bb[2].1 - bb[2].0) * k as f64 / (m + 1) as f64;
                for j in 1..=m {
                    let y = bb[1].0 + (bb[1].1 - bb[1].0) * j as f64 / (m + 1) as f64;
                    for i in 1..=m {
                        let x = bb[0].0 + (bb[0].1 - bb[0].0) * i as f64 / (m + 1) as f64;
                        let p = Point::d3(x, y, z);
                        if d.contains(&p) {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    out
}
