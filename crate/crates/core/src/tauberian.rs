//! Frequency-line machinery: the odd spectral measure with primitive
//! f(tau) = sgn(tau) e(x,x;tau^2)/2, its mollification against a band-limited
//! kernel, the empirical Tauberian bound checker, and the smoothed wave trace
//! with its length-spectrum peaks.

use rayon::prelude::*;

use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::oracles::quadrature;
use crate::spectral::weyl_constant;

const PI: f64 = std::f64::consts::PI;

/// A signed measure on the frequency line, stored through its even atom/
/// density data; the primitive f is odd with f(0) = 0.
#[derive(Debug, Clone)]
pub enum MeasureKind {
    /// Atoms at +-tau_j with weight w_j on each side (an atom exactly at zero
    /// is carried once).
    Atomic { tau: Vec<f64>, weight: Vec<f64> },
    /// Absolutely continuous: d mu = coeff |tau|^power d tau.
    PowerDensity { coeff: f64, power: u32 },
}

#[derive(Debug, Clone)]
pub struct SpectralMeasure {
    dim: usize,
    kind: MeasureKind,
    /// Largest |tau| at which the measure is known (sqrt of the spectral
    /// cutoff); infinite for closed-form measures.
    tau_resolved: f64,
}

impl SpectralMeasure {
    pub fn from_atoms(dim: usize, atoms: Vec<(f64, f64)>, tau_resolved: f64) -> Self {
        let (tau, weight): (Vec<f64>, Vec<f64>) = atoms.into_iter().unzip();
        SpectralMeasure { dim, kind: MeasureKind::Atomic { tau, weight }, tau_resolved }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn tau_resolved(&self) -> f64 {
        self.tau_resolved
    }

    /// The odd primitive f(tau); atoms use the closed condition
    /// (an atom at |tau| is included).
    pub fn primitive(&self, tau: f64) -> f64 {
        let t = tau.abs();
        let value = match &self.kind {
            MeasureKind::Atomic { tau: ts, weight } => ts
                .iter()
                .zip(weight)
                .filter(|(&tj, _)| tj.abs() <= t)
                .map(|(_, &w)| w)
                .sum(),
            MeasureKind::PowerDensity { coeff, power } => {
                let p = *power as f64;
                coeff * t.powf(p + 1.0) / (p + 1.0)
            }
        };
        if tau < 0.0 {
            -value
        } else {
            value
        }
    }

    /// Whether the measure is nonnegative (so its primitive is nondecreasing).
    pub fn is_nonnegative(&self) -> bool {
        match &self.kind {
            MeasureKind::Atomic { weight, .. } => weight.iter().all(|&w| w >= 0.0),
            MeasureKind::PowerDensity { coeff, .. } => *coeff >= 0.0,
        }
    }

    /// Total mass carried inside [-window, window] (counting both mirrored
    /// atom families).
    pub fn mass_within(&self, window: f64) -> f64 {
        match &self.kind {
            MeasureKind::Atomic { tau, weight } => tau
                .iter()
                .zip(weight)
                .filter(|(&t, _)| t.abs() <= window)
                .map(|(&t, &w)| if t == 0.0 { w } else { 2.0 * w })
                .sum(),
            MeasureKind::PowerDensity { coeff, power } => {
                let p = *power as f64;
                2.0 * coeff * window.powf(p + 1.0) / (p + 1.0)
            }
        }
    }
}

/// Diagonal spectral measure at a point: atoms at sqrt(lambda_j) with weights
/// u_j(x)^2 / 2, mirrored oddly onto the negative axis.
pub fn spectral_measure_at(s: &Spectrum, x: &Point) -> Result<SpectralMeasure> {
    if !s.domain().in_closure(x) {
        return Err(Error::PointOutsideDomain(x.coords().to_vec()));
    }
    let atoms = (0..s.len())
        .map(|j| {
            let u = s.eval(j, x);
            (s.eigenvalue(j).sqrt(), 0.5 * u * u)
        })
        .collect();
    Ok(SpectralMeasure::from_atoms(
        s.dim(),
        atoms,
        s.resolved_cutoff().sqrt(),
    ))
}

/// The free comparison measure g(tau) = sgn(tau) C_n |tau|^n / 2, i.e. density
/// n C_n |tau|^{n-1} / 2.
pub fn free_measure(n: usize) -> SpectralMeasure {
    SpectralMeasure {
        dim: n,
        kind: MeasureKind::PowerDensity {
            coeff: n as f64 * weyl_constant(n) / 2.0,
            power: (n - 1) as u32,
        },
        tau_resolved: f64::INFINITY,
    }
}

// ---------------------------------------------------------------------------
// Mollifier
// ---------------------------------------------------------------------------

/// phi(tau) = 3/(8 pi) (sin(tau/4)/(tau/4))^4: nonnegative, unit mass, and its
/// transform is supported in [-1, 1]. The scaled family is
/// phi_a(tau) = a phi(a tau), band-limited to [-a, a].
#[derive(Debug, Clone, Copy)]
pub struct Mollifier {
    scale: f64,
}

const BASE_NORM: f64 = 3.0 / (8.0 * PI);
/// Second moment of the base kernel: int u^2 phi(u) du.
const BASE_SECOND_MOMENT: f64 = 12.0;
/// Mean-envelope coefficient of the |u| -> infinity tail,
/// phi(u) ~ (36/pi)/u^4 on average.
const TAIL_MEAN_COEFF: f64 = 36.0 / PI;

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-7 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// Base kernel phi(tau).
pub fn mollifier_base(tau: f64) -> f64 {
    let s = sinc(tau / 4.0);
    let s2 = s * s;
    BASE_NORM * s2 * s2
}

impl Mollifier {
    pub fn new(scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Config(format!("mollifier scale must be positive, got {scale}")));
        }
        Ok(Mollifier { scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// phi_a(tau) = a phi(a tau).
    pub fn eval(&self, tau: f64) -> f64 {
        self.scale * mollifier_base(self.scale * tau)
    }
}

/// The proof-mirroring default scale a = 1 / min(s(x), d0), with d0 defaulting
/// to diameter/4.
pub fn default_mollifier_scale(d: &Domain, x: &Point, d0: Option<f64>) -> Result<f64> {
    let sx = d.boundary_distance(x)?;
    let cap = d0.unwrap_or(d.diameter() / 4.0);
    let denom = sx.min(cap);
    if denom <= 0.0 {
        return Err(Error::Config(
            "mollifier scale undefined on the boundary (s(x) = 0)".into(),
        ));
    }
    Ok(1.0 / denom)
}

/// The remainder exponent max(n - 3, 0) used in the bound hypotheses.
pub fn default_tauberian_exponent(n: usize) -> f64 {
    (n as f64 - 3.0).max(0.0)
}

// ---------------------------------------------------------------------------
// Convolution
// ---------------------------------------------------------------------------

/// G(s) = int_s^inf (w - s) phi(w) dw for the base kernel, by quarter-period
/// panels plus the analytic mean tail.
fn base_tail_first_moment(s: f64) -> f64 {
    debug_assert!(s >= 0.0);
    let width = 4.0 * PI;
    let window = 2000.0f64.max(4.0 * s);
    let panels = (window / width).ceil() as usize;
    let quad = quadrature::integrate_composite(
        |w| (w - s) * mollifier_base(w),
        s,
        s + window,
        16,
        panels,
    );
    let b = s + window;
    // int_b^inf (w - s) w^{-4} dw = 1/(2 b^2) - s/(3 b^3)
    let tail = TAIL_MEAN_COEFF * (0.5 / (b * b) - s / (3.0 * b * b * b));
    quad + tail
}

/// int |tau - u|^p phi_a(u) du for integer p in {0, 1, 2}, exact in the
/// moments of the kernel where possible.
fn convolved_abs_power(a: f64, p: u32, tau: f64) -> f64 {
    let t = tau.abs();
    match p {
        0 => 1.0,
        1 => t + 2.0 * base_tail_first_moment(a * t) / a,
        2 => t * t + BASE_SECOND_MOMENT / (a * a),
        _ => unreachable!("density powers are n-1 <= 2"),
    }
}

fn convolve_measure(m: &SpectralMeasure, moll: &Mollifier, tau: f64) -> f64 {
    match &m.kind {
        MeasureKind::Atomic { tau: ts, weight } => {
            let mut acc = 0.0;
            for (&tj, &w) in ts.iter().zip(weight) {
                if tj == 0.0 {
                    acc += w * moll.eval(tau);
                } else {
                    acc += w * (moll.eval(tau - tj) + moll.eval(tau + tj));
                }
            }
            acc
        }
        MeasureKind::PowerDensity { coeff, power } => {
            coeff * convolved_abs_power(moll.scale(), *power, tau)
        }
    }
}

fn check_grid_resolution(
    f: &SpectralMeasure,
    g: &SpectralMeasure,
    moll: &Mollifier,
    grid: &[f64],
) -> Result<()> {
    let tau_max = grid.iter().fold(0.0f64, |m, &t| m.max(t.abs()));
    let margin = 5.0 / moll.scale();
    for measure in [f, g] {
        if measure.tau_resolved.is_finite() && tau_max > measure.tau_resolved - margin {
            return Err(Error::GridExceedsResolution {
                tau_max,
                resolved: measure.tau_resolved - margin,
            });
        }
    }
    Ok(())
}

/// Sample (df - dg) * phi_a on a tau grid.
pub fn mollify_difference(
    f: &SpectralMeasure,
    g: &SpectralMeasure,
    moll: &Mollifier,
    grid: &[f64],
) -> Result<Vec<f64>> {
    check_grid_resolution(f, g, moll, grid)?;
    Ok(grid
        .par_iter()
        .map(|&t| convolve_measure(f, moll, t) - convolve_measure(g, moll, t))
        .collect())
}

// ---------------------------------------------------------------------------
// Tauberian checker
// ---------------------------------------------------------------------------

/// Empirical constants of the two bound hypotheses and of the conclusion,
/// measured as the smallest values making each inequality hold on the grid.
#[derive(Debug, Clone)]
pub struct TauberianReport {
    pub dim: usize,
    pub p: f64,
    pub a: f64,
    pub c1: f64,
    pub c2: f64,
    pub m1: f64,
    pub m2: f64,
    pub c: f64,
    /// Hypothesis violations found while measuring, empty when clean.
    pub violations: Vec<String>,
}

impl TauberianReport {
    /// Right-hand side of the conclusion bound with the frozen constants.
    pub fn bound_rhs(&self, tau: f64) -> f64 {
        let t = tau.abs();
        self.c
            * (self.m1 * self.a * (t + self.c1).powf(self.dim as f64 - 1.0)
                + self.m2 * (t + self.a) * (t + self.c2).powf(self.p))
    }

    /// Count grid points where |f - g| exceeds the frozen bound.
    pub fn count_violations(&self, f: &SpectralMeasure, g: &SpectralMeasure, grid: &[f64]) -> usize {
        grid.iter()
            .filter(|&&t| {
                let lhs = (f.primitive(t) - g.primitive(t)).abs();
                lhs > self.bound_rhs(t) * (1.0 + 1e-12) + 1e-300
            })
            .count()
    }
}

/// Measure the empirical M1, M2 and C of the bound pair on a tau grid.
pub fn tauberian_check(
    f: &SpectralMeasure,
    g: &SpectralMeasure,
    moll: &Mollifier,
    p: f64,
    c1: f64,
    c2: f64,
    grid: &[f64],
) -> Result<TauberianReport> {
    let n = f.dim().max(g.dim());
    if !(0.0..=(n as f64 - 1.0)).contains(&p) {
        return Err(Error::HypothesisViolation(format!(
            "p = {p} outside [0, n-1] = [0, {}]",
            n as f64 - 1.0
        )));
    }
    let a = moll.scale();
    if c1 < a || c2 < a {
        return Err(Error::HypothesisViolation(format!(
            "c1, c2 must be >= a = {a}, got c1 = {c1}, c2 = {c2}"
        )));
    }
    let mut violations = Vec::new();
    if !f.is_nonnegative() {
        violations.push("f is not nondecreasing (negative atom weight or density)".into());
    }
    if f.primitive(0.0) != 0.0 || g.primitive(0.0) != 0.0 {
        violations.push("primitive does not vanish at zero".into());
    }

    // M1: smallest constant with |dg| <= M1 (|tau| + c1)^{n-1} d tau
    let m1 = match &g.kind {
        MeasureKind::PowerDensity { coeff, power } => grid
            .iter()
            .map(|&t| coeff * t.abs().powi(*power as i32) / (t.abs() + c1).powf(n as f64 - 1.0))
            .fold(0.0, f64::max),
        MeasureKind::Atomic { .. } => {
            violations.push("dg carries atoms, so no finite density bound M1 exists".into());
            f64::INFINITY
        }
    };

    // M2: smallest constant with |(df - dg) * phi_a| <= M2 (|tau| + c2)^p
    let conv = mollify_difference(f, g, moll, grid)?;
    let m2 = grid
        .iter()
        .zip(&conv)
        .map(|(&t, &v)| v.abs() / (t.abs() + c2).powf(p))
        .fold(0.0, f64::max);

    // C: smallest constant closing the conclusion on the grid
    let c = grid
        .iter()
        .map(|&t| {
            let lhs = (f.primitive(t) - g.primitive(t)).abs();
            let rhs =
                m1 * a * (t.abs() + c1).powf(n as f64 - 1.0) + m2 * (t.abs() + a) * (t.abs() + c2).powf(p);
            if lhs == 0.0 {
                0.0
            } else {
                lhs / rhs
            }
        })
        .fold(0.0, f64::max);

    Ok(TauberianReport { dim: n, p, a, c1, c2, m1, m2, c, violations })
}

// ---------------------------------------------------------------------------
// Wave trace
// ---------------------------------------------------------------------------

/// Spectral window of the wave trace. The Gaussian window is the default; the
/// sharp cutoff is available for comparison but rings near orbit lengths.
#[derive(Debug, Clone, Copy)]
pub enum WaveWindow {
    Gaussian { lambda_c: f64 },
    Sharp { lambda_max: f64 },
}

/// T(t) = sum_j w(lambda_j) cos(t sqrt(lambda_j)) with the chosen window.
pub fn wave_trace(s: &Spectrum, window: WaveWindow, ts: &[f64]) -> Result<Vec<f64>> {
    let cutoff = s.resolved_cutoff();
    let weights: Vec<f64> = match window {
        WaveWindow::Gaussian { lambda_c } => {
            let limit = cutoff / 4.0;
            if lambda_c > limit {
                return Err(Error::WindowExceedsCutoff { lambda_c, limit });
            }
            s.eigenvalues().iter().map(|&l| (-l / lambda_c).exp()).collect()
        }
        WaveWindow::Sharp { lambda_max } => {
            if lambda_max > cutoff {
                return Err(Error::BeyondCutoff { lambda: lambda_max, cutoff });
            }
            s.eigenvalues()
                .iter()
                .map(|&l| if l <= lambda_max { 1.0 } else { 0.0 })
                .collect()
        }
    };
    let freqs: Vec<f64> = s.eigenvalues().iter().map(|&l| l.sqrt()).collect();
    Ok(ts
        .par_iter()
        .map(|&t| {
            freqs
                .iter()
                .zip(&weights)
                .map(|(&w, &c)| c * (t * w).cos())
                .sum()
        })
        .collect())
}

/// Local maxima of |T| exceeding a prominence threshold, with parabolic
/// sub-grid refinement. Grid endpoints count as peaks when the profile falls
/// away from them.
pub fn find_peaks(ts: &[f64], values: &[f64], prominence: f64) -> Vec<(f64, f64)> {
    let n = ts.len();
    if n < 2 {
        return Vec::new();
    }
    let y: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let mut out = Vec::new();
    let mut consider = |i: usize| {
        let peak = y[i];
        if peak <= 0.0 {
            return;
        }
        // walk to higher ground on each side, tracking the lowest saddle
        let mut left_base = peak;
        let mut j = i;
        while j > 0 {
            j -= 1;
            if y[j] > peak {
                break;
            }
            left_base = left_base.min(y[j]);
        }
        let mut right_base = peak;
        let mut j = i;
        while j + 1 < n {
            j += 1;
            if y[j] > peak {
                break;
            }
            right_base = right_base.min(y[j]);
        }
        if peak - left_base.max(right_base) < prominence {
            return;
        }
        if i == 0 || i == n - 1 {
            out.push((ts[i], peak));
            return;
        }
        let denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
        if denom.abs() < 1e-300 {
            out.push((ts[i], peak));
            return;
        }
        let delta = 0.5 * (y[i - 1] - y[i + 1]) / denom;
        let dt = 0.5 * (ts[i + 1] - ts[i - 1]);
        out.push((ts[i] + delta * dt, peak - 0.25 * (y[i - 1] - y[i + 1]) * delta));
    };
    if y[0] > y[1] {
        consider(0);
    }
    for i in 1..n - 1 {
        if y[i] > y[i - 1] && y[i] > y[i + 1] {
            consider(i);
        }
    }
    if y[n - 1] > y[n - 2] {
        consider(n - 1);
    }
    out
}

/// Continue a log-spaced grid by its own step until hi_factor times the last
/// point; the original samples form a prefix of the result.
pub fn extend_log_grid(grid: &[f64], hi_factor: f64) -> Vec<f64> {
    assert!(grid.len() >= 2 && hi_factor >= 1.0);
    let step = (grid[1] / grid[0]).ln();
    let last = *grid.last().unwrap();
    let target = last * hi_factor;
    let mut out = grid.to_vec();
    let mut ln_t = last.ln();
    loop {
        ln_t += step;
        let t = ln_t.exp();
        if t > target * (1.0 + 1e-12) {
            break;
        }
        out.push(t);
    }
    out
}
