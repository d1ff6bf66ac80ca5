//! Bessel functions of the first kind and their positive zeros.
//!
//! Power series below x = 16, Hankel asymptotic expansion above, half-integer
//! orders by their closed trigonometric forms. Double precision throughout; no
//! external special-function dependency.

use crate::error::{Error, Result};

const SERIES_ASYMPTOTIC_SWITCH: f64 = 16.0;

/// Orders the public evaluator accepts: what the free-term kernels of
/// dimensions n <= 4 need.
const SUPPORTED_ORDERS: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];

/// J_nu(x) for nu in {0, 1/2, 1, 3/2, 2} and x >= 0.
/// Absolute error <= 1e-10 for x <= 1000.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !SUPPORTED_ORDERS.contains(&nu) {
        return Err(Error::UnsupportedOrder { nu });
    }
    if !(x >= 0.0) {
        return Err(Error::UnsupportedOrder { nu: x });
    }
    Ok(eval_any_order(nu, x))
}

/// J_n(x) for any nonnegative integer order; the disk oracle needs orders
/// beyond the public set.
pub(crate) fn bessel_j_int(n: u32, x: f64) -> f64 {
    eval_any_order(n as f64, x)
}

fn eval_any_order(nu: f64, x: f64) -> f64 {
    debug_assert!(nu >= 0.0 && (nu.fract() == 0.0 || nu.fract() == 0.5));
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if nu == 0.5 {
        return (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin();
    }
    if nu == 1.5 {
        return (2.0 / (std::f64::consts::PI * x)).sqrt() * (x.sin() / x - x.cos());
    }
    if x <= SERIES_ASYMPTOTIC_SWITCH {
        series(nu, x)
    } else {
        asymptotic(nu, x)
    }
}

fn gamma_nu_plus_one(nu: f64) -> f64 {
    // nu is a nonnegative integer here (half-integers use closed forms)
    let mut g = 1.0;
    let mut k = nu;
    while k > 0.5 {
        g *= k;
        k -= 1.0;
    }
    g
}

fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = half.powf(nu) / gamma_nu_plus_one(nu);
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * (nu + kf));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
    }
    sum
}

fn asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let inv8x = 1.0 / (8.0 * x);
    // c_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! (8x)^k), split into the cosine
    // (even k) and sine (odd k) sums of the Hankel expansion
    let mut p = 1.0;
    let mut q = 0.0;
    let mut c = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..=16 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        c *= (mu - odd * odd) * inv8x / kf;
        if c.abs() > last {
            break; // divergent tail reached
        }
        last = c.abs();
        match k % 4 {
            1 => q += c,
            2 => p -= c,
            3 => q -= c,
            _ => p += c,
        }
    }
    let omega = x - nu * std::f64::consts::FRAC_PI_2 - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}

/// k-th positive zero of J_nu, by sign-bracketing and bisection.
/// Absolute accuracy well below 1e-10.
pub fn bessel_zero(nu: f64, k: usize) -> Result<f64> {
    if !SUPPORTED_ORDERS.contains(&nu) {
        return Err(Error::UnsupportedOrder { nu });
    }
    if k == 0 {
        return Err(Error::BracketFailure { nu, k });
    }
    bessel_zero_any(nu, k)
}

pub(crate) fn bessel_zero_int(n: u32, k: usize) -> Result<f64> {
    bessel_zero_any(n as f64, k)
}

fn bessel_zero_any(nu: f64, k: usize) -> Result<f64> {
    let step = 0.25;
    let mut a = 1e-9f64.max(nu * 1e-9);
    let mut fa = eval_any_order(nu, a);
    if fa == 0.0 {
        a = 1e-6;
        fa = eval_any_order(nu, a);
    }
    let mut found = 0usize;
    // zeros of J_nu are separated by at least ~pi, so a 0.25 scan cannot skip one
    let max_x = nu + (k as f64 + 4.0) * std::f64::consts::PI + 10.0;
    let mut x = a;
    while x < max_x {
        let b = x + step;
        let fb = eval_any_order(nu, b);
        if fa == 0.0 {
            found += 1;
            if found == k {
                return Ok(x);
            }
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            found += 1;
            if found == k {
                return Ok(bisect(nu, x, b, fa));
            }
        }
        x = b;
        fa = fb;
    }
    Err(Error::BracketFailure { nu, k })
}

fn bisect(nu: f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = eval_any_order(nu, m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
