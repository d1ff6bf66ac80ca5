//! Exact reference spectra (separated variables on boxes, Bessel zeros on
//! disks) and the special functions behind them.

pub mod bessel;
pub mod quadrature;

pub use bessel::{bessel_j, bessel_zero};

use crate::eigensolve::{ModeShape, Parity, Spectrum};
use crate::error::{Error, Result};
use crate::geometry::Domain;

/// All Dirichlet eigenvalues of a 1-3 dimensional box up to lambda_max,
/// ascending, with (k_1, ..., k_n) bookkeeping and closed-form eigenfunctions.
/// Degenerate levels are ordered lexicographically by index tuple.
pub fn box_spectrum(lengths: &[f64], lambda_max: f64) -> Result<Spectrum> {
    let domain = match lengths.len() {
        2 => Domain::rectangle(lengths[0], lengths[1])?,
        _ => Domain::interval_product(lengths.to_vec())?,
    };
    if !(lambda_max > 0.0) {
        return Err(Error::EmptySpectrum { lambda_max });
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let ground: f64 = pi2 * lengths.iter().map(|l| (1.0 / l).powi(2)).sum::<f64>();
    if ground > lambda_max {
        return Err(Error::EmptySpectrum { lambda_max });
    }
    // eigenvalues are pi^2 * sum(k_i^2 / L_i^2); keeping the pi^2 factor
    // outside the sum makes equal levels bitwise equal and closed-condition
    // queries at exact multiples of pi^2 reproducible
    let mut modes: Vec<(f64, Vec<u32>)> = Vec::new();
    let mut indices = vec![1u32; lengths.len()];
    collect_box_modes(lengths, lambda_max, 0, 0.0, &mut indices, &mut modes);
    modes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let eigenvalues: Vec<f64> = modes.iter().map(|(l, _)| *l).collect();
    let shapes: Vec<ModeShape> = modes
        .into_iter()
        .map(|(_, ks)| ModeShape::Box { indices: ks, lengths: lengths.to_vec() })
        .collect();
    let name = match lengths.len() {
        1 => "interval",
        2 => "rectangle",
        _ => "box",
    };
    Ok(Spectrum::from_modes(name, domain, eigenvalues, shapes, lambda_max))
}

fn collect_box_modes(
    lengths: &[f64],
    lambda_max: f64,
    axis: usize,
    partial_q: f64,
    indices: &mut Vec<u32>,
    out: &mut Vec<(f64, Vec<u32>)>,
) {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    if axis == lengths.len() {
        out.push((pi2 * partial_q, indices.clone()));
        return;
    }
    let mut k = 1u32;
    loop {
        let term = (k as f64 / lengths[axis]).powi(2);
        let rest: f64 = lengths[axis + 1..].iter().map(|l| (1.0 / l).powi(2)).sum();
        if pi2 * (partial_q + term + rest) > lambda_max {
            break;
        }
        indices[axis] = k;
        collect_box_modes(lengths, lambda_max, axis + 1, partial_q + term, indices, out);
        k += 1;
    }
}

/// Dirichlet spectrum of the rectangle (0,a) x (0,b):
/// pi^2 (m^2/a^2 + n^2/b^2) with eigenfunctions 2/sqrt(ab) sin sin.
pub fn rectangle_spectrum(a: f64, b: f64, lambda_max: f64) -> Result<Spectrum> {
    box_spectrum(&[a, b], lambda_max)
}

/// Dirichlet spectrum of the interval (0, L): (k pi / L)^2.
pub fn interval_spectrum(length: f64, lambda_max: f64) -> Result<Spectrum> {
    box_spectrum(&[length], lambda_max)
}

/// Dirichlet spectrum of the disk of radius r: (j_{nu,k}/r)^2, multiplicity
/// two for nu >= 1 (cos and sin branches) and one for nu = 0. Degenerate
/// levels are ordered by (nu, cos before sin, k); eigenfunctions are
/// normalized by 400-node radial Gauss quadrature.
pub fn disk_spectrum(r: f64, lambda_max: f64) -> Result<Spectrum> {
    let domain = Domain::disk(r)?;
    if !(lambda_max > 0.0) {
        return Err(Error::EmptySpectrum { lambda_max });
    }
    let zero_cap = lambda_max.sqrt() * r;
    let mut levels: Vec<(f64, u32, u32, f64)> = Vec::new(); // (lambda, nu, k, zero)
    let mut nu = 0u32;
    loop {
        let first = bessel::bessel_zero_int(nu, 1)?;
        if first > zero_cap {
            break;
        }
        let mut k = 1usize;
        loop {
            let z = bessel::bessel_zero_int(nu, k)?;
            if z > zero_cap {
                break;
            }
            levels.push(((z / r).powi(2), nu, k as u32, z));
            k += 1;
        }
        nu += 1;
    }
    if levels.is_empty() {
        return Err(Error::EmptySpectrum { lambda_max });
    }
    levels.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut eigenvalues = Vec::new();
    let mut shapes = Vec::new();
    for (lambda, nu, k, zero) in levels {
        let norm = disk_mode_norm(nu, zero, r);
        eigenvalues.push(lambda);
        shapes.push(ModeShape::Disk { nu, k, parity: Parity::Cos, r, zero, norm });
        if nu >= 1 {
            eigenvalues.push(lambda);
            shapes.push(ModeShape::Disk { nu, k, parity: Parity::Sin, r, zero, norm });
        }
    }
    Ok(Spectrum::from_modes("disk", domain, eigenvalues, shapes, lambda_max))
}

/// 1/sqrt of the squared L2 norm of J_nu(zero rho / r) {cos,sin}(nu theta).
fn disk_mode_norm(nu: u32, zero: f64, r: f64) -> f64 {
    let radial = quadrature::integrate(
        |rho| {
            let j = bessel::bessel_j_int(nu, zero * rho / r);
            j * j * rho
        },
        0.0,
        r,
        400,
    );
    let angular = if nu == 0 {
        2.0 * std::f64::consts::PI
    } else {
        std::f64::consts::PI
    };
    1.0 / (radial * angular).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn unit_square_six_lowest_below_100() {
        // oracle: brute-force lattice enumeration m^2 + n^2 <= 100 / pi^2
        let cap = 100.0 / (PI * PI);
        let mut brute = Vec::new();
        for m in 1..20u32 {
            for n in 1..20u32 {
                let q = (m * m + n * n) as f64;
                if q <= cap {
                    brute.push(PI * PI * q);
                }
            }
        }
        brute.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(brute.len(), 6);

        let s = rectangle_spectrum(1.0, 1.0, 100.0).unwrap();
        assert_eq!(s.len(), 6);
        for (got, want) in s.eigenvalues().iter().zip(&brute) {
            assert!((got - want).abs() < 1e-12);
        }
        let expect = [2.0, 5.0, 5.0, 8.0, 10.0, 10.0];
        for (got, want) in s.eigenvalues().iter().zip(expect) {
            assert!((got - want * PI * PI).abs() < 1e-12);
        }
        assert!((s.eigenvalue(0) - 19.739208802178716).abs() < 1e-12);
    }

    #[test]
    fn pi_square_lattice() {
        let s = rectangle_spectrum(PI, PI, 5.0).unwrap();
        let expect = [2.0, 5.0, 5.0];
        assert_eq!(s.len(), 3);
        for (got, want) in s.eigenvalues().iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_closed_forms() {
        let s = interval_spectrum(PI, 10.0).unwrap();
        let expect = [1.0, 4.0, 9.0];
        assert_eq!(s.len(), 3);
        for (got, want) in s.eigenvalues().iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
        let s = interval_spectrum(1.0, PI * PI + 1e-9).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.eigenvalue(0) - PI * PI).abs() < 1e-12);
        // counting matches floor(L sqrt(lambda) / pi)
        let s = interval_spectrum(1.0, 100.0).unwrap();
        assert_eq!(s.len(), (10.0f64 / PI).floor() as usize);
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn empty_spectrum_rejected() {
        assert!(matches!(
            rectangle_spectrum(1.0, 1.0, 10.0),
            Err(Error::EmptySpectrum { .. })
        ));
        assert!(matches!(disk_spectrum(1.0, 1.0), Err(Error::EmptySpectrum { .. })));
    }

    #[test]
    fn rectangle_eigenfunctions_are_l2_normalized() {
        let s = rectangle_spectrum(2.0, 1.0, 60.0).unwrap();
        // midpoint quadrature of u_0^2 over the rectangle
        let n = 400;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let x = (i as f64 + 0.5) * 2.0 / n as f64;
                let y = (j as f64 + 0.5) / n as f64;
                let u = s.eval(0, &Point::d2(x, y));
                total += u * u * (2.0 / (n * n) as f64);
            }
        }
        assert!((total - 1.0).abs() < 1e-6);
    }

    #[test]
    fn disk_ground_and_first_excited() {
        let s = disk_spectrum(1.0, 50.0).unwrap();
        let j01 = bessel_zero(0.0, 1).unwrap();
        let j11 = bessel_zero(1.0, 1).unwrap();
        assert!((s.eigenvalue(0) - j01 * j01).abs() < 1e-10);
        assert!((s.eigenvalue(0) - 5.7832).abs() < 1e-4);
        assert!((s.eigenvalue(1) - j11 * j11).abs() < 1e-10);
        assert!((s.eigenvalue(2) - j11 * j11).abs() < 1e-10);
        assert!((s.eigenvalue(1) - 14.682).abs() < 1e-3);
        assert_eq!(s.mode_label(1), "nu=1 k=1 cos");
        assert_eq!(s.mode_label(2), "nu=1 k=1 sin");
    }

    #[test]
    fn disk_scaling_by_radius() {
        let a = disk_spectrum(1.0, 120.0).unwrap();
        let b = disk_spectrum(2.0, 30.0).unwrap();
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues()) {
            assert!((x / 4.0 - y).abs() < 1e-10);
        }
    }

    #[test]
    fn disk_modes_normalized_and_match_closed_form_norm() {
        let r = 1.0;
        let s = disk_spectrum(r, 60.0).unwrap();
        for j in 0..s.len() {
            // quadrature check of the L2 norm over the disk in polar form
            let mode = |rho: f64, theta: f64| {
                let p = Point::d2(rho * theta.cos(), rho * theta.sin());
                s.eval(j, &p)
            };
            let mut total = 0.0;
            let nr = 200;
            let nt = 256;
            for it in 0..nt {
                let theta = (it as f64 + 0.5) * 2.0 * PI / nt as f64;
                total += quadrature::integrate(
                    |rho| {
                        let u = mode(rho, theta);
                        u * u * rho
                    },
                    0.0,
                    r,
                    nr,
                ) * (2.0 * PI / nt as f64);
            }
            assert!((total - 1.0).abs() < 1e-6, "mode {j} norm {total}");
        }
        // closed-form cross-check of the radial integral: r^2/2 J_{nu+1}(j_{nu,k})^2
        for (nu, k) in [(0u32, 1usize), (1, 1), (2, 1), (0, 2)] {
            let z = bessel::bessel_zero_int(nu, k).unwrap();
            let by_quad = quadrature::integrate(
                |rho| {
                    let j = bessel::bessel_j_int(nu, z * rho);
                    j * j * rho
                },
                0.0,
                1.0,
                400,
            );
            let closed = 0.5 * bessel::bessel_j_int(nu + 1, z).powi(2);
            assert!(
                (by_quad - closed).abs() < 1e-12,
                "radial norm nu={nu} k={k}: {by_quad} vs {closed}"
            );
        }
    }

    #[test]
    fn disk_lowest_ten_with_multiplicities() {
        // oracle: squares of tabulated Bessel zeros, multiplicity 2 for nu >= 1
        let s = disk_spectrum(1.0, 50.0).unwrap();
        let want = [
            2.4048255576957728f64, // (0,1)
            3.8317059702075123,    // (1,1) x2
            3.8317059702075123,
            5.1356223018406826, // (2,1) x2
            5.1356223018406826,
            5.5200781102863106, // (0,2)
            6.3801618959239835, // (3,1) x2
            6.3801618959239835,
            7.0155866698156188, // (1,2) x2
            7.0155866698156188,
        ];
        assert!(s.len() >= want.len());
        for (i, z) in want.iter().enumerate() {
            assert!(
                (s.eigenvalue(i) - z * z).abs() < 1e-9,
                "level {i}: {} vs {}",
                s.eigenvalue(i),
                z * z
            );
        }
    }

    #[test]
    fn box_3d_spectrum() {
        let s = box_spectrum(&[1.0, 1.0, 1.0], 7.0 * PI * PI).unwrap();
        // ground state 3 pi^2, then the (2,1,1) permutations at 6 pi^2
        assert!((s.eigenvalue(0) - 3.0 * PI * PI).abs() < 1e-12);
        assert_eq!(s.len(), 4);
        for j in 1..4 {
            assert!((s.eigenvalue(j) - 6.0 * PI * PI).abs() < 1e-12);
        }
    }
}
