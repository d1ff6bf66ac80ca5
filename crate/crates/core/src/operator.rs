//! Sparse symmetric finite-difference Dirichlet Laplacian on an interior grid.
//!
//! The stencil is the standard second-order 2n+1 point one (3-point in 1D,
//! 5-point in 2D, 7-point in 3D). Lattice neighbors falling outside the domain
//! are eliminated, which imposes the homogeneous Dirichlet condition.

use std::io::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Domain, InteriorGrid};

/// Symmetric sparse matrix stored as diagonal plus strict upper triangle in
/// compressed-row layout. One coefficient per unordered index pair.
#[derive(Debug, Clone)]
pub struct SparseSymMatrix {
    dim: usize,
    diag: Vec<f64>,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    val: Vec<f64>,
}

impl SparseSymMatrix {
    /// Build from the diagonal and strict-upper entries (i < j). Duplicate
    /// pairs are summed; entries below the diagonal are mirrored up.
    pub fn from_parts(dim: usize, diag: Vec<f64>, upper: &[(u32, u32, f64)]) -> Result<Self> {
        if diag.len() != dim {
            return Err(Error::LengthMismatch { expected: dim, got: diag.len() });
        }
        let mut per_row: Vec<Vec<(u32, f64)>> = vec![Vec::new(); dim];
        for &(i, j, v) in upper {
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            if i == j || (j as usize) >= dim {
                return Err(Error::InvalidDomain(format!("bad matrix entry ({i}, {j})")));
            }
            per_row[i as usize].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut val = Vec::new();
        row_ptr.push(0);
        for row in &mut per_row {
            row.sort_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < row.len() {
                let j = row[k].0;
                let mut v = row[k].1;
                while k + 1 < row.len() && row[k + 1].0 == j {
                    k += 1;
                    v += row[k].1;
                }
                col_idx.push(j);
                val.push(v);
                k += 1;
            }
            row_ptr.push(col_idx.len());
        }
        Ok(SparseSymMatrix { dim, diag, row_ptr, col_idx, val })
    }

    pub fn diagonal(dim: usize, diag: Vec<f64>) -> Result<Self> {
        SparseSymMatrix::from_parts(dim, diag, &[])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Strict-upper entries of one row, as (column, value) pairs.
    pub fn upper_row(&self, i: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        self.col_idx[lo..hi].iter().copied().zip(self.val[lo..hi].iter().copied())
    }

    pub fn nnz_upper(&self) -> usize {
        self.val.len()
    }

    /// Half bandwidth: max |i - j| over stored entries.
    pub fn bandwidth(&self) -> usize {
        let mut bw = 0usize;
        for i in 0..self.dim {
            for (j, _) in self.upper_row(i) {
                bw = bw.max(j as usize - i);
            }
        }
        bw
    }

    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::LengthMismatch { expected: self.dim, got: x.len() });
        }
        for i in 0..self.dim {
            y[i] = self.diag[i] * x[i];
        }
        for i in 0..self.dim {
            let lo = self.row_ptr[i];
            let hi = self.row_ptr[i + 1];
            let xi = x[i];
            let mut acc = 0.0;
            for k in lo..hi {
                let j = self.col_idx[k] as usize;
                let v = self.val[k];
                acc += v * x[j];
                y[j] += v * xi;
            }
            y[i] += acc;
        }
        Ok(())
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.dim];
        self.apply_into(x, &mut y)?;
        Ok(y)
    }

    /// Gershgorin upper bound on the spectrum: max over rows of
    /// diag + sum of |off-diagonal| (the symmetric entry counts on both rows).
    pub fn gershgorin_max(&self) -> f64 {
        let mut radius = vec![0.0f64; self.dim];
        for i in 0..self.dim {
            for (j, v) in self.upper_row(i) {
                radius[i] += v.abs();
                radius[j as usize] += v.abs();
            }
        }
        (0..self.dim)
            .map(|i| self.diag[i] + radius[i])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Write "row col value" triplets, 0-based, upper triangle plus diagonal,
    /// 17 significant digits.
    pub fn dump_coo<W: Write>(&self, w: &mut W) -> Result<()> {
        for i in 0..self.dim {
            writeln!(w, "{} {} {:.16e}", i, i, self.diag[i])?;
            for (j, v) in self.upper_row(i) {
                writeln!(w, "{} {} {:.16e}", i, j, v)?;
            }
        }
        Ok(())
    }
}

/// Discrete Dirichlet Laplacian of a domain at mesh width h.
#[derive(Debug, Clone)]
pub struct GridOperator {
    domain: Domain,
    grid: Arc<InteriorGrid>,
    matrix: SparseSymMatrix,
}

/// Assemble the 2n+1-point Dirichlet Laplacian: diagonal 2n/h², off-diagonal
/// -1/h² between lattice-adjacent interior points.
pub fn assemble_dirichlet_laplacian(domain: &Domain, h: f64) -> Result<GridOperator> {
    let grid = domain.interior_grid(h)?;
    Ok(GridOperator::from_grid(domain.clone(), grid))
}

impl GridOperator {
    pub fn from_grid(domain: Domain, grid: Arc<InteriorGrid>) -> Self {
        let n = grid.len();
        let dim = grid.dim();
        let h = grid.h();
        let inv_h2 = 1.0 / (h * h);
        let diag = vec![2.0 * dim as f64 * inv_h2; n];
        let mut upper = Vec::new();
        for i in 0..n {
            let key = grid.lattice(i);
            for axis in 0..dim {
                let mut nb = key;
                nb[axis] += 1;
                if let Some(j) = grid.index_of(nb) {
                    // scan order guarantees the +axis neighbor has larger index
                    debug_assert!(j as usize > i);
                    upper.push((i as u32, j, -inv_h2));
                }
            }
        }
        let matrix = SparseSymMatrix::from_parts(n, diag, &upper)
            .expect("assembly produces consistent entries");
        GridOperator { domain, grid, matrix }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn grid(&self) -> &Arc<InteriorGrid> {
        &self.grid
    }

    pub fn matrix(&self) -> &SparseSymMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn h(&self) -> f64 {
        self.grid.h()
    }

    pub fn apply(&self, field: &[f64]) -> Result<Vec<f64>> {
        self.matrix.apply(field)
    }

    pub fn dump_coo<W: Write>(&self, w: &mut W) -> Result<()> {
        self.matrix.dump_coo(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn interval_tridiagonal() {
        let d = Domain::interval(1.0).unwrap();
        let op = assemble_dirichlet_laplacian(&d, 0.25).unwrap();
        assert_eq!(op.dim(), 3);
        assert_eq!(op.matrix().diag(), &[32.0, 32.0, 32.0]);
        let upper: Vec<_> = (0..3).flat_map(|i| op.matrix().upper_row(i).map(move |(j, v)| (i, j, v))).collect();
        assert_eq!(upper, vec![(0, 1, -16.0), (1, 2, -16.0)]);
        // row sums of the tridiagonal
        assert_eq!(op.apply(&[1.0, 1.0, 1.0]).unwrap(), vec![16.0, 0.0, 16.0]);
        assert_eq!(op.apply(&[0.0, 0.0, 0.0]).unwrap(), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn square_single_point() {
        let op = assemble_dirichlet_laplacian(&Domain::unit_square(), 0.5).unwrap();
        assert_eq!(op.dim(), 1);
        assert_eq!(op.matrix().diag(), &[16.0]);
        assert_eq!(op.matrix().nnz_upper(), 0);
    }

    #[test]
    fn square_h8_stencil_enumeration() {
        let op = assemble_dirichlet_laplacian(&Domain::unit_square(), 0.125).unwrap();
        assert_eq!(op.dim(), 49);
        let g = op.grid().clone();
        // oracle: direct stencil enumeration over lattice-adjacent pairs
        let mut expected_pairs = 0;
        for i in 0..g.len() {
            let k = g.lattice(i);
            for nb in [[k[0] + 1, k[1], 0], [k[0], k[1] + 1, 0]] {
                if g.index_of(nb).is_some() {
                    expected_pairs += 1;
                }
            }
        }
        assert_eq!(expected_pairs, 2 * 7 * 6);
        assert_eq!(op.matrix().nnz_upper(), expected_pairs);
        for i in 0..op.dim() {
            assert_eq!(op.matrix().diag()[i], 256.0);
            for (_, v) in op.matrix().upper_row(i) {
                assert_eq!(v, -64.0);
            }
        }
    }

    #[test]
    fn apply_is_symmetric_and_positive() {
        let op = assemble_dirichlet_laplacian(&Domain::l_shape(), 0.125).unwrap();
        let n = op.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
            let ax = op.apply(&x).unwrap();
            let ay = op.apply(&y).unwrap();
            let xay: f64 = x.iter().zip(&ay).map(|(a, b)| a * b).sum();
            let yax: f64 = y.iter().zip(&ax).map(|(a, b)| a * b).sum();
            assert!((xay - yax).abs() <= 1e-9 * xay.abs().max(1.0));
            let xax: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
            assert!(xax > 0.0);
        }
    }

    #[test]
    fn gershgorin_bound_is_exact() {
        for (domain, h) in [
            (Domain::unit_square(), 0.125),
            (Domain::disk(1.0).unwrap(), 0.125),
            (Domain::interval(1.0).unwrap(), 0.25),
        ] {
            let op = assemble_dirichlet_laplacian(&domain, h).unwrap();
            let n = domain.dim() as f64;
            assert!(op.matrix().gershgorin_max() <= 4.0 * n / (h * h) + 1e-9);
        }
    }

    #[test]
    fn length_mismatch_rejected() {
        let op = assemble_dirichlet_laplacian(&Domain::unit_square(), 0.25).unwrap();
        assert!(matches!(op.apply(&[1.0]), Err(Error::LengthMismatch { .. })));
    }

    /// The 8-element dihedral symmetry group of the square permutes grid
    /// points; conjugating by any of those permutations must fix the operator.
    #[test]
    fn square_dihedral_symmetry_commutes() {
        let h = 0.125;
        let op = assemble_dirichlet_laplacian(&Domain::unit_square(), h).unwrap();
        let g = op.grid().clone();
        let n = g.len();
        let m = (1.0 / h).round() as i64; // lattice points 1..m-1 per axis
        let transforms: [fn(i64, i64, i64) -> (i64, i64); 8] = [
            |x, y, _m| (x, y),
            |x, y, m| (m - x, y),
            |x, y, m| (x, m - y),
            |x, y, m| (m - x, m - y),
            |x, y, _m| (y, x),
            |x, y, m| (m - y, x),
            |x, y, m| (y, m - x),
            |x, y, m| (m - y, m - x),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        for t in transforms {
            let perm: Vec<usize> = (0..n)
                .map(|i| {
                    let k = g.lattice(i);
                    let (px, py) = t(k[0], k[1], m);
                    g.index_of([px, py, 0]).unwrap() as usize
                })
                .collect();
            // (P^T A P) x == A x for all x  <=>  A P x == P A x
            let px: Vec<f64> = {
                let mut out = vec![0.0; n];
                for i in 0..n {
                    out[perm[i]] = x[i];
                }
                out
            };
            let apx = op.apply(&px).unwrap();
            let ax = op.apply(&x).unwrap();
            let pax: Vec<f64> = {
                let mut out = vec![0.0; n];
                for i in 0..n {
                    out[perm[i]] = ax[i];
                }
                out
            };
            for i in 0..n {
                assert!((apx[i] - pax[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn coo_dump_format() {
        let op = assemble_dirichlet_laplacian(&Domain::interval(1.0).unwrap(), 0.25).unwrap();
        let mut buf = Vec::new();
        op.dump_coo(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5); // 3 diagonal + 2 upper entries
        assert_eq!(lines[0], format!("0 0 {:.16e}", 32.0));
        assert_eq!(lines[1], format!("0 1 {:.16e}", -16.0));
    }

    #[test]
    fn disk_neighbors_eliminated_at_staircase() {
        let d = Domain::disk(1.0).unwrap();
        let op = assemble_dirichlet_laplacian(&d, 0.25).unwrap();
        // every stored pair connects two interior points at lattice distance one
        let g = op.grid().clone();
        for i in 0..op.dim() {
            let ki = g.lattice(i);
            for (j, v) in op.matrix().upper_row(i) {
                let kj = g.lattice(j as usize);
                let dist: i64 = (0..3).map(|a| (ki[a] - kj[a]).abs()).sum();
                assert_eq!(dist, 1);
                assert_eq!(v, -16.0);
                assert!(d.contains(&g.point(i)));
                assert!(d.contains(&Point::d2(
                    kj[0] as f64 * 0.25,
                    kj[1] as f64 * 0.25
                )));
            }
        }
    }
}
