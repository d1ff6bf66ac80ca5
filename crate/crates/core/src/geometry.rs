//! Computational domains and their metric quantities: containment, area,
//! perimeter, diameter, distance-to-boundary and interior lattice grids.
//!
//! Everything here is flat Euclidean: geodesics are segments, so the distance
//! from an interior point to the boundary is the plain point-to-curve distance.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A point in 1, 2 or 3 dimensions. Unused coordinates are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; 3],
    dim: u8,
}

impl Point {
    pub fn d1(x: f64) -> Self {
        Point { coords: [x, 0.0, 0.0], dim: 1 }
    }

    pub fn d2(x: f64, y: f64) -> Self {
        Point { coords: [x, y, 0.0], dim: 2 }
    }

    pub fn d3(x: f64, y: f64, z: f64) -> Self {
        Point { coords: [x, y, z], dim: 3 }
    }

    pub fn from_slice(c: &[f64]) -> Result<Self> {
        match c.len() {
            1 => Ok(Point::d1(c[0])),
            2 => Ok(Point::d2(c[0], c[1])),
            3 => Ok(Point::d3(c[0], c[1], c[2])),
            n => Err(Error::InvalidDomain(format!("points must have 1..=3 coordinates, got {n}"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim as usize]
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Euclidean norm of the position vector.
    pub fn norm(&self) -> f64 {
        self.coords().iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// Supported domain shapes. Boxes are anchored at the origin with positive
/// side lengths; disk and annulus are centered at the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Rectangle { a: f64, b: f64 },
    Disk { r: f64 },
    Annulus { r_in: f64, r_out: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    IntervalProduct { lengths: Vec<f64> },
}

/// A validated computational domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    shape: Shape,
}

fn require_positive(value: f64, name: &str) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDomain(format!("{name} must be strictly positive, got {value}")))
    }
}

impl Domain {
    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        require_positive(a, "a")?;
        require_positive(b, "b")?;
        Ok(Domain { shape: Shape::Rectangle { a, b } })
    }

    pub fn unit_square() -> Self {
        Domain::rectangle(1.0, 1.0).expect("unit square is valid")
    }

    pub fn disk(r: f64) -> Result<Self> {
        require_positive(r, "r")?;
        Ok(Domain { shape: Shape::Disk { r } })
    }

    pub fn annulus(r_in: f64, r_out: f64) -> Result<Self> {
        require_positive(r_in, "r_in")?;
        require_positive(r_out, "r_out")?;
        if r_in >= r_out {
            return Err(Error::InvalidDomain(format!(
                "annulus requires r_in < r_out, got {r_in} >= {r_out}"
            )));
        }
        Ok(Domain { shape: Shape::Annulus { r_in, r_out } })
    }

    /// Simple, counter-clockwise oriented polygon with at least 3 vertices.
    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidDomain(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|v| !v[0].is_finite() || !v[1].is_finite()) {
            return Err(Error::InvalidDomain("polygon vertices must be finite".into()));
        }
        let signed = shoelace(&vertices);
        if signed <= 0.0 {
            return Err(Error::InvalidDomain(
                "polygon must be counter-clockwise oriented with positive area".into(),
            ));
        }
        if self_intersects(&vertices) {
            return Err(Error::InvalidDomain("polygon must be simple (no self-intersection)".into()));
        }
        Ok(Domain { shape: Shape::Polygon { vertices } })
    }

    /// The L-shaped benchmark domain: unit square minus its upper-right quarter.
    pub fn l_shape() -> Self {
        Domain::polygon(vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 0.5],
            [0.5, 0.5],
            [0.5, 1.0],
            [0.0, 1.0],
        ])
        .expect("L-shape is a valid polygon")
    }

    /// 1D interval or 3D box (a 2D product is accepted as a rectangle alias).
    pub fn interval_product(lengths: Vec<f64>) -> Result<Self> {
        if lengths.is_empty() || lengths.len() > 3 {
            return Err(Error::InvalidDomain(format!(
                "interval product supports 1..=3 factors, got {}",
                lengths.len()
            )));
        }
        for (i, &l) in lengths.iter().enumerate() {
            require_positive(l, &format!("lengths[{i}]"))?;
        }
        Ok(Domain { shape: Shape::IntervalProduct { lengths } })
    }

    pub fn interval(length: f64) -> Result<Self> {
        Domain::interval_product(vec![length])
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            Shape::IntervalProduct { lengths } => lengths.len(),
            _ => 2,
        }
    }

    /// n-dimensional volume (area in 2D, length in 1D).
    pub fn area(&self) -> f64 {
        match &self.shape {
            Shape::Rectangle { a, b } => a * b,
            Shape::Disk { r } => std::f64::consts::PI * r * r,
            Shape::Annulus { r_in, r_out } => std::f64::consts::PI * (r_out * r_out - r_in * r_in),
            Shape::Polygon { vertices } => shoelace(vertices),
            Shape::IntervalProduct { lengths } => lengths.iter().product(),
        }
    }

    /// Boundary measure: curve length in 2D, surface area in 3D, point count in 1D.
    pub fn perimeter(&self) -> f64 {
        match &self.shape {
            Shape::Rectangle { a, b } => 2.0 * (a + b),
            Shape::Disk { r } => 2.0 * std::f64::consts::PI * r,
            Shape::Annulus { r_in, r_out } => 2.0 * std::f64::consts::PI * (r_in + r_out),
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| {
                        let p = vertices[i];
                        let q = vertices[(i + 1) % n];
                        ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
                    })
                    .sum()
            }
            Shape::IntervalProduct { lengths } => match lengths.len() {
                1 => 2.0,
                2 => 2.0 * (lengths[0] + lengths[1]),
                _ => {
                    let (a, b, c) = (lengths[0], lengths[1], lengths[2]);
                    2.0 * (a * b + b * c + a * c)
                }
            },
        }
    }

    /// Supremum of pairwise distances over the closed region.
    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Rectangle { a, b } => (a * a + b * b).sqrt(),
            Shape::Disk { r } => 2.0 * r,
            Shape::Annulus { r_out, .. } => 2.0 * r_out,
            Shape::Polygon { vertices } => {
                let mut best = 0.0f64;
                for i in 0..vertices.len() {
                    for j in (i + 1)..vertices.len() {
                        let dx = vertices[i][0] - vertices[j][0];
                        let dy = vertices[i][1] - vertices[j][1];
                        best = best.max((dx * dx + dy * dy).sqrt());
                    }
                }
                best
            }
            Shape::IntervalProduct { lengths } => {
                lengths.iter().map(|l| l * l).sum::<f64>().sqrt()
            }
        }
    }

    /// Strict interior test; boundary points return false.
    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.dim() {
            return false;
        }
        match &self.shape {
            Shape::Rectangle { a, b } => {
                p.x() > 0.0 && p.x() < *a && p.y() > 0.0 && p.y() < *b
            }
            Shape::Disk { r } => p.norm() < *r,
            Shape::Annulus { r_in, r_out } => {
                let rho = p.norm();
                rho > *r_in && rho < *r_out
            }
            Shape::Polygon { vertices } => polygon_contains(vertices, p.x(), p.y()),
            Shape::IntervalProduct { lengths } => lengths
                .iter()
                .zip(p.coords())
                .all(|(&l, &c)| c > 0.0 && c < l),
        }
    }

    /// Distance from a point of the closed region to the boundary; zero on the
    /// boundary itself. Errors when the point lies outside the closure.
    pub fn boundary_distance(&self, p: &Point) -> Result<f64> {
        if p.dim() != self.dim() {
            return Err(Error::PointOutsideDomain(p.coords().to_vec()));
        }
        let tol = 1e-12 * self.diameter().max(1.0);
        let d = match &self.shape {
            Shape::Rectangle { a, b } => {
                let d = p.x().min(a - p.x()).min(p.y()).min(b - p.y());
                if d < -tol {
                    return Err(Error::PointOutsideDomain(p.coords().to_vec()));
                }
                d.max(0.0)
            }
            Shape::Disk { r } => {
                let d = r - p.norm();
                if d < -tol {
                    return Err(Error::PointOutsideDomain(p.coords().to_vec()));
                }
                d.max(0.0)
            }
            Shape::Annulus { r_in, r_out } => {
                let rho = p.norm();
                let d = (rho - r_in).min(r_out - rho);
                if d < -tol {
                    return Err(Error::PointOutsideDomain(p.coords().to_vec()));
                }
                d.max(0.0)
            }
            Shape::Polygon { vertices } => {
                let d = polygon_boundary_distance(vertices, p.x(), p.y());
                if !polygon_contains(vertices, p.x(), p.y()) && d > tol {
                    return Err(Error::PointOutsideDomain(p.coords().to_vec()));
                }
                if d <= tol {
                    0.0
                } else {
                    d
                }
            }
            Shape::IntervalProduct { lengths } => {
                let mut d = f64::INFINITY;
                for (&l, &c) in lengths.iter().zip(p.coords()) {
                    d = d.min(c).min(l - c);
                }
                if d < -tol {
                    return Err(Error::PointOutsideDomain(p.coords().to_vec()));
                }
                d.max(0.0)
            }
        };
        Ok(d)
    }

    /// Membership in the closed region, up to a small metric tolerance.
    pub fn in_closure(&self, p: &Point) -> bool {
        self.boundary_distance(p).is_ok()
    }

    /// Axis-aligned bounding box of the closure, as (lo, hi) per coordinate.
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        match &self.shape {
            Shape::Rectangle { a, b } => vec![(0.0, *a), (0.0, *b)],
            Shape::Disk { r } => vec![(-r, *r), (-r, *r)],
            Shape::Annulus { r_out, .. } => vec![(-r_out, *r_out), (-r_out, *r_out)],
            Shape::Polygon { vertices } => {
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for v in vertices {
                    for k in 0..2 {
                        lo[k] = lo[k].min(v[k]);
                        hi[k] = hi[k].max(v[k]);
                    }
                }
                vec![(lo[0], hi[0]), (lo[1], hi[1])]
            }
            Shape::IntervalProduct { lengths } => lengths.iter().map(|&l| (0.0, l)).collect(),
        }
    }

    /// Interior lattice points of h·Z^n, ordered lexicographically with the
    /// last coordinate outermost (y-major in 2D). Boundary points are excluded,
    /// which realizes the homogeneous Dirichlet condition by elimination.
    pub fn interior_grid(&self, h: f64) -> Result<Arc<InteriorGrid>> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidDomain(format!("mesh width must be positive, got {h}")));
        }
        let dim = self.dim();
        let bb = self.bounding_box();
        let mut ranges = Vec::with_capacity(dim);
        for &(lo, hi) in &bb {
            let k_lo = (lo / h).floor() as i64;
            let k_hi = (hi / h).ceil() as i64;
            ranges.push((k_lo, k_hi));
        }

        let mut lattice = Vec::new();
        let mut scan = |key: [i64; 3]| {
            let p = match dim {
                1 => Point::d1(key[0] as f64 * h),
                2 => Point::d2(key[0] as f64 * h, key[1] as f64 * h),
                _ => Point::d3(key[0] as f64 * h, key[1] as f64 * h, key[2] as f64 * h),
            };
            if self.contains(&p) {
                lattice.push(key);
            }
        };
        match dim {
            1 => {
                for i in ranges[0].0..=ranges[0].1 {
                    scan([i, 0, 0]);
                }
            }
            2 => {
                for j in ranges[1].0..=ranges[1].1 {
                    for i in ranges[0].0..=ranges[0].1 {
                        scan([i, j, 0]);
                    }
                }
            }
            _ => {
                for k in ranges[2].0..=ranges[2].1 {
                    for j in ranges[1].0..=ranges[1].1 {
                        for i in ranges[0].0..=ranges[0].1 {
                            scan([i, j, k]);
                        }
                    }
                }
            }
        }
        if lattice.is_empty() {
            return Err(Error::GridTooCoarse { h });
        }
        let index = lattice
            .iter()
            .enumerate()
            .map(|(n, &key)| (key, n as u32))
            .collect();
        Ok(Arc::new(InteriorGrid { dim, h, lattice, index }))
    }
}

/// Interior lattice points of a domain at mesh width h, with the map from
/// integer lattice coordinates back to the point index.
#[derive(Debug, Clone)]
pub struct InteriorGrid {
    dim: usize,
    h: f64,
    lattice: Vec<[i64; 3]>,
    index: HashMap<[i64; 3], u32>,
}

impl InteriorGrid {
    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn lattice(&self, i: usize) -> [i64; 3] {
        self.lattice[i]
    }

    pub fn point(&self, i: usize) -> Point {
        let key = self.lattice[i];
        match self.dim {
            1 => Point::d1(key[0] as f64 * self.h),
            2 => Point::d2(key[0] as f64 * self.h, key[1] as f64 * self.h),
            _ => Point::d3(
                key[0] as f64 * self.h,
                key[1] as f64 * self.h,
                key[2] as f64 * self.h,
            ),
        }
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    pub fn index_of(&self, key: [i64; 3]) -> Option<u32> {
        self.index.get(&key).copied()
    }

    /// Quadrature weight h^n of the discrete L2 inner product.
    pub fn cell_weight(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }
}

fn shoelace(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    let mut twice = 0.0;
    for i in 0..n {
        let p = vertices[i];
        let q = vertices[(i + 1) % n];
        twice += p[0] * q[1] - q[0] * p[1];
    }
    twice / 2.0
}

fn on_segment(a: [f64; 2], b: [f64; 2], x: f64, y: f64, tol: f64) -> bool {
    let cross = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]);
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    if cross.abs() > tol * len.max(1.0) {
        return false;
    }
    let dot = (x - a[0]) * (b[0] - a[0]) + (y - a[1]) * (b[1] - a[1]);
    dot >= -tol && dot <= len * len + tol
}

/// Ray casting with the half-open edge rule, which acts as a fixed
/// infinitesimal downward perturbation of the ray and so handles rays through
/// vertices consistently. Points on an edge are classified as outside.
fn polygon_contains(vertices: &[[f64; 2]], x: f64, y: f64) -> bool {
    let tol = 1e-12;
    let n = vertices.len();
    for i in 0..n {
        if on_segment(vertices[i], vertices[(i + 1) % n], x, y, tol) {
            return false;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        if (a[1] > y) != (b[1] > y) {
            let x_cross = a[0] + (y - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

fn point_segment_distance(a: [f64; 2], b: [f64; 2], x: f64, y: f64) -> f64 {
    let dx = b[0] - a[0];
    let dy = b[1] - a[1];
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((x - a[0]) * dx + (y - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let px = a[0] + t * dx;
    let py = a[1] + t * dy;
    ((x - px).powi(2) + (y - py).powi(2)).sqrt()
}

fn polygon_boundary_distance(vertices: &[[f64; 2]], x: f64, y: f64) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| point_segment_distance(vertices[i], vertices[(i + 1) % n], x, y))
        .fold(f64::INFINITY, f64::min)
}

fn segments_properly_intersect(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| -> f64 {
        (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    };
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn self_intersects(vertices: &[[f64; 2]]) -> bool {
    let n = vertices.len();
    for i in 0..n {
        let a1 = vertices[i];
        let a2 = vertices[(i + 1) % n];
        for j in (i + 1)..n {
            // skip adjacent edges (they share a vertex)
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let b1 = vertices[j];
            let b2 = vertices[(j + 1) % n];
            if segments_properly_intersect(a1, a2, b1, b2) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    fn l_vertices() -> Vec<[f64; 2]> {
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 0.5], [0.5, 0.5], [0.5, 1.0], [0.0, 1.0]]
    }

    #[test]
    fn areas_match_closed_forms() {
        assert_eq!(Domain::unit_square().area(), 1.0);
        assert!((Domain::disk(1.0).unwrap().area() - PI).abs() < 1e-15);
        // oracle: shoelace over the six L-shape vertices, accumulated by hand
        let v = l_vertices();
        let mut twice = 0.0;
        for i in 0..v.len() {
            let p = v[i];
            let q = v[(i + 1) % v.len()];
            twice += p[0] * q[1] - q[0] * p[1];
        }
        assert_eq!(twice / 2.0, 0.75);
        assert_eq!(Domain::l_shape().area(), 0.75);
        let annulus = Domain::annulus(0.25, 1.0).unwrap();
        assert!((annulus.area() - PI * (1.0 - 0.0625)).abs() < 1e-15);
    }

    #[test]
    fn diameters() {
        assert!((Domain::unit_square().diameter() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(Domain::disk(1.0).unwrap().diameter(), 2.0);
        // oracle: brute force over vertex pairs
        let v = l_vertices();
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in 0..v.len() {
                let d = ((v[i][0] - v[j][0]).powi(2) + (v[i][1] - v[j][1]).powi(2)).sqrt();
                best = best.max(d);
            }
        }
        assert!((best - 2f64.sqrt()).abs() < 1e-15);
        assert!((Domain::l_shape().diameter() - best).abs() < 1e-15);
    }

    #[test]
    fn boundary_distance_square() {
        let sq = Domain::unit_square();
        assert_eq!(sq.boundary_distance(&Point::d2(0.5, 0.5)).unwrap(), 0.5);
        assert_eq!(sq.boundary_distance(&Point::d2(0.0, 0.3)).unwrap(), 0.0);
        // oracle: min over the four edge distances
        let p = Point::d2(0.25, 0.5);
        let by_edges = [0.25f64, 0.75, 0.5, 0.5].into_iter().fold(f64::INFINITY, f64::min);
        assert_eq!(by_edges, 0.25);
        assert_eq!(sq.boundary_distance(&p).unwrap(), 0.25);
        assert!(sq.boundary_distance(&Point::d2(1.5, 0.5)).is_err());
    }

    #[test]
    fn boundary_distance_annulus_hole_errors() {
        let an = Domain::annulus(0.25, 1.0).unwrap();
        assert!(an.boundary_distance(&Point::d2(0.0, 0.0)).is_err());
        let d = an.boundary_distance(&Point::d2(0.5, 0.0)).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn containment() {
        let sq = Domain::unit_square();
        assert!(sq.contains(&Point::d2(0.5, 0.5)));
        assert!(!sq.contains(&Point::d2(1.0, 0.5)));
        let l = Domain::l_shape();
        assert!(!l.contains(&Point::d2(0.75, 0.75)));
        assert!(l.contains(&Point::d2(0.25, 0.75)));
        // points on an edge of the polygon are outside (Dirichlet nodes eliminated)
        assert!(!l.contains(&Point::d2(0.5, 0.75)));
        assert!(!l.contains(&Point::d2(1.0, 0.25)));
    }

    #[test]
    fn polygon_validation() {
        // clockwise square rejected
        assert!(Domain::polygon(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).is_err());
        // bow tie rejected
        assert!(Domain::polygon(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).is_err());
        assert!(Domain::polygon(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
    }

    #[test]
    fn interior_grid_counts() {
        let sq = Domain::unit_square();
        let g = sq.interior_grid(0.5).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.point(0), Point::d2(0.5, 0.5));

        let g = sq.interior_grid(0.125).unwrap();
        assert_eq!(g.len(), 49); // (1/h - 1)^2 interior lattice count

        let iv = Domain::interval(1.0).unwrap();
        let g = iv.interior_grid(0.25).unwrap();
        assert_eq!(g.len(), 3);

        assert!(matches!(
            Domain::rectangle(0.1, 0.1).unwrap().interior_grid(0.5),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn interior_grid_order_is_y_major() {
        let g = Domain::unit_square().interior_grid(0.25).unwrap();
        let pts: Vec<_> = g.points().collect();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], Point::d2(0.25, 0.25));
        assert_eq!(pts[1], Point::d2(0.5, 0.25));
        assert_eq!(pts[3], Point::d2(0.25, 0.5));
        for (i, p) in pts.iter().enumerate() {
            let key = g.lattice(i);
            assert_eq!(g.index_of(key), Some(i as u32));
            assert!(Domain::unit_square().contains(p));
        }
    }

    #[test]
    fn grid_cell_count_approximates_area() {
        let h = 1.0 / 256.0;
        for d in [Domain::unit_square(), Domain::disk(1.0).unwrap()] {
            let g = d.interior_grid(h).unwrap();
            let measured = g.len() as f64 * g.cell_weight();
            let rel = (measured - d.area()).abs() / d.area();
            assert!(rel < 0.02, "relative error {rel} for {:?}", d.shape());
        }
    }

    #[test]
    fn boundary_distance_not_larger_than_diameter() {
        for d in [
            Domain::unit_square(),
            Domain::disk(1.0).unwrap(),
            Domain::annulus(0.25, 1.0).unwrap(),
            Domain::l_shape(),
        ] {
            let g = d.interior_grid(0.05).unwrap();
            for p in g.points() {
                let s = d.boundary_distance(&p).unwrap();
                assert!(s >= 0.0 && s <= d.diameter());
            }
        }
    }
}
