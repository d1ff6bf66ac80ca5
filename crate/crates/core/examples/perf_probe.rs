use std::time::Instant;
use weyl_lab::eigensolve::{lowest_eigenpairs, DEFAULT_SEED};
use weyl_lab::geometry::Domain;
use weyl_lab::operator::assemble_dirichlet_laplacian;

fn main() {
    let t0 = Instant::now();
    let op = assemble_dirichlet_laplacian(&Domain::unit_square(), 1.0 / 256.0).unwrap();
    let s = lowest_eigenpairs(&op, 20, 1e-6, DEFAULT_SEED).unwrap();
    println!("square solve K=20: {:?}", t0.elapsed());
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let exact = [
        2.0, 5.0, 5.0, 8.0, 10.0, 10.0, 13.0, 13.0, 17.0, 17.0, 18.0, 20.0, 20.0, 25.0, 25.0,
        26.0, 26.0, 29.0, 29.0, 32.0,
    ];
    let mut worst = 0.0f64;
    for (j, &q) in exact.iter().enumerate() {
        let rel = (s.eigenvalue(j) - q * pi2).abs() / (q * pi2);
        if rel > 0.004 {
            println!(
                "  square lambda_{}: {:.6} vs {:.6} rel {:.3e}",
                j + 1,
                s.eigenvalue(j),
                q * pi2,
                rel
            );
        }
        worst = worst.max(rel);
    }
    println!("square worst rel err vs exact: {:.3e} (need < 5e-3)", worst);

    let t0 = Instant::now();
    let op = assemble_dirichlet_laplacian(&Domain::disk(1.0).unwrap(), 1.0 / 256.0).unwrap();
    let s = lowest_eigenpairs(&op, 10, 1e-6, DEFAULT_SEED).unwrap();
    println!("disk solve K=10: {:?}", t0.elapsed());
    let zeros: [f64; 10] = [
        2.4048255576957728,
        3.8317059702075123,
        3.8317059702075123,
        5.1356223018406826,
        5.1356223018406826,
        5.5200781102863106,
        6.3801618959239835,
        6.3801618959239835,
        7.0155866698156188,
        7.0155866698156188,
    ];
    let mut worst = 0.0f64;
    for (j, z) in zeros.iter().enumerate() {
        let rel = (s.eigenvalue(j) - z * z).abs() / (z * z);
        worst = worst.max(rel);
    }
    println!("disk worst rel err: {:.3e} (need < 1.5e-2)", worst);
}
