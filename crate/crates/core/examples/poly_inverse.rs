//! Inverse, exponent and kernel of matrices over Z[v] by specialization and
//! lifting, on the bundled 10x10 basis matrix of the E6 representation 10_s.

use hecke_gram::poly::IntPoly;
use hecke_gram::poly_matrix::PolyMatrix;
use hecke_gram::polyring_linear::{poly_inverse, poly_matmul_lifted, poly_nullspace_rank1, LiftConfig, ProductMask};

fn load(name: &str) -> PolyMatrix {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    PolyMatrix::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn main() {
    let cfg = LiftConfig::default();
    let b = load("e6_10s_btilde.mat");
    let t = std::time::Instant::now();
    let inv = poly_inverse(&b, &cfg).unwrap();
    println!("inverse: denominator {}, max degree {:?}, {:?}", inv.c.to_text(), inv.b.max_degree(), t.elapsed());
    println!("matches the bundled inverse up to sign: {}", inv.b == load("e6_10s_bhat.mat") || inv.b.neg() == load("e6_10s_bhat.mat"));

    let t = std::time::Instant::now();
    let q = poly_matmul_lifted(&inv.b, &load("e6_10s_btilde_dual.mat"), ProductMask::Full, |_, _, _| true, &cfg).unwrap();
    println!("lifted product is symmetric: {}, {:?}", q.is_symmetric(), t.elapsed());

    // kernel of the rank-one deficient matrix [[v, v^2], [1, v]]
    let a = PolyMatrix::from_coeffs(&[&[&[0, 1], &[0, 0, 1]], &[&[1], &[0, 1]]]);
    let k = poly_nullspace_rank1(&a, &cfg).unwrap();
    let k: Vec<String> = k.iter().map(IntPoly::to_text).collect();
    println!("row kernel of [[v, v^2], [1, v]]: [{}]", k.join(", "));
}
