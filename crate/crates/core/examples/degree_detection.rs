//! Degree detection from values rescaled by unknown scalars, on the bundled
//! table of thirteen prime places.

use hecke_gram::poly_recovery::{degree_graphs, detect_degree, detect_degree_incremental, EvalSample, RecoveryPolicy};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/degree_samples.txt");
    let text = std::fs::read_to_string(path).unwrap();
    let samples: Vec<EvalSample> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut t = l.split_whitespace();
            let b: BigInt = t.next().unwrap().parse().unwrap();
            let v: BigInt = t.next().unwrap().parse().unwrap();
            EvalSample::new(b, BigRational::from_integer(v))
        })
        .collect();

    let graphs = degree_graphs(&samples).unwrap();
    println!("{} distinct slopes", graphs.components.len());
    for (d, comps) in &graphs.components {
        for c in comps.iter().filter(|c| c.members.len() >= 3) {
            let places = graphs.places_of(&c.members);
            println!("Gamma_{d}: {places:?}{}", if c.complete { " (complete)" } else { "" });
        }
    }

    let policy = RecoveryPolicy::default();
    let det = detect_degree(&samples, &policy).unwrap();
    println!("degree {} on places {:?}", det.degree, det.places);
    let coeffs: Vec<String> = det.poly.coeffs().iter().map(|c| c.to_string()).collect();
    println!("coefficients [{}]", coeffs.join(","));

    let (k, det) = detect_degree_incremental(&samples, &policy).unwrap();
    println!("incremental: first {k} places suffice, using {:?}", det.places);
}
