//! Recover small fractions from residues, and lift them through the CRT.

use num_bigint::BigInt;
use hecke_gram::poly_recovery::crt_lift;
use hecke_gram::rational_recovery::{recover_rational, Residue};

fn main() {
    for (a, b) in [(68, 101), (0, 97), (198, 997), (3, 5)] {
        match recover_rational(&Residue::new(a, b)) {
            Some((y, x)) => println!("{a} mod {b} -> {y}/{x}"),
            None => println!("{a} mod {b} -> no fraction with x^2 + y^2 < {b}"),
        }
    }

    // -22/7 modulo three primes, combined
    let target = |p: i64| {
        let inv = (1..p).find(|k| 7 * k % p == 1).unwrap();
        ((-22 * inv) % p + p) % p
    };
    let residues: Vec<(BigInt, BigInt)> = [11, 13, 17].iter().map(|&p| (BigInt::from(target(p)), BigInt::from(p))).collect();
    let r = crt_lift(&residues).unwrap();
    let (y, x) = recover_rational(&r).unwrap();
    println!("CRT residue {} mod {} -> {y}/{x}", r.value(), r.modulus());
}
