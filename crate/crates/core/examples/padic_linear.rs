//! Exact linear algebra over Z: membership in a lattice closure, a kernel
//! vector and an inverse, all by p-adic decomposition.

use num_bigint::BigInt;
use hecke_gram::integer_linear::{int_exponent, int_inverse, int_nullspace_rank1, padic_decompose, IntMatrix, Membership};

fn main() {
    let a = IntMatrix::from_rows(&[vec![2, 1, 0], vec![0, 3, 1]]);
    for v in [[4, 5, 1], [1, 0, 0], [1, 2, 1]] {
        let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        match padic_decompose(&a, &v, 251).unwrap() {
            Membership::InClosure(d) => println!("{v:?} = ({:?}) / {} times the rows", d.numerators, d.denominator),
            Membership::NotInClosure => println!("{v:?} is not in the row space"),
        }
    }

    let k = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
    println!("row kernel of {k:?}-> {:?}", int_nullspace_rank1(&k).unwrap());

    let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 3]]);
    let (b, c) = int_inverse(&m).unwrap();
    println!("inverse of {m:?}= ({b:?}) / {c}");
    println!("exponent {}", int_exponent(&m).unwrap());
}
