//! Rational number recovery from a residue class via shortest vectors of
//! the lattice `L(a, b) = <[1, a], [0, b]>`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::sym_mod;

/// A residue `a mod b` with `a` in the symmetric range `(-b/2, b/2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    a: BigInt,
    b: BigInt,
}

impl Residue {
    /// Panics if `b < 2`.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        let b = b.into();
        assert!(b >= BigInt::from(2), "modulus must be at least 2");
        let a = sym_mod(&a.into(), &b);
        Residue { a, b }
    }

    pub fn value(&self) -> &BigInt {
        &self.a
    }

    pub fn modulus(&self) -> &BigInt {
        &self.b
    }
}

/// Two rows spanning a rank-2 lattice in `Z^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis2 {
    pub v1: [BigInt; 2],
    pub v2: [BigInt; 2],
}

impl LatticeBasis2 {
    pub fn new(v1: [BigInt; 2], v2: [BigInt; 2]) -> Self {
        let det = &v1[0] * &v2[1] - &v1[1] * &v2[0];
        assert!(!det.is_zero(), "degenerate lattice basis");
        LatticeBasis2 { v1, v2 }
    }

    /// The basis `[1, a], [0, b]` of `L(a, b)`.
    pub fn for_residue(r: &Residue) -> Self {
        LatticeBasis2 {
            v1: [BigInt::one(), r.a.clone()],
            v2: [BigInt::zero(), r.b.clone()],
        }
    }
}

fn norm2(v: &[BigInt; 2]) -> BigInt {
    &v[0] * &v[0] + &v[1] * &v[1]
}

fn dot(u: &[BigInt; 2], w: &[BigInt; 2]) -> BigInt {
    &u[0] * &w[0] + &u[1] * &w[1]
}

/// Nearest integer to `n / d` for `d > 0`, halves rounded up.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let twice: BigInt = n * 2 + d;
    twice.div_floor(&(d * 2))
}

/// Gauss (Lagrange) reduction of a rank-2 lattice basis.
///
/// Returns a shortest nonzero vector, or with `early_bound` the first
/// vector met whose squared norm is below the bound.
pub fn gauss_reduce(basis: &LatticeBasis2, early_bound: Option<&BigInt>) -> [BigInt; 2] {
    let mut u = basis.v1.clone();
    let mut w = basis.v2.clone();
    let mut nu = norm2(&u);
    let mut nw = norm2(&w);
    if nw < nu {
        std::mem::swap(&mut u, &mut w);
        std::mem::swap(&mut nu, &mut nw);
    }
    loop {
        if let Some(bound) = early_bound {
            if &nu < bound {
                return u;
            }
        }
        let q = round_div(&dot(&u, &w), &nu);
        if !q.is_zero() {
            w[0] -= &q * &u[0];
            w[1] -= &q * &u[1];
            nw = norm2(&w);
        }
        if nw >= nu {
            return u;
        }
        std::mem::swap(&mut u, &mut w);
        std::mem::swap(&mut nu, &mut nw);
    }
}

/// Recovers `y / x` with `y = a x (mod b)` and `x^2 + y^2 < b`.
///
/// Returns `(y, x)` with `x > 0` and `gcd(x, y) = 1`, or `None` if the
/// shortest vector is too long or imprimitive.
pub fn recover_rational(r: &Residue) -> Option<(BigInt, BigInt)> {
    let v = gauss_reduce(&LatticeBasis2::for_residue(r), Some(&r.b));
    if norm2(&v) >= r.b {
        return None;
    }
    let [mut x, mut y] = v;
    if !x.gcd(&y).is_one() {
        return None;
    }
    if x.is_negative() {
        x = -x;
        y = -y;
    }
    Some((y, x))
}
