//! Independent reference implementations used as test oracles, plus helpers
//! for the bundled data files.
#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use hecke_gram::hecke::{CoxeterSystem, WGraph};
use hecke_gram::integer_linear::IntMatrix;
use hecke_gram::poly::IntPoly;
use hecke_gram::poly_matrix::PolyMatrix;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load_matrix(name: &str) -> PolyMatrix {
    PolyMatrix::parse(&read_data(name)).unwrap()
}

pub fn load_wgraph(name: &str) -> WGraph {
    WGraph::parse(&read_data(name)).unwrap()
}

pub fn load_coxeter(name: &str) -> CoxeterSystem {
    CoxeterSystem::parse(&read_data(name)).unwrap()
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// All `(y, x)` with `x > 0`, `y = a x mod b` and `x^2 + y^2 < b`, by
/// enumerating `x`.
pub fn short_fractions(a: i64, b: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut x = 1i64;
    while x * x < b {
        let r = (a * x).rem_euclid(b);
        for y in [r - b, r, r + b] {
            if x * x + y * y < b {
                out.push((y, x));
            }
        }
        x += 1;
    }
    out
}

/// What rational recovery must return: the shortest solution if it is
/// coprime, otherwise nothing.
pub fn recover_oracle(a: i64, b: i64) -> Option<(i64, i64)> {
    let s = short_fractions(a, b);
    let &(y, x) = s.iter().min_by_key(|(y, x)| x * x + y * y)?;
    (y.gcd(&x) == 1).then_some((y, x))
}

pub fn to_rational(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
}

/// Reduced row echelon form over `Q`; returns the pivot columns.
pub fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Inverse over `Q`, or `None` if singular.
pub fn rational_inverse(a: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = a.rows();
    let mut aug: Vec<Vec<BigRational>> = to_rational(a)
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the left kernel `{x : x a = 0}` over `Q`.
pub fn left_kernel(a: &IntMatrix) -> Vec<Vec<BigRational>> {
    let t = a.transpose();
    let mut m = to_rational(&t);
    let piv = rref(&mut m);
    let n = t.cols();
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Primitive integer multiple with first nonzero entry positive.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let s = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) { -g } else { g };
    ints.iter().map(|x| x / &s).collect()
}

/// Solves `x a = v` over `Q`.
pub fn solve_left(a: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigRational>> {
    let k = a.rows();
    let t = a.transpose();
    let mut aug: Vec<Vec<BigRational>> = to_rational(&t)
        .into_iter()
        .zip(v)
        .map(|(mut r, x)| {
            r.push(BigRational::from_integer(x.clone()));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.last() == Some(&k) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (r, &p) in piv.iter().enumerate() {
        x[p] = aug[r][k].clone();
    }
    Some(x)
}

/// Fraction-free determinant.
pub fn det_bareiss(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Invariant factors of a square integer matrix (Smith normal form).
pub fn smith_invariants(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows();
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut out = Vec::new();
    for t in 0..n {
        loop {
            let Some((pi, pj)) = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by(|&(a, b), &(c, d)| m[a][b].abs().cmp(&m[c][d].abs()))
            else {
                out.extend((t..n).map(|_| BigInt::zero()));
                return out;
            };
            m.swap(t, pi);
            for r in m.iter_mut() {
                r.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..n {
                let f = m[i][t].div_floor(&m[t][t]);
                for j in t..n {
                    let d = &f * &m[t][j];
                    m[i][j] -= d;
                }
                clean &= m[i][t].is_zero();
            }
            for j in t + 1..n {
                let f = m[t][j].div_floor(&m[t][t]);
                for i in t..n {
                    let d = &f * &m[i][t];
                    m[i][j] -= d;
                }
                clean &= m[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let x = m[i][j].clone();
                        m[t][j] += x;
                    }
                }
                None => break,
            }
        }
        out.push(m[t][t].abs());
    }
    out
}

pub fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_rows(&data)
}

pub fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize, bound: i64) -> IntPoly {
    let d = rng.gen_range(0..=max_deg);
    IntPoly::new((0..=d).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
}

pub fn random_poly_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, max_deg: usize, bound: i64) -> PolyMatrix {
    PolyMatrix::from_rows((0..rows).map(|_| (0..cols).map(|_| random_poly(rng, max_deg, bound)).collect()).collect())
}
