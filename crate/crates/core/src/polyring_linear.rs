//! Nullspaces, inverses, exponents and products of matrices over `Z[X]`.
//!
//! Every operation specializes `X` at integer places, solves over `Z`, and
//! lifts the results back. Specialized kernel vectors and inverses are only
//! determined up to a place-dependent positive scalar; degree detection on a
//! reference polynomial singles out places sharing the same scalar.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{self, primes_from};
use crate::integer_linear::{int_inverse, int_nullspace_rank1, IntMatrix, LinearError};
use crate::poly::{IntPoly, RatPoly};
use crate::poly_matrix::PolyMatrix;
use crate::poly_recovery::{degree_graphs, lift_samples, EvalSample};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PolyLinearError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("row kernel is trivial")]
    TrivialKernel,
    #[error("row kernel has dimension greater than one")]
    KernelTooLarge,
    #[error("no verified lift after {0} places")]
    NoLift(usize),
}

/// Place schedule and bounds for specialize-and-lift operations.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftConfig {
    /// Degree bound for each lifted polynomial.
    pub degree_bound: usize,
    /// Lower end of the first window of places.
    pub place_start: u64,
    /// Width `ln(b_k / b_1)` of the first window.
    pub window_log: f64,
    /// Factor applied to the window start from one round to the next.
    pub growth: f64,
    /// Factor applied to the window width from one round to the next.
    pub shrink: f64,
    pub max_rounds: usize,
    /// Most places taken from a single window.
    pub max_window: usize,
    /// Places for products: primes from this value upward.
    pub product_start: u64,
    pub max_product_places: usize,
}

impl Default for LiftConfig {
    fn default() -> Self {
        LiftConfig {
            degree_bound: 200,
            place_start: 29,
            window_log: 1.0,
            growth: 1.5,
            shrink: 0.85,
            max_rounds: 12,
            max_window: 32,
            product_start: 2,
            max_product_places: 400,
        }
    }
}

impl LiftConfig {
    /// Places of round `r`: consecutive primes in `[B, B e^w)`, at least three.
    pub fn window(&self, r: usize) -> Vec<u64> {
        let start = self.place_start as f64 * self.growth.powi(r as i32);
        let end = start * (self.window_log * self.shrink.powi(r as i32)).exp();
        let mut out = Vec::new();
        for p in primes_from(start.ceil() as u64) {
            if out.len() >= self.max_window || ((p as f64) >= end && out.len() >= 3) {
                break;
            }
            out.push(p);
        }
        out
    }
}

/// Clears denominators of a list of rational polynomials jointly and removes
/// the integer content.
fn clear_and_primitivize(polys: &[RatPoly]) -> Vec<IntPoly> {
    let l = arith::lcm_all(polys.iter().flat_map(|p| p.coeffs().iter().map(|c| c.denom())));
    let scaled: Vec<IntPoly> = polys
        .iter()
        .map(|p| IntPoly::new(p.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect()))
        .collect();
    let g = arith::gcd_all(scaled.iter().flat_map(|p| p.coeffs().iter()));
    if g.is_zero() {
        return scaled;
    }
    scaled.iter().map(|p| p.div_scalar(&g)).collect()
}

fn negate_all(v: &mut [IntPoly]) {
    for p in v.iter_mut() {
        *p = -&*p;
    }
}

/// Specializations at the places of a window, computed in parallel; places
/// where `solve` fails are dropped and their errors returned separately.
fn specialize<T: Send, F>(places: &[u64], solve: F) -> (Vec<(BigInt, T)>, Vec<LinearError>)
where
    F: Fn(&BigInt) -> Result<T, LinearError> + Sync,
{
    let results: Vec<(BigInt, Result<T, LinearError>)> = places
        .par_iter()
        .map(|&p| {
            let b = BigInt::from(p);
            let r = solve(&b);
            (b, r)
        })
        .collect();
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for (b, r) in results {
        match r {
            Ok(x) => good.push((b, x)),
            Err(e) => bad.push(e),
        }
    }
    (good, bad)
}

/// Lifts coordinates `0..k` of the given samples on the places `members`.
/// The reference coordinate is lifted with degree bound `d`, the others
/// with the configured bound.
fn lift_component(
    values: &[(BigInt, Vec<BigInt>)],
    members: &[usize],
    k: usize,
    reference: usize,
    d: usize,
    bound: usize,
) -> Option<Vec<RatPoly>> {
    (0..k)
        .into_par_iter()
        .map(|c| {
            let samples: Vec<EvalSample> = members
                .iter()
                .map(|&i| EvalSample::integer(values[i].0.clone(), values[i].1[c].clone()))
                .collect();
            let db = if c == reference { d } else { bound };
            let p = lift_samples(&samples, db, None).ok()?;
            (c != reference || p.degree() == Some(d)).then_some(p)
        })
        .collect()
}

/// Candidate lifts of rescaled vector samples, tried in the order given by
/// degree detection on the reference coordinate.
fn candidate_lifts<'a>(
    values: &'a [(BigInt, Vec<BigInt>)],
    reference: usize,
    bound: usize,
) -> impl Iterator<Item = Vec<RatPoly>> + 'a {
    let samples: Vec<EvalSample> =
        values.iter().map(|(b, v)| EvalSample::integer(b.clone(), v[reference].clone())).collect();
    let cands = degree_graphs(&samples).map(|g| g.candidates()).unwrap_or_default();
    let k = values.first().map_or(0, |v| v.1.len());
    cands.into_iter().filter_map(move |(d, members)| {
        if d < 0 || d as usize > bound {
            return None;
        }
        lift_component(values, &members, k, reference, d as usize, bound)
    })
}

/// Primitive vector over `Z[X]` spanning the row kernel of `a` over `Q(X)`,
/// with the leading coefficient of its first nonzero entry positive.
pub fn poly_nullspace_rank1(a: &PolyMatrix, cfg: &LiftConfig) -> Result<Vec<IntPoly>, PolyLinearError> {
    let m = a.rows();
    let mut last_err = PolyLinearError::NoLift(0);
    let mut used = 0;
    for round in 0..cfg.max_rounds {
        let places = cfg.window(round);
        used += places.len();
        let (good, bad) = specialize(&places, |b| int_nullspace_rank1(&a.eval(b)));
        if good.is_empty() {
            last_err = match bad.first() {
                Some(LinearError::TrivialKernel) => PolyLinearError::TrivialKernel,
                Some(LinearError::KernelTooLarge) => PolyLinearError::KernelTooLarge,
                _ => PolyLinearError::NoLift(used),
            };
            if round == 0 {
                return Err(last_err);
            }
            continue;
        }
        for k in 3.min(good.len())..=good.len() {
            let window = &good[..k];
            let Some(reference) = (0..m).find(|&c| window.iter().all(|(_, v)| !v[c].is_zero())) else {
                continue;
            };
            for cand in candidate_lifts(window, reference, cfg.degree_bound) {
                let mut v = clear_and_primitivize(&cand);
                if let Some(first) = v.iter().find(|p| !p.is_zero()) {
                    if first.leading().unwrap().is_negative() {
                        negate_all(&mut v);
                    }
                } else {
                    continue;
                }
                if a.left_mul_vec(&v).iter().all(IntPoly::is_zero) {
                    return Ok(v);
                }
            }
        }
        last_err = PolyLinearError::NoLift(used);
    }
    Err(last_err)
}

/// Inverse `(B, c)` of a square matrix over `Z[X]`: `B a = c I`, `gcd(B, c) = 1`,
/// leading coefficient of `c` positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyInverse {
    pub b: PolyMatrix,
    pub c: IntPoly,
}

pub fn poly_inverse(a: &PolyMatrix, cfg: &LiftConfig) -> Result<PolyInverse, PolyLinearError> {
    if !a.is_square() {
        return Err(PolyLinearError::Dimension(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let n = a.rows();
    let mut used = 0;
    for round in 0..cfg.max_rounds {
        let places = cfg.window(round);
        used += places.len();
        let (good, _) = specialize(&places, |b| int_inverse(&a.eval(b)));
        if good.is_empty() {
            if round == 0 {
                return Err(PolyLinearError::Singular);
            }
            continue;
        }
        // coordinate 0 is c, then the entries of B row by row
        let values: Vec<(BigInt, Vec<BigInt>)> = good
            .into_iter()
            .map(|(b, (m, c)): (BigInt, (IntMatrix, BigInt))| {
                let mut v = Vec::with_capacity(n * n + 1);
                v.push(c);
                v.extend(m.entries().iter().cloned());
                (b, v)
            })
            .collect();
        for k in 3.min(values.len())..=values.len() {
            for cand in candidate_lifts(&values[..k], 0, cfg.degree_bound) {
                let mut v = clear_and_primitivize(&cand);
                if v[0].leading().is_some_and(|l| l.is_negative()) {
                    negate_all(&mut v);
                }
                let c = v[0].clone();
                let b = PolyMatrix::from_rows(v[1..].chunks(n).map(|r| r.to_vec()).collect());
                if b.mul(a) == PolyMatrix::diagonal(&vec![c.clone(); n]) {
                    return Ok(PolyInverse { b, c });
                }
            }
        }
    }
    Err(PolyLinearError::NoLift(used))
}

/// Exponent of a nonsingular matrix over `Z[X]`: the primitive part of `c`.
pub fn poly_exponent(a: &PolyMatrix, cfg: &LiftConfig) -> Result<IntPoly, PolyLinearError> {
    poly_inverse(a, cfg).map(|inv| inv.c.primitive_positive())
}

/// Which entries of a product to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMask {
    Full,
    /// Entries `(i, j)` with `j <= i`; the rest stay zero.
    LowerTriangle,
}

const PROBE_PLACE: u64 = 1_000_003;

/// Product of two matrices over `Z[X]` from specialized integer products.
///
/// Every entry is lifted from a shared list of prime places and accepted
/// once it is integral, within the degree bound `deg A + deg B`, agrees
/// with the product at an extra probe place, and passes `check`.
pub fn poly_matmul_lifted<F>(
    a: &PolyMatrix,
    b: &PolyMatrix,
    mask: ProductMask,
    check: F,
    cfg: &LiftConfig,
) -> Result<PolyMatrix, PolyLinearError>
where
    F: Fn(usize, usize, &IntPoly) -> bool + Sync,
{
    if a.cols() != b.rows() {
        return Err(PolyLinearError::Dimension(format!("{}x{} times {}x{}", a.rows(), a.cols(), b.rows(), b.cols())));
    }
    let (n, m) = (a.rows(), b.cols());
    let row_deg = a.row_degrees();
    let col_deg = b.col_degrees();
    let mut out = PolyMatrix::zeros(n, m);
    let mut pending: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..m {
            if mask == ProductMask::LowerTriangle && j > i {
                continue;
            }
            if let (Some(dr), Some(dc)) = (row_deg[i], col_deg[j]) {
                pending.push((i, j, dr + dc));
            }
        }
    }
    let probe = BigInt::from(PROBE_PLACE);
    let (ap, bp) = (a.eval(&probe), b.eval(&probe));
    let entry_at = |x: &IntMatrix, y: &IntMatrix, i: usize, j: usize| -> BigInt {
        (0..x.cols()).map(|k| x.get(i, k) * y.get(k, j)).sum()
    };
    let mut samples: Vec<Vec<EvalSample>> = vec![Vec::new(); pending.len()];
    let mut places = primes_from(cfg.product_start);
    let mut used = 0;
    while !pending.is_empty() {
        if used >= cfg.max_product_places {
            return Err(PolyLinearError::NoLift(used));
        }
        let place = BigInt::from(places.next().unwrap());
        used += 1;
        let (ab, bb) = (a.eval(&place), b.eval(&place));
        for ((i, j, _), s) in pending.iter().zip(samples.iter_mut()) {
            s.push(EvalSample::integer(place.clone(), entry_at(&ab, &bb, *i, *j)));
        }
        let lifted: Vec<Option<IntPoly>> = pending
            .par_iter()
            .zip(samples.par_iter())
            .map(|(&(i, j, d), s)| {
                let f = lift_samples(s, d, Some(&BigInt::one())).ok()?.to_int()?;
                let ok = BigRational::from_integer(f.eval(&probe))
                    == BigRational::from_integer(entry_at(&ap, &bp, i, j))
                    && check(i, j, &f);
                ok.then_some(f)
            })
            .collect();
        let mut keep_p = Vec::new();
        let mut keep_s = Vec::new();
        for ((e, s), l) in pending.into_iter().zip(samples).zip(lifted) {
            match l {
                Some(f) => out.set(e.0, e.1, f),
                None => {
                    keep_p.push(e);
                    keep_s.push(s);
                }
            }
        }
        pending = keep_p;
        samples = keep_s;
    }
    Ok(out)
}

/// Fills the upper triangle of a lower-triangular matrix by symmetry.
pub fn symmetrize_lower(m: &PolyMatrix) -> PolyMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for j in i + 1..m.cols() {
            out.set(i, j, m.get(j, i).clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn cfg() -> LiftConfig {
        LiftConfig::default()
    }

    #[test]
    fn windows_grow_and_shrink() {
        let c = cfg();
        assert_eq!(c.window(0), vec![29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73]);
        let w1 = c.window(1);
        assert!(w1[0] >= 44 && w1.len() >= 3);
    }

    #[test]
    fn nullspace_examples() {
        let a = PolyMatrix::from_coeffs(&[&[&[0, 1]], &[&[0, 1]]]);
        assert_eq!(poly_nullspace_rank1(&a, &cfg()).unwrap(), vec![p(&[1]), p(&[-1])]);
        let a = PolyMatrix::from_coeffs(&[&[&[1]], &[&[0, 1]]]);
        assert_eq!(poly_nullspace_rank1(&a, &cfg()).unwrap(), vec![p(&[0, 1]), p(&[-1])]);
        let a = PolyMatrix::from_coeffs(&[&[&[1], &[]], &[&[], &[1]], &[&[0, 1], &[0, 0, 1]]]);
        assert_eq!(poly_nullspace_rank1(&a, &cfg()).unwrap(), vec![p(&[0, 1]), p(&[0, 0, 1]), p(&[-1])]);
    }

    #[test]
    fn nullspace_rank_errors() {
        assert_eq!(poly_nullspace_rank1(&PolyMatrix::identity(2), &cfg()), Err(PolyLinearError::TrivialKernel));
        let a = PolyMatrix::from_coeffs(&[&[&[0, 1]], &[&[1]], &[&[2]]]);
        assert_eq!(poly_nullspace_rank1(&a, &cfg()), Err(PolyLinearError::KernelTooLarge));
    }

    #[test]
    fn inverse_examples() {
        let inv = poly_inverse(&PolyMatrix::identity(3), &cfg()).unwrap();
        assert_eq!((inv.b, inv.c), (PolyMatrix::identity(3), IntPoly::one()));
        let a = PolyMatrix::from_coeffs(&[&[&[0, 1], &[1]], &[&[1], &[0, 1]]]);
        let inv = poly_inverse(&a, &cfg()).unwrap();
        assert_eq!(inv.c, p(&[-1, 0, 1]));
        assert_eq!(inv.b, PolyMatrix::from_coeffs(&[&[&[0, 1], &[-1]], &[&[-1], &[0, 1]]]));
        let sing = PolyMatrix::from_coeffs(&[&[&[0, 1], &[1]], &[&[0, 2], &[2]]]);
        assert_eq!(poly_inverse(&sing, &cfg()), Err(PolyLinearError::Singular));
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(poly_exponent(&PolyMatrix::identity(2), &cfg()).unwrap(), IntPoly::one());
        let a = PolyMatrix::from_coeffs(&[&[&[0, 1], &[1]], &[&[1], &[0, 1]]]);
        assert_eq!(poly_exponent(&a, &cfg()).unwrap(), p(&[-1, 0, 1]));
        let d = PolyMatrix::diagonal(&[p(&[2]), p(&[0, 1])]);
        let inv = poly_inverse(&d, &cfg()).unwrap();
        assert_eq!(inv.c, p(&[0, 2]));
        assert_eq!(poly_exponent(&d, &cfg()).unwrap(), p(&[0, 1]));
    }

    #[test]
    fn lifted_products() {
        let a = PolyMatrix::from_coeffs(&[&[&[0, 1], &[1]]]);
        let b = PolyMatrix::from_coeffs(&[&[&[1]], &[&[0, 1]]]);
        let ab = poly_matmul_lifted(&a, &b, ProductMask::Full, |_, _, _| true, &cfg()).unwrap();
        assert_eq!(ab, PolyMatrix::from_coeffs(&[&[&[0, 2]]]));
        let m = PolyMatrix::from_coeffs(&[&[&[1, 2, 3], &[-7]], &[&[0, 0, 5], &[100, 0, 0, -1]]]);
        let id = PolyMatrix::identity(2);
        assert_eq!(poly_matmul_lifted(&m, &id, ProductMask::Full, |_, _, _| true, &cfg()).unwrap(), m);
    }

    #[test]
    fn lower_triangle_only() {
        let m = PolyMatrix::from_coeffs(&[&[&[1, 1], &[2]], &[&[2], &[0, 3]]]);
        let sq = poly_matmul_lifted(&m, &m, ProductMask::LowerTriangle, |_, _, _| true, &cfg()).unwrap();
        assert!(sq.get(0, 1).is_zero());
        assert_eq!(symmetrize_lower(&sq), m.mul(&m));
    }
}
