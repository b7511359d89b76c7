//! Linear algebra over `Z` and `Q` by p-adic decomposition.
//!
//! A vector `v` lies in the pure closure of the row lattice of `A` if some
//! positive multiple `a v` is an integer combination of the rows. The
//! decomposition peels off base-`p` digits using an echelon form of `A`
//! modulo `p` and stops either exactly or after rational recovery of the
//! accumulated coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{self, inv_mod_u64, mod_u64, sym_mod_u64};
use crate::rational_recovery::{recover_rational, Residue};

/// Default prime followed by the fallbacks tried on `BadPrime`.
pub const PRIME_SCHEDULE: [u64; 5] = [251, 241, 239, 233, 65537];

const MAX_DIGITS: usize = 1 << 16;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LinearError {
    #[error("rows are dependent modulo {0}")]
    BadPrime(u64),
    #[error("row kernel is trivial")]
    TrivialKernel,
    #[error("row kernel has dimension greater than one")]
    KernelTooLarge,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("p-adic expansion did not terminate within {0} digits")]
    NoConvergence(usize),
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.data[i * d.len() + i] = x.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += x * a;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// Rank modulo a prime.
    pub fn rank_mod(&self, p: u64) -> usize {
        let mut span = ModularSpan::new(p, self.cols);
        (0..self.rows).filter(|&i| span.push(&reduce_vec(self.row(i), p))).count()
    }
}

/// A vector in the pure closure of a row lattice: `v = (1/a) sum a_j w_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanDecomposition {
    pub numerators: Vec<BigInt>,
    pub denominator: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    NotInClosure,
    InClosure(SpanDecomposition),
}

fn reduce_vec(v: &[BigInt], p: u64) -> Vec<u64> {
    v.iter().map(|x| mod_u64(x, p)).collect()
}

/// Incremental echelon form over `F_p` that remembers how each echelon row
/// arises from the inserted rows.
#[derive(Clone, Debug)]
pub struct ModularSpan {
    p: u64,
    ncols: usize,
    echelon: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<u64>>,
    inserted: usize,
}

impl ModularSpan {
    pub fn new(p: u64, ncols: usize) -> Self {
        assert!(p < (1 << 32), "prime too large for word arithmetic");
        ModularSpan { p, ncols, echelon: vec![], pivots: vec![], combos: vec![], inserted: 0 }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    /// Reduces `v` against the echelon rows; returns the remainder and the
    /// multipliers used for each echelon row.
    fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let p = self.p;
        let mut r = v.to_vec();
        let mut mult = vec![0u64; self.echelon.len()];
        for (k, (row, &piv)) in self.echelon.iter().zip(&self.pivots).enumerate() {
            let c = r[piv];
            if c == 0 {
                continue;
            }
            mult[k] = c;
            for (x, y) in r.iter_mut().zip(row).skip(piv) {
                if *y != 0 {
                    *x = (*x + p - (c * y) % p) % p;
                }
            }
        }
        (r, mult)
    }

    /// Inserts a row; returns `false` (leaving the span unchanged) if it is
    /// dependent on the rows inserted so far.
    pub fn push(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ncols);
        let p = self.p;
        let (mut r, mult) = self.reduce(v);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let idx = self.inserted;
        let mut combo = vec![0u64; idx + 1];
        combo[idx] = 1;
        for (k, &c) in mult.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (t, &y) in self.combos[k].iter().enumerate() {
                combo[t] = (combo[t] + p - (c * y) % p) % p;
            }
        }
        let inv = inv_mod_u64(r[piv], p);
        for x in r.iter_mut() {
            *x = (*x * inv) % p;
        }
        for x in combo.iter_mut() {
            *x = (*x * inv) % p;
        }
        self.echelon.push(r);
        self.pivots.push(piv);
        self.combos.push(combo);
        self.inserted += 1;
        true
    }

    /// Coefficients expressing `v` in terms of the inserted rows, if `v` lies
    /// in their span.
    pub fn solve(&self, v: &[u64]) -> Option<Vec<u64>> {
        let p = self.p;
        let (r, mult) = self.reduce(v);
        if r.iter().any(|&x| x != 0) {
            return None;
        }
        let mut coeffs = vec![0u64; self.inserted];
        for (k, &c) in mult.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (t, &y) in self.combos[k].iter().enumerate() {
                coeffs[t] = (coeffs[t] + c * y) % p;
            }
        }
        Some(coeffs)
    }
}

/// Rows of an integer matrix, independent modulo `p`, prepared for p-adic
/// decomposition. Rows can be appended one at a time.
#[derive(Clone, Debug)]
pub struct PadicSolver {
    rows: Vec<Vec<BigInt>>,
    span: ModularSpan,
}

impl PadicSolver {
    pub fn new(p: u64, ncols: usize) -> Self {
        PadicSolver { rows: vec![], span: ModularSpan::new(p, ncols) }
    }

    pub fn from_matrix(a: &IntMatrix, p: u64) -> Result<Self, LinearError> {
        let mut s = Self::new(p, a.cols());
        for i in 0..a.rows() {
            s.push_row(a.row(i).to_vec())?;
        }
        Ok(s)
    }

    pub fn prime(&self) -> u64 {
        self.span.prime()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Appends a row; `BadPrime` if it is dependent modulo `p`.
    pub fn push_row(&mut self, row: Vec<BigInt>) -> Result<(), LinearError> {
        if self.span.push(&reduce_vec(&row, self.prime())) {
            self.rows.push(row);
            Ok(())
        } else {
            Err(LinearError::BadPrime(self.prime()))
        }
    }

    /// Decomposes `v` against the stored rows.
    pub fn decompose(&self, v: &[BigInt]) -> Result<Membership, LinearError> {
        let p = self.prime();
        let pb = BigInt::from(p);
        let m = self.rows.len();
        let mut cur = v.to_vec();
        let mut acc = vec![BigInt::zero(); m];
        let mut pk = BigInt::one();
        let mut digits = 0usize;
        let mut next_check = 4usize;
        loop {
            if cur.iter().all(Zero::is_zero) {
                return Ok(Membership::InClosure(SpanDecomposition {
                    numerators: acc,
                    denominator: BigInt::one(),
                }));
            }
            let Some(coeffs) = self.span.solve(&reduce_vec(&cur, p)) else {
                return Ok(Membership::NotInClosure);
            };
            for (j, &c) in coeffs.iter().enumerate() {
                let x = sym_mod_u64(c, p);
                if x == 0 {
                    continue;
                }
                let xb = BigInt::from(x);
                acc[j] += &pk * &xb;
                for (y, w) in cur.iter_mut().zip(&self.rows[j]) {
                    if !w.is_zero() {
                        *y -= &xb * w;
                    }
                }
            }
            for y in cur.iter_mut() {
                debug_assert!((&*y % &pb).is_zero());
                *y /= &pb;
            }
            pk *= &pb;
            digits += 1;
            if digits == next_check {
                next_check *= 2;
                if let Some(dec) = self.try_recover(&acc, &pk, v) {
                    return Ok(Membership::InClosure(dec));
                }
            }
            if digits > MAX_DIGITS {
                return Err(LinearError::NoConvergence(MAX_DIGITS));
            }
        }
    }

    fn try_recover(&self, acc: &[BigInt], pk: &BigInt, v: &[BigInt]) -> Option<SpanDecomposition> {
        let mut fracs = Vec::with_capacity(acc.len());
        let mut den = BigInt::one();
        for a in acc {
            let (y, x) = recover_rational(&Residue::new(a.clone(), pk.clone()))?;
            den = den.lcm(&x);
            fracs.push((y, x));
        }
        let numerators: Vec<BigInt> = fracs.iter().map(|(y, x)| y * (&den / x)).collect();
        let mut lhs = vec![BigInt::zero(); v.len()];
        for (a, row) in numerators.iter().zip(&self.rows) {
            if a.is_zero() {
                continue;
            }
            for (l, w) in lhs.iter_mut().zip(row) {
                *l += a * w;
            }
        }
        if lhs.iter().zip(v).any(|(l, x)| *l != &den * x) {
            return None;
        }
        assert!(!(&den % self.prime()).is_zero(), "denominator divisible by p");
        Some(SpanDecomposition { numerators, denominator: den })
    }
}

/// Decomposes `v` against the rows of `a` using the prime `p`.
pub fn padic_decompose(a: &IntMatrix, v: &[BigInt], p: u64) -> Result<Membership, LinearError> {
    if v.len() != a.cols() {
        return Err(LinearError::Dimension(format!("vector of length {} against {} columns", v.len(), a.cols())));
    }
    PadicSolver::from_matrix(a, p)?.decompose(v)
}

fn normalize_sign(v: &mut [BigInt]) {
    if arith::first_nonzero_sign(v) == num_bigint::Sign::Minus {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
}

fn nullspace_with_prime(a: &IntMatrix, p: u64) -> Result<Vec<BigInt>, LinearError> {
    let m = a.rows();
    let mut solver = PadicSolver::new(p, a.cols());
    let mut found: Option<Vec<BigInt>> = None;
    for i in 0..m {
        let w = a.row(i);
        match solver.decompose(w)? {
            Membership::InClosure(dec) => {
                if found.is_some() {
                    return Err(LinearError::KernelTooLarge);
                }
                let mut v = vec![BigInt::zero(); m];
                v[..i].clone_from_slice(&dec.numerators);
                v[i] = -dec.denominator;
                found = Some(v);
            }
            Membership::NotInClosure => solver.push_row(w.to_vec())?,
        }
    }
    let mut v = found.ok_or(LinearError::TrivialKernel)?;
    normalize_sign(&mut v);
    Ok(v)
}

/// Primitive integer vector spanning the one-dimensional row kernel of `a`,
/// with first nonzero entry positive.
pub fn int_nullspace_rank1(a: &IntMatrix) -> Result<Vec<BigInt>, LinearError> {
    let mut last = LinearError::BadPrime(PRIME_SCHEDULE[0]);
    for &p in &PRIME_SCHEDULE {
        match nullspace_with_prime(a, p) {
            Err(e @ LinearError::BadPrime(_)) => last = e,
            other => return other,
        }
    }
    Err(last)
}

fn inverse_with_prime(a: &IntMatrix, p: u64) -> Result<(IntMatrix, BigInt), LinearError> {
    let n = a.rows();
    let solver = PadicSolver::from_matrix(a, p)?;
    let decs: Vec<SpanDecomposition> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut e = vec![BigInt::zero(); n];
            e[k] = BigInt::one();
            match solver.decompose(&e)? {
                Membership::InClosure(d) => Ok(d),
                Membership::NotInClosure => Err(LinearError::BadPrime(p)),
            }
        })
        .collect::<Result<_, _>>()?;
    let c = arith::lcm_all(decs.iter().map(|d| &d.denominator));
    let mut data = Vec::with_capacity(n * n);
    for d in &decs {
        let f = &c / &d.denominator;
        data.extend(d.numerators.iter().map(|x| x * &f));
    }
    let b = IntMatrix::from_vec(n, n, data);
    debug_assert_eq!(b.mul(a), IntMatrix::identity(n).scale(&c));
    Ok((b, c))
}

/// `(B, c)` with `B a = c I`, `c > 0` and `gcd(B, c) = 1`.
pub fn int_inverse(a: &IntMatrix) -> Result<(IntMatrix, BigInt), LinearError> {
    if a.rows() != a.cols() {
        return Err(LinearError::Dimension(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    for &p in &PRIME_SCHEDULE {
        match inverse_with_prime(a, p) {
            Err(LinearError::BadPrime(_)) => continue,
            other => return other,
        }
    }
    Err(LinearError::Singular)
}

/// Exponent of a nonsingular integer matrix: the smallest `c > 0` with
/// `c a^-1` integral.
pub fn int_exponent(a: &IntMatrix) -> Result<BigInt, LinearError> {
    int_inverse(a).map(|(_, c)| c)
}

/// Clears denominators column by column; the row kernel is unchanged.
pub fn clear_column_denominators(rows: &[Vec<BigRational>]) -> IntMatrix {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let mut out = IntMatrix::zeros(m, n);
    for j in 0..n {
        let l = arith::lcm_all(rows.iter().map(|r| r[j].denom()));
        for i in 0..m {
            let q = &rows[i][j];
            out.set(i, j, q.numer() * (&l / q.denom()));
        }
    }
    out
}

/// Row kernel of a rational matrix; see [`int_nullspace_rank1`].
pub fn rational_nullspace_rank1(rows: &[Vec<BigRational>]) -> Result<Vec<BigInt>, LinearError> {
    int_nullspace_rank1(&clear_column_denominators(rows))
}

/// Inverse of a rational matrix as `(B, c)` with `B a = c I`.
pub fn rational_inverse(rows: &[Vec<BigRational>]) -> Result<(IntMatrix, BigInt), LinearError> {
    let l = arith::lcm_all(rows.iter().flatten().map(|q| q.denom()));
    let scaled: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.iter().map(|q| q.numer() * (&l / q.denom())).collect()).collect();
    let (b, c) = int_inverse(&IntMatrix::from_rows(&scaled))?;
    let b = b.scale(&l);
    let g = arith::gcd_all(b.entries().iter().chain(std::iter::once(&c)));
    let data = b.entries().iter().map(|x| x / &g).collect();
    Ok((IntMatrix::from_vec(b.rows(), b.cols(), data), (c / &g).abs()))
}
