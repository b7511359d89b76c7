//! Standard bases by breadth-first spinning, Schreier trees, and
//! homomorphisms between equivalent representations.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::integer_linear::{IntMatrix, LinearError, Membership, PadicSolver, PRIME_SCHEDULE};
use crate::poly::IntPoly;
use crate::poly_matrix::{PolyMatrix, SparsePolyMatrix};
use crate::polyring_linear::{poly_inverse, LiftConfig, PolyLinearError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("seed vector is zero")]
    ZeroSeed,
    #[error("closure of the seed has dimension {found} < {expected}")]
    Reducible { found: usize, expected: usize },
    #[error("all primes of the schedule were bad")]
    BadPrimes,
    #[error("invalid Schreier tree: {0}")]
    InvalidTree(String),
    #[error(transparent)]
    Linear(#[from] PolyLinearError),
    #[error("intertwining check failed for generator {0}")]
    NotIntertwining(usize),
}

/// Replay log of a standard basis: entry `k` says that basis vector `k` is
/// basis vector `parent` times generator `generator` (both 1-based). The
/// first entry is `(0, 0)` and stands for the seed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SchreierTree {
    entries: Vec<(usize, usize)>,
}

impl SchreierTree {
    pub fn new(entries: Vec<(usize, usize)>) -> Result<Self, RepError> {
        if entries.first() != Some(&(0, 0)) {
            return Err(RepError::InvalidTree("first entry must be (0, 0)".into()));
        }
        for (k, &(p, g)) in entries.iter().enumerate().skip(1) {
            if p == 0 || p > k || g == 0 {
                return Err(RepError::InvalidTree(format!("entry {} = ({p}, {g})", k + 1)));
            }
        }
        Ok(SchreierTree { entries })
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest generator index used.
    pub fn max_generator(&self) -> usize {
        self.entries.iter().map(|e| e.1).max().unwrap_or(0)
    }

    /// Distance of each node from the root.
    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.len()];
        for k in 1..self.len() {
            d[k] = d[self.entries[k].0 - 1] + 1;
        }
        d
    }

    /// Generators (1-based) along the path from the root to node `k` (0-based).
    pub fn word(&self, k: usize) -> Vec<usize> {
        let mut w = Vec::new();
        let mut k = k;
        while k > 0 {
            let (p, g) = self.entries[k];
            w.push(g);
            k = p - 1;
        }
        w.reverse();
        w
    }

    pub fn to_text(&self) -> String {
        self.entries.iter().map(|(p, g)| format!("{p} {g}\n")).collect()
    }
}

impl fmt::Display for SchreierTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for SchreierTree {
    type Err = RepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut entries = Vec::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| RepError::InvalidTree(format!("bad line '{line}'"))))
                .collect::<Result<_, _>>()?;
            if nums.len() != 2 {
                return Err(RepError::InvalidTree(format!("bad line '{line}'")));
            }
            entries.push((nums[0], nums[1]));
        }
        SchreierTree::new(entries)
    }
}

/// Matrices acting on row vectors from the right.
pub trait RowAction {
    type Scalar: Clone;
    fn dim(&self) -> usize;
    fn act(&self, v: &[Self::Scalar]) -> Vec<Self::Scalar>;
}

impl RowAction for IntMatrix {
    type Scalar = BigInt;
    fn dim(&self) -> usize {
        self.rows()
    }
    fn act(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.left_mul_vec(v)
    }
}

impl RowAction for PolyMatrix {
    type Scalar = IntPoly;
    fn dim(&self) -> usize {
        self.rows()
    }
    fn act(&self, v: &[IntPoly]) -> Vec<IntPoly> {
        self.left_mul_vec(v)
    }
}

impl RowAction for SparsePolyMatrix {
    type Scalar = IntPoly;
    fn dim(&self) -> usize {
        self.rows()
    }
    fn act(&self, v: &[IntPoly]) -> Vec<IntPoly> {
        self.left_mul_vec(v)
    }
}

/// Subspace membership for the spinning algorithm.
pub trait SpanOracle {
    /// Adds `v` to the span and returns `true`, or returns `false` if `v`
    /// already lies in it.
    fn insert(&mut self, v: &[BigInt]) -> Result<bool, LinearError>;
}

impl SpanOracle for PadicSolver {
    fn insert(&mut self, v: &[BigInt]) -> Result<bool, LinearError> {
        match self.decompose(v)? {
            Membership::InClosure(_) => Ok(false),
            Membership::NotInClosure => self.push_row(v.to_vec()).map(|_| true),
        }
    }
}

fn check_square(gens: &[impl RowAction], n: usize) -> Result<(), RepError> {
    for (j, g) in gens.iter().enumerate() {
        if g.dim() != n {
            return Err(RepError::Dimension(format!("generator {} has size {}, seed has length {n}", j + 1, g.dim())));
        }
    }
    Ok(())
}

/// Spins `seed` under `gens` with an explicit membership oracle.
pub fn standard_basis_with<O: SpanOracle>(
    gens: &[IntMatrix],
    seed: &[BigInt],
    oracle: &mut O,
) -> Result<(Vec<Vec<BigInt>>, SchreierTree), RepError> {
    let n = seed.len();
    check_square(gens, n)?;
    if seed.iter().all(Zero::is_zero) {
        return Err(RepError::ZeroSeed);
    }
    let linear = |e: LinearError| match e {
        LinearError::BadPrime(_) => RepError::BadPrimes,
        e => RepError::Dimension(e.to_string()),
    };
    oracle.insert(seed).map_err(linear)?;
    let mut basis = vec![seed.to_vec()];
    let mut tree = vec![(0, 0)];
    let mut i = 0;
    while i < basis.len() && basis.len() < n {
        for (j, g) in gens.iter().enumerate() {
            let w = g.act(&basis[i]);
            if oracle.insert(&w).map_err(linear)? {
                basis.push(w);
                tree.push((i + 1, j + 1));
                if basis.len() == n {
                    break;
                }
            }
        }
        i += 1;
    }
    if basis.len() < n {
        return Err(RepError::Reducible { found: basis.len(), expected: n });
    }
    Ok((basis, SchreierTree { entries: tree }))
}

/// Standard basis over `Q` of the closure of `seed` under `gens`, with its
/// Schreier tree. Membership is decided p-adically; a prime for which the
/// basis vectors become dependent is replaced by the next one.
pub fn standard_basis(gens: &[IntMatrix], seed: &[BigInt]) -> Result<(Vec<Vec<BigInt>>, SchreierTree), RepError> {
    for &p in &PRIME_SCHEDULE {
        let mut oracle = PadicSolver::new(p, seed.len());
        match standard_basis_with(gens, seed, &mut oracle) {
            Err(RepError::BadPrimes) => continue,
            other => return other,
        }
    }
    Err(RepError::BadPrimes)
}

/// Rebuilds the basis recorded in `tree` from a seed.
pub fn replay_schreier<M: RowAction>(
    tree: &SchreierTree,
    seed: &[M::Scalar],
    gens: &[M],
) -> Result<Vec<Vec<M::Scalar>>, RepError> {
    check_square(gens, seed.len())?;
    if tree.max_generator() > gens.len() {
        return Err(RepError::Dimension(format!(
            "tree uses generator {} of {}",
            tree.max_generator(),
            gens.len()
        )));
    }
    let mut basis: Vec<Vec<M::Scalar>> = Vec::with_capacity(tree.len());
    basis.push(seed.to_vec());
    for &(p, g) in &tree.entries[1..] {
        let next = gens[g - 1].act(&basis[p - 1]);
        basis.push(next);
    }
    Ok(basis)
}

/// Divides a polynomial matrix by the gcd of its entries and fixes the sign
/// so that the lowest coefficient of the first nonzero entry is positive.
pub fn primitive_normalized(m: &PolyMatrix) -> PolyMatrix {
    let g = m.content();
    let mut out = if g.is_zero() { m.clone() } else { m.div_exact(&g).expect("content divides") };
    let first = out.entries().iter().find(|p| !p.is_zero()).cloned();
    if let Some(f) = first {
        if f.coeff(f.valuation().unwrap()).is_negative() {
            out = out.neg();
        }
    }
    out
}

/// Intertwiner `C` with `X_j C = C X'_j` for all generators, obtained as a
/// primitive multiple of `B^{-1} B'`, where `B` and `B'` are the bases
/// replayed from `tree` on the two seeds.
pub fn hom_between(
    x: &[PolyMatrix],
    seed: &[IntPoly],
    x_dual: &[PolyMatrix],
    seed_dual: &[IntPoly],
    tree: &SchreierTree,
    cfg: &LiftConfig,
) -> Result<PolyMatrix, RepError> {
    if x.len() != x_dual.len() {
        return Err(RepError::Dimension("generator counts differ".into()));
    }
    let b = PolyMatrix::from_rows(replay_schreier(tree, seed, x)?);
    let b_dual = PolyMatrix::from_rows(replay_schreier(tree, seed_dual, x_dual)?);
    let inv = poly_inverse(&b, cfg)?;
    let c = primitive_normalized(&inv.b.mul(&b_dual));
    for (j, (a, ad)) in x.iter().zip(x_dual).enumerate() {
        if a.mul(&c) != c.mul(ad) {
            return Err(RepError::NotIntertwining(j + 1));
        }
    }
    Ok(c)
}
