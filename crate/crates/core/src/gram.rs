//! Primitive Gram matrices of W-graph representations: standard bases of
//! the representation and its dual, their diagonal factorizations, an
//! inverse and a lifted product, primitivization and exact verification.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::factor::{factor, is_monic_palindromic};
use crate::hecke::{
    benson_curtis_subsets, benson_curtis_vertex, dual_seed, rep_matrices, schreier_tree, validate_wgraph,
    CoxeterSystem, HeckeError, SpecializedTree, WGraph,
};
use crate::poly::{gcd_subresultant, IntPoly, Palindromy};
use crate::poly_matrix::{det_bareiss, poly_gcd_all, PolyMatrix, SparsePolyMatrix};
use crate::polyring_linear::{poly_inverse, poly_matmul_lifted, LiftConfig, PolyInverse, PolyLinearError, ProductMask};
use crate::rep_engine::{replay_schreier, RepError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GramError {
    #[error("invalid W-graph: {}", .0.join("; "))]
    InvalidWGraph(Vec<String>),
    #[error("no Benson-Curtis subset exists")]
    NoSeed,
    #[error("data error: {0}")]
    Data(String),
    #[error("candidate Gram matrix failed verification for s{0}")]
    Verification(usize),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Linear(#[from] PolyLinearError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// `B = R * core * C` with `R = diag(v^{d_i})` and `C` the diagonal of
/// column gcds of `R^{-1} B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredBasis {
    pub row_exponents: Vec<usize>,
    pub column_gcds: Vec<IntPoly>,
    pub core: PolyMatrix,
}

impl FactoredBasis {
    pub fn row_factor(&self) -> PolyMatrix {
        let d: Vec<IntPoly> = self.row_exponents.iter().map(|&k| IntPoly::monomial(BigInt::one(), k)).collect();
        PolyMatrix::diagonal(&d)
    }

    pub fn column_factor(&self) -> PolyMatrix {
        PolyMatrix::diagonal(&self.column_gcds)
    }

    /// `R * core * C`.
    pub fn product(&self) -> PolyMatrix {
        self.row_factor().mul(&self.core).mul(&self.column_factor())
    }
}

fn full_gcd(ps: &[IntPoly]) -> IntPoly {
    poly_gcd_all(ps)
}

/// Splits off monomial row contents and then column contents.
pub fn factor_basis(b: &PolyMatrix) -> Result<FactoredBasis, GramError> {
    let (n, m) = (b.rows(), b.cols());
    let mut rows = Vec::with_capacity(n);
    let mut exps = Vec::with_capacity(n);
    for i in 0..n {
        let g = full_gcd(b.row(i));
        let k = g.valuation().ok_or_else(|| GramError::Data(format!("row {} is zero", i + 1)))?;
        if g != IntPoly::monomial(BigInt::one(), k) {
            return Err(GramError::Data(format!("row {} has content {} which is not a power of v", i + 1, g.to_text())));
        }
        exps.push(k);
        rows.push(b.row(i).iter().map(|p| p.unshift(k)).collect::<Vec<_>>());
    }
    let mut gcds = Vec::with_capacity(m);
    for j in 0..m {
        let col: Vec<IntPoly> = rows.iter().map(|r| r[j].clone()).collect();
        let g = full_gcd(&col);
        if g.is_zero() {
            return Err(GramError::Data(format!("column {} is zero", j + 1)));
        }
        for r in rows.iter_mut() {
            r[j] = r[j].div_exact(&g).expect("gcd divides");
        }
        gcds.push(g);
    }
    Ok(FactoredBasis { row_exponents: exps, column_gcds: gcds, core: PolyMatrix::from_rows(rows) })
}

/// Common exponent `m` with `v^m f(1/v) = f` for all nonzero entries.
pub fn palindromic_exponent<'a>(entries: impl IntoIterator<Item = &'a IntPoly>) -> Option<usize> {
    let mut m = None;
    for f in entries.into_iter().filter(|f| !f.is_zero()) {
        match (f.palindromic_class(), m) {
            (Ok(Palindromy::Palindromic(k)), None) => m = Some(k),
            (Ok(Palindromy::Palindromic(k)), Some(m0)) if k == m0 => {}
            _ => return None,
        }
    }
    m
}

fn is_palindromic(f: &IntPoly) -> bool {
    f.is_zero() || matches!(f.palindromic_class(), Ok(Palindromy::Palindromic(_)))
}

fn poly_lcm(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (ca, pa) = (a.content(), a.primitive_positive());
    let (cb, pb) = (b.content(), b.primitive_positive());
    let g = gcd_subresultant(&pa, &pb);
    (&pa * &pb.div_exact(&g).expect("gcd divides")).primitive_positive().scale(&ca.lcm(&cb))
}

/// Divides by the gcd of all entries and fixes the sign so that `P(0)` has
/// positive trace, or if the trace vanishes, so that the lowest coefficient
/// of the first nonzero entry is positive. Returns the gcd and `P`.
pub fn normalize_gram(q: &PolyMatrix) -> (IntPoly, PolyMatrix) {
    let g = q.content();
    if g.is_zero() {
        return (g, q.clone());
    }
    let mut p = q.div_exact(&g).expect("content divides");
    let trace: BigInt = (0..p.rows().min(p.cols())).map(|i| p.get(i, i).coeff(0)).sum();
    let negate = if !trace.is_zero() {
        trace.is_negative()
    } else {
        let f = p.entries().iter().find(|f| !f.is_zero()).unwrap();
        f.coeff(f.valuation().unwrap()).is_negative()
    };
    if negate {
        p = p.neg();
    }
    let g = if negate { -g } else { g };
    (g, p)
}

/// Whether `X_s P = P X_s^tr` for every generator.
pub fn intertwines(gens: &[SparsePolyMatrix], p: &PolyMatrix) -> Result<(), usize> {
    for (s, x) in gens.iter().enumerate() {
        if x.mul_dense(p) != p.mul(&x.transpose().to_dense()) {
            return Err(s + 1);
        }
    }
    Ok(())
}

/// Columns of a Gram-matrix statistics row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramStats {
    pub max_degree: usize,
    pub max_abs_coeff: BigInt,
    pub diagonal_at_zero: bool,
    /// Prime divisors of `det P(0)`, empty if it is `+-1`.
    pub det_primes: Vec<BigInt>,
    pub det_at_zero: BigInt,
}

impl GramStats {
    pub fn csv_header() -> &'static str {
        "name,deg,absval,diag,detprimes"
    }

    pub fn csv_row(&self, name: &str) -> String {
        let primes: Vec<String> = self.det_primes.iter().map(BigInt::to_string).collect();
        format!(
            "{name},{},{},{},{}",
            self.max_degree,
            self.max_abs_coeff,
            if self.diagonal_at_zero { "y" } else { "n" },
            primes.join(" ")
        )
    }
}

fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= n && p < BigInt::from(1_000_000) {
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

fn at_zero(p: &PolyMatrix) -> PolyMatrix {
    p.map(|f| IntPoly::constant(f.coeff(0)))
}

pub fn gram_stats(p: &PolyMatrix) -> GramStats {
    let p0 = at_zero(p);
    let n = p.rows();
    let diagonal_at_zero = (0..n).all(|i| (0..n).all(|j| i == j || p0.get(i, j).is_zero()));
    let det_at_zero = det_bareiss(&p0).coeff(0);
    GramStats {
        max_degree: p.max_degree().unwrap_or(0),
        max_abs_coeff: p.max_abs_coeff(),
        diagonal_at_zero,
        det_primes: prime_divisors(&det_at_zero),
        det_at_zero,
    }
}

/// Whether `det P(0)` is nonzero.
pub fn check_balanced(p: &PolyMatrix) -> bool {
    !det_bareiss(&at_zero(p)).coeff(0).is_zero()
}

/// Everything a Gram matrix computation produced.
#[derive(Clone, Debug)]
pub struct GramRun {
    pub subset: Vec<usize>,
    pub vertex: usize,
    pub tree: SpecializedTree,
    pub seed_dual: Vec<IntPoly>,
    pub seed_exponent: usize,
    pub basis: FactoredBasis,
    pub basis_dual: FactoredBasis,
    /// Inverse of the core of `B`.
    pub core_inverse: PolyInverse,
    /// `R'` differed from `R` and was folded into the product.
    pub row_fallback: bool,
    /// The palindromicity check on the lifted product had to be dropped.
    pub relaxed_check: bool,
    pub gcd_q: IntPoly,
    pub p: PolyMatrix,
    pub m_p: usize,
}

/// Lower triangle of `Q = Chat * inner * C'`, symmetrized.
fn assemble_q(c_hat: &[IntPoly], inner: &PolyMatrix, c_dual: &[IntPoly]) -> PolyMatrix {
    let n = inner.rows();
    let mut q = PolyMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let e = &(&c_hat[i] * inner.get(i, j)) * &c_dual[j];
            q.set(i, j, e.clone());
            q.set(j, i, e);
        }
    }
    q
}

/// Runs the whole pipeline for `g` with the Benson-Curtis subset `subset`
/// (lexicographically smallest valid one if `None`).
pub fn compute_gram(
    g: &WGraph,
    cox: &CoxeterSystem,
    subset: Option<&[usize]>,
    cfg: &LiftConfig,
) -> Result<GramRun, GramError> {
    let report = validate_wgraph(g, cox);
    if !report.is_valid() {
        return Err(GramError::InvalidWGraph(report.violations));
    }
    let subset: Vec<usize> = match subset {
        Some(j) => j.to_vec(),
        None => benson_curtis_subsets(g).into_iter().next().ok_or(GramError::NoSeed)?.0,
    };
    let vertex = benson_curtis_vertex(g, &subset)?;
    let gens = rep_matrices(g)?;
    let duals: Vec<SparsePolyMatrix> = gens.iter().map(SparsePolyMatrix::transpose).collect();
    let seed_dual = dual_seed(g, &subset, cfg)?;
    let seed_exponent = palindromic_exponent(&seed_dual)
        .filter(|m| m % 2 == 0)
        .ok_or_else(|| GramError::Data("dual seed is not palindromic with even exponent".into()))?;
    let tree = schreier_tree(g, &subset)?;
    let mut seed = vec![IntPoly::zero(); g.dim()];
    seed[vertex] = IntPoly::one();
    let b = PolyMatrix::from_rows(replay_schreier(&tree.tree, &seed, &gens)?);
    let b_dual = PolyMatrix::from_rows(replay_schreier(&tree.tree, &seed_dual, &duals)?);
    let basis = factor_basis(&b)?;
    let basis_dual = factor_basis(&b_dual)?;
    let core_inverse = poly_inverse(&basis.core, cfg)?;

    let row_fallback = basis.row_exponents != basis_dual.row_exponents;
    let left = if row_fallback {
        // B^{-1} B' involves R^{-1} R'; shift to nonnegative powers
        let shifts: Vec<i64> = basis
            .row_exponents
            .iter()
            .zip(&basis_dual.row_exponents)
            .map(|(&d, &e)| e as i64 - d as i64)
            .collect();
        let lo = *shifts.iter().min().unwrap();
        let d: Vec<IntPoly> = shifts.iter().map(|&s| IntPoly::monomial(BigInt::one(), (s - lo) as usize)).collect();
        core_inverse.b.mul(&PolyMatrix::diagonal(&d))
    } else {
        core_inverse.b.clone()
    };

    let mut c_hat_l = IntPoly::one();
    for c in &basis.column_gcds {
        c_hat_l = poly_lcm(&c_hat_l, c);
    }
    let c_hat: Vec<IntPoly> = basis.column_gcds.iter().map(|c| c_hat_l.div_exact(c).expect("lcm")).collect();
    let c_dual = &basis_dual.column_gcds;

    let mut relaxed_check = row_fallback;
    let inner = if row_fallback {
        poly_matmul_lifted(&left, &basis_dual.core, ProductMask::LowerTriangle, |_, _, _| true, cfg)?
    } else {
        match poly_matmul_lifted(&left, &basis_dual.core, ProductMask::LowerTriangle, |_, _, f| is_palindromic(f), cfg) {
            Ok(m) => m,
            Err(PolyLinearError::NoLift(_)) => {
                relaxed_check = true;
                poly_matmul_lifted(&left, &basis_dual.core, ProductMask::LowerTriangle, |_, _, _| true, cfg)?
            }
            Err(e) => return Err(e.into()),
        }
    };
    let q = assemble_q(&c_hat, &inner, c_dual);
    let (gcd_q, p) = normalize_gram(&q);
    intertwines(&gens, &p).map_err(GramError::Verification)?;
    let m_p = palindromic_exponent(p.entries())
        .filter(|m| m % 2 == 0)
        .ok_or_else(|| GramError::Data("Gram matrix is not palindromic with even exponent".into()))?;
    Ok(GramRun {
        subset,
        vertex,
        tree,
        seed_dual,
        seed_exponent,
        basis,
        basis_dual,
        core_inverse,
        row_fallback,
        relaxed_check,
        gcd_q,
        p,
        m_p,
    })
}

/// Outcome of one experimental observation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

/// Irreducible factors of `f` that are not monic palindromic; for degrees
/// beyond factoring range, `f` itself if it is not monic palindromic.
fn non_palindromic_factors(f: &IntPoly) -> Vec<IntPoly> {
    let f = f.primitive_positive();
    if f.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    match factor(&f) {
        Some(fs) => fs.into_iter().map(|(g, _)| g).filter(|g| !is_monic_palindromic(g)).collect(),
        None if is_monic_palindromic(&f) => vec![],
        None => vec![f],
    }
}

fn exponent_observation(name: &'static str, denominators: &[IntPoly]) -> Observation {
    let bad: Vec<String> = denominators.iter().flat_map(non_palindromic_factors).map(|g| g.to_text()).collect();
    Observation {
        name,
        holds: bad.is_empty(),
        detail: if bad.is_empty() { "all irreducible divisors monic palindromic".into() } else { format!("offending divisors [{}]", bad.join("] [")) },
    }
}

/// Checks the four experimental observations on the bases of a run. The
/// irreducible divisors of `exp(B)` are those of `v`, of the inverse
/// denominator of the core, and of the column gcds.
pub fn diagnostics(run: &GramRun, cfg: &LiftConfig) -> Vec<Observation> {
    let d = &run.basis.row_exponents;
    let over: Vec<String> = d
        .iter()
        .zip(&run.tree.lengths)
        .enumerate()
        .filter(|(_, (&di, &li))| di > li + 1)
        .map(|(i, (di, li))| format!("d_{} = {di} > {}", i + 1, li + 1))
        .collect();
    let obs1 = Observation {
        name: "row exponents bounded by length + 1",
        holds: over.is_empty(),
        detail: if over.is_empty() { format!("d = {d:?}") } else { over.join(", ") },
    };
    let mut den = vec![run.core_inverse.c.clone()];
    den.extend(run.basis.column_gcds.iter().cloned());
    let obs2 = exponent_observation("divisors of exp(B) monic palindromic", &den);
    let obs3 = Observation {
        name: "dual row exponents equal row exponents",
        holds: !run.row_fallback,
        detail: if run.row_fallback {
            format!("d = {:?}, d' = {:?}", d, run.basis_dual.row_exponents)
        } else {
            "used and held".into()
        },
    };
    let mut den_dual: Vec<IntPoly> = run.basis_dual.column_gcds.clone();
    let obs4 = match poly_inverse(&run.basis_dual.core, cfg) {
        Ok(inv) => {
            den_dual.push(inv.c);
            exponent_observation("divisors of exp(B') monic palindromic", &den_dual)
        }
        Err(e) => Observation { name: "divisors of exp(B') monic palindromic", holds: false, detail: e.to_string() },
    };
    vec![obs1, obs2, obs3, obs4]
}

/// Whether two matrices are proportional over `Q(v)`.
pub fn proportional(a: &PolyMatrix, b: &PolyMatrix) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    let Some(k) = (0..a.entries().len()).find(|&k| !a.entries()[k].is_zero()) else {
        return b.is_zero();
    };
    let (ak, bk) = (&a.entries()[k], &b.entries()[k]);
    a.entries().iter().zip(b.entries()).all(|(x, y)| x * bk == y * ak)
}

/// Removes common integer and polynomial content, for comparisons.
pub fn primitive_part(m: &PolyMatrix) -> PolyMatrix {
    normalize_gram(m).1
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
    fn factor_simple_bases() {
        let f = factor_basis(&PolyMatrix::identity(3)).unwrap();
        assert_eq!(f.row_exponents, vec![0, 0, 0]);
        assert_eq!(f.core, PolyMatrix::identity(3));
        let d = PolyMatrix::diagonal(&[p(&[0, 1]), p(&[0, 0, 0, 1])]);
        let f = factor_basis(&d).unwrap();
        assert_eq!(f.row_exponents, vec![1, 3]);
        assert_eq!(f.column_gcds, vec![IntPoly::one(), IntPoly::one()]);
        assert_eq!(f.core, PolyMatrix::identity(2));
        assert!(factor_basis(&PolyMatrix::diagonal(&[p(&[1, 1])])).is_err());
    }

    #[test]
    fn stats_and_balance() {
        let s = gram_stats(&PolyMatrix::identity(3));
        assert_eq!((s.max_degree, &s.max_abs_coeff, s.diagonal_at_zero), (0, &BigInt::one(), true));
        assert!(s.det_primes.is_empty());
        assert_eq!(s.csv_row("1"), "1,0,1,y,");
        assert!(!check_balanced(&PolyMatrix::from_rows(vec![vec![p(&[0, 1])]])));
        assert!(check_balanced(&PolyMatrix::diagonal(&[p(&[1]), p(&[2])])));
        let s = gram_stats(&PolyMatrix::diagonal(&[p(&[1]), p(&[6])]));
        assert_eq!(s.det_primes, vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn sign_representation() {
        let cox = CoxeterSystem::type_a(2);
        let run = compute_gram(&WGraph::sign(2), &cox, None, &cfg()).unwrap();
        assert_eq!(run.p, PolyMatrix::identity(1));
    }

    #[test]
    fn a2_reflection() {
        let cox = CoxeterSystem::type_a(2);
        let g = WGraph::reflection(&cox).unwrap();
        let run = compute_gram(&g, &cox, None, &cfg()).unwrap();
        assert_eq!(run.basis.row_exponents, vec![0, 1]);
        assert_eq!(run.basis_dual.row_exponents, vec![0, 1]);
        assert!(run.p.is_symmetric());
        assert_eq!(run.m_p % 2, 0);
        let p0 = crate::hecke::bruteforce_p0(&g, &cox, 100).unwrap();
        assert!(proportional(&run.p, &p0));
        assert!(diagnostics(&run, &cfg()).iter().all(|o| o.holds));
    }

    #[test]
    fn normalization_sign() {
        let q = PolyMatrix::diagonal(&[p(&[-2, 0, -2]), p(&[0, -4])]);
        let (g, m) = normalize_gram(&q);
        assert_eq!(g, p(&[-2]));
        assert_eq!(m, PolyMatrix::diagonal(&[p(&[1, 0, 1]), p(&[0, 2])]));
    }
}
