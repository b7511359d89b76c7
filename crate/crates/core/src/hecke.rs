//! Coxeter systems, W-graphs and the representing matrices of `v T_s` they
//! afford, together with the seed search and Schreier trees used for Gram
//! matrices, and a brute-force Gram matrix for small groups.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::integer_linear::IntMatrix;
use crate::poly::{IntPoly, LaurentPoly};
use crate::poly_matrix::{PolyMatrix, SparsePolyMatrix};
use crate::polyring_linear::{poly_nullspace_rank1, LiftConfig, PolyLinearError};
use crate::rep_engine::{standard_basis, RepError, SchreierTree};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HeckeError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid data: {0}")]
    Invalid(String),
    #[error("bond order {0} is not crystallographic")]
    NonCrystallographic(u32),
    #[error("group has more than {0} elements")]
    GroupTooLarge(usize),
    #[error("no vertex is the unique one containing {0:?}")]
    NotBensonCurtis(Vec<usize>),
    #[error("no specialization in {0:?} gave a full standard basis")]
    NoTree(Vec<i64>),
    #[error(transparent)]
    Linear(#[from] PolyLinearError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> HeckeError {
    HeckeError::Parse { line, msg: msg.into() }
}

/// Meaningful lines of a text file, numbered from 1, comments removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Coxeter matrix of a finite Coxeter system, generators numbered from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterSystem {
    m: Vec<Vec<u32>>,
}

impl CoxeterSystem {
    pub fn new(m: Vec<Vec<u32>>) -> Result<Self, HeckeError> {
        let n = m.len();
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(HeckeError::Invalid(format!("row {} of the Coxeter matrix has length {}", i + 1, row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                if i == j && x != 1 {
                    return Err(HeckeError::Invalid(format!("m({0},{0}) = {x}", i + 1)));
                }
                if i != j && (x < 2 || m[j][i] != x) {
                    return Err(HeckeError::Invalid(format!("m({},{}) = {x}", i + 1, j + 1)));
                }
            }
        }
        Ok(CoxeterSystem { m })
    }

    /// System with the given bonds `(s, t, m)` (0-based) and all other
    /// pairs commuting.
    pub fn from_bonds(rank: usize, bonds: &[(usize, usize, u32)]) -> Self {
        let mut m = vec![vec![2; rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(s, t, o) in bonds {
            m[s][t] = o;
            m[t][s] = o;
        }
        CoxeterSystem::new(m).expect("valid bonds")
    }

    pub fn type_a(n: usize) -> Self {
        let bonds: Vec<_> = (1..n).map(|i| (i - 1, i, 3)).collect();
        Self::from_bonds(n, &bonds)
    }

    /// `B_n` with the order-4 bond between the first two generators.
    pub fn type_b(n: usize) -> Self {
        let bonds: Vec<_> = (1..n).map(|i| (i - 1, i, if i == 1 { 4 } else { 3 })).collect();
        Self::from_bonds(n, &bonds)
    }

    /// `E_n` (n = 6, 7, 8) in the usual numbering: chain 1-3-4-5-6-..., with 2 attached to 4.
    pub fn type_e(n: usize) -> Self {
        assert!((6..=8).contains(&n));
        let mut bonds = vec![(0, 2, 3), (1, 3, 3)];
        bonds.extend((3..n).map(|i| (i - 1, i, 3)));
        Self::from_bonds(n, &bonds)
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn order(&self, s: usize, t: usize) -> u32 {
        self.m[s][t]
    }

    /// Parses `"coxeter n"` followed by the entries above the diagonal, row by row.
    pub fn parse(text: &str) -> Result<Self, HeckeError> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| parse_err(0, "empty file"))?;
        let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["coxeter", n] => n.parse::<usize>().map_err(|_| parse_err(ln, "bad rank"))?,
            _ => return Err(parse_err(ln, "expected 'coxeter <rank>'")),
        };
        let mut nums = Vec::new();
        for (ln, l) in lines {
            for t in l.split_whitespace() {
                nums.push(t.parse::<u32>().map_err(|_| parse_err(ln, format!("bad entry '{t}'")))?);
            }
        }
        if nums.len() != n * (n.saturating_sub(1)) / 2 {
            return Err(parse_err(ln, format!("expected {} entries, found {}", n * (n.saturating_sub(1)) / 2, nums.len())));
        }
        let mut m = vec![vec![1; n]; n];
        let mut it = nums.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                let x = it.next().unwrap();
                m[i][j] = x;
                m[j][i] = x;
            }
        }
        CoxeterSystem::new(m)
    }

    pub fn to_text(&self) -> String {
        let n = self.rank();
        let mut s = format!("coxeter {n}\n");
        for i in 0..n.saturating_sub(1) {
            let row: Vec<String> = (i + 1..n).map(|j| self.m[i][j].to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Integer Cartan matrix with `a_st a_ts = 4 cos^2(pi / m_st)`.
    pub fn cartan_matrix(&self) -> Result<Vec<Vec<i64>>, HeckeError> {
        let n = self.rank();
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            for j in i + 1..n {
                let (x, y) = match self.m[i][j] {
                    2 => (0, 0),
                    3 => (-1, -1),
                    4 => (-1, -2),
                    6 => (-1, -3),
                    m => return Err(HeckeError::NonCrystallographic(m)),
                };
                a[i][j] = x;
                a[j][i] = y;
            }
        }
        Ok(a)
    }
}

/// Edge coefficient `m_ij^s`: one value for all `s`, optionally overridden
/// for individual generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeCoeffs {
    pub default: Option<LaurentPoly>,
    pub by_generator: BTreeMap<usize, LaurentPoly>,
}

/// W-graph data: vertex sets `I_i` and edge coefficients `m_ij^s`, all
/// indices 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WGraph {
    rank: usize,
    isets: Vec<u64>,
    edges: BTreeMap<(usize, usize), EdgeCoeffs>,
}

fn mask_of(s: &[usize]) -> u64 {
    s.iter().fold(0, |m, &x| m | (1 << x))
}

fn members(mask: u64, rank: usize) -> Vec<usize> {
    (0..rank).filter(|&s| mask >> s & 1 == 1).collect()
}

impl WGraph {
    pub fn new(rank: usize, isets: &[Vec<usize>]) -> Result<Self, HeckeError> {
        if rank > 63 {
            return Err(HeckeError::Invalid(format!("rank {rank} too large")));
        }
        for (i, set) in isets.iter().enumerate() {
            if let Some(&s) = set.iter().find(|&&s| s >= rank) {
                return Err(HeckeError::Invalid(format!("I_{} contains generator {}", i + 1, s + 1)));
            }
        }
        Ok(WGraph { rank, isets: isets.iter().map(|s| mask_of(s)).collect(), edges: BTreeMap::new() })
    }

    /// Sets `m_ij^s` for one generator, or for all generators when `s` is `None`.
    pub fn set_edge(&mut self, i: usize, j: usize, m: LaurentPoly, s: Option<usize>) -> Result<(), HeckeError> {
        let d = self.dim();
        if i >= d || j >= d || i == j {
            return Err(HeckeError::Invalid(format!("edge {} {} out of range", i + 1, j + 1)));
        }
        let e = self.edges.entry((i, j)).or_default();
        match s {
            None => e.default = Some(m),
            Some(s) if s < self.rank => {
                e.by_generator.insert(s, m);
            }
            Some(s) => return Err(HeckeError::Invalid(format!("generator {} out of range", s + 1))),
        }
        Ok(())
    }

    /// The graph with a single vertex and `I_1 = S`.
    pub fn sign(rank: usize) -> Self {
        WGraph::new(rank, &[(0..rank).collect()]).unwrap()
    }

    /// Reflection representation: `I_i = {s_i}`, edge coefficients from the
    /// Cartan matrix.
    pub fn reflection(cox: &CoxeterSystem) -> Result<Self, HeckeError> {
        let a = cox.cartan_matrix()?;
        let n = cox.rank();
        let isets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let mut g = WGraph::new(n, &isets)?;
        for i in 0..n {
            for j in 0..n {
                if i != j && a[i][j] != 0 {
                    g.set_edge(i, j, LaurentPoly::monomial(BigInt::from(-a[i][j]), 0), None)?;
                }
            }
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.isets.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn iset(&self, i: usize) -> Vec<usize> {
        members(self.isets[i], self.rank)
    }

    pub fn contains(&self, i: usize, s: usize) -> bool {
        self.isets[i] >> s & 1 == 1
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(usize, usize), &EdgeCoeffs)> {
        self.edges.iter()
    }

    /// `m_ij^s`, if present.
    pub fn coefficient(&self, i: usize, j: usize, s: usize) -> Option<&LaurentPoly> {
        let e = self.edges.get(&(i, j))?;
        e.by_generator.get(&s).or(e.default.as_ref())
    }

    /// Parses the text format: `wgraph d rank`, then `I i : s,...` and
    /// `E i j : coeffs [s]` lines with 1-based indices.
    pub fn parse(text: &str) -> Result<Self, HeckeError> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| parse_err(0, "empty file"))?;
        let (d, rank) = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["wgraph", d, r] => (
                d.parse::<usize>().map_err(|_| parse_err(ln, "bad dimension"))?,
                r.parse::<usize>().map_err(|_| parse_err(ln, "bad rank"))?,
            ),
            _ => return Err(parse_err(ln, "expected 'wgraph <dim> <rank>'")),
        };
        let index = |ln: usize, t: &str, bound: usize| -> Result<usize, HeckeError> {
            match t.trim().parse::<usize>() {
                Ok(k) if (1..=bound).contains(&k) => Ok(k - 1),
                _ => Err(parse_err(ln, format!("index '{t}' not in 1..{bound}"))),
            }
        };
        let mut isets: Vec<Option<Vec<usize>>> = vec![None; d];
        let mut edges = Vec::new();
        for (ln, l) in lines {
            let (head, body) = l.split_once(':').ok_or_else(|| parse_err(ln, "missing ':'"))?;
            let head: Vec<&str> = head.split_whitespace().collect();
            match head[..] {
                ["I", i] => {
                    let i = index(ln, i, d)?;
                    let set = body
                        .split(',')
                        .map(str::trim)
                        .filter(|t| !t.is_empty())
                        .map(|t| index(ln, t, rank))
                        .collect::<Result<Vec<_>, _>>()?;
                    if isets[i].replace(set).is_some() {
                        return Err(parse_err(ln, format!("I_{} given twice", i + 1)));
                    }
                }
                ["E", i, j] => {
                    let (i, j) = (index(ln, i, d)?, index(ln, j, d)?);
                    let mut parts = body.split_whitespace();
                    let coeff = parts.next().ok_or_else(|| parse_err(ln, "missing coefficient"))?;
                    let m: LaurentPoly = coeff.parse().map_err(|_| parse_err(ln, format!("bad coefficient '{coeff}'")))?;
                    let s = parts.next().map(|t| index(ln, t, rank)).transpose()?;
                    if parts.next().is_some() {
                        return Err(parse_err(ln, "trailing input"));
                    }
                    edges.push((ln, i, j, m, s));
                }
                _ => return Err(parse_err(ln, "expected an 'I' or 'E' record")),
            }
        }
        let isets: Vec<Vec<usize>> = isets
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| parse_err(0, format!("I_{} missing", i + 1))))
            .collect::<Result<_, _>>()?;
        let mut g = WGraph::new(rank, &isets)?;
        for (ln, i, j, m, s) in edges {
            g.set_edge(i, j, m, s).map_err(|e| parse_err(ln, e.to_string()))?;
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("wgraph {} {}\n", self.dim(), self.rank);
        for i in 0..self.dim() {
            let set: Vec<String> = self.iset(i).iter().map(|x| (x + 1).to_string()).collect();
            writeln!(s, "I {} : {}", i + 1, set.join(",")).unwrap();
        }
        let coeff = |m: &LaurentPoly| format!("{}:{}", m.valuation(), m.poly().to_text());
        for ((i, j), e) in &self.edges {
            if let Some(m) = &e.default {
                writeln!(s, "E {} {} : {}", i + 1, j + 1, coeff(m)).unwrap();
            }
            for (t, m) in &e.by_generator {
                writeln!(s, "E {} {} : {} {}", i + 1, j + 1, coeff(m), t + 1).unwrap();
            }
        }
        s
    }
}

/// Matrix of `v T_s` acting on row vectors: `(j, j)` is `-1` if `s` is in
/// `I_j` and `v^2` otherwise; `(j, i)` is `v m_ij^s` when `s` is in `I_i`
/// but not in `I_j`.
pub fn rep_matrix(g: &WGraph, s: usize) -> Result<SparsePolyMatrix, HeckeError> {
    let d = g.dim();
    let mut m = SparsePolyMatrix::new(d, d);
    for j in 0..d {
        let diag = if g.contains(j, s) { IntPoly::from_i64(&[-1]) } else { IntPoly::monomial(BigInt::from(1), 2) };
        m.add_entry(j, j, diag);
    }
    for &(i, j) in g.edges.keys() {
        if !g.contains(i, s) || g.contains(j, s) {
            continue;
        }
        if let Some(c) = g.coefficient(i, j, s) {
            let p = c.shift(1).to_poly().ok_or_else(|| {
                HeckeError::Invalid(format!("v * m_{},{} has negative powers of v", i + 1, j + 1))
            })?;
            m.add_entry(j, i, p);
        }
    }
    Ok(m)
}

/// `v T_s` for every generator.
pub fn rep_matrices(g: &WGraph) -> Result<Vec<SparsePolyMatrix>, HeckeError> {
    (0..g.rank()).map(|s| rep_matrix(g, s)).collect()
}

/// Matrix of `v T_s` in the dual representation `T_w -> X(T_{w^-1})^tr`.
pub fn dual_rep_matrix(g: &WGraph, s: usize) -> Result<SparsePolyMatrix, HeckeError> {
    rep_matrix(g, s).map(|m| m.transpose())
}

/// Itemized violations of the W-graph conditions and relations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn alternating_product(x: &PolyMatrix, y: &PolyMatrix, len: u32) -> PolyMatrix {
    let mut p = x.clone();
    for k in 1..len {
        p = p.mul(if k % 2 == 1 { y } else { x });
    }
    p
}

/// Checks the edge conditions, the quadratic relation and the braid
/// relations of `cox`.
pub fn validate_wgraph(g: &WGraph, cox: &CoxeterSystem) -> ValidationReport {
    let mut v = Vec::new();
    if g.rank() != cox.rank() {
        v.push(format!("W-graph has rank {}, Coxeter system has rank {}", g.rank(), cox.rank()));
        return ValidationReport { violations: v };
    }
    for (&(i, j), e) in g.edges() {
        let coeffs = e.default.iter().map(|m| (None, m)).chain(e.by_generator.iter().map(|(s, m)| (Some(*s), m)));
        for (s, m) in coeffs {
            let name = match s {
                None => format!("m_{},{}", i + 1, j + 1),
                Some(s) => format!("m_{},{}^{}", i + 1, j + 1, s + 1),
            };
            if !m.is_zero() && m.valuation() < 0 {
                v.push(format!("v * {name} is not in vZ[v]"));
            }
            if m.star() != *m {
                v.push(format!("{name} is not invariant under v -> 1/v"));
            }
            if let Some(s) = s {
                if !g.contains(i, s) || g.contains(j, s) {
                    v.push(format!("{name} given although s{} is not in I_{} minus I_{}", s + 1, i + 1, j + 1));
                }
            }
        }
    }
    if !v.is_empty() {
        return ValidationReport { violations: v };
    }
    let mats: Vec<PolyMatrix> = match rep_matrices(g) {
        Ok(ms) => ms.iter().map(SparsePolyMatrix::to_dense).collect(),
        Err(e) => return ValidationReport { violations: vec![e.to_string()] },
    };
    let d = g.dim();
    let v2 = PolyMatrix::diagonal(&vec![IntPoly::monomial(BigInt::from(1), 2); d]);
    let id = PolyMatrix::identity(d);
    for (s, x) in mats.iter().enumerate() {
        if !x.add(&v2.neg()).mul(&x.add(&id)).is_zero() {
            v.push(format!("quadratic relation fails for s{}", s + 1));
        }
    }
    for s in 0..g.rank() {
        for t in s + 1..g.rank() {
            let m = cox.order(s, t);
            if alternating_product(&mats[s], &mats[t], m) != alternating_product(&mats[t], &mats[s], m) {
                v.push(format!("braid relation of length {m} fails for s{}, s{}", s + 1, t + 1));
            }
        }
    }
    ValidationReport { violations: v }
}

/// Subsets `J` (sorted generator lists) for which exactly one vertex `i`
/// has `J` contained in `I_i`, paired with that vertex; lexicographic order.
pub fn benson_curtis_subsets(g: &WGraph) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    for mask in 0u64..1 << g.rank() {
        let mut hits = g.isets.iter().enumerate().filter(|(_, &set)| set & mask == mask);
        if let (Some((i, _)), None) = (hits.next(), hits.next()) {
            out.push((members(mask, g.rank()), i));
        }
    }
    out.sort();
    out
}

/// The vertex singled out by `j`.
pub fn benson_curtis_vertex(g: &WGraph, j: &[usize]) -> Result<usize, HeckeError> {
    let mask = mask_of(j);
    let mut hits = (0..g.dim()).filter(|&i| g.isets[i] & mask == mask);
    match (hits.next(), hits.next()) {
        (Some(i), None) => Ok(i),
        _ => Err(HeckeError::NotBensonCurtis(j.to_vec())),
    }
}

/// `v` times the dual action of `sum_{s in J} T_s + |J| / v`, i.e.
/// `sum_{s in J} (v T_s)^tr + |J| I`.
pub fn distinguished_action(g: &WGraph, j: &[usize]) -> Result<PolyMatrix, HeckeError> {
    let d = g.dim();
    let mut m = PolyMatrix::diagonal(&vec![IntPoly::constant(BigInt::from(j.len())); d]);
    for &s in j {
        m = m.add(&dual_rep_matrix(g, s)?.to_dense());
    }
    Ok(m)
}

/// Primitive generator of the kernel of the distinguished action: the seed
/// of the dual standard basis.
pub fn dual_seed(g: &WGraph, j: &[usize], cfg: &LiftConfig) -> Result<Vec<IntPoly>, HeckeError> {
    if g.dim() == 1 {
        return Ok(vec![IntPoly::one()]);
    }
    Ok(poly_nullspace_rank1(&distinguished_action(g, j)?, cfg)?)
}

/// Schreier tree found at a specialization `v -> b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializedTree {
    pub tree: SchreierTree,
    pub place: i64,
    /// Depth of each node, i.e. the length of the Hecke algebra element
    /// producing it.
    pub lengths: Vec<usize>,
}

/// Standard basis at `v -> b` from the Benson-Curtis seed of `J`.
pub fn specialized_schreier_tree(g: &WGraph, j: &[usize], b: i64) -> Result<SpecializedTree, HeckeError> {
    let i = benson_curtis_vertex(g, j)?;
    let b_big = BigInt::from(b);
    let gens: Vec<IntMatrix> = rep_matrices(g)?.iter().map(|m| m.eval(&b_big)).collect();
    let mut seed = vec![BigInt::from(0); g.dim()];
    seed[i] = BigInt::from(1);
    let (_, tree) = standard_basis(&gens, &seed)?;
    let lengths = tree.depths();
    Ok(SpecializedTree { tree, place: b, lengths })
}

/// Places tried, in order, for Schreier trees.
pub const TREE_PLACES: [i64; 3] = [1, 2, 3];

/// First successful specialized tree over [`TREE_PLACES`].
pub fn schreier_tree(g: &WGraph, j: &[usize]) -> Result<SpecializedTree, HeckeError> {
    for b in TREE_PLACES {
        match specialized_schreier_tree(g, j, b) {
            Err(HeckeError::Rep(RepError::Reducible { .. })) => continue,
            other => return other,
        }
    }
    Err(HeckeError::NoTree(TREE_PLACES.to_vec()))
}

pub const GROUP_CAP: usize = 2000;

/// One reduced word per group element (0-based generators), by increasing
/// length. Every word's prefix without its last letter occurs earlier.
pub fn enumerate_group(cox: &CoxeterSystem, cap: usize) -> Result<Vec<Vec<usize>>, HeckeError> {
    let a = cox.cartan_matrix()?;
    let n = cox.rank();
    // action on the root lattice: s_i(alpha_j) = alpha_j - a_ij alpha_i, rows = images
    let refl: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut m = vec![0i64; n * n];
            for j in 0..n {
                m[j * n + j] = 1;
                m[j * n + i] -= a[i][j];
            }
            m
        })
        .collect();
    let mul = |x: &[i64], y: &[i64]| -> Vec<i64> {
        let mut z = vec![0i64; n * n];
        for r in 0..n {
            for k in 0..n {
                let xv = x[r * n + k];
                if xv != 0 {
                    for c in 0..n {
                        z[r * n + c] += xv * y[k * n + c];
                    }
                }
            }
        }
        z
    };
    let mut id = vec![0i64; n * n];
    for k in 0..n {
        id[k * n + k] = 1;
    }
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    seen.insert(id.clone(), 0);
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut mats = vec![id];
    let mut k = 0;
    while k < words.len() {
        for (s, r) in refl.iter().enumerate() {
            let m = mul(&mats[k], r);
            if !seen.contains_key(&m) {
                if words.len() >= cap {
                    return Err(HeckeError::GroupTooLarge(cap));
                }
                seen.insert(m.clone(), words.len());
                let mut w = words[k].clone();
                w.push(s);
                words.push(w);
                mats.push(m);
            }
        }
        k += 1;
    }
    Ok(words)
}

/// `v^{2 l(w_0)} sum_w X(T_w) X(T_w)^tr` over all `w` in `W`, written with
/// `N_w = v^{l(w)} X(T_w)` as `sum_w v^{2(l(w_0) - l(w))} N_w N_w^tr`.
pub fn bruteforce_p0(g: &WGraph, cox: &CoxeterSystem, cap: usize) -> Result<PolyMatrix, HeckeError> {
    let words = enumerate_group(cox, cap)?;
    let gens: Vec<PolyMatrix> = rep_matrices(g)?.iter().map(SparsePolyMatrix::to_dense).collect();
    let index: HashMap<&[usize], usize> = words.iter().enumerate().map(|(k, w)| (w.as_slice(), k)).collect();
    let l0 = words.last().map_or(0, Vec::len);
    let mut n_w: Vec<PolyMatrix> = Vec::with_capacity(words.len());
    let mut p0 = PolyMatrix::zeros(g.dim(), g.dim());
    for w in &words {
        let m = match w.split_last() {
            None => PolyMatrix::identity(g.dim()),
            Some((&s, prefix)) => n_w[index[prefix]].mul(&gens[s]),
        };
        let term = m.mul(&m.transpose()).map(|p| p.shift(2 * (l0 - w.len())));
        p0 = p0.add(&term);
        n_w.push(m);
    }
    Ok(p0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn a2() -> (WGraph, CoxeterSystem) {
        let cox = CoxeterSystem::type_a(2);
        (WGraph::reflection(&cox).unwrap(), cox)
    }

    #[test]
    fn a2_matrices() {
        let (g, _) = a2();
        let x1 = rep_matrix(&g, 0).unwrap().to_dense();
        assert_eq!(x1, PolyMatrix::from_rows(vec![vec![p(&[-1]), p(&[])], vec![p(&[0, 1]), p(&[0, 0, 1])]]));
        assert_eq!(dual_rep_matrix(&g, 0).unwrap().to_dense(), x1.transpose());
    }

    #[test]
    fn validation() {
        let (g, cox) = a2();
        assert!(validate_wgraph(&g, &cox).is_valid());
        let wrong = CoxeterSystem::from_bonds(2, &[(0, 1, 4)]);
        let r = validate_wgraph(&g, &wrong);
        assert_eq!(r.violations.len(), 1);
        assert!(r.violations[0].contains("braid"));
        let trivial = WGraph::new(3, &[vec![], vec![]]).unwrap();
        assert!(validate_wgraph(&trivial, &CoxeterSystem::type_a(3)).is_valid());
        for cox in [CoxeterSystem::type_b(2), CoxeterSystem::type_b(3), CoxeterSystem::from_bonds(2, &[(0, 1, 6)])] {
            assert!(validate_wgraph(&WGraph::reflection(&cox).unwrap(), &cox).is_valid());
        }
        let mut bad = g.clone();
        bad.set_edge(0, 1, "-1:1".parse().unwrap(), None).unwrap();
        assert!(!validate_wgraph(&bad, &cox).is_valid());
    }

    #[test]
    fn text_formats() {
        let (g, cox) = a2();
        assert_eq!(g.to_text(), "wgraph 2 2\nI 1 : 1\nI 2 : 2\nE 1 2 : 0:1\nE 2 1 : 0:1\n");
        assert_eq!(WGraph::parse(&g.to_text()).unwrap(), g);
        assert_eq!(CoxeterSystem::parse(&cox.to_text()).unwrap(), cox);
        let e6 = CoxeterSystem::type_e(6);
        assert_eq!(CoxeterSystem::parse(&e6.to_text()).unwrap(), e6);
        assert!(WGraph::parse("wgraph 1 1\nI 2 : 1\n").is_err());
        let with_override = "wgraph 2 2\nI 1 : 1\nI 2 : 2\nE 1 2 : 0:1\nE 2 1 : 0:2 2\n";
        assert_eq!(WGraph::parse(with_override).unwrap().to_text(), with_override);
    }

    #[test]
    fn seeds() {
        let (g, _) = a2();
        assert_eq!(benson_curtis_subsets(&g), vec![(vec![0], 0), (vec![1], 1)]);
        assert_eq!(benson_curtis_subsets(&WGraph::new(2, &[vec![]]).unwrap()), vec![
            (vec![], 0)
        ]);
        let m = distinguished_action(&g, &[0]).unwrap();
        assert_eq!(m, PolyMatrix::from_rows(vec![vec![p(&[]), p(&[0, 1])], vec![p(&[]), p(&[1, 0, 1])]]));
        assert_eq!(dual_seed(&g, &[0], &LiftConfig::default()).unwrap(), vec![p(&[1, 0, 1]), p(&[0, -1])]);
    }

    #[test]
    fn a2_tree() {
        let (g, _) = a2();
        let t = specialized_schreier_tree(&g, &[0], 1).unwrap();
        assert_eq!(t.tree.entries(), &[(0, 0), (1, 2)]);
        assert_eq!(t.lengths, vec![0, 1]);
    }

    #[test]
    fn group_orders() {
        let sizes = |c: &CoxeterSystem| {
            let w = enumerate_group(c, GROUP_CAP).unwrap();
            (w.len(), w.last().unwrap().len())
        };
        assert_eq!(sizes(&CoxeterSystem::type_a(1)), (2, 1));
        assert_eq!(sizes(&CoxeterSystem::type_a(2)), (6, 3));
        assert_eq!(sizes(&CoxeterSystem::type_b(2)), (8, 4));
        assert_eq!(sizes(&CoxeterSystem::type_a(3)), (24, 6));
        assert_eq!(sizes(&CoxeterSystem::type_b(3)), (48, 9));
        assert_eq!(enumerate_group(&CoxeterSystem::type_e(6), GROUP_CAP), Err(HeckeError::GroupTooLarge(GROUP_CAP)));
        assert_eq!(
            enumerate_group(&CoxeterSystem::from_bonds(2, &[(0, 1, 5)]), GROUP_CAP),
            Err(HeckeError::NonCrystallographic(5))
        );
    }

    #[test]
    fn brute_force_gram() {
        let cox = CoxeterSystem::type_a(1);
        let index = WGraph::new(1, &[vec![]]).unwrap();
        assert_eq!(bruteforce_p0(&index, &cox, GROUP_CAP).unwrap(), PolyMatrix::from_rows(vec![vec![p(&[0, 0, 1, 0, 1])]]));
        for cox in [CoxeterSystem::type_a(2), CoxeterSystem::type_b(2), CoxeterSystem::type_a(3)] {
            let g = WGraph::reflection(&cox).unwrap();
            let p0 = bruteforce_p0(&g, &cox, GROUP_CAP).unwrap();
            assert!(p0.is_symmetric());
            for x in rep_matrices(&g).unwrap() {
                let x = x.to_dense();
                assert_eq!(x.mul(&p0), p0.mul(&x.transpose()));
            }
        }
    }
}
