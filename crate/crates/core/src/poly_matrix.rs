//! Matrices over `Z[X]` in dense and sparse storage, with the text format
//! used for golden files and the command line.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::integer_linear::IntMatrix;
use crate::poly::{gcd_subresultant, IntPoly, LaurentPoly};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MatrixFormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header")]
    MissingHeader,
}

fn syntax(line: usize, msg: impl Into<String>) -> MatrixFormatError {
    MatrixFormatError::Syntax { line, msg: msg.into() }
}

/// Dense row-major matrix over `Z[X]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<IntPoly>,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_text()).collect();
            writeln!(f, "  {}", row.join(" ; "))?;
        }
        Ok(())
    }
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![IntPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![IntPoly::one(); n])
    }

    pub fn diagonal(d: &[IntPoly]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, p) in d.iter().enumerate() {
            m.data[i * n + i] = p.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<IntPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        PolyMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix from nested coefficient lists.
    pub fn from_coeffs(rows: &[&[&[i64]]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|c| IntPoly::from_i64(c)).collect()).collect())
    }

    /// Constant matrix.
    pub fn from_int(m: &IntMatrix) -> Self {
        PolyMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries().iter().map(|x| IntPoly::constant(x.clone())).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &IntPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: IntPoly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[IntPoly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[IntPoly] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(IntPoly::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
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

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Direct dense product.
    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
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
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(|p| -p)
    }

    pub fn scale(&self, c: &IntPoly) -> PolyMatrix {
        self.map(|p| p * c)
    }

    pub fn map(&self, f: impl Fn(&IntPoly) -> IntPoly) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Exact division of every entry by `c`; `None` if some entry is not divisible.
    pub fn div_exact(&self, c: &IntPoly) -> Option<PolyMatrix> {
        let data = self.data.iter().map(|p| p.div_exact(c)).collect::<Option<Vec<_>>>()?;
        Some(PolyMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[IntPoly]) -> Vec<IntPoly> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![IntPoly::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o = &*o + &(x * a);
                }
            }
        }
        out
    }

    /// Specialization `X -> b`.
    pub fn eval(&self, b: &BigInt) -> IntMatrix {
        IntMatrix::from_vec(self.rows, self.cols, self.data.iter().map(|p| p.eval(b)).collect())
    }

    /// Largest degree of a nonzero entry.
    pub fn max_degree(&self) -> Option<usize> {
        self.data.iter().filter_map(IntPoly::degree).max()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.data.iter().map(IntPoly::max_abs_coeff).max().unwrap_or_default()
    }

    /// Largest degree of a nonzero entry in each row.
    pub fn row_degrees(&self) -> Vec<Option<usize>> {
        (0..self.rows).map(|i| self.row(i).iter().filter_map(IntPoly::degree).max()).collect()
    }

    /// Largest degree of a nonzero entry in each column.
    pub fn col_degrees(&self) -> Vec<Option<usize>> {
        (0..self.cols).map(|j| (0..self.rows).filter_map(|i| self.get(i, j).degree()).max()).collect()
    }

    /// Polynomial gcd of all entries, positive leading coefficient.
    pub fn content(&self) -> IntPoly {
        poly_gcd_all(&self.data)
    }

    pub fn to_sparse(&self) -> SparsePolyMatrix {
        let mut s = SparsePolyMatrix::new(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = self.get(i, j);
                if !p.is_zero() {
                    s.rows_data[i].push((j, p.clone()));
                }
            }
        }
        s
    }

    /// Text form in dense layout.
    pub fn to_dense_text(&self) -> String {
        let mut s = format!("{} {} dense\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_text()).collect();
            s.push_str(&row.join(";"));
            s.push('\n');
        }
        s
    }

    /// Text form in sparse layout (1-based indices).
    pub fn to_sparse_text(&self) -> String {
        self.to_sparse().to_text()
    }

    /// Parses either layout; `#` starts a comment.
    pub fn parse(text: &str) -> Result<PolyMatrix, MatrixFormatError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or(MatrixFormatError::MissingHeader)?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(syntax(hl, "expected header \"rows cols format\""));
        }
        let rows: usize = parts[0].parse().map_err(|_| syntax(hl, "bad row count"))?;
        let cols: usize = parts[1].parse().map_err(|_| syntax(hl, "bad column count"))?;
        let entry = |n: usize, s: &str| -> Result<IntPoly, MatrixFormatError> {
            let l: LaurentPoly = s.parse().map_err(|e| syntax(n, format!("{e}")))?;
            l.to_poly().ok_or_else(|| syntax(n, format!("entry {s} has negative powers")))
        };
        let mut m = PolyMatrix::zeros(rows, cols);
        match parts[2] {
            "dense" => {
                let mut i = 0;
                for (n, line) in lines {
                    if i >= rows {
                        return Err(syntax(n, "too many rows"));
                    }
                    let items: Vec<&str> = line.split(';').collect();
                    if items.len() != cols {
                        return Err(syntax(n, format!("expected {cols} entries, found {}", items.len())));
                    }
                    for (j, it) in items.iter().enumerate() {
                        m.set(i, j, entry(n, it)?);
                    }
                    i += 1;
                }
                if i != rows {
                    return Err(syntax(hl, format!("expected {rows} rows, found {i}")));
                }
            }
            "sparse" => {
                for (n, line) in lines {
                    let mut it = line.split_whitespace();
                    let idx = |t: Option<&str>, bound: usize| -> Result<usize, MatrixFormatError> {
                        let k: usize = t.and_then(|t| t.parse().ok()).ok_or_else(|| syntax(n, "bad index"))?;
                        if k == 0 || k > bound {
                            return Err(syntax(n, format!("index {k} out of range")));
                        }
                        Ok(k - 1)
                    };
                    let i = idx(it.next(), rows)?;
                    let j = idx(it.next(), cols)?;
                    let rest: Vec<&str> = it.collect();
                    if rest.len() != 1 {
                        return Err(syntax(n, "expected \"i j poly\""));
                    }
                    m.set(i, j, entry(n, rest[0])?);
                }
            }
            other => return Err(syntax(hl, format!("unknown format {other:?}"))),
        }
        Ok(m)
    }
}

/// Polynomial gcd of a list of polynomials with positive leading coefficient.
pub fn poly_gcd_all(ps: &[IntPoly]) -> IntPoly {
    let mut g = IntPoly::zero();
    for p in ps {
        if p.is_zero() {
            continue;
        }
        g = gcd_subresultant(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Sparse matrix over `Z[X]`, stored row by row without zero entries.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePolyMatrix {
    rows: usize,
    cols: usize,
    rows_data: Vec<Vec<(usize, IntPoly)>>,
}

impl fmt::Debug for SparsePolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_dense())
    }
}

impl SparsePolyMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparsePolyMatrix { rows, cols, rows_data: vec![vec![]; rows] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `p` to entry `(i, j)`.
    pub fn add_entry(&mut self, i: usize, j: usize, p: IntPoly) {
        assert!(i < self.rows && j < self.cols);
        let row = &mut self.rows_data[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => {
                let s = &row[k].1 + &p;
                if s.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = s;
                }
            }
            Err(k) => {
                if !p.is_zero() {
                    row.insert(k, (j, p));
                }
            }
        }
    }

    pub fn get(&self, i: usize, j: usize) -> IntPoly {
        let row = &self.rows_data[i];
        row.binary_search_by_key(&j, |(c, _)| *c).map(|k| row[k].1.clone()).unwrap_or_default()
    }

    /// Nonzero entries `(i, j, p)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &IntPoly)> {
        self.rows_data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, p)| (i, *j, p)))
    }

    pub fn nnz(&self) -> usize {
        self.rows_data.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(self.rows, self.cols);
        for (i, j, p) in self.entries() {
            m.set(i, j, p.clone());
        }
        m
    }

    pub fn transpose(&self) -> SparsePolyMatrix {
        let mut t = SparsePolyMatrix::new(self.cols, self.rows);
        for (i, j, p) in self.entries() {
            t.rows_data[j].push((i, p.clone()));
        }
        t
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[IntPoly]) -> Vec<IntPoly> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![IntPoly::zero(); self.cols];
        for (x, row) in v.iter().zip(&self.rows_data) {
            if x.is_zero() {
                continue;
            }
            for (j, p) in row {
                out[*j] = &out[*j] + &(x * p);
            }
        }
        out
    }

    /// Sparse times dense.
    pub fn mul_dense(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows());
        let rows: Vec<Vec<IntPoly>> =
            (0..self.rows).map(|i| {
                let mut out = vec![IntPoly::zero(); other.cols()];
                for (k, a) in &self.rows_data[i] {
                    for (o, b) in out.iter_mut().zip(other.row(*k)) {
                        if !b.is_zero() {
                            *o = &*o + &(a * b);
                        }
                    }
                }
                out
            }).collect();
        PolyMatrix::from_rows(rows)
    }

    pub fn eval(&self, b: &BigInt) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (i, j, p) in self.entries() {
            m.set(i, j, p.eval(b));
        }
        m
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} sparse\n", self.rows, self.cols);
        for (i, j, p) in self.entries() {
            s.push_str(&format!("{} {} {}\n", i + 1, j + 1, p.to_text()));
        }
        s
    }
}

impl From<&PolyMatrix> for SparsePolyMatrix {
    fn from(m: &PolyMatrix) -> Self {
        m.to_sparse()
    }
}

/// Determinant by fraction-free elimination (Bareiss) over `Z[X]`.
pub fn det_bareiss(m: &PolyMatrix) -> IntPoly {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return IntPoly::one();
    }
    let mut a: Vec<Vec<IntPoly>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return IntPoly::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = IntPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign.is_one() {
        d
    } else {
        -d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn product_and_transpose() {
        let a = PolyMatrix::from_coeffs(&[&[&[0, 1], &[1]]]);
        let b = PolyMatrix::from_coeffs(&[&[&[1]], &[&[0, 1]]]);
        assert_eq!(a.mul(&b), PolyMatrix::from_coeffs(&[&[&[0, 2]]]));
        assert_eq!(a.transpose(), PolyMatrix::from_coeffs(&[&[&[0, 1]], &[&[1]]]));
        assert_eq!(a.to_sparse().mul_dense(&b), a.mul(&b));
    }

    #[test]
    fn text_formats() {
        let m = PolyMatrix::from_coeffs(&[&[&[1, 2], &[]], &[&[0, 0, 3], &[-1]]]);
        let dense = m.to_dense_text();
        assert_eq!(dense, "2 2 dense\n1,2;0\n0,0,3;-1\n");
        assert_eq!(PolyMatrix::parse(&dense).unwrap(), m);
        let sparse = m.to_sparse_text();
        assert_eq!(sparse, "2 2 sparse\n1 1 1,2\n2 1 0,0,3\n2 2 -1\n");
        assert_eq!(PolyMatrix::parse(&sparse).unwrap(), m);
        let laurent = "1 1 dense\n2:3\n";
        assert_eq!(PolyMatrix::parse(laurent).unwrap(), PolyMatrix::from_coeffs(&[&[&[0, 0, 3]]]));
    }

    #[test]
    fn malformed_text() {
        assert!(PolyMatrix::parse("").is_err());
        assert!(PolyMatrix::parse("1 2 dense\n1\n").is_err());
        assert!(PolyMatrix::parse("1 1 sparse\n2 1 1\n").is_err());
        assert!(PolyMatrix::parse("1 1 dense\n-1:1\n").is_err());
        assert!(PolyMatrix::parse("1 1 banded\n1\n").is_err());
    }

    #[test]
    fn sparse_accumulation() {
        let mut s = SparsePolyMatrix::new(2, 2);
        s.add_entry(0, 1, p(&[1]));
        s.add_entry(0, 1, p(&[-1]));
        s.add_entry(1, 0, p(&[0, 1]));
        assert_eq!(s.nnz(), 1);
        assert_eq!(s.get(1, 0), p(&[0, 1]));
        assert_eq!(s.transpose().get(0, 1), p(&[0, 1]));
    }

    #[test]
    fn bareiss_determinant() {
        let m = PolyMatrix::from_coeffs(&[&[&[0, 1], &[1]], &[&[1], &[0, 1]]]);
        assert_eq!(det_bareiss(&m), p(&[-1, 0, 1]));
        let m = PolyMatrix::from_coeffs(&[&[&[0], &[1]], &[&[1], &[0]]]);
        assert_eq!(det_bareiss(&m), p(&[-1]));
    }

    #[test]
    fn content_of_entries() {
        let m = PolyMatrix::from_coeffs(&[&[&[0, 2], &[0, 0, 4]]]);
        assert_eq!(m.content(), p(&[0, 2]));
        assert_eq!(PolyMatrix::zeros(2, 2).content(), IntPoly::zero());
    }
}
