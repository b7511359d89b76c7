//! Dense univariate polynomials over `Z` and `Q`, and Laurent polynomials
//! in `Z[v, v^-1]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("zero polynomial has no {0}")]
    Zero(&'static str),
    #[error("cannot evaluate a negative power of v at 0")]
    PoleAtZero,
    #[error("cannot parse polynomial {0:?}")]
    Parse(String),
    #[error("Laurent polynomial {0} has negative powers")]
    NotPolynomial(String),
}

/// Polynomial over `Z` as ascending coefficient list; zero is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c X^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// The indeterminate `X`.
    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Largest absolute value of a coefficient (0 for the zero polynomial).
    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Horner evaluation at an integer.
    pub fn eval(&self, b: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * b + c;
        }
        acc
    }

    pub fn eval_rational(&self, b: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * b + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Evaluation modulo a machine prime.
    pub fn eval_mod(&self, b: u64, p: u64) -> u64 {
        let mut acc = 0u64;
        for c in self.coeffs.iter().rev() {
            acc = (arith::mul_mod(acc, b % p, p) + arith::mod_u64(c, p)) % p;
        }
        acc
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        arith::gcd_all(&self.coeffs)
    }

    /// `(content, primitive part)` with the leading sign kept in the primitive part.
    pub fn content_and_primitive(&self) -> Result<(BigInt, IntPoly), PolyError> {
        if self.is_zero() {
            return Err(PolyError::Zero("content"));
        }
        let c = self.content();
        Ok((c.clone(), self.div_scalar(&c)))
    }

    /// Primitive part with positive leading coefficient; zero stays zero.
    pub fn primitive_positive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        self.div_scalar(&c)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Exact division by an integer; panics if inexact.
    pub fn div_scalar(&self, c: &BigInt) -> IntPoly {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|x| {
                    let (q, r) = x.div_rem(c);
                    assert!(r.is_zero(), "inexact scalar division");
                    q
                })
                .collect(),
        }
    }

    /// Multiplication by `X^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// Division by `X^k`; panics unless `X^k` divides.
    pub fn unshift(&self, k: usize) -> IntPoly {
        assert!(self.coeffs.iter().take(k).all(Zero::is_zero), "X^{k} does not divide");
        IntPoly { coeffs: self.coeffs.iter().skip(k).cloned().collect() }
    }

    /// Pseudo-remainder `prem(self, g) = lc(g)^(deg self - deg g + 1) self mod g`.
    pub fn pseudo_rem(&self, g: &IntPoly) -> IntPoly {
        let dg = g.degree().expect("pseudo-division by zero");
        let lc = g.leading().unwrap().clone();
        let Some(df) = self.degree() else { return IntPoly::zero() };
        if df < dg {
            return self.clone();
        }
        let mut r = self.coeffs.clone();
        let mut e = df - dg + 1;
        while r.len() > dg {
            let k = r.len() - 1;
            let lr = r[k].clone();
            for x in r.iter_mut() {
                *x *= &lc;
            }
            for (i, gc) in g.coeffs.iter().enumerate() {
                r[k - dg + i] -= &lr * gc;
            }
            e -= 1;
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            if r.len() <= dg {
                break;
            }
        }
        let r = IntPoly::new(r);
        r.scale(&lc.pow(e as u32))
    }

    /// Exact quotient `self / g` if `g` divides `self` in `Z[X]`.
    pub fn div_exact(&self, g: &IntPoly) -> Option<IntPoly> {
        let dg = g.degree().expect("division by zero");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let df = self.degree().unwrap();
        if df < dg {
            return None;
        }
        let lc = g.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); df - dg + 1];
        for k in (0..=df - dg).rev() {
            let (qk, rem) = r[k + dg].div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            if !qk.is_zero() {
                for (i, gc) in g.coeffs.iter().enumerate() {
                    r[k + i] -= &qk * gc;
                }
            }
            q[k] = qk;
        }
        if r.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Coefficients with `X` replaced by `X^-1` and multiplied by `X^k`, where
    /// `k = valuation + degree`.
    fn reflected(&self) -> IntPoly {
        let d = self.degree().unwrap();
        let val = self.valuation().unwrap();
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate().skip(val) {
            coeffs[val + d - i] = c.clone();
        }
        IntPoly::new(coeffs)
    }

    /// Palindromy type of a nonzero polynomial.
    pub fn palindromic_class(&self) -> Result<Palindromy, PolyError> {
        if self.is_zero() {
            return Err(PolyError::Zero("palindromy"));
        }
        let k = self.valuation().unwrap() + self.degree().unwrap();
        let r = self.reflected();
        Ok(if r == *self {
            Palindromy::Palindromic(k)
        } else if r == -self {
            Palindromy::SkewPalindromic(k)
        } else {
            Palindromy::Neither
        })
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Comma-separated ascending coefficient list; the zero polynomial is "0".
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Subresultant gcd in `Z[X]` with positive leading coefficient.
pub fn gcd_subresultant(f: &IntPoly, g: &IntPoly) -> IntPoly {
    let (mut a, mut b) = if f.degree() >= g.degree() { (f.clone(), g.clone()) } else { (g.clone(), f.clone()) };
    if b.is_zero() {
        return a.scale(&a.leading().map_or(BigInt::one(), |l| l.signum()));
    }
    let ca = a.content();
    let cb = b.content();
    let d = ca.gcd(&cb);
    a = a.div_scalar(&ca);
    b = b.div_scalar(&cb);
    let mut g_ = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.degree().unwrap() - b.degree().unwrap();
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            break;
        }
        if r.degree() == Some(0) {
            b = IntPoly::one();
            break;
        }
        a = b;
        b = r.div_scalar(&(&g_ * h.pow(delta as u32)));
        g_ = a.leading().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            let num = g_.pow(delta as u32);
            let den = h.pow((delta - 1) as u32);
            num / den
        };
    }
    b.primitive_positive().scale(&d)
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_text())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for IntPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let l: LaurentPoly = s.parse()?;
        l.to_poly().ok_or_else(|| PolyError::NotPolynomial(s.to_string()))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, o: &IntPoly) -> IntPoly {
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() { (self, o) } else { (o, self) };
        let mut c = long.coeffs.clone();
        for (x, y) in c.iter_mut().zip(&short.coeffs) {
            *x += y;
        }
        IntPoly::new(c)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, o: &IntPoly) -> IntPoly {
        self + &(-o)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        -&self
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        IntPoly::new(c)
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { (&self).$m(&o) }
        }
    )*};
}

forward_owned!(IntPoly, Add add, Sub sub, Mul mul);

/// Palindromy of `f` relative to `k = valuation + degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Palindromy {
    Palindromic(usize),
    SkewPalindromic(usize),
    Neither,
}

/// Polynomial over `Q`, same conventions as [`IntPoly`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, b: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * b + c;
        }
        acc
    }

    pub fn eval_int(&self, b: &BigInt) -> BigRational {
        self.eval(&BigRational::from_integer(b.clone()))
    }

    /// `(content, primitive part)`: the primitive part has coprime integer
    /// coefficients and the same leading sign as `self`.
    pub fn content_and_primitive(&self) -> Result<(BigRational, IntPoly), PolyError> {
        if self.is_zero() {
            return Err(PolyError::Zero("content"));
        }
        let l = arith::lcm_all(self.coeffs.iter().map(|c| c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let g = arith::gcd_all(&ints);
        let prim = IntPoly::new(ints.into_iter().map(|x| x / &g).collect());
        Ok((BigRational::new(g, l), prim))
    }

    /// The polynomial itself if all coefficients are integers.
    pub fn to_int(&self) -> Option<IntPoly> {
        if self.coeffs.iter().all(|c| c.is_integer()) {
            Some(IntPoly::new(self.coeffs.iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "[0]");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Element `v^valuation * poly` of `Z[v, v^-1]`, with `poly(0) != 0` unless zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    valuation: i64,
    poly: IntPoly,
}

impl LaurentPoly {
    pub fn new(valuation: i64, poly: IntPoly) -> Self {
        match poly.valuation() {
            None => LaurentPoly { valuation: 0, poly },
            Some(k) => LaurentPoly { valuation: valuation + k as i64, poly: poly.unshift(k) },
        }
    }

    pub fn from_poly(p: IntPoly) -> Self {
        Self::new(0, p)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `c v^k`.
    pub fn monomial(c: BigInt, k: i64) -> Self {
        Self::new(k, IntPoly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    /// Highest exponent present.
    pub fn top_degree(&self) -> Option<i64> {
        self.poly.degree().map(|d| d as i64 + self.valuation)
    }

    /// The element as a polynomial if it has no negative powers.
    pub fn to_poly(&self) -> Option<IntPoly> {
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        (self.valuation >= 0).then(|| self.poly.shift(self.valuation as usize))
    }

    /// `v^k * self`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { valuation: self.valuation + k, poly: self.poly.clone() }
    }

    /// The involution `v -> v^-1`.
    pub fn star(&self) -> LaurentPoly {
        let Some(d) = self.poly.degree() else { return self.clone() };
        let mut c = self.poly.coeffs().to_vec();
        c.reverse();
        LaurentPoly::new(-(self.valuation + d as i64), IntPoly::new(c))
    }

    pub fn eval(&self, b: &BigRational) -> Result<BigRational, PolyError> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        if b.is_zero() {
            return match self.valuation {
                v if v < 0 => Err(PolyError::PoleAtZero),
                0 => Ok(BigRational::from_integer(self.poly.coeff(0))),
                _ => Ok(BigRational::zero()),
            };
        }
        let p = self.poly.eval_rational(b);
        let e = self.valuation;
        let bp = if e >= 0 { b.pow(e as i32) } else { b.recip().pow((-e) as i32) };
        Ok(p * bp)
    }

    /// Text form: plain coefficient list, or `"δ:list"` for a nonzero offset.
    pub fn to_text(&self) -> String {
        if self.valuation == 0 || self.is_zero() {
            self.poly.to_text()
        } else {
            format!("{}:{}", self.valuation, self.poly.to_text())
        }
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v^{}*[{}]", self.valuation, self.poly.to_text())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for LaurentPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PolyError::Parse(s.to_string());
        let s = s.trim();
        let (val, list) = match s.split_once(':') {
            Some((d, rest)) => (d.trim().parse::<i64>().map_err(|_| bad())?, rest),
            None => (0, s),
        };
        let coeffs = list
            .split(',')
            .map(|t| t.trim().parse::<BigInt>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LaurentPoly::new(val, IntPoly::new(coeffs)))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let v = self.valuation.min(o.valuation);
        let a = self.poly.shift((self.valuation - v) as usize);
        let b = o.poly.shift((o.valuation - v) as usize);
        LaurentPoly::new(v, &a + &b)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly { valuation: self.valuation, poly: -&self.poly }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::new(self.valuation + o.valuation, &self.poly * &o.poly)
    }
}

forward_owned!(LaurentPoly, Add add, Sub sub, Mul mul);
