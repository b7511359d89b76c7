//! Small-degree factorization over `Z`: squarefree decomposition plus
//! recombination of numerically computed complex roots, every candidate
//! factor confirmed by exact division.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::poly::{gcd_subresultant, IntPoly, Palindromy};

/// Largest degree handled by [`factor`].
pub const MAX_FACTOR_DEGREE: usize = 12;

/// Squarefree decomposition `f = c * prod g_k^k` (Yun); returns the pairs
/// `(g_k, k)` with `g_k` nonconstant and primitive.
pub fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, usize)> {
    let f = f.primitive_positive();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let fp = f.derivative();
    let a0 = gcd_subresultant(&f, &fp).primitive_positive();
    let mut b = f.div_exact(&a0).expect("gcd divides").primitive_positive();
    let mut c = fp.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut k = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = gcd_subresultant(&b, &d).primitive_positive();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), k));
        }
        b = b.div_exact(&a).expect("gcd divides").primitive_positive();
        c = d.div_exact(&a).expect("gcd divides");
        d = &c - &b.derivative();
        k += 1;
    }
    out
}

fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Complex roots by simultaneous Newton iteration (Aberth).
fn complex_roots(f: &IntPoly) -> Vec<Complex64> {
    let n = f.degree().unwrap_or(0);
    let lc = to_f64(f.leading().unwrap());
    let c: Vec<Complex64> = f.coeffs().iter().map(|x| Complex64::new(to_f64(x) / lc, 0.0)).collect();
    let radius = 1.0 + c[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for a in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-14 {
            break;
        }
    }
    z
}

/// `lc * prod (X - r)` rounded to integers, or `None` if it is not close to integral.
fn candidate(roots: &[Complex64], lc: f64) -> Option<IntPoly> {
    let mut c = vec![Complex64::new(lc, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::zero(); c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        c = next;
    }
    let mut out = Vec::with_capacity(c.len());
    for z in c {
        if z.im.abs() > 1e-4 * (1.0 + z.re.abs()) || (z.re - z.re.round()).abs() > 1e-4 * (1.0 + z.re.abs()) {
            return None;
        }
        out.push(BigInt::from(z.re.round() as i64));
    }
    Some(IntPoly::new(out))
}

fn factor_squarefree(f: &IntPoly, out: &mut Vec<IntPoly>) {
    let mut f = f.primitive_positive();
    let mut roots = complex_roots(&f);
    let mut size = 1;
    while size * 2 <= roots.len() {
        let lc = to_f64(f.leading().unwrap());
        let n = roots.len();
        let mut found = None;
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != size {
                continue;
            }
            let pick: Vec<Complex64> = (0..n).filter(|&k| mask >> k & 1 == 1).map(|k| roots[k]).collect();
            let Some(g) = candidate(&pick, lc) else { continue };
            let g = g.primitive_positive();
            if g.degree() != Some(size) {
                continue;
            }
            if let Some(q) = f.div_exact(&g) {
                found = Some((mask, g, q));
                break;
            }
        }
        match found {
            Some((mask, g, q)) => {
                out.push(g);
                f = q.primitive_positive();
                roots = (0..n).filter(|&k| mask >> k & 1 == 0).map(|k| roots[k]).collect();
            }
            None => size += 1,
        }
    }
    if f.degree().unwrap_or(0) > 0 {
        out.push(f);
    }
}

/// Irreducible factors over `Z` with multiplicities, each primitive with
/// positive leading coefficient, for polynomials of degree at most
/// [`MAX_FACTOR_DEGREE`]; `None` for larger degrees.
pub fn factor(f: &IntPoly) -> Option<Vec<(IntPoly, usize)>> {
    if f.degree()? > MAX_FACTOR_DEGREE {
        return None;
    }
    let mut out = Vec::new();
    for (g, k) in squarefree_decomposition(f) {
        let mut parts = Vec::new();
        factor_squarefree(&g, &mut parts);
        out.extend(parts.into_iter().map(|p| (p, k)));
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.coeffs().cmp(b.0.coeffs())));
    Some(out)
}

/// Whether `f` is monic up to sign and `X^k f(1/X) = f` for
/// `k = val f + deg f`.
pub fn is_monic_palindromic(f: &IntPoly) -> bool {
    let Some(lc) = f.leading() else { return false };
    lc.abs() == BigInt::from(1) && matches!(f.palindromic_class(), Ok(Palindromy::Palindromic(_)))
}
