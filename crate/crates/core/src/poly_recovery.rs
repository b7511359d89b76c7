//! Recovery of rational polynomials from their values at a few coprime
//! integer places, and degree detection for values known only up to
//! unknown positive scalars.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{inv_mod, ln_abs_rational, primes_from, rational_mod};
use crate::poly::RatPoly;
use crate::rational_recovery::{recover_rational, Residue};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RecoveryError {
    #[error("moduli are not pairwise coprime")]
    NotCoprime,
    #[error("lifting exceeded the degree bound {0}")]
    DegreeBoundExceeded(usize),
    #[error("recovered denominator {0} does not divide the bound")]
    DenominatorBoundExceeded(BigInt),
    #[error("rational recovery failed for coefficient {0}")]
    RecoveryFailed(usize),
    #[error("value at place {0} has a denominator not invertible there")]
    BadPlace(BigInt),
    #[error("no recovery after {0} places")]
    PlacesExhausted(usize),
    #[error("sample values are zero or of mixed sign")]
    MixedSigns,
    #[error("no complete component of at least three places gave a recovery")]
    NoComponent,
    #[error("at least {0} samples are needed")]
    TooFewSamples(usize),
}

/// Precomputed Chinese remainder data for a fixed list of moduli.
#[derive(Clone, Debug)]
pub struct CrtBasis {
    moduli: Vec<BigInt>,
    modulus: BigInt,
    idempotents: Vec<BigInt>,
}

impl CrtBasis {
    pub fn new(moduli: &[BigInt]) -> Result<Self, RecoveryError> {
        let modulus: BigInt = moduli.iter().product();
        let mut idempotents = Vec::with_capacity(moduli.len());
        for m in moduli {
            let rest = &modulus / m;
            let inv = inv_mod(&rest, m).ok_or(RecoveryError::NotCoprime)?;
            idempotents.push(rest * inv);
        }
        Ok(CrtBasis { moduli: moduli.to_vec(), modulus, idempotents })
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    /// Symmetric representative congruent to each residue.
    pub fn lift(&self, residues: &[BigInt]) -> Residue {
        assert_eq!(residues.len(), self.moduli.len());
        let mut acc = BigInt::zero();
        for (r, e) in residues.iter().zip(&self.idempotents) {
            if !r.is_zero() {
                acc += r * e;
            }
        }
        Residue::new(acc, self.modulus.clone())
    }
}

/// Chinese remainder lifting of `(a_j, b_j)` pairs.
pub fn crt_lift(residues: &[(BigInt, BigInt)]) -> Result<Residue, RecoveryError> {
    let moduli: Vec<BigInt> = residues.iter().map(|(_, b)| b.clone()).collect();
    let values: Vec<BigInt> = residues.iter().map(|(a, _)| a.clone()).collect();
    Ok(CrtBasis::new(&moduli)?.lift(&values))
}

/// A value `f(b)`, or a rescaled value `a f(b)`, at a place `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalSample {
    pub place: BigInt,
    pub value: BigRational,
}

impl EvalSample {
    pub fn new(place: impl Into<BigInt>, value: BigRational) -> Self {
        EvalSample { place: place.into(), value }
    }

    pub fn integer(place: impl Into<BigInt>, value: BigInt) -> Self {
        Self::new(place, BigRational::from_integer(value))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryPolicy {
    pub degree_bound: usize,
    /// Recovered denominators must divide this; `None` accepts any denominator.
    pub denominator_bound: Option<BigInt>,
    /// First place of the prime schedule.
    pub place_start: u64,
    pub max_places: usize,
}

impl Default for RecoveryPolicy {
    fn default() -> Self {
        RecoveryPolicy {
            degree_bound: 200,
            denominator_bound: Some(BigInt::from(20)),
            place_start: 2,
            max_places: 500,
        }
    }
}

impl RecoveryPolicy {
    pub fn integral(degree_bound: usize) -> Self {
        RecoveryPolicy { degree_bound, denominator_bound: Some(BigInt::one()), ..Self::default() }
    }

    pub fn unrestricted_denominators(degree_bound: usize) -> Self {
        RecoveryPolicy { degree_bound, denominator_bound: None, ..Self::default() }
    }
}

/// Lifts the polynomial through the given samples, constant term first.
pub fn lift_samples(
    samples: &[EvalSample],
    degree_bound: usize,
    denominator_bound: Option<&BigInt>,
) -> Result<RatPoly, RecoveryError> {
    let places: Vec<BigInt> = samples.iter().map(|s| s.place.clone()).collect();
    let basis = CrtBasis::new(&places)?;
    let mut values: Vec<BigRational> = samples.iter().map(|s| s.value.clone()).collect();
    let mut coeffs: Vec<BigRational> = Vec::new();
    loop {
        if values.iter().all(Zero::is_zero) {
            return Ok(RatPoly::new(coeffs));
        }
        if coeffs.len() > degree_bound {
            return Err(RecoveryError::DegreeBoundExceeded(degree_bound));
        }
        let residues = values
            .iter()
            .zip(&places)
            .map(|(v, b)| rational_mod(v, b).ok_or_else(|| RecoveryError::BadPlace(b.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let z = basis.lift(&residues);
        let (y, x) = recover_rational(&z).ok_or(RecoveryError::RecoveryFailed(coeffs.len()))?;
        if let Some(bound) = denominator_bound {
            if !(bound % &x).is_zero() {
                return Err(RecoveryError::DenominatorBoundExceeded(x));
            }
        }
        let c = BigRational::new(y, x);
        for (v, b) in values.iter_mut().zip(&places) {
            *v = (&*v - &c) / BigRational::from_integer(b.clone());
        }
        coeffs.push(c);
    }
}

/// Recovers a polynomial from an evaluation oracle, adding prime places
/// `>= policy.place_start` one at a time. A candidate is accepted once it
/// also matches the oracle at the next place of the schedule.
pub fn recover_poly<F>(mut evaluator: F, policy: &RecoveryPolicy) -> Result<RatPoly, RecoveryError>
where
    F: FnMut(&BigInt) -> BigRational,
{
    let mut places = primes_from(policy.place_start).map(BigInt::from);
    let mut samples: Vec<EvalSample> = Vec::new();
    while samples.len() < policy.max_places {
        let b = places.next().unwrap();
        let value = evaluator(&b);
        samples.push(EvalSample { place: b, value });
        let Ok(candidate) = lift_samples(&samples, policy.degree_bound, policy.denominator_bound.as_ref()) else {
            continue;
        };
        let probe = places.next().unwrap();
        let value = evaluator(&probe);
        if candidate.eval_int(&probe) == value {
            return Ok(candidate);
        }
        samples.push(EvalSample { place: probe, value });
    }
    Err(RecoveryError::PlacesExhausted(samples.len()))
}

/// Rounded log-slope `d_ij` between two rescaled samples.
fn log_slope(si: &EvalSample, sj: &EvalSample) -> i64 {
    let (si, sj) = if si.place < sj.place { (si, sj) } else { (sj, si) };
    let lb = ln_abs_rational(&BigRational::from_integer(sj.place.clone()))
        - ln_abs_rational(&BigRational::from_integer(si.place.clone()));
    let x = (ln_abs_rational(&sj.value) - ln_abs_rational(&si.value)) / lb;
    let t = x.floor();
    if ((x - t) - 0.5).abs() >= 1e-6 {
        return (x + 0.5).floor() as i64;
    }
    // borderline: decide x < t + 1/2 exactly via (Vj/Vi)^2 < (bj/bi)^(2t+1)
    let t = t as i64;
    let r = (&sj.value / &si.value).abs();
    let s = BigRational::new(sj.place.clone(), si.place.clone());
    let e = 2 * t + 1;
    let lhs = &r * &r;
    let ord = if e >= 0 {
        lhs.cmp(&s.pow(e as i32))
    } else {
        (lhs * s.pow((-e) as i32)).cmp(&BigRational::one())
    };
    if ord == Ordering::Less {
        t
    } else {
        t + 1
    }
}

/// Connected component of one graph `Gamma_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Sample indices, ascending.
    pub members: Vec<usize>,
    pub complete: bool,
}

/// The graphs `Gamma_d` on the samples: `i ~ j` iff `d_ij = d`.
#[derive(Clone, Debug)]
pub struct DegreeGraphs {
    pub places: Vec<BigInt>,
    /// `d_ij` for `i < j`.
    pub slopes: BTreeMap<(usize, usize), i64>,
    /// Components with at least two vertices, per `d`.
    pub components: BTreeMap<i64, Vec<Component>>,
}

impl DegreeGraphs {
    /// Complete components of size at least three, largest first, ties broken
    /// by the smaller place list.
    pub fn candidates(&self) -> Vec<(i64, Vec<usize>)> {
        let mut out: Vec<(i64, Vec<usize>)> = self
            .components
            .iter()
            .flat_map(|(&d, cs)| cs.iter().filter(|c| c.complete && c.members.len() >= 3).map(move |c| (d, c.members.clone())))
            .collect();
        out.sort_by(|a, b| {
            b.1.len().cmp(&a.1.len()).then_with(|| {
                let pa: Vec<&BigInt> = a.1.iter().map(|&i| &self.places[i]).collect();
                let pb: Vec<&BigInt> = b.1.iter().map(|&i| &self.places[i]).collect();
                pa.cmp(&pb)
            })
        });
        out
    }

    /// Places of a component.
    pub fn places_of(&self, members: &[usize]) -> Vec<BigInt> {
        members.iter().map(|&i| self.places[i].clone()).collect()
    }
}

/// Builds all graphs `Gamma_d` for samples with nonzero values of one sign.
pub fn degree_graphs(samples: &[EvalSample]) -> Result<DegreeGraphs, RecoveryError> {
    if samples.len() < 2 {
        return Err(RecoveryError::TooFewSamples(2));
    }
    let sign = samples[0].value.signum();
    if sign.is_zero() || samples.iter().any(|s| s.value.signum() != sign) {
        return Err(RecoveryError::MixedSigns);
    }
    let n = samples.len();
    let mut slopes = BTreeMap::new();
    let mut by_degree: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = log_slope(&samples[i], &samples[j]);
            slopes.insert((i, j), d);
            by_degree.entry(d).or_default().push((i, j));
        }
    }
    let mut components = BTreeMap::new();
    for (d, edges) in by_degree {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(i, j) in &edges {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let comps: Vec<Component> = groups
            .into_values()
            .filter(|m| m.len() >= 2)
            .map(|members| {
                let k = members.len();
                let inside = edges.iter().filter(|(i, _)| members.binary_search(i).is_ok()).count();
                Component { complete: inside == k * (k - 1) / 2, members }
            })
            .collect();
        components.insert(d, comps);
    }
    Ok(DegreeGraphs { places: samples.iter().map(|s| s.place.clone()).collect(), slopes, components })
}

/// Outcome of degree detection: the degree, the places used and the
/// recovered polynomial `a f` for the common scalar `a` of those places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeDetection {
    pub degree: usize,
    pub places: Vec<BigInt>,
    pub members: Vec<usize>,
    pub poly: RatPoly,
}

/// Detects the degree of `f` from rescaled samples `a_j f(b_j)` and recovers
/// `a f` on a complete component of some `Gamma_d`.
pub fn detect_degree(samples: &[EvalSample], policy: &RecoveryPolicy) -> Result<DegreeDetection, RecoveryError> {
    let graphs = degree_graphs(samples)?;
    for (d, members) in graphs.candidates() {
        if d < 0 || d as usize > policy.degree_bound {
            continue;
        }
        let sub: Vec<EvalSample> = members.iter().map(|&i| samples[i].clone()).collect();
        if let Ok(poly) = lift_samples(&sub, d as usize, policy.denominator_bound.as_ref()) {
            if poly.degree() == Some(d as usize) {
                return Ok(DegreeDetection { degree: d as usize, places: graphs.places_of(&members), members, poly });
            }
        }
    }
    Err(RecoveryError::NoComponent)
}

/// Runs [`detect_degree`] on growing prefixes of the samples and returns the
/// first prefix length that succeeds.
pub fn detect_degree_incremental(
    samples: &[EvalSample],
    policy: &RecoveryPolicy,
) -> Result<(usize, DegreeDetection), RecoveryError> {
    for k in 3..=samples.len() {
        if let Ok(det) = detect_degree(&samples[..k], policy) {
            return Ok((k, det));
        }
    }
    Err(RecoveryError::NoComponent)
}

/// Values of a known polynomial at places, as samples.
pub fn sample_poly(f: &RatPoly, places: &[BigInt]) -> Vec<EvalSample> {
    places.iter().map(|b| EvalSample { place: b.clone(), value: f.eval_int(b) }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;
    use num_integer::Integer;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn crt_examples() {
        let r = crt_lift(&[(bi(2), bi(3)), (bi(3), bi(5))]).unwrap();
        assert_eq!(r.modulus(), &bi(15));
        assert_eq!(r.value().mod_floor(&bi(15)), bi(8));
        let r = crt_lift(&[(bi(0), bi(7))]).unwrap();
        assert_eq!((r.value().clone(), r.modulus().clone()), (bi(0), bi(7)));
        let r = crt_lift(&[(bi(1), bi(4)), (bi(1), bi(9)), (bi(1), bi(25))]).unwrap();
        assert_eq!((r.value().clone(), r.modulus().clone()), (bi(1), bi(900)));
        assert_eq!(crt_lift(&[(bi(1), bi(4)), (bi(1), bi(6))]).unwrap_err(), RecoveryError::NotCoprime);
    }

    #[test]
    fn constant_polynomial() {
        let f = recover_poly(|_| BigRational::from_integer(bi(5)), &RecoveryPolicy::default()).unwrap();
        assert_eq!(f, IntPoly::from_i64(&[5]).to_rat());
    }

    #[test]
    fn half_x_at_three_and_five() {
        let f = RatPoly::new(vec![BigRational::zero(), BigRational::new(bi(1), bi(2))]);
        let s = sample_poly(&f, &[bi(3), bi(5)]);
        assert_eq!(lift_samples(&s, 10, Some(&bi(20))).unwrap(), f);
        assert_eq!(lift_samples(&s, 10, Some(&bi(3))), Err(RecoveryError::DenominatorBoundExceeded(bi(2))));
    }

    #[test]
    fn degree_bound_stops_lifting() {
        let f = IntPoly::from_i64(&[1, 2, 3, 4]).to_rat();
        let s = sample_poly(&f, &[bi(101), bi(103)]);
        assert_eq!(lift_samples(&s, 2, Some(&bi(1))), Err(RecoveryError::DegreeBoundExceeded(2)));
        assert_eq!(lift_samples(&s, 3, Some(&bi(1))).unwrap(), f);
    }

    #[test]
    fn equal_scalars_give_exact_degree() {
        let f = IntPoly::from_i64(&[0, 0, 1]).to_rat();
        let s = sample_poly(&f, &[bi(10), bi(11), bi(12)]);
        let g = degree_graphs(&s).unwrap();
        assert!(g.slopes.values().all(|&d| d == 2));
        assert_eq!(g.components[&2], vec![Component { members: vec![0, 1, 2], complete: true }]);
        // 10 and 12 share a factor, so recovery itself needs other places
        let s = sample_poly(&f, &[bi(11), bi(13), bi(17)]);
        let det = detect_degree(&s, &RecoveryPolicy::default()).unwrap();
        assert_eq!((det.degree, det.poly), (2, f));
    }

    #[test]
    fn mixed_signs_rejected() {
        let s = vec![
            EvalSample::integer(3, bi(1)),
            EvalSample::integer(5, bi(-1)),
        ];
        assert_eq!(degree_graphs(&s).unwrap_err(), RecoveryError::MixedSigns);
    }

    #[test]
    fn borderline_slope_is_exact() {
        // (V2/V1)^2 = (b2/b1)^5 exactly: ratio 2.5 sits on the boundary and rounds up
        let s1 = EvalSample::integer(4, bi(1));
        let s2 = EvalSample::integer(16, bi(32));
        assert_eq!(log_slope(&s1, &s2), 3);
        let s2 = EvalSample::new(16, BigRational::new(bi(3199), bi(100)));
        assert_eq!(log_slope(&s1, &s2), 2);
    }
}
