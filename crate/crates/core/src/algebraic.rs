//! Exact arithmetic on quadratic numbers `(a + b√Δ)/2` and the number theory
//! behind state-transfer certification: square-free parts, recognition of
//! numeric eigenvalues, and the gcd/parity classification of an eigenvalue
//! support.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest trial divisor used when factoring.
pub const DEFAULT_TRIAL_DIVISION_LIMIT: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("square-free part of 0 is undefined")]
    Zero,
    #[error("{n} has no factor below the trial-division limit {limit} and could not be certified")]
    FactorizationLimit { n: u64, limit: u64 },
    #[error("{0} is not a positive square-free integer")]
    NotSquareFree(u64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("{x} is ambiguous: {} quadratic candidates lie within tolerance", candidates.len())]
    Ambiguous { x: f64, candidates: Vec<QuadExt> },
    #[error("support needs at least two distinct eigenvalues, got {0}")]
    SupportTooSmall(usize),
    #[error("eigenvalue {0} appears more than once in the support")]
    DuplicateEigenvalue(QuadExt),
    #[error("not a valid periodic support: radicands {0} and {1} differ")]
    MixedDelta(u64, u64),
    #[error("not a valid periodic support: {0} and {1} have different rational parts")]
    MixedTrace(QuadExt, QuadExt),
    #[error("not a valid periodic support: gap {0} - {1} is not an integer multiple of the radical")]
    NonIntegralGap(QuadExt, QuadExt),
}

/// Integer square root when `n` is a perfect square.
pub fn perfect_sqrt(n: u64) -> Option<u64> {
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

pub fn is_square_free(n: u64) -> bool {
    matches!(square_free_part(n), Ok((1, _)))
}

/// Writes `n = s² c` with `c` square-free, by trial division up to
/// [`DEFAULT_TRIAL_DIVISION_LIMIT`].
pub fn square_free_part(n: u64) -> Result<(u64, u64), AlgebraError> {
    square_free_part_with_limit(n, DEFAULT_TRIAL_DIVISION_LIMIT)
}

pub fn square_free_part_with_limit(n: u64, limit: u64) -> Result<(u64, u64), AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::Zero);
    }
    let (mut rest, mut s, mut c) = (n, 1u64, 1u64);
    let mut p = 2u64;
    while (p as u128) * (p as u128) <= rest as u128 {
        if p > limit {
            return Err(AlgebraError::FactorizationLimit { n, limit });
        }
        let mut exp = 0;
        while rest % p == 0 {
            rest /= p;
            exp += 1;
        }
        s *= p.pow(exp / 2);
        if exp % 2 == 1 {
            c *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // whatever remains is 1 or a prime
    Ok((s, c * rest))
}

/// The real number `(a + b√Δ)/2` with `Δ` square-free.
///
/// Canonical form: `Δ = 1` exactly when `b = 0`, so rationals are stored as
/// `(a, 0, 1)` and equality is componentwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawQuadExt")]
pub struct QuadExt {
    a: i64,
    b: i64,
    delta: u64,
}

#[derive(Deserialize)]
struct RawQuadExt {
    a: i64,
    b: i64,
    delta: u64,
}

impl TryFrom<RawQuadExt> for QuadExt {
    type Error = AlgebraError;

    fn try_from(raw: RawQuadExt) -> Result<Self, Self::Error> {
        QuadExt::new(raw.a, raw.b, raw.delta)
    }
}

impl QuadExt {
    pub fn new(a: i64, b: i64, delta: u64) -> Result<Self, AlgebraError> {
        if delta == 0 || !is_square_free(delta) {
            return Err(AlgebraError::NotSquareFree(delta));
        }
        Ok(Self::canonical(a, b, delta))
    }

    fn canonical(a: i64, b: i64, delta: u64) -> Self {
        match (b, delta) {
            (0, _) => Self { a, b: 0, delta: 1 },
            (_, 1) => Self { a: a + b, b: 0, delta: 1 },
            _ => Self { a, b, delta },
        }
    }

    pub fn integer(k: i64) -> Self {
        Self { a: 2 * k, b: 0, delta: 1 }
    }

    /// `(trace ± √radicand) / 2`, with the radicand reduced to its
    /// square-free part.
    pub fn half_sum_with_root(trace: i64, radicand: u64, sign: i64) -> Result<Self, AlgebraError> {
        if radicand == 0 {
            return Ok(Self::canonical(trace, 0, 1));
        }
        let (s, c) = square_free_part(radicand)?;
        Ok(Self::canonical(trace, sign.signum() * s as i64, c))
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn as_integer(&self) -> Option<i64> {
        (self.b == 0 && self.a % 2 == 0).then_some(self.a / 2)
    }

    pub fn to_f64(&self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.delta as f64).sqrt()) / 2.0
    }

    /// Exact difference when both operands live in the same field.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let delta = match (self.delta, other.delta) {
            (1, d) | (d, 1) => d,
            (d, e) if d == e => d,
            _ => return None,
        };
        Some(Self::canonical(self.a - other.a, self.b - other.b, delta))
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        self.checked_sub(&other.neg())
    }

    /// Exact product within a common field, when the result is again of the
    /// form `(a + b√Δ)/2` with integer `a, b`.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let delta = match (self.delta, other.delta) {
            (1, d) | (d, 1) => d,
            (d, e) if d == e => d,
            _ => return None,
        };
        let (a, b, c, d) = (self.a as i128, self.b as i128, other.a as i128, other.b as i128);
        let rational = a * c + b * d * delta as i128;
        let radical = a * d + b * c;
        if rational % 2 != 0 || radical % 2 != 0 {
            return None;
        }
        Some(Self::canonical(
            i64::try_from(rational / 2).ok()?,
            i64::try_from(radical / 2).ok()?,
            delta,
        ))
    }

    pub fn plus_integer(&self, k: i64) -> Self {
        Self::canonical(self.a + 2 * k, self.b, self.delta)
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a, b: -self.b, delta: self.delta }
    }

    /// Exact comparison within a common field, floating comparison otherwise
    /// (values in different quadratic fields are never equal).
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match self.checked_sub(other) {
            Some(d) => sign_of(d.a, d.b, d.delta),
            None => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

/// Sign of `x + y√d` for non-square `d` (or `y = 0`).
fn sign_of(x: i64, y: i64, d: u64) -> Ordering {
    let (x, y) = (x as i128, y as i128);
    match (x.cmp(&0), y.cmp(&0)) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (sx, sy) if sx == sy => sx,
        (sx, _) => {
            // opposite signs: compare magnitudes x² vs y² d
            match (x * x).cmp(&(y * y * d as i128)) {
                Ordering::Greater => sx,
                Ordering::Less => sx.reverse(),
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Self { a, b, delta } = *self;
        if b == 0 {
            return if a % 2 == 0 { write!(f, "{}", a / 2) } else { write!(f, "{a}/2") };
        }
        let radical = |coef: i64| match coef {
            1 => format!("√{delta}"),
            -1 => format!("-√{delta}"),
            c => format!("{c}√{delta}"),
        };
        let joined = |rational: i64, coef: i64| match (rational, coef) {
            (0, c) => radical(c),
            (r, c) if c < 0 => format!("{r}{}", radical(c)),
            (r, c) => format!("{r}+{}", radical(c)),
        };
        if a % 2 == 0 && b % 2 == 0 {
            write!(f, "{}", joined(a / 2, b / 2))
        } else {
            write!(f, "({})/2", joined(a, b))
        }
    }
}

/// An eigenvalue that is either known exactly or only numerically.
/// Serializes as `{"a","b","delta"}` or `{"approx": x}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Eigenvalue {
    Exact(QuadExt),
    Approx { approx: f64 },
}

impl Eigenvalue {
    pub fn approx(x: f64) -> Self {
        Eigenvalue::Approx { approx: x }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Eigenvalue::Exact(q) => q.to_f64(),
            Eigenvalue::Approx { approx } => *approx,
        }
    }

    pub fn exact(&self) -> Option<QuadExt> {
        match self {
            Eigenvalue::Exact(q) => Some(*q),
            Eigenvalue::Approx { .. } => None,
        }
    }
}

impl From<QuadExt> for Eigenvalue {
    fn from(q: QuadExt) -> Self {
        Eigenvalue::Exact(q)
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eigenvalue::Exact(q) => q.fmt(f),
            Eigenvalue::Approx { approx } => write!(f, "{approx}"),
        }
    }
}

/// Search bounds for [`recognize_quadext`].
///
/// The default coefficient bound is kept small: at a tolerance of `1e-9`
/// the number of `(a, b, Δ)` triples grows fast enough that almost every
/// real number gets several spurious matches once `|a|, |b|` reach `10^5`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecognizeOptions {
    pub tolerance: f64,
    pub delta_bound: u64,
    pub coeff_bound: i64,
}

impl Default for RecognizeOptions {
    fn default() -> Self {
        Self { tolerance: 1e-9, delta_bound: 10_000, coeff_bound: 1_000 }
    }
}

/// Finds the unique `(a + b√Δ)/2` within `tolerance` of `x` with
/// `Δ <= delta_bound` and `|a|, |b| <= coeff_bound`.
///
/// Integers are tried first. Otherwise every trace `a` in range is tried:
/// `(2x - a)²` must then be close to an integer `b²Δ`. Two or more distinct
/// candidates yield [`AlgebraError::Ambiguous`].
pub fn recognize_quadext(x: f64, opts: RecognizeOptions) -> Result<Option<QuadExt>, AlgebraError> {
    let RecognizeOptions { tolerance, delta_bound, coeff_bound } = opts;
    if !(tolerance > 0.0) {
        return Err(AlgebraError::InvalidTolerance(tolerance));
    }
    if !x.is_finite() {
        return Ok(None);
    }
    let k = x.round();
    if (x - k).abs() < tolerance && (2.0 * k).abs() <= coeff_bound as f64 {
        return Ok(Some(QuadExt::integer(k as i64)));
    }

    let small_primes = primes_up_to(delta_bound);
    let mut found: Vec<QuadExt> = Vec::new();
    for a in -coeff_bound..=coeff_bound {
        let y = 2.0 * x - a as f64;
        let d_f = y * y;
        let d = d_f.round();
        if d < 1.0 || (d_f - d).abs() > 4.0 * y.abs() * tolerance + 1e-12 * d_f {
            continue;
        }
        let Some((s, c)) = split_radicand(d as u64, &small_primes, delta_bound) else {
            continue;
        };
        if s > coeff_bound as u64 {
            continue;
        }
        let q = QuadExt::canonical(a, y.signum() as i64 * s as i64, c);
        if (q.to_f64() - x).abs() < tolerance && !found.contains(&q) {
            found.push(q);
        }
    }
    match found.len() {
        0 => Ok(None),
        1 => Ok(found.pop()),
        _ => Err(AlgebraError::Ambiguous { x, candidates: found }),
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if sieve[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                sieve[m] = false;
                m += p;
            }
        }
    }
    out
}

/// `d = s² c` with square-free `c <= delta_bound`, if such a split exists.
fn split_radicand(d: u64, primes: &[u64], delta_bound: u64) -> Option<(u64, u64)> {
    let (mut rest, mut s, mut c) = (d, 1u64, 1u64);
    for &p in primes {
        if p * p > rest {
            // rest is 1 or a prime
            if rest > 1 {
                c *= rest;
            }
            return (c <= delta_bound).then_some((s, c));
        }
        let mut exp = 0;
        while rest % p == 0 {
            rest /= p;
            exp += 1;
        }
        s *= p.pow(exp / 2);
        if exp % 2 == 1 {
            c *= p;
            if c > delta_bound {
                return None;
            }
        }
    }
    // remaining factors exceed every allowed prime, so they must pair up
    let r = perfect_sqrt(rest)?;
    Some((s * r, c))
}

/// The gcd/parity data attached to an eigenvalue support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportClassification {
    /// Support in strictly descending order.
    pub support: Vec<QuadExt>,
    pub delta: u64,
    pub g: u64,
    /// `(θ0 - θr) / (g√Δ)` for each support element, in support order.
    pub reduced_gaps: Vec<i64>,
    pub lambda_plus: Vec<QuadExt>,
    pub lambda_minus: Vec<QuadExt>,
}

impl SupportClassification {
    /// `true` when `θ` is classified into the even (`+`) class.
    pub fn expects_plus(&self, index: usize) -> bool {
        self.reduced_gaps[index] % 2 == 0
    }
}

/// Sorts a support descending and checks it is a set.
pub fn sort_support(support: &[QuadExt]) -> Result<Vec<QuadExt>, AlgebraError> {
    let mut sorted = support.to_vec();
    sorted.sort_by(|x, y| y.cmp_value(x));
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(AlgebraError::DuplicateEigenvalue(pair[0]));
        }
    }
    Ok(sorted)
}

/// Checks that every element shares one square-free `Δ` and one rational
/// part `a`, and returns them. All-rational supports give `Δ = 1` and no
/// constraint on `a`.
pub fn common_field(support: &[QuadExt]) -> Result<(u64, Option<i64>), AlgebraError> {
    let irrational: Vec<&QuadExt> = support.iter().filter(|q| !q.is_rational()).collect();
    let Some(first) = irrational.first() else {
        return Ok((1, None));
    };
    for q in &irrational {
        if q.delta != first.delta {
            return Err(AlgebraError::MixedDelta(first.delta, q.delta));
        }
    }
    for q in support {
        if q.a != first.a {
            return Err(AlgebraError::MixedTrace(**first, *q));
        }
    }
    Ok((first.delta, Some(first.a)))
}

/// Computes `Δ`, `g = gcd((θ0 - θr)/√Δ)` and the parity split of a support.
pub fn classify_support(support: &[QuadExt]) -> Result<SupportClassification, AlgebraError> {
    if support.len() < 2 {
        return Err(AlgebraError::SupportTooSmall(support.len()));
    }
    let support = sort_support(support)?;
    let (delta, _) = common_field(&support)?;
    let top = support[0];

    // gaps measured in units of √Δ
    let mut gaps = Vec::with_capacity(support.len());
    for q in &support {
        let twice = if delta == 1 { top.a - q.a } else { top.b - q.b };
        if twice % 2 != 0 {
            return Err(AlgebraError::NonIntegralGap(top, *q));
        }
        gaps.push(twice / 2);
    }
    let g = gaps.iter().fold(0i64, |acc, &x| acc.gcd(&x)) as u64;
    let reduced_gaps: Vec<i64> = gaps.iter().map(|&x| x / g as i64).collect();
    let (mut lambda_plus, mut lambda_minus) = (Vec::new(), Vec::new());
    for (q, k) in support.iter().zip(&reduced_gaps) {
        if k % 2 == 0 {
            lambda_plus.push(*q);
        } else {
            lambda_minus.push(*q);
        }
    }
    Ok(SupportClassification { support, delta, g, reduced_gaps, lambda_plus, lambda_minus })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(k: i64) -> QuadExt {
        QuadExt::integer(k)
    }

    #[test]
    fn square_free_examples() {
        assert_eq!(square_free_part(12), Ok((2, 3)));
        assert_eq!(square_free_part(41), Ok((1, 41)));
        assert_eq!(square_free_part(1), Ok((1, 1)));
        assert_eq!(square_free_part(0), Err(AlgebraError::Zero));
        assert!(matches!(
            square_free_part_with_limit(1_000_003 * 1_000_033, 1000),
            Err(AlgebraError::FactorizationLimit { .. })
        ));
    }

    #[test]
    fn square_free_841_found_by_scanning_odd_m() {
        // first odd m > 2 with 8m² - 12m + 5 a perfect square
        let m = (3u64..)
            .step_by(2)
            .find(|m| perfect_sqrt(8 * m * m - 12 * m + 5).is_some())
            .unwrap();
        assert_eq!(m, 11);
        assert_eq!(8 * m * m - 12 * m + 5, 841);
        assert_eq!(square_free_part(841), Ok((29, 1)));
    }

    #[test]
    fn square_free_exhaustive_small() {
        // independent check: c has no square divisor, s²c reproduces n
        for n in 1..20_000u64 {
            let (s, c) = square_free_part(n).unwrap();
            assert_eq!(s * s * c, n);
            assert!((2..).take_while(|p| p * p <= c).all(|p| c % (p * p) != 0));
        }
    }

    #[test]
    fn canonical_form() {
        assert_eq!(QuadExt::new(4, 0, 7).unwrap(), int(2));
        assert_eq!(QuadExt::new(2, 2, 1).unwrap(), int(2));
        assert!(QuadExt::new(1, 1, 8).is_err());
        assert!(QuadExt::new(1, 1, 0).is_err());
        let q = QuadExt::half_sum_with_root(4, 8, -1).unwrap();
        assert_eq!((q.a(), q.b(), q.delta()), (4, -2, 2));
        assert_eq!(q.to_string(), "2-√2");
        assert_eq!(QuadExt::new(3, 1, 5).unwrap().to_string(), "(3+√5)/2");
        assert_eq!(QuadExt::new(0, 4, 85).unwrap().to_string(), "2√85");
    }

    #[test]
    fn json_forms() {
        let q = QuadExt::new(4, 2, 2).unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"{"a":4,"b":2,"delta":2}"#);
        let back: Eigenvalue = serde_json::from_str(r#"{"a":4,"b":2,"delta":2}"#).unwrap();
        assert_eq!(back, Eigenvalue::Exact(q));
        let approx: Eigenvalue = serde_json::from_str(r#"{"approx":1.5}"#).unwrap();
        assert_eq!(approx, Eigenvalue::approx(1.5));
        assert!(serde_json::from_str::<QuadExt>(r#"{"a":1,"b":1,"delta":4}"#).is_err());
    }

    #[test]
    fn exact_ordering() {
        let plus = QuadExt::new(4, 2, 2).unwrap();
        let minus = QuadExt::new(4, -2, 2).unwrap();
        assert!(plus > int(3) && plus < int(4));
        assert!(minus > int(0) && minus < int(1));
        // 7 - 5√2 ≈ -0.07 < 0
        assert_eq!(sign_of(7, -5, 2), Ordering::Less);
        assert_eq!(sign_of(-7, 5, 2), Ordering::Greater);
    }

    #[test]
    fn recognizes_integers_and_surds() {
        let opts = RecognizeOptions::default();
        assert_eq!(recognize_quadext(2.0, opts), Ok(Some(int(2))));
        assert_eq!(
            recognize_quadext(2.0 + 2f64.sqrt(), opts),
            Ok(Some(QuadExt::new(4, 2, 2).unwrap()))
        );
        let golden = (3.0 + 5f64.sqrt()) / 2.0;
        assert_eq!(recognize_quadext(golden, opts), Ok(Some(QuadExt::new(3, 1, 5).unwrap())));
        assert!(recognize_quadext(1.0, RecognizeOptions { tolerance: 0.0, ..opts }).is_err());
    }

    #[test]
    fn pi_is_not_recognized_at_tight_tolerance() {
        let tight = RecognizeOptions { tolerance: 1e-12, ..RecognizeOptions::default() };
        assert_eq!(recognize_quadext(std::f64::consts::PI, tight), Ok(None));
    }

    #[test]
    fn loose_tolerance_reports_ambiguity() {
        let loose = RecognizeOptions { tolerance: 1e-3, delta_bound: 50, coeff_bound: 50 };
        assert!(matches!(
            recognize_quadext(std::f64::consts::PI, loose),
            Err(AlgebraError::Ambiguous { .. })
        ));
    }

    #[test]
    fn classify_cocktail_party_support() {
        let c = classify_support(&[int(4), int(12), int(6)]).unwrap();
        assert_eq!(c.support, vec![int(12), int(6), int(4)]);
        assert_eq!((c.delta, c.g), (1, 2));
        assert_eq!(c.lambda_plus, vec![int(12), int(4)]);
        assert_eq!(c.lambda_minus, vec![int(6)]);
        assert_eq!(c.reduced_gaps, vec![0, 3, 4]);
    }

    #[test]
    fn classify_golay_coset_spectrum() {
        let support: Vec<_> = [44, 30, 28, 22, 20, 14, 12].into_iter().map(int).collect();
        let c = classify_support(&support).unwrap();
        assert_eq!((c.delta, c.g), (1, 2));
    }

    #[test]
    fn classify_quadratic_pair() {
        let plus = QuadExt::new(4, 2, 2).unwrap();
        let minus = QuadExt::new(4, -2, 2).unwrap();
        let c = classify_support(&[minus, plus]).unwrap();
        assert_eq!((c.delta, c.g), (2, 2));
        assert_eq!(c.lambda_plus, vec![plus]);
        assert_eq!(c.lambda_minus, vec![minus]);
    }

    #[test]
    fn classify_rejects_mixed_supports() {
        let p4 = [
            QuadExt::new(4, 2, 2).unwrap(),
            int(2),
            QuadExt::new(4, -2, 2).unwrap(),
            int(0),
        ];
        assert!(matches!(classify_support(&p4), Err(AlgebraError::MixedTrace(..))));
        let mixed = [QuadExt::new(0, 2, 2).unwrap(), QuadExt::new(0, 2, 3).unwrap()];
        assert_eq!(classify_support(&mixed), Err(AlgebraError::MixedDelta(3, 2)));
        assert_eq!(classify_support(&[int(1)]), Err(AlgebraError::SupportTooSmall(1)));
        assert_eq!(
            classify_support(&[int(1), int(1)]),
            Err(AlgebraError::DuplicateEigenvalue(int(1)))
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn square_free_reconstructs(n in 1u64..10_000_000) {
                let (s, c) = square_free_part(n).unwrap();
                prop_assert_eq!(s * s * c, n);
                prop_assert!(is_square_free(c));
            }

            #[test]
            fn recognition_inverts_evaluation(
                a in -40i64..40,
                b in -12i64..12,
                delta in prop::sample::select(vec![1u64, 2, 3, 5, 6, 7, 10, 11, 13, 85]),
            ) {
                let q = QuadExt::new(a, b, delta).unwrap();
                let opts = RecognizeOptions { tolerance: 1e-9, delta_bound: 100, coeff_bound: 200 };
                prop_assert_eq!(recognize_quadext(q.to_f64(), opts), Ok(Some(q)));
            }

            #[test]
            fn classification_invariants(values in proptest::collection::btree_set(-30i64..30, 2..7)) {
                let support: Vec<_> = values.iter().map(|&k| int(k)).collect();
                let c = classify_support(&support).unwrap();
                prop_assert!(c.lambda_plus.contains(&c.support[0]));
                prop_assert_eq!(c.lambda_plus.len() + c.lambda_minus.len(), c.support.len());
                let reduced_gcd = c.reduced_gaps.iter().fold(0i64, |acc, &x| acc.gcd(&x));
                prop_assert_eq!(reduced_gcd, 1);
            }
        }
    }
}
