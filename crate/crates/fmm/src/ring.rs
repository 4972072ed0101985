//! Coefficient arithmetic every other module is generic over.
//!
//! Scheme coefficients are [`LaurentCoeff`]: integer-coefficient Laurent
//! polynomials in the single free parameter `L`. Evaluation instantiates
//! them into a concrete ring: arbitrary-precision rationals, a prime field,
//! or machine integers/floats (the latter two for benchmarking only).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Stored scheme coefficients must keep their exponents in
/// `[-MAX_LAURENT_EXP, MAX_LAURENT_EXP]`. This covers everything in the
/// catalog plus one level of composition; intermediate products inside the
/// Brent verifier are not subject to the cap.
pub const MAX_LAURENT_EXP: i32 = 4;

#[derive(Debug, Error)]
pub enum RingError {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("modulus {0} does not fit below 2^62")]
    ModulusTooLarge(u64),
    #[error("{0} is not invertible in {1}")]
    NonInvertible(String, String),
    #[error("ring {0} is not exact; {1} requires exact arithmetic")]
    InexactRing(String, String),
    #[error("Laurent exponent {0} outside [-{max}, {max}]", max = MAX_LAURENT_EXP)]
    ExponentOutOfRange(i32),
    #[error("parse error: {0}")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// Laurent polynomials in L
// ---------------------------------------------------------------------------

/// An exact coefficient: integer-coefficient Laurent polynomial in `L`.
///
/// Canonical form: no zero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentCoeff {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentCoeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(BigInt::one(), 0)
    }

    /// The single term `coeff * L^exp`.
    pub fn term(coeff: BigInt, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::term(BigInt::from(n), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// True when every exponent lies within the storage bound.
    pub fn within_bounds(&self) -> bool {
        self.terms
            .keys()
            .all(|e| e.abs() <= MAX_LAURENT_EXP)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Self { terms }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<i32, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let entry = terms.entry(e1 + e2).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    /// Multiply by `L^exp`.
    pub fn shift(&self, exp: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + exp, c.clone())).collect(),
        }
    }

    /// Parse a Laurent literal such as `2*L^2 - 1 + 3*L^-1`. Term order is
    /// irrelevant; whitespace is optional.
    pub fn parse(input: &str) -> Result<Self, RingError> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(RingError::Parse("empty Laurent literal".into()));
        }
        let bytes = s.as_bytes();
        let mut out = LaurentCoeff::zero();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = 1i64;
            while pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let mut coeff = if pos > start {
                s[start..pos]
                    .parse::<BigInt>()
                    .map_err(|e| RingError::Parse(format!("bad integer in `{input}`: {e}")))?
            } else {
                BigInt::one()
            };
            if sign < 0 {
                coeff = -coeff;
            }
            let mut exp = 0i32;
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
            }
            if pos < bytes.len() && (bytes[pos] == b'L' || bytes[pos] == b'l') {
                pos += 1;
                exp = 1;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let estart = pos;
                    if pos < bytes.len() && bytes[pos] == b'-' {
                        pos += 1;
                    }
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    exp = s[estart..pos]
                        .parse::<i32>()
                        .map_err(|_| RingError::Parse(format!("bad exponent in `{input}`")))?;
                }
            } else if pos == start {
                return Err(RingError::Parse(format!(
                    "expected digit or L at offset {pos} in `{input}`"
                )));
            }
            out = out.add(&LaurentCoeff::term(coeff, exp));
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentCoeff {
    /// Canonical form: terms by ascending exponent, compact (no spaces).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mag = c.abs();
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "L")?,
                (1, false) => write!(f, "{mag}*L")?,
                (_, true) => write!(f, "L^{e}")?,
                (_, false) => write!(f, "{mag}*L^{e}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Ring specs: the kind of ring plus the value assigned to L
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingKind {
    Rationals,
    PrimeField(u64),
    MachineInt64,
    Float64,
}

/// A validated choice of coefficient ring plus the value assigned to `L`.
#[derive(Clone, Debug)]
pub struct RingSpec {
    pub kind: RingKind,
    pub ell: BigRational,
}

impl RingSpec {
    pub fn new(kind: RingKind, ell: BigRational) -> Result<Self, RingError> {
        if ell.is_zero() {
            return Err(RingError::NonInvertible("L = 0".into(), kind_name(kind)));
        }
        match kind {
            RingKind::Rationals | RingKind::Float64 => {}
            RingKind::PrimeField(p) => {
                if p >= 1 << 62 {
                    return Err(RingError::ModulusTooLarge(p));
                }
                if !is_prime_u64(p) {
                    return Err(RingError::NonPrimeModulus(p));
                }
                // both numerator and denominator of L must be nonzero mod p
                let pb = BigInt::from(p);
                if ell.numer().mod_floor(&pb).is_zero() || ell.denom().mod_floor(&pb).is_zero() {
                    return Err(RingError::NonInvertible(
                        format!("L = {ell}"),
                        kind_name(kind),
                    ));
                }
            }
            RingKind::MachineInt64 => {
                // the only integers with integer inverses
                if !ell.denom().is_one() || ell.numer().abs() != BigInt::one() {
                    return Err(RingError::NonInvertible(
                        format!("L = {ell}"),
                        kind_name(kind),
                    ));
                }
            }
        }
        Ok(Self { kind, ell })
    }

    /// Rationals with the default `L = 1`.
    pub fn rationals() -> Self {
        Self::new(RingKind::Rationals, BigRational::one()).unwrap()
    }

    pub fn prime_field(p: u64) -> Result<Self, RingError> {
        Self::new(RingKind::PrimeField(p), BigRational::one())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.kind, RingKind::Rationals | RingKind::PrimeField(_))
    }

    /// Parse the CLI ring flag: `rat`, `fp:<p>`, `int64` or `f64`.
    pub fn parse_kind(s: &str) -> Result<RingKind, RingError> {
        match s {
            "rat" => Ok(RingKind::Rationals),
            "int64" => Ok(RingKind::MachineInt64),
            "f64" => Ok(RingKind::Float64),
            _ => {
                if let Some(p) = s.strip_prefix("fp:") {
                    let p: u64 = p
                        .parse()
                        .map_err(|_| RingError::Parse(format!("bad modulus in `{s}`")))?;
                    Ok(RingKind::PrimeField(p))
                } else {
                    Err(RingError::Parse(format!(
                        "unknown ring `{s}` (expected rat, fp:<p>, int64 or f64)"
                    )))
                }
            }
        }
    }
}

fn kind_name(kind: RingKind) -> String {
    match kind {
        RingKind::Rationals => "Q".into(),
        RingKind::PrimeField(p) => format!("F_{p}"),
        RingKind::MachineInt64 => "Z (machine i64)".into(),
        RingKind::Float64 => "f64".into(),
    }
}

/// Parse a rational literal `p` or `p/q`, gcd-reduced, denominator positive.
pub fn parse_rational(s: &str) -> Result<BigRational, RingError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| RingError::Parse(format!("bad rational `{s}`")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| RingError::Parse(format!("bad rational `{s}`")))?;
    if d.is_zero() {
        return Err(RingError::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(n, d))
}

// ---------------------------------------------------------------------------
// The Ring trait and its implementations
// ---------------------------------------------------------------------------

/// An arithmetic context. Contexts are immutable after construction and all
/// operations are pure, so they can be shared freely across threads.
pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    fn name(&self) -> String;
    fn is_exact(&self) -> bool;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)] // conversion into the ring, not from it
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// `L^e`; invertibility of `L` is guaranteed by `RingSpec` validation.
    fn ell_pow(&self, e: i32) -> Self::Elem;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, RingError>;
    fn format_elem(&self, x: &Self::Elem) -> String;
}

/// Evaluate a Laurent coefficient at the ring's `L`.
pub fn instantiate<R: Ring>(c: &LaurentCoeff, ring: &R) -> R::Elem {
    let mut acc = ring.zero();
    for (e, coeff) in c.terms() {
        acc = ring.add(&acc, &ring.mul(&ring.from_bigint(coeff), &ring.ell_pow(e)));
    }
    acc
}

/// Dispatch a generic closure over the concrete ring named by a `RingSpec`.
#[macro_export]
macro_rules! with_ring {
    ($spec:expr, $ring:ident => $body:expr) => {{
        let spec: &$crate::ring::RingSpec = $spec;
        match spec.kind {
            $crate::ring::RingKind::Rationals => {
                let $ring = $crate::ring::RationalField::from_spec(spec);
                $body
            }
            $crate::ring::RingKind::PrimeField(_) => {
                let $ring = $crate::ring::PrimeField::from_spec(spec);
                $body
            }
            $crate::ring::RingKind::MachineInt64 => {
                let $ring = $crate::ring::Int64Ring::from_spec(spec);
                $body
            }
            $crate::ring::RingKind::Float64 => {
                let $ring = $crate::ring::F64Ring::from_spec(spec);
                $body
            }
        }
    }};
}

// -- rationals --------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct RationalField {
    ell: BigRational,
}

impl RationalField {
    pub fn new(ell: BigRational) -> Result<Self, RingError> {
        RingSpec::new(RingKind::Rationals, ell).map(|s| Self::from_spec(&s))
    }

    pub fn from_spec(spec: &RingSpec) -> Self {
        debug_assert_eq!(spec.kind, RingKind::Rationals);
        Self {
            ell: spec.ell.clone(),
        }
    }
}

impl Ring for RationalField {
    type Elem = BigRational;

    fn name(&self) -> String {
        "Q".into()
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }
    fn sub(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x - y
    }
    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }
    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn ell_pow(&self, e: i32) -> BigRational {
        if e >= 0 {
            num_traits::pow::pow(self.ell.clone(), e as usize)
        } else {
            num_traits::pow::pow(self.ell.recip(), (-e) as usize)
        }
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational, RingError> {
        parse_rational(s)
    }
    fn format_elem(&self, x: &BigRational) -> String {
        if x.denom().is_one() {
            x.numer().to_string()
        } else {
            format!("{}/{}", x.numer(), x.denom())
        }
    }
}

// -- prime field ------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u64,
    ell: u64,
    ell_inv: u64,
}

impl PrimeField {
    pub fn new(p: u64, ell: BigRational) -> Result<Self, RingError> {
        RingSpec::new(RingKind::PrimeField(p), ell).map(|s| Self::from_spec(&s))
    }

    pub fn from_spec(spec: &RingSpec) -> Self {
        let p = match spec.kind {
            RingKind::PrimeField(p) => p,
            _ => unreachable!("spec kind mismatch"),
        };
        let reduce = |n: &BigInt| n.mod_floor(&BigInt::from(p)).to_u64().unwrap();
        let num = reduce(spec.ell.numer());
        let den = reduce(spec.ell.denom());
        let ell = mul_mod(num, inv_mod(den, p), p);
        Self {
            p,
            ell,
            ell_inv: inv_mod(ell, p),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn name(&self) -> String {
        format!("F_{}", self.p)
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        let s = x + y;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, x: &u64, y: &u64) -> u64 {
        if x >= y {
            x - y
        } else {
            x + self.p - y
        }
    }
    fn neg(&self, x: &u64) -> u64 {
        if *x == 0 {
            0
        } else {
            self.p - x
        }
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        mul_mod(*x, *y, self.p)
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
    fn ell_pow(&self, e: i32) -> u64 {
        let (base, k) = if e >= 0 {
            (self.ell, e as u64)
        } else {
            (self.ell_inv, (-e) as u64)
        };
        pow_mod(base, k, self.p)
    }
    fn parse_elem(&self, s: &str) -> Result<u64, RingError> {
        let q = parse_rational(s)?;
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        if den == 0 {
            return Err(RingError::NonInvertible(
                format!("denominator of {s}"),
                self.name(),
            ));
        }
        Ok(mul_mod(num, inv_mod(den, self.p), self.p))
    }
    fn format_elem(&self, x: &u64) -> String {
        x.to_string()
    }
}

// -- machine integers (benchmark mode: wraps on overflow) --------------------

#[derive(Clone, Debug)]
pub struct Int64Ring {
    ell: i64,
}

impl Int64Ring {
    pub fn new(ell: i64) -> Result<Self, RingError> {
        RingSpec::new(RingKind::MachineInt64, BigRational::from_integer(ell.into()))
            .map(|s| Self::from_spec(&s))
    }

    pub fn from_spec(spec: &RingSpec) -> Self {
        debug_assert_eq!(spec.kind, RingKind::MachineInt64);
        Self {
            ell: spec.ell.numer().to_i64().unwrap(),
        }
    }
}

impl Ring for Int64Ring {
    type Elem = i64;

    fn name(&self) -> String {
        "Z (machine i64)".into()
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn is_zero(&self, x: &i64) -> bool {
        *x == 0
    }
    fn add(&self, x: &i64, y: &i64) -> i64 {
        x.wrapping_add(*y)
    }
    fn sub(&self, x: &i64, y: &i64) -> i64 {
        x.wrapping_sub(*y)
    }
    fn neg(&self, x: &i64) -> i64 {
        x.wrapping_neg()
    }
    fn mul(&self, x: &i64, y: &i64) -> i64 {
        x.wrapping_mul(*y)
    }
    fn from_bigint(&self, n: &BigInt) -> i64 {
        // wrap to 64 bits, benchmark semantics
        let m = n.mod_floor(&(BigInt::one() << 64));
        m.to_u64().unwrap() as i64
    }
    fn ell_pow(&self, e: i32) -> i64 {
        // ell is +-1, so any power is +-1
        if self.ell == 1 || e % 2 == 0 {
            1
        } else {
            -1
        }
    }
    fn parse_elem(&self, s: &str) -> Result<i64, RingError> {
        s.trim()
            .parse()
            .map_err(|_| RingError::Parse(format!("bad integer `{s}`")))
    }
    fn format_elem(&self, x: &i64) -> String {
        x.to_string()
    }
}

// -- f64 (benchmark only; excluded from verification paths) ------------------

#[derive(Clone, Debug)]
pub struct F64Ring {
    ell: f64,
}

impl F64Ring {
    pub fn new(ell: f64) -> Result<Self, RingError> {
        if ell == 0.0 {
            return Err(RingError::NonInvertible("L = 0".into(), "f64".into()));
        }
        Ok(Self { ell })
    }

    pub fn from_spec(spec: &RingSpec) -> Self {
        debug_assert_eq!(spec.kind, RingKind::Float64);
        let ell = spec.ell.numer().to_f64().unwrap() / spec.ell.denom().to_f64().unwrap();
        Self { ell }
    }
}

impl Ring for F64Ring {
    type Elem = f64;

    fn name(&self) -> String {
        "f64".into()
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn is_zero(&self, x: &f64) -> bool {
        *x == 0.0
    }
    fn add(&self, x: &f64, y: &f64) -> f64 {
        x + y
    }
    fn sub(&self, x: &f64, y: &f64) -> f64 {
        x - y
    }
    fn neg(&self, x: &f64) -> f64 {
        -x
    }
    fn mul(&self, x: &f64, y: &f64) -> f64 {
        x * y
    }
    fn from_bigint(&self, n: &BigInt) -> f64 {
        n.to_f64().unwrap_or(f64::NAN)
    }
    fn ell_pow(&self, e: i32) -> f64 {
        self.ell.powi(e)
    }
    fn parse_elem(&self, s: &str) -> Result<f64, RingError> {
        s.trim()
            .parse()
            .map_err(|_| RingError::Parse(format!("bad float `{s}`")))
    }
    fn format_elem(&self, x: &f64) -> String {
        format!("{x:?}")
    }
}

// ---------------------------------------------------------------------------
// modular helpers
// ---------------------------------------------------------------------------

fn mul_mod(x: u64, y: u64, p: u64) -> u64 {
    ((x as u128 * y as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(x: u64, p: u64) -> u64 {
    debug_assert!(!x.is_multiple_of(p), "division by zero mod {p}");
    pow_mod(x, p - 2, p)
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_instantiation_of_inverse_square() {
        // L = 2: L^-2 -> 1/4
        let ring = RationalField::new(rat(2, 1)).unwrap();
        let c = LaurentCoeff::term(BigInt::one(), -2);
        assert_eq!(instantiate(&c, &ring), rat(1, 4));
    }

    #[test]
    fn prime_field_inverse_of_ell() {
        // F_101, L = 2: L^-1 = 51
        let ring = PrimeField::new(101, rat(2, 1)).unwrap();
        let c = LaurentCoeff::term(BigInt::one(), -1);
        assert_eq!(instantiate(&c, &ring), 51);
    }

    #[test]
    fn machine_int_requires_unit_ell() {
        assert!(Int64Ring::new(3).is_err());
        assert!(Int64Ring::new(1).is_ok());
        assert!(Int64Ring::new(-1).is_ok());
    }

    #[test]
    fn ell_squared_minus_one_vanishes_at_one() {
        let ring = RationalField::new(rat(1, 1)).unwrap();
        let c = LaurentCoeff::term(BigInt::one(), 2).add(&LaurentCoeff::from_int(-1));
        assert!(instantiate(&c, &ring).is_zero());
    }

    #[test]
    fn inverse_ell_at_three() {
        let ring = RationalField::new(rat(3, 1)).unwrap();
        let c = LaurentCoeff::term(BigInt::one(), -1);
        assert_eq!(instantiate(&c, &ring), rat(1, 3));
    }

    #[test]
    fn mixed_powers_mod_seven() {
        // c = 2L - L^-2 at L = 2 in F_7. Oracle: brute-force table of F_7
        // inverses; over Q the value is 4 - 1/4 = 15/4, and 15/4 mod 7 is
        // 1 * inv(4) = 2.
        let inv4 = (1..7).find(|x| (4 * x) % 7 == 1).unwrap();
        assert_eq!(inv4, 2);
        let expected = (4 + 6 * inv4) % 7; // -1 = 6 mod 7
        assert_eq!(expected, 2);
        let ring = PrimeField::new(7, rat(2, 1)).unwrap();
        let c = LaurentCoeff::term(BigInt::from(2), 1)
            .add(&LaurentCoeff::term(BigInt::from(-1), -2));
        assert_eq!(instantiate(&c, &ring), expected);
    }

    #[test]
    fn non_prime_modulus_rejected() {
        assert!(matches!(
            PrimeField::new(100, rat(1, 1)),
            Err(RingError::NonPrimeModulus(100))
        ));
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime_u64(101));
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn laurent_parse_display_round_trip() {
        for s in ["0", "1", "-1", "L", "-L", "2*L^2", "3*L^-1-1+2*L^2", "L^-2"] {
            let c = LaurentCoeff::parse(s).unwrap();
            let printed = c.to_string();
            assert_eq!(LaurentCoeff::parse(&printed).unwrap(), c, "via {s}");
        }
        // spaced literal from the interface contract
        let c = LaurentCoeff::parse("2*L^2 - 1 + 3*L^-1").unwrap();
        assert_eq!(c.to_string(), "3*L^-1-1+2*L^2");
    }

    #[test]
    fn rational_literals_reduce() {
        let q = parse_rational("6/4").unwrap();
        assert_eq!(q, rat(3, 2));
        let q = parse_rational("1/-2").unwrap();
        assert_eq!(q, rat(-1, 2));
        assert!(q.denom() > &BigInt::zero());
        assert!(parse_rational("1/0").is_err());
    }

    /// Ring axioms on random triples, 10^4 cases per ring.
    #[test]
    fn ring_axioms_hold_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let q = RationalField::new(rat(2, 3)).unwrap();
        let f = PrimeField::new(101, rat(5, 1)).unwrap();
        for _ in 0..10_000 {
            let mk = |rng: &mut ChaCha8Rng| rat(rng.gen_range(-50..50), rng.gen_range(1..20));
            let (a, b, c) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            axioms(&q, &a, &b, &c);
            let (a, b, c) = (
                rng.gen_range(0..101u64),
                rng.gen_range(0..101u64),
                rng.gen_range(0..101u64),
            );
            axioms(&f, &a, &b, &c);
        }
    }

    fn axioms<R: Ring>(ring: &R, a: &R::Elem, b: &R::Elem, c: &R::Elem) {
        let ab_c = ring.mul(&ring.mul(a, b), c);
        let a_bc = ring.mul(a, &ring.mul(b, c));
        assert_eq!(ab_c, a_bc, "mul associativity");
        let lhs = ring.mul(a, &ring.add(b, c));
        let rhs = ring.add(&ring.mul(a, b), &ring.mul(a, c));
        assert_eq!(lhs, rhs, "distributivity");
        assert_eq!(ring.add(a, &ring.zero()), *a, "additive identity");
        assert_eq!(ring.mul(a, &ring.one()), *a, "multiplicative identity");
        assert!(ring.is_zero(&ring.add(a, &ring.neg(a))), "additive inverse");
        assert_eq!(ring.add(a, b), ring.add(b, a), "add commutativity");
    }

    /// instantiate is a ring homomorphism.
    #[test]
    fn instantiate_is_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q = RationalField::new(rat(-3, 2)).unwrap();
        let f = PrimeField::new(101, rat(7, 1)).unwrap();
        for _ in 0..2_000 {
            let mk = |rng: &mut ChaCha8Rng| {
                let mut c = LaurentCoeff::zero();
                for _ in 0..rng.gen_range(0..4) {
                    c = c.add(&LaurentCoeff::term(
                        BigInt::from(rng.gen_range(-9i64..10)),
                        rng.gen_range(-2..3),
                    ));
                }
                c
            };
            let (c1, c2) = (mk(&mut rng), mk(&mut rng));
            homomorphism(&q, &c1, &c2);
            homomorphism(&f, &c1, &c2);
        }
    }

    fn homomorphism<R: Ring>(ring: &R, c1: &LaurentCoeff, c2: &LaurentCoeff) {
        assert_eq!(
            instantiate(&c1.add(c2), ring),
            ring.add(&instantiate(c1, ring), &instantiate(c2, ring))
        );
        assert_eq!(
            instantiate(&c1.mul(c2), ring),
            ring.mul(&instantiate(c1, ring), &instantiate(c2, ring))
        );
    }
}
