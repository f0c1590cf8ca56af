//! Exact real scalars: rationals plus rational combinations of declared
//! irrational algebraic constants, assumed Q-linearly independent with 1.

mod constant;
mod registry;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use constant::{AlgebraicConstant, IntPoly};
pub use registry::Constants;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Bisection depth after which a still-ambiguous sign is treated as a
/// hidden linear dependency among the declared constants.
pub const GUARD_ROUNDS: u32 = 100;
const HARD_ROUND_CAP: u32 = 4000;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn guard_width() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10).pow(30))
}

/// Simplest rational (smallest denominator, then smallest magnitude) in the
/// open interval (lo, hi).
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "simplest_between needs lo < hi");
    if hi.is_negative() || hi.is_zero() {
        return -simplest_between(&-hi, &-lo);
    }
    if lo.is_negative() {
        return Rational::zero();
    }
    let fl = lo.floor();
    let n = &fl + Rational::one();
    if &n < hi {
        return n;
    }
    let frac_hi = hi - &fl;
    let frac_lo = lo - &fl;
    let y = if frac_lo.is_zero() {
        (frac_hi.recip()).floor() + Rational::one()
    } else {
        simplest_between(&frac_hi.recip(), &frac_lo.recip())
    };
    fl + y.recip()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    rational: Rational,
    terms: BTreeMap<AlgebraicConstant, Rational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        Scalar { rational: q, terms: BTreeMap::new() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(int(n))
    }

    pub fn constant(c: &AlgebraicConstant) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(c.clone(), Rational::one());
        Scalar { rational: Rational::zero(), terms }
    }

    pub fn from_parts(rational: Rational, terms: impl IntoIterator<Item = (AlgebraicConstant, Rational)>) -> Self {
        let mut s = Scalar::from_rational(rational);
        for (c, q) in terms {
            s.add_term(c, q);
        }
        s
    }

    fn add_term(&mut self, c: AlgebraicConstant, q: Rational) {
        let entry = self.terms.entry(c).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn irrational_terms(&self) -> &BTreeMap<AlgebraicConstant, Rational> {
        &self.terms
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.rational.is_zero()
    }

    pub fn scale(&self, q: &Rational) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            rational: &self.rational * q,
            terms: self.terms.iter().map(|(c, v)| (c.clone(), v * q)).collect(),
        }
    }

    /// Interval enclosure (lo, hi) of the value using each constant's
    /// interval after `rounds` bisections. Exact when rational.
    pub fn enclosure(&self, rounds: u32) -> Result<(Rational, Rational)> {
        let mut lo = self.rational.clone();
        let mut hi = self.rational.clone();
        for (c, q) in &self.terms {
            let iv = if rounds == constant::PRECOMPUTED_ROUNDS {
                c.fine().clone()
            } else {
                c.interval_after(rounds)?
            };
            if q.is_positive() {
                lo += q * &iv.0;
                hi += q * &iv.1;
            } else {
                lo += q * &iv.1;
                hi += q * &iv.0;
            }
        }
        Ok((lo, hi))
    }

    /// Sign of the represented real number.
    pub fn signum(&self) -> Result<Ordering> {
        if self.is_rational() {
            return Ok(self.rational.cmp(&Rational::zero()));
        }
        // Constants are roots strictly inside their intervals, so enclosure
        // bounds are strict whenever an irrational term is present.
        let mut rounds = constant::PRECOMPUTED_ROUNDS;
        loop {
            let (lo, hi) = self.enclosure(rounds)?;
            if !lo.is_negative() {
                return Ok(Ordering::Greater);
            }
            if !hi.is_positive() {
                return Ok(Ordering::Less);
            }
            if (rounds >= GUARD_ROUNDS && &hi - &lo <= guard_width()) || rounds >= HARD_ROUND_CAP {
                return Err(Error::config(format!(
                    "declared constants look linearly dependent: {self} stays within 1e-30 of zero"
                )));
            }
            rounds = if rounds < GUARD_ROUNDS { GUARD_ROUNDS } else { rounds + 32 };
        }
    }

    pub fn compare(&self, other: &Scalar) -> Result<Ordering> {
        if self == other {
            return Ok(Ordering::Equal);
        }
        (self - other).signum()
    }

    /// Some rational strictly between `self` and `other` (requires self < other),
    /// chosen as the simplest one in a rational subinterval.
    pub fn rational_strictly_between(&self, other: &Scalar) -> Result<Rational> {
        if self.compare(other)? != Ordering::Less {
            return Err(Error::domain(format!("{self} is not below {other}")));
        }
        let mut rounds = constant::PRECOMPUTED_ROUNDS;
        loop {
            let lo = match self.as_rational() {
                Some(q) => q.clone(),
                None => self.enclosure(rounds)?.1,
            };
            let hi = match other.as_rational() {
                Some(q) => q.clone(),
                None => other.enclosure(rounds)?.0,
            };
            if lo < hi {
                return Ok(simplest_between(&lo, &hi));
            }
            if rounds >= HARD_ROUND_CAP {
                return Err(Error::config("could not separate scalars"));
            }
            rounds += 32;
        }
    }

    /// An integer strictly above the value.
    pub fn integer_above(&self) -> Result<Rational> {
        let hi = match self.as_rational() {
            Some(q) => q.clone(),
            None => self.enclosure(constant::PRECOMPUTED_ROUNDS)?.1,
        };
        Ok(hi.floor() + Rational::one())
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> Result<Rational> {
        if let Some(q) = self.as_rational() {
            return Ok(q.ceil());
        }
        let (lo, hi) = self.enclosure(constant::PRECOMPUTED_ROUNDS)?;
        let c = lo.ceil();
        // irrational values are never integers; the enclosure pins the ceiling once it
        // avoids straddling an integer
        if c >= hi {
            Ok(c)
        } else {
            let mut rounds = constant::PRECOMPUTED_ROUNDS;
            loop {
                rounds += 32;
                let (lo, hi) = self.enclosure(rounds)?;
                if lo.ceil() >= hi {
                    return Ok(lo.ceil());
                }
                if rounds >= HARD_ROUND_CAP {
                    return Err(Error::config("could not bracket scalar between integers"));
                }
            }
        }
    }

    /// Approximate value for diagnostics.
    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        let (lo, hi) = self.enclosure(constant::PRECOMPUTED_ROUNDS).unwrap_or((self.rational.clone(), self.rational.clone()));
        ((lo + hi) / int(2)).to_f64().unwrap_or(f64::NAN)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::from_rational(q)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out.rational += &rhs.rational;
        for (c, q) in &rhs.terms {
            out.add_term(c.clone(), q.clone());
        }
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            rational: -&self.rational,
            terms: self.terms.iter().map(|(c, q)| (c.clone(), -q)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul<&Rational> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Rational) -> Scalar {
        self.scale(rhs)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.rational.is_zero() || self.terms.is_empty() {
            write!(f, "{}", self.rational)?;
            first = false;
        }
        for (c, q) in &self.terms {
            let neg = q.is_negative();
            let mag = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if mag.is_one() {
                write!(f, "{}", c.label())?;
            } else {
                write!(f, "{}*{}", mag, c.label())?;
            }
        }
        Ok(())
    }
}
