use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Bisection rounds applied once at declaration; comparisons start from here.
pub(crate) const PRECOMPUTED_ROUNDS: u32 = 64;

/// Integer polynomial with coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    fn sign_at(&self, x: &Rational) -> Ordering {
        self.eval(x).cmp(&Rational::zero())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Debug)]
struct Inner {
    label: String,
    poly: IntPoly,
    lo: Rational,
    hi: Rational,
    fine: (Rational, Rational),
}

/// A real algebraic number pinned down by a defining polynomial and an
/// isolating interval containing exactly one (irrational) root.
#[derive(Clone, Debug)]
pub struct AlgebraicConstant(Arc<Inner>);

impl AlgebraicConstant {
    pub fn new(label: &str, poly: IntPoly, lo: Rational, hi: Rational) -> Result<Self> {
        if poly.degree().unwrap_or(0) < 1 {
            return Err(Error::config(format!("{label}: defining polynomial must be nonconstant")));
        }
        if lo >= hi {
            return Err(Error::config(format!("{label}: empty isolating interval")));
        }
        let (sl, sh) = (poly.sign_at(&lo), poly.sign_at(&hi));
        if sl == Ordering::Equal || sh == Ordering::Equal || sl == sh {
            return Err(Error::config(format!(
                "{label}: polynomial must change sign strictly inside ({lo}, {hi})"
            )));
        }
        let roots = sturm_count(&poly, &lo, &hi);
        if roots != 1 {
            return Err(Error::config(format!(
                "{label}: interval ({lo}, {hi}) contains {roots} roots, expected 1"
            )));
        }
        if let Some(r) = rational_root_in(&poly, &lo, &hi, &label)? {
            return Err(Error::config(format!("{label}: root {r} is rational")));
        }
        let fine = bisect_rounds(&poly, (lo.clone(), hi.clone()), PRECOMPUTED_ROUNDS, label)?;
        Ok(AlgebraicConstant(Arc::new(Inner {
            label: label.to_string(),
            poly,
            lo,
            hi,
            fine,
        })))
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn poly(&self) -> &IntPoly {
        &self.0.poly
    }

    pub fn isolating_interval(&self) -> (&Rational, &Rational) {
        (&self.0.lo, &self.0.hi)
    }

    /// Enclosure after `rounds` bisection steps of the isolating interval.
    pub fn interval_after(&self, rounds: u32) -> Result<(Rational, Rational)> {
        if rounds >= PRECOMPUTED_ROUNDS {
            bisect_rounds(&self.0.poly, self.0.fine.clone(), rounds - PRECOMPUTED_ROUNDS, &self.0.label)
        } else {
            bisect_rounds(&self.0.poly, (self.0.lo.clone(), self.0.hi.clone()), rounds, &self.0.label)
        }
    }

    pub(crate) fn fine(&self) -> &(Rational, Rational) {
        &self.0.fine
    }

    /// Bisects the isolating interval until its width is at most `width`.
    pub fn refine(&self, width: &Rational) -> Result<(Rational, Rational)> {
        if !width.is_positive() {
            return Err(Error::domain("refinement width must be positive"));
        }
        let mut iv = (self.0.lo.clone(), self.0.hi.clone());
        while &iv.1 - &iv.0 > *width {
            iv = bisect_once(&self.0.poly, iv, &self.0.label)?;
        }
        Ok(iv)
    }

    fn key(&self) -> (&str, &IntPoly, &Rational, &Rational) {
        (&self.0.label, &self.0.poly, &self.0.lo, &self.0.hi)
    }
}

impl PartialEq for AlgebraicConstant {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.key() == other.key()
    }
}
impl Eq for AlgebraicConstant {}

impl PartialOrd for AlgebraicConstant {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for AlgebraicConstant {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.key(), other.key());
        a.0.cmp(b.0)
            .then_with(|| a.1 .0.cmp(&b.1 .0))
            .then_with(|| a.2.cmp(b.2))
            .then_with(|| a.3.cmp(b.3))
    }
}
impl Hash for AlgebraicConstant {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.label.hash(state);
    }
}

impl fmt::Display for AlgebraicConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "const {} = root({}, {}, {})", self.0.label, self.0.poly, self.0.lo, self.0.hi)
    }
}

fn bisect_once(poly: &IntPoly, (lo, hi): (Rational, Rational), label: &str) -> Result<(Rational, Rational)> {
    let mid = (&lo + &hi) / Rational::from_integer(2.into());
    let sm = poly.sign_at(&mid);
    if sm == Ordering::Equal {
        return Err(Error::config(format!("{label}: bisection midpoint {mid} is a root")));
    }
    if sm == poly.sign_at(&lo) {
        Ok((mid, hi))
    } else {
        Ok((lo, mid))
    }
}

fn bisect_rounds(
    poly: &IntPoly,
    mut iv: (Rational, Rational),
    rounds: u32,
    label: &str,
) -> Result<(Rational, Rational)> {
    for _ in 0..rounds {
        iv = bisect_once(poly, iv, label)?;
    }
    Ok(iv)
}

type QPoly = Vec<Rational>;

fn qtrim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn qrem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let q = &r[r.len() - 1] / lb;
        for (i, c) in b.iter().enumerate() {
            r[k + i] = &r[k + i] - &q * c;
        }
        r.pop();
        qtrim(&mut r);
    }
    r
}

fn qsign_at(p: &QPoly, x: &Rational) -> Ordering {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc.cmp(&Rational::zero())
}

/// Number of distinct real roots in (lo, hi], by Sturm's theorem.
fn sturm_count(poly: &IntPoly, lo: &Rational, hi: &Rational) -> usize {
    let p0: QPoly = poly.coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect();
    let p1: QPoly = p0
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rational::from_integer(k.into()))
        .collect();
    let mut seq = vec![p0, p1];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r = qrem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let variations = |x: &Rational| {
        let signs: Vec<Ordering> = seq.iter().map(|p| qsign_at(p, x)).filter(|s| *s != Ordering::Equal).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    variations(lo).saturating_sub(variations(hi))
}

/// Rational root theorem restricted to the isolating interval: any rational
/// root p/q has q dividing the leading coefficient.
fn rational_root_in(poly: &IntPoly, lo: &Rational, hi: &Rational, label: &str) -> Result<Option<Rational>> {
    let lead = poly.coeffs().last().expect("nonconstant").abs();
    let mut iv = (lo.clone(), hi.clone());
    for q in divisors(&lead) {
        let qr = Rational::from_integer(q.clone());
        while (&iv.1 - &iv.0) * &qr >= Rational::one() {
            iv = bisect_once(poly, iv, label)?;
        }
        let p = (&iv.0 * &qr).floor() + Rational::one();
        if p < &iv.1 * &qr {
            let cand = p / &qr;
            if poly.eval(&cand).is_zero() {
                return Ok(Some(cand));
            }
        }
    }
    Ok(None)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if let Some(m) = n.to_u64() {
        let mut out = Vec::new();
        let mut d = 1u64;
        while d.saturating_mul(d) <= m {
            if m % d == 0 {
                out.push(BigInt::from(d));
                if d != m / d {
                    out.push(BigInt::from(m / d));
                }
            }
            d += 1;
            if d > 1_000_000 {
                break;
            }
        }
        out.sort();
        out
    } else {
        // Leading coefficients beyond u64 are far outside desk scale; try the trivial divisors.
        let mut out = vec![BigInt::one(), n.clone()];
        if n.is_even() {
            out.push(BigInt::from(2));
        }
        out
    }
}
