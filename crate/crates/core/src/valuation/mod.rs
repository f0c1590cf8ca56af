//! Valued fields with value group inside the normalized Γ, and the depth-zero
//! valuations ω_{a,δ}(f) = min_s v(a_s) + sδ on K[x].

mod ball;
mod poly;
mod ratfunc;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ordgroup::{is_small_extension, GeneratedGroup, SmallnessReport};
use crate::scalars::{Rational, Scalar};
use crate::sme::{Cut, Hull, SlotVector};

pub use ball::{ball_inf_check, BallReport, Probe};
pub use poly::{Poly, Ring};
pub use ratfunc::RatFunc;

/// A field K with a valuation v: K* -> Z^r ⊂ Q^r_lex.
pub trait ValuedField {
    type Elem: Ring;

    fn rank(&self) -> usize;
    /// None for 0.
    fn value(&self, c: &Self::Elem) -> Option<Vec<BigInt>>;
    fn embed(&self, q: &Rational) -> Self::Elem;
    /// Generators of v(K*).
    fn value_group_generators(&self) -> Vec<Vec<BigInt>>;
    fn name(&self) -> String;

    fn hull(&self) -> Hull {
        Hull::fin(self.rank()).expect("positive rank")
    }
}

fn check_prime(p: u64) -> Result<()> {
    let composite = p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p % d == 0);
    if composite {
        return Err(Error::config(format!("{p} is not a prime")));
    }
    Ok(())
}

/// Exponent of p in a nonzero integer.
pub fn int_order(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// v_p of a nonzero rational.
pub fn rat_order(q: &Rational, p: &BigInt) -> i64 {
    int_order(q.numer(), p) - int_order(q.denom(), p)
}

/// Q with the p-adic valuation; Γ = Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicQ {
    p: BigInt,
}

impl PAdicQ {
    pub fn new(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(PAdicQ { p: BigInt::from(p) })
    }

    pub fn prime(&self) -> &BigInt {
        &self.p
    }

    /// p^k as a rational, k may be negative.
    pub fn power(&self, k: i64) -> Rational {
        let m = num_traits::pow(self.p.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            Rational::from_integer(m)
        } else {
            Rational::new(BigInt::one(), m)
        }
    }

    pub fn order(&self, q: &Rational) -> Option<i64> {
        (!q.is_zero()).then(|| rat_order(q, &self.p))
    }
}

impl ValuedField for PAdicQ {
    type Elem = Rational;

    fn rank(&self) -> usize {
        1
    }

    fn value(&self, c: &Rational) -> Option<Vec<BigInt>> {
        self.order(c).map(|k| vec![BigInt::from(k)])
    }

    fn embed(&self, q: &Rational) -> Rational {
        q.clone()
    }

    fn value_group_generators(&self) -> Vec<Vec<BigInt>> {
        vec![vec![BigInt::one()]]
    }

    fn name(&self) -> String {
        format!("padic:{}", self.p)
    }
}

/// Q(t) with v(f) = (ord_t f, v_p of the lowest t-coefficient); Γ = Z²_lex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexCompositeQt {
    p: BigInt,
}

impl LexCompositeQt {
    pub fn new(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(LexCompositeQt { p: BigInt::from(p) })
    }

    fn poly_value(&self, f: &Poly<Rational>) -> (i64, i64) {
        let (k, c) = f.coeffs().iter().enumerate().find(|(_, c)| !c.is_zero()).expect("nonzero polynomial");
        (k as i64, rat_order(c, &self.p))
    }
}

impl ValuedField for LexCompositeQt {
    type Elem = RatFunc;

    fn rank(&self) -> usize {
        2
    }

    fn value(&self, c: &RatFunc) -> Option<Vec<BigInt>> {
        if c.is_zero() {
            return None;
        }
        let (a, b) = self.poly_value(c.num());
        let (x, y) = self.poly_value(c.den());
        Some(vec![BigInt::from(a - x), BigInt::from(b - y)])
    }

    fn embed(&self, q: &Rational) -> RatFunc {
        RatFunc::rational(q.clone())
    }

    fn value_group_generators(&self) -> Vec<Vec<BigInt>> {
        vec![vec![BigInt::one(), BigInt::zero()], vec![BigInt::zero(), BigInt::one()]]
    }

    fn name(&self) -> String {
        format!("lexqt:{}", self.p)
    }
}

pub fn field_value<F: ValuedField>(k: &F, c: &F::Elem) -> Option<Vec<BigInt>> {
    k.value(c)
}

fn as_slot(g: &[BigInt]) -> SlotVector {
    SlotVector::dense(g.iter().map(|x| Scalar::from_rational(Rational::from_integer(x.clone()))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Delta {
    Infinity,
    Finite(SlotVector),
}

/// ω_{a,δ}
#[derive(Clone, Debug, PartialEq)]
pub struct DepthZero<E> {
    pub center: E,
    pub delta: Delta,
}

/// m·δ + g, or ∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendedValue {
    Finite { m: i64, g: Vec<BigInt> },
    Infinity,
}

impl ExtendedValue {
    pub fn add(&self, o: &ExtendedValue) -> ExtendedValue {
        match (self, o) {
            (ExtendedValue::Finite { m, g }, ExtendedValue::Finite { m: n, g: h }) => ExtendedValue::Finite {
                m: m + n,
                g: g.iter().zip(h).map(|(a, b)| a + b).collect(),
            },
            _ => ExtendedValue::Infinity,
        }
    }

    pub fn to_slot(&self, delta: &SlotVector) -> Option<SlotVector> {
        match self {
            ExtendedValue::Infinity => None,
            ExtendedValue::Finite { m, g } => {
                Some(delta.scale(&Rational::from_integer(BigInt::from(*m))).add(&as_slot(g)).expect("finite sum"))
            }
        }
    }
}

/// Order on ⟨Γ, δ⟩ ∪ {∞} through the slot embedding.
pub fn compare_values(hull: &Hull, delta: &SlotVector, x: &ExtendedValue, y: &ExtendedValue) -> Result<Ordering> {
    match (x.to_slot(delta), y.to_slot(delta)) {
        (None, None) => Ok(Ordering::Equal),
        (None, Some(_)) => Ok(Ordering::Greater),
        (Some(_), None) => Ok(Ordering::Less),
        (Some(a), Some(b)) => match (rational_coords(&a), rational_coords(&b)) {
            (Some(x), Some(y)) => Ok(lex_cmp(&x, &y)),
            _ => hull.compare(&a, &b),
        },
    }
}

fn rational_coords(u: &SlotVector) -> Option<Vec<(usize, Rational)>> {
    if u.marker().is_some() || u.tail().is_some() {
        return None;
    }
    u.coords().iter().map(|(p, s)| s.as_rational().map(|q| (p.offset, q.clone()))).collect()
}

/// Lexicographic comparison of sparse rational vectors on one FIN block.
fn lex_cmp(x: &[(usize, Rational)], y: &[(usize, Rational)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (x.get(i), y.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some((_, a)), None) => return a.cmp(&Rational::zero()),
            (None, Some((_, b))) => return Rational::zero().cmp(b),
            (Some((p, a)), Some((q, b))) => match p.cmp(q) {
                Ordering::Less => return a.cmp(&Rational::zero()),
                Ordering::Greater => return Rational::zero().cmp(b),
                Ordering::Equal => match a.cmp(b) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    o => return o,
                },
            },
        }
    }
}

impl<E: Ring> DepthZero<E> {
    pub fn new<F: ValuedField<Elem = E>>(k: &F, center: E, delta: Delta) -> Result<Self> {
        if let Delta::Finite(d) = &delta {
            let hull = k.hull();
            hull.validate(d)?;
            if d.coords().keys().any(|p| p.offset >= k.rank()) {
                return Err(Error::domain("delta has more coordinates than the value group rank"));
            }
        }
        Ok(DepthZero { center, delta })
    }
}

pub fn dz_eval<F: ValuedField>(k: &F, w: &DepthZero<F::Elem>, f: &Poly<F::Elem>) -> Result<ExtendedValue> {
    let d = match &w.delta {
        Delta::Infinity => {
            return Ok(match k.value(&f.eval(&w.center)) {
                Some(g) => ExtendedValue::Finite { m: 0, g },
                None => ExtendedValue::Infinity,
            })
        }
        Delta::Finite(d) => d,
    };
    let hull = k.hull();
    let mut best = ExtendedValue::Infinity;
    for (s, a) in f.taylor(&w.center).iter().enumerate() {
        let Some(g) = k.value(a) else { continue };
        let cand = ExtendedValue::Finite { m: s as i64, g };
        if compare_values(&hull, d, &cand, &best)? == Ordering::Less {
            best = cand;
        }
    }
    Ok(best)
}

/// (-deg f, v(lc f)), read off the expansion at `a`.
pub fn omega_minus_infinity<F: ValuedField>(k: &F, a: &F::Elem, f: &Poly<F::Elem>) -> Option<(i64, Vec<BigInt>)> {
    let e = f.taylor(a);
    let top = e.len().checked_sub(1)?;
    Some((-(top as i64), k.value(&e[top])?))
}

/// (ord_{x-a} f, v(first nonzero expansion coefficient))
pub fn omega_inf_minus<F: ValuedField>(k: &F, a: &F::Elem, f: &Poly<F::Elem>) -> Option<(i64, Vec<BigInt>)> {
    let e = f.taylor(a);
    let (s, c) = e.iter().enumerate().find(|(_, c)| !c.is_zero())?;
    Some((s as i64, k.value(c)?))
}

/// v(b - a) >= δ in the slot order (∞ is above everything).
fn distance_at_least<F: ValuedField>(k: &F, a: &F::Elem, b: &F::Elem, d: &SlotVector) -> Result<bool> {
    match k.value(&(b.clone() - a.clone())) {
        None => Ok(true),
        Some(g) => Ok(k.hull().compare(&as_slot(&g), d)? != Ordering::Less),
    }
}

/// ω_{a,δ} = ω_{b,ε} for parameters compared as given.
pub fn dz_equal<F: ValuedField>(k: &F, a: &F::Elem, delta: &Delta, b: &F::Elem, eps: &Delta) -> Result<bool> {
    match (delta, eps) {
        (Delta::Infinity, Delta::Infinity) => Ok(a == b),
        (Delta::Finite(d), Delta::Finite(e)) => Ok(d == e && distance_at_least(k, a, b, d)?),
        _ => Ok(false),
    }
}

/// Same valuation up to Γ-equivalence of the parameters: δ ∼sme ε and v(b - a)
/// lies above the whole common class, i.e. above its canonical representative.
pub fn dz_equivalent<F: ValuedField>(k: &F, a: &F::Elem, delta: &Delta, b: &F::Elem, eps: &Delta) -> Result<bool> {
    match (delta, eps) {
        (Delta::Infinity, Delta::Infinity) => Ok(a == b),
        (Delta::Finite(d), Delta::Finite(e)) => {
            let hull = k.hull();
            if !hull.sme_equivalent(d, e)? {
                return Ok(false);
            }
            let rep = hull.classify(d)?.rep;
            distance_at_least(k, a, b, &rep)
        }
        _ => Ok(false),
    }
}

/// Runs the small-extension test on Γ ⊂ ⟨Γ, δ⟩. A marker becomes an extra
/// ambient coordinate placed at its slot.
pub fn value_group_check<F: ValuedField>(k: &F, delta: &Delta) -> Result<SmallnessReport> {
    let Delta::Finite(d) = delta else {
        return Err(Error::domain("the value group of the infinite-parameter valuation is not an extension"));
    };
    let r = k.rank();
    let marker_at = d.marker().map(|m| match m.segment.cut() {
        Cut::Count(c) => c,
        _ => 0,
    });
    let dim = r + usize::from(marker_at.is_some());
    let lift = |coords: Vec<Scalar>, mark: Scalar| -> Vec<Scalar> {
        match marker_at {
            None => coords,
            Some(at) => {
                let mut v = coords;
                v.insert(at, mark);
                v
            }
        }
    };
    let gens: Vec<Vec<Scalar>> = k
        .value_group_generators()
        .into_iter()
        .map(|g| lift(g.into_iter().map(|x| Scalar::from_rational(Rational::from_integer(x))).collect(), Scalar::zero()))
        .collect();
    let dvec = lift(
        (0..r).map(|i| d.value_at(crate::sme::Position::new(0, i))).collect(),
        d.marker().map(|m| m.value.clone()).unwrap_or_default(),
    );
    let gamma = GeneratedGroup::finitely_generated(dim, gens.clone())?;
    let mut lgens = gens;
    lgens.push(dvec);
    let lambda = GeneratedGroup::finitely_generated(dim, lgens)?;
    let report = is_small_extension(&gamma, &lambda)?;
    if report.rational_rank_quotient > 1 {
        return Err(Error::contract("rr of a depth-zero value group over Γ exceeds one"));
    }
    Ok(report)
}

/// True when every coordinate of δ is an integer and there is no marker.
pub(crate) fn integral_delta(d: &SlotVector) -> Option<Vec<BigInt>> {
    if d.marker().is_some() || d.tail().is_some() {
        return None;
    }
    let mut out = Vec::new();
    let top = d.coords().keys().map(|p| p.offset + 1).max().unwrap_or(1);
    for i in 0..top {
        let q = d.value_at(crate::sme::Position::new(0, i)).as_rational()?.clone();
        if !q.is_integer() {
            return None;
        }
        out.push(q.to_integer());
    }
    Some(out)
}

#[cfg(test)]
mod tests;
