use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{integral_delta, PAdicQ};
use crate::error::{Error, Result};
use crate::scalars::{Rational, Scalar};
use crate::sme::{Position, SlotVector};
use crate::valuation::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub rho: i64,
    pub expected: i64,
    pub actual: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BallReport {
    /// δ ∈ Γ: a generic ball point attains the minimum and no ball point goes below it.
    Generic {
        mu: i64,
        residue: u64,
        witness: Rational,
        witness_value: Option<i64>,
        trials: usize,
        violations: usize,
    },
    /// δ irrational: integer radii ρ with δ < ρ < ε see only the dominant term.
    Probes {
        dominant: usize,
        epsilon: Option<Rational>,
        probes: Vec<Probe>,
        skipped: bool,
    },
}

impl BallReport {
    pub fn passed(&self) -> bool {
        match self {
            BallReport::Generic { mu, witness_value, violations, .. } => {
                *witness_value == Some(*mu) && *violations == 0
            }
            BallReport::Probes { probes, .. } => probes.iter().all(|p| p.actual == Some(p.expected)),
        }
    }
}

fn residue(q: &Rational, p: &BigInt) -> BigInt {
    let inv = q.denom().modpow(&(p - 2u32), p);
    (q.numer() * inv).mod_floor(p)
}

pub fn ball_inf_check(
    k: &PAdicQ,
    a: &Rational,
    delta: &SlotVector,
    f: &Poly<Rational>,
    trials: usize,
    seed: u64,
) -> Result<BallReport> {
    if f.is_zero() {
        return Err(Error::domain("the zero polynomial has no ball infimum to check"));
    }
    let expansion = f.taylor(a);
    if let Some(d) = integral_delta(delta) {
        let d = d.first().cloned().unwrap_or_default().to_i64().ok_or_else(|| Error::domain("delta too large"))?;
        generic_point(k, a, d, f, &expansion, trials, seed)
    } else if delta.marker().is_none() && delta.coords().keys().all(|p| p.offset == 0) {
        let x = delta.value_at(Position::new(0, 0));
        if x.is_rational() {
            return Err(Error::precondition("ball check needs an integral or irrational radius"));
        }
        probes(k, a, &x, f, &expansion)
    } else {
        Err(Error::precondition("ball check needs an integral or irrational radius"))
    }
}

fn generic_point(
    k: &PAdicQ,
    a: &Rational,
    d: i64,
    f: &Poly<Rational>,
    expansion: &[Rational],
    trials: usize,
    seed: u64,
) -> Result<BallReport> {
    let p = k.prime();
    let deg = f.degree().unwrap_or(0);
    if BigInt::from(deg) >= *p {
        return Err(Error::precondition(format!("need p > deg f, got p = {p}, deg f = {deg}")));
    }
    let terms: Vec<(usize, i64)> = expansion
        .iter()
        .enumerate()
        .filter_map(|(s, c)| k.order(c).map(|v| (s, v + s as i64 * d)))
        .collect();
    let mu = terms.iter().map(|t| t.1).min().expect("nonzero polynomial");
    // residual polynomial Σ ζ_s z^s over F_p from the terms attaining mu
    let zeta: Vec<(usize, BigInt)> = terms
        .iter()
        .filter(|t| t.1 == mu)
        .map(|&(s, _)| (s, residue(&(&expansion[s] * k.power(s as i64 * d - mu)), p)))
        .collect();
    let pu = p.to_u64().ok_or_else(|| Error::domain("prime too large"))?;
    let residual = |z: u64| -> BigInt {
        let z = BigInt::from(z);
        zeta.iter().map(|(s, c)| c * z.modpow(&BigInt::from(*s), p)).sum::<BigInt>().mod_floor(p)
    };
    let z = (1..pu)
        .chain(std::iter::once(0))
        .find(|&z| !residual(z).is_zero())
        .ok_or_else(|| Error::contract("residual polynomial vanishes on the whole residue field"))?;
    let u = k.power(d);
    let witness = a + &u * Rational::from_integer(BigInt::from(z));
    let witness_value = k.order(&f.eval(&witness));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = p.pow(3).to_i64().unwrap_or(i64::MAX / 4);
    let mut violations = 0;
    for _ in 0..trials {
        let n: i64 = rng.gen_range(-span..=span);
        let m: u64 = rng.gen_range(1..pu);
        let w = Rational::new(BigInt::from(n), BigInt::from(m));
        let b = a + &u * w;
        if let Some(v) = k.order(&f.eval(&b)) {
            if v < mu {
                violations += 1;
            }
        }
    }
    log::debug!("ball check: mu = {mu}, residue {z}, {violations} violations in {trials} trials");
    Ok(BallReport::Generic { mu, residue: z, witness, witness_value, trials, violations })
}

fn probes(k: &PAdicQ, a: &Rational, delta: &Scalar, f: &Poly<Rational>, expansion: &[Rational]) -> Result<BallReport> {
    let terms: Vec<(usize, i64)> =
        expansion.iter().enumerate().filter_map(|(s, c)| k.order(c).map(|v| (s, v))).collect();
    let value = |(s, v): (usize, i64)| Scalar::from_int(v) + delta.scale(&Rational::from_integer(BigInt::from(s)));
    let mut best = terms[0];
    for &t in &terms[1..] {
        if value(t).compare(&value(best))?.is_lt() {
            best = t;
        }
    }
    let (s0, v0) = best;
    let epsilon = terms
        .iter()
        .filter(|t| t.0 < s0)
        .map(|&(s, v)| Rational::new(BigInt::from(v - v0), BigInt::from(s0 - s)))
        .min();
    let start = delta.ceil()?.to_integer().to_i64().ok_or_else(|| Error::domain("delta too large"))?;
    let skipped = epsilon.as_ref().is_some_and(|e| Rational::from_integer(BigInt::from(start)) >= *e);
    let mut out = Vec::new();
    if !skipped {
        let mut rho = start;
        while match &epsilon {
            Some(e) => Rational::from_integer(BigInt::from(rho)) < *e,
            None => rho < start + 3,
        } {
            let b = a + k.power(rho);
            out.push(Probe { rho, expected: v0 + s0 as i64 * rho, actual: k.order(&f.eval(&b)) });
            rho += 1;
        }
    }
    Ok(BallReport::Probes { dominant: s0, epsilon, probes: out, skipped })
}
