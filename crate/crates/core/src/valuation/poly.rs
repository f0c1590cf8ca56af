use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalars::Rational;

/// Coefficient ring of a polynomial: any commutative ring with owned arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Ring> Poly<E> {
    pub fn new(mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: E) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: E, n: usize) -> Self {
        let mut coeffs = vec![E::zero(); n];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// x - a
    pub fn linear(a: E) -> Self {
        Self::new(vec![-a, E::one()])
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> E {
        self.coeffs.get(k).cloned().unwrap_or_else(E::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn eval(&self, a: &E) -> E {
        self.coeffs.iter().rev().fold(E::zero(), |acc, c| acc * a.clone() + c.clone())
    }

    pub fn scale(&self, c: &E) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Coefficients of the expansion f = Σ a_s (x - a)^s.
    pub fn taylor(&self, a: &E) -> Vec<E> {
        let step = Poly::new(vec![a.clone(), E::one()]);
        let mut g = Poly::zero();
        for c in self.coeffs.iter().rev() {
            g = &(&g * &step) + &Poly::constant(c.clone());
        }
        g.coeffs
    }

    /// Inverse of `taylor`: Σ a_s (x - a)^s as a polynomial in x.
    pub fn from_expansion(a: &E, expansion: &[E]) -> Self {
        let step = Poly::linear(a.clone());
        let mut g = Poly::zero();
        for c in expansion.iter().rev() {
            g = &(&g * &step) + &Poly::constant(c.clone());
        }
        g
    }

    pub fn fmt_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut cs = c.to_string();
            let neg = cs.starts_with('-') && !needs_parens(&cs[1..]);
            if neg {
                cs.remove(0);
            }
            if needs_parens(&cs) {
                cs = format!("({cs})");
            }
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let power = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            match (k, cs.as_str()) {
                (0, _) => out.push_str(&cs),
                (_, "1") => out.push_str(&power),
                _ => out.push_str(&format!("{cs}*{power}")),
            }
        }
        out
    }
}

fn needs_parens(s: &str) -> bool {
    s.contains(' ') || s.contains('+') || s.char_indices().any(|(i, ch)| ch == '-' && i > 0)
}

impl<E: Ring> Add for &Poly<E> {
    type Output = Poly<E>;
    fn add(self, o: &Poly<E>) -> Poly<E> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<E: Ring> Sub for &Poly<E> {
    type Output = Poly<E>;
    fn sub(self, o: &Poly<E>) -> Poly<E> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<E: Ring> Neg for &Poly<E> {
    type Output = Poly<E>;
    fn neg(self) -> Poly<E> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<E: Ring> Mul for &Poly<E> {
    type Output = Poly<E>;
    fn mul(self, o: &Poly<E>) -> Poly<E> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![E::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<E: Ring> fmt::Display for Poly<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_in("x"))
    }
}

impl Poly<Rational> {
    pub fn div_rem(&self, d: &Poly<Rational>) -> (Poly<Rational>, Poly<Rational>) {
        let dl = d.leading().expect("division by the zero polynomial").clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap().clone() / dl.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly<Rational> {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    pub fn gcd(&self, other: &Poly<Rational>) -> Poly<Rational> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
}
