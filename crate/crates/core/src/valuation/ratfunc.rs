use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use crate::scalars::Rational;

/// Element of Q(t) as a reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly<Rational>,
    den: Poly<Rational>,
}

impl RatFunc {
    pub fn new(num: Poly<Rational>, den: Poly<Rational>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero());
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let l = d.leading().expect("nonzero").recip();
        Some(RatFunc { num: n.scale(&l), den: d.scale(&l) })
    }

    pub fn from_poly(p: Poly<Rational>) -> Self {
        RatFunc { num: p, den: Poly::constant(Rational::one()) }
    }

    pub fn rational(q: Rational) -> Self {
        Self::from_poly(Poly::constant(q))
    }

    pub fn t() -> Self {
        Self::from_poly(Poly::monomial(Rational::one(), 1))
    }

    pub fn num(&self) -> &Poly<Rational> {
        &self.num
    }

    pub fn den(&self) -> &Poly<Rational> {
        &self.den
    }

    pub fn inv(&self) -> Option<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc * self.clone())
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den).expect("nonzero denominator");
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::new(n, &self.den * &o.den).expect("nonzero denominator")
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: RatFunc) -> RatFunc {
        self + (-o)
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den }
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominator")
    }
}

impl Div for RatFunc {
    type Output = Option<RatFunc>;
    fn div(self, o: RatFunc) -> Option<RatFunc> {
        o.inv().map(|i| self * i)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num.fmt_in("t");
        if self.den.degree() == Some(0) {
            return f.write_str(&n);
        }
        let d = self.den.fmt_in("t");
        let wrap = |s: String| if s.contains(' ') || s.contains('*') || s.contains('/') { format!("({s})") } else { s };
        write!(f, "{}/{}", wrap(n), wrap(d))
    }
}
