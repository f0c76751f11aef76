//! Rational functions in `s` in gcd-reduced canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::exact::{owned_binop, ExactRational};
use super::laurent::{poly_divrem, poly_gcd, LaurentPoly};

/// `num / den` where `den` is an ordinary polynomial with nonzero constant
/// term and leading coefficient one, coprime to `num`. Powers of `s` live in
/// `num`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let shift = num.low() - den.low();
        let n0 = num.shift(-num.low());
        let d0 = den.shift(-den.low());
        let (mut n1, mut d1) = if d0.is_constant() {
            (n0.coeffs().to_vec(), d0.coeffs().to_vec())
        } else if n0.is_constant() {
            (n0.coeffs().to_vec(), d0.coeffs().to_vec())
        } else {
            let g = poly_gcd(n0.coeffs(), d0.coeffs());
            if g.len() == 1 {
                (n0.coeffs().to_vec(), d0.coeffs().to_vec())
            } else {
                (poly_divrem(n0.coeffs(), &g).0, poly_divrem(d0.coeffs(), &g).0)
            }
        };
        let inv = d1.last().unwrap().inv();
        if !inv.is_one() {
            for c in n1.iter_mut().chain(d1.iter_mut()) {
                *c = &*c * &inv;
            }
        }
        Self {
            num: LaurentPoly::from_coeffs(shift, n1),
            den: LaurentPoly::from_coeffs(0, d1),
        }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn shift(&self, by: i64) -> Self {
        Self { num: self.num.shift(by), den: self.den.clone() }
    }

    /// Substitutes `s ↦ s^-1`.
    pub fn invert_variable(&self) -> Self {
        Self::new(self.num.invert_variable(), self.den.invert_variable())
    }

    /// Value at `s = 1`, or `None` when the denominator vanishes there.
    pub fn eval_one(&self) -> Option<ExactRational> {
        let d = self.den.eval_one();
        if d.is_zero() {
            None
        } else {
            Some(&self.num.eval_one() / &d)
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return RatFunc::from_poly(&self.num + &o.num);
            }
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        RatFunc::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(&self.num * &o.num);
        }
        if self.num.is_monomial() && o.den.is_one() && o.num.is_monomial() {
            return RatFunc { num: &self.num * &o.num, den: self.den.clone() };
        }
        if o.num.is_monomial() && self.den.is_one() && self.num.is_monomial() {
            return RatFunc { num: &self.num * &o.num, den: o.den.clone() };
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        self * &o.inv()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

owned_binop!(RatFunc, Add, add);
owned_binop!(RatFunc, Sub, sub);
owned_binop!(RatFunc, Mul, mul);
owned_binop!(RatFunc, Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(low: i64, cs: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(low, cs.iter().map(|&c| ExactRational::from_int(c)).collect())
    }

    #[test]
    fn canonical_denominator() {
        // (s^4 - 1) / (2 s^2 - 2 s^4)  =  -(s^2 + 1) / (2 s^2)
        let r = RatFunc::new(lp(0, &[-1, 0, 0, 0, 1]), lp(2, &[2, 0, -2]));
        assert!(r.den().is_one());
        assert_eq!(r.num(), &lp(-2, &[-1, 0, -1]).scale(&ExactRational::from_frac(1, 2)));
    }

    #[test]
    fn sum_of_inverses_reduces() {
        let a = RatFunc::new(lp(0, &[1]), lp(0, &[-1, 1]));
        let b = RatFunc::new(lp(0, &[1]), lp(0, &[1, 1]));
        // 1/(s-1) + 1/(s+1) = 2s/(s^2-1)
        assert_eq!(&a + &b, RatFunc::new(lp(1, &[2]), lp(0, &[-1, 0, 1])));
        assert!((&(&a + &b) - &(&a + &b)).is_zero());
        assert!((&a / &a).is_one());
    }
}
