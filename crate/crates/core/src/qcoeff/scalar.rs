//! The coefficient field `Q(i)(s)[t, r]` with `t² = 2` and `r² = s² + s⁻²`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::exact::{owned_binop, ExactRational};
use super::laurent::LaurentPoly;
use super::ratfunc::RatFunc;

/// Components along the basis `1, t, r, t·r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    c: [RatFunc; 4],
}

const ONE: usize = 0;
const T: usize = 1;
const R: usize = 2;
const TR: usize = 3;

fn r_squared() -> RatFunc {
    RatFunc::from_poly(LaurentPoly::from_terms([
        (2, ExactRational::one()),
        (-2, ExactRational::one()),
    ]))
}

impl Scalar {
    pub fn from_components(c: [RatFunc; 4]) -> Self {
        Self { c }
    }

    pub fn zero() -> Self {
        Self::from_rat(RatFunc::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(RatFunc::one())
    }

    pub fn from_rat(r: RatFunc) -> Self {
        Self { c: [r, RatFunc::zero(), RatFunc::zero(), RatFunc::zero()] }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self::from_rat(RatFunc::from_poly(p))
    }

    pub fn from_exact(c: ExactRational) -> Self {
        Self::from_rat(RatFunc::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::from_exact(ExactRational::from_int(n))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Self::from_exact(ExactRational::from_frac(num, den))
    }

    pub fn i() -> Self {
        Self::from_exact(ExactRational::i())
    }

    /// `s^e`, i.e. `q^{e/2}`.
    pub fn s_pow(e: i64) -> Self {
        Self::from_poly(LaurentPoly::s_pow(e))
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::s_pow(2 * e)
    }

    /// √2.
    pub fn t() -> Self {
        let mut c = Self::zero().c;
        c[T] = RatFunc::one();
        Self { c }
    }

    /// √[2] = √(q + q⁻¹).
    pub fn r() -> Self {
        let mut c = Self::zero().c;
        c[R] = RatFunc::one();
        Self { c }
    }

    pub fn components(&self) -> &[RatFunc; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(RatFunc::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[ONE].is_one() && self.c[1..].iter().all(RatFunc::is_zero)
    }

    /// True when the `t`, `r` and `t·r` components vanish.
    pub fn is_rational_sector(&self) -> bool {
        self.c[1..].iter().all(RatFunc::is_zero)
    }

    pub fn rational_part(&self) -> &RatFunc {
        &self.c[ONE]
    }

    fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        Self { c: [f(&self.c[0]), f(&self.c[1]), f(&self.c[2]), f(&self.c[3])] }
    }

    pub fn scale_exact(&self, k: &ExactRational) -> Self {
        self.map(|x| x.scale(k))
    }

    /// Multiplies by `s^e`.
    pub fn shift_s(&self, e: i64) -> Self {
        self.map(|x| x.shift(e))
    }

    fn conj_t(&self) -> Self {
        Self { c: [self.c[ONE].clone(), -&self.c[T], self.c[R].clone(), -&self.c[TR]] }
    }

    fn conj_r(&self) -> Self {
        Self { c: [self.c[ONE].clone(), self.c[T].clone(), -&self.c[R], -&self.c[TR]] }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero scalar");
        if self.is_rational_sector() {
            return Self::from_rat(self.c[ONE].inv());
        }
        let ct = self.conj_t();
        let y = self * &ct;
        let cr = y.conj_r();
        let norm = &y * &cr;
        debug_assert!(norm.is_rational_sector());
        let k = Self::from_rat(norm.c[ONE].inv());
        &(&ct * &cr) * &k
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Substitutes `s ↦ s⁻¹`; `r` is invariant since `[2]` is.
    pub fn invert_variable(&self) -> Self {
        self.map(RatFunc::invert_variable)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["", "*t", "*r", "*t*r"];
        let mut first = true;
        for (k, comp) in self.c.iter().enumerate() {
            if comp.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == ONE && self.c[1..].iter().all(RatFunc::is_zero) {
                write!(f, "{comp}")?;
            } else {
                write!(f, "[{comp}]{}", names[k])?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar {
            c: [
                &self.c[0] + &o.c[0],
                &self.c[1] + &o.c[1],
                &self.c[2] + &o.c[2],
                &self.c[3] + &o.c[3],
            ],
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar {
            c: [
                &self.c[0] - &o.c[0],
                &self.c[1] - &o.c[1],
                &self.c[2] - &o.c[2],
                &self.c[3] - &o.c[3],
            ],
        }
    }
}

fn acc(terms: &[(&RatFunc, &RatFunc)]) -> RatFunc {
    let mut out = RatFunc::zero();
    for (a, b) in terms {
        if !a.is_zero() && !b.is_zero() {
            out = &out + &(*a * *b);
        }
    }
    out
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let a = &self.c;
        let b = &o.c;
        if self.is_rational_sector() {
            return o.map(|x| &a[ONE] * x);
        }
        if o.is_rational_sector() {
            return self.map(|x| x * &b[ONE]);
        }
        let two = RatFunc::constant(ExactRational::from_int(2));
        let rr = r_squared();
        let c0 = &(&acc(&[(&a[ONE], &b[ONE])]) + &(&two * &acc(&[(&a[T], &b[T])])))
            + &(&rr * &(&acc(&[(&a[R], &b[R])]) + &(&two * &acc(&[(&a[TR], &b[TR])]))));
        let c1 = &acc(&[(&a[ONE], &b[T]), (&a[T], &b[ONE])])
            + &(&rr * &acc(&[(&a[R], &b[TR]), (&a[TR], &b[R])]));
        let c2 = &acc(&[(&a[ONE], &b[R]), (&a[R], &b[ONE])])
            + &(&two * &acc(&[(&a[T], &b[TR]), (&a[TR], &b[T])]));
        let c3 = acc(&[(&a[ONE], &b[TR]), (&a[TR], &b[ONE]), (&a[T], &b[R]), (&a[R], &b[T])]);
        Scalar { c: [c0, c1, c2, c3] }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.map(|x| -x)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

owned_binop!(Scalar, Add, add);
owned_binop!(Scalar, Sub, sub);
owned_binop!(Scalar, Mul, mul);
owned_binop!(Scalar, Div, div);

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| &a + &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surd_relations() {
        assert_eq!(&Scalar::t() * &Scalar::t(), Scalar::int(2));
        let two = Scalar::q_pow(1) + Scalar::q_pow(-1);
        assert_eq!(&Scalar::r() * &Scalar::r(), two);
        assert_eq!(Scalar::t().inv(), Scalar::t() * Scalar::frac(1, 2));
    }

    #[test]
    fn inverse_of_mixed_element() {
        let x = Scalar::one() + Scalar::t() * Scalar::s_pow(3) + Scalar::r() * Scalar::i()
            + Scalar::t() * Scalar::r() * Scalar::s_pow(-1);
        assert!((&x * &x.inv()).is_one());
    }
}
