//! Laurent polynomials in `s = q^{1/2}` with Gaussian rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::exact::{owned_binop, ExactRational};

/// `Σ coeffs[k] · s^(low + k)`; the first and last stored coefficients are
/// nonzero, and the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<ExactRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ExactRational::one())
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: ExactRational, exp: i64) -> Self {
        Self::from_coeffs(exp, vec![c])
    }

    /// `s^exp`.
    pub fn s_pow(exp: i64) -> Self {
        Self::monomial(ExactRational::one(), exp)
    }

    pub fn from_coeffs(low: i64, coeffs: Vec<ExactRational>) -> Self {
        let mut p = Self { low, coeffs };
        p.trim();
        p
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add.
    pub fn from_terms<I: IntoIterator<Item = (i64, ExactRational)>>(terms: I) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![ExactRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = &*slot + &c;
        }
        Self::from_coeffs(lo, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent present (0 for the zero polynomial).
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest exponent present.
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i64) -> ExactRational {
        let k = exp - self.low;
        if k < 0 || k as usize >= self.coeffs.len() {
            ExactRational::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &ExactRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i64, c))
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.coeffs.len() == 1)
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn leading(&self) -> &ExactRational {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn shift(&self, by: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self { low: self.low + by, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Substitutes `s ↦ s^-1`.
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { low: -self.high(), coeffs }
    }

    /// Value at `s = 1`.
    pub fn eval_one(&self) -> ExactRational {
        self.coeffs.iter().fold(ExactRational::zero(), |acc, c| &acc + c)
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        // Horner over the stored block, then the monomial offset.
        let mut acc = ExactRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        let off = if self.low >= 0 {
            x.pow(self.low as u32)
        } else {
            x.pow((-self.low) as u32).inv()
        };
        &acc * &off
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicity of `s = 1` as a root.
    pub fn root_multiplicity_at_one(&self) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let mut p = self.coeffs.clone();
        let mut mult = 0;
        loop {
            let v = p.iter().fold(ExactRational::zero(), |a, c| &a + c);
            if !v.is_zero() {
                return mult;
            }
            // synthetic division by (s - 1)
            let n = p.len();
            let mut q = vec![ExactRational::zero(); n - 1];
            let mut carry = ExactRational::zero();
            for k in (1..n).rev() {
                carry = &carry + &p[k];
                q[k - 1] = carry.clone();
            }
            p = q;
            mult += 1;
        }
    }
}

/// Division with remainder of ordinary polynomials (index = exponent).
pub(crate) fn poly_divrem(
    num: &[ExactRational],
    den: &[ExactRational],
) -> (Vec<ExactRational>, Vec<ExactRational>) {
    let dn = den.len();
    assert!(dn > 0 && !den[dn - 1].is_zero());
    if num.len() < dn {
        return (Vec::new(), num.to_vec());
    }
    let mut rem = num.to_vec();
    let inv_lead = den[dn - 1].inv();
    let mut quot = vec![ExactRational::zero(); num.len() - dn + 1];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dn - 1] * &inv_lead;
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            if !d.is_zero() {
                rem[k + j] = &rem[k + j] - &(&c * d);
            }
        }
        quot[k] = c;
    }
    rem.truncate(dn - 1);
    while rem.last().is_some_and(|c| c.is_zero()) {
        rem.pop();
    }
    (quot, rem)
}

fn make_monic(p: &mut [ExactRational]) {
    let inv = p.last().unwrap().inv();
    if inv.is_one() {
        return;
    }
    for c in p.iter_mut() {
        *c = &*c * &inv;
    }
}

/// Monic gcd of ordinary polynomials.
pub(crate) fn poly_gcd(a: &[ExactRational], b: &[ExactRational]) -> Vec<ExactRational> {
    let (mut a, mut b) = if a.len() >= b.len() { (a.to_vec(), b.to_vec()) } else { (b.to_vec(), a.to_vec()) };
    if b.is_empty() {
        make_monic(&mut a);
        return a;
    }
    make_monic(&mut b);
    loop {
        if b.len() == 1 {
            return b;
        }
        let (_, mut r) = poly_divrem(&a, &b);
        if r.is_empty() {
            return b;
        }
        make_monic(&mut r);
        a = b;
        b = r;
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                _ if c.is_one() => write!(f, "s^{e}")?,
                _ => write!(f, "{c}*s^{e}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(o.low);
        let hi = self.high().max(o.high());
        let mut coeffs = vec![ExactRational::zero(); (hi - lo + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - lo) as usize + k] = c.clone();
        }
        for (k, c) in o.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(o.low - lo) as usize + k];
            *slot = &*slot + c;
        }
        LaurentPoly::from_coeffs(lo, coeffs)
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![ExactRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        LaurentPoly::from_coeffs(self.low + o.low, coeffs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

owned_binop!(LaurentPoly, Add, add);
owned_binop!(LaurentPoly, Sub, sub);
owned_binop!(LaurentPoly, Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(low: i64, cs: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(low, cs.iter().map(|&c| ExactRational::from_int(c)).collect())
    }

    #[test]
    fn trimming_keeps_canonical_form() {
        let a = p(-2, &[0, 1, 2, 0]);
        assert_eq!(a.low(), -1);
        assert_eq!(a.high(), 0);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn gcd_of_cyclotomic_products() {
        // (s^2 - 1)(s + 2) and (s^2 - 1)(s - 3)
        let a = (p(0, &[-1, 0, 1]) * p(0, &[2, 1])).coeffs().to_vec();
        let b = (p(0, &[-1, 0, 1]) * p(0, &[-3, 1])).coeffs().to_vec();
        assert_eq!(poly_gcd(&a, &b), p(0, &[-1, 0, 1]).coeffs().to_vec());
    }

    #[test]
    fn root_multiplicity() {
        let a = p(0, &[-1, 1]).pow(3) * p(0, &[1, 1]);
        assert_eq!(a.root_multiplicity_at_one(), 3);
        assert_eq!(p(0, &[1, 1]).root_multiplicity_at_one(), 0);
    }
}
