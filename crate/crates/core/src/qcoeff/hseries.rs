//! Truncated Laurent series in `h` (with `q = e^{ih}`) over `Q(i)[√2]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::exact::{owned_binop, ExactRational};
use super::laurent::LaurentPoly;
use super::QError;

/// `a + b·t` with `t² = 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TRational {
    pub a: ExactRational,
    pub b: ExactRational,
}

impl TRational {
    pub fn new(a: ExactRational, b: ExactRational) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::new(ExactRational::zero(), ExactRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(ExactRational::one())
    }

    pub fn rational(a: ExactRational) -> Self {
        Self::new(a, ExactRational::zero())
    }

    pub fn t() -> Self {
        Self::new(ExactRational::zero(), ExactRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, k: &ExactRational) -> Self {
        Self::new(&self.a * k, &self.b * k)
    }

    pub fn inv(&self) -> Self {
        let two = ExactRational::from_int(2);
        let norm = &(&self.a * &self.a) - &(&two * &(&self.b * &self.b));
        let k = norm.inv();
        Self::new(&self.a * &k, -(&self.b * &k))
    }
}

impl fmt::Display for TRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*t", self.b),
            (false, false) => write!(f, "({} + {}*t)", self.a, self.b),
        }
    }
}

impl<'a> Add<&'a TRational> for &'a TRational {
    type Output = TRational;
    fn add(self, o: &TRational) -> TRational {
        TRational::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl<'a> Sub<&'a TRational> for &'a TRational {
    type Output = TRational;
    fn sub(self, o: &TRational) -> TRational {
        TRational::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl<'a> Mul<&'a TRational> for &'a TRational {
    type Output = TRational;
    fn mul(self, o: &TRational) -> TRational {
        let two = ExactRational::from_int(2);
        TRational::new(
            &(&self.a * &o.a) + &(&two * &(&self.b * &o.b)),
            &(&self.a * &o.b) + &(&self.b * &o.a),
        )
    }
}

impl Neg for &TRational {
    type Output = TRational;
    fn neg(self) -> TRational {
        TRational::new(-&self.a, -&self.b)
    }
}

owned_binop!(TRational, Add, add);
owned_binop!(TRational, Sub, sub);
owned_binop!(TRational, Mul, mul);

/// `Σ_{k=val}^{order} coeffs[k-val]·h^k + O(h^{order+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSeries {
    val: i64,
    coeffs: Vec<TRational>,
    order: i64,
}

impl HSeries {
    pub fn new(val: i64, coeffs: Vec<TRational>, order: i64) -> Self {
        let mut coeffs = coeffs;
        coeffs.truncate((order - val + 1).max(0) as usize);
        while coeffs.len() < (order - val + 1).max(0) as usize {
            coeffs.push(TRational::zero());
        }
        let mut s = Self { val, coeffs, order };
        s.normalize();
        s
    }

    pub fn zero(order: i64) -> Self {
        Self { val: order + 1, coeffs: Vec::new(), order }
    }

    pub fn constant(c: TRational, order: i64) -> Self {
        Self::new(0, vec![c], order)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.val = self.order + 1;
        }
    }

    /// Exponent of the first nonzero term (or `order + 1` when none is known).
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero_to_order(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `h^k`; `None` beyond the known order.
    pub fn coeff(&self, k: i64) -> Option<TRational> {
        if k > self.order {
            None
        } else if k < self.val {
            Some(TRational::zero())
        } else {
            Some(self.coeffs[(k - self.val) as usize].clone())
        }
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        Self::new(self.val, self.coeffs.clone(), order)
    }

    pub fn scale(&self, k: &TRational) -> Self {
        Self::new(self.val, self.coeffs.iter().map(|c| c * k).collect(), self.order)
    }

    pub fn div(&self, o: &HSeries) -> Result<HSeries, QError> {
        if o.coeffs.is_empty() {
            return Err(QError::SeriesDivision);
        }
        let rel = (self.order - self.val).min(o.order - o.val);
        let val = self.val - o.val;
        let n = (rel + 1).max(0) as usize;
        let lead_inv = o.coeffs[0].inv();
        let mut inv = vec![TRational::zero(); n];
        for k in 0..n {
            let mut acc = if k == 0 { TRational::one() } else { TRational::zero() };
            for j in 1..=k {
                if let Some(oj) = o.coeffs.get(j) {
                    acc = &acc - &(oj * &inv[k - j]);
                }
            }
            inv[k] = &acc * &lead_inv;
        }
        let mut out = vec![TRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            for (j, b) in inv.iter().enumerate().take(n - i) {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Ok(HSeries::new(val, out, val + rel))
    }

    /// Square root of a series with leading term `1·h^0`.
    pub fn sqrt_unit(&self) -> HSeries {
        assert!(self.val == 0 && self.coeffs[0] == TRational::one());
        let n = self.coeffs.len();
        let half = ExactRational::from_frac(1, 2);
        let mut g = vec![TRational::zero(); n];
        g[0] = TRational::one();
        for k in 1..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..k {
                acc = &acc - &(&g[j] * &g[k - j]);
            }
            g[k] = acc.scale(&half);
        }
        HSeries::new(0, g, self.order)
    }

    /// Expansion of a Laurent polynomial in `s = e^{ih/2}` through `h^order`.
    pub fn from_laurent(p: &LaurentPoly, order: i64) -> HSeries {
        let mut coeffs = vec![TRational::zero(); (order + 1).max(0) as usize];
        let mut fact = BigInt::one();
        for (j, slot) in coeffs.iter_mut().enumerate() {
            if j > 0 {
                fact *= BigInt::from(j as u64);
            }
            // Σ_e c_e (i e / 2)^j / j!
            let mut sum = ExactRational::zero();
            for (e, c) in p.terms() {
                let mag = BigRational::new(BigInt::from(e).pow(j as u32), BigInt::from(2).pow(j as u32) * &fact);
                let ipow = match j % 4 {
                    0 => ExactRational::new(mag, BigRational::zero()),
                    1 => ExactRational::new(BigRational::zero(), mag),
                    2 => ExactRational::new(-mag, BigRational::zero()),
                    _ => ExactRational::new(BigRational::zero(), -mag),
                };
                sum = &sum + &(c * &ipow);
            }
            *slot = TRational::rational(sum);
        }
        HSeries::new(0, coeffs, order)
    }
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, "{}*h^{} + ", c, self.val + k as i64)?;
            }
        }
        write!(f, "O(h^{})", self.order + 1)
    }
}

impl<'a> Add<&'a HSeries> for &'a HSeries {
    type Output = HSeries;
    fn add(self, o: &HSeries) -> HSeries {
        let order = self.order.min(o.order);
        let val = self.val.min(o.val).min(order + 1);
        let n = (order - val + 1).max(0) as usize;
        let mut coeffs = vec![TRational::zero(); n];
        for src in [self, o] {
            for (k, c) in src.coeffs.iter().enumerate() {
                let idx = src.val + k as i64 - val;
                if (idx as usize) < n {
                    coeffs[idx as usize] = &coeffs[idx as usize] + c;
                }
            }
        }
        HSeries::new(val, coeffs, order)
    }
}

impl<'a> Sub<&'a HSeries> for &'a HSeries {
    type Output = HSeries;
    fn sub(self, o: &HSeries) -> HSeries {
        self + &o.scale(&TRational::rational(ExactRational::from_int(-1)))
    }
}

impl<'a> Mul<&'a HSeries> for &'a HSeries {
    type Output = HSeries;
    fn mul(self, o: &HSeries) -> HSeries {
        let val = self.val + o.val;
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            let order = (self.order + o.val).min(o.order + self.val);
            return HSeries::zero(order);
        }
        let rel = (self.order - self.val).min(o.order - o.val);
        let n = (rel + 1) as usize;
        let mut coeffs = vec![TRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        HSeries::new(val, coeffs, val + rel)
    }
}

owned_binop!(HSeries, Add, add);
owned_binop!(HSeries, Sub, sub);
owned_binop!(HSeries, Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_of_s_squared() {
        // s^2 = q = e^{ih} = 1 + ih - h^2/2 - ...
        let s = HSeries::from_laurent(&LaurentPoly::s_pow(2), 3);
        assert_eq!(s.coeff(0), Some(TRational::one()));
        assert_eq!(s.coeff(1), Some(TRational::rational(ExactRational::i())));
        assert_eq!(s.coeff(2), Some(TRational::rational(ExactRational::from_frac(-1, 2))));
        assert_eq!(s.coeff(4), None);
    }

    #[test]
    fn division_creates_poles() {
        let one = HSeries::constant(TRational::one(), 4);
        let h = HSeries::new(1, vec![TRational::one()], 5);
        let q = one.div(&h).unwrap();
        assert_eq!(q.valuation(), -1);
        assert_eq!(q.coeff(-1), Some(TRational::one()));
    }
}
