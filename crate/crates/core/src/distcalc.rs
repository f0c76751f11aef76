//! Two-point formal distributions `Σ cₙ xⁿ` with `x = w/z`, rational exchange
//! kernels and their two region expansions.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

use crate::qcoeff::Scalar;

pub const DEFAULT_WINDOW: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistError {
    #[error("window must be at least 1, got {0}")]
    EmptyWindow(usize),
    #[error("window mismatch: {0} vs {1}")]
    WindowMismatch(usize, usize),
    #[error("kernel cannot be expanded: {0}")]
    NonExpandable(&'static str),
}

/// Modes `-N..=N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeWindow(usize);

impl ModeWindow {
    pub fn new(n: usize) -> Result<Self, DistError> {
        if n == 0 {
            Err(DistError::EmptyWindow(n))
        } else {
            Ok(Self(n))
        }
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn modes(self) -> impl Iterator<Item = i64> {
        let n = self.0 as i64;
        -n..=n
    }

    pub fn nonzero_modes(self) -> impl Iterator<Item = i64> {
        self.modes().filter(|&n| n != 0)
    }
}

impl Default for ModeWindow {
    fn default() -> Self {
        Self(DEFAULT_WINDOW)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dist2 {
    window: usize,
    coeffs: Vec<Scalar>,
}

impl Dist2 {
    pub fn zero(w: ModeWindow) -> Self {
        Self { window: w.0, coeffs: vec![Scalar::zero(); 2 * w.0 + 1] }
    }

    /// `δ(x) = Σ xⁿ`.
    pub fn delta(w: ModeWindow) -> Self {
        Self { window: w.0, coeffs: vec![Scalar::one(); 2 * w.0 + 1] }
    }

    /// The constant function `1`, supported at `n = 0`.
    pub fn unit(w: ModeWindow) -> Self {
        Self::from_fn(w, |n| if n == 0 { Scalar::one() } else { Scalar::zero() })
    }

    pub fn from_fn(w: ModeWindow, f: impl Fn(i64) -> Scalar) -> Self {
        Self { window: w.0, coeffs: w.modes().map(f).collect() }
    }

    pub fn window(&self) -> ModeWindow {
        ModeWindow(self.window)
    }

    pub fn coeff(&self, n: i64) -> &Scalar {
        &self.coeffs[(n + self.window as i64) as usize]
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        let n = self.window as i64;
        self.coeffs.iter().enumerate().map(move |(k, c)| (k as i64 - n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn map(&self, f: impl Fn(i64, &Scalar) -> Scalar) -> Self {
        Self { window: self.window, coeffs: self.coeffs().map(|(n, c)| f(n, c)).collect() }
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_one() {
            return self.clone();
        }
        self.map(|_, c| c * k)
    }

    /// Exchange of `z` and `w`: `cₙ ↦ c₋ₙ`.
    pub fn reflect(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { window: self.window, coeffs }
    }

    /// Residue pairing of translation-covariant distributions: diagonal in modes.
    pub fn pair(&self, other: &Dist2) -> Result<Dist2, DistError> {
        self.check_window(other)?;
        Ok(Self {
            window: self.window,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).collect(),
        })
    }

    /// `cₙ ↦ q^{a|n|} cₙ`.
    pub fn weight_abs(&self, a: i64) -> Self {
        if a == 0 {
            return self.clone();
        }
        self.map(|n, c| c.shift_s(2 * a * n.abs()))
    }

    /// Restricts to a smaller window.
    pub fn restrict(&self, w: ModeWindow) -> Self {
        assert!(w.0 <= self.window);
        Self::from_fn(w, |n| self.coeff(n).clone())
    }

    pub fn is_odd(&self) -> bool {
        self.window().modes().all(|n| *self.coeff(-n) == -self.coeff(n))
    }

    pub fn is_even(&self) -> bool {
        self.window().modes().all(|n| self.coeff(-n) == self.coeff(n))
    }

    /// First mode (in increasing |n|, negative first) where the two differ.
    pub fn first_difference(&self, other: &Dist2, skip_zero: bool) -> Option<i64> {
        let n = self.window.min(other.window) as i64;
        (0..=n)
            .flat_map(|k| if k == 0 { vec![0] } else { vec![-k, k] })
            .filter(|&m| !(skip_zero && m == 0))
            .find(|&m| self.coeff(m) != other.coeff(m))
    }

    fn check_window(&self, other: &Dist2) -> Result<(), DistError> {
        if self.window != other.window {
            Err(DistError::WindowMismatch(self.window, other.window))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Dist2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (n, c)) in self.coeffs().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{n}: {c}")?;
        }
        write!(f, "]")
    }
}

impl<'a> Add<&'a Dist2> for &'a Dist2 {
    type Output = Dist2;
    fn add(self, o: &Dist2) -> Dist2 {
        assert_eq!(self.window, o.window, "window mismatch in Dist2 addition");
        Dist2 { window: self.window, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a Dist2> for &'a Dist2 {
    type Output = Dist2;
    fn sub(self, o: &Dist2) -> Dist2 {
        assert_eq!(self.window, o.window, "window mismatch in Dist2 subtraction");
        Dist2 { window: self.window, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Dist2 {
    type Output = Dist2;
    fn neg(self) -> Dist2 {
        self.map(|_, c| -c)
    }
}

/// `c · x^m · P(x) / Q(x)` with polynomial coefficients indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatKernel {
    pub c: Scalar,
    pub m: i64,
    pub num: Vec<Scalar>,
    pub den: Vec<Scalar>,
}

fn trim(p: &mut Vec<Scalar>) {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if !x.is_zero() && !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

impl RatKernel {
    pub fn new(c: Scalar, m: i64, num: Vec<Scalar>, den: Vec<Scalar>) -> Result<Self, DistError> {
        let mut k = Self { c, m, num, den };
        trim(&mut k.num);
        trim(&mut k.den);
        if k.den.is_empty() {
            return Err(DistError::NonExpandable("zero denominator"));
        }
        k.factor_monomials();
        Ok(k)
    }

    pub fn constant(c: Scalar) -> Self {
        Self { c, m: 0, num: vec![Scalar::one()], den: vec![Scalar::one()] }
    }

    pub fn monomial(c: Scalar, m: i64) -> Self {
        Self { c, m, num: vec![Scalar::one()], den: vec![Scalar::one()] }
    }

    /// `c · x^m · Π(1 - a x) / Π(1 - b x)` from the roots' reciprocals.
    pub fn from_factors(c: Scalar, m: i64, num_roots: &[Scalar], den_roots: &[Scalar]) -> Self {
        let lin = |a: &Scalar| vec![Scalar::one(), -a];
        let num = num_roots.iter().fold(vec![Scalar::one()], |acc, a| poly_mul(&acc, &lin(a)));
        let den = den_roots.iter().fold(vec![Scalar::one()], |acc, a| poly_mul(&acc, &lin(a)));
        Self::new(c, m, num, den).expect("factor kernel has a nonzero denominator")
    }

    fn factor_monomials(&mut self) {
        let lead_num = self.num.iter().take_while(|c| c.is_zero()).count();
        let lead_den = self.den.iter().take_while(|c| c.is_zero()).count();
        self.num.drain(..lead_num);
        self.den.drain(..lead_den);
        self.m += lead_num as i64 - lead_den as i64;
        if self.num.is_empty() {
            self.c = Scalar::zero();
            self.num = vec![Scalar::one()];
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }

    pub fn mul(&self, o: &RatKernel) -> RatKernel {
        RatKernel::new(&self.c * &o.c, self.m + o.m, poly_mul(&self.num, &o.num), poly_mul(&self.den, &o.den))
            .expect("product of valid kernels")
    }

    /// `K(1/x)` rewritten as a kernel in `x`.
    pub fn reciprocal(&self) -> RatKernel {
        let dp = self.num.len() as i64 - 1;
        let dq = self.den.len() as i64 - 1;
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        num.reverse();
        den.reverse();
        RatKernel::new(self.c.clone(), -(self.m + dp - dq), num, den).expect("reciprocal of valid kernel")
    }

    /// Expansion around `x = 0` (the region `|z| > |w|`).
    pub fn expand_inner(&self, w: ModeWindow) -> Result<Dist2, DistError> {
        let q0 = &self.den[0];
        if q0.is_zero() {
            return Err(DistError::NonExpandable("Q(0) = 0 after monomial factoring"));
        }
        let n = w.size() as i64;
        let need = n - self.m;
        let mut out = Dist2::zero(w);
        if need < 0 || self.c.is_zero() {
            return Ok(out);
        }
        let q0_inv = q0.inv();
        let mut a: Vec<Scalar> = Vec::with_capacity(need as usize + 1);
        for j in 0..=need as usize {
            let mut acc = self.num.get(j).cloned().unwrap_or_else(Scalar::zero);
            for (i, qi) in self.den.iter().enumerate().skip(1) {
                if i > j {
                    break;
                }
                if !qi.is_zero() && !a[j - i].is_zero() {
                    acc = &acc - &(qi * &a[j - i]);
                }
            }
            a.push(&acc * &q0_inv);
        }
        for (j, aj) in a.iter().enumerate() {
            let mode = j as i64 + self.m;
            if mode >= -n && mode <= n {
                out.coeffs[(mode + n) as usize] = &self.c * aj;
            }
        }
        Ok(out)
    }

    /// Expansion around `x = ∞` (the region `|w| > |z|`).
    pub fn expand_outer(&self, w: ModeWindow) -> Result<Dist2, DistError> {
        Ok(self.reciprocal().expand_inner(w)?.reflect())
    }

    /// Inner minus outer expansion: a delta-supported distribution.
    pub fn region_difference(&self, w: ModeWindow) -> Result<Dist2, DistError> {
        Ok(&self.expand_inner(w)? - &self.expand_outer(w)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcoeff::{qint, Scalar};

    fn w() -> ModeWindow {
        ModeWindow::new(8).unwrap()
    }

    fn step(n: i64, cond: bool, v: Scalar) -> Scalar {
        let _ = n;
        if cond {
            v
        } else {
            Scalar::zero()
        }
    }

    #[test]
    fn geometric_series_both_regions() {
        let k = RatKernel::from_factors(Scalar::one(), 0, &[], &[Scalar::one()]);
        let inner = k.expand_inner(w()).unwrap();
        assert_eq!(inner, Dist2::from_fn(w(), |n| step(n, n >= 0, Scalar::one())));
        let outer = k.expand_outer(w()).unwrap();
        assert_eq!(outer, Dist2::from_fn(w(), |n| step(n, n <= -1, Scalar::int(-1))));
        assert_eq!(k.region_difference(w()).unwrap(), Dist2::delta(w()));
    }

    #[test]
    fn shifted_geometric_series() {
        let q = Scalar::q_pow(1);
        let k = RatKernel::from_factors(Scalar::one(), 0, &[], &[q.clone()]);
        let inner = k.expand_inner(w()).unwrap();
        assert_eq!(inner, Dist2::from_fn(w(), |n| step(n, n >= 0, Scalar::q_pow(n))));
        assert_eq!(k.region_difference(w()).unwrap(), Dist2::from_fn(w(), Scalar::q_pow));
    }

    #[test]
    fn qint_kernel() {
        let k = RatKernel::from_factors(Scalar::one(), 1, &[], &[Scalar::q_pow(1), Scalar::q_pow(-1)]);
        let inner = k.expand_inner(w()).unwrap();
        assert_eq!(inner, Dist2::from_fn(w(), |n| step(n, n >= 1, qint(n))));
        let outer = k.expand_outer(w()).unwrap();
        // the outer tail carries [|n|] on negative modes
        assert_eq!(outer, Dist2::from_fn(w(), |n| step(n, n <= -1, qint(-n))));
        assert_eq!(k.region_difference(w()).unwrap(), Dist2::from_fn(w(), qint));
    }

    #[test]
    fn polynomial_kernels_have_no_region_difference() {
        let k = RatKernel::new(Scalar::int(3), -2, vec![Scalar::one(), Scalar::q_pow(2), Scalar::i()], vec![Scalar::one()]).unwrap();
        assert!(k.region_difference(w()).unwrap().is_zero());
        let c = RatKernel::constant(Scalar::int(5));
        let d = c.expand_inner(w()).unwrap();
        assert_eq!(d, c.expand_outer(w()).unwrap());
        assert_eq!(*d.coeff(0), Scalar::int(5));
    }

    #[test]
    fn pairing_and_weights() {
        let d = Dist2::from_fn(w(), qint);
        assert_eq!(Dist2::delta(w()).pair(&d).unwrap(), d);
        assert!(d.pair(&Dist2::zero(w())).unwrap().is_zero());
        let a = Dist2::from_fn(w(), Scalar::q_pow);
        let b = Dist2::from_fn(w(), |n| Scalar::q_pow(-n));
        assert_eq!(a.pair(&b).unwrap(), Dist2::delta(w()));
        assert_eq!(d.weight_abs(0), d);
        assert_eq!(Dist2::delta(w()).weight_abs(2), Dist2::from_fn(w(), |n| Scalar::q_pow(2 * n.abs())));
        assert_eq!(d.weight_abs(2).weight_abs(-2), d);
        let other = Dist2::zero(ModeWindow::new(3).unwrap());
        assert!(matches!(d.pair(&other), Err(DistError::WindowMismatch(8, 3))));
    }

    #[test]
    fn series_division_soundness() {
        let k = RatKernel::from_factors(Scalar::int(2), 1, &[Scalar::q_pow(3)], &[Scalar::q_pow(1), Scalar::s_pow(-3)]);
        let inner = k.expand_inner(w()).unwrap();
        // multiply back by Q and compare with c x^m P on modes that see no truncation
        for n in -8i64..=8 {
            let mut acc = Scalar::zero();
            for (i, qi) in k.den.iter().enumerate() {
                let m = n - i as i64;
                if m >= -8 {
                    acc = &acc + &(qi * inner.coeff(m));
                }
            }
            let target = if n - k.m >= 0 && ((n - k.m) as usize) < k.num.len() {
                &k.c * &k.num[(n - k.m) as usize]
            } else {
                Scalar::zero()
            };
            assert_eq!(acc, target, "mode {n}");
        }
    }

    #[test]
    fn empty_window_rejected() {
        assert!(matches!(ModeWindow::new(0), Err(DistError::EmptyWindow(0))));
    }
}
