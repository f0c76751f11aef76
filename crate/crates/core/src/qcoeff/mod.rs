//! Exact coefficient arithmetic: the field tower over `s = q^{1/2}` and its
//! two degenerations (evaluation at `q = 1`, expansion in `h` with `q = e^{ih}`).

mod exact;
mod hseries;
mod laurent;
mod ratfunc;
mod scalar;

pub use exact::ExactRational;
pub use hseries::{HSeries, TRational};
pub use laurent::LaurentPoly;
pub use ratfunc::RatFunc;
pub use scalar::Scalar;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QError {
    #[error("pole at q = 1 in component {component}: {value}")]
    PoleAtOne { component: &'static str, value: String },
    #[error("series division by a series with no known nonzero term")]
    SeriesDivision,
}

/// The q-integer `[n] = (q^n - q^-n)/(q - q^-1)`.
pub fn qint(n: i64) -> Scalar {
    Scalar::from_poly(qint_poly(n))
}

pub(crate) fn qint_poly(n: i64) -> LaurentPoly {
    if n == 0 {
        return LaurentPoly::zero();
    }
    let m = n.abs();
    let sign = if n > 0 { 1 } else { -1 };
    LaurentPoly::from_terms((0..m).map(|j| (2 * (m - 1 - 2 * j), ExactRational::from_int(sign))))
}

/// `q - q^-1`.
pub fn qdiff() -> Scalar {
    &Scalar::q_pow(1) - &Scalar::q_pow(-1)
}

/// `q^n + q^-n`.
pub fn qsum(n: i64) -> Scalar {
    &Scalar::q_pow(n) + &Scalar::q_pow(-n)
}

/// Evaluates at `q = 1` with `t` kept formal and `r ↦ t`.
pub fn eval_q1(x: &Scalar) -> Result<TRational, QError> {
    const NAMES: [&str; 4] = ["1", "t", "r", "t*r"];
    let mut vals = Vec::with_capacity(4);
    for (k, comp) in x.components().iter().enumerate() {
        let v = comp.eval_one().ok_or_else(|| QError::PoleAtOne {
            component: NAMES[k],
            value: comp.to_string(),
        })?;
        vals.push(v);
    }
    let two = ExactRational::from_int(2);
    Ok(TRational::new(&vals[0] + &(&two * &vals[3]), &vals[1] + &vals[2]))
}

fn taylor_ratfunc(x: &RatFunc, order: i64) -> Result<HSeries, QError> {
    if x.is_zero() {
        return Ok(HSeries::zero(order));
    }
    let dv = x.den().root_multiplicity_at_one() as i64;
    let work = order + 2 * dv;
    let num = HSeries::from_laurent(x.num(), work);
    let den = HSeries::from_laurent(x.den(), work);
    Ok(num.div(&den)?.truncate(order))
}

/// Exact expansion in `h` through `h^order`, substituting `s = e^{ih/2}`.
pub fn taylor_q1(x: &Scalar, order: i64) -> Result<HSeries, QError> {
    let comps = x.components();
    let mut out = taylor_ratfunc(&comps[0], order)?;
    if x.is_rational_sector() {
        return Ok(out);
    }
    // r = t·√cos h, where cos h = [2]/2.
    let cos_h = taylor_ratfunc(qint(2).rational_part(), order)?
        .scale(&TRational::rational(ExactRational::from_frac(1, 2)));
    let root = cos_h.sqrt_unit();
    let t = TRational::t();
    let basis = [
        HSeries::constant(t.clone(), order),
        root.scale(&t),
        root.scale(&TRational::rational(ExactRational::from_int(2))),
    ];
    for (comp, b) in comps[1..].iter().zip(basis.iter()) {
        if !comp.is_zero() {
            out = &out + &(&taylor_ratfunc(comp, order)? * b);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qint_small_values() {
        assert_eq!(qint(1), Scalar::one());
        assert!(qint(0).is_zero());
        assert_eq!(qint(2), Scalar::s_pow(2) + Scalar::s_pow(-2));
        assert_eq!(qint(3), Scalar::s_pow(4) + Scalar::one() + Scalar::s_pow(-4));
        assert_eq!(qint(-3), -qint(3));
    }

    #[test]
    fn qint_matches_its_quotient_definition() {
        for n in -6..=6 {
            assert_eq!(qint(n), &(&Scalar::q_pow(n) - &Scalar::q_pow(-n)) / &qdiff());
        }
    }

    #[test]
    fn eval_at_one() {
        for n in -10..=10 {
            assert_eq!(eval_q1(&qint(n)).unwrap(), TRational::rational(ExactRational::from_int(n)));
        }
        assert_eq!(eval_q1(&Scalar::one()).unwrap(), TRational::one());
        assert!(matches!(eval_q1(&qdiff().inv()), Err(QError::PoleAtOne { .. })));
        assert_eq!(eval_q1(&Scalar::r()).unwrap(), TRational::t());
    }

    #[test]
    fn taylor_examples() {
        let two = taylor_q1(&qint(2), 2).unwrap();
        assert_eq!(two.coeff(0), Some(TRational::rational(ExactRational::from_int(2))));
        assert_eq!(two.coeff(1), Some(TRational::zero()));
        assert_eq!(two.coeff(2), Some(TRational::rational(ExactRational::from_int(-1))));

        let d = taylor_q1(&qdiff(), 1).unwrap();
        assert_eq!(d.coeff(0), Some(TRational::zero()));
        assert_eq!(d.coeff(1), Some(TRational::rational(ExactRational::imag(2))));

        let one = taylor_q1(&Scalar::one(), 5).unwrap();
        assert_eq!(one, HSeries::constant(TRational::one(), 5));
    }

    #[test]
    fn taylor_of_pole() {
        // 1/(q - q^-1) = 1/(2i sin h) = -i/(2h) + ...
        let p = taylor_q1(&qdiff().inv(), 2).unwrap();
        assert_eq!(p.valuation(), -1);
        assert_eq!(p.coeff(-1), Some(TRational::rational(ExactRational::new(
            num_rational::BigRational::from_integer(0.into()),
            num_rational::BigRational::new((-1).into(), 2.into()),
        ))));
    }

    #[test]
    fn surd_expansion_squares_back() {
        // r^2 = [2]
        let r = taylor_q1(&Scalar::r(), 6).unwrap();
        let two = taylor_q1(&qint(2), 6).unwrap();
        assert_eq!(&r * &r, two);
    }
}
