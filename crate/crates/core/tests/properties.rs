use proptest::prelude::*;

use qdirac::distcalc::{Dist2, ModeWindow};
use qdirac::qcoeff::{eval_q1, qint, qsum, ExactRational, Scalar, TRational};

/// Small elements of the coefficient tower, built from `i`, `s`, `t`, `r`.
fn scalar() -> impl Strategy<Value = Scalar> {
    (-3i64..=3, -3i64..=3, -2i64..=2, 0u8..4, 1i64..4).prop_map(|(a, b, e, basis, d)| {
        let base = match basis {
            0 => Scalar::one(),
            1 => Scalar::t(),
            2 => Scalar::r(),
            _ => &Scalar::t() * &Scalar::r(),
        };
        let c = &Scalar::frac(a, d) + &(&Scalar::i() * &Scalar::int(b));
        &(&c * &Scalar::s_pow(e)) * &base
    })
}

fn dist(w: ModeWindow) -> impl Strategy<Value = Dist2> {
    proptest::collection::vec(scalar(), 2 * w.size() + 1).prop_map(move |v| {
        let n = w.size() as i64;
        Dist2::from_fn(w, |k| v[(k + n) as usize].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
            prop_assert_eq!(&(&b / &a) * &a, b.clone());
        }
    }

    #[test]
    fn q_integer_identities(n in -24i64..=24) {
        prop_assert_eq!(qint(2 * n), &qint(n) * &qsum(n));
        prop_assert_eq!(qint(-n), -&qint(n));
        prop_assert_eq!(eval_q1(&qint(n)).unwrap(), TRational::rational(ExactRational::from_int(n)));
    }

    #[test]
    fn q_integer_addition(m in -12i64..=12, n in -12i64..=12) {
        // [m + n] = q^n [m] + q^-m [n]
        let lhs = qint(m + n);
        let rhs = &(&Scalar::q_pow(n) * &qint(m)) + &(&Scalar::q_pow(-m) * &qint(n));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pairing_is_commutative_and_associative(
        (a, b, c) in (dist(ModeWindow::new(3).unwrap()), dist(ModeWindow::new(3).unwrap()), dist(ModeWindow::new(3).unwrap()))
    ) {
        let d = Dist2::delta(a.window());
        prop_assert_eq!(a.pair(&b).unwrap(), b.pair(&a).unwrap());
        prop_assert_eq!(a.pair(&b).unwrap().pair(&c).unwrap(), a.pair(&b.pair(&c).unwrap()).unwrap());
        prop_assert_eq!(a.pair(&d).unwrap(), a.clone());
    }

    #[test]
    fn reflection_is_an_involution(a in dist(ModeWindow::new(4).unwrap())) {
        prop_assert_eq!(a.reflect().reflect(), a.clone());
        prop_assert_eq!(a.pair(&a.reflect()).unwrap().reflect(), a.pair(&a.reflect()).unwrap());
    }
}
