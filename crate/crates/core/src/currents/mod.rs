//! Field-level bracket algebra over operator-valued distributions.

mod checks;
mod modes;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::distcalc::{Dist2, DistError, ModeWindow};
use crate::qcoeff::Scalar;
use crate::vertexcalc::VertexError;

pub use checks::commutator_suite;
pub use modes::{modes_from_ope, q1_degeneration_check, verify_serre_mode_equivalence, KacMoodyLevel};
pub use table::{
    commutator_from_exchange, pole_commutator, self_commutator_from_exchange, sigma, BracketTable, LinearField,
    QuantumTable,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurrentsError {
    #[error("bracket table has no entry for ({0}, {1})")]
    MissingPair(Symbol, Symbol),
    #[error("fused operator {0} is not a known field")]
    Unidentified(String),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Vertex(#[from] VertexError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    H,
    EPlus,
    EMinus,
    Psi,
    Phi,
    ETilde,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::H => "H",
            Symbol::EPlus => "E+",
            Symbol::EMinus => "E-",
            Symbol::Psi => "Psi",
            Symbol::Phi => "Phi",
            Symbol::ETilde => "E~",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Z,
    W,
}

impl Var {
    pub fn swap(self) -> Self {
        match self {
            Var::Z => Var::W,
            Var::W => Var::Z,
        }
    }
}

/// `symbol(var · s^shift)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldFactor {
    pub symbol: Symbol,
    pub var: Var,
    pub shift: i64,
}

impl FieldFactor {
    pub fn new(symbol: Symbol, var: Var) -> Self {
        Self { symbol, var, shift: 0 }
    }

    pub fn shifted(symbol: Symbol, var: Var, shift: i64) -> Self {
        Self { symbol, var, shift }
    }

    pub fn z(symbol: Symbol) -> Self {
        Self::new(symbol, Var::Z)
    }

    pub fn w(symbol: Symbol) -> Self {
        Self::new(symbol, Var::W)
    }
}

impl fmt::Display for FieldFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = if self.var == Var::Z { "z" } else { "w" };
        if self.shift == 0 {
            write!(f, "{}({v})", self.symbol)
        } else {
            write!(f, "{}({v}*s^{})", self.symbol, self.shift)
        }
    }
}

/// Product of field factors; an empty monomial is the identity.
pub type Monomial = Vec<FieldFactor>;

/// One replacement term for a substituted factor: coefficient times a product of factors.
pub type Replacement = Vec<(Scalar, Monomial)>;

/// `Σ monomial × Dist2`. Classical sums keep monomials sorted, so that commuting
/// products in different orders merge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermSum {
    window: ModeWindow,
    classical: bool,
    terms: BTreeMap<Monomial, Dist2>,
}

impl TermSum {
    pub fn zero(window: ModeWindow, classical: bool) -> Self {
        Self { window, classical, terms: BTreeMap::new() }
    }

    pub fn term(monomial: Monomial, dist: Dist2, classical: bool) -> Self {
        let mut t = Self::zero(dist.window(), classical);
        t.add_term(monomial, dist);
        t
    }

    pub fn window(&self) -> ModeWindow {
        self.window
    }

    pub fn is_classical(&self) -> bool {
        self.classical
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Dist2)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, mut monomial: Monomial, dist: Dist2) {
        if self.classical {
            monomial.sort();
        }
        let entry = self.terms.entry(monomial.clone()).or_insert_with(|| Dist2::zero(self.window));
        *entry = &*entry + &dist;
        if entry.is_zero() {
            self.terms.remove(&monomial);
        }
    }

    /// Coefficient distribution of a monomial (canonicalized when classical).
    pub fn coefficient(&self, monomial: &[FieldFactor]) -> Dist2 {
        let mut m = monomial.to_vec();
        if self.classical {
            m.sort();
        }
        self.terms.get(&m).cloned().unwrap_or_else(|| Dist2::zero(self.window))
    }

    pub fn add(&self, o: &TermSum) -> TermSum {
        let mut out = self.clone();
        out.classical &= o.classical;
        for (m, d) in &o.terms {
            out.add_term(m.clone(), d.clone());
        }
        out
    }

    pub fn sub(&self, o: &TermSum) -> TermSum {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> TermSum {
        self.map_dist(|d| -d)
    }

    pub fn scale(&self, k: &Scalar) -> TermSum {
        if k.is_zero() {
            return Self::zero(self.window, self.classical);
        }
        self.map_dist(|d| d.scale(k))
    }

    pub fn map_dist(&self, f: impl Fn(&Dist2) -> Dist2) -> TermSum {
        let mut out = Self::zero(self.window, self.classical);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), f(d));
        }
        out
    }

    /// `q^{h|n|}` on every coefficient.
    pub fn weight(&self, h: i64) -> TermSum {
        self.map_dist(|d| d.weight_abs(h))
    }

    /// Exchange of the two points: variables swapped, distributions reflected.
    pub fn swap_points(&self) -> TermSum {
        let mut out = Self::zero(self.window, self.classical);
        for (m, d) in &self.terms {
            let m2 = m.iter().map(|f| FieldFactor { var: f.var.swap(), ..*f }).collect();
            out.add_term(m2, d.reflect());
        }
        out
    }

    /// The commutative image: products lose their order.
    pub fn to_classical(&self) -> TermSum {
        let mut out = Self::zero(self.window, true);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d.clone());
        }
        out
    }

    /// Replaces every factor for which `rule` returns a replacement.
    pub fn substitute(&self, rule: impl Fn(&FieldFactor) -> Option<Replacement>) -> TermSum {
        let mut out = Self::zero(self.window, self.classical);
        for (m, d) in &self.terms {
            let mut partial: Vec<(Scalar, Monomial)> = vec![(Scalar::one(), Vec::new())];
            for f in m {
                let rep = rule(f).unwrap_or_else(|| vec![(Scalar::one(), vec![*f])]);
                partial = partial
                    .iter()
                    .flat_map(|(c, acc)| {
                        rep.iter().map(move |(c2, fs)| {
                            let mut m2 = acc.clone();
                            m2.extend(fs.iter().copied());
                            (c * c2, m2)
                        })
                    })
                    .filter(|(c, _)| !c.is_zero())
                    .collect();
            }
            for (c, m2) in partial {
                out.add_term(m2, d.scale(&c));
            }
        }
        out
    }

    /// Mode-wise product of two translation-covariant sums: the residue pairing
    /// `∮ du/u f(z,u) g(u,w)`. Field factors must not depend on the integration
    /// point, which is `w` for `self` and `z` for `other`.
    pub fn compose(&self, other: &TermSum) -> Option<TermSum> {
        let mut out = Self::zero(self.window, self.classical && other.classical);
        for (m1, d1) in &self.terms {
            if m1.iter().any(|f| f.var == Var::W) {
                return None;
            }
            for (m2, d2) in &other.terms {
                if m2.iter().any(|f| f.var == Var::Z) {
                    return None;
                }
                let mut m = m1.clone();
                m.extend(m2.iter().copied());
                out.add_term(m, d1.pair(d2).ok()?);
            }
        }
        Some(out)
    }
}

impl fmt::Display for TermSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, d)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let name = if m.is_empty() {
                "1".to_string()
            } else {
                m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("*")
            };
            write!(f, "{name} x {d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> ModeWindow {
        ModeWindow::new(4).unwrap()
    }

    #[test]
    fn classical_monomials_merge() {
        let d = Dist2::delta(w());
        let mut t = TermSum::zero(w(), true);
        t.add_term(vec![FieldFactor::w(Symbol::EMinus), FieldFactor::z(Symbol::EMinus)], d.clone());
        t.add_term(vec![FieldFactor::z(Symbol::EMinus), FieldFactor::w(Symbol::EMinus)], -&d);
        assert!(t.is_zero());
    }

    #[test]
    fn quantum_monomials_keep_order() {
        let d = Dist2::delta(w());
        let mut t = TermSum::zero(w(), false);
        t.add_term(vec![FieldFactor::w(Symbol::Phi), FieldFactor::z(Symbol::Psi)], d.clone());
        t.add_term(vec![FieldFactor::z(Symbol::Psi), FieldFactor::w(Symbol::Phi)], d);
        assert_eq!(t.terms().count(), 2);
        assert_eq!(t.to_classical().terms().count(), 1);
    }

    #[test]
    fn surface_substitution() {
        let d = Dist2::from_fn(w(), |n| Scalar::int(n));
        let t = TermSum::term(vec![FieldFactor::z(Symbol::EMinus), FieldFactor::shifted(Symbol::Psi, Var::W, 1)], d.clone(), true);
        let s = t.substitute(|f| (f.symbol == Symbol::Psi).then(|| vec![(Scalar::one(), vec![])]));
        assert_eq!(s.coefficient(&[FieldFactor::z(Symbol::EMinus)]), d);
    }

    #[test]
    fn compose_rejects_integration_variable() {
        let d = Dist2::delta(w());
        let a = TermSum::term(vec![FieldFactor::w(Symbol::EMinus)], d.clone(), true);
        let b = TermSum::term(vec![], d, true);
        assert!(a.compose(&b).is_none());
        assert!(b.compose(&b).is_some());
    }
}
