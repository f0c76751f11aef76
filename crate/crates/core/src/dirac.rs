//! Dirac reduction of the remaining current under two second-class constraints.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::currents::{BracketTable, CurrentsError, FieldFactor, LinearField, QuantumTable, Symbol, TermSum};
use crate::distcalc::{Dist2, ModeWindow};
use crate::qcoeff::{qdiff, qint, qsum, ExactRational, Scalar};
use crate::qvirasoro::QVirasoroBracket;
use crate::report::{CheckRecord, Status};

pub const SCENARIOS: [&str; 2] = ["classical-sl2", "q-sl2"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiracError {
    #[error("unknown scenario {0:?}; expected one of classical-sl2, q-sl2")]
    UnknownScenario(String),
    #[error("constraint bracket keeps field content on the surface: {0}")]
    FieldContent(String),
    #[error("Dirac matrix is singular at mode {0}")]
    Singular(i64),
    #[error(transparent)]
    Currents(#[from] CurrentsError),
}

/// Two constraints and the values the other fields take on their surface.
#[derive(Clone, Debug)]
pub struct ConstraintSet {
    pub chi: [LinearField; 2],
    pub surface: BTreeMap<Symbol, Scalar>,
}

impl ConstraintSet {
    /// `χ₁ = H ≈ 0`, `χ₂ = E⁺ - 1 ≈ 0`.
    pub fn classical() -> Self {
        let surface = BTreeMap::from([(Symbol::H, Scalar::zero()), (Symbol::EPlus, Scalar::one())]);
        Self { chi: [LinearField::single(Symbol::H), LinearField::single(Symbol::EPlus)], surface }
    }

    /// `χ₁ = (Ψ - Φ)/(√2(q - q⁻¹)) ≈ 0`, `χ₂ = E⁺ ≈ 1`, read as `Ψ = Φ = E⁺ = 1`.
    pub fn q_deformed() -> Self {
        let surface = BTreeMap::from([
            (Symbol::Psi, Scalar::one()),
            (Symbol::Phi, Scalar::one()),
            (Symbol::EPlus, Scalar::one()),
        ]);
        Self { chi: [LinearField::chi1(), LinearField::single(Symbol::EPlus)], surface }
    }

    pub fn apply(&self, t: &TermSum) -> TermSum {
        t.substitute(|f| {
            self.surface.get(&f.symbol).map(|v| if v.is_zero() { vec![] } else { vec![(v.clone(), vec![])] })
        })
    }

    /// Value of `χᵢ` on the surface, up to the constant offset of `χ₂`.
    pub fn surface_value(&self, i: usize) -> Scalar {
        self.chi[i]
            .terms
            .iter()
            .map(|(c, s)| c * self.surface.get(s).unwrap_or(&Scalar::zero()))
            .sum()
    }
}

fn c_number(t: &TermSum) -> Result<Dist2, DiracError> {
    let mut out = Dist2::zero(t.window());
    for (m, d) in t.terms() {
        if !m.is_empty() {
            return Err(DiracError::FieldContent(t.to_string()));
        }
        out = d.clone();
    }
    Ok(out)
}

pub type Mode2 = [[Scalar; 2]; 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracMatrix {
    pub entries: [[Dist2; 2]; 2],
}

fn mul2(a: &Mode2, b: &Mode2) -> Mode2 {
    let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn det2(m: &Mode2) -> Scalar {
    &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
}

impl DiracMatrix {
    pub fn window(&self) -> ModeWindow {
        self.entries[0][0].window()
    }

    pub fn mode(&self, n: i64) -> Mode2 {
        let e = |i: usize, j: usize| self.entries[i][j].coeff(n).clone();
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    fn from_modes(w: ModeWindow, f: impl Fn(i64) -> Mode2) -> Self {
        let modes: BTreeMap<i64, Mode2> = w.modes().map(|n| (n, f(n))).collect();
        let e = |i: usize, j: usize| Dist2::from_fn(w, |n| modes[&n][i][j].clone());
        Self { entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
    }

    /// Mode-wise inverse, the solution of `∮ Δ(z,u) Δ⁻¹(u,w) = δ`.
    pub fn invert(&self) -> Result<DiracMatrix, DiracError> {
        let w = self.window();
        if let Some(n) = w.modes().find(|&n| det2(&self.mode(n)).is_zero()) {
            return Err(DiracError::Singular(n));
        }
        Ok(Self::from_modes(w, |n| {
            let m = self.mode(n);
            let d = det2(&m).inv();
            [[&m[1][1] * &d, -&(&m[0][1] * &d)], [-&(&m[1][0] * &d), &m[0][0] * &d]]
        }))
    }

    /// Residue pairing `∮ A(z,u) B(u,w) du/u` entry by entry.
    pub fn pair(&self, o: &DiracMatrix) -> DiracMatrix {
        Self::from_modes(self.window(), |n| mul2(&self.mode(n), &o.mode(n)))
    }

    pub fn identity(w: ModeWindow) -> Self {
        Self::from_modes(w, |_| [[Scalar::one(), Scalar::zero()], [Scalar::zero(), Scalar::one()]])
    }

    /// Zero at the listed modes, otherwise unchanged.
    fn without_mode(&self, n0: i64) -> Self {
        Self::from_modes(self.window(), |n| {
            if n == n0 {
                [[Scalar::zero(), Scalar::zero()], [Scalar::zero(), Scalar::zero()]]
            } else {
                self.mode(n)
            }
        })
    }
}

/// `{χᵢ(z), χⱼ(w)}` on the constraint surface.
pub fn build_dirac_matrix(table: &BracketTable, cs: &ConstraintSet) -> Result<DiracMatrix, DiracError> {
    let e = |i: usize, j: usize| -> Result<Dist2, DiracError> { c_number(&cs.apply(&table.bracket(&cs.chi[i], &cs.chi[j])?)) };
    Ok(DiracMatrix { entries: [[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]] })
}

/// The reference deformed Dirac matrix in `x = w/z`.
pub fn reference_matrix(w: ModeWindow) -> DiracMatrix {
    let i = Scalar::i();
    let two = qsum(1);
    let t = Scalar::t();
    let half2 = two.scale_exact(&ExactRational::from_frac(1, 2));
    let sgn = |n: i64| Scalar::int(n.signum());
    let d11 = Dist2::from_fn(w, |n| &(&(-&i) * &half2) * &(&sgn(n) * &qint(n.abs())));
    // both n ≥ 0 sums meet at n = 0, plus the constant 2q⁻¹i/√2
    let d12 = Dist2::from_fn(w, |n| {
        let base = &(&(-&i) * &two) / &t;
        let sums = &base * &Scalar::s_pow(3 * n.abs());
        if n == 0 {
            &(&sums + &sums) + &(&(&i * &Scalar::q_pow(-1)).scale_exact(&ExactRational::from_int(2)) / &t)
        } else {
            sums
        }
    });
    let d22 = Dist2::from_fn(w, |n| &(&(&i * &half2) * &qdiff()) * &(&sgn(n) * &Scalar::q_pow(2 * n.abs())));
    let d21 = -&d12.reflect();
    DiracMatrix { entries: [[d11, d12], [d21, d22]] }
}

/// The reference inverse, `n > 0` sums only; with `limit_at_zero` the sums are read
/// from `n ≥ 0` using the limit values `[n]/[2n] → 1/2`, `[n]²/[2n] → 0`.
pub fn reference_inverse(w: ModeWindow, limit_at_zero: bool) -> DiracMatrix {
    let i = Scalar::i();
    let two = qsum(1);
    let t = Scalar::t();
    let ratio = |n: i64| if n == 0 { Scalar::frac(1, 2) } else { &qint(n) / &qint(2 * n) };
    let sgn = |n: i64| Scalar::int(n.signum());
    let pre11 = (&(&i * &qdiff()) / &two).scale_exact(&ExactRational::from_int(-2));
    let pre12 = (&(&i * &t) / &two).scale_exact(&ExactRational::from_int(-2));
    let pre22 = (&i / &two).scale_exact(&ExactRational::from_int(2));
    let d11 = Dist2::from_fn(w, |n| &pre11 * &(&sgn(n) * &ratio(n.abs())));
    let d12 = Dist2::from_fn(w, |n| {
        let v = &(&pre12 * &Scalar::s_pow(-n.abs())) * &ratio(n.abs());
        match n {
            0 if limit_at_zero => &v + &v,
            0 => Scalar::zero(),
            _ => v,
        }
    });
    let d21 = -&d12;
    let d22 = Dist2::from_fn(w, |n| {
        let k = n.abs();
        if k == 0 {
            return Scalar::zero();
        }
        &(&pre22 * &sgn(n)) * &(&(&Scalar::q_pow(-2 * k) * &(&qint(k) * &qint(k))) / &qint(2 * k))
    });
    DiracMatrix { entries: [[d11, d12], [d21, d22]] }
}

/// `Ẽ⁻ = a E⁻ + b` with `a = (q - q⁻¹)² √([2]/2)`, `b = 4/√(2[2])`.
#[derive(Clone, Debug)]
pub struct AffineMap {
    pub a: Scalar,
    pub b: Scalar,
    pub a2: Scalar,
    pub ab: Scalar,
    pub b2: Scalar,
}

impl AffineMap {
    pub fn standard() -> Self {
        let eps2 = &qdiff() * &qdiff();
        let tr = &Scalar::t() * &Scalar::r();
        let two = qsum(1);
        // √([2]/2) = r/t = rt/2 and 4/√(2[2]) = 4/(tr) = 2tr/[2]
        let a = (&eps2 * &tr).scale_exact(&ExactRational::from_frac(1, 2));
        let b = (&tr / &two).scale_exact(&ExactRational::from_int(2));
        let a2 = (&(&eps2 * &eps2) * &two).scale_exact(&ExactRational::from_frac(1, 2));
        let ab = eps2.scale_exact(&ExactRational::from_int(2));
        let b2 = &Scalar::int(8) / &two;
        Self { a, b, a2, ab, b2 }
    }

    pub fn products_consistent(&self) -> bool {
        &self.a * &self.a == self.a2 && &self.a * &self.b == self.ab && &self.b * &self.b == self.b2
    }
}

/// The Dirac bracket with its pieces.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub matrix: DiracMatrix,
    pub inverse: DiracMatrix,
    pub direct: TermSum,
    pub corrections: [[TermSum; 2]; 2],
    pub result: TermSum,
}

pub struct Scenario {
    pub key: &'static str,
    pub table: BracketTable,
    pub constraints: ConstraintSet,
    pub current: Symbol,
}

impl Scenario {
    pub fn from_key(key: &str, w: ModeWindow, weight: Option<i64>) -> Result<Self, DiracError> {
        match key {
            "classical-sl2" => Ok(Self {
                key: "classical-sl2",
                table: BracketTable::classical_sl2(w).with_weight(weight),
                constraints: ConstraintSet::classical(),
                current: Symbol::EMinus,
            }),
            "q-sl2" => Ok(Self {
                key: "q-sl2",
                table: BracketTable::from_quantum(&QuantumTable::vertex(w)?)?.with_weight(weight),
                constraints: ConstraintSet::q_deformed(),
                current: Symbol::EMinus,
            }),
            other => Err(DiracError::UnknownScenario(other.to_string())),
        }
    }
}

/// `{A, A}_D = {A, A} - Σᵢⱼ {A, χᵢ} ∘ Δ⁻¹ᵢⱼ ∘ {χⱼ, A}` on the surface.
pub fn reduce(current: Symbol, table: &BracketTable, cs: &ConstraintSet) -> Result<Reduction, DiracError> {
    let matrix = build_dirac_matrix(table, cs)?;
    let inverse = matrix.invert()?;
    let a = LinearField::single(current);
    let direct = cs.apply(&table.bracket(&a, &a)?);
    let f: Vec<TermSum> = cs.chi.iter().map(|c| table.bracket(&a, c).map(|t| cs.apply(&t))).collect::<Result<_, _>>()?;
    let g: Vec<TermSum> = cs.chi.iter().map(|c| table.bracket(c, &a).map(|t| cs.apply(&t))).collect::<Result<_, _>>()?;
    let chain = |i: usize, j: usize| -> Result<TermSum, DiracError> {
        let inv = TermSum::term(vec![], inverse.entries[i][j].clone(), true);
        f[i].compose(&inv)
            .and_then(|x| x.compose(&g[j]))
            .ok_or_else(|| DiracError::FieldContent("constraint bracket depends on the contour variable".into()))
    };
    let corrections = [[chain(0, 0)?, chain(0, 1)?], [chain(1, 0)?, chain(1, 1)?]];
    let mut result = direct.clone();
    for row in &corrections {
        for c in row {
            result = result.sub(c);
        }
    }
    Ok(Reduction { matrix, inverse, direct, corrections, result })
}

fn ez() -> FieldFactor {
    FieldFactor::z(Symbol::EMinus)
}

fn ew() -> FieldFactor {
    FieldFactor::w(Symbol::EMinus)
}

/// Quadratic, two linear and constant parts of a reduced bracket.
pub fn split(t: &TermSum) -> [Dist2; 4] {
    [t.coefficient(&[ez(), ew()]), t.coefficient(&[ez()]), t.coefficient(&[ew()]), t.coefficient(&[])]
}

/// The reduced bracket rewritten in `Ẽ⁻`: `[ẼẼ, Ẽ(z), Ẽ(w), 1]` coefficients of `a²{E⁻, E⁻}_D`.
pub fn to_tilde(parts: &[Dist2; 4], map: &AffineMap) -> [Dist2; 4] {
    let [q, lz, lw, c] = parts;
    let lin = |l: &Dist2| &l.scale(&map.a) - &q.scale(&map.b);
    let cst = &(&q.scale(&map.b2) - &(lz + lw).scale(&map.ab)) + &c.scale(&map.a2);
    [q.clone(), lin(lz), lin(lw), cst]
}

fn rational_sector(d: &Dist2) -> bool {
    d.coeffs().all(|(_, c)| c.is_rational_sector())
}

fn compare_nonzero(id: &str, eq: &str, got: &Dist2, want: &Dist2) -> CheckRecord {
    let bad = got.first_difference(want, true);
    let rec = CheckRecord::pass_fail(id, eq, bad.is_none()).at_mode(bad);
    match bad {
        Some(n) => rec.values(got.coeff(n).to_string(), want.coeff(n).to_string()),
        None => rec.values(got.to_string(), want.to_string()),
    }
}

/// Compares the `Ẽ⁻` form of a deformed reduction with the reference algebra; `n = 0` separately.
pub fn affine_check(reduced: &TermSum, map: &AffineMap, weighted: bool) -> Vec<CheckRecord> {
    let w = reduced.window();
    let eq = if weighted { "qvir" } else { "qdirb" };
    let tag = if weighted { "weighted" } else { "unweighted" };
    let target = QVirasoroBracket::new(!weighted);
    let [q, lz, lw, c] = to_tilde(&split(reduced), map);
    let (tq, tc) = (target.quad_x(w), target.cent_x(w));
    let zero = Dist2::zero(w);
    let mut out = vec![
        CheckRecord::pass_fail(format!("affine.{tag}.products"), "E~ redefinition", map.products_consistent())
            .values(format!("a^2 = {}, ab = {}, b^2 = {}", map.a2, map.ab, map.b2), "a*a, a*b, b*b"),
        compare_nonzero(&format!("affine.{tag}.quadratic"), eq, &q, &tq),
        compare_nonzero(&format!("affine.{tag}.linear-z"), eq, &lz, &zero),
        compare_nonzero(&format!("affine.{tag}.linear-w"), eq, &lw, &zero),
        compare_nonzero(&format!("affine.{tag}.central"), eq, &c, &tc),
    ];
    let sector = rational_sector(&q) && rational_sector(&c) && split(reduced).iter().all(rational_sector);
    out.push(CheckRecord::pass_fail(format!("affine.{tag}.surd-free"), eq, sector).values(
        if sector { "all coefficients in Q(i)(s)" } else { "t or r component present" },
        "all coefficients in Q(i)(s)",
    ));
    let at0 = [q.coeff(0), lz.coeff(0), lw.coeff(0), c.coeff(0)];
    let want0 = [tq.coeff(0), &Scalar::zero(), &Scalar::zero(), tc.coeff(0)];
    let ok0 = at0 == want0;
    out.push(
        CheckRecord::pass_fail(format!("affine.{tag}.mode0"), eq, ok0)
            .at_mode(Some(0))
            .values(format!("{at0:?}").replace('"', ""), format!("{want0:?}").replace('"', ""))
            .note("mode 0 is compared separately from the n != 0 modes"),
    );
    out
}

/// The undeformed reduced bracket `-i(E⁻(z) + E⁻(w)) Σ n xⁿ + (i/2) Σ n³ xⁿ`.
pub fn classical_expected(w: ModeWindow) -> TermSum {
    let i = Scalar::i();
    let lin = Dist2::from_fn(w, |n| (-&i).scale_exact(&ExactRational::from_int(n)));
    let cen = Dist2::from_fn(w, |n| i.scale_exact(&ExactRational::from_frac(n * n * n, 2)));
    let mut t = TermSum::zero(w, true);
    t.add_term(vec![ez()], lin.clone());
    t.add_term(vec![ew()], lin);
    t.add_term(vec![], cen);
    t
}

fn status_record(id: &str, eq: &str, status: Status) -> CheckRecord {
    CheckRecord::new(id, eq, status)
}

/// Checks on the Dirac matrix and its inverse.
pub fn matrix_suite(sc: &Scenario) -> Vec<CheckRecord> {
    let w = sc.table.window();
    let mut out = Vec::new();
    let m = match build_dirac_matrix(&sc.table, &sc.constraints) {
        Ok(m) => m,
        Err(e) => return vec![CheckRecord::pass_fail("dirac.matrix", "elem1-elem3", false).note(e.to_string())],
    };
    let surf = sc.constraints.surface_value(0).is_zero() && sc.constraints.surface_value(1).is_one();
    out.push(CheckRecord::pass_fail("dirac.constraints.surface", "ain1-ain2", surf).values(
        format!("chi1 = {}, chi2 = {}", sc.constraints.surface_value(0), sc.constraints.surface_value(1)),
        "chi1 = 0, chi2 = 1",
    ));
    let weighted = sc.table.weight().is_some();
    if sc.key == "q-sl2" && !weighted {
        let p = reference_matrix(w);
        for (i, j, eq) in [(0, 0, "elem1"), (0, 1, "elem2"), (1, 0, "elem2"), (1, 1, "elem3")] {
            let bad = m.entries[i][j].first_difference(&p.entries[i][j], false);
            let rec = CheckRecord::pass_fail(format!("dirac.matrix.{}{}", i + 1, j + 1), eq, bad.is_none()).at_mode(bad);
            out.push(match bad {
                Some(n) => rec.values(m.entries[i][j].coeff(n).to_string(), p.entries[i][j].coeff(n).to_string()),
                None => rec.values(m.entries[i][j].to_string(), p.entries[i][j].to_string()),
            });
        }
    } else if sc.key == "classical-sl2" && !weighted {
        let i = Scalar::i();
        let want = DiracMatrix {
            entries: [
                [Dist2::from_fn(w, |n| (-&i).scale_exact(&ExactRational::from_int(n))), Dist2::from_fn(w, |_| -&(&i * &Scalar::t()))],
                [Dist2::from_fn(w, |_| &i * &Scalar::t()), Dist2::zero(w)],
            ],
        };
        out.push(CheckRecord::pass_fail("dirac.matrix", "cor1-cor3", m == want).values(format!("{m:?}").chars().take(400).collect::<String>(), "[[-i n, -i sqrt2], [i sqrt2, 0]]"));
    }
    let rule = m.entries[1][0] == -&m.entries[0][1].reflect() && m.entries[0][0].is_odd() && m.entries[1][1].is_odd();
    out.push(CheckRecord::pass_fail("dirac.matrix.antisymmetry", "elem1-elem3", rule).values(
        "D21(n) = -D12(-n); D11, D22 odd",
        "D21(n) = -D12(-n); D11, D22 odd",
    ));
    let singular = w.modes().find(|&n| det2(&m.mode(n)).is_zero());
    out.push(
        CheckRecord::pass_fail("dirac.matrix.det-nonzero", "inver", singular.is_none())
            .at_mode(singular)
            .values(format!("det at mode 0: {}", det2(&m.mode(0))), "nonzero on the window"),
    );
    let inv = match m.invert() {
        Ok(v) => v,
        Err(e) => {
            out.push(CheckRecord::pass_fail("dirac.inverse", "inver", false).note(e.to_string()));
            return out;
        }
    };
    let id = DiracMatrix::identity(w);
    out.push(CheckRecord::pass_fail("dirac.inverse.pairing", "inver", m.pair(&inv) == id && inv.pair(&m) == id).values("pair(D, D^-1) = 1", "delta_ik delta(z/w)"));
    out.push(CheckRecord::pass_fail("dirac.inverse.involution", "inver", inv.invert().as_ref() == Ok(&m)).values("invert(invert(D)) = D", "D"));
    if sc.key == "q-sl2" && !weighted {
        out.extend(reference_inverse_records(&m, &inv, w));
    }
    out
}

fn reference_inverse_records(m: &DiracMatrix, inv: &DiracMatrix, w: ModeWindow) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let reference = reference_inverse(w, false);
    let nz_ok = inv.without_mode(0) == reference.without_mode(0);
    let bad = w.nonzero_modes().find(|&n| inv.mode(n) != reference.mode(n));
    out.push(
        CheckRecord::pass_fail("dirac.inverse.reference", "inverse display", nz_ok)
            .at_mode(bad)
            .values("engine inverse at n != 0", "reference inverse at n != 0"),
    );
    let e0 = inv.mode(0);
    let fmt = |m: &Mode2| format!("[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1]);
    let zero0 = reference.mode(0).iter().flatten().all(Scalar::is_zero);
    let differs = e0 != reference.mode(0);
    // second reading: sums from n >= 0 with [n]/[2n] -> 1/2 and [n]^2/[2n] -> 0
    let limit = reference_inverse(w, true).mode(0);
    let limit_note = if limit == e0 { "agrees with the engine" } else { "also differs" };
    out.push(
        status_record("dirac.inverse.mode0", "inverse display", if differs { Status::DiscrepancyDocumented } else { Status::Pass })
            .at_mode(Some(0))
            .values(fmt(&e0), fmt(&reference.mode(0)))
            .note(format!(
                "the reference inverse has no n = 0 term; the engine keeps its exact mode-0 inverse downstream; \
                 reading the reference sums from n >= 0 gives {} and {limit_note}",
                fmt(&limit)
            )),
    );
    let paired = mul2(&m.mode(0), &reference.mode(0));
    let fails = zero0 && paired != DiracMatrix::identity(w).mode(0);
    out.push(
        status_record("dirac.inverse.mode0.pairing", "inver", if fails { Status::DiscrepancyDocumented } else { Status::Pass })
            .at_mode(Some(0))
            .values(fmt(&paired), "[[1, 0], [0, 1]]")
            .note("pairing of the matrix with the reference inverse at mode 0"),
    );
    out
}

/// Reduction checks for one scenario: the classical display, or the reference
/// deformed algebra through the affine map.
pub fn reduce_suite(sc: &Scenario) -> Vec<CheckRecord> {
    match reduce(sc.current, &sc.table, &sc.constraints) {
        Ok(r) => reduce_records(sc, &r),
        Err(e) => vec![CheckRecord::pass_fail(format!("reduce.{}", sc.key), "dirb", false).note(e.to_string())],
    }
}

/// Checks on an already computed reduction of `sc`.
pub fn reduce_records(sc: &Scenario, red: &Reduction) -> Vec<CheckRecord> {
    let w = sc.table.window();
    let mut out = Vec::new();
    let pre = match sc.table.weight() {
        Some(_) => format!("reduce.{}.weighted", sc.key),
        None => format!("reduce.{}", sc.key),
    };
    let anti = red.result == red.result.swap_points().neg();
    out.push(CheckRecord::pass_fail(format!("{pre}.antisymmetry"), "dirb", anti).values("z <-> w negates", "z <-> w negates"));
    let sector = split(&red.result).iter().all(rational_sector);
    out.push(CheckRecord::pass_fail(format!("{pre}.surd-free"), "dirb", sector).values(
        if sector { "all coefficients in Q(i)(s)" } else { "t or r component present" },
        "all coefficients in Q(i)(s)",
    ));
    let c22_pure = red.corrections[1][1].terms().all(|(m, _)| m.is_empty());
    let c11_quad = !red.corrections[0][0].coefficient(&[ez(), ew()]).is_zero();
    out.push(CheckRecord::pass_fail(format!("{pre}.correction-shape"), "dirb", c22_pure && (c11_quad || sc.key == "classical-sl2")).values(
        format!("(2,2) c-number: {c22_pure}; (1,1) carries E-(z)E-(w): {c11_quad}"),
        "(2,2) c-number; (1,1) quadratic in the deformed case",
    ));
    match sc.key {
        "classical-sl2" => {
            let want = classical_expected(w);
            let ok = red.result == want;
            let rec = CheckRecord::pass_fail("reduce.classical-sl2.virasoro", "classical reduced display", ok);
            out.push(if ok {
                rec.values(red.result.to_string(), want.to_string())
            } else {
                let bad = split(&red.result).iter().zip(split(&want).iter()).filter_map(|(a, b)| a.first_difference(b, false)).next();
                rec.at_mode(bad).values(red.result.to_string(), want.to_string())
            });
        }
        _ => out.extend(affine_check(&red.result, &AffineMap::standard(), sc.table.weight().is_some())),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> ModeWindow {
        ModeWindow::new(5).unwrap()
    }

    fn all_pass(recs: &[CheckRecord]) {
        for r in recs {
            assert_ne!(r.status, Status::Fail, "{} failed: {:?}", r.id, r);
        }
    }

    #[test]
    fn reference_matrix_examples() {
        let p = reference_matrix(w());
        let want = &(&(-&Scalar::i()) * &qsum(1).scale_exact(&ExactRational::from_frac(1, 2))) * &qint(3);
        assert_eq!(*p.entries[0][0].coeff(3), want);
        assert!(p.entries[1][1].coeff(0).is_zero());
        assert_eq!(*p.entries[0][1].coeff(0), -&(&(&Scalar::i() * &Scalar::t()) * &Scalar::q_pow(1)));
    }

    #[test]
    fn mode0_inverse() {
        let m = reference_matrix(w()).invert().unwrap().mode(0);
        assert!(m[0][0].is_zero() && m[1][1].is_zero());
        assert_eq!(m[0][1], -&(&Scalar::i() / &(&Scalar::t() * &Scalar::q_pow(1))));
        assert_eq!(
            det2(&reference_matrix(w()).mode(0)),
            (-&Scalar::q_pow(2)).scale_exact(&ExactRational::from_int(2))
        );
    }

    #[test]
    fn affine_map_products() {
        assert!(AffineMap::standard().products_consistent());
    }

    #[test]
    fn classical_scenario() {
        let sc = Scenario::from_key("classical-sl2", w(), None).unwrap();
        all_pass(&matrix_suite(&sc));
        all_pass(&reduce_suite(&sc));
    }

    #[test]
    fn deformed_scenario() {
        for weight in [None, Some(2)] {
            let sc = Scenario::from_key("q-sl2", w(), weight).unwrap();
            all_pass(&matrix_suite(&sc));
            all_pass(&reduce_suite(&sc));
        }
    }

    #[test]
    fn unknown_scenario() {
        assert!(matches!(Scenario::from_key("su3", w(), None), Err(DiracError::UnknownScenario(_))));
    }

    #[test]
    fn surface_kills_constraints() {
        assert!(ConstraintSet::q_deformed().surface_value(0).is_zero());
        assert!(ConstraintSet::classical().surface_value(0).is_zero());
    }
}
