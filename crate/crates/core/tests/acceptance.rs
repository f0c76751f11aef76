//! One line per acceptance criterion. Tolerances are exact unless pinned below.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use qdirac::cli::{run, RunConfig};
use qdirac::currents::{FieldFactor, Symbol};
use qdirac::dirac::{reduce, split, to_tilde, AffineMap, Scenario};
use qdirac::distcalc::{Dist2, ModeWindow};
use qdirac::qcoeff::{eval_q1, ExactRational, Scalar, TRational};
use qdirac::report::{Report, Status};

const N: usize = 12;
const BUDGET_N12: Duration = Duration::from_secs(120);
const BUDGET_N24: Duration = Duration::from_secs(900);

fn config(scenario: &str, n: usize) -> RunConfig {
    RunConfig { scenario: scenario.into(), window: n, ..RunConfig::default() }
}

fn timed_run(scenario: &str, n: usize) -> (Report, Duration) {
    let start = Instant::now();
    let r = run(&config(scenario, n)).expect("valid configuration");
    (r, start.elapsed())
}

fn deformed() -> &'static (Report, Duration) {
    static R: OnceLock<(Report, Duration)> = OnceLock::new();
    R.get_or_init(|| timed_run("q-sl2", N))
}

fn classical() -> &'static (Report, Duration) {
    static R: OnceLock<(Report, Duration)> = OnceLock::new();
    R.get_or_init(|| timed_run("classical-sl2", N))
}

fn window() -> ModeWindow {
    ModeWindow::new(N).unwrap()
}

/// Ids with the given prefix exist and none of them failed.
fn group(r: &Report, prefix: &str) -> Result<usize, String> {
    let hits: Vec<_> = r.checks.iter().filter(|c| c.id.starts_with(prefix)).collect();
    if hits.is_empty() {
        return Err(format!("no records under {prefix}"));
    }
    match hits.iter().find(|c| c.status == Status::Fail) {
        Some(c) => Err(format!("{} failed at mode {:?}: {} vs {}", c.id, c.mode, c.engine_value, c.expected_value)),
        None => Ok(hits.len()),
    }
}

fn groups(r: &Report, prefixes: &[&str]) -> Result<(), String> {
    prefixes.iter().try_for_each(|p| group(r, p).map(|_| ()))
}

fn status_of(r: &Report, id: &str) -> Option<Status> {
    r.find(id).map(|c| c.status)
}

// Independent oracles: q-integers as explicit sums of powers of q.

fn q_int(n: i64) -> Scalar {
    let m = n.abs();
    let mut acc = Scalar::zero();
    for k in 0..m {
        acc = &acc + &Scalar::q_pow(m - 1 - 2 * k);
    }
    if n < 0 {
        -&acc
    } else {
        acc
    }
}

fn eps() -> Scalar {
    &Scalar::q_pow(1) - &Scalar::q_pow(-1)
}

fn half() -> ExactRational {
    ExactRational::from_frac(1, 2)
}

/// Ẽ⁻ form of the deformed bracket, coefficient of `(z/w)ⁿ`, before the residual factor.
fn qvir_quad(n: i64) -> Scalar {
    if n == 0 {
        return Scalar::zero();
    }
    let k = (&(&Scalar::i() * &q_int(2)) * &(&eps() * &eps())).scale_exact(&half());
    &k * &(&(&q_int(n) * &q_int(n)) / &q_int(2 * n))
}

fn qvir_cent(n: i64) -> Scalar {
    -&(&(&Scalar::i() * &(&eps() * &eps())) * &q_int(2 * n))
}

fn check_affine(weight: Option<i64>) -> Result<(), String> {
    let w = window();
    let sc = Scenario::from_key("q-sl2", w, weight).map_err(|e| e.to_string())?;
    let red = reduce(sc.current, &sc.table, &sc.constraints).map_err(|e| e.to_string())?;
    let [q, lz, lw, c] = to_tilde(&split(&red.result), &AffineMap::standard());
    // weight on: the residual q^{-2|n|} is absorbed
    let rho = |n: i64| if weight.is_some() { Scalar::one() } else { Scalar::q_pow(-2 * n.abs()) };
    for n in w.nonzero_modes() {
        // x = w/z, so mode n here is (z/w)^{-n}
        let (wq, wc) = (&rho(n) * &qvir_quad(-n), &rho(n) * &qvir_cent(-n));
        if q.coeff(n) != &wq || c.coeff(n) != &wc || !lz.coeff(n).is_zero() || !lw.coeff(n).is_zero() {
            return Err(format!("mode {n}: quad {} want {wq}; cent {} want {wc}", q.coeff(n), c.coeff(n)));
        }
    }
    let free = [&q, &lz, &lw, &c].iter().chain(split(&red.result).iter().collect::<Vec<_>>().iter()).all(|d| d.coeffs().all(|(_, s)| s.is_rational_sector()));
    if !free {
        return Err("t or r component in a final coefficient".into());
    }
    Ok(())
}

fn criterion1() -> Result<(), String> {
    groups(&deformed().0, &["exchange."])
}

fn criterion2() -> Result<(), String> {
    let r = &deformed().0;
    groups(r, &["constraint.", "bracket.", "ope.e+e-.", "ope.e-e+."])?;
    for tag in ["e+e-", "e-e+"] {
        for id in ["poles", "fusion.z=w*s^-2", "fusion.z=w*s^2"] {
            let full = format!("ope.{tag}.{id}");
            if status_of(r, &full) != Some(Status::Pass) {
                return Err(format!("{full} missing or failed"));
            }
        }
    }
    Ok(())
}

fn criterion3() -> Result<(), String> {
    let r = &deformed().0;
    groups(r, &["modes.k1.", "modes.k2.h-", "modes.k3.h-", "serre."])
}

fn criterion4() -> Result<(), String> {
    let r = &deformed().0;
    groups(r, &["dirac.matrix.", "dirac.inverse.pairing", "dirac.inverse.reference"])?;
    let m0 = r.find("dirac.inverse.mode0").ok_or("mode-0 record missing")?;
    if m0.status != Status::DiscrepancyDocumented || m0.engine_value.is_empty() || m0.expected_value.is_empty() {
        return Err(format!("mode-0 record is {:?} without both values", m0.status));
    }
    Ok(())
}

fn criterion5() -> Result<(), String> {
    let w = window();
    let sc = Scenario::from_key("classical-sl2", w, None).map_err(|e| e.to_string())?;
    let red = reduce(sc.current, &sc.table, &sc.constraints).map_err(|e| e.to_string())?;
    let i = Scalar::i();
    let lin = Dist2::from_fn(w, |n| (-&i).scale_exact(&ExactRational::from_int(n)));
    let cen = Dist2::from_fn(w, |n| i.scale_exact(&ExactRational::from_frac(n * n * n, 2)));
    let ez = FieldFactor::z(Symbol::EMinus);
    let ew = FieldFactor::w(Symbol::EMinus);
    let got = [red.result.coefficient(&[ez, ew]), red.result.coefficient(&[ez]), red.result.coefficient(&[ew]), red.result.coefficient(&[])];
    let want = [Dist2::zero(w), lin.clone(), lin, cen];
    if let Some(k) = got.iter().zip(&want).position(|(a, b)| a != b) {
        return Err(format!("part {k}: {} vs {}", got[k], want[k]));
    }
    groups(&classical().0, &["reduce.classical-sl2.", "virasoro.jacobi"])?;
    groups(&deformed().0, &["virasoro.jacobi"])
}

fn criterion6() -> Result<(), String> {
    check_affine(None)?;
    check_affine(Some(2))?;
    groups(&deformed().0, &["affine.", "reduce.q-sl2."])
}

fn criterion7() -> Result<(), String> {
    let r = &deformed().0;
    groups(r, &["limit.engine.", "limit.reference."])?;
    let central = r.find("limit.engine.central").ok_or("central record missing")?;
    if central.engine_value.is_empty() {
        return Err("central record carries no engine value".into());
    }
    Ok(())
}

fn criterion8() -> Result<(), String> {
    for n in -24i64..=24 {
        let q1 = eval_q1(&q_int(n)).map_err(|e| e.to_string())?;
        let qn = &Scalar::q_pow(n) + &Scalar::q_pow(-n);
        if q_int(2 * n) != &q_int(n) * &qn || q_int(-n) != -&q_int(n) || q1 != TRational::rational(ExactRational::from_int(n)) {
            return Err(format!("q-integer identity fails at n = {n}"));
        }
        if qdirac::qcoeff::qint(n) != q_int(n) {
            return Err(format!("library [n] differs from the power sum at n = {n}"));
        }
    }
    let r = &deformed().0;
    let anti: Vec<_> = r.checks.iter().filter(|c| c.id.contains("antisymmetry") || c.id.ends_with("reflection")).collect();
    if anti.len() < 4 || anti.iter().any(|c| c.status == Status::Fail) {
        return Err(format!("{} antisymmetry records, some failing", anti.len()));
    }
    groups(&classical().0, &["reduce.classical-sl2.antisymmetry"])?;
    let again = run(&config("q-sl2", N)).map_err(|e| e.to_string())?;
    let a = serde_json::to_string(&r.without_timings()).unwrap();
    let b = serde_json::to_string(&again.without_timings()).unwrap();
    if a != b {
        return Err("two runs differ outside timings".into());
    }
    Ok(())
}

fn criterion9() -> Result<(), String> {
    let t12 = deformed().1 + classical().1;
    if t12 >= BUDGET_N12 {
        return Err(format!("N = 12 took {t12:?}"));
    }
    let (r24, t24) = timed_run("q-sl2", 24);
    println!("  full suite: N = 12 in {:.2?}, N = 24 in {:.2?}", t12, t24);
    for (suite, secs) in &r24.durations {
        println!("  N = 24 {suite}: {secs:.3} s");
    }
    if !r24.all_passed() {
        return Err(format!("N = 24 run has failures: {:?}", r24.failures().map(|c| &c.id).collect::<Vec<_>>()));
    }
    if t24 >= BUDGET_N24 {
        return Err(format!("N = 24 took {t24:?}"));
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Result<(), String>); 9] = [
        ("exchange relations", criterion1),
        ("OPEs and constraint commutators", criterion2),
        ("mode algebra and Serre relations", criterion3),
        ("Dirac matrix and inverse", criterion4),
        ("classical reduction and Virasoro Jacobi", criterion5),
        ("deformed reduction in the E~ form", criterion6),
        ("classical limit", criterion7),
        ("q-integers, antisymmetry, determinism", criterion8),
        ("performance envelope", criterion9),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(()) => println!("criterion {}: PASS {name}", k + 1),
            Err(e) => {
                println!("criterion {}: FAIL {name}: {e}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
