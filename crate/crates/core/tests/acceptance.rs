//! End-to-end acceptance checks. Prints one line per criterion and exits
//! nonzero unless every failure is one of the documented ones.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use superint::catalog::{self, match_nlcc, template_match, verify_potential};
use superint::compat::{
    chain_eliminate, classify, reduce_trivial, table_reduced, table_w, ChainSystem, ExoticClass,
    RemovalReason,
};
use superint::deteq::{counts, cross_check, determining_system, AMap, IntegralAnsatz};
use superint::painleve::{painleve_test, OdeSpec, Verdict};
use superint::symcore::{DPoly, Var};

/// Entries whose resonance check fails; see `c8_resonances`.
const KNOWN_RESONANCE_FAILURES: &[&str] = &["N7-II", "N8-II", "N9-II", "N10-II"];

/// Wall-clock budget for a single `counts` call.
const COUNTS_BUDGET: Duration = Duration::from_millis(1);
const CROSS_CHECK_SAMPLES: usize = 20;
const CHAINS: usize = 100;

struct Outcome {
    pass: bool,
    /// A failure that matches the recorded analysis exactly.
    known: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        known: false,
        detail: detail.into(),
    }
}

fn formula(n: usize) -> (usize, usize) {
    let det = (0..=(n as i64 + 1) / 2)
        .map(|l| (n as i64 - 2 * l + 2) as usize)
        .sum();
    let cof = if n % 2 == 1 {
        (n + 1) * (n + 3) / 4
    } else {
        (n + 2) * (n + 2) / 4
    };
    (det, cof)
}

fn c1_counts() -> Outcome {
    let mut slowest = Duration::ZERO;
    for n in 2..=12 {
        let t = Instant::now();
        let got = counts(n);
        slowest = slowest.max(t.elapsed());
        if got != formula(n) {
            return outcome(false, format!("N={n}: {got:?} vs {:?}", formula(n)));
        }
    }
    outcome(
        slowest < COUNTS_BUDGET,
        format!("N=2..12, slowest call {slowest:?}"),
    )
}

fn random_rational(rng: &mut StdRng) -> DPoly {
    let num = rng.gen_range(-6..=6);
    let den = rng.gen_range(1..=5);
    DPoly::frac(num, den)
}

fn c2_oracle(rng: &mut StdRng) -> Outcome {
    let mut compared = 0;
    for n in 2..=5 {
        for _ in 0..CROSS_CHECK_SAMPLES {
            let full = IntegralAnsatz::full(n);
            let mut a = AMap::new();
            for &t in full.a.keys() {
                if rng.gen_bool(0.5) {
                    a.insert(t, random_rational(rng));
                }
            }
            if a.values().all(DPoly::is_zero) {
                a.insert((0, n, 0), DPoly::one());
            }
            let ans = IntegralAnsatz::new(n, a).expect("nonzero ansatz");
            let r = cross_check(&ans, usize::MAX);
            compared += r.compared;
            if !r.agrees() {
                return outcome(
                    false,
                    format!(
                        "N={n}: {} mismatches, first {:?}",
                        r.mismatches.len(),
                        r.mismatches[0]
                    ),
                );
            }
        }
    }
    outcome(
        true,
        format!("{} A-maps, {compared} equations", 4 * CROSS_CHECK_SAMPLES),
    )
}

fn c3_x_integral() -> Outcome {
    let mut a = AMap::new();
    a.insert((0, 2, 0), DPoly::frac(1, 2));
    a.insert((0, 0, 2), DPoly::frac(-1, 2));
    let mut ans = IntegralAnsatz::new(2, a).unwrap();
    ans.f
        .insert((0, 2), &DPoly::jet("V1", 0) - &DPoly::jet("V2", 0));
    let sys = determining_system(&ans);
    outcome(
        sys.is_identically_zero(),
        format!("{} equations", sys.equation_count()),
    )
}

fn random_term(rng: &mut StdRng) -> DPoly {
    let mut t = random_rational(rng);
    t = &t * &DPoly::x().pow(rng.gen_range(0..=2));
    t = &t * &DPoly::y().pow(rng.gen_range(0..=2));
    if rng.gen_bool(0.6) {
        t = &t * &DPoly::jet("V1", rng.gen_range(-1..=2)).pow(rng.gen_range(1..=2));
    }
    if rng.gen_bool(0.6) {
        t = &t * &DPoly::jet("V2", rng.gen_range(-1..=2)).pow(rng.gen_range(1..=2));
    }
    t
}

fn c4_elimination(rng: &mut StdRng) -> Outcome {
    for i in 0..CHAINS {
        let n = 2 + i % 5;
        let f: Vec<DPoly> = (0..n)
            .map(|_| {
                (0..rng.gen_range(1..=3)).fold(DPoly::zero(), |acc, _| &acc + &random_term(rng))
            })
            .collect();
        let g = (0..=n)
            .map(|j| {
                let mut gj = DPoly::zero();
                if j > 0 {
                    gj += f[j - 1].differentiate(Var::X);
                }
                if j < n {
                    gj += f[j].differentiate(Var::Y);
                }
                gj
            })
            .collect();
        let unknowns = (0..n).map(|j| format!("f_{j}_2")).collect();
        let c = ChainSystem::new(g, unknowns, 1).unwrap();
        if !c.defects(&f).iter().all(DPoly::is_zero) {
            return outcome(
                false,
                format!("chain {i}: the known solution does not solve it"),
            );
        }
        match chain_eliminate(&c) {
            Ok(r) if r.is_zero() => {}
            Ok(r) => return outcome(false, format!("chain {i} (n={n}): residual {r}")),
            Err(e) => return outcome(false, format!("chain {i}: {e}")),
        }
    }
    outcome(true, format!("{CHAINS} chains, n=2..6"))
}

fn c5_classify() -> Outcome {
    let mut bad = Vec::new();
    for n in [3, 5, 7, 9] {
        if classify(&IntegralAnsatz::family_one(n)).class != ExoticClass::DoublyExotic {
            bad.push(format!("I N={n}"));
        }
    }
    for n in 5..=10 {
        if classify(&IntegralAnsatz::family_two(n)).class != ExoticClass::DoublyExotic {
            bad.push(format!("II N={n}"));
        }
    }
    let mut a = AMap::new();
    a.insert((3, 0, 0), DPoly::one());
    a.insert((0, 3, 0), DPoly::param("cgamma"));
    if classify(&IntegralAnsatz::new(3, a).unwrap()).class != ExoticClass::Standard {
        bad.push("generic N=3".into());
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "10 doubly-exotic, 1 standard".to_string()
        } else {
            bad.join(", ")
        },
    )
}

fn c6_trivial() -> Outcome {
    let ansatz = |n: usize| {
        let terms: Vec<_> = table_w(n).unwrap().into_iter().collect();
        IntegralAnsatz::with_terms(n, &terms).unwrap()
    };
    if !reduce_trivial(&ansatz(4)).is_empty() {
        return outcome(false, "W4 does not reduce to nothing");
    }
    for n in [6, 8, 10] {
        let r = reduce_trivial(&ansatz(n));
        if r.terms() != table_reduced(n).unwrap() {
            return outcome(false, format!("N={n}: reduced set differs from the table"));
        }
    }
    let syz: BTreeSet<_> = reduce_trivial(&ansatz(8))
        .removed
        .into_iter()
        .filter(|r| matches!(r.reason, RemovalReason::Syzygy { .. }))
        .map(|r| r.term)
        .collect();
    outcome(
        syz.len() == 2,
        format!("N=4,6,8,10 reduced; N=8 syzygies {syz:?}"),
    )
}

fn c7_nlcc() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for id in ["N5-II", "N6-II"] {
        match match_nlcc(catalog::get(id).unwrap()) {
            Ok(m) => {
                pass &= m.matched && !m.mapping.is_empty();
                parts.push(format!(
                    "{id} matched={} ({} constants)",
                    m.matched,
                    m.mapping.len()
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{id}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

/// Fails for N7-II..N10-II as transcribed: the condition at r = 6 contains a
/// nonzero number among its coefficients, so no choice of the constants
/// satisfies it.
fn c8_resonances() -> Outcome {
    let mut failed = Vec::new();
    for e in catalog::all() {
        let want: Vec<i64> = e
            .expected_resonances
            .iter()
            .copied()
            .filter(|&r| r > 0)
            .collect();
        if !painleve_test(&e.ode).has_passing_resonances(&want) {
            failed.push(e.id.clone());
        }
    }
    let n = catalog::all().len();
    let known = !failed.is_empty()
        && failed
            .iter()
            .all(|id| KNOWN_RESONANCE_FAILURES.contains(&id.as_str()));
    Outcome {
        known,
        ..outcome(
            failed.is_empty(),
            format!(
                "{}/{n} entries; failing: {}",
                n - failed.len(),
                if failed.is_empty() {
                    "none".into()
                } else {
                    failed.join(", ")
                }
            ),
        )
    }
}

fn c9_p1() -> Outcome {
    let ode = OdeSpec::parse("indep z\ndep F order 2\neq F'' = 6*F^2 + z\n").unwrap();
    let r = painleve_test(&ode);
    let Some(b) = r.branches.first() else {
        return outcome(false, "no balance");
    };
    let p = b.balance.p_integer();
    let a0 = b.balance.a0.exact().cloned();
    let res = b
        .resonances
        .as_ref()
        .map(|s| s.integers.clone())
        .unwrap_or_default();
    let pass = r.branches.len() == 1
        && p == Some(-2)
        && a0 == Some(DPoly::one())
        && res == [-1, 6]
        && r.verdict == Verdict::Pass;
    outcome(
        pass,
        format!(
            "p={p:?} a0={} resonances={res:?} verdict={}",
            a0.map(|a| a.to_string()).unwrap_or_default(),
            r.verdict.as_str()
        ),
    )
}

fn c10_classical() -> Outcome {
    let e = catalog::get("N5-I").unwrap();
    let r = painleve_test(&e.ode.with_value("hbar", &DPoly::zero()));
    outcome(
        !r.verdict.passes(),
        format!("N5-I at hbar=0: {}", r.verdict.as_str()),
    )
}

/// Fails: the compatibility conditions force cgamma*omega1^5 + sgamma*omega2^5 = 0,
/// which the literal choice omega1^5 = cgamma, omega2^5 = -sgamma violates.
fn c11_rescaled() -> Outcome {
    let r = match verify_potential(catalog::get("N3-I").unwrap(), None) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let residuals: Vec<&String> = r.levels.iter().flat_map(|l| &l.literal_residuals).collect();
    let constraints: Vec<&String> = r.levels.iter().flat_map(|l| &l.constraints).collect();
    let pass = r.passes() && residuals.is_empty();
    let known = constraints == ["omega2^5*sgamma + cgamma*omega1^5 = 0"]
        && residuals == ["omega2^10 - omega1^10 = 0"];
    Outcome {
        known: !pass && known,
        ..outcome(
            pass,
            format!("constraints {constraints:?}; residual at the literal constants {residuals:?}"),
        )
    }
}

fn c12_templates() -> Outcome {
    let bad: Vec<String> = catalog::all()
        .iter()
        .filter(|e| !template_match(&e.ode, e.template()).matched)
        .map(|e| e.id.clone())
        .collect();
    outcome(
        bad.is_empty(),
        format!("{} entries; unmatched: {bad:?}", catalog::all().len()),
    )
}

fn main() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let checks: Vec<(usize, &str, Box<dyn FnOnce(&mut StdRng) -> Outcome>)> = vec![
        (1, "equation and unknown counts", Box::new(|_| c1_counts())),
        (
            2,
            "determining equations agree with [H, Y]",
            Box::new(c2_oracle),
        ),
        (3, "N=2 separable integral", Box::new(|_| c3_x_integral())),
        (4, "chain elimination identity", Box::new(c4_elimination)),
        (5, "exotic classification", Box::new(|_| c5_classify())),
        (6, "trivial-term reduction", Box::new(|_| c6_trivial())),
        (7, "NLCC matches catalog ODEs", Box::new(|_| c7_nlcc())),
        (8, "catalog resonances pass", Box::new(|_| c8_resonances())),
        (9, "Painleve I", Box::new(|_| c9_p1())),
        (10, "classical limit fails", Box::new(|_| c10_classical())),
        (11, "rescaled N=3 potential", Box::new(|_| c11_rescaled())),
        (12, "template shapes", Box::new(|_| c12_templates())),
    ];
    let mut out = std::io::stdout().lock();
    let mut blocking = Vec::new();
    for (k, name, check) in checks {
        let t = Instant::now();
        let o = check(&mut rng);
        let tag = match (o.pass, o.known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        writeln!(
            out,
            "criterion {k:>2} {tag}: {name} [{:.2?}] {}",
            t.elapsed(),
            o.detail
        )
        .unwrap();
        if !o.pass && !o.known {
            blocking.push(k);
        }
    }
    if !blocking.is_empty() {
        writeln!(out, "failing criteria: {blocking:?}").unwrap();
        std::process::exit(1);
    }
}
