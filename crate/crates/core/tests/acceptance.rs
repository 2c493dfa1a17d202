//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Every comparison is exact: dimensions, ranks and group-ring or matrix
//! identities are compared with `==`, so the tolerance is zero throughout.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use alexinv::alex_module::{
    chen_check, chen_closed_form, coker_dims, delta3, nabla, nabla_bar, truncated_cokernel, vanishing_degree,
};
use alexinv::budget::Budget;
use alexinv::cli::{bb_dims, BbMethod};
use alexinv::fox_alex::{
    fox_derivative, random_word, torsion_sweep_within, Character, GroupPresentation, GroupRingElement, TwistedHomology,
};
use alexinv::johnson::{check_equivariance, decompose_with, johnson_report_with, JohnsonData};
use alexinv::nilpotent_transport::{annihilator_exponent_match, exp_transport, is_nilpotent, laurent_module_of, log_transport, ExponentMatch};
use alexinv::quad_lie::random_presentation;
use alexinv::rep_semisimple::{weyl_dim, HighestWeight, LieAlgebraSpec};
use alexinv::{CyclotomicScalar, Rational};

const SEED: u64 = 20_240_601;

/// Exact comparisons only.
const TOLERANCE: u64 = 0;

const CHEN_GENERATORS: [usize; 3] = [2, 3, 4];
const CHEN_MAX_DEGREE: usize = 5;

const PRESENTATION_SAMPLES: usize = 60;
const PRESENTATION_MAX_DIM_V: usize = 4;
const PRESENTATION_MAX_RELATIONS: usize = 4;
const PRESENTATION_MAX_DEGREE: usize = 4;

const EQUIVARIANCE_PAIRS: usize = 20;
const NILPOTENCE_PAIRS: usize = 24;
const NILPOTENCE_MAX_DEGREE: usize = 3;

const FREE_GROUP_CHARACTERS: usize = 100;
const Z2_CHARACTERS: usize = 60;
const SWEEP_ORDERS: [u64; 3] = [2, 3, 4];

const FOX_WORDS: usize = 200;
const FOX_MAX_LEN: usize = 20;
const FOX_GENERATORS: usize = 4;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

#[allow(clippy::absurd_extreme_comparisons)]
fn exact_eq(a: u64, b: u64) -> bool {
    a.abs_diff(b) <= TOLERANCE
}

fn err(e: alexinv::Error) -> String {
    e.to_string()
}

fn sl_weight(n: usize, q: usize) -> HighestWeight {
    let mut hw = HighestWeight::zero(n - 1);
    hw.0[0] += q as u32;
    if n > 2 {
        hw.0[1] += 1;
    }
    hw
}

fn two_lambda_two(g: usize) -> HighestWeight {
    let mut hw = HighestWeight::zero(g);
    hw.0[1] = 2;
    hw
}

fn criterion_1() -> Outcome {
    for n in CHEN_GENERATORS {
        let dims = coker_dims(&delta3(n), CHEN_MAX_DEGREE);
        for q in 0..=CHEN_MAX_DEGREE {
            let want = chen_closed_form(n, q);
            let got = dims.get(q).unwrap() as u64;
            ensure(exact_eq(got, want), || format!("n={n} q={q}: coker {got}, closed form {want}"))?;
        }
    }
    Ok(format!("{} (n, q) pairs", CHEN_GENERATORS.len() * (CHEN_MAX_DEGREE + 1)))
}

fn criterion_2() -> Outcome {
    let budget = Budget::unlimited();
    for n in CHEN_GENERATORS {
        let spec = LieAlgebraSpec::special_linear(n);
        for q in 0..=CHEN_MAX_DEGREE {
            let w = weyl_dim(&spec, &sl_weight(n, q)).map_err(err)?;
            let want = chen_closed_form(n, q);
            ensure(exact_eq(w, want), || format!("n={n} q={q}: Weyl {w}, closed form {want}"))?;
            let c = chen_check(n, q, &budget).map_err(err)?;
            ensure(c.highest_vector_nonzero, || format!("n={n} q={q}: e1^q (e1^e2) maps to zero"))?;
        }
    }
    Ok("Weyl dimensions match and every highest vector survives".into())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let budget = Budget::unlimited();
    let mut nontrivial = 0;
    for k in 0..PRESENTATION_SAMPLES {
        let p = random_presentation(&mut rng, PRESENTATION_MAX_DIM_V, PRESENTATION_MAX_RELATIONS);
        let a = bb_dims(&p, PRESENTATION_MAX_DEGREE, BbMethod::Nabla, &budget).map_err(err)?;
        let b = bb_dims(&p, PRESENTATION_MAX_DEGREE, BbMethod::NablaBar, &budget).map_err(err)?;
        let c = bb_dims(&p, PRESENTATION_MAX_DEGREE, BbMethod::Direct, &budget).map_err(err)?;
        ensure(a == b && b == c, || {
            format!("sample {k} ({}): nabla {:?}, nabla-bar {:?}, direct {:?}", p.to_json(), a.dims, b.dims, c.dims)
        })?;
        if a.dims.iter().any(|&d| d > 0) && !p.relations().is_empty() {
            nontrivial += 1;
        }
    }
    Ok(format!("{PRESENTATION_SAMPLES} presentations, {nontrivial} with relations and nonzero invariant"))
}

fn criterion_4() -> Outcome {
    let budget = Budget::unlimited();
    let g3 = JohnsonData::new(3, &budget).map_err(err)?;
    let d3 = decompose_with(&g3).map_err(err)?;
    let dims3: Vec<usize> = d3.summands.iter().map(|s| s.dim).collect();
    ensure(dims3 == [0, 90, 1] && d3.total == 91 && d3.dim_v == 14, || format!("genus 3: {dims3:?}, V {}", d3.dim_v))?;
    ensure(d3.summands[1].weyl_dim == Some(90), || "genus 3: Weyl dimension of V(2λ₂) differs".into())?;

    let g4 = JohnsonData::new(4, &budget).map_err(err)?;
    let d4 = decompose_with(&g4).map_err(err)?;
    let w = weyl_dim(&LieAlgebraSpec::symplectic(4), &two_lambda_two(4)).map_err(err)?;
    ensure(d4.summands.len() == 3 && d4.total == 1128, || format!("genus 4 total {}", d4.total))?;
    ensure(d4.summands[2].dim == 1, || format!("genus 4 invariant part {}", d4.summands[2].dim))?;
    ensure(d4.summands[1].dim as u64 == w, || format!("genus 4: Casimir {} vs Weyl {w}", d4.summands[1].dim))?;
    // R: Casimir-path dimension against the Weyl dimensions of its constituents
    let spec = LieAlgebraSpec::symplectic(4);
    let r_weyl: u64 = d4.r_constituents.iter().map(|(hw, m)| weyl_dim(&spec, hw).unwrap() * *m as u64).sum();
    ensure(r_weyl == d4.summands[0].dim as u64, || format!("genus 4: R {} vs Weyl {r_weyl}", d4.summands[0].dim))?;
    ensure(d4.r_constituents.iter().all(|(_, m)| *m == 1), || "genus 4: R has a repeated constituent".into())?;
    Ok(format!("genus 3 (0, 90, 1); genus 4 ({}, {}, 1) = 1128", d4.summands[0].dim, d4.summands[1].dim))
}

fn criterion_5() -> Outcome {
    let budget = Budget::unlimited();
    let mut parts = Vec::new();
    for g in [3, 4] {
        let data = JohnsonData::new(g, &budget).map_err(err)?;
        let report = johnson_report_with(&data, 0, &budget).map_err(err)?;
        let w = weyl_dim(&LieAlgebraSpec::symplectic(g), &two_lambda_two(g)).map_err(err)?;
        ensure(report.m[0] as u64 == 1 + w, || format!("genus {g}: M_0 = {}, 1 + Weyl = {}", report.m[0], 1 + w))?;
        let checked = check_equivariance(&data, 1, EQUIVARIANCE_PAIRS, SEED + g as u64).map_err(err)?;
        ensure(checked == EQUIVARIANCE_PAIRS, || format!("genus {g}: only {checked} pairs checked"))?;
        parts.push(format!("g={g} M_0={}", report.m[0]));
    }
    Ok(format!("{}, {EQUIVARIANCE_PAIRS} equivariance pairs each", parts.join(", ")))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut counts = [0usize; 2];
    for k in 0..NILPOTENCE_PAIRS {
        // alternate between the two cokernel presentations
        let p = random_presentation(&mut rng, 3, 3);
        let map = if k % 2 == 0 { nabla_bar(&p) } else { nabla(&p) };
        let c = truncated_cokernel(&map, NILPOTENCE_MAX_DEGREE);
        let module = laurent_module_of(&c).map_err(err)?;
        let report = is_nilpotent(&module);
        ensure(report.nilpotent, || format!("pair {k}: module is not nilpotent"))?;
        let m = annihilator_exponent_match(&module, &c.dims).map_err(err)?;
        let expected = vanishing_degree(&c.dims).map_err(err)?.unwrap_or(NILPOTENCE_MAX_DEGREE + 1);
        match m {
            ExponentMatch::Agree { exponent } if exponent == expected => counts[0] += 1,
            ExponentMatch::VacuousAgreement { exponent, .. } if exponent == expected => counts[1] += 1,
            other => return Err(format!("pair {k} ({}): {other:?}, dims {:?}", p.to_json(), c.dims.dims)),
        }
        let logs = log_transport(&module).map_err(err)?;
        ensure(logs.actions() == c.actions.as_slice(), || format!("pair {k}: log(exp X) != X"))?;
        ensure(exp_transport(&logs).map_err(err)? == module, || format!("pair {k}: exp(log T) != T"))?;
        ensure(logs.annihilator_exponent() == report.exponent, || format!("pair {k}: transported exponent differs"))?;
    }
    Ok(format!("{NILPOTENCE_PAIRS} pairs, {} vanishing in range, {} vacuous", counts[0], counts[1]))
}

fn random_rational_character<R: Rng>(rng: &mut R, n: usize) -> Character {
    loop {
        let vals: Vec<Rational> = (0..n)
            .map(|_| {
                let num = rng.gen_range(1..=9i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
                Rational::new(num, rng.gen_range(1..=9))
            })
            .collect();
        let c = Character::rational(&vals).unwrap();
        if !c.is_trivial() {
            return c;
        }
    }
}

fn random_torsion_character<R: Rng>(rng: &mut R, n: usize) -> Character {
    loop {
        let m = rng.gen_range(2..=12u64);
        let e: Vec<i64> = (0..n).map(|_| rng.gen_range(0..m as i64)).collect();
        let c = Character::torsion(m, &e);
        if !c.is_trivial() {
            return c;
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    for k in 0..FREE_GROUP_CHARACTERS {
        let n = rng.gen_range(2..=4);
        let th = TwistedHomology::new(&GroupPresentation::free(n));
        let rho = if k % 2 == 0 { random_rational_character(&mut rng, n) } else { random_torsion_character(&mut rng, n) };
        let h1 = th.h1_dim(&rho).map_err(err)?;
        ensure(h1 >= 1, || format!("F_{n} at {rho}: H_1 has dimension {h1}"))?;
    }
    let z2 = TwistedHomology::new(&GroupPresentation::free_abelian(2));
    for k in 0..Z2_CHARACTERS {
        let rho = if k % 2 == 0 { random_rational_character(&mut rng, 2) } else { random_torsion_character(&mut rng, 2) };
        let h1 = z2.h1_dim(&rho).map_err(err)?;
        ensure(h1 == 0, || format!("Z^2 at {rho}: H_1 has dimension {h1}"))?;
    }
    let z2p = GroupPresentation::free_abelian(2);
    for m in SWEEP_ORDERS {
        let found = torsion_sweep_within(&z2p, m, 1, false, &Budget::unlimited()).map_err(err)?;
        ensure(found == vec![Character::trivial(2)], || format!("Z^2 sweep m={m}: {found:?}"))?;
    }
    // mixed value fields in one character
    let rho = Character::new(vec![CyclotomicScalar::zeta(3, 1), CyclotomicScalar::from_rational(Rational::new(-5, 2))]).unwrap();
    ensure(z2.h1_dim(&rho).map_err(err)? == 0, || "Z^2 at a mixed character".into())?;
    Ok(format!("{FREE_GROUP_CHARACTERS} free-group characters, {Z2_CHARACTERS} Z^2 characters, sweeps m=2..4"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    for k in 0..FOX_WORDS {
        let w = random_word(&mut rng, FOX_GENERATORS, FOX_MAX_LEN);
        let mut lhs = GroupRingElement::zero();
        for j in 0..FOX_GENERATORS {
            let xj = GroupRingElement::from_word(&[j as i32 + 1]).sub(&GroupRingElement::one());
            lhs = lhs.add(&fox_derivative(&w, j).mul(&xj));
        }
        let rhs = GroupRingElement::from_word(&w).sub(&GroupRingElement::one());
        ensure(lhs == rhs, || format!("word {k}: {w:?}"))?;
    }
    Ok(format!("{FOX_WORDS} words of length at most {FOX_MAX_LEN}"))
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let lie = write("lie.json", r#"{"dim_v":4,"relations":[[{"i":0,"j":1,"c":1},{"i":2,"j":3,"c":-1}],[{"i":0,"j":2,"c":"1/2"}]]}"#);
    let group = write("group.json", r#"{"generators":3,"relators":[[1,2,-1,-2],[3,3,-1]]}"#);
    let module = write("module.json", r#"{"dim":3,"actions":[[[1,1,0],[0,1,1],[0,0,1]],[[1,0,2],[0,1,0],[0,0,1]]]}"#);
    let commands: Vec<Vec<String>> = [
        vec!["witt", "-n", "3", "-q", "6"],
        vec!["chen", "-n", "3", "-q", "4"],
        vec!["bb", "--presentation", &lie, "--max-degree", "3", "--method", "nabla"],
        vec!["bb", "--presentation", &lie, "--max-degree", "3", "--method", "nabla-bar"],
        vec!["bb", "--presentation", &lie, "--max-degree", "3", "--method", "direct"],
        vec!["johnson", "--genus", "3", "--max-degree", "1"],
        vec!["decompose", "--genus", "3"],
        vec!["fox", "--presentation", &group],
        vec!["cv", "--presentation", &group, "--depth", "1", "--character", "1,zeta_4,-1"],
        vec!["cv", "--presentation", &group, "--depth", "1", "--torsion", "3", "--restricted"],
        vec!["nilpotence", "--module", &module],
        vec!["oracle-check"],
        vec!["--csv", "johnson", "--genus", "3", "--max-degree", "0"],
        vec!["johnson", "--genus", "9", "--max-degree", "0"],
    ]
    .iter()
    .map(|c| c.iter().map(|s| s.to_string()).collect())
    .collect();
    for args in &commands {
        let run = || Command::new(env!("CARGO_BIN_EXE_alexinv")).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (run()?, run()?);
        ensure(a.stdout == b.stdout && a.stderr == b.stderr && a.status.code() == b.status.code(), || {
            format!("`alexinv {}` differs between runs", args.join(" "))
        })?;
        ensure(a.status.code().is_some_and(|c| c == 0 || c == 3), || {
            format!("`alexinv {}` exited with {:?}: {}", args.join(" "), a.status.code(), String::from_utf8_lossy(&a.stderr))
        })?;
    }
    Ok(format!("{} commands, two runs each", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("coker δ₃ matches the closed form", criterion_1),
        ("highest-weight identification", criterion_2),
        ("three presentations of the invariant agree", criterion_3),
        ("decomposition of ∧²V", criterion_4),
        ("Johnson module in degree 0 and equivariance", criterion_5),
        ("annihilator exponents and log/exp transport", criterion_6),
        ("characteristic-variety point tests", criterion_7),
        ("Fox fundamental identity", criterion_8),
        ("CLI determinism", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.1}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
