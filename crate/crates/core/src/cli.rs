//! The `alexinv` command line front end.
//!
//! Output is JSON on stdout, or `key,value` lines with `--csv`. Exit codes:
//! 0 success, 2 usage or input error, 3 resource budget exceeded, 4 internal
//! inconsistency or oracle mismatch.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::alex_module::{chen_check, coker_dims_within, nabla, nabla_bar, truncated_cokernel, vanishing_degree};
use crate::budget::{Budget, ENTRY_BUDGET_VAR};
use crate::error::{Error, Result};
use crate::fox_alex::{
    fox_derivative, random_word, torsion_sweep_within, Character, GroupPresentation, GroupRingElement, TwistedHomology,
};
use crate::free_lie::{lyndon_basis, witt_number, GradedDims};
use crate::johnson::{check_scale, decompose_with, johnson_report_with, JohnsonData};
use crate::nilpotent_transport::{
    annihilator_exponent_match, exp_transport, is_nilpotent, laurent_module_of, log_transport, FinDimLaurentModule,
};
use crate::quad_lie::{random_presentation, LiePresentation, QuadraticLieAlgebra};
use crate::exact_linalg::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "alexinv", version, about = "Exact infinitesimal Alexander invariant computations")]
#[command(after_help = "Environment:\n  ALEXINV_MAX_ENTRIES  cap on matrix entries and enumeration sizes (default 4000000, 0 = unlimited)")]
struct Cli {
    /// Emit `key,value` lines instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BbMethod {
    Nabla,
    NablaBar,
    Direct,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lyndon word count of the free Lie algebra on n generators in degree q.
    Witt {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'q')]
        q: usize,
    },
    /// Compare coker δ₃ in degree q with the closed form.
    Chen {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'q')]
        q: usize,
    },
    /// Infinitesimal Alexander invariant dimensions of a quadratic presentation.
    Bb {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = BbMethod::NablaBar)]
        method: BbMethod,
    },
    /// Dimensions of the Johnson module C ⊕ coker(q).
    Johnson {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        allow_large: bool,
    },
    /// Decomposition of ∧²V into R, V(2λ₂) and V(0).
    Decompose {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        allow_large: bool,
    },
    /// Alexander matrix and Betti number of a group presentation.
    Fox {
        #[arg(long)]
        presentation: PathBuf,
    },
    /// Characteristic-variety point tests.
    #[command(group(ArgGroup::new("point").required(true).args(["character", "torsion"])))]
    Cv {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Comma separated values, rationals or `zeta_m^j`.
        #[arg(long, allow_hyphen_values = true)]
        character: Option<String>,
        /// Sweep all characters with values in the m-th roots of unity.
        #[arg(long)]
        torsion: Option<u64>,
        /// Only accept characters in the identity component of the torus.
        #[arg(long)]
        restricted: bool,
    },
    /// Nilpotence of a finite-dimensional Laurent module.
    Nilpotence {
        #[arg(long)]
        module: PathBuf,
    },
    /// Run the cross-validation suite.
    OracleCheck,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    match execute(&cli.command) {
        Ok((value, code)) => {
            let stdout = if cli.csv { to_csv(&value) } else { format!("{}\n", serde_json::to_string_pretty(&value).unwrap()) };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => error_outcome(e),
    }
}

fn error_outcome(e: Error) -> Outcome {
    match e {
        Error::BudgetExceeded { what, needed, limit } => {
            let reason = json!({
                "error": "budget_exceeded",
                "what": what,
                "needed": needed,
                "limit": limit,
                "hint": format!("raise {ENTRY_BUDGET_VAR} or use --allow-large where offered"),
            });
            Outcome {
                code: EXIT_BUDGET,
                stdout: format!("{}\n", serde_json::to_string_pretty(&reason).unwrap()),
                stderr: format!("error: resource budget exceeded: {what}\n"),
            }
        }
        e @ (Error::Inconsistent(_) | Error::EigenvalueCollision { .. } | Error::MultiplicityTooHigh { .. }) => {
            Outcome { code: EXIT_INCONSISTENT, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
        e => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn status(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    }
}

fn execute(cmd: &Command) -> Result<(Value, i32)> {
    let budget = Budget::from_env()?;
    match cmd {
        Command::Witt { n, q } => {
            if *q == 0 {
                return Err(Error::InvalidInput("degree must be positive".into()));
            }
            budget.check("Lyndon words", (*n as u64).saturating_pow(*q as u32))?;
            let count = lyndon_basis(*n, *q).len();
            let formula = witt_number(*n as u64, *q as u64);
            let v = json!({ "n": n, "q": q, "dim": count, "witt_formula": formula, "match": count as u64 == formula });
            Ok((v, status(count as u64 == formula)))
        }
        Command::Chen { n, q } => {
            let c = chen_check(*n, *q, &budget)?;
            let code = status(c.closed_form == c.computed as u64);
            Ok((serde_json::to_value(&c)?, code))
        }
        Command::Bb { presentation, max_degree, method } => {
            let p = LiePresentation::from_json(&read(presentation)?)?;
            let dims = bb_dims(&p, *max_degree, *method, &budget)?;
            let v = json!({
                "method": method,
                "dim_v": p.dim_v(),
                "num_relations": p.relations().len(),
                "max_degree": max_degree,
                "dims": dims.dims,
                "vanishing_degree": vanishing_degree(&dims)?,
            });
            Ok((v, EXIT_OK))
        }
        Command::Johnson { genus, max_degree, allow_large } => {
            check_scale(*genus, Some(*max_degree), *allow_large)?;
            let data = JohnsonData::new(*genus, &budget)?;
            let report = johnson_report_with(&data, *max_degree, &budget)?;
            Ok((serde_json::to_value(&report)?, EXIT_OK))
        }
        Command::Decompose { genus, allow_large } => {
            check_scale(*genus, None, *allow_large)?;
            let data = JohnsonData::new(*genus, &budget)?;
            Ok((serde_json::to_value(decompose_with(&data)?)?, EXIT_OK))
        }
        Command::Fox { presentation } => {
            let p = GroupPresentation::from_json(&read(presentation)?)?;
            let th = TwistedHomology::new(&p);
            let betti = th.h1_dim(&Character::trivial(p.num_generators()))?;
            let v = json!({
                "generators": p.num_generators(),
                "relators": p.relators(),
                "alexander_matrix": th.alexander_matrix().to_strings(),
                "betti_1": betti,
                "generic_h1_dim": th.generic_h1_dim()?,
            });
            Ok((v, EXIT_OK))
        }
        Command::Cv { presentation, depth, character, torsion, restricted } => {
            let p = GroupPresentation::from_json(&read(presentation)?)?;
            if let Some(m) = torsion {
                let found = torsion_sweep_within(&p, *m, *depth, *restricted, &budget)?;
                let v = json!({
                    "order": m,
                    "depth": depth,
                    "restricted": restricted,
                    "count": found.len(),
                    "characters": found,
                });
                return Ok((v, EXIT_OK));
            }
            let rho: Character = character.as_deref().unwrap_or_default().parse()?;
            let th = TwistedHomology::new(&p);
            let h1 = th.h1_dim(&rho)?;
            let identity = th.in_identity_component(&rho)?;
            let member = h1 >= *depth && (identity || !restricted);
            let v = json!({
                "character": rho,
                "depth": depth,
                "restricted": restricted,
                "h1_dim": h1,
                "identity_component": identity,
                "member": member,
            });
            Ok((v, EXIT_OK))
        }
        Command::Nilpotence { module } => {
            let m = FinDimLaurentModule::from_json(&read(module)?)?;
            let r = is_nilpotent(&m);
            let mut v = serde_json::to_value(&r)?;
            let mut code = EXIT_OK;
            if r.nilpotent {
                let e = log_transport(&m)?.annihilator_exponent();
                code = status(e == r.exponent);
                v["transported_exponent"] = json!(e);
            }
            Ok((v, code))
        }
        Command::OracleCheck => {
            let checks = oracle_checks(&budget)?;
            let passed = checks.iter().all(|c| c.passed);
            Ok((json!({ "passed": passed, "checks": checks }), status(passed)))
        }
    }
}

pub fn bb_dims(p: &LiePresentation, max_degree: usize, method: BbMethod, budget: &Budget) -> Result<GradedDims> {
    match method {
        BbMethod::Nabla => coker_dims_within(&nabla(p), max_degree, budget),
        BbMethod::NablaBar => coker_dims_within(&nabla_bar(p), max_degree, budget),
        BbMethod::Direct => {
            let top = max_degree + 2;
            budget.check("free Lie algebra basis", witt_number(p.dim_v() as u64, top as u64).saturating_mul(p.dim_v() as u64))?;
            let g = QuadraticLieAlgebra::new(p.clone(), top);
            Ok(GradedDims::new(0, (0..=max_degree).map(|q| g.bb_direct(q).dim).collect()))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> OracleCheck {
    OracleCheck { name: name.to_string(), passed, detail }
}

/// Cross-validation of independent computation paths on small fixed inputs.
pub fn oracle_checks(budget: &Budget) -> Result<Vec<OracleCheck>> {
    let mut out = Vec::new();

    let mut bad = Vec::new();
    for n in 1..=4 {
        for q in 1..=6 {
            if lyndon_basis(n, q).len() as u64 != witt_number(n as u64, q as u64) {
                bad.push((n, q));
            }
        }
    }
    out.push(check("lyndon count equals witt formula", bad.is_empty(), format!("mismatches {bad:?}")));

    let mut bad = Vec::new();
    for n in 2..=4 {
        for q in 0..=4 {
            if !chen_check(n, q, budget)?.matches {
                bad.push((n, q));
            }
        }
    }
    out.push(check("coker δ₃ equals closed form and Weyl dimension", bad.is_empty(), format!("mismatches {bad:?}")));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut bad = Vec::new();
    for k in 0..12 {
        let p = random_presentation(&mut rng, 4, 4);
        let a = bb_dims(&p, 3, BbMethod::Nabla, budget)?;
        let b = bb_dims(&p, 3, BbMethod::NablaBar, budget)?;
        let c = bb_dims(&p, 3, BbMethod::Direct, budget)?;
        if a != b || b != c {
            bad.push(k);
        }
    }
    out.push(check("nabla, nabla-bar and direct dimensions agree", bad.is_empty(), format!("failing samples {bad:?}")));

    let mut bad = Vec::new();
    for k in 0..12 {
        let p = random_presentation(&mut rng, 3, 3);
        let c = truncated_cokernel(&nabla_bar(&p), 3);
        let m = laurent_module_of(&c)?;
        let back = exp_transport(&log_transport(&m)?)?;
        if back != m || !annihilator_exponent_match(&m, &c.dims)?.holds() {
            bad.push(k);
        }
    }
    out.push(check("annihilator exponents agree and log/exp round-trips", bad.is_empty(), format!("failing samples {bad:?}")));

    let mut bad = 0;
    for _ in 0..50 {
        let w = random_word(&mut rng, 3, 16);
        let mut lhs = GroupRingElement::zero();
        for j in 0..3 {
            let xj = GroupRingElement::from_word(&[j as i32 + 1]).sub(&GroupRingElement::one());
            lhs = lhs.add(&fox_derivative(&w, j).mul(&xj));
        }
        if lhs != GroupRingElement::from_word(&w).sub(&GroupRingElement::one()) {
            bad += 1;
        }
    }
    out.push(check("fox fundamental identity", bad == 0, format!("{bad} failing words")));

    let f3 = TwistedHomology::new(&GroupPresentation::free(3));
    let z2 = GroupPresentation::free_abelian(2);
    let rho = Character::rational(&[Rational::new(2, 3), Rational::from_integer(-1), Rational::from_integer(5)])?;
    let sweep = torsion_sweep_within(&z2, 3, 1, false, budget)?;
    let ok = f3.h1_dim(&rho)? == 2 && sweep == vec![Character::trivial(2)];
    out.push(check("characteristic varieties of F_3 and Z^2", ok, format!("Z^2 sweep found {}", sweep.len())));

    let data = JohnsonData::new(3, budget)?;
    let d = decompose_with(&data)?;
    let dims: Vec<usize> = d.summands.iter().map(|s| s.dim).collect();
    let ok = dims == [0, 90, 1] && d.summands[1].weyl_dim == Some(90);
    out.push(check("genus 3 decomposition of ∧²V", ok, format!("{dims:?}")));
    Ok(out)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn to_csv(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut s = String::from("key,value\n");
    for (k, x) in rows {
        s.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&x)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("alexinv").chain(args.iter().copied()))
    }

    fn parse(o: &Outcome) -> Value {
        serde_json::from_str(&o.stdout).unwrap()
    }

    fn file(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn witt_and_chen() {
        let o = go(&["witt", "-n", "2", "-q", "4"]);
        assert_eq!(o.code, 0);
        assert_eq!(parse(&o)["dim"], 3);
        let o = go(&["chen", "-n", "2", "-q", "3"]);
        let v = parse(&o);
        assert_eq!((v["closed_form"].as_u64(), v["computed"].as_u64(), v["match"].as_bool()), (Some(4), Some(4), Some(true)));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(go(&["frobnicate"]).code, 2);
        assert_eq!(go(&["witt", "-n", "2"]).code, 2);
        assert_eq!(go(&["cv", "--presentation", "x.json"]).code, 2);
        assert_eq!(go(&["bb", "--presentation", "/nonexistent", "--max-degree", "1"]).code, 2);
        assert_eq!(go(&["--help"]).code, 0);
    }

    #[test]
    fn budget_exit() {
        let o = go(&["johnson", "--genus", "5", "--max-degree", "0"]);
        assert_eq!(o.code, 3);
        assert_eq!(parse(&o)["error"], "budget_exceeded");
    }

    #[test]
    fn johnson_genus_three() {
        let o = go(&["johnson", "--genus", "3", "--max-degree", "0"]);
        assert_eq!(o.code, 0);
        let v = parse(&o);
        assert_eq!(v["coker_q"], json!([90]));
        assert_eq!(v["M"], json!([91]));
    }

    #[test]
    fn bb_methods() {
        let f = file(r#"{"dim_v":3,"relations":[[{"i":0,"j":1,"c":1}]]}"#);
        let path = f.path().to_str().unwrap();
        let dims: Vec<Value> = ["nabla", "nabla-bar", "direct"]
            .iter()
            .map(|m| parse(&go(&["bb", "--presentation", path, "--max-degree", "2", "--method", m]))["dims"].clone())
            .collect();
        assert_eq!(dims[0], dims[1]);
        assert_eq!(dims[1], dims[2]);
    }

    #[test]
    fn fox_and_cv() {
        let f = file(r#"{"generators":2,"relators":[[1,2,-1,-2]]}"#);
        let path = f.path().to_str().unwrap();
        let v = parse(&go(&["fox", "--presentation", path]));
        assert_eq!(v["betti_1"], 2);
        assert_eq!(v["alexander_matrix"][0][0], "-t2 + 1");
        let v = parse(&go(&["cv", "--presentation", path, "--character", "-1,1"]));
        assert_eq!(v["member"], false);
        let v = parse(&go(&["cv", "--presentation", path, "--torsion", "2"]));
        assert_eq!(v["characters"], json!([["1", "1"]]));
        let o = go(&["--csv", "cv", "--presentation", path, "--torsion", "2"]);
        assert!(o.stdout.starts_with("key,value\n"));
        assert!(o.stdout.contains("characters.0.1,1\n"));
    }

    #[test]
    fn nilpotence_command() {
        let f = file(r#"{"dim":2,"actions":[[[1,1],[0,1]]]}"#);
        let v = parse(&go(&["nilpotence", "--module", f.path().to_str().unwrap()]));
        assert_eq!((v["nilpotent"].as_bool(), v["exponent"].as_u64()), (Some(true), Some(2)));
        let f = file(r#"{"dim":1,"actions":[[[2]]]}"#);
        let v = parse(&go(&["nilpotence", "--module", f.path().to_str().unwrap()]));
        assert_eq!(v["exponent"], Value::Null);
    }
}
