//! Finite-dimensional modules with commuting actions: the nilpotence test
//! for Laurent modules and the log/exp change of rings to `Sym`-modules.

use serde::{Deserialize, Serialize};

use crate::alex_module::{vanishing_degree, TruncatedCokernel};
use crate::error::{Error, Result};
use crate::exact_linalg::{Rational, RationalMatrix, Subspace};
use crate::free_lie::GradedDims;

fn check_family(dim: usize, actions: &[RationalMatrix]) -> Result<()> {
    for a in actions {
        if a.rows() != dim || a.cols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: if a.rows() != dim { a.rows() } else { a.cols() } });
        }
    }
    for (i, a) in actions.iter().enumerate() {
        for b in &actions[i + 1..] {
            if a.mul(b) != b.mul(a) {
                return Err(Error::InvalidInput("actions do not commute".into()));
            }
        }
    }
    Ok(())
}

#[derive(Deserialize)]
struct RawModule {
    dim: usize,
    actions: Vec<Vec<Vec<Rational>>>,
}

#[derive(Serialize)]
struct RawModuleOut<'a> {
    dim: usize,
    actions: Vec<Vec<Vec<&'a Rational>>>,
}

fn parse_family(s: &str) -> Result<(usize, Vec<RationalMatrix>)> {
    let raw: RawModule = serde_json::from_str(s)?;
    let mut actions = Vec::with_capacity(raw.actions.len());
    for m in &raw.actions {
        if m.len() != raw.dim || m.iter().any(|r| r.len() != raw.dim) {
            return Err(Error::InvalidInput(format!("action matrices must be {0}×{0}", raw.dim)));
        }
        actions.push(RationalMatrix::from_dense(m));
    }
    Ok((raw.dim, actions))
}

fn family_json(dim: usize, actions: &[RationalMatrix]) -> String {
    let dense: Vec<Vec<Vec<Rational>>> = actions.iter().map(RationalMatrix::to_dense).collect();
    let out = RawModuleOut { dim, actions: dense.iter().map(|m| m.iter().map(|r| r.iter().collect()).collect()).collect() };
    serde_json::to_string(&out).expect("module serializes")
}

/// Module over `Q[t_1^{±1}, …, t_n^{±1}]`, `t_i` acting by `T_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FinDimLaurentModule {
    dim: usize,
    actions: Vec<RationalMatrix>,
}

impl FinDimLaurentModule {
    pub fn new(dim: usize, actions: Vec<RationalMatrix>) -> Result<Self> {
        check_family(dim, &actions)?;
        if actions.iter().any(|t| t.inverse().is_none()) {
            return Err(Error::InvalidInput("Laurent variables must act invertibly".into()));
        }
        Ok(FinDimLaurentModule { dim, actions })
    }

    /// JSON `{"dim": d, "actions": [[[row], …], …]}` with integer or `"p/q"` entries.
    pub fn from_json(s: &str) -> Result<Self> {
        let (dim, actions) = parse_family(s)?;
        FinDimLaurentModule::new(dim, actions)
    }

    pub fn to_json(&self) -> String {
        family_json(self.dim, &self.actions)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[RationalMatrix] {
        &self.actions
    }

    /// The operators `T_i - 1`, generating the augmentation ideal's action.
    pub fn augmentation_operators(&self) -> Vec<RationalMatrix> {
        let id = RationalMatrix::identity(self.dim);
        self.actions.iter().map(|t| t.sub(&id)).collect()
    }
}

/// Module over `Q[x_1, …, x_n]`, `x_i` acting by `X_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FinDimSymModule {
    dim: usize,
    actions: Vec<RationalMatrix>,
}

impl FinDimSymModule {
    pub fn new(dim: usize, actions: Vec<RationalMatrix>) -> Result<Self> {
        check_family(dim, &actions)?;
        Ok(FinDimSymModule { dim, actions })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let (dim, actions) = parse_family(s)?;
        FinDimSymModule::new(dim, actions)
    }

    pub fn to_json(&self) -> String {
        family_json(self.dim, &self.actions)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[RationalMatrix] {
        &self.actions
    }

    /// Least `q` with `𝔪^q M = 0`, where `𝔪 = (x_1, …, x_n)`.
    pub fn annihilator_exponent(&self) -> Option<usize> {
        ideal_filtration(self.dim, &self.actions).exponent
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotenceReport {
    pub nilpotent: bool,
    /// Least `q` with `I^q M = 0`.
    pub exponent: Option<usize>,
    /// `dim I^k M` for `k = 0, 1, …` until the filtration stabilizes.
    pub filtration_dims: Vec<usize>,
}

fn ideal_filtration(dim: usize, ops: &[RationalMatrix]) -> NilpotenceReport {
    let mut current: Vec<_> = (0..dim).map(crate::exact_linalg::SparseVec::unit).collect();
    let mut dims = vec![dim];
    loop {
        if current.is_empty() {
            return NilpotenceReport { nilpotent: true, exponent: Some(dims.len() - 1), filtration_dims: dims };
        }
        let next = Subspace::spanned_by(dim, ops.iter().flat_map(|a| current.iter().map(move |v| a.apply(v))).collect::<Vec<_>>().iter());
        if next.dim() == *dims.last().unwrap() {
            return NilpotenceReport { nilpotent: false, exponent: None, filtration_dims: dims };
        }
        dims.push(next.dim());
        current = next.basis();
    }
}

/// Whether the augmentation ideal acts nilpotently, with the least annihilating power.
pub fn is_nilpotent(m: &FinDimLaurentModule) -> NilpotenceReport {
    ideal_filtration(m.dim, &m.augmentation_operators())
}

/// `N^dim = 0`.
fn is_nilpotent_matrix(n: &RationalMatrix) -> bool {
    n.pow(n.rows() as u32).is_zero()
}

/// `X_i = log T_i`.
pub fn log_transport(m: &FinDimLaurentModule) -> Result<FinDimSymModule> {
    let mut out = Vec::with_capacity(m.actions.len());
    for n in m.augmentation_operators() {
        if !is_nilpotent_matrix(&n) {
            return Err(Error::NotUnipotent);
        }
        let mut x = RationalMatrix::zeros(m.dim, m.dim);
        let mut power = n.clone();
        let mut k = 1i64;
        while !power.is_zero() {
            let c = Rational::new(if k % 2 == 1 { 1 } else { -1 }, k);
            x = x.add(&power.scale(&c));
            power = power.mul(&n);
            k += 1;
        }
        out.push(x);
    }
    Ok(FinDimSymModule { dim: m.dim, actions: out })
}

/// `T_i = exp X_i`; the `X_i` must be nilpotent.
pub fn exp_transport(m: &FinDimSymModule) -> Result<FinDimLaurentModule> {
    let mut out = Vec::with_capacity(m.actions.len());
    for x in &m.actions {
        if !is_nilpotent_matrix(x) {
            return Err(Error::InvalidInput("exp needs nilpotent operators".into()));
        }
        let mut t = RationalMatrix::identity(m.dim);
        let mut power = x.clone();
        let mut fact = Rational::one();
        let mut k = 1i64;
        while !power.is_zero() {
            fact = &fact * &Rational::from_integer(k);
            t = t.add(&power.scale(&fact.recip()));
            power = power.mul(x);
            k += 1;
        }
        out.push(t);
    }
    Ok(FinDimLaurentModule { dim: m.dim, actions: out })
}

/// Outcome of comparing the annihilator exponent with the first vanishing degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ExponentMatch {
    Agree { exponent: usize },
    /// Neither side vanishes inside the computed range.
    VacuousAgreement { exponent: usize, last_degree: Option<usize> },
    Disagree { module_exponent: usize, vanishing_degree: Option<usize> },
}

impl ExponentMatch {
    pub fn holds(&self) -> bool {
        !matches!(self, ExponentMatch::Disagree { .. })
    }
}

/// Compares the least `q` with `I^q M = 0` to the least `q` with `dims[q] = 0`.
pub fn annihilator_exponent_match(m: &FinDimLaurentModule, dims: &GradedDims) -> Result<ExponentMatch> {
    let Some(e) = is_nilpotent(m).exponent else { return Err(Error::NotUnipotent) };
    if let Some(q) = vanishing_degree(dims)? {
        return Ok(if q == e {
            ExponentMatch::Agree { exponent: e }
        } else {
            ExponentMatch::Disagree { module_exponent: e, vanishing_degree: Some(q) }
        });
    }
    let last = dims.last_degree();
    match last {
        Some(l) if e <= l => Err(Error::Inconsistent(format!(
            "module is annihilated by I^{e} but dimensions do not vanish through degree {l}"
        ))),
        _ => Ok(ExponentMatch::VacuousAgreement { exponent: e, last_degree: last }),
    }
}

/// Laurent module `exp` of the degree-raising action on a truncated cokernel.
pub fn laurent_module_of(c: &TruncatedCokernel) -> Result<FinDimLaurentModule> {
    exp_transport(&FinDimSymModule::new(c.total_dim(), c.actions.clone())?)
}
